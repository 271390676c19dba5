//! Reading case files: JSON with integers given either as numbers or as
//! decimal strings.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{Map, Value};

use suture_core::boundary_homology::{BoundaryComponent, BoundaryPresentation, Sign, SurfaceHomology};
use suture_core::exact_linalg::IntegerMatrix;
use suture_core::floer_simplicity::{KnotRankTable, SpincRankTable};
use suture_core::norm_calculus::{BasicClassSet, NormOracle};
use suture_core::surface_calculus::SurfaceClass;

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1";

pub fn parse_document(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Json {
        message: strip_position(&e.to_string()),
        line: e.line(),
        column: e.column(),
    })
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

/// A JSON object together with its path, for error messages and strict-mode
/// key checks.
pub struct Obj<'a> {
    map: &'a Map<String, Value>,
    path: String,
}

impl<'a> Obj<'a> {
    pub fn new(value: &'a Value, path: &str, allowed: &[&str], strict: bool) -> Result<Self, CliError> {
        let map = value
            .as_object()
            .ok_or_else(|| schema(path, "expected an object"))?;
        if strict {
            if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
                return Err(schema(path, &format!("unknown key \"{k}\"")));
            }
        }
        Ok(Self {
            map,
            path: path.to_string(),
        })
    }

    pub fn path(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    pub fn get(&self, key: &str) -> Option<&'a Value> {
        self.map.get(key).filter(|v| !v.is_null())
    }

    pub fn has(&self, key: &str) -> bool {
        self.get(key).is_some()
    }

    pub fn req(&self, key: &str) -> Result<&'a Value, CliError> {
        self.get(key)
            .ok_or_else(|| schema(&self.path(key), "missing required key"))
    }

    pub fn int(&self, key: &str) -> Result<BigInt, CliError> {
        int(self.req(key)?, &self.path(key))
    }

    pub fn opt_int(&self, key: &str) -> Result<Option<BigInt>, CliError> {
        self.get(key).map(|v| int(v, &self.path(key))).transpose()
    }

    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        usize_of(self.req(key)?, &self.path(key))
    }

    pub fn opt_usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.get(key).map(|v| usize_of(v, &self.path(key))).transpose()
    }

    pub fn vector(&self, key: &str) -> Result<Vec<BigInt>, CliError> {
        vector(self.req(key)?, &self.path(key))
    }

    pub fn vectors(&self, key: &str) -> Result<Vec<Vec<BigInt>>, CliError> {
        vectors(self.req(key)?, &self.path(key))
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(Value::Bool(b)) => Ok(*b),
            Some(_) => Err(schema(&self.path(key), "expected true or false")),
        }
    }

    pub fn object(&self, key: &str, allowed: &[&str], strict: bool) -> Result<Obj<'a>, CliError> {
        Obj::new(self.req(key)?, &self.path(key), allowed, strict)
    }
}

fn schema(path: &str, message: &str) -> CliError {
    CliError::Schema(if path.is_empty() {
        message.to_string()
    } else {
        format!("{path}: {message}")
    })
}

pub fn int(v: &Value, path: &str) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(schema(path, "expected an integer; write large integers as decimal strings"))
            }
        }
        Value::String(s) => BigInt::from_str(s.trim())
            .map_err(|_| schema(path, &format!("\"{s}\" is not a decimal integer"))),
        _ => Err(schema(path, "expected an integer")),
    }
}

fn usize_of(v: &Value, path: &str) -> Result<usize, CliError> {
    let n = int(v, path)?;
    usize::try_from(n).map_err(|_| schema(path, "expected a nonnegative machine-size integer"))
}

pub fn u64_of(v: &Value, path: &str) -> Result<u64, CliError> {
    let n = int(v, path)?;
    u64::try_from(n).map_err(|_| schema(path, "expected a nonnegative 64-bit integer"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

pub fn vector(v: &Value, path: &str) -> Result<Vec<BigInt>, CliError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| int(x, &format!("{path}[{i}]")))
        .collect()
}

pub fn vectors(v: &Value, path: &str) -> Result<Vec<Vec<BigInt>>, CliError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| vector(x, &format!("{path}[{i}]")))
        .collect()
}

/// Row-major matrix; `cols` fixes the width when there are no rows.
fn matrix(v: &Value, path: &str, cols: Option<usize>) -> Result<IntegerMatrix, CliError> {
    let rows = vectors(v, path)?;
    let width = cols.or_else(|| rows.first().map(Vec::len)).unwrap_or(0);
    IntegerMatrix::from_rows(rows, width).map_err(|e| schema(path, &e.to_string()))
}

pub fn check_version(root: &Obj<'_>, strict: bool) -> Result<(), CliError> {
    match root.get("version") {
        None if strict => Err(schema("version", "missing required key")),
        None => Ok(()),
        Some(v) => {
            let s = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            if s == SCHEMA_VERSION {
                Ok(())
            } else {
                Err(schema("version", &format!("unsupported schema version {s}")))
            }
        }
    }
}

const PRESENTATION_KEYS: &[&str] = &[
    "ambient_rank",
    "components",
    "inclusion",
    "relations",
    "iota_plus",
    "iota_minus",
];

/// Either `{ambient_rank, components, inclusion, relations?}` with the
/// inclusion blocks already multiplied by the component signs, or
/// `{iota_plus, iota_minus, relations?}` with unsigned maps.
pub fn presentation(root: &Obj<'_>, strict: bool) -> Result<BoundaryPresentation, CliError> {
    let p = root.object("presentation", PRESENTATION_KEYS, strict)?;
    let relations = match p.get("relations") {
        Some(v) => vectors(v, &p.path("relations"))?,
        None => Vec::new(),
    };
    if p.has("iota_plus") || p.has("iota_minus") {
        let plus = matrix(p.req("iota_plus")?, &p.path("iota_plus"), None)?;
        let minus = matrix(p.req("iota_minus")?, &p.path("iota_minus"), None)?;
        let two = BoundaryPresentation::two_sided(&plus, &minus)?;
        return Ok(BoundaryPresentation::with_relations(
            two.components().to_vec(),
            two.ambient_rank(),
            two.inclusion().clone(),
            relations,
        )?);
    }
    let ambient_rank = p.usize("ambient_rank")?;
    let comps = array(p.req("components")?, &p.path("components"))?;
    let mut components = Vec::with_capacity(comps.len());
    for (i, c) in comps.iter().enumerate() {
        let path = format!("{}[{i}]", p.path("components"));
        let c = Obj::new(c, &path, &["genus", "sign"], strict)?;
        let sign = c.int("sign")?;
        let sign = i64::try_from(&sign)
            .ok()
            .and_then(|s| Sign::from_i64(s).ok())
            .ok_or_else(|| schema(&c.path("sign"), "expected 1 or -1"))?;
        components.push(BoundaryComponent {
            surface: SurfaceHomology::new(c.usize("genus")?),
            sign,
        });
    }
    let width: usize = components.iter().map(|c| c.surface.dim()).sum();
    let inclusion = matrix(p.req("inclusion")?, &p.path("inclusion"), Some(width))?;
    if inclusion.rows() != ambient_rank && !(ambient_rank == 0 && inclusion.rows() == 0) {
        return Err(schema(
            &p.path("inclusion"),
            &format!("has {} rows, ambient_rank is {ambient_rank}", inclusion.rows()),
        ));
    }
    let inclusion = if ambient_rank == 0 {
        IntegerMatrix::zeros(0, width)
    } else {
        inclusion
    };
    Ok(BoundaryPresentation::with_relations(
        components,
        ambient_rank,
        inclusion,
        relations,
    )?)
}

pub fn norm(root: &Obj<'_>, strict: bool) -> Result<NormOracle, CliError> {
    let n = root.object("norm", &["rank", "functionals"], strict)?;
    Ok(NormOracle::new(n.usize("rank")?, n.vectors("functionals")?)?)
}

pub fn basic_classes(root: &Obj<'_>, rank: usize, strict: bool) -> Result<BasicClassSet, CliError> {
    let b = root.object("basic_classes", &["classes"], strict)?;
    Ok(BasicClassSet::new(rank, b.vectors("classes")?)?)
}

fn rank_entries(t: &Obj<'_>) -> Result<Vec<(Vec<BigInt>, u64)>, CliError> {
    let classes = t.vectors("classes")?;
    let ranks_v = array(t.req("ranks")?, &t.path("ranks"))?;
    if ranks_v.len() != classes.len() {
        return Err(schema(
            &t.path("ranks"),
            &format!("{} ranks for {} classes", ranks_v.len(), classes.len()),
        ));
    }
    let mut out = Vec::with_capacity(classes.len());
    for (i, (c, r)) in classes.into_iter().zip(ranks_v).enumerate() {
        out.push((c, u64_of(r, &format!("{}[{i}]", t.path("ranks")))?));
    }
    Ok(out)
}

pub fn ambient_table(root: &Obj<'_>, strict: bool) -> Result<SpincRankTable, CliError> {
    let t = root.object("ambient", &["rank", "classes", "ranks"], strict)?;
    Ok(SpincRankTable::new(t.usize("rank")?, rank_entries(&t)?)?)
}

pub fn knot_table(root: &Obj<'_>, strict: bool) -> Result<KnotRankTable, CliError> {
    let t = root.object("knot", &["rank", "classes", "ranks"], strict)?;
    let rank = t.usize("rank")?;
    let pullback = match root.get("pullback") {
        Some(v) => matrix(v, &root.path("pullback"), Some(rank))?,
        None => IntegerMatrix::zeros(0, rank),
    };
    let mut k = KnotRankTable::new(rank, rank_entries(&t)?, pullback)?;
    if let Some(v) = root.get("pushforward") {
        k = k.with_pushforward(matrix(v, &root.path("pushforward"), None)?)?;
    }
    if let Some(mu) = root.opt_int("meridian_pairing")? {
        k = k.with_meridian_pairing(mu)?;
    }
    Ok(k)
}

pub fn surface(root: &Obj<'_>, key: &str, strict: bool) -> Result<SurfaceClass, CliError> {
    let s = root.object(key, &["homology", "euler", "pairings"], strict)?;
    let homology = match s.get("homology") {
        Some(v) => vector(v, &s.path("homology"))?,
        None => Vec::new(),
    };
    let mut out = SurfaceClass::new(homology, s.int("euler")?);
    if let Some(list) = s.get("pairings") {
        let mut map = BTreeMap::new();
        for (i, item) in array(list, &s.path("pairings"))?.iter().enumerate() {
            let path = format!("{}[{i}]", s.path("pairings"));
            let item = Obj::new(item, &path, &["class", "value"], strict)?;
            map.insert(item.vector("class")?, item.int("value")?);
        }
        out = out.with_pairings(map);
    }
    Ok(out)
}

/// `"1,0,-2"` into integers.
pub fn parse_coefficient_list(s: &str) -> Result<Vec<BigInt>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            BigInt::from_str(t.trim())
                .map_err(|_| CliError::Schema(format!("--f: \"{t}\" is not an integer")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn integers_from_numbers_and_strings() {
        assert_eq!(int(&json!(-7), "x").unwrap(), BigInt::from(-7));
        assert_eq!(int(&json!(" 12 "), "x").unwrap(), BigInt::from(12));
        let huge = "123456789012345678901234567890";
        assert_eq!(int(&json!(huge), "x").unwrap().to_string(), huge);
        assert!(int(&json!(1.5), "x").is_err());
        assert!(int(&json!("1e3"), "x").is_err());
        assert!(int(&json!(true), "x").is_err());
    }

    #[test]
    fn malformed_documents_report_positions() {
        match parse_document("{\n  \"a\": [1,\n") {
            Err(CliError::Json { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_document(""), Err(CliError::Json { line: 1, column: 0, .. })));
    }

    #[test]
    fn strict_mode_rejects_unknown_keys() {
        let v = json!({"a": 1, "b": 2});
        assert!(Obj::new(&v, "", &["a"], false).is_ok());
        let err = Obj::new(&v, "", &["a"], true).err().unwrap();
        assert!(err.to_string().contains("\"b\""));
    }

    #[test]
    fn version_tag() {
        let ok = json!({"version": 1});
        let bad = json!({"version": "2"});
        let none = json!({});
        let obj = |v| Obj::new(v, "", &["version"], true).unwrap();
        assert!(check_version(&obj(&ok), true).is_ok());
        assert!(check_version(&obj(&bad), false).is_err());
        assert!(check_version(&obj(&none), false).is_ok());
        assert!(check_version(&obj(&none), true).is_err());
    }

    #[test]
    fn both_presentation_forms_agree() {
        let signed = json!({"presentation": {
            "ambient_rank": 2,
            "components": [{"genus": 1, "sign": 1}, {"genus": 1, "sign": -1}],
            "inclusion": [[2, 0, -1, 0], [0, 1, 0, -2]],
        }});
        let unsigned = json!({"presentation": {
            "iota_plus": [[2, 0], [0, 1]],
            "iota_minus": [[1, 0], [0, 2]],
        }});
        let root = |v| Obj::new(v, "", &["presentation"], true).unwrap();
        assert_eq!(
            presentation(&root(&signed), true).unwrap(),
            presentation(&root(&unsigned), true).unwrap()
        );
    }

    #[test]
    fn presentation_shape_errors() {
        let v = json!({"presentation": {
            "ambient_rank": 3,
            "components": [{"genus": 1, "sign": 1}],
            "inclusion": [[1, 0], [0, 1]],
        }});
        let root = Obj::new(&v, "", &["presentation"], true).unwrap();
        assert!(presentation(&root, true).unwrap_err().to_string().contains("ambient_rank"));
        let v = json!({"presentation": {
            "ambient_rank": 1,
            "components": [{"genus": 1, "sign": 0}],
            "inclusion": [[1, 0]],
        }});
        let root = Obj::new(&v, "", &["presentation"], true).unwrap();
        assert!(presentation(&root, true).is_err());
    }

    #[test]
    fn coefficient_lists() {
        assert_eq!(parse_coefficient_list("1, -2,0").unwrap(), vec![BigInt::from(1), BigInt::from(-2), BigInt::from(0)]);
        assert!(parse_coefficient_list("").unwrap().is_empty());
        assert!(parse_coefficient_list("1,x").is_err());
    }
}
