use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use suture_core::boundary_homology::{
    boundary_kernel, projections_and_verticals, verify_lagrangian,
};
use suture_core::exact_linalg::{dot, element_order, rank_over, AbelianGroupStructure};
use suture_core::floer_simplicity::{
    bundle_unknot_obstruction, check_extreme_classes, compare_tables, has_unit_leading_coefficient,
    is_bottommostly_simple, is_floer_simple, tower_homology, tower_matrix, BundleInput,
    BundleVerdict, KnotRankTable,
};
use suture_core::norm_calculus::{
    bottommost, check_h1h2_part1, check_h1h2_part2, check_successor_condition, stabilization_bound,
    validate_adjunction, validate_adjunction_with, BasicClassSet, HullMethod, NormOracle,
};
use suture_core::primitive_pair::{
    crt_lift, excluded_primes, normalize_torsion_free, search_primitive_pair, Branch, ResidueMethod,
};
use suture_core::surface_calculus::{classify_annulus, verify_lower_sub, SurfaceClass};
use suture_core::Field;

use crate::error::CliError;
use crate::input::{self, Obj};
use crate::report::{num, u64s_value, vec_value, vecs_value, Checks, Report};
use crate::verify;

#[derive(Debug, Clone)]
pub struct Options {
    pub strict: bool,
    pub fields: Vec<Field>,
    pub seed: u64,
}

/// Upper end of the independent stabilization sweep.
const SWEEP_LIMIT: u64 = 100_000;

fn set_value(b: &BasicClassSet) -> Value {
    Value::Array(b.classes().map(|c| vec_value(c)).collect())
}

fn btree_value(s: &BTreeSet<Vec<BigInt>>) -> Value {
    Value::Array(s.iter().map(|c| vec_value(c)).collect())
}

fn to_btree(b: &BasicClassSet) -> BTreeSet<Vec<BigInt>> {
    b.classes().cloned().collect()
}

fn group_value(g: &AbelianGroupStructure) -> Value {
    json!({
        "free_rank": num(g.free_rank),
        "torsion": vec_value(&g.torsion_coefficients),
        "display": g.to_string(),
    })
}

fn field_name(f: Field) -> String {
    match f {
        Field::Rationals => "Q".into(),
        Field::Prime(p) => p.to_string(),
    }
}

fn check_len(path: &str, v: &[BigInt], rank: usize) -> Result<(), CliError> {
    if v.len() != rank {
        return Err(CliError::Schema(format!(
            "{path}: expected {rank} entries, found {}",
            v.len()
        )));
    }
    Ok(())
}

pub fn lagrangian_check(root: &Obj<'_>, opts: &Options) -> Result<Report, CliError> {
    let p = input::presentation(root, opts.strict)?;
    let two_sided = p.plus_minus().is_ok();
    let n = p.boundary_dim();
    let mut per_field = Vec::new();
    let mut checks = Checks::new();
    let mut holds = true;
    for &field in &opts.fields {
        let name = field_name(field);
        let kernel = boundary_kernel(&p, field);
        let rep = verify_lagrangian(&kernel, &p)?;
        holds &= rep.is_lagrangian();
        checks.add(
            format!("{name}: basis vectors map to zero"),
            kernel
                .basis
                .iter()
                .all(|v| verify::vanishes_in_ambient(field, &p, &verify::image(&p, 0..n, v))),
        );
        checks.add(
            format!("{name}: basis is independent"),
            rank_over(field, &kernel.basis, n) == kernel.basis.len(),
        );
        checks.add(
            format!("{name}: dimension agrees with rank count"),
            kernel.basis.len() == verify::kernel_dimension(field, &p, 0..n),
        );
        let isotropic = kernel.basis.iter().all(|u| {
            kernel
                .basis
                .iter()
                .all(|v| verify::in_field_zero(field, &verify::omega(&p, u, v)))
        });
        checks.add(format!("{name}: isotropy agrees"), isotropic == rep.isotropic);

        let mut entry = Map::new();
        entry.insert("field".into(), json!(name));
        entry.insert("dimension".into(), num(rep.dimension));
        entry.insert("expected_dimension".into(), num(rep.expected_dimension));
        entry.insert("isotropic".into(), json!(rep.isotropic));
        entry.insert("half_dimensional".into(), json!(rep.half_dimensional));
        entry.insert("lagrangian".into(), json!(rep.is_lagrangian()));
        entry.insert("basis".into(), vecs_value(&kernel.basis));
        if two_sided {
            let v = projections_and_verticals(&p, field)?;
            holds &= v.holds();
            let (ip, im) = p.plus_minus()?;
            for (label, side, vertical, image) in [
                ("+", ip, &v.vertical_plus, &v.image_plus),
                ("-", im, &v.vertical_minus, &v.image_minus),
            ] {
                let range = p.block_range(side);
                let dim = range.len();
                let g = dim / 2;
                checks.add(
                    format!("{name}: V{label} vectors map to zero"),
                    vertical.iter().all(|x| {
                        verify::vanishes_in_ambient(field, &p, &verify::image(&p, range.clone(), x))
                    }),
                );
                checks.add(
                    format!("{name}: dim V{label} agrees with rank count"),
                    vertical.len() == verify::kernel_dimension(field, &p, range.clone()),
                );
                let pairs_vanish = vertical.iter().all(|x| {
                    image.iter().all(|y| {
                        let w: BigInt = (0..g)
                            .map(|i| &x[2 * i] * &y[2 * i + 1] - &x[2 * i + 1] * &y[2 * i])
                            .sum();
                        verify::in_field_zero(field, &w)
                    })
                });
                checks.add(format!("{name}: V{label} pairs trivially with im Pr{label}"), pairs_vanish);
                checks.add(
                    format!("{name}: dim V{label} + dim im Pr{label} = 2g"),
                    vertical.len() + image.len() == dim,
                );
            }
            entry.insert(
                "verticals".into(),
                json!({
                    "dim_plus": num(v.vertical_plus.len()),
                    "dim_minus": num(v.vertical_minus.len()),
                    "dims_equal": v.dims_equal(),
                    "orthogonal_plus": v.orthogonal_plus,
                    "orthogonal_minus": v.orthogonal_minus,
                    "vertical_plus": vecs_value(&v.vertical_plus),
                    "vertical_minus": vecs_value(&v.vertical_minus),
                    "image_plus": vecs_value(&v.image_plus),
                    "image_minus": vecs_value(&v.image_minus),
                }),
            );
        }
        per_field.push(Value::Object(entry));
    }
    let result = json!({
        "boundary_dim": num(n),
        "components": num(p.components().len()),
        "fields": per_field,
    });
    Ok(Report::new(Some(holds), result, checks))
}

fn method_name(m: ResidueMethod) -> &'static str {
    match m {
        ResidueMethod::Enumerated => "enumerated",
        ResidueMethod::Sampled => "sampled",
        ResidueMethod::Structured => "structured",
    }
}

pub fn find_primitive_pair(root: &Obj<'_>, opts: &Options) -> Result<Report, CliError> {
    let p = input::presentation(root, opts.strict)?;
    let s = search_primitive_pair(&p, opts.seed)?;
    let (ip, im) = p.plus_minus()?;
    let pair = &s.pair;

    let mut checks = Checks::new();
    checks.add("c+ is primitive", verify::gcd_all(&pair.c_plus).is_one());
    checks.add("c- is primitive", verify::gcd_all(&pair.c_minus).is_one());
    checks.add("multiplier is positive", verify::positive(&pair.multiplier));
    // stored blocks carry the sign, so the sum is ι+(c+) - ι-(c-)
    let plus = verify::image(&p, p.block_range(ip), &pair.c_plus);
    let minus = verify::image(&p, p.block_range(im), &pair.c_minus);
    let diff: Vec<BigInt> = plus
        .iter()
        .zip(&minus)
        .map(|(a, b)| &pair.multiplier * (a + b))
        .collect();
    checks.add(
        "m(ι+(c+) - ι-(c-)) vanishes in H_1(M)",
        element_order(&diff, p.relations()) == Some(BigInt::one()),
    );

    let kernel_element = match &s.kernel_element {
        None => Value::Null,
        Some(el) => {
            let free = normalize_torsion_free(&p);
            let n = free.boundary_dim();
            checks.add(
                "b lies in the rational kernel",
                verify::vanishes_in_ambient(Field::Rationals, &free, &verify::image(&free, 0..n, &el.b)),
            );
            let mut residues = Vec::new();
            for r in &el.residues {
                let q = BigInt::from(r.prime);
                for (label, side) in [("+", ip), ("-", im)] {
                    checks.add(
                        format!("b{label} is nonzero modulo {}", r.prime),
                        el.b[p.block_range(side)].iter().any(|x| !(x % &q).is_zero()),
                    );
                }
                residues.push(json!({
                    "prime": num(r.prime),
                    "residue": u64s_value(&r.residue),
                    "method": method_name(r.method),
                    "dim_plus": num(r.dim_plus),
                    "dim_minus": num(r.dim_minus),
                }));
            }
            json!({
                "b": vec_value(&el.b),
                "coefficients": vec_value(&el.coefficients),
                "kernel_basis": vecs_value(&el.kernel_basis),
                "residues": residues,
            })
        }
    };
    let result = json!({
        "c_plus": vec_value(&pair.c_plus),
        "c_minus": vec_value(&pair.c_minus),
        "multiplier": num(&pair.multiplier),
        "branch": match s.branch { Branch::Vertical => "vertical", Branch::Kernel => "kernel" },
        "upsilon": num(s.upsilon),
        "excluded_primes": u64s_value(&s.excluded.primes),
        "kernel_element": kernel_element,
    });
    Ok(Report::new(None, result, checks))
}

/// Primes up to this bound are checked for omissions.
const OMISSION_BOUND: u64 = 100;

pub fn excluded_primes_cmd(root: &Obj<'_>, opts: &Options) -> Result<Report, CliError> {
    let p = input::presentation(root, opts.strict)?;
    let e = excluded_primes(&p)?;
    let free = normalize_torsion_free(&p);
    let (ip, im) = free.plus_minus()?;
    let n = free.ambient_rank();
    let columns = |side: usize| -> Vec<Vec<BigInt>> {
        free.block_range(side).map(|j| free.inclusion().column(j)).collect()
    };
    let inclusion_drop = |q: u64| verify::rank_drops(&columns(ip), n, q) || verify::rank_drops(&columns(im), n, q);
    let kernel = boundary_kernel(&free, Field::Rationals).basis;
    let projection_drop = |q: u64| {
        [ip, im].iter().any(|&side| {
            let range = free.block_range(side);
            let proj: Vec<Vec<BigInt>> = kernel.iter().map(|v| v[range.clone()].to_vec()).collect();
            verify::rank_drops(&proj, range.len(), q)
        })
    };
    let mut checks = Checks::new();
    checks.add("all entries are prime", e.primes.iter().all(|&q| verify::is_small_prime(q)));
    checks.add(
        "inclusion primes show a rank drop",
        e.from_inclusions.iter().all(|&q| inclusion_drop(q)),
    );
    checks.add(
        "projection primes show a rank drop",
        e.from_projections.iter().all(|&q| projection_drop(q)),
    );
    checks.add(
        format!("no prime below {OMISSION_BOUND} is missing"),
        (2..OMISSION_BOUND)
            .filter(|&q| verify::is_small_prime(q) && !e.primes.contains(&q))
            .all(|q| !inclusion_drop(q) && !projection_drop(q)),
    );
    let result = json!({
        "primes": u64s_value(&e.primes),
        "from_inclusions": u64s_value(&e.from_inclusions),
        "from_projections": u64s_value(&e.from_projections),
    });
    Ok(Report::new(None, result, checks))
}

pub fn crt_lift_cmd(root: &Obj<'_>, _opts: &Options) -> Result<Report, CliError> {
    let primes_big = root.vector("primes")?;
    let primes: Vec<u64> = primes_big
        .iter()
        .map(|q| q.to_u64().ok_or_else(|| CliError::Schema(format!("primes: {q} is out of range"))))
        .collect::<Result<_, _>>()?;
    let residues = root.vectors("residues")?;
    let m = match root.opt_usize("m")? {
        Some(m) => m,
        None => residues.first().map(Vec::len).unwrap_or(0),
    };
    let x = crt_lift(&primes, &residues, m)?;
    let modulus: BigInt = primes.iter().map(|&q| BigInt::from(q)).product();
    let mut checks = Checks::new();
    checks.add(
        "entries lie in [0, P)",
        x.iter().all(|v| !v.is_negative() && v < &modulus),
    );
    checks.add(
        "every congruence holds",
        primes.iter().zip(&residues).all(|(&q, r)| {
            let q = BigInt::from(q);
            x.iter().zip(r).all(|(v, t)| ((v - t) % &q).is_zero())
        }),
    );
    let result = json!({ "modulus": num(&modulus), "lift": vec_value(&x) });
    Ok(Report::new(None, result, checks))
}

struct NormCase {
    norm: NormOracle,
    b: BasicClassSet,
}

fn norm_case(root: &Obj<'_>, opts: &Options) -> Result<NormCase, CliError> {
    let norm = input::norm(root, opts.strict)?;
    let b = input::basic_classes(root, norm.rank(), opts.strict)?;
    Ok(NormCase { norm, b })
}

fn class_vector(root: &Obj<'_>, key: &str, rank: usize) -> Result<Vec<BigInt>, CliError> {
    let v = root.vector(key)?;
    check_len(key, &v, rank)?;
    Ok(v)
}

fn require_consistent(c: &NormCase) -> Result<(), CliError> {
    let rep = validate_adjunction(&c.b, &c.norm)?;
    if let Some(bad) = rep.verdicts.iter().find(|v| !v.consistent) {
        return Err(CliError::Schema(format!(
            "basic_classes: class {:?} violates the adjunction inequality",
            bad.class.iter().map(ToString::to_string).collect::<Vec<_>>()
        )));
    }
    Ok(())
}

pub fn bottommost_cmd(root: &Obj<'_>, opts: &Options) -> Result<Report, CliError> {
    let c = norm_case(root, opts)?;
    let h = class_vector(root, "h", c.norm.rank())?;
    let chi = c.norm.chi_minus(&h)?;
    let bot = bottommost(&c.b, &c.norm, &h)?;
    let mut checks = Checks::new();
    checks.add("χ_-(h) recomputed", chi == verify::chi(c.norm.functionals(), &h));
    checks.add(
        "bottommost set recomputed",
        to_btree(&bot) == verify::bottom(c.b.classes(), c.norm.functionals(), &h),
    );
    let result = json!({
        "chi_minus": num(&chi),
        "maximizers": vecs_value(&c.norm.maximizers(&h)?),
        "bottommost": set_value(&bot),
    });
    Ok(Report::new(None, result, checks))
}

pub fn h1h2_check(root: &Obj<'_>, opts: &Options, part: u8) -> Result<Report, CliError> {
    let c = norm_case(root, opts)?;
    require_consistent(&c)?;
    let r = c.norm.rank();
    let h1 = class_vector(root, "h1", r)?;
    let h2 = class_vector(root, "h2", r)?;
    let phis = c.norm.functionals();
    let sum: Vec<BigInt> = h1.iter().zip(&h2).map(|(a, b)| a + b).collect();
    let b1 = verify::bottom(c.b.classes(), phis, &h1);
    let b2 = verify::bottom(c.b.classes(), phis, &h2);
    let bs = verify::bottom(c.b.classes(), phis, &sum);
    let additive = verify::chi(phis, &sum) == verify::chi(phis, &h1) + verify::chi(phis, &h2);
    let inter: BTreeSet<Vec<BigInt>> = b1.intersection(&b2).cloned().collect();
    let mut checks = Checks::new();
    match part {
        1 => {
            let rep = check_h1h2_part1(&c.b, &c.norm, &h1, &h2)?;
            checks.add("additivity recomputed", rep.additive == additive);
            checks.add("B_{h1+h2} recomputed", to_btree(&rep.bottom_of_sum) == bs);
            checks.add("B_{h1} ∩ B_{h2} recomputed", to_btree(&rep.intersection) == inter);
            let result = json!({
                "part": "1",
                "chi_h1": num(&rep.chi_h1),
                "chi_h2": num(&rep.chi_h2),
                "chi_sum": num(&rep.chi_sum),
                "additive": rep.additive,
                "bottom_of_sum": set_value(&rep.bottom_of_sum),
                "intersection": set_value(&rep.intersection),
                "sets_equal": rep.sets_equal,
            });
            if !rep.additive {
                return Ok(Report::not_applicable(result, checks));
            }
            Ok(Report::new(Some(rep.holds()), result, checks))
        }
        2 => {
            let rep = check_h1h2_part2(&c.b, &c.norm, &h1, &h2)?;
            let triple: BTreeSet<Vec<BigInt>> = inter.intersection(&bs).cloned().collect();
            checks.add("strictness recomputed", rep.strict == !additive);
            checks.add("triple intersection recomputed", to_btree(&rep.triple) == triple);
            let result = json!({
                "part": "2",
                "chi_h1": num(&rep.chi_h1),
                "chi_h2": num(&rep.chi_h2),
                "chi_sum": num(&rep.chi_sum),
                "strict": rep.strict,
                "triple": set_value(&rep.triple),
            });
            match rep.holds() {
                None => Ok(Report::not_applicable(result, checks)),
                Some(h) => Ok(Report::new(Some(h), result, checks)),
            }
        }
        _ => {
            let rep = stabilization_bound(&c.b, &c.norm, &h1, &h2)?;
            let m0 = rep.m0.to_u64().unwrap_or(u64::MAX);
            let top = m0.saturating_mul(3).min(m0.saturating_add(SWEEP_LIMIT));
            let reference = verify::chi(phis, &verify::combine(&BigInt::from(m0), &h1, &h2))
                - BigInt::from(m0) * verify::chi(phis, &h1);
            let mut nested = true;
            let mut linear = true;
            for m in m0..=top {
                let mb = BigInt::from(m);
                let v = verify::combine(&mb, &h1, &h2);
                nested &= verify::bottom(c.b.classes(), phis, &v).is_subset(&b1);
                linear &= verify::chi(phis, &v) - &mb * verify::chi(phis, &h1) == reference;
            }
            checks.add(format!("B_(m h1 + h2) ⊆ B_h1 for m in [{m0}, {top}]"), nested);
            checks.add(format!("χ_-(m h1 + h2) is linear for m in [{m0}, {top}]"), linear);
            let result = json!({
                "part": "3",
                "m0": num(&rep.m0),
                "linear_from": num(&rep.linear_from),
                "argmax_stable_from": num(&rep.argmax_stable_from),
                "slope": num(&rep.slope),
                "constant": num(&rep.constant),
                "exceptional": vec_value(&rep.exceptional),
                "bottom_h1": set_value(&rep.bottom_h1),
                "bottom_at_m0": set_value(&rep.bottom_at_m0),
                "window_verified": rep.window_verified,
            });
            Ok(Report::new(Some(rep.window_verified), result, checks))
        }
    }
}

pub fn successor_check(root: &Obj<'_>, opts: &Options) -> Result<Report, CliError> {
    let c = norm_case(root, opts)?;
    let r = c.norm.rank();
    let prev = class_vector(root, "g_prev", r)?;
    let next = class_vector(root, "g_next", r)?;
    let holds = check_successor_condition(&c.b, &c.norm, &prev, &next)?;
    let phis = c.norm.functionals();
    let bp = verify::bottom(c.b.classes(), phis, &prev);
    let bn = verify::bottom(c.b.classes(), phis, &next);
    let mut checks = Checks::new();
    checks.add("inclusion recomputed", holds == bn.is_subset(&bp));
    let result = json!({
        "holds": holds,
        "bottom_prev": btree_value(&bp),
        "bottom_next": btree_value(&bn),
    });
    Ok(Report::new(Some(holds), result, checks))
}

pub fn adjunction_check(root: &Obj<'_>, opts: &Options) -> Result<Report, CliError> {
    let c = norm_case(root, opts)?;
    let probes = root.get("probes").map(|v| input::vectors(v, "probes")).transpose()?;
    let rep = validate_adjunction_with(&c.b, &c.norm, probes.as_deref())?;
    let phis = c.norm.functionals();
    let mut checks = Checks::new();
    let mut classes = Vec::new();
    for v in &rep.verdicts {
        if let Some(w) = &v.weights {
            let total: num_rational::BigRational = w.iter().cloned().sum();
            let ok = total.is_one()
                && w.iter().all(|x| !x.is_negative())
                && (0..c.norm.rank()).all(|i| {
                    let s: num_rational::BigRational = w
                        .iter()
                        .zip(phis)
                        .map(|(x, f)| x * num_rational::BigRational::from_integer(f[i].clone()))
                        .sum();
                    s == num_rational::BigRational::from_integer(v.class[i].clone())
                });
            checks.add(format!("weights for {:?} form a convex combination", strs(&v.class)), ok);
        }
        if let Some(h) = &v.witness {
            checks.add(
                format!("witness for {:?} violates the bound", strs(&v.class)),
                dot(&v.class, h).abs() > verify::chi(phis, h),
            );
        }
        classes.push(json!({
            "class": vec_value(&v.class),
            "consistent": v.consistent,
            "weights": v.weights.as_ref().map(|w| Value::Array(w.iter().map(num).collect())),
            "witness": v.witness.as_ref().map(|h| vec_value(h)),
        }));
    }
    let result = json!({
        "method": match rep.method { HullMethod::Exact => "exact", HullMethod::Partial => "partial" },
        "consistent": rep.consistent(),
        "classes": classes,
    });
    Ok(Report::new(Some(rep.consistent()), result, checks))
}

fn strs(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn pushed_by_hand(k: &KnotRankTable) -> std::collections::BTreeMap<Vec<BigInt>, u64> {
    let mut out = std::collections::BTreeMap::new();
    let pb = k.pullback();
    for (xi, r) in k.entries() {
        let c: Vec<BigInt> = (0..pb.rows()).map(|i| dot(pb.row(i), xi)).collect();
        *out.entry(c).or_insert(0) += r;
    }
    out
}

pub fn floer_simple_check(root: &Obj<'_>, opts: &Options) -> Result<Report, CliError> {
    let t = input::ambient_table(root, opts.strict)?;
    let k = input::knot_table(root, opts.strict)?;
    let classes = compare_tables(&k, &t)?;
    let simple = is_floer_simple(&k, &t)?;
    let mut checks = Checks::new();
    let knot_total: u64 = k.entries().values().sum();
    let ambient_total: u64 = t.entries().values().sum();
    checks.add("totals recomputed", simple == (knot_total == ambient_total));
    let pushed = pushed_by_hand(&k);
    checks.add(
        "per-class ranks recomputed",
        classes.iter().all(|c| {
            pushed.get(&c.class).copied().unwrap_or(0) == c.knot
                && t.entries().get(&c.class).copied().unwrap_or(0) == c.ambient
                && c.knot >= c.ambient
        }),
    );
    let mut result = Map::new();
    result.insert("floer_simple".into(), json!(simple));
    result.insert("knot_total".into(), num(knot_total));
    result.insert("ambient_total".into(), num(ambient_total));
    result.insert(
        "classes".into(),
        Value::Array(
            classes
                .iter()
                .map(|c| json!({"class": vec_value(&c.class), "knot": num(c.knot), "ambient": num(c.ambient)}))
                .collect(),
        ),
    );
    let mut property = simple;
    if root.has("h") {
        let norm = input::norm(root, opts.strict)?;
        let h = class_vector(root, "h", t.rank())?;
        let bottom = is_bottommostly_simple(&k, &t, &norm, &h)?;
        let bound = -verify::chi(norm.functionals(), &h);
        checks.add(
            "bottommost comparison recomputed",
            bottom
                == classes
                    .iter()
                    .filter(|c| dot(&c.class, &h) <= bound)
                    .all(|c| c.knot == c.ambient),
        );
        result.insert("bottommostly_simple".into(), json!(bottom));
        property = bottom;
    }
    Ok(Report::new(Some(property), Value::Object(result), checks))
}

pub fn extreme_class_check(root: &Obj<'_>, opts: &Options) -> Result<Report, CliError> {
    let k = input::knot_table(root, opts.strict)?;
    let f = root.vector("f_class")?;
    let chi_f = root.int("chi_f")?;
    let rep = check_extreme_classes(&k, &f, &chi_f)?;
    let pairings: Vec<BigInt> = k.entries().keys().map(|xi| dot(xi, &f)).collect();
    let mu = k.meridian_pairing().cloned().unwrap_or_default();
    let mut checks = Checks::new();
    checks.add(
        "extremes recomputed",
        pairings.iter().min() == Some(&rep.min) && pairings.iter().max() == Some(&rep.max),
    );
    checks.add(
        "expected range recomputed",
        rep.expected_min == -chi_f.clone() && rep.expected_max == &chi_f + &mu + &mu,
    );
    let result = json!({
        "min": num(&rep.min),
        "max": num(&rep.max),
        "expected_min": num(&rep.expected_min),
        "expected_max": num(&rep.expected_max),
        "min_ok": rep.min_ok,
        "max_ok": rep.max_ok,
    });
    Ok(Report::new(Some(rep.holds()), result, checks))
}

/// `f` is indexed from `U^1`.
pub fn tower(f: &[BigInt], depth: usize) -> Result<Report, CliError> {
    if depth == 0 {
        return Err(CliError::Schema("depth must be positive".into()));
    }
    let rep = tower_homology(f, depth)?;
    let m = tower_matrix(f, depth);
    let mut checks = Checks::new();
    checks.add("kernel rank = columns - rank", rep.kernel_rank == m.cols() - m.rank());
    checks.add(
        "cokernel rank = rows - rank",
        rep.cokernel.free_rank == m.rows() - m.rank(),
    );
    checks.add(
        "Z tower iff f has a unit lowest coefficient",
        rep.hfplus_is_z == has_unit_leading_coefficient(f),
    );
    let window: Vec<Value> = rep
        .window
        .iter()
        .map(|w| {
            json!({
                "depth": num(w.depth),
                "kernel_rank": num(w.kernel_rank),
                "cokernel": group_value(&w.cokernel),
            })
        })
        .collect();
    let result = json!({
        "f": vec_value(f),
        "depth": num(rep.depth),
        "kernel_rank": num(rep.kernel_rank),
        "cokernel": group_value(&rep.cokernel),
        "window": window,
        "stable": rep.stable,
        "hfplus_is_z": rep.hfplus_is_z,
    });
    Ok(Report::new(Some(rep.hfplus_is_z), result, checks))
}

pub fn tower_from_file(root: &Obj<'_>) -> Result<Report, CliError> {
    let f = match (root.get("f"), root.get("polynomial")) {
        (Some(v), None) => input::vector(v, "f")?,
        (None, Some(v)) => {
            let coeffs = input::vector(v, "polynomial")?;
            if let Some(c) = coeffs.first().filter(|c| !c.is_zero()) {
                return Err(CliError::Schema(format!(
                    "polynomial: constant term must vanish, found {c}"
                )));
            }
            coeffs.into_iter().skip(1).collect()
        }
        _ => return Err(CliError::Schema("give exactly one of \"f\" and \"polynomial\"".into())),
    };
    let depth = match root.opt_usize("depth")? {
        Some(d) => d,
        None => default_depth(&f),
    };
    tower(&f, depth)
}

pub fn default_depth(f: &[BigInt]) -> usize {
    f.iter().rposition(|c| !c.is_zero()).map(|i| i + 2).unwrap_or(1)
}

pub fn bundle_obstruction(root: &Obj<'_>, _opts: &Options) -> Result<Report, CliError> {
    let input = BundleInput {
        chi_g: root.int("chi_g")?,
        n: root.int("n")?,
        chi_plus: root.int("chi_plus")?,
        chi_minus: root.int("chi_minus")?,
        chi_double: root.int("chi_double")?,
        closed_class: root.bool_or("closed_class", false)?,
        unique_bottommost: root.bool_or("unique_bottommost", true)?,
    };
    let rep = bundle_unknot_obstruction(&input)?;
    let two = BigInt::from(2);
    let total = &input.chi_plus + &input.chi_minus;
    let term = if !input.closed_class && total > input.chi_double {
        two.clone()
    } else {
        BigInt::zero()
    };
    let required = -&two * &input.n * &input.chi_g;
    let bound = -&input.chi_double - &term;
    let mut checks = Checks::new();
    checks.add("meridian term recomputed", rep.meridian_term == term);
    checks.add("required value recomputed", rep.required == required);
    checks.add("bound recomputed", rep.bound == bound);
    checks.add(
        "verdict recomputed",
        match rep.verdict {
            BundleVerdict::Inconclusive => !input.unique_bottommost,
            BundleVerdict::Contradiction => input.unique_bottommost && required > bound,
            BundleVerdict::Consistent => input.unique_bottommost && required <= bound,
        },
    );
    let result = json!({
        "lhs": num(&rep.lhs),
        "required": num(&rep.required),
        "bound": num(&rep.bound),
        "meridian_term": num(&rep.meridian_term),
        "verdict": match rep.verdict {
            BundleVerdict::Contradiction => "CONTRADICTION",
            BundleVerdict::Consistent => "CONSISTENT",
            BundleVerdict::Inconclusive => "INCONCLUSIVE",
        },
    });
    Ok(Report::new(None, result, checks))
}

pub fn annulus_type(root: &Obj<'_>, _opts: &Options) -> Result<Report, CliError> {
    let minus = root.vector("c_minus")?;
    let plus = root.vector("c_plus")?;
    let t = classify_annulus(&minus, &plus);
    let minus_sep = minus.iter().all(Zero::is_zero);
    let plus_sep = plus.iter().all(Zero::is_zero);
    let letter = |sep: bool| if sep { 'S' } else { 'N' };
    let mut checks = Checks::new();
    checks.add(
        "type recomputed",
        t.to_string() == format!("{}{}", letter(minus_sep), letter(plus_sep)),
    );
    let result = json!({
        "type": t.to_string(),
        "minus_separating": minus_sep,
        "plus_separating": plus_sep,
    });
    Ok(Report::new(None, result, checks))
}

fn surface_with_pairings(
    s: SurfaceClass,
    b: &BasicClassSet,
) -> Result<SurfaceClass, CliError> {
    if s.pairings.is_some() {
        Ok(s)
    } else {
        Ok(s.with_computed_pairings(b)?)
    }
}

pub fn lower_sub(root: &Obj<'_>, opts: &Options) -> Result<Report, CliError> {
    let s = input::surface(root, "s", opts.strict)?;
    let g = input::surface(root, "g", opts.strict)?;
    let classes_obj = root.object("basic_classes", &["classes"], opts.strict)?;
    let classes = classes_obj.vectors("classes")?;
    let rank = classes.first().map(Vec::len).unwrap_or(s.homology.len());
    let b = BasicClassSet::new(rank, classes)?;
    let s = surface_with_pairings(s, &b)?;
    let g = surface_with_pairings(g, &b)?;
    let threshold = suture_core::surface_calculus::lower_sub_threshold(&b, &s)?;
    let m = match root.opt_int("m")? {
        Some(m) => m
            .to_u64()
            .ok_or_else(|| CliError::Schema("m: expected a nonnegative integer".into()))?,
        None => threshold
            .to_u64()
            .ok_or_else(|| CliError::Schema("threshold exceeds 64 bits".into()))?,
    };
    let rep = verify_lower_sub(&b, &s, &g, m)?;

    let mb = BigInt::from(m);
    let chi_m = &s.euler + &mb * &g.euler;
    let mut lower_m = BTreeSet::new();
    let mut lower_g = BTreeSet::new();
    let mut gap = BigInt::zero();
    for a in b.classes() {
        let ps = s.pairing(a)?;
        let pg = g.pairing(a)?;
        gap = gap.max((&ps - &s.euler).abs());
        if &ps + &mb * &pg <= chi_m {
            lower_m.insert(a.clone());
        }
        if pg <= g.euler {
            lower_g.insert(a.clone());
        }
    }
    let mut checks = Checks::new();
    checks.add("threshold recomputed", rep.threshold == gap + 1);
    checks.add("sublevel set at m recomputed", to_btree(&rep.lower_at_m) == lower_m);
    checks.add("sublevel set at G recomputed", to_btree(&rep.lower_at_g) == lower_g);
    checks.add("inclusion recomputed", rep.holds == lower_m.is_subset(&lower_g));
    let result = json!({
        "m": num(rep.m),
        "threshold": num(&rep.threshold),
        "below_threshold": rep.below_threshold,
        "lower_at_m": set_value(&rep.lower_at_m),
        "lower_at_g": set_value(&rep.lower_at_g),
        "holds": rep.holds,
    });
    Ok(Report::new(Some(rep.holds), result, checks))
}
