//! Command-line checks over JSON case files. Every report carries the
//! computed result together with an independent re-verification.

pub mod commands;
pub mod error;
pub mod input;
pub mod report;
pub mod verify;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use suture_core::Field;

use commands::Options;
use error::CliError;
use input::Obj;
use report::{error_envelope, render, EXIT_INVALID, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "suture", version, about = "Exact checks for boundary homology, Thurston-norm data and Floer rank tables")]
pub struct Cli {
    /// Reject unknown keys in case files.
    #[arg(long, global = true)]
    pub strict: bool,

    /// `Q`, a prime, or `all` (Q, 2, 3, 5, 7).
    #[arg(long, global = true)]
    pub field: Option<String>,

    /// Seed for randomized residue selection.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kernel of H_1(∂M) → H_1(M) is Lagrangian; vertical subspaces for two components.
    LagrangianCheck { input: PathBuf },
    /// Primitive classes c± with m(ι+(c+) - ι-(c-)) = 0.
    FindPrimitivePair { input: PathBuf },
    /// Primes excluded from the residue search.
    ExcludedPrimes { input: PathBuf },
    /// Coordinatewise Chinese remaindering.
    CrtLift { input: PathBuf },
    /// Bottommost basic classes for a class h.
    Bottommost { input: PathBuf },
    /// Sum and stabilization statements for h1, h2.
    H1h2Check {
        input: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        part: u8,
    },
    /// B_{g_next} ⊆ B_{g_prev}.
    SuccessorCheck { input: PathBuf },
    /// Basic classes lie in the dual norm ball.
    AdjunctionCheck { input: PathBuf },
    /// Floer simplicity, or bottommost simplicity when `h` is given.
    FloerSimpleCheck { input: PathBuf },
    /// Extreme pairings of the knot support with a Seifert class.
    ExtremeClassCheck { input: PathBuf },
    /// Homology of the truncated U-tower for f.
    Tower {
        input: Option<PathBuf>,
        /// Coefficients of f from U^1, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Unknot obstruction for a fibred class.
    BundleObstruction { input: PathBuf },
    /// NN / NS / SN / SS from the boundary classes of an annulus.
    AnnulusType { input: PathBuf },
    /// Sublevel-set inclusion after cut-and-paste.
    LowerSub { input: PathBuf },
    /// Run a manifest of cases.
    Batch { manifest: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::LagrangianCheck { .. } => "lagrangian-check",
            Command::FindPrimitivePair { .. } => "find-primitive-pair",
            Command::ExcludedPrimes { .. } => "excluded-primes",
            Command::CrtLift { .. } => "crt-lift",
            Command::Bottommost { .. } => "bottommost",
            Command::H1h2Check { .. } => "h1h2-check",
            Command::SuccessorCheck { .. } => "successor-check",
            Command::AdjunctionCheck { .. } => "adjunction-check",
            Command::FloerSimpleCheck { .. } => "floer-simple-check",
            Command::ExtremeClassCheck { .. } => "extreme-class-check",
            Command::Tower { .. } => "tower",
            Command::BundleObstruction { .. } => "bundle-obstruction",
            Command::AnnulusType { .. } => "annulus-type",
            Command::LowerSub { .. } => "lower-sub",
            Command::Batch { .. } => "batch",
        }
    }
}

/// Exit code and the text written to stdout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

const PRESENTATION_ROOT: &[&str] = &["version", "presentation"];
const NORM_ROOT: &[&str] = &["version", "norm", "basic_classes", "h", "h1", "h2", "g_prev", "g_next", "probes"];

pub fn parse_fields(spec: Option<&str>) -> Result<Vec<Field>, CliError> {
    match spec.map(str::trim) {
        None => Ok(vec![Field::Rationals]),
        Some(s) if s.eq_ignore_ascii_case("q") || s == "0" => Ok(vec![Field::Rationals]),
        Some(s) if s.eq_ignore_ascii_case("all") => Ok(vec![
            Field::Rationals,
            Field::Prime(2),
            Field::Prime(3),
            Field::Prime(5),
            Field::Prime(7),
        ]),
        Some(s) => {
            let p: u64 = s
                .parse()
                .map_err(|_| CliError::Schema(format!("--field: \"{s}\" is neither Q nor a prime")))?;
            Ok(vec![Field::prime(p)?])
        }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn with_root<F>(path: &Path, allowed: &[&str], opts: &Options, f: F) -> Result<report::Report, CliError>
where
    F: FnOnce(&Obj<'_>, &Options) -> Result<report::Report, CliError>,
{
    let text = read_input(path)?;
    let value = input::parse_document(&text)?;
    let root = Obj::new(&value, "", allowed, opts.strict)?;
    input::check_version(&root, opts.strict)?;
    f(&root, opts)
}

fn dispatch(cli: &Cli) -> Result<report::Report, CliError> {
    let opts = Options {
        strict: cli.strict,
        fields: parse_fields(cli.field.as_deref())?,
        seed: cli.seed,
    };
    use commands as c;
    match &cli.command {
        Command::LagrangianCheck { input } => with_root(input, PRESENTATION_ROOT, &opts, c::lagrangian_check),
        Command::FindPrimitivePair { input } => with_root(input, PRESENTATION_ROOT, &opts, c::find_primitive_pair),
        Command::ExcludedPrimes { input } => with_root(input, PRESENTATION_ROOT, &opts, c::excluded_primes_cmd),
        Command::CrtLift { input } => with_root(input, &["version", "primes", "residues", "m"], &opts, c::crt_lift_cmd),
        Command::Bottommost { input } => with_root(input, NORM_ROOT, &opts, c::bottommost_cmd),
        Command::H1h2Check { input, part } => {
            with_root(input, NORM_ROOT, &opts, |root, o| c::h1h2_check(root, o, *part))
        }
        Command::SuccessorCheck { input } => with_root(input, NORM_ROOT, &opts, c::successor_check),
        Command::AdjunctionCheck { input } => with_root(input, NORM_ROOT, &opts, c::adjunction_check),
        Command::FloerSimpleCheck { input } => with_root(input, FLOER_ROOT, &opts, c::floer_simple_check),
        Command::ExtremeClassCheck { input } => with_root(input, FLOER_ROOT, &opts, c::extreme_class_check),
        Command::Tower { input, f, depth } => match (input, f) {
            (Some(path), None) => with_root(path, &["version", "f", "polynomial", "depth"], &opts, |root, _| {
                c::tower_from_file(root)
            }),
            (None, Some(f)) => {
                let f = input::parse_coefficient_list(f)?;
                let depth = depth.unwrap_or_else(|| c::default_depth(&f));
                c::tower(&f, depth)
            }
            _ => Err(CliError::Schema("give either an input file or --f".into())),
        },
        Command::BundleObstruction { input } => with_root(
            input,
            &["version", "chi_g", "n", "chi_plus", "chi_minus", "chi_double", "closed_class", "unique_bottommost"],
            &opts,
            c::bundle_obstruction,
        ),
        Command::AnnulusType { input } => with_root(input, &["version", "c_minus", "c_plus"], &opts, c::annulus_type),
        Command::LowerSub { input } => {
            with_root(input, &["version", "basic_classes", "s", "g", "m"], &opts, c::lower_sub)
        }
        Command::Batch { .. } => unreachable!("batch is handled by run"),
    }
}

const FLOER_ROOT: &[&str] = &[
    "version",
    "ambient",
    "knot",
    "pullback",
    "pushforward",
    "meridian_pairing",
    "norm",
    "h",
    "f_class",
    "chi_f",
];

fn run_single(cli: &Cli) -> (i32, Value) {
    let name = cli.command.name();
    match dispatch(cli) {
        Ok(r) => (r.exit_code(), r.envelope(name)),
        Err(e) => (EXIT_INVALID, error_envelope(name, &e)),
    }
}

/// One case of a batch manifest: arguments after the program name, with
/// paths resolved against the manifest directory.
fn batch_case(base: &Path, case: &Value, index: usize) -> Result<(String, Vec<String>), CliError> {
    let path = format!("cases[{index}]");
    let obj = Obj::new(case, &path, &["name", "args", "expect_exit"], false)?;
    let name = match obj.get("name") {
        Some(Value::String(s)) => s.clone(),
        _ => format!("case-{index}"),
    };
    let args = obj
        .req("args")?
        .as_array()
        .ok_or_else(|| CliError::Schema(format!("{path}.args: expected an array of strings")))?;
    let mut out = vec!["suture".to_string()];
    for a in args {
        let s = a
            .as_str()
            .ok_or_else(|| CliError::Schema(format!("{path}.args: expected strings")))?;
        let candidate = base.join(s);
        if !s.starts_with('-') && candidate.is_file() {
            out.push(candidate.to_string_lossy().into_owned());
        } else {
            out.push(s.to_string());
        }
    }
    Ok((name, out))
}

fn run_batch(manifest: &Path, cli: &Cli) -> (i32, Value) {
    let prepared = (|| -> Result<Vec<(String, Vec<String>)>, CliError> {
        let text = read_input(manifest)?;
        let value = input::parse_document(&text)?;
        let root = Obj::new(&value, "", &["version", "cases"], cli.strict)?;
        let cases = root
            .req("cases")?
            .as_array()
            .ok_or_else(|| CliError::Schema("cases: expected an array".into()))?;
        let base = manifest.parent().unwrap_or(Path::new("."));
        cases.iter().enumerate().map(|(i, c)| batch_case(base, c, i)).collect()
    })();
    let prepared = match prepared {
        Ok(p) => p,
        Err(e) => return (EXIT_INVALID, error_envelope("batch", &e)),
    };
    let results: Vec<(i32, Value)> = std::thread::scope(|scope| {
        let handles: Vec<_> = prepared
            .iter()
            .map(|(_, args)| {
                scope.spawn(move || match Cli::try_parse_from(args) {
                    Ok(sub) if matches!(sub.command, Command::Batch { .. }) => (
                        EXIT_INVALID,
                        error_envelope("batch", &CliError::Schema("nested batch".into())),
                    ),
                    Ok(sub) => run_single(&sub),
                    Err(e) => (EXIT_INVALID, error_envelope("batch", &CliError::Schema(e.to_string()))),
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("case thread")).collect()
    });
    let code = results.iter().map(|(c, _)| *c).max().unwrap_or(EXIT_OK);
    let cases: Vec<Value> = prepared
        .iter()
        .zip(results)
        .map(|((name, _), (exit, report))| json!({"name": name, "exit": report::num(exit), "report": report}))
        .collect();
    let status = match code {
        EXIT_OK => "verified",
        EXIT_INVALID => "invalid",
        _ => "violated",
    };
    let out = json!({
        "command": "batch",
        "version": env!("CARGO_PKG_VERSION"),
        "status": status,
        "result": {"cases": cases},
    });
    (code, out)
}

pub fn run(cli: &Cli) -> Outcome {
    let (code, value) = match &cli.command {
        Command::Batch { manifest } => run_batch(manifest, cli),
        _ => run_single(cli),
    };
    Outcome {
        code,
        output: render(&value),
    }
}
