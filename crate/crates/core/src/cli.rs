//! The `dualmod` command line.
//!
//! Every subcommand prints one JSON document on stdout. Exit codes: 0 on
//! success, 1 for I/O and schema errors, 2 for structural failures (the
//! instance is not dual-modular, infinite densities, ...), 3 for domain
//! errors such as a zero cost coordinate.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value as Json};

use crate::contracts::{self, ContractRow};
use crate::decomposition::{density_decomposition, DensityDecomposition};
use crate::divergence::{divergence, hockey_stick_sup_form, DivergenceKind};
use crate::error::{Error, Result};
use crate::instance::{
    complement_instance, perturb_strict, verify_dual_modularity, DualModularInstance, PropertyCheck,
};
use crate::io;
use crate::limits;
use crate::mask::{self, Mask};
use crate::permutation::Permutation;
use crate::rational::{self, Rational};
use crate::solver::{error_bounds, solve, Arithmetic, SolverConfig, Variant};

#[derive(Debug, Parser)]
#[command(name = "dualmod", version, about = "Dual-modular density decomposition toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check supermodularity, submodularity and (strict) monotonicity.
    Verify { instance: PathBuf },
    /// Exact density decomposition by brute force.
    Decompose {
        instance: PathBuf,
        /// Replace g by g(S) + eta |S| first.
        #[arg(long)]
        perturb: Option<String>,
    },
    /// Frank-Wolfe or Greedy++ approximation of the density vector.
    Solve {
        instance: PathBuf,
        /// quadratic, kl, eg or hs:<gamma>.
        #[arg(long, default_value = "quadratic")]
        kind: String,
        #[arg(long = "T", visible_alias = "iterations", default_value_t = 1000)]
        iterations: usize,
        /// fw or greedypp.
        #[arg(long, default_value = "fw")]
        variant: String,
        /// Write the per-iteration objective trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Density columns in the trace every this many iterations.
        #[arg(long, default_value_t = 10)]
        stride: usize,
        /// Starting permutation as comma-separated labels.
        #[arg(long)]
        init: Option<String>,
        /// Run in exact rational arithmetic.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        perturb: Option<String>,
    },
    /// Critical values, best responses and the optimal linear contract.
    Contracts {
        instance: PathBuf,
        /// Query a single contract parameter in [0, 1].
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Write the complementary instance (V; g-bar, f-bar).
    Complement {
        instance: PathBuf,
        /// Output file; stdout when absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Evaluate D(x || y) for explicit vectors.
    Divergence {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "quadratic")]
        kind: String,
        /// For hs:<gamma>, also report the maximizing subset.
        #[arg(long)]
        sup: bool,
    },
}

/// Brute-force limit, overridable through `DUALMOD_BRUTE_LIMIT`.
fn limit(default: usize) -> usize {
    std::env::var("DUALMOD_BRUTE_LIMIT")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(default)
        .min(mask::MAX_ELEMENTS)
}

fn r(v: &Rational) -> Json {
    Json::String(rational::format(v))
}

fn set(inst: &DualModularInstance, s: Mask) -> Json {
    io::subset_json(inst.ground(), s)
}

fn load(path: &PathBuf, perturb: Option<&str>) -> Result<DualModularInstance> {
    let inst = io::read_instance(path)?;
    match perturb {
        None => Ok(inst),
        Some(eta) => {
            let eta = rational::parse(eta)
                .map_err(|_| Error::InvalidArgument(format!("--perturb: not a rational: {eta:?}")))?;
            let g = perturb_strict(inst.g_spec(), eta)?;
            inst.with_functions(inst.f_spec().clone(), g)
        }
    }
}

fn check_json(inst: &DualModularInstance, c: &PropertyCheck) -> Json {
    json!({
        "holds": c.holds,
        "witness": c.witness.map(|(a, b)| json!([set(inst, a), set(inst, b)])),
    })
}

fn decomposition_json(inst: &DualModularInstance, dec: &DensityDecomposition) -> Json {
    let mut rho = Map::new();
    for (label, v) in inst.ground().labels().iter().zip(&dec.density_vector) {
        rho.insert(label.clone(), r(v));
    }
    json!({
        "parts": dec.parts.iter().map(|&p| set(inst, p)).collect::<Vec<_>>(),
        "densities": dec.densities.iter().map(r).collect::<Vec<_>>(),
        "part_rewards": dec.part_rewards.iter().map(r).collect::<Vec<_>>(),
        "part_costs": dec.part_costs.iter().map(r).collect::<Vec<_>>(),
        "density_vector": Json::Object(rho),
    })
}

fn row_json(inst: &DualModularInstance, row: &ContractRow) -> Json {
    json!({
        "alpha": r(&row.alpha),
        "best_response": set(inst, row.response),
        "agent_utility": r(&row.agent_utility),
        "principal_utility": r(&row.principal_utility),
    })
}

fn finite(v: f64) -> Json {
    serde_json::Number::from_f64(v).map_or(Json::Null, Json::Number)
}

enum Outcome {
    Ok(Json),
    /// Printed, but the command still fails with this exit code.
    Fail(Json, i32),
}

fn verify(path: &PathBuf) -> Result<Outcome> {
    let inst = io::read_instance(path)?;
    let report = verify_dual_modularity(&inst, limit(limits::VERIFY))?;
    let mut checks = Map::new();
    for (name, c) in report.checks() {
        checks.insert(name.to_string(), check_json(&inst, c));
    }
    let ok = report.is_dual_modular();
    let out = json!({
        "n": report.n,
        "dual_modular": ok,
        "weakly_dual_modular": report.is_weakly_dual_modular(),
        "checks": Json::Object(checks),
    });
    Ok(if ok { Outcome::Ok(out) } else { Outcome::Fail(out, 2) })
}

fn decompose(path: &PathBuf, perturb: Option<&str>) -> Result<Outcome> {
    let inst = load(path, perturb)?;
    let dec = density_decomposition(&inst, limit(limits::DECOMPOSE))?;
    Ok(Outcome::Ok(decomposition_json(&inst, &dec)))
}

#[allow(clippy::too_many_arguments)]
fn run_solver(
    path: &PathBuf,
    kind: &str,
    iterations: usize,
    variant: &str,
    trace: Option<&PathBuf>,
    stride: usize,
    init: Option<&str>,
    exact: bool,
    perturb: Option<&str>,
) -> Result<Outcome> {
    let inst = load(path, perturb)?;
    let kind: DivergenceKind = kind.parse()?;
    let variant: Variant = variant.parse()?;
    if stride == 0 {
        return Err(Error::InvalidArgument("--stride must be positive".into()));
    }
    let initial = match init {
        None => None,
        Some(spec) => {
            let order = spec
                .split(',')
                .map(|l| {
                    let l = l.trim();
                    inst.ground()
                        .index_of(l)
                        .ok_or_else(|| Error::InvalidArgument(format!("--init: unknown label {l:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Some(Permutation::new(order)?)
        }
    };
    let cfg = SolverConfig {
        variant,
        iterations,
        kind: kind.clone(),
        initial,
        arithmetic: if exact {
            Arithmetic::Rational
        } else {
            Arithmetic::Binary64
        },
        stride,
        ..Default::default()
    };
    let result = solve(&inst, &cfg)?;
    if let Some(p) = trace {
        let file = std::fs::File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
        result.write_csv(file, true)?;
    }
    let mut rho = Map::new();
    for (label, v) in inst.ground().labels().iter().zip(&result.final_rho) {
        rho.insert(label.clone(), finite(*v));
    }
    let mut out = Map::new();
    out.insert("variant".into(), json!(variant.to_string()));
    out.insert("kind".into(), json!(kind.name()));
    out.insert("iterations".into(), json!(iterations));
    out.insert("final_rho".into(), Json::Object(rho));
    out.insert(
        "final_x".into(),
        Json::Array(result.final_x.iter().map(|&v| finite(v)).collect()),
    );
    out.insert(
        "final_y".into(),
        Json::Array(result.final_y.iter().map(|&v| finite(v)).collect()),
    );
    if let Some(a) = &result.final_exact {
        out.insert(
            "final_exact_x".into(),
            json!(a.x.iter().map(rational::format).collect::<Vec<_>>()),
        );
        out.insert(
            "final_exact_y".into(),
            json!(a.y.iter().map(rational::format).collect::<Vec<_>>()),
        );
    }
    out.insert("phi".into(), finite(result.final_phi()));
    let bounds = if kind.is_strictly_convex() {
        let b = error_bounds(&inst, &kind, iterations)?;
        json!({
            "curvature_upper": finite(b.curvature_upper),
            "objective_gap_upper": finite(b.objective_gap_upper),
            "absolute_density_upper": finite(b.absolute_density_upper),
            "multiplicative_density_upper": b.multiplicative_density_upper.map(finite),
            "f_min": finite(b.f_min),
            "f_max": finite(b.f_max),
            "g_min": finite(b.g_min),
            "g_max": finite(b.g_max),
            "warnings": b.warnings,
        })
    } else {
        Json::Null
    };
    out.insert("error_bounds".into(), bounds);
    Ok(Outcome::Ok(Json::Object(out)))
}

fn contracts_cmd(path: &PathBuf, alpha: Option<&str>) -> Result<Outcome> {
    let inst = io::read_instance(path)?;
    let dec = density_decomposition(&inst, limit(limits::DECOMPOSE))?;
    if let Some(a) = alpha {
        let a = rational::parse(a).map_err(|_| Error::InvalidArgument(format!("--alpha: not a rational: {a:?}")))?;
        let row = contracts::query(&inst, &dec, &a)?;
        return Ok(Outcome::Ok(row_json(&inst, &row)));
    }
    let analysis = contracts::analyze(&inst, &dec)?;
    Ok(Outcome::Ok(json!({
        "densities": dec.densities.iter().map(r).collect::<Vec<_>>(),
        "critical_values": analysis.critical_values.iter().map(r).collect::<Vec<_>>(),
        "table": analysis.rows.iter().map(|row| row_json(&inst, row)).collect::<Vec<_>>(),
        "optimal": {
            "alpha": r(&analysis.optimal.alpha),
            "best_response": set(&inst, analysis.optimal.set),
            "principal_utility": r(&analysis.optimal.principal_utility),
        },
    })))
}

fn complement_cmd(path: &PathBuf, output: Option<&PathBuf>) -> Result<Option<Json>> {
    let inst = io::read_instance(path)?;
    let comp = complement_instance(&inst, limit(limits::VERIFY))?;
    match output {
        Some(p) => {
            let mut text = io::instance_to_string(&comp);
            text.push('\n');
            std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            Ok(None)
        }
        None => Ok(Some(io::instance_to_value(&comp))),
    }
}

fn divergence_cmd(x: &str, y: &str, kind: &str, sup: bool) -> Result<Outcome> {
    let x = io::parse_vector(x, "x")?;
    let y = io::parse_vector(y, "y")?;
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let kind: DivergenceKind = kind.parse()?;
    let value = divergence(&kind, &x, &y)?;
    let mut out = Map::new();
    out.insert("kind".into(), json!(kind.name()));
    out.insert(
        "value".into(),
        match value.exact() {
            Some(v) => r(v),
            None => finite(value.to_f64()),
        },
    );
    if sup {
        let DivergenceKind::HockeyStick(gamma) = &kind else {
            return Err(Error::InvalidArgument(
                "--sup needs a hockey-stick kind hs:<gamma>".into(),
            ));
        };
        let (v, s) = hockey_stick_sup_form(&x, &y, gamma, limit(limits::SUBSETS))?;
        out.insert("sup_value".into(), r(&v));
        out.insert("argmax".into(), json!(mask::elements(s).collect::<Vec<_>>()));
    }
    Ok(Outcome::Ok(Json::Object(out)))
}

fn dispatch(cmd: Command) -> Result<Option<Outcome>> {
    Ok(Some(match cmd {
        Command::Verify { instance } => verify(&instance)?,
        Command::Decompose { instance, perturb } => decompose(&instance, perturb.as_deref())?,
        Command::Solve {
            instance,
            kind,
            iterations,
            variant,
            trace,
            stride,
            init,
            exact,
            perturb,
        } => run_solver(
            &instance,
            &kind,
            iterations,
            &variant,
            trace.as_ref(),
            stride,
            init.as_deref(),
            exact,
            perturb.as_deref(),
        )?,
        Command::Contracts { instance, alpha } => contracts_cmd(&instance, alpha.as_deref())?,
        Command::Complement { instance, output } => match complement_cmd(&instance, output.as_ref())? {
            Some(v) => Outcome::Ok(v),
            None => return Ok(None),
        },
        Command::Divergence { x, y, kind, sup } => divergence_cmd(&x, &y, &kind, sup)?,
    }))
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let print = |out: &mut dyn Write, v: &Json| {
        let text = serde_json::to_string_pretty(v).expect("JSON values always serialize");
        let _ = writeln!(out, "{text}");
    };
    match dispatch(cli.command) {
        Ok(None) => 0,
        Ok(Some(Outcome::Ok(v))) => {
            print(out, &v);
            0
        }
        Ok(Some(Outcome::Fail(v, code))) => {
            print(out, &v);
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
