//! `lierealise` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification runs but fails, 2 on
//! invalid input (with a JSON error object on stderr).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lierealise::catalog::{self, CatalogParams};
use lierealise::expr::{self, Context};
use lierealise::jets::{self, ExplicitOde};
use lierealise::liealg::{structural_report, PairJson, TransitivePair};
use lierealise::realise::{
    lift_auto, lift_exp_polynomial, lift_polynomial, nilpotent_complement, realise,
    verify_realisation, ClosedFormCoefficient, Realisation,
};
use lierealise::vecfield::TruncatedVectorField;
use lierealise::Error;

const MAX_DEGREE_VAR: &str = "LIEREALISE_MAX_DEGREE";

#[derive(Parser)]
#[command(
    name = "lierealise",
    version,
    about = "Realise transitive Lie algebra pairs as formal vector fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Truncation degree D.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    degree: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum LiftMode {
    Auto,
    Polynomial,
    Exp,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the images of a pair's basis as truncated vector fields.
    Realise {
        /// Pair JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated basis names replacing the pair's complement.
        #[arg(long, value_delimiter = ',')]
        complement: Option<Vec<String>>,
        #[command(flatten)]
        common: Common,
    },
    /// Check a realisation against its defining properties.
    Verify {
        /// Realisation JSON, or a pair JSON to realise at --degree first.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Recognise coefficients as polynomials or exponential polynomials.
    Lift {
        /// Realisation JSON, or a pair JSON to realise at --degree first.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = LiftMode::Auto)]
        mode: LiftMode,
        /// Variable along which exponentials are sought in exp mode.
        #[arg(long)]
        var: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Prolong a planar field, e.g. "y*p", to jet order k.
    Prolong {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Point symmetries of an explicit ODE such as "y'' = 0".
    Symmetries {
        #[arg(long)]
        ode: String,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        ansatz_degree: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Browse and verify the tables of planar transitive algebras.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Structural summary of a pair.
    Report {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    Show {
        #[arg(long)]
        id: String,
        /// Parameters such as r=2 lambda=1/2 alphas=1:0,2:1.
        #[arg(long, num_args = 1..)]
        params: Vec<String>,
        /// Also write the abstract pair.
        #[arg(long)]
        pair: bool,
        #[command(flatten)]
        common: Common,
    },
    Verify {
        /// Entry id; all entries over the standard sweep when omitted.
        #[arg(long)]
        id: Option<String>,
        #[arg(long, num_args = 1..)]
        params: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
}

/// Failure modes of a run.
enum Failure {
    /// Invalid input: exit 2.
    Invalid { code: &'static str, message: String },
    /// A check ran and failed: exit 1, report already printed.
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid {
            code: e.code(),
            message: e.to_string(),
        }
    }
}

type Run = Result<String, Failure>;

fn invalid(code: &'static str, message: impl Into<String>) -> Failure {
    Failure::Invalid {
        code,
        message: message.into(),
    }
}

fn check_degree(d: u32) -> Result<u32, Failure> {
    if let Ok(cap) = std::env::var(MAX_DEGREE_VAR) {
        let cap: u32 = cap.trim().parse().map_err(|_| {
            invalid(
                "invalid_argument",
                format!("{MAX_DEGREE_VAR} must be a nonnegative integer"),
            )
        })?;
        if d > cap {
            return Err(invalid(
                "degree_limit",
                format!("degree {d} exceeds {MAX_DEGREE_VAR}={cap}"),
            ));
        }
    }
    Ok(d)
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => invalid(
            "file_not_found",
            format!("{}: no such file", path.display()),
        ),
        _ => invalid("io_error", format!("{}: {e}", path.display())),
    })
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    serde_json::from_str(&read_file(path)?)
        .map_err(|e| invalid("parse_error", format!("{}: {e}", path.display())))
}

fn read_pair(path: &Path) -> Result<TransitivePair, Failure> {
    let v = read_json(path)?;
    let j: PairJson =
        serde_json::from_value(v).map_err(|e| invalid("schema_violation", e.to_string()))?;
    Ok(j.to_pair()?)
}

/// A realisation file, or a pair file realised at `d`.
fn read_realisation(path: &Path, d: u32) -> Result<Realisation, Failure> {
    let v = read_json(path)?;
    if v.get("images").is_some() {
        check_degree(v.get("degree").and_then(Value::as_u64).unwrap_or(0) as u32)?;
        Ok(Realisation::from_json(&v.to_string())?)
    } else {
        let j: PairJson =
            serde_json::from_value(v).map_err(|e| invalid("schema_violation", e.to_string()))?;
        Ok(realise(&j.to_pair()?, check_degree(d)?)?)
    }
}

/// Pretty JSON with keys sorted.
fn to_json(v: &impl serde::Serialize) -> String {
    let v = serde_json::to_value(v).expect("serializable");
    serde_json::to_string_pretty(&v).expect("serializable")
}

fn field_text(v: &TruncatedVectorField) -> String {
    if v.n_vars() <= 3 {
        v.render_lie()
    } else {
        v.to_string()
    }
}

fn parse_params(items: &[String]) -> Result<CatalogParams, Failure> {
    let mut map = BTreeMap::new();
    for item in items {
        let (k, v) = item.split_once('=').ok_or_else(|| {
            invalid(
                "parameter_error",
                format!("expected key=value, got {item:?}"),
            )
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(CatalogParams::from_map(&map)?)
}

fn cmd_realise(input: &Path, complement: Option<Vec<String>>, c: &Common) -> Run {
    let d = check_degree(c.degree)?;
    let mut pair = read_pair(input)?;
    if let Some(names) = complement {
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let g = pair.algebra();
        let comp = names
            .iter()
            .map(|n| {
                g.index_of(n)
                    .map(|i| lierealise::linalg::unit_vec(g.dim(), i))
            })
            .collect::<lierealise::Result<Vec<_>>>()?;
        pair = TransitivePair::new(g.clone(), pair.isotropy().clone(), comp)?;
    }
    let r = realise(&pair, d)?;
    Ok(match c.format {
        Format::Json => r.to_json(),
        Format::Text => {
            let mut s = format!(
                "dim {}, codim {}, exact through degree {}\n",
                pair.algebra().dim(),
                pair.codim(),
                d
            );
            for (name, v) in r.basis_names().iter().zip(r.images()) {
                let _ = writeln!(s, "{name} -> {}", field_text(v));
            }
            let kernel: Vec<String> = r
                .kernel()
                .basis()
                .iter()
                .map(|v| pair.algebra().vector_name(v))
                .collect();
            let _ = write!(s, "kernel: [{}]", kernel.join(", "));
            s
        }
    })
}

fn cmd_verify(input: &Path, c: &Common) -> Run {
    let r = read_realisation(input, c.degree)?;
    let rep = verify_realisation(&r);
    let out = match c.format {
        Format::Json => to_json(&json!({ "passed": rep.passed(), "report": rep })),
        Format::Text => {
            let mut s = format!("checked through degree {}\n", rep.checked_degree);
            let yn = |b: bool| if b { "ok" } else { "FAILED" };
            let _ = writeln!(s, "homomorphism: {}", yn(rep.homomorphism_ok));
            for f in &rep.homomorphism_failures {
                let _ = writeln!(s, "  [{}, {}]: residual {}", f.lhs, f.rhs, f.residual);
            }
            let _ = writeln!(s, "isotropy: {}", yn(rep.isotropy_ok));
            let _ = writeln!(s, "transitive: {}", yn(rep.transitive));
            let _ = writeln!(
                s,
                "kernel: {} [{}]",
                yn(rep.kernel_ok),
                rep.kernel.join(", ")
            );
            let _ = write!(s, "{}", if rep.passed() { "PASS" } else { "FAIL" });
            s
        }
    };
    if rep.passed() {
        Ok(out)
    } else {
        println!("{out}");
        Err(Failure::Check)
    }
}

fn cmd_lift(input: &Path, mode: LiftMode, var: Option<String>, c: &Common) -> Run {
    let r = read_realisation(input, c.degree)?;
    let names = r.variable_names();
    let lifted: Vec<Vec<ClosedFormCoefficient>> = match mode {
        LiftMode::Auto => lift_auto(&r),
        LiftMode::Polynomial => lift_polynomial(&r),
        LiftMode::Exp => {
            let v = match var {
                None => 0,
                Some(v) => names.iter().position(|n| *n == v).ok_or_else(|| {
                    invalid("invalid_argument", format!("unknown variable {v:?}"))
                })?,
            };
            if names.is_empty() {
                return Err(invalid(
                    "invalid_argument",
                    "exp lifting needs at least one variable",
                ));
            }
            lift_exp_polynomial(&r, v)
        }
    };
    let mut images = BTreeMap::new();
    for (basis, per) in r.basis_names().iter().zip(&lifted) {
        let coeffs: BTreeMap<String, Value> = names
            .iter()
            .zip(per)
            .map(|(x, cf)| {
                let mut o = json!({
                    "status": cf.status.as_str(),
                    "closed_form": cf.render(&names),
                });
                if let Some(n) = &cf.note {
                    o["note"] = json!(n);
                }
                (x.clone(), o)
            })
            .collect();
        images.insert(basis.clone(), coeffs);
    }
    let all = lifted
        .iter()
        .flatten()
        .all(ClosedFormCoefficient::is_certified);
    Ok(match c.format {
        Format::Json => to_json(&json!({
            "degree": r.trunc_degree(),
            "nilpotent_complement": nilpotent_complement(r.pair()),
            "all_certified": all,
            "images": images,
        })),
        Format::Text => {
            let mut s = String::new();
            for (basis, per) in r.basis_names().iter().zip(&lifted) {
                for (x, cf) in names.iter().zip(per) {
                    let _ = writeln!(
                        s,
                        "{basis} d/d{x}: {} [{}]",
                        cf.render(&names),
                        cf.status.as_str()
                    );
                }
            }
            let _ = write!(s, "all certified: {all}");
            s
        }
    })
}

fn cmd_prolong(field: &str, order: usize, c: &Common) -> Run {
    let d = check_degree(c.degree)?;
    let ctx = Context::new(vec!["x".into(), "y".into()], d);
    let v = expr::parse_field(field, &ctx)?;
    let pr = jets::prolong(&v, order)?;
    let rows: Vec<(String, String)> = (1..pr.table.len())
        .map(|i| (format!("X({})", jets::jet_name(i)), pr.table[i].render()))
        .collect();
    Ok(match c.format {
        Format::Json => to_json(&json!({
            "field": v.render_lie(),
            "degree": d,
            "q": pr.q.render(),
            "prolongation": rows.iter().cloned().collect::<BTreeMap<_, _>>(),
        })),
        Format::Text => {
            let mut s = format!("X = {}\nQ = {}\n", v.render_lie(), pr.q.render());
            for (k, val) in &rows {
                let _ = writeln!(s, "{k} = {val}");
            }
            s.trim_end().to_string()
        }
    })
}

fn cmd_symmetries(ode: &str, ansatz: u32, c: &Common) -> Run {
    let d = check_degree(c.degree.max(ansatz))?;
    let ode = ExplicitOde::parse(ode, d)?;
    let rep = jets::symmetries(&ode, ansatz)?;
    let basis: Vec<String> = rep
        .solutions
        .iter()
        .map(TruncatedVectorField::render_lie)
        .collect();
    Ok(match c.format {
        Format::Json => to_json(&json!({ "report": rep, "basis": basis })),
        Format::Text => {
            let mut s = format!(
                "{}: dimension {} at ansatz degree {} ({} at {}; {})\n",
                rep.ode,
                rep.dimension,
                rep.ansatz_degree,
                rep.dimension_next,
                rep.ansatz_degree + 1,
                if rep.stabilized {
                    "stabilized"
                } else {
                    "not stabilized"
                }
            );
            for b in &basis {
                let _ = writeln!(s, "  {b}");
            }
            s.trim_end().to_string()
        }
    })
}

fn cmd_catalog(action: CatalogAction) -> Run {
    match action {
        CatalogAction::List { format } => {
            let list = catalog::entries();
            Ok(match format {
                Format::Json => to_json(&list),
                Format::Text => list
                    .iter()
                    .map(|e| {
                        let params = if e.params.is_empty() {
                            String::new()
                        } else {
                            format!(" [{}]", e.params.join(", "))
                        };
                        format!(
                            "{:<16} {:<10} {}{params}",
                            e.id,
                            e.label,
                            e.generators.len()
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n"),
            })
        }
        CatalogAction::Show {
            id,
            params,
            pair,
            common,
        } => {
            let d = check_degree(common.degree)?;
            let e = catalog::entry(&id)?;
            let p = parse_params(&params)?.with_defaults(e);
            let inst = catalog::instantiate(&id, &p, d)?;
            let fields: Vec<String> = inst
                .fields_at(d)
                .iter()
                .map(TruncatedVectorField::render_lie)
                .collect();
            Ok(match common.format {
                Format::Json => {
                    let mut o = json!({
                        "entry": e,
                        "params": p.render(e),
                        "degree": d,
                        "generators": inst.names,
                        "fields": fields,
                        "isotropy_dim": inst.pair.isotropy().dim(),
                    });
                    if pair {
                        o["pair"] = serde_json::to_value(PairJson::from_pair(&inst.pair))
                            .expect("serializable");
                    }
                    to_json(&o)
                }
                Format::Text => {
                    let mut s =
                        format!("{} type {} {} {}\n", e.id, e.type_tag, e.label, p.render(e));
                    let _ = writeln!(s, "<{}>", inst.names.join(", "));
                    let _ = write!(
                        s,
                        "dim {}, isotropy dim {}",
                        inst.algebra.dim(),
                        inst.pair.isotropy().dim()
                    );
                    if let Some(x) = &e.cross_ref {
                        let _ = write!(s, "\nsee {}: {}", x.id, x.note);
                    }
                    if pair {
                        let _ = write!(s, "\n{}", inst.pair.to_json());
                    }
                    s
                }
            })
        }
        CatalogAction::Verify { id, params, common } => {
            let d = check_degree(common.degree)?;
            let reports = match id {
                Some(id) => {
                    let p = parse_params(&params)?;
                    vec![catalog::verify_entry(&id, &p, d)?]
                }
                None => catalog::entries()
                    .iter()
                    .flat_map(|e| {
                        catalog::sweep(e)
                            .into_iter()
                            .map(move |p| catalog::verify_entry_def(e, &p, d))
                    })
                    .collect(),
            };
            let passed = reports.iter().all(catalog::EntryReport::passed);
            let out = match common.format {
                Format::Json => to_json(&json!({ "passed": passed, "entries": reports })),
                Format::Text => {
                    let mut s = String::new();
                    for r in &reports {
                        let _ = writeln!(
                            s,
                            "{} {} {}{}",
                            if r.passed() { "PASS" } else { "FAIL" },
                            r.id,
                            r.params,
                            r.error
                                .as_ref()
                                .map(|e| format!(": {e}"))
                                .unwrap_or_default()
                        );
                    }
                    s.trim_end().to_string()
                }
            };
            if passed {
                Ok(out)
            } else {
                println!("{out}");
                Err(Failure::Check)
            }
        }
    }
}

fn cmd_report(input: &Path, c: &Common) -> Run {
    let pair = read_pair(input)?;
    let g = pair.algebra();
    let s = structural_report(g);
    let kernel: Vec<String> = pair
        .largest_ideal()
        .basis()
        .iter()
        .map(|v| g.vector_name(v))
        .collect();
    let o = json!({
        "dim": g.dim(),
        "codim": pair.codim(),
        "isotropy_dim": pair.isotropy().dim(),
        "effective": pair.is_effective(),
        "kernel": kernel,
        "nilpotent_complement": nilpotent_complement(&pair),
        "structure": s,
        "simple": lierealise::liealg::is_simple(g),
    });
    Ok(match c.format {
        Format::Json => to_json(&o),
        Format::Text => {
            let mut out = String::new();
            for (k, v) in o.as_object().expect("object") {
                let _ = writeln!(out, "{k}: {v}");
            }
            out.trim_end().to_string()
        }
    })
}

fn run(cli: Cli) -> Run {
    match cli.command {
        Command::Realise {
            input,
            complement,
            common,
        } => cmd_realise(&input, complement, &common),
        Command::Verify { input, common } => cmd_verify(&input, &common),
        Command::Lift {
            input,
            mode,
            var,
            common,
        } => cmd_lift(&input, mode, var, &common),
        Command::Prolong {
            field,
            order,
            common,
        } => cmd_prolong(&field, order, &common),
        Command::Symmetries {
            ode,
            ansatz_degree,
            common,
        } => cmd_symmetries(&ode, ansatz_degree, &common),
        Command::Catalog { action } => cmd_catalog(action),
        Command::Report { input, common } => cmd_report(&input, &common),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let message = e
                .to_string()
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ")
                .to_string();
            eprintln!(
                "{}",
                json!({ "error": { "code": "usage_error", "message": message } })
            );
            return ExitCode::from(2);
        }
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Invalid { code, message }) => {
            eprintln!(
                "{}",
                json!({ "error": { "code": code, "message": message } })
            );
            ExitCode::from(2)
        }
    }
}
