//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for I/O, usage or schema errors, 2 when the input is
//! well formed but fails a mathematical check.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::finite_group::{builtin_character_table, mckay_quiver, separated_mckay_quiver, CharacterTable, Quiver};
use crate::formats::{
    load_action, load_bundle, load_character_table, load_charge, load_quiver, load_rep, parse_fusion_data,
    render, ChargeJson, LoadError,
};
use crate::fusion_ring::{FusionError, FusionRing};
use crate::k0_module::{equivariance_residual, equivariant_charge_space, duality_check};
use crate::quiver_stability::{
    dim_vector, golden_ratio, hn_filtration, indecomposables, StabilityFunction, TypeAQuiver,
};

#[derive(Debug, Parser)]
#[command(name = "fusionstab", version, about = "Fusion rings, McKay quivers, equivariant charges and HN filtrations")]
pub struct Cli {
    /// Numerical tolerance for residuals and phase comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Write the main output to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check fusion ring axioms or print Frobenius-Perron dimensions.
    Fusion {
        #[command(subcommand)]
        action: FusionCommand,
    },
    /// McKay quiver of a group and a representation.
    Mckay {
        /// Builtin group name (C1..C12, S3, S4, D4, D5).
        #[arg(long, required_unless_present = "table", conflicts_with = "table")]
        builtin: Option<String>,
        /// Character table file.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Representation as irreducible labels joined by '+', e.g. "triv+sign".
        #[arg(long)]
        rep: String,
        /// Double the vertices into a bipartite quiver.
        #[arg(long)]
        separated: bool,
        /// Emit Graphviz DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Fusion-equivariant central charges.
    Charge {
        #[command(subcommand)]
        action: ChargeCommand,
    },
    /// Harder-Narasimhan filtration of a type-A representation.
    Hn {
        quiver: PathBuf,
        rep: PathBuf,
        charge: PathBuf,
        /// Also draw the charges of all indecomposables.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check the K0 identities of an induction/forgetful bundle.
    Duality { bundle: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum FusionCommand {
    Validate { file: PathBuf },
    Fpdim { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum ChargeCommand {
    /// Basis of the equivariant charge space of an action.
    Solve { action: PathBuf },
    /// Residual of a charge against an action.
    Check { charge: PathBuf, action: PathBuf },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String),
    Math(String),
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        if e.is_schema() {
            Failure::Input(e.to_string())
        } else {
            Failure::Math(e.to_string())
        }
    }
}

/// Main output and whether every check passed.
struct Report {
    text: String,
    ok: bool,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, ok: true }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Fusion { action } => cmd_fusion(action),
        Command::Mckay { builtin, table, rep, separated, dot } => {
            cmd_mckay(builtin.as_deref(), table.as_deref(), rep, *separated, *dot)
        }
        Command::Charge { action } => cmd_charge(action, cli.tol),
        Command::Hn { quiver, rep, charge, svg } => cmd_hn(quiver, rep, charge, svg.as_deref(), cli.tol),
        Command::Duality { bundle } => cmd_duality(bundle, cli.tol),
    };
    match result {
        Ok(report) => {
            let code = if report.ok { 0 } else { 2 };
            match &cli.output {
                Some(path) => match fs::write(path, &report.text) {
                    Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                    Err(e) => Outcome { code: 1, stdout: String::new(), stderr: format!("{}: {e}\n", path.display()) },
                },
                None => Outcome { code, stdout: report.text, stderr: String::new() },
            }
        }
        Err(Failure::Input(msg)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Math(msg)) => Outcome { code: 2, stdout: String::new(), stderr: format!("{msg}\n") },
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Ten decimals with trailing zeros trimmed, keeping at least one decimal.
pub fn format_dim(x: f64) -> String {
    let mut s = format!("{x:.10}");
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.push('0');
    }
    s
}

/// Rounds to 12 decimals so that printed phases do not show float noise.
fn tidy(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn cmd_fusion(action: &FusionCommand) -> Result<Report, Failure> {
    let (FusionCommand::Validate { file } | FusionCommand::Fpdim { file }) = action;
    let data = parse_fusion_data(&read(file)?).map_err(|e| Failure::Input(e.to_string()))?;
    let report = data.validate().map_err(|e| Failure::Input(e.to_string()))?;
    if !report.is_valid() {
        return Err(Failure::Math(format!("fusion axioms violated:\n{}", report.describe(&data.basis))));
    }
    let ring = FusionRing::try_from(data).map_err(LoadError::from)?;
    match action {
        FusionCommand::Validate { .. } => {
            Ok(Report::ok(format!("valid fusion ring of rank {}: {}\n", ring.rank(), ring.labels().join(", "))))
        }
        FusionCommand::Fpdim { .. } => {
            let dims = ring.fpdims().map_err(|e: FusionError| Failure::Math(e.to_string()))?;
            let parts: Vec<String> =
                ring.labels().iter().zip(dims).map(|(l, &d)| format!("{l}: {}", format_dim(d))).collect();
            Ok(Report::ok(format!("{}\n", parts.join(", "))))
        }
    }
}

fn parse_rep_selector(table: &CharacterTable, selector: &str) -> Result<Vec<u64>, Failure> {
    let mut v = vec![0u64; table.num_irreps()];
    for part in selector.split('+').map(str::trim) {
        let k = table.index_of(part).ok_or_else(|| {
            Failure::Input(format!("unknown irreducible {part:?}; known: {}", table.labels().join(", ")))
        })?;
        v[k] += 1;
    }
    Ok(v)
}

fn cmd_mckay(
    builtin: Option<&str>,
    table_path: Option<&Path>,
    rep: &str,
    separated: bool,
    dot: bool,
) -> Result<Report, Failure> {
    let (name, table) = match (builtin, table_path) {
        (Some(b), _) => (b.to_string(), builtin_character_table(b).map_err(LoadError::from)?),
        (None, Some(p)) => {
            let stem = p.file_stem().map_or("G".into(), |s| s.to_string_lossy().into_owned());
            (stem, load_character_table(&read(p)?)?)
        }
        (None, None) => return Err(Failure::Input("one of --builtin or --table is required".into())),
    };
    let report = table.validate().map_err(LoadError::from)?;
    if !report.is_valid() {
        return Err(Failure::Math(format!("invalid character table:\n{}", report.violations.join("\n"))));
    }
    let v = parse_rep_selector(&table, rep)?;
    let quiver = if separated { separated_mckay_quiver(&table, &v) } else { mckay_quiver(&table, &v) }
        .map_err(LoadError::from)?;
    if dot {
        let title = format!("{name} {rep}{}", if separated { " separated" } else { "" });
        return Ok(Report::ok(quiver.to_dot(&title)));
    }
    Ok(Report::ok(quiver_json(&quiver)))
}

fn quiver_json(q: &Quiver) -> String {
    let affine = q.affine_type().map(|types| types.iter().map(|t| t.to_string()).collect::<Vec<_>>());
    render(&json!({
        "vertices": q.vertices,
        "adj": q.adj,
        "arrows": q.num_arrows(),
        "affine_type": affine,
    }))
}

fn cmd_charge(action: &ChargeCommand, tol: f64) -> Result<Report, Failure> {
    match action {
        ChargeCommand::Solve { action } => {
            let a = load_action(&read(action)?)?;
            check_action(&a)?;
            let basis = equivariant_charge_space(&a).map_err(LoadError::from)?;
            let mut text = format!("dim = {}\n", basis.len());
            for z in &basis {
                let json = serde_json::to_string(&ChargeJson::from(z)).expect("serializable");
                writeln!(text, "{json}").unwrap();
            }
            Ok(Report::ok(text))
        }
        ChargeCommand::Check { charge, action } => {
            let z = load_charge(&read(charge)?)?;
            let a = load_action(&read(action)?)?;
            check_action(&a)?;
            if z.lattice != a.lattice() {
                return Err(Failure::Input(format!(
                    "charge lattice {:?} differs from action lattice {:?}",
                    z.lattice,
                    a.lattice()
                )));
            }
            let residual = equivariance_residual(&z, &a).map_err(LoadError::from)?;
            let ok = residual <= tol;
            Ok(Report { text: format!("max residual = {residual:.3e}\nequivariant: {ok}\n"), ok })
        }
    }
}

fn check_action(a: &crate::k0_module::K0ModuleAction) -> Result<(), Failure> {
    let report = a.validate();
    if report.is_valid() {
        Ok(())
    } else {
        Err(Failure::Math(format!("not a module:\n{report}")))
    }
}

fn cmd_hn(quiver: &Path, rep: &Path, charge: &Path, svg: Option<&Path>, tol: f64) -> Result<Report, Failure> {
    let q = load_quiver(&read(quiver)?)?;
    let r = load_rep(&read(rep)?, &q)?;
    let z = load_charge(&read(charge)?)?;
    let z = StabilityFunction::with_tol(z, &q, tol).map_err(LoadError::from)?;
    let hn = hn_filtration(&z, &r, &q);
    let pieces: Vec<_> = hn
        .iter()
        .map(|p| {
            json!({
                "phase": tidy(p.phase),
                "class": p.class(&q),
                "intervals": p.intervals.iter().map(|i| [i.a, i.b]).collect::<Vec<_>>(),
            })
        })
        .collect();
    if let Some(path) = svg {
        fs::write(path, charge_svg(&z, &q)).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(Report::ok(render(&json!({ "pieces": pieces }))))
}

/// Vectors from the origin to `Z(X)` for every indecomposable `X`, with stroke
/// class `short` for length 1, `long` for length φ and `other` otherwise.
pub fn charge_svg(z: &StabilityFunction, q: &TypeAQuiver) -> String {
    let ivs = indecomposables(q);
    let values: Vec<_> = ivs.iter().map(|&iv| z.z(&dim_vector(iv, q))).collect();
    let max = values.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-12);
    let (width, height, margin) = (480.0, 280.0, 40.0);
    let scale = (width / 2.0 - margin) / max;
    let (ox, oy) = (width / 2.0, height - margin);
    let phi = golden_ratio();
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}">"#).unwrap();
    s.push_str("<style>.short{stroke:blue}.long{stroke:red}.other{stroke:gray}line{stroke-width:2}text{font:10px sans-serif}</style>\n");
    writeln!(s, r#"<line x1="0" y1="{oy}" x2="{width}" y2="{oy}" style="stroke:#ccc;stroke-width:1"/>"#).unwrap();
    for (iv, v) in ivs.iter().zip(&values) {
        let class = if (v.norm() - 1.0).abs() < 1e-6 {
            "short"
        } else if (v.norm() - phi).abs() < 1e-6 {
            "long"
        } else {
            "other"
        };
        let (x, y) = (ox + scale * v.re, oy - scale * v.im);
        writeln!(s, r#"<line class="{class}" x1="{ox:.3}" y1="{oy:.3}" x2="{x:.3}" y2="{y:.3}"/>"#).unwrap();
        writeln!(s, r#"<text x="{:.3}" y="{:.3}">{iv}</text>"#, x + 4.0, y - 4.0).unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn cmd_duality(bundle: &Path, tol: f64) -> Result<Report, Failure> {
    let b = load_bundle(&read(bundle)?)?;
    let report = duality_check(&b, tol).map_err(LoadError::from)?;
    Ok(Report { text: format!("{report}\n"), ok: report.all_passed() })
}
