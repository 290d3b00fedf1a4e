use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use g2tw_core::bbw::{bbw_line, euler_char, gr_cohomology, run_chain, BranchSet, Chain, CohProfile, Registry, Space};
use g2tw_core::equivariant::{torsion_check, Tensor3};
use g2tw_core::octonion::{MulTable, Octonions, Subspace};
use g2tw_core::rep::{lambda2, tensor_decompose, w, weyl_dim, IrrepSum};
use serde::Serialize;
use serde_json::json;

use crate::claims::{verify, Manifest};
use crate::{CliError, Output, SEED_ENV};

#[derive(Debug, Parser)]
#[command(name = "g2tw", version, about = "Exact computations around G2, octonions and homogeneous bundles")]
pub struct Cli {
    /// Indented JSON, or a table for verify-paper.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Isotropic subspaces of the imaginary octonions.
    #[command(subcommand)]
    Octonion(OctonionCmd),
    /// Irreducible representations of G2.
    #[command(subcommand)]
    Rep(RepCmd),
    /// Cohomology of homogeneous bundles.
    #[command(subcommand)]
    Bbw(BbwCmd),
    /// Constraint propagation over exact sequences of bundles.
    #[command(subcommand)]
    Ledger(LedgerCmd),
    /// Admissibility of torsion tensors.
    #[command(subcommand)]
    Torsion(TorsionCmd),
    /// Replay the shipped claim manifest.
    VerifyPaper {
        /// Also write the JSON report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Multiplication table `{"triples": [[a,b,c], ...]}` replacing the standard one.
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleKind {
    Line,
    Sd,
    Asd,
    Assoc3,
}

#[derive(Debug, Subcommand)]
pub enum OctonionCmd {
    /// Classify an isotropic plane or 3-space given as `{"basis": [...]}`.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Seeded sample of an isotropic subspace.
    Sample {
        #[arg(long, value_enum)]
        kind: SampleKind,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
    },
    /// How the associative space of a line meets a real hyperplane.
    Trichotomy {
        #[arg(long)]
        line: PathBuf,
        #[arg(long)]
        hyperplane: PathBuf,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum RepCmd {
    /// Dimension of U_{m,n}.
    Dim { m: i64, n: i64 },
    /// Decomposition of U_{m1,n1} ⊗ U_{m2,n2}.
    Tensor { m1: i64, n1: i64, m2: i64, n2: i64 },
    /// Decomposition of Λ²U_{m,n}.
    Lambda2 { m: i64, n: i64 },
}

#[derive(Debug, Subcommand)]
pub enum BbwCmd {
    /// Cohomology of the line bundle with label (m, n) on the full flag variety.
    Line {
        #[arg(allow_negative_numbers = true)]
        m: i64,
        #[arg(allow_negative_numbers = true)]
        n: i64,
    },
    /// Possible cohomology profiles of a bundle expression.
    Bundle {
        #[arg(long, default_value = "Q")]
        space: String,
        #[arg(long)]
        expr: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum LedgerCmd {
    /// Run a chain file (defaults to the shipped chain).
    Run {
        #[arg(long)]
        chain: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum TorsionCmd {
    /// Check a tensor `{"dim": 7|8, "entries": [[a,b,c,re,im], ...]}`.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_subspace(path: &Path) -> Result<Subspace, CliError> {
    let s: Subspace = serde_json::from_str(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(Subspace::span(s.basis()))
}

fn render<T: Serialize>(value: &T, pretty: bool) -> String {
    let mut s = if pretty { serde_json::to_string_pretty(value) } else { serde_json::to_string(value) }
        .expect("output serializes");
    s.push('\n');
    s
}

fn pre(e: impl std::fmt::Display) -> CliError {
    CliError::Precondition(e.to_string())
}

#[derive(Serialize)]
struct BundleOutput {
    bundle: String,
    space: Space,
    rank: i64,
    euler: IrrepSum,
    singleton: bool,
    branches: Vec<CohProfile>,
}

fn bundle_output(space: Space, expr: &str) -> Result<BundleOutput, CliError> {
    let b = Registry::standard().bundle_str(space, expr).map_err(pre)?;
    let set: BranchSet = gr_cohomology(&b).map_err(pre)?;
    Ok(BundleOutput {
        bundle: b.name.clone(),
        space,
        rank: b.rank(),
        euler: euler_char(&b).map_err(pre)?,
        singleton: set.len() == 1,
        branches: set.into_iter().collect(),
    })
}

pub fn run(cli: Cli) -> Result<Output, CliError> {
    let pretty = cli.pretty;
    let o = Octonions::standard();
    let out = match cli.command {
        Command::Octonion(OctonionCmd::Classify { input }) => {
            let s = read_subspace(&input)?;
            match s.dim() {
                2 => render(&json!({ "class": o.classify_plane(&s).map_err(pre)? }), pretty),
                3 => render(&o.classify_3space(&s, false).map_err(pre)?, pretty),
                d => return Err(pre(format!("expected a plane or a 3-space, got dimension {d}"))),
            }
        }
        Command::Octonion(OctonionCmd::Sample { kind, seed }) => {
            let s = match kind {
                SampleKind::Line => o.line_sample(seed),
                SampleKind::Sd => o.sd_sample(seed),
                SampleKind::Asd => o.asd_sample(seed),
                SampleKind::Assoc3 => o.assoc3_sample(seed),
            }
            .map_err(pre)?;
            render(&s, pretty)
        }
        Command::Octonion(OctonionCmd::Trichotomy { line, hyperplane, seed }) => {
            let (l, v) = (read_subspace(&line)?, read_subspace(&hyperplane)?);
            render(&o.hyperplane_trichotomy(&l, &v, seed).map_err(pre)?, pretty)
        }
        Command::Rep(RepCmd::Dim { m, n }) => {
            render(&weyl_dim(w(m, n)).map_err(pre)?, pretty)
        }
        Command::Rep(RepCmd::Tensor { m1, n1, m2, n2 }) => {
            render(&tensor_decompose(w(m1, n1), w(m2, n2)).map_err(pre)?, pretty)
        }
        Command::Rep(RepCmd::Lambda2 { m, n }) => render(&lambda2(w(m, n)).map_err(pre)?, pretty),
        Command::Bbw(BbwCmd::Line { m, n }) => render(&bbw_line(w(m, n)), pretty),
        Command::Bbw(BbwCmd::Bundle { space, expr }) => {
            let space: Space = space.parse().map_err(pre)?;
            render(&bundle_output(space, &expr)?, pretty)
        }
        Command::Ledger(LedgerCmd::Run { chain }) => {
            let chain = match chain {
                Some(p) => Chain::from_json(&read(&p)?).map_err(|e| CliError::Input(e.to_string()))?,
                None => Chain::standard(),
            };
            render(&run_chain(&chain).map_err(pre)?, pretty)
        }
        Command::Torsion(TorsionCmd::Check { input, dim, tol }) => {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(pre(format!("tolerance must be a nonnegative number, got {tol}")));
            }
            let t = Tensor3::from_json(&read(&input)?).map_err(|e| CliError::Input(e.to_string()))?;
            render(&torsion_check(&t, dim, tol).map_err(pre)?, pretty)
        }
        Command::VerifyPaper { out, table } => {
            let table = match table {
                Some(p) => serde_json::from_str::<MulTable>(&read(&p)?).map_err(|e| CliError::Input(e.to_string()))?,
                None => MulTable::standard(),
            };
            let report = verify(&Manifest::shipped(), &table);
            if let Some(p) = out {
                fs::write(&p, render(&report, true)).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            }
            let stdout = if pretty { report.table() } else { render(&report, false) };
            return Ok(Output { stdout, code: if report.has_failures() { 1 } else { 0 } });
        }
    };
    Ok(Output::ok(out))
}
