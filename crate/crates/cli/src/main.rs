//! `agconorm`: run conorm jobs, the example registry, Hermitian codes and
//! field tables from the command line.
//!
//! Exit status: 0 when every check passes, 1 when some check fails, 2 on
//! errors (bad input, construction failures).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use agconorm::agcode::LinearCode;
use agconorm::hermitian::Hermitian;
use agconorm::{job, registry, Field};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "agconorm", version, about = "AG-codes and their conorm lifts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a JSON job file and print the report.
    Run {
        job: PathBuf,
        /// Write the generator matrices of C and C' into this directory.
        #[arg(long)]
        emit_matrices: Option<PathBuf>,
    },
    /// Run a registry example, or `all`.
    Examples { name: String },
    /// The one-point Hermitian code H_a over GF(q^2).
    Hermitian {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: i64,
        #[arg(long, value_enum, default_value_t = Emit::Params)]
        emit: Emit,
    },
    /// Describe GF(p^k).
    Field {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Print addition and multiplication tables.
        #[arg(long)]
        table: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Matrix,
    Params,
}

type Outcome = Result<bool, String>;

fn print_json(v: &impl serde::Serialize) -> Result<(), String> {
    let text = serde_json::to_string_pretty(v).map_err(|e| e.to_string())?;
    print_text(&(text + "\n"))
}

/// Writes to stdout; a closed pipe is not an error.
fn print_text(s: &str) -> Result<(), String> {
    match std::io::stdout().lock().write_all(s.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.to_string()),
        _ => Ok(()),
    }
}

fn write_matrix(dir: &Path, name: &str, code: &LinearCode) -> Result<(), String> {
    let path = dir.join(name);
    fs::write(&path, code.matrix_text()).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(path: &Path, emit: Option<&Path>) -> Outcome {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let spec = job::parse_job(&text).map_err(|e| e.to_string())?;
    let (c, report) = job::run_job(&spec).map_err(|e| e.to_string())?;
    if let Some(dir) = emit {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        write_matrix(dir, "base.txt", &c.base)?;
        write_matrix(dir, "conorm.txt", &c.lifted)?;
    }
    print_json(&report)?;
    Ok(report.passed)
}

fn examples(name: &str) -> Outcome {
    let names: Vec<&str> = if name == "all" { registry::NAMES.to_vec() } else { vec![name] };
    let mut reports = Vec::new();
    for r in registry::run_examples(&names) {
        reports.push(r.map_err(|e| e.to_string())?);
    }
    for r in &reports {
        eprintln!("{} {} ({} checks)", if r.passed { "pass" } else { "FAIL" }, r.name, r.checks.len());
    }
    let passed = reports.iter().all(|r| r.passed);
    print_json(&reports)?;
    Ok(passed)
}

fn hermitian(q: u64, a: i64, emit: Emit) -> Outcome {
    let h = Hermitian::new(q).map_err(|e| e.to_string())?;
    if a < 0 {
        return Err(format!("index {a} is negative"));
    }
    let code = h.code(a).map_err(|e| e.to_string())?;
    match emit {
        Emit::Matrix => print_text(&code.matrix_text())?,
        Emit::Params => {
            let prov = code.provenance().expect("Hermitian codes carry provenance");
            print_json(&json!({
                "q": q,
                "a": a,
                "field": format!("GF({})", h.field().order()),
                "genus": h.genus(),
                "n": code.length(),
                "k": code.dimension(),
                "d": code.distance(),
                "level": prov.level(),
                "dual_index": h.dual_index(a).ok(),
                "basis": prov.basis,
            }))?;
        }
    }
    Ok(true)
}

fn field(p: u64, k: u32, table: bool) -> Outcome {
    let f = Field::new(p, k, None).map_err(|e| e.to_string())?;
    let mut info = json!({
        "p": p,
        "k": k,
        "order": f.order(),
        "modulus": f.modulus(),
        "primitive": f.primitive(),
    });
    if table {
        let els: Vec<u64> = f.elements().collect();
        let tab = |op: &dyn Fn(u64, u64) -> u64| -> Vec<Vec<u64>> {
            els.iter().map(|&a| els.iter().map(|&b| op(a, b)).collect()).collect()
        };
        info["add"] = json!(tab(&|a, b| f.add(a, b)));
        info["mul"] = json!(tab(&|a, b| f.mul(a, b)));
    }
    print_json(&info)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { job, emit_matrices } => run(&job, emit_matrices.as_deref()),
        Command::Examples { name } => examples(&name),
        Command::Hermitian { q, a, emit } => hermitian(q, a, emit),
        Command::Field { p, k, table } => field(p, k, table),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
