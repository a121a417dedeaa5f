//! `qnq`: build, simulate and verify the quantum N-Queens marking circuit.
//!
//! Exit codes: 0 success, 1 verification mismatch or runtime failure,
//! 2 usage error, 3 simulation size cap exceeded.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qnq_core::analysis::{
    sampling_report, verify_against_oracle, SamplingReport, VerificationReport,
};
use qnq_core::board::{solve_classical, BoardConfig, PermutationVector};
use qnq_core::circuit::{
    build_full_circuit, closed_form_census, column_check_closed_form, diagonal_toffoli_closed_form,
    diagonal_toffoli_simplified, qubit_total_closed_form, streamed_census,
};
use qnq_core::qasm::export_qasm;
use qnq_core::sim;

const DEFAULT_MAX_N: usize = 6;
const HARD_MAX_N: usize = 7;
const MAX_BUILT_CENSUS_N: usize = 1_000;
const MAX_COUNTS_N: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "qnq",
    version,
    about = "Quantum N-Queens solver circuit simulator and verifier"
)]
struct Cli {
    /// Output format.
    #[arg(
        long,
        global = true,
        value_enum,
        env = "QNQ_FORMAT",
        default_value = "text"
    )]
    format: Format,

    /// Write output to PATH instead of stdout.
    #[arg(long, short = 'o', global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Largest board size that may be simulated (at most 7).
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_N,
          value_parser = max_n_arg)]
    max_n: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate the solver and print the post-selected boards.
    Solve {
        #[arg(value_parser = board_size)]
        n: usize,
    },
    /// Simulate the solver and print the full verification report.
    Verify {
        #[arg(value_parser = board_size)]
        n: usize,
    },
    /// Qubit and gate counts, built circuit against closed forms.
    Counts {
        #[arg(value_parser = counts_size)]
        n: usize,
    },
    /// Export the solver circuit as OpenQASM 2.0.
    ExportQasm {
        #[arg(value_parser = board_size)]
        n: usize,
    },
    /// Classical backtracking solutions.
    Oracle {
        #[arg(value_parser = board_size)]
        n: usize,
    },
    /// Seeded measurement sampling of the final state.
    Sample {
        #[arg(value_parser = board_size)]
        n: usize,
        #[arg(long, default_value_t = 310, value_parser = shot_count)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn bounded(s: &str, lo: usize, hi: usize) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v < lo || v > hi {
        return Err(format!("{v} is not in {lo}..={hi}"));
    }
    Ok(v)
}

fn board_size(s: &str) -> Result<usize, String> {
    bounded(s, 1, usize::MAX)
}

fn counts_size(s: &str) -> Result<usize, String> {
    bounded(s, 1, MAX_COUNTS_N)
}

fn max_n_arg(s: &str) -> Result<usize, String> {
    bounded(s, 1, HARD_MAX_N)
}

fn shot_count(s: &str) -> Result<usize, String> {
    bounded(s, 1, usize::MAX)
}

enum Failure {
    Mismatch(String),
    Runtime(String),
    Cap(String),
}

impl From<qnq_core::Error> for Failure {
    fn from(e: qnq_core::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

struct Output {
    text: String,
    ok: bool,
}

fn check_cap(n: usize, max_n: usize) -> Result<(), Failure> {
    if n > max_n {
        let peak = (n as u128).pow(n as u32) * 2;
        return Err(Failure::Cap(format!(
            "n = {n} exceeds the simulation cap {max_n} (estimated peak of {peak} sparse terms); \
             raise it with --max-n up to {HARD_MAX_N}"
        )));
    }
    if n == HARD_MAX_N {
        eprintln!(
            "warning: n = 7 holds up to {} terms and needs several GiB of memory",
            2 * 7u64.pow(7)
        );
    }
    Ok(())
}

fn render_board(out: &mut String, p: &PermutationVector) {
    out.push_str(&BoardConfig::from_permutation(p).to_text());
}

fn cols_text(p: &PermutationVector) -> String {
    let cols: Vec<String> = p.cols().iter().map(usize::to_string).collect();
    cols.join(" ")
}

fn report_text(r: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n: {}", r.n);
    let _ = writeln!(out, "quantum solutions: {}", r.quantum_solutions.len());
    let _ = writeln!(out, "classical solutions: {}", r.classical_solutions.len());
    let _ = writeln!(out, "equal: {}", r.equal);
    let _ = writeln!(out, "success probability: {}", r.success_probability);
    let _ = writeln!(out, "census ok: {}", r.census_ok);
    let _ = writeln!(out, "ancilla mismatches: {}", r.ancilla_mismatches);
    out
}

fn cmd_solve(n: usize, format: Format) -> Result<Output, Failure> {
    let report = verify_against_oracle(n)?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Text => {
            let mut out = String::new();
            if report.quantum_solutions.is_empty() {
                let _ = writeln!(out, "n = {n}: no solutions");
            } else {
                let _ = writeln!(out, "n = {n}: {} solutions", report.quantum_solutions.len());
                for (i, p) in report.quantum_solutions.iter().enumerate() {
                    let _ = writeln!(out, "\nsolution {} (cols {})", i + 1, cols_text(p));
                    render_board(&mut out, p);
                }
                out.push('\n');
            }
            let _ = writeln!(out, "success probability: {}", report.success_probability);
            let _ = writeln!(
                out,
                "oracle equivalence: {}",
                if report.passed() { "ok" } else { "MISMATCH" }
            );
            out
        }
    };
    Ok(Output {
        text,
        ok: report.passed(),
    })
}

fn cmd_verify(n: usize, format: Format) -> Result<Output, Failure> {
    let report = verify_against_oracle(n)?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Text => report_text(&report),
    };
    Ok(Output {
        text,
        ok: report.passed(),
    })
}

fn cmd_counts(n: usize, format: Format) -> Result<Output, Failure> {
    let nn = n as u64;
    let closed = closed_form_census(n)?;
    let built = if n <= MAX_BUILT_CENSUS_N {
        Some(streamed_census(n)?)
    } else {
        None
    };
    let w_prep_closed = nn * (2 * nn - 1);
    let rows: Vec<(&str, Option<u64>, u64)> = vec![
        ("qubits", Some(build_qubits(n)), qubit_total_closed_form(nn)),
        ("w-prep gates", built.map(|b| b.w_prep(n)), w_prep_closed),
        (
            "column-check gates",
            built.map(|b| b.column_checks),
            column_check_closed_form(nn),
        ),
        (
            "diagonal ccx",
            built.map(|b| b.diagonal_toffolis),
            diagonal_toffoli_closed_form(nn),
        ),
        (
            "diagonal ccx (simplified)",
            None,
            diagonal_toffoli_simplified(nn),
        ),
        (
            "diagonal ancilla x",
            built.map(|b| b.x - nn),
            nn * (nn - 1) / 2,
        ),
    ];
    let simplified_ok = diagonal_toffoli_simplified(nn) == diagonal_toffoli_closed_form(nn);
    let status = |name: &str, b: Option<u64>, c: u64| -> Option<bool> {
        if name == "diagonal ccx (simplified)" {
            return Some(simplified_ok);
        }
        b.map(|b| b == c)
    };
    let all_ok = rows
        .iter()
        .all(|&(name, b, c)| status(name, b, c) != Some(false));

    let text = match format {
        Format::Json => {
            let entries: Vec<serde_json::Value> = rows
                .iter()
                .map(|&(name, b, c)| {
                    serde_json::json!({
                        "quantity": name,
                        "built": b,
                        "closed_form": c,
                        "match": status(name, b, c),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&serde_json::json!({
                "n": n,
                "rows": entries,
                "census": built,
                "closed_form_census": closed,
            }))? + "\n"
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "n = {n}");
            let _ = writeln!(
                out,
                "{:<27} {:>22} {:>22}  status",
                "quantity", "built", "closed-form"
            );
            for &(name, b, c) in &rows {
                let built_s = b.map_or_else(|| "-".to_string(), |v| v.to_string());
                let status_s = match status(name, b, c) {
                    Some(true) => "MATCH",
                    Some(false) => "MISMATCH",
                    None => "-",
                };
                let _ = writeln!(out, "{name:<27} {built_s:>22} {c:>22}  {status_s}");
            }
            if built.is_none() {
                let _ = writeln!(out, "(built census skipped above n = {MAX_BUILT_CENSUS_N})");
            }
            out
        }
    };
    Ok(Output { text, ok: all_ok })
}

fn build_qubits(n: usize) -> u64 {
    qnq_core::circuit::layout(n)
        .map(|l| l.total_qubits() as u64)
        .unwrap_or(0)
}

fn cmd_export_qasm(n: usize) -> Result<Output, Failure> {
    let doc = export_qasm(&build_full_circuit(n)?);
    eprintln!(
        "{} gate statements over {} qubits",
        doc.gate_line_count,
        qubit_total_closed_form(n as u64)
    );
    Ok(Output {
        text: doc.text,
        ok: true,
    })
}

fn cmd_oracle(n: usize, format: Format) -> Result<Output, Failure> {
    let solutions = solve_classical(n);
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&solutions)? + "\n",
        Format::Text => {
            let mut out = format!("n = {n}: {} solutions\n", solutions.len());
            for p in &solutions {
                let _ = writeln!(out, "{}", cols_text(p));
            }
            out
        }
    };
    Ok(Output { text, ok: true })
}

fn sampling_text(n: usize, r: &SamplingReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n: {n}");
    let _ = writeln!(out, "shots: {}", r.shots);
    let _ = writeln!(out, "seed: {} ({})", r.seed, r.rng_algorithm);
    let _ = writeln!(out, "distinct outcomes: {}", r.distinct_outcomes);
    let _ = writeln!(out, "solution hits: {}", r.solution_hits);
    let _ = writeln!(out, "distinct solutions: {}", r.distinct_solutions.len());
    for p in &r.distinct_solutions {
        let _ = writeln!(out, "  cols {}", cols_text(p));
    }
    let _ = writeln!(out, "ancilla mismatches: {}", r.ancilla_mismatches);
    match (r.chi_square, r.degrees_of_freedom, r.p_value) {
        (Some(chi), Some(dof), Some(p)) => {
            let _ = writeln!(out, "chi-square: {chi:.4} (dof {dof}, p = {p:.4})");
        }
        _ => {
            let _ = writeln!(out, "chi-square: n/a (single-outcome support)");
        }
    }
    out
}

fn cmd_sample(n: usize, shots: usize, seed: u64, format: Format) -> Result<Output, Failure> {
    let state = sim::run(&build_full_circuit(n)?)?;
    let report = sampling_report(&state, shots, seed)?;
    let text = match format {
        Format::Json => {
            let mut v = serde_json::to_value(&report)?;
            v["n"] = serde_json::json!(n);
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Text => sampling_text(n, &report),
    };
    Ok(Output {
        text,
        ok: report.ancilla_mismatches == 0,
    })
}

fn execute(cli: &Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::Solve { n } => {
            check_cap(n, cli.max_n)?;
            cmd_solve(n, cli.format)
        }
        Command::Verify { n } => {
            check_cap(n, cli.max_n)?;
            cmd_verify(n, cli.format)
        }
        Command::Sample { n, shots, seed } => {
            check_cap(n, cli.max_n)?;
            cmd_sample(n, shots, seed, cli.format)
        }
        Command::Counts { n } => cmd_counts(n, cli.format),
        Command::ExportQasm { n } => cmd_export_qasm(n),
        Command::Oracle { n } => cmd_oracle(n, cli.format),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Runtime(format!("stdout: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli).and_then(|out| {
        emit(&cli, &out.text)?;
        if out.ok {
            Ok(())
        } else {
            Err(Failure::Mismatch("verification failed".into()))
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) | Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
