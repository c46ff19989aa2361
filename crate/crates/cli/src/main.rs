//! gmspec — desk-scale reproduction and verification of dominant
//! constraint-graph counts, the Z-shape singular-value density and its
//! ODE, and sampled graph-matrix spectra.

mod verify;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gmspec_core::combinatorics::{generalized_catalan, gridwalk_count};
use gmspec_core::constraint_graphs::{
    build_h, enumerate_dominant_with_budget, ConstraintGraphError, DEFAULT_VERTEX_BUDGET,
    SLOW_VERTEX_BUDGET,
};
use gmspec_core::graph_matrix::{
    build_matrix, histogram, make_multi_z_shape, pooled_singular_values, replicate_seed,
    sample_graph, singular_values, trace_moments_from_singular_values,
};
use gmspec_core::spectrum::{
    density_z, solve_ode_3z, solve_ode_z, moment_of_density, three_layer_edge, z_edge,
};
use num_traits::ToPrimitive;
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const DEFAULT_SEED: u64 = 17;

#[derive(Parser)]
#[command(name = "gmspec", version, about)]
struct Cli {
    /// Cap on worker threads (defaults to the number of cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SeedArg {
    /// RNG seed (env GMSPEC_SEED overrides the built-in default)
    #[arg(long, env = "GMSPEC_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form dominant count D(m,n) = binom((m+1)n, n)/(mn+1)
    CountFormula {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u64,
    },
    /// Count grid walks (0,0) -> (n, mn) staying weakly below y = m x
    Gridwalks {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u64,
    },
    /// Exhaustively count dominant constraint graphs on H(m, 2q)
    CountDominant {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: usize,
        /// Additionally assert the structural predicates on every
        /// dominant partition
        #[arg(long)]
        check_structure: bool,
        /// Dump the dominant partitions, one JSON array of blocks per line
        #[arg(long, value_name = "FILE.jsonl")]
        list: Option<PathBuf>,
        /// Permit long-running sizes such as m=2, q=4
        #[arg(long)]
        allow_slow: bool,
    },
    /// Empirical trace moments of sampled graph matrices vs the
    /// limiting counts
    TraceMoments {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        q_max: usize,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// Output path for the JSON array ("-" for stdout)
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Histogram of pooled singular values of sampled matrices M/n^{m/2}
    Sample {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = 60)]
        bins: usize,
        /// Output path for the histogram CSV ("-" for stdout)
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Tabulate a limiting density as CSV
    Density {
        #[arg(long, value_enum)]
        family: Family,
        /// Use the closed form (z family only; the default there)
        #[arg(long, conflicts_with = "ode")]
        closed_form: bool,
        /// Solve the family's ODE backward from the edge instead
        #[arg(long)]
        ode: bool,
        /// Edge offset for the ODE initial condition
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        /// Number of CSV rows
        #[arg(long, default_value_t = 200)]
        grid: usize,
        /// Output path ("-" for stdout)
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Check density moments against the closed-form counts
    MomentsCheck {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 6)]
        k_max: u32,
        /// Relative tolerance (default 1e-4 for z, 5e-2 for z3)
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run a verification suite and emit a JSON report
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[command(flatten)]
        seed: SeedArg,
        /// Permit long-running enumerations (m=2, q=4)
        #[arg(long)]
        allow_slow: bool,
        /// Report path ("-" for stdout)
        #[arg(long, default_value = "-")]
        out: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Z-shape (2-layer) density
    Z,
    /// 3-layer density
    Z3,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Combinatorics,
    Enumeration,
    Structure,
    Trace,
    Density,
    Ode,
    Spectrum,
    All,
}

#[derive(Serialize)]
struct TraceMomentRow {
    q: usize,
    empirical: f64,
    theoretical: f64,
    rel_err: f64,
}

fn write_output(path: &str, contents: &str) -> Result<()> {
    if path == "-" {
        print!("{contents}");
        std::io::stdout().flush()?;
    } else {
        std::fs::write(path, contents).with_context(|| format!("writing {path}"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        // a failed build means a pool already exists; that is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::CountFormula { m, n } => {
            println!("{}", generalized_catalan(m, n)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Gridwalks { m, n } => {
            println!("{}", gridwalk_count(m, n)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::CountDominant { m, q, check_structure, list, allow_slow } => {
            let budget = if allow_slow { SLOW_VERTEX_BUDGET } else { DEFAULT_VERTEX_BUDGET };
            let report = match enumerate_dominant_with_budget(m, q, budget) {
                Err(e @ ConstraintGraphError::BudgetExceeded { .. }) => {
                    bail!("{e} (pass --allow-slow to raise the budget)")
                }
                other => other?,
            };
            if let Some(path) = list {
                let h = build_h(m, q)?;
                let mut lines = String::new();
                for rec in &report.records {
                    lines.push_str(&serde_json::to_string(&rec.partition.blocks_labeled(&h))?);
                    lines.push('\n');
                }
                std::fs::write(&path, lines)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if check_structure {
                for rec in &report.records {
                    if let Some(name) = rec.first_violated(q) {
                        eprintln!(
                            "structure violation ({name}) in partition {:?}",
                            rec.partition.blocks_labeled(&build_h(m, q)?)
                        );
                        println!("{}", report.dominant_count);
                        return Ok(ExitCode::FAILURE);
                    }
                }
            }
            println!("{}", report.dominant_count);
            Ok(ExitCode::SUCCESS)
        }
        Command::TraceMoments { m, n, q_max, reps, seed, out } => {
            eprintln!("seed: {}", seed.seed);
            let shape = make_multi_z_shape(m)?;
            let mut sums = vec![0.0; q_max];
            for k in 0..reps as u64 {
                let g = sample_graph(n, replicate_seed(seed.seed, k));
                let mat = build_matrix(&shape, &g)?;
                let s = singular_values(&mat);
                for (acc, v) in sums.iter_mut().zip(trace_moments_from_singular_values(&s, q_max))
                {
                    *acc += v;
                }
            }
            let rows: Vec<TraceMomentRow> = (1..=q_max)
                .map(|q| {
                    let empirical = sums[q - 1] / reps as f64;
                    let theoretical =
                        generalized_catalan(m as u32, q as u64).map(|c| c.to_f64().unwrap())?;
                    Ok(TraceMomentRow {
                        q,
                        empirical,
                        theoretical,
                        rel_err: (empirical - theoretical).abs() / theoretical,
                    })
                })
                .collect::<Result<_>>()?;
            write_output(&out, &format!("{}\n", serde_json::to_string_pretty(&rows)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sample { m, n, reps, seed, bins, out } => {
            eprintln!("seed: {}", seed.seed);
            let values = pooled_singular_values(m, n, reps, seed.seed)?;
            let hi = values.last().copied().unwrap_or(1.0) * (1.0 + 1e-9);
            let hist = histogram(&values, bins, hi)?;
            let mut csv = String::from("bin_lo,bin_hi,count,density\n");
            for b in &hist.bins {
                csv.push_str(&format!("{},{},{},{}\n", b.lo, b.hi, b.count, b.density));
            }
            write_output(&out, &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Density { family, closed_form, ode, eps, grid, out } => {
            if grid == 0 {
                bail!("--grid must be positive");
            }
            let edge = match family {
                Family::Z => z_edge(),
                Family::Z3 => three_layer_edge(),
            };
            let use_ode = ode || family == Family::Z3;
            if closed_form && family == Family::Z3 {
                bail!("no closed form is known for the z3 family; use --ode");
            }
            let eval: Box<dyn Fn(f64) -> f64> = if use_ode {
                let table = match family {
                    Family::Z => solve_ode_z(eps)?,
                    Family::Z3 => solve_ode_3z(eps)?,
                };
                Box::new(move |x| table.eval(x))
            } else {
                Box::new(density_z)
            };
            let mut csv = String::from("x,f\n");
            for i in 1..=grid {
                let x = edge * i as f64 / (grid + 1) as f64;
                csv.push_str(&format!("{},{}\n", x, eval(x)));
            }
            write_output(&out, &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::MomentsCheck { family, k_max, tol } => {
            let (edge, layers, tol) = match family {
                Family::Z => (z_edge(), 2u32, tol.unwrap_or(1e-4)),
                Family::Z3 => (three_layer_edge(), 3, tol.unwrap_or(5e-2)),
            };
            let table = if family == Family::Z3 { Some(solve_ode_3z(1e-4)?) } else { None };
            let mut all_ok = true;
            for k in 0..=k_max {
                let expected =
                    generalized_catalan(layers, k as u64)?.to_f64().context("count overflow")?;
                let got = match &table {
                    Some(t) => t.moment(k),
                    None => moment_of_density(density_z, edge, k),
                };
                let rel = (got - expected).abs() / expected;
                let ok = rel < tol;
                all_ok &= ok;
                println!(
                    "k={k} moment={got:.10} expected={expected} rel_err={rel:.3e} {}",
                    if ok { "PASS" } else { "FAIL" }
                );
            }
            Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Verify { suite, seed, allow_slow, out } => {
            eprintln!("seed: {}", seed.seed);
            let report = verify::run_suite(suite, seed.seed, allow_slow);
            for c in &report.checks {
                eprintln!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            write_output(&out, &format!("{}\n", serde_json::to_string_pretty(&report)?))?;
            Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}
