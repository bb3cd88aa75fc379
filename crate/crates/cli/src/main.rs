use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use nol_core::centralizer::PatternMatrix;
use nol_core::dominance::hasse;
use nol_core::elimination::sigma_reduce_generic;
use nol_core::oblak::{omega1, q_all_choices, q_of, q_trace, select_step, TieBreak};
use nol_core::rb_graph::{assign_rows, build_graph, delta_circle, render_table, to_dot};
use nol_core::rng::stream;
use nol_core::sweep::{property_sweep, SweepCheck};
use nol_core::verify::{exhaustive_ladder, exhaustive_max_type, sample_pattern, SampleKind, LADDER};
use nol_core::{Partition, PrimeModulus};

/// Maximum nilpotent Jordan types in centralizers of nilpotent matrices.
#[derive(Parser)]
#[command(name = "nol", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Q(B).
    Q {
        partition: String,
        /// Print one JSON line per recursion level.
        #[arg(long)]
        trace: bool,
        /// Branch over every maximizing choice and report all results.
        #[arg(long)]
        all_choices: bool,
        #[arg(long)]
        json: bool,
    },
    /// Row table of the relation graph on the basis.
    Graph {
        partition: String,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// Sample the triangular nilpotent subalgebra and compare with Q(B).
    Verify {
        partition: String,
        #[command(flatten)]
        rand: RandomArgs,
        /// Sample count.
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        /// Enumerate every assignment over a small prime (the ladder 3, 5, 7 unless --prime is given).
        #[arg(long)]
        exhaustive: bool,
        /// Sample with every Toeplitz tie broken.
        #[arg(long)]
        untied: bool,
        /// Write the sampled pattern as JSON.
        #[arg(long, value_name = "FILE")]
        dump_pattern: Option<PathBuf>,
        /// Sample this pattern instead of the built-in one.
        #[arg(long, value_name = "FILE", conflicts_with_all = ["untied", "exhaustive"])]
        pattern: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Check the properties of Q over all partitions up to a size.
    Sweep {
        #[arg(long, default_value_t = 12)]
        n: usize,
        /// Comma-separated subset of: sum, gap, idempotent, fixed-point, head, length,
        /// almost-rect, delta-circle, uniqueness, rows.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<SweepCheck>,
        #[arg(long)]
        json: bool,
    },
    /// Hasse diagram of the dominance order with the map Q overlaid.
    Dominance {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dot: bool,
    },
    /// Reduce a generic instantiation to monotone row profile.
    Sigma {
        /// Partition whose triangular pattern is reduced.
        #[arg(required_unless_present = "pattern")]
        partition: Option<String>,
        #[command(flatten)]
        rand: RandomArgs,
        #[arg(long, value_name = "FILE", conflicts_with = "partition")]
        pattern: Option<PathBuf>,
        /// Reduce the untied pattern.
        #[arg(long)]
        untied: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct RandomArgs {
    /// Field characteristic.
    #[arg(long)]
    prime: Option<u64>,
    #[arg(long, env = "NOL_SEED", default_value_t = 0)]
    seed: u64,
}

impl RandomArgs {
    fn modulus(&self) -> Result<PrimeModulus, Failure> {
        let p = self.prime.unwrap_or(PrimeModulus::DEFAULT as u64);
        PrimeModulus::new(p).map_err(|e| Failure::Usage(format!("--prime {p}: {e}")))
    }
}

enum Failure {
    Usage(String),
    Verification,
}

type Outcome = Result<(), Failure>;

fn parse(text: &str) -> Result<Partition, Failure> {
    text.parse()
        .map_err(|e| Failure::Usage(format!("invalid partition `{text}`: {e}")))
}

fn read_pattern(path: &PathBuf) -> Result<PatternMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    PatternMatrix::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn kind(untied: bool) -> SampleKind {
    if untied {
        SampleKind::Se
    } else {
        SampleKind::Sn
    }
}

fn cmd_q(text: &str, trace: bool, all_choices: bool, as_json: bool) -> Outcome {
    let b = parse(text)?;
    let q = q_of(&b);
    if trace {
        for level in q_trace(&b) {
            println!("{}", serde_json::to_string(&level).expect("serializable"));
        }
    }
    let choices = all_choices.then(|| q_all_choices(&b));
    if as_json {
        let mut out = json!({ "partition": b, "q": q, "omega1": omega1(&b) });
        if let Some(c) = &choices {
            out["all_choices"] = json!({ "results": c.results, "branches": c.branches });
        }
        println!("{out}");
        return Ok(());
    }
    println!("{}", q.plain());
    if let Some(c) = choices {
        for r in &c.results {
            if *r != q {
                println!("{}", r.plain());
            }
        }
        println!("branches: {}", c.branches);
        println!("distinct results: {}", c.results.len());
    }
    Ok(())
}

fn cmd_graph(text: &str, dot: bool, as_json: bool) -> Outcome {
    let b = parse(text)?;
    let g = build_graph(&b);
    if dot {
        print!("{}", to_dot(&g));
        return Ok(());
    }
    let table = assign_rows(&g).map_err(|e| Failure::Usage(e.to_string()))?;
    let circle = select_step(&b, TieBreak::default())
        .map(|s| delta_circle(&b, &s))
        .unwrap_or_default();
    if as_json {
        let rows: Vec<_> = g
            .vertices
            .iter()
            .map(|v| json!({ "vertex": v.label(), "row": table.row[v], "circle": circle.contains(v) }))
            .collect();
        println!("{}", json!({ "partition": b, "omega1": omega1(&b), "rows": rows }));
    } else {
        print!("{}", render_table(&b, &table, &circle));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    text: &str,
    rand: &RandomArgs,
    samples: usize,
    exhaustive: bool,
    untied: bool,
    dump: Option<&PathBuf>,
    pattern_file: Option<&PathBuf>,
    as_json: bool,
) -> Outcome {
    let b = parse(text)?;
    if b.is_empty() {
        return Err(Failure::Usage("empty partition".into()));
    }
    let sample_kind = kind(untied);
    if let Some(path) = dump {
        let pat = sample_kind.pattern(&b).expect("built-in kind");
        fs::write(path, pat.to_json()).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    if exhaustive {
        let runs = match rand.prime {
            Some(_) => vec![exhaustive_max_type(&b, rand.modulus()?).map_err(|e| Failure::Usage(e.to_string()))?],
            None => exhaustive_ladder(&b, &LADDER).map_err(|e| Failure::Usage(e.to_string()))?.runs,
        };
        if runs.is_empty() {
            return Err(Failure::Usage("every prime on the ladder exceeds the enumeration budget".into()));
        }
        let ok = runs.iter().all(|r| r.violations.is_empty()) && runs.iter().any(|r| r.attained);
        if as_json {
            let list: Vec<_> = runs.iter().map(|r| r.to_json()).collect();
            println!("{}", json!({ "partition": b, "q": q_of(&b), "runs": list, "passed": ok }));
        } else {
            for r in &runs {
                let max: Vec<String> = r.maximal.iter().map(Partition::plain).collect();
                println!(
                    "GF({}): {} assignments, maximal {}, attained {}, violations {}",
                    r.prime,
                    r.assignments,
                    max.join(" "),
                    r.attained,
                    r.violations.len()
                );
            }
            println!("q: {}", q_of(&b).plain());
        }
        return if ok { Ok(()) } else { Err(Failure::Verification) };
    }
    let m = rand.modulus()?;
    let (pattern, report_kind) = match pattern_file {
        Some(path) => (read_pattern(path)?, SampleKind::File),
        None => (sample_kind.pattern(&b).expect("built-in kind"), sample_kind),
    };
    let report = sample_pattern(&b, &pattern, m, samples, rand.seed, report_kind)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    if as_json {
        println!("{}", report.to_json());
    } else {
        println!("q: {}", report.q.plain());
        let max: Vec<String> = report.maximal.iter().map(Partition::plain).collect();
        println!("max observed: {}", max.join(" "));
        println!("attained: {}", report.attained());
        for (t, count) in report.observed.iter().rev() {
            println!("  {count:>5}  {}", t.plain());
        }
        for v in &report.violations {
            println!("violation [{}]: {}", v.kind, v.detail);
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_sweep(n: usize, checks: &[SweepCheck], as_json: bool) -> Outcome {
    let checks = if checks.is_empty() { SweepCheck::ALL.to_vec() } else { checks.to_vec() };
    let report = property_sweep(n, &checks);
    if as_json {
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    } else {
        println!("partitions: {}", report.partitions);
        for r in &report.results {
            let status = if r.failed == 0 { "ok" } else { "FAIL" };
            println!("{:<13} {status:<4} checked {}, failed {}", r.check.name(), r.checked, r.failed);
            for f in &r.failures {
                println!("    {f}");
            }
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_dominance(n: usize, dot: bool) -> Outcome {
    if n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let h = hasse(n);
    if dot {
        print!("{}", h.to_dot());
    } else {
        print!("{}", h.render());
    }
    Ok(())
}

fn cmd_sigma(text: Option<&str>, rand: &RandomArgs, pattern_file: Option<&PathBuf>, untied: bool, as_json: bool) -> Outcome {
    let m = rand.modulus()?;
    let pattern = match (pattern_file, text) {
        (Some(path), _) => read_pattern(path)?,
        (None, Some(t)) => kind(untied).pattern(&parse(t)?).expect("built-in kind"),
        (None, None) => unreachable!("clap requires one of them"),
    };
    let run = sigma_reduce_generic(&pattern, m, &mut stream(rand.seed, 0), 100)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let input_type = run.input.jordan_type().map_err(|e| Failure::Usage(e.to_string()))?;
    let final_type = run
        .trace
        .final_phi
        .monotone_generic_type()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    if as_json {
        let steps: Vec<_> = run
            .trace
            .steps
            .iter()
            .map(|s| {
                json!({
                    "i1": s.star.first_row(),
                    "p": s.star.order(),
                    "rows": s.star.rows,
                    "cols": s.star.cols,
                    "terminal_col": s.star.terminal_col(),
                    "eliminated": s.eliminated,
                })
            })
            .collect();
        println!(
            "{}",
            json!({
                "n": pattern.n(),
                "prime": m.p(),
                "seed": rand.seed,
                "retries": run.retries,
                "steps": steps,
                "m": run.trace.m(),
                "final_phi": run.trace.final_phi.values(),
                "type": final_type,
                "jordan_type": input_type,
            })
        );
    } else {
        for (k, s) in run.trace.steps.iter().enumerate() {
            println!(
                "step {}: i(1)={} p={} terminal column={} eliminated={}",
                k + 1,
                s.star.first_row(),
                s.star.order(),
                s.star.terminal_col(),
                s.eliminated
            );
        }
        println!("m: {}", run.trace.m());
        let phi: Vec<String> = run.trace.final_phi.values().iter().map(|v| v.to_string()).collect();
        println!("final phi: {}", phi.join(","));
        println!("type from phi: {}", final_type.plain());
        println!("jordan type: {}", input_type.plain());
        if run.retries > 0 {
            println!("retries: {}", run.retries);
        }
    }
    if final_type == input_type {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Q { partition, trace, all_choices, json } => cmd_q(partition, *trace, *all_choices, *json),
        Command::Graph { partition, dot, json } => cmd_graph(partition, *dot, *json),
        Command::Verify {
            partition,
            rand,
            samples,
            exhaustive,
            untied,
            dump_pattern,
            pattern,
            json,
        } => cmd_verify(
            partition,
            rand,
            *samples as usize,
            *exhaustive,
            *untied,
            dump_pattern.as_ref(),
            pattern.as_ref(),
            *json,
        ),
        Command::Sweep { n, checks, json } => cmd_sweep(*n, checks, *json),
        Command::Dominance { n, dot } => cmd_dominance(*n, *dot),
        Command::Sigma { partition, rand, pattern, untied, json } => {
            cmd_sigma(partition.as_deref(), rand, pattern.as_ref(), *untied, *json)
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
