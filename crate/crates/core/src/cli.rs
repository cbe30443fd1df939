//! The `annulus` command-line driver.
//!
//! Exit codes: `0` all checks passed, `1` a check failed or the input was
//! rejected, `2` the class-count guard was hit.

use crate::angulation::Angulation;
use crate::diagcat::{self, Window};
use crate::geometry::{AnnulusConfig, Diagonal};
use crate::mutclass::{self, ClassError, DEFAULT_CLASS_LIMIT};
use crate::quiver::ColouredQuiver;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "annulus",
    version,
    about = "m-cluster combinatorics of the annulus"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Params {
    /// Outer parameter (mp marked points on the outer boundary).
    #[arg(long)]
    pub p: Option<i64>,
    /// Inner parameter.
    #[arg(long)]
    pub q: Option<i64>,
    #[arg(long, default_value_t = 1)]
    pub m: i64,
    /// Write the result here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate both mutation classes, check the bijection and (m = 1) the formula.
    Enumerate {
        #[command(flatten)]
        params: Params,
        /// Identify angulations only up to rotation.
        #[arg(long)]
        no_flip: bool,
        #[arg(long, default_value_t = DEFAULT_CLASS_LIMIT)]
        limit: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also save the angulation class database as JSON lines.
        #[arg(long)]
        database: Option<PathBuf>,
    },
    /// Mutate an angulation (Δ⁰ if no input is given).
    Mutate {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        position: usize,
        #[arg(long, default_value_t = 1)]
        times: usize,
        /// Emit the quiver alongside the angulation, checked against quiver mutation.
        #[arg(long)]
        emit_quiver: bool,
    },
    /// Print the coloured quiver of an angulation (Δ⁰ if no input is given).
    Quiver {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Draw every arrow in DOT output, not just colours ≤ m/2.
        #[arg(long)]
        full: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the randomized property suites.
    Verify {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Build a window of the AR-quiver of m-diagonals.
    Arquiver {
        #[command(flatten)]
        params: Params,
        /// Twist bound for spanning arcs.
        #[arg(long, default_value_t = 6)]
        window: i64,
        /// Quasi-length bound for peripheral arcs (defaults to the window).
        #[arg(long)]
        quasi_length: Option<i64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Evaluate the closed-form class count (m = 1).
    Formula {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        no_flip: bool,
    },
}

/// Parses `std::env::args` and runs the command.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli.command),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_FAIL
            } else {
                EXIT_PASS
            }
        }
    }
}

struct Failure(i32, String);

impl From<ClassError> for Failure {
    fn from(e: ClassError) -> Self {
        let code = if matches!(e, ClassError::LimitExceeded(_)) {
            EXIT_RESOURCE
        } else {
            EXIT_FAIL
        };
        Failure(code, e.to_string())
    }
}

fn fail(msg: impl ToString) -> Failure {
    Failure(EXIT_FAIL, msg.to_string())
}

fn execute(cmd: Command) -> i32 {
    let result = match cmd {
        Command::Enumerate {
            params,
            no_flip,
            limit,
            samples,
            seed,
            database,
        } => cmd_enumerate(&params, !no_flip, limit, samples, seed, database.as_deref()),
        Command::Mutate {
            params,
            input,
            position,
            times,
            emit_quiver,
        } => cmd_mutate(&params, input.as_deref(), position, times, emit_quiver),
        Command::Quiver {
            params,
            input,
            full,
            format,
        } => cmd_quiver(&params, input.as_deref(), full, format),
        Command::Verify {
            params,
            samples,
            seed,
        } => cmd_verify(&params, samples, seed),
        Command::Arquiver {
            params,
            window,
            quasi_length,
            format,
        } => cmd_arquiver(&params, window, quasi_length.unwrap_or(window), format),
        Command::Formula { params, no_flip } => cmd_formula(&params, !no_flip),
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

fn config(params: &Params) -> Result<AnnulusConfig, Failure> {
    let (Some(p), Some(q)) = (params.p, params.q) else {
        return Err(fail("--p and --q are required"));
    };
    AnnulusConfig::new(p, q, params.m).map_err(fail)
}

fn emit(params: &Params, text: &str) -> Result<(), Failure> {
    match &params.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| fail(format!("{}: {e}", path.display())))
        }
        None => {
            use std::io::Write;
            // A closed pipe (e.g. `| head`) is not an error.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

fn load_angulation(params: &Params, input: Option<&Path>) -> Result<Angulation, Failure> {
    match input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| fail(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| fail(format!("rejected angulation: {e}")))
        }
        None => Ok(Angulation::delta0(config(params)?)),
    }
}

fn cmd_enumerate(
    params: &Params,
    use_flip: bool,
    limit: usize,
    samples: usize,
    seed: u64,
    database: Option<&Path>,
) -> Result<i32, Failure> {
    let cfg = config(params)?;
    let report = mutclass::summarize(cfg, use_flip, limit, samples, seed)?;
    if let Some(path) = database {
        mutclass::enumerate_angulation_classes(cfg, use_flip, limit)?.save(path)?;
    }
    emit(params, &pretty(&report))?;
    Ok(if report.pass() { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_mutate(
    params: &Params,
    input: Option<&Path>,
    position: usize,
    times: usize,
    emit_quiver: bool,
) -> Result<i32, Failure> {
    let start = load_angulation(params, input)?;
    if position >= start.diagonals().len() {
        return Err(fail(format!("position {position} out of range")));
    }
    let mut a = start.clone();
    let mut q = start.quiver();
    for _ in 0..times {
        a = a.mutate(position).map_err(fail)?;
        q = q.mutate(position).map_err(fail)?;
    }
    if !emit_quiver {
        emit(params, &pretty(&a))?;
        return Ok(EXIT_PASS);
    }
    let quiver = a.quiver();
    let commutes = quiver == q;
    emit(
        params,
        &pretty(&json!({ "angulation": a, "quiver": quiver, "commutes": commutes })),
    )?;
    Ok(if commutes { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_quiver(
    params: &Params,
    input: Option<&Path>,
    full: bool,
    format: Format,
) -> Result<i32, Failure> {
    let q = load_angulation(params, input)?.quiver();
    let text = match format {
        Format::Json => pretty(&q),
        Format::Dot => q.to_dot(full),
    };
    emit(params, &text)?;
    Ok(EXIT_PASS)
}

fn cmd_formula(params: &Params, with_flip: bool) -> Result<i32, Failure> {
    let (Some(p), Some(q)) = (params.p, params.q) else {
        return Err(fail("--p and --q are required"));
    };
    if p < 2 || q < 2 {
        return Err(fail("need p, q ≥ 2"));
    }
    let value = mutclass::closed_form_count(p as u64, q as u64, with_flip).map_err(fail)?;
    emit(
        params,
        &pretty(&json!({ "p": p, "q": q, "with_flip": with_flip, "value": value })),
    )?;
    Ok(EXIT_PASS)
}

fn cmd_arquiver(params: &Params, window: i64, length: i64, format: Format) -> Result<i32, Failure> {
    let cfg = config(params)?;
    let ar = diagcat::build_ar_quiver(
        &cfg,
        Window {
            twist: window,
            length,
        },
    )
    .map_err(fail)?;
    let summary: Vec<Value> = ar
        .summary()
        .into_iter()
        .map(|(kind, n)| json!({ "kind": kind, "count": n }))
        .collect();
    let ok = ar.components.len() as i64 == 3 * cfg.m;
    let text = match format {
        Format::Json => {
            pretty(&json!({ "summary": summary, "components": ar.components, "quiver": ar }))
        }
        Format::Dot => {
            let mut s = String::new();
            for c in &ar.components {
                s.push_str(&format!("// {:?}^{} size {}\n", c.kind, c.level, c.size));
            }
            s + &ar.to_dot()
        }
    };
    emit(params, &text)?;
    Ok(if ok { EXIT_PASS } else { EXIT_FAIL })
}

#[derive(Debug, Serialize)]
struct CheckResult {
    name: &'static str,
    cases: usize,
    failures: usize,
    counterexample: Option<Value>,
}

impl CheckResult {
    fn new(name: &'static str) -> Self {
        CheckResult {
            name,
            cases: 0,
            failures: 0,
            counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(witness());
            }
        }
    }
}

/// A random diagonal of `cfg` with twist and span bounded by small
/// multiples of the boundary lengths.
pub fn random_diagonal(cfg: &AnnulusConfig, rng: &mut impl Rng) -> Diagonal {
    let (mp, mq, m) = (cfg.outer_len(), cfg.inner_len(), cfg.m);
    match rng.gen_range(0..3) {
        0 => cfg.spanning(rng.gen_range(0..mp), rng.gen_range(-3 * mq..=3 * mq)),
        1 => cfg.outer(rng.gen_range(0..mp), rng.gen_range(3..=mp + 1 + 2 * m)),
        _ => cfg.inner(rng.gen_range(0..mq), rng.gen_range(3..=mq + 1 + 2 * m)),
    }
}

fn cmd_verify(params: &Params, samples: usize, seed: u64) -> Result<i32, Failure> {
    let cfg = config(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut symmetry = CheckResult::new("crossing_symmetry");
    let mut invariance = CheckResult::new("crossing_shift_rotation_invariance");
    let mut collars = CheckResult::new("opposite_peripherals_disjoint");
    for _ in 0..samples {
        let (a, b) = (
            random_diagonal(&cfg, &mut rng),
            random_diagonal(&cfg, &mut rng),
        );
        let s = rng.gen_range(-2 * cfg.outer_len()..=2 * cfg.outer_len());
        let e = cfg.crossing_number(&a, &b);
        symmetry.record(
            e == cfg.crossing_number(&b, &a),
            || json!({ "a": a, "b": b }),
        );
        let images = [
            (cfg.shift(&a, s), cfg.shift(&b, s)),
            (cfg.rotate_outer(&a, s), cfg.rotate_outer(&b, s)),
            (cfg.rotate_inner(&a, s), cfg.rotate_inner(&b, s)),
        ];
        let same = images.iter().all(|(x, y)| cfg.crossing_number(x, y) == e);
        invariance.record(same, || json!({ "a": a, "b": b, "s": s }));
        let opposite = matches!(
            (a, b),
            (
                Diagonal::OuterPeripheral { .. },
                Diagonal::InnerPeripheral { .. }
            ) | (
                Diagonal::InnerPeripheral { .. },
                Diagonal::OuterPeripheral { .. }
            )
        );
        if opposite {
            collars.record(e == 0, || json!({ "a": a, "b": b }));
        }
    }

    let mut axioms = CheckResult::new("quiver_axioms");
    let mut commutation = CheckResult::new("mutation_commutes");
    let mut periodicity = CheckResult::new("mutation_periodic");
    let delta0 = Angulation::delta0(cfg);
    let n = delta0.diagonals().len();
    let period = cfg.m as usize + 1;
    for _ in 0..samples {
        let mut a = delta0.clone();
        let len = rng.gen_range(1..=12);
        for _ in 0..len {
            let j = rng.gen_range(0..n);
            let q = a.quiver();
            let Ok(next) = a.mutate(j) else {
                commutation.record(false, || json!({ "angulation": a, "position": j }));
                break;
            };
            let mutated = q.mutate(j).ok();
            let nq = next.quiver();
            commutation.record(
                mutated.as_ref() == Some(&nq),
                || json!({ "angulation": a, "position": j }),
            );
            axioms.record(nq.check_axioms().is_ok(), || json!({ "quiver": nq }));
            let mut back = next.clone();
            let mut back_q: Option<ColouredQuiver> = Some(nq.clone());
            for _ in 0..period {
                back = match back.mutate(j) {
                    Ok(x) => x,
                    Err(_) => break,
                };
                back_q = back_q.and_then(|x| x.mutate(j).ok());
            }
            periodicity.record(
                back == next && back_q.as_ref() == Some(&nq),
                || json!({ "angulation": next, "position": j }),
            );
            a = next;
        }
    }

    let mut duality = CheckResult::new("translate_duality");
    let ar = diagcat::build_ar_quiver(
        &cfg,
        Window {
            twist: 2,
            length: 3,
        },
    )
    .map_err(fail)?;
    for x in &ar.nodes {
        for y in &ar.nodes {
            let ok = diagcat::translate_dual_check(&x.diagonal, &y.diagonal, &cfg);
            duality.record(ok, || json!({ "a": x.diagonal, "b": y.diagonal }));
        }
    }

    let checks = [
        symmetry,
        invariance,
        collars,
        axioms,
        commutation,
        periodicity,
        duality,
    ];
    let pass = checks.iter().all(|c| c.failures == 0);
    emit(
        params,
        &pretty(&json!({ "seed": seed, "samples": samples, "checks": checks, "pass": pass })),
    )?;
    Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
}
