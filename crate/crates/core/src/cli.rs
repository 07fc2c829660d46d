//! Command-line front end.
//!
//! Exit codes: 0 success (feasible), 1 infeasible (`check`, `solve`),
//! 2 parse, input or configuration error, 3 disagreement between the
//! closure and the elimination oracle.

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::json;

use crate::bound::Bound;
use crate::closure::{classify, close_with_cap, exactness_of, ClosureResult, Exactness};
use crate::constraint::{Constraint4, NormalVector};
use crate::error::Error;
use crate::fmoracle::{fm_feasible, fm_tight_bound, LinearSystem};
use crate::lindep::{most_negative_hcycle, Caps, DEFAULT_MAX_CONSTRAINTS, DEFAULT_MAX_CYCLE_SIZE};
use crate::matrix2d::Matrix2D;
use crate::parse::{parse_system, ConstraintSystem};
use crate::solver::{reduce_domains, solve_with, Interval, SolveOptions, SolveReport};
use crate::Rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Print feasible or infeasible.
    Check,
    /// Print the closed 2D-DBM.
    Close,
    /// Close, reduce domains and extract a witness.
    Solve,
    /// Print the variable intervals.
    Bounds,
    /// Print the constraint subclass and whether the closure is exact on it.
    Subclass,
    /// Print a negative hypercycle proving infeasibility.
    Explain,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, Parser)]
#[command(
    name = "fourcsp",
    version,
    about = "Solve conjunctions of constraints (xi - xj) - (xp - xq) <= m"
)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Constraint file, one constraint per line; `-` reads standard input.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Cross-check verdicts and bounds with Fourier-Motzkin elimination.
    #[arg(long)]
    pub oracle: bool,
    /// Stop the closure after at most N sweeps (never above the built-in cap).
    #[arg(long, value_name = "N", value_parser = positive)]
    pub max_sweeps: Option<usize>,
    /// Extract a witness even when some variable is unbounded.
    #[arg(long)]
    pub witness_anyway: bool,
    /// Largest hypercycle `explain` searches for.
    #[arg(long, value_name = "K", default_value_t = DEFAULT_MAX_CYCLE_SIZE, value_parser = positive)]
    pub max_cycle_size: usize,
}

fn positive(text: &str) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

impl RunConfig {
    pub fn new(command: Command, input: impl Into<PathBuf>) -> Self {
        RunConfig {
            command,
            input: input.into(),
            format: Format::Text,
            oracle: false,
            max_sweeps: None,
            witness_anyway: false,
            max_cycle_size: DEFAULT_MAX_CYCLE_SIZE,
        }
    }

    fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            max_sweeps: self.max_sweeps,
            witness_anyway: self.witness_anyway,
        }
    }
}

/// Reads the configured input and runs the command.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let source = if config.input.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map(|_| text)
    } else {
        std::fs::read_to_string(&config.input)
    };
    match source {
        Ok(text) => run_source(config, &text, out, err),
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", config.input.display());
            EXIT_ERROR
        }
    }
}

/// Runs the command on constraint text.
pub fn run_source(
    config: &RunConfig,
    source: &str,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let result = parse_system::<Rational>(source).and_then(|sys| execute(config, &sys));
    match result {
        Ok(outcome) => {
            let _ = out.write_all(outcome.text.as_bytes());
            if let Some(problem) = &outcome.disagreement {
                let _ = writeln!(err, "ORACLE DISAGREEMENT: {problem}");
                return EXIT_DISAGREEMENT;
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

struct Outcome {
    text: String,
    code: i32,
    disagreement: Option<String>,
}

impl Outcome {
    fn new(text: String, code: i32) -> Self {
        Outcome {
            text,
            code,
            disagreement: None,
        }
    }
}

fn json_text(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("json values serialize");
    s.push('\n');
    s
}

fn verdict(feasible: bool) -> &'static str {
    if feasible {
        "feasible"
    } else {
        "infeasible"
    }
}

fn exactness_text(e: Exactness) -> &'static str {
    match e {
        Exactness::Exact => "exact",
        Exactness::UpperApprox => "upper approximation",
    }
}

fn execute(config: &RunConfig, sys: &ConstraintSystem<Rational>) -> crate::Result<Outcome> {
    let (n, cs) = (sys.n, &sys.constraints);
    let mut outcome = match config.command {
        Command::Subclass => {
            let subclass = classify(cs);
            let exactness = exactness_of(subclass);
            let text = match config.format {
                Format::Text => format!("{subclass} / {exactness}\n"),
                Format::Json => json_text(json!({ "subclass": subclass, "exactness": exactness })),
            };
            return Ok(Outcome::new(text, EXIT_OK));
        }
        Command::Solve => {
            let report = match solve_with(cs, n, &config.solve_options()) {
                Err(Error::Infeasible) => {
                    return Ok(Outcome {
                        text: String::new(),
                        code: EXIT_DISAGREEMENT,
                        disagreement: Some(
                            "closure reports feasible, elimination finds no solution during witness extraction".into(),
                        ),
                    })
                }
                other => other?,
            };
            let text = match config.format {
                Format::Text => solve_text(&report),
                Format::Json => json_text(report.to_json_value()),
            };
            let code = if report.feasible {
                EXIT_OK
            } else {
                EXIT_INFEASIBLE
            };
            let mut o = Outcome::new(text, code);
            if config.oracle {
                o.disagreement = oracle_verdict(cs, n, report.feasible)?;
            }
            return Ok(o);
        }
        _ => {
            let mut closed = close_with_cap(&Matrix2D::load(cs, n)?, config.max_sweeps);
            closed.subclass = classify(cs);
            closed.exactness = exactness_of(closed.subclass);
            match config.command {
                Command::Check => check(config, &closed),
                Command::Close => close_output(config, &closed),
                Command::Bounds => bounds(config, &closed),
                Command::Explain => explain(config, cs, &closed)?,
                Command::Subclass | Command::Solve => unreachable!(),
            }
            .with_oracle(config, cs, n, &closed)?
        }
    };
    if outcome.text.is_empty() {
        outcome.text.push('\n');
    }
    Ok(outcome)
}

impl Outcome {
    fn with_oracle(
        mut self,
        config: &RunConfig,
        cs: &[Constraint4<Rational>],
        n: usize,
        closed: &ClosureResult<Rational>,
    ) -> crate::Result<Self> {
        if !config.oracle {
            return Ok(self);
        }
        self.disagreement = oracle_verdict(cs, n, closed.feasible)?;
        if self.disagreement.is_none() && closed.feasible && config.command == Command::Bounds {
            self.disagreement = oracle_bounds(cs, n, closed)?;
        }
        Ok(self)
    }
}

fn oracle_verdict(
    cs: &[Constraint4<Rational>],
    n: usize,
    closure_feasible: bool,
) -> crate::Result<Option<String>> {
    let truth = fm_feasible(&LinearSystem::from_constraints(cs, n))?;
    Ok((truth != closure_feasible).then(|| {
        format!(
            "closure reports {}, elimination reports {}",
            verdict(closure_feasible),
            verdict(truth)
        )
    }))
}

fn oracle_bounds(
    cs: &[Constraint4<Rational>],
    n: usize,
    closed: &ClosureResult<Rational>,
) -> crate::Result<Option<String>> {
    let sys = LinearSystem::from_constraints(cs, n);
    for (k, dom) in reduce_domains(&closed.matrix).iter().enumerate() {
        let var = k + 1;
        let mut up = NormalVector::zeros(n + 1);
        up.0[var] = 1;
        up.0[0] = -1;
        let hi = fm_tight_bound(&sys, &up)?;
        let neg_lo = fm_tight_bound(&sys, &up.neg())?;
        let closure_hi = dom.hi.clone().map_or(Bound::Infinite, Bound::Finite);
        let closure_neg_lo = dom
            .lo
            .clone()
            .map_or(Bound::Infinite, |v| Bound::Finite(-v));
        let bad = match closed.exactness {
            Exactness::Exact => closure_hi != hi || closure_neg_lo != neg_lo,
            Exactness::UpperApprox => closure_hi < hi || closure_neg_lo < neg_lo,
        };
        if bad {
            let truth = Interval {
                lo: neg_lo.into_finite().map(|v| -v),
                hi: hi.into_finite(),
            };
            return Ok(Some(format!(
                "x{var}: closure gives {dom}, elimination gives {truth}"
            )));
        }
    }
    Ok(None)
}

fn summary(closed: &ClosureResult<Rational>) -> String {
    format!(
        "{} ({}, {}, {} sweep{})",
        verdict(closed.feasible),
        closed.subclass,
        exactness_text(closed.exactness),
        closed.sweeps_used,
        if closed.sweeps_used == 1 { "" } else { "s" }
    )
}

fn check(config: &RunConfig, closed: &ClosureResult<Rational>) -> Outcome {
    let text = match config.format {
        Format::Text => format!("{}\n", verdict(closed.feasible)),
        Format::Json => json_text(json!({
            "feasible": closed.feasible,
            "sweeps_used": closed.sweeps_used,
            "subclass": closed.subclass,
            "exactness": closed.exactness,
        })),
    };
    Outcome::new(
        text,
        if closed.feasible {
            EXIT_OK
        } else {
            EXIT_INFEASIBLE
        },
    )
}

fn close_output(config: &RunConfig, closed: &ClosureResult<Rational>) -> Outcome {
    let text = match config.format {
        Format::Json => json_text(closed.to_json_value()),
        Format::Text => {
            let mut s = format!("{}\n", summary(closed));
            let m = &closed.matrix;
            for class in 0..m.class_count() {
                let v = m.class_vector(class);
                let cell = m.class_representative(class);
                if v.is_zero() || v.primitive() != *v || !m.cells()[cell].is_finite() {
                    continue;
                }
                let c = Constraint4 {
                    quad: m.quad_of(cell),
                    bound: m.cells()[cell].clone(),
                };
                let _ = writeln!(s, "{c}");
            }
            s
        }
    };
    Outcome::new(text, EXIT_OK)
}

fn domains_json(domains: &[Interval<Rational>]) -> serde_json::Value {
    domains
        .iter()
        .enumerate()
        .map(|(k, d)| json!({ "var": k + 1, "lo": d.lo_text(), "hi": d.hi_text() }))
        .collect()
}

fn bounds(config: &RunConfig, closed: &ClosureResult<Rational>) -> Outcome {
    let domains = if closed.feasible {
        reduce_domains(&closed.matrix)
    } else {
        Vec::new()
    };
    let text = match config.format {
        Format::Json => json_text(json!({
            "feasible": closed.feasible,
            "exactness": closed.exactness,
            "domains": domains_json(&domains),
        })),
        Format::Text if !closed.feasible => "infeasible\n".to_string(),
        Format::Text => domains
            .iter()
            .enumerate()
            .map(|(k, d)| format!("x{} in {d}\n", k + 1))
            .collect(),
    };
    Outcome::new(text, EXIT_OK)
}

fn solve_text(report: &SolveReport<Rational>) -> String {
    let mut s = format!("{}\n", summary(&report.closed));
    for (k, d) in report.domains.iter().enumerate() {
        let _ = writeln!(s, "x{} in {d}", k + 1);
    }
    match &report.witness {
        Some(w) => {
            let values: Vec<String> = w
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, v)| format!("x{k} = {v}"))
                .collect();
            let _ = writeln!(s, "witness: {}", values.join(", "));
        }
        None if report.feasible => s.push_str("witness: none (unbounded; see --witness-anyway)\n"),
        None => {}
    }
    s
}

fn explain(
    config: &RunConfig,
    cs: &[Constraint4<Rational>],
    closed: &ClosureResult<Rational>,
) -> crate::Result<Outcome> {
    if closed.feasible {
        let text = match config.format {
            Format::Text => "feasible: no negative hypercycle\n".to_string(),
            Format::Json => json_text(json!({ "feasible": true, "cycle": null })),
        };
        return Ok(Outcome::new(text, EXIT_OK));
    }
    let trivial = cs
        .iter()
        .find(|c| c.quad.normal_vector(c.quad.max_index()).is_zero() && c.bound.is_negative());
    let (members, coeffs, weight): (Vec<String>, Vec<String>, Option<String>) =
        if let Some(c) = trivial {
            (
                vec![c.to_string()],
                vec!["1".into()],
                c.bound.finite().map(ToString::to_string),
            )
        } else {
            let caps = Caps {
                max_size: config.max_cycle_size,
                max_constraints: DEFAULT_MAX_CONSTRAINTS,
            };
            match most_negative_hcycle(cs, caps)? {
                Some((f, w)) => (
                    f.members.iter().map(ToString::to_string).collect(),
                    f.coeffs.iter().map(ToString::to_string).collect(),
                    Some(w.to_string()),
                ),
                None => (Vec::new(), Vec::new(), None),
            }
        };
    let text = match (config.format, &weight) {
        (Format::Json, Some(w)) => json_text(json!({
            "feasible": false,
            "cycle": { "constraints": members, "coeffs": coeffs, "weight": w },
        })),
        (Format::Json, None) => json_text(json!({
            "feasible": false,
            "cycle": null,
            "max_cycle_size": config.max_cycle_size,
        })),
        (Format::Text, Some(w)) => {
            let mut s = format!("infeasible: negative hypercycle of weight {w}\n");
            for (c, l) in members.iter().zip(&coeffs) {
                let _ = writeln!(s, "  {l} * ({c})");
            }
            s
        }
        (Format::Text, None) => format!(
            "infeasible: no negative simple hypercycle with at most {} constraints\n",
            config.max_cycle_size
        ),
    };
    Ok(Outcome::new(text, EXIT_OK))
}
