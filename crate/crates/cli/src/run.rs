use std::fmt::Write as _;
use std::path::Path;

use fmetric::analysis::{min_alpha, search_fmetric_not_metric};
use fmetric::axioms::check_axioms;
use fmetric::chittenden::chittenden_report;
use fmetric::induced::{compare, induced_metric};
use fmetric::space::load_space;
use fmetric::sweep::{regularity_sweep, SweepConfig};
use fmetric::{Error, FiniteSpace, Verdict, Witness};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, RunConfig};
use crate::error::CliError;

/// A finished command: its JSON report, a human rendering, and whether every
/// verdict in it passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub report: Value,
    pub table: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    match config.command {
        Command::Verify => verify(config),
        Command::Induce => induce(config),
        Command::Certify => certify(config),
        Command::MinAlpha => min_alpha_cmd(config),
        Command::Search => search(config),
        Command::Sweep => sweep(config),
    }
}

fn load(config: &RunConfig) -> Result<FiniteSpace, CliError> {
    let path = config.space_path.as_deref().expect("validated: command requires --space");
    load_space(path).map_err(|source| CliError::Read { path: path.display().to_string(), source })
}

fn witness(config: &RunConfig) -> Result<Witness, CliError> {
    Ok(Witness::new(config.generator, config.alpha)?)
}

fn envelope(config: &RunConfig, passed: bool, body: impl Serialize) -> Value {
    json!({
        "command": config.command.name(),
        "status": if passed { "pass" } else { "fail" },
        "tol": config.tol,
        "report": serde_json::to_value(body).expect("reports serialize"),
    })
}

fn space_name(path: Option<&Path>) -> String {
    path.map(|p| p.display().to_string()).unwrap_or_default()
}

fn mark<E>(v: &Verdict<E>) -> &'static str {
    if v.passed() {
        "pass"
    } else {
        "FAIL"
    }
}

/// Rounds to 9 significant digits for table output.
pub fn sig9(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    format!("{x:.8e}").parse::<f64>().map(|r| r.to_string()).unwrap_or_else(|_| x.to_string())
}

/// The space could not be certified because it is not an F-metric.
fn refused(config: &RunConfig, err: Error) -> Result<Outcome, CliError> {
    match err {
        Error::NotFMetric(report) => {
            let mut table = format!("refused: not an F-metric under ({})\n", report.witness);
            axiom_lines(&mut table, &report);
            Ok(Outcome { passed: false, report: envelope(config, false, json!({ "refused": report })), table })
        }
        other => Err(other.into()),
    }
}

fn axiom_lines(out: &mut String, r: &fmetric::AxiomReport) {
    let _ = writeln!(out, "D1 {}", mark(&r.d1));
    if let Some(p) = r.d1.evidence() {
        let _ = writeln!(out, "   zero distance at pair ({}, {})", p.i, p.j);
    }
    let note = if r.d2.symmetrized_at_load { " (symmetrized at load)" } else { "" };
    let _ = writeln!(out, "D2 {}{note}", mark(&r.d2.verdict));
    let _ = writeln!(out, "D3 {}", mark(&r.d3));
    if let Some(v) = r.d3.evidence() {
        let chain: Vec<String> = v.chain.iter().map(usize::to_string).collect();
        let _ = writeln!(
            out,
            "   pair ({}, {}) chain {} sum {}: f(D) = {} > f(sum) + alpha = {}",
            v.pair.i,
            v.pair.j,
            chain.join("-"),
            sig9(v.chain_sum),
            sig9(v.lhs),
            sig9(v.rhs)
        );
    }
}

fn verify(config: &RunConfig) -> Result<Outcome, CliError> {
    let space = load(config)?;
    let w = witness(config)?;
    let report = check_axioms(&space, &w, config.tol)?;
    let mut table = format!("{} ({} points) under ({w})\n", space_name(config.space_path.as_deref()), space.len());
    axiom_lines(&mut table, &report);
    let _ = writeln!(table, "overall {}", if report.passed { "pass" } else { "FAIL" });
    Ok(Outcome { passed: report.passed, report: envelope(config, report.passed, &report), table })
}

fn induce(config: &RunConfig) -> Result<Outcome, CliError> {
    let space = load(config)?;
    let w = witness(config)?;
    let im = match induced_metric(&space, &w, config.tol) {
        Ok(im) => im,
        Err(e) => return refused(config, e),
    };
    let relations = compare(&space, &im, config.tol)?;
    let mut table = String::new();
    let _ = writeln!(table, "induced metric d ({w})");
    let _ = writeln!(table, "{}", space.labels().join("\t"));
    for row in im.d().rows() {
        let cells: Vec<String> = row.iter().map(|&v| sig9(v)).collect();
        let _ = writeln!(table, "{}", cells.join("\t"));
    }
    for p in &relations.pairs {
        let _ = writeln!(
            table,
            "({}, {}) d = {} <= D = {} [{}]  f(D) = {} <= f(d) + alpha = {} [{}]",
            p.i,
            p.j,
            sig9(p.induced),
            sig9(p.direct),
            if p.raw_holds { "ok" } else { "FAIL" },
            sig9(p.f_direct),
            sig9(p.f_induced_plus_alpha),
            if p.f_holds { "ok" } else { "FAIL" }
        );
    }
    let body = json!({ "induced": im.to_document(), "compare": relations });
    Ok(Outcome { passed: relations.passed, report: envelope(config, relations.passed, body), table })
}

fn certify(config: &RunConfig) -> Result<Outcome, CliError> {
    let space = load(config)?;
    let w = witness(config)?;
    let report = match chittenden_report(&space, &w, &config.epsilons, config.tol) {
        Ok(r) => r,
        Err(e) => return refused(config, e),
    };
    let mut table = String::new();
    let _ = writeln!(table, "(i)   separation  {}", mark(&report.condition_i));
    let _ = writeln!(table, "(ii)  symmetry    {}", mark(&report.condition_ii.verdict));
    let _ = writeln!(
        table,
        "(iii) regularity  {} ({} premises fired, {} violations)",
        if report.condition_iii.passed { "pass" } else { "FAIL" },
        report.condition_iii.premises_fired,
        report.condition_iii.violations.len()
    );
    let _ = writeln!(table, "epsilon\tdelta\tphi");
    for e in &report.certificate.entries {
        let _ = writeln!(table, "{}\t{}\t{}", sig9(e.epsilon), sig9(e.delta), sig9(e.phi));
    }
    let _ = writeln!(table, "{}", report.conclusion);
    Ok(Outcome { passed: report.passed, report: envelope(config, report.passed, &report), table })
}

fn min_alpha_cmd(config: &RunConfig) -> Result<Outcome, CliError> {
    let space = load(config)?;
    let m = min_alpha(&space, config.generator)?;
    let mut table = format!("alpha* = {}", sig9(m.alpha_star));
    if let Some(p) = m.binding {
        let _ = write!(table, " (binding pair ({}, {}))", p.i, p.j);
    }
    table.push('\n');
    Ok(Outcome { passed: true, report: envelope(config, true, &m), table })
}

fn search(config: &RunConfig) -> Result<Outcome, CliError> {
    let result =
        search_fmetric_not_metric(config.generator, config.alpha, config.n, config.trials, config.seed, config.tol)?;
    let mut table = format!(
        "{} hits in {} trials ({}, alpha = {}, n = {}, seed = {})\n",
        result.hits.len(),
        result.trials,
        result.generator,
        sig9(result.alpha),
        result.n,
        result.seed
    );
    for hit in &result.hits {
        if let Some(t) = hit.metric.evidence() {
            let _ = writeln!(
                table,
                "trial {}: triangle ({}, {}, {}) {} > {}",
                hit.trial,
                t.x,
                t.y,
                t.z,
                sig9(t.direct),
                sig9(t.via)
            );
        }
    }
    Ok(Outcome { passed: true, report: envelope(config, true, &result), table })
}

fn sweep(config: &RunConfig) -> Result<Outcome, CliError> {
    let report = regularity_sweep(&SweepConfig {
        generator: config.generator,
        alpha: config.alpha,
        n: config.n,
        trials: config.trials,
        seed: config.seed,
        epsilons: config.epsilons.clone(),
        tol: config.tol,
    })?;
    let mut table = String::new();
    let _ = writeln!(table, "generated: {}", report.generated);
    let _ = writeln!(table, "instances: {}", report.instances);
    let _ = writeln!(table, "valid: {}", report.valid);
    let _ = writeln!(table, "premises fired: {}", report.premises_fired);
    let _ = writeln!(table, "violations: {}", report.violations);
    let _ = writeln!(table, "proof-step violations: {}", report.proof_step_violations);
    Ok(Outcome { passed: report.passed, report: envelope(config, report.passed, &report), table })
}
