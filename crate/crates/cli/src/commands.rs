//! One function per subcommand. Each returns what should be written and the
//! exit code to finish with.

use std::path::PathBuf;

use num_bigint::BigInt;
use serde_json::{json, Value};

use qcircle::asymptotic::{
    certificate_from_budget, error_budget, g1_main, g2_main, Certificate, UncertifiedReason,
};
use qcircle::farey::{covering_check, farey_sequence, make_tau};
use qcircle::lemmas::{lemma_suite, multiplication_identity};
use qcircle::mainterm::{case_classify, compute_residue_data, main_term, main_term_g, ArcParams};
use qcircle::nearpole::{log_g_near_minus1, log_g_near_plus1};
use qcircle::series::{eval_log_g, g_series, ComplexPoint};
use qcircle::specfun::PI;
use qcircle::LogMagnitude;

use crate::config::{OutputFormat, RunConfig};
use crate::error::{exit, CliError, CliResult};
use crate::ledger::VerificationLedger;
use crate::report::{num, Report};

/// Bytes to emit plus the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub exit_code: i32,
    /// Printed on stderr.
    pub notice: Option<String>,
}

impl Outcome {
    fn report(report: &Report, format: OutputFormat, exit_code: i32) -> CliResult<Self> {
        let mut bytes = Vec::new();
        report.write(format, &mut bytes)?;
        Ok(Self {
            bytes,
            exit_code,
            notice: None,
        })
    }
}

fn signed_log(v: LogMagnitude) -> Value {
    num(v.log_abs())
}

pub fn coeffs(n: usize, binary: bool) -> CliResult<Outcome> {
    let series = g_series(n);
    let mut bytes = Vec::new();
    if binary {
        series.write_binary(&mut bytes)?;
    } else {
        series.write_csv(&mut bytes)?;
    }
    Ok(Outcome {
        bytes,
        exit_code: exit::SUCCESS,
        notice: None,
    })
}

pub fn verify_nonneg(
    n: u64,
    checkpoint: Option<PathBuf>,
    resume: bool,
    every: u64,
) -> CliResult<Outcome> {
    if every == 0 {
        return Err(CliError::Precondition("--checkpoint-every must be positive".into()));
    }
    let mut ledger = match (&checkpoint, resume) {
        (Some(path), true) if path.exists() => {
            let l = VerificationLedger::load(path)?;
            if l.checkpoint_every != every {
                return Err(CliError::Precondition(format!(
                    "ledger uses --checkpoint-every {}, got {every}",
                    l.checkpoint_every
                )));
            }
            l
        }
        (None, true) => {
            return Err(CliError::Precondition(
                "--resume needs --checkpoint or QCIRCLE_CHECKPOINT_DIR".into(),
            ))
        }
        _ => VerificationLedger::new(every),
    };

    let order = n.max(if ledger.is_empty() { 0 } else { ledger.verified_up_to });
    let series = g_series(order as usize);
    if let Err(reason) = ledger.verify_against(series.coeffs()) {
        return Err(CliError::CorruptCheckpoint {
            path: checkpoint.clone().unwrap_or_default(),
            reason,
        });
    }
    ledger.advance(series.coeffs(), n, |snapshot| match &checkpoint {
        Some(p) => snapshot.store(p),
        None => Ok(()),
    })?;
    if let Some(p) = &checkpoint {
        ledger.store(p)?;
    }

    let mut bytes = serde_json::to_vec_pretty(&ledger).expect("ledger serializes");
    bytes.push(b'\n');
    let (exit_code, notice) = match &ledger.counterexample {
        Some(c) => (
            exit::COUNTEREXAMPLE,
            Some(format!("counterexample: g({}) = {}", c.n, c.value)),
        ),
        None => (exit::SUCCESS, None),
    };
    Ok(Outcome {
        bytes,
        exit_code,
        notice,
    })
}

pub fn compare(cfg: &RunConfig, ns: &[usize]) -> CliResult<Outcome> {
    if ns.contains(&0) {
        return Err(CliError::Precondition("compare needs n >= 1".into()));
    }
    let max = ns.iter().copied().max().unwrap_or(0);
    let series = g_series(max);
    let mut report = Report::new("compare").table(vec![
        "n",
        "g_exact",
        "g_asym_log",
        "g_asym_sign",
        "rel_err",
        "e_g1_log",
        "e_g2_log",
        "g3_log",
    ]);
    for &n in ns {
        let exact: &BigInt = &series.coeffs()[n];
        let asym = g1_main(n as u128)? + g2_main(n as u128)?;
        let exact_log = LogMagnitude::from(exact);
        let rel = if exact_log.is_zero() {
            Value::Null
        } else {
            num(((asym - exact_log) / exact_log).abs().to_f64())
        };
        let budget = error_budget(n as u128)?;
        report.push_row(vec![
            (n as u64).into(),
            exact.to_string().into(),
            signed_log(asym),
            asym.sign().into(),
            rel,
            signed_log(budget.e_g1),
            signed_log(budget.e_g2),
            signed_log(budget.g3),
        ]);
    }
    Outcome::report(&report, cfg.format_or(OutputFormat::Csv), exit::SUCCESS)
}

pub fn certify(cfg: &RunConfig, n: u128) -> CliResult<Outcome> {
    let budget = error_budget(n)?;
    let certificate = certificate_from_budget(&budget);
    let margin = budget.margin();
    let reason = match certificate {
        Certificate::Certified { .. } => Value::Null,
        Certificate::Uncertified {
            reason: UncertifiedReason::BelowMinorArcThreshold { x },
        } => format!("X = {x} is below 3.4e7").into(),
        Certificate::Uncertified {
            reason: UncertifiedReason::ErrorsDominate { .. },
        } => "error terms are not dominated by the main term".into(),
    };
    let report = Report::new("certify")
        .field("n", n.to_string())
        .field("x", num(budget.x))
        .field("main1_log", signed_log(budget.main1))
        .field("main2_log", signed_log(budget.main2_abs))
        .field("e_g1_log", signed_log(budget.e_g1))
        .field("e_g2_log", signed_log(budget.e_g2))
        .field("g3_log", signed_log(budget.g3))
        .field("margin_log", signed_log(margin))
        .field("margin_sign", margin.sign())
        .field("certified", certificate.is_certified())
        .field("reason", reason);
    Outcome::report(&report, cfg.format_or(OutputFormat::Json), exit::SUCCESS)
}

pub fn mainterm(
    cfg: &RunConfig,
    residue: Option<(i64, i64)>,
    h: i64,
    k: i64,
    x: f64,
    y: f64,
) -> CliResult<Outcome> {
    let arc = ArcParams::new(h, k)?;
    let tau = make_tau(x, y, arc)?;
    let g = main_term_g(arc, &tau)?;
    let mut report = Report::new("mainterm")
        .field("h", h)
        .field("k", k)
        .field("x", num(x))
        .field("y", num(y))
        .field("big_n", tau.big_n())
        .field("case", case_classify(k)?.index())
        .field("main_term_g_re", num(g.re))
        .field("main_term_g_im", num(g.im));
    if let Some((a, m)) = residue {
        let r = compute_residue_data(h, a, k, m)?;
        let v = main_term(a, m, arc, &tau)?;
        report = report
            .field("a", a)
            .field("m", m)
            .field("m_star", r.m_star)
            .field("b", r.b)
            .field("b_star", r.b_star)
            .field("big_k", r.big_k)
            .field("main_term_re", num(v.re))
            .field("main_term_im", num(v.im));
    }
    Outcome::report(&report, cfg.format_or(OutputFormat::Json), exit::SUCCESS)
}

pub fn farey(cfg: &RunConfig, order: u64) -> CliResult<Outcome> {
    let system = farey_sequence(order)?;
    let check = covering_check(order)?;
    let fractions: Vec<Value> = system
        .fractions()
        .iter()
        .map(|a| format!("{}/{}", a.h(), a.k()).into())
        .collect();
    let gaps: Vec<Value> = check
        .gaps
        .iter()
        .map(|(l, r)| json!([l.to_string(), r.to_string()]))
        .collect();
    let mut report = Report::new("farey")
        .field("order", order)
        .field("count", system.len())
        .field("covers", check.covers())
        .field("mediant_bounds_hold", check.mediant_violations.is_empty())
        .field("determinants_hold", check.determinant_violations.is_empty())
        .field("gaps", gaps);
    let format = cfg.format_or(OutputFormat::Json);
    if format == OutputFormat::Json {
        report = report.field("fractions", fractions);
    } else {
        report = report.table(vec!["h", "k"]);
        for a in system.fractions() {
            report.push_row(vec![a.h().into(), a.k().into()]);
        }
    }
    Outcome::report(&report, format, exit::SUCCESS)
}

pub fn nearpole(cfg: &RunConfig, xs: &[f64], y_fractions: &[f64]) -> CliResult<Outcome> {
    let mut report = Report::new("nearpole").table(vec![
        "x",
        "y",
        "pole",
        "approx_re",
        "approx_im",
        "truth_re",
        "truth_im",
        "abs_err",
        "bound",
        "within_bound",
    ]);
    let mut all_within = true;
    for &x in xs {
        for &f in y_fractions {
            let y = f / (2.0 * PI * x);
            let tau = qcircle::mainterm::TauParam::new(x, y)?;
            let q = ComplexPoint::from_tau(x, y, 1, 1)?;
            for (pole, point, approx) in [
                ("+1", q, log_g_near_plus1(&tau)?),
                ("-1", q.negated(), log_g_near_minus1(&tau)?),
            ] {
                let truth = eval_log_g(point, cfg.tol)?;
                let err = (truth - approx.value).norm();
                let within = err <= approx.err_bound;
                all_within &= within;
                report.push_row(vec![
                    num(x),
                    num(y),
                    pole.into(),
                    num(approx.value.re),
                    num(approx.value.im),
                    num(truth.re),
                    num(truth.im),
                    num(err),
                    num(approx.err_bound),
                    within.into(),
                ]);
            }
        }
    }
    let code = if all_within { exit::SUCCESS } else { exit::COUNTEREXAMPLE };
    Outcome::report(&report, cfg.format_or(OutputFormat::Csv), code)
}

pub fn identities(cfg: &RunConfig, k_max: i64, tol: f64) -> CliResult<Outcome> {
    if k_max < 1 {
        return Err(CliError::Precondition("--k-max must be at least 1".into()));
    }
    let mut reports = lemma_suite(k_max)?;
    reports.push(multiplication_identity(k_max, &[0.0, 0.5, 2.0])?);
    let mut report = Report::new("identities")
        .field("k_max", k_max)
        .field("tol", num(tol))
        .table(vec!["identity", "checks", "max_abs_error", "worst_k", "worst_index", "pass"]);
    let mut all = true;
    for r in &reports {
        all &= r.passes(tol);
        report.push_row(vec![
            r.name.into(),
            r.checks.into(),
            num(r.max_abs_error),
            r.worst_at.0.into(),
            r.worst_at.1.into(),
            r.passes(tol).into(),
        ]);
    }
    let code = if all { exit::SUCCESS } else { exit::COUNTEREXAMPLE };
    Outcome::report(&report, cfg.format_or(OutputFormat::Csv), code)
}
