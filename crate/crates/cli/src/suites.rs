//! Runs the scheduled suites and renders their reports.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use recip_core::analysis::test_function;
use recip_core::engine::checks;
use recip_core::engine::{sieve_parts, verify_dirichlet_lemma, verify_reciprocity, Param, Params, SieveParts, SpectralPoint, VerificationReport};
use recip_core::Error;

use crate::config::{RunConfig, Settings, Suite};

const KLOO_PRIMES: [u64; 3] = [2, 3, 5];
const KLOO_C_MAX: u64 = 300;
const KLOO_MN_MAX: i64 = 20;
const WEIL_C_MAX: u64 = 5000;
const WEIL_PAIRS: usize = 1000;
const WEIL_SEED: u64 = 20_240_601;
const CRT_C_MAX: u64 = 40;
const HECKE_MN_MAX: usize = 2000;
const HECKE_N_MAX: usize = 100_000;
const DELIGNE_N_MAX: usize = 10_000;
const DIVISOR_N_MAX: u64 = 60;
const L_C_MAX: u64 = 12;
const CERT_POINTS: [f64; 3] = [0.6, 0.9, 1.2];
/// (p, s, M, tolerance) for the Dirichlet-series lemma.
const DIRICHLET_CASES: [(u64, f64, f64, usize, f64); 2] = [(2, 3.0, 0.0, 10_000, 1e-8), (3, 1.5, 0.5, 100_000, 1e-4)];

/// Recomputing the sieve parts for ng-s would double the cost of the composite suites.
type SieveKey = (u64, u64, [u64; 2], String, u64, usize);

#[derive(Default)]
pub struct Runner {
    sieve: HashMap<SieveKey, Result<SieveParts, Error>>,
}

fn with_context(mut r: VerificationReport, extra: &[(&str, Param)]) -> VerificationReport {
    for (k, v) in extra {
        r.params.entry(k.to_string()).or_insert_with(|| v.clone());
    }
    r
}

fn failed(identity: &str, e: &Error, p: u64, q: u64, s: Complex64) -> VerificationReport {
    let mut params = Params::new();
    params.insert("p".into(), p.into());
    params.insert("q".into(), q.into());
    params.insert("s".into(), s.into());
    VerificationReport::failed(identity, e, params)
}

impl Runner {
    pub fn run(&mut self, config: &RunConfig) -> Vec<VerificationReport> {
        let mut out = Vec::new();
        for &suite in &config.suites {
            out.extend(self.run_suite(suite, config.settings(suite)));
        }
        out
    }

    pub fn run_suite(&mut self, suite: Suite, st: &Settings) -> Vec<VerificationReport> {
        let tol = |default: f64| st.rel_tol.unwrap_or(default);
        match suite {
            Suite::All => Vec::new(),
            Suite::KlooLemmas => checks::kloo_lemmas(&KLOO_PRIMES, st.cmax.unwrap_or(KLOO_C_MAX), KLOO_MN_MAX, tol(checks::KLOO_TOLERANCE)),
            Suite::Weil => vec![checks::weil(st.cmax.unwrap_or(WEIL_C_MAX), WEIL_PAIRS, WEIL_SEED)],
            Suite::Crt => vec![checks::crt(st.cmax.unwrap_or(CRT_C_MAX), tol(checks::CRT_TOLERANCE))],
            Suite::Hecke => checks::hecke(HECKE_MN_MAX, HECKE_N_MAX, DELIGNE_N_MAX),
            Suite::DivisorHecke => vec![checks::divisor_hecke(DIVISOR_N_MAX, tol(checks::DIVISOR_HECKE_TOLERANCE))],
            Suite::Gamma => checks::gamma_identities(tol(checks::GAMMA_TOLERANCE)),
            Suite::Mellin => checks::mellin_checks(tol(checks::MELLIN_TOLERANCE), tol(checks::CAHEN_MELLIN_TOLERANCE)),
            Suite::Lfe => checks::lfe(st.cmax.unwrap_or(L_C_MAX), tol(checks::LFE_DIRECT_TOLERANCE), tol(checks::FE_TOLERANCE)),
            Suite::Dgfe => vec![checks::dgfe(st.cmax.unwrap_or(L_C_MAX), tol(checks::FE_TOLERANCE))],
            Suite::PhiAdmissible => {
                let f = test_function(&st.function).expect("validated");
                checks::phi_admissible(&f, &CERT_POINTS, tol(checks::CONTOUR_TOLERANCE), tol(checks::REALITY_TOLERANCE))
            }
            Suite::DirichletLemma => DIRICHLET_CASES
                .iter()
                .map(|&(p, re, im, m, t)| {
                    let s = Complex64::new(re, im);
                    verify_dirichlet_lemma(p, s, m, tol(t)).unwrap_or_else(|e| failed("dirichlet-lemma", &e, p, 0, s))
                })
                .collect(),
            Suite::Sieve | Suite::NgS | Suite::Reciprocity => self.composite(suite, st),
        }
    }

    fn composite(&mut self, suite: Suite, st: &Settings) -> Vec<VerificationReport> {
        let f = test_function(&st.function).expect("validated");
        let tol = st.composite_tolerance();
        let mut out = Vec::new();
        for &(p, q) in &st.pairs {
            for &s in &st.points {
                let sp = match SpectralPoint::new(s) {
                    Ok(sp) => sp,
                    Err(e) => {
                        out.push(failed(&suite.name(), &e, p, q, s));
                        continue;
                    }
                };
                let report = match suite {
                    Suite::Reciprocity => verify_reciprocity(p, q, sp, &f, &st.policy, tol, st.sabotage),
                    _ => {
                        let key = (p, q, [s.re.to_bits(), s.im.to_bits()], f.name.to_string(), st.policy.c_max, st.policy.mn_cap);
                        let parts = self.sieve.entry(key).or_insert_with(|| sieve_parts(p, q, sp, &f, &st.policy));
                        match parts {
                            Ok(parts) if suite == Suite::Sieve => parts.sieve_report(tol),
                            Ok(parts) => parts.ng_s_report(tol),
                            Err(e) => Err(e.clone()),
                        }
                    }
                };
                let identity = match suite {
                    Suite::Sieve => "sieve",
                    Suite::NgS => "ng-s",
                    _ => "reciprocity",
                };
                out.push(report.unwrap_or_else(|e| failed(identity, &e, p, q, s)));
            }
        }
        out.into_iter().map(|r| with_context(r, &[("function", f.name.into())])).collect()
    }
}

/// 0 when every report passes, 2 when any could not be evaluated, 1 otherwise.
pub fn exit_code(reports: &[VerificationReport]) -> i32 {
    if reports.iter().any(|r| r.error_kind().is_some()) {
        2
    } else if reports.iter().all(|r| r.pass) {
        0
    } else {
        1
    }
}

fn summary_params(r: &VerificationReport) -> String {
    if let Some(Param::Text(msg)) = r.params.get("message") {
        return msg.clone();
    }
    let mut s = String::new();
    for key in ["p", "q", "s", "c", "m", "n", "x", "z", "u", "t"] {
        let v = match r.params.get(key) {
            Some(Param::Int(i)) => i.to_string(),
            Some(Param::Real(x)) => format!("{x}"),
            Some(Param::Complex(z)) if z.im == 0.0 => format!("{}", z.re),
            Some(Param::Complex(z)) => format!("{}{:+}i", z.re, z.im),
            _ => continue,
        };
        let _ = write!(s, "{key}={v} ");
    }
    s.trim_end().to_string()
}

pub fn render_table(reports: &[VerificationReport]) -> String {
    let width = reports.iter().map(|r| r.identity.len()).max().unwrap_or(8).max(8);
    let mut out = format!(
        "{:<width$}  {:<5}  {:>10}  {:>10}  {:>9}  {:>10}  {}\n",
        "identity", "pass", "rel_gap", "budget", "tolerance", "runtime_ms", "case"
    );
    for r in reports {
        let status = match (r.error_kind(), r.pass) {
            (Some(_), _) => "ERROR",
            (None, true) => "ok",
            (None, false) => "FAIL",
        };
        let tol = r.tolerance().map_or_else(|| "-".to_string(), |t| format!("{t:.1e}"));
        let _ = writeln!(
            out,
            "{:<width$}  {:<5}  {:>10.3e}  {:>10.3e}  {:>9}  {:>10.1}  {}",
            r.identity,
            status,
            r.rel_gap,
            r.budget,
            tol,
            r.runtime_ms,
            summary_params(r)
        );
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    let _ = writeln!(out, "{passed}/{} passed", reports.len());
    out
}
