//! Acceptance run: one PASS/FAIL line per criterion, with per-case detail above the summary.

use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use recip_core::analysis::GAUSS13;
use recip_core::engine::checks;
use recip_core::engine::{
    phi_weight, reciprocity_sides, sieve_parts, verify_dirichlet_lemma, verify_reciprocity, SpectralPoint, TruncationPolicy,
    VerificationReport,
};

const PAIRS: [(u64, u64); 6] = [(2, 3), (3, 2), (2, 5), (5, 2), (2, 7), (5, 7)];

fn points() -> [Complex64; 2] {
    [Complex64::new(1.5, 0.0), Complex64::new(1.4, 0.3)]
}

/// Written straight to stdout so that the lines survive output capture.
fn say(line: String) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn describe(r: &VerificationReport) -> String {
    let status = if r.pass { "ok" } else { "FAIL" };
    let err = r.error_kind().map(|e| format!(" error={e}")).unwrap_or_default();
    format!("{:<28} {status:<4} rel_gap={:.3e} budget={:.3e} {:.0} ms{err}", r.identity, r.rel_gap, r.budget, r.runtime_ms)
}

/// Every report passes and the sweep ran within `seconds`.
fn sweep(reports: &[VerificationReport], seconds: f64, elapsed: f64) -> Outcome {
    let mut pass = elapsed <= seconds;
    for r in reports {
        say(format!("    {}", describe(r)));
        pass &= r.pass && r.is_consistent();
    }
    outcome(pass, format!("{} reports, {elapsed:.1} s of {seconds:.0} s allowed", reports.len()))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed().as_secs_f64())
}

fn criterion_1_and_10() -> (Outcome, Outcome) {
    let policy = TruncationPolicy::default();
    let (mut pass, mut sab_all_fail) = (true, true);
    let (mut worst_ratio, mut worst_move, mut slowest) = (0.0f64, 0.0f64, 0.0f64);
    for (p, q) in PAIRS {
        let mut pair_seconds = 0.0;
        for s in points() {
            let sp = SpectralPoint::new(s).unwrap();
            let (report, secs) = timed(|| verify_reciprocity(p, q, sp, &GAUSS13, &policy, 1e-3, false));
            pair_seconds += secs;
            let report = match report {
                Ok(r) => r,
                Err(e) => {
                    say(format!("    ({p},{q}) s={s}: error {e}"));
                    pass = false;
                    continue;
                }
            };
            let threshold = 1e-3f64.max(3.0 * report.budget);
            worst_ratio = worst_ratio.max(report.rel_gap / threshold);

            let phi = phi_weight(&GAUSS13, sp).unwrap();
            let doubled = reciprocity_sides(p, q, sp, &GAUSS13, &phi, &policy.doubled(), false).unwrap();
            let (lhs, rhs): (Complex64, Complex64) = (report.lhs.into(), report.rhs.into());
            let move_l = (doubled.lhs.value - lhs).norm() / report.real_param("lhs.budget").unwrap();
            let move_r = (doubled.rhs.value - rhs).norm() / report.real_param("rhs.budget").unwrap();
            worst_move = worst_move.max(move_l).max(move_r);
            let honest = move_l < 1.0 && move_r < 1.0;

            let sab = verify_reciprocity(p, q, sp, &GAUSS13, &policy, 1e-3, true).unwrap();
            sab_all_fail &= !sab.pass;
            say(format!(
                "    ({p},{q}) s={s}: {} rel_gap={:.3e} threshold={threshold:.3e} move/budget lhs={move_l:.3} rhs={move_r:.3} {:.1} s | sabotage {} rel_gap={:.3e}",
                if report.pass { "ok" } else { "FAIL" },
                report.rel_gap,
                secs,
                if sab.pass { "PASSED" } else { "failed" },
                sab.rel_gap,
            ));
            pass &= report.pass && report.is_consistent() && honest;
        }
        slowest = slowest.max(pair_seconds);
        pass &= pair_seconds <= 180.0;
    }
    (
        outcome(
            pass,
            format!("12 cases, worst gap/threshold {worst_ratio:.3}, worst doubling move/budget {worst_move:.3}, slowest pair {slowest:.0} s of 180 s"),
        ),
        outcome(sab_all_fail, "exponent 2s in place of 2s-1 on all 12 reciprocity cases".into()),
    )
}

fn criterion_2() -> Outcome {
    let policy = TruncationPolicy::default();
    let mut pass = true;
    let (mut worst, mut slowest) = (0.0f64, 0.0f64);
    for (p, q) in PAIRS {
        for s in points() {
            let sp = SpectralPoint::new(s).unwrap();
            let (parts, secs) = timed(|| sieve_parts(p, q, sp, &GAUSS13, &policy));
            let Ok(parts) = parts else {
                say(format!("    ({p},{q}) s={s}: error {:?}", parts.err()));
                pass = false;
                continue;
            };
            slowest = slowest.max(secs);
            for r in [parts.sieve_report(1e-3).unwrap(), parts.ng_s_report(1e-3).unwrap()] {
                let b = r.abs_budget().unwrap();
                let ratio = r.abs_gap / (3.0 * b);
                worst = worst.max(ratio);
                say(format!("    ({p},{q}) s={s} {:<6} residual={:.3e} 3*budget={:.3e} {:.1} s", r.identity, r.abs_gap, 3.0 * b, secs));
                pass &= r.abs_gap <= 3.0 * b && r.is_consistent();
            }
            pass &= secs <= 120.0;
        }
    }
    outcome(pass, format!("24 residuals, worst residual/(3 budget) {worst:.3}, slowest case {slowest:.1} s of 120 s"))
}

fn main() {
    let _ = rayon::ThreadPoolBuilder::new().num_threads(1).build_global();
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();

    let mut run = |n: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        say(format!("criterion {n} ({name}):"));
        let o = f();
        results.push((n, name, o));
    };

    run(3, "Kloosterman p-reduction clauses", &mut || {
        let (r, t) = timed(|| checks::kloo_lemmas(&[2, 3, 5], 300, 20, 1e-9));
        sweep(&r, 10.0, t)
    });
    run(4, "Weil bound", &mut || {
        let (r, t) = timed(|| vec![checks::weil(5000, 1000, 7)]);
        sweep(&r, 30.0, t)
    });
    run(5, "Hecke relations", &mut || {
        let (r, t) = timed(|| checks::hecke(2000, 100_000, 10_000));
        sweep(&r, 30.0, t)
    });
    run(6, "special functions", &mut || {
        let (mut r, t) = timed(|| checks::gamma_identities(1e-11));
        let (m, u) = timed(|| checks::mellin_checks(1e-8, 1e-9));
        r.extend(m);
        sweep(&r, f64::INFINITY, t + u)
    });
    run(7, "transforms", &mut || {
        let (r, t) = timed(|| checks::phi_admissible(&GAUSS13, &[0.6, 0.9, 1.2], 1e-8, 1e-10));
        sweep(&r, f64::INFINITY, t)
    });
    run(8, "L-functions", &mut || {
        let (mut r, t) = timed(|| checks::lfe(12, 1e-8, 1e-6));
        let (d, u) = timed(|| checks::dgfe(12, 1e-6));
        r.push(d);
        // the gaps themselves must meet the thresholds, whatever the tail budget
        let strict = r[0].rel_gap < 1e-8 && r[1].abs_gap < 1e-6 && r[2].abs_gap < 1e-6;
        let o = sweep(&r, 120.0, t + u);
        outcome(o.pass && strict, o.detail)
    });
    run(9, "Dirichlet-series lemma", &mut || {
        let a = verify_dirichlet_lemma(2, Complex64::new(3.0, 0.0), 10_000, 1e-8).unwrap();
        let b = verify_dirichlet_lemma(3, Complex64::new(1.5, 0.5), 100_000, 1e-4).unwrap();
        let o = sweep(&[a.clone(), b.clone()], f64::INFINITY, 0.0);
        outcome(o.pass && a.rel_gap < 1e-8 && b.rel_gap < 1e-4, format!("rel gaps {:.3e} and {:.3e}", a.rel_gap, b.rel_gap))
    });
    run(2, "sieving identity and rearranged chain", &mut criterion_2);
    say("criterion 1 (reciprocity) and criterion 10 (sabotage):".into());
    let (one, ten) = criterion_1_and_10();
    results.push((1, "reciprocity", one));
    results.push((10, "falsifiability", ten));

    results.sort_by_key(|(n, _, _)| *n);
    say(String::new());
    for (n, name, o) in &results {
        say(format!("criterion {n:>2} {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail));
    }
    if results.iter().any(|(_, _, o)| !o.pass) {
        std::process::exit(1);
    }
}
