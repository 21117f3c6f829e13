//! The fourteen acceptance criteria, each checked against tolerances pinned here.
//!
//! Every criterion names the suite checks it consumes. A criterion passes when every
//! matched check passes, the check's own bound equals the pinned one, enough checks
//! matched, and their summed runtime stays within the limit.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;
use std::process::ExitCode;
use std::time::Instant;

use varlp::checks::Ctx;
use varlp::config::ExperimentConfig;
use varlp::fixtures::Fixtures;
use varlp::report::{CheckResult, Polarity};
use varlp::suites;

/// Truncation order of the iteration series.
const K: i32 = 8;

/// Norm solver tolerance of the default configuration.
const NORM_TOL: f64 = 1e-10;

#[derive(Clone, Copy)]
enum Id {
    Exact(&'static str),
    Prefix(&'static str),
}

impl Id {
    fn matches(self, id: &str) -> bool {
        match self {
            Id::Exact(s) => id == s,
            Id::Prefix(s) => id.starts_with(s),
        }
    }

    fn text(self) -> &'static str {
        match self {
            Id::Exact(s) | Id::Prefix(s) => s,
        }
    }
}

struct Rule {
    id: Id,
    polarity: Polarity,
    bound: f64,
    count: usize,
}

fn at_most(id: Id, bound: f64, count: usize) -> Rule {
    Rule { id, polarity: Polarity::AtMost, bound, count }
}

fn at_least(id: Id, bound: f64, count: usize) -> Rule {
    Rule { id, polarity: Polarity::AtLeast, bound, count }
}

struct Criterion {
    number: usize,
    name: &'static str,
    suites: &'static [&'static str],
    limit_s: f64,
    rules: Vec<Rule>,
}

fn criteria(fx: &Fixtures) -> Vec<Criterion> {
    use Id::{Exact, Prefix};
    let slack = (-(K as f64) + 1.0).exp2();
    vec![
        Criterion {
            number: 1,
            name: "geometry exactness",
            suites: &["geometry"],
            limit_s: 5.0,
            rules: vec![
                at_most(Prefix("geometry.quasi-triangle.n"), 0.0, 2),
                at_most(Prefix("geometry.symmetry.n"), 0.0, 2),
                at_most(Prefix("geometry.range.n"), 0.0, 2),
            ],
        },
        Criterion {
            number: 2,
            name: "measure growth",
            suites: &["measure"],
            limit_s: 60.0,
            rules: vec![at_most(Prefix("measure.growth.alpha"), 50.0, 3), at_most(Prefix("measure.refinement.alpha"), 1e-3, 3)],
        },
        Criterion {
            number: 3,
            name: "Luxemburg correctness",
            suites: &["norms"],
            limit_s: 30.0,
            rules: vec![at_most(Exact("norms.closed-form"), 1e-6, 1), at_most(Exact("norms.modular-at-norm"), 1e-8, 1)],
        },
        Criterion {
            number: 4,
            name: "norm-modular sandwich and Hölder with 2",
            suites: &["norms"],
            limit_s: 120.0,
            rules: vec![at_most(Exact("norms.modular-sandwich"), 0.0, 1), at_most(Exact("norms.holder"), 0.0, 1)],
        },
        Criterion {
            number: 5,
            name: "duality identity",
            suites: &["duality"],
            limit_s: 120.0,
            rules: vec![at_most(Exact("duality.per-ball"), 1e-8, 1), at_least(Exact("duality.lower-bound"), 0.5 - 1e-6, 1)],
        },
        Criterion {
            number: 6,
            name: "characteristic-norm laws",
            suites: &["classes"],
            limit_s: 120.0,
            rules: vec![at_most(Exact("classes.chi-norm"), 10.0, 1), at_most(Exact("classes.chi-weighted-norm"), 10.0, 1)],
        },
        Criterion {
            number: 7,
            name: "class equivalence",
            suites: &["classes"],
            limit_s: 300.0,
            rules: vec![
                at_most(Exact("classes.equivalence"), 0.0, 1),
                at_most(Exact("classes.embedding"), 0.0, 1),
                at_most(Exact("classes.bplusplus-bound"), 0.0, 1),
            ],
        },
        Criterion {
            number: 8,
            name: "mean-value Bergman identity",
            suites: &["bergman-necessity"],
            limit_s: 60.0,
            rules: vec![
                at_most(Prefix("necessity.mean-value.spread("), 1e-3, 6),
                at_most(Prefix("necessity.mean-value.value("), 1e-3, 6),
            ],
        },
        Criterion {
            number: 9,
            name: "regularization",
            suites: &["regularization"],
            limit_s: 300.0,
            rules: vec![
                at_most(Exact("regularization.commutation"), 0.0, 1),
                at_most(Exact("regularization.self-adjoint"), 0.0, 1),
                at_most(Exact("regularization.pointwise"), 0.0, 1),
                at_most(Exact("regularization.transfer"), 0.0, 1),
            ],
        },
        Criterion {
            number: 10,
            name: "sufficiency sweep",
            suites: &["bergman-sufficiency"],
            limit_s: 600.0,
            rules: vec![at_most(Prefix("sufficiency.maximal."), 1.10, 3), at_most(Prefix("sufficiency.bergman."), 1.10, 3)],
        },
        Criterion {
            number: 11,
            name: "necessity probe",
            suites: &["bergman-necessity"],
            limit_s: 600.0,
            rules: vec![
                at_least(Exact("necessity.bad-count"), 2.0, 1),
                at_least(Prefix("necessity.dyadic["), LN_2, 2),
                at_least(Prefix("necessity.blow-up["), 2.0, 2),
                at_most(Exact("necessity.coherence"), 0.0, 1),
            ],
        },
        Criterion {
            number: 12,
            name: "factorization",
            suites: &["factorization"],
            limit_s: 120.0,
            rules: vec![
                at_most(Exact("factorization.identity"), 1e-10, 1),
                at_most(Exact("factorization.b1"), 2.0 * fx.s_operator_c * (1.0 + slack), 1),
            ],
        },
        Criterion {
            number: 13,
            name: "iteration operators",
            suites: &["factorization"],
            limit_s: 120.0,
            rules: vec![
                at_most(Prefix("iteration.r.dominates"), 0.0, 1),
                at_most(Prefix("iteration.h.dominates"), 0.0, 1),
                at_most(Prefix("iteration.r.norm"), 2.0 + 10.0 * NORM_TOL, 1),
                at_most(Prefix("iteration.h.norm"), 2.0 + 10.0 * NORM_TOL, 1),
                at_most(Prefix("iteration.r.b1"), 1.0 + slack, 1),
                at_most(Prefix("iteration.h.b1"), 1.0 + slack, 1),
            ],
        },
        Criterion {
            number: 14,
            name: "extrapolation constant",
            suites: &["extrapolation"],
            limit_s: 300.0,
            rules: vec![at_most(Prefix("extrapolation[2+1sin|z| / "), 1.0 + 1e-3, 2)],
        },
    ]
}

fn same(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// Verdict and failure lines of one criterion.
fn judge(c: &Criterion, results: &[CheckResult]) -> (bool, Vec<String>, usize, f64) {
    let mut problems = Vec::new();
    let mut matched = 0;
    let mut seconds = 0.0;
    for rule in &c.rules {
        let hits: Vec<&CheckResult> = results.iter().filter(|r| rule.id.matches(&r.check_id)).collect();
        if hits.len() < rule.count {
            problems.push(format!("{}: {} check(s), need {}", rule.id.text(), hits.len(), rule.count));
        }
        for r in hits {
            matched += 1;
            seconds += r.runtime_ms / 1e3;
            if r.polarity != rule.polarity || !same(r.bound, rule.bound) {
                problems.push(format!(
                    "{}: bound {} {:e} differs from pinned {} {:e}",
                    r.check_id,
                    r.polarity.as_str(),
                    r.bound,
                    rule.polarity.as_str(),
                    rule.bound
                ));
            }
            if !rule.polarity.holds(r.statistic, rule.bound) {
                problems.push(format!("{}: {:e} {} {:e} fails", r.check_id, r.statistic, rule.polarity.as_str(), rule.bound));
            }
        }
    }
    if seconds > c.limit_s {
        problems.push(format!("runtime {seconds:.1} s exceeds {} s", c.limit_s));
    }
    (problems.is_empty(), problems, matched, seconds)
}

fn main() -> ExitCode {
    let fixtures = match Fixtures::bundled() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("cannot read bundled fixtures: {e}");
            return ExitCode::FAILURE;
        }
    };
    let cfg = ExperimentConfig::default();
    assert_eq!(cfg.op.big_k as i32, K, "acceptance runs with K = {K}");
    assert_eq!(cfg.norm.tol, NORM_TOL, "acceptance runs with the default norm tolerance");
    let ctx = match Ctx::from_config(&cfg, fixtures.clone(), false) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("cannot build the context: {e}");
            return ExitCode::FAILURE;
        }
    };
    let list = criteria(&fixtures);
    let mut by_suite: BTreeMap<&str, Vec<CheckResult>> = BTreeMap::new();
    let mut errors: BTreeMap<&str, String> = BTreeMap::new();
    for c in &list {
        for s in c.suites {
            if by_suite.contains_key(s) || errors.contains_key(s) {
                continue;
            }
            let t = Instant::now();
            match suites::run_suite(s, &ctx) {
                Ok(r) => {
                    eprintln!("ran {s} in {:.1} s", t.elapsed().as_secs_f64());
                    by_suite.insert(s, r);
                }
                Err(e) => {
                    errors.insert(s, e.to_string());
                }
            }
        }
    }
    let mut failed = 0;
    for c in &list {
        let errs: Vec<String> = c.suites.iter().filter_map(|s| errors.get(s).map(|e| format!("suite {s}: {e}"))).collect();
        let results: Vec<CheckResult> = c.suites.iter().filter_map(|s| by_suite.get(s)).flatten().cloned().collect();
        let (ok, mut problems, matched, seconds) = judge(c, &results);
        problems.extend(errs);
        let ok = ok && problems.is_empty();
        failed += usize::from(!ok);
        println!(
            "{} criterion {:>2} {}: {} checks, {:.1} s (limit {} s)",
            if ok { "PASS" } else { "FAIL" },
            c.number,
            c.name,
            matched,
            seconds,
            c.limit_s
        );
        for p in problems {
            println!("     {p}");
        }
    }
    println!("{} of {} criteria passed", list.len() - failed, list.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
