use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use varlp_core::exponent::{bounds_of, ExponentField};
use varlp_core::geometry::{Point, PseudoBall};
use varlp_core::measure::RegionRule;
use varlp_core::norms::{dual_corpus, luxemburg_norm, modular, sandwich, subordinate_norm_lb, NormOptions};
use varlp_core::numeric::seeded;
use varlp_core::weights::Weight;

use super::{rel, Ctx};
use crate::corpus::{exponent_corpus, random_fields, sin_exponent, weight_corpus};
use crate::error::Result;
use crate::report::{timed, CheckResult};

/// Comparison slack of the sandwich, Hölder and identity checks.
fn slack(opts: &NormOptions) -> f64 {
    10.0 * opts.tol
}

/// Closed-form constant-exponent norms and the modular at the returned value.
///
/// Power cases use ∫(1-|z|²)^{s-1} dA = π/s; disk cases use μ_α(B(0, r)) = π(1 - (1-r²)^α)/α.
pub fn closed_forms(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let mut worst: f64 = 0.0;
    let mut worst_modular: f64 = 0.0;
    let mut cases = 0;
    let mut check = |f: &[f64], p: f64, w: Option<&[f64]>, rule: &RegionRule, exact: f64| -> Result<()> {
        let pv = vec![p; f.len()];
        let r = luxemburg_norm(f, &pv, w, rule, &ctx.norm)?;
        worst = worst.max(rel(r.value, exact));
        worst_modular = worst_modular.max((r.modular_at_value - 1.0).abs());
        cases += 1;
        Ok(())
    };
    // (β, γ, p) for f = (1-|z|²)^β, w = (1-|z|²)^γ; both bounded so the integrand singularity is that of μ_α.
    let powers = [(0.0, 0.0, 2.0), (0.5, 0.0, 2.0), (0.2, 0.0, 3.0), (0.25, 1.0, 1.5), (0.0, 0.5, 2.5)];
    for alpha in [0.5, 1.0, 2.0] {
        let g = ctx.with_alpha(alpha)?.build()?;
        let whole = g.whole();
        for (beta, gamma, p) in powers {
            let s = beta * p + gamma + alpha;
            let f: Vec<f64> = whole.points.iter().map(|z| z.depth().powf(beta)).collect();
            let w: Vec<f64> = whole.points.iter().map(|z| z.depth().powf(gamma)).collect();
            check(&f, p, Some(&w), &whole, (PI / s).powf(1.0 / p))?;
        }
        if alpha != 1.0 {
            continue;
        }
        for (r, p) in [(0.3, 2.0), (0.6, 3.0), (0.9, 1.5), (0.5, 2.0), (0.75, 4.0)] {
            let rule = g.adapted(&PseudoBall::new(Point::origin(1)?, r)?.into())?;
            let one = vec![1.0; rule.len()];
            let mass = PI * (1.0 - (1.0 - r * r).powf(alpha)) / alpha;
            check(&one, p, None, &rule, mass.powf(1.0 / p))?;
        }
    }
    // Variable exponents: modular at the returned norm only.
    let g = ctx.with_alpha(1.0)?.build()?;
    let whole = g.whole();
    let p = sin_exponent().sample(&whole)?;
    for f in random_fields(&whole.points, 5, ctx.seed + 31) {
        let r = luxemburg_norm(&f, &p, None, &whole, &ctx.norm)?;
        worst_modular = worst_modular.max((r.modular_at_value - 1.0).abs());
    }
    Ok(vec![
        CheckResult::at_most("norms.closed-form", "Luxemburg norm agrees with constant-exponent norms", worst, 1e-6)
            .value("cases", cases as f64)
            .grid(&ctx.grid),
        CheckResult::at_most("norms.modular-at-norm", "the modular equals one at the Luxemburg norm", worst_modular, 1e-8),
    ])
}

/// The modular oracles π, π for 2χ_{B(0,1/2)}, and zero.
pub fn modular_examples(ctx: &Ctx) -> Result<CheckResult> {
    let g = ctx.with_alpha(1.0)?.build()?;
    let whole = g.whole();
    let two = vec![2.0; whole.len()];
    let one = vec![1.0; whole.len()];
    let a = modular(&one, &two, None, &whole)?;
    let disk = g.adapted(&PseudoBall::new(Point::origin(1)?, 0.5)?.into())?;
    let b = modular(&vec![2.0; disk.len()], &vec![2.0; disk.len()], None, &disk)?;
    let c = modular(&vec![0.0; whole.len()], &two, None, &whole)?;
    let n = luxemburg_norm(&one, &two, None, &whole, &ctx.norm)?.value;
    let err = rel(a, PI).max(rel(b, PI)).max(c.abs()).max((n - PI.sqrt()).abs());
    Ok(CheckResult::at_most("norms.modular-examples", "modular and norm of the unit function and of a disk indicator", err, 1e-6))
}

struct Sample {
    f: Vec<f64>,
    p: Vec<f64>,
    w: Vec<f64>,
    label: String,
}

fn random_samples(rule: &RegionRule, count: usize, seed: u64) -> Result<Vec<Sample>> {
    let exps = exponent_corpus()?;
    let weights = weight_corpus();
    let fields = random_fields(&rule.points, count, seed);
    let mut rng = seeded(seed + 1);
    let mut out = Vec::with_capacity(count);
    for f in fields {
        let p = &exps[rng.gen_range(0..exps.len())];
        let w = &weights[rng.gen_range(0..weights.len())];
        out.push(Sample { f, p: p.sample(rule)?, w: w.sample(rule)?, label: format!("{} / {}", p.name(), w.name()) });
    }
    Ok(out)
}

/// min(ρ^{1/p₋}, ρ^{1/p₊}) ≤ ‖f‖ ≤ max(ρ^{1/p₋}, ρ^{1/p₊}) with p± over the support of f.
pub fn modular_sandwich(ctx: &Ctx, count: usize, seed: u64) -> Result<CheckResult> {
    let g = ctx.build()?;
    let whole = g.whole();
    let eps = slack(&ctx.norm);
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for s in random_samples(&whole, count, seed)? {
        let support: Vec<f64> = s.p.iter().zip(&s.f).filter(|(_, f)| **f != 0.0).map(|(p, _)| *p).collect();
        if support.is_empty() {
            continue;
        }
        let (lo, hi) = bounds_of(&support)?;
        let rho = modular(&s.f, &s.p, Some(&s.w), &whole)?;
        let n = luxemburg_norm(&s.f, &s.p, Some(&s.w), &whole, &ctx.norm)?.value;
        let (a, b) = sandwich(rho, lo, hi);
        if n < a * (1.0 - eps) || n > b * (1.0 + eps) {
            violations += 1;
        }
        worst = worst.max((a - n).max(n - b) / n);
    }
    Ok(CheckResult::zero("norms.modular-sandwich", "norm-modular double inequality", violations)
        .value("samples", count as f64)
        .value("max relative excess", worst)
        .seed(seed))
}

/// ∫|fg| dμ_α ≤ 2‖f‖_{p(·)}‖g‖_{p'(·)}.
pub fn holder(ctx: &Ctx, count: usize, seed: u64) -> Result<CheckResult> {
    let g = ctx.build()?;
    let whole = g.whole();
    let exps = exponent_corpus()?;
    let fs = random_fields(&whole.points, count, seed);
    let gs = random_fields(&whole.points, count, seed + 1);
    let mut rng = seeded(seed + 2);
    let eps = slack(&ctx.norm);
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for (f, h) in fs.iter().zip(&gs) {
        let p = &exps[rng.gen_range(0..exps.len())];
        let pv = p.sample(&whole)?;
        let qv = p.conjugate()?.sample(&whole)?;
        let fg: Vec<f64> = f.iter().zip(h).map(|(a, b)| (a * b).abs()).collect();
        let lhs = whole.integrate_values(&fg)?;
        let rhs = 2.0 * luxemburg_norm(f, &pv, None, &whole, &ctx.norm)?.value * luxemburg_norm(h, &qv, None, &whole, &ctx.norm)?.value;
        if lhs > rhs * (1.0 + eps) {
            violations += 1;
        }
        worst = worst.max(lhs / rhs);
    }
    Ok(CheckResult::zero("norms.holder", "Hölder inequality with constant 2", violations)
        .value("pairs", count as f64)
        .value("max ratio / 2", worst / 2.0)
        .seed(seed))
}

/// ‖f‖_{p(·),w} with the weight in the modular against ‖f w^{1/p}‖_{p(·)}.
pub fn weighted_identity(ctx: &Ctx, count: usize, seed: u64) -> Result<CheckResult> {
    let g = ctx.build()?;
    let whole = g.whole();
    let mut worst: f64 = 0.0;
    let mut labels = Vec::new();
    for s in random_samples(&whole, count, seed)? {
        let direct = luxemburg_norm(&s.f, &s.p, Some(&s.w), &whole, &ctx.norm)?.value;
        let h: Vec<f64> = s.f.iter().zip(&s.w).zip(&s.p).map(|((f, w), p)| f.abs() * w.powf(1.0 / p)).collect();
        let via = luxemburg_norm(&h, &s.p, None, &whole, &ctx.norm)?.value;
        worst = worst.max(rel(direct, via));
        labels.push(s.label);
    }
    labels.sort();
    labels.dedup();
    Ok(CheckResult::at_most("norms.weighted-identity", "weighted norm as an unweighted norm of f w^{1/p}", worst, slack(&ctx.norm))
        .corpus(labels)
        .seed(seed))
}

/// Subordinate lower bound: ≤ 2‖f‖, the Cauchy–Schwarz equality case, and f = 0.
pub fn subordinate(ctx: &Ctx, count: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let g = ctx.build()?;
    let whole = g.whole();
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for (k, s) in random_samples(&whole, count, seed)?.into_iter().enumerate() {
        let q: Vec<f64> = s.p.iter().map(|p| p / (p - 1.0)).collect();
        let wd: Vec<f64> = s.w.iter().zip(&s.p).map(|(w, p)| w.powf(1.0 - p / (p - 1.0))).collect();
        let corpus = dual_corpus(&wd, &whole.points, 32, seed + 100 + k as u64);
        let lb = subordinate_norm_lb(&s.f, &q, &wd, &corpus, &whole, &ctx.norm)?.value;
        let n = luxemburg_norm(&s.f, &s.p, Some(&s.w), &whole, &ctx.norm)?.value;
        if lb > 2.0 * n + ctx.norm.tol {
            violations += 1;
        }
        worst = worst.max(lb / n);
    }
    // p = 2: g = f w attains ‖f‖_{2,w}.
    let w = Weight::power(0.5).sample(&whole)?;
    let two = vec![2.0; whole.len()];
    let wd: Vec<f64> = w.iter().map(|v| 1.0 / v).collect();
    let mut cs_err: f64 = 0.0;
    for f in random_fields(&whole.points, 5, seed + 7) {
        let gfun: Vec<f64> = f.iter().zip(&w).map(|(a, b)| a * b).collect();
        let lb = subordinate_norm_lb(&f, &two, &wd, &[gfun], &whole, &ctx.norm)?.value;
        let n = luxemburg_norm(&f, &two, Some(&w), &whole, &ctx.norm)?.value;
        cs_err = cs_err.max(rel(lb, n));
    }
    let zero = vec![0.0; whole.len()];
    let z = subordinate_norm_lb(&zero, &two, &wd, &dual_corpus(&wd, &whole.points, 8, seed), &whole, &ctx.norm)?.value;
    Ok(vec![
        CheckResult::zero("norms.subordinate-upper", "the associate norm is at most twice the norm", violations)
            .value("max lb / norm", worst)
            .seed(seed),
        CheckResult::at_most("norms.subordinate-equality", "associate norm in the Cauchy–Schwarz equality case", cs_err, 1e-6),
        CheckResult::at_most("norms.subordinate-zero", "associate norm of the zero function", z, 0.0),
    ])
}

/// The exponent pairs (q, r) with 1/p = 1/q + 1/r used by the generalized Hölder check.
fn holder_triples() -> Result<Vec<(ExponentField, ExponentField, ExponentField)>> {
    let p = sin_exponent();
    let scaled = |name: &str, c: f64| -> Result<ExponentField> {
        let base = p.clone();
        let f: Arc<dyn Fn(&Point) -> f64 + Send + Sync> = Arc::new(move |z: &Point| c * base.eval(z).unwrap_or(f64::NAN));
        Ok(ExponentField::custom(name, f, c * p.declared_p_minus(), c * p.declared_p_plus(), None)?)
    };
    Ok(vec![
        (p.clone(), scaled("2p", 2.0)?, scaled("2p", 2.0)?),
        (p.clone(), scaled("3p", 3.0)?, scaled("3p/2", 1.5)?),
        (ExponentField::constant(2.0)?, ExponentField::constant(3.0)?, ExponentField::constant(6.0)?),
    ])
}

/// max over samples of ‖fg‖_{p(·)} / (‖f‖_{q(·)}‖g‖_{r(·)}).
pub fn generalized_holder_ratio(ctx: &Ctx, count: usize, seed: u64) -> Result<f64> {
    let g = ctx.build()?;
    let whole = g.whole();
    let fs = random_fields(&whole.points, count, seed);
    let gs = random_fields(&whole.points, count, seed + 1);
    let mut worst: f64 = 0.0;
    for (p, q, r) in holder_triples()? {
        let (pv, qv, rv) = (p.sample(&whole)?, q.sample(&whole)?, r.sample(&whole)?);
        for (f, h) in fs.iter().zip(&gs) {
            let fh: Vec<f64> = f.iter().zip(h).map(|(a, b)| a * b).collect();
            let lhs = luxemburg_norm(&fh, &pv, None, &whole, &ctx.norm)?.value;
            let rhs = luxemburg_norm(f, &qv, None, &whole, &ctx.norm)?.value * luxemburg_norm(h, &rv, None, &whole, &ctx.norm)?.value;
            worst = worst.max(lhs / rhs);
        }
    }
    Ok(worst)
}

pub fn generalized_holder(ctx: &Ctx, count: usize, seed: u64) -> Result<CheckResult> {
    let k = ctx.fixtures.holder_k;
    let worst = generalized_holder_ratio(ctx, count, seed)?;
    Ok(CheckResult::at_most("norms.generalized-holder", "generalized Hölder inequality", worst, k)
        .value("calibrated K", k)
        .seed(seed))
}

/// |g| ≤ |f| ⇒ ‖g‖ ≤ ‖f‖ and ‖cf‖ = |c|‖f‖.
pub fn monotone_homogeneous(ctx: &Ctx, count: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let g = ctx.build()?;
    let whole = g.whole();
    let mut rng = seeded(seed + 5);
    let tight = NormOptions { tol: 1e-13, ..ctx.norm };
    let mut violations = 0;
    let mut homog: f64 = 0.0;
    for s in random_samples(&whole, count, seed)? {
        let smaller: Vec<f64> = s.f.iter().map(|v| v * rng.gen::<f64>()).collect();
        let a = luxemburg_norm(&smaller, &s.p, Some(&s.w), &whole, &ctx.norm)?.value;
        let b = luxemburg_norm(&s.f, &s.p, Some(&s.w), &whole, &ctx.norm)?.value;
        if a > b * (1.0 + ctx.norm.tol) {
            violations += 1;
        }
        let base = luxemburg_norm(&s.f, &s.p, Some(&s.w), &whole, &tight)?.value;
        for c in [-0.37, 3.1, 1e3] {
            let cf: Vec<f64> = s.f.iter().map(|v| c * v).collect();
            let v = luxemburg_norm(&cf, &s.p, Some(&s.w), &whole, &tight)?.value;
            homog = homog.max(rel(v, c.abs() * base));
        }
    }
    Ok(vec![
        CheckResult::zero("norms.monotone", "the norm is monotone in |f|", violations).seed(seed),
        CheckResult::at_most("norms.homogeneous", "the norm is absolutely homogeneous", homog, 1e-10).seed(seed),
    ])
}

pub fn suite(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let s = ctx.seed;
    let mut out = Vec::new();
    out.extend(timed(|| closed_forms(ctx))?);
    out.extend(timed(|| Ok(vec![modular_examples(ctx)?]))?);
    out.extend(timed(|| Ok(vec![modular_sandwich(ctx, 200, s + 41)?]))?);
    out.extend(timed(|| Ok(vec![holder(ctx, 200, s + 42)?]))?);
    out.extend(timed(|| Ok(vec![weighted_identity(ctx, 50, s + 43)?]))?);
    out.extend(timed(|| subordinate(ctx, 20, s + 44))?);
    out.extend(timed(|| Ok(vec![generalized_holder(ctx, 40, s + 45)?]))?);
    out.extend(timed(|| monotone_homogeneous(ctx, 20, s + 46))?);
    Ok(out)
}
