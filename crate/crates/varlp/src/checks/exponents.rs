use varlp_core::exponent::{
    bounds_on, harmonic_mean_exponent, log_holder_estimate, mean_exponent, sample_pairs, ExponentField,
};
use varlp_core::geometry::{enumerate_ball_family, FamilyDescriptor, Point, PseudoBall};
use varlp_core::measure::QuadratureGrid;

use super::{growth, Ctx, STABILITY};
use crate::corpus::{exponent_corpus, random_balls, sin_exponent};
use crate::error::Result;
use crate::report::{timed, CheckResult};

/// Node extremes of p over the ball and the closed-form mean of 2 + sin|z|.
pub fn bounds_and_means(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let g = ctx.with_alpha(1.0)?.build()?;
    let whole = g.whole();
    let two = ExponentField::constant(2.0)?;
    let (a, b) = bounds_on(&two, &whole)?;
    let p = sin_exponent();
    let (lo, hi) = bounds_on(&p, &whole)?;
    let mean = mean_exponent(&p, &whole)?;
    let exact = 2.0 + 2.0 * (1f64.sin() - 1f64.cos());
    // Node resolution: the innermost ring sits at |z| = 1 - gap of the last radial node.
    let inner = g.polar().map(|l| 1.0 - l.gaps[0]).unwrap_or(0.0);
    let small = g.adapted(&PseudoBall::new(Point::origin(1)?, 1e-3)?.into())?;
    let pb_small = harmonic_mean_exponent(&p, &small)?;
    Ok(vec![
        CheckResult::at_most("exponents.constant-bounds", "essential bounds of a constant exponent", (a - 2.0).abs() + (b - 2.0).abs(), 0.0),
        CheckResult::at_most("exponents.radial-upper-bound", "essential bounds of 2 + sin|z|", (hi - (2.0 + 1f64.sin())).abs(), 1e-3),
        CheckResult::at_most("exponents.radial-lower-bound", "essential bounds of 2 + sin|z|", (lo - 2.0).abs(), inner.sin() * (1.0 + 1e-9))
            .value("innermost radius", inner),
        CheckResult::at_most("exponents.radial-mean", "arithmetic ball mean of the exponent", (mean - exact).abs(), 1e-3),
        CheckResult::at_most("exponents.small-ball-harmonic-mean", "harmonic ball mean of the exponent", (pb_small - 2.0).abs(), 2e-3),
    ])
}

/// p_−(B) ≤ p_B ≤ ⟨p⟩_B ≤ p_+(B) on random balls for every corpus exponent.
pub fn mean_sandwich(ctx: &Ctx, count: usize, seed: u64) -> Result<CheckResult> {
    let g = ctx.build()?;
    let balls = random_balls(count / 2, seed, true).into_iter().chain(random_balls(count - count / 2, seed + 1, false));
    let rules = balls.map(|b| g.adapted(&b.into())).collect::<varlp_core::Result<Vec<_>>>()?;
    let mut violations = 0;
    let corpus = exponent_corpus()?;
    for p in &corpus {
        for rule in &rules {
            let (lo, hi) = bounds_on(p, rule)?;
            let pb = harmonic_mean_exponent(p, rule)?;
            let mean = mean_exponent(p, rule)?;
            let eps = 1e-12 * hi;
            if !(lo <= pb + eps && pb <= mean + eps && mean <= hi + eps) {
                violations += 1;
            }
        }
    }
    Ok(CheckResult::zero("exponents.mean-sandwich", "harmonic and arithmetic ball means lie between the bounds", violations)
        .value("balls", count as f64)
        .corpus(corpus.iter().map(|p| p.name().to_string()))
        .seed(seed))
}

/// conjugate ∘ conjugate = identity and 1/p + 1/p' = 1 at every node.
pub fn conjugation(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let g = ctx.build()?;
    let whole = g.whole();
    let mut worst_inv: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    for p in exponent_corpus()? {
        let q = p.conjugate()?;
        let qq = q.conjugate()?;
        let pv = p.sample(&whole)?;
        let qv = q.sample(&whole)?;
        let qqv = qq.sample(&whole)?;
        for ((a, b), c) in pv.iter().zip(&qv).zip(&qqv) {
            worst_inv = worst_inv.max((a - c).abs());
            worst_sum = worst_sum.max((1.0 / a + 1.0 / b - 1.0).abs());
        }
    }
    let sin_conj = sin_exponent().conjugate()?;
    Ok(vec![
        CheckResult::at_most("exponents.conjugate-involution", "conjugate of the conjugate exponent", worst_inv, 1e-14),
        CheckResult::at_most("exponents.conjugate-identity", "pointwise conjugate relation", worst_sum, 1e-14),
        CheckResult::at_least("exponents.conjugate-lower-bound", "the conjugate of a log-Hölder exponent stays in the class", sin_conj.declared_p_minus(), 1.0 + 1e-6)
            .value("p'_-", sin_conj.declared_p_minus())
            .value("declared c'", sin_conj.declared_log_holder().unwrap_or(f64::NAN)),
    ])
}

/// Estimated log-Hölder constants and the small-ball oscillation bound.
pub fn log_holder(ctx: &Ctx, seed: u64) -> Result<Vec<CheckResult>> {
    let p = sin_exponent();
    let pairs = sample_pairs(4000, seed);
    let pairs2 = sample_pairs(8000, seed);
    let c1 = log_holder_estimate(&p, &pairs)?;
    let c2 = log_holder_estimate(&p, &pairs2)?;
    let c0 = log_holder_estimate(&ExponentField::constant(2.0)?, &pairs)?;
    let declared = p.declared_log_holder().unwrap_or(f64::INFINITY);
    // Oscillation over balls of radius below 1/4.
    let g = ctx.build()?;
    let mut violations = 0;
    let balls: Vec<PseudoBall> = random_balls(400, seed + 1, false).into_iter().filter(|b| b.radius() < 0.25).collect();
    for b in &balls {
        let rule = g.adapted(&b.clone().into())?;
        let (lo, hi) = bounds_on(&p, &rule)?;
        if hi - lo > c2 / (1.0 / (4.0 * b.radius())).ln() {
            violations += 1;
        }
    }
    Ok(vec![
        CheckResult::at_most("exponents.log-holder-constant", "log-Hölder continuity of a constant exponent", c0, 0.0),
        CheckResult::at_most("exponents.log-holder-stability", "log-Hölder continuity of 2 + sin|z|", growth(c1, c2), STABILITY)
            .value("c (4000 pairs)", c1)
            .value("c (8000 pairs)", c2)
            .seed(seed),
        CheckResult::at_most("exponents.log-holder-declared", "log-Hölder continuity of 2 + sin|z|", c2, declared),
        CheckResult::zero("exponents.oscillation", "oscillation of a log-Hölder exponent on small balls", violations)
            .value("balls", balls.len() as f64)
            .value("c", c2),
    ])
}

/// max over the family of μ(B)^{p_−(B) − p_+(B)} and of max(v, 1/v) for v = μ(B)^{p_−(B) − p(z)}.
fn measure_powers(g: &QuadratureGrid, fam: &FamilyDescriptor, p: &ExponentField) -> Result<(f64, f64)> {
    let family = enumerate_ball_family(&fam.all_balls())?;
    let (mut c1, mut c2) = (0.0f64, 0.0f64);
    for b in &family.balls {
        let rule = g.adapted(&b.clone().into())?;
        let mu = rule.measure();
        let pv = p.sample(&rule)?;
        let (lo, hi) = varlp_core::exponent::bounds_of(&pv)?;
        c1 = c1.max(mu.powf(lo - hi));
        for q in &pv {
            let v = mu.powf(lo - q);
            c2 = c2.max(v.max(1.0 / v));
        }
    }
    Ok((c1, c2))
}

pub fn measure_power_bounds(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let g = ctx.build()?;
    let p = sin_exponent();
    let (a1, a2) = measure_powers(&g, &ctx.family, &p)?;
    let (b1, b2) = measure_powers(&g, &ctx.family.refined(), &p)?;
    Ok(vec![
        CheckResult::at_most("exponents.measure-power", "bounded measure powers for log-Hölder exponents", growth(a1, b1), STABILITY)
            .value("C1", a1)
            .value("C1 refined", b1)
            .family(&ctx.family),
        CheckResult::at_most("exponents.measure-power-pointwise", "two-sided measure powers at points of a ball", growth(a2, b2), STABILITY)
            .value("C", a2)
            .value("C refined", b2)
            .family(&ctx.family),
    ])
}

pub fn suite(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    out.extend(timed(|| bounds_and_means(ctx))?);
    out.extend(timed(|| Ok(vec![mean_sandwich(ctx, 500, ctx.seed + 21)?]))?);
    out.extend(timed(|| conjugation(ctx))?);
    out.extend(timed(|| log_holder(ctx, ctx.seed + 22))?);
    out.extend(timed(|| measure_power_bounds(ctx))?);
    Ok(out)
}
