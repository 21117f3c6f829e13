use rand::Rng;
use varlp_core::geometry::{enumerate_ball_family, FamilyDescriptor};
use varlp_core::measure::{GridField, QuadratureGrid};
use varlp_core::numeric::seeded;
use varlp_core::operators::MaximalOperator;
use varlp_core::weights::b1_constant;

use super::Ctx;
use crate::corpus::{random_fields, weight_corpus};
use crate::error::Result;
use crate::report::{timed, CheckResult};

pub struct Maximals {
    pub boundary: MaximalOperator,
    pub full: MaximalOperator,
}

pub fn maximals(grid: &std::sync::Arc<QuadratureGrid>, desc: &FamilyDescriptor) -> Result<Maximals> {
    Ok(Maximals {
        boundary: MaximalOperator::new(grid, &enumerate_ball_family(desc)?)?,
        full: MaximalOperator::new(grid, &enumerate_ball_family(&desc.all_balls())?)?,
    })
}

/// m_α ≤ M_α, sublinearity of M_α and constants.
pub fn pointwise_laws(ctx: &Ctx, count: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let g = ctx.build()?;
    let ops = maximals(&g, &ctx.family)?;
    let fs = random_fields(g.points(), count, seed);
    let hs = random_fields(g.points(), count, seed + 1);
    let (mut dom, mut sub) = (0, 0);
    for (f, h) in fs.iter().zip(&hs) {
        let mf = ops.boundary.apply(f)?;
        let big = ops.full.apply(f)?;
        dom += mf.iter().zip(&big).filter(|(a, b)| a > b).count();
        let sum: Vec<f64> = f.iter().zip(h).map(|(a, b)| a + b).collect();
        let ms = ops.full.apply(&sum)?;
        let mh = ops.full.apply(h)?;
        sub += ms.iter().zip(big.iter().zip(&mh)).filter(|(s, (a, b))| **s > (*a + *b) * (1.0 + 1e-12)).count();
    }
    let mut const_err: f64 = 0.0;
    let cover = ops.boundary.coverage();
    for c in [1.0, -2.5] {
        let v = vec![c; g.len()];
        for (i, (a, b)) in ops.boundary.apply(&v)?.iter().zip(ops.full.apply(&v)?).enumerate() {
            if cover[i] > 0 {
                const_err = const_err.max((a - c.abs()).abs());
            }
            const_err = const_err.max((b - c.abs()).abs());
        }
    }
    Ok(vec![
        CheckResult::zero("maximal.boundary-below-full", "the boundary maximal function is below the full one", dom).seed(seed),
        CheckResult::zero("maximal.sublinear", "the maximal function is sublinear", sub).seed(seed),
        CheckResult::at_most("maximal.constants", "maximal functions of constants", const_err, 1e-12),
    ])
}

/// m_α χ_{B₀} = 1 on each family ball B₀.
pub fn indicator(ctx: &Ctx) -> Result<CheckResult> {
    let g = ctx.build()?;
    let fam = enumerate_ball_family(&ctx.family)?;
    let m = MaximalOperator::new(&g, &fam)?;
    let mut worst: f64 = 0.0;
    for b in fam.balls.iter().step_by(7) {
        let chi: Vec<f64> = g.points().iter().map(|z| f64::from(u8::from(b.contains(z)))).collect();
        for (v, z) in m.apply(&chi)?.iter().zip(g.points()) {
            if b.contains(z) {
                worst = worst.max((v - 1.0).abs());
            }
        }
    }
    Ok(CheckResult::at_most("maximal.indicator", "the maximal function of a family ball's indicator is one on the ball", worst, 1e-12))
}

/// M_α f ≥ |f| for Lipschitz f up to discretization at nodes inside small interior family balls (the two
/// smallest rungs, off-origin centers, radius below the center's gap), sharpening under refinement.
pub fn lebesgue_surrogate(ctx: &Ctx, seed: u64) -> Result<CheckResult> {
    let g = ctx.build()?;
    let fields = smooth_fields(g.points(), seed);
    let deficit = |desc: &FamilyDescriptor| -> Result<(f64, usize)> {
        let fam = enumerate_ball_family(&desc.all_balls())?;
        let r_small = 2.0 * desc.radii().last().copied().unwrap_or(0.0);
        let small: Vec<bool> = g
            .points()
            .iter()
            .map(|z| fam.balls.iter().any(|b| b.radius() <= r_small && b.center().gap() < 1.0 && b.radius() < b.center().gap() && b.contains(z)))
            .collect();
        let m = MaximalOperator::new(&g, &fam)?;
        let mut worst: f64 = 0.0;
        for f in &fields {
            let mf = m.apply(f)?;
            let scale = f.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            for ((a, b), s) in mf.iter().zip(f).zip(&small) {
                if *s {
                    worst = worst.max((b.abs() - a) / scale);
                }
            }
        }
        Ok((worst, small.iter().filter(|s| **s).count()))
    };
    let (coarse, n1) = deficit(&ctx.family)?;
    let (fine, n2) = deficit(&ctx.family.refined())?;
    Ok(CheckResult::at_most("maximal.lebesgue", "the maximal function dominates the function", fine, coarse.max(1e-12))
        .value("relative deficit", coarse)
        .value("relative deficit refined", fine)
        .value("nodes", n1 as f64)
        .value("nodes refined", n2 as f64)
        .seed(seed))
}

/// Lipschitz fields in d: wide tents, (1-|z|²)^β for β ≥ 1/2 and a harmonic.
pub fn smooth_fields(points: &[varlp_core::geometry::Point], seed: u64) -> Vec<Vec<f64>> {
    let mut rng = seeded(seed);
    let mut out: Vec<Vec<f64>> = (0..6)
        .map(|_| {
            let c = crate::corpus::random_point(&mut rng, 2.0);
            let r = rng.gen_range(0.6..1.5);
            points.iter().map(|z| crate::corpus::tent(&c, r, z)).collect()
        })
        .collect();
    for beta in [0.5, 1.0] {
        out.push(points.iter().map(|z| z.depth().powf(beta)).collect());
    }
    out.push(points.iter().map(|z| 1.0 + 0.5 * z.coords()[0].powi(3).re).collect());
    out
}

/// [w]_{B₁} = 1 for w ≡ 1 and ≥ 1 - tol for corpus weights.
pub fn b1_laws(ctx: &Ctx, seed: u64) -> Result<Vec<CheckResult>> {
    let g = ctx.build()?;
    let m = MaximalOperator::new(&g, &enumerate_ball_family(&ctx.family)?)?;
    let one = b1_constant(&GridField::constant(&g, 1.0), &m)?.estimate;
    let mut lowest = f64::INFINITY;
    for w in weight_corpus() {
        lowest = lowest.min(b1_constant(&w.on_grid(&g)?, &m)?.estimate);
    }
    let mut rng = seeded(seed);
    for f in random_fields(g.points(), 10, seed) {
        let shift = 0.1 + rng.gen::<f64>();
        let w = GridField::new(g.clone(), f.iter().map(|v| v + shift).collect())?;
        lowest = lowest.min(b1_constant(&w, &m)?.estimate);
    }
    Ok(vec![
        CheckResult::at_most("maximal.b1-unit", "the unit weight is in B₁ with constant one", (one - 1.0).abs(), 1e-12),
        CheckResult::at_least("maximal.b1-lower", "B₁ constants are at least one", lowest, 1.0 - 1e-10).seed(seed),
    ])
}

pub fn suite(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let s = ctx.seed;
    let mut out = Vec::new();
    out.extend(timed(|| pointwise_laws(ctx, 50, s + 61))?);
    out.extend(timed(|| Ok(vec![indicator(ctx)?]))?);
    out.extend(timed(|| Ok(vec![lebesgue_surrogate(ctx, s + 62)?]))?);
    out.extend(timed(|| b1_laws(ctx, s + 63))?);
    Ok(out)
}
