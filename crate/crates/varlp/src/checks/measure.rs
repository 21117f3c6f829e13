use std::f64::consts::PI;

use rand::Rng;
use varlp_core::geometry::{enumerate_ball_family, pseudo_distance, FamilyDescriptor, Point, PseudoBall};
use varlp_core::measure::{build_grid, mu_alpha, GridField, GridSpec, MeasureParams, Region, RegionRule, Scheme};
use varlp_core::numeric::seeded;

use super::{rel, Ctx};
use crate::corpus::random_point;
use crate::error::Result;
use crate::fixtures::DensityFit;
use crate::report::{timed, CheckResult};

/// Closed-form total masses π/α (n = 1) and the disk B(0, 1/2).
pub fn mass_oracles(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for alpha in [0.5, 1.0, 2.0] {
        let g = ctx.with_alpha(alpha)?.build()?;
        let total = g.whole().measure();
        let tol = if alpha < 1.0 { 1e-4 } else { 1e-6 };
        out.push(
            CheckResult::at_most(
                &format!("measure.total-mass.alpha{alpha}"),
                "total mass of the weighted measure",
                (total - PI / alpha).abs(),
                tol,
            )
            .grid(&ctx.grid)
            .alpha(alpha),
        );
    }
    let g = ctx.with_alpha(1.0)?.build()?;
    let disk = mu_alpha(&PseudoBall::new(Point::origin(1)?, 0.5)?.into(), &g)?;
    out.push(CheckResult::at_most("measure.disk-mass", "pseudo-balls at the origin are Euclidean disks", (disk - PI / 4.0).abs(), 1e-6));
    Ok(out)
}

/// Boundary balls with radii 3·2^{-i} ≥ 2^{-10} centered at gaps 2^{-j}.
pub fn growth_family() -> FamilyDescriptor {
    FamilyDescriptor { radial_levels: 11, angular_count: 1, radius_count: 12, ..Default::default() }
}

/// max/min of μ_α(B)/R^{1+α} over boundary balls, and refinement drift of each μ_α(B).
pub fn measure_growth(ctx: &Ctx, alpha: f64) -> Result<Vec<CheckResult>> {
    let c = ctx.with_alpha(alpha)?;
    let coarse = c.build()?;
    let fine = c.build_with(&c.grid.refined())?;
    let fam = enumerate_ball_family(&growth_family())?;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let mut drift: f64 = 0.0;
    for b in fam.balls.iter().filter(|b| b.radius() >= (-10f64).exp2()) {
        let region: Region = b.clone().into();
        let m = mu_alpha(&region, &coarse)?;
        let mf = mu_alpha(&region, &fine)?;
        drift = drift.max(rel(m, mf));
        let ratio = m / b.radius().powf(1.0 + alpha);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    Ok(vec![
        CheckResult::at_most(&format!("measure.growth.alpha{alpha}"), "measure of boundary balls grows like R^(n+alpha)", hi / lo, 50.0)
            .value("min ratio", lo)
            .value("max ratio", hi)
            .family(&fam.descriptor)
            .alpha(alpha),
        CheckResult::at_most(&format!("measure.refinement.alpha{alpha}"), "ball measures under one grid refinement", drift, 1e-3)
            .grid(&c.grid)
            .alpha(alpha),
    ])
}

/// Node-level additivity over two disjoint balls.
pub fn additivity(ctx: &Ctx) -> Result<CheckResult> {
    let g = ctx.build()?;
    let f = GridField::from_fn(&g, |z| 1.0 + z.coords()[0].re + z.depth().sqrt());
    let b1 = PseudoBall::new(Point::c1(0.5, 0.0)?, 0.3)?;
    let b2 = PseudoBall::new(Point::c1(-0.5, 0.0)?, 0.3)?;
    let r1 = g.restrict(&b1.clone().into());
    let r2 = g.restrict(&b2.clone().into());
    let idx1 = r1.index.clone().unwrap_or_default();
    let idx2 = r2.index.clone().unwrap_or_default();
    let overlap = idx1.iter().filter(|i| idx2.contains(i)).count();
    let mut index: Vec<u32> = idx1.iter().chain(&idx2).copied().collect();
    index.sort_unstable();
    let union = RegionRule {
        points: index.iter().map(|&i| g.points()[i as usize].clone()).collect(),
        mass: index.iter().map(|&i| g.mass()[i as usize]).collect(),
        index: Some(index),
        grid_id: Some(g.id()),
    };
    let a = r1.integrate_values(&f.sample(&r1)?)? + r2.integrate_values(&f.sample(&r2)?)?;
    let u = union.integrate_values(&f.sample(&union)?)?;
    Ok(CheckResult::at_most("measure.additivity", "integrals over disjoint regions add", rel(a, u), 1e-13)
        .value("shared nodes", overlap as f64))
}

/// Errors of μ_α(B) against a reference over three grid doublings from a coarse grid.
fn membership_errors(ctx: &Ctx, ball: PseudoBall, exact: Option<f64>) -> Result<Vec<f64>> {
    let region: Region = ball.into();
    let mut spec = GridSpec { levels: 6, points: 4, angular: 32, ..ctx.grid.clone() };
    let params = MeasureParams::new(1.0, 1)?;
    let reference = match exact {
        Some(v) => v,
        None => mu_alpha(&region, &*build_grid(params, &ctx.grid.refined().refined())?)?,
    };
    let mut errors = Vec::new();
    for _ in 0..4 {
        let g = build_grid(params, &spec)?;
        errors.push((g.restrict(&region).measure() - reference).abs());
        spec = spec.refined();
    }
    Ok(errors)
}

/// The error on B(0, 1/2) never increases over three doublings; on an off-center ball,
/// where node membership jitters, the error shrinks at least fourfold overall.
pub fn refinement_study(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let disk = membership_errors(ctx, PseudoBall::new(Point::origin(1)?, 0.5)?, Some(PI / 4.0))?;
    let increases = disk.windows(2).filter(|w| w[1] > w[0] && w[1] > 1e-12).count();
    let off = membership_errors(ctx, PseudoBall::new(Point::c1(0.3, 0.2)?, 0.45)?, None)?;
    let last = off[off.len() - 1];
    let decay = if last > 0.0 { off[0] / last } else { f64::INFINITY };
    Ok(vec![
        CheckResult::zero("measure.refinement-monotone", "doubling the resolution does not increase the error on a centered disk", increases)
            .value("first error", disk[0])
            .value("last error", disk[disk.len() - 1]),
        CheckResult::at_least("measure.refinement-decay", "node-membership error shrinks under refinement", decay, 4.0)
            .value("first error", off[0])
            .value("last error", last),
    ])
}

/// Ratios μ(B(ζ, r))/μ(B(z, R)) against x = r/R for ζ ∈ B(z, R), r ≤ R.
pub fn density_samples(ctx: &Ctx, count: usize, seed: u64) -> Result<Vec<(f64, f64)>> {
    let g = ctx.build()?;
    let mut rng = seeded(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z = random_point(&mut rng, 8.0);
        let big_r = (z.gap() * rng.gen_range(0.1..4.0)).min(2.9);
        let gap = (z.gap() + big_r * rng.gen_range(-1.0..1.0)).clamp(1e-9, 1.0);
        let zeta = Point::polar(gap, z.arg() + big_r * rng.gen_range(-1.0..1.0))?;
        if pseudo_distance(&z, &zeta)? >= big_r {
            continue;
        }
        let x = (-rng.gen::<f64>() * 10.0).exp2();
        let outer = mu_alpha(&PseudoBall::new(z, big_r)?.into(), &g)?;
        let inner = mu_alpha(&PseudoBall::new(zeta, x * big_r)?.into(), &g)?;
        out.push((x, inner / outer));
    }
    Ok(out)
}

/// Fit ρ ≥ C x^γ: for each γ on a grid take the largest admissible C, keep the γ with the
/// strongest bound at the smallest sampled x.
pub fn fit_density(samples: &[(f64, f64)]) -> DensityFit {
    let x_min = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let mut best = DensityFit { c: 0.0, gamma: 0.0 };
    let mut best_at_min = f64::NEG_INFINITY;
    for k in 4..=40 {
        let gamma = 0.25 * k as f64;
        let c = samples.iter().map(|(x, r)| r / x.powf(gamma)).fold(f64::INFINITY, f64::min);
        let at_min = c.ln() + gamma * x_min.ln();
        if at_min > best_at_min {
            best_at_min = at_min;
            best = DensityFit { c, gamma };
        }
    }
    best
}

pub fn density_check(ctx: &Ctx, count: usize, seed: u64) -> Result<CheckResult> {
    let fit = ctx.fixtures.density;
    let samples = density_samples(ctx, count, seed)?;
    let violations = samples.iter().filter(|(x, r)| *r < fit.c * x.powf(fit.gamma)).count();
    Ok(CheckResult::zero("measure.density", "lower density bound for sub-balls", violations)
        .value("C", fit.c)
        .value("gamma", fit.gamma)
        .value("samples", count as f64)
        .seed(seed))
}

/// Seeded quasi-random grids in dimension two: determinism and total mass.
pub fn monte_carlo_smoke(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let params = MeasureParams::new(1.0, 2)?;
    let spec = GridSpec { scheme: Scheme::MonteCarlo, ..ctx.grid.clone() };
    let a = build_grid(params, &spec)?;
    let b = build_grid(params, &spec)?;
    let same = a.points() == b.points() && a.mass() == b.mass();
    let total = a.whole().measure();
    Ok(vec![
        CheckResult::zero("measure.mc-determinism", "seeded grids are reproducible", usize::from(!same)).seed(spec.seed),
        CheckResult::at_most("measure.mc-mass.n2", "total mass of the weighted measure", rel(total, PI * PI / 2.0), 1e-2)
            .value("samples", spec.samples as f64),
    ])
}

pub fn suite(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    out.extend(timed(|| mass_oracles(ctx))?);
    for alpha in [0.5, 1.0, 2.0] {
        out.extend(timed(|| measure_growth(ctx, alpha))?);
    }
    out.extend(timed(|| Ok(vec![additivity(ctx)?]))?);
    out.extend(timed(|| refinement_study(ctx))?);
    out.extend(timed(|| Ok(vec![density_check(ctx, 500, ctx.seed + 11)?]))?);
    out.extend(timed(|| monte_carlo_smoke(ctx))?);
    Ok(out)
}
