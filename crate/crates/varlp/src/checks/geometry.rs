use rand::Rng;
use varlp_core::geometry::{
    enumerate_ball_family, pseudo_distance, ORIGIN_EPS, regularization_ball, touches_boundary, FamilyDescriptor, Point, PseudoBall,
    C64,
};
use varlp_core::numeric::seeded;

use super::Ctx;
use crate::error::Result;
use crate::report::CheckResult;

/// Random point of the ball of ℂⁿ mixing the origin, deep boundary layers and bulk points.
pub fn sample_point(rng: &mut impl Rng, dim: usize) -> Point {
    let kind = rng.gen_range(0..10);
    let norm = match kind {
        0 => 0.0,
        1 => 1e-15 * rng.gen::<f64>(),
        2..=5 => 1.0 - (-rng.gen::<f64>() * 40.0).exp2(),
        _ => rng.gen::<f64>().powf(1.0 / (2 * dim) as f64),
    };
    let mut v: Vec<C64> = (0..dim).map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    for c in v.iter_mut() {
        *c *= norm / n;
    }
    match Point::new(&v) {
        Ok(p) => p,
        Err(_) => Point::origin(dim).expect("origin"),
    }
}

/// Quasi-triangle, range and symmetry on `count` seeded triples in dimension `dim`.
pub fn metric_properties(dim: usize, count: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = seeded(seed);
    let (mut tri, mut tri_off, mut range, mut sym) = (0usize, 0usize, 0usize, 0usize);
    let mut worst_ratio: f64 = 0.0;
    let mut max_d: f64 = 0.0;
    for _ in 0..count {
        let z = sample_point(&mut rng, dim);
        let w = sample_point(&mut rng, dim);
        let x = sample_point(&mut rng, dim);
        let dzw = pseudo_distance(&z, &w)?;
        let dzx = pseudo_distance(&z, &x)?;
        let dxw = pseudo_distance(&x, &w)?;
        if dzw > 2.0 * (dzx + dxw) {
            tri += 1;
            if [&z, &w, &x].iter().all(|p| p.norm() >= ORIGIN_EPS) {
                tri_off += 1;
            }
        }
        if dzx + dxw > 0.0 {
            worst_ratio = worst_ratio.max(dzw / (dzx + dxw));
        }
        for d in [dzw, dzx, dxw] {
            if !(0.0..3.0).contains(&d) {
                range += 1;
            }
            max_d = max_d.max(d);
        }
        if pseudo_distance(&w, &z)? != dzw {
            sym += 1;
        }
    }
    Ok(vec![
        CheckResult::zero(&format!("geometry.quasi-triangle.n{dim}"), "quasi-triangle inequality with constant 2", tri)
            .value("max d(z,w)/(d(z,x)+d(x,w))", worst_ratio)
            .value("triples", count as f64)
            .note("z = t, w = -t, x = 0 gives d(z,w) = 2 > 4t = 2(d(z,x) + d(x,w)) for t < 1/2")
            .seed(seed),
        CheckResult::zero(&format!("geometry.quasi-triangle-off-origin.n{dim}"), "quasi-triangle inequality with constant 2 away from the origin", tri_off)
            .seed(seed),
        CheckResult::zero(&format!("geometry.range.n{dim}"), "pseudo-distance takes values in [0, 3)", range)
            .value("max d", max_d)
            .seed(seed),
        CheckResult::zero(&format!("geometry.symmetry.n{dim}"), "pseudo-distance is symmetric", sym).seed(seed),
    ])
}

/// For z' ∈ B^k(z) with k < 1/2, z ∈ B^{k'}(z') where k' = k/(1-k).
pub fn regularization_inclusion(count: usize, seed: u64) -> Result<CheckResult> {
    let mut rng = seeded(seed);
    let mut violations = 0;
    let mut tested = 0;
    let mut worst: f64 = 0.0;
    while tested < count {
        let z = sample_point(&mut rng, 1);
        let k = rng.gen_range(1e-3..0.5);
        let ball = regularization_ball(&z, k)?;
        let r = ball.radius();
        let gap = (z.gap() + r * rng.gen_range(-1.0..1.0)).clamp(1e-300, 1.0);
        let theta = z.arg() + r * rng.gen_range(-1.0..1.0);
        let zp = Point::polar(gap, theta)?;
        if !ball.contains(&zp) {
            continue;
        }
        tested += 1;
        let kp = k / (1.0 - k);
        let d = pseudo_distance(&zp, &z)?;
        worst = worst.max(d / (kp * zp.gap()));
        if !regularization_ball(&zp, kp.min(1.0 - 1e-12))?.contains(&z) {
            violations += 1;
        }
    }
    Ok(CheckResult::zero("geometry.regularization-inclusion", "inclusion of relative balls under exchange of centers", violations)
        .value("max d(z',z)/(k' (1-|z'|))", worst)
        .value("pairs", count as f64)
        .seed(seed))
}

/// Hand-evaluated distances, boundary-touch criterion and family enumeration examples.
pub fn examples() -> Result<Vec<CheckResult>> {
    let o = Point::origin(1)?;
    let half = Point::c1(0.5, 0.0)?;
    let minus = Point::c1(-0.5, 0.0)?;
    let a = Point::c1(0.3, 0.4)?;
    let err = (pseudo_distance(&o, &a)? - 0.5).abs() + (pseudo_distance(&half, &minus)? - 2.0).abs() + pseudo_distance(&a, &a)?;
    let touch_ok = !touches_boundary(&PseudoBall::new(o.clone(), 0.5)?)
        && touches_boundary(&PseudoBall::new(half.clone(), 0.6)?)
        && !touches_boundary(&PseudoBall::new(o.clone(), 1.0)?);
    let d1 = FamilyDescriptor { radial_levels: 1, radius_count: 2, ..Default::default() };
    let f1 = enumerate_ball_family(&d1)?;
    let d2 = FamilyDescriptor { radial_levels: 1, radius_start: 0.5, radius_count: 1, ..Default::default() };
    let empty_reported = enumerate_ball_family(&d2).is_err();
    let d3 = FamilyDescriptor::default();
    let same = enumerate_ball_family(&d3)?.balls == enumerate_ball_family(&d3)?.balls;
    let kz = regularization_ball(&Point::polar(0.1, 0.3)?, 0.5)?;
    let reg_ok = (kz.radius() - 0.05).abs() < 1e-15 && !touches_boundary(&kz);
    let failures = [touch_ok, f1.len() == 2, empty_reported, same, reg_ok].iter().filter(|b| !**b).count();
    Ok(vec![
        CheckResult::at_most("geometry.distance-examples", "two-branch formula of the pseudo-distance", err, 1e-15),
        CheckResult::zero("geometry.ball-examples", "boundary balls are exactly those with radius above 1 - |center|", failures),
    ])
}

pub fn suite(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    out.extend(crate::report::timed(|| metric_properties(1, 100_000, ctx.seed))?);
    out.extend(crate::report::timed(|| metric_properties(2, 100_000, ctx.seed + 1))?);
    out.extend(crate::report::timed(|| Ok(vec![regularization_inclusion(20_000, ctx.seed + 2)?]))?);
    out.extend(crate::report::timed(examples)?);
    Ok(out)
}
