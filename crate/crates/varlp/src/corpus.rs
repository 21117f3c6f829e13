//! Exponent, weight, test-function and ball corpora shared by the suites.

use rand::Rng;
use varlp_core::exponent::ExponentField;
use varlp_core::geometry::{pseudo_distance, FamilyDescriptor, Point, PseudoBall};
use varlp_core::numeric::seeded;
use varlp_core::weights::Weight;

use crate::error::Result;

/// Constants 1.5, 2, 3, the radial field 2 + sin|z| and the angular field 2 + cos(arg z)/2.
pub fn exponent_corpus() -> Result<Vec<ExponentField>> {
    Ok(vec![
        ExponentField::constant(1.5)?,
        ExponentField::constant(2.0)?,
        ExponentField::constant(3.0)?,
        ExponentField::radial_sin(2.0, 1.0)?,
        ExponentField::angular_cos(2.0, 0.5)?,
    ])
}

pub fn sin_exponent() -> ExponentField {
    ExponentField::radial_sin(2.0, 1.0).expect("valid exponent")
}

pub fn power_angular(gamma: f64, a: f64) -> Weight {
    Weight::product(vec![Weight::power(gamma), Weight::angular(a).expect("valid amplitude")])
}

/// The weight corpus: unit, power weights, the angular weight and a product.
pub fn weight_corpus() -> Vec<Weight> {
    let mut out = vec![Weight::one()];
    for g in [-0.5, 0.5, 1.0, 2.0, 4.0] {
        out.push(Weight::power(g));
    }
    out.push(Weight::angular(0.5).expect("valid amplitude"));
    out.push(power_angular(0.5, 0.5));
    out
}

/// A tent (1 - d(c, z)/r)₊².
pub fn tent(c: &Point, r: f64, z: &Point) -> f64 {
    let d = pseudo_distance(c, z).unwrap_or(f64::INFINITY);
    let t = (1.0 - d / r).max(0.0);
    t * t
}

fn ball_of_level(j: usize) -> PseudoBall {
    if j == 0 {
        return PseudoBall::new(Point::origin(1).expect("origin"), 1.5).expect("valid ball");
    }
    let gap = (-(j as f64)).exp2();
    PseudoBall::new(Point::polar(gap, 0.0).expect("interior point"), 2.0 * gap).expect("valid ball")
}

/// Named node-value test functions.
///
/// Power profiles (1-|z|²)^β for β ∈ {-1/4, 0, 1/2, 1}; for each center level of the
/// family, χ_B and w'χ_B on a boundary ball of that level; four tents and one
/// non-negative angular harmonic.
pub fn test_functions(points: &[Point], family: &FamilyDescriptor, w_dual: &[f64]) -> Vec<(String, Vec<f64>)> {
    let mut out = Vec::new();
    for beta in [-0.25, 0.0, 0.5, 1.0] {
        out.push((format!("power({beta})"), points.iter().map(|z| z.depth().powf(beta)).collect()));
    }
    for j in 0..family.radial_levels {
        let b = ball_of_level(j);
        out.push((format!("chi(level {j})"), points.iter().map(|z| if b.contains(z) { 1.0 } else { 0.0 }).collect()));
        out.push((
            format!("dual-chi(level {j})"),
            points.iter().zip(w_dual).map(|(z, v)| if b.contains(z) { *v } else { 0.0 }).collect(),
        ));
    }
    for (k, (cx, cy, r)) in [(0.0, 0.0, 0.5), (0.5, 0.0, 0.3), (0.9, 0.0, 0.1), (0.0, -0.7, 0.2)].into_iter().enumerate() {
        let c = Point::c1(cx, cy).expect("interior point");
        out.push((format!("tent({k})"), points.iter().map(|z| tent(&c, r, z)).collect()));
    }
    out.push((
        "harmonic(3)".to_string(),
        points
            .iter()
            .map(|z| {
                let c = z.coords()[0];
                0.5 * (1.0 + c.powi(3).re)
            })
            .collect(),
    ));
    out
}

/// Random non-negative fields: sums of one to three tents, half of them times a power profile.
pub fn random_fields(points: &[Point], count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = seeded(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=3);
            let tents: Vec<(Point, f64, f64)> = (0..k)
                .map(|_| {
                    let gap = (-rng.gen::<f64>() * 6.0).exp2().max(1e-3);
                    let c = Point::polar(gap, rng.gen::<f64>() * std::f64::consts::TAU).expect("interior point");
                    let r = gap * (0.5 + 2.0 * rng.gen::<f64>()) + 0.05;
                    (c, r, 0.2 + rng.gen::<f64>())
                })
                .collect();
            let beta = if rng.gen::<bool>() { rng.gen_range(-0.2..1.0) } else { 0.0 };
            points
                .iter()
                .map(|z| {
                    let s: f64 = tents.iter().map(|(c, r, h)| h * tent(c, *r, z)).sum();
                    s * z.depth().powf(beta)
                })
                .collect()
        })
        .collect()
}

/// Random interior point with a log-uniform gap in [2^{-depth}, 1].
pub fn random_point(rng: &mut impl Rng, depth: f64) -> Point {
    let gap = (-rng.gen::<f64>() * depth).exp2();
    let gap = if gap >= 1.0 { 1.0 } else { gap };
    Point::polar(gap, rng.gen::<f64>() * std::f64::consts::TAU).expect("interior point")
}

/// Random pseudo-balls of the disk; boundary balls have R ∈ (gap, min(3, 8·gap + 0.1)).
pub fn random_balls(count: usize, seed: u64, class_b: bool) -> Vec<PseudoBall> {
    let mut rng = seeded(seed);
    (0..count)
        .map(|_| {
            let c = random_point(&mut rng, 8.0);
            let g = c.gap();
            let r = if class_b {
                let hi = (8.0 * g + 0.1).min(2.999);
                g * (1.0 + 1e-6) + rng.gen::<f64>() * (hi - g)
            } else {
                let hi = if rng.gen::<bool>() { 0.9 * g } else { (8.0 * g).min(2.999) };
                (0.05 + 0.95 * rng.gen::<f64>()) * hi
            };
            PseudoBall::new(c, r).expect("valid ball")
        })
        .collect()
}

/// Random weights (1-|z|²)^γ·(1 + a·cos(arg z)) with γ ∈ [-0.75, 1.25] and |a| ≤ 0.6.
pub fn random_weights(count: usize, seed: u64) -> Vec<Weight> {
    let mut rng = seeded(seed);
    (0..count)
        .map(|_| {
            let g = rng.gen_range(-0.75..1.25);
            let a = rng.gen_range(-0.6..0.6);
            power_angular(g, a)
        })
        .collect()
}
