//! Pseudo-metric geometry of the unit ball of ℂⁿ.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{invalid, Error, Result};
use crate::numeric::{radical_inverse, PRIMES};

pub type C64 = Complex64;

/// Norms below this are treated as the origin by the distance formula.
pub const ORIGIN_EPS: f64 = 1e-14;

/// Any radius at or above this covers the whole ball.
pub const MAX_RADIUS: f64 = 3.0;

/// A point of the open unit ball.
///
/// Besides the coordinates the point keeps `gap = 1 - |z|`, computed exactly
/// when the point is built from a boundary distance, so boundary-layer
/// quantities do not suffer from cancellation.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: SmallVec<[C64; 2]>,
    norm: f64,
    gap: f64,
}

impl Point {
    pub fn new(coords: &[C64]) -> Result<Self> {
        if coords.is_empty() {
            return Err(invalid("point dimension must be at least 1"));
        }
        let nsq: f64 = coords.iter().map(|c| c.norm_sqr()).sum();
        if !nsq.is_finite() || nsq >= 1.0 {
            return Err(Error::OutsideBall { norm_sqr: nsq });
        }
        let norm = nsq.sqrt();
        Ok(Point { coords: SmallVec::from_slice(coords), norm, gap: 1.0 - norm })
    }

    /// Point of ℂ¹ from its real and imaginary parts.
    pub fn c1(re: f64, im: f64) -> Result<Self> {
        Point::new(&[C64::new(re, im)])
    }

    /// Point `(1 - gap)·u` for a unit direction `u`; `gap` is stored exactly.
    pub fn from_gap(gap: f64, direction: &[C64]) -> Result<Self> {
        if !(gap > 0.0 && gap <= 1.0) {
            return Err(Error::OutsideBall { norm_sqr: (1.0 - gap) * (1.0 - gap) });
        }
        if direction.is_empty() {
            return Err(invalid("point dimension must be at least 1"));
        }
        let r = 1.0 - gap;
        let coords: SmallVec<[C64; 2]> = direction.iter().map(|c| c * r).collect();
        Ok(Point { coords, norm: r, gap })
    }

    /// Point of ℂ¹ in polar form with boundary distance `gap = 1 - r`.
    pub fn polar(gap: f64, theta: f64) -> Result<Self> {
        Point::from_gap(gap, &[C64::new(theta.cos(), theta.sin())])
    }

    pub fn origin(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("point dimension must be at least 1"));
        }
        Ok(Point { coords: SmallVec::from_elem(C64::new(0.0, 0.0), dim), norm: 0.0, gap: 1.0 })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    /// |z|
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// 1 - |z|
    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// 1 - |z|²
    pub fn depth(&self) -> f64 {
        self.gap * (2.0 - self.gap)
    }

    /// Argument of the first coordinate.
    pub fn arg(&self) -> f64 {
        self.coords[0].arg()
    }
}

/// Hermitian product ⟨z, ζ⟩ = Σ z_i conj(ζ_i).
pub fn hermitian(z: &[C64], zeta: &[C64]) -> C64 {
    z.iter().zip(zeta).map(|(a, b)| a * b.conj()).sum()
}

/// The pseudo-distance d(z, ζ) between two points of the ball.
pub fn pseudo_distance(z: &Point, zeta: &Point) -> Result<f64> {
    if z.dim() != zeta.dim() {
        return Err(Error::DimensionMismatch { left: z.dim(), right: zeta.dim() });
    }
    Ok(dist(z, zeta))
}

/// The pseudo-distance on coordinates of the closed ball.
pub fn pseudo_distance_closure(z: &[C64], zeta: &[C64]) -> Result<f64> {
    if z.len() != zeta.len() {
        return Err(Error::DimensionMismatch { left: z.len(), right: zeta.len() });
    }
    let nz = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let nw = zeta.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if nz > 1.0 + 1e-15 || nw > 1.0 + 1e-15 {
        return Err(Error::OutsideBall { norm_sqr: nz.max(nw) * nz.max(nw) });
    }
    Ok(dist_parts(z, nz, 1.0 - nz, zeta, nw, 1.0 - nw))
}

pub(crate) fn dist(z: &Point, zeta: &Point) -> f64 {
    dist_parts(&z.coords, z.norm, z.gap, &zeta.coords, zeta.norm, zeta.gap)
}

#[inline]
fn dist_parts(z: &[C64], nz: f64, gz: f64, w: &[C64], nw: f64, gw: f64) -> f64 {
    if nz < ORIGIN_EPS || nw < ORIGIN_EPS {
        return nz + nw;
    }
    let radial = (gz - gw).abs();
    // For unit vectors a, b: Re(1 - ⟨a,b⟩) = |a - b|²/2, which avoids cancellation.
    let mut diff = 0.0;
    let mut im = 0.0;
    for (a, b) in z.iter().zip(w) {
        let ua = a / nz;
        let ub = b / nw;
        diff += (ua - ub).norm_sqr();
        im += (ua * ub.conj()).im;
    }
    radial + (0.5 * diff).hypot(im)
}

/// An open pseudo-ball {ζ : d(center, ζ) < radius}.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoBall {
    center: Point,
    radius: f64,
}

impl PseudoBall {
    /// Radii at or above 3 are clamped to 3, which is the whole ball.
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || radius.is_nan() {
            return Err(invalid("ball radius must be positive"));
        }
        Ok(PseudoBall { center, radius: radius.min(MAX_RADIUS) })
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn is_whole(&self) -> bool {
        self.radius >= MAX_RADIUS
    }

    /// Membership in the boundary class 𝓑.
    pub fn in_class_b(&self) -> bool {
        touches_boundary(self)
    }

    pub fn contains(&self, z: &Point) -> bool {
        ball_contains(self, z)
    }

    /// Same center, radius multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        PseudoBall::new(self.center.clone(), self.radius * factor)
    }

    pub fn summary(&self) -> BallSummary {
        BallSummary {
            center: self.center.coords().iter().flat_map(|c| [c.re, c.im]).collect(),
            radius: self.radius,
        }
    }
}

/// Serializable description of a ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallSummary {
    /// Interleaved (re, im) pairs per coordinate.
    pub center: Vec<f64>,
    pub radius: f64,
}

/// True exactly when radius > 1 - |center|.
pub fn touches_boundary(b: &PseudoBall) -> bool {
    b.radius > b.center.gap
}

/// The relative ball B^k(z) of radius k(1 - |z|).
pub fn regularization_ball(z: &Point, k: f64) -> Result<PseudoBall> {
    if !(k > 0.0 && k < 1.0) {
        return Err(invalid("regularization parameter k must lie in (0, 1)"));
    }
    PseudoBall::new(z.clone(), k * z.gap)
}

pub fn ball_contains(b: &PseudoBall, z: &Point) -> bool {
    if b.radius >= MAX_RADIUS {
        return true;
    }
    dist(&b.center, z) < b.radius
}

/// Parameters of a deterministic ball family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub dim: usize,
    /// Center levels j = 0..radial_levels, at 1 - |c| = 2^{-j}; level 0 is the origin.
    pub radial_levels: usize,
    /// Directions per nonzero center level.
    pub angular_count: usize,
    /// Largest radius of the geometric ladder.
    pub radius_start: f64,
    /// Ladder radius_start·2^{-j}, j = 0..radius_count.
    pub radius_count: usize,
    pub class_b_only: bool,
    /// Seed for the direction set when dim ≥ 2.
    pub seed: u64,
}

impl Default for FamilyDescriptor {
    fn default() -> Self {
        FamilyDescriptor {
            dim: 1,
            radial_levels: 6,
            angular_count: 8,
            radius_start: MAX_RADIUS,
            radius_count: 8,
            class_b_only: true,
            seed: 7,
        }
    }
}

impl FamilyDescriptor {
    /// One refinement step: one more center level and ladder rung, twice the directions.
    pub fn refined(&self) -> Self {
        FamilyDescriptor {
            radial_levels: self.radial_levels + 1,
            angular_count: self.angular_count * 2,
            radius_count: self.radius_count + 1,
            ..self.clone()
        }
    }

    pub fn all_balls(&self) -> Self {
        FamilyDescriptor { class_b_only: false, ..self.clone() }
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.radius_count).map(|j| self.radius_start * libm::exp2(-(j as f64))).collect()
    }

    pub fn centers(&self) -> Result<Vec<Point>> {
        if self.dim == 0 || self.radial_levels == 0 || self.angular_count == 0 {
            return Err(invalid("family descriptor needs positive dimension, levels and directions"));
        }
        let dirs = directions(self.dim, self.angular_count, self.seed);
        let mut out = Vec::new();
        out.push(Point::origin(self.dim)?);
        for j in 1..self.radial_levels {
            let gap = libm::exp2(-(j as f64));
            for d in &dirs {
                out.push(Point::from_gap(gap, d)?);
            }
        }
        Ok(out)
    }
}

/// Unit directions: equispaced angles for n = 1, a Halton set on the sphere for n ≥ 2.
pub fn directions(dim: usize, count: usize, seed: u64) -> Vec<SmallVec<[C64; 2]>> {
    if dim == 1 {
        return (0..count)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / count as f64;
                SmallVec::from_slice(&[C64::new(t.cos(), t.sin())])
            })
            .collect();
    }
    let offset = 1 + (seed % 1024);
    (0..count)
        .map(|k| {
            let idx = offset + k as u64;
            let u: Vec<f64> = (0..2 * dim).map(|d| radical_inverse(idx, PRIMES[d % PRIMES.len()])).collect();
            sphere_point(dim, &u)
        })
        .collect()
}

/// Map 2n uniforms in (0,1) to a point of the unit sphere of ℂⁿ via Box-Muller.
pub(crate) fn sphere_point(dim: usize, u: &[f64]) -> SmallVec<[C64; 2]> {
    let mut v: SmallVec<[C64; 2]> = SmallVec::new();
    for i in 0..dim {
        let a = u[2 * i].clamp(1e-300, 1.0);
        let b = u[2 * i + 1];
        let r = (-2.0 * a.ln()).sqrt();
        let t = 2.0 * PI * b;
        v.push(C64::new(r * t.cos(), r * t.sin()));
    }
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in v.iter_mut() {
        *c /= n;
    }
    v
}

/// The enumerated family together with its descriptor.
#[derive(Clone, Debug)]
pub struct BallFamily {
    pub balls: Vec<PseudoBall>,
    pub descriptor: FamilyDescriptor,
}

impl BallFamily {
    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }
}

pub fn enumerate_ball_family(desc: &FamilyDescriptor) -> Result<BallFamily> {
    let radii = desc.radii();
    if radii.is_empty() {
        return Err(invalid("radius ladder is empty"));
    }
    let mut balls = Vec::new();
    for c in desc.centers()? {
        for &r in &radii {
            let b = PseudoBall::new(c.clone(), r)?;
            if desc.class_b_only && !b.in_class_b() {
                continue;
            }
            balls.push(b);
        }
    }
    if balls.is_empty() {
        return Err(Error::EmptyFamily(format!(
            "{} center levels, ladder from {} with {} rungs, class_b_only = {}",
            desc.radial_levels, desc.radius_start, desc.radius_count, desc.class_b_only
        )));
    }
    Ok(BallFamily { balls, descriptor: desc.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        let o = Point::origin(1).unwrap();
        let z = Point::c1(0.3, 0.4).unwrap();
        assert!((pseudo_distance(&o, &z).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(pseudo_distance(&z, &z).unwrap(), 0.0);
        let a = Point::c1(0.5, 0.0).unwrap();
        let b = Point::c1(-0.5, 0.0).unwrap();
        assert!((pseudo_distance(&a, &b).unwrap() - 2.0).abs() < 1e-15);
        let w = Point::new(&[C64::new(0.1, 0.0), C64::new(0.0, 0.1)]).unwrap();
        assert!(pseudo_distance(&a, &w).is_err());
    }

    #[test]
    fn boundary_touch_examples() {
        let o = Point::origin(1).unwrap();
        assert!(!touches_boundary(&PseudoBall::new(o.clone(), 0.5).unwrap()));
        assert!(!touches_boundary(&PseudoBall::new(o, 1.0).unwrap()));
        let c = Point::c1(0.5, 0.0).unwrap();
        assert!(touches_boundary(&PseudoBall::new(c, 0.6).unwrap()));
    }

    #[test]
    fn regularization_examples() {
        let o = Point::origin(1).unwrap();
        assert!((regularization_ball(&o, 0.3).unwrap().radius() - 0.3).abs() < 1e-15);
        let z = Point::polar(0.1, 1.0).unwrap();
        let b = regularization_ball(&z, 0.5).unwrap();
        assert!((b.radius() - 0.05).abs() < 1e-15);
        assert!(!b.in_class_b());
        assert!(regularization_ball(&z, 1.0).is_err());
    }

    #[test]
    fn family_examples() {
        let d = FamilyDescriptor { radial_levels: 1, radius_count: 2, ..Default::default() };
        let f = enumerate_ball_family(&d).unwrap();
        assert_eq!(f.len(), 2);
        let d = FamilyDescriptor { radial_levels: 1, radius_start: 0.5, radius_count: 1, ..Default::default() };
        assert!(matches!(enumerate_ball_family(&d), Err(Error::EmptyFamily(_))));
        let d = FamilyDescriptor::default();
        let a = enumerate_ball_family(&d).unwrap();
        let b = enumerate_ball_family(&d).unwrap();
        assert_eq!(a.balls, b.balls);
        assert!(a.balls.iter().all(|b| b.in_class_b()));
    }

    #[test]
    fn rejects_boundary_points() {
        assert!(Point::c1(1.0, 0.0).is_err());
        assert!(Point::c1(0.6, 0.8).is_err());
        assert!(Point::new(&[]).is_err());
    }
}
