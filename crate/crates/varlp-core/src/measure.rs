//! Quadrature against dμ_α = (1 - |z|²)^{α-1} dμ on the ball and on pseudo-balls.
//!
//! Two routes are provided. Node membership ([`QuadratureGrid::restrict`])
//! keeps the grid's own nodes that fall in a region; it is the route used for
//! grid-sampled fields. For pointwise-evaluable integrands in dimension one,
//! [`QuadratureGrid::adapted`] builds a rule whose radial panels and angular arcs
//! follow the exact boundary of the pseudo-ball.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::sync::atomic::{AtomicU64, Ordering};
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{sphere_point, Point, PseudoBall, C64, ORIGIN_EPS};
use crate::numeric::{gauss_legendre, pairwise_sum, radical_inverse, seeded, PRIMES};

/// The parameters α > 0 and n ≥ 1 of the measure μ_α on the ball of ℂⁿ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureParams {
    pub alpha: f64,
    pub dim: usize,
}

impl MeasureParams {
    pub fn new(alpha: f64, dim: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(invalid("alpha must be positive"));
        }
        if dim == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        Ok(MeasureParams { alpha, dim })
    }

    /// (1 - |z|²)^{α-1}
    pub fn density(&self, z: &Point) -> f64 {
        z.depth().powf(self.alpha - 1.0)
    }

    /// μ_α(𝔹) = πⁿ Γ(α) / Γ(n + α), with μ the unnormalized Lebesgue measure.
    pub fn total_mass(&self) -> f64 {
        let n = self.dim as f64;
        PI.powf(n) * (libm::lgamma(self.alpha) - libm::lgamma(n + self.alpha)).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    PolarTensor,
    MonteCarlo,
}

/// Resolution settings of a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub scheme: Scheme,
    /// Number of graded radial panels toward the boundary.
    pub levels: usize,
    /// Gauss points per radial panel.
    pub points: usize,
    /// Equispaced angular nodes of the global grid.
    pub angular: usize,
    /// Grading exponent s of the panel breakpoints 1 - 2^{-j s}; `None` picks 1.5 for α < 1, else 1.
    pub grading: Option<f64>,
    /// Angular Gauss points on each arc of a ball-adapted rule.
    pub ball_angular: usize,
    /// Node count of the Monte Carlo scheme.
    pub samples: usize,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            scheme: Scheme::PolarTensor,
            levels: 12,
            points: 8,
            angular: 64,
            grading: None,
            ball_angular: 12,
            samples: 20_000,
            seed: 20_240_601,
        }
    }
}

impl GridSpec {
    pub fn grading_for(&self, alpha: f64) -> f64 {
        self.grading.unwrap_or(if alpha < 1.0 { 1.5 } else { 1.0 })
    }

    /// One refinement step: twice the graded depth, angular nodes and samples.
    pub fn refined(&self) -> Self {
        GridSpec {
            levels: self.levels * 2,
            angular: self.angular * 2,
            ball_angular: self.ball_angular * 2,
            samples: self.samples * 2,
            ..self.clone()
        }
    }
}

/// Radial structure of a polar tensor grid; node (i, a) has flat index i·angular + a.
#[derive(Clone, Debug)]
pub struct PolarLayout {
    /// 1 - r at each radial node, increasing radius order.
    pub gaps: Vec<f64>,
    /// Radial cell [gap_lo, gap_hi] of each radial node.
    pub cells: Vec<(f64, f64)>,
    /// ∫ over the radial cell of (1-r²)^{α-1} r dr, as carried by the rule.
    pub radial_mass: Vec<f64>,
    pub angular: usize,
}

static GRID_IDS: AtomicU64 = AtomicU64::new(1);

/// A discrete measure on the ball: nodes with Lebesgue weights and μ_α masses.
#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    id: u64,
    params: MeasureParams,
    spec: GridSpec,
    points: Vec<Point>,
    weights: Vec<f64>,
    density: Vec<f64>,
    mass: Vec<f64>,
    polar: Option<PolarLayout>,
}

/// One radial node: position (gap) and its share of ∫ F(t)(t(2-t))^{α-1} dt.
#[derive(Clone, Copy, Debug)]
struct RadialNode {
    gap: f64,
    mass: f64,
    cell: (f64, f64),
}

/// Smoothstep map of [0,1]; flattens algebraic endpoint behaviour on finite panels.
fn smoothstep(u: f64) -> (f64, f64) {
    (u * u * (3.0 - 2.0 * u), 6.0 * u * (1.0 - u))
}

/// Gauss panel on [a, b] in gap coordinates carrying the density (t(2-t))^{α-1}.
fn finite_panel(a: f64, b: f64, q: usize, alpha: f64, smooth: bool, out: &mut Vec<RadialNode>) {
    let (x, w) = gauss_legendre(q);
    let mut acc = 0.0;
    for (xi, wi) in x.iter().zip(&w) {
        let u = 0.5 * (xi + 1.0);
        let (g, dg) = if smooth { smoothstep(u) } else { (u, 1.0) };
        let t = a + (b - a) * g;
        let dt = 0.5 * wi * (b - a) * dg;
        let lo = acc;
        acc += 0.5 * wi;
        let map = |v: f64| a + (b - a) * if smooth { smoothstep(v).0 } else { v };
        out.push(RadialNode { gap: t, mass: dt * (t * (2.0 - t)).powf(alpha - 1.0), cell: (map(lo), map(acc.min(1.0))) });
    }
}

/// Terminal panel [0, b] with t = b·u^{1/α}, which absorbs the boundary singularity exactly.
fn terminal_panel(b: f64, q: usize, alpha: f64, out: &mut Vec<RadialNode>) {
    let (x, w) = gauss_legendre(q);
    let mut acc = 0.0;
    for (xi, wi) in x.iter().zip(&w) {
        let u = 0.5 * (xi + 1.0);
        let t = b * u.powf(1.0 / alpha);
        let m = 0.5 * wi * b.powf(alpha) / alpha * (2.0 - t).powf(alpha - 1.0);
        let lo = acc;
        acc += 0.5 * wi;
        out.push(RadialNode { gap: t, mass: m, cell: (b * lo.powf(1.0 / alpha), b * acc.min(1.0).powf(1.0 / alpha)) });
    }
}

/// Graded rule on gap ∈ (0, top]: panels [top·2^{-(j+1)s}, top·2^{-js}] then the terminal panel.
fn graded_rule(top: f64, levels: usize, grading: f64, q: usize, alpha: f64, out: &mut Vec<RadialNode>) {
    let start = out.len();
    let mut hi = top;
    for j in 0..levels {
        let lo = top * libm::exp2(-((j + 1) as f64) * grading);
        finite_panel(lo, hi, q, alpha, false, out);
        hi = lo;
    }
    terminal_panel(hi, q, alpha, out);
    out[start..].sort_by(|a, b| a.gap.partial_cmp(&b.gap).unwrap());
}

/// Gauss panels on [a, b] with breakpoints in geometric ratio two.
fn log_panels(a: f64, b: f64, q: usize, alpha: f64, out: &mut Vec<RadialNode>) {
    let count = libm::ceil(libm::log2(b / a)).max(1.0) as usize;
    let ratio = libm::pow(b / a, 1.0 / count as f64);
    let mut lo = a;
    for _ in 0..count {
        let hi = (lo * ratio).min(b);
        finite_panel(lo, hi, q, alpha, false, out);
        lo = hi;
    }
}

impl QuadratureGrid {
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn params(&self) -> &MeasureParams {
        &self.params
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Lebesgue weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// (1 - |z|²)^{α-1} at each node.
    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// μ_α masses, weight·density.
    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn polar(&self) -> Option<&PolarLayout> {
        self.polar.as_ref()
    }

    /// Whole-ball rule carrying the grid's own nodes.
    pub fn whole(&self) -> RegionRule {
        RegionRule {
            points: self.points.clone(),
            mass: self.mass.clone(),
            index: Some((0..self.len() as u32).collect()),
            grid_id: Some(self.id),
        }
    }

    /// Nodes of the grid inside the region (membership by node).
    pub fn restrict(&self, region: &Region) -> RegionRule {
        match region {
            Region::Whole => self.whole(),
            Region::Ball(b) if b.is_whole() => self.whole(),
            Region::Ball(b) => {
                let mut points = Vec::new();
                let mut mass = Vec::new();
                let mut index = Vec::new();
                for (i, z) in self.points.iter().enumerate() {
                    if b.contains(z) {
                        points.push(z.clone());
                        mass.push(self.mass[i]);
                        index.push(i as u32);
                    }
                }
                RegionRule { points, mass, index: Some(index), grid_id: Some(self.id) }
            }
        }
    }

    /// Boundary-fitted rule for the region in dimension one; membership rule otherwise.
    pub fn adapted(&self, region: &Region) -> Result<RegionRule> {
        let b = match region {
            Region::Whole => return Ok(self.whole()),
            Region::Ball(b) if b.is_whole() => return Ok(self.whole()),
            Region::Ball(b) => b,
        };
        if self.polar.is_none() || self.params.dim != 1 {
            return Ok(self.restrict(region));
        }
        adapted_ball_rule(b, &self.params, &self.spec, 0.0)
    }

    /// Boundary-fitted rule for `ball ∩ {1 - |z| > floor}`, with log-spaced panels above the floor.
    pub fn adapted_above(&self, ball: &PseudoBall, floor: f64) -> Result<RegionRule> {
        if !(floor > 0.0 && floor < 1.0) {
            return Err(invalid("truncation floor must lie in (0, 1)"));
        }
        if self.polar.is_none() || self.params.dim != 1 {
            let mut rule = self.restrict(&Region::Ball(ball.clone()));
            let keep: Vec<bool> = rule.points.iter().map(|z| z.gap() > floor).collect();
            let mut k = keep.iter();
            rule.points.retain(|_| *k.next().unwrap());
            let mut k = keep.iter();
            rule.mass.retain(|_| *k.next().unwrap());
            if let Some(idx) = rule.index.as_mut() {
                let mut k = keep.iter();
                idx.retain(|_| *k.next().unwrap());
            }
            return Ok(rule);
        }
        adapted_ball_rule(ball, &self.params, &self.spec, floor)
    }
}

/// Either the whole ball or a pseudo-ball.
#[derive(Clone, Debug)]
pub enum Region {
    Whole,
    Ball(PseudoBall),
}

impl From<PseudoBall> for Region {
    fn from(b: PseudoBall) -> Self {
        Region::Ball(b)
    }
}

/// A discrete measure restricted to a region.
///
/// `index` links nodes back to a global grid when the rule was obtained by
/// membership, which is what allows grid-sampled fields to be evaluated on it.
#[derive(Clone, Debug, Default)]
pub struct RegionRule {
    pub points: Vec<Point>,
    pub mass: Vec<f64>,
    pub index: Option<Vec<u32>>,
    pub grid_id: Option<u64>,
}

impl RegionRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// μ_α of the region as carried by the rule.
    pub fn measure(&self) -> f64 {
        pairwise_sum(&self.mass)
    }

    /// ∫ v dμ_α for node values `v`.
    pub fn integrate_values(&self, v: &[f64]) -> Result<f64> {
        let mut terms = Vec::with_capacity(v.len());
        for (i, (x, m)) in v.iter().zip(&self.mass).enumerate() {
            if x.is_nan() {
                return Err(Error::NonFinite { node: i, what: alloc::string::String::from("integrand is NaN") });
            }
            terms.push(x * m);
        }
        Ok(pairwise_sum(&terms))
    }
}

/// An integrand: a pointwise-evaluable function or a grid-sampled field.
pub enum Scalar<'a> {
    Func(&'a dyn Fn(&Point) -> f64),
    Field(&'a GridField),
}

impl Scalar<'_> {
    pub fn sample(&self, rule: &RegionRule) -> Result<Vec<f64>> {
        match self {
            Scalar::Func(f) => Ok(rule.points.iter().map(|z| f(z)).collect()),
            Scalar::Field(g) => g.sample(rule),
        }
    }
}

/// ∫_region f dμ_α; functions use the adapted rule, fields use node membership.
pub fn integrate(f: &Scalar, region: &Region, grid: &QuadratureGrid) -> Result<f64> {
    let rule = match f {
        Scalar::Func(_) => grid.adapted(region)?,
        Scalar::Field(_) => grid.restrict(region),
    };
    if rule.is_empty() {
        return Ok(0.0);
    }
    rule.integrate_values(&f.sample(&rule)?)
}

/// μ_α(region) through the adapted rule.
pub fn mu_alpha(region: &Region, grid: &QuadratureGrid) -> Result<f64> {
    let one = |_: &Point| 1.0;
    integrate(&Scalar::Func(&one), region, grid)
}

/// Build the global grid for the given measure.
pub fn build_grid(params: MeasureParams, spec: &GridSpec) -> Result<Arc<QuadratureGrid>> {
    match spec.scheme {
        Scheme::PolarTensor => {
            if params.dim != 1 {
                return Err(Error::Unsupported(alloc::format!(
                    "deterministic polar grid in dimension {}",
                    params.dim
                )));
            }
            build_polar(params, spec)
        }
        Scheme::MonteCarlo => build_monte_carlo(params, spec),
    }
    .map(Arc::new)
}

fn build_polar(params: MeasureParams, spec: &GridSpec) -> Result<QuadratureGrid> {
    if spec.levels == 0 || spec.points == 0 || spec.angular == 0 {
        return Err(invalid("grid resolution must be positive"));
    }
    let alpha = params.alpha;
    let mut radial = Vec::new();
    graded_rule(1.0, spec.levels, spec.grading_for(alpha), spec.points, alpha, &mut radial);
    radial.reverse();
    let na = spec.angular;
    let dtheta = 2.0 * PI / na as f64;
    let n = radial.len() * na;
    let mut points = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut density = Vec::with_capacity(n);
    let mut mass = Vec::with_capacity(n);
    for rn in &radial {
        let dens = (rn.gap * (2.0 - rn.gap)).powf(alpha - 1.0);
        let m = rn.mass * (1.0 - rn.gap) * dtheta;
        for a in 0..na {
            points.push(Point::polar(rn.gap, a as f64 * dtheta)?);
            mass.push(m);
            density.push(dens);
            weights.push(m / dens);
        }
    }
    let layout = PolarLayout {
        gaps: radial.iter().map(|r| r.gap).collect(),
        cells: radial.iter().map(|r| (r.cell.0.min(r.cell.1), r.cell.0.max(r.cell.1))).collect(),
        radial_mass: radial.iter().map(|r| r.mass * (1.0 - r.gap)).collect(),
        angular: na,
    };
    Ok(QuadratureGrid {
        id: GRID_IDS.fetch_add(1, Ordering::Relaxed),
        params,
        spec: spec.clone(),
        points,
        weights,
        density,
        mass,
        polar: Some(layout),
    })
}

fn build_monte_carlo(params: MeasureParams, spec: &GridSpec) -> Result<QuadratureGrid> {
    use rand::Rng;
    if spec.samples == 0 {
        return Err(invalid("sample count must be positive"));
    }
    let n = params.dim;
    let alpha = params.alpha;
    let dims = 1 + 2 * n;
    if dims > PRIMES.len() {
        return Err(Error::Unsupported(alloc::format!("quasi-random nodes in dimension {n}")));
    }
    let mut rng = seeded(spec.seed);
    let shift: Vec<f64> = (0..dims).map(|_| rng.gen::<f64>()).collect();
    // μ_α(E) = πⁿ/(n-1)! ∫ 1_E u^{n-1} y^{α-1} dy dσ with u = |z|², y = 1-u, σ normalized.
    let mut fact = 1.0;
    for k in 1..n {
        fact *= k as f64;
    }
    let scale = PI.powf(n as f64) / fact / alpha / spec.samples as f64;
    let mut points = Vec::with_capacity(spec.samples);
    let mut weights = Vec::with_capacity(spec.samples);
    let mut density = Vec::with_capacity(spec.samples);
    let mut mass = Vec::with_capacity(spec.samples);
    for k in 0..spec.samples {
        let idx = k as u64 + 1;
        let u: Vec<f64> = (0..dims).map(|d| (radical_inverse(idx, PRIMES[d]) + shift[d]).fract()).collect();
        let y = u[0].max(1e-300).powf(1.0 / alpha);
        if !(y > 0.0 && y <= 1.0) {
            continue;
        }
        let r2 = 1.0 - y;
        let gap = y / (1.0 + r2.sqrt());
        let dir = sphere_point(n, &u[1..]);
        let z = Point::from_gap(gap, &dir)?;
        let m = scale * r2.powf(n as f64 - 1.0);
        let dens = y.powf(alpha - 1.0);
        points.push(z);
        mass.push(m);
        density.push(dens);
        weights.push(m / dens);
    }
    Ok(QuadratureGrid {
        id: GRID_IDS.fetch_add(1, Ordering::Relaxed),
        params,
        spec: spec.clone(),
        points,
        weights,
        density,
        mass,
        polar: None,
    })
}

/// Boundary-fitted rule for a pseudo-ball of the disk.
fn adapted_ball_rule(b: &PseudoBall, params: &MeasureParams, spec: &GridSpec, floor: f64) -> Result<RegionRule> {
    let alpha = params.alpha;
    let q = spec.points.max(2);
    let c = b.center();
    let big_r = b.radius();
    let mut radial = Vec::new();
    let na = spec.ball_angular.max(2);
    if c.norm() < ORIGIN_EPS {
        // d(0, ζ) = |ζ|: the Euclidean disk of radius R.
        if big_r >= 1.0 && floor > 0.0 {
            log_panels(floor, 1.0, q, alpha, &mut radial);
        } else if big_r >= 1.0 {
            graded_rule(1.0, spec.levels, spec.grading_for(alpha), q, alpha, &mut radial);
        } else {
            let lo = (1.0 - big_r).max(floor);
            let mid = 0.5 * (lo + 1.0);
            finite_panel(lo, mid, q, alpha, true, &mut radial);
            finite_panel(mid, 1.0, q, alpha, true, &mut radial);
        }
        return Ok(tensor_rule(&radial, |_| None, 0.0, 2 * na));
    }
    let rho = c.norm();
    let gc = c.gap();
    let theta_c = c.arg();
    // Arc half-width at radius s: 2 asin(u/2) with u = R - |s - |c||, or the full circle once u ≥ 2.
    let half_width = move |gap: f64| -> Option<f64> {
        let s = 1.0 - gap;
        let u = big_r - (s - rho).abs();
        if u >= 2.0 {
            None
        } else {
            Some(2.0 * (0.5 * u.max(0.0)).asin())
        }
    };
    // Gap range and breakpoints.
    let gap_hi = (gc + big_r).min(1.0);
    let touches = big_r > gc;
    let gap_lo = if touches { 0.0 } else { gc - big_r };
    let mut breaks: Vec<f64> = alloc::vec![gap_lo, gap_hi];
    for cand in [gc, gc + (big_r - 2.0), gc - (big_r - 2.0)] {
        if cand > gap_lo && cand < gap_hi {
            breaks.push(cand);
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    for w in breaks.windows(2) {
        let (a, bb) = (w[0], w[1]);
        if bb <= floor {
            continue;
        }
        if floor > 0.0 && a <= floor {
            log_panels(floor, bb, q, alpha, &mut radial);
        } else if touches && a == 0.0 {
            graded_rule(bb, spec.levels, spec.grading_for(alpha), q, alpha, &mut radial);
        } else {
            let mid = 0.5 * (a + bb);
            finite_panel(a, mid, q, alpha, true, &mut radial);
            finite_panel(mid, bb, q, alpha, true, &mut radial);
        }
    }
    Ok(tensor_rule(&radial, half_width, theta_c, 2 * na))
}

/// Product of a radial rule with per-radius arcs (Gauss) or full circles (trapezoid).
fn tensor_rule(radial: &[RadialNode], half_width: impl Fn(f64) -> Option<f64>, theta_c: f64, full: usize) -> RegionRule {
    let (gx, gw) = gauss_legendre(full / 2);
    let mut points = Vec::new();
    let mut mass = Vec::new();
    for rn in radial {
        if !(rn.gap > 0.0) || rn.mass == 0.0 {
            continue;
        }
        let rm = rn.mass * (1.0 - rn.gap);
        match half_width(rn.gap) {
            None => {
                let dt = 2.0 * PI / full as f64;
                for a in 0..full {
                    points.push(polar_unchecked(rn.gap, theta_c + (a as f64 + 0.5) * dt));
                    mass.push(rm * dt);
                }
            }
            Some(h) if h > 0.0 => {
                for (x, w) in gx.iter().zip(&gw) {
                    points.push(polar_unchecked(rn.gap, theta_c + h * x));
                    mass.push(rm * w * h);
                }
            }
            Some(_) => {}
        }
    }
    RegionRule { points, mass, index: None, grid_id: None }
}

fn polar_unchecked(gap: f64, theta: f64) -> Point {
    Point::from_gap(gap, &[C64::new(theta.cos(), theta.sin())]).expect("gap in (0, 1]")
}

/// Real scalar values on the nodes of a grid.
#[derive(Clone, Debug)]
pub struct GridField {
    grid: Arc<QuadratureGrid>,
    values: Vec<f64>,
}

impl GridField {
    pub fn new(grid: Arc<QuadratureGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(invalid("field length differs from node count"));
        }
        Ok(GridField { grid, values })
    }

    pub fn from_fn(grid: &Arc<QuadratureGrid>, f: impl Fn(&Point) -> f64) -> Self {
        let values = grid.points.iter().map(f).collect();
        GridField { grid: grid.clone(), values }
    }

    pub fn constant(grid: &Arc<QuadratureGrid>, c: f64) -> Self {
        GridField { grid: grid.clone(), values: alloc::vec![c; grid.len()] }
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        GridField { grid: self.grid.clone(), values: self.values.iter().map(|v| f(*v)).collect() }
    }

    pub fn zip_map(&self, other: &GridField, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid.id != other.grid.id {
            return Err(Error::GridMismatch);
        }
        Ok(GridField {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    /// Values at the nodes of a membership rule on the same grid.
    pub fn sample(&self, rule: &RegionRule) -> Result<Vec<f64>> {
        match (&rule.index, rule.grid_id) {
            (Some(idx), Some(id)) if id == self.grid.id => Ok(idx.iter().map(|&i| self.values[i as usize]).collect()),
            _ => Err(Error::GridMismatch),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }
}

/// Complex scalar values on the nodes of a grid.
#[derive(Clone, Debug)]
pub struct ComplexField {
    pub grid: Arc<QuadratureGrid>,
    pub values: Vec<C64>,
}

impl ComplexField {
    pub fn modulus(&self) -> GridField {
        GridField { grid: self.grid.clone(), values: self.values.iter().map(|v| v.norm()).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PseudoBall;

    fn grid(alpha: f64) -> Arc<QuadratureGrid> {
        build_grid(MeasureParams::new(alpha, 1).unwrap(), &GridSpec::default()).unwrap()
    }

    #[test]
    fn total_mass_closed_forms() {
        for (a, m) in [(1.0, PI), (2.0, PI / 2.0), (0.5, 2.0 * PI)] {
            let g = grid(a);
            let s = pairwise_sum(g.mass());
            assert!((s - m).abs() < 1e-8 * m, "alpha {a}: {s} vs {m}");
            assert!((MeasureParams::new(a, 1).unwrap().total_mass() - m).abs() < 1e-12);
        }
        assert!((MeasureParams::new(1.0, 2).unwrap().total_mass() - PI * PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn disk_measure() {
        let g = grid(1.0);
        let b = PseudoBall::new(Point::origin(1).unwrap(), 0.5).unwrap();
        let m = mu_alpha(&Region::Ball(b), &g).unwrap();
        assert!((m - PI / 4.0).abs() < 1e-12);
        let f = |_: &Point| 1.0;
        let w = integrate(&Scalar::Func(&f), &Region::Whole, &grid(2.0)).unwrap();
        assert!((w - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn polar_grid_nodes_inside() {
        let g = grid(0.5);
        assert!(g.points().iter().all(|p| p.gap() > 0.0));
        assert!(g.weights().iter().all(|w| *w > 0.0));
    }

    #[test]
    fn monte_carlo_deterministic() {
        let spec = GridSpec { scheme: Scheme::MonteCarlo, samples: 2000, ..Default::default() };
        let p = MeasureParams::new(1.0, 2).unwrap();
        let a = build_grid(p, &spec).unwrap();
        let b = build_grid(p, &spec).unwrap();
        assert_eq!(a.points(), b.points());
        assert_eq!(a.mass(), b.mass());
        let s = pairwise_sum(a.mass());
        assert!((s - PI * PI / 2.0).abs() < 0.05 * s);
    }

    #[test]
    fn polar_rejects_dimension_two() {
        let p = MeasureParams::new(1.0, 2).unwrap();
        assert!(matches!(build_grid(p, &GridSpec::default()), Err(Error::Unsupported(_))));
    }
}
