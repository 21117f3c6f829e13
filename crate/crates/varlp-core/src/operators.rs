//! Maximal, regularization, Bergman and iteration operators on grid fields.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{dist, hermitian, BallFamily, FamilyDescriptor, Point, C64};
use crate::measure::{GridField, QuadratureGrid, RegionRule, Scalar};
use crate::norms::{luxemburg_norm, NormOptions};
use crate::numeric::{gauss_legendre, pairwise_sum_by};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorConfig {
    /// Relative radius of the regularization balls B^k(z).
    pub k: f64,
    /// Truncation depth of the iteration series.
    pub big_k: usize,
    /// Norm bound M̂; `None` derives it from an empirical estimate.
    pub m_hat: Option<f64>,
    /// Near-diagonal threshold in units of the local node spacing.
    pub eta_factor: f64,
    /// Minimum number of graded angular levels in near-diagonal cells.
    pub refine_depth: usize,
}

impl Default for OperatorConfig {
    fn default() -> Self {
        OperatorConfig { k: 0.3, big_k: 8, m_hat: None, eta_factor: 10.0, refine_depth: 3 }
    }
}

impl OperatorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.big_k < 1 {
            return Err(invalid("K must be at least 1"));
        }
        if self.m_hat.is_some_and(|m| !(m > 0.0)) {
            return Err(invalid("M̂ must be positive"));
        }
        if !(self.k > 0.0 && self.k < 0.5) {
            return Err(invalid("k must lie in (0, 1/2)"));
        }
        if !(self.eta_factor > 0.0) {
            return Err(invalid("kernel eta factor must be positive"));
        }
        Ok(())
    }
}

/// Node indices sorted by gap, for pruning membership scans.
fn gap_order(grid: &QuadratureGrid) -> (Vec<u32>, Vec<f64>) {
    let mut idx: Vec<u32> = (0..grid.len() as u32).collect();
    let pts = grid.points();
    idx.sort_by(|a, b| pts[*a as usize].gap().partial_cmp(&pts[*b as usize].gap()).unwrap().then(a.cmp(b)));
    let gaps = idx.iter().map(|i| pts[*i as usize].gap()).collect();
    (idx, gaps)
}

/// Nodes ζ with d(c, ζ) < r, in index order; uses d ≥ |gap(c) - gap(ζ)|.
fn members_of(grid: &QuadratureGrid, order: &(Vec<u32>, Vec<f64>), c: &Point, r: f64) -> Vec<u32> {
    let (idx, gaps) = order;
    let lo = gaps.partition_point(|g| *g <= c.gap() - r);
    let hi = gaps.partition_point(|g| *g < c.gap() + r);
    let pts = grid.points();
    let mut out: Vec<u32> = idx[lo..hi].iter().copied().filter(|&i| dist(c, &pts[i as usize]) < r).collect();
    out.sort_unstable();
    out
}

/// m_α or M_α over a frozen ball family, with averages taken on the grid's own nodes.
#[derive(Clone, Debug)]
pub struct MaximalOperator {
    grid: Arc<QuadratureGrid>,
    descriptor: FamilyDescriptor,
    members: Vec<Vec<u32>>,
    measure: Vec<f64>,
    skipped: usize,
}

impl MaximalOperator {
    pub fn new(grid: &Arc<QuadratureGrid>, family: &BallFamily) -> Result<Self> {
        if family.is_empty() {
            return Err(Error::EmptyFamily(alloc::string::String::from("maximal operator needs at least one ball")));
        }
        let order = gap_order(grid);
        let mass = grid.mass();
        let mut members = Vec::with_capacity(family.len());
        let mut measure = Vec::with_capacity(family.len());
        let mut skipped = 0;
        for b in &family.balls {
            let m = if b.is_whole() { (0..grid.len() as u32).collect() } else { members_of(grid, &order, b.center(), b.radius()) };
            if m.is_empty() {
                skipped += 1;
                continue;
            }
            measure.push(pairwise_sum_by(m.len(), &mut |k| mass[m[k] as usize]));
            members.push(m);
        }
        Ok(MaximalOperator { grid: grid.clone(), descriptor: family.descriptor.clone(), members, measure, skipped })
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    pub fn descriptor(&self) -> &FamilyDescriptor {
        &self.descriptor
    }

    /// Family balls that contain no node and were dropped.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    pub fn ball_count(&self) -> usize {
        self.members.len()
    }

    /// μ_α-averages of |f| over each retained ball.
    pub fn averages(&self, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.grid.len() {
            return Err(Error::GridMismatch);
        }
        let mass = self.grid.mass();
        Ok(self
            .members
            .iter()
            .zip(&self.measure)
            .map(|(m, mu)| pairwise_sum_by(m.len(), &mut |k| f[m[k] as usize].abs() * mass[m[k] as usize]) / mu)
            .collect())
    }

    /// Nodewise max of the averages of the balls containing the node; 0 where no ball does.
    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        let avg = self.averages(f)?;
        let mut out = alloc::vec![0.0f64; f.len()];
        for (m, a) in self.members.iter().zip(avg) {
            for &i in m {
                let o = &mut out[i as usize];
                if a > *o {
                    *o = a;
                }
            }
        }
        Ok(out)
    }

    pub fn apply_field(&self, f: &GridField) -> Result<GridField> {
        if f.grid().id() != self.grid.id() {
            return Err(Error::GridMismatch);
        }
        GridField::new(self.grid.clone(), self.apply(f.values())?)
    }

    /// Membership count of each node.
    pub fn coverage(&self) -> Vec<u32> {
        let mut c = alloc::vec![0u32; self.grid.len()];
        for m in &self.members {
            for &i in m {
                c[i as usize] += 1;
            }
        }
        c
    }
}

/// m_α f over a family of boundary balls.
pub fn maximal_boundary(f: &GridField, family: &BallFamily) -> Result<GridField> {
    if family.balls.iter().any(|b| !b.in_class_b()) {
        return Err(invalid("m_α takes a family of boundary balls"));
    }
    MaximalOperator::new(f.grid(), family)?.apply_field(f)
}

/// M_α f over an unfiltered family.
pub fn maximal_full(f: &GridField, family: &BallFamily) -> Result<GridField> {
    MaximalOperator::new(f.grid(), family)?.apply_field(f)
}

/// R_k^α: averages over B^k(z) = B(z, k(1 - |z|)) on the grid's nodes.
#[derive(Clone, Debug)]
pub struct Regularizer {
    grid: Arc<QuadratureGrid>,
    k: f64,
    members: Vec<Vec<u32>>,
    measure: Vec<f64>,
}

impl Regularizer {
    pub fn new(grid: &Arc<QuadratureGrid>, k: f64) -> Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(invalid("k must lie in (0, 1)"));
        }
        let order = gap_order(grid);
        let mass = grid.mass();
        let mut members = Vec::with_capacity(grid.len());
        let mut measure = Vec::with_capacity(grid.len());
        for (i, z) in grid.points().iter().enumerate() {
            let m = members_of(grid, &order, z, k * z.gap());
            if m.is_empty() {
                return Err(Error::NonFinite { node: i, what: alloc::format!("B^{k}(z) holds no node") });
            }
            measure.push(pairwise_sum_by(m.len(), &mut |t| mass[m[t] as usize]));
            members.push(m);
        }
        Ok(Regularizer { grid: grid.clone(), k, members, measure })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.grid.len() {
            return Err(Error::GridMismatch);
        }
        let mass = self.grid.mass();
        Ok(self
            .members
            .iter()
            .zip(&self.measure)
            .map(|(m, mu)| pairwise_sum_by(m.len(), &mut |t| f[m[t] as usize] * mass[m[t] as usize]) / mu)
            .collect())
    }

    pub fn apply_field(&self, f: &GridField) -> Result<GridField> {
        if f.grid().id() != self.grid.id() {
            return Err(Error::GridMismatch);
        }
        GridField::new(self.grid.clone(), self.apply(f.values())?)
    }
}

pub fn regularize(f: &GridField, k: f64) -> Result<GridField> {
    Regularizer::new(f.grid(), k)?.apply_field(f)
}

fn kernel(w: C64, exponent: f64, positive: bool) -> C64 {
    let d = C64::new(1.0 - w.re, -w.im);
    if positive {
        C64::new(d.norm().powf(-exponent), 0.0)
    } else {
        // (1 - w)^{-s} on the principal branch; Re(1 - w) > 0 inside the ball.
        let (r, t) = d.to_polar();
        C64::from_polar(r.powf(-exponent), -exponent * t)
    }
}

/// P_α/P_α⁺ on a polar tensor grid, with kernel entries indexed by (i, j, Δa).
///
/// Pairs with |1 - ⟨z, ζ⟩| below `eta_factor` times the local spacing use the kernel
/// averaged over the source cell (radial Gauss points with graded angular panels
/// around the diagonal); all other pairs use the kernel at the node.
#[derive(Clone, Debug)]
pub struct BergmanOperator {
    grid: Arc<QuadratureGrid>,
    nr: usize,
    na: usize,
    positive: Vec<f64>,
    signed: Option<Vec<C64>>,
    near_cells: usize,
}

impl BergmanOperator {
    pub fn new(grid: &Arc<QuadratureGrid>, cfg: &OperatorConfig, with_signed: bool) -> Result<Self> {
        let layout = grid.polar().ok_or_else(|| Error::Unsupported(alloc::string::String::from("kernel table needs a polar grid")))?;
        let alpha = grid.params().alpha;
        let expo = 1.0 + alpha;
        let nr = layout.gaps.len();
        let na = layout.angular;
        let h = 2.0 * PI / na as f64;
        let mut positive = alloc::vec![0.0; nr * nr * na];
        let mut signed = if with_signed { Some(alloc::vec![C64::new(0.0, 0.0); nr * nr * na]) } else { None };
        let mut near_cells = 0;
        let (gx, gw) = gauss_legendre(4);
        for i in 0..nr {
            let r = 1.0 - layout.gaps[i];
            for j in 0..nr {
                let s = 1.0 - layout.gaps[j];
                let (c0, c1) = layout.cells[j];
                let spacing = (c1 - c0) + s * h;
                let eta = cfg.eta_factor * spacing;
                let mj = layout.radial_mass[j] * h;
                // Radial sub-nodes of the source cell with their μ_α weights.
                let mut sub: Vec<(f64, f64)> = Vec::new();
                for (x, wq) in gx.iter().zip(&gw) {
                    let u = 0.5 * (x + 1.0);
                    let (t, wt) = if c0 == 0.0 {
                        (c1 * u.powf(1.0 / alpha), 0.5 * wq * c1.powf(alpha) / alpha * (2.0 - c1 * u.powf(1.0 / alpha)).powf(alpha - 1.0))
                    } else {
                        let t = c0 + (c1 - c0) * u;
                        (t, 0.5 * wq * (c1 - c0) * (t * (2.0 - t)).powf(alpha - 1.0))
                    };
                    sub.push((1.0 - t, wt * (1.0 - t)));
                }
                let base = (i * nr + j) * na;
                for d in 0..na {
                    let sd = if d <= na / 2 { d as f64 } else { d as f64 - na as f64 };
                    let phi = sd * h;
                    let w = C64::from_polar(r * s, phi);
                    let near = C64::new(1.0 - w.re, -w.im).norm() < eta;
                    let (kp, ks) = if near {
                        near_cells += 1;
                        cell_average(r, &sub, phi, h, d == 0, expo, cfg.refine_depth, with_signed)
                    } else {
                        (kernel(w, expo, true).re, if with_signed { kernel(w, expo, false) } else { C64::new(0.0, 0.0) })
                    };
                    positive[base + d] = kp * mj;
                    if let Some(sv) = signed.as_mut() {
                        sv[base + d] = ks * mj;
                    }
                }
            }
        }
        Ok(BergmanOperator { grid: grid.clone(), nr, na, positive, signed, near_cells })
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    /// Number of (i, j, Δ) entries that used cell averaging.
    pub fn near_cells(&self) -> usize {
        self.near_cells
    }

    fn check_input(&self, f: &[f64]) -> Result<()> {
        if f.len() != self.grid.len() {
            return Err(Error::GridMismatch);
        }
        let mass = self.grid.mass();
        let l1 = pairwise_sum_by(f.len(), &mut |i| f[i].abs() * mass[i]);
        if !l1.is_finite() {
            return Err(Error::NonIntegrable(alloc::string::String::from("∫|f| dμ_α is infinite")));
        }
        Ok(())
    }

    /// P_α⁺ f at every node.
    pub fn apply_positive(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.check_input(f)?;
        let (nr, na) = (self.nr, self.na);
        let mut out = alloc::vec![0.0; nr * na];
        let mut acc = alloc::vec![0.0; na];
        for i in 0..nr {
            acc.iter_mut().for_each(|v| *v = 0.0);
            for j in 0..nr {
                let t = &self.positive[(i * nr + j) * na..(i * nr + j + 1) * na];
                let fj = &f[j * na..(j + 1) * na];
                for (d, &k) in t.iter().enumerate() {
                    // out[a] += k·f[a - d]
                    for a in d..na {
                        acc[a] += k * fj[a - d];
                    }
                    for a in 0..d {
                        acc[a] += k * fj[a + na - d];
                    }
                }
            }
            out[i * na..(i + 1) * na].copy_from_slice(&acc);
        }
        Ok(out)
    }

    /// P_α f at every node.
    pub fn apply(&self, f: &[f64]) -> Result<Vec<C64>> {
        self.check_input(f)?;
        let table = self.signed.as_ref().ok_or_else(|| invalid("operator was built without the signed kernel"))?;
        let (nr, na) = (self.nr, self.na);
        let mut out = alloc::vec![C64::new(0.0, 0.0); nr * na];
        let mut acc = alloc::vec![C64::new(0.0, 0.0); na];
        for i in 0..nr {
            acc.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
            for j in 0..nr {
                let t = &table[(i * nr + j) * na..(i * nr + j + 1) * na];
                let fj = &f[j * na..(j + 1) * na];
                for (d, &k) in t.iter().enumerate() {
                    for a in d..na {
                        acc[a] += k * fj[a - d];
                    }
                    for a in 0..d {
                        acc[a] += k * fj[a + na - d];
                    }
                }
            }
            out[i * na..(i + 1) * na].copy_from_slice(&acc);
        }
        Ok(out)
    }
}

/// Kernel averaged over a source cell: radial sub-nodes × angular panels.
#[allow(clippy::too_many_arguments)]
fn cell_average(r: f64, sub: &[(f64, f64)], phi: f64, h: f64, diagonal: bool, expo: f64, depth: usize, signed: bool) -> (f64, C64) {
    let (gx, gw) = gauss_legendre(6);
    let mut num_p = 0.0;
    let mut num_s = C64::new(0.0, 0.0);
    let mut den = 0.0;
    let add = |s: f64, wr: f64, a: f64, b: f64, num_p: &mut f64, num_s: &mut C64, den: &mut f64| {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in gx.iter().zip(&gw) {
            let ang = mid + half * x;
            let z = C64::from_polar(r * s, ang);
            let wt = wr * w * half;
            *num_p += kernel(z, expo, true).re * wt;
            if signed {
                *num_s += kernel(z, expo, false) * wt;
            }
            *den += wt;
        }
    };
    for &(s, wr) in sub {
        if diagonal {
            // Symmetric about 0: panels [b/4, b] toward the peak of width 1 - r s.
            let eps = (1.0 - r * s).max(1e-300);
            let need = ((h / (0.5 * eps)).ln() / 4f64.ln()).ceil().max(0.0) as usize + 1;
            let levels = need.max(depth).min(60);
            let mut hi = 0.5 * h;
            for _ in 0..levels {
                let lo = 0.25 * hi;
                add(s, wr, lo, hi, &mut num_p, &mut num_s, &mut den);
                add(s, wr, -hi, -lo, &mut num_p, &mut num_s, &mut den);
                hi = lo;
            }
            add(s, wr, -hi, hi, &mut num_p, &mut num_s, &mut den);
        } else {
            let a0 = phi - 0.5 * h;
            let step = h / 4.0;
            for k in 0..4 {
                let a = a0 + step * k as f64;
                add(s, wr, a, a + step, &mut num_p, &mut num_s, &mut den);
            }
        }
    }
    (num_p / den, num_s / den)
}

/// P_α f or P_α⁺ f at arbitrary points by direct summation over a rule.
pub fn bergman_at_points(f: &Scalar, out: &[Point], rule: &RegionRule, alpha: f64, positive: bool) -> Result<Vec<C64>> {
    let fv = f.sample(rule)?;
    let l1 = rule.integrate_values(&fv.iter().map(|v| v.abs()).collect::<Vec<_>>())?;
    if !l1.is_finite() {
        return Err(Error::NonIntegrable(alloc::string::String::from("∫|f| dμ_α is infinite")));
    }
    let mut res = Vec::with_capacity(out.len());
    for z in out {
        let n = z.dim() as f64;
        let mut re = Vec::with_capacity(rule.len());
        let mut im = Vec::with_capacity(rule.len());
        for (k, zeta) in rule.points.iter().enumerate() {
            if zeta.dim() != z.dim() {
                return Err(Error::DimensionMismatch { left: z.dim(), right: zeta.dim() });
            }
            let w = hermitian(z.coords(), zeta.coords());
            let v = kernel(w, n + alpha, positive) * (fv[k] * rule.mass[k]);
            re.push(v.re);
            im.push(v.im);
        }
        res.push(C64::new(crate::numeric::pairwise_sum(&re), crate::numeric::pairwise_sum(&im)));
    }
    Ok(res)
}

/// Truncated series Σ_{k=0}^{K} T^k h / (2M̂)^k with T^0 h = |h|, and its last term.
#[derive(Clone, Debug)]
pub struct SeriesResult {
    pub sum: Vec<f64>,
    pub last_term: Vec<f64>,
}

/// Rh of the Rubio de Francia construction with m_α as T.
pub fn rdf_iterate_r(h: &[f64], m: &MaximalOperator, k_max: usize, m_hat: f64) -> Result<SeriesResult> {
    if k_max < 1 {
        return Err(invalid("K must be at least 1"));
    }
    if !(m_hat > 0.0) {
        return Err(invalid("M̂ must be positive"));
    }
    let mut term: Vec<f64> = h.iter().map(|v| v.abs()).collect();
    let mut sum = term.clone();
    let scale = 1.0 / (2.0 * m_hat);
    for _ in 0..k_max {
        term = m.apply(&term)?.into_iter().map(|v| v * scale).collect();
        for (s, t) in sum.iter_mut().zip(&term) {
            *s += t;
        }
    }
    Ok(SeriesResult { sum, last_term: term })
}

/// Hh = R'(h·w^{1/p}) w^{-1/p}, the inner series driven by the bound M̂'.
pub fn rdf_iterate_h(h: &[f64], p: &[f64], w: &[f64], m: &MaximalOperator, k_max: usize, m_hat_dual: f64) -> Result<SeriesResult> {
    let lifted: Vec<f64> = h.iter().zip(w).zip(p).map(|((h, w), p)| h.abs() * w.powf(1.0 / p)).collect();
    let r = rdf_iterate_r(&lifted, m, k_max, m_hat_dual)?;
    let down = |v: Vec<f64>| v.into_iter().zip(w).zip(p).map(|((x, w), p)| x * w.powf(-1.0 / p)).collect();
    Ok(SeriesResult { sum: down(r.sum), last_term: down(r.last_term) })
}

/// S = S₁ + S₂ for a weight and a constant exponent p₀, q = p₀p₀'.
#[derive(Clone, Debug)]
pub struct SOperator {
    lw: Vec<f64>,
    p: f64,
    pc: f64,
    q: f64,
}

impl SOperator {
    pub fn new(w: &GridField, p0: f64) -> Result<Self> {
        if !(p0 > 1.0) {
            return Err(invalid("p0 must exceed 1"));
        }
        let mut lw = Vec::with_capacity(w.values().len());
        for (i, v) in w.values().iter().enumerate() {
            if !(*v > 0.0) || !v.is_finite() {
                return Err(Error::NonPositiveWeight { node: i, value: *v });
            }
            lw.push(v.ln());
        }
        let pc = p0 / (p0 - 1.0);
        Ok(SOperator { lw, p: p0, pc, q: p0 * pc })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// S₁f = w^{1/q} (m_α(f^{p'} w^{-1/p}))^{1/p'}
    pub fn s1(&self, f: &[f64], m: &MaximalOperator) -> Result<Vec<f64>> {
        let inner: Vec<f64> = f.iter().zip(&self.lw).map(|(f, l)| (self.pc * f.abs().ln() - l / self.p).exp()).collect();
        let mv = m.apply(&inner)?;
        Ok(mv.iter().zip(&self.lw).map(|(v, l)| (l / self.q).exp() * v.powf(1.0 / self.pc)).collect())
    }

    /// S₂f = w'^{1/q} (m_α(f^{p} w'^{-1/p'}))^{1/p} with w' = w^{1-p'}.
    pub fn s2(&self, f: &[f64], m: &MaximalOperator) -> Result<Vec<f64>> {
        let ld: Vec<f64> = self.lw.iter().map(|l| l * (1.0 - self.pc)).collect();
        let inner: Vec<f64> = f.iter().zip(&ld).map(|(f, l)| (self.p * f.abs().ln() - l / self.pc).exp()).collect();
        let mv = m.apply(&inner)?;
        Ok(mv.iter().zip(&ld).map(|(v, l)| (l / self.q).exp() * v.powf(1.0 / self.p)).collect())
    }

    pub fn apply(&self, f: &[f64], m: &MaximalOperator) -> Result<Vec<f64>> {
        let a = self.s1(f, m)?;
        let b = self.s2(f, m)?;
        Ok(a.iter().zip(&b).map(|(x, y)| x + y).collect())
    }

    /// 𝓡h = Σ_{k=0}^{K} S^k h / (2M̂)^k.
    pub fn iterate(&self, h: &[f64], k_max: usize, m_hat: f64, m: &MaximalOperator) -> Result<Vec<f64>> {
        let mut term: Vec<f64> = h.iter().map(|v| v.abs()).collect();
        let mut sum = term.clone();
        for _ in 0..k_max {
            term = self.apply(&term, m)?.into_iter().map(|v| v / (2.0 * m_hat)).collect();
            for (s, t) in sum.iter_mut().zip(&term) {
                *s += t;
            }
        }
        Ok(sum)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorNormEstimate {
    pub value: f64,
    pub argmax: usize,
    pub ratios: Vec<f64>,
}

/// max over the corpus of ‖Tf‖_{p(·),w}/‖f‖_{p(·),w}; zero functions are skipped.
pub fn operator_norm_estimate(
    t: &mut dyn FnMut(&[f64]) -> Result<Vec<f64>>,
    p: &[f64],
    w: &[f64],
    corpus: &[Vec<f64>],
    rule: &RegionRule,
    opts: &NormOptions,
) -> Result<OperatorNormEstimate> {
    let mut ratios = Vec::with_capacity(corpus.len());
    let mut best = (f64::NEG_INFINITY, 0);
    for (k, f) in corpus.iter().enumerate() {
        let nf = luxemburg_norm(f, p, Some(w), rule, opts)?.value;
        if nf == 0.0 {
            ratios.push(f64::NAN);
            continue;
        }
        let tf = t(f)?;
        let ntf = luxemburg_norm(&tf, p, Some(w), rule, opts)?.value;
        let r = ntf / nf;
        ratios.push(r);
        if r > best.0 {
            best = (r, k);
        }
    }
    if best.0 == f64::NEG_INFINITY {
        return Err(Error::EmptyCorpus);
    }
    Ok(OperatorNormEstimate { value: best.0, argmax: best.1, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{enumerate_ball_family, FamilyDescriptor};
    use crate::measure::{build_grid, GridSpec, MeasureParams};

    fn grid() -> Arc<QuadratureGrid> {
        build_grid(MeasureParams::new(1.0, 1).unwrap(), &GridSpec { levels: 6, points: 4, angular: 32, ..Default::default() }).unwrap()
    }

    #[test]
    fn maximal_of_constant() {
        let g = grid();
        let fam = enumerate_ball_family(&FamilyDescriptor::default()).unwrap();
        let m = MaximalOperator::new(&g, &fam).unwrap();
        let one = alloc::vec![1.0; g.len()];
        let cov = m.coverage();
        for (v, c) in m.apply(&one).unwrap().iter().zip(cov) {
            if c > 0 {
                assert!((v - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn regularize_constant() {
        let g = grid();
        let r = Regularizer::new(&g, 0.3).unwrap();
        let out = r.apply(&alloc::vec![2.5; g.len()]).unwrap();
        assert!(out.iter().all(|v| (v - 2.5).abs() < 1e-13));
    }

    #[test]
    fn bergman_at_origin() {
        let g = grid();
        let one = |_: &Point| 1.0;
        let v = bergman_at_points(&Scalar::Func(&one), &[Point::origin(1).unwrap()], &g.whole(), 1.0, false).unwrap();
        assert!((v[0].re - PI).abs() < 1e-8 && v[0].im.abs() < 1e-12);
        let b = BergmanOperator::new(&g, &OperatorConfig::default(), true).unwrap();
        let f = alloc::vec![1.0; g.len()];
        let pp = b.apply_positive(&f).unwrap();
        let ps = b.apply(&f).unwrap();
        for (a, c) in pp.iter().zip(&ps) {
            assert!(c.norm() <= a * (1.0 + 1e-12));
            assert!(*a >= 0.25 * PI * (1.0 - 1e-9));
        }
    }
}
