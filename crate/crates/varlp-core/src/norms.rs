//! Modulars and Luxemburg norms on node values of a region rule.
//!
//! Everything here works on plain slices: `f` (absolute values are taken),
//! the exponent `p` and an optional weight `w`, all aligned with the nodes of a
//! [`RegionRule`]. Terms are formed in log space as `exp(p·(ln f - ln λ))·w·m`
//! and reduced pairwise, so the modular is bit-stable and does not overflow
//! before it has to.

use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{dist, Point};
use crate::measure::RegionRule;
use crate::numeric::{pairwise_sum_by, seeded};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormOptions {
    /// Relative width of the final bracket on λ.
    pub tol: f64,
    pub max_doublings: u32,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions { tol: 1e-10, max_doublings: 200 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    /// The norm, or `f64::INFINITY` when the modular is infinite for every λ.
    pub value: f64,
    pub modular_at_value: f64,
    pub iterations: u32,
    pub tolerance_met: bool,
}

impl NormResult {
    fn zero() -> Self {
        NormResult { value: 0.0, modular_at_value: 0.0, iterations: 0, tolerance_met: true }
    }

    fn infinite() -> Self {
        NormResult { value: f64::INFINITY, modular_at_value: f64::INFINITY, iterations: 0, tolerance_met: true }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }
}

/// Prepared terms of ρ(f/λ) = Σ |f_i/λ|^{p_i} w_i m_i.
#[derive(Clone, Debug)]
pub struct Modular {
    logf: Vec<f64>,
    p: Vec<f64>,
    wm: Vec<f64>,
    infinite: bool,
}

impl Modular {
    /// Build from node values; `w = None` means w ≡ 1.
    pub fn new(f: &[f64], p: &[f64], w: Option<&[f64]>, mass: &[f64]) -> Result<Self> {
        let n = f.len();
        if p.len() != n || mass.len() != n || w.is_some_and(|w| w.len() != n) {
            return Err(invalid("modular inputs must have one value per node"));
        }
        let mut logf = Vec::with_capacity(n);
        let mut wm = Vec::with_capacity(n);
        let mut infinite = false;
        for i in 0..n {
            let fi = f[i].abs();
            let wi = w.map_or(1.0, |w| w[i]);
            if fi.is_nan() {
                return Err(Error::NonFinite { node: i, what: String::from("function value is NaN") });
            }
            if wi.is_nan() || wi < 0.0 {
                return Err(Error::NonPositiveWeight { node: i, value: wi });
            }
            if !(p[i] > 0.0) || !p[i].is_finite() {
                return Err(invalid("exponent values must be positive and finite"));
            }
            let m = wi * mass[i];
            if fi > 0.0 && m > 0.0 && (fi.is_infinite() || m.is_infinite()) {
                infinite = true;
            }
            logf.push(fi.ln());
            wm.push(m);
        }
        Ok(Modular { logf, p: p.to_vec(), wm, infinite })
    }

    /// Build from ln|f| directly, for functions formed as products of powers.
    pub fn from_log(logf: Vec<f64>, p: Vec<f64>, wm: Vec<f64>) -> Result<Self> {
        if p.len() != logf.len() || wm.len() != logf.len() {
            return Err(invalid("modular inputs must have one value per node"));
        }
        let mut infinite = false;
        for i in 0..logf.len() {
            if logf[i].is_nan() || wm[i].is_nan() {
                return Err(Error::NonFinite { node: i, what: String::from("log-modulus or mass is NaN") });
            }
            if wm[i] < 0.0 {
                return Err(Error::NonPositiveWeight { node: i, value: wm[i] });
            }
            if logf[i] > f64::NEG_INFINITY && wm[i] > 0.0 && (logf[i] == f64::INFINITY || wm[i].is_infinite()) {
                infinite = true;
            }
        }
        Ok(Modular { logf, p, wm, infinite })
    }

    pub fn is_zero(&self) -> bool {
        self.logf.iter().zip(&self.wm).all(|(l, m)| *l == f64::NEG_INFINITY || *m == 0.0)
    }

    /// ρ(f/λ) with λ = exp(ln_lambda).
    pub fn at_log(&self, ln_lambda: f64) -> f64 {
        if self.infinite {
            return f64::INFINITY;
        }
        pairwise_sum_by(self.logf.len(), &mut |i| {
            let l = self.logf[i];
            if l == f64::NEG_INFINITY || self.wm[i] == 0.0 {
                0.0
            } else {
                (self.p[i] * (l - ln_lambda)).exp() * self.wm[i]
            }
        })
    }

    pub fn at(&self, lambda: f64) -> f64 {
        self.at_log(lambda.ln())
    }

    /// The Luxemburg norm inf{λ > 0 : ρ(f/λ) ≤ 1}.
    pub fn luxemburg(&self, opts: &NormOptions) -> Result<NormResult> {
        if !(opts.tol > 0.0) {
            return Err(invalid("tolerance must be positive"));
        }
        if self.infinite {
            return Ok(NormResult::infinite());
        }
        if self.is_zero() {
            return Ok(NormResult::zero());
        }
        let step = core::f64::consts::LN_2;
        let mut iterations = 0u32;
        let mut x = 0.0;
        let r0 = self.at_log(x);
        if r0 == 1.0 {
            return Ok(NormResult { value: 1.0, modular_at_value: 1.0, iterations, tolerance_met: true });
        }
        // Bracket: ρ(lo) > 1 ≥ ρ(hi).
        let (mut lo, mut hi);
        if r0 > 1.0 {
            lo = x;
            loop {
                x += step;
                iterations += 1;
                if iterations > opts.max_doublings {
                    return Err(Error::BracketNotFound(opts.max_doublings));
                }
                if self.at_log(x) <= 1.0 {
                    break;
                }
                lo = x;
            }
            hi = x;
        } else {
            hi = x;
            loop {
                x -= step;
                iterations += 1;
                if iterations > opts.max_doublings {
                    return Err(Error::BracketNotFound(opts.max_doublings));
                }
                if self.at_log(x) > 1.0 {
                    break;
                }
                hi = x;
            }
            lo = x;
        }
        let ln_tol = opts.tol.ln_1p();
        let mut bisections = 0u32;
        while hi - lo > ln_tol && bisections < 400 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.at_log(mid) <= 1.0 {
                hi = mid;
            } else {
                lo = mid;
            }
            bisections += 1;
        }
        iterations += bisections;
        Ok(NormResult {
            value: hi.exp(),
            modular_at_value: self.at_log(hi),
            iterations,
            tolerance_met: hi - lo <= ln_tol * (1.0 + 1e-12),
        })
    }
}

/// ρ_{p,w}(f) over the rule; `f64::INFINITY` if any node contributes a non-finite term.
pub fn modular(f: &[f64], p: &[f64], w: Option<&[f64]>, rule: &RegionRule) -> Result<f64> {
    Ok(Modular::new(f, p, w, &rule.mass)?.at_log(0.0))
}

/// ‖f‖_{p(·),w} by bracketing and bisection on the modular with the weight inside.
pub fn luxemburg_norm(f: &[f64], p: &[f64], w: Option<&[f64]>, rule: &RegionRule, opts: &NormOptions) -> Result<NormResult> {
    Modular::new(f, p, w, &rule.mass)?.luxemburg(opts)
}

/// ‖f‖_{p(·),w} computed directly and as ‖f w^{1/p}‖_{p(·)}; the routes must agree within 10·tol.
pub fn weighted_norm(f: &[f64], p: &[f64], w: &[f64], rule: &RegionRule, opts: &NormOptions) -> Result<NormResult> {
    let direct = luxemburg_norm(f, p, Some(w), rule, opts)?;
    let g: Vec<f64> = f.iter().zip(w).zip(p).map(|((f, w), p)| f.abs() * w.powf(1.0 / p)).collect();
    let via = luxemburg_norm(&g, p, None, rule, opts)?;
    let (a, b) = (direct.value, via.value);
    let agree = if a.is_infinite() || b.is_infinite() { a == b } else { (a - b).abs() <= 10.0 * opts.tol * a.max(b) };
    if !agree {
        return Err(Error::RouteMismatch { a, b });
    }
    Ok(direct)
}

/// The sandwich min(ρ^{1/p₋}, ρ^{1/p₊}) ≤ ‖f‖ ≤ max(ρ^{1/p₋}, ρ^{1/p₊}).
pub fn sandwich(rho: f64, p_minus: f64, p_plus: f64) -> (f64, f64) {
    let a = rho.powf(1.0 / p_minus);
    let b = rho.powf(1.0 / p_plus);
    (a.min(b), a.max(b))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubordinateBound {
    pub value: f64,
    pub argmax: usize,
}

/// max over the corpus of |∫ f g dμ_α| / ‖g‖_{p'(·),w'}, a lower bound for ‖f‖'_{p(·),w}.
pub fn subordinate_norm_lb(
    f: &[f64],
    p_conj: &[f64],
    w_dual: &[f64],
    corpus: &[Vec<f64>],
    rule: &RegionRule,
    opts: &NormOptions,
) -> Result<SubordinateBound> {
    let mut best: Option<SubordinateBound> = None;
    for (k, g) in corpus.iter().enumerate() {
        let ng = luxemburg_norm(g, p_conj, Some(w_dual), rule, opts)?;
        if !(ng.value > 0.0) || !ng.value.is_finite() {
            continue;
        }
        let fg: Vec<f64> = f.iter().zip(g).map(|(a, b)| a * b).collect();
        let v = rule.integrate_values(&fg)?.abs() / ng.value;
        if best.is_none_or(|b| v > b.value) {
            best = Some(SubordinateBound { value: v, argmax: k });
        }
    }
    best.ok_or(Error::EmptyCorpus)
}

/// Dual test functions: powers of w' times seeded tent bumps, and the powers alone.
pub fn dual_corpus(w_dual: &[f64], points: &[Point], size: usize, seed: u64) -> Vec<Vec<f64>> {
    use rand::Rng;
    let mut rng = seeded(seed);
    let mut out = Vec::with_capacity(size);
    let powers = [0.0, 0.5, 1.0];
    for k in 0..size {
        let s = powers[k % powers.len()];
        if k < powers.len() {
            out.push(w_dual.iter().map(|w| w.powf(s)).collect());
            continue;
        }
        let gap = libm::exp2(-rng.gen_range(0.0..8.0)).min(1.0);
        let theta = rng.gen_range(0.0..core::f64::consts::TAU);
        let dim = points.first().map_or(1, |z| z.dim());
        let mut dir = alloc::vec![crate::geometry::C64::new(0.0, 0.0); dim];
        dir[0] = crate::geometry::C64::new(theta.cos(), theta.sin());
        let c = Point::from_gap(gap, &dir).expect("gap in (0,1]");
        let r = rng.gen_range(0.05..1.5);
        out.push(
            points
                .iter()
                .zip(w_dual)
                .map(|(z, w)| {
                    let t = (1.0 - dist(&c, z) / r).max(0.0);
                    t * t * w.powf(s)
                })
                .collect(),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{build_grid, GridSpec, MeasureParams};
    use core::f64::consts::PI;

    #[test]
    fn unit_function_norm() {
        let g = build_grid(MeasureParams::new(1.0, 1).unwrap(), &GridSpec::default()).unwrap();
        let rule = g.whole();
        let one = alloc::vec![1.0; rule.len()];
        let two = alloc::vec![2.0; rule.len()];
        assert!((modular(&one, &two, None, &rule).unwrap() - PI).abs() < 1e-10);
        let r = luxemburg_norm(&one, &two, None, &rule, &NormOptions::default()).unwrap();
        assert!((r.value - PI.sqrt()).abs() < 1e-8);
        assert!((r.modular_at_value - 1.0).abs() < 1e-9);
        assert!(r.tolerance_met);
        let zero = alloc::vec![0.0; rule.len()];
        assert_eq!(luxemburg_norm(&zero, &two, None, &rule, &NormOptions::default()).unwrap().value, 0.0);
    }

    #[test]
    fn infinite_sentinel_and_errors() {
        let rule = RegionRule { points: Vec::new(), mass: alloc::vec![1.0, 1.0], index: None, grid_id: None };
        let r = luxemburg_norm(&[1.0, f64::INFINITY], &[2.0, 2.0], None, &rule, &NormOptions::default()).unwrap();
        assert_eq!(r.value, f64::INFINITY);
        assert!(matches!(modular(&[1.0, 1.0], &[2.0, 2.0], Some(&[1.0, -1.0]), &rule), Err(Error::NonPositiveWeight { node: 1, .. })));
        let tiny = luxemburg_norm(&[1e-300, 0.0], &[2.0, 2.0], None, &rule, &NormOptions::default());
        assert!(matches!(tiny, Err(Error::BracketNotFound(200))));
    }
}
