//! Weights, dual weights and weight-class constants over ball families.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exponent::{harmonic_mean_of, ExponentField};
use crate::geometry::{BallFamily, BallSummary, FamilyDescriptor, Point, PseudoBall};
use crate::measure::{GridField, GridSpec, QuadratureGrid, RegionRule};
use crate::norms::{Modular, NormOptions};
use crate::numeric::{pairwise_sum_by, seeded};
use crate::operators::MaximalOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightTag {
    Constant,
    Power,
    Angular,
    Product,
    Dual,
    Regularized,
    Iterate,
    Sampled,
    User,
}

#[derive(Clone)]
enum Kind {
    Constant(f64),
    /// (1 - |z|²)^γ
    Power(f64),
    /// 1 + a·cos(arg z₁), |a| < 1
    Angular(f64),
    Product(Vec<Weight>),
    /// w^{1 - p'(·)}
    Dual(Arc<Weight>, ExponentField),
    Pow(Arc<Weight>, f64),
    Sampled(GridField),
    Func(Arc<dyn Fn(&Point) -> f64 + Send + Sync>),
}

/// A strictly positive function on the ball with a family tag.
#[derive(Clone)]
pub struct Weight {
    kind: Kind,
    tag: WeightTag,
    name: String,
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Weight").field("name", &self.name).field("tag", &self.tag).finish()
    }
}

impl Weight {
    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(invalid("constant weight must be positive and finite"));
        }
        Ok(Weight { kind: Kind::Constant(c), tag: WeightTag::Constant, name: alloc::format!("const({c})") })
    }

    pub fn one() -> Self {
        Weight { kind: Kind::Constant(1.0), tag: WeightTag::Constant, name: "1".to_string() }
    }

    /// (1 - |z|²)^γ
    pub fn power(gamma: f64) -> Self {
        Weight { kind: Kind::Power(gamma), tag: WeightTag::Power, name: alloc::format!("(1-|z|^2)^{gamma}") }
    }

    /// 1 + a·cos(arg z₁)
    pub fn angular(a: f64) -> Result<Self> {
        if !(a.abs() < 1.0) {
            return Err(invalid("angular weight needs |a| < 1"));
        }
        Ok(Weight { kind: Kind::Angular(a), tag: WeightTag::Angular, name: alloc::format!("1+{a}cos(arg z)") })
    }

    pub fn product(factors: Vec<Weight>) -> Self {
        let name = factors.iter().map(|w| w.name.as_str()).collect::<Vec<_>>().join("*");
        Weight { kind: Kind::Product(factors), tag: WeightTag::Product, name }
    }

    /// w^s
    pub fn powf(&self, s: f64) -> Self {
        Weight { kind: Kind::Pow(Arc::new(self.clone()), s), tag: self.tag, name: alloc::format!("({})^{s}", self.name) }
    }

    /// Node values on a grid, tagged (regularized, iterate, sampled).
    pub fn sampled(field: GridField, tag: WeightTag, name: &str) -> Self {
        Weight { kind: Kind::Sampled(field), tag, name: name.to_string() }
    }

    pub fn custom(name: &str, f: Arc<dyn Fn(&Point) -> f64 + Send + Sync>) -> Self {
        Weight { kind: Kind::Func(f), tag: WeightTag::User, name: name.to_string() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tag(&self) -> WeightTag {
        self.tag
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// True when the weight can be evaluated at arbitrary points.
    pub fn is_pointwise(&self) -> bool {
        match &self.kind {
            Kind::Sampled(_) => false,
            Kind::Product(ws) => ws.iter().all(Weight::is_pointwise),
            Kind::Dual(w, _) | Kind::Pow(w, _) => w.is_pointwise(),
            _ => true,
        }
    }

    /// Whether w(𝔹) < ∞ for μ_α, when it is known in closed form.
    pub fn known_integrable(&self, alpha: f64) -> Option<bool> {
        self.power_exponent().map(|g| g > -alpha)
    }

    /// γ such that w ≍ (1 - |z|²)^γ, for powers, bounded factors and their products.
    pub fn power_exponent(&self) -> Option<f64> {
        match &self.kind {
            Kind::Constant(_) | Kind::Angular(_) => Some(0.0),
            Kind::Power(g) => Some(*g),
            Kind::Product(ws) => ws.iter().map(Weight::power_exponent).sum(),
            Kind::Pow(w, s) => w.power_exponent().map(|g| g * s),
            Kind::Dual(w, p) if p.is_constant() => {
                let q = p.declared_p_minus();
                w.power_exponent().map(|g| -g / (q - 1.0))
            }
            _ => None,
        }
    }

    fn raw_log(&self, z: &Point) -> f64 {
        match &self.kind {
            Kind::Constant(c) => c.ln(),
            Kind::Power(g) => {
                if *g == 0.0 {
                    0.0
                } else {
                    g * z.depth().ln()
                }
            }
            Kind::Angular(a) => (1.0 + a * if z.norm() == 0.0 { 1.0 } else { z.arg().cos() }).ln(),
            Kind::Product(ws) => ws.iter().map(|w| w.raw_log(z)).sum(),
            Kind::Dual(w, p) => {
                let q = p.eval(z).unwrap_or(f64::NAN);
                -w.raw_log(z) / (q - 1.0)
            }
            Kind::Pow(w, s) => s * w.raw_log(z),
            Kind::Sampled(_) => f64::NAN,
            Kind::Func(f) => f(z).ln(),
        }
    }

    fn log_values(&self, rule: &RegionRule) -> Result<Vec<f64>> {
        Ok(match &self.kind {
            Kind::Sampled(field) => field.sample(rule)?.into_iter().map(f64::ln).collect(),
            Kind::Product(ws) => {
                let mut acc = alloc::vec![0.0; rule.len()];
                for w in ws {
                    for (a, b) in acc.iter_mut().zip(w.log_values(rule)?) {
                        *a += b;
                    }
                }
                acc
            }
            Kind::Dual(w, p) => {
                let q = p.sample(rule)?;
                w.log_values(rule)?.into_iter().zip(q).map(|(l, q)| -l / (q - 1.0)).collect()
            }
            Kind::Pow(w, s) => w.log_values(rule)?.into_iter().map(|l| s * l).collect(),
            _ => rule.points.iter().map(|z| self.raw_log(z)).collect(),
        })
    }

    /// ln w at the nodes of a rule; errors on a non-positive or non-finite value.
    pub fn sample_log(&self, rule: &RegionRule) -> Result<Vec<f64>> {
        let v = self.log_values(rule)?;
        for (i, l) in v.iter().enumerate() {
            if !l.is_finite() {
                return Err(Error::NonPositiveWeight { node: i, value: l.exp() });
            }
        }
        Ok(v)
    }

    pub fn sample(&self, rule: &RegionRule) -> Result<Vec<f64>> {
        Ok(self.sample_log(rule)?.into_iter().map(f64::exp).collect())
    }

    /// w(z) for pointwise weights.
    pub fn eval(&self, z: &Point) -> Result<f64> {
        if !self.is_pointwise() {
            return Err(Error::Unsupported("pointwise evaluation of a sampled weight".to_string()));
        }
        let l = self.raw_log(z);
        if !l.is_finite() {
            return Err(Error::NonPositiveWeight { node: 0, value: l.exp() });
        }
        Ok(l.exp())
    }

    /// The weight as a field on the grid's nodes.
    pub fn on_grid(&self, grid: &Arc<QuadratureGrid>) -> Result<GridField> {
        GridField::new(grid.clone(), self.sample(&grid.whole())?)
    }
}

/// w' = w^{1 - p'(·)} = w^{-1/(p(·) - 1)}.
pub fn dual_weight(w: &Weight, p: &ExponentField) -> Result<Weight> {
    if !(p.declared_p_minus() > 1.0) {
        return Err(invalid("dual weight needs p_minus > 1"));
    }
    Ok(Weight { kind: Kind::Dual(Arc::new(w.clone()), p.clone()), tag: WeightTag::Dual, name: alloc::format!("({})'", w.name) })
}

/// Per-ball quadrature rules of a family, built once and shared by all constants.
#[derive(Clone, Debug)]
pub struct FamilyRules {
    pub balls: Vec<PseudoBall>,
    pub rules: Vec<RegionRule>,
    pub descriptor: FamilyDescriptor,
    pub grid_spec: GridSpec,
    pub adapted: bool,
}

impl FamilyRules {
    /// Boundary-fitted rules (dimension one); for pointwise weights and exponents.
    pub fn adapted(family: &BallFamily, grid: &QuadratureGrid) -> Result<Self> {
        let rules = family.balls.iter().map(|b| grid.adapted(&b.clone().into())).collect::<Result<Vec<_>>>()?;
        Ok(FamilyRules {
            balls: family.balls.clone(),
            rules,
            descriptor: family.descriptor.clone(),
            grid_spec: grid.spec().clone(),
            adapted: grid.polar().is_some(),
        })
    }

    /// Node-membership rules; required for sampled weights.
    pub fn membership(family: &BallFamily, grid: &QuadratureGrid) -> Self {
        FamilyRules {
            balls: family.balls.clone(),
            rules: family.balls.iter().map(|b| grid.restrict(&b.clone().into())).collect(),
            descriptor: family.descriptor.clone(),
            grid_spec: grid.spec().clone(),
            adapted: false,
        }
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum ClassTag {
    Bekolle,
    Muckenhoupt,
    BPlus,
    BPlusPlus,
    /// Constant-exponent two-average constant with exponent q.
    ClassicalB { q: f64 },
    B1,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerBall {
    pub ball: BallSummary,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassConstantReport {
    pub class: ClassTag,
    pub estimate: f64,
    pub argmax_ball: Option<BallSummary>,
    pub argmax_node: Option<usize>,
    pub family: FamilyDescriptor,
    pub grid: GridSpec,
    pub per_ball: Vec<PerBall>,
    /// Balls skipped because their rule carried no node.
    pub skipped: usize,
    pub offending_ball: Option<BallSummary>,
    pub per_ball_csv_path: Option<String>,
}

/// Stable ln of ∫ exp(l) dμ_α over a rule.
fn weighted_mass(l: &[f64], rule: &RegionRule) -> f64 {
    pairwise_sum_by(l.len(), &mut |i| l[i].exp() * rule.mass[i])
}

fn norm_of_log(logf: Vec<f64>, p: Vec<f64>, rule: &RegionRule, opts: &NormOptions) -> Result<f64> {
    Ok(Modular::from_log(logf, p, rule.mass.clone())?.luxemburg(opts)?.value)
}

/// (1/μ(B))·‖w^{1/p}χ_B‖_{p(·)}·‖w^{-1/p}χ_B‖_{p'(·)} from node values ln w and p.
pub fn bekolle_ball(rule: &RegionRule, lw: &[f64], p: &[f64], opts: &NormOptions) -> Result<f64> {
    let mu = rule.measure();
    let a = norm_of_log(lw.iter().zip(p).map(|(l, q)| l / q).collect(), p.to_vec(), rule, opts)?;
    let pc: Vec<f64> = p.iter().map(|q| q / (q - 1.0)).collect();
    let b = norm_of_log(lw.iter().zip(p).map(|(l, q)| -l / q).collect(), pc, rule, opts)?;
    Ok(a * b / mu)
}

/// μ(B)^{-p_B}·w(B)·‖w^{-1}χ_B‖_{p'(·)/p(·)}.
pub fn bplus_ball(rule: &RegionRule, lw: &[f64], p: &[f64], opts: &NormOptions) -> Result<f64> {
    let mu = rule.measure();
    let pb = harmonic_mean_of(p, rule)?;
    let wb = weighted_mass(lw, rule);
    let aux: Vec<f64> = p.iter().map(|q| 1.0 / (q - 1.0)).collect();
    let n = norm_of_log(lw.iter().map(|l| -l).collect(), aux, rule, opts)?;
    Ok(wb * n * (-pb * mu.ln()).exp())
}

/// (w(B)/μ(B))·(w'(B)/μ(B))^{p_B - 1}.
pub fn bplusplus_ball(rule: &RegionRule, lw: &[f64], p: &[f64]) -> Result<f64> {
    let mu = rule.measure();
    let pb = harmonic_mean_of(p, rule)?;
    let wb = weighted_mass(lw, rule);
    let ld: Vec<f64> = lw.iter().zip(p).map(|(l, q)| -l / (q - 1.0)).collect();
    let wd = weighted_mass(&ld, rule);
    Ok(wb / mu * (wd / mu).powf(pb - 1.0))
}

/// (w(B)/μ(B))·(σ(B)/μ(B))^{q-1} with σ = w^{-1/(q-1)}.
pub fn classical_ball(rule: &RegionRule, lw: &[f64], q: f64) -> Result<f64> {
    if !(q > 1.0) {
        return Err(invalid("classical exponent must exceed 1"));
    }
    let mu = rule.measure();
    let wb = weighted_mass(lw, rule);
    let ls: Vec<f64> = lw.iter().map(|l| -l / (q - 1.0)).collect();
    Ok(wb / mu * (weighted_mass(&ls, rule) / mu).powf(q - 1.0))
}

/// Per-ball values of a class over prepared family rules.
pub fn class_constant(
    class: ClassTag,
    w: &Weight,
    p: &ExponentField,
    rules: &FamilyRules,
    opts: &NormOptions,
) -> Result<ClassConstantReport> {
    if class == ClassTag::B1 {
        return Err(invalid("use b1_constant for the B1 class"));
    }
    if class == ClassTag::Bekolle || class == ClassTag::BPlus || class == ClassTag::BPlusPlus {
        if rules.balls.iter().any(|b| !b.in_class_b()) {
            return Err(invalid("this class is a supremum over boundary balls only"));
        }
    }
    let mut per_ball = Vec::with_capacity(rules.len());
    let mut skipped = 0;
    let mut offending = None;
    for (b, rule) in rules.balls.iter().zip(&rules.rules) {
        if rule.is_empty() || !(rule.measure() > 0.0) {
            skipped += 1;
            continue;
        }
        let lw = w.sample_log(rule)?;
        let pv = if let ClassTag::ClassicalB { .. } = class { Vec::new() } else { p.sample(rule)? };
        let v = match class {
            ClassTag::Bekolle | ClassTag::Muckenhoupt => bekolle_ball(rule, &lw, &pv, opts)?,
            ClassTag::BPlus => bplus_ball(rule, &lw, &pv, opts)?,
            ClassTag::BPlusPlus => bplusplus_ball(rule, &lw, &pv)?,
            ClassTag::ClassicalB { q } => classical_ball(rule, &lw, q)?,
            ClassTag::B1 => unreachable!(),
        };
        if !v.is_finite() && offending.is_none() {
            offending = Some(b.summary());
        }
        per_ball.push(PerBall { ball: b.summary(), value: if v.is_nan() { f64::INFINITY } else { v } });
    }
    Ok(report_from(class, per_ball, skipped, offending, rules.descriptor.clone(), rules.grid_spec.clone()))
}

fn report_from(
    class: ClassTag,
    per_ball: Vec<PerBall>,
    skipped: usize,
    offending: Option<BallSummary>,
    family: FamilyDescriptor,
    grid: GridSpec,
) -> ClassConstantReport {
    let mut estimate = f64::NEG_INFINITY;
    let mut argmax = None;
    for pb in &per_ball {
        if pb.value > estimate {
            estimate = pb.value;
            argmax = Some(pb.ball.clone());
        }
    }
    if offending.is_some() {
        estimate = f64::INFINITY;
        argmax = offending.clone();
    }
    ClassConstantReport {
        class,
        estimate,
        argmax_ball: argmax,
        argmax_node: None,
        family,
        grid,
        per_ball,
        skipped,
        offending_ball: offending,
        per_ball_csv_path: None,
    }
}

pub fn bekolle_constant(w: &Weight, p: &ExponentField, rules: &FamilyRules, opts: &NormOptions) -> Result<ClassConstantReport> {
    class_constant(ClassTag::Bekolle, w, p, rules, opts)
}

pub fn muckenhoupt_constant(w: &Weight, p: &ExponentField, rules: &FamilyRules, opts: &NormOptions) -> Result<ClassConstantReport> {
    class_constant(ClassTag::Muckenhoupt, w, p, rules, opts)
}

pub fn bplus_constant(w: &Weight, p: &ExponentField, rules: &FamilyRules, opts: &NormOptions) -> Result<ClassConstantReport> {
    class_constant(ClassTag::BPlus, w, p, rules, opts)
}

pub fn bplusplus_constant(w: &Weight, p: &ExponentField, rules: &FamilyRules, opts: &NormOptions) -> Result<ClassConstantReport> {
    class_constant(ClassTag::BPlusPlus, w, p, rules, opts)
}

/// max over nodes of m_α w / w, with m_α from the given maximal operator.
pub fn b1_constant(w: &GridField, m: &MaximalOperator) -> Result<ClassConstantReport> {
    if w.grid().id() != m.grid().id() {
        return Err(Error::GridMismatch);
    }
    for (i, v) in w.values().iter().enumerate() {
        if !(*v > 0.0) || !v.is_finite() {
            return Err(Error::NonPositiveWeight { node: i, value: *v });
        }
    }
    let mw = m.apply(w.values())?;
    let mut best = f64::NEG_INFINITY;
    let mut node = 0;
    for (i, (a, b)) in mw.iter().zip(w.values()).enumerate() {
        let r = a / b;
        if r > best {
            best = r;
            node = i;
        }
    }
    Ok(ClassConstantReport {
        class: ClassTag::B1,
        estimate: best,
        argmax_ball: None,
        argmax_node: Some(node),
        family: m.descriptor().clone(),
        grid: m.grid().spec().clone(),
        per_ball: Vec::new(),
        skipped: m.skipped(),
        offending_ball: None,
        per_ball_csv_path: None,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaFit {
    pub c: f64,
    pub delta: f64,
    pub violations: usize,
    pub samples: usize,
    /// (δ, C(δ)) over the search grid.
    pub curve: Vec<(f64, f64)>,
}

/// One Λ-class sample: (μ(E)/μ(B), w(E)/w(B)).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaSample {
    pub measure_ratio: f64,
    pub weight_ratio: f64,
}

/// Random unions of 1..=8 cells (nodes of membership rules) in each ball.
pub fn lambda_samples(w: &Weight, rules: &FamilyRules, alpha: f64, per_ball: usize, seed: u64) -> Result<Vec<LambdaSample>> {
    use rand::Rng;
    if w.known_integrable(alpha) == Some(false) {
        return Err(Error::NonIntegrable(alloc::format!("{} is not μ_α-integrable", w.name())));
    }
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    for rule in &rules.rules {
        if rule.len() < 2 {
            continue;
        }
        let wv = w.sample(rule)?;
        let mu = rule.measure();
        let wb = rule.integrate_values(&wv)?;
        if !(wb > 0.0) || !wb.is_finite() {
            return Err(Error::NonIntegrable(alloc::format!("w(B) = {wb}")));
        }
        for _ in 0..per_ball {
            let cells = rng.gen_range(1..=8usize.min(rule.len()));
            let mut chosen: Vec<usize> = Vec::with_capacity(cells);
            while chosen.len() < cells {
                let i = rng.gen_range(0..rule.len());
                if !chosen.contains(&i) {
                    chosen.push(i);
                }
            }
            chosen.sort_unstable();
            let me: f64 = chosen.iter().map(|&i| rule.mass[i]).sum();
            let we: f64 = chosen.iter().map(|&i| rule.mass[i] * wv[i]).sum();
            out.push(LambdaSample { measure_ratio: me / mu, weight_ratio: we / wb });
        }
    }
    Ok(out)
}

/// Violations of μ(E)/μ(B) ≤ C (w(E)/w(B))^δ among the samples.
pub fn lambda_violations(samples: &[LambdaSample], c: f64, delta: f64) -> usize {
    samples.iter().filter(|s| s.measure_ratio > c * s.weight_ratio.powf(delta) * (1.0 + 1e-12)).count()
}

/// Fit (C, δ): δ over a log-spaced grid in (0, 1], C(δ) the max observed ratio, minimizing C.
pub fn lambda_class_fit(samples: &[LambdaSample]) -> Result<LambdaFit> {
    if samples.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut curve = Vec::new();
    for k in 0..=40 {
        let delta = libm::exp2(-(k as f64) / 4.0);
        let c = samples.iter().map(|s| s.measure_ratio / s.weight_ratio.powf(delta)).fold(0.0f64, f64::max);
        curve.push((delta, c));
    }
    let &(delta, c) = curve.iter().min_by(|a, b| a.1.partial_cmp(&b.1).unwrap()).expect("nonempty curve");
    Ok(LambdaFit { c, delta, violations: lambda_violations(samples, c, delta), samples: samples.len(), curve })
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub w1: GridField,
    pub w2: GridField,
    /// The iterate 𝓡h.
    pub iterate: GridField,
    /// Empirical ‖S‖ on L^q when it exceeded the configured bound.
    pub bound_warning: Option<f64>,
}

/// w = w₁·w₂^{1-p₀} with w₁ = (𝓡h)^{p₀} w'^{-1/p₀'} and w₂ = (𝓡h)^{p₀'} w^{-1/p₀}.
pub fn jones_factorize(
    w: &GridField,
    p0: f64,
    h: &GridField,
    k_max: usize,
    m_hat: f64,
    m: &MaximalOperator,
    empirical_s_norm: Option<f64>,
) -> Result<Factorization> {
    if !(p0 > 1.0) {
        return Err(invalid("p0 must exceed 1"));
    }
    if !(m_hat > 0.0) || k_max < 1 {
        return Err(invalid("iteration needs K ≥ 1 and M̂ > 0"));
    }
    let s = crate::operators::SOperator::new(w, p0)?;
    let r = s.iterate(h.values(), k_max, m_hat, m)?;
    let pc = p0 / (p0 - 1.0);
    let lw: Vec<f64> = w.values().iter().map(|v| v.ln()).collect();
    let w1: Vec<f64> = r.iter().zip(&lw).map(|(x, l)| (p0 * x.ln() + l / p0).exp()).collect();
    let w2: Vec<f64> = r.iter().zip(&lw).map(|(x, l)| (pc * x.ln() - l / p0).exp()).collect();
    let grid = w.grid().clone();
    Ok(Factorization {
        w1: GridField::new(grid.clone(), w1)?,
        w2: GridField::new(grid.clone(), w2)?,
        iterate: GridField::new(grid, r)?,
        bound_warning: empirical_s_norm.filter(|e| *e > m_hat),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::enumerate_ball_family;
    use crate::measure::{build_grid, MeasureParams};

    fn setup() -> (Arc<QuadratureGrid>, FamilyRules) {
        let g = build_grid(MeasureParams::new(1.0, 1).unwrap(), &GridSpec { levels: 8, ..GridSpec::default() }).unwrap();
        let fam = enumerate_ball_family(&FamilyDescriptor { radial_levels: 3, angular_count: 4, radius_count: 4, ..Default::default() }).unwrap();
        let rules = FamilyRules::adapted(&fam, &g).unwrap();
        (g, rules)
    }

    #[test]
    fn unit_weight_constants_are_one() {
        let (_, rules) = setup();
        let p = ExponentField::constant(3.0).unwrap();
        let o = NormOptions::default();
        for class in [ClassTag::Bekolle, ClassTag::BPlus, ClassTag::BPlusPlus] {
            let r = class_constant(class, &Weight::one(), &p, &rules, &o).unwrap();
            assert!(r.per_ball.iter().all(|b| (b.value - 1.0).abs() < 1e-8), "{class:?}");
        }
    }

    #[test]
    fn dual_of_dual_is_identity() {
        let p = ExponentField::radial_sin(2.0, 1.0).unwrap();
        let w = Weight::power(0.7);
        let dd = dual_weight(&dual_weight(&w, &p).unwrap(), &p.conjugate().unwrap()).unwrap();
        let z = Point::c1(0.3, -0.4).unwrap();
        assert!((dd.eval(&z).unwrap() / w.eval(&z).unwrap() - 1.0).abs() < 1e-12);
        let p2 = ExponentField::constant(2.0).unwrap();
        assert!((dual_weight(&w, &p2).unwrap().eval(&z).unwrap() * w.eval(&z).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lambda_unit_weight() {
        let (g, _) = setup();
        let fam = enumerate_ball_family(&FamilyDescriptor { radial_levels: 3, angular_count: 4, radius_count: 4, ..Default::default() }).unwrap();
        let rules = FamilyRules::membership(&fam, &g);
        let s = lambda_samples(&Weight::one(), &rules, 1.0, 16, 3).unwrap();
        assert_eq!(lambda_violations(&s, 1.0, 1.0), 0);
        assert_eq!(lambda_class_fit(&s).unwrap().violations, 0);
        assert!(lambda_samples(&Weight::power(-1.5), &rules, 1.0, 4, 3).is_err());
    }
}
