use std::sync::Arc;

use rand::Rng;
use varlp_core::geometry::enumerate_ball_family;
use varlp_core::measure::{GridField, QuadratureGrid, RegionRule};
use varlp_core::norms::luxemburg_norm;
use varlp_core::numeric::seeded;
use varlp_core::operators::{MaximalOperator, Regularizer};
use varlp_core::weights::{class_constant, ClassTag, FamilyRules, Weight, WeightTag};

use super::classes::class_weights;
use super::Ctx;
use crate::corpus::{random_fields, random_weights};
use crate::error::Result;
use crate::report::{timed, CheckResult};

/// The grid, R_k^α at the configured k and at k' = k/(1-k), and m_α over the configured family.
pub struct Setup {
    pub grid: Arc<QuadratureGrid>,
    pub reg: Regularizer,
    pub reg_wide: Regularizer,
    pub m: MaximalOperator,
    pub whole: RegionRule,
}

pub fn setup(ctx: &Ctx) -> Result<Setup> {
    let grid = ctx.build()?;
    let reg = Regularizer::new(&grid, ctx.op.k)?;
    let reg_wide = Regularizer::new(&grid, ctx.op.k / (1.0 - ctx.op.k))?;
    let m = MaximalOperator::new(&grid, &enumerate_ball_family(&ctx.family)?)?;
    let whole = grid.whole();
    Ok(Setup { grid, reg, reg_wide, m, whole })
}

/// a/b with 0/0 read as 1 and a/0 as infinity.
fn ratio(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else if a > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

fn max_ratio(num: &[f64], den: &[f64]) -> f64 {
    num.iter().zip(den).fold(0.0f64, |acc, (a, b)| acc.max(ratio(*a, *b)))
}

/// Largest of m f/m(R f), m g/R(m g) and R(m g)/m g over nodes and fields.
pub fn commutation_ratio(s: &Setup, fields: &[Vec<f64>]) -> Result<f64> {
    let cov = s.m.coverage();
    let mut worst: f64 = 0.0;
    for f in fields {
        let mf = s.m.apply(f)?;
        let mrf = s.m.apply(&s.reg.apply(f)?)?;
        let rmf = s.reg.apply(&mf)?;
        for i in 0..f.len() {
            if cov[i] == 0 {
                continue;
            }
            worst = worst.max(ratio(mf[i], mrf[i])).max(ratio(mf[i], rmf[i])).max(ratio(rmf[i], mf[i]));
        }
    }
    Ok(worst)
}

/// Largest ∫ f R_k g / ∫ g R_{k'} f over ordered pairs of fields, and the same with R_k on
/// both sides.
///
/// With equal orders the quotient is unbounded: bumps at z₀ and ζ₀ with
/// k(1-|ζ₀|) < d(z₀, ζ₀) < k(1-|z₀|) make the right side vanish.
pub fn self_adjoint_ratios(s: &Setup, fields: &[Vec<f64>]) -> Result<(f64, f64)> {
    let rk: Vec<Vec<f64>> = fields.iter().map(|f| s.reg.apply(f)).collect::<varlp_core::Result<_>>()?;
    let rw: Vec<Vec<f64>> = fields.iter().map(|f| s.reg_wide.apply(f)).collect::<varlp_core::Result<_>>()?;
    let pair = |a: &[f64], b: &[f64]| -> Result<f64> {
        let v: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        Ok(s.whole.integrate_values(&v)?)
    };
    let (mut wide, mut equal) = (0.0f64, 0.0f64);
    for i in 0..fields.len() {
        for j in 0..fields.len() {
            if i != j {
                let lhs = pair(&fields[i], &rk[j])?;
                wide = wide.max(ratio(lhs, pair(&fields[j], &rw[i])?));
                equal = equal.max(ratio(lhs, pair(&fields[j], &rk[i])?));
            }
        }
    }
    Ok((wide, equal))
}

fn scaled(f: &[f64], c: f64) -> Vec<f64> {
    f.iter().map(|v| v * c).collect()
}

/// Largest (R g)^{p(z)}/(R(g^{p(·)})(z) + 1) for g normalized in L^{p(·)}(w).
pub fn pointwise_ratio(ctx: &Ctx, s: &Setup, weights: &[Weight], fields: &[Vec<f64>]) -> Result<f64> {
    let p = ctx.exponent.sample(&s.whole)?;
    let mut worst: f64 = 0.0;
    for w in weights {
        let wv = w.sample(&s.whole)?;
        for f in fields {
            let n = luxemburg_norm(f, &p, Some(&wv), &s.whole, &ctx.norm)?.value;
            if !(n > 0.0) {
                continue;
            }
            let g = scaled(f, 1.0 / n);
            let rg = s.reg.apply(&g)?;
            let gp: Vec<f64> = g.iter().zip(&p).map(|(v, q)| v.powf(*q)).collect();
            let rgp = s.reg.apply(&gp)?;
            let num: Vec<f64> = rg.iter().zip(&p).map(|(v, q)| v.powf(*q)).collect();
            let den: Vec<f64> = rgp.iter().map(|v| v + 1.0).collect();
            worst = worst.max(max_ratio(&num, &den));
        }
    }
    Ok(worst)
}

/// σ = R_k^α w as a sampled weight.
pub fn regularized_weight(s: &Setup, w: &Weight) -> Result<Weight> {
    let sigma = s.reg.apply(w.sample(&s.whole)?.as_slice())?;
    let name = format!("R_k({})", w.name());
    Ok(Weight::sampled(GridField::new(s.grid.clone(), sigma)?, WeightTag::Regularized, &name))
}

/// Largest [R_k w]_{A_{p(·)}}/[w]_{B_{p(·)}} over weights, both on node-membership rules.
pub fn transfer_ratio(ctx: &Ctx, s: &Setup, weights: &[Weight]) -> Result<f64> {
    let boundary = FamilyRules::membership(&enumerate_ball_family(&ctx.family)?, &s.grid);
    let all = FamilyRules::membership(&enumerate_ball_family(&ctx.family.all_balls())?, &s.grid);
    let mut worst: f64 = 0.0;
    for w in weights {
        let sigma = regularized_weight(s, w)?;
        let a = class_constant(ClassTag::Muckenhoupt, &sigma, &ctx.exponent, &all, &ctx.norm)?.estimate;
        let b = class_constant(ClassTag::Bekolle, w, &ctx.exponent, &boundary, &ctx.norm)?.estimate;
        worst = worst.max(a / b);
    }
    Ok(worst)
}

/// Largest ‖R g‖_{p,w}/‖g‖_{p,σ} and ‖R g‖_{p',w'}/‖g‖_{p',σ'} over weights and fields.
pub fn norm_transfer_ratios(ctx: &Ctx, s: &Setup, weights: &[Weight], fields: &[Vec<f64>]) -> Result<(f64, f64)> {
    let p = ctx.exponent.sample(&s.whole)?;
    let q: Vec<f64> = p.iter().map(|v| v / (v - 1.0)).collect();
    let dual = |v: &[f64]| -> Vec<f64> { v.iter().zip(&p).map(|(x, e)| x.powf(-1.0 / (e - 1.0))).collect() };
    let (mut primal, mut dual_worst) = (0.0f64, 0.0f64);
    for w in weights {
        let wv = w.sample(&s.whole)?;
        let sigma = s.reg.apply(&wv)?;
        let (wd, sd) = (dual(&wv), dual(&sigma));
        for f in fields {
            let rf = s.reg.apply(f)?;
            let a = luxemburg_norm(&rf, &p, Some(&wv), &s.whole, &ctx.norm)?.value;
            let b = luxemburg_norm(f, &p, Some(&sigma), &s.whole, &ctx.norm)?.value;
            primal = primal.max(ratio(a, b));
            let a = luxemburg_norm(&rf, &q, Some(&wd), &s.whole, &ctx.norm)?.value;
            let b = luxemburg_norm(f, &q, Some(&sd), &s.whole, &ctx.norm)?.value;
            dual_worst = dual_worst.max(ratio(a, b));
        }
    }
    Ok((primal, dual_worst))
}

/// R_k 1 = 1 and linearity on random pairs.
pub fn linear_unit(s: &Setup, count: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let one = s.reg.apply(&vec![1.0; s.grid.len()])?;
    let unit = one.iter().fold(0.0f64, |a, v| a.max((v - 1.0).abs()));
    let fields = random_fields(s.grid.points(), 2 * count, seed);
    let mut rng = seeded(seed + 1);
    let mut worst: f64 = 0.0;
    for pair in fields.chunks(2) {
        let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let mix: Vec<f64> = pair[0].iter().zip(&pair[1]).map(|(x, y)| a * x + b * y).collect();
        let lhs = s.reg.apply(&mix)?;
        let (ra, rb) = (s.reg.apply(&pair[0])?, s.reg.apply(&pair[1])?);
        for i in 0..lhs.len() {
            let rhs = a * ra[i] + b * rb[i];
            let scale = ra[i].abs().max(rb[i].abs()).max(1.0);
            worst = worst.max((lhs[i] - rhs).abs() / scale);
        }
    }
    Ok(vec![
        CheckResult::at_most("regularization.unit", "regularization preserves constants", unit, 1e-12),
        CheckResult::at_most("regularization.linear", "regularization is linear", worst, 1e-12).seed(seed),
    ])
}

/// Fresh fields and weights against the six frozen regularization constants.
pub fn frozen_bounds(ctx: &Ctx, s: &Setup, seed: u64) -> Result<Vec<CheckResult>> {
    let fx = &ctx.fixtures;
    let fields = random_fields(s.grid.points(), 12, seed);
    let weights = class_weights(ctx);
    let fresh = random_weights(6, seed + 1);
    let judge = |id: &str, claim: &str, stat: f64, c: f64| {
        CheckResult::zero(id, claim, usize::from(!(stat <= c))).value("max ratio", stat).value("calibrated C", c).seed(seed)
    };
    let mut out = Vec::new();
    out.push(judge(
        "regularization.commutation",
        "the maximal function commutes with regularization up to constants",
        commutation_ratio(s, &fields)?,
        fx.commutation_c,
    ));
    let (wide, equal) = self_adjoint_ratios(s, &fields)?;
    out.push(
        judge("regularization.self-adjoint", "regularization is self-adjoint up to a constant", wide, fx.self_adjoint_c)
            .value("equal-order ratio", equal)
            .note("right-hand side uses the order k/(1-k)"),
    );
    out.push(judge(
        "regularization.pointwise",
        "pointwise bound for powers of regularized normalized functions",
        pointwise_ratio(ctx, s, &weights, &fields)?,
        fx.pointwise_c,
    ));
    out.push(judge(
        "regularization.transfer",
        "regularized boundary-class weights are Muckenhoupt weights",
        transfer_ratio(ctx, s, &fresh)?,
        fx.transfer_c,
    ));
    let (a, b) = norm_transfer_ratios(ctx, s, &weights, &fields)?;
    out.push(judge("regularization.norm-transfer", "regularization moves the weight onto its regularization", a, fx.norm_transfer_c));
    out.push(judge("regularization.dual-transfer", "dual-side norm transfer through the regularized weight", b, fx.dual_transfer_c));
    Ok(out)
}

/// The six calibration statistics, in fixture order, on seeds disjoint from the suite's.
pub fn calibration_ratios(ctx: &Ctx, seed: u64) -> Result<[f64; 6]> {
    let s = setup(ctx)?;
    let fields = random_fields(s.grid.points(), 12, seed);
    let weights = class_weights(ctx);
    let (a, b) = norm_transfer_ratios(ctx, &s, &weights, &fields)?;
    Ok([
        commutation_ratio(&s, &fields)?,
        self_adjoint_ratios(&s, &fields)?.0,
        pointwise_ratio(ctx, &s, &weights, &fields)?,
        transfer_ratio(ctx, &s, &random_weights(6, seed + 1))?,
        a,
        b,
    ])
}

pub fn suite(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let s = ctx.seed;
    let st = setup(ctx)?;
    let mut out = Vec::new();
    out.extend(timed(|| linear_unit(&st, 20, s + 71))?);
    out.extend(timed(|| frozen_bounds(ctx, &st, s + 72))?);
    Ok(out)
}
