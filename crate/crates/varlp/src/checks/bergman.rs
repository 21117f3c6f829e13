//! Bergman operator laws, the sufficiency sweep and the necessity probes.

use std::f64::consts::PI;

use rand::Rng;
use varlp_core::exponent::ExponentField;
use varlp_core::geometry::{enumerate_ball_family, FamilyDescriptor, Point, PseudoBall};
use varlp_core::measure::{build_grid, GridSpec, MeasureParams, RegionRule, Scalar};
use varlp_core::norms::luxemburg_norm;
use varlp_core::numeric::seeded;
use varlp_core::operators::{bergman_at_points, operator_norm_estimate, BergmanOperator, MaximalOperator};
use varlp_core::weights::{dual_weight, Weight};

use super::classes::{dyadic_bplusplus, dyadic_slope, Growth};
use super::{growth, Ctx, STABILITY};
use crate::corpus::{random_fields, random_point, sin_exponent, test_functions, weight_corpus};
use crate::error::{HarnessError, Result};
use crate::fixtures::TwinFixture;
use crate::report::{timed, CheckResult};

/// Minimum size of an operator-norm corpus.
pub const MIN_CORPUS: usize = 20;

/// Separations κ (center distance κR) tried by the twin-ball search.
pub const KAPPAS: [f64; 4] = [2.0, 3.0, 4.0, 6.0];

/// The coarse grid and family of the sweeps; one refinement doubles both resolutions.
pub fn sweep_grid() -> GridSpec {
    GridSpec { levels: 10, points: 6, angular: 48, ..GridSpec::default() }
}

pub fn sweep_family() -> FamilyDescriptor {
    FamilyDescriptor { radial_levels: 6, angular_count: 8, radius_count: 8, ..FamilyDescriptor::default() }
}

/// Operator-norm estimates on L^{p(·)}(w) at one resolution.
#[derive(Clone, Debug)]
pub struct Estimates {
    pub positive: f64,
    pub signed: f64,
    pub maximal: Option<f64>,
    pub argmax: String,
    pub corpus: usize,
}

pub fn estimates(
    ctx: &Ctx,
    spec: &GridSpec,
    family: &FamilyDescriptor,
    p: &ExponentField,
    w: &Weight,
    with_maximal: bool,
) -> Result<Estimates> {
    let g = build_grid(MeasureParams::new(ctx.alpha(), 1)?, spec)?;
    let whole = g.whole();
    let pv = p.sample(&whole)?;
    let wv = w.sample(&whole)?;
    let wd = dual_weight(w, p)?.sample(&whole)?;
    let named = test_functions(g.points(), family, &wd);
    if named.len() < MIN_CORPUS {
        return Err(HarnessError::Config(format!("operator-norm corpus has {} functions, need {MIN_CORPUS}", named.len())));
    }
    let corpus: Vec<Vec<f64>> = named.iter().map(|(_, f)| f.clone()).collect();
    let b = BergmanOperator::new(&g, &ctx.op, true)?;
    let pos = operator_norm_estimate(&mut |f| b.apply_positive(f), &pv, &wv, &corpus, &whole, &ctx.norm)?;
    let signed = operator_norm_estimate(
        &mut |f| Ok(b.apply(f)?.into_iter().map(|c| c.norm()).collect()),
        &pv,
        &wv,
        &corpus,
        &whole,
        &ctx.norm,
    )?;
    let maximal = if with_maximal {
        let m = MaximalOperator::new(&g, &enumerate_ball_family(family)?)?;
        Some(operator_norm_estimate(&mut |f| m.apply(f), &pv, &wv, &corpus, &whole, &ctx.norm)?.value)
    } else {
        None
    };
    Ok(Estimates { positive: pos.value, signed: signed.value, maximal, argmax: named[pos.argmax].0.clone(), corpus: corpus.len() })
}

/// Estimates before and after one simultaneous refinement of grid and corpus.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub coarse: Estimates,
    pub fine: Estimates,
}

impl Sweep {
    pub fn positive_growth(&self) -> f64 {
        growth(self.coarse.positive, self.fine.positive)
    }

    pub fn maximal_growth(&self) -> Option<f64> {
        Some(growth(self.coarse.maximal?, self.fine.maximal?))
    }

    pub fn stable(&self) -> bool {
        self.positive_growth() <= STABILITY && self.maximal_growth().is_none_or(|g| g <= STABILITY)
    }
}

pub fn sweep(ctx: &Ctx, p: &ExponentField, w: &Weight, with_maximal: bool) -> Result<Sweep> {
    let (spec, fam) = (sweep_grid(), sweep_family());
    Ok(Sweep {
        coarse: estimates(ctx, &spec, &fam, p, w, with_maximal)?,
        fine: estimates(ctx, &spec.refined(), &fam.refined(), p, w, with_maximal)?,
    })
}

/// (2, 1), (2 + sin|z|, 1) and (2 + sin|z|, a power weight classified good).
pub fn sufficiency_cases(ctx: &Ctx) -> Result<Vec<(ExponentField, Weight)>> {
    let sin = sin_exponent();
    let good = ctx
        .fixtures
        .classes_for(sin.name(), ctx.alpha())
        .and_then(|c| c.probe_good())
        .ok_or_else(|| HarnessError::Config("no good power weight in the fixtures".into()))?;
    Ok(vec![
        (ExponentField::constant(2.0)?, Weight::one()),
        (sin.clone(), Weight::one()),
        (sin, Weight::power(good)),
    ])
}

/// Power weights classified bad for 2 + sin|z|.
pub fn necessity_weights(ctx: &Ctx) -> Vec<Weight> {
    ctx.fixtures
        .classes_for(sin_exponent().name(), ctx.alpha())
        .map(|c| c.probe_bad())
        .unwrap_or_default()
        .into_iter()
        .map(Weight::power)
        .collect()
}

fn case_name(p: &ExponentField, w: &Weight) -> String {
    format!("{} / {}", p.name(), w.name())
}

/// P_α1(0) = P_α⁺1(0) = μ_α(𝔹), |P_α f| ≤ P_α⁺|f|, the lower bound 2^{-(1+α)}∫f and linearity.
pub fn operator_laws(ctx: &Ctx, seed: u64) -> Result<Vec<CheckResult>> {
    let g = ctx.build()?;
    let whole = g.whole();
    let one = |_: &Point| 1.0;
    let o = [Point::origin(1)?];
    let total = ctx.params.total_mass();
    let s = bergman_at_points(&Scalar::Func(&one), &o, &whole, ctx.alpha(), false)?[0];
    let pp = bergman_at_points(&Scalar::Func(&one), &o, &whole, ctx.alpha(), true)?[0];
    let origin = ((s.re - total).abs() + s.im.abs()).max((pp.re - total).abs()) / total;

    let b = BergmanOperator::new(&g, &ctx.op, true)?;
    let fields = random_fields(g.points(), 20, seed);
    let mut rng = seeded(seed + 1);
    let (mut dom, mut low, mut lin) = (0usize, 0usize, 0.0f64);
    let lower = 2f64.powf(-(1.0 + ctx.alpha()));
    for pair in fields.chunks(2) {
        let shift = rng.gen_range(0.0..0.5);
        let signed: Vec<f64> = pair[0].iter().map(|v| v - shift).collect();
        let abs: Vec<f64> = signed.iter().map(|v| v.abs()).collect();
        let ps = b.apply(&signed)?;
        let pa = b.apply_positive(&abs)?;
        dom += ps.iter().zip(&pa).filter(|(z, a)| z.norm() > **a * (1.0 + 1e-12) + 1e-300).count();
        let integral = whole.integrate_values(&pair[1])?;
        let pf = b.apply_positive(&pair[1])?;
        low += pf.iter().filter(|v| **v < lower * integral * (1.0 - 1e-12)).count();
        let (a, c) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let mix: Vec<f64> = pair[0].iter().zip(&pair[1]).map(|(x, y)| a * x + c * y).collect();
        let (pm, p0, p1) = (b.apply(&mix)?, b.apply(&pair[0])?, b.apply(&pair[1])?);
        for i in 0..pm.len() {
            let scale = p0[i].norm().max(p1[i].norm()).max(1.0);
            lin = lin.max((pm[i] - (p0[i] * a + p1[i] * c)).norm() / scale);
        }
    }
    Ok(vec![
        CheckResult::at_most("bergman.origin", "the Bergman kernel is one at the origin", origin, 1e-8).alpha(ctx.alpha()),
        CheckResult::zero("bergman.domination", "the positive operator dominates the Bergman projector", dom).seed(seed),
        CheckResult::zero("bergman.lower-bound", "the positive operator is bounded below by the mean", low).seed(seed),
        CheckResult::at_most("bergman.linear", "the Bergman projector is linear", lin, 1e-10).seed(seed),
    ])
}

/// Stability of the m_α and P_α⁺ estimates under refinement for the three sufficiency cases.
pub fn sufficiency(ctx: &Ctx) -> Result<(Vec<CheckResult>, Vec<(ExponentField, Weight, Sweep)>)> {
    let mut out = Vec::new();
    let mut swept = Vec::new();
    for (k, (p, w)) in sufficiency_cases(ctx)?.into_iter().enumerate() {
        let s = sweep(ctx, &p, &w, true)?;
        let name = case_name(&p, &w);
        let mg = s.maximal_growth().unwrap_or(f64::NAN);
        out.push(
            CheckResult::at_most(&format!("sufficiency.maximal.{k}"), "the boundary maximal function is bounded for class weights", mg, STABILITY)
                .value("coarse", s.coarse.maximal.unwrap_or(f64::NAN))
                .value("fine", s.fine.maximal.unwrap_or(f64::NAN))
                .corpus([name.as_str()])
                .grid(&sweep_grid())
                .grid(&sweep_grid().refined()),
        );
        out.push(
            CheckResult::at_most(&format!("sufficiency.bergman.{k}"), "the positive Bergman operator is bounded for class weights", s.positive_growth(), STABILITY)
                .value("coarse", s.coarse.positive)
                .value("fine", s.fine.positive)
                .value("corpus size", s.fine.corpus as f64)
                .note(format!("argmax {}", s.fine.argmax))
                .corpus([name.as_str()])
                .grid(&sweep_grid())
                .grid(&sweep_grid().refined()),
        );
        swept.push((p, w, s));
    }
    Ok((out, swept))
}

/// Random boundary balls with gap in [2^{-8}, 2^{-3}] and R ∈ (gap, 3·gap).
pub fn small_boundary_balls(count: usize, seed: u64) -> Vec<PseudoBall> {
    let mut rng = seeded(seed);
    (0..count)
        .map(|_| {
            let gap = (-rng.gen_range(3.0..8.0f64)).exp2();
            let r = gap * rng.gen_range(1.05..3.0);
            PseudoBall::new(Point::polar(gap, rng.gen_range(0.0..std::f64::consts::TAU)).expect("interior point"), r).expect("valid ball")
        })
        .collect()
}

/// sup over balls of ‖w^{1/p}χ_B‖_{p(·)}·w'(B)/(μ_α(B)·‖w'χ_B‖_{p(·),w}).
pub fn main_lemma_ratio(ctx: &Ctx, p: &ExponentField, w: &Weight, balls: &[PseudoBall]) -> Result<f64> {
    let g = build_grid(MeasureParams::new(ctx.alpha(), 1)?, &sweep_grid())?;
    let wd = dual_weight(w, p)?;
    let mut worst: f64 = 0.0;
    for b in balls {
        let rule = g.adapted(&b.clone().into())?;
        let (pv, wv, dv) = (p.sample(&rule)?, w.sample(&rule)?, wd.sample(&rule)?);
        let chi = luxemburg_norm(&vec![1.0; rule.len()], &pv, Some(&wv), &rule, &ctx.norm)?.value;
        let dual_mass = rule.integrate_values(&dv)?;
        let dual_norm = luxemburg_norm(&dv, &pv, Some(&wv), &rule, &ctx.norm)?.value;
        worst = worst.max(chi * dual_mass / (rule.measure() * dual_norm));
    }
    Ok(worst)
}

/// Main-lemma ratio over the signed-operator estimate, maximized over the sufficiency cases.
pub fn main_lemma_statistic(ctx: &Ctx, swept: &[(ExponentField, Weight, Sweep)], balls: &[PseudoBall]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (p, w, s) in swept {
        worst = worst.max(main_lemma_ratio(ctx, p, w, balls)? / s.coarse.signed);
    }
    Ok(worst)
}

pub fn main_lemma(ctx: &Ctx, swept: &[(ExponentField, Weight, Sweep)], seed: u64) -> Result<CheckResult> {
    let stat = main_lemma_statistic(ctx, swept, &small_boundary_balls(60, seed))?;
    Ok(CheckResult::at_most("bergman.main-lemma", "the main-lemma inequality holds with the measured operator norm", stat, ctx.fixtures.main_lemma_c)
        .value("calibrated C", ctx.fixtures.main_lemma_c)
        .seed(seed))
}

pub fn sufficiency_suite(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let s = ctx.seed;
    let ctx1 = ctx.with_alpha(1.0)?;
    let mut out = Vec::new();
    out.extend(timed(|| operator_laws(ctx, s + 81))?);
    let mut swept = Vec::new();
    out.extend(timed(|| {
        let (r, sw) = sufficiency(&ctx1)?;
        swept = sw;
        Ok(r)
    })?);
    out.extend(timed(|| Ok(vec![main_lemma(&ctx1, &swept, s + 82)?]))?);
    Ok(out)
}

/// Spread and value of P_α f for f = (1-|z|²)^{1-α}χ_{B(0,r)} over random points.
pub fn mean_value(ctx: &Ctx, r: f64, count: usize, seed: u64) -> Result<(f64, f64)> {
    let g = ctx.build()?;
    let ball = PseudoBall::new(Point::origin(1)?, r)?;
    let rule: RegionRule = g.adapted(&ball.into())?;
    let alpha = ctx.alpha();
    let f = |z: &Point| z.depth().powf(1.0 - alpha);
    let mut rng = seeded(seed);
    let pts: Vec<Point> = (0..count).map(|_| random_point(&mut rng, 10.0)).collect();
    let v = bergman_at_points(&Scalar::Func(&f), &pts, &rule, alpha, false)?;
    let exact = PI * r * r;
    let spread = v.iter().map(|c| (c - v[0]).norm()).fold(0.0f64, f64::max) / v[0].norm();
    let value = v.iter().map(|c| (c - exact).norm()).fold(0.0f64, f64::max) / exact;
    Ok((spread, value))
}

pub fn mean_value_checks(ctx: &Ctx, seed: u64) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for alpha in [0.5, 1.0, 2.0] {
        let c = ctx.with_alpha(alpha)?;
        for r in [0.3, 0.6] {
            let (spread, value) = mean_value(&c, r, 100, seed)?;
            out.push(CheckResult::at_most(&format!("necessity.mean-value.spread(α={alpha}, r={r})"), "the Bergman projection of a radial profile is constant", spread, 1e-3).alpha(alpha).seed(seed));
            out.push(CheckResult::at_most(&format!("necessity.mean-value.value(α={alpha}, r={r})"), "the Bergman projection of a radial profile is constant", value, 1e-3).alpha(alpha).seed(seed));
        }
    }
    Ok(out)
}

/// Growth of w(𝔹) and w'(𝔹) under one grid refinement.
pub fn integrability_growth(ctx: &Ctx, p: &ExponentField, w: &Weight) -> Result<(f64, f64)> {
    let params = MeasureParams::new(ctx.alpha(), 1)?;
    let mut out = [[0.0; 2]; 2];
    for (k, spec) in [sweep_grid(), sweep_grid().refined()].iter().enumerate() {
        let g = build_grid(params, spec)?;
        let whole = g.whole();
        out[k][0] = whole.integrate_values(&w.sample(&whole)?)?;
        out[k][1] = whole.integrate_values(&dual_weight(w, p)?.sample(&whole)?)?;
    }
    Ok((growth(out[0][0], out[1][0]), growth(out[0][1], out[1][1])))
}

/// The pair (B¹, B²) at center distance κR along the same gap level.
pub fn twin_of(b: &PseudoBall, kappa: f64) -> Result<PseudoBall> {
    let c = b.center();
    let phi = 2.0 * (0.5 * kappa * b.radius()).min(1.0).asin();
    Ok(PseudoBall::new(Point::polar(c.gap(), c.arg() + phi)?, b.radius())?)
}

/// min over both directions and all nodes of B^j of |P_α χ_{B^i}|.
pub fn twin_statistic(grid: &varlp_core::measure::QuadratureGrid, alpha: f64, b1: &PseudoBall, b2: &PseudoBall) -> Result<f64> {
    let r1 = grid.adapted(&b1.clone().into())?;
    let r2 = grid.adapted(&b2.clone().into())?;
    let one = |_: &Point| 1.0;
    let mut worst = f64::INFINITY;
    for (src, dst) in [(&r1, &r2), (&r2, &r1)] {
        for c in bergman_at_points(&Scalar::Func(&one), &dst.points, src, alpha, false)? {
            worst = worst.min(c.norm());
        }
    }
    Ok(worst)
}

/// Best κ and the smallest twin statistic at that κ over the balls.
pub fn twin_search(ctx: &Ctx, balls: &[PseudoBall]) -> Result<(f64, f64)> {
    let g = ctx.build()?;
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for kappa in KAPPAS {
        let mut lo = f64::INFINITY;
        for b in balls {
            lo = lo.min(twin_statistic(&g, ctx.alpha(), b, &twin_of(b, kappa)?)?);
        }
        if lo > best.1 {
            best = (kappa, lo);
        }
    }
    Ok(best)
}

pub fn twin_ball(ctx: &Ctx, seed: u64) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for alpha in [0.5, 1.0, 2.0] {
        let c = ctx.with_alpha(alpha)?;
        let g = c.build()?;
        let fx = ctx.fixtures.twin_for(alpha).unwrap_or(TwinFixture { alpha, kappa: f64::NAN, c_alpha: f64::NAN });
        let mut viol = 0usize;
        let mut lo = f64::INFINITY;
        for b in small_boundary_balls(40, seed) {
            let s = if fx.kappa.is_finite() { twin_statistic(&g, alpha, &b, &twin_of(&b, fx.kappa)?)? } else { f64::NAN };
            lo = lo.min(s);
            viol += usize::from(!(s >= fx.c_alpha));
        }
        out.push(
            CheckResult::zero(&format!("necessity.twin-ball(α={alpha})"), "a twin boundary ball sees the Bergman projection of a characteristic function", viol)
                .value("min statistic", lo)
                .value("calibrated C", fx.c_alpha)
                .value("kappa", fx.kappa)
                .alpha(alpha)
                .seed(seed),
        );
    }
    Ok(out)
}

/// Dyadic B⁺⁺ growth, P_α⁺ blow-up and integrability growth for the bad weights, then
/// coherence of the sufficiency and necessity verdicts over the whole corpus.
pub fn blow_up(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let sin = sin_exponent();
    let bad = necessity_weights(ctx);
    let g = ctx.build()?;
    let mut out = vec![CheckResult::at_least("necessity.bad-count", "the necessity probes use at least two bad weights", bad.len() as f64, 2.0)];
    let mut corpus: Vec<(ExponentField, Weight)> = weight_corpus().into_iter().map(|w| (sin.clone(), w)).collect();
    for (p, w) in sufficiency_cases(ctx)? {
        if !corpus.iter().any(|(q, v)| q.name() == p.name() && v.name() == w.name()) {
            corpus.push((p, w));
        }
    }
    for w in &bad {
        if !corpus.iter().any(|(_, v)| v.name() == w.name()) {
            corpus.push((sin.clone(), w.clone()));
        }
    }
    let mut incoherent = Vec::new();
    for (p, w) in &corpus {
        let (slope, class) = dyadic_slope(&dyadic_bplusplus(&g, w, p)?);
        let s = sweep(ctx, p, w, false)?;
        let name = case_name(p, w);
        if s.stable() && class == Growth::Geometric {
            incoherent.push(name.clone());
        }
        if bad.iter().any(|b| b.name() == w.name()) {
            out.push(
                CheckResult::at_least(&format!("necessity.dyadic[{}]", w.name()), "per-ball B⁺⁺ values grow geometrically for a bad weight", slope, std::f64::consts::LN_2)
                    .corpus([name.as_str()]),
            );
            out.push(
                CheckResult::at_least(&format!("necessity.blow-up[{}]", w.name()), "the positive Bergman estimate blows up for a bad weight", s.positive_growth(), 2.0)
                    .value("coarse", s.coarse.positive)
                    .value("fine", s.fine.positive)
                    .note(format!("argmax {}", s.fine.argmax))
                    .corpus([name.as_str()]),
            );
            let (gw, gd) = integrability_growth(ctx, p, w)?;
            out.push(
                CheckResult::at_least(&format!("necessity.integrability[{}]", w.name()), "a bad weight or its dual fails to be integrable", gw.max(gd), 2.0)
                    .value("w growth", gw)
                    .value("dual growth", gd)
                    .corpus([name.as_str()]),
            );
        }
    }
    out.push(
        CheckResult::zero("necessity.coherence", "no weight is both bounded for the Bergman operator and outside the class", incoherent.len())
            .corpus(corpus.iter().map(|(p, w)| case_name(p, w)))
            .note(if incoherent.is_empty() { "coherent".to_string() } else { format!("incoherent: {}", incoherent.join(", ")) }),
    );
    Ok(out)
}

pub fn necessity_suite(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let s = ctx.seed;
    let ctx1 = ctx.with_alpha(1.0)?;
    let mut out = Vec::new();
    out.extend(timed(|| mean_value_checks(ctx, s + 91))?);
    out.extend(timed(|| twin_ball(ctx, s + 92))?);
    out.extend(timed(|| blow_up(&ctx1))?);
    Ok(out)
}
