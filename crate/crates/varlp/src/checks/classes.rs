use rand::Rng;
use varlp_core::exponent::{harmonic_mean_exponent, ExponentField};
use varlp_core::geometry::{enumerate_ball_family, FamilyDescriptor, Point, PseudoBall};
use varlp_core::measure::{GridSpec, QuadratureGrid};
use varlp_core::norms::{luxemburg_norm, NormOptions};
use varlp_core::numeric::ls_slope;
use varlp_core::weights::{
    bplus_ball, bplusplus_ball, class_constant, classical_ball, lambda_class_fit, lambda_samples, lambda_violations, ClassTag,
    FamilyRules, Weight,
};

use super::{growth, rel, Ctx, STABILITY};
use crate::corpus::{exponent_corpus, random_balls, random_weights, weight_corpus};
use crate::error::Result;
use crate::report::{timed, CheckResult};

pub fn family_rules(grid: &QuadratureGrid, desc: &FamilyDescriptor) -> Result<FamilyRules> {
    Ok(FamilyRules::adapted(&enumerate_ball_family(desc)?, grid)?)
}

/// Rules on explicit balls, outside any enumerated family.
pub fn ball_rules(grid: &QuadratureGrid, balls: Vec<PseudoBall>, spec: &GridSpec) -> Result<FamilyRules> {
    let rules = balls.iter().map(|b| grid.adapted(&b.clone().into())).collect::<varlp_core::Result<Vec<_>>>()?;
    Ok(FamilyRules {
        balls,
        rules,
        descriptor: FamilyDescriptor { radius_count: 0, ..FamilyDescriptor::default() },
        grid_spec: spec.clone(),
        adapted: true,
    })
}

/// [w]_B, [w]_{B⁺} and [w]_{B⁺⁺} over prepared rules.
pub fn three_constants(w: &Weight, p: &ExponentField, rules: &FamilyRules, opts: &NormOptions) -> Result<[f64; 3]> {
    Ok([
        class_constant(ClassTag::Bekolle, w, p, rules, opts)?.estimate,
        class_constant(ClassTag::BPlus, w, p, rules, opts)?.estimate,
        class_constant(ClassTag::BPlusPlus, w, p, rules, opts)?.estimate,
    ])
}

/// ‖χ_B‖_{p(·)}/μ(B)^{1/p_B} and ‖χ_B‖_{p(·),w}/w(B)^{1/p_B} within [1/10, 10].
pub fn characteristic_laws(ctx: &Ctx, count: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let g = ctx.build()?;
    let balls = random_balls(count, seed, true);
    let rules: Vec<_> = balls.iter().map(|b| g.adapted(&b.clone().into())).collect::<varlp_core::Result<_>>()?;
    let weights = class_weights(ctx);
    let (mut lo1, mut hi1, mut lo2, mut hi2) = (f64::INFINITY, 0.0f64, f64::INFINITY, 0.0f64);
    for p in exponent_corpus()? {
        for rule in &rules {
            let pv = p.sample(rule)?;
            let pb = harmonic_mean_exponent(&p, rule)?;
            let one = vec![1.0; rule.len()];
            let n = luxemburg_norm(&one, &pv, None, rule, &ctx.norm)?.value;
            let r = n / rule.measure().powf(1.0 / pb);
            lo1 = lo1.min(r);
            hi1 = hi1.max(r);
            for w in &weights {
                let wv = w.sample(rule)?;
                let n = luxemburg_norm(&one, &pv, Some(&wv), rule, &ctx.norm)?.value;
                let r = n / rule.integrate_values(&wv)?.powf(1.0 / pb);
                lo2 = lo2.min(r);
                hi2 = hi2.max(r);
            }
        }
    }
    let spread = |lo: f64, hi: f64| hi.max(1.0 / lo);
    Ok(vec![
        CheckResult::at_most("classes.chi-norm", "norm of a characteristic function against μ(B)^{1/p_B}", spread(lo1, hi1), 10.0)
            .value("min ratio", lo1)
            .value("max ratio", hi1)
            .value("balls", count as f64)
            .seed(seed),
        CheckResult::at_most("classes.chi-weighted-norm", "weighted norm of a characteristic function against w(B)^{1/p_B}", spread(lo2, hi2), 10.0)
            .value("min ratio", lo2)
            .value("max ratio", hi2)
            .corpus(weights.iter().map(|w| w.name().to_string()))
            .seed(seed),
    ])
}

/// Corpus weights that are bounded or whose power is classified good for the context exponent.
pub fn class_weights(ctx: &Ctx) -> Vec<Weight> {
    let good = ctx.fixtures.classes_for(ctx.exponent.name(), ctx.alpha()).map(|c| c.good.clone()).unwrap_or_default();
    weight_corpus()
        .into_iter()
        .filter(|w| match w.power_exponent() {
            Some(g) if g != 0.0 => good.iter().any(|x| (x - g).abs() < 1e-12),
            Some(_) => true,
            None => false,
        })
        .collect()
}

/// Agreement of B, B⁺ and B⁺⁺ under one family refinement, and [w]_B ≤ [w]_A.
///
/// B⁺ and B⁺⁺ scale like p-th powers of the two-norm product, so their growth is
/// compared after taking p₊-th roots.
pub fn equivalence(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let g = ctx.build()?;
    let p = &ctx.exponent;
    let pp = p.declared_p_plus();
    let coarse = family_rules(&g, &ctx.family)?;
    let fine = family_rules(&g, &ctx.family.refined())?;
    let all = family_rules(&g, &ctx.family.all_balls())?;
    let mut disagreements = 0;
    let mut b_above_a = 0;
    let mut out = Vec::new();
    let mut names = Vec::new();
    for w in weight_corpus() {
        let a = three_constants(&w, p, &coarse, &ctx.norm)?;
        let b = three_constants(&w, p, &fine, &ctx.norm)?;
        let gr = [growth(a[0], b[0]), growth(a[1], b[1]).powf(1.0 / pp), growth(a[2], b[2]).powf(1.0 / pp)];
        let stable: Vec<bool> = gr.iter().map(|x| *x <= STABILITY).collect();
        if stable.iter().any(|s| *s != stable[0]) {
            disagreements += 1;
        }
        let muck = class_constant(ClassTag::Muckenhoupt, &w, p, &all, &ctx.norm)?.estimate;
        if a[0] > muck * (1.0 + 1e-12) {
            b_above_a += 1;
        }
        out.push((w.name().to_string(), gr, stable[0]));
        names.push(w.name().to_string());
    }
    let mut agree = CheckResult::zero("classes.equivalence", "the three boundary weight classes coincide", disagreements)
        .family(&ctx.family)
        .corpus(&names);
    for (name, gr, stable) in &out {
        agree = agree
            .value(&format!("{name}: growth B"), gr[0])
            .value(&format!("{name}: growth B+ root"), gr[1])
            .value(&format!("{name}: growth B++ root"), gr[2])
            .value(&format!("{name}: stable"), f64::from(u8::from(*stable)));
    }
    Ok(vec![
        agree,
        CheckResult::zero("classes.bekolle-below-muckenhoupt", "the boundary class constant is dominated by the full class constant", b_above_a)
            .corpus(&names),
    ])
}

/// max over weights of [w]_{B_q}/[w]_{B⁺} (q = p₊ + 3/2) and of [w]_{B⁺⁺}/max(1, [w]_B^{p₊}).
pub fn one_sided_ratios(p: &ExponentField, weights: &[Weight], rules: &FamilyRules, opts: &NormOptions) -> Result<(f64, f64)> {
    let pp = p.declared_p_plus();
    let q = pp + 1.5;
    let (mut emb, mut eqv) = (0.0f64, 0.0f64);
    for w in weights {
        let [b, bplus, bpp] = three_constants(w, p, rules, opts)?;
        let classical = class_constant(ClassTag::ClassicalB { q }, w, p, rules, opts)?.estimate;
        emb = emb.max(classical / bplus);
        eqv = eqv.max(bpp / b.powf(pp).max(1.0));
    }
    Ok((emb, eqv))
}

/// Calibration statistic for the two one-sided bounds: family balls, seeded weights.
pub fn calibrate_one_sided(ctx: &Ctx, seed: u64) -> Result<(f64, f64)> {
    let g = ctx.build()?;
    let rules = family_rules(&g, &ctx.family)?;
    one_sided_ratios(&ctx.exponent, &random_weights(12, seed), &rules, &ctx.norm)
}

/// Fresh weights and random boundary balls against the frozen constants.
pub fn one_sided(ctx: &Ctx, seed: u64) -> Result<Vec<CheckResult>> {
    let g = ctx.build()?;
    let rules = ball_rules(&g, random_balls(150, seed, true), &ctx.grid)?;
    let weights = random_weights(12, seed + 1);
    let mut viol = [0usize; 2];
    let mut worst = [0.0f64; 2];
    for w in &weights {
        let (a, b) = one_sided_ratios(&ctx.exponent, std::slice::from_ref(w), &rules, &ctx.norm)?;
        worst[0] = worst[0].max(a);
        worst[1] = worst[1].max(b);
        viol[0] += usize::from(a > ctx.fixtures.embedding_c);
        viol[1] += usize::from(b > ctx.fixtures.equivalence_c);
    }
    Ok(vec![
        CheckResult::zero("classes.embedding", "the B⁺ class embeds in a constant-exponent class", viol[0])
            .value("max ratio", worst[0])
            .value("calibrated C", ctx.fixtures.embedding_c)
            .seed(seed),
        CheckResult::zero("classes.bplusplus-bound", "the B⁺⁺ constant is controlled by a power of the class constant", viol[1])
            .value("max ratio", worst[1])
            .value("calibrated C", ctx.fixtures.equivalence_c)
            .seed(seed),
    ])
}

/// Constant exponent: B⁺ per ball equals the two-integral classical expression.
pub fn bplus_classical(ctx: &Ctx, count: usize, seed: u64) -> Result<CheckResult> {
    let g = ctx.build()?;
    let rules = family_rules(&g, &ctx.family)?;
    let mut worst: f64 = 0.0;
    let mut rng = varlp_core::numeric::seeded(seed);
    for k in 0..count {
        let gamma = rng.gen_range(-0.8..1.5);
        let p0 = [1.5, 2.0, 3.0][k % 3];
        let w = Weight::power(gamma);
        for rule in &rules.rules {
            let lw = w.sample_log(rule)?;
            let pv = vec![p0; rule.len()];
            let a = bplus_ball(rule, &lw, &pv, &ctx.norm)?;
            let b = classical_ball(rule, &lw, p0)?;
            worst = worst.max(rel(a, b));
        }
    }
    Ok(CheckResult::at_most("classes.bplus-classical", "for constant exponents B⁺ is the classical two-average constant", worst, 1e-4)
        .value("weights", count as f64)
        .seed(seed))
}

/// Trivial per-ball values for w ≡ 1 and the B⁺⁺/classical coincidence.
pub fn unit_weight(ctx: &Ctx) -> Result<CheckResult> {
    let g = ctx.build()?;
    let rules = family_rules(&g, &ctx.family)?;
    let mut err: f64 = 0.0;
    for p0 in [1.5, 2.0, 3.0] {
        let p = ExponentField::constant(p0)?;
        for class in [ClassTag::Bekolle, ClassTag::BPlus, ClassTag::BPlusPlus] {
            let r = class_constant(class, &Weight::one(), &p, &rules, &ctx.norm)?;
            for b in &r.per_ball {
                err = err.max((b.value - 1.0).abs());
            }
        }
        let w = Weight::power(0.3);
        for rule in &rules.rules {
            let lw = w.sample_log(rule)?;
            let pv = vec![p0; rule.len()];
            err = err.max(rel(bplusplus_ball(rule, &lw, &pv)?, classical_ball(rule, &lw, p0)?));
        }
    }
    Ok(CheckResult::at_most("classes.unit-weight", "class constants of the unit weight", err, 1e-6))
}

/// Λ-class fits with zero violations, and doubling of w·dμ_α over boundary balls.
pub fn lambda_doubling(ctx: &Ctx, seed: u64) -> Result<Vec<CheckResult>> {
    let g = ctx.build()?;
    let rules = family_rules(&g, &ctx.family)?;
    let mut out = Vec::new();
    let mut fit_violations = 0;
    let mut unit_ok = true;
    for w in class_weights(ctx) {
        let samples = lambda_samples(&w, &rules, ctx.alpha(), 64, seed)?;
        let fit = lambda_class_fit(&samples)?;
        fit_violations += fit.violations;
        if w.name() == Weight::one().name() {
            unit_ok = lambda_violations(&samples, 1.0, 1.0) == 0;
        }
    }
    out.push(CheckResult::zero("classes.lambda-fit", "boundary-class weights satisfy a power-law absolute continuity bound", fit_violations).seed(seed));
    out.push(CheckResult::zero("classes.lambda-unit", "the unit weight satisfies the Λ bound with C = δ = 1", usize::from(!unit_ok)));
    let (worst, _) = doubling_ratio(ctx, &g, seed + 1)?;
    out.push(
        CheckResult::at_most("classes.doubling", "the weighted measure is doubling", worst, ctx.fixtures.doubling_c)
            .value("max ratio", worst)
            .seed(seed + 1),
    );
    Ok(out)
}

/// max over random boundary balls B and class weights of w(2B)/w(B).
pub fn doubling_ratio(ctx: &Ctx, g: &QuadratureGrid, seed: u64) -> Result<(f64, usize)> {
    let balls: Vec<PseudoBall> = random_balls(200, seed, true).into_iter().filter(|b| b.radius() < 1.4).collect();
    let mut worst: f64 = 0.0;
    for w in class_weights(ctx) {
        for b in &balls {
            let small = g.adapted(&b.clone().into())?;
            let big = g.adapted(&b.scaled(2.0)?.into())?;
            let ws = small.integrate_values(&w.sample(&small)?)?;
            let wb = big.integrate_values(&w.sample(&big)?)?;
            worst = worst.max(wb / ws);
        }
    }
    Ok((worst, balls.len()))
}

/// Outcome of the dyadic slope probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Growth {
    Geometric,
    Bounded,
    Inconclusive,
}

impl Growth {
    pub fn of_slope(slope: f64) -> Self {
        if slope >= std::f64::consts::LN_2 {
            Growth::Geometric
        } else if slope <= 0.1 {
            Growth::Bounded
        } else {
            Growth::Inconclusive
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Growth::Geometric => 1.0,
            Growth::Bounded => 0.0,
            Growth::Inconclusive => 0.5,
        }
    }
}

pub const DYADIC_LEVELS: std::ops::RangeInclusive<i32> = 4..=10;

/// B⁺⁺ values on boundary balls of radius 2^{-j} centered at gap 2^{-j-1}, each
/// restricted to {1 - |z| > 4^{-j}} so that non-integrable weights stay finite.
pub fn dyadic_bplusplus(grid: &QuadratureGrid, w: &Weight, p: &ExponentField) -> Result<Vec<f64>> {
    DYADIC_LEVELS
        .map(|j| {
            let r = (-(j as f64)).exp2();
            let ball = PseudoBall::new(Point::polar(0.5 * r, 0.0)?, r)?;
            let rule = grid.adapted_above(&ball, r * r)?;
            let lw = w.sample_log(&rule)?;
            let pv = p.sample(&rule)?;
            Ok(bplusplus_ball(&rule, &lw, &pv)?)
        })
        .collect()
}

/// Least-squares slope of ln(value) against j, and its classification.
pub fn dyadic_slope(values: &[f64]) -> (f64, Growth) {
    let x: Vec<f64> = DYADIC_LEVELS.map(f64::from).collect();
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let s = ls_slope(&x, &y);
    (s, Growth::of_slope(s))
}

/// Unweighted B⁺⁺ on the dyadic probe stays at one.
pub fn dyadic_unit(ctx: &Ctx) -> Result<CheckResult> {
    let g = ctx.build()?;
    let v = dyadic_bplusplus(&g, &Weight::one(), &ctx.exponent)?;
    let (s, c) = dyadic_slope(&v);
    Ok(CheckResult::at_most("classes.dyadic-unit", "the unit weight has bounded boundary-ball constants", s.abs(), 0.1)
        .value("classified bounded", f64::from(u8::from(c == Growth::Bounded))))
}

pub fn suite(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let s = ctx.seed;
    let mut out = Vec::new();
    out.extend(timed(|| characteristic_laws(ctx, 500, s + 51))?);
    out.extend(timed(|| equivalence(ctx))?);
    out.extend(timed(|| one_sided(ctx, s + 52))?);
    out.extend(timed(|| Ok(vec![bplus_classical(ctx, 20, s + 53)?]))?);
    out.extend(timed(|| Ok(vec![unit_weight(ctx)?]))?);
    out.extend(timed(|| lambda_doubling(ctx, s + 54))?);
    out.extend(timed(|| Ok(vec![dyadic_unit(ctx)?]))?);
    Ok(out)
}
