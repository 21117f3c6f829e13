use varlp_core::exponent::ExponentField;
use varlp_core::weights::{bekolle_ball, class_constant, dual_weight, ClassTag, Weight};

use super::classes::family_rules;
use super::{rel, Ctx};
use crate::corpus::{sin_exponent, weight_corpus};
use crate::error::Result;
use crate::report::{timed, CheckResult};

fn duality_exponents() -> Result<Vec<ExponentField>> {
    Ok(vec![sin_exponent(), ExponentField::constant(3.0)?])
}

/// Per-ball products for (w, p) and (w', p') on every ball of the unfiltered family,
/// and the lower bound 1/2 on both class constants.
pub fn duality_identity(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let g = ctx.build()?;
    let all = family_rules(&g, &ctx.family.all_balls())?;
    let boundary = family_rules(&g, &ctx.family)?;
    let mut worst: f64 = 0.0;
    let mut worst_const: f64 = 0.0;
    let mut lowest = f64::INFINITY;
    let mut names = Vec::new();
    for p in duality_exponents()? {
        let q = p.conjugate()?;
        for w in weight_corpus() {
            let wd = dual_weight(&w, &p)?;
            for rule in &all.rules {
                let pv = p.sample(rule)?;
                let qv = q.sample(rule)?;
                let a = bekolle_ball(rule, &w.sample_log(rule)?, &pv, &ctx.norm)?;
                let b = bekolle_ball(rule, &wd.sample_log(rule)?, &qv, &ctx.norm)?;
                worst = worst.max(rel(a, b));
            }
            let ca = class_constant(ClassTag::Bekolle, &w, &p, &boundary, &ctx.norm)?.estimate;
            let cb = class_constant(ClassTag::Bekolle, &wd, &q, &boundary, &ctx.norm)?.estimate;
            let cm = class_constant(ClassTag::Muckenhoupt, &w, &p, &all, &ctx.norm)?.estimate;
            worst_const = worst_const.max(rel(ca, cb));
            lowest = lowest.min(ca).min(cb).min(cm);
            names.push(format!("{} / {}", w.name(), p.name()));
        }
    }
    Ok(vec![
        CheckResult::at_most("duality.per-ball", "the class constant is invariant under passing to the dual weight and exponent", worst, 1e-8)
            .family(&ctx.family.all_balls())
            .corpus(&names),
        CheckResult::at_most("duality.class-constant", "the class constant is invariant under passing to the dual weight and exponent", worst_const, 1e-8),
        CheckResult::at_least("duality.lower-bound", "class constants are at least one half", lowest, 0.5 - 1e-6),
    ])
}

/// (w')' = w under p', w' = 1/w for p ≡ 2, and the power rule for constant exponents.
pub fn dual_weight_laws(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let g = ctx.build()?;
    let whole = g.whole();
    let mut inv: f64 = 0.0;
    for p in duality_exponents()? {
        let q = p.conjugate()?;
        for w in weight_corpus() {
            let back = dual_weight(&dual_weight(&w, &p)?, &q)?.sample(&whole)?;
            for (a, b) in back.iter().zip(w.sample(&whole)?) {
                inv = inv.max(rel(*a, b));
            }
        }
    }
    let mut alg: f64 = 0.0;
    let two = ExponentField::constant(2.0)?;
    for w in weight_corpus() {
        let d = dual_weight(&w, &two)?.sample(&whole)?;
        for (a, b) in d.iter().zip(w.sample(&whole)?) {
            alg = alg.max(rel(*a, 1.0 / b));
        }
    }
    for (gamma, p0) in [(0.5, 3.0), (-0.5, 1.5), (2.0, 2.5)] {
        let pc = p0 / (p0 - 1.0);
        let d = dual_weight(&Weight::power(gamma), &ExponentField::constant(p0)?)?.sample(&whole)?;
        for (a, z) in d.iter().zip(&whole.points) {
            alg = alg.max(rel(*a, z.depth().powf(gamma * (1.0 - pc))));
        }
    }
    let unit = dual_weight(&Weight::one(), &sin_exponent())?.sample(&whole)?;
    let unit_err = unit.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    Ok(vec![
        CheckResult::at_most("duality.involution", "the dual of the dual weight is the weight", inv, 1e-12),
        CheckResult::at_most("duality.algebraic", "dual weights of constant exponents", alg, 1e-12),
        CheckResult::at_most("duality.unit", "the dual of the unit weight", unit_err, 0.0),
    ])
}

pub fn suite(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    out.extend(timed(|| duality_identity(ctx))?);
    out.extend(timed(|| dual_weight_laws(ctx))?);
    Ok(out)
}
