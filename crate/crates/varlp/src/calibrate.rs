//! The calibration run behind `varlp calibrate`.
//!
//! Every constant is the maximum of its statistic over calibration samples
//! (seeds and balls disjoint from those of the verification suites) times the margin.

use varlp_core::weights::Weight;

use crate::checks::{bergman, classes, extrapolation, factorization, measure, norms, regularization, Ctx};
use crate::corpus::sin_exponent;
use crate::error::Result;
use crate::fixtures::{Fixtures, PowerClasses, TwinFixture};

/// The γ grid swept by the power-weight classification.
pub const POWER_SWEEP: [f64; 12] = [-2.5, -2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0];

pub fn power_classes(ctx: &Ctx) -> Result<Vec<PowerClasses>> {
    let g = ctx.with_alpha(1.0)?.build()?;
    let mut out = Vec::new();
    for p in [varlp_core::exponent::ExponentField::constant(2.0)?, sin_exponent()] {
        let mut c = PowerClasses { exponent: p.name().to_string(), alpha: 1.0, ..PowerClasses::default() };
        for gamma in POWER_SWEEP {
            let v = classes::dyadic_bplusplus(&g, &Weight::power(gamma), &p)?;
            match classes::dyadic_slope(&v).1 {
                classes::Growth::Geometric => c.bad.push(gamma),
                classes::Growth::Bounded => c.good.push(gamma),
                classes::Growth::Inconclusive => c.inconclusive.push(gamma),
            }
        }
        out.push(c);
    }
    Ok(out)
}

pub fn calibrate(ctx: &Ctx, progress: &mut dyn FnMut(&str)) -> Result<Fixtures> {
    let mut f = Fixtures { calibration_seed: ctx.seed.wrapping_add(7_000), ..Fixtures::default() };
    let m = f.margin;
    let seed = f.calibration_seed;
    let ctx1 = ctx.with_alpha(1.0)?;

    progress("power classes");
    f.power_classes = power_classes(ctx)?;
    let ctx1 = Ctx { fixtures: f.clone(), ..ctx1 };

    progress("density");
    let fit = measure::fit_density(&measure::density_samples(&ctx1, 2000, seed)?);
    f.density = density_with_margin(fit, m);

    progress("generalized Hölder");
    f.holder_k = m * norms::generalized_holder_ratio(&ctx1, 40, seed + 1)?;

    progress("one-sided class bounds");
    let (emb, eqv) = classes::calibrate_one_sided(&ctx1, seed + 2)?;
    f.embedding_c = m * emb;
    f.equivalence_c = m * eqv;
    let g = ctx1.build()?;
    f.doubling_c = m * classes::doubling_ratio(&Ctx { fixtures: f.clone(), ..ctx1.clone() }, &g, seed + 3)?.0;

    progress("regularization");
    let [a, b, c, d, e, h] = regularization::calibration_ratios(&Ctx { fixtures: f.clone(), ..ctx1.clone() }, seed + 4)?;
    f.commutation_c = m * a;
    f.self_adjoint_c = m * b;
    f.pointwise_c = m * c;
    f.transfer_c = m * d;
    f.norm_transfer_c = m * e;
    f.dual_transfer_c = m * h;

    progress("twin balls");
    let balls = bergman::small_boundary_balls(40, seed + 5);
    for alpha in [0.5, 1.0, 2.0] {
        let (kappa, lo) = bergman::twin_search(&ctx.with_alpha(alpha)?, &balls)?;
        f.twin.push(TwinFixture { alpha, kappa, c_alpha: lo / m });
    }

    progress("main lemma");
    let ctxf = Ctx { fixtures: f.clone(), ..ctx1.clone() };
    let swept = bergman::sufficiency_cases(&ctxf)?
        .into_iter()
        .map(|(p, w)| Ok((p.clone(), w.clone(), bergman::sweep(&ctxf, &p, &w, false)?)))
        .collect::<Result<Vec<_>>>()?;
    f.main_lemma_c = m * bergman::main_lemma_statistic(&ctxf, &swept, &bergman::small_boundary_balls(60, seed + 6))?;

    progress("S operator");
    f.s_operator_c = factorization::calibrate_s(&ctxf)?;

    progress("extrapolation");
    f.extrapolation_c = extrapolation::calibrate(&ctxf)?;
    Ok(f)
}

/// The margin divides the fitted density constant.
fn density_with_margin(fit: crate::fixtures::DensityFit, margin: f64) -> crate::fixtures::DensityFit {
    crate::fixtures::DensityFit { c: fit.c / margin, gamma: fit.gamma }
}
