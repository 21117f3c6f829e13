//! The extrapolation constant for the positive Bergman operator.

use std::sync::Arc;

use varlp_core::exponent::ExponentField;
use varlp_core::measure::QuadratureGrid;
use varlp_core::norms::luxemburg_norm;
use varlp_core::operators::{operator_norm_estimate, BergmanOperator};
use varlp_core::weights::{dual_weight, Weight};

use super::bergman::{sufficiency_cases, sweep_family, sweep_grid};
use super::factorization::{bp0_weights, P0};
use super::Ctx;
use crate::corpus::{random_fields, test_functions};
use crate::error::{HarnessError, Result};
use crate::report::{timed, CheckResult};

/// Number of (P_α⁺f, |f|) pairs per case.
pub const PAIRS: usize = 50;

pub struct Setup {
    pub grid: Arc<QuadratureGrid>,
    pub b: BergmanOperator,
}

pub fn setup(ctx: &Ctx) -> Result<Setup> {
    let grid = ctx.build_with(&sweep_grid())?;
    let b = BergmanOperator::new(&grid, &ctx.op, false)?;
    Ok(Setup { grid, b })
}

/// 16·4^{-1/p₀}.
pub fn prefactor(p0: f64) -> f64 {
    16.0 * 4f64.powf(-1.0 / p0)
}

/// Margin times the largest squared ‖P_α⁺‖ estimate on L^{p₀}(v) over the B_{p₀} corpus weights.
pub fn calibrate(ctx: &Ctx) -> Result<f64> {
    let s = setup(ctx)?;
    let whole = s.grid.whole();
    let p = ExponentField::constant(P0)?;
    let pv = p.sample(&whole)?;
    let mut best = 0.0f64;
    for v in bp0_weights(ctx)? {
        let vv = v.sample(&whole)?;
        let vd = dual_weight(&v, &p)?.sample(&whole)?;
        let corpus: Vec<Vec<f64>> = test_functions(s.grid.points(), &sweep_family(), &vd).into_iter().map(|(_, f)| f).collect();
        let e = operator_norm_estimate(&mut |f| s.b.apply_positive(f), &pv, &vv, &corpus, &whole, &ctx.norm)?.value;
        best = best.max(e.powf(P0));
    }
    Ok(ctx.fixtures.margin * best)
}

/// max over pairs of ‖P_α⁺f‖_{p,w}/(16·4^{-1/p₀}·Ĉ^{1/p₀}·‖f‖_{p,w}).
pub fn ratio_statistic(ctx: &Ctx, s: &Setup, p: &ExponentField, w: &Weight, fields: &[Vec<f64>], c_hat: f64) -> Result<f64> {
    let whole = s.grid.whole();
    let pv = p.sample(&whole)?;
    let wv = w.sample(&whole)?;
    let scale = prefactor(P0) * c_hat.powf(1.0 / P0);
    let mut worst = 0.0f64;
    for f in fields {
        let g = luxemburg_norm(f, &pv, Some(&wv), &whole, &ctx.norm)?.value;
        let pf = s.b.apply_positive(f)?;
        let n = luxemburg_norm(&pf, &pv, Some(&wv), &whole, &ctx.norm)?.value;
        if g == 0.0 {
            if n > 0.0 {
                return Err(HarnessError::Config(format!("pair with ‖G‖ = 0 and ‖F‖ = {n}")));
            }
            continue;
        }
        worst = worst.max(n / (scale * g));
    }
    Ok(worst)
}

pub fn extrapolation(ctx: &Ctx, s: &Setup, seed: u64) -> Result<Vec<CheckResult>> {
    let c_hat = ctx.fixtures.extrapolation_c;
    let fields = random_fields(s.grid.points(), PAIRS, seed);
    let mut cases = vec![(ExponentField::constant(P0)?, Weight::one())];
    cases.extend(sufficiency_cases(ctx)?.into_iter().filter(|(p, _)| !p.is_constant()));
    let mut out = Vec::new();
    for (p, w) in cases {
        let stat = ratio_statistic(ctx, s, &p, &w, &fields, c_hat)?;
        out.push(
            CheckResult::at_most(
                &format!("extrapolation[{} / {}]", p.name(), w.name()),
                "the extrapolated bound with constant 16·4^{-1/p₀}·C^{1/p₀}",
                stat,
                1.0 + 1e-3,
            )
            .value("calibrated C", c_hat)
            .grid(&sweep_grid())
            .seed(seed),
        );
    }
    Ok(out)
}

pub fn suite(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let s = setup(ctx)?;
    timed(|| extrapolation(ctx, &s, ctx.seed + 91))
}
