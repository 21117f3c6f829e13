//! Check implementations grouped by suite.
//!
//! Every check returns [`CheckResult`]s whose `paper_ref` names the claim in words.

use std::sync::Arc;

use varlp_core::exponent::ExponentField;
use varlp_core::geometry::FamilyDescriptor;
use varlp_core::measure::{build_grid, GridSpec, MeasureParams, QuadratureGrid};
use varlp_core::norms::NormOptions;
use varlp_core::operators::OperatorConfig;
use varlp_core::weights::Weight;

use crate::config::{parse_exponent, parse_weight, ExperimentConfig};
use crate::error::Result;
use crate::fixtures::Fixtures;

pub mod bergman;
pub mod classes;
pub mod duality;
pub mod exponents;
pub mod extrapolation;
pub mod factorization;
pub mod geometry;
pub mod maximal;
pub mod measure;
pub mod norms;
pub mod regularization;

/// Everything a check needs: resolution, the primary exponent and weight, seeds and frozen constants.
#[derive(Clone)]
pub struct Ctx {
    pub params: MeasureParams,
    pub grid: GridSpec,
    pub family: FamilyDescriptor,
    pub exponent: ExponentField,
    pub weight: Weight,
    pub norm: NormOptions,
    pub op: OperatorConfig,
    pub seed: u64,
    pub fixtures: Fixtures,
}

impl Ctx {
    pub fn from_config(cfg: &ExperimentConfig, fixtures: Fixtures, refine: bool) -> Result<Self> {
        let mut ctx = Ctx {
            params: cfg.params()?,
            grid: cfg.grid_spec(),
            family: cfg.family(),
            exponent: parse_exponent(&cfg.exponent)?,
            weight: parse_weight(&cfg.weight)?,
            norm: cfg.norm_options(),
            op: cfg.operator(),
            seed: cfg.seed,
            fixtures,
        };
        if refine {
            ctx.grid = ctx.grid.refined();
            ctx.family = ctx.family.refined();
        }
        Ok(ctx)
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Ok(Ctx { params: MeasureParams::new(alpha, self.params.dim)?, ..self.clone() })
    }

    pub fn build(&self) -> Result<Arc<QuadratureGrid>> {
        Ok(build_grid(self.params, &self.grid)?)
    }

    pub fn build_with(&self, spec: &GridSpec) -> Result<Arc<QuadratureGrid>> {
        Ok(build_grid(self.params, spec)?)
    }
}

/// Relative difference |a - b| / max(|a|, |b|), zero when both vanish.
pub fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

/// Growth ratio of an estimate under one refinement step.
pub fn growth(coarse: f64, fine: f64) -> f64 {
    fine / coarse
}

/// Estimates within 10% under one refinement step count as stable.
pub const STABILITY: f64 = 1.10;
