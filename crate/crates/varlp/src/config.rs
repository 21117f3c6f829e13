//! Experiment configuration file (TOML with dotted keys).
//!
//! ```toml
//! alpha = 1.0
//! quad.radial = 12
//! quad.angular = 64
//! centers.radial_levels = 6
//! exponent.family = "radial-sin"
//! exponent.params = [2.0, 1.0]
//! op.K = 8
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use varlp_core::exponent::ExponentField;
use varlp_core::geometry::FamilyDescriptor;
use varlp_core::measure::{GridSpec, MeasureParams, Scheme};
use varlp_core::norms::NormOptions;
use varlp_core::operators::OperatorConfig;
use varlp_core::weights::Weight;

use crate::error::{io_err, HarnessError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadConfig {
    pub scheme: Scheme,
    /// Graded radial panels.
    pub radial: usize,
    pub points: usize,
    pub angular: usize,
    pub grading: Option<f64>,
    pub ball_angular: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        let g = GridSpec::default();
        QuadConfig {
            scheme: g.scheme,
            radial: g.levels,
            points: g.points,
            angular: g.angular,
            grading: g.grading,
            ball_angular: g.ball_angular,
            samples: g.samples,
            seed: g.seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CentersConfig {
    pub radial_levels: usize,
    pub angular_count: usize,
}

impl Default for CentersConfig {
    fn default() -> Self {
        let d = FamilyDescriptor::default();
        CentersConfig { radial_levels: d.radial_levels, angular_count: d.angular_count }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadiiConfig {
    pub count: usize,
    pub start: f64,
}

impl Default for RadiiConfig {
    fn default() -> Self {
        let d = FamilyDescriptor::default();
        RadiiConfig { count: d.radius_count, start: d.radius_start }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSelector {
    pub family: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NormConfig {
    pub tol: f64,
    pub max_doublings: u32,
}

impl Default for NormConfig {
    fn default() -> Self {
        let o = NormOptions::default();
        NormConfig { tol: o.tol, max_doublings: o.max_doublings }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OpConfig {
    pub k: f64,
    #[serde(rename = "K")]
    pub big_k: usize,
    #[serde(rename = "Mhat")]
    pub m_hat: Option<f64>,
    pub kernel_eta_factor: f64,
    pub refine_depth: usize,
}

impl Default for OpConfig {
    fn default() -> Self {
        let o = OperatorConfig::default();
        OpConfig { k: o.k, big_k: o.big_k, m_hat: o.m_hat, kernel_eta_factor: o.eta_factor, refine_depth: o.refine_depth }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub suite: Option<String>,
    pub alpha: f64,
    pub dim: usize,
    pub seed: u64,
    pub class_b_only: bool,
    pub quad: QuadConfig,
    pub centers: CentersConfig,
    pub radii: RadiiConfig,
    pub exponent: FieldSelector,
    pub weight: FieldSelector,
    pub norm: NormConfig,
    pub op: OpConfig,
    /// Frozen calibration constants; the bundled file when absent.
    pub fixtures: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            suite: None,
            alpha: 1.0,
            dim: 1,
            seed: 1,
            class_b_only: true,
            quad: QuadConfig::default(),
            centers: CentersConfig::default(),
            radii: RadiiConfig::default(),
            exponent: FieldSelector { family: "radial-sin".into(), params: vec![2.0, 1.0] },
            weight: FieldSelector { family: "one".into(), params: vec![] },
            norm: NormConfig::default(),
            op: OpConfig::default(),
            fixtures: None,
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        MeasureParams::new(self.alpha, self.dim)?;
        self.operator().validate()?;
        if !(self.norm.tol > 0.0 && self.norm.tol < 1e-2) {
            return Err(HarnessError::Config("norm.tol must lie in (0, 1e-2)".into()));
        }
        parse_exponent(&self.exponent)?;
        parse_weight(&self.weight)?;
        if self.dim >= 2 && self.quad.scheme == Scheme::PolarTensor {
            return Err(HarnessError::Config("dimension two requires quad.scheme = \"monte-carlo\"".into()));
        }
        Ok(())
    }

    pub fn params(&self) -> Result<MeasureParams> {
        Ok(MeasureParams::new(self.alpha, self.dim)?)
    }

    pub fn grid_spec(&self) -> GridSpec {
        GridSpec {
            scheme: self.quad.scheme,
            levels: self.quad.radial,
            points: self.quad.points,
            angular: self.quad.angular,
            grading: self.quad.grading,
            ball_angular: self.quad.ball_angular,
            samples: self.quad.samples,
            seed: self.quad.seed,
        }
    }

    pub fn family(&self) -> FamilyDescriptor {
        FamilyDescriptor {
            dim: self.dim,
            radial_levels: self.centers.radial_levels,
            angular_count: self.centers.angular_count,
            radius_start: self.radii.start,
            radius_count: self.radii.count,
            class_b_only: self.class_b_only,
            seed: self.seed,
        }
    }

    pub fn norm_options(&self) -> NormOptions {
        NormOptions { tol: self.norm.tol, max_doublings: self.norm.max_doublings }
    }

    pub fn operator(&self) -> OperatorConfig {
        OperatorConfig {
            k: self.op.k,
            big_k: self.op.big_k,
            m_hat: self.op.m_hat,
            eta_factor: self.op.kernel_eta_factor,
            refine_depth: self.op.refine_depth,
        }
    }
}

fn want(sel: &FieldSelector, n: usize) -> Result<()> {
    if sel.params.len() != n {
        return Err(HarnessError::Config(format!("`{}` takes {n} parameter(s), got {}", sel.family, sel.params.len())));
    }
    Ok(())
}

pub fn parse_exponent(sel: &FieldSelector) -> Result<ExponentField> {
    let p = &sel.params;
    Ok(match sel.family.as_str() {
        "constant" => {
            want(sel, 1)?;
            ExponentField::constant(p[0])?
        }
        "radial-sin" => {
            want(sel, 2)?;
            ExponentField::radial_sin(p[0], p[1])?
        }
        "angular-cos" => {
            want(sel, 2)?;
            ExponentField::angular_cos(p[0], p[1])?
        }
        other => return Err(HarnessError::Config(format!("unknown exponent family `{other}`"))),
    })
}

pub fn parse_weight(sel: &FieldSelector) -> Result<Weight> {
    let p = &sel.params;
    Ok(match sel.family.as_str() {
        "one" => {
            want(sel, 0)?;
            Weight::one()
        }
        "constant" => {
            want(sel, 1)?;
            Weight::constant(p[0])?
        }
        "power" => {
            want(sel, 1)?;
            Weight::power(p[0])
        }
        "angular" => {
            want(sel, 1)?;
            Weight::angular(p[0])?
        }
        "power-angular" => {
            want(sel, 2)?;
            Weight::product(vec![Weight::power(p[0]), Weight::angular(p[1])?])
        }
        other => return Err(HarnessError::Config(format!("unknown weight family `{other}`"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dotted_keys_parse() {
        let cfg = ExperimentConfig::from_toml(
            "alpha = 2.0\nquad.radial = 10\nop.K = 4\nop.Mhat = 3.0\nexponent.family = \"constant\"\nexponent.params = [3.0]\n",
        )
        .unwrap();
        assert_eq!(cfg.alpha, 2.0);
        assert_eq!(cfg.quad.radial, 10);
        assert_eq!(cfg.op.big_k, 4);
        assert_eq!(cfg.op.m_hat, Some(3.0));
        assert_eq!(cfg.grid_spec().levels, 10);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ExperimentConfig::from_toml("quad.radials = 3\n").is_err());
        assert!(ExperimentConfig::from_toml("colour = 1\n").is_err());
        assert!(ExperimentConfig::from_toml("op.k = 0.7\n").is_err());
        assert!(ExperimentConfig::from_toml("weight.family = \"power\"\n").is_err());
    }
}
