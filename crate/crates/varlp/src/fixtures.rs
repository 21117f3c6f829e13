//! Frozen calibrated constants.
//!
//! `varlp calibrate` computes every constant on a calibration seed and family,
//! multiplies it by the margin and writes this file; verification runs only read it.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{io_err, HarnessError, Result};

pub const BUNDLED: &str = include_str!("../fixtures/calibration.json");

/// Power-law lower bound μ_α(B) ≥ c·R^γ fitted over 𝓑-balls.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityFit {
    pub c: f64,
    pub gamma: f64,
}

impl Default for DensityFit {
    fn default() -> Self {
        DensityFit { c: 0.0, gamma: 1.0 }
    }
}

/// Working distance factor and lower bound of the twin-ball search for one α.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TwinFixture {
    pub alpha: f64,
    pub kappa: f64,
    pub c_alpha: f64,
}

/// Power weights (1-|z|²)^γ classified by the dyadic slope probe for one exponent.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PowerClasses {
    pub exponent: String,
    pub alpha: f64,
    pub good: Vec<f64>,
    pub bad: Vec<f64>,
    pub inconclusive: Vec<f64>,
}

impl PowerClasses {
    /// Smallest positive good γ.
    pub fn probe_good(&self) -> Option<f64> {
        self.good.iter().copied().filter(|g| *g > 0.0).reduce(f64::min)
    }

    /// The most negative and the most positive bad γ.
    pub fn probe_bad(&self) -> Vec<f64> {
        let lo = self.bad.iter().copied().filter(|g| *g < 0.0).reduce(f64::min);
        let hi = self.bad.iter().copied().filter(|g| *g > 0.0).reduce(f64::max);
        lo.into_iter().chain(hi).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Fixtures {
    pub schema_version: u32,
    #[serde(deserialize_with = "nullable")]
    pub margin: f64,
    pub calibration_seed: u64,
    pub density: DensityFit,
    /// Generalized Hölder constant.
    #[serde(deserialize_with = "nullable")]
    pub holder_k: f64,
    /// [w]_{B_q} ≤ c·[w]_{B⁺} with q = p₊ + 3/2.
    #[serde(deserialize_with = "nullable")]
    pub embedding_c: f64,
    /// [w]_{B⁺⁺} ≤ c·max(1, [w]_B^{p₊}).
    #[serde(deserialize_with = "nullable")]
    pub equivalence_c: f64,
    /// w(2B) ≤ c·w(B) for corpus weights.
    #[serde(deserialize_with = "nullable")]
    pub doubling_c: f64,
    /// Commutation of m_α with R_k.
    #[serde(deserialize_with = "nullable")]
    pub commutation_c: f64,
    /// ∫ f R_k g ≤ c ∫ g R_k f.
    #[serde(deserialize_with = "nullable")]
    pub self_adjoint_c: f64,
    /// (R_k g)^p ≤ c (R_k g^p + 1).
    #[serde(deserialize_with = "nullable")]
    pub pointwise_c: f64,
    /// [R_k w]_A ≤ c·[w]_B.
    #[serde(deserialize_with = "nullable")]
    pub transfer_c: f64,
    #[serde(deserialize_with = "nullable")]
    pub norm_transfer_c: f64,
    #[serde(deserialize_with = "nullable")]
    pub dual_transfer_c: f64,
    pub twin: Vec<TwinFixture>,
    /// Characteristic-function ratio against c·‖P_α⁺‖.
    #[serde(deserialize_with = "nullable")]
    pub main_lemma_c: f64,
    /// Squared L²(v) bound of P_α⁺ over the calibration weights of B_2.
    #[serde(deserialize_with = "nullable")]
    pub extrapolation_c: f64,
    /// Ratio ‖S₁f‖_q/‖f‖_q over the calibration corpus.
    #[serde(deserialize_with = "nullable")]
    pub s_operator_c: f64,
    pub power_classes: Vec<PowerClasses>,
}

/// Uncalibrated constants serialize as `null` and read back as NaN.
fn nullable<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

impl Default for Fixtures {
    fn default() -> Self {
        Fixtures {
            schema_version: 1,
            margin: 2.0,
            calibration_seed: 7_001,
            density: DensityFit::default(),
            holder_k: f64::NAN,
            embedding_c: f64::NAN,
            equivalence_c: f64::NAN,
            doubling_c: f64::NAN,
            commutation_c: f64::NAN,
            self_adjoint_c: f64::NAN,
            pointwise_c: f64::NAN,
            transfer_c: f64::NAN,
            norm_transfer_c: f64::NAN,
            dual_transfer_c: f64::NAN,
            twin: Vec::new(),
            main_lemma_c: f64::NAN,
            extrapolation_c: f64::NAN,
            s_operator_c: f64::NAN,
            power_classes: Vec::new(),
        }
    }
}

impl Fixtures {
    pub fn bundled() -> Result<Self> {
        Self::parse(BUNDLED)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HarnessError::Fixtures(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path).map_err(io_err(path))?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        crate::report::write_atomic(path, text.as_bytes())
    }

    pub fn twin_for(&self, alpha: f64) -> Option<TwinFixture> {
        self.twin.iter().copied().find(|t| (t.alpha - alpha).abs() < 1e-12)
    }

    pub fn classes_for(&self, exponent: &str, alpha: f64) -> Option<&PowerClasses> {
        self.power_classes.iter().find(|c| c.exponent == exponent && (c.alpha - alpha).abs() < 1e-12)
    }
}
