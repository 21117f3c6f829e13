//! Variable exponents p(·): evaluation, region bounds, ball means, conjugation.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{dist, Point};
use crate::measure::RegionRule;

/// Relative slack allowed when validating declared bounds against rounding.
const BOUND_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentTag {
    Constant,
    Example,
    User,
    Derived,
}

#[derive(Clone)]
enum Kind {
    Constant(f64),
    /// base + amp·sin|z|
    RadialSin { base: f64, amp: f64 },
    /// base + amp·cos(arg z₁)
    AngularCos { base: f64, amp: f64 },
    Conjugate(Arc<ExponentField>),
    /// numerator / denominator
    Ratio(Arc<ExponentField>, Arc<ExponentField>),
    Func(Arc<dyn Fn(&Point) -> f64 + Send + Sync>),
}

/// A variable exponent with declared essential bounds and log-Hölder constant.
#[derive(Clone)]
pub struct ExponentField {
    kind: Kind,
    name: String,
    tag: ExponentTag,
    p_minus: f64,
    p_plus: f64,
    log_holder: Option<f64>,
    auxiliary: bool,
}

impl fmt::Debug for ExponentField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExponentField")
            .field("name", &self.name)
            .field("p_minus", &self.p_minus)
            .field("p_plus", &self.p_plus)
            .field("log_holder", &self.log_holder)
            .finish()
    }
}

impl ExponentField {
    pub fn constant(p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(invalid("constant exponent must lie in (1, ∞)"));
        }
        Ok(ExponentField {
            kind: Kind::Constant(p),
            name: alloc::format!("const({p})"),
            tag: ExponentTag::Constant,
            p_minus: p,
            p_plus: p,
            log_holder: Some(0.0),
            auxiliary: false,
        })
    }

    /// base + amp·sin|z|; the default (2, 1) is the standard example 2 + sin|z|.
    pub fn radial_sin(base: f64, amp: f64) -> Result<Self> {
        let (lo, hi) = if amp >= 0.0 { (base, base + amp * 1f64.sin()) } else { (base + amp * 1f64.sin(), base) };
        if !(lo > 1.0) {
            return Err(invalid("radial exponent must stay above 1"));
        }
        Ok(ExponentField {
            kind: Kind::RadialSin { base, amp },
            name: alloc::format!("{base}+{amp}sin|z|"),
            tag: ExponentTag::Example,
            p_minus: lo,
            p_plus: hi,
            // |sin|z| - sin|ζ|| ≤ d(z, ζ) and t·ln(e + 1/t) ≤ 3 ln(e + 1/3) on (0, 3).
            log_holder: Some(amp.abs() * 3.0 * (core::f64::consts::E + 1.0 / 3.0).ln()),
            auxiliary: false,
        })
    }

    /// base + amp·cos(arg z₁), an angular exponent.
    pub fn angular_cos(base: f64, amp: f64) -> Result<Self> {
        if !(base - amp.abs() > 1.0) {
            return Err(invalid("angular exponent must stay above 1"));
        }
        Ok(ExponentField {
            kind: Kind::AngularCos { base, amp },
            name: alloc::format!("{base}+{amp}cos(arg z)"),
            tag: ExponentTag::User,
            p_minus: base - amp.abs(),
            p_plus: base + amp.abs(),
            log_holder: None,
            auxiliary: false,
        })
    }

    /// A user exponent with declared bounds; `p_minus` must exceed 1.
    pub fn custom(
        name: &str,
        f: Arc<dyn Fn(&Point) -> f64 + Send + Sync>,
        p_minus: f64,
        p_plus: f64,
        log_holder: Option<f64>,
    ) -> Result<Self> {
        if !(p_minus > 1.0 && p_minus <= p_plus && p_plus.is_finite()) {
            return Err(invalid("declared bounds must satisfy 1 < p_minus ≤ p_plus < ∞"));
        }
        Ok(ExponentField {
            kind: Kind::Func(f),
            name: name.to_string(),
            tag: ExponentTag::User,
            p_minus,
            p_plus,
            log_holder,
            auxiliary: false,
        })
    }

    /// An auxiliary exponent (p_minus > 0 only), such as p'(·)/p(·).
    pub fn auxiliary(name: &str, f: Arc<dyn Fn(&Point) -> f64 + Send + Sync>, p_minus: f64, p_plus: f64) -> Result<Self> {
        if !(p_minus > 0.0 && p_minus <= p_plus && p_plus.is_finite()) {
            return Err(invalid("auxiliary bounds must satisfy 0 < p_minus ≤ p_plus < ∞"));
        }
        Ok(ExponentField {
            kind: Kind::Func(f),
            name: name.to_string(),
            tag: ExponentTag::Derived,
            p_minus,
            p_plus,
            log_holder: None,
            auxiliary: true,
        })
    }

    /// The auxiliary exponent num(·)/den(·).
    pub fn ratio(num: &ExponentField, den: &ExponentField) -> Result<Self> {
        let lo = num.p_minus / den.p_plus;
        let hi = num.p_plus / den.p_minus;
        Ok(ExponentField {
            kind: Kind::Ratio(Arc::new(num.clone()), Arc::new(den.clone())),
            name: alloc::format!("({})/({})", num.name, den.name),
            tag: ExponentTag::Derived,
            p_minus: lo,
            p_plus: hi,
            log_holder: None,
            auxiliary: true,
        })
    }

    /// The conjugate p'(·) = p/(p - 1).
    pub fn conjugate(&self) -> Result<Self> {
        if !(self.p_minus > 1.0) {
            return Err(invalid("conjugate needs p_minus > 1"));
        }
        if let Kind::Conjugate(inner) = &self.kind {
            return Ok((**inner).clone());
        }
        let kind = match self.kind {
            Kind::Constant(p) => Kind::Constant(p / (p - 1.0)),
            _ => Kind::Conjugate(Arc::new(self.clone())),
        };
        Ok(ExponentField {
            kind,
            name: alloc::format!("({})'", self.name),
            tag: if self.tag == ExponentTag::Constant { ExponentTag::Constant } else { ExponentTag::Derived },
            p_minus: self.p_plus / (self.p_plus - 1.0),
            p_plus: self.p_minus / (self.p_minus - 1.0),
            log_holder: self.log_holder.map(|c| c / ((self.p_minus - 1.0) * (self.p_minus - 1.0))),
            auxiliary: self.auxiliary,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tag(&self) -> ExponentTag {
        self.tag
    }

    pub fn declared_p_minus(&self) -> f64 {
        self.p_minus
    }

    pub fn declared_p_plus(&self) -> f64 {
        self.p_plus
    }

    pub fn declared_log_holder(&self) -> Option<f64> {
        self.log_holder
    }

    pub fn is_auxiliary(&self) -> bool {
        self.auxiliary
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, Kind::Constant(_))
    }

    /// Value without bound validation.
    fn raw(&self, z: &Point) -> f64 {
        match &self.kind {
            Kind::Constant(p) => *p,
            Kind::RadialSin { base, amp } => base + amp * z.norm().sin(),
            Kind::AngularCos { base, amp } => base + amp * if z.norm() == 0.0 { 1.0 } else { z.arg().cos() },
            Kind::Conjugate(inner) => {
                let p = inner.raw(z);
                p / (p - 1.0)
            }
            Kind::Ratio(a, b) => a.raw(z) / b.raw(z),
            Kind::Func(f) => f(z),
        }
    }

    fn check(&self, v: f64, node: usize) -> Result<f64> {
        let lo = self.p_minus * (1.0 - BOUND_SLACK);
        let hi = self.p_plus * (1.0 + BOUND_SLACK);
        if !(v >= lo && v <= hi) {
            return Err(Error::ExponentOutOfBounds { node, value: v, lo: self.p_minus, hi: self.p_plus });
        }
        Ok(v)
    }

    /// p(z), validated against the declared bounds.
    pub fn eval(&self, z: &Point) -> Result<f64> {
        self.check(self.raw(z), 0)
    }

    /// Values at the nodes of a rule, validated.
    pub fn sample(&self, rule: &RegionRule) -> Result<Vec<f64>> {
        self.sample_points(&rule.points)
    }

    pub fn sample_points(&self, points: &[Point]) -> Result<Vec<f64>> {
        points.iter().enumerate().map(|(i, z)| self.check(self.raw(z), i)).collect()
    }
}

/// (p_−(E), p_+(E)) as min/max over the region's nodes.
pub fn bounds_on(p: &ExponentField, rule: &RegionRule) -> Result<(f64, f64)> {
    let v = p.sample(rule)?;
    bounds_of(&v)
}

pub fn bounds_of(v: &[f64]) -> Result<(f64, f64)> {
    if v.is_empty() {
        return Err(Error::EmptyRegion);
    }
    Ok(v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(*x), b.max(*x))))
}

/// p_B = (average of 1/p over B)^{-1}.
pub fn harmonic_mean_exponent(p: &ExponentField, rule: &RegionRule) -> Result<f64> {
    harmonic_mean_of(&p.sample(rule)?, rule)
}

pub fn harmonic_mean_of(p: &[f64], rule: &RegionRule) -> Result<f64> {
    let mu = rule.measure();
    if !(mu > 0.0) {
        return Err(Error::EmptyRegion);
    }
    let inv: Vec<f64> = p.iter().map(|x| 1.0 / x).collect();
    Ok(mu / rule.integrate_values(&inv)?)
}

/// ⟨p⟩_B, the μ_α-average of p over B.
pub fn mean_exponent(p: &ExponentField, rule: &RegionRule) -> Result<f64> {
    mean_of(&p.sample(rule)?, rule)
}

pub fn mean_of(p: &[f64], rule: &RegionRule) -> Result<f64> {
    let mu = rule.measure();
    if !(mu > 0.0) {
        return Err(Error::EmptyRegion);
    }
    Ok(rule.integrate_values(p)? / mu)
}

/// The conjugate exponent field.
pub fn conjugate(p: &ExponentField) -> Result<ExponentField> {
    p.conjugate()
}

/// sup over pairs of |p(z) - p(ζ)|·ln(e + 1/d(z, ζ)); a lower bound for the log-Hölder constant.
pub fn log_holder_estimate(p: &ExponentField, pairs: &[(Point, Point)]) -> Result<f64> {
    let mut best = 0.0f64;
    for (z, w) in pairs {
        let d = dist(z, w);
        if d == 0.0 {
            continue;
        }
        let diff = (p.eval(z)? - p.eval(w)?).abs();
        best = best.max(diff * (core::f64::consts::E + 1.0 / d).ln());
    }
    Ok(best)
}

/// Seeded pair sampler mixing independent pairs with close pairs at dyadic separations.
pub fn sample_pairs(count: usize, seed: u64) -> Vec<(Point, Point)> {
    use rand::Rng;
    let mut rng = crate::numeric::seeded(seed);
    let mut out = Vec::with_capacity(count);
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| -> Point {
        let gap: f64 = libm::exp2(-rng.gen_range(0.0..12.0));
        Point::polar(gap.min(1.0), rng.gen_range(0.0..core::f64::consts::TAU)).expect("gap in (0,1]")
    };
    for k in 0..count {
        let z = draw(&mut rng);
        let w = if k % 2 == 0 {
            draw(&mut rng)
        } else {
            let scale = libm::exp2(-rng.gen_range(1.0..20.0));
            let g = (z.gap() * (1.0 + scale * rng.gen_range(-1.0..1.0))).clamp(1e-300, 1.0);
            Point::polar(g, z.arg() + scale * rng.gen_range(-1.0..1.0)).expect("gap in (0,1]")
        };
        out.push((z, w));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{build_grid, GridSpec, MeasureParams, Region};

    #[test]
    fn constant_conjugates() {
        let p = ExponentField::constant(3.0).unwrap();
        let q = p.conjugate().unwrap();
        let z = Point::c1(0.2, 0.1).unwrap();
        assert!((q.eval(&z).unwrap() - 1.5).abs() < 1e-15);
        assert!((q.conjugate().unwrap().eval(&z).unwrap() - 3.0).abs() < 1e-14);
        assert!(ExponentField::constant(1.0).is_err());
    }

    #[test]
    fn radial_mean_oracle() {
        let g = build_grid(MeasureParams::new(1.0, 1).unwrap(), &GridSpec::default()).unwrap();
        let p = ExponentField::radial_sin(2.0, 1.0).unwrap();
        let rule = g.adapted(&Region::Whole).unwrap();
        let m = mean_exponent(&p, &rule).unwrap();
        let exact = 2.0 + 2.0 * (1f64.sin() - 1f64.cos());
        assert!((m - exact).abs() < 1e-6, "{m} vs {exact}");
        let (lo, hi) = bounds_on(&p, &rule).unwrap();
        assert!((lo - 2.0).abs() < 2e-2 && (hi - 2.0 - 1f64.sin()).abs() < 1e-3);
        assert!(harmonic_mean_exponent(&p, &rule).unwrap() <= m);
    }

    #[test]
    fn bound_violation_is_hard_error() {
        let f: Arc<dyn Fn(&Point) -> f64 + Send + Sync> = Arc::new(|z: &Point| 1.5 + z.norm());
        let p = ExponentField::custom("bad", f, 1.5, 2.0, None).unwrap();
        assert!(p.eval(&Point::c1(0.9, 0.0).unwrap()).is_err());
    }
}
