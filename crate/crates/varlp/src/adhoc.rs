//! Single computations behind `varlp norm`, `varlp constant` and `varlp op`.

use serde::Serialize;
use varlp_core::geometry::{enumerate_ball_family, BallSummary, Point};
use varlp_core::norms::luxemburg_norm;
use varlp_core::operators::{BergmanOperator, MaximalOperator, Regularizer};
use varlp_core::weights::{b1_constant, class_constant, ClassTag, FamilyRules};

use crate::checks::classes::family_rules;
use crate::checks::Ctx;
use crate::corpus::tent;
use crate::error::{HarnessError, Result};

/// A test function named `family:p1,p2,...`.
#[derive(Clone, Debug, PartialEq)]
pub enum Function {
    Constant(f64),
    /// (1-|z|²)^β
    Power(f64),
    /// A tent of radius r at (x, y).
    Tent(f64, f64, f64),
}

impl Function {
    pub fn parse(text: &str) -> Result<Self> {
        let (family, rest) = text.split_once(':').unwrap_or((text, ""));
        let params: Vec<f64> = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|_| HarnessError::Config(format!("bad number `{s}` in `{text}`"))))
                .collect::<Result<_>>()?
        };
        let arity = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(HarnessError::Config(format!("`{family}` takes {n} parameter(s), got {}", params.len())))
            }
        };
        match family {
            "const" => arity(1).map(|_| Function::Constant(params[0])),
            "power" => arity(1).map(|_| Function::Power(params[0])),
            "tent" => {
                arity(3)?;
                if !(params[2] > 0.0) {
                    return Err(HarnessError::Config("tent radius must be positive".into()));
                }
                Point::c1(params[0], params[1])?;
                Ok(Function::Tent(params[0], params[1], params[2]))
            }
            other => Err(HarnessError::Config(format!("unknown function family `{other}`; use const, power or tent"))),
        }
    }

    pub fn sample(&self, points: &[Point]) -> Result<Vec<f64>> {
        Ok(match self {
            Function::Constant(c) => vec![*c; points.len()],
            Function::Power(b) => points.iter().map(|z| z.depth().powf(*b)).collect(),
            Function::Tent(x, y, r) => {
                let c = Point::c1(*x, *y)?;
                points.iter().map(|z| tent(&c, *r, z)).collect()
            }
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormSummary {
    pub exponent: String,
    pub weight: String,
    pub norm: f64,
    pub modular_at_norm: f64,
    pub iterations: u32,
}

/// ‖f‖_{p(·),w} on the configured grid.
pub fn norm(ctx: &Ctx, f: &Function) -> Result<NormSummary> {
    let g = ctx.build()?;
    let whole = g.whole();
    let fv = f.sample(g.points())?;
    let r = luxemburg_norm(&fv, &ctx.exponent.sample(&whole)?, Some(&ctx.weight.sample(&whole)?), &whole, &ctx.norm)?;
    Ok(NormSummary {
        exponent: ctx.exponent.name().to_string(),
        weight: ctx.weight.name().to_string(),
        norm: r.value,
        modular_at_norm: r.modular_at_value,
        iterations: r.iterations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantSummary {
    pub class: String,
    pub estimate: f64,
    pub balls: usize,
    pub argmax_ball: Option<BallSummary>,
}

pub fn parse_class(name: &str, q: Option<f64>) -> Result<ClassTag> {
    Ok(match name {
        "bekolle" => ClassTag::Bekolle,
        "muckenhoupt" => ClassTag::Muckenhoupt,
        "bplus" => ClassTag::BPlus,
        "bplusplus" => ClassTag::BPlusPlus,
        "b1" => ClassTag::B1,
        "classical" => ClassTag::ClassicalB { q: q.ok_or_else(|| HarnessError::Config("`classical` needs --q".into()))? },
        other => return Err(HarnessError::Config(format!("unknown class `{other}`"))),
    })
}

/// The class constant of the configured weight and exponent over the configured family.
pub fn constant(ctx: &Ctx, class: ClassTag) -> Result<ConstantSummary> {
    let g = ctx.build()?;
    let name = format!("{class:?}");
    if class == ClassTag::B1 {
        let m = MaximalOperator::new(&g, &enumerate_ball_family(&ctx.family)?)?;
        let w = varlp_core::measure::GridField::new(g.clone(), ctx.weight.sample(&g.whole())?)?;
        let r = b1_constant(&w, &m)?;
        return Ok(ConstantSummary { class: name, estimate: r.estimate, balls: m.ball_count(), argmax_ball: None });
    }
    let rules: FamilyRules = match class {
        ClassTag::Muckenhoupt => family_rules(&g, &ctx.family.all_balls())?,
        _ => family_rules(&g, &ctx.family)?,
    };
    let r = class_constant(class, &ctx.weight, &ctx.exponent, &rules, &ctx.norm)?;
    Ok(ConstantSummary {
        class: name,
        estimate: r.estimate,
        balls: rules.len(),
        argmax_ball: r.argmax_ball,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OpSummary {
    pub operator: String,
    pub input_norm: f64,
    pub output_norm: f64,
    pub ratio: f64,
}

/// ‖Tf‖_{p(·),w}/‖f‖_{p(·),w} for one operator and one function.
pub fn op(ctx: &Ctx, name: &str, f: &Function) -> Result<OpSummary> {
    let g = ctx.build()?;
    let whole = g.whole();
    let fv = f.sample(g.points())?;
    let tf = match name {
        "maximal" => MaximalOperator::new(&g, &enumerate_ball_family(&ctx.family)?)?.apply(&fv)?,
        "regularize" => Regularizer::new(&g, ctx.op.k)?.apply(&fv)?,
        "bergman-positive" => BergmanOperator::new(&g, &ctx.op, false)?.apply_positive(&fv)?,
        "bergman" => BergmanOperator::new(&g, &ctx.op, true)?.apply(&fv)?.into_iter().map(|c| c.norm()).collect(),
        other => {
            return Err(HarnessError::Config(format!(
                "unknown operator `{other}`; use maximal, regularize, bergman or bergman-positive"
            )))
        }
    };
    let pv = ctx.exponent.sample(&whole)?;
    let wv = ctx.weight.sample(&whole)?;
    let a = luxemburg_norm(&fv, &pv, Some(&wv), &whole, &ctx.norm)?.value;
    let b = luxemburg_norm(&tf, &pv, Some(&wv), &whole, &ctx.norm)?.value;
    Ok(OpSummary { operator: name.to_string(), input_norm: a, output_norm: b, ratio: b / a })
}
