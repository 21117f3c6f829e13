//! B₁ factorization, the S operators and the iteration operators R and H.

use std::sync::Arc;

use varlp_core::exponent::ExponentField;
use varlp_core::geometry::enumerate_ball_family;
use varlp_core::measure::{GridField, QuadratureGrid, RegionRule};
use varlp_core::norms::luxemburg_norm;
use varlp_core::operators::{operator_norm_estimate, rdf_iterate_h, rdf_iterate_r, MaximalOperator, SOperator};
use varlp_core::weights::{b1_constant, class_constant, dual_weight, jones_factorize, ClassTag, FamilyRules, Weight, WeightTag};

use super::bergman::sufficiency_cases;
use super::classes::class_weights;
use super::{rel, Ctx};
use crate::corpus::{random_fields, test_functions};
use crate::error::Result;
use crate::report::{timed, CheckResult};

/// The constant exponent of the factorization.
pub const P0: f64 = 2.0;

/// Number of seed functions h.
pub const SEEDS: usize = 20;

/// Positive floor added to the random seed fields so that every iterate is positive.
const FLOOR: f64 = 0.05;

pub struct Setup {
    pub grid: Arc<QuadratureGrid>,
    pub whole: RegionRule,
    pub m: MaximalOperator,
}

pub fn setup(ctx: &Ctx) -> Result<Setup> {
    let grid = ctx.build()?;
    let m = MaximalOperator::new(&grid, &enumerate_ball_family(&ctx.family)?)?;
    let whole = grid.whole();
    Ok(Setup { grid, whole, m })
}

/// Corpus weights in B_{p₀}.
pub fn bp0_weights(ctx: &Ctx) -> Result<Vec<Weight>> {
    let c = Ctx { exponent: ExponentField::constant(P0)?, ..ctx.clone() };
    Ok(class_weights(&c))
}

/// Positive seed functions.
pub fn seeds(s: &Setup, count: usize, seed: u64) -> Vec<Vec<f64>> {
    random_fields(s.grid.points(), count, seed).into_iter().map(|f| f.into_iter().map(|v| v + FLOOR).collect()).collect()
}

fn field(s: &Setup, w: &Weight) -> Result<GridField> {
    Ok(GridField::new(s.grid.clone(), w.sample(&s.whole)?)?)
}

fn lq_norm(s: &Setup, f: &[f64], q: f64, ctx: &Ctx) -> Result<f64> {
    Ok(luxemburg_norm(f, &vec![q; f.len()], None, &s.whole, &ctx.norm)?.value)
}

/// Corpus estimate of ‖S‖ on unweighted L^q, q = p₀p₀'.
pub fn s_norm(ctx: &Ctx, s: &Setup, w: &Weight) -> Result<f64> {
    let so = SOperator::new(&field(s, w)?, P0)?;
    let wd = dual_weight(w, &ExponentField::constant(P0)?)?.sample(&s.whole)?;
    let corpus: Vec<Vec<f64>> = test_functions(s.grid.points(), &ctx.family, &wd).into_iter().map(|(_, f)| f).collect();
    let n = s.grid.len();
    Ok(operator_norm_estimate(&mut |f| so.apply(f, &s.m), &vec![so.q(); n], &vec![1.0; n], &corpus, &s.whole, &ctx.norm)?.value)
}

/// Corpus estimate of ‖m_α‖ on L^{p(·)}(w).
pub fn maximal_norm(ctx: &Ctx, s: &Setup, p: &ExponentField, w: &Weight) -> Result<f64> {
    let pv = p.sample(&s.whole)?;
    let wv = w.sample(&s.whole)?;
    let wd = dual_weight(w, p)?.sample(&s.whole)?;
    let corpus: Vec<Vec<f64>> = test_functions(s.grid.points(), &ctx.family, &wd).into_iter().map(|(_, f)| f).collect();
    Ok(operator_norm_estimate(&mut |f| s.m.apply(f), &pv, &wv, &corpus, &s.whole, &ctx.norm)?.value)
}

/// max_z S(t)(z)/𝓡h(z) for the last term t = S^K h/(2M̂)^K of the truncated series.
fn s_tail(so: &SOperator, s: &Setup, h: &[f64], k_max: usize, m_hat: f64, r: &[f64]) -> Result<f64> {
    let mut t: Vec<f64> = h.iter().map(|v| v.abs()).collect();
    for _ in 0..k_max {
        t = so.apply(&t, &s.m)?.into_iter().map(|v| v / (2.0 * m_hat)).collect();
    }
    let st = so.apply(&t, &s.m)?;
    Ok(st.iter().zip(r).fold(0.0f64, |a, (x, y)| a.max(x / y)))
}

/// One factorization of w from a seed h normalized in L^q.
pub struct Factored {
    pub identity: f64,
    pub b1: [f64; 2],
    pub tail: f64,
    pub bp: f64,
    pub warned: bool,
}

pub fn factor(ctx: &Ctx, s: &Setup, w: &Weight, h: &[f64], m_hat: f64, empirical: Option<f64>) -> Result<Factored> {
    let wf = field(s, w)?;
    let so = SOperator::new(&wf, P0)?;
    let n = lq_norm(s, h, so.q(), ctx)?;
    let h: Vec<f64> = h.iter().map(|v| v / n).collect();
    let k_max = ctx.op.big_k;
    let fz = jones_factorize(&wf, P0, &GridField::new(s.grid.clone(), h.clone())?, k_max, m_hat, &s.m, empirical)?;
    let prod = fz.w1.zip_map(&fz.w2, |a, b| a * b.powf(1.0 - P0))?;
    let identity = prod.values().iter().zip(wf.values()).fold(0.0f64, |a, (x, y)| a.max(rel(*x, *y)));
    let b1 = [b1_constant(&fz.w1, &s.m)?.estimate, b1_constant(&fz.w2, &s.m)?.estimate];
    let tail = s_tail(&so, s, &h, k_max, m_hat, fz.iterate.values())?;
    let rules = FamilyRules::membership(&enumerate_ball_family(&ctx.family)?, &s.grid);
    let product = Weight::sampled(prod, WeightTag::Regularized, "w1·w2^(1-p0)");
    let bp = class_constant(ClassTag::ClassicalB { q: P0 }, &product, &ExponentField::constant(P0)?, &rules, &ctx.norm)?.estimate;
    Ok(Factored { identity, b1, tail, bp, warned: fz.bound_warning.is_some() })
}

/// Factorization of each B_{p₀} corpus weight from several seeds.
pub fn factorization(ctx: &Ctx, s: &Setup, count: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let m_hat = ctx.fixtures.s_operator_c;
    let hs = seeds(s, count, seed);
    let (mut identity, mut literal, mut w1, mut w2) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut correct, mut bp_viol, mut warned, mut bp_worst) = (0usize, 0usize, 0usize, 0.0f64);
    let pc = P0 / (P0 - 1.0);
    let mut names = Vec::new();
    let mut per_weight = Vec::new();
    for w in bp0_weights(ctx)? {
        names.push(w.name().to_string());
        let mut own = 0.0f64;
        let empirical = s_norm(ctx, s, &w)?;
        for h in &hs {
            let f = factor(ctx, s, &w, h, m_hat, Some(empirical))?;
            identity = identity.max(f.identity);
            w1 = w1.max(f.b1[0]);
            w2 = w2.max(f.b1[1]);
            literal = literal.max(f.b1[0].max(f.b1[1]));
            own = own.max(f.b1[0].max(f.b1[1]));
            let base = 2.0 * m_hat + f.tail;
            if !(f.b1[0] <= base.powf(P0) * (1.0 + 1e-9)) || !(f.b1[1] <= base.powf(pc) * (1.0 + 1e-9)) {
                correct += 1;
            }
            let rhs = f.b1[0] * f.b1[1].powf(P0 - 1.0);
            bp_worst = bp_worst.max(f.bp / rhs);
            if !(f.bp <= rhs * (1.0 + 1e-9)) {
                bp_viol += 1;
            }
            warned += usize::from(f.warned);
        }
        per_weight.push((format!("max B1 for {}", w.name()), own));
    }
    let slack = 2.0 * m_hat * (-(ctx.op.big_k as f64) + 1.0).exp2();
    let literal_check = per_weight.iter().fold(
        CheckResult::at_most("factorization.b1", "the factors are B₁ weights with constant at most 2M̂", literal, 2.0 * m_hat + slack),
        |c, (k, v)| c.value(k, *v),
    );
    Ok(vec![
        CheckResult::at_most("factorization.identity", "w₁·w₂^{1-p₀} = w at every node", identity, 1e-10).seed(seed).corpus(&names),
        literal_check
            .value("max [w1]_B1", w1)
            .value("max [w2]_B1", w2)
            .value("M̂", m_hat)
            .value("bound warnings", warned as f64)
            .seed(seed),
        CheckResult::zero("factorization.b1-power", "[w₁]_{B₁} ≤ (2M̂)^{p₀} and [w₂]_{B₁} ≤ (2M̂)^{p₀'} up to the series tail", correct)
            .seed(seed),
        CheckResult::zero("factorization.product", "a product w₁w₂^{1-p} of B₁ weights lies in B_p", bp_viol)
            .value("max [w]_Bp / ([w1][w2]^(p-1))", bp_worst)
            .seed(seed),
    ])
}

/// S laws: the unit-weight substitution, sublinearity and the L^q bound through ‖m_α‖_{L^{p₀}(w)}.
pub fn s_laws(ctx: &Ctx, s: &Setup, count: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let fields = random_fields(s.grid.points(), 2 * count, seed);
    let pc = P0 / (P0 - 1.0);
    let one = SOperator::new(&GridField::constant(&s.grid, 1.0), P0)?;
    let mut unit = 0.0f64;
    for f in &fields[..count] {
        let a = one.s1(f, &s.m)?;
        let fp: Vec<f64> = f.iter().map(|v| v.powf(pc)).collect();
        let b: Vec<f64> = s.m.apply(&fp)?.into_iter().map(|v| v.powf(1.0 / pc)).collect();
        unit = unit.max(a.iter().zip(&b).fold(0.0f64, |acc, (x, y)| acc.max(rel(*x, *y))));
    }
    let (mut sub, mut bound, mut worst) = (0usize, 0usize, 0.0f64);
    for w in bp0_weights(ctx)? {
        let so = SOperator::new(&field(s, &w)?, P0)?;
        for pair in fields.chunks(2) {
            let sum: Vec<f64> = pair[0].iter().zip(&pair[1]).map(|(a, b)| a + b).collect();
            let lhs = so.apply(&sum, &s.m)?;
            let (a, b) = (so.apply(&pair[0], &s.m)?, so.apply(&pair[1], &s.m)?);
            sub += lhs.iter().zip(a.iter().zip(&b)).filter(|(l, (x, y))| !(**l <= (*x + *y) * (1.0 + 1e-12))).count();
        }
        let c = (2.0 * maximal_norm(ctx, s, &ExponentField::constant(P0)?, &w)?).powf(P0);
        for f in &fields {
            let r = lq_norm(s, &so.s1(f, &s.m)?, so.q(), ctx)? / (c.powf(1.0 / so.q()) * lq_norm(s, f, so.q(), ctx)?);
            worst = worst.max(r);
            bound += usize::from(!(r <= 1.0));
        }
    }
    Ok(vec![
        CheckResult::at_most("s-operator.unit-weight", "with w ≡ 1, S₁f = (m_α f^{p'})^{1/p'}", unit, 1e-12).seed(seed),
        CheckResult::zero("s-operator.sublinear", "S is sublinear", sub).seed(seed),
        CheckResult::zero("s-operator.lq-bound", "S₁ is bounded on L^q with constant ‖m_α‖^{p/q}", bound)
            .value("max ‖S₁f‖/(C^{1/q}‖f‖)", worst)
            .seed(seed),
    ])
}

/// Properties (a), (b), (c) of R on L^{p(·)}(w) and of H on L^{p'(·)}.
#[derive(Clone, Copy, Debug, Default)]
pub struct IterationStats {
    pub below: usize,
    pub norm_ratio: f64,
    pub b1_excess: f64,
    pub tail_excess: f64,
}

impl IterationStats {
    fn merge(&mut self, o: &IterationStats) {
        self.below += o.below;
        self.norm_ratio = self.norm_ratio.max(o.norm_ratio);
        self.b1_excess = self.b1_excess.max(o.b1_excess);
        self.tail_excess = self.tail_excess.max(o.tail_excess);
    }
}

/// [g]_{B₁}/(2M̂), and the same with m_α of the last series term removed.
fn b1_stats(s: &Setup, sum: &[f64], last: &[f64], m_hat: f64) -> Result<(f64, f64)> {
    let ms = s.m.apply(sum)?;
    let ml = s.m.apply(last)?;
    let (mut plain, mut tail) = (0.0f64, 0.0f64);
    for i in 0..sum.len() {
        plain = plain.max(ms[i] / sum[i]);
        tail = tail.max((ms[i] - ml[i]) / sum[i]);
    }
    Ok((plain / (2.0 * m_hat), tail / (2.0 * m_hat)))
}

pub fn iteration_stats(ctx: &Ctx, s: &Setup, p: &ExponentField, w: &Weight, hs: &[Vec<f64>]) -> Result<(IterationStats, IterationStats)> {
    let k_max = ctx.op.big_k;
    let pv = p.sample(&s.whole)?;
    let pd: Vec<f64> = pv.iter().map(|q| q / (q - 1.0)).collect();
    let wv = w.sample(&s.whole)?;
    let wd = dual_weight(w, p)?;
    let m_hat = ctx.op.m_hat.unwrap_or(2.0 * maximal_norm(ctx, s, p, w)?);
    let m_dual = ctx.op.m_hat.unwrap_or(2.0 * maximal_norm(ctx, s, &p.conjugate()?, &wd)?);
    let (mut r, mut h) = (IterationStats::default(), IterationStats::default());
    for f in hs {
        let rh = rdf_iterate_r(f, &s.m, k_max, m_hat)?;
        let (plain, tail) = b1_stats(s, &rh.sum, &rh.last_term, m_hat)?;
        let n0 = luxemburg_norm(f, &pv, Some(&wv), &s.whole, &ctx.norm)?.value;
        let n1 = luxemburg_norm(&rh.sum, &pv, Some(&wv), &s.whole, &ctx.norm)?.value;
        r.merge(&IterationStats {
            below: f.iter().zip(&rh.sum).filter(|(a, b)| !(a.abs() <= **b)).count(),
            norm_ratio: n1 / n0,
            b1_excess: plain,
            tail_excess: tail,
        });
        let hh = rdf_iterate_h(f, &pv, &wv, &s.m, k_max, m_dual)?;
        let lift = |v: &[f64]| -> Vec<f64> { v.iter().zip(&wv).zip(&pv).map(|((x, w), p)| x * w.powf(1.0 / p)).collect() };
        let (plain, tail) = b1_stats(s, &lift(&hh.sum), &lift(&hh.last_term), m_dual)?;
        let n0 = luxemburg_norm(f, &pd, None, &s.whole, &ctx.norm)?.value;
        let n1 = luxemburg_norm(&hh.sum, &pd, None, &s.whole, &ctx.norm)?.value;
        h.merge(&IterationStats {
            below: f.iter().zip(&hh.sum).filter(|(a, b)| !(a.abs() <= **b * (1.0 + 8.0 * f64::EPSILON))).count(),
            norm_ratio: n1 / n0,
            b1_excess: plain,
            tail_excess: tail,
        });
    }
    Ok((r, h))
}

/// Lemmas on R and H for K terms over the sufficiency cases.
pub fn iteration(ctx: &Ctx, s: &Setup, count: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let hs = seeds(s, count, seed);
    let (mut r, mut h) = (IterationStats::default(), IterationStats::default());
    for (p, w) in sufficiency_cases(ctx)? {
        let (a, b) = iteration_stats(ctx, s, &p, &w, &hs)?;
        r.merge(&a);
        h.merge(&b);
    }
    let slack = 1.0 + (-(ctx.op.big_k as f64) + 1.0).exp2();
    let tol = 2.0 + 10.0 * ctx.norm.tol;
    let mut out = Vec::new();
    for (name, st, what) in [("r", r, "Rh"), ("h", h, "Hh")] {
        out.push(CheckResult::zero(&format!("iteration.{name}.dominates"), &format!("|h| ≤ {what}"), st.below).seed(seed));
        out.push(CheckResult::at_most(&format!("iteration.{name}.norm"), &format!("‖{what}‖ ≤ 2‖h‖"), st.norm_ratio, tol).seed(seed));
        out.push(
            CheckResult::at_most(&format!("iteration.{name}.b1"), &format!("{what} gives a B₁ weight with constant 2M̂"), st.b1_excess, slack)
                .value("[.]_B1/(2M̂) without the last term", st.tail_excess)
                .seed(seed),
        );
    }
    Ok(out)
}

/// Margin times the largest ‖S‖_q estimate over the B_{p₀} corpus weights.
pub fn calibrate_s(ctx: &Ctx) -> Result<f64> {
    let s = setup(ctx)?;
    let mut best = 0.0f64;
    for w in bp0_weights(ctx)? {
        best = best.max(s_norm(ctx, &s, &w)?);
    }
    Ok(ctx.fixtures.margin * best)
}

pub fn suite(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let seed = ctx.seed;
    let s = setup(ctx)?;
    let mut out = Vec::new();
    out.extend(timed(|| s_laws(ctx, &s, 10, seed + 81))?);
    out.extend(timed(|| factorization(ctx, &s, 5, seed + 82))?);
    out.extend(timed(|| iteration(ctx, &s, SEEDS, seed + 83))?);
    Ok(out)
}
