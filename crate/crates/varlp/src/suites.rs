//! The suite registry; it doubles as the machine-readable map from suites to claims.

use serde::Serialize;

use crate::checks::{self, Ctx};
use crate::error::{HarnessError, Result};
use crate::report::CheckResult;

pub type SuiteFn = fn(&Ctx) -> Result<Vec<CheckResult>>;

#[derive(Clone, Copy)]
pub struct Suite {
    pub name: &'static str,
    pub claims: &'static [&'static str],
    pub run: SuiteFn,
}

pub const SUITES: &[Suite] = &[
    Suite {
        name: "geometry",
        claims: &["quasi-triangle inequality with constant 2", "range and symmetry of the pseudo-distance", "regularization balls sit inside relative balls"],
        run: checks::geometry::suite,
    },
    Suite {
        name: "measure",
        claims: &["total mass of the weighted measure", "measure of boundary balls grows like R^{n+α}", "lower density bound for sub-balls"],
        run: checks::measure::suite,
    },
    Suite {
        name: "exponents",
        claims: &["ball means of the exponent", "conjugate exponents", "oscillation of a log-Hölder exponent on small balls", "bounded measure powers for log-Hölder exponents"],
        run: checks::exponents::suite,
    },
    Suite {
        name: "norms",
        claims: &["Luxemburg norm agrees with constant-exponent norms", "norm-modular double inequality", "Hölder inequality with constant 2", "the associate norm is at most twice the norm", "generalized Hölder inequality"],
        run: checks::norms::suite,
    },
    Suite {
        name: "classes",
        claims: &["norms of characteristic functions", "the three boundary weight classes coincide", "the B⁺ class embeds in a constant-exponent class", "Λ class and doubling of boundary-class weights"],
        run: checks::classes::suite,
    },
    Suite {
        name: "duality",
        claims: &["the class constant is invariant under passing to the dual weight and exponent", "class constants are at least one half", "the dual of the dual weight is the weight"],
        run: checks::duality::suite,
    },
    Suite {
        name: "maximal",
        claims: &["the boundary maximal function is below the full one", "the maximal function is sublinear", "the maximal function dominates the function", "B₁ constants are at least one"],
        run: checks::maximal::suite,
    },
    Suite {
        name: "regularization",
        claims: &["the maximal function commutes with regularization up to constants", "regularization is self-adjoint up to a constant", "pointwise bound for powers of regularized normalized functions", "regularized boundary-class weights are Muckenhoupt weights", "norm transfers through the regularized weight"],
        run: checks::regularization::suite,
    },
    Suite {
        name: "bergman-sufficiency",
        claims: &["the Bergman kernel is one at the origin", "the positive operator dominates the Bergman projector", "the positive Bergman operator is bounded for class weights", "the boundary maximal function is bounded for class weights", "the main-lemma inequality holds with the measured operator norm"],
        run: checks::bergman::sufficiency_suite,
    },
    Suite {
        name: "bergman-necessity",
        claims: &["the Bergman projection of a radial profile is constant", "a twin boundary ball sees the Bergman projection of a characteristic function", "per-ball B⁺⁺ values grow geometrically for a bad weight", "the positive Bergman estimate blows up for a bad weight", "no weight is both bounded for the Bergman operator and outside the class"],
        run: checks::bergman::necessity_suite,
    },
    Suite {
        name: "factorization",
        claims: &["S is sublinear and bounded on L^q", "a B_p weight factors as w₁w₂^{1-p} with B₁ factors", "a product of B₁ weights lies in B_p", "the iteration operators dominate, double the norm at most and produce B₁ weights"],
        run: checks::factorization::suite,
    },
    Suite {
        name: "extrapolation",
        claims: &["the extrapolated bound for the positive Bergman operator with constant 16·4^{-1/p₀}·C^{1/p₀}"],
        run: checks::extrapolation::suite,
    },
];

pub fn find(name: &str) -> Result<&'static Suite> {
    SUITES.iter().find(|s| s.name == name).ok_or_else(|| HarnessError::UnknownSuite(name.to_string()))
}

pub fn run_suite(name: &str, ctx: &Ctx) -> Result<Vec<CheckResult>> {
    (find(name)?.run)(ctx)
}

#[derive(Serialize)]
pub struct PaperMapEntry {
    pub suite: &'static str,
    pub claims: &'static [&'static str],
}

pub fn paper_map() -> Vec<PaperMapEntry> {
    SUITES.iter().map(|s| PaperMapEntry { suite: s.name, claims: s.claims }).collect()
}
