use std::f64::consts::PI;

use proptest::prelude::*;
use varlp_core::geometry::{Point, PseudoBall};
use varlp_core::measure::{build_grid, mu_alpha, GridSpec, MeasureParams, QuadratureGrid};
use varlp_core::norms::{luxemburg_norm, modular, sandwich, NormOptions};
use std::sync::Arc;

fn grid(alpha: f64) -> Arc<QuadratureGrid> {
    build_grid(MeasureParams::new(alpha, 1).unwrap(), &GridSpec { levels: 8, points: 6, angular: 32, ..GridSpec::default() }).unwrap()
}

fn opts() -> NormOptions {
    NormOptions { tol: 1e-12, ..NormOptions::default() }
}

/// ∫_{|z|<r} (1-|z|²)^{α-1} dA = π(1 - (1-r²)^α)/α.
fn disk_mass(alpha: f64, r: f64) -> f64 {
    PI * (1.0 - (1.0 - r * r).powf(alpha)) / alpha
}

#[test]
fn total_mass_matches_closed_form() {
    for alpha in [0.5, 1.0, 2.0] {
        let g = grid(alpha);
        let m = g.whole().measure();
        assert!((m - PI / alpha).abs() / (PI / alpha) < 1e-6, "alpha {alpha}: {m}");
        assert!((MeasureParams::new(alpha, 1).unwrap().total_mass() - PI / alpha).abs() < 1e-12);
    }
}

#[test]
fn centered_disk_mass() {
    for alpha in [0.5, 1.0, 2.0] {
        let g = grid(alpha);
        let b = PseudoBall::new(Point::origin(1).unwrap(), 0.5).unwrap();
        let m = mu_alpha(&b.into(), &g).unwrap();
        assert!((m - disk_mass(alpha, 0.5)).abs() / disk_mass(alpha, 0.5) < 1e-3, "alpha {alpha}: {m}");
    }
}

#[test]
fn constant_exponent_norm_of_a_constant() {
    let g = grid(1.0);
    let whole = g.whole();
    for p in [1.5, 2.0, 3.0] {
        let f = vec![2.0; g.len()];
        let n = luxemburg_norm(&f, &vec![p; g.len()], None, &whole, &opts()).unwrap().value;
        let exact = 2.0 * PI.powf(1.0 / p);
        assert!((n - exact).abs() / exact < 1e-8, "p {p}: {n} vs {exact}");
    }
}

fn field(g: &QuadratureGrid, a: f64, b: f64, c: f64) -> Vec<f64> {
    g.points().iter().map(|z| a + b * z.depth().powf(c) + (z.arg() * 3.0).cos().abs() * b).collect()
}

fn exponent(g: &QuadratureGrid, base: f64, amp: f64) -> Vec<f64> {
    g.points().iter().map(|z| base + amp * z.norm().sin()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn modular_is_one_at_the_norm(a in 0.0f64..2.0, b in 0.01f64..3.0, c in -0.3f64..2.0, base in 1.2f64..3.0, amp in 0.0f64..1.0) {
        let g = grid(1.0);
        let whole = g.whole();
        let f = field(&g, a, b, c);
        let p = exponent(&g, base, amp);
        let n = luxemburg_norm(&f, &p, None, &whole, &opts()).unwrap().value;
        let scaled: Vec<f64> = f.iter().map(|v| v / n).collect();
        let rho = modular(&scaled, &p, None, &whole).unwrap();
        prop_assert!((rho - 1.0).abs() < 1e-8);
    }

    #[test]
    fn homogeneous_and_monotone(a in 0.0f64..2.0, b in 0.01f64..3.0, c in -0.3f64..2.0, lambda in 0.01f64..100.0, base in 1.2f64..3.0) {
        let g = grid(1.0);
        let whole = g.whole();
        let f = field(&g, a, b, c);
        let p = exponent(&g, base, 0.8);
        let n = luxemburg_norm(&f, &p, None, &whole, &opts()).unwrap().value;
        let lf: Vec<f64> = f.iter().map(|v| v * lambda).collect();
        let ln = luxemburg_norm(&lf, &p, None, &whole, &opts()).unwrap().value;
        prop_assert!((ln - lambda * n).abs() <= 1e-9 * lambda * n);
        let half: Vec<f64> = f.iter().map(|v| v * 0.5).collect();
        prop_assert!(luxemburg_norm(&half, &p, None, &whole, &opts()).unwrap().value <= n);
    }

    #[test]
    fn norm_modular_sandwich(a in 0.0f64..2.0, b in 0.01f64..3.0, c in -0.3f64..2.0, base in 1.2f64..3.0, amp in 0.0f64..1.0) {
        let g = grid(1.0);
        let whole = g.whole();
        let f = field(&g, a, b, c);
        let p = exponent(&g, base, amp);
        let (lo, hi) = p.iter().fold((f64::INFINITY, 0.0f64), |(l, h), v| (l.min(*v), h.max(*v)));
        let rho = modular(&f, &p, None, &whole).unwrap();
        let n = luxemburg_norm(&f, &p, None, &whole, &opts()).unwrap().value;
        let (s, t) = sandwich(rho, lo, hi);
        prop_assert!(s <= n * (1.0 + 1e-9) && n <= t * (1.0 + 1e-9));
    }

    #[test]
    fn holder_with_constant_two(a in 0.0f64..2.0, b in 0.01f64..3.0, c in -0.3f64..2.0, base in 1.2f64..3.0, amp in 0.0f64..1.0) {
        let g = grid(1.0);
        let whole = g.whole();
        let f = field(&g, a, b, c);
        let h = field(&g, b, a + 0.1, -c * 0.5);
        let p = exponent(&g, base, amp);
        let q: Vec<f64> = p.iter().map(|v| v / (v - 1.0)).collect();
        let prod: Vec<f64> = f.iter().zip(&h).map(|(x, y)| x * y).collect();
        let lhs = whole.integrate_values(&prod).unwrap();
        let nf = luxemburg_norm(&f, &p, None, &whole, &opts()).unwrap().value;
        let nh = luxemburg_norm(&h, &q, None, &whole, &opts()).unwrap().value;
        prop_assert!(lhs <= 2.0 * nf * nh);
    }
}
