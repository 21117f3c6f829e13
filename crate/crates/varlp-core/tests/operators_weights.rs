use std::sync::Arc;

use proptest::prelude::*;
use varlp_core::exponent::ExponentField;
use varlp_core::geometry::{enumerate_ball_family, FamilyDescriptor};
use varlp_core::measure::{build_grid, GridField, GridSpec, MeasureParams, QuadratureGrid};
use varlp_core::operators::{rdf_iterate_r, MaximalOperator, Regularizer, SOperator};
use varlp_core::weights::{dual_weight, Weight};

fn grid() -> Arc<QuadratureGrid> {
    build_grid(MeasureParams::new(1.0, 1).unwrap(), &GridSpec { levels: 6, points: 4, angular: 32, ..GridSpec::default() }).unwrap()
}

fn maximal(g: &Arc<QuadratureGrid>) -> MaximalOperator {
    let desc = FamilyDescriptor { radial_levels: 4, angular_count: 8, radius_count: 5, ..FamilyDescriptor::default() };
    MaximalOperator::new(g, &enumerate_ball_family(&desc).unwrap()).unwrap()
}

fn field(g: &QuadratureGrid, a: f64, b: f64, c: f64) -> Vec<f64> {
    g.points().iter().map(|z| a + b * (z.depth().powf(c) * (1.0 + (2.0 * z.arg()).sin())).abs()).collect()
}

#[test]
fn series_of_one_is_geometric_on_covered_nodes() {
    let g = grid();
    let m = maximal(&g);
    let (k, m_hat) = (6usize, 1.7);
    let r = rdf_iterate_r(&vec![1.0; g.len()], &m, k, m_hat).unwrap();
    let exact: f64 = (0..=k).map(|j| (2.0 * m_hat).powi(-(j as i32))).sum();
    let cov = m.coverage();
    let mut covered = 0;
    for (i, s) in r.sum.iter().enumerate() {
        if cov[i] > 0 {
            covered += 1;
            assert!((s - exact).abs() < 1e-12, "node {i}: {s} vs {exact}");
        } else {
            assert_eq!(*s, 1.0);
        }
    }
    assert!(covered > 0);
}

#[test]
fn regularizer_preserves_constants() {
    let g = grid();
    let r = Regularizer::new(&g, 0.3).unwrap();
    for v in r.apply(&vec![3.5; g.len()]).unwrap() {
        assert!((v - 3.5).abs() < 1e-12);
    }
}

#[test]
fn s_operator_on_unit_weight_doubles_one() {
    let g = grid();
    let m = maximal(&g);
    let s = SOperator::new(&GridField::constant(&g, 1.0), 2.0).unwrap();
    assert_eq!(s.q(), 4.0);
    let cov = m.coverage();
    for (i, v) in s.apply(&vec![1.0; g.len()], &m).unwrap().iter().enumerate() {
        if cov[i] > 0 {
            assert!((v - 2.0).abs() < 1e-12);
        }
    }
}

#[test]
fn dual_of_dual_is_the_weight() {
    let g = grid();
    let whole = g.whole();
    let p = ExponentField::radial_sin(2.0, 0.5).unwrap();
    let w = Weight::product(vec![Weight::power(0.7), Weight::angular(0.4).unwrap()]);
    let back = dual_weight(&dual_weight(&w, &p).unwrap(), &p.conjugate().unwrap()).unwrap();
    for (a, b) in w.sample(&whole).unwrap().iter().zip(back.sample(&whole).unwrap()) {
        assert!((a - b).abs() <= 1e-10 * a.abs());
    }
}

#[test]
fn rejects_bad_parameters() {
    let g = grid();
    assert!(Regularizer::new(&g, 1.5).is_err());
    assert!(SOperator::new(&GridField::constant(&g, 1.0), 1.0).is_err());
    assert!(SOperator::new(&GridField::constant(&g, 0.0), 2.0).is_err());
    assert!(rdf_iterate_r(&vec![1.0; g.len()], &maximal(&g), 0, 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn maximal_is_sublinear(a in 0.0f64..2.0, b in 0.01f64..3.0, c in -0.5f64..2.0, lambda in 0.0f64..10.0) {
        let g = grid();
        let m = maximal(&g);
        let f = field(&g, a, b, c);
        let h = field(&g, b, a, -c * 0.5);
        let sum: Vec<f64> = f.iter().zip(&h).map(|(x, y)| lambda * x + y).collect();
        let (mf, mh, ms) = (m.apply(&f).unwrap(), m.apply(&h).unwrap(), m.apply(&sum).unwrap());
        for i in 0..g.len() {
            prop_assert!(ms[i] <= (lambda * mf[i] + mh[i]) * (1.0 + 1e-12) + 1e-300);
        }
    }

    #[test]
    fn s_operator_is_sublinear(a in 0.01f64..2.0, b in 0.01f64..3.0, c in -0.5f64..2.0, gamma in -0.5f64..1.0) {
        let g = grid();
        let m = maximal(&g);
        let w = Weight::power(gamma).on_grid(&g).unwrap();
        let s = SOperator::new(&w, 2.0).unwrap();
        let f = field(&g, a, b, c);
        let h = field(&g, b, a, -c * 0.5);
        let sum: Vec<f64> = f.iter().zip(&h).map(|(x, y)| x + y).collect();
        let (sf, sh, ss) = (s.apply(&f, &m).unwrap(), s.apply(&h, &m).unwrap(), s.apply(&sum, &m).unwrap());
        for i in 0..g.len() {
            prop_assert!(ss[i] <= (sf[i] + sh[i]) * (1.0 + 1e-10));
        }
    }

    #[test]
    fn series_dominates_its_input(a in 0.0f64..2.0, b in 0.01f64..3.0, c in -0.5f64..2.0, m_hat in 0.5f64..5.0) {
        let g = grid();
        let m = maximal(&g);
        let h = field(&g, a, b, c);
        let r = rdf_iterate_r(&h, &m, 5, m_hat).unwrap();
        for (s, v) in r.sum.iter().zip(&h) {
            prop_assert!(*s >= v.abs());
        }
    }
}
