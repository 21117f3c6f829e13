use proptest::prelude::*;
use varlp_core::geometry::{pseudo_distance, regularization_ball, touches_boundary, Point, PseudoBall};

fn point() -> impl Strategy<Value = Point> {
    (1e-6f64..0.999_999, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Point::c1(r * t.cos(), r * t.sin()).unwrap())
}

fn d(z: &Point, w: &Point) -> f64 {
    pseudo_distance(z, w).unwrap()
}

#[test]
fn distance_values() {
    let o = Point::origin(1).unwrap();
    let a = Point::c1(0.5, 0.0).unwrap();
    let b = Point::c1(-0.5, 0.0).unwrap();
    assert_eq!(d(&o, &a), 0.5);
    assert_eq!(d(&a, &a), 0.0);
    // ||z| - |ζ|| + |1 - ⟨z,ζ⟩/(|z||ζ|)| = 0 + |1 + 1|
    assert!((d(&a, &b) - 2.0).abs() < 1e-15);
}

#[test]
fn origin_branch_breaks_the_quasi_triangle() {
    let t = 0.1;
    let (z, w, o) = (Point::c1(t, 0.0).unwrap(), Point::c1(-t, 0.0).unwrap(), Point::origin(1).unwrap());
    assert!(d(&z, &w) > 2.0 * (d(&z, &o) + d(&o, &w)));
}

#[test]
fn boundary_touch_is_strict() {
    let o = Point::origin(1).unwrap();
    assert!(!touches_boundary(&PseudoBall::new(o.clone(), 0.5).unwrap()));
    assert!(!touches_boundary(&PseudoBall::new(o, 1.0).unwrap()));
    assert!(touches_boundary(&PseudoBall::new(Point::c1(0.5, 0.0).unwrap(), 0.6).unwrap()));
}

proptest! {
    #[test]
    fn symmetric_and_in_range(z in point(), w in point()) {
        let a = d(&z, &w);
        prop_assert_eq!(a, d(&w, &z));
        prop_assert!((0.0..3.0).contains(&a));
    }

    #[test]
    fn quasi_triangle_away_from_origin(z in point(), w in point(), x in point()) {
        prop_assert!(d(&z, &w) <= 2.0 * (d(&z, &x) + d(&x, &w)));
    }

    #[test]
    fn regularization_ball_radius(z in point(), k in 0.01f64..0.99) {
        let b = regularization_ball(&z, k).unwrap();
        prop_assert!((b.radius() - k * z.gap()).abs() <= 1e-15);
        prop_assert!(b.contains(&z));
    }
}
