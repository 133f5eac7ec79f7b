use std::f64::consts::TAU;

use isotile_core::geometry::realize_stellate;
use isotile_core::moebius::{distance, geodesic_through, Isometry};
use isotile_core::orbifold::{free_reduce, parse_conway, Word};
use isotile_core::Complex;
use proptest::prelude::*;

fn disk_point() -> impl Strategy<Value = Complex> {
    (0.0..0.95f64, 0.0..TAU).prop_map(|(r, t)| Complex::from_polar(r, t))
}

fn isometry() -> impl Strategy<Value = Isometry> {
    (disk_point(), 0.0..TAU, any::<bool>()).prop_map(|(p, t, rev)| {
        let g = Isometry::rotation_about(p, t).unwrap();
        if rev {
            g.compose(&Isometry::conjugation())
        } else {
            g
        }
    })
}

fn word(rank: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank, prop_oneof![Just(-2i64), Just(-1), Just(1), Just(2)]), 0..10)
        .prop_map(Word::from_letters)
}

proptest! {
    #[test]
    fn composition_is_associative(a in isometry(), b in isometry(), c in isometry()) {
        let l = a.compose(&b).compose(&c);
        let r = a.compose(&b.compose(&c));
        let scale = l.max_abs_entry().max(1.0);
        prop_assert!(l.distance_to(&r) < 1e-12, "{} at scale {}", l.distance_to(&r), scale);
    }

    #[test]
    fn isometries_preserve_distance(g in isometry(), p in disk_point(), q in disk_point()) {
        let before = distance(p, q);
        let after = distance(g.apply(p), g.apply(q));
        prop_assert!((before - after).abs() < 1e-8 * before.max(1.0));
    }

    #[test]
    fn inverse_cancels(g in isometry()) {
        prop_assert!(g.compose(&g.inverse()).is_identity(1e-12));
    }

    #[test]
    fn conjugation_keeps_type(g in isometry(), h in isometry()) {
        let c = h.compose(&g).compose(&h.inverse());
        let (a, b) = (g.classify(1e-9), c.classify(1e-9));
        prop_assert_eq!(a.name(), b.name());
    }

    #[test]
    fn geodesics_are_orthogonal_to_the_boundary(p in disk_point(), q in disk_point()) {
        prop_assume!((p - q).norm() > 1e-6);
        let g = geodesic_through(p, q).unwrap();
        prop_assert!(g.orthogonality_defect() < 1e-9);
        prop_assert!(g.offset(p).abs() < 1e-9 && g.offset(q).abs() < 1e-9);
    }

    #[test]
    fn words_evaluate_like_their_reductions(w in word(4)) {
        let gg = realize_stellate(&[2, 2, 2, 4]).unwrap();
        let a = gg.evaluate(&w).unwrap();
        let b = gg.evaluate(&free_reduce(&w)).unwrap();
        prop_assert!(a.distance_to(&b) < 1e-9 * a.max_abs_entry().max(1.0));
        let inv = gg.evaluate(&w.inverse()).unwrap();
        prop_assert!(a.compose(&inv).identity_residual() < 1e-9 * a.max_abs_entry().powi(2).max(1.0));
    }
}

#[test]
fn kaleidoscopic_halves_stellate_characteristic() {
    for orders in ["2224", "22222", "246", "2233", "237", "334"] {
        let s = parse_conway(orders).unwrap();
        let k = parse_conway(&format!("*{orders}")).unwrap();
        assert_eq!(s.euler_characteristic() / 2, k.euler_characteristic(), "{orders}");
    }
}
