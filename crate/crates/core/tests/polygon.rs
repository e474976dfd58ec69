use mcg_core::curves::{algebraic_intersection, components, disjoint, intersection_bracket, Bracket};
use mcg_core::seeds::{chain_curve, shipped, SeedData};
use mcg_core::{NormalCurve, PolygonSurface};

#[test]
fn counts_and_euler_characteristic() {
    for g in 2..=8usize {
        let s = PolygonSurface::new(g).unwrap();
        assert_eq!(s.sides(), 4 * g + 2);
        assert_eq!(s.num_triangles(), 4 * g + 2);
        assert_eq!(s.num_edges(), 6 * g + 3);
        assert_eq!(s.num_vertices(), 3);
        assert_eq!(s.euler_characteristic(), 2 - 2 * g as i64);
        assert_eq!(s.corner_class_sizes(), vec![2 * g + 1, 2 * g + 1]);
    }
}

#[test]
fn symmetries_have_the_dihedral_relations() {
    for g in [5usize, 8] {
        let s = PolygonSurface::new(g).unwrap();
        let n = s.sides() as i64;
        let rot = s.rotation_map();
        let refl = s.reflection_map();
        assert!(rot.pow(n).is_identity());
        for d in (1..n).filter(|d| n % d == 0) {
            assert!(!rot.pow(d).is_identity(), "σ^{d}");
        }
        assert!(refl.compose(&refl).is_identity());
        assert_eq!(refl.character(), -1);
        assert_eq!(rot.character(), 1);
        // τ σ τ = σ⁻¹
        assert_eq!(refl.compose(&rot).compose(&refl), rot.inverse());
    }
}

#[test]
fn chain_curves_form_a_chain() {
    let g = 6;
    let s = PolygonSurface::new(g).unwrap();
    let a: Vec<NormalCurve> = (1..=2 * g as i64).map(|i| chain_curve(&s, i)).collect();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let br = intersection_bracket(&s, &a[i], &a[j]).unwrap();
            let want = if j == i + 1 { 1 } else { 0 };
            assert_eq!(br, Bracket { lower: want, upper: want }, "a{} a{}", i + 1, j + 1);
        }
    }
}

#[test]
fn algebraic_intersection_is_antisymmetric() {
    let s = PolygonSurface::new(5).unwrap();
    let (_, b0) = shipped(5).unwrap().resolve(&s).unwrap();
    let curves: Vec<NormalCurve> = (0..11).map(|i| chain_curve(&s, i)).chain([b0]).collect();
    for x in &curves {
        assert_eq!(algebraic_intersection(&s, x, x).unwrap(), 0);
        for y in &curves {
            let xy = algebraic_intersection(&s, x, y).unwrap();
            assert_eq!(xy, -algebraic_intersection(&s, y, x).unwrap());
            assert!(xy.unsigned_abs() <= intersection_bracket(&s, x, y).unwrap().upper);
        }
    }
}

#[test]
fn seed_b0_is_reflection_invariant_and_meets_a4_once() {
    for g in 5..=8usize {
        let s = PolygonSurface::new(g).unwrap();
        let (a0, b0) = shipped(g).unwrap().resolve(&s).unwrap();
        assert_eq!(a0.total_weight(), 4u32.into());
        assert_eq!(s.reflection_map().apply_weights(b0.weights()), b0.weights());
        let a4 = chain_curve(&s, 4);
        assert_eq!(intersection_bracket(&s, &b0, &a4).unwrap(), Bracket { lower: 1, upper: 1 });
        assert!(disjoint(&s, &b0, &chain_curve(&s, 1)).unwrap());
        assert_eq!(components(&s, &b0.as_multicurve()).unwrap().len(), 1);
    }
}

#[test]
fn seed_files_round_trip_and_reject_other_genera() {
    let data = shipped(7).unwrap();
    assert_eq!(SeedData::from_json(&data.to_json()).unwrap(), data);
    let s = PolygonSurface::new(6).unwrap();
    assert!(data.resolve(&s).is_err());
    assert!(SeedData::from_json("{\"genus\": 5}").is_err());
}

#[test]
fn invalid_weights_are_rejected() {
    let s = PolygonSurface::new(5).unwrap();
    assert!(NormalCurve::from_u64(&s, &[1, 2, 3]).is_err());
    let mut w = vec![0u64; s.num_edges()];
    w[0] = 1;
    assert!(NormalCurve::from_u64(&s, &w).is_err());
    assert!(PolygonSurface::new(1).is_err());
}
