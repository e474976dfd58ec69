use mcg_core::seeds::{chain_curve, shipped};
use mcg_core::twist::{detour_twist, TwistAxis};
use mcg_core::{NormalCurve, PolygonSurface};
use num_bigint::BigUint;

fn setup(g: usize) -> (PolygonSurface, Vec<NormalCurve>) {
    let s = PolygonSurface::new(g).unwrap();
    let (a0, b0) = shipped(g).unwrap().resolve(&s).unwrap();
    let mut curves: Vec<NormalCurve> = (0..2 * g as i64 + 1).map(|i| chain_curve(&s, i)).collect();
    assert_eq!(curves[0], a0);
    let rot = s.rotation_map();
    let mut b = b0;
    for _ in 0..6 {
        curves.push(b.clone());
        b = NormalCurve::new(&s, rot.apply_weights(b.weights())).unwrap();
    }
    (s, curves)
}

#[test]
fn fast_twist_matches_detour_surgery() {
    let (s, curves) = setup(5);
    let mut nontrivial = 0;
    for a in &curves {
        let axis = TwistAxis::new(&s, a).unwrap();
        for b in &curves {
            for sign in [1i8, -1] {
                let fast = axis.apply(b.weights(), sign as i64);
                let slow = detour_twist(&s, a, b, sign).unwrap();
                assert_eq!(fast, slow.weights(), "twist sign {sign}");
                if fast != b.weights() {
                    nontrivial += 1;
                }
            }
        }
    }
    assert!(nontrivial > 50);
}

#[test]
fn twisted_intersection_grows_quadratically() {
    // i(T_a^k(b), b) = |k| i(a, b)^2
    let (s, curves) = setup(5);
    for a in &curves {
        let axis = TwistAxis::new(&s, a).unwrap();
        for b in &curves {
            let iab = axis.intersection(b.weights());
            let b_axis = TwistAxis::new(&s, b).unwrap();
            for k in [1i64, 2, -3] {
                let img = axis.apply(b.weights(), k);
                let want = BigUint::from(k.unsigned_abs()) * &iab * &iab;
                assert_eq!(b_axis.intersection(&img), want);
            }
        }
    }
}

#[test]
fn twist_fixes_its_axis_and_disjoint_curves() {
    let (s, curves) = setup(6);
    for a in &curves {
        let axis = TwistAxis::new(&s, a).unwrap();
        assert_eq!(axis.apply(a.weights(), 5), a.weights());
        for b in &curves {
            if axis.intersection(b.weights()) == BigUint::from(0u8) {
                assert_eq!(axis.apply(b.weights(), -2), b.weights());
            }
        }
    }
}

#[test]
fn high_powers_invert_exactly() {
    let (s, curves) = setup(7);
    // a_4 and b_0 meet once, so weights grow linearly in the power
    let axis = TwistAxis::new(&s, &curves[4]).unwrap();
    let b = &curves[15];
    assert_eq!(axis.intersection(b.weights()), BigUint::from(1u8));
    let far = axis.apply(b.weights(), 1_000_000);
    assert!(far.iter().map(|x| x.bits()).max().unwrap() >= 20);
    assert_eq!(axis.apply(&far, -1_000_000), b.weights());
}
