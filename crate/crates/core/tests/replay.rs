mod common;

use common::*;
use mcg_core::replay::{load_and_validate_seeds, replay, Steps};
use mcg_core::seeds::{shipped, CurveLiteral, SeedData};
use mcg_core::Error;

#[test]
fn small_genus_is_rejected() {
    let data = SeedData { genus: 4, ..shipped(5).unwrap() };
    assert_eq!(
        load_and_validate_seeds(4, &data).err(),
        Some(Error::GenusOutOfRange { genus: 4, min: 5 })
    );
}

#[test]
fn seeds_failing_the_tables_are_rejected() {
    let good = shipped(5).unwrap();
    let s = mcg_core::PolygonSurface::new(5).unwrap();
    let a1 = mcg_core::seeds::chain_curve(&s, 1);
    let bad = SeedData {
        b0: CurveLiteral::Weights(a1.weights_u64().unwrap()),
        ..good
    };
    assert!(matches!(load_and_validate_seeds(5, &bad), Err(Error::SeedInvalid(_))));
}

#[test]
fn steps_refuse_to_run_out_of_order() {
    let mut r = replay_for(5);
    assert!(matches!(r.step4(), Err(Error::Falsified(_))));
}

#[test]
fn even_genus_replay_uses_the_prescribed_transport() {
    let report = replay(6, &shipped(6).unwrap(), Steps::default()).unwrap();
    assert!(report.step2_literal);
    assert_eq!(report.step2_target, "a4");
    assert_eq!(report.certificates.len(), 13);
    assert!(report.transcript.iter().all(|c| c.passed));
    assert!(report.reflections.iter().all(|(_, ok)| *ok));
    for c in &report.certificates {
        let v: serde_json::Value = serde_json::from_str(&c.to_json_line()).unwrap();
        assert_eq!(v["target"], c.target.as_str());
        assert_eq!(v["verified"], true);
        assert!(!c.to_json_line().contains('\n'));
    }
}

#[test]
fn genus_five_replay_repairs_the_transport() {
    let report = replay(5, &shipped(5).unwrap(), Steps { reflections: false }).unwrap();
    assert!(!report.step2_literal);
    assert_eq!(report.step2_target, "a3");
    let failed: Vec<_> = report.transcript.iter().filter(|c| !c.passed).collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].claim.starts_with("transport maps c2"));
    assert!(report.transcript.iter().any(|c| c.claim == "repair transport" && c.passed));
    assert_eq!(report.certificates.len(), 11);
    assert!(report.reflections.is_empty());
}

#[test]
fn transport_search_is_deterministic() {
    let mut r = replay_for(7);
    r.verify_torsion_orders().unwrap();
    r.step1().unwrap();
    r.step2().unwrap();
    let first = r.find_transport("c1", 11, 3).unwrap();
    assert_eq!(first, r.find_transport("c1", 11, 3).unwrap());
    let (factors, target) = first.unwrap();
    assert_eq!(target, 3);
    // apply the factors as plain twist words, first factor first
    let e = r.engine();
    let mut c = e.curve("c1").unwrap().clone();
    for (i, j) in &factors {
        let w: mcg_core::MCWord = format!("T[b{i}]T'[b{j}]").parse().unwrap();
        assert!(e.curve("b11").unwrap() == &e.evaluate(&w, e.curve("b11").unwrap()).unwrap());
        c = e.evaluate(&w, &c).unwrap();
    }
    assert_eq!(&c, e.curve("a3").unwrap());
}
