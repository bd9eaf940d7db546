use std::collections::BTreeMap;

use serde::Deserialize;
use tq_core::grouprings::{CharLabel, GroupElement};
use tq_core::localterms::{build_tame_complex, tame_class, valuation_iso, TameComplexSpec};
use tq_core::perfectcomplex::{class_representative, PerfectComplex};
use tq_core::rational::parse_rational;

#[derive(Deserialize)]
struct Case {
    p: u64,
    determinants: BTreeMap<String, String>,
}

#[derive(Deserialize)]
struct Fixture {
    cases: Vec<Case>,
}

#[test]
fn tame_determinants_match_frozen_values() {
    let raw = include_str!("fixtures/tame_determinants.json");
    let fixture: Fixture = serde_json::from_str(raw).unwrap();
    assert_eq!(fixture.cases.len(), 14);
    for case in fixture.cases {
        let spec = TameComplexSpec::new(case.p, GroupElement::A, GroupElement::B).unwrap();
        let h = tame_class(&spec).unwrap();
        for l in CharLabel::ALL {
            let want = parse_rational(&case.determinants[l.key()]).unwrap();
            assert_eq!(h.get(l), &want, "p = {} at {}", case.p, l.key());
        }
    }
}

#[test]
fn complex_fixture_parses_to_the_built_complex() {
    let parsed: PerfectComplex =
        serde_json::from_str(include_str!("fixtures/tame_complex_p5.json")).unwrap();
    let spec = TameComplexSpec::new(5, GroupElement::A, GroupElement::B).unwrap();
    assert_eq!(parsed, build_tame_complex(&spec).unwrap());
    let h = class_representative(&parsed, &valuation_iso(&spec).unwrap()).unwrap();
    assert_eq!(
        serde_json::to_string(&h).unwrap(),
        r#"{"1":"1/8","chi1":"-1/1","chi2":"-1/3","chi1chi2":"-1/1"}"#
    );
}

#[test]
fn malformed_complexes_are_rejected() {
    let not_a_complex = r#"{"group":"V4","degrees":[0,2],"ranks":[1,1,1],"differentials":[
        {"rows":1,"cols":1,"entries":[[{"e":"1/1"}]]},
        {"rows":1,"cols":1,"entries":[[{"e":"1/1"}]]}]}"#;
    assert!(serde_json::from_str::<PerfectComplex>(not_a_complex).is_err());
    let bad_range = r#"{"group":"V4","degrees":[0,5],"ranks":[1],"differentials":[]}"#;
    assert!(serde_json::from_str::<PerfectComplex>(bad_range).is_err());
}
