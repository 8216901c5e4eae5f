mod common;

use common::*;
use proptest::prelude::*;
use serde_json::Value;
use zerosum::classification::verify_casen;
use zerosum::enumeration::SearchOptions;
use zerosum::io::{parse_report_str, parse_sequence_file, parse_sequence_str, REPORT_SCHEMA, SEQUENCE_SCHEMA};
use zerosum::lifting::{verify_propbfix_item1, PropbfixConfig};
use zerosum::perturbation::{verify_perturbation, Lemma};
use zerosum::properties::{verify_property_b, verify_property_c};
use zerosum::{Error, Report};

fn validator(schema: &str) -> jsonschema::Validator {
    jsonschema::validator_for(&serde_json::from_str(schema).unwrap()).unwrap()
}

fn sample_reports() -> Vec<Report> {
    let opts = SearchOptions::default();
    let mut out = vec![
        verify_property_b(grp(3), &opts).unwrap(),
        verify_property_c(grp(3), &opts).unwrap(),
        verify_casen(grp(3), 1, &opts).unwrap(),
        verify_perturbation(4, Lemma::II, &Default::default()).unwrap(),
        verify_propbfix_item1(4, 2, &PropbfixConfig { samples: 20, ..Default::default() }).unwrap(),
    ];
    let mut failing = Report::new("demo").param("n", 3);
    failing.counterexample(zerosum::Sequence::power(grp(3), grp(3).e1(), 2));
    failing.config = Some(serde_json::json!({ "subcommand": "demo" }));
    out.push(failing);
    out
}

#[test]
fn reports_match_the_published_schema() {
    let v = validator(REPORT_SCHEMA);
    for r in sample_reports() {
        let value = serde_json::to_value(&r).unwrap();
        assert!(
            v.is_valid(&value),
            "{}: {:?}",
            r.check,
            v.iter_errors(&value).map(|e| e.to_string()).collect::<Vec<_>>()
        );
        assert_eq!(parse_report_str(&serde_json::to_string(&r).unwrap()).unwrap(), r);
    }
    let mut bad = serde_json::to_value(&sample_reports()[0]).unwrap();
    bad["status"] = Value::from("maybe");
    assert!(!v.is_valid(&bad));
}

proptest! {
    #[test]
    fn sequences_round_trip_and_match_the_schema(s in (2u32..=9).prop_flat_map(|n| sequence(n, 12))) {
        let text = serde_json::to_string(&s).unwrap();
        let v = validator(SEQUENCE_SCHEMA);
        prop_assert!(v.is_valid(&serde_json::from_str(&text).unwrap()));
        prop_assert_eq!(parse_sequence_str(&text).unwrap(), s);
    }

    #[test]
    fn parser_never_panics(text in ".{0,64}") {
        let _ = parse_sequence_str(&text);
        let _ = parse_report_str(&text);
    }

    #[test]
    fn entry_order_does_not_matter(s in (2u32..=6).prop_flat_map(|n| sequence(n, 10)), rot in 0usize..10) {
        let mut entries: Vec<Value> = s.iter().map(|(g, k)| serde_json::json!([g.a, g.b, k])).collect();
        if !entries.is_empty() {
            let k = rot % entries.len();
            entries.rotate_left(k);
        }
        let text = serde_json::json!({ "n": s.group().modulus(), "terms": entries }).to_string();
        prop_assert_eq!(parse_sequence_str(&text).unwrap(), s);
    }
}

#[test]
fn files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    std::fs::write(&path, r#"{"n":3,"terms":[[1,0,2],[0,1,2],[1,1,1]]}"#).unwrap();
    assert_eq!(parse_sequence_file(&path).unwrap().len(), 5);
    assert!(matches!(parse_sequence_file(dir.path().join("missing.json")), Err(Error::Io(_))));
    std::fs::write(&path, "{\"n\":3,\n\"terms\":[[1,0,2]],}").unwrap();
    assert!(matches!(parse_sequence_file(&path), Err(Error::Parse { line: 2, .. })));
}
