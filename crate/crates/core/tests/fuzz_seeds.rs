//! Replays the checked-in fuzz corpora through the same checks as the fuzz targets.

use orthospec::flow::Observable;
use orthospec::orthospectrum::LengthSpectrum;
use orthospec::runner::{error_json, parse_scenario};
use orthospec::BodySpec;
use std::path::PathBuf;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, String)> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.display().to_string(),
                std::fs::read_to_string(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn body_seeds_round_trip() {
    for (name, text) in seeds("body_json") {
        let spec = BodySpec::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(
            BodySpec::parse(&serde_json::to_string(&spec).unwrap()).unwrap(),
            spec
        );
        let k = spec.build().unwrap_or_else(|e| panic!("{name}: {e}"));
        let mut u = vec![0.0; k.dim()];
        u[0] = 1.0;
        k.support(&u).unwrap();
    }
}

#[test]
fn observable_seeds_round_trip() {
    for (name, text) in seeds("observable_json") {
        let o = Observable::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(Observable::from_spec(&o.to_spec()).unwrap(), o);
    }
}

#[test]
fn scenario_seeds_validate_or_report() {
    let mut accepted = 0;
    for (name, text) in seeds("scenario_json") {
        match parse_scenario(&text) {
            Ok(_) => accepted += 1,
            Err(e) => {
                let v: serde_json::Value = serde_json::from_str(&error_json(&e)).unwrap();
                assert_eq!(v["error"]["exit_code"], 2, "{name}");
            }
        }
    }
    assert!(accepted > 0);
}

#[test]
fn spectrum_seeds_round_trip() {
    let mut read = 0;
    for (_, text) in seeds("spectrum_csv") {
        if let Ok(spec) = LengthSpectrum::from_csv(&text) {
            let csv = spec.to_csv();
            assert_eq!(csv, text);
            assert_eq!(LengthSpectrum::from_csv(&csv).unwrap().to_csv(), csv);
            read += 1;
        }
    }
    assert!(read >= 2);
}
