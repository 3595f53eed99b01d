#![no_main]
use libfuzzer_sys::{fuzz_target, Corpus};
use orthospec::runner::{error_json, parse_scenario, Command};

// Validation only: rendering is too expensive to run per input.
fuzz_target!(|data: &[u8]| -> Corpus {
    let Ok(text) = std::str::from_utf8(data) else {
        return Corpus::Reject;
    };
    match parse_scenario(text) {
        Ok(sc) => assert!(Command::ALL.contains(&sc.command())),
        Err(e) => {
            let v: serde_json::Value = serde_json::from_str(&error_json(&e)).unwrap();
            assert_eq!(v["error"]["exit_code"], e.exit_code());
        }
    }
    Corpus::Keep
});
