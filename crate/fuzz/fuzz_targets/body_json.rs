#![no_main]
use libfuzzer_sys::{fuzz_target, Corpus};
use orthospec::BodySpec;

fuzz_target!(|data: &[u8]| -> Corpus {
    let Ok(text) = std::str::from_utf8(data) else {
        return Corpus::Reject;
    };
    let Ok(spec) = BodySpec::parse(text) else {
        return Corpus::Keep;
    };
    let back = BodySpec::parse(&serde_json::to_string(&spec).unwrap()).unwrap();
    assert_eq!(back, spec);
    // building may reject the body but must not panic
    if let Ok(k) = spec.build() {
        let mut u = vec![0.0; k.dim()];
        u[0] = 1.0;
        let _ = k.support(&u);
    }
    Corpus::Keep
});
