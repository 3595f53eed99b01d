#![no_main]
use libfuzzer_sys::{fuzz_target, Corpus};
use orthospec::flow::Observable;

fuzz_target!(|data: &[u8]| -> Corpus {
    let Ok(text) = std::str::from_utf8(data) else {
        return Corpus::Reject;
    };
    let Ok(o) = Observable::parse(text) else {
        return Corpus::Keep;
    };
    assert_eq!(Observable::from_spec(&o.to_spec()).unwrap(), o);
    let _ = o.projectors();
    Corpus::Keep
});
