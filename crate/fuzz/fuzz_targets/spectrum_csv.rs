#![no_main]
use libfuzzer_sys::{fuzz_target, Corpus};
use orthospec::orthospectrum::LengthSpectrum;

fuzz_target!(|data: &[u8]| -> Corpus {
    let Ok(text) = std::str::from_utf8(data) else {
        return Corpus::Reject;
    };
    if let Ok(spec) = LengthSpectrum::from_csv(text) {
        let csv = spec.to_csv();
        let again = LengthSpectrum::from_csv(&csv).unwrap();
        assert_eq!(again.to_csv(), csv);
    }
    Corpus::Keep
});
