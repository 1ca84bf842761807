#![no_main]
use gaussent_core::CovarianceMatrix;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(v) = CovarianceMatrix::from_json_str(s) else {
        return;
    };
    let flags = v.check_physical();
    let back = CovarianceMatrix::from_json_str(&v.to_json_value().to_string()).expect("round trip");
    assert_eq!(back, v);
    if flags.is_physical() {
        let _ = gaussent_core::LocalData::from_state(&v).and_then(|d| gaussent_core::analyze(&d));
    }
});
