#![no_main]
use gaussent_fock::GaussianCircuit;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(c) = GaussianCircuit::from_json_str(s) else {
        return;
    };
    let v = c.analytic_covariance();
    assert!(v.is_finite());
    let _ = c.total_squeezing();
});
