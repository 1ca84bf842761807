#![no_main]
use gaussent_locc::wire::{decode_frame, encode};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok((m, used)) = decode_frame(data) {
        assert!(used <= data.len());
        let again = encode(&m);
        let (m2, used2) = decode_frame(&again).expect("re-encoded frame decodes");
        assert_eq!(used2, again.len());
        assert_eq!(m2, m);
    }
});
