#![no_main]
use gaussent_locc::{Transcript, TranscriptEntry};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Some(line) = s.lines().next() {
        let _ = TranscriptEntry::parse_line(line);
    }
    if let Ok(t) = Transcript::from_jsonl(s) {
        let again = Transcript::from_jsonl(&t.to_jsonl()).expect("round trip");
        assert_eq!(again.entries(), t.entries());
    }
});
