#![no_main]
use gaussent_core::reconstruction::Grid;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(g) = s.parse::<Grid>() else { return };
    assert_eq!(g.to_string().parse::<Grid>(), Ok(g));
    if g.steps <= 1 << 16 {
        let pts = g.points();
        assert_eq!(pts.len(), g.steps);
        assert!(pts.iter().all(|x| x.is_finite()));
    }
});
