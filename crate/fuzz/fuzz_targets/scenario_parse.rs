#![no_main]

use libfuzzer_sys::fuzz_target;
use qcorr::dynamics::transitions;
use qcorr::scenario::Scenario;

fuzz_target!(|data: &str| {
    let Ok(s) = Scenario::from_json(data) else {
        return;
    };
    assert!(s.grid >= 2);
    let params = s.params().expect("validated scenario has physical params");
    let filter = s.filter().expect("validated scenario has a valid filter");
    let t = transitions(s.channel, &params, filter.as_ref());
    for p in [t.p_sc, t.p_sc1, t.p_sc2, t.pk_sc, t.pk_sc1, t.pk_sc2].into_iter().flatten() {
        assert!((0.0..=1.0).contains(&p), "transition {p} outside [0, 1]");
    }
});
