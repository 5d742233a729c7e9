#![no_main]

use libfuzzer_sys::fuzz_target;
use spherical_poincare::gallery::{build, BodySpec};
use spherical_poincare::inequality::{self, theorem1, theorem2, theorem3, theorem_general_m};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = BodySpec::from_json(text) else { return };
    let json = spec.to_json().expect("valid spec serializes");
    assert_eq!(BodySpec::from_json(&json).expect("round trip").to_json().unwrap(), json);

    // small band keeps each run cheap; tail rejections are expected
    let Ok(built) = build(&spec, 12) else { return };
    let mut reports = vec![theorem1(&built.body), theorem2(&built.body), theorem3(&built.body)];
    for m in 2..=3 {
        if let Ok(r) = theorem_general_m(&built.body, m) {
            reports.push(r);
        }
    }
    let _ = inequality::to_json(&reports);
    let _ = inequality::write_csv(&reports, Vec::new());
});
