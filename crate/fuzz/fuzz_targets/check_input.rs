#![no_main]

use libfuzzer_sys::fuzz_target;
use spherical_poincare::gallery::{build, CheckInput};
use spherical_poincare::inequality::theorem_mixed;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(input) = CheckInput::from_json(text) else { return };
    if let CheckInput::Pair(pair) = input {
        let (Ok(k), Ok(l)) = (build(&pair.k, 8), build(&pair.l, 8)) else { return };
        let _ = theorem_mixed(&k.body, &l.body);
    }
});
