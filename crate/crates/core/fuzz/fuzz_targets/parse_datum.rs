#![no_main]

use genus_spectrum::PDatum;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(v) = s.parse::<PDatum>() {
        let again: PDatum = v.to_string().parse().expect("canonical form parses");
        assert_eq!(again, v);
    }
});
