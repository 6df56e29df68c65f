#![no_main]

use libfuzzer_sys::fuzz_target;
use rwkit::SymRat;

fuzz_target!(|data: &[u8]| {
    let Some((&first, rest)) = data.split_first() else { return };
    let n = 2 + (first % 4) as usize;
    if let Ok(text) = std::str::from_utf8(rest) {
        if let Ok(v) = SymRat::parse(text, n) {
            let printed = v.to_string();
            let back = SymRat::parse(&printed, n).expect("printed form parses");
            assert!(back.equals(&v), "{text:?} -> {printed:?}");
        }
    }
});
