#![no_main]

use cstlab_core::galois::{ExtensionSpec, GaloisExt};
use cstlab_core::registry::lookup;
use cstlab_core::stgroups::GroupTag;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(tag) = text.parse::<GroupTag>() {
        assert_eq!(tag.name().parse::<GroupTag>().unwrap(), tag);
    }
    let _ = lookup(text);
    // extension tables are small; building them must not panic
    if let Ok(spec) = toml::from_str::<ExtensionSpec>(text) {
        let _ = GaloisExt::new(&spec);
    }
});
