#![no_main]

use libfuzzer_sys::fuzz_target;
use surfpoisson::config::RunConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(cfg) = RunConfig::from_slice(data) {
        // Anything that validates must yield a usable chart and rule.
        cfg.build_chart().unwrap();
        cfg.quadrature().unwrap();
    }
});
