#![no_main]

use libfuzzer_sys::fuzz_target;
use nbparse_cli::ConfigFile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = text.parse::<ConfigFile>() {
        for key in nbparse_cli::config::KEYS {
            let _ = cfg.pick::<u64>(None, key);
            let _ = cfg.switch(false, key);
        }
    }
});
