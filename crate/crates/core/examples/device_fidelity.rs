//! Programming the XOR network onto simulated crossbars at several tolerances
//! and measuring how far device inference drifts from the ideal network.

use memfuzz::cli::device_check;
use memfuzz::fuzzy::{ramp_xor_network, DeviceConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = ramp_xor_network(16, 2.0)?;
    println!("tolerance | pulses/cell max | total pulses | max deviation");
    for tol in [0.001, 0.005, 0.02, 0.1] {
        let cfg = DeviceConfig {
            tolerance: tol,
            ..DeviceConfig::default()
        };
        let r = device_check(&net, &cfg, 1000, 7)?;
        println!(
            "{tol:9} | {:15} | {:12} | {:.4}%",
            r.max_pulses,
            r.total_pulses,
            r.max_relative_deviation * 100.0
        );
    }
    Ok(())
}
