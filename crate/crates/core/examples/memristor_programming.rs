//! Single-cell pulse response, write-verify programming of a small crossbar,
//! and an analog vector-matrix read.

use memfuzz::device::{Crossbar, DeviceParams, MemristorState, Orientation, WeightArray};
use memfuzz::Matrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = DeviceParams::default();
    let mut cell = MemristorState::new(0.0, params);
    println!("pulse response (1 V, 1 ms each):");
    for i in 0..5 {
        println!("  step {i}: x = {:.3}, M = {:8.1} ohm", cell.state(), cell.memristance());
        cell = cell.apply_pulse(1.0, 1e-3);
    }

    let mut xb = Crossbar::new(2, 3, params)?;
    let target = Matrix::from_rows(&[vec![0.1, 0.5, 0.9], vec![0.25, 0.0, 1.0]]);
    let reports = xb.program_matrix(&target, 0.005)?;
    println!("\nprogrammed 2x3 crossbar at tolerance 0.005:");
    for (i, r) in reports.iter().enumerate() {
        println!(
            "  cell ({}, {}): target {:.3} -> {:.5} in {:3} pulses",
            i / 3,
            i % 3,
            target.as_slice()[i],
            r.achieved_weight,
            r.pulses_used
        );
    }

    let u = [1.0, 0.5, 0.25];
    let read = xb.read_vmm(&u, Orientation::ColumnsAsInputs)?;
    let exact = target.mul_vec(&u);
    println!("\nW u: device {read:.4?} vs exact {exact:.4?}");
    Ok(())
}
