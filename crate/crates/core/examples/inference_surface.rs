//! The fuzzy XOR inference surface for several activation exponents, printed
//! as coarse ASCII shading.

use memfuzz::fuzzy::{inference_surface, ramp_xor_network};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let shades = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
    let r = 24;
    for n in [2.0, 4.0, 7.0] {
        let s = inference_surface(&ramp_xor_network(16, n)?, r)?;
        let (lo, hi) = s
            .as_slice()
            .iter()
            .fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
        println!("n = {n}: raw range [{lo:.3}, {hi:.3}]");
        for i in 0..r {
            let line: String = (0..r)
                .map(|j| {
                    let t = (s.get(i, j) - lo) / (hi - lo);
                    shades[((t * 9.0).round() as usize).min(9)]
                })
                .collect();
            println!("  |{line}|");
        }
    }
    Ok(())
}
