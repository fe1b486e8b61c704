//! Layer-by-layer evaluation of the fuzzy XOR network on a 3-point grid.

use memfuzz::fuzzy::{fuzzy_xor, ramp_xor_network};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = ramp_xor_network(3, 2.0)?;
    println!("S =\n{:?}", net.fuzzification().weights);
    println!("Mt =\n{:?}", net.minterm_layer().weights);

    let x = [1.0, 0.0];
    let v = net.fuzzify(&x)?;
    let m = net.minterm_activations(&v)?;
    let out = net.aggregate(&m)?;
    println!("inputs {x:?}");
    println!("  fuzzified  {v:?}");
    println!("  minterms   {m:?}");
    println!("  concepts   {out}");

    println!("\nfuzzy XOR on a few pairs:");
    for (a, b) in [(0.0, 0.0), (0.0, 1.0), (0.25, 0.75), (0.6, 0.6), (1.0, 1.0)] {
        println!("  xor({a:.2}, {b:.2}) = {:.4}", fuzzy_xor(&net, a, b)?);
    }
    Ok(())
}
