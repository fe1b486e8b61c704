//! Parsing, validating and compiling textual rule bases, including the
//! diagnostics produced for broken input.

use memfuzz::rulebase::{compile_to_network, parse, validate, CompileBackend, XOR_RULES};

const HEATER: &str = "
var temp  : 0 .. 40 { cold = tri(0, 0, 20), warm = tri(10, 20, 30), hot = tri(20, 40, 40) }
var humid : 0 .. 1  { dry = tri(0, 0, 1), wet = tri(0, 1, 1) }
out power : 0 .. 1  { low = tri(0, 0, 1), high = tri(0, 1, 1) }

IF temp is cold THEN power is high
IF temp is warm AND humid is wet THEN power is high
IF temp is hot THEN power is low
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rb = parse(XOR_RULES)?;
    println!("XOR rule base:");
    for r in &rb.rules {
        println!("  {r}");
    }
    let net = compile_to_network(&rb, 16, 2.0, CompileBackend::Ideal)?;
    println!("compiled: {} rules, infer(0.1, 0.9) = {}", net.rule_count(), net.infer(&[0.1, 0.9])?);

    let heater = parse(HEATER)?;
    println!("\nheater rule base warnings:");
    for d in validate(&heater) {
        println!("  {d}");
    }
    let net = compile_to_network(&heater, 21, 2.0, CompileBackend::Ideal)?;
    for t in [5.0, 20.0, 35.0] {
        println!("  temp {t:4}, humid 0.8 -> {}", net.infer(&[t, 0.8])?);
    }

    println!("\ndiagnostics for a broken source:");
    let broken = "var x : 0 .. 1 { lo = tri(0, 0, 1) }\nout y : 0 .. 1 { a = tri(0, 0, 1) }\nIF x is medium THEN y is a\nIF z is lo THEN y is a\n";
    if let Err(e) = parse(broken) {
        println!("{e}");
    }
    Ok(())
}
