//! The binary threshold XOR network used as the crisp reference.

use memfuzz::fuzzy::MpNetwork;

fn main() {
    let net = MpNetwork::default();
    println!("x1 x2 | hidden pre   | hidden | y");
    for (x1, x2) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let out = net.forward(x1, x2);
        println!(
            " {x1}  {x2} | {:>4} {:>4}   |  {} {}  | {}",
            out.hidden_preactivation[0], out.hidden_preactivation[1], out.hidden[0], out.hidden[1], out.y
        );
    }
}
