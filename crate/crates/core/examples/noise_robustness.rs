//! Step localization under Gaussian noise (variance 0.03 on the [0, 1] scale)
//! for the fuzzy detector and the gradient baseline.

use memfuzz::fuzzy::ramp_xor_network;
use memfuzz::imaging::{add_gaussian_noise, canny_gradient_baseline, detect_edges, gaussian_smooth, normalize_to_bytes, GrayImage};

fn argmax(v: &[f64]) -> usize {
    (0..v.len()).max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = ramp_xor_network(16, 2.0)?;
    let clean = GrayImage::vertical_step(128, 128, 64, 64, 192);
    println!("seed | fuzzy column | baseline column | fuzzy peak/background");
    for seed in 0..8 {
        let noisy = add_gaussian_noise(&clean, 0.0, 0.03, seed)?;
        let maps = detect_edges(&gaussian_smooth(&noisy, 1.0)?, &net)?;
        let norm = normalize_to_bytes(&maps.merged);
        let sums: Vec<f64> = (0..128)
            .map(|c| (0..128).map(|r| norm.get(r, c) as f64).sum())
            .collect();
        let col = argmax(&sums);
        let background = sums.iter().sum::<f64>() / sums.len() as f64;
        let base = argmax(&canny_gradient_baseline(&noisy, 1.0)?.column_sums());
        println!("{seed:4} | {col:12} | {base:15} | {:.2}", sums[col] / background);
    }
    Ok(())
}
