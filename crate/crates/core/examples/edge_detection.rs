//! Fuzzy XOR edge maps of a synthetic scene, compared with the gradient
//! baseline. Writes PGM files to the directory given as the first argument
//! (default: the system temp directory).

use std::path::PathBuf;

use memfuzz::fuzzy::ramp_xor_network;
use memfuzz::imaging::{canny_gradient_baseline, detect_edges, gaussian_smooth, normalize_to_bytes, save_pgm, GrayImage};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let scene = GrayImage::from_fn(96, 96, |r, c| {
        let (dr, dc) = (r as f64 - 48.0, c as f64 - 60.0);
        if dr * dr + dc * dc < 400.0 {
            220
        } else if (10..40).contains(&r) && (10..35).contains(&c) {
            40
        } else {
            128
        }
    });
    let net = ramp_xor_network(16, 2.0)?;
    let maps = detect_edges(&gaussian_smooth(&scene, 1.0)?, &net)?;
    let baseline = canny_gradient_baseline(&scene, 1.0)?;

    for (name, img) in [
        ("scene.pgm", scene.clone()),
        ("edges_vertical.pgm", normalize_to_bytes(&maps.vertical)),
        ("edges_horizontal.pgm", normalize_to_bytes(&maps.horizontal)),
        ("edges_merged.pgm", normalize_to_bytes(&maps.merged)),
        ("baseline.pgm", normalize_to_bytes(&baseline)),
    ] {
        let path = dir.join(name);
        std::fs::write(&path, save_pgm(&img))?;
        println!("wrote {}", path.display());
    }
    let merged = normalize_to_bytes(&maps.merged);
    let bright = merged.pixels().iter().filter(|&&p| p > 128).count();
    println!("{bright} of {} merged pixels above half intensity", merged.pixels().len());
    Ok(())
}
