use std::path::{Path, PathBuf};

use tempfile::TempDir;

use super::*;
use crate::fuzzy::{fuzzy_xor, ramp_xor_network, FuzzyNetwork};
use crate::imaging::{canny_gradient_baseline, load_pgm, normalize_to_bytes, save_pgm, GrayImage};
use crate::rulebase::XOR_RULES;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Fixture {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn file(&self, name: &str, bytes: &[u8]) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, bytes).unwrap();
        p
    }

    fn network(&self) -> PathBuf {
        self.file("xor.json", ramp_xor_network(16, 2.0).unwrap().to_json().as_bytes())
    }

    fn image(&self, name: &str, img: &GrayImage) -> PathBuf {
        self.file(name, &save_pgm(img))
    }
}

fn args(parts: &[&dyn AsRef<std::ffi::OsStr>]) -> Vec<std::ffi::OsString> {
    std::iter::once("memfuzz".into())
        .chain(parts.iter().map(|p| p.as_ref().to_os_string()))
        .collect()
}

fn read_pgm(p: &Path) -> GrayImage {
    load_pgm(&std::fs::read(p).unwrap()).unwrap()
}

#[test]
fn config_layers_in_order() {
    let fx = Fixture::new();
    let conf = fx.file("run.conf", b"# settings\ngrid = 8\nexponent=4 # sharper\n\nsigma = 2.5\nbackend = device\n");
    let cli = Cli::try_parse_from(args(&[&"--config", &conf, &"compile", &"--rules", &"r", &"--out", &"o", &"--grid", &"5"]))
        .unwrap();
    let cfg = cli.resolve_config().unwrap();
    assert_eq!(cfg.grid, 5);
    assert_eq!(cfg.exponent, 4.0);
    assert_eq!(cfg.sigma, 2.5);
    assert_eq!(cfg.backend, BackendChoice::Device);
    assert_eq!(cfg.tolerance, RunConfig::default().tolerance);
}

#[test]
fn config_errors_are_input_errors() {
    let mut cfg = RunConfig::default();
    let e = cfg.apply_file_text("colour = red").unwrap_err();
    assert_eq!(e.exit_code(), EXIT_INPUT);
    assert!(e.to_string().contains("unknown key `colour`"));
    assert!(cfg.apply_file_text("grid = many").is_err());
    assert!(cfg.apply_file_text("grid").is_err());
    cfg.apply_file_text("sigma = 0").unwrap();
    assert!(cfg.validate().is_err());
}

#[test]
fn compile_xor_sample() {
    let fx = Fixture::new();
    let rules = fx.file("xor.rules", XOR_RULES.as_bytes());
    let out = fx.path("xor.json");
    let cfg = RunConfig {
        grid: 3,
        ..RunConfig::default()
    };
    let report = cmd_compile(&rules, &out, &cfg).unwrap();
    assert_eq!(report.rules, 4);
    assert_eq!(report.fuzzification_columns, 4);
    assert!(report.warnings.is_empty());
    let net = FuzzyNetwork::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(net.minterm_layer().weights.cols(), 4);
    assert_eq!(fuzzy_xor(&net, 1.0, 0.0).unwrap(), 6.5);
}

#[test]
fn compile_failures_exit_2() {
    let fx = Fixture::new();
    let empty = fx.file("empty.rules", b"");
    let out = fx.path("out.json");
    let e = cmd_compile(&empty, &out, &RunConfig::default()).unwrap_err();
    assert_eq!(e.exit_code(), EXIT_INPUT);
    assert!(e.to_string().contains("1:1: syntax error"), "{e}");
    assert!(!out.exists());

    let rules = fx.file("xor.rules", XOR_RULES.as_bytes());
    assert_eq!(run(args(&[&"compile", &"--rules", &rules, &"--out", &out, &"--grid", &"1"])), EXIT_INPUT);
    assert_eq!(run(args(&[&"compile", &"--rules", &fx.path("missing"), &"--out", &out])), EXIT_INPUT);
    assert_eq!(run(args(&[&"compile", &"--rules", &rules, &"--out", &out])), EXIT_OK);
    assert!(out.exists());
}

#[test]
fn usage_errors() {
    assert_eq!(run(args(&[&"frobnicate"])), EXIT_INPUT);
    assert_eq!(run(args(&[&"edges", &"--image"])), EXIT_INPUT);
    assert_eq!(run(args(&[&"--help"])), EXIT_OK);
}

#[test]
fn edges_constant_image_is_black() {
    let fx = Fixture::new();
    let img = fx.image("flat.pgm", &GrayImage::filled(20, 15, 173));
    let out = fx.path("edges.pgm");
    cmd_edges(&img, &fx.network(), &out, &RunConfig::default(), &[], None).unwrap();
    let got = read_pgm(&out);
    assert_eq!((got.width(), got.height()), (20, 15));
    assert!(got.pixels().iter().all(|&p| p == 0));
}

#[test]
fn edges_step_gives_one_bright_column() {
    let fx = Fixture::new();
    let img = fx.image("step.pgm", &GrayImage::vertical_step(32, 16, 16, 50, 200));
    let out = fx.path("edges.pgm");
    let csv = fx.path("merged.csv");
    let report = cmd_edges(
        &img,
        &fx.network(),
        &out,
        &RunConfig::default(),
        &[DumpMap::Vertical, DumpMap::Horizontal],
        Some(&csv),
    )
    .unwrap();
    assert_eq!(report.outputs.len(), 4);
    let got = read_pgm(&out);
    let sums: Vec<u32> = (0..32).map(|c| (0..16).map(|r| got.get(r, c) as u32).sum()).collect();
    let arg = (0..32).max_by_key(|&c| sums[c]).unwrap();
    assert_eq!(arg, 15);
    assert!((0..16).all(|r| got.get(r, 15) == 255));
    assert!(fx.path("edges.v.pgm").exists() && fx.path("edges.h.pgm").exists());
    let v = read_pgm(&fx.path("edges.v.pgm"));
    assert_eq!((v.width(), v.height()), (31, 16));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 16);
    assert_eq!(text.lines().next().unwrap().split(',').count(), 32);
}

#[test]
fn edges_are_reproducible_per_seed() {
    let fx = Fixture::new();
    let img = fx.image("step.pgm", &GrayImage::vertical_step(24, 24, 12, 64, 192));
    let net = fx.network();
    let (a, b, c) = (fx.path("a.pgm"), fx.path("b.pgm"), fx.path("c.pgm"));
    let run_with = |out: &Path, seed: &str| {
        run(args(&[&"edges", &"--image", &img, &"--network", &net, &"--out", &out, &"--noise-var", &"0.03", &"--seed", &seed]))
    };
    assert_eq!(run_with(&a, "7"), EXIT_OK);
    assert_eq!(run_with(&b, "7"), EXIT_OK);
    assert_eq!(run_with(&c, "8"), EXIT_OK);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn edges_device_backend_runs() {
    let fx = Fixture::new();
    let img = fx.image("step.pgm", &GrayImage::vertical_step(16, 8, 8, 0, 255));
    let out = fx.path("e.pgm");
    let cfg = RunConfig {
        backend: BackendChoice::Device,
        ..RunConfig::default()
    };
    cmd_edges(&img, &fx.network(), &out, &cfg, &[], None).unwrap();
    let got = read_pgm(&out);
    assert!((0..8).all(|r| got.get(r, 7) == 255));
}

#[test]
fn edges_rejects_bad_image() {
    let fx = Fixture::new();
    let bad = fx.file("bad.pgm", b"P5\n4 4\n65535\n");
    let e = cmd_edges(&bad, &fx.network(), &fx.path("o.pgm"), &RunConfig::default(), &[], None).unwrap_err();
    assert_eq!(e.exit_code(), EXIT_INPUT);
}

#[test]
fn surface_resolution_two() {
    let fx = Fixture::new();
    let out = fx.path("s.csv");
    let cfg = RunConfig {
        resolution: 2,
        ..RunConfig::default()
    };
    let net = ramp_xor_network(16, 2.0).unwrap();
    cmd_surface(&fx.network(), &out, &cfg).unwrap();
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    for row in &rows {
        assert_eq!(row[2], fuzzy_xor(&net, row[0], row[1]).unwrap());
        assert_eq!(row[3], if row[0] == row[1] { 0.0 } else { 255.0 });
    }
    assert_eq!(rows[1][2], rows[2][2]);
}

#[test]
fn baseline_matches_library() {
    let fx = Fixture::new();
    let img = GrayImage::vertical_step(20, 10, 9, 10, 240);
    let path = fx.image("step.pgm", &img);
    let out = fx.path("b.pgm");
    assert_eq!(run(args(&[&"baseline", &"--image", &path, &"--out", &out, &"--sigma", &"1.5"])), EXIT_OK);
    let expected = save_pgm(&normalize_to_bytes(&canny_gradient_baseline(&img, 1.5).unwrap()));
    assert_eq!(std::fs::read(&out).unwrap(), expected);

    let flat = fx.image("flat.pgm", &GrayImage::filled(9, 9, 33));
    cmd_baseline(&flat, &out, &RunConfig::default()).unwrap();
    assert!(read_pgm(&out).pixels().iter().all(|&p| p == 0));
}

#[test]
fn device_check_pass_and_fail() {
    let fx = Fixture::new();
    let net = fx.network();
    let report = cmd_device_check(&net, &RunConfig::default()).unwrap();
    assert!(report.passed());
    assert_eq!(report.samples, 1000);
    assert!(report.max_pulses <= 1000);

    let loose = RunConfig {
        tolerance: 0.5,
        ..RunConfig::default()
    };
    let e = cmd_device_check(&net, &loose).unwrap_err();
    assert_eq!(e.exit_code(), EXIT_NUMERIC);
    assert!(matches!(e, CliError::CheckFailed(ref r) if r.max_relative_deviation > DEVICE_CHECK_LIMIT));
    assert_eq!(run(args(&[&"device-check", &"--network", &net, &"--tolerance", &"0.5"])), EXIT_NUMERIC);
}

#[test]
fn device_check_rejects_empty_network() {
    let fx = Fixture::new();
    let mut doc: serde_json::Value = serde_json::from_str(&ramp_xor_network(4, 2.0).unwrap().to_json()).unwrap();
    doc["minterms"] = serde_json::json!([]);
    doc["groups"] = serde_json::json!([]);
    let path = fx.file("empty.json", doc.to_string().as_bytes());
    let e = cmd_device_check(&path, &RunConfig::default()).unwrap_err();
    assert_eq!(e.exit_code(), EXIT_INPUT);
}

#[test]
fn atomic_write_replaces_file() {
    let fx = Fixture::new();
    let p = fx.file("x.txt", b"old");
    write_atomic(&p, b"new").unwrap();
    assert_eq!(std::fs::read(&p).unwrap(), b"new");
    let leftovers = std::fs::read_dir(fx.dir.path()).unwrap().count();
    assert_eq!(leftovers, 1);
    assert!(write_atomic(&fx.path("no/such/dir/x"), b"").is_err());
}
