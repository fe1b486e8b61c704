use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fuzzy::{inference_surface, surface_axis, DeviceConfig, FuzzyNetwork, NetworkError};
use crate::imaging::{
    add_gaussian_noise, canny_gradient_baseline, detect_edges, gaussian_smooth, load_pgm, normalize_to_bytes, save_pgm,
    EdgeMap, GrayImage,
};
use crate::matrix::Matrix;
use crate::rulebase::{compile_to_network, parse, validate, CompileBackend, Diagnostic};

use super::{BackendChoice, CliError, RunConfig};

/// Largest relative deviation `device-check` accepts.
pub const DEVICE_CHECK_LIMIT: f64 = 0.01;

/// Writes through a temporary file in the destination directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_text(path: &Path) -> Result<String, CliError> {
    String::from_utf8(read(path)?).map_err(|_| CliError::Input(format!("{}: not valid UTF-8", path.display())))
}

fn load_network(path: &Path) -> Result<FuzzyNetwork, CliError> {
    FuzzyNetwork::from_json(&read_text(path)?).map_err(|e| CliError::network(&path.display().to_string(), e))
}

fn load_image(path: &Path) -> Result<GrayImage, CliError> {
    load_pgm(&read(path)?).map_err(|e| CliError::imaging(&path.display().to_string(), e))
}

#[derive(Debug, Clone)]
pub struct CompileReport {
    pub out: PathBuf,
    pub inputs: usize,
    pub rules: usize,
    pub fuzzification_columns: usize,
    pub grid: usize,
    pub exponent: f64,
    pub warnings: Vec<Diagnostic>,
}

impl fmt::Display for CompileReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.warnings {
            writeln!(f, "{w}")?;
        }
        write!(
            f,
            "wrote {}: {} inputs, {} fuzzification columns, {} minterm columns, k={}, n={}",
            self.out.display(),
            self.inputs,
            self.fuzzification_columns,
            self.rules,
            self.grid,
            self.exponent
        )
    }
}

/// Parses, validates and compiles a rule base, then writes the network JSON.
pub fn cmd_compile(rules: &Path, out: &Path, cfg: &RunConfig) -> Result<CompileReport, CliError> {
    let src = read_text(rules)?;
    let rb = parse(&src).map_err(|e| CliError::Rules(format!("{}:\n{e}", rules.display())))?;
    let warnings: Vec<Diagnostic> = validate(&rb).into_iter().filter(|d| !d.is_error()).collect();
    let net = compile_to_network(&rb, cfg.grid, cfg.exponent, CompileBackend::Ideal).map_err(CliError::compile)?;
    write_atomic(out, net.to_json().as_bytes())?;
    Ok(CompileReport {
        out: out.to_path_buf(),
        inputs: net.variables().len(),
        rules: net.rule_count(),
        fuzzification_columns: net.fuzzification().weights.cols(),
        grid: cfg.grid,
        exponent: net.exponent(),
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DumpMap {
    #[value(name = "v")]
    Vertical,
    #[value(name = "h")]
    Horizontal,
    Merged,
}

impl DumpMap {
    fn suffix(self) -> &'static str {
        match self {
            DumpMap::Vertical => "v",
            DumpMap::Horizontal => "h",
            DumpMap::Merged => "merged",
        }
    }
}

/// Files written by an image command.
#[derive(Debug, Clone)]
pub struct EdgesReport {
    pub outputs: Vec<PathBuf>,
    pub width: usize,
    pub height: usize,
    pub backend: BackendChoice,
}

impl fmt::Display for EdgesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} image, {} backend", self.width, self.height, self.backend)?;
        for p in &self.outputs {
            write!(f, "\nwrote {}", p.display())?;
        }
        Ok(())
    }
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}.pgm"))
}

/// Edge detection: noise (if configured), smoothing, XOR edge maps, min-max
/// normalization of the merged map.
pub fn cmd_edges(
    image: &Path,
    network: &Path,
    out: &Path,
    cfg: &RunConfig,
    dump: &[DumpMap],
    csv: Option<&Path>,
) -> Result<EdgesReport, CliError> {
    let img = load_image(image)?;
    let mut net = load_network(network)?;
    if cfg.backend == BackendChoice::Device {
        net = net
            .program_onto_device(&cfg.device_config())
            .map_err(|e| CliError::network("programming", e))?;
    }
    let noisy = if cfg.noise_variance > 0.0 || cfg.noise_mean != 0.0 {
        add_gaussian_noise(&img, cfg.noise_mean, cfg.noise_variance, cfg.seed)
            .map_err(|e| CliError::imaging("noise", e))?
    } else {
        img
    };
    let smoothed = gaussian_smooth(&noisy, cfg.sigma).map_err(|e| CliError::imaging("smoothing", e))?;
    let maps = detect_edges(&smoothed, &net).map_err(|e| CliError::imaging("edge detection", e))?;

    write_atomic(out, &save_pgm(&normalize_to_bytes(&maps.merged)))?;
    let mut outputs = vec![out.to_path_buf()];
    for &d in dump {
        let map = match d {
            DumpMap::Vertical => &maps.vertical,
            DumpMap::Horizontal => &maps.horizontal,
            DumpMap::Merged => &maps.merged,
        };
        let path = sibling(out, d.suffix());
        write_atomic(&path, &save_pgm(&normalize_to_bytes(map)))?;
        outputs.push(path);
    }
    if let Some(path) = csv {
        write_atomic(path, maps.merged.to_csv().as_bytes())?;
        outputs.push(path.to_path_buf());
    }
    Ok(EdgesReport {
        outputs,
        width: smoothed.width(),
        height: smoothed.height(),
        backend: cfg.backend,
    })
}

/// Smoothing and Sobel gradient magnitude, normalized to 8 bits.
pub fn cmd_baseline(image: &Path, out: &Path, cfg: &RunConfig) -> Result<String, CliError> {
    let img = load_image(image)?;
    let map = canny_gradient_baseline(&img, cfg.sigma).map_err(|e| CliError::imaging("baseline", e))?;
    write_atomic(out, &save_pgm(&normalize_to_bytes(&map)))?;
    Ok(format!(
        "{}x{} image, sigma={}\nwrote {}",
        img.width(),
        img.height(),
        cfg.sigma,
        out.display()
    ))
}

#[derive(Debug, Clone)]
pub struct SurfaceReport {
    pub out: PathBuf,
    pub resolution: usize,
    pub min: f64,
    pub max: f64,
}

impl fmt::Display for SurfaceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{r}x{r} surface, raw range [{}, {}]\nwrote {}",
            self.min,
            self.max,
            self.out.display(),
            r = self.resolution
        )
    }
}

/// Writes `a,b,raw,normalized` for every grid pair, `a` varying slowest.
pub fn cmd_surface(network: &Path, out: &Path, cfg: &RunConfig) -> Result<SurfaceReport, CliError> {
    let net = load_network(network)?;
    let res = cfg.resolution;
    let surface = inference_surface(&net, res).map_err(|e| CliError::network("surface", e))?;
    let map = EdgeMap::new(res, res, surface.as_slice().to_vec())
        .map_err(|_| CliError::Numeric("surface has negative or non-finite values".into()))?;
    let norm = normalize_to_bytes(&map);
    let xs = surface_axis(&net.variables()[0].universe, res);
    let ys = surface_axis(&net.variables()[1].universe, res);
    let mut csv = String::from("a,b,raw,normalized\n");
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            csv.push_str(&format!("{x},{y},{},{}\n", surface.get(i, j), norm.get(i, j)));
        }
    }
    write_atomic(out, csv.as_bytes())?;
    let (min, max) = map.range().expect("non-empty surface");
    Ok(SurfaceReport {
        out: out.to_path_buf(),
        resolution: res,
        min,
        max,
    })
}

#[derive(Debug, Clone)]
pub struct DeviceCheckReport {
    pub samples: usize,
    pub tolerance: f64,
    pub cells: usize,
    pub total_pulses: usize,
    pub max_pulses: usize,
    pub max_residual: f64,
    pub max_relative_deviation: f64,
}

impl DeviceCheckReport {
    pub fn passed(&self) -> bool {
        self.max_relative_deviation <= DEVICE_CHECK_LIMIT
    }
}

impl fmt::Display for DeviceCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "programmed {} cells at tolerance {} of w_max: {} pulses total, at most {} per cell, max residual {:.3e}",
            self.cells, self.tolerance, self.total_pulses, self.max_pulses, self.max_residual
        )?;
        write!(
            f,
            "{} random inferences: max relative deviation {:.4}% ({})",
            self.samples,
            self.max_relative_deviation * 100.0,
            if self.passed() { "ok" } else { "FAIL" }
        )
    }
}

/// Programs `net` onto crossbars and compares `samples` seeded random
/// inferences (uniform over each universe) against the ideal network.
pub fn device_check(
    net: &FuzzyNetwork,
    cfg: &DeviceConfig,
    samples: usize,
    seed: u64,
) -> Result<DeviceCheckReport, NetworkError> {
    let ideal = net.to_ideal();
    let device = ideal.program_onto_device(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = ideal.variables();
    let mut inputs = Matrix::zeros(vars.len(), samples);
    for s in 0..samples {
        for (v, var) in vars.iter().enumerate() {
            inputs.set(v, s, rng.random_range(var.universe.lo()..=var.universe.hi()));
        }
    }
    let want = ideal.infer_batch(&inputs)?;
    let got = device.infer_batch(&inputs)?;
    let peak = want.as_slice().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-9 * peak.max(f64::MIN_POSITIVE);
    let max_relative_deviation = want
        .as_slice()
        .iter()
        .zip(got.as_slice())
        .map(|(w, g)| (g - w).abs() / w.abs().max(floor))
        .fold(0.0, f64::max);
    let summary = match device.backend() {
        crate::fuzzy::Backend::Device(d) => d.summary,
        crate::fuzzy::Backend::Ideal => unreachable!("program_onto_device returns a device-backed network"),
    };
    Ok(DeviceCheckReport {
        samples,
        tolerance: cfg.tolerance,
        cells: summary.cells,
        total_pulses: summary.total_pulses,
        max_pulses: summary.max_pulses,
        max_residual: summary.max_residual,
        max_relative_deviation,
    })
}

/// Runs [`device_check`] and fails when the deviation exceeds [`DEVICE_CHECK_LIMIT`].
pub fn cmd_device_check(network: &Path, cfg: &RunConfig) -> Result<DeviceCheckReport, CliError> {
    let net = load_network(network)?;
    let report =
        device_check(&net, &cfg.device_config(), cfg.samples, cfg.seed).map_err(|e| CliError::network("device check", e))?;
    if report.passed() {
        Ok(report)
    } else {
        Err(CliError::CheckFailed(report))
    }
}
