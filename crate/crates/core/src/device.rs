//! Memristor cells and crossbar arrays used as programmable analog weight matrices.
//!
//! A cell follows a linear ion-drift law: its dimensionless state `x` moves by
//! `k_drift * volts * seconds` per pulse and is clamped to `[0, 1]`.  The
//! memristance interpolates linearly between `r_off` (x = 0) and `r_on` (x = 1),
//! so a positive pulse lowers the resistance.
//!
//! Crossbars map cell conductance affinely onto a non-negative weight range
//! `[0, w_max]`, are programmed one cell at a time with a write-verify pulse
//! loop, and read out vector-matrix products through column currents.  Signed
//! weights are only available on [`IdealArray`], which skips the device law.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::Matrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeviceError {
    #[error("invalid device parameters: {0}")]
    InvalidParams(String),
    #[error("target weight {target} outside [0, {w_max}]")]
    TargetOutOfRange { target: f64, w_max: f64 },
    #[error("cell ({row}, {col}) did not converge after {pulses} pulses (residual {residual:.3e})")]
    NoConvergence {
        row: usize,
        col: usize,
        pulses: usize,
        residual: f64,
    },
    #[error("cell index ({row}, {col}) out of range for {rows}x{cols} array")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("input length {got} does not match array dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite input at position {0}")]
    NonFiniteInput(usize),
}

/// Physical parameters shared by every cell of an array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceParams {
    /// Low-resistance bound, ohms.
    pub r_on: f64,
    /// High-resistance bound, ohms.
    pub r_off: f64,
    /// State change per volt-second.
    pub k_drift: f64,
}

impl Default for DeviceParams {
    /// 100 Ω / 16 kΩ; a 1 V, 1 ms pulse moves the state by 0.01.
    fn default() -> Self {
        DeviceParams {
            r_on: 100.0,
            r_off: 16_000.0,
            k_drift: 10.0,
        }
    }
}

impl DeviceParams {
    pub fn validate(&self) -> Result<(), DeviceError> {
        let ok = self.r_on.is_finite()
            && self.r_off.is_finite()
            && self.k_drift.is_finite()
            && self.r_on > 0.0
            && self.r_on < self.r_off
            && self.k_drift > 0.0;
        if ok {
            Ok(())
        } else {
            Err(DeviceError::InvalidParams(format!(
                "need 0 < r_on < r_off and k_drift > 0 (got r_on={}, r_off={}, k_drift={})",
                self.r_on, self.r_off, self.k_drift
            )))
        }
    }

    pub fn g_min(&self) -> f64 {
        1.0 / self.r_off
    }

    pub fn g_max(&self) -> f64 {
        1.0 / self.r_on
    }
}

/// One analog cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemristorState {
    x: f64,
    params: DeviceParams,
}

impl MemristorState {
    /// A cell at state `x`, clamped into `[0, 1]`.
    pub fn new(x: f64, params: DeviceParams) -> Self {
        MemristorState {
            x: x.clamp(0.0, 1.0),
            params,
        }
    }

    pub fn state(&self) -> f64 {
        self.x
    }

    pub fn params(&self) -> DeviceParams {
        self.params
    }

    pub fn memristance(&self) -> f64 {
        self.params.r_on * self.x + self.params.r_off * (1.0 - self.x)
    }

    pub fn conductance(&self) -> f64 {
        1.0 / self.memristance()
    }

    /// Applies a rectangular pulse. Saturation is silent.
    ///
    /// Panics if `duration` is negative or NaN.
    pub fn apply_pulse(&self, voltage: f64, duration: f64) -> MemristorState {
        assert!(duration >= 0.0, "pulse duration must be non-negative");
        let x = (self.x + self.params.k_drift * voltage * duration).clamp(0.0, 1.0);
        MemristorState { x, params: self.params }
    }
}

/// Fixed-amplitude write-verify scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WriteScheme {
    /// Write amplitude, volts.
    pub voltage: f64,
    /// Duration of the first pulse, seconds; halved after each overshoot.
    pub initial_duration: f64,
    pub max_pulses: usize,
    /// Verify window as a fraction of the requested tolerance. The loop stops
    /// once the error is inside `verify_margin * tol`; a final reading within
    /// `tol` still counts as success when the pulse budget runs out.
    pub verify_margin: f64,
}

impl Default for WriteScheme {
    fn default() -> Self {
        WriteScheme {
            voltage: 1.0,
            initial_duration: 1e-3,
            max_pulses: 1000,
            verify_margin: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProgramReport {
    pub pulses_used: usize,
    pub achieved_weight: f64,
    pub residual: f64,
}

/// How an input vector is applied to the array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Inputs drive the columns; returns `W · u` (one output per row).
    ColumnsAsInputs,
    /// Inputs drive the rows; returns `Wᵀ · u` (one output per column).
    RowsAsInputs,
}

/// Common read/program surface of device-backed and ideal weight arrays.
pub trait WeightArray {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn weight(&self, row: usize, col: usize) -> Result<f64, DeviceError>;
    fn read_vmm(&self, inputs: &[f64], orientation: Orientation) -> Result<Vec<f64>, DeviceError>;

    fn snapshot_weights(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows(), self.cols());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                m.set(r, c, self.weight(r, c).expect("index in range"));
            }
        }
        m
    }
}

fn check_inputs(inputs: &[f64], expected: usize) -> Result<(), DeviceError> {
    if inputs.len() != expected {
        return Err(DeviceError::DimensionMismatch {
            expected,
            got: inputs.len(),
        });
    }
    if let Some(i) = inputs.iter().position(|v| !v.is_finite()) {
        return Err(DeviceError::NonFiniteInput(i));
    }
    Ok(())
}

/// A grid of memristors acting as a non-negative weight matrix.
#[derive(Debug, Clone)]
pub struct Crossbar {
    rows: usize,
    cols: usize,
    cells: Vec<MemristorState>,
    params: DeviceParams,
    v_read: f64,
    w_max: f64,
    scheme: WriteScheme,
}

impl Crossbar {
    /// A fresh array with every cell at `x = 0` (all weights zero).
    pub fn new(rows: usize, cols: usize, params: DeviceParams) -> Result<Self, DeviceError> {
        Self::with_options(rows, cols, params, 1.0, 0.1, WriteScheme::default())
    }

    pub fn with_options(
        rows: usize,
        cols: usize,
        params: DeviceParams,
        w_max: f64,
        v_read: f64,
        scheme: WriteScheme,
    ) -> Result<Self, DeviceError> {
        params.validate()?;
        if !(w_max.is_finite() && w_max > 0.0) {
            return Err(DeviceError::InvalidParams(format!("w_max must be positive, got {w_max}")));
        }
        if !(v_read.is_finite() && v_read > 0.0) {
            return Err(DeviceError::InvalidParams(format!("v_read must be positive, got {v_read}")));
        }
        if !(scheme.voltage > 0.0 && scheme.initial_duration > 0.0) {
            return Err(DeviceError::InvalidParams(
                "write voltage and pulse duration must be positive".into(),
            ));
        }
        if !(scheme.verify_margin > 0.0 && scheme.verify_margin <= 1.0) {
            return Err(DeviceError::InvalidParams(format!(
                "verify margin must be in (0, 1], got {}",
                scheme.verify_margin
            )));
        }
        Ok(Crossbar {
            rows,
            cols,
            cells: vec![MemristorState::new(0.0, params); rows * cols],
            params,
            v_read,
            w_max,
            scheme,
        })
    }

    pub fn params(&self) -> DeviceParams {
        self.params
    }

    pub fn w_max(&self) -> f64 {
        self.w_max
    }

    pub fn g_min(&self) -> f64 {
        self.params.g_min()
    }

    pub fn g_max(&self) -> f64 {
        self.params.g_max()
    }

    pub fn write_scheme(&self) -> WriteScheme {
        self.scheme
    }

    fn index(&self, row: usize, col: usize) -> Result<usize, DeviceError> {
        if row >= self.rows || col >= self.cols {
            return Err(DeviceError::IndexOutOfRange {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(row * self.cols + col)
    }

    pub fn cell(&self, row: usize, col: usize) -> Result<&MemristorState, DeviceError> {
        let i = self.index(row, col)?;
        Ok(&self.cells[i])
    }

    /// Overwrites a cell state directly, bypassing the write scheme.
    pub fn set_cell_state(&mut self, row: usize, col: usize, x: f64) -> Result<(), DeviceError> {
        let i = self.index(row, col)?;
        self.cells[i] = MemristorState::new(x, self.params);
        Ok(())
    }

    /// Affine conductance-to-weight map.
    pub fn weight_of_conductance(&self, g: f64) -> f64 {
        self.w_max * (g - self.g_min()) / (self.g_max() - self.g_min())
    }

    /// Drives one cell to `target` with the write-verify loop.
    ///
    /// Pulses have fixed amplitude and a sign set by the current error; the
    /// pulse duration halves every time the error changes sign.  Only the
    /// addressed cell is touched.  Succeeds with `residual <= tol`.
    pub fn program_weight(
        &mut self,
        row: usize,
        col: usize,
        target: f64,
        tol: f64,
    ) -> Result<ProgramReport, DeviceError> {
        let idx = self.index(row, col)?;
        if !(target >= 0.0 && target <= self.w_max) {
            return Err(DeviceError::TargetOutOfRange {
                target,
                w_max: self.w_max,
            });
        }
        if !(tol > 0.0) {
            return Err(DeviceError::InvalidParams(format!("tolerance must be positive, got {tol}")));
        }

        let mut cell = self.cells[idx];
        let mut duration = self.scheme.initial_duration;
        let mut last_sign = 0.0;
        let mut pulses = 0;
        let window = tol * self.scheme.verify_margin;
        loop {
            let achieved = self.weight_of_conductance(cell.conductance());
            let error = target - achieved;
            if error.abs() <= window || (pulses >= self.scheme.max_pulses && error.abs() <= tol) {
                self.cells[idx] = cell;
                return Ok(ProgramReport {
                    pulses_used: pulses,
                    achieved_weight: achieved,
                    residual: error.abs(),
                });
            }
            if pulses >= self.scheme.max_pulses {
                self.cells[idx] = cell;
                return Err(DeviceError::NoConvergence {
                    row,
                    col,
                    pulses,
                    residual: error.abs(),
                });
            }
            let sign = error.signum();
            if last_sign != 0.0 && sign != last_sign {
                duration *= 0.5;
            }
            cell = cell.apply_pulse(sign * self.scheme.voltage, duration);
            last_sign = sign;
            pulses += 1;
        }
    }

    /// Programs every entry of `weights` and returns the per-cell reports in row-major order.
    pub fn program_matrix(&mut self, weights: &Matrix, tol: f64) -> Result<Vec<ProgramReport>, DeviceError> {
        if weights.rows() != self.rows || weights.cols() != self.cols {
            return Err(DeviceError::DimensionMismatch {
                expected: self.rows * self.cols,
                got: weights.rows() * weights.cols(),
            });
        }
        let mut reports = Vec::with_capacity(self.rows * self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                reports.push(self.program_weight(r, c, weights.get(r, c), tol)?);
            }
        }
        Ok(reports)
    }
}

impl WeightArray for Crossbar {
    fn rows(&self) -> usize {
        self.rows
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn weight(&self, row: usize, col: usize) -> Result<f64, DeviceError> {
        Ok(self.weight_of_conductance(self.cell(row, col)?.conductance()))
    }

    /// Reads by summing cell currents under `v_read`-scaled drive and removing
    /// the `g_min` offset with a reference line.
    fn read_vmm(&self, inputs: &[f64], orientation: Orientation) -> Result<Vec<f64>, DeviceError> {
        let (n_in, n_out) = match orientation {
            Orientation::ColumnsAsInputs => (self.cols, self.rows),
            Orientation::RowsAsInputs => (self.rows, self.cols),
        };
        check_inputs(inputs, n_in)?;

        let mut currents = vec![0.0; n_out];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let g = self.cells[r * self.cols + c].conductance();
                match orientation {
                    Orientation::ColumnsAsInputs => currents[r] += g * self.v_read * inputs[c],
                    Orientation::RowsAsInputs => currents[c] += g * self.v_read * inputs[r],
                }
            }
        }
        let reference: f64 = self.g_min() * self.v_read * inputs.iter().sum::<f64>();
        let scale = self.w_max / ((self.g_max() - self.g_min()) * self.v_read);
        Ok(currents.into_iter().map(|i| (i - reference) * scale).collect())
    }
}

/// Exact signed weight storage with no device physics.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealArray {
    weights: Matrix,
}

impl IdealArray {
    pub fn new(rows: usize, cols: usize) -> Self {
        IdealArray {
            weights: Matrix::zeros(rows, cols),
        }
    }

    pub fn from_matrix(weights: Matrix) -> Self {
        IdealArray { weights }
    }

    pub fn program_weight(&mut self, row: usize, col: usize, target: f64) -> Result<(), DeviceError> {
        if row >= self.weights.rows() || col >= self.weights.cols() {
            return Err(DeviceError::IndexOutOfRange {
                row,
                col,
                rows: self.weights.rows(),
                cols: self.weights.cols(),
            });
        }
        self.weights.set(row, col, target);
        Ok(())
    }
}

impl WeightArray for IdealArray {
    fn rows(&self) -> usize {
        self.weights.rows()
    }

    fn cols(&self) -> usize {
        self.weights.cols()
    }

    fn weight(&self, row: usize, col: usize) -> Result<f64, DeviceError> {
        if row >= self.rows() || col >= self.cols() {
            return Err(DeviceError::IndexOutOfRange {
                row,
                col,
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        Ok(self.weights.get(row, col))
    }

    fn read_vmm(&self, inputs: &[f64], orientation: Orientation) -> Result<Vec<f64>, DeviceError> {
        match orientation {
            Orientation::ColumnsAsInputs => {
                check_inputs(inputs, self.cols())?;
                Ok(self.weights.mul_vec(inputs))
            }
            Orientation::RowsAsInputs => {
                check_inputs(inputs, self.rows())?;
                Ok(self.weights.tr_mul_vec(inputs))
            }
        }
    }

    fn snapshot_weights(&self) -> Matrix {
        self.weights.clone()
    }
}
