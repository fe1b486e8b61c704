//! Neuro-fuzzy inference on crossbar weight matrices.
//!
//! A [`FuzzyNetwork`] has three layers:
//!
//! 1. **Fuzzification.** Each input variable gets one terminal per linguistic
//!    term. "Big"-like terms receive `x - lo`, "small"-like terms receive the
//!    complement `hi - x`. The weight matrix `S` holds the discretized
//!    memberships in block-diagonal form, so `v = S · terminals` is a fuzzy
//!    number per variable, stacked.
//! 2. **Fuzzy minterms.** One column per rule stacks the antecedent terms'
//!    memberships. Each rule fires with `(Mtᵀ v)^n`, and `n > 1` sharpens the
//!    best-matching rule.
//! 3. **Aggregation.** Activations of rules that share a consequent are summed.
//!    There is no clipping and no defuzzification.
//!
//! [`fuzzy_xor`] reads the `big` concept of a two-input XOR network, and
//! [`MpNetwork`] is the classic binary threshold network for comparison.

mod membership;
mod mp;
mod network;
mod serial;

use thiserror::Error;

use crate::device::DeviceError;
use crate::matrix::Matrix;

pub use membership::{complement_encode, MembershipFunction, Polarity, Universe};
pub use mp::{MpNetwork, MpOutput};
pub use network::{
    minterm_column, AggregationLayer, Backend, ConceptOutputs, DeviceConfig, DeviceLayers, FuzzificationLayer,
    FuzzyNetwork, InputVariable, Minterm, MintermLayer, OutputGroup, ProgrammingSummary, Term,
};
pub use serial::NetworkDocument;

/// Output concept read by [`fuzzy_xor`].
pub const XOR_CONCEPT: &str = "big";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("invalid universe: {0}")]
    InvalidUniverse(String),
    #[error("invalid membership function: {0}")]
    InvalidMembership(String),
    #[error("membership function is zero at every grid point")]
    EmptySupport,
    #[error("{what}: expected length {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("value {value} for variable {variable:?} outside universe [{lo}, {hi}]")]
    OutOfUniverse {
        variable: String,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("activation exponent must be finite and >= 1, got {0}")]
    InvalidExponent(f64),
    #[error("network has no rules")]
    NoRules,
    #[error("unknown output concept {0:?}")]
    UnknownConcept(String),
    #[error("inconsistent network: {0}")]
    Structure(String),
    #[error("network document: {0}")]
    Format(String),
    #[error(transparent)]
    Device(#[from] DeviceError),
}

/// XOR output (`big` concept) for one input pair.
pub fn fuzzy_xor(net: &FuzzyNetwork, a: f64, b: f64) -> Result<f64, NetworkError> {
    let idx = net.concept_index(XOR_CONCEPT)?;
    let out = net.infer_batch(&Matrix::from_row_major(2, 1, vec![a, b]))?;
    Ok(out.get(idx, 0))
}

/// XOR outputs for many pairs in one batched pass.
pub fn fuzzy_xor_batch(net: &FuzzyNetwork, a: &[f64], b: &[f64]) -> Result<Vec<f64>, NetworkError> {
    assert_eq!(a.len(), b.len(), "input pair vectors differ in length");
    let idx = net.concept_index(XOR_CONCEPT)?;
    let mut data = Vec::with_capacity(2 * a.len());
    data.extend_from_slice(a);
    data.extend_from_slice(b);
    let out = net.infer_batch(&Matrix::from_row_major(2, a.len(), data))?;
    Ok(out.row(idx).to_vec())
}

/// Uniform grid points used for both axes of the inference surface.
pub fn surface_axis(u: &Universe, resolution: usize) -> Vec<f64> {
    (0..resolution)
        .map(|i| {
            if i + 1 == resolution {
                u.hi()
            } else {
                u.lo() + u.width() * i as f64 / (resolution - 1) as f64
            }
        })
        .collect()
}

/// `fuzzy_xor` over the grid of uniformly sampled input pairs; entry `(i, j)`
/// holds `fuzzy_xor(a_i, b_j)`.
pub fn inference_surface(net: &FuzzyNetwork, resolution: usize) -> Result<Matrix, NetworkError> {
    if resolution < 2 {
        return Err(NetworkError::Structure(format!(
            "surface resolution must be at least 2, got {resolution}"
        )));
    }
    let vars = net.variables();
    if vars.len() != 2 {
        return Err(NetworkError::DimensionMismatch {
            what: "XOR network inputs",
            expected: 2,
            got: vars.len(),
        });
    }
    let xs = surface_axis(&vars[0].universe, resolution);
    let ys = surface_axis(&vars[1].universe, resolution);
    let mut a = Vec::with_capacity(resolution * resolution);
    let mut b = Vec::with_capacity(resolution * resolution);
    for &x in &xs {
        for &y in &ys {
            a.push(x);
            b.push(y);
        }
    }
    let values = fuzzy_xor_batch(net, &a, &b)?;
    Ok(Matrix::from_row_major(resolution, resolution, values))
}

/// Two-input XOR network with complementary linear ramps (`small = 1 - x`,
/// `big = x`) on `[0, 1]`, built directly without a rule source.
pub fn ramp_xor_network(k: usize, exponent: f64) -> Result<FuzzyNetwork, NetworkError> {
    let u = Universe::new(0.0, 1.0, k)?;
    let big = MembershipFunction::triangular(0.0, 1.0, 1.0)?.discretize(&u)?;
    let small = MembershipFunction::triangular(0.0, 0.0, 1.0)?.discretize(&u)?;
    let var = |name: &str| InputVariable {
        name: name.to_string(),
        universe: u,
        terms: vec![
            Term {
                name: "small".into(),
                polarity: Polarity::for_samples(&small, &u),
                samples: small.clone(),
            },
            Term {
                name: "big".into(),
                polarity: Polarity::for_samples(&big, &u),
                samples: big.clone(),
            },
        ],
    };
    let variables = vec![var("x1"), var("x2")];
    let table = [("small", "small", "small"), ("small", "big", "big"), ("big", "small", "big"), ("big", "big", "small")];
    let mut minterms = Vec::new();
    for (t1, t2, _) in table {
        let antecedent = vec![("x1".to_string(), t1.to_string()), ("x2".to_string(), t2.to_string())];
        let column = minterm_column(&variables, &antecedent)?;
        minterms.push(Minterm { antecedent, column });
    }
    let groups = vec![
        OutputGroup {
            output: "y".into(),
            term: "small".into(),
            rules: vec![0, 3],
        },
        OutputGroup {
            output: "y".into(),
            term: "big".into(),
            rules: vec![1, 2],
        },
    ];
    FuzzyNetwork::from_parts(variables, minterms, groups, exponent)
}
