use std::fmt;

use crate::device::{Crossbar, DeviceParams, Orientation, ProgramReport, WeightArray, WriteScheme};
use crate::matrix::Matrix;

use super::membership::{check_samples, Polarity, Universe};
use super::NetworkError;

/// A linguistic term with its discretized membership and terminal polarity.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub name: String,
    pub samples: Vec<f64>,
    pub polarity: Polarity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputVariable {
    pub name: String,
    pub universe: Universe,
    pub terms: Vec<Term>,
}

/// One column of the minterm layer: the rule antecedent it encodes plus its weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Minterm {
    /// `(variable, term)` conjuncts; variables not listed contribute a neutral block.
    pub antecedent: Vec<(String, String)>,
    pub column: Vec<f64>,
}

/// Rules sharing one consequent, summed into a single output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputGroup {
    pub output: String,
    pub term: String,
    pub rules: Vec<usize>,
}

impl OutputGroup {
    /// Concept label, e.g. `big` (or `y.big` via [`ConceptOutputs::get`]).
    pub fn label(&self) -> &str {
        &self.term
    }
}

/// Fuzzification weights `S`: one column per (variable, term), block-diagonal by variable.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzificationLayer {
    pub weights: Matrix,
    pub column_owner: Vec<(usize, usize)>,
    pub row_owner: Vec<usize>,
    pub polarity: Vec<Polarity>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MintermLayer {
    pub weights: Matrix,
    pub exponent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregationLayer {
    pub groups: Vec<OutputGroup>,
}

impl AggregationLayer {
    /// 0/1 matrix with one row per rule and one column per group.
    pub fn as_matrix(&self, rules: usize) -> Matrix {
        let mut m = Matrix::zeros(rules, self.groups.len());
        for (g, group) in self.groups.iter().enumerate() {
            for &r in &group.rules {
                m.set(r, g, 1.0);
            }
        }
        m
    }
}

/// Settings for mapping a network onto memristor crossbars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceConfig {
    pub params: DeviceParams,
    pub scheme: WriteScheme,
    pub w_max: f64,
    pub v_read: f64,
    /// Programming tolerance as a fraction of `w_max`.
    pub tolerance: f64,
}

impl Default for DeviceConfig {
    fn default() -> Self {
        DeviceConfig {
            params: DeviceParams::default(),
            scheme: WriteScheme::default(),
            w_max: 1.0,
            v_read: 0.1,
            tolerance: 0.005,
        }
    }
}

/// Aggregate statistics from programming a device-backed network.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProgrammingSummary {
    pub cells: usize,
    pub total_pulses: usize,
    pub max_pulses: usize,
    pub max_residual: f64,
}

impl ProgrammingSummary {
    fn absorb(&mut self, reports: &[ProgramReport]) {
        for r in reports {
            self.cells += 1;
            self.total_pulses += r.pulses_used;
            self.max_pulses = self.max_pulses.max(r.pulses_used);
            self.max_residual = self.max_residual.max(r.residual);
        }
    }
}

#[derive(Debug, Clone)]
pub struct DeviceLayers {
    pub fuzzification: Crossbar,
    pub minterms: Crossbar,
    pub aggregation: Crossbar,
    pub summary: ProgrammingSummary,
}

#[derive(Debug, Clone)]
pub enum Backend {
    Ideal,
    Device(Box<DeviceLayers>),
}

/// Named per-concept outputs in group order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptOutputs {
    entries: Vec<(String, String, f64)>,
}

impl ConceptOutputs {
    /// Looks up a concept by term (`big`) or qualified name (`y.big`).
    pub fn get(&self, concept: &str) -> Option<f64> {
        if let Some((out, term)) = concept.split_once('.') {
            return self
                .entries
                .iter()
                .find(|(o, t, _)| o == out && t == term)
                .map(|e| e.2);
        }
        self.entries.iter().find(|(_, t, _)| t == concept).map(|e| e.2)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(_, t, v)| (t.as_str(), *v))
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.2).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for ConceptOutputs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (o, t, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{o}.{t}={v}")?;
        }
        Ok(())
    }
}

/// Three-layer neuro-fuzzy network: fuzzification, fuzzy minterms with `x^n`
/// activation, and per-consequent summation.
#[derive(Debug, Clone)]
pub struct FuzzyNetwork {
    variables: Vec<InputVariable>,
    minterm_specs: Vec<Minterm>,
    fuzz: FuzzificationLayer,
    minterms: MintermLayer,
    agg: AggregationLayer,
    /// First row of each variable's block.
    row_offsets: Vec<usize>,
    backend: Backend,
}

impl FuzzyNetwork {
    /// Assembles a network on the ideal backend, checking that every layer chains.
    pub fn from_parts(
        variables: Vec<InputVariable>,
        minterms: Vec<Minterm>,
        groups: Vec<OutputGroup>,
        exponent: f64,
    ) -> Result<Self, NetworkError> {
        if variables.is_empty() {
            return Err(NetworkError::Structure("network has no input variables".into()));
        }
        if minterms.is_empty() {
            return Err(NetworkError::NoRules);
        }
        if !(exponent.is_finite() && exponent >= 1.0) {
            return Err(NetworkError::InvalidExponent(exponent));
        }

        let mut row_offsets = Vec::with_capacity(variables.len());
        let mut rows = 0;
        let mut column_owner = Vec::new();
        let mut polarity = Vec::new();
        for (vi, var) in variables.iter().enumerate() {
            if var.terms.is_empty() {
                return Err(NetworkError::Structure(format!("variable {} has no terms", var.name)));
            }
            if variables[..vi].iter().any(|v| v.name == var.name) {
                return Err(NetworkError::Structure(format!("duplicate variable {}", var.name)));
            }
            for (ti, term) in var.terms.iter().enumerate() {
                if term.samples.len() != var.universe.k() {
                    return Err(NetworkError::DimensionMismatch {
                        what: "membership samples",
                        expected: var.universe.k(),
                        got: term.samples.len(),
                    });
                }
                check_samples(&term.samples)?;
                if var.terms[..ti].iter().any(|t| t.name == term.name) {
                    return Err(NetworkError::Structure(format!(
                        "duplicate term {} in variable {}",
                        term.name, var.name
                    )));
                }
                column_owner.push((vi, ti));
                polarity.push(term.polarity);
            }
            row_offsets.push(rows);
            rows += var.universe.k();
        }

        let mut s = Matrix::zeros(rows, column_owner.len());
        let mut row_owner = vec![0; rows];
        for (vi, var) in variables.iter().enumerate() {
            for r in 0..var.universe.k() {
                row_owner[row_offsets[vi] + r] = vi;
            }
        }
        for (col, &(vi, ti)) in column_owner.iter().enumerate() {
            for (r, &w) in variables[vi].terms[ti].samples.iter().enumerate() {
                s.set(row_offsets[vi] + r, col, w);
            }
        }

        let mut mt = Matrix::zeros(rows, minterms.len());
        for (j, m) in minterms.iter().enumerate() {
            if m.column.len() != rows {
                return Err(NetworkError::DimensionMismatch {
                    what: "minterm column",
                    expected: rows,
                    got: m.column.len(),
                });
            }
            if let Some(&bad) = m.column.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
                return Err(NetworkError::Structure(format!(
                    "minterm {j} has invalid weight {bad}; weights must be finite and non-negative"
                )));
            }
            let expected = expected_minterm_column(&variables, &row_offsets, rows, &m.antecedent)
                .map_err(|e| NetworkError::Structure(format!("minterm {j}: {e}")))?;
            if expected != m.column {
                return Err(NetworkError::Structure(format!(
                    "minterm {j} column does not match its antecedent memberships"
                )));
            }
            for (r, &w) in m.column.iter().enumerate() {
                mt.set(r, j, w);
            }
        }

        let mut seen = vec![false; minterms.len()];
        for g in &groups {
            if g.rules.is_empty() {
                return Err(NetworkError::Structure(format!("output group {} is empty", g.term)));
            }
            for &r in &g.rules {
                if r >= minterms.len() || seen[r] {
                    return Err(NetworkError::Structure(format!(
                        "output groups must partition the {} rules (bad index {r})",
                        minterms.len()
                    )));
                }
                seen[r] = true;
            }
        }
        if let Some(r) = seen.iter().position(|s| !s) {
            return Err(NetworkError::Structure(format!("rule {r} belongs to no output group")));
        }

        Ok(FuzzyNetwork {
            fuzz: FuzzificationLayer {
                weights: s,
                column_owner,
                row_owner,
                polarity,
            },
            minterms: MintermLayer {
                weights: mt,
                exponent,
            },
            agg: AggregationLayer { groups },
            variables,
            minterm_specs: minterms,
            row_offsets,
            backend: Backend::Ideal,
        })
    }

    pub fn variables(&self) -> &[InputVariable] {
        &self.variables
    }

    pub fn minterm_specs(&self) -> &[Minterm] {
        &self.minterm_specs
    }

    pub fn fuzzification(&self) -> &FuzzificationLayer {
        &self.fuzz
    }

    pub fn minterm_layer(&self) -> &MintermLayer {
        &self.minterms
    }

    pub fn aggregation(&self) -> &AggregationLayer {
        &self.agg
    }

    pub fn exponent(&self) -> f64 {
        self.minterms.exponent
    }

    pub fn rule_count(&self) -> usize {
        self.minterm_specs.len()
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn is_device_backed(&self) -> bool {
        matches!(self.backend, Backend::Device(_))
    }

    /// Copy of this network with a different activation exponent.
    pub fn with_exponent(&self, exponent: f64) -> Result<Self, NetworkError> {
        if !(exponent.is_finite() && exponent >= 1.0) {
            return Err(NetworkError::InvalidExponent(exponent));
        }
        let mut net = self.clone();
        net.minterms.exponent = exponent;
        Ok(net)
    }

    /// Copy of this network evaluated on exact weights.
    pub fn to_ideal(&self) -> Self {
        let mut net = self.clone();
        net.backend = Backend::Ideal;
        net
    }

    /// Index of the output group with the given concept label.
    pub fn concept_index(&self, concept: &str) -> Result<usize, NetworkError> {
        let found = if let Some((out, term)) = concept.split_once('.') {
            self.agg.groups.iter().position(|g| g.output == out && g.term == term)
        } else {
            self.agg.groups.iter().position(|g| g.term == concept)
        };
        found.ok_or_else(|| NetworkError::UnknownConcept(concept.to_string()))
    }

    /// Programs all three weight matrices onto fresh crossbars.
    pub fn program_onto_device(&self, cfg: &DeviceConfig) -> Result<Self, NetworkError> {
        if !(cfg.tolerance > 0.0) {
            return Err(NetworkError::Structure(format!(
                "programming tolerance must be positive, got {}",
                cfg.tolerance
            )));
        }
        let tol = cfg.tolerance * cfg.w_max;
        let mut summary = ProgrammingSummary::default();
        let mut program = |m: &Matrix| -> Result<Crossbar, NetworkError> {
            let mut xb = Crossbar::with_options(m.rows(), m.cols(), cfg.params, cfg.w_max, cfg.v_read, cfg.scheme)?;
            let reports = xb.program_matrix(m, tol)?;
            summary.absorb(&reports);
            Ok(xb)
        };
        let fuzzification = program(&self.fuzz.weights)?;
        let minterms = program(&self.minterms.weights)?;
        let aggregation = program(&self.agg.as_matrix(self.rule_count()))?;
        let mut net = self.clone();
        net.backend = Backend::Device(Box::new(DeviceLayers {
            fuzzification,
            minterms,
            aggregation,
            summary,
        }));
        Ok(net)
    }

    fn check_inputs(&self, inputs: &Matrix) -> Result<(), NetworkError> {
        if inputs.rows() != self.variables.len() {
            return Err(NetworkError::DimensionMismatch {
                what: "crisp inputs",
                expected: self.variables.len(),
                got: inputs.rows(),
            });
        }
        for (vi, var) in self.variables.iter().enumerate() {
            for &x in inputs.row(vi) {
                if !var.universe.contains(x) {
                    return Err(NetworkError::OutOfUniverse {
                        variable: var.name.clone(),
                        value: x,
                        lo: var.universe.lo(),
                        hi: var.universe.hi(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Terminal signals, one row per fuzzification column.
    fn encode_batch(&self, inputs: &Matrix) -> Matrix {
        let batch = inputs.cols();
        let mut enc = Matrix::zeros(self.fuzz.column_owner.len(), batch);
        for (col, &(vi, _)) in self.fuzz.column_owner.iter().enumerate() {
            let u = &self.variables[vi].universe;
            for b in 0..batch {
                enc.set(col, b, self.fuzz.polarity[col].encode(inputs.get(vi, b), u));
            }
        }
        enc
    }

    /// Fuzzified vectors (one column per sample). `inputs` has one row per variable.
    pub fn fuzzify_batch(&self, inputs: &Matrix) -> Result<Matrix, NetworkError> {
        self.check_inputs(inputs)?;
        let enc = self.encode_batch(inputs);
        let batch = inputs.cols();
        let rows = self.fuzz.weights.rows();
        match &self.backend {
            Backend::Ideal => {
                let mut v = Matrix::zeros(rows, batch);
                for (col, &(vi, _)) in self.fuzz.column_owner.iter().enumerate() {
                    let off = self.row_offsets[vi];
                    for r in off..off + self.variables[vi].universe.k() {
                        let w = self.fuzz.weights.get(r, col);
                        for b in 0..batch {
                            v.set(r, b, v.get(r, b) + w * enc.get(col, b));
                        }
                    }
                }
                Ok(v)
            }
            Backend::Device(d) => {
                let mut v = Matrix::zeros(rows, batch);
                for b in 0..batch {
                    let out = d
                        .fuzzification
                        .read_vmm(&enc.column(b), Orientation::ColumnsAsInputs)?;
                    for (r, x) in out.into_iter().enumerate() {
                        v.set(r, b, x.max(0.0));
                    }
                }
                Ok(v)
            }
        }
    }

    /// `x^n`-activated minterm outputs (one row per rule) from fuzzified columns.
    pub fn minterm_batch(&self, v: &Matrix) -> Result<Matrix, NetworkError> {
        let rows = self.fuzz.weights.rows();
        if v.rows() != rows {
            return Err(NetworkError::DimensionMismatch {
                what: "fuzzified vector",
                expected: rows,
                got: v.rows(),
            });
        }
        if let Some(&bad) = v.as_slice().iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(NetworkError::Structure(format!(
                "fuzzified signals must be finite and non-negative (found {bad})"
            )));
        }
        let n = self.minterms.exponent;
        let batch = v.cols();
        let rules = self.rule_count();
        let mut m = Matrix::zeros(rules, batch);
        match &self.backend {
            Backend::Ideal => {
                let mut block = vec![0.0; batch];
                let mut raw = vec![0.0; batch];
                for j in 0..rules {
                    raw.iter_mut().for_each(|x| *x = 0.0);
                    for (vi, var) in self.variables.iter().enumerate() {
                        let off = self.row_offsets[vi];
                        block.iter_mut().for_each(|x| *x = 0.0);
                        for r in off..off + var.universe.k() {
                            let w = self.minterms.weights.get(r, j);
                            for b in 0..batch {
                                block[b] += w * v.get(r, b);
                            }
                        }
                        for b in 0..batch {
                            raw[b] += block[b];
                        }
                    }
                    for b in 0..batch {
                        m.set(j, b, raw[b].powf(n));
                    }
                }
            }
            Backend::Device(d) => {
                for b in 0..batch {
                    let raw = d.minterms.read_vmm(&v.column(b), Orientation::RowsAsInputs)?;
                    for (j, x) in raw.into_iter().enumerate() {
                        m.set(j, b, x.max(0.0).powf(n));
                    }
                }
            }
        }
        Ok(m)
    }

    /// Per-group sums (one row per output concept).
    pub fn aggregate_batch(&self, m: &Matrix) -> Result<Matrix, NetworkError> {
        if m.rows() != self.rule_count() {
            return Err(NetworkError::DimensionMismatch {
                what: "minterm activations",
                expected: self.rule_count(),
                got: m.rows(),
            });
        }
        let batch = m.cols();
        let mut out = Matrix::zeros(self.agg.groups.len(), batch);
        match &self.backend {
            Backend::Ideal => {
                for (g, group) in self.agg.groups.iter().enumerate() {
                    for b in 0..batch {
                        let mut acc = 0.0;
                        for &r in &group.rules {
                            acc += m.get(r, b);
                        }
                        out.set(g, b, acc);
                    }
                }
            }
            Backend::Device(d) => {
                for b in 0..batch {
                    let sums = d.aggregation.read_vmm(&m.column(b), Orientation::RowsAsInputs)?;
                    for (g, x) in sums.into_iter().enumerate() {
                        out.set(g, b, x.max(0.0));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Full pipeline on a batch: one row per variable in, one row per concept out.
    pub fn infer_batch(&self, inputs: &Matrix) -> Result<Matrix, NetworkError> {
        let v = self.fuzzify_batch(inputs)?;
        let m = self.minterm_batch(&v)?;
        self.aggregate_batch(&m)
    }

    pub fn fuzzify(&self, inputs: &[f64]) -> Result<Vec<f64>, NetworkError> {
        Ok(self.fuzzify_batch(&single(inputs))?.column(0))
    }

    pub fn minterm_activations(&self, v: &[f64]) -> Result<Vec<f64>, NetworkError> {
        Ok(self.minterm_batch(&single(v))?.column(0))
    }

    pub fn aggregate(&self, m: &[f64]) -> Result<ConceptOutputs, NetworkError> {
        let out = self.aggregate_batch(&single(m))?.column(0);
        Ok(self.label(out))
    }

    pub fn infer(&self, inputs: &[f64]) -> Result<ConceptOutputs, NetworkError> {
        let out = self.infer_batch(&single(inputs))?.column(0);
        Ok(self.label(out))
    }

    fn label(&self, values: Vec<f64>) -> ConceptOutputs {
        ConceptOutputs {
            entries: self
                .agg
                .groups
                .iter()
                .zip(values)
                .map(|(g, v)| (g.output.clone(), g.term.clone(), v))
                .collect(),
        }
    }
}

fn single(v: &[f64]) -> Matrix {
    Matrix::from_row_major(v.len(), 1, v.to_vec())
}

/// Column a minterm must hold for `antecedent`: the named terms' samples per
/// variable block, `1/k` everywhere in blocks of unmentioned variables.
pub(crate) fn expected_minterm_column(
    variables: &[InputVariable],
    row_offsets: &[usize],
    rows: usize,
    antecedent: &[(String, String)],
) -> Result<Vec<f64>, String> {
    if antecedent.is_empty() {
        return Err("empty antecedent".into());
    }
    let mut col = vec![f64::NAN; rows];
    for (vi, var) in variables.iter().enumerate() {
        let k = var.universe.k();
        let off = row_offsets[vi];
        let mut hits = antecedent.iter().filter(|(v, _)| *v == var.name);
        match (hits.next(), hits.next()) {
            (Some(_), Some(_)) => return Err(format!("variable {} appears twice", var.name)),
            (Some((_, term)), None) => {
                let t = var
                    .terms
                    .iter()
                    .find(|t| t.name == *term)
                    .ok_or_else(|| format!("unknown term {term} for variable {}", var.name))?;
                col[off..off + k].copy_from_slice(&t.samples);
            }
            (None, _) => col[off..off + k].iter_mut().for_each(|w| *w = 1.0 / k as f64),
        }
    }
    if let Some((v, _)) = antecedent.iter().find(|(v, _)| !variables.iter().any(|x| x.name == *v)) {
        return Err(format!("unknown variable {v}"));
    }
    Ok(col)
}

/// Builds the minterm column for an antecedent against declared variables.
pub fn minterm_column(variables: &[InputVariable], antecedent: &[(String, String)]) -> Result<Vec<f64>, NetworkError> {
    let mut offsets = Vec::with_capacity(variables.len());
    let mut rows = 0;
    for v in variables {
        offsets.push(rows);
        rows += v.universe.k();
    }
    expected_minterm_column(variables, &offsets, rows, antecedent).map_err(NetworkError::Structure)
}
