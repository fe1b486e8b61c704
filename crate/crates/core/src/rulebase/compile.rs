use crate::fuzzy::{
    minterm_column, DeviceConfig, FuzzyNetwork, InputVariable, Minterm, OutputGroup, Polarity, Term, Universe,
};

use super::{validate, CompileError, RuleBase};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum CompileBackend {
    #[default]
    Ideal,
    Device(DeviceConfig),
}

/// Builds the three-layer network for a rule base.
///
/// Every input variable is discretized at `k` points. `S` gets one column per
/// (input, term), minterms one column per rule in source order, and rules are
/// grouped by consequent in order of first appearance.
pub fn compile_to_network(
    rb: &RuleBase,
    k: usize,
    exponent: f64,
    backend: CompileBackend,
) -> Result<FuzzyNetwork, CompileError> {
    if k < 2 {
        return Err(CompileError::InvalidGrid(k));
    }
    if !(exponent.is_finite() && exponent >= 1.0) {
        return Err(CompileError::InvalidExponent(exponent));
    }
    let errors: Vec<_> = validate(rb).into_iter().filter(|d| d.is_error()).collect();
    if !errors.is_empty() {
        return Err(CompileError::Validation(errors));
    }

    let mut variables = Vec::with_capacity(rb.inputs.len());
    for decl in &rb.inputs {
        let universe = Universe::new(decl.lo, decl.hi, k)?;
        let mut terms = Vec::with_capacity(decl.terms.len());
        for t in &decl.terms {
            let samples = t.shape.discretize(&universe).map_err(|source| CompileError::Membership {
                variable: decl.name.clone(),
                term: t.name.clone(),
                source,
            })?;
            terms.push(Term {
                name: t.name.clone(),
                polarity: Polarity::for_samples(&samples, &universe),
                samples,
            });
        }
        variables.push(InputVariable {
            name: decl.name.clone(),
            universe,
            terms,
        });
    }

    let mut minterms = Vec::with_capacity(rb.rules.len());
    let mut groups: Vec<OutputGroup> = Vec::new();
    for (ri, rule) in rb.rules.iter().enumerate() {
        let antecedent: Vec<(String, String)> = rule
            .antecedent
            .iter()
            .map(|c| (c.variable.clone(), c.term.clone()))
            .collect();
        let column = minterm_column(&variables, &antecedent)?;
        minterms.push(Minterm { antecedent, column });

        let (out, term) = (&rule.consequent.variable, &rule.consequent.term);
        match groups.iter_mut().find(|g| g.output == *out && g.term == *term) {
            Some(g) => g.rules.push(ri),
            None => groups.push(OutputGroup {
                output: out.clone(),
                term: term.clone(),
                rules: vec![ri],
            }),
        }
    }

    let net = FuzzyNetwork::from_parts(variables, minterms, groups, exponent)?;
    match backend {
        CompileBackend::Ideal => Ok(net),
        CompileBackend::Device(cfg) => Ok(net.program_onto_device(&cfg)?),
    }
}
