use std::collections::BTreeSet;

use super::{Diagnostic, DiagnosticKind, RuleBase};

/// Input-term combinations beyond this count are not enumerated for coverage.
const MAX_COMBINATIONS: usize = 1 << 16;

/// Coverage and consistency checks on a parsed rule base.
///
/// Warnings: input-term combinations no rule covers, input terms no rule uses,
/// repeated rules. Errors: identical antecedents with different consequents.
pub fn validate(rb: &RuleBase) -> Vec<Diagnostic> {
    let mut diags = Vec::new();

    let antecedents: Vec<BTreeSet<(&str, &str)>> = rb
        .rules
        .iter()
        .map(|r| r.antecedent.iter().map(|c| (c.variable.as_str(), c.term.as_str())).collect())
        .collect();

    for j in 0..rb.rules.len() {
        for i in 0..j {
            if antecedents[i] != antecedents[j] {
                continue;
            }
            let (a, b) = (&rb.rules[i].consequent, &rb.rules[j].consequent);
            let conflict = a.variable != b.variable || a.term != b.term;
            diags.push(Diagnostic {
                kind: if conflict {
                    DiagnosticKind::ConflictingRules { first: i, second: j }
                } else {
                    DiagnosticKind::DuplicateRule { first: i, second: j }
                },
                pos: Some(rb.rules[j].pos),
                message: if conflict {
                    format!(
                        "rules {} and {} share an antecedent but conclude `{} is {}` vs `{} is {}`",
                        i + 1,
                        j + 1,
                        a.variable,
                        a.term,
                        b.variable,
                        b.term
                    )
                } else {
                    format!("rule {} repeats rule {}", j + 1, i + 1)
                },
            });
            break;
        }
    }

    for var in &rb.inputs {
        for term in &var.terms {
            let used = rb
                .rules
                .iter()
                .any(|r| r.antecedent.iter().any(|c| c.variable == var.name && c.term == term.name));
            if !used {
                diags.push(Diagnostic {
                    kind: DiagnosticKind::UnusedTerm {
                        variable: var.name.clone(),
                        term: term.name.clone(),
                    },
                    pos: Some(term.pos),
                    message: format!("term `{}` of `{}` is not used by any rule", term.name, var.name),
                });
            }
        }
    }

    let total = rb
        .inputs
        .iter()
        .try_fold(1usize, |acc, v| acc.checked_mul(v.terms.len()))
        .unwrap_or(usize::MAX);
    if total <= MAX_COMBINATIONS {
        let mut idx = vec![0usize; rb.inputs.len()];
        for _ in 0..total {
            let combo: Vec<(&str, &str)> = rb
                .inputs
                .iter()
                .zip(&idx)
                .map(|(v, &t)| (v.name.as_str(), v.terms[t].name.as_str()))
                .collect();
            let covered = antecedents.iter().any(|ante| ante.iter().all(|c| combo.contains(c)));
            if !covered {
                let terms: Vec<(String, String)> =
                    combo.iter().map(|(v, t)| (v.to_string(), t.to_string())).collect();
                let listed: Vec<String> = combo.iter().map(|(v, t)| format!("{v} is {t}")).collect();
                diags.push(Diagnostic {
                    kind: DiagnosticKind::UncoveredCombination { terms },
                    pos: None,
                    message: format!("no rule covers ({})", listed.join(", ")),
                });
            }
            // odometer increment, last variable fastest
            for d in (0..idx.len()).rev() {
                idx[d] += 1;
                if idx[d] < rb.inputs[d].terms.len() {
                    break;
                }
                idx[d] = 0;
            }
        }
    }

    diags
}
