//! Shared helpers: a random rule-base generator and a dense reference evaluator
//! written independently of the library's layer code.

#![allow(dead_code)]

use std::fmt::Write;

use rand::seq::IndexedRandom;
use rand::Rng;

pub struct RandomBase {
    pub source: String,
    pub k: usize,
    pub exponent: f64,
}

/// Rule-base text with 1..=4 inputs, 1..=3 terms each, distinct antecedents.
pub fn random_rule_base(rng: &mut impl Rng) -> RandomBase {
    let k = rng.random_range(2..=32);
    let exponent = *[1.0, 2.0, 3.0, 2.5, 4.0, 7.0].choose(rng).unwrap();
    let n_vars = rng.random_range(1..=4);
    let mut src = String::new();
    let mut terms_per_var = Vec::new();
    for v in 0..n_vars {
        let lo: f64 = rng.random_range(-5.0..5.0);
        let hi = lo + rng.random_range(0.5..10.0);
        let n_terms = rng.random_range(1..=3);
        terms_per_var.push(n_terms);
        write!(src, "var v{v} : {lo:e} .. {hi:e} {{ ").unwrap();
        for t in 0..n_terms {
            // peak on a grid point so the discretized term is never empty
            let i = rng.random_range(0..k);
            let b = grid_point(lo, hi, k, i);
            let a = if rng.random_bool(0.3) { b } else { rng.random_range(lo..=b) };
            let c = if rng.random_bool(0.3) { b } else { rng.random_range(b..=hi) };
            if t > 0 {
                src.push_str(", ");
            }
            write!(src, "t{t} = tri({a:e}, {b:e}, {c:e})").unwrap();
        }
        src.push_str(" }\n");
    }
    let n_out_terms = rng.random_range(1..=3);
    src.push_str("out y : 0 .. 1 { ");
    for t in 0..n_out_terms {
        if t > 0 {
            src.push_str(", ");
        }
        write!(src, "o{t} = tri(0, 0.5, 1)").unwrap();
    }
    src.push_str(" }\n");

    let mut seen: Vec<Vec<Option<usize>>> = Vec::new();
    let n_rules = rng.random_range(1..=8);
    for _ in 0..n_rules * 3 {
        if seen.len() == n_rules {
            break;
        }
        let ante: Vec<Option<usize>> = terms_per_var
            .iter()
            .map(|&n| rng.random_bool(0.8).then(|| rng.random_range(0..n)))
            .collect();
        if ante.iter().all(Option::is_none) || seen.contains(&ante) {
            continue;
        }
        let conds: Vec<String> = ante
            .iter()
            .enumerate()
            .filter_map(|(v, t)| t.map(|t| format!("v{v} is t{t}")))
            .collect();
        writeln!(src, "IF {} THEN y is o{}", conds.join(" AND "), rng.random_range(0..n_out_terms)).unwrap();
        seen.push(ante);
    }
    if seen.is_empty() {
        src.push_str("IF v0 is t0 THEN y is o0\n");
    }
    RandomBase { source: src, k, exponent }
}

pub fn grid_point(lo: f64, hi: f64, k: usize, i: usize) -> f64 {
    if i + 1 == k {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (k - 1) as f64
    }
}

fn tri(a: f64, b: f64, c: f64, x: f64) -> f64 {
    if x == b {
        1.0
    } else if x <= a || x >= c {
        0.0
    } else if x < b {
        (x - a) / (b - a)
    } else {
        (c - x) / (c - b)
    }
}

struct OVar {
    name: String,
    lo: f64,
    hi: f64,
    terms: Vec<(String, Vec<f64>)>,
}

/// Dense evaluation straight from the rule-base text: discretize every term,
/// build each variable's fuzzy number as the membership-weighted sum of its
/// terminal signals (x − lo for upper terms, hi − x for lower ones), dot every
/// rule column against the stacked vector, raise to the exponent and sum rules
/// per consequent. Returns `(consequent label, value)` in first-appearance order.
pub fn oracle_infer(rb: &memfuzz::rulebase::RuleBase, k: usize, exponent: f64, x: &[f64]) -> Vec<(String, f64)> {
    use memfuzz::fuzzy::MembershipFunction;

    let vars: Vec<OVar> = rb
        .inputs
        .iter()
        .map(|d| OVar {
            name: d.name.clone(),
            lo: d.lo,
            hi: d.hi,
            terms: d
                .terms
                .iter()
                .map(|t| {
                    let MembershipFunction::Triangular { a, b, c } = t.shape else {
                        panic!("oracle only handles triangles")
                    };
                    (t.name.clone(), (0..k).map(|i| tri(a, b, c, grid_point(d.lo, d.hi, k, i))).collect())
                })
                .collect(),
        })
        .collect();

    // fuzzy number per variable
    let fuzzy: Vec<Vec<f64>> = vars
        .iter()
        .zip(x)
        .map(|(v, &xv)| {
            let mid = 0.5 * (v.lo + v.hi);
            let mut out = vec![0.0; k];
            for (_, mu) in &v.terms {
                let mass: f64 = mu.iter().sum();
                let centroid: f64 = (0..k).map(|i| grid_point(v.lo, v.hi, k, i) * mu[i]).sum::<f64>() / mass;
                let signal = if centroid >= mid { xv - v.lo } else { v.hi - xv };
                for i in 0..k {
                    out[i] += mu[i] * signal;
                }
            }
            out
        })
        .collect();

    let mut groups: Vec<(String, f64)> = Vec::new();
    for rule in &rb.rules {
        let mut raw = 0.0;
        for (v, var) in vars.iter().enumerate() {
            let column: Vec<f64> = match rule.antecedent.iter().find(|c| c.variable == var.name) {
                Some(c) => var.terms.iter().find(|(n, _)| *n == c.term).unwrap().1.clone(),
                None => vec![1.0 / k as f64; k],
            };
            raw += column.iter().zip(&fuzzy[v]).map(|(w, f)| w * f).sum::<f64>();
        }
        let act = raw.powf(exponent);
        let label = format!("{}.{}", rule.consequent.variable, rule.consequent.term);
        match groups.iter_mut().find(|(l, _)| *l == label) {
            Some(g) => g.1 += act,
            None => groups.push((label, act)),
        }
    }
    groups
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

/// Checks one random rule base against the oracle at `points` random inputs;
/// returns the largest relative error seen.
pub fn oracle_max_rel_error(rng: &mut impl Rng, points: usize) -> Result<f64, String> {
    use memfuzz::rulebase::{compile_to_network, parse, CompileBackend};

    let base = random_rule_base(rng);
    let rb = parse(&base.source).map_err(|e| format!("{e}\n{}", base.source))?;
    let net = compile_to_network(&rb, base.k, base.exponent, CompileBackend::Ideal)
        .map_err(|e| format!("{e}\n{}", base.source))?;
    let mut worst = 0.0f64;
    for _ in 0..points {
        let x: Vec<f64> = rb.inputs.iter().map(|v| rng.random_range(v.lo..=v.hi)).collect();
        let want = oracle_infer(&rb, base.k, base.exponent, &x);
        let got = net.infer(&x).map_err(|e| e.to_string())?;
        if want.len() != got.len() {
            return Err(format!("{} concepts vs {}", got.len(), want.len()));
        }
        for (label, w) in &want {
            let g = got.get(label).ok_or_else(|| format!("missing concept {label}"))?;
            let scale = w.abs().max(g.abs());
            if scale > 0.0 {
                worst = worst.max((g - w).abs() / scale);
            }
        }
    }
    Ok(worst)
}
