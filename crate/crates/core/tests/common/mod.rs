#![allow(dead_code)]

use milnor::diagram::{make_milnor_link, make_v_tau, BraidWord, LinkDiagram};
use milnor::multiindex::{enumerate_p, enumerate_r};

pub fn hopf() -> LinkDiagram {
    BraidWord::new(2, vec![1, 1]).unwrap().closure().unwrap()
}

/// Closure of `σ1² σ2⁻¹ σ1 σ2⁻¹`.
pub fn whitehead() -> LinkDiagram {
    BraidWord::new(3, vec![1, 1, -2, 1, -2]).unwrap().closure().unwrap()
}

/// Closures of `V_τ` for `τ` in `R_{2n-1}(n)`, `R_{2n}(n)` and `P_{2n}(n)`.
pub fn v_tau_closures(n: usize) -> Vec<(String, LinkDiagram)> {
    let mut taus = enumerate_r(2 * n - 1, n, n).unwrap();
    taus.extend(enumerate_r(2 * n, n, n).unwrap());
    taus.extend(enumerate_p(2 * n, n, n).unwrap());
    taus.into_iter()
        .map(|t| (format!("V_{t} (m={})", t.m), make_v_tau(&t, 1).unwrap().closure()))
        .collect()
}

/// The named link corpus used across the suites.
pub fn corpus() -> Vec<(String, LinkDiagram)> {
    let mut out = vec![
        ("trivial2".to_string(), LinkDiagram::trivial(2)),
        ("trivial3".to_string(), LinkDiagram::trivial(3)),
        ("hopf".to_string(), hopf()),
        ("whitehead".to_string(), whitehead()),
        ("M3".to_string(), make_milnor_link(3).unwrap()),
    ];
    out.extend(v_tau_closures(2));
    out.extend(v_tau_closures(3));
    out
}
