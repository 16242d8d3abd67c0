mod common;

use std::collections::BTreeSet;

use milnor::diagram::*;
use milnor::invariants::*;
use milnor::multiindex::*;
use milnor::wirtinger::presentation;
use milnor::{MultiIndex, Residue};
use num_bigint::BigInt;
use proptest::prelude::*;

fn idx(s: &str) -> MultiIndex {
    s.parse().unwrap()
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

#[test]
fn milnor_link_examples() {
    let m4 = make_milnor_link(4).unwrap();
    let e = MilnorEngine::new(m4.diagram());
    assert_eq!(e.mubar(&idx("1234"), DeltaMode::default()).unwrap(), Residue::exact(big(1)));
    assert_eq!(e.mubar(&idx("2134"), DeltaMode::default()).unwrap(), Residue::exact(big(0)));
    let m2 = make_milnor_link(2).unwrap();
    assert_eq!(mubar(&m2, &idx("12"), DeltaMode::default()).unwrap(), Residue::exact(big(1)));
}

#[test]
fn m3_table_is_supported_on_permutations() {
    let m3 = make_milnor_link(3).unwrap();
    let t = table(m3.diagram(), "M3", 3, 1, DeltaMode::default()).unwrap();
    assert_eq!(t.get(&idx("123")).unwrap().value, big(1));
    let nonzero: BTreeSet<Vec<usize>> =
        t.entries.iter().filter(|e| e.value != big(0)).map(|e| e.index.entries().to_vec()).collect();
    let perms: BTreeSet<Vec<usize>> = enumerate_indices(3, 3, 3, 1).into_iter().map(|i| i.entries().to_vec()).collect();
    assert_eq!(nonzero, perms);
    for e in &t.entries {
        assert!(e.value == big(0) || e.value == big(1) || e.value == big(-1));
        assert_eq!(e.modulus, big(0));
    }
    // odd permutations carry the opposite sign
    assert_eq!(t.get(&idx("213")).unwrap().value, big(-1));
    assert_eq!(t.get(&idx("231")).unwrap().value, big(1));
}

#[test]
fn stacked_clasps_add_linking() {
    let s = BraidWord::new(2, vec![1, 1]).unwrap().to_string_link().unwrap();
    assert_eq!(mu_string(&s, &idx("12")).unwrap(), big(1));
    assert_eq!(mu_string(&s.stack(&s).unwrap(), &idx("12")).unwrap(), big(2));
    let inv = BraidWord::new(2, vec![-1, -1]).unwrap().to_string_link().unwrap();
    assert_eq!(mu_string(&s.stack(&inv).unwrap(), &idx("21")).unwrap(), big(0));
}

#[test]
fn generator_inverse_values() {
    for pi in enumerate_f_all(4) {
        let v = make_v_pi(&pi, -1).unwrap();
        assert_eq!(mu_string(&v, &pi.index()).unwrap(), big(-1), "V_{pi}^-1");
    }
}

/// Only `r <= 2` is pinned: the self-clasped realization carries `r = 3`
/// values at length `2n-1` (e.g. `mu(12333) = -1` for `V_121`).
#[test]
fn symmetric_generators_of_odd_degree_vanish_below_2n() {
    for n in 2..=3 {
        for k in [n, n - 1] {
            for phi in enumerate_r(2 * n - 1, k, n).unwrap() {
                let e = MilnorEngine::new(make_v_tau(&phi, 1).unwrap().diagram());
                e.prepare(2 * n - 1, 2).unwrap();
                for i in enumerate_indices(n, 2, 2 * n - 1, 2) {
                    assert_eq!(e.mu(&i).unwrap(), big(0), "V_{phi} (k={k}) at {i}");
                }
            }
        }
    }
}

#[test]
fn symmetric_generators_of_odd_degree_hit_their_partner() {
    for n in 2..=3 {
        let mut taus = enumerate_r(2 * n, n, n).unwrap();
        taus.extend(enumerate_p(2 * n, n, n).unwrap());
        for phi in enumerate_r(2 * n - 1, n, n).unwrap() {
            let e = MilnorEngine::new(make_v_tau(&phi, 1).unwrap().diagram());
            let partner = r_partner(&phi).unwrap();
            for tau in &taus {
                let v = e.mu(&tau.index()).unwrap();
                let expect = if *tau == partner { 1 } else { 0 };
                assert_eq!(v.magnitude(), big(expect).magnitude(), "mu_{tau}(V_{phi})");
            }
        }
    }
}

#[test]
fn closure_matches_string_link_at_first_nonvanishing_length() {
    let mut cases: Vec<(StringLinkDiagram, usize)> = Vec::new();
    for pi in enumerate_f_all(4) {
        cases.push((make_v_pi(&pi, 1).unwrap(), pi.arity()));
    }
    for tau in enumerate_p(5, 3, 3).unwrap() {
        cases.push((make_v_tau(&tau, 1).unwrap(), 5));
    }
    for (s, len) in cases {
        let string = MilnorEngine::new(s.diagram());
        let closed = MilnorEngine::new(s.closure().diagram());
        let n = s.n();
        string.prepare(len, len).unwrap();
        closed.prepare(len, len).unwrap();
        for i in enumerate_indices(n, 2, len - 1, len - 1) {
            assert_eq!(string.mu(&i).unwrap(), big(0));
        }
        for i in enumerate_indices(n, len, len, 2) {
            let bar = closed.mubar(&i, DeltaMode::default()).unwrap();
            assert_eq!(bar, Residue::exact(string.mu(&i).unwrap()), "{i}");
        }
    }
}

#[test]
fn conjugate_representatives_give_the_same_closure_invariants() {
    let a = make_v_pi(&InjectionPi::new(3, vec![1, 2]).unwrap(), 1).unwrap();
    let ai = make_v_pi(&InjectionPi::new(3, vec![1, 2]).unwrap(), -1).unwrap();
    let b = make_v_pi(&InjectionPi::new(3, vec![1, 2, 3]).unwrap(), 1).unwrap();
    let conj = a.stack(&b).unwrap().stack(&ai).unwrap();
    let t1 = table(b.closure().diagram(), "x", 3, 1, DeltaMode::default()).unwrap();
    let t2 = table(conj.closure().diagram(), "x", 3, 1, DeltaMode::default()).unwrap();
    assert_eq!(t1.entries, t2.entries);
}

#[test]
fn indeterminacy_subsequences() {
    let strict = subsequences(&[1, 2, 3], DeltaMode::PaperStrict);
    let expect: BTreeSet<Vec<usize>> = [vec![1, 2], vec![1, 3], vec![2, 3]].into_iter().collect();
    assert_eq!(strict, expect);
    let cyclic = subsequences(&[1, 2, 3], DeltaMode::MilnorCyclic);
    assert_eq!(cyclic.len(), 6);
    assert!(cyclic.contains(&vec![3, 1]));
    assert!(subsequences(&[1, 2], DeltaMode::MilnorCyclic).is_empty());
}

#[test]
fn indeterminacy_of_hopf_cable() {
    let (c, _) = common::hopf().cable(&[1, 2]).unwrap();
    assert_eq!(delta(&c, &idx("123"), DeltaMode::default()).unwrap(), big(1));
    assert_eq!(mubar(&c, &idx("123"), DeltaMode::default()).unwrap(), Residue::new(big(0), big(1)));
    assert_eq!(delta(&common::hopf(), &idx("12"), DeltaMode::PaperStrict).unwrap(), big(0));
}

#[test]
fn residues_normalize() {
    assert_eq!(Residue::new(big(-1), big(3)).value, big(2));
    assert_eq!(Residue::new(big(5), big(-3)).modulus, big(3));
    assert!(Residue::new(big(7), big(1)).is_zero());
    assert_eq!(Residue::exact(big(-4)).to_string(), "-4 (mod 0)");
}

#[test]
fn delta_mode_text_forms() {
    for m in [DeltaMode::MilnorCyclic, DeltaMode::PaperStrict] {
        assert_eq!(m.to_string().parse::<DeltaMode>().unwrap(), m);
    }
    assert!("cyclic".parse::<DeltaMode>().is_err());
    assert_eq!(DeltaMode::default(), DeltaMode::MilnorCyclic);
}

#[test]
fn engine_rejects_bad_indices() {
    let e = MilnorEngine::new(common::hopf().diagram());
    assert!(e.mu(&idx("1")).is_err());
    assert!(e.mu(&idx("13")).is_err());
    assert!(table(common::hopf().diagram(), "h", 1, 1, DeltaMode::default()).is_err());
}

#[test]
fn table_serializations() {
    let t = table(common::hopf().diagram(), "hopf", 2, 1, DeltaMode::default()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
    assert_eq!(v["entries"][0]["index"], "12");
    assert_eq!(v["entries"][0]["value"], 1);
    assert_eq!(v["entries"][0]["modulus"], 0);
    let text = t.to_text(true);
    assert!(text.lines().any(|l| l.trim() == "12: 1 (mod 0)"));
    let s = BraidWord::new(2, vec![1, 1]).unwrap().to_string_link().unwrap();
    let ts = table(s.diagram(), "s", 2, 1, DeltaMode::default()).unwrap();
    assert!(ts.to_text(false).lines().any(|l| l.trim() == "12: 1"));
}

#[test]
fn longitudes_are_stable_in_depth_and_zero_framed() {
    for (name, l) in common::corpus().into_iter().take(5) {
        let p = presentation(l.diagram());
        let q = 5;
        let a = p.longitude_series(q, 3, q + 1).unwrap();
        let b = p.longitude_series(q, 3, q + 3).unwrap();
        assert_eq!(a, b, "{name}");
        for (i, s) in a.iter().enumerate() {
            assert_eq!(s.coefficient(&[i + 1]).unwrap(), big(0), "{name}");
        }
    }
}

fn generator_product(n: usize, choices: &[(usize, bool)], k: usize) -> StringLinkDiagram {
    let family = enumerate_f(k, n).unwrap();
    let mut acc = StringLinkDiagram::trivial(n);
    for &(c, inv) in choices {
        acc = acc.stack(&make_v_pi(&family[c % family.len()], if inv { -1 } else { 1 }).unwrap()).unwrap();
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn stacking_adds_invariants_of_generator_products(
        ka in 2usize..=3,
        kb in 2usize..=3,
        a in proptest::collection::vec((0usize..6, any::<bool>()), 1..3),
        b in proptest::collection::vec((0usize..6, any::<bool>()), 1..3),
    ) {
        let (x, y) = (generator_product(3, &a, ka), generator_product(3, &b, kb));
        let xy = x.stack(&y).unwrap();
        let bound = ((ka - 1) + (kb - 1)).min(4);
        let (ex, ey, exy) = (MilnorEngine::new(x.diagram()), MilnorEngine::new(y.diagram()), MilnorEngine::new(xy.diagram()));
        for i in enumerate_indices(3, 2, bound, bound) {
            prop_assert_eq!(exy.mu(&i).unwrap(), ex.mu(&i).unwrap() + ey.mu(&i).unwrap());
        }
    }

    #[test]
    fn mubar_is_cyclically_symmetric(word in proptest::collection::vec((1i64..3, any::<bool>()), 0..8)) {
        let b = BraidWord::new(3, word.into_iter().map(|(g, neg)| if neg { -g } else { g }).collect()).unwrap();
        let l = b.closure().unwrap();
        if l.n() >= 2 {
            let e = MilnorEngine::new(l.diagram());
            for i in enumerate_indices(l.n(), 2, 3, 3) {
                let base = e.mubar(&i, DeltaMode::default()).unwrap();
                for s in 1..i.len() {
                    prop_assert_eq!(&e.mubar(&i.rotated(s), DeltaMode::default()).unwrap(), &base);
                }
            }
        }
    }
}
