mod common;

use cyclewall::{reference, GroupElement, Presentation, Syllable, VertexSet};
use proptest::prelude::*;

use common::{from_syllables, oracle_normal_form, to_syllables};

fn raw_word(p: &Presentation, max_len: usize) -> impl Strategy<Value = Vec<(usize, i64)>> {
    let letters: Vec<(usize, i64)> = (0..p.n())
        .flat_map(|v| p.group(v).non_identity().unwrap().into_iter().map(move |e| (v, e)))
        .collect();
    prop::collection::vec(prop::sample::select(letters), 0..=max_len)
}

fn element(p: &Presentation, max_len: usize) -> impl Strategy<Value = GroupElement> {
    let q = p.clone();
    raw_word(p, max_len).prop_map(move |w| q.reduce(&to_syllables(&w)))
}

fn subset(n: usize) -> impl Strategy<Value = VertexSet> {
    (0..n, 0..3usize).prop_map(move |(i, k)| {
        let vs = match k {
            0 => vec![i],
            1 => vec![i, (i + 1) % n],
            _ => vec![(i + n - 1) % n, i, (i + 1) % n],
        };
        vs.into_iter().collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn reduce_matches_rewriting_oracle_with_s3_factors(w in raw_word(&reference::c5_mixed(), 7)) {
        let p = reference::c5_mixed();
        let got = from_syllables(p.reduce(&to_syllables(&w)).syllables());
        prop_assert_eq!(got, oracle_normal_form(&p, &w));
    }

    #[test]
    fn reduce_matches_rewriting_oracle_on_hexagon(w in raw_word(&reference::c6_mixed(), 6)) {
        let p = reference::c6_mixed();
        let got = from_syllables(p.reduce(&to_syllables(&w)).syllables());
        prop_assert_eq!(got, oracle_normal_form(&p, &w));
    }

    #[test]
    fn reduction_is_idempotent(g in element(&reference::c5_z3(), 12)) {
        let p = reference::c5_z3();
        prop_assert_eq!(p.reduce(g.syllables()), g);
    }

    #[test]
    fn printing_and_parsing_round_trip(g in element(&reference::c6_mixed(), 10)) {
        let p = reference::c6_mixed();
        prop_assert_eq!(p.parse_element(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn multiplication_is_associative(
        a in element(&reference::c5_mixed(), 6),
        b in element(&reference::c5_mixed(), 6),
        c in element(&reference::c5_mixed(), 6),
    ) {
        let p = reference::c5_mixed();
        prop_assert_eq!(p.mul(&p.mul(&a, &b), &c), p.mul(&a, &p.mul(&b, &c)));
    }

    #[test]
    fn double_coset_core_is_invariant(
        g in element(&reference::c5_z3(), 8),
        left in subset(5),
        right in subset(5),
        x in element(&reference::c5_z3(), 4),
        y in element(&reference::c5_z3(), 4),
    ) {
        let p = reference::c5_z3();
        let (a, m, b) = p.double_coset_split(&g, left, right);
        prop_assert_eq!(p.mul_all([&a, &m, &b]), g.clone());
        prop_assert!(p.support(&a).is_subset(left) && p.support(&b).is_subset(right));
        // moving within the double coset keeps the core
        let keep = |h: &GroupElement, s: VertexSet| -> GroupElement {
            p.reduce(&h.syllables().iter().copied().filter(|t: &Syllable| s.contains(t.vertex)).collect::<Vec<_>>())
        };
        let (xl, yr) = (keep(&x, left), keep(&y, right));
        let moved = p.mul_all([&xl, &g, &yr]);
        prop_assert_eq!(p.double_coset_split(&moved, left, right).1, m);
    }

    #[test]
    fn coset_rep_is_shortest_in_its_coset(
        g in element(&reference::c5_mixed(), 8),
        set in subset(5),
        x in element(&reference::c5_mixed(), 4),
    ) {
        let p = reference::c5_mixed();
        let rep = p.coset_rep(&g, set);
        let h: Vec<Syllable> = x.syllables().iter().copied().filter(|t| set.contains(t.vertex)).collect();
        let other = p.mul(&g, &p.reduce(&h));
        prop_assert_eq!(p.coset_rep(&other, set), rep.clone());
        prop_assert!(rep.len() <= other.len());
    }
}

#[test]
fn examples_from_the_word_syntax() {
    let p = reference::c5_z2();
    assert_eq!(p.parse_element("").unwrap(), GroupElement::identity());
    assert_eq!(p.parse_element("v1:1 v2:1 v1:1").unwrap().to_string(), "v2:1");
    assert!(p.parse_element("v6:1").is_err());
}
