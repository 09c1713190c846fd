//! Exhaustive checks over the small censuses and the N ≤ 13 enumeration.

use sturm_core::bijection::{permutation_to_signature, signature_to_permutation};
use sturm_core::census::{census, is_integrable_involution, is_sturm, CensusClass, Dedup};
use sturm_core::conngraph::{
    neumann_graph, neumann_graph_labelled, quotient_periodic, transitive_closure, transitive_reduction,
};
use sturm_core::lapsig::{enumerate_signatures, labels, LabelKind, tprime_signs, validate, Bound, FullLapSignature};
use sturm_core::perm::{morse_indices, reverse_trivial, two_cycles};
use sturm_core::pitchfork::{find_pitchforks, reduce_at};
use sturm_core::Permutation;

fn all_signatures() -> Vec<FullLapSignature> {
    let mut out = Vec::new();
    for es in enumerate_signatures(Bound::MaxN(13)).signatures {
        let r = es.signature.reversed();
        if r != es.signature {
            out.push(r);
        }
        out.push(es.signature);
    }
    out
}

fn sturm_upto(n: usize) -> Vec<Permutation> {
    (1..=n)
        .step_by(2)
        .flat_map(|k| census(k, CensusClass::All, Dedup::None).unwrap().members)
        .collect()
}

#[test]
fn reversal_preserves_sturm_and_mirrors_morse() {
    for p in sturm_upto(9) {
        let r = reverse_trivial(&p);
        assert_eq!(reverse_trivial(&r), p);
        assert!(is_sturm(&r).sturm, "{p}");
        let mut m = morse_indices(&r).values().to_vec();
        m.reverse();
        assert_eq!(m, morse_indices(&p).values());
    }
}

#[test]
fn pitchfork_reduction_keeps_sturm() {
    let mut reduced = 0;
    for p in sturm_upto(9) {
        if p.len() < 3 {
            continue;
        }
        for q in find_pitchforks(&p).unwrap() {
            let r = reduce_at(&p, q).unwrap();
            assert!(is_sturm(&r).sturm, "{p} at {q} gave {r}");
            reduced += 1;
        }
    }
    assert!(reduced > 0);
}

/// Some pitchfork keeps the integrable-involution property, all the way down to `N = 1`.
#[test]
fn integrable_reduction_path_exists() {
    fn reduce_within(p: &Permutation) -> bool {
        if p.len() == 1 {
            return true;
        }
        find_pitchforks(p).unwrap().into_iter().any(|q| {
            let r = reduce_at(p, q).unwrap();
            is_integrable_involution(&r).integrable && reduce_within(&r)
        })
    }
    for s in all_signatures() {
        let (p, _) = signature_to_permutation(&s).unwrap();
        assert!(reduce_within(&p), "{s}");
    }
}

#[test]
fn empty_central_pair_between_saddles_reduces_at_the_center() {
    for s in all_signatures() {
        let (p, _) = signature_to_permutation(&s).unwrap();
        let l = labels(&s).unwrap();
        for c in l.iter().filter(|x| x.kind == LabelKind::Center) {
            let j = c.position;
            if j < 2 || j >= p.len() || l[j - 2].kind != LabelKind::Saddle || l[j].kind != LabelKind::Saddle {
                continue;
            }
            assert!(find_pitchforks(&p).unwrap().contains(&(j - 1)), "{s}");
            let r = reduce_at(&p, j - 1).unwrap();
            assert!(is_integrable_involution(&r).integrable, "{s} gave {r}");
        }
    }
}

#[test]
fn off_center_pitchfork_can_break_the_involution() {
    let p: Permutation = "1,10,9,8,5,6,7,4,3,2,11".parse().unwrap();
    assert!(is_integrable_involution(&p).integrable);
    let r = reduce_at(&p, 2).unwrap();
    assert_eq!(r.to_string(), "1,8,5,6,7,4,3,2,9");
    assert!(is_sturm(&r).sturm);
    assert!(!r.is_involution());
}

#[test]
fn enumerated_signatures_are_consistent() {
    for s in all_signatures() {
        assert!(validate(&s).is_empty(), "{s}");
        for pair in s.pairs_preorder() {
            tprime_signs(pair.lower()).unwrap();
        }
        let c = s.counts();
        let r = s.reversed();
        assert_eq!(r.counts(), c);
        assert!(validate(&r).is_empty());
        let (p, pairing) = signature_to_permutation(&s).unwrap();
        assert_eq!(pairing.len(), c.q);
        let odd: Vec<(usize, usize)> = pairing.odd().map(|f| (f.min, f.max)).collect();
        let mut odd_sorted = odd.clone();
        odd_sorted.sort();
        assert_eq!(odd_sorted, two_cycles(&p), "{s}");
        let report = is_integrable_involution(&p);
        assert!(report.sturm && report.integrable, "{s}");
        assert_eq!(permutation_to_signature(&p).unwrap(), s);
        let l = labels(&s).unwrap();
        let from_laps: Vec<i64> = l.iter().map(|x| x.morse_neumann as i64).collect();
        assert_eq!(morse_indices(&p).values(), from_laps.as_slice(), "{s}");
    }
}

#[test]
fn graphs_of_enumerated_signatures() {
    for s in all_signatures() {
        let (p, pairing) = signature_to_permutation(&s).unwrap();
        let l = labels(&s).unwrap();
        let g = neumann_graph_labelled(&p, &l).unwrap();
        assert!(g.is_acyclic() && g.is_graded());
        for &(a, b) in &g.edges {
            assert!(g.vertex(a).unwrap().morse > g.vertex(b).unwrap().morse);
        }
        let closure = transitive_closure(&g).unwrap();
        assert_eq!(transitive_closure(&transitive_reduction(&g).unwrap()).unwrap(), closure);
        let q = quotient_periodic(&g, &pairing, &l).unwrap();
        let c = s.counts();
        assert_eq!(q.vertices.len(), c.n + c.q, "{s}");
        assert!(q.is_graded() && q.is_acyclic(), "{s}");
    }
}

#[test]
fn census_agrees_with_enumeration() {
    let by_n = enumerate_signatures(Bound::MaxN(13)).counts_by_big_n();
    for n in (1..=13).step_by(2) {
        let r = census(n, CensusClass::Integrable, Dedup::Trivial).unwrap();
        assert_eq!(by_n.get(&n).copied().unwrap_or((0, 0)), (r.raw, r.upto_trivial), "N = {n}");
    }
}

#[test]
fn census_involutions_round_trip() {
    for n in (1..=13).step_by(2) {
        for p in census(n, CensusClass::Integrable, Dedup::None).unwrap().members {
            let s = permutation_to_signature(&p).unwrap();
            assert_eq!(signature_to_permutation(&s).unwrap().0, p);
        }
    }
}

#[test]
fn neumann_graphs_over_the_census() {
    for p in sturm_upto(11) {
        let g = neumann_graph(&p).unwrap();
        assert!(g.is_graded() && g.is_acyclic(), "{p}");
    }
}

#[test]
fn all_sturm_permutations_at_thirteen() {
    let r = census(13, CensusClass::All, Dedup::Trivial).unwrap();
    assert_eq!((r.raw, r.upto_trivial), (1083, 566));
    let i = census(13, CensusClass::Integrable, Dedup::Trivial).unwrap();
    assert_eq!((i.raw, i.upto_trivial), (96, 61));
}
