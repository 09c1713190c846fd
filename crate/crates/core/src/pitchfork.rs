//! Formal pitchfork reductions `N → N − 2` on permutations.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// One reduction: the position, the three values collapsed there, and the result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub position: usize,
    pub collapsed: [usize; 3],
    pub result: Permutation,
}

pub type ReductionTrace = Vec<ReductionStep>;

/// Largest `N` accepted by [`fully_reducible_exhaustive`].
pub const EXHAUSTIVE_LIMIT: usize = 13;

fn is_pitchfork(p: &Permutation, q: usize) -> bool {
    let (a, b, c) = (p.get(q), p.get(q + 1), p.get(q + 2));
    (b == a + 1 && c == b + 1) || (a == b + 1 && b == c + 1)
}

/// Positions `q` where `σ(q), σ(q+1), σ(q+2)` are consecutive integers in
/// ascending or descending order.
pub fn find_pitchforks(p: &Permutation) -> Result<Vec<usize>> {
    if p.len() < 3 {
        return Err(Error::InvalidArgument(format!("pitchforks need N ≥ 3, got {}", p.len())));
    }
    Ok((1..=p.len() - 2).filter(|&q| is_pitchfork(p, q)).collect())
}

/// Collapses the triple at `q` onto its minimum and relabels onto `1..=N−2`.
pub fn reduce_at(p: &Permutation, q: usize) -> Result<Permutation> {
    if p.len() < 3 || q == 0 || q + 2 > p.len() || !is_pitchfork(p, q) {
        return Err(Error::InvalidArgument(format!("no pitchfork at position {q} of {p}")));
    }
    let m = p.get(q).min(p.get(q + 2));
    let entries = p
        .entries()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != q && i != q + 1)
        .map(|(i, &v)| if i + 1 == q { m } else if v > m + 2 { v - 2 } else { v })
        .collect();
    Permutation::new(entries)
}

fn step(p: &Permutation, q: usize) -> Result<ReductionStep> {
    Ok(ReductionStep {
        position: q,
        collapsed: [p.get(q), p.get(q + 1), p.get(q + 2)],
        result: reduce_at(p, q)?,
    })
}

/// Greedy reduction at the first pitchfork each time; succeeds on reaching `N = 1`.
pub fn fully_reducible(p: &Permutation) -> (bool, ReductionTrace) {
    let mut trace = Vec::new();
    let mut cur = p.clone();
    while cur.len() > 1 {
        let first = find_pitchforks(&cur).ok().and_then(|f| f.first().copied());
        let Some(q) = first else {
            return (false, trace);
        };
        match step(&cur, q) {
            Ok(s) => {
                cur = s.result.clone();
                trace.push(s);
            }
            Err(_) => return (false, trace),
        }
    }
    (true, trace)
}

/// Backtracking over every pitchfork choice; returns a successful trace if any exists.
pub fn fully_reducible_exhaustive(p: &Permutation) -> Result<Option<ReductionTrace>> {
    if p.len() > EXHAUSTIVE_LIMIT {
        return Err(Error::LimitExceeded { n: p.len(), limit: EXHAUSTIVE_LIMIT });
    }
    fn search(p: &Permutation, dead: &mut HashSet<Permutation>, trace: &mut ReductionTrace) -> bool {
        if p.len() == 1 {
            return true;
        }
        if dead.contains(p) {
            return false;
        }
        for q in find_pitchforks(p).unwrap_or_default() {
            let Ok(s) = step(p, q) else { continue };
            let next = s.result.clone();
            trace.push(s);
            if search(&next, dead, trace) {
                return true;
            }
            trace.pop();
        }
        dead.insert(p.clone());
        false
    }
    let mut trace = Vec::new();
    Ok(search(p, &mut HashSet::new(), &mut trace).then_some(trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn find_examples() {
        assert_eq!(find_pitchforks(&perm("1,2,3")).unwrap(), vec![1]);
        assert!(find_pitchforks(&perm("1,6,7,10,3,4,9,8,5,2,11")).unwrap().is_empty());
        assert_eq!(find_pitchforks(&perm("1,8,7,4,5,6,3,2,9")).unwrap(), vec![4]);
        assert!(find_pitchforks(&perm("2,1")).is_err());
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_at(&perm("1,2,3"), 1).unwrap(), perm("1"));
        assert_eq!(reduce_at(&perm("1,8,7,4,5,6,3,2,9"), 4).unwrap(), perm("1,6,5,4,3,2,7"));
        assert_eq!(reduce_at(&perm("1,4,3,2,5"), 2).unwrap(), perm("1,2,3"));
        assert!(reduce_at(&perm("1,4,3,2,5"), 1).is_err());
        assert!(reduce_at(&perm("1,4,3,2,5"), 4).is_err());
    }

    #[test]
    fn greedy_examples() {
        let (ok, trace) = fully_reducible(&perm("1,4,3,2,5"));
        assert!(ok);
        assert_eq!(trace.len(), 2);
        assert_eq!(trace[0].collapsed, [4, 3, 2]);
        assert_eq!(trace[1].result, perm("1"));
        let (ok, trace) = fully_reducible(&perm("1,6,7,10,3,4,9,8,5,2,11"));
        assert!(!ok && trace.is_empty());
        let (ok, trace) = fully_reducible(&perm("1,8,7,2,3,6,9,10,5,4,11"));
        assert!(!ok && trace.is_empty());
        assert_eq!(fully_reducible(&perm("1")), (true, Vec::new()));
    }

    #[test]
    fn exhaustive_agrees_on_examples() {
        assert_eq!(fully_reducible_exhaustive(&perm("1,4,3,2,5")).unwrap().map(|t| t.len()), Some(2));
        assert_eq!(fully_reducible_exhaustive(&perm("1,6,7,10,3,4,9,8,5,2,11")).unwrap(), None);
        let big = Permutation::identity(15);
        assert!(matches!(fully_reducible_exhaustive(&big), Err(Error::LimitExceeded { .. })));
    }
}
