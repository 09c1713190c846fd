use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use super::validate::list_violations;
use super::{canonicalize, Counts, FullLapSignature, LapList, Pair};

/// Size bound for [`enumerate_signatures`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    /// `n + q ≤ k`, the table bound.
    MaxNQ(usize),
    /// `N = n + 2q ≤ m`.
    MaxN(usize),
}

impl Bound {
    fn max_q(self, n: usize) -> Option<usize> {
        match self {
            Bound::MaxNQ(k) => k.checked_sub(n),
            Bound::MaxN(m) => m.checked_sub(n).map(|r| r / 2),
        }
    }

    fn max_n(self) -> usize {
        match self {
            Bound::MaxNQ(k) | Bound::MaxN(k) => k,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumeratedSignature {
    #[serde(serialize_with = "as_text")]
    pub signature: FullLapSignature,
    #[serde(flatten)]
    pub counts: Counts,
    /// Equal to its own reverse; such a class has one member instead of two.
    pub palindromic: bool,
}

fn as_text<S: serde::Serializer>(sig: &FullLapSignature, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&sig.to_string())
}

impl EnumeratedSignature {
    /// Number of signatures in the reversal class, 1 or 2.
    pub fn multiplicity(&self) -> usize {
        if self.palindromic {
            1
        } else {
            2
        }
    }
}

/// Canonical representatives in table order, with class sizes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub signatures: Vec<EnumeratedSignature>,
}

impl Enumeration {
    /// Every signature within the bound, without identifying reversals.
    pub fn raw_count(&self) -> usize {
        self.signatures.iter().map(EnumeratedSignature::multiplicity).sum()
    }

    /// Signatures up to reversal.
    pub fn dedup_count(&self) -> usize {
        self.signatures.len()
    }

    /// `N ↦ (raw, up to reversal)`.
    pub fn counts_by_big_n(&self) -> BTreeMap<usize, (usize, usize)> {
        let mut out = BTreeMap::new();
        for e in &self.signatures {
            let slot = out.entry(e.counts.big_n).or_insert((0, 0));
            slot.0 += e.multiplicity();
            slot.1 += 1;
        }
        out
    }
}

struct Generator {
    lists: HashMap<(usize, bool), Vec<LapList>>,
}

impl Generator {
    fn new(max_len: usize) -> Self {
        let mut lists = HashMap::new();
        for s in 0..=max_len {
            for annular in [false, true] {
                lists.insert((s, annular), valid_lists(s, annular));
            }
        }
        Generator { lists }
    }

    fn lists(&self, s: usize, annular: bool) -> &[LapList] {
        &self.lists[&(s, annular)]
    }

    /// Pair sequences with `c` centers and `q` lower-list entries in total,
    /// having at least `min_pairs` pairs.
    fn pair_seqs(&self, c: usize, q: usize, min_pairs: usize) -> Vec<Vec<Pair>> {
        let mut out = Vec::new();
        if c == 0 {
            return out;
        }
        for c1 in 1..=c {
            for q1 in 0..=q {
                let heads = self.pairs(c1, q1);
                if heads.is_empty() {
                    continue;
                }
                if c1 == c {
                    if q1 == q && min_pairs <= 1 {
                        out.extend(heads.into_iter().map(|h| vec![h]));
                    }
                    continue;
                }
                let tails = self.pair_seqs(c - c1, q - q1, min_pairs.saturating_sub(1));
                for h in &heads {
                    for t in &tails {
                        let mut seq = Vec::with_capacity(1 + t.len());
                        seq.push(h.clone());
                        seq.extend(t.iter().cloned());
                        out.push(seq);
                    }
                }
            }
        }
        out
    }

    fn pairs(&self, c: usize, q: usize) -> Vec<Pair> {
        if c == 1 {
            return self
                .lists(q, false)
                .iter()
                .map(|l| Pair::Central { lower: l.clone(), upper: l.reversed() })
                .collect();
        }
        let mut out = Vec::new();
        for s in (2..=q).step_by(2) {
            let inners = self.pair_seqs(c, q - s, 2);
            for l in self.lists(s, true) {
                for inner in &inners {
                    out.push(Pair::Annular { lower: l.clone(), inner: inner.clone(), upper: l.reversed() });
                }
            }
        }
        out
    }
}

/// Lists of length `s` obeying the boundary and jump conditions.
fn valid_lists(s: usize, annular: bool) -> Vec<LapList> {
    fn extend(cur: &mut Vec<u32>, s: usize, annular: bool, out: &mut Vec<LapList>) {
        if cur.len() == s {
            let l = LapList(cur.clone());
            if list_violations(&l, annular).is_empty() {
                out.push(l);
            }
            return;
        }
        let last = *cur.last().unwrap_or(&0);
        let options: Vec<u32> = if cur.is_empty() { vec![1] } else { vec![last + 1, last, last - 1] };
        for next in options {
            if next == 0 {
                continue;
            }
            cur.push(next);
            extend(cur, s, annular, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if annular && (s == 0 || s % 2 == 1) {
        return out;
    }
    extend(&mut Vec::with_capacity(s), s, annular, &mut out);
    out
}

fn annular_count(sig: &FullLapSignature) -> usize {
    sig.pairs_preorder().iter().filter(|p| p.is_annular()).count()
}

/// Table order: `n`, then `q`, then fewer annular pairs, then longer leading
/// lists, then lists in inverse lexicographic order.
fn table_order(a: &EnumeratedSignature, b: &EnumeratedSignature) -> Ordering {
    let sizes = |s: &FullLapSignature| -> Vec<usize> {
        s.pairs_preorder().iter().map(|p| p.lower().len()).collect()
    };
    let lists = |s: &FullLapSignature| -> Vec<Vec<u32>> {
        s.pairs_preorder().iter().map(|p| p.lower().0.clone()).collect()
    };
    (a.counts.n, a.counts.q, annular_count(&a.signature))
        .cmp(&(b.counts.n, b.counts.q, annular_count(&b.signature)))
        .then_with(|| sizes(&b.signature).cmp(&sizes(&a.signature)))
        .then_with(|| lists(&b.signature).cmp(&lists(&a.signature)))
        .then_with(|| a.signature.to_string().cmp(&b.signature.to_string()))
}

/// Every valid signature within `bound`, one per reversal class, in table order.
/// The output is independent of the thread count.
pub fn enumerate_signatures(bound: Bound) -> Enumeration {
    let max_n = bound.max_n();
    let mut buckets = Vec::new();
    let mut n = 1;
    while n <= max_n {
        if let Some(max_q) = bound.max_q(n) {
            for q in 0..=max_q {
                buckets.push(((n - 1) / 2, q));
            }
        }
        n += 2;
    }
    let max_len = buckets.iter().map(|&(_, q)| q).max().unwrap_or(0);
    let generator = Generator::new(max_len);
    let mut signatures: Vec<EnumeratedSignature> = buckets
        .par_iter()
        .flat_map_iter(|&(c, q)| {
            let raw: Vec<FullLapSignature> = if c == 0 {
                if q == 0 {
                    vec![FullLapSignature::trivial()]
                } else {
                    Vec::new()
                }
            } else {
                generator.pair_seqs(c, q, 1).into_iter().map(FullLapSignature::new).collect()
            };
            let mut seen = HashSet::new();
            let mut bucket = Vec::new();
            for sig in raw {
                let canon = canonicalize(&sig);
                if seen.insert(canon.to_string()) {
                    let palindromic = canon.reversed() == canon;
                    bucket.push(EnumeratedSignature { counts: canon.counts(), signature: canon, palindromic });
                }
            }
            bucket
        })
        .collect();
    signatures.sort_by(table_order);
    Enumeration { signatures }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(e: &Enumeration) -> Vec<String> {
        e.signatures.iter().map(|s| s.signature.to_string()).collect()
    }

    #[test]
    fn smallest_bound() {
        let e = enumerate_signatures(Bound::MaxNQ(4));
        assert_eq!(texts(&e), vec!["*", "*(@)*", "*({1}@{1})*"]);
    }

    #[test]
    fn list_generation() {
        let l: Vec<String> = valid_lists(4, false).iter().map(|l| l.to_string()).collect();
        assert_eq!(l.len(), 6);
        for expected in ["{1,2,3,4}", "{1,2,3,3}", "{1,2,2,2}", "{1,2,2,1}", "{1,1,1,2}", "{1,1,1,1}"] {
            assert!(l.contains(&expected.to_string()), "{expected}");
        }
        assert_eq!(valid_lists(2, true), vec![LapList(vec![1, 1])]);
        assert!(valid_lists(3, true).is_empty());
        assert_eq!(valid_lists(0, false), vec![LapList::default()]);
    }

    #[test]
    fn every_output_is_valid_and_canonical() {
        for e in enumerate_signatures(Bound::MaxN(13)).signatures {
            assert!(e.signature.is_valid(), "{}", e.signature);
            assert_eq!(canonicalize(&e.signature), e.signature);
            assert_eq!(e.palindromic, e.signature.reversed() == e.signature);
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let single = pool.install(|| enumerate_signatures(Bound::MaxN(13)));
        assert_eq!(single, enumerate_signatures(Bound::MaxN(13)));
    }
}
