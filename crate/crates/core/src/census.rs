//! Sturm predicates on permutations and exhaustive censuses over `S(N)`.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{morse_indices, reverse_trivial, two_cycles, Permutation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SturmReport {
    pub meandric: bool,
    pub dissipative: bool,
    pub morse: bool,
    pub odd: bool,
    pub sturm: bool,
    pub involution: bool,
    pub integrable: bool,
    pub failures: Vec<String>,
}

impl fmt::Display for SturmReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "meandric={}", self.meandric)?;
        writeln!(f, "dissipative={}", self.dissipative)?;
        writeln!(f, "morse={}", self.morse)?;
        writeln!(f, "odd={}", self.odd)?;
        writeln!(f, "sturm={}", self.sturm)?;
        writeln!(f, "involution={}", self.involution)?;
        write!(f, "integrable={}", self.integrable)?;
        for fail in &self.failures {
            write!(f, "\nfailure: {fail}")?;
        }
        Ok(())
    }
}

/// First pair of same-side arcs that interleave, if any.
fn crossing_arcs(p: &Permutation) -> Option<((usize, usize), (usize, usize))> {
    let inv = p.inverse();
    let n = p.len();
    for side in 0..2 {
        let arcs: Vec<(usize, usize)> = (1 + side..n)
            .step_by(2)
            .map(|j| {
                let (a, b) = (inv.get(j), inv.get(j + 1));
                (a.min(b), a.max(b))
            })
            .collect();
        for (i, &(a, b)) in arcs.iter().enumerate() {
            for &(c, d) in &arcs[i + 1..] {
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    return Some(((a, b), (c, d)));
                }
            }
        }
    }
    None
}

/// Upper arcs join `σ⁻¹(2i−1), σ⁻¹(2i)`, lower arcs `σ⁻¹(2i), σ⁻¹(2i+1)`; no two
/// arcs on one side may interleave.
pub fn is_meander(p: &Permutation) -> bool {
    crossing_arcs(p).is_none()
}

pub fn is_dissipative(p: &Permutation) -> bool {
    p.get(1) == 1 && p.get(p.len()) == p.len()
}

pub fn is_morse(p: &Permutation) -> bool {
    morse_indices(p).is_nonnegative()
}

fn sturm_failures(p: &Permutation) -> Vec<String> {
    let mut out = Vec::new();
    let n = p.len();
    if let Some(((a, b), (c, d))) = crossing_arcs(p) {
        out.push(format!("meander: arcs over {a}..{b} and {c}..{d} cross"));
    }
    if p.get(1) != 1 {
        out.push(format!("dissipative: σ(1) = {} ≠ 1", p.get(1)));
    }
    if p.get(n) != n {
        out.push(format!("dissipative: σ({n}) = {} ≠ {n}", p.get(n)));
    }
    let m = morse_indices(p);
    if let Some(j) = m.values().iter().position(|&i| i < 0) {
        out.push(format!("morse: i_{} = {} < 0", j + 1, m.values()[j]));
    }
    if n.is_multiple_of(2) {
        out.push(format!("odd: N = {n} is even"));
    }
    out
}

/// Failed clauses of integrability; empty iff `p` is an integrable Sturm involution.
pub(crate) fn integrability_failures(p: &Permutation) -> Vec<String> {
    let mut out = sturm_failures(p);
    if !p.is_involution() {
        out.push("involution: σ∘σ ≠ id".to_string());
        return out;
    }
    let morse = morse_indices(p);
    let n = p.len();
    let stable: Vec<usize> = (1..=n).filter(|&j| p.get(j) == j && morse.get(j) == 0).collect();
    let core = |a: usize, b: usize| -> Vec<usize> { stable.iter().copied().filter(|&k| a < k && k < b).collect() };
    let cycles = two_cycles(p);
    for (x, &(a, b)) in cycles.iter().enumerate() {
        for &(c, d) in &cycles[x + 1..] {
            // a < c by construction.
            if c < b {
                if d > b {
                    out.push(format!("(i) intersecting 2-cycles ({a} {b}) and ({c} {d}) are not nested"));
                } else if core(a, b) == core(c, d) && c - a != b - d {
                    out.push(format!(
                        "(ii) 2-cycles ({a} {b}) and ({c} {d}) share a core but are not centered"
                    ));
                }
            } else if !stable.iter().any(|&k| b < k && k < c) {
                out.push(format!(
                    "(iii) 2-cycles ({a} {b}) and ({c} {d}) are not separated by a stable point"
                ));
            }
        }
    }
    out
}

pub fn is_sturm(p: &Permutation) -> SturmReport {
    let failures = sturm_failures(p);
    let integrable = integrability_failures(p).is_empty();
    report(p, failures, integrable)
}

pub fn is_integrable_involution(p: &Permutation) -> SturmReport {
    let failures = integrability_failures(p);
    let integrable = failures.is_empty();
    report(p, failures, integrable)
}

fn report(p: &Permutation, failures: Vec<String>, integrable: bool) -> SturmReport {
    let meandric = is_meander(p);
    let dissipative = is_dissipative(p);
    let morse = is_morse(p);
    let odd = p.len() % 2 == 1;
    SturmReport {
        meandric,
        dissipative,
        morse,
        odd,
        sturm: meandric && dissipative && morse && odd,
        involution: p.is_involution(),
        integrable,
        failures,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CensusClass {
    All,
    Involutions,
    Integrable,
}

impl CensusClass {
    pub fn default_limit(self) -> usize {
        13
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dedup {
    None,
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub class: CensusClass,
    pub raw: usize,
    #[serde(rename = "uptoTrivial")]
    pub upto_trivial: usize,
    /// Members in ascending one-line order; under trivial dedup only the
    /// representative with the smaller serialized form is kept.
    #[serde(skip)]
    pub members: Vec<Permutation>,
}

/// Representative of `{p, reverse_trivial(p)}` with the smaller serialized form.
pub fn trivial_representative(p: &Permutation) -> Permutation {
    let r = reverse_trivial(p);
    if r.to_string() < p.to_string() {
        r
    } else {
        p.clone()
    }
}

/// Meandric, dissipative permutations with nonnegative Morse prefix sums, by a
/// depth-first walk along the curve. `inv[k]` is the axis position of the
/// k-th visited point.
fn sturm_all(n: usize) -> Vec<Permutation> {
    if n == 1 {
        return vec![Permutation::identity(1)];
    }
    struct Walk {
        n: usize,
        inv: Vec<usize>,
        used: Vec<bool>,
        arcs: [Vec<(usize, usize)>; 2],
        morse: i64,
    }
    impl Walk {
        fn run(&mut self, out: &mut Vec<Permutation>) {
            let k = self.inv.len();
            if k == self.n {
                let mut entries = vec![0; self.n];
                for (j, &x) in self.inv.iter().enumerate() {
                    entries[x - 1] = j + 1;
                }
                let p = Permutation::from_vec_unchecked(entries);
                if is_sturm(&p).sturm {
                    out.push(p);
                }
                return;
            }
            let prev = self.inv[k - 1];
            let side = (k - 1) % 2;
            let candidates: Vec<usize> = if k + 1 == self.n {
                vec![self.n]
            } else {
                (2..self.n).filter(|&x| !self.used[x]).collect()
            };
            for x in candidates {
                if self.used[x] {
                    continue;
                }
                let (a, b) = (prev.min(x), prev.max(x));
                if self.arcs[side].iter().any(|&(c, d)| (a < c && c < b && b < d) || (c < a && a < d && d < b)) {
                    continue;
                }
                // i_{k+1} = i_k + (−1)^{k+1} sign(inv(k+1) − inv(k)), with k 1-based.
                let sign: i64 = if x > prev { 1 } else { -1 };
                let step = if k % 2 == 1 { sign } else { -sign };
                let morse = self.morse + step;
                if morse < 0 {
                    continue;
                }
                let saved = self.morse;
                self.morse = morse;
                self.used[x] = true;
                self.inv.push(x);
                self.arcs[side].push((a, b));
                self.run(out);
                self.arcs[side].pop();
                self.inv.pop();
                self.used[x] = false;
                self.morse = saved;
            }
        }
    }
    let seconds: Vec<usize> = (2..n).collect();
    let mut out: Vec<Permutation> = seconds
        .par_iter()
        .flat_map_iter(|&second| {
            let mut walk = Walk {
                n,
                inv: vec![1, second],
                used: vec![false; n + 1],
                arcs: [vec![(1, second)], Vec::new()],
                morse: 1,
            };
            walk.used[1] = true;
            walk.used[second] = true;
            let mut out = Vec::new();
            walk.run(&mut out);
            out.into_iter()
        })
        .collect();
    out.sort();
    out
}

/// All involutions of `S(n)` fixing 1 and `n`, built from fixed-point and
/// 2-cycle choices.
fn involutions(n: usize) -> Vec<Permutation> {
    fn extend(entries: &mut Vec<usize>, next: usize, n: usize, out: &mut Vec<Permutation>) {
        let mut j = next;
        while j <= n && entries[j - 1] != 0 {
            j += 1;
        }
        if j > n {
            out.push(Permutation::from_vec_unchecked(entries.clone()));
            return;
        }
        entries[j - 1] = j;
        extend(entries, j + 1, n, out);
        entries[j - 1] = 0;
        for k in j + 1..n {
            if entries[k - 1] == 0 {
                entries[j - 1] = k;
                entries[k - 1] = j;
                extend(entries, j + 1, n, out);
                entries[j - 1] = 0;
                entries[k - 1] = 0;
            }
        }
    }
    if n == 1 {
        return vec![Permutation::identity(1)];
    }
    // Shard on the partner of position 2.
    let firsts: Vec<usize> = (2..n).collect();
    let mut out: Vec<Permutation> = firsts
        .par_iter()
        .flat_map_iter(|&partner| {
            let mut entries = vec![0; n];
            entries[0] = 1;
            entries[n - 1] = n;
            entries[1] = partner;
            entries[partner - 1] = 2;
            let mut out = Vec::new();
            extend(&mut entries, 3, n, &mut out);
            out.into_iter()
        })
        .collect();
    if n == 2 {
        out.push(Permutation::identity(2));
    }
    out.sort();
    out
}

/// Census with the default limit of 13.
pub fn census(n: usize, class: CensusClass, dedup: Dedup) -> Result<CensusReport> {
    census_with_limit(n, class, dedup, class.default_limit())
}

pub fn census_with_limit(n: usize, class: CensusClass, dedup: Dedup, limit: usize) -> Result<CensusReport> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("census needs an odd N ≥ 1, got {n}")));
    }
    if n > limit {
        return Err(Error::LimitExceeded { n, limit });
    }
    let members: Vec<Permutation> = match class {
        CensusClass::All => sturm_all(n),
        CensusClass::Involutions => involutions(n).into_par_iter().filter(|p| is_sturm(p).sturm).collect(),
        CensusClass::Integrable => involutions(n)
            .into_par_iter()
            .filter(|p| integrability_failures(p).is_empty())
            .collect(),
    };
    let reps: BTreeSet<Permutation> = members.iter().map(trivial_representative).collect();
    let raw = members.len();
    let upto_trivial = reps.len();
    let members = match dedup {
        Dedup::None => members,
        Dedup::Trivial => reps.into_iter().collect(),
    };
    Ok(CensusReport { n, class, raw, upto_trivial, members })
}
