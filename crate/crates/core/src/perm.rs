//! Permutations in one-line notation and the signed-sum formulas for Morse
//! indices and zero numbers of a Sturm permutation.
//!
//! Everything here is 1-based: position `j` holds the value `σ(j)`, and the
//! equilibria `v_1 < … < v_N` are labelled by their order at the left
//! boundary. Arithmetic is exact.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of `{1, …, N}`, stored in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    entries: Vec<usize>,
}

impl Permutation {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::MalformedPermutation("empty permutation".into()));
        }
        let mut seen = vec![false; n + 1];
        for (pos, &v) in entries.iter().enumerate() {
            if v == 0 || v > n {
                return Err(Error::MalformedPermutation(format!(
                    "value {v} at position {} is outside 1..={n}",
                    pos + 1
                )));
            }
            if seen[v] {
                return Err(Error::MalformedPermutation(format!(
                    "value {v} appears more than once"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation { entries })
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(entries.clone()).is_ok());
        Permutation { entries }
    }

    pub fn identity(n: usize) -> Self {
        Permutation { entries: (1..=n).collect() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `σ(pos)` for a 1-based position.
    #[inline]
    pub fn get(&self, pos: usize) -> usize {
        self.entries[pos - 1]
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<usize> {
        self.entries
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.entries.len()];
        for (pos, &v) in self.entries.iter().enumerate() {
            inv[v - 1] = pos + 1;
        }
        Permutation { entries: inv }
    }

    /// `(self ∘ other)(j) = self(other(j))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        Ok(Permutation {
            entries: other.entries.iter().map(|&v| self.get(v)).collect(),
        })
    }

    pub fn is_involution(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(pos, &v)| self.get(v) == pos + 1)
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(pos, &v)| v == pos + 1)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `1,8,7,4` with optional whitespace and optional surrounding braces.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let body = trimmed
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .unwrap_or(trimmed);
        if body.trim().is_empty() {
            return Err(Error::MalformedPermutation("empty permutation".into()));
        }
        let entries = body
            .split(',')
            .map(|tok| {
                tok.trim().parse::<usize>().map_err(|_| {
                    Error::MalformedPermutation(format!("cannot read {:?} as a positive integer", tok.trim()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(entries)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.entries
    }
}

pub fn inverse(p: &Permutation) -> Permutation {
    p.inverse()
}

/// Evaluates `σ_{kj} = sign(σ⁻¹(k) − σ⁻¹(j))` on demand.
struct Signs {
    inv: Vec<usize>,
}

impl Signs {
    fn new(p: &Permutation) -> Self {
        Signs { inv: p.inverse().into_entries() }
    }

    #[inline]
    fn get(&self, k: usize, j: usize) -> i64 {
        let (a, b) = (self.inv[k - 1], self.inv[j - 1]);
        match a.cmp(&b) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
        }
    }
}

#[inline]
fn alt(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Formal Morse numbers `i_1, …, i_N`, indexed from 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MorseVector(pub Vec<i64>);

impl MorseVector {
    pub fn get(&self, j: usize) -> i64 {
        self.0[j - 1]
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&i| i >= 0)
    }

    pub fn max(&self) -> i64 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

/// `i_j = Σ_{k=1}^{j-1} (-1)^{k+1} σ_{k+1,k}`.
pub fn morse_indices(p: &Permutation) -> MorseVector {
    let signs = Signs::new(p);
    let n = p.len();
    let mut out = Vec::with_capacity(n);
    let mut acc = 0i64;
    out.push(0);
    for k in 1..n {
        acc += -alt(k) * signs.get(k + 1, k);
        out.push(acc);
    }
    MorseVector(out)
}

/// Symmetric matrix of zero numbers `z_{jj'}`; the diagonal is undefined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroMatrix {
    n: usize,
    values: Vec<i64>,
}

impl ZeroMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    /// `z_{jk}` for 1-based `j ≠ k`; `None` on the diagonal.
    pub fn get(&self, j: usize, k: usize) -> Option<i64> {
        (j != k).then(|| self.values[(j - 1) * self.n + (k - 1)])
    }

    #[inline]
    pub(crate) fn at(&self, j: usize, k: usize) -> i64 {
        self.values[(j - 1) * self.n + (k - 1)]
    }

    pub fn is_symmetric(&self) -> bool {
        (1..=self.n).all(|j| (j + 1..=self.n).all(|k| self.at(j, k) == self.at(k, j)))
    }

    pub fn min_off_diagonal(&self) -> Option<i64> {
        (1..=self.n)
            .flat_map(|j| (1..=self.n).filter(move |&k| k != j).map(move |k| (j, k)))
            .map(|(j, k)| self.at(j, k))
            .min()
    }
}

/// `z_{jj'} = i_j + ½((-1)^{j'} σ_{j'j} − 1) + Σ_{j<k<j'} (-1)^k σ_{kj}` for `j < j'`,
/// extended symmetrically.
pub fn zero_numbers(p: &Permutation) -> Result<ZeroMatrix> {
    let n = p.len();
    let signs = Signs::new(p);
    let morse = morse_indices(p);
    let mut values = vec![0i64; n * n];
    for j in 1..=n {
        let mut inner = 0i64;
        for jp in j + 1..=n {
            let numerator = alt(jp) * signs.get(jp, j) - 1;
            if numerator % 2 != 0 {
                return Err(Error::InternalInvariant(format!(
                    "odd numerator {numerator} in zero number z_{{{j},{jp}}}"
                )));
            }
            let z = morse.get(j) + numerator / 2 + inner;
            values[(j - 1) * n + (jp - 1)] = z;
            values[(jp - 1) * n + (j - 1)] = z;
            // k = jp joins the interior sum for the next j'.
            inner += alt(jp) * signs.get(jp, j);
        }
    }
    Ok(ZeroMatrix { n, values })
}

/// Trivial equivalence `u ↦ −u`: `result(j) = N + 1 − p(N + 1 − j)`.
pub fn reverse_trivial(p: &Permutation) -> Permutation {
    let n = p.len();
    Permutation::from_vec_unchecked((1..=n).map(|j| n + 1 - p.get(n + 1 - j)).collect())
}

/// A cycle in canonical form: smallest element first.
pub type Cycle = Vec<usize>;

/// Disjoint cycles covering `1..=N`, fixed points included, ordered by smallest element.
pub fn cycle_structure(p: &Permutation) -> Vec<Cycle> {
    let n = p.len();
    let mut visited = vec![false; n + 1];
    let mut cycles = Vec::new();
    for start in 1..=n {
        if visited[start] {
            continue;
        }
        let mut cycle = vec![start];
        visited[start] = true;
        let mut next = p.get(start);
        while next != start {
            visited[next] = true;
            cycle.push(next);
            next = p.get(next);
        }
        cycles.push(cycle);
    }
    cycles
}

/// Sorted 2-cycles `(c̲, c̄)` with `c̲ < c̄`, in order of `c̲`.
pub fn two_cycles(p: &Permutation) -> Vec<(usize, usize)> {
    (1..=p.len())
        .filter_map(|j| {
            let v = p.get(j);
            (v > j && p.get(v) == j).then_some((j, v))
        })
        .collect()
}

pub fn format_cycles(cycles: &[Cycle]) -> String {
    cycles
        .iter()
        .map(|c| {
            let inner = c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
            format!("({inner})")
        })
        .collect()
}
