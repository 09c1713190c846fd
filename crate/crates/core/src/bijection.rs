//! Signatures to integrable Sturm involutions and back.

use serde::Serialize;

use crate::census::integrability_failures;
use crate::error::{Error, Result};
use crate::lapsig::{labels, validate, FullLapSignature, LabelKind, LapList, Pair, Role};
use crate::perm::{morse_indices, Permutation};

/// One min/max pair of frozen Neumann equilibria, identified under the
/// periodic quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FrozenPair {
    pub min: usize,
    pub max: usize,
    pub lap: u32,
}

/// All `q` min/max pairs of a signature, ordered by `min`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Pairing {
    pub pairs: Vec<FrozenPair>,
}

impl Pairing {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs whose lap number is odd; these are the 2-cycles of the permutation.
    pub fn odd(&self) -> impl Iterator<Item = &FrozenPair> {
        self.pairs.iter().filter(|p| p.lap % 2 == 1)
    }
}

/// The integrable Sturm involution of a signature: odd-lap pairs are swapped,
/// everything else is fixed.
pub fn signature_to_permutation(sig: &FullLapSignature) -> Result<(Permutation, Pairing)> {
    let labels = labels(sig)?;
    let mut entries: Vec<usize> = (1..=labels.len()).collect();
    let mut pairs = Vec::new();
    for l in &labels {
        if l.kind == LabelKind::FrozenEntry && l.role == Some(Role::Min) {
            let (min, max, lap) = match (l.partner, l.lap) {
                (Some(max), Some(lap)) => (l.position, max, lap),
                _ => return Err(Error::InternalInvariant(format!("unpaired frozen entry at {}", l.position))),
            };
            if lap % 2 == 1 {
                entries[min - 1] = max;
                entries[max - 1] = min;
            }
            pairs.push(FrozenPair { min, max, lap });
        }
    }
    pairs.sort();
    let p = Permutation::new(entries)?;
    let failures = integrability_failures(&p);
    if !failures.is_empty() {
        return Err(Error::InternalInvariant(format!(
            "image of {sig} is not an integrable Sturm involution: {}",
            failures.join("; ")
        )));
    }
    Ok((p, Pairing { pairs }))
}

struct Reader<'a> {
    p: &'a Permutation,
    saddle: Vec<bool>,
}

impl Reader<'_> {
    fn sigma(&self, j: usize) -> usize {
        self.p.get(j)
    }

    fn is_saddle(&self, j: usize) -> bool {
        self.saddle[j - 1]
    }

    fn fail(&self, msg: String) -> Error {
        Error::InternalInvariant(format!("cannot read a signature from {}: {msg}", self.p))
    }

    /// Pairs covering exactly `lo..=hi`, separated by saddles.
    fn seq(&self, lo: usize, hi: usize) -> Result<Vec<Pair>> {
        let mut pairs = Vec::new();
        let mut start = lo;
        loop {
            let (pair, end) = self.pair(start, hi)?;
            pairs.push(pair);
            if end == hi {
                return Ok(pairs);
            }
            if end + 2 > hi || !self.is_saddle(end + 1) {
                return Err(self.fail(format!("expected a saddle at position {}", end + 1)));
            }
            start = end + 2;
        }
    }

    fn pair(&self, p: usize, hi: usize) -> Result<(Pair, usize)> {
        if self.is_saddle(p) {
            return Err(self.fail(format!("pair cannot start at saddle {p}")));
        }
        let q = self.sigma(p);
        if q == p {
            let empty = LapList::default();
            return Ok((Pair::Central { lower: empty.clone(), upper: empty }, p));
        }
        if q < p || q > hi {
            return Err(self.fail(format!("2-cycle ({p} {q}) leaves its enclosing interval")));
        }
        if !(p + 1..q).any(|k| self.is_saddle(k)) {
            if !(q - p).is_multiple_of(2) {
                return Err(self.fail(format!("central pair {p}..{q} has no midpoint")));
            }
            let s = (q - p) / 2;
            let lower = self.laps(p, s)?;
            return Ok((Pair::Central { upper: lower.reversed(), lower }, q));
        }
        let mut last_cycle = 0;
        let mut t = 0;
        while p + t < q - t {
            let (a, b) = (p + t, q - t);
            if self.is_saddle(a) || self.is_saddle(b) {
                break;
            }
            if self.sigma(a) == b {
                last_cycle = t;
            } else if !(self.sigma(a) == a && self.sigma(b) == b) {
                break;
            }
            t += 1;
        }
        let s = last_cycle + 1;
        let lower = self.laps(p, s)?;
        let inner = self.seq(p + s, q - s)?;
        Ok((Pair::Annular { upper: lower.reversed(), lower, inner }, q))
    }

    /// Lap numbers of the `s` entries starting at `p`, from their parities.
    fn laps(&self, p: usize, s: usize) -> Result<LapList> {
        let mut laps: Vec<u32> = Vec::with_capacity(s);
        let mut negative = true;
        for j in 0..s {
            let odd = self.sigma(p + j) != p + j;
            let lap = match laps.last() {
                None => 1,
                Some(&prev) if (prev % 2 == 1) == odd => {
                    negative = !negative;
                    prev
                }
                Some(&prev) if negative => prev + 1,
                Some(&prev) => prev.checked_sub(1).filter(|&l| l > 0).ok_or_else(|| {
                    self.fail(format!("lap number drops below 1 at position {}", p + j))
                })?,
            };
            if j == 0 && !odd {
                return Err(self.fail(format!("list at {p} starts with an even lap")));
            }
            laps.push(lap);
        }
        Ok(LapList(laps))
    }
}

/// The signature whose involution is `p`.
///
/// Saddles are the positions of Morse index 0. Each pair is delimited by a
/// 2-cycle or is a lone center; a pair with an interior saddle is annular.
/// Lap numbers follow from the parity of each entry and the crossing-sign
/// rule. The reading is returned as is, not canonicalized, so that it maps
/// back onto `p` exactly.
pub fn permutation_to_signature(p: &Permutation) -> Result<FullLapSignature> {
    let failures = integrability_failures(p);
    if !failures.is_empty() {
        return Err(Error::NotIntegrable(failures.join("; ")));
    }
    let n = p.len();
    if n == 1 {
        return Ok(FullLapSignature::trivial());
    }
    let morse = morse_indices(p);
    let reader = Reader { p, saddle: morse.values().iter().map(|&i| i == 0).collect() };
    let sig = FullLapSignature::new(reader.seq(2, n - 1)?);
    let violations = validate(&sig);
    if !violations.is_empty() {
        return Err(reader.fail(format!("reading {sig} violates {}", violations[0])));
    }
    let (back, _) = signature_to_permutation(&sig)?;
    if &back != p {
        return Err(reader.fail(format!("reading {sig} maps to {back}")));
    }
    Ok(sig)
}

/// `h0⁻¹ ∘ h1`.
pub fn compose_paths(h0: &Permutation, h1: &Permutation) -> Result<Permutation> {
    h0.inverse().compose(h1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lapsig::parse_signature;

    fn sig(s: &str) -> FullLapSignature {
        parse_signature(s).unwrap()
    }

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn signature_to_permutation_examples() {
        let (p, pairing) = signature_to_permutation(&sig("*({1}@{1})*")).unwrap();
        assert_eq!(p, perm("1,4,3,2,5"));
        assert_eq!(pairing.pairs, vec![FrozenPair { min: 2, max: 4, lap: 1 }]);
        let (p, pairing) = signature_to_permutation(&sig("*({1,1}(@)*(@){1,1})*")).unwrap();
        assert_eq!(p, perm("1,8,7,4,5,6,3,2,9"));
        let mins: Vec<(usize, usize)> = pairing.pairs.iter().map(|x| (x.min, x.max)).collect();
        assert_eq!(mins, vec![(2, 8), (3, 7)]);
        let (p, _) = signature_to_permutation(&sig("*({1,1}({1}@{1})*({1}@{1}){1,1})*")).unwrap();
        assert_eq!(p, perm("1,12,11,6,5,4,7,10,9,8,3,2,13"));
    }

    #[test]
    fn even_laps_stay_fixed() {
        let (p, pairing) = signature_to_permutation(&sig("*({1,2}@{2,1})*")).unwrap();
        assert_eq!(p, perm("1,6,3,4,5,2,7"));
        assert_eq!(pairing.len(), 2);
        assert_eq!(pairing.odd().count(), 1);
    }

    #[test]
    fn permutation_to_signature_examples() {
        assert_eq!(permutation_to_signature(&perm("1,4,3,2,5")).unwrap().to_string(), "*({1}@{1})*");
        assert_eq!(
            permutation_to_signature(&perm("1,8,7,4,5,6,3,2,9")).unwrap().to_string(),
            "*({1,1}(@)*(@){1,1})*"
        );
        assert_eq!(permutation_to_signature(&perm("1,2,3")).unwrap().to_string(), "*(@)*");
        assert_eq!(permutation_to_signature(&perm("1")).unwrap().to_string(), "*");
        assert_eq!(
            permutation_to_signature(&perm("1,2,3,4,5,6,7")).unwrap().to_string(),
            "*(@)*(@)*(@)*"
        );
    }

    #[test]
    fn non_integrable_input_is_rejected() {
        let err = permutation_to_signature(&perm("1,4,5,2,3,6,7")).unwrap_err();
        assert!(matches!(err, Error::NotIntegrable(_)));
        assert!(matches!(permutation_to_signature(&perm("2,3,1")), Err(Error::NotIntegrable(_))));
    }

    #[test]
    fn compose_paths_examples() {
        let h1 = perm("1,12,11,6,5,4,7,10,9,8,3,2,13");
        assert_eq!(compose_paths(&Permutation::identity(13), &h1).unwrap(), h1);
        assert!(compose_paths(&h1, &h1).unwrap().is_identity());
        assert_eq!(compose_paths(&perm("2,1"), &perm("1,2")).unwrap(), perm("2,1"));
        assert!(compose_paths(&perm("1"), &perm("1,2")).is_err());
    }
}
