//! Full lap signatures: the bracketed record of saddles `*`, centers `@` and
//! mirrored lap-number lists `{…}` read off a period map.
//!
//! Text form (whitespace is ignored on input):
//!
//! ```text
//! *                                  single saddle
//! *(@)*                              one empty central pair
//! *({1,1}(@)*(@){1,1})*              annular pair around two central pairs
//! ```
//!
//! Empty lists are omitted from the canonical text; `{}` is accepted on input.

mod enumerate;
mod labels;
mod parse;
mod validate;

use std::fmt;

use serde::Serialize;

pub use enumerate::{enumerate_signatures, Bound, EnumeratedSignature, Enumeration};
pub use labels::{labels, EquilibriumLabel, LabelKind, Role};
pub use parse::parse_signature;
pub use validate::{tprime_signs, validate, Axiom, Sign, Violation};

use crate::error::{Error, Result};

/// Ordered lap numbers `ℓ_1, …, ℓ_s` of one list, possibly empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct LapList(pub Vec<u32>);

impl LapList {
    pub fn new(v: Vec<u32>) -> Self {
        LapList(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> LapList {
        LapList(self.0.iter().rev().copied().collect())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for LapList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return Ok(());
        }
        f.write_str("{")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

/// One min/max parenthesis pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pair {
    /// Innermost pair around a center: `(lower @ upper)`.
    Central { lower: LapList, upper: LapList },
    /// Pair around a nested sequence of pairs: `(lower (…)*…*(…) upper)`.
    Annular { lower: LapList, inner: Vec<Pair>, upper: LapList },
}

impl Pair {
    pub fn lower(&self) -> &LapList {
        match self {
            Pair::Central { lower, .. } | Pair::Annular { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> &LapList {
        match self {
            Pair::Central { upper, .. } | Pair::Annular { upper, .. } => upper,
        }
    }

    pub fn is_annular(&self) -> bool {
        matches!(self, Pair::Annular { .. })
    }

    fn reversed(&self) -> Pair {
        match self {
            Pair::Central { lower, upper } => Pair::Central {
                lower: upper.reversed(),
                upper: lower.reversed(),
            },
            Pair::Annular { lower, inner, upper } => Pair::Annular {
                lower: upper.reversed(),
                inner: reverse_seq(inner),
                upper: lower.reversed(),
            },
        }
    }
}

fn reverse_seq(seq: &[Pair]) -> Vec<Pair> {
    seq.iter().rev().map(Pair::reversed).collect()
}

/// A full lap signature. An empty pair sequence is the single saddle `*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FullLapSignature {
    pub pairs: Vec<Pair>,
}

/// Table columns of a signature: homogeneous equilibria `n`, frozen waves `q`,
/// Neumann equilibria `N = n + 2q`, and centers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Counts {
    pub n: usize,
    pub q: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub centers: usize,
}

impl FullLapSignature {
    pub fn new(pairs: Vec<Pair>) -> Self {
        FullLapSignature { pairs }
    }

    /// The trivial signature `*`.
    pub fn trivial() -> Self {
        FullLapSignature::default()
    }

    /// Structural counts; meaningful for any tree, exact for valid ones.
    pub fn counts(&self) -> Counts {
        fn walk(seq: &[Pair], saddles: &mut usize, centers: &mut usize, q: &mut usize) {
            *saddles += seq.len().saturating_sub(1);
            for p in seq {
                *q += p.lower().len();
                match p {
                    Pair::Central { .. } => *centers += 1,
                    Pair::Annular { inner, .. } => walk(inner, saddles, centers, q),
                }
            }
        }
        let (mut saddles, mut centers, mut q) = (if self.pairs.is_empty() { 1 } else { 2 }, 0, 0);
        walk(&self.pairs, &mut saddles, &mut centers, &mut q);
        let n = saddles + centers;
        Counts { n, q, big_n: n + 2 * q, centers }
    }

    /// Mirror image: pair order reversed and each list swapped with its reversed partner.
    pub fn reversed(&self) -> FullLapSignature {
        FullLapSignature { pairs: reverse_seq(&self.pairs) }
    }

    pub fn is_valid(&self) -> bool {
        validate(self).is_empty()
    }

    /// Pairs in pre-order (outer before inner, left to right).
    pub fn pairs_preorder(&self) -> Vec<&Pair> {
        fn walk<'a>(seq: &'a [Pair], out: &mut Vec<&'a Pair>) {
            for p in seq {
                out.push(p);
                if let Pair::Annular { inner, .. } = p {
                    walk(inner, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.pairs, &mut out);
        out
    }
}

impl fmt::Display for FullLapSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn seq(f: &mut fmt::Formatter<'_>, pairs: &[Pair]) -> fmt::Result {
            for (i, p) in pairs.iter().enumerate() {
                if i > 0 {
                    f.write_str("*")?;
                }
                f.write_str("(")?;
                match p {
                    Pair::Central { lower, upper } => write!(f, "{lower}@{upper}")?,
                    Pair::Annular { lower, inner, upper } => {
                        write!(f, "{lower}")?;
                        seq(f, inner)?;
                        write!(f, "{upper}")?;
                    }
                }
                f.write_str(")")?;
            }
            Ok(())
        }
        f.write_str("*")?;
        if !self.pairs.is_empty() {
            seq(f, &self.pairs)?;
            f.write_str("*")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for FullLapSignature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_signature(s)
    }
}

fn ensure_valid(sig: &FullLapSignature) -> Result<()> {
    let v = validate(sig);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidSignature(v))
    }
}

/// `(n, q, N, centers)` of a valid signature.
pub fn counts(sig: &FullLapSignature) -> Result<Counts> {
    ensure_valid(sig)?;
    Ok(sig.counts())
}

pub fn reverse_signature(sig: &FullLapSignature) -> FullLapSignature {
    sig.reversed()
}

/// Representative of `{sig, reverse(sig)}`: the one whose canonical text is
/// byte-wise greater. Under ASCII `{` sorts after `@`, so pairs carrying lap
/// lists are listed before empty central pairs, e.g. `*({1}@{1})*(@)*`.
pub fn canonicalize(sig: &FullLapSignature) -> FullLapSignature {
    let rev = sig.reversed();
    if rev.to_string() > sig.to_string() {
        rev
    } else {
        sig.clone()
    }
}
