use std::fmt;

use serde::Serialize;

use super::{FullLapSignature, LapList, Pair};
use crate::error::{Error, Result};

/// The nine defining properties of a full lap signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Axiom {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
}

impl Axiom {
    pub fn roman(self) -> &'static str {
        match self {
            Axiom::I => "i",
            Axiom::II => "ii",
            Axiom::III => "iii",
            Axiom::IV => "iv",
            Axiom::V => "v",
            Axiom::VI => "vi",
            Axiom::VII => "vii",
            Axiom::VIII => "viii",
            Axiom::IX => "ix",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.roman())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub location: String,
    pub detail: String,
}

impl Violation {
    pub(crate) fn new(axiom: Axiom, location: impl Into<String>, detail: impl Into<String>) -> Self {
        Violation { axiom, location: location.into(), detail: detail.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.axiom, self.location, self.detail)
    }
}

/// Sign of the period-map derivative at a lap-number crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Pos => Sign::Neg,
        }
    }
}

/// Numeric list axioms (vii)–(ix) for one lower list.
pub(crate) fn list_violations(list: &LapList, annular: bool) -> Vec<(Axiom, String)> {
    let l = list.entries();
    let mut out = Vec::new();
    if l.is_empty() {
        return out;
    }
    if l.contains(&0) {
        out.push((Axiom::VII, "lap numbers must be positive".to_string()));
    }
    if l[0] != 1 {
        out.push((Axiom::VII, format!("first lap number is {}, expected 1", l[0])));
    }
    if annular {
        if l[l.len() - 1] != 1 {
            out.push((Axiom::VII, format!("annular list ends with {}, expected 1", l[l.len() - 1])));
        }
        if !l.len().is_multiple_of(2) {
            out.push((Axiom::VII, format!("annular list has odd length {}", l.len())));
        }
    }
    for (j, w) in l.windows(2).enumerate() {
        if w[0].abs_diff(w[1]) > 1 {
            out.push((
                Axiom::VIII,
                format!("jump from ℓ_{}={} to ℓ_{}={}", j + 1, w[0], j + 2, w[1]),
            ));
        }
    }
    // Alternate jumps: a maximal run ℓ_{j0} = … = ℓ_{j1} followed by a change
    // keeps direction when its length is odd and reverses when even, with ℓ_0 = 0.
    // Only jump directions are compared; oversized jumps belong to (viii).
    let s = l.len();
    let mut j0 = 0;
    while j0 < s {
        let mut j1 = j0;
        while j1 + 1 < s && l[j1 + 1] == l[j0] {
            j1 += 1;
        }
        if j1 + 1 < s {
            let before = if j0 == 0 { 0 } else { l[j0 - 1] as i64 };
            let incoming = (l[j0] as i64 - before).signum();
            let outgoing = (l[j1 + 1] as i64 - l[j1] as i64).signum();
            let expected = if (j1 - j0) % 2 == 0 { 1 } else { -1 };
            if incoming * outgoing != expected {
                out.push((
                    Axiom::IX,
                    format!(
                        "run ℓ_{}..ℓ_{} = {} of length {} {} direction",
                        j0 + 1,
                        j1 + 1,
                        l[j0],
                        j1 - j0 + 1,
                        if expected == 1 { "must keep" } else { "must reverse" }
                    ),
                ));
            }
        }
        j0 = j1 + 1;
    }
    out
}

/// Every violated axiom of a structurally parsed signature, with locations.
pub fn validate(sig: &FullLapSignature) -> Vec<Violation> {
    let mut out = Vec::new();
    validate_seq(&sig.pairs, "", &mut out);
    out
}

fn validate_seq(seq: &[Pair], prefix: &str, out: &mut Vec<Violation>) {
    for (idx, pair) in seq.iter().enumerate() {
        let loc = if prefix.is_empty() {
            format!("pair {}", idx + 1)
        } else {
            format!("{prefix}.{}", idx + 1)
        };
        let (lower, upper) = (pair.lower(), pair.upper());
        if let Pair::Annular { inner, .. } = pair {
            if lower.is_empty() || upper.is_empty() {
                out.push(Violation::new(Axiom::V, &loc, "annular pair with an empty list"));
            }
            if inner.len() < 2 {
                out.push(Violation::new(
                    Axiom::II,
                    &loc,
                    "redundant nesting: annular pair must enclose at least two pairs",
                ));
            }
        }
        if *upper != lower.reversed() {
            out.push(Violation::new(
                Axiom::VI,
                &loc,
                format!("upper list {upper} is not the lower list {lower} reversed"),
            ));
        }
        for (axiom, detail) in list_violations(lower, pair.is_annular()) {
            out.push(Violation::new(axiom, format!("{loc} lower list"), detail));
        }
        if let Pair::Annular { inner, .. } = pair {
            validate_seq(inner, &loc, out);
        }
    }
}

/// Signs of `T'` at the crossings of one lower list, starting from `Neg`.
///
/// Equal neighbours flip the sign; a step up keeps `Neg` and a step down keeps
/// `Pos`. Any other transition means an unchecked list slipped through.
pub fn tprime_signs(list: &LapList) -> Result<Vec<Sign>> {
    let l = list.entries();
    let mut out: Vec<Sign> = Vec::with_capacity(l.len());
    for (j, &lap) in l.iter().enumerate() {
        let sign = if j == 0 {
            Sign::Neg
        } else {
            let prev = out[j - 1];
            let before = l[j - 1];
            if lap == before {
                prev.flip()
            } else if lap == before + 1 && prev == Sign::Neg {
                Sign::Neg
            } else if lap + 1 == before && prev == Sign::Pos {
                Sign::Pos
            } else {
                return Err(Error::InternalInvariant(format!(
                    "inconsistent crossing at ℓ_{}: {} after {} with T' {:?}",
                    j + 1,
                    lap,
                    before,
                    prev
                )));
            }
        };
        out.push(sign);
    }
    Ok(out)
}
