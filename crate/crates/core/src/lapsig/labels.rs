use serde::Serialize;

use super::validate::{tprime_signs, Sign};
use super::{ensure_valid, FullLapSignature, Pair};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelKind {
    Saddle,
    Center,
    #[serde(rename = "frozen")]
    FrozenEntry,
}

/// Which end of a min/max pair a frozen entry sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Min,
    Max,
}

/// One symbol of the stripped sequence, with its Morse indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquilibriumLabel {
    pub position: usize,
    pub kind: LabelKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lap: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tprime_sign: Option<Sign>,
    pub morse_neumann: u32,
    pub morse_periodic: u32,
    /// Position of the mirrored entry in the paired list.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partner: Option<usize>,
}

impl EquilibriumLabel {
    fn saddle(position: usize) -> Self {
        EquilibriumLabel {
            position,
            kind: LabelKind::Saddle,
            lap: None,
            role: None,
            tprime_sign: None,
            morse_neumann: 0,
            morse_periodic: 0,
            partner: None,
        }
    }
}

fn frozen_indices(lap: u32, sign: Sign) -> (u32, u32) {
    match sign {
        Sign::Neg => (lap, 2 * lap - 1),
        Sign::Pos => (lap + 1, 2 * lap),
    }
}

struct Walker {
    out: Vec<EquilibriumLabel>,
}

impl Walker {
    fn next_pos(&self) -> usize {
        self.out.len() + 1
    }

    fn seq(&mut self, pairs: &[Pair]) -> Result<()> {
        for (i, p) in pairs.iter().enumerate() {
            if i > 0 {
                let pos = self.next_pos();
                self.out.push(EquilibriumLabel::saddle(pos));
            }
            self.pair(p)?;
        }
        Ok(())
    }

    fn pair(&mut self, pair: &Pair) -> Result<()> {
        let lower = pair.lower();
        let signs = tprime_signs(lower)?;
        let s = lower.len();
        let first_lower = self.next_pos();
        for (j, (&lap, &sign)) in lower.entries().iter().zip(&signs).enumerate() {
            let (neu, per) = frozen_indices(lap, sign);
            self.out.push(EquilibriumLabel {
                position: first_lower + j,
                kind: LabelKind::FrozenEntry,
                lap: Some(lap),
                role: Some(Role::Min),
                tprime_sign: Some(sign),
                morse_neumann: neu,
                morse_periodic: per,
                partner: None,
            });
        }
        match pair {
            Pair::Central { .. } => {
                let neu = match (lower.entries().last(), signs.last()) {
                    (Some(&l), Some(Sign::Neg)) => l + 1,
                    (Some(&l), Some(Sign::Pos)) => l,
                    _ => 1,
                };
                let pos = self.next_pos();
                self.out.push(EquilibriumLabel {
                    position: pos,
                    kind: LabelKind::Center,
                    lap: None,
                    role: None,
                    tprime_sign: None,
                    morse_neumann: neu,
                    morse_periodic: 2 * neu - 1,
                    partner: None,
                });
            }
            Pair::Annular { inner, .. } => self.seq(inner)?,
        }
        let first_upper = self.next_pos();
        for j in 0..s {
            let mirror = s - 1 - j;
            let lower_pos = first_lower + mirror;
            let lower_label = &mut self.out[lower_pos - 1];
            lower_label.partner = Some(first_upper + j);
            let mut upper_label = lower_label.clone();
            upper_label.position = first_upper + j;
            upper_label.role = Some(Role::Max);
            upper_label.partner = Some(lower_pos);
            self.out.push(upper_label);
        }
        Ok(())
    }
}

/// Labels of the stripped sequence, positions `1..=N` from left to right.
///
/// Frozen entries of an upper list copy lap and crossing sign from their
/// mirrored lower entry. A center takes Neumann index `ℓ_s + 1` or `ℓ_s`
/// according to the last crossing sign of its lower list, and `1` if that list
/// is empty.
pub fn labels(sig: &FullLapSignature) -> Result<Vec<EquilibriumLabel>> {
    ensure_valid(sig)?;
    let mut w = Walker { out: Vec::with_capacity(sig.counts().big_n) };
    w.out.push(EquilibriumLabel::saddle(1));
    if !sig.pairs.is_empty() {
        w.seq(&sig.pairs)?;
        let pos = w.next_pos();
        w.out.push(EquilibriumLabel::saddle(pos));
    }
    Ok(w.out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lapsig::parse_signature;

    fn neumann(s: &str) -> Vec<u32> {
        labels(&parse_signature(s).unwrap()).unwrap().iter().map(|l| l.morse_neumann).collect()
    }

    #[test]
    fn label_examples() {
        let l = labels(&parse_signature("*({1}@{1})*").unwrap()).unwrap();
        let kinds: Vec<LabelKind> = l.iter().map(|x| x.kind).collect();
        use LabelKind::*;
        assert_eq!(kinds, vec![Saddle, FrozenEntry, Center, FrozenEntry, Saddle]);
        assert_eq!(neumann("*({1}@{1})*"), vec![0, 1, 2, 1, 0]);
        assert_eq!(neumann("*({1,1}(@)*(@){1,1})*"), vec![0, 1, 2, 1, 0, 1, 2, 1, 0]);
        assert_eq!(
            neumann("*({1,1}({1}@{1})*({1}@{1}){1,1})*"),
            vec![0, 1, 2, 1, 2, 1, 0, 1, 2, 1, 2, 1, 0]
        );
    }

    #[test]
    fn partners_and_periodic_indices() {
        let l = labels(&parse_signature("*({1,1}(@)*(@){1,1})*").unwrap()).unwrap();
        assert_eq!(l[1].partner, Some(8));
        assert_eq!(l[2].partner, Some(7));
        assert_eq!(l[6].role, Some(Role::Max));
        let periodic: Vec<u32> = l.iter().map(|x| x.morse_periodic).collect();
        assert_eq!(periodic, vec![0, 1, 2, 1, 0, 1, 2, 1, 0]);
        let ci3 = labels(&parse_signature("*({1,2}@{2,1})*").unwrap()).unwrap();
        let periodic: Vec<u32> = ci3.iter().map(|x| x.morse_periodic).collect();
        assert_eq!(periodic, vec![0, 1, 3, 5, 3, 1, 0]);
    }

    #[test]
    fn trivial_signature() {
        let l = labels(&FullLapSignature::trivial()).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l[0].kind, LabelKind::Saddle);
    }
}
