//! Two-stage reader: a lexer producing a bracket tree, then a structural pass
//! that maps the tree onto saddles, central and annular pairs.

use super::validate::{validate, Axiom, Violation};
use super::{FullLapSignature, LapList, Pair};
use crate::error::{Error, Result};

#[derive(Debug)]
enum Item {
    Saddle(usize),
    Center(usize),
    List(LapList, usize),
    Group(Vec<Item>, usize),
}

impl Item {
    fn pos(&self) -> usize {
        match self {
            Item::Saddle(p) | Item::Center(p) | Item::List(_, p) | Item::Group(_, p) => *p,
        }
    }
}

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, pos: usize, msg: impl Into<String>) -> Error {
        Error::Parse { pos, msg: msg.into() }
    }

    fn list(&mut self) -> Result<LapList> {
        let open = self.pos;
        self.pos += 1;
        let mut out = Vec::new();
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&b'}') {
            self.pos += 1;
            return Ok(LapList(out));
        }
        loop {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return match self.bytes.get(self.pos) {
                    None => Err(self.err(open, "unterminated lap list")),
                    Some(&c) => Err(self.err(self.pos, format!("expected a lap number, found {:?}", c as char))),
                };
            }
            let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap_or_default();
            let lap: u32 = text
                .parse()
                .map_err(|_| self.err(start, format!("lap number {text} is out of range")))?;
            if lap == 0 {
                return Err(self.err(start, "lap numbers must be positive"));
            }
            out.push(lap);
            self.skip_ws();
            match self.bytes.get(self.pos) {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(LapList(out));
                }
                None => return Err(self.err(open, "unterminated lap list")),
                Some(&c) => {
                    return Err(self.err(self.pos, format!("expected ',' or '}}' in lap list, found {:?}", c as char)))
                }
            }
        }
    }

    /// Reads items up to a closing parenthesis (nested) or end of input (top level).
    fn items(&mut self, open: Option<usize>, structural: &mut Vec<Violation>) -> Result<Vec<Item>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let pos = self.pos;
            let Some(&c) = self.bytes.get(pos) else {
                if let Some(o) = open {
                    structural.push(Violation::new(
                        Axiom::II,
                        format!("byte {o}"),
                        "unbalanced parenthesis: '(' is never closed",
                    ));
                }
                return Ok(out);
            };
            match c {
                b'*' => {
                    self.pos += 1;
                    out.push(Item::Saddle(pos));
                }
                b'@' => {
                    self.pos += 1;
                    out.push(Item::Center(pos));
                }
                b'{' => {
                    let l = self.list()?;
                    out.push(Item::List(l, pos));
                }
                b'(' => {
                    self.pos += 1;
                    let inner = self.items(Some(pos), structural)?;
                    out.push(Item::Group(inner, pos));
                }
                b')' => {
                    self.pos += 1;
                    if open.is_some() {
                        return Ok(out);
                    }
                    structural.push(Violation::new(
                        Axiom::II,
                        format!("byte {pos}"),
                        "unbalanced parenthesis: ')' without a matching '('",
                    ));
                }
                other => {
                    let ch = std::str::from_utf8(&self.bytes[pos..])
                        .ok()
                        .and_then(|s| s.chars().next())
                        .unwrap_or(other as char);
                    return Err(self.err(pos, format!("unexpected character {ch:?}")));
                }
            }
        }
    }
}

struct Builder {
    violations: Vec<Violation>,
}

impl Builder {
    fn push(&mut self, axiom: Axiom, pos: usize, detail: impl Into<String>) {
        self.violations.push(Violation::new(axiom, format!("byte {pos}"), detail));
    }

    /// Interprets `items` as `Pair (* Pair)*`. Stray saddles, centers and lists
    /// are reported and skipped.
    fn pair_seq(&mut self, items: Vec<Item>) -> Vec<Pair> {
        let mut pairs = Vec::new();
        let mut expect_pair = true;
        let mut last_pos = 0;
        let mut leading = true;
        for item in items {
            last_pos = item.pos();
            match item {
                Item::Group(inner, pos) => {
                    if !expect_pair {
                        self.push(Axiom::III, pos, "adjacent pairs must be separated by a saddle '*'");
                    }
                    pairs.push(self.pair(inner, pos));
                    expect_pair = false;
                }
                Item::Saddle(pos) => {
                    if expect_pair {
                        let what = if leading {
                            "saddle '*' before the first pair of a nested sequence"
                        } else {
                            "consecutive saddles '**' without a pair in between"
                        };
                        self.push(Axiom::III, pos, what);
                    }
                    expect_pair = true;
                }
                Item::Center(pos) => {
                    self.push(Axiom::IV, pos, "center '@' outside a central pair");
                }
                Item::List(_, pos) => {
                    self.push(Axiom::II, pos, "lap list not attached to a pair boundary");
                }
            }
            leading = false;
        }
        if expect_pair && !pairs.is_empty() {
            self.push(Axiom::III, last_pos, "saddle '*' after the last pair of a nested sequence");
        }
        pairs
    }

    fn pair(&mut self, mut inner: Vec<Item>, pos: usize) -> Pair {
        let lower = match inner.first() {
            Some(Item::List(..)) => match inner.remove(0) {
                Item::List(l, _) => l,
                _ => unreachable!(),
            },
            _ => LapList::default(),
        };
        let upper = match inner.last() {
            Some(Item::List(..)) => match inner.pop() {
                Some(Item::List(l, _)) => l,
                _ => unreachable!(),
            },
            _ => LapList::default(),
        };
        let centers = inner.iter().filter(|i| matches!(i, Item::Center(_))).count();
        let groups = inner.iter().filter(|i| matches!(i, Item::Group(..))).count();
        if groups == 0 {
            match centers {
                0 => self.push(Axiom::IV, pos, "central pair without a center '@'"),
                1 => {}
                _ => self.push(Axiom::IV, pos, "central pair with more than one center '@'"),
            }
            for item in &inner {
                match item {
                    Item::Saddle(p) => self.push(Axiom::IV, *p, "saddle '*' inside a central pair"),
                    Item::List(_, p) => self.push(Axiom::II, *p, "lap list not attached to a pair boundary"),
                    _ => {}
                }
            }
            return Pair::Central { lower, upper };
        }
        let inner = self.pair_seq(inner);
        Pair::Annular { lower, inner, upper }
    }

    fn top(&mut self, items: Vec<Item>) -> Vec<Pair> {
        match items.first() {
            None => {
                self.push(Axiom::I, 0, "empty signature");
                return Vec::new();
            }
            Some(Item::Saddle(_)) => {}
            Some(first) => self.push(Axiom::I, first.pos(), "signature must start with a saddle '*'"),
        }
        match items.last() {
            Some(Item::Saddle(_)) | None => {}
            Some(last) => self.push(Axiom::I, last.pos(), "signature must end with a saddle '*'"),
        }
        let mut items = items;
        if matches!(items.first(), Some(Item::Saddle(_))) {
            items.remove(0);
        }
        if matches!(items.last(), Some(Item::Saddle(_))) {
            let p = items.pop().map(|i| i.pos()).unwrap_or(0);
            if items.is_empty() {
                self.push(Axiom::III, p, "consecutive saddles '**' without a pair in between");
            }
        }
        self.pair_seq(items)
    }
}

/// Parses the ASCII signature form.
///
/// Lexical problems yield [`Error::Parse`]. Structural problems, the axioms
/// (i)–(vi), yield [`Error::InvalidSignature`]. The numeric list axioms are left
/// to [`validate`].
pub fn parse_signature(text: &str) -> Result<FullLapSignature> {
    let mut lexer = Lexer { bytes: text.as_bytes(), pos: 0 };
    let mut structural = Vec::new();
    let items = lexer.items(None, &mut structural)?;
    let mut b = Builder { violations: structural };
    let pairs = b.top(items);
    let sig = FullLapSignature::new(pairs);
    let mut violations = b.violations;
    violations.extend(validate(&sig).into_iter().filter(|v| v.axiom <= Axiom::VI));
    if violations.is_empty() {
        Ok(sig)
    } else {
        Err(Error::InvalidSignature(violations))
    }
}
