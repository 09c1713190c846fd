//! Stylized meanders and document output: SVG, Graphviz DOT and JSON.
//!
//! All writers are deterministic: equal inputs give byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::conngraph::{ConnectionGraph, VertexKind};
use crate::error::{Error, Result};
use crate::lapsig::{EquilibriumLabel, LabelKind, Role};
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub side: Side,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Marker {
    Dot,
    Saddle,
    Center,
    FrozenMin,
    FrozenMax,
}

/// A meander over axis positions `1..=N`. `markers[x − 1]` describes the
/// equilibrium crossing the axis at `x`, which is the `σ(x)`-th point along the curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Meander {
    #[serde(rename = "N")]
    pub n: usize,
    pub arcs: Vec<Arc>,
    pub markers: Vec<Marker>,
}

impl Meander {
    /// The meander turned by 180 degrees: positions `x ↦ N + 1 − x`, sides
    /// exchanged, traversal reversed. This is the meander of the trivially
    /// equivalent permutation.
    pub fn rotated(&self) -> Meander {
        let n = self.n;
        Meander {
            n,
            arcs: self
                .arcs
                .iter()
                .rev()
                .map(|a| Arc {
                    from: n + 1 - a.to,
                    to: n + 1 - a.from,
                    side: match a.side {
                        Side::Upper => Side::Lower,
                        Side::Lower => Side::Upper,
                    },
                })
                .collect(),
            markers: self.markers.iter().rev().copied().collect(),
        }
    }
}

/// Arcs between `σ⁻¹(j)` and `σ⁻¹(j+1)`, alternating from an upper first arc.
/// Markers come from `labels` when given, otherwise they are plain dots.
pub fn meander_arcs(p: &Permutation, labels: Option<&[EquilibriumLabel]>) -> Result<Meander> {
    let n = p.len();
    let inv = p.inverse();
    let arcs = (1..n)
        .map(|j| Arc {
            from: inv.get(j),
            to: inv.get(j + 1),
            side: if j % 2 == 1 { Side::Upper } else { Side::Lower },
        })
        .collect();
    let markers = match labels {
        None => vec![Marker::Dot; n],
        Some(l) if l.len() != n => return Err(Error::LengthMismatch(l.len(), n)),
        Some(l) => (1..=n)
            .map(|x| {
                let label = &l[p.get(x) - 1];
                match (label.kind, label.role) {
                    (LabelKind::Saddle, _) => Marker::Saddle,
                    (LabelKind::Center, _) => Marker::Center,
                    (LabelKind::FrozenEntry, Some(Role::Max)) => Marker::FrozenMax,
                    (LabelKind::FrozenEntry, _) => Marker::FrozenMin,
                }
            })
            .collect(),
    };
    Ok(Meander { n, arcs, markers })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SvgOptions {
    /// Print position numbers under the axis.
    pub labels: bool,
}

const SCALE: usize = 40;

/// SVG 1.1 drawing: axis at `y = 0`, position `k` at `x = k`, arcs as semicircles.
pub fn meander_svg(m: &Meander, opts: SvgOptions) -> String {
    let n = m.n as f64;
    let half = m.arcs.iter().map(|a| a.from.abs_diff(a.to)).max().unwrap_or(0) as f64 / 2.0 + 1.0;
    let width = n + 1.0;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 {} {} {}">"#,
        width * SCALE as f64,
        2.0 * half * SCALE as f64,
        -half,
        width,
        2.0 * half
    );
    let _ = writeln!(
        s,
        r#"<line x1="0.5" y1="0" x2="{}" y2="0" stroke="gray" stroke-width="0.02"/>"#,
        n + 0.5
    );
    for a in &m.arcs {
        let r = a.from.abs_diff(a.to) as f64 / 2.0;
        let rightward = a.to > a.from;
        let sweep = match a.side {
            Side::Upper => rightward,
            Side::Lower => !rightward,
        } as u8;
        let _ = writeln!(
            s,
            r#"<path d="M {} 0 A {r} {r} 0 0 {sweep} {} 0" fill="none" stroke="black" stroke-width="0.04"/>"#,
            a.from, a.to
        );
    }
    for (i, mk) in m.markers.iter().enumerate() {
        let x = i + 1;
        let glyph = match mk {
            Marker::Dot => format!(r#"<circle cx="{x}" cy="0" r="0.08" fill="black"/>"#),
            Marker::Saddle => format!(r#"<circle cx="{x}" cy="0" r="0.15" fill="black"/>"#),
            Marker::Center => format!(
                r#"<circle cx="{x}" cy="0" r="0.15" fill="white" stroke="black" stroke-width="0.03"/><circle cx="{x}" cy="0" r="0.05" fill="black"/>"#
            ),
            Marker::FrozenMin => {
                format!(r#"<circle cx="{x}" cy="0" r="0.12" fill="white" stroke="black" stroke-width="0.03"/>"#)
            }
            Marker::FrozenMax => {
                format!(r#"<line x1="{x}" y1="-0.12" x2="{x}" y2="0.12" stroke="black" stroke-width="0.04"/>"#)
            }
        };
        let _ = writeln!(s, "{glyph}");
        if opts.labels {
            let _ = writeln!(
                s,
                r#"<text x="{x}" y="0.5" font-size="0.3" text-anchor="middle">{x}</text>"#
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

/// DOT drawing of the curve: axis positions in one row, arcs in visiting order.
pub fn meander_dot(m: &Meander) -> String {
    let mut s = String::from("digraph meander {\n  rankdir=LR;\n  node [shape=circle];\n  { rank=same;");
    for x in 1..=m.n {
        let _ = write!(s, " {x};");
    }
    s.push_str(" }\n");
    for x in 1..m.n {
        let _ = writeln!(s, "  {x} -> {} [style=invis];", x + 1);
    }
    for (j, a) in m.arcs.iter().enumerate() {
        let side = match a.side {
            Side::Upper => "upper",
            Side::Lower => "lower",
        };
        let _ = writeln!(
            s,
            "  {} -> {} [constraint=false, label=\"{}\", class=\"{side}\"];",
            a.from,
            a.to,
            j + 1
        );
    }
    s.push_str("}\n");
    s
}

fn kind_name(k: VertexKind) -> &'static str {
    match k {
        VertexKind::Equilibrium => "equilibrium",
        VertexKind::Saddle => "saddle",
        VertexKind::Center => "center",
        VertexKind::FrozenEquilibrium => "frozen_equilibrium",
        VertexKind::FrozenWave => "frozen_wave",
    }
}

/// DOT with one rank per Morse index, higher indices on top.
pub fn graph_dot(g: &ConnectionGraph) -> String {
    let bc = match g.bc {
        crate::conngraph::BoundaryCondition::Neumann => "neumann",
        crate::conngraph::BoundaryCondition::Periodic => "periodic",
    };
    let mut s = format!("digraph {bc} {{\n  rankdir=TB;\n");
    let mut ranks: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for v in &g.vertices {
        ranks.entry(v.morse).or_default().push(v.id);
        let shape = match v.kind {
            VertexKind::Saddle => "shape=point, width=0.15",
            VertexKind::Center => "shape=doublecircle",
            VertexKind::FrozenEquilibrium | VertexKind::FrozenWave => "shape=circle",
            VertexKind::Equilibrium => "shape=circle",
        };
        let _ = writeln!(
            s,
            "  {} [{shape}, label=\"{}\", kind=\"{}\", morse={}];",
            v.id,
            v.id,
            kind_name(v.kind),
            v.morse
        );
    }
    for (morse, ids) in ranks.iter().rev() {
        let _ = write!(s, "  subgraph rank_{morse} {{ rank=same;");
        for id in ids {
            let _ = write!(s, " {id};");
        }
        s.push_str(" }\n");
    }
    for (a, b) in &g.edges {
        let _ = writeln!(s, "  {a} -> {b};");
    }
    s.push_str("}\n");
    s
}

pub fn graph_json(g: &ConnectionGraph) -> String {
    #[derive(Serialize)]
    struct Doc<'a> {
        bc: crate::conngraph::BoundaryCondition,
        vertices: &'a [crate::conngraph::Vertex],
        edges: Vec<[usize; 2]>,
    }
    let doc = Doc { bc: g.bc, vertices: &g.vertices, edges: g.edges.iter().map(|&(a, b)| [a, b]).collect() };
    serde_json::to_string_pretty(&doc).unwrap_or_default()
}

pub fn meander_json(m: &Meander) -> String {
    serde_json::to_string_pretty(m).unwrap_or_default()
}
