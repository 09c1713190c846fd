//! Connection graphs: Neumann graphs from blocking and adjacency, their
//! periodic quotients, closure, reduction and isomorphism.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::bijection::Pairing;
use crate::census::is_sturm;
use crate::error::{Error, Result};
use crate::lapsig::{EquilibriumLabel, LabelKind};
use crate::perm::{morse_indices, zero_numbers, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Neumann,
    Periodic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    /// An equilibrium known only through its permutation.
    Equilibrium,
    Saddle,
    Center,
    FrozenEquilibrium,
    FrozenWave,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub id: usize,
    pub kind: VertexKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lap: Option<u32>,
    pub morse: u32,
    /// Neumann positions collapsed into this vertex, when more than one.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub members: Vec<usize>,
}

impl Vertex {
    pub fn new(id: usize, kind: VertexKind, morse: u32) -> Self {
        Vertex { id, kind, lap: None, morse, members: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectionGraph {
    pub bc: BoundaryCondition,
    pub vertices: Vec<Vertex>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl ConnectionGraph {
    /// Graph from parts; self-loops and edges to unknown ids are rejected.
    pub fn new(
        bc: BoundaryCondition,
        vertices: Vec<Vertex>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let ids: BTreeSet<usize> = vertices.iter().map(|v| v.id).collect();
        if ids.len() != vertices.len() {
            return Err(Error::InvalidArgument("duplicate vertex id".into()));
        }
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        for &(a, b) in &edges {
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop at {a}")));
            }
            if !ids.contains(&a) || !ids.contains(&b) {
                return Err(Error::InvalidArgument(format!("edge {a}→{b} names an unknown vertex")));
            }
        }
        Ok(ConnectionGraph { bc, vertices, edges })
    }

    pub fn vertex(&self, id: usize) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    fn morse_of(&self) -> BTreeMap<usize, u32> {
        self.vertices.iter().map(|v| (v.id, v.morse)).collect()
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.contains(&(from, to))
    }

    /// Every edge runs strictly downhill in Morse index.
    pub fn is_graded(&self) -> bool {
        let m = self.morse_of();
        self.edges.iter().all(|(a, b)| m[a] > m[b])
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Sorted Morse indices of all vertices.
    pub fn morse_multiset(&self) -> Vec<u32> {
        let mut m: Vec<u32> = self.vertices.iter().map(|v| v.morse).collect();
        m.sort_unstable();
        m
    }

    fn index(&self) -> BTreeMap<usize, usize> {
        self.vertices.iter().enumerate().map(|(i, v)| (v.id, i)).collect()
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        let idx = self.index();
        let mut succ = vec![Vec::new(); self.vertices.len()];
        for (a, b) in &self.edges {
            succ[idx[a]].push(idx[b]);
        }
        succ
    }

    fn topological_order(&self) -> Option<Vec<usize>> {
        let succ = self.successors();
        let mut indeg = vec![0usize; succ.len()];
        for s in &succ {
            for &b in s {
                indeg[b] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..succ.len()).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(succ.len());
        while let Some(a) = stack.pop() {
            order.push(a);
            for &b in &succ[a] {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    stack.push(b);
                }
            }
        }
        (order.len() == succ.len()).then_some(order)
    }

    /// `reach[a][b]`: a nonempty path leads from vertex index `a` to `b`.
    fn reachability(&self) -> Result<Vec<Vec<bool>>> {
        let order = self.topological_order().ok_or(Error::Cyclic)?;
        let succ = self.successors();
        let n = succ.len();
        let mut reach = vec![vec![false; n]; n];
        for &a in order.iter().rev() {
            for &b in &succ[a] {
                reach[a][b] = true;
                let row = reach[b].clone();
                for (r, x) in reach[a].iter_mut().zip(row) {
                    *r |= x;
                }
            }
        }
        Ok(reach)
    }

    fn with_edges(&self, edges: BTreeSet<(usize, usize)>) -> ConnectionGraph {
        ConnectionGraph { bc: self.bc, vertices: self.vertices.clone(), edges }
    }
}

/// Neumann connection graph: `j → j'` iff `i_j > i_j'` and no `k` strictly
/// between them has `z_jk = z_jj' = z_j'k`. All edges are kept.
pub fn neumann_graph(p: &Permutation) -> Result<ConnectionGraph> {
    let report = is_sturm(p);
    if !report.sturm {
        return Err(Error::NotSturm(report.failures.join("; ")));
    }
    let morse = morse_indices(p);
    let z = zero_numbers(p)?;
    let n = p.len();
    let mut edges = BTreeSet::new();
    for j in 1..=n {
        for jp in 1..=n {
            if morse.get(j) <= morse.get(jp) {
                continue;
            }
            let zjj = z.at(j, jp);
            let blocked = (j.min(jp) + 1..j.max(jp)).any(|k| z.at(j, k) == zjj && z.at(jp, k) == zjj);
            if !blocked {
                edges.insert((j, jp));
            }
        }
    }
    let vertices = (1..=n)
        .map(|j| Vertex::new(j, VertexKind::Equilibrium, morse.get(j) as u32))
        .collect();
    let g = ConnectionGraph { bc: BoundaryCondition::Neumann, vertices, edges };
    if !g.is_graded() {
        return Err(Error::InternalInvariant("Neumann graph has an uphill edge".into()));
    }
    Ok(g)
}

/// Neumann graph whose vertex kinds and laps come from signature labels.
pub fn neumann_graph_labelled(p: &Permutation, labels: &[EquilibriumLabel]) -> Result<ConnectionGraph> {
    let mut g = neumann_graph(p)?;
    if labels.len() != g.vertices.len() {
        return Err(Error::LengthMismatch(labels.len(), g.vertices.len()));
    }
    for (v, l) in g.vertices.iter_mut().zip(labels) {
        if l.morse_neumann != v.morse {
            return Err(Error::PairingInconsistent(format!(
                "label at {} has Neumann index {} but the permutation gives {}",
                l.position, l.morse_neumann, v.morse
            )));
        }
        v.kind = match l.kind {
            LabelKind::Saddle => VertexKind::Saddle,
            LabelKind::Center => VertexKind::Center,
            LabelKind::FrozenEntry => VertexKind::FrozenEquilibrium,
        };
        v.lap = l.lap;
    }
    Ok(g)
}

/// Periodic connection graph: each min/max pair becomes one frozen wave with
/// its periodic index, centers take `2 i − 1`, saddles stay at 0. Edges are
/// carried over and self-loops dropped.
pub fn quotient_periodic(
    g: &ConnectionGraph,
    pairing: &Pairing,
    labels: &[EquilibriumLabel],
) -> Result<ConnectionGraph> {
    let n = g.vertices.len();
    if labels.len() != n {
        return Err(Error::PairingInconsistent(format!("{} labels for {n} vertices", labels.len())));
    }
    for (v, l) in g.vertices.iter().zip(labels) {
        if v.id != l.position || v.morse != l.morse_neumann {
            return Err(Error::PairingInconsistent(format!(
                "vertex {} (index {}) disagrees with label at {} (index {})",
                v.id, v.morse, l.position, l.morse_neumann
            )));
        }
    }
    let mut rep: Vec<usize> = (0..=n).collect();
    for fp in &pairing.pairs {
        let ok = |pos: usize| {
            (1..=n).contains(&pos) && labels[pos - 1].kind == LabelKind::FrozenEntry && labels[pos - 1].lap == Some(fp.lap)
        };
        if !ok(fp.min) || !ok(fp.max) || labels[fp.min - 1].partner != Some(fp.max) || rep[fp.min] != fp.min || rep[fp.max] != fp.max {
            return Err(Error::PairingInconsistent(format!(
                "pair ({}, {}) with lap {} does not match the labels",
                fp.min, fp.max, fp.lap
            )));
        }
        rep[fp.max] = fp.min;
    }
    let unpaired = labels.iter().filter(|l| l.kind == LabelKind::FrozenEntry).count() - 2 * pairing.len();
    if unpaired != 0 {
        return Err(Error::PairingInconsistent(format!("{unpaired} frozen entries left unpaired")));
    }
    let mut vertices = Vec::new();
    for l in labels {
        if rep[l.position] != l.position {
            continue;
        }
        let v = match l.kind {
            LabelKind::Saddle => Vertex::new(l.position, VertexKind::Saddle, 0),
            LabelKind::Center => Vertex::new(l.position, VertexKind::Center, l.morse_periodic),
            LabelKind::FrozenEntry => {
                let max = l.partner.unwrap_or(l.position);
                Vertex {
                    id: l.position,
                    kind: VertexKind::FrozenWave,
                    lap: l.lap,
                    morse: l.morse_periodic,
                    members: vec![l.position, max],
                }
            }
        };
        vertices.push(v);
    }
    let edges: BTreeSet<(usize, usize)> = g
        .edges
        .iter()
        .map(|&(a, b)| (rep[a], rep[b]))
        .filter(|(a, b)| a != b)
        .collect();
    let q = ConnectionGraph { bc: BoundaryCondition::Periodic, vertices, edges };
    if !q.is_graded() {
        return Err(Error::InternalInvariant("periodic quotient has an uphill edge".into()));
    }
    Ok(q)
}

pub fn transitive_closure(g: &ConnectionGraph) -> Result<ConnectionGraph> {
    let reach = g.reachability()?;
    let ids: Vec<usize> = g.vertices.iter().map(|v| v.id).collect();
    let mut edges = BTreeSet::new();
    for (a, row) in reach.iter().enumerate() {
        for (b, &r) in row.iter().enumerate() {
            if r {
                edges.insert((ids[a], ids[b]));
            }
        }
    }
    Ok(g.with_edges(edges))
}

/// The minimal edge set with the same transitive closure.
pub fn transitive_reduction(g: &ConnectionGraph) -> Result<ConnectionGraph> {
    let reach = g.reachability()?;
    let idx = g.index();
    let succ = g.successors();
    let edges = g
        .edges
        .iter()
        .copied()
        .filter(|(a, b)| {
            let (a, b) = (idx[a], idx[b]);
            !succ[a].iter().any(|&w| w != b && reach[w][b])
        })
        .collect();
    Ok(g.with_edges(edges))
}

/// Structural isomorphism preserving edges, kinds and Morse indices.
///
/// Vertices are first split by (kind, Morse index, out-degree, in-degree) and
/// the split is refined by neighbour colours; a backtracking search then
/// matches within colour classes.
pub fn graph_isomorphic(g1: &ConnectionGraph, g2: &ConnectionGraph) -> bool {
    isomorphism(g1, g2).is_some()
}

/// A vertex bijection `g1 → g2` by id, if one exists.
pub fn isomorphism(g1: &ConnectionGraph, g2: &ConnectionGraph) -> Option<BTreeMap<usize, usize>> {
    if g1.bc != g2.bc || g1.vertices.len() != g2.vertices.len() || g1.edges.len() != g2.edges.len() {
        return None;
    }
    let n = g1.vertices.len();
    let (adj1, adj2) = (adjacency(g1), adjacency(g2));
    let (c1, c2) = refine_pair(g1, g2, &adj1, &adj2);
    let mut h1: BTreeMap<u64, usize> = BTreeMap::new();
    let mut h2: BTreeMap<u64, usize> = BTreeMap::new();
    c1.iter().for_each(|&c| *h1.entry(c).or_default() += 1);
    c2.iter().for_each(|&c| *h2.entry(c).or_default() += 1);
    if h1 != h2 {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (h1[&c1[v]], v));
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if !extend(0, &order, &c1, &c2, &adj1, &adj2, &mut map, &mut used) {
        return None;
    }
    Some(
        map.iter()
            .enumerate()
            .map(|(a, &b)| (g1.vertices[a].id, g2.vertices[b].id))
            .collect(),
    )
}

fn adjacency(g: &ConnectionGraph) -> Vec<Vec<bool>> {
    let idx = g.index();
    let n = g.vertices.len();
    let mut adj = vec![vec![false; n]; n];
    for (a, b) in &g.edges {
        adj[idx[a]][idx[b]] = true;
    }
    adj
}

fn refine_pair(
    g1: &ConnectionGraph,
    g2: &ConnectionGraph,
    adj1: &[Vec<bool>],
    adj2: &[Vec<bool>],
) -> (Vec<u64>, Vec<u64>) {
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};
    fn hash<T: Hash>(t: &T) -> u64 {
        let mut h = DefaultHasher::new();
        t.hash(&mut h);
        h.finish()
    }
    let initial = |g: &ConnectionGraph, adj: &[Vec<bool>]| -> Vec<u64> {
        g.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let out = adj[i].iter().filter(|&&x| x).count();
                let inn = adj.iter().filter(|row| row[i]).count();
                hash(&(v.kind, v.morse, out, inn))
            })
            .collect()
    };
    let step = |c: &[u64], adj: &[Vec<bool>]| -> Vec<u64> {
        (0..c.len())
            .map(|i| {
                let mut outs: Vec<u64> = (0..c.len()).filter(|&j| adj[i][j]).map(|j| c[j]).collect();
                let mut ins: Vec<u64> = (0..c.len()).filter(|&j| adj[j][i]).map(|j| c[j]).collect();
                outs.sort_unstable();
                ins.sort_unstable();
                hash(&(c[i], outs, ins))
            })
            .collect()
    };
    let classes = |c: &[u64]| c.iter().collect::<BTreeSet<_>>().len();
    let (mut c1, mut c2) = (initial(g1, adj1), initial(g2, adj2));
    loop {
        let (n1, n2) = (step(&c1, adj1), step(&c2, adj2));
        let stable = classes(&n1) == classes(&c1);
        c1 = n1;
        c2 = n2;
        if stable {
            return (c1, c2);
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    depth: usize,
    order: &[usize],
    c1: &[u64],
    c2: &[u64],
    adj1: &[Vec<bool>],
    adj2: &[Vec<bool>],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&a) = order.get(depth) else {
        return true;
    };
    for b in 0..c2.len() {
        if used[b] || c2[b] != c1[a] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&x| {
            let y = map[x];
            adj1[a][x] == adj2[b][y] && adj1[x][a] == adj2[y][b]
        });
        if !consistent {
            continue;
        }
        map[a] = b;
        used[b] = true;
        if extend(depth + 1, order, c1, c2, adj1, adj2, map, used) {
            return true;
        }
        used[b] = false;
        map[a] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bijection::signature_to_permutation;
    use crate::lapsig::{labels, parse_signature};

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn edges(v: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
        v.iter().copied().collect()
    }

    fn plain(n: usize, e: &[(usize, usize)]) -> ConnectionGraph {
        let vertices = (1..=n).map(|i| Vertex::new(i, VertexKind::Equilibrium, (n - i) as u32)).collect();
        ConnectionGraph::new(BoundaryCondition::Neumann, vertices, e.iter().copied()).unwrap()
    }

    fn periodic(sig: &str) -> ConnectionGraph {
        let s = parse_signature(sig).unwrap();
        let (p, pairing) = signature_to_permutation(&s).unwrap();
        let l = labels(&s).unwrap();
        quotient_periodic(&neumann_graph_labelled(&p, &l).unwrap(), &pairing, &l).unwrap()
    }

    #[test]
    fn neumann_examples() {
        assert_eq!(neumann_graph(&perm("1,2,3")).unwrap().edges, edges(&[(2, 1), (2, 3)]));
        let ci2 = neumann_graph(&perm("1,4,3,2,5")).unwrap();
        assert_eq!(
            ci2.edges,
            edges(&[(3, 2), (3, 4), (3, 1), (3, 5), (2, 1), (2, 5), (4, 1), (4, 5)])
        );
        assert!(matches!(neumann_graph(&perm("1,3,2")), Err(Error::NotSturm(_))));
    }

    #[test]
    fn closure_and_reduction_examples() {
        let chain = plain(3, &[(1, 2), (2, 3)]);
        assert_eq!(transitive_closure(&chain).unwrap().edges, edges(&[(1, 2), (2, 3), (1, 3)]));
        let empty = plain(3, &[]);
        assert_eq!(transitive_closure(&empty).unwrap(), empty);
        assert_eq!(transitive_reduction(&empty).unwrap(), empty);
        let tri = plain(3, &[(1, 2), (2, 3), (1, 3)]);
        assert_eq!(transitive_reduction(&tri).unwrap().edges, edges(&[(1, 2), (2, 3)]));
        let ci2 = neumann_graph(&perm("1,4,3,2,5")).unwrap();
        assert_eq!(transitive_closure(&ci2).unwrap(), ci2);
        assert_eq!(
            transitive_reduction(&ci2).unwrap().edges,
            edges(&[(3, 2), (3, 4), (2, 1), (2, 5), (4, 1), (4, 5)])
        );
        let cyc = plain(2, &[(1, 2), (2, 1)]);
        assert_eq!(transitive_closure(&cyc), Err(Error::Cyclic));
        assert_eq!(transitive_reduction(&cyc), Err(Error::Cyclic));
    }

    #[test]
    fn quotient_examples() {
        let ci2 = periodic("*({1}@{1})*");
        assert_eq!(ci2.vertices.len(), 4);
        assert_eq!(ci2.morse_multiset(), vec![0, 0, 1, 3]);
        assert_eq!(ci2.edges, edges(&[(3, 2), (3, 1), (3, 5), (2, 1), (2, 5)]));
        let c = periodic("*({1,1}(@)*(@){1,1})*");
        assert_eq!(c.vertices.len(), 7);
        assert_eq!(c.morse_multiset(), vec![0, 0, 0, 1, 1, 1, 2]);
        let vas = periodic("*({1,1}({1}@{1})*({1}@{1}){1,1})*");
        assert_eq!(vas.vertices.len(), 9);
        assert_eq!(vas.morse_multiset(), vec![0, 0, 0, 1, 1, 1, 2, 3, 3]);
    }

    #[test]
    fn quotient_rejects_bad_pairing() {
        let s = parse_signature("*({1}@{1})*").unwrap();
        let (p, mut pairing) = signature_to_permutation(&s).unwrap();
        let l = labels(&s).unwrap();
        let g = neumann_graph_labelled(&p, &l).unwrap();
        pairing.pairs[0].max = 3;
        assert!(matches!(quotient_periodic(&g, &pairing, &l), Err(Error::PairingInconsistent(_))));
        pairing.pairs.clear();
        assert!(matches!(quotient_periodic(&g, &pairing, &l), Err(Error::PairingInconsistent(_))));
    }

    #[test]
    fn isomorphism_examples() {
        let ci2 = periodic("*({1}@{1})*");
        assert!(graph_isomorphic(&ci2, &ci2));
        let relabelled = ConnectionGraph::new(
            BoundaryCondition::Periodic,
            vec![
                Vertex::new(10, VertexKind::Center, 3),
                Vertex::new(11, VertexKind::FrozenWave, 1),
                Vertex::new(12, VertexKind::Saddle, 0),
                Vertex::new(13, VertexKind::Saddle, 0),
            ],
            [(10, 11), (10, 12), (10, 13), (11, 12), (11, 13)],
        )
        .unwrap();
        assert!(graph_isomorphic(&ci2, &relabelled));
        let ci3 = periodic("*({1,2}@{2,1})*");
        assert!(!graph_isomorphic(&ci2, &ci3));
        let mut wrong_kind = relabelled.clone();
        wrong_kind.vertices[1].kind = VertexKind::Center;
        assert!(!graph_isomorphic(&ci2, &wrong_kind));
    }

    #[test]
    fn isomorphism_respects_levels_of_edge_ends() {
        // Same degree sequence, but the edges join different Morse levels.
        let a = plain(4, &[(1, 2), (3, 4)]);
        let mut b = plain(4, &[(1, 2), (3, 4)]);
        b.vertices.reverse();
        assert!(graph_isomorphic(&a, &b));
        let c = plain(4, &[(1, 3), (2, 4)]);
        assert!(!graph_isomorphic(&a, &c));
    }
}
