//! Mixed graphs with arrows, dashed lines and full lines.
//!
//! Full-line graphs are concentration graphs: a missing edge means the pair is
//! conditionally independent given all remaining nodes, and every implied
//! independence is read off by separation.

use alloc::collections::VecDeque;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest node count for which [`implied_independencies`] enumerates.
pub const ENUMERATION_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    /// `a <- b`: `b` is a parent of `a`.
    Arrow,
    Dashed,
    Full,
}

/// An edge between node indices. For arrows `b` is the parent and `a` the
/// offspring; the other kinds are symmetric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub kind: EdgeKind,
}

#[derive(Clone, Debug)]
pub struct MixedGraph {
    nodes: Vec<String>,
    edges: Vec<Edge>,
    blocks: Option<Vec<Vec<usize>>>,
    adjacency: Vec<Vec<usize>>,
}

impl Edge {
    // symmetric kinds compare with endpoints in ascending order
    fn normalized(&self) -> (usize, usize, EdgeKind) {
        match self.kind {
            EdgeKind::Arrow => (self.a, self.b, self.kind),
            _ => (self.a.min(self.b), self.a.max(self.b), self.kind),
        }
    }
}

/// Graphs are equal when they have the same nodes in the same order, the same
/// blocks and the same edges; endpoint order matters only for arrows.
impl PartialEq for MixedGraph {
    fn eq(&self, other: &Self) -> bool {
        let set = |g: &MixedGraph| {
            let mut v: Vec<_> = g.edges.iter().map(Edge::normalized).collect();
            v.sort_unstable();
            v
        };
        self.nodes == other.nodes && self.blocks == other.blocks && set(self) == set(other)
    }
}

impl Eq for MixedGraph {}

impl MixedGraph {
    /// Validating constructor. `blocks`, when present, must partition the
    /// nodes; the first block holds the primary responses and every arrow's
    /// parent must sit in a strictly later block than its offspring.
    pub fn new(
        nodes: Vec<String>,
        edges: Vec<Edge>,
        blocks: Option<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let n = nodes.len();
        for (i, name) in nodes.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::EmptyVariableName);
            }
            if nodes[..i].contains(name) {
                return Err(Error::DuplicateVariable(name.clone()));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            if e.a >= n || e.b >= n {
                return Err(Error::InvalidGraph("edge endpoint out of range".into()));
            }
            if e.a == e.b {
                return Err(Error::InvalidGraph(alloc::format!(
                    "self-loop at `{}`",
                    nodes[e.a]
                )));
            }
            if adjacency[e.a].contains(&e.b) {
                return Err(Error::InvalidGraph(alloc::format!(
                    "more than one edge between `{}` and `{}`",
                    nodes[e.a],
                    nodes[e.b]
                )));
            }
            adjacency[e.a].push(e.b);
            adjacency[e.b].push(e.a);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        if let Some(blocks) = &blocks {
            let mut block_of = vec![usize::MAX; n];
            for (bi, block) in blocks.iter().enumerate() {
                for &v in block {
                    if v >= n || block_of[v] != usize::MAX {
                        return Err(Error::InvalidGraph(
                            "blocks must partition the nodes".into(),
                        ));
                    }
                    block_of[v] = bi;
                }
            }
            if block_of.contains(&usize::MAX) {
                return Err(Error::InvalidGraph(
                    "blocks must partition the nodes".into(),
                ));
            }
            for e in edges.iter().filter(|e| e.kind == EdgeKind::Arrow) {
                if block_of[e.b] <= block_of[e.a] {
                    return Err(Error::InvalidGraph(alloc::format!(
                        "arrow {} <- {} does not point from a later block",
                        nodes[e.a],
                        nodes[e.b]
                    )));
                }
            }
        }
        Ok(MixedGraph {
            nodes,
            edges,
            blocks,
            adjacency,
        })
    }

    /// Full-line graph from node names and name pairs.
    pub fn full_line<S: AsRef<str>>(nodes: &[S], edges: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = nodes.iter().map(|s| s.as_ref().to_string()).collect();
        let find = |s: &S| {
            names
                .iter()
                .position(|n| n == s.as_ref())
                .ok_or_else(|| Error::UnknownVariable(s.as_ref().to_string()))
        };
        let edges = edges
            .iter()
            .map(|(a, b)| {
                Ok(Edge {
                    a: find(a)?,
                    b: find(b)?,
                    kind: EdgeKind::Full,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        MixedGraph::new(names, edges, None)
    }

    /// Complete full-line graph.
    pub fn complete<S: AsRef<str>>(nodes: &[S]) -> Self {
        let n = nodes.len();
        let edges = (0..n)
            .flat_map(|i| {
                (i + 1..n).map(move |j| Edge {
                    a: i,
                    b: j,
                    kind: EdgeKind::Full,
                })
            })
            .collect();
        MixedGraph::new(
            nodes.iter().map(|s| s.as_ref().to_string()).collect(),
            edges,
            None,
        )
        .expect("complete graph on distinct names is valid")
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn blocks(&self) -> Option<&[Vec<usize>]> {
        self.blocks.as_deref()
    }

    pub fn node_index(&self, name: &str) -> Result<usize> {
        self.nodes
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    pub fn edge_between(&self, i: usize, j: usize) -> Option<&Edge> {
        self.edges
            .iter()
            .find(|e| (e.a == i && e.b == j) || (e.a == j && e.b == i))
    }

    pub fn is_full_line(&self) -> bool {
        self.edges.iter().all(|e| e.kind == EdgeKind::Full)
    }

    /// Undirected edge list as sorted index pairs `(i, j)` with `i < j`.
    pub fn skeleton(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|e| (e.a.min(e.b), e.a.max(e.b)))
            .collect();
        out.sort_unstable();
        out
    }

    fn require_full_line(&self) -> Result<()> {
        if self.is_full_line() {
            Ok(())
        } else {
            Err(Error::NotFullLine)
        }
    }
}

/// Three-node two-edge configuration `i - inner - j` (with `i`, `j`
/// non-adjacent) where both edges meet `inner` as an arrowhead or dashed end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CollisionV {
    pub i: usize,
    pub inner: usize,
    pub j: usize,
}

// Does the edge between `end` and `inner` meet `inner` with an arrowhead or a
// dashed end?
fn points_into(g: &MixedGraph, end: usize, inner: usize) -> bool {
    match g.edge_between(end, inner) {
        Some(e) => match e.kind {
            EdgeKind::Arrow => e.a == inner && e.b == end,
            EdgeKind::Dashed => true,
            EdgeKind::Full => false,
        },
        None => false,
    }
}

/// Every collision V: `i -> o <- j`, `i --- o <- j`, or `i --- o --- j`
/// (`---` dashed), in ascending `(i, inner, j)` order with `i < j`.
pub fn find_collision_vs(g: &MixedGraph) -> Vec<CollisionV> {
    let mut out = Vec::new();
    for o in 0..g.nodes.len() {
        let nb = g.neighbours(o);
        for (x, &i) in nb.iter().enumerate() {
            for &j in &nb[x + 1..] {
                if !g.adjacent(i, j) && points_into(g, i, o) && points_into(g, j, o) {
                    out.push(CollisionV { i, inner: o, j });
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// The graph is Markov equivalent to the full-line graph with the same
/// skeleton exactly when it has no collision V.
pub fn is_markov_equivalent_to_concentration(g: &MixedGraph) -> bool {
    find_collision_vs(g).is_empty()
}

/// `a` independent of `b` given `c`, over node names.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct IndependenceStatement {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub c: Vec<String>,
}

impl IndependenceStatement {
    pub fn new<S: AsRef<str>>(a: &[S], b: &[S], c: &[S]) -> Result<Self> {
        let own = |v: &[S]| {
            v.iter()
                .map(|s| s.as_ref().to_string())
                .collect::<Vec<String>>()
        };
        let st = IndependenceStatement {
            a: own(a),
            b: own(b),
            c: own(c),
        };
        if st.a.is_empty() || st.b.is_empty() {
            return Err(Error::InvalidArgument(
                "independence statement needs nonempty a and b".into(),
            ));
        }
        let all: Vec<&String> = st.a.iter().chain(&st.b).chain(&st.c).collect();
        for (i, n) in all.iter().enumerate() {
            if all[..i].contains(n) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "`{n}` appears more than once in an independence statement"
                )));
            }
        }
        Ok(st)
    }

    /// All names in `a`, `b` and `c`.
    pub fn variables(&self) -> Vec<String> {
        self.a
            .iter()
            .chain(&self.b)
            .chain(&self.c)
            .cloned()
            .collect()
    }
}

impl core::fmt::Display for IndependenceStatement {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} _||_ {}", self.a.join(","), self.b.join(","))?;
        if !self.c.is_empty() {
            write!(f, " | {}", self.c.join(","))?;
        }
        Ok(())
    }
}

fn indices(g: &MixedGraph, names: &[String]) -> Result<Vec<usize>> {
    names.iter().map(|n| g.node_index(n)).collect()
}

// Breadth-first reachability from `from`, never entering `blocked`.
fn reachable(g: &MixedGraph, from: &[usize], blocked: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; g.nodes.len()];
    let mut queue = VecDeque::new();
    for &s in from {
        if !blocked[s] && !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbours(v) {
            if !blocked[w] && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

fn separates_idx(g: &MixedGraph, a: &[usize], b: &[usize], c: &[usize]) -> bool {
    let mut blocked = vec![false; g.nodes.len()];
    for &v in c {
        blocked[v] = true;
    }
    let seen = reachable(g, a, &blocked);
    !b.iter().any(|&v| seen[v])
}

/// True when every path between `s.a` and `s.b` meets `s.c`.
pub fn separates(g: &MixedGraph, s: &IndependenceStatement) -> Result<bool> {
    g.require_full_line()?;
    let a = indices(g, &s.a)?;
    let b = indices(g, &s.b)?;
    let c = indices(g, &s.c)?;
    Ok(separates_idx(g, &a, &b, &c))
}

/// Every pairwise statement `x _||_ y | c` with `|c| <= max_size` that the
/// graph implies. Ordered by pair, then by conditioning-set size, then by the
/// node indices of the conditioning set.
pub fn implied_independencies(
    g: &MixedGraph,
    max_size: usize,
) -> Result<Vec<IndependenceStatement>> {
    g.require_full_line()?;
    let n = g.nodes.len();
    if n > ENUMERATION_CAP {
        return Err(Error::TooManyNodes {
            nodes: n,
            cap: ENUMERATION_CAP,
        });
    }
    let mut out = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let others: Vec<usize> = (0..n).filter(|&v| v != x && v != y).collect();
            let mut subsets: Vec<Vec<usize>> = (0u32..1 << others.len())
                .filter(|m| m.count_ones() as usize <= max_size)
                .map(|m| {
                    others
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| m & (1 << k) != 0)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            subsets.sort_by(|p, q| p.len().cmp(&q.len()).then_with(|| p.cmp(q)));
            for c in subsets {
                if separates_idx(g, &[x], &[y], &c) {
                    out.push(IndependenceStatement {
                        a: vec![g.nodes[x].clone()],
                        b: vec![g.nodes[y].clone()],
                        c: c.iter().map(|&v| g.nodes[v].clone()).collect(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Full-line graph over the remaining nodes after summing over `drop`: two
/// remaining nodes are joined when they were adjacent or are connected by a
/// path whose inner nodes all lie in `drop`.
pub fn marginalize_graph<S: AsRef<str>>(g: &MixedGraph, drop: &[S]) -> Result<MixedGraph> {
    g.require_full_line()?;
    let n = g.nodes.len();
    let mut dropped = vec![false; n];
    for d in drop {
        dropped[g.node_index(d.as_ref())?] = true;
    }
    if dropped.iter().all(|&d| d) && n > 0 {
        return Err(Error::InvalidArgument("cannot drop every node".into()));
    }
    let keep: Vec<usize> = (0..n).filter(|&v| !dropped[v]).collect();
    let mut new_index = vec![usize::MAX; n];
    for (k, &v) in keep.iter().enumerate() {
        new_index[v] = k;
    }
    let mut edges = Vec::new();
    for &v in &keep {
        // walk through dropped nodes only
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[v] = true;
        queue.push_back(v);
        let mut linked = vec![false; n];
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbours(u) {
                if dropped[w] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                } else if w != v {
                    linked[w] = true;
                }
            }
        }
        for &w in &keep {
            if w > v && linked[w] {
                edges.push(Edge {
                    a: new_index[v],
                    b: new_index[w],
                    kind: EdgeKind::Full,
                });
            }
        }
    }
    MixedGraph::new(
        keep.iter().map(|&v| g.nodes[v].clone()).collect(),
        edges,
        None,
    )
}

/// Maximal cliques (Bron-Kerbosch with pivoting). Each clique lists node
/// indices ascending; the list is sorted.
pub fn cliques(g: &MixedGraph) -> Result<Vec<Vec<usize>>> {
    g.require_full_line()?;
    let n = g.nodes.len();
    let mut out = Vec::new();
    let mut r = Vec::new();
    bron_kerbosch(g, &mut r, (0..n).collect(), Vec::new(), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    Ok(out)
}

fn bron_kerbosch(
    g: &MixedGraph,
    r: &mut Vec<usize>,
    p: Vec<usize>,
    mut x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let pivot = p
        .iter()
        .chain(&x)
        .copied()
        .max_by_key(|&u| p.iter().filter(|&&v| g.adjacent(u, v)).count())
        .expect("p is nonempty");
    let candidates: Vec<usize> = p
        .iter()
        .copied()
        .filter(|&v| !g.adjacent(pivot, v))
        .collect();
    let mut p = p;
    for v in candidates {
        r.push(v);
        let np = p.iter().copied().filter(|&w| g.adjacent(v, w)).collect();
        let nx = x.iter().copied().filter(|&w| g.adjacent(v, w)).collect();
        bron_kerbosch(g, r, np, nx, out);
        r.pop();
        p.retain(|&w| w != v);
        x.push(v);
    }
}

/// Cliques as node-name lists.
pub fn clique_names(g: &MixedGraph) -> Result<Vec<Vec<String>>> {
    Ok(cliques(g)?
        .into_iter()
        .map(|c| c.into_iter().map(|v| g.nodes[v].clone()).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2a() -> MixedGraph {
        MixedGraph::full_line(&["V", "C", "R"], &[("V", "C")]).unwrap()
    }

    fn fig3() -> MixedGraph {
        let mut edges = vec![("A", "C"), ("A", "L")];
        let core = ["V", "R", "C", "L"];
        for i in 0..4 {
            for j in i + 1..4 {
                edges.push((core[i], core[j]));
            }
        }
        MixedGraph::full_line(&["A", "V", "R", "C", "L"], &edges).unwrap()
    }

    fn fig4a() -> MixedGraph {
        MixedGraph::full_line(
            &["V", "C", "R", "A", "E"],
            &[("V", "C"), ("V", "R"), ("C", "R"), ("C", "A")],
        )
        .unwrap()
    }

    fn fig4b() -> MixedGraph {
        MixedGraph::full_line(
            &["V", "C", "R", "A", "E"],
            &[("V", "C"), ("A", "E"), ("E", "R")],
        )
        .unwrap()
    }

    fn st(a: &[&str], b: &[&str], c: &[&str]) -> IndependenceStatement {
        IndependenceStatement::new(a, b, c).unwrap()
    }

    fn names(g: &MixedGraph, cl: &[Vec<usize>]) -> Vec<String> {
        cl.iter()
            .map(|c| {
                c.iter()
                    .map(|&v| g.nodes()[v].as_str())
                    .collect::<Vec<_>>()
                    .concat()
            })
            .collect()
    }

    #[test]
    fn construction_rejects_bad_graphs() {
        let n = vec!["A".to_string(), "B".to_string()];
        let e = |a, b, kind| Edge { a, b, kind };
        assert!(MixedGraph::new(n.clone(), vec![e(0, 0, EdgeKind::Full)], None).is_err());
        assert!(MixedGraph::new(
            n.clone(),
            vec![e(0, 1, EdgeKind::Full), e(1, 0, EdgeKind::Dashed)],
            None
        )
        .is_err());
        // parent B must be in a later block than offspring A
        assert!(MixedGraph::new(
            n.clone(),
            vec![e(0, 1, EdgeKind::Arrow)],
            Some(vec![vec![0], vec![1]])
        )
        .is_ok());
        assert!(MixedGraph::new(
            n.clone(),
            vec![e(0, 1, EdgeKind::Arrow)],
            Some(vec![vec![1], vec![0]])
        )
        .is_err());
        assert!(MixedGraph::new(n, vec![], Some(vec![vec![0]])).is_err());
    }

    #[test]
    fn collision_patterns() {
        let n: Vec<String> = ["i", "o", "j"].iter().map(|s| s.to_string()).collect();
        let e = |a, b, kind| Edge { a, b, kind };
        let sink = MixedGraph::new(
            n.clone(),
            vec![e(1, 0, EdgeKind::Arrow), e(1, 2, EdgeKind::Arrow)],
            None,
        )
        .unwrap();
        assert_eq!(
            find_collision_vs(&sink),
            vec![CollisionV {
                i: 0,
                inner: 1,
                j: 2
            }]
        );
        assert!(!is_markov_equivalent_to_concentration(&sink));

        let dashed_arrow = MixedGraph::new(
            n.clone(),
            vec![e(0, 1, EdgeKind::Dashed), e(1, 2, EdgeKind::Arrow)],
            None,
        )
        .unwrap();
        assert_eq!(find_collision_vs(&dashed_arrow).len(), 1);
        let dashed_dashed = MixedGraph::new(
            n.clone(),
            vec![e(0, 1, EdgeKind::Dashed), e(1, 2, EdgeKind::Dashed)],
            None,
        )
        .unwrap();
        assert_eq!(find_collision_vs(&dashed_dashed).len(), 1);

        // a chain i <- o <- j and a fork are not collisions
        let chain = MixedGraph::new(
            n.clone(),
            vec![e(0, 1, EdgeKind::Arrow), e(1, 2, EdgeKind::Arrow)],
            None,
        )
        .unwrap();
        assert!(find_collision_vs(&chain).is_empty());
        // closing the triangle removes the V
        let closed = MixedGraph::new(
            n,
            vec![
                e(1, 0, EdgeKind::Arrow),
                e(1, 2, EdgeKind::Arrow),
                e(0, 2, EdgeKind::Full),
            ],
            None,
        )
        .unwrap();
        assert!(find_collision_vs(&closed).is_empty());
        assert!(is_markov_equivalent_to_concentration(&fig4a()));
    }

    #[test]
    fn separation_examples() {
        assert!(separates(&fig3(), &st(&["A"], &["V", "R"], &["C", "L"])).unwrap());
        assert!(!separates(&fig3(), &st(&["A"], &["V", "R"], &["C"])).unwrap());
        assert!(separates(&fig2a(), &st(&["V", "C"], &["R"], &[])).unwrap());
        let k = MixedGraph::complete(&["A", "B", "C", "D"]);
        assert!(!separates(&k, &st(&["A"], &["B"], &["C"])).unwrap());
    }

    #[test]
    fn separation_needs_full_lines() {
        let n: Vec<String> = ["i", "o"].iter().map(|s| s.to_string()).collect();
        let g = MixedGraph::new(
            n,
            vec![Edge {
                a: 0,
                b: 1,
                kind: EdgeKind::Dashed,
            }],
            None,
        )
        .unwrap();
        assert_eq!(
            separates(&g, &st(&["i"], &["o"], &[])),
            Err(Error::NotFullLine)
        );
    }

    #[test]
    fn implied_statements() {
        let list = implied_independencies(&fig2a(), 1).unwrap();
        assert!(list.contains(&st(&["V"], &["R"], &["C"])));
        assert!(list.contains(&st(&["V"], &["R"], &[])));
        assert!(!list.contains(&st(&["V"], &["C"], &[])));

        let list = implied_independencies(&fig3(), 3).unwrap();
        assert!(list.contains(&st(&["A"], &["V"], &["R", "C", "L"])));
        assert!(
            implied_independencies(&MixedGraph::complete(&["A", "B", "C", "D"]), 2)
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn enumeration_cap() {
        let many: Vec<String> = (0..13).map(|i| alloc::format!("x{i}")).collect();
        let g = MixedGraph::new(many, vec![], None).unwrap();
        assert!(matches!(
            implied_independencies(&g, 1),
            Err(Error::TooManyNodes { .. })
        ));
    }

    #[test]
    fn marginalizing_graphs() {
        let m = marginalize_graph(&fig4a(), &["E", "A"]).unwrap();
        assert_eq!(m.nodes(), &["V", "C", "R"]);
        assert_eq!(m.skeleton(), vec![(0, 1), (0, 2), (1, 2)]);
        let m = marginalize_graph(&fig4b(), &["E", "A"]).unwrap();
        assert_eq!(m.skeleton(), vec![(0, 1)]);
        assert_eq!(marginalize_graph::<&str>(&fig4b(), &[]).unwrap(), fig4b());
        // a path through dropped nodes induces an edge
        let path =
            MixedGraph::full_line(&["A", "B", "C", "D"], &[("A", "B"), ("B", "C"), ("C", "D")])
                .unwrap();
        let m = marginalize_graph(&path, &["B", "C"]).unwrap();
        assert_eq!(m.skeleton(), vec![(0, 1)]);
    }

    #[test]
    fn cliques_of_selected_graphs() {
        let g = fig4a();
        assert_eq!(names(&g, &cliques(&g).unwrap()), vec!["VCR", "CA", "E"]);
        let g = fig4b();
        assert_eq!(names(&g, &cliques(&g).unwrap()), vec!["VC", "RE", "AE"]);
        let empty = MixedGraph::full_line::<&str>(&["A", "B", "C"], &[]).unwrap();
        assert_eq!(cliques(&empty).unwrap(), vec![vec![0], vec![1], vec![2]]);
    }
}
