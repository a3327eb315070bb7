//! Digraph representation, edge-list I/O, graph-class recognition and
//! seeded instance generators.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, NodeId, Result};

/// Immutable digraph with both adjacency views.
///
/// Undirected graphs are represented as bidirected digraphs: each edge is a
/// pair of opposite arcs. The `bidirected` flag is computed structurally at
/// construction (every arc has its reverse), so it holds for undirected
/// loads and bidirected generators alike.
#[derive(Debug, Clone)]
pub struct Digraph {
    out_adj: Vec<Vec<NodeId>>,
    in_adj: Vec<Vec<NodeId>>,
    arc_count: usize,
    bidirected: bool,
}

impl Digraph {
    /// Builds a graph from arcs, silently dropping self-loops and duplicates.
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        Self::from_arcs_reporting(n, arcs).map(|(g, _)| g)
    }

    /// Like [`Digraph::from_arcs`] but reports how many arcs were dropped.
    pub fn from_arcs_reporting(
        n: usize,
        arcs: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<(Self, LoadReport)> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut list: Vec<(NodeId, NodeId)> = Vec::new();
        let mut self_loops = 0usize;
        for (u, v) in arcs {
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidParameter(format!(
                    "arc ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u == v {
                self_loops += 1;
                continue;
            }
            list.push((u, v));
        }
        let before = list.len();
        list.sort_unstable();
        list.dedup();
        let duplicates = before - list.len();

        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(u, v) in &list {
            out_adj[u as usize].push(v);
            in_adj[v as usize].push(u);
        }
        for l in in_adj.iter_mut() {
            l.sort_unstable();
        }
        let mut g = Digraph {
            out_adj,
            in_adj,
            arc_count: list.len(),
            bidirected: false,
        };
        g.bidirected = g.compute_bidirected();
        let report = LoadReport {
            nodes: n,
            arcs: g.arc_count,
            dropped_duplicates: duplicates,
            dropped_self_loops: self_loops,
        };
        Ok((g, report))
    }

    fn compute_bidirected(&self) -> bool {
        self.out_adj
            .iter()
            .enumerate()
            .all(|(u, outs)| outs.iter().all(|&v| self.has_arc(v, u as NodeId)))
    }

    pub fn node_count(&self) -> usize {
        self.out_adj.len()
    }

    /// Number of arcs. For a bidirected graph this is twice the edge count.
    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    /// Undirected edge count when bidirected, arc count otherwise.
    pub fn edge_count(&self) -> usize {
        if self.bidirected {
            self.arc_count / 2
        } else {
            self.arc_count
        }
    }

    pub fn is_bidirected(&self) -> bool {
        self.bidirected
    }

    pub fn out(&self, v: NodeId) -> &[NodeId] {
        &self.out_adj[v as usize]
    }

    pub fn incoming(&self, v: NodeId) -> &[NodeId] {
        &self.in_adj[v as usize]
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out_adj[v as usize].len()
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_adj[v as usize].len()
    }

    pub fn has_arc(&self, u: NodeId, v: NodeId) -> bool {
        self.out_adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count() as NodeId
    }
}

/// Counts of what the loader kept and dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadReport {
    pub nodes: usize,
    pub arcs: usize,
    pub dropped_duplicates: usize,
    pub dropped_self_loops: usize,
}

/// How an edge-list file is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeListMode {
    /// Each line is one arc.
    Directed,
    /// Each line is one edge; both arcs are emitted.
    Undirected,
}

/// A loaded graph plus the external-label map (`labels[node] = original id`).
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Digraph,
    pub labels: Vec<u64>,
    pub report: LoadReport,
}

impl LoadedGraph {
    pub fn label_of(&self, v: NodeId) -> u64 {
        self.labels[v as usize]
    }
}

/// Parses a SNAP-style edge list: `#`-prefixed comment lines, otherwise two
/// whitespace-separated integer labels per line. Labels are remapped to
/// dense ids in order of first appearance.
pub fn load_edge_list<R: BufRead>(reader: R, mode: EdgeListMode) -> Result<LoadedGraph> {
    let mut labels: Vec<u64> = Vec::new();
    let mut index: std::collections::HashMap<u64, NodeId> = std::collections::HashMap::new();
    let mut arcs: Vec<(NodeId, NodeId)> = Vec::new();
    let mut intern = |label: u64, labels: &mut Vec<u64>| -> NodeId {
        *index.entry(label).or_insert_with(|| {
            labels.push(label);
            (labels.len() - 1) as NodeId
        })
    };

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let parse = |tok: Option<&str>, lineno: usize| -> Result<u64> {
            tok.ok_or(Error::Parse {
                line: lineno + 1,
                msg: "expected two integer labels".into(),
            })
            .and_then(|t| {
                t.parse::<u64>().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    msg: format!("invalid node label {t:?}"),
                })
            })
        };
        let a = parse(parts.next(), lineno)?;
        let b = parse(parts.next(), lineno)?;
        if parts.next().is_some() {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: "trailing tokens after edge".into(),
            });
        }
        let u = intern(a, &mut labels);
        let v = intern(b, &mut labels);
        arcs.push((u, v));
        if mode == EdgeListMode::Undirected {
            arcs.push((v, u));
        }
    }
    if labels.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let (graph, report) = Digraph::from_arcs_reporting(labels.len(), arcs)?;
    Ok(LoadedGraph {
        graph,
        labels,
        report,
    })
}

/// Writes one `u v` line per arc, in sorted order. With `labels`, external
/// ids are emitted instead of dense indices; reloading the file yields an
/// isomorphic graph under that map.
pub fn write_edge_list<W: Write>(
    g: &Digraph,
    labels: Option<&[u64]>,
    mut w: W,
) -> std::io::Result<()> {
    for u in g.nodes() {
        for &v in g.out(u) {
            match labels {
                Some(map) => writeln!(w, "{} {}", map[u as usize], map[v as usize])?,
                None => writeln!(w, "{u} {v}")?,
            }
        }
    }
    Ok(())
}

/// Flags for every graph class the solvers have special guarantees on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GraphClassReport {
    pub is_dag: bool,
    pub is_tree_underlying: bool,
    pub is_cycle: bool,
    pub is_clique: bool,
    pub is_ore: bool,
    pub is_dirac: bool,
}

/// Computes each class flag by direct definition. Ore/Dirac/clique tests
/// apply only to bidirected graphs; `is_cycle` accepts either a bidirected
/// cycle or a one-way directed cycle.
pub fn classify(g: &Digraph) -> GraphClassReport {
    let n = g.node_count();
    let underlying = underlying_edge_count(g);
    let connected = underlying_connected(g);
    let is_tree_underlying = connected && underlying == n - 1;

    let is_cycle = if n < 3 {
        false
    } else if g.is_bidirected() {
        connected && g.nodes().all(|v| g.out_degree(v) == 2)
    } else {
        directed_cycle(g)
    };

    let mut report = GraphClassReport {
        is_dag: is_dag(g),
        is_tree_underlying,
        is_cycle,
        ..Default::default()
    };
    if g.is_bidirected() {
        report.is_clique = g.arc_count() == n * (n - 1);
        report.is_dirac = g.nodes().all(|v| 2 * g.out_degree(v) >= n);
        report.is_ore = is_ore(g);
    }
    report
}

fn is_ore(g: &Digraph) -> bool {
    let n = g.node_count();
    for u in g.nodes() {
        for v in (u + 1)..n as NodeId {
            if !g.has_arc(u, v) && g.out_degree(u) + g.out_degree(v) < n {
                return false;
            }
        }
    }
    true
}

pub(crate) fn is_dag(g: &Digraph) -> bool {
    // Kahn's algorithm; acyclic iff every node gets popped.
    let n = g.node_count();
    let mut indeg: Vec<usize> = g.nodes().map(|v| g.in_degree(v)).collect();
    let mut queue: VecDeque<NodeId> = g.nodes().filter(|&v| indeg[v as usize] == 0).collect();
    let mut seen = 0usize;
    while let Some(v) = queue.pop_front() {
        seen += 1;
        for &u in g.out(v) {
            indeg[u as usize] -= 1;
            if indeg[u as usize] == 0 {
                queue.push_back(u);
            }
        }
    }
    seen == n
}

fn directed_cycle(g: &Digraph) -> bool {
    let n = g.node_count();
    if g.nodes().any(|v| g.out_degree(v) != 1 || g.in_degree(v) != 1) {
        return false;
    }
    // Follow the unique out-arcs; one orbit must cover every node.
    let mut v = 0 as NodeId;
    for _ in 0..n {
        v = g.out(v)[0];
    }
    if v != 0 {
        return false;
    }
    let mut visited = vec![false; n];
    let mut v = 0 as NodeId;
    let mut count = 0usize;
    while !visited[v as usize] {
        visited[v as usize] = true;
        count += 1;
        v = g.out(v)[0];
    }
    count == n
}

fn underlying_edge_count(g: &Digraph) -> usize {
    let mut edges = 0usize;
    for u in g.nodes() {
        for &v in g.out(u) {
            if u < v || !g.has_arc(v, u) {
                edges += 1;
            }
        }
    }
    edges
}

pub(crate) fn underlying_connected(g: &Digraph) -> bool {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut stack = vec![0 as NodeId];
    seen[0] = true;
    let mut count = 0usize;
    while let Some(v) = stack.pop() {
        count += 1;
        for &u in g.out(v).iter().chain(g.incoming(v)) {
            if !seen[u as usize] {
                seen[u as usize] = true;
                stack.push(u);
            }
        }
    }
    count == n
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random bidirected tree: node `i` attaches to a uniform earlier node.
pub fn gen_tree(n: usize, seed: u64) -> Result<Digraph> {
    if n < 1 {
        return Err(Error::InvalidParameter("tree needs n >= 1".into()));
    }
    let mut rng = rng_for(seed);
    let mut arcs = Vec::with_capacity(2 * n.saturating_sub(1));
    for i in 1..n {
        let p = rng.gen_range(0..i) as NodeId;
        arcs.push((p, i as NodeId));
        arcs.push((i as NodeId, p));
    }
    Digraph::from_arcs(n, arcs)
}

/// Cycle on `n >= 3` nodes, one-way or bidirected.
pub fn gen_cycle(n: usize, directed: bool) -> Result<Digraph> {
    if n < 3 {
        return Err(Error::InvalidParameter("cycle needs n >= 3".into()));
    }
    let mut arcs = Vec::with_capacity(if directed { n } else { 2 * n });
    for i in 0..n {
        let j = (i + 1) % n;
        arcs.push((i as NodeId, j as NodeId));
        if !directed {
            arcs.push((j as NodeId, i as NodeId));
        }
    }
    Digraph::from_arcs(n, arcs)
}

/// Complete bidirected graph.
pub fn gen_clique(n: usize) -> Result<Digraph> {
    if n < 1 {
        return Err(Error::InvalidParameter("clique needs n >= 1".into()));
    }
    let mut arcs = Vec::with_capacity(n * n.saturating_sub(1));
    for u in 0..n {
        for v in 0..n {
            if u != v {
                arcs.push((u as NodeId, v as NodeId));
            }
        }
    }
    Digraph::from_arcs(n, arcs)
}

/// Random DAG: each arc goes from a lower to a higher index with
/// probability `arc_prob`.
pub fn gen_dag(n: usize, arc_prob: f64, seed: u64) -> Result<Digraph> {
    if n < 1 {
        return Err(Error::InvalidParameter("dag needs n >= 1".into()));
    }
    if !(0.0..=1.0).contains(&arc_prob) {
        return Err(Error::InvalidParameter(format!(
            "arc probability {arc_prob} outside [0, 1]"
        )));
    }
    let mut rng = rng_for(seed);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(arc_prob) {
                arcs.push((u as NodeId, v as NodeId));
            }
        }
    }
    Digraph::from_arcs(n, arcs)
}

/// Random Dirac graph: a bidirected G(n, 1/2) patched with extra edges
/// until every degree reaches `n/2`. Requires even `n >= 4`.
pub fn gen_dirac(n: usize, seed: u64) -> Result<Digraph> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidParameter(
            "dirac generator needs even n >= 4".into(),
        ));
    }
    let mut rng = rng_for(seed);
    let mut adj = vec![vec![false; n]; n];
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(0.5) {
                adj[u][v] = true;
                adj[v][u] = true;
            }
        }
    }
    let mut degree: Vec<usize> = (0..n).map(|u| adj[u].iter().filter(|&&b| b).count()).collect();
    loop {
        let Some(v) = (0..n).find(|&v| 2 * degree[v] < n) else {
            break;
        };
        let candidates: Vec<usize> = (0..n).filter(|&u| u != v && !adj[v][u]).collect();
        let u = candidates[rng.gen_range(0..candidates.len())];
        adj[v][u] = true;
        adj[u][v] = true;
        degree[v] += 1;
        degree[u] += 1;
    }
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if adj[u][v] {
                arcs.push((u as NodeId, v as NodeId));
            }
        }
    }
    Digraph::from_arcs(n, arcs)
}

/// Random polytree: a random tree with each edge oriented in exactly one
/// direction.
pub fn gen_polytree(n: usize, seed: u64) -> Result<Digraph> {
    if n < 1 {
        return Err(Error::InvalidParameter("polytree needs n >= 1".into()));
    }
    let mut rng = rng_for(seed);
    let mut arcs = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let p = rng.gen_range(0..i) as NodeId;
        if rng.gen_bool(0.5) {
            arcs.push((p, i as NodeId));
        } else {
            arcs.push((i as NodeId, p));
        }
    }
    Digraph::from_arcs(n, arcs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_directed_edge_list() {
        let g = load_edge_list("0 1\n1 2".as_bytes(), EdgeListMode::Directed).unwrap();
        assert_eq!(g.graph.node_count(), 3);
        assert_eq!(g.graph.arc_count(), 2);
        assert!(g.graph.has_arc(0, 1));
        assert!(g.graph.has_arc(1, 2));
        assert!(!g.graph.has_arc(1, 0));
    }

    #[test]
    fn undirected_load_emits_both_arcs() {
        let g = load_edge_list("0 1".as_bytes(), EdgeListMode::Undirected).unwrap();
        assert!(g.graph.has_arc(0, 1));
        assert!(g.graph.has_arc(1, 0));
        assert!(g.graph.is_bidirected());
    }

    #[test]
    fn dedups_and_remaps() {
        let g = load_edge_list("# c\n5 7\n5 7".as_bytes(), EdgeListMode::Directed).unwrap();
        assert_eq!(g.graph.node_count(), 2);
        assert_eq!(g.graph.arc_count(), 1);
        assert_eq!(g.labels, vec![5, 7]);
        assert_eq!(g.report.dropped_duplicates, 1);
    }

    #[test]
    fn self_loops_are_dropped_and_counted() {
        let g = load_edge_list("3 3\n3 4".as_bytes(), EdgeListMode::Directed).unwrap();
        assert_eq!(g.graph.arc_count(), 1);
        assert_eq!(g.report.dropped_self_loops, 1);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = load_edge_list("0 1\nbad".as_bytes(), EdgeListMode::Directed).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            load_edge_list("# only comments\n".as_bytes(), EdgeListMode::Directed),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn dump_then_reload_is_isomorphic() {
        let g = load_edge_list("10 20\n20 30\n30 10".as_bytes(), EdgeListMode::Undirected).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g.graph, Some(&g.labels), &mut buf).unwrap();
        let g2 = load_edge_list(buf.as_slice(), EdgeListMode::Directed).unwrap();
        assert_eq!(g2.graph.node_count(), g.graph.node_count());
        assert_eq!(g2.graph.arc_count(), g.graph.arc_count());
        assert!(g2.graph.is_bidirected());
        // Same label set, same adjacency under the label maps.
        for u in g.graph.nodes() {
            for &v in g.graph.out(u) {
                let lu = g.label_of(u);
                let lv = g.label_of(v);
                let u2 = g2.labels.iter().position(|&l| l == lu).unwrap() as NodeId;
                let v2 = g2.labels.iter().position(|&l| l == lv).unwrap() as NodeId;
                assert!(g2.graph.has_arc(u2, v2));
            }
        }
    }

    #[test]
    fn classify_clique() {
        let g = gen_clique(5).unwrap();
        let report = classify(&g);
        assert!(report.is_clique);
        assert!(report.is_ore);
        assert!(report.is_dirac);
        assert!(!report.is_dag);
    }

    #[test]
    fn classify_six_cycle_is_not_ore() {
        let g = gen_cycle(6, false).unwrap();
        let report = classify(&g);
        assert!(report.is_cycle);
        assert!(!report.is_ore);
        assert!(!report.is_dirac);
    }

    #[test]
    fn classify_directed_cycle() {
        let g = gen_cycle(5, true).unwrap();
        let report = classify(&g);
        assert!(report.is_cycle);
        assert!(!report.is_dag);
        assert!(!g.is_bidirected());
    }

    #[test]
    fn classify_dag() {
        let g = gen_dag(50, 0.1, 7).unwrap();
        assert!(classify(&g).is_dag);
    }

    #[test]
    fn classify_tree() {
        let g = gen_tree(12, 3).unwrap();
        let report = classify(&g);
        assert!(report.is_tree_underlying);
        assert!(g.is_bidirected());
    }

    #[test]
    fn dirac_generator_satisfies_dirac_for_many_seeds() {
        for seed in 0..20 {
            let g = gen_dirac(10, seed).unwrap();
            assert!(classify(&g).is_dirac, "seed {seed}");
        }
    }

    #[test]
    fn polytree_is_a_one_way_tree() {
        for seed in 0..10 {
            let g = gen_polytree(12, seed).unwrap();
            assert_eq!(g.arc_count(), 11);
            assert!(classify(&g).is_tree_underlying);
            for u in g.nodes() {
                for &v in g.out(u) {
                    assert!(!g.has_arc(v, u), "edge {u}->{v} oriented both ways");
                }
            }
        }
    }

    #[test]
    fn clique_arc_count() {
        let g = gen_clique(4).unwrap();
        assert_eq!(g.arc_count(), 12);
        for u in g.nodes() {
            for v in g.nodes() {
                assert_eq!(g.has_arc(u, v), u != v);
            }
        }
    }

    #[test]
    fn adjacency_views_are_dual() {
        let g = gen_dag(30, 0.2, 11).unwrap();
        for u in g.nodes() {
            for &v in g.out(u) {
                assert!(g.incoming(v).contains(&u));
            }
            for &w in g.incoming(u) {
                assert!(g.out(w).contains(&u));
            }
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let a = gen_tree(40, 9).unwrap();
        let b = gen_tree(40, 9).unwrap();
        for v in a.nodes() {
            assert_eq!(a.out(v), b.out(v));
        }
    }

    #[test]
    fn invalid_sizes_are_rejected() {
        assert!(gen_cycle(2, false).is_err());
        assert!(gen_dirac(7, 0).is_err());
        assert!(gen_dirac(2, 0).is_err());
        assert!(gen_tree(0, 0).is_err());
        assert!(gen_dag(5, 1.5, 0).is_err());
    }
}
