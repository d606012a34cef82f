//! Bipartite graphs, subgraph views, matchings and vertex covers.
//!
//! Nodes are addressed by a dense index `0..n`. Every node also carries a
//! unique identifier; identifiers are strictly increasing in the index, so
//! ordering by index and ordering by identifier agree.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }

    pub fn from_parity(depth: u64) -> Side {
        if depth.is_multiple_of(2) {
            Side::A
        } else {
            Side::B
        }
    }
}

/// One adjacency entry: the neighbor's index and the undirected edge id.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Port {
    pub neighbor: usize,
    pub edge: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    ids: Vec<u64>,
    side: Vec<Side>,
    adj: Vec<Vec<Port>>,
    edges: Vec<(usize, usize)>,
    max_degree: usize,
}

impl BipartiteGraph {
    /// Builds a graph on nodes `0..n` (identifier = index). Sides are assigned
    /// by BFS parity per connected component, the smallest node of each
    /// component going to side A.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let ids: Vec<u64> = (0..n as u64).collect();
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::NodeOutOfRange { node: w as u64, n });
                }
            }
        }
        let side = vec![Side::A; n];
        let mut g = Self::assemble(ids, side, edges)?;
        g.side = g.parity_coloring()?;
        Ok(g)
    }

    /// Builds a graph from an edge list over arbitrary identifiers.
    pub fn build_graph(edges: &[(u64, u64)]) -> Result<Self> {
        let mut ids: Vec<u64> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        ids.sort_unstable();
        ids.dedup();
        let index = |id: u64| ids.binary_search(&id).expect("id collected above");
        let local: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (index(u), index(v))).collect();
        let side = vec![Side::A; ids.len()];
        let mut g = Self::assemble(ids, side, &local)?;
        g.side = g.parity_coloring()?;
        Ok(g)
    }

    /// Builds a graph with an explicit side assignment, rejecting edges that
    /// join two nodes of the same side.
    pub fn with_sides(ids: Vec<u64>, side: Vec<Side>, edges: &[(usize, usize)]) -> Result<Self> {
        if ids.len() != side.len() {
            return Err(Error::InvalidParam("ids and sides differ in length".into()));
        }
        let g = Self::assemble(ids, side, edges)?;
        for &(u, v) in &g.edges {
            if g.side[u] == g.side[v] {
                return Err(Error::SameSideEdge { u: g.ids[u], v: g.ids[v] });
            }
        }
        Ok(g)
    }

    fn assemble(ids: Vec<u64>, side: Vec<Side>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = ids.len();
        if ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParam("node identifiers must be strictly increasing".into()));
        }
        let mut canon: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::NodeOutOfRange { node: u.max(v) as u64, n });
            }
            if u == v {
                return Err(Error::SelfLoop { node: ids[u] });
            }
            canon.push((u.min(v), u.max(v)));
        }
        let mut sorted = canon.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge { u: ids[w[0].0], v: ids[w[0].1] });
        }
        let mut adj = vec![Vec::new(); n];
        for (e, &(u, v)) in canon.iter().enumerate() {
            adj[u].push(Port { neighbor: v, edge: e });
            adj[v].push(Port { neighbor: u, edge: e });
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|p| p.neighbor);
        }
        let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Self { ids, side, adj, edges: canon, max_degree })
    }

    fn parity_coloring(&self) -> Result<Vec<Side>> {
        let n = self.n();
        let mut color: Vec<Option<Side>> = vec![None; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            if color[root].is_some() {
                continue;
            }
            color[root] = Some(Side::A);
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].expect("queued nodes are colored");
                for p in &self.adj[u] {
                    match color[p.neighbor] {
                        None => {
                            color[p.neighbor] = Some(cu.flip());
                            queue.push_back(p.neighbor);
                        }
                        Some(c) if c == cu => {
                            return Err(Error::OddCycle { node: self.ids[p.neighbor] });
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(color.into_iter().map(|c| c.expect("all nodes colored")).collect())
    }

    /// Graph on a subset of nodes and edges of `self`, keeping identifiers and
    /// sides. Returns the graph and the local-to-parent index map.
    pub fn subgraph(&self, nodes: &[usize], edges: &[usize]) -> Result<(BipartiteGraph, Vec<usize>)> {
        let mut keep: Vec<usize> = nodes.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            local[v] = i;
        }
        let mut local_edges = Vec::with_capacity(edges.len());
        for &e in edges {
            let (u, v) = self.edges[e];
            if local[u] == usize::MAX || local[v] == usize::MAX {
                return Err(Error::InvalidParam(format!("edge {e} leaves the node subset")));
            }
            local_edges.push((local[u], local[v]));
        }
        let ids = keep.iter().map(|&v| self.ids[v]).collect();
        let side = keep.iter().map(|&v| self.side[v]).collect();
        let g = Self::with_sides(ids, side, &local_edges)?;
        Ok((g, keep))
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn id(&self, v: usize) -> u64 {
        self.ids[v]
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn index_of(&self, id: u64) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn side(&self, v: usize) -> Side {
        self.side[v]
    }

    pub fn sides(&self) -> &[Side] {
        &self.side
    }

    pub fn neighbors(&self, v: usize) -> &[Port] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[a]
            .binary_search_by_key(&b, |p| p.neighbor)
            .ok()
            .map(|i| self.adj[a][i].edge)
    }

    /// Port index of `v` in the adjacency list of `u`.
    pub fn port_of(&self, u: usize, v: usize) -> Option<usize> {
        self.adj[u].binary_search_by_key(&v, |p| p.neighbor).ok()
    }

    /// Component label per node (labels are dense, in order of smallest member).
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for root in 0..self.n() {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = next;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                for p in &self.adj[u] {
                    if comp[p.neighbor] == usize::MAX {
                        comp[p.neighbor] = next;
                        queue.push_back(p.neighbor);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued");
            for p in &self.adj[u] {
                if dist[p.neighbor].is_none() {
                    dist[p.neighbor] = Some(du + 1);
                    queue.push_back(p.neighbor);
                }
            }
        }
        dist
    }

    /// Largest finite hop distance between two nodes (0 for edgeless graphs).
    pub fn diameter(&self) -> usize {
        (0..self.n())
            .map(|s| self.bfs_distances(s).into_iter().flatten().max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Text form: `n m` followed by one `u v` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.m());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{} {}\n", self.ids[u], self.ids[v]));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let (n, m) = parse_pair(hline, header)?;
        let n = n as usize;
        let mut edges = Vec::with_capacity(m as usize);
        for _ in 0..m {
            let (line, text) = lines.next().ok_or(Error::Parse {
                line: hline,
                msg: format!("header announces {m} edges, found {}", edges.len()),
            })?;
            let (u, v) = parse_pair(line, text)?;
            if u as usize >= n || v as usize >= n {
                return Err(Error::Parse { line, msg: format!("node id out of range 0..{n}") });
            }
            edges.push((u as usize, v as usize));
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::Parse { line, msg: "trailing content after edge list".into() });
        }
        Self::from_edges(n, &edges)
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(u64, u64)> {
    let mut it = text.split_whitespace();
    let mut field = || -> Result<u64> {
        let tok = it.next().ok_or(Error::Parse { line, msg: "expected two integers".into() })?;
        tok.parse().map_err(|_| Error::Parse { line, msg: format!("not a non-negative integer: {tok:?}") })
    };
    let a = field()?;
    let b = field()?;
    if it.next().is_some() {
        return Err(Error::Parse { line, msg: "expected exactly two integers".into() });
    }
    Ok((a, b))
}

/// Node and edge membership flags over a base graph.
#[derive(Clone, Debug)]
pub struct SubgraphView<'g> {
    graph: &'g BipartiteGraph,
    node_in: Vec<bool>,
    edge_in: Vec<bool>,
}

impl<'g> SubgraphView<'g> {
    pub fn full(graph: &'g BipartiteGraph) -> Self {
        Self { graph, node_in: vec![true; graph.n()], edge_in: vec![true; graph.m()] }
    }

    pub fn new(graph: &'g BipartiteGraph, node_in: Vec<bool>, edge_in: Vec<bool>) -> Result<Self> {
        if node_in.len() != graph.n() || edge_in.len() != graph.m() {
            return Err(Error::InvalidView("flag vectors do not match the graph".into()));
        }
        for (e, &(u, v)) in graph.edges().iter().enumerate() {
            if edge_in[e] && !(node_in[u] && node_in[v]) {
                return Err(Error::InvalidView(format!(
                    "edge {}-{} is in the view but an endpoint is not",
                    graph.id(u),
                    graph.id(v)
                )));
            }
        }
        Ok(Self { graph, node_in, edge_in })
    }

    /// Induced subgraph on the flagged nodes.
    pub fn induced(graph: &'g BipartiteGraph, node_in: Vec<bool>) -> Self {
        let edge_in = graph.edges().iter().map(|&(u, v)| node_in[u] && node_in[v]).collect();
        Self { graph, node_in, edge_in }
    }

    /// This view with the flagged nodes (and their edges) removed.
    pub fn without_nodes(&self, removed: &[bool]) -> Self {
        let node_in: Vec<bool> = self.node_in.iter().zip(removed).map(|(&a, &r)| a && !r).collect();
        let edge_in = self
            .graph
            .edges()
            .iter()
            .zip(&self.edge_in)
            .map(|(&(u, v), &e)| e && node_in[u] && node_in[v])
            .collect();
        Self { graph: self.graph, node_in, edge_in }
    }

    pub fn graph(&self) -> &'g BipartiteGraph {
        self.graph
    }

    pub fn contains_node(&self, v: usize) -> bool {
        self.node_in[v]
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.edge_in[e]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.graph.find_edge(u, v).is_some_and(|e| self.edge_in[e])
    }

    pub fn node_flags(&self) -> &[bool] {
        &self.node_in
    }

    pub fn edge_flags(&self) -> &[bool] {
        &self.edge_in
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.graph.n()).filter(|&v| self.node_in[v])
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.graph.edges().iter().zip(&self.edge_in).filter(|(_, &i)| i).map(|(&e, _)| e)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.graph.m()).filter(|&e| self.edge_in[e])
    }

    pub fn node_count(&self) -> usize {
        self.node_in.iter().filter(|&&b| b).count()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_in.iter().filter(|&&b| b).count()
    }

    /// In-view neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.graph.neighbors(v).iter().filter(|p| self.edge_in[p.edge]).map(|p| p.neighbor)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.graph.neighbors(v).iter().filter(|p| self.edge_in[p.edge]).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.graph.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }
}

/// A set of vertex-disjoint edges, stored as a partner table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    partner: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Self { partner: vec![None; n] }
    }

    pub fn from_edges(view: &SubgraphView<'_>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = view.graph().n();
        let mut partner = vec![None; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidMatching(format!("edge {u}-{v} out of range")));
            }
            if !view.has_edge(u, v) {
                return Err(Error::InvalidMatching(format!(
                    "{}-{} is not an edge of the view",
                    view.graph().id(u),
                    view.graph().id(v)
                )));
            }
            for w in [u, v] {
                if partner[w].is_some() {
                    return Err(Error::InvalidMatching(format!("node {} is covered twice", view.graph().id(w))));
                }
            }
            partner[u] = Some(v);
            partner[v] = Some(u);
        }
        Ok(Self { partner })
    }

    pub fn from_partners(view: &SubgraphView<'_>, partner: Vec<Option<usize>>) -> Result<Self> {
        let m = Self { partner };
        m.validate(view)?;
        Ok(m)
    }

    pub fn validate(&self, view: &SubgraphView<'_>) -> Result<()> {
        let g = view.graph();
        if self.partner.len() != g.n() {
            return Err(Error::InvalidMatching("partner table has the wrong length".into()));
        }
        for (u, &p) in self.partner.iter().enumerate() {
            if let Some(v) = p {
                if self.partner.get(v).copied().flatten() != Some(u) {
                    return Err(Error::InvalidMatching(format!("partner relation not symmetric at {}", g.id(u))));
                }
                if !view.has_edge(u, v) {
                    return Err(Error::InvalidMatching(format!(
                        "{}-{} is not an edge of the view",
                        g.id(u),
                        g.id(v)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn partner(&self, v: usize) -> Option<usize> {
        self.partner[v]
    }

    pub fn partners(&self) -> &[Option<usize>] {
        &self.partner
    }

    pub fn is_matched(&self, v: usize) -> bool {
        self.partner[v].is_some()
    }

    pub fn len(&self) -> usize {
        self.partner.iter().filter(|p| p.is_some()).count() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.partner.iter().all(Option::is_none)
    }

    /// Matching edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.partner
            .iter()
            .enumerate()
            .filter_map(|(u, &p)| p.filter(|&v| u < v).map(|v| (u, v)))
            .collect()
    }

    /// Flips an augmenting path given as its node sequence.
    pub fn augment(&mut self, path: &[usize]) -> Result<()> {
        if path.len() < 2 || !path.len().is_multiple_of(2) {
            return Err(Error::InvalidMatching("augmenting path must have odd length".into()));
        }
        let (first, last) = (path[0], path[path.len() - 1]);
        if self.partner[first].is_some() || self.partner[last].is_some() {
            return Err(Error::InvalidMatching("augmenting path endpoints must be free".into()));
        }
        for i in (1..path.len() - 1).step_by(2) {
            if self.partner[path[i]] != Some(path[i + 1]) {
                return Err(Error::InvalidMatching("path does not alternate".into()));
            }
        }
        for pair in path.chunks(2) {
            self.partner[pair[0]] = Some(pair[1]);
            self.partner[pair[1]] = Some(pair[0]);
        }
        Ok(())
    }

    /// Keeps only the edges lying inside `view`.
    pub fn restrict_to(&self, view: &SubgraphView<'_>) -> Matching {
        let mut partner = self.partner.clone();
        for (u, v) in self.edges() {
            if !view.has_edge(u, v) {
                partner[u] = None;
                partner[v] = None;
            }
        }
        Matching { partner }
    }
}

/// A node set claimed to touch every in-view edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexCover {
    members: Vec<bool>,
}

impl VertexCover {
    pub fn empty(n: usize) -> Self {
        Self { members: vec![false; n] }
    }

    pub fn from_members(members: Vec<bool>) -> Self {
        Self { members }
    }

    pub fn from_nodes(n: usize, nodes: impl IntoIterator<Item = usize>) -> Self {
        let mut members = vec![false; n];
        for v in nodes {
            members[v] = true;
        }
        Self { members }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members[v]
    }

    pub fn insert(&mut self, v: usize) {
        self.members[v] = true;
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v)
    }

    pub fn union_with(&mut self, other: &VertexCover) {
        for (a, &b) in self.members.iter_mut().zip(&other.members) {
            *a |= b;
        }
    }

    pub fn is_valid_for(&self, view: &SubgraphView<'_>) -> bool {
        is_vertex_cover(view, &self.members)
    }

    /// SHA-256 over the sorted member identifiers.
    pub fn digest(&self, graph: &BipartiteGraph) -> String {
        let mut hasher = Sha256::new();
        for v in self.nodes() {
            hasher.update(graph.id(v).to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }
}

pub fn is_vertex_cover(view: &SubgraphView<'_>, members: &[bool]) -> bool {
    view.edges().all(|(u, v)| members[u] || members[v])
}

/// Generator families. String form: `random:A,B,P`, `path:N`, `cycle:N`,
/// `complete:A,B`, `edges:M`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum GraphFamily {
    Random { a: usize, b: usize, p: f64 },
    Path { n: usize },
    EvenCycle { n: usize },
    Complete { a: usize, b: usize },
    DisjointEdges { m: usize },
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphFamily::Random { a, b, p } => write!(f, "random:{a},{b},{p}"),
            GraphFamily::Path { n } => write!(f, "path:{n}"),
            GraphFamily::EvenCycle { n } => write!(f, "cycle:{n}"),
            GraphFamily::Complete { a, b } => write!(f, "complete:{a},{b}"),
            GraphFamily::DisjointEdges { m } => write!(f, "edges:{m}"),
        }
    }
}

impl FromStr for GraphFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidParam(format!("graph family {s:?}: {msg}"));
        let (name, args) = s.split_once(':').ok_or_else(|| bad("expected name:args"))?;
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        let int = |i: usize| -> Result<usize> {
            parts.get(i).ok_or_else(|| bad("missing argument"))?.parse().map_err(|_| bad("bad integer"))
        };
        let arity = |k: usize| if parts.len() == k { Ok(()) } else { Err(bad("wrong number of arguments")) };
        match name {
            "random" => {
                arity(3)?;
                let p = parts[2].parse().map_err(|_| bad("bad probability"))?;
                Ok(GraphFamily::Random { a: int(0)?, b: int(1)?, p })
            }
            "path" => arity(1).and(Ok(GraphFamily::Path { n: int(0)? })),
            "cycle" => arity(1).and(Ok(GraphFamily::EvenCycle { n: int(0)? })),
            "complete" => {
                arity(2)?;
                Ok(GraphFamily::Complete { a: int(0)?, b: int(1)? })
            }
            "edges" => arity(1).and(Ok(GraphFamily::DisjointEdges { m: int(0)? })),
            _ => Err(bad("unknown family")),
        }
    }
}

/// Deterministic in `(family, seed)`; only `Random` consumes the seed.
pub fn generate(family: &GraphFamily, seed: u64) -> Result<BipartiteGraph> {
    let invalid = |msg: String| Err(Error::InvalidParam(msg));
    match *family {
        GraphFamily::Random { a, b, p } => {
            if a == 0 || b == 0 {
                return invalid("random: side sizes must be positive".into());
            }
            if !(0.0..=1.0).contains(&p) {
                return invalid(format!("random: p = {p} outside [0, 1]"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::new();
            for i in 0..a {
                for j in 0..b {
                    if rng.random::<f64>() < p {
                        edges.push((i, a + j));
                    }
                }
            }
            BipartiteGraph::from_edges(a + b, &edges)
        }
        GraphFamily::Path { n } => {
            if n == 0 {
                return invalid("path: n must be positive".into());
            }
            let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
            BipartiteGraph::from_edges(n, &edges)
        }
        GraphFamily::EvenCycle { n } => {
            if n < 4 || n % 2 != 0 {
                return invalid(format!("cycle: n = {n} must be even and at least 4"));
            }
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            BipartiteGraph::from_edges(n, &edges)
        }
        GraphFamily::Complete { a, b } => {
            if a == 0 || b == 0 {
                return invalid("complete: side sizes must be positive".into());
            }
            let edges: Vec<_> = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))).collect();
            BipartiteGraph::from_edges(a + b, &edges)
        }
        GraphFamily::DisjointEdges { m } => {
            if m == 0 {
                return invalid("edges: m must be positive".into());
            }
            let edges: Vec<_> = (0..m).map(|i| (2 * i, 2 * i + 1)).collect();
            BipartiteGraph::from_edges(2 * m, &edges)
        }
    }
}
