//! The `(m, n)`-mixed graph model and the traversal structures the solver is
//! built on: bipartitions with odd-cycle witnesses, BFS spanning forests, and
//! fundamental cycles.

use std::collections::{HashMap, VecDeque};
use std::fmt;

/// An undirected edge, stored with `u < v` once validated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub colour: usize,
}

/// A directed arc from `tail` to `head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub colour: usize,
}

/// Reference to an edge or arc by its position in the graph's lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Incidence {
    Edge(usize),
    Arc(usize),
}

impl fmt::Display for Incidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Incidence::Edge(k) => write!(f, "e {}", k + 1),
            Incidence::Arc(k) => write!(f, "a {}", k + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedGraph {
    pub m: usize,
    pub n: usize,
    pub vertex_count: usize,
    pub edges: Vec<Edge>,
    pub arcs: Vec<Arc>,
}

/// First broken invariant found by [`MixedGraph::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    VertexOutOfRange { incidence: Incidence, vertex: usize },
    ColourOutOfRange { incidence: Incidence, colour: usize },
    Loop { incidence: Incidence, vertex: usize },
    SharedPair { first: Incidence, second: Incidence },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexOutOfRange { incidence, vertex } => {
                write!(f, "{incidence}: vertex {} out of range", vertex + 1)
            }
            Violation::ColourOutOfRange { incidence, colour } => {
                write!(f, "{incidence}: colour {} out of range", colour + 1)
            }
            Violation::Loop { incidence, vertex } => {
                write!(f, "{incidence}: loop at vertex {}", vertex + 1)
            }
            Violation::SharedPair { first, second } => {
                write!(f, "{first} and {second} join the same pair of vertices")
            }
        }
    }
}

impl MixedGraph {
    pub fn new(m: usize, n: usize, vertex_count: usize) -> Self {
        MixedGraph { m, n, vertex_count, edges: Vec::new(), arcs: Vec::new() }
    }

    /// Adds an edge, storing its endpoints in ascending order.
    pub fn add_edge(&mut self, u: usize, v: usize, colour: usize) -> Incidence {
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        self.edges.push(Edge { u, v, colour });
        Incidence::Edge(self.edges.len() - 1)
    }

    pub fn add_arc(&mut self, tail: usize, head: usize, colour: usize) -> Incidence {
        self.arcs.push(Arc { tail, head, colour });
        Incidence::Arc(self.arcs.len() - 1)
    }

    pub fn incidence_count(&self) -> usize {
        self.edges.len() + self.arcs.len()
    }

    pub fn is_empty_of_incidences(&self) -> bool {
        self.edges.is_empty() && self.arcs.is_empty()
    }

    /// Unified index: edges first, then arcs.
    pub fn incidence_index(&self, inc: Incidence) -> usize {
        match inc {
            Incidence::Edge(k) => k,
            Incidence::Arc(k) => self.edges.len() + k,
        }
    }

    pub fn incidence_at(&self, index: usize) -> Incidence {
        if index < self.edges.len() {
            Incidence::Edge(index)
        } else {
            Incidence::Arc(index - self.edges.len())
        }
    }

    pub fn contains(&self, inc: Incidence) -> bool {
        match inc {
            Incidence::Edge(k) => k < self.edges.len(),
            Incidence::Arc(k) => k < self.arcs.len(),
        }
    }

    pub fn endpoints(&self, inc: Incidence) -> (usize, usize) {
        match inc {
            Incidence::Edge(k) => (self.edges[k].u, self.edges[k].v),
            Incidence::Arc(k) => (self.arcs[k].tail, self.arcs[k].head),
        }
    }

    pub fn colour(&self, inc: Incidence) -> usize {
        match inc {
            Incidence::Edge(k) => self.edges[k].colour,
            Incidence::Arc(k) => self.arcs[k].colour,
        }
    }

    pub fn incidences(&self) -> impl Iterator<Item = Incidence> + '_ {
        (0..self.edges.len())
            .map(Incidence::Edge)
            .chain((0..self.arcs.len()).map(Incidence::Arc))
    }

    pub fn validate(&self) -> Result<(), Violation> {
        let mut pairs: HashMap<(usize, usize), Incidence> = HashMap::new();
        for inc in self.incidences() {
            let (a, b) = self.endpoints(inc);
            for x in [a, b] {
                if x >= self.vertex_count {
                    return Err(Violation::VertexOutOfRange { incidence: inc, vertex: x });
                }
            }
            let limit = match inc {
                Incidence::Edge(_) => self.m,
                Incidence::Arc(_) => self.n,
            };
            let colour = self.colour(inc);
            if colour >= limit {
                return Err(Violation::ColourOutOfRange { incidence: inc, colour });
            }
            if a == b {
                return Err(Violation::Loop { incidence: inc, vertex: a });
            }
            if let Some(&first) = pairs.get(&(a.min(b), a.max(b))) {
                return Err(Violation::SharedPair { first, second: inc });
            }
            pairs.insert((a.min(b), a.max(b)), inc);
        }
        Ok(())
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::new(self)
    }

    /// The incidence joining `a` and `b`, in either direction.
    pub fn incidence_between(&self, adj: &Adjacency, a: usize, b: usize) -> Option<Incidence> {
        adj.neighbours(a)
            .iter()
            .find(|&&(w, _)| w == b)
            .map(|&(_, idx)| self.incidence_at(idx))
    }
}

/// Compressed adjacency lists: for every vertex, `(neighbour, unified
/// incidence index)` pairs sorted by neighbour.
#[derive(Debug, Clone)]
pub struct Adjacency {
    offsets: Vec<usize>,
    entries: Vec<(usize, usize)>,
}

impl Adjacency {
    pub fn new(g: &MixedGraph) -> Self {
        let mut degree = vec![0usize; g.vertex_count + 1];
        for inc in g.incidences() {
            let (a, b) = g.endpoints(inc);
            degree[a] += 1;
            degree[b] += 1;
        }
        let mut offsets = vec![0usize; g.vertex_count + 1];
        for v in 0..g.vertex_count {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut entries = vec![(0, 0); offsets[g.vertex_count]];
        for (idx, inc) in g.incidences().enumerate() {
            let (a, b) = g.endpoints(inc);
            entries[fill[a]] = (b, idx);
            fill[a] += 1;
            entries[fill[b]] = (a, idx);
            fill[b] += 1;
        }
        for v in 0..g.vertex_count {
            entries[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Adjacency { offsets, entries }
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> &[(usize, usize)] {
        &self.entries[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}

/// Two-sided labelling of every component. `side[v] == false` is side A; the
/// lowest-index vertex of each component is on side A.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub side: Vec<bool>,
    pub component: Vec<usize>,
    pub component_count: usize,
}

impl Bipartition {
    /// Vertex counts of side A and side B of every component.
    pub fn side_sizes(&self) -> Vec<[usize; 2]> {
        let mut sizes = vec![[0, 0]; self.component_count];
        for (v, &c) in self.component.iter().enumerate() {
            sizes[c][self.side[v] as usize] += 1;
        }
        sizes
    }
}

/// Closed walk `vertices[0] .. vertices[len-1] vertices[0]` of odd length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddCycleWitness {
    pub vertices: Vec<usize>,
}

impl OddCycleWitness {
    /// Re-checks parity and that every step of the walk is an incidence.
    pub fn is_valid_for(&self, g: &MixedGraph) -> bool {
        let adj = g.adjacency();
        self.vertices.len() % 2 == 1 && closed_walk_exists(g, &adj, &self.vertices)
    }
}

/// Whether consecutive vertices of the closed walk are all joined.
pub fn closed_walk_exists(g: &MixedGraph, adj: &Adjacency, walk: &[usize]) -> bool {
    if walk.len() < 2 || walk.iter().any(|&v| v >= g.vertex_count) {
        return false;
    }
    (0..walk.len()).all(|k| {
        let (a, b) = (walk[k], walk[(k + 1) % walk.len()]);
        g.incidence_between(adj, a, b).is_some()
    })
}

/// BFS forest over the underlying graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningForest {
    /// `(parent vertex, unified incidence index)` for every non-root vertex.
    pub parent: Vec<Option<(usize, usize)>>,
    pub roots: Vec<usize>,
    /// Parent-before-children enumeration of all vertices.
    pub order: Vec<usize>,
    pub depth: Vec<usize>,
    pub component: Vec<usize>,
}

impl SpanningForest {
    pub fn in_forest(&self, g: &MixedGraph) -> Vec<bool> {
        let mut tree = vec![false; g.incidence_count()];
        for p in self.parent.iter().flatten() {
            tree[p.1] = true;
        }
        tree
    }

    /// Vertices on the tree path from `a` to `b`, both ends included.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let (mut x, mut y) = (a, b);
        let mut left = vec![];
        let mut right = vec![];
        while self.depth[x] > self.depth[y] {
            left.push(x);
            x = self.parent[x].expect("non-root above depth 0").0;
        }
        while self.depth[y] > self.depth[x] {
            right.push(y);
            y = self.parent[y].expect("non-root above depth 0").0;
        }
        while x != y {
            left.push(x);
            right.push(y);
            x = self.parent[x].expect("distinct vertices below a common root").0;
            y = self.parent[y].expect("distinct vertices below a common root").0;
        }
        left.push(x);
        left.extend(right.into_iter().rev());
        left
    }

    /// True iff `order` lists every parent before its children.
    pub fn order_is_parent_first(&self) -> bool {
        let mut pos = vec![usize::MAX; self.parent.len()];
        for (k, &v) in self.order.iter().enumerate() {
            pos[v] = k;
        }
        self.order.len() == self.parent.len()
            && self.parent.iter().enumerate().all(|(v, p)| match p {
                Some((u, _)) => pos[*u] < pos[v],
                None => true,
            })
    }
}

struct Bfs {
    parent: Vec<Option<(usize, usize)>>,
    roots: Vec<usize>,
    order: Vec<usize>,
    depth: Vec<usize>,
    component: Vec<usize>,
}

fn bfs(g: &MixedGraph, adj: &Adjacency) -> Bfs {
    let nv = g.vertex_count;
    let mut parent = vec![None; nv];
    let mut depth = vec![usize::MAX; nv];
    let mut component = vec![usize::MAX; nv];
    let mut roots = Vec::new();
    let mut order = Vec::with_capacity(nv);
    let mut queue = VecDeque::new();
    for root in 0..nv {
        if depth[root] != usize::MAX {
            continue;
        }
        let comp = roots.len();
        roots.push(root);
        depth[root] = 0;
        component[root] = comp;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(w, idx) in adj.neighbours(v) {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    component[w] = comp;
                    parent[w] = Some((v, idx));
                    queue.push_back(w);
                }
            }
        }
    }
    Bfs { parent, roots, order, depth, component }
}

pub fn bipartition(g: &MixedGraph) -> Result<Bipartition, OddCycleWitness> {
    bipartition_with(g, &g.adjacency())
}

pub fn bipartition_with(g: &MixedGraph, adj: &Adjacency) -> Result<Bipartition, OddCycleWitness> {
    let tree = bfs(g, adj);
    let side: Vec<bool> = tree.depth.iter().map(|d| d % 2 == 1).collect();
    for inc in g.incidences() {
        let (a, b) = g.endpoints(inc);
        if side[a] == side[b] {
            let forest = SpanningForest {
                parent: tree.parent,
                roots: tree.roots,
                order: tree.order,
                depth: tree.depth,
                component: tree.component,
            };
            // Equal depth parity makes the tree path odd in vertex count.
            return Err(OddCycleWitness { vertices: forest.path(a, b) });
        }
    }
    Ok(Bipartition { side, component: tree.component, component_count: tree.roots.len() })
}

pub fn spanning_forest(g: &MixedGraph) -> SpanningForest {
    spanning_forest_with(g, &g.adjacency())
}

pub fn spanning_forest_with(g: &MixedGraph, adj: &Adjacency) -> SpanningForest {
    let t = bfs(g, adj);
    SpanningForest {
        parent: t.parent,
        roots: t.roots,
        order: t.order,
        depth: t.depth,
        component: t.component,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalCycle {
    pub cotree_incidence: Incidence,
    /// Tree path from one end of the cotree incidence to the other.
    pub path: Vec<usize>,
}

/// One cycle per incidence outside `f`, in incidence order.
pub fn fundamental_cycles(g: &MixedGraph, f: &SpanningForest) -> Vec<FundamentalCycle> {
    let tree = f.in_forest(g);
    g.incidences()
        .enumerate()
        .filter(|&(idx, _)| !tree[idx])
        .map(|(_, inc)| {
            let (a, b) = g.endpoints(inc);
            FundamentalCycle { cotree_incidence: inc, path: f.path(a, b) }
        })
        .collect()
}
