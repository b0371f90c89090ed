//! Exhaustive ground truth for small graphs.
//!
//! Configurations of a fixed underlying graph are packed into a `u128`, one
//! fixed-width digit per incidence (edge colour, or arc colour with a
//! reversal bit). Reachability is plain BFS over single-vertex switches by
//! every group element. Nothing here uses the solver's reasoning.

use std::collections::{HashMap, VecDeque};

use crate::error::{invalid, Error, Result};
use crate::mixed_graph::{Incidence, MixedGraph};
use crate::perm_group::{SwitchElement, SwitchGroup};
use crate::solver::certificate::{Target, YesCertificate};
use crate::switching::SwitchSequence;

pub const DEFAULT_STATE_CAP: usize = 10_000_000;

/// How incidences of a graph map to digits of a packed state.
#[derive(Debug, Clone)]
struct Layout {
    bits: u32,
    /// Incidence positions touching each vertex.
    at_vertex: Vec<Vec<usize>>,
    edge_count: usize,
    /// Per element, the image of every digit code: edge colours for edge
    /// positions, `colour << 1 | reversed` for arc positions.
    edge_maps: Vec<Vec<u8>>,
    arc_maps: Vec<Vec<u8>>,
}

impl Layout {
    fn new(g: &MixedGraph, grp: &SwitchGroup) -> Result<Self> {
        let codes = g.m.max(2 * g.n).max(2);
        let bits = usize::BITS - (codes - 1).leading_zeros();
        let count = g.incidence_count();
        if bits as usize * count > 128 {
            return Err(Error::ResourceLimit { what: "packed state bits".into(), cap: 128 });
        }
        if codes > 256 {
            return invalid("too many colours for the oracle");
        }
        let mut at_vertex = vec![Vec::new(); g.vertex_count];
        for (pos, inc) in g.incidences().enumerate() {
            let (a, b) = g.endpoints(inc);
            at_vertex[a].push(pos);
            at_vertex[b].push(pos);
        }
        let edge_maps = grp
            .elements()
            .iter()
            .map(|p| (0..g.m).map(|c| p.edge_image(c) as u8).collect())
            .collect();
        let arc_maps = grp
            .elements()
            .iter()
            .map(|p| {
                (0..2 * g.n)
                    .map(|code| {
                        let (c, r) = p.arc_image(code >> 1, code & 1 == 1);
                        ((c << 1) | r as usize) as u8
                    })
                    .collect()
            })
            .collect();
        Ok(Layout { bits, at_vertex, edge_count: g.edges.len(), edge_maps, arc_maps })
    }

    fn digit(&self, state: u128, pos: usize) -> usize {
        ((state >> (pos as u32 * self.bits)) & ((1u128 << self.bits) - 1)) as usize
    }

    fn encode(&self, g: &MixedGraph) -> u128 {
        let mut state = 0u128;
        for (pos, inc) in g.incidences().enumerate() {
            let code = match inc {
                Incidence::Edge(k) => g.edges[k].colour,
                Incidence::Arc(k) => g.arcs[k].colour << 1,
            };
            state |= (code as u128) << (pos as u32 * self.bits);
        }
        state
    }

    /// Configuration of `g`'s underlying graph described by `state`.
    fn decode(&self, g: &MixedGraph, state: u128) -> MixedGraph {
        let mut out = g.clone();
        for (k, e) in out.edges.iter_mut().enumerate() {
            e.colour = self.digit(state, k);
        }
        for (k, a) in out.arcs.iter_mut().enumerate() {
            let code = self.digit(state, self.edge_count + k);
            a.colour = code >> 1;
            if code & 1 == 1 {
                std::mem::swap(&mut a.tail, &mut a.head);
            }
        }
        out
    }

    fn switch(&self, state: u128, v: usize, elem: usize) -> u128 {
        let mask = (1u128 << self.bits) - 1;
        let mut out = state;
        for &pos in &self.at_vertex[v] {
            let shift = pos as u32 * self.bits;
            let code = ((state >> shift) & mask) as usize;
            let image = if pos < self.edge_count {
                self.edge_maps[elem][code]
            } else {
                self.arc_maps[elem][code]
            };
            out = (out & !(mask << shift)) | ((image as u128) << shift);
        }
        out
    }
}

/// Every configuration reachable from a start graph, with BFS predecessors.
#[derive(Debug, Clone)]
pub struct ConfigurationSpace {
    graph: MixedGraph,
    elements: Vec<SwitchElement>,
    layout: Layout,
    start: u128,
    /// Discovery order.
    order: Vec<u128>,
    predecessor: HashMap<u128, Option<(u128, usize, usize)>>,
}

impl ConfigurationSpace {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn start(&self) -> MixedGraph {
        self.layout.decode(&self.graph, self.start)
    }

    /// Configurations in BFS discovery order.
    pub fn configurations(&self) -> impl Iterator<Item = MixedGraph> + '_ {
        self.order.iter().map(|&s| self.layout.decode(&self.graph, s))
    }

    fn encode_config(&self, h: &MixedGraph) -> Option<u128> {
        let same_shape = h.vertex_count == self.graph.vertex_count
            && h.edges.len() == self.graph.edges.len()
            && h.arcs.len() == self.graph.arcs.len()
            && h.edges.iter().zip(&self.graph.edges).all(|(a, b)| (a.u, a.v) == (b.u, b.v))
            && h.arcs.iter().zip(&self.graph.arcs).all(|(a, b)| {
                (a.tail, a.head) == (b.tail, b.head) || (a.tail, a.head) == (b.head, b.tail)
            });
        if !same_shape {
            return None;
        }
        let mut state = 0u128;
        for (pos, inc) in h.incidences().enumerate() {
            let code = match inc {
                Incidence::Edge(k) => h.edges[k].colour,
                Incidence::Arc(k) => {
                    let reversed = h.arcs[k].tail != self.graph.arcs[k].tail;
                    (h.arcs[k].colour << 1) | reversed as usize
                }
            };
            state |= (code as u128) << (pos as u32 * self.layout.bits);
        }
        Some(state)
    }

    pub fn contains(&self, h: &MixedGraph) -> bool {
        self.encode_config(h).is_some_and(|s| self.predecessor.contains_key(&s))
    }

    fn path_to_state(&self, mut state: u128) -> Option<SwitchSequence> {
        let mut steps = Vec::new();
        while let Some(prev) = self.predecessor.get(&state)? {
            steps.push((prev.1, prev.2));
            state = prev.0;
        }
        steps.reverse();
        Some(SwitchSequence::from_steps(steps.iter().map(|&(v, e)| (v, &self.elements[e]))))
    }

    /// Switch sequence from the start to `h`, if `h` is reachable.
    pub fn path_to(&self, h: &MixedGraph) -> Option<SwitchSequence> {
        self.path_to_state(self.encode_config(h)?)
    }
}

fn explore(g: &MixedGraph, grp: &SwitchGroup, cap: usize) -> Result<ConfigurationSpace> {
    if (grp.m(), grp.n()) != (g.m, g.n) {
        return invalid("group and graph dimensions differ");
    }
    if let Err(v) = g.validate() {
        return invalid(format!("invalid graph: {v}"));
    }
    let layout = Layout::new(g, grp)?;
    let start = layout.encode(g);
    let mut predecessor = HashMap::from([(start, None)]);
    let mut order = vec![start];
    let mut queue = VecDeque::from([start]);
    let movers: Vec<usize> = (0..g.vertex_count).filter(|&v| !layout.at_vertex[v].is_empty()).collect();
    while let Some(state) = queue.pop_front() {
        for &v in &movers {
            for elem in 0..grp.order() {
                let next = layout.switch(state, v, elem);
                if predecessor.contains_key(&next) {
                    continue;
                }
                if order.len() >= cap {
                    return Err(Error::ResourceLimit { what: "reachable configurations".into(), cap });
                }
                predecessor.insert(next, Some((state, v, elem)));
                order.push(next);
                queue.push_back(next);
            }
        }
    }
    Ok(ConfigurationSpace {
        graph: g.clone(),
        elements: grp.elements().to_vec(),
        layout,
        start,
        order,
        predecessor,
    })
}

pub fn reachable_configurations(g: &MixedGraph, grp: &SwitchGroup, cap: usize) -> Result<ConfigurationSpace> {
    explore(g, grp, cap)
}

/// Candidate two-vertex targets on vertices `x = 0`, `y = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Candidate {
    Empty,
    Edge(usize),
    /// Arc of the colour from `x` to `y` when `forward`, else from `y` to `x`.
    Arc(usize, bool),
}

fn candidates(m: usize, n: usize) -> Vec<Candidate> {
    let mut out = vec![Candidate::Empty];
    out.extend((0..m).map(Candidate::Edge));
    for c in 0..n {
        out.push(Candidate::Arc(c, true));
        out.push(Candidate::Arc(c, false));
    }
    out
}

/// Whether `h` (vertex `v` sent to `y` iff `to_y[v]`) is a homomorphism onto
/// the candidate.
fn maps_onto(h: &MixedGraph, to_y: &[bool], target: Candidate) -> bool {
    h.edges.iter().all(|e| matches!(target, Candidate::Edge(c) if c == e.colour && to_y[e.u] != to_y[e.v]))
        && h.arcs.iter().all(|a| {
            matches!(target, Candidate::Arc(c, forward)
                if c == a.colour && !to_y[a.tail] == forward && to_y[a.head] == forward)
        })
}

/// Proper 2-colouring of the underlying graph by plain DFS, if one exists.
fn two_colouring(g: &MixedGraph) -> Option<Vec<bool>> {
    let mut nbrs = vec![Vec::new(); g.vertex_count];
    for inc in g.incidences() {
        let (a, b) = g.endpoints(inc);
        nbrs[a].push(b);
        nbrs[b].push(a);
    }
    let mut colour: Vec<Option<bool>> = vec![None; g.vertex_count];
    for root in 0..g.vertex_count {
        if colour[root].is_some() {
            continue;
        }
        colour[root] = Some(false);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            let cv = colour[v].unwrap();
            for &w in &nbrs[v] {
                match colour[w] {
                    None => {
                        colour[w] = Some(!cv);
                        stack.push(w);
                    }
                    Some(cw) if cw == cv => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(colour.into_iter().map(|c| c.unwrap()).collect())
}

/// Oracle answer for switchable 2-colouring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    /// Certificate in the solver's format; the target is `K1` when no
    /// incidence exists.
    Yes(YesCertificate),
    No,
}

impl OracleVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, OracleVerdict::Yes(_))
    }
}

#[derive(Debug, Clone)]
pub struct OracleReport {
    pub verdict: OracleVerdict,
    /// Reachable configurations summed over components with incidences.
    pub states: usize,
}

pub fn oracle_decide_2col(g: &MixedGraph, grp: &SwitchGroup) -> Result<OracleVerdict> {
    Ok(oracle_report(g, grp, DEFAULT_STATE_CAP)?.verdict)
}

/// Decide by trying every two-vertex target against every reachable
/// configuration of every component.
pub fn oracle_report(g: &MixedGraph, grp: &SwitchGroup, cap: usize) -> Result<OracleReport> {
    if (grp.m(), grp.n()) != (g.m, g.n) {
        return invalid("group and graph dimensions differ");
    }
    if let Err(v) = g.validate() {
        return invalid(format!("invalid graph: {v}"));
    }
    if g.is_empty_of_incidences() {
        let cert = YesCertificate { target: Target::K1, sequence: SwitchSequence::new(), colouring: None };
        return Ok(OracleReport { verdict: OracleVerdict::Yes(cert), states: 0 });
    }
    let no = |states| Ok(OracleReport { verdict: OracleVerdict::No, states });
    // A loop-free two-vertex target forces a proper 2-colouring, and holds
    // a single incidence, so edges and arcs cannot both occur.
    let Some(sides) = two_colouring(g) else { return no(0) };
    if !g.edges.is_empty() && !g.arcs.is_empty() {
        return no(0);
    }

    let components = split_components(g);
    let cands = candidates(g.m, g.n);
    // For each component and candidate: (state index, mapping flipped).
    let mut hits: Vec<Vec<Option<(usize, bool)>>> = Vec::new();
    let mut spaces = Vec::new();
    let mut states = 0;
    for comp in &components {
        let space = explore(&comp.graph, grp, cap.saturating_sub(states).max(1))?;
        states += space.len();
        let local_sides: Vec<bool> = comp.vertices.iter().map(|&v| sides[v]).collect();
        let flipped: Vec<bool> = local_sides.iter().map(|&b| !b).collect();
        let mut row = vec![None; cands.len()];
        for (idx, config) in space.configurations().enumerate() {
            for (t, &cand) in cands.iter().enumerate() {
                if row[t].is_some() {
                    continue;
                }
                if maps_onto(&config, &local_sides, cand) {
                    row[t] = Some((idx, false));
                } else if maps_onto(&config, &flipped, cand) {
                    row[t] = Some((idx, true));
                }
            }
            if row.iter().all(Option::is_some) {
                break;
            }
        }
        hits.push(row);
        spaces.push(space);
    }

    let Some(t) = (0..cands.len()).find(|&t| hits.iter().all(|row| row[t].is_some())) else {
        return no(states);
    };
    let mut sequence = SwitchSequence::new();
    let mut to_y = vec![false; g.vertex_count];
    for ((comp, space), row) in components.iter().zip(&spaces).zip(&hits) {
        let (idx, flip) = row[t].expect("hit");
        let path = space.path_to_state(space.order[idx]).expect("reachable");
        for (v, _, p) in path.iter() {
            sequence.push(comp.vertices[v], p.clone());
        }
        for &v in &comp.vertices {
            to_y[v] = sides[v] ^ flip;
        }
    }
    let (target, colouring) = match cands[t] {
        Candidate::Empty => unreachable!("graph has an incidence"),
        Candidate::Edge(c) => (Target::K2 { colour: c }, to_y),
        // Side 0 of a certificate is the tail side.
        Candidate::Arc(c, forward) => {
            (Target::T2 { colour: c }, to_y.into_iter().map(|b| b ^ !forward).collect())
        }
    };
    let cert = YesCertificate { target, sequence, colouring: Some(colouring) };
    Ok(OracleReport { verdict: OracleVerdict::Yes(cert), states })
}

struct Component {
    /// Original ids of the component's vertices; local id is the position.
    vertices: Vec<usize>,
    graph: MixedGraph,
}

/// Components with at least one incidence, as standalone graphs.
fn split_components(g: &MixedGraph) -> Vec<Component> {
    let mut parent: Vec<usize> = (0..g.vertex_count).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for inc in g.incidences() {
        let (a, b) = g.endpoints(inc);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra.max(rb)] = ra.min(rb);
    }
    let mut by_root: HashMap<usize, usize> = HashMap::new();
    let mut comps: Vec<Component> = Vec::new();
    let mut local = vec![0usize; g.vertex_count];
    for (v, slot) in local.iter_mut().enumerate() {
        let r = find(&mut parent, v);
        let k = *by_root.entry(r).or_insert_with(|| {
            comps.push(Component { vertices: Vec::new(), graph: MixedGraph::new(g.m, g.n, 0) });
            comps.len() - 1
        });
        *slot = comps[k].vertices.len();
        comps[k].vertices.push(v);
        comps[k].graph.vertex_count += 1;
    }
    for e in &g.edges {
        let k = by_root[&find(&mut parent, e.u)];
        comps[k].graph.add_edge(local[e.u], local[e.v], e.colour);
    }
    for a in &g.arcs {
        let k = by_root[&find(&mut parent, a.tail)];
        comps[k].graph.add_arc(local[a.tail], local[a.head], a.colour);
    }
    comps.retain(|c| !c.graph.is_empty_of_incidences());
    comps
}

/// Classes read off the definition: `j` is in the class of `i` when the
/// cycle of length `cycle_length` coloured `i` everywhere except one edge of
/// colour `j` is switch equivalent to the monochromatic cycle of colour `i`.
pub fn oracle_classes(grp: &SwitchGroup, cycle_length: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
    if cycle_length < 4 || cycle_length % 2 == 1 {
        return invalid(format!("cycle length {cycle_length} is not an even number of at least 4"));
    }
    let m = grp.m();
    let configs = (m as u128).checked_pow(cycle_length as u32).unwrap_or(u128::MAX);
    if configs > cap as u128 {
        return Err(Error::ResourceLimit { what: "cycle colourings".into(), cap });
    }
    let mut classes = Vec::with_capacity(m);
    for i in 0..m {
        let mut mono = MixedGraph::new(m, grp.n(), cycle_length);
        for k in 0..cycle_length {
            mono.add_edge(k, (k + 1) % cycle_length, i);
        }
        let space = explore(&mono, grp, cap)?;
        let class = (0..m)
            .filter(|&j| {
                let mut nearly = mono.clone();
                nearly.edges[cycle_length - 1].colour = j;
                space.contains(&nearly)
            })
            .collect();
        classes.push(class);
    }
    Ok(classes)
}
