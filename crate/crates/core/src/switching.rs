//! Switching at vertices, vertex sets, and along sequences.
//!
//! [`switch_vertex`] and [`switch_set`] are direct, allocation-per-call
//! implementations that return new graphs. [`Switcher`] replays long
//! sequences in place: a switch of a whole bipartition side touches every
//! incidence of the component exactly once, so it is recorded as a pending
//! per-component element and only materialized on the incidences that are
//! read or switched later.

use std::collections::HashMap;

use crate::error::{invalid, Error, Result};
use crate::mixed_graph::{bipartition_with, Adjacency, Bipartition, Incidence, MixedGraph};
use crate::perm_group::{compose_unchecked, inverse, is_abelian, SwitchElement, SwitchGroup};

fn check_dims(g: &MixedGraph, p: &SwitchElement) -> Result<()> {
    if p.dims() != (g.m, g.n) {
        return invalid(format!(
            "element {p} has dimensions {:?} but the graph is ({}, {})",
            p.dims(),
            g.m,
            g.n
        ));
    }
    Ok(())
}

fn check_vertex(g: &MixedGraph, v: usize) -> Result<()> {
    if v >= g.vertex_count {
        return invalid(format!("vertex {} out of range 1..={}", v + 1, g.vertex_count));
    }
    Ok(())
}

pub fn switch_vertex(g: &MixedGraph, v: usize, p: &SwitchElement) -> Result<MixedGraph> {
    check_dims(g, p)?;
    check_vertex(g, v)?;
    let mut out = g.clone();
    for e in out.edges.iter_mut().filter(|e| e.u == v || e.v == v) {
        e.colour = p.edge_image(e.colour);
    }
    for a in out.arcs.iter_mut().filter(|a| a.tail == v || a.head == v) {
        let (colour, reversed) = p.arc_image(a.colour, false);
        a.colour = colour;
        if reversed {
            std::mem::swap(&mut a.tail, &mut a.head);
        }
    }
    Ok(out)
}

/// Switch every vertex of `xs` with `p`.
pub fn switch_set(g: &MixedGraph, xs: &[usize], p: &SwitchElement) -> Result<MixedGraph> {
    check_dims(g, p)?;
    let mut member = vec![false; g.vertex_count];
    for &x in xs {
        check_vertex(g, x)?;
        member[x] = true;
    }
    let mut out = g.clone();
    for e in out.edges.iter_mut() {
        let times = member[e.u] as usize + member[e.v] as usize;
        for _ in 0..times {
            e.colour = p.edge_image(e.colour);
        }
    }
    for a in out.arcs.iter_mut() {
        let times = member[a.tail] as usize + member[a.head] as usize;
        let mut reversed = false;
        for _ in 0..times {
            (a.colour, reversed) = p.arc_image(a.colour, reversed);
        }
        if reversed {
            std::mem::swap(&mut a.tail, &mut a.head);
        }
    }
    Ok(out)
}

/// Which vertices a step switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepScope {
    /// The step's vertex alone.
    Vertex,
    /// Every vertex in the same component and on the same side of the
    /// bipartition as the step's vertex, except that vertex.
    SideOthers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Step {
    vertex: usize,
    scope: StepScope,
    element: u32,
}

/// Ordered list of switches. Elements are stored once in a palette.
#[derive(Debug, Clone, Default)]
pub struct SwitchSequence {
    steps: Vec<Step>,
    palette: Vec<SwitchElement>,
    lookup: HashMap<SwitchElement, u32>,
}

impl PartialEq for SwitchSequence {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.iter().eq(other.iter())
    }
}

impl Eq for SwitchSequence {}

impl SwitchSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_steps<'a>(steps: impl IntoIterator<Item = (usize, &'a SwitchElement)>) -> Self {
        let mut s = Self::new();
        for (v, p) in steps {
            s.push(v, p.clone());
        }
        s
    }

    pub fn push(&mut self, vertex: usize, element: SwitchElement) {
        self.push_scoped(vertex, StepScope::Vertex, element);
    }

    pub fn push_scoped(&mut self, vertex: usize, scope: StepScope, element: SwitchElement) {
        let id = match self.lookup.get(&element) {
            Some(&id) => id,
            None => {
                let id = self.palette.len() as u32;
                self.lookup.insert(element.clone(), id);
                self.palette.push(element);
                id
            }
        };
        self.steps.push(Step { vertex, scope, element: id });
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (usize, StepScope, &SwitchElement)> + '_ {
        self.steps
            .iter()
            .map(|s| (s.vertex, s.scope, &self.palette[s.element as usize]))
    }

    /// Distinct elements used by the sequence.
    pub fn elements(&self) -> &[SwitchElement] {
        &self.palette
    }

    pub fn has_set_steps(&self) -> bool {
        self.steps.iter().any(|s| s.scope == StepScope::SideOthers)
    }

    pub fn extend_from(&mut self, other: &SwitchSequence) {
        for (v, scope, p) in other.iter() {
            self.push_scoped(v, scope, p.clone());
        }
    }

    /// Map every element through `f`, keeping vertices and scopes.
    pub fn map_elements(&self, mut f: impl FnMut(&SwitchElement) -> SwitchElement) -> Self {
        let mapped: Vec<SwitchElement> = self.palette.iter().map(&mut f).collect();
        let mut out = Self::new();
        for s in &self.steps {
            out.push_scoped(s.vertex, s.scope, mapped[s.element as usize].clone());
        }
        out
    }

    /// Number of single-vertex switches this sequence stands for.
    pub fn expanded_len(&self, bip: &Bipartition) -> usize {
        let sizes = bip.side_sizes();
        self.steps
            .iter()
            .map(|s| match s.scope {
                StepScope::Vertex => 1,
                StepScope::SideOthers => {
                    sizes[bip.component[s.vertex]][bip.side[s.vertex] as usize] - 1
                }
            })
            .sum()
    }

    /// The equivalent sequence of single-vertex switches.
    pub fn expand(&self, g: &MixedGraph) -> Result<SwitchSequence> {
        if !self.has_set_steps() {
            return Ok(self.clone());
        }
        let bip = bipartition_with(g, &g.adjacency()).map_err(|_| {
            Error::InvalidInput("side switches need a bipartite graph".into())
        })?;
        let mut classes: HashMap<(usize, bool), Vec<usize>> = HashMap::new();
        for v in 0..g.vertex_count {
            classes.entry((bip.component[v], bip.side[v])).or_default().push(v);
        }
        let mut out = SwitchSequence::new();
        for (v, scope, p) in self.iter() {
            check_vertex(g, v)?;
            match scope {
                StepScope::Vertex => out.push(v, p.clone()),
                StepScope::SideOthers => {
                    for &w in &classes[&(bip.component[v], bip.side[v])] {
                        if w != v {
                            out.push(w, p.clone());
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

pub fn apply_sequence(g: &MixedGraph, s: &SwitchSequence) -> Result<MixedGraph> {
    let adj = g.adjacency();
    let bip = if s.has_set_steps() {
        Some(bipartition_with(g, &adj).map_err(|_| {
            Error::InvalidInput("side switches need a bipartite graph".into())
        })?)
    } else {
        None
    };
    let mut sw = Switcher::new(g, &adj, bip.as_ref());
    for (v, scope, p) in s.iter() {
        sw.switch(v, scope, p)?;
    }
    Ok(sw.finish())
}

pub fn invert_sequence(s: &SwitchSequence) -> SwitchSequence {
    let inverses: Vec<SwitchElement> = s.palette.iter().map(inverse).collect();
    let mut out = SwitchSequence::new();
    for step in s.steps.iter().rev() {
        out.push_scoped(step.vertex, step.scope, inverses[step.element as usize].clone());
    }
    out
}

/// Merge all switches at each vertex into one. Valid only for Abelian groups,
/// where switches at different vertices commute.
pub fn compress_abelian(s: &SwitchSequence, g: &SwitchGroup) -> Result<SwitchSequence> {
    if !is_abelian(g) {
        return Err(Error::Precondition("compression needs an Abelian group".into()));
    }
    if s.has_set_steps() {
        return Err(Error::Precondition(
            "compression needs single-vertex steps; expand side switches first".into(),
        ));
    }
    let mut first_seen: Vec<usize> = Vec::new();
    let mut product: HashMap<usize, SwitchElement> = HashMap::new();
    for (v, _, p) in s.iter() {
        if !g.contains(p) {
            return Err(Error::Precondition(format!("element {p} is not in the group")));
        }
        match product.get_mut(&v) {
            Some(acc) => *acc = compose_unchecked(acc, p),
            None => {
                first_seen.push(v);
                product.insert(v, p.clone());
            }
        }
    }
    let mut out = SwitchSequence::new();
    for v in first_seen {
        let p = product.remove(&v).expect("recorded vertex");
        if !p.is_identity() {
            out.push(v, p);
        }
    }
    Ok(out)
}

/// Interned elements with memoized products and inverses.
#[derive(Debug, Default)]
pub(crate) struct Interner {
    elements: Vec<SwitchElement>,
    ids: HashMap<SwitchElement, u32>,
    products: HashMap<(u32, u32), u32>,
    inverses: Vec<Option<u32>>,
}

impl Interner {
    pub(crate) fn intern(&mut self, p: &SwitchElement) -> u32 {
        if let Some(&id) = self.ids.get(p) {
            return id;
        }
        let id = self.elements.len() as u32;
        self.elements.push(p.clone());
        self.ids.insert(p.clone(), id);
        self.inverses.push(None);
        id
    }

    pub(crate) fn get(&self, id: u32) -> &SwitchElement {
        &self.elements[id as usize]
    }

    pub(crate) fn compose(&mut self, a: u32, b: u32) -> u32 {
        if let Some(&c) = self.products.get(&(a, b)) {
            return c;
        }
        let prod = compose_unchecked(self.get(a), self.get(b));
        let c = self.intern(&prod);
        self.products.insert((a, b), c);
        c
    }

    pub(crate) fn inverse(&mut self, a: u32) -> u32 {
        if let Some(inv) = self.inverses[a as usize] {
            return inv;
        }
        let inv = inverse(self.get(a));
        let id = self.intern(&inv);
        self.inverses[a as usize] = Some(id);
        self.inverses[id as usize] = Some(a);
        id
    }
}

/// In-place replay of switches on one graph.
///
/// Each incidence stores an encoded state (edge colour, or arc colour with a
/// reversal bit) together with the pending component element current at the
/// time it was last written. Its true state is the stored one acted on by the
/// part of the pending element accumulated since then.
pub struct Switcher<'a> {
    graph: &'a MixedGraph,
    adj: &'a Adjacency,
    bip: Option<&'a Bipartition>,
    interner: Interner,
    identity: u32,
    state: Vec<u32>,
    stamp: Vec<u32>,
    pending: Vec<u32>,
    component_of: Vec<u32>,
}

impl<'a> Switcher<'a> {
    /// `bip` is required only for [`StepScope::SideOthers`] steps.
    pub fn new(graph: &'a MixedGraph, adj: &'a Adjacency, bip: Option<&'a Bipartition>) -> Self {
        let mut interner = Interner::default();
        let identity = interner.intern(&SwitchElement::identity(graph.m, graph.n));
        let mut state = Vec::with_capacity(graph.incidence_count());
        state.extend(graph.edges.iter().map(|e| e.colour as u32));
        state.extend(graph.arcs.iter().map(|a| (a.colour as u32) << 1));
        let components = bip.map_or(1, |b| b.component_count.max(1));
        let component_of = match bip {
            Some(b) => graph
                .incidences()
                .map(|inc| b.component[graph.endpoints(inc).0] as u32)
                .collect(),
            None => vec![0; graph.incidence_count()],
        };
        Switcher {
            graph,
            adj,
            bip,
            interner,
            identity,
            stamp: vec![identity; state.len()],
            state,
            pending: vec![identity; components],
            component_of,
        }
    }

    #[inline]
    fn act(&self, element: u32, index: usize, state: u32) -> u32 {
        let p = self.interner.get(element);
        if index < self.graph.edges.len() {
            p.edge_image(state as usize) as u32
        } else {
            let (c, r) = p.arc_image((state >> 1) as usize, state & 1 == 1);
            ((c as u32) << 1) | r as u32
        }
    }

    fn materialize(&mut self, index: usize) {
        let comp = self.component_of[index] as usize;
        let now = self.pending[comp];
        let then = self.stamp[index];
        if now != then {
            let undo = self.interner.inverse(then);
            let delta = self.interner.compose(undo, now);
            self.state[index] = self.act(delta, index, self.state[index]);
            self.stamp[index] = now;
        }
    }

    fn switch_one(&mut self, v: usize, element: u32) {
        if element == self.identity {
            return;
        }
        for k in 0..self.adj.neighbours(v).len() {
            let index = self.adj.neighbours(v)[k].1;
            self.materialize(index);
            self.state[index] = self.act(element, index, self.state[index]);
        }
    }

    pub fn switch(&mut self, v: usize, scope: StepScope, p: &SwitchElement) -> Result<()> {
        check_dims(self.graph, p)?;
        check_vertex(self.graph, v)?;
        let id = self.interner.intern(p);
        match scope {
            StepScope::Vertex => self.switch_one(v, id),
            StepScope::SideOthers => {
                let bip = self.bip.ok_or_else(|| {
                    Error::InvalidInput("side switches need a bipartition".into())
                })?;
                // Every incidence of the component has exactly one end on
                // this side, so the side switch acts once on each of them;
                // the vertex itself is then switched back.
                let comp = bip.component[v];
                self.pending[comp] = self.interner.compose(self.pending[comp], id);
                let undo = self.interner.inverse(id);
                self.switch_one(v, undo);
            }
        }
        Ok(())
    }

    /// Current colour of an edge.
    pub fn edge_colour(&mut self, k: usize) -> usize {
        self.materialize(k);
        self.state[k] as usize
    }

    /// Current colour of an arc and whether it points against its original
    /// orientation.
    pub fn arc_state(&mut self, k: usize) -> (usize, bool) {
        let index = self.graph.edges.len() + k;
        self.materialize(index);
        ((self.state[index] >> 1) as usize, self.state[index] & 1 == 1)
    }

    pub fn colour_of(&mut self, inc: Incidence) -> usize {
        match inc {
            Incidence::Edge(k) => self.edge_colour(k),
            Incidence::Arc(k) => self.arc_state(k).0,
        }
    }

    pub fn finish(mut self) -> MixedGraph {
        let mut out = self.graph.clone();
        for k in 0..out.edges.len() {
            out.edges[k].colour = self.edge_colour(k);
        }
        for k in 0..out.arcs.len() {
            let (colour, reversed) = self.arc_state(k);
            let a = &mut out.arcs[k];
            a.colour = colour;
            if reversed {
                std::mem::swap(&mut a.tail, &mut a.head);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm_group::closure;

    fn single_edge(m: usize, colour: usize) -> MixedGraph {
        let mut g = MixedGraph::new(m, 0, 2);
        g.add_edge(0, 1, colour);
        g
    }

    #[test]
    fn identity_switch_is_noop() {
        let g = single_edge(2, 1);
        assert_eq!(switch_vertex(&g, 0, &SwitchElement::identity(2, 0)).unwrap(), g);
    }

    #[test]
    fn edge_recoloured_by_alpha() {
        let g = single_edge(2, 0);
        let p = SwitchElement::edge_perm(vec![1, 0]).unwrap();
        assert_eq!(switch_vertex(&g, 0, &p).unwrap().edges[0].colour, 1);
    }

    #[test]
    fn arc_reversed_by_flip() {
        let mut g = MixedGraph::new(0, 1, 2);
        g.add_arc(0, 1, 0);
        let p = SwitchElement::arc_perm(vec![0], vec![true]).unwrap();
        let h = switch_vertex(&g, 1, &p).unwrap();
        assert_eq!((h.arcs[0].tail, h.arcs[0].head, h.arcs[0].colour), (1, 0, 0));
    }

    #[test]
    fn switch_errors() {
        let g = single_edge(2, 0);
        assert!(switch_vertex(&g, 2, &SwitchElement::identity(2, 0)).is_err());
        assert!(switch_vertex(&g, 0, &SwitchElement::identity(3, 0)).is_err());
    }

    #[test]
    fn set_switch_cases() {
        let g = single_edge(2, 0);
        let p = SwitchElement::edge_perm(vec![1, 0]).unwrap();
        assert_eq!(switch_set(&g, &[], &p).unwrap(), g);
        assert_eq!(switch_set(&g, &[0, 1], &p).unwrap().edges[0].colour, 0);

        let mut a = MixedGraph::new(0, 2, 2);
        a.add_arc(0, 1, 0);
        let q = SwitchElement::arc_perm(vec![1, 0], vec![true, false]).unwrap();
        let both = switch_set(&a, &[0, 1], &q).unwrap();
        let seq = switch_vertex(&switch_vertex(&a, 0, &q).unwrap(), 1, &q).unwrap();
        assert_eq!(both, seq);
        assert_eq!((both.arcs[0].tail, both.arcs[0].colour), (1, 0));
    }

    #[test]
    fn sequence_inverse_roundtrip() {
        let mut g = MixedGraph::new(3, 0, 3);
        g.add_edge(0, 1, 0);
        g.add_edge(1, 2, 2);
        let s = SwitchSequence::from_steps([
            (0, &SwitchElement::edge_perm(vec![1, 2, 0]).unwrap()),
            (1, &SwitchElement::edge_perm(vec![0, 2, 1]).unwrap()),
        ]);
        assert!(invert_sequence(&SwitchSequence::new()).is_empty());
        let there = apply_sequence(&g, &s).unwrap();
        assert_ne!(there, g);
        assert_eq!(apply_sequence(&there, &invert_sequence(&s)).unwrap(), g);
    }

    #[test]
    fn side_switch_matches_expansion() {
        // C6 with mixed colours, switch the side of vertex 0 except 0 itself.
        let mut g = MixedGraph::new(3, 0, 6);
        for k in 0..6 {
            g.add_edge(k, (k + 1) % 6, k % 3);
        }
        let p = SwitchElement::edge_perm(vec![1, 2, 0]).unwrap();
        let q = SwitchElement::edge_perm(vec![0, 2, 1]).unwrap();
        let mut s = SwitchSequence::new();
        s.push_scoped(0, StepScope::SideOthers, p.clone());
        s.push(1, q.clone());
        s.push_scoped(3, StepScope::SideOthers, q);
        let expanded = s.expand(&g).unwrap();
        assert_eq!(expanded.len(), 2 + 1 + 2);
        let bip = crate::mixed_graph::bipartition(&g).unwrap();
        assert_eq!(s.expanded_len(&bip), 5);
        let mut direct = g.clone();
        for (v, _, p) in expanded.iter() {
            direct = switch_vertex(&direct, v, p).unwrap();
        }
        assert_eq!(apply_sequence(&g, &s).unwrap(), direct);
    }

    #[test]
    fn side_switch_rejected_on_odd_cycle() {
        let mut g = MixedGraph::new(1, 0, 3);
        g.add_edge(0, 1, 0);
        g.add_edge(1, 2, 0);
        g.add_edge(0, 2, 0);
        let mut s = SwitchSequence::new();
        s.push_scoped(0, StepScope::SideOthers, SwitchElement::identity(1, 0));
        assert!(apply_sequence(&g, &s).is_err());
    }

    #[test]
    fn compression_cases() {
        let t = SwitchElement::edge_perm(vec![1, 0]).unwrap();
        let s2 = closure(2, 0, std::slice::from_ref(&t)).unwrap();
        let twice = SwitchSequence::from_steps([(0, &t), (0, &t)]);
        assert!(compress_abelian(&twice, &s2).unwrap().is_empty());

        let once = SwitchSequence::from_steps([(0, &t), (1, &t)]);
        assert_eq!(compress_abelian(&once, &s2).unwrap(), once);

        let s3 = closure(3, 0, &[
            SwitchElement::edge_perm(vec![1, 0, 2]).unwrap(),
            SwitchElement::edge_perm(vec![1, 2, 0]).unwrap(),
        ])
        .unwrap();
        let r = SwitchElement::edge_perm(vec![1, 2, 0]).unwrap();
        assert!(matches!(
            compress_abelian(&SwitchSequence::from_steps([(0, &r)]), &s3),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn interleaved_compression_keeps_result() {
        let c3 = closure(3, 0, &[SwitchElement::edge_perm(vec![1, 2, 0]).unwrap()]).unwrap();
        let p = c3.element(1).clone();
        let q = c3.element(2).clone();
        let s = SwitchSequence::from_steps([(0, &p), (1, &q), (0, &q)]);
        let c = compress_abelian(&s, &c3).unwrap();
        // p then q at vertex 0 cancels in the cyclic group of order 3.
        assert_eq!(c, SwitchSequence::from_steps([(1, &q)]));
        let mut g = MixedGraph::new(3, 0, 3);
        g.add_edge(0, 1, 0);
        g.add_edge(1, 2, 1);
        assert_eq!(apply_sequence(&g, &s).unwrap(), apply_sequence(&g, &c).unwrap());
    }
}
