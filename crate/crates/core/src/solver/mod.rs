//! Certifying decision procedure for switchable 1- and 2-colouring.
//!
//! Graphs with only edges are solved directly: switch a BFS forest to the
//! target colour, then look up every cotree edge in the substitution class
//! table of the target. Graphs with only arcs are first translated to edge
//! graphs on `2n` colours (colour `i` running from side A to side B becomes
//! `i`, running from B to A becomes `n + i`) under the matching translated
//! group, solved there, and the switches are carried back.

pub mod certificate;

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::mixed_graph::{
    bipartition_with, spanning_forest_with, Adjacency, Bipartition, Incidence, MixedGraph, SpanningForest,
};
use crate::perm_group::{arc_element_to_edge_element, arc_group_to_edge_group, ColourKind, SwitchGroup};
use crate::substitution::{substitution_classes, SubstitutionClasses};
use crate::switching::{StepScope, SwitchSequence, Switcher};

pub use certificate::{verify_certificate, Certificate, NoCertificate, Target, Verification, YesCertificate};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Build the switch sequence of YES answers. Without it only the target
    /// and vertex map are produced.
    pub certificate: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { certificate: true }
    }
}

/// Result of [`solve`]: a NO certificate, or a YES target with the
/// certificate when one was requested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Yes { target: Target, certificate: Option<YesCertificate> },
    No(NoCertificate),
}

impl Outcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, Outcome::Yes { .. })
    }
}

fn check_input(g: &MixedGraph, grp: &SwitchGroup) -> Result<()> {
    if let Err(v) = g.validate() {
        return invalid(format!("invalid graph: {v}"));
    }
    if (grp.m(), grp.n()) != (g.m, g.n) {
        return invalid(format!(
            "group acts on ({}, {}) colours but the graph has ({}, {})",
            grp.m(),
            grp.n(),
            g.m,
            g.n
        ));
    }
    Ok(())
}

pub fn decide_1col(g: &MixedGraph) -> Certificate {
    match g.incidences().next() {
        None => Certificate::Yes(YesCertificate {
            target: Target::K1,
            sequence: SwitchSequence::new(),
            colouring: None,
        }),
        Some(incidence) => Certificate::No(NoCertificate::HasIncidence { incidence }),
    }
}

/// Decide switchable 2-colourability and always produce a full certificate.
pub fn decide_2col(g: &MixedGraph, grp: &SwitchGroup) -> Result<Certificate> {
    Ok(match solve(g, grp, SolveOptions::default())? {
        Outcome::Yes { certificate, .. } => {
            Certificate::Yes(certificate.expect("certificate requested"))
        }
        Outcome::No(no) => Certificate::No(no),
    })
}

pub fn solve(g: &MixedGraph, grp: &SwitchGroup, opts: SolveOptions) -> Result<Outcome> {
    check_input(g, grp)?;
    if g.is_empty_of_incidences() {
        let cert = YesCertificate { target: Target::K1, sequence: SwitchSequence::new(), colouring: None };
        return Ok(Outcome::Yes { target: Target::K1, certificate: opts.certificate.then_some(cert) });
    }
    let adj = g.adjacency();
    let bip = match bipartition_with(g, &adj) {
        Ok(b) => b,
        Err(odd) => return Ok(Outcome::No(NoCertificate::OddCycle { walk: odd.vertices })),
    };
    if !g.edges.is_empty() && !g.arcs.is_empty() {
        return Ok(Outcome::No(NoCertificate::MixedEdgeArc { edge: 0, arc: 0 }));
    }
    let forest = spanning_forest_with(g, &adj);
    if g.arcs.is_empty() {
        solve_edge_graph(g, grp, &adj, &bip, &forest, opts)
    } else {
        solve_arc_graph(g, grp, &adj, &bip, &forest, opts)
    }
}

/// 2-colouring of an edge-only graph towards `K2` of the colour of its first
/// edge.
pub fn edge_2col(g: &MixedGraph, grp: &SwitchGroup) -> Result<Certificate> {
    check_input(g, grp)?;
    if !g.arcs.is_empty() {
        return invalid("edge_2col takes a graph without arcs");
    }
    decide_2col(g, grp)
}

/// Like [`edge_2col`] with the target colour chosen by the caller.
pub fn edge_2col_with_target(g: &MixedGraph, grp: &SwitchGroup, target: usize) -> Result<Certificate> {
    check_input(g, grp)?;
    if !g.arcs.is_empty() {
        return invalid("edge_2col takes a graph without arcs");
    }
    if target >= g.m {
        return invalid(format!("target colour {} out of range", target + 1));
    }
    if g.edges.is_empty() {
        return decide_2col(g, grp);
    }
    let adj = g.adjacency();
    let bip = match bipartition_with(g, &adj) {
        Ok(b) => b,
        Err(odd) => return Ok(Certificate::No(NoCertificate::OddCycle { walk: odd.vertices })),
    };
    let forest = spanning_forest_with(g, &adj);
    let out = solve_edges_towards(g, grp, &adj, &bip, &forest, target, SolveOptions::default())?;
    Ok(match out {
        Outcome::Yes { certificate, .. } => Certificate::Yes(certificate.expect("requested")),
        Outcome::No(no) => Certificate::No(no),
    })
}

fn solve_edge_graph(
    g: &MixedGraph,
    grp: &SwitchGroup,
    adj: &Adjacency,
    bip: &Bipartition,
    forest: &SpanningForest,
    opts: SolveOptions,
) -> Result<Outcome> {
    let target = g.edges[0].colour;
    solve_edges_towards(g, grp, adj, bip, forest, target, opts)
}

fn solve_edges_towards(
    g: &MixedGraph,
    grp: &SwitchGroup,
    adj: &Adjacency,
    bip: &Bipartition,
    forest: &SpanningForest,
    target: usize,
    opts: SolveOptions,
) -> Result<Outcome> {
    let (edge_group, preimage) = grp.restrict(ColourKind::Edge);
    // Reference edge with a colour in the target orbit, for orbit witnesses.
    let reference = g
        .edges
        .iter()
        .position(|e| edge_group.same_orbit(ColourKind::Edge, e.colour, target))
        .map(Incidence::Edge);
    let problem = EdgeProblem::new(edge_only_view(g), &edge_group, adj, bip, forest)?;
    let targets = vec![target; bip.component_count];
    let refs = vec![reference; bip.component_count];
    match problem.solve(&targets, &refs, opts.certificate)? {
        EdgeOutcome::No(no) => Ok(Outcome::No(no)),
        EdgeOutcome::Yes(sequence) => {
            let t = Target::K2 { colour: target };
            let certificate = sequence.map(|s| YesCertificate {
                target: t,
                sequence: s.map_elements(|p| {
                    grp.element(preimage[edge_group.index_of(p).expect("edge group element")]).clone()
                }),
                colouring: Some(bip.side.clone()),
            });
            Ok(Outcome::Yes { target: t, certificate })
        }
    }
}

fn edge_only_view(g: &MixedGraph) -> MixedGraph {
    MixedGraph { m: g.m, n: 0, vertex_count: g.vertex_count, edges: g.edges.clone(), arcs: Vec::new() }
}

fn solve_arc_graph(
    g: &MixedGraph,
    grp: &SwitchGroup,
    adj: &Adjacency,
    bip: &Bipartition,
    forest: &SpanningForest,
    opts: SolveOptions,
) -> Result<Outcome> {
    let n = g.n;
    let (arc_group, preimage) = grp.restrict(ColourKind::Arc);
    let translated = arc_group_to_edge_group(&arc_group)?;
    let translated_to_arc: HashMap<_, usize> = arc_group
        .elements()
        .iter()
        .enumerate()
        .map(|(k, p)| (arc_element_to_edge_element(p).expect("arc-only element"), k))
        .collect();
    let reduced = arcs_to_edges(g, bip)?;

    let base = g.arcs[0].colour;
    let same_arc_orbit = |c: usize| arc_group.same_orbit(ColourKind::Arc, c, base);
    let same_edge_orbit = |a: usize, b: usize| translated.same_orbit(ColourKind::Edge, a, b);
    // Per component: translated target (base or n + base) and the first arc.
    let mut targets = vec![usize::MAX; bip.component_count];
    let mut first = vec![usize::MAX; bip.component_count];
    for (k, a) in g.arcs.iter().enumerate() {
        let comp = bip.component[a.tail];
        let code = reduced.edges[k].colour;
        if !same_arc_orbit(a.colour) {
            return Ok(Outcome::No(NoCertificate::Orbit {
                first: Incidence::Arc(0),
                second: Incidence::Arc(k),
            }));
        }
        if targets[comp] == usize::MAX {
            first[comp] = k;
            // Orienting the component the other way swaps i and n + i; one of
            // the two is in the orbit of any arc colour sharing an orbit with
            // the base colour.
            targets[comp] = if same_edge_orbit(code, base) { base } else { n + base };
            debug_assert!(same_edge_orbit(code, targets[comp]));
        } else if !same_edge_orbit(code, targets[comp]) {
            return Ok(Outcome::No(NoCertificate::DirectionConflict { first: first[comp], second: k }));
        }
    }
    let refs: Vec<Option<Incidence>> = first
        .iter()
        .map(|&k| (k != usize::MAX).then_some(Incidence::Edge(k)))
        .collect();
    let problem = EdgeProblem::new(reduced, &translated, adj, bip, forest)?;
    match problem.solve(&targets, &refs, opts.certificate)? {
        EdgeOutcome::No(no) => Ok(Outcome::No(no)),
        EdgeOutcome::Yes(sequence) => {
            let t = Target::T2 { colour: base };
            // Side 0 is the tail side: side A when the component targets
            // `base`, side B when it targets `n + base`.
            let colouring: Vec<bool> = (0..g.vertex_count)
                .map(|v| {
                    let flipped = targets[bip.component[v]] == n + base;
                    bip.side[v] ^ flipped
                })
                .collect();
            let certificate = sequence.map(|s| YesCertificate {
                target: t,
                sequence: s.map_elements(|p| {
                    let arc_idx = translated_to_arc[p];
                    grp.element(preimage[arc_idx]).clone()
                }),
                colouring: Some(colouring),
            });
            Ok(Outcome::Yes { target: t, certificate })
        }
    }
}

enum EdgeOutcome {
    Yes(Option<SwitchSequence>),
    No(NoCertificate),
}

/// An edge-only graph with a bipartition, BFS forest, and class table of an
/// edge-colour group.
struct EdgeProblem<'a> {
    graph: MixedGraph,
    group: &'a SwitchGroup,
    adj: &'a Adjacency,
    bip: &'a Bipartition,
    forest: &'a SpanningForest,
    classes: Arc<SubstitutionClasses>,
}

impl<'a> EdgeProblem<'a> {
    fn new(
        graph: MixedGraph,
        group: &'a SwitchGroup,
        adj: &'a Adjacency,
        bip: &'a Bipartition,
        forest: &'a SpanningForest,
    ) -> Result<Self> {
        debug_assert_eq!(group.n(), 0);
        let classes = substitution_classes(group)?;
        Ok(EdgeProblem { graph, group, adj, bip, forest, classes })
    }

    /// For every colour, the least element mapping it to `target`.
    fn to_target(&self, target: usize) -> Vec<Option<usize>> {
        let mut table = vec![None; self.group.m()];
        for (idx, p) in self.group.elements().iter().enumerate() {
            for (c, slot) in table.iter_mut().enumerate() {
                if slot.is_none() && p.edge_image(c) == target {
                    *slot = Some(idx);
                }
            }
        }
        table
    }

    /// Element chosen at every vertex so that, applied in forest order, each
    /// forest edge ends up in its component's target colour.
    fn tree_choices(&self, targets: &[usize]) -> Result<Vec<usize>> {
        let mut tables: HashMap<usize, Vec<Option<usize>>> = HashMap::new();
        let mut chosen = vec![0usize; self.graph.vertex_count];
        for &v in &self.forest.order {
            let Some((parent, idx)) = self.forest.parent[v] else { continue };
            let target = targets[self.forest.component[v]];
            let table = tables.entry(target).or_insert_with(|| self.to_target(target));
            let current = self.group.element(chosen[parent]).edge_image(self.graph.edges[idx].colour);
            chosen[v] = table[current].ok_or_else(|| {
                Error::Precondition(format!(
                    "no element maps colour {} to {}",
                    current + 1,
                    target + 1
                ))
            })?;
        }
        Ok(chosen)
    }

    fn solve(&self, targets: &[usize], refs: &[Option<Incidence>], emit: bool) -> Result<EdgeOutcome> {
        let g = &self.graph;
        for (k, e) in g.edges.iter().enumerate() {
            let comp = self.bip.component[e.u];
            if !self.group.same_orbit(ColourKind::Edge, e.colour, targets[comp]) {
                let first = refs[comp].ok_or_else(|| {
                    Error::Internal("no reference incidence for an orbit witness".into())
                })?;
                return Ok(EdgeOutcome::No(NoCertificate::Orbit { first, second: Incidence::Edge(k) }));
            }
        }
        let chosen = self.tree_choices(targets)?;
        let mut position = vec![0usize; g.vertex_count];
        for (pos, &v) in self.forest.order.iter().enumerate() {
            position[v] = pos;
        }
        let in_tree = self.forest.in_forest(g);
        let cotree: Vec<usize> = (0..g.edges.len()).filter(|&k| !in_tree[k]).collect();
        for &k in &cotree {
            let e = g.edges[k];
            let (first, second) = if position[e.u] < position[e.v] { (e.u, e.v) } else { (e.v, e.u) };
            let colour = self.group.element(chosen[second]).edge_image(
                self.group.element(chosen[first]).edge_image(e.colour),
            );
            let target = targets[self.bip.component[e.u]];
            if !self.classes.contains(target, colour) {
                return Ok(EdgeOutcome::No(NoCertificate::BadCycle {
                    walk: self.forest.path(e.u, e.v),
                    pair: (target, colour),
                }));
            }
        }
        if !emit {
            return Ok(EdgeOutcome::Yes(None));
        }

        let mut sequence = SwitchSequence::new();
        let mut sw = Switcher::new(g, self.adj, Some(self.bip));
        for &v in &self.forest.order {
            if chosen[v] != 0 {
                let p = self.group.element(chosen[v]);
                sw.switch(v, StepScope::Vertex, p)?;
                sequence.push(v, p.clone());
            }
        }
        for &k in &cotree {
            let e = g.edges[k];
            let target = targets[self.bip.component[e.u]];
            let current = sw.edge_colour(k);
            if current == target {
                continue;
            }
            let steps = self.classes.witness_steps(target, current).ok_or_else(|| {
                Error::Internal(format!(
                    "cotree colour {} left the class of {} while lifting",
                    current + 1,
                    target + 1
                ))
            })?;
            for (vertex, scope, p) in lifted_steps(steps, &self.classes, e.u, e.v) {
                sw.switch(vertex, scope, p)?;
                sequence.push_scoped(vertex, scope, p.clone());
            }
            if sw.edge_colour(k) != target {
                return Err(Error::Internal(format!(
                    "lifting did not recolour edge {}",
                    k + 1
                )));
            }
        }
        Ok(EdgeOutcome::Yes(Some(sequence)))
    }
}

/// Carry a 4-cycle witness onto a graph: `v0 -> u`, `v3 -> v`, `v2 ->` the
/// rest of `u`'s side, `v1 ->` the rest of `v`'s side.
fn lifted_steps<'c>(
    steps: &'c [(usize, usize)],
    classes: &'c SubstitutionClasses,
    u: usize,
    v: usize,
) -> impl Iterator<Item = (usize, StepScope, &'c crate::perm_group::SwitchElement)> + 'c {
    steps.iter().map(move |&(cycle_vertex, idx)| {
        let (vertex, scope) = match cycle_vertex {
            0 => (u, StepScope::Vertex),
            1 => (v, StepScope::SideOthers),
            2 => (u, StepScope::SideOthers),
            3 => (v, StepScope::Vertex),
            _ => unreachable!("4-cycle vertices are 0..4"),
        };
        (vertex, scope, classes.element(idx))
    })
}

/// Switch sequence making every forest edge colour `i`, one step per
/// non-root vertex in forest order with identity steps dropped. Elements come
/// from `grp` itself.
pub fn make_tree_monochromatic(
    g: &MixedGraph,
    f: &SpanningForest,
    i: usize,
    grp: &SwitchGroup,
) -> Result<SwitchSequence> {
    if !g.arcs.is_empty() {
        return invalid("tree switching takes a graph without arcs");
    }
    if (grp.m(), grp.n()) != (g.m, g.n) {
        return invalid("group and graph dimensions differ");
    }
    let (edge_group, preimage) = grp.restrict(ColourKind::Edge);
    let adj = g.adjacency();
    let bip = bipartition_with(g, &adj).unwrap_or_else(|_| Bipartition {
        side: vec![false; g.vertex_count],
        component: f.component.clone(),
        component_count: f.roots.len(),
    });
    let problem = EdgeProblem::new(edge_only_view(g), &edge_group, &adj, &bip, f)?;
    let chosen = problem.tree_choices(&vec![i; f.roots.len()])?;
    let mut s = SwitchSequence::new();
    for &v in &f.order {
        if chosen[v] != 0 {
            s.push(v, grp.element(preimage[chosen[v]]).clone());
        }
    }
    Ok(s)
}

/// Sequence carrying the witness for `(target, j)` onto `g` around the
/// cotree edge `uv`. `u` and `v` must lie on opposite sides of `bip`.
/// Elements come from the group the class table was built for.
pub fn lift_c4_witness(
    bip: &Bipartition,
    edge: (usize, usize),
    j: usize,
    target: usize,
    classes: &SubstitutionClasses,
) -> Result<SwitchSequence> {
    let (u, v) = edge;
    if bip.component[u] != bip.component[v] || bip.side[u] == bip.side[v] {
        return Err(Error::Precondition(format!(
            "vertices {} and {} are not on opposite sides of one component",
            u + 1,
            v + 1
        )));
    }
    let steps = classes.witness_steps(target, j).ok_or_else(|| {
        Error::Internal(format!("no witness for colour {} in the class of {}", j + 1, target + 1))
    })?;
    let mut s = SwitchSequence::new();
    for (vertex, scope, p) in lifted_steps(steps, classes, u, v) {
        s.push_scoped(vertex, scope, p.clone());
    }
    Ok(s)
}

/// Translate an arc-only graph to an edge graph on `2n` colours using the
/// sides of `bip`.
pub fn arcs_to_edges(g: &MixedGraph, bip: &Bipartition) -> Result<MixedGraph> {
    if !g.edges.is_empty() {
        return invalid("arc translation takes a graph without edges");
    }
    let mut out = MixedGraph::new(2 * g.n, 0, g.vertex_count);
    for a in &g.arcs {
        if bip.side[a.tail] == bip.side[a.head] {
            return invalid(format!("arc {}->{} does not cross the bipartition", a.tail + 1, a.head + 1));
        }
        let colour = if bip.side[a.tail] { g.n + a.colour } else { a.colour };
        out.add_edge(a.tail, a.head, colour);
    }
    Ok(out)
}

/// Every edge of a classical graph becomes an edge of colour 1.
pub fn np_gadget(vertex_count: usize, edges: &[(usize, usize)], m: usize, n: usize) -> Result<MixedGraph> {
    if m == 0 {
        return invalid("the gadget needs at least one edge colour");
    }
    let mut g = MixedGraph::new(m, n, vertex_count);
    for &(u, v) in edges {
        g.add_edge(u, v, 0);
    }
    if let Err(v) = g.validate() {
        return invalid(format!("invalid classical graph: {v}"));
    }
    Ok(g)
}

/// Whether the YES sequence respects the bound
/// `|V| - 1 + c |V| (|E| - |V| + 1)` summed over components, counting side
/// switches by the number of vertices they stand for.
pub fn check_length_bound(g: &MixedGraph, cert: &YesCertificate, c_gamma: usize) -> bool {
    let adj = g.adjacency();
    let Ok(bip) = bipartition_with(g, &adj) else { return false };
    let mut vertices = vec![0u128; bip.component_count];
    let mut incidences = vec![0u128; bip.component_count];
    for v in 0..g.vertex_count {
        vertices[bip.component[v]] += 1;
    }
    for inc in g.incidences() {
        incidences[bip.component[g.endpoints(inc).0]] += 1;
    }
    let c = c_gamma as u128;
    let bound: u128 = (0..bip.component_count)
        .map(|k| {
            let (nv, ne) = (vertices[k], incidences[k]);
            (nv - 1) + c * nv * (ne + 1 - nv)
        })
        .sum();
    (cert.sequence.expanded_len(&bip) as u128) <= bound
}

/// Class-table constant of the edge-colour group the solver uses for `g`.
pub fn c_gamma_for(g: &MixedGraph, grp: &SwitchGroup) -> Result<usize> {
    if g.arcs.is_empty() {
        Ok(substitution_classes(&grp.restrict(ColourKind::Edge).0)?.c_gamma())
    } else {
        let translated = arc_group_to_edge_group(&grp.restrict(ColourKind::Arc).0)?;
        Ok(substitution_classes(&translated)?.c_gamma())
    }
}
