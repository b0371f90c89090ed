//! Certificates and their independent verification.

use crate::mixed_graph::{bipartition, closed_walk_exists, Incidence, MixedGraph};
use crate::perm_group::{arc_group_to_edge_group, ColourKind, SwitchGroup};
use crate::substitution::substitution_classes;
use crate::switching::{SwitchSequence, Switcher};

/// Two-vertex (or one-vertex) target of a YES answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// A single vertex; only graphs without incidences map to it.
    K1,
    /// One edge of the given colour.
    K2 { colour: usize },
    /// One arc of the given colour, from side 0 to side 1.
    T2 { colour: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YesCertificate {
    pub target: Target,
    pub sequence: SwitchSequence,
    /// Side of every vertex; `false` is side 0 (the tail side for arcs).
    /// Absent for [`Target::K1`].
    pub colouring: Option<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NoCertificate {
    /// Closed walk of odd length in the underlying graph.
    OddCycle { walk: Vec<usize> },
    /// The graph has both an edge and an arc.
    MixedEdgeArc { edge: usize, arc: usize },
    /// Two incidences of the same kind whose colours lie in different orbits.
    Orbit { first: Incidence, second: Incidence },
    /// Two arcs of one component whose directions relative to the
    /// bipartition cannot be reconciled by any switch.
    DirectionConflict { first: usize, second: usize },
    /// Even cycle that cannot be switched monochromatic: after switching its
    /// path to colour `pair.0`, the closing incidence has colour `pair.1`,
    /// which is outside the substitution class of `pair.0`. For arc graphs
    /// the colours are the translated edge colours (`i` or `n + i`).
    BadCycle { walk: Vec<usize>, pair: (usize, usize) },
    /// Refutes 1-colourability only: the graph has an incidence.
    HasIncidence { incidence: Incidence },
}

impl NoCertificate {
    pub fn reason_name(&self) -> &'static str {
        match self {
            NoCertificate::OddCycle { .. } => "odd_cycle",
            NoCertificate::MixedEdgeArc { .. } => "mixed_edge_arc",
            NoCertificate::Orbit { .. } => "orbit",
            NoCertificate::DirectionConflict { .. } => "direction_conflict",
            NoCertificate::BadCycle { .. } => "bad_cycle",
            NoCertificate::HasIncidence { .. } => "has_incidence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Yes(YesCertificate),
    No(NoCertificate),
}

impl Certificate {
    pub fn is_yes(&self) -> bool {
        matches!(self, Certificate::Yes(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

impl Verification {
    fn ok() -> Self {
        Verification { valid: true, diagnostics: Vec::new() }
    }

    fn fail(msg: impl Into<String>) -> Self {
        Verification { valid: false, diagnostics: vec![msg.into()] }
    }
}

/// Checks a 2-colouring certificate against the graph and group.
pub fn verify_certificate(g: &MixedGraph, grp: &SwitchGroup, cert: &Certificate) -> Verification {
    if (grp.m(), grp.n()) != (g.m, g.n) {
        return Verification::fail(format!(
            "group acts on ({}, {}) colours, graph has ({}, {})",
            grp.m(),
            grp.n(),
            g.m,
            g.n
        ));
    }
    if let Err(v) = g.validate() {
        return Verification::fail(format!("graph is invalid: {v}"));
    }
    match cert {
        Certificate::Yes(yes) => verify_yes(g, grp, yes),
        Certificate::No(no) => verify_no(g, grp, no),
    }
}

fn verify_yes(g: &MixedGraph, grp: &SwitchGroup, cert: &YesCertificate) -> Verification {
    for p in cert.sequence.elements() {
        if !grp.contains(p) {
            return Verification::fail(format!("element {p} is not in the group"));
        }
    }
    let adj = g.adjacency();
    let bip = if cert.sequence.has_set_steps() {
        match bipartition(g) {
            Ok(b) => Some(b),
            Err(_) => return Verification::fail("side switches used on a non-bipartite graph"),
        }
    } else {
        None
    };
    let mut sw = Switcher::new(g, &adj, bip.as_ref());
    for (v, scope, p) in cert.sequence.iter() {
        if let Err(e) = sw.switch(v, scope, p) {
            return Verification::fail(format!("cannot replay step at vertex {}: {e}", v + 1));
        }
    }
    let out = sw.finish();
    let bits = match (cert.target, &cert.colouring) {
        (Target::K1, _) => {
            return match out.incidences().next() {
                None => Verification::ok(),
                Some(inc) => Verification::fail(format!("{inc} cannot map to a single vertex")),
            }
        }
        (_, None) => return Verification::fail("missing vertex map"),
        (_, Some(bits)) => bits,
    };
    if bits.len() != g.vertex_count {
        return Verification::fail(format!(
            "vertex map has {} entries for {} vertices",
            bits.len(),
            g.vertex_count
        ));
    }
    match cert.target {
        Target::K2 { colour } => {
            if let Some(k) = (0..out.arcs.len()).next() {
                return Verification::fail(format!("{} cannot map to an edge", Incidence::Arc(k)));
            }
            for (k, e) in out.edges.iter().enumerate() {
                if e.colour != colour {
                    return Verification::fail(format!(
                        "{} has colour {} after switching, target colour is {}",
                        Incidence::Edge(k),
                        e.colour + 1,
                        colour + 1
                    ));
                }
                if bits[e.u] == bits[e.v] {
                    return Verification::fail(format!(
                        "{} has both ends on the same side",
                        Incidence::Edge(k)
                    ));
                }
            }
        }
        Target::T2 { colour } => {
            if let Some(k) = (0..out.edges.len()).next() {
                return Verification::fail(format!("{} cannot map to an arc", Incidence::Edge(k)));
            }
            for (k, a) in out.arcs.iter().enumerate() {
                if a.colour != colour {
                    return Verification::fail(format!(
                        "{} has colour {} after switching, target colour is {}",
                        Incidence::Arc(k),
                        a.colour + 1,
                        colour + 1
                    ));
                }
                if bits[a.tail] || !bits[a.head] {
                    return Verification::fail(format!(
                        "{} runs from side {} to side {} after switching",
                        Incidence::Arc(k),
                        bits[a.tail] as u8,
                        bits[a.head] as u8
                    ));
                }
            }
        }
        Target::K1 => unreachable!("handled above"),
    }
    Verification::ok()
}

fn verify_no(g: &MixedGraph, grp: &SwitchGroup, cert: &NoCertificate) -> Verification {
    let adj = g.adjacency();
    match cert {
        NoCertificate::OddCycle { walk } => {
            if walk.len() % 2 == 0 {
                return Verification::fail(format!("walk has even length {}", walk.len()));
            }
            if !closed_walk_exists(g, &adj, walk) {
                return Verification::fail("walk uses a pair of vertices that is not joined");
            }
            Verification::ok()
        }
        NoCertificate::MixedEdgeArc { edge, arc } => {
            if *edge < g.edges.len() && *arc < g.arcs.len() {
                Verification::ok()
            } else {
                Verification::fail("edge or arc reference out of range")
            }
        }
        NoCertificate::Orbit { first, second } => {
            if !g.contains(*first) || !g.contains(*second) {
                return Verification::fail("incidence reference out of range");
            }
            let kind = match (first, second) {
                (Incidence::Edge(_), Incidence::Edge(_)) => ColourKind::Edge,
                (Incidence::Arc(_), Incidence::Arc(_)) => ColourKind::Arc,
                _ => return Verification::fail("orbit witness mixes an edge and an arc"),
            };
            if grp.same_orbit(kind, g.colour(*first), g.colour(*second)) {
                return Verification::fail(format!(
                    "colours {} and {} share an orbit",
                    g.colour(*first) + 1,
                    g.colour(*second) + 1
                ));
            }
            Verification::ok()
        }
        NoCertificate::DirectionConflict { first, second } => {
            if *first >= g.arcs.len() || *second >= g.arcs.len() {
                return Verification::fail("arc reference out of range");
            }
            let bip = match bipartition(g) {
                Ok(b) => b,
                Err(_) => return Verification::fail("direction conflict needs a bipartite graph"),
            };
            let (a, b) = (g.arcs[*first], g.arcs[*second]);
            if bip.component[a.tail] != bip.component[b.tail] {
                return Verification::fail("the two arcs lie in different components");
            }
            let (arcs_only, _) = grp.restrict(ColourKind::Arc);
            let translated = match arc_group_to_edge_group(&arcs_only) {
                Ok(t) => t,
                Err(e) => return Verification::fail(e.to_string()),
            };
            let n = g.n;
            let code = |arc: crate::mixed_graph::Arc| arc.colour + if bip.side[arc.tail] { n } else { 0 };
            if translated.same_orbit(ColourKind::Edge, code(a), code(b)) {
                return Verification::fail("the two arcs can be switched to agree");
            }
            Verification::ok()
        }
        NoCertificate::BadCycle { walk, pair } => verify_bad_cycle(g, grp, walk, *pair),
        NoCertificate::HasIncidence { .. } => {
            Verification::fail("an incidence only refutes 1-colourability")
        }
    }
}

fn verify_bad_cycle(g: &MixedGraph, grp: &SwitchGroup, walk: &[usize], pair: (usize, usize)) -> Verification {
    let len = walk.len();
    if len < 4 || len % 2 == 1 {
        return Verification::fail(format!("cycle length {len} is not even and at least 4"));
    }
    let mut seen = vec![false; g.vertex_count];
    for &v in walk {
        if v >= g.vertex_count || seen[v] {
            return Verification::fail("walk repeats a vertex or leaves the graph");
        }
        seen[v] = true;
    }
    let adj = g.adjacency();
    let mut incs = Vec::with_capacity(len);
    for k in 0..len {
        match g.incidence_between(&adj, walk[k], walk[(k + 1) % len]) {
            Some(inc) => incs.push(inc),
            None => return Verification::fail("walk uses a pair of vertices that is not joined"),
        }
    }
    // Translate to edge colours and the acting edge-colour group.
    let (colours, group) = if incs.iter().all(|i| matches!(i, Incidence::Edge(_))) {
        (incs.iter().map(|&i| g.colour(i)).collect::<Vec<_>>(), grp.restrict(ColourKind::Edge).0)
    } else if incs.iter().all(|i| matches!(i, Incidence::Arc(_))) {
        let bip = match bipartition(g) {
            Ok(b) => b,
            Err(_) => return Verification::fail("arc cycle check needs a bipartite graph"),
        };
        let (arcs_only, _) = grp.restrict(ColourKind::Arc);
        let group = match arc_group_to_edge_group(&arcs_only) {
            Ok(t) => t,
            Err(e) => return Verification::fail(e.to_string()),
        };
        let colours = incs
            .iter()
            .map(|&inc| {
                let (tail, _) = g.endpoints(inc);
                g.colour(inc) + if bip.side[tail] { g.n } else { 0 }
            })
            .collect();
        (colours, group)
    } else {
        return Verification::fail("cycle mixes edges and arcs");
    };
    let (i, j) = pair;
    if i >= group.m() {
        return Verification::fail(format!("target colour {} out of range", i + 1));
    }
    // Switch w_1, ..., w_{len-1} in turn so that every path edge becomes i.
    let mut c = colours;
    for k in 1..len {
        let Some(p) = group.elements().iter().find(|p| p.edge_image(c[k - 1]) == i) else {
            return Verification::fail(format!(
                "colour {} on the cycle is not in the orbit of {}",
                c[k - 1] + 1,
                i + 1
            ));
        };
        c[k - 1] = p.edge_image(c[k - 1]);
        c[k] = p.edge_image(c[k]);
    }
    let closing = c[len - 1];
    let classes = match substitution_classes(&group) {
        Ok(t) => t,
        Err(e) => return Verification::fail(e.to_string()),
    };
    if classes.contains(i, closing) {
        return Verification::fail(format!(
            "closing colour {} is in the substitution class of {}",
            closing + 1,
            i + 1
        ));
    }
    let mut v = Verification::ok();
    if closing != j {
        v.diagnostics.push(format!(
            "reduction closes with colour {}, certificate states {}",
            closing + 1,
            j + 1
        ));
    }
    v
}
