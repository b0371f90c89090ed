//! Browser bindings. Every function takes the CLI text formats and returns
//! JSON; errors come back as strings.

use serde::Serialize;
use switchcol::format::{parse_certificate, parse_graph, parse_group, write_certificate, write_graph};
use switchcol::perm_group::arc_group_to_edge_group;
use switchcol::solver::{decide_2col, verify_certificate};
use switchcol::substitution::substitution_classes;
use switchcol::switching::{switch_vertex, SwitchSequence};
use switchcol::{Certificate, ColourKind, MixedGraph, StepScope};
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct GraphView {
    m: usize,
    n: usize,
    vertices: usize,
    /// 1-based endpoints and colours.
    edges: Vec<[usize; 3]>,
    arcs: Vec<[usize; 3]>,
    text: String,
}

impl GraphView {
    fn of(g: &MixedGraph) -> Self {
        GraphView {
            m: g.m,
            n: g.n,
            vertices: g.vertex_count,
            edges: g.edges.iter().map(|e| [e.u + 1, e.v + 1, e.colour + 1]).collect(),
            arcs: g.arcs.iter().map(|a| [a.tail + 1, a.head + 1, a.colour + 1]).collect(),
            text: write_graph(g),
        }
    }
}

#[derive(Serialize)]
struct SolveView {
    yes: bool,
    header: String,
    certificate: String,
    steps: usize,
    verified: bool,
    /// Side of each vertex for YES answers.
    colouring: Option<Vec<bool>>,
    /// 1-based vertices of the obstruction walk for cycle answers.
    walk: Vec<usize>,
}

#[derive(Serialize)]
struct ClassesView {
    classes: Vec<Vec<usize>>,
    c_gamma: usize,
    elements: Vec<String>,
}

fn json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn graph_json(graph: &str) -> Result<String, String> {
    json(&GraphView::of(&parse_graph(graph).map_err(err)?))
}

pub fn solve_json(graph: &str, group: &str) -> Result<String, String> {
    let g = parse_graph(graph).map_err(err)?;
    let grp = parse_group(group).map_err(err)?;
    let cert = decide_2col(&g, &grp).map_err(err)?;
    let text = write_certificate(&cert);
    let verified = verify_certificate(&g, &grp, &cert).valid;
    let (steps, colouring, walk) = match &cert {
        Certificate::Yes(y) => (y.sequence.len(), y.colouring.clone(), Vec::new()),
        Certificate::No(no) => {
            let walk = match no {
                switchcol::NoCertificate::OddCycle { walk } | switchcol::NoCertificate::BadCycle { walk, .. } => {
                    walk.iter().map(|v| v + 1).collect()
                }
                _ => Vec::new(),
            };
            (0, None, walk)
        }
    };
    json(&SolveView {
        yes: cert.is_yes(),
        header: text.lines().next().unwrap_or_default().to_string(),
        certificate: text,
        steps,
        verified,
        colouring,
        walk,
    })
}

pub fn classes_json(group: &str) -> Result<String, String> {
    let grp = parse_group(group).map_err(err)?;
    let edge_group = if grp.m() > 0 {
        grp.restrict(ColourKind::Edge).0
    } else {
        arc_group_to_edge_group(&grp.restrict(ColourKind::Arc).0).map_err(err)?
    };
    let table = substitution_classes(&edge_group).map_err(err)?;
    json(&ClassesView {
        classes: table.classes().iter().map(|c| c.iter().map(|x| x + 1).collect()).collect(),
        c_gamma: table.c_gamma(),
        elements: grp.elements().iter().map(|p| p.to_string()).collect(),
    })
}

/// Switch 1-based `vertex` by the group element at `element` in sorted order.
pub fn switch_json(graph: &str, group: &str, vertex: usize, element: usize) -> Result<String, String> {
    let g = parse_graph(graph).map_err(err)?;
    let grp = parse_group(group).map_err(err)?;
    if vertex == 0 || vertex > g.vertex_count {
        return Err(format!("vertex {vertex} out of range"));
    }
    let p = grp.elements().get(element).ok_or_else(|| format!("no element {element}"))?;
    json(&GraphView::of(&switch_vertex(&g, vertex - 1, p).map_err(err)?))
}

/// The graph after the first `count` steps of a certificate.
pub fn replay_json(graph: &str, certificate: &str, count: usize) -> Result<String, String> {
    let g = parse_graph(graph).map_err(err)?;
    let Certificate::Yes(y) = parse_certificate(certificate, &g).map_err(err)? else {
        return Err("only YES certificates replay".into());
    };
    let mut prefix = SwitchSequence::new();
    for (v, scope, p) in y.sequence.iter().take(count) {
        prefix.push_scoped(v, scope, p.clone());
    }
    let expanded = prefix.expand(&g).map_err(err)?;
    let mut h = g;
    for (v, scope, p) in expanded.iter() {
        debug_assert_eq!(scope, StepScope::Vertex);
        h = switch_vertex(&h, v, p).map_err(err)?;
    }
    json(&GraphView::of(&h))
}

#[wasm_bindgen]
pub fn graph(graph: &str) -> Result<String, JsValue> {
    graph_json(graph).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn solve(graph: &str, group: &str) -> Result<String, JsValue> {
    solve_json(graph, group).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn classes(group: &str) -> Result<String, JsValue> {
    classes_json(group).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = switchVertex)]
pub fn switch_at(graph: &str, group: &str, vertex: usize, element: usize) -> Result<String, JsValue> {
    switch_json(graph, group, vertex, element).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn replay(graph: &str, certificate: &str, count: usize) -> Result<String, JsValue> {
    replay_json(graph, certificate, count).map_err(|e| JsValue::from_str(&e))
}
