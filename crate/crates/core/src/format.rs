//! Line-oriented text formats. All indices in files are 1-based.
//!
//! Graph:
//! ```text
//! mng <m> <n>
//! v <vertex_count>
//! e <u> <v> <colour>
//! a <tail> <head> <colour>
//! ```
//! Group: `grp <m> <n>` then one `g <alpha> | <beta> | <flips>` line per
//! generator, with `.` for an empty section and flips written as `+`
//! (keep) or `-` (reverse).
//!
//! Certificate: a `cert yes k1|k2 <i>|t2 <i>` or `cert no <reason>` header,
//! then switch lines `s <v> <element>` (one vertex) and `o <v> <element>`
//! (every other vertex on that vertex's side of its component), a
//! `map <bits>` line for YES, and `walk`, `pair`, `inc` lines for NO.
//!
//! Edge list: optional `v <count>` then `<u> <v>` per line.
//!
//! Lines starting with `#` and blank lines are ignored; trailing `#`
//! comments are stripped.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mixed_graph::{Incidence, MixedGraph, Violation};
use crate::perm_group::{closure, SwitchElement, SwitchGroup};
use crate::solver::certificate::{Certificate, NoCertificate, Target, YesCertificate};
use crate::switching::{StepScope, SwitchSequence};

fn perr<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, message: message.into() })
}

/// Non-empty lines with comments removed, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((k + 1, body))
    })
}

fn number(line: usize, token: Option<&str>, what: &str) -> Result<usize> {
    let Some(token) = token else { return perr(line, format!("missing {what}")) };
    token
        .parse::<usize>()
        .or_else(|_| perr(line, format!("{what} '{token}' is not a non-negative integer")))
}

/// 1-based index in `1..=limit`, returned 0-based.
fn index(line: usize, token: Option<&str>, what: &str, limit: usize) -> Result<usize> {
    let k = number(line, token, what)?;
    if k == 0 || k > limit {
        return perr(line, format!("{what} {k} outside 1..={limit}"));
    }
    Ok(k - 1)
}

fn no_more<'a>(line: usize, mut tokens: impl Iterator<Item = &'a str>) -> Result<()> {
    match tokens.next() {
        Some(t) => perr(line, format!("unexpected token '{t}'")),
        None => Ok(()),
    }
}

pub fn parse_graph(text: &str) -> Result<MixedGraph> {
    let mut lines = content_lines(text);
    let Some((l, header)) = lines.next() else { return perr(0, "empty graph file") };
    let mut t = header.split_whitespace();
    if t.next() != Some("mng") {
        return perr(l, "expected 'mng <m> <n>' header");
    }
    let m = number(l, t.next(), "m")?;
    let n = number(l, t.next(), "n")?;
    no_more(l, t)?;
    let Some((l, vline)) = lines.next() else { return perr(l, "missing 'v <count>' line") };
    let mut t = vline.split_whitespace();
    if t.next() != Some("v") {
        return perr(l, "expected 'v <count>' line");
    }
    let count = number(l, t.next(), "vertex count")?;
    no_more(l, t)?;

    let mut g = MixedGraph::new(m, n, count);
    let mut edge_lines = Vec::new();
    let mut arc_lines = Vec::new();
    for (l, body) in lines {
        let mut t = body.split_whitespace();
        let kind = t.next().unwrap_or_default();
        let (a, b) = (index(l, t.next(), "vertex", count)?, index(l, t.next(), "vertex", count)?);
        match kind {
            "e" => {
                let c = index(l, t.next(), "edge colour", m)?;
                g.add_edge(a, b, c);
                edge_lines.push(l);
            }
            "a" => {
                let c = index(l, t.next(), "arc colour", n)?;
                g.add_arc(a, b, c);
                arc_lines.push(l);
            }
            other => return perr(l, format!("unknown line type '{other}'")),
        }
        no_more(l, t)?;
    }
    if let Err(v) = g.validate() {
        let line_of = |inc: Incidence| match inc {
            Incidence::Edge(k) => edge_lines[k],
            Incidence::Arc(k) => arc_lines[k],
        };
        let at = match &v {
            Violation::VertexOutOfRange { incidence, .. }
            | Violation::ColourOutOfRange { incidence, .. }
            | Violation::Loop { incidence, .. } => line_of(*incidence),
            Violation::SharedPair { second, .. } => line_of(*second),
        };
        return perr(at, v.to_string());
    }
    Ok(g)
}

pub fn write_graph(g: &MixedGraph) -> String {
    let mut out = format!("mng {} {}\nv {}\n", g.m, g.n, g.vertex_count);
    for e in &g.edges {
        let _ = writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, e.colour + 1);
    }
    for a in &g.arcs {
        let _ = writeln!(out, "a {} {} {}", a.tail + 1, a.head + 1, a.colour + 1);
    }
    out
}

/// Parse `<alpha> | <beta> | <flips>` for an `(m, n)` group.
pub fn parse_element(line: usize, text: &str, m: usize, n: usize) -> Result<SwitchElement> {
    let sections: Vec<&str> = text.split('|').map(str::trim).collect();
    if sections.len() != 3 {
        return perr(line, "element needs three sections separated by '|'");
    }
    let perm = |section: &str, size: usize, what: &str| -> Result<Vec<usize>> {
        if section == "." {
            return if size == 0 { Ok(Vec::new()) } else { perr(line, format!("{what} section is empty")) };
        }
        let images = section
            .split_whitespace()
            .map(|tok| index(line, Some(tok), what, size))
            .collect::<Result<Vec<_>>>()?;
        if images.len() != size {
            return perr(line, format!("{what} section has {} entries, expected {size}", images.len()));
        }
        Ok(images)
    };
    let alpha = perm(sections[0], m, "alpha")?;
    let beta = perm(sections[1], n, "beta")?;
    let flips = if sections[2] == "." && n == 0 {
        Vec::new()
    } else {
        let chars: Vec<char> = sections[2].chars().filter(|c| !c.is_whitespace()).collect();
        if chars.len() != n {
            return perr(line, format!("flip string has {} characters, expected {n}", chars.len()));
        }
        chars
            .into_iter()
            .map(|c| match c {
                '+' => Ok(false),
                '-' => Ok(true),
                other => perr(line, format!("flip character '{other}' is not '+' or '-'")),
            })
            .collect::<Result<Vec<_>>>()?
    };
    SwitchElement::new(alpha, beta, flips).or_else(|e| perr(line, e.to_string()))
}

/// Dimensions and generators of a group file.
pub fn parse_generators(text: &str) -> Result<(usize, usize, Vec<SwitchElement>)> {
    let mut lines = content_lines(text);
    let Some((l, header)) = lines.next() else { return perr(0, "empty group file") };
    let mut t = header.split_whitespace();
    if t.next() != Some("grp") {
        return perr(l, "expected 'grp <m> <n>' header");
    }
    let m = number(l, t.next(), "m")?;
    let n = number(l, t.next(), "n")?;
    no_more(l, t)?;
    let mut gens = Vec::new();
    for (l, body) in lines {
        let Some(rest) = body.strip_prefix("g ").or_else(|| (body == "g").then_some("")) else {
            return perr(l, "expected 'g <element>' line");
        };
        gens.push(parse_element(l, rest, m, n)?);
    }
    Ok((m, n, gens))
}

pub fn parse_group(text: &str) -> Result<SwitchGroup> {
    let (m, n, gens) = parse_generators(text)?;
    closure(m, n, &gens)
}

pub fn write_group(m: usize, n: usize, generators: &[SwitchElement]) -> String {
    let mut out = format!("grp {m} {n}\n");
    for p in generators {
        let _ = writeln!(out, "g {p}");
    }
    out
}

pub fn write_sequence(s: &SwitchSequence) -> String {
    let mut out = String::new();
    for (v, scope, p) in s.iter() {
        let tag = match scope {
            StepScope::Vertex => 's',
            StepScope::SideOthers => 'o',
        };
        let _ = writeln!(out, "{tag} {} {p}", v + 1);
    }
    out
}

fn parse_step(l: usize, body: &str, g: &MixedGraph) -> Result<(usize, StepScope, SwitchElement)> {
    let scope = if body.starts_with('s') { StepScope::Vertex } else { StepScope::SideOthers };
    let rest = body[1..].trim_start();
    let (vtok, elem) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
    let v = index(l, Some(vtok), "vertex", g.vertex_count)?;
    Ok((v, scope, parse_element(l, elem, g.m, g.n)?))
}

/// Parse a sequence file of `s` and `o` lines.
pub fn parse_sequence(text: &str, g: &MixedGraph) -> Result<SwitchSequence> {
    let mut s = SwitchSequence::new();
    for (l, body) in content_lines(text) {
        if !(body.starts_with("s ") || body.starts_with("o ")) {
            return perr(l, "expected 's <v> <element>' or 'o <v> <element>'");
        }
        let (v, scope, p) = parse_step(l, body, g)?;
        s.push_scoped(v, scope, p);
    }
    Ok(s)
}

fn bits(colouring: &[bool]) -> String {
    colouring.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn walk_line(walk: &[usize]) -> String {
    let mut out = String::from("walk");
    for v in walk {
        let _ = write!(out, " {}", v + 1);
    }
    out.push('\n');
    out
}

pub fn write_certificate(cert: &Certificate) -> String {
    match cert {
        Certificate::Yes(y) => {
            let mut out = match y.target {
                Target::K1 => "cert yes k1\n".to_string(),
                Target::K2 { colour } => format!("cert yes k2 {}\n", colour + 1),
                Target::T2 { colour } => format!("cert yes t2 {}\n", colour + 1),
            };
            out.push_str(&write_sequence(&y.sequence));
            if let Some(c) = &y.colouring {
                let _ = writeln!(out, "map {}", bits(c));
            }
            out
        }
        Certificate::No(no) => {
            let mut out = format!("cert no {}\n", no.reason_name());
            match no {
                NoCertificate::OddCycle { walk } => out.push_str(&walk_line(walk)),
                NoCertificate::MixedEdgeArc { edge, arc } => {
                    let _ = writeln!(out, "inc {}\ninc {}", Incidence::Edge(*edge), Incidence::Arc(*arc));
                }
                NoCertificate::Orbit { first, second } => {
                    let _ = writeln!(out, "inc {first}\ninc {second}");
                }
                NoCertificate::DirectionConflict { first, second } => {
                    let _ = writeln!(out, "inc {}\ninc {}", Incidence::Arc(*first), Incidence::Arc(*second));
                }
                NoCertificate::BadCycle { walk, pair } => {
                    out.push_str(&walk_line(walk));
                    let _ = writeln!(out, "pair {} {}", pair.0 + 1, pair.1 + 1);
                }
                NoCertificate::HasIncidence { incidence } => {
                    let _ = writeln!(out, "inc {incidence}");
                }
            }
            out
        }
    }
}

/// Parse a certificate for `g`. Element and index ranges are checked against
/// `g`; the certificate's meaning is checked by `verify_certificate`.
pub fn parse_certificate(text: &str, g: &MixedGraph) -> Result<Certificate> {
    let mut lines = content_lines(text);
    let Some((hl, header)) = lines.next() else { return perr(0, "empty certificate") };
    let mut t = header.split_whitespace();
    if t.next() != Some("cert") {
        return perr(hl, "expected 'cert yes ...' or 'cert no ...' header");
    }
    match t.next() {
        Some("yes") => {
            let target = match t.next() {
                Some("k1") => Target::K1,
                Some("k2") => Target::K2 { colour: index(hl, t.next(), "edge colour", g.m)? },
                Some("t2") => Target::T2 { colour: index(hl, t.next(), "arc colour", g.n)? },
                _ => return perr(hl, "target must be k1, k2 <i> or t2 <i>"),
            };
            no_more(hl, t)?;
            let mut sequence = SwitchSequence::new();
            let mut colouring = None;
            for (l, body) in lines {
                if body.starts_with("s ") || body.starts_with("o ") {
                    if colouring.is_some() {
                        return perr(l, "switch line after the map line");
                    }
                    let (v, scope, p) = parse_step(l, body, g)?;
                    sequence.push_scoped(v, scope, p);
                } else if let Some(rest) = body.strip_prefix("map") {
                    if colouring.is_some() {
                        return perr(l, "second map line");
                    }
                    let rest = rest.trim();
                    if rest.chars().count() != g.vertex_count {
                        return perr(l, format!("map has {} bits, expected {}", rest.chars().count(), g.vertex_count));
                    }
                    colouring = Some(
                        rest.chars()
                            .map(|c| match c {
                                '0' => Ok(false),
                                '1' => Ok(true),
                                other => perr(l, format!("map bit '{other}' is not 0 or 1")),
                            })
                            .collect::<Result<Vec<_>>>()?,
                    );
                } else {
                    return perr(l, "expected 's', 'o' or 'map' line");
                }
            }
            Ok(Certificate::Yes(YesCertificate { target, sequence, colouring }))
        }
        Some("no") => {
            let reason = t.next().unwrap_or_default().to_string();
            no_more(hl, t)?;
            let mut walk: Option<Vec<usize>> = None;
            let mut pair = None;
            let mut incs = Vec::new();
            for (l, body) in lines {
                let mut t = body.split_whitespace();
                match t.next() {
                    Some("walk") => {
                        walk = Some(
                            t.map(|tok| index(l, Some(tok), "vertex", g.vertex_count))
                                .collect::<Result<Vec<_>>>()?,
                        );
                    }
                    Some("pair") => {
                        let limit = if g.arcs.is_empty() { g.m } else { 2 * g.n };
                        let i = index(l, t.next(), "colour", limit)?;
                        let j = index(l, t.next(), "colour", limit)?;
                        no_more(l, t)?;
                        pair = Some((i, j));
                    }
                    Some("inc") => {
                        let inc = match t.next() {
                            Some("e") => Incidence::Edge(index(l, t.next(), "edge", g.edges.len())?),
                            Some("a") => Incidence::Arc(index(l, t.next(), "arc", g.arcs.len())?),
                            _ => return perr(l, "expected 'inc e <k>' or 'inc a <k>'"),
                        };
                        no_more(l, t)?;
                        incs.push((l, inc));
                    }
                    _ => return perr(l, "expected 'walk', 'pair' or 'inc' line"),
                }
            }
            let need_walk = |w: Option<Vec<usize>>| w.map_or_else(|| perr(hl, "missing walk line"), Ok);
            let two = |incs: &[(usize, Incidence)]| -> Result<(Incidence, Incidence)> {
                match incs {
                    [(_, a), (_, b)] => Ok((*a, *b)),
                    _ => perr(hl, format!("{reason} needs exactly two inc lines")),
                }
            };
            let no = match reason.as_str() {
                "odd_cycle" => NoCertificate::OddCycle { walk: need_walk(walk)? },
                "bad_cycle" => NoCertificate::BadCycle {
                    walk: need_walk(walk)?,
                    pair: pair.map_or_else(|| perr(hl, "missing pair line"), Ok)?,
                },
                "mixed_edge_arc" => match two(&incs)? {
                    (Incidence::Edge(edge), Incidence::Arc(arc)) => NoCertificate::MixedEdgeArc { edge, arc },
                    _ => return perr(incs[0].0, "mixed_edge_arc lists an edge, then an arc"),
                },
                "orbit" => {
                    let (first, second) = two(&incs)?;
                    NoCertificate::Orbit { first, second }
                }
                "direction_conflict" => match two(&incs)? {
                    (Incidence::Arc(first), Incidence::Arc(second)) => {
                        NoCertificate::DirectionConflict { first, second }
                    }
                    _ => return perr(incs[0].0, "direction_conflict lists two arcs"),
                },
                "has_incidence" => match incs.as_slice() {
                    [(_, incidence)] => NoCertificate::HasIncidence { incidence: *incidence },
                    _ => return perr(hl, "has_incidence needs one inc line"),
                },
                other => return perr(hl, format!("unknown reason '{other}'")),
            };
            Ok(Certificate::No(no))
        }
        _ => perr(hl, "expected 'yes' or 'no'"),
    }
}

/// Classical graph as a vertex count and 0-based edge list.
pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (l, body) in content_lines(text) {
        let mut t = body.split_whitespace();
        if body.starts_with('v') {
            t.next();
            if declared.is_some() || !edges.is_empty() {
                return perr(l, "'v <count>' must be the first line");
            }
            declared = Some(number(l, t.next(), "vertex count")?);
            no_more(l, t)?;
            continue;
        }
        let limit = declared.unwrap_or(usize::MAX);
        let a = index(l, t.next(), "vertex", limit)?;
        let b = index(l, t.next(), "vertex", limit)?;
        no_more(l, t)?;
        edges.push((a, b));
    }
    let count = declared.unwrap_or_else(|| edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0));
    Ok((count, edges))
}

pub fn write_edge_list(vertex_count: usize, edges: &[(usize, usize)]) -> String {
    let mut out = format!("v {vertex_count}\n");
    for &(a, b) in edges {
        let _ = writeln!(out, "{} {}", a + 1, b + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::decide_2col;

    const SIGNED_C4: &str = "# signed 4-cycle\nmng 2 0\nv 4\ne 1 2 1\ne 2 3 1 # trailing\ne 3 4 1\ne 4 1 2\n";

    #[test]
    fn graph_roundtrip() {
        let g = parse_graph(SIGNED_C4).unwrap();
        assert_eq!(g.edges.len(), 4);
        assert_eq!(g.edges[3].colour, 1);
        assert_eq!(g.edges[3].u, 0);
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn graph_errors_carry_line_numbers() {
        let cases = [
            ("mng 1 0\nv 2\ne 1 3 1\n", 3),
            ("mng 1 0\nv 2\ne 1 2 2\n", 3),
            ("mng 1 0\nv 2\ne 1 1 1\n", 3),
            ("mng 1 1\nv 2\ne 1 2 1\n\na 2 1 1\n", 5),
            ("mng 1 0\nx 2\n", 2),
            ("mng 1 0\nv 2\nq 1 2 1\n", 3),
            ("mng 1 0\nv 2\ne 1 2 1 9\n", 3),
            ("mng one 0\n", 1),
        ];
        for (text, line) in cases {
            match parse_graph(text) {
                Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn group_element_syntax() {
        let p = parse_element(1, "2 1 | 1 | -", 2, 1).unwrap();
        assert_eq!(p.alpha(), &[1, 0]);
        assert_eq!(p.flips(), &[true]);
        assert_eq!(p.to_string(), "2 1 | 1 | -");
        let q = parse_element(1, ". | 2 1 | +-", 0, 2).unwrap();
        assert_eq!(q.beta(), &[1, 0]);
        assert_eq!(parse_element(1, &q.to_string(), 0, 2).unwrap(), q);
        let r = parse_element(1, "1 2 | . | .", 2, 0).unwrap();
        assert!(r.is_identity());
        for bad in ["1 1 | . | .", "1 | . | .", "1 2 | .", "1 2 | . | +", "0 1 | . | ."] {
            assert!(parse_element(1, bad, 2, 0).is_err(), "{bad}");
        }
    }

    #[test]
    fn group_file() {
        let grp = parse_group("grp 3 0\n# S3\ng 2 1 3 | . | .\ng 2 3 1 | . | .\n").unwrap();
        assert_eq!(grp.order(), 6);
        let (m, n, gens) = parse_generators(&write_group(3, 0, grp.generators())).unwrap();
        assert_eq!((m, n), (3, 0));
        assert_eq!(closure(3, 0, &gens).unwrap().elements(), grp.elements());
        assert_eq!(parse_group("grp 1 1\n").unwrap().order(), 1);
        assert!(matches!(parse_group("grp 2 0\ng 1 2 | . | .\nh\n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn certificates_roundtrip() {
        let g = parse_graph(SIGNED_C4).unwrap();
        let s2 = parse_group("grp 2 0\ng 2 1 | . | .\n").unwrap();
        let cert = decide_2col(&g, &s2).unwrap();
        assert!(write_certificate(&cert).starts_with("cert no bad_cycle\nwalk "));
        assert_eq!(parse_certificate(&write_certificate(&cert), &g).unwrap(), cert);

        let even = parse_graph("mng 2 0\nv 4\ne 1 2 1\ne 2 3 2\ne 3 4 1\ne 4 1 2\n").unwrap();
        let cert = decide_2col(&even, &s2).unwrap();
        let text = write_certificate(&cert);
        assert!(text.starts_with("cert yes k2 1\n"), "{text}");
        assert!(text.ends_with("map 0101\n"), "{text}");
        assert_eq!(parse_certificate(&text, &even).unwrap(), cert);

        let with_side = Certificate::Yes(YesCertificate {
            target: Target::K2 { colour: 0 },
            sequence: {
                let mut s = SwitchSequence::new();
                s.push_scoped(1, StepScope::SideOthers, SwitchElement::edge_perm(vec![1, 0]).unwrap());
                s
            },
            colouring: Some(vec![false, true, false, true]),
        });
        let text = write_certificate(&with_side);
        assert!(text.contains("o 2 2 1 | . | .\n"));
        assert_eq!(parse_certificate(&text, &even).unwrap(), with_side);

        for no in [
            NoCertificate::OddCycle { walk: vec![0, 1, 2] },
            NoCertificate::Orbit { first: Incidence::Edge(0), second: Incidence::Edge(2) },
            NoCertificate::HasIncidence { incidence: Incidence::Edge(1) },
        ] {
            let cert = Certificate::No(no);
            assert_eq!(parse_certificate(&write_certificate(&cert), &g).unwrap(), cert);
        }
    }

    #[test]
    fn certificate_errors() {
        let g = parse_graph(SIGNED_C4).unwrap();
        for bad in [
            "",
            "cert maybe\n",
            "cert yes k3\n",
            "cert yes k2 1\nmap 01\n",
            "cert yes k2 1\nmap 0101\ns 1 2 1 | . | .\n",
            "cert no bad_cycle\nwalk 1 2 3 4\n",
            "cert no orbit\ninc e 1\n",
            "cert no nonsense\n",
            "cert yes k2 1\ns 9 2 1 | . | .\n",
        ] {
            assert!(parse_certificate(bad, &g).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn edge_lists() {
        let (n, edges) = parse_edge_list("# triangle\n1 2\n2 3\n3 1\n").unwrap();
        assert_eq!(n, 3);
        assert_eq!(edges, vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(parse_edge_list(&write_edge_list(n, &edges)).unwrap(), (n, edges));
        assert_eq!(parse_edge_list("v 5\n").unwrap(), (5, vec![]));
        assert!(parse_edge_list("v 2\n1 3\n").is_err());
        assert!(parse_edge_list("1 2\nv 4\n").is_err());
    }
}
