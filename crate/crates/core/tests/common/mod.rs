//! Fixtures shared by the integration tests: a small group catalog and a
//! seeded generator of desk-scale instances.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use switchcol::perm_group::closure;
use switchcol::switching::switch_vertex;
use switchcol::{MixedGraph, SwitchElement, SwitchGroup};

pub struct Named {
    pub name: &'static str,
    pub group: SwitchGroup,
}

fn edge(alpha: &[usize]) -> SwitchElement {
    SwitchElement::edge_perm(alpha.to_vec()).unwrap()
}

pub fn catalog() -> Vec<Named> {
    vec![
        Named { name: "trivial(2,0)", group: SwitchGroup::trivial(2, 0) },
        Named { name: "S2", group: closure(2, 0, &[edge(&[1, 0])]).unwrap() },
        Named { name: "C3", group: closure(3, 0, &[edge(&[1, 2, 0])]).unwrap() },
        Named { name: "S3", group: closure(3, 0, &[edge(&[1, 0, 2]), edge(&[1, 2, 0])]).unwrap() },
        Named {
            name: "flip(0,1)",
            group: closure(0, 1, &[SwitchElement::arc_perm(vec![0], vec![true]).unwrap()]).unwrap(),
        },
        Named {
            name: "swapflip(0,2)",
            group: closure(0, 2, &[SwitchElement::arc_perm(vec![1, 0], vec![true, false]).unwrap()]).unwrap(),
        },
    ]
}

/// Groups outside the catalog that reach the orbit, direction-conflict
/// and mixed-graph branches.
pub fn extra_groups() -> Vec<Named> {
    vec![
        Named { name: "trivial(0,1)", group: SwitchGroup::trivial(0, 1) },
        Named { name: "swap(0,2)", group: closure(0, 2, &[SwitchElement::arc_perm(vec![1, 0], vec![false, false]).unwrap()]).unwrap() },
        Named { name: "partial(3,0)", group: closure(3, 0, &[edge(&[1, 0, 2])]).unwrap() },
        Named {
            name: "mixed(1,1)",
            group: closure(1, 1, &[SwitchElement::new(vec![0], vec![0], vec![true]).unwrap()]).unwrap(),
        },
    ]
}

pub fn s2() -> SwitchGroup {
    closure(2, 0, &[edge(&[1, 0])]).unwrap()
}

pub fn s4() -> SwitchGroup {
    closure(4, 0, &[edge(&[1, 0, 2, 3]), edge(&[1, 2, 3, 0])]).unwrap()
}

pub fn is_abelian_group(g: &SwitchGroup) -> bool {
    switchcol::perm_group::is_abelian(g)
}

/// Distinct vertex pairs: only across a random split when `bipartite`.
pub fn random_pairs<R: Rng>(rng: &mut R, vertices: usize, count: usize, bipartite: bool) -> Vec<(usize, usize)> {
    let side: Vec<bool> = (0..vertices).map(|_| rng.gen()).collect();
    let mut pairs: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|a| (a + 1..vertices).map(move |b| (a, b)))
        .filter(|&(a, b)| !bipartite || side[a] != side[b])
        .collect();
    pairs.shuffle(rng);
    pairs.truncate(count);
    pairs
}

/// Random instance for `grp`: edges when it has edge colours, arcs
/// otherwise. A third of the instances are switched from monochromatic,
/// a third are that plus one recoloured incidence, the rest are uniform.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    grp: &SwitchGroup,
    max_vertices: usize,
    max_incidences: usize,
) -> MixedGraph {
    let vertices = rng.gen_range(2..=max_vertices);
    let bipartite = rng.gen_bool(0.8);
    let count = rng.gen_range(1..=max_incidences);
    let pairs = random_pairs(rng, vertices, count, bipartite);
    let (m, n) = (grp.m(), grp.n());
    let arcs = m == 0;
    let palette = if arcs { n } else { m };
    let mode = rng.gen_range(0..3);
    let mixed = m > 0 && n > 0 && mode == 0;
    let base = rng.gen_range(0..palette);
    let mut g = MixedGraph::new(m, n, vertices);
    for &(a, b) in &pairs {
        let colour = if mode == 0 { rng.gen_range(0..palette) } else { base };
        let (a, b) = if rng.gen() { (a, b) } else { (b, a) };
        if mixed && rng.gen_bool(0.3) {
            g.add_arc(a, b, rng.gen_range(0..n));
        } else if arcs {
            if mode == 0 {
                g.add_arc(a, b, colour);
            } else {
                // Monochromatic start: orient every arc from the lower side.
                g.add_arc(a.min(b), a.max(b), colour);
            }
        } else {
            g.add_edge(a, b, colour);
        }
    }
    if mode >= 1 {
        for _ in 0..rng.gen_range(0..2 * vertices) {
            let v = rng.gen_range(0..vertices);
            let p = &grp.elements()[rng.gen_range(0..grp.order())];
            g = switch_vertex(&g, v, p).unwrap();
        }
    }
    if mode == 2 && g.incidence_count() > 0 {
        if arcs {
            let k = rng.gen_range(0..g.arcs.len());
            if rng.gen() {
                let a = &mut g.arcs[k];
                std::mem::swap(&mut a.tail, &mut a.head);
            } else {
                g.arcs[k].colour = rng.gen_range(0..palette);
            }
        } else {
            let k = rng.gen_range(0..g.edges.len());
            g.edges[k].colour = rng.gen_range(0..palette);
        }
    }
    g
}

/// All colourings of the cycle of the given length, edges or arcs
/// following the group's shape. Arcs run `k -> k+1` or backwards.
pub fn all_cycle_colourings(grp: &SwitchGroup, len: usize) -> Vec<MixedGraph> {
    let (m, n) = (grp.m(), grp.n());
    let arcs = m == 0;
    let per = if arcs { 2 * n } else { m };
    let total = per.pow(len as u32);
    (0..total)
        .map(|mut code| {
            let mut g = MixedGraph::new(m, n, len);
            for k in 0..len {
                let d = code % per;
                code /= per;
                let (a, b) = (k, (k + 1) % len);
                if arcs {
                    let (t, h) = if d & 1 == 1 { (b, a) } else { (a, b) };
                    g.add_arc(t, h, d >> 1);
                } else {
                    g.add_edge(a, b, d);
                }
            }
            g
        })
        .collect()
}
