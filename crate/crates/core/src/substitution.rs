//! Substitution classes of an edge-colour group.
//!
//! Colour `j` belongs to the class of `i` when a labelled even cycle coloured
//! `i` everywhere except for one `j` edge can be switched to be all `i`. The
//! classes are read off a breadth-first search of the reconfiguration graph of
//! labelled 4-cycles; the search also yields, for every member, a shortest
//! switch sequence on the 4-cycle that the solver lifts to whole graphs.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{invalid, Error, Result};
use crate::mixed_graph::MixedGraph;
use crate::perm_group::{inverse, SwitchElement, SwitchGroup};
use crate::switching::SwitchSequence;

/// Cap on the number of labelled cycle colourings explored per search.
pub const DEFAULT_STATE_CAP: usize = 10_000_000;

/// Edge colours of the labelled cycle `v0 v1 v2 v3 v0`, listed as
/// `[v0v1, v1v2, v2v3, v3v0]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct C4State(pub [usize; 4]);

impl C4State {
    pub fn monochromatic(i: usize) -> Self {
        C4State([i; 4])
    }

    /// All edges `i` except `v3v0`, which is `j`.
    pub fn nearly(i: usize, j: usize) -> Self {
        C4State([i, i, i, j])
    }

    /// The state as a 4-vertex graph, edges listed in state order.
    pub fn to_graph(self, m: usize) -> MixedGraph {
        let mut g = MixedGraph::new(m, 0, 4);
        for k in 0..4 {
            g.add_edge(k, (k + 1) % 4, self.0[k]);
        }
        g
    }
}

/// Reachable states of the labelled cycle of some even length, searched from
/// one start colouring. States are encoded base `m`, edge `k` (joining `v_k`
/// and `v_{k+1}`) as digit `k`.
struct CycleSearch {
    dist: Vec<u32>,
    /// `(previous state, cycle vertex, element index)` per reached state.
    pred: Vec<(u32, u8, u32)>,
}

const UNSEEN: u32 = u32::MAX;

fn state_count(m: usize, len: usize, cap: usize) -> Result<usize> {
    let mut total: usize = 1;
    for _ in 0..len {
        total = total.saturating_mul(m);
        if total > cap {
            return Err(Error::ResourceLimit {
                what: format!("{m}^{len} labelled cycle colourings"),
                cap,
            });
        }
    }
    Ok(total)
}

fn encode(colours: &[usize], m: usize) -> u32 {
    colours.iter().rev().fold(0usize, |acc, &c| acc * m + c) as u32
}

fn decode(mut code: u32, m: usize, len: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code as usize % m);
        code /= m as u32;
    }
    out
}

fn cycle_search(g: &SwitchGroup, len: usize, start: u32, cap: usize, keep_pred: bool) -> Result<CycleSearch> {
    let m = g.m();
    let total = state_count(m, len, cap)?;
    let mut pow = vec![1u32; len];
    for k in 1..len {
        pow[k] = pow[k - 1] * m as u32;
    }
    let mut dist = vec![UNSEEN; total];
    let mut pred = if keep_pred { vec![(0, 0, 0); total] } else { Vec::new() };
    let mut frontier = vec![start];
    dist[start as usize] = 0;
    let mut depth = 0;
    while !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        for &code in &frontier {
            for vertex in 0..len {
                // v_k touches edges k-1 and k.
                let (e1, e2) = ((vertex + len - 1) % len, vertex);
                let c1 = (code / pow[e1]) as usize % m;
                let c2 = (code / pow[e2]) as usize % m;
                let base = code - c1 as u32 * pow[e1] - c2 as u32 * pow[e2];
                for (idx, p) in g.elements().iter().enumerate() {
                    let to = base + p.edge_image(c1) as u32 * pow[e1] + p.edge_image(c2) as u32 * pow[e2];
                    if dist[to as usize] == UNSEEN {
                        dist[to as usize] = depth;
                        if keep_pred {
                            pred[to as usize] = (code, vertex as u8, idx as u32);
                        }
                        next.push(to);
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(CycleSearch { dist, pred })
}

fn require_edge_group(g: &SwitchGroup) -> Result<()> {
    if g.n() != 0 {
        return invalid(format!(
            "substitution classes need an edge-colour group (n = {}); translate arcs first",
            g.n()
        ));
    }
    Ok(())
}

/// Component of `start` in the reconfiguration graph of labelled 4-cycles.
#[derive(Debug, Clone)]
pub struct ReconfigurationComponent {
    pub start: C4State,
    /// Every reachable state with its BFS predecessor and the switch
    /// `(cycle vertex, element index)` leading from it; `None` for `start`.
    pub predecessor: HashMap<C4State, Option<(C4State, usize, usize)>>,
    pub eccentricity: usize,
}

impl ReconfigurationComponent {
    /// Switches leading from `start` to `target`, if reachable.
    pub fn path_to(&self, target: C4State) -> Option<Vec<(usize, usize)>> {
        let mut steps = Vec::new();
        let mut cur = target;
        loop {
            match self.predecessor.get(&cur)? {
                None => break,
                Some((prev, v, e)) => {
                    steps.push((*v, *e));
                    cur = *prev;
                }
            }
        }
        steps.reverse();
        Some(steps)
    }
}

pub fn reconfiguration_component(g: &SwitchGroup, start: C4State) -> Result<ReconfigurationComponent> {
    require_edge_group(g)?;
    let m = g.m();
    if start.0.iter().any(|&c| c >= m) {
        return invalid(format!("state {:?} uses colours outside 1..={m}", start.0));
    }
    let search = cycle_search(g, 4, encode(&start.0, m), DEFAULT_STATE_CAP, true)?;
    let mut predecessor = HashMap::new();
    let mut eccentricity = 0;
    for (code, &d) in search.dist.iter().enumerate() {
        if d == UNSEEN {
            continue;
        }
        eccentricity = eccentricity.max(d as usize);
        let state = C4State(decode(code as u32, m, 4).try_into().expect("four digits"));
        let entry = if d == 0 {
            None
        } else {
            let (prev, v, e) = search.pred[code];
            let prev = C4State(decode(prev, m, 4).try_into().expect("four digits"));
            Some((prev, v as usize, e as usize))
        };
        predecessor.insert(state, entry);
    }
    Ok(ReconfigurationComponent { start, predecessor, eccentricity })
}

/// Class table of one edge-colour group.
#[derive(Debug, Clone)]
pub struct SubstitutionClasses {
    m: usize,
    classes: Vec<Vec<usize>>,
    member: Vec<bool>,
    /// Switches `(cycle vertex, element index)` turning the nearly-`(i, j)`
    /// 4-cycle into the all-`i` one.
    witnesses: HashMap<(usize, usize), Vec<(usize, usize)>>,
    elements: Vec<SwitchElement>,
    c_gamma: usize,
    largest_component: usize,
}

impl SubstitutionClasses {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Sorted members of the class of `i`.
    pub fn class(&self, i: usize) -> &[usize] {
        &self.classes[i]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.member[i * self.m + j]
    }

    /// Largest distance from an all-`i` 4-cycle to anything it can reach.
    pub fn c_gamma(&self) -> usize {
        self.c_gamma
    }

    /// Size of the largest reconfiguration component containing a
    /// monochromatic state.
    pub fn largest_component(&self) -> usize {
        self.largest_component
    }

    pub fn element(&self, idx: usize) -> &SwitchElement {
        &self.elements[idx]
    }

    /// Raw witness steps for `j` in the class of `i`.
    pub fn witness_steps(&self, i: usize, j: usize) -> Option<&[(usize, usize)]> {
        self.witnesses.get(&(i, j)).map(Vec::as_slice)
    }

    /// Witness as a switch sequence on the vertices `0..4` of
    /// [`C4State::to_graph`].
    pub fn witness(&self, i: usize, j: usize) -> Option<SwitchSequence> {
        self.witness_steps(i, j).map(|steps| {
            SwitchSequence::from_steps(steps.iter().map(|&(v, e)| (v, &self.elements[e])))
        })
    }
}

fn compute_classes(g: &SwitchGroup) -> Result<SubstitutionClasses> {
    require_edge_group(g)?;
    let m = g.m();
    let inverse_index: Vec<usize> = g
        .elements()
        .iter()
        .map(|p| g.index_of(&inverse(p)).expect("groups are closed under inverses"))
        .collect();
    let mut classes = Vec::with_capacity(m);
    let mut member = vec![false; m * m];
    let mut witnesses = HashMap::new();
    let mut c_gamma = 0;
    let mut largest_component = 0;
    for i in 0..m {
        let search = cycle_search(g, 4, encode(&[i; 4], m), DEFAULT_STATE_CAP, true)?;
        let reached = search.dist.iter().filter(|&&d| d != UNSEEN);
        let (size, ecc) = reached.fold((0, 0), |(n, e), &d| (n + 1, e.max(d as usize)));
        largest_component = largest_component.max(size);
        c_gamma = c_gamma.max(ecc);
        let mut class = Vec::new();
        for j in 0..m {
            let target = encode(&[i, i, i, j], m);
            if search.dist[target as usize] == UNSEEN {
                continue;
            }
            class.push(j);
            member[i * m + j] = true;
            // Walk back to the all-i state, undoing each switch on the way.
            let mut steps = Vec::new();
            let mut cur = target;
            while search.dist[cur as usize] != 0 {
                let (prev, v, e) = search.pred[cur as usize];
                steps.push((v as usize, inverse_index[e as usize]));
                cur = prev;
            }
            witnesses.insert((i, j), steps);
        }
        classes.push(class);
    }
    Ok(SubstitutionClasses {
        m,
        classes,
        member,
        witnesses,
        elements: g.elements().to_vec(),
        c_gamma,
        largest_component,
    })
}

type ClassCache = Mutex<HashMap<Vec<SwitchElement>, Arc<SubstitutionClasses>>>;

fn cache() -> &'static ClassCache {
    static CACHE: OnceLock<ClassCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Class table of `g`, computed once per distinct element list.
pub fn substitution_classes(g: &SwitchGroup) -> Result<Arc<SubstitutionClasses>> {
    let key = g.elements().to_vec();
    let mut guard = cache().lock().unwrap_or_else(|e| e.into_inner());
    if let Some(hit) = guard.get(&key) {
        return Ok(Arc::clone(hit));
    }
    let table = Arc::new(compute_classes(g)?);
    guard.insert(key, Arc::clone(&table));
    Ok(table)
}

/// Classes computed on the labelled cycle of length `len` instead of 4.
pub fn cycle_classes(g: &SwitchGroup, len: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
    require_edge_group(g)?;
    if len < 4 || len % 2 == 1 {
        return invalid(format!("cycle length {len} is not an even number of at least 4"));
    }
    let m = g.m();
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let search = cycle_search(g, len, encode(&vec![i; len], m), cap, false)?;
        let mut near = vec![i; len];
        let class = (0..m)
            .filter(|&j| {
                near[len - 1] = j;
                search.dist[encode(&near, m) as usize] != UNSEEN
            })
            .collect();
        out.push(class);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub four: Vec<Vec<usize>>,
    /// `(length, classes at that length, equal to the 4-cycle classes)`.
    pub lengths: Vec<(usize, Vec<Vec<usize>>, bool)>,
}

impl StabilityReport {
    pub fn all_equal(&self) -> bool {
        self.lengths.iter().all(|(_, _, eq)| *eq)
    }
}

pub fn check_class_stability(g: &SwitchGroup, lengths: &[usize]) -> Result<StabilityReport> {
    let four = substitution_classes(g)?.classes().to_vec();
    let mut out = Vec::new();
    for &len in lengths {
        let classes = cycle_classes(g, len, DEFAULT_STATE_CAP)?;
        let equal = classes == four;
        out.push((len, classes, equal));
    }
    Ok(StabilityReport { four, lengths: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm_group::closure;
    use crate::switching::apply_sequence;

    fn perm(alpha: &[usize]) -> SwitchElement {
        SwitchElement::edge_perm(alpha.to_vec()).unwrap()
    }

    #[test]
    fn trivial_group_component_is_single_state() {
        let g = closure(3, 0, &[]).unwrap();
        let c = reconfiguration_component(&g, C4State([0, 1, 2, 0])).unwrap();
        assert_eq!(c.predecessor.len(), 1);
        assert_eq!(c.eccentricity, 0);
        let one = closure(1, 0, &[]).unwrap();
        assert_eq!(reconfiguration_component(&one, C4State::monochromatic(0)).unwrap().predecessor.len(), 1);
    }

    #[test]
    fn signed_c4_component_has_even_parity_states() {
        let s2 = closure(2, 0, &[perm(&[1, 0])]).unwrap();
        let c = reconfiguration_component(&s2, C4State::monochromatic(0)).unwrap();
        assert_eq!(c.predecessor.len(), 8);
        for s in c.predecessor.keys() {
            assert_eq!(s.0.iter().filter(|&&x| x == 1).count() % 2, 0);
        }
        let path = c.path_to(C4State([1, 1, 0, 0])).unwrap();
        assert_eq!(path.len(), 1);
    }

    #[test]
    fn class_tables() {
        let trivial = closure(3, 0, &[]).unwrap();
        let t = substitution_classes(&trivial).unwrap();
        assert_eq!(t.classes(), &[vec![0], vec![1], vec![2]]);
        assert_eq!(t.c_gamma(), 0);

        let s2 = closure(2, 0, &[perm(&[1, 0])]).unwrap();
        assert_eq!(substitution_classes(&s2).unwrap().classes(), &[vec![0], vec![1]]);
    }

    #[test]
    fn witnesses_replay_to_monochromatic() {
        let s3 = closure(3, 0, &[perm(&[1, 0, 2]), perm(&[1, 2, 0])]).unwrap();
        let t = substitution_classes(&s3).unwrap();
        for i in 0..3 {
            for &j in t.class(i) {
                let w = t.witness(i, j).unwrap();
                assert!(w.len() <= t.c_gamma());
                let out = apply_sequence(&C4State::nearly(i, j).to_graph(3), &w).unwrap();
                assert_eq!(out, C4State::monochromatic(i).to_graph(3));
            }
        }
        assert!(t.c_gamma() < t.largest_component());
    }

    #[test]
    fn arc_groups_are_rejected() {
        let g = closure(0, 1, &[]).unwrap();
        assert!(substitution_classes(&g).is_err());
    }

    #[test]
    fn stability_on_small_groups() {
        let trivial = closure(2, 0, &[]).unwrap();
        assert!(check_class_stability(&trivial, &[4, 6]).unwrap().all_equal());
        let s2 = closure(2, 0, &[perm(&[1, 0])]).unwrap();
        assert!(check_class_stability(&s2, &[4, 6, 8]).unwrap().all_equal());
        assert!(cycle_classes(&s2, 5, 1000).is_err());
        assert!(matches!(
            cycle_classes(&s2, 30, 1000),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn cache_returns_same_table() {
        let s2 = closure(2, 0, &[perm(&[1, 0])]).unwrap();
        let a = substitution_classes(&s2).unwrap();
        let b = substitution_classes(&s2).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
