//! Switch elements and the finite groups they generate.
//!
//! An element acts on a single incidence: `alpha` permutes edge colours,
//! `beta` permutes arc colours, and `flips[c]` reverses an arc whose colour is
//! `c` before recolouring. Composition follows what two consecutive switches
//! at one vertex do to an arc, so the direction bit of the second element is
//! looked up at the colour produced by the first.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{invalid, Error, Result};

/// Default cap on the number of elements enumerated by [`closure`].
pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ColourKind {
    Edge,
    Arc,
}

/// One group element. Images are 0-based.
///
/// The derived ordering is lexicographic on `(alpha, beta, flips)`, which puts
/// the identity first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SwitchElement {
    alpha: Vec<usize>,
    beta: Vec<usize>,
    flips: Vec<bool>,
}

fn is_permutation(images: &[usize]) -> bool {
    let mut seen = vec![false; images.len()];
    for &x in images {
        if x >= images.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

fn invert_permutation(images: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; images.len()];
    for (i, &x) in images.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

impl SwitchElement {
    pub fn new(alpha: Vec<usize>, beta: Vec<usize>, flips: Vec<bool>) -> Result<Self> {
        if !is_permutation(&alpha) {
            return invalid(format!("edge colour map {alpha:?} is not a bijection"));
        }
        if !is_permutation(&beta) {
            return invalid(format!("arc colour map {beta:?} is not a bijection"));
        }
        if flips.len() != beta.len() {
            return invalid(format!(
                "{} direction flags given for {} arc colours",
                flips.len(),
                beta.len()
            ));
        }
        Ok(SwitchElement { alpha, beta, flips })
    }

    pub fn identity(m: usize, n: usize) -> Self {
        SwitchElement {
            alpha: (0..m).collect(),
            beta: (0..n).collect(),
            flips: vec![false; n],
        }
    }

    /// Element acting only on edge colours.
    pub fn edge_perm(alpha: Vec<usize>) -> Result<Self> {
        Self::new(alpha, Vec::new(), Vec::new())
    }

    /// Element acting only on arcs.
    pub fn arc_perm(beta: Vec<usize>, flips: Vec<bool>) -> Result<Self> {
        Self::new(Vec::new(), beta, flips)
    }

    pub fn m(&self) -> usize {
        self.alpha.len()
    }

    pub fn n(&self) -> usize {
        self.beta.len()
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    pub fn beta(&self) -> &[usize] {
        &self.beta
    }

    pub fn flips(&self) -> &[bool] {
        &self.flips
    }

    pub fn is_identity(&self) -> bool {
        self.alpha.iter().enumerate().all(|(i, &x)| i == x)
            && self.beta.iter().enumerate().all(|(i, &x)| i == x)
            && self.flips.iter().all(|&f| !f)
    }

    pub fn has_flip(&self) -> bool {
        self.flips.iter().any(|&f| f)
    }

    #[inline]
    pub fn edge_image(&self, colour: usize) -> usize {
        self.alpha[colour]
    }

    /// Image of an arc of `colour`; `reversed` is toggled when the element
    /// flips arcs of that colour.
    #[inline]
    pub fn arc_image(&self, colour: usize, reversed: bool) -> (usize, bool) {
        (self.beta[colour], reversed ^ self.flips[colour])
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m(), self.n())
    }

    /// Drop the arc part, keeping the action on edge colours.
    pub fn edge_part(&self) -> SwitchElement {
        SwitchElement { alpha: self.alpha.clone(), beta: Vec::new(), flips: Vec::new() }
    }

    /// Drop the edge part, keeping the action on arcs.
    pub fn arc_part(&self) -> SwitchElement {
        SwitchElement { alpha: Vec::new(), beta: self.beta.clone(), flips: self.flips.clone() }
    }
}

impl fmt::Display for SwitchElement {
    /// Text form used by group and sequence files, 1-based.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alpha.is_empty() {
            f.write_str(".")?;
        } else {
            for (k, a) in self.alpha.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", a + 1)?;
            }
        }
        f.write_str(" | ")?;
        if self.beta.is_empty() {
            f.write_str(". | .")
        } else {
            for (k, b) in self.beta.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", b + 1)?;
            }
            f.write_str(" | ")?;
            for &flip in &self.flips {
                f.write_str(if flip { "-" } else { "+" })?;
            }
            Ok(())
        }
    }
}

/// Apply `first`, then `second`.
pub fn compose_action(first: &SwitchElement, second: &SwitchElement) -> Result<SwitchElement> {
    if first.dims() != second.dims() {
        return invalid(format!(
            "cannot compose elements of dimensions {:?} and {:?}",
            first.dims(),
            second.dims()
        ));
    }
    Ok(compose_unchecked(first, second))
}

pub(crate) fn compose_unchecked(first: &SwitchElement, second: &SwitchElement) -> SwitchElement {
    SwitchElement {
        alpha: first.alpha.iter().map(|&c| second.alpha[c]).collect(),
        beta: first.beta.iter().map(|&c| second.beta[c]).collect(),
        flips: first
            .flips
            .iter()
            .zip(&first.beta)
            .map(|(&f, &b)| f ^ second.flips[b])
            .collect(),
    }
}

pub fn inverse(p: &SwitchElement) -> SwitchElement {
    let beta = invert_permutation(&p.beta);
    // The inverse must undo the flip of the colour it is mapping back from.
    let flips = beta.iter().map(|&pre| p.flips[pre]).collect();
    SwitchElement { alpha: invert_permutation(&p.alpha), beta, flips }
}

/// A finite group of switch elements with its elements listed in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct SwitchGroup {
    m: usize,
    n: usize,
    elements: Vec<SwitchElement>,
    generators: Vec<SwitchElement>,
    index: HashMap<SwitchElement, usize>,
    edge_orbit: Vec<usize>,
    arc_orbit: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColourOrbit {
    pub kind: ColourKind,
    pub members: Vec<usize>,
}

/// Closure of `generators` under composition. `m` and `n` fix the
/// dimensions when the generator list is empty.
pub fn closure(m: usize, n: usize, generators: &[SwitchElement]) -> Result<SwitchGroup> {
    closure_with_cap(m, n, generators, DEFAULT_ELEMENT_CAP)
}

pub fn closure_with_cap(
    m: usize,
    n: usize,
    generators: &[SwitchElement],
    cap: usize,
) -> Result<SwitchGroup> {
    for g in generators {
        if g.dims() != (m, n) {
            return invalid(format!(
                "generator {g} has dimensions {:?}, expected ({m}, {n})",
                g.dims()
            ));
        }
    }
    let identity = SwitchElement::identity(m, n);
    let mut seen: HashSet<SwitchElement> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(identity.clone());
    queue.push_back(identity);
    // Right multiplication by generators reaches every product of generators;
    // in a finite group that already contains all inverses.
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = compose_unchecked(&x, g);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::ResourceLimit { what: "group closure".into(), cap });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<_> = seen.into_iter().collect();
    elements.sort();
    Ok(SwitchGroup::from_sorted(m, n, elements, generators.to_vec()))
}

impl SwitchGroup {
    fn from_sorted(
        m: usize,
        n: usize,
        elements: Vec<SwitchElement>,
        generators: Vec<SwitchElement>,
    ) -> Self {
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let edge_orbit = orbit_labels(m, elements.iter().map(|e| e.alpha.as_slice()));
        let arc_orbit = orbit_labels(n, elements.iter().map(|e| e.beta.as_slice()));
        SwitchGroup { m, n, elements, generators, index, edge_orbit, arc_orbit }
    }

    pub fn trivial(m: usize, n: usize) -> Self {
        Self::from_sorted(m, n, vec![SwitchElement::identity(m, n)], Vec::new())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[SwitchElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[SwitchElement] {
        &self.generators
    }

    pub fn element(&self, idx: usize) -> &SwitchElement {
        &self.elements[idx]
    }

    pub fn index_of(&self, p: &SwitchElement) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &SwitchElement) -> bool {
        self.index.contains_key(p)
    }

    pub fn identity(&self) -> &SwitchElement {
        &self.elements[0]
    }

    /// Orbit label of a colour; two colours share an orbit iff their labels
    /// are equal.
    pub fn orbit_label(&self, kind: ColourKind, colour: usize) -> usize {
        match kind {
            ColourKind::Edge => self.edge_orbit[colour],
            ColourKind::Arc => self.arc_orbit[colour],
        }
    }

    pub fn same_orbit(&self, kind: ColourKind, a: usize, b: usize) -> bool {
        self.orbit_label(kind, a) == self.orbit_label(kind, b)
    }

    /// True iff some element reverses arcs of some colour.
    pub fn has_flips(&self) -> bool {
        self.elements.iter().any(SwitchElement::has_flip)
    }

    /// The image of this group acting on one colour kind only, together with
    /// a preimage (the least one) in this group for each element of the image.
    pub fn restrict(&self, kind: ColourKind) -> (SwitchGroup, Vec<usize>) {
        let project = |e: &SwitchElement| match kind {
            ColourKind::Edge => e.edge_part(),
            ColourKind::Arc => e.arc_part(),
        };
        let mut first: HashMap<SwitchElement, usize> = HashMap::new();
        for (i, e) in self.elements.iter().enumerate() {
            first.entry(project(e)).or_insert(i);
        }
        let mut images: Vec<_> = first.keys().cloned().collect();
        images.sort();
        let preimage = images.iter().map(|e| first[e]).collect();
        let generators = self.generators.iter().map(project).collect();
        let (m, n) = match kind {
            ColourKind::Edge => (self.m, 0),
            ColourKind::Arc => (0, self.n),
        };
        (SwitchGroup::from_sorted(m, n, images, generators), preimage)
    }
}

fn orbit_labels<'a>(size: usize, perms: impl Iterator<Item = &'a [usize]>) -> Vec<usize> {
    // Union-find over colours, merging each colour with its images.
    let mut parent: Vec<usize> = (0..size).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for perm in perms {
        for (c, &img) in perm.iter().enumerate() {
            let (a, b) = (find(&mut parent, c), find(&mut parent, img));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..size).map(|c| find(&mut parent, c)).collect()
}

pub fn orbit(g: &SwitchGroup, kind: ColourKind, colour: usize) -> Result<ColourOrbit> {
    let size = match kind {
        ColourKind::Edge => g.m,
        ColourKind::Arc => g.n,
    };
    if colour >= size {
        return invalid(format!("colour {} out of range 1..={size}", colour + 1));
    }
    let mut members: Vec<usize> = g
        .elements
        .iter()
        .map(|e| match kind {
            ColourKind::Edge => e.alpha[colour],
            ColourKind::Arc => e.beta[colour],
        })
        .collect();
    members.sort_unstable();
    members.dedup();
    Ok(ColourOrbit { kind, members })
}

/// A group is Abelian iff its generators pairwise commute.
pub fn is_abelian(g: &SwitchGroup) -> bool {
    let gens = &g.generators;
    gens.iter().enumerate().all(|(k, a)| {
        gens[k + 1..].iter().all(|b| compose_unchecked(a, b) == compose_unchecked(b, a))
    })
}

/// Image of an arc-only element acting on `2n` edge colours: colour `i` of an
/// arc running from side A to side B becomes edge colour `i`, the same colour
/// running from B to A becomes edge colour `n + i`.
pub fn arc_element_to_edge_element(p: &SwitchElement) -> Result<SwitchElement> {
    if p.m() != 0 {
        return invalid("arc-to-edge translation needs an element with no edge colours");
    }
    let n = p.n();
    let mut alpha = vec![0; 2 * n];
    for i in 0..n {
        let b = p.beta[i];
        if p.flips[i] {
            alpha[i] = b + n;
            alpha[n + i] = b;
        } else {
            alpha[i] = b;
            alpha[n + i] = b + n;
        }
    }
    Ok(SwitchElement { alpha, beta: Vec::new(), flips: Vec::new() })
}

pub fn arc_group_to_edge_group(g: &SwitchGroup) -> Result<SwitchGroup> {
    if g.m != 0 {
        return invalid(format!(
            "arc-to-edge translation needs a group with no edge colours (m = {})",
            g.m
        ));
    }
    let mut elements = g
        .elements
        .iter()
        .map(arc_element_to_edge_element)
        .collect::<Result<Vec<_>>>()?;
    elements.sort();
    let generators = g
        .generators
        .iter()
        .map(arc_element_to_edge_element)
        .collect::<Result<Vec<_>>>()?;
    Ok(SwitchGroup::from_sorted(2 * g.n, 0, elements, generators))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(beta: &[usize], flips: &[bool]) -> SwitchElement {
        SwitchElement::arc_perm(beta.to_vec(), flips.to_vec()).unwrap()
    }

    fn edge(alpha: &[usize]) -> SwitchElement {
        SwitchElement::edge_perm(alpha.to_vec()).unwrap()
    }

    #[test]
    fn compose_with_identity() {
        let p = SwitchElement::new(vec![1, 0], vec![0, 1], vec![true, false]).unwrap();
        let id = SwitchElement::identity(2, 2);
        assert_eq!(compose_action(&id, &p).unwrap(), p);
        assert_eq!(compose_action(&p, &id).unwrap(), p);
    }

    #[test]
    fn double_flip_restores_direction() {
        let p = arc(&[0], &[true]);
        let pp = compose_action(&p, &p).unwrap();
        assert_eq!(pp.flips(), &[false]);
    }

    #[test]
    fn compose_reindexes_flips_by_beta() {
        // Following one arc of each colour through both switches by hand:
        // colour 1 is flipped, becomes colour 2, which the second copy leaves
        // alone; colour 2 is not flipped, becomes colour 1, which is flipped.
        let p = arc(&[1, 0], &[true, false]);
        let pp = compose_action(&p, &p).unwrap();
        assert_eq!(pp.beta(), &[0, 1]);
        assert_eq!(pp.flips(), &[true, true]);
    }

    #[test]
    fn compose_rejects_mismatched_dimensions() {
        let a = SwitchElement::identity(2, 0);
        let b = SwitchElement::identity(3, 0);
        assert!(matches!(compose_action(&a, &b), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn inverse_cases() {
        assert_eq!(inverse(&SwitchElement::identity(3, 2)), SwitchElement::identity(3, 2));
        let t = edge(&[1, 0]);
        assert_eq!(inverse(&t), t);
    }

    #[test]
    fn inverse_of_three_cycle_with_flip() {
        let p = arc(&[1, 2, 0], &[true, false, false]);
        // Brute force over all 6 * 8 candidate inverses.
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut found = Vec::new();
        for perm in perms {
            for bits in 0..8u8 {
                let flips: Vec<bool> = (0..3).map(|k| bits >> k & 1 == 1).collect();
                let q = arc(&perm, &flips);
                if compose_action(&p, &q).unwrap().is_identity() {
                    found.push(q);
                }
            }
        }
        assert_eq!(found, vec![arc(&[2, 0, 1], &[false, true, false])]);
        assert_eq!(inverse(&p), found[0]);
        assert!(compose_action(&inverse(&p), &p).unwrap().is_identity());
    }

    #[test]
    fn element_validation() {
        assert!(SwitchElement::edge_perm(vec![0, 0]).is_err());
        assert!(SwitchElement::arc_perm(vec![0, 1], vec![true]).is_err());
        assert!(SwitchElement::edge_perm(vec![2, 0]).is_err());
    }

    #[test]
    fn closure_sizes() {
        assert_eq!(closure(2, 0, &[]).unwrap().order(), 1);
        assert_eq!(closure(2, 0, &[edge(&[1, 0])]).unwrap().order(), 2);
        let s3 = closure(3, 0, &[edge(&[1, 0, 2]), edge(&[1, 2, 0])]).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(s3.identity().is_identity());
    }

    #[test]
    fn closure_cap() {
        let s4 = [edge(&[1, 0, 2, 3]), edge(&[1, 2, 3, 0])];
        assert!(matches!(
            closure_with_cap(4, 0, &s4, 10),
            Err(Error::ResourceLimit { .. })
        ));
        assert_eq!(closure_with_cap(4, 0, &s4, 24).unwrap().order(), 24);
    }

    #[test]
    fn closure_rejects_wrong_dimensions() {
        assert!(closure(3, 0, &[edge(&[1, 0])]).is_err());
    }

    #[test]
    fn orbits() {
        let trivial = closure(3, 0, &[]).unwrap();
        assert_eq!(orbit(&trivial, ColourKind::Edge, 0).unwrap().members, vec![0]);
        let s2 = closure(2, 0, &[edge(&[1, 0])]).unwrap();
        assert_eq!(orbit(&s2, ColourKind::Edge, 0).unwrap().members, vec![0, 1]);
        let g = closure(4, 0, &[edge(&[1, 0, 3, 2])]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(orbit(&g, ColourKind::Edge, 0).unwrap().members, vec![0, 1]);
        assert_eq!(orbit(&g, ColourKind::Edge, 3).unwrap().members, vec![2, 3]);
        assert!(orbit(&g, ColourKind::Edge, 4).is_err());
        assert!(orbit(&g, ColourKind::Arc, 0).is_err());
    }

    #[test]
    fn abelian_checks() {
        assert!(is_abelian(&closure(2, 0, &[]).unwrap()));
        let s3 = closure(3, 0, &[edge(&[1, 0, 2]), edge(&[1, 2, 0])]).unwrap();
        assert!(!is_abelian(&s3));
        let cyc = closure(0, 2, &[arc(&[1, 0], &[false, false])]).unwrap();
        assert!(is_abelian(&cyc));
    }

    #[test]
    fn arc_to_edge_elements() {
        let id = SwitchElement::identity(0, 2);
        assert!(arc_element_to_edge_element(&id).unwrap().is_identity());
        let flip = arc(&[0], &[true]);
        assert_eq!(arc_element_to_edge_element(&flip).unwrap().alpha(), &[1, 0]);
        let swap = arc(&[1, 0], &[false, false]);
        assert_eq!(arc_element_to_edge_element(&swap).unwrap().alpha(), &[1, 0, 3, 2]);
        assert!(arc_element_to_edge_element(&SwitchElement::identity(1, 1)).is_err());
    }

    #[test]
    fn restrict_projects_and_keeps_preimages() {
        let p = SwitchElement::new(vec![1, 0], vec![0], vec![true]).unwrap();
        let g = closure(2, 1, &[p]).unwrap();
        let (arcs, pre) = g.restrict(ColourKind::Arc);
        assert_eq!(arcs.order(), 2);
        for (k, e) in arcs.elements().iter().enumerate() {
            assert_eq!(&g.element(pre[k]).arc_part(), e);
        }
        let (edges, _) = g.restrict(ColourKind::Edge);
        assert_eq!((edges.m(), edges.n(), edges.order()), (2, 0, 2));
    }

    #[test]
    fn display_uses_one_based_sections() {
        let p = SwitchElement::new(vec![1, 0], vec![0], vec![true]).unwrap();
        assert_eq!(p.to_string(), "2 1 | 1 | -");
        assert_eq!(SwitchElement::identity(0, 0).to_string(), ". | . | .");
        assert_eq!(SwitchElement::identity(2, 0).to_string(), "1 2 | . | .");
    }
}
