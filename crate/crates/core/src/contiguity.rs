//! Contiguity and contiguity classes.
//!
//! Two maps `φ, ψ: K → L` are contiguous when `φ(σ) ∪ ψ(σ)` is a face of `L`
//! for every face `σ` of `K`; it suffices to check facets. The contiguity
//! class of `φ` is the set of maps reachable through a chain of contiguous
//! steps. Deciding membership is a reachability question on the graph of
//! simplicial maps, solved here by bidirectional breadth-first search.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::collapse::core_steps;
use crate::complex::{bit, bits, components_of, full_mask, Complex, Subcomplex};
use crate::error::{Error, Result};
use crate::maps::{image_of, simplicial_witness, SimplicialMap};
use crate::par;

/// Limits for a single class decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassBudget {
    /// Maximum number of distinct maps discovered across both search sides.
    pub max_visits: usize,
    /// Maximum number of maps in a certificate chain.
    pub max_chain_len: Option<usize>,
}

impl Default for ClassBudget {
    fn default() -> Self {
        ClassBudget {
            max_visits: 1_000_000,
            max_chain_len: None,
        }
    }
}

/// A chain `φ = f0 ~ f1 ~ ... ~ fk = ψ` of pairwise contiguous maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContiguityCertificate {
    chain: Vec<SimplicialMap>,
}

impl ContiguityCertificate {
    /// Wraps a chain without checking it; see [`verify`](Self::verify).
    pub fn from_chain(chain: Vec<SimplicialMap>) -> Self {
        assert!(!chain.is_empty(), "certificate chain is empty");
        ContiguityCertificate { chain }
    }

    pub fn chain(&self) -> &[SimplicialMap] {
        &self.chain
    }

    /// Number of contiguity steps.
    pub fn steps(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn first(&self) -> &SimplicialMap {
        &self.chain[0]
    }

    pub fn last(&self) -> &SimplicialMap {
        self.chain.last().expect("nonempty chain")
    }

    /// Replays the chain: shared ends, every map simplicial, every
    /// consecutive pair contiguous.
    pub fn verify(&self) -> bool {
        let head = &self.chain[0];
        self.chain.iter().all(|f| {
            f.same_ends(head) && simplicial_witness(f.domain(), f.codomain(), f.raw()).is_none()
        }) && self
            .chain
            .windows(2)
            .all(|w| is_contiguous(&w[0], &w[1]).unwrap_or(false))
    }

    /// Restricting every map of a chain to a subcomplex keeps it a chain.
    pub fn restrict(&self, omega: &Subcomplex) -> Result<Self> {
        let chain = self
            .chain
            .iter()
            .map(|f| f.restrict(omega))
            .collect::<Result<Vec<_>>>()?;
        Ok(ContiguityCertificate { chain })
    }

    pub fn reversed(&self) -> Self {
        let mut chain = self.chain.clone();
        chain.reverse();
        ContiguityCertificate { chain }
    }

    /// Joins two chains that meet at a common map.
    pub fn concat(&self, other: &Self) -> Option<Self> {
        if self.last() != other.first() {
            return None;
        }
        let mut chain = self.chain.clone();
        chain.extend(other.chain[1..].iter().cloned());
        Some(ContiguityCertificate { chain })
    }

    /// Labelled vertex tables of the chain.
    pub fn tables(&self) -> Vec<Vec<(String, String)>> {
        self.chain.iter().map(|f| f.table()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equivalent(ContiguityCertificate),
    /// The reachable set of one side was exhausted without meeting the other.
    NotEquivalent,
    /// A budget ran out first.
    Unknown,
}

/// Outcome of a class decision together with search statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecision {
    pub verdict: Verdict,
    /// Distinct maps discovered.
    pub explored: usize,
    pub budget: ClassBudget,
}

impl ClassDecision {
    pub fn is_equivalent(&self) -> bool {
        matches!(self.verdict, Verdict::Equivalent(_))
    }

    pub fn certificate(&self) -> Option<&ContiguityCertificate> {
        match &self.verdict {
            Verdict::Equivalent(c) => Some(c),
            _ => None,
        }
    }
}

pub fn is_contiguous(phi: &SimplicialMap, psi: &SimplicialMap) -> Result<bool> {
    Ok(contiguity_witness(phi, psi)?.is_none())
}

/// First domain facet on which `phi` and `psi` fail to be contiguous.
pub fn contiguity_witness(phi: &SimplicialMap, psi: &SimplicialMap) -> Result<Option<Vec<String>>> {
    if !phi.same_ends(psi) {
        return Err(Error::DomainMismatch);
    }
    let cod = phi.codomain();
    Ok(phi
        .domain()
        .facets()
        .iter()
        .find(|f| !cod.is_face_mask(image_of(phi.raw(), f.mask()) | image_of(psi.raw(), f.mask())))
        .map(|f| phi.domain().mask_labels(f.mask())))
}

/// Every map contiguous to `phi` (itself included) in lexicographic order.
/// Fails once more than `max` maps have been produced.
pub fn contiguous_neighbors(phi: &SimplicialMap, max: usize) -> Result<Vec<SimplicialMap>> {
    let space = MapSpace::new(
        phi.domain().facet_masks(),
        phi.domain().num_vertices(),
        phi.codomain(),
        full_mask(phi.codomain().num_vertices()),
    );
    let list = space
        .neighbors(phi.raw(), max)
        .ok_or(Error::NeighborBudgetExceeded(max))?;
    Ok(list
        .into_iter()
        .map(|m| SimplicialMap::from_raw(phi.domain(), phi.codomain(), m))
        .collect())
}

/// Maps from a domain (given by compact facet masks) into the full
/// subcomplex of `cod` spanned by `allowed`.
pub(crate) struct MapSpace<'a> {
    n: usize,
    facets: Vec<u64>,
    facets_of: Vec<Vec<usize>>,
    cod: &'a Complex,
    allowed: u64,
}

impl<'a> MapSpace<'a> {
    pub fn new(facets: Vec<u64>, n: usize, cod: &'a Complex, allowed: u64) -> Self {
        let mut facets_of = vec![Vec::new(); n];
        for (i, &f) in facets.iter().enumerate() {
            for v in bits(f) {
                facets_of[v].push(i);
            }
        }
        MapSpace {
            n,
            facets,
            facets_of,
            cod,
            allowed,
        }
    }

    /// All maps contiguous to `map`, lexicographically, or `None` if there
    /// are more than `limit`.
    pub fn neighbors(&self, map: &[u8], limit: usize) -> Option<Vec<Vec<u8>>> {
        let base: Vec<u64> = self.facets.iter().map(|&f| image_of(map, f)).collect();
        let candidates: Vec<Vec<u8>> = (0..self.n)
            .map(|v| {
                bits(self.allowed)
                    .filter(|&w| {
                        self.facets_of[v]
                            .iter()
                            .all(|&f| self.cod.is_face_mask(base[f] | bit(w)))
                    })
                    .map(|w| w as u8)
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut unions = base;
        let mut cur = vec![0u8; self.n];
        let ok = self.extend(0, &candidates, &mut unions, &mut cur, &mut out, limit);
        ok.then_some(out)
    }

    fn extend(
        &self,
        v: usize,
        candidates: &[Vec<u8>],
        unions: &mut [u64],
        cur: &mut [u8],
        out: &mut Vec<Vec<u8>>,
        limit: usize,
    ) -> bool {
        if v == self.n {
            if out.len() >= limit {
                return false;
            }
            out.push(cur.to_vec());
            return true;
        }
        for &w in &candidates[v] {
            let b = bit(w as usize);
            if !self.facets_of[v]
                .iter()
                .all(|&f| self.cod.is_face_mask(unions[f] | b))
            {
                continue;
            }
            let saved: Vec<u64> = self.facets_of[v].iter().map(|&f| unions[f]).collect();
            for &f in &self.facets_of[v] {
                unions[f] |= b;
            }
            cur[v] = w;
            let ok = self.extend(v + 1, candidates, unions, cur, out, limit);
            for (&f, s) in self.facets_of[v].iter().zip(saved) {
                unions[f] = s;
            }
            if !ok {
                return false;
            }
        }
        true
    }
}

pub(crate) enum Outcome {
    Found(Vec<Vec<u8>>),
    Exhausted,
    Budget,
}

const ROOT: u32 = u32::MAX;
const CHUNK: usize = 512;

struct Side {
    index: HashMap<Vec<u8>, u32>,
    nodes: Vec<Vec<u8>>,
    parent: Vec<u32>,
    frontier: Vec<u32>,
    depth: usize,
}

impl Side {
    fn new(roots: &[Vec<u8>]) -> Self {
        let mut side = Side {
            index: HashMap::new(),
            nodes: Vec::new(),
            parent: Vec::new(),
            frontier: Vec::new(),
            depth: 0,
        };
        for r in roots {
            if !side.index.contains_key(r) {
                let id = side.push(r.clone(), ROOT);
                side.frontier.push(id);
            }
        }
        side
    }

    fn push(&mut self, node: Vec<u8>, parent: u32) -> u32 {
        let id = self.nodes.len() as u32;
        self.index.insert(node.clone(), id);
        self.nodes.push(node);
        self.parent.push(parent);
        id
    }

    /// Root-to-node path.
    fn path(&self, mut id: u32) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        while id != ROOT {
            out.push(self.nodes[id as usize].clone());
            id = self.parent[id as usize];
        }
        out.reverse();
        out
    }
}

fn join(a: &Side, ia: u32, b: &Side, ib: u32) -> Vec<Vec<u8>> {
    let mut path = a.path(ia);
    let mut back = b.path(ib);
    back.reverse();
    path.extend(back.into_iter().skip(1));
    path
}

/// Level-synchronous bidirectional search between two sets of maps. The
/// smaller frontier is expanded one full level at a time, so the first
/// meeting yields a shortest chain.
pub(crate) fn bidirectional(
    space: &MapSpace<'_>,
    sources: &[Vec<u8>],
    targets: &[Vec<u8>],
    max_visits: usize,
    max_chain: Option<usize>,
    explored: &mut usize,
) -> Outcome {
    let mut a = Side::new(sources);
    let mut b = Side::new(targets);
    *explored += a.nodes.len() + b.nodes.len();
    for (i, key) in a.nodes.iter().enumerate() {
        if let Some(&j) = b.index.get(key) {
            return Outcome::Found(join(&a, i as u32, &b, j));
        }
    }
    loop {
        if a.frontier.is_empty() || b.frontier.is_empty() {
            return Outcome::Exhausted;
        }
        if max_chain.is_some_and(|m| a.depth + b.depth + 2 > m) {
            return Outcome::Budget;
        }
        let expand_a = a.frontier.len() <= b.frontier.len();
        let (cur, other) = if expand_a { (&mut a, &b) } else { (&mut b, &a) };
        let frontier = std::mem::take(&mut cur.frontier);
        let mut next = Vec::new();
        for chunk in frontier.chunks(CHUNK) {
            let remaining = max_visits
                .saturating_sub(*explored)
                .saturating_add(cur.nodes.len())
                .max(1);
            let nodes = &cur.nodes;
            let lists = par::map(chunk, |&id| space.neighbors(&nodes[id as usize], remaining));
            for (&id, list) in chunk.iter().zip(lists) {
                let Some(list) = list else {
                    return Outcome::Budget;
                };
                for nb in list {
                    if cur.index.contains_key(&nb) {
                        continue;
                    }
                    let hit = other.index.get(&nb).copied();
                    let new_id = cur.push(nb, id);
                    *explored += 1;
                    if let Some(j) = hit {
                        return Outcome::Found(if expand_a {
                            join(cur, new_id, other, j)
                        } else {
                            join(other, j, cur, new_id)
                        });
                    }
                    if *explored > max_visits {
                        return Outcome::Budget;
                    }
                    next.push(new_id);
                }
            }
        }
        cur.frontier = next;
        cur.depth += 1;
    }
}

fn decision(
    outcome: Outcome,
    dom: &Arc<Complex>,
    cod: &Arc<Complex>,
    explored: usize,
    budget: ClassBudget,
) -> ClassDecision {
    let verdict = match outcome {
        Outcome::Found(chain) => Verdict::Equivalent(ContiguityCertificate::from_chain(
            chain
                .into_iter()
                .map(|m| SimplicialMap::from_raw(dom, cod, m))
                .collect(),
        )),
        Outcome::Exhausted => Verdict::NotEquivalent,
        Outcome::Budget => Verdict::Unknown,
    };
    ClassDecision {
        verdict,
        explored,
        budget,
    }
}

/// Decides `phi ~ psi` by exact search over all maps between the two
/// complexes. An equivalence certificate is a shortest chain.
pub fn same_contiguity_class(
    phi: &SimplicialMap,
    psi: &SimplicialMap,
    budget: &ClassBudget,
) -> Result<ClassDecision> {
    search_class(std::slice::from_ref(phi), std::slice::from_ref(psi), budget)
}

/// Decides whether some source map is in the class of some target map. The
/// certificate, if any, runs from a source to a target and is shortest.
pub fn search_class(
    sources: &[SimplicialMap],
    targets: &[SimplicialMap],
    budget: &ClassBudget,
) -> Result<ClassDecision> {
    let head = sources
        .first()
        .or(targets.first())
        .ok_or(Error::TooFewMaps { needed: 1, got: 0 })?;
    if sources.is_empty() || targets.is_empty() {
        return Err(Error::TooFewMaps {
            needed: 2,
            got: sources.len() + targets.len(),
        });
    }
    if !sources.iter().chain(targets).all(|f| f.same_ends(head)) {
        return Err(Error::DomainMismatch);
    }
    let (dom, cod) = (head.domain(), head.codomain());
    let space = MapSpace::new(
        dom.facet_masks(),
        dom.num_vertices(),
        cod,
        full_mask(cod.num_vertices()),
    );
    let src: Vec<Vec<u8>> = sources.iter().map(|f| f.raw().to_vec()).collect();
    let dst: Vec<Vec<u8>> = targets.iter().map(|f| f.raw().to_vec()).collect();
    let mut explored = 0;
    let outcome = bidirectional(
        &space,
        &src,
        &dst,
        budget.max_visits,
        budget.max_chain_len,
        &mut explored,
    );
    Ok(decision(outcome, dom, cod, explored, *budget))
}

/// Decides `phi ~ psi` after shrinking both ends to their strong-collapse
/// cores and splitting the domain into components.
///
/// The verdict always agrees with [`same_contiguity_class`] when both
/// finish, and certificates replay, but chains need not be shortest.
pub fn decide_class(
    phi: &SimplicialMap,
    psi: &SimplicialMap,
    budget: &ClassBudget,
) -> Result<ClassDecision> {
    if !phi.same_ends(psi) {
        return Err(Error::DomainMismatch);
    }
    let (dom, cod) = (phi.domain(), phi.codomain());
    let mut explored = 0;
    let outcome = reduced_chain(
        &dom.facet_masks(),
        dom.num_vertices(),
        cod,
        phi.raw(),
        psi.raw(),
        budget,
        &mut explored,
    );
    Ok(decision(outcome, dom, cod, explored, *budget))
}

/// `a, s1∘a, s2∘s1∘a, ...` for the elementary codomain retractions.
fn codomain_prefix(a: &[u8], steps: &[(usize, usize)]) -> Vec<Vec<u8>> {
    let mut out = vec![a.to_vec()];
    for &(w, w2) in steps {
        let prev = out.last().expect("nonempty");
        if prev.iter().any(|&x| x as usize == w) {
            let next = prev
                .iter()
                .map(|&x| if x as usize == w { w2 as u8 } else { x })
                .collect();
            out.push(next);
        }
    }
    out
}

/// `a∘R1, a∘R2, ...` for the composite domain retractions.
fn domain_prefix(a: &[u8], steps: &[(usize, usize)], n: usize) -> Vec<Vec<u8>> {
    let mut r: Vec<usize> = (0..n).collect();
    let mut out = vec![a.to_vec()];
    for &(v, w) in steps {
        for x in r.iter_mut() {
            if *x == v {
                *x = w;
            }
        }
        let next: Vec<u8> = r.iter().map(|&x| a[x]).collect();
        if next != *out.last().expect("nonempty") {
            out.push(next);
        }
    }
    out
}

/// Chain search between `a` and `b` on the domain given by `facets` over
/// `0..n`, using core reductions on both sides.
pub(crate) fn reduced_chain(
    facets: &[u64],
    n: usize,
    cod: &Complex,
    a: &[u8],
    b: &[u8],
    budget: &ClassBudget,
    explored: &mut usize,
) -> Outcome {
    if a == b {
        return Outcome::Found(vec![a.to_vec()]);
    }
    let cinfo = cod.core_info();
    let ca = codomain_prefix(a, &cinfo.steps);
    let cb = codomain_prefix(b, &cinfo.steps);
    let (a1, b1) = (ca.last().expect("nonempty"), cb.last().expect("nonempty"));
    let middle = if a1 == b1 {
        vec![a1.clone()]
    } else {
        let dinfo = core_steps(facets);
        let da = domain_prefix(a1, &dinfo.steps, n);
        let db = domain_prefix(b1, &dinfo.steps, n);
        let (a2, b2) = (da.last().expect("nonempty"), db.last().expect("nonempty"));
        let retract = dinfo.retraction(n);
        let mut pieces: Vec<(Vec<usize>, Vec<Vec<u8>>)> = Vec::new();
        let mut budget_hit = false;
        for comp in components_of(&dinfo.facets) {
            let verts: Vec<usize> = bits(comp).collect();
            let sa: Vec<u8> = verts.iter().map(|&v| a2[v]).collect();
            let sb: Vec<u8> = verts.iter().map(|&v| b2[v]).collect();
            if sa == sb {
                pieces.push((verts, vec![sa]));
                continue;
            }
            let mut local = [0usize; 64];
            for (i, &v) in verts.iter().enumerate() {
                local[v] = i;
            }
            let sub: Vec<u64> = dinfo
                .facets
                .iter()
                .filter(|&&f| f & comp != 0)
                .map(|&f| bits(f).fold(0, |m, v| m | bit(local[v])))
                .collect();
            let space = MapSpace::new(sub, verts.len(), cod, cinfo.kept);
            let left = budget.max_visits.saturating_sub(*explored);
            match bidirectional(&space, &[sa], &[sb], left, budget.max_chain_len, explored) {
                Outcome::Found(chain) => pieces.push((verts, chain)),
                Outcome::Exhausted => return Outcome::Exhausted,
                Outcome::Budget => budget_hit = true,
            }
        }
        if budget_hit {
            return Outcome::Budget;
        }
        let len = pieces.iter().map(|(_, c)| c.len()).max().unwrap_or(1);
        let mut pos = [usize::MAX; 64];
        for (p, (verts, _)) in pieces.iter().enumerate() {
            for (i, &v) in verts.iter().enumerate() {
                pos[v] = p << 8 | i;
            }
        }
        let lifted: Vec<Vec<u8>> = (0..len)
            .map(|t| {
                (0..n)
                    .map(|x| {
                        let r = retract[x] as usize;
                        let (p, i) = (pos[r] >> 8, pos[r] & 0xff);
                        let chain = &pieces[p].1;
                        chain[t.min(chain.len() - 1)][i]
                    })
                    .collect()
            })
            .collect();
        let mut mid = da.clone();
        mid.extend(lifted.into_iter().skip(1));
        mid.extend(db.iter().rev().skip(1).cloned());
        mid
    };
    let mut chain = ca.clone();
    chain.extend(middle);
    chain.extend(cb.iter().rev().cloned());
    chain.dedup();
    if budget.max_chain_len.is_some_and(|m| chain.len() > m) {
        return Outcome::Budget;
    }
    Outcome::Found(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{all_maps, build_map, constant_map};

    fn triangle() -> Arc<Complex> {
        Arc::new(Complex::build([["0", "1"], ["0", "2"], ["1", "2"]]).unwrap())
    }

    fn path(n: usize) -> Arc<Complex> {
        let edges: Vec<[String; 2]> = (0..n - 1)
            .map(|i| [i.to_string(), (i + 1).to_string()])
            .collect();
        Arc::new(Complex::build(edges).unwrap())
    }

    fn rotation(k: &Arc<Complex>) -> SimplicialMap {
        build_map(k, k, &[("0", "1"), ("1", "2"), ("2", "0")]).unwrap()
    }

    #[test]
    fn contiguity_is_symmetric_and_reflexive() {
        let k = triangle();
        for f in all_maps(&k, &k) {
            assert!(is_contiguous(&f, &f).unwrap());
            for g in all_maps(&k, &k) {
                assert_eq!(
                    is_contiguous(&f, &g).unwrap(),
                    is_contiguous(&g, &f).unwrap()
                );
            }
        }
    }

    #[test]
    fn identity_and_rotation_are_isolated() {
        let k = triangle();
        let id = SimplicialMap::identity(&k);
        let c0 = constant_map(&k, &k, "0").unwrap();
        assert_eq!(
            contiguity_witness(&id, &c0).unwrap(),
            Some(vec!["1".to_string(), "2".to_string()])
        );
        let n = contiguous_neighbors(&id, 100).unwrap();
        assert_eq!(n, vec![id.clone()]);
        let d = same_contiguity_class(&id, &c0, &ClassBudget::default()).unwrap();
        assert_eq!(d.verdict, Verdict::NotEquivalent);
        let d = same_contiguity_class(&id, &rotation(&k), &ClassBudget::default()).unwrap();
        assert_eq!(d.verdict, Verdict::NotEquivalent);
    }

    #[test]
    fn neighbors_match_brute_force() {
        let k = path(3);
        let l = triangle();
        for f in all_maps(&k, &l) {
            let expected: Vec<SimplicialMap> = all_maps(&k, &l)
                .into_iter()
                .filter(|g| is_contiguous(&f, g).unwrap())
                .collect();
            assert_eq!(contiguous_neighbors(&f, 1000).unwrap(), expected);
        }
        let f = all_maps(&k, &l).remove(0);
        assert_eq!(
            contiguous_neighbors(&f, 1),
            Err(Error::NeighborBudgetExceeded(1))
        );
    }

    #[test]
    fn constants_on_a_path_are_connected() {
        let k = path(4);
        let c0 = constant_map(&k, &k, "0").unwrap();
        let c3 = constant_map(&k, &k, "3").unwrap();
        let d = same_contiguity_class(&c0, &c3, &ClassBudget::default()).unwrap();
        let cert = d.certificate().unwrap();
        assert!(cert.verify());
        assert_eq!(cert.first(), &c0);
        assert_eq!(cert.last(), &c3);
        assert_eq!(cert.steps(), 3);
        let id = SimplicialMap::identity(&k);
        let d = decide_class(&id, &c3, &ClassBudget::default()).unwrap();
        assert!(d.certificate().unwrap().verify());
    }

    #[test]
    fn chain_length_budget() {
        let k = path(4);
        let c0 = constant_map(&k, &k, "0").unwrap();
        let c3 = constant_map(&k, &k, "3").unwrap();
        let tight = ClassBudget {
            max_visits: 1000,
            max_chain_len: Some(3),
        };
        assert_eq!(
            same_contiguity_class(&c0, &c3, &tight).unwrap().verdict,
            Verdict::Unknown
        );
        let tiny = ClassBudget {
            max_visits: 2,
            max_chain_len: None,
        };
        assert_eq!(
            same_contiguity_class(&c0, &c3, &tiny).unwrap().verdict,
            Verdict::Unknown
        );
    }

    #[test]
    fn reduced_agrees_with_exact_search() {
        let doms = [
            path(3),
            triangle(),
            Arc::new(Complex::build(vec![vec!["0", "1", "2"], vec!["2", "3"]]).unwrap()),
        ];
        let cods = [
            triangle(),
            Arc::new(Complex::build([["0", "1"], ["1", "2"], ["2", "0"], ["2", "3"]]).unwrap()),
        ];
        let budget = ClassBudget::default();
        for k in &doms {
            for l in &cods {
                let maps = all_maps(k, l);
                for f in maps.iter().step_by(3) {
                    for g in maps.iter().step_by(5) {
                        let exact = same_contiguity_class(f, g, &budget).unwrap();
                        let reduced = decide_class(f, g, &budget).unwrap();
                        assert_eq!(
                            exact.is_equivalent(),
                            reduced.is_equivalent(),
                            "{f:?} {g:?}"
                        );
                        if let Some(c) = reduced.certificate() {
                            assert!(c.verify());
                            assert_eq!(c.first(), f);
                            assert_eq!(c.last(), g);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn certificate_operations() {
        let k = path(3);
        let c0 = constant_map(&k, &k, "0").unwrap();
        let c2 = constant_map(&k, &k, "2").unwrap();
        let cert = same_contiguity_class(&c0, &c2, &ClassBudget::default())
            .unwrap()
            .certificate()
            .unwrap()
            .clone();
        let back = cert.reversed();
        assert!(back.verify());
        let loop_ = cert.concat(&back).unwrap();
        assert!(loop_.verify());
        assert_eq!(loop_.first(), loop_.last());
        assert!(cert.concat(&cert).is_none());
        let omega = Subcomplex::new(&k, [k.simplex_of(&["0", "1"]).unwrap()]).unwrap();
        assert!(cert.restrict(&omega).unwrap().verify());
    }

    #[test]
    fn multi_target_search() {
        let k = triangle();
        let id = SimplicialMap::identity(&k);
        let consts: Vec<SimplicialMap> = ["0", "1", "2"]
            .iter()
            .map(|v| constant_map(&k, &k, v).unwrap())
            .collect();
        let d = search_class(&[id], &consts, &ClassBudget::default()).unwrap();
        assert_eq!(d.verdict, Verdict::NotEquivalent);
        let p = path(3);
        let inc = build_map(&p, &k, &[("0", "0"), ("1", "1"), ("2", "2")]).unwrap();
        let targets: Vec<SimplicialMap> = ["2"]
            .iter()
            .map(|v| constant_map(&p, &k, v).unwrap())
            .collect();
        let d = search_class(&[inc], &targets, &ClassBudget::default()).unwrap();
        assert!(d.certificate().unwrap().verify());
    }
}
