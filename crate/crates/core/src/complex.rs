//! Finite abstract simplicial complexes stored as facet lists of vertex bit masks.
//!
//! Vertices carry a user-facing label and a dense index `0..n`. A face is a
//! nonempty set of vertex indices encoded in a `u64`, so a complex has at most
//! [`MAX_VERTICES`] vertices. The facet list is the source of truth; the full
//! face list and a membership table are materialized lazily.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::collapse::{core_steps, CoreSteps};
use crate::error::{Error, Result};

/// Hard cap on the number of vertices of any complex.
pub const MAX_VERTICES: usize = 64;

/// Complexes whose facets span at most this many faces (counted with
/// multiplicity) get a hashed membership table.
const FACE_TABLE_LIMIT: u64 = 1 << 18;

/// Iterates the set bits of a mask in increasing order.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Iterates the nonempty submasks of `mask`.
pub(crate) fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let n = (cur - 1) & mask;
            if n == 0 {
                None
            } else {
                Some(n)
            }
        };
        (cur != 0).then_some(cur)
    })
}

pub(crate) fn bit(i: usize) -> u64 {
    1u64 << i
}

/// Graded lexicographic order on vertex sets: smaller sets first, then by the
/// sorted vertex sequence.
pub(crate) fn graded_lex(a: u64, b: u64) -> Ordering {
    a.count_ones().cmp(&b.count_ones()).then_with(|| {
        let (mut a, mut b) = (a, b);
        loop {
            match (a == 0, b == 0) {
                (true, true) => return Ordering::Equal,
                (true, false) => return Ordering::Less,
                (false, true) => return Ordering::Greater,
                _ => {}
            }
            let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
            if x != y {
                return x.cmp(&y);
            }
            a &= a - 1;
            b &= b - 1;
        }
    })
}

/// Keeps the inclusion-maximal masks, deduplicated and in canonical order.
pub(crate) fn maximal_masks(mut masks: Vec<u64>) -> Vec<u64> {
    masks.retain(|&m| m != 0);
    masks.sort_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
    masks.dedup();
    let mut kept: Vec<u64> = Vec::with_capacity(masks.len());
    for m in masks {
        if !kept.iter().any(|&k| m & !k == 0) {
            kept.push(m);
        }
    }
    kept.sort_by(|a, b| graded_lex(*a, *b));
    kept
}

/// Orders labels numerically when both parse as integers, otherwise
/// lexicographically (numbers before words).
pub fn label_order(a: &str, b: &str) -> Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        _ => a.cmp(b),
    }
}

/// A nonempty set of vertex indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Simplex(u64);

impl Simplex {
    /// Panics on an empty mask; simplices are nonempty by construction.
    pub fn from_mask(mask: u64) -> Self {
        assert!(mask != 0, "empty simplex");
        Simplex(mask)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Self::from_mask(indices.into_iter().fold(0, |m, i| m | bit(i)))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Always false; present for API symmetry with `len`.
    pub fn is_empty(self) -> bool {
        false
    }

    pub fn dimension(self) -> usize {
        self.len() - 1
    }

    pub fn vertices(self) -> impl Iterator<Item = usize> {
        bits(self.0)
    }

    pub fn contains_vertex(self, v: usize) -> bool {
        self.0 & bit(v) != 0
    }

    pub fn is_face_of(self, other: Simplex) -> bool {
        self.0 & !other.0 == 0
    }

    /// All nonempty faces, this simplex included.
    pub fn faces(self) -> impl Iterator<Item = Simplex> {
        submasks(self.0).map(Simplex)
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        graded_lex(self.0, other.0)
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.vertices()).finish()
    }
}

enum FaceLookup {
    Table {
        list: Vec<Simplex>,
        set: HashSet<u64>,
    },
    Scan,
}

/// A finite abstract simplicial complex.
pub struct Complex {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    facets: Vec<Simplex>,
    faces: OnceLock<FaceLookup>,
    core: OnceLock<CoreSteps>,
}

impl Clone for Complex {
    fn clone(&self) -> Self {
        Complex {
            labels: self.labels.clone(),
            index: self.index.clone(),
            facets: self.facets.clone(),
            faces: OnceLock::new(),
            core: OnceLock::new(),
        }
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || (self.labels == other.labels && self.facets == other.facets)
    }
}

impl Eq for Complex {}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let facets: Vec<Vec<&str>> = self
            .facets
            .iter()
            .map(|s| self.simplex_labels(*s))
            .collect();
        f.debug_struct("Complex")
            .field("vertices", &self.labels)
            .field("facets", &facets)
            .finish()
    }
}

impl Complex {
    /// Builds a complex from facets given as label sets. Vertices are indexed
    /// by [`label_order`]; non-maximal input faces are absorbed.
    pub fn build<F, L>(facets: F) -> Result<Self>
    where
        F: IntoIterator,
        F::Item: IntoIterator<Item = L>,
        L: AsRef<str>,
    {
        let raw: Vec<Vec<String>> = facets
            .into_iter()
            .map(|f| f.into_iter().map(|l| l.as_ref().to_string()).collect())
            .collect();
        if raw.is_empty() {
            return Err(Error::EmptyComplex);
        }
        if let Some(index) = raw.iter().position(|f| f.is_empty()) {
            return Err(Error::EmptyFacet { index });
        }
        let mut labels: Vec<String> = raw.iter().flatten().cloned().collect();
        labels.sort_by(|a, b| label_order(a, b));
        labels.dedup();
        if labels.len() > MAX_VERTICES {
            return Err(Error::VertexBudgetExceeded {
                needed: labels.len() as u128,
                limit: MAX_VERTICES,
            });
        }
        let index: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let masks = raw
            .iter()
            .map(|f| f.iter().fold(0u64, |m, l| m | bit(index[l.as_str()])))
            .collect();
        Self::from_masks(labels, masks)
    }

    /// Builds a complex over an explicit vertex order. Every vertex must lie
    /// in some facet.
    pub(crate) fn from_masks(labels: Vec<String>, masks: Vec<u64>) -> Result<Self> {
        if labels.len() > MAX_VERTICES {
            return Err(Error::VertexBudgetExceeded {
                needed: labels.len() as u128,
                limit: MAX_VERTICES,
            });
        }
        let facets = maximal_masks(masks);
        if facets.is_empty() {
            return Err(Error::EmptyComplex);
        }
        let covered = facets.iter().fold(0, |m, f| m | f);
        let all = full_mask(labels.len());
        if covered != all || facets.iter().any(|f| f & !all != 0) {
            let stray = bits(all & !covered).next().map(|i| labels[i].clone());
            return Err(Error::UnknownVertex(stray.unwrap_or_default()));
        }
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Ok(Complex {
            labels,
            index,
            facets: facets.into_iter().map(Simplex).collect(),
            faces: OnceLock::new(),
            core: OnceLock::new(),
        })
    }

    /// The full simplex on the given labels.
    pub fn simplex<L: AsRef<str>>(labels: &[L]) -> Result<Self> {
        Self::build([labels.iter().map(|l| l.as_ref())])
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn vertex(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub(crate) fn facet_masks(&self) -> Vec<u64> {
        self.facets.iter().map(|f| f.0).collect()
    }

    pub fn vertex_mask(&self) -> u64 {
        full_mask(self.labels.len())
    }

    pub fn dimension(&self) -> usize {
        self.facets.iter().map(|f| f.dimension()).max().unwrap_or(0)
    }

    fn lookup(&self) -> &FaceLookup {
        self.faces.get_or_init(|| {
            let weight: u64 = self
                .facets
                .iter()
                .map(|f| 1u64.checked_shl(f.len() as u32).unwrap_or(u64::MAX))
                .fold(0, u64::saturating_add);
            if weight > FACE_TABLE_LIMIT {
                return FaceLookup::Scan;
            }
            let mut set = HashSet::new();
            for f in &self.facets {
                set.extend(submasks(f.0));
            }
            let mut list: Vec<Simplex> = set.iter().map(|&m| Simplex(m)).collect();
            list.sort();
            FaceLookup::Table { list, set }
        })
    }

    /// Every face of the complex in canonical order.
    ///
    /// Complexes with very large facets are enumerated on the fly.
    pub fn faces(&self) -> Vec<Simplex> {
        match self.lookup() {
            FaceLookup::Table { list, .. } => list.clone(),
            FaceLookup::Scan => {
                let set: HashSet<u64> = self.facets.iter().flat_map(|f| submasks(f.0)).collect();
                let mut list: Vec<Simplex> = set.into_iter().map(Simplex).collect();
                list.sort();
                list
            }
        }
    }

    pub fn num_faces(&self) -> usize {
        match self.lookup() {
            FaceLookup::Table { list, .. } => list.len(),
            FaceLookup::Scan => self.faces().len(),
        }
    }

    /// Membership test for an arbitrary vertex mask. The empty mask is not a face.
    pub fn is_face_mask(&self, mask: u64) -> bool {
        if mask == 0 {
            return false;
        }
        match self.lookup() {
            FaceLookup::Table { set, .. } => set.contains(&mask),
            FaceLookup::Scan => self.facets.iter().any(|f| mask & !f.0 == 0),
        }
    }

    pub fn contains(&self, s: Simplex) -> bool {
        self.is_face_mask(s.0)
    }

    pub fn simplex_labels(&self, s: Simplex) -> Vec<&str> {
        s.vertices().map(|v| self.labels[v].as_str()).collect()
    }

    pub(crate) fn mask_labels(&self, mask: u64) -> Vec<String> {
        bits(mask).map(|v| self.labels[v].clone()).collect()
    }

    /// Looks up a simplex by its labels.
    pub fn simplex_of<L: AsRef<str>>(&self, labels: &[L]) -> Result<Simplex> {
        let mut mask = 0;
        for l in labels {
            mask |= bit(self.vertex(l.as_ref())?);
        }
        if mask == 0 {
            return Err(Error::EmptyFacet { index: 0 });
        }
        Ok(Simplex(mask))
    }

    /// Vertex masks of the edge-path components, in order of their smallest vertex.
    pub fn components(&self) -> Vec<u64> {
        components_of(&self.facet_masks())
    }

    pub fn is_edge_path_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Canonical strong-collapse data, computed once.
    pub(crate) fn core_info(&self) -> &CoreSteps {
        self.core.get_or_init(|| core_steps(&self.facet_masks()))
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Connected components of the 1-skeleton spanned by `facets`.
pub(crate) fn components_of(facets: &[u64]) -> Vec<u64> {
    let mut comps: Vec<u64> = Vec::new();
    for &f in facets {
        let mut merged = f;
        comps.retain(|&c| {
            if c & merged != 0 {
                merged |= c;
                false
            } else {
                true
            }
        });
        comps.push(merged);
    }
    comps.sort_by_key(|c| c.trailing_zeros());
    comps
}

/// A subcomplex of a parent complex, given by an antichain of parent simplices.
#[derive(Clone, PartialEq, Eq)]
pub struct Subcomplex {
    parent: Arc<Complex>,
    facets: Vec<Simplex>,
}

impl fmt::Debug for Subcomplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let facets: Vec<Vec<&str>> = self
            .facets
            .iter()
            .map(|s| self.parent.simplex_labels(*s))
            .collect();
        f.debug_tuple("Subcomplex").field(&facets).finish()
    }
}

impl Subcomplex {
    /// The downward closure of `simplices` inside `parent`.
    pub fn new<I: IntoIterator<Item = Simplex>>(
        parent: &Arc<Complex>,
        simplices: I,
    ) -> Result<Self> {
        let mut masks = Vec::new();
        for s in simplices {
            if !parent.contains(s) || s.0 & !parent.vertex_mask() != 0 {
                return Err(Error::NotASubcomplex(
                    parent.mask_labels(s.0 & parent.vertex_mask()),
                ));
            }
            masks.push(s.0);
        }
        let facets = maximal_masks(masks);
        if facets.is_empty() {
            return Err(Error::EmptyComplex);
        }
        Ok(Subcomplex {
            parent: Arc::clone(parent),
            facets: facets.into_iter().map(Simplex).collect(),
        })
    }

    pub(crate) fn from_masks_unchecked(parent: &Arc<Complex>, masks: Vec<u64>) -> Self {
        Subcomplex {
            parent: Arc::clone(parent),
            facets: maximal_masks(masks).into_iter().map(Simplex).collect(),
        }
    }

    /// The whole parent viewed as a subcomplex of itself.
    pub fn full(parent: &Arc<Complex>) -> Self {
        Subcomplex {
            parent: Arc::clone(parent),
            facets: parent.facets.clone(),
        }
    }

    pub fn parent(&self) -> &Arc<Complex> {
        &self.parent
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn vertex_mask(&self) -> u64 {
        self.facets.iter().fold(0, |m, f| m | f.0)
    }

    pub fn contains(&self, s: Simplex) -> bool {
        self.facets.iter().any(|f| s.is_face_of(*f))
    }

    pub fn faces(&self) -> Vec<Simplex> {
        let set: HashSet<u64> = self.facets.iter().flat_map(|f| submasks(f.0)).collect();
        let mut list: Vec<Simplex> = set.into_iter().map(Simplex).collect();
        list.sort();
        list
    }

    pub fn is_full(&self) -> bool {
        self.facets == self.parent.facets
    }

    pub fn is_subcomplex_of(&self, other: &Subcomplex) -> bool {
        self.facets.iter().all(|f| other.contains(*f))
    }

    /// Facets as label lists, for reports.
    pub fn facet_labels(&self) -> Vec<Vec<String>> {
        self.facets
            .iter()
            .map(|f| self.parent.mask_labels(f.0))
            .collect()
    }

    /// The subcomplex as a standalone complex with compact vertex indices
    /// (parent order preserved), plus the parent index of each new vertex.
    pub fn to_complex(&self) -> (Complex, Vec<usize>) {
        let verts: Vec<usize> = bits(self.vertex_mask()).collect();
        let mut compact = [0usize; 64];
        for (i, &v) in verts.iter().enumerate() {
            compact[v] = i;
        }
        let labels = verts
            .iter()
            .map(|&v| self.parent.labels[v].clone())
            .collect();
        let masks = self
            .facets
            .iter()
            .map(|f| f.vertices().fold(0u64, |m, v| m | bit(compact[v])))
            .collect();
        let complex = Complex::from_masks(labels, masks).expect("subcomplex is a valid complex");
        (complex, verts)
    }
}

/// Induced subcomplex on the labelled vertex set `vertices`.
pub fn restrict_complex<L: AsRef<str>>(k: &Arc<Complex>, vertices: &[L]) -> Result<Subcomplex> {
    let mut s = 0u64;
    for l in vertices {
        s |= bit(k.vertex(l.as_ref())?);
    }
    induced_subcomplex(k, s)
}

pub(crate) fn induced_subcomplex(k: &Arc<Complex>, s: u64) -> Result<Subcomplex> {
    let masks: Vec<u64> = k.facets.iter().map(|f| f.0 & s).collect();
    let facets = maximal_masks(masks);
    if facets.is_empty() {
        return Err(Error::EmptyComplex);
    }
    Ok(Subcomplex {
        parent: Arc::clone(k),
        facets: facets.into_iter().map(Simplex).collect(),
    })
}

/// Candidate pool for covering pieces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Induced subcomplexes `K[S]` for nonempty vertex sets `S`.
    Induced,
    /// Every nonempty subcomplex.
    All,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Induced => "induced",
            Mode::All => "all",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "induced" => Ok(Mode::Induced),
            "all" => Ok(Mode::All),
            other => Err(format!(
                "unknown mode `{other}` (expected `induced` or `all`)"
            )),
        }
    }
}

/// Streams the nonempty subcomplexes of `k` in the given mode. After
/// `max_count` items the stream yields one `EnumerationBudgetExceeded` error
/// if more items remain, then ends.
pub fn enumerate_subcomplexes(k: &Arc<Complex>, mode: Mode, max_count: usize) -> SubcomplexIter {
    let state = match mode {
        Mode::Induced => EnumState::Induced { next: 1 },
        Mode::All => EnumState::Antichains {
            faces: k.faces().into_iter().map(|s| s.0).collect(),
            stack: vec![0],
            chosen: Vec::new(),
        },
    };
    SubcomplexIter {
        parent: Arc::clone(k),
        state,
        emitted: 0,
        max_count,
        done: false,
    }
}

enum EnumState {
    Induced {
        next: u128,
    },
    Antichains {
        faces: Vec<u64>,
        stack: Vec<usize>,
        chosen: Vec<usize>,
    },
}

pub struct SubcomplexIter {
    parent: Arc<Complex>,
    state: EnumState,
    emitted: usize,
    max_count: usize,
    done: bool,
}

impl SubcomplexIter {
    fn advance(&mut self) -> Option<Vec<u64>> {
        match &mut self.state {
            EnumState::Induced { next } => {
                let n = self.parent.num_vertices();
                if *next >= (1u128 << n) {
                    return None;
                }
                let s = *next as u64;
                *next += 1;
                Some(self.parent.facets.iter().map(|f| f.0 & s).collect())
            }
            EnumState::Antichains {
                faces,
                stack,
                chosen,
            } => loop {
                let top = stack.last_mut()?;
                let mut j = *top;
                while j < faces.len()
                    && chosen.iter().any(|&c| {
                        let (a, b) = (faces[c], faces[j]);
                        a & !b == 0 || b & !a == 0
                    })
                {
                    j += 1;
                }
                if j >= faces.len() {
                    stack.pop();
                    chosen.pop();
                    continue;
                }
                *top = j + 1;
                chosen.push(j);
                stack.push(j + 1);
                return Some(chosen.iter().map(|&c| faces[c]).collect());
            },
        }
    }
}

impl Iterator for SubcomplexIter {
    type Item = Result<Subcomplex>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let masks = self.advance();
        let Some(masks) = masks else {
            self.done = true;
            return None;
        };
        if self.emitted >= self.max_count {
            self.done = true;
            return Some(Err(Error::EnumerationBudgetExceeded(self.max_count)));
        }
        self.emitted += 1;
        Some(Ok(Subcomplex::from_masks_unchecked(&self.parent, masks)))
    }
}
