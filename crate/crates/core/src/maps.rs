//! Simplicial maps stored as dense vertex tables.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complex::{bit, bits, Complex, Simplex, Subcomplex};
use crate::error::{Error, Result};

/// A vertex map between two complexes that carries simplices to simplices.
#[derive(Clone)]
pub struct SimplicialMap {
    domain: Arc<Complex>,
    codomain: Arc<Complex>,
    images: Vec<u8>,
}

impl PartialEq for SimplicialMap {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
            && self.domain == other.domain
            && self.codomain == other.codomain
    }
}

impl Eq for SimplicialMap {}

impl Hash for SimplicialMap {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.images.hash(state);
    }
}

impl fmt::Debug for SimplicialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (v, &w) in self.images.iter().enumerate() {
            m.entry(&self.domain.label(v), &self.codomain.label(w as usize));
        }
        m.finish()
    }
}

pub(crate) fn image_of(images: &[u8], mask: u64) -> u64 {
    bits(mask).fold(0, |m, v| m | bit(images[v] as usize))
}

/// First domain facet (canonical order) whose image is not a face.
pub(crate) fn simplicial_witness(
    domain: &Complex,
    codomain: &Complex,
    images: &[u8],
) -> Option<Simplex> {
    domain
        .facets()
        .iter()
        .copied()
        .find(|f| !codomain.is_face_mask(image_of(images, f.mask())))
}

impl SimplicialMap {
    /// Validates a vertex table given by indices.
    pub fn new(domain: &Arc<Complex>, codomain: &Arc<Complex>, images: Vec<usize>) -> Result<Self> {
        if images.len() != domain.num_vertices() {
            let missing = domain.label(images.len().min(domain.num_vertices().saturating_sub(1)));
            return Err(Error::MissingVertex(missing.to_string()));
        }
        if let Some(&bad) = images.iter().find(|&&w| w >= codomain.num_vertices()) {
            return Err(Error::UnknownVertex(bad.to_string()));
        }
        let images: Vec<u8> = images.into_iter().map(|w| w as u8).collect();
        if let Some(w) = simplicial_witness(domain, codomain, &images) {
            return Err(Error::NotSimplicial(domain.mask_labels(w.mask())));
        }
        Ok(Self::from_raw(domain, codomain, images))
    }

    pub(crate) fn from_raw(
        domain: &Arc<Complex>,
        codomain: &Arc<Complex>,
        images: Vec<u8>,
    ) -> Self {
        debug_assert_eq!(images.len(), domain.num_vertices());
        SimplicialMap {
            domain: Arc::clone(domain),
            codomain: Arc::clone(codomain),
            images,
        }
    }

    pub fn identity(k: &Arc<Complex>) -> Self {
        Self::from_raw(k, k, (0..k.num_vertices() as u8).collect())
    }

    pub(crate) fn constant_index(
        domain: &Arc<Complex>,
        codomain: &Arc<Complex>,
        v0: usize,
    ) -> Self {
        Self::from_raw(domain, codomain, vec![v0 as u8; domain.num_vertices()])
    }

    pub fn domain(&self) -> &Arc<Complex> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Complex> {
        &self.codomain
    }

    pub fn image(&self, v: usize) -> usize {
        self.images[v] as usize
    }

    pub(crate) fn raw(&self) -> &[u8] {
        &self.images
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&w| w as usize).collect()
    }

    pub fn image_simplex(&self, s: Simplex) -> Simplex {
        Simplex::from_mask(image_of(&self.images, s.mask()))
    }

    /// Image of a labelled vertex.
    pub fn apply(&self, label: &str) -> Result<&str> {
        Ok(self.codomain.label(self.image(self.domain.vertex(label)?)))
    }

    /// `(source label, target label)` pairs in domain vertex order.
    pub fn table(&self) -> Vec<(String, String)> {
        self.images
            .iter()
            .enumerate()
            .map(|(v, &w)| {
                (
                    self.domain.label(v).to_string(),
                    self.codomain.label(w as usize).to_string(),
                )
            })
            .collect()
    }

    pub fn same_ends(&self, other: &SimplicialMap) -> bool {
        self.domain == other.domain && self.codomain == other.codomain
    }

    /// Simpliciality checked on every face instead of only on facets.
    pub fn is_simplicial_on_all_faces(&self) -> bool {
        self.domain
            .faces()
            .iter()
            .all(|s| self.codomain.is_face_mask(image_of(&self.images, s.mask())))
    }

    /// Restriction to a subcomplex of the domain; the result's domain is the
    /// subcomplex with compact indices.
    pub fn restrict(&self, omega: &Subcomplex) -> Result<SimplicialMap> {
        if **omega.parent() != *self.domain {
            return Err(Error::NotASubcomplex(
                omega.facet_labels().into_iter().next().unwrap_or_default(),
            ));
        }
        let (sub, verts) = omega.to_complex();
        let images = verts.iter().map(|&v| self.images[v]).collect();
        Ok(Self::from_raw(&Arc::new(sub), &self.codomain, images))
    }

    /// Inclusion of a subcomplex into its parent.
    pub fn inclusion(omega: &Subcomplex) -> SimplicialMap {
        Self::identity(omega.parent())
            .restrict(omega)
            .expect("subcomplex of its own parent")
    }

    /// The subcomplex of the domain consisting of all faces whose
    /// image lies in `omega`, or `None` when no face qualifies.
    pub fn preimage(&self, omega: &Subcomplex) -> Result<Option<Subcomplex>> {
        if **omega.parent() != *self.codomain {
            return Err(Error::NotASubcomplex(
                omega.facet_labels().into_iter().next().unwrap_or_default(),
            ));
        }
        let masks: Vec<u64> = self
            .domain
            .faces()
            .into_iter()
            .filter(|s| omega.contains(self.image_simplex(*s)))
            .map(|s| s.mask())
            .collect();
        if masks.is_empty() {
            return Ok(None);
        }
        Ok(Some(Subcomplex::from_masks_unchecked(&self.domain, masks)))
    }
}

/// Builds a map from a `source label -> target label` table.
pub fn build_map<S: AsRef<str>>(
    domain: &Arc<Complex>,
    codomain: &Arc<Complex>,
    table: &[(S, S)],
) -> Result<SimplicialMap> {
    let mut images: Vec<Option<usize>> = vec![None; domain.num_vertices()];
    for (src, dst) in table {
        let v = domain.vertex(src.as_ref())?;
        let w = codomain.vertex(dst.as_ref())?;
        if images[v].replace(w).is_some() {
            return Err(Error::DuplicateAssignment(src.as_ref().to_string()));
        }
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(v, w)| w.ok_or_else(|| Error::MissingVertex(domain.label(v).to_string())))
        .collect::<Result<Vec<_>>>()?;
    SimplicialMap::new(domain, codomain, images)
}

/// The constant map at the labelled codomain vertex `v0`.
pub fn constant_map(
    domain: &Arc<Complex>,
    codomain: &Arc<Complex>,
    v0: &str,
) -> Result<SimplicialMap> {
    let w = codomain.vertex(v0)?;
    Ok(SimplicialMap::constant_index(domain, codomain, w))
}

/// `psi ∘ phi`.
pub fn compose(psi: &SimplicialMap, phi: &SimplicialMap) -> Result<SimplicialMap> {
    if *phi.codomain != *psi.domain {
        return Err(Error::DomainMismatch);
    }
    let images = phi.images.iter().map(|&w| psi.images[w as usize]).collect();
    Ok(SimplicialMap::from_raw(&phi.domain, &psi.codomain, images))
}

pub fn restrict_map(phi: &SimplicialMap, omega: &Subcomplex) -> Result<SimplicialMap> {
    phi.restrict(omega)
}

pub fn preimage_subcomplex(phi: &SimplicialMap, omega: &Subcomplex) -> Result<Option<Subcomplex>> {
    phi.preimage(omega)
}

/// Every vertex table `domain -> codomain` that is simplicial, in
/// lexicographic order of the tables. Intended for small map spaces.
pub fn all_maps(domain: &Arc<Complex>, codomain: &Arc<Complex>) -> Vec<SimplicialMap> {
    let n = domain.num_vertices();
    let m = codomain.num_vertices() as u8;
    let mut out = Vec::new();
    let mut images = vec![0u8; n];
    loop {
        if simplicial_witness(domain, codomain, &images).is_none() {
            out.push(SimplicialMap::from_raw(domain, codomain, images.clone()));
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            images[i] += 1;
            if images[i] < m {
                break;
            }
            images[i] = 0;
        }
    }
}

/// A uniformly-ordered random simplicial map built by randomized backtracking.
pub fn random_map<R: Rng + ?Sized>(
    domain: &Arc<Complex>,
    codomain: &Arc<Complex>,
    rng: &mut R,
) -> SimplicialMap {
    let n = domain.num_vertices();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let facets_of: Vec<Vec<u64>> = (0..n)
        .map(|v| {
            domain
                .facets()
                .iter()
                .map(|f| f.mask())
                .filter(|f| f & bit(v) != 0)
                .collect()
        })
        .collect();
    let mut images = vec![u8::MAX; n];
    let mut assigned = 0u64;
    fn go<R: Rng + ?Sized>(
        depth: usize,
        order: &[usize],
        facets_of: &[Vec<u64>],
        codomain: &Complex,
        images: &mut [u8],
        assigned: &mut u64,
        rng: &mut R,
    ) -> bool {
        let Some(&v) = order.get(depth) else {
            return true;
        };
        let mut candidates: Vec<u8> = (0..codomain.num_vertices() as u8).collect();
        candidates.shuffle(rng);
        for w in candidates {
            images[v] = w;
            *assigned |= bit(v);
            let ok = facets_of[v]
                .iter()
                .all(|&f| codomain.is_face_mask(image_of(images, f & *assigned)));
            if ok && go(depth + 1, order, facets_of, codomain, images, assigned, rng) {
                return true;
            }
            *assigned &= !bit(v);
        }
        false
    }
    let found = go(
        0,
        &order,
        &facets_of,
        codomain,
        &mut images,
        &mut assigned,
        rng,
    );
    assert!(found, "constant maps always exist");
    SimplicialMap::from_raw(domain, codomain, images)
}

/// Labelled view used by the map parser and reports.
pub fn table_lookup(phi: &SimplicialMap) -> HashMap<String, String> {
    phi.table().into_iter().collect()
}
