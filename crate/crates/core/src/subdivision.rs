//! Barycentric subdivision.
//!
//! The vertices of `sd K` are the faces of `K`, and its simplices are the
//! chains `σ1 ⊂ ... ⊂ σq`. A map `φ` induces `sd φ` by `σ ↦ φ(σ)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::complex::{bit, bits, maximal_masks, Complex, MAX_VERTICES};
use crate::error::{Error, Result};
use crate::maps::{image_of, SimplicialMap};

#[derive(Debug, Clone)]
pub struct SubdividedComplex {
    base: Arc<Complex>,
    underlying: Arc<Complex>,
    faces: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl SubdividedComplex {
    pub fn base(&self) -> &Arc<Complex> {
        &self.base
    }

    pub fn complex(&self) -> &Arc<Complex> {
        &self.underlying
    }

    /// The face of the base complex represented by a vertex of `sd K`.
    pub fn face_of(&self, v: usize) -> u64 {
        self.faces[v]
    }

    /// The vertex of `sd K` representing a face of the base complex.
    pub fn vertex_of_face(&self, face: u64) -> Option<usize> {
        self.index.get(&face).copied()
    }
}

fn face_label(k: &Complex, face: u64) -> String {
    format!("{{{}}}", k.mask_labels(face).join(","))
}

/// Full flags of a facet, as chains of faces (smallest first).
fn flags(facet: u64) -> Vec<Vec<u64>> {
    if facet.count_ones() == 1 {
        return vec![vec![facet]];
    }
    let mut out = Vec::new();
    for v in bits(facet) {
        for mut chain in flags(facet & !bit(v)) {
            chain.push(facet);
            out.push(chain);
        }
    }
    out
}

pub fn barycentric_subdivision(k: &Arc<Complex>) -> Result<SubdividedComplex> {
    let needed = k.num_faces();
    if needed > MAX_VERTICES {
        return Err(Error::VertexBudgetExceeded {
            needed: needed as u128,
            limit: MAX_VERTICES,
        });
    }
    let faces: Vec<u64> = k.faces().into_iter().map(|s| s.mask()).collect();
    let index: HashMap<u64, usize> = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let labels = faces.iter().map(|&f| face_label(k, f)).collect();
    let masks: Vec<u64> = k
        .facet_masks()
        .into_iter()
        .flat_map(flags)
        .map(|chain| chain.iter().fold(0, |m, f| m | bit(index[f])))
        .collect();
    let underlying = Complex::from_masks(labels, maximal_masks(masks))?;
    Ok(SubdividedComplex {
        base: Arc::clone(k),
        underlying: Arc::new(underlying),
        faces,
        index,
    })
}

/// `sd φ` between given subdivisions of the domain and codomain of `φ`.
pub fn subdivide_map_between(
    phi: &SimplicialMap,
    domain: &SubdividedComplex,
    codomain: &SubdividedComplex,
) -> Result<SimplicialMap> {
    if *domain.base != **phi.domain() || *codomain.base != **phi.codomain() {
        return Err(Error::DomainMismatch);
    }
    let images = domain
        .faces
        .iter()
        .map(|&f| codomain.index[&image_of(phi.raw(), f)] as u8)
        .collect();
    Ok(SimplicialMap::from_raw(
        &domain.underlying,
        &codomain.underlying,
        images,
    ))
}

/// `sd φ: sd K → sd K'`, subdividing both ends.
pub fn subdivide_map(phi: &SimplicialMap) -> Result<SimplicialMap> {
    let dom = barycentric_subdivision(phi.domain())?;
    if Arc::ptr_eq(phi.domain(), phi.codomain()) || phi.domain() == phi.codomain() {
        return subdivide_map_between(phi, &dom, &dom);
    }
    let cod = barycentric_subdivision(phi.codomain())?;
    subdivide_map_between(phi, &dom, &cod)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{all_maps, compose, constant_map, simplicial_witness};

    fn triangle() -> Arc<Complex> {
        Arc::new(Complex::build([["0", "1"], ["0", "2"], ["1", "2"]]).unwrap())
    }

    #[test]
    fn small_cases() {
        let pt = Arc::new(Complex::build([["p"]]).unwrap());
        assert_eq!(
            barycentric_subdivision(&pt)
                .unwrap()
                .complex()
                .num_vertices(),
            1
        );
        let edge = Arc::new(Complex::build([["0", "1"]]).unwrap());
        let sd = barycentric_subdivision(&edge).unwrap();
        let c = sd.complex();
        assert_eq!(c.labels(), &["{0}", "{1}", "{0,1}"]);
        let facets: Vec<Vec<&str>> = c.facets().iter().map(|f| c.simplex_labels(*f)).collect();
        assert_eq!(facets, vec![vec!["{0}", "{0,1}"], vec!["{1}", "{0,1}"]]);
    }

    #[test]
    fn triangle_becomes_hexagon() {
        let sd = barycentric_subdivision(&triangle()).unwrap();
        let c = sd.complex();
        assert_eq!(c.num_vertices(), 6);
        assert_eq!(c.facets().len(), 6);
        assert_eq!(c.dimension(), 1);
        assert!(c.is_edge_path_connected());
        for v in 0..6 {
            assert_eq!(
                c.facets().iter().filter(|f| f.contains_vertex(v)).count(),
                2
            );
        }
    }

    #[test]
    fn filled_triangle_counts() {
        let k = Arc::new(Complex::build([["0", "1", "2"]]).unwrap());
        let sd = barycentric_subdivision(&k).unwrap();
        assert_eq!(sd.complex().num_vertices(), 7);
        assert_eq!(sd.complex().facets().len(), 6);
        // chains in the face poset of a 2-simplex: 7 + 12 + 6
        assert_eq!(sd.complex().num_faces(), 25);
    }

    #[test]
    fn functoriality() {
        let k = triangle();
        let sd = barycentric_subdivision(&k).unwrap();
        let id = SimplicialMap::identity(&k);
        assert_eq!(
            subdivide_map(&id).unwrap(),
            SimplicialMap::identity(sd.complex())
        );
        let maps = all_maps(&k, &k);
        for f in &maps {
            let sf = subdivide_map(f).unwrap();
            assert!(simplicial_witness(sf.domain(), sf.codomain(), sf.raw()).is_none());
            for g in &maps {
                let lhs = subdivide_map(&compose(f, g).unwrap()).unwrap();
                let rhs = compose(&sf, &subdivide_map(g).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        let c0 = subdivide_map(&constant_map(&k, &k, "0").unwrap()).unwrap();
        assert!(c0.table().iter().all(|(_, b)| b == "{0}"));
    }

    #[test]
    fn face_budget() {
        let k = Arc::new(Complex::simplex(&["0", "1", "2", "3", "4", "5", "6"]).unwrap());
        assert_eq!(
            barycentric_subdivision(&k).unwrap_err(),
            Error::VertexBudgetExceeded {
                needed: 127,
                limit: 64
            }
        );
    }
}
