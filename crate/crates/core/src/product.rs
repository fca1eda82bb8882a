//! Categorical products, powers and the standard maps into them.
//!
//! A vertex set of `K1 × ... × Kn` is a face iff each coordinate projection
//! is a face of its factor, so the facets are exactly the products of
//! factor facets. Vertices are tuples in mixed radix, first coordinate most
//! significant, labelled `(a,b,...)`.
//!
//! Maps into a power are also available in factored form ([`ProductMap`]),
//! which never builds the power. Contiguity in a categorical product is
//! coordinatewise, so class questions about factored maps reduce to class
//! questions about their coordinates.

use std::sync::Arc;

use crate::complex::{bit, bits, maximal_masks, Complex, MAX_VERTICES};
use crate::error::{Error, Result};
use crate::maps::SimplicialMap;
use crate::par;

/// A categorical product together with its factors.
#[derive(Debug, Clone)]
pub struct ProductComplex {
    factors: Vec<Arc<Complex>>,
    underlying: Arc<Complex>,
    radix: Vec<usize>,
}

impl ProductComplex {
    pub fn factors(&self) -> &[Arc<Complex>] {
        &self.factors
    }

    pub fn complex(&self) -> &Arc<Complex> {
        &self.underlying
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    /// Coordinates of a product vertex.
    pub fn coords(&self, mut v: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for i in (0..self.factors.len()).rev() {
            out[i] = v % self.radix[i];
            v /= self.radix[i];
        }
        out
    }

    /// Product vertex with the given coordinates.
    pub fn vertex_of(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.radix)
            .fold(0, |acc, (&c, &r)| acc * r + c)
    }

    /// Face test by the projection criterion, without the face table.
    pub fn is_face_by_projections(&self, mask: u64) -> bool {
        if mask == 0 {
            return false;
        }
        (0..self.arity()).all(|i| {
            let proj = bits(mask).fold(0, |m, v| m | bit(self.coords(v)[i]));
            self.factors[i].is_face_mask(proj)
        })
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.arity() {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: self.arity(),
            });
        }
        Ok(())
    }
}

pub(crate) fn tuple_label<S: AsRef<str>>(parts: &[S]) -> String {
    let inner: Vec<&str> = parts.iter().map(|s| s.as_ref()).collect();
    format!("({})", inner.join(","))
}

/// The categorical product of a list of complexes.
pub fn categorical_product_of(factors: &[Arc<Complex>]) -> Result<ProductComplex> {
    if factors.is_empty() {
        return Err(Error::IndexOutOfRange { index: 0, max: 0 });
    }
    let radix: Vec<usize> = factors.iter().map(|k| k.num_vertices()).collect();
    let needed = radix
        .iter()
        .try_fold(1u128, |acc, &r| acc.checked_mul(r as u128))
        .unwrap_or(u128::MAX);
    if needed > MAX_VERTICES as u128 {
        return Err(Error::VertexBudgetExceeded {
            needed,
            limit: MAX_VERTICES,
        });
    }
    let total = needed as usize;
    let shell = ProductComplex {
        factors: factors.to_vec(),
        underlying: Arc::new(Complex::build([["_"]])?),
        radix: radix.clone(),
    };
    let labels: Vec<String> = (0..total)
        .map(|v| {
            let c = shell.coords(v);
            let parts: Vec<&str> = c.iter().zip(factors).map(|(&x, k)| k.label(x)).collect();
            tuple_label(&parts)
        })
        .collect();
    let facet_counts: Vec<usize> = factors.iter().map(|k| k.facets().len()).collect();
    let combos: usize = facet_counts.iter().product();
    let masks: Vec<u64> = par::map_range(combos, |mut c| {
        let mut pick = vec![0; factors.len()];
        for i in (0..factors.len()).rev() {
            pick[i] = c % facet_counts[i];
            c /= facet_counts[i];
        }
        let mut verts: Vec<Vec<usize>> = vec![Vec::new()];
        for (i, k) in factors.iter().enumerate() {
            let f = k.facets()[pick[i]];
            verts = verts
                .into_iter()
                .flat_map(|prefix| {
                    f.vertices().map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        verts.iter().fold(0u64, |m, c| m | bit(shell.vertex_of(c)))
    });
    let underlying = Complex::from_masks(labels, maximal_masks(masks))?;
    Ok(ProductComplex {
        factors: factors.to_vec(),
        underlying: Arc::new(underlying),
        radix,
    })
}

pub fn categorical_product(k: &Arc<Complex>, l: &Arc<Complex>) -> Result<ProductComplex> {
    categorical_product_of(&[Arc::clone(k), Arc::clone(l)])
}

/// `K^n` for `n >= 1`.
pub fn categorical_power(k: &Arc<Complex>, n: usize) -> Result<ProductComplex> {
    if n == 0 {
        return Err(Error::IndexOutOfRange { index: 0, max: 0 });
    }
    categorical_product_of(&vec![Arc::clone(k); n])
}

/// The `i`-th coordinate map, `1 <= i <= n`.
pub fn projection(p: &ProductComplex, i: usize) -> Result<SimplicialMap> {
    p.check_index(i)?;
    let images = (0..p.underlying.num_vertices())
        .map(|v| p.coords(v)[i - 1] as u8)
        .collect();
    Ok(SimplicialMap::from_raw(
        &p.underlying,
        &p.factors[i - 1],
        images,
    ))
}

/// All projections of a product, in order.
pub fn projections(p: &ProductComplex) -> Vec<SimplicialMap> {
    (1..=p.arity())
        .map(|i| projection(p, i).expect("index in range"))
        .collect()
}

/// A map into a categorical product given by its coordinate maps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductMap {
    coords: Vec<SimplicialMap>,
}

impl ProductMap {
    /// All coordinates must share a domain.
    pub fn new(coords: Vec<SimplicialMap>) -> Result<Self> {
        let first = coords
            .first()
            .ok_or(Error::TooFewMaps { needed: 1, got: 0 })?;
        if coords.iter().any(|c| c.domain() != first.domain()) {
            return Err(Error::DomainMismatch);
        }
        Ok(ProductMap { coords })
    }

    pub fn domain(&self) -> &Arc<Complex> {
        self.coords[0].domain()
    }

    pub fn coords(&self) -> &[SimplicialMap] {
        &self.coords
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    /// Same domain and same factor codomains.
    pub fn same_ends(&self, other: &ProductMap) -> bool {
        self.arity() == other.arity()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(a, b)| a.same_ends(b))
    }

    /// The map into an already built product with matching factors.
    pub fn materialize(&self, p: &ProductComplex) -> Result<SimplicialMap> {
        if p.arity() != self.arity()
            || self
                .coords
                .iter()
                .zip(&p.factors)
                .any(|(c, f)| **c.codomain() != **f)
        {
            return Err(Error::DomainMismatch);
        }
        let images = (0..self.domain().num_vertices())
            .map(|v| {
                let c: Vec<usize> = self.coords.iter().map(|f| f.image(v)).collect();
                p.vertex_of(&c) as u8
            })
            .collect();
        Ok(SimplicialMap::from_raw(
            self.domain(),
            &p.underlying,
            images,
        ))
    }

    /// Restriction of every coordinate to a subcomplex of the domain.
    pub fn restrict(&self, omega: &crate::complex::Subcomplex) -> Result<ProductMap> {
        let coords = self
            .coords
            .iter()
            .map(|c| c.restrict(omega))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProductMap { coords })
    }

    /// Product vertex labels of the images, in domain order.
    pub fn image_labels(&self) -> Vec<String> {
        (0..self.domain().num_vertices())
            .map(|v| {
                let parts: Vec<&str> = self
                    .coords
                    .iter()
                    .map(|f| f.codomain().label(f.image(v)))
                    .collect();
                tuple_label(&parts)
            })
            .collect()
    }
}

fn vertex_or_err(k: &Complex, v0: &str) -> Result<usize> {
    k.vertex(v0)
}

fn check_slot(j: usize, n: usize) -> Result<()> {
    if j == 0 || j > n {
        return Err(Error::IndexOutOfRange { index: j, max: n });
    }
    Ok(())
}

/// `Δ: K → K^n` in factored form.
pub fn diagonal_factored(k: &Arc<Complex>, n: usize) -> Result<ProductMap> {
    check_slot(1, n)?;
    ProductMap::new(vec![SimplicialMap::identity(k); n])
}

/// `ĩ_j: K → K^n` in factored form: identity in slot `j`, `v0` elsewhere.
pub fn axis_inclusion_factored(
    k: &Arc<Complex>,
    n: usize,
    j: usize,
    v0: &str,
) -> Result<ProductMap> {
    check_slot(j, n)?;
    let w = vertex_or_err(k, v0)?;
    let coords = (1..=n)
        .map(|s| {
            if s == j {
                SimplicialMap::identity(k)
            } else {
                SimplicialMap::constant_index(k, k, w)
            }
        })
        .collect();
    ProductMap::new(coords)
}

/// All `n` axis inclusions `ĩ_1, ..., ĩ_n` in factored form.
pub fn axis_inclusions_factored(k: &Arc<Complex>, n: usize, v0: &str) -> Result<Vec<ProductMap>> {
    (1..=n)
        .map(|j| axis_inclusion_factored(k, n, j, v0))
        .collect()
}

/// `i_j: K^{n-1} → K^n` in factored form, on the given domain power.
pub fn slab_inclusion_factored(domain: &ProductComplex, j: usize, v0: &str) -> Result<ProductMap> {
    let n = domain.arity() + 1;
    check_slot(j, n)?;
    let k = &domain.factors[0];
    let w = vertex_or_err(k, v0)?;
    let mut coords = Vec::with_capacity(n);
    for s in 1..=n {
        coords.push(match s.cmp(&j) {
            std::cmp::Ordering::Less => projection(domain, s)?,
            std::cmp::Ordering::Equal => SimplicialMap::constant_index(&domain.underlying, k, w),
            std::cmp::Ordering::Greater => projection(domain, s - 1)?,
        });
    }
    ProductMap::new(coords)
}

/// `Δ: K → K^n`.
pub fn diagonal(k: &Arc<Complex>, n: usize) -> Result<SimplicialMap> {
    let p = categorical_power(k, n)?;
    diagonal_factored(k, n)?.materialize(&p)
}

/// `ĩ_j: K → K^n` with `v0` in every slot but `j`.
pub fn axis_inclusion(k: &Arc<Complex>, n: usize, j: usize, v0: &str) -> Result<SimplicialMap> {
    let f = axis_inclusion_factored(k, n, j, v0)?;
    let p = categorical_power(k, n)?;
    f.materialize(&p)
}

/// `i_j: K^{n-1} → K^n` inserting `v0` at slot `j`. For `n = 1` the domain
/// is empty, which is not a complex, so `n >= 2` is required.
pub fn slab_inclusion(k: &Arc<Complex>, n: usize, j: usize, v0: &str) -> Result<SimplicialMap> {
    if n < 2 {
        return Err(Error::IndexOutOfRange { index: n, max: 2 });
    }
    check_slot(j, n)?;
    vertex_or_err(k, v0)?;
    let dom = categorical_power(k, n - 1)?;
    let p = categorical_power(k, n)?;
    slab_inclusion_factored(&dom, j, v0)?.materialize(&p)
}
