//! Brute-force reference implementations, written from the definitions and
//! sharing no search code with the library. Only vertex indices and facet
//! lists are taken from library values.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use higher_contiguity::{Complex, SimplicialMap};

/// A complex as plain facet lists over `0..n`.
#[derive(Clone, Debug)]
pub struct Raw {
    pub n: usize,
    pub facets: Vec<Vec<usize>>,
    /// Every nonempty face, as a sorted vertex list and as a bit mask.
    face_list: Vec<Vec<usize>>,
    face_masks: HashSet<u64>,
}

fn mask_of(s: &[usize]) -> u64 {
    s.iter().fold(0, |m, &v| m | 1 << v)
}

fn subsets(s: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for m in 1u32..(1 << s.len()) {
        out.push(
            (0..s.len())
                .filter(|i| m >> i & 1 == 1)
                .map(|i| s[i])
                .collect(),
        );
    }
    out
}

impl Raw {
    pub fn new(n: usize, facets: Vec<Vec<usize>>) -> Raw {
        let mut faces = HashSet::new();
        for f in &facets {
            let mut f = f.clone();
            f.sort();
            f.dedup();
            faces.extend(subsets(&f));
        }
        let mut facets: Vec<Vec<usize>> = facets
            .into_iter()
            .map(|mut f| {
                f.sort();
                f.dedup();
                f
            })
            .collect();
        let all = facets.clone();
        facets.retain(|f| {
            !all.iter()
                .any(|g| g.len() > f.len() && f.iter().all(|v| g.contains(v)))
        });
        facets.sort();
        facets.dedup();
        let mut face_list: Vec<Vec<usize>> = faces.into_iter().collect();
        face_list.sort();
        let face_masks = face_list.iter().map(|f| mask_of(f)).collect();
        Raw {
            n,
            facets,
            face_list,
            face_masks,
        }
    }

    pub fn of(k: &Complex) -> Raw {
        Raw::new(
            k.num_vertices(),
            k.facets().iter().map(|s| s.vertices().collect()).collect(),
        )
    }

    pub fn is_face(&self, s: &[usize]) -> bool {
        self.face_masks.contains(&mask_of(s))
    }

    pub fn faces(&self) -> Vec<Vec<usize>> {
        self.face_list.clone()
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.facets.iter().flatten().copied().collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn connected(&self) -> bool {
        let verts = self.vertices();
        let mut seen = HashSet::from([verts[0]]);
        let mut queue = VecDeque::from([verts[0]]);
        while let Some(v) = queue.pop_front() {
            for f in self.facets.iter().filter(|f| f.contains(&v)) {
                for &w in f {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
        }
        seen.len() == verts.len()
    }

    /// The categorical square, vertex `(a, b)` at index `a * n + b`.
    pub fn square(&self) -> Raw {
        let mut facets = Vec::new();
        for s in &self.facets {
            for t in &self.facets {
                facets.push(
                    s.iter()
                        .flat_map(|&a| t.iter().map(move |&b| a * self.n + b))
                        .collect(),
                );
            }
        }
        Raw::new(self.n * self.n, facets)
    }
}

fn image(f: &[usize], s: &[usize]) -> u64 {
    s.iter().fold(0, |m, &v| m | 1 << f[v])
}

pub fn simplicial(dom: &Raw, cod: &Raw, f: &[usize]) -> bool {
    dom.facets
        .iter()
        .all(|s| cod.face_masks.contains(&image(f, s)))
}

/// Contiguity straight from the definition, over every face.
pub fn contiguous(dom: &Raw, cod: &Raw, f: &[usize], g: &[usize]) -> bool {
    dom.face_list
        .iter()
        .all(|s| cod.face_masks.contains(&(image(f, s) | image(g, s))))
}

/// Every simplicial map, by odometer over all vertex assignments. Vertices
/// outside the complex (when `dom` is a piece) are fixed to 0.
pub fn all_maps(dom: &Raw, cod: &Raw) -> Vec<Vec<usize>> {
    let verts = dom.vertices();
    let mut out = Vec::new();
    let mut f = vec![0; dom.n];
    loop {
        if simplicial(dom, cod, &f) {
            out.push(f.clone());
        }
        let mut i = 0;
        loop {
            if i == verts.len() {
                return out;
            }
            let v = verts[i];
            f[v] += 1;
            if f[v] < cod.n {
                break;
            }
            f[v] = 0;
            i += 1;
        }
    }
}

/// Maps contiguous to `f` that differ from it at exactly one vertex.
///
/// These moves connect every contiguity class: if `f` and `g` are
/// contiguous, any map agreeing with `f` on some vertices and with `g` on the
/// rest sends each face into `f(σ) ∪ g(σ)`, so changing one vertex at a time
/// from `f` to `g` passes through simplicial maps contiguous to each other.
/// Since `f` is simplicial, only the faces through the moved vertex need a
/// check, and there `g(σ) ⊆ f(σ) ∪ g(σ)`, so contiguity implies simpliciality.
pub fn moves(dom: &Raw, cod: &Raw, f: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for v in dom.vertices() {
        let through: Vec<&Vec<usize>> = dom.face_list.iter().filter(|s| s.contains(&v)).collect();
        for w in 0..cod.n {
            if w == f[v] {
                continue;
            }
            let mut g = f.to_vec();
            g[v] = w;
            if through
                .iter()
                .all(|s| cod.face_masks.contains(&(image(f, s) | image(&g, s))))
            {
                out.push(g);
            }
        }
    }
    out
}

/// Goodness of every facet group, by `judge`, skipping the search for any
/// group containing a known bad group: a chain on a piece restricts to a
/// chain on each subpiece, so goodness passes to smaller groups.
fn good_groups(m: usize, judge: impl Fn(u64) -> bool) -> Vec<bool> {
    let mut order: Vec<u64> = (1..1u64 << m).collect();
    order.sort_by_key(|g| g.count_ones());
    let mut good = vec![false; 1 << m];
    for g in order {
        let smaller_bad =
            (0..m).any(|i| g >> i & 1 == 1 && g != 1 << i && !good[(g & !(1 << i)) as usize]);
        good[g as usize] = !smaller_bad && judge(g);
    }
    good
}

/// Exhaustive best-first search through the class of `src`: is some map with
/// `score == 0` reachable? `score` only orders the search. `None` when more
/// than `cap` maps were visited.
pub fn reaches(
    dom: &Raw,
    cod: &Raw,
    src: &[usize],
    score: impl Fn(&[usize]) -> usize,
    cap: usize,
) -> Option<bool> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let mut seen = HashSet::from([src.to_vec()]);
    let mut heap = BinaryHeap::from([(Reverse(score(src)), src.to_vec())]);
    while let Some((Reverse(s), f)) = heap.pop() {
        if s == 0 {
            return Some(true);
        }
        for g in moves(dom, cod, &f) {
            if seen.insert(g.clone()) {
                if seen.len() > cap {
                    return None;
                }
                heap.push((Reverse(score(&g)), g));
            }
        }
    }
    Some(false)
}

/// Contiguity classes of all maps `dom -> cod`, by union-find over the full
/// contiguity graph.
pub fn class_ids(dom: &Raw, cod: &Raw) -> HashMap<Vec<usize>, usize> {
    let maps = all_maps(dom, cod);
    let mut parent: Vec<usize> = (0..maps.len()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for a in 0..maps.len() {
        for b in a + 1..maps.len() {
            if contiguous(dom, cod, &maps[a], &maps[b]) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    (0..maps.len())
        .map(|i| (maps[i].clone(), find(&mut parent, i)))
        .collect()
}

/// The piece spanned by a group of facets (given as a bit mask over the
/// facet list), or the full subcomplex induced on their vertices.
pub fn piece(k: &Raw, group: u64, induced: bool) -> Raw {
    let chosen: Vec<Vec<usize>> = (0..k.facets.len())
        .filter(|i| group >> i & 1 == 1)
        .map(|i| k.facets[i].clone())
        .collect();
    if !induced {
        return Raw::new(k.n, chosen);
    }
    let verts: HashSet<usize> = chosen.iter().flatten().copied().collect();
    let facets = k
        .facets
        .iter()
        .map(|f| {
            f.iter()
                .copied()
                .filter(|v| verts.contains(v))
                .collect::<Vec<_>>()
        })
        .filter(|f| !f.is_empty())
        .collect();
    Raw::new(k.n, facets)
}

/// Smallest number of good groups covering every facet, given goodness of
/// every group; `None` if some facet lies in no good group.
pub fn min_cover(m: usize, good: &[bool]) -> Option<usize> {
    let full = (1usize << m) - 1;
    let goods: Vec<usize> = (1..=full).filter(|&g| good[g]).collect();
    let mut dist = vec![usize::MAX; full + 1];
    dist[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        if s == full {
            return Some(dist[s]);
        }
        for &g in &goods {
            let t = s | g;
            if dist[t] == usize::MAX {
                dist[t] = dist[s] + 1;
                queue.push_back(t);
            }
        }
    }
    None
}

/// `SD` from the definition: covers by subcomplexes on which consecutive
/// maps are in one contiguity class. `None` is infinity.
pub fn sd_oracle(dom: &Raw, cod: &Raw, maps: &[Vec<usize>], induced: bool) -> Option<usize> {
    let m = dom.facets.len();
    assert!(m <= 16, "oracle limited to 16 facets");
    let good = good_groups(m, |g| {
        let p = piece(dom, g, induced);
        let verts = p.vertices();
        maps.windows(2).all(|w| {
            let target: Vec<usize> = verts.iter().map(|&v| w[1][v]).collect();
            let mut start = vec![0; dom.n];
            for &v in &verts {
                start[v] = w[0][v];
            }
            let differing = |f: &[usize]| {
                verts
                    .iter()
                    .zip(&target)
                    .filter(|(&v, &t)| f[v] != t)
                    .count()
            };
            reaches(&p, cod, &start, differing, usize::MAX).unwrap()
        })
    });
    min_cover(m, &good).map(|c| c - 1)
}

/// `scat` from the definition: covers by subcomplexes whose inclusion is in
/// the class of some constant map.
pub fn scat_oracle(k: &Raw) -> Option<usize> {
    let m = k.facets.len();
    let good = good_groups(m, |g| {
        let p = piece(k, g, false);
        let verts = p.vertices();
        let id: Vec<usize> = (0..k.n).collect();
        let off_constant = |f: &[usize]| {
            let best = (0..k.n)
                .map(|c| verts.iter().filter(|&&v| f[v] == c).count())
                .max()
                .unwrap();
            verts.len() - best
        };
        reaches(&p, k, &id, off_constant, usize::MAX).unwrap()
    });
    min_cover(m, &good).map(|c| c - 1)
}

/// `TC_2` from the definition: covers of `K x K` by subcomplexes `Ω` with a
/// simplicial `σ: Ω -> K` such that `Δ∘σ` is in the class of the inclusion.
pub fn tc2_oracle(k: &Raw) -> Option<usize> {
    let sq = k.square();
    let n = k.n;
    let m = sq.facets.len();
    let good = good_groups(m, |g| {
        let p = piece(&sq, g, false);
        let verts = p.vertices();
        let id: Vec<usize> = (0..sq.n).collect();
        let off_diagonal = |f: &[usize]| verts.iter().filter(|&&v| f[v] / n != f[v] % n).count();
        reaches(&p, &sq, &id, off_diagonal, usize::MAX).unwrap()
    });
    min_cover(m, &good).map(|c| c - 1)
}

pub fn raw_map(f: &SimplicialMap) -> Vec<usize> {
    f.images()
}

pub fn arc(facets: &[&[&str]]) -> Arc<Complex> {
    Arc::new(Complex::build(facets.iter().map(|f| f.to_vec())).unwrap())
}

/// Every complex on at most three vertices, up to isomorphism.
pub fn complexes_up_to_three() -> Vec<(&'static str, Arc<Complex>)> {
    vec![
        ("point", arc(&[&["0"]])),
        ("two points", arc(&[&["0"], &["1"]])),
        ("edge", arc(&[&["0", "1"]])),
        ("three points", arc(&[&["0"], &["1"], &["2"]])),
        ("edge and point", arc(&[&["0", "1"], &["2"]])),
        ("path", arc(&[&["0", "1"], &["1", "2"]])),
        (
            "triangle boundary",
            arc(&[&["0", "1"], &["0", "2"], &["1", "2"]]),
        ),
        ("filled triangle", arc(&[&["0", "1", "2"]])),
    ]
}

pub fn k5() -> Arc<Complex> {
    let mut edges = Vec::new();
    for a in 0..5 {
        for b in a + 1..5 {
            edges.push(vec![a.to_string(), b.to_string()]);
        }
    }
    Arc::new(Complex::build(edges).unwrap())
}

pub fn disk() -> Arc<Complex> {
    arc(&[
        &["A", "B", "P"],
        &["B", "P", "Q"],
        &["B", "Q", "C"],
        &["C", "Q", "R"],
        &["C", "R", "A"],
        &["A", "R", "P"],
        &["P", "Q", "R"],
    ])
}
