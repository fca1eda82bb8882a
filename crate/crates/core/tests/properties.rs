//! Invariants of every module, checked on random small complexes and maps.

mod common;

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use common::{class_ids, raw_map, sd_oracle, Raw};
use higher_contiguity::{
    all_maps, barycentric_subdivision, categorical_power, compose, constant_map,
    contiguity_distance, core, decide_class, diagonal, dominated_vertices, emit_complex, emit_map,
    enumerate_subcomplexes, is_contiguous, is_strongly_collapsible, parse_complex, parse_map,
    projections, random_map, restrict_complex, same_contiguity_class, subdivide_map, ClassBudget,
    Complex, DistanceBudget, MapTuple, Mode, SdValue, Simplex, SimplicialMap, Subcomplex, Verdict,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn build(facets: &[u64]) -> Arc<Complex> {
    let lists: Vec<Vec<String>> = facets
        .iter()
        .map(|&f| {
            (0..64)
                .filter(|i| f >> i & 1 == 1)
                .map(|i| i.to_string())
                .collect()
        })
        .collect();
    Arc::new(Complex::build(lists).unwrap())
}

/// A complex on at most `max` vertices with at most `facets` generating sets.
fn complex(max: usize, facets: usize) -> impl Strategy<Value = Arc<Complex>> {
    (1..=max).prop_flat_map(move |n| {
        prop::collection::vec(1u64..1 << n, 1..=facets).prop_map(|f| build(&f))
    })
}

fn connected(max: usize, facets: usize) -> impl Strategy<Value = Arc<Complex>> {
    complex(max, facets).prop_filter("edge-path connected", |k| k.is_edge_path_connected())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn maps(dom: &Arc<Complex>, cod: &Arc<Complex>, count: usize, seed: u64) -> Vec<SimplicialMap> {
    let mut r = rng(seed);
    (0..count).map(|_| random_map(dom, cod, &mut r)).collect()
}

/// A random nonempty subcomplex generated by a subset of the facets.
fn sub(k: &Arc<Complex>, pick: u64) -> Subcomplex {
    let m = k.facets().len();
    let chosen = pick % ((1 << m) - 1) + 1;
    let facets = (0..m)
        .filter(|i| chosen >> i & 1 == 1)
        .map(|i| k.facets()[i]);
    Subcomplex::new(k, facets).unwrap()
}

fn masks(faces: &[Simplex]) -> HashSet<u64> {
    faces.iter().map(|s| s.mask()).collect()
}

fn budget() -> ClassBudget {
    ClassBudget::default()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn faces_are_downward_closed_and_facets_an_antichain(k in complex(7, 5)) {
        let faces = masks(&k.faces());
        prop_assert_eq!(faces.len(), k.num_faces());
        for &f in &faces {
            let mut s = f;
            while s != 0 {
                prop_assert!(faces.contains(&s));
                s = (s - 1) & f;
            }
        }
        for a in k.facets() {
            for b in k.facets() {
                prop_assert!(a == b || !a.is_face_of(*b));
            }
        }
    }

    #[test]
    fn enumeration_counts_every_subcomplex(k in complex(4, 3)) {
        let faces: Vec<u64> = k.faces().iter().map(|s| s.mask()).collect();
        prop_assume!(faces.len() <= 15);
        // Nonempty antichains of the face poset, by brute force.
        let antichains = (1u32..1 << faces.len())
            .filter(|&c| {
                let chosen: Vec<u64> = (0..faces.len()).filter(|i| c >> i & 1 == 1).map(|i| faces[i]).collect();
                chosen.iter().all(|&a| chosen.iter().all(|&b| a == b || a & b != a))
            })
            .count();
        let all: Vec<_> = enumerate_subcomplexes(&k, Mode::All, usize::MAX).collect::<Result<_, _>>().unwrap();
        prop_assert_eq!(all.len(), antichains);
        let induced = enumerate_subcomplexes(&k, Mode::Induced, usize::MAX).count();
        prop_assert_eq!(induced, (1 << k.num_vertices()) - 1);
    }

    #[test]
    fn induced_subcomplex_keeps_exactly_the_faces_inside(k in complex(6, 4), pick in any::<u64>()) {
        let n = k.num_vertices();
        let s = pick % ((1 << n) - 1) + 1;
        let labels: Vec<&str> = (0..n).filter(|i| s >> i & 1 == 1).map(|i| k.label(i)).collect();
        let omega = restrict_complex(&k, &labels).unwrap();
        let expect: HashSet<u64> = k.faces().iter().map(|f| f.mask()).filter(|f| f & !s == 0).collect();
        prop_assert_eq!(masks(&omega.faces()), expect);
    }

    #[test]
    fn maps_are_simplicial_on_every_face(dom in complex(5, 4), cod in complex(5, 4), seed in any::<u64>()) {
        for f in maps(&dom, &cod, 4, seed) {
            prop_assert!(f.is_simplicial_on_all_faces());
        }
    }

    #[test]
    fn composition_is_associative_with_units(k in complex(5, 4), seed in any::<u64>()) {
        let [f, g, h]: [SimplicialMap; 3] = maps(&k, &k, 3, seed).try_into().unwrap();
        let id = SimplicialMap::identity(&k);
        let left = compose(&h, &compose(&g, &f).unwrap()).unwrap();
        let right = compose(&compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(compose(&id, &f).unwrap(), f.clone());
        prop_assert_eq!(compose(&f, &id).unwrap(), f);
    }

    #[test]
    fn restriction_is_precomposition_with_the_inclusion(k in complex(5, 4), seed in any::<u64>(), pick in any::<u64>()) {
        let f = maps(&k, &k, 1, seed).pop().unwrap();
        let omega = sub(&k, pick);
        let restricted = f.restrict(&omega).unwrap();
        let through = compose(&f, &SimplicialMap::inclusion(&omega)).unwrap();
        prop_assert_eq!(restricted.table(), through.table());
    }

    #[test]
    fn preimages_are_exactly_the_faces_mapped_inside(k in complex(5, 4), seed in any::<u64>(), pick in any::<u64>()) {
        let f = maps(&k, &k, 1, seed).pop().unwrap();
        let omega = sub(&k, pick);
        let inside = masks(&omega.faces());
        let expect: HashSet<u64> = k
            .faces()
            .iter()
            .filter(|s| inside.contains(&f.image_simplex(**s).mask()))
            .map(|s| s.mask())
            .collect();
        match f.preimage(&omega).unwrap() {
            Some(p) => prop_assert_eq!(masks(&p.faces()), expect),
            None => prop_assert!(expect.is_empty()),
        }
    }

    #[test]
    fn product_faces_follow_the_projection_criterion(k in complex(4, 3), pick in any::<u64>()) {
        let p = categorical_power(&k, 2).unwrap();
        let sq = p.complex();
        prop_assert_eq!(sq.num_vertices(), k.num_vertices().pow(2));
        let mut r = rng(pick);
        for _ in 0..64 {
            let mask = rand::Rng::gen_range(&mut r, 1..1u64 << sq.num_vertices());
            let by_coords = (0..2).all(|i| {
                let proj = (0..sq.num_vertices())
                    .filter(|v| mask >> v & 1 == 1)
                    .fold(0u64, |m, v| m | 1 << p.coords(v)[i]);
                k.is_face_mask(proj)
            });
            prop_assert_eq!(sq.is_face_mask(mask), by_coords);
            prop_assert_eq!(p.is_face_by_projections(mask), by_coords);
        }
        prop_assert_eq!(sq.is_edge_path_connected(), k.is_edge_path_connected());
    }

    #[test]
    fn product_map_families_are_simplicial(k in complex(4, 3)) {
        let p = categorical_power(&k, 2).unwrap();
        let d = diagonal(&k, 2).unwrap();
        prop_assert!(d.is_simplicial_on_all_faces());
        for pi in projections(&p) {
            prop_assert!(pi.is_simplicial_on_all_faces());
            prop_assert_eq!(compose(&pi, &d).unwrap(), SimplicialMap::identity(&k));
        }
    }

    #[test]
    fn contiguity_is_reflexive_and_symmetric(dom in complex(5, 4), cod in complex(4, 3), seed in any::<u64>()) {
        let [f, g]: [SimplicialMap; 2] = maps(&dom, &cod, 2, seed).try_into().unwrap();
        prop_assert!(is_contiguous(&f, &f).unwrap());
        prop_assert_eq!(is_contiguous(&f, &g).unwrap(), is_contiguous(&g, &f).unwrap());
    }

    #[test]
    fn class_decisions_match_the_oracle(dom in complex(4, 3), cod in complex(3, 3), seed in any::<u64>(), pick in any::<u64>()) {
        let classes = class_ids(&Raw::of(&dom), &Raw::of(&cod));
        let [f, g]: [SimplicialMap; 2] = maps(&dom, &cod, 2, seed).try_into().unwrap();
        let same = classes[&raw_map(&f)] == classes[&raw_map(&g)];
        let exact = same_contiguity_class(&f, &g, &budget()).unwrap();
        let reduced = decide_class(&f, &g, &budget()).unwrap();
        for d in [&exact, &reduced] {
            match &d.verdict {
                Verdict::Equivalent(c) => {
                    prop_assert!(same);
                    prop_assert!(c.verify() && c.first() == &f && c.last() == &g);
                    // Certificates restrict to any subcomplex.
                    let omega = sub(&dom, pick);
                    prop_assert!(c.restrict(&omega).unwrap().verify());
                }
                Verdict::NotEquivalent => prop_assert!(!same),
                Verdict::Unknown => prop_assert!(false, "budget exhausted"),
            }
        }
        if let Verdict::Equivalent(c) = &reduced.verdict {
            prop_assert!(exact.certificate().unwrap().steps() <= c.steps());
        }
    }

    #[test]
    fn cores_are_idempotent_and_order_independent(k in complex(6, 4)) {
        let trace = core(&k);
        let c = Arc::new(trace.result());
        prop_assert!(dominated_vertices(&c).is_empty());
        prop_assert!(core(&c).steps.is_empty());
        let facets: Vec<u64> = k.facets().iter().map(|s| s.mask()).collect();
        let mut memo = HashMap::new();
        let sizes = every_core_size(&facets, &mut memo);
        prop_assert_eq!(sizes.len(), 1, "collapse order changed the core");
        prop_assert_eq!(sizes.iter().next().copied(), Some(c.num_vertices()));
        prop_assert_eq!(is_strongly_collapsible(&k), c.num_vertices() == 1);
    }

    #[test]
    fn strongly_collapsible_means_identity_is_constant(k in connected(6, 4)) {
        prop_assume!(is_strongly_collapsible(&k));
        let id = SimplicialMap::identity(&k);
        let c = constant_map(&k, &k, k.label(0)).unwrap();
        prop_assert!(same_contiguity_class(&id, &c, &budget()).unwrap().is_equivalent());
    }

    #[test]
    fn subdivision_counts_chains(k in complex(4, 3)) {
        let sd = barycentric_subdivision(&k).unwrap();
        prop_assert_eq!(sd.complex().num_vertices(), k.num_faces());
        prop_assert_eq!(sd.complex().num_faces(), chains(&k));
    }

    #[test]
    fn subdivision_is_functorial(k in complex(4, 3), seed in any::<u64>()) {
        let [f, g]: [SimplicialMap; 2] = maps(&k, &k, 2, seed).try_into().unwrap();
        let lhs = subdivide_map(&compose(&g, &f).unwrap()).unwrap();
        let rhs = compose(&subdivide_map(&g).unwrap(), &subdivide_map(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs.table(), rhs.table());
        let id = SimplicialMap::identity(&k);
        prop_assert!(subdivide_map(&id).unwrap().table().iter().all(|(a, b)| a == b));
    }

    #[test]
    fn subdivision_preserves_classes(k in complex(3, 3), seed in any::<u64>()) {
        // Contiguous maps need not subdivide to contiguous maps (id and a
        // constant on an edge), but the subdivisions share a class.
        let [f, g]: [SimplicialMap; 2] = maps(&k, &k, 2, seed).try_into().unwrap();
        prop_assume!(is_contiguous(&f, &g).unwrap());
        let d = same_contiguity_class(&subdivide_map(&f).unwrap(), &subdivide_map(&g).unwrap(), &budget()).unwrap();
        prop_assert!(d.certificate().is_some_and(|c| c.verify()));
    }

    #[test]
    fn distance_matches_the_definition(dom in complex(4, 4), cod in complex(3, 3), arity in 2usize..=3, seed in any::<u64>()) {
        prop_assume!(dom.facets().len() <= 6);
        let tuple = maps(&dom, &cod, arity, seed);
        let raws: Vec<Vec<usize>> = tuple.iter().map(raw_map).collect();
        for (mode, induced) in [(Mode::All, false), (Mode::Induced, true)] {
            let report = contiguity_distance(&tuple, mode, &DistanceBudget::default()).unwrap();
            let oracle = sd_oracle(&Raw::of(&dom), &Raw::of(&cod), &raws, induced);
            let expect = oracle.map_or(SdValue::Infinite, SdValue::Finite);
            prop_assert_eq!(report.value, expect, "mode {}", mode);
            if let Some(sol) = &report.solution {
                prop_assert!(sol.verify(&MapTuple::Plain(tuple.clone())));
                prop_assert_eq!(SdValue::Finite(sol.value()), report.value);
            }
        }
    }

    #[test]
    fn text_forms_round_trip(facets in prop::collection::vec(prop::collection::vec(label(), 1..4), 1..5), seed in any::<u64>()) {
        let k = Arc::new(Complex::build(&facets).unwrap());
        let text = emit_complex(&k);
        let back = Arc::new(parse_complex(&text).unwrap());
        prop_assert_eq!(emit_complex(&back), text.clone());
        let f = maps(&back, &back, 1, seed).pop().unwrap();
        let map_text = emit_map(&f);
        let g = parse_map(&map_text, &back, &back).unwrap();
        prop_assert_eq!(&g, &f);
        prop_assert_eq!(emit_map(&g), map_text);
    }
}

fn label() -> impl Strategy<Value = String> {
    prop_oneof![
        "[0-9]{1,2}",
        "[a-z]{1,3}",
        "[a-z ,#\"\\\\-]{1,4}".prop_filter("nonblank", |s| !s.trim().is_empty()),
    ]
}

/// Every final vertex count reachable by some order of strong collapses.
fn every_core_size(facets: &[u64], memo: &mut HashMap<Vec<u64>, HashSet<usize>>) -> HashSet<usize> {
    let mut key = facets.to_vec();
    key.sort();
    if let Some(s) = memo.get(&key) {
        return s.clone();
    }
    let verts = facets.iter().fold(0u64, |m, f| m | f);
    let mut out = HashSet::new();
    for v in (0..64).filter(|v| verts >> v & 1 == 1) {
        let containing: Vec<u64> = facets.iter().copied().filter(|f| f >> v & 1 == 1).collect();
        let common = containing.iter().fold(u64::MAX, |m, f| m & f) & !(1 << v);
        if common == 0 {
            continue;
        }
        let mut rest: Vec<u64> = facets
            .iter()
            .map(|f| f & !(1 << v))
            .filter(|&f| f != 0)
            .collect();
        let all = rest.clone();
        rest.retain(|&f| !all.iter().any(|&g| g != f && g & f == f));
        rest.sort();
        rest.dedup();
        out.extend(every_core_size(&rest, memo));
    }
    if out.is_empty() {
        out.insert(verts.count_ones() as usize);
    }
    memo.insert(key, out.clone());
    out
}

/// Nonempty chains of nonempty faces, by brute force.
fn chains(k: &Complex) -> usize {
    fn extend(faces: &[u64], top: u64) -> usize {
        faces
            .iter()
            .filter(|&&f| f != top && f & top == top)
            .map(|&f| 1 + extend(faces, f))
            .sum()
    }
    let faces: Vec<u64> = k.faces().iter().map(|s| s.mask()).collect();
    faces.iter().map(|&f| 1 + extend(&faces, f)).sum()
}

#[test]
fn every_map_is_enumerated() {
    for (dom, cod) in [(3, 3), (4, 2), (5, 3)] {
        let path = |n: usize| build(&(0..n.max(2) - 1).map(|i| 0b11 << i).collect::<Vec<_>>());
        let (d, c) = (path(dom), path(cod));
        let lib: HashSet<Vec<usize>> = all_maps(&d, &c).iter().map(raw_map).collect();
        let oracle: HashSet<Vec<usize>> = common::all_maps(&Raw::of(&d), &Raw::of(&c))
            .into_iter()
            .collect();
        assert_eq!(lib, oracle);
    }
}
