//! Sampled checks of the identities and inequalities satisfied by the
//! contiguity distance.
//!
//! Each sampled tuple `φ1, ..., φn: K → L` is run through every check. A
//! check may skip a tuple when its hypotheses fail or a budget runs out.
//! Violations are shrunk greedily (dropping maps, deleting domain facets)
//! before being reported.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::collapse::is_strongly_collapsible;
use crate::complex::{Complex, Mode, Subcomplex};
use crate::contiguity::{contiguous_neighbors, same_contiguity_class, ClassBudget, Verdict};
use crate::distance::{contiguity_distance, scat, scat_at, DistanceBudget, SdValue};
use crate::maps::{compose, random_map, SimplicialMap};
use crate::par;
use crate::subdivision::{barycentric_subdivision, subdivide_map_between};

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    /// Number of sampled map tuples.
    pub samples: usize,
    pub seed: u64,
    /// Tuples have between 2 and `max_arity` maps.
    pub max_arity: usize,
    pub budget: DistanceBudget,
    /// Budget for distances between subdivisions, whose class searches are
    /// much larger.
    pub subdivision_budget: DistanceBudget,
    /// Subdivision checks run only when both ends have at most this many faces.
    pub max_subdivision_faces: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            samples: 200,
            seed: 0x5eed,
            max_arity: 4,
            budget: DistanceBudget::default(),
            subdivision_budget: DistanceBudget {
                class: ClassBudget {
                    max_visits: 20_000,
                    max_chain_len: None,
                },
                max_pieces: 5_000,
                max_subcomplexes: 100_000,
            },
            max_subdivision_faces: 24,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub trials: usize,
    pub skipped: usize,
    pub violations: usize,
    /// The smallest failing case found, rendered as text.
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub tuples: usize,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.violations == 0)
    }

    pub fn violations(&self) -> usize {
        self.checks.iter().map(|c| c.violations).sum()
    }
}

enum Outcome {
    Pass,
    Skip,
    Fail(String),
}

/// `None` stands for an infinite value.
type Val = Option<usize>;

/// What is known about a value: it lies in `lo..=hi`.
#[derive(Clone, Copy)]
struct Bounds {
    lo: Val,
    hi: Val,
}

impl From<SdValue> for Bounds {
    fn from(v: SdValue) -> Self {
        match v {
            SdValue::Finite(x) => Bounds {
                lo: Some(x),
                hi: Some(x),
            },
            SdValue::Infinite => Bounds { lo: None, hi: None },
            SdValue::Unknown { lower, upper } => Bounds {
                lo: Some(lower),
                hi: upper,
            },
        }
    }
}

struct Ctx<'a> {
    corpus: &'a [Arc<Complex>],
    config: &'a SuiteConfig,
}

impl Ctx<'_> {
    fn sd_mode(&self, maps: &[SimplicialMap], mode: Mode) -> Option<Val> {
        match contiguity_distance(maps, mode, &self.config.budget)
            .ok()?
            .value
        {
            SdValue::Finite(v) => Some(Some(v)),
            SdValue::Infinite => Some(None),
            SdValue::Unknown { .. } => None,
        }
    }

    fn sd(&self, maps: &[SimplicialMap]) -> Option<Val> {
        self.sd_mode(maps, Mode::All)
    }

    fn bounds_with(
        &self,
        maps: &[SimplicialMap],
        mode: Mode,
        budget: &DistanceBudget,
    ) -> Option<Bounds> {
        Some(contiguity_distance(maps, mode, budget).ok()?.value.into())
    }

    fn bounds(&self, maps: &[SimplicialMap]) -> Option<Bounds> {
        self.bounds_with(maps, Mode::All, &self.config.budget)
    }

    fn pick<'b, R: Rng>(&'b self, rng: &mut R) -> &'b Arc<Complex> {
        self.corpus.choose(rng).expect("nonempty corpus")
    }

    /// A random map reached from `f` by a short walk through contiguous maps.
    fn walk<R: Rng>(&self, f: &SimplicialMap, rng: &mut R) -> SimplicialMap {
        let mut cur = f.clone();
        for _ in 0..rng.gen_range(0..4) {
            match contiguous_neighbors(&cur, 4096) {
                Ok(n) => cur = n.choose(rng).expect("a map neighbors itself").clone(),
                Err(_) => break,
            }
        }
        cur
    }
}

fn le(a: Val, b: Val) -> bool {
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x <= y,
    }
}

fn show(v: Val) -> String {
    v.map_or("inf".to_string(), |x| x.to_string())
}

macro_rules! try_val {
    ($e:expr) => {
        match $e {
            Some(v) => v,
            None => return Outcome::Skip,
        }
    };
}

/// Checks `lhs <= rhs` using only what the bounds establish.
fn expect_le(lhs: Bounds, rhs: Bounds, what: &str) -> Outcome {
    if le(lhs.hi, rhs.lo) {
        Outcome::Pass
    } else if !le(lhs.lo, rhs.hi) {
        Outcome::Fail(format!("{what}: {} > {}", show(lhs.lo), show(rhs.hi)))
    } else {
        Outcome::Skip
    }
}

type Check = fn(&Ctx, &[SimplicialMap], &mut ChaCha8Rng) -> Outcome;

fn permutation_invariance(ctx: &Ctx, maps: &[SimplicialMap], rng: &mut ChaCha8Rng) -> Outcome {
    let a = try_val!(ctx.sd(maps));
    let mut shuffled = maps.to_vec();
    shuffled.shuffle(rng);
    let b = try_val!(ctx.sd(&shuffled));
    if a == b {
        Outcome::Pass
    } else {
        Outcome::Fail(format!(
            "permuted value {} differs from {}",
            show(b),
            show(a)
        ))
    }
}

fn zero_characterization(ctx: &Ctx, maps: &[SimplicialMap], _: &mut ChaCha8Rng) -> Outcome {
    let v = try_val!(ctx.sd(maps));
    let mut all = true;
    for w in maps.windows(2) {
        match same_contiguity_class(&w[0], &w[1], &ctx.config.budget.class).map(|d| d.verdict) {
            Ok(Verdict::Equivalent(_)) => {}
            Ok(Verdict::NotEquivalent) => all = false,
            _ => return Outcome::Skip,
        }
    }
    if (v == Some(0)) == all {
        Outcome::Pass
    } else {
        Outcome::Fail(format!(
            "value {} but consecutive equivalence is {all}",
            show(v)
        ))
    }
}

fn monotone_in_arity(ctx: &Ctx, maps: &[SimplicialMap], rng: &mut ChaCha8Rng) -> Outcome {
    let mut longer = maps.to_vec();
    longer.push(random_map(maps[0].domain(), maps[0].codomain(), rng));
    let a = try_val!(ctx.bounds(maps));
    let b = try_val!(ctx.bounds(&longer));
    expect_le(a, b, "adding a map decreased the value")
}

fn precomposition(ctx: &Ctx, maps: &[SimplicialMap], rng: &mut ChaCha8Rng) -> Outcome {
    let m = ctx.pick(rng);
    let mu = random_map(m, maps[0].domain(), rng);
    let pre: Vec<SimplicialMap> = maps
        .iter()
        .map(|f| compose(f, &mu).expect("composable"))
        .collect();
    expect_le(
        try_val!(ctx.bounds(&pre)),
        try_val!(ctx.bounds(maps)),
        "precomposition",
    )
}

fn precomposition_equivalent(ctx: &Ctx, maps: &[SimplicialMap], rng: &mut ChaCha8Rng) -> Outcome {
    let m = ctx.pick(rng);
    let mut mu = vec![random_map(m, maps[0].domain(), rng)];
    for _ in 1..maps.len() {
        let next = ctx.walk(mu.last().expect("nonempty"), rng);
        mu.push(next);
    }
    let pre: Vec<SimplicialMap> = maps
        .iter()
        .zip(&mu)
        .map(|(f, u)| compose(f, u).expect("composable"))
        .collect();
    expect_le(
        try_val!(ctx.bounds(&pre)),
        try_val!(ctx.bounds(maps)),
        "precomposition by equivalent maps",
    )
}

fn postcomposition(ctx: &Ctx, maps: &[SimplicialMap], rng: &mut ChaCha8Rng) -> Outcome {
    let target = ctx.pick(rng);
    let mut mu = vec![random_map(maps[0].codomain(), target, rng)];
    for _ in 1..maps.len() {
        let next = ctx.walk(mu.last().expect("nonempty"), rng);
        mu.push(next);
    }
    let post: Vec<SimplicialMap> = maps
        .iter()
        .zip(&mu)
        .map(|(f, u)| compose(u, f).expect("composable"))
        .collect();
    expect_le(
        try_val!(ctx.bounds(&post)),
        try_val!(ctx.bounds(maps)),
        "postcomposition by equivalent maps",
    )
}

fn bounded_by_scat(ctx: &Ctx, maps: &[SimplicialMap], _: &mut ChaCha8Rng) -> Outcome {
    if !maps[0].codomain().is_edge_path_connected() {
        return Outcome::Skip;
    }
    let Ok(s) = scat(maps[0].domain(), Mode::All, &ctx.config.budget) else {
        return Outcome::Skip;
    };
    expect_le(
        try_val!(ctx.bounds(maps)),
        s.value.into(),
        "value exceeds scat of the domain",
    )
}

fn factor_through(ctx: &Ctx, maps: &[SimplicialMap], rng: &mut ChaCha8Rng) -> Outcome {
    if !maps[0].codomain().is_edge_path_connected() {
        return Outcome::Skip;
    }
    let m = ctx.pick(rng);
    let k = maps[0].domain();
    let eta = random_map(m, k, rng);
    let eta2 = SimplicialMap::constant_index(m, k, rng.gen_range(0..k.num_vertices()));
    let lhs: Vec<SimplicialMap> = maps
        .iter()
        .map(|f| compose(f, &eta).expect("composable"))
        .collect();
    expect_le(
        try_val!(ctx.bounds(&lhs)),
        try_val!(ctx.bounds(&[eta, eta2])),
        "factor-through bound",
    )
}

fn class_replacement(ctx: &Ctx, maps: &[SimplicialMap], rng: &mut ChaCha8Rng) -> Outcome {
    let replaced: Vec<SimplicialMap> = maps.iter().map(|f| ctx.walk(f, rng)).collect();
    let a = try_val!(ctx.sd(maps));
    let b = try_val!(ctx.sd(&replaced));
    if a == b {
        Outcome::Pass
    } else {
        Outcome::Fail(format!(
            "replacing maps within their classes changed {} to {}",
            show(a),
            show(b)
        ))
    }
}

fn subdivision_monotone(ctx: &Ctx, maps: &[SimplicialMap], _: &mut ChaCha8Rng) -> Outcome {
    let (k, l) = (maps[0].domain(), maps[0].codomain());
    let cap = ctx.config.max_subdivision_faces;
    if k.num_faces() > cap || l.num_faces() > cap {
        return Outcome::Skip;
    }
    let (Ok(sk), Ok(sl)) = (barycentric_subdivision(k), barycentric_subdivision(l)) else {
        return Outcome::Skip;
    };
    let sub: Vec<SimplicialMap> = maps
        .iter()
        .map(|f| subdivide_map_between(f, &sk, &sl).expect("matching subdivisions"))
        .collect();
    let budget = &ctx.config.subdivision_budget;
    let lhs = try_val!(ctx.bounds_with(&sub, Mode::All, budget));
    expect_le(
        lhs,
        try_val!(ctx.bounds(maps)),
        "subdivision increased the value",
    )
}

fn collapsible_domain(ctx: &Ctx, maps: &[SimplicialMap], _: &mut ChaCha8Rng) -> Outcome {
    if !is_strongly_collapsible(maps[0].domain()) || !maps[0].codomain().is_edge_path_connected() {
        return Outcome::Skip;
    }
    let v = try_val!(ctx.sd(maps));
    if v == Some(0) {
        Outcome::Pass
    } else {
        Outcome::Fail(format!("strongly collapsible domain but value {}", show(v)))
    }
}

fn collapsible_codomain(ctx: &Ctx, maps: &[SimplicialMap], _: &mut ChaCha8Rng) -> Outcome {
    if !is_strongly_collapsible(maps[0].codomain()) {
        return Outcome::Skip;
    }
    let v = try_val!(ctx.sd(maps));
    if v == Some(0) {
        Outcome::Pass
    } else {
        Outcome::Fail(format!(
            "strongly collapsible codomain but value {}",
            show(v)
        ))
    }
}

fn mode_dominance(ctx: &Ctx, maps: &[SimplicialMap], _: &mut ChaCha8Rng) -> Outcome {
    let budget = &ctx.config.budget;
    let all = try_val!(ctx.bounds_with(maps, Mode::All, budget));
    let induced = try_val!(ctx.bounds_with(maps, Mode::Induced, budget));
    expect_le(all, induced, "mode all above mode induced")
}

fn basepoint_independence(ctx: &Ctx, maps: &[SimplicialMap], rng: &mut ChaCha8Rng) -> Outcome {
    let k = maps[0].domain();
    if !k.is_edge_path_connected() {
        return Outcome::Skip;
    }
    let v = k.label(rng.gen_range(0..k.num_vertices())).to_string();
    let (Ok(a), Ok(b)) = (
        scat(k, Mode::All, &ctx.config.budget),
        scat_at(k, &v, Mode::All, &ctx.config.budget),
    ) else {
        return Outcome::Skip;
    };
    if !a.value.is_definite() || !b.value.is_definite() {
        return Outcome::Skip;
    }
    if a.value == b.value {
        Outcome::Pass
    } else {
        Outcome::Fail(format!(
            "scat at {v} is {} but {} at the first vertex",
            b.value, a.value
        ))
    }
}

const CHECKS: &[(&str, Check)] = &[
    ("permutation_invariance", permutation_invariance),
    ("zero_characterization", zero_characterization),
    ("monotone_in_arity", monotone_in_arity),
    ("precomposition", precomposition),
    ("precomposition_equivalent", precomposition_equivalent),
    ("postcomposition", postcomposition),
    ("bounded_by_scat", bounded_by_scat),
    ("factor_through", factor_through),
    ("class_replacement", class_replacement),
    ("subdivision_monotone", subdivision_monotone),
    ("collapsible_domain", collapsible_domain),
    ("collapsible_codomain", collapsible_codomain),
    ("mode_dominance", mode_dominance),
    ("basepoint_independence", basepoint_independence),
];

/// Names of all checks, in report order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

fn run_check(ctx: &Ctx, check: Check, maps: &[SimplicialMap], seed: u64) -> Outcome {
    check(ctx, maps, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Smaller variants of a failing case: one map fewer, or one domain facet fewer.
fn shrink_candidates(maps: &[SimplicialMap]) -> Vec<Vec<SimplicialMap>> {
    let mut out = Vec::new();
    if maps.len() > 2 {
        for i in 0..maps.len() {
            let mut v = maps.to_vec();
            v.remove(i);
            out.push(v);
        }
    }
    let k = maps[0].domain();
    if k.facets().len() > 1 {
        for i in 0..k.facets().len() {
            let keep: Vec<_> = k
                .facets()
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, f)| *f)
                .collect();
            let Ok(omega) = Subcomplex::new(k, keep) else {
                continue;
            };
            if let Ok(v) = maps
                .iter()
                .map(|f| f.restrict(&omega))
                .collect::<Result<Vec<_>, _>>()
            {
                out.push(v);
            }
        }
    }
    out
}

fn shrink(
    ctx: &Ctx,
    check: Check,
    maps: Vec<SimplicialMap>,
    seed: u64,
    msg: String,
) -> (Vec<SimplicialMap>, String) {
    let (mut best, mut best_msg) = (maps, msg);
    'outer: for _ in 0..64 {
        for cand in shrink_candidates(&best) {
            if let Outcome::Fail(m) = run_check(ctx, check, &cand, seed) {
                best = cand;
                best_msg = m;
                continue 'outer;
            }
        }
        break;
    }
    (best, best_msg)
}

fn render(maps: &[SimplicialMap], msg: &str) -> String {
    let k = maps[0].domain();
    let l = maps[0].codomain();
    let facets = |c: &Complex| -> String {
        c.facets()
            .iter()
            .map(|f| format!("{{{}}}", c.simplex_labels(*f).join(",")))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let tables: Vec<String> = maps
        .iter()
        .map(|f| {
            f.table()
                .iter()
                .map(|(a, b)| format!("{a}->{b}"))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    format!(
        "{msg}; domain {}; codomain {}; maps [{}]",
        facets(k),
        facets(l),
        tables.join(" | ")
    )
}

/// Runs every check on `config.samples` random tuples drawn from `corpus`.
pub fn verify_theorem_suite(corpus: &[Arc<Complex>], config: &SuiteConfig) -> SuiteReport {
    verify_tuples(corpus, &[], config)
}

/// Runs every check on the given tuples, then on `config.samples` random
/// ones. Auxiliary complexes are drawn from `corpus`.
pub fn verify_tuples(
    corpus: &[Arc<Complex>],
    fixed: &[Vec<SimplicialMap>],
    config: &SuiteConfig,
) -> SuiteReport {
    let ctx = Ctx { corpus, config };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut cases: Vec<(Vec<SimplicialMap>, u64)> = fixed
        .iter()
        .filter(|t| t.len() >= 2)
        .map(|t| (t.clone(), rng.gen()))
        .collect();
    cases.extend((0..config.samples).map(|_| {
        let k = ctx.pick(&mut rng).clone();
        let l = ctx.pick(&mut rng).clone();
        let n = rng.gen_range(2..=config.max_arity.max(2));
        let maps = (0..n).map(|_| random_map(&k, &l, &mut rng)).collect();
        (maps, rng.gen())
    }));
    let outcomes: Vec<Vec<Outcome>> = par::map(&cases, |(maps, seed)| {
        CHECKS
            .iter()
            .enumerate()
            .map(|(i, (_, check))| {
                run_check(
                    &ctx,
                    *check,
                    maps,
                    seed ^ (i as u64).wrapping_mul(0x9e37_79b9),
                )
            })
            .collect()
    });
    let mut checks: Vec<CheckReport> = CHECKS
        .iter()
        .map(|(name, _)| CheckReport {
            name,
            trials: 0,
            skipped: 0,
            violations: 0,
            counterexample: None,
        })
        .collect();
    for ((maps, seed), row) in cases.iter().zip(outcomes) {
        for (i, outcome) in row.into_iter().enumerate() {
            let report = &mut checks[i];
            match outcome {
                Outcome::Pass => report.trials += 1,
                Outcome::Skip => report.skipped += 1,
                Outcome::Fail(msg) => {
                    report.trials += 1;
                    report.violations += 1;
                    if report.counterexample.is_none() {
                        let s = seed ^ (i as u64).wrapping_mul(0x9e37_79b9);
                        let (small, msg) = shrink(&ctx, CHECKS[i].1, maps.clone(), s, msg);
                        report.counterexample = Some(render(&small, &msg));
                    }
                }
            }
        }
    }
    SuiteReport {
        tuples: cases.len(),
        checks,
    }
}

/// A small built-in corpus: collapsible and non-collapsible complexes on at
/// most six vertices.
pub fn small_corpus() -> Vec<Arc<Complex>> {
    let specs: Vec<Vec<Vec<&str>>> = vec![
        vec![vec!["0"]],
        vec![vec!["0", "1"]],
        vec![vec!["0", "1"], vec!["1", "2"]],
        vec![vec!["0", "1"], vec!["0", "2"], vec!["1", "2"]],
        vec![vec!["0", "1", "2"]],
        vec![vec!["0"], vec!["1"]],
        vec![
            vec!["0", "1"],
            vec!["1", "2"],
            vec!["2", "3"],
            vec!["3", "0"],
        ],
        vec![vec!["0", "1", "2"], vec!["2", "3"]],
        vec![vec!["0", "1", "2"], vec!["0", "2", "3"]],
        vec![
            vec!["0", "1"],
            vec!["0", "2"],
            vec!["1", "2"],
            vec!["2", "3"],
            vec!["3", "4"],
            vec!["2", "4"],
        ],
        vec![
            vec!["a", "0", "1"],
            vec!["a", "1", "2"],
            vec!["a", "2", "0"],
        ],
        vec![
            vec!["0", "1"],
            vec!["1", "2"],
            vec!["2", "3"],
            vec!["3", "4"],
            vec!["4", "0"],
        ],
        vec![
            vec!["0", "1", "2"],
            vec!["0", "2", "3"],
            vec!["0", "3", "1"],
            vec!["1", "2", "3"],
        ],
        vec![
            vec!["A", "B", "P"],
            vec!["B", "P", "Q"],
            vec!["B", "Q", "C"],
            vec!["C", "Q", "R"],
            vec!["C", "R", "A"],
            vec!["A", "R", "P"],
            vec!["P", "Q", "R"],
        ],
    ];
    specs
        .into_iter()
        .map(|f| Arc::new(Complex::build(f).expect("valid corpus complex")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let config = SuiteConfig {
            samples: 25,
            ..SuiteConfig::default()
        };
        let report = verify_theorem_suite(&small_corpus(), &config);
        assert_eq!(report.tuples, 25);
        for c in &report.checks {
            assert_eq!(c.violations, 0, "{}: {:?}", c.name, c.counterexample);
        }
        assert!(report.checks.iter().any(|c| c.trials > 0));
    }

    #[test]
    fn shrinking_reduces_a_failing_case() {
        fn always_fails(_: &Ctx, maps: &[SimplicialMap], _: &mut ChaCha8Rng) -> Outcome {
            if maps[0].domain().num_vertices() >= 2 {
                Outcome::Fail("two or more vertices".into())
            } else {
                Outcome::Pass
            }
        }
        let corpus = small_corpus();
        let config = SuiteConfig::default();
        let ctx = Ctx {
            corpus: &corpus,
            config: &config,
        };
        let k = Arc::new(Complex::build([["0", "1"], ["1", "2"], ["2", "3"]]).unwrap());
        let maps = vec![SimplicialMap::identity(&k); 3];
        let (small, _) = shrink(&ctx, always_fails, maps, 1, String::new());
        assert_eq!(small.len(), 2);
        assert_eq!(small[0].domain().facets().len(), 1);
    }

    #[test]
    fn deterministic() {
        let config = SuiteConfig {
            samples: 10,
            ..SuiteConfig::default()
        };
        let a = verify_theorem_suite(&small_corpus(), &config);
        let b = verify_theorem_suite(&small_corpus(), &config);
        let key = |r: &SuiteReport| {
            r.checks
                .iter()
                .map(|c| (c.trials, c.skipped))
                .collect::<Vec<_>>()
        };
        assert_eq!(key(&a), key(&b));
    }
}
