//! Higher contiguity distance, simplicial LS category and discrete TC_n.
//!
//! `SD(φ1, ..., φn)` is one less than the least number of subcomplexes
//! covering the domain on each of which the restricted maps share a
//! contiguity class. Call such a subcomplex good. Goodness passes to
//! subcomplexes, and a subcomplex covers a face iff it covers a facet above
//! it, so a minimum cover can be read off a partition of the facets into
//! groups whose pieces are good:
//!
//! * mode `all`: the piece of a group is the subcomplex its facets span;
//! * mode `induced`: the piece is the full subcomplex on the group's vertices.
//!
//! The search judges single facets (some bad facet means the value is
//! infinite), then the whole domain (value 0), then raises a lower bound
//! from a clique of pairwise incompatible facets and takes a first-fit
//! partition as the incumbent. Each group count between the bounds is then
//! decided by a depth-first assignment of facets to groups, which either
//! finds a cover or proves that none exists.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::complex::{bit, bits, components_of, maximal_masks, Complex, Mode, Subcomplex};
use crate::contiguity::{
    decide_class, reduced_chain, ClassBudget, ContiguityCertificate, Outcome, Verdict,
};
use crate::error::{Error, Result};
use crate::maps::{compose, SimplicialMap};
use crate::par;
use crate::product::{
    axis_inclusions_factored, categorical_power, diagonal, projections, ProductComplex, ProductMap,
};

/// Search limits for one distance computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceBudget {
    /// Limits for each class decision made while judging a piece.
    pub class: ClassBudget,
    /// Maximum number of distinct pieces judged.
    pub max_pieces: usize,
    /// Maximum number of nodes of the partition search.
    pub max_subcomplexes: usize,
}

impl Default for DistanceBudget {
    fn default() -> Self {
        DistanceBudget {
            class: ClassBudget::default(),
            max_pieces: 200_000,
            max_subcomplexes: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SdValue {
    Finite(usize),
    Infinite,
    /// The value lies in `lower..=upper`; `upper` is absent when no cover
    /// was certified.
    Unknown {
        lower: usize,
        upper: Option<usize>,
    },
}

impl SdValue {
    pub fn finite(self) -> Option<usize> {
        match self {
            SdValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_definite(self) -> bool {
        !matches!(self, SdValue::Unknown { .. })
    }
}

impl fmt::Display for SdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SdValue::Finite(v) => write!(f, "{v}"),
            SdValue::Infinite => write!(f, "infinite"),
            SdValue::Unknown {
                lower,
                upper: Some(u),
            } => write!(f, "unknown in [{lower}, {u}]"),
            SdValue::Unknown { lower, upper: None } => write!(f, "unknown, at least {lower}"),
        }
    }
}

/// Evidence that two consecutive restricted maps share a class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Link {
    Chain(ContiguityCertificate),
    /// One chain per coordinate of maps into a product.
    Coordinatewise(Vec<ContiguityCertificate>),
}

impl Link {
    pub fn verify(&self) -> bool {
        match self {
            Link::Chain(c) => c.verify(),
            Link::Coordinatewise(cs) => cs.iter().all(|c| c.verify()),
        }
    }

    /// Steps of the combined chain (coordinate chains run in parallel).
    pub fn steps(&self) -> usize {
        match self {
            Link::Chain(c) => c.steps(),
            Link::Coordinatewise(cs) => cs.iter().map(|c| c.steps()).max().unwrap_or(0),
        }
    }

    fn links(&self, a: &TupleMap, b: &TupleMap) -> bool {
        match (self, a, b) {
            (Link::Chain(c), TupleMap::Plain(a), TupleMap::Plain(b)) => {
                c.first() == a && c.last() == b
            }
            (Link::Coordinatewise(cs), TupleMap::Factored(a), TupleMap::Factored(b)) => {
                cs.len() == a.arity()
                    && a.arity() == b.arity()
                    && cs
                        .iter()
                        .zip(a.coords().iter().zip(b.coords()))
                        .all(|(c, (x, y))| c.first() == x && c.last() == y)
            }
            _ => false,
        }
    }
}

/// A tuple of maps with a common domain, either plain or into a product
/// given by coordinates.
#[derive(Debug, Clone)]
pub enum MapTuple {
    Plain(Vec<SimplicialMap>),
    Factored(Vec<ProductMap>),
}

#[derive(Debug, Clone)]
enum TupleMap {
    Plain(SimplicialMap),
    Factored(ProductMap),
}

impl MapTuple {
    pub fn len(&self) -> usize {
        match self {
            MapTuple::Plain(v) => v.len(),
            MapTuple::Factored(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn domain(&self) -> &Arc<Complex> {
        match self {
            MapTuple::Plain(v) => v[0].domain(),
            MapTuple::Factored(v) => v[0].domain(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.len() < 2 {
            return Err(Error::TooFewMaps {
                needed: 2,
                got: self.len(),
            });
        }
        let ok = match self {
            MapTuple::Plain(v) => v.iter().all(|f| f.same_ends(&v[0])),
            MapTuple::Factored(v) => v.iter().all(|f| f.same_ends(&v[0])),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }

    fn restricted(&self, i: usize, omega: &Subcomplex) -> Result<TupleMap> {
        Ok(match self {
            MapTuple::Plain(v) => TupleMap::Plain(v[i].restrict(omega)?),
            MapTuple::Factored(v) => TupleMap::Factored(v[i].restrict(omega)?),
        })
    }

    /// Decides whether maps `i` and `i + 1` share a class on `omega`.
    fn link(&self, i: usize, omega: &Subcomplex, budget: &ClassBudget) -> Result<Option<Link>> {
        match (self.restricted(i, omega)?, self.restricted(i + 1, omega)?) {
            (TupleMap::Plain(a), TupleMap::Plain(b)) => Ok(decide_class(&a, &b, budget)?
                .certificate()
                .cloned()
                .map(Link::Chain)),
            (TupleMap::Factored(a), TupleMap::Factored(b)) => {
                let mut chains = Vec::with_capacity(a.arity());
                for (x, y) in a.coords().iter().zip(b.coords()) {
                    match decide_class(x, y, budget)?.verdict {
                        Verdict::Equivalent(c) => chains.push(c),
                        _ => return Ok(None),
                    }
                }
                Ok(Some(Link::Coordinatewise(chains)))
            }
            _ => unreachable!("tuple kinds are uniform"),
        }
    }
}

/// A certified cover: pieces and, per piece, links between consecutive maps.
#[derive(Debug, Clone)]
pub struct CoverSolution {
    pub pieces: Vec<Subcomplex>,
    pub links: Vec<Vec<Link>>,
}

impl CoverSolution {
    pub fn value(&self) -> usize {
        self.pieces.len() - 1
    }

    /// Checks coverage and replays every link against the restricted maps.
    pub fn verify(&self, tuple: &MapTuple) -> bool {
        let dom = tuple.domain();
        let covered = dom
            .facets()
            .iter()
            .all(|f| self.pieces.iter().any(|p| p.contains(*f)));
        covered
            && self.links.len() == self.pieces.len()
            && self.pieces.iter().zip(&self.links).all(|(omega, links)| {
                **omega.parent() == **dom
                    && links.len() == tuple.len() - 1
                    && links.iter().enumerate().all(|(i, link)| {
                        match (tuple.restricted(i, omega), tuple.restricted(i + 1, omega)) {
                            (Ok(a), Ok(b)) => link.verify() && link.links(&a, &b),
                            _ => false,
                        }
                    })
            })
    }
}

/// Work done by a search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Distinct pieces judged.
    pub pieces_judged: usize,
    /// Nodes of the partition search.
    pub search_nodes: usize,
    /// Maps discovered by all class decisions.
    pub maps_explored: usize,
}

#[derive(Debug, Clone)]
pub struct DistanceReport {
    pub value: SdValue,
    pub solution: Option<CoverSolution>,
    pub mode: Mode,
    pub stats: SearchStats,
    pub budget: DistanceBudget,
    /// A facet no good piece contains, when the value is infinite.
    pub infinite_witness: Option<Vec<String>>,
    /// For discrete TC_n: whether every piece passed the Farber checks.
    pub farber_verified: Option<bool>,
}

/// Tri-state goodness of a single piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PieceVerdict {
    /// Links between consecutive restricted maps.
    Good(Vec<Link>),
    /// Maps `pair` and `pair + 1` (0-based) are in different classes.
    Bad {
        pair: usize,
    },
    Unknown,
}

/// Decides whether the maps, restricted to `omega`, share a class.
pub fn is_good_piece(
    omega: &Subcomplex,
    maps: &[SimplicialMap],
    budget: &ClassBudget,
) -> Result<PieceVerdict> {
    piece_verdict(omega, &MapTuple::Plain(maps.to_vec()), budget)
}

/// [`is_good_piece`] for tuples of any kind.
pub fn piece_verdict(
    omega: &Subcomplex,
    tuple: &MapTuple,
    budget: &ClassBudget,
) -> Result<PieceVerdict> {
    if tuple.is_empty() {
        return Err(Error::TooFewMaps { needed: 1, got: 0 });
    }
    if tuple.len() > 1 {
        tuple.validate()?;
    }
    if **omega.parent() != **tuple.domain() {
        return Err(Error::DomainMismatch);
    }
    let mut links = Vec::new();
    let mut unknown = false;
    for i in 0..tuple.len() - 1 {
        match tuple.link(i, omega, budget)? {
            Some(l) => links.push(l),
            None => {
                if pair_refuted(tuple, i, omega, budget)? {
                    return Ok(PieceVerdict::Bad { pair: i });
                }
                unknown = true;
            }
        }
    }
    Ok(if unknown {
        PieceVerdict::Unknown
    } else {
        PieceVerdict::Good(links)
    })
}

fn pair_refuted(
    tuple: &MapTuple,
    i: usize,
    omega: &Subcomplex,
    budget: &ClassBudget,
) -> Result<bool> {
    Ok(
        match (tuple.restricted(i, omega)?, tuple.restricted(i + 1, omega)?) {
            (TupleMap::Plain(a), TupleMap::Plain(b)) => {
                decide_class(&a, &b, budget)?.verdict == Verdict::NotEquivalent
            }
            (TupleMap::Factored(a), TupleMap::Factored(b)) => {
                let mut refuted = false;
                for (x, y) in a.coords().iter().zip(b.coords()) {
                    refuted |= decide_class(x, y, budget)?.verdict == Verdict::NotEquivalent;
                }
                refuted
            }
            _ => unreachable!("tuple kinds are uniform"),
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Judgment {
    Good,
    Bad,
    Unknown,
}

/// One coordinate layer: codomain and the coordinate table of every map.
struct Layer {
    cod: Arc<Complex>,
    images: Vec<Vec<u8>>,
}

/// The raw data the cover search works on.
struct Problem {
    facets: Vec<u64>,
    layers: Vec<Layer>,
    arity: usize,
    /// When set, a piece must lie inside one of these vertex sets.
    regions: Option<Vec<u64>>,
    class: ClassBudget,
}

impl Problem {
    fn from_tuple(tuple: &MapTuple, class: ClassBudget) -> Self {
        let facets = tuple.domain().facet_masks();
        let layers = match tuple {
            MapTuple::Plain(v) => vec![Layer {
                cod: Arc::clone(v[0].codomain()),
                images: v.iter().map(|f| f.raw().to_vec()).collect(),
            }],
            MapTuple::Factored(v) => (0..v[0].arity())
                .map(|c| Layer {
                    cod: Arc::clone(v[0].coords()[c].codomain()),
                    images: v.iter().map(|f| f.coords()[c].raw().to_vec()).collect(),
                })
                .collect(),
        };
        Problem {
            facets,
            layers,
            arity: tuple.len(),
            regions: None,
            class,
        }
    }

    /// Judges the piece with the given facets (parent vertex masks).
    fn judge(&self, piece: &[u64]) -> (Judgment, usize) {
        let vmask = piece.iter().fold(0, |m, f| m | f);
        if let Some(regions) = &self.regions {
            if !regions.iter().any(|r| vmask & !r == 0) {
                return (Judgment::Bad, 0);
            }
        }
        let verts: Vec<usize> = bits(vmask).collect();
        let mut local = [0usize; 64];
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i;
        }
        let facets: Vec<u64> = piece
            .iter()
            .map(|&f| bits(f).fold(0, |m, v| m | bit(local[v])))
            .collect();
        let mut explored = 0;
        let mut verdict = Judgment::Good;
        for layer in &self.layers {
            let restricted: Vec<Vec<u8>> = layer
                .images
                .iter()
                .map(|img| verts.iter().map(|&v| img[v]).collect())
                .collect();
            for i in 0..self.arity - 1 {
                let (a, b) = (&restricted[i], &restricted[i + 1]);
                if a == b {
                    continue;
                }
                match reduced_chain(
                    &facets,
                    verts.len(),
                    &layer.cod,
                    a,
                    b,
                    &self.class,
                    &mut explored,
                ) {
                    Outcome::Found(_) => {}
                    Outcome::Exhausted => return (Judgment::Bad, explored),
                    Outcome::Budget => verdict = Judgment::Unknown,
                }
            }
        }
        (verdict, explored)
    }
}

/// A group of facets during the search.
#[derive(Clone)]
struct Group {
    members: FixedBitSet,
    verts: u64,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Key {
    Facets(FixedBitSet),
    Verts(u64),
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

struct Search<'a> {
    problem: &'a Problem,
    mode: Mode,
    budget: DistanceBudget,
    memo: HashMap<Key, Judgment>,
    stats: SearchStats,
    /// Some group was rejected only because its judgment was unknown.
    uncertain: bool,
    incompatible: Vec<FixedBitSet>,
}

impl<'a> Search<'a> {
    fn new(problem: &'a Problem, mode: Mode, budget: DistanceBudget) -> Self {
        let m = problem.facets.len();
        Search {
            problem,
            mode,
            budget,
            memo: HashMap::new(),
            stats: SearchStats::default(),
            uncertain: false,
            incompatible: vec![FixedBitSet::with_capacity(m); m],
        }
    }

    fn key(&self, g: &Group) -> Key {
        match self.mode {
            Mode::All => Key::Facets(g.members.clone()),
            Mode::Induced => Key::Verts(g.verts),
        }
    }

    fn piece_facets(&self, g: &Group) -> Vec<u64> {
        match self.mode {
            Mode::All => g.members.ones().map(|i| self.problem.facets[i]).collect(),
            Mode::Induced => {
                maximal_masks(self.problem.facets.iter().map(|f| f & g.verts).collect())
            }
        }
    }

    fn group_of(&self, members: &[usize]) -> Group {
        let mut set = FixedBitSet::with_capacity(self.problem.facets.len());
        let mut verts = 0;
        for &i in members {
            set.insert(i);
            verts |= self.problem.facets[i];
        }
        Group {
            members: set,
            verts,
        }
    }

    fn with(&self, g: &Group, f: usize) -> Group {
        let mut members = g.members.clone();
        members.insert(f);
        Group {
            members,
            verts: g.verts | self.problem.facets[f],
        }
    }

    /// Judges many groups at once, in parallel, respecting the piece budget.
    fn judge_batch(&mut self, groups: &[Group]) -> Vec<Judgment> {
        let keys: Vec<Key> = groups.iter().map(|g| self.key(g)).collect();
        let mut fresh: Vec<usize> = Vec::new();
        let mut seen: HashMap<&Key, ()> = HashMap::new();
        for (i, k) in keys.iter().enumerate() {
            if !self.memo.contains_key(k) && seen.insert(k, ()).is_none() {
                fresh.push(i);
            }
        }
        let room = self
            .budget
            .max_pieces
            .saturating_sub(self.stats.pieces_judged);
        let (run, skip) = fresh.split_at(fresh.len().min(room));
        let pieces: Vec<Vec<u64>> = run.iter().map(|&i| self.piece_facets(&groups[i])).collect();
        let problem = self.problem;
        let results = par::map(&pieces, |p| problem.judge(p));
        self.stats.pieces_judged += run.len();
        for (&i, (j, explored)) in run.iter().zip(results) {
            self.stats.maps_explored += explored;
            self.memo.insert(keys[i].clone(), j);
        }
        for &i in skip {
            self.memo.insert(keys[i].clone(), Judgment::Unknown);
        }
        keys.iter().map(|k| self.memo[k]).collect()
    }

    fn judge(&mut self, g: &Group) -> Judgment {
        let key = self.key(g);
        if let Some(&j) = self.memo.get(&key) {
            return j;
        }
        self.judge_batch(std::slice::from_ref(g))[0]
    }

    /// Facets in breadth-first order over shared vertices.
    fn order(&self) -> Vec<usize> {
        let m = self.problem.facets.len();
        let mut seen = vec![false; m];
        let mut out = Vec::with_capacity(m);
        for start in 0..m {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(f) = queue.pop_front() {
                out.push(f);
                for g in 0..m {
                    if !seen[g] && self.problem.facets[f] & self.problem.facets[g] != 0 {
                        seen[g] = true;
                        queue.push_back(g);
                    }
                }
            }
        }
        out
    }

    fn place(
        &mut self,
        order: &[usize],
        pos: usize,
        groups: &mut Vec<Group>,
        limit: usize,
    ) -> Step {
        let Some(&f) = order.get(pos) else {
            return Step::Found;
        };
        self.stats.search_nodes += 1;
        if self.stats.search_nodes > self.budget.max_subcomplexes {
            return Step::OutOfBudget;
        }
        for gi in 0..groups.len() {
            if groups[gi]
                .members
                .ones()
                .any(|h| self.incompatible[f].contains(h))
            {
                continue;
            }
            let candidate = self.with(&groups[gi], f);
            match self.judge(&candidate) {
                Judgment::Good => {}
                Judgment::Unknown => {
                    self.uncertain = true;
                    continue;
                }
                Judgment::Bad => continue,
            }
            let saved = std::mem::replace(&mut groups[gi], candidate);
            match self.place(order, pos + 1, groups, limit) {
                Step::Exhausted => groups[gi] = saved,
                done => return done,
            }
        }
        if groups.len() < limit {
            groups.push(self.group_of(&[f]));
            match self.place(order, pos + 1, groups, limit) {
                Step::Exhausted => {
                    groups.pop();
                }
                done => return done,
            }
        }
        Step::Exhausted
    }
}

struct Outline {
    value: SdValue,
    groups: Option<Vec<Vec<u64>>>,
    witness: Option<u64>,
    stats: SearchStats,
}

fn cover_search(problem: &Problem, mode: Mode, budget: DistanceBudget) -> Outline {
    let m = problem.facets.len();
    let mut s = Search::new(problem, mode, budget);
    let outline = |s: &Search, value, groups: Option<Vec<Group>>, witness| Outline {
        value,
        groups: groups.map(|gs| gs.iter().map(|g| s.piece_facets(g)).collect()),
        witness,
        stats: s.stats,
    };

    let singles: Vec<Group> = (0..m).map(|i| s.group_of(&[i])).collect();
    let single = s.judge_batch(&singles);
    if let Some(i) = single.iter().position(|&j| j == Judgment::Bad) {
        return outline(&s, SdValue::Infinite, None, Some(problem.facets[i]));
    }
    let everything = s.group_of(&(0..m).collect::<Vec<_>>());
    let whole = s.judge(&everything);
    if whole == Judgment::Good {
        return outline(&s, SdValue::Finite(0), Some(vec![everything]), None);
    }
    let mut lower = usize::from(whole == Judgment::Bad);

    // Pairwise incompatibility, used for pruning and for a clique bound.
    if m <= 256 {
        let pairs: Vec<(usize, usize)> = (0..m)
            .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
            .collect();
        let groups: Vec<Group> = pairs.iter().map(|&(a, b)| s.group_of(&[a, b])).collect();
        let verdicts = s.judge_batch(&groups);
        for (&(a, b), j) in pairs.iter().zip(verdicts) {
            if j == Judgment::Bad {
                s.incompatible[a].insert(b);
                s.incompatible[b].insert(a);
            }
        }
        let mut by_degree: Vec<usize> = (0..m).collect();
        by_degree.sort_by_key(|&i| std::cmp::Reverse(s.incompatible[i].count_ones(..)));
        let mut clique: Vec<usize> = Vec::new();
        for i in by_degree {
            if clique.iter().all(|&c| s.incompatible[i].contains(c)) {
                clique.push(i);
            }
        }
        lower = lower.max(clique.len().saturating_sub(1));
    }

    let order = s.order();
    // First-fit incumbent.
    let mut greedy: Vec<Group> = Vec::new();
    let mut uncovered = false;
    for &f in &order {
        let mut placed = false;
        for gi in 0..greedy.len() {
            if greedy[gi]
                .members
                .ones()
                .any(|h| s.incompatible[f].contains(h))
            {
                continue;
            }
            let candidate = s.with(&greedy[gi], f);
            if s.judge(&candidate) == Judgment::Good {
                greedy[gi] = candidate;
                placed = true;
                break;
            }
        }
        if !placed {
            if single[f] == Judgment::Good {
                greedy.push(s.group_of(&[f]));
            } else {
                uncovered = true;
            }
        }
    }
    if uncovered {
        return outline(&s, SdValue::Unknown { lower, upper: None }, None, None);
    }
    let mut best = greedy;
    let mut frozen = false;
    for limit in (lower + 1)..best.len() {
        s.uncertain = false;
        let mut groups = Vec::new();
        match s.place(&order, 0, &mut groups, limit) {
            Step::Found => {
                best = groups;
                break;
            }
            Step::Exhausted => {
                if s.uncertain {
                    frozen = true;
                } else if !frozen {
                    lower = limit;
                }
            }
            Step::OutOfBudget => {
                let upper = best.len() - 1;
                return outline(
                    &s,
                    SdValue::Unknown {
                        lower,
                        upper: Some(upper),
                    },
                    Some(best),
                    None,
                );
            }
        }
    }
    let upper = best.len() - 1;
    let value = if lower >= upper {
        SdValue::Finite(upper)
    } else {
        SdValue::Unknown {
            lower,
            upper: Some(upper),
        }
    };
    outline(&s, value, Some(best), None)
}

fn run(
    tuple: MapTuple,
    problem: Problem,
    mode: Mode,
    budget: &DistanceBudget,
) -> Result<DistanceReport> {
    let out = cover_search(&problem, mode, *budget);
    let dom = tuple.domain();
    let mut value = out.value;
    let solution = match out.groups {
        Some(groups) => {
            let mut pieces = Vec::with_capacity(groups.len());
            let mut links = Vec::with_capacity(groups.len());
            let mut complete = true;
            for g in groups {
                let omega = Subcomplex::from_masks_unchecked(dom, g);
                let mut row = Vec::with_capacity(tuple.len() - 1);
                for i in 0..tuple.len() - 1 {
                    match tuple.link(i, &omega, &budget.class)? {
                        Some(l) => row.push(l),
                        None => complete = false,
                    }
                }
                pieces.push(omega);
                links.push(row);
            }
            if complete {
                Some(CoverSolution { pieces, links })
            } else {
                value = SdValue::Unknown {
                    lower: 0,
                    upper: None,
                };
                None
            }
        }
        None => None,
    };
    Ok(DistanceReport {
        value,
        solution,
        mode,
        stats: out.stats,
        budget: *budget,
        infinite_witness: out.witness.map(|w| dom.mask_labels(w)),
        farber_verified: None,
    })
}

/// `SD(φ1, ..., φn)` over the given candidate pool.
pub fn contiguity_distance(
    maps: &[SimplicialMap],
    mode: Mode,
    budget: &DistanceBudget,
) -> Result<DistanceReport> {
    distance_of(MapTuple::Plain(maps.to_vec()), mode, budget)
}

/// `SD` of maps into a categorical product, given by coordinates.
pub fn contiguity_distance_factored(
    maps: &[ProductMap],
    mode: Mode,
    budget: &DistanceBudget,
) -> Result<DistanceReport> {
    distance_of(MapTuple::Factored(maps.to_vec()), mode, budget)
}

pub fn distance_of(tuple: MapTuple, mode: Mode, budget: &DistanceBudget) -> Result<DistanceReport> {
    tuple.validate()?;
    let problem = Problem::from_tuple(&tuple, budget.class);
    run(tuple, problem, mode, budget)
}

/// `scat(K)` as `SD(id, c_v0)` with `v0` the first vertex.
///
/// A categorical piece must lie in a single edge-path component, and on a
/// disconnected complex the constant is taken at the first vertex of that
/// component. On connected complexes this is exactly `SD(id, c_v0)`.
pub fn scat(k: &Arc<Complex>, mode: Mode, budget: &DistanceBudget) -> Result<DistanceReport> {
    scat_at(k, k.label(0), mode, budget)
}

/// [`scat`] with an explicit basepoint (used on its component only).
pub fn scat_at(
    k: &Arc<Complex>,
    v0: &str,
    mode: Mode,
    budget: &DistanceBudget,
) -> Result<DistanceReport> {
    let base = k.vertex(v0)?;
    let comps = components_of(&k.facet_masks());
    let reps: Vec<u8> = (0..k.num_vertices())
        .map(|v| {
            let c = comps
                .iter()
                .find(|&&c| c & bit(v) != 0)
                .expect("vertex in a component");
            if c & bit(base) != 0 {
                base as u8
            } else {
                c.trailing_zeros() as u8
            }
        })
        .collect();
    let target = SimplicialMap::from_raw(k, k, reps);
    let tuple = MapTuple::Plain(vec![SimplicialMap::identity(k), target]);
    let mut problem = Problem::from_tuple(&tuple, budget.class);
    if comps.len() > 1 {
        problem.regions = Some(comps);
    }
    run(tuple, problem, mode, budget)
}

/// `TC_n(K)` as `SD(p1, ..., pn)` on `K^n`. Every returned piece is also
/// checked to be a section of the diagonal up to contiguity.
pub fn discrete_tc(
    k: &Arc<Complex>,
    n: usize,
    mode: Mode,
    budget: &DistanceBudget,
) -> Result<DistanceReport> {
    if n < 2 {
        // K^1 = K with a single projection: every cover by one piece works.
        let p = categorical_power(k, 1)?;
        let id = SimplicialMap::identity(p.complex());
        let tuple = MapTuple::Plain(vec![id.clone(), id]);
        let problem = Problem::from_tuple(&tuple, budget.class);
        let mut report = run(tuple, problem, mode, budget)?;
        report.farber_verified = Some(true);
        return Ok(report);
    }
    let p = categorical_power(k, n)?;
    let tuple = MapTuple::Plain(projections(&p));
    let problem = Problem::from_tuple(&tuple, budget.class);
    let mut report = run(tuple, problem, mode, budget)?;
    if let Some(sol) = &report.solution {
        report.farber_verified = Some(farber_checks(k, &p, sol, &budget.class)?);
    }
    Ok(report)
}

/// Clause checks for a TC cover: the stored links make all projections
/// pairwise equivalent on each piece, and `Δ ∘ p1` is equivalent to the
/// inclusion on each piece.
fn farber_checks(
    k: &Arc<Complex>,
    p: &ProductComplex,
    sol: &CoverSolution,
    class: &ClassBudget,
) -> Result<bool> {
    let delta = diagonal(k, p.arity())?;
    let p1 = &projections(p)[0];
    let section = compose(&delta, p1)?;
    let tuple = MapTuple::Plain(projections(p));
    if !sol.verify(&tuple) {
        return Ok(false);
    }
    for omega in &sol.pieces {
        let inc = SimplicialMap::inclusion(omega);
        let sec = section.restrict(omega)?;
        if !decide_class(&sec, &inc, class)?
            .certificate()
            .is_some_and(|c| c.verify())
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `SD(ĩ1, ..., ĩn)` for the axis inclusions `K → K^n` at `v0`, computed
/// in factored form without building `K^n`.
pub fn axis_inclusion_distance(
    k: &Arc<Complex>,
    n: usize,
    v0: &str,
    mode: Mode,
    budget: &DistanceBudget,
) -> Result<DistanceReport> {
    contiguity_distance_factored(&axis_inclusions_factored(k, n, v0)?, mode, budget)
}
