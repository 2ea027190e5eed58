//! Backtracking searches for monochromatic copies of `F_I` members inside a
//! coloring, and for order-preserving copies of one hypergraph in another.
//!
//! The copy search runs colors outermost, then distinguished tuples
//! `x_0 < x_1 < ... < x_n` in lexicographic order. Once `x_0`, `x_1` and the
//! color are fixed, the vertices `x_J` for different `J` constrain nothing but
//! their own edge, so each `J` only needs *some* admissible leaf in
//! `[x_0, x_1]`; the least one is recorded. Admissibility depends only on the
//! leaves `{x_j : j ∈ J}`, which repeat across tuples and are memoized.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{Coloring, Palette, Reflected, MAX_UNIFORMITY};
use crate::error::{Error, Result};
use crate::family::{FamilySpec, Flavor, OrderedHypergraph};

pub const AVOIDANCE_SCHEMA: &str = "ramsey-stepup/avoidance/v1";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl SearchLimits {
    pub fn unlimited() -> Self {
        SearchLimits::default()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCounters {
    /// Partial distinguished tuples visited.
    pub nodes: u64,
    /// Partial tuples abandoned because some edge had no admissible `x_J`.
    pub prunes: u64,
    /// Coloring evaluations.
    pub evaluations: u64,
    pub memo_hits: u64,
}

impl std::ops::AddAssign for SearchCounters {
    fn add_assign(&mut self, o: Self) {
        self.nodes += o.nodes;
        self.prunes += o.prunes;
        self.evaluations += o.evaluations;
        self.memo_hits += o.memo_hits;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JVertex {
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    pub leaf: u64,
}

/// A monochromatic copy. For `F` the distinguished leaves increase; for
/// `revF` they decrease, since the copy lives in the reversed order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoCopyWitness {
    pub flavor: Flavor,
    pub color: u8,
    pub distinguished: Vec<u64>,
    /// One entry per `J ∈ Ω_I` in colex order, `I` last.
    pub assignment: Vec<JVertex>,
}

impl MonoCopyWitness {
    /// Edges `{x_J} ∪ {x_j : j ∈ J}`, each sorted ascending, in `Ω_I` order.
    pub fn edges(&self) -> Vec<Vec<u64>> {
        self.assignment
            .iter()
            .map(|a| {
                let mut e: Vec<u64> = std::iter::once(a.leaf)
                    .chain(a.j.iter().map(|&i| self.distinguished[i]))
                    .collect();
                e.sort_unstable();
                e
            })
            .collect()
    }

    /// Image under `x -> ground + 1 - x`, which turns an `F` copy into a `revF`
    /// copy and back.
    pub fn reflect(&self, ground: u64) -> MonoCopyWitness {
        MonoCopyWitness {
            flavor: match self.flavor {
                Flavor::F => Flavor::RevF,
                Flavor::RevF => Flavor::F,
                other => other,
            },
            color: self.color,
            distinguished: self.distinguished.iter().map(|&x| ground + 1 - x).collect(),
            assignment: self
                .assignment
                .iter()
                .map(|a| JVertex {
                    j: a.j.clone(),
                    leaf: ground + 1 - a.leaf,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SearchOutcome {
    Clean,
    Witness { witness: MonoCopyWitness },
    Indeterminate { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub counters: SearchCounters,
}

/// Searches `chi` for a copy of a member of `F_I` (or `rev F_I`, following
/// `spec.flavor`) whose edges all get one color from `colors`.
///
/// Returns the least witness ordered by color, then distinguished tuple, then
/// assignment. For `revF` the order is taken in the reversed leaf order, so the
/// result is the reflection of the least `F` witness of the reflected coloring.
/// Parallel branches over `x_0` are merged in order, so both the witness and
/// the counters are independent of the worker count.
pub fn find_mono_copy(
    chi: &dyn Coloring,
    spec: &FamilySpec,
    colors: &[u8],
    limits: SearchLimits,
) -> Result<SearchResult> {
    spec.validate()?;
    let reversed = match spec.flavor {
        Flavor::F => false,
        Flavor::RevF => true,
        other => {
            return Err(Error::InvalidParams(format!(
                "colored copy search handles F and revF, not {other}"
            )))
        }
    };
    if chi.uniformity() != spec.k {
        return Err(Error::Arity {
            expected: chi.uniformity(),
            got: spec.k,
        });
    }
    if chi.ground_size() < spec.n as u64 + 1 {
        return Err(Error::GroundTooSmall {
            ground: chi.ground_size(),
            needed: spec.n as u64 + 1,
        });
    }
    let mut colors = colors.to_vec();
    colors.sort_unstable();
    colors.dedup();
    if let Some(&bad) = colors.iter().find(|&&c| !chi.palette().contains(c)) {
        return Err(Error::ColorOutOfPalette {
            color: bad,
            palette: chi.palette().name(),
        });
    }

    let plan = Plan::new(spec);
    let started = Instant::now();
    let budget = Budget {
        limits,
        started,
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
    };
    let mut counters = SearchCounters::default();
    let ground = chi.ground_size();
    for &alpha in &colors {
        let branches: Vec<Branch> = (1..=ground - spec.n as u64)
            .into_par_iter()
            .map(|u0| {
                let mut s = State::new(chi, &plan, &budget, ground, reversed, alpha, u0);
                let outcome = s.run();
                (outcome, s.counters)
            })
            .collect();
        for (_, c) in &branches {
            counters += *c;
        }
        for (outcome, _) in branches {
            match outcome {
                BranchOutcome::Exhausted => {}
                BranchOutcome::Stopped => {
                    return Ok(SearchResult {
                        outcome: SearchOutcome::Indeterminate {
                            reason: budget.reason(),
                        },
                        counters,
                    })
                }
                BranchOutcome::Found(w) => {
                    return Ok(SearchResult {
                        outcome: SearchOutcome::Witness { witness: w },
                        counters,
                    })
                }
            }
        }
    }
    Ok(SearchResult {
        outcome: SearchOutcome::Clean,
        counters,
    })
}

/// [`find_mono_copy`] for the flavor `F`.
pub fn find_mono_f_copy(
    chi: &dyn Coloring,
    spec: &FamilySpec,
    colors: &[u8],
    limits: SearchLimits,
) -> Result<SearchResult> {
    find_mono_copy(chi, &spec.with_flavor(Flavor::F), colors, limits)
}

/// `revF` copies of `chi`, found as `F` copies of the reflected coloring.
pub fn find_mono_revf_copy_reflected(
    chi: &dyn Coloring,
    spec: &FamilySpec,
    colors: &[u8],
    limits: SearchLimits,
) -> Result<SearchResult> {
    let mirror = Reflected::new(chi);
    let mut r = find_mono_copy(&mirror, &spec.with_flavor(Flavor::F), colors, limits)?;
    if let SearchOutcome::Witness { witness } = &mut r.outcome {
        *witness = witness.reflect(chi.ground_size());
    }
    Ok(r)
}

type Branch = (BranchOutcome, SearchCounters);

enum BranchOutcome {
    Exhausted,
    Stopped,
    Found(MonoCopyWitness),
}

struct Budget {
    limits: SearchLimits,
    started: Instant,
    nodes: AtomicU64,
    stop: AtomicBool,
}

impl Budget {
    fn tick(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return false;
        }
        let done = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over_nodes = self.limits.max_nodes.is_some_and(|m| done > m);
        let over_time = done.is_multiple_of(1024) && self.limits.max_time.is_some_and(|t| self.started.elapsed() > t);
        if over_nodes || over_time {
            self.stop.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn reason(&self) -> String {
        match self.limits.max_nodes {
            Some(m) if self.nodes.load(Ordering::Relaxed) > m => format!("node budget {m} exhausted"),
            _ => format!(
                "time budget {} ms exhausted",
                self.limits.max_time.map_or(0, |t| t.as_millis())
            ),
        }
    }
}

/// `Ω_I` grouped by the largest index of each `J`, so an edge is checked as
/// soon as all its distinguished vertices are placed.
struct Plan {
    spec: FamilySpec,
    omega: Vec<Vec<usize>>,
    /// `closing[m]`: indices into `omega` of the `J ≠ I` with `max J = m`.
    closing: Vec<Vec<usize>>,
    index_max: usize,
}

impl Plan {
    fn new(spec: &FamilySpec) -> Self {
        let omega = spec.omega();
        let mut closing = vec![Vec::new(); spec.n + 1];
        for (idx, j) in omega[..omega.len() - 1].iter().enumerate() {
            closing[*j.last().unwrap()].push(idx);
        }
        Plan {
            spec: spec.clone(),
            index_max: *spec.index.last().unwrap(),
            omega,
            closing,
        }
    }
}

/// One branch: a fixed color and a fixed `x_0`, in rank space. Rank `u` is
/// the leaf `u` going forward and the leaf `ground + 1 - u` in reverse.
struct State<'a> {
    chi: &'a dyn Coloring,
    plan: &'a Plan,
    budget: &'a Budget,
    ground: u64,
    reversed: bool,
    alpha: u8,
    ranks: Vec<u64>,
    assignment: Vec<u64>,
    memo: HashMap<Vec<u64>, Option<u64>>,
    counters: SearchCounters,
}

impl<'a> State<'a> {
    fn new(
        chi: &'a dyn Coloring,
        plan: &'a Plan,
        budget: &'a Budget,
        ground: u64,
        reversed: bool,
        alpha: u8,
        u0: u64,
    ) -> Self {
        let mut ranks = vec![0; plan.spec.n + 1];
        ranks[0] = u0;
        State {
            chi,
            plan,
            budget,
            ground,
            reversed,
            alpha,
            ranks,
            assignment: vec![0; plan.omega.len()],
            memo: HashMap::new(),
            counters: SearchCounters::default(),
        }
    }

    fn leaf(&self, u: u64) -> u64 {
        if self.reversed {
            self.ground + 1 - u
        } else {
            u
        }
    }

    fn color_of(&mut self, ranks: &[u64]) -> u8 {
        let mut buf = [0u64; MAX_UNIFORMITY];
        let k = ranks.len();
        for (slot, &u) in buf.iter_mut().zip(ranks) {
            *slot = self.leaf(u);
        }
        buf[..k].sort_unstable();
        self.counters.evaluations += 1;
        self.chi.color_unchecked(&buf[..k])
    }

    fn run(&mut self) -> BranchOutcome {
        let n = self.plan.spec.n as u64;
        let u0 = self.ranks[0];
        for u1 in u0 + 1..=self.ground - n + 1 {
            self.ranks[1] = u1;
            self.memo.clear();
            match self.place(1) {
                BranchOutcome::Exhausted => {}
                other => return other,
            }
        }
        BranchOutcome::Exhausted
    }

    /// `ranks[..=m]` are placed; check the edges they close and go deeper.
    fn place(&mut self, m: usize) -> BranchOutcome {
        if !self.budget.tick() {
            return BranchOutcome::Stopped;
        }
        self.counters.nodes += 1;
        if m == self.plan.index_max {
            let mut e = [0u64; MAX_UNIFORMITY];
            e[0] = self.ranks[0];
            for (slot, &i) in e[1..].iter_mut().zip(&self.plan.spec.index) {
                *slot = self.ranks[i];
            }
            if self.color_of(&e[..self.plan.spec.k]) != self.alpha {
                self.counters.prunes += 1;
                return BranchOutcome::Exhausted;
            }
            let last = self.assignment.len() - 1;
            self.assignment[last] = self.ranks[0];
        }
        for pos in 0..self.plan.closing[m].len() {
            let idx = self.plan.closing[m][pos];
            match self.admissible(idx) {
                Some(u) => self.assignment[idx] = u,
                None => {
                    self.counters.prunes += 1;
                    return BranchOutcome::Exhausted;
                }
            }
        }
        let n = self.plan.spec.n;
        if m == n {
            return BranchOutcome::Found(self.witness());
        }
        let top = self.ground - (n - m - 1) as u64;
        for u in self.ranks[m] + 1..=top {
            self.ranks[m + 1] = u;
            match self.place(m + 1) {
                BranchOutcome::Exhausted => {}
                other => return other,
            }
        }
        BranchOutcome::Exhausted
    }

    /// Least rank in `[x_0, x_1]` completing `J` to an edge of color `alpha`.
    fn admissible(&mut self, idx: usize) -> Option<u64> {
        let key: Vec<u64> = self.plan.omega[idx].iter().map(|&j| self.ranks[j]).collect();
        if let Some(&hit) = self.memo.get(&key) {
            self.counters.memo_hits += 1;
            return hit;
        }
        let mut e = [0u64; MAX_UNIFORMITY];
        let k = key.len() + 1;
        e[1..k].copy_from_slice(&key);
        let found = (self.ranks[0]..=self.ranks[1]).find(|&u| {
            e[0] = u;
            self.color_of(&e[..k]) == self.alpha
        });
        self.memo.insert(key, found);
        found
    }

    fn witness(&self) -> MonoCopyWitness {
        MonoCopyWitness {
            flavor: if self.reversed { Flavor::RevF } else { Flavor::F },
            color: self.alpha,
            distinguished: self.ranks.iter().map(|&u| self.leaf(u)).collect(),
            assignment: self
                .plan
                .omega
                .iter()
                .zip(&self.assignment)
                .map(|(j, &u)| JVertex {
                    j: j.clone(),
                    leaf: self.leaf(u),
                })
                .collect(),
        }
    }
}

/// Re-checks a witness from scratch with the checked coloring interface.
pub fn check_witness(chi: &dyn Coloring, spec: &FamilySpec, w: &MonoCopyWitness) -> Result<bool> {
    let sign_ok = |a: u64, b: u64| match w.flavor {
        Flavor::F => a < b,
        Flavor::RevF => a > b,
        _ => false,
    };
    let d = &w.distinguished;
    if d.len() != spec.n + 1 || d.windows(2).any(|p| !sign_ok(p[0], p[1])) {
        return Ok(false);
    }
    let omega = spec.omega();
    if w.assignment.len() != omega.len() || w.assignment.iter().zip(&omega).any(|(a, j)| &a.j != j) {
        return Ok(false);
    }
    let (lo, hi) = (d[0].min(d[1]), d[0].max(d[1]));
    if w.assignment.last().unwrap().leaf != d[0] || w.assignment.iter().any(|a| a.leaf < lo || a.leaf > hi) {
        return Ok(false);
    }
    for e in w.edges() {
        if chi.color(&e)? != w.color {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Presence of an edge as a 0/1 coloring, so the copy search doubles as a
/// containment test for ordered hypergraphs.
struct EdgeIndicator {
    k: usize,
    v: u64,
    edges: HashSet<Vec<u64>>,
}

impl Coloring for EdgeIndicator {
    fn uniformity(&self) -> usize {
        self.k
    }

    fn ground_size(&self) -> u64 {
        self.v
    }

    fn palette(&self) -> Palette {
        Palette::Binary
    }

    fn color_unchecked(&self, set: &[u64]) -> u8 {
        u8::from(self.edges.contains(set))
    }
}

/// Whether `h` contains some member of `F_I` (or `rev F_I`) as an ordered
/// subhypergraph.
pub fn contains_f_member(h: &OrderedHypergraph, spec: &FamilySpec, reversed: bool) -> Result<bool> {
    spec.validate()?;
    if h.uniformity().is_some_and(|k| k != spec.k) || h.edges.is_empty() || h.v < spec.n as u64 + 1 {
        return Ok(false);
    }
    let ind = EdgeIndicator {
        k: spec.k,
        v: h.v,
        edges: h.edges.iter().cloned().collect(),
    };
    let flavor = if reversed { Flavor::RevF } else { Flavor::F };
    let r = find_mono_copy(&ind, &spec.with_flavor(flavor), &[1], SearchLimits::unlimited())?;
    Ok(matches!(r.outcome, SearchOutcome::Witness { .. }))
}

/// Least order-preserving embedding of `target` into `host` carrying edges to
/// edges, as the list of host images of target vertices `1..=v`.
pub fn find_ordered_copy(host: &OrderedHypergraph, target: &OrderedHypergraph) -> Result<Option<Vec<u64>>> {
    let Some(k) = target.uniformity() else {
        return Err(Error::InvalidParams("target has no edges".into()));
    };
    if host.uniformity().is_some_and(|hk| hk != k) {
        return Err(Error::InvalidParams(format!(
            "host is {}-uniform, target is {k}-uniform",
            host.uniformity().unwrap()
        )));
    }
    if host.v < target.v || host.edges.len() < target.edges.len() {
        return Ok(None);
    }
    // host edges by their first k-1 vertices
    let mut completions: HashMap<&[u64], Vec<u64>> = HashMap::new();
    let mut host_degree = vec![0usize; host.v as usize + 1];
    for e in &host.edges {
        completions.entry(&e[..k - 1]).or_default().push(e[k - 1]);
        for &x in e {
            host_degree[x as usize] += 1;
        }
    }
    for list in completions.values_mut() {
        list.sort_unstable();
    }
    let mut target_degree = vec![0usize; target.v as usize + 1];
    let mut closing: Vec<Vec<&[u64]>> = vec![Vec::new(); target.v as usize + 1];
    for e in &target.edges {
        closing[e[k - 1] as usize].push(&e[..k - 1]);
        for &x in e {
            target_degree[x as usize] += 1;
        }
    }
    let search = OrderedSearch {
        host_v: host.v,
        target_v: target.v,
        completions,
        host_degree,
        target_degree,
        closing,
    };
    let mut image = vec![0u64; target.v as usize + 1];
    Ok(search.extend(1, &mut image).then(|| image[1..].to_vec()))
}

struct OrderedSearch<'a> {
    host_v: u64,
    target_v: u64,
    completions: HashMap<&'a [u64], Vec<u64>>,
    host_degree: Vec<usize>,
    target_degree: Vec<usize>,
    closing: Vec<Vec<&'a [u64]>>,
}

impl OrderedSearch<'_> {
    fn extend(&self, t: u64, image: &mut [u64]) -> bool {
        if t > self.target_v {
            return true;
        }
        let lo = image[t as usize - 1] + 1;
        let hi = self.host_v - (self.target_v - t);
        let mut key = Vec::new();
        let candidates: Vec<u64> = match self.closing[t as usize].split_first() {
            None => (lo..=hi).collect(),
            Some((first, rest)) => {
                let mapped = |e: &[u64], key: &mut Vec<u64>| {
                    key.clear();
                    key.extend(e.iter().map(|&x| image[x as usize]));
                };
                mapped(first, &mut key);
                let Some(base) = self.completions.get(key.as_slice()) else {
                    return false;
                };
                base.iter()
                    .copied()
                    .filter(|&y| y >= lo && y <= hi)
                    .filter(|&y| {
                        rest.iter().all(|e| {
                            mapped(e, &mut key);
                            self.completions
                                .get(key.as_slice())
                                .is_some_and(|l| l.binary_search(&y).is_ok())
                        })
                    })
                    .collect()
            }
        };
        for y in candidates {
            if self.host_degree[y as usize] < self.target_degree[t as usize] {
                continue;
            }
            image[t as usize] = y;
            if self.extend(t + 1, image) {
                return true;
            }
        }
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub flavor: Flavor,
    pub color: u8,
    pub result: SearchOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AvoidanceReport {
    pub schema: String,
    pub spec: FamilySpec,
    pub ground: u64,
    pub slots: Vec<Slot>,
    /// Whether the direct reversed search and the reflected search agreed on
    /// every `revF` slot, witness included.
    pub reflection_agrees: bool,
    pub counters: SearchCounters,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Clean,
    Witness,
    Indeterminate,
}

impl AvoidanceReport {
    pub fn verdict(&self) -> Verdict {
        let has = |f: fn(&SearchOutcome) -> bool| self.slots.iter().any(|s| f(&s.result));
        if has(|r| matches!(r, SearchOutcome::Witness { .. })) {
            Verdict::Witness
        } else if has(|r| matches!(r, SearchOutcome::Indeterminate { .. })) {
            Verdict::Indeterminate
        } else {
            Verdict::Clean
        }
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &MonoCopyWitness> {
        self.slots.iter().filter_map(|s| match &s.result {
            SearchOutcome::Witness { witness } => Some(witness),
            _ => None,
        })
    }
}

/// Runs the four slots `(F, 0)`, `(F, 1)`, `(revF, 2)`, `(revF, 3)`.
///
/// Each `revF` slot is searched twice, directly in the reversed order and as
/// `F` in the reflected coloring; the report records whether they agree.
pub fn verify_stepup_avoidance(chi: &dyn Coloring, spec: &FamilySpec, limits: SearchLimits) -> Result<AvoidanceReport> {
    let started = Instant::now();
    let spec = spec.with_flavor(Flavor::F);
    let mut slots = Vec::new();
    let mut counters = SearchCounters::default();
    let mut agrees = true;
    for color in [0, 1] {
        let r = find_mono_copy(chi, &spec, &[color], limits)?;
        counters += r.counters;
        slots.push(Slot {
            flavor: Flavor::F,
            color,
            result: r.outcome,
        });
    }
    for color in [2, 3] {
        let direct = find_mono_copy(chi, &spec.with_flavor(Flavor::RevF), &[color], limits)?;
        let mirrored = find_mono_revf_copy_reflected(chi, &spec, &[color], limits)?;
        counters += direct.counters;
        let indeterminate = |o: &SearchOutcome| matches!(o, SearchOutcome::Indeterminate { .. });
        if !indeterminate(&direct.outcome) && !indeterminate(&mirrored.outcome) {
            agrees &= direct.outcome == mirrored.outcome;
        }
        slots.push(Slot {
            flavor: Flavor::RevF,
            color,
            result: direct.outcome,
        });
    }
    Ok(AvoidanceReport {
        schema: AVOIDANCE_SCHEMA.to_string(),
        spec,
        ground: chi.ground_size(),
        slots,
        reflection_agrees: agrees,
        counters,
        elapsed_ms: Some(started.elapsed().as_millis() as u64),
    })
}
