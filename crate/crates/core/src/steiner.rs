//! The blow-up `R`, projective planes of prime order, the glued system `H`,
//! partial Steiner validation and the random-ordering experiment.
//!
//! Vertices of `R` are numbered class by class: `V_1, ..., V_n` (size `m`
//! each), then `V_J` for `J ∈ Ω_I` in colex order with `I` last (size
//! `m^(k-1)` each). The vertex `v_z ∈ V_J` for a transversal
//! `z = (v_j)_{j ∈ J}` sits at the mixed-radix rank of `z`, first coordinate
//! most significant.

use std::collections::HashMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combin::{binomial, for_each_subset};
use crate::error::{Error, Result};
use crate::family::{canonical_member, FamilySpec, Flavor, OrderedHypergraph};
use crate::search::find_ordered_copy;

pub const SYSTEM_SCHEMA: &str = "ramsey-stepup/system/v1";
pub const MONTE_CARLO_SCHEMA: &str = "ramsey-stepup/monte-carlo/v1";

/// Largest edge list any routine here will materialize.
const MAX_MATERIALIZED_EDGES: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupSystem {
    pub n: usize,
    pub k: usize,
    #[serde(rename = "I")]
    pub index: Vec<usize>,
    pub m: u64,
    #[serde(skip)]
    omega: Vec<Vec<usize>>,
    #[serde(skip)]
    class_j: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexClass {
    /// `V_i`, 1-based.
    Single(usize),
    /// `V_J` for the `J` at this position of `Ω_I` (colex, `I` last).
    Index(usize),
}

/// `m = n^(k+3)`.
pub fn default_m(n: usize, k: usize) -> Result<u64> {
    (n as u64)
        .checked_pow(k as u32 + 3)
        .ok_or_else(|| Error::InvalidParams(format!("n^(k+3) overflows for n={n}, k={k}")))
}

pub fn build_blowup(n: usize, k: usize, index: &[usize], m: Option<u64>) -> Result<BlowupSystem> {
    if n < k || k < 3 {
        return Err(Error::InvalidParams(format!("need n >= k >= 3, got n={n}, k={k}")));
    }
    let spec = FamilySpec::new(k, n, index.to_vec(), Flavor::G)?;
    let m = match m {
        Some(0) => return Err(Error::InvalidParams("m must be at least 1".into())),
        Some(m) => m,
        None => default_m(n, k)?,
    };
    let class_j = m
        .checked_pow(k as u32 - 1)
        .ok_or_else(|| Error::InvalidParams(format!("m^(k-1) overflows for m={m}")))?;
    let r = BlowupSystem {
        n,
        k,
        index: index.to_vec(),
        m,
        omega: spec.omega(),
        class_j,
    };
    r.checked_vertex_count()?;
    Ok(r)
}

impl BlowupSystem {
    pub fn omega(&self) -> &[Vec<usize>] {
        &self.omega
    }

    pub fn class_j_size(&self) -> u64 {
        self.class_j
    }

    fn checked_vertex_count(&self) -> Result<u64> {
        (self.m.checked_mul(self.n as u64))
            .and_then(|a| self.class_j.checked_mul(self.omega.len() as u64).and_then(|b| a.checked_add(b)))
            .ok_or_else(|| Error::InvalidParams("vertex count overflows".into()))
    }

    /// `mn + m^(k-1)(C(n-1,k-1) + 1)`.
    pub fn vertex_count(&self) -> u64 {
        self.checked_vertex_count().expect("checked at construction")
    }

    /// `m^(k-1)(C(n-1,k-1) + 1)`.
    pub fn edge_count(&self) -> u64 {
        self.class_j * self.omega.len() as u64
    }

    pub fn single_class(&self, i: usize) -> std::ops::RangeInclusive<u64> {
        let start = (i as u64 - 1) * self.m + 1;
        start..=start + self.m - 1
    }

    pub fn index_class(&self, t: usize) -> std::ops::RangeInclusive<u64> {
        let start = self.m * self.n as u64 + t as u64 * self.class_j + 1;
        start..=start + self.class_j - 1
    }

    pub fn class_of(&self, v: u64) -> Option<VertexClass> {
        if v == 0 || v > self.vertex_count() {
            return None;
        }
        let singles = self.m * self.n as u64;
        Some(if v <= singles {
            VertexClass::Single(((v - 1) / self.m) as usize + 1)
        } else {
            VertexClass::Index(((v - singles - 1) / self.class_j) as usize)
        })
    }

    fn omega_position(&self, j: &[usize]) -> Result<usize> {
        self.omega
            .iter()
            .position(|x| x == j)
            .ok_or_else(|| Error::InvalidParams(format!("{j:?} is not in Ω_I")))
    }

    /// The unique `v_z ∈ V_J` extending the transversal `z` to an edge.
    pub fn extend_transversal(&self, j: &[usize], z: &[u64]) -> Result<u64> {
        let t = self.omega_position(j)?;
        if z.len() != j.len() {
            return Err(Error::NotTransversal(format!("{z:?}")));
        }
        let mut rank = 0u64;
        for (&ji, &v) in j.iter().zip(z) {
            if !self.single_class(ji).contains(&v) {
                return Err(Error::NotTransversal(format!("{z:?}")));
            }
            rank = rank * self.m + (v - self.single_class(ji).start());
        }
        Ok(self.index_class(t).start() + rank)
    }

    /// All edges, class `V_J` by class, transversals in rank order. Each edge
    /// is sorted: the transversal, then `v_z`.
    pub fn edges(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        self.omega.iter().enumerate().flat_map(move |(t, j)| {
            let base = *self.index_class(t).start();
            (0..self.class_j).map(move |rank| {
                let mut e = vec![0u64; self.k];
                let mut r = rank;
                for p in (0..j.len()).rev() {
                    e[p] = self.single_class(j[p]).start() + r % self.m;
                    r /= self.m;
                }
                e[self.k - 1] = base + rank;
                e
            })
        })
    }

    fn materialize_edges(&self) -> Result<Vec<Vec<u64>>> {
        if self.edge_count() > MAX_MATERIALIZED_EDGES {
            return Err(Error::InvalidParams(format!(
                "refusing to materialize {} edges",
                self.edge_count()
            )));
        }
        Ok(self.edges().collect())
    }

    pub fn to_hypergraph(&self) -> Result<OrderedHypergraph> {
        OrderedHypergraph::new(self.vertex_count(), self.materialize_edges()?, Default::default())
    }

    /// Position of each vertex in the order `V_I < V_J (J ≠ I) < V_1 < ... < V_n`,
    /// the pattern members of `G_I` follow.
    pub fn natural_order(&self) -> Vec<u64> {
        let v = self.vertex_count();
        let singles = self.m * self.n as u64;
        // V_I is the last class
        let i_lo = *self.index_class(self.omega.len() - 1).start();
        (1..=v)
            .map(|x| {
                if x >= i_lo {
                    x - i_lo + 1
                } else if x > singles {
                    x - singles + self.class_j
                } else {
                    x + (v - singles)
                }
            })
            .collect()
    }
}

/// Relabels vertex `x` as `position[x - 1]`.
pub fn relabel(h: &OrderedHypergraph, position: &[u64]) -> Result<OrderedHypergraph> {
    let edges = h
        .edges
        .iter()
        .map(|e| e.iter().map(|&x| position[x as usize - 1]).collect())
        .collect();
    OrderedHypergraph::new(h.v, edges, Default::default())
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Smallest prime `p >= N`; Bertrand guarantees `p <= 2N`.
pub fn next_prime_at_least(n: u64) -> u64 {
    let p = (n.max(2)..).find(|&p| is_prime(p)).expect("primes are unbounded");
    assert!(p <= 2 * n.max(1), "Bertrand's postulate failed for {n}");
    p
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectivePlane {
    pub order: u64,
    /// Lines as sorted point lists; points are `1..=p^2+p+1`.
    pub lines: Vec<Vec<u64>>,
}

/// Points of `PG(2, p)` as normalized vectors: `(1, a, b)`, `(0, 1, b)`, `(0, 0, 1)`.
fn normalized_vectors(p: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::with_capacity((p * p + p + 1) as usize);
    for a in 0..p {
        for b in 0..p {
            out.push([1, a, b]);
        }
    }
    for b in 0..p {
        out.push([0, 1, b]);
    }
    out.push([0, 0, 1]);
    out
}

/// The plane over `F_p`: points are 1-dimensional subspaces of `F_p^3` and
/// each line is the set of points orthogonal to a normalized vector.
pub fn build_projective_plane(p: u64) -> Result<ProjectivePlane> {
    if !is_prime(p) || p > 1 << 16 {
        return Err(Error::UnsupportedOrder(p));
    }
    let vs = normalized_vectors(p);
    let lines = vs
        .iter()
        .map(|l| {
            (1..=vs.len() as u64)
                .filter(|&i| {
                    let x = vs[i as usize - 1];
                    (l[0] * x[0] + l[1] * x[1] + l[2] * x[2]).is_multiple_of(p)
                })
                .collect()
        })
        .collect();
    Ok(ProjectivePlane { order: p, lines })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PlaneCheck {
    /// As many points as lines, namely `p^2+p+1`, and `p+1` points per line.
    pub p1: bool,
    /// Every pair of points on exactly one line.
    pub p2: bool,
    /// Every pair of lines meets in exactly one point.
    pub p3: bool,
}

impl PlaneCheck {
    pub fn all(self) -> bool {
        self.p1 && self.p2 && self.p3
    }
}

impl ProjectivePlane {
    pub fn point_count(&self) -> u64 {
        self.order * self.order + self.order + 1
    }

    /// Exhaustive check of the three axioms from the line lists alone.
    pub fn check(&self) -> PlaneCheck {
        let v = self.point_count() as usize;
        let p1 = self.lines.len() == v
            && self.lines.iter().all(|l| {
                l.len() as u64 == self.order + 1 && l.iter().all(|&x| x >= 1 && x as usize <= v)
            });
        let mut cover = vec![0u32; v * v];
        for l in &self.lines {
            for_each_subset(l, 2, |s| cover[(s[0] as usize - 1) * v + s[1] as usize - 1] += 1);
        }
        let p2 = (0..v).all(|a| (a + 1..v).all(|b| cover[a * v + b] == 1));
        let p3 = self.lines.iter().enumerate().all(|(i, a)| {
            self.lines[i + 1..].iter().all(|b| a.iter().filter(|x| b.binary_search(x).is_ok()).count() == 1)
        });
        PlaneCheck { p1, p2, p3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    /// 1-based line index.
    pub line: u64,
    /// The edge of the padded blow-up this edge is a copy of.
    pub source: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteinerSystem {
    pub schema: String,
    pub v: u64,
    pub k: usize,
    pub edges: Vec<Vec<u64>>,
    /// Aligned with `edges`; the first copy wins when copies coincide.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Vec<Provenance>>,
}

impl SteinerSystem {
    pub fn from_json(json: &str) -> Result<Self> {
        let s: SteinerSystem = serde_json::from_str(json)?;
        if s.schema != SYSTEM_SCHEMA {
            return Err(Error::Format(format!(
                "unsupported schema {:?}, expected {SYSTEM_SCHEMA:?}",
                s.schema
            )));
        }
        if let Some(bad) = s.edges.iter().find(|e| e.len() != s.k || e.iter().any(|&x| x == 0 || x > s.v)) {
            return Err(Error::Format(format!("edge {bad:?} is not a {}-subset of [{}]", s.k, s.v)));
        }
        if s.provenance.as_ref().is_some_and(|p| p.len() != s.edges.len()) {
            return Err(Error::Format("provenance is not aligned with the edges".into()));
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("systems serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assembly {
    pub system: SteinerSystem,
    pub order: u64,
    /// Copies that landed on an edge another line already produced.
    pub merged_duplicates: u64,
    /// Edge count before merging, `#lines · e(R̃)`.
    pub copies: u64,
}

/// Glues a copy of `R` padded to `p` vertices onto every line of the plane.
///
/// A line has `p+1` points while the padded `R̃` has `p` vertices, so each
/// line gets a uniformly random injection `[p] -> V(L)` drawn from the
/// `ChaCha8` stream `seed`, stream number = line index. The reference
/// bijection `f` is the identity.
pub fn assemble_h(r: &BlowupSystem, plane: &ProjectivePlane, seed: u64) -> Result<Assembly> {
    let p = plane.order;
    let needed = r.vertex_count();
    if p < needed {
        return Err(Error::PlaneTooSmall {
            order: p,
            line: p + 1,
            needed,
        });
    }
    let source = r.materialize_edges()?;
    let per_line: Vec<Vec<(Vec<u64>, Provenance)>> = plane
        .lines
        .par_iter()
        .enumerate()
        .map(|(idx, line)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(idx as u64);
            let mut points = line.clone();
            points.shuffle(&mut rng);
            source
                .iter()
                .map(|e| {
                    let mut img: Vec<u64> = e.iter().map(|&x| points[x as usize - 1]).collect();
                    img.sort_unstable();
                    let prov = Provenance {
                        line: idx as u64 + 1,
                        source: e.clone(),
                    };
                    (img, prov)
                })
                .collect()
        })
        .collect();
    let mut all: Vec<(Vec<u64>, Provenance)> = per_line.into_iter().flatten().collect();
    let copies = all.len() as u64;
    // stable, so the lowest line index survives a merge
    all.sort_by(|a, b| a.0.cmp(&b.0));
    all.dedup_by(|b, a| a.0 == b.0);
    let (edges, provenance): (Vec<_>, Vec<_>) = all.into_iter().unzip();
    Ok(Assembly {
        merged_duplicates: copies - edges.len() as u64,
        copies,
        order: p,
        system: SteinerSystem {
            schema: SYSTEM_SCHEMA.to_string(),
            v: plane.point_count(),
            k: r.k,
            edges,
            provenance: Some(provenance),
        },
    })
}

/// Whether every edge lies inside the point set of the line it came from.
pub fn edges_within_lines(h: &SteinerSystem, plane: &ProjectivePlane) -> bool {
    let Some(prov) = &h.provenance else {
        return false;
    };
    h.edges.iter().zip(prov).all(|(e, p)| {
        plane
            .lines
            .get(p.line as usize - 1)
            .is_some_and(|l| e.iter().all(|x| l.binary_search(x).is_ok()))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum SteinerCheck {
    Ok,
    Witness {
        first: Vec<u64>,
        second: Vec<u64>,
        shared: Vec<u64>,
    },
}

/// Checks that every `ell`-set lies in at most one edge; otherwise returns the
/// least `(first, second, shared)` with `first < second` as sorted edges.
pub fn is_partial_steiner(edges: &[Vec<u64>], ell: usize) -> Result<SteinerCheck> {
    let mut edges: Vec<Vec<u64>> = edges
        .iter()
        .map(|e| {
            let mut e = e.clone();
            e.sort_unstable();
            e
        })
        .collect();
    edges.sort();
    edges.dedup();
    let Some(k) = edges.first().map(Vec::len) else {
        return Ok(SteinerCheck::Ok);
    };
    if edges.iter().any(|e| e.len() != k) {
        return Err(Error::InvalidParams("edges are not uniform".into()));
    }
    if ell == 0 || ell >= k {
        return Err(Error::InvalidParams(format!("need 1 <= ell < k = {k}, got {ell}")));
    }
    // edges are visited in order, so the first two holders of a subset are
    // the two least edges containing it
    let mut holders: HashMap<Vec<u64>, (usize, Option<usize>)> = HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        for_each_subset(e, ell, |s| {
            holders
                .entry(s.to_vec())
                .and_modify(|h| {
                    h.1.get_or_insert(i);
                })
                .or_insert((i, None));
        });
    }
    let least = holders
        .into_iter()
        .filter_map(|(s, (a, b))| b.map(|b| (a, b, s)))
        .min();
    Ok(match least {
        None => SteinerCheck::Ok,
        Some((a, b, shared)) => SteinerCheck::Witness {
            first: edges[a].clone(),
            second: edges[b].clone(),
            shared,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub flavor: Flavor,
    pub trial: u64,
    /// `ordering[x - 1]` is the position of vertex `x`.
    pub ordering: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloReport {
    pub schema: String,
    pub spec: FamilySpec,
    pub system: BlowupSystem,
    pub vertices: u64,
    pub edges: u64,
    pub trials: u64,
    pub seed: u64,
    pub found_g: u64,
    pub found_rev_g: u64,
    pub found_fraction_g: f64,
    pub found_fraction_rev_g: f64,
    /// Trials whose ordering passed the partial Steiner check.
    pub steiner_ok: u64,
    /// The first failing ordering per flavor, for replay.
    pub failures: Vec<Failure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trial_micros: Option<Vec<u64>>,
}

/// Uniform random ordering of `v` vertices from stream `trial` of `seed`.
pub fn random_ordering(v: u64, seed: u64, trial: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut pos: Vec<u64> = (1..=v).collect();
    pos.shuffle(&mut rng);
    pos
}

fn mc_targets(spec: &FamilySpec) -> Result<(OrderedHypergraph, OrderedHypergraph)> {
    Ok((
        canonical_member(&spec.with_flavor(Flavor::G))?,
        canonical_member(&spec.with_flavor(Flavor::RevG))?,
    ))
}

fn check_mc_spec(r: &BlowupSystem, spec: &FamilySpec) -> Result<()> {
    spec.validate()?;
    if !matches!(spec.flavor, Flavor::G | Flavor::RevG) {
        return Err(Error::InvalidParams(format!("expected flavor G or revG, got {}", spec.flavor)));
    }
    if spec.k != r.k || spec.n > r.n || spec.index != r.index {
        return Err(Error::InvalidParams(format!(
            "spec (k={}, n={}, I={:?}) does not fit the system (k={}, n={}, I={:?})",
            spec.k, spec.n, spec.index, r.k, r.n, r.index
        )));
    }
    Ok(())
}

/// Whether `(R, ordering)` contains the canonical `G` and `rev G` members.
pub fn replay_ordering(r: &BlowupSystem, spec: &FamilySpec, ordering: &[u64]) -> Result<(bool, bool)> {
    check_mc_spec(r, spec)?;
    if ordering.len() as u64 != r.vertex_count() {
        return Err(Error::InvalidParams("ordering length differs from v(R)".into()));
    }
    let mut seen = vec![false; ordering.len()];
    for &p in ordering {
        if p == 0 || p as usize > ordering.len() || std::mem::replace(&mut seen[p as usize - 1], true) {
            return Err(Error::InvalidParams("ordering is not a permutation".into()));
        }
    }
    let (g, rev_g) = mc_targets(spec)?;
    let host = relabel(&r.to_hypergraph()?, ordering)?;
    Ok((
        find_ordered_copy(&host, &g)?.is_some(),
        find_ordered_copy(&host, &rev_g)?.is_some(),
    ))
}

/// For each trial, orders `V(R)` uniformly at random and looks for the
/// canonical `G` and `rev G` members. Trials run in parallel on independent
/// streams and are merged in trial order.
pub fn sample_ordering_and_search(r: &BlowupSystem, spec: &FamilySpec, trials: u64, seed: u64) -> Result<MonteCarloReport> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    check_mc_spec(r, spec)?;
    let (g, rev_g) = mc_targets(spec)?;
    let base = r.to_hypergraph()?;
    let v = base.v;
    let outcomes: Vec<Result<(bool, bool, bool, u64)>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let started = Instant::now();
            let host = relabel(&base, &random_ordering(v, seed, trial))?;
            let steiner = is_partial_steiner(&host.edges, r.k - 1)? == SteinerCheck::Ok;
            let fg = find_ordered_copy(&host, &g)?.is_some();
            let fr = find_ordered_copy(&host, &rev_g)?.is_some();
            Ok((fg, fr, steiner, started.elapsed().as_micros() as u64))
        })
        .collect();
    let mut report = MonteCarloReport {
        schema: MONTE_CARLO_SCHEMA.to_string(),
        spec: spec.clone(),
        system: r.clone(),
        vertices: v,
        edges: r.edge_count(),
        trials,
        seed,
        found_g: 0,
        found_rev_g: 0,
        found_fraction_g: 0.0,
        found_fraction_rev_g: 0.0,
        steiner_ok: 0,
        failures: Vec::new(),
        trial_micros: Some(Vec::with_capacity(trials as usize)),
    };
    for (trial, outcome) in outcomes.into_iter().enumerate() {
        let (fg, fr, steiner, micros) = outcome?;
        report.found_g += u64::from(fg);
        report.found_rev_g += u64::from(fr);
        report.steiner_ok += u64::from(steiner);
        report.trial_micros.as_mut().unwrap().push(micros);
        for (found, flavor) in [(fg, Flavor::G), (fr, Flavor::RevG)] {
            if !found && !report.failures.iter().any(|f| f.flavor == flavor) {
                report.failures.push(Failure {
                    flavor,
                    trial: trial as u64,
                    ordering: random_ordering(v, seed, trial as u64),
                });
            }
        }
    }
    report.found_fraction_g = report.found_g as f64 / trials as f64;
    report.found_fraction_rev_g = report.found_rev_g as f64 / trials as f64;
    Ok(report)
}

/// `v(H) <= 4N^2 + 2N + 1` for `p = next_prime_at_least(N) <= 2N`.
pub fn plane_size_bound(n: u64) -> u64 {
    4 * n * n + 2 * n + 1
}

/// `C(n-1, k-1) + 1`, the number of classes `V_J`.
pub fn omega_size(n: usize, k: usize) -> u64 {
    binomial(n as u64 - 1, k as u64 - 1) + 1
}
