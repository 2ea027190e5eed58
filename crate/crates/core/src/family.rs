//! Separated index sets and the ordered families `F_I`, `rev F_I`, `F*_I`,
//! `G_I` and `rev G_I`.
//!
//! Every family is indexed by `Ω_I = {2..n}^(k-1) ∪ {I}`. A member has
//! distinguished vertices `x_0 < x_1 < ... < x_n` and one vertex `x_J` per
//! `J ∈ Ω_I`, with edges `{x_J} ∪ {x_j : j ∈ J}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combin::{binomial, Colex};
use crate::error::{Error, Result};

pub const HYPERGRAPH_SCHEMA: &str = "ramsey-stepup/hypergraph/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flavor {
    F,
    #[serde(rename = "revF")]
    RevF,
    #[serde(rename = "Fstar")]
    FStar,
    G,
    #[serde(rename = "revG")]
    RevG,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::F => "F",
            Flavor::RevF => "revF",
            Flavor::FStar => "Fstar",
            Flavor::G => "G",
            Flavor::RevG => "revG",
        }
    }

    pub fn is_reversed(self) -> bool {
        matches!(self, Flavor::RevF | Flavor::RevG)
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "F" => Flavor::F,
            "revF" => Flavor::RevF,
            "Fstar" => Flavor::FStar,
            "G" => Flavor::G,
            "revG" => Flavor::RevG,
            _ => return Err(Error::InvalidParams(format!("unknown flavor {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub k: usize,
    pub n: usize,
    #[serde(rename = "I")]
    pub index: Vec<usize>,
    pub flavor: Flavor,
}

impl FamilySpec {
    pub fn new(k: usize, n: usize, index: Vec<usize>, flavor: Flavor) -> Result<Self> {
        let spec = FamilySpec { k, n, index, flavor };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let FamilySpec { k, n, index, .. } = self;
        if *k < 3 || *n < 3 {
            return Err(Error::InvalidParams(format!("need k, n >= 3, got k={k}, n={n}")));
        }
        if index.len() != k - 1 {
            return Err(Error::InvalidParams(format!("|I| must be k-1 = {}, got {index:?}", k - 1)));
        }
        if index.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams(format!("I must be strictly increasing, got {index:?}")));
        }
        if index[0] != 1 {
            return Err(Error::InvalidParams(format!("I must contain 1, got {index:?}")));
        }
        if index[k - 2] > *n {
            return Err(Error::InvalidParams(format!("I must lie in [{n}], got {index:?}")));
        }
        Ok(())
    }

    /// Stepping-up runs need a separated `I` once `k >= 4`.
    pub fn require_separated(&self) -> Result<()> {
        if !is_separated(&self.index, self.n, self.k) {
            return Err(Error::InvalidParams(format!(
                "I = {:?} is not ({}, {})-separated",
                self.index, self.n, self.k
            )));
        }
        Ok(())
    }

    pub fn with_flavor(&self, flavor: Flavor) -> Self {
        FamilySpec { flavor, ..self.clone() }
    }

    /// `Ω_I \ {I}` in colex order, followed by `I`.
    pub fn omega(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Colex::new(2, self.n as u64, self.k - 1)
            .map(|s| s.into_iter().map(|x| x as usize).collect())
            .collect();
        out.push(self.index.clone());
        out
    }

    /// `C(n-1, k-1) + 1`, the edge count of every member.
    pub fn edge_count(&self) -> u64 {
        binomial(self.n as u64 - 1, self.k as u64 - 1) + 1
    }

    /// `n + C(n-1, k-1) + 1`, the vertex count of members with distinct `x_J`.
    pub fn vertex_count(&self) -> u64 {
        self.n as u64 + self.edge_count()
    }
}

/// `I = {a_1 < ... < a_{k-1}}` is `(n,k)`-separated when `a_1 = 1`, `a_2 = 2`
/// and every gap `a_{i+1} - a_i` for `2 <= i <= k-1` (with `a_k = n`) is at
/// least `n / 2k`.
pub fn is_separated(index: &[usize], n: usize, k: usize) -> bool {
    if k < 3 || index.len() != k - 1 || index[0] != 1 || index[1] != 2 {
        return false;
    }
    if index.windows(2).any(|w| w[0] >= w[1]) || index[k - 2] > n {
        return false;
    }
    // gap >= n/(2k) without rounding
    index[1..]
        .iter()
        .chain(std::iter::once(&n))
        .collect::<Vec<_>>()
        .windows(2)
        .all(|w| 2 * k * (w[1] - w[0]) >= n)
}

/// `{1, 2, 2+g, ..., 2+(k-3)g}` with `g = ceil(n / 2k)`.
///
/// Gaps are integers, so any separated set has gaps of at least `g` and one
/// exists exactly when `2 + (k-2)g <= n`; this greedy set is then separated.
pub fn canonical_separated(n: usize, k: usize) -> Result<Vec<usize>> {
    if k < 3 {
        return Err(Error::InvalidParams(format!("k must be at least 3, got {k}")));
    }
    let feasible = |n: usize| n >= 3 && 2 + (k - 2) * n.div_ceil(2 * k) <= n;
    if !feasible(n) {
        let min_n = (3..).find(|&m| feasible(m)).expect("large n is feasible");
        return Err(Error::NoSeparatedSet { n, k, min_n });
    }
    let g = n.div_ceil(2 * k);
    let mut out = vec![1, 2];
    while out.len() < k - 1 {
        out.push(out.last().unwrap() + g);
    }
    debug_assert!(is_separated(&out, n, k));
    Ok(out)
}

/// Vertices are the positions `1..=v` in their order; labels name roles
/// (`x_0`, `x_3`, `x_{2,5}`) and several roles may share a position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderedHypergraph {
    #[serde(default = "hypergraph_schema")]
    pub schema: String,
    pub v: u64,
    pub edges: Vec<Vec<u64>>,
    #[serde(default)]
    pub labels: BTreeMap<String, u64>,
}

fn hypergraph_schema() -> String {
    HYPERGRAPH_SCHEMA.to_string()
}

impl OrderedHypergraph {
    /// Sorts every edge and the edge list; rejects repeated or out-of-range
    /// vertices, mixed edge sizes and duplicate edges.
    pub fn new(v: u64, edges: Vec<Vec<u64>>, labels: BTreeMap<String, u64>) -> Result<Self> {
        let mut h = OrderedHypergraph {
            schema: hypergraph_schema(),
            v,
            edges,
            labels,
        };
        h.normalize()?;
        Ok(h)
    }

    fn normalize(&mut self) -> Result<()> {
        for e in &mut self.edges {
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParams(format!("edge {e:?} repeats a vertex")));
            }
            if let Some(&x) = e.iter().find(|&&x| x == 0 || x > self.v) {
                return Err(Error::InvalidParams(format!("vertex {x} outside [1, {}]", self.v)));
            }
        }
        if let Some(first) = self.edges.first() {
            let k = first.len();
            if self.edges.iter().any(|e| e.len() != k) {
                return Err(Error::InvalidParams("edges are not uniform".into()));
            }
        }
        self.edges.sort();
        if self.edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams("duplicate edge".into()));
        }
        if let Some((role, &pos)) = self.labels.iter().find(|(_, &p)| p == 0 || p > self.v) {
            return Err(Error::InvalidParams(format!("label {role} points at {pos}")));
        }
        Ok(())
    }

    pub fn uniformity(&self) -> Option<usize> {
        self.edges.first().map(Vec::len)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let mut h: OrderedHypergraph = serde_json::from_str(json)?;
        if h.schema != HYPERGRAPH_SCHEMA {
            return Err(Error::Format(format!(
                "unsupported schema {:?}, expected {HYPERGRAPH_SCHEMA:?}",
                h.schema
            )));
        }
        h.normalize()?;
        Ok(h)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("hypergraphs serialize")
    }

    fn label(&self, role: &str) -> Result<u64> {
        self.labels
            .get(role)
            .copied()
            .ok_or_else(|| Error::MissingLabel(role.to_string()))
    }
}

/// The same hypergraph under the reversed order: position `i` becomes `v+1-i`.
pub fn reverse(h: &OrderedHypergraph) -> OrderedHypergraph {
    let flip = |x: u64| h.v + 1 - x;
    let mut edges: Vec<Vec<u64>> = h
        .edges
        .iter()
        .map(|e| e.iter().rev().map(|&x| flip(x)).collect())
        .collect();
    edges.sort();
    OrderedHypergraph {
        schema: h.schema.clone(),
        v: h.v,
        edges,
        labels: h.labels.iter().map(|(r, &p)| (r.clone(), flip(p))).collect(),
    }
}

pub fn role_x(i: usize) -> String {
    format!("x_{i}")
}

pub fn role_j(j: &[usize]) -> String {
    let parts: Vec<String> = j.iter().map(usize::to_string).collect();
    format!("x_{{{}}}", parts.join(","))
}

/// Which `J ∈ Ω_I \ {I}` share a vertex and where those vertices sit.
///
/// `on_x0` collapse onto `x_0`, `on_x1` onto `x_1`, and `blocks` are the
/// vertices strictly between them in order; each block lists the `J`s that
/// share it. `x_I = x_0` always.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MemberBlueprint {
    pub on_x0: Vec<Vec<usize>>,
    pub blocks: Vec<Vec<Vec<usize>>>,
    pub on_x1: Vec<Vec<usize>>,
}

impl MemberBlueprint {
    /// Every `J` on its own vertex, in colex order.
    pub fn all_distinct(spec: &FamilySpec) -> Self {
        let mut omega = spec.omega();
        omega.pop();
        MemberBlueprint {
            on_x0: Vec::new(),
            blocks: omega.into_iter().map(|j| vec![j]).collect(),
            on_x1: Vec::new(),
        }
    }

    /// Every `J` collapsed onto `x_0`.
    pub fn all_on_x0(spec: &FamilySpec) -> Self {
        let mut omega = spec.omega();
        omega.pop();
        MemberBlueprint {
            on_x0: omega,
            blocks: Vec::new(),
            on_x1: Vec::new(),
        }
    }

    /// The labeled `F` member this blueprint describes.
    pub fn realize(&self, spec: &FamilySpec) -> Result<OrderedHypergraph> {
        spec.validate()?;
        let b = self.blocks.len() as u64;
        let x = |i: usize| if i == 0 { 1 } else { 1 + b + i as u64 };
        let mut labels = BTreeMap::new();
        for i in 0..=spec.n {
            labels.insert(role_x(i), x(i));
        }
        labels.insert(role_j(&spec.index), x(0));
        for j in &self.on_x0 {
            labels.insert(role_j(j), x(0));
        }
        for j in &self.on_x1 {
            labels.insert(role_j(j), x(1));
        }
        for (pos, block) in self.blocks.iter().enumerate() {
            for j in block {
                labels.insert(role_j(j), 2 + pos as u64);
            }
        }
        let omega = spec.omega();
        if labels.len() != spec.n + 1 + omega.len() {
            return Err(Error::InvalidParams("blueprint does not place each J exactly once".into()));
        }
        let mut edges = Vec::with_capacity(omega.len());
        for j in &omega {
            let xj = *labels
                .get(&role_j(j))
                .ok_or_else(|| Error::MissingLabel(role_j(j)))?;
            let mut e: Vec<u64> = std::iter::once(xj).chain(j.iter().map(|&i| x(i))).collect();
            e.sort_unstable();
            edges.push(e);
        }
        OrderedHypergraph::new(1 + b + spec.n as u64, edges, labels)
    }
}

/// All blueprints for small `Ω_I`: each `J ≠ I` goes to `x_0`, to `x_1` or
/// into an ordered set partition of the middle.
pub fn enumerate_blueprints(spec: &FamilySpec) -> Result<Vec<MemberBlueprint>> {
    spec.validate()?;
    let mut js = spec.omega();
    js.pop();
    if js.len() > 7 {
        return Err(Error::InvalidParams(format!(
            "refusing to enumerate blueprints over {} index sets",
            js.len()
        )));
    }
    let mut out = Vec::new();
    // 0 = on x_0, 1 = on x_1, 2 = middle
    let mut place = vec![0u8; js.len()];
    loop {
        let pick = |tag: u8| -> Vec<Vec<usize>> {
            js.iter()
                .zip(&place)
                .filter(|(_, &p)| p == tag)
                .map(|(j, _)| j.clone())
                .collect()
        };
        let middle = pick(2);
        for blocks in ordered_partitions(&middle) {
            out.push(MemberBlueprint {
                on_x0: pick(0),
                blocks,
                on_x1: pick(1),
            });
        }
        let Some(i) = place.iter().position(|&p| p < 2) else {
            break;
        };
        place[i] += 1;
        place[..i].fill(0);
    }
    Ok(out)
}

/// Ordered set partitions of `items`, each block listed in input order.
fn ordered_partitions<T: Clone>(items: &[T]) -> Vec<Vec<Vec<T>>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let n = items.len();
    // choose the first block as a non-empty subset, recurse on the rest
    for mask in 1u32..(1 << n) {
        let first: Vec<T> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| items[i].clone()).collect();
        let rest: Vec<T> = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| items[i].clone()).collect();
        for mut tail in ordered_partitions(&rest) {
            tail.insert(0, first.clone());
            out.push(tail);
        }
    }
    out
}

/// The member with all `x_J` distinct, in colex order of `J`, between `x_0 = x_I`
/// and `x_1`. Reversed flavors reverse the order.
pub fn canonical_member(spec: &FamilySpec) -> Result<OrderedHypergraph> {
    let h = MemberBlueprint::all_distinct(spec).realize(spec)?;
    match spec.flavor {
        Flavor::F | Flavor::G => Ok(h),
        Flavor::RevF | Flavor::RevG => Ok(reverse(&h)),
        Flavor::FStar => Err(Error::InvalidParams(
            "Fstar is a predicate, not a generated family".into(),
        )),
    }
}

/// Checks the labeled roles of `h` against the definition of `F_I`.
///
/// With `distinct` set, additionally every `x_J` for `J ≠ I` must be its own
/// vertex strictly between `x_0` and `x_1`, which is the `G_I` condition.
fn check_roles(h: &OrderedHypergraph, spec: &FamilySpec, distinct: bool) -> Result<bool> {
    spec.validate()?;
    let xs: Vec<u64> = (0..=spec.n).map(|i| h.label(&role_x(i))).collect::<Result<_>>()?;
    let omega = spec.omega();
    let xjs: Vec<u64> = omega.iter().map(|j| h.label(&role_j(j))).collect::<Result<_>>()?;
    if h.labels.len() != xs.len() + xjs.len() {
        return Ok(false);
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Ok(false);
    }
    let (x0, x1) = (xs[0], xs[1]);
    let (&xi, rest) = xjs.split_last().unwrap();
    if xi != x0 || rest.iter().any(|&p| p < x0 || p > x1) {
        return Ok(false);
    }
    if distinct {
        let set: BTreeSet<u64> = rest.iter().copied().collect();
        if set.len() != rest.len() || rest.iter().any(|&p| p == x0 || p == x1) {
            return Ok(false);
        }
    }
    // exactly the labeled vertices, and exactly the prescribed edges
    let used: BTreeSet<u64> = xs.iter().chain(&xjs).copied().collect();
    if used.len() as u64 != h.v {
        return Ok(false);
    }
    let mut expected: Vec<Vec<u64>> = omega
        .iter()
        .zip(&xjs)
        .map(|(j, &xj)| {
            let mut e: Vec<u64> = std::iter::once(xj).chain(j.iter().map(|&i| xs[i])).collect();
            e.sort_unstable();
            e
        })
        .collect();
    expected.sort();
    let mut actual = h.edges.clone();
    actual.sort();
    Ok(expected == actual)
}

/// Whether the labeled hypergraph is a member of `F_I^(k)(n)`.
pub fn is_f_member(h: &OrderedHypergraph, spec: &FamilySpec) -> Result<bool> {
    check_roles(h, spec, false)
}

/// Membership for any flavor. `Fstar` asks whether `h` contains a member of
/// `F_I` and a member of `rev F_I` as ordered subhypergraphs, and ignores labels.
pub fn is_member(h: &OrderedHypergraph, spec: &FamilySpec) -> Result<bool> {
    match spec.flavor {
        Flavor::F => check_roles(h, spec, false),
        Flavor::G => check_roles(h, spec, true),
        Flavor::RevF => check_roles(&reverse(h), spec, false),
        Flavor::RevG => check_roles(&reverse(h), spec, true),
        Flavor::FStar => {
            let f = crate::search::contains_f_member(h, spec, false)?;
            Ok(f && crate::search::contains_f_member(h, spec, true)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steiner::{is_partial_steiner, SteinerCheck};

    fn spec(k: usize, n: usize, index: &[usize], flavor: Flavor) -> FamilySpec {
        FamilySpec::new(k, n, index.to_vec(), flavor).unwrap()
    }

    #[test]
    fn separated_examples() {
        assert!(is_separated(&[1, 2], 10, 3));
        assert!(is_separated(&[1, 2], 3, 3));
        assert!(is_separated(&[1, 2, 8], 24, 4));
        assert!(!is_separated(&[1, 3, 9], 24, 4));
        // gap 24 - 22 = 2 < 3
        assert!(!is_separated(&[1, 2, 22], 24, 4));
        // real-valued threshold: 25/8 = 3.125, so a gap of 3 fails
        assert!(is_separated(&[1, 2, 5], 24, 4));
        assert!(!is_separated(&[1, 2, 5], 25, 4));
    }

    /// Exhaustive over all (k-1)-subsets of [n].
    fn any_separated(n: usize, k: usize) -> bool {
        let mut s: Vec<u64> = (1..k as u64).collect();
        loop {
            let set: Vec<usize> = s.iter().map(|&x| x as usize).collect();
            if is_separated(&set, n, k) {
                return true;
            }
            if !crate::combin::next_lex(&mut s, n as u64) {
                return false;
            }
        }
    }

    #[test]
    fn canonical_separated_examples() {
        assert_eq!(canonical_separated(24, 4).unwrap(), vec![1, 2, 5]);
        assert_eq!(canonical_separated(100, 3).unwrap(), vec![1, 2]);
        // {1,2,3,4} has gaps 1, 1, 2, all at least 6/10
        assert_eq!(canonical_separated(6, 5).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(
            canonical_separated(4, 5),
            Err(Error::NoSeparatedSet { n: 4, k: 5, min_n: 5 })
        );
    }

    #[test]
    fn canonical_separated_matches_exhaustive_feasibility() {
        for k in 3..=7 {
            for n in k - 1..=40 {
                let got = canonical_separated(n, k);
                assert_eq!(got.is_ok(), any_separated(n, k), "n={n} k={k}");
                if let Ok(set) = got {
                    assert!(is_separated(&set, n, k));
                }
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(FamilySpec::new(3, 4, vec![1, 2], Flavor::F).is_ok());
        assert!(FamilySpec::new(3, 4, vec![2, 3], Flavor::F).is_err());
        assert!(FamilySpec::new(3, 4, vec![1], Flavor::F).is_err());
        assert!(FamilySpec::new(3, 4, vec![1, 5], Flavor::F).is_err());
        assert!(FamilySpec::new(4, 5, vec![1, 4, 2], Flavor::F).is_err());
        assert!(FamilySpec::new(2, 4, vec![1], Flavor::F).is_err());
        let s = spec(4, 24, &[1, 3, 9], Flavor::F);
        assert!(s.require_separated().is_err());
    }

    #[test]
    fn omega_order() {
        let s = spec(3, 4, &[1, 2], Flavor::F);
        assert_eq!(s.omega(), vec![vec![2, 3], vec![2, 4], vec![3, 4], vec![1, 2]]);
        let s = spec(4, 5, &[1, 2, 4], Flavor::G);
        assert_eq!(s.omega().len(), 5);
        assert_eq!(s.edge_count(), 5);
    }

    #[test]
    fn canonical_member_examples() {
        let g = canonical_member(&spec(3, 4, &[1, 2], Flavor::G)).unwrap();
        assert_eq!((g.v, g.edges.len()), (8, 4));
        let f = canonical_member(&spec(3, 4, &[1, 2], Flavor::F)).unwrap();
        assert_eq!((f.v, f.edges.len()), (8, 4));
        // x_0 = x_{1,2} = 1, x_{2,3} = 2, x_{2,4} = 3, x_{3,4} = 4, x_1..x_4 = 5..8
        assert_eq!(
            f.edges,
            vec![vec![1, 5, 6], vec![2, 6, 7], vec![3, 6, 8], vec![4, 7, 8]]
        );
        assert_eq!(f.labels["x_{1,2}"], 1);
        assert_eq!(f.labels["x_{3,4}"], 4);
        let g = canonical_member(&spec(4, 5, &[1, 2, 4], Flavor::G)).unwrap();
        assert_eq!(g.edges.len(), 5);
        assert!(canonical_member(&spec(3, 4, &[1, 2], Flavor::FStar)).is_err());
    }

    #[test]
    fn counts_match_closed_forms() {
        for k in 3..=5 {
            for n in k..=8 {
                let index: Vec<usize> = (1..k).collect();
                for flavor in [Flavor::F, Flavor::RevF, Flavor::G, Flavor::RevG] {
                    let s = spec(k, n, &index, flavor);
                    let h = canonical_member(&s).unwrap();
                    let c = binomial(n as u64 - 1, k as u64 - 1);
                    assert_eq!(h.v, n as u64 + c + 1);
                    assert_eq!(h.edges.len() as u64, c + 1);
                    assert!(is_member(&h, &s).unwrap(), "{k} {n} {flavor}");
                }
            }
        }
    }

    #[test]
    fn membership_examples() {
        let s = spec(3, 4, &[1, 2], Flavor::F);
        let f = canonical_member(&s).unwrap();
        assert!(is_f_member(&f, &s).unwrap());
        let mut cut = f.clone();
        cut.edges.pop();
        assert!(!is_f_member(&cut, &s).unwrap());

        let collapsed = MemberBlueprint::all_on_x0(&s).realize(&s).unwrap();
        assert_eq!(collapsed.v, 5);
        assert!(is_f_member(&collapsed, &s).unwrap());
        assert!(!is_member(&collapsed, &s.with_flavor(Flavor::G)).unwrap());

        let mut unlabeled = f.clone();
        unlabeled.labels.remove("x_3");
        assert_eq!(is_f_member(&unlabeled, &s), Err(Error::MissingLabel("x_3".into())));

        // x_J outside [x_0, x_1]
        let mut moved = f.clone();
        moved.labels.insert("x_{2,3}".into(), 6);
        assert!(!is_f_member(&moved, &s).unwrap());
    }

    #[test]
    fn reverse_examples() {
        let single = OrderedHypergraph::new(3, vec![vec![1, 2, 3]], BTreeMap::new()).unwrap();
        assert_eq!(reverse(&single), single);
        let s = spec(3, 5, &[1, 2], Flavor::F);
        let f = canonical_member(&s).unwrap();
        assert_eq!(reverse(&reverse(&f)), f);
        let r = reverse(&f);
        assert!(is_member(&r, &s.with_flavor(Flavor::RevF)).unwrap());
        assert!(!is_member(&r, &s).unwrap());
    }

    #[test]
    fn g_members_are_f_members() {
        for n in 3..=6 {
            let g = spec(3, n, &[1, 2], Flavor::G);
            let h = canonical_member(&g).unwrap();
            assert!(is_member(&h, &g).unwrap());
            assert!(is_f_member(&h, &g.with_flavor(Flavor::F)).unwrap());
        }
    }

    #[test]
    fn blueprint_counts() {
        let count = |n| enumerate_blueprints(&spec(3, n, &[1, 2], Flavor::F)).unwrap().len();
        assert_eq!(count(3), 3);
        assert_eq!(count(4), 51);
    }

    #[test]
    fn every_blueprint_realizes_a_member() {
        for (k, n, index) in [(3, 3, vec![1, 2]), (3, 4, vec![1, 2]), (4, 4, vec![1, 2, 3])] {
            let s = spec(k, n, &index, Flavor::F);
            for bp in enumerate_blueprints(&s).unwrap() {
                let h = bp.realize(&s).unwrap();
                assert!(is_f_member(&h, &s).unwrap(), "{bp:?}");
                assert!(is_member(&reverse(&h), &s.with_flavor(Flavor::RevF)).unwrap());
                let distinct = bp.on_x0.is_empty() && bp.on_x1.is_empty() && bp.blocks.iter().all(|b| b.len() == 1);
                if distinct {
                    assert_eq!(is_partial_steiner(&h.edges, k - 1).unwrap(), SteinerCheck::Ok);
                }
            }
        }
    }

    #[test]
    fn generated_members_are_partial_steiner() {
        for k in 3..=5 {
            for n in k..=8 {
                let index: Vec<usize> = (1..k).collect();
                for flavor in [Flavor::F, Flavor::RevF, Flavor::G, Flavor::RevG] {
                    let h = canonical_member(&spec(k, n, &index, flavor)).unwrap();
                    assert_eq!(is_partial_steiner(&h.edges, k - 1).unwrap(), SteinerCheck::Ok);
                }
            }
        }
    }

    #[test]
    fn collapses_can_break_the_steiner_property() {
        // x_{2,3} = x_1 puts the pair {x_1, x_2} in two edges
        let s = spec(3, 3, &[1, 2], Flavor::F);
        let bp = MemberBlueprint {
            on_x0: vec![],
            blocks: vec![],
            on_x1: vec![vec![2, 3]],
        };
        let h = bp.realize(&s).unwrap();
        assert!(is_f_member(&h, &s).unwrap());
        assert_eq!(
            is_partial_steiner(&h.edges, 2).unwrap(),
            SteinerCheck::Witness {
                first: vec![1, 2, 3],
                second: vec![2, 3, 4],
                shared: vec![2, 3]
            }
        );
    }

    #[test]
    fn fstar_predicate() {
        let s = spec(3, 3, &[1, 2], Flavor::FStar);
        let f = canonical_member(&s.with_flavor(Flavor::F)).unwrap();
        assert!(!is_member(&f, &s).unwrap());
        // F member on 1..5 followed by a reversed copy on 6..10
        let r = reverse(&f);
        let mut edges = f.edges.clone();
        edges.extend(r.edges.iter().map(|e| e.iter().map(|x| x + 5).collect()));
        let both = OrderedHypergraph::new(10, edges, BTreeMap::new()).unwrap();
        assert!(is_member(&both, &s).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let h = canonical_member(&spec(3, 4, &[1, 2], Flavor::G)).unwrap();
        let back = OrderedHypergraph::from_json(&h.to_json()).unwrap();
        assert_eq!(back, h);
        let extra = r#"{"schema":"ramsey-stepup/hypergraph/v1","v":3,"edges":[[1,2,3]],"labels":{},"x":1}"#;
        assert!(OrderedHypergraph::from_json(extra).is_err());
        let wrong = r#"{"schema":"other","v":3,"edges":[[1,2,3]]}"#;
        assert!(OrderedHypergraph::from_json(wrong).is_err());
        let out_of_range = r#"{"schema":"ramsey-stepup/hypergraph/v1","v":3,"edges":[[1,2,4]]}"#;
        assert!(OrderedHypergraph::from_json(out_of_range).is_err());
    }
}
