//! Independent oracles shared by the integration tests and the acceptance
//! suite. Nothing here calls the search, classification or coloring code it
//! is used to check.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use ramsey_stepup::coloring::Coloring;

/// `T(N)` in heap layout (root 1, children `2v` and `2v+1`), walked through
/// parent pointers.
pub struct ExplicitTree {
    depth: u32,
    parent: Vec<usize>,
}

impl ExplicitTree {
    pub fn new(depth: u32) -> Self {
        let nodes = (1usize << (depth + 1)) - 1;
        let parent = (0..=nodes).map(|v| v / 2).collect();
        ExplicitTree { depth, parent }
    }

    fn path(&self, x: u64) -> Vec<usize> {
        let mut v = (1usize << self.depth) + x as usize - 1;
        let mut p = vec![v];
        while v != 1 {
            v = self.parent[v];
            p.push(v);
        }
        p.reverse();
        p
    }

    /// Level of the greatest common ancestor, root at level 1.
    pub fn delta(&self, x: u64, y: u64) -> u32 {
        let (px, py) = (self.path(x), self.path(y));
        px.iter().zip(&py).take_while(|(a, b)| a == b).count() as u32
    }
}

/// `δ` by comparing the `N`-bit strings of `x-1` and `y-1` from the top.
pub fn delta_prefix(x: u64, y: u64, depth: u32) -> u32 {
    let (a, b) = (x - 1, y - 1);
    let mut level = 1;
    while level <= depth && (a >> (depth - level)) == (b >> (depth - level)) {
        level += 1;
    }
    level
}

pub fn consecutive(xs: &[u64], depth: u32) -> Vec<u32> {
    xs.windows(2).map(|w| delta_prefix(w[0], w[1], depth)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    LeftComb,
    RightComb,
    Balanced,
    /// `(k-1, 1)` split.
    Head,
    /// `(1, k-1)` split.
    Tail,
}

/// Which coloring rule applies to a sorted leaf set, from its δ sequence.
/// Also returns how many rules matched, which must be exactly one.
pub fn branch(xs: &[u64], depth: u32) -> (Branch, usize) {
    let d = consecutive(xs, depth);
    let left = d.windows(2).all(|w| w[0] > w[1]);
    let right = d.windows(2).all(|w| w[0] < w[1]);
    let top = *d.iter().min().unwrap();
    let comb = left || right;
    // elements left of the top ancestor: up to the first pair meeting there
    let l = d.iter().position(|&x| x == top).unwrap() + 1;
    let r = xs.len() - l;
    let split_left_occurrences = d.iter().filter(|&&x| x == top).count();
    // a split meets the top ancestor exactly once among consecutive pairs
    let is_split = !comb && split_left_occurrences == 1;
    let candidates = [
        (left, Branch::LeftComb),
        (right, Branch::RightComb),
        (is_split && l >= 2 && r >= 2, Branch::Balanced),
        (is_split && r == 1 && l >= 2, Branch::Head),
        (is_split && l == 1 && r >= 2, Branch::Tail),
    ];
    let hits: Vec<Branch> = candidates.iter().filter(|c| c.0).map(|c| c.1).collect();
    (hits.first().copied().unwrap_or(Branch::LeftComb), hits.len())
}

/// A stepped-up coloring evaluated straight from the rules, level by level,
/// from a base color table kept here.
pub struct RuleTower {
    base: HashMap<Vec<u64>, u8>,
    base_r: usize,
    /// Ground sizes, base first.
    grounds: Vec<u64>,
}

impl RuleTower {
    pub fn new(base: HashMap<Vec<u64>, u8>, base_r: usize, base_ground: u64, levels: usize) -> Self {
        let mut grounds = vec![base_ground];
        for _ in 0..levels {
            grounds.push(1u64 << grounds.last().unwrap());
        }
        RuleTower { base, base_r, grounds }
    }

    pub fn top_ground(&self) -> u64 {
        *self.grounds.last().unwrap()
    }

    pub fn top_k(&self) -> usize {
        self.base_r + self.grounds.len() - 1
    }

    pub fn color(&self, xs: &[u64]) -> u8 {
        self.color_at(self.grounds.len() - 1, xs)
    }

    fn color_at(&self, level: usize, xs: &[u64]) -> u8 {
        if level == 0 {
            return self.base[xs];
        }
        let depth = self.grounds[level - 1] as u32;
        let k = self.base_r + level;
        let d = consecutive(xs, depth);
        let mut pi: Vec<u64> = d.iter().map(|&x| x as u64).collect::<BTreeSet<_>>().into_iter().collect();
        let (b, hits) = branch(xs, depth);
        assert_eq!(hits, 1, "{xs:?} matches {hits} rules");
        if k == 3 {
            pi.sort_unstable();
            let c = self.color_at(level - 1, &pi);
            return match b {
                Branch::LeftComb => c,
                Branch::RightComb => 3 - c,
                _ => unreachable!("3-sets are combs"),
            };
        }
        match b {
            Branch::LeftComb => 3 - self.color_at(level - 1, &pi),
            Branch::RightComb => self.color_at(level - 1, &pi),
            Branch::Balanced => 0,
            Branch::Head => 1,
            Branch::Tail => 2,
        }
    }
}

/// Colex order on `(k-1)`-subsets of `{2..n}`, then `I`.
pub fn omega(n: usize, k: usize, index: &[usize]) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = subsets(&(2..=n).collect::<Vec<_>>(), k - 1);
    all.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    all.push(index.to_vec());
    all
}

/// All `r`-subsets of `items`, lexicographic.
pub fn subsets<T: Copy>(items: &[T], r: usize) -> Vec<Vec<T>> {
    fn go<T: Copy>(items: &[T], r: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, r, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, r, 0, &mut Vec::new(), &mut out);
    out
}

pub fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// A copy found by [`brute_force_copy`]: color, distinguished leaves and one
/// leaf per `J` in [`omega`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteCopy {
    pub color: u8,
    pub distinguished: Vec<u64>,
    pub x_j: Vec<u64>,
}

/// Joint enumeration of monochromatic `F_I` copies (or `revF` copies when
/// `reversed`): every increasing tuple of ranks and every function
/// `J -> [x_0, x_1]`, all at once, least first in (color, tuple, x_J).
/// Rank `u` is leaf `u`, or leaf `ground + 1 - u` when reversed.
pub fn brute_force_copy(
    chi: &dyn Coloring,
    n: usize,
    index: &[usize],
    colors: &[u8],
    reversed: bool,
) -> Option<BruteCopy> {
    let k = chi.uniformity();
    let ground = chi.ground_size();
    let leaf = |u: u64| if reversed { ground + 1 - u } else { u };
    let om = omega(n, k, index);
    let free = om.len() - 1;
    let ranks: Vec<u64> = (1..=ground).collect();
    let mut sorted_colors = colors.to_vec();
    sorted_colors.sort_unstable();
    for &alpha in &sorted_colors {
        for tuple in subsets(&ranks, n + 1) {
            let (lo, hi) = (tuple[0], tuple[1]);
            let width = hi - lo + 1;
            let combos = width.pow(free as u32);
            for code in 0..combos {
                // most significant digit is the first J, so codes run lexicographically
                let mut x_j = vec![0u64; om.len()];
                let mut c = code;
                for slot in (0..free).rev() {
                    x_j[slot] = lo + c % width;
                    c /= width;
                }
                x_j[free] = lo;
                let mono = om.iter().zip(&x_j).all(|(j, &xj)| {
                    let mut e: Vec<u64> = std::iter::once(leaf(xj)).chain(j.iter().map(|&i| leaf(tuple[i]))).collect();
                    e.sort_unstable();
                    if e.windows(2).any(|w| w[0] == w[1]) {
                        return false;
                    }
                    chi.color(&e).unwrap() == alpha
                });
                if mono {
                    return Some(BruteCopy {
                        color: alpha,
                        distinguished: tuple.iter().map(|&u| leaf(u)).collect(),
                        x_j: x_j.into_iter().map(leaf).collect(),
                    });
                }
            }
        }
    }
    None
}

/// Members of `F_I` for `k = 3` as `(v, edges)` pairs: each free `J` goes on
/// `x_0`, on `x_1`, or into a strictly interior slot; interior slots are
/// compressed, so each weak order of the placed `J`s appears once.
pub fn brute_force_members(n: usize, index: &[usize]) -> HashSet<(u64, Vec<Vec<u64>>)> {
    let om = omega(n, 3, index);
    let free = om.len() - 1;
    let top = 2 * free as u64 + 1;
    let mut out = HashSet::new();
    for code in 0..(top + 1).pow(free as u32) {
        let mut place = Vec::with_capacity(free);
        let mut c = code;
        for _ in 0..free {
            place.push(c % (top + 1));
            c /= top + 1;
        }
        let interior: BTreeSet<u64> = place.iter().copied().filter(|&s| s != 0 && s != top).collect();
        let rank: HashMap<u64, u64> = interior.iter().enumerate().map(|(i, &s)| (s, i as u64 + 1)).collect();
        let b = interior.len() as u64;
        // x_0 = 1, interior slots 2..=b+1, x_i = 1 + b + i
        let x = |i: usize| if i == 0 { 1 } else { 1 + b + i as u64 };
        let pos = |s: u64| match s {
            0 => x(0),
            s if s == top => x(1),
            s => 1 + rank[&s],
        };
        let mut edges: Vec<Vec<u64>> = om
            .iter()
            .enumerate()
            .map(|(t, j)| {
                let xj = if t == free { x(0) } else { pos(place[t]) };
                let mut e: Vec<u64> = std::iter::once(xj).chain(j.iter().map(|&i| x(i))).collect();
                e.sort_unstable();
                e
            })
            .collect();
        edges.sort();
        out.insert((1 + b + n as u64, edges));
    }
    out
}

/// Number of edges through each `(J, transversal)` pair that land in the
/// class assigned to `J`: `classes[v]` is `Some(i)` for `V_i` and `None`
/// otherwise, `class_j[v]` the `Ω` position for `V_J` vertices.
pub fn star_counts(
    edges: &[Vec<u64>],
    single: &dyn Fn(u64) -> Option<usize>,
    index_class: &dyn Fn(u64) -> Option<usize>,
) -> HashMap<(usize, Vec<u64>), u64> {
    let mut counts = HashMap::new();
    for e in edges {
        let js: Vec<(u64, usize)> = e.iter().filter_map(|&v| index_class(v).map(|t| (v, t))).collect();
        assert_eq!(js.len(), 1, "edge {e:?} must meet exactly one V_J");
        let mut z: Vec<(usize, u64)> = e.iter().filter_map(|&v| single(v).map(|i| (i, v))).collect();
        z.sort_unstable();
        *counts.entry((js[0].1, z.iter().map(|p| p.1).collect())).or_insert(0) += 1;
    }
    counts
}

/// Largest intersection of two distinct edges.
pub fn max_pair_intersection(edges: &[Vec<u64>]) -> usize {
    let sets: Vec<HashSet<u64>> = edges.iter().map(|e| e.iter().copied().collect()).collect();
    let mut best = 0;
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            best = best.max(sets[a].intersection(&sets[b]).count());
        }
    }
    best
}

/// Least order-preserving copy of `target` in `host` by trying every
/// increasing tuple of host vertices.
pub fn brute_force_ordered_copy(
    host_v: u64,
    host_edges: &[Vec<u64>],
    target_v: u64,
    target_edges: &[Vec<u64>],
) -> Option<Vec<u64>> {
    let host: HashSet<&[u64]> = host_edges.iter().map(|e| e.as_slice()).collect();
    let verts: Vec<u64> = (1..=host_v).collect();
    subsets(&verts, target_v as usize).into_iter().find(|img| {
        target_edges.iter().all(|e| {
            let mapped: Vec<u64> = e.iter().map(|&x| img[x as usize - 1]).collect();
            host.contains(mapped.as_slice())
        })
    })
}

/// Projective plane axioms counted directly from the line lists.
pub fn plane_axioms(p: u64, lines: &[Vec<u64>]) -> bool {
    let v = p * p + p + 1;
    if lines.len() as u64 != v || lines.iter().any(|l| l.len() as u64 != p + 1) {
        return false;
    }
    let mut pair_lines: HashMap<(u64, u64), u32> = HashMap::new();
    for l in lines {
        for a in l {
            for b in l {
                if a < b {
                    *pair_lines.entry((*a, *b)).or_insert(0) += 1;
                }
            }
        }
    }
    let pairs_ok = pair_lines.len() as u64 == v * (v - 1) / 2 && pair_lines.values().all(|&c| c == 1);
    let sets: Vec<HashSet<u64>> = lines.iter().map(|l| l.iter().copied().collect()).collect();
    let meets_ok = (0..sets.len()).all(|a| (a + 1..sets.len()).all(|b| sets[a].intersection(&sets[b]).count() == 1));
    pairs_ok && meets_ok
}

/// Most edges sharing one `ell`-set, counted over every `ell`-subset of every
/// edge. Linear in the edge count, for systems too large for pairwise checks.
pub fn max_ell_cover(edges: &[Vec<u64>], ell: usize) -> u32 {
    let mut seen: HashMap<Vec<u64>, u32> = HashMap::new();
    for e in edges {
        for s in subsets(e, ell) {
            *seen.entry(s).or_insert(0) += 1;
        }
    }
    seen.into_values().max().unwrap_or(0)
}
