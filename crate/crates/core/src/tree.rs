//! Leaf arithmetic on the complete binary tree `T(N)`.
//!
//! Leaves are `1..=2^N`, levels run from 1 (root) to `N + 1` (leaves). A leaf
//! `x` is encoded as the `N`-bit integer `x - 1`; reading its bits from the
//! most significant one down spells the root-to-leaf path (0 = left child,
//! 1 = right child). Two leaves therefore part ways at the most significant
//! bit of `(x - 1) ^ (y - 1)`, and if that bit sits at position `b` the
//! greatest common ancestor lives on level `N - b`.

use crate::error::{Error, Result};

/// Depth of the tree; the leaf universe is `[2^N]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TreeParams {
    depth: u32,
}

impl TreeParams {
    pub fn new(depth: u32) -> Result<Self> {
        if depth == 0 || depth > 63 {
            return Err(Error::InvalidDepth(depth));
        }
        Ok(TreeParams { depth })
    }

    /// Smallest tree whose leaves cover `[size]`, if `size` is a power of two.
    pub fn for_ground(size: u64) -> Result<Self> {
        if !size.is_power_of_two() || size < 2 {
            return Err(Error::InvalidParams(format!(
                "ground size {size} is not a power of two >= 2"
            )));
        }
        TreeParams::new(size.trailing_zeros())
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn leaf_count(&self) -> u64 {
        1u64 << self.depth
    }

    pub fn check_leaf(&self, x: u64) -> Result<()> {
        if x == 0 || x > self.leaf_count() {
            return Err(Error::LeafOutOfRange {
                leaf: x,
                max: self.leaf_count(),
            });
        }
        Ok(())
    }

    /// `δ` without range or equality checks; callers guarantee `x != y`.
    #[inline]
    pub(crate) fn delta_unchecked(&self, x: u64, y: u64) -> u32 {
        let diff = (x - 1) ^ (y - 1);
        self.depth - (63 - diff.leading_zeros())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Level of the greatest common ancestor of two distinct leaves.
pub fn delta(x: u64, y: u64, params: TreeParams) -> Result<u32> {
    params.check_leaf(x)?;
    params.check_leaf(y)?;
    if x == y {
        return Err(Error::EqualLeaves);
    }
    Ok(params.delta_unchecked(x, y))
}

/// Which subtree of `a(x, y)` contains `x`.
pub fn descendant_side(x: u64, y: u64, params: TreeParams) -> Result<Side> {
    let level = delta(x, y, params)?;
    // the child of a(x,y) on x's path is chosen by the bit at position N - level
    let bit = params.depth() - level;
    if (x - 1) >> bit & 1 == 0 {
        Ok(Side::Left)
    } else {
        Ok(Side::Right)
    }
}

/// A strictly increasing set of leaves of `T(N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeafSet {
    elements: Vec<u64>,
    params: TreeParams,
}

impl LeafSet {
    /// Builds a leaf set from already sorted, distinct leaves.
    pub fn new(elements: Vec<u64>, params: TreeParams) -> Result<Self> {
        for &x in &elements {
            params.check_leaf(x)?;
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedLeaves);
        }
        Ok(LeafSet { elements, params })
    }

    /// Sorts and deduplicates-checks arbitrary input.
    pub fn from_unsorted(mut elements: Vec<u64>, params: TreeParams) -> Result<Self> {
        elements.sort_unstable();
        LeafSet::new(elements, params)
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn params(&self) -> TreeParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Consecutive `δ(x_{i-1}, x_i)` for `i = 2..=t`.
    pub fn consecutive_deltas(&self) -> Vec<u32> {
        consecutive_deltas(&self.elements, self.params)
    }
}

pub(crate) fn consecutive_deltas(xs: &[u64], params: TreeParams) -> Vec<u32> {
    xs.windows(2)
        .map(|w| params.delta_unchecked(w[0], w[1]))
        .collect()
}

/// Comb or split classification of a leaf set with at least 3 elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Shape {
    LeftComb,
    RightComb,
    Split { left: usize, right: usize },
}

impl Shape {
    pub fn is_comb(&self) -> bool {
        matches!(self, Shape::LeftComb | Shape::RightComb)
    }

    pub fn is_balanced(&self) -> bool {
        matches!(self, Shape::Split { left, right } if *left >= 2 && *right >= 2)
    }

    /// `(k-1, 1)`-split for a set of size `k`.
    pub fn is_head_split(&self) -> bool {
        matches!(self, Shape::Split { left, right } if *right == 1 && *left >= 2)
    }

    /// `(1, k-1)`-split for a set of size `k`.
    pub fn is_tail_split(&self) -> bool {
        matches!(self, Shape::Split { left, right } if *left == 1 && *right >= 2)
    }
}

/// Partition of `X` into the leaves left and right of `u_X = a(min X, max X)`.
pub fn split_parts(set: &LeafSet) -> Result<(LeafSet, LeafSet)> {
    if set.len() < 2 {
        return Err(Error::TooFewForSplit);
    }
    let cut = split_point(set.elements());
    let (l, r) = set.elements.split_at(cut);
    Ok((
        LeafSet {
            elements: l.to_vec(),
            params: set.params,
        },
        LeafSet {
            elements: r.to_vec(),
            params: set.params,
        },
    ))
}

/// Number of leaves of a sorted slice (len >= 2) lying in `L(u_X)`.
#[inline]
pub(crate) fn split_point(xs: &[u64]) -> usize {
    let first = xs[0] - 1;
    let last = xs[xs.len() - 1] - 1;
    let bit = 63 - (first ^ last).leading_zeros();
    // leaves below u_X agree with `first` above `bit`; the side is bit `bit`
    xs.partition_point(|&x| (x - 1) >> bit & 1 == 0)
}

/// Shape of a leaf set of size at least 3.
pub fn classify(set: &LeafSet) -> Result<Shape> {
    if set.len() < 3 {
        return Err(Error::TooFewForShape);
    }
    Ok(classify_slice(set.elements(), set.params()))
}

#[inline]
pub(crate) fn classify_slice(xs: &[u64], params: TreeParams) -> Shape {
    let mut decreasing = true;
    let mut increasing = true;
    let mut prev = params.delta_unchecked(xs[0], xs[1]);
    for w in xs[1..].windows(2) {
        let d = params.delta_unchecked(w[0], w[1]);
        decreasing &= d < prev;
        increasing &= d > prev;
        prev = d;
    }
    if decreasing {
        Shape::LeftComb
    } else if increasing {
        Shape::RightComb
    } else {
        let left = split_point(xs);
        Shape::Split {
            left,
            right: xs.len() - left,
        }
    }
}

/// `π(X)`: the distinct consecutive `δ` values of `X`, ascending.
pub fn projection(set: &LeafSet) -> Result<Vec<u32>> {
    if set.len() < 2 {
        return Err(Error::TooFewForSplit);
    }
    let mut levels = set.consecutive_deltas();
    levels.sort_unstable();
    levels.dedup();
    Ok(levels)
}
