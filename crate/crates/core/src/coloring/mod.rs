//! Base colorings, the stepping-up rules and towers built from them.
//!
//! A base coloring is a materialized table over the `r`-subsets of `[N]`.
//! A stepped coloring colors `k`-subsets of the leaves `[2^N]` of `T(N)` on
//! demand: the shape of the leaf set picks the branch, and combs consult the
//! inner coloring on their projection, which is a `(k-1)`-subset of the
//! levels `[N]`.

mod base_search;
pub mod io;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::combin::{binomial, colex_rank};
use crate::error::{Error, Result};
use crate::tree::{classify_slice, LeafSet, Shape, TreeParams};

pub use base_search::{search_base_coloring, verify_no_mono_clique, BaseSearchOutcome, CliqueCheck};

/// Largest uniformity a stepped coloring evaluates on the stack.
pub const MAX_UNIFORMITY: usize = 16;

/// Default cap on the ground size of any tower level.
pub const DEFAULT_TOWER_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Palette {
    Binary,
    Z4,
}

impl Palette {
    pub fn size(self) -> u8 {
        match self {
            Palette::Binary => 2,
            Palette::Z4 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Palette::Binary => "binary",
            Palette::Z4 => "z4",
        }
    }

    pub fn contains(self, color: u8) -> bool {
        color < self.size()
    }
}

impl fmt::Display for Palette {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A coloring of the `uniformity()`-subsets of `[ground_size()]`.
pub trait Coloring: Send + Sync {
    fn uniformity(&self) -> usize;
    fn ground_size(&self) -> u64;
    fn palette(&self) -> Palette;

    /// Color of a sorted, in-range set of exactly `uniformity()` elements.
    fn color_unchecked(&self, set: &[u64]) -> u8;

    fn color(&self, set: &[u64]) -> Result<u8> {
        check_set(set, self.uniformity(), self.ground_size())?;
        Ok(self.color_unchecked(set))
    }
}

fn check_set(set: &[u64], arity: usize, ground: u64) -> Result<()> {
    if set.len() != arity {
        return Err(Error::Arity {
            expected: arity,
            got: set.len(),
        });
    }
    for &x in set {
        if x == 0 || x > ground {
            return Err(Error::LeafOutOfRange {
                leaf: x,
                max: ground,
            });
        }
    }
    if set.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnsortedLeaves);
    }
    Ok(())
}

/// Materialized coloring of `[N]^(r)`, indexed by colex rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseColoring {
    uniformity: usize,
    ground: u64,
    palette: Palette,
    table: Vec<u8>,
}

impl BaseColoring {
    /// `table[i]` is the color of the `i`-th `r`-subset in colex order.
    pub fn from_table(uniformity: usize, ground: u64, palette: Palette, table: Vec<u8>) -> Result<Self> {
        if uniformity == 0 || ground == 0 {
            return Err(Error::InvalidParams(format!(
                "uniformity {uniformity} on a ground set of {ground}"
            )));
        }
        let expected = binomial(ground, uniformity as u64);
        if expected > (1 << 32) {
            return Err(Error::InvalidParams(format!(
                "refusing to materialize {expected} subsets"
            )));
        }
        if table.len() as u64 != expected {
            return Err(Error::InvalidParams(format!(
                "table has {} entries, expected C({ground},{uniformity}) = {expected}",
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&c| !palette.contains(c)) {
            return Err(Error::ColorOutOfPalette {
                color: bad,
                palette: palette.name(),
            });
        }
        Ok(BaseColoring {
            uniformity,
            ground,
            palette,
            table,
        })
    }

    /// Builds the table by evaluating `f` on each subset in colex order.
    pub fn from_fn(uniformity: usize, ground: u64, palette: Palette, mut f: impl FnMut(&[u64]) -> u8) -> Result<Self> {
        let table = crate::combin::colex_subsets(ground, uniformity)
            .map(|s| f(&s))
            .collect();
        BaseColoring::from_table(uniformity, ground, palette, table)
    }

    pub fn constant(uniformity: usize, ground: u64, palette: Palette, color: u8) -> Result<Self> {
        BaseColoring::from_fn(uniformity, ground, palette, |_| color)
    }

    /// 4-cycle `1-2-3-4-1` in color 0, both diagonals in color 1.
    pub fn c4_diagonals() -> Self {
        BaseColoring::from_fn(2, 4, Palette::Binary, |s| u8::from(s[1] - s[0] == 2))
            .expect("fixed coloring")
    }

    /// Pentagon `1-2-3-4-5-1` in color 0, its complement in color 1.
    pub fn pentagon() -> Self {
        BaseColoring::from_fn(2, 5, Palette::Binary, |s| {
            let gap = s[1] - s[0];
            u8::from(gap != 1 && gap != 4)
        })
        .expect("fixed coloring")
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    /// Materializes any coloring with a small enough ground set.
    pub fn materialize(c: &dyn Coloring) -> Result<Self> {
        BaseColoring::from_fn(c.uniformity(), c.ground_size(), c.palette(), |s| c.color_unchecked(s))
    }
}

impl Coloring for BaseColoring {
    fn uniformity(&self) -> usize {
        self.uniformity
    }

    fn ground_size(&self) -> u64 {
        self.ground
    }

    fn palette(&self) -> Palette {
        self.palette
    }

    #[inline]
    fn color_unchecked(&self, set: &[u64]) -> u8 {
        self.table[colex_rank(set) as usize]
    }
}

/// `χ_c` on the `k`-subsets of the leaves of `T(N)`, where `c` colors the
/// `(k-1)`-subsets of `[N]`.
#[derive(Clone)]
pub struct SteppedColoring {
    inner: Arc<dyn Coloring>,
    uniformity: usize,
    params: TreeParams,
}

impl fmt::Debug for SteppedColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SteppedColoring")
            .field("uniformity", &self.uniformity)
            .field("depth", &self.params.depth())
            .field("inner_palette", &self.inner.palette())
            .finish()
    }
}

impl SteppedColoring {
    pub fn new(inner: Arc<dyn Coloring>) -> Result<Self> {
        let k = inner.uniformity() + 1;
        if k < 3 {
            return Err(Error::InvalidParams(
                "stepping up needs an inner uniformity of at least 2".into(),
            ));
        }
        if k > MAX_UNIFORMITY {
            return Err(Error::InvalidParams(format!(
                "uniformity {k} exceeds the supported maximum {MAX_UNIFORMITY}"
            )));
        }
        if k == 3 && inner.palette() != Palette::Binary {
            return Err(Error::Palette(
                "the k=3 rule needs an inner coloring with palette {0,1}".into(),
            ));
        }
        let depth = u32::try_from(inner.ground_size())
            .ok()
            .filter(|&d| d <= 63)
            .ok_or_else(|| Error::CapExceeded {
                level: k,
                size: format!("2^{}", inner.ground_size()),
                cap: u64::MAX,
            })?;
        Ok(SteppedColoring {
            inner,
            uniformity: k,
            params: TreeParams::new(depth)?,
        })
    }

    pub fn params(&self) -> TreeParams {
        self.params
    }

    pub fn inner(&self) -> &Arc<dyn Coloring> {
        &self.inner
    }
}

impl Coloring for SteppedColoring {
    fn uniformity(&self) -> usize {
        self.uniformity
    }

    fn ground_size(&self) -> u64 {
        self.params.leaf_count()
    }

    fn palette(&self) -> Palette {
        Palette::Z4
    }

    fn color_unchecked(&self, set: &[u64]) -> u8 {
        let k = self.uniformity;
        let p = self.params;
        if k == 3 {
            let d1 = p.delta_unchecked(set[0], set[1]);
            let d2 = p.delta_unchecked(set[1], set[2]);
            return if d1 > d2 {
                self.inner.color_unchecked(&[d2 as u64, d1 as u64])
            } else {
                3 - self.inner.color_unchecked(&[d1 as u64, d2 as u64])
            };
        }
        match classify_slice(set, p) {
            shape @ (Shape::LeftComb | Shape::RightComb) => {
                let mut levels = [0u64; MAX_UNIFORMITY];
                let proj = &mut levels[..k - 1];
                for (slot, w) in proj.iter_mut().zip(set.windows(2)) {
                    *slot = p.delta_unchecked(w[0], w[1]) as u64;
                }
                if shape == Shape::LeftComb {
                    proj.reverse();
                    3 - self.inner.color_unchecked(proj)
                } else {
                    self.inner.color_unchecked(proj)
                }
            }
            Shape::Split { left, right } => {
                if left >= 2 && right >= 2 {
                    0
                } else if right == 1 {
                    1
                } else {
                    2
                }
            }
        }
    }
}

/// Evaluates `χ` on a leaf set of the coloring's tree.
pub fn chi(coloring: &SteppedColoring, set: &LeafSet) -> Result<u8> {
    if set.params() != coloring.params() {
        return Err(Error::InvalidParams(format!(
            "leaf set lives on T({}), coloring on T({})",
            set.params().depth(),
            coloring.params().depth()
        )));
    }
    coloring.color(set.elements())
}

/// The order-reversing involution `x -> 2^N + 1 - x`.
pub fn theta(x: u64, params: TreeParams) -> Result<u64> {
    params.check_leaf(x)?;
    Ok(params.leaf_count() + 1 - x)
}

/// Image of a sorted set under `θ`, sorted again.
pub fn theta_set(set: &[u64], ground: u64) -> Vec<u64> {
    set.iter().rev().map(|&x| ground + 1 - x).collect()
}

/// `X -> c(θ(X))`: the coloring seen through the reversed order.
pub struct Reflected<C> {
    inner: C,
}

impl<C: Coloring> Reflected<C> {
    pub fn new(inner: C) -> Self {
        Reflected { inner }
    }
}

impl<C: Coloring> Coloring for Reflected<C> {
    fn uniformity(&self) -> usize {
        self.inner.uniformity()
    }

    fn ground_size(&self) -> u64 {
        self.inner.ground_size()
    }

    fn palette(&self) -> Palette {
        self.inner.palette()
    }

    fn color_unchecked(&self, set: &[u64]) -> u8 {
        let n = self.inner.ground_size();
        let mut buf = [0u64; MAX_UNIFORMITY];
        let k = set.len();
        for (slot, &x) in buf[..k].iter_mut().zip(set.iter().rev()) {
            *slot = n + 1 - x;
        }
        self.inner.color_unchecked(&buf[..k])
    }
}

impl<C: Coloring + ?Sized> Coloring for Arc<C> {
    fn uniformity(&self) -> usize {
        (**self).uniformity()
    }

    fn ground_size(&self) -> u64 {
        (**self).ground_size()
    }

    fn palette(&self) -> Palette {
        (**self).palette()
    }

    fn color_unchecked(&self, set: &[u64]) -> u8 {
        (**self).color_unchecked(set)
    }
}

impl<C: Coloring + ?Sized> Coloring for &C {
    fn uniformity(&self) -> usize {
        (**self).uniformity()
    }

    fn ground_size(&self) -> u64 {
        (**self).ground_size()
    }

    fn palette(&self) -> Palette {
        (**self).palette()
    }

    fn color_unchecked(&self, set: &[u64]) -> u8 {
        (**self).color_unchecked(set)
    }
}

/// A base coloring followed by repeated stepping up.
#[derive(Debug, Clone)]
pub struct ColoringTower {
    base: Arc<BaseColoring>,
    levels: Vec<Arc<SteppedColoring>>,
}

impl ColoringTower {
    pub fn base(&self) -> &BaseColoring {
        &self.base
    }

    pub fn levels(&self) -> &[Arc<SteppedColoring>] {
        &self.levels
    }

    pub fn top(&self) -> &Arc<SteppedColoring> {
        self.levels.last().expect("towers have at least one level")
    }

    /// Ground sizes from the base up to the top level.
    pub fn ground_sizes(&self) -> Vec<u64> {
        std::iter::once(self.base.ground)
            .chain(self.levels.iter().map(|l| l.ground_size()))
            .collect()
    }
}

/// Steps `base` up until the uniformity reaches `target_k`, refusing any
/// level whose ground set would exceed `cap`.
pub fn build_tower(base: BaseColoring, target_k: usize, cap: u64) -> Result<ColoringTower> {
    if base.uniformity < 2 {
        return Err(Error::InvalidParams("base uniformity must be at least 2".into()));
    }
    if target_k <= base.uniformity {
        return Err(Error::InvalidParams(format!(
            "target uniformity {target_k} must exceed the base uniformity {}",
            base.uniformity
        )));
    }
    // check every ground size before building anything
    let mut ground = base.ground;
    for level in base.uniformity + 1..=target_k {
        if ground > 63 || (1u64 << ground) > cap {
            return Err(Error::CapExceeded {
                level,
                size: if ground > 63 {
                    format!("2^{ground}")
                } else {
                    (1u64 << ground).to_string()
                },
                cap,
            });
        }
        ground = 1u64 << ground;
    }
    let base = Arc::new(base);
    let mut levels: Vec<Arc<SteppedColoring>> = Vec::new();
    let mut inner: Arc<dyn Coloring> = base.clone();
    for _ in base.uniformity + 1..=target_k {
        let step = Arc::new(SteppedColoring::new(inner)?);
        inner = step.clone();
        levels.push(step);
    }
    Ok(ColoringTower { base, levels })
}
