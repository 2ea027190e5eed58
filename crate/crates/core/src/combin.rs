//! Small combinatorial helpers shared by the colorings, families and
//! Steiner constructions. Subsets are sorted ascending and 1-based.

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Colex rank of a sorted subset of `[N]`: `sum_i C(a_i - 1, i)`.
pub fn colex_rank(set: &[u64]) -> u64 {
    set.iter()
        .enumerate()
        .map(|(i, &a)| binomial(a - 1, i as u64 + 1))
        .sum()
}

/// Inverse of [`colex_rank`] for `r`-subsets.
pub fn colex_unrank(mut rank: u64, r: usize) -> Vec<u64> {
    let mut out = vec![0u64; r];
    for i in (1..=r).rev() {
        // largest a with C(a-1, i) <= rank
        let mut a = i as u64;
        while binomial(a, i as u64) <= rank {
            a += 1;
        }
        rank -= binomial(a - 1, i as u64);
        out[i - 1] = a;
    }
    out
}

/// Iterator over the `r`-subsets of `{lo, ..., hi}` in colex order.
#[derive(Debug, Clone)]
pub struct Colex {
    cur: Option<Vec<u64>>,
    lo: u64,
    hi: u64,
}

impl Colex {
    pub fn new(lo: u64, hi: u64, r: usize) -> Self {
        let cur = if r == 0 {
            Some(Vec::new())
        } else if hi >= lo && (hi - lo + 1) as usize >= r {
            Some((0..r as u64).map(|i| lo + i).collect())
        } else {
            None
        };
        Colex { cur, lo, hi }
    }
}

impl Iterator for Colex {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.cur.take()?;
        let r = out.len();
        let mut next = out.clone();
        for i in 0..r {
            let limit = if i + 1 < r { next[i + 1] } else { self.hi + 1 };
            if next[i] + 1 < limit {
                next[i] += 1;
                for (j, slot) in next.iter_mut().enumerate().take(i) {
                    *slot = self.lo + j as u64;
                }
                self.cur = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// All `r`-subsets of `[n]` in colex order.
pub fn colex_subsets(n: u64, r: usize) -> Colex {
    Colex::new(1, n, r)
}

/// Advance `set` to the next `r`-subset of `[lo, hi]` in lexicographic order.
pub fn next_lex(set: &mut [u64], hi: u64) -> bool {
    let r = set.len();
    for i in (0..r).rev() {
        let max_here = hi - (r - 1 - i) as u64;
        if set[i] < max_here {
            set[i] += 1;
            for j in i + 1..r {
                set[j] = set[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Calls `f` on every `r`-subset (by position) of `items`, in lexicographic order.
pub fn for_each_subset<T: Copy>(items: &[T], r: usize, mut f: impl FnMut(&[T])) {
    let n = items.len();
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    let mut buf: Vec<T> = Vec::with_capacity(r);
    loop {
        buf.clear();
        buf.extend(idx.iter().map(|&i| items[i]));
        f(&buf);
        let Some(i) = (0..r).rev().find(|&i| idx[i] < n - r + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
