use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{BaseColoring, Coloring, Palette};
use crate::combin::binomial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum CliqueCheck {
    Ok,
    Witness { clique: Vec<u64>, color: u8 },
}

/// Exhaustively looks for a `t`-set of `[N]` whose `r`-subsets all share a
/// color; returns the lexicographically least one.
pub fn verify_no_mono_clique(c: &BaseColoring, t: usize) -> Result<CliqueCheck> {
    let r = c.uniformity();
    if t < r || t as u64 > c.ground_size() {
        return Err(Error::InvalidParams(format!(
            "clique size {t} must lie in [{r}, {}]",
            c.ground_size()
        )));
    }
    let mut picked = Vec::with_capacity(t);
    Ok(match extend_clique(c, t, &mut picked, None) {
        Some(color) => CliqueCheck::Witness {
            clique: picked,
            color,
        },
        None => CliqueCheck::Ok,
    })
}

/// Depth-first in lexicographic order; `color` is fixed once the first
/// `r` vertices are chosen.
fn extend_clique(c: &BaseColoring, t: usize, picked: &mut Vec<u64>, color: Option<u8>) -> Option<u8> {
    if picked.len() == t {
        return color;
    }
    let r = c.uniformity();
    let n = c.ground_size();
    let start = picked.last().map_or(1, |&x| x + 1);
    let remaining = (t - picked.len()) as u64;
    let mut buf = vec![0u64; r];
    for v in start..=n + 1 - remaining {
        picked.push(v);
        let mut col = color;
        let mut ok = true;
        if picked.len() >= r {
            // every r-subset that contains the new vertex
            let prefix = picked.len() - 1;
            crate::combin::for_each_subset(&picked[..prefix], r - 1, |s| {
                if !ok {
                    return;
                }
                buf[..r - 1].copy_from_slice(s);
                buf[r - 1] = v;
                let here = c.color_unchecked(&buf);
                match col {
                    None => col = Some(here),
                    Some(existing) if existing != here => ok = false,
                    _ => {}
                }
            });
        }
        if ok {
            if let Some(found) = extend_clique(c, t, picked, col) {
                return Some(found);
            }
        }
        picked.pop();
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseSearchOutcome {
    Found { coloring: BaseColoring, attempts: u64 },
    NotFound { attempts: u64, exhaustive: bool },
}

/// Looks for a 2-coloring of `[N]^(2)` without a monochromatic `K_t`.
///
/// When the budget covers all `2^C(N,2)` colorings they are enumerated in
/// index order, so a `NotFound` is a proof of non-existence. Otherwise each
/// attempt is an independent uniformly random coloring drawn from a
/// `ChaCha8` stream seeded with `seed`. Every candidate is verified
/// exhaustively before it is returned.
pub fn search_base_coloring(n: u64, t: usize, seed: u64, budget: u64) -> Result<BaseSearchOutcome> {
    if (t as u64) > n || t < 3 {
        return Err(Error::InvalidParams(format!(
            "need N >= t >= 3, got N={n}, t={t}"
        )));
    }
    let pairs = binomial(n, 2);
    let exhaustive = pairs < 64 && (1u64 << pairs) <= budget;
    let mut table = vec![0u8; pairs as usize];
    if exhaustive {
        for code in 0..1u64 << pairs {
            for (i, slot) in table.iter_mut().enumerate() {
                *slot = (code >> i & 1) as u8;
            }
            let c = BaseColoring::from_table(2, n, Palette::Binary, table.clone())?;
            if verify_no_mono_clique(&c, t)? == CliqueCheck::Ok {
                return Ok(BaseSearchOutcome::Found {
                    coloring: c,
                    attempts: code + 1,
                });
            }
        }
        return Ok(BaseSearchOutcome::NotFound {
            attempts: 1u64 << pairs,
            exhaustive: true,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=budget {
        for slot in table.iter_mut() {
            *slot = rng.gen_range(0..2);
        }
        let c = BaseColoring::from_table(2, n, Palette::Binary, table.clone())?;
        if verify_no_mono_clique(&c, t)? == CliqueCheck::Ok {
            return Ok(BaseSearchOutcome::Found {
                coloring: c,
                attempts: attempt,
            });
        }
    }
    Ok(BaseSearchOutcome::NotFound {
        attempts: budget,
        exhaustive: false,
    })
}
