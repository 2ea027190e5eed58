//! Text format for base colorings and the JSON tower descriptor.
//!
//! ```text
//! coloring 2 4 binary
//! 1 2 0
//! 1 3 1
//! ...
//! ```
//!
//! The header is `coloring r N palette`; every following line is one
//! `r`-subset and its color. Export writes subsets in colex order with
//! vertices ascending; import accepts any line order, skips blank lines and
//! `#` comments, and requires every subset exactly once.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{build_tower, BaseColoring, Coloring, ColoringTower, Palette, DEFAULT_TOWER_CAP};
use crate::combin::{binomial, colex_rank, colex_subsets};
use crate::error::{Error, Result};

pub const TOWER_SCHEMA: &str = "ramsey-stepup/tower/v1";

pub fn export_coloring(c: &BaseColoring) -> String {
    let mut out = format!("coloring {} {} {}\n", c.uniformity(), c.ground_size(), c.palette());
    for (s, &color) in colex_subsets(c.ground_size(), c.uniformity()).zip(c.table()) {
        for v in &s {
            write!(out, "{v} ").unwrap();
        }
        writeln!(out, "{color}").unwrap();
    }
    out
}

pub fn import_coloring(text: &str) -> Result<BaseColoring> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().ok_or_else(|| Error::Format("empty input".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [tag, r, n, palette] = fields[..] else {
        return Err(Error::Format(format!("malformed header {header:?}")));
    };
    if tag != "coloring" {
        return Err(Error::Format(format!("malformed header {header:?}")));
    }
    let r: usize = parse_num(r, 1)?;
    let n: u64 = parse_num(n, 1)?;
    let palette = match palette {
        "binary" => Palette::Binary,
        "z4" => Palette::Z4,
        other => return Err(Error::Format(format!("unknown palette {other:?}"))),
    };
    if r == 0 || n == 0 {
        return Err(Error::Format("uniformity and ground size must be positive".into()));
    }
    let total = binomial(n, r as u64);
    if total > 1 << 32 {
        return Err(Error::Format(format!("refusing to read {total} subsets")));
    }
    let mut table: Vec<Option<u8>> = vec![None; total as usize];
    for (lineno, line) in lines {
        let nums: Vec<u64> = line
            .split_whitespace()
            .map(|t| parse_num(t, lineno))
            .collect::<Result<_>>()?;
        if nums.len() != r + 1 {
            return Err(Error::Format(format!(
                "line {lineno}: expected {r} vertices and a color, got {} fields",
                nums.len()
            )));
        }
        let mut set = nums[..r].to_vec();
        set.sort_unstable();
        if set.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Format(format!("line {lineno}: repeated vertex")));
        }
        if let Some(&bad) = set.iter().find(|&&v| v == 0 || v > n) {
            return Err(Error::Format(format!("line {lineno}: vertex {bad} outside [1, {n}]")));
        }
        let color = u8::try_from(nums[r])
            .ok()
            .filter(|&c| palette.contains(c))
            .ok_or(Error::ColorOutOfPalette {
                color: nums[r].min(255) as u8,
                palette: palette.name(),
            })?;
        let slot = &mut table[colex_rank(&set) as usize];
        if slot.is_some() {
            return Err(Error::Format(format!("line {lineno}: subset {set:?} listed twice")));
        }
        *slot = Some(color);
    }
    if let Some(missing) = table.iter().position(Option::is_none) {
        return Err(Error::Format(format!(
            "subset {:?} has no color",
            crate::combin::colex_unrank(missing as u64, r)
        )));
    }
    BaseColoring::from_table(r, n, palette, table.into_iter().map(Option::unwrap).collect())
}

fn parse_num<T: std::str::FromStr>(s: &str, lineno: usize) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Format(format!("line {lineno}: {s:?} is not a non-negative integer")))
}

pub fn read_coloring(path: &Path) -> Result<BaseColoring> {
    import_coloring(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum BaseSource {
    /// Path to a coloring file, relative to the descriptor's directory.
    Path(String),
    /// The coloring file contents.
    Inline(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerDescriptor {
    pub schema: String,
    pub base: BaseSource,
    pub target_k: usize,
    #[serde(default = "default_cap")]
    pub cap: u64,
}

fn default_cap() -> u64 {
    DEFAULT_TOWER_CAP
}

impl TowerDescriptor {
    pub fn parse(json: &str) -> Result<Self> {
        let d: TowerDescriptor = serde_json::from_str(json)?;
        if d.schema != TOWER_SCHEMA {
            return Err(Error::Format(format!(
                "unsupported schema {:?}, expected {TOWER_SCHEMA:?}",
                d.schema
            )));
        }
        Ok(d)
    }

    pub fn build(&self, base_dir: &Path) -> Result<ColoringTower> {
        let base = match &self.base {
            BaseSource::Path(p) => read_coloring(&base_dir.join(p))?,
            BaseSource::Inline(text) => import_coloring(text)?,
        };
        build_tower(base, self.target_k, self.cap)
    }
}
