//! Incidence structures: parsing, difference-set construction, design
//! verification, and Ryser–Woodall block complementation.
//!
//! A structure holds `v` points labelled `0..v` and exactly `v` blocks, each
//! a nonempty proper subset of the points. Whether the structure is a
//! symmetric design, a Ryser design, or neither is decided by [`verify`],
//! which checks the axioms by brute force.
//!
//! [`verify`]: IncidenceStructure::verify

use std::fmt;

use crate::error::{Error, Result};

/// `v` points and `v` blocks, blocks stored as sorted point lists.
///
/// Invariants enforced at construction: every block is a nonempty proper
/// subset of `{0, .., v-1}` and no two blocks are equal as sets. Block order
/// is significant for I/O and for [`complement`], but the blocks themselves
/// are sets.
///
/// [`complement`]: IncidenceStructure::complement
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceStructure {
    v: usize,
    blocks: Vec<Vec<usize>>,
}

/// Verdict of [`IncidenceStructure::verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DesignKind {
    /// Constant block size `k`, any two blocks meet in `lam_prime` points.
    Symmetric { k: usize, lam_prime: usize },
    /// Constant pairwise intersection `lam`, every block larger than `lam`,
    /// at least two block sizes.
    Ryser { lam: usize },
    /// Not a design; `reason` is the first violated axiom.
    Invalid { reason: String },
}

impl DesignKind {
    pub fn is_ryser(&self) -> bool {
        matches!(self, DesignKind::Ryser { .. })
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self, DesignKind::Symmetric { .. })
    }
}

impl fmt::Display for DesignKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DesignKind::Symmetric { k, lam_prime } => {
                write!(f, "Symmetric(k={k}, lambda={lam_prime})")
            }
            DesignKind::Ryser { lam } => write!(f, "Ryser(lambda={lam})"),
            DesignKind::Invalid { reason } => write!(f, "Invalid({reason})"),
        }
    }
}

impl IncidenceStructure {
    /// Builds a structure from raw blocks, validating every invariant.
    /// Points inside a block may arrive in any order; they are sorted here.
    pub fn new(v: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if v == 0 {
            return Err(Error::invalid("v must be positive"));
        }
        if blocks.len() != v {
            return Err(Error::invalid(format!(
                "block count mismatch: expected {v} blocks, found {}",
                blocks.len()
            )));
        }
        let mut sorted_blocks = Vec::with_capacity(v);
        for (i, mut block) in blocks.into_iter().enumerate() {
            block.sort_unstable();
            if block.is_empty() {
                return Err(Error::invalid(format!("block {i} is empty")));
            }
            if block.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("block {i} repeats a point")));
            }
            if *block.last().unwrap() >= v {
                return Err(Error::invalid(format!(
                    "block {i} contains point {} but v={v}",
                    block.last().unwrap()
                )));
            }
            if block.len() == v {
                return Err(Error::invalid(format!(
                    "block {i} contains every point; blocks must be proper subsets"
                )));
            }
            sorted_blocks.push(block);
        }
        for i in 0..v {
            for j in i + 1..v {
                if sorted_blocks[i] == sorted_blocks[j] {
                    return Err(Error::invalid(format!("blocks {i} and {j} are equal")));
                }
            }
        }
        Ok(IncidenceStructure {
            v,
            blocks: sorted_blocks,
        })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, index: usize) -> &[usize] {
        &self.blocks[index]
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Parses the `.des` text format: a `v=<count>` header followed by
    /// exactly `v` block lines of space-separated points. `#` comments and
    /// blank lines are ignored. Errors carry 1-based line numbers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut v: Option<usize> = None;
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some(v) = v else {
                let count = line
                    .strip_prefix("v=")
                    .ok_or_else(|| Error::parse(line_no, format!("expected 'v=<count>' header, found '{line}'")))?
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(line_no, format!("invalid point count in '{line}'")))?;
                if count == 0 {
                    return Err(Error::parse(line_no, "v must be positive"));
                }
                v = Some(count);
                continue;
            };
            if blocks.len() == v {
                return Err(Error::parse(
                    line_no,
                    format!("block count mismatch: expected {v} blocks, found more"),
                ));
            }
            let mut block = Vec::new();
            for tok in line.split_whitespace() {
                let p = tok
                    .parse::<usize>()
                    .map_err(|_| Error::parse(line_no, format!("invalid point '{tok}'")))?;
                if p >= v {
                    return Err(Error::parse(
                        line_no,
                        format!("point {p} out of range (v={v})"),
                    ));
                }
                if block.contains(&p) {
                    return Err(Error::parse(
                        line_no,
                        format!("duplicate point {p} within block"),
                    ));
                }
                block.push(p);
            }
            block.sort_unstable();
            if block.len() == v {
                return Err(Error::parse(
                    line_no,
                    format!("block {} contains every point", blocks.len()),
                ));
            }
            if let Some(prev) = blocks.iter().position(|b| *b == block) {
                return Err(Error::parse(
                    line_no,
                    format!("duplicate block (equal to block {prev})"),
                ));
            }
            blocks.push(block);
        }
        let Some(v) = v else {
            return Err(Error::parse(last_line.max(1), "missing 'v=<count>' header"));
        };
        if blocks.len() != v {
            return Err(Error::parse(
                last_line.max(1),
                format!("block count mismatch: expected {v} blocks, found {}", blocks.len()),
            ));
        }
        IncidenceStructure::new(v, blocks)
    }

    /// Serializes to the canonical `.des` form: sorted points, single
    /// spaces, line-feed terminated, block order preserved. Parsing the
    /// output reproduces the structure byte for byte.
    pub fn to_des_string(&self) -> String {
        let mut out = format!("v={}\n", self.v);
        for block in &self.blocks {
            let mut first = true;
            for p in block {
                if !first {
                    out.push(' ');
                }
                out.push_str(&p.to_string());
                first = false;
            }
            out.push('\n');
        }
        out
    }

    /// Develops a base block modulo `v`: block `i` is `{(b + i) mod v}`.
    pub fn from_difference_set(v: usize, base: &[usize]) -> Result<Self> {
        if v == 0 {
            return Err(Error::invalid("v must be positive"));
        }
        if base.is_empty() {
            return Err(Error::invalid("base block is empty"));
        }
        let mut seen = vec![false; v];
        for &b in base {
            if b >= v {
                return Err(Error::invalid(format!("base point {b} out of range (v={v})")));
            }
            if seen[b] {
                return Err(Error::invalid(format!("base block repeats point {b}")));
            }
            seen[b] = true;
        }
        if base.len() == v {
            return Err(Error::invalid("base block is the full point set"));
        }
        let blocks = (0..v)
            .map(|i| base.iter().map(|&b| (b + i) % v).collect())
            .collect();
        IncidenceStructure::new(v, blocks)
    }

    /// Classifies the structure by brute force: computes every pairwise
    /// intersection size and checks the symmetric / Ryser axioms.
    pub fn verify(&self) -> DesignKind {
        let lam = match self.common_intersection() {
            Ok(l) => l,
            Err(reason) => return DesignKind::Invalid { reason },
        };
        for (i, block) in self.blocks.iter().enumerate() {
            if block.len() <= lam {
                return DesignKind::Invalid {
                    reason: format!(
                        "block {i} has size {} not larger than the intersection number {lam}",
                        block.len()
                    ),
                };
            }
        }
        let mut sizes: Vec<usize> = self.block_sizes();
        sizes.sort_unstable();
        sizes.dedup();
        match sizes.len() {
            1 => {
                if lam == 0 {
                    DesignKind::Invalid {
                        reason: "pairwise intersection number is 0".into(),
                    }
                } else {
                    DesignKind::Symmetric {
                        k: sizes[0],
                        lam_prime: lam,
                    }
                }
            }
            _ => DesignKind::Ryser { lam },
        }
    }

    fn common_intersection(&self) -> std::result::Result<usize, String> {
        if self.v < 2 {
            return Err("fewer than two blocks".into());
        }
        let first = intersection_size(&self.blocks[0], &self.blocks[1]);
        for i in 0..self.v {
            for j in i + 1..self.v {
                let m = intersection_size(&self.blocks[i], &self.blocks[j]);
                if m != first {
                    return Err(format!(
                        "blocks {i} and {j} intersect in {m} points, expected {first}"
                    ));
                }
            }
        }
        Ok(first)
    }

    /// Ryser–Woodall complementation: keeps the block at `block_index` and
    /// replaces every other block `B` by the symmetric difference `A △ B`.
    /// Block order is preserved and the operation is an involution.
    pub fn complement(&self, block_index: usize) -> Result<Self> {
        if block_index >= self.v {
            return Err(Error::invalid(format!(
                "block index {block_index} out of range (v={})",
                self.v
            )));
        }
        let pivot = self.blocks[block_index].clone();
        let mut blocks = Vec::with_capacity(self.v);
        for (i, block) in self.blocks.iter().enumerate() {
            if i == block_index {
                blocks.push(pivot.clone());
            } else {
                let diff = symmetric_difference(&pivot, block);
                if diff.is_empty() {
                    return Err(Error::invalid(format!(
                        "symmetric difference of blocks {block_index} and {i} is empty"
                    )));
                }
                blocks.push(diff);
            }
        }
        IncidenceStructure::new(self.v, blocks)
    }
}

/// Intersection size of two sorted point lists.
pub fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// A named cyclic symmetric design: developing `base` modulo `v` yields a
/// symmetric `(v, k, lam_prime)` design.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub v: usize,
    pub base: Vec<usize>,
    pub expected_k: usize,
    pub expected_lam_prime: usize,
}

impl CatalogEntry {
    pub fn build(&self) -> Result<IncidenceStructure> {
        IncidenceStructure::from_difference_set(self.v, &self.base)
    }
}

/// Built-in difference sets. Every entry develops to a symmetric design
/// with `k != 2(k - lam_prime)`, so complementing at any block yields a
/// Ryser design. The last entry is the block complement of the projective
/// plane of order 3; its complementations produce designs with `D = -1`,
/// the other entries produce `D = 0`.
pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "fano",
            v: 7,
            base: vec![1, 2, 4],
            expected_k: 3,
            expected_lam_prime: 1,
        },
        CatalogEntry {
            name: "biplane11",
            v: 11,
            base: vec![1, 3, 4, 5, 9],
            expected_k: 5,
            expected_lam_prime: 2,
        },
        CatalogEntry {
            name: "pg2-3",
            v: 13,
            base: vec![0, 1, 3, 9],
            expected_k: 4,
            expected_lam_prime: 1,
        },
        CatalogEntry {
            name: "had15",
            v: 15,
            base: vec![0, 1, 2, 4, 5, 8, 10],
            expected_k: 7,
            expected_lam_prime: 3,
        },
        CatalogEntry {
            name: "pg2-4",
            v: 21,
            base: vec![3, 6, 7, 12, 14],
            expected_k: 5,
            expected_lam_prime: 1,
        },
        CatalogEntry {
            name: "paley23",
            v: 23,
            base: vec![1, 2, 3, 4, 6, 8, 9, 12, 13, 16, 18],
            expected_k: 11,
            expected_lam_prime: 5,
        },
        CatalogEntry {
            name: "pg2-3c",
            v: 13,
            base: vec![2, 4, 5, 6, 7, 8, 10, 11, 12],
            expected_k: 9,
            expected_lam_prime: 6,
        },
    ]
}
