//! Bounded archive of mutually non-dominated solutions with adaptive-grid
//! crowding.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::evaluator::{dominates, Dominance, Objectives};
use crate::subset::FeatureSubset;

pub const DEFAULT_CAPACITY: usize = 100;
pub const DEFAULT_GRID_DEPTH: u32 = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArchiveEntry {
    #[serde(rename = "mask")]
    pub subset: FeatureSubset,
    #[serde(flatten)]
    pub objectives: Objectives,
}

impl ArchiveEntry {
    pub fn new(subset: FeatureSubset, objectives: Objectives) -> Self {
        debug_assert_eq!(subset.count(), objectives.n_selected);
        Self { subset, objectives }
    }
}

/// Grid over the bounding box of a point set. Each objective is bisected
/// `depth` times, giving `2^depth` slots per axis and `4^depth` cells.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptiveGrid {
    depth: u32,
    lower: [f64; 2],
    upper: [f64; 2],
    occupancy: HashMap<u64, usize>,
}

fn coords(o: &Objectives) -> [f64; 2] {
    [o.error_pct, o.n_selected as f64]
}

impl AdaptiveGrid {
    /// Bounds are the per-objective min/max of `points`.
    pub fn fit<'a>(depth: u32, points: impl IntoIterator<Item = &'a Objectives>) -> Self {
        let mut grid = Self {
            depth,
            lower: [f64::INFINITY; 2],
            upper: [f64::NEG_INFINITY; 2],
            occupancy: HashMap::new(),
        };
        let points: Vec<&Objectives> = points.into_iter().collect();
        for p in &points {
            let c = coords(p);
            for (k, v) in c.into_iter().enumerate() {
                grid.lower[k] = grid.lower[k].min(v);
                grid.upper[k] = grid.upper[k].max(v);
            }
        }
        for p in points {
            *grid.occupancy.entry(grid.cell(p)).or_insert(0) += 1;
        }
        grid
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        (self.lower, self.upper)
    }

    pub fn contains(&self, o: &Objectives) -> bool {
        let c = coords(o);
        (0..2).all(|k| c[k] >= self.lower[k] && c[k] <= self.upper[k])
    }

    /// Cell id in `[0, 4^depth)`: the error slot in the high bits, the
    /// feature-count slot in the low bits. The box minimum maps to cell 0 and
    /// the maximum edge belongs to the last slot.
    pub fn cell(&self, o: &Objectives) -> u64 {
        let slots = 1u64 << self.depth;
        let c = coords(o);
        let slot = |k: usize| -> u64 {
            let span = self.upper[k] - self.lower[k];
            if span <= 0.0 || span.is_nan() {
                return 0;
            }
            let t = ((c[k] - self.lower[k]) / span).clamp(0.0, 1.0);
            ((t * slots as f64) as u64).min(slots - 1)
        };
        slot(0) << self.depth | slot(1)
    }

    pub fn occupancy(&self, cell: u64) -> usize {
        self.occupancy.get(&cell).copied().unwrap_or(0)
    }

    pub fn max_occupancy(&self) -> usize {
        self.occupancy.values().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.occupancy.values().sum()
    }
}

/// Result of offering a candidate to the archive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AddOutcome {
    /// Some member dominates the candidate; nothing changed.
    DominatedByArchive,
    /// Inserted; `displaced` members dominated by the candidate were removed.
    Added { displaced: usize },
    /// Archive was full; a member of the most crowded cell made room.
    AddedWithEviction,
    /// Archive was full and the candidate's cell was not less crowded.
    RejectedFull,
    /// A member with the same mask is already stored.
    AlreadyPresent,
}

#[derive(Clone, Debug)]
pub struct Archive {
    entries: Vec<ArchiveEntry>,
    capacity: usize,
    grid: AdaptiveGrid,
}

impl Archive {
    pub fn new(capacity: usize, depth: u32) -> Self {
        assert!(capacity >= 1, "archive capacity must be at least 1");
        Self {
            entries: Vec::new(),
            capacity,
            grid: AdaptiveGrid::fit(depth, []),
        }
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn is_full(&self) -> bool {
        self.entries.len() >= self.capacity
    }

    pub fn grid(&self) -> &AdaptiveGrid {
        &self.grid
    }

    pub fn contains_mask(&self, subset: &FeatureSubset) -> bool {
        self.entries.iter().any(|e| &e.subset == subset)
    }

    fn rebuild_grid(&mut self) {
        self.grid = AdaptiveGrid::fit(self.grid.depth, self.entries.iter().map(|e| &e.objectives));
    }

    /// Grid fitted to the archive plus any `extra` points not already stored.
    pub fn grid_with(&self, extra: &[&ArchiveEntry]) -> AdaptiveGrid {
        let mut points: Vec<&Objectives> = self.entries.iter().map(|e| &e.objectives).collect();
        for e in extra {
            if !self.contains_mask(&e.subset) {
                points.push(&e.objectives);
            }
        }
        AdaptiveGrid::fit(self.grid.depth, points)
    }

    /// Number of archive members sharing `entry`'s grid cell, counting
    /// `entry` itself when it is not stored.
    pub fn crowding(&self, entry: &ArchiveEntry) -> usize {
        let grid = self.grid_with(&[entry]);
        grid.occupancy(grid.cell(&entry.objectives))
    }

    /// Whether any member dominates `o`.
    pub fn dominated_by_any(&self, o: &Objectives) -> bool {
        self.entries
            .iter()
            .any(|e| dominates(&e.objectives, o) == Dominance::FirstDominates)
    }

    /// Offers a candidate. Dominated candidates are refused; members the
    /// candidate dominates are dropped; a full archive admits an incomparable
    /// candidate only if its cell is less crowded than the most crowded one,
    /// evicting a random member of a most crowded cell.
    pub fn try_add<R: Rng + ?Sized>(&mut self, candidate: ArchiveEntry, rng: &mut R) -> AddOutcome {
        if self.contains_mask(&candidate.subset) {
            return AddOutcome::AlreadyPresent;
        }
        if self.dominated_by_any(&candidate.objectives) {
            return AddOutcome::DominatedByArchive;
        }
        let before = self.entries.len();
        self.entries
            .retain(|e| dominates(&candidate.objectives, &e.objectives) != Dominance::FirstDominates);
        let displaced = before - self.entries.len();

        if displaced == 0 && self.is_full() {
            let grid = self.grid_with(&[&candidate]);
            let own = grid.occupancy(grid.cell(&candidate.objectives));
            let most = grid.max_occupancy();
            if own >= most {
                return AddOutcome::RejectedFull;
            }
            let crowded: Vec<usize> = (0..self.entries.len())
                .filter(|&i| grid.occupancy(grid.cell(&self.entries[i].objectives)) == most)
                .collect();
            let victim = crowded[rng.random_range(0..crowded.len())];
            self.entries.swap_remove(victim);
            self.entries.push(candidate);
            self.rebuild_grid();
            return AddOutcome::AddedWithEviction;
        }

        self.entries.push(candidate);
        self.rebuild_grid();
        AddOutcome::Added { displaced }
    }

    /// Entries sorted by `(n_selected, error_pct)`.
    pub fn sorted_entries(&self) -> Vec<ArchiveEntry> {
        let mut v = self.entries.clone();
        v.sort_by(|a, b| {
            a.objectives
                .n_selected
                .cmp(&b.objectives.n_selected)
                .then(a.objectives.error_pct.total_cmp(&b.objectives.error_pct))
                .then_with(|| a.subset.to_bitstring().cmp(&b.subset.to_bitstring()))
        });
        v
    }
}
