//! Leader topology over the regions of a diagram.
//!
//! For each region, the family of regions near it is collected. Those
//! families, together with the full and the empty family, are closed under
//! pairwise union and intersection. With finitely many regions the closure
//! is finite and reached by a worklist.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::proximity::are_proximal;
use crate::voronoi::VoronoiDiagram;

/// A set of region ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct RegionFamily(BTreeSet<usize>);

impl RegionFamily {
    pub fn new<I: IntoIterator<Item = usize>>(ids: I) -> Self {
        RegionFamily(ids.into_iter().collect())
    }

    pub fn empty() -> Self {
        RegionFamily(BTreeSet::new())
    }

    pub fn full(n: usize) -> Self {
        RegionFamily((0..n).collect())
    }

    pub fn contains(&self, id: usize) -> bool {
        self.0.contains(&id)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &RegionFamily) -> RegionFamily {
        RegionFamily(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &RegionFamily) -> RegionFamily {
        RegionFamily(self.0.intersection(&other.0).copied().collect())
    }
}

/// Regions proximal to region `p_id`, including itself.
pub fn neighbor_family(d: &VoronoiDiagram, p_id: usize, tol: f64) -> Result<RegionFamily> {
    let cp = d.cell(p_id)?;
    Ok(RegionFamily::new(
        d.cells()
            .iter()
            .filter(|c| c.site_id == p_id || are_proximal(c, cp, tol))
            .map(|c| c.site_id),
    ))
}

/// A finite collection of region families over `n` regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeaderTopology {
    region_count: usize,
    families: BTreeSet<RegionFamily>,
}

impl LeaderTopology {
    /// Wraps an arbitrary collection without closing it.
    pub fn from_families<I>(region_count: usize, families: I) -> Result<Self>
    where
        I: IntoIterator<Item = RegionFamily>,
    {
        let families: BTreeSet<RegionFamily> = families.into_iter().collect();
        for f in &families {
            if let Some(id) = f.ids().find(|&id| id >= region_count) {
                return Err(Error::SiteOutOfRange {
                    id,
                    len: region_count,
                });
            }
        }
        Ok(LeaderTopology {
            region_count,
            families,
        })
    }

    pub fn region_count(&self) -> usize {
        self.region_count
    }

    /// Families in set order (lexicographic on sorted ids).
    pub fn families(&self) -> impl Iterator<Item = &RegionFamily> {
        self.families.iter()
    }

    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    pub fn contains(&self, f: &RegionFamily) -> bool {
        self.families.contains(f)
    }

    /// Families sorted by size, then by ids.
    pub fn sorted_families(&self) -> Vec<&RegionFamily> {
        let mut v: Vec<&RegionFamily> = self.families.iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v
    }

    /// One pass of pairwise unions and intersections added to the collection.
    pub fn closure_step(&self) -> LeaderTopology {
        let mut next = self.families.clone();
        for a in &self.families {
            for b in &self.families {
                next.insert(a.union(b));
                next.insert(a.intersection(b));
            }
        }
        LeaderTopology {
            region_count: self.region_count,
            families: next,
        }
    }
}

/// Closes the neighbour families under union and intersection, unbounded.
pub fn build_leader_topology(d: &VoronoiDiagram, tol: f64) -> LeaderTopology {
    build_leader_topology_bounded(d, tol, usize::MAX)
        .expect("unbounded closure cannot exceed its limit")
}

/// As [`build_leader_topology`], giving up once more than `limit` families
/// have been generated.
pub fn build_leader_topology_bounded(
    d: &VoronoiDiagram,
    tol: f64,
    limit: usize,
) -> Result<LeaderTopology> {
    let n = d.len();
    let mut seeds = vec![RegionFamily::empty(), RegionFamily::full(n)];
    for p in 0..n {
        seeds.push(neighbor_family(d, p, tol)?);
    }
    let families = close_families(seeds, limit)?;
    Ok(LeaderTopology {
        region_count: n,
        families,
    })
}

fn close_families(seeds: Vec<RegionFamily>, limit: usize) -> Result<BTreeSet<RegionFamily>> {
    let mut members: Vec<RegionFamily> = Vec::new();
    let mut seen: BTreeSet<RegionFamily> = BTreeSet::new();
    let mut queue: VecDeque<RegionFamily> = VecDeque::new();
    for s in seeds {
        if seen.insert(s.clone()) {
            queue.push_back(s);
        }
    }
    while let Some(f) = queue.pop_front() {
        // Combine the new family with everything already processed and with
        // itself; pairs among processed members were handled earlier.
        members.push(f.clone());
        for g in &members {
            for h in [f.union(g), f.intersection(g)] {
                if seen.insert(h.clone()) {
                    if seen.len() > limit {
                        return Err(Error::TopologyTooLarge(limit));
                    }
                    queue.push_back(h);
                }
            }
        }
    }
    Ok(seen)
}

/// Outcome of checking closure under ∪ and ∩ plus the presence of the
/// full and empty families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub has_full: bool,
    pub has_empty: bool,
    pub pairs_checked: usize,
    /// Index pairs (into [`LeaderTopology::families`] order) whose union is missing.
    pub missing_unions: Vec<(usize, usize)>,
    pub missing_intersections: Vec<(usize, usize)>,
    pub holds: bool,
}

pub fn verify_topology_axioms(t: &LeaderTopology) -> AxiomReport {
    let fams: Vec<&RegionFamily> = t.families.iter().collect();
    let has_full = t.contains(&RegionFamily::full(t.region_count));
    let has_empty = t.contains(&RegionFamily::empty());
    let mut missing_unions = Vec::new();
    let mut missing_intersections = Vec::new();
    let mut pairs_checked = 0;
    for i in 0..fams.len() {
        for j in i..fams.len() {
            pairs_checked += 1;
            if !t.contains(&fams[i].union(fams[j])) {
                missing_unions.push((i, j));
            }
            if !t.contains(&fams[i].intersection(fams[j])) {
                missing_intersections.push((i, j));
            }
        }
    }
    let holds =
        has_full && has_empty && missing_unions.is_empty() && missing_intersections.is_empty();
    AxiomReport {
        has_full,
        has_empty,
        pairs_checked,
        missing_unions,
        missing_intersections,
        holds,
    }
}
