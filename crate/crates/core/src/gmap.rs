use itertools::Itertools;

use crate::error::GSetError;
use crate::gset::Realization;
use crate::subgroup::SubgroupLattice;

/// An equivariant map between two realized G-sets at the same level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GMap {
    pub source: Realization,
    pub target: Realization,
    /// `assignment[p]` is the image of source point `p`.
    pub assignment: Vec<usize>,
}

impl GMap {
    /// Wraps an assignment after checking equivariance point by point.
    pub fn new(
        lattice: &SubgroupLattice,
        source: Realization,
        target: Realization,
        assignment: Vec<usize>,
    ) -> Result<Self, GSetError> {
        if source.level != target.level {
            return Err(GSetError::LevelMismatch(
                format!("{:?}", source.level),
                format!("{:?}", target.level),
            ));
        }
        if assignment.len() != source.points() {
            return Err(GSetError::BadAssignment {
                expected: source.points(),
                found: assignment.len(),
            });
        }
        let members = lattice.subgroup(source.level).members();
        for p in 0..source.points() {
            for (pos, &m) in members.iter().enumerate() {
                if assignment[source.apply(pos, p)] != target.apply(pos, assignment[p]) {
                    return Err(GSetError::NotEquivariant {
                        point: p,
                        element: m,
                    });
                }
            }
        }
        Ok(GMap {
            source,
            target,
            assignment,
        })
    }

    pub fn identity(real: &Realization) -> Self {
        GMap {
            source: real.clone(),
            target: real.clone(),
            assignment: (0..real.points()).collect(),
        }
    }

    pub fn is_mono(&self) -> bool {
        let mut seen = vec![false; self.target.points()];
        self.assignment.iter().all(|&t| {
            if seen[t] {
                false
            } else {
                seen[t] = true;
                true
            }
        })
    }

    pub fn is_epi(&self) -> bool {
        let mut seen = vec![false; self.target.points()];
        for &t in &self.assignment {
            seen[t] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_iso(&self) -> bool {
        self.source.points() == self.target.points() && self.is_mono()
    }

    /// Composition `other ∘ self` (apply `self` first).
    pub fn then(&self, other: &GMap) -> Result<GMap, GSetError> {
        if self.target.points() != other.source.points() || self.target != other.source {
            return Err(GSetError::BadAssignment {
                expected: self.target.points(),
                found: other.source.points(),
            });
        }
        Ok(GMap {
            source: self.source.clone(),
            target: other.target.clone(),
            assignment: self
                .assignment
                .iter()
                .map(|&p| other.assignment[p])
                .collect(),
        })
    }
}

/// Enumerates all equivariant maps from `source` to `target`.
///
/// Each source orbit is determined by where its least point goes; the
/// candidates are the target points whose stabilizer contains the source
/// point's stabilizer. Output order is deterministic.
pub fn gmaps(
    lattice: &SubgroupLattice,
    source: &Realization,
    target: &Realization,
) -> Result<Vec<GMap>, GSetError> {
    if source.level != target.level {
        return Err(GSetError::LevelMismatch(
            format!("{:?}", source.level),
            format!("{:?}", target.level),
        ));
    }
    let level = source.level;
    let members = lattice.subgroup(level).members();
    let (orbit_of, reps) = source.orbit_sweep();

    // For every source point, a member of the level carrying its orbit
    // rep to it. The action table has a row per member, so one lookup
    // suffices by transitivity.
    let mut carrier = vec![0usize; source.points()];
    for p in 0..source.points() {
        let rep = reps[orbit_of[p]];
        if p == rep {
            continue;
        }
        carrier[p] = members
            .iter()
            .enumerate()
            .find(|(pos, _)| source.apply(*pos, rep) == p)
            .map(|(_, &m)| m)
            .expect("orbit point reachable from its rep");
    }

    let mut candidate_sets: Vec<Vec<usize>> = Vec::new();
    for &rep in &reps {
        let stab = source.stabilizer_members(lattice, rep);
        let candidates: Vec<usize> = (0..target.points())
            .filter(|&t| {
                let tstab = target.stabilizer_members(lattice, t);
                stab.iter().all(|m| tstab.binary_search(m).is_ok())
            })
            .collect();
        candidate_sets.push(candidates);
    }

    let mut out = Vec::new();
    if candidate_sets.is_empty() {
        // empty source: exactly one (empty) map
        return Ok(vec![GMap {
            source: source.clone(),
            target: target.clone(),
            assignment: Vec::new(),
        }]);
    }
    for choice in candidate_sets
        .iter()
        .map(|c| c.iter().copied())
        .multi_cartesian_product()
    {
        let mut assignment = vec![0usize; source.points()];
        for p in 0..source.points() {
            let orbit = orbit_of[p];
            let u = carrier[p];
            let pos = members.binary_search(&u).expect("carrier is a member");
            assignment[p] = target.apply(pos, choice[orbit]);
        }
        let map = GMap {
            source: source.clone(),
            target: target.clone(),
            assignment,
        };
        debug_assert!(GMap::new(
            lattice,
            map.source.clone(),
            map.target.clone(),
            map.assignment.clone()
        )
        .is_ok());
        out.push(map);
    }
    Ok(out)
}
