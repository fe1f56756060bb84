use std::collections::BTreeMap;

use itertools::Itertools;

use crate::error::GSetError;
use crate::limits::Limits;
use crate::subgroup::{SubgroupId, SubgroupLattice};

/// A finite G-set at a level subgroup `H`, stored as a multiset of orbits
/// `H/K`. Stabilizers are kept as level-conjugacy-class representatives and
/// the orbit list is sorted, so equal values are isomorphic G-sets and
/// vice versa.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GSet {
    level: SubgroupId,
    orbits: Vec<(SubgroupId, usize)>,
}

/// Fixed-point counts of a G-set, indexed by the conjugacy classes of
/// subgroups of its level. A complete isomorphism invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkVector {
    pub level: SubgroupId,
    /// `(class representative, |T^J|)`, in canonical class order.
    pub entries: Vec<(SubgroupId, u64)>,
}

/// An element-level realization of a G-set: points with an explicit action
/// of the level's members (rows indexed by member position, columns by
/// point).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub level: SubgroupId,
    pub gset: GSet,
    pub labels: Vec<String>,
    act: Vec<Vec<usize>>,
}

impl Realization {
    /// Wraps an explicit action table (rows per level member, columns per
    /// point), computing the canonical orbit decomposition.
    pub fn from_action(
        lattice: &SubgroupLattice,
        level: SubgroupId,
        labels: Vec<String>,
        act: Vec<Vec<usize>>,
    ) -> Realization {
        debug_assert_eq!(act.len(), lattice.subgroup(level).order());
        debug_assert!(act.iter().all(|row| row.len() == labels.len()));
        let gset = decompose_action(lattice, level, labels.len(), &act);
        Realization {
            level,
            gset,
            labels,
            act,
        }
    }

    pub fn points(&self) -> usize {
        self.labels.len()
    }

    /// Action of the member at `member_pos` (position within the level's
    /// member list) on `point`.
    pub fn apply(&self, member_pos: usize, point: usize) -> usize {
        self.act[member_pos][point]
    }

    /// Exact stabilizer of a point, as a sorted member list.
    pub fn stabilizer_members(&self, lattice: &SubgroupLattice, point: usize) -> Vec<usize> {
        let members = lattice.subgroup(self.level).members();
        members
            .iter()
            .enumerate()
            .filter(|(pos, _)| self.act[*pos][point] == point)
            .map(|(_, &m)| m)
            .collect()
    }

    /// Sweeps the action into orbits. Returns, per point, its orbit index,
    /// and per orbit, its least point.
    pub fn orbit_sweep(&self) -> (Vec<usize>, Vec<usize>) {
        orbit_sweep(self.points(), &self.act)
    }
}

pub(crate) fn orbit_sweep(points: usize, act: &[Vec<usize>]) -> (Vec<usize>, Vec<usize>) {
    let mut orbit_of = vec![usize::MAX; points];
    let mut reps = Vec::new();
    for start in 0..points {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let orbit = reps.len();
        reps.push(start);
        let mut stack = vec![start];
        orbit_of[start] = orbit;
        while let Some(p) = stack.pop() {
            for row in act {
                let q = row[p];
                if orbit_of[q] == usize::MAX {
                    orbit_of[q] = orbit;
                    stack.push(q);
                }
            }
        }
    }
    (orbit_of, reps)
}

/// Decomposes an explicit action into a canonical `GSet`.
pub(crate) fn decompose_action(
    lattice: &SubgroupLattice,
    level: SubgroupId,
    points: usize,
    act: &[Vec<usize>],
) -> GSet {
    let members = lattice.subgroup(level).members();
    let (_, reps) = orbit_sweep(points, act);
    let mut orbits: Vec<(SubgroupId, usize)> = Vec::new();
    for &rep in &reps {
        let stab: Vec<usize> = members
            .iter()
            .enumerate()
            .filter(|(pos, _)| act[*pos][rep] == rep)
            .map(|(_, &m)| m)
            .collect();
        let stab_id = lattice
            .by_members(&stab)
            .expect("stabilizer must be a lattice subgroup");
        orbits.push((lattice.classes_at(level).rep_of(stab_id), 1));
    }
    GSet::from_orbits(level, orbits)
}

impl GSet {
    pub fn empty(level: SubgroupId) -> Self {
        GSet {
            level,
            orbits: Vec::new(),
        }
    }

    /// The orbit `level/stab`; the stabilizer is canonicalized to its
    /// level-class representative.
    pub fn orbit(lattice: &SubgroupLattice, level: SubgroupId, stab: SubgroupId) -> Self {
        assert!(lattice.leq(stab, level), "stabilizer must lie in the level");
        let rep = lattice.classes_at(level).rep_of(stab);
        GSet {
            level,
            orbits: vec![(rep, 1)],
        }
    }

    /// The one-point G-set at `level`.
    pub fn point(level: SubgroupId) -> Self {
        GSet {
            level,
            orbits: vec![(level, 1)],
        }
    }

    /// Builds from raw `(stabilizer, multiplicity)` pairs, merging and
    /// sorting into canonical order. Stabilizers must already be
    /// level-class representatives.
    pub fn from_orbits(level: SubgroupId, orbits: Vec<(SubgroupId, usize)>) -> Self {
        let mut merged: BTreeMap<SubgroupId, usize> = BTreeMap::new();
        for (stab, mult) in orbits {
            if mult > 0 {
                *merged.entry(stab).or_insert(0) += mult;
            }
        }
        GSet {
            level,
            orbits: merged.into_iter().collect(),
        }
    }

    pub fn level(&self) -> SubgroupId {
        self.level
    }

    /// `(stabilizer class representative, multiplicity)` pairs in canonical
    /// order.
    pub fn orbits(&self) -> &[(SubgroupId, usize)] {
        &self.orbits
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn orbit_count(&self) -> usize {
        self.orbits.iter().map(|(_, m)| m).sum()
    }

    pub fn cardinality(&self, lattice: &SubgroupLattice) -> usize {
        self.orbits
            .iter()
            .map(|(stab, mult)| lattice.index_in(*stab, self.level) * mult)
            .sum()
    }

    /// Is this a trivial G-set (every point fixed)?
    pub fn is_trivial_action(&self) -> bool {
        self.orbits.iter().all(|(stab, _)| *stab == self.level)
    }

    /// Disjoint union at a shared level.
    pub fn coproduct(&self, other: &GSet) -> Result<GSet, GSetError> {
        if self.level != other.level {
            return Err(GSetError::LevelMismatch(
                format!("{:?}", self.level),
                format!("{:?}", other.level),
            ));
        }
        let mut orbits = self.orbits.clone();
        orbits.extend(other.orbits.iter().copied());
        Ok(GSet::from_orbits(self.level, orbits))
    }

    /// Restriction along `K ≤ level`, computed double-coset-wise:
    /// each orbit `H/J` contributes one `K/(K ∩ gJg⁻¹)` per double coset
    /// `KgJ` in `H`.
    pub fn restrict(&self, lattice: &SubgroupLattice, k: SubgroupId) -> Result<GSet, GSetError> {
        if !lattice.leq(k, self.level) {
            return Err(GSetError::LevelMismatch(
                format!("{:?}", k),
                format!("{:?}", self.level),
            ));
        }
        let mut orbits = Vec::new();
        for &(stab, mult) in &self.orbits {
            let dc = lattice
                .double_cosets(self.level, k, stab)
                .expect("orbit data lies in the level");
            for &g in &dc.representatives {
                let conj = lattice.conjugate_subgroup(g, stab);
                let meet = lattice.intersect(k, conj);
                orbits.push((lattice.classes_at(k).rep_of(meet), mult));
            }
        }
        Ok(GSet::from_orbits(k, orbits))
    }

    /// Induction `H ×_K T` along `level ≤ h`: each orbit `K/J` becomes
    /// `H/J`.
    pub fn induce(&self, lattice: &SubgroupLattice, h: SubgroupId) -> Result<GSet, GSetError> {
        if !lattice.leq(self.level, h) {
            return Err(GSetError::LevelMismatch(
                format!("{:?}", self.level),
                format!("{:?}", h),
            ));
        }
        let orbits = self
            .orbits
            .iter()
            .map(|&(stab, mult)| (lattice.classes_at(h).rep_of(stab), mult))
            .collect();
        Ok(GSet::from_orbits(h, orbits))
    }

    /// Cartesian product with the diagonal action, decomposed into orbits
    /// at the shared level.
    pub fn product(&self, lattice: &SubgroupLattice, other: &GSet) -> Result<GSet, GSetError> {
        if self.level != other.level {
            return Err(GSetError::LevelMismatch(
                format!("{:?}", self.level),
                format!("{:?}", other.level),
            ));
        }
        let left = self.realize(lattice);
        let right = other.realize(lattice);
        let points = left.points() * right.points();
        let member_count = lattice.subgroup(self.level).order();
        let mut act = vec![vec![0usize; points]; member_count];
        for pos in 0..member_count {
            for (i, j) in (0..left.points()).cartesian_product(0..right.points()) {
                act[pos][i * right.points() + j] =
                    left.apply(pos, i) * right.points() + right.apply(pos, j);
            }
        }
        Ok(decompose_action(lattice, self.level, points, &act))
    }

    /// The conjugate G-set at level `g·H·g⁻¹`.
    pub fn conjugate(&self, lattice: &SubgroupLattice, g: usize) -> GSet {
        let new_level = lattice.conjugate_subgroup(g, self.level);
        let orbits = self
            .orbits
            .iter()
            .map(|&(stab, mult)| {
                let conj = lattice.conjugate_subgroup(g, stab);
                (lattice.classes_at(new_level).rep_of(conj), mult)
            })
            .collect();
        GSet::from_orbits(new_level, orbits)
    }

    /// Element-level realization: points are tagged cosets `gK`, acted on
    /// by left translation, in deterministic order (orbits in canonical
    /// order, cosets by least element).
    pub fn realize(&self, lattice: &SubgroupLattice) -> Realization {
        let group = lattice.group();
        let level_members = lattice.subgroup(self.level).members().to_vec();
        let mut labels = Vec::new();

        struct Block {
            start: usize,
            reps: Vec<usize>,
            coset_of: BTreeMap<usize, usize>,
        }
        let mut blocks: Vec<Block> = Vec::new();

        for (orbit_idx, &(stab, mult)) in self.orbits.iter().enumerate() {
            let stab_members = lattice.subgroup(stab).members();
            // Cosets of `stab` in the level, ordered by least element.
            let mut reps: Vec<usize> = Vec::new();
            let mut coset_of: BTreeMap<usize, usize> = BTreeMap::new();
            for &h in &level_members {
                if coset_of.contains_key(&h) {
                    continue;
                }
                let idx = reps.len();
                reps.push(h);
                for &k in stab_members {
                    coset_of.insert(group.mul(h, k), idx);
                }
            }
            for copy in 0..mult {
                let start = labels.len();
                for &r in reps.iter() {
                    labels.push(format!("o{}~{}:g{}", orbit_idx, copy, r));
                }
                blocks.push(Block {
                    start,
                    reps: reps.clone(),
                    coset_of: coset_of.clone(),
                });
            }
        }

        let points = labels.len();
        let mut act = vec![vec![0usize; points]; level_members.len()];
        for block in &blocks {
            for (pos, &m) in level_members.iter().enumerate() {
                for (c, &r) in block.reps.iter().enumerate() {
                    let target = block.coset_of[&group.mul(m, r)];
                    act[pos][block.start + c] = block.start + target;
                }
            }
        }

        Realization {
            level: self.level,
            gset: self.clone(),
            labels,
            act,
        }
    }

    /// Realization guarded by the point cap.
    pub fn realize_capped(
        &self,
        lattice: &SubgroupLattice,
        limits: &Limits,
    ) -> Result<Realization, GSetError> {
        let points = self.cardinality(lattice);
        if points > limits.max_points {
            return Err(GSetError::PointCapExceeded {
                points,
                cap: limits.max_points,
            });
        }
        Ok(self.realize(lattice))
    }

    /// The table-of-marks vector: fixed-point counts under every subgroup
    /// class of the level.
    pub fn marks(&self, lattice: &SubgroupLattice) -> MarkVector {
        let real = self.realize(lattice);
        let level_members = lattice.subgroup(self.level).members();
        let entries = lattice
            .classes_at(self.level)
            .reps()
            .iter()
            .map(|&class| {
                let gen_positions: Vec<usize> = lattice
                    .subgroup(class)
                    .generators()
                    .iter()
                    .map(|g| level_members.binary_search(g).expect("class rep in level"))
                    .collect();
                let fixed = (0..real.points())
                    .filter(|&p| gen_positions.iter().all(|&pos| real.apply(pos, p) == p))
                    .count();
                (class, fixed as u64)
            })
            .collect();
        MarkVector {
            level: self.level,
            entries,
        }
    }

    /// Isomorphism test via mark vectors (the classical complete
    /// invariant). Agrees with canonical-representation equality.
    pub fn is_isomorphic(&self, lattice: &SubgroupLattice, other: &GSet) -> bool {
        if self.level != other.level {
            return false;
        }
        let same_marks = self.marks(lattice) == other.marks(lattice);
        debug_assert_eq!(same_marks, self == other);
        same_marks
    }

    /// All subobjects up to isomorphism: the sub-multisets of the orbit
    /// multiset, including the empty set and the whole set.
    pub fn sub_gsets(&self) -> Vec<GSet> {
        let mut out = Vec::new();
        let ranges: Vec<usize> = self.orbits.iter().map(|&(_, m)| m + 1).collect();
        let mut choice = vec![0usize; self.orbits.len()];
        loop {
            let orbits: Vec<(SubgroupId, usize)> = self
                .orbits
                .iter()
                .zip(&choice)
                .filter(|(_, &c)| c > 0)
                .map(|(&(stab, _), &c)| (stab, c))
                .collect();
            out.push(GSet::from_orbits(self.level, orbits));
            let mut i = 0;
            loop {
                if i == choice.len() {
                    out.sort();
                    return out;
                }
                choice[i] += 1;
                if choice[i] < ranges[i] {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
}

impl MarkVector {
    /// Pointwise sum (marks of a disjoint union).
    pub fn plus(&self, other: &MarkVector) -> MarkVector {
        assert_eq!(self.level, other.level);
        MarkVector {
            level: self.level,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&(c, a), &(_, b))| (c, a + b))
                .collect(),
        }
    }

    /// Pointwise product (marks of a Cartesian product).
    pub fn times(&self, other: &MarkVector) -> MarkVector {
        assert_eq!(self.level, other.level);
        MarkVector {
            level: self.level,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&(c, a), &(_, b))| (c, a * b))
                .collect(),
        }
    }

    pub fn total(&self) -> u64 {
        self.entries.first().map(|&(_, n)| n).unwrap_or(0)
    }
}
