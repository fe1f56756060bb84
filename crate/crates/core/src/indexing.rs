use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::error::IndexingError;
use crate::gset::GSet;
use crate::limits::Limits;
use crate::subgroup::{SubgroupId, SubgroupLattice};

/// An indexing system: for every subgroup class `H`, the classes of
/// stabilizers `K` such that the orbit `H/K` is admissible as an `H`-set.
///
/// Storage is orbitwise (a general set is admissible exactly when all of
/// its orbits are) and keyed by conjugacy-class representatives, so
/// conjugation stability is built into the representation.
#[derive(Debug, Clone)]
pub struct IndexingSystem {
    group_name: String,
    /// full-group class rep of `H` → set of `H`-class reps of stabilizers.
    admissible: BTreeMap<SubgroupId, BTreeSet<SubgroupId>>,
    name: Option<String>,
}

impl PartialEq for IndexingSystem {
    fn eq(&self, other: &Self) -> bool {
        self.group_name == other.group_name && self.admissible == other.admissible
    }
}
impl Eq for IndexingSystem {}

impl PartialOrd for IndexingSystem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for IndexingSystem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.size(), &self.admissible).cmp(&(other.size(), &other.admissible))
    }
}

/// The seven closure axioms checked by `validate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureAxiom {
    TrivialSets,
    Truncation,
    CoproductClosure,
    RestrictionFunctoriality,
    Conjugation,
    SelfInduction,
    CartesianProduct,
}

impl ClosureAxiom {
    pub const ALL: [ClosureAxiom; 7] = [
        ClosureAxiom::TrivialSets,
        ClosureAxiom::Truncation,
        ClosureAxiom::CoproductClosure,
        ClosureAxiom::RestrictionFunctoriality,
        ClosureAxiom::Conjugation,
        ClosureAxiom::SelfInduction,
        ClosureAxiom::CartesianProduct,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ClosureAxiom::TrivialSets => "trivial-sets",
            ClosureAxiom::Truncation => "truncation",
            ClosureAxiom::CoproductClosure => "coproduct-closure",
            ClosureAxiom::RestrictionFunctoriality => "restriction-functoriality",
            ClosureAxiom::Conjugation => "conjugation",
            ClosureAxiom::SelfInduction => "self-induction",
            ClosureAxiom::CartesianProduct => "cartesian-product",
        }
    }
}

/// A concrete witness that an axiom fails: the level and set that escape
/// the admissible family.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub level: SubgroupId,
    pub gset: GSet,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct AxiomCheck {
    pub axiom: ClosureAxiom,
    pub pass: bool,
    pub counterexample: Option<Counterexample>,
}

/// Per-axiom results; one entry per axiom, in `ClosureAxiom::ALL` order.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failure(&self, axiom: ClosureAxiom) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom && !c.pass)
    }
}

impl IndexingSystem {
    /// The trivial system: only trivial sets are admissible.
    pub fn trivial(lattice: &SubgroupLattice) -> Self {
        let admissible = lattice
            .classes()
            .reps()
            .iter()
            .map(|&h| (h, BTreeSet::from([h])))
            .collect();
        IndexingSystem {
            group_name: lattice.group().name().to_string(),
            admissible,
            name: Some("trivial".into()),
        }
    }

    /// The complete system: every orbit is admissible.
    pub fn complete(lattice: &SubgroupLattice) -> Self {
        let admissible = lattice
            .classes()
            .reps()
            .iter()
            .map(|&h| (h, lattice.classes_at(h).reps().iter().copied().collect()))
            .collect();
        IndexingSystem {
            group_name: lattice.group().name().to_string(),
            admissible,
            name: Some("complete".into()),
        }
    }

    /// Builds from raw admissible pairs `(H, K)`, canonicalizing both
    /// coordinates. Trivial orbits are always included.
    pub fn from_pairs(
        lattice: &SubgroupLattice,
        pairs: impl IntoIterator<Item = (SubgroupId, SubgroupId)>,
    ) -> Result<Self, IndexingError> {
        let mut system = IndexingSystem::trivial(lattice);
        system.name = None;
        for (h, k) in pairs {
            if !lattice.leq(k, h) {
                return Err(IndexingError::NotContained(
                    lattice.subgroup(k).canonical_id(),
                    lattice.subgroup(h).canonical_id(),
                ));
            }
            system.insert_pair(lattice, h, k);
        }
        Ok(system)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn group_name(&self) -> &str {
        &self.group_name
    }

    /// Canonicalizes `(level, stab)` to (full-group class rep, level-class
    /// rep at that representative).
    fn canonical_pair(
        lattice: &SubgroupLattice,
        level: SubgroupId,
        stab: SubgroupId,
    ) -> (SubgroupId, SubgroupId) {
        let classes = lattice.classes();
        let rep = classes.rep_of(level);
        let w = classes.witness(level);
        let stab_conj = lattice.conjugate_subgroup(w, stab);
        (rep, lattice.classes_at(rep).rep_of(stab_conj))
    }

    fn insert_pair(&mut self, lattice: &SubgroupLattice, level: SubgroupId, stab: SubgroupId) {
        let (h, k) = Self::canonical_pair(lattice, level, stab);
        self.admissible.entry(h).or_default().insert(k);
    }

    /// Is the orbit `level/stab` admissible?
    pub fn is_orbit_admissible(
        &self,
        lattice: &SubgroupLattice,
        level: SubgroupId,
        stab: SubgroupId,
    ) -> bool {
        let (h, k) = Self::canonical_pair(lattice, level, stab);
        self.admissible.get(&h).is_some_and(|s| s.contains(&k))
    }

    /// Is a whole G-set admissible? (Exactly when all of its orbits are;
    /// the empty set is admissible.)
    pub fn is_admissible(&self, lattice: &SubgroupLattice, gset: &GSet) -> bool {
        gset.orbits()
            .iter()
            .all(|&(stab, _)| self.is_orbit_admissible(lattice, gset.level(), stab))
    }

    /// Admissible stabilizer classes at a full-group class representative.
    pub fn admissible_at(&self, rep: SubgroupId) -> &BTreeSet<SubgroupId> {
        &self.admissible[&rep]
    }

    /// All admissible pairs `(H rep, K rep)`, trivial pairs included.
    pub fn pairs(&self) -> impl Iterator<Item = (SubgroupId, SubgroupId)> + '_ {
        self.admissible
            .iter()
            .flat_map(|(&h, ks)| ks.iter().map(move |&k| (h, k)))
    }

    /// Nontrivial admissible pairs (`K` strictly below `H`).
    pub fn proper_pairs(&self) -> impl Iterator<Item = (SubgroupId, SubgroupId)> + '_ {
        self.pairs().filter(|&(h, k)| h != k)
    }

    /// Total number of admissible orbit classes.
    pub fn size(&self) -> usize {
        self.admissible.values().map(|s| s.len()).sum()
    }

    /// Checks all seven closure axioms, quantified over the lattice at
    /// desk scale, returning a concrete counterexample for each failure.
    pub fn validate(&self, lattice: &SubgroupLattice) -> ValidationReport {
        let mut checks = Vec::new();
        for axiom in ClosureAxiom::ALL {
            let counterexample = self.check_axiom(lattice, axiom);
            checks.push(AxiomCheck {
                axiom,
                pass: counterexample.is_none(),
                counterexample,
            });
        }
        ValidationReport { checks }
    }

    fn admissible_orbits_at(&self, lattice: &SubgroupLattice, h: SubgroupId) -> Vec<GSet> {
        lattice
            .classes_at(h)
            .reps()
            .iter()
            .filter(|&&k| self.is_orbit_admissible(lattice, h, k))
            .map(|&k| GSet::orbit(lattice, h, k))
            .collect()
    }

    fn first_inadmissible_orbit(
        &self,
        lattice: &SubgroupLattice,
        gset: &GSet,
    ) -> Option<SubgroupId> {
        gset.orbits()
            .iter()
            .map(|&(stab, _)| stab)
            .find(|&stab| !self.is_orbit_admissible(lattice, gset.level(), stab))
    }

    fn check_axiom(
        &self,
        lattice: &SubgroupLattice,
        axiom: ClosureAxiom,
    ) -> Option<Counterexample> {
        let class_reps = lattice.classes().reps().to_vec();
        match axiom {
            ClosureAxiom::TrivialSets => {
                for &h in &class_reps {
                    if !self.is_orbit_admissible(lattice, h, h) {
                        return Some(Counterexample {
                            level: h,
                            gset: GSet::point(h),
                            detail: format!(
                                "trivial orbit at {} is not admissible",
                                lattice.subgroup(h).canonical_id()
                            ),
                        });
                    }
                }
                None
            }
            ClosureAxiom::Truncation => {
                for &h in &class_reps {
                    let orbits = self.admissible_orbits_at(lattice, h);
                    for (s, t) in orbits.iter().cartesian_product(orbits.iter()) {
                        let whole = s.coproduct(t).expect("same level");
                        for sub in whole.sub_gsets() {
                            if let Some(bad) = self.first_inadmissible_orbit(lattice, &sub) {
                                return Some(Counterexample {
                                    level: h,
                                    gset: sub.clone(),
                                    detail: format!(
                                        "subobject with orbit stabilizer {} escapes the family",
                                        lattice.subgroup(bad).canonical_id()
                                    ),
                                });
                            }
                        }
                    }
                }
                None
            }
            ClosureAxiom::CoproductClosure => {
                for &h in &class_reps {
                    let orbits = self.admissible_orbits_at(lattice, h);
                    for (s, t) in orbits.iter().cartesian_product(orbits.iter()) {
                        let union = s.coproduct(t).expect("same level");
                        if let Some(bad) = self.first_inadmissible_orbit(lattice, &union) {
                            return Some(Counterexample {
                                level: h,
                                gset: union.clone(),
                                detail: format!(
                                    "disjoint union has inadmissible orbit stabilizer {}",
                                    lattice.subgroup(bad).canonical_id()
                                ),
                            });
                        }
                    }
                }
                None
            }
            ClosureAxiom::RestrictionFunctoriality => {
                for &h in &class_reps {
                    for orbit in self.admissible_orbits_at(lattice, h) {
                        for j in lattice.ids() {
                            if !lattice.leq(j, h) {
                                continue;
                            }
                            let restricted = orbit.restrict(lattice, j).expect("j ≤ h");
                            if self.first_inadmissible_orbit(lattice, &restricted).is_some() {
                                return Some(Counterexample {
                                    level: j,
                                    gset: restricted,
                                    detail: format!(
                                        "restriction of an admissible orbit at {} to {} is inadmissible",
                                        lattice.subgroup(h).canonical_id(),
                                        lattice.subgroup(j).canonical_id()
                                    ),
                                });
                            }
                        }
                    }
                }
                None
            }
            ClosureAxiom::Conjugation => {
                for level in lattice.ids() {
                    for &stab in lattice.classes_at(level).reps() {
                        if !self.is_orbit_admissible(lattice, level, stab) {
                            continue;
                        }
                        for g in 0..lattice.group().order() {
                            let orbit = GSet::orbit(lattice, level, stab);
                            let conj = orbit.conjugate(lattice, g);
                            if self.first_inadmissible_orbit(lattice, &conj).is_some() {
                                return Some(Counterexample {
                                    level: conj.level(),
                                    gset: conj,
                                    detail: format!(
                                        "conjugate by element {} of an admissible orbit is inadmissible",
                                        g
                                    ),
                                });
                            }
                        }
                    }
                }
                None
            }
            ClosureAxiom::SelfInduction => {
                for &h in &class_reps {
                    for &k in lattice.classes_at(h).reps() {
                        if k == h || !self.is_orbit_admissible(lattice, h, k) {
                            continue;
                        }
                        for inner in self.admissible_orbits_at(lattice, k) {
                            let induced = inner.induce(lattice, h).expect("k ≤ h");
                            if let Some(bad) = self.first_inadmissible_orbit(lattice, &induced) {
                                return Some(Counterexample {
                                    level: h,
                                    gset: induced.clone(),
                                    detail: format!(
                                        "self-induction along {}/{} leaves the family at stabilizer {}",
                                        lattice.subgroup(h).canonical_id(),
                                        lattice.subgroup(k).canonical_id(),
                                        lattice.subgroup(bad).canonical_id()
                                    ),
                                });
                            }
                        }
                    }
                }
                None
            }
            ClosureAxiom::CartesianProduct => {
                for &h in &class_reps {
                    let orbits = self.admissible_orbits_at(lattice, h);
                    for (s, t) in orbits.iter().cartesian_product(orbits.iter()) {
                        let product = s.product(lattice, t).expect("same level");
                        if let Some(bad) = self.first_inadmissible_orbit(lattice, &product) {
                            return Some(Counterexample {
                                level: h,
                                gset: product.clone(),
                                detail: format!(
                                    "product {:?} × {:?} has inadmissible orbit stabilizer {}",
                                    s.orbits(),
                                    t.orbits(),
                                    lattice.subgroup(bad).canonical_id()
                                ),
                            });
                        }
                    }
                }
                None
            }
        }
    }

    /// The least indexing system admitting each declared orbit `H/K`:
    /// inserts the declared pairs and iterates the closure axioms
    /// (restriction, self-induction, product) to a fixed point.
    /// Conjugation and truncation are automatic in the orbitwise
    /// class-representative storage.
    pub fn generate(
        lattice: &SubgroupLattice,
        declared: &[(SubgroupId, SubgroupId)],
    ) -> Result<Self, IndexingError> {
        let mut system = IndexingSystem::from_pairs(lattice, declared.iter().copied())?;
        loop {
            let before = system.size();
            system.close_once(lattice);
            if system.size() == before {
                break;
            }
        }
        debug_assert!(system.validate(lattice).passed());
        Ok(system)
    }

    fn close_once(&mut self, lattice: &SubgroupLattice) {
        let class_reps = lattice.classes().reps().to_vec();
        // restriction
        for &h in &class_reps {
            for orbit in self.admissible_orbits_at(lattice, h) {
                for j in lattice.ids() {
                    if !lattice.leq(j, h) {
                        continue;
                    }
                    let restricted = orbit.restrict(lattice, j).expect("j ≤ h");
                    for &(stab, _) in restricted.orbits() {
                        self.insert_pair(lattice, j, stab);
                    }
                }
            }
        }
        // self-induction
        for &h in &class_reps {
            for &k in lattice.classes_at(h).reps().to_vec().iter() {
                if k == h || !self.is_orbit_admissible(lattice, h, k) {
                    continue;
                }
                for inner in self.admissible_orbits_at(lattice, k) {
                    let induced = inner.induce(lattice, h).expect("k ≤ h");
                    for &(stab, _) in induced.orbits() {
                        self.insert_pair(lattice, h, stab);
                    }
                }
            }
        }
        // cartesian product
        for &h in &class_reps {
            let orbits = self.admissible_orbits_at(lattice, h);
            for (s, t) in orbits.iter().cartesian_product(orbits.iter()) {
                let product = s.product(lattice, t).expect("same level");
                for &(stab, _) in product.orbits() {
                    self.insert_pair(lattice, h, stab);
                }
            }
        }
    }

    /// Intersection of admissible families (always a valid system).
    pub fn meet(&self, other: &IndexingSystem) -> Result<IndexingSystem, IndexingError> {
        if self.group_name != other.group_name {
            return Err(IndexingError::GroupMismatch);
        }
        let admissible = self
            .admissible
            .iter()
            .map(|(&h, ks)| {
                let other_ks = &other.admissible[&h];
                (h, ks.intersection(other_ks).copied().collect())
            })
            .collect();
        Ok(IndexingSystem {
            group_name: self.group_name.clone(),
            admissible,
            name: None,
        })
    }

    /// Join: the closure of the union of the admissible families.
    pub fn join(
        &self,
        lattice: &SubgroupLattice,
        other: &IndexingSystem,
    ) -> Result<IndexingSystem, IndexingError> {
        if self.group_name != other.group_name {
            return Err(IndexingError::GroupMismatch);
        }
        let pairs: Vec<(SubgroupId, SubgroupId)> =
            self.pairs().chain(other.pairs()).collect();
        IndexingSystem::generate(lattice, &pairs)
    }

    /// Containment of admissible families.
    pub fn leq(&self, other: &IndexingSystem) -> Result<bool, IndexingError> {
        if self.group_name != other.group_name {
            return Err(IndexingError::GroupMismatch);
        }
        Ok(self
            .admissible
            .iter()
            .all(|(h, ks)| ks.is_subset(&other.admissible[h])))
    }
}

/// Enumerates every indexing system on the group, deterministically sorted
/// by size then admissible family.
///
/// The search walks the nontrivial candidate pairs in canonical order,
/// branching on include/exclude and pruning a branch as soon as the
/// monotone closure of the included pairs meets an excluded pair. Each
/// closed family is emitted exactly once.
pub fn enumerate_all(
    lattice: &SubgroupLattice,
    limits: &Limits,
) -> Result<Vec<IndexingSystem>, IndexingError> {
    let class_count = lattice.classes().reps().len();
    if class_count > limits.max_enumeration_classes {
        return Err(IndexingError::ClassCapExceeded {
            count: class_count,
            cap: limits.max_enumeration_classes,
        });
    }
    let candidates: Vec<(SubgroupId, SubgroupId)> = lattice
        .classes()
        .reps()
        .iter()
        .flat_map(|&h| {
            lattice
                .classes_at(h)
                .reps()
                .iter()
                .filter(move |&&k| k != h)
                .map(move |&k| (h, k))
        })
        .collect();

    let mut out = Vec::new();
    let base = IndexingSystem::trivial(lattice);
    let mut excluded: BTreeSet<(SubgroupId, SubgroupId)> = BTreeSet::new();
    search(lattice, &candidates, 0, &base, &mut excluded, &mut out);
    out.sort();
    Ok(out)
}

fn search(
    lattice: &SubgroupLattice,
    candidates: &[(SubgroupId, SubgroupId)],
    next: usize,
    current: &IndexingSystem,
    excluded: &mut BTreeSet<(SubgroupId, SubgroupId)>,
    out: &mut Vec<IndexingSystem>,
) {
    if next == candidates.len() {
        let mut system = current.clone();
        system.name = None;
        out.push(system);
        return;
    }
    let pair = candidates[next];
    if current.is_orbit_admissible(lattice, pair.0, pair.1) {
        search(lattice, candidates, next + 1, current, excluded, out);
        return;
    }
    // exclude branch
    excluded.insert(pair);
    search(lattice, candidates, next + 1, current, excluded, out);
    excluded.remove(&pair);
    // include branch: close and prune against exclusions
    let mut grown: Vec<(SubgroupId, SubgroupId)> = current.pairs().collect();
    grown.push(pair);
    let closed = IndexingSystem::generate(lattice, &grown).expect("pairs are well-formed");
    let clash = excluded
        .iter()
        .any(|&(h, k)| closed.is_orbit_admissible(lattice, h, k));
    if !clash {
        search(lattice, candidates, next + 1, &closed, excluded, out);
    }
}
