use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::RepError;
use crate::gset::GSet;
use crate::indexing::IndexingSystem;
use crate::qmat::{Q, QMat, SpanBuilder};
use crate::subgroup::{SubgroupId, SubgroupLattice};

/// A finite-dimensional representation of a level subgroup over the exact
/// rationals.
///
/// Permutation representations keep their point action, which both feeds
/// the fast equivariant-map basis below and round-trips restriction and
/// tensor products without touching matrices. General representations
/// store one matrix per generator together with the full element table
/// (validated to be a homomorphism on construction).
#[derive(Debug, Clone)]
pub struct Rep {
    level: SubgroupId,
    dim: usize,
    kind: RepKind,
}

#[derive(Debug, Clone)]
enum RepKind {
    /// member element id → images of the basis points
    Perm { act: BTreeMap<usize, Vec<usize>> },
    Matrix {
        generators: Vec<usize>,
        generator_matrices: Vec<QMat>,
        elements: BTreeMap<usize, QMat>,
    },
}

impl Rep {
    /// The one-dimensional trivial representation.
    pub fn trivial(lattice: &SubgroupLattice, level: SubgroupId) -> Rep {
        let act = lattice
            .subgroup(level)
            .members()
            .iter()
            .map(|&m| (m, vec![0usize]))
            .collect();
        Rep {
            level,
            dim: 1,
            kind: RepKind::Perm { act },
        }
    }

    /// The permutation representation on a G-set.
    pub fn permutation(lattice: &SubgroupLattice, gset: &GSet) -> Rep {
        let real = gset.realize(lattice);
        let members = lattice.subgroup(gset.level()).members();
        let act = members
            .iter()
            .enumerate()
            .map(|(pos, &m)| (m, (0..real.points()).map(|p| real.apply(pos, p)).collect()))
            .collect();
        Rep {
            level: gset.level(),
            dim: real.points(),
            kind: RepKind::Perm { act },
        }
    }

    /// Builds a matrix representation from one invertible matrix per
    /// generator, validating that the assignment extends to a group
    /// homomorphism on the whole level.
    pub fn from_generator_matrices(
        lattice: &SubgroupLattice,
        level: SubgroupId,
        generators: Vec<usize>,
        generator_matrices: Vec<QMat>,
    ) -> Result<Rep, RepError> {
        if generators.len() != generator_matrices.len() {
            return Err(RepError::GeneratorCountMismatch {
                expected: generators.len(),
                found: generator_matrices.len(),
            });
        }
        let dim = generator_matrices.first().map(|m| m.rows()).unwrap_or(1);
        for (index, mat) in generator_matrices.iter().enumerate() {
            if mat.rows() != dim || mat.cols() != dim {
                return Err(RepError::BadShape { index, dim });
            }
            if !mat.is_invertible() {
                return Err(RepError::Singular { index });
            }
        }
        let elements = element_table(lattice, level, &generators, &generator_matrices, dim)?;
        Ok(Rep {
            level,
            dim,
            kind: RepKind::Matrix {
                generators,
                generator_matrices,
                elements,
            },
        })
    }

    fn from_elements(level: SubgroupId, dim: usize, elements: BTreeMap<usize, QMat>) -> Rep {
        // generators are recovered lazily; store the full table
        Rep {
            level,
            dim,
            kind: RepKind::Matrix {
                generators: Vec::new(),
                generator_matrices: Vec::new(),
                elements,
            },
        }
    }

    pub fn level(&self) -> SubgroupId {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_permutation(&self) -> bool {
        matches!(self.kind, RepKind::Perm { .. })
    }

    fn perm_act(&self) -> Option<&BTreeMap<usize, Vec<usize>>> {
        match &self.kind {
            RepKind::Perm { act } => Some(act),
            RepKind::Matrix { .. } => None,
        }
    }

    /// The matrix of a single member element.
    pub fn element_matrix(&self, element: usize) -> QMat {
        match &self.kind {
            RepKind::Perm { act } => QMat::permutation(&act[&element]),
            RepKind::Matrix { elements, .. } => elements[&element].clone(),
        }
    }

    /// One matrix per generator of the level (the deterministic greedy
    /// generating set, unless explicit generators were supplied).
    pub fn generator_matrices(&self, lattice: &SubgroupLattice) -> Vec<(usize, QMat)> {
        match &self.kind {
            RepKind::Matrix {
                generators,
                generator_matrices,
                ..
            } if !generators.is_empty() => generators
                .iter()
                .copied()
                .zip(generator_matrices.iter().cloned())
                .collect(),
            _ => lattice
                .subgroup(self.level)
                .generators()
                .iter()
                .map(|&g| (g, self.element_matrix(g)))
                .collect(),
        }
    }

    /// Character value (trace) per member element.
    pub fn character(&self, lattice: &SubgroupLattice) -> BTreeMap<usize, Q> {
        lattice
            .subgroup(self.level)
            .members()
            .iter()
            .map(|&m| {
                let value = match &self.kind {
                    RepKind::Perm { act } => {
                        let fixed = act[&m].iter().enumerate().filter(|(i, &p)| *i == p).count();
                        Q::from_integer((fixed as i64).into())
                    }
                    RepKind::Matrix { elements, .. } => elements[&m].trace(),
                };
                (m, value)
            })
            .collect()
    }

    /// Tensor product at a shared level.
    pub fn tensor(&self, lattice: &SubgroupLattice, other: &Rep) -> Result<Rep, RepError> {
        if self.level != other.level {
            return Err(RepError::GroupMismatch);
        }
        if let (Some(a), Some(b)) = (self.perm_act(), other.perm_act()) {
            let bn = other.dim;
            let act = a
                .iter()
                .map(|(&m, arow)| {
                    let brow = &b[&m];
                    let row = (0..self.dim * bn)
                        .map(|idx| arow[idx / bn] * bn + brow[idx % bn])
                        .collect();
                    (m, row)
                })
                .collect();
            return Ok(Rep {
                level: self.level,
                dim: self.dim * other.dim,
                kind: RepKind::Perm { act },
            });
        }
        let elements = lattice
            .subgroup(self.level)
            .members()
            .iter()
            .map(|&m| {
                (
                    m,
                    self.element_matrix(m).kronecker(&other.element_matrix(m)),
                )
            })
            .collect();
        Ok(Rep::from_elements(self.level, self.dim * other.dim, elements))
    }

    /// Direct sum at a shared level.
    pub fn direct_sum(&self, lattice: &SubgroupLattice, other: &Rep) -> Result<Rep, RepError> {
        if self.level != other.level {
            return Err(RepError::GroupMismatch);
        }
        if let (Some(a), Some(b)) = (self.perm_act(), other.perm_act()) {
            let act = a
                .iter()
                .map(|(&m, arow)| {
                    let mut row = arow.clone();
                    row.extend(b[&m].iter().map(|&p| p + self.dim));
                    (m, row)
                })
                .collect();
            return Ok(Rep {
                level: self.level,
                dim: self.dim + other.dim,
                kind: RepKind::Perm { act },
            });
        }
        let elements = lattice
            .subgroup(self.level)
            .members()
            .iter()
            .map(|&m| {
                (
                    m,
                    self.element_matrix(m).block_diag(&other.element_matrix(m)),
                )
            })
            .collect();
        Ok(Rep::from_elements(self.level, self.dim + other.dim, elements))
    }

    /// Restriction to a subgroup of the level.
    pub fn restrict(&self, lattice: &SubgroupLattice, k: SubgroupId) -> Result<Rep, RepError> {
        if !lattice.leq(k, self.level) {
            return Err(RepError::GroupMismatch);
        }
        let members = lattice.subgroup(k).members();
        match &self.kind {
            RepKind::Perm { act } => {
                let act = members.iter().map(|&m| (m, act[&m].clone())).collect();
                Ok(Rep {
                    level: k,
                    dim: self.dim,
                    kind: RepKind::Perm { act },
                })
            }
            RepKind::Matrix { elements, .. } => {
                let restricted: BTreeMap<usize, QMat> = members
                    .iter()
                    .map(|&m| (m, elements[&m].clone()))
                    .collect();
                Ok(Rep::from_elements(k, self.dim, restricted))
            }
        }
    }
}

/// Extends generator matrices to the whole subgroup by breadth-first
/// closure, checking consistency (the homomorphism property) along the
/// way.
fn element_table(
    lattice: &SubgroupLattice,
    level: SubgroupId,
    generators: &[usize],
    matrices: &[QMat],
    dim: usize,
) -> Result<BTreeMap<usize, QMat>, RepError> {
    let group = lattice.group();
    let mut table: BTreeMap<usize, QMat> = BTreeMap::new();
    table.insert(0, QMat::identity(dim));
    let mut frontier = vec![0usize];
    while let Some(elem) = frontier.pop() {
        let mat = table[&elem].clone();
        for (&g, gm) in generators.iter().zip(matrices) {
            let next = group.mul(elem, g);
            let next_mat = mat.mul(gm);
            match table.get(&next) {
                Some(existing) => {
                    if existing != &next_mat {
                        return Err(RepError::NotAHomomorphism);
                    }
                }
                None => {
                    table.insert(next, next_mat);
                    frontier.push(next);
                }
            }
        }
    }
    let members = lattice.subgroup(level).members();
    if table.len() != members.len() || !members.iter().all(|m| table.contains_key(m)) {
        return Err(RepError::NotAHomomorphism);
    }
    // full consistency: multiplicative on every pair of members
    for &a in members {
        for &b in members {
            if table[&a].mul(&table[&b]) != table[&group.mul(a, b)] {
                return Err(RepError::NotAHomomorphism);
            }
        }
    }
    Ok(table)
}

/// Dimension of the space of equivariant linear maps `a → b`, computed as
/// the solution-space dimension of `{M·ρ_a(g) = ρ_b(g)·M}` over the exact
/// rationals, one equation block per generator.
pub fn hom_dim(lattice: &SubgroupLattice, a: &Rep, b: &Rep) -> Result<usize, RepError> {
    Ok(hom_solver_basis(lattice, a, b)?.len())
}

fn hom_solver_basis(
    lattice: &SubgroupLattice,
    a: &Rep,
    b: &Rep,
) -> Result<Vec<QMat>, RepError> {
    if a.level != b.level {
        return Err(RepError::GroupMismatch);
    }
    let (da, db) = (a.dim, b.dim);
    let unknowns = da * db;
    let gens: Vec<usize> = lattice.subgroup(a.level).generators().to_vec();
    let mut system = QMat::zeros(gens.len() * unknowns, unknowns);
    for (gi, &g) in gens.iter().enumerate() {
        let ra = a.element_matrix(g);
        let rb = b.element_matrix(g);
        for i in 0..db {
            for j in 0..da {
                let row = gi * unknowns + i * da + j;
                // (M ρ_a(g))_{i,j} − (ρ_b(g) M)_{i,j} = 0
                for c in 0..da {
                    *system.at_mut(row, i * da + c) += ra.at(c, j);
                }
                for r in 0..db {
                    *system.at_mut(row, r * da + j) -= rb.at(i, r);
                }
            }
        }
    }
    let basis = system.nullspace_basis();
    Ok(basis
        .into_iter()
        .map(|v| QMat::from_fn(db, da, |r, c| v[r * da + c].clone()))
        .collect())
}

/// A basis of `Hom(a, b)`.
///
/// Permutation representations use the classical combinatorial basis (one
/// 0/1 matrix per orbit of the diagonal action on point pairs); everything
/// else goes through the rational solver. Certificates downstream
/// re-verify the basis independently of either construction.
pub fn hom_basis(lattice: &SubgroupLattice, a: &Rep, b: &Rep) -> Result<Vec<QMat>, RepError> {
    if a.level != b.level {
        return Err(RepError::GroupMismatch);
    }
    if let (Some(aact), Some(bact)) = (a.perm_act(), b.perm_act()) {
        let members = lattice.subgroup(a.level).members();
        let pairs = a.dim * b.dim;
        let mut orbit_of = vec![usize::MAX; pairs];
        let mut maps = Vec::new();
        for start in 0..pairs {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let orbit_index = maps.len();
            let mut mat = QMat::zeros(b.dim, a.dim);
            let mut stack = vec![start];
            orbit_of[start] = orbit_index;
            *mat.at_mut(start % b.dim, start / b.dim) = Q::one();
            while let Some(pair) = stack.pop() {
                let (pa, pb) = (pair / b.dim, pair % b.dim);
                for &m in members {
                    let next = aact[&m][pa] * b.dim + bact[&m][pb];
                    if orbit_of[next] == usize::MAX {
                        orbit_of[next] = orbit_index;
                        *mat.at_mut(next % b.dim, next / b.dim) = Q::one();
                        stack.push(next);
                    }
                }
            }
            maps.push(mat);
        }
        return Ok(maps);
    }
    hom_solver_basis(lattice, a, b)
}

/// Outcome of the constituent-containment test, with a certificate that
/// re-verifies by plain matrix arithmetic.
#[derive(Debug, Clone)]
pub struct ConstituentRelation {
    pub contained: bool,
    /// A basis of the equivariant maps `W → V`.
    pub maps: Vec<QMat>,
    pub certificate: Certificate,
}

#[derive(Debug, Clone)]
pub enum Certificate {
    /// Every standard basis vector of `V`, expressed as a combination of
    /// image columns `(map index, column, coefficient)`.
    Spans {
        combinations: Vec<Vec<(usize, usize, Q)>>,
    },
    /// A functional vanishing on every image column, with a coordinate
    /// (a standard basis vector of `V`) where it equals one.
    MissingVector { functional: Vec<Q>, outside: usize },
}

/// Decides whether every constituent of `v` occurs in `w`: the images of a
/// basis of equivariant maps `w → v` must span `v`.
pub fn constituents_contained(
    lattice: &SubgroupLattice,
    v: &Rep,
    w: &Rep,
) -> Result<ConstituentRelation, RepError> {
    let maps = hom_basis(lattice, w, v)?;
    let mut span = SpanBuilder::new(v.dim);
    'outer: for (k, map) in maps.iter().enumerate() {
        for j in 0..w.dim {
            span.add(k * w.dim + j, map.column(j));
            if span.is_full() {
                break 'outer;
            }
        }
    }
    if span.is_full() {
        let mut combinations = Vec::with_capacity(v.dim);
        for i in 0..v.dim {
            let mut e = vec![Q::zero(); v.dim];
            e[i] = Q::one();
            let combo = span.express(&e).expect("span is full");
            combinations.push(
                combo
                    .into_iter()
                    .map(|(col, coeff)| (col / w.dim, col % w.dim, coeff))
                    .collect(),
            );
        }
        Ok(ConstituentRelation {
            contained: true,
            maps,
            certificate: Certificate::Spans { combinations },
        })
    } else {
        let functional = span
            .orthogonal_functional()
            .expect("proper span has an orthogonal functional");
        let outside = functional
            .iter()
            .position(|x| x.is_one())
            .expect("functional is normalized at a free coordinate");
        Ok(ConstituentRelation {
            contained: false,
            maps,
            certificate: Certificate::MissingVector {
                functional,
                outside,
            },
        })
    }
}

impl ConstituentRelation {
    /// Re-verifies the certificate by independent matrix arithmetic:
    /// each basis map must be equivariant, the basis must have the
    /// character-formula dimension and a distinguishing entry per map,
    /// and the spanning/missing data must multiply out.
    pub fn verify(&self, lattice: &SubgroupLattice, v: &Rep, w: &Rep) -> bool {
        let gens = lattice.subgroup(v.level()).generators().to_vec();
        for map in &self.maps {
            for &g in &gens {
                let lhs = map.mul(&w.element_matrix(g));
                let rhs = v.element_matrix(g).mul(map);
                if lhs != rhs {
                    return false;
                }
            }
        }
        // dimension of Hom(W, V) by the character inner product
        let members = lattice.subgroup(v.level()).members();
        let chi_v = v.character(lattice);
        let chi_w = w.character(lattice);
        let group = lattice.group();
        let total: Q = members
            .iter()
            .map(|&m| &chi_w[&group.inv(m)] * &chi_v[&m])
            .sum();
        let order = Q::from_integer((members.len() as i64).into());
        let dim = total / order;
        if !dim.is_integer() || dim.to_integer() != (self.maps.len() as i64).into() {
            return false;
        }
        // linear independence via distinguishing entries
        for (k, map) in self.maps.iter().enumerate() {
            let mut found = false;
            'search: for r in 0..map.rows() {
                for c in 0..map.cols() {
                    if !map.at(r, c).is_zero()
                        && self
                            .maps
                            .iter()
                            .enumerate()
                            .all(|(k2, other)| k2 == k || other.at(r, c).is_zero())
                    {
                        found = true;
                        break 'search;
                    }
                }
            }
            if !found {
                return false;
            }
        }
        match &self.certificate {
            Certificate::Spans { combinations } => {
                if combinations.len() != v.dim() {
                    return false;
                }
                for (i, combo) in combinations.iter().enumerate() {
                    let mut acc = vec![Q::zero(); v.dim()];
                    for (map_idx, col, coeff) in combo {
                        let column = self.maps[*map_idx].column(*col);
                        for (slot, entry) in acc.iter_mut().zip(&column) {
                            *slot += coeff * entry;
                        }
                    }
                    for (j, entry) in acc.iter().enumerate() {
                        let expect = if i == j { Q::one() } else { Q::zero() };
                        if *entry != expect {
                            return false;
                        }
                    }
                }
                self.contained
            }
            Certificate::MissingVector {
                functional,
                outside,
            } => {
                if functional.len() != v.dim() || !functional[*outside].is_one() {
                    return false;
                }
                for map in &self.maps {
                    for j in 0..map.cols() {
                        let dot: Q = functional
                            .iter()
                            .zip(map.column(j).iter())
                            .map(|(a, b)| a * b)
                            .sum();
                        if !dot.is_zero() {
                            return false;
                        }
                    }
                }
                !self.contained
            }
        }
    }
}

/// A universe: a formal direct sum, with infinite multiplicity, of the
/// listed generator representations together with the trivial one.
#[derive(Debug, Clone)]
pub struct Universe {
    name: Option<String>,
    generators: Vec<Rep>,
}

impl Universe {
    /// Builds from generator representations of the full group.
    pub fn new(
        lattice: &SubgroupLattice,
        generators: Vec<Rep>,
    ) -> Result<Universe, RepError> {
        for rep in &generators {
            if rep.level() != lattice.full() {
                return Err(RepError::GroupMismatch);
            }
        }
        Ok(Universe {
            name: None,
            generators,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Only trivial summands.
    pub fn trivial(_lattice: &SubgroupLattice) -> Universe {
        Universe {
            name: Some("trivial".into()),
            generators: Vec::new(),
        }
    }

    /// The regular representation as generator: permits all norms.
    pub fn complete(lattice: &SubgroupLattice) -> Universe {
        let free = GSet::orbit(lattice, lattice.full(), lattice.trivial());
        Universe {
            name: Some("complete".into()),
            generators: vec![Rep::permutation(lattice, &free)],
        }
    }

    pub fn generators(&self) -> &[Rep] {
        &self.generators
    }

    /// The finite witness: one copy of the trivial representation plus
    /// one copy of each generator. Since every summand recurs infinitely
    /// often in the universe, all containment questions reduce to this
    /// representative.
    pub fn finite_witness(&self, lattice: &SubgroupLattice) -> Rep {
        let mut acc = Rep::trivial(lattice, lattice.full());
        for gen in &self.generators {
            acc = acc.direct_sum(lattice, gen).expect("same level");
        }
        acc
    }

    /// Is the nonempty `H`-set `T` admissible: does `ℝ{T} ⊗ U` embed in
    /// `U`? Equivalently, are the constituents of
    /// `perm(T) ⊗ res_H(U_fin)` contained in `res_H(U_fin)`?
    pub fn admits(
        &self,
        lattice: &SubgroupLattice,
        level: SubgroupId,
        t: &GSet,
    ) -> Result<ConstituentRelation, RepError> {
        if t.is_empty() {
            return Err(RepError::EmptySet);
        }
        let u_fin = self.finite_witness(lattice).restrict(lattice, level)?;
        let tensor = Rep::permutation(lattice, t).tensor(lattice, &u_fin)?;
        constituents_contained(lattice, &tensor, &u_fin)
    }

    /// The indexing system of admissible sets for this universe.
    pub fn indexing_system(
        &self,
        lattice: &SubgroupLattice,
    ) -> Result<IndexingSystem, RepError> {
        let mut pairs = Vec::new();
        for &h in lattice.classes().reps() {
            for &k in lattice.classes_at(h).reps() {
                if k == h {
                    continue;
                }
                let orbit = GSet::orbit(lattice, h, k);
                if self.admits(lattice, h, &orbit)?.contained {
                    pairs.push((h, k));
                }
            }
        }
        let system = IndexingSystem::from_pairs(lattice, pairs)
            .expect("pairs are subgroup-contained by construction");
        Ok(match &self.name {
            Some(name) => system.with_name(format!("from-universe-{name}")),
            None => system,
        })
    }

    /// The finite shadow of the absorption homeomorphism: for a nonempty
    /// admissible `T`, the constituents of `ℝ{T} ⊗ U` and of `U` must
    /// mutually contain each other.
    pub fn absorption_check(
        &self,
        lattice: &SubgroupLattice,
        level: SubgroupId,
        t: &GSet,
    ) -> Result<bool, RepError> {
        if t.is_empty() {
            return Err(RepError::EmptySet);
        }
        let u_fin = self.finite_witness(lattice).restrict(lattice, level)?;
        let tensor = Rep::permutation(lattice, t).tensor(lattice, &u_fin)?;
        let forward = constituents_contained(lattice, &tensor, &u_fin)?;
        let backward = constituents_contained(lattice, &u_fin, &tensor)?;
        Ok(forward.contained && backward.contained)
    }
}
