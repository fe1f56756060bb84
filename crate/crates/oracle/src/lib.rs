//! Brute-force and element-level reference routes for cross-checking the
//! main engine. Everything here recomputes results from raw definitions
//! (cosets, balanced products, subset closures) rather than through the
//! orbit-formula paths under test.

use std::collections::BTreeMap;

use equinorm::expr::NormExpr;
use equinorm::gset::GSet;
use equinorm::indexing::IndexingSystem;
use equinorm::subgroup::{SubgroupId, SubgroupLattice};
use equinorm::FiniteGroup;

pub mod sample;

/// An explicit action of a level subgroup: one row per member (in member
/// order), one column per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawAction {
    pub level: SubgroupId,
    pub points: usize,
    pub act: Vec<Vec<usize>>,
}

impl RawAction {
    pub fn apply(&self, member_pos: usize, point: usize) -> usize {
        self.act[member_pos][point]
    }
}

/// Realizes a single orbit `level/stab` from scratch: points are cosets
/// enumerated by least element, the action is left translation.
pub fn realize_orbit(lattice: &SubgroupLattice, level: SubgroupId, stab: SubgroupId) -> RawAction {
    let group = lattice.group();
    let members = lattice.subgroup(level).members();
    let stab_members = lattice.subgroup(stab).members();
    let mut coset_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut count = 0usize;
    for &h in members {
        if coset_of.contains_key(&h) {
            continue;
        }
        for &k in stab_members {
            coset_of.insert(group.mul(h, k), count);
        }
        count += 1;
    }
    let mut reps = vec![usize::MAX; count];
    for (&elem, &c) in &coset_of {
        if reps[c] == usize::MAX {
            reps[c] = elem;
        }
    }
    let act = members
        .iter()
        .map(|&m| reps.iter().map(|&r| coset_of[&group.mul(m, r)]).collect())
        .collect();
    RawAction {
        level,
        points: count,
        act,
    }
}

pub fn realize_gset(lattice: &SubgroupLattice, gset: &GSet) -> RawAction {
    let members = lattice.subgroup(gset.level()).order();
    let mut total = RawAction {
        level: gset.level(),
        points: 0,
        act: vec![Vec::new(); members],
    };
    for &(stab, mult) in gset.orbits() {
        let orbit = realize_orbit(lattice, gset.level(), stab);
        for _ in 0..mult {
            total = disjoint_union(&total, &orbit);
        }
    }
    total
}

pub fn disjoint_union(a: &RawAction, b: &RawAction) -> RawAction {
    assert_eq!(a.level, b.level);
    let act = a
        .act
        .iter()
        .zip(&b.act)
        .map(|(ra, rb)| {
            ra.iter()
                .copied()
                .chain(rb.iter().map(|&p| p + a.points))
                .collect()
        })
        .collect();
    RawAction {
        level: a.level,
        points: a.points + b.points,
        act,
    }
}

/// Restriction: keep the rows of the subgroup's members.
pub fn restrict_action(lattice: &SubgroupLattice, a: &RawAction, k: SubgroupId) -> RawAction {
    let level_members = lattice.subgroup(a.level).members();
    let act = lattice
        .subgroup(k)
        .members()
        .iter()
        .map(|m| {
            let pos = level_members.binary_search(m).expect("k within level");
            a.act[pos].clone()
        })
        .collect();
    RawAction {
        level: k,
        points: a.points,
        act,
    }
}

/// Induction as an explicit balanced product `H ×_K T`: pairs `(h, t)`
/// modulo `(hk, t) ~ (h, k·t)`, with `H` acting on the left factor.
pub fn induce_action(lattice: &SubgroupLattice, a: &RawAction, h: SubgroupId) -> RawAction {
    let group = lattice.group();
    let h_members = lattice.subgroup(h).members();
    let k_members = lattice.subgroup(a.level).members();
    let class_of_pair = |elem: usize, point: usize| -> (usize, usize) {
        // canonical representative: lexicographically least pair in the class
        k_members
            .iter()
            .enumerate()
            .map(|(pos, &k)| (group.mul(elem, group.inv(k)), a.apply(pos, point)))
            .min()
            .expect("subgroups contain the identity")
    };
    let mut class_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &elem in h_members {
        for point in 0..a.points {
            let class = class_of_pair(elem, point);
            let next = class_index.len();
            class_index.entry(class).or_insert(next);
        }
    }
    let pairs: Vec<(usize, usize)> = {
        let mut v: Vec<((usize, usize), usize)> =
            class_index.iter().map(|(&c, &i)| (c, i)).collect();
        v.sort_by_key(|&(_, i)| i);
        v.into_iter().map(|(c, _)| c).collect()
    };
    let act = h_members
        .iter()
        .map(|&m| {
            pairs
                .iter()
                .map(|&(elem, point)| class_index[&class_of_pair(group.mul(m, elem), point)])
                .collect()
        })
        .collect();
    RawAction {
        level: h,
        points: class_index.len(),
        act,
    }
}

pub fn product_action(a: &RawAction, b: &RawAction) -> RawAction {
    assert_eq!(a.level, b.level);
    let points = a.points * b.points;
    let act = a
        .act
        .iter()
        .zip(&b.act)
        .map(|(ra, rb)| {
            (0..points)
                .map(|p| ra[p / b.points] * b.points + rb[p % b.points])
                .collect()
        })
        .collect();
    RawAction {
        level: a.level,
        points,
        act,
    }
}

pub fn orbit_count(a: &RawAction) -> usize {
    sweep(a).1.len()
}

fn sweep(a: &RawAction) -> (Vec<usize>, Vec<usize>) {
    let mut orbit_of = vec![usize::MAX; a.points];
    let mut reps = Vec::new();
    for start in 0..a.points {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let orbit = reps.len();
        reps.push(start);
        let mut stack = vec![start];
        orbit_of[start] = orbit;
        while let Some(p) = stack.pop() {
            for row in &a.act {
                if orbit_of[row[p]] == usize::MAX {
                    orbit_of[row[p]] = orbit;
                    stack.push(row[p]);
                }
            }
        }
    }
    (orbit_of, reps)
}

/// Decomposes an action into a canonical G-set, reducing stabilizers to
/// class representatives by brute-force search over conjugators.
pub fn decompose(lattice: &SubgroupLattice, a: &RawAction) -> GSet {
    let members = lattice.subgroup(a.level).members();
    let (_, reps) = sweep(a);
    let mut orbits = Vec::new();
    for &rep in &reps {
        let stab: Vec<usize> = members
            .iter()
            .enumerate()
            .filter(|(pos, _)| a.apply(*pos, rep) == rep)
            .map(|(_, &m)| m)
            .collect();
        let stab_id = lattice.by_members(&stab).expect("stabilizer is a subgroup");
        orbits.push((minimal_conjugate(lattice, a.level, stab_id), 1));
    }
    GSet::from_orbits(a.level, orbits)
}

/// The least conjugate (by lattice id, i.e. by canonical member list) of a
/// subgroup under the level's conjugation action.
pub fn minimal_conjugate(
    lattice: &SubgroupLattice,
    level: SubgroupId,
    sub: SubgroupId,
) -> SubgroupId {
    lattice
        .subgroup(level)
        .members()
        .iter()
        .map(|&w| lattice.conjugate_subgroup(w, sub))
        .min()
        .expect("level is nonempty")
}

/// Fixed points of a whole subgroup (checking every member, not a
/// generating set).
pub fn fixed_points(lattice: &SubgroupLattice, a: &RawAction, sub: SubgroupId) -> usize {
    let level_members = lattice.subgroup(a.level).members();
    let positions: Vec<usize> = lattice
        .subgroup(sub)
        .members()
        .iter()
        .map(|m| level_members.binary_search(m).expect("sub within level"))
        .collect();
    (0..a.points)
        .filter(|&p| positions.iter().all(|&pos| a.apply(pos, p) == p))
        .count()
}

/// Mark vector computed entirely on the raw action.
pub fn marks_of_action(lattice: &SubgroupLattice, a: &RawAction) -> Vec<(SubgroupId, u64)> {
    lattice
        .classes_at(a.level)
        .reps()
        .iter()
        .map(|&class| (class, fixed_points(lattice, a, class) as u64))
        .collect()
}

/// Element-level exponent semantics for norm expressions: every operation
/// is performed on explicit actions, never on orbit multisets.
pub fn exponent_actions(
    lattice: &SubgroupLattice,
    expr: &NormExpr,
) -> BTreeMap<String, RawAction> {
    match expr {
        NormExpr::Var(x) => {
            let o = lattice.full();
            BTreeMap::from([(
                x.clone(),
                RawAction {
                    level: o,
                    points: 1,
                    act: vec![vec![0]; lattice.subgroup(o).order()],
                },
            )])
        }
        NormExpr::Res { target, inner } => exponent_actions(lattice, inner)
            .into_iter()
            .map(|(x, a)| (x, restrict_action(lattice, &a, *target)))
            .collect(),
        NormExpr::Norm { target, inner } => exponent_actions(lattice, inner)
            .into_iter()
            .map(|(x, a)| (x, induce_action(lattice, &a, *target)))
            .collect(),
        NormExpr::Smash(factors) => {
            let mut merged: BTreeMap<String, RawAction> = BTreeMap::new();
            for factor in factors {
                for (x, a) in exponent_actions(lattice, factor) {
                    match merged.remove(&x) {
                        None => {
                            merged.insert(x, a);
                        }
                        Some(prev) => {
                            merged.insert(x, disjoint_union(&prev, &a));
                        }
                    }
                }
            }
            merged
        }
        NormExpr::Npow { exponent, inner } => {
            let t = realize_gset(lattice, exponent);
            exponent_actions(lattice, inner)
                .into_iter()
                .map(|(x, a)| (x, product_action(&t, &a)))
                .collect()
        }
    }
}

/// Canonical G-sets of the element-level exponents (empty ones dropped).
pub fn exponent_gsets(lattice: &SubgroupLattice, expr: &NormExpr) -> BTreeMap<String, GSet> {
    exponent_actions(lattice, expr)
        .into_iter()
        .filter(|(_, a)| a.points > 0)
        .map(|(x, a)| (x, decompose(lattice, &a)))
        .collect()
}

/// All subgroups by brute force over subsets (only sensible for small
/// orders): a subset containing the identity is kept when it is closed
/// under products and inverses.
pub fn all_subgroups_bruteforce(group: &FiniteGroup) -> Vec<Vec<usize>> {
    let n = group.order();
    assert!(n <= 16, "brute force oracle is for small groups");
    let mut found = Vec::new();
    for mask in 0u32..(1u32 << n) {
        if mask & 1 == 0 {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let closed = members.iter().all(|&a| {
            members.iter().all(|&b| mask >> group.mul(a, b) & 1 == 1)
                && mask >> group.inv(a) & 1 == 1
        });
        if closed {
            found.push(members);
        }
    }
    found
}

/// Every indexing system by brute force: all candidate admissible maps
/// (subsets of nontrivial orbit-class pairs), filtered by `validate`.
pub fn enumerate_indexing_bruteforce(lattice: &SubgroupLattice) -> Vec<IndexingSystem> {
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
    assert!(candidates.len() <= 20, "brute force oracle cap");
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << candidates.len()) {
        let pairs: Vec<(SubgroupId, SubgroupId)> = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let system = IndexingSystem::from_pairs(lattice, pairs).expect("pairs are contained");
        if system.validate(lattice).passed() {
            out.push(system);
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use equinorm::presets;
    use equinorm::Limits;
    use std::sync::Arc;

    fn lat(name: &str) -> Arc<SubgroupLattice> {
        let g = presets::group(name, &Limits::default()).unwrap().unwrap();
        SubgroupLattice::build(g, &Limits::default()).unwrap()
    }

    #[test]
    fn oracle_realization_matches_formula_restriction() {
        let lat = lat("S3");
        let c3 = lat.ids().find(|&id| lat.order(id) == 3).unwrap();
        let c2 = lat.ids().find(|&id| lat.order(id) == 2).unwrap();
        let t = GSet::orbit(&lat, lat.full(), c3);
        let raw = realize_gset(&lat, &t);
        let restricted = restrict_action(&lat, &raw, c2);
        assert_eq!(decompose(&lat, &restricted), t.restrict(&lat, c2).unwrap());
    }

    #[test]
    fn balanced_product_matches_formula_induction() {
        let lat = lat("C4");
        let c2 = lat.ids().find(|&id| lat.order(id) == 2).unwrap();
        for stab in [lat.trivial(), c2] {
            let t = GSet::orbit(&lat, c2, stab);
            let raw = realize_gset(&lat, &t);
            let induced = induce_action(&lat, &raw, lat.full());
            assert_eq!(
                decompose(&lat, &induced),
                t.induce(&lat, lat.full()).unwrap()
            );
        }
    }

    #[test]
    fn bruteforce_subgroups_match_the_lattice() {
        for name in ["C4", "S3", "D4", "Q8", "A4"] {
            let lat = lat(name);
            let brute = all_subgroups_bruteforce(lat.group());
            assert_eq!(brute.len(), lat.len(), "{name}");
            for members in brute {
                assert!(lat.by_members(&members).is_some());
            }
        }
    }

    #[test]
    fn bruteforce_indexing_matches_catalan_on_c4() {
        let lat = lat("C4");
        assert_eq!(enumerate_indexing_bruteforce(&lat).len(), 5);
    }
}
