use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use itertools::Itertools;

use crate::error::GroupError;
use crate::group::FiniteGroup;
use crate::limits::Limits;

/// Index of a subgroup within its lattice.
///
/// Ids are assigned in canonical order (member count, then member list
/// lexicographically), so comparing ids compares canonical ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubgroupId(pub usize);

/// A subgroup, stored as its sorted element-index set.
#[derive(Debug, Clone)]
pub struct Subgroup {
    members: Vec<usize>,
    generators: Vec<usize>,
}

impl Subgroup {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// A deterministic generating set (greedy by least element index).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn contains(&self, element: usize) -> bool {
        self.members.binary_search(&element).is_ok()
    }

    /// Canonical key: the sorted member-index list rendered as text.
    pub fn canonical_id(&self) -> String {
        self.members.iter().map(|m| m.to_string()).join(".")
    }
}

/// One double-coset decomposition `K\G/H` (or within a smaller ambient).
#[derive(Debug, Clone)]
pub struct DoubleCosetDecomposition {
    pub ambient: SubgroupId,
    pub left: SubgroupId,
    pub right: SubgroupId,
    /// One representative per double coset, in order of least uncovered
    /// element index.
    pub representatives: Vec<usize>,
    /// Sizes of the cosets, parallel to `representatives`.
    pub sizes: Vec<usize>,
}

/// Conjugacy data for subgroups of a fixed level subgroup.
#[derive(Debug, Clone)]
pub struct LevelClasses {
    /// Class representative (lex-least member list in the class) and a
    /// witness `w` in the level with `w·S·w⁻¹ = rep`, for each subgroup
    /// `S` of the level.
    rep_of: BTreeMap<SubgroupId, (SubgroupId, usize)>,
    reps: Vec<SubgroupId>,
}

impl LevelClasses {
    /// Class representatives, in canonical order.
    pub fn reps(&self) -> &[SubgroupId] {
        &self.reps
    }

    pub fn rep_of(&self, sub: SubgroupId) -> SubgroupId {
        self.rep_of[&sub].0
    }

    /// Witness `w` (a member of the level) with `w·sub·w⁻¹ = rep`.
    pub fn witness(&self, sub: SubgroupId) -> usize {
        self.rep_of[&sub].1
    }

    pub fn contains(&self, sub: SubgroupId) -> bool {
        self.rep_of.contains_key(&sub)
    }
}

/// The full subgroup lattice of a finite group, with inclusion, conjugacy
/// classes (with witnesses), and per-level conjugacy refinements.
#[derive(Debug)]
pub struct SubgroupLattice {
    group: Arc<FiniteGroup>,
    subgroups: Vec<Subgroup>,
    by_members: HashMap<Vec<usize>, SubgroupId>,
    inclusion: Vec<Vec<bool>>,
    level_classes: Vec<LevelClasses>,
    full: SubgroupId,
    trivial: SubgroupId,
}

/// Closes a set of element indices under multiplication and inverse.
fn close_members(group: &FiniteGroup, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut members: BTreeSet<usize> = seed.clone();
    members.insert(0);
    let mut frontier: Vec<usize> = members.iter().copied().collect();
    while let Some(a) = frontier.pop() {
        let inv = group.inv(a);
        if members.insert(inv) {
            frontier.push(inv);
        }
        for b in members.clone() {
            let ab = group.mul(a, b);
            if members.insert(ab) {
                frontier.push(ab);
            }
            let ba = group.mul(b, a);
            if members.insert(ba) {
                frontier.push(ba);
            }
        }
    }
    members
}

/// All subgroups of the subgroup spanned by `universe`, found by generating
/// cyclic subgroups and closing under pairwise joins.
pub fn subgroups_within(group: &FiniteGroup, universe: &[usize]) -> Vec<Vec<usize>> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    found.insert(vec![0]);
    for &g in universe {
        let cyclic = close_members(group, &BTreeSet::from([g]));
        found.insert(cyclic.into_iter().collect());
    }
    loop {
        let snapshot: Vec<Vec<usize>> = found.iter().cloned().collect();
        let mut grew = false;
        for (a, b) in snapshot.iter().tuple_combinations() {
            let seed: BTreeSet<usize> = a.iter().chain(b.iter()).copied().collect();
            let join = close_members(group, &seed);
            if join.len() > universe.len() {
                continue;
            }
            let join: Vec<usize> = join.into_iter().collect();
            if found.insert(join) {
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    found.into_iter().collect()
}

fn greedy_generators(group: &FiniteGroup, members: &[usize]) -> Vec<usize> {
    let mut gens: Vec<usize> = Vec::new();
    let mut span: BTreeSet<usize> = BTreeSet::from([0]);
    for &m in members {
        if span.contains(&m) {
            continue;
        }
        gens.push(m);
        let mut seed = span.clone();
        seed.insert(m);
        span = close_members(group, &seed);
    }
    gens
}

impl SubgroupLattice {
    /// Enumerates all subgroups of `group` and the derived conjugacy data.
    pub fn build(group: Arc<FiniteGroup>, limits: &Limits) -> Result<Arc<Self>, GroupError> {
        if group.order() > limits.max_lattice_order {
            return Err(GroupError::OrderCapExceeded {
                order: group.order(),
                cap: limits.max_lattice_order,
            });
        }

        let all: Vec<usize> = (0..group.order()).collect();
        let mut member_lists = subgroups_within(&group, &all);
        member_lists.push(all.clone());
        member_lists.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        member_lists.dedup();

        let subgroups: Vec<Subgroup> = member_lists
            .iter()
            .map(|members| Subgroup {
                generators: greedy_generators(&group, members),
                members: members.clone(),
            })
            .collect();
        let by_members: HashMap<Vec<usize>, SubgroupId> = member_lists
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), SubgroupId(i)))
            .collect();

        let n = subgroups.len();
        let mut inclusion = vec![vec![false; n]; n];
        for (i, a) in subgroups.iter().enumerate() {
            for (j, b) in subgroups.iter().enumerate() {
                inclusion[i][j] = a.members.iter().all(|m| b.contains(*m));
            }
        }

        let mut lattice = SubgroupLattice {
            group,
            subgroups,
            by_members,
            inclusion,
            level_classes: Vec::new(),
            full: SubgroupId(n - 1),
            trivial: SubgroupId(0),
        };
        lattice.level_classes = (0..n)
            .map(|level| lattice.compute_level_classes(SubgroupId(level)))
            .collect();
        Ok(Arc::new(lattice))
    }

    fn compute_level_classes(&self, level: SubgroupId) -> LevelClasses {
        let level_members = self.subgroups[level.0].members.clone();
        let mut rep_of: BTreeMap<SubgroupId, (SubgroupId, usize)> = BTreeMap::new();
        let mut reps: Vec<SubgroupId> = Vec::new();
        for (i, _sub) in self.subgroups.iter().enumerate() {
            let id = SubgroupId(i);
            if !self.leq(id, level) || rep_of.contains_key(&id) {
                continue;
            }
            // Orbit of `id` under conjugation by the level; the canonical
            // id order of our ids makes the least id the lex-least rep.
            let mut orbit: BTreeMap<SubgroupId, usize> = BTreeMap::new();
            for &w in &level_members {
                let conj = self.conjugate_subgroup(w, id);
                orbit.entry(conj).or_insert(w);
            }
            let rep = *orbit.keys().next().unwrap();
            reps.push(rep);
            let to_rep = orbit[&rep];
            for (&member_sub, &w) in &orbit {
                // w·id·w⁻¹ = member_sub, to_rep·id·to_rep⁻¹ = rep, so
                // (to_rep·w⁻¹) conjugates member_sub onto rep.
                let witness = self.group.mul(to_rep, self.group.inv(w));
                rep_of.insert(member_sub, (rep, witness));
            }
        }
        reps.sort();
        LevelClasses { rep_of, reps }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ids(&self) -> impl Iterator<Item = SubgroupId> {
        (0..self.subgroups.len()).map(SubgroupId)
    }

    pub fn subgroup(&self, id: SubgroupId) -> &Subgroup {
        &self.subgroups[id.0]
    }

    pub fn full(&self) -> SubgroupId {
        self.full
    }

    pub fn trivial(&self) -> SubgroupId {
        self.trivial
    }

    pub fn order(&self, id: SubgroupId) -> usize {
        self.subgroups[id.0].order()
    }

    pub fn index_in(&self, sub: SubgroupId, ambient: SubgroupId) -> usize {
        self.order(ambient) / self.order(sub)
    }

    /// Inclusion `a ⊆ b`.
    pub fn leq(&self, a: SubgroupId, b: SubgroupId) -> bool {
        self.inclusion[a.0][b.0]
    }

    pub fn by_members(&self, members: &[usize]) -> Option<SubgroupId> {
        self.by_members.get(members).copied()
    }

    /// The subgroup `g·S·g⁻¹`.
    pub fn conjugate_subgroup(&self, g: usize, sub: SubgroupId) -> SubgroupId {
        let mut members: Vec<usize> = self.subgroups[sub.0]
            .members
            .iter()
            .map(|&m| self.group.conj(g, m))
            .collect();
        members.sort_unstable();
        self.by_members[&members]
    }

    /// Conjugacy classes under the full group.
    pub fn classes(&self) -> &LevelClasses {
        &self.level_classes[self.full.0]
    }

    /// Conjugacy classes of subgroups of `level`, under conjugation by
    /// members of `level`.
    pub fn classes_at(&self, level: SubgroupId) -> &LevelClasses {
        &self.level_classes[level.0]
    }

    /// Intersection of two subgroups (always a subgroup in the lattice).
    pub fn intersect(&self, a: SubgroupId, b: SubgroupId) -> SubgroupId {
        let bs = &self.subgroups[b.0];
        let members: Vec<usize> = self.subgroups[a.0]
            .members
            .iter()
            .copied()
            .filter(|&m| bs.contains(m))
            .collect();
        self.by_members[&members]
    }

    /// Double cosets `left\ambient/right`, with deterministic
    /// representatives (least element index not yet covered).
    pub fn double_cosets(
        &self,
        ambient: SubgroupId,
        left: SubgroupId,
        right: SubgroupId,
    ) -> Result<DoubleCosetDecomposition, GroupError> {
        for part in [left, right] {
            if !self.leq(part, ambient) {
                return Err(GroupError::NotASubgroup(
                    self.subgroup(part).canonical_id(),
                    self.subgroup(ambient).canonical_id(),
                ));
            }
        }
        let mut covered: BTreeSet<usize> = BTreeSet::new();
        let mut representatives = Vec::new();
        let mut sizes = Vec::new();
        for &g in &self.subgroups[ambient.0].members {
            if covered.contains(&g) {
                continue;
            }
            representatives.push(g);
            let mut coset = BTreeSet::new();
            for &k in &self.subgroups[left.0].members {
                for &h in &self.subgroups[right.0].members {
                    coset.insert(self.group.mul(self.group.mul(k, g), h));
                }
            }
            sizes.push(coset.len());
            covered.extend(coset);
        }
        debug_assert_eq!(covered.len(), self.order(ambient));
        Ok(DoubleCosetDecomposition {
            ambient,
            left,
            right,
            representatives,
            sizes,
        })
    }

    /// Least witness `g` with `g·K·g⁻¹ ⊆ H`, if any.
    pub fn subconjugate_witness(&self, k: SubgroupId, h: SubgroupId) -> Option<usize> {
        (0..self.group.order()).find(|&g| {
            let conj = self.conjugate_subgroup(g, k);
            self.leq(conj, h)
        })
    }

    /// The normalizer `N_G(H) = {g : g·H·g⁻¹ = H}`.
    pub fn normalizer(&self, h: SubgroupId) -> SubgroupId {
        let members: Vec<usize> = (0..self.group.order())
            .filter(|&g| self.conjugate_subgroup(g, h) == h)
            .collect();
        self.by_members[&members]
    }

    /// `|N_G(H)| / |H|`, the order of the Weyl group of `H`.
    pub fn weyl_order(&self, h: SubgroupId) -> usize {
        self.order(self.normalizer(h)) / self.order(h)
    }

    /// Member positions: index of each member of `sub` within the member
    /// list of `level` (requires `sub ⊆ level`).
    pub fn member_positions(&self, sub: SubgroupId, level: SubgroupId) -> Vec<usize> {
        let level_members = &self.subgroups[level.0].members;
        self.subgroups[sub.0]
            .members
            .iter()
            .map(|m| level_members.binary_search(m).expect("sub not in level"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn build(name: &str, degree: usize, cycles: &[&[usize]]) -> Arc<SubgroupLattice> {
        let gens = cycles
            .iter()
            .map(|c| Permutation::from_cycles(degree, &[c.to_vec()]).unwrap())
            .collect();
        let group = FiniteGroup::new(name, degree, gens, &Limits::default()).unwrap();
        SubgroupLattice::build(group, &Limits::default()).unwrap()
    }

    fn s3() -> Arc<SubgroupLattice> {
        build("S3", 3, &[&[0, 1, 2], &[0, 1]])
    }

    fn c4() -> Arc<SubgroupLattice> {
        build("C4", 4, &[&[0, 1, 2, 3]])
    }

    #[test]
    fn s3_has_six_subgroups_in_four_classes() {
        let lat = s3();
        assert_eq!(lat.len(), 6);
        assert_eq!(lat.classes().reps().len(), 4);
        let orders: Vec<usize> = lat.ids().map(|id| lat.order(id)).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn c4_has_three_subgroups_in_a_chain() {
        let lat = c4();
        assert_eq!(lat.len(), 3);
        assert_eq!(lat.classes().reps().len(), 3);
        let ids: Vec<SubgroupId> = lat.ids().collect();
        assert!(lat.leq(ids[0], ids[1]) && lat.leq(ids[1], ids[2]));
    }

    #[test]
    fn trivial_group_lattice() {
        let group = FiniteGroup::new("trivial", 1, vec![], &Limits::default()).unwrap();
        let lat = SubgroupLattice::build(group, &Limits::default()).unwrap();
        assert_eq!(lat.len(), 1);
        assert_eq!(lat.full(), lat.trivial());
    }

    #[test]
    fn lagrange_holds_everywhere() {
        for lat in [s3(), c4(), build("D4", 4, &[&[0, 1, 2, 3], &[1, 3]])] {
            let order = lat.group().order();
            for id in lat.ids() {
                assert_eq!(order % lat.order(id), 0);
            }
        }
    }

    #[test]
    fn double_cosets_partition_the_group() {
        for lat in [s3(), c4(), build("D4", 4, &[&[0, 1, 2, 3], &[1, 3]])] {
            let full = lat.full();
            for left in lat.ids() {
                for right in lat.ids() {
                    let dc = lat.double_cosets(full, left, right).unwrap();
                    let total: usize = dc.sizes.iter().sum();
                    assert_eq!(total, lat.group().order());
                }
            }
        }
    }

    #[test]
    fn full_by_full_is_one_double_coset_with_identity_rep() {
        let lat = s3();
        let dc = lat.double_cosets(lat.full(), lat.full(), lat.full()).unwrap();
        assert_eq!(dc.representatives, vec![0]);
    }

    #[test]
    fn s3_order_two_self_double_cosets() {
        let lat = s3();
        let k = lat
            .ids()
            .find(|&id| lat.order(id) == 2)
            .expect("an order-2 subgroup");
        let dc = lat.double_cosets(lat.full(), k, k).unwrap();
        assert_eq!(dc.representatives.len(), 2);
    }

    #[test]
    fn c4_c2_self_double_cosets() {
        let lat = c4();
        let c2 = lat.ids().find(|&id| lat.order(id) == 2).unwrap();
        let dc = lat.double_cosets(lat.full(), c2, c2).unwrap();
        assert_eq!(dc.representatives.len(), 2);
    }

    #[test]
    fn trivial_subgroup_is_always_subconjugate() {
        let lat = s3();
        for h in lat.ids() {
            assert_eq!(lat.subconjugate_witness(lat.trivial(), h), Some(0));
        }
    }

    #[test]
    fn conjugate_transpositions_have_a_witness() {
        let lat = s3();
        let twos: Vec<SubgroupId> = lat.ids().filter(|&id| lat.order(id) == 2).collect();
        assert_eq!(twos.len(), 3);
        let w = lat.subconjugate_witness(twos[0], twos[1]).unwrap();
        assert_eq!(lat.conjugate_subgroup(w, twos[0]), twos[1]);
    }

    #[test]
    fn order_obstruction_blocks_subconjugacy() {
        let lat = c4();
        let c2 = lat.ids().find(|&id| lat.order(id) == 2).unwrap();
        assert_eq!(lat.subconjugate_witness(c2, lat.trivial()), None);
    }

    #[test]
    fn normalizer_and_weyl_orders() {
        let lat = s3();
        assert_eq!(lat.normalizer(lat.full()), lat.full());
        assert_eq!(lat.weyl_order(lat.full()), 1);
        let k = lat.ids().find(|&id| lat.order(id) == 2).unwrap();
        assert_eq!(lat.normalizer(k), k);
        assert_eq!(lat.weyl_order(k), 1);

        let lat = c4();
        let c2 = lat.ids().find(|&id| lat.order(id) == 2).unwrap();
        assert_eq!(lat.normalizer(c2), lat.full());
        assert_eq!(lat.weyl_order(c2), 2);
    }

    #[test]
    fn conjugation_permutes_the_lattice_preserving_inclusion() {
        let lat = s3();
        for g in 0..lat.group().order() {
            let image: BTreeSet<SubgroupId> =
                lat.ids().map(|id| lat.conjugate_subgroup(g, id)).collect();
            assert_eq!(image.len(), lat.len());
            for a in lat.ids() {
                for b in lat.ids() {
                    assert_eq!(
                        lat.leq(a, b),
                        lat.leq(lat.conjugate_subgroup(g, a), lat.conjugate_subgroup(g, b))
                    );
                }
            }
        }
    }

    #[test]
    fn level_class_witnesses_conjugate_onto_reps() {
        let lat = build("D4", 4, &[&[0, 1, 2, 3], &[1, 3]]);
        for level in lat.ids() {
            let classes = lat.classes_at(level);
            for sub in lat.ids() {
                if !lat.leq(sub, level) {
                    continue;
                }
                let rep = classes.rep_of(sub);
                let w = classes.witness(sub);
                assert!(lat.subgroup(level).contains(w));
                assert_eq!(lat.conjugate_subgroup(w, sub), rep);
            }
        }
    }

    #[test]
    fn lattice_cap_is_enforced() {
        let r = Permutation::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        let s = Permutation::from_cycles(5, &[vec![0, 1]]).unwrap();
        let group = FiniteGroup::new("S5", 5, vec![r, s], &Limits { max_elements: 200, ..Limits::default() }).unwrap();
        assert!(matches!(
            SubgroupLattice::build(group, &Limits::default()),
            Err(GroupError::OrderCapExceeded { .. })
        ));
    }
}
