use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{GroupError, IndexingError};
use crate::group::FiniteGroup;
use crate::gset::GSet;
use crate::indexing::IndexingSystem;
use crate::limits::Limits;
use crate::perm::Permutation;
use crate::subgroup::{subgroups_within, SubgroupId, SubgroupLattice};

/// The product `G × Σ_n`, realized as a permutation group on the disjoint
/// union of the G-points and `n` fresh points, with embedding helpers.
#[derive(Debug)]
pub struct ProductWithSymmetric {
    pub group: Arc<FiniteGroup>,
    pub n: usize,
    base_degree: usize,
}

impl ProductWithSymmetric {
    pub fn build(
        lattice: &SubgroupLattice,
        n: usize,
        limits: &Limits,
    ) -> Result<ProductWithSymmetric, GroupError> {
        let base = lattice.group();
        let degree = base.degree() + n;
        let mut generators: Vec<Permutation> = Vec::new();
        for gen in base.generators() {
            let mut images: Vec<usize> = gen.images().to_vec();
            images.extend(base.degree()..degree);
            generators.push(Permutation::from_images(images).expect("extension of a bijection"));
        }
        for i in 0..n.saturating_sub(1) {
            let mut images: Vec<usize> = (0..degree).collect();
            images.swap(base.degree() + i, base.degree() + i + 1);
            generators.push(Permutation::from_images(images).expect("transposition"));
        }
        let name = format!("{}xS{}", base.name(), n);
        let group = FiniteGroup::new(name, degree, generators, limits)?;
        Ok(ProductWithSymmetric {
            group,
            n,
            base_degree: base.degree(),
        })
    }

    /// Index of the element `(g, σ)`.
    pub fn embed(&self, lattice: &SubgroupLattice, g: usize, sigma: &Permutation) -> usize {
        let base = lattice.group().element(g);
        let mut images: Vec<usize> = base.images().to_vec();
        images.extend(sigma.images().iter().map(|&p| p + self.base_degree));
        let perm = Permutation::from_images(images).expect("product of bijections");
        self.group
            .element_index(&perm)
            .expect("embedding lands in the product")
    }

    /// Splits a product element into its `G` part and `Σ_n` part.
    pub fn split(&self, element: usize) -> (Permutation, Permutation) {
        let perm = self.group.element(element);
        let g = Permutation::from_images(perm.images()[..self.base_degree].to_vec())
            .expect("block decomposition");
        let sigma = Permutation::from_images(
            perm.images()[self.base_degree..]
                .iter()
                .map(|&p| p - self.base_degree)
                .collect(),
        )
        .expect("block decomposition");
        (g, sigma)
    }
}

/// The graph `{(h, σ_h)}` of the homomorphism `H → Σ_n` defined by an
/// ordered admissible `H`-set of cardinality `n`, as a subgroup of
/// `G × Σ_n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GraphSubgroup {
    /// the acting subgroup `H`
    pub level: SubgroupId,
    /// the (unordered shadow of the) defining `H`-set
    pub gset: GSet,
    /// sorted member indices inside the product group
    pub members: Vec<usize>,
}

/// Builds the graph subgroup of an admissible `H`-set `T` (the ordering
/// is the canonical realization order). When a gate is supplied, `T`
/// must be admissible under it.
pub fn graph_subgroup(
    lattice: &SubgroupLattice,
    product: &ProductWithSymmetric,
    level: SubgroupId,
    t: &GSet,
    gate: Option<&IndexingSystem>,
) -> Result<GraphSubgroup, IndexingError> {
    if let Some(ix) = gate {
        if !ix.is_admissible(lattice, t) {
            return Err(IndexingError::NotAdmissible(format!("{:?}", t.orbits())));
        }
    }
    let real = t.realize(lattice);
    assert_eq!(real.points(), product.n, "cardinality must match n");
    let members = lattice.subgroup(level).members();
    let mut indices: Vec<usize> = members
        .iter()
        .enumerate()
        .map(|(pos, &h)| {
            let sigma = Permutation::from_images(
                (0..real.points()).map(|p| real.apply(pos, p)).collect(),
            )
            .expect("group action permutes points");
            product.embed(lattice, h, &sigma)
        })
        .collect();
    indices.sort_unstable();
    Ok(GraphSubgroup {
        level,
        gset: t.clone(),
        members: indices,
    })
}

impl GraphSubgroup {
    /// The graph must meet `{1} × Σ_n` trivially: the only member with a
    /// trivial `G` part is the identity.
    pub fn intersects_symmetric_trivially(&self, product: &ProductWithSymmetric) -> bool {
        self.members
            .iter()
            .filter(|&&m| product.split(m).0.is_identity())
            .all(|&m| m == 0)
    }
}

fn conjugacy_class_rep(product: &ProductWithSymmetric, members: &[usize]) -> Vec<usize> {
    let group = &product.group;
    let mut best: Option<Vec<usize>> = None;
    for g in 0..group.order() {
        let mut image: Vec<usize> = members.iter().map(|&m| group.conj(g, m)).collect();
        image.sort_unstable();
        if best.as_ref().is_none_or(|b| &image < b) {
            best = Some(image);
        }
    }
    best.expect("nonempty member list")
}

/// The family of graph subgroups of `G × Σ_n` attached to an indexing
/// system: one conjugacy-class representative per admissible `H`-set of
/// cardinality `n`, closed under subconjugacy.
pub fn family_of(
    lattice: &SubgroupLattice,
    ix: &IndexingSystem,
    n: usize,
    limits: &Limits,
) -> Result<Vec<GraphSubgroup>, GroupError> {
    let product = ProductWithSymmetric::build(lattice, n, limits)?;
    let mut by_class: BTreeMap<Vec<usize>, GraphSubgroup> = BTreeMap::new();

    for level in lattice.ids() {
        for t in admissible_sets_of_cardinality(lattice, ix, level, n) {
            let graph = graph_subgroup(lattice, &product, level, &t, Some(ix))
                .expect("enumerated sets are admissible");
            let class = conjugacy_class_rep(&product, &graph.members);
            by_class.entry(class).or_insert(graph);
        }
    }

    // close under subconjugacy: subgroups of graphs are graphs again
    let mut worklist: Vec<Vec<usize>> = by_class.values().map(|g| g.members.clone()).collect();
    while let Some(members) = worklist.pop() {
        for sub_members in subgroups_within(&product.group, &members) {
            let class = conjugacy_class_rep(&product, &sub_members);
            if by_class.contains_key(&class) {
                continue;
            }
            let graph = graph_from_members(lattice, &product, &sub_members);
            by_class.insert(class, graph);
            worklist.push(sub_members);
        }
    }

    Ok(by_class.into_values().sorted().collect())
}

/// Reconstructs the graph data (level and unordered `H`-set) of a
/// subgroup of `G × Σ_n` meeting `{1} × Σ_n` trivially.
fn graph_from_members(
    lattice: &SubgroupLattice,
    product: &ProductWithSymmetric,
    members: &[usize],
) -> GraphSubgroup {
    let mut sigma_of: BTreeMap<usize, Permutation> = BTreeMap::new();
    let mut level_members: BTreeSet<usize> = BTreeSet::new();
    for &m in members {
        let (g, sigma) = product.split(m);
        let g_index = lattice
            .group()
            .element_index(&g)
            .expect("G part is a group element");
        assert!(
            sigma_of.insert(g_index, sigma).is_none(),
            "member set is not a graph: repeated G part"
        );
        level_members.insert(g_index);
    }
    let level_list: Vec<usize> = level_members.into_iter().collect();
    let level = lattice
        .by_members(&level_list)
        .expect("projection is a subgroup");
    let act: Vec<Vec<usize>> = level_list
        .iter()
        .map(|g| sigma_of[g].images().to_vec())
        .collect();
    let gset = crate::gset::decompose_action(lattice, level, product.n, &act);
    GraphSubgroup {
        level,
        gset,
        members: members.to_vec(),
    }
}

/// All admissible `H`-sets of total cardinality `n` (multisets of
/// admissible orbits), in deterministic order.
fn admissible_sets_of_cardinality(
    lattice: &SubgroupLattice,
    ix: &IndexingSystem,
    level: SubgroupId,
    n: usize,
) -> Vec<GSet> {
    let orbit_types: Vec<(SubgroupId, usize)> = lattice
        .classes_at(level)
        .reps()
        .iter()
        .filter(|&&k| ix.is_orbit_admissible(lattice, level, k))
        .map(|&k| (k, lattice.index_in(k, level)))
        .collect();
    let mut out = Vec::new();
    let mut current: Vec<(SubgroupId, usize)> = Vec::new();
    fn recurse(
        types: &[(SubgroupId, usize)],
        remaining: usize,
        current: &mut Vec<(SubgroupId, usize)>,
        level: SubgroupId,
        out: &mut Vec<GSet>,
    ) {
        if remaining == 0 {
            out.push(GSet::from_orbits(level, current.clone()));
            return;
        }
        let Some((&(stab, size), rest)) = types.split_first() else {
            return;
        };
        let max_count = remaining / size;
        for count in (0..=max_count).rev() {
            if count > 0 {
                current.push((stab, count));
            }
            recurse(rest, remaining - count * size, current, level, out);
            if count > 0 {
                current.pop();
            }
        }
    }
    recurse(&orbit_types, n, &mut current, level, &mut out);
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;

    fn lattice(name: &str, degree: usize, cycles: &[&[usize]]) -> Arc<SubgroupLattice> {
        let gens = cycles
            .iter()
            .map(|c| Permutation::from_cycles(degree, &[c.to_vec()]).unwrap())
            .collect();
        let group = FiniteGroup::new(name, degree, gens, &Limits::default()).unwrap();
        SubgroupLattice::build(group, &Limits::default()).unwrap()
    }

    fn c2() -> Arc<SubgroupLattice> {
        lattice("C2", 2, &[&[0, 1]])
    }

    #[test]
    fn trivial_sets_give_product_with_trivial_sigma() {
        let lat = c2();
        let product = ProductWithSymmetric::build(&lat, 2, &Limits::default()).unwrap();
        let t = GSet::from_orbits(lat.full(), vec![(lat.full(), 2)]);
        let graph = graph_subgroup(&lat, &product, lat.full(), &t, None).unwrap();
        // Γ = H × {1}: each member has trivial Σ part
        assert_eq!(graph.members.len(), 2);
        for &m in &graph.members {
            assert!(product.split(m).1.is_identity());
        }
        assert!(graph.intersects_symmetric_trivially(&product));
    }

    #[test]
    fn free_c2_set_gives_the_nontrivial_graph() {
        let lat = c2();
        let product = ProductWithSymmetric::build(&lat, 2, &Limits::default()).unwrap();
        let t = GSet::orbit(&lat, lat.full(), lat.trivial());
        let graph = graph_subgroup(&lat, &product, lat.full(), &t, None).unwrap();
        assert_eq!(graph.members.len(), 2);
        assert!(graph.intersects_symmetric_trivially(&product));
        // the nonidentity member pairs the flip with the swap
        let nontrivial = graph.members.iter().find(|&&m| m != 0).unwrap();
        let (g, sigma) = product.split(*nontrivial);
        assert!(!g.is_identity());
        assert!(!sigma.is_identity());
    }

    #[test]
    fn complete_family_on_c2_contains_both_homomorphism_graphs() {
        let lat = c2();
        let complete = IndexingSystem::complete(&lat);
        let family = family_of(&lat, &complete, 2, &Limits::default()).unwrap();
        let product = ProductWithSymmetric::build(&lat, 2, &Limits::default()).unwrap();
        // graphs at level C2 with 2 elements: trivial hom (2 fixed points)
        // and the regular action
        let level_c2: Vec<&GraphSubgroup> = family
            .iter()
            .filter(|g| g.level == lat.full() && g.members.len() == 2)
            .collect();
        assert_eq!(level_c2.len(), 2);
        for graph in &family {
            assert!(graph.intersects_symmetric_trivially(&product));
        }
    }

    #[test]
    fn family_is_closed_under_subconjugacy_and_contains_levels() {
        let lat = lattice("C4", 4, &[&[0, 1, 2, 3]]);
        for ix in [IndexingSystem::trivial(&lat), IndexingSystem::complete(&lat)] {
            for n in 1..=3 {
                let family = family_of(&lat, &ix, n, &Limits::default()).unwrap();
                let product = ProductWithSymmetric::build(&lat, n, &Limits::default()).unwrap();
                let classes: BTreeSet<Vec<usize>> = family
                    .iter()
                    .map(|g| conjugacy_class_rep(&product, &g.members))
                    .collect();
                for graph in &family {
                    assert!(graph.intersects_symmetric_trivially(&product));
                    // every subgroup's class is present
                    for sub in subgroups_within(&product.group, &graph.members) {
                        assert!(classes.contains(&conjugacy_class_rep(&product, &sub)));
                    }
                }
                // H × {1} for every subgroup H: from the trivial n-point set
                for level in lat.ids() {
                    let t = GSet::from_orbits(level, vec![(level, n)]);
                    let g = graph_subgroup(&lat, &product, level, &t, Some(&ix)).unwrap();
                    assert!(classes.contains(&conjugacy_class_rep(&product, &g.members)));
                }
            }
        }
    }
}
