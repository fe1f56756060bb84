use std::sync::Arc;

use crate::error::GroupError;
use crate::group::FiniteGroup;
use crate::gset::GSet;
use crate::limits::Limits;
use crate::perm::Permutation;
use crate::rep::{Rep, Universe};
use crate::subgroup::SubgroupLattice;

/// Names of the shipped group presets.
pub const GROUP_PRESETS: [&str; 11] = [
    "trivial", "C2", "C3", "C4", "C6", "C8", "S3", "D4", "Q8", "A4", "S4",
];

fn cycle(degree: usize, points: &[usize]) -> Permutation {
    Permutation::from_cycles(degree, &[points.to_vec()]).expect("preset cycle")
}

/// Builds a preset group by name.
pub fn group(name: &str, limits: &Limits) -> Option<Result<Arc<FiniteGroup>, GroupError>> {
    let (degree, generators): (usize, Vec<Permutation>) = match name {
        "trivial" => (1, vec![]),
        "C2" => (2, vec![cycle(2, &[0, 1])]),
        "C3" => (3, vec![cycle(3, &[0, 1, 2])]),
        "C4" => (4, vec![cycle(4, &[0, 1, 2, 3])]),
        "C6" => (6, vec![cycle(6, &[0, 1, 2, 3, 4, 5])]),
        "C8" => (8, vec![cycle(8, &[0, 1, 2, 3, 4, 5, 6, 7])]),
        "S3" => (3, vec![cycle(3, &[0, 1, 2]), cycle(3, &[0, 1])]),
        "D4" => (4, vec![cycle(4, &[0, 1, 2, 3]), cycle(4, &[1, 3])]),
        // the left regular representation on 1, -1, i, -i, j, -j, k, -k
        "Q8" => (
            8,
            vec![
                Permutation::from_images(vec![2, 3, 1, 0, 6, 7, 5, 4]).expect("i"),
                Permutation::from_images(vec![4, 5, 7, 6, 1, 0, 2, 3]).expect("j"),
            ],
        ),
        "A4" => (
            4,
            vec![
                cycle(4, &[0, 1, 2]),
                Permutation::from_cycles(4, &[vec![0, 1], vec![2, 3]]).expect("double swap"),
            ],
        ),
        "S4" => (4, vec![cycle(4, &[0, 1, 2, 3]), cycle(4, &[0, 1])]),
        _ => return None,
    };
    Some(FiniteGroup::new(name, degree, generators, limits))
}

/// Universe preset kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UniverseKind {
    Trivial,
    Complete,
    Mixed,
}

/// Parses a universe preset name of the form `trivial-<G>`,
/// `complete-<G>` or `<G>-mixed`.
pub fn parse_universe_preset(name: &str) -> Option<(UniverseKind, &str)> {
    if let Some(group) = name.strip_prefix("trivial-") {
        return Some((UniverseKind::Trivial, group));
    }
    if let Some(group) = name.strip_prefix("complete-") {
        return Some((UniverseKind::Complete, group));
    }
    if let Some(group) = name.strip_suffix("-mixed") {
        return Some((UniverseKind::Mixed, group));
    }
    None
}

/// Builds a preset universe over an already-built lattice.
///
/// The mixed universe is generated by the permutation representation on
/// the cosets of the first proper nontrivial subgroup class; groups
/// without one (the trivial group and prime cyclic groups) fall back to
/// the regular representation.
pub fn universe(lattice: &Arc<SubgroupLattice>, kind: UniverseKind) -> Universe {
    match kind {
        UniverseKind::Trivial => Universe::trivial(lattice),
        UniverseKind::Complete => Universe::complete(lattice),
        UniverseKind::Mixed => {
            let proper = lattice
                .classes()
                .reps()
                .iter()
                .copied()
                .find(|&h| lattice.order(h) > 1 && h != lattice.full());
            let generator = match proper {
                Some(k) => GSet::orbit(lattice, lattice.full(), k),
                None => GSet::orbit(lattice, lattice.full(), lattice.trivial()),
            };
            Universe::new(lattice, vec![Rep::permutation(lattice, &generator)])
                .expect("preset reps live at the full group")
                .with_name("mixed")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_orders_are_right() {
        let expected = [
            ("trivial", 1),
            ("C2", 2),
            ("C3", 3),
            ("C4", 4),
            ("C6", 6),
            ("C8", 8),
            ("S3", 6),
            ("D4", 8),
            ("Q8", 8),
            ("A4", 12),
            ("S4", 24),
        ];
        for (name, order) in expected {
            let g = group(name, &Limits::default()).unwrap().unwrap();
            assert_eq!(g.order(), order, "{name}");
        }
    }

    #[test]
    fn q8_has_a_unique_minimal_subgroup() {
        // the quaternion group: one subgroup of order 2, three of order 4
        let g = group("Q8", &Limits::default()).unwrap().unwrap();
        let lat = SubgroupLattice::build(g, &Limits::default()).unwrap();
        let order2 = lat.ids().filter(|&id| lat.order(id) == 2).count();
        let order4 = lat.ids().filter(|&id| lat.order(id) == 4).count();
        assert_eq!((order2, order4), (1, 3));
        assert_eq!(lat.len(), 6);
    }

    #[test]
    fn universe_preset_names_parse() {
        assert_eq!(
            parse_universe_preset("trivial-C4"),
            Some((UniverseKind::Trivial, "C4"))
        );
        assert_eq!(
            parse_universe_preset("complete-S3"),
            Some((UniverseKind::Complete, "S3"))
        );
        assert_eq!(
            parse_universe_preset("C4-mixed"),
            Some((UniverseKind::Mixed, "C4"))
        );
        assert_eq!(parse_universe_preset("bogus"), None);
    }

    #[test]
    fn mixed_c4_universe_uses_the_index_two_orbit() {
        let g = group("C4", &Limits::default()).unwrap().unwrap();
        let lat = SubgroupLattice::build(g, &Limits::default()).unwrap();
        let u = universe(&lat, UniverseKind::Mixed);
        assert_eq!(u.generators().len(), 1);
        assert_eq!(u.generators()[0].dim(), 2);
    }

    #[test]
    fn a4_lattice_shape() {
        // 1 + 3 + 4 + 1 + 1 = 10 subgroups: e, three C2, four C3, V4, A4
        let g = group("A4", &Limits::default()).unwrap().unwrap();
        let lat = SubgroupLattice::build(g, &Limits::default()).unwrap();
        assert_eq!(lat.len(), 10);
        assert_eq!(lat.classes().reps().len(), 5);
    }
}
