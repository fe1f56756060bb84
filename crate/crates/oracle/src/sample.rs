//! Seeded random generators for property suites: G-sets, well-typed norm
//! expressions, and spans. All sampling is deterministic given the RNG
//! state.

use rand::prelude::*;

use equinorm::expr::NormExpr;
use equinorm::gmap::{gmaps, GMap};
use equinorm::gset::GSet;
use equinorm::span::Span;
use equinorm::subgroup::{SubgroupId, SubgroupLattice};

/// A random G-set at the level: up to `max_orbits` orbits, bounded total
/// cardinality. May be empty when `allow_empty` is set.
pub fn random_gset(
    rng: &mut impl Rng,
    lattice: &SubgroupLattice,
    level: SubgroupId,
    max_orbits: usize,
    max_cardinality: usize,
    allow_empty: bool,
) -> GSet {
    let reps = lattice.classes_at(level).reps().to_vec();
    let min_orbits = usize::from(!allow_empty);
    let orbit_count = rng.gen_range(min_orbits..=max_orbits);
    let mut orbits = Vec::new();
    let mut cardinality = 0usize;
    for _ in 0..orbit_count {
        let stab = reps[rng.gen_range(0..reps.len())];
        let size = lattice.index_in(stab, level);
        if cardinality + size > max_cardinality {
            continue;
        }
        cardinality += size;
        orbits.push((stab, 1));
    }
    if orbits.is_empty() && !allow_empty {
        orbits.push((level, 1));
    }
    GSet::from_orbits(level, orbits)
}

/// A random well-typed expression at the requested level, with bounded
/// depth and bounded exponent sizes.
pub fn random_expr(
    rng: &mut impl Rng,
    lattice: &SubgroupLattice,
    level: SubgroupId,
    depth: usize,
) -> NormExpr {
    if depth == 0 {
        return if level == lattice.full() {
            NormExpr::var("X")
        } else {
            NormExpr::res(level, NormExpr::var("X"))
        };
    }
    match rng.gen_range(0..10u8) {
        0 | 1 => {
            // res from a random overgroup
            let supers: Vec<SubgroupId> =
                lattice.ids().filter(|&h| lattice.leq(level, h)).collect();
            let source = supers[rng.gen_range(0..supers.len())];
            NormExpr::res(level, random_expr(rng, lattice, source, depth - 1))
        }
        2 | 3 => {
            // norm from a random subgroup
            let subs: Vec<SubgroupId> =
                lattice.ids().filter(|&k| lattice.leq(k, level)).collect();
            let source = subs[rng.gen_range(0..subs.len())];
            NormExpr::norm(level, random_expr(rng, lattice, source, depth - 1))
        }
        4 | 5 => {
            let arity = rng.gen_range(1..=3);
            NormExpr::Smash(
                (0..arity)
                    .map(|_| random_expr(rng, lattice, level, depth - 1))
                    .collect(),
            )
        }
        6 | 7 | 8 => {
            let t = random_gset(rng, lattice, level, 2, 4, false);
            NormExpr::npow(t, random_expr(rng, lattice, level, depth - 1))
        }
        _ => {
            if level == lattice.full() {
                NormExpr::var(if rng.gen_bool(0.5) { "X" } else { "Y" })
            } else {
                NormExpr::res(level, NormExpr::var("X"))
            }
        }
    }
}

/// A random equivariant map out of a realized G-set. The target is padded
/// with one fixed point, so a candidate image always exists; the choice
/// among enumerated maps is uniform.
pub fn random_gmap_into(
    rng: &mut impl Rng,
    lattice: &SubgroupLattice,
    source: &equinorm::gset::Realization,
    target_base: &GSet,
) -> (GSet, GMap) {
    let target = target_base
        .coproduct(&GSet::point(target_base.level()))
        .expect("same level");
    let target_real = target.realize(lattice);
    let maps = gmaps(lattice, source, &target_real).expect("same level");
    let choice = rng.gen_range(0..maps.len());
    (target, maps[choice].clone())
}

/// A random span at the level with bounded apex size.
pub fn random_span(
    rng: &mut impl Rng,
    lattice: &SubgroupLattice,
    level: SubgroupId,
    boundary_left: &GSet,
    boundary_right: &GSet,
) -> Span {
    let apex = random_gset(rng, lattice, level, 2, 6, false);
    let apex_real = apex.realize(lattice);
    let left_real = boundary_left.realize(lattice);
    let right_real = boundary_right.realize(lattice);
    let lefts = gmaps(lattice, &apex_real, &left_real).expect("same level");
    let rights = gmaps(lattice, &apex_real, &right_real).expect("same level");
    let left = lefts[rng.gen_range(0..lefts.len())].clone();
    let right = rights[rng.gen_range(0..rights.len())].clone();
    Span::new(left, right).expect("shared apex by construction")
}

/// A boundary G-set that accepts maps from anything: a random G-set with
/// a guaranteed fixed point.
pub fn random_receptive_gset(
    rng: &mut impl Rng,
    lattice: &SubgroupLattice,
    level: SubgroupId,
) -> GSet {
    random_gset(rng, lattice, level, 2, 4, true)
        .coproduct(&GSet::point(level))
        .expect("same level")
}
