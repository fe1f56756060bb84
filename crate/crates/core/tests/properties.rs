//! Cross-checks of the orbit-formula paths against element-level oracle
//! routes, plus the structural invariants of the calculus.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use equinorm::gset::GSet;
use equinorm::indexing::IndexingSystem;
use equinorm::normalize::{exponents, normalize, step_rewrite, RewriteRule};
use equinorm::presets;
use equinorm::rep::{hom_dim, Rep};
use equinorm::subgroup::{SubgroupId, SubgroupLattice};
use equinorm::Limits;
use equinorm_oracle as oracle;
use equinorm_oracle::sample;

fn lat(name: &str) -> Arc<SubgroupLattice> {
    let g = presets::group(name, &Limits::default()).unwrap().unwrap();
    SubgroupLattice::build(g, &Limits::default()).unwrap()
}

/// All G-sets at a level with cardinality at most `max`.
fn gsets_up_to(lattice: &SubgroupLattice, level: SubgroupId, max: usize) -> Vec<GSet> {
    let types: Vec<(SubgroupId, usize)> = lattice
        .classes_at(level)
        .reps()
        .iter()
        .map(|&k| (k, lattice.index_in(k, level)))
        .collect();
    let mut out = vec![Vec::new()];
    for &(stab, size) in &types {
        let mut grown = Vec::new();
        for partial in &out {
            let used: usize = partial
                .iter()
                .map(|&(s, m): &(SubgroupId, usize)| lattice.index_in(s, level) * m)
                .sum();
            let mut count = 0;
            while used + count * size <= max {
                let mut next = partial.clone();
                if count > 0 {
                    next.push((stab, count));
                }
                grown.push(next);
                count += 1;
            }
        }
        out = grown;
    }
    out.into_iter()
        .map(|orbits| GSet::from_orbits(level, orbits))
        .collect()
}

#[test]
fn restriction_agrees_with_element_level_orbits_everywhere() {
    for name in ["C4", "C6", "S3", "D4", "Q8"] {
        let lat = lat(name);
        for level in lat.ids() {
            for t in gsets_up_to(&lat, level, 8) {
                let raw = oracle::realize_gset(&lat, &t);
                for k in lat.ids() {
                    if !lat.leq(k, level) {
                        continue;
                    }
                    let formula = t.restrict(&lat, k).unwrap();
                    let element = oracle::decompose(&lat, &oracle::restrict_action(&lat, &raw, k));
                    assert_eq!(formula, element, "{name}: restrict mismatch");
                }
            }
        }
    }
}

#[test]
fn induction_agrees_with_balanced_products() {
    for name in ["C4", "C6", "S3", "D4"] {
        let lat = lat(name);
        for level in lat.ids() {
            for t in gsets_up_to(&lat, level, 6) {
                let raw = oracle::realize_gset(&lat, &t);
                for h in lat.ids() {
                    if !lat.leq(level, h) {
                        continue;
                    }
                    let formula = t.induce(&lat, h).unwrap();
                    let element = oracle::decompose(&lat, &oracle::induce_action(&lat, &raw, h));
                    assert_eq!(formula, element, "{name}: induce mismatch");
                }
            }
        }
    }
}

#[test]
fn three_way_agreement_for_restricted_inductions() {
    // formula route, double-coset decomposition route, and element route
    for name in ["S3", "D4", "Q8"] {
        let lat = lat(name);
        for k_level in lat.ids() {
            for t in gsets_up_to(&lat, k_level, 4) {
                if t.is_empty() {
                    continue;
                }
                let induced = t.induce(&lat, lat.full()).unwrap();
                for j in lat.ids() {
                    if !lat.leq(j, lat.full()) {
                        continue;
                    }
                    let formula = induced.restrict(&lat, j).unwrap();
                    let raw = oracle::realize_gset(&lat, &induced);
                    let element =
                        oracle::decompose(&lat, &oracle::restrict_action(&lat, &raw, j));
                    assert_eq!(formula, element, "{name}: three-way mismatch");
                }
            }
        }
    }
}

#[test]
fn marks_are_injective_at_desk_scale() {
    // distinct orbit multisets give distinct mark vectors, exhaustively
    for name in ["C2", "C3", "C4", "C6", "C8", "S3", "D4", "Q8", "A4"] {
        let lat = lat(name);
        let all = gsets_up_to(&lat, lat.full(), 8);
        let mut seen = std::collections::BTreeMap::new();
        for t in &all {
            let marks: Vec<u64> = t.marks(&lat).entries.iter().map(|&(_, n)| n).collect();
            if let Some(previous) = seen.insert(marks, t.clone()) {
                panic!("{name}: mark collision between {previous:?} and {t:?}");
            }
        }
    }
}

#[test]
fn mark_vectors_match_the_oracle_and_decrease_along_subconjugacy() {
    for name in ["S3", "D4", "Q8"] {
        let lat = lat(name);
        for t in gsets_up_to(&lat, lat.full(), 6) {
            let marks = t.marks(&lat);
            let raw = oracle::realize_gset(&lat, &t);
            let oracle_marks = oracle::marks_of_action(&lat, &raw);
            assert_eq!(marks.entries, oracle_marks);
            // top entry is the cardinality; subconjugate classes dominate
            assert_eq!(marks.total() as usize, t.cardinality(&lat));
            for &(class_a, count_a) in &marks.entries {
                for &(class_b, count_b) in &marks.entries {
                    if lat.subconjugate_witness(class_a, class_b).is_some() {
                        assert!(count_a >= count_b);
                    }
                }
            }
        }
    }
}

#[test]
fn hom_dim_matches_burnside_orbit_counts() {
    for name in ["C2", "C4", "S3", "C6"] {
        let lat = lat(name);
        let shapes = gsets_up_to(&lat, lat.full(), 6);
        for x in &shapes {
            for y in &shapes {
                if x.is_empty() || y.is_empty() {
                    continue;
                }
                let dim = hom_dim(
                    &lat,
                    &Rep::permutation(&lat, x),
                    &Rep::permutation(&lat, y),
                )
                .unwrap();
                let product = oracle::product_action(
                    &oracle::realize_gset(&lat, x),
                    &oracle::realize_gset(&lat, y),
                );
                assert_eq!(dim, oracle::orbit_count(&product), "{name}");
            }
        }
    }
}

#[test]
fn rewrite_rules_preserve_exponents_on_random_expressions() {
    for name in ["C4", "S3", "C6"] {
        let lat = lat(name);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..200 {
            let level_ids: Vec<SubgroupId> = lat.ids().collect();
            let level = level_ids[rng.gen_range(0..level_ids.len())];
            let expr = sample::random_expr(&mut rng, &lat, level, 3);
            let reference = exponents(&lat, &expr).unwrap();
            for rule in RewriteRule::ALL {
                if let Ok(rewritten) = step_rewrite(&lat, &expr, rule) {
                    let after = exponents(&lat, &rewritten).unwrap();
                    assert_eq!(
                        reference.exponents,
                        after.exponents,
                        "{name}: rule {} unsound",
                        rule.name()
                    );
                }
            }
            // and the full normalization agrees with the element oracle
            let normalized = normalize(&lat, &expr).unwrap();
            let oracle_exponents = oracle::exponent_gsets(&lat, &expr);
            assert_eq!(normalized.canonical.exponents, oracle_exponents, "{name}");
        }
    }
}

#[test]
fn generate_is_extensive_monotone_idempotent_on_random_inputs() {
    for name in ["C4", "C6", "S3", "D4"] {
        let lat = lat(name);
        let mut rng = ChaCha8Rng::seed_from_u64(0xc105);
        let mut pairs: Vec<(SubgroupId, SubgroupId)> = Vec::new();
        for h in lat.ids() {
            for k in lat.ids() {
                if lat.leq(k, h) {
                    pairs.push((h, k));
                }
            }
        }
        for _ in 0..20 {
            let count = rng.gen_range(0..=3);
            let declared: Vec<(SubgroupId, SubgroupId)> = (0..count)
                .map(|_| pairs[rng.gen_range(0..pairs.len())])
                .collect();
            let closed = IndexingSystem::generate(&lat, &declared).unwrap();
            assert!(closed.validate(&lat).passed());
            for &(h, k) in &declared {
                assert!(closed.is_orbit_admissible(&lat, h, k));
            }
            let reclosed =
                IndexingSystem::generate(&lat, &closed.pairs().collect::<Vec<_>>()).unwrap();
            assert_eq!(closed, reclosed);
            // monotone in the declared set
            if !declared.is_empty() {
                let smaller =
                    IndexingSystem::generate(&lat, &declared[..declared.len() - 1]).unwrap();
                assert!(smaller.leq(&closed).unwrap());
            }
        }
    }
}

#[test]
fn enumerate_all_matches_brute_force_on_small_groups() {
    for name in ["trivial", "C2", "C3", "C4", "S3", "C6", "C8"] {
        let lat = lat(name);
        let fast = equinorm::indexing::enumerate_all(&lat, &Limits::default()).unwrap();
        let brute = oracle::enumerate_indexing_bruteforce(&lat);
        assert_eq!(fast, brute, "{name}");
    }
}

#[test]
fn gmap_counts_match_brute_force_on_small_realizations() {
    for name in ["C4", "S3"] {
        let lat = lat(name);
        let shapes = gsets_up_to(&lat, lat.full(), 6);
        for s in &shapes {
            for t in &shapes {
                let rs = s.realize(&lat);
                let rt = t.realize(&lat);
                if rs.points() > 6 || rt.points() > 6 || rt.points() == 0 {
                    continue;
                }
                let fast = equinorm::gmaps(&lat, &rs, &rt).unwrap();
                // brute force over all assignments
                let members = lat.subgroup(lat.full()).members().len();
                let mut brute = 0usize;
                let mut assignment = vec![0usize; rs.points()];
                loop {
                    let ok = (0..rs.points()).all(|p| {
                        (0..members)
                            .all(|pos| assignment[rs.apply(pos, p)] == rt.apply(pos, assignment[p]))
                    });
                    if ok {
                        brute += 1;
                    }
                    let mut i = 0;
                    loop {
                        if i == assignment.len() {
                            break;
                        }
                        assignment[i] += 1;
                        if assignment[i] < rt.points() {
                            break;
                        }
                        assignment[i] = 0;
                        i += 1;
                    }
                    if i == assignment.len() {
                        break;
                    }
                }
                if rs.points() == 0 {
                    brute = 1;
                }
                assert_eq!(fast.len(), brute, "{name}");
                // mono flags agree with injectivity
                for m in &fast {
                    let distinct: BTreeSet<usize> = m.assignment.iter().copied().collect();
                    assert_eq!(m.is_mono(), distinct.len() == m.assignment.len());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coproduct_is_commutative_and_cardinality_additive(
        seed in any::<u64>(),
    ) {
        let lat = lat("D4");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let level_ids: Vec<SubgroupId> = lat.ids().collect();
        let level = level_ids[(seed as usize) % level_ids.len()];
        let a = sample::random_gset(&mut rng, &lat, level, 3, 8, true);
        let b = sample::random_gset(&mut rng, &lat, level, 3, 8, true);
        let ab = a.coproduct(&b).unwrap();
        let ba = b.coproduct(&a).unwrap();
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(
            ab.cardinality(&lat),
            a.cardinality(&lat) + b.cardinality(&lat)
        );
        // marks are additive
        prop_assert_eq!(ab.marks(&lat), a.marks(&lat).plus(&b.marks(&lat)));
    }

    #[test]
    fn restriction_is_strong_monoidal_on_random_gsets(seed in any::<u64>()) {
        let lat = lat("S3");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::random_gset(&mut rng, &lat, lat.full(), 2, 6, true);
        let b = sample::random_gset(&mut rng, &lat, lat.full(), 2, 6, true);
        for k in lat.ids() {
            let union = a.coproduct(&b).unwrap().restrict(&lat, k).unwrap();
            let parts = a
                .restrict(&lat, k).unwrap()
                .coproduct(&b.restrict(&lat, k).unwrap()).unwrap();
            prop_assert_eq!(union, parts);
            let product = a.product(&lat, &b).unwrap().restrict(&lat, k).unwrap();
            let parts = a
                .restrict(&lat, k).unwrap()
                .product(&lat, &b.restrict(&lat, k).unwrap()).unwrap();
            prop_assert_eq!(product, parts);
        }
    }

    #[test]
    fn projection_formula_holds_on_random_instances(seed in any::<u64>()) {
        let lat = lat("D4");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let subs: Vec<SubgroupId> = lat.ids().collect();
        let k = subs[(seed as usize) % subs.len()];
        let t = sample::random_gset(&mut rng, &lat, lat.full(), 2, 6, true);
        let s = sample::random_gset(&mut rng, &lat, k, 2, 4, true);
        let lhs = t
            .restrict(&lat, k).unwrap()
            .product(&lat, &s).unwrap()
            .induce(&lat, lat.full()).unwrap();
        let rhs = t
            .product(&lat, &s.induce(&lat, lat.full()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
