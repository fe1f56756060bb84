use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{GroupError, IndexingError, RepError};
use crate::gmap::GMap;
use crate::group::FiniteGroup;
use crate::gset::GSet;
use crate::indexing::IndexingSystem;
use crate::limits::Limits;
use crate::perm::Permutation;
use crate::qmat::{q_from_str, q_to_string, QMat};
use crate::rep::{Rep, Universe};
use crate::span::Span;
use crate::subgroup::{SubgroupId, SubgroupLattice};

/// Group definition file: permutation generators by image lists.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

pub fn group_from_file(file: &GroupFile, limits: &Limits) -> Result<Arc<FiniteGroup>, GroupError> {
    let generators = file
        .generators
        .iter()
        .map(|images| Permutation::from_images(images.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    FiniteGroup::new(file.name.clone(), file.degree, generators, limits)
}

pub fn group_to_file(group: &FiniteGroup) -> GroupFile {
    GroupFile {
        name: group.name().to_string(),
        degree: group.degree(),
        generators: group
            .generators()
            .iter()
            .map(|g| g.images().to_vec())
            .collect(),
    }
}

/// Canonical JSON form of a G-set: the level's member list plus sorted
/// `(stabilizer member list, multiplicity)` pairs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GSetForm {
    pub level: Vec<usize>,
    pub orbits: Vec<OrbitForm>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct OrbitForm {
    pub stabilizer: Vec<usize>,
    pub multiplicity: usize,
}

pub fn gset_to_form(lattice: &SubgroupLattice, gset: &GSet) -> GSetForm {
    GSetForm {
        level: lattice.subgroup(gset.level()).members().to_vec(),
        orbits: gset
            .orbits()
            .iter()
            .map(|&(stab, mult)| OrbitForm {
                stabilizer: lattice.subgroup(stab).members().to_vec(),
                multiplicity: mult,
            })
            .collect(),
    }
}

pub fn gset_from_form(
    lattice: &SubgroupLattice,
    form: &GSetForm,
) -> Result<GSet, IndexingError> {
    let level = lattice
        .by_members(&form.level)
        .ok_or_else(|| IndexingError::UnknownClass(format!("{:?}", form.level)))?;
    let mut orbits = Vec::new();
    for orbit in &form.orbits {
        let stab = lattice
            .by_members(&orbit.stabilizer)
            .ok_or_else(|| IndexingError::UnknownClass(format!("{:?}", orbit.stabilizer)))?;
        if !lattice.leq(stab, level) {
            return Err(IndexingError::NotContained(
                lattice.subgroup(stab).canonical_id(),
                lattice.subgroup(level).canonical_id(),
            ));
        }
        orbits.push((lattice.classes_at(level).rep_of(stab), orbit.multiplicity));
    }
    Ok(GSet::from_orbits(level, orbits))
}

/// Indexing-system file: `{ "group": name, "admissible": { H_id: [K_id, ...] } }`
/// with canonical dotted member-list ids.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexingFile {
    pub group: String,
    pub admissible: BTreeMap<String, Vec<String>>,
}

fn parse_canonical_id(
    lattice: &SubgroupLattice,
    id: &str,
) -> Result<SubgroupId, IndexingError> {
    let members: Result<Vec<usize>, _> = id.split('.').map(|p| p.trim().parse::<usize>()).collect();
    let members = members.map_err(|_| IndexingError::UnknownClass(id.to_string()))?;
    lattice
        .by_members(&members)
        .ok_or_else(|| IndexingError::UnknownClass(id.to_string()))
}

pub fn indexing_to_file(lattice: &SubgroupLattice, ix: &IndexingSystem) -> IndexingFile {
    let mut admissible: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for &h in lattice.classes().reps() {
        let ks = ix
            .admissible_at(h)
            .iter()
            .map(|&k| lattice.subgroup(k).canonical_id())
            .collect();
        admissible.insert(lattice.subgroup(h).canonical_id(), ks);
    }
    IndexingFile {
        group: ix.group_name().to_string(),
        admissible,
    }
}

pub fn indexing_from_file(
    lattice: &SubgroupLattice,
    file: &IndexingFile,
) -> Result<IndexingSystem, IndexingError> {
    let mut pairs = Vec::new();
    let mut seen_classes = Vec::new();
    for (h_id, ks) in &file.admissible {
        let h = parse_canonical_id(lattice, h_id)?;
        seen_classes.push(lattice.classes().rep_of(h));
        for k_id in ks {
            let k = parse_canonical_id(lattice, k_id)?;
            if !lattice.leq(k, h) {
                return Err(IndexingError::NotContained(k_id.clone(), h_id.clone()));
            }
            pairs.push((h, k));
        }
    }
    for &class in lattice.classes().reps() {
        if !seen_classes.contains(&class) {
            return Err(IndexingError::MissingClass(
                lattice.subgroup(class).canonical_id(),
            ));
        }
    }
    IndexingSystem::from_pairs(lattice, pairs)
}

/// Universe file: perm generators by G-set form, matrix generators by
/// `p/q` strings (one matrix per group generator).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UniverseFile {
    pub group: String,
    pub generators: Vec<UniverseGenerator>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum UniverseGenerator {
    Perm { gset: GSetForm },
    Matrix {
        dimension: usize,
        matrices: Vec<Vec<Vec<String>>>,
    },
}

pub fn universe_from_file(
    lattice: &SubgroupLattice,
    file: &UniverseFile,
) -> Result<Universe, RepError> {
    let mut reps = Vec::new();
    for gen in &file.generators {
        match gen {
            UniverseGenerator::Perm { gset } => {
                let gset = gset_from_form(lattice, gset)
                    .map_err(|e| RepError::BadRational(e.to_string()))?;
                if gset.level() != lattice.full() {
                    return Err(RepError::GroupMismatch);
                }
                reps.push(Rep::permutation(lattice, &gset));
            }
            UniverseGenerator::Matrix {
                dimension,
                matrices,
            } => {
                let group = lattice.group();
                let gens: Vec<usize> = group
                    .generators()
                    .iter()
                    .map(|g| group.element_index(g).expect("generator is an element"))
                    .collect();
                if matrices.len() != gens.len() {
                    return Err(RepError::GeneratorCountMismatch {
                        expected: gens.len(),
                        found: matrices.len(),
                    });
                }
                let mut mats = Vec::new();
                for (index, rows) in matrices.iter().enumerate() {
                    if rows.len() != *dimension || rows.iter().any(|r| r.len() != *dimension) {
                        return Err(RepError::BadShape {
                            index,
                            dim: *dimension,
                        });
                    }
                    let mut mat = QMat::zeros(*dimension, *dimension);
                    for (r, row) in rows.iter().enumerate() {
                        for (c, entry) in row.iter().enumerate() {
                            *mat.at_mut(r, c) = q_from_str(entry)
                                .ok_or_else(|| RepError::BadRational(entry.clone()))?;
                        }
                    }
                    mats.push(mat);
                }
                reps.push(Rep::from_generator_matrices(
                    lattice,
                    lattice.full(),
                    gens,
                    mats,
                )?);
            }
        }
    }
    Universe::new(lattice, reps)
}

pub fn universe_to_file(lattice: &SubgroupLattice, universe: &Universe) -> UniverseFile {
    let generators = universe
        .generators()
        .iter()
        .map(|rep| {
            // permutation generators round-trip through their G-set; the
            // matrix fallback serializes generator matrices
            let gens = rep.generator_matrices(lattice);
            UniverseGenerator::Matrix {
                dimension: rep.dim(),
                matrices: gens
                    .iter()
                    .map(|(_, m)| {
                        (0..m.rows())
                            .map(|r| (0..m.cols()).map(|c| q_to_string(m.at(r, c))).collect())
                            .collect()
                    })
                    .collect(),
            }
        })
        .collect();
    UniverseFile {
        group: lattice.group().name().to_string(),
        generators,
    }
}

/// Span file: boundary and apex G-sets (realized canonically) plus leg
/// assignment arrays; point labels are included on output for
/// readability and ignored on input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpanFile {
    pub group: String,
    pub left_target: GSetForm,
    pub right_target: GSetForm,
    pub apex: GSetForm,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub apex_points: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub left_points: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub right_points: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum SpanFileError {
    #[error(transparent)]
    Indexing(#[from] IndexingError),
    #[error(transparent)]
    GSet(#[from] crate::error::GSetError),
    #[error(transparent)]
    Span(#[from] crate::error::SpanError),
}

pub fn span_from_file(
    lattice: &SubgroupLattice,
    file: &SpanFile,
) -> Result<Span, SpanFileError> {
    let apex = gset_from_form(lattice, &file.apex)?.realize(lattice);
    let left_target = gset_from_form(lattice, &file.left_target)?.realize(lattice);
    let right_target = gset_from_form(lattice, &file.right_target)?.realize(lattice);
    let left = GMap::new(lattice, apex.clone(), left_target, file.left.clone())?;
    let right = GMap::new(lattice, apex, right_target, file.right.clone())?;
    Ok(Span::new(left, right)?)
}

pub fn span_to_file(lattice: &SubgroupLattice, span: &Span) -> SpanFile {
    SpanFile {
        group: lattice.group().name().to_string(),
        left_target: gset_to_form(lattice, &span.left.target.gset),
        right_target: gset_to_form(lattice, &span.right.target.gset),
        apex: gset_to_form(lattice, &span.apex().gset),
        left: span.left.assignment.clone(),
        right: span.right.assignment.clone(),
        apex_points: span.apex().labels.clone(),
        left_points: span.left.target.labels.clone(),
        right_points: span.right.target.labels.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4_lattice() -> Arc<SubgroupLattice> {
        let gen = Permutation::from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap();
        let group = FiniteGroup::new("C4", 4, vec![gen], &Limits::default()).unwrap();
        SubgroupLattice::build(group, &Limits::default()).unwrap()
    }

    #[test]
    fn group_files_round_trip() {
        let lat = c4_lattice();
        let file = group_to_file(lat.group());
        let rebuilt = group_from_file(&file, &Limits::default()).unwrap();
        assert_eq!(rebuilt.elements(), lat.group().elements());
    }

    #[test]
    fn gset_forms_round_trip() {
        let lat = c4_lattice();
        let c2 = lat.ids().find(|&id| lat.order(id) == 2).unwrap();
        let gset = GSet::from_orbits(lat.full(), vec![(c2, 2), (lat.trivial(), 1)]);
        let form = gset_to_form(&lat, &gset);
        assert_eq!(gset_from_form(&lat, &form).unwrap(), gset);
        let json = serde_json::to_string(&form).unwrap();
        let parsed: GSetForm = serde_json::from_str(&json).unwrap();
        assert_eq!(gset_from_form(&lat, &parsed).unwrap(), gset);
    }

    #[test]
    fn indexing_files_round_trip_and_validate_coverage() {
        let lat = c4_lattice();
        let c2 = lat.ids().find(|&id| lat.order(id) == 2).unwrap();
        let ix = IndexingSystem::from_pairs(&lat, vec![(lat.full(), c2)]).unwrap();
        let file = indexing_to_file(&lat, &ix);
        assert_eq!(indexing_from_file(&lat, &file).unwrap(), ix);

        let mut broken = file.clone();
        broken.admissible.remove("0");
        assert!(matches!(
            indexing_from_file(&lat, &broken),
            Err(IndexingError::MissingClass(_))
        ));
        let mut unknown = file;
        unknown.admissible.insert("0.9".into(), vec![]);
        assert!(matches!(
            indexing_from_file(&lat, &unknown),
            Err(IndexingError::UnknownClass(_))
        ));
    }

    #[test]
    fn universe_files_round_trip_through_matrices() {
        let lat = c4_lattice();
        let c2 = lat.ids().find(|&id| lat.order(id) == 2).unwrap();
        let u = Universe::new(
            &lat,
            vec![Rep::permutation(
                &lat,
                &GSet::orbit(&lat, lat.full(), c2),
            )],
        )
        .unwrap();
        let file = universe_to_file(&lat, &u);
        let rebuilt = universe_from_file(&lat, &file).unwrap();
        // same admissibility behaviour even though the kind changed
        let ix1 = u.indexing_system(&lat).unwrap();
        let ix2 = rebuilt.indexing_system(&lat).unwrap();
        assert_eq!(ix1, ix2);
    }

    #[test]
    fn universe_file_rejects_bad_rationals() {
        let lat = c4_lattice();
        let file = UniverseFile {
            group: "C4".into(),
            generators: vec![UniverseGenerator::Matrix {
                dimension: 1,
                matrices: vec![vec![vec!["1/0".into()]]],
            }],
        };
        assert!(matches!(
            universe_from_file(&lat, &file),
            Err(RepError::BadRational(_))
        ));
    }

    #[test]
    fn span_files_round_trip() {
        let lat = c4_lattice();
        let free = GSet::orbit(&lat, lat.full(), lat.trivial()).realize(&lat);
        let pt = GSet::point(lat.full()).realize(&lat);
        let fold = GMap::new(&lat, free.clone(), pt, vec![0; free.points()]).unwrap();
        let span = Span::new(fold, GMap::identity(&free)).unwrap();
        let file = span_to_file(&lat, &span);
        let rebuilt = span_from_file(&lat, &file).unwrap();
        assert_eq!(rebuilt, span);
        // a non-equivariant assignment is rejected
        let mut broken = span_to_file(&lat, &span);
        broken.right[0] = broken.right[1];
        assert!(span_from_file(&lat, &broken).is_err());
    }
}
