use std::collections::BTreeMap;

use crate::subgroup::{SubgroupId, SubgroupLattice};

/// Human-readable, deterministic names for subgroup conjugacy classes.
///
/// The full group keeps its own name, the trivial subgroup is `e`, cyclic
/// classes are `C<order>`, order-4 non-cyclic classes are `V4`, and
/// anything else is `G<order>`. When several classes of a table share a
/// base name they get `a`, `b`, … suffixes in canonical order. The table
/// for the whole group names full-group classes; each level additionally
/// gets a table for its own (finer) classes, used for the `K` in orbit
/// literals `H/K`.
#[derive(Debug, Clone)]
pub struct Names {
    group_table: Table,
    level_tables: BTreeMap<SubgroupId, Table>,
}

#[derive(Debug, Clone, Default)]
struct Table {
    of: BTreeMap<SubgroupId, String>,
    by: BTreeMap<String, SubgroupId>,
}

fn is_cyclic(lattice: &SubgroupLattice, id: SubgroupId) -> bool {
    let sub = lattice.subgroup(id);
    sub.members()
        .iter()
        .any(|&m| lattice.group().element_order(m) == sub.order())
}

fn base_name(lattice: &SubgroupLattice, id: SubgroupId) -> String {
    let order = lattice.order(id);
    if order == 1 {
        return "e".into();
    }
    if id == lattice.full() {
        return lattice.group().name().to_string();
    }
    if is_cyclic(lattice, id) {
        format!("C{order}")
    } else if order == 4 {
        "V4".into()
    } else {
        format!("G{order}")
    }
}

fn build_table(lattice: &SubgroupLattice, reps: &[SubgroupId]) -> Table {
    let mut by_base: BTreeMap<String, Vec<SubgroupId>> = BTreeMap::new();
    for &rep in reps {
        by_base.entry(base_name(lattice, rep)).or_default().push(rep);
    }
    let mut table = Table::default();
    for (base, ids) in by_base {
        for (i, id) in ids.iter().enumerate() {
            let name = if ids.len() == 1 {
                base.clone()
            } else {
                format!("{base}{}", (b'a' + i as u8) as char)
            };
            table.of.insert(*id, name.clone());
            table.by.insert(name, *id);
        }
    }
    table
}

impl Names {
    pub fn build(lattice: &SubgroupLattice) -> Names {
        let group_table = build_table(lattice, lattice.classes().reps());
        let level_tables = lattice
            .ids()
            .map(|level| (level, build_table(lattice, lattice.classes_at(level).reps())))
            .collect();
        Names {
            group_table,
            level_tables,
        }
    }

    /// Name of a full-group class representative; non-representatives
    /// fall back to the member-list form `[a,b,c]`.
    pub fn of(&self, lattice: &SubgroupLattice, id: SubgroupId) -> String {
        self.group_table
            .of
            .get(&id)
            .cloned()
            .unwrap_or_else(|| explicit(lattice, id))
    }

    /// Name of a stabilizer class within the given level.
    pub fn stabilizer(&self, lattice: &SubgroupLattice, level: SubgroupId, id: SubgroupId) -> String {
        self.level_tables
            .get(&level)
            .and_then(|t| t.of.get(&id))
            .cloned()
            .unwrap_or_else(|| explicit(lattice, id))
    }

    /// Resolves a subgroup reference: a class name from the group table
    /// or an explicit member list `[0,2,..]`.
    pub fn resolve(&self, lattice: &SubgroupLattice, text: &str) -> Option<SubgroupId> {
        resolve_in(&self.group_table, lattice, text)
    }

    /// Resolves a stabilizer reference within a level.
    pub fn resolve_stabilizer(
        &self,
        lattice: &SubgroupLattice,
        level: SubgroupId,
        text: &str,
    ) -> Option<SubgroupId> {
        resolve_in(self.level_tables.get(&level)?, lattice, text)
    }

    /// All (id, name) rows of the group table in canonical order.
    pub fn group_rows(&self) -> impl Iterator<Item = (SubgroupId, &str)> {
        self.group_table.of.iter().map(|(&id, name)| (id, name.as_str()))
    }

    pub fn level_rows(&self, level: SubgroupId) -> impl Iterator<Item = (SubgroupId, &str)> {
        self.level_tables[&level]
            .of
            .iter()
            .map(|(&id, name)| (id, name.as_str()))
    }
}

fn explicit(lattice: &SubgroupLattice, id: SubgroupId) -> String {
    let members: Vec<String> = lattice
        .subgroup(id)
        .members()
        .iter()
        .map(|m| m.to_string())
        .collect();
    format!("[{}]", members.join(","))
}

fn resolve_in(table: &Table, lattice: &SubgroupLattice, text: &str) -> Option<SubgroupId> {
    let text = text.trim();
    if let Some(id) = table.by.get(text) {
        return Some(*id);
    }
    if let Some(inner) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let members: Option<Vec<usize>> = inner
            .split(',')
            .map(|p| p.trim().parse::<usize>().ok())
            .collect();
        let mut members = members?;
        members.sort_unstable();
        members.dedup();
        return lattice.by_members(&members);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::limits::Limits;
    use crate::perm::Permutation;
    use std::sync::Arc;

    fn lattice(name: &str, degree: usize, cycles: &[&[usize]]) -> Arc<SubgroupLattice> {
        let gens = cycles
            .iter()
            .map(|c| Permutation::from_cycles(degree, &[c.to_vec()]).unwrap())
            .collect();
        let group = FiniteGroup::new(name, degree, gens, &Limits::default()).unwrap();
        SubgroupLattice::build(group, &Limits::default()).unwrap()
    }

    #[test]
    fn s3_class_names() {
        let lat = lattice("S3", 3, &[&[0, 1, 2], &[0, 1]]);
        let names = Names::build(&lat);
        let all: Vec<String> = names.group_rows().map(|(_, n)| n.to_string()).collect();
        assert!(all.contains(&"e".to_string()));
        assert!(all.contains(&"C2".to_string()));
        assert!(all.contains(&"C3".to_string()));
        assert!(all.contains(&"S3".to_string()));
        assert_eq!(names.resolve(&lat, "C3").map(|id| lat.order(id)), Some(3));
    }

    #[test]
    fn d4_names_disambiguate() {
        let lat = lattice("D4", 4, &[&[0, 1, 2, 3], &[1, 3]]);
        let names = Names::build(&lat);
        let all: Vec<String> = names.group_rows().map(|(_, n)| n.to_string()).collect();
        let c2s = all.iter().filter(|n| n.starts_with("C2")).count();
        assert_eq!(c2s, 3, "three order-2 classes: {all:?}");
        assert!(all.contains(&"V4a".to_string()) && all.contains(&"V4b".to_string()));
        // round trip
        for (id, name) in names.group_rows() {
            assert_eq!(names.resolve(&lat, name), Some(id));
        }
    }

    #[test]
    fn explicit_member_lists_resolve() {
        let lat = lattice("C4", 4, &[&[0, 1, 2, 3]]);
        let names = Names::build(&lat);
        let c2 = lat.ids().find(|&id| lat.order(id) == 2).unwrap();
        let text = format!(
            "[{}]",
            lat.subgroup(c2)
                .members()
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        assert_eq!(names.resolve(&lat, &text), Some(c2));
        assert_eq!(names.resolve(&lat, "[0,3]"), None);
    }
}
