use std::collections::HashMap;
use std::sync::Arc;

use crate::error::GroupError;
use crate::limits::Limits;
use crate::perm::Permutation;

/// A finite group presented as a permutation group.
///
/// Elements are enumerated breadth-first from the identity, expanding by
/// generator index and ordering each new layer lexicographically, so the
/// element list (and hence every element index used downstream) is
/// reproducible across runs. The identity always has index 0.
#[derive(Debug)]
pub struct FiniteGroup {
    name: String,
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    cayley: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Generates the group from permutation generators.
    pub fn new(
        name: impl Into<String>,
        degree: usize,
        generators: Vec<Permutation>,
        limits: &Limits,
    ) -> Result<Arc<Self>, GroupError> {
        for (index, gen) in generators.iter().enumerate() {
            if gen.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    index,
                    expected: degree,
                    found: gen.degree(),
                });
            }
        }

        let identity = Permutation::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::new();
        index.insert(identity, 0usize);

        let mut frontier: Vec<usize> = vec![0];
        while !frontier.is_empty() {
            let mut layer: Vec<Permutation> = Vec::new();
            for &elem in &frontier {
                for gen in &generators {
                    let next = elements[elem].compose(gen);
                    if !index.contains_key(&next) && !layer.contains(&next) {
                        layer.push(next);
                    }
                }
            }
            layer.sort();
            frontier = Vec::new();
            for perm in layer {
                if index.contains_key(&perm) {
                    continue;
                }
                if elements.len() >= limits.max_elements {
                    return Err(GroupError::ElementCapExceeded {
                        cap: limits.max_elements,
                    });
                }
                let id = elements.len();
                index.insert(perm.clone(), id);
                elements.push(perm);
                frontier.push(id);
            }
        }

        let order = elements.len();
        let mut cayley = vec![vec![0usize; order]; order];
        for a in 0..order {
            for b in 0..order {
                cayley[a][b] = index[&elements[a].compose(&elements[b])];
            }
        }
        let inverse = (0..order)
            .map(|a| index[&elements[a].inverse()])
            .collect();

        Ok(Arc::new(FiniteGroup {
            name: name.into(),
            degree,
            generators,
            elements,
            index,
            cayley,
            inverse,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, id: usize) -> &Permutation {
        &self.elements[id]
    }

    pub fn element_index(&self, perm: &Permutation) -> Option<usize> {
        self.index.get(perm).copied()
    }

    /// Product of element indices: `mul(a, b) = a·b`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Conjugate `g·a·g⁻¹`.
    pub fn conj(&self, g: usize, a: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    /// Order of a single element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut n = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn trivial_group_has_one_element() {
        let g = FiniteGroup::new("trivial", 1, vec![], &limits()).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.element(0).is_identity());
    }

    #[test]
    fn s3_from_three_cycle_and_transposition() {
        let r = Permutation::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let s = Permutation::from_cycles(3, &[vec![0, 1]]).unwrap();
        let g = FiniteGroup::new("S3", 3, vec![r, s], &limits()).unwrap();
        assert_eq!(g.order(), 6);
        // identity first, and the table closes
        assert!(g.element(0).is_identity());
        for a in 0..6 {
            for b in 0..6 {
                let ab = g.mul(a, b);
                assert!(ab < 6);
                assert_eq!(g.mul(ab, g.inv(b)), a);
            }
        }
    }

    #[test]
    fn c4_is_cyclic_of_order_four() {
        let r = Permutation::from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap();
        let g = FiniteGroup::new("C4", 4, vec![r], &limits()).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.element_order(1), 4);
    }

    #[test]
    fn element_cap_is_enforced() {
        let r = Permutation::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        let s = Permutation::from_cycles(5, &[vec![0, 1]]).unwrap();
        let tight = Limits {
            max_elements: 100,
            ..Limits::default()
        };
        // S_5 has 120 elements.
        assert!(matches!(
            FiniteGroup::new("S5", 5, vec![r, s], &tight),
            Err(GroupError::ElementCapExceeded { cap: 100 })
        ));
    }

    #[test]
    fn element_ordering_is_reproducible() {
        let make = || {
            let r = Permutation::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
            let s = Permutation::from_cycles(3, &[vec![0, 1]]).unwrap();
            FiniteGroup::new("S3", 3, vec![r, s], &limits()).unwrap()
        };
        let a = make();
        let b = make();
        assert_eq!(a.elements(), b.elements());
    }

    #[test]
    fn group_order_divides_degree_factorial() {
        let r = Permutation::from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap();
        let s = Permutation::from_cycles(4, &[vec![1, 3]]).unwrap();
        let g = FiniteGroup::new("D4", 4, vec![r, s], &limits()).unwrap();
        let fact: usize = (1..=4).product();
        assert_eq!(fact % g.order(), 0);
    }
}
