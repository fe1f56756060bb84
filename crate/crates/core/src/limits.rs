/// Resource caps for enumeration-heavy operations.
///
/// Everything here is configuration, not a hard-coded constant: callers
/// (and the CLI) can raise or lower the caps. The defaults are sized for
/// desk-scale groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of elements a generated group may have.
    pub max_elements: usize,
    /// Maximum group order for full subgroup-lattice enumeration.
    pub max_lattice_order: usize,
    /// Maximum number of points in a realized G-set or pullback apex.
    pub max_points: usize,
    /// Maximum number of subgroup conjugacy classes for indexing-system
    /// enumeration.
    pub max_enumeration_classes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_elements: 10_000,
            max_lattice_order: 48,
            max_points: 10_000,
            max_enumeration_classes: 12,
        }
    }
}

impl Limits {
    pub fn with_lattice_order(mut self, cap: usize) -> Self {
        self.max_lattice_order = cap;
        self
    }
}
