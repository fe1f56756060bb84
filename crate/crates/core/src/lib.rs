//! Combinatorics of equivariant multiplicative norms.
//!
//! The crate models, for a finite permutation group `G`:
//!
//! * the subgroup lattice with conjugacy classes and double cosets,
//! * finite G-sets as orbit multisets with tables of marks,
//! * indexing systems of admissible sets with validation, closure
//!   generation, and enumeration,
//! * universes of exact-rational representations and the admissibility
//!   criterion for the norms they support,
//! * a typed `res`/`norm`/`smash`/`Npow` expression calculus with a
//!   normalizing rewriter whose canonical forms are labeled exponent
//!   G-sets, and
//! * the bicategory of spans of admissible G-sets with pullback
//!   composition and translation groupoids.

pub mod error;
pub mod expr;
pub mod gmap;
pub mod graph;
pub mod group;
pub mod gset;
pub mod indexing;
pub mod names;
pub mod normalize;
pub mod io;
pub mod limits;
pub mod perm;
pub mod presets;
pub mod qmat;
pub mod rep;
pub mod span;
pub mod subgroup;

pub use expr::{parse, parse_gset, typecheck, Annotation, Level, NormExpr};
pub use names::Names;
pub use normalize::{compose_norm_maps, conjugate_expr, equivalent, exponents, norm_map_of, normalize, rewrite_normal_form, step_rewrite, CanonicalForm, NormMapDescriptor, Normalized, RewriteRule, RewriteTrace, TraceStep};
pub use error::{ExprError, GSetError, GroupError, IndexingError, RepError, SpanError};
pub use graph::{family_of, graph_subgroup, GraphSubgroup, ProductWithSymmetric};
pub use gmap::{gmaps, GMap};
pub use group::FiniteGroup;
pub use gset::{GSet, MarkVector, Realization};
pub use indexing::{enumerate_all, AxiomCheck, ClosureAxiom, Counterexample, IndexingSystem, ValidationReport};
pub use limits::Limits;
pub use perm::Permutation;
pub use qmat::{QMat, Q};
pub use rep::{constituents_contained, hom_basis, hom_dim, Certificate, ConstituentRelation, Rep, Universe};
pub use span::{compose as compose_spans, covering_of, pullback_square_check, spans_isomorphic, translation_groupoid, ComposedSpan, CoveringFunctor, Span, TranslationGroupoid};
pub use subgroup::{DoubleCosetDecomposition, LevelClasses, Subgroup, SubgroupId, SubgroupLattice};
