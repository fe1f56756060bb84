use itertools::Itertools;

use crate::error::SpanError;
use crate::gmap::{gmaps, GMap};
use crate::gset::{GSet, Realization};
use crate::indexing::IndexingSystem;
use crate::limits::Limits;
use crate::subgroup::{SubgroupId, SubgroupLattice};

/// A span `S ← A → T` of G-sets at one level, stored on fixed
/// realizations with a shared apex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    pub left: GMap,
    pub right: GMap,
}

impl Span {
    pub fn new(left: GMap, right: GMap) -> Result<Span, SpanError> {
        if left.source != right.source {
            return Err(SpanError::BoundaryMismatch);
        }
        if left.source.level != left.target.level || right.source.level != right.target.level {
            return Err(SpanError::LevelMismatch);
        }
        Ok(Span { left, right })
    }

    pub fn identity(real: &Realization) -> Span {
        Span {
            left: GMap::identity(real),
            right: GMap::identity(real),
        }
    }

    pub fn apex(&self) -> &Realization {
        &self.left.source
    }

    pub fn level(&self) -> SubgroupId {
        self.left.source.level
    }
}

/// Result of composing two spans; the apex admissibility is reported
/// (never assumed) when a gate is supplied.
#[derive(Debug, Clone)]
pub struct ComposedSpan {
    pub span: Span,
    pub apex_admissible: Option<bool>,
}

/// Composes `s1: S ← A → T` with `s2: T' ← B → U` by an element-level
/// fiber product over the shared boundary. When the boundary
/// realizations differ, an identification `T → T'` is taken from the
/// argument or searched for among equivariant bijections.
pub fn compose(
    lattice: &SubgroupLattice,
    s1: &Span,
    s2: &Span,
    identification: Option<&GMap>,
    gate: Option<&IndexingSystem>,
    limits: &Limits,
) -> Result<ComposedSpan, SpanError> {
    let mid_left = &s1.right.target;
    let mid_right = &s2.left.target;
    let ident: Vec<usize> = if mid_left == mid_right {
        (0..mid_left.points()).collect()
    } else if let Some(supplied) = identification {
        if &supplied.source != mid_left || &supplied.target != mid_right || !supplied.is_iso() {
            return Err(SpanError::BoundaryMismatch);
        }
        supplied.assignment.clone()
    } else {
        gmaps(lattice, mid_left, mid_right)
            .map_err(SpanError::GSet)?
            .into_iter()
            .find(|m| m.is_iso())
            .ok_or(SpanError::BoundaryMismatch)?
            .assignment
    };

    let level = s1.level();
    if level != s2.level() {
        return Err(SpanError::LevelMismatch);
    }
    let a = s1.apex();
    let b = s2.apex();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (pa, pb) in (0..a.points()).cartesian_product(0..b.points()) {
        if ident[s1.right.assignment[pa]] == s2.left.assignment[pb] {
            pairs.push((pa, pb));
        }
    }
    if pairs.len() > limits.max_points {
        return Err(SpanError::ApexCapExceeded {
            cap: limits.max_points,
        });
    }
    let index_of = |pa: usize, pb: usize| pairs.binary_search(&(pa, pb)).expect("closed action");
    let members = lattice.subgroup(level).order();
    let act: Vec<Vec<usize>> = (0..members)
        .map(|pos| {
            pairs
                .iter()
                .map(|&(pa, pb)| index_of(a.apply(pos, pa), b.apply(pos, pb)))
                .collect()
        })
        .collect();
    let labels = pairs
        .iter()
        .map(|&(pa, pb)| format!("({},{})", a.labels[pa], b.labels[pb]))
        .collect();
    let apex = Realization::from_action(lattice, level, labels, act);

    let left = GMap {
        source: apex.clone(),
        target: s1.left.target.clone(),
        assignment: pairs.iter().map(|&(pa, _)| s1.left.assignment[pa]).collect(),
    };
    let right = GMap {
        source: apex,
        target: s2.right.target.clone(),
        assignment: pairs.iter().map(|&(_, pb)| s2.right.assignment[pb]).collect(),
    };
    let span = Span::new(left, right)?;
    let apex_admissible = gate.map(|ix| ix.is_admissible(lattice, &span.apex().gset));
    Ok(ComposedSpan {
        span,
        apex_admissible,
    })
}

/// Isomorphism of spans over identical boundaries: an equivariant
/// bijection of apexes commuting with both legs.
pub fn spans_isomorphic(
    lattice: &SubgroupLattice,
    s1: &Span,
    s2: &Span,
) -> Result<bool, SpanError> {
    if s1.left.target != s2.left.target || s1.right.target != s2.right.target {
        return Err(SpanError::BoundaryMismatch);
    }
    if s1.apex().points() != s2.apex().points() {
        return Ok(false);
    }
    // cheap invariant separation first
    if s1.apex().gset != s2.apex().gset {
        return Ok(false);
    }
    let candidates = gmaps(lattice, s1.apex(), s2.apex()).map_err(SpanError::GSet)?;
    Ok(candidates.into_iter().any(|phi| {
        phi.is_iso()
            && (0..s1.apex().points()).all(|p| {
                s2.left.assignment[phi.assignment[p]] == s1.left.assignment[p]
                    && s2.right.assignment[phi.assignment[p]] == s1.right.assignment[p]
            })
    }))
}

/// The translation groupoid of a realized G-set: objects are points,
/// morphisms are pairs `(point, member)` from `point` to `member·point`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationGroupoid {
    pub level: SubgroupId,
    pub objects: usize,
    /// members of the level, in order; morphisms are `(object, member
    /// position)` pairs
    pub members: Vec<usize>,
    act: Vec<Vec<usize>>,
}

/// A morphism `(t, g): t → g·t`.
pub type TranslationMorphism = (usize, usize);

impl TranslationGroupoid {
    pub fn morphisms(&self) -> impl Iterator<Item = TranslationMorphism> + '_ {
        (0..self.objects).cartesian_product(0..self.members.len())
    }

    pub fn morphism_count(&self) -> usize {
        self.objects * self.members.len()
    }

    pub fn source(&self, m: TranslationMorphism) -> usize {
        m.0
    }

    pub fn target(&self, m: TranslationMorphism) -> usize {
        self.act[m.1][m.0]
    }

    pub fn identity(&self, object: usize) -> TranslationMorphism {
        (object, 0)
    }

    /// Composition `second ∘ first`, defined when the source of `second`
    /// is the target of `first`.
    pub fn compose(
        &self,
        lattice: &SubgroupLattice,
        second: TranslationMorphism,
        first: TranslationMorphism,
    ) -> Option<TranslationMorphism> {
        if second.0 != self.target(first) {
            return None;
        }
        let g1 = self.members[first.1];
        let g2 = self.members[second.1];
        let product = lattice.group().mul(g2, g1);
        let pos = self.members.binary_search(&product).expect("member closed");
        Some((first.0, pos))
    }
}

/// Builds the translation groupoid of a realized G-set.
pub fn translation_groupoid(lattice: &SubgroupLattice, real: &Realization) -> TranslationGroupoid {
    let members = lattice.subgroup(real.level).members().to_vec();
    let act = (0..members.len())
        .map(|pos| (0..real.points()).map(|p| real.apply(pos, p)).collect())
        .collect();
    TranslationGroupoid {
        level: real.level,
        objects: real.points(),
        members,
        act,
    }
}

/// The covering functor `B_T G → B_S G` induced by an equivariant map
/// `T → S`: `t ↦ f(t)` on objects, `(t, g) ↦ (f(t), g)` on morphisms.
#[derive(Debug, Clone)]
pub struct CoveringFunctor {
    pub source: TranslationGroupoid,
    pub target: TranslationGroupoid,
    pub object_map: Vec<usize>,
}

pub fn covering_of(lattice: &SubgroupLattice, f: &GMap) -> CoveringFunctor {
    CoveringFunctor {
        source: translation_groupoid(lattice, &f.source),
        target: translation_groupoid(lattice, &f.target),
        object_map: f.assignment.clone(),
    }
}

impl CoveringFunctor {
    pub fn map_morphism(&self, m: TranslationMorphism) -> TranslationMorphism {
        (self.object_map[m.0], m.1)
    }

    /// Checks functoriality on every identity and composable pair.
    pub fn verify(&self, lattice: &SubgroupLattice) -> bool {
        for object in 0..self.source.objects {
            let id = self.source.identity(object);
            if self.map_morphism(id) != self.target.identity(self.object_map[object]) {
                return false;
            }
        }
        for first in self.source.morphisms() {
            let mid = self.source.target(first);
            for pos in 0..self.source.members.len() {
                let second = (mid, pos);
                let composite = self
                    .source
                    .compose(lattice, second, first)
                    .expect("sources match");
                let mapped = self
                    .target
                    .compose(lattice, self.map_morphism(second), self.map_morphism(first))
                    .expect("images compose");
                if mapped != self.map_morphism(composite) {
                    return false;
                }
            }
        }
        true
    }
}

/// Verifies, by explicit construction, that the translation category of
/// `G/H × T` is the pullback of `B_T G → B_pt G ← B_{G/H} G`: the
/// comparison functor must be bijective on objects and morphisms and
/// functorial.
pub fn pullback_square_check(
    lattice: &SubgroupLattice,
    h: SubgroupId,
    t: &GSet,
    limits: &Limits,
) -> Result<bool, SpanError> {
    let full = lattice.full();
    let coset = GSet::orbit(lattice, full, h);
    let x_real = coset.realize(lattice);
    let t_real = t.realize(lattice);
    let points = x_real.points() * t_real.points();
    if points > limits.max_points {
        return Err(SpanError::ApexCapExceeded {
            cap: limits.max_points,
        });
    }
    // the product translation category, with pair structure kept
    let members = lattice.subgroup(full).order();
    let act: Vec<Vec<usize>> = (0..members)
        .map(|pos| {
            (0..points)
                .map(|p| {
                    let (px, pt) = (p / t_real.points(), p % t_real.points());
                    x_real.apply(pos, px) * t_real.points() + t_real.apply(pos, pt)
                })
                .collect()
        })
        .collect();
    let labels = (0..points)
        .map(|p| format!("({},{})", p / t_real.points(), p % t_real.points()))
        .collect();
    let product = Realization::from_action(lattice, full, labels, act);
    let b_product = translation_groupoid(lattice, &product);
    let b_x = translation_groupoid(lattice, &x_real);
    let b_t = translation_groupoid(lattice, &t_real);

    // objects of the category pullback are pairs; morphism pairs must
    // project to the same arrow of B_pt G, i.e. share the group element
    let expected_objects = b_x.objects * b_t.objects;
    if b_product.objects != expected_objects {
        return Ok(false);
    }
    let expected_morphisms = expected_objects * members;
    if b_product.morphism_count() != expected_morphisms {
        return Ok(false);
    }
    // the comparison functor on objects is (x,t) ↦ (x,t): bijective by
    // construction; on morphisms ((x,t),g) ↦ ((x,g),(t,g)); check it is
    // well-defined (targets match componentwise) and functorial
    for m in b_product.morphisms() {
        let (p, pos) = m;
        let (px, pt) = (p / b_t.objects, p % b_t.objects);
        let target = b_product.target(m);
        let (qx, qt) = (target / b_t.objects, target % b_t.objects);
        if b_x.target((px, pos)) != qx || b_t.target((pt, pos)) != qt {
            return Ok(false);
        }
    }
    for first in b_product.morphisms() {
        let mid = b_product.target(first);
        for pos in 0..members {
            let second = (mid, pos);
            let composite = b_product
                .compose(lattice, second, first)
                .expect("sources match");
            // componentwise composition in the pullback
            let (px, pt) = (first.0 / b_t.objects, first.0 % b_t.objects);
            let cx = b_x
                .compose(lattice, (b_x.target((px, first.1)), pos), (px, first.1))
                .expect("component composes");
            let ct = b_t
                .compose(lattice, (b_t.target((pt, first.1)), pos), (pt, first.1))
                .expect("component composes");
            if cx.0 != composite.0 / b_t.objects
                || ct.0 != composite.0 % b_t.objects
                || cx.1 != composite.1
                || ct.1 != composite.1
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
