use std::collections::BTreeMap;

use crate::error::ExprError;
use crate::expr::{typecheck, Level, NormExpr};
use crate::gmap::GMap;
use crate::gset::GSet;
use crate::indexing::IndexingSystem;
use crate::subgroup::{SubgroupId, SubgroupLattice};

/// The canonical form of a norm expression: its level and, per variable,
/// the exponent G-set. Two expressions are equivalent exactly when their
/// canonical forms are equal (exponent G-sets are stored canonically, so
/// equality is isomorphism).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub level: SubgroupId,
    pub exponents: BTreeMap<String, GSet>,
}

impl CanonicalForm {
    /// Mark-vector comparison, the decision procedure the representation
    /// equality mirrors.
    pub fn equal_by_marks(&self, lattice: &SubgroupLattice, other: &CanonicalForm) -> bool {
        if self.level != other.level || self.exponents.len() != other.exponents.len() {
            return false;
        }
        self.exponents.iter().all(|(var, gset)| {
            other
                .exponents
                .get(var)
                .is_some_and(|o| gset.marks(lattice) == o.marks(lattice))
        })
    }
}

/// Structural exponent semantics: `Var ↦ point`, restriction restricts,
/// norm induces, smash takes disjoint unions, and the internal norm
/// multiplies by its exponent set. Variables whose exponent comes out
/// empty have been absorbed into the unit and are dropped.
pub fn exponents(lattice: &SubgroupLattice, expr: &NormExpr) -> Result<CanonicalForm, ExprError> {
    let level = typecheck(lattice, expr, None)?;
    let raw = semantic_map(lattice, expr)?;
    let exponents = raw.into_iter().filter(|(_, g)| !g.is_empty()).collect();
    Ok(CanonicalForm {
        level: level.resolve(lattice.full()),
        exponents,
    })
}

fn semantic_map(
    lattice: &SubgroupLattice,
    expr: &NormExpr,
) -> Result<BTreeMap<String, GSet>, ExprError> {
    Ok(match expr {
        NormExpr::Var(x) => BTreeMap::from([(x.clone(), GSet::point(lattice.full()))]),
        NormExpr::Res { target, inner } => semantic_map(lattice, inner)?
            .into_iter()
            .map(|(x, g)| (x, g.restrict(lattice, *target).expect("typechecked")))
            .collect(),
        NormExpr::Norm { target, inner } => semantic_map(lattice, inner)?
            .into_iter()
            .map(|(x, g)| (x, g.induce(lattice, *target).expect("typechecked")))
            .collect(),
        NormExpr::Smash(factors) => {
            let mut merged: BTreeMap<String, GSet> = BTreeMap::new();
            for factor in factors {
                for (x, g) in semantic_map(lattice, factor)? {
                    match merged.remove(&x) {
                        None => {
                            merged.insert(x, g);
                        }
                        Some(prev) => {
                            merged.insert(x, prev.coproduct(&g).expect("typechecked"));
                        }
                    }
                }
            }
            merged
        }
        NormExpr::Npow { exponent, inner } => semantic_map(lattice, inner)?
            .into_iter()
            .map(|(x, g)| (x, exponent.product(lattice, &g).expect("typechecked")))
            .collect(),
    })
}

// ---------------------------------------------------------------------
// rewriting
// ---------------------------------------------------------------------

/// Named rewrite rules, each realizing one identity of the calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteRule {
    SmashFlatten,
    NpowExpand,
    NpowNpow,
    ResRes,
    NormNorm,
    ResSelf,
    NormSelf,
    ResSmash,
    NormSmash,
    ResNorm,
    ResNpow,
}

impl RewriteRule {
    /// The identity the rule implements.
    pub fn law(&self) -> &'static str {
        match self {
            RewriteRule::SmashFlatten => "monoidal strictification",
            RewriteRule::NpowExpand => "orbitwise norm expansion",
            RewriteRule::NpowNpow => "internal norms compose along products",
            RewriteRule::ResRes => "restriction transitivity",
            RewriteRule::NormNorm => "norm composition",
            RewriteRule::ResSelf => "identity restriction",
            RewriteRule::NormSelf => "identity norm",
            RewriteRule::ResSmash => "restriction is strong monoidal",
            RewriteRule::NormSmash => "norm is strong monoidal",
            RewriteRule::ResNorm => "double coset formula",
            RewriteRule::ResNpow => "double coset formula for internal norms",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RewriteRule::SmashFlatten => "smash-flatten",
            RewriteRule::NpowExpand => "npow-expand",
            RewriteRule::NpowNpow => "npow-npow",
            RewriteRule::ResRes => "res-res",
            RewriteRule::NormNorm => "norm-norm",
            RewriteRule::ResSelf => "res-self",
            RewriteRule::NormSelf => "norm-self",
            RewriteRule::ResSmash => "res-smash",
            RewriteRule::NormSmash => "norm-smash",
            RewriteRule::ResNorm => "res-norm",
            RewriteRule::ResNpow => "res-npow",
        }
    }

    pub const ALL: [RewriteRule; 11] = [
        RewriteRule::SmashFlatten,
        RewriteRule::NpowExpand,
        RewriteRule::NpowNpow,
        RewriteRule::ResRes,
        RewriteRule::NormNorm,
        RewriteRule::ResSelf,
        RewriteRule::NormSelf,
        RewriteRule::ResSmash,
        RewriteRule::NormSmash,
        RewriteRule::ResNorm,
        RewriteRule::ResNpow,
    ];
}

/// Conjugates an expression by a group element: levels move to their
/// conjugates, variables (which live at the full group) are untouched.
pub fn conjugate_expr(lattice: &SubgroupLattice, g: usize, expr: &NormExpr) -> NormExpr {
    match expr {
        NormExpr::Var(x) => NormExpr::var(x.clone()),
        NormExpr::Res { target, inner } => NormExpr::res(
            lattice.conjugate_subgroup(g, *target),
            conjugate_expr(lattice, g, inner),
        ),
        NormExpr::Norm { target, inner } => NormExpr::norm(
            lattice.conjugate_subgroup(g, *target),
            conjugate_expr(lattice, g, inner),
        ),
        NormExpr::Smash(es) => {
            NormExpr::Smash(es.iter().map(|e| conjugate_expr(lattice, g, e)).collect())
        }
        NormExpr::Npow { exponent, inner } => NormExpr::npow(
            exponent.conjugate(lattice, g),
            conjugate_expr(lattice, g, inner),
        ),
    }
}

/// Applies a single named rule at the root, or reports it not applicable.
pub fn step_rewrite(
    lattice: &SubgroupLattice,
    expr: &NormExpr,
    rule: RewriteRule,
) -> Result<NormExpr, ExprError> {
    let not_applicable = || ExprError::RuleNotApplicable {
        rule: rule.name().into(),
    };
    match rule {
        RewriteRule::SmashFlatten => match expr {
            NormExpr::Smash(es) if es.len() == 1 => Ok(es[0].clone()),
            NormExpr::Smash(es) if es.iter().any(|e| matches!(e, NormExpr::Smash(_))) => {
                let mut flat = Vec::new();
                for e in es {
                    match e {
                        NormExpr::Smash(inner) => flat.extend(inner.iter().cloned()),
                        other => flat.push(other.clone()),
                    }
                }
                Ok(NormExpr::Smash(flat))
            }
            _ => Err(not_applicable()),
        },
        RewriteRule::NpowExpand => match expr {
            NormExpr::Npow { exponent, inner } => {
                let mut factors = Vec::new();
                for &(stab, mult) in exponent.orbits() {
                    for _ in 0..mult {
                        factors.push(NormExpr::norm(
                            exponent.level(),
                            NormExpr::res(stab, (**inner).clone()),
                        ));
                    }
                }
                Ok(NormExpr::Smash(factors))
            }
            _ => Err(not_applicable()),
        },
        RewriteRule::NpowNpow => match expr {
            NormExpr::Npow { exponent, inner } => match &**inner {
                NormExpr::Npow {
                    exponent: inner_exp,
                    inner: core,
                } => Ok(NormExpr::npow(
                    exponent.product(lattice, inner_exp).map_err(|_| not_applicable())?,
                    (**core).clone(),
                )),
                _ => Err(not_applicable()),
            },
            _ => Err(not_applicable()),
        },
        RewriteRule::ResRes => match expr {
            NormExpr::Res { target, inner } => match &**inner {
                NormExpr::Res { inner: core, .. } => Ok(NormExpr::res(*target, (**core).clone())),
                _ => Err(not_applicable()),
            },
            _ => Err(not_applicable()),
        },
        RewriteRule::NormNorm => match expr {
            NormExpr::Norm { target, inner } => match &**inner {
                NormExpr::Norm { inner: core, .. } => {
                    Ok(NormExpr::norm(*target, (**core).clone()))
                }
                _ => Err(not_applicable()),
            },
            _ => Err(not_applicable()),
        },
        RewriteRule::ResSelf => match expr {
            NormExpr::Res { target, inner } => {
                match typecheck(lattice, inner, None)? {
                    Level::At(l) if l == *target => Ok((**inner).clone()),
                    _ => Err(not_applicable()),
                }
            }
            _ => Err(not_applicable()),
        },
        RewriteRule::NormSelf => match expr {
            NormExpr::Norm { target, inner } => {
                match typecheck(lattice, inner, None)? {
                    Level::At(l) if l == *target => Ok((**inner).clone()),
                    _ => Err(not_applicable()),
                }
            }
            _ => Err(not_applicable()),
        },
        RewriteRule::ResSmash => match expr {
            NormExpr::Res { target, inner } => match &**inner {
                NormExpr::Smash(es) => Ok(NormExpr::Smash(
                    es.iter()
                        .map(|e| NormExpr::res(*target, e.clone()))
                        .collect(),
                )),
                _ => Err(not_applicable()),
            },
            _ => Err(not_applicable()),
        },
        RewriteRule::NormSmash => match expr {
            NormExpr::Norm { target, inner } => match &**inner {
                NormExpr::Smash(es) => Ok(NormExpr::Smash(
                    es.iter()
                        .map(|e| NormExpr::norm(*target, e.clone()))
                        .collect(),
                )),
                _ => Err(not_applicable()),
            },
            _ => Err(not_applicable()),
        },
        RewriteRule::ResNorm => match expr {
            NormExpr::Res { target: k, inner } => match &**inner {
                NormExpr::Norm { target: h, inner: core } => {
                    let Level::At(l) = typecheck(lattice, core, None)? else {
                        return Err(not_applicable());
                    };
                    let cosets = lattice
                        .double_cosets(*h, *k, l)
                        .map_err(|_| not_applicable())?;
                    let mut factors = Vec::new();
                    for &g in &cosets.representatives {
                        let conj_level = lattice.conjugate_subgroup(g, l);
                        let meet = lattice.intersect(*k, conj_level);
                        factors.push(NormExpr::norm(
                            *k,
                            NormExpr::res(meet, conjugate_expr(lattice, g, core)),
                        ));
                    }
                    Ok(NormExpr::Smash(factors))
                }
                _ => Err(not_applicable()),
            },
            _ => Err(not_applicable()),
        },
        RewriteRule::ResNpow => match expr {
            NormExpr::Res { target: k, inner } => match &**inner {
                NormExpr::Npow { exponent, inner: core } => Ok(NormExpr::npow(
                    exponent.restrict(lattice, *k).map_err(|_| not_applicable())?,
                    NormExpr::res(*k, (**core).clone()),
                )),
                _ => Err(not_applicable()),
            },
            _ => Err(not_applicable()),
        },
    }
}

/// One recorded rewrite: rule, the identity it realizes, the position it
/// fired at, and full before/after snapshots.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub rule: RewriteRule,
    pub law: &'static str,
    pub path: Vec<usize>,
    pub before: NormExpr,
    pub after: NormExpr,
}

#[derive(Debug, Clone, Default)]
pub struct RewriteTrace {
    pub steps: Vec<TraceStep>,
}

impl RewriteTrace {
    /// Replays the trace from `start`, verifying every snapshot, and
    /// returns the final expression.
    pub fn replay(
        &self,
        lattice: &SubgroupLattice,
        start: &NormExpr,
    ) -> Result<NormExpr, ExprError> {
        let mut current = start.clone();
        for step in &self.steps {
            if current != step.before {
                return Err(ExprError::IllTyped(
                    "trace does not continue from the current expression".into(),
                ));
            }
            let sub = current
                .subterm(&step.path)
                .ok_or_else(|| ExprError::IllTyped("trace path escapes the expression".into()))?;
            let rewritten = step_rewrite(lattice, sub, step.rule)?;
            current = current.replace_at(&step.path, rewritten);
            if current != step.after {
                return Err(ExprError::IllTyped(
                    "replayed step disagrees with the recorded snapshot".into(),
                ));
            }
        }
        Ok(current)
    }
}

/// The rules the normalization strategy fires, in priority order. The two
/// internal-norm shortcuts are exposed for `step_rewrite` but redundant
/// here: orbitwise expansion eliminates every `Npow` first.
const STRATEGY: [RewriteRule; 9] = [
    RewriteRule::SmashFlatten,
    RewriteRule::NpowExpand,
    RewriteRule::ResRes,
    RewriteRule::NormNorm,
    RewriteRule::ResSelf,
    RewriteRule::NormSelf,
    RewriteRule::ResSmash,
    RewriteRule::NormSmash,
    RewriteRule::ResNorm,
];

fn find_redex(
    lattice: &SubgroupLattice,
    expr: &NormExpr,
    path: &mut Vec<usize>,
) -> Option<(Vec<usize>, RewriteRule, NormExpr)> {
    for rule in STRATEGY {
        if let Ok(rewritten) = step_rewrite(lattice, expr, rule) {
            return Some((path.clone(), rule, rewritten));
        }
    }
    for (i, child) in expr.children().into_iter().enumerate() {
        path.push(i);
        if let Some(found) = find_redex(lattice, child, path) {
            path.pop();
            return Some(found);
        }
        path.pop();
    }
    None
}

const MAX_STEPS: usize = 1_000_000;

/// Rewrites to normal form (a smash of norm towers), recording the trace.
pub fn rewrite_normal_form(
    lattice: &SubgroupLattice,
    expr: &NormExpr,
) -> Result<(NormExpr, RewriteTrace), ExprError> {
    typecheck(lattice, expr, None)?;
    let mut current = expr.clone();
    let mut trace = RewriteTrace::default();
    for _ in 0..MAX_STEPS {
        let mut path = Vec::new();
        let Some((at, rule, rewritten_sub)) = find_redex(lattice, &current, &mut path) else {
            return Ok((current, trace));
        };
        let after = current.replace_at(&at, rewritten_sub);
        trace.steps.push(TraceStep {
            rule,
            law: rule.law(),
            path: at,
            before: current.clone(),
            after: after.clone(),
        });
        current = after;
    }
    Err(ExprError::IllTyped(
        "rewriting did not terminate within the step budget".into(),
    ))
}

/// Reads the canonical form off a normal-form expression.
fn read_off(
    lattice: &SubgroupLattice,
    expr: &NormExpr,
    fallback_level: SubgroupId,
) -> Option<CanonicalForm> {
    let factors: Vec<&NormExpr> = match expr {
        NormExpr::Smash(es) => es.iter().collect(),
        other => vec![other],
    };
    let mut exponents: BTreeMap<String, GSet> = BTreeMap::new();
    let mut level: Option<SubgroupId> = None;
    for factor in factors {
        let (var, gset) = match factor {
            NormExpr::Var(x) => (x.clone(), GSet::point(lattice.full())),
            NormExpr::Res { target, inner } => match &**inner {
                NormExpr::Var(x) => (x.clone(), GSet::point(*target)),
                _ => return None,
            },
            NormExpr::Norm { target, inner } => match &**inner {
                NormExpr::Res { target: stab, inner: core } => match &**core {
                    NormExpr::Var(x) => (x.clone(), GSet::orbit(lattice, *target, *stab)),
                    _ => return None,
                },
                _ => return None,
            },
            _ => return None,
        };
        match level {
            None => level = Some(gset.level()),
            Some(l) if l == gset.level() => {}
            Some(_) => return None,
        }
        match exponents.remove(&var) {
            None => {
                exponents.insert(var, gset);
            }
            Some(prev) => {
                exponents.insert(var, prev.coproduct(&gset).ok()?);
            }
        }
    }
    Some(CanonicalForm {
        level: level.unwrap_or(fallback_level),
        exponents,
    })
}

/// A normalization result: the canonical form, the rewrite trace that
/// reaches an expression-level normal form, and that normal form.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub canonical: CanonicalForm,
    pub trace: RewriteTrace,
    pub normal_expr: NormExpr,
}

/// Normalizes a well-typed expression. The canonical form is computed by
/// the structural exponent semantics; the rewrite engine independently
/// reaches a normal-form expression whose read-off must agree, and any
/// disagreement is reported as an error rather than hidden.
pub fn normalize(lattice: &SubgroupLattice, expr: &NormExpr) -> Result<Normalized, ExprError> {
    let canonical = exponents(lattice, expr)?;
    let (normal_expr, trace) = rewrite_normal_form(lattice, expr)?;
    let read = read_off(lattice, &normal_expr, canonical.level)
        .ok_or_else(|| ExprError::IllTyped("rewriting stopped short of normal form".into()))?;
    if read != canonical {
        return Err(ExprError::IllTyped(format!(
            "rewriter and exponent semantics disagree: {read:?} vs {canonical:?}"
        )));
    }
    Ok(Normalized {
        canonical,
        trace,
        normal_expr,
    })
}

/// Are two expressions equivalent (isomorphic exponents at one level)?
pub fn equivalent(
    lattice: &SubgroupLattice,
    e1: &NormExpr,
    e2: &NormExpr,
) -> Result<bool, ExprError> {
    let l1 = typecheck(lattice, e1, None)?;
    let l2 = typecheck(lattice, e2, None)?;
    let common = match (l1, l2) {
        (Level::At(a), Level::At(b)) if a != b => {
            return Err(ExprError::LevelMismatch {
                context: "equivalence comparands".into(),
                expected: lattice.subgroup(a).canonical_id(),
                found: lattice.subgroup(b).canonical_id(),
            })
        }
        (Level::At(a), _) | (_, Level::At(a)) => a,
        (Level::Any, Level::Any) => lattice.full(),
    };
    let mut c1 = exponents(lattice, e1)?;
    let mut c2 = exponents(lattice, e2)?;
    c1.level = common;
    c2.level = common;
    let equal = c1 == c2;
    debug_assert_eq!(equal, c1.equal_by_marks(lattice, &c2));
    Ok(equal)
}

/// A formal norm map `N^T R → N^S R` induced by an equivariant map
/// `f: S → T`, recorded with both endpoint canonical forms.
#[derive(Debug, Clone)]
pub struct NormMapDescriptor {
    /// Canonical form of the source `N^T R` (T = target of `f`).
    pub source: CanonicalForm,
    /// Canonical form of the target `N^S R` (S = source of `f`).
    pub target: CanonicalForm,
    pub map: GMap,
}

/// The ring symbol used in norm-map endpoint forms.
pub const RING_VAR: &str = "R";

/// Builds the norm-map descriptor for `f: S → T`; both endpoints must be
/// admissible when a gate is supplied.
pub fn norm_map_of(
    lattice: &SubgroupLattice,
    f: &GMap,
    gate: Option<&IndexingSystem>,
) -> Result<NormMapDescriptor, ExprError> {
    let s = &f.source.gset;
    let t = &f.target.gset;
    if let Some(ix) = gate {
        for endpoint in [s, t] {
            if !ix.is_admissible(lattice, endpoint) {
                return Err(ExprError::InadmissibleNorm {
                    orbit: format!("{:?}", endpoint.orbits()),
                    level: lattice.subgroup(endpoint.level()).canonical_id(),
                });
            }
        }
    }
    let form = |gset: &GSet| CanonicalForm {
        level: gset.level(),
        exponents: if gset.is_empty() {
            BTreeMap::new()
        } else {
            BTreeMap::from([(RING_VAR.to_string(), gset.clone())])
        },
    };
    Ok(NormMapDescriptor {
        source: form(t),
        target: form(s),
        map: f.clone(),
    })
}

/// Composes descriptors along composable G-maps: `first: S → T` and
/// `second: T → U` yield the descriptor of `second ∘ first`.
pub fn compose_norm_maps(
    lattice: &SubgroupLattice,
    second: &NormMapDescriptor,
    first: &NormMapDescriptor,
) -> Result<NormMapDescriptor, ExprError> {
    let composite = first
        .map
        .then(&second.map)
        .map_err(|_| ExprError::IllTyped("norm maps are not composable".into()))?;
    norm_map_of(lattice, &composite, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::group::FiniteGroup;
    use crate::limits::Limits;
    use crate::names::Names;
    use crate::perm::Permutation;
    use std::sync::Arc;

    fn fixture(
        name: &str,
        degree: usize,
        cycles: &[&[usize]],
    ) -> (Arc<SubgroupLattice>, Names) {
        let gens = cycles
            .iter()
            .map(|c| Permutation::from_cycles(degree, &[c.to_vec()]).unwrap())
            .collect();
        let group = FiniteGroup::new(name, degree, gens, &Limits::default()).unwrap();
        let lat = SubgroupLattice::build(group, &Limits::default()).unwrap();
        let names = Names::build(&lat);
        (lat, names)
    }

    fn c4() -> (Arc<SubgroupLattice>, Names) {
        fixture("C4", 4, &[&[0, 1, 2, 3]])
    }

    fn s3() -> (Arc<SubgroupLattice>, Names) {
        fixture("S3", 3, &[&[0, 1, 2], &[0, 1]])
    }

    fn norm_of(lat: &SubgroupLattice, names: &Names, text: &str) -> CanonicalForm {
        let e = parse(lat, names, text).unwrap();
        normalize(lat, &e).unwrap().canonical
    }

    #[test]
    fn trivial_internal_norm_is_the_identity() {
        let (lat, names) = c4();
        let cf = norm_of(&lat, &names, "Npow[C4/C4](X)");
        assert_eq!(cf.level, lat.full());
        assert_eq!(cf.exponents["X"], GSet::point(lat.full()));
    }

    #[test]
    fn restricted_internal_norm_gives_a_smash_square() {
        let (lat, names) = c4();
        let c2 = names.resolve(&lat, "C2").unwrap();
        let cf = norm_of(&lat, &names, "res[C2](Npow[C4/C2](X))");
        assert_eq!(cf.level, c2);
        assert_eq!(cf.exponents["X"], GSet::from_orbits(c2, vec![(c2, 2)]));
        // which is exactly smash(res(X), res(X))
        let cf2 = norm_of(&lat, &names, "smash(res[C2](X), res[C2](X))");
        assert_eq!(cf, cf2);
    }

    #[test]
    fn norm_of_restriction_is_the_internal_norm_of_the_orbit() {
        let (lat, names) = c4();
        let lhs = parse(&lat, &names, "norm[C4](res[C2](X))").unwrap();
        let rhs = parse(&lat, &names, "Npow[C4/C2](X)").unwrap();
        assert!(equivalent(&lat, &lhs, &rhs).unwrap());
    }

    #[test]
    fn internal_norms_compose_along_products() {
        let (lat, names) = s3();
        let c2 = names.resolve(&lat, "C2").unwrap();
        let c3 = names.resolve(&lat, "C3").unwrap();
        let t1 = GSet::orbit(&lat, lat.full(), c2);
        let t2 = GSet::orbit(&lat, lat.full(), c3);
        let product = t1.product(&lat, &t2).unwrap();
        let x = NormExpr::var("X");
        let lhs = NormExpr::npow(product, x.clone());
        let rhs = NormExpr::npow(t1, NormExpr::npow(t2, x));
        assert!(equivalent(&lat, &lhs, &rhs).unwrap());
    }

    #[test]
    fn double_coset_identity_on_internal_norms() {
        let (lat, names) = s3();
        for t_text in ["S3/C2", "S3/C3", "S3/e", "2*S3/C2, S3/S3"] {
            for k_name in ["e", "C2", "C3", "S3"] {
                let k = names.resolve(&lat, k_name).unwrap();
                let t = crate::expr::parse_gset(&lat, &names, t_text).unwrap();
                let x = NormExpr::var("X");
                let lhs = NormExpr::res(k, NormExpr::npow(t.clone(), x.clone()));
                let rhs = NormExpr::npow(
                    t.restrict(&lat, k).unwrap(),
                    NormExpr::res(k, x),
                );
                assert!(
                    equivalent(&lat, &lhs, &rhs).unwrap(),
                    "failed for T={t_text}, K={k_name}"
                );
            }
        }
    }

    #[test]
    fn smash_is_not_the_identity() {
        let (lat, names) = c4();
        let x = parse(&lat, &names, "X").unwrap();
        let xx = parse(&lat, &names, "smash(X, X)").unwrap();
        assert!(!equivalent(&lat, &x, &xx).unwrap());
    }

    #[test]
    fn empty_exponent_absorbs_the_variable() {
        let (lat, names) = c4();
        let cf = norm_of(&lat, &names, "Npow[empty@C4](X)");
        assert!(cf.exponents.is_empty());
        let unit = parse(&lat, &names, "1").unwrap();
        let e = parse(&lat, &names, "Npow[empty@C4](X)").unwrap();
        assert!(equivalent(&lat, &e, &unit).unwrap());
    }

    #[test]
    fn every_rule_is_sound_on_typical_shapes() {
        let (lat, names) = c4();
        let samples = [
            "res[C2](res[C4](X))",
            "norm[C4](norm[C2](res[e](X)))",
            "res[C2](norm[C4](res[e](X)))",
            "res[e](norm[C4](res[C2](X)))",
            "res[C2](smash(X, X))",
            "norm[C4](smash(res[C2](X), res[C2](X)))",
            "Npow[C4/C2](X)",
            "Npow[C4/C2](Npow[C4/e](X))",
            "res[C2](Npow[C4/C2](X))",
            "smash(smash(X), smash(X, X))",
            "res[C4](X)",
            "norm[C4](res[C4](X))",
        ];
        for text in samples {
            let e = parse(&lat, &names, text).unwrap();
            let reference = exponents(&lat, &e).unwrap();
            for rule in RewriteRule::ALL {
                if let Ok(rewritten) = step_rewrite(&lat, &e, rule) {
                    let after = exponents(&lat, &rewritten).unwrap();
                    assert_eq!(
                        reference.exponents, after.exponents,
                        "rule {} broke {}",
                        rule.name(),
                        text
                    );
                }
            }
        }
    }

    #[test]
    fn traces_replay_to_the_normal_form() {
        let (lat, names) = s3();
        for text in [
            "res[C2](Npow[S3/C3](X))",
            "norm[S3](res[C3](smash(X, X)))",
            "res[e](norm[S3](res[C2](X)))",
        ] {
            let e = parse(&lat, &names, text).unwrap();
            let result = normalize(&lat, &e).unwrap();
            let replayed = result.trace.replay(&lat, &e).unwrap();
            assert_eq!(replayed, result.normal_expr);
        }
    }

    #[test]
    fn norm_maps_are_contravariant_and_functorial() {
        let (lat, _names) = c4();
        let c2 = lat.ids().find(|&id| lat.order(id) == 2).unwrap();
        let t = GSet::orbit(&lat, lat.full(), c2);
        let tt = t.coproduct(&t).unwrap();
        let rt = t.realize(&lat);
        let rtt = tt.realize(&lat);
        // fold map T ⊔ T → T
        let fold = GMap::new(
            &lat,
            rtt.clone(),
            rt.clone(),
            (0..rtt.points()).map(|p| p % rt.points()).collect(),
        )
        .unwrap();
        let desc = norm_map_of(&lat, &fold, None).unwrap();
        assert_eq!(desc.source.exponents[RING_VAR], t);
        assert_eq!(desc.target.exponents[RING_VAR], tt);

        // identity maps give equal endpoints
        let id = GMap::identity(&rt);
        let desc_id = norm_map_of(&lat, &id, None).unwrap();
        assert_eq!(desc_id.source, desc_id.target);

        // functoriality: compose with the identity
        let composite = compose_norm_maps(&lat, &desc_id, &desc).unwrap();
        assert_eq!(composite.source, desc.source);
        assert_eq!(composite.target, desc.target);
        let direct = norm_map_of(&lat, &fold.then(&id).unwrap(), None).unwrap();
        assert_eq!(composite.source, direct.source);
        assert_eq!(composite.target, direct.target);
        assert_eq!(composite.map, direct.map);
    }

    #[test]
    fn norm_map_admissibility_is_gated() {
        let (lat, _names) = c4();
        let trivial_ix = IndexingSystem::trivial(&lat);
        let free = GSet::orbit(&lat, lat.full(), lat.trivial()).realize(&lat);
        let id = GMap::identity(&free);
        assert!(matches!(
            norm_map_of(&lat, &id, Some(&trivial_ix)),
            Err(ExprError::InadmissibleNorm { .. })
        ));
        let complete = IndexingSystem::complete(&lat);
        assert!(norm_map_of(&lat, &id, Some(&complete)).is_ok());
    }

    #[test]
    fn relative_annotation_never_changes_canonical_forms() {
        use crate::expr::Annotation;
        let (lat, names) = c4();
        let e = parse(&lat, &names, "res[C2](Npow[C4/C2](X))").unwrap();
        let absolute = (Annotation::Absolute, normalize(&lat, &e).unwrap().canonical);
        let relative = (
            Annotation::RelativeToRing,
            normalize(&lat, &e).unwrap().canonical,
        );
        assert_eq!(absolute.1, relative.1);
    }
}
