use crate::error::ExprError;
use crate::gset::GSet;
use crate::indexing::IndexingSystem;
use crate::names::Names;
use crate::subgroup::{SubgroupId, SubgroupLattice};

/// A norm/restriction expression. Variables denote objects at the full
/// group; lower levels arise by restriction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum NormExpr {
    Var(String),
    Res {
        target: SubgroupId,
        inner: Box<NormExpr>,
    },
    Norm {
        target: SubgroupId,
        inner: Box<NormExpr>,
    },
    Smash(Vec<NormExpr>),
    Npow {
        exponent: GSet,
        inner: Box<NormExpr>,
    },
}

/// Whether the expression is read absolutely or relative to a ring; the
/// flag never changes canonical forms, only which admissibility gate the
/// caller chooses to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Annotation {
    #[default]
    Absolute,
    RelativeToRing,
}

/// The level of an expression: `Any` only for the empty smash (the unit),
/// which is level-polymorphic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Any,
    At(SubgroupId),
}

impl Level {
    pub fn resolve(self, fallback: SubgroupId) -> SubgroupId {
        match self {
            Level::Any => fallback,
            Level::At(id) => id,
        }
    }
}

impl NormExpr {
    pub fn unit() -> NormExpr {
        NormExpr::Smash(Vec::new())
    }

    pub fn var(name: impl Into<String>) -> NormExpr {
        NormExpr::Var(name.into())
    }

    pub fn res(target: SubgroupId, inner: NormExpr) -> NormExpr {
        NormExpr::Res {
            target,
            inner: Box::new(inner),
        }
    }

    pub fn norm(target: SubgroupId, inner: NormExpr) -> NormExpr {
        NormExpr::Norm {
            target,
            inner: Box::new(inner),
        }
    }

    pub fn npow(exponent: GSet, inner: NormExpr) -> NormExpr {
        NormExpr::Npow {
            exponent,
            inner: Box::new(inner),
        }
    }

    pub fn children(&self) -> Vec<&NormExpr> {
        match self {
            NormExpr::Var(_) => Vec::new(),
            NormExpr::Res { inner, .. }
            | NormExpr::Norm { inner, .. }
            | NormExpr::Npow { inner, .. } => vec![inner],
            NormExpr::Smash(es) => es.iter().collect(),
        }
    }

    /// Replaces the child at `index`.
    pub fn with_child(&self, index: usize, child: NormExpr) -> NormExpr {
        match self {
            NormExpr::Var(_) => panic!("variables have no children"),
            NormExpr::Res { target, .. } => NormExpr::res(*target, child),
            NormExpr::Norm { target, .. } => NormExpr::norm(*target, child),
            NormExpr::Npow { exponent, .. } => NormExpr::npow(exponent.clone(), child),
            NormExpr::Smash(es) => {
                let mut es = es.clone();
                es[index] = child;
                NormExpr::Smash(es)
            }
        }
    }

    pub fn subterm(&self, path: &[usize]) -> Option<&NormExpr> {
        let mut cur = self;
        for &i in path {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    pub fn replace_at(&self, path: &[usize], new: NormExpr) -> NormExpr {
        match path.split_first() {
            None => new,
            Some((&i, rest)) => {
                let child = self.children()[i].replace_at(rest, new);
                self.with_child(i, child)
            }
        }
    }
}

/// Computes the level of a well-typed expression, enforcing the level
/// constraints and, when a gate is supplied, the admissibility of every
/// norm.
pub fn typecheck(
    lattice: &SubgroupLattice,
    expr: &NormExpr,
    gate: Option<&IndexingSystem>,
) -> Result<Level, ExprError> {
    match expr {
        NormExpr::Var(_) => Ok(Level::At(lattice.full())),
        NormExpr::Res { target, inner } => {
            let level = typecheck(lattice, inner, gate)?;
            if let Level::At(l) = level {
                if !lattice.leq(*target, l) {
                    return Err(ExprError::BadResTarget {
                        target: lattice.subgroup(*target).canonical_id(),
                        level: lattice.subgroup(l).canonical_id(),
                    });
                }
            }
            Ok(Level::At(*target))
        }
        NormExpr::Norm { target, inner } => {
            let level = typecheck(lattice, inner, gate)?;
            if let Level::At(l) = level {
                if !lattice.leq(l, *target) {
                    return Err(ExprError::BadNormTarget {
                        target: lattice.subgroup(*target).canonical_id(),
                        level: lattice.subgroup(l).canonical_id(),
                    });
                }
                if let Some(ix) = gate {
                    if !ix.is_orbit_admissible(lattice, *target, l) {
                        return Err(ExprError::InadmissibleNorm {
                            orbit: format!(
                                "{}/{}",
                                lattice.subgroup(*target).canonical_id(),
                                lattice.subgroup(l).canonical_id()
                            ),
                            level: lattice.subgroup(*target).canonical_id(),
                        });
                    }
                }
            }
            Ok(Level::At(*target))
        }
        NormExpr::Smash(factors) => {
            let mut level = Level::Any;
            for factor in factors {
                let l = typecheck(lattice, factor, gate)?;
                level = match (level, l) {
                    (Level::Any, l) => l,
                    (l, Level::Any) => l,
                    (Level::At(a), Level::At(b)) if a == b => Level::At(a),
                    (Level::At(a), Level::At(b)) => {
                        return Err(ExprError::LevelMismatch {
                            context: "smash factors".into(),
                            expected: lattice.subgroup(a).canonical_id(),
                            found: lattice.subgroup(b).canonical_id(),
                        })
                    }
                };
            }
            Ok(level)
        }
        NormExpr::Npow { exponent, inner } => {
            let level = typecheck(lattice, inner, gate)?;
            if let Level::At(l) = level {
                if exponent.level() != l {
                    return Err(ExprError::LevelMismatch {
                        context: "Npow exponent".into(),
                        expected: lattice.subgroup(l).canonical_id(),
                        found: lattice.subgroup(exponent.level()).canonical_id(),
                    });
                }
            }
            if let Some(ix) = gate {
                if !ix.is_admissible(lattice, exponent) {
                    return Err(ExprError::InadmissibleNorm {
                        orbit: format!("{:?}", exponent.orbits()),
                        level: lattice.subgroup(exponent.level()).canonical_id(),
                    });
                }
            }
            Ok(Level::At(exponent.level()))
        }
    }
}

// ---------------------------------------------------------------------
// text forms
// ---------------------------------------------------------------------

/// Renders a G-set literal: `m*H/K` terms joined by `, `, or `empty@H`.
pub fn gset_to_text(lattice: &SubgroupLattice, names: &Names, gset: &GSet) -> String {
    if gset.is_empty() {
        return format!("empty@{}", names.of(lattice, gset.level()));
    }
    gset.orbits()
        .iter()
        .map(|&(stab, mult)| {
            let level = names.of(lattice, gset.level());
            let stab = names.stabilizer(lattice, gset.level(), stab);
            if mult == 1 {
                format!("{level}/{stab}")
            } else {
                format!("{mult}*{level}/{stab}")
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn expr_to_text(lattice: &SubgroupLattice, names: &Names, expr: &NormExpr) -> String {
    match expr {
        NormExpr::Var(v) => v.clone(),
        NormExpr::Res { target, inner } => format!(
            "res[{}]({})",
            names.of(lattice, *target),
            expr_to_text(lattice, names, inner)
        ),
        NormExpr::Norm { target, inner } => format!(
            "norm[{}]({})",
            names.of(lattice, *target),
            expr_to_text(lattice, names, inner)
        ),
        NormExpr::Smash(es) if es.is_empty() => "1".into(),
        NormExpr::Smash(es) => format!(
            "smash({})",
            es.iter()
                .map(|e| expr_to_text(lattice, names, e))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        NormExpr::Npow { exponent, inner } => format!(
            "Npow[{}]({})",
            gset_to_text(lattice, names, exponent),
            expr_to_text(lattice, names, inner)
        ),
    }
}

// ---------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    lattice: &'a SubgroupLattice,
    names: &'a Names,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> ExprError {
        ExprError::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, expected: u8) -> Result<(), ExprError> {
        if self.peek() == Some(expected) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", expected as char)))
        }
    }

    fn ident(&mut self) -> Result<String, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an identifier"));
        }
        Ok(self.text[start..self.pos].to_string())
    }

    fn number(&mut self) -> Result<usize, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| self.error("number out of range"))
    }

    /// A subgroup reference: a class name or `[0,2,..]`.
    fn subgroup_ref(&mut self, level: Option<SubgroupId>) -> Result<SubgroupId, ExprError> {
        self.skip_ws();
        let text = if self.peek() == Some(b'[') {
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos] != b']' {
                self.pos += 1;
            }
            self.eat(b']')?;
            &self.text[start..self.pos]
        } else {
            let start = self.pos;
            let _ = self.ident()?;
            &self.text[start..self.pos]
        };
        let resolved = match level {
            Some(level) => self.names.resolve_stabilizer(self.lattice, level, text),
            None => self.names.resolve(self.lattice, text),
        };
        resolved.ok_or_else(|| ExprError::UnknownSubgroup(text.to_string()))
    }

    /// `empty@H` or comma-separated `m*H/K` orbit terms (the multiplicity
    /// may also be separated by whitespace).
    fn gset_literal(&mut self) -> Result<GSet, ExprError> {
        self.skip_ws();
        if self.text[self.pos..].starts_with("empty") {
            self.pos += "empty".len();
            self.eat(b'@')?;
            let level = self.subgroup_ref(None)?;
            return Ok(GSet::empty(level));
        }
        let mut level: Option<SubgroupId> = None;
        let mut orbits: Vec<(SubgroupId, usize)> = Vec::new();
        loop {
            self.skip_ws();
            let mult = if self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
                let m = self.number()?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                }
                m
            } else {
                1
            };
            let h = self.subgroup_ref(None)?;
            match level {
                None => level = Some(h),
                Some(l) if l == h => {}
                Some(l) => {
                    return Err(ExprError::LevelMismatch {
                        context: "orbit terms of one G-set literal".into(),
                        expected: self.lattice.subgroup(l).canonical_id(),
                        found: self.lattice.subgroup(h).canonical_id(),
                    })
                }
            }
            self.eat(b'/')?;
            let k = self.subgroup_ref(Some(h))?;
            if !self.lattice.leq(k, h) {
                return Err(self.error("stabilizer does not lie in the level"));
            }
            let rep = self.lattice.classes_at(h).rep_of(k);
            orbits.push((rep, mult));
            if self.peek() == Some(b',') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(GSet::from_orbits(level.expect("at least one orbit"), orbits))
    }

    fn expr(&mut self) -> Result<NormExpr, ExprError> {
        self.skip_ws();
        if self.peek() == Some(b'1') {
            self.pos += 1;
            return Ok(NormExpr::unit());
        }
        let start = self.pos;
        let head = self.ident()?;
        match head.as_str() {
            "res" | "norm" => {
                self.eat(b'[')?;
                let target = self.subgroup_ref(None)?;
                self.eat(b']')?;
                self.eat(b'(')?;
                let inner = self.expr()?;
                self.eat(b')')?;
                Ok(if head == "res" {
                    NormExpr::res(target, inner)
                } else {
                    NormExpr::norm(target, inner)
                })
            }
            "smash" => {
                self.eat(b'(')?;
                let mut factors = Vec::new();
                if self.peek() != Some(b')') {
                    loop {
                        factors.push(self.expr()?);
                        if self.peek() == Some(b',') {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.eat(b')')?;
                Ok(NormExpr::Smash(factors))
            }
            "Npow" => {
                self.eat(b'[')?;
                let exponent = self.gset_literal()?;
                self.eat(b']')?;
                self.eat(b'(')?;
                let inner = self.expr()?;
                self.eat(b')')?;
                Ok(NormExpr::npow(exponent, inner))
            }
            _ => {
                // a variable; reject reserved words used bare
                if head == "empty" {
                    self.pos = start;
                    return Err(self.error("'empty' is reserved for G-set literals"));
                }
                Ok(NormExpr::var(head))
            }
        }
    }
}

/// Parses an expression in the surface grammar
/// `X | res[H](e) | norm[H](e) | smash(e, ...) | Npow[gset](e) | 1`.
pub fn parse(
    lattice: &SubgroupLattice,
    names: &Names,
    text: &str,
) -> Result<NormExpr, ExprError> {
    let mut parser = Parser {
        text,
        bytes: text.as_bytes(),
        pos: 0,
        lattice,
        names,
    };
    let expr = parser.expr()?;
    parser.skip_ws();
    if parser.pos != text.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(expr)
}

/// Parses a standalone G-set literal.
pub fn parse_gset(
    lattice: &SubgroupLattice,
    names: &Names,
    text: &str,
) -> Result<GSet, ExprError> {
    let mut parser = Parser {
        text,
        bytes: text.as_bytes(),
        pos: 0,
        lattice,
        names,
    };
    let gset = parser.gset_literal()?;
    parser.skip_ws();
    if parser.pos != text.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(gset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::limits::Limits;
    use crate::perm::Permutation;
    use std::sync::Arc;

    fn c4() -> (Arc<SubgroupLattice>, Names) {
        let gen = Permutation::from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap();
        let group = FiniteGroup::new("C4", 4, vec![gen], &Limits::default()).unwrap();
        let lat = SubgroupLattice::build(group, &Limits::default()).unwrap();
        let names = Names::build(&lat);
        (lat, names)
    }

    #[test]
    fn variables_live_at_the_top() {
        let (lat, names) = c4();
        let e = parse(&lat, &names, "X").unwrap();
        assert_eq!(typecheck(&lat, &e, None).unwrap(), Level::At(lat.full()));
    }

    #[test]
    fn nested_res_norm_res_typechecks() {
        let (lat, names) = c4();
        let e = parse(&lat, &names, "res[C2](norm[C4](res[C2](X)))").unwrap();
        let c2 = names.resolve(&lat, "C2").unwrap();
        assert_eq!(typecheck(&lat, &e, None).unwrap(), Level::At(c2));
    }

    #[test]
    fn gating_rejects_inadmissible_norms() {
        let (lat, names) = c4();
        let e = parse(&lat, &names, "norm[C4](res[e](X))").unwrap();
        let complete = crate::indexing::IndexingSystem::complete(&lat);
        assert!(typecheck(&lat, &e, Some(&complete)).is_ok());
        // the mixed system on C4 admits only the C4/C2 norm
        let c2 = names.resolve(&lat, "C2").unwrap();
        let mixed =
            crate::indexing::IndexingSystem::from_pairs(&lat, vec![(lat.full(), c2)]).unwrap();
        assert!(matches!(
            typecheck(&lat, &e, Some(&mixed)),
            Err(ExprError::InadmissibleNorm { .. })
        ));
    }

    #[test]
    fn gset_literals_round_trip() {
        let (lat, names) = c4();
        for text in ["C4/C2", "2*C4/e, C4/C2", "empty@C2", "3*C2/C2"] {
            let gset = parse_gset(&lat, &names, text).unwrap();
            let printed = gset_to_text(&lat, &names, &gset);
            let reparsed = parse_gset(&lat, &names, &printed).unwrap();
            assert_eq!(gset, reparsed, "round trip through {printed}");
        }
    }

    #[test]
    fn expressions_round_trip() {
        let (lat, names) = c4();
        for text in [
            "X",
            "res[C2](X)",
            "norm[C4](res[e](X))",
            "smash(X, X)",
            "Npow[C4/C2](X)",
            "Npow[2*C4/C2, C4/e](smash(X, Y))",
            "1",
        ] {
            let e = parse(&lat, &names, text).unwrap();
            let printed = expr_to_text(&lat, &names, &e);
            assert_eq!(parse(&lat, &names, &printed).unwrap(), e);
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let (lat, names) = c4();
        let err = parse(&lat, &names, "res[C2](X").unwrap_err();
        assert!(matches!(err, ExprError::Syntax { position: 9, .. }));
        let err = parse(&lat, &names, "res[Q9](X)").unwrap_err();
        assert!(matches!(err, ExprError::UnknownSubgroup(_)));
    }

    #[test]
    fn level_mismatch_is_rejected() {
        let (lat, names) = c4();
        // exponent at C2 under an expression at C4
        let e = parse(&lat, &names, "Npow[C2/e](X)").unwrap();
        assert!(matches!(
            typecheck(&lat, &e, None),
            Err(ExprError::LevelMismatch { .. })
        ));
        let e = parse(&lat, &names, "smash(X, res[C2](X))").unwrap();
        assert!(matches!(
            typecheck(&lat, &e, None),
            Err(ExprError::LevelMismatch { .. })
        ));
    }

    #[test]
    fn res_target_must_be_contained() {
        let (lat, names) = c4();
        let e = parse(&lat, &names, "res[C4](res[C2](X))").unwrap();
        assert!(matches!(
            typecheck(&lat, &e, None),
            Err(ExprError::BadResTarget { .. })
        ));
        let e = parse(&lat, &names, "norm[C2](X)").unwrap();
        assert!(matches!(
            typecheck(&lat, &e, None),
            Err(ExprError::BadNormTarget { .. })
        ));
    }
}
