//! Relation systems that turn a raw tangle into `scalar x basis diagram`, and
//! the admissibility classes that pick out each algebra's basis.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Scalar, Var};
use crate::tangle::{enumerate_matchings, DecoratedTangle, Generator, NodeRef, TangleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("Temperley-Lieb reduction received a decorated tangle")]
    DecoratedInputForTL,
    #[error("expected {expected}|{expected} nodes, got {north}|{south}")]
    FaceMismatch {
        expected: usize,
        north: usize,
        south: usize,
    },
    #[error(transparent)]
    Tangle(#[from] TangleError),
}

/// Which relation system governs reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "tl")]
    TL,
    #[serde(rename = "blob")]
    Blob,
    #[serde(rename = "typeB")]
    TypeB,
    #[serde(rename = "typeD")]
    TypeD,
    #[serde(rename = "dquot")]
    DQuotient,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::TL,
        Family::Blob,
        Family::TypeB,
        Family::TypeD,
        Family::DQuotient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::TL => "tl",
            Family::Blob => "blob",
            Family::TypeB => "typeB",
            Family::TypeD => "typeD",
            Family::DQuotient => "dquot",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tl" | "a" | "typea" => Ok(Family::TL),
            "blob" | "b_n" => Ok(Family::Blob),
            "typeb" | "b" | "tlb" => Ok(Family::TypeB),
            "typed" | "d" | "tld" => Ok(Family::TypeD),
            "dquot" | "dquotient" | "d_n" => Ok(Family::DQuotient),
            _ => Err(format!(
                "unknown algebra `{s}` (expected tl, blob, typeB, typeD, dquot)"
            )),
        }
    }
}

/// An algebra family at a given rank with its loop parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraKind {
    family: Family,
    rank: usize,
    delta: Scalar,
    delta_prime: Option<Scalar>,
}

impl AlgebraKind {
    /// `TL_n` with a free loop value `d`.
    pub fn tl(rank: usize) -> Self {
        AlgebraKind {
            family: Family::TL,
            rank,
            delta: Scalar::var(Var::D),
            delta_prime: None,
        }
    }

    /// `b_n(d, dp)` with both loop values free.
    pub fn blob(rank: usize) -> Self {
        AlgebraKind {
            family: Family::Blob,
            rank,
            delta: Scalar::var(Var::D),
            delta_prime: Some(Scalar::var(Var::Dp)),
        }
    }

    /// `TL(B_n)` on `n+1` strands with `delta = [2]`, `delta' = [2]/2`.
    pub fn type_b(rank: usize) -> Self {
        let two = Scalar::quantum_two();
        let half = two.scale(&num_rational::BigRational::new(1.into(), 2.into()));
        AlgebraKind {
            family: Family::TypeB,
            rank,
            delta: two,
            delta_prime: Some(half),
        }
    }

    /// `TL(D_n)` with `delta = [2]`.
    pub fn type_d(rank: usize) -> Self {
        AlgebraKind {
            family: Family::TypeD,
            rank,
            delta: Scalar::quantum_two(),
            delta_prime: None,
        }
    }

    /// `d_n`: type D with odd-decorated loops set to zero.
    pub fn d_quotient(rank: usize) -> Self {
        AlgebraKind {
            family: Family::DQuotient,
            ..AlgebraKind::type_d(rank)
        }
    }

    /// The default parameters for `family`.
    pub fn new(family: Family, rank: usize) -> Self {
        match family {
            Family::TL => Self::tl(rank),
            Family::Blob => Self::blob(rank),
            Family::TypeB => Self::type_b(rank),
            Family::TypeD => Self::type_d(rank),
            Family::DQuotient => Self::d_quotient(rank),
        }
    }

    pub fn with_delta(mut self, delta: Scalar) -> Self {
        self.delta = delta;
        self
    }

    /// Ignored by families without decorated loops.
    pub fn with_delta_prime(mut self, delta_prime: Scalar) -> Self {
        if matches!(self.family, Family::Blob | Family::TypeB) {
            self.delta_prime = Some(delta_prime);
        }
        self
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn delta(&self) -> &Scalar {
        &self.delta
    }

    pub fn delta_prime(&self) -> Option<&Scalar> {
        self.delta_prime.as_ref()
    }

    /// Nodes per face of the carrier `DT_m`.
    pub fn strands(&self) -> usize {
        match self.family {
            Family::TypeB => self.rank + 1,
            _ => self.rank,
        }
    }

    pub fn identity(&self) -> DecoratedTangle {
        DecoratedTangle::identity(self.strands())
    }

    /// The standard generating set, in a fixed order.
    pub fn generators(&self) -> Vec<Generator> {
        let m = self.strands();
        match self.family {
            Family::TL => (1..m).map(Generator::Ei).collect(),
            Family::Blob => std::iter::once(Generator::E)
                .chain((1..m).map(Generator::Ei))
                .collect(),
            Family::TypeB => std::iter::once(Generator::EBar)
                .chain((2..m).map(Generator::Ei))
                .collect(),
            Family::TypeD | Family::DQuotient => {
                if m < 2 {
                    return Vec::new();
                }
                std::iter::once(Generator::EBar)
                    .chain((1..m).map(Generator::Ei))
                    .collect()
            }
        }
    }

    /// Whether `g` may appear in words over this algebra. The extended
    /// alphabet admits every named tangle of the carrier that the relation
    /// system can reduce.
    pub fn is_legal(&self, g: Generator, alphabet: Alphabet) -> bool {
        match alphabet {
            Alphabet::Standard => self.generators().contains(&g),
            Alphabet::Extended => {
                let m = self.strands();
                match g {
                    Generator::Ei(i) => i >= 1 && i < m,
                    Generator::E => self.family != Family::TL && m >= 1,
                    Generator::EBar => self.family != Family::TL && m >= 2,
                }
            }
        }
    }

    /// Evaluates a reduction's loop counts as a scalar.
    pub fn weight(&self, r: &Reduction) -> Scalar {
        if r.vanishes {
            return Scalar::zero();
        }
        let mut out = self.delta.pow(r.delta_pow as i32);
        if r.delta_prime_pow > 0 {
            let dp = self
                .delta_prime
                .as_ref()
                .expect("decorated loop removed in a family without delta'");
            out = &out * &dp.pow(r.delta_prime_pow as i32);
        }
        out
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rank {} (delta = {}", self.family, self.rank, self.delta)?;
        if let Some(dp) = &self.delta_prime {
            write!(f, ", delta' = {dp}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Alphabet {
    #[default]
    Standard,
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AdmissibilityClass {
    B1,
    B1prime,
    B2,
    D1,
    D2,
    TLPlain,
    BlobDiagram,
    NotBasis,
}

impl AdmissibilityClass {
    pub fn name(self) -> &'static str {
        match self {
            AdmissibilityClass::B1 => "B1",
            AdmissibilityClass::B1prime => "B1prime",
            AdmissibilityClass::B2 => "B2",
            AdmissibilityClass::D1 => "D1",
            AdmissibilityClass::D2 => "D2",
            AdmissibilityClass::TLPlain => "TLPlain",
            AdmissibilityClass::BlobDiagram => "BlobDiagram",
            AdmissibilityClass::NotBasis => "NotBasis",
        }
    }

    /// The basis classes a family can produce.
    pub fn for_family(family: Family) -> &'static [AdmissibilityClass] {
        use AdmissibilityClass::*;
        match family {
            Family::TL => &[TLPlain],
            Family::Blob => &[BlobDiagram],
            Family::TypeB => &[B1, B1prime, B2],
            Family::TypeD => &[D1, D2],
            Family::DQuotient => &[D2],
        }
    }
}

impl fmt::Display for AdmissibilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of reducing a raw tangle: the normal-form diagram and the loop
/// factors removed on the way (`delta^a * delta'^b`, or zero).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Reduction {
    pub diagram: DecoratedTangle,
    pub delta_pow: u32,
    pub delta_prime_pow: u32,
    pub vanishes: bool,
}

impl Reduction {
    pub fn unit(diagram: DecoratedTangle) -> Self {
        Reduction {
            diagram,
            delta_pow: 0,
            delta_prime_pow: 0,
            vanishes: false,
        }
    }

    /// Whether the coefficient is exactly one.
    pub fn is_unit(&self) -> bool {
        !self.vanishes && self.delta_pow == 0 && self.delta_prime_pow == 0
    }
}

fn check_faces(raw: &DecoratedTangle, kind: &AlgebraKind) -> Result<(), EngineError> {
    let m = kind.strands();
    if raw.n_north() != m || raw.n_south() != m {
        return Err(EngineError::FaceMismatch {
            expected: m,
            north: raw.n_north(),
            south: raw.n_south(),
        });
    }
    Ok(())
}

/// Normal form of `raw` in one pass over its decoration counts.
pub fn reduce_counts(raw: &DecoratedTangle, kind: &AlgebraKind) -> Result<Reduction, EngineError> {
    check_faces(raw, kind)?;
    let mut out = Reduction::unit(raw.without_loops());
    match kind.family {
        Family::TL => {
            if !raw.is_undecorated() {
                return Err(EngineError::DecoratedInputForTL);
            }
            out.delta_pow = raw.loops().len() as u32;
        }
        Family::Blob | Family::TypeB => {
            out.diagram = raw.remap(|e| e.decorations().min(1), Vec::new());
            for &r in raw.loops() {
                if r == 0 {
                    out.delta_pow += 1;
                } else {
                    out.delta_prime_pow += 1;
                }
            }
        }
        Family::TypeD | Family::DQuotient => {
            let even = raw.loops().iter().filter(|&&r| r % 2 == 0).count() as u32;
            let odd = raw.loops().len() as u32 - even;
            out.delta_pow = even;
            if odd == 0 {
                out.diagram = raw.remap(|e| e.decorations() % 2, Vec::new());
            } else {
                out.delta_pow += odd - 1;
                out.diagram = raw.remap(|_| 0, vec![1]);
            }
            if kind.family == Family::DQuotient && odd > 0 {
                out.vanishes = true;
                out.diagram = out.diagram.without_loops();
            }
        }
    }
    Ok(out)
}

/// `(scalar, diagram)` normal form of a raw tangle.
pub fn reduce(raw: &DecoratedTangle, kind: &AlgebraKind) -> Result<(Scalar, DecoratedTangle), EngineError> {
    let r = reduce_counts(raw, kind)?;
    Ok((kind.weight(&r), r.diagram))
}

/// A single local rewrite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    /// decorations on an arc: `r -> r-1` (e^2 = e)
    ArcIdempotent(usize),
    LoopIdempotent(usize),
    /// delete a loop with at most one decoration for `delta` or `delta'`
    LoopRemove(usize),
    /// decorations on an arc: `r -> r-2`
    ArcPairCancel(usize),
    LoopPairCancel(usize),
    /// two once-decorated loops become one, for a factor `delta`
    OddLoopMerge(usize, usize),
    /// an arc loses its decorations next to an odd loop
    Absorb(usize),
}

/// Reduces `raw` by applying local rewrites one at a time, choosing each next
/// rewrite uniformly among those that apply. The end result does not depend
/// on the choices.
pub fn reduce_stepwise<R: Rng + ?Sized>(
    raw: &DecoratedTangle,
    kind: &AlgebraKind,
    rng: &mut R,
) -> Result<Reduction, EngineError> {
    check_faces(raw, kind)?;
    if kind.family == Family::TL && !raw.is_undecorated() {
        return Err(EngineError::DecoratedInputForTL);
    }
    let mut arcs: Vec<u32> = raw.edges().iter().map(|e| e.decorations()).collect();
    let mut loops: Vec<u32> = raw.loops().to_vec();
    let mut delta_pow = 0u32;
    let mut delta_prime_pow = 0u32;

    loop {
        let mut rules = Vec::new();
        match kind.family {
            Family::TL => rules.extend((0..loops.len()).map(Rule::LoopRemove)),
            Family::Blob | Family::TypeB => {
                for (k, &r) in arcs.iter().enumerate() {
                    if r >= 2 {
                        rules.push(Rule::ArcIdempotent(k));
                    }
                }
                for (k, &r) in loops.iter().enumerate() {
                    if r >= 2 {
                        rules.push(Rule::LoopIdempotent(k));
                    } else {
                        rules.push(Rule::LoopRemove(k));
                    }
                }
            }
            Family::TypeD | Family::DQuotient => {
                for (k, &r) in arcs.iter().enumerate() {
                    if r >= 2 {
                        rules.push(Rule::ArcPairCancel(k));
                    }
                }
                for (k, &r) in loops.iter().enumerate() {
                    if r >= 2 {
                        rules.push(Rule::LoopPairCancel(k));
                    } else if r == 0 {
                        rules.push(Rule::LoopRemove(k));
                    }
                }
                let ones: Vec<usize> = (0..loops.len()).filter(|&k| loops[k] == 1).collect();
                for (x, &a) in ones.iter().enumerate() {
                    for &b in &ones[x + 1..] {
                        rules.push(Rule::OddLoopMerge(a, b));
                    }
                }
                if loops.iter().any(|r| r % 2 == 1) {
                    for (k, &r) in arcs.iter().enumerate() {
                        if r >= 1 {
                            rules.push(Rule::Absorb(k));
                        }
                    }
                }
            }
        }
        if rules.is_empty() {
            break;
        }
        match rules[rng.random_range(0..rules.len())] {
            Rule::ArcIdempotent(k) => arcs[k] -= 1,
            Rule::LoopIdempotent(k) => loops[k] -= 1,
            Rule::LoopRemove(k) => {
                if loops.swap_remove(k) == 0 {
                    delta_pow += 1;
                } else {
                    delta_prime_pow += 1;
                }
            }
            Rule::ArcPairCancel(k) => arcs[k] -= 2,
            Rule::LoopPairCancel(k) => loops[k] -= 2,
            Rule::OddLoopMerge(_, b) => {
                loops.swap_remove(b);
                delta_pow += 1;
            }
            Rule::Absorb(k) => arcs[k] = 0,
        }
    }

    let mut idx = 0;
    let mut diagram = raw.remap(
        |_| {
            idx += 1;
            arcs[idx - 1]
        },
        loops,
    );
    let mut vanishes = false;
    if kind.family == Family::DQuotient && !diagram.loops().is_empty() {
        // the surviving loop is odd
        vanishes = true;
        diagram = diagram.without_loops();
    }
    Ok(Reduction {
        diagram,
        delta_pow,
        delta_prime_pow,
        vanishes,
    })
}

/// The admissibility class of a reduced diagram. Anything outside the
/// family's normal form is `NotBasis`.
pub fn classify(d: &DecoratedTangle, kind: &AlgebraKind) -> AdmissibilityClass {
    use AdmissibilityClass::*;
    let m = kind.strands();
    if d.n_north() != m || d.n_south() != m {
        return NotBasis;
    }
    let max_edge = d.edges().iter().map(|e| e.decorations()).max().unwrap_or(0);
    let edge_total: u32 = d.edges().iter().map(|e| e.decorations()).sum();
    match kind.family {
        Family::TL => {
            if d.is_undecorated() && d.loops().is_empty() {
                TLPlain
            } else {
                NotBasis
            }
        }
        Family::Blob => {
            if d.loops().is_empty() && max_edge <= 1 {
                BlobDiagram
            } else {
                NotBasis
            }
        }
        Family::TypeB => {
            if !d.loops().is_empty() || max_edge > 1 || m == 0 {
                return NotBasis;
            }
            let north = d.edge_at(NodeRef::north(1)).expect("node N1 is matched");
            let south = d.edge_at(NodeRef::south(1)).expect("node S1 is matched");
            if north == south {
                if north.decorations() == 0 && edge_total == 0 {
                    B1
                } else if north.decorations() == 1 && edge_total == 1 && d.has_non_propagating() {
                    B1prime
                } else {
                    NotBasis
                }
            } else if north.decorations() == 1 && south.decorations() == 1 {
                B2
            } else {
                NotBasis
            }
        }
        Family::TypeD | Family::DQuotient => {
            if max_edge > 1 {
                return NotBasis;
            }
            match d.loops() {
                [] if edge_total.is_multiple_of(2) => D2,
                [1] if kind.family == Family::TypeD && edge_total == 0 && d.has_non_propagating() => D1,
                _ => NotBasis,
            }
        }
    }
}

/// The diagram basis of `kind`, in canonical order.
pub fn enumerate_basis(kind: &AlgebraKind) -> Vec<DecoratedTangle> {
    let m = kind.strands();
    let matchings = enumerate_matchings(m, m).expect("square tangles have an even node count");
    let mut out: Vec<DecoratedTangle> = match kind.family {
        Family::TL => matchings,
        Family::Blob | Family::TypeB | Family::DQuotient => matchings
            .iter()
            .flat_map(|t| t.blob_decorations())
            .collect(),
        Family::TypeD => {
            let mut v: Vec<DecoratedTangle> =
                matchings.iter().flat_map(|t| t.blob_decorations()).collect();
            v.extend(matchings.iter().map(|t| t.with_loops([1])));
            v
        }
    };
    out.retain(|d| classify(d, kind) != AdmissibilityClass::NotBasis);
    out.sort();
    out
}

/// Number of basis diagrams in each class the family uses.
pub fn count_by_class(kind: &AlgebraKind) -> BTreeMap<AdmissibilityClass, usize> {
    let mut counts: BTreeMap<AdmissibilityClass, usize> = AdmissibilityClass::for_family(kind.family)
        .iter()
        .map(|&c| (c, 0))
        .collect();
    for d in enumerate_basis(kind) {
        *counts.entry(classify(&d, kind)).or_default() += 1;
    }
    counts
}

/// `reduce(x . y)` with the loop factors of both inputs carried along.
pub fn multiply_reductions(x: &Reduction, y: &Reduction, kind: &AlgebraKind) -> Result<Reduction, EngineError> {
    let raw = x.diagram.concatenate(&y.diagram)?;
    let mut r = reduce_counts(&raw, kind)?;
    r.delta_pow += x.delta_pow + y.delta_pow;
    r.delta_prime_pow += x.delta_prime_pow + y.delta_prime_pow;
    r.vanishes |= x.vanishes || y.vanishes;
    Ok(r)
}

/// Product of two diagrams, reduced.
pub fn multiply_diagrams(x: &DecoratedTangle, y: &DecoratedTangle, kind: &AlgebraKind) -> Result<Reduction, EngineError> {
    reduce_counts(&x.concatenate(y)?, kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn gen(g: Generator, m: usize) -> DecoratedTangle {
        DecoratedTangle::generator(g, m).unwrap()
    }

    #[test]
    fn blob_decorated_loop_gives_delta_prime() {
        let kind = AlgebraKind::blob(2);
        let raw = gen(Generator::Ei(1), 2).with_loops([1]);
        let (s, d) = reduce(&raw, &kind).unwrap();
        assert_eq!(s, Scalar::var(Var::Dp));
        assert_eq!(d, gen(Generator::Ei(1), 2));
    }

    #[test]
    fn tl_loop_gives_delta() {
        let kind = AlgebraKind::tl(2);
        let raw = gen(Generator::Ei(1), 2).with_loops([0]);
        assert_eq!(
            reduce(&raw, &kind).unwrap(),
            (Scalar::var(Var::D), gen(Generator::Ei(1), 2))
        );
        let e = gen(Generator::E, 2);
        assert_eq!(reduce(&e, &kind).unwrap_err(), EngineError::DecoratedInputForTL);
    }

    #[test]
    fn type_d_two_odd_loops_merge() {
        let kind = AlgebraKind::type_d(2);
        let e1 = gen(Generator::Ei(1), 2);
        let raw = e1.with_loops([1, 1]);
        let (s, d) = reduce(&raw, &kind).unwrap();
        assert_eq!(s, Scalar::quantum_two());
        assert_eq!(d, e1.with_loops([1]));
    }

    #[test]
    fn type_d_arc_pairs_cancel() {
        let kind = AlgebraKind::type_d(2);
        let raw: DecoratedTangle = "2|2 :: N1-S1**,N2-S2 ;loops:-".parse().unwrap();
        let (s, d) = reduce(&raw, &kind).unwrap();
        assert!(s.is_one());
        assert_eq!(d, DecoratedTangle::identity(2));
    }

    #[test]
    fn type_d_absorption() {
        let kind = AlgebraKind::type_d(3);
        let raw: DecoratedTangle = "3|3 :: N1-N2*,N3-S1*,S2-S3 ;loops:3".parse().unwrap();
        let (s, d) = reduce(&raw, &kind).unwrap();
        assert!(s.is_one());
        assert_eq!(d.to_string(), "3|3 :: N1-N2,N3-S1,S2-S3 ;loops:1");
        let q = AlgebraKind::d_quotient(3);
        let (s, d) = reduce(&raw, &q).unwrap();
        assert!(s.is_zero());
        assert!(d.loops().is_empty());
    }

    #[test]
    fn face_mismatch_reported() {
        let kind = AlgebraKind::type_b(2);
        assert!(matches!(
            reduce(&DecoratedTangle::identity(2), &kind),
            Err(EngineError::FaceMismatch { expected: 3, .. })
        ));
    }

    #[test]
    fn classification_examples() {
        let b2 = AlgebraKind::type_b(2);
        assert_eq!(classify(&DecoratedTangle::identity(3), &b2), AdmissibilityClass::B1);
        assert_eq!(classify(&gen(Generator::E, 3), &b2), AdmissibilityClass::NotBasis);
        assert_eq!(classify(&gen(Generator::EBar, 3), &b2), AdmissibilityClass::B2);
        let d4 = AlgebraKind::type_d(4);
        assert_eq!(
            classify(&gen(Generator::Ei(1), 4).with_loops([1]), &d4),
            AdmissibilityClass::D1
        );
        assert_eq!(
            classify(&DecoratedTangle::identity(4).with_loops([1]), &d4),
            AdmissibilityClass::NotBasis
        );
        assert_eq!(classify(&gen(Generator::E, 4), &d4), AdmissibilityClass::NotBasis);
        assert_eq!(classify(&DecoratedTangle::identity(4), &d4), AdmissibilityClass::D2);
    }

    #[test]
    fn identity_classes() {
        use AdmissibilityClass::*;
        for (kind, class) in [
            (AlgebraKind::type_b(3), B1),
            (AlgebraKind::type_d(4), D2),
            (AlgebraKind::tl(3), TLPlain),
            (AlgebraKind::blob(3), BlobDiagram),
            (AlgebraKind::d_quotient(3), D2),
        ] {
            assert_eq!(classify(&kind.identity(), &kind), class);
        }
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(enumerate_basis(&AlgebraKind::type_b(2)).len(), 7);
        assert_eq!(enumerate_basis(&AlgebraKind::blob(2)).len(), 6);
        assert_eq!(enumerate_basis(&AlgebraKind::type_d(4)).len(), 48);
        assert_eq!(enumerate_basis(&AlgebraKind::d_quotient(4)).len(), 35);
    }

    #[test]
    fn class_counts() {
        use AdmissibilityClass::*;
        let c = count_by_class(&AlgebraKind::type_b(3));
        assert_eq!(c, BTreeMap::from([(B1, 5), (B1prime, 4), (B2, 15)]));
        let c = count_by_class(&AlgebraKind::type_d(4));
        assert_eq!(c, BTreeMap::from([(D1, 13), (D2, 35)]));
        let c = count_by_class(&AlgebraKind::tl(3));
        assert_eq!(c, BTreeMap::from([(TLPlain, 5)]));
    }

    #[test]
    fn stepwise_matches_closed_form_on_examples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let raw: DecoratedTangle = "3|3 :: N1-N2***,N3-S1**,S2-S3 ;loops:0,1,1,2,3".parse().unwrap();
        for kind in [
            AlgebraKind::blob(3),
            AlgebraKind::type_d(3),
            AlgebraKind::d_quotient(3),
        ] {
            let expect = reduce_counts(&raw, &kind).unwrap();
            for _ in 0..50 {
                assert_eq!(reduce_stepwise(&raw, &kind, &mut rng).unwrap(), expect);
            }
        }
    }

    #[test]
    fn generator_sets() {
        use Generator::*;
        assert_eq!(AlgebraKind::type_b(3).generators(), vec![EBar, Ei(2), Ei(3)]);
        assert_eq!(AlgebraKind::type_d(4).generators(), vec![EBar, Ei(1), Ei(2), Ei(3)]);
        assert_eq!(AlgebraKind::blob(2).generators(), vec![E, Ei(1)]);
        assert_eq!(AlgebraKind::tl(3).generators(), vec![Ei(1), Ei(2)]);
        assert!(AlgebraKind::blob(3).is_legal(EBar, Alphabet::Extended));
        assert!(!AlgebraKind::blob(3).is_legal(EBar, Alphabet::Standard));
        assert!(!AlgebraKind::tl(3).is_legal(E, Alphabet::Extended));
    }
}
