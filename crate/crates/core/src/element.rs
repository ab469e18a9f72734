//! Algebra elements as scalar-weighted sums of basis diagrams.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{
    classify, enumerate_basis, multiply_diagrams, multiply_reductions, AdmissibilityClass, AlgebraKind, Alphabet,
    EngineError, Family, Reduction,
};
use crate::scalar::{Scalar, ScalarError, Var};
use crate::tangle::{DecoratedTangle, Generator, TangleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElementError {
    #[error("elements belong to different algebras")]
    KindMismatch,
    #[error("diagram {0} is not a basis diagram of this algebra")]
    NotInBasis(String),
    #[error("letter `{letter}` is not a generator of {kind}")]
    IllegalLetter { letter: String, kind: String },
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A finite linear combination of basis diagrams.
#[derive(Clone, PartialEq, Eq)]
pub struct Element {
    kind: AlgebraKind,
    terms: BTreeMap<DecoratedTangle, Scalar>,
}

impl Element {
    pub fn zero(kind: &AlgebraKind) -> Self {
        Element {
            kind: kind.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(kind: &AlgebraKind) -> Self {
        let mut out = Element::zero(kind);
        out.terms.insert(kind.identity(), Scalar::one());
        out
    }

    /// `coeff * diagram`, rejecting diagrams outside the basis.
    pub fn term(kind: &AlgebraKind, diagram: DecoratedTangle, coeff: Scalar) -> Result<Self, ElementError> {
        if classify(&diagram, kind) == AdmissibilityClass::NotBasis {
            return Err(ElementError::NotInBasis(diagram.to_string()));
        }
        let mut out = Element::zero(kind);
        if !coeff.is_zero() {
            out.terms.insert(diagram, coeff);
        }
        Ok(out)
    }

    pub fn basis(kind: &AlgebraKind, diagram: DecoratedTangle) -> Result<Self, ElementError> {
        Element::term(kind, diagram, Scalar::one())
    }

    pub fn from_terms<I>(kind: &AlgebraKind, terms: I) -> Result<Self, ElementError>
    where
        I: IntoIterator<Item = (DecoratedTangle, Scalar)>,
    {
        let mut out = Element::zero(kind);
        for (d, c) in terms {
            out = out.add(&Element::term(kind, d, c)?)?;
        }
        Ok(out)
    }

    /// A named generator as an element (`e~` in type B is `e_{1bar}`, not
    /// `E_1 = 2 e_{1bar}`).
    pub fn generator(kind: &AlgebraKind, g: Generator) -> Result<Self, ElementError> {
        Element::basis(kind, DecoratedTangle::generator(g, kind.strands())?)
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DecoratedTangle, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, d: &DecoratedTangle) -> Scalar {
        self.terms.get(d).cloned().unwrap_or_default()
    }

    /// The only term, if there is exactly one.
    pub fn single_term(&self) -> Option<(&DecoratedTangle, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn same_kind(&self, other: &Element) -> Result<(), ElementError> {
        if self.kind != other.kind {
            return Err(ElementError::KindMismatch);
        }
        Ok(())
    }

    fn insert(&mut self, d: DecoratedTangle, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&d) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&d);
                }
            }
            None => {
                self.terms.insert(d, c);
            }
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element, ElementError> {
        self.same_kind(other)?;
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.insert(d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Element) -> Result<Element, ElementError> {
        self.add(&other.scale(&Scalar::from_integer(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        let mut out = Element::zero(&self.kind);
        for (d, x) in &self.terms {
            out.insert(d.clone(), x * c);
        }
        out
    }

    /// Bilinear extension of reduced diagram composition.
    pub fn multiply(&self, other: &Element) -> Result<Element, ElementError> {
        self.same_kind(other)?;
        let mut out = Element::zero(&self.kind);
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                let r = multiply_diagrams(x, y, &self.kind)?;
                let w = self.kind.weight(&r);
                if w.is_zero() {
                    continue;
                }
                debug_assert_ne!(classify(&r.diagram, &self.kind), AdmissibilityClass::NotBasis);
                out.insert(r.diagram, &(cx * cy) * &w);
            }
        }
        Ok(out)
    }

    /// Applies a variable substitution to every coefficient, keeping the kind.
    pub fn substitute(&self, bindings: &BTreeMap<Var, Scalar>) -> Result<Element, ElementError> {
        let mut out = Element::zero(&self.kind);
        for (d, c) in &self.terms {
            out.insert(d.clone(), c.substitute(bindings)?);
        }
        Ok(out)
    }

    /// Same terms, reinterpreted in another algebra with the same carrier.
    pub fn with_kind(&self, kind: &AlgebraKind) -> Result<Element, ElementError> {
        Element::from_terms(kind, self.terms.iter().map(|(d, c)| (d.clone(), c.clone())))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (d, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if c.len() > 1 {
                write!(f, "({c}) · {{{d}}}")?;
            } else {
                write!(f, "{c} · {{{d}}}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element[{}]({self})", self.kind.family())
    }
}

/// A word in the named generators, read left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorWord {
    letters: Vec<Generator>,
}

impl GeneratorWord {
    pub fn new(letters: Vec<Generator>) -> Self {
        GeneratorWord { letters }
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn count(&self, g: Generator) -> usize {
        self.letters.iter().filter(|&&x| x == g).count()
    }

    pub fn push(&mut self, g: Generator) {
        self.letters.push(g);
    }

    pub fn check_legal(&self, kind: &AlgebraKind, alphabet: Alphabet) -> Result<(), ElementError> {
        match self.letters.iter().find(|&&g| !kind.is_legal(g, alphabet)) {
            Some(g) => Err(ElementError::IllegalLetter {
                letter: g.to_string(),
                kind: format!("{} rank {}", kind.family(), kind.rank()),
            }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, g) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for GeneratorWord {
    type Err = ElementError;

    /// Whitespace-separated tokens `e`, `e~`, `e1`, `e2`, ...
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters = s
            .split_whitespace()
            .map(|tok| match tok {
                "e" => Ok(Generator::E),
                "e~" => Ok(Generator::EBar),
                _ => tok
                    .strip_prefix('e')
                    .and_then(|rest| rest.parse::<usize>().ok())
                    .filter(|&i| i >= 1 && !tok[1..].starts_with('0'))
                    .map(Generator::Ei)
                    .ok_or_else(|| ElementError::Parse(format!("unknown token `{tok}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GeneratorWord { letters })
    }
}

/// Left-to-right product of the word's generator diagrams, as loop counts and
/// a normal-form diagram. Does not require the result to be a basis diagram.
pub fn word_reduction(kind: &AlgebraKind, word: &GeneratorWord, alphabet: Alphabet) -> Result<Reduction, ElementError> {
    word.check_legal(kind, alphabet)?;
    let m = kind.strands();
    let mut acc = Reduction::unit(kind.identity());
    for &g in word.letters() {
        let next = Reduction::unit(DecoratedTangle::generator(g, m)?);
        acc = multiply_reductions(&acc, &next, kind)?;
    }
    Ok(acc)
}

/// Evaluates a word over the standard generators of `kind`.
pub fn evaluate_word(kind: &AlgebraKind, word: &GeneratorWord) -> Result<Element, ElementError> {
    evaluate_word_in(kind, word, Alphabet::Standard)
}

pub fn evaluate_word_in(kind: &AlgebraKind, word: &GeneratorWord, alphabet: Alphabet) -> Result<Element, ElementError> {
    let r = word_reduction(kind, word, alphabet)?;
    let w = kind.weight(&r);
    if w.is_zero() {
        return Ok(Element::zero(kind));
    }
    Element::term(kind, r.diagram, w)
}

/// Basis diagrams reachable from the identity by right multiplication with
/// standard generators, scalars ignored.
pub fn span_reachability(kind: &AlgebraKind) -> BTreeSet<DecoratedTangle> {
    let gens: Vec<DecoratedTangle> = kind
        .generators()
        .into_iter()
        .map(|g| DecoratedTangle::generator(g, kind.strands()).expect("standard generator"))
        .collect();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(kind.identity());
    queue.push_back(kind.identity());
    while let Some(d) = queue.pop_front() {
        for g in &gens {
            let r = multiply_diagrams(&d, g, kind).expect("square tangles compose");
            if r.vanishes {
                continue;
            }
            if seen.insert(r.diagram.clone()) {
                queue.push_back(r.diagram);
            }
        }
    }
    seen
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coeff: Scalar,
}

/// Structure constants of `kind` in its diagram basis: `b_i b_j = sum_k c b_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureTable {
    pub kind: AlgebraKind,
    pub basis: Vec<DecoratedTangle>,
    pub entries: Vec<TableEntry>,
}

impl StructureTable {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The product `b_i b_j` as an element.
    pub fn product(&self, i: usize, j: usize) -> Element {
        let start = self.entries.partition_point(|e| (e.i, e.j) < (i, j));
        let mut out = Element::zero(&self.kind);
        for e in self.entries[start..].iter().take_while(|e| (e.i, e.j) == (i, j)) {
            out.insert(self.basis[e.k].clone(), e.coeff.clone());
        }
        out
    }
}

pub fn structure_constants(kind: &AlgebraKind) -> StructureTable {
    let basis = enumerate_basis(kind);
    let index: BTreeMap<&DecoratedTangle, usize> = basis.iter().enumerate().map(|(k, d)| (d, k)).collect();
    let rows: Vec<Vec<TableEntry>> = (0..basis.len())
        .into_par_iter()
        .map(|i| {
            let mut row = Vec::new();
            for j in 0..basis.len() {
                let r = multiply_diagrams(&basis[i], &basis[j], kind).expect("basis diagrams compose");
                let coeff = kind.weight(&r);
                if coeff.is_zero() {
                    continue;
                }
                let k = *index
                    .get(&r.diagram)
                    .unwrap_or_else(|| panic!("product left the basis: {}", r.diagram));
                row.push(TableEntry { i, j, k, coeff });
            }
            row
        })
        .collect();
    StructureTable {
        kind: kind.clone(),
        basis,
        entries: rows.into_iter().flatten().collect(),
    }
}

// ---------------------------------------------------------------------------
// JSON export.

#[derive(Serialize, Deserialize)]
pub struct ParamsDoc {
    pub delta: Scalar,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta_prime: Option<Scalar>,
}

impl ParamsDoc {
    pub fn of(kind: &AlgebraKind) -> Self {
        ParamsDoc {
            delta: kind.delta().clone(),
            delta_prime: kind.delta_prime().cloned(),
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct TableDoc {
    pub kind: Family,
    pub rank: usize,
    pub params: ParamsDoc,
    pub basis: Vec<String>,
    pub entries: Vec<TableEntry>,
}

impl From<&StructureTable> for TableDoc {
    fn from(t: &StructureTable) -> Self {
        TableDoc {
            kind: t.kind.family(),
            rank: t.kind.rank(),
            params: ParamsDoc::of(&t.kind),
            basis: t.basis.iter().map(|d| d.to_string()).collect(),
            entries: t.entries.clone(),
        }
    }
}

impl TryFrom<TableDoc> for StructureTable {
    type Error = ElementError;

    fn try_from(doc: TableDoc) -> Result<Self, Self::Error> {
        let mut kind = AlgebraKind::new(doc.kind, doc.rank).with_delta(doc.params.delta);
        if let Some(dp) = doc.params.delta_prime {
            kind = kind.with_delta_prime(dp);
        }
        let basis = doc
            .basis
            .iter()
            .map(|s| s.parse::<DecoratedTangle>())
            .collect::<Result<Vec<_>, _>>()?;
        let n = basis.len();
        if let Some(e) = doc.entries.iter().find(|e| e.i >= n || e.j >= n || e.k >= n) {
            return Err(ElementError::Parse(format!(
                "entry ({}, {}, {}) outside a basis of size {n}",
                e.i, e.j, e.k
            )));
        }
        Ok(StructureTable {
            kind,
            basis,
            entries: doc.entries,
        })
    }
}

impl Serialize for StructureTable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TableDoc::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StructureTable {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = TableDoc::deserialize(deserializer)?;
        StructureTable::try_from(doc).map_err(serde::de::Error::custom)
    }
}
