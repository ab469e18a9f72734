//! Reduced words, the B- and D-conditions, and word statistics read off
//! diagrams.
//!
//! A word is *reduced* when it evaluates to a single diagram with
//! coefficient one and no shorter word reaches that diagram, scalars
//! ignored. Shortest distances come from a breadth-first search over the
//! (finite) diagram basis, so certification is exact rather than bounded.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;
use thiserror::Error;

use crate::element::{evaluate_word_in, word_reduction, Element, ElementError, GeneratorWord};
use crate::engine::{multiply_diagrams, AlgebraKind, Alphabet, Family};
use crate::report::VerificationReport;
use crate::scalar::Scalar;
use crate::tangle::{DecoratedTangle, Generator, NodeRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter `{0}` is not allowed here")]
    IllegalLetter(String),
    #[error("condition not satisfied: {0}")]
    ConditionFailed(String),
    #[error("word `{0}` is not reduced")]
    NotReduced(String),
    #[error("diagram {0} is not a plain Temperley-Lieb diagram")]
    NotPlainTL(String),
    #[error("no word of length at most {max_len} evaluates to the target")]
    NotFound { max_len: usize },
    #[error("operation needs a blob algebra, got {0}")]
    NotBlob(Family),
    #[error(transparent)]
    Element(#[from] ElementError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordCondition {
    pub b_condition: bool,
    pub d_condition: bool,
    pub is_reduced: bool,
}

fn blob_letters_only(w: &GeneratorWord) -> Result<(), WordError> {
    match w.letters().iter().find(|&&g| g == Generator::EBar) {
        Some(g) => Err(WordError::IllegalLetter(g.to_string())),
        None => Ok(()),
    }
}

/// `e_1` never appears outside the span of the `e` letters, or neither
/// letter appears at all.
pub fn b_condition(w: &GeneratorWord) -> Result<bool, WordError> {
    blob_letters_only(w)?;
    let pos = |g: Generator| -> Vec<usize> {
        w.letters()
            .iter()
            .enumerate()
            .filter(|&(_, &x)| x == g)
            .map(|(k, _)| k)
            .collect()
    };
    let es = pos(Generator::E);
    let ones = pos(Generator::Ei(1));
    Ok(match (es.first(), es.last(), ones.first(), ones.last()) {
        (None, _, None, _) => true,
        (Some(&lo), Some(&hi), Some(&first), Some(&last)) => lo < first && last < hi,
        _ => false,
    })
}

/// The letter `e` occurs an even number of times.
pub fn d_condition(w: &GeneratorWord) -> Result<bool, WordError> {
    blob_letters_only(w)?;
    Ok(w.count(Generator::E).is_multiple_of(2))
}

/// Exact shortest-word distances for one algebra.
#[derive(Debug, Clone)]
pub struct ReducedWordOracle {
    kind: AlgebraKind,
    generators: Vec<(Generator, DecoratedTangle)>,
    dist: BTreeMap<DecoratedTangle, usize>,
}

impl ReducedWordOracle {
    pub fn new(kind: &AlgebraKind) -> Self {
        let generators: Vec<(Generator, DecoratedTangle)> = kind
            .generators()
            .into_iter()
            .map(|g| (g, DecoratedTangle::generator(g, kind.strands()).expect("standard generator")))
            .collect();
        let mut dist = BTreeMap::new();
        let mut queue = VecDeque::new();
        dist.insert(kind.identity(), 0);
        queue.push_back(kind.identity());
        while let Some(d) = queue.pop_front() {
            let next = dist[&d] + 1;
            for (_, g) in &generators {
                let r = multiply_diagrams(&d, g, kind).expect("square tangles compose");
                if r.vanishes || dist.contains_key(&r.diagram) {
                    continue;
                }
                dist.insert(r.diagram.clone(), next);
                queue.push_back(r.diagram);
            }
        }
        ReducedWordOracle {
            kind: kind.clone(),
            generators,
            dist,
        }
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
    }

    /// Length of the shortest word reaching `d` up to a scalar.
    pub fn min_length(&self, d: &DecoratedTangle) -> Option<usize> {
        self.dist.get(d).copied()
    }

    /// Every diagram reachable from the identity.
    pub fn diagrams(&self) -> impl Iterator<Item = (&DecoratedTangle, usize)> {
        self.dist.iter().map(|(d, &k)| (d, k))
    }

    pub fn is_reduced(&self, w: &GeneratorWord) -> Result<bool, WordError> {
        let r = word_reduction(&self.kind, w, Alphabet::Standard)?;
        Ok(r.is_unit() && self.min_length(&r.diagram) == Some(w.len()))
    }

    pub fn condition(&self, w: &GeneratorWord) -> Result<WordCondition, WordError> {
        Ok(WordCondition {
            b_condition: b_condition(w)?,
            d_condition: d_condition(w)?,
            is_reduced: self.is_reduced(w)?,
        })
    }

    /// All reduced words of length at most `max_len`, in length-then-lexicographic
    /// order of their letters. Prefixes of reduced words are reduced, so the
    /// search prunes as soon as a prefix fails.
    pub fn reduced_words(&self, max_len: usize) -> Vec<GeneratorWord> {
        let root = (Vec::new(), self.kind.identity());
        let mut out = vec![GeneratorWord::default()];
        if max_len == 0 {
            return out;
        }
        // one subtree per first letter, merged in generator order
        let subtrees: Vec<Vec<GeneratorWord>> = self
            .generators
            .par_iter()
            .filter_map(|(g, gd)| {
                let child = self.extend(&root, *g, gd)?;
                let mut acc = Vec::new();
                self.collect(child, max_len, &mut acc);
                Some(acc)
            })
            .collect();
        out.extend(subtrees.into_iter().flatten());
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    fn extend(
        &self,
        (letters, d): &(Vec<Generator>, DecoratedTangle),
        g: Generator,
        gd: &DecoratedTangle,
    ) -> Option<(Vec<Generator>, DecoratedTangle)> {
        let r = multiply_diagrams(d, gd, &self.kind).expect("square tangles compose");
        if !r.is_unit() || self.min_length(&r.diagram) != Some(letters.len() + 1) {
            return None;
        }
        let mut next = letters.clone();
        next.push(g);
        Some((next, r.diagram))
    }

    fn collect(&self, node: (Vec<Generator>, DecoratedTangle), max_len: usize, acc: &mut Vec<GeneratorWord>) {
        if node.0.len() < max_len {
            for (g, gd) in &self.generators {
                if let Some(child) = self.extend(&node, *g, gd) {
                    self.collect(child, max_len, acc);
                }
            }
        }
        acc.push(GeneratorWord::new(node.0));
    }

    fn require_blob_reduced(&self, w: &GeneratorWord) -> Result<(), WordError> {
        if self.kind.family() != Family::Blob {
            return Err(WordError::NotBlob(self.kind.family()));
        }
        blob_letters_only(w)?;
        if !self.is_reduced(w)? {
            return Err(WordError::NotReduced(w.to_string()));
        }
        Ok(())
    }

    /// Rewrites a reduced word satisfying the B-condition over
    /// `{e~, e2, e3, ...}`. Doubling each inner `e` and commuting the pairs
    /// onto the `e1` between them turns every `e e1 e` into `e~`; the net
    /// effect is to drop every `e` and rename each `e1`.
    pub fn rewrite_b(&self, w: &GeneratorWord) -> Result<GeneratorWord, WordError> {
        self.require_blob_reduced(w)?;
        if !b_condition(w)? {
            return Err(WordError::ConditionFailed(format!("`{w}` fails the B-condition")));
        }
        Ok(GeneratorWord::new(
            w.letters()
                .iter()
                .filter(|&&g| g != Generator::E)
                .map(|&g| if g == Generator::Ei(1) { Generator::EBar } else { g })
                .collect(),
        ))
    }

    /// Rewrites a reduced word satisfying the D-condition over
    /// `{e~, e1, e2, ...}`: the `e` letters are twinned in order of
    /// appearance and each twin pair collapses onto the single `e1` it
    /// encloses.
    pub fn rewrite_d(&self, w: &GeneratorWord) -> Result<GeneratorWord, WordError> {
        self.require_blob_reduced(w)?;
        if !d_condition(w)? {
            return Err(WordError::ConditionFailed(format!("`{w}` has an odd number of e")));
        }
        let letters = w.letters();
        let es: Vec<usize> = (0..letters.len()).filter(|&k| letters[k] == Generator::E).collect();
        let mut out = letters.to_vec();
        for pair in es.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            let ones: Vec<usize> = (a + 1..b).filter(|&k| letters[k] == Generator::Ei(1)).collect();
            if ones.len() != 1 {
                return Err(WordError::ConditionFailed(format!(
                    "`{w}`: {} occurrences of e1 between twinned e at positions {a} and {b}",
                    ones.len()
                )));
            }
            out[ones[0]] = Generator::EBar;
        }
        Ok(GeneratorWord::new(out.into_iter().filter(|&g| g != Generator::E).collect()))
    }
}

pub fn rewrite_b(kind: &AlgebraKind, w: &GeneratorWord) -> Result<GeneratorWord, WordError> {
    ReducedWordOracle::new(kind).rewrite_b(w)
}

pub fn rewrite_d(kind: &AlgebraKind, w: &GeneratorWord) -> Result<GeneratorWord, WordError> {
    ReducedWordOracle::new(kind).rewrite_d(w)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortestWords {
    pub length: usize,
    pub witnesses: Vec<GeneratorWord>,
}

/// A single-term element as `(diagram, coefficient)`; `None` for anything else.
type StateKey = Option<(DecoratedTangle, Scalar)>;

/// Exhaustive search for the shortest standard-alphabet words whose
/// evaluation equals `target` exactly, scalar included.
pub fn shortest_word_oracle(target: &Element, max_len: usize) -> Result<ShortestWords, WordError> {
    let kind = target.kind();
    let key_of = |e: &Element| -> StateKey {
        e.single_term().map(|(d, c)| (d.clone(), c.clone()))
    };
    if target.len() > 1 {
        return Err(WordError::NotFound { max_len });
    }
    let goal = key_of(target);
    let letters = kind.generators();
    let mut seen: BTreeSet<StateKey> = BTreeSet::new();
    let start = Element::identity(kind);
    let mut layer: BTreeMap<StateKey, (Element, Vec<Vec<Generator>>)> = BTreeMap::new();
    layer.insert(key_of(&start), (start, vec![Vec::new()]));
    for length in 0..=max_len {
        if let Some((_, words)) = layer.get(&goal) {
            let mut witnesses: Vec<GeneratorWord> = words.iter().cloned().map(GeneratorWord::new).collect();
            witnesses.sort();
            return Ok(ShortestWords { length, witnesses });
        }
        seen.extend(layer.keys().cloned());
        let mut next: BTreeMap<_, (Element, Vec<Vec<Generator>>)> = BTreeMap::new();
        for (elt, words) in layer.values() {
            for &g in &letters {
                let prod = elt.multiply(&Element::generator(kind, g)?)?;
                let key = key_of(&prod);
                if seen.contains(&key) {
                    continue;
                }
                let slot = next.entry(key).or_insert_with(|| (prod, Vec::new()));
                slot.1.extend(words.iter().map(|w| {
                    let mut w = w.clone();
                    w.push(g);
                    w
                }));
            }
        }
        layer = next;
    }
    Err(WordError::NotFound { max_len })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingProfile {
    pub length: usize,
    pub per_line: Vec<usize>,
}

/// For each vertical line between strands `i` and `i + 1`, the number of
/// arcs with exactly one end among the first `i` nodes of each face.
pub fn line_crossing_length(d: &DecoratedTangle) -> Result<CrossingProfile, WordError> {
    let n = d.n_north();
    if d.n_south() != n || !d.is_undecorated() || !d.loops().is_empty() {
        return Err(WordError::NotPlainTL(d.to_string()));
    }
    let per_line: Vec<usize> = (1..n)
        .map(|i| {
            let left = |x: NodeRef| x.index <= i;
            d.edges()
                .iter()
                .filter(|e| {
                    let (a, b) = e.ends();
                    left(a) != left(b)
                })
                .count()
        })
        .collect();
    let total: usize = per_line.iter().sum();
    debug_assert_eq!(total % 2, 0);
    Ok(CrossingProfile {
        length: total / 2,
        per_line,
    })
}

fn indices(w: &GeneratorWord) -> Vec<usize> {
    w.letters()
        .iter()
        .filter_map(|g| match g {
            Generator::Ei(i) => Some(*i),
            _ => None,
        })
        .collect()
}

/// Letters strictly between consecutive occurrences of `g` all avoid `g`,
/// and at least one of them is `h`.
fn separated(w: &GeneratorWord, g: Generator, h: Generator) -> bool {
    let pos: Vec<usize> = (0..w.len()).filter(|&k| w.letters()[k] == g).collect();
    pos.windows(2)
        .all(|p| w.letters()[p[0] + 1..p[1]].contains(&h))
}

/// Exhaustive checks of the reduced-word lemmas for TL and blob algebras.
pub fn verify_word_lemmas(kind: &AlgebraKind, max_len: usize) -> VerificationReport {
    let mut report = VerificationReport::new(format!("words-{}", kind.family()), kind.rank());
    let oracle = ReducedWordOracle::new(kind);
    let words = oracle.reduced_words(max_len);
    report.check("reduced-words", "at least one", words.len(), !words.is_empty());
    match kind.family() {
        Family::TL => {
            let bad = words.iter().find(|w| {
                let idx = indices(w);
                match (idx.iter().min(), idx.iter().max()) {
                    (Some(&a), Some(&b)) => {
                        w.count(Generator::Ei(a)) != 1 || w.count(Generator::Ei(b)) != 1
                    }
                    _ => false,
                }
            });
            report.check(
                "extremal-generators-once",
                "min and max index occur once",
                bad.map_or("all words".to_string(), |w| format!("violated by `{w}`")),
                bad.is_none(),
            );
            let mut bad_line = None;
            for w in &words {
                let d = word_reduction(kind, w, Alphabet::Standard).expect("legal word").diagram;
                let prof = line_crossing_length(&d).expect("plain TL diagram");
                let counts: Vec<usize> = (1..kind.strands()).map(|i| 2 * w.count(Generator::Ei(i))).collect();
                if prof.length != w.len() || prof.per_line != counts {
                    bad_line = Some(w.clone());
                    break;
                }
            }
            report.check(
                "occurrences-match-crossings",
                "2 * #e_i = crossings of line i",
                bad_line.as_ref().map_or("all words".to_string(), |w| format!("violated by `{w}`")),
                bad_line.is_none(),
            );
            let mut mismatches = 0;
            for (d, dist) in oracle.diagrams() {
                let prof = line_crossing_length(d).expect("plain TL diagram");
                if prof.length != dist {
                    mismatches += 1;
                }
            }
            report.check(
                "length-equals-crossing-statistic",
                "0 mismatches",
                format!("{mismatches} mismatches over {} diagrams", oracle.diagrams().count()),
                mismatches == 0,
            );
        }
        Family::Blob => {
            let bad = words.iter().find(|w| {
                !separated(w, Generator::E, Generator::Ei(1)) || !separated(w, Generator::Ei(1), Generator::E)
            });
            report.check(
                "e-and-e1-alternate",
                "alternation in every reduced word",
                bad.map_or("all words".to_string(), |w| format!("violated by `{w}`")),
                bad.is_none(),
            );
            let bad = words.iter().find(|w| {
                let d = word_reduction(kind, w, Alphabet::Standard).expect("legal word").diagram;
                d.total_decorations() != w.count(Generator::E) as u64
            });
            report.check(
                "decorations-equal-e-count",
                "equal for every reduced word",
                bad.map_or("all words".to_string(), |w| format!("violated by `{w}`")),
                bad.is_none(),
            );
        }
        other => report.check("family", "tl or blob", other, false),
    }
    report
}

/// Rewrites every reduced word satisfying the respective condition and
/// compares evaluations in the blob algebra.
pub fn verify_rewrites(kind: &AlgebraKind, max_len: usize) -> VerificationReport {
    let mut report = VerificationReport::new("rewrites", kind.rank());
    if kind.family() != Family::Blob {
        report.check("family", "blob", kind.family(), false);
        return report;
    }
    let oracle = ReducedWordOracle::new(kind);
    let words = oracle.reduced_words(max_len);
    let (mut b_seen, mut d_seen) = (0, 0);
    let mut failures = Vec::new();
    for w in &words {
        let before = evaluate_word_in(kind, w, Alphabet::Standard).expect("legal word");
        if b_condition(w).unwrap() {
            b_seen += 1;
            match oracle.rewrite_b(w) {
                Ok(out) => {
                    let after = evaluate_word_in(kind, &out, Alphabet::Extended);
                    let clean = out.count(Generator::E) == 0 && out.count(Generator::Ei(1)) == 0;
                    if after.as_ref() != Ok(&before) || !clean {
                        failures.push(format!("B: `{w}` -> `{out}`"));
                    }
                }
                Err(e) => failures.push(format!("B: `{w}`: {e}")),
            }
        }
        if d_condition(w).unwrap() {
            d_seen += 1;
            match oracle.rewrite_d(w) {
                Ok(out) => {
                    let after = evaluate_word_in(kind, &out, Alphabet::Extended);
                    if after.as_ref() != Ok(&before) || out.count(Generator::E) != 0 {
                        failures.push(format!("D: `{w}` -> `{out}`"));
                    }
                }
                Err(e) => failures.push(format!("D: `{w}`: {e}")),
            }
        }
    }
    report.check(
        "rewrites-preserve-evaluation",
        "0 failures",
        format!(
            "{} failures ({b_seen} B-words, {d_seen} D-words){}",
            failures.len(),
            failures.first().map(|f| format!(", first {f}")).unwrap_or_default()
        ),
        failures.is_empty(),
    );
    report
}
