//! Reduced words against exhaustive word enumeration.

use std::collections::BTreeMap;

use tanglekit::element::word_reduction;
use tanglekit::{
    b_condition, d_condition, enumerate_basis, evaluate_word, evaluate_word_in, line_crossing_length,
    shortest_word_oracle, verify_rewrites, verify_word_lemmas, AlgebraKind, Alphabet, DecoratedTangle, Element,
    Generator, GeneratorWord, ReducedWordOracle,
};

fn word(s: &str) -> GeneratorWord {
    s.parse().unwrap()
}

fn all_words(gens: &[Generator], len: usize) -> Vec<GeneratorWord> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<Generator>| {
                gens.iter().map(move |&g| {
                    let mut w = w.clone();
                    w.push(g);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(GeneratorWord::new).collect()
}

/// Shortest length reaching each diagram, scalars ignored, by listing every
/// word up to `max_len`.
fn brute_distances(kind: &AlgebraKind, max_len: usize) -> BTreeMap<DecoratedTangle, usize> {
    let mut dist = BTreeMap::new();
    for len in 0..=max_len {
        for w in all_words(&kind.generators(), len) {
            let r = word_reduction(kind, &w, Alphabet::Standard).unwrap();
            dist.entry(r.diagram).or_insert(len);
        }
    }
    dist
}

#[test]
fn reducedness_matches_exhaustive_enumeration() {
    for (kind, max_len) in [(AlgebraKind::blob(3), 6), (AlgebraKind::tl(4), 6), (AlgebraKind::blob(2), 7)] {
        let oracle = ReducedWordOracle::new(&kind);
        let dist = brute_distances(&kind, max_len);
        let mut expected = Vec::new();
        for len in 0..=max_len {
            for w in all_words(&kind.generators(), len) {
                let r = word_reduction(&kind, &w, Alphabet::Standard).unwrap();
                let reduced = r.is_unit() && dist[&r.diagram] == len;
                assert_eq!(oracle.is_reduced(&w).unwrap(), reduced, "{kind}: {w}");
                if reduced {
                    expected.push(w);
                }
            }
        }
        expected.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        assert_eq!(oracle.reduced_words(max_len), expected, "{kind}");
    }
}

#[test]
fn tl_lengths_equal_line_crossings() {
    for n in 1..=5 {
        let kind = AlgebraKind::tl(n);
        for d in enumerate_basis(&kind) {
            let target = Element::basis(&kind, d.clone()).unwrap();
            let found = shortest_word_oracle(&target, 12).unwrap();
            let prof = line_crossing_length(&d).unwrap();
            assert_eq!(found.length, prof.length, "{d}");
            for w in &found.witnesses {
                for i in 1..n {
                    assert_eq!(2 * w.count(Generator::Ei(i)), prof.per_line[i - 1], "{w} for {d}");
                }
            }
        }
    }
}

#[test]
fn word_lemma_suites() {
    let r = verify_word_lemmas(&AlgebraKind::tl(3), 6);
    assert!(r.overall, "{r}");
    for n in 2..=4 {
        let r = verify_word_lemmas(&AlgebraKind::blob(n), 8);
        assert!(r.overall, "{r}");
    }
}

#[test]
fn decorations_count_e_letters() {
    let kind = AlgebraKind::blob(4);
    let oracle = ReducedWordOracle::new(&kind);
    let w = word("e e2 e1 e e3");
    assert!(oracle.is_reduced(&w).unwrap());
    let v = evaluate_word(&kind, &w).unwrap();
    let (d, c) = v.single_term().unwrap();
    assert!(c.is_one());
    assert_eq!(d.total_decorations(), 2);
    // e1 e2 e1 collapses to e1 and so is not reduced
    assert!(!oracle.is_reduced(&word("e1 e2 e1")).unwrap());
    assert_eq!(evaluate_word(&kind, &word("e1 e2 e1")).unwrap(), evaluate_word(&kind, &word("e1")).unwrap());
}

#[test]
fn worked_rewrites() {
    let kind = AlgebraKind::blob(5);
    let oracle = ReducedWordOracle::new(&kind);
    let cases = [("e e1 e e2 e1 e", "e~ e2 e~", true), ("e e1 e2 e e1", "e~ e2 e1", false)];
    for (input, output, b_side) in cases {
        let w = word(input);
        let out = if b_side { oracle.rewrite_b(&w) } else { oracle.rewrite_d(&w) }.unwrap();
        assert_eq!(out, word(output));
        assert_eq!(
            evaluate_word_in(&kind, &out, Alphabet::Extended).unwrap(),
            evaluate_word(&kind, &w).unwrap()
        );
    }
    assert!(b_condition(&word("e e1 e e2 e1 e")).unwrap());
    assert!(d_condition(&word("e e1 e2 e e1")).unwrap());
}

#[test]
fn rewrites_preserve_evaluation_exhaustively() {
    for n in 2..=4 {
        let r = verify_rewrites(&AlgebraKind::blob(n), 8);
        assert!(r.overall, "{r}");
    }
}
