//! Structural checks: the symmetric representation of blob diagrams, the
//! blob/symmetric-TL isomorphism, presentations and dimension counts.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::counting::{binomial, expected_class_counts, expected_dimension};
use crate::element::{evaluate_word, span_reachability, Element, GeneratorWord};
use crate::engine::{count_by_class, enumerate_basis, AlgebraKind, Family};
use crate::report::VerificationReport;
use crate::scalar::{Scalar, Var};
use crate::tangle::{enumerate_matchings, DecoratedTangle, Generator, NodeRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorrespondenceError {
    #[error("{0} is not a blob diagram")]
    NotBlobDiagram(String),
    #[error("{0} is not a left-right symmetric Temperley-Lieb diagram")]
    NotSymmetric(String),
}

fn is_blob_diagram(b: &DecoratedTangle) -> bool {
    b.n_north() == b.n_south() && b.loops().is_empty() && b.edges().iter().all(|e| e.decorations() <= 1)
}

/// Unfolds a blob diagram on `n` strands into an undecorated diagram on
/// `2n` strands. Node `i` moves to `n + i` and is mirrored at `n + 1 - i`;
/// a decorated arc is cut at its decoration and each half is joined to its
/// own reflection.
pub fn to_symmetric(b: &DecoratedTangle) -> Result<DecoratedTangle, CorrespondenceError> {
    if !is_blob_diagram(b) {
        return Err(CorrespondenceError::NotBlobDiagram(b.to_string()));
    }
    let n = b.n_north();
    let shift = |x: NodeRef| NodeRef { index: n + x.index, ..x };
    let mirror = |x: NodeRef| NodeRef {
        index: n + 1 - x.index,
        ..x
    };
    let mut arcs = Vec::with_capacity(2 * b.edges().len());
    for e in b.edges() {
        let (x, y) = e.ends();
        if e.decorations() == 0 {
            arcs.push((shift(x), shift(y), 0));
            arcs.push((mirror(x), mirror(y), 0));
        } else {
            arcs.push((shift(x), mirror(x), 0));
            arcs.push((shift(y), mirror(y), 0));
        }
    }
    Ok(DecoratedTangle::new(2 * n, 2 * n, arcs, []).expect("unfolding preserves planarity"))
}

/// Whether `s` is an undecorated, loop-free diagram equal to its own
/// reflection in the vertical centre line.
pub fn is_symmetric(s: &DecoratedTangle) -> bool {
    let m = s.n_north();
    if s.n_south() != m || !m.is_multiple_of(2) || !s.loops().is_empty() || !s.is_undecorated() {
        return false;
    }
    let reflect = |x: NodeRef| NodeRef {
        index: m + 1 - x.index,
        ..x
    };
    s.edges().iter().all(|e| {
        let (x, y) = e.ends();
        s.edge_at(reflect(x)).and_then(|f| f.other(reflect(x))) == Some(reflect(y))
    })
}

/// Inverse of [`to_symmetric`].
pub fn from_symmetric(s: &DecoratedTangle) -> Result<DecoratedTangle, CorrespondenceError> {
    let not_symmetric = || CorrespondenceError::NotSymmetric(s.to_string());
    if !is_symmetric(s) {
        return Err(not_symmetric());
    }
    let n = s.n_north() / 2;
    let fold = |x: NodeRef| NodeRef { index: x.index - n, ..x };
    let mut arcs = Vec::new();
    // original nodes whose strand runs into the wall
    let mut walled = Vec::new();
    for e in s.edges() {
        let (x, y) = e.ends();
        match (x.index > n, y.index > n) {
            (true, true) => arcs.push((fold(x), fold(y), 0)),
            (true, false) => walled.push(fold(x)),
            (false, true) => walled.push(fold(y)),
            (false, false) => {}
        }
    }
    let blank = DecoratedTangle::identity(n);
    walled.sort_by_key(|&x| blank.position(x));
    if walled.len() % 2 != 0 {
        return Err(not_symmetric());
    }
    for pair in walled.chunks(2) {
        arcs.push((pair[0], pair[1], 1));
    }
    let b = DecoratedTangle::new(n, n, arcs, []).map_err(|_| not_symmetric())?;
    if to_symmetric(&b).as_ref() != Ok(s) {
        return Err(not_symmetric());
    }
    Ok(b)
}

/// The left-right symmetric diagrams among all `TL_{2n}` diagrams.
pub fn symmetric_diagrams(n: usize) -> Vec<DecoratedTangle> {
    enumerate_matchings(2 * n, 2 * n)
        .expect("even total")
        .into_iter()
        .filter(is_symmetric)
        .collect()
}

/// Round trip of every blob diagram through the symmetric representation,
/// and the count of symmetric diagrams.
pub fn verify_symmetric_representation(n: usize) -> VerificationReport {
    let mut report = VerificationReport::new("symmetric", n);
    let blob = enumerate_basis(&AlgebraKind::blob(n));
    let mut failures = 0;
    let mut images = BTreeSet::new();
    for b in &blob {
        match to_symmetric(b) {
            Ok(s) if is_symmetric(&s) && from_symmetric(&s).as_ref() == Ok(b) => {
                images.insert(s);
            }
            _ => failures += 1,
        }
    }
    report.check_eq("round-trip-failures", 0, failures);
    let sym: BTreeSet<DecoratedTangle> = symmetric_diagrams(n).into_iter().collect();
    let expected = usize::try_from(binomial(2 * n as u64, n as u64)).expect("small");
    report.check_eq("symmetric-diagram-count", expected, sym.len());
    report.check("image-is-all-symmetric-diagrams", sym.len(), images.len(), images == sym);
    report
}

fn blob_word(g: Generator) -> GeneratorWord {
    GeneratorWord::new(vec![g])
}

/// Image of a blob basis diagram: its symmetric unfolding divided by
/// `delta` once per decorated arc. On generators this is `e_i -> e_{n+i}
/// e_{n-i}` and `e -> e_n / delta`.
fn phi(d: &DecoratedTangle, coeff: &Scalar, tl: &AlgebraKind, delta: &Scalar) -> Element {
    let decorated = d.edges().iter().filter(|e| e.decorations() == 1).count() as i32;
    let sym = to_symmetric(d).expect("blob basis diagram");
    Element::term(tl, sym, coeff * &delta.pow(-decorated)).expect("symmetric diagrams are TL basis diagrams")
}

/// Checks the generator map `e_i -> e_{n+i} e_{n-i}`, `e -> e_n / delta` on
/// every ordered generator pair, plus the `e_1 e e_1` relation.
///
/// Two conventions are checked side by side. `stated` compares
/// `b_n(delta, 1)` with `TL_{2n}(delta^2)`; `swapped` compares
/// `b_n(delta^2, 1)` with `TL_{2n}(delta)`. Only the second is consistent:
/// the image of `e_i` squares to the TL loop value squared times itself, so
/// the blob loop value has to be that square.
pub fn verify_lemma57(n: usize) -> VerificationReport {
    let mut report = VerificationReport::new("lemma57", n);
    let expected = usize::try_from(binomial(2 * n as u64, n as u64)).expect("small");
    let sym = symmetric_diagrams(n);
    report.check_eq("symmetric-diagram-count", expected, sym.len());
    let blob = AlgebraKind::blob(n);
    report.check_eq("blob-basis-count", expected, enumerate_basis(&blob).len());

    let d = Scalar::var(Var::D);
    let conventions = [("stated", d.clone(), d.pow(2)), ("swapped", d.pow(2), d.clone())];
    let gens = blob.generators();

    // generator images, written as TL words
    for (name, _, tl_delta) in &conventions {
        let tl = AlgebraKind::tl(2 * n).with_delta(tl_delta.clone());
        for &g in &gens {
            let gd = DecoratedTangle::generator(g, n).expect("blob generator");
            let image = phi(&gd, &Scalar::one(), &tl, &d);
            let word = match g {
                Generator::E => vec![Generator::Ei(n)],
                Generator::Ei(i) => vec![Generator::Ei(n + i), Generator::Ei(n - i)],
                Generator::EBar => unreachable!("not a blob generator"),
            };
            let mut target = evaluate_word(&tl, &GeneratorWord::new(word)).expect("TL word");
            if g == Generator::E {
                target = target.scale(&d.pow(-1));
            }
            report.check(
                format!("{name}: image of {g}"),
                &target,
                &image,
                image == target,
            );
        }
    }

    for (name, blob_delta, tl_delta) in &conventions {
        let tl = AlgebraKind::tl(2 * n).with_delta(tl_delta.clone());
        let params: BTreeMap<Var, Scalar> = [(Var::D, blob_delta.clone()), (Var::Dp, Scalar::one())].into();
        let image = |x: &Element| -> Element {
            let x = x.substitute(&params).expect("polynomial substitution");
            x.terms()
                .map(|(d0, c)| phi(d0, c, &tl, &d))
                .fold(Element::zero(&tl), |acc, t| acc.add(&t).expect("same kind"))
        };
        let mut bad = Vec::new();
        let mut pairs = 0;
        for &g in &gens {
            for &h in &gens {
                pairs += 1;
                let x = evaluate_word(&blob, &blob_word(g)).expect("generator");
                let y = evaluate_word(&blob, &blob_word(h)).expect("generator");
                let lhs = image(&x).multiply(&image(&y)).expect("same kind");
                let rhs = image(&x.multiply(&y).expect("same kind"));
                if lhs != rhs {
                    bad.push(format!("({g},{h}): {lhs} vs {rhs}"));
                }
            }
        }
        report.check(
            format!("{name}: multiplicative on generator pairs"),
            format!("{pairs} of {pairs} pairs"),
            format!(
                "{} of {pairs} pairs{}",
                pairs - bad.len(),
                bad.first().map(|b| format!("; first mismatch {b}")).unwrap_or_default()
            ),
            bad.is_empty(),
        );
        if n >= 2 {
            let w: GeneratorWord = "e1 e e1".parse().expect("word");
            let x = evaluate_word(&blob, &w).expect("blob word");
            let parts: Vec<Element> = w
                .letters()
                .iter()
                .map(|&g| image(&evaluate_word(&blob, &blob_word(g)).expect("generator")))
                .collect();
            let lhs = parts[1..]
                .iter()
                .fold(parts[0].clone(), |acc, p| acc.multiply(p).expect("same kind"));
            let rhs = image(&x);
            report.check(format!("{name}: e1 e e1 = delta' e1"), &rhs, &lhs, lhs == rhs);
        }
    }
    report
}

fn gen_element(kind: &AlgebraKind, g: Generator, scale: i64) -> Element {
    Element::generator(kind, g)
        .expect("generator of the kind")
        .scale(&Scalar::from_integer(scale))
}

fn product(xs: &[&Element]) -> Element {
    xs[1..]
        .iter()
        .fold(xs[0].clone(), |acc, x| acc.multiply(x).expect("same kind"))
}

/// Labelled presentation generators and the Coxeter-graph edges between them.
struct Presentation {
    gens: Vec<(String, Element)>,
    edges: BTreeSet<(usize, usize)>,
    /// pairs related by `E_i E_j E_i E_j = 2 E_i E_j` instead of the braid-like rule
    double_bond: Option<(usize, usize)>,
    quadratic: Scalar,
}

fn presentation(kind: &AlgebraKind) -> Option<Presentation> {
    let n = kind.rank();
    let chain = |k: usize| (0..k.saturating_sub(1)).map(|i| (i, i + 1)).collect::<BTreeSet<_>>();
    match kind.family() {
        Family::TL => Some(Presentation {
            gens: (1..n).map(|i| (format!("e{i}"), gen_element(kind, Generator::Ei(i), 1))).collect(),
            edges: chain(n - 1),
            double_bond: None,
            quadratic: kind.delta().clone(),
        }),
        Family::TypeB => {
            let mut gens = vec![("E1".to_string(), gen_element(kind, Generator::EBar, 2))];
            gens.extend((2..=n).map(|i| (format!("E{i}"), gen_element(kind, Generator::Ei(i), 1))));
            Some(Presentation {
                edges: chain(n),
                gens,
                double_bond: Some((0, 1)),
                quadratic: Scalar::quantum_two(),
            })
        }
        Family::TypeD | Family::DQuotient => {
            // order: E1bar, E1, E2, ..., E_{n-1}
            let mut gens = vec![("E1~".to_string(), gen_element(kind, Generator::EBar, 1))];
            gens.extend((1..n).map(|i| (format!("E{i}"), gen_element(kind, Generator::Ei(i), 1))));
            let mut edges: BTreeSet<(usize, usize)> = (1..n.saturating_sub(1)).map(|k| (k, k + 1)).collect();
            if n >= 3 {
                edges.insert((0, 2));
            }
            Some(Presentation {
                gens,
                edges,
                double_bond: None,
                quadratic: Scalar::quantum_two(),
            })
        }
        Family::Blob => None,
    }
}

fn verify_blob_relations(kind: &AlgebraKind, report: &mut VerificationReport) {
    let n = kind.rank();
    let e = gen_element(kind, Generator::E, 1);
    let ei = |i: usize| gen_element(kind, Generator::Ei(i), 1);
    let mut rel = |id: String, lhs: Element, rhs: Element| {
        let pass = lhs == rhs;
        report.check(id, &rhs, &lhs, pass);
    };
    rel("e e = e".into(), product(&[&e, &e]), e.clone());
    for i in 1..n {
        rel(format!("e{i} e{i} = d e{i}"), product(&[&ei(i), &ei(i)]), ei(i).scale(kind.delta()));
        if i > 1 {
            rel(format!("e{i} e = e e{i}"), product(&[&ei(i), &e]), product(&[&e, &ei(i)]));
        }
        for j in 1..n {
            if i.abs_diff(j) > 1 {
                rel(format!("e{i} e{j} = e{j} e{i}"), product(&[&ei(i), &ei(j)]), product(&[&ei(j), &ei(i)]));
            } else if i.abs_diff(j) == 1 {
                rel(format!("e{i} e{j} e{i} = e{i}"), product(&[&ei(i), &ei(j), &ei(i)]), ei(i));
            }
        }
    }
    if n >= 2 {
        let dp = kind.delta_prime().expect("blob has delta'").clone();
        rel("e1 e e1 = dp e1".into(), product(&[&ei(1), &e, &ei(1)]), ei(1).scale(&dp));
    }
}

/// Checks each defining relation of the algebra's presentation as an exact
/// equality of elements.
pub fn verify_presentation(kind: &AlgebraKind) -> VerificationReport {
    let mut report = VerificationReport::new(format!("presentation-{}", kind.family()), kind.rank());
    let Some(p) = presentation(kind) else {
        verify_blob_relations(kind, &mut report);
        return report;
    };
    let two = Scalar::from_integer(2);
    for (a, (name_a, x)) in p.gens.iter().enumerate() {
        let sq = product(&[x, x]);
        let rhs = x.scale(&p.quadratic);
        report.check(format!("{name_a}^2 = q {name_a}"), &rhs, &sq, sq == rhs);
        for (b, (name_b, y)) in p.gens.iter().enumerate() {
            if a == b {
                continue;
            }
            let key = (a.min(b), a.max(b));
            if Some(key) == p.double_bond {
                let lhs = product(&[x, y, x, y]);
                let rhs = product(&[x, y]).scale(&two);
                let id = format!("{name_a} {name_b} {name_a} {name_b} = 2 {name_a} {name_b}");
                report.check(id, &rhs, &lhs, lhs == rhs);
            } else if p.edges.contains(&key) {
                let lhs = product(&[x, y, x]);
                report.check(format!("{name_a} {name_b} {name_a} = {name_a}"), x, &lhs, &lhs == x);
            } else if a < b {
                let lhs = product(&[x, y]);
                let rhs = product(&[y, x]);
                report.check(format!("{name_a} {name_b} = {name_b} {name_a}"), &rhs, &lhs, lhs == rhs);
            }
        }
    }
    report
}

/// Compares the enumerated basis with the closed-form counts, checks that the
/// standard generators reach every basis diagram, and for type D checks the
/// decoration-toggle pairing of blob diagrams.
pub fn verify_counts(kind: &AlgebraKind) -> VerificationReport {
    let mut report = VerificationReport::new(format!("counts-{}", kind.family()), kind.rank());
    let basis = enumerate_basis(kind);
    report.check_eq("total", expected_dimension(kind.family(), kind.rank()), basis.len());
    let observed = count_by_class(kind);
    for (class, want) in expected_class_counts(kind.family(), kind.rank()) {
        report.check_eq(format!("class {class}"), want, observed.get(&class).copied().unwrap_or(0));
    }
    let span = span_reachability(kind);
    let all: BTreeSet<DecoratedTangle> = basis.iter().cloned().collect();
    report.check("span-equals-basis", basis.len(), span.len(), span == all);
    if matches!(kind.family(), Family::TypeD | Family::DQuotient) {
        let blob = enumerate_basis(&AlgebraKind::blob(kind.rank()));
        let mut bad_orbits = 0;
        let mut even = 0;
        for d in &blob {
            let t = d.toggle_nw().expect("blob diagram");
            let back = t.toggle_nw().expect("blob diagram");
            let parity_differs = (d.total_decorations() + t.total_decorations()) % 2 == 1;
            if t == *d || back != *d || !parity_differs {
                bad_orbits += 1;
            }
            if d.total_decorations() % 2 == 0 {
                even += 1;
            }
        }
        report.check_eq("toggle-orbits-of-size-two-with-one-even-member", 0, bad_orbits);
        report.check_eq("even-blob-diagrams-are-half", blob.len() / 2, even);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dt(s: &str) -> DecoratedTangle {
        s.parse().unwrap()
    }

    #[test]
    fn unfolding_examples() {
        let e = DecoratedTangle::generator(Generator::E, 2).unwrap();
        let s = to_symmetric(&e).unwrap();
        assert_eq!(s, dt("4|4 :: N1-S1,N2-N3,S2-S3,N4-S4 ;loops:-"));
        assert_eq!(from_symmetric(&s).unwrap(), e);
        let e1 = DecoratedTangle::generator(Generator::Ei(1), 2).unwrap();
        assert_eq!(to_symmetric(&e1).unwrap(), dt("4|4 :: N1-N2,S1-S2,N3-N4,S3-S4 ;loops:-"));
        let tl_e1 = DecoratedTangle::generator(Generator::Ei(1), 4).unwrap();
        assert!(matches!(from_symmetric(&tl_e1), Err(CorrespondenceError::NotSymmetric(_))));
        let looped = e.with_loops([0]);
        assert!(matches!(to_symmetric(&looped), Err(CorrespondenceError::NotBlobDiagram(_))));
    }

    #[test]
    fn round_trip_small() {
        for n in 1..=3 {
            let blob = enumerate_basis(&AlgebraKind::blob(n));
            for b in &blob {
                let s = to_symmetric(b).unwrap();
                assert!(is_symmetric(&s));
                assert_eq!(from_symmetric(&s).unwrap(), *b);
            }
            assert_eq!(symmetric_diagrams(n).len(), blob.len());
        }
    }

    #[test]
    fn presentations_hold() {
        for kind in [AlgebraKind::tl(4), AlgebraKind::type_b(3), AlgebraKind::type_d(4), AlgebraKind::blob(3)] {
            let r = verify_presentation(&kind);
            assert!(r.overall, "{r}");
        }
    }

    #[test]
    fn counts_hold() {
        let r = verify_counts(&AlgebraKind::type_b(2));
        assert!(r.overall, "{r}");
        let r = verify_counts(&AlgebraKind::type_d(5));
        assert!(r.overall, "{r}");
        assert!(r.checks.iter().any(|c| c.id == "total" && c.observed == "167"));
        assert!(verify_counts(&AlgebraKind::blob(4)).overall);
    }

    #[test]
    fn isomorphism_conventions() {
        let r = verify_lemma57(2);
        let row = |prefix: &str| r.checks.iter().filter(|c| c.id.starts_with(prefix)).all(|c| c.pass);
        assert!(row("swapped"), "{r}");
        assert!(row("symmetric-diagram-count"));
        assert!(!row("stated: multiplicative"), "{r}");
    }
}
