//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls into the engine's own enumeration, exposure or
//! composition code.

#![allow(dead_code)]

use std::collections::BTreeMap;

use tanglekit::{AdmissibilityClass, DecoratedTangle, Family, NodeRef};

/// A perfect matching on boundary positions `1..=m`, arcs as `(low, high)`.
pub type Matching = Vec<(usize, usize)>;

/// Every perfect matching of `1..=m`, crossings allowed.
pub fn all_matchings(m: usize) -> Vec<Matching> {
    fn go(free: &[usize], acc: &mut Matching, out: &mut Vec<Matching>) {
        let Some((&first, rest)) = free.split_first() else {
            out.push(acc.clone());
            return;
        };
        for k in 0..rest.len() {
            let partner = rest[k];
            let remaining: Vec<usize> = rest.iter().copied().filter(|&x| x != partner).collect();
            acc.push((first, partner));
            go(&remaining, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if m.is_multiple_of(2) {
        let free: Vec<usize> = (1..=m).collect();
        go(&free, &mut Vec::new(), &mut out);
    }
    out
}

pub fn arcs_cross((a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

pub fn is_noncrossing(m: &Matching) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, &x)| m[i + 1..].iter().all(|&y| !arcs_cross(x, y)))
}

/// An arc is exposed when no other arc encloses it.
pub fn is_exposed(m: &Matching, arc: (usize, usize)) -> bool {
    !m.iter().any(|&(c, d)| c < arc.0 && arc.1 < d)
}

pub fn node_at(nn: usize, ns: usize, pos: usize) -> NodeRef {
    if pos <= nn {
        NodeRef::north(pos)
    } else {
        NodeRef::south(nn + ns + 1 - pos)
    }
}

pub fn position(nn: usize, ns: usize, x: NodeRef) -> usize {
    match x.face {
        tanglekit::Face::North => x.index,
        tanglekit::Face::South => nn + ns + 1 - x.index,
    }
}

pub fn noncrossing_matchings(m: usize) -> Vec<Matching> {
    all_matchings(m).into_iter().filter(is_noncrossing).collect()
}

/// Builds a tangle from positions, decorating the arcs listed in `decorated`.
pub fn tangle(nn: usize, ns: usize, m: &Matching, decorations: &[u32], loops: &[u32]) -> DecoratedTangle {
    let arcs = m
        .iter()
        .zip(decorations)
        .map(|(&(a, b), &k)| (node_at(nn, ns, a), node_at(nn, ns, b), k));
    DecoratedTangle::new(nn, ns, arcs, loops.iter().copied()).expect("oracle builds valid tangles")
}

/// Every noncrossing diagram on `n + n` nodes with at most one decoration per
/// arc, decorations only on exposed arcs, and no loops.
pub fn blob_candidates(n: usize) -> Vec<DecoratedTangle> {
    let mut out = Vec::new();
    for m in noncrossing_matchings(2 * n) {
        let exposed: Vec<usize> = (0..m.len()).filter(|&k| is_exposed(&m, m[k])).collect();
        for mask in 0u32..(1 << exposed.len()) {
            let mut dec = vec![0u32; m.len()];
            for (bit, &k) in exposed.iter().enumerate() {
                dec[k] = (mask >> bit) & 1;
            }
            out.push(tangle(n, n, &m, &dec, &[]));
        }
    }
    out
}

fn n1_s1(d: &DecoratedTangle) -> (Option<&tanglekit::Edge>, Option<&tanglekit::Edge>) {
    (d.edge_at(NodeRef::north(1)), d.edge_at(NodeRef::south(1)))
}

/// Class membership read directly from the written definitions.
pub fn oracle_class(family: Family, d: &DecoratedTangle) -> AdmissibilityClass {
    use AdmissibilityClass::*;
    let arcs_dec: Vec<u32> = d.edges().iter().map(|e| e.decorations()).collect();
    let any_dec = arcs_dec.iter().any(|&k| k > 0);
    let at_most_one = arcs_dec.iter().all(|&k| k <= 1) && d.loops().iter().all(|&k| k <= 1);
    let non_prop = d.edges().iter().any(|e| !e.is_propagating());
    match family {
        Family::TL => {
            if d.loops().is_empty() && !any_dec {
                TLPlain
            } else {
                NotBasis
            }
        }
        Family::Blob => {
            if d.loops().is_empty() && at_most_one {
                BlobDiagram
            } else {
                NotBasis
            }
        }
        Family::TypeB => {
            if !d.loops().is_empty() || !at_most_one {
                return NotBasis;
            }
            let (a, b) = n1_s1(d);
            let (a, b) = (a.expect("N1 exists"), b.expect("S1 exists"));
            let joined = a == b;
            let decorated_count = arcs_dec.iter().filter(|&&k| k == 1).count();
            if joined && a.decorations() == 0 && decorated_count == 0 {
                B1
            } else if joined && a.decorations() == 1 && decorated_count == 1 && non_prop {
                B1prime
            } else if !joined && a.decorations() == 1 && b.decorations() == 1 {
                B2
            } else {
                NotBasis
            }
        }
        Family::TypeD | Family::DQuotient => {
            if !at_most_one {
                return NotBasis;
            }
            let total: u32 = arcs_dec.iter().sum::<u32>() + d.loops().iter().sum::<u32>();
            if family == Family::TypeD && d.loops() == [1] && !any_dec && non_prop {
                D1
            } else if d.loops().is_empty() && total.is_multiple_of(2) {
                D2
            } else {
                NotBasis
            }
        }
    }
}

/// Basis of each family built from the brute-force candidates.
pub fn oracle_basis(family: Family, rank: usize) -> Vec<DecoratedTangle> {
    let strands = match family {
        Family::TypeB => rank + 1,
        _ => rank,
    };
    let mut candidates = blob_candidates(strands);
    if family == Family::TypeD {
        let plain: Vec<DecoratedTangle> = candidates.iter().filter(|d| d.is_undecorated()).cloned().collect();
        candidates.extend(plain.into_iter().map(|d| d.with_loops([1])));
    }
    let mut out: Vec<DecoratedTangle> = candidates
        .into_iter()
        .filter(|d| oracle_class(family, d) != AdmissibilityClass::NotBasis)
        .collect();
    out.sort();
    out
}

/// Stacks `top` over `bottom` with a union-find over the three rows of
/// nodes, then reads off arcs and closed components. Returns each arc as a
/// pair of positions in the composite (north of `top`, south of `bottom`)
/// with its decoration total, and the sorted loop decorations.
pub fn oracle_concatenate(top: &DecoratedTangle, bottom: &DecoratedTangle) -> (BTreeMap<(NodeRef, NodeRef), u32>, Vec<u32>) {
    assert_eq!(top.n_south(), bottom.n_north());
    // vertex ids: top north 0..a, middle a..a+m, bottom south a+m..a+m+b
    let (a, m, b) = (top.n_north(), top.n_south(), bottom.n_south());
    let id_top = |x: NodeRef| match x.face {
        tanglekit::Face::North => x.index - 1,
        tanglekit::Face::South => a + x.index - 1,
    };
    let id_bottom = |x: NodeRef| match x.face {
        tanglekit::Face::North => a + x.index - 1,
        tanglekit::Face::South => a + m + x.index - 1,
    };
    let total = a + m + b;
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut weight = vec![0u32; total];
    let mut links: Vec<(usize, usize, u32)> = Vec::new();
    for e in top.edges() {
        let (x, y) = e.ends();
        links.push((id_top(x), id_top(y), e.decorations()));
    }
    for e in bottom.edges() {
        let (x, y) = e.ends();
        links.push((id_bottom(x), id_bottom(y), e.decorations()));
    }
    for &(x, y, _) in &links {
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx != ry {
            parent[rx] = ry;
        }
    }
    for &(x, _, k) in &links {
        let r = find(&mut parent, x);
        weight[r] += k;
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..total {
        let r = find(&mut parent, v);
        comps.entry(r).or_default().push(v);
    }
    let outer = |v: usize| -> Option<NodeRef> {
        if v < a {
            Some(NodeRef::north(v + 1))
        } else if v >= a + m {
            Some(NodeRef::south(v - a - m + 1))
        } else {
            None
        }
    };
    let mut arcs = BTreeMap::new();
    let mut loops = Vec::new();
    for (r, vs) in comps {
        let ends: Vec<NodeRef> = vs.iter().filter_map(|&v| outer(v)).collect();
        match ends.len() {
            0 => loops.push(weight[r]),
            2 => {
                let (x, y) = (ends[0].min(ends[1]), ends[0].max(ends[1]));
                arcs.insert((x, y), weight[r]);
            }
            k => panic!("component with {k} boundary points"),
        }
    }
    loops.extend(top.loops().iter().copied());
    loops.extend(bottom.loops().iter().copied());
    loops.sort();
    (arcs, loops)
}

pub fn arcs_of(d: &DecoratedTangle) -> BTreeMap<(NodeRef, NodeRef), u32> {
    d.edges()
        .iter()
        .map(|e| {
            let (x, y) = e.ends();
            ((x.min(y), x.max(y)), e.decorations())
        })
        .collect()
}
