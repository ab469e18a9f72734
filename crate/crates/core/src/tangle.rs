//! Decorated tangles: crossing-free boundary matchings whose arcs carry blob
//! counts, plus a multiset of closed loops.
//!
//! The boundary is cut open at the west face and read as a line: north nodes
//! `N1..Nn` take positions `1..n`, then south nodes in reverse,
//! `S_m..S_1` at `n+1..n+m`. In that order a tangle is crossing-free iff no two
//! arcs interleave, and an arc touches the west face iff no other arc encloses
//! it.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TangleError {
    #[error("north+south node count {0} is odd")]
    OddNodeTotal(usize),
    #[error("not a perfect matching: {0}")]
    NotAMatching(String),
    #[error("arcs {0} and {1} cross")]
    Crossing(String, String),
    #[error("arc {0} carries decorations but is not exposed to the west face")]
    DecorationNotExposed(String),
    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize },
    #[error("no arc {0} in this tangle")]
    UnknownArc(String),
    #[error("cannot stack a tangle with {bottom} south nodes on one with {top} north nodes")]
    FaceMismatch { top: usize, bottom: usize },
    #[error("toggle requires a loop-free tangle with at most one decoration per arc")]
    NotBlobLike,
    #[error("cannot parse tangle: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Face {
    North,
    South,
}

/// A boundary node. Ordered by index first, north before south, which is the
/// reading order used for canonical arc lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeRef {
    pub index: usize,
    pub face: Face,
}

impl NodeRef {
    pub const fn north(index: usize) -> Self {
        NodeRef {
            index,
            face: Face::North,
        }
    }

    pub const fn south(index: usize) -> Self {
        NodeRef {
            index,
            face: Face::South,
        }
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.face {
            Face::North => 'N',
            Face::South => 'S',
        };
        write!(f, "{c}{}", self.index)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Propagating,
    NonPropagating,
}

/// An arc between two boundary nodes, `ends.0 < ends.1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    ends: (NodeRef, NodeRef),
    decorations: u32,
}

impl Edge {
    pub fn new(a: NodeRef, b: NodeRef, decorations: u32) -> Self {
        let ends = if a <= b { (a, b) } else { (b, a) };
        Edge { ends, decorations }
    }

    pub fn ends(&self) -> (NodeRef, NodeRef) {
        self.ends
    }

    pub fn decorations(&self) -> u32 {
        self.decorations
    }

    pub fn kind(&self) -> EdgeKind {
        if self.ends.0.face == self.ends.1.face {
            EdgeKind::NonPropagating
        } else {
            EdgeKind::Propagating
        }
    }

    pub fn is_propagating(&self) -> bool {
        self.kind() == EdgeKind::Propagating
    }

    pub fn contains(&self, node: NodeRef) -> bool {
        self.ends.0 == node || self.ends.1 == node
    }

    pub fn other(&self, node: NodeRef) -> Option<NodeRef> {
        if self.ends.0 == node {
            Some(self.ends.1)
        } else if self.ends.1 == node {
            Some(self.ends.0)
        } else {
            None
        }
    }

    fn with_decorations(mut self, decorations: u32) -> Self {
        self.decorations = decorations;
        self
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // propagating arcs print north end first
        let (a, b) = if self.ends.0.face == Face::South && self.ends.1.face == Face::North {
            (self.ends.1, self.ends.0)
        } else {
            self.ends
        };
        write!(f, "{a}-{b}")?;
        for _ in 0..self.decorations {
            f.write_str("*")?;
        }
        Ok(())
    }
}

/// Named generator tangles of `DT_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// All strands propagating, `N1-S1` carries one decoration.
    E,
    /// `e_1` with both of its caps decorated.
    EBar,
    /// Cap `N_i-N_{i+1}`, cup `S_i-S_{i+1}`, other strands straight.
    Ei(usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::E => f.write_str("e"),
            Generator::EBar => f.write_str("e~"),
            Generator::Ei(i) => write!(f, "e{i}"),
        }
    }
}

/// A crossing-free decorated tangle in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecoratedTangle {
    n_north: usize,
    n_south: usize,
    edges: Vec<Edge>,
    loops: Vec<u32>,
}

impl DecoratedTangle {
    /// Validates and canonicalizes a tangle.
    pub fn new<I, L>(n_north: usize, n_south: usize, arcs: I, loops: L) -> Result<Self, TangleError>
    where
        I: IntoIterator<Item = (NodeRef, NodeRef, u32)>,
        L: IntoIterator<Item = u32>,
    {
        if !(n_north + n_south).is_multiple_of(2) {
            return Err(TangleError::OddNodeTotal(n_north + n_south));
        }
        let edges: Vec<Edge> = arcs
            .into_iter()
            .map(|(a, b, r)| Edge::new(a, b, r))
            .collect();
        let t = DecoratedTangle::from_parts(n_north, n_south, edges, loops.into_iter().collect());
        t.validate()?;
        Ok(t)
    }

    /// Canonicalizes without validating.
    pub(crate) fn from_parts(n_north: usize, n_south: usize, mut edges: Vec<Edge>, mut loops: Vec<u32>) -> Self {
        edges.sort_unstable();
        loops.sort_unstable();
        DecoratedTangle {
            n_north,
            n_south,
            edges,
            loops,
        }
    }

    pub fn identity(n: usize) -> Self {
        let edges = (1..=n)
            .map(|i| Edge::new(NodeRef::north(i), NodeRef::south(i), 0))
            .collect();
        DecoratedTangle::from_parts(n, n, edges, Vec::new())
    }

    /// The named tangle `symbol` in `DT_n`.
    pub fn generator(symbol: Generator, n: usize) -> Result<Self, TangleError> {
        match symbol {
            Generator::E => {
                if n < 1 {
                    return Err(TangleError::IndexOutOfRange { index: 1, strands: n });
                }
                let mut t = DecoratedTangle::identity(n);
                t.edges[0].decorations = 1;
                Ok(t)
            }
            Generator::Ei(i) => {
                if i < 1 || i + 1 > n {
                    return Err(TangleError::IndexOutOfRange { index: i, strands: n });
                }
                Ok(Self::cap_cup(n, i, 0))
            }
            Generator::EBar => {
                if n < 2 {
                    return Err(TangleError::IndexOutOfRange { index: 1, strands: n });
                }
                Ok(Self::cap_cup(n, 1, 1))
            }
        }
    }

    fn cap_cup(n: usize, i: usize, decorations: u32) -> Self {
        let mut edges = vec![
            Edge::new(NodeRef::north(i), NodeRef::north(i + 1), decorations),
            Edge::new(NodeRef::south(i), NodeRef::south(i + 1), decorations),
        ];
        edges.extend(
            (1..=n)
                .filter(|&k| k != i && k != i + 1)
                .map(|k| Edge::new(NodeRef::north(k), NodeRef::south(k), 0)),
        );
        DecoratedTangle::from_parts(n, n, edges, Vec::new())
    }

    pub fn n_north(&self) -> usize {
        self.n_north
    }

    pub fn n_south(&self) -> usize {
        self.n_south
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Decoration counts of closed loops, ascending.
    pub fn loops(&self) -> &[u32] {
        &self.loops
    }

    pub fn total_decorations(&self) -> u64 {
        self.edges.iter().map(|e| e.decorations as u64).sum::<u64>()
            + self.loops.iter().map(|&r| r as u64).sum::<u64>()
    }

    pub fn is_undecorated(&self) -> bool {
        self.total_decorations() == 0
    }

    pub fn has_non_propagating(&self) -> bool {
        self.edges.iter().any(|e| !e.is_propagating())
    }

    pub fn edge_at(&self, node: NodeRef) -> Option<&Edge> {
        self.edges.iter().find(|e| e.contains(node))
    }

    /// Position on the boundary cut open at the west face.
    pub fn position(&self, node: NodeRef) -> usize {
        match node.face {
            Face::North => node.index,
            Face::South => self.n_north + self.n_south + 1 - node.index,
        }
    }

    pub fn node_at(&self, position: usize) -> NodeRef {
        if position <= self.n_north {
            NodeRef::north(position)
        } else {
            NodeRef::south(self.n_north + self.n_south + 1 - position)
        }
    }

    fn span(&self, e: &Edge) -> (usize, usize) {
        let (a, b) = (self.position(e.ends.0), self.position(e.ends.1));
        (a.min(b), a.max(b))
    }

    /// Nesting depth of every edge (parallel to `edges()`), or the first pair of
    /// interleaving edges.
    fn nesting_depths(&self) -> Result<Vec<usize>, (usize, usize)> {
        let total = self.n_north + self.n_south;
        // position -> (edge index, opens here)
        let mut at: Vec<Option<(usize, bool)>> = vec![None; total + 1];
        for (k, e) in self.edges.iter().enumerate() {
            let (lo, hi) = self.span(e);
            at[lo] = Some((k, true));
            at[hi] = Some((k, false));
        }
        let mut depth = vec![0; self.edges.len()];
        let mut stack: Vec<usize> = Vec::new();
        for slot in at.iter().skip(1) {
            match *slot {
                Some((k, true)) => {
                    depth[k] = stack.len();
                    stack.push(k);
                }
                Some((k, false)) => match stack.pop() {
                    Some(top) if top == k => {}
                    Some(top) => return Err((top, k)),
                    None => unreachable!("close before open"),
                },
                None => {}
            }
        }
        Ok(depth)
    }

    /// West-exposure flags parallel to `edges()`.
    pub fn exposure(&self) -> Vec<bool> {
        self.nesting_depths()
            .expect("validated tangle is crossing-free")
            .into_iter()
            .map(|d| d == 0)
            .collect()
    }

    /// Whether the arc joining `a` and `b` can reach the west face.
    pub fn west_exposed(&self, a: NodeRef, b: NodeRef) -> Result<bool, TangleError> {
        let probe = Edge::new(a, b, 0);
        let k = self
            .edges
            .iter()
            .position(|e| e.ends == probe.ends)
            .ok_or_else(|| TangleError::UnknownArc(format!("{}-{}", probe.ends.0, probe.ends.1)))?;
        Ok(self.exposure()[k])
    }

    /// Checks every structural invariant.
    pub fn validate(&self) -> Result<(), TangleError> {
        if !(self.n_north + self.n_south).is_multiple_of(2) {
            return Err(TangleError::OddNodeTotal(self.n_north + self.n_south));
        }
        let total = self.n_north + self.n_south;
        let mut seen = vec![false; total + 1];
        for e in &self.edges {
            for node in [e.ends.0, e.ends.1] {
                let limit = match node.face {
                    Face::North => self.n_north,
                    Face::South => self.n_south,
                };
                if node.index < 1 || node.index > limit {
                    return Err(TangleError::NotAMatching(format!("node {node} does not exist")));
                }
                let p = self.position(node);
                if seen[p] {
                    return Err(TangleError::NotAMatching(format!("node {node} used twice")));
                }
                seen[p] = true;
            }
        }
        if let Some(p) = (1..=total).find(|&p| !seen[p]) {
            return Err(TangleError::NotAMatching(format!(
                "node {} unmatched",
                self.node_at(p)
            )));
        }
        let depths = self
            .nesting_depths()
            .map_err(|(a, b)| TangleError::Crossing(self.edges[a].to_string(), self.edges[b].to_string()))?;
        for (e, d) in self.edges.iter().zip(depths) {
            if e.decorations > 0 && d > 0 {
                return Err(TangleError::DecorationNotExposed(e.to_string()));
            }
        }
        Ok(())
    }

    /// Stacks `self` on top of `bottom`, tracing strands through the shared
    /// face. Decorations add along traced strands and closed components become
    /// loops.
    pub fn concatenate(&self, bottom: &DecoratedTangle) -> Result<DecoratedTangle, TangleError> {
        if self.n_south != bottom.n_north {
            return Err(TangleError::FaceMismatch {
                top: self.n_south,
                bottom: bottom.n_north,
            });
        }
        let (a, b, c) = (self.n_north, self.n_south, bottom.n_south);

        // Top layer node ids: N_i -> i-1, S_j -> a+j-1.
        // Bottom layer node ids: N_j -> j-1, S_k -> b+k-1.
        // The shared face is top S_j == bottom N_j.
        let mut top_link = vec![(usize::MAX, 0u32); a + b];
        for e in &self.edges {
            let id = |n: NodeRef| match n.face {
                Face::North => n.index - 1,
                Face::South => a + n.index - 1,
            };
            let (x, y) = (id(e.ends.0), id(e.ends.1));
            top_link[x] = (y, e.decorations);
            top_link[y] = (x, e.decorations);
        }
        let mut bot_link = vec![(usize::MAX, 0u32); b + c];
        for e in &bottom.edges {
            let id = |n: NodeRef| match n.face {
                Face::North => n.index - 1,
                Face::South => b + n.index - 1,
            };
            let (x, y) = (id(e.ends.0), id(e.ends.1));
            bot_link[x] = (y, e.decorations);
            bot_link[y] = (x, e.decorations);
        }

        #[derive(Clone, Copy)]
        enum Layer {
            Top,
            Bottom,
        }

        let mut mid_used = vec![false; b];
        let mut edges = Vec::new();

        // Walk from an outer node until another outer node is reached.
        let trace = |start_layer: Layer, start: usize, mid_used: &mut Vec<bool>| -> (NodeRef, u32) {
            let mut layer = start_layer;
            let mut node = start;
            let mut decorations = 0u32;
            loop {
                match layer {
                    Layer::Top => {
                        let (next, r) = top_link[node];
                        decorations += r;
                        if next < a {
                            return (NodeRef::north(next + 1), decorations);
                        }
                        let j = next - a;
                        mid_used[j] = true;
                        layer = Layer::Bottom;
                        node = j;
                    }
                    Layer::Bottom => {
                        let (next, r) = bot_link[node];
                        decorations += r;
                        if next >= b {
                            return (NodeRef::south(next - b + 1), decorations);
                        }
                        mid_used[next] = true;
                        layer = Layer::Top;
                        node = a + next;
                    }
                }
            }
        };

        let mut done_north = vec![false; a];
        let mut done_south = vec![false; c];
        for i in 0..a {
            if done_north[i] {
                continue;
            }
            done_north[i] = true;
            let (end, r) = trace(Layer::Top, i, &mut mid_used);
            match end.face {
                Face::North => done_north[end.index - 1] = true,
                Face::South => done_south[end.index - 1] = true,
            }
            edges.push(Edge::new(NodeRef::north(i + 1), end, r));
        }
        for k in 0..c {
            if done_south[k] {
                continue;
            }
            done_south[k] = true;
            let (end, r) = trace(Layer::Bottom, b + k, &mut mid_used);
            // strands from the south face can only end on the south face now
            done_south[end.index - 1] = true;
            edges.push(Edge::new(NodeRef::south(k + 1), end, r));
        }

        let mut loops: Vec<u32> = self.loops.iter().chain(&bottom.loops).copied().collect();
        for j in 0..b {
            if mid_used[j] {
                continue;
            }
            // closed component through shared node j
            let mut decorations = 0u32;
            let mut node = j;
            loop {
                mid_used[node] = true;
                let (up, r1) = top_link[a + node];
                decorations += r1;
                let j2 = up - a;
                mid_used[j2] = true;
                let (down, r2) = bot_link[j2];
                decorations += r2;
                node = down;
                if node == j {
                    break;
                }
            }
            loops.push(decorations);
        }

        let out = DecoratedTangle::from_parts(a, c, edges, loops);
        debug_assert!(out.validate().is_ok(), "concatenation broke an invariant: {out}");
        debug_assert_eq!(
            out.total_decorations(),
            self.total_decorations() + bottom.total_decorations()
        );
        Ok(out)
    }

    /// Flips the decoration on the arc at `N1` (0 <-> 1).
    pub fn toggle_nw(&self) -> Result<DecoratedTangle, TangleError> {
        if !self.loops.is_empty() || self.edges.iter().any(|e| e.decorations > 1) {
            return Err(TangleError::NotBlobLike);
        }
        let node = if self.n_north > 0 {
            NodeRef::north(1)
        } else {
            NodeRef::south(self.n_south)
        };
        let mut out = self.clone();
        for e in out.edges.iter_mut() {
            if e.contains(node) {
                e.decorations = 1 - e.decorations;
            }
        }
        Ok(out)
    }

    /// Same tangle with every loop dropped.
    pub fn without_loops(&self) -> DecoratedTangle {
        DecoratedTangle {
            loops: Vec::new(),
            ..self.clone()
        }
    }

    /// Same tangle with edge decorations replaced by `f(edge)` and loops
    /// replaced wholesale. Callers guarantee the result stays valid.
    pub(crate) fn remap(&self, mut f: impl FnMut(&Edge) -> u32, loops: Vec<u32>) -> DecoratedTangle {
        let edges = self
            .edges
            .iter()
            .map(|e| e.with_decorations(f(e)))
            .collect();
        DecoratedTangle::from_parts(self.n_north, self.n_south, edges, loops)
    }

    /// Adds loops with the given decoration counts.
    pub fn with_loops(&self, extra: impl IntoIterator<Item = u32>) -> DecoratedTangle {
        let mut loops = self.loops.clone();
        loops.extend(extra);
        DecoratedTangle::from_parts(self.n_north, self.n_south, self.edges.clone(), loops)
    }

    /// Every tangle obtained by putting 0 or 1 decorations on each
    /// west-exposed arc, in canonical order. `self` must be undecorated.
    pub fn blob_decorations(&self) -> Vec<DecoratedTangle> {
        let exposed: Vec<usize> = self
            .exposure()
            .iter()
            .enumerate()
            .filter(|(_, &x)| x)
            .map(|(k, _)| k)
            .collect();
        let mut out = Vec::with_capacity(1 << exposed.len());
        for mask in 0u64..(1u64 << exposed.len()) {
            let mut t = self.clone();
            for (bit, &k) in exposed.iter().enumerate() {
                t.edges[k].decorations = ((mask >> bit) & 1) as u32;
            }
            out.push(t);
        }
        out.sort();
        out
    }
}

/// All undecorated loop-free crossing-free tangles with the given face sizes,
/// in canonical order.
pub fn enumerate_matchings(n_north: usize, n_south: usize) -> Result<Vec<DecoratedTangle>, TangleError> {
    let total = n_north + n_south;
    if !total.is_multiple_of(2) {
        return Err(TangleError::OddNodeTotal(total));
    }
    let mut out = Vec::new();
    let mut pairs = Vec::with_capacity(total / 2);
    noncrossing_pairings(1, total, &mut pairs, &mut |pairs| {
        let shell = DecoratedTangle::from_parts(n_north, n_south, Vec::new(), Vec::new());
        let edges = pairs
            .iter()
            .map(|&(p, q)| Edge::new(shell.node_at(p), shell.node_at(q), 0))
            .collect();
        out.push(DecoratedTangle::from_parts(n_north, n_south, edges, Vec::new()));
    });
    out.sort();
    Ok(out)
}

type Emit<'a> = &'a mut dyn FnMut(&[(usize, usize)]);

/// Calls `emit` with every noncrossing perfect matching of positions
/// `lo..=hi`, appended to `pairs`.
fn noncrossing_pairings(lo: usize, hi: usize, pairs: &mut Vec<(usize, usize)>, emit: Emit<'_>) {
    fn go(segments: &mut Vec<(usize, usize)>, pairs: &mut Vec<(usize, usize)>, emit: Emit<'_>) {
        let Some((lo, hi)) = segments.pop() else {
            emit(pairs);
            return;
        };
        if lo > hi {
            go(segments, pairs, emit);
            segments.push((lo, hi));
            return;
        }
        let mut partner = lo + 1;
        while partner <= hi {
            pairs.push((lo, partner));
            segments.push((partner + 1, hi));
            segments.push((lo + 1, partner - 1));
            go(segments, pairs, emit);
            segments.pop();
            segments.pop();
            pairs.pop();
            partner += 2;
        }
        segments.push((lo, hi));
    }
    let mut segments = vec![(lo, hi)];
    go(&mut segments, pairs, emit);
}

impl fmt::Display for DecoratedTangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{} :: ", self.n_north, self.n_south)?;
        if self.edges.is_empty() {
            f.write_str("-")?;
        }
        for (k, e) in self.edges.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(" ;loops:")?;
        if self.loops.is_empty() {
            return f.write_str("-");
        }
        for (k, r) in self.loops.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DecoratedTangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

fn parse_node(s: &str) -> Result<NodeRef, TangleError> {
    let bad = || TangleError::Parse(format!("bad node `{s}`"));
    let (face, rest) = match s.as_bytes().first() {
        Some(b'N') => (Face::North, &s[1..]),
        Some(b'S') => (Face::South, &s[1..]),
        _ => return Err(bad()),
    };
    let index: usize = rest.parse().map_err(|_| bad())?;
    Ok(NodeRef { index, face })
}

impl FromStr for DecoratedTangle {
    type Err = TangleError;

    /// Parses the canonical text form `n|m :: N1-N2*,S1-S2 ;loops:0,1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        let (head, rest) = s
            .split_once("::")
            .ok_or_else(|| TangleError::Parse("missing `::`".into()))?;
        let (nn, ns) = head
            .trim()
            .split_once('|')
            .ok_or_else(|| TangleError::Parse("missing `|`".into()))?;
        let parse_count = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| TangleError::Parse(format!("bad node count `{x}`")))
        };
        let (n_north, n_south) = (parse_count(nn)?, parse_count(ns)?);
        let (arcs_text, loops_text) = rest
            .split_once(";loops:")
            .or_else(|| rest.split_once("; loops:"))
            .ok_or_else(|| TangleError::Parse("missing `;loops:`".into()))?;
        let mut arcs = Vec::new();
        let arcs_text = arcs_text.trim();
        if arcs_text != "-" && !arcs_text.is_empty() {
            for item in arcs_text.split(',') {
                let item = item.trim();
                let stars = item.len() - item.trim_end_matches('*').len();
                let (a, b) = item
                    .trim_end_matches('*')
                    .split_once('-')
                    .ok_or_else(|| TangleError::Parse(format!("bad arc `{item}`")))?;
                arcs.push((parse_node(a)?, parse_node(b)?, stars as u32));
            }
        }
        let mut loops = Vec::new();
        let loops_text = loops_text.trim();
        if loops_text != "-" && !loops_text.is_empty() {
            for item in loops_text.split(',') {
                loops.push(
                    item.trim()
                        .parse::<u32>()
                        .map_err(|_| TangleError::Parse(format!("bad loop count `{item}`")))?,
                );
            }
        }
        DecoratedTangle::new(n_north, n_south, arcs, loops)
    }
}
