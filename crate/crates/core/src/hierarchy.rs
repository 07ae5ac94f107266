//! Rooted label trees with directed edge weights.
//!
//! Labels are the dense integers `1..=n`. Every non-root node `y` owns the
//! edge to its parent, which carries two weights: the *down* weight of
//! `P(y) -> y` and the *up* weight of `y -> P(y)`. A hierarchy is symmetric
//! when the two agree on every edge.
//!
//! The text format is line oriented:
//!
//! ```text
//! # comment
//! n 5 root 1
//! edge 1 2 1.0 1.0
//! edge 2 4 1.0 0.5
//! ```
//!
//! where each `edge` line reads `edge <parent> <child> <down> <up>`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::scalar::Scalar;

/// A class label, `1..=n`.
pub type Label = usize;

/// One directed-weight edge between a parent and a child.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge<T> {
    pub parent: Label,
    pub child: Label,
    /// Weight of `parent -> child`.
    pub down: T,
    /// Weight of `child -> parent`.
    pub up: T,
}

impl<T> Edge<T> {
    pub fn new(parent: Label, child: Label, down: T, up: T) -> Self {
        Edge {
            parent,
            child,
            down,
            up,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HierarchyError {
    #[error("hierarchy must contain at least one node")]
    Empty,
    #[error("node {node} outside 1..={n}")]
    NodeOutOfRange { node: Label, n: usize },
    #[error("node {child} is declared as a child more than once")]
    DuplicateChild { child: Label },
    #[error("cycle through node {node}")]
    Cycle { node: Label },
    #[error("root {root} cannot have a parent (declared parent {parent})")]
    RootHasParent { root: Label, parent: Label },
    #[error("node {node} is not connected to root {root}")]
    Disconnected { node: Label, root: Label },
    #[error("edge {parent}->{child}: {direction} weight must be positive and finite")]
    NonPositiveWeight {
        parent: Label,
        child: Label,
        direction: &'static str,
    },
    #[error("missing header line `n <count> root <label>`")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<HierarchyError>,
    },
}

impl HierarchyError {
    fn at(self, line: Option<usize>) -> Self {
        match line {
            Some(line) => HierarchyError::AtLine {
                line,
                source: Box::new(self),
            },
            None => self,
        }
    }
}

/// An immutable rooted tree over labels `1..=n`.
///
/// Children are kept in ascending label order so every traversal is
/// deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct Hierarchy<T> {
    root: Label,
    // 0 marks the root; real labels start at 1.
    parent: Vec<Label>,
    child_start: Vec<usize>,
    child_list: Vec<Label>,
    down: Vec<T>,
    up: Vec<T>,
    depth: Vec<usize>,
    symmetric: bool,
    max_arity: usize,
}

#[inline]
fn ix(y: Label) -> usize {
    y - 1
}

impl<T: Scalar> Hierarchy<T> {
    /// A hierarchy with a single node and no edges.
    pub fn singleton() -> Self {
        Self::from_edges(1, 1, std::iter::empty()).expect("single node is a valid tree")
    }

    /// Builds and validates a hierarchy from its edge list.
    pub fn from_edges<I>(n: usize, root: Label, edges: I) -> Result<Self, HierarchyError>
    where
        I: IntoIterator<Item = Edge<T>>,
    {
        Self::build(n, root, edges.into_iter().map(|e| (e, None)))
    }

    fn build<I>(n: usize, root: Label, edges: I) -> Result<Self, HierarchyError>
    where
        I: IntoIterator<Item = (Edge<T>, Option<usize>)>,
    {
        if n == 0 {
            return Err(HierarchyError::Empty);
        }
        if root == 0 || root > n {
            return Err(HierarchyError::NodeOutOfRange { node: root, n });
        }

        let mut parent = vec![0; n];
        let mut line_of = vec![None; n];
        let mut down = vec![T::zero(); n];
        let mut up = vec![T::zero(); n];

        for (edge, line) in edges {
            for node in [edge.parent, edge.child] {
                if node == 0 || node > n {
                    return Err(HierarchyError::NodeOutOfRange { node, n }.at(line));
                }
            }
            for (w, direction) in [(edge.down, "down"), (edge.up, "up")] {
                if !(w.is_finite() && w > T::zero()) {
                    return Err(HierarchyError::NonPositiveWeight {
                        parent: edge.parent,
                        child: edge.child,
                        direction,
                    }
                    .at(line));
                }
            }
            if edge.parent == edge.child {
                return Err(HierarchyError::Cycle { node: edge.child }.at(line));
            }
            let c = ix(edge.child);
            if parent[c] != 0 {
                return Err(HierarchyError::DuplicateChild { child: edge.child }.at(line));
            }
            parent[c] = edge.parent;
            line_of[c] = line;
            down[c] = edge.down;
            up[c] = edge.up;
        }

        // Cycle detection: walk up from every node, stamping the walk's origin.
        let mut stamp = vec![0usize; n];
        for start in 1..=n {
            let mut v = start;
            while v != 0 && stamp[ix(v)] == 0 {
                stamp[ix(v)] = start;
                v = parent[ix(v)];
            }
            if v != 0 && stamp[ix(v)] == start {
                return Err(HierarchyError::Cycle { node: v }.at(line_of[ix(v)]));
            }
        }

        if parent[ix(root)] != 0 {
            return Err(HierarchyError::RootHasParent {
                root,
                parent: parent[ix(root)],
            }
            .at(line_of[ix(root)]));
        }
        if let Some(node) = (1..=n).find(|&y| y != root && parent[ix(y)] == 0) {
            return Err(HierarchyError::Disconnected { node, root });
        }

        // CSR child lists; filling in ascending child order keeps them sorted.
        let mut child_start = vec![0usize; n + 1];
        for y in 1..=n {
            if y != root {
                child_start[parent[ix(y)]] += 1;
            }
        }
        for i in 1..=n {
            child_start[i] += child_start[i - 1];
        }
        let mut fill = child_start.clone();
        let mut child_list = vec![0; n.saturating_sub(1)];
        for y in 1..=n {
            if y != root {
                let p = ix(parent[ix(y)]);
                child_list[fill[p]] = y;
                fill[p] += 1;
            }
        }
        let max_arity = (0..n)
            .map(|i| child_start[i + 1] - child_start[i])
            .max()
            .unwrap_or(0);

        let symmetric = (1..=n).all(|y| y == root || down[ix(y)] == up[ix(y)]);

        let mut h = Hierarchy {
            root,
            parent,
            child_start,
            child_list,
            down,
            up,
            depth: vec![0; n],
            symmetric,
            max_arity,
        };

        let mut stack = vec![root];
        while let Some(y) = stack.pop() {
            let d = h.depth[ix(y)] + 1;
            for i in h.child_start[ix(y)]..h.child_start[ix(y) + 1] {
                let c = h.child_list[i];
                h.depth[ix(c)] = d;
                stack.push(c);
            }
        }

        Ok(h)
    }

    /// Number of labels.
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> Label {
        self.root
    }

    pub fn labels(&self) -> std::ops::RangeInclusive<Label> {
        1..=self.len()
    }

    pub fn contains(&self, y: Label) -> bool {
        y >= 1 && y <= self.len()
    }

    /// Returns an error naming `y` when it is not a label of this tree.
    pub fn check(&self, y: Label) -> Result<(), HierarchyError> {
        if self.contains(y) {
            Ok(())
        } else {
            Err(HierarchyError::NodeOutOfRange {
                node: y,
                n: self.len(),
            })
        }
    }

    pub fn parent(&self, y: Label) -> Option<Label> {
        match self.parent[ix(y)] {
            0 => None,
            p => Some(p),
        }
    }

    pub fn children(&self, y: Label) -> &[Label] {
        &self.child_list[self.child_start[ix(y)]..self.child_start[ix(y) + 1]]
    }

    pub fn is_leaf(&self, y: Label) -> bool {
        self.children(y).is_empty()
    }

    /// Edge count from the root.
    pub fn depth(&self, y: Label) -> usize {
        self.depth[ix(y)]
    }

    /// Largest depth of any node.
    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Largest number of children of any node (`k`).
    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Weight of the edge `P(y) -> y`; `None` at the root.
    pub fn down_weight(&self, y: Label) -> Option<T> {
        self.parent(y).map(|_| self.down[ix(y)])
    }

    /// Weight of the edge `y -> P(y)`; `None` at the root.
    pub fn up_weight(&self, y: Label) -> Option<T> {
        self.parent(y).map(|_| self.up[ix(y)])
    }

    // Zero at the root.
    #[inline]
    pub(crate) fn down(&self, y: Label) -> T {
        self.down[ix(y)]
    }

    #[inline]
    pub(crate) fn up(&self, y: Label) -> T {
        self.up[ix(y)]
    }

    #[inline]
    pub(crate) fn parent_raw(&self, y: Label) -> Label {
        self.parent[ix(y)]
    }

    /// All edges, ordered by child label.
    pub fn edges(&self) -> impl Iterator<Item = Edge<T>> + '_ {
        self.labels()
            .filter(move |&y| y != self.root)
            .map(move |y| Edge::new(self.parent[ix(y)], y, self.down[ix(y)], self.up[ix(y)]))
    }

    /// Strict ancestors of `y`, nearest first.
    pub fn ancestors(&self, y: Label) -> Ancestors<'_, T> {
        Ancestors {
            h: self,
            next: self.parent_raw(y),
        }
    }

    /// `true` when `a` lies on the path from `y` to the root (inclusive).
    pub fn is_ancestor_or_self(&self, a: Label, y: Label) -> bool {
        if self.depth(a) > self.depth(y) {
            return false;
        }
        let mut v = y;
        while self.depth(v) > self.depth(a) {
            v = self.parent_raw(v);
        }
        v == a
    }

    /// Deepest common ancestor-or-self of `a` and `b`.
    pub fn lca(&self, a: Label, b: Label) -> Result<Label, HierarchyError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.lca_unchecked(a, b))
    }

    pub(crate) fn lca_unchecked(&self, mut a: Label, mut b: Label) -> Label {
        while self.depth(a) > self.depth(b) {
            a = self.parent_raw(a);
        }
        while self.depth(b) > self.depth(a) {
            b = self.parent_raw(b);
        }
        while a != b {
            a = self.parent_raw(a);
            b = self.parent_raw(b);
        }
        a
    }

    /// Labels in post-order (children before parents, siblings ascending),
    /// produced with an explicit stack.
    pub fn post_order(&self) -> Vec<Label> {
        let mut order = Vec::with_capacity(self.len());
        let mut stack: Vec<(Label, usize)> = vec![(self.root, 0)];
        while let Some(top) = stack.last_mut() {
            let (y, next) = *top;
            let kids = self.children(y);
            if next < kids.len() {
                top.1 += 1;
                stack.push((kids[next], 0));
            } else {
                order.push(y);
                stack.pop();
            }
        }
        order
    }

    /// The same topology with every weight replaced by `f(edge)`.
    pub fn map_weights<F>(&self, mut f: F) -> Self
    where
        F: FnMut(&Edge<T>) -> (T, T),
    {
        let mut out = self.clone();
        for e in self.edges() {
            let (d, u) = f(&e);
            out.down[ix(e.child)] = d;
            out.up[ix(e.child)] = u;
        }
        out.symmetric = out
            .labels()
            .all(|y| y == out.root || out.down[ix(y)] == out.up[ix(y)]);
        out
    }
}

/// Iterator over the strict ancestors of a node.
pub struct Ancestors<'a, T> {
    h: &'a Hierarchy<T>,
    next: Label,
}

impl<T> Iterator for Ancestors<'_, T> {
    type Item = Label;

    fn next(&mut self) -> Option<Label> {
        match self.next {
            0 => None,
            y => {
                self.next = self.h.parent[ix(y)];
                Some(y)
            }
        }
    }
}

/// Parses the hierarchy text format.
pub fn parse_hierarchy<T: Scalar>(text: &str) -> Result<Hierarchy<T>, HierarchyError> {
    let mut header: Option<(usize, Label)> = None;
    let mut edges = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let syntax = |message: String| HierarchyError::Syntax { line, message };

        match (header, tokens[0]) {
            (None, "n") => {
                if tokens.len() < 3 || tokens[2] != "root" {
                    return Err(syntax(
                        "missing root: expected `n <count> root <label>`".into(),
                    ));
                }
                if tokens.len() != 4 {
                    return Err(syntax("expected `n <count> root <label>`".into()));
                }
                let n = parse_int(tokens[1], "node count", line)?;
                let root = parse_int(tokens[3], "root label", line)?;
                header = Some((n, root));
            }
            (None, _) => return Err(HierarchyError::MissingHeader),
            (Some(_), "edge") => {
                if tokens.len() != 5 {
                    return Err(syntax(
                        "expected `edge <parent> <child> <down_weight> <up_weight>`".into(),
                    ));
                }
                let parent = parse_int(tokens[1], "parent", line)?;
                let child = parse_int(tokens[2], "child", line)?;
                let down = parse_weight::<T>(tokens[3], "down weight", line)?;
                let up = parse_weight::<T>(tokens[4], "up weight", line)?;
                edges.push((Edge::new(parent, child, down, up), Some(line)));
            }
            (Some(_), "n") => return Err(syntax("duplicate header".into())),
            (Some(_), other) => return Err(syntax(format!("unknown record `{other}`"))),
        }
    }

    let (n, root) = header.ok_or(HierarchyError::MissingHeader)?;
    Hierarchy::build(n, root, edges)
}

fn parse_int(token: &str, what: &str, line: usize) -> Result<usize, HierarchyError> {
    token.parse().map_err(|_| HierarchyError::Syntax {
        line,
        message: format!("invalid {what} `{token}`"),
    })
}

fn parse_weight<T: Scalar>(token: &str, what: &str, line: usize) -> Result<T, HierarchyError> {
    token.parse().map_err(|_| HierarchyError::Syntax {
        line,
        message: format!("invalid {what} `{token}`"),
    })
}

impl<T: Scalar> FromStr for Hierarchy<T> {
    type Err = HierarchyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_hierarchy(s)
    }
}

/// Writes the text format. Floats use the shortest round-tripping form.
impl<T: Scalar> fmt::Display for Hierarchy<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {} root {}", self.len(), self.root)?;
        for e in self.edges() {
            writeln!(f, "edge {} {} {} {}", e.parent, e.child, e.down, e.up)?;
        }
        Ok(())
    }
}
