//! Finite posets given by a cover relation.
//!
//! Elements are stored in canonical identifier order, so an [`Elem`] index
//! doubles as the deterministic iteration position. The order relation is
//! precomputed as up-set and down-set bitsets.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::ident::canonical_cmp;

/// Position of an element in its poset's canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn new(index: usize) -> Self {
        Elem(index as u32)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Coarse shape of a poset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Chain,
    Antichain,
    Mixed,
}

impl Shape {
    pub fn as_str(self) -> &'static str {
        match self {
            Shape::Chain => "chain",
            Shape::Antichain => "antichain",
            Shape::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Poset {
    ids: Vec<String>,
    index: HashMap<String, Elem>,
    covers: Vec<(Elem, Elem)>,
    lower_covers: Vec<Vec<Elem>>,
    upper_covers: Vec<Vec<Elem>>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    linear: Vec<Elem>,
    position: Vec<usize>,
    dropped: Vec<(String, String)>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.covers == other.covers
    }
}

impl Eq for Poset {}

impl Poset {
    /// Builds a poset from elements and cover pairs `(lower, upper)`.
    ///
    /// Redundant pairs (implied by longer paths) are dropped and recorded in
    /// [`Poset::dropped_covers`]. Duplicate pairs are ignored.
    pub fn from_covers<I, S, C, A, B>(elements: I, covers: C) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
        C: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut ids: Vec<String> = elements.into_iter().map(Into::into).collect();
        if ids.is_empty() {
            return Err(Error::Empty);
        }
        ids.sort_by(|a, b| canonical_cmp(a, b));
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement(w[0].clone()));
        }
        if let Some(bad) = ids.iter().find(|id| id.is_empty()) {
            return Err(Error::UnknownElement(bad.clone()));
        }
        let index: HashMap<String, Elem> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), Elem::new(i)))
            .collect();

        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownElement(id.to_string()))
        };
        let mut edges = Vec::new();
        for (a, b) in covers {
            let (a, b) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            if a == b {
                let id = ids[a.index()].clone();
                return Err(Error::Cycle(vec![id.clone(), id]));
            }
            edges.push((a, b));
        }
        edges.sort_unstable();
        edges.dedup();

        Self::from_edges(ids, index, edges)
    }

    fn from_edges(
        ids: Vec<String>,
        index: HashMap<String, Elem>,
        edges: Vec<(Elem, Elem)>,
    ) -> Result<Self> {
        let n = ids.len();
        let mut succ = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for &(a, b) in &edges {
            succ[a.index()].push(b);
            indegree[b.index()] += 1;
        }

        // Kahn's algorithm, smallest canonical index first.
        let mut linear = Vec::with_capacity(n);
        let mut remaining = indegree.clone();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&i| remaining[i] == 0).map(Reverse).collect();
        while let Some(Reverse(i)) = ready.pop() {
            linear.push(Elem::new(i));
            for &s in &succ[i] {
                remaining[s.index()] -= 1;
                if remaining[s.index()] == 0 {
                    ready.push(Reverse(s.index()));
                }
            }
        }
        if linear.len() < n {
            return Err(Error::Cycle(find_cycle(&ids, &succ, &remaining)));
        }
        let mut position = vec![0; n];
        for (p, e) in linear.iter().enumerate() {
            position[e.index()] = p;
        }

        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &e in linear.iter().rev() {
            let i = e.index();
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(i);
            for &s in &succ[i] {
                set.union_with(&up[s.index()]);
            }
            up[i] = set;
        }
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (i, set) in up.iter().enumerate() {
            for j in set.ones() {
                down[j].insert(i);
            }
        }

        // (a, b) is redundant when another successor c of a already reaches b.
        let mut covers = Vec::with_capacity(edges.len());
        let mut dropped = Vec::new();
        for &(a, b) in &edges {
            let implied = succ[a.index()]
                .iter()
                .any(|&c| c != b && up[c.index()].contains(b.index()));
            if implied {
                dropped.push((ids[a.index()].clone(), ids[b.index()].clone()));
            } else {
                covers.push((a, b));
            }
        }
        let mut lower_covers = vec![Vec::new(); n];
        let mut upper_covers = vec![Vec::new(); n];
        for &(a, b) in &covers {
            upper_covers[a.index()].push(b);
            lower_covers[b.index()].push(a);
        }

        Ok(Poset {
            ids,
            index,
            covers,
            lower_covers,
            upper_covers,
            up,
            down,
            linear,
            position,
            dropped,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    /// Always false: empty posets are rejected at construction.
    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Elem> + ExactSizeIterator {
        (0..self.ids.len()).map(Elem::new)
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, e: Elem) -> &str {
        &self.ids[e.index()]
    }

    pub fn elem(&self, id: &str) -> Result<Elem> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Cover pairs `(lower, upper)` in canonical order.
    pub fn covers(&self) -> &[(Elem, Elem)] {
        &self.covers
    }

    /// Cover pairs supplied at construction that were implied by others.
    pub fn dropped_covers(&self) -> &[(String, String)] {
        &self.dropped
    }

    pub fn lower_covers(&self, e: Elem) -> &[Elem] {
        &self.lower_covers[e.index()]
    }

    pub fn upper_covers(&self, e: Elem) -> &[Elem] {
        &self.upper_covers[e.index()]
    }

    /// `{y : e ≤ y}` as a bitset over element indices.
    pub fn up_set(&self, e: Elem) -> &FixedBitSet {
        &self.up[e.index()]
    }

    /// `{x : x ≤ e}` as a bitset over element indices.
    pub fn down_set(&self, e: Elem) -> &FixedBitSet {
        &self.down[e.index()]
    }

    /// Elements in a linear extension of the order (lower elements first,
    /// canonical order among incomparable ones).
    pub fn linear_extension(&self) -> &[Elem] {
        &self.linear
    }

    pub(crate) fn linear_position(&self, e: Elem) -> usize {
        self.position[e.index()]
    }

    #[inline]
    pub fn le(&self, x: Elem, y: Elem) -> bool {
        self.up[x.index()].contains(y.index())
    }

    #[inline]
    pub fn lt(&self, x: Elem, y: Elem) -> bool {
        x != y && self.le(x, y)
    }

    #[inline]
    pub fn comparable(&self, x: Elem, y: Elem) -> bool {
        self.le(x, y) || self.le(y, x)
    }

    pub fn leq(&self, x: &str, y: &str) -> Result<bool> {
        Ok(self.le(self.elem(x)?, self.elem(y)?))
    }

    pub fn minimal_elements(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&e| self.lower_covers(e).is_empty())
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&e| self.upper_covers(e).is_empty())
            .collect()
    }

    /// Length of the longest chain ending at each element.
    pub fn heights(&self) -> Vec<usize> {
        let mut height = vec![0; self.len()];
        for &e in &self.linear {
            height[e.index()] = self
                .lower_covers(e)
                .iter()
                .map(|l| height[l.index()] + 1)
                .max()
                .unwrap_or(0);
        }
        height
    }

    pub fn classify(&self) -> Shape {
        let n = self.len();
        let comparable_pairs: usize = self.up.iter().map(|s| s.count_ones(..) - 1).sum();
        if comparable_pairs == n * (n - 1) / 2 {
            Shape::Chain
        } else if comparable_pairs == 0 {
            Shape::Antichain
        } else {
            Shape::Mixed
        }
    }

    /// Möbius function values `μ(x, z)` for every `z ≥ x`, indexed by element.
    pub fn mobius_row(&self, x: Elem) -> Vec<Option<i64>> {
        let mut row = vec![None; self.len()];
        let above = &self.up[x.index()];
        for &z in &self.linear[self.position[x.index()]..] {
            if !above.contains(z.index()) {
                continue;
            }
            let value = if z == x {
                1
            } else {
                let mut strictly_between = above.clone();
                strictly_between.intersect_with(&self.down[z.index()]);
                strictly_between.set(z.index(), false);
                -strictly_between
                    .ones()
                    .map(|w| row[w].expect("interval computed in linear order"))
                    .sum::<i64>()
            };
            row[z.index()] = Some(value);
        }
        row
    }

    pub fn mobius_at(&self, x: Elem, y: Elem) -> Option<i64> {
        if !self.le(x, y) {
            return None;
        }
        self.mobius_row(x)[y.index()]
    }

    pub fn mobius(&self, x: &str, y: &str) -> Result<i64> {
        let (xe, ye) = (self.elem(x)?, self.elem(y)?);
        self.mobius_at(xe, ye).ok_or_else(|| Error::NotComparable {
            lower: x.to_string(),
            upper: y.to_string(),
        })
    }

    /// The subposet induced on `members`, keeping their identifiers.
    pub fn induced(&self, members: &[Elem]) -> Result<Poset> {
        let ids = members.iter().map(|&e| self.id(e).to_string());
        let mut pairs = Vec::new();
        for &a in members {
            for &b in members {
                if self.lt(a, b) {
                    pairs.push((self.id(a), self.id(b)));
                }
            }
        }
        Poset::from_covers(ids, pairs)
    }

    /// Order-preserving bijection to `other`, if one exists. Entry `i` is the
    /// image of element `i`.
    pub fn find_isomorphism(&self, other: &Poset) -> Option<Vec<Elem>> {
        if self.len() != other.len() || self.covers.len() != other.covers.len() {
            return None;
        }
        let signature = |p: &Poset, e: Elem| {
            (
                p.down[e.index()].count_ones(..),
                p.up[e.index()].count_ones(..),
                p.lower_covers(e).len(),
                p.upper_covers(e).len(),
            )
        };
        let mut mine: Vec<_> = self.elements().map(|e| signature(self, e)).collect();
        let mut theirs: Vec<_> = other.elements().map(|e| signature(other, e)).collect();
        let candidates: Vec<Vec<Elem>> = self
            .elements()
            .map(|e| {
                other
                    .elements()
                    .filter(|&f| signature(other, f) == mine[e.index()])
                    .collect()
            })
            .collect();
        mine.sort_unstable();
        theirs.sort_unstable();
        if mine != theirs {
            return None;
        }

        let order: Vec<Elem> = self.linear.clone();
        let mut image = vec![None; self.len()];
        let mut used = vec![false; other.len()];
        if self.extend_isomorphism(other, &order, 0, &candidates, &mut image, &mut used) {
            Some(image.into_iter().map(|e| e.unwrap()).collect())
        } else {
            None
        }
    }

    fn extend_isomorphism(
        &self,
        other: &Poset,
        order: &[Elem],
        depth: usize,
        candidates: &[Vec<Elem>],
        image: &mut [Option<Elem>],
        used: &mut [bool],
    ) -> bool {
        let Some(&x) = order.get(depth) else {
            return true;
        };
        for &fx in &candidates[x.index()] {
            if used[fx.index()] {
                continue;
            }
            let consistent = order[..depth].iter().all(|&a| {
                let fa = image[a.index()].unwrap();
                self.le(a, x) == other.le(fa, fx) && self.le(x, a) == other.le(fx, fa)
            });
            if !consistent {
                continue;
            }
            image[x.index()] = Some(fx);
            used[fx.index()] = true;
            if self.extend_isomorphism(other, order, depth + 1, candidates, image, used) {
                return true;
            }
            image[x.index()] = None;
            used[fx.index()] = false;
        }
        false
    }
}

fn find_cycle(ids: &[String], succ: &[Vec<Elem>], remaining: &[usize]) -> Vec<String> {
    // Every node left with positive in-degree lies on or downstream of a cycle;
    // walking backwards through stuck predecessors must revisit a node.
    let n = ids.len();
    let mut pred = vec![None; n];
    for (a, targets) in succ.iter().enumerate() {
        if remaining[a] == 0 {
            continue;
        }
        for &b in targets {
            if remaining[b.index()] > 0 && pred[b.index()].is_none() {
                pred[b.index()] = Some(a);
            }
        }
    }
    let start = (0..n).find(|&i| remaining[i] > 0).unwrap();
    let mut seen = vec![usize::MAX; n];
    let mut path = Vec::new();
    let mut cur = start;
    while seen[cur] == usize::MAX {
        seen[cur] = path.len();
        path.push(cur);
        cur = pred[cur].expect("stuck node has a stuck predecessor");
    }
    let mut cycle: Vec<usize> = path[seen[cur]..].to_vec();
    cycle.reverse();
    let first = cycle[0];
    cycle.push(first);
    cycle.into_iter().map(|i| ids[i].clone()).collect()
}
