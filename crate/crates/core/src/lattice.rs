//! Certified finite lattices with cached join and meet tables.

use fixedbitset::FixedBitSet;

use crate::error::Result;
use crate::poset::{Elem, Poset};

#[derive(Debug, Clone)]
pub struct Lattice {
    poset: Poset,
    join: Vec<Elem>,
    meet: Vec<Elem>,
    bottom: Elem,
    top: Elem,
    parts: Option<Vec<Vec<String>>>,
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.poset == other.poset
    }
}

/// Which bound of a pair failed to be unique.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Join,
    Meet,
}

/// A pair without a unique least upper bound (or greatest lower bound),
/// together with its minimal upper (maximal lower) bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundFailure {
    pub bound: Bound,
    pub pair: (String, String),
    pub candidates: Vec<String>,
}

impl BoundFailure {
    pub fn describe(&self) -> String {
        if self.candidates.is_empty() {
            let none = match self.bound {
                Bound::Join => "have no common upper bound",
                Bound::Meet => "have no common lower bound",
            };
            return format!("`{}` and `{}` {none}", self.pair.0, self.pair.1);
        }
        let what = match self.bound {
            Bound::Join => "do not have a unique least upper bound",
            Bound::Meet => "do not have a unique greatest lower bound",
        };
        let kind = match self.bound {
            Bound::Join => "minimal upper bounds",
            Bound::Meet => "maximal lower bounds",
        };
        format!(
            "`{}` and `{}` {what}; {kind}: [{}]",
            self.pair.0,
            self.pair.1,
            self.candidates.join(", ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeDiagnostic {
    pub is_lattice: bool,
    pub is_distributive: bool,
    pub failure: Option<BoundFailure>,
    pub distributivity_witness: Option<[String; 3]>,
}

/// Checks that every pair of `poset` has a unique join and meet.
#[allow(clippy::result_large_err)]
pub fn certify_lattice(poset: Poset) -> std::result::Result<Lattice, LatticeDiagnostic> {
    Lattice::certify(poset)
}

impl Lattice {
    #[allow(clippy::result_large_err)]
    pub fn certify(poset: Poset) -> std::result::Result<Self, LatticeDiagnostic> {
        let n = poset.len();
        let mut join = vec![Elem::new(0); n * n];
        let mut meet = vec![Elem::new(0); n * n];
        for x in poset.elements() {
            join[x.index() * n + x.index()] = x;
            meet[x.index() * n + x.index()] = x;
            for y in poset.elements().skip(x.index() + 1) {
                let j = least_bound(&poset, x, y, Bound::Join).map_err(not_lattice)?;
                let m = least_bound(&poset, x, y, Bound::Meet).map_err(not_lattice)?;
                join[x.index() * n + y.index()] = j;
                join[y.index() * n + x.index()] = j;
                meet[x.index() * n + y.index()] = m;
                meet[y.index() * n + x.index()] = m;
            }
        }
        let minimal = poset.minimal_elements();
        let maximal = poset.maximal_elements();
        // Pairwise joins and meets exist, so the extremes are unique.
        let (bottom, top) = (minimal[0], maximal[0]);
        debug_assert_eq!(minimal.len(), 1);
        debug_assert_eq!(maximal.len(), 1);
        Ok(Lattice {
            poset,
            join,
            meet,
            bottom,
            top,
            parts: None,
        })
    }

    pub(crate) fn with_parts(mut self, parts: Vec<Vec<String>>) -> Self {
        debug_assert_eq!(parts.len(), self.len());
        self.parts = Some(parts);
        self
    }

    /// Tuple components of each element when this lattice is a product.
    pub fn parts(&self) -> Option<&[Vec<String>]> {
        self.parts.as_deref()
    }

    /// Components of `e`: its tuple parts for products, otherwise its id.
    pub fn components(&self, e: Elem) -> Vec<String> {
        match &self.parts {
            Some(parts) => parts[e.index()].clone(),
            None => vec![self.id(e).to_string()],
        }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Elem> + ExactSizeIterator {
        self.poset.elements()
    }

    pub fn id(&self, e: Elem) -> &str {
        self.poset.id(e)
    }

    pub fn elem(&self, id: &str) -> Result<Elem> {
        self.poset.elem(id)
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    #[inline]
    pub fn le(&self, x: Elem, y: Elem) -> bool {
        self.poset.le(x, y)
    }

    #[inline]
    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        self.join[x.index() * self.len() + y.index()]
    }

    #[inline]
    pub fn meet(&self, x: Elem, y: Elem) -> Elem {
        self.meet[x.index() * self.len() + y.index()]
    }

    pub fn join_by_id(&self, x: &str, y: &str) -> Result<&str> {
        Ok(self.id(self.join(self.elem(x)?, self.elem(y)?)))
    }

    pub fn meet_by_id(&self, x: &str, y: &str) -> Result<&str> {
        Ok(self.id(self.meet(self.elem(x)?, self.elem(y)?)))
    }

    /// First triple `(x, y, z)` in canonical order with
    /// `x ∧ (y ∨ z) ≠ (x ∧ y) ∨ (x ∧ z)`.
    pub fn distributivity_witness(&self) -> Option<[Elem; 3]> {
        for x in self.elements() {
            for y in self.elements() {
                let xy = self.meet(x, y);
                for z in self.elements() {
                    let lhs = self.meet(x, self.join(y, z));
                    let rhs = self.join(xy, self.meet(x, z));
                    if lhs != rhs {
                        return Some([x, y, z]);
                    }
                }
            }
        }
        None
    }

    pub fn is_distributive(&self) -> bool {
        self.distributivity_witness().is_none()
    }

    pub fn diagnostic(&self) -> LatticeDiagnostic {
        let witness = self
            .distributivity_witness()
            .map(|t| t.map(|e| self.id(e).to_string()));
        LatticeDiagnostic {
            is_lattice: true,
            is_distributive: witness.is_none(),
            failure: None,
            distributivity_witness: witness,
        }
    }

    /// Non-bottom elements covering exactly one element, in canonical order.
    pub fn join_irreducibles(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&e| e != self.bottom && self.poset.lower_covers(e).len() == 1)
            .collect()
    }

    pub fn meet_irreducibles(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&e| e != self.top && self.poset.upper_covers(e).len() == 1)
            .collect()
    }
}

fn not_lattice(failure: BoundFailure) -> LatticeDiagnostic {
    LatticeDiagnostic {
        is_lattice: false,
        is_distributive: false,
        failure: Some(failure),
        distributivity_witness: None,
    }
}

fn least_bound(
    poset: &Poset,
    x: Elem,
    y: Elem,
    bound: Bound,
) -> std::result::Result<Elem, BoundFailure> {
    type Reach = fn(&Poset, Elem) -> &FixedBitSet;
    let (towards, away): (Reach, Reach) = match bound {
        Bound::Join => (Poset::up_set, Poset::down_set),
        Bound::Meet => (Poset::down_set, Poset::up_set),
    };
    let mut common = towards(poset, x).clone();
    common.intersect_with(towards(poset, y));

    // The extreme candidate in the linear extension is the only one that can
    // bound every other common bound.
    let candidate = common.ones().map(Elem::new).min_by_key(|&e| {
        let p = poset.linear_position(e);
        match bound {
            Bound::Join => p as isize,
            Bound::Meet => -(p as isize),
        }
    });
    if let Some(c) = candidate {
        if common.is_subset(towards(poset, c)) {
            return Ok(c);
        }
    }
    let candidates = common
        .ones()
        .map(Elem::new)
        .filter(|&e| {
            let mut beyond = away(poset, e).clone();
            beyond.intersect_with(&common);
            beyond.count_ones(..) == 1
        })
        .map(|e| poset.id(e).to_string())
        .collect();
    Err(BoundFailure {
        bound,
        pair: (poset.id(x).to_string(), poset.id(y).to_string()),
        candidates,
    })
}
