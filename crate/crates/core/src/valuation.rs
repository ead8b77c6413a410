//! Valuations on lattices and the rule reports that check them.
//!
//! On a distributive lattice a valuation satisfying the sum rule is fixed by
//! its values on the join-irreducible elements: Möbius inversion over the
//! join-irreducible subposet turns those seeds into increments `m(j)`, and
//! every element is valued as the sum of the increments below it.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::builders::ProductLattice;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::poset::Elem;

/// Outcome of checking one rule over every applicable tuple of elements.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleReport {
    pub rule: String,
    pub tuples_checked: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Tuple attaining `max_residual`; the first in canonical order on ties.
    pub witness: Option<Vec<String>>,
}

/// Running maximum over residuals with first-wins tie breaking.
pub(crate) struct Worst<'a> {
    lattice: &'a Lattice,
    rule: &'static str,
    tolerance: f64,
    count: usize,
    max: f64,
    witness: Option<Vec<Elem>>,
}

impl<'a> Worst<'a> {
    pub(crate) fn new(lattice: &'a Lattice, rule: &'static str, tolerance: f64) -> Self {
        Worst {
            lattice,
            rule,
            tolerance,
            count: 0,
            max: 0.0,
            witness: None,
        }
    }

    pub(crate) fn record(&mut self, residual: f64, tuple: &[Elem]) {
        // NaN means an undefined or overflowing term; treat it as the worst.
        let residual = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual.abs()
        };
        self.count += 1;
        if self.witness.is_none() || residual > self.max {
            self.max = residual;
            self.witness = Some(tuple.to_vec());
        }
    }

    pub(crate) fn finish(self) -> RuleReport {
        RuleReport {
            rule: self.rule.to_string(),
            tuples_checked: self.count,
            max_residual: self.max,
            tolerance: self.tolerance,
            passed: self.max <= self.tolerance,
            witness: self.witness.map(|t| {
                t.into_iter()
                    .map(|e| self.lattice.id(e).to_string())
                    .collect()
            }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Valuation {
    lattice: Arc<Lattice>,
    values: Vec<f64>,
    increments: Option<Vec<(Elem, f64)>>,
    monotone: bool,
}

impl Valuation {
    /// The unique sum-rule valuation taking the seeded values on the
    /// join-irreducible elements.
    pub fn extend_from_irreducibles<K, I>(lattice: Arc<Lattice>, seed: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, f64)>,
        K: AsRef<str>,
    {
        if let Some(w) = lattice.distributivity_witness() {
            return Err(Error::NotDistributive(
                w.iter().map(|&e| lattice.id(e).to_string()).collect(),
            ));
        }
        let irreducibles = lattice.join_irreducibles();
        let mut seeded: HashMap<Elem, f64> = HashMap::new();
        for (k, value) in seed {
            let e = lattice.elem(k.as_ref())?;
            if !irreducibles.contains(&e) {
                return Err(Error::NotIrreducible(k.as_ref().to_string()));
            }
            seeded.insert(e, value);
        }
        let missing: Vec<String> = irreducibles
            .iter()
            .filter(|j| !seeded.contains_key(j))
            .map(|&j| lattice.id(j).to_string())
            .collect();
        if !missing.is_empty() {
            return Err(Error::MissingSeed(missing));
        }

        // m(j) = Σ_{i ≤ j} μ(i, j) seed(i) over the join-irreducible subposet.
        let sub = lattice.poset().induced(&irreducibles)?;
        let sub_elem: Vec<Elem> = irreducibles
            .iter()
            .map(|&j| sub.elem(lattice.id(j)).unwrap())
            .collect();
        let mut increments = Vec::with_capacity(irreducibles.len());
        let mut generator = vec![0.0; sub.len()];
        for (a, &i) in irreducibles.iter().enumerate() {
            let row = sub.mobius_row(sub_elem[a]);
            for (b, _) in irreducibles.iter().enumerate() {
                if let Some(mu) = row[sub_elem[b].index()] {
                    generator[b] += mu as f64 * seeded[&i];
                }
            }
        }
        for (b, &j) in irreducibles.iter().enumerate() {
            increments.push((j, generator[b]));
        }

        let mut values = vec![0.0; lattice.len()];
        for x in lattice.elements() {
            let mut total = 0.0;
            for &(j, m) in &increments {
                if lattice.le(j, x) {
                    total += m;
                }
            }
            values[x.index()] = total;
        }
        let monotone = is_monotone(&lattice, &values);
        Ok(Valuation {
            lattice,
            values,
            increments: Some(increments),
            monotone,
        })
    }

    /// A valuation with explicitly assigned values. The bottom element may be
    /// omitted (it is 0); any other missing element is an error.
    pub fn from_values<K, I>(lattice: Arc<Lattice>, assigned: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, f64)>,
        K: AsRef<str>,
    {
        let mut values = vec![None; lattice.len()];
        values[lattice.bottom().index()] = Some(0.0);
        for (k, value) in assigned {
            let e = lattice.elem(k.as_ref())?;
            if e == lattice.bottom() && value != 0.0 {
                return Err(Error::NonzeroBottom {
                    element: k.as_ref().to_string(),
                    value,
                });
            }
            values[e.index()] = Some(value);
        }
        let missing: Vec<String> = lattice
            .elements()
            .filter(|e| values[e.index()].is_none())
            .map(|e| lattice.id(e).to_string())
            .collect();
        if !missing.is_empty() {
            return Err(Error::MissingValue(missing));
        }
        let values: Vec<f64> = values.into_iter().map(Option::unwrap).collect();
        let monotone = is_monotone(&lattice, &values);
        Ok(Valuation {
            lattice,
            values,
            increments: None,
            monotone,
        })
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    #[inline]
    pub fn value(&self, e: Elem) -> f64 {
        self.values[e.index()]
    }

    pub fn value_of(&self, id: &str) -> Result<f64> {
        Ok(self.value(self.lattice.elem(id)?))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Values keyed by element id.
    pub fn to_map(&self) -> BTreeMap<String, f64> {
        self.lattice
            .elements()
            .map(|e| (self.lattice.id(e).to_string(), self.value(e)))
            .collect()
    }

    /// Möbius increments on join-irreducibles, for extended valuations.
    pub fn increments(&self) -> Option<&[(Elem, f64)]> {
        self.increments.as_deref()
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    /// Whether every increment is nonnegative; `None` for assigned valuations.
    pub fn nonnegative_increments(&self) -> Option<bool> {
        self.increments
            .as_ref()
            .map(|inc| inc.iter().all(|&(_, m)| m >= 0.0))
    }

    /// Largest absolute value, used to normalize residuals. 1 for all-zero
    /// valuations.
    pub fn scale(&self) -> f64 {
        let max = self.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if max > 0.0 && max.is_finite() {
            max
        } else {
            1.0
        }
    }

    /// `|v(x∨y) + v(x∧y) − v(x) − v(y)| / scale` over unordered distinct pairs.
    pub fn check_sum_rule(&self, tolerance: f64) -> RuleReport {
        let l = &*self.lattice;
        sum_rule_report(l, &self.values, self.scale(), tolerance, |x, y| {
            (l.join(x, y), l.meet(x, y))
        })
    }

    /// `max(0, v(x) − v(y)) / scale` over strictly comparable pairs `x < y`.
    pub fn check_monotone(&self, tolerance: f64) -> RuleReport {
        let l = &*self.lattice;
        let scale = self.scale();
        let mut worst = Worst::new(l, "monotone", tolerance);
        for x in l.elements() {
            for y in l.poset().up_set(x).ones().map(Elem::new) {
                if y != x {
                    let r = (self.value(x) - self.value(y)).max(0.0) / scale;
                    worst.record(r, &[x, y]);
                }
            }
        }
        worst.finish()
    }
}

fn is_monotone(lattice: &Lattice, values: &[f64]) -> bool {
    lattice.elements().all(|x| {
        lattice
            .poset()
            .up_set(x)
            .ones()
            .all(|y| values[x.index()] <= values[y])
    })
}

fn sum_rule_report(
    lattice: &Lattice,
    values: &[f64],
    scale: f64,
    tolerance: f64,
    bounds: impl Fn(Elem, Elem) -> (Elem, Elem),
) -> RuleReport {
    let mut worst = Worst::new(lattice, "sum", tolerance);
    for x in lattice.elements() {
        for y in lattice.elements().skip(x.index() + 1) {
            let (j, m) = bounds(x, y);
            let r = values[j.index()] + values[m.index()] - values[x.index()] - values[y.index()];
            worst.record(r / scale, &[x, y]);
        }
    }
    worst.finish()
}

pub fn extend_from_irreducibles<K, I>(lattice: Arc<Lattice>, seed: I) -> Result<Valuation>
where
    I: IntoIterator<Item = (K, f64)>,
    K: AsRef<str>,
{
    Valuation::extend_from_irreducibles(lattice, seed)
}

/// `v((x, y)) = vx(x) · vy(y)` on a product lattice built from the factors of
/// `vx` and `vy`.
pub fn product_valuation(
    vx: &Valuation,
    vy: &Valuation,
    product: &ProductLattice,
) -> Result<Valuation> {
    if *vx.lattice != *product.left {
        return Err(Error::LatticeMismatch(
            "left valuation is not on the product's left factor".into(),
        ));
    }
    if *vy.lattice != *product.right {
        return Err(Error::LatticeMismatch(
            "right valuation is not on the product's right factor".into(),
        ));
    }
    let lattice = Arc::clone(&product.lattice);
    let values: Vec<f64> = lattice
        .elements()
        .map(|e| {
            let (a, b) = product.pair(e);
            vx.value(a) * vy.value(b)
        })
        .collect();
    let monotone = is_monotone(&lattice, &values);
    Ok(Valuation {
        lattice,
        values,
        increments: None,
        monotone,
    })
}
