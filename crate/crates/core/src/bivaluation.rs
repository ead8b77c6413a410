//! Context-dependent bi-valuations `w(x | y)`: the degree to which the context
//! `y` includes `x`.
//!
//! `w(x | y) = 1` whenever `y ≤ x`; otherwise `w(x | y) = v(x ∧ y) / v(y)`,
//! defined only for `v(y) > 0`.

use crate::builders::ProductLattice;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::poset::Elem;
use crate::valuation::{RuleReport, Valuation, Worst};

#[derive(Debug, Clone)]
pub struct BiValuation {
    base: Valuation,
}

impl From<Valuation> for BiValuation {
    fn from(base: Valuation) -> Self {
        BiValuation { base }
    }
}

impl BiValuation {
    pub fn new(base: Valuation) -> Self {
        BiValuation { base }
    }

    pub fn base(&self) -> &Valuation {
        &self.base
    }

    pub fn lattice(&self) -> &Lattice {
        self.base.lattice()
    }

    /// `w(x | y)`, or `None` where the context has no positive valuation.
    #[inline]
    pub fn try_bival(&self, x: Elem, y: Elem) -> Option<f64> {
        let l = self.lattice();
        if l.le(y, x) {
            return Some(1.0);
        }
        let vy = self.base.value(y);
        if vy > 0.0 {
            Some(self.base.value(l.meet(x, y)) / vy)
        } else {
            None
        }
    }

    pub fn bival(&self, x: Elem, y: Elem) -> Result<f64> {
        self.try_bival(x, y).ok_or_else(|| self.undefined(x, y))
    }

    pub fn bival_by_id(&self, x: &str, y: &str) -> Result<f64> {
        let l = self.lattice();
        self.bival(l.elem(x)?, l.elem(y)?)
    }

    fn undefined(&self, x: Elem, y: Elem) -> Error {
        let l = self.lattice();
        Error::UndefinedContext {
            element: l.id(x).to_string(),
            context: l.id(y).to_string(),
            value: self.base.value(y),
        }
    }

    /// `|w(x|z) − w(x|y)·w(y|z)|` over chains `x ≤ y ≤ z` with defined terms.
    pub fn check_chain_rule(&self, tolerance: f64) -> RuleReport {
        let l = self.lattice();
        let p = l.poset();
        let mut worst = Worst::new(l, "chain", tolerance);
        for x in l.elements() {
            for y in p.up_set(x).ones().map(Elem::new) {
                let Some(xy) = self.try_bival(x, y) else {
                    continue;
                };
                for z in p.up_set(y).ones().map(Elem::new) {
                    let (Some(xz), Some(yz)) = (self.try_bival(x, z), self.try_bival(y, z)) else {
                        continue;
                    };
                    worst.record(xz - xy * yz, &[x, y, z]);
                }
            }
        }
        worst.finish()
    }

    /// `|w(y∧z | x) − w(z | x∧y)·w(y | x)|` over all triples `(x, y, z)` with
    /// defined terms.
    pub fn check_context_product_rule(&self, tolerance: f64) -> RuleReport {
        let l = self.lattice();
        let mut worst = Worst::new(l, "context-product", tolerance);
        for x in l.elements() {
            for y in l.elements() {
                let xy = l.meet(x, y);
                let Some(y_x) = self.try_bival(y, x) else {
                    continue;
                };
                for z in l.elements() {
                    let (Some(lhs), Some(z_xy)) =
                        (self.try_bival(l.meet(y, z), x), self.try_bival(z, xy))
                    else {
                        continue;
                    };
                    worst.record(lhs - z_xy * y_x, &[x, y, z]);
                }
            }
        }
        worst.finish()
    }

    /// `|w(x∨y|t) + w(x∧y|t) − w(x|t) − w(y|t)|` over distinct pairs and every
    /// context `t` with `v(t) > 0`.
    pub fn check_contextual_sum_rule(&self, tolerance: f64) -> Result<RuleReport> {
        let l = self.lattice();
        if let Some(w) = l.distributivity_witness() {
            return Err(Error::NotDistributive(
                w.iter().map(|&e| l.id(e).to_string()).collect(),
            ));
        }
        let mut worst = Worst::new(l, "contextual-sum", tolerance);
        for x in l.elements() {
            for y in l.elements().skip(x.index() + 1) {
                let (j, m) = (l.join(x, y), l.meet(x, y));
                for t in l.elements() {
                    if self.base.value(t) <= 0.0 {
                        continue;
                    }
                    let w = |e| self.try_bival(e, t).expect("positive context");
                    worst.record(w(j) + w(m) - w(x) - w(y), &[x, y, t]);
                }
            }
        }
        Ok(worst.finish())
    }

    /// `w(m | n∧t)` computed through the Bayes quotient
    /// `w(m|t) · w(n|m∧t) / w(n|t)`.
    pub fn bayes(&self, m: Elem, n: Elem, t: Elem) -> Result<f64> {
        let l = self.lattice();
        let prior = self.bival(m, t)?;
        let likelihood = self.bival(n, l.meet(m, t))?;
        let evidence = self.bival(n, t)?;
        if evidence == 0.0 {
            return Err(Error::DivisionByZero(format!(
                "w({} | {}) = 0",
                l.id(n),
                l.id(t)
            )));
        }
        Ok(prior * likelihood / evidence)
    }

    pub fn bayes_by_id(&self, m: &str, n: &str, t: &str) -> Result<f64> {
        let l = self.lattice();
        self.bayes(l.elem(m)?, l.elem(n)?, l.elem(t)?)
    }

    /// `|bayes(m, n, t) − w(m | n∧t)|` over all triples where both sides are
    /// defined.
    pub fn check_bayes(&self, tolerance: f64) -> RuleReport {
        let l = self.lattice();
        let mut worst = Worst::new(l, "bayes", tolerance);
        for m in l.elements() {
            for n in l.elements() {
                for t in l.elements() {
                    let Ok(quotient) = self.bayes(m, n, t) else {
                        continue;
                    };
                    let Some(direct) = self.try_bival(m, l.meet(n, t)) else {
                        continue;
                    };
                    worst.record(quotient - direct, &[m, n, t]);
                }
            }
        }
        worst.finish()
    }
}

/// `|w((x,y) | (tx,ty)) − w(x|tx)·w(y|ty)|` over all product elements and
/// product contexts with defined terms. `joint` must be valued on
/// `product.lattice`, `left` and `right` on its factors.
pub fn check_product_spaces_rule(
    product: &ProductLattice,
    joint: &BiValuation,
    left: &BiValuation,
    right: &BiValuation,
    tolerance: f64,
) -> Result<RuleReport> {
    if *joint.lattice() != *product.lattice {
        return Err(Error::LatticeMismatch(
            "joint bi-valuation is not on the product lattice".into(),
        ));
    }
    if *left.lattice() != *product.left || *right.lattice() != *product.right {
        return Err(Error::LatticeMismatch(
            "factor bi-valuations are not on the product's factors".into(),
        ));
    }
    let l = &*product.lattice;
    let mut worst = Worst::new(l, "product-spaces", tolerance);
    for e in l.elements() {
        let (x, y) = product.pair(e);
        for t in l.elements() {
            let (tx, ty) = product.pair(t);
            let terms = (
                joint.try_bival(e, t),
                left.try_bival(x, tx),
                right.try_bival(y, ty),
            );
            if let (Some(j), Some(a), Some(b)) = terms {
                worst.record(j - a * b, &[e, t]);
            }
        }
    }
    Ok(worst.finish())
}
