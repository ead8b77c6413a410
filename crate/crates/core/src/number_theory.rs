//! Divisor lattices ordered by division, the logarithmic valuation and the
//! resulting degrees of divisibility.
//!
//! Join is lcm and meet is gcd; prime powers are the join-irreducibles. With
//! `v(p^k) = ln p^k` on them the extended valuation is `v(m) = ln m`, and the
//! bi-valuation becomes `d(m | n) = ln gcd(m, n) / ln n`.

use std::sync::Arc;

use crate::bivaluation::BiValuation;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::poset::{Elem, Poset};
use crate::valuation::Valuation;
use crate::DEFAULT_MAX_ELEMENTS;

pub const MAX_MODULUS: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct DivisorLattice {
    modulus: u64,
    divisors: Vec<u64>,
    lattice: Arc<Lattice>,
    degrees: BiValuation,
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn prime_power_base(d: u64) -> Option<u64> {
    match factorize(d).as_slice() {
        [(p, _)] => Some(*p),
        _ => None,
    }
}

pub fn divisor_lattice(n: u64) -> Result<DivisorLattice> {
    DivisorLattice::new(n, DEFAULT_MAX_ELEMENTS)
}

impl DivisorLattice {
    pub fn new(n: u64, max_elements: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "modulus must be at least 2, got {n}"
            )));
        }
        if n > MAX_MODULUS {
            return Err(Error::SizeLimit {
                what: "divisor lattice modulus",
                requested: n as usize,
                limit: MAX_MODULUS as usize,
            });
        }
        let factors = factorize(n);
        let count: usize = factors.iter().map(|&(_, k)| k as usize + 1).product();
        if count > max_elements {
            return Err(Error::SizeLimit {
                what: "lattice elements",
                requested: count,
                limit: max_elements,
            });
        }
        let mut divisors = vec![1u64];
        for &(p, k) in &factors {
            let mut next = Vec::with_capacity(divisors.len() * (k as usize + 1));
            for &d in &divisors {
                let mut power = 1;
                for _ in 0..=k {
                    next.push(d * power);
                    power *= p;
                }
            }
            divisors = next;
        }
        divisors.sort_unstable();

        let mut covers = Vec::new();
        for &d in &divisors {
            for &(p, _) in &factors {
                if n.is_multiple_of(d * p) {
                    covers.push((d.to_string(), (d * p).to_string()));
                }
            }
        }
        let poset = Poset::from_covers(divisors.iter().map(u64::to_string), covers)?;
        let lattice = Arc::new(Lattice::certify(poset).expect("divisors of n form a lattice"));
        debug_assert!(lattice
            .elements()
            .all(|e| lattice.id(e) == divisors[e.index()].to_string()));

        let seed: Vec<(String, f64)> = lattice
            .join_irreducibles()
            .into_iter()
            .map(|e| {
                let d = divisors[e.index()];
                (d.to_string(), (d as f64).ln())
            })
            .collect();
        let log = Valuation::extend_from_irreducibles(Arc::clone(&lattice), seed)?;
        Ok(DivisorLattice {
            modulus: n,
            divisors,
            lattice,
            degrees: BiValuation::new(log),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Divisors in ascending order; position `i` is element index `i`.
    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn value(&self, e: Elem) -> u64 {
        self.divisors[e.index()]
    }

    pub fn elem(&self, d: u64) -> Result<Elem> {
        self.divisors
            .binary_search(&d)
            .map(Elem::new)
            .map_err(|_| Error::UnknownElement(d.to_string()))
    }

    /// Prime powers dividing the modulus, ascending.
    pub fn prime_powers(&self) -> Vec<u64> {
        self.divisors
            .iter()
            .copied()
            .filter(|&d| prime_power_base(d).is_some())
            .collect()
    }

    pub fn log_valuation(&self) -> &Valuation {
        self.degrees.base()
    }

    pub fn bivaluation(&self) -> &BiValuation {
        &self.degrees
    }

    pub fn lcm(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.value(self.lattice.join(self.elem(a)?, self.elem(b)?)))
    }

    pub fn gcd(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.value(self.lattice.meet(self.elem(a)?, self.elem(b)?)))
    }

    /// `d(m | n)`, the degree to which `n` includes (is divisible by) `m`.
    pub fn divisibility_degree(&self, m: u64, n: u64) -> Result<f64> {
        self.degrees.bival(self.elem(m)?, self.elem(n)?)
    }

    /// `d(m | n)` via the Bayes quotient with context the modulus.
    pub fn divisibility_bayes(&self, m: u64, n: u64) -> Result<f64> {
        self.degrees
            .bayes(self.elem(m)?, self.elem(n)?, self.lattice.top())
    }
}
