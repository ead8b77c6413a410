//! Independent oracles shared by the integration suites. Nothing here calls
//! into the order computations it is used to check.
#![allow(dead_code, clippy::needless_range_loop, clippy::type_complexity)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use latcal_core::builders::SetFamily;
use latcal_core::{Lattice, Poset, Valuation};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// A random DAG on `n` labelled nodes: raw edge list plus the poset built from it.
#[derive(Debug, Clone)]
pub struct RandomPoset {
    pub names: Vec<String>,
    pub edges: Vec<(usize, usize)>,
}

impl RandomPoset {
    pub fn generate(rng: &mut impl Rng, max_n: usize) -> Self {
        let n = rng.random_range(1..=max_n);
        let density: f64 = rng.random_range(0.1..0.7);
        let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(density) {
                    edges.push((i, j));
                }
            }
        }
        RandomPoset { names, edges }
    }

    pub fn from_parts(n: usize, edges: Vec<(usize, usize)>) -> Self {
        RandomPoset {
            names: (0..n).map(|i| format!("e{i}")).collect(),
            edges,
        }
    }

    pub fn poset(&self) -> Poset {
        Poset::from_covers(
            self.names.iter().cloned(),
            self.edges
                .iter()
                .map(|&(a, b)| (self.names[a].as_str(), self.names[b].as_str())),
        )
        .unwrap()
    }

    /// Reflexive-transitive closure by Floyd–Warshall over the raw edges.
    pub fn closure(&self) -> Vec<Vec<bool>> {
        let n = self.names.len();
        let mut r = vec![vec![false; n]; n];
        for i in 0..n {
            r[i][i] = true;
        }
        for &(a, b) in &self.edges {
            r[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if r[i][k] && r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
        r
    }
}

/// Brute-force join and meet tables over node indices; `None` when some pair
/// lacks a unique least upper or greatest lower bound.
pub fn brute_force_bounds(leq: &[Vec<bool>]) -> Option<(Vec<Vec<usize>>, Vec<Vec<usize>>)> {
    let n = leq.len();
    let mut join = vec![vec![0; n]; n];
    let mut meet = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            let upper: Vec<usize> = (0..n).filter(|&z| leq[x][z] && leq[y][z]).collect();
            let least: Vec<usize> = upper
                .iter()
                .copied()
                .filter(|&u| upper.iter().all(|&w| leq[u][w]))
                .collect();
            let lower: Vec<usize> = (0..n).filter(|&z| leq[z][x] && leq[z][y]).collect();
            let greatest: Vec<usize> = lower
                .iter()
                .copied()
                .filter(|&u| lower.iter().all(|&w| leq[w][u]))
                .collect();
            match (least.as_slice(), greatest.as_slice()) {
                ([j], [m]) => {
                    join[x][y] = *j;
                    meet[x][y] = *m;
                }
                _ => return None,
            }
        }
    }
    Some((join, meet))
}

/// Number of antichains (including the empty one) by subset enumeration.
pub fn count_antichains(leq: &[Vec<bool>]) -> usize {
    let n = leq.len();
    (0u32..1 << n)
        .filter(|&mask| {
            (0..n).all(|i| {
                (0..n).all(|j| i == j || mask & (1 << i) == 0 || mask & (1 << j) == 0 || !leq[i][j])
            })
        })
        .count()
}

/// Join and meet tables of a family of sets computed from member union and
/// intersection, independent of the order-theoretic tables.
pub fn set_tables(family: &SetFamily) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let sets: Vec<BTreeSet<&str>> = family
        .members
        .iter()
        .map(|m| m.iter().map(String::as_str).collect())
        .collect();
    let find = |s: &BTreeSet<&str>| sets.iter().position(|t| t == s).expect("family closed");
    let n = sets.len();
    let mut join = vec![vec![0; n]; n];
    let mut meet = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            join[x][y] = find(&sets[x].union(&sets[y]).copied().collect());
            meet[x][y] = find(&sets[x].intersection(&sets[y]).copied().collect());
        }
    }
    (join, meet)
}

/// Solves the sum-rule system `v(⊥) = 0`, `v(j) = seed(j)`,
/// `v(x∨y) + v(x∧y) − v(x) − v(y) = 0` by SVD least squares. Returns the
/// solution and whether the system has full column rank.
pub fn solve_sum_rule_system(
    bottom: usize,
    seed: &[(usize, f64)],
    join: &[Vec<usize>],
    meet: &[Vec<usize>],
) -> (Vec<f64>, bool) {
    let n = join.len();
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    let unit = |k: usize, value: f64| {
        let mut r = vec![0.0; n];
        r[k] = 1.0;
        (r, value)
    };
    rows.push(unit(bottom, 0.0));
    for &(k, value) in seed {
        rows.push(unit(k, value));
    }
    for x in 0..n {
        for y in x + 1..n {
            let mut r = vec![0.0; n];
            r[join[x][y]] += 1.0;
            r[meet[x][y]] += 1.0;
            r[x] -= 1.0;
            r[y] -= 1.0;
            rows.push((r, 0.0));
        }
    }
    let a = DMatrix::from_fn(rows.len(), n, |i, j| rows[i].0[j]);
    let b = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.1));
    let svd = a.svd(true, true);
    let rank = svd.rank(1e-9);
    let x = svd.solve(&b, 1e-12).unwrap();
    (x.iter().copied().collect(), rank == n)
}

/// Random nonnegative seed on the join-irreducibles.
pub fn random_seed(rng: &mut impl Rng, lattice: &Lattice) -> BTreeMap<String, f64> {
    lattice
        .join_irreducibles()
        .into_iter()
        .map(|j| (lattice.id(j).to_string(), rng.random_range(0.0..1.0)))
        .collect()
}

pub fn extend(lattice: &Arc<Lattice>, seed: &BTreeMap<String, f64>) -> Valuation {
    Valuation::extend_from_irreducibles(
        Arc::clone(lattice),
        seed.iter().map(|(k, &v)| (k.as_str(), v)),
    )
    .unwrap()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
