//! Constructions of derived lattices: downsets (state spaces), powersets
//! (hypothesis spaces), downsets of statements (question lattices), set
//! partitions and lattice products.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ident::{set_label, tuple_label};
use crate::lattice::{Lattice, LatticeDiagnostic};
use crate::poset::{Elem, Poset};
use crate::DEFAULT_MAX_ELEMENTS;

pub const MAX_DOWNSET_BASE: usize = 20;
pub const MAX_POWERSET_STATES: usize = 20;
pub const MAX_QUESTION_STATEMENTS: usize = 16;
pub const MAX_PARTITION_SIZE: usize = 8;

/// A family of sets ordered by inclusion, with its lattice when the family
/// is closed under pairwise joins and meets.
///
/// Downsets without the empty set need not form a lattice: two minimal
/// elements of the base have no common lower bound left.
#[derive(Debug, Clone)]
pub struct SetFamily {
    pub poset: Poset,
    /// Members of each element, indexed by [`Elem::index`].
    pub members: Vec<Vec<String>>,
    pub lattice: Option<Lattice>,
    pub diagnostic: Option<LatticeDiagnostic>,
}

impl SetFamily {
    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn members_of(&self, e: Elem) -> &[String] {
        &self.members[e.index()]
    }

    /// The certified lattice, or an error describing the missing bound.
    pub fn into_lattice(self) -> Result<Lattice> {
        match (self.lattice, self.diagnostic) {
            (Some(l), _) => Ok(l),
            (None, Some(d)) => Err(Error::NotALattice(
                d.failure.map(|f| f.describe()).unwrap_or_default(),
            )),
            (None, None) => unreachable!("set family without lattice or diagnostic"),
        }
    }

    pub fn lattice(&self) -> Result<&Lattice> {
        self.lattice.as_ref().ok_or_else(|| {
            Error::NotALattice(
                self.diagnostic
                    .as_ref()
                    .and_then(|d| d.failure.as_ref())
                    .map(|f| f.describe())
                    .unwrap_or_default(),
            )
        })
    }
}

/// A lattice product together with the factor pair behind every element.
#[derive(Debug, Clone)]
pub struct ProductLattice {
    pub lattice: Arc<Lattice>,
    pub left: Arc<Lattice>,
    pub right: Arc<Lattice>,
    pairs: Vec<(Elem, Elem)>,
    index: Vec<Elem>,
}

impl ProductLattice {
    pub fn pair(&self, e: Elem) -> (Elem, Elem) {
        self.pairs[e.index()]
    }

    pub fn elem_of(&self, left: Elem, right: Elem) -> Elem {
        self.index[left.index() * self.right.len() + right.index()]
    }
}

/// Builders with a shared cap on the number of produced elements.
#[derive(Debug, Clone, Copy)]
pub struct Builder {
    pub max_elements: usize,
}

impl Default for Builder {
    fn default() -> Self {
        Builder {
            max_elements: DEFAULT_MAX_ELEMENTS,
        }
    }
}

impl Builder {
    pub fn with_max_elements(max_elements: usize) -> Self {
        Builder { max_elements }
    }

    fn check(&self, what: &'static str, requested: usize, limit: usize) -> Result<()> {
        if requested > limit {
            Err(Error::SizeLimit {
                what,
                requested,
                limit,
            })
        } else {
            Ok(())
        }
    }

    /// All downsets of `base` ordered by inclusion.
    pub fn downsets(&self, base: &Poset, include_empty: bool) -> Result<SetFamily> {
        self.check("downset base elements", base.len(), MAX_DOWNSET_BASE)?;
        let masks = enumerate_downsets(base, include_empty, self.max_elements)?;
        let order = base.linear_extension();
        let labels: Vec<&str> = order.iter().map(|&e| base.id(e)).collect();

        let mut bit_of = vec![0u32; base.len()];
        for (k, &e) in order.iter().enumerate() {
            bit_of[e.index()] = 1 << k;
        }
        let lower_masks: Vec<u32> = order
            .iter()
            .map(|&e| {
                base.lower_covers(e)
                    .iter()
                    .fold(0, |acc, l| acc | bit_of[l.index()])
            })
            .collect();

        let present: HashSet<u32> = masks.iter().copied().collect();
        let mut covers = Vec::new();
        for &m in &masks {
            for (k, &needs) in lower_masks.iter().enumerate() {
                let bit = 1u32 << k;
                if m & bit == 0 && m & needs == needs && present.contains(&(m | bit)) {
                    covers.push((m, m | bit));
                }
            }
        }
        Ok(set_lattice_from_masks(&labels, &masks, &covers))
    }

    /// The Boolean lattice of all subsets of `states`. Members of each subset
    /// are listed in the order `states` is given.
    pub fn powerset<S: AsRef<str>>(&self, states: &[S]) -> Result<SetFamily> {
        self.check("powerset states", states.len(), MAX_POWERSET_STATES)?;
        let count = 1usize << states.len();
        self.check("lattice elements", count, self.max_elements)?;
        let labels: Vec<&str> = states.iter().map(AsRef::as_ref).collect();
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement(w[0].to_string()));
        }
        let masks: Vec<u32> = (0..count as u32).collect();
        let mut covers = Vec::new();
        for &m in &masks {
            for k in 0..states.len() {
                if m & (1 << k) == 0 {
                    covers.push((m, m | (1 << k)));
                }
            }
        }
        Ok(set_lattice_from_masks(&labels, &masks, &covers))
    }

    /// Nonempty downsets of a statement lattice, ordered by inclusion.
    pub fn questions(&self, statements: &Lattice) -> Result<SetFamily> {
        self.check(
            "question lattice statements",
            statements.len(),
            MAX_QUESTION_STATEMENTS,
        )?;
        self.downsets(statements.poset(), false)
    }

    /// Set partitions of an `n`-element set `{a, b, ...}`; coarser partitions
    /// sit higher, so the single block is the top.
    pub fn partitions(&self, n: usize) -> Result<Poset> {
        partition_poset(n)
    }

    pub fn partition_lattice(&self, n: usize) -> Result<Lattice> {
        let poset = partition_poset(n)?;
        self.check("lattice elements", poset.len(), self.max_elements)?;
        Ok(Lattice::certify(poset).expect("set partitions form a lattice"))
    }

    /// Componentwise-ordered product `x × y`. Element labels flatten nested
    /// products, so `(X × Y) × Z` and `X × (Y × Z)` print identically.
    pub fn product(&self, x: &Arc<Lattice>, y: &Arc<Lattice>) -> Result<ProductLattice> {
        let count = x.len().saturating_mul(y.len());
        self.check("lattice elements", count, self.max_elements)?;
        let mut parts = Vec::with_capacity(count);
        let mut pair_ids = Vec::with_capacity(count);
        for a in x.elements() {
            for b in y.elements() {
                let mut p = x.components(a);
                p.extend(y.components(b));
                pair_ids.push(tuple_label(&p));
                parts.push(p);
            }
        }
        let at = |a: Elem, b: Elem| pair_ids[a.index() * y.len() + b.index()].as_str();
        let mut covers = Vec::new();
        for a in x.elements() {
            for b in y.elements() {
                for &a2 in x.poset().upper_covers(a) {
                    covers.push((at(a, b), at(a2, b)));
                }
                for &b2 in y.poset().upper_covers(b) {
                    covers.push((at(a, b), at(a, b2)));
                }
            }
        }
        let poset = Poset::from_covers(pair_ids.iter().cloned(), covers)?;
        let lattice = Lattice::certify(poset).expect("products of lattices are lattices");

        let mut index = vec![Elem::new(0); count];
        let mut pairs = vec![(Elem::new(0), Elem::new(0)); count];
        let mut ordered_parts = vec![Vec::new(); count];
        for a in x.elements() {
            for b in y.elements() {
                let k = a.index() * y.len() + b.index();
                let e = lattice.elem(&pair_ids[k])?;
                index[k] = e;
                pairs[e.index()] = (a, b);
                ordered_parts[e.index()] = std::mem::take(&mut parts[k]);
            }
        }
        Ok(ProductLattice {
            lattice: Arc::new(lattice.with_parts(ordered_parts)),
            left: Arc::clone(x),
            right: Arc::clone(y),
            pairs,
            index,
        })
    }
}

pub fn downset_lattice(base: &Poset, include_empty: bool) -> Result<SetFamily> {
    Builder::default().downsets(base, include_empty)
}

pub fn powerset_lattice<S: AsRef<str>>(states: &[S]) -> Result<SetFamily> {
    Builder::default().powerset(states)
}

pub fn question_lattice(statements: &Lattice) -> Result<SetFamily> {
    Builder::default().questions(statements)
}

pub fn lattice_product(x: &Arc<Lattice>, y: &Arc<Lattice>) -> Result<ProductLattice> {
    Builder::default().product(x, y)
}

/// Downsets as bitmasks over `base.linear_extension()` positions.
fn enumerate_downsets(base: &Poset, include_empty: bool, limit: usize) -> Result<Vec<u32>> {
    let order = base.linear_extension();
    let mut position = vec![0; base.len()];
    for (k, &e) in order.iter().enumerate() {
        position[e.index()] = k;
    }
    let needs: Vec<u32> = order
        .iter()
        .map(|&e| {
            base.lower_covers(e)
                .iter()
                .fold(0u32, |acc, l| acc | (1 << position[l.index()]))
        })
        .collect();

    let mut out = Vec::new();
    // Depth-first over the linear extension: an element may join once all of
    // its lower covers have.
    let mut stack = vec![(0usize, 0u32)];
    while let Some((k, mask)) = stack.pop() {
        if k == order.len() {
            if mask != 0 || include_empty {
                out.push(mask);
                if out.len() > limit {
                    return Err(Error::SizeLimit {
                        what: "lattice elements",
                        requested: out.len(),
                        limit,
                    });
                }
            }
            continue;
        }
        if mask & needs[k] == needs[k] {
            stack.push((k + 1, mask | (1 << k)));
        }
        stack.push((k + 1, mask));
    }
    out.sort_unstable();
    Ok(out)
}

fn set_lattice_from_masks(labels: &[&str], masks: &[u32], covers: &[(u32, u32)]) -> SetFamily {
    let members_of = |m: u32| -> Vec<String> {
        (0..labels.len())
            .filter(|k| m & (1 << k) != 0)
            .map(|k| labels[k].to_string())
            .collect()
    };
    let label_of: HashMap<u32, String> = masks
        .iter()
        .map(|&m| (m, set_label(members_of(m).iter().map(String::as_str))))
        .collect();
    let poset = Poset::from_covers(
        masks.iter().map(|m| label_of[m].clone()),
        covers
            .iter()
            .map(|(a, b)| (label_of[a].as_str(), label_of[b].as_str())),
    )
    .expect("set labels are distinct and inclusion is acyclic");
    let mask_of: HashMap<&str, u32> = label_of.iter().map(|(&m, l)| (l.as_str(), m)).collect();
    let members = poset
        .elements()
        .map(|e| members_of(mask_of[poset.id(e)]))
        .collect();
    let (lattice, diagnostic) = match Lattice::certify(poset.clone()) {
        Ok(l) => (Some(l), None),
        Err(d) => (None, Some(d)),
    };
    SetFamily {
        poset,
        members,
        lattice,
        diagnostic,
    }
}

/// Set partitions of `{a, b, ...}` ordered by refinement.
pub fn partition_poset(n: usize) -> Result<Poset> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "partitions need at least one element".into(),
        ));
    }
    if n > MAX_PARTITION_SIZE {
        return Err(Error::SizeLimit {
            what: "partition ground set",
            requested: n,
            limit: MAX_PARTITION_SIZE,
        });
    }
    let letters: Vec<char> = ('a'..).take(n).collect();
    let partitions = restricted_growth_strings(n);
    let label = |blocks: &[Vec<usize>]| -> String {
        let mut parts: Vec<String> = blocks
            .iter()
            .map(|b| b.iter().map(|&i| letters[i]).collect())
            .collect();
        parts.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        parts.join("|")
    };
    let to_blocks = |rgs: &[usize]| -> Vec<Vec<usize>> {
        let count = rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); count];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        blocks
    };

    let mut ids = Vec::with_capacity(partitions.len());
    let mut covers = Vec::new();
    for rgs in &partitions {
        let blocks = to_blocks(rgs);
        let here = label(&blocks);
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                let mut merged: Vec<Vec<usize>> = blocks
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i && k != j)
                    .map(|(_, b)| b.clone())
                    .collect();
                let mut union = blocks[i].clone();
                union.extend(&blocks[j]);
                union.sort_unstable();
                merged.push(union);
                covers.push((here.clone(), label(&merged)));
            }
        }
        ids.push(here);
    }
    Poset::from_covers(ids, covers)
}

fn restricted_growth_strings(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    fn go(k: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == current.len() {
            out.push(current.clone());
            return;
        }
        for b in 0..=max + 1 {
            current[k] = b;
            go(k + 1, max.max(b), current, out);
        }
    }
    // The first element always opens block 0.
    go(1, 0, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Shape;

    fn bridge() -> Poset {
        Poset::from_covers(["L", "R", "S"], [("L", "S"), ("R", "S")]).unwrap()
    }

    fn ids(l: &Lattice) -> Vec<&str> {
        l.elements().map(|e| l.id(e)).collect()
    }

    #[test]
    fn bridge_states() {
        let states = downset_lattice(&bridge(), false).unwrap();
        let mut got: Vec<&str> = states.poset.ids().iter().map(String::as_str).collect();
        got.sort_unstable();
        assert_eq!(got, ["{L,R,S}", "{L,R}", "{L}", "{R}"]);
        assert!(states.poset.elem("{L,S}").is_err());
        // {L} and {R} lose their only common lower bound.
        let diag = states.diagnostic.clone().unwrap();
        assert_eq!(diag.failure.unwrap().pair, ("{L}".into(), "{R}".into()));
        assert!(matches!(states.into_lattice(), Err(Error::NotALattice(_))));
        let with_empty = downset_lattice(&bridge(), true)
            .unwrap()
            .into_lattice()
            .unwrap();
        assert_eq!(with_empty.len(), 5);
        assert_eq!(with_empty.id(with_empty.bottom()), "{}");
        assert!(with_empty.elem("{L,S}").is_err());
    }

    #[test]
    fn antichain_and_chain_downsets() {
        let anti = Poset::from_covers(["a", "b", "c"], Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!(downset_lattice(&anti, true).unwrap().len(), 8);
        let chain =
            Poset::from_covers(["1", "2", "3", "4"], [("1", "2"), ("2", "3"), ("3", "4")]).unwrap();
        let d = downset_lattice(&chain, true).unwrap();
        assert_eq!(d.len(), 5);
        assert_eq!(d.poset.classify(), Shape::Chain);
        assert!(d.lattice.is_some());
    }

    #[test]
    fn powerset_counts() {
        let p = powerset_lattice(&["s"]).unwrap().into_lattice().unwrap();
        assert_eq!(ids(&p), ["{s}", "{}"]);
        let states = ["{L}", "{R}", "{L,R}", "{L,R,S}"];
        let p = powerset_lattice(&states).unwrap();
        assert_eq!(p.len(), 16);
        let e = p.poset.elem("{{L},{L,R,S}}").unwrap();
        assert_eq!(p.members_of(e), ["{L}", "{L,R,S}"]);
        let l = p.lattice().unwrap();
        assert_eq!(l.id(l.bottom()), "{}");
        assert_eq!(l.join_by_id("{{L}}", "{{R}}").unwrap(), "{{L},{R}}");
    }

    #[test]
    fn powerset_rejects_duplicates_and_size() {
        assert!(matches!(
            powerset_lattice(&["a", "a"]),
            Err(Error::DuplicateElement(_))
        ));
        let many: Vec<String> = (0..21).map(|i| format!("s{i}")).collect();
        assert!(matches!(
            powerset_lattice(&many),
            Err(Error::SizeLimit { .. })
        ));
        let thirteen: Vec<String> = (0..13).map(|i| format!("s{i}")).collect();
        assert!(matches!(
            powerset_lattice(&thirteen),
            Err(Error::SizeLimit { limit: 4096, .. })
        ));
    }

    #[test]
    fn small_question_lattices() {
        let b1 = powerset_lattice(&["s"]).unwrap();
        let q1 = question_lattice(b1.lattice().unwrap()).unwrap();
        assert_eq!(q1.len(), 2);
        assert!(q1.lattice.is_some());
        let b2 = powerset_lattice(&["s", "t"]).unwrap();
        let q2 = question_lattice(b2.lattice().unwrap()).unwrap();
        assert_eq!(q2.len(), 5);
        assert!(q2.lattice.is_some());
    }

    #[test]
    fn downset_size_cap() {
        let anti = Poset::from_covers((0..13).map(|i| format!("e{i}")), Vec::<(&str, &str)>::new())
            .unwrap();
        assert!(matches!(
            downset_lattice(&anti, true),
            Err(Error::SizeLimit { .. })
        ));
        let too_big =
            Poset::from_covers((0..21).map(|i| format!("e{i}")), Vec::<(&str, &str)>::new())
                .unwrap();
        assert!(matches!(
            Builder::with_max_elements(usize::MAX).downsets(&too_big, true),
            Err(Error::SizeLimit { limit: 20, .. })
        ));
    }

    #[test]
    fn partitions_of_three() {
        let p = partition_poset(3).unwrap();
        let mut got: Vec<&str> = p.ids().iter().map(String::as_str).collect();
        got.sort_unstable();
        assert_eq!(got, ["abc", "a|bc", "a|b|c", "b|ac", "c|ab"]);
        assert!(p.leq("a|b|c", "a|bc").unwrap());
        assert!(p.leq("a|bc", "abc").unwrap());
        for (x, y) in [("a|bc", "b|ac"), ("a|bc", "c|ab"), ("b|ac", "c|ab")] {
            assert!(!p.leq(x, y).unwrap() && !p.leq(y, x).unwrap());
        }
        assert_eq!(p.classify(), Shape::Mixed);
        assert_eq!(partition_poset(1).unwrap().len(), 1);
        assert!(partition_poset(0).is_err());
        assert!(matches!(partition_poset(9), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn bell_numbers() {
        for (n, bell) in [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)] {
            assert_eq!(partition_poset(n).unwrap().len(), bell);
        }
    }

    #[test]
    fn partition_lattice_is_m3_for_three() {
        let l = Builder::default().partition_lattice(3).unwrap();
        let w = l.distributivity_witness().unwrap().map(|e| l.id(e));
        assert_eq!(w, ["a|bc", "b|ac", "c|ab"]);
    }

    #[test]
    fn product_of_chains() {
        let b1 = Arc::new(powerset_lattice(&["a"]).unwrap().into_lattice().unwrap());
        let prod = lattice_product(&b1, &b1).unwrap();
        assert_eq!(prod.lattice.len(), 4);
        let mut got = ids(&prod.lattice);
        got.sort_unstable();
        assert_eq!(got, ["({a},{a})", "({a},{})", "({},{a})", "({},{})"]);
        let l = &prod.lattice;
        assert_eq!(l.id(l.bottom()), "({},{})");
        let e = l.elem("({a},{})").unwrap();
        let (a, b) = prod.pair(e);
        assert_eq!((b1.id(a), b1.id(b)), ("{a}", "{}"));
        assert_eq!(prod.elem_of(a, b), e);
    }

    #[test]
    fn nested_products_flatten() {
        let b1 = Arc::new(powerset_lattice(&["a"]).unwrap().into_lattice().unwrap());
        let xy = lattice_product(&b1, &b1).unwrap();
        let left = lattice_product(&xy.lattice, &b1).unwrap();
        let yz = lattice_product(&b1, &b1).unwrap();
        let right = lattice_product(&b1, &yz.lattice).unwrap();
        assert_eq!(ids(&left.lattice), ids(&right.lattice));
        assert!(left.lattice.elem("({a},{},{a})").is_ok());
    }
}
