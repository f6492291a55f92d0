//! Finite groups given by Cayley tables.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Multiplication table of a finite group; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    order: usize,
    product: Vec<u32>,
    inverse: Vec<u32>,
}

/// Associativity is only checked up to this order when a table is loaded.
pub const ASSOCIATIVITY_CHECK_LIMIT: usize = 128;

impl CayleyTable {
    /// Validate and build a table from rows of 0-based indices.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        let mut product = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::InvalidTable(format!("entry {x} out of range in row {i}")));
                }
                product.push(x as u32);
            }
        }
        for i in 0..n {
            if product[i] as usize != i || product[i * n] as usize != i {
                return Err(Error::InvalidTable(
                    "row and column 0 must be the identity".into(),
                ));
            }
        }
        let mut inverse = vec![u32::MAX; n];
        for i in 0..n {
            let mut seen = vec![false; n];
            for j in 0..n {
                let x = product[i * n + j] as usize;
                if seen[x] {
                    return Err(Error::InvalidTable(format!("row {i} repeats element {x}")));
                }
                seen[x] = true;
                if x == 0 {
                    inverse[i] = j as u32;
                }
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for i in 0..n {
                let x = product[i * n + j] as usize;
                if seen[x] {
                    return Err(Error::InvalidTable(format!("column {j} repeats element {x}")));
                }
                seen[x] = true;
            }
        }
        let table = CayleyTable {
            order: n,
            product,
            inverse,
        };
        for i in 0..n {
            if table.mul(table.inv(i), i) != 0 {
                return Err(Error::InvalidTable(format!("left and right inverse of {i} differ")));
            }
        }
        if n <= ASSOCIATIVITY_CHECK_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = table.mul(a, b);
                    for c in 0..n {
                        if table.mul(ab, c) != table.mul(a, table.mul(b, c)) {
                            return Err(Error::InvalidTable(format!(
                                "not associative at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(table)
    }

    /// Parse the text format: first line the order `n`, then `n` rows.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::InvalidTable("missing order line".into()))?
            .parse()
            .map_err(|_| Error::InvalidTable("order line is not an integer".into()))?;
        let mut rows = Vec::with_capacity(n);
        for line in lines {
            let row: std::result::Result<Vec<usize>, _> =
                line.split_whitespace().map(str::parse).collect();
            rows.push(row.map_err(|_| Error::InvalidTable(format!("bad row `{line}`")))?);
        }
        if rows.len() != n {
            return Err(Error::InvalidTable(format!(
                "declared order {n} but found {} rows",
                rows.len()
            )));
        }
        CayleyTable::from_rows(rows)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        CayleyTable::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let n = self.order;
        let mut s = format!("{n}\n");
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| self.mul(i, j).to_string()).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn pow(&self, a: usize, exp: i64) -> usize {
        let base = if exp < 0 { self.inv(a) } else { a };
        let mut acc = 0;
        for _ in 0..exp.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn full_set(&self) -> ElementSet {
        let mut s = ElementSet::new(self.order);
        for i in 0..self.order {
            s.insert(i);
        }
        s
    }

    /// Subgroup generated by `gens`.
    pub fn closure<I: IntoIterator<Item = usize>>(&self, gens: I) -> ElementSet {
        let gens: Vec<usize> = gens.into_iter().collect();
        let mut set = ElementSet::new(self.order);
        set.insert(0);
        let mut queue = vec![0usize];
        while let Some(x) = queue.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push(y);
                }
            }
        }
        set
    }

    pub fn generates<I: IntoIterator<Item = usize>>(&self, gens: I) -> bool {
        self.closure(gens).len() == self.order
    }

    pub fn is_normal(&self, h: &ElementSet) -> bool {
        (0..self.order).all(|g| {
            h.iter()
                .all(|x| h.contains(self.mul(self.mul(g, x), self.inv(g))))
        })
    }

    /// All subgroups, ordered by size and then by member list.
    pub fn subgroups(&self) -> Vec<ElementSet> {
        let cyclic: Vec<ElementSet> = {
            let mut v: Vec<ElementSet> = (0..self.order).map(|x| self.closure([x])).collect();
            v.sort();
            v.dedup();
            v
        };
        let mut all = cyclic.clone();
        let mut seen: std::collections::HashSet<ElementSet> = all.iter().cloned().collect();
        let mut frontier = all.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for c in &cyclic {
                    if c.is_subset(h) {
                        continue;
                    }
                    let joined = self.closure(h.iter().chain(c.iter()));
                    if seen.insert(joined.clone()) {
                        next.push(joined);
                    }
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all
    }

    /// Greedy generating set: elements in `candidates` order, each kept only
    /// when it enlarges the generated subgroup.
    pub fn greedy_generators(&self, candidates: &[usize], target: &ElementSet) -> Vec<usize> {
        let mut chosen = Vec::new();
        let mut current = self.closure([]);
        for &c in candidates {
            if current.len() == target.len() {
                break;
            }
            if !current.contains(c) {
                chosen.push(c);
                current = self.closure(chosen.iter().copied());
            }
        }
        chosen
    }

    /// Order of the largest elementary abelian 2-quotient, `|G / ⟨g², [g,h]⟩|`.
    pub fn elementary_two_quotient_order(&self) -> usize {
        let mut gens = Vec::new();
        for a in 0..self.order {
            gens.push(self.mul(a, a));
            for b in 0..self.order {
                gens.push(self.commutator(a, b));
            }
        }
        gens.sort_unstable();
        gens.dedup();
        let n = self.closure(gens);
        self.order / n.len()
    }

    /// Table of `self × other` with pair `(i, j)` stored at `i * |other| + j`.
    pub fn direct_product(&self, other: &CayleyTable) -> CayleyTable {
        let m = other.order;
        let n = self.order * m;
        let mut product = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let (a, b) = (x / m, x % m);
                let (c, d) = (y / m, y % m);
                product.push((self.mul(a, c) * m + other.mul(b, d)) as u32);
            }
        }
        let inverse = (0..n)
            .map(|x| (self.inv(x / m) * m + other.inv(x % m)) as u32)
            .collect();
        CayleyTable {
            order: n,
            product,
            inverse,
        }
    }

    /// Build a table by closing `gens` under `mul`; elements are numbered in
    /// breadth-first order from `identity`. Returns the table and the indices
    /// of the generators.
    pub fn from_generators<T, F>(identity: T, gens: &[T], mul: F) -> (CayleyTable, Vec<usize>)
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::new();
        index.insert(identity, 0);
        let mut head = 0;
        while head < elems.len() {
            let x = elems[head].clone();
            head += 1;
            for g in gens {
                let y = mul(&x, g);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
        }
        let n = elems.len();
        let mut product = Vec::with_capacity(n * n);
        for x in &elems {
            for y in &elems {
                product.push(index[&mul(x, y)] as u32);
            }
        }
        let mut inverse = vec![0u32; n];
        for i in 0..n {
            for j in 0..n {
                if product[i * n + j] == 0 {
                    inverse[i] = j as u32;
                    break;
                }
            }
        }
        let gen_idx = gens.iter().map(|g| index[g]).collect();
        (
            CayleyTable {
                order: n,
                product,
                inverse,
            },
            gen_idx,
        )
    }
}

/// A set of element indices of a finite group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    bits: Vec<u64>,
    universe: usize,
}

impl ElementSet {
    pub fn new(universe: usize) -> Self {
        ElementSet {
            bits: vec![0; universe.div_ceil(64)],
            universe,
        }
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(universe: usize, it: I) -> Self {
        let mut s = ElementSet::new(universe);
        for x in it {
            s.insert(x);
        }
        s
    }

    /// Returns `true` if `x` was not already present.
    pub fn insert(&mut self, x: usize) -> bool {
        let (w, b) = (x / 64, x % 64);
        let was = self.bits[w] >> b & 1 == 1;
        self.bits[w] |= 1 << b;
        !was
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x < self.universe && self.bits[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&x| self.contains(x))
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect(),
            universe: self.universe,
        }
    }
}

/// Tables for the standard families used by the bundled corpus.
pub mod builders {
    use super::CayleyTable;

    pub fn cyclic(n: usize) -> (CayleyTable, Vec<usize>) {
        let gens = if n == 1 { vec![] } else { vec![1usize] };
        CayleyTable::from_generators(0usize, &gens, |a, b| (a + b) % n)
    }

    /// `D_q` of order `2q` on elements `(k, f) = (ab)^k a^f`.
    pub fn dihedral(q: usize) -> (CayleyTable, Vec<usize>) {
        let q = q as i64;
        let mul = move |x: &(i64, u8), y: &(i64, u8)| {
            let k = if x.1 == 0 { x.0 + y.0 } else { x.0 - y.0 };
            (k.rem_euclid(q), x.1 ^ y.1)
        };
        // a = (0, 1), b = (-1, 1)
        CayleyTable::from_generators((0i64, 0u8), &[(0, 1), ((-1i64).rem_euclid(q), 1)], mul)
    }

    /// Dicyclic group of order `4n`: `x^{2n} = 1`, `y² = xⁿ`, `y x y⁻¹ = x⁻¹`.
    pub fn dicyclic(n: usize) -> (CayleyTable, Vec<usize>) {
        let m = 2 * n as i64;
        let half = n as i64;
        let mul = move |p: &(i64, u8), q: &(i64, u8)| {
            let mut k = if p.1 == 0 { p.0 + q.0 } else { p.0 - q.0 };
            let j = p.1 + q.1;
            if j == 2 {
                k += half;
            }
            (k.rem_euclid(m), j % 2)
        };
        CayleyTable::from_generators((0i64, 0u8), &[(1, 0), (0, 1)], mul)
    }

    fn compose(p: &[u8], q: &[u8]) -> Vec<u8> {
        // apply p, then q
        p.iter().map(|&i| q[i as usize]).collect()
    }

    pub fn permutation_group(degree: usize, gens: &[Vec<u8>]) -> (CayleyTable, Vec<usize>) {
        let id: Vec<u8> = (0..degree as u8).collect();
        CayleyTable::from_generators(id, gens, |p: &Vec<u8>, q: &Vec<u8>| compose(p, q))
    }

    pub fn symmetric(n: usize) -> (CayleyTable, Vec<usize>) {
        let mut cycle: Vec<u8> = (1..n as u8).collect();
        cycle.push(0);
        let mut swap: Vec<u8> = (0..n as u8).collect();
        swap.swap(0, 1);
        permutation_group(n, &[swap, cycle])
    }

    pub fn alternating4() -> (CayleyTable, Vec<usize>) {
        permutation_group(4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])
    }

    /// `SL(2, p)` generated by the two elementary matrices.
    pub fn special_linear2(p: i64) -> (CayleyTable, Vec<usize>) {
        let mul = move |x: &[i64; 4], y: &[i64; 4]| {
            [
                (x[0] * y[0] + x[1] * y[2]).rem_euclid(p),
                (x[0] * y[1] + x[1] * y[3]).rem_euclid(p),
                (x[2] * y[0] + x[3] * y[2]).rem_euclid(p),
                (x[2] * y[1] + x[3] * y[3]).rem_euclid(p),
            ]
        };
        CayleyTable::from_generators([1, 0, 0, 1], &[[1, 1, 0, 1], [1, 0, 1, 1]], mul)
    }

    pub fn product(
        (g, gg): (CayleyTable, Vec<usize>),
        (h, hg): (CayleyTable, Vec<usize>),
    ) -> (CayleyTable, Vec<usize>) {
        let m = h.order();
        let t = g.direct_product(&h);
        let mut gens: Vec<usize> = gg.iter().map(|&x| x * m).collect();
        gens.extend(hg.iter().copied());
        (t, gens)
    }
}

#[cfg(test)]
mod tests {
    use super::builders::*;
    use super::*;

    #[test]
    fn builder_orders() {
        assert_eq!(cyclic(7).0.order(), 7);
        assert_eq!(dihedral(5).0.order(), 10);
        assert_eq!(dicyclic(2).0.order(), 8);
        assert_eq!(symmetric(4).0.order(), 24);
        assert_eq!(alternating4().0.order(), 12);
        assert_eq!(special_linear2(3).0.order(), 24);
        assert_eq!(product(cyclic(2), cyclic(4)).0.order(), 8);
    }

    #[test]
    fn tables_roundtrip_through_text() {
        let (t, _) = symmetric(3);
        let back = CayleyTable::parse(&t.to_text()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn rejects_non_associative() {
        // a Latin square with identity row/column that is not a group
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(CayleyTable::from_rows(rows), Err(Error::InvalidTable(_))));
    }

    #[test]
    fn rejects_malformed_text() {
        assert!(CayleyTable::parse("2\n0 1\n").is_err());
        assert!(CayleyTable::parse("2\n0 1\n1 2\n").is_err());
        assert!(CayleyTable::parse("x\n").is_err());
        assert!(CayleyTable::parse("2\n1 0\n0 1\n").is_err());
    }

    #[test]
    fn subgroup_counts() {
        // known subgroup counts
        assert_eq!(symmetric(3).0.subgroups().len(), 6);
        assert_eq!(symmetric(4).0.subgroups().len(), 30);
        assert_eq!(alternating4().0.subgroups().len(), 10);
        assert_eq!(dicyclic(2).0.subgroups().len(), 6);
        assert_eq!(cyclic(12).0.subgroups().len(), 6);
        assert_eq!(dihedral(4).0.subgroups().len(), 10);
    }

    #[test]
    fn two_quotients() {
        assert_eq!(symmetric(3).0.elementary_two_quotient_order(), 2);
        assert_eq!(dihedral(4).0.elementary_two_quotient_order(), 4);
        assert_eq!(product(cyclic(2), cyclic(2)).0.elementary_two_quotient_order(), 4);
        assert_eq!(cyclic(7).0.elementary_two_quotient_order(), 1);
    }
}
