//! Constructive-membership handles for subgroups of every supported base group.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::ElementSet;
use crate::oracles::{DihedralNormal, Element, GroupKind, GroupOracle};
use crate::stallings::{MembershipWitness, StallingsAutomaton, WitnessBasis};
use crate::words::{Letter, Word};

/// Structural kind of a dihedral subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DihedralKind {
    /// Rotations by multiples of `step`; step 0 is the trivial group.
    CyclicRotation { step: i64 },
    /// `{1, (ab)^offset a}`.
    CyclicReflection { offset: i64 },
    /// `⟨a(ba)^m, b(ab)^n⟩`.
    Gmn { m: i64, n: i64 },
}

/// Subgroup of ℤⁿ in echelon form.
#[derive(Clone, Debug)]
pub struct Lattice {
    /// Echelon rows `H = U · M`, zero rows dropped.
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
    /// Unimodular transform restricted to the kept rows.
    transform: Vec<Vec<i64>>,
    dim: usize,
}

impl Lattice {
    pub fn new(gens: &[Vec<i64>], dim: usize) -> Self {
        let m = gens.len();
        let mut h: Vec<Vec<i64>> = gens.to_vec();
        let mut u: Vec<Vec<i64>> = (0..m)
            .map(|i| (0..m).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut cur = 0;
        for col in 0..dim {
            if cur == m {
                break;
            }
            loop {
                let best = (cur..m)
                    .filter(|&r| h[r][col] != 0)
                    .min_by_key(|&r| h[r][col].abs());
                let Some(p) = best else { break };
                h.swap(cur, p);
                u.swap(cur, p);
                let mut done = true;
                for r in cur + 1..m {
                    if h[r][col] != 0 {
                        let q = h[r][col].div_euclid(h[cur][col]);
                        for c in 0..dim {
                            h[r][c] -= q * h[cur][c];
                        }
                        for c in 0..m {
                            u[r][c] -= q * u[cur][c];
                        }
                        if h[r][col] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if cur < m && h[cur][col] != 0 {
                if h[cur][col] < 0 {
                    h[cur].iter_mut().for_each(|x| *x = -*x);
                    u[cur].iter_mut().for_each(|x| *x = -*x);
                }
                pivots.push(col);
                cur += 1;
            }
        }
        h.truncate(cur);
        u.truncate(cur);
        Lattice {
            rows: h,
            pivots,
            transform: u,
            dim,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Coefficients over the original generators, if `x` is in the lattice.
    pub fn solve(&self, x: &[i64]) -> Option<Vec<i64>> {
        let mut rem = x.to_vec();
        let mut y = vec![0i64; self.rows.len()];
        for (i, &c) in self.pivots.iter().enumerate() {
            let p = self.rows[i][c];
            if rem[c] % p != 0 {
                return None;
            }
            y[i] = rem[c] / p;
            for (r, h) in rem.iter_mut().zip(&self.rows[i]) {
                *r -= y[i] * h;
            }
        }
        if rem.iter().any(|&r| r != 0) {
            return None;
        }
        let m = self.transform.first().map_or(0, Vec::len);
        let mut coef = vec![0i64; m];
        for (yi, urow) in y.iter().zip(&self.transform) {
            for (c, u) in coef.iter_mut().zip(urow) {
                *c += yi * u;
            }
        }
        Some(coef)
    }

    /// Whether the lattice is all of ℤⁿ.
    pub fn is_full(&self) -> bool {
        self.rank() == self.dim && self.pivots.iter().enumerate().all(|(i, &c)| self.rows[i][c] == 1)
    }
}

/// Subgroup of a dihedral group reduced to a rotation step and a reflection offset.
#[derive(Clone, Debug)]
pub struct DihedralSub {
    q: Option<i64>,
    step: i64,
    /// Word over the user generators for the rotation `(step, 0)`.
    step_word: Word,
    /// First reflection generator: its offset and index.
    reflection: Option<(i64, u32)>,
}

impl DihedralSub {
    fn new(q: Option<u64>, gens: &[DihedralNormal]) -> Self {
        let q = q.map(|q| q as i64);
        let reflection = gens
            .iter()
            .position(|g| g.flip == 1)
            .map(|j| (gens[j].translation, j as u32));
        // rotation generators of the index-≤2 rotation part, with words
        let mut basics: Vec<(i64, Word)> = Vec::new();
        for (j, g) in gens.iter().enumerate() {
            let gw = Word::generator(j as u32);
            match (g.flip, reflection) {
                (0, _) => basics.push((g.translation, gw)),
                (_, Some((o, j0))) if j as u32 != j0 => {
                    // R0 · g_j = rotation by o - k_j
                    basics.push((o - g.translation, Word::generator(j0).mul(&gw)));
                }
                _ => {}
            }
        }
        if let Some(q) = q {
            basics.push((q, Word::empty()));
        }
        // extended gcd carrying words: step = Σ c_i k_i, step_word = Π w_i^{c_i}
        let mut step = 0i64;
        let mut step_word = Word::empty();
        for (k, w) in basics {
            let (g, x, y) = ext_gcd(step, k);
            if g == step {
                continue;
            }
            step_word = step_word.pow(x).mul(&w.pow(y));
            step = g;
        }
        if step < 0 {
            step = -step;
            step_word = step_word.inverse();
        }
        DihedralSub {
            q,
            step,
            step_word,
            reflection,
        }
    }

    pub fn step(&self) -> i64 {
        self.step
    }

    pub fn kind(&self) -> DihedralKind {
        match self.reflection {
            None => DihedralKind::CyclicRotation { step: self.step },
            Some((o, _)) if self.step == 0 || Some(self.step) == self.q => DihedralKind::CyclicReflection {
                offset: reduce_mod(o, self.step, self.q),
            },
            Some((o, _)) => {
                let m = o.rem_euclid(self.step);
                DihedralKind::Gmn {
                    m,
                    n: self.step - 1 - m,
                }
            }
        }
    }

    fn rotation_part(&self, k: i64) -> Option<i64> {
        if self.step == 0 {
            (k == 0).then_some(0)
        } else {
            (k % self.step == 0).then_some(k / self.step)
        }
    }

    pub fn contains(&self, x: &DihedralNormal) -> bool {
        if x.flip == 0 {
            self.rotation_part(x.translation).is_some()
        } else {
            self.reflection
                .is_some_and(|(o, _)| self.rotation_part(x.translation - o).is_some())
        }
    }

    fn witness(&self, x: &DihedralNormal) -> Option<Word> {
        if x.flip == 0 {
            let c = self.rotation_part(x.translation)?;
            Some(self.step_word.pow(c))
        } else {
            let (o, j0) = self.reflection?;
            let c = self.rotation_part(x.translation - o)?;
            Some(self.step_word.pow(c).mul(&Word::generator(j0)))
        }
    }

    pub fn is_whole(&self) -> bool {
        self.step == 1 && self.reflection.is_some()
    }

    pub fn order(&self) -> Option<i64> {
        let q = self.q?;
        let rot = if self.step == 0 { 1 } else { q / self.step };
        Some(if self.reflection.is_some() { 2 * rot } else { rot })
    }
}

fn reduce_mod(o: i64, step: i64, q: Option<i64>) -> i64 {
    if step > 0 && Some(step) != q {
        o.rem_euclid(step)
    } else if let Some(q) = q {
        o.rem_euclid(q)
    } else {
        o
    }
}

/// `(g, x, y)` with `g = gcd(a, b) ≥ 0` and `a x + b y = g`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Subgroup of a finite group: its element set and a shortest witness per member.
#[derive(Clone, Debug)]
pub struct FiniteSub {
    elements: ElementSet,
    witness: Vec<Option<Word>>,
}

impl FiniteSub {
    fn new(ambient: &GroupOracle, gens: &[usize]) -> Self {
        let f = ambient.finite_group().expect("finite ambient");
        let t = f.table();
        let n = t.order();
        let mut witness: Vec<Option<Word>> = vec![None; n];
        let mut elements = ElementSet::new(n);
        witness[0] = Some(Word::empty());
        elements.insert(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for key in 0..2 * gens.len() as u32 {
                let l = Letter::from_key(key);
                let g = gens[l.gen as usize];
                let y = t.mul(x, if l.inverse { t.inv(g) } else { g });
                if elements.insert(y) {
                    let mut w = witness[x].clone().unwrap();
                    w.push(l);
                    witness[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        FiniteSub { elements, witness }
    }

    pub fn elements(&self) -> &ElementSet {
        &self.elements
    }
}

#[derive(Clone, Debug)]
pub enum SubgroupRep {
    Stallings(StallingsAutomaton),
    Lattice(Lattice),
    Dihedral(DihedralSub),
    Finite(FiniteSub),
}

/// A finitely generated subgroup of a base group with constructive membership.
#[derive(Clone, Debug)]
pub struct SubgroupHandle {
    ambient: GroupOracle,
    gens: Vec<Word>,
    rep: SubgroupRep,
}

impl SubgroupHandle {
    /// Subgroup generated by `gens`, words over the ambient alphabet.
    pub fn new(ambient: &GroupOracle, gens: Vec<Word>) -> Result<Self> {
        for g in &gens {
            ambient.alphabet().check(g)?;
        }
        let elems: Vec<Element> = gens
            .iter()
            .map(|g| ambient.normal_form(g))
            .collect::<Result<_>>()?;
        let rep = match ambient.kind() {
            GroupKind::Free { rank } => SubgroupRep::Stallings(StallingsAutomaton::build(&gens, *rank)?),
            GroupKind::FreeAbelian { rank } => {
                let vs: Vec<Vec<i64>> = elems
                    .iter()
                    .map(|e| match e {
                        Element::Abelian(v) => v.clone(),
                        _ => unreachable!(),
                    })
                    .collect();
                SubgroupRep::Lattice(Lattice::new(&vs, *rank))
            }
            GroupKind::Dihedral { q } => {
                let ds: Vec<DihedralNormal> = elems.iter().map(|e| *e.dihedral().unwrap()).collect();
                SubgroupRep::Dihedral(DihedralSub::new(*q, &ds))
            }
            GroupKind::Finite(_) => {
                let idx: Vec<usize> = elems.iter().map(|e| e.finite_index().unwrap()).collect();
                SubgroupRep::Finite(FiniteSub::new(ambient, &idx))
            }
        };
        Ok(SubgroupHandle {
            ambient: ambient.clone(),
            gens,
            rep,
        })
    }

    pub fn parse(ambient: &GroupOracle, gens: &str) -> Result<Self> {
        let words = gens
            .split([',', ';'])
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| ambient.alphabet().parse_word(s))
            .collect::<Result<_>>()?;
        SubgroupHandle::new(ambient, words)
    }

    /// `⟨a(ba)^m, b(ab)^n⟩` in a dihedral group.
    pub fn gmn(ambient: &GroupOracle, m: u64, n: u64) -> Result<Self> {
        if !matches!(ambient.kind(), GroupKind::Dihedral { .. }) {
            return Err(Error::Validation("gmn subgroups need a dihedral ambient group".into()));
        }
        let (a, b) = (Word::generator(0), Word::generator(1));
        let first = a.mul(&b.mul(&a).pow(m as i64));
        let second = b.mul(&a.mul(&b).pow(n as i64));
        SubgroupHandle::new(ambient, vec![first, second])
    }

    /// Subgroup of a finite ambient group from element indices.
    pub fn from_elements(ambient: &GroupOracle, gens: &[usize]) -> Result<Self> {
        let f = ambient
            .finite_group()
            .ok_or_else(|| Error::Unsupported("element-index subgroups need a finite group".into()))?;
        let words = gens
            .iter()
            .map(|&g| {
                if g >= f.table().order() {
                    Err(Error::Validation(format!("element index {g} out of range")))
                } else {
                    Ok(f.word_of(g).clone())
                }
            })
            .collect::<Result<_>>()?;
        SubgroupHandle::new(ambient, words)
    }

    pub fn ambient(&self) -> &GroupOracle {
        &self.ambient
    }

    pub fn generators(&self) -> &[Word] {
        &self.gens
    }

    pub fn representation(&self) -> &SubgroupRep {
        &self.rep
    }

    pub fn generator_elements(&self) -> Vec<Element> {
        self.gens
            .iter()
            .map(|g| self.ambient.normal_form(g).expect("checked at construction"))
            .collect()
    }

    pub fn contains(&self, x: &Element) -> bool {
        match (&self.rep, x) {
            (SubgroupRep::Stallings(aut), Element::Free(w)) => aut.contains(w),
            (SubgroupRep::Lattice(l), Element::Abelian(v)) => l.solve(v).is_some(),
            (SubgroupRep::Dihedral(d), Element::Dihedral(e)) => d.contains(e),
            (SubgroupRep::Finite(f), Element::Finite(i)) => f.elements.contains(*i),
            _ => false,
        }
    }

    pub fn member(&self, w: &Word) -> Result<bool> {
        Ok(self.contains(&self.ambient.normal_form(w)?))
    }

    /// Word over the user generators evaluating to `x`.
    pub fn express(&self, x: &Element) -> Result<Word> {
        let not_member = || Error::NotMember(self.ambient.format_element(x));
        match (&self.rep, x) {
            (SubgroupRep::Stallings(aut), Element::Free(w)) => Ok(aut.express(w)?.expression),
            (SubgroupRep::Lattice(l), Element::Abelian(v)) => {
                let coef = l.solve(v).ok_or_else(not_member)?;
                let mut w = Word::empty();
                for (j, c) in coef.iter().enumerate() {
                    w = w.mul(&Word::power_of(j as u32, *c));
                }
                Ok(w)
            }
            (SubgroupRep::Dihedral(d), Element::Dihedral(e)) => d.witness(e).ok_or_else(not_member),
            (SubgroupRep::Finite(f), Element::Finite(i)) => {
                f.witness.get(*i).cloned().flatten().ok_or_else(not_member)
            }
            _ => Err(not_member()),
        }
    }

    pub fn express_member(&self, w: &Word) -> Result<MembershipWitness> {
        let x = self.ambient.normal_form(w)?;
        Ok(MembershipWitness {
            expression: self.express(&x)?,
            basis: WitnessBasis::UserGenerators,
        })
    }

    /// Evaluate a word over the user generators in the ambient group.
    pub fn evaluate(&self, expr: &Word) -> Result<Element> {
        if let Some(m) = expr.max_gen() {
            if m as usize >= self.gens.len() {
                return Err(Error::UnknownSymbol(format!("generator{}", m + 1)));
            }
        }
        self.ambient.normal_form(&expr.substitute(&self.gens))
    }

    pub fn is_proper(&self) -> bool {
        match &self.rep {
            SubgroupRep::Stallings(aut) => !aut.is_whole_group(),
            SubgroupRep::Lattice(l) => !l.is_full(),
            SubgroupRep::Dihedral(d) => !d.is_whole(),
            SubgroupRep::Finite(f) => f.elements.len() < f.elements.universe(),
        }
    }

    /// Whether the user generators are free, or independent in the abelian case.
    /// `None` where the notion does not apply.
    pub fn user_list_is_basis(&self) -> Option<bool> {
        match &self.rep {
            SubgroupRep::Stallings(aut) => Some(aut.user_list_is_basis()),
            SubgroupRep::Lattice(l) => Some(l.rank() == self.gens.len()),
            _ => None,
        }
    }

    /// Free rank or lattice rank.
    pub fn rank(&self) -> Option<usize> {
        match &self.rep {
            SubgroupRep::Stallings(aut) => Some(aut.rank()),
            SubgroupRep::Lattice(l) => Some(l.rank()),
            _ => None,
        }
    }

    pub fn dihedral_kind(&self) -> Option<DihedralKind> {
        match &self.rep {
            SubgroupRep::Dihedral(d) => Some(d.kind()),
            _ => None,
        }
    }

    pub fn finite_elements(&self) -> Option<&ElementSet> {
        match &self.rep {
            SubgroupRep::Finite(f) => Some(&f.elements),
            _ => None,
        }
    }

    /// Subgroup order when finite.
    pub fn order(&self) -> Option<usize> {
        match &self.rep {
            SubgroupRep::Finite(f) => Some(f.elements.len()),
            SubgroupRep::Dihedral(d) => d.order().map(|o| o as usize),
            _ if self.gens.is_empty() => Some(1),
            _ => None,
        }
    }

    /// Index in the ambient group when both are finite.
    pub fn index(&self) -> Option<usize> {
        Some(self.ambient.order()? / self.order()?)
    }

    pub fn describe(&self) -> String {
        let gens: Vec<String> = self
            .gens
            .iter()
            .map(|g| self.ambient.alphabet().format(g))
            .collect();
        format!("subgroup gens=\"{}\"", gens.join(", "))
    }
}

/// Whether every reduced alternating word of odd length `≤ max_len` in a
/// dihedral group lies in `K ∪ L`.
pub fn odd_word_coverage_check(k: &SubgroupHandle, l: &SubgroupHandle, max_len: usize) -> Result<bool> {
    if !matches!(k.ambient().kind(), GroupKind::Dihedral { .. }) {
        return Err(Error::Unsupported("odd word coverage needs a dihedral group".into()));
    }
    let g = k.ambient();
    for len in (1..=max_len).step_by(2) {
        for first in 0..2u32 {
            let w: Word = (0..len as u32).map(|i| Letter::pos((first + i) % 2)).collect();
            let x = g.normal_form(&w)?;
            if !k.contains(&x) && !l.contains(&x) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::builders;
    use std::sync::Arc;

    fn handle(g: &GroupOracle, gens: &str) -> SubgroupHandle {
        SubgroupHandle::parse(g, gens).unwrap()
    }

    fn word(g: &GroupOracle, w: &str) -> Word {
        g.alphabet().parse_word(w).unwrap()
    }

    #[test]
    fn lattice_examples() {
        let z2 = GroupOracle::free_abelian(2);
        let h = handle(&z2, "b^-1");
        assert!(h.member(&word(&z2, "b^3")).unwrap());
        assert_eq!(h.express_member(&word(&z2, "b^3")).unwrap().expression, Word::power_of(0, -3));
        let h = handle(&z2, "a b^-1");
        assert!(!h.member(&word(&z2, "a")).unwrap());
        assert_eq!(
            h.express_member(&word(&z2, "a^2 b^-2")).unwrap().expression,
            Word::power_of(0, 2)
        );
        assert!(h.is_proper());
        assert!(!handle(&z2, "a b, b").is_proper());
        assert!(handle(&z2, "a^2, b").is_proper());
    }

    #[test]
    fn dihedral_examples() {
        let d = GroupOracle::infinite_dihedral();
        let k = handle(&d, "a, b a b");
        assert!(k.member(&word(&d, "b a b")).unwrap());
        assert!(!SubgroupHandle::gmn(&d, 0, 0).unwrap().is_proper());
        assert!(SubgroupHandle::gmn(&d, 1, 1).unwrap().is_proper());
        assert_eq!(k.dihedral_kind(), Some(DihedralKind::Gmn { m: 0, n: 1 }));
        let l = handle(&d, "b, a b a");
        assert_eq!(l.dihedral_kind(), Some(DihedralKind::Gmn { m: 1, n: 0 }));
        assert_eq!(handle(&d, "a").dihedral_kind(), Some(DihedralKind::CyclicReflection { offset: 0 }));
        assert_eq!(
            handle(&d, "a b a b").dihedral_kind(),
            Some(DihedralKind::CyclicRotation { step: 2 })
        );
    }

    #[test]
    fn dihedral_witnesses_evaluate() {
        for q in [None, Some(6), Some(7)] {
            let d = GroupOracle::dihedral(q).unwrap();
            for gens in ["a, b a b", "b a b a b, a b a", "a b a b a b, b", "a b a"] {
                let h = handle(&d, gens);
                for w in crate::words::enumerate_reduced(2, 7) {
                    let x = d.normal_form(&w).unwrap();
                    if h.contains(&x) {
                        let e = h.express(&x).unwrap();
                        assert_eq!(h.evaluate(&e).unwrap(), x);
                    }
                }
            }
        }
    }

    #[test]
    fn finite_examples() {
        let (t, g) = builders::symmetric(3);
        let s3 = GroupOracle::finite(Arc::new(t), g, "S3").unwrap();
        // generator a is the transposition (12)
        let h = handle(&s3, "a");
        assert_eq!(h.express_member(&word(&s3, "a")).unwrap().expression, Word::generator(0));
        assert_eq!(h.order(), Some(2));
        assert_eq!(h.index(), Some(3));
        assert!(h.is_proper());
        assert!(!handle(&s3, "a, b").is_proper());
    }

    #[test]
    fn odd_coverage() {
        let d = GroupOracle::infinite_dihedral();
        let k = handle(&d, "a, b a b");
        let l = handle(&d, "b, a b a");
        assert!(odd_word_coverage_check(&k, &l, 9).unwrap());
        assert!(!odd_word_coverage_check(&handle(&d, "a"), &handle(&d, "b"), 3).unwrap());
        assert!(odd_word_coverage_check(&handle(&d, "a"), &handle(&d, "b"), 0).unwrap());
    }

    #[test]
    fn ext_gcd_identity() {
        for a in -20..20 {
            for b in -20..20 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert!(g >= 0);
            }
        }
    }
}
