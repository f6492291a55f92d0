//! Amalgamated free products `A ∗_C B`: normal forms, the word problem,
//! the involution and pair lemmas, and the conjugated witness generating set.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hnn::SubgroupMap;
use crate::oracles::{Element, GroupOracle};
use crate::subgroups::SubgroupHandle;
use crate::words::{enumerate_reduced, Alphabet, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Alternating product of factor elements. Normalized elements have every
/// syllable outside `C`, except a lone syllable which may lie in `C` and is
/// then kept on the left.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AmalgamElement {
    pub syllables: Vec<(Side, Element)>,
}

impl AmalgamElement {
    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct AmalgamPresentation {
    left: GroupOracle,
    right: GroupOracle,
    iso: SubgroupMap,
    alphabet: Alphabet,
}

impl AmalgamPresentation {
    /// `iso_images[i]` is the image in `right` of the i-th generator of `c_left`.
    pub fn new(
        left: GroupOracle,
        right: GroupOracle,
        c_left: SubgroupHandle,
        c_right: SubgroupHandle,
        iso_images: Vec<Word>,
    ) -> Result<Self> {
        let alphabet = left.alphabet().joined(right.alphabet())?;
        let iso = SubgroupMap::new(c_left, c_right, iso_images)?;
        Ok(AmalgamPresentation {
            left,
            right,
            iso,
            alphabet,
        })
    }

    pub fn left(&self) -> &GroupOracle {
        &self.left
    }

    pub fn right(&self) -> &GroupOracle {
        &self.right
    }

    pub fn factor(&self, side: Side) -> &GroupOracle {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn c(&self, side: Side) -> &SubgroupHandle {
        match side {
            Side::Left => self.iso.domain(),
            Side::Right => self.iso.codomain(),
        }
    }

    pub fn iso(&self) -> &SubgroupMap {
        &self.iso
    }

    /// Left generators followed by right generators.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Whether `C` is proper in both factors.
    pub fn is_proper(&self) -> bool {
        self.c(Side::Left).is_proper() && self.c(Side::Right).is_proper()
    }

    fn transport(&self, from: Side, c: &Element) -> Result<Element> {
        match from {
            Side::Left => self.iso.apply(c),
            Side::Right => self.iso.apply_inverse(c),
        }
    }

    fn push(&self, stack: &mut Vec<(Side, Element)>, side: Side, g: Element) -> Result<()> {
        let f = self.factor(side);
        if f.is_one(&g) {
            return Ok(());
        }
        let Some((top_side, top)) = stack.last() else {
            if side == Side::Right && self.c(side).contains(&g) {
                stack.push((Side::Left, self.transport(side, &g)?));
            } else {
                stack.push((side, g));
            }
            return Ok(());
        };
        let top_side = *top_side;
        if top_side == side {
            let (_, top) = stack.pop().unwrap();
            return self.push(stack, side, f.mul(&top, &g));
        }
        if self.c(side).contains(&g) {
            let moved = self.transport(side, &g)?;
            let (_, top) = stack.pop().unwrap();
            let merged = self.factor(top_side).mul(&top, &moved);
            return self.push(stack, top_side, merged);
        }
        if stack.len() == 1 && self.c(top_side).contains(top) {
            let (_, top) = stack.pop().unwrap();
            let moved = self.transport(top_side, &top)?;
            return self.push(stack, side, f.mul(&moved, &g));
        }
        stack.push((side, g));
        Ok(())
    }

    pub fn identity(&self) -> AmalgamElement {
        AmalgamElement { syllables: Vec::new() }
    }

    pub fn from_factor(&self, side: Side, g: Element) -> Result<AmalgamElement> {
        let mut stack = Vec::new();
        self.push(&mut stack, side, g)?;
        Ok(AmalgamElement { syllables: stack })
    }

    /// Normalize an arbitrary syllable sequence.
    pub fn normalize(&self, e: &AmalgamElement) -> Result<AmalgamElement> {
        let mut stack = Vec::new();
        for (side, g) in &e.syllables {
            self.push(&mut stack, *side, g.clone())?;
        }
        Ok(AmalgamElement { syllables: stack })
    }

    /// Product; normalized whenever `x` is.
    pub fn mul(&self, x: &AmalgamElement, y: &AmalgamElement) -> Result<AmalgamElement> {
        let mut stack = x.syllables.clone();
        for (side, g) in &y.syllables {
            self.push(&mut stack, *side, g.clone())?;
        }
        Ok(AmalgamElement { syllables: stack })
    }

    pub fn inverse(&self, x: &AmalgamElement) -> AmalgamElement {
        AmalgamElement {
            syllables: x
                .syllables
                .iter()
                .rev()
                .map(|(s, g)| (*s, self.factor(*s).inverse(g)))
                .collect(),
        }
    }

    pub fn is_identity(&self, e: &AmalgamElement) -> Result<bool> {
        Ok(self.normalize(e)?.is_empty())
    }

    fn split_letter(&self, l: Letter) -> (Side, Letter) {
        let k = self.left.rank() as u32;
        if l.gen < k {
            (Side::Left, l)
        } else {
            (Side::Right, Letter { gen: l.gen - k, ..l })
        }
    }

    pub fn from_word(&self, w: &Word) -> Result<AmalgamElement> {
        self.alphabet.check(w)?;
        let mut stack = Vec::new();
        for &l in w.letters() {
            let (side, l) = self.split_letter(l);
            let g = self.factor(side).letter_element(l);
            self.push(&mut stack, side, g)?;
        }
        Ok(AmalgamElement { syllables: stack })
    }

    pub fn parse_element(&self, text: &str) -> Result<AmalgamElement> {
        self.from_word(&self.alphabet.parse_word(text)?)
    }

    pub fn is_identity_word(&self, w: &Word) -> Result<bool> {
        Ok(self.from_word(w)?.is_empty())
    }

    pub fn to_word(&self, e: &AmalgamElement) -> Word {
        let shift = self.left.rank() as u32;
        let mut w = Word::empty();
        for (side, g) in &e.syllables {
            let part = self.factor(*side).element_word(g);
            let part = match side {
                Side::Left => part,
                Side::Right => part
                    .letters()
                    .iter()
                    .map(|l| Letter {
                        gen: l.gen + shift,
                        ..*l
                    })
                    .collect(),
            };
            w = w.mul(&part);
        }
        w
    }

    pub fn format(&self, e: &AmalgamElement) -> String {
        self.alphabet.format(&self.to_word(e))
    }

    fn product(&self, parts: &[AmalgamElement]) -> Result<AmalgamElement> {
        let mut acc = self.identity();
        for p in parts {
            acc = self.mul(&acc, p)?;
        }
        Ok(acc)
    }

    /// Evaluate a word over `X, Y, Z` at `(x, y, z)`.
    fn substitute(&self, w: &Word, xyz: &[AmalgamElement; 3]) -> Result<AmalgamElement> {
        let inv: Vec<AmalgamElement> = xyz.iter().map(|e| self.inverse(e)).collect();
        let mut acc = self.identity();
        for l in w.letters() {
            let e = if l.inverse { &inv[l.gen as usize] } else { &xyz[l.gen as usize] };
            acc = self.mul(&acc, e)?;
        }
        Ok(acc)
    }

    /// The conjugated witness set for `S₁ = {a₁, a₂, …}` in the left factor
    /// and `S₂ = {b₁, …}` in the right factor.
    pub fn build_witness(&self, s1: &[Word], s2: &[Word], r: u32) -> Result<AmalgamWitness> {
        if r < 1 {
            return Err(Error::PreconditionViolated("r must be at least 1".into()));
        }
        if s1.len() < 2 {
            return Err(Error::PreconditionViolated(format!(
                "the left generating set needs at least 2 elements, got {}",
                s1.len()
            )));
        }
        if s2.is_empty() {
            return Err(Error::PreconditionViolated("the right generating set is empty".into()));
        }
        let left: Vec<Element> = s1.iter().map(|w| self.left.normal_form(w)).collect::<Result<_>>()?;
        let right: Vec<Element> = s2.iter().map(|w| self.right.normal_form(w)).collect::<Result<_>>()?;
        for (side, words, elems) in [(Side::Left, s1, &left), (Side::Right, s2, &right)] {
            for (w, x) in words.iter().zip(elems) {
                if self.c(side).contains(x) {
                    return Err(Error::PreconditionViolated(format!(
                        "generator {} lies in C",
                        self.factor(side).alphabet().format(w)
                    )));
                }
            }
        }
        let failed = pair_condition_failures(&self.left, self.c(Side::Left), &left[0], &left[1]);
        if let Some(f) = failed.first() {
            return Err(Error::PreconditionViolated(format!("pair condition fails: {f} lies in C")));
        }
        let (n, m) = (left.len(), right.len());
        let total = n + m;
        let mut p = 2 * r as usize + 1;
        let (u_words, v_words) = loop {
            let us: Vec<Word> = (1..=total).map(|i| xi_eta_word(i, p, false)).collect();
            let vs: Vec<Word> = (1..=total).map(|j| xi_eta_word(j, p, true).inverse()).collect();
            if separation_holds(&us, &vs, p) {
                break (us, vs);
            }
            p += 1;
        };
        let a1 = self.from_factor(Side::Left, left[0].clone())?;
        let a2 = self.from_factor(Side::Left, left[1].clone())?;
        let b1 = self.from_factor(Side::Right, right[0].clone())?;
        let (a1i, a2i) = (self.inverse(&a1), self.inverse(&a2));
        let u = self.product(&[a1.clone(), b1.clone(), a1i.clone()])?;
        let v = self.product(&[a2.clone(), b1.clone(), a2i.clone()])?;
        let w = self.product(&[a1.clone(), a2.clone(), b1, a2i, a1i])?;
        let xyz = [u.clone(), v.clone(), w.clone()];
        let mut elements = Vec::with_capacity(total + 2);
        for (i, x) in left.iter().enumerate() {
            let core = self.from_factor(Side::Left, x.clone())?;
            elements.push(self.product(&[
                self.substitute(&u_words[i], &xyz)?,
                core,
                self.substitute(&v_words[i], &xyz)?,
            ])?);
        }
        for (j, y) in right.iter().enumerate() {
            let core = self.product(&[a1.clone(), self.from_factor(Side::Right, y.clone())?, a1.clone()])?;
            elements.push(self.product(&[
                self.substitute(&u_words[n + j], &xyz)?,
                core,
                self.substitute(&v_words[n + j], &xyz)?,
            ])?);
        }
        elements.push(self.mul(&u, &v)?);
        elements.push(self.mul(&w, &v)?);
        Ok(AmalgamWitness {
            p,
            u_words,
            v_words,
            elements,
        })
    }

    /// Choose `S₁` from a valid pair plus the left generators and `S₂` from the
    /// right generators, then build the witness set.
    pub fn witness_from_generators(&self, r: u32) -> Result<AmalgamWitness> {
        let (a1, a2) = find_pair(&self.left, self.c(Side::Left))?;
        let s1 = generating_list(&self.left, self.c(Side::Left), vec![a1, a2]);
        let s2 = generating_list(&self.right, self.c(Side::Right), Vec::new());
        let s1: Vec<Word> = s1.iter().map(|x| self.left.element_word(x)).collect();
        let s2: Vec<Word> = s2.iter().map(|x| self.right.element_word(x)).collect();
        self.build_witness(&s1, &s2, r)
    }

    pub fn describe(&self) -> String {
        let l = self.left.alphabet();
        let iso: Vec<String> = self
            .iso
            .domain()
            .generators()
            .iter()
            .zip(self.iso.images())
            .map(|(g, h)| format!("{} -> {}", l.format(g), self.right.alphabet().format(h)))
            .collect();
        format!(
            "amalgam left=({}) right=({}) C_left=({}) C_right=({}) iso=\"{}\"",
            self.left.describe(),
            self.right.describe(),
            self.c(Side::Left).describe(),
            self.c(Side::Right).describe(),
            iso.join(", ")
        )
    }
}

impl fmt::Display for AmalgamPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Generating list of a factor: `seed` first, then the factor generators,
/// each moved off `C` by a seed or earlier element when needed. Repeats and
/// inverses of earlier entries are skipped.
fn generating_list(g: &GroupOracle, c: &SubgroupHandle, seed: Vec<Element>) -> Vec<Element> {
    let mut out: Vec<Element> = Vec::new();
    let push = |out: &mut Vec<Element>, x: Element| {
        let inv = g.inverse(&x);
        if !g.is_one(&x) && !out.contains(&x) && !out.contains(&inv) {
            out.push(x);
        }
    };
    for x in seed {
        push(&mut out, x);
    }
    let gens: Vec<Element> = (0..g.rank() as u32)
        .map(|i| g.letter_element(Letter::pos(i)))
        .collect();
    let outside = gens.iter().chain(out.clone().iter()).find(|x| !c.contains(x)).cloned();
    for x in gens {
        if c.contains(&x) {
            if let Some(o) = &outside {
                push(&mut out, g.mul(o, &x));
            }
        } else {
            push(&mut out, x);
        }
    }
    out
}

/// `ξ · bits · ξ` (or with `η` ends) over `X, Y, Z`, `ξ = XY`, `η = ZY`, where
/// the middle `p − 2` letters spell `index` in binary (`0 → ξ`, `1 → η`).
fn xi_eta_word(index: usize, p: usize, eta_ends: bool) -> Word {
    let (x, y, z) = (Letter::pos(0), Letter::pos(1), Letter::pos(2));
    let bits = p - 2;
    let mut pattern = vec![eta_ends];
    for k in (0..bits).rev() {
        pattern.push(k < usize::BITS as usize && (index >> k) & 1 == 1);
    }
    pattern.push(eta_ends);
    pattern
        .into_iter()
        .flat_map(|eta| [if eta { z } else { x }, y])
        .collect()
}

/// `|U^ε V^δ| > 3p/2` for every pair and every sign choice.
fn separation_holds(us: &[Word], vs: &[Word], p: usize) -> bool {
    us.iter().all(|u| {
        vs.iter().all(|v| {
            [1i64, -1].iter().all(|&e| {
                [1i64, -1]
                    .iter()
                    .all(|&d| 2 * u.pow(e).mul(&v.pow(d)).len() > 3 * p)
            })
        })
    })
}

/// Output of the witness construction.
#[derive(Clone, Debug)]
pub struct AmalgamWitness {
    pub p: usize,
    /// Words over `X, Y, Z`.
    pub u_words: Vec<Word>,
    pub v_words: Vec<Word>,
    pub elements: Vec<AmalgamElement>,
}

/// Names of the eight products that must avoid `C`.
pub const PAIR_CONDITIONS: [&str; 8] = [
    "a1",
    "a2",
    "a1^-1 a2",
    "a2 a1^-1",
    "a1^-1 a2 a1",
    "a1 a2 a1^-1",
    "a2^-1 a1 a2",
    "a2 a1 a2^-1",
];

/// The eight products, in the order of [`PAIR_CONDITIONS`].
pub fn pair_products(g: &GroupOracle, a1: &Element, a2: &Element) -> [Element; 8] {
    let (i1, i2) = (g.inverse(a1), g.inverse(a2));
    let m = |xs: &[&Element]| xs.iter().fold(g.identity(), |acc, x| g.mul(&acc, x));
    [
        a1.clone(),
        a2.clone(),
        m(&[&i1, a2]),
        m(&[a2, &i1]),
        m(&[&i1, a2, a1]),
        m(&[a1, a2, &i1]),
        m(&[&i2, a1, a2]),
        m(&[a2, a1, &i2]),
    ]
}

/// Conditions violated by `(a1, a2)`, including distinctness.
pub fn pair_condition_failures(g: &GroupOracle, c: &SubgroupHandle, a1: &Element, a2: &Element) -> Vec<&'static str> {
    let mut out: Vec<&'static str> = pair_products(g, a1, a2)
        .iter()
        .zip(PAIR_CONDITIONS)
        .filter(|(x, _)| c.contains(x))
        .map(|(_, name)| name)
        .collect();
    if a1 == a2 {
        out.push("a1 != a2");
    }
    out
}

/// Candidate elements: all elements of a finite group, otherwise normal forms
/// of reduced words up to length 4.
fn pair_candidates(g: &GroupOracle) -> Vec<Element> {
    if let Some(f) = g.finite_group() {
        return (0..f.table().order()).map(Element::Finite).collect();
    }
    let mut out: Vec<Element> = Vec::new();
    for w in enumerate_reduced(g.rank(), 4) {
        let x = g.normal_form(&w).expect("word over the group alphabet");
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// A pair `a₁ ≠ a₂` with all eight products outside `C`: first `(x, x²)`, then
/// an exhaustive search over candidates.
pub fn find_pair(g: &GroupOracle, c: &SubgroupHandle) -> Result<(Element, Element)> {
    if let Some(i) = c.index() {
        if i < 3 {
            return Err(Error::NoPairFound(format!("index of C is {i}, need at least 3")));
        }
    }
    let cands = pair_candidates(g);
    for x in &cands {
        let x2 = g.mul(x, x);
        if !c.contains(x) && !c.contains(&x2) && pair_condition_failures(g, c, x, &x2).is_empty() {
            return Ok((x.clone(), x2));
        }
    }
    for a1 in cands.iter().filter(|x| !c.contains(x)) {
        for a2 in cands.iter().filter(|x| !c.contains(x)) {
            if pair_condition_failures(g, c, a1, a2).is_empty() {
                return Ok((a1.clone(), a2.clone()));
            }
        }
    }
    Err(Error::NoPairFound("exhaustive candidate search found nothing".into()))
}

/// Outcome of the involution check for one subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionCheck {
    /// Every element outside `H` squares into `H`.
    pub hypothesis: bool,
    pub normal: bool,
}

impl InvolutionCheck {
    /// The implication `hypothesis ⇒ normal`.
    pub fn holds(&self) -> bool {
        !self.hypothesis || self.normal
    }
}

pub fn involution_check(g: &GroupOracle, h: &SubgroupHandle) -> Result<InvolutionCheck> {
    let f = g
        .finite_group()
        .ok_or_else(|| Error::Unsupported("the involution check needs a finite group".into()))?;
    let t = f.table();
    let set = h
        .finite_elements()
        .ok_or_else(|| Error::Unsupported("subgroup of a different group".into()))?;
    let hypothesis = (0..t.order())
        .filter(|&x| !set.contains(x))
        .all(|x| set.contains(t.mul(x, x)));
    Ok(InvolutionCheck {
        hypothesis,
        normal: t.is_normal(set),
    })
}

/// Whether "every element outside `H` squares into `H`" implies `H` normal for this pair.
pub fn check_involution_lemma(g: &GroupOracle, h: &SubgroupHandle) -> Result<bool> {
    Ok(involution_check(g, h)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::builders;
    use std::sync::Arc;

    fn cyclic(n: usize, name: &str) -> GroupOracle {
        let (t, g) = builders::cyclic(n);
        GroupOracle::finite(Arc::new(t), g, format!("C{n}"))
            .unwrap()
            .with_names([name])
            .unwrap()
    }

    /// `ℤ/4 ∗_{ℤ/2} ℤ/6` with `x² = y³`.
    fn z4_z6() -> AmalgamPresentation {
        let x = cyclic(4, "x");
        let y = cyclic(6, "y");
        let cl = SubgroupHandle::parse(&x, "x^2").unwrap();
        let cr = SubgroupHandle::parse(&y, "y^3").unwrap();
        AmalgamPresentation::new(x, y.clone(), cl, cr, vec![y.alphabet().parse_word("y^3").unwrap()]).unwrap()
    }

    #[test]
    fn identity_examples() {
        let p = z4_z6();
        assert!(!p.is_identity(&p.parse_element("x y").unwrap()).unwrap());
        assert!(p.is_identity(&p.parse_element("x^2 y^-3").unwrap()).unwrap());
        assert!(p.is_identity(&p.identity()).unwrap());
        assert!(p.is_identity(&p.parse_element("x^4").unwrap()).unwrap());
        assert!(!p.is_identity(&p.parse_element("y^3").unwrap()).unwrap());
        // x y x⁻¹ y⁻¹ is nontrivial; x² is central
        assert!(!p.is_identity(&p.parse_element("x y x^-1 y^-1").unwrap()).unwrap());
        assert!(p.is_identity(&p.parse_element("x^2 y x^-2 y^-1").unwrap()).unwrap());
    }

    #[test]
    fn normal_form_is_canonical_for_c_elements() {
        let p = z4_z6();
        let a = p.parse_element("x^2").unwrap();
        let b = p.parse_element("y^3").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.syllables[0].0, Side::Left);
    }

    #[test]
    fn involution_examples() {
        let (t, g) = builders::symmetric(3);
        let s3 = GroupOracle::finite(Arc::new(t), g, "S3").unwrap();
        let f = s3.finite_group().unwrap();
        let three = (0..6).find(|&x| f.table().element_order(x) == 3).unwrap();
        let a3 = SubgroupHandle::from_elements(&s3, &[three]).unwrap();
        let c = involution_check(&s3, &a3).unwrap();
        assert!(c.hypothesis && c.normal);
        let two = SubgroupHandle::parse(&s3, "a").unwrap();
        let c = involution_check(&s3, &two).unwrap();
        assert!(!c.hypothesis && c.holds());
        let z4 = cyclic(4, "x");
        assert!(check_involution_lemma(&z4, &SubgroupHandle::parse(&z4, "x^2").unwrap()).unwrap());
    }

    #[test]
    fn pair_examples() {
        let z4 = cyclic(4, "x");
        let triv = SubgroupHandle::parse(&z4, "").unwrap();
        let (a1, a2) = find_pair(&z4, &triv).unwrap();
        assert_eq!((a1, a2), (Element::Finite(1), Element::Finite(2)));
        let z = GroupOracle::free(1);
        let c = SubgroupHandle::parse(&z, "a^3").unwrap();
        let (a1, a2) = find_pair(&z, &c).unwrap();
        assert_eq!(a1, z.parse_element("a").unwrap());
        assert_eq!(a2, z.parse_element("a^2").unwrap());
        let z4c = SubgroupHandle::parse(&z4, "x^2").unwrap();
        assert!(matches!(find_pair(&z4, &z4c), Err(Error::NoPairFound(_))));
    }

    #[test]
    fn xi_eta_words() {
        let u = xi_eta_word(1, 3, false);
        // ξ η ξ = X Y Z Y X Y
        assert_eq!(u, Word::from_iter([0, 1, 2, 1, 0, 1].map(Letter::pos)));
        let v = xi_eta_word(1, 3, true).inverse();
        assert_eq!(v.len(), 6);
        assert_eq!(v.letters()[0], Letter::neg(1));
        assert!(separation_holds(&[u], &[v], 3));
    }

    #[test]
    fn witness_set_on_free_product() {
        let f2 = GroupOracle::free(2);
        let g2 = GroupOracle::free(2).with_names(["c", "d"]).unwrap();
        let triv_l = SubgroupHandle::parse(&f2, "").unwrap();
        let triv_r = SubgroupHandle::parse(&g2, "").unwrap();
        let p = AmalgamPresentation::new(f2.clone(), g2.clone(), triv_l, triv_r, vec![]).unwrap();
        let s1 = [Word::generator(0), Word::generator(1)];
        let s2 = [Word::generator(0)];
        let w = p.build_witness(&s1, &s2, 1).unwrap();
        assert_eq!(w.p, 3);
        assert_eq!(w.elements.len(), 5);
        for u in &w.u_words {
            assert_eq!(u.len(), 6);
            assert_eq!(*u.letters().last().unwrap(), Letter::pos(1));
        }
        let c = SubgroupHandle::parse(&f2, "a").unwrap();
        let c2 = SubgroupHandle::parse(&g2, "c").unwrap();
        let q = AmalgamPresentation::new(f2, g2, c, c2, vec![Word::generator(0)]).unwrap();
        assert!(matches!(q.build_witness(&s1, &s2, 1), Err(Error::PreconditionViolated(_))));
    }
}
