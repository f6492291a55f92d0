//! HNN extensions `⟨G, t | t⁻¹ a t = φ(a), a ∈ A⟩`: Britton reduction, the
//! word problem, ascending normal forms and the witness generating sets.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracles::{Element, GroupKind, GroupOracle};
use crate::subgroups::SubgroupHandle;
use crate::words::{enumerate_reduced, Alphabet, Letter, Word};

/// Finite subgroups larger than this are validated at desk scale instead of
/// by full closure.
const CLOSURE_LIMIT: usize = 1 << 16;
/// Word length for desk-scale isomorphism checks.
const DESK_RELATION_LEN: usize = 6;

/// An isomorphism between two subgroups, given on the domain's generators.
#[derive(Clone, Debug)]
pub struct SubgroupMap {
    domain: SubgroupHandle,
    codomain: SubgroupHandle,
    images: Vec<Word>,
    /// Subgroup generated by the images, used to apply the inverse map.
    image_sub: SubgroupHandle,
}

impl SubgroupMap {
    /// Validate that `gen_i ↦ images[i]` extends to an isomorphism onto `codomain`.
    pub fn new(domain: SubgroupHandle, codomain: SubgroupHandle, images: Vec<Word>) -> Result<Self> {
        let dom_names = domain.ambient().alphabet().clone();
        let cod = codomain.ambient();
        if images.len() != domain.generators().len() {
            return Err(Error::Validation(format!(
                "map gives {} images for {} generators",
                images.len(),
                domain.generators().len()
            )));
        }
        for (g, img) in domain.generators().iter().zip(&images) {
            if !codomain.member(img)? {
                return Err(Error::Validation(format!(
                    "image {} of {} is not in the target subgroup",
                    cod.alphabet().format(img),
                    dom_names.format(g)
                )));
            }
        }
        let image_sub = SubgroupHandle::new(cod, images.clone())?;
        for g in codomain.generators() {
            if !image_sub.member(g)? {
                return Err(Error::Validation(format!(
                    "images do not generate the target subgroup: {} is missed",
                    cod.alphabet().format(g)
                )));
            }
        }
        let map = SubgroupMap {
            domain,
            codomain,
            images,
            image_sub,
        };
        map.check_isomorphism()?;
        Ok(map)
    }

    fn check_isomorphism(&self) -> Result<()> {
        let dk = self.domain.ambient().kind();
        let ck = self.codomain.ambient().kind();
        match (dk, ck) {
            (GroupKind::Free { .. }, GroupKind::Free { .. })
            | (GroupKind::FreeAbelian { .. }, GroupKind::FreeAbelian { .. }) => {
                if self.domain.user_list_is_basis() != Some(true) {
                    return Err(Error::Validation(
                        "domain generators are not a basis of the subgroup".into(),
                    ));
                }
                if self.image_sub.user_list_is_basis() != Some(true) {
                    return Err(Error::Validation("map is not injective: images are not a basis".into()));
                }
                Ok(())
            }
            _ => match self.closure_check()? {
                true => Ok(()),
                false => self.desk_relation_check(),
            },
        }
    }

    /// Exhaustive check on finite domains. Returns `false` when the domain is too large.
    fn closure_check(&self) -> Result<bool> {
        let dom = self.domain.ambient();
        let cod = self.codomain.ambient();
        let gens = self.domain.generator_elements();
        let imgs: Vec<Element> = self
            .images
            .iter()
            .map(|w| cod.normal_form(w))
            .collect::<Result<_>>()?;
        let mut phi: HashMap<Element, Element> = HashMap::new();
        phi.insert(dom.identity(), cod.identity());
        let mut queue = VecDeque::from([dom.identity()]);
        while let Some(x) = queue.pop_front() {
            let fx = phi[&x].clone();
            for (g, img) in gens.iter().zip(&imgs) {
                let y = dom.mul(&x, g);
                let fy = cod.mul(&fx, img);
                match phi.get(&y) {
                    Some(prev) if *prev != fy => {
                        return Err(Error::Validation("generator map is not a homomorphism".into()));
                    }
                    Some(_) => {}
                    None => {
                        if phi.len() >= CLOSURE_LIMIT {
                            return Ok(false);
                        }
                        phi.insert(y.clone(), fy);
                        queue.push_back(y);
                    }
                }
            }
        }
        let mut values: Vec<&Element> = phi.values().collect();
        values.sort();
        values.dedup();
        if values.len() != phi.len() {
            return Err(Error::Validation("map is not injective".into()));
        }
        Ok(true)
    }

    /// Every word of length `≤ 6` over the generators is trivial in the domain
    /// exactly when its image is trivial.
    fn desk_relation_check(&self) -> Result<()> {
        let dom = self.domain.ambient();
        let cod = self.codomain.ambient();
        let gens = self.domain.generators();
        for w in enumerate_reduced(gens.len(), DESK_RELATION_LEN) {
            let left = dom.is_identity(&w.substitute(gens))?;
            let right = cod.is_identity(&w.substitute(&self.images))?;
            if left != right {
                return Err(Error::Validation(format!(
                    "map does not extend to an isomorphism (relation of length {} differs)",
                    w.len()
                )));
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> &SubgroupHandle {
        &self.domain
    }

    pub fn codomain(&self) -> &SubgroupHandle {
        &self.codomain
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        let expr = self.domain.express(x)?;
        self.codomain.ambient().normal_form(&expr.substitute(&self.images))
    }

    pub fn apply_inverse(&self, y: &Element) -> Result<Element> {
        let expr = self.image_sub.express(y)?;
        self.domain
            .ambient()
            .normal_form(&expr.substitute(self.domain.generators()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Proper,
    SemiProper,
    Full,
}

/// `g₀ t^{ε₁} g₁ … t^{εₙ} gₙ`; `tail[i] = (εᵢ, gᵢ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HnnElement {
    pub head: Element,
    pub tail: Vec<(i8, Element)>,
}

impl HnnElement {
    pub fn t_length(&self) -> usize {
        self.tail.len()
    }

    pub fn t_exponent_sum(&self) -> i64 {
        self.tail.iter().map(|&(e, _)| i64::from(e)).sum()
    }
}

/// `t^p g t^{-q}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AscendingForm {
    pub p: u64,
    pub g: Element,
    pub q: u64,
}

#[derive(Clone, Debug)]
pub struct HnnPresentation {
    base: GroupOracle,
    phi: SubgroupMap,
    stable: String,
    alphabet: Alphabet,
}

impl HnnPresentation {
    pub fn new(
        base: GroupOracle,
        a: SubgroupHandle,
        b: SubgroupHandle,
        phi_images: Vec<Word>,
        stable: &str,
    ) -> Result<Self> {
        let alphabet = base.alphabet().extended(stable)?;
        let phi = SubgroupMap::new(a, b, phi_images)?;
        Ok(HnnPresentation {
            base,
            phi,
            stable: stable.to_string(),
            alphabet,
        })
    }

    pub fn base(&self) -> &GroupOracle {
        &self.base
    }

    pub fn a(&self) -> &SubgroupHandle {
        self.phi.domain()
    }

    pub fn b(&self) -> &SubgroupHandle {
        self.phi.codomain()
    }

    pub fn phi_map(&self) -> &SubgroupMap {
        &self.phi
    }

    pub fn stable_name(&self) -> &str {
        &self.stable
    }

    /// Base alphabet followed by the stable letter.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn stable_gen(&self) -> u32 {
        self.base.rank() as u32
    }

    pub fn classify(&self) -> Classification {
        match (self.a().is_proper(), self.b().is_proper()) {
            (true, true) => Classification::Proper,
            (false, false) => Classification::Full,
            _ => Classification::SemiProper,
        }
    }

    pub fn phi(&self, x: &Element) -> Result<Element> {
        self.phi.apply(x)
    }

    pub fn phi_inverse(&self, y: &Element) -> Result<Element> {
        self.phi.apply_inverse(y).map_err(|e| match e {
            Error::NotMember(m) => Error::PhiInverseUnavailable(m),
            other => other,
        })
    }

    pub fn identity(&self) -> HnnElement {
        self.from_base(self.base.identity())
    }

    pub fn from_base(&self, g: Element) -> HnnElement {
        HnnElement {
            head: g,
            tail: Vec::new(),
        }
    }

    pub fn stable_power(&self, k: i64) -> HnnElement {
        let e = if k < 0 { -1 } else { 1 };
        HnnElement {
            head: self.base.identity(),
            tail: (0..k.unsigned_abs()).map(|_| (e, self.base.identity())).collect(),
        }
    }

    /// Element of a word over the base alphabet plus the stable letter, Britton-reduced.
    pub fn from_word(&self, w: &Word) -> Result<HnnElement> {
        self.alphabet.check(w)?;
        let t = self.stable_gen();
        let mut raw = HnnElement {
            head: self.base.identity(),
            tail: Vec::new(),
        };
        for &l in w.letters() {
            if l.gen == t {
                raw.tail.push((l.sign() as i8, self.base.identity()));
            } else {
                let slot = match raw.tail.last_mut() {
                    Some((_, g)) => g,
                    None => &mut raw.head,
                };
                *slot = self.base.mul(slot, &self.base.letter_element(l));
            }
        }
        self.britton_reduce(&raw)
    }

    pub fn parse_element(&self, text: &str) -> Result<HnnElement> {
        self.from_word(&self.alphabet.parse_word(text)?)
    }

    /// Append `t^eps g` to a Britton-reduced stack, resolving a pinch with the top.
    fn push(&self, head: &mut Element, stack: &mut Vec<(i8, Element)>, eps: i8, g: Element) -> Result<()> {
        let replacement = match stack.last() {
            Some((-1, top)) if eps == 1 && self.a().contains(top) => Some(self.phi(top)?),
            Some((1, top)) if eps == -1 && self.b().contains(top) => Some(self.phi_inverse(top)?),
            _ => None,
        };
        match replacement {
            Some(x) => {
                stack.pop();
                let slot = match stack.last_mut() {
                    Some((_, prev)) => prev,
                    None => head,
                };
                *slot = self.base.mul(&self.base.mul(slot, &x), &g);
            }
            None => stack.push((eps, g)),
        }
        Ok(())
    }

    pub fn britton_reduce(&self, e: &HnnElement) -> Result<HnnElement> {
        let mut head = e.head.clone();
        let mut stack = Vec::with_capacity(e.tail.len());
        for (eps, g) in &e.tail {
            self.push(&mut head, &mut stack, *eps, g.clone())?;
        }
        Ok(HnnElement { head, tail: stack })
    }

    /// Product; reduced whenever `x` is reduced.
    pub fn mul(&self, x: &HnnElement, y: &HnnElement) -> Result<HnnElement> {
        let mut head = x.head.clone();
        let mut stack = x.tail.clone();
        {
            let slot = match stack.last_mut() {
                Some((_, g)) => g,
                None => &mut head,
            };
            *slot = self.base.mul(slot, &y.head);
        }
        for (eps, g) in &y.tail {
            self.push(&mut head, &mut stack, *eps, g.clone())?;
        }
        Ok(HnnElement { head, tail: stack })
    }

    pub fn inverse(&self, x: &HnnElement) -> HnnElement {
        let n = x.tail.len();
        let elem = |i: usize| if i == 0 { &x.head } else { &x.tail[i - 1].1 };
        HnnElement {
            head: self.base.inverse(elem(n)),
            tail: (0..n)
                .rev()
                .map(|i| (-x.tail[i].0, self.base.inverse(elem(i))))
                .collect(),
        }
    }

    pub fn is_identity(&self, e: &HnnElement) -> Result<bool> {
        let r = self.britton_reduce(e)?;
        Ok(r.tail.is_empty() && self.base.is_one(&r.head))
    }

    pub fn is_identity_word(&self, w: &Word) -> Result<bool> {
        self.is_identity(&self.from_word(w)?)
    }

    /// `t^p g t^{-q}` for ascending extensions (`A` the whole base group).
    pub fn ascending_normal_form(&self, e: &HnnElement) -> Result<AscendingForm> {
        if self.a().is_proper() {
            return Err(Error::NotAscending);
        }
        let r = self.britton_reduce(e)?;
        // with A = G every t⁻¹ g t pinches, so positive letters precede negative ones
        let mut g = r.head.clone();
        let mut p = 0u64;
        let mut neg: Vec<Element> = Vec::new();
        for (eps, h) in &r.tail {
            if *eps == 1 {
                debug_assert!(neg.is_empty());
                // g t = t φ(g)
                g = self.base.mul(&self.phi(&g)?, h);
                p += 1;
            } else {
                neg.push(h.clone());
            }
        }
        // g t⁻¹ h₁ t⁻¹ h₂ … = g φ(h₁) t⁻¹ … using t⁻¹ h = φ(h) t⁻¹, innermost first
        let q = neg.len() as u64;
        let mut right = self.base.identity();
        for h in neg.iter().rev() {
            right = self.phi(&self.base.mul(h, &right))?;
        }
        // every moved h ends up behind the full block of t⁻¹ letters
        let mut g = self.base.mul(&g, &right);
        let (mut p, mut q) = (p, q);
        while p > 0 && q > 0 && self.b().contains(&g) {
            g = self.phi_inverse(&g)?;
            p -= 1;
            q -= 1;
        }
        Ok(AscendingForm { p, g, q })
    }

    /// Word over the extended alphabet.
    pub fn to_word(&self, e: &HnnElement) -> Word {
        let t = self.stable_gen();
        let mut w = self.base.element_word(&e.head);
        for (eps, g) in &e.tail {
            let l = if *eps > 0 { Letter::pos(t) } else { Letter::neg(t) };
            w = w.mul(&Word::from_letter(l)).mul(&self.base.element_word(g));
        }
        w
    }

    pub fn format(&self, e: &HnnElement) -> String {
        self.alphabet.format(&self.to_word(e))
    }

    fn product(&self, parts: &[HnnElement]) -> Result<HnnElement> {
        let mut acc = self.identity();
        for p in parts {
            acc = self.mul(&acc, p)?;
        }
        Ok(acc)
    }

    fn conjugated(&self, left: i64, s: &Element, right: i64) -> Result<HnnElement> {
        self.product(&[
            self.stable_power(left),
            self.from_base(s.clone()),
            self.stable_power(right),
        ])
    }

    fn base_elements(&self, s: &[Word]) -> Result<Vec<Element>> {
        s.iter().map(|w| self.base.normal_form(w)).collect()
    }

    /// `{t, t^r s₁ t^{-2r}, t^{3r} s₂ t^{-4r}, …, t^{(2n-1)r} sₙ t^{-2nr}}`.
    pub fn witness_set_ascending(&self, s: &[Word], r: u32) -> Result<Vec<HnnElement>> {
        if r < 2 {
            return Err(Error::PreconditionViolated(format!("r = {r} must be at least 2")));
        }
        let elems = self.base_elements(s)?;
        for (w, x) in s.iter().zip(&elems) {
            let name = self.base.alphabet().format(w);
            if self.base.is_one(x) {
                return Err(Error::IdentityGenerator(name));
            }
            if self.a().contains(x) {
                return Err(Error::GeneratorInSubgroup(name, "A"));
            }
            if self.b().contains(x) {
                return Err(Error::GeneratorInSubgroup(name, "B"));
            }
        }
        let r = i64::from(r);
        let mut out = vec![self.stable_power(1)];
        for (i, x) in elems.iter().enumerate() {
            let i = i as i64 + 1;
            out.push(self.conjugated((2 * i - 1) * r, x, -2 * i * r)?);
        }
        Ok(out)
    }

    /// `{t, t^{-r} s₁ t^{2r}, …, t^{-(2n-3)r} s_{n-1} t^{(2n-2)r}, u^r sₙ u^{-2r}}`
    /// with `u` the second-to-last element.
    pub fn witness_set_alternating(&self, s: &[Word], r: u32) -> Result<Vec<HnnElement>> {
        let n = s.len();
        if n < 2 {
            return Err(Error::PreconditionViolated(format!("need at least 2 generators, got {n}")));
        }
        if r < 1 {
            return Err(Error::PreconditionViolated("r must be at least 1".into()));
        }
        let elems = self.base_elements(s)?;
        for (i, (w, x)) in s.iter().zip(&elems).enumerate() {
            let name = self.base.alphabet().format(w);
            if self.base.is_one(x) {
                return Err(Error::IdentityGenerator(name));
            }
            if i + 1 < n && (self.a().contains(x) || self.b().contains(x)) {
                return Err(Error::PreconditionViolated(format!("s{} = {name} lies in A ∪ B", i + 1)));
            }
            if i + 1 == n && self.b().contains(x) {
                return Err(Error::PreconditionViolated(format!("s{} = {name} lies in B", i + 1)));
            }
        }
        let r = i64::from(r);
        let mut out = vec![self.stable_power(1)];
        for (i, x) in elems[..n - 1].iter().enumerate() {
            let i = i as i64 + 1;
            out.push(self.conjugated(-(2 * i - 1) * r, x, 2 * i * r)?);
        }
        let u = out.last().unwrap().clone();
        let u_inv = self.inverse(&u);
        let mut parts: Vec<HnnElement> = (0..r).map(|_| u.clone()).collect();
        parts.push(self.from_base(elems[n - 1].clone()));
        parts.extend((0..2 * r).map(|_| u_inv.clone()));
        out.push(self.product(&parts)?);
        Ok(out)
    }

    /// `{t, t^r a t^{-2r}, t^{-r} b t^{2r}}` over a dihedral base.
    pub fn witness_set_dihedral(&self, r: u32) -> Result<Vec<HnnElement>> {
        if !matches!(self.base.kind(), GroupKind::Dihedral { .. }) {
            return Err(Error::PreconditionViolated("base group is not dihedral".into()));
        }
        if r < 1 {
            return Err(Error::PreconditionViolated("r must be at least 1".into()));
        }
        let a = self.base.letter_element(Letter::pos(0));
        let b = self.base.letter_element(Letter::pos(1));
        if !self.a().contains(&a) {
            return Err(Error::PreconditionViolated("a is not in A".into()));
        }
        if !self.b().contains(&b) {
            return Err(Error::PreconditionViolated("b is not in B".into()));
        }
        let r = i64::from(r);
        Ok(vec![
            self.stable_power(1),
            self.conjugated(r, &a, -2 * r)?,
            self.conjugated(-r, &b, 2 * r)?,
        ])
    }

    pub fn describe(&self) -> String {
        let b = self.base.alphabet();
        let phi: Vec<String> = self
            .a()
            .generators()
            .iter()
            .zip(self.phi.images())
            .map(|(g, h)| format!("{} -> {}", b.format(g), b.format(h)))
            .collect();
        format!(
            "hnn base=({}) A=({}) B=({}) phi=\"{}\" stable={}",
            self.base.describe(),
            self.a().describe(),
            self.b().describe(),
            phi.join(", "),
            self.stable
        )
    }
}

impl fmt::Display for HnnPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free_hnn() -> HnnPresentation {
        let f2 = GroupOracle::free(2);
        let a = SubgroupHandle::parse(&f2, "a").unwrap();
        let b = SubgroupHandle::parse(&f2, "b").unwrap();
        HnnPresentation::new(f2, a, b, vec![Word::generator(1)], "t").unwrap()
    }

    fn bs12() -> HnnPresentation {
        let z = GroupOracle::free(1);
        let a = SubgroupHandle::parse(&z, "a").unwrap();
        let b = SubgroupHandle::parse(&z, "a^2").unwrap();
        HnnPresentation::new(z, a, b, vec![Word::power_of(0, 2)], "t").unwrap()
    }

    fn same(p: &HnnPresentation, x: &HnnElement, text: &str) -> bool {
        let y = p.parse_element(text).unwrap();
        p.is_identity(&p.mul(x, &p.inverse(&y)).unwrap()).unwrap()
    }

    #[test]
    fn classification() {
        assert_eq!(free_hnn().classify(), Classification::Proper);
        assert_eq!(bs12().classify(), Classification::SemiProper);
        let f2 = GroupOracle::free(2);
        let all = SubgroupHandle::parse(&f2, "a, b").unwrap();
        let p = HnnPresentation::new(f2, all.clone(), all, vec![Word::generator(1), Word::generator(0)], "t")
            .unwrap();
        assert_eq!(p.classify(), Classification::Full);
    }

    #[test]
    fn reductions() {
        let p = bs12();
        let e = p.parse_element("t a^2 t^-1").unwrap();
        assert_eq!(p.format(&e), "a");
        let e = p.parse_element("t a t^-1").unwrap();
        assert_eq!(e.t_length(), 2);
        let p = free_hnn();
        let e = p.parse_element("t^-1 a^3 t").unwrap();
        assert_eq!(p.format(&e), "b b b");
    }

    #[test]
    fn identities() {
        let p = bs12();
        assert!(p.is_identity_word(&p.alphabet().parse_word("t^-1 a t a^-2").unwrap()).unwrap());
        assert!(!p.is_identity_word(&p.alphabet().parse_word("t").unwrap()).unwrap());
        let q = free_hnn();
        assert!(!q.is_identity_word(&q.alphabet().parse_word("t^-1 b t").unwrap()).unwrap());
    }

    #[test]
    fn ascending_forms() {
        let p = bs12();
        let z = |s: &str| p.base().parse_element(s).unwrap();
        let f = p.ascending_normal_form(&p.parse_element("t^-1 a t").unwrap()).unwrap();
        assert_eq!(f, AscendingForm { p: 0, g: z("a^2"), q: 0 });
        let f = p.ascending_normal_form(&p.parse_element("t a t^-1").unwrap()).unwrap();
        assert_eq!(f, AscendingForm { p: 1, g: z("a"), q: 1 });
        assert!(matches!(
            free_hnn().ascending_normal_form(&free_hnn().identity()),
            Err(Error::NotAscending)
        ));
        let f2 = GroupOracle::free(2);
        let all = SubgroupHandle::parse(&f2, "a, b").unwrap();
        let b = SubgroupHandle::parse(&f2, "a b, b a").unwrap();
        let sapir = HnnPresentation::new(
            f2.clone(),
            all,
            b,
            vec![f2.alphabet().parse_word("a b").unwrap(), f2.alphabet().parse_word("b a").unwrap()],
            "t",
        )
        .unwrap();
        let f = sapir
            .ascending_normal_form(&sapir.parse_element("t^-1 a b t").unwrap())
            .unwrap();
        assert_eq!(f.g, f2.parse_element("a b b a").unwrap());
        assert_eq!((f.p, f.q), (0, 0));
    }

    #[test]
    fn ascending_form_represents_element() {
        let p = bs12();
        for w in enumerate_reduced(2, 6) {
            let e = p.from_word(&w).unwrap();
            let f = p.ascending_normal_form(&e).unwrap();
            let rebuilt = p
                .product(&[
                    p.stable_power(f.p as i64),
                    p.from_base(f.g.clone()),
                    p.stable_power(-(f.q as i64)),
                ])
                .unwrap();
            let diff = p.mul(&e, &p.inverse(&rebuilt)).unwrap();
            assert!(p.is_identity(&diff).unwrap(), "{}", p.alphabet().format(&w));
        }
    }

    #[test]
    fn witness_sets() {
        let p = free_hnn();
        let s = [p.base().alphabet().parse_word("a b").unwrap(), p.base().alphabet().parse_word("b a^-1").unwrap()];
        let set = p.witness_set_ascending(&s, 2).unwrap();
        assert_eq!(set.len(), 3);
        assert!(same(&p, &set[1], "t^2 a b t^-4"));
        assert!(same(&p, &set[2], "t^6 b a^-1 t^-8"));
        let err = p.witness_set_ascending(&[Word::generator(0)], 2).unwrap_err();
        assert!(matches!(err, Error::GeneratorInSubgroup(_, "A")));
        let set = p.witness_set_alternating(&[s[0].clone(), Word::generator(0)], 2).unwrap();
        assert!(same(&p, &set[1], "t^-2 a b t^4"));
        assert!(same(
            &p,
            &set[2],
            "(t^-2 a b t^4)^2 a (t^-2 a b t^4)^-4"
        ));
        assert!(p.witness_set_alternating(&[s[0].clone(), Word::generator(1)], 2).is_err());
    }

    #[test]
    fn map_validation() {
        let f2 = GroupOracle::free(2);
        let a = SubgroupHandle::parse(&f2, "a").unwrap();
        let b = SubgroupHandle::parse(&f2, "b").unwrap();
        let bad = f2.alphabet().parse_word("a b").unwrap();
        assert!(matches!(
            HnnPresentation::new(f2.clone(), a.clone(), b.clone(), vec![bad], "t"),
            Err(Error::Validation(_))
        ));
        // b² does not generate ⟨b⟩
        assert!(HnnPresentation::new(f2, a, b, vec![Word::power_of(1, 2)], "t").is_err());
    }

    #[test]
    fn dihedral_extension() {
        let d = GroupOracle::infinite_dihedral();
        let a = SubgroupHandle::gmn(&d, 0, 1).unwrap();
        let b = SubgroupHandle::gmn(&d, 1, 0).unwrap();
        let w = |s: &str| d.alphabet().parse_word(s).unwrap();
        let p = HnnPresentation::new(d.clone(), a, b, vec![w("a b a"), w("b")], "t").unwrap();
        assert_eq!(p.classify(), Classification::Proper);
        let set = p.witness_set_dihedral(2).unwrap();
        assert!(same(&p, &set[1], "t^2 a t^-4"));
        assert!(p.is_identity_word(&p.alphabet().parse_word("t^-1 a t a b a").unwrap()).unwrap());
        assert!(p.is_identity_word(&p.alphabet().parse_word("t b t^-1 b a b").unwrap()).unwrap());
        // a ↦ b is not onto G_{1,0}
        let a = SubgroupHandle::parse(&d, "a").unwrap();
        let b2 = SubgroupHandle::gmn(&d, 1, 0).unwrap();
        assert!(HnnPresentation::new(d.clone(), a, b2, vec![w("b")], "t").is_err());
    }
}
