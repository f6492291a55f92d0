//! Shortest relations among a list of group elements: exact girth by
//! exhaustive search, lower-bound certificates and law-based upper bounds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::amalgam::{AmalgamElement, AmalgamPresentation};
use crate::error::{Error, Result};
use crate::hnn::{HnnElement, HnnPresentation};
use crate::oracles::{Element, GroupOracle};
use crate::subgroups::SubgroupHandle;
use crate::words::{reduced_word_count, Alphabet, Letter, Word};

/// Default search budget in evaluated words.
pub const DEFAULT_BUDGET: u128 = 1_000_000;
/// Default cap never exceeds this length.
pub const MAX_DEFAULT_CAP: usize = 64;

/// Group arithmetic needed by the search.
pub trait GroupArith: Sync {
    type Elem: Clone + Send + Sync + PartialEq;
    fn one(&self) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;
    fn inv(&self, x: &Self::Elem) -> Self::Elem;
    fn is_one(&self, x: &Self::Elem) -> Result<bool>;
}

impl GroupArith for GroupOracle {
    type Elem = Element;

    fn one(&self) -> Element {
        self.identity()
    }

    fn mul(&self, x: &Element, y: &Element) -> Result<Element> {
        Ok(GroupOracle::mul(self, x, y))
    }

    fn inv(&self, x: &Element) -> Element {
        self.inverse(x)
    }

    fn is_one(&self, x: &Element) -> Result<bool> {
        Ok(GroupOracle::is_one(self, x))
    }
}

impl GroupArith for HnnPresentation {
    type Elem = HnnElement;

    fn one(&self) -> HnnElement {
        self.identity()
    }

    fn mul(&self, x: &HnnElement, y: &HnnElement) -> Result<HnnElement> {
        HnnPresentation::mul(self, x, y)
    }

    fn inv(&self, x: &HnnElement) -> HnnElement {
        self.inverse(x)
    }

    fn is_one(&self, x: &HnnElement) -> Result<bool> {
        // products of reduced elements stay reduced
        Ok(x.tail.is_empty() && self.base().is_one(&x.head))
    }
}

impl GroupArith for AmalgamPresentation {
    type Elem = AmalgamElement;

    fn one(&self) -> AmalgamElement {
        self.identity()
    }

    fn mul(&self, x: &AmalgamElement, y: &AmalgamElement) -> Result<AmalgamElement> {
        AmalgamPresentation::mul(self, x, y)
    }

    fn inv(&self, x: &AmalgamElement) -> AmalgamElement {
        self.inverse(x)
    }

    fn is_one(&self, x: &AmalgamElement) -> Result<bool> {
        Ok(x.is_empty())
    }
}

/// Outcome of the bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Shortest relation, lexicographically least among those of its length.
    pub relation: Option<Word>,
    /// Cyclically reduced words evaluated.
    pub words_checked: u64,
}

fn dfs<G: GroupArith>(
    g: &G,
    letters: &[G::Elem],
    len: usize,
    path: &mut Vec<u32>,
    prods: &mut Vec<G::Elem>,
    count: &mut u64,
) -> Result<bool> {
    let depth = path.len();
    let last = path[depth - 1];
    if depth == len {
        *count += 1;
        return g.is_one(&prods[depth - 1]);
    }
    let first = path[0];
    for l in 0..letters.len() as u32 {
        if l == last ^ 1 || (depth + 1 == len && l == first ^ 1) {
            continue;
        }
        let p = g.mul(&prods[depth - 1], &letters[l as usize])?;
        path.push(l);
        prods.push(p);
        if dfs(g, letters, len, path, prods, count)? {
            return Ok(true);
        }
        path.pop();
        prods.pop();
    }
    Ok(false)
}

/// Search freely and cyclically reduced words over `s` by increasing length,
/// up to `cap`. Parallel over the first letter; the result is deterministic.
pub fn shortest_relation<G: GroupArith>(g: &G, s: &[G::Elem], cap: usize) -> Result<SearchOutcome> {
    let letters: Vec<G::Elem> = (0..2 * s.len() as u32)
        .map(|key| {
            let l = Letter::from_key(key);
            let x = &s[l.gen as usize];
            if l.inverse {
                g.inv(x)
            } else {
                x.clone()
            }
        })
        .collect();
    let mut words_checked = 0u64;
    for len in 1..=cap {
        let parts: Vec<Result<(u64, Option<Vec<u32>>)>> = (0..letters.len() as u32)
            .into_par_iter()
            .map(|first| {
                let mut path = vec![first];
                let mut prods = vec![letters[first as usize].clone()];
                let mut count = 0;
                let found = dfs(g, &letters, len, &mut path, &mut prods, &mut count)?;
                Ok((count, found.then_some(path)))
            })
            .collect();
        let mut witness = None;
        for part in parts {
            let (count, found) = part?;
            words_checked += count;
            if witness.is_none() {
                witness = found;
            }
        }
        if let Some(path) = witness {
            return Ok(SearchOutcome {
                relation: Some(path.into_iter().map(Letter::from_key).collect()),
                words_checked,
            });
        }
    }
    Ok(SearchOutcome {
        relation: None,
        words_checked,
    })
}

/// Largest length whose cumulative count of reduced words over `k` symbols
/// stays within `budget`.
pub fn default_cap(k: usize, budget: u128) -> usize {
    let mut total = 0u128;
    let mut cap = 0;
    while cap < MAX_DEFAULT_CAP {
        total += reduced_word_count(k, cap + 1);
        if total > budget {
            break;
        }
        cap += 1;
    }
    cap.max(1)
}

/// A group on which girth questions can be asked.
#[derive(Clone, Debug)]
pub enum Target {
    Base(GroupOracle),
    Hnn(HnnPresentation),
    Amalgam(AmalgamPresentation),
}

impl Target {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Target::Base(g) => g.alphabet(),
            Target::Hnn(p) => p.alphabet(),
            Target::Amalgam(p) => p.alphabet(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Target::Base(g) => g.describe(),
            Target::Hnn(p) => p.describe(),
            Target::Amalgam(p) => p.describe(),
        }
    }

    pub fn is_identity(&self, w: &Word) -> Result<bool> {
        match self {
            Target::Base(g) => g.is_identity(w),
            Target::Hnn(p) => p.is_identity_word(w),
            Target::Amalgam(p) => p.is_identity_word(w),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenerationStatus {
    Verified,
    NotGenerating,
    Assumed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateKind {
    Exact {
        value: usize,
        witness: String,
        words_checked: u64,
    },
    LowerBound {
        r: usize,
        words_checked: u64,
    },
    UpperBound {
        value: usize,
        witness: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthCertificate {
    #[serde(flatten)]
    pub kind: CertificateKind,
    pub fingerprint: String,
    pub target: String,
    pub generators: Vec<String>,
    pub symbols: Vec<String>,
    /// Relations are freely reduced words over the symbols.
    pub relation_convention: String,
    pub generation: GenerationStatus,
    pub cap: usize,
    /// `r` requested by a lower-bound certification, when it differs from the cap.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub requested_r: Option<usize>,
}

impl GirthCertificate {
    pub fn value(&self) -> Option<usize> {
        match self.kind {
            CertificateKind::Exact { value, .. } | CertificateKind::UpperBound { value, .. } => Some(value),
            CertificateKind::LowerBound { .. } => None,
        }
    }

    pub fn lower_bound(&self) -> Option<usize> {
        match self.kind {
            CertificateKind::LowerBound { r, .. } => Some(r),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&str> {
        match &self.kind {
            CertificateKind::Exact { witness, .. } | CertificateKind::UpperBound { witness, .. } => Some(witness),
            CertificateKind::LowerBound { .. } => None,
        }
    }
}

/// A girth question: a target group and a list of distinct elements.
#[derive(Clone, Debug)]
pub struct GirthQuery {
    pub target: Target,
    pub gens: Vec<Word>,
    pub max_len: usize,
}

#[derive(Serialize)]
struct Fingerprinted<'a> {
    mode: &'a str,
    target: String,
    generators: &'a [String],
    cap: usize,
    r: Option<usize>,
}

impl GirthQuery {
    pub fn new(target: Target, gens: Vec<Word>, max_len: Option<usize>) -> Result<Self> {
        for g in &gens {
            target.alphabet().check(g)?;
        }
        if gens.is_empty() {
            return Err(Error::Validation("empty generator list".into()));
        }
        let max_len = max_len.unwrap_or_else(|| default_cap(gens.len(), DEFAULT_BUDGET));
        if max_len == 0 {
            return Err(Error::Validation("search cap must be at least 1".into()));
        }
        Ok(GirthQuery { target, gens, max_len })
    }

    /// Parse `"w1; w2; …"` over the target alphabet.
    pub fn parse_gens(target: &Target, text: &str) -> Result<Vec<Word>> {
        text.split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| target.alphabet().parse_word(s))
            .collect()
    }

    pub fn generator_strings(&self) -> Vec<String> {
        self.gens.iter().map(|w| self.target.alphabet().format(w)).collect()
    }

    /// Generator names when each generator is a single distinct letter, `s1…sn` otherwise.
    pub fn symbols(&self) -> Alphabet {
        let a = self.target.alphabet();
        let singles: Option<Vec<String>> = self
            .gens
            .iter()
            .map(|w| match w.letters() {
                [l] if !l.inverse => Some(a.name(l.gen).to_string()),
                _ => None,
            })
            .collect();
        singles
            .and_then(|n| Alphabet::new(n).ok())
            .unwrap_or_else(|| Alphabet::new((1..=self.gens.len()).map(|i| format!("s{i}"))).unwrap())
    }

    fn fingerprint(&self, mode: &str, r: Option<usize>) -> String {
        let gens = self.generator_strings();
        let body = Fingerprinted {
            mode,
            target: self.target.describe(),
            generators: &gens,
            cap: self.max_len,
            r,
        };
        let json = serde_json::to_vec(&body).expect("serializable");
        hex::encode(Sha256::digest(&json))
    }

    fn generation(&self) -> Result<GenerationStatus> {
        match &self.target {
            Target::Base(g) => {
                let h = SubgroupHandle::new(g, self.gens.clone())?;
                Ok(if h.is_proper() {
                    GenerationStatus::NotGenerating
                } else {
                    GenerationStatus::Verified
                })
            }
            _ => Ok(GenerationStatus::Assumed),
        }
    }

    /// Evaluate the generators and search up to the cap.
    pub fn search(&self) -> Result<SearchOutcome> {
        match &self.target {
            Target::Base(g) => {
                let s: Vec<Element> = self.gens.iter().map(|w| g.normal_form(w)).collect::<Result<_>>()?;
                check_distinct(g, &s, |x| g.format_element(x))?;
                shortest_relation(g, &s, self.max_len)
            }
            Target::Hnn(p) => {
                let s: Vec<HnnElement> = self.gens.iter().map(|w| p.from_word(w)).collect::<Result<_>>()?;
                check_distinct(p, &s, |x| p.format(x))?;
                shortest_relation(p, &s, self.max_len)
            }
            Target::Amalgam(p) => {
                let s: Vec<AmalgamElement> = self.gens.iter().map(|w| p.from_word(w)).collect::<Result<_>>()?;
                check_distinct(p, &s, |x| p.format(x))?;
                shortest_relation(p, &s, self.max_len)
            }
        }
    }

    fn certificate(&self, kind: CertificateKind, mode: &str, r: Option<usize>) -> Result<GirthCertificate> {
        Ok(GirthCertificate {
            kind,
            fingerprint: self.fingerprint(mode, r),
            target: self.target.describe(),
            generators: self.generator_strings(),
            symbols: self.symbols().names().to_vec(),
            relation_convention: "freely_reduced".into(),
            generation: self.generation()?,
            cap: self.max_len,
            requested_r: r,
        })
    }

    fn outcome_kind(&self, out: SearchOutcome) -> CertificateKind {
        match out.relation {
            Some(w) => CertificateKind::Exact {
                value: w.len(),
                witness: self.symbols().format(&w),
                words_checked: out.words_checked,
            },
            None => CertificateKind::LowerBound {
                r: self.max_len + 1,
                words_checked: out.words_checked,
            },
        }
    }
}

fn check_distinct<G: GroupArith>(g: &G, s: &[G::Elem], fmt: impl Fn(&G::Elem) -> String) -> Result<()> {
    for (i, x) in s.iter().enumerate() {
        let xi = g.inv(x);
        for y in &s[..i] {
            if g.is_one(&g.mul(y, &xi)?)? {
                return Err(Error::DuplicateElement(fmt(x)));
            }
        }
    }
    Ok(())
}

/// Exact girth up to the cap, otherwise a lower bound of `cap + 1`.
pub fn girth_exact(q: &GirthQuery) -> Result<GirthCertificate> {
    let out = q.search()?;
    q.certificate(q.outcome_kind(out), "exact", None)
}

/// Verify that no relation of length `≤ cap` exists. Any relation found is
/// returned as an exact certificate instead.
pub fn certify_no_short_relation(target: Target, gens: Vec<Word>, r: usize, cap: usize) -> Result<GirthCertificate> {
    if cap > r {
        return Err(Error::PreconditionViolated(format!("cap {cap} exceeds r = {r}")));
    }
    let q = GirthQuery::new(target, gens, Some(cap))?;
    let out = q.search()?;
    q.certificate(q.outcome_kind(out), "certify", Some(r))
}

/// Outcome of a law substitution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LawOutcome {
    Bound(GirthCertificate),
    DoesNotHold { substituted: String },
}

/// Substitute the law variables (by default the first generators) and check
/// the result is the identity.
pub fn law_upper_bound(q: &GirthQuery, law: &laws::Law, instantiation: Option<Vec<Word>>) -> Result<LawOutcome> {
    let k = q.gens.len();
    let inst = match instantiation {
        Some(v) => {
            if v.len() != law.variables {
                return Err(Error::PreconditionViolated(format!(
                    "law {} has {} variables, got {} words",
                    law.name,
                    law.variables,
                    v.len()
                )));
            }
            for w in &v {
                if w.max_gen().is_some_and(|m| m as usize >= k) {
                    return Err(Error::UnknownSymbol(format!("s{}", w.max_gen().unwrap() + 1)));
                }
            }
            if let Some(i) = (1..v.len()).find(|&i| v[..i].contains(&v[i])) {
                return Err(Error::DuplicateElement(q.symbols().format(&v[i])));
            }
            v
        }
        None => {
            if k < law.variables {
                return Err(Error::PreconditionViolated(format!(
                    "law {} needs {} generators, have {k}",
                    law.name, law.variables
                )));
            }
            (0..law.variables as u32).map(Word::generator).collect()
        }
    };
    let relation = law.word.substitute(&inst);
    if relation.is_empty() {
        return Err(Error::SubstitutionCollapsed);
    }
    let symbols = q.symbols();
    let in_target = relation.substitute(&q.gens);
    if q.target.is_identity(&in_target)? {
        let kind = CertificateKind::UpperBound {
            value: relation.len(),
            witness: symbols.format(&relation),
        };
        Ok(LawOutcome::Bound(q.certificate(kind, &format!("law:{}", law.name), None)?))
    } else {
        Ok(LawOutcome::DoesNotHold {
            substituted: symbols.format(&relation),
        })
    }
}

/// Shipped laws.
pub mod laws {
    use crate::words::{Letter, Word};

    #[derive(Clone, Debug, PartialEq, Eq)]
    pub struct Law {
        pub name: String,
        pub variables: usize,
        /// Word over the variables `x₀, x₁, …`.
        pub word: Word,
    }

    fn commutator(x: &Word, y: &Word) -> Word {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }

    fn var(i: u32) -> Word {
        Word::from_letter(Letter::pos(i))
    }

    /// `[x, y]`
    pub fn abelian() -> Law {
        Law {
            name: "abelian".into(),
            variables: 2,
            word: commutator(&var(0), &var(1)),
        }
    }

    /// `[[x, y], [z, w]]`
    pub fn metabelian() -> Law {
        Law {
            name: "metabelian".into(),
            variables: 4,
            word: commutator(&commutator(&var(0), &var(1)), &commutator(&var(2), &var(3))),
        }
    }

    /// `[[x, y], z]`
    pub fn nilpotent2() -> Law {
        Law {
            name: "nilpotent2".into(),
            variables: 3,
            word: commutator(&commutator(&var(0), &var(1)), &var(2)),
        }
    }

    /// `xⁿ`
    pub fn burnside(n: u32) -> Law {
        Law {
            name: format!("burnside{n}"),
            variables: 1,
            word: var(0).pow(i64::from(n)),
        }
    }

    /// Look up `abelian`, `metabelian`, `nilpotent2` or `burnsideN`.
    pub fn by_name(name: &str) -> Option<Law> {
        match name {
            "abelian" => Some(abelian()),
            "metabelian" => Some(metabelian()),
            "nilpotent2" => Some(nilpotent2()),
            _ => name
                .strip_prefix("burnside")
                .and_then(|n| n.parse().ok())
                .filter(|&n| n > 0)
                .map(burnside),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroups::SubgroupHandle;

    fn query(g: GroupOracle, gens: &str, cap: usize) -> GirthQuery {
        let t = Target::Base(g);
        let gens = GirthQuery::parse_gens(&t, gens).unwrap();
        GirthQuery::new(t, gens, Some(cap)).unwrap()
    }

    fn bs12() -> HnnPresentation {
        let z = GroupOracle::free(1);
        let a = SubgroupHandle::parse(&z, "a").unwrap();
        let b = SubgroupHandle::parse(&z, "a^2").unwrap();
        HnnPresentation::new(z, a, b, vec![Word::power_of(0, 2)], "t").unwrap()
    }

    #[test]
    fn base_examples() {
        let c = girth_exact(&query(GroupOracle::infinite_dihedral(), "a; b", 6)).unwrap();
        assert_eq!(c.value(), Some(2));
        assert_eq!(c.witness(), Some("a a"));
        assert_eq!(c.generation, GenerationStatus::Verified);
        let c = girth_exact(&query(GroupOracle::free_abelian(2), "a; b", 6)).unwrap();
        assert_eq!(c.value(), Some(4));
        assert_eq!(c.witness(), Some("a b a^-1 b^-1"));
        let c = girth_exact(&query(GroupOracle::free(2), "a; b", 8)).unwrap();
        assert_eq!(c.lower_bound(), Some(9));
    }

    #[test]
    fn duplicates_rejected() {
        let q = query(GroupOracle::free_abelian(2), "a b; b a", 3);
        assert!(matches!(girth_exact(&q), Err(Error::DuplicateElement(_))));
    }

    #[test]
    fn bs12_relation() {
        let p = bs12();
        let t = Target::Hnn(p);
        let gens = GirthQuery::parse_gens(&t, "a; t").unwrap();
        let c = certify_no_short_relation(t, gens, 10, 5).unwrap();
        assert_eq!(c.value(), Some(5));
        assert_eq!(c.witness(), Some("a a t^-1 a^-1 t"));
    }

    #[test]
    fn law_examples() {
        let q = query(GroupOracle::free_abelian(2), "a; b", 4);
        let LawOutcome::Bound(c) = law_upper_bound(&q, &laws::abelian(), None).unwrap() else {
            panic!("abelian law holds in ℤ²")
        };
        assert_eq!(c.value(), Some(4));
        let q = query(GroupOracle::free(2), "a; b", 4);
        assert!(matches!(
            law_upper_bound(&q, &laws::abelian(), None).unwrap(),
            LawOutcome::DoesNotHold { .. }
        ));
        let t = Target::Hnn(bs12());
        let gens = GirthQuery::parse_gens(&t, "a; t").unwrap();
        let q = GirthQuery::new(t, gens, Some(6)).unwrap();
        let inst = vec![Word::generator(0), Word::generator(1), Word::power_of(0, -1), Word::power_of(1, -1)];
        let LawOutcome::Bound(c) = law_upper_bound(&q, &laws::metabelian(), Some(inst)).unwrap() else {
            panic!("metabelian law holds")
        };
        assert_eq!(c.value(), Some(16));
        let collapse = vec![Word::generator(0), Word::generator(0)];
        assert!(matches!(
            law_upper_bound(&q, &laws::abelian(), Some(collapse)),
            Err(Error::DuplicateElement(_))
        ));
        assert!(matches!(
            law_upper_bound(&q, &laws::burnside(2), Some(vec![Word::empty()])),
            Err(Error::SubstitutionCollapsed)
        ));
    }

    #[test]
    fn default_caps() {
        // 2(3^11 - 1) ≤ 10⁶ < 2(3^12 - 1)
        assert_eq!(default_cap(2, DEFAULT_BUDGET), 11);
        assert_eq!(default_cap(1, DEFAULT_BUDGET), MAX_DEFAULT_CAP);
    }

    #[test]
    fn certificates_serialize() {
        let c = girth_exact(&query(GroupOracle::infinite_dihedral(), "a; b", 4)).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"kind\":\"exact\""));
        let back: GirthCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
