//! Word-problem oracles for the base groups: free, free abelian, dihedral
//! and finite groups given by Cayley tables.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::CayleyTable;
use crate::words::{Alphabet, Letter, Word};

/// Dihedral element `(ab)^translation · a^flip`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DihedralNormal {
    pub translation: i64,
    pub flip: u8,
}

/// Canonical form of a group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Element {
    Free(Word),
    Abelian(Vec<i64>),
    Dihedral(DihedralNormal),
    Finite(usize),
}

/// A finite group with a chosen generating tuple.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    table: Arc<CayleyTable>,
    gens: Vec<usize>,
    /// Shortest (then lexicographically least) word for each element.
    words: Arc<Vec<Word>>,
    label: String,
}

impl FiniteGroup {
    pub fn table(&self) -> &CayleyTable {
        &self.table
    }

    pub fn table_arc(&self) -> Arc<CayleyTable> {
        self.table.clone()
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn word_of(&self, x: usize) -> &Word {
        &self.words[x]
    }
}

#[derive(Clone, Debug)]
pub enum GroupKind {
    Free { rank: usize },
    FreeAbelian { rank: usize },
    /// `q = None` is `D_∞`.
    Dihedral { q: Option<u64> },
    Finite(FiniteGroup),
}

/// A group with a decidable word problem over a fixed alphabet.
#[derive(Clone, Debug)]
pub struct GroupOracle {
    kind: GroupKind,
    alphabet: Alphabet,
}

impl GroupOracle {
    pub fn free(rank: usize) -> Self {
        GroupOracle {
            kind: GroupKind::Free { rank },
            alphabet: Alphabet::standard(rank),
        }
    }

    pub fn free_abelian(rank: usize) -> Self {
        GroupOracle {
            kind: GroupKind::FreeAbelian { rank },
            alphabet: Alphabet::standard(rank),
        }
    }

    pub fn dihedral(q: Option<u64>) -> Result<Self> {
        if let Some(q) = q {
            if q < 2 {
                return Err(Error::Validation(format!("dihedral order q={q} must be at least 2")));
            }
        }
        Ok(GroupOracle {
            kind: GroupKind::Dihedral { q },
            alphabet: Alphabet::standard(2),
        })
    }

    pub fn infinite_dihedral() -> Self {
        GroupOracle::dihedral(None).expect("q = ∞ is valid")
    }

    /// Finite group from a table and generator indices; the generators must
    /// generate the whole table.
    pub fn finite(table: Arc<CayleyTable>, gens: Vec<usize>, label: impl Into<String>) -> Result<Self> {
        for &g in &gens {
            if g >= table.order() {
                return Err(Error::Validation(format!(
                    "generator index {g} out of range for a group of order {}",
                    table.order()
                )));
            }
        }
        if !table.generates(gens.iter().copied()) {
            return Err(Error::Validation(format!(
                "generators {gens:?} do not generate the group of order {}",
                table.order()
            )));
        }
        // breadth-first words, letters tried in enumeration order
        let n = table.order();
        let mut words: Vec<Option<Word>> = vec![None; n];
        words[0] = Some(Word::empty());
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for key in 0..2 * gens.len() as u32 {
                let l = Letter::from_key(key);
                let g = gens[l.gen as usize];
                let g = if l.inverse { table.inv(g) } else { g };
                let y = table.mul(x, g);
                if words[y].is_none() {
                    let mut w = words[x].clone().unwrap();
                    w.push(l);
                    words[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        let words: Vec<Word> = words.into_iter().map(|w| w.unwrap()).collect();
        let rank = gens.len();
        Ok(GroupOracle {
            kind: GroupKind::Finite(FiniteGroup {
                table,
                gens,
                words: Arc::new(words),
                label: label.into(),
            }),
            alphabet: Alphabet::standard(rank),
        })
    }

    /// Rename the generators.
    pub fn with_names<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Result<Self> {
        let alphabet = Alphabet::new(names)?;
        if alphabet.len() != self.alphabet.len() {
            return Err(Error::Validation(format!(
                "expected {} generator names, got {}",
                self.alphabet.len(),
                alphabet.len()
            )));
        }
        self.alphabet = alphabet;
        Ok(self)
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.alphabet.len()
    }

    pub fn finite_group(&self) -> Option<&FiniteGroup> {
        match &self.kind {
            GroupKind::Finite(f) => Some(f),
            _ => None,
        }
    }

    /// Group order when finite.
    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            GroupKind::Free { rank: 0 } | GroupKind::FreeAbelian { rank: 0 } => Some(1),
            GroupKind::Dihedral { q: Some(q) } => Some(2 * *q as usize),
            GroupKind::Finite(f) => Some(f.table.order()),
            _ => None,
        }
    }

    /// Canonical DSL text for this group.
    pub fn describe(&self) -> String {
        let base = match &self.kind {
            GroupKind::Free { rank } => format!("free rank={rank}"),
            GroupKind::FreeAbelian { rank } => format!("abelian rank={rank}"),
            GroupKind::Dihedral { q: None } => "dihedral q=inf".to_string(),
            GroupKind::Dihedral { q: Some(q) } => format!("dihedral q={q}"),
            GroupKind::Finite(f) => {
                let gens: Vec<String> = f.gens.iter().map(|g| g.to_string()).collect();
                // labels are either a DSL source (`cayley file=…`) or a builtin name
                if f.label.starts_with("cayley ") {
                    format!("{} gens={}", f.label, gens.join(","))
                } else {
                    format!("builtin name={} gens={}", f.label, gens.join(","))
                }
            }
        };
        if self.alphabet == Alphabet::standard(self.rank()) {
            base
        } else {
            format!("{base} names={}", self.alphabet.names().join(","))
        }
    }

    pub fn identity(&self) -> Element {
        match &self.kind {
            GroupKind::Free { .. } => Element::Free(Word::empty()),
            GroupKind::FreeAbelian { rank } => Element::Abelian(vec![0; *rank]),
            GroupKind::Dihedral { .. } => Element::Dihedral(DihedralNormal {
                translation: 0,
                flip: 0,
            }),
            GroupKind::Finite(_) => Element::Finite(0),
        }
    }

    fn reduce_translation(&self, k: i64) -> i64 {
        match self.kind {
            GroupKind::Dihedral { q: Some(q) } => k.rem_euclid(q as i64),
            _ => k,
        }
    }

    pub fn letter_element(&self, l: Letter) -> Element {
        let g = l.gen as usize;
        let e = match &self.kind {
            GroupKind::Free { .. } => Element::Free(Word::from_letter(Letter::pos(l.gen))),
            GroupKind::FreeAbelian { rank } => {
                let mut v = vec![0; *rank];
                v[g] = 1;
                Element::Abelian(v)
            }
            GroupKind::Dihedral { .. } => Element::Dihedral(DihedralNormal {
                // a = (0, 1), b = (-1, 1); both involutions
                translation: self.reduce_translation(if g == 0 { 0 } else { -1 }),
                flip: 1,
            }),
            GroupKind::Finite(f) => Element::Finite(f.gens[g]),
        };
        if l.inverse {
            self.inverse(&e)
        } else {
            e
        }
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        match (&self.kind, x, y) {
            (GroupKind::Free { .. }, Element::Free(a), Element::Free(b)) => Element::Free(a.mul(b)),
            (GroupKind::FreeAbelian { .. }, Element::Abelian(a), Element::Abelian(b)) => {
                Element::Abelian(a.iter().zip(b).map(|(p, q)| p + q).collect())
            }
            (GroupKind::Dihedral { .. }, Element::Dihedral(a), Element::Dihedral(b)) => {
                let k = if a.flip == 0 {
                    a.translation + b.translation
                } else {
                    a.translation - b.translation
                };
                Element::Dihedral(DihedralNormal {
                    translation: self.reduce_translation(k),
                    flip: a.flip ^ b.flip,
                })
            }
            (GroupKind::Finite(f), Element::Finite(a), Element::Finite(b)) => {
                Element::Finite(f.table.mul(*a, *b))
            }
            _ => panic!("element kind does not match group {}", self.describe()),
        }
    }

    pub fn inverse(&self, x: &Element) -> Element {
        match (&self.kind, x) {
            (GroupKind::Free { .. }, Element::Free(a)) => Element::Free(a.inverse()),
            (GroupKind::FreeAbelian { .. }, Element::Abelian(a)) => {
                Element::Abelian(a.iter().map(|p| -p).collect())
            }
            (GroupKind::Dihedral { .. }, Element::Dihedral(a)) => {
                if a.flip == 1 {
                    x.clone()
                } else {
                    Element::Dihedral(DihedralNormal {
                        translation: self.reduce_translation(-a.translation),
                        flip: 0,
                    })
                }
            }
            (GroupKind::Finite(f), Element::Finite(a)) => Element::Finite(f.table.inv(*a)),
            _ => panic!("element kind does not match group {}", self.describe()),
        }
    }

    pub fn pow(&self, x: &Element, exp: i64) -> Element {
        let base = if exp < 0 { self.inverse(x) } else { x.clone() };
        let mut acc = self.identity();
        for _ in 0..exp.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }

    pub fn is_one(&self, x: &Element) -> bool {
        *x == self.identity()
    }

    /// Canonical element represented by a word.
    pub fn normal_form(&self, w: &Word) -> Result<Element> {
        self.alphabet.check(w)?;
        if let GroupKind::Free { .. } = self.kind {
            return Ok(Element::Free(w.clone()));
        }
        let mut acc = self.identity();
        for &l in w.letters() {
            acc = self.mul(&acc, &self.letter_element(l));
        }
        Ok(acc)
    }

    pub fn evaluate(&self, w: &Word) -> Result<Element> {
        self.normal_form(w)
    }

    pub fn is_identity(&self, w: &Word) -> Result<bool> {
        Ok(self.is_one(&self.normal_form(w)?))
    }

    pub fn parse_element(&self, text: &str) -> Result<Element> {
        self.normal_form(&self.alphabet.parse_word(text)?)
    }

    /// A short word representing `x`.
    pub fn element_word(&self, x: &Element) -> Word {
        match (&self.kind, x) {
            (GroupKind::Free { .. }, Element::Free(w)) => w.clone(),
            (GroupKind::FreeAbelian { .. }, Element::Abelian(v)) => {
                let mut w = Word::empty();
                for (i, &e) in v.iter().enumerate() {
                    w = w.mul(&Word::power_of(i as u32, e));
                }
                w
            }
            (GroupKind::Dihedral { q }, Element::Dihedral(d)) => {
                let mut k = d.translation;
                if let Some(q) = q {
                    let q = *q as i64;
                    k = k.rem_euclid(q);
                    if 2 * k > q {
                        k -= q;
                    }
                }
                let (x, y) = if k >= 0 { (0u32, 1u32) } else { (1, 0) };
                let mut letters = Vec::new();
                for _ in 0..k.unsigned_abs() {
                    letters.push(Letter::pos(x));
                    letters.push(Letter::pos(y));
                }
                if d.flip == 1 {
                    if k < 0 {
                        // (ba)^m a = (ba)^{m-1} b
                        letters.pop();
                    } else {
                        letters.push(Letter::pos(0));
                    }
                }
                Word::from_iter(letters)
            }
            (GroupKind::Finite(f), Element::Finite(i)) => f.words[*i].clone(),
            _ => panic!("element kind does not match group {}", self.describe()),
        }
    }

    pub fn format_element(&self, x: &Element) -> String {
        self.alphabet.format(&self.element_word(x))
    }

    /// Whether the group surjects onto `ℤ/2 × ℤ/2`.
    pub fn klein_four_quotient_exists(&self) -> Result<bool> {
        match &self.kind {
            GroupKind::Free { rank } | GroupKind::FreeAbelian { rank } => Ok(*rank >= 2),
            GroupKind::Dihedral { q } => Ok(q.is_none_or(|q| q % 2 == 0)),
            GroupKind::Finite(f) => Ok(f.table.elementary_two_quotient_order() >= 4),
        }
    }
}

impl Element {
    pub fn dihedral(&self) -> Option<&DihedralNormal> {
        match self {
            Element::Dihedral(d) => Some(d),
            _ => None,
        }
    }

    pub fn finite_index(&self) -> Option<usize> {
        match self {
            Element::Finite(i) => Some(*i),
            _ => None,
        }
    }
}

impl fmt::Display for GroupOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}
