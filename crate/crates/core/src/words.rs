//! Alphabets, freely reduced words and length-ordered enumeration.
//!
//! A [`Word`] is always stored freely reduced. Letters refer to generator
//! indices; names only matter when parsing or printing through an
//! [`Alphabet`].

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: u32,
    pub inverse: bool,
}

impl Letter {
    pub const fn pos(gen: u32) -> Self {
        Letter {
            gen,
            inverse: false,
        }
    }

    pub const fn neg(gen: u32) -> Self {
        Letter { gen, inverse: true }
    }

    pub const fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    /// Sign as +1 / -1.
    pub fn sign(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Position in the enumeration order: by generator id, then `+` before `-`.
    pub const fn key(self) -> u32 {
        2 * self.gen + self.inverse as u32
    }

    pub const fn from_key(key: u32) -> Self {
        Letter {
            gen: key / 2,
            inverse: key % 2 == 1,
        }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

/// Freely reduce an arbitrary letter sequence.
pub fn free_reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in raw {
        if out.last().is_some_and(|&last| last.cancels(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

/// Split a reduced word into `(core, conjugator)` with `w = conjugator · core · conjugator⁻¹`
/// and `core` cyclically reduced.
pub fn cyclic_reduce(w: &Word) -> (Word, Word) {
    let letters = &w.0;
    let mut i = 0;
    let mut j = letters.len();
    while j >= i + 2 && letters[i].cancels(letters[j - 1]) {
        i += 1;
        j -= 1;
    }
    (Word(letters[i..j].to_vec()), Word(letters[..i].to_vec()))
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn generator(gen: u32) -> Self {
        Word(vec![Letter::pos(gen)])
    }

    /// `gen^exp` as a word.
    pub fn power_of(gen: u32, exp: i64) -> Self {
        let l = if exp < 0 { Letter::neg(gen) } else { Letter::pos(gen) };
        Word(vec![l; exp.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Product `self · other`, cancelling only at the junction.
    pub fn mul(&self, other: &Word) -> Word {
        let mut k = 0;
        let n = self.0.len();
        while k < n && k < other.0.len() && self.0[n - 1 - k].cancels(other.0[k]) {
            k += 1;
        }
        let mut out = Vec::with_capacity(n - k + other.0.len() - k);
        out.extend_from_slice(&self.0[..n - k]);
        out.extend_from_slice(&other.0[k..]);
        Word(out)
    }

    pub fn push(&mut self, l: Letter) {
        if self.0.last().is_some_and(|&last| last.cancels(l)) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn pow(&self, exp: i64) -> Word {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..exp.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&f), Some(&l)) if self.0.len() >= 2 => !f.cancels(l),
            _ => true,
        }
    }

    /// Largest generator index used, if any.
    pub fn max_gen(&self) -> Option<u32> {
        self.0.iter().map(|l| l.gen).max()
    }

    /// Replace each generator `i` by `images[i]` and reduce.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::empty();
        for l in &self.0 {
            let img = &images[l.gen as usize];
            if l.inverse {
                out = out.mul(&img.inverse());
            } else {
                out = out.mul(img);
            }
        }
        out
    }

    /// Exponent sum of a generator.
    pub fn exponent_sum(&self, gen: u32) -> i64 {
        self.0
            .iter()
            .filter(|l| l.gen == gen)
            .map(|l| l.sign() as i64)
            .sum()
    }

    /// Length first, then lexicographic on letter keys.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        free_reduce(iter)
    }
}

/// A named generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorSymbol {
    pub id: u32,
    pub name: String,
}

/// An ordered set of generator names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    names: Vec<String>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Default generator names: `a, b, c, …`, then `x26, x27, …`.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("x{i}")
            }
        })
        .collect()
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) {
                return Err(Error::Validation(format!("invalid generator name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::Validation(format!("duplicate generator name `{n}`")));
            }
        }
        Ok(Alphabet { names })
    }

    pub fn standard(n: usize) -> Self {
        Alphabet {
            names: default_names(n),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, gen: u32) -> &str {
        &self.names[gen as usize]
    }

    pub fn index(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn symbols(&self) -> Vec<GeneratorSymbol> {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| GeneratorSymbol {
                id: i as u32,
                name: n.clone(),
            })
            .collect()
    }

    /// Alphabet with one extra generator appended.
    pub fn extended(&self, name: &str) -> Result<Self> {
        let mut names = self.names.clone();
        names.push(name.to_string());
        Alphabet::new(names)
    }

    /// Concatenation of two alphabets; names must be disjoint.
    pub fn joined(&self, other: &Alphabet) -> Result<Self> {
        Alphabet::new(self.names.iter().chain(other.names.iter()).cloned())
    }

    /// Fails with [`Error::UnknownSymbol`] if the word uses an index outside this alphabet.
    pub fn check(&self, w: &Word) -> Result<()> {
        match w.max_gen() {
            Some(g) if g as usize >= self.len() => Err(Error::UnknownSymbol(format!("#{g}"))),
            _ => Ok(()),
        }
    }

    pub fn format(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let parts: Vec<String> = w
            .letters()
            .iter()
            .map(|l| {
                let name = self
                    .names
                    .get(l.gen as usize)
                    .cloned()
                    .unwrap_or_else(|| format!("#{}", l.gen));
                if l.inverse {
                    format!("{name}^-1")
                } else {
                    name
                }
            })
            .collect();
        parts.join(" ")
    }

    pub fn display<'a>(&'a self, w: &'a Word) -> WordDisplay<'a> {
        WordDisplay { alphabet: self, word: w }
    }

    /// Parse `a b^-1 a`, `a^3`, `(a b)^-2`, `1`; juxtaposed single-letter
    /// names such as `ab` are split when every character is a generator.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut p = WordParser {
            alphabet: self,
            chars: text.char_indices().collect(),
            pos: 0,
        };
        let letters = p.sequence()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("generator name, `(` or end of word"));
        }
        Ok(free_reduce(letters))
    }
}

pub struct WordDisplay<'a> {
    alphabet: &'a Alphabet,
    word: &'a Word,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.format(self.word))
    }
}

struct WordParser<'a> {
    alphabet: &'a Alphabet,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl WordParser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace() || c == '*' || c == '·') {
            self.pos += 1;
        }
    }

    fn error(&self, expected: &str) -> Error {
        let found = match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of input".to_string(),
        };
        Error::Parse {
            line: 1,
            column: self.pos + 1,
            expected: expected.to_string(),
            found,
        }
    }

    fn sequence(&mut self) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_alphabetic() || c == '_' || c == '(' || c == '1' => {
                    let (prefix, atom) = self.atom()?;
                    let exp = self.exponent()?;
                    out.extend(prefix);
                    out.extend(free_reduce(atom).pow(exp).into_letters());
                }
                _ => return Ok(out),
            }
        }
    }

    /// Returns `(prefix, atom)`; a following exponent applies to `atom` only.
    fn atom(&mut self) -> Result<(Vec<Letter>, Vec<Letter>)> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.sequence()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("`)`"));
                }
                self.pos += 1;
                Ok((Vec::new(), inner))
            }
            Some('1') => {
                self.pos += 1;
                Ok((Vec::new(), Vec::new()))
            }
            _ => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.pos += 1;
                }
                let ident: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
                if let Some(g) = self.alphabet.index(&ident) {
                    return Ok((Vec::new(), vec![Letter::pos(g)]));
                }
                // juxtaposed one-character names, e.g. `abab`
                let split: Option<Vec<Letter>> = ident
                    .chars()
                    .map(|c| self.alphabet.index(&c.to_string()).map(Letter::pos))
                    .collect();
                match split {
                    Some(mut letters) => {
                        let last = letters.pop().into_iter().collect();
                        Ok((letters, last))
                    }
                    None => Err(Error::UnknownSymbol(ident)),
                }
            }
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        self.skip_ws_inline();
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws_inline();
        let mut negative = false;
        if matches!(self.peek(), Some('-') | Some('−')) {
            negative = true;
            self.pos += 1;
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("integer exponent"));
        }
        let digits: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        let v: i64 = digits.parse().map_err(|_| self.error("integer exponent"))?;
        Ok(if negative { -v } else { v })
    }

    fn skip_ws_inline(&mut self) {
        while self.peek().is_some_and(|c| c == ' ' || c == '\t') {
            self.pos += 1;
        }
    }
}

/// Number of freely reduced words of length exactly `len` over `k` generators.
pub fn reduced_word_count(k: usize, len: usize) -> u128 {
    if len == 0 {
        return 1;
    }
    if k == 0 {
        return 0;
    }
    let k = k as u128;
    2 * k * (2 * k - 1).pow(len as u32 - 1)
}

/// Iterator over all freely reduced words of length `1..=max_len` on `k`
/// generators, in length order and lexicographic within a length.
pub struct ReducedWords {
    k: u32,
    max_len: usize,
    current: Vec<u32>,
    done: bool,
}

pub fn enumerate_reduced(k: usize, max_len: usize) -> ReducedWords {
    ReducedWords {
        k: k as u32,
        max_len,
        current: Vec::new(),
        done: k == 0 || max_len == 0,
    }
}

impl ReducedWords {
    fn first_of_len(&mut self, len: usize) {
        self.current.clear();
        for i in 0..len {
            let v = self.smallest_after(i, 0);
            self.current.push(v);
        }
    }

    /// Smallest key ≥ `from` allowed at position `i` given the previous letter.
    fn smallest_after(&self, i: usize, from: u32) -> u32 {
        let mut v = from;
        if i > 0 {
            let forbidden = self.current[i - 1] ^ 1;
            if v == forbidden {
                v += 1;
            }
        }
        v
    }

    fn advance(&mut self) -> bool {
        let limit = 2 * self.k;
        let len = self.current.len();
        let mut i = len;
        while i > 0 {
            i -= 1;
            let next = self.smallest_after(i, self.current[i] + 1);
            if next < limit {
                self.current[i] = next;
                for j in i + 1..len {
                    let v = self.smallest_after(j, 0);
                    self.current[j] = v;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for ReducedWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        if self.current.is_empty() {
            self.first_of_len(1);
        } else if !self.advance() {
            let len = self.current.len() + 1;
            if len > self.max_len {
                self.done = true;
                return None;
            }
            self.first_of_len(len);
        }
        Some(Word(self.current.iter().map(|&k| Letter::from_key(k)).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn free_reduction_examples() {
        let a = ab();
        let raw = vec![Letter::pos(0), Letter::neg(0), Letter::pos(1)];
        assert_eq!(free_reduce(raw), a.parse_word("b").unwrap());
        assert_eq!(free_reduce(Vec::new()), Word::empty());
        let raw = vec![Letter::pos(0), Letter::pos(1), Letter::neg(1), Letter::neg(0)];
        assert!(free_reduce(raw).is_empty());
    }

    #[test]
    fn cyclic_reduction_examples() {
        let a = ab();
        let w = a.parse_word("a b a^-1").unwrap();
        assert_eq!(cyclic_reduce(&w), (a.parse_word("b").unwrap(), a.parse_word("a").unwrap()));
        let w = a.parse_word("a b").unwrap();
        assert_eq!(cyclic_reduce(&w), (w.clone(), Word::empty()));
        let w = a.parse_word("a b b a^-1").unwrap();
        assert_eq!(cyclic_reduce(&w), (a.parse_word("b b").unwrap(), a.parse_word("a").unwrap()));
    }

    #[test]
    fn enumeration_examples() {
        let a1 = Alphabet::new(["a"]).unwrap();
        let words: Vec<String> = enumerate_reduced(1, 2).map(|w| a1.format(&w)).collect();
        assert_eq!(words, ["a", "a^-1", "a a", "a^-1 a^-1"]);
        let a = ab();
        let words: Vec<String> = enumerate_reduced(2, 1).map(|w| a.format(&w)).collect();
        assert_eq!(words, ["a", "a^-1", "b", "b^-1"]);
        assert_eq!(enumerate_reduced(2, 2).count(), 16);
        assert_eq!(enumerate_reduced(0, 3).count(), 0);
        assert_eq!(enumerate_reduced(2, 0).count(), 0);
    }

    #[test]
    fn parse_and_display() {
        let a = ab();
        let w = a.parse_word("a b^-1 a").unwrap();
        assert_eq!(a.format(&w), "a b^-1 a");
        assert_eq!(a.parse_word("(a b)^2").unwrap(), a.parse_word("a b a b").unwrap());
        assert_eq!(a.parse_word("abab").unwrap(), a.parse_word("a b a b").unwrap());
        assert_eq!(a.parse_word("ab^-1").unwrap(), a.parse_word("a b^-1").unwrap());
        assert_eq!(a.parse_word("a^-2").unwrap(), a.parse_word("a^-1 a^-1").unwrap());
        assert_eq!(a.parse_word("1").unwrap(), Word::empty());
        assert_eq!(a.parse_word("").unwrap(), Word::empty());
        assert!(matches!(a.parse_word("a c"), Err(Error::UnknownSymbol(_))));
        assert!(matches!(a.parse_word("(a b"), Err(Error::Parse { .. })));
        assert_eq!(a.format(&Word::empty()), "1");
    }

    #[test]
    fn alphabet_rejects_bad_names() {
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(["1x"]).is_err());
        assert!(Alphabet::new(["s1", "t"]).is_ok());
    }
}
