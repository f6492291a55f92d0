//! Generating sets that avoid a pair of proper subgroups.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::{CayleyTable, ElementSet};
use crate::oracles::{Element, GroupKind, GroupOracle};
use crate::subgroups::SubgroupHandle;
use crate::words::enumerate_reduced;

/// Group orders up to which property (P) is cross-validated exhaustively.
pub const CROSS_VALIDATION_LIMIT: usize = 24;
/// Word length bound for the pair search in infinite groups.
const PAIR_SEARCH_LEN: usize = 6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GensetProfile {
    /// `|S ∩ (A ∖ B)|`
    pub alpha: usize,
    /// `|S ∩ (B ∖ A)|`
    pub beta: usize,
    /// `|S ∩ A ∩ B|`
    pub gamma: usize,
    /// `|S ∖ (A ∪ B)|`
    pub delta: usize,
}

impl GensetProfile {
    pub fn intersection(&self) -> usize {
        self.alpha + self.beta + self.gamma
    }

    /// At most one element in `A ∪ B` and `min(α, β) = 0`.
    pub fn nearly_avoiding(&self) -> bool {
        self.intersection() <= 1 && self.alpha.min(self.beta) == 0
    }
}

fn classify(a_in: bool, b_in: bool, p: &mut GensetProfile) {
    match (a_in, b_in) {
        (true, false) => p.alpha += 1,
        (false, true) => p.beta += 1,
        (true, true) => p.gamma += 1,
        (false, false) => p.delta += 1,
    }
}

pub fn profile(g: &GroupOracle, a: &SubgroupHandle, b: &SubgroupHandle, s: &[Element]) -> Result<GensetProfile> {
    let mut p = GensetProfile::default();
    for (i, x) in s.iter().enumerate() {
        if s[..i].contains(x) {
            return Err(Error::DuplicateElement(g.format_element(x)));
        }
        classify(a.contains(x), b.contains(x), &mut p);
    }
    Ok(p)
}

fn profile_sets(s: &[usize], a: &ElementSet, b: &ElementSet) -> GensetProfile {
    let mut p = GensetProfile::default();
    for &x in s {
        classify(a.contains(x), b.contains(x), &mut p);
    }
    p
}

/// Result of replacing `s₁` by `s₁s₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveOutcome {
    pub set: Vec<Element>,
    /// `s₁s₂ ∉ A ∪ B`, so `δ` grew by one.
    pub delta_increased: bool,
}

pub fn claim1_move(
    g: &GroupOracle,
    a: &SubgroupHandle,
    b: &SubgroupHandle,
    s: &[Element],
    s1: &Element,
    s2: &Element,
) -> Result<MoveOutcome> {
    let i1 = s
        .iter()
        .position(|x| x == s1)
        .ok_or_else(|| Error::PreconditionViolated("s1 is not in S".into()))?;
    if !s.contains(s2) {
        return Err(Error::PreconditionViolated("s2 is not in S".into()));
    }
    if !a.contains(s1) || b.contains(s1) {
        return Err(Error::PreconditionViolated("s1 is not in A ∖ B".into()));
    }
    if !b.contains(s2) || a.contains(s2) {
        return Err(Error::PreconditionViolated("s2 is not in B ∖ A".into()));
    }
    let prod = g.mul(s1, s2);
    let delta_increased = !a.contains(&prod) && !b.contains(&prod);
    let mut set = s.to_vec();
    set[i1] = prod;
    Ok(MoveOutcome { set, delta_increased })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AvoidOutcome {
    Found(Vec<Element>),
    /// `G ∖ (A ∪ B)` does not generate; the group maps onto the Klein four-group.
    KleinObstruction,
}

fn finite_parts<'a>(
    g: &'a GroupOracle,
    a: &'a SubgroupHandle,
    b: &'a SubgroupHandle,
) -> Result<(&'a CayleyTable, &'a ElementSet, &'a ElementSet)> {
    let f = g
        .finite_group()
        .ok_or_else(|| Error::Unsupported("avoiding generating sets need a finite group".into()))?;
    let (Some(sa), Some(sb)) = (a.finite_elements(), b.finite_elements()) else {
        return Err(Error::Unsupported("subgroups of a different group".into()));
    };
    if !a.is_proper() || !b.is_proper() {
        return Err(Error::SubgroupNotProper(if a.is_proper() { "B" } else { "A" }.into()));
    }
    Ok((f.table(), sa, sb))
}

/// Complement elements sorted by order descending, then index.
fn complement_candidates(t: &CayleyTable, a: &ElementSet, b: &ElementSet) -> Vec<usize> {
    let mut c: Vec<usize> = (0..t.order()).filter(|&x| !a.contains(x) && !b.contains(x)).collect();
    c.sort_by_key(|&x| (std::cmp::Reverse(t.element_order(x)), x));
    c
}

/// Greedy generating subset of `G ∖ (A ∪ B)`, when that set generates.
pub fn avoid_sets(t: &CayleyTable, a: &ElementSet, b: &ElementSet) -> Option<Vec<usize>> {
    let c = complement_candidates(t, a, b);
    if !t.generates(c.iter().copied()) {
        return None;
    }
    Some(t.greedy_generators(&c, &t.full_set()))
}

pub fn find_avoiding_genset(g: &GroupOracle, a: &SubgroupHandle, b: &SubgroupHandle) -> Result<AvoidOutcome> {
    let (t, sa, sb) = finite_parts(g, a, b)?;
    match avoid_sets(t, sa, sb) {
        Some(s) => Ok(AvoidOutcome::Found(s.into_iter().map(Element::Finite).collect())),
        None => {
            if !g.klein_four_quotient_exists()? {
                return Err(Error::CrossValidationFailed(
                    "complement does not generate but there is no Klein four quotient".into(),
                ));
            }
            Ok(AvoidOutcome::KleinObstruction)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NearlyStrategy {
    Avoid,
    HillClimb,
    SingleExtra,
    PairSearch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NearlyAvoiding {
    pub set: Vec<Element>,
    pub profile: GensetProfile,
    pub strategy: NearlyStrategy,
}

/// Nielsen moves `sᵢ ← sᵢ sⱼ^{±1}` or `sⱼ^{±1} sᵢ`, plus the `δ`-raising
/// product move, accepted while `δ` grows. At most `|G|²` moves.
fn hill_climb(t: &CayleyTable, a: &ElementSet, b: &ElementSet) -> Option<Vec<usize>> {
    let mut all: Vec<usize> = (1..t.order()).collect();
    all.sort_by_key(|&x| (std::cmp::Reverse(t.element_order(x)), x));
    let mut s = t.greedy_generators(&all, &t.full_set());
    let budget = t.order() * t.order();
    for _ in 0..budget {
        let p = profile_sets(&s, a, b);
        if p.nearly_avoiding() {
            return Some(s);
        }
        let mut improved = false;
        'search: for i in 0..s.len() {
            for j in 0..s.len() {
                if i == j {
                    continue;
                }
                let (x, y) = (s[i], s[j]);
                for cand in [t.mul(x, y), t.mul(x, t.inv(y)), t.mul(y, x), t.mul(t.inv(y), x)] {
                    if cand == 0 || s.contains(&cand) {
                        continue;
                    }
                    let mut next = s.clone();
                    next[i] = cand;
                    if profile_sets(&next, a, b).delta > p.delta {
                        s = next;
                        improved = true;
                        break 'search;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    let p = profile_sets(&s, a, b);
    p.nearly_avoiding().then_some(s)
}

/// Greedy complement generators plus a single element of `A ∪ B`.
fn single_extra(t: &CayleyTable, a: &ElementSet, b: &ElementSet) -> Option<Vec<usize>> {
    let c = complement_candidates(t, a, b);
    let union = a.union(b);
    for x in union.iter().filter(|&x| x != 0) {
        let mut cands = vec![x];
        cands.extend(c.iter().copied());
        if t.generates(cands.iter().copied()) {
            return Some(t.greedy_generators(&cands, &t.full_set()));
        }
    }
    None
}

pub fn find_nearly_avoiding_genset(g: &GroupOracle, a: &SubgroupHandle, b: &SubgroupHandle) -> Result<NearlyAvoiding> {
    let result = match g.kind() {
        GroupKind::Finite(_) => finite_nearly(g, a, b)?,
        GroupKind::Dihedral { .. } | GroupKind::FreeAbelian { rank: 1 | 2 } => pair_search(g, a, b)?,
        _ => {
            return Err(Error::Unsupported(format!(
                "nearly avoiding search is not available for {}",
                g.describe()
            )))
        }
    };
    // independent re-check of both conditions
    let p = profile(g, a, b, &result.set)?;
    if p != result.profile || !p.nearly_avoiding() {
        return Err(Error::CrossValidationFailed("profile re-check failed".into()));
    }
    Ok(result)
}

fn finite_nearly(g: &GroupOracle, a: &SubgroupHandle, b: &SubgroupHandle) -> Result<NearlyAvoiding> {
    let (t, sa, sb) = finite_parts(g, a, b)?;
    let attempts: [(NearlyStrategy, fn(&CayleyTable, &ElementSet, &ElementSet) -> Option<Vec<usize>>); 3] = [
        (NearlyStrategy::Avoid, avoid_sets),
        (NearlyStrategy::HillClimb, hill_climb),
        (NearlyStrategy::SingleExtra, single_extra),
    ];
    for (strategy, f) in attempts {
        if let Some(s) = f(t, sa, sb) {
            let profile = profile_sets(&s, sa, sb);
            if profile.nearly_avoiding() && t.generates(s.iter().copied()) {
                return Ok(NearlyAvoiding {
                    set: s.into_iter().map(Element::Finite).collect(),
                    profile,
                    strategy,
                });
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "no generating set with at most one element in A ∪ B for {}",
        g.describe()
    )))
}

/// Pairs of distinct elements of word length `≤ 6`, first avoiding `A ∪ B`
/// entirely, then meeting it once.
fn pair_search(g: &GroupOracle, a: &SubgroupHandle, b: &SubgroupHandle) -> Result<NearlyAvoiding> {
    if !a.is_proper() || !b.is_proper() {
        return Err(Error::SubgroupNotProper(if a.is_proper() { "B" } else { "A" }.into()));
    }
    let mut cands: Vec<Element> = Vec::new();
    for w in enumerate_reduced(g.rank(), PAIR_SEARCH_LEN) {
        let x = g.normal_form(&w)?;
        if !g.is_one(&x) && !cands.contains(&x) {
            cands.push(x);
        }
    }
    let words: Vec<_> = cands.iter().map(|x| g.element_word(x)).collect();
    for allowed in 0..=1 {
        for i in 0..cands.len() {
            for j in i + 1..cands.len() {
                let set = vec![cands[i].clone(), cands[j].clone()];
                let p = profile(g, a, b, &set)?;
                if p.intersection() != allowed || !p.nearly_avoiding() {
                    continue;
                }
                let h = SubgroupHandle::new(g, vec![words[i].clone(), words[j].clone()])?;
                if !h.is_proper() {
                    return Ok(NearlyAvoiding {
                        set,
                        profile: p,
                        strategy: NearlyStrategy::PairSearch,
                    });
                }
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "no generating pair of word length at most {PAIR_SEARCH_LEN}"
    )))
}

/// Every pair of proper subgroups admits an avoiding generating set.
pub fn property_p_exhaustive(t: &CayleyTable) -> bool {
    let subs: Vec<ElementSet> = t.subgroups().into_iter().filter(|h| h.len() < t.order()).collect();
    (0..subs.len()).all(|i| (i..subs.len()).all(|j| avoid_sets(t, &subs[i], &subs[j]).is_some()))
}

/// Property (P): no Klein four quotient. Cross-validated exhaustively for
/// groups of order at most 24.
pub fn has_property_p(g: &GroupOracle) -> Result<bool> {
    let f = g
        .finite_group()
        .ok_or_else(|| Error::Unsupported("property (P) is decided for finite groups".into()))?;
    let by_quotient = !g.klein_four_quotient_exists()?;
    if f.table().order() <= CROSS_VALIDATION_LIMIT {
        let exhaustive = property_p_exhaustive(f.table());
        if exhaustive != by_quotient {
            return Err(Error::CrossValidationFailed(format!(
                "{}: quotient test says {by_quotient}, exhaustive sweep says {exhaustive}",
                f.label()
            )));
        }
    }
    Ok(by_quotient)
}

/// Whether the group is a union of three proper subgroups.
pub fn three_subgroup_cover_exists(t: &CayleyTable) -> bool {
    let subs = t.subgroups();
    let proper: Vec<&ElementSet> = subs.iter().filter(|h| h.len() < t.order()).collect();
    // enlarging a cover keeps it a cover, so maximal subgroups suffice
    let maximal: Vec<&ElementSet> = proper
        .iter()
        .filter(|h| !proper.iter().any(|k| k.len() > h.len() && h.is_subset(k)))
        .copied()
        .collect();
    let n = maximal.len();
    for i in 0..n {
        for j in i..n {
            let ij = maximal[i].union(maximal[j]);
            for k in j..n {
                if ij.union(maximal[k]).len() == t.order() {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::builders;
    use std::sync::Arc;

    fn finite(b: (CayleyTable, Vec<usize>), label: &str) -> GroupOracle {
        GroupOracle::finite(Arc::new(b.0), b.1, label).unwrap()
    }

    fn elems(g: &GroupOracle, words: &[&str]) -> Vec<Element> {
        words.iter().map(|w| g.parse_element(w).unwrap()).collect()
    }

    #[test]
    fn profiles() {
        let d = GroupOracle::infinite_dihedral();
        let k = SubgroupHandle::parse(&d, "a, b a b").unwrap();
        let l = SubgroupHandle::parse(&d, "b, a b a").unwrap();
        let p = profile(&d, &k, &l, &elems(&d, &["a", "b"])).unwrap();
        assert_eq!(p, GensetProfile { alpha: 1, beta: 1, gamma: 0, delta: 0 });
        assert!(matches!(
            profile(&d, &k, &l, &elems(&d, &["a", "a^-1"])),
            Err(Error::DuplicateElement(_))
        ));
        let z2 = GroupOracle::free_abelian(2);
        let a = SubgroupHandle::parse(&z2, "b^-1").unwrap();
        let b = SubgroupHandle::parse(&z2, "a b^-1").unwrap();
        let p = profile(&z2, &a, &b, &elems(&z2, &["a", "b"])).unwrap();
        assert_eq!(p, GensetProfile { alpha: 1, beta: 0, gamma: 0, delta: 1 });
    }

    #[test]
    fn claim_one() {
        let d = GroupOracle::infinite_dihedral();
        let k = SubgroupHandle::parse(&d, "a, b a b").unwrap();
        let l = SubgroupHandle::parse(&d, "b, a b a").unwrap();
        let s = elems(&d, &["a", "b"]);
        let out = claim1_move(&d, &k, &l, &s, &s[0], &s[1]).unwrap();
        assert!(out.delta_increased);
        assert_eq!(out.set, elems(&d, &["a b", "b"]));
        let words: Vec<_> = out.set.iter().map(|x| d.element_word(x)).collect();
        assert!(!SubgroupHandle::new(&d, words).unwrap().is_proper());
        assert!(claim1_move(&d, &k, &l, &s, &s[1], &s[0]).is_err());
    }

    #[test]
    fn avoiding_examples() {
        let s3 = finite(builders::symmetric(3), "S3");
        let t = s3.finite_group().unwrap().table().clone();
        let invs: Vec<usize> = (0..6).filter(|&x| t.element_order(x) == 2).collect();
        let a = SubgroupHandle::from_elements(&s3, &[invs[0]]).unwrap();
        let b = SubgroupHandle::from_elements(&s3, &[invs[1]]).unwrap();
        let AvoidOutcome::Found(s) = find_avoiding_genset(&s3, &a, &b).unwrap() else {
            panic!("expected an avoiding set")
        };
        assert_eq!(profile(&s3, &a, &b, &s).unwrap().delta, s.len());
        let idx: Vec<usize> = s.iter().map(|x| x.finite_index().unwrap()).collect();
        assert!(t.generates(idx));

        let v4 = finite(builders::product(builders::cyclic(2), builders::cyclic(2)), "V4");
        let a = SubgroupHandle::parse(&v4, "a").unwrap();
        let b = SubgroupHandle::parse(&v4, "b").unwrap();
        assert_eq!(find_avoiding_genset(&v4, &a, &b).unwrap(), AvoidOutcome::KleinObstruction);
        let n = find_nearly_avoiding_genset(&v4, &a, &b).unwrap();
        assert!(n.profile.nearly_avoiding());

        let c5 = finite(builders::cyclic(5), "C5");
        let triv = SubgroupHandle::parse(&c5, "").unwrap();
        assert_eq!(
            find_avoiding_genset(&c5, &triv, &triv).unwrap(),
            AvoidOutcome::Found(vec![Element::Finite(1)])
        );
        let whole = SubgroupHandle::parse(&c5, "a").unwrap();
        assert!(matches!(
            find_avoiding_genset(&c5, &whole, &triv),
            Err(Error::SubgroupNotProper(_))
        ));
    }

    #[test]
    fn nearly_avoiding_infinite() {
        let d = GroupOracle::infinite_dihedral();
        let k = SubgroupHandle::parse(&d, "a, b a b").unwrap();
        let l = SubgroupHandle::parse(&d, "b, a b a").unwrap();
        let n = find_nearly_avoiding_genset(&d, &k, &l).unwrap();
        assert_eq!(n.set, elems(&d, &["a", "a b"]));
        assert_eq!(n.profile, GensetProfile { alpha: 1, beta: 0, gamma: 0, delta: 1 });
        let z2 = GroupOracle::free_abelian(2);
        let a = SubgroupHandle::parse(&z2, "b^-1").unwrap();
        let b = SubgroupHandle::parse(&z2, "a b^-1").unwrap();
        let n = find_nearly_avoiding_genset(&z2, &a, &b).unwrap();
        assert_eq!(n.set, elems(&z2, &["a", "a b"]));
        assert_eq!(n.profile.delta, 2);
    }

    #[test]
    fn property_p() {
        assert!(has_property_p(&finite(builders::symmetric(3), "S3")).unwrap());
        assert!(!has_property_p(&finite(builders::dihedral(4), "D4")).unwrap());
        assert!(has_property_p(&finite(builders::cyclic(7), "C7")).unwrap());
    }

    #[test]
    fn three_subgroup_covers() {
        assert!(three_subgroup_cover_exists(&builders::dihedral(4).0));
        assert!(!three_subgroup_cover_exists(&builders::symmetric(3).0));
        assert!(three_subgroup_cover_exists(&builders::dicyclic(2).0));
    }
}
