//! Stallings automata for finitely generated subgroups of free groups.
//!
//! Folding carries a weight on every edge: a word over the subgroup's own
//! generators. Reading a closed path at the base multiplies those weights,
//! which yields a membership witness directly in the user-supplied
//! generators. A Schreier basis read off a spanning tree is kept alongside.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{Letter, Word};

/// Which generator alphabet a witness is written over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessBasis {
    UserGenerators,
    SchreierBasis,
}

/// An element written as a word in a subgroup's generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipWitness {
    pub expression: Word,
    pub basis: WitnessBasis,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Transition {
    target: usize,
    weight: Word,
    /// Schreier generator crossed by this transition (sign included).
    schreier: Option<Letter>,
}

#[derive(Clone, Debug)]
struct RawEdge {
    from: usize,
    to: usize,
    gen: u32,
    weight: Word,
    alive: bool,
}

/// Folded, deterministic automaton of a subgroup of the free group; state 0 is the base.
#[derive(Clone, Debug)]
pub struct StallingsAutomaton {
    ambient_rank: usize,
    user_gens: Vec<Word>,
    /// `trans[state][letter key]`
    trans: Vec<Vec<Option<Transition>>>,
    schreier_basis: Vec<Word>,
}

impl StallingsAutomaton {
    /// Fold the petals of `gens` into a Stallings automaton.
    pub fn build(gens: &[Word], ambient_rank: usize) -> Result<Self> {
        for g in gens {
            if g.is_empty() {
                return Err(Error::IdentityGeneratorWord);
            }
            if let Some(m) = g.max_gen() {
                if m as usize >= ambient_rank {
                    return Err(Error::UnknownSymbol(format!("#{m}")));
                }
            }
        }
        let mut edges: Vec<RawEdge> = Vec::new();
        let mut n_vertices = 1;
        for (i, g) in gens.iter().enumerate() {
            let letters = g.letters();
            let mut prev = 0;
            for (j, &l) in letters.iter().enumerate() {
                let last = j + 1 == letters.len();
                let next = if last {
                    0
                } else {
                    n_vertices += 1;
                    n_vertices - 1
                };
                let weight = if last { Word::generator(i as u32) } else { Word::empty() };
                // a negative letter is a positive edge traversed backwards
                let (from, to, weight) = if l.inverse {
                    (next, prev, weight.inverse())
                } else {
                    (prev, next, weight)
                };
                edges.push(RawEdge {
                    from,
                    to,
                    gen: l.gen,
                    weight,
                    alive: true,
                });
                prev = next;
            }
        }
        fold(&mut edges);
        Ok(Self::assemble(edges, n_vertices, gens.to_vec(), ambient_rank))
    }

    fn assemble(edges: Vec<RawEdge>, n_vertices: usize, user_gens: Vec<Word>, ambient_rank: usize) -> Self {
        let keys = 2 * ambient_rank;
        // adjacency over surviving edges
        let mut adj: Vec<Vec<(u32, usize, Word)>> = vec![Vec::new(); n_vertices];
        for e in edges.iter().filter(|e| e.alive) {
            adj[e.from].push((2 * e.gen, e.to, e.weight.clone()));
            adj[e.to].push((2 * e.gen + 1, e.from, e.weight.inverse()));
        }
        for a in &mut adj {
            a.sort_by_key(|&(k, _, _)| k);
        }
        // renumber reachable vertices breadth-first from the base
        let mut id = vec![usize::MAX; n_vertices];
        let mut order = vec![0usize];
        id[0] = 0;
        let mut tree_path = vec![Word::empty()];
        let mut tree_edge: HashMap<(usize, u32), ()> = HashMap::new();
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &(k, t, _) in &adj[v] {
                if id[t] == usize::MAX {
                    id[t] = order.len();
                    order.push(t);
                    let l = Letter::from_key(k);
                    let mut p = tree_path[id[v]].clone();
                    p.push(l);
                    tree_path.push(p);
                    // record the positive edge as a tree edge
                    let (src, gen) = if l.inverse { (t, l.gen) } else { (v, l.gen) };
                    tree_edge.insert((src, gen), ());
                }
            }
        }
        let n = order.len();
        let mut trans: Vec<Vec<Option<Transition>>> = vec![vec![None; keys]; n];
        let mut schreier_basis = Vec::new();
        let mut basis_index: HashMap<(usize, u32), u32> = HashMap::new();
        for &v in &order {
            for &(k, t, _) in &adj[v] {
                let l = Letter::from_key(k);
                if !l.inverse && !tree_edge.contains_key(&(v, l.gen)) {
                    let idx = schreier_basis.len() as u32;
                    basis_index.insert((v, l.gen), idx);
                    let mut word = tree_path[id[v]].clone();
                    word.push(l);
                    schreier_basis.push(word.mul(&tree_path[id[t]].inverse()));
                }
            }
        }
        for &v in &order {
            for (k, t, w) in &adj[v] {
                let l = Letter::from_key(*k);
                let schreier = if l.inverse {
                    basis_index.get(&(*t, l.gen)).map(|&i| Letter::neg(i))
                } else {
                    basis_index.get(&(v, l.gen)).map(|&i| Letter::pos(i))
                };
                trans[id[v]][*k as usize] = Some(Transition {
                    target: id[*t],
                    weight: w.clone(),
                    schreier,
                });
            }
        }
        StallingsAutomaton {
            ambient_rank,
            user_gens,
            trans,
            schreier_basis,
        }
    }

    pub fn states(&self) -> usize {
        self.trans.len()
    }

    /// Number of positive edges.
    pub fn edge_count(&self) -> usize {
        self.trans
            .iter()
            .flat_map(|t| t.iter().step_by(2))
            .filter(|t| t.is_some())
            .count()
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    /// Rank of the subgroup as a free group.
    pub fn rank(&self) -> usize {
        self.schreier_basis.len()
    }

    pub fn user_generators(&self) -> &[Word] {
        &self.user_gens
    }

    pub fn schreier_basis(&self) -> &[Word] {
        &self.schreier_basis
    }

    /// Whether the user generator list is a free basis of the subgroup.
    pub fn user_list_is_basis(&self) -> bool {
        self.rank() == self.user_gens.len()
    }

    fn trace(&self, w: &Word) -> Option<Vec<&Transition>> {
        let mut state = 0;
        let mut path = Vec::with_capacity(w.len());
        for l in w.letters() {
            let t = self.trans[state].get(l.key() as usize)?.as_ref()?;
            path.push(t);
            state = t.target;
        }
        (state == 0).then_some(path)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.trace(w).is_some()
    }

    /// Witness over the user-supplied generators.
    pub fn express(&self, w: &Word) -> Result<MembershipWitness> {
        let path = self
            .trace(w)
            .ok_or_else(|| Error::NotMember(format!("{w:?}")))?;
        let mut expr = Word::empty();
        for t in path {
            expr = expr.mul(&t.weight);
        }
        Ok(MembershipWitness {
            expression: expr,
            basis: WitnessBasis::UserGenerators,
        })
    }

    /// Witness over the Schreier basis of the spanning tree.
    pub fn express_schreier(&self, w: &Word) -> Result<MembershipWitness> {
        let path = self
            .trace(w)
            .ok_or_else(|| Error::NotMember(format!("{w:?}")))?;
        let expr = path.iter().filter_map(|t| t.schreier).collect();
        Ok(MembershipWitness {
            expression: expr,
            basis: WitnessBasis::SchreierBasis,
        })
    }

    /// True iff the subgroup is the whole free group.
    pub fn is_whole_group(&self) -> bool {
        self.states() == 1 && self.trans[0].iter().all(|t| t.is_some())
    }
}

/// Fold until deterministic. The base vertex 0 is never gauged, so weights
/// of closed paths at the base keep evaluating to the path label.
fn fold(edges: &mut [RawEdge]) {
    loop {
        let mut seen: HashMap<(usize, u32), (usize, bool)> = HashMap::new();
        let mut conflict = None;
        'scan: for (i, e) in edges.iter().enumerate().filter(|(_, e)| e.alive) {
            for backward in [false, true] {
                let (v, key) = if backward {
                    (e.to, 2 * e.gen + 1)
                } else {
                    (e.from, 2 * e.gen)
                };
                if let Some(&prev) = seen.get(&(v, key)) {
                    conflict = Some((v, prev, (i, backward)));
                    break 'scan;
                }
                seen.insert((v, key), (i, backward));
            }
        }
        let Some((_, h1, h2)) = conflict else {
            return;
        };
        let half = |edges: &[RawEdge], (i, backward): (usize, bool)| -> (usize, Word) {
            let e = &edges[i];
            if backward {
                (e.from, e.weight.inverse())
            } else {
                (e.to, e.weight.clone())
            }
        };
        let (q1, w1) = half(edges, h1);
        let (q2, w2) = half(edges, h2);
        if q1 == q2 {
            // parallel edges; differing weights mean the user list is redundant
            edges[h2.0].alive = false;
            continue;
        }
        let (keep, absorb, wk, wa, drop) = if q2 == 0 {
            (q2, q1, w2, w1, h1.0)
        } else {
            (q1, q2, w1, w2, h2.0)
        };
        let g = wk.inverse().mul(&wa);
        let g_inv = g.inverse();
        for e in edges.iter_mut().filter(|e| e.alive) {
            if e.from == absorb {
                e.weight = g.mul(&e.weight);
            }
            if e.to == absorb {
                e.weight = e.weight.mul(&g_inv);
            }
        }
        for e in edges.iter_mut().filter(|e| e.alive) {
            if e.from == absorb {
                e.from = keep;
            }
            if e.to == absorb {
                e.to = keep;
            }
        }
        edges[drop].alive = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{enumerate_reduced, Alphabet};

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn words(a: &Alphabet, ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|w| a.parse_word(w).unwrap()).collect()
    }

    #[test]
    fn cyclic_subgroup() {
        let a = ab();
        let aut = StallingsAutomaton::build(&words(&a, &["a"]), 2).unwrap();
        assert_eq!(aut.states(), 1);
        assert_eq!(aut.edge_count(), 1);
        assert!(aut.contains(&a.parse_word("a a a").unwrap()));
        assert!(!aut.contains(&a.parse_word("b").unwrap()));
        let wit = aut.express(&a.parse_word("a^3").unwrap()).unwrap();
        assert_eq!(wit.expression, Word::power_of(0, 3));
    }

    #[test]
    fn two_petals() {
        let a = ab();
        let aut = StallingsAutomaton::build(&words(&a, &["a^2", "a b a^-1"]), 2).unwrap();
        // both petals start with `a` and fold onto one vertex
        assert_eq!(aut.states(), 2);
        assert_eq!(aut.edge_count(), 3);
        assert!(aut.contains(&a.parse_word("a b a^-1").unwrap()));
        assert!(!aut.contains(&a.parse_word("a").unwrap()));
        let w = a.parse_word("a b a^-1 a^2").unwrap();
        assert!(aut.contains(&w));
        let wit = aut.express(&w).unwrap();
        // generator2 · generator1
        assert_eq!(wit.expression, Word::from_iter([Letter::pos(1), Letter::pos(0)]));
        assert!(aut.user_list_is_basis());
    }

    #[test]
    fn whole_group_and_proper() {
        let a = ab();
        let whole = StallingsAutomaton::build(&words(&a, &["a", "b"]), 2).unwrap();
        assert!(whole.is_whole_group());
        for w in enumerate_reduced(2, 5) {
            assert!(whole.contains(&w));
        }
        let k = StallingsAutomaton::build(&words(&a, &["a", "b a b"]), 2).unwrap();
        assert!(!k.is_whole_group());
        assert!(!k.contains(&a.parse_word("b").unwrap()));
        let wit = k.express(&a.parse_word("b a b").unwrap()).unwrap();
        assert_eq!(wit.expression, Word::generator(1));
    }

    #[test]
    fn redundant_list_is_not_a_basis() {
        let a = ab();
        let aut = StallingsAutomaton::build(&words(&a, &["a", "a^2", "b"]), 2).unwrap();
        assert!(!aut.user_list_is_basis());
        assert_eq!(aut.rank(), 2);
        // witnesses still evaluate correctly
        let gens = aut.user_generators().to_vec();
        for w in enumerate_reduced(2, 4) {
            let wit = aut.express(&w).unwrap();
            assert_eq!(wit.expression.substitute(&gens), w);
        }
    }

    #[test]
    fn trivial_subgroup() {
        let aut = StallingsAutomaton::build(&[], 2).unwrap();
        assert_eq!(aut.states(), 1);
        assert!(aut.contains(&Word::empty()));
        assert!(!aut.contains(&Word::generator(0)));
        assert!(matches!(
            StallingsAutomaton::build(&[Word::empty()], 2),
            Err(Error::IdentityGeneratorWord)
        ));
    }

    #[test]
    fn schreier_witnesses_evaluate() {
        let a = ab();
        let aut = StallingsAutomaton::build(&words(&a, &["a^2", "a b a^-1", "b^3"]), 2).unwrap();
        let basis = aut.schreier_basis().to_vec();
        for w in enumerate_reduced(2, 6).filter(|w| aut.contains(w)) {
            let wit = aut.express_schreier(&w).unwrap();
            assert_eq!(wit.expression.substitute(&basis), w);
        }
    }
}
