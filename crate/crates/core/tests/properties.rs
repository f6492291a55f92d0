//! Property tests for invariants that hold on every input.

use std::collections::BTreeSet;

use girthlab_core::dsl::{parse_spec, Spec};
use girthlab_core::girth::{girth_exact, GirthCertificate, GirthQuery, Target};
use girthlab_core::hnn::HnnPresentation;
use girthlab_core::stallings::StallingsAutomaton;
use girthlab_core::subgroups::{Lattice, SubgroupHandle};
use girthlab_core::words::free_reduce;
use girthlab_core::{Alphabet, Element, GroupOracle, Letter, Word};
use proptest::prelude::*;

fn arb_word(rank: u32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank, any::<bool>()), 0..=max_len).prop_map(|ls| {
        ls.into_iter()
            .map(|(g, inv)| if inv { Letter::neg(g) } else { Letter::pos(g) })
            .collect()
    })
}

/// Unreduced letter sequences, to exercise reduction.
fn arb_letters(rank: u32, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..rank, any::<bool>()), 0..=max_len)
        .prop_map(|ls| ls.into_iter().map(|(g, inv)| if inv { Letter::neg(g) } else { Letter::pos(g) }).collect())
}

fn hnn(text: &str) -> HnnPresentation {
    match parse_spec(text).unwrap() {
        Spec::Hnn(p) => p,
        _ => unreachable!(),
    }
}

const BS12: &str = "hnn base=(free rank=1) A=(subgroup gens=\"a\") B=(subgroup gens=\"a^2\") phi=\"a -> a^2\" stable=t";
const F2_HNN: &str = "hnn base=(free rank=2) A=(subgroup gens=\"a\") B=(subgroup gens=\"b\") phi=\"a -> b\" stable=t";

/// `BS(1,2)` as maps `x ↦ 2^e x + n / 2^64`; `t⁻¹ a t = a²`.
fn affine(w: &Word) -> (i32, i128) {
    let mut acc = (0i32, 0i128);
    for l in w.letters() {
        let m = match (l.gen, l.inverse) {
            (0, false) => (0, 1i128 << 64),
            (0, true) => (0, -(1i128 << 64)),
            (_, false) => (-1, 0),
            (_, true) => (1, 0),
        };
        let scaled = if acc.0 >= 0 { m.1 << acc.0 } else { m.1 >> -acc.0 };
        acc = (acc.0 + m.0, scaled + acc.1);
    }
    acc
}

/// The extension of `F(a, b)` by `t⁻¹ a t = b` is free on `a, t`.
fn f2_hnn_image(w: &Word) -> Word {
    free_reduce(w.letters().iter().flat_map(|l| {
        if l.gen == 1 {
            vec![Letter::neg(2), if l.inverse { Letter::neg(0) } else { Letter::pos(0) }, Letter::pos(2)]
        } else {
            vec![*l]
        }
    }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reduction_is_idempotent_and_inverse_cancels(ls in arb_letters(3, 20)) {
        let w = free_reduce(ls.iter().copied());
        prop_assert_eq!(free_reduce(w.letters().iter().copied()), w.clone());
        prop_assert!(w.letters().windows(2).all(|p| !p[0].cancels(p[1])));
        prop_assert!(w.mul(&w.inverse()).is_empty());
        prop_assert_eq!(w.inverse().inverse(), w.clone());
        prop_assert!(w.len() <= ls.len() && (ls.len() - w.len()) % 2 == 0);
    }

    #[test]
    fn words_format_then_parse(w in arb_word(3, 15)) {
        let alphabet = Alphabet::new(["a", "b", "t"]).unwrap();
        let w = free_reduce(w.letters().iter().copied());
        prop_assert_eq!(alphabet.parse_word(&alphabet.format(&w)).unwrap(), w);
    }

    #[test]
    fn stallings_contains_products_and_expresses_them(
        gens in prop::collection::vec(arb_word(2, 4), 1..4),
        expr in arb_word(3, 8),
    ) {
        let gens: Vec<Word> = gens.into_iter().filter(|g| !g.is_empty()).collect();
        prop_assume!(!gens.is_empty());
        let aut = StallingsAutomaton::build(&gens, 2).unwrap();
        let expr: Word = expr.letters().iter().filter(|l| (l.gen as usize) < gens.len()).copied().collect();
        let w = expr.substitute(&gens);
        prop_assert!(aut.contains(&w));
        prop_assert!(aut.contains(&w.inverse()));
        let user = aut.express(&w).unwrap();
        prop_assert_eq!(user.expression.substitute(aut.user_generators()), w.clone());
        let schreier = aut.express_schreier(&w).unwrap();
        prop_assert_eq!(schreier.expression.substitute(aut.schreier_basis()), w);
    }

    #[test]
    fn lattice_membership_matches_box_search(
        g1 in (-4i64..=4, -4i64..=4),
        g2 in (-4i64..=4, -4i64..=4),
        x in (-10i64..=10, -10i64..=10),
    ) {
        let gens = vec![vec![g1.0, g1.1], vec![g2.0, g2.1]];
        let lat = Lattice::new(&gens, 2);
        let target = [x.0, x.1];
        match lat.solve(&target) {
            Some(c) => {
                prop_assert_eq!(c[0] * g1.0 + c[1] * g2.0, x.0);
                prop_assert_eq!(c[0] * g1.1 + c[1] * g2.1, x.1);
            }
            None => {
                // by Cramer, a member of a full-rank lattice has coefficients within 80
                let det = g1.0 * g2.1 - g1.1 * g2.0;
                if det != 0 {
                    for p in -80i64..=80 {
                        for q in -80i64..=80 {
                            prop_assert!(p * g1.0 + q * g2.0 != x.0 || p * g1.1 + q * g2.1 != x.1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dihedral_gmn_matches_closure(q in 2u64..=12, m in 0u64..12, n in 0u64..12) {
        let d = GroupOracle::dihedral(Some(q)).unwrap();
        let h = SubgroupHandle::gmn(&d, m, n).unwrap();
        let mut members: BTreeSet<Element> = BTreeSet::from([d.identity()]);
        let gens = h.generator_elements();
        loop {
            let next: BTreeSet<Element> = members
                .iter()
                .flat_map(|x| gens.iter().map(move |g| (x, g)))
                .map(|(x, g)| d.mul(x, g))
                .collect();
            let before = members.len();
            members.extend(next);
            if members.len() == before {
                break;
            }
        }
        let elements: Vec<Element> = (0..q as i64)
            .flat_map(|k| [0u8, 1].map(|f| d.normal_form(&rotation(k, f)).unwrap()))
            .collect();
        for x in &elements {
            prop_assert_eq!(h.contains(x), members.contains(x), "{:?}", x);
        }
        prop_assert_eq!(h.order(), Some(members.len()));
    }

    #[test]
    fn britton_reduction_preserves_bs12_elements(w in arb_word(2, 14)) {
        let p = hnn(BS12);
        let e = p.from_word(&w).unwrap();
        let r = p.britton_reduce(&e).unwrap();
        prop_assert_eq!(affine(&p.to_word(&r)), affine(&w));
        prop_assert_eq!(p.is_identity_word(&w).unwrap(), affine(&w) == (0, 0));
        let asc = p.ascending_normal_form(&e).unwrap();
        let asc_word = Word::power_of(1, asc.p as i64)
            .mul(&p.base().element_word(&asc.g))
            .mul(&Word::power_of(1, -(asc.q as i64)));
        prop_assert_eq!(affine(&asc_word), affine(&w));
    }

    #[test]
    fn britton_reduction_preserves_f2_hnn_elements(w in arb_word(3, 14)) {
        let p = hnn(F2_HNN);
        let e = p.from_word(&w).unwrap();
        let r = p.britton_reduce(&e).unwrap();
        prop_assert_eq!(f2_hnn_image(&p.to_word(&r)), f2_hnn_image(&w));
        prop_assert_eq!(p.is_identity_word(&w).unwrap(), f2_hnn_image(&w).is_empty());
        let x = p.from_word(&w).unwrap();
        let prod = p.mul(&x, &p.inverse(&x)).unwrap();
        prop_assert!(p.is_identity(&prod).unwrap());
    }

    #[test]
    fn girth_ignores_generator_order(group in 0usize..6, picks in prop::collection::vec(1usize..24, 2)) {
        let name = ["S3", "D5", "Q8", "A4", "C2xC4", "Dic3"][group];
        let g = girthlab_core::corpus::builtin_oracle(name, None).unwrap();
        let f = g.finite_group().unwrap();
        let n = f.table().order();
        let (x, y) = (picks[0] % n, picks[1] % n);
        prop_assume!(x != 0 && y != 0 && x != y);
        let run = |s: [usize; 2]| {
            let gens = s.iter().map(|&i| f.word_of(i).clone()).collect();
            girth_exact(&GirthQuery::new(Target::Base(g.clone()), gens, Some(8)).unwrap()).unwrap()
        };
        let (c1, c2) = (run([x, y]), run([y, x]));
        prop_assert_eq!(c1.value(), c2.value());
        prop_assert_eq!(c1.lower_bound(), c2.lower_bound());
        // a certificate survives serialization unchanged
        let json = serde_json::to_string(&c1).unwrap();
        let back: GirthCertificate = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }

    #[test]
    fn spec_describe_parses_back(kind in 0usize..4, n in 1usize..5, q in 2u64..30) {
        let text = match kind {
            0 => format!("free rank={n}"),
            1 => format!("abelian rank={n}"),
            2 => format!("dihedral q={q}"),
            _ => "dihedral q=inf".to_string(),
        };
        let once = parse_spec(&text).unwrap().describe();
        prop_assert_eq!(parse_spec(&once).unwrap().describe(), once);
    }
}

/// `(ab)^k a^f`.
fn rotation(k: i64, f: u8) -> Word {
    let ab = Word::generator(0).mul(&Word::generator(1));
    let w = ab.pow(k);
    if f == 1 {
        w.mul(&Word::generator(0))
    } else {
        w
    }
}

#[test]
fn hnn_spec_round_trip() {
    for text in [BS12, F2_HNN] {
        let once = parse_spec(text).unwrap().describe();
        assert_eq!(parse_spec(&once).unwrap().describe(), once);
    }
}
