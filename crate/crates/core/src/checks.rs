//! The acceptance checks, run over the bundled corpus and a few fixed
//! presentations.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amalgam::{check_involution_lemma, find_pair, pair_condition_failures, Side};
use crate::corpus::Corpus;
use crate::dsl::{parse_spec, Spec};
use crate::error::{Error, Result};
use crate::finite::{CayleyTable, ElementSet};
use crate::genset::{find_avoiding_genset, find_nearly_avoiding_genset, three_subgroup_cover_exists, AvoidOutcome};
use crate::girth::{
    certify_no_short_relation, default_cap, girth_exact, law_upper_bound, laws, GirthCertificate, GirthQuery,
    LawOutcome, Target, DEFAULT_BUDGET,
};
use crate::hnn::{Classification, HnnPresentation};
use crate::oracles::{Element, GroupOracle};
use crate::subgroups::{odd_word_coverage_check, SubgroupHandle};
use crate::words::Word;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Frozen shortest relation of BS(1,2) over `{a, t}`, found by the search.
pub const BS12_RELATION: &str = "a a t^-1 a^-1 t";
/// Number of (group, S) pairs in the oracle cross-validation.
pub const CROSS_VALIDATION_PAIRS: usize = 50;
const CROSS_VALIDATION_SEED: u64 = 0x67_6972_7468;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Section {
    Girth,
    Genset,
    Hnn,
    Amalgam,
}

impl Section {
    pub const ALL: [Section; 4] = [Section::Girth, Section::Genset, Section::Hnn, Section::Amalgam];

    pub fn name(self) -> &'static str {
        match self {
            Section::Girth => "girth",
            Section::Genset => "genset",
            Section::Hnn => "hnn",
            Section::Amalgam => "amalgam",
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Section {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Section::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown section `{s}` (girth, genset, hnn, amalgam)")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: u8,
    pub section: Section,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunInputs {
    pub only: Option<Section>,
    pub corpus_groups: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Versions {
    pub tool: String,
    pub corpus_checksum: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: RunInputs,
    pub results: Vec<CheckResult>,
    pub versions: Versions,
    pub elapsed_ms: u64,
}

impl RunManifest {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

/// A check body returns `(passed, detail)`.
type CheckFn = fn(&Corpus) -> Result<(bool, String)>;

/// Every check: id, section, name, body.
pub const CHECKS: [(u8, Section, &str, CheckFn); 12] = [
    (1, Section::Girth, "infinite dihedral girth is 2", check_dihedral_girth),
    (2, Section::Genset, "odd alternating words lie in K or L", check_odd_coverage),
    (3, Section::Hnn, "ascending witness sets have no short relation", check_ascending_witness),
    (4, Section::Hnn, "alternating witness set with last element in A", check_alternating_witness),
    (5, Section::Hnn, "dihedral HNN witness set", check_dihedral_witness),
    (6, Section::Hnn, "free abelian HNN with avoiding generators", check_abelian_hnn),
    (7, Section::Girth, "law upper bounds and exact girths", check_laws),
    (8, Section::Genset, "avoiding sets exist iff no Klein four quotient", check_avoiding_sweep),
    (9, Section::Amalgam, "involution criterion for normality", check_involution_sweep),
    (10, Section::Amalgam, "admissible pairs for index at least 3", check_pair_sweep),
    (11, Section::Amalgam, "amalgam witness set has no short relation", check_amalgam_witness),
    (12, Section::Girth, "girth search agrees with Cayley graph search", check_cross_validation),
];

/// Run every check (or one section) against the corpus.
pub fn run_corpus(corpus: &Corpus, only: Option<Section>) -> RunManifest {
    let start = Instant::now();
    let selected: Vec<_> = CHECKS.iter().filter(|c| only.is_none_or(|s| c.1 == s)).collect();
    let results: Vec<CheckResult> = selected
        .par_iter()
        .map(|&&(id, section, name, body)| {
            let (passed, detail) = match body(corpus) {
                Ok(r) => r,
                Err(e) => (false, format!("error {}: {e}", e.code())),
            };
            CheckResult {
                id,
                section,
                name: name.to_string(),
                passed,
                detail,
            }
        })
        .collect();
    RunManifest {
        command: match only {
            Some(s) => format!("corpus --only {s}"),
            None => "corpus".to_string(),
        },
        inputs: RunInputs {
            only,
            corpus_groups: corpus.groups.iter().map(|g| g.name.clone()).collect(),
        },
        results,
        versions: Versions {
            tool: TOOL_VERSION.to_string(),
            corpus_checksum: corpus.checksum.clone(),
        },
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

fn hnn(text: &str) -> Result<HnnPresentation> {
    match parse_spec(text)? {
        Spec::Hnn(p) => Ok(p),
        other => Err(Error::Validation(format!("expected an hnn spec, got {}", other.kind_name()))),
    }
}

fn words(g: &GroupOracle, text: &str) -> Result<Vec<Word>> {
    text.split(';').map(|s| g.alphabet().parse_word(s)).collect()
}

fn exact_line(c: &GirthCertificate) -> String {
    match (c.value(), c.witness(), c.lower_bound()) {
        (Some(v), Some(w), _) => format!("{v} ({w})"),
        (_, _, Some(r)) => format!("at least {r}"),
        _ => "no value".into(),
    }
}

fn lower_bound_line(c: &GirthCertificate) -> String {
    match (c.lower_bound(), c.witness()) {
        (Some(r), _) => format!("LowerBound({r})"),
        (None, Some(w)) => format!("relation found: {w}"),
        _ => "no bound".into(),
    }
}

/// Certify a witness set given as HNN elements.
fn certify_hnn(p: &HnnPresentation, set: &[crate::hnn::HnnElement], r: usize, cap: usize) -> Result<GirthCertificate> {
    let gens = set.iter().map(|e| p.to_word(e)).collect();
    certify_no_short_relation(Target::Hnn(p.clone()), gens, r, cap)
}

const F2_HNN: &str = "hnn base=(free rank=2) A=(subgroup gens=\"a\") B=(subgroup gens=\"b\") phi=\"a -> b\" stable=t";

fn check_dihedral_girth(_: &Corpus) -> Result<(bool, String)> {
    let t = Target::Base(GroupOracle::infinite_dihedral());
    let gens = GirthQuery::parse_gens(&t, "a; b")?;
    let c = girth_exact(&GirthQuery::new(t, gens, Some(4))?)?;
    Ok((c.value() == Some(2), exact_line(&c)))
}

fn check_odd_coverage(_: &Corpus) -> Result<(bool, String)> {
    let d = GroupOracle::infinite_dihedral();
    let k = SubgroupHandle::parse(&d, "a, b a b")?;
    let l = SubgroupHandle::parse(&d, "b, a b a")?;
    let ok = odd_word_coverage_check(&k, &l, 15)?;
    Ok((ok, "odd lengths up to 15".into()))
}

fn check_ascending_witness(_: &Corpus) -> Result<(bool, String)> {
    let p = hnn(F2_HNN)?;
    let s = words(p.base(), "a b; b a^-1")?;
    let mut ok = p.classify() == Classification::Proper;
    let mut detail = Vec::new();
    for r in 2..=4u32 {
        let cap = (r as usize - 1).min(5);
        let set = p.witness_set_ascending(&s, r)?;
        let c = certify_hnn(&p, &set, r as usize, cap)?;
        ok &= c.lower_bound() == Some(cap + 1);
        detail.push(format!("r={r} cap={cap}: {}", lower_bound_line(&c)));
    }
    Ok((ok, detail.join("; ")))
}

fn check_alternating_witness(_: &Corpus) -> Result<(bool, String)> {
    let p = hnn(F2_HNN)?;
    let s = words(p.base(), "a b; a")?;
    let last = p.base().normal_form(&s[1])?;
    let ok_pre = p.a().contains(&last) && !p.b().contains(&last);
    let set = p.witness_set_alternating(&s, 3)?;
    let c = certify_hnn(&p, &set, 3, 3)?;
    Ok((
        ok_pre && c.lower_bound() == Some(4),
        format!("r=3 cap=3: {}", lower_bound_line(&c)),
    ))
}

fn check_dihedral_witness(_: &Corpus) -> Result<(bool, String)> {
    let p = hnn(
        "hnn base=(dihedral q=inf) A=(subgroup gmn m=0 n=1) B=(subgroup gmn m=1 n=0) \
         phi=\"a -> a b a, b a b -> b\" stable=t",
    )?;
    let set = p.witness_set_dihedral(2)?;
    let c = certify_hnn(&p, &set, 3, 3)?;
    let gens: Vec<String> = set.iter().map(|e| p.format(e)).collect();
    Ok((
        c.lower_bound() == Some(4),
        format!("S = {{{}}}, cap 3: {}", gens.join(", "), lower_bound_line(&c)),
    ))
}

fn check_abelian_hnn(_: &Corpus) -> Result<(bool, String)> {
    let p = hnn(
        "hnn base=(abelian rank=2) A=(subgroup gens=\"b^-1\") B=(subgroup gens=\"a b^-1\") \
         phi=\"b^-1 -> a b^-1\" stable=t",
    )?;
    let proper = p.classify() == Classification::Proper;
    let nearly = find_nearly_avoiding_genset(p.base(), p.a(), p.b())?;
    let avoids = nearly.profile.intersection() == 0;
    let s: Vec<Word> = nearly.set.iter().map(|x| p.base().element_word(x)).collect();
    let set = p.witness_set_ascending(&s, 4)?;
    let c = certify_hnn(&p, &set, 4, 4)?;
    let names: Vec<String> = s.iter().map(|w| p.base().alphabet().format(w)).collect();
    Ok((
        proper && avoids && c.lower_bound() == Some(5),
        format!(
            "classified {:?}, S' = {{{}}}, r=4 cap=4: {}",
            p.classify(),
            names.join(", "),
            lower_bound_line(&c)
        ),
    ))
}

fn check_laws(_: &Corpus) -> Result<(bool, String)> {
    let z2 = Target::Base(GroupOracle::free_abelian(2));
    let gens = GirthQuery::parse_gens(&z2, "a; b")?;
    let q = GirthQuery::new(z2, gens, Some(6))?;
    let bound = match law_upper_bound(&q, &laws::abelian(), None)? {
        LawOutcome::Bound(c) => c.value(),
        LawOutcome::DoesNotHold { .. } => None,
    };
    let exact = girth_exact(&q)?;

    let bs = hnn("hnn base=(free rank=1) A=(subgroup gens=\"a\") B=(subgroup gens=\"a^2\") phi=\"a -> a^2\" stable=t")?;
    let t = Target::Hnn(bs);
    let gens = GirthQuery::parse_gens(&t, "a; t")?;
    let q = GirthQuery::new(t, gens, Some(6))?;
    let inst = vec![Word::generator(0), Word::generator(1), Word::power_of(0, -1), Word::power_of(1, -1)];
    let meta = match law_upper_bound(&q, &laws::metabelian(), Some(inst))? {
        LawOutcome::Bound(c) => c.value(),
        LawOutcome::DoesNotHold { .. } => None,
    };
    let c = girth_exact(&q)?;
    let ok = bound == Some(4)
        && exact.value() == Some(4)
        && meta == Some(16)
        && c.value() == Some(5)
        && c.witness() == Some(BS12_RELATION);
    let bound = bound.map_or("none".into(), |b| format!("<= {b}"));
    let meta = meta.map_or("does not hold".into(), |b| format!("<= {b}"));
    Ok((
        ok,
        format!(
            "Z^2: law bound {bound}, girth {}; BS(1,2): metabelian bound {meta}, girth {}",
            exact_line(&exact),
            exact_line(&c)
        ),
    ))
}

fn proper_subgroups(t: &CayleyTable) -> Vec<ElementSet> {
    t.subgroups().into_iter().filter(|h| h.len() < t.order()).collect()
}

fn handle(g: &GroupOracle, h: &ElementSet) -> Result<SubgroupHandle> {
    let elems: Vec<usize> = h.iter().filter(|&x| x != 0).collect();
    SubgroupHandle::from_elements(g, &elems)
}

fn check_avoiding_sweep(corpus: &Corpus) -> Result<(bool, String)> {
    let outcomes: Vec<Result<(bool, usize, String)>> = corpus
        .groups
        .par_iter()
        .map(|cg| {
            let g = &cg.oracle;
            let t = g.finite_group().expect("corpus groups are finite").table();
            let subs = proper_subgroups(t);
            let klein = g.klein_four_quotient_exists()?;
            let mut all_found = true;
            let mut pairs = 0;
            for i in 0..subs.len() {
                let a = handle(g, &subs[i])?;
                for b_set in &subs[i..] {
                    let b = handle(g, b_set)?;
                    pairs += 1;
                    match find_avoiding_genset(g, &a, &b)? {
                        AvoidOutcome::Found(s) => {
                            let idx: Vec<usize> = s.iter().filter_map(Element::finite_index).collect();
                            let sound = t.generates(idx.iter().copied())
                                && idx.iter().all(|&x| !subs[i].contains(x) && !b_set.contains(x));
                            if !sound {
                                return Ok((false, pairs, format!("{}: unsound avoiding set {idx:?}", cg.name)));
                            }
                        }
                        AvoidOutcome::KleinObstruction => all_found = false,
                    }
                }
            }
            let scorza = three_subgroup_cover_exists(t);
            let ok = all_found != klein && scorza == klein;
            let note = if ok {
                String::new()
            } else {
                format!("{}: all pairs avoided {all_found}, Klein quotient {klein}, three-cover {scorza}", cg.name)
            };
            Ok((ok, pairs, note))
        })
        .collect();
    let mut pairs = 0;
    let mut failures = Vec::new();
    for o in outcomes {
        let (ok, n, note) = o?;
        pairs += n;
        if !ok {
            failures.push(note);
        }
    }
    Ok((
        failures.is_empty(),
        format!("{} groups, {pairs} subgroup pairs{}", corpus.groups.len(), failure_suffix(&failures)),
    ))
}

fn failure_suffix(failures: &[String]) -> String {
    if failures.is_empty() {
        String::new()
    } else {
        format!("; failures: {}", failures.join("; "))
    }
}

fn check_involution_sweep(corpus: &Corpus) -> Result<(bool, String)> {
    let mut count = 0;
    let mut failures = Vec::new();
    for cg in &corpus.groups {
        let t = cg.oracle.finite_group().expect("finite").table();
        for h in t.subgroups() {
            count += 1;
            if !check_involution_lemma(&cg.oracle, &handle(&cg.oracle, &h)?)? {
                failures.push(format!("{} order-{} subgroup", cg.name, h.len()));
            }
        }
    }
    Ok((failures.is_empty(), format!("{count} subgroups{}", failure_suffix(&failures))))
}

fn check_pair_sweep(corpus: &Corpus) -> Result<(bool, String)> {
    let mut count = 0;
    let mut failures = Vec::new();
    for cg in &corpus.groups {
        let g = &cg.oracle;
        let t = g.finite_group().expect("finite").table();
        for c_set in t.subgroups().into_iter().filter(|h| t.order() / h.len() >= 3) {
            count += 1;
            let c = handle(g, &c_set)?;
            match find_pair(g, &c) {
                Ok((a1, a2)) => {
                    let failed = pair_condition_failures(g, &c, &a1, &a2);
                    if !failed.is_empty() {
                        failures.push(format!("{}: {failed:?}", cg.name));
                    }
                }
                Err(e) => failures.push(format!("{}: {e}", cg.name)),
            }
        }
    }
    Ok((failures.is_empty(), format!("{count} pairs (A, C){}", failure_suffix(&failures))))
}

/// `ℤ/6 ∗_{ℤ/2} ℤ/4`, identifying `y³` with `x²`.
pub const MODULAR_AMALGAM: &str = "amalgam left=(builtin name=C6 names=y) right=(builtin name=C4 names=x) \
     C_left=(subgroup gens=\"y^3\") C_right=(subgroup gens=\"x^2\") iso=\"y^3 -> x^2\"";

fn check_amalgam_witness(_: &Corpus) -> Result<(bool, String)> {
    let Spec::Amalgam(p) = parse_spec(MODULAR_AMALGAM)? else {
        return Err(Error::Validation("expected an amalgam".into()));
    };
    let w = p.witness_from_generators(2)?;
    let gens: Vec<Word> = w.elements.iter().map(|e| p.to_word(e)).collect();
    let c = certify_no_short_relation(Target::Amalgam(p.clone()), gens, 2, 2)?;
    let index = p.c(Side::Left).index();
    let index_text = index.map_or("infinite".into(), |i| i.to_string());
    Ok((
        c.lower_bound() == Some(3) && index.is_some_and(|i| i >= 3),
        format!(
            "{} elements, p = {}, index of C {index_text}, cap 2: {}",
            w.elements.len(),
            w.p,
            lower_bound_line(&c)
        ),
    ))
}

/// Shortest freely reduced relation among `gens` by breadth-first search over
/// (element, last letter) in the Cayley graph.
pub fn cayley_shortest_relation(t: &CayleyTable, gens: &[usize], max_len: usize) -> Option<usize> {
    let k = 2 * gens.len();
    let letter = |l: usize| if l.is_multiple_of(2) { gens[l / 2] } else { t.inv(gens[l / 2]) };
    // state = element * (k + 1) + last letter, `k` meaning none
    let mut dist = vec![usize::MAX; t.order() * (k + 1)];
    let start = k;
    dist[start] = 0;
    let mut queue = VecDeque::from([(0usize, k)]);
    while let Some((x, last)) = queue.pop_front() {
        let d = dist[x * (k + 1) + last];
        if d == max_len {
            continue;
        }
        for l in 0..k {
            if last != k && l == (last ^ 1) {
                continue;
            }
            let y = t.mul(x, letter(l));
            if y == 0 {
                return Some(d + 1);
            }
            let s = y * (k + 1) + l;
            if dist[s] == usize::MAX {
                dist[s] = d + 1;
                queue.push_back((y, l));
            }
        }
    }
    None
}

fn check_cross_validation(corpus: &Corpus) -> Result<(bool, String)> {
    let pool: Vec<&GroupOracle> = corpus
        .groups
        .iter()
        .map(|g| &g.oracle)
        .filter(|g| g.order().is_some_and(|n| n >= 3))
        .collect();
    if pool.is_empty() {
        return Err(Error::CorpusMissing("no corpus group of order at least 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(CROSS_VALIDATION_SEED);
    let mut cases = Vec::with_capacity(CROSS_VALIDATION_PAIRS);
    for _ in 0..CROSS_VALIDATION_PAIRS {
        let g = pool[rng.random_range(0..pool.len())];
        let n = g.order().unwrap();
        let k = rng.random_range(1..=3usize.min(n - 1));
        let s: Vec<usize> = sample(&mut rng, n - 1, k).into_iter().map(|i| i + 1).collect();
        cases.push((g, s));
    }
    let outcomes: Vec<Result<Option<String>>> = cases
        .par_iter()
        .map(|(g, s)| {
            let f = g.finite_group().unwrap();
            let cap = default_cap(s.len(), DEFAULT_BUDGET);
            let gens: Vec<Word> = s.iter().map(|&x| f.word_of(x).clone()).collect();
            let q = GirthQuery::new(Target::Base((*g).clone()), gens, Some(cap))?;
            let c = girth_exact(&q)?;
            let bfs = cayley_shortest_relation(f.table(), s, cap);
            let agree = match (c.value(), bfs) {
                (Some(v), Some(b)) => v == b,
                (None, None) => c.lower_bound() == Some(cap + 1),
                _ => false,
            };
            Ok((!agree).then(|| format!("{} S={s:?}: search {:?}, graph {bfs:?}", f.label(), c.value())))
        })
        .collect();
    let mut failures = Vec::new();
    for o in outcomes {
        if let Some(f) = o? {
            failures.push(f);
        }
    }
    Ok((
        failures.is_empty(),
        format!("{} (group, S) pairs{}", cases.len(), failure_suffix(&failures)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::builders;

    #[test]
    fn bfs_oracle_examples() {
        let (t, g) = builders::dihedral(5);
        assert_eq!(cayley_shortest_relation(&t, &g, 10), Some(2));
        let (t, _) = builders::cyclic(7);
        assert_eq!(cayley_shortest_relation(&t, &[1], 10), Some(7));
        assert_eq!(cayley_shortest_relation(&t, &[1], 6), None);
    }

    #[test]
    fn sections_parse() {
        assert_eq!("genset".parse::<Section>().unwrap(), Section::Genset);
        assert!("nope".parse::<Section>().is_err());
    }

    #[test]
    fn fixed_presentation_checks_pass() {
        let dir = tempfile::tempdir().unwrap();
        Corpus::generate(dir.path()).unwrap();
        let corpus = Corpus::load(dir.path()).unwrap();
        for (id, _, name, body) in CHECKS {
            if [1, 2, 3, 4, 5, 6, 7, 11].contains(&id) {
                let (ok, detail) = body(&corpus).unwrap();
                assert!(ok, "check {id} {name}: {detail}");
            }
        }
    }
}
