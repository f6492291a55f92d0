use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use girthlab_core::amalgam::AmalgamPresentation;
use girthlab_core::checks::{run_corpus, RunManifest, Section};
use girthlab_core::corpus::{default_dir, Corpus};
use girthlab_core::dsl::{parse_spec, Spec};
use girthlab_core::genset::{find_avoiding_genset, find_nearly_avoiding_genset, profile, AvoidOutcome};
use girthlab_core::girth::{
    certify_no_short_relation, girth_exact, law_upper_bound, laws, GirthCertificate, GirthQuery, LawOutcome, Target,
};
use girthlab_core::hnn::HnnPresentation;
use girthlab_core::subgroups::SubgroupHandle;
use girthlab_core::{Error, GroupOracle, Word};

#[derive(Parser)]
#[command(name = "girthlab", version, about = "Girth certificates for groups, HNN extensions and amalgams")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a spec and print its canonical form.
    Parse {
        /// Spec text, or `@path` to read it from a file.
        spec: String,
    },
    /// Normal form of a word in a group, HNN extension or amalgam.
    Reduce {
        #[arg(long)]
        target: String,
        word: String,
    },
    /// Shortest relation among the given elements.
    Girth {
        #[arg(long)]
        target: String,
        /// Elements separated by `;`.
        #[arg(long)]
        gens: String,
        #[arg(long)]
        cap: Option<usize>,
        /// Certify that no relation is shorter than this (cap defaults to r).
        #[arg(long)]
        certify: Option<usize>,
        /// Upper bound from a law: abelian, metabelian, nilpotent2, burnsideN.
        #[arg(long, conflicts_with = "certify")]
        law: Option<String>,
        /// Words over the symbols s1, s2, … substituted for the law variables, separated by `;`.
        #[arg(long, requires = "law")]
        instantiate: Option<String>,
    },
    /// Certify that no relation of length at most the cap exists.
    Certify {
        #[arg(long)]
        target: String,
        #[arg(long)]
        gens: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Build a witness generating set.
    Witness {
        /// An hnn or amalgam spec.
        #[arg(long)]
        target: String,
        #[arg(long, value_enum)]
        kind: WitnessKind,
        /// Base elements (hnn) or left-factor elements (amalgam), separated by `;`.
        #[arg(long, default_value = "")]
        gens: String,
        /// Right-factor elements for amalgam witnesses.
        #[arg(long, default_value = "")]
        right_gens: String,
        #[arg(long)]
        r: u32,
        /// Also certify the set up to this length.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Generating sets avoiding two proper subgroups.
    Genset {
        #[arg(long)]
        group: String,
        /// Generators of A, separated by `,`.
        #[arg(long)]
        a: String,
        /// Generators of B, separated by `,`.
        #[arg(long)]
        b: String,
        #[arg(long, value_enum, default_value_t = GensetMode::Avoid)]
        mode: GensetMode,
    },
    /// Run the acceptance checks on the bundled corpus.
    Corpus {
        /// Only run one section: girth, genset, hnn or amalgam.
        #[arg(long)]
        only: Option<String>,
        /// Write the corpus files to this directory instead of running checks.
        #[arg(long, conflicts_with = "only")]
        generate: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WitnessKind {
    Ascending,
    Alternating,
    Dihedral,
    Amalgam,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GensetMode {
    Avoid,
    Nearly,
}

/// A command result: JSON payload, text rendering and whether checks passed.
struct Output {
    json: Value,
    text: String,
    ok: bool,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output { json, text, ok: true }
    }
}

fn read_spec(arg: &str) -> Result<Spec, Error> {
    match arg.strip_prefix('@') {
        Some(path) => parse_spec(&std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?),
        None => parse_spec(arg),
    }
}

fn target_of(spec: Spec) -> Result<Target, Error> {
    match spec {
        Spec::Group(g) => Ok(Target::Base(g)),
        Spec::Hnn(p) => Ok(Target::Hnn(p)),
        Spec::Amalgam(p) => Ok(Target::Amalgam(p)),
        Spec::Subgroup(_) => Err(Error::Validation("a subgroup spec is not a girth target".into())),
    }
}

fn group_of(spec: Spec) -> Result<GroupOracle, Error> {
    match spec {
        Spec::Group(g) => Ok(g),
        other => Err(Error::Validation(format!("expected a group spec, got {}", other.kind_name()))),
    }
}

/// Two-column text table.
fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn certificate_output(c: &GirthCertificate) -> Output {
    let result = match (c.value(), c.lower_bound()) {
        (Some(v), _) => format!("{v}"),
        (None, Some(r)) => format!(">= {r}"),
        _ => "unknown".into(),
    };
    let kind = serde_json::to_value(c).expect("serializable")["kind"].clone();
    let text = table(&[
        ("target", c.target.clone()),
        ("generators", c.generators.join("; ")),
        ("symbols", c.symbols.join(", ")),
        ("kind", kind.as_str().unwrap_or_default().to_string()),
        ("girth", result),
        ("witness", c.witness().unwrap_or("-").to_string()),
        ("cap", c.cap.to_string()),
        ("generation", format!("{:?}", c.generation).to_lowercase()),
        ("fingerprint", c.fingerprint.clone()),
    ]);
    Output::ok(serde_json::to_value(c).expect("serializable"), text)
}

fn cmd_parse(spec: &str) -> Result<Output, Error> {
    let spec = read_spec(spec)?;
    let canonical = spec.describe();
    let mut rows = vec![("kind", spec.kind_name().to_string()), ("canonical", canonical.clone())];
    let mut json = json!({ "kind": spec.kind_name(), "canonical": canonical });
    match &spec {
        Spec::Group(g) => {
            json["order"] = json!(g.order());
            rows.push(("order", g.order().map_or("infinite".into(), |n| n.to_string())));
        }
        Spec::Subgroup(h) => {
            json["proper"] = json!(h.is_proper());
            json["index"] = json!(h.index());
            rows.push(("proper", h.is_proper().to_string()));
        }
        Spec::Hnn(p) => {
            json["classification"] = serde_json::to_value(p.classify()).expect("serializable");
            rows.push(("classification", format!("{:?}", p.classify())));
        }
        Spec::Amalgam(p) => {
            json["proper"] = json!(p.is_proper());
            rows.push(("proper", p.is_proper().to_string()));
        }
    }
    Ok(Output::ok(json, table(&rows)))
}

fn cmd_reduce(target: &str, word: &str) -> Result<Output, Error> {
    let (normal, kind) = match read_spec(target)? {
        Spec::Group(g) => (g.format_element(&g.parse_element(word)?), "base"),
        Spec::Hnn(p) => (p.format(&p.britton_reduce(&p.parse_element(word)?)?), "britton"),
        Spec::Amalgam(p) => (p.format(&p.normalize(&p.parse_element(word)?)?), "amalgam"),
        Spec::Subgroup(_) => return Err(Error::Validation("cannot reduce in a subgroup spec".into())),
    };
    let identity = normal == "1";
    Ok(Output::ok(
        json!({ "input": word, "normal_form": normal, "reduction": kind, "is_identity": identity }),
        table(&[
            ("input", word.to_string()),
            ("normal form", normal.clone()),
            ("identity", identity.to_string()),
        ]),
    ))
}

fn parse_symbol_words(q: &GirthQuery, text: &str) -> Result<Vec<Word>, Error> {
    let symbols = q.symbols();
    text.split(';').map(|s| symbols.parse_word(s)).collect()
}

fn cmd_girth(
    target: &str,
    gens: &str,
    cap: Option<usize>,
    certify: Option<usize>,
    law: Option<String>,
    instantiate: Option<String>,
) -> Result<Output, Error> {
    let target = target_of(read_spec(target)?)?;
    let words = GirthQuery::parse_gens(&target, gens)?;
    if let Some(r) = certify {
        return Ok(certificate_output(&certify_no_short_relation(target, words, r, cap.unwrap_or(r))?));
    }
    let q = GirthQuery::new(target, words, cap)?;
    if let Some(name) = law {
        let law = laws::by_name(&name).ok_or_else(|| Error::Validation(format!("unknown law `{name}`")))?;
        let inst = instantiate.map(|t| parse_symbol_words(&q, &t)).transpose()?;
        return Ok(match law_upper_bound(&q, &law, inst)? {
            LawOutcome::Bound(c) => certificate_output(&c),
            LawOutcome::DoesNotHold { substituted } => Output::ok(
                json!({ "status": "does_not_hold", "law": law.name, "substituted": substituted }),
                table(&[("law", law.name.clone()), ("status", "does not hold".into()), ("substituted", substituted)]),
            ),
        });
    }
    Ok(certificate_output(&girth_exact(&q)?))
}

fn hnn_witness(p: &HnnPresentation, kind: WitnessKind, gens: &str, r: u32) -> Result<Vec<Word>, Error> {
    let s: Vec<Word> = gens
        .split(';')
        .filter(|x| !x.trim().is_empty())
        .map(|x| p.base().alphabet().parse_word(x))
        .collect::<Result<_, _>>()?;
    let set = match kind {
        WitnessKind::Ascending => p.witness_set_ascending(&s, r)?,
        WitnessKind::Alternating => p.witness_set_alternating(&s, r)?,
        WitnessKind::Dihedral => p.witness_set_dihedral(r)?,
        WitnessKind::Amalgam => return Err(Error::Validation("amalgam witnesses need an amalgam target".into())),
    };
    Ok(set.iter().map(|e| p.to_word(e)).collect())
}

fn amalgam_witness(p: &AmalgamPresentation, gens: &str, right: &str, r: u32) -> Result<(Vec<Word>, usize), Error> {
    let parse = |g: &GroupOracle, t: &str| -> Result<Vec<Word>, Error> {
        t.split(';')
            .filter(|x| !x.trim().is_empty())
            .map(|x| g.alphabet().parse_word(x))
            .collect()
    };
    let w = if gens.trim().is_empty() && right.trim().is_empty() {
        p.witness_from_generators(r)?
    } else {
        p.build_witness(&parse(p.left(), gens)?, &parse(p.right(), right)?, r)?
    };
    Ok((w.elements.iter().map(|e| p.to_word(e)).collect(), w.p))
}

fn cmd_witness(
    target: &str,
    kind: WitnessKind,
    gens: &str,
    right: &str,
    r: u32,
    cap: Option<usize>,
) -> Result<Output, Error> {
    let target = target_of(read_spec(target)?)?;
    let (words, p) = match (&target, kind) {
        (Target::Hnn(p), _) => (hnn_witness(p, kind, gens, r)?, None),
        (Target::Amalgam(a), WitnessKind::Amalgam) => {
            let (w, p) = amalgam_witness(a, gens, right, r)?;
            (w, Some(p))
        }
        _ => return Err(Error::Validation("witness sets need an hnn or amalgam target of the matching kind".into())),
    };
    let alphabet = target.alphabet().clone();
    let formatted: Vec<String> = words.iter().map(|w| alphabet.format(w)).collect();
    let mut json = json!({ "r": r, "elements": formatted });
    let mut rows = vec![("r", r.to_string()), ("elements", formatted.join("; "))];
    if let Some(p) = p {
        json["p"] = json!(p);
        rows.push(("p", p.to_string()));
    }
    let mut ok = true;
    if let Some(cap) = cap {
        let c = certify_no_short_relation(target, words, (r as usize).max(cap), cap)?;
        ok = c.lower_bound().is_some();
        rows.push(("certificate", c.lower_bound().map_or("relation found".into(), |b| format!("LowerBound({b})"))));
        json["certificate"] = serde_json::to_value(&c).expect("serializable");
    }
    Ok(Output { json, text: table(&rows), ok })
}

fn cmd_genset(group: &str, a: &str, b: &str, mode: GensetMode) -> Result<Output, Error> {
    let g = group_of(read_spec(group)?)?;
    let sa = SubgroupHandle::parse(&g, a)?;
    let sb = SubgroupHandle::parse(&g, b)?;
    let (set, strategy) = match mode {
        GensetMode::Avoid => match find_avoiding_genset(&g, &sa, &sb)? {
            AvoidOutcome::Found(s) => (s, "avoid".to_string()),
            AvoidOutcome::KleinObstruction => {
                return Ok(Output {
                    json: json!({ "status": "klein_obstruction" }),
                    text: table(&[("status", "no avoiding set: the group maps onto the Klein four group".into())]),
                    ok: false,
                })
            }
        },
        GensetMode::Nearly => {
            let n = find_nearly_avoiding_genset(&g, &sa, &sb)?;
            (n.set, serde_json::to_value(n.strategy).expect("serializable").as_str().unwrap_or("").to_string())
        }
    };
    let prof = profile(&g, &sa, &sb, &set)?;
    let formatted: Vec<String> = set.iter().map(|x| g.format_element(x)).collect();
    Ok(Output::ok(
        json!({ "status": "found", "set": formatted, "profile": prof, "strategy": strategy }),
        table(&[
            ("set", formatted.join("; ")),
            ("strategy", strategy.clone()),
            ("in A only", prof.alpha.to_string()),
            ("in B only", prof.beta.to_string()),
            ("in both", prof.gamma.to_string()),
            ("outside", prof.delta.to_string()),
        ]),
    ))
}

fn manifest_text(m: &RunManifest) -> String {
    let mut lines: Vec<String> = m
        .results
        .iter()
        .map(|r| {
            format!(
                "{:>2}  {:<7}  {}  {:<48}  {}",
                r.id,
                r.section.name(),
                if r.passed { "PASS" } else { "FAIL" },
                r.name,
                r.detail
            )
        })
        .collect();
    let passed = m.results.iter().filter(|r| r.passed).count();
    lines.push(format!("{passed}/{} checks passed", m.results.len()));
    lines.join("\n")
}

fn cmd_corpus(only: Option<String>, generate: Option<PathBuf>) -> Result<Output, Error> {
    if let Some(dir) = generate {
        let m = Corpus::generate(&dir)?;
        return Ok(Output::ok(
            json!({ "generated": dir.display().to_string(), "groups": m.groups.len() }),
            format!("wrote {} groups to {}", m.groups.len(), dir.display()),
        ));
    }
    let only = only.map(|s| s.parse::<Section>()).transpose()?;
    let corpus = Corpus::load(&default_dir())?;
    let m = run_corpus(&corpus, only);
    Ok(Output {
        json: serde_json::to_value(&m).expect("serializable"),
        text: manifest_text(&m),
        ok: m.passed(),
    })
}

/// 2 for input that could not be understood, 1 for failed computations.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Validation(_) | Error::UnknownSymbol(_) | Error::InvalidTable(_) | Error::Io(_) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<Output, Error> {
    match cli.command {
        Command::Parse { spec } => cmd_parse(&spec),
        Command::Reduce { target, word } => cmd_reduce(&target, &word),
        Command::Girth {
            target,
            gens,
            cap,
            certify,
            law,
            instantiate,
        } => cmd_girth(&target, &gens, cap, certify, law, instantiate),
        Command::Certify { target, gens, r, cap } => cmd_girth(&target, &gens, cap, Some(r), None, None),
        Command::Witness {
            target,
            kind,
            gens,
            right_gens,
            r,
            cap,
        } => cmd_witness(&target, kind, &gens, &right_gens, r, cap),
        Command::Genset { group, a, b, mode } => cmd_genset(&group, &a, &b, mode),
        Command::Corpus { only, generate } => cmd_corpus(only, generate),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            // help and version requests exit 0
            return ExitCode::from(if code == 0 { 0 } else { 2 });
        }
    };
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            emit(match format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable"),
                Format::Text => out.text,
            });
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            match format {
                Format::Json => emit(
                    serde_json::to_string_pretty(&json!({ "error": { "code": e.code(), "message": e.to_string() } }))
                        .expect("serializable"),
                ),
                Format::Text => eprintln!("error [{}]: {e}", e.code()),
            }
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Print to stdout, ignoring a closed pipe.
fn emit(text: String) {
    let _ = writeln!(std::io::stdout(), "{text}");
}
