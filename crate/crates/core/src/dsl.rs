//! Recursive-descent parser for the presentation language.
//!
//! ```text
//! spec     := group | subgroup | hnn | amalgam
//! group    := ("free" | "abelian") rank=N | "dihedral" q=(N|inf)
//!           | "cayley" file=PATH gens=I,J,… | "builtin" name=ID [gens=I,J,…]
//!             each optionally followed by names=x,y,…
//! subgroup := "subgroup" (gens="w, …" | gmn m=N n=N | elements=I,J,…) [of=(group)]
//! hnn      := "hnn" base=(group) A=(subgroup) B=(subgroup) phi="g -> w, …" [stable=NAME]
//! amalgam  := "amalgam" left=(group) right=(group) C_left=(subgroup) C_right=(subgroup) iso="g -> w, …"
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::amalgam::AmalgamPresentation;
use crate::corpus;
use crate::error::{Error, Result};
use crate::finite::CayleyTable;
use crate::hnn::HnnPresentation;
use crate::oracles::GroupOracle;
use crate::subgroups::SubgroupHandle;
use crate::words::{Alphabet, Word};

/// A parsed specification.
#[derive(Clone, Debug)]
pub enum Spec {
    Group(GroupOracle),
    Subgroup(SubgroupHandle),
    Hnn(HnnPresentation),
    Amalgam(AmalgamPresentation),
}

impl Spec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Spec::Group(_) => "group",
            Spec::Subgroup(_) => "subgroup",
            Spec::Hnn(_) => "hnn",
            Spec::Amalgam(_) => "amalgam",
        }
    }

    /// Canonical text that parses back to an equal object.
    pub fn describe(&self) -> String {
        match self {
            Spec::Group(g) => g.describe(),
            Spec::Subgroup(h) => format!("{} of=({})", h.describe(), h.ambient().describe()),
            Spec::Hnn(p) => p.describe(),
            Spec::Amalgam(p) => p.describe(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    Eq,
    Open,
    Close,
    End,
}

impl Tok {
    fn show(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Eq => "`=`".into(),
            Tok::Open => "`(`".into(),
            Tok::Close => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn parse_error(pos: Pos, expected: impl Into<String>, found: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        column: pos.column,
        expected: expected.into(),
        found: found.into(),
    }
}

fn is_bare(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '=' | '(' | ')' | '"' | '#')
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        let mut advance = |c: char| {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        match c {
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    advance(c);
                    chars.next();
                }
            }
            c if c.is_whitespace() => {
                advance(c);
                chars.next();
            }
            '=' | '(' | ')' => {
                advance(c);
                chars.next();
                out.push((
                    match c {
                        '=' => Tok::Eq,
                        '(' => Tok::Open,
                        _ => Tok::Close,
                    },
                    pos,
                ));
            }
            '"' => {
                advance(c);
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None => return Err(parse_error(pos, "closing `\"`", "end of input")),
                        Some('"') => {
                            advance('"');
                            break;
                        }
                        Some('\\') => {
                            advance('\\');
                            match chars.next() {
                                Some(e @ ('"' | '\\')) => {
                                    advance(e);
                                    s.push(e);
                                }
                                _ => return Err(parse_error(pos, "`\\\"` or `\\\\` escape", "other escape")),
                            }
                        }
                        Some(c) => {
                            advance(c);
                            s.push(c);
                        }
                    }
                }
                out.push((Tok::Str(s), pos));
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_bare(c) {
                        break;
                    }
                    advance(c);
                    s.push(c);
                    chars.next();
                }
                out.push((Tok::Ident(s), pos));
            }
        }
    }
    out.push((Tok::End, Pos { line, column }));
    Ok(out)
}

/// A `key=value` argument value.
#[derive(Clone, Debug)]
enum Value {
    Text(String, Pos),
    Nested(Node),
}

/// Untyped syntax tree: a head keyword, flags and keyed arguments.
#[derive(Clone, Debug)]
struct Node {
    head: String,
    pos: Pos,
    flags: Vec<(String, Pos)>,
    args: BTreeMap<String, (Value, Pos)>,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
}

const HEADS: &[&str] = &[
    "free", "abelian", "dihedral", "cayley", "builtin", "subgroup", "hnn", "amalgam",
];

impl Parser {
    fn peek(&self) -> &(Tok, Pos) {
        &self.toks[self.i]
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn node(&mut self) -> Result<Node> {
        let (tok, pos) = self.next();
        let head = match tok {
            Tok::Ident(s) if HEADS.contains(&s.as_str()) => s,
            other => return Err(parse_error(pos, format!("one of {}", HEADS.join(", ")), other.show())),
        };
        let mut node = Node {
            head,
            pos,
            flags: Vec::new(),
            args: BTreeMap::new(),
        };
        loop {
            let (tok, pos) = self.peek().clone();
            let key = match tok {
                Tok::Ident(k) => k,
                Tok::End | Tok::Close => break,
                other => return Err(parse_error(pos, "argument name", other.show())),
            };
            self.next();
            if self.peek().0 != Tok::Eq {
                node.flags.push((key, pos));
                continue;
            }
            self.next();
            let (tok, vpos) = self.next();
            let value = match tok {
                Tok::Ident(s) | Tok::Str(s) => Value::Text(s, vpos),
                Tok::Open => {
                    let inner = self.node()?;
                    let (close, cpos) = self.next();
                    if close != Tok::Close {
                        return Err(parse_error(cpos, "`)`", close.show()));
                    }
                    Value::Nested(inner)
                }
                other => return Err(parse_error(vpos, "value", other.show())),
            };
            if node.args.insert(key.clone(), (value, pos)).is_some() {
                return Err(parse_error(pos, "distinct argument names", format!("repeated `{key}`")));
            }
        }
        Ok(node)
    }
}

/// Options for resolving files referenced by a spec.
#[derive(Clone, Debug, Default)]
pub struct ParseOptions {
    /// Directory for relative `cayley file=` paths; the working directory if unset.
    pub base_dir: Option<PathBuf>,
}

/// Parse a spec, resolving relative paths against the working directory.
pub fn parse_spec(text: &str) -> Result<Spec> {
    parse_spec_with(text, &ParseOptions::default())
}

pub fn parse_spec_with(text: &str, opts: &ParseOptions) -> Result<Spec> {
    let mut p = Parser {
        toks: tokenize(text)?,
        i: 0,
    };
    let node = p.node()?;
    let (tok, pos) = p.next();
    if tok != Tok::End {
        return Err(parse_error(pos, "end of input", tok.show()));
    }
    Builder { opts }.spec(&node)
}

/// Parse a spec that must denote a group.
pub fn parse_group(text: &str) -> Result<GroupOracle> {
    match parse_spec(text)? {
        Spec::Group(g) => Ok(g),
        other => Err(Error::Validation(format!("expected a group spec, got {}", other.kind_name()))),
    }
}

struct Builder<'a> {
    opts: &'a ParseOptions,
}

/// Argument access that tracks which keys were consumed.
struct Args<'n> {
    node: &'n Node,
    used: Vec<&'static str>,
}

impl<'n> Args<'n> {
    fn new(node: &'n Node) -> Self {
        Args { node, used: Vec::new() }
    }

    fn flag(&mut self, name: &'static str) -> bool {
        self.used.push(name);
        self.node.flags.iter().any(|(f, _)| f == name)
    }

    fn get(&mut self, key: &'static str) -> Option<&'n (Value, Pos)> {
        self.used.push(key);
        self.node.args.get(key)
    }

    fn text(&mut self, key: &'static str) -> Result<Option<(&'n str, Pos)>> {
        match self.get(key) {
            None => Ok(None),
            Some((Value::Text(s, p), _)) => Ok(Some((s.as_str(), *p))),
            Some((Value::Nested(n), _)) => Err(parse_error(n.pos, format!("text value for `{key}`"), "`(`")),
        }
    }

    fn required_text(&mut self, key: &'static str) -> Result<(&'n str, Pos)> {
        let head_pos = self.node.pos;
        self.text(key)?
            .ok_or_else(|| parse_error(head_pos, format!("argument `{key}=`"), format!("`{}` without it", self.node.head)))
    }

    fn nested(&mut self, key: &'static str) -> Result<Option<&'n Node>> {
        match self.get(key) {
            None => Ok(None),
            Some((Value::Nested(n), _)) => Ok(Some(n)),
            Some((Value::Text(s, p), _)) => Err(parse_error(*p, format!("parenthesized spec for `{key}`"), format!("`{s}`"))),
        }
    }

    fn required_nested(&mut self, key: &'static str) -> Result<&'n Node> {
        let head_pos = self.node.pos;
        self.nested(key)?
            .ok_or_else(|| parse_error(head_pos, format!("argument `{key}=(…)`"), format!("`{}` without it", self.node.head)))
    }

    fn number(&mut self, key: &'static str) -> Result<u64> {
        let (s, p) = self.required_text(key)?;
        s.parse().map_err(|_| parse_error(p, format!("non-negative integer for `{key}`"), format!("`{s}`")))
    }

    fn list(&mut self, key: &'static str) -> Result<Option<Vec<usize>>> {
        let Some((s, p)) = self.text(key)? else {
            return Ok(None);
        };
        s.split(',')
            .map(|x| {
                x.trim()
                    .parse()
                    .map_err(|_| parse_error(p, format!("comma-separated indices for `{key}`"), format!("`{s}`")))
            })
            .collect::<Result<_>>()
            .map(Some)
    }

    fn finish(&self) -> Result<()> {
        if let Some((flag, pos)) = self.node.flags.iter().find(|(f, _)| !self.used.contains(&f.as_str())) {
            return Err(parse_error(*pos, "`key=value`", format!("`{flag}`")));
        }
        for (key, (_, pos)) in &self.node.args {
            if !self.used.contains(&key.as_str()) {
                return Err(parse_error(
                    *pos,
                    format!("an argument of `{}`", self.node.head),
                    format!("`{key}`"),
                ));
            }
        }
        Ok(())
    }
}

/// Shift a word-parser error (relative to a quoted string) to the spec position.
fn relocate(e: Error, at: Pos, offset: usize) -> Error {
    match e {
        Error::Parse {
            column,
            expected,
            found,
            ..
        } => Error::Parse {
            line: at.line,
            column: at.column + offset + column,
            expected,
            found,
        },
        other => other,
    }
}

/// Parse `lhs -> rhs, …` into pairs.
fn parse_map(text: &str, at: Pos, src: &Alphabet, dst: &Alphabet) -> Result<Vec<(Word, Word)>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for clause in text.split(',') {
        let Some((lhs, rhs)) = clause.split_once("->") else {
            return Err(parse_error(
                Pos {
                    line: at.line,
                    column: at.column + 1 + offset,
                },
                "`generator -> image`",
                format!("`{}`", clause.trim()),
            ));
        };
        let l = src.parse_word(lhs).map_err(|e| relocate(e, at, offset))?;
        let r = dst
            .parse_word(rhs)
            .map_err(|e| relocate(e, at, offset + lhs.len() + 2))?;
        out.push((l, r));
        offset += clause.len() + 1;
    }
    Ok(out)
}

/// Order the images to match the domain's generators, comparing normal forms.
fn images_for(domain: &SubgroupHandle, pairs: Vec<(Word, Word)>, what: &str) -> Result<Vec<Word>> {
    let g = domain.ambient();
    let mut keyed = Vec::with_capacity(pairs.len());
    for (l, r) in pairs {
        keyed.push((g.normal_form(&l)?, l, r));
    }
    let mut images = Vec::with_capacity(domain.generators().len());
    for gen in domain.generators() {
        let nf = g.normal_form(gen)?;
        let hits: Vec<&(_, Word, Word)> = keyed.iter().filter(|(k, _, _)| *k == nf).collect();
        match hits.as_slice() {
            [(_, _, r)] => images.push(r.clone()),
            [] => {
                return Err(Error::Validation(format!(
                    "{what} gives no image for generator {}",
                    g.alphabet().format(gen)
                )))
            }
            _ => {
                return Err(Error::Validation(format!(
                    "{what} gives several images for generator {}",
                    g.alphabet().format(gen)
                )))
            }
        }
    }
    if keyed.len() != images.len() {
        let extra = keyed
            .iter()
            .find(|(k, _, _)| !domain.generator_elements().contains(k))
            .map(|(_, l, _)| g.alphabet().format(l))
            .unwrap_or_default();
        return Err(Error::Validation(format!(
            "{what} maps {extra}, which is not a listed generator of the domain"
        )));
    }
    Ok(images)
}

impl Builder<'_> {
    fn spec(&self, node: &Node) -> Result<Spec> {
        Ok(match node.head.as_str() {
            "subgroup" => {
                let mut args = Args::new(node);
                let of = args.nested("of")?;
                let ambient = match of {
                    Some(n) => self.group(n)?,
                    None => {
                        return Err(parse_error(node.pos, "`of=(group)` for a standalone subgroup", "`subgroup`"));
                    }
                };
                Spec::Subgroup(self.subgroup_with(&ambient, args)?)
            }
            "hnn" => Spec::Hnn(self.hnn(node)?),
            "amalgam" => Spec::Amalgam(self.amalgam(node)?),
            _ => Spec::Group(self.group(node)?),
        })
    }

    fn group(&self, node: &Node) -> Result<GroupOracle> {
        let mut args = Args::new(node);
        let g = match node.head.as_str() {
            "free" => GroupOracle::free(args.number("rank")? as usize),
            "abelian" => GroupOracle::free_abelian(args.number("rank")? as usize),
            "dihedral" => {
                let (q, p) = args.required_text("q")?;
                let q = match q {
                    "inf" | "∞" => None,
                    s => Some(
                        s.parse()
                            .map_err(|_| parse_error(p, "integer or `inf` for `q`", format!("`{s}`")))?,
                    ),
                };
                GroupOracle::dihedral(q)?
            }
            "cayley" => {
                let (file, _) = args.required_text("file")?;
                let gens = args
                    .list("gens")?
                    .ok_or_else(|| parse_error(node.pos, "argument `gens=`", "`cayley` without it"))?;
                let path = match &self.opts.base_dir {
                    Some(dir) if Path::new(file).is_relative() => dir.join(file),
                    _ => PathBuf::from(file),
                };
                let table = CayleyTable::load(&path)?;
                let label = if file.chars().all(is_bare) {
                    format!("cayley file={file}")
                } else {
                    format!("cayley file=\"{}\"", file.replace('\\', "\\\\").replace('"', "\\\""))
                };
                GroupOracle::finite(Arc::new(table), gens, label)?
            }
            "builtin" => {
                let (name, p) = args.required_text("name")?;
                let gens = args.list("gens")?;
                if corpus::builtin(name).is_none() {
                    return Err(parse_error(p, "a builtin group name", format!("`{name}`")));
                }
                corpus::builtin_oracle(name, gens)?
            }
            other => {
                return Err(parse_error(node.pos, "a group spec", format!("`{other}`")));
            }
        };
        let g = match args.text("names")? {
            Some((names, _)) => g.with_names(names.split(',').map(str::trim))?,
            None => g,
        };
        args.finish()?;
        Ok(g)
    }

    fn subgroup(&self, node: &Node, ambient: &GroupOracle) -> Result<SubgroupHandle> {
        if node.head != "subgroup" {
            return Err(parse_error(node.pos, "a subgroup spec", format!("`{}`", node.head)));
        }
        let mut args = Args::new(node);
        if args.nested("of")?.is_some() {
            return Err(parse_error(node.pos, "a subgroup of the enclosing group", "`of=` argument"));
        }
        self.subgroup_with(ambient, args)
    }

    fn subgroup_with(&self, ambient: &GroupOracle, mut args: Args<'_>) -> Result<SubgroupHandle> {
        let h = if args.flag("gmn") {
            let m = args.number("m")?;
            let n = args.number("n")?;
            SubgroupHandle::gmn(ambient, m, n)?
        } else if let Some(idx) = args.list("elements")? {
            SubgroupHandle::from_elements(ambient, &idx)?
        } else {
            let (gens, p) = args.required_text("gens")?;
            let words = gens
                .split([',', ';'])
                .scan(0usize, |off, s| {
                    let start = *off;
                    *off += s.len() + 1;
                    Some((start, s))
                })
                .filter(|(_, s)| !s.trim().is_empty())
                .map(|(off, s)| ambient.alphabet().parse_word(s).map_err(|e| relocate(e, p, off)))
                .collect::<Result<Vec<_>>>()?;
            SubgroupHandle::new(ambient, words)?
        };
        args.finish()?;
        Ok(h)
    }

    fn hnn(&self, node: &Node) -> Result<HnnPresentation> {
        let mut args = Args::new(node);
        let base = self.group(args.required_nested("base")?)?;
        let a = self.subgroup(args.required_nested("A")?, &base)?;
        let b = self.subgroup(args.required_nested("B")?, &base)?;
        let (phi, p) = args.required_text("phi")?;
        let stable = match args.text("stable")? {
            Some((s, _)) => s.to_string(),
            None => "t".to_string(),
        };
        args.finish()?;
        let pairs = parse_map(phi, p, base.alphabet(), base.alphabet())?;
        let images = images_for(&a, pairs, "phi")?;
        HnnPresentation::new(base, a, b, images, &stable)
    }

    fn amalgam(&self, node: &Node) -> Result<AmalgamPresentation> {
        let mut args = Args::new(node);
        let left = self.group(args.required_nested("left")?)?;
        let right = self.group(args.required_nested("right")?)?;
        let cl = self.subgroup(args.required_nested("C_left")?, &left)?;
        let cr = self.subgroup(args.required_nested("C_right")?, &right)?;
        let (iso, p) = args.required_text("iso")?;
        args.finish()?;
        let pairs = parse_map(iso, p, left.alphabet(), right.alphabet())?;
        let images = images_for(&cl, pairs, "iso")?;
        AmalgamPresentation::new(left, right, cl, cr, images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hnn::Classification;

    #[test]
    fn groups() {
        let g = parse_group("dihedral q=inf").unwrap();
        assert_eq!(g.describe(), "dihedral q=inf");
        let g = parse_group("free rank=2 names=x,y").unwrap();
        assert_eq!(g.alphabet().names(), ["x", "y"]);
        let g = parse_group("builtin name=S4").unwrap();
        assert_eq!(g.order(), Some(24));
        assert_eq!(parse_group(&g.describe()).unwrap().describe(), g.describe());
    }

    #[test]
    fn hnn_example() {
        let text = "hnn base=(free rank=2) A=(subgroup gens=\"a\") B=(subgroup gens=\"b\") phi=\"a -> b\" stable=t";
        let Spec::Hnn(p) = parse_spec(text).unwrap() else {
            panic!("not an hnn spec")
        };
        assert_eq!(p.classify(), Classification::Proper);
        assert_eq!(p.describe(), text);
    }

    #[test]
    fn image_outside_codomain() {
        let text = "hnn base=(free rank=2) A=(subgroup gens=\"a\") B=(subgroup gens=\"b\") phi=\"a -> a b\"";
        assert!(matches!(parse_spec(text), Err(Error::Validation(_))));
    }

    #[test]
    fn phi_matched_by_normal_form() {
        let text = "hnn base=(abelian rank=2) A=(subgroup gens=\"a b\") B=(subgroup gens=\"b\") phi=\"b a -> b\"";
        assert!(parse_spec(text).is_ok());
        let missing = "hnn base=(abelian rank=2) A=(subgroup gens=\"a b\") B=(subgroup gens=\"b\") phi=\"a -> b\"";
        assert!(matches!(parse_spec(missing), Err(Error::Validation(_))));
    }

    #[test]
    fn gmn_and_amalgam() {
        let Spec::Subgroup(h) = parse_spec("subgroup gmn m=1 n=2 of=(dihedral q=inf)").unwrap() else {
            panic!()
        };
        assert_eq!(h.generators().len(), 2);
        let text = "amalgam left=(builtin name=C4 names=x) right=(builtin name=C6 names=y) \
                    C_left=(subgroup gens=\"x^2\") C_right=(subgroup gens=\"y^3\") iso=\"x^2 -> y^3\"";
        let Spec::Amalgam(p) = parse_spec(text).unwrap() else { panic!() };
        assert!(p.is_proper());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_spec("free rank=two") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 11)),
            other => panic!("{other:?}"),
        }
        match parse_spec("hnn base=(free rank=2)\n  A=(subgroup gens=\"a\") B=(subgroup gens=\"c\") phi=\"a -> b\"") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            Err(Error::UnknownSymbol(_)) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_spec("dihedral q=inf extra"), Err(Error::Parse { .. })));
        assert!(matches!(parse_spec("group"), Err(Error::Parse { .. })));
        assert!(matches!(parse_spec("free rank=2 )"), Err(Error::Parse { .. })));
        assert!(matches!(parse_spec("free rank=2 size=3"), Err(Error::Parse { .. })));
        assert!(matches!(parse_spec("subgroup gens=\"a\""), Err(Error::Parse { .. })));
    }
}
