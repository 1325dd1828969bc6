// SPDX-License-Identifier: Apache-2.0
//! The line-oriented text formats for posets, systems, frames, witness-free
//! systems and mappings.
//!
//! Every document starts with `kind <k>`. `#` starts a comment outside
//! quotes. Names containing whitespace or any of `:#"{},()\` are written in
//! double quotes with `\"` and `\\` escapes.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::appmap::ApproxMap;
use crate::classic::{Ais, Cis};
use crate::error::{Error, Result};
use crate::finposet::FinPoset;
use crate::frames::Frame;
use crate::system::{Isw, WitnessedSet};
use crate::tokenset::{Token, TokenSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Poset(FinPoset),
    Isw(Isw),
    Frame(Frame),
    Cis(Cis),
    Ais(Ais),
    Map(ApproxMap),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Poset(_) => "poset",
            Document::Isw(_) => "isw",
            Document::Frame(_) => "frame",
            Document::Cis(_) => "cis",
            Document::Ais(_) => "ais",
            Document::Map(_) => "map",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Lex {
    Word(String),
    Colon,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Splits a line into words and colons, dropping a trailing comment.
fn lex_line(line: &str, no: usize) -> Result<Vec<Lex>> {
    let mut out = Vec::new();
    let mut chars = line.chars().peekable();
    let mut word = String::new();
    let mut in_word = false;
    while let Some(c) = chars.next() {
        match c {
            '#' => break,
            ':' => {
                if in_word {
                    out.push(Lex::Word(std::mem::take(&mut word)));
                    in_word = false;
                }
                out.push(Lex::Colon);
            }
            '"' => {
                in_word = true;
                loop {
                    match chars.next() {
                        None => return Err(parse_err(no, "unterminated quoted name")),
                        Some('"') => break,
                        Some('\\') => match chars.next() {
                            Some(e @ ('"' | '\\')) => word.push(e),
                            _ => return Err(parse_err(no, "bad escape in quoted name")),
                        },
                        Some(ch) => word.push(ch),
                    }
                }
            }
            c if c.is_whitespace() => {
                if in_word {
                    out.push(Lex::Word(std::mem::take(&mut word)));
                    in_word = false;
                }
            }
            c => {
                in_word = true;
                word.push(c);
            }
        }
    }
    if in_word {
        out.push(Lex::Word(word));
    }
    Ok(out)
}

/// Writes a name, quoting it when it would not lex back as one word.
pub fn quote(name: &str) -> String {
    let plain = !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || ":#\"{},()\\".contains(c));
    if plain {
        return name.to_string();
    }
    let mut out = String::from("\"");
    for c in name.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

struct Line {
    no: usize,
    keyword: String,
    rest: Vec<Lex>,
}

fn lines(text: &str) -> Result<Vec<Line>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let no = k + 1;
        let mut lexed = lex_line(raw, no)?;
        if lexed.is_empty() {
            continue;
        }
        let Lex::Word(keyword) = lexed.remove(0) else {
            return Err(parse_err(no, "line starts with `:`"));
        };
        out.push(Line {
            no,
            keyword,
            rest: lexed,
        });
    }
    Ok(out)
}

/// Splits `rest` at colons into groups of words.
fn groups(line: &Line) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    for l in &line.rest {
        match l {
            Lex::Colon => out.push(Vec::new()),
            Lex::Word(w) => out.last_mut().expect("nonempty").push(w.clone()),
        }
    }
    out
}

fn words(line: &Line) -> Result<Vec<String>> {
    let g = groups(line);
    if g.len() != 1 {
        return Err(parse_err(line.no, format!("unexpected `:` in `{}` line", line.keyword)));
    }
    Ok(g.into_iter().next().expect("one group"))
}

fn shape(line: &Line, sizes: &[Option<usize>]) -> Result<Vec<Vec<String>>> {
    let g = groups(line);
    let ok = g.len() == sizes.len()
        && g.iter().zip(sizes).all(|(w, s)| s.is_none_or(|n| w.len() == n));
    if !ok {
        return Err(parse_err(line.no, format!("malformed `{}` line", line.keyword)));
    }
    Ok(g)
}

fn header(ls: &[Line]) -> Result<(&'static str, &[Line])> {
    let Some(first) = ls.first() else {
        return Err(parse_err(1, "empty document; expected `kind ...`"));
    };
    if first.keyword != "kind" {
        return Err(parse_err(first.no, "expected `kind ...` header"));
    }
    let w = words(first)?;
    let kind = match w.as_slice() {
        [k] => match k.as_str() {
            "poset" => "poset",
            "isw" => "isw",
            "frame" => "frame",
            "cis" => "cis",
            "ais" => "ais",
            "map" => "map",
            other => return Err(parse_err(first.no, format!("unknown kind `{other}`"))),
        },
        _ => return Err(parse_err(first.no, "expected exactly one kind")),
    };
    Ok((kind, &ls[1..]))
}

struct Names {
    list: Vec<String>,
    index: HashMap<String, usize>,
}

impl Names {
    fn new(list: Vec<String>, no: usize) -> Result<Self> {
        let mut index = HashMap::new();
        for (k, n) in list.iter().enumerate() {
            if index.insert(n.clone(), k).is_some() {
                return Err(parse_err(no, format!("duplicate name `{n}`")));
            }
        }
        Ok(Names { list, index })
    }

    fn get(&self, name: &str, no: usize) -> Result<Token> {
        self.index
            .get(name)
            .map(|&k| Token(k))
            .ok_or_else(|| parse_err(no, format!("unknown token `{name}`")))
    }

    fn set(&self, names: &[String], no: usize) -> Result<TokenSet> {
        names.iter().map(|n| self.get(n, no)).collect()
    }
}

/// Reads the `tokens` line and an optional `delta` line, in any position.
fn token_header(body: &[Line], need_delta: bool) -> Result<(Names, Option<Token>, Vec<&Line>)> {
    let mut names = None;
    let mut delta_name = None;
    let mut rest = Vec::new();
    for l in body {
        match l.keyword.as_str() {
            "tokens" if names.is_none() => names = Some(Names::new(words(l)?, l.no)?),
            "tokens" => return Err(parse_err(l.no, "second `tokens` line")),
            "delta" if need_delta && delta_name.is_none() => match words(l)?.as_slice() {
                [d] => delta_name = Some((d.clone(), l.no)),
                _ => return Err(parse_err(l.no, "`delta` takes one token")),
            },
            "delta" if need_delta => return Err(parse_err(l.no, "second `delta` line")),
            _ => rest.push(l),
        }
    }
    let names = names.ok_or_else(|| parse_err(body.first().map_or(1, |l| l.no), "missing `tokens` line"))?;
    let delta = match delta_name {
        Some((d, no)) => Some(names.get(&d, no)?),
        None if need_delta => {
            return Err(parse_err(body.last().map_or(1, |l| l.no), "missing `delta` line"))
        }
        None => None,
    };
    Ok((names, delta, rest))
}

fn unknown(l: &Line) -> Error {
    parse_err(l.no, format!("unknown keyword `{}`", l.keyword))
}

fn parse_poset(body: &[Line]) -> Result<FinPoset> {
    let mut elems: Option<Vec<String>> = None;
    let mut pairs = Vec::new();
    for l in body {
        match l.keyword.as_str() {
            "elems" if elems.is_none() => elems = Some(words(l)?),
            "le" => match words(l)?.as_slice() {
                [a, b] => pairs.push((a.clone(), b.clone(), l.no)),
                _ => return Err(parse_err(l.no, "`le` takes two elements")),
            },
            _ => return Err(unknown(l)),
        }
    }
    let elems = elems.ok_or_else(|| parse_err(1, "missing `elems` line"))?;
    let names = Names::new(elems.clone(), 1)?;
    for (a, b, no) in &pairs {
        names.get(a, *no)?;
        names.get(b, *no)?;
    }
    let pairs: Vec<(String, String)> = pairs.into_iter().map(|(a, b, _)| (a, b)).collect();
    FinPoset::from_pairs(&elems, &pairs)
}

fn parse_isw(body: &[Line]) -> Result<Isw> {
    let (names, delta, rest) = token_header(body, true)?;
    let mut con = Vec::new();
    let mut ent = Vec::new();
    for l in rest {
        match l.keyword.as_str() {
            "con" => {
                let g = shape(l, &[Some(1), None])?;
                let p = WitnessedSet::new(names.get(&g[0][0], l.no)?, names.set(&g[1], l.no)?);
                con.push(p);
            }
            "ent" => {
                let g = shape(l, &[Some(1), None, None])?;
                let p = WitnessedSet::new(names.get(&g[0][0], l.no)?, names.set(&g[1], l.no)?);
                if g[2].is_empty() {
                    return Err(parse_err(l.no, "`ent` line names no entailed token"));
                }
                for a in &g[2] {
                    ent.push((p, names.get(a, l.no)?));
                }
            }
            _ => return Err(unknown(l)),
        }
    }
    Isw::new(names.list, delta.expect("required"), con, ent)
}

fn parse_frame(body: &[Line]) -> Result<Frame> {
    let (names, delta, rest) = token_header(body, true)?;
    let mut con = Vec::new();
    let mut ent = Vec::new();
    let mut declared_r = Vec::new();
    for l in rest {
        if let Some(i) = l.keyword.strip_prefix("con@") {
            let g = shape(l, &[Some(0), None])?;
            con.push((names.get(i, l.no)?, names.set(&g[1], l.no)?));
        } else if let Some(i) = l.keyword.strip_prefix("ent@") {
            let g = shape(l, &[Some(0), None, None])?;
            let (i, x) = (names.get(i, l.no)?, names.set(&g[1], l.no)?);
            if g[2].is_empty() {
                return Err(parse_err(l.no, "`ent@` line names no entailed token"));
            }
            for a in &g[2] {
                ent.push((i, x, names.get(a, l.no)?));
            }
        } else if l.keyword == "R" {
            match words(l)?.as_slice() {
                [i, j] => declared_r.push((names.get(i, l.no)?, names.get(j, l.no)?, l.no)),
                _ => return Err(parse_err(l.no, "`R` takes two tokens")),
            }
        } else {
            return Err(unknown(l));
        }
    }
    let f = Frame::new(names.list, delta.expect("required"), con, ent)?;
    for (i, j, no) in declared_r {
        if !f.accessible(i, j) {
            return Err(parse_err(
                no,
                format!(
                    "declared `R {} {}` but {{{}}} ∉ con@{}",
                    f.name(i),
                    f.name(j),
                    f.name(i),
                    f.name(j)
                ),
            ));
        }
    }
    Ok(f)
}

type ClassicParts = (Vec<String>, Option<Token>, Vec<TokenSet>, Vec<(TokenSet, Token)>);

fn parse_classic(body: &[Line], need_delta: bool) -> Result<ClassicParts> {
    let (names, delta, rest) = token_header(body, need_delta)?;
    let mut con = Vec::new();
    let mut ent = Vec::new();
    for l in rest {
        match l.keyword.as_str() {
            "con" => {
                let g = shape(l, &[Some(0), None])?;
                con.push(names.set(&g[1], l.no)?);
            }
            "ent" => {
                let g = shape(l, &[None, None])?;
                let x = names.set(&g[0], l.no)?;
                if g[1].is_empty() {
                    return Err(parse_err(l.no, "`ent` line names no entailed token"));
                }
                for a in &g[1] {
                    ent.push((x, names.get(a, l.no)?));
                }
            }
            _ => return Err(unknown(l)),
        }
    }
    Ok((names.list, delta, con, ent))
}

/// A parsed mapping whose systems are still file paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapSpec {
    pub source: String,
    pub target: String,
    /// `(witness, body, entailed)` by name, with line numbers.
    pub rel: Vec<(usize, String, Vec<String>, Vec<String>)>,
}

fn parse_map_spec(body: &[Line]) -> Result<MapSpec> {
    let mut source = None;
    let mut target = None;
    let mut rel = Vec::new();
    for l in body {
        match l.keyword.as_str() {
            "source" | "target" => {
                let w = words(l)?;
                let [p] = w.as_slice() else {
                    return Err(parse_err(l.no, format!("`{}` takes one path", l.keyword)));
                };
                let slot = if l.keyword == "source" { &mut source } else { &mut target };
                if slot.replace(p.clone()).is_some() {
                    return Err(parse_err(l.no, format!("second `{}` line", l.keyword)));
                }
            }
            "rel" => {
                let g = shape(l, &[Some(1), None, None])?;
                if g[2].is_empty() {
                    return Err(parse_err(l.no, "`rel` line names no target token"));
                }
                rel.push((l.no, g[0][0].clone(), g[1].clone(), g[2].clone()));
            }
            _ => return Err(unknown(l)),
        }
    }
    Ok(MapSpec {
        source: source.ok_or_else(|| parse_err(1, "missing `source` line"))?,
        target: target.ok_or_else(|| parse_err(1, "missing `target` line"))?,
        rel,
    })
}

impl MapSpec {
    pub fn resolve(&self, source: Isw, target: Isw) -> Result<ApproxMap> {
        let mut rel = Vec::new();
        for (no, w, body, heads) in &self.rel {
            let i = source.token(w).ok_or_else(|| parse_err(*no, format!("unknown source token `{w}`")))?;
            let x = body
                .iter()
                .map(|n| source.token(n).ok_or_else(|| parse_err(*no, format!("unknown source token `{n}`"))))
                .collect::<Result<TokenSet>>()?;
            for b in heads {
                let b = target.token(b).ok_or_else(|| parse_err(*no, format!("unknown target token `{b}`")))?;
                rel.push((WitnessedSet::new(i, x), b));
            }
        }
        ApproxMap::new(source, target, rel)
    }
}

/// Parses any document except a mapping, which needs its systems loaded;
/// see [`load`] and [`parse_map`].
pub fn parse(text: &str) -> Result<Document> {
    let ls = lines(text)?;
    let (kind, body) = header(&ls)?;
    Ok(match kind {
        "poset" => Document::Poset(parse_poset(body)?),
        "isw" => Document::Isw(parse_isw(body)?),
        "frame" => Document::Frame(parse_frame(body)?),
        "cis" => {
            let (t, _, c, e) = parse_classic(body, false)?;
            Document::Cis(Cis::new(t, c, e)?)
        }
        "ais" => {
            let (t, d, c, e) = parse_classic(body, true)?;
            Document::Ais(Ais::new(t, d.expect("required"), c, e)?)
        }
        _ => {
            return Err(Error::KindMismatch {
                expected: "a system or poset".into(),
                found: "map".into(),
            })
        }
    })
}

pub fn parse_map(text: &str) -> Result<MapSpec> {
    let ls = lines(text)?;
    let (kind, body) = header(&ls)?;
    if kind != "map" {
        return Err(Error::KindMismatch {
            expected: "map".into(),
            found: kind.into(),
        });
    }
    parse_map_spec(body)
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

/// Reads a document. Mappings are resolved through [`load_map`].
pub fn load(path: &Path) -> Result<Document> {
    let text = read_file(path)?;
    let ls = lines(&text)?;
    let (kind, _) = header(&ls)?;
    if kind == "map" {
        return Ok(Document::Map(load_map(path)?.map));
    }
    parse(&text)
}

/// A mapping with the paths its systems were read from.
#[derive(Debug, Clone)]
pub struct LoadedMap {
    pub map: ApproxMap,
    pub source_path: PathBuf,
    pub target_path: PathBuf,
}

/// Reads a mapping; `source` and `target` paths are taken relative to the
/// mapping file and must name `isw` documents.
pub fn load_map(path: &Path) -> Result<LoadedMap> {
    let spec = parse_map(&read_file(path)?)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let sys = |p: &PathBuf| -> Result<Isw> {
        match load(p)? {
            Document::Isw(s) => Ok(s),
            other => Err(Error::KindMismatch {
                expected: "isw".into(),
                found: other.kind().into(),
            }),
        }
    };
    let source_path = dir.join(&spec.source);
    let target_path = dir.join(&spec.target);
    let map = spec.resolve(sys(&source_path)?, sys(&target_path)?)?;
    Ok(LoadedMap {
        map,
        source_path,
        target_path,
    })
}

fn join(names: impl Iterator<Item = String>) -> String {
    names.collect::<Vec<_>>().join(" ")
}

fn names_of(tokens: &[String], x: TokenSet) -> String {
    join(x.iter().map(|t| quote(&tokens[t.0])))
}

fn body_part(tokens: &[String], x: TokenSet) -> String {
    if x.is_empty() {
        String::new()
    } else {
        format!(" {}", names_of(tokens, x))
    }
}

pub fn write_poset(p: &FinPoset) -> String {
    let mut out = String::from("kind poset\n");
    let _ = writeln!(out, "elems {}", join(p.names().iter().map(|n| quote(n))));
    for (a, b) in p.covers() {
        let _ = writeln!(out, "le {} {}", quote(p.name(a)), quote(p.name(b)));
    }
    out
}

pub fn write_isw(s: &Isw) -> String {
    let t = s.tokens();
    let mut out = String::from("kind isw\n");
    let _ = writeln!(out, "tokens {}", join(t.iter().map(|n| quote(n))));
    let _ = writeln!(out, "delta {}", quote(s.name(s.delta())));
    for (p, _) in s.con_entries() {
        let _ = writeln!(out, "con {} :{}", quote(s.name(p.witness)), body_part(t, p.body));
    }
    for (p, e) in s.con_entries() {
        for a in e.iter() {
            let _ = writeln!(
                out,
                "ent {} :{} : {}",
                quote(s.name(p.witness)),
                body_part(t, p.body),
                quote(s.name(a))
            );
        }
    }
    out
}

pub fn write_frame(f: &Frame) -> String {
    let t = f.tokens();
    let mut out = String::from("kind frame\n");
    let _ = writeln!(out, "tokens {}", join(t.iter().map(|n| quote(n))));
    let _ = writeln!(out, "delta {}", quote(f.name(f.delta())));
    for (i, x, _) in f.entries() {
        let _ = writeln!(out, "con@{} :{}", quote(f.name(i)), body_part(t, x));
    }
    for (i, x, e) in f.entries() {
        for a in e.iter() {
            let _ = writeln!(out, "ent@{} :{} : {}", quote(f.name(i)), body_part(t, x), quote(f.name(a)));
        }
    }
    out
}

fn write_classic(
    kind: &str,
    tokens: &[String],
    delta: Option<&str>,
    entries: impl Iterator<Item = (TokenSet, TokenSet)>,
) -> String {
    let entries: Vec<_> = entries.collect();
    let mut out = format!("kind {kind}\n");
    let _ = writeln!(out, "tokens {}", join(tokens.iter().map(|n| quote(n))));
    if let Some(d) = delta {
        let _ = writeln!(out, "delta {}", quote(d));
    }
    for &(x, _) in &entries {
        let _ = writeln!(out, "con :{}", body_part(tokens, x));
    }
    for (x, e) in entries {
        for a in e.iter() {
            let lhs = names_of(tokens, x);
            let sep = if lhs.is_empty() { "" } else { " " };
            let _ = writeln!(out, "ent {lhs}{sep}: {}", quote(&tokens[a.0]));
        }
    }
    out
}

pub fn write_cis(c: &Cis) -> String {
    write_classic("cis", c.tokens(), None, c.con_entries())
}

pub fn write_ais(a: &Ais) -> String {
    write_classic("ais", a.tokens(), Some(&a.tokens()[a.delta().0]), a.con_entries())
}

pub fn write_map(h: &ApproxMap, source: &str, target: &str) -> String {
    let (s, t) = (h.source(), h.target());
    let mut out = String::from("kind map\n");
    let _ = writeln!(out, "source {}", quote(source));
    let _ = writeln!(out, "target {}", quote(target));
    for (p, b) in h.pairs() {
        let _ = writeln!(
            out,
            "rel {} :{} : {}",
            quote(s.name(p.witness)),
            body_part(s.tokens(), p.body),
            quote(t.name(b))
        );
    }
    out
}

/// Serializes any non-mapping document.
pub fn write(doc: &Document) -> Option<String> {
    Some(match doc {
        Document::Poset(p) => write_poset(p),
        Document::Isw(s) => write_isw(s),
        Document::Frame(f) => write_frame(f),
        Document::Cis(c) => write_cis(c),
        Document::Ais(a) => write_ais(a),
        Document::Map(_) => return None,
    })
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// The Hasse diagram in DOT, drawn bottom-up.
pub fn write_dot(p: &FinPoset) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for x in p.elems() {
        let _ = writeln!(out, "  n{x} [label=\"{}\"];", dot_escape(p.name(x)));
    }
    for (a, b) in p.covers() {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}

/// `{a,b}` with names quoted as needed, members in declared order.
pub fn format_state(tokens: &[String], x: TokenSet) -> String {
    let names: Vec<String> = x.iter().map(|t| quote(&tokens[t.0])).collect();
    format!("{{{}}}", names.join(","))
}

/// Parses `{a,b}`; whitespace around names is ignored.
pub fn parse_state(tokens: &[String], text: &str) -> Result<TokenSet> {
    let bad = |msg: String| parse_err(1, msg);
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| bad(format!("state `{text}` is not of the form {{a,b}}")))?;
    let mut out = TokenSet::EMPTY;
    let mut chars = inner.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        let Some(&c) = chars.peek() else { break };
        let mut name = String::new();
        if c == '"' {
            chars.next();
            loop {
                match chars.next() {
                    None => return Err(bad("unterminated quoted name in state".into())),
                    Some('"') => break,
                    Some('\\') => match chars.next() {
                        Some(e) => name.push(e),
                        None => return Err(bad("bad escape in state".into())),
                    },
                    Some(ch) => name.push(ch),
                }
            }
        } else {
            while let Some(&ch) = chars.peek() {
                if ch == ',' {
                    break;
                }
                name.push(ch);
                chars.next();
            }
            name = name.trim_end().to_string();
        }
        let k = tokens
            .iter()
            .position(|t| *t == name)
            .ok_or_else(|| bad(format!("unknown token `{name}` in state")))?;
        out.insert(Token(k));
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        match chars.next() {
            None => break,
            Some(',') => continue,
            Some(ch) => return Err(bad(format!("unexpected `{ch}` in state"))),
        }
    }
    Ok(out)
}
