//! Line-oriented text format for groups and automorphism actions.
//!
//! ```text
//! group S3
//! kind permutation degree 3
//! gen a = (1 2)
//! gen b = (1 2 3)
//! end
//!
//! action inv on C3xC3
//! actor C2xC2
//! auto a: g1 -> g1^-1, g2 -> g2
//! auto b: g1 -> g1, g2 -> g2^-1
//! end
//! ```
//!
//! `#` starts a comment. Permutation points are 1-based and `()` is the
//! identity. For `kind table order <n>` each generator line gives the row of
//! the multiplication table belonging to that generator (`row[j] = g * j`,
//! labels `0..n`, label 0 the identity).

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

fn perr<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos: Pos { line, col },
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    Permutation { degree: usize },
    Table { order: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenBody {
    /// Disjoint cycles with 1-based points.
    Cycles(Vec<Vec<usize>>),
    /// A row of a multiplication table.
    Row(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenDef {
    pub name: String,
    pub body: GenBody,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub name: String,
    pub kind: GroupKind,
    pub gens: Vec<GenDef>,
    pub pos: Pos,
}

/// A word in named generators: `a b^-1 c^2`. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Word(pub Vec<(String, i64)>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutoDef {
    pub actor_gen: String,
    pub images: Vec<(String, Word)>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSpec {
    pub name: String,
    pub target: String,
    pub actor: String,
    pub autos: Vec<AutoDef>,
    pub pos: Pos,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpecDocument {
    pub groups: Vec<GroupSpec>,
    pub actions: Vec<ActionSpec>,
}

impl GroupSpec {
    /// Structural equality ignoring source positions.
    pub fn same_as(&self, other: &GroupSpec) -> bool {
        self.name == other.name
            && self.kind == other.kind
            && self.gens.len() == other.gens.len()
            && self
                .gens
                .iter()
                .zip(&other.gens)
                .all(|(a, b)| a.name == b.name && a.body == b.body)
    }
}

impl ActionSpec {
    pub fn same_as(&self, other: &ActionSpec) -> bool {
        self.name == other.name
            && self.target == other.target
            && self.actor == other.actor
            && self.autos.len() == other.autos.len()
            && self
                .autos
                .iter()
                .zip(&other.autos)
                .all(|(a, b)| a.actor_gen == b.actor_gen && a.images == b.images)
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Strips a trailing comment and returns the content with its starting column.
fn clean(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Column (1-based) of `needle` inside `line`, falling back to 1.
fn col_of(line: &str, needle: &str) -> usize {
    line.find(needle).map(|i| i + 1).unwrap_or(1)
}

/// Parses cycle notation such as `(1 2 3)(4 5)` or `()`.
pub fn parse_cycles(text: &str, degree: Option<usize>) -> Result<Vec<Vec<usize>>, (usize, String)> {
    let bytes = text.as_bytes();
    let mut cycles = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c != '(' {
            return Err((i, format!("expected '(' but found '{c}'")));
        }
        let open = i;
        let close = match text[i + 1..].find([')', '(']) {
            Some(off) if bytes[i + 1 + off] == b')' => i + 1 + off,
            _ => return Err((open, "unbalanced cycle parenthesis".to_string())),
        };
        let inner = &text[i + 1..close];
        let mut cycle = Vec::new();
        for tok in inner.split(|ch: char| ch.is_whitespace() || ch == ',') {
            if tok.is_empty() {
                continue;
            }
            let point: usize = tok.parse().map_err(|_| (open + 1, format!("invalid point '{tok}'")))?;
            if point == 0 {
                return Err((open + 1, "points are 1-based".to_string()));
            }
            if let Some(d) = degree {
                if point > d {
                    return Err((open + 1, format!("point {point} exceeds degree {d}")));
                }
            }
            if !seen.insert(point) {
                return Err((open + 1, format!("point {point} repeated")));
            }
            cycle.push(point);
        }
        if cycle.len() > 1 {
            cycles.push(cycle);
        }
        i = close + 1;
    }
    Ok(cycles)
}

pub fn parse_word(text: &str) -> Result<Word, (usize, String)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for tok in text.split_whitespace() {
        let at = text[offset..].find(tok).map(|i| i + offset).unwrap_or(offset);
        offset = at + tok.len();
        if tok == "1" || tok == "e" {
            continue;
        }
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e.parse().map_err(|_| (at, format!("invalid exponent in '{tok}'")))?;
                (n, e)
            }
            None => (tok, 1),
        };
        if !is_ident(name) {
            return Err((at, format!("invalid generator name '{name}'")));
        }
        if exp != 0 {
            out.push((name.to_string(), exp));
        }
    }
    Ok(Word(out))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (name, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if *e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

pub fn format_cycles(cycles: &[Vec<usize>]) -> String {
    if cycles.is_empty() {
        return "()".to_string();
    }
    cycles
        .iter()
        .map(|c| {
            let pts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            format!("({})", pts.join(" "))
        })
        .collect()
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group {}", self.name)?;
        match self.kind {
            GroupKind::Permutation { degree } => writeln!(f, "kind permutation degree {degree}")?,
            GroupKind::Table { order } => writeln!(f, "kind table order {order}")?,
        }
        for g in &self.gens {
            match &g.body {
                GenBody::Cycles(c) => writeln!(f, "gen {} = {}", g.name, format_cycles(c))?,
                GenBody::Row(r) => {
                    let row: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                    writeln!(f, "gen {} = {}", g.name, row.join(" "))?
                }
            }
        }
        writeln!(f, "end")
    }
}

impl fmt::Display for ActionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "action {} on {}", self.name, self.target)?;
        writeln!(f, "actor {}", self.actor)?;
        for a in &self.autos {
            let imgs: Vec<String> = a.images.iter().map(|(g, w)| format!("{g} -> {w}")).collect();
            writeln!(f, "auto {}: {}", a.actor_gen, imgs.join(", "))?;
        }
        writeln!(f, "end")
    }
}

impl fmt::Display for SpecDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for g in &self.groups {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "{g}")?;
        }
        for a in &self.actions {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

enum Block {
    Group {
        name: String,
        pos: Pos,
        kind: Option<GroupKind>,
        gens: Vec<GenDef>,
    },
    Action {
        name: String,
        target: String,
        pos: Pos,
        actor: Option<String>,
        autos: Vec<AutoDef>,
    },
}

/// Parses a document holding any number of `group` and `action` blocks.
pub fn parse_document(text: &str) -> Result<SpecDocument, ParseError> {
    let mut doc = SpecDocument::default();
    let mut block: Option<Block> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        last_line = ln;
        let content = clean(raw);
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (head, rest) = match trimmed.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (trimmed, ""),
        };
        let head_col = col_of(raw, head);
        match (&mut block, head) {
            (None, "group") => {
                if !is_ident(rest) {
                    return perr(ln, head_col, format!("invalid group name '{rest}'"));
                }
                block = Some(Block::Group {
                    name: rest.to_string(),
                    pos: Pos {
                        line: ln,
                        col: head_col,
                    },
                    kind: None,
                    gens: Vec::new(),
                });
            }
            (None, "action") => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 3 || parts[1] != "on" || !is_ident(parts[0]) || !is_ident(parts[2]) {
                    return perr(ln, head_col, "expected 'action <name> on <group>'");
                }
                block = Some(Block::Action {
                    name: parts[0].to_string(),
                    target: parts[2].to_string(),
                    pos: Pos {
                        line: ln,
                        col: head_col,
                    },
                    actor: None,
                    autos: Vec::new(),
                });
            }
            (None, other) => {
                return perr(ln, head_col, format!("expected 'group' or 'action', found '{other}'"));
            }
            (Some(Block::Group { kind, .. }), "kind") => {
                if kind.is_some() {
                    return perr(ln, head_col, "duplicate 'kind' line");
                }
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let parsed = match parts.as_slice() {
                    ["permutation", "degree", d] => d
                        .parse::<usize>()
                        .ok()
                        .filter(|&d| d >= 1)
                        .map(|degree| GroupKind::Permutation { degree }),
                    ["table", "order", n] => n
                        .parse::<usize>()
                        .ok()
                        .filter(|&n| n >= 1)
                        .map(|order| GroupKind::Table { order }),
                    _ => None,
                };
                match parsed {
                    Some(k) => *kind = Some(k),
                    None => {
                        return perr(
                            ln,
                            head_col,
                            "expected 'kind permutation degree <d>' or 'kind table order <n>'",
                        )
                    }
                }
            }
            (Some(Block::Group { kind, gens, .. }), "gen") => {
                let Some(kind) = kind.as_ref() else {
                    return perr(ln, head_col, "'gen' before 'kind'");
                };
                let Some((name, body)) = rest.split_once('=') else {
                    return perr(ln, head_col, "expected 'gen <name> = <body>'");
                };
                let name = name.trim();
                if !is_ident(name) {
                    return perr(ln, col_of(raw, name), format!("invalid generator name '{name}'"));
                }
                if gens.iter().any(|g| g.name == name) {
                    return perr(ln, col_of(raw, name), format!("duplicate generator '{name}'"));
                }
                let body_text = body.trim();
                let body_col = raw.find('=').map(|i| i + 2).unwrap_or(1) + (body.len() - body.trim_start().len());
                let body = match kind {
                    GroupKind::Permutation { degree } => match parse_cycles(body_text, Some(*degree)) {
                        Ok(c) => GenBody::Cycles(c),
                        Err((off, msg)) => return perr(ln, body_col + off, msg),
                    },
                    GroupKind::Table { order } => {
                        let mut row = Vec::new();
                        for tok in body_text.split_whitespace() {
                            match tok.parse::<usize>() {
                                Ok(v) if v < *order => row.push(v),
                                _ => return perr(ln, col_of(raw, tok), format!("invalid table entry '{tok}'")),
                            }
                        }
                        if row.len() != *order {
                            return perr(
                                ln,
                                body_col,
                                format!("table row has {} entries, expected {order}", row.len()),
                            );
                        }
                        GenBody::Row(row)
                    }
                };
                gens.push(GenDef {
                    name: name.to_string(),
                    body,
                    pos: Pos {
                        line: ln,
                        col: head_col,
                    },
                });
            }
            (Some(Block::Action { actor, .. }), "actor") => {
                if !is_ident(rest) {
                    return perr(ln, head_col, format!("invalid actor group '{rest}'"));
                }
                *actor = Some(rest.to_string());
            }
            (Some(Block::Action { autos, .. }), "auto") => {
                let Some((agen, images)) = rest.split_once(':') else {
                    return perr(ln, head_col, "expected 'auto <gen>: <g> -> <word>, ...'");
                };
                let agen = agen.trim();
                if !is_ident(agen) {
                    return perr(ln, col_of(raw, agen), format!("invalid actor generator '{agen}'"));
                }
                let mut parsed = Vec::new();
                for item in images.split(',') {
                    let Some((src, word)) = item.split_once("->") else {
                        return perr(ln, col_of(raw, item.trim()), "expected '<g> -> <word>'");
                    };
                    let src = src.trim();
                    if !is_ident(src) {
                        return perr(ln, col_of(raw, src), format!("invalid generator '{src}'"));
                    }
                    let word_col = col_of(raw, item) + item.find("->").unwrap_or(0) + 2;
                    let w = match parse_word(word) {
                        Ok(w) => w,
                        Err((off, msg)) => return perr(ln, word_col + off, msg),
                    };
                    parsed.push((src.to_string(), w));
                }
                autos.push(AutoDef {
                    actor_gen: agen.to_string(),
                    images: parsed,
                    pos: Pos {
                        line: ln,
                        col: head_col,
                    },
                });
            }
            (Some(_), "end") => match block.take().expect("block present") {
                Block::Group { name, pos, kind, gens } => {
                    let Some(kind) = kind else {
                        return perr(ln, head_col, format!("group '{name}' has no 'kind' line"));
                    };
                    doc.groups.push(GroupSpec { name, kind, gens, pos });
                }
                Block::Action {
                    name,
                    target,
                    pos,
                    actor,
                    autos,
                } => {
                    let Some(actor) = actor else {
                        return perr(ln, head_col, format!("action '{name}' has no 'actor' line"));
                    };
                    doc.actions.push(ActionSpec {
                        name,
                        target,
                        actor,
                        autos,
                        pos,
                    });
                }
            },
            (Some(_), other) => {
                return perr(ln, head_col, format!("unexpected keyword '{other}'"));
            }
        }
    }
    if block.is_some() {
        return perr(last_line + 1, 1, "missing 'end'");
    }
    Ok(doc)
}

/// Parses text that must contain exactly one group block.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec, ParseError> {
    let mut doc = parse_document(text)?;
    if doc.groups.len() != 1 || !doc.actions.is_empty() {
        return perr(1, 1, "expected exactly one group block");
    }
    Ok(doc.groups.remove(0))
}

/// Parses text that must contain exactly one action block.
pub fn parse_action_spec(text: &str) -> Result<ActionSpec, ParseError> {
    let mut doc = parse_document(text)?;
    if doc.actions.len() != 1 || !doc.groups.is_empty() {
        return perr(1, 1, "expected exactly one action block");
    }
    Ok(doc.actions.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    const S3: &str = "group S3\nkind permutation degree 3\ngen a = (1 2)\ngen b = (1 2 3)\nend\n";

    #[test]
    fn s3_has_two_generators() {
        let g = parse_group_spec(S3).unwrap();
        assert_eq!(g.gens.len(), 2);
        assert_eq!(g.kind, GroupKind::Permutation { degree: 3 });
        assert_eq!(g.gens[1].body, GenBody::Cycles(vec![vec![1, 2, 3]]));
    }

    #[test]
    fn unbalanced_parenthesis_reports_position() {
        let text = "group X\nkind permutation degree 3\ngen a = (1 2\nend\n";
        let err = parse_group_spec(text).unwrap_err();
        assert_eq!(err.pos.line, 3);
        assert_eq!(err.pos.col, 9);
        assert!(err.message.contains("unbalanced"));
    }

    #[test]
    fn canonical_print_round_trips() {
        let g = parse_group_spec(S3).unwrap();
        assert_eq!(g.to_string(), S3);
        assert!(parse_group_spec(&g.to_string()).unwrap().same_as(&g));
    }

    #[test]
    fn action_block() {
        let text =
            "action inv on C3xC3\nactor C2xC2\nauto a: g1 -> g1^-1, g2 -> g2\nauto b: g1 -> 1, g2 -> g2 g2\nend\n";
        let a = parse_action_spec(text).unwrap();
        assert_eq!(a.autos.len(), 2);
        assert_eq!(a.autos[0].images[0].1, Word(vec![("g1".into(), -1)]));
        assert_eq!(a.autos[1].images[0].1, Word(vec![]));
        assert_eq!(a.to_string(), text);
    }

    #[test]
    fn rejects_point_beyond_degree() {
        let text = "group X\nkind permutation degree 3\ngen a = (1 4)\nend\n";
        assert!(parse_group_spec(text).is_err());
    }

    #[test]
    fn identity_cycle() {
        assert_eq!(parse_cycles("()", Some(3)).unwrap(), Vec::<Vec<usize>>::new());
        assert_eq!(parse_cycles("(1)(2 3)", Some(3)).unwrap(), vec![vec![2, 3]]);
    }

    #[test]
    fn missing_end() {
        let err = parse_document("group X\nkind table order 1\n").unwrap_err();
        assert!(err.message.contains("end"));
    }
}
