//! The line-oriented input language for graphs of groups.
//!
//! ```text
//! # comment
//! group A = dihedral(6)
//! group B = cyclic(4)
//! edge e : cyclic(2) -> A(x |-> a), B(x |-> a^2)
//! char A.a = -1
//! option order_cap = 1024
//! ```
//!
//! Left-hand names in an embedding bind positionally to the edge group's
//! generators; right-hand words are over the target vertex group's
//! generator names. The arrow accepts both `|->` and the Unicode form.

use crate::catalog::{construct_catalog_group, generator_names};
use crate::gog::{EdgeData, GraphOfGroups, OrientationData, VertexData};
use crate::group::{CatalogTag, DEFAULT_ORDER_CAP};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
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

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{pos}: expected {expected}")]
    Syntax { pos: Pos, expected: String },
    #[error("{pos}: name {name} has not been declared")]
    UndeclaredName { pos: Pos, name: String },
    #[error("{pos}: name {name} is already declared")]
    DuplicateName { pos: Pos, name: String },
    #[error("{pos}: {msg}")]
    Invalid { pos: Pos, msg: String },
    #[error("document declares no groups")]
    Empty,
}

/// A word over named generators.
pub type NamedWord = Vec<(String, i64)>;

#[derive(Debug, Clone)]
pub struct GroupDecl {
    pub name: String,
    pub tag: CatalogTag,
    pub pos: Pos,
}

#[derive(Debug, Clone)]
pub struct EndpointDecl {
    pub vertex: String,
    /// one (binder, word) per edge-group generator, in order
    pub images: Vec<(String, NamedWord)>,
    pub pos: Pos,
}

#[derive(Debug, Clone)]
pub struct EdgeDecl {
    pub name: String,
    pub tag: CatalogTag,
    pub from: EndpointDecl,
    pub to: EndpointDecl,
    pub pos: Pos,
}

#[derive(Debug, Clone)]
pub enum CharTarget {
    VertexGen { vertex: String, gen: String },
    BareGen { gen: String },
    Edge { edge: String },
}

#[derive(Debug, Clone)]
pub struct CharDecl {
    pub target: CharTarget,
    pub sign: i8,
    pub pos: Pos,
}

#[derive(Debug, Clone, Default)]
pub struct GogDocument {
    pub groups: Vec<GroupDecl>,
    pub edges: Vec<EdgeDecl>,
    pub chars: Vec<CharDecl>,
    pub options: BTreeMap<String, String>,
}

struct Cursor<'a> {
    text: &'a str,
    bytes: &'a [u8],
    i: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Cursor<'a> {
        Cursor { text, bytes: text.as_bytes(), i: 0, line }
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.i + 1 }
    }

    fn skip_ws(&mut self) {
        while self.i < self.bytes.len() && (self.bytes[self.i] == b' ' || self.bytes[self.i] == b'\t') {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.i..].chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.text[self.i..].starts_with(token) {
            self.i += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(ParseError::Syntax { pos: self.pos(), expected: format!("`{token}`") })
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.i;
        let mut end = self.i;
        for (off, c) in self.text[self.i..].char_indices() {
            let ok = if off == 0 {
                c.is_ascii_alphabetic() || c == '_'
            } else {
                c.is_ascii_alphanumeric() || c == '_' || c == '\''
            };
            if !ok {
                break;
            }
            end = self.i + off + c.len_utf8();
        }
        if end == start {
            return Err(ParseError::Syntax { pos: self.pos(), expected: "identifier".into() });
        }
        let s = self.text[start..end].to_string();
        self.i = end;
        Ok(s)
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.i;
        let mut end = self.i;
        let bytes = self.bytes;
        if end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
            end += 1;
        }
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        let s = &self.text[start..end];
        let v: i64 =
            s.parse().map_err(|_| ParseError::Syntax { pos: self.pos(), expected: "integer".into() })?;
        self.i = end;
        Ok(v)
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.i >= self.bytes.len()
    }
}

fn parse_tag(c: &mut Cursor) -> Result<CatalogTag, ParseError> {
    let pos = c.pos();
    let name = c.ident()?;
    c.expect("(")?;
    let tag = match name.as_str() {
        "cyclic" => CatalogTag::Cyclic(c.integer()?.max(0) as u64),
        "trivial" => {
            // accepts trivial() and trivial(1)
            if c.peek().is_some_and(|ch| ch.is_ascii_digit()) {
                c.integer()?;
            }
            CatalogTag::Cyclic(1)
        }
        "dihedral" => CatalogTag::Dihedral(c.integer()?.max(0) as u64),
        "quaternionic" => {
            let order = c.integer()?;
            if order < 8 || (order & (order - 1)) != 0 {
                return Err(ParseError::Invalid {
                    pos,
                    msg: format!("quaternionic order must be a power of two at least 8, got {order}"),
                });
            }
            CatalogTag::Quaternionic(order.trailing_zeros())
        }
        "metacyclic" => {
            let m = c.integer()?;
            c.expect(",")?;
            let n = c.integer()?;
            c.expect(",")?;
            let r = c.integer()?;
            CatalogTag::Metacyclic { m: m.max(0) as u64, n: n.max(0) as u64, r: r.max(0) as u64 }
        }
        "binary_tetrahedral" => CatalogTag::BinaryTetrahedral(c.integer()?.max(0) as u32),
        "binary_octahedral" => CatalogTag::BinaryOctahedral(c.integer()?.max(0) as u32),
        "SL2" | "sl2" => CatalogTag::Sl2(c.integer()?.max(0) as u64),
        "TL2" | "tl2" => CatalogTag::Tl2(c.integer()?.max(0) as u64),
        "product" => {
            let a = parse_tag(c)?;
            c.expect(",")?;
            let b = parse_tag(c)?;
            CatalogTag::Product(Box::new(a), Box::new(b))
        }
        other => {
            return Err(ParseError::Syntax { pos, expected: format!("group constructor (got `{other}`)") })
        }
    };
    c.expect(")")?;
    Ok(tag)
}

fn parse_word(c: &mut Cursor) -> Result<NamedWord, ParseError> {
    let mut word = NamedWord::new();
    if c.peek() == Some('1') {
        c.eat("1");
        return Ok(word);
    }
    loop {
        let gen = c.ident()?;
        let exp = if c.eat("^") { c.integer()? } else { 1 };
        word.push((gen, exp));
        if !c.eat("*") {
            break;
        }
    }
    Ok(word)
}

fn parse_endpoint(c: &mut Cursor) -> Result<EndpointDecl, ParseError> {
    let pos = c.pos();
    let vertex = c.ident()?;
    c.expect("(")?;
    let mut images = Vec::new();
    if !c.eat(")") {
        loop {
            let binder = c.ident()?;
            if !(c.eat("|->") || c.eat("\u{21a6}")) {
                return Err(ParseError::Syntax { pos: c.pos(), expected: "`|->`".into() });
            }
            let word = parse_word(c)?;
            images.push((binder, word));
            if c.eat(")") {
                break;
            }
            c.expect(",")?;
        }
    }
    Ok(EndpointDecl { vertex, images, pos })
}

/// Parse a document. Line-oriented: `group`, `edge`, `char` and `option`
/// declarations, `#` comments.
pub fn parse_gog(text: &str) -> Result<GogDocument, ParseError> {
    let mut doc = GogDocument::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let mut c = Cursor::new(line, lineno + 1);
        let head = c.ident()?;
        match head.as_str() {
            "group" => {
                let pos = c.pos();
                let name = c.ident()?;
                c.expect("=")?;
                let tag = parse_tag(&mut c)?;
                if doc.groups.iter().any(|g| g.name == name) {
                    return Err(ParseError::DuplicateName { pos, name });
                }
                doc.groups.push(GroupDecl { name, tag, pos });
            }
            "edge" => {
                let pos = c.pos();
                let name = c.ident()?;
                c.expect(":")?;
                let tag = parse_tag(&mut c)?;
                c.expect("->")?;
                let from = parse_endpoint(&mut c)?;
                c.expect(",")?;
                let to = parse_endpoint(&mut c)?;
                if doc.edges.iter().any(|e| e.name == name) || doc.groups.iter().any(|g| g.name == name) {
                    return Err(ParseError::DuplicateName { pos, name });
                }
                doc.edges.push(EdgeDecl { name, tag, from, to, pos });
            }
            "char" => {
                let pos = c.pos();
                let first = c.ident()?;
                let target = if c.eat(".") {
                    let gen = c.ident()?;
                    CharTarget::VertexGen { vertex: first, gen }
                } else if doc.edges.iter().any(|e| e.name == first) {
                    CharTarget::Edge { edge: first }
                } else {
                    CharTarget::BareGen { gen: first }
                };
                c.expect("=")?;
                let v = c.integer()?;
                if v != 1 && v != -1 {
                    return Err(ParseError::Invalid { pos, msg: "character must be 1 or -1".into() });
                }
                doc.chars.push(CharDecl { target, sign: v as i8, pos });
            }
            "option" => {
                let key = c.ident()?;
                c.expect("=")?;
                c.skip_ws();
                let value = c.text[c.i..].trim().to_string();
                c.i = c.bytes.len();
                doc.options.insert(key, value);
            }
            other => {
                return Err(ParseError::Syntax {
                    pos: Pos { line: lineno + 1, col: 1 },
                    expected: format!("`group`, `edge`, `char` or `option` (got `{other}`)"),
                })
            }
        }
        if !c.at_end() {
            return Err(ParseError::Syntax { pos: c.pos(), expected: "end of line".into() });
        }
    }
    if doc.groups.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(doc)
}

fn render_word(word: &NamedWord) -> String {
    if word.is_empty() {
        return "1".into();
    }
    word.iter()
        .map(|(g, e)| if *e == 1 { g.clone() } else { format!("{g}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// Canonical rendering: one declaration per line, normalized spacing,
/// declaration order preserved. parse(render(parse(t))) = parse(t).
pub fn render_gog(doc: &GogDocument) -> String {
    let mut out = String::new();
    for g in &doc.groups {
        out.push_str(&format!("group {} = {}\n", g.name, g.tag));
    }
    for e in &doc.edges {
        let ep = |d: &EndpointDecl| {
            let images: Vec<String> =
                d.images.iter().map(|(b, w)| format!("{b} |-> {}", render_word(w))).collect();
            format!("{}({})", d.vertex, images.join(", "))
        };
        out.push_str(&format!("edge {} : {} -> {}, {}\n", e.name, e.tag, ep(&e.from), ep(&e.to)));
    }
    for ch in &doc.chars {
        let target = match &ch.target {
            CharTarget::VertexGen { vertex, gen } => format!("{vertex}.{gen}"),
            CharTarget::BareGen { gen } => gen.clone(),
            CharTarget::Edge { edge } => edge.clone(),
        };
        out.push_str(&format!("char {target} = {}\n", ch.sign));
    }
    for (k, v) in &doc.options {
        out.push_str(&format!("option {k} = {v}\n"));
    }
    out
}

/// Resolve a parsed document into a graph of groups plus orientation
/// data. Embedding words are evaluated in the target vertex group;
/// non-injective embeddings surface from the graph layer.
pub fn resolve(doc: &GogDocument) -> Result<(GraphOfGroups, OrientationData), ParseError> {
    let cap: usize =
        doc.options.get("order_cap").and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_ORDER_CAP);

    let mut vertices = Vec::new();
    let mut vertex_gen_names: Vec<Vec<String>> = Vec::new();
    for g in &doc.groups {
        let built = construct_catalog_group(&g.tag, cap)
            .map_err(|e| ParseError::Invalid { pos: g.pos, msg: e.to_string() })?;
        vertex_gen_names.push(generator_names(&g.tag));
        vertices.push(VertexData { name: g.name.clone(), group: Arc::new(built) });
    }
    let vertex_index = |name: &str, pos: Pos| -> Result<usize, ParseError> {
        doc.groups
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| ParseError::UndeclaredName { pos, name: name.into() })
    };

    let mut edges = Vec::new();
    for e in &doc.edges {
        let edge_group = construct_catalog_group(&e.tag, cap)
            .map_err(|err| ParseError::Invalid { pos: e.pos, msg: err.to_string() })?;
        let expected = edge_group.generators().len();
        let resolve_end = |d: &EndpointDecl| -> Result<(usize, Vec<u16>), ParseError> {
            let vi = vertex_index(&d.vertex, d.pos)?;
            if d.images.len() != expected {
                return Err(ParseError::Invalid {
                    pos: d.pos,
                    msg: format!(
                        "edge group has {expected} generator(s) but {} image(s) were given",
                        d.images.len()
                    ),
                });
            }
            let mut binders: Vec<&str> = Vec::new();
            let mut images = Vec::new();
            for (binder, word) in &d.images {
                if binders.contains(&binder.as_str()) {
                    return Err(ParseError::DuplicateName { pos: d.pos, name: binder.clone() });
                }
                binders.push(binder);
                let group = &vertices[vi].group;
                let names = &vertex_gen_names[vi];
                let mut acc = 0u16;
                for (gname, exp) in word {
                    let gi = names.iter().position(|n| n == gname).ok_or_else(|| {
                        ParseError::UndeclaredName { pos: d.pos, name: format!("{}.{gname}", d.vertex) }
                    })?;
                    acc = group.mul(acc, group.pow(group.generators()[gi], *exp));
                }
                images.push(acc);
            }
            Ok((vi, images))
        };
        let (o, emb_o) = resolve_end(&e.from)?;
        let (t, emb_t) = resolve_end(&e.to)?;
        edges.push(EdgeData { name: e.name.clone(), o, t, group: Arc::new(edge_group), emb_o, emb_t });
    }

    let graph = GraphOfGroups { vertices, edges };
    let mut orientation = OrientationData::trivial(&graph);
    for ch in &doc.chars {
        match &ch.target {
            CharTarget::VertexGen { vertex, gen } => {
                let vi = vertex_index(vertex, ch.pos)?;
                let gi = vertex_gen_names[vi].iter().position(|n| n == gen).ok_or_else(|| {
                    ParseError::UndeclaredName { pos: ch.pos, name: format!("{vertex}.{gen}") }
                })?;
                orientation.vertex_signs[vi][gi] = ch.sign;
            }
            CharTarget::BareGen { gen } => {
                let mut hits = Vec::new();
                for (vi, names) in vertex_gen_names.iter().enumerate() {
                    if let Some(gi) = names.iter().position(|n| n == gen) {
                        hits.push((vi, gi));
                    }
                }
                match hits.len() {
                    1 => orientation.vertex_signs[hits[0].0][hits[0].1] = ch.sign,
                    0 => return Err(ParseError::UndeclaredName { pos: ch.pos, name: gen.clone() }),
                    _ => {
                        return Err(ParseError::Invalid {
                            pos: ch.pos,
                            msg: format!("generator name {gen} is ambiguous; qualify it as VERTEX.{gen}"),
                        })
                    }
                }
            }
            CharTarget::Edge { edge } => {
                let ei = doc
                    .edges
                    .iter()
                    .position(|e| &e.name == edge)
                    .ok_or_else(|| ParseError::UndeclaredName { pos: ch.pos, name: edge.clone() })?;
                orientation.edge_signs[ei] = ch.sign;
            }
        }
    }
    Ok((graph, orientation))
}

/// Render a constructed graph (for example an enumerator output) back as
/// a document, using catalog generator names and factorization words for
/// the embedding images. Returns None for untagged table-built groups.
pub fn graph_to_document(graph: &GraphOfGroups, w: &OrientationData) -> Option<GogDocument> {
    let mut doc = GogDocument::default();
    for v in &graph.vertices {
        let tag = v.group.catalog_tag.clone()?;
        doc.groups.push(GroupDecl { name: v.name.clone(), tag, pos: Pos { line: 0, col: 0 } });
    }
    for e in &graph.edges {
        let tag = e.group.catalog_tag.clone()?;
        let edge_names = generator_names(&tag);
        let endpoint = |vi: usize, images: &[u16]| -> EndpointDecl {
            let v = &graph.vertices[vi];
            let names = generator_names(v.group.catalog_tag.as_ref().unwrap());
            let images = images
                .iter()
                .enumerate()
                .map(|(k, &img)| {
                    let word: NamedWord = v
                        .group
                        .word_for(img)
                        .into_iter()
                        .map(|gi| (names[gi as usize].clone(), 1))
                        .collect();
                    (edge_names[k].clone(), word)
                })
                .collect();
            EndpointDecl { vertex: v.name.clone(), images, pos: Pos { line: 0, col: 0 } }
        };
        doc.edges.push(EdgeDecl {
            name: e.name.clone(),
            tag,
            from: endpoint(e.o, &e.emb_o),
            to: endpoint(e.t, &e.emb_t),
            pos: Pos { line: 0, col: 0 },
        });
    }
    for (vi, signs) in w.vertex_signs.iter().enumerate() {
        let names = generator_names(graph.vertices[vi].group.catalog_tag.as_ref()?);
        for (gi, &s) in signs.iter().enumerate() {
            if s == -1 {
                doc.chars.push(CharDecl {
                    target: CharTarget::VertexGen {
                        vertex: graph.vertices[vi].name.clone(),
                        gen: names[gi].clone(),
                    },
                    sign: -1,
                    pos: Pos { line: 0, col: 0 },
                });
            }
        }
    }
    for (ei, &s) in w.edge_signs.iter().enumerate() {
        if s == -1 {
            doc.chars.push(CharDecl {
                target: CharTarget::Edge { edge: graph.edges[ei].name.clone() },
                sign: -1,
                pos: Pos { line: 0, col: 0 },
            });
        }
    }
    Some(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# the simplest mixed example
group A = dihedral(6)
group B = cyclic(4)
edge e : cyclic(2) -> A(x |-> a), B(x |-> a^2)
";

    #[test]
    fn parse_and_resolve_sample() {
        let doc = parse_gog(SAMPLE).unwrap();
        assert_eq!(doc.groups.len(), 2);
        assert_eq!(doc.edges.len(), 1);
        let (g, w) = resolve(&doc).unwrap();
        assert_eq!(g.vertices.len(), 2);
        assert_eq!(g.edges[0].emb_o, vec![g.vertices[0].group.generators()[0]]);
        assert!(w.is_trivial());
    }

    #[test]
    fn canonicalization_idempotent() {
        let doc = parse_gog(SAMPLE).unwrap();
        let rendered = render_gog(&doc);
        let doc2 = parse_gog(&rendered).unwrap();
        assert_eq!(render_gog(&doc2), rendered);
    }

    #[test]
    fn unicode_arrow_accepted() {
        let text =
            "group A = cyclic(2)\ngroup B = dihedral(6)\nedge e : cyclic(2) -> A(x \u{21a6} a), B(x \u{21a6} a)\n";
        let doc = parse_gog(text).unwrap();
        assert_eq!(doc.edges[0].from.images[0].0, "x");
    }

    #[test]
    fn errors_have_positions() {
        let doc = parse_gog("group A = cyclic(4)\nedge e : cyclic(2) -> A(x |-> a), Z(x |-> a)\n").unwrap();
        let e = resolve(&doc).unwrap_err();
        assert!(matches!(e, ParseError::UndeclaredName { name, .. } if name == "Z"));
        assert!(matches!(parse_gog(""), Err(ParseError::Empty)));
        let dup = parse_gog("group A = cyclic(2)\ngroup A = cyclic(4)\n");
        assert!(matches!(dup, Err(ParseError::DuplicateName { .. })));
        let bad = parse_gog("group A = cyclic(2)\nfrobnicate\n");
        assert!(matches!(bad, Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn char_declarations() {
        let text = "\
group A = cyclic(2)
edge l : cyclic(2) -> A(x |-> a), A(x |-> a)
char A.a = -1
char l = 1
";
        let doc = parse_gog(text).unwrap();
        let (_, w) = resolve(&doc).unwrap();
        assert_eq!(w.vertex_signs[0], vec![-1]);
        assert_eq!(w.edge_signs[0], 1);
    }

    #[test]
    fn bad_embedding_surfaces_from_graph_layer() {
        // x |-> identity is not injective; the graph layer reports it
        let text = "\
group A = dihedral(6)
group B = dihedral(6)
edge e : cyclic(2) -> A(x |-> 1), B(x |-> a)
";
        let doc = parse_gog(text).unwrap();
        let (g, w) = resolve(&doc).unwrap();
        let err = crate::gog::validate_and_reduce(&g, &w);
        assert!(matches!(err, Err(crate::gog::GraphError::BadEmbedding(_))));
    }

    #[test]
    fn graph_round_trip_through_dsl() {
        let doc = parse_gog(SAMPLE).unwrap();
        let (g, w) = resolve(&doc).unwrap();
        let doc2 = graph_to_document(&g, &w).unwrap();
        let (g2, _) = resolve(&doc2).unwrap();
        assert_eq!(g2.vertices.len(), g.vertices.len());
        assert_eq!(g2.edges[0].emb_o, g.edges[0].emb_o);
        assert_eq!(g2.edges[0].emb_t, g.edges[0].emb_t);
    }
}
