//! Line-oriented parser with line/column diagnostics.

use std::collections::BTreeSet;
use std::fmt;

use ultragraph::model::symbolic::{EdgeFamily, SymRange, SymRef, SymVertex, TailSpec};
use ultragraph::model::{
    DenseZeroOne, Description, Edge, ModelError, SymbolicUltragraph, SymbolicZeroOne, Ultragraph,
    VertexId,
};
use ultragraph::setalg::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    Syntax,
    UndeclaredVertex,
    EmptyRange,
    DuplicateId,
    Unsupported,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DiagnosticKind::Syntax => "syntax error",
            DiagnosticKind::UndeclaredVertex => "undeclared vertex",
            DiagnosticKind::EmptyRange => "empty range",
            DiagnosticKind::DuplicateId => "duplicate id",
            DiagnosticKind::Unsupported => "unsupported",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub span: Span,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}: {}",
            self.span.line, self.span.col, self.kind, self.message
        )
    }
}

impl std::error::Error for Diagnostic {}

fn diag(kind: DiagnosticKind, span: Span, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        kind,
        span,
        message: message.into(),
    }
}

// ---------------------------------------------------------------------------
// tokens
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokKind {
    Ident(String),
    Int(i64),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Colon,
    Arrow,
    Tilde,
    Plus,
    Minus,
    Ge,
}

#[derive(Debug, Clone)]
struct Tok {
    kind: TokKind,
    span: Span,
}

fn tokenize(line: &str, lineno: u32) -> Result<Vec<Tok>, Diagnostic> {
    let mut out = Vec::new();
    let bytes: Vec<char> = line.chars().collect();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i];
        let span = Span {
            line: lineno,
            col: i as u32 + 1,
        };
        match c {
            '#' => break,
            c if c.is_whitespace() => {
                i += 1;
            }
            '{' => {
                out.push(Tok {
                    kind: TokKind::LBrace,
                    span,
                });
                i += 1;
            }
            '}' => {
                out.push(Tok {
                    kind: TokKind::RBrace,
                    span,
                });
                i += 1;
            }
            '[' => {
                out.push(Tok {
                    kind: TokKind::LBracket,
                    span,
                });
                i += 1;
            }
            ']' => {
                out.push(Tok {
                    kind: TokKind::RBracket,
                    span,
                });
                i += 1;
            }
            ':' => {
                out.push(Tok {
                    kind: TokKind::Colon,
                    span,
                });
                i += 1;
            }
            '~' => {
                out.push(Tok {
                    kind: TokKind::Tilde,
                    span,
                });
                i += 1;
            }
            '+' => {
                out.push(Tok {
                    kind: TokKind::Plus,
                    span,
                });
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&'>') {
                    out.push(Tok {
                        kind: TokKind::Arrow,
                        span,
                    });
                    i += 2;
                } else {
                    out.push(Tok {
                        kind: TokKind::Minus,
                        span,
                    });
                    i += 1;
                }
            }
            '>' => {
                if bytes.get(i + 1) == Some(&'=') {
                    out.push(Tok {
                        kind: TokKind::Ge,
                        span,
                    });
                    i += 2;
                } else {
                    return Err(diag(DiagnosticKind::Syntax, span, "expected >="));
                }
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = bytes[start..i].iter().collect();
                let value: i64 = text.parse().map_err(|_| {
                    diag(
                        DiagnosticKind::Syntax,
                        span,
                        format!("integer {text} out of range"),
                    )
                })?;
                out.push(Tok {
                    kind: TokKind::Int(value),
                    span,
                });
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                let text: String = bytes[start..i].iter().collect();
                out.push(Tok {
                    kind: TokKind::Ident(text),
                    span,
                });
            }
            other => {
                return Err(diag(
                    DiagnosticKind::Syntax,
                    span,
                    format!("unexpected character {other:?}"),
                ));
            }
        }
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<Tok>,
    pos: usize,
    line: u32,
}

impl Cursor {
    fn new(toks: Vec<Tok>, line: u32) -> Self {
        Cursor { toks, pos: 0, line }
    }

    fn here(&self) -> Span {
        self.toks.get(self.pos).map(|t| t.span).unwrap_or(Span {
            line: self.line,
            col: u32::MAX,
        })
    }

    fn peek(&self) -> Option<&TokKind> {
        self.toks.get(self.pos).map(|t| &t.kind)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, kind: &TokKind, what: &str) -> Result<Span, Diagnostic> {
        match self.next() {
            Some(t) if t.kind == *kind => Ok(t.span),
            Some(t) => Err(diag(
                DiagnosticKind::Syntax,
                t.span,
                format!("expected {what}"),
            )),
            None => Err(diag(
                DiagnosticKind::Syntax,
                self.here(),
                format!("expected {what}"),
            )),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Span), Diagnostic> {
        match self.next() {
            Some(Tok {
                kind: TokKind::Ident(s),
                span,
            }) => Ok((s, span)),
            Some(t) => Err(diag(
                DiagnosticKind::Syntax,
                t.span,
                format!("expected {what}"),
            )),
            None => Err(diag(
                DiagnosticKind::Syntax,
                self.here(),
                format!("expected {what}"),
            )),
        }
    }

    fn int(&mut self, what: &str) -> Result<(i64, Span), Diagnostic> {
        match self.next() {
            Some(Tok {
                kind: TokKind::Int(v),
                span,
            }) => Ok((v, span)),
            Some(t) => Err(diag(
                DiagnosticKind::Syntax,
                t.span,
                format!("expected {what}"),
            )),
            None => Err(diag(
                DiagnosticKind::Syntax,
                self.here(),
                format!("expected {what}"),
            )),
        }
    }

    fn done(&mut self) -> Result<(), Diagnostic> {
        match self.next() {
            None => Ok(()),
            Some(t) => Err(diag(DiagnosticKind::Syntax, t.span, "trailing input")),
        }
    }
}

// ---------------------------------------------------------------------------
// ultragraph documents
// ---------------------------------------------------------------------------

/// A vertex reference as written: a plain name, an absolute indexed
/// reference `v[3]`, or an offset reference `v[n+1]` (families only).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MemberRef {
    Name(String),
    Absolute { prefix: String, index: i64 },
    Offset { prefix: String, offset: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeDecl {
    pub cofinite: bool,
    pub members: Vec<(MemberRef, Span)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDecl {
    pub name: String,
    pub span: Span,
    pub source: (MemberRef, Span),
    pub range: RangeDecl,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyDecl {
    pub name: String,
    pub span: Span,
    pub var: String,
    pub start: i64,
    pub source: (MemberRef, Span),
    pub range: RangeDecl,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailDecl {
    pub prefix: String,
    pub var: String,
    pub start: i64,
    pub span: Span,
}

/// A parsed (but not yet validated) ultragraph document.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UltragraphDocument {
    pub vertices: Vec<(String, Span)>,
    pub tail: Option<TailDecl>,
    pub edges: Vec<EdgeDecl>,
    pub families: Vec<FamilyDecl>,
}

fn parse_member(cur: &mut Cursor, var: Option<&str>) -> Result<(MemberRef, Span), Diagnostic> {
    let (name, span) = cur.ident("a vertex reference")?;
    if cur.peek() != Some(&TokKind::LBracket) {
        return Ok((MemberRef::Name(name), span));
    }
    cur.expect(&TokKind::LBracket, "[")?;
    let member = match cur.next() {
        Some(Tok {
            kind: TokKind::Int(k),
            ..
        }) => MemberRef::Absolute {
            prefix: name,
            index: k,
        },
        Some(Tok {
            kind: TokKind::Ident(v),
            span: vspan,
        }) => {
            match var {
                Some(expected) if expected == v => {}
                _ => {
                    return Err(diag(
                        DiagnosticKind::Syntax,
                        vspan,
                        format!("index variable {v} is not in scope here"),
                    ));
                }
            }
            let offset = match cur.peek() {
                Some(TokKind::Plus) => {
                    cur.next();
                    cur.int("an offset")?.0
                }
                Some(TokKind::Minus) => {
                    cur.next();
                    -cur.int("an offset")?.0
                }
                _ => 0,
            };
            MemberRef::Offset {
                prefix: name,
                offset,
            }
        }
        other => {
            let span = other.map(|t| t.span).unwrap_or(span);
            return Err(diag(DiagnosticKind::Syntax, span, "expected an index"));
        }
    };
    cur.expect(&TokKind::RBracket, "]")?;
    Ok((member, span))
}

fn parse_range(cur: &mut Cursor, var: Option<&str>) -> Result<RangeDecl, Diagnostic> {
    let cofinite = if cur.peek() == Some(&TokKind::Tilde) {
        cur.next();
        true
    } else {
        false
    };
    cur.expect(&TokKind::LBrace, "{")?;
    let mut members = Vec::new();
    while cur.peek() != Some(&TokKind::RBrace) {
        if cur.peek().is_none() {
            return Err(diag(DiagnosticKind::Syntax, cur.here(), "unterminated set"));
        }
        members.push(parse_member(cur, var)?);
    }
    cur.expect(&TokKind::RBrace, "}")?;
    Ok(RangeDecl { cofinite, members })
}

/// Parses the textual DSL into a document, reporting the first problem
/// with its line and column.
pub fn parse_ultragraph(text: &str) -> Result<UltragraphDocument, Diagnostic> {
    let mut doc = UltragraphDocument::default();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno as u32 + 1;
        let toks = tokenize(raw, lineno)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(toks, lineno);
        let (keyword, kspan) = cur.ident("a statement keyword")?;
        match keyword.as_str() {
            "vertices" => {
                while cur.peek().is_some() {
                    let (name, span) = cur.ident("a vertex name")?;
                    doc.vertices.push((name, span));
                }
            }
            "tail" => {
                if doc.tail.is_some() {
                    return Err(diag(DiagnosticKind::DuplicateId, kspan, "second tail"));
                }
                let (prefix, pspan) = cur.ident("a tail prefix")?;
                cur.expect(&TokKind::LBracket, "[")?;
                let (var, _) = cur.ident("an index variable")?;
                cur.expect(&TokKind::RBracket, "]")?;
                let (for_kw, fspan) = cur.ident("for")?;
                if for_kw != "for" {
                    return Err(diag(DiagnosticKind::Syntax, fspan, "expected `for`"));
                }
                let (var2, vspan) = cur.ident("the index variable")?;
                if var2 != var {
                    return Err(diag(
                        DiagnosticKind::Syntax,
                        vspan,
                        "index variable mismatch",
                    ));
                }
                cur.expect(&TokKind::Ge, ">=")?;
                let (start, _) = cur.int("the tail start")?;
                cur.done()?;
                doc.tail = Some(TailDecl {
                    prefix,
                    var,
                    start,
                    span: pspan,
                });
            }
            "edge" => {
                let (name, span) = cur.ident("an edge name")?;
                cur.expect(&TokKind::Colon, ":")?;
                let source = parse_member(&mut cur, None)?;
                cur.expect(&TokKind::Arrow, "->")?;
                let range = parse_range(&mut cur, None)?;
                cur.done()?;
                doc.edges.push(EdgeDecl {
                    name,
                    span,
                    source,
                    range,
                });
            }
            "family" => {
                let (name, span) = cur.ident("a family name")?;
                cur.expect(&TokKind::LBracket, "[")?;
                let (var, _) = cur.ident("an index variable")?;
                cur.expect(&TokKind::RBracket, "]")?;
                let (for_kw, fspan) = cur.ident("for")?;
                if for_kw != "for" {
                    return Err(diag(DiagnosticKind::Syntax, fspan, "expected `for`"));
                }
                let (var2, vspan) = cur.ident("the index variable")?;
                if var2 != var {
                    return Err(diag(
                        DiagnosticKind::Syntax,
                        vspan,
                        "index variable mismatch",
                    ));
                }
                cur.expect(&TokKind::Ge, ">=")?;
                let (start, _) = cur.int("the domain start")?;
                cur.expect(&TokKind::Colon, ":")?;
                let source = parse_member(&mut cur, Some(&var))?;
                cur.expect(&TokKind::Arrow, "->")?;
                let range = parse_range(&mut cur, Some(&var))?;
                cur.done()?;
                doc.families.push(FamilyDecl {
                    name,
                    span,
                    var,
                    start,
                    source,
                    range,
                });
            }
            other => {
                return Err(diag(
                    DiagnosticKind::Syntax,
                    kspan,
                    format!("unknown statement `{other}`"),
                ));
            }
        }
    }
    Ok(doc)
}

// ---------------------------------------------------------------------------
// document -> model
// ---------------------------------------------------------------------------

fn model_error_to_diag(e: ModelError, span: Span) -> Diagnostic {
    let kind = match &e {
        ModelError::EmptyRange(_) => DiagnosticKind::EmptyRange,
        ModelError::DuplicateId(_) => DiagnosticKind::DuplicateId,
        ModelError::UnknownVertex(_) => DiagnosticKind::UndeclaredVertex,
        _ => DiagnosticKind::Unsupported,
    };
    diag(kind, span, e.to_string())
}

impl UltragraphDocument {
    /// Validates the document and builds the finite or symbolic model.
    pub fn build(&self) -> Result<Description, Diagnostic> {
        let mut seen = BTreeSet::new();
        for (name, span) in &self.vertices {
            if !seen.insert(name.clone()) {
                return Err(diag(
                    DiagnosticKind::DuplicateId,
                    *span,
                    format!("vertex {name} declared twice"),
                ));
            }
        }
        match &self.tail {
            None => self.build_finite().map(Description::Finite),
            Some(tail) => self.build_symbolic(tail).map(Description::Symbolic),
        }
    }

    fn lookup_finite(&self, m: &(MemberRef, Span)) -> Result<VertexId, Diagnostic> {
        match &m.0 {
            MemberRef::Name(name) => self
                .vertices
                .iter()
                .position(|(v, _)| v == name)
                .map(|i| VertexId(i as u32))
                .ok_or_else(|| {
                    diag(
                        DiagnosticKind::UndeclaredVertex,
                        m.1,
                        format!("vertex {name} is not declared"),
                    )
                }),
            MemberRef::Absolute { .. } | MemberRef::Offset { .. } => Err(diag(
                DiagnosticKind::Syntax,
                m.1,
                "indexed references need a tail declaration",
            )),
        }
    }

    fn build_finite(&self) -> Result<Ultragraph, Diagnostic> {
        if self.vertices.is_empty() {
            return Err(diag(
                DiagnosticKind::Syntax,
                Span { line: 1, col: 1 },
                "an ultragraph needs at least one vertex",
            ));
        }
        if let Some(f) = self.families.first() {
            return Err(diag(
                DiagnosticKind::Syntax,
                f.span,
                "edge families need a tail declaration",
            ));
        }
        let mut edges = Vec::new();
        for e in &self.edges {
            if e.range.cofinite {
                return Err(diag(
                    DiagnosticKind::Unsupported,
                    e.span,
                    "cofinite ranges need an infinite vertex universe (declare a tail)",
                ));
            }
            let source = self.lookup_finite(&e.source)?;
            let range = e
                .range
                .members
                .iter()
                .map(|m| self.lookup_finite(m))
                .collect::<Result<BTreeSet<_>, _>>()?;
            if range.is_empty() {
                return Err(diag(
                    DiagnosticKind::EmptyRange,
                    e.span,
                    format!("edge {} has an empty range", e.name),
                ));
            }
            edges.push(Edge {
                name: e.name.clone(),
                source,
                range,
                infinite_range: false,
            });
        }
        let names = self.vertices.iter().map(|(n, _)| n.clone()).collect();
        Ultragraph::new(names, edges).map_err(|e| model_error_to_diag(e, Span { line: 1, col: 1 }))
    }

    fn lookup_symbolic(
        &self,
        tail: &TailDecl,
        m: &(MemberRef, Span),
    ) -> Result<SymVertex, Diagnostic> {
        let named = |name: &str| {
            self.vertices
                .iter()
                .position(|(v, _)| v == name)
                .map(SymVertex::Named)
        };
        match &m.0 {
            MemberRef::Name(name) => named(name).ok_or_else(|| {
                diag(
                    DiagnosticKind::UndeclaredVertex,
                    m.1,
                    format!("vertex {name} is not declared"),
                )
            }),
            MemberRef::Absolute { prefix, index } => {
                if prefix != &tail.prefix {
                    return Err(diag(
                        DiagnosticKind::UndeclaredVertex,
                        m.1,
                        format!("unknown tail prefix {prefix}"),
                    ));
                }
                if *index >= tail.start {
                    Ok(SymVertex::Tail(*index))
                } else {
                    let fallback = format!("{prefix}{index}");
                    named(&fallback).ok_or_else(|| {
                        diag(
                            DiagnosticKind::UndeclaredVertex,
                            m.1,
                            format!(
                                "{prefix}[{index}] is below the tail start and no vertex \
                                 named {fallback} is declared"
                            ),
                        )
                    })
                }
            }
            MemberRef::Offset { .. } => Err(diag(
                DiagnosticKind::Syntax,
                m.1,
                "offset references are only valid inside a family",
            )),
        }
    }

    fn symbolic_ref(&self, tail: &TailDecl, m: &(MemberRef, Span)) -> Result<SymRef, Diagnostic> {
        match &m.0 {
            MemberRef::Offset { prefix, offset } => {
                if prefix != &tail.prefix {
                    return Err(diag(
                        DiagnosticKind::UndeclaredVertex,
                        m.1,
                        format!("unknown tail prefix {prefix}"),
                    ));
                }
                Ok(SymRef::Offset(*offset))
            }
            _ => Ok(SymRef::Fixed(self.lookup_symbolic(tail, m)?)),
        }
    }

    fn build_symbolic(&self, tail: &TailDecl) -> Result<SymbolicUltragraph, Diagnostic> {
        for (name, span) in &self.vertices {
            if let Some(rest) = name.strip_prefix(&tail.prefix) {
                if rest.parse::<i64>().is_ok_and(|k| k >= tail.start) {
                    return Err(diag(
                        DiagnosticKind::DuplicateId,
                        *span,
                        format!("vertex {name} collides with the tail"),
                    ));
                }
            }
        }
        let mut concrete = Vec::new();
        for e in &self.edges {
            let source = self.lookup_symbolic(tail, &e.source)?;
            let members = e
                .range
                .members
                .iter()
                .map(|m| self.lookup_symbolic(tail, m))
                .collect::<Result<Vec<_>, _>>()?;
            let range = if e.range.cofinite {
                VertexSet::cofinite(members)
            } else {
                if members.is_empty() {
                    return Err(diag(
                        DiagnosticKind::EmptyRange,
                        e.span,
                        format!("edge {} has an empty range", e.name),
                    ));
                }
                VertexSet::finite(members)
            };
            concrete.push((e.name.clone(), source, range));
        }
        let mut families = Vec::new();
        for f in &self.families {
            let source = self.symbolic_ref(tail, &f.source)?;
            let refs = f
                .range
                .members
                .iter()
                .map(|m| self.symbolic_ref(tail, m))
                .collect::<Result<Vec<_>, _>>()?;
            let range = if f.range.cofinite {
                SymRange::Cofinite(refs)
            } else {
                if refs.is_empty() {
                    return Err(diag(
                        DiagnosticKind::EmptyRange,
                        f.span,
                        format!("family {} has an empty range", f.name),
                    ));
                }
                SymRange::Finite(refs)
            };
            families.push(EdgeFamily {
                name: f.name.clone(),
                start: f.start,
                skip: BTreeSet::new(),
                source,
                range,
            });
        }
        let names = self.vertices.iter().map(|(n, _)| n.clone()).collect();
        SymbolicUltragraph::new(
            names,
            TailSpec {
                prefix: tail.prefix.clone(),
                start: tail.start,
            },
            concrete,
            families,
        )
        .map_err(|e| model_error_to_diag(e, tail.span))
    }
}

// ---------------------------------------------------------------------------
// matrix documents
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixDocument {
    Dense(Vec<Vec<u8>>),
    Symbolic {
        first: i64,
        tail_from: i64,
        rows: Vec<(i64, RangeDecl)>,
        tail_row: (i64, RangeDecl),
    },
}

/// Parses a matrix document: bare 0/1 rows, an explicit `matrix dense`
/// header, or a `matrix symbolic` schema.
pub fn parse_matrix(text: &str) -> Result<MatrixDocument, Diagnostic> {
    let mut lines = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno as u32 + 1;
        let toks = tokenize(raw, lineno)?;
        if !toks.is_empty() {
            lines.push((lineno, toks));
        }
    }
    if lines.is_empty() {
        return Err(diag(
            DiagnosticKind::Syntax,
            Span { line: 1, col: 1 },
            "empty matrix document",
        ));
    }
    let is_symbolic = matches!(
        lines[0].1.as_slice(),
        [Tok { kind: TokKind::Ident(m), .. }, Tok { kind: TokKind::Ident(k), .. }]
            if m == "matrix" && k == "symbolic"
    );
    let is_dense_header = matches!(
        lines[0].1.as_slice(),
        [Tok { kind: TokKind::Ident(m), .. }, Tok { kind: TokKind::Ident(k), .. }]
            if m == "matrix" && k == "dense"
    );
    if is_symbolic {
        parse_symbolic_matrix(&lines[1..])
    } else {
        let body = if is_dense_header {
            &lines[1..]
        } else {
            &lines[..]
        };
        let mut rows = Vec::new();
        for (lineno, toks) in body {
            let mut row = Vec::new();
            for t in toks {
                match t.kind {
                    TokKind::Int(0) => row.push(0u8),
                    TokKind::Int(1) => row.push(1u8),
                    _ => {
                        return Err(diag(
                            DiagnosticKind::Syntax,
                            t.span,
                            "dense rows are 0/1 tokens",
                        ));
                    }
                }
            }
            if row.is_empty() {
                return Err(diag(
                    DiagnosticKind::Syntax,
                    Span {
                        line: *lineno,
                        col: 1,
                    },
                    "empty matrix row",
                ));
            }
            rows.push(row);
        }
        Ok(MatrixDocument::Dense(rows))
    }
}

fn parse_symbolic_matrix(lines: &[(u32, Vec<Tok>)]) -> Result<MatrixDocument, Diagnostic> {
    let mut first: Option<i64> = None;
    let mut tail_from: Option<i64> = None;
    let mut rows: Vec<(i64, RangeDecl)> = Vec::new();
    let mut tail_row: Option<(i64, RangeDecl)> = None;
    for (lineno, toks) in lines {
        let mut cur = Cursor::new(toks.clone(), *lineno);
        let (keyword, kspan) = cur.ident("a schema keyword")?;
        match keyword.as_str() {
            "first" => {
                first = Some(cur.int("the first index")?.0);
                cur.done()?;
            }
            "tail" => {
                let (from_kw, fspan) = cur.ident("from")?;
                if from_kw != "from" {
                    return Err(diag(DiagnosticKind::Syntax, fspan, "expected `from`"));
                }
                tail_from = Some(cur.int("the tail start")?.0);
                cur.done()?;
            }
            "row" => match cur.next() {
                Some(Tok {
                    kind: TokKind::Int(idx),
                    ..
                }) => {
                    cur.expect(&TokKind::Colon, ":")?;
                    let range = parse_matrix_cols(&mut cur, None)?;
                    cur.done()?;
                    rows.push((idx, range));
                }
                Some(Tok {
                    kind: TokKind::Ident(var),
                    ..
                }) => {
                    let (for_kw, fspan) = cur.ident("for")?;
                    if for_kw != "for" {
                        return Err(diag(DiagnosticKind::Syntax, fspan, "expected `for`"));
                    }
                    let (var2, vspan) = cur.ident("the index variable")?;
                    if var2 != var {
                        return Err(diag(
                            DiagnosticKind::Syntax,
                            vspan,
                            "index variable mismatch",
                        ));
                    }
                    cur.expect(&TokKind::Ge, ">=")?;
                    let (start, _) = cur.int("the domain start")?;
                    cur.expect(&TokKind::Colon, ":")?;
                    let range = parse_matrix_cols(&mut cur, Some(&var))?;
                    cur.done()?;
                    if tail_row.replace((start, range)).is_some() {
                        return Err(diag(
                            DiagnosticKind::DuplicateId,
                            kspan,
                            "second tail row schema",
                        ));
                    }
                }
                other => {
                    let span = other.map(|t| t.span).unwrap_or(kspan);
                    return Err(diag(DiagnosticKind::Syntax, span, "expected a row index"));
                }
            },
            other => {
                return Err(diag(
                    DiagnosticKind::Syntax,
                    kspan,
                    format!("unknown schema statement `{other}`"),
                ));
            }
        }
    }
    let first = first.unwrap_or(0);
    let span = Span {
        line: lines.first().map(|(l, _)| *l).unwrap_or(1),
        col: 1,
    };
    let tail_from =
        tail_from.ok_or_else(|| diag(DiagnosticKind::Syntax, span, "missing `tail from` line"))?;
    let tail_row =
        tail_row.ok_or_else(|| diag(DiagnosticKind::Syntax, span, "missing tail row schema"))?;
    rows.sort_by_key(|&(i, _)| i);
    let expected: Vec<i64> = (first..tail_from).collect();
    let got: Vec<i64> = rows.iter().map(|&(i, _)| i).collect();
    if got != expected {
        return Err(diag(
            DiagnosticKind::Syntax,
            span,
            format!("explicit rows must cover {first}..{tail_from} exactly"),
        ));
    }
    if tail_row.0 != tail_from {
        return Err(diag(
            DiagnosticKind::Syntax,
            span,
            "tail row domain must start at the tail",
        ));
    }
    Ok(MatrixDocument::Symbolic {
        first,
        tail_from,
        rows,
        tail_row,
    })
}

/// Column sets reuse the member syntax with integers as absolute columns.
fn parse_matrix_cols(cur: &mut Cursor, var: Option<&str>) -> Result<RangeDecl, Diagnostic> {
    let cofinite = if cur.peek() == Some(&TokKind::Tilde) {
        cur.next();
        true
    } else {
        false
    };
    cur.expect(&TokKind::LBrace, "{")?;
    let mut members = Vec::new();
    while cur.peek() != Some(&TokKind::RBrace) {
        let span = cur.here();
        match cur.next() {
            Some(Tok {
                kind: TokKind::Int(k),
                ..
            }) => {
                members.push((
                    MemberRef::Absolute {
                        prefix: String::new(),
                        index: k,
                    },
                    span,
                ));
            }
            Some(Tok {
                kind: TokKind::Ident(v),
                span: vspan,
            }) => {
                match var {
                    Some(expected) if expected == v => {}
                    _ => {
                        return Err(diag(
                            DiagnosticKind::Syntax,
                            vspan,
                            format!("index variable {v} is not in scope here"),
                        ));
                    }
                }
                let offset = match cur.peek() {
                    Some(TokKind::Plus) => {
                        cur.next();
                        cur.int("an offset")?.0
                    }
                    Some(TokKind::Minus) => {
                        cur.next();
                        -cur.int("an offset")?.0
                    }
                    _ => 0,
                };
                members.push((
                    MemberRef::Offset {
                        prefix: String::new(),
                        offset,
                    },
                    span,
                ));
            }
            other => {
                let span = other.map(|t| t.span).unwrap_or(span);
                return Err(diag(DiagnosticKind::Syntax, span, "expected a column"));
            }
        }
    }
    cur.expect(&TokKind::RBrace, "}")?;
    Ok(RangeDecl { cofinite, members })
}

/// A built matrix, dense or symbolic.
#[derive(Debug, Clone)]
pub enum ZeroOneMatrixKind {
    Dense(DenseZeroOne),
    Symbolic(SymbolicZeroOne),
}

impl MatrixDocument {
    pub fn build(&self) -> Result<ZeroOneMatrixKind, Diagnostic> {
        let origin = Span { line: 1, col: 1 };
        match self {
            MatrixDocument::Dense(rows) => {
                let refs: Vec<&[u8]> = rows.iter().map(|r| r.as_slice()).collect();
                DenseZeroOne::from_ints(&refs)
                    .map(ZeroOneMatrixKind::Dense)
                    .map_err(|e| model_error_to_diag(e, origin))
            }
            MatrixDocument::Symbolic {
                first,
                tail_from,
                rows,
                tail_row,
            } => {
                let mut prefix = Vec::new();
                for (_, decl) in rows {
                    let cols: Vec<i64> = decl
                        .members
                        .iter()
                        .map(|(m, span)| match m {
                            MemberRef::Absolute { index, .. } => Ok(*index),
                            _ => Err(diag(
                                DiagnosticKind::Syntax,
                                *span,
                                "explicit rows take absolute columns",
                            )),
                        })
                        .collect::<Result<_, _>>()?;
                    prefix.push(if decl.cofinite {
                        VertexSet::cofinite(cols)
                    } else {
                        VertexSet::finite(cols)
                    });
                }
                let (_, decl) = tail_row;
                if decl.cofinite {
                    return Err(diag(
                        DiagnosticKind::Unsupported,
                        origin,
                        "cofinite tail rows are not supported",
                    ));
                }
                let mut offsets = BTreeSet::new();
                let mut fixed = BTreeSet::new();
                for (m, _) in &decl.members {
                    match m {
                        MemberRef::Offset { offset, .. } => {
                            offsets.insert(*offset);
                        }
                        MemberRef::Absolute { index, .. } => {
                            fixed.insert(*index);
                        }
                        MemberRef::Name(_) => unreachable!("columns are never names"),
                    }
                }
                SymbolicZeroOne::new(*first, *tail_from, prefix, offsets, fixed)
                    .map(ZeroOneMatrixKind::Symbolic)
                    .map_err(|e| model_error_to_diag(e, origin))
            }
        }
    }
}
