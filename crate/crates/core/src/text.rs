//! Line-oriented text formats for models and graphs, canonical
//! serialization, and content fingerprints.
//!
//! Sullivan files:
//! ```text
//! algebra sullivan
//! generator x 2
//! generator y 3
//! d x = 0
//! d y = x^2
//! ```
//! Lie files use `algebra lie` and nested brackets: `d c = [a, b]`,
//! optionally with rational coefficients `1/2 * [a, [b, a]]`. Graph files
//! are `vertex <name>` lines followed by `edge <name> <name>` lines.
//! `#` starts a comment; blank lines are ignored.

use crate::catalog::Graph;
use crate::cdga::{ModelBuilder, NamedTerm, Polynomial, SullivanModel, Word};
use crate::dgl::{bracket, leaf, FreeLieModel, LieModelBuilder, NamedBracket};
use crate::error::Error;
use crate::exactla::{q_to_string, qi, Q};
use crate::Result;
use num::{One, Signed};
use sha2::{Digest, Sha256};
use std::collections::HashSet;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Int(i64),
    Star,
    Caret,
    Slash,
    Plus,
    Minus,
    Eq,
    LBracket,
    RBracket,
    Comma,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("`{n}`"),
            Tok::Int(v) => format!("`{v}`"),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Eq => "`=`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
        }
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// One nonempty, comment-stripped line as (column, token) pairs.
struct Stmt {
    line: usize,
    toks: Vec<(usize, Tok)>,
}

fn lex_line(line_no: usize, raw: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = raw.chars().collect();
    let mut out = Vec::new();
    let mut i = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let v = s
                .parse::<i64>()
                .map_err(|_| err(line_no, col, "number is too large"))?;
            out.push((col, Tok::Int(v)));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            out.push((col, Tok::Name(chars[start..i].iter().collect())));
            continue;
        }
        let tok = match c {
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '=' => Tok::Eq,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            _ => return Err(err(line_no, col, format!("unexpected character `{c}`"))),
        };
        out.push((col, tok));
        i += 1;
    }
    Ok(out)
}

fn lex(text: &str) -> Result<Vec<Stmt>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = lex_line(line, raw)?;
        if !toks.is_empty() {
            out.push(Stmt { line, toks });
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    line: usize,
    toks: &'a [(usize, Tok)],
    k: usize,
}

impl<'a> Cursor<'a> {
    fn new(stmt: &'a Stmt) -> Self {
        Cursor {
            line: stmt.line,
            toks: &stmt.toks,
            k: 0,
        }
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.k).map(|(_, t)| t)
    }

    /// Column of the next token, or one past the last token at end of line.
    fn col(&self) -> usize {
        match self.toks.get(self.k) {
            Some((c, _)) => *c,
            None => self.toks.last().map_or(1, |(c, _)| c + 1),
        }
    }

    fn advance(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.k).map(|(_, t)| t);
        self.k += 1;
        t
    }

    fn expect_name(&mut self, what: &str) -> Result<String> {
        let col = self.col();
        match self.advance() {
            Some(Tok::Name(n)) => Ok(n.clone()),
            Some(t) => Err(err(
                self.line,
                col,
                format!("expected {what}, found {}", t.describe()),
            )),
            None => Err(err(self.line, col, format!("expected {what}"))),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<i64> {
        let col = self.col();
        match self.advance() {
            Some(Tok::Int(v)) => Ok(*v),
            Some(t) => Err(err(
                self.line,
                col,
                format!("expected {what}, found {}", t.describe()),
            )),
            None => Err(err(self.line, col, format!("expected {what}"))),
        }
    }

    fn expect_tok(&mut self, tok: &Tok) -> Result<()> {
        let col = self.col();
        match self.advance() {
            Some(t) if t == tok => Ok(()),
            Some(t) => Err(err(
                self.line,
                col,
                format!("expected {}, found {}", tok.describe(), t.describe()),
            )),
            None => Err(err(self.line, col, format!("expected {}", tok.describe()))),
        }
    }

    fn expect_end(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(err(
                self.line,
                self.col(),
                format!("unexpected trailing {}", t.describe()),
            )),
        }
    }
}

fn header_kind(stmt: &Stmt) -> Result<String> {
    let mut cur = Cursor::new(stmt);
    let kw = cur.expect_name("`algebra` header")?;
    if kw != "algebra" {
        return Err(err(
            stmt.line,
            stmt.toks[0].0,
            "model files must start with `algebra sullivan` or `algebra lie`",
        ));
    }
    let kind = cur.expect_name("algebra kind")?;
    cur.expect_end()?;
    Ok(kind)
}

/// Parse a signed rational coefficient prefix `[int[/int] *]`; returns the
/// accumulated coefficient (sign already applied).
fn coefficient_prefix(cur: &mut Cursor, sign: i64) -> Result<Q> {
    let mut coeff = qi(sign);
    if let Some(Tok::Int(n)) = cur.peek() {
        let n = *n;
        cur.advance();
        let mut c = qi(n);
        if let Some(Tok::Slash) = cur.peek() {
            cur.advance();
            let col = cur.col();
            let d = cur.expect_int("a denominator")?;
            if d == 0 {
                return Err(err(cur.line, col, "zero denominator"));
            }
            c = qi(n) / qi(d);
        }
        cur.expect_tok(&Tok::Star)?;
        coeff *= c;
    }
    Ok(coeff)
}

/// Leading sign of the first term, or the `+`/`-` separator between terms.
fn term_sign(cur: &mut Cursor) -> i64 {
    match cur.peek() {
        Some(Tok::Minus) => {
            cur.advance();
            -1
        }
        Some(Tok::Plus) => {
            cur.advance();
            1
        }
        _ => 1,
    }
}

fn sullivan_rhs(cur: &mut Cursor) -> Result<Vec<NamedTerm>> {
    if let Some(Tok::Int(0)) = cur.peek() {
        if cur.toks.len() == cur.k + 1 {
            cur.advance();
            return Ok(Vec::new());
        }
    }
    let mut terms = Vec::new();
    let mut sign = term_sign(cur);
    loop {
        let coeff = coefficient_prefix(cur, sign)?;
        let mut factors = Vec::new();
        loop {
            let name = cur.expect_name("a generator name")?;
            let mut e: u32 = 1;
            if let Some(Tok::Caret) = cur.peek() {
                cur.advance();
                let col = cur.col();
                let v = cur.expect_int("an exponent")?;
                if v < 1 {
                    return Err(err(cur.line, col, "exponent must be positive"));
                }
                e = u32::try_from(v).map_err(|_| err(cur.line, col, "exponent is too large"))?;
            }
            factors.push((name, e));
            if let Some(Tok::Star) = cur.peek() {
                cur.advance();
            } else {
                break;
            }
        }
        terms.push((coeff, factors));
        match cur.peek() {
            None => break,
            Some(Tok::Plus) => {
                cur.advance();
                sign = 1;
            }
            Some(Tok::Minus) => {
                cur.advance();
                sign = -1;
            }
            Some(t) => {
                return Err(err(
                    cur.line,
                    cur.col(),
                    format!("expected `+` or `-` between terms, found {}", t.describe()),
                ))
            }
        }
    }
    Ok(terms)
}

fn bracket_expr(cur: &mut Cursor) -> Result<NamedBracket> {
    let col = cur.col();
    match cur.advance() {
        Some(Tok::Name(n)) => Ok(leaf(n)),
        Some(Tok::LBracket) => {
            let a = bracket_expr(cur)?;
            cur.expect_tok(&Tok::Comma)?;
            let b = bracket_expr(cur)?;
            cur.expect_tok(&Tok::RBracket)?;
            Ok(bracket(a, b))
        }
        Some(t) => Err(err(
            cur.line,
            col,
            format!("expected a generator name or `[`, found {}", t.describe()),
        )),
        None => Err(err(cur.line, col, "expected a bracket expression")),
    }
}

fn lie_rhs(cur: &mut Cursor) -> Result<Vec<(Q, NamedBracket)>> {
    if let Some(Tok::Int(0)) = cur.peek() {
        if cur.toks.len() == cur.k + 1 {
            cur.advance();
            return Ok(Vec::new());
        }
    }
    let mut terms = Vec::new();
    let mut sign = term_sign(cur);
    loop {
        let coeff = coefficient_prefix(cur, sign)?;
        let expr = bracket_expr(cur)?;
        terms.push((coeff, expr));
        match cur.peek() {
            None => break,
            Some(Tok::Plus) => {
                cur.advance();
                sign = 1;
            }
            Some(Tok::Minus) => {
                cur.advance();
                sign = -1;
            }
            Some(t) => {
                return Err(err(
                    cur.line,
                    cur.col(),
                    format!("expected `+` or `-` between terms, found {}", t.describe()),
                ))
            }
        }
    }
    Ok(terms)
}

pub fn parse_sullivan(text: &str) -> Result<SullivanModel> {
    let stmts = lex(text)?;
    let Some(head) = stmts.first() else {
        return Err(err(1, 1, "empty input; expected `algebra sullivan`"));
    };
    let kind = header_kind(head)?;
    if kind != "sullivan" {
        return Err(err(
            head.line,
            1,
            format!("expected `algebra sullivan`, found `algebra {kind}`"),
        ));
    }
    let mut builder = ModelBuilder::new();
    let mut seen_d: HashSet<String> = HashSet::new();
    for stmt in &stmts[1..] {
        let mut cur = Cursor::new(stmt);
        let kw = cur.expect_name("`generator` or `d`")?;
        match kw.as_str() {
            "generator" => {
                let name = cur.expect_name("a generator name")?;
                let col = cur.col();
                let deg = cur.expect_int("a degree")?;
                cur.expect_end()?;
                let deg = u32::try_from(deg)
                    .map_err(|_| err(stmt.line, col, "degree must be nonnegative"))?;
                builder = builder.generator(&name, deg);
            }
            "d" => {
                let name = cur.expect_name("a generator name")?;
                if !seen_d.insert(name.clone()) {
                    return Err(err(
                        stmt.line,
                        stmt.toks[0].0,
                        format!("differential of `{name}` given twice"),
                    ));
                }
                cur.expect_tok(&Tok::Eq)?;
                let terms = sullivan_rhs(&mut cur)?;
                cur.expect_end()?;
                builder = builder.d(&name, terms);
            }
            other => {
                return Err(err(
                    stmt.line,
                    stmt.toks[0].0,
                    format!("unknown keyword `{other}`; expected `generator` or `d`"),
                ))
            }
        }
    }
    builder.build()
}

pub fn parse_lie(text: &str) -> Result<FreeLieModel> {
    let stmts = lex(text)?;
    let Some(head) = stmts.first() else {
        return Err(err(1, 1, "empty input; expected `algebra lie`"));
    };
    let kind = header_kind(head)?;
    if kind != "lie" {
        return Err(err(
            head.line,
            1,
            format!("expected `algebra lie`, found `algebra {kind}`"),
        ));
    }
    let mut builder = LieModelBuilder::new();
    let mut seen_d: HashSet<String> = HashSet::new();
    for stmt in &stmts[1..] {
        let mut cur = Cursor::new(stmt);
        let kw = cur.expect_name("`generator` or `d`")?;
        match kw.as_str() {
            "generator" => {
                let name = cur.expect_name("a generator name")?;
                let col = cur.col();
                let deg = cur.expect_int("a degree")?;
                cur.expect_end()?;
                let deg = u32::try_from(deg)
                    .map_err(|_| err(stmt.line, col, "degree must be nonnegative"))?;
                builder = builder.generator(&name, deg);
            }
            "d" => {
                let name = cur.expect_name("a generator name")?;
                if !seen_d.insert(name.clone()) {
                    return Err(err(
                        stmt.line,
                        stmt.toks[0].0,
                        format!("differential of `{name}` given twice"),
                    ));
                }
                cur.expect_tok(&Tok::Eq)?;
                let terms = lie_rhs(&mut cur)?;
                cur.expect_end()?;
                builder = builder.d(&name, terms);
            }
            other => {
                return Err(err(
                    stmt.line,
                    stmt.toks[0].0,
                    format!("unknown keyword `{other}`; expected `generator` or `d`"),
                ))
            }
        }
    }
    builder.build()
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let stmts = lex(text)?;
    let mut g = Graph::new();
    for stmt in &stmts {
        let mut cur = Cursor::new(stmt);
        let kw = cur.expect_name("`vertex` or `edge`")?;
        match kw.as_str() {
            "vertex" => {
                let name = cur.expect_name("a vertex name")?;
                cur.expect_end()?;
                g.add_vertex(&name)?;
            }
            "edge" => {
                let a = cur.expect_name("a vertex name")?;
                let b = cur.expect_name("a vertex name")?;
                cur.expect_end()?;
                g.add_edge(&a, &b)?;
            }
            other => {
                return Err(err(
                    stmt.line,
                    stmt.toks[0].0,
                    format!("unknown keyword `{other}`; expected `vertex` or `edge`"),
                ))
            }
        }
    }
    Ok(g)
}

/// A model file of either kind, dispatched on the `algebra` header.
#[derive(Clone, Debug)]
pub enum ParsedModel {
    Sullivan(SullivanModel),
    Lie(FreeLieModel),
}

pub fn parse_model(text: &str) -> Result<ParsedModel> {
    let stmts = lex(text)?;
    let Some(head) = stmts.first() else {
        return Err(err(1, 1, "empty input; expected an `algebra` header"));
    };
    match header_kind(head)?.as_str() {
        "sullivan" => Ok(ParsedModel::Sullivan(parse_sullivan(text)?)),
        "lie" => Ok(ParsedModel::Lie(parse_lie(text)?)),
        other => Err(err(
            head.line,
            1,
            format!("unknown algebra kind `{other}`; expected `sullivan` or `lie`"),
        )),
    }
}

fn render_word(m: &SullivanModel, w: &Word) -> String {
    if w.is_unit() {
        return "1".to_string();
    }
    w.factors()
        .iter()
        .map(|&(g, e)| {
            let name = &m.generator(g).name;
            if e == 1 {
                name.clone()
            } else {
                format!("{name}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn render_poly(m: &SullivanModel, p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut first = true;
    for (w, c) in p.terms() {
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                out.push('-');
            }
            first = false;
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&q_to_string(&mag));
            out.push('*');
        }
        out.push_str(&render_word(m, w));
    }
    out
}

/// Canonical text of a Sullivan model: header, generators in canonical
/// order, then one `d` line per generator.
pub fn serialize_sullivan(m: &SullivanModel) -> String {
    let mut out = String::from("algebra sullivan\n");
    for g in m.generators() {
        out.push_str(&format!("generator {} {}\n", g.name, g.degree));
    }
    for (i, g) in m.generators().iter().enumerate() {
        let d = m.differential_of(i as u16);
        out.push_str(&format!("d {} = {}\n", g.name, render_poly(m, d)));
    }
    out
}

/// Canonical text of a free Lie model.
pub fn serialize_lie(m: &FreeLieModel) -> String {
    let mut out = String::from("algebra lie\n");
    for g in m.generators() {
        out.push_str(&format!("generator {} {}\n", g.name, g.degree));
    }
    for (i, g) in m.generators().iter().enumerate() {
        let c = m.differential_of(i as u16);
        out.push_str(&format!("d {} = ", g.name));
        if c.is_empty() {
            out.push('0');
        } else {
            let mut first = true;
            for (coeff, expr) in c {
                let neg = coeff.is_negative();
                let mag = coeff.abs();
                if first {
                    if neg {
                        out.push('-');
                    }
                    first = false;
                } else {
                    out.push_str(if neg { " - " } else { " + " });
                }
                if !mag.is_one() {
                    out.push_str(&q_to_string(&mag));
                    out.push_str(" * ");
                }
                out.push_str(&m.expression_to_string(expr));
            }
        }
        out.push('\n');
    }
    out
}

/// Canonical text of a graph: vertices in insertion order, edges sorted.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        out.push_str(&format!("vertex {v}\n"));
    }
    for &(i, j) in g.edges() {
        out.push_str(&format!("edge {} {}\n", g.vertices()[i], g.vertices()[j]));
    }
    out
}

/// Hex SHA-256 of a canonical text.
pub fn fingerprint(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn sullivan_fingerprint(m: &SullivanModel) -> String {
    fingerprint(&serialize_sullivan(m))
}

pub fn lie_fingerprint(m: &FreeLieModel) -> String {
    fingerprint(&serialize_lie(m))
}

pub fn graph_fingerprint(g: &Graph) -> String {
    fingerprint(&serialize_graph(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{
        abc_lie_model, arkowitz_lupton_model, costoya_viruel_model, sphere_lie_model,
        sphere_model, two_stage_model, Graph,
    };

    fn same_sullivan(a: &SullivanModel, b: &SullivanModel) -> bool {
        a.generator_count() == b.generator_count()
            && (0..a.generator_count() as u16)
                .all(|i| a.generator(i) == b.generator(i) && a.differential_of(i) == b.differential_of(i))
    }

    #[test]
    fn parses_the_two_stage_example() {
        let text = "algebra sullivan\ngenerator x 2\ngenerator y 3\nd x = 0\nd y = x^2\n";
        let m = parse_sullivan(text).unwrap();
        assert!(same_sullivan(&m, &two_stage_model(1, 2).unwrap()));
    }

    #[test]
    fn whitespace_and_comments_are_ignored() {
        let text = "\n# a sphere\nalgebra   sullivan\n\n  generator x 4   # even\ngenerator y 7\nd y = x ^ 2  # relation\n";
        let m = parse_sullivan(text).unwrap();
        assert!(same_sullivan(&m, &sphere_model(4).unwrap()));
    }

    #[test]
    fn coefficients_signs_and_multiword_sums() {
        let text = "algebra sullivan\ngenerator x 2\ngenerator u 2\ngenerator y 3\nd y = 1/2*x^2 + 3*x*u - u^2\n";
        let m = parse_sullivan(text).unwrap();
        let y = m.index_of("y").unwrap();
        assert_eq!(m.differential_of(y).len(), 3);
        let leading = "algebra sullivan\ngenerator x 2\ngenerator y 3\nd y = -x^2\n";
        let m = parse_sullivan(leading).unwrap();
        let y = m.index_of("y").unwrap();
        let d = m.differential_of(y);
        assert_eq!(d.len(), 1);
        assert!(d.terms().all(|(_, c)| *c == qi(-1)));
    }

    #[test]
    fn roundtrips_are_byte_stable() {
        let models = vec![
            two_stage_model(1, 2).unwrap(),
            two_stage_model(2, 3).unwrap(),
            sphere_model(5).unwrap(),
            arkowitz_lupton_model(),
            costoya_viruel_model(&Graph::path(2)).unwrap(),
        ];
        for m in models {
            let text = serialize_sullivan(&m);
            let back = parse_sullivan(&text).unwrap();
            assert!(same_sullivan(&m, &back));
            assert_eq!(serialize_sullivan(&back), text);
            assert_eq!(sullivan_fingerprint(&m), sullivan_fingerprint(&back));
        }
    }

    #[test]
    fn fingerprints_ignore_formatting_but_see_content() {
        let a = "algebra sullivan\ngenerator x 2\ngenerator y 3\nd y = x^2\n";
        let b = "# comment\nalgebra sullivan\n generator   x 2\ngenerator y 3\nd x = 0\nd y  =  x ^ 2\n";
        let fa = sullivan_fingerprint(&parse_sullivan(a).unwrap());
        let fb = sullivan_fingerprint(&parse_sullivan(b).unwrap());
        assert_eq!(fa, fb);
        assert_eq!(fa.len(), 64);
        let c = "algebra sullivan\ngenerator x 2\ngenerator y 3\nd y = 2*x^2\n";
        assert_ne!(fa, sullivan_fingerprint(&parse_sullivan(c).unwrap()));
    }

    #[test]
    fn parse_errors_carry_line_and_column() {
        let cases: Vec<(&str, usize)> = vec![
            ("algebra sullivan\ngenerator x\n", 2),
            ("algebra sullivan\ngenerator x 2\nd x = x $\n", 3),
            ("algebra sullivan\ngenerator x 2\nd x = 1/0*x\n", 3),
            ("algebra sullivan\ngenerator y 3\nd y = x^0\n", 3),
            ("algebra sullivan\ngenerator x 2\nd x = x +\n", 3),
            ("algebra sullivan\nfoo x 2\n", 2),
            ("generator x 2\n", 1),
        ];
        for (text, want_line) in cases {
            match parse_sullivan(text) {
                Err(Error::Parse { line, column, .. }) => {
                    assert_eq!(line, want_line, "{text:?}");
                    assert!(column >= 1);
                }
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
        let dup = "algebra sullivan\ngenerator x 2\ngenerator y 3\nd y = x^2\nd y = x^2\n";
        assert!(matches!(parse_sullivan(dup), Err(Error::Parse { line: 5, .. })));
    }

    #[test]
    fn semantic_errors_come_from_validation() {
        let unknown = "algebra sullivan\ngenerator x 2\ngenerator y 3\nd y = w^2\n";
        assert!(matches!(
            parse_sullivan(unknown),
            Err(Error::UnknownGenerator { .. })
        ));
        let nonmin = "algebra sullivan\ngenerator x 3\ngenerator h 2\nd h = x\n";
        assert!(matches!(parse_sullivan(nonmin), Err(Error::NotMinimal { .. })));
        let inhom = "algebra sullivan\ngenerator x 2\ngenerator y 3\nd y = x^3\n";
        assert!(matches!(
            parse_sullivan(inhom),
            Err(Error::NonHomogeneousDifferential { .. })
        ));
    }

    #[test]
    fn lie_files_roundtrip() {
        let text = "algebra lie\ngenerator a 3\ngenerator b 3\ngenerator c 7\nd c = [a, b]\n";
        let m = parse_lie(text).unwrap();
        let reference = abc_lie_model();
        assert_eq!(m.generator_count(), reference.generator_count());
        assert_eq!(serialize_lie(&m), serialize_lie(&reference));
        assert_eq!(lie_fingerprint(&m), lie_fingerprint(&reference));

        let canonical = serialize_lie(&m);
        assert_eq!(serialize_lie(&parse_lie(&canonical).unwrap()), canonical);

        let sphere = sphere_lie_model(4).unwrap();
        let text = serialize_lie(&sphere);
        assert_eq!(serialize_lie(&parse_lie(&text).unwrap()), text);
    }

    #[test]
    fn lie_nested_brackets_and_coefficients() {
        let text = "algebra lie\ngenerator a 3\ngenerator b 3\ngenerator c 7\ngenerator e 14\nd e = 2 * [a, [b, c]] - 1/3 * [b, [b, c]]\n";
        let m = parse_lie(text).unwrap();
        let e = m.index_of("e").unwrap();
        assert_eq!(m.differential_of(e).len(), 2);
        let canonical = serialize_lie(&m);
        assert_eq!(serialize_lie(&parse_lie(&canonical).unwrap()), canonical);

        let bad = "algebra lie\ngenerator a 3\nd a = [a\n";
        assert!(matches!(parse_lie(bad), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn model_dispatch_follows_the_header() {
        let s = "algebra sullivan\ngenerator x 3\n";
        assert!(matches!(parse_model(s), Ok(ParsedModel::Sullivan(_))));
        let l = "algebra lie\ngenerator w 2\n";
        assert!(matches!(parse_model(l), Ok(ParsedModel::Lie(_))));
        let bad = "algebra group\n";
        assert!(matches!(parse_model(bad), Err(Error::Parse { .. })));
        let wrong = parse_lie("algebra sullivan\ngenerator x 3\n");
        assert!(matches!(wrong, Err(Error::Parse { .. })));
    }

    #[test]
    fn graph_files_roundtrip_and_validate() {
        let text = "vertex a\nvertex b\nvertex c\nedge a b\nedge b c\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(serialize_graph(&g), text);
        assert_eq!(graph_fingerprint(&g), graph_fingerprint(&parse_graph(text).unwrap()));

        assert!(matches!(
            parse_graph("vertex a\nedge a zz\n"),
            Err(Error::UnknownVertex { .. })
        ));
        assert!(matches!(
            parse_graph("vertex a\nvertex a\n"),
            Err(Error::DuplicateGenerator { .. })
        ));
        assert!(matches!(
            parse_graph("vertex a\nedge a\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("street a b\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
