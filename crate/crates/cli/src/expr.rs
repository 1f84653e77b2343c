//! The expression language.
//!
//! ```text
//! program := { "let" IDENT "=" expr [";"] } expr [";"]
//! expr    := postfix { postfix }        (juxtaposition needs whitespace, not a line break)
//! postfix := atom { "(" expr [ "->" expr ] ")" }
//! atom    := "{" [expr {"," expr}] "}" | NAT | "V"NAT | "Z"NAT | "D" | "∅" | "◇"
//!          | "P(" NAT {"," NAT} ")" | "(" expr {"," expr} ")" | "[" expr {"," expr} "]M"
//!          | BUILTIN "(" [expr {"," expr}] ")" | IDENT
//! ```
//!
//! A parenthesised group with one entry is just grouping. With two or more
//! entries it is a positional tuple. Numeric builtin arguments (`perm`,
//! `ident`, `get`) are Zermelo numerals.

use std::collections::HashMap;
use std::fmt;

use hfs_core::algebra::{
    compose, compose_all, lcc, map_union, maximal_constituents, remove_bottom, remove_top, replace,
};
use hfs_core::fusion::{
    close, fuse, middle, middle_identity, middle_permutation, validate_bottom, validate_middle,
    validate_top,
};
use hfs_core::numerals::{as_zermelo, vn, zermelo};
use hfs_core::tuples::{diamond, get_at, kuratowski_pair, make_tuple, position_path, PositionPath};
use hfs_core::SetHandle;

/// Largest numeral literal accepted. Bigger ones are almost certainly typos.
pub const MAX_NUMERAL: usize = 1_000_000;

pub type Span = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at {}..{}: {message}", span.0, span.1)]
    Syntax { span: Span, message: String },
    #[error("evaluation error at {}..{}: {message}", span.0, span.1)]
    Eval {
        span: Span,
        message: String,
        cause: Option<hfs_core::Error>,
    },
}

impl ExprError {
    pub fn span(&self) -> Span {
        match self {
            ExprError::Syntax { span, .. } | ExprError::Eval { span, .. } => *span,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            ExprError::Syntax { .. } => 3,
            ExprError::Eval { .. } => 2,
        }
    }

    /// The message with the offending line and a caret underline.
    pub fn report(&self, source: &str) -> String {
        let (start, end) = self.span();
        let line_start = source[..start.min(source.len())]
            .rfind('\n')
            .map_or(0, |i| i + 1);
        let line_end = source[line_start..]
            .find('\n')
            .map_or(source.len(), |i| line_start + i);
        let line = &source[line_start..line_end];
        let col = source[line_start..start.min(source.len())].chars().count();
        let width = source[start.min(line_end)..end.clamp(start, line_end)]
            .chars()
            .count()
            .max(1);
        format!(
            "error: {self}\n  {line}\n  {}{}\n",
            " ".repeat(col),
            "^".repeat(width)
        )
    }
}

fn syntax(span: Span, message: impl Into<String>) -> ExprError {
    ExprError::Syntax {
        span,
        message: message.into(),
    }
}

fn eval_err(span: Span, message: impl Into<String>) -> ExprError {
    ExprError::Eval {
        span,
        message: message.into(),
        cause: None,
    }
}

fn lift<T>(span: Span, r: hfs_core::Result<T>) -> Result<T, ExprError> {
    r.map_err(|e| ExprError::Eval {
        span,
        message: e.to_string(),
        cause: Some(e),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Arrow,
    Eq,
    Semi,
    Nat(usize),
    Ident(String),
    Empty,
    Diamond,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
    spaced: bool,
    newline: bool,
}

fn lex(src: &str) -> Result<Vec<Token>, ExprError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    let mut spaced = false;
    let mut newline = false;
    while let Some((i, c)) = it.next() {
        let single = |tok| Some((tok, i + c.len_utf8()));
        let found = match c {
            c if c.is_whitespace() => {
                spaced = true;
                newline |= c == '\n';
                continue;
            }
            '{' => single(Tok::LBrace),
            '}' => single(Tok::RBrace),
            '(' => single(Tok::LParen),
            ')' => single(Tok::RParen),
            '[' => single(Tok::LBrack),
            ']' => single(Tok::RBrack),
            ',' => single(Tok::Comma),
            '=' => single(Tok::Eq),
            ';' => single(Tok::Semi),
            '∅' => single(Tok::Empty),
            '◇' => single(Tok::Diamond),
            '-' => match it.next() {
                Some((_, '>')) => Some((Tok::Arrow, i + 2)),
                _ => return Err(syntax((i, i + 1), "expected '->'")),
            },
            c if c.is_ascii_digit() => {
                let mut end = i + 1;
                while let Some(&(j, d)) = it.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    end = j + 1;
                    it.next();
                }
                let n = src[i..end]
                    .parse::<usize>()
                    .map_err(|_| syntax((i, end), "numeral out of range"))?;
                Some((Tok::Nat(n), end))
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = i + 1;
                while let Some(&(j, d)) = it.peek() {
                    if !(d.is_ascii_alphanumeric() || d == '_') {
                        break;
                    }
                    end = j + 1;
                    it.next();
                }
                Some((Tok::Ident(src[i..end].to_string()), end))
            }
            other => {
                return Err(syntax(
                    (i, i + other.len_utf8()),
                    format!("unexpected character {other:?}"),
                ))
            }
        };
        let (tok, end) = found.expect("every arm yields a token");
        out.push(Token {
            tok,
            span: (i, end),
            spaced,
            newline,
        });
        spaced = false;
        newline = false;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Set(Vec<Expr>),
    Zermelo(usize),
    VonNeumann(usize),
    Diamond,
    Position(Vec<usize>),
    Tuple(Vec<Expr>),
    Middle(Vec<Expr>),
    Call(Builtin, Vec<Expr>),
    Var(String),
    Apply(Box<Expr>, Box<Expr>),
    Replace(Box<Expr>, Box<Expr>, Box<Expr>),
    Juxtapose(Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub lets: Vec<(String, Expr)>,
    pub body: Expr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Kpair,
    Union,
    Fuse,
    Close,
    Perm,
    Ident,
    Lcc,
    Maxc,
    Untop,
    Unbottom,
    MapUnion,
    Get,
}

impl Builtin {
    pub const ALL: [(&'static str, Builtin); 12] = [
        ("kpair", Builtin::Kpair),
        ("union", Builtin::Union),
        ("fuse", Builtin::Fuse),
        ("close", Builtin::Close),
        ("perm", Builtin::Perm),
        ("ident", Builtin::Ident),
        ("lcc", Builtin::Lcc),
        ("maxc", Builtin::Maxc),
        ("untop", Builtin::Untop),
        ("unbottom", Builtin::Unbottom),
        ("mapunion", Builtin::MapUnion),
        ("get", Builtin::Get),
    ];

    fn lookup(name: &str) -> Option<Builtin> {
        Self::ALL.iter().find(|(n, _)| *n == name).map(|&(_, b)| b)
    }

    fn name(self) -> &'static str {
        Self::ALL
            .iter()
            .find(|(_, b)| *b == self)
            .map(|&(n, _)| n)
            .unwrap()
    }

    /// Allowed argument counts, `None` meaning unbounded above.
    fn arity(self) -> (usize, Option<usize>) {
        match self {
            Builtin::Kpair
            | Builtin::Fuse
            | Builtin::Lcc
            | Builtin::Untop
            | Builtin::Unbottom
            | Builtin::MapUnion => (2, Some(2)),
            Builtin::Close | Builtin::Ident | Builtin::Maxc => (1, Some(1)),
            Builtin::Union => (0, None),
            Builtin::Perm => (1, None),
            Builtin::Get => (2, None),
        }
    }
}

fn numeral_ident(name: &str, prefix: char) -> Option<&str> {
    let rest = name.strip_prefix(prefix)?;
    (!rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit())).then_some(rest)
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn peek_is(&self, tok: &Tok) -> bool {
        self.peek().is_some_and(|t| &t.tok == tok)
    }

    fn here(&self) -> Span {
        self.peek().map_or((self.end, self.end), |t| t.span)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token, ExprError> {
        match self.peek() {
            Some(t) if t.tok == tok => Ok(self.bump().unwrap()),
            Some(t) => Err(syntax(
                t.span,
                format!("expected {what}, found {}", describe(&t.tok)),
            )),
            None => Err(syntax(
                self.here(),
                format!("expected {what}, found end of input"),
            )),
        }
    }

    fn program(&mut self) -> Result<Program, ExprError> {
        let mut lets = Vec::new();
        while matches!(self.peek(), Some(Token { tok: Tok::Ident(k), .. }) if k == "let") {
            self.bump();
            let name_tok = self
                .bump()
                .ok_or_else(|| syntax(self.here(), "expected a name after 'let'"))?;
            let name = match name_tok.tok {
                Tok::Ident(n) if is_bindable(&n) => n,
                Tok::Ident(n) => return Err(syntax(name_tok.span, format!("'{n}' is reserved"))),
                other => {
                    return Err(syntax(
                        name_tok.span,
                        format!("expected a name, found {}", describe(&other)),
                    ))
                }
            };
            self.expect(Tok::Eq, "'='")?;
            let value = self.expr()?;
            lets.push((name, value));
            if self.peek_is(&Tok::Semi) {
                self.bump();
            }
        }
        let body = self.expr()?;
        if self.peek_is(&Tok::Semi) {
            self.bump();
        }
        if let Some(t) = self.peek() {
            return Err(syntax(t.span, format!("unexpected {}", describe(&t.tok))));
        }
        Ok(Program { lets, body })
    }

    fn continues_juxtaposition(&self) -> bool {
        match self.peek() {
            Some(t) if t.newline => false,
            Some(t) => match &t.tok {
                Tok::LBrace
                | Tok::LParen
                | Tok::LBrack
                | Tok::Nat(_)
                | Tok::Empty
                | Tok::Diamond => true,
                Tok::Ident(k) => k != "let",
                _ => false,
            },
            None => false,
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let first = self.postfix()?;
        let mut parts = vec![first];
        while self.continues_juxtaposition() {
            let t = self.peek().unwrap();
            if !t.spaced {
                return Err(syntax(
                    t.span,
                    "juxtaposed atoms must be separated by whitespace",
                ));
            }
            parts.push(self.postfix()?);
        }
        if parts.len() == 1 {
            return Ok(parts.pop().unwrap());
        }
        let span = (parts[0].span.0, parts.last().unwrap().span.1);
        Ok(Expr {
            kind: ExprKind::Juxtapose(parts),
            span,
        })
    }

    fn postfix(&mut self) -> Result<Expr, ExprError> {
        let mut e = self.atom()?;
        while matches!(self.peek(), Some(t) if t.tok == Tok::LParen && !t.spaced) {
            self.bump();
            let arg = self.expr()?;
            let replacement = if self.peek_is(&Tok::Arrow) {
                self.bump();
                Some(self.expr()?)
            } else {
                None
            };
            let close = self.expect(Tok::RParen, "')'")?;
            let span = (e.span.0, close.span.1);
            e = Expr {
                kind: match replacement {
                    Some(z) => ExprKind::Replace(Box::new(e), Box::new(arg), Box::new(z)),
                    None => ExprKind::Apply(Box::new(e), Box::new(arg)),
                },
                span,
            };
        }
        Ok(e)
    }

    /// Comma-separated expressions up to `close`, which is consumed.
    fn list(&mut self, close: Tok, what: &str) -> Result<(Vec<Expr>, Span), ExprError> {
        let mut items = Vec::new();
        if !self.peek_is(&close) {
            items.push(self.expr()?);
            while self.peek_is(&Tok::Comma) {
                self.bump();
                items.push(self.expr()?);
            }
        }
        let end = self.expect(close, what)?;
        Ok((items, end.span))
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let Some(t) = self.bump() else {
            return Err(syntax(
                self.here(),
                "expected an expression, found end of input",
            ));
        };
        let start = t.span.0;
        let kind = match t.tok {
            Tok::LBrace => {
                let (items, end) = self.list(Tok::RBrace, "',' or '}'")?;
                return Ok(Expr {
                    kind: ExprKind::Set(items),
                    span: (start, end.1),
                });
            }
            Tok::LParen => {
                let (mut items, end) = self.list(Tok::RParen, "',' or ')'")?;
                let span = (start, end.1);
                return match items.len() {
                    0 => Err(syntax(span, "empty parentheses")),
                    1 => Ok(items.pop().unwrap()),
                    _ => Ok(Expr {
                        kind: ExprKind::Tuple(items),
                        span,
                    }),
                };
            }
            Tok::LBrack => {
                let (items, end) = self.list(Tok::RBrack, "',' or ']'")?;
                match self.peek() {
                    Some(Token {
                        tok: Tok::Ident(m),
                        spaced: false,
                        ..
                    }) if m == "M" => {}
                    _ => return Err(syntax(end, "expected 'M' right after ']'")),
                }
                let m = self.bump().unwrap();
                if items.is_empty() {
                    return Err(syntax(
                        (start, m.span.1),
                        "a middle structure needs at least one entry",
                    ));
                }
                return Ok(Expr {
                    kind: ExprKind::Middle(items),
                    span: (start, m.span.1),
                });
            }
            Tok::Nat(n) => ExprKind::Zermelo(n),
            Tok::Empty => ExprKind::Set(Vec::new()),
            Tok::Diamond => ExprKind::Diamond,
            Tok::Ident(name) => {
                let call = matches!(self.peek(), Some(p) if p.tok == Tok::LParen && !p.spaced);
                if name == "D" {
                    ExprKind::Diamond
                } else if let Some(d) = numeral_ident(&name, 'V') {
                    ExprKind::VonNeumann(parse_numeral(d, t.span)?)
                } else if let Some(d) = numeral_ident(&name, 'Z') {
                    ExprKind::Zermelo(parse_numeral(d, t.span)?)
                } else if name == "P" && call {
                    self.bump();
                    let mut coords = vec![self.nat()?];
                    while self.peek_is(&Tok::Comma) {
                        self.bump();
                        coords.push(self.nat()?);
                    }
                    let end = self.expect(Tok::RParen, "',' or ')'")?;
                    return Ok(Expr {
                        kind: ExprKind::Position(coords),
                        span: (start, end.span.1),
                    });
                } else if let Some(b) = Builtin::lookup(&name) {
                    if !call {
                        return Err(syntax(
                            t.span,
                            format!("builtin '{name}' needs an argument list"),
                        ));
                    }
                    self.bump();
                    let (args, end) = self.list(Tok::RParen, "',' or ')'")?;
                    let span = (start, end.1);
                    let (lo, hi) = b.arity();
                    if args.len() < lo || hi.is_some_and(|h| args.len() > h) {
                        return Err(syntax(
                            span,
                            format!("'{name}' takes {}", arity_text(lo, hi)),
                        ));
                    }
                    return Ok(Expr {
                        kind: ExprKind::Call(b, args),
                        span,
                    });
                } else if name == "let" {
                    return Err(syntax(t.span, "'let' only starts a statement"));
                } else {
                    ExprKind::Var(name)
                }
            }
            other => {
                return Err(syntax(
                    t.span,
                    format!("expected an expression, found {}", describe(&other)),
                ))
            }
        };
        Ok(Expr { kind, span: t.span })
    }

    fn nat(&mut self) -> Result<usize, ExprError> {
        match self.bump() {
            Some(Token {
                tok: Tok::Nat(n), ..
            }) => Ok(n),
            Some(t) => Err(syntax(
                t.span,
                format!("expected a natural number, found {}", describe(&t.tok)),
            )),
            None => Err(syntax(
                self.here(),
                "expected a natural number, found end of input",
            )),
        }
    }
}

fn parse_numeral(digits: &str, span: Span) -> Result<usize, ExprError> {
    digits
        .parse()
        .map_err(|_| syntax(span, "numeral out of range"))
}

fn arity_text(lo: usize, hi: Option<usize>) -> String {
    match hi {
        Some(h) if h == lo => format!("{lo} argument{}", if lo == 1 { "" } else { "s" }),
        Some(h) => format!("{lo} to {h} arguments"),
        None => format!("at least {lo} argument{}", if lo == 1 { "" } else { "s" }),
    }
}

fn is_bindable(name: &str) -> bool {
    !(name == "let"
        || name == "D"
        || name == "P"
        || name == "M"
        || numeral_ident(name, 'V').is_some()
        || numeral_ident(name, 'Z').is_some()
        || Builtin::lookup(name).is_some())
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::LBrace => "'{'".into(),
        Tok::RBrace => "'}'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::LBrack => "'['".into(),
        Tok::RBrack => "']'".into(),
        Tok::Comma => "','".into(),
        Tok::Arrow => "'->'".into(),
        Tok::Eq => "'='".into(),
        Tok::Semi => "';'".into(),
        Tok::Nat(n) => format!("numeral {n}"),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Empty => "'∅'".into(),
        Tok::Diamond => "'◇'".into(),
    }
}

pub fn parse_program(src: &str) -> Result<Program, ExprError> {
    let toks = lex(src)?;
    Parser {
        toks: &toks,
        pos: 0,
        end: src.len(),
    }
    .program()
}

/// Variable bindings built up by `let`.
#[derive(Debug, Default, Clone)]
pub struct Env {
    vars: HashMap<String, SetHandle>,
}

impl Env {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, name: impl Into<String>, value: SetHandle) {
        self.vars.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<SetHandle> {
        self.vars.get(name).copied()
    }
}

fn numeral_literal(n: usize, span: Span) -> Result<usize, ExprError> {
    if n > MAX_NUMERAL {
        return Err(eval_err(
            span,
            format!("numeral {n} exceeds the limit of {MAX_NUMERAL}"),
        ));
    }
    Ok(n)
}

fn index_arg(e: &Expr, env: &Env) -> Result<usize, ExprError> {
    let h = e.eval(env)?;
    as_zermelo(h).ok_or_else(|| {
        eval_err(
            e.span,
            format!("expected a Zermelo numeral, got {}", h.text()),
        )
    })
}

impl Expr {
    pub fn eval(&self, env: &Env) -> Result<SetHandle, ExprError> {
        let span = self.span;
        let all = |es: &[Expr]| {
            es.iter()
                .map(|e| e.eval(env))
                .collect::<Result<Vec<_>, _>>()
        };
        Ok(match &self.kind {
            ExprKind::Set(items) => SetHandle::from_elements(all(items)?),
            ExprKind::Zermelo(n) => zermelo(numeral_literal(*n, span)?),
            ExprKind::VonNeumann(n) => vn(numeral_literal(*n, span)?),
            ExprKind::Diamond => diamond(),
            ExprKind::Position(coords) => {
                for &c in coords {
                    numeral_literal(c, span)?;
                }
                position_path(&lift(span, PositionPath::new(coords.clone()))?)
            }
            ExprKind::Tuple(items) => lift(span, make_tuple(&all(items)?))?,
            ExprKind::Middle(items) => lift(span, middle(&all(items)?))?.set(),
            ExprKind::Var(name) => env
                .get(name)
                .ok_or_else(|| eval_err(span, format!("unbound name '{name}'")))?,
            ExprKind::Apply(x, y) => compose(x.eval(env)?, y.eval(env)?),
            ExprKind::Replace(x, y, z) => replace(x.eval(env)?, y.eval(env)?, z.eval(env)?),
            ExprKind::Juxtapose(parts) => compose_all(&all(parts)?),
            ExprKind::Call(b, args) => self.call(*b, args, env)?,
        })
    }

    fn call(&self, b: Builtin, args: &[Expr], env: &Env) -> Result<SetHandle, ExprError> {
        let span = self.span;
        let v = |i: usize| args[i].eval(env);
        Ok(match b {
            Builtin::Kpair => kuratowski_pair(v(0)?, v(1)?),
            Builtin::Union => {
                let mut acc = SetHandle::empty();
                for a in args {
                    acc = acc.union(a.eval(env)?);
                }
                acc
            }
            Builtin::Fuse => {
                let t = lift(args[0].span, validate_top(v(0)?))?;
                let bottom = lift(args[1].span, validate_bottom(v(1)?))?;
                lift(span, fuse(&t, &bottom))?
            }
            Builtin::Close => {
                let m = lift(args[0].span, validate_middle(v(0)?))?;
                lift(span, close(&m))?
            }
            Builtin::Perm => {
                let perm = args
                    .iter()
                    .map(|a| index_arg(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                lift(span, middle_permutation(&perm))?.set()
            }
            Builtin::Ident => {
                let m = index_arg(&args[0], env)?;
                if m == 0 {
                    return Err(eval_err(span, "ident needs a positive arity"));
                }
                lift(span, middle_identity(m))?.set()
            }
            Builtin::Lcc => lift(span, lcc(v(0)?, v(1)?))?,
            Builtin::Maxc => lift(span, maximal_constituents(v(0)?))?,
            Builtin::Untop => lift(span, remove_top(v(0)?, v(1)?))?,
            Builtin::Unbottom => lift(span, remove_bottom(v(0)?, v(1)?))?,
            Builtin::MapUnion => map_union(v(0)?, v(1)?),
            Builtin::Get => {
                let t = v(0)?;
                let coords = args[1..]
                    .iter()
                    .map(|a| index_arg(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                let path = lift(span, PositionPath::new(coords))?;
                lift(span, get_at(t, &path))?
            }
        })
    }
}

impl Program {
    pub fn eval(&self, env: &mut Env) -> Result<SetHandle, ExprError> {
        for (name, value) in &self.lets {
            let h = value.eval(env)?;
            env.bind(name.clone(), h);
        }
        self.body.eval(env)
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses and evaluates `src` in a fresh environment.
pub fn evaluate(src: &str) -> Result<SetHandle, ExprError> {
    parse_program(src)?.eval(&mut Env::new())
}
