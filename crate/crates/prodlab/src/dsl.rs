//! Textual product-definition and claim language: hand-written lexer and
//! recursive-descent parser with spanned diagnostics, plus the canonical
//! printer (`parse . render` is the identity on valid specs).
//!
//! ```text
//! spec      = wallis | blocks | builtin | claim ;
//! wallis    = "wallis" "{" "period=" INT ";" "num=" intlist ";" "den=" intlist "}" ;
//! blocks    = "blocks" "{" "prefix=" fraclist ";" "stream=" stream ";" "schedule=" sched "}" ;
//! stream    = "pairs" "(" "period=" INT "," pairlist [ "," "offset=" INT ] ")"
//!           | "const" "(" FRAC ")" ;
//! sched     = "pippenger" "(" INT ")" | "geometric" "(" FRAC ")"
//!           | "explicit" "(" { "(" INT "," FRAC ")" } ")" ;
//! builtin   = "paper" "(" INT ")" | "wallis_general" "(" INT ")"
//!           | "pippenger_general" "(" INT ")" ;
//! claim     = "claim" "{" "lhs=" side ";" "rhs=" side "}" ;
//! side      = term { "*" term } ;
//! term      = "const" "(" FRAC ")" | builtin [ "^" FRAC ] ;
//! ```
//!
//! `#` starts a comment running to the end of the line. Integers are
//! unbounded in the grammar; values that overflow the model's machine
//! ranges are rejected semantically.

use num::{BigInt, One, ToPrimitive, Zero};

use crate::identity::{ClaimSide, ClaimTerm, IdentityClaim, ProductRef};
use crate::model::{
    builtin, pippenger_general, wallis_general, BlockSchedule, CatalanProduct, FactorStream,
    ModelError, Product, WallisProduct,
};
use crate::numerics::Rational;

/// Byte range plus line/column (1-based) of a construct in the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub column: u32,
}

impl SourceSpan {
    fn join(a: SourceSpan, b: SourceSpan) -> SourceSpan {
        SourceSpan {
            start: a.start,
            end: b.end,
            line: a.line,
            column: a.column,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownBuiltin,
    UnbalancedResidues,
    BadSchedule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}:{}: {:?}: {}",
            self.span.line, self.span.column, self.kind, self.message
        )
    }
}

impl std::error::Error for ParseError {}

/// A parsed top-level specification.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedSpec {
    Wallis(WallisProduct),
    Catalan(CatalanProduct),
    Claim(IdentityClaim),
}

impl ParsedSpec {
    pub fn as_product(&self) -> Option<Product> {
        match self {
            ParsedSpec::Wallis(w) => Some(Product::Wallis(w.clone())),
            ParsedSpec::Catalan(c) => Some(Product::Catalan(c.clone())),
            ParsedSpec::Claim(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Semi,
    Eq,
    Star,
    Caret,
    Slash,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(v) => format!("`{v}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Slash => "`/`".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0usize;
    let mut line = 1u32;
    let mut col = 1u32;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let span_here = |len: usize| SourceSpan {
            start: i,
            end: i + len,
            line,
            column: col,
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            '0'..='9' => {
                let start = i;
                let start_col = col;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                    col += 1;
                }
                let lit = &text[start..i];
                out.push((
                    Tok::Int(lit.parse().expect("digit run")),
                    SourceSpan {
                        start,
                        end: i,
                        line,
                        column: start_col,
                    },
                ));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                let start_col = col;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                    col += 1;
                }
                out.push((
                    Tok::Ident(text[start..i].to_string()),
                    SourceSpan {
                        start,
                        end: i,
                        line,
                        column: start_col,
                    },
                ));
            }
            _ => {
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    '=' => Tok::Eq,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '/' => Tok::Slash,
                    other => {
                        return Err(ParseError {
                            span: span_here(other.len_utf8()),
                            kind: ParseErrorKind::Syntax,
                            message: format!("unexpected character `{other}`"),
                        })
                    }
                };
                out.push((tok, span_here(1)));
                i += 1;
                col += 1;
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn eof_span(&self) -> SourceSpan {
        let end = self.text.len();
        let line = self.text.lines().count().max(1) as u32;
        SourceSpan {
            start: end,
            end,
            line,
            column: self.text.lines().last().map(|l| l.len() + 1).unwrap_or(1) as u32,
        }
    }

    fn peek(&self) -> Option<&(Tok, SourceSpan)> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<(Tok, SourceSpan), ParseError> {
        let item = self.toks.get(self.pos).cloned().ok_or_else(|| ParseError {
            span: self.eof_span(),
            kind: ParseErrorKind::Syntax,
            message: "unexpected end of input".into(),
        })?;
        self.pos += 1;
        Ok(item)
    }

    fn syntax<T>(&self, span: SourceSpan, message: String) -> Result<T, ParseError> {
        Err(ParseError {
            span,
            kind: ParseErrorKind::Syntax,
            message,
        })
    }

    fn expect(&mut self, want: Tok) -> Result<SourceSpan, ParseError> {
        let (tok, span) = self.next()?;
        if tok == want {
            Ok(span)
        } else {
            self.syntax(span, format!("expected {}, found {}", want.describe(), tok.describe()))
        }
    }

    fn expect_keyword(&mut self, word: &str) -> Result<SourceSpan, ParseError> {
        let (tok, span) = self.next()?;
        match tok {
            Tok::Ident(ref s) if s == word => Ok(span),
            other => self.syntax(span, format!("expected `{word}`, found {}", other.describe())),
        }
    }

    fn expect_field(&mut self, name: &str) -> Result<(), ParseError> {
        self.expect_keyword(name)?;
        self.expect(Tok::Eq)?;
        Ok(())
    }

    fn expect_int(&mut self) -> Result<(BigInt, SourceSpan), ParseError> {
        let (tok, span) = self.next()?;
        match tok {
            Tok::Int(v) => Ok((v, span)),
            other => self.syntax(span, format!("expected an integer, found {}", other.describe())),
        }
    }

    fn expect_u64(&mut self) -> Result<(u64, SourceSpan), ParseError> {
        let (v, span) = self.expect_int()?;
        match v.to_u64() {
            Some(v) => Ok((v, span)),
            None => self.syntax(span, format!("integer `{v}` is out of the supported range")),
        }
    }

    /// FRAC = INT [ "/" INT ].
    fn expect_frac(&mut self) -> Result<(Rational, SourceSpan), ParseError> {
        let (num, span) = self.expect_int()?;
        if matches!(self.peek(), Some((Tok::Slash, _))) {
            self.next()?;
            let (den, dspan) = self.expect_int()?;
            if den.is_zero() {
                return self.syntax(dspan, "denominator must be nonzero".into());
            }
            Ok((Rational::new(num, den), SourceSpan::join(span, dspan)))
        } else {
            Ok((Rational::from_integer(num), span))
        }
    }

    fn model_err(
        &self,
        span: SourceSpan,
        err: ModelError,
        default_kind: ParseErrorKind,
    ) -> ParseError {
        let kind = match &err {
            ModelError::UnknownBuiltin(_) => ParseErrorKind::UnknownBuiltin,
            ModelError::UnbalancedResidues { .. } | ModelError::ResidueCountMismatch { .. } => {
                ParseErrorKind::UnbalancedResidues
            }
            ModelError::BadSchedule(_) => ParseErrorKind::BadSchedule,
            ModelError::InvalidProduct(_) => default_kind,
        };
        ParseError {
            span,
            kind,
            message: err.to_string(),
        }
    }

    /// intlist = "[" INT { "," INT } "]".
    fn int_list(&mut self) -> Result<Vec<u64>, ParseError> {
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        loop {
            let (v, _) = self.expect_u64()?;
            out.push(v);
            match self.next()? {
                (Tok::Comma, _) => continue,
                (Tok::RBracket, _) => break,
                (other, span) => {
                    return self.syntax(span, format!("expected `,` or `]`, found {}", other.describe()))
                }
            }
        }
        Ok(out)
    }

    fn wallis(&mut self, start: SourceSpan) -> Result<ParsedSpec, ParseError> {
        self.expect(Tok::LBrace)?;
        self.expect_field("period")?;
        let (period, _) = self.expect_u64()?;
        self.expect(Tok::Semi)?;
        self.expect_field("num")?;
        let num = self.int_list()?;
        self.expect(Tok::Semi)?;
        self.expect_field("den")?;
        let den = self.int_list()?;
        let end = self.expect(Tok::RBrace)?;
        let span = SourceSpan::join(start, end);
        WallisProduct::new(period, num, den)
            .map(ParsedSpec::Wallis)
            .map_err(|e| self.model_err(span, e, ParseErrorKind::UnbalancedResidues))
    }

    /// fraclist = "[" [ "(" FRAC "," FRAC ")" { "," ... } ] "]".
    fn frac_pair_list(&mut self) -> Result<Vec<(Rational, Rational)>, ParseError> {
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        if matches!(self.peek(), Some((Tok::RBracket, _))) {
            self.next()?;
            return Ok(out);
        }
        loop {
            self.expect(Tok::LParen)?;
            let (a, _) = self.expect_frac()?;
            self.expect(Tok::Comma)?;
            let (b, _) = self.expect_frac()?;
            self.expect(Tok::RParen)?;
            out.push((a, b));
            match self.next()? {
                (Tok::Comma, _) => continue,
                (Tok::RBracket, _) => break,
                (other, span) => {
                    return self.syntax(span, format!("expected `,` or `]`, found {}", other.describe()))
                }
            }
        }
        Ok(out)
    }

    /// pairlist = "[" "(" INT "," INT ")" { "," "(" INT "," INT ")" } "]".
    fn pair_list(&mut self) -> Result<Vec<(u64, u64)>, ParseError> {
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        loop {
            self.expect(Tok::LParen)?;
            let (a, _) = self.expect_u64()?;
            self.expect(Tok::Comma)?;
            let (b, _) = self.expect_u64()?;
            self.expect(Tok::RParen)?;
            out.push((a, b));
            match self.next()? {
                (Tok::Comma, _) => continue,
                (Tok::RBracket, _) => break,
                (other, span) => {
                    return self.syntax(span, format!("expected `,` or `]`, found {}", other.describe()))
                }
            }
        }
        Ok(out)
    }

    fn stream(&mut self) -> Result<(FactorStream, SourceSpan), ParseError> {
        let (tok, span) = self.next()?;
        match tok {
            Tok::Ident(ref s) if s == "pairs" => {
                self.expect(Tok::LParen)?;
                self.expect_keyword("period")?;
                self.expect(Tok::Eq)?;
                let (period, _) = self.expect_u64()?;
                self.expect(Tok::Comma)?;
                let pairs = self.pair_list()?;
                let mut offset = 0u64;
                let end = match self.next()? {
                    (Tok::Comma, _) => {
                        self.expect_field("offset")?;
                        let (v, _) = self.expect_u64()?;
                        offset = v;
                        self.expect(Tok::RParen)?
                    }
                    (Tok::RParen, e) => e,
                    (other, span) => {
                        return self
                            .syntax(span, format!("expected `,` or `)`, found {}", other.describe()))
                    }
                };
                Ok((
                    FactorStream::Pairs {
                        period,
                        pairs,
                        start_offset: offset,
                    },
                    SourceSpan::join(span, end),
                ))
            }
            Tok::Ident(ref s) if s == "const" => {
                self.expect(Tok::LParen)?;
                let (c, _) = self.expect_frac()?;
                let end = self.expect(Tok::RParen)?;
                Ok((FactorStream::Const(c), SourceSpan::join(span, end)))
            }
            other => self.syntax(
                span,
                format!("expected `pairs` or `const`, found {}", other.describe()),
            ),
        }
    }

    fn schedule(&mut self) -> Result<(BlockSchedule, SourceSpan), ParseError> {
        let (tok, span) = self.next()?;
        match tok {
            Tok::Ident(ref s) if s == "pippenger" => {
                self.expect(Tok::LParen)?;
                let (base, _) = self.expect_u64()?;
                let end = self.expect(Tok::RParen)?;
                Ok((BlockSchedule::Pippenger { base }, SourceSpan::join(span, end)))
            }
            Tok::Ident(ref s) if s == "geometric" => {
                self.expect(Tok::LParen)?;
                let (ratio, _) = self.expect_frac()?;
                let end = self.expect(Tok::RParen)?;
                Ok((BlockSchedule::Geometric { ratio }, SourceSpan::join(span, end)))
            }
            Tok::Ident(ref s) if s == "explicit" => {
                self.expect(Tok::LParen)?;
                let mut blocks = Vec::new();
                loop {
                    match self.next()? {
                        (Tok::RParen, end) => {
                            return Ok((BlockSchedule::Explicit(blocks), SourceSpan::join(span, end)))
                        }
                        (Tok::LParen, _) => {
                            let (size, _) = self.expect_u64()?;
                            self.expect(Tok::Comma)?;
                            let (exponent, _) = self.expect_frac()?;
                            self.expect(Tok::RParen)?;
                            blocks.push((size, exponent));
                        }
                        (other, span) => {
                            return self.syntax(
                                span,
                                format!("expected `(` or `)`, found {}", other.describe()),
                            )
                        }
                    }
                }
            }
            other => self.syntax(
                span,
                format!(
                    "expected `pippenger`, `geometric`, or `explicit`, found {}",
                    other.describe()
                ),
            ),
        }
    }

    fn blocks(&mut self, start: SourceSpan) -> Result<ParsedSpec, ParseError> {
        self.expect(Tok::LBrace)?;
        self.expect_field("prefix")?;
        let prefix = self.frac_pair_list()?;
        self.expect(Tok::Semi)?;
        self.expect_field("stream")?;
        let (stream, _) = self.stream()?;
        self.expect(Tok::Semi)?;
        self.expect_field("schedule")?;
        let (schedule, _) = self.schedule()?;
        let end = self.expect(Tok::RBrace)?;
        let span = SourceSpan::join(start, end);
        CatalanProduct::new(prefix, stream, schedule)
            .map(ParsedSpec::Catalan)
            .map_err(|e| self.model_err(span, e, ParseErrorKind::BadSchedule))
    }

    fn builtin_ref(&mut self, name: &str, span: SourceSpan) -> Result<(ProductRef, SourceSpan), ParseError> {
        self.expect(Tok::LParen)?;
        let (arg, arg_span) = self.expect_u64()?;
        let end = self.expect(Tok::RParen)?;
        let full = SourceSpan::join(span, end);
        let reference = match name {
            "paper" => {
                let id = u32::try_from(arg)
                    .map_err(|_| ParseError {
                        span: arg_span,
                        kind: ParseErrorKind::UnknownBuiltin,
                        message: format!("unknown builtin product id {arg}"),
                    })?;
                ProductRef::Paper(id)
            }
            "wallis_general" => {
                if arg < 2 {
                    return self.syntax(arg_span, "the general constructors need a base of at least 2".into());
                }
                ProductRef::WallisGeneral(arg)
            }
            "pippenger_general" => {
                if arg < 2 {
                    return self.syntax(arg_span, "the general constructors need a base of at least 2".into());
                }
                ProductRef::PippengerGeneral(arg)
            }
            _ => unreachable!("caller checked the name"),
        };
        Ok((reference, full))
    }

    fn claim_side(&mut self) -> Result<ClaimSide, ParseError> {
        let mut constant = Rational::one();
        let mut terms = Vec::new();
        loop {
            let (tok, span) = self.next()?;
            match tok {
                Tok::Ident(ref s) if s == "const" => {
                    self.expect(Tok::LParen)?;
                    let (c, cspan) = self.expect_frac()?;
                    self.expect(Tok::RParen)?;
                    if !crate::numerics::is_positive(&c) {
                        return self.syntax(cspan, "constant multiplier must be positive".into());
                    }
                    constant *= c;
                }
                Tok::Ident(ref s)
                    if s == "paper" || s == "wallis_general" || s == "pippenger_general" =>
                {
                    let name = s.clone();
                    let (reference, rspan) = self.builtin_ref(&name, span)?;
                    let mut exponent = Rational::one();
                    if matches!(self.peek(), Some((Tok::Caret, _))) {
                        self.next()?;
                        let (e, espan) = self.expect_frac()?;
                        if e.is_zero() {
                            return self.syntax(espan, "exponent must be nonzero".into());
                        }
                        exponent = e;
                    }
                    let term = ClaimTerm::new(reference, exponent)
                        .map_err(|e| self.model_err(rspan, e, ParseErrorKind::UnknownBuiltin))?;
                    terms.push(term);
                }
                other => {
                    return self.syntax(
                        span,
                        format!("expected a product reference or `const`, found {}", other.describe()),
                    )
                }
            }
            if matches!(self.peek(), Some((Tok::Star, _))) {
                self.next()?;
                continue;
            }
            break;
        }
        Ok(ClaimSide::new(constant, terms))
    }

    fn claim(&mut self, _start: SourceSpan) -> Result<ParsedSpec, ParseError> {
        self.expect(Tok::LBrace)?;
        self.expect_field("lhs")?;
        let lhs = self.claim_side()?;
        self.expect(Tok::Semi)?;
        self.expect_field("rhs")?;
        let rhs = self.claim_side()?;
        self.expect(Tok::RBrace)?;
        Ok(ParsedSpec::Claim(IdentityClaim { lhs, rhs }))
    }

    fn spec(&mut self) -> Result<ParsedSpec, ParseError> {
        let (tok, span) = self.next()?;
        let parsed = match tok {
            Tok::Ident(ref s) if s == "wallis" => self.wallis(span)?,
            Tok::Ident(ref s) if s == "blocks" => self.blocks(span)?,
            Tok::Ident(ref s) if s == "claim" => self.claim(span)?,
            Tok::Ident(ref s)
                if s == "paper" || s == "wallis_general" || s == "pippenger_general" =>
            {
                let name = s.clone();
                let (reference, rspan) = self.builtin_ref(&name, span)?;
                let product = match reference {
                    ProductRef::Paper(id) => builtin(id)
                        .map_err(|e| self.model_err(rspan, e, ParseErrorKind::UnknownBuiltin))?,
                    ProductRef::WallisGeneral(k) => Product::Wallis(wallis_general(k)),
                    ProductRef::PippengerGeneral(k) => Product::Catalan(pippenger_general(k)),
                };
                match product {
                    Product::Wallis(w) => ParsedSpec::Wallis(w),
                    Product::Catalan(c) => ParsedSpec::Catalan(c),
                }
            }
            other => {
                return self.syntax(
                    span,
                    format!(
                        "expected `wallis`, `blocks`, `claim`, or a builtin reference, found {}",
                        other.describe()
                    ),
                )
            }
        };
        if let Some((tok, span)) = self.peek().cloned() {
            return self.syntax(span, format!("unexpected {} after the specification", tok.describe()));
        }
        Ok(parsed)
    }
}

/// Parse a product or claim specification.
pub fn parse(text: &str) -> Result<ParsedSpec, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        text,
    };
    parser.spec()
}

fn frac_str(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn render_wallis(w: &WallisProduct) -> String {
    let list = |v: &[u64]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    format!(
        "wallis{{period={}; num=[{}]; den=[{}]}}",
        w.period(),
        list(w.num_residues()),
        list(w.den_residues())
    )
}

fn render_catalan(c: &CatalanProduct) -> String {
    let prefix = c
        .prefix()
        .iter()
        .map(|(f, e)| format!("({}, {})", frac_str(f), frac_str(e)))
        .collect::<Vec<_>>()
        .join(", ");
    let stream = match c.stream() {
        FactorStream::Const(v) => format!("const({})", frac_str(v)),
        FactorStream::Pairs {
            period,
            pairs,
            start_offset,
        } => {
            let body = pairs
                .iter()
                .map(|(u, v)| format!("({u},{v})"))
                .collect::<Vec<_>>()
                .join(",");
            if *start_offset == 0 {
                format!("pairs(period={period}, [{body}])")
            } else {
                format!("pairs(period={period}, [{body}], offset={start_offset})")
            }
        }
    };
    let schedule = match c.schedule() {
        BlockSchedule::Pippenger { base } => format!("pippenger({base})"),
        BlockSchedule::Geometric { ratio } => format!("geometric({})", frac_str(ratio)),
        BlockSchedule::Explicit(blocks) => {
            let body = blocks
                .iter()
                .map(|(s, e)| format!("({},{})", s, frac_str(e)))
                .collect::<Vec<_>>()
                .join("");
            format!("explicit({body})")
        }
    };
    format!("blocks{{prefix=[{prefix}]; stream={stream}; schedule={schedule}}}")
}

fn render_side(side: &ClaimSide) -> String {
    let mut parts = Vec::new();
    if !side.constant.is_one() {
        parts.push(format!("const({})", frac_str(&side.constant)));
    }
    for term in &side.terms {
        let mut s = term.reference.render();
        if !term.exponent.is_one() {
            s.push('^');
            s.push_str(&frac_str(&term.exponent));
        }
        parts.push(s);
    }
    if parts.is_empty() {
        parts.push("const(1)".into());
    }
    parts.join("*")
}

/// Canonical textual form; `parse(render(x))` is structurally `x`.
pub fn render(spec: &ParsedSpec) -> String {
    match spec {
        ParsedSpec::Wallis(w) => render_wallis(w),
        ParsedSpec::Catalan(c) => render_catalan(c),
        ParsedSpec::Claim(claim) => format!(
            "claim{{lhs={}; rhs={}}}",
            render_side(&claim.lhs),
            render_side(&claim.rhs)
        ),
    }
}

/// Render a resolved product.
pub fn render_product(product: &Product) -> String {
    match product {
        Product::Wallis(w) => render_wallis(w),
        Product::Catalan(c) => render_catalan(c),
    }
}
