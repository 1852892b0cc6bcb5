//! Tokenizer and word grammar shared by the presentation, witness and
//! epimorphism front ends.
//!
//! ```text
//! word   := factor ('*' factor)*
//! factor := atom ('^' '-'? INT)?
//! atom   := NAME | '1' | '[' word ',' word ']' | '(' word ')'
//! ```

use crate::error::{ParseError, ParseErrorKind};
use crate::word::{self, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Name(String),
    Int(u64),
    Star,
    Caret,
    Minus,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Semicolon,
    Colon,
    Equals,
    Newline,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn tokenize(text: &str, first_line: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (offset, line) in text.lines().enumerate() {
        let line_no = first_line + offset;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let simple = match c {
                '*' => Some(Tok::Star),
                '^' => Some(Tok::Caret),
                '-' => Some(Tok::Minus),
                '[' => Some(Tok::LBrack),
                ']' => Some(Tok::RBrack),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                ',' => Some(Tok::Comma),
                ';' => Some(Tok::Semicolon),
                ':' => Some(Tok::Colon),
                '=' => Some(Tok::Equals),
                _ => None,
            };
            if let Some(tok) = simple {
                out.push(Token { tok, line: line_no, column });
                i += 1;
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                out.push(Token { tok: Tok::Name(name), line: line_no, column });
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let value = digits
                    .parse::<u64>()
                    .map_err(|_| ParseError::syntax(line_no, column, "integer out of range"))?;
                out.push(Token { tok: Tok::Int(value), line: line_no, column });
            } else {
                return Err(ParseError::syntax(line_no, column, format!("unexpected character `{c}`")));
            }
        }
        out.push(Token { tok: Tok::Newline, line: line_no, column: chars.len() + 1 });
    }
    Ok(out)
}

pub(crate) struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    /// Position reported for errors at end of input.
    end: (usize, usize),
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token]) -> Self {
        let end = toks.last().map_or((1, 1), |t| (t.line, t.column));
        Cursor { toks, pos: 0, end }
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    pub fn peek_at(&self, k: usize) -> Option<&'a Token> {
        self.toks.get(self.pos + k)
    }

    pub fn bump(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn skip_newlines(&mut self) {
        while matches!(self.peek(), Some(Token { tok: Tok::Newline, .. })) {
            self.pos += 1;
        }
    }

    pub fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.end, |t| (t.line, t.column))
    }

    pub fn error(&self, msg: impl Into<String>) -> ParseError {
        let (l, c) = self.here();
        ParseError::syntax(l, c, msg)
    }

    pub fn expect(&mut self, want: &Tok, what: &str) -> Result<&'a Token, ParseError> {
        match self.peek() {
            Some(t) if &t.tok == want => {
                self.pos += 1;
                Ok(t)
            }
            Some(t) => Err(ParseError::syntax(t.line, t.column, format!("expected {what}, found {}", describe(&t.tok)))),
            None => Err(self.error(format!("expected {what}, found end of input"))),
        }
    }

    /// True when the next tokens are `NAME ':'`, which opens a new section.
    pub fn at_section_header(&self) -> bool {
        matches!(
            (self.peek(), self.peek_at(1)),
            (Some(Token { tok: Tok::Name(_), .. }), Some(Token { tok: Tok::Colon, .. }))
        )
    }
}

pub(crate) fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Name(n) => format!("`{n}`"),
        Tok::Int(v) => format!("`{v}`"),
        Tok::Star => "`*`".into(),
        Tok::Caret => "`^`".into(),
        Tok::Minus => "`-`".into(),
        Tok::LBrack => "`[`".into(),
        Tok::RBrack => "`]`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Semicolon => "`;`".into(),
        Tok::Colon => "`:`".into(),
        Tok::Equals => "`=`".into(),
        Tok::Newline => "end of line".into(),
    }
}

/// Parses words against a fixed generator list. When `multiline` is set,
/// line breaks inside a word are treated as whitespace.
pub(crate) struct WordParser<'n> {
    pub names: &'n [String],
    pub multiline: bool,
}

impl WordParser<'_> {
    fn skip(&self, cur: &mut Cursor<'_>) {
        if self.multiline {
            cur.skip_newlines();
        }
    }

    pub fn word(&self, cur: &mut Cursor<'_>) -> Result<Word, ParseError> {
        self.skip(cur);
        let mut acc = self.factor(cur)?;
        loop {
            self.skip(cur);
            if matches!(cur.peek(), Some(Token { tok: Tok::Star, .. })) {
                cur.bump();
                self.skip(cur);
                let rhs = self.factor(cur)?;
                acc = acc.mul(&rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&self, cur: &mut Cursor<'_>) -> Result<Word, ParseError> {
        let base = self.atom(cur)?;
        if matches!(cur.peek(), Some(Token { tok: Tok::Caret, .. })) {
            cur.bump();
            let negative = if matches!(cur.peek(), Some(Token { tok: Tok::Minus, .. })) {
                cur.bump();
                true
            } else {
                false
            };
            match cur.bump() {
                Some(Token { tok: Tok::Int(k), line, column }) => {
                    let k = i64::try_from(*k)
                        .map_err(|_| ParseError::syntax(*line, *column, "exponent out of range"))?;
                    Ok(base.pow(if negative { -k } else { k }))
                }
                Some(t) => Err(ParseError::syntax(t.line, t.column, format!("expected exponent, found {}", describe(&t.tok)))),
                None => Err(cur.error("expected exponent, found end of input")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&self, cur: &mut Cursor<'_>) -> Result<Word, ParseError> {
        let Some(t) = cur.peek() else {
            return Err(cur.error("expected a generator, `[`, `(` or `1`, found end of input"));
        };
        match &t.tok {
            Tok::Name(name) => {
                cur.bump();
                match self.names.iter().position(|n| n == name) {
                    Some(g) => Ok(Word::generator(g)),
                    None => Err(ParseError {
                        line: t.line,
                        column: t.column,
                        kind: ParseErrorKind::UnknownGenerator(name.clone()),
                    }),
                }
            }
            Tok::Int(1) => {
                cur.bump();
                Ok(Word::identity())
            }
            Tok::LBrack => {
                cur.bump();
                let a = self.word(cur)?;
                self.skip(cur);
                cur.expect(&Tok::Comma, "`,` inside commutator")?;
                let b = self.word(cur)?;
                self.skip(cur);
                cur.expect(&Tok::RBrack, "`]`")?;
                Ok(word::commutator(&a, &b))
            }
            Tok::LParen => {
                cur.bump();
                let w = self.word(cur)?;
                self.skip(cur);
                cur.expect(&Tok::RParen, "`)`")?;
                Ok(w)
            }
            other => Err(ParseError::syntax(
                t.line,
                t.column,
                format!("expected a generator, `[`, `(` or `1`, found {}", describe(other)),
            )),
        }
    }
}

/// Parse one standalone word such as `[a,b]*c^-2`.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word, ParseError> {
    let toks = tokenize(text, 1)?;
    let mut cur = Cursor::new(&toks);
    let parser = WordParser { names, multiline: true };
    let w = parser.word(&mut cur)?;
    cur.skip_newlines();
    if let Some(t) = cur.peek() {
        return Err(ParseError::syntax(t.line, t.column, format!("unexpected {}", describe(&t.tok))));
    }
    Ok(w)
}
