//! Tokenizer shared by the model, presetting, rule and extension languages.

use std::fmt;

use thiserror::Error;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

impl SyntaxError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        Self {
            pos,
            message: message.into(),
        }
    }
}

/// A decoded string literal. Each character remembers whether it was written
/// as an escape, which the hint-template parser needs to tell `\{` from `{`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LitStr {
    pub chars: Vec<(char, bool)>,
}

impl LitStr {
    pub fn text(&self) -> String {
        self.chars.iter().map(|(c, _)| *c).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    Str(LitStr),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(n) => write!(f, "integer `{n}`"),
            Tok::Str(s) => write!(f, "string \"{}\"", s.text()),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

// Longest symbols first.
const SYMBOLS: &[&str] = &[
    "<<", ">>", "..", "->", "=>", "||", "&&", "{", "}", "(", ")", "[", "]", ":", ".", ",", ";",
    "=", "!", "*",
];

pub fn tokenize(src: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c.is_whitespace() || c == '\u{feff}' {
            bump!();
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                bump!();
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                bump!();
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits
                .parse::<u64>()
                .map_err(|_| SyntaxError::new(pos, format!("integer `{digits}` out of range")))?;
            out.push((Tok::Int(n), pos));
            continue;
        }
        if c == '"' {
            bump!();
            let mut lit = LitStr::default();
            loop {
                let Some(&c) = chars.get(i) else {
                    return Err(SyntaxError::new(pos, "unterminated string literal"));
                };
                match c {
                    '"' => {
                        bump!();
                        break;
                    }
                    '\\' => {
                        let esc_pos = Pos { line, column: col };
                        bump!();
                        let decoded = match chars.get(i) {
                            Some('"') => '"',
                            Some('\\') => '\\',
                            Some('n') => '\n',
                            Some('{') => '{',
                            Some('}') => '}',
                            Some(other) => {
                                return Err(SyntaxError::new(
                                    esc_pos,
                                    format!("unknown escape `\\{other}`"),
                                ))
                            }
                            None => {
                                return Err(SyntaxError::new(pos, "unterminated string literal"))
                            }
                        };
                        bump!();
                        lit.chars.push((decoded, true));
                    }
                    '\r' | '\n' => {
                        // A raw line break inside a literal is a wrapped line:
                        // the break and its surrounding blanks fold to one space.
                        while matches!(lit.chars.last(), Some((' ' | '\t', false))) {
                            lit.chars.pop();
                        }
                        while matches!(chars.get(i), Some(' ' | '\t' | '\r' | '\n')) {
                            bump!();
                        }
                        lit.chars.push((' ', false));
                    }
                    _ => {
                        bump!();
                        lit.chars.push((c, false));
                    }
                }
            }
            out.push((Tok::Str(lit), pos));
            continue;
        }
        let rest = &chars[i..];
        let sym = SYMBOLS.iter().find(|s| {
            let s: Vec<char> = s.chars().collect();
            rest.starts_with(&s)
        });
        match sym {
            Some(s) => {
                for _ in 0..s.chars().count() {
                    bump!();
                }
                out.push((Tok::Sym(s), pos));
            }
            None => return Err(SyntaxError::new(pos, format!("unexpected character `{c}`"))),
        }
    }
    out.push((Tok::Eof, Pos { line, column: col }));
    Ok(out)
}

/// Cursor over a token vector with the usual expect/peek helpers.
pub struct Cursor {
    toks: Vec<(Tok, Pos)>,
    idx: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self, SyntaxError> {
        Ok(Self {
            toks: tokenize(src)?,
            idx: 0,
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.idx].0
    }

    pub fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.idx + ahead).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    pub fn pos(&self) -> Pos {
        self.toks[self.idx].1
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub fn advance(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.idx].clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    pub fn error(&self, expected: &str) -> SyntaxError {
        SyntaxError::new(
            self.pos(),
            format!("expected {expected}, found {}", self.peek()),
        )
    }

    pub fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == kw)
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.advance();
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<Pos, SyntaxError> {
        if self.is_sym(s) {
            Ok(self.advance().1)
        } else {
            Err(self.error(&format!("`{s}`")))
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<Pos, SyntaxError> {
        if self.is_keyword(kw) {
            Ok(self.advance().1)
        } else {
            Err(self.error(&format!("`{kw}`")))
        }
    }

    pub fn expect_ident(&mut self, what: &str) -> Result<(String, Pos), SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.advance().1;
                Ok((s, pos))
            }
            _ => Err(self.error(what)),
        }
    }

    pub fn expect_int(&mut self) -> Result<u64, SyntaxError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.advance();
                Ok(n)
            }
            _ => Err(self.error("integer")),
        }
    }

    pub fn expect_str(&mut self) -> Result<(LitStr, Pos), SyntaxError> {
        match self.peek().clone() {
            Tok::Str(s) => {
                let pos = self.advance().1;
                Ok((s, pos))
            }
            _ => Err(self.error("string literal")),
        }
    }
}

/// Escapes text for a double-quoted literal in any of the DSLs.
pub fn quote(text: &str, escape_braces: bool) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '{' if escape_braces => out.push_str("\\{"),
            '}' if escape_braces => out.push_str("\\}"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|(t, _)| t).collect()
    }

    #[test]
    fn symbols_prefer_longest_match() {
        assert_eq!(
            kinds("[0..*] => = <<x>>"),
            vec![
                Tok::Sym("["),
                Tok::Int(0),
                Tok::Sym(".."),
                Tok::Sym("*"),
                Tok::Sym("]"),
                Tok::Sym("=>"),
                Tok::Sym("="),
                Tok::Sym("<<"),
                Tok::Ident("x".into()),
                Tok::Sym(">>"),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn wrapped_string_folds_to_single_space() {
        let toks = kinds("\"Rename entry in\n    mapping file.\"");
        match &toks[0] {
            Tok::Str(s) => assert_eq!(s.text(), "Rename entry in mapping file."),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn escaped_brace_is_marked() {
        let toks = kinds(r#""a\{b""#);
        match &toks[0] {
            Tok::Str(s) => assert_eq!(s.chars, vec![('a', false), ('{', true), ('b', false)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn comments_and_positions() {
        let toks = tokenize("// hi\n  foo").unwrap();
        assert_eq!(toks[0].1, Pos { line: 2, column: 3 });
    }

    #[test]
    fn bad_input_reports_position() {
        let err = tokenize("a\n  $").unwrap_err();
        assert_eq!(err.pos, Pos { line: 2, column: 3 });
        assert!(tokenize("\"abc").is_err());
        assert!(tokenize(r#""\q""#).is_err());
    }
}
