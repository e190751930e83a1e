//! Parser for the parenthesized prefix syntax.
//!
//! ```text
//! form := atom | "top" | "bot"
//!       | "(not" form ")" | "(or" form form ")" | "(and" form form ")"
//!       | "(imp" form form ")" | "(iff" form form ")"
//!       | "(dia" nat form ")" | "(box" nat form ")" | "(dia!" nat form ")"
//! atom := [a-z][a-z0-9_]*
//! nat  := [0-9]+
//! ```

use super::{Formula, Grade};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ParseOptions {
    /// Largest grade accepted anywhere, including the `n + 1` produced by `dia!`.
    pub max_grade: Grade,
    /// Accept `?name` metavariables (schema bodies).
    pub metavariables: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self { max_grade: Grade::MAX, metavariables: false }
    }
}

pub fn parse(text: &str) -> Result<Formula> {
    parse_with(text, &ParseOptions::default())
}

pub fn parse_with(text: &str, opts: &ParseOptions) -> Result<Formula> {
    let mut p = Parser { tokens: tokenize(text), pos: 0, end: text.len(), opts };
    let f = p.form()?;
    if let Some(t) = p.tokens.get(p.pos) {
        return Err(syntax(t.at, "trailing input after formula"));
    }
    Ok(f)
}

/// `[a-z][a-z0-9_]*`, excluding the constants `top` and `bot`.
pub fn is_atom_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
        && s != "top"
        && s != "bot"
}

#[derive(Debug, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Word(&'a str),
}

#[derive(Debug)]
struct Token<'a> {
    tok: Tok<'a>,
    at: usize,
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token { tok: Tok::Word(&text[s..i]), at: s });
            }
            match c {
                '(' => out.push(Token { tok: Tok::Open, at: i }),
                ')' => out.push(Token { tok: Tok::Close, at: i }),
                _ => {}
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token { tok: Tok::Word(&text[s..]), at: s });
    }
    out
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

struct Parser<'a, 'o> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    end: usize,
    opts: &'o ParseOptions,
}

impl<'a> Parser<'a, '_> {
    fn next(&mut self) -> Result<&Token<'a>> {
        let t = self.tokens.get(self.pos).ok_or_else(|| syntax(self.end, "unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn form(&mut self) -> Result<Formula> {
        let t = self.next()?;
        let at = t.at;
        match t.tok {
            Tok::Close => Err(syntax(at, "unexpected `)`")),
            Tok::Word("top") => Ok(Formula::Top),
            Tok::Word("bot") => Ok(Formula::Bot),
            Tok::Word(w) => self.atom(w, at),
            Tok::Open => {
                let head = match self.next()? {
                    Token { tok: Tok::Word(w), .. } => *w,
                    t => return Err(syntax(t.at, "expected an operator after `(`")),
                };
                let f = match head {
                    "not" => Formula::not(self.form()?),
                    "or" => Formula::or(self.form()?, self.form()?),
                    "and" => Formula::and(self.form()?, self.form()?),
                    "imp" => Formula::imp(self.form()?, self.form()?),
                    "iff" => Formula::iff(self.form()?, self.form()?),
                    "dia" => {
                        let n = self.grade(0)?;
                        Formula::dia(n, self.form()?)
                    }
                    "box" => {
                        let n = self.grade(0)?;
                        Formula::boxed(n, self.form()?)
                    }
                    "dia!" => {
                        let n = self.grade(1)?;
                        Formula::dia_exact(n, self.form()?)
                    }
                    other => return Err(syntax(at + 1, format!("unknown operator `{other}`"))),
                };
                match self.next()? {
                    Token { tok: Tok::Close, .. } => Ok(f),
                    t => Err(syntax(t.at, "expected `)`")),
                }
            }
        }
    }

    fn atom(&self, w: &str, at: usize) -> Result<Formula> {
        let name = match w.strip_prefix('?') {
            Some(rest) if self.opts.metavariables => rest,
            _ => w,
        };
        if is_atom_name(name) {
            Ok(Formula::atom(w))
        } else {
            Err(syntax(at, format!("invalid proposition letter `{w}`")))
        }
    }

    /// Reads a grade `n` such that `n + headroom` stays within the maximum.
    fn grade(&mut self, headroom: Grade) -> Result<Grade> {
        let t = self.next()?;
        let (digits, at) = match t.tok {
            Tok::Word(w) if w.bytes().all(|b| b.is_ascii_digit()) => (w, t.at),
            _ => return Err(syntax(t.at, "expected a grade")),
        };
        let overflow = || Error::GradeOverflow { pos: at, grade: digits.to_string(), max: self.opts.max_grade };
        let n: u64 = digits.parse().map_err(|_| overflow())?;
        if n + u64::from(headroom) > u64::from(self.opts.max_grade) {
            return Err(overflow());
        }
        Ok(n as Grade)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    #[test]
    fn spec_examples() {
        assert_eq!(parse("(dia 3 p)").unwrap(), Formula::dia(3, p()));
        assert_eq!(
            parse("(box 1 (or p q))").unwrap(),
            Formula::not(Formula::dia(1, Formula::not(Formula::or(p(), Formula::atom("q")))))
        );
        assert_eq!(
            parse("(dia! 2 p)").unwrap(),
            Formula::and(Formula::dia(2, p()), Formula::not(Formula::dia(3, p())))
        );
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(parse("  (or\n\tp   (not q)) ").unwrap(), parse("(or p (not q))").unwrap());
        assert_eq!(parse("(not(dia 0 top))").unwrap(), Formula::not(Formula::dia(0, Formula::Top)));
        assert_eq!(parse("(dia 007 p)").unwrap(), Formula::dia(7, p()));
    }

    #[test]
    fn errors_carry_positions() {
        match parse("(or p") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        match parse("(xor p q)") {
            Err(Error::Syntax { pos, msg }) => {
                assert_eq!(pos, 1);
                assert!(msg.contains("xor"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("(dia p q)"), Err(Error::Syntax { pos: 5, .. })));
        assert!(matches!(parse("P"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("p q"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse(")"), Err(Error::Syntax { .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse("?x"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn grade_overflow() {
        assert!(parse("(dia 4294967295 p)").is_ok());
        assert!(matches!(parse("(dia 4294967296 p)"), Err(Error::GradeOverflow { pos: 5, .. })));
        assert!(matches!(parse("(dia 99999999999999999999999 p)"), Err(Error::GradeOverflow { .. })));
        assert!(matches!(parse("(dia! 4294967295 p)"), Err(Error::GradeOverflow { .. })));
        let opts = ParseOptions { max_grade: 3, ..Default::default() };
        assert!(parse_with("(dia 3 p)", &opts).is_ok());
        assert!(matches!(parse_with("(box 4 p)", &opts), Err(Error::GradeOverflow { .. })));
        assert!(matches!(parse_with("(dia! 3 p)", &opts), Err(Error::GradeOverflow { .. })));
    }

    #[test]
    fn metavariables_only_when_enabled() {
        let opts = ParseOptions { metavariables: true, ..Default::default() };
        assert_eq!(parse_with("(dia 1 ?phi)", &opts).unwrap(), Formula::dia(1, Formula::atom("?phi")));
        assert!(parse_with("(dia 1 ?Phi)", &opts).is_err());
    }

    #[test]
    fn atom_names() {
        assert!(is_atom_name("p"));
        assert!(is_atom_name("p_1x"));
        assert!(!is_atom_name("1p"));
        assert!(!is_atom_name("_p"));
        assert!(!is_atom_name(""));
        assert!(!is_atom_name("top"));
    }
}
