use std::collections::BTreeMap;

use thiserror::Error;

use super::ast::{name, ABox, Assertion, Formula, Name, Program};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    Arity,
    NominalAsProgram,
    Namespace,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nominal(String),
    True,
    False,
    Colon,
    Semi,
    Comma,
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBracket,
    RBracket,
    Tilde,
    Amp,
    Bar,
    Arrow,
    Plus,
    Star,
    Question,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Nominal(s) => format!("nominal `'{s}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Star => "`*`".into(),
            Tok::Question => "`?`".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, message: String| ParseError {
        kind: ParseErrorKind::Lexical,
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let ident_at = |mut j: usize| {
            let start = j;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            (chars[start..j].iter().collect::<String>(), j)
        };
        let tok = if c.is_ascii_alphabetic() {
            let (word, j) = ident_at(i);
            col += j - i;
            i = j;
            match word.as_str() {
                "true" => Tok::True,
                "false" => Tok::False,
                _ => Tok::Ident(word),
            }
        } else if c == '\'' {
            if i + 1 >= chars.len() || !chars[i + 1].is_ascii_alphabetic() {
                return Err(err(tl, tc, "expected a name after `'`".into()));
            }
            let (word, j) = ident_at(i + 1);
            col += j - i;
            i = j;
            Tok::Nominal(word)
        } else if c == '-' {
            if chars.get(i + 1) != Some(&'>') {
                return Err(err(tl, tc, "expected `->`".into()));
            }
            i += 2;
            col += 2;
            Tok::Arrow
        } else {
            let t = match c {
                ':' => Tok::Colon,
                ';' => Tok::Semi,
                ',' => Tok::Comma,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '<' => Tok::LAngle,
                '>' => Tok::RAngle,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '~' => Tok::Tilde,
                '&' => Tok::Amp,
                '|' => Tok::Bar,
                '+' => Tok::Plus,
                '*' => Tok::Star,
                '?' => Tok::Question,
                _ => return Err(err(tl, tc, format!("unexpected character `{c}`"))),
            };
            i += 1;
            col += 1;
            t
        };
        out.push(Spanned { tok, line: tl, column: tc });
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Prop,
    Program,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    roles: BTreeMap<String, Role>,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0, roles: BTreeMap::new() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn error(&self, kind: ParseErrorKind, message: String) -> ParseError {
        let (line, column) = match self.toks.get(self.pos) {
            Some(s) => (s.line, s.column),
            None => self.toks.last().map(|s| (s.line, s.column)).unwrap_or((1, 1)),
        };
        ParseError { kind, line, column, message }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let message = match self.toks.get(self.pos) {
            Some(s) => format!("expected {wanted}, found {}", s.tok.describe()),
            None => match self.toks.last() {
                Some(s) => format!("expected {wanted} after {}, found end of input", s.tok.describe()),
                None => format!("expected {wanted}, found end of input"),
            },
        };
        self.error(ParseErrorKind::Syntax, message)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.unexpected(&t.describe()))
        }
    }

    fn claim(&mut self, ident: &str, role: Role) -> Result<(), ParseError> {
        match self.roles.get(ident) {
            Some(r) if *r != role => {
                let (was, now) = match role {
                    Role::Prop => ("an atomic program", "a proposition"),
                    Role::Program => ("a proposition", "an atomic program"),
                };
                Err(self.error(
                    ParseErrorKind::Namespace,
                    format!("`{ident}` is used as {was} elsewhere and as {now} here"),
                ))
            }
            _ => {
                self.roles.insert(ident.to_string(), role);
                Ok(())
            }
        }
    }

    fn nominal(&mut self) -> Result<Name, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Nominal(n)) => {
                self.pos += 1;
                Ok(name(&n))
            }
            _ => Err(self.unexpected("a nominal")),
        }
    }

    fn abox(&mut self) -> Result<ABox, ParseError> {
        let mut out = ABox::new();
        if self.at_end() {
            return Ok(out);
        }
        loop {
            out.insert(self.stmt()?);
            if !self.eat(&Tok::Semi) || self.at_end() {
                break;
            }
        }
        if !self.at_end() {
            return Err(self.unexpected("`;`"));
        }
        Ok(out)
    }

    fn stmt(&mut self) -> Result<Assertion, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Nominal(a)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::LParen) {
                    self.pos -= 1;
                    return Err(self.error(
                        ParseErrorKind::NominalAsProgram,
                        format!("nominal `'{a}` cannot be used as an atomic program"),
                    ));
                }
                self.expect(Tok::Colon)?;
                let f = self.formula()?;
                Ok(Assertion::Holds { subject: Some(name(&a)), formula: f })
            }
            Some(Tok::Ident(s)) => {
                self.claim(&s, Role::Program)?;
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let mut args = Vec::new();
                if self.peek() != Some(&Tok::RParen) {
                    loop {
                        args.push(self.nominal()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.unexpected("`,` or `)`"));
                }
                if args.len() != 2 {
                    return Err(self.error(
                        ParseErrorKind::Arity,
                        format!("program assertion `{s}(..)` takes 2 nominals, found {}", args.len()),
                    ));
                }
                self.pos += 1;
                Ok(Assertion::Edge { program: name(&s), from: args[0].clone(), to: args[1].clone() })
            }
            _ => Err(self.unexpected("an assertion")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disj()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conj()?;
        while self.eat(&Tok::Bar) {
            f = Formula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while self.eat(&Tok::Amp) {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat(&Tok::LAngle) {
            let p = self.program()?;
            self.expect(Tok::RAngle)?;
            return Ok(Formula::diamond(p, self.unary()?));
        }
        if self.eat(&Tok::LBracket) {
            let p = self.program()?;
            self.expect(Tok::RBracket)?;
            return Ok(Formula::boxed(p, self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::True) => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(Formula::Bot)
            }
            Some(Tok::Nominal(a)) => {
                self.pos += 1;
                Ok(Formula::Nominal(name(&a)))
            }
            Some(Tok::Ident(p)) => {
                self.claim(&p, Role::Prop)?;
                self.pos += 1;
                Ok(Formula::Prop(name(&p)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut p = self.seq()?;
        while self.eat(&Tok::Plus) {
            p = Program::choice(p, self.seq()?);
        }
        Ok(p)
    }

    fn seq(&mut self) -> Result<Program, ParseError> {
        let mut p = self.star()?;
        while self.eat(&Tok::Semi) {
            p = Program::seq(p, self.star()?);
        }
        Ok(p)
    }

    fn star(&mut self) -> Result<Program, ParseError> {
        let mut p = self.prim()?;
        while self.eat(&Tok::Star) {
            p = Program::star(p);
        }
        Ok(p)
    }

    fn prim(&mut self) -> Result<Program, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.claim(&s, Role::Program)?;
                self.pos += 1;
                Ok(Program::Atomic(name(&s)))
            }
            Some(Tok::Nominal(a)) => Err(self.error(
                ParseErrorKind::NominalAsProgram,
                format!("nominal `'{a}` cannot be used as an atomic program"),
            )),
            Some(Tok::LParen) => {
                self.pos += 1;
                let p = self.program()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            Some(Tok::Question) => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(Program::test(f))
            }
            _ => Err(self.unexpected("a program")),
        }
    }
}

/// Parses an ABox in the `'a:φ; σ('a,'b)` syntax. Empty input gives an empty
/// ABox.
pub fn parse_abox(text: &str) -> Result<ABox, ParseError> {
    Parser::new(text)?.abox()
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    if !p.at_end() {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(text)?;
    let prog = p.program()?;
    if !p.at_end() {
        return Err(p.unexpected("end of input"));
    }
    Ok(prog)
}
