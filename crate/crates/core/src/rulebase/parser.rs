use crate::fuzzy::MembershipFunction;

use super::{Condition, Diagnostic, DiagnosticKind, ParseError, Position, Rule, RuleBase, TermDecl, VariableDecl};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Colon,
    DotDot,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Eq,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("number {n}"),
            Tok::Colon => "`:`".into(),
            Tok::DotDot => "`..`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn syntax(pos: Position, expected: &[&str], found: String) -> Diagnostic {
    let expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
    Diagnostic {
        message: format!("expected {}, found {found}", expected.join(" or ")),
        kind: DiagnosticKind::Syntax { expected, found },
        pos: Some(pos),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Position)>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Position { line, col };
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
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() || ((c == '-' || c == '+') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            // a '.' belongs to the number only when a digit follows, so `0..1` lexes as 0 .. 1
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '-' || chars[j] == '+') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i].iter().collect();
            Tok::Num(text.parse().map_err(|_| syntax(pos, &["number"], format!("`{text}`")))?)
        } else {
            i += 1;
            match c {
                ':' => Tok::Colon,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '=' => Tok::Eq,
                '.' if chars.get(i) == Some(&'.') => {
                    i += 1;
                    Tok::DotDot
                }
                other => {
                    return Err(Diagnostic {
                        kind: DiagnosticKind::Syntax {
                            expected: vec![],
                            found: format!("`{other}`"),
                        },
                        pos: Some(pos),
                        message: format!("unexpected character `{other}`"),
                    })
                }
            }
        };
        col += i - start;
        toks.push((tok, pos));
    }
    toks.push((Tok::Eof, Position { line, col }));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, Position)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Position {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Position) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, Diagnostic> {
        Err(syntax(self.pos(), expected, self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Position, Diagnostic> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            self.fail(&[what])
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Position, Diagnostic> {
        if self.is_keyword(kw) {
            Ok(self.bump().1)
        } else {
            self.fail(&[kw])
        }
    }

    fn ident(&mut self) -> Result<(String, Position), Diagnostic> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let p = self.bump().1;
                Ok((s, p))
            }
            _ => self.fail(&["identifier"]),
        }
    }

    fn number(&mut self) -> Result<f64, Diagnostic> {
        match *self.peek() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.fail(&["number"]),
        }
    }

    fn term(&mut self) -> Result<RawTerm, Diagnostic> {
        let (name, pos) = self.ident()?;
        self.expect(Tok::Eq, "`=`")?;
        self.keyword("tri")?;
        self.expect(Tok::LParen, "`(`")?;
        let a = self.number()?;
        self.expect(Tok::Comma, "`,`")?;
        let b = self.number()?;
        self.expect(Tok::Comma, "`,`")?;
        let c = self.number()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok((name, pos, [a, b, c]))
    }

    fn condition(&mut self) -> Result<Condition, Diagnostic> {
        let (variable, pos) = self.ident()?;
        self.keyword("is")?;
        let (term, _) = self.ident()?;
        Ok(Condition { variable, term, pos })
    }

    fn rule(&mut self) -> Result<Rule, Diagnostic> {
        let pos = self.keyword("IF")?;
        let mut antecedent = vec![self.condition()?];
        while self.is_keyword("AND") {
            self.bump();
            antecedent.push(self.condition()?);
        }
        if !self.is_keyword("THEN") {
            return self.fail(&["AND", "THEN"]);
        }
        self.bump();
        let consequent = self.condition()?;
        Ok(Rule {
            antecedent,
            consequent,
            pos,
        })
    }
}

// Term declarations come back from the parser as raw triples so that shape
// errors can be reported alongside name errors instead of aborting the parse.
type RawTerm = (String, Position, [f64; 3]);

impl Parser {
    fn decls_and_rules(&mut self) -> Result<(Vec<(bool, VariableDecl, Vec<RawTerm>)>, Vec<Rule>), Diagnostic> {
        let mut decls = Vec::new();
        while self.is_keyword("var") || self.is_keyword("out") {
            let (is_input, (decl, raw)) = self.decl_raw()?;
            decls.push((is_input, decl, raw));
        }
        if decls.is_empty() {
            return self.fail(&["var", "out"]);
        }
        let mut rules = Vec::new();
        while self.is_keyword("IF") {
            rules.push(self.rule()?);
        }
        if rules.is_empty() {
            return self.fail(&["var", "out", "IF"]);
        }
        if *self.peek() != Tok::Eof {
            return self.fail(&["IF", "end of input"]);
        }
        Ok((decls, rules))
    }

    fn decl_raw(&mut self) -> Result<(bool, (VariableDecl, Vec<RawTerm>)), Diagnostic> {
        let (kw, pos) = self.ident()?;
        let is_input = kw == "var";
        let (name, _) = self.ident()?;
        self.expect(Tok::Colon, "`:`")?;
        let lo = self.number()?;
        self.expect(Tok::DotDot, "`..`")?;
        let hi = self.number()?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut raw = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            raw.push(self.term()?);
        }
        self.expect(Tok::RBrace, "`,` or `}`")?;
        Ok((
            is_input,
            (
                VariableDecl {
                    name,
                    lo,
                    hi,
                    terms: Vec::new(),
                    pos,
                },
                raw,
            ),
        ))
    }
}

/// Parses rule-base source, then resolves names.
///
/// Syntax errors stop at the first offending token; name and declaration
/// errors are collected in full.
pub fn parse(src: &str) -> Result<RuleBase, ParseError> {
    let toks = lex(src).map_err(|d| ParseError { diagnostics: vec![d] })?;
    let mut p = Parser { toks, at: 0 };
    let (decls, rules) = p.decls_and_rules().map_err(|d| ParseError { diagnostics: vec![d] })?;

    let mut diags = Vec::new();
    let mut inputs: Vec<VariableDecl> = Vec::new();
    let mut outputs: Vec<VariableDecl> = Vec::new();
    for (is_input, mut decl, raw) in decls {
        if inputs.iter().chain(&outputs).any(|v| v.name == decl.name) {
            diags.push(Diagnostic {
                kind: DiagnosticKind::DuplicateName { name: decl.name.clone() },
                pos: Some(decl.pos),
                message: format!("variable `{}` is declared more than once", decl.name),
            });
        }
        if !(decl.lo < decl.hi) {
            diags.push(Diagnostic {
                kind: DiagnosticKind::InvalidDeclaration,
                pos: Some(decl.pos),
                message: format!("universe of `{}` needs lo < hi, got {} .. {}", decl.name, decl.lo, decl.hi),
            });
        }
        for (name, pos, [a, b, c]) in raw {
            if decl.terms.iter().any(|t| t.name == name) {
                diags.push(Diagnostic {
                    kind: DiagnosticKind::DuplicateName { name: name.clone() },
                    pos: Some(pos),
                    message: format!("term `{name}` is declared more than once in `{}`", decl.name),
                });
                continue;
            }
            match MembershipFunction::triangular(a, b, c) {
                Ok(shape) => decl.terms.push(TermDecl { name, shape, pos }),
                Err(e) => diags.push(Diagnostic {
                    kind: DiagnosticKind::InvalidDeclaration,
                    pos: Some(pos),
                    message: format!("term `{name}`: {e}"),
                }),
            }
        }
        if is_input {
            inputs.push(decl);
        } else {
            outputs.push(decl);
        }
    }
    let eof = p.pos();
    if inputs.is_empty() {
        diags.push(Diagnostic {
            kind: DiagnosticKind::InvalidDeclaration,
            pos: Some(eof),
            message: "no input variables (`var`) declared".into(),
        });
    }
    if outputs.is_empty() {
        diags.push(Diagnostic {
            kind: DiagnosticKind::InvalidDeclaration,
            pos: Some(eof),
            message: "no output variables (`out`) declared".into(),
        });
    }

    for (ri, rule) in rules.iter().enumerate() {
        for (ci, cond) in rule.antecedent.iter().enumerate() {
            if rule.antecedent[..ci].iter().any(|c| c.variable == cond.variable) {
                diags.push(Diagnostic {
                    kind: DiagnosticKind::DuplicateName {
                        name: cond.variable.clone(),
                    },
                    pos: Some(cond.pos),
                    message: format!("rule {}: variable `{}` appears twice in the antecedent", ri + 1, cond.variable),
                });
            }
            resolve(&inputs, cond, ri, "input", &mut diags);
        }
        resolve(&outputs, &rule.consequent, ri, "output", &mut diags);
    }

    if diags.is_empty() {
        Ok(RuleBase { inputs, outputs, rules })
    } else {
        Err(ParseError { diagnostics: diags })
    }
}

fn resolve(decls: &[VariableDecl], cond: &Condition, rule: usize, what: &str, diags: &mut Vec<Diagnostic>) {
    match decls.iter().find(|v| v.name == cond.variable) {
        None => diags.push(Diagnostic {
            kind: DiagnosticKind::UnknownName {
                name: cond.variable.clone(),
                rule: Some(rule),
            },
            pos: Some(cond.pos),
            message: format!("rule {}: unknown {what} variable `{}`", rule + 1, cond.variable),
        }),
        Some(v) if v.term(&cond.term).is_none() => diags.push(Diagnostic {
            kind: DiagnosticKind::UnknownName {
                name: cond.term.clone(),
                rule: Some(rule),
            },
            pos: Some(cond.pos),
            message: format!("rule {}: `{}` has no term `{}`", rule + 1, cond.variable, cond.term),
        }),
        Some(_) => {}
    }
}
