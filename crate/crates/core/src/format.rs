//! The line-oriented `.hrs` problem format.
//!
//! ```text
//! file    := line*
//! line    := 'basic' IDENT+
//!          | 'sig' IDENT+ ':' type
//!          | 'var' IDENT+ ':' type
//!          | 'rule' NAME ':' term '->' term
//! type    := atype ('->' type)?
//! atype   := IDENT | '(' type ')'
//! term    := ('\' | 'λ') binder+ '.' term | app
//! binder  := IDENT | '(' IDENT ':' type ')'
//! app     := primary ('(' term (',' term)* ')')*
//! primary := IDENT | '(' term ')'
//! IDENT   := [A-Za-z0-9_] [A-Za-z0-9_']*
//! NAME    := any text up to the first ':'
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Declarations may
//! appear in any order relative to the rules that use them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::term::{normalize, normalize_checked, Atom, Preterm, Signature, Term, TermError};
use crate::types::{Name, SimpleType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("lhs head not a function symbol")]
    LhsHeadNotSymbol,
    #[error("rule not basic-typed (type {0})")]
    NotBasic(SimpleType),
    #[error("rhs has fresh free variable {0}")]
    FreshVariable(Name),
    #[error("lhs is not a pattern")]
    NotPattern,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("input is not valid UTF-8")]
    Encoding,
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    Declaration { line: usize, message: String },
    #[error("line {line}: rule `{rule}`: {error}")]
    Rule {
        line: usize,
        rule: Name,
        error: RuleError,
    },
    #[error("duplicate rule name `{0}`")]
    DuplicateRule(Name),
}

/// A validated rewrite rule `l -> r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    name: Name,
    lhs: Term,
    rhs: Term,
    is_pattern: bool,
}

impl Rule {
    /// Checks the rule invariants; non-pattern left-hand sides are accepted and flagged.
    pub fn new(name: &str, lhs: Term, rhs: Term) -> Result<Rule, RuleError> {
        if !lhs.ty().is_basic() {
            return Err(RuleError::NotBasic(lhs.ty().clone()));
        }
        if !matches!(lhs.top(), Atom::Sym(_)) {
            return Err(RuleError::LhsHeadNotSymbol);
        }
        if rhs.ty() != lhs.ty() {
            return Err(RuleError::Term(TermError::Mismatch {
                subterm: rhs.to_string(),
                expected: lhs.ty().clone(),
                actual: rhs.ty().clone(),
            }));
        }
        let lhs_vars = lhs.free_vars();
        if let Some(fresh) = rhs.free_vars().into_iter().find(|v| !lhs_vars.contains(v)) {
            return Err(RuleError::FreshVariable(fresh));
        }
        let is_pattern = is_pattern(&lhs);
        Ok(Rule {
            name: Name::from(name),
            lhs,
            rhs,
            is_pattern,
        })
    }

    pub fn name(&self) -> &Name {
        &self.name
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    /// `true` if every free variable of the lhs is applied to distinct bound variables.
    pub fn is_pattern(&self) -> bool {
        self.is_pattern
    }

    /// The defined symbol this rule belongs to.
    pub fn head(&self) -> &Name {
        match self.lhs.top() {
            Atom::Sym(f) => f,
            _ => unreachable!("validated rule head"),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

/// Miller pattern test: free variables only occur applied to distinct bound variables.
pub fn is_pattern(t: &Term) -> bool {
    let mut ok = true;
    check_pattern(t, &mut ok);
    ok
}

fn check_pattern(t: &Term, ok: &mut bool) {
    if !*ok {
        return;
    }
    if let Atom::Var(_) = t.top() {
        let mut seen = BTreeSet::new();
        for a in t.raw_args() {
            match a.eta_bound_index() {
                Some(k) if seen.insert(k) => {}
                _ => {
                    *ok = false;
                    return;
                }
            }
        }
        return;
    }
    for a in t.raw_args() {
        check_pattern(a, ok);
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Reject rules whose lhs is not a higher-order pattern.
    pub require_patterns: bool,
}

/// A higher-order rewrite system together with its signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hrs {
    signature: Signature,
    rules: Vec<Rule>,
    defined: BTreeSet<Name>,
}

impl Hrs {
    pub fn new(signature: Signature, rules: Vec<Rule>) -> Result<Hrs, FormatError> {
        let mut names = BTreeSet::new();
        for r in &rules {
            if !names.insert(r.name.clone()) {
                return Err(FormatError::DuplicateRule(r.name.clone()));
            }
        }
        let defined = rules.iter().map(|r| r.head().clone()).collect();
        Ok(Hrs {
            signature,
            rules,
            defined,
        })
    }

    pub fn parse(text: &str) -> Result<Hrs, FormatError> {
        Self::parse_with(text, ParseOptions::default())
    }

    pub fn parse_bytes(bytes: &[u8]) -> Result<Hrs, FormatError> {
        let text = std::str::from_utf8(bytes).map_err(|_| FormatError::Encoding)?;
        Self::parse(text)
    }

    pub fn parse_with(text: &str, options: ParseOptions) -> Result<Hrs, FormatError> {
        parse_file(text, options)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name.as_ref() == name)
    }

    /// `D_R`: heads of left-hand sides.
    pub fn defined(&self) -> &BTreeSet<Name> {
        &self.defined
    }

    pub fn is_defined(&self, f: &str) -> bool {
        self.defined.contains(f)
    }

    /// `C_R`: every other declared symbol.
    pub fn constructors(&self) -> BTreeSet<Name> {
        self.signature
            .symbols
            .keys()
            .filter(|f| !self.defined.contains(*f))
            .cloned()
            .collect()
    }

    pub fn is_pattern_system(&self) -> bool {
        self.rules.iter().all(Rule::is_pattern)
    }

    /// Parses and normalizes a single term against this system's signature.
    pub fn parse_term(&self, text: &str) -> Result<Term, FormatError> {
        parse_term(&self.signature, text)
    }

    /// The `.hrs` text of this system.
    pub fn print(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Hrs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.signature.basics.is_empty() {
            write!(f, "basic")?;
            for b in &self.signature.basics {
                write!(f, " {b}")?;
            }
            writeln!(f)?;
        }
        for (name, ty) in &self.signature.symbols {
            writeln!(f, "sig {name} : {ty}")?;
        }
        for (name, ty) in &self.signature.vars {
            writeln!(f, "var {name} : {ty}")?;
        }
        writeln!(f, "# rules")?;
        for r in &self.rules {
            writeln!(f, "rule {}: {}", r.name, r)?;
        }
        Ok(())
    }
}

/// Parses and normalizes one term in the given signature.
pub fn parse_term(sig: &Signature, text: &str) -> Result<Term, FormatError> {
    let tokens = tokenize(text, 1, 1)?;
    let mut p = Parser::new(&tokens, 1, text.chars().count() + 1);
    let pre = p.term(sig)?;
    p.expect_end()?;
    normalize(&pre, sig).map_err(|e| FormatError::Syntax {
        line: 1,
        column: 1,
        message: e.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Arrow,
    Lambda,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Lambda => write!(f, "`\\`"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    is_ident_start(c) || c == '\''
}

fn tokenize(text: &str, line: usize, first_column: usize) -> Result<Vec<Spanned>, FormatError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = first_column + i;
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            ':' => Some(Tok::Colon),
            '\\' | 'λ' => Some(Tok::Lambda),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Spanned { tok, line, column });
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Spanned {
                tok: Tok::Arrow,
                line,
                column,
            });
            i += 2;
        } else if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line,
                column,
            });
        } else {
            return Err(FormatError::Syntax {
                line,
                column,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [Spanned], line: usize, end_column: usize) -> Self {
        Parser {
            toks,
            pos: 0,
            line,
            end_column,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn error(&self, message: String) -> FormatError {
        let (line, column) = match self.toks.get(self.pos) {
            Some(s) => (s.line, s.column),
            None => (self.line, self.end_column),
        };
        FormatError::Syntax {
            line,
            column,
            message,
        }
    }

    fn found(&self) -> String {
        match self.peek() {
            Some(t) => t.to_string(),
            None => "end of line".to_string(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), FormatError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {tok}, found {}", self.found())))
        }
    }

    fn expect_end(&self) -> Result<(), FormatError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.error(format!("unexpected {t}"))),
        }
    }

    fn ident(&mut self) -> Result<String, FormatError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(format!("expected identifier, found {}", self.found()))),
        }
    }

    fn ty(&mut self, sig: &Signature) -> Result<SimpleType, FormatError> {
        let domain = match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.ty(sig)?;
                self.expect(Tok::RParen)?;
                t
            }
            _ => {
                let at = self.pos;
                let name = self.ident()?;
                if !sig.basics.contains(name.as_str()) {
                    self.pos = at;
                    return Err(self.error(format!("unknown basic type `{name}`")));
                }
                SimpleType::basic(&name)
            }
        };
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let codomain = self.ty(sig)?;
            Ok(SimpleType::arrow(domain, codomain))
        } else {
            Ok(domain)
        }
    }

    fn term(&mut self, sig: &Signature) -> Result<Preterm, FormatError> {
        if self.peek() == Some(&Tok::Lambda) {
            self.pos += 1;
            let mut binders = Vec::new();
            loop {
                match self.peek() {
                    Some(Tok::Ident(_)) => {
                        let name = self.ident()?;
                        binders.push((Name::from(name.as_str()), None));
                    }
                    Some(Tok::LParen) => {
                        self.pos += 1;
                        let name = self.ident()?;
                        self.expect(Tok::Colon)?;
                        let ty = self.ty(sig)?;
                        self.expect(Tok::RParen)?;
                        binders.push((Name::from(name.as_str()), Some(ty)));
                    }
                    _ => break,
                }
            }
            if binders.is_empty() {
                return Err(self.error(format!("expected binder, found {}", self.found())));
            }
            self.expect(Tok::Dot)?;
            let body = self.term(sig)?;
            return Ok(Preterm::Lam(binders, Box::new(body)));
        }
        let mut head = match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term(sig)?;
                self.expect(Tok::RParen)?;
                t
            }
            _ => Preterm::Ident(Name::from(self.ident()?.as_str())),
        };
        while self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let mut args = vec![self.term(sig)?];
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                args.push(self.term(sig)?);
            }
            self.expect(Tok::RParen)?;
            head = Preterm::App(Box::new(head), args);
        }
        Ok(head)
    }
}

/// Strips a trailing comment; `#` never occurs inside identifiers.
fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

struct RawRule<'a> {
    line: usize,
    name: Name,
    body: &'a str,
    body_column: usize,
}

fn parse_file(text: &str, options: ParseOptions) -> Result<Hrs, FormatError> {
    let mut sig = Signature::new();
    let mut decls: Vec<(usize, &str, Vec<Spanned>)> = Vec::new();
    let mut raw_rules = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = strip_comment(raw);
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = content.chars().count() - trimmed.chars().count();
        let keyword: String = trimmed.chars().take_while(|c| !c.is_whitespace()).collect();
        let rest = &trimmed[keyword.len()..];
        let rest_column = indent + keyword.chars().count() + 1;
        match keyword.as_str() {
            "basic" => {
                let toks = tokenize(rest, line, rest_column)?;
                let mut p = Parser::new(&toks, line, content.chars().count() + 1);
                if p.peek().is_none() {
                    return Err(p.error("expected basic type name".to_string()));
                }
                while p.peek().is_some() {
                    let name = p.ident()?;
                    sig.basics.insert(Name::from(name.as_str()));
                }
            }
            "sig" | "var" => {
                let toks = tokenize(rest, line, rest_column)?;
                decls.push((line, if keyword == "sig" { "sig" } else { "var" }, toks));
            }
            "rule" => {
                let Some(colon) = rest.find(':') else {
                    return Err(FormatError::Syntax {
                        line,
                        column: content.chars().count() + 1,
                        message: "expected `:` after rule name".to_string(),
                    });
                };
                let name = rest[..colon].trim();
                if name.is_empty() || name.chars().any(char::is_whitespace) {
                    return Err(FormatError::Syntax {
                        line,
                        column: rest_column,
                        message: "rule name must be a single nonempty word".to_string(),
                    });
                }
                raw_rules.push(RawRule {
                    line,
                    name: Name::from(name),
                    body: &rest[colon + 1..],
                    body_column: rest_column + rest[..colon].chars().count() + 1,
                });
            }
            other => {
                return Err(FormatError::Syntax {
                    line,
                    column: indent + 1,
                    message: format!("unknown declaration `{other}`"),
                });
            }
        }
    }

    let mut seen: BTreeMap<Name, (usize, &str)> = BTreeMap::new();
    for (line, kind, toks) in &decls {
        let mut p = Parser::new(toks, *line, usize::MAX);
        let mut names = Vec::new();
        while let Some(Tok::Ident(_)) = p.peek() {
            names.push(p.ident()?);
        }
        if names.is_empty() {
            return Err(p.error(format!("expected identifier, found {}", p.found())));
        }
        p.expect(Tok::Colon)?;
        let ty = p.ty(&sig)?;
        p.expect_end()?;
        for name in names {
            let name = Name::from(name.as_str());
            if let Some((prev, prev_kind)) = seen.get(&name) {
                return Err(FormatError::Declaration {
                    line: *line,
                    message: format!("`{name}` already declared as {prev_kind} on line {prev}"),
                });
            }
            seen.insert(name.clone(), (*line, kind));
            if *kind == "sig" {
                sig.symbols.insert(name, ty.clone());
            } else {
                sig.vars.insert(name, ty.clone());
            }
        }
    }

    let mut rules = Vec::with_capacity(raw_rules.len());
    for raw in raw_rules {
        let toks = tokenize(raw.body, raw.line, raw.body_column)?;
        let mut p = Parser::new(&toks, raw.line, raw.body_column + raw.body.chars().count());
        let lhs = p.term(&sig)?;
        p.expect(Tok::Arrow)?;
        let rhs = p.term(&sig)?;
        p.expect_end()?;
        let rule_error = |error: RuleError| FormatError::Rule {
            line: raw.line,
            rule: raw.name.clone(),
            error,
        };
        let lhs = normalize(&lhs, &sig).map_err(|e| rule_error(e.into()))?;
        if !lhs.ty().is_basic() {
            return Err(rule_error(RuleError::NotBasic(lhs.ty().clone())));
        }
        let rhs = normalize_checked(&rhs, &sig, lhs.ty()).map_err(|e| rule_error(e.into()))?;
        let rule = Rule::new(&raw.name, lhs, rhs).map_err(rule_error)?;
        if options.require_patterns && !rule.is_pattern() {
            return Err(rule_error(RuleError::NotPattern));
        }
        rules.push(rule);
    }
    Hrs::new(sig, rules)
}
