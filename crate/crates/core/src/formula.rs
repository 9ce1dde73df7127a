//! Negation-normal-form formulas with dependence atoms.
//!
//! Concrete syntax, loosest binding first:
//!
//! ```text
//! disj := conj ('|' conj)*
//! conj := atom ('&' atom)*
//! atom := 'T' | 'F' | var | '~' var | 'dep(' [var (',' var)* ';'] var ')' | '(' disj ')'
//! var  := [a-z][a-zA-Z0-9_]*
//! ```
//!
//! `dep(p)` and `dep(;p)` are the same constancy atom. Chains of `&` and `|`
//! associate to the left.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A propositional variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(Var(name))
        } else {
            Err(Error::Domain(format!("invalid variable name `{name}`")))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl TryFrom<String> for Var {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Var::new(s)
    }
}

impl From<Var> for String {
    fn from(v: Var) -> String {
        v.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    PosLit(Var),
    NegLit(Var),
    Top,
    Bottom,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// `dep(args; target)`; empty `args` is a constancy atom.
    Dep { args: Vec<Var>, target: Var },
}

impl Formula {
    pub fn parse(text: &str) -> Result<Formula> {
        Parser::new(text).parse_all()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write_into(&mut out);
        out
    }

    pub fn pos(name: &str) -> Result<Formula> {
        Ok(Formula::PosLit(Var::new(name)?))
    }

    pub fn neg(name: &str) -> Result<Formula> {
        Ok(Formula::NegLit(Var::new(name)?))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Formula {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn dep(args: Vec<Var>, target: Var) -> Formula {
        Formula::Dep { args, target }
    }

    /// Variables occurring in literals and dependence atoms.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::PosLit(v) | Formula::NegLit(v) => {
                out.insert(v.clone());
            }
            Formula::Top | Formula::Bottom => {}
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Formula::Dep { args, target } => {
                out.extend(args.iter().cloned());
                out.insert(target.clone());
            }
        }
    }

    /// True iff the formula contains no dependence atom.
    pub fn is_pl(&self) -> bool {
        match self {
            Formula::Dep { .. } => false,
            Formula::And(l, r) | Formula::Or(l, r) => l.is_pl() && r.is_pl(),
            _ => true,
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::And(l, r) | Formula::Or(l, r) => 1 + l.size() + r.size(),
            _ => 1,
        }
    }

    /// Height of the AST; atoms have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Formula::And(l, r) | Formula::Or(l, r) => 1 + l.depth().max(r.depth()),
            _ => 1,
        }
    }

    fn write_into(&self, out: &mut String) {
        match self {
            Formula::PosLit(v) => out.push_str(v.as_str()),
            Formula::NegLit(v) => {
                out.push('~');
                out.push_str(v.as_str());
            }
            Formula::Top => out.push('T'),
            Formula::Bottom => out.push('F'),
            Formula::Dep { args, target } => {
                out.push_str("dep(");
                if !args.is_empty() {
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        out.push_str(a.as_str());
                    }
                    out.push(';');
                }
                out.push_str(target.as_str());
                out.push(')');
            }
            Formula::And(l, r) => {
                l.write_child(out, matches!(**l, Formula::Or(..)));
                out.push_str(" & ");
                r.write_child(out, matches!(**r, Formula::Or(..) | Formula::And(..)));
            }
            Formula::Or(l, r) => {
                l.write_child(out, false);
                out.push_str(" | ");
                r.write_child(out, matches!(**r, Formula::Or(..)));
            }
        }
    }

    fn write_child(&self, out: &mut String, parens: bool) {
        if parens {
            out.push('(');
            self.write_into(out);
            out.push(')');
        } else {
            self.write_into(out);
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Formula::parse(s)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => self.error(format!("expected `{c}`, found `{got}`")),
            None => self.error(format!("expected `{c}`, found end of input")),
        }
    }

    fn parse_all(mut self) -> Result<Formula> {
        let f = self.disj()?;
        match self.peek() {
            None => Ok(f),
            Some(c) => self.error(format!("unexpected `{c}`")),
        }
    }

    fn disj(&mut self) -> Result<Formula> {
        let mut acc = self.conj()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            let rhs = self.conj()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut acc = self.atom()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            let rhs = self.atom()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek() {
            None => self.error("expected formula, found end of input"),
            Some('T') => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some('F') => {
                self.pos += 1;
                Ok(Formula::Bottom)
            }
            Some('(') => {
                self.pos += 1;
                let f = self.disj()?;
                self.expect(')')?;
                Ok(f)
            }
            Some('~') => {
                self.pos += 1;
                match self.peek() {
                    Some(c) if c.is_ascii_lowercase() => {
                        let start = self.pos;
                        let name = self.identifier();
                        if name == "dep" && self.peek() == Some('(') {
                            self.pos = start;
                            return self.error("negation applies only to variables");
                        }
                        Ok(Formula::NegLit(Var(name)))
                    }
                    _ => self.error("negation applies only to variables"),
                }
            }
            Some(c) if c.is_ascii_lowercase() => {
                let name = self.identifier();
                if name == "dep" && self.peek() == Some('(') {
                    self.pos += 1;
                    self.dep_body()
                } else {
                    Ok(Formula::PosLit(Var(name)))
                }
            }
            Some(c) => self.error(format!("unexpected `{c}`")),
        }
    }

    /// Reads `[a-z][a-zA-Z0-9_]*` at the current (non-whitespace) position.
    fn identifier(&mut self) -> String {
        let start = self.pos;
        self.pos += 1;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn variable(&mut self) -> Result<Var> {
        match self.peek() {
            Some(c) if c.is_ascii_lowercase() => Ok(Var(self.identifier())),
            Some(c) => self.error(format!("expected variable, found `{c}`")),
            None => self.error("expected variable, found end of input"),
        }
    }

    // After `dep(`.
    fn dep_body(&mut self) -> Result<Formula> {
        if self.peek() == Some(';') {
            self.pos += 1;
            let target = self.variable()?;
            self.expect(')')?;
            return Ok(Formula::dep(Vec::new(), target));
        }
        let first = self.variable()?;
        match self.peek() {
            Some(')') => {
                self.pos += 1;
                Ok(Formula::dep(Vec::new(), first))
            }
            Some(';') => {
                self.pos += 1;
                let target = self.variable()?;
                self.expect(')')?;
                Ok(Formula::dep(vec![first], target))
            }
            Some(',') => {
                let mut args = vec![first];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    args.push(self.variable()?);
                }
                self.expect(';')?;
                let target = self.variable()?;
                self.expect(')')?;
                Ok(Formula::dep(args, target))
            }
            Some(c) => self.error(format!("expected `)`, `;` or `,`, found `{c}`")),
            None => self.error("unterminated dependence atom"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Var {
        Var::new(s).unwrap()
    }

    fn p(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    fn offset(s: &str) -> usize {
        match Formula::parse(s) {
            Err(Error::Syntax { offset, .. }) => offset,
            other => panic!("expected syntax error for {s:?}, got {other:?}"),
        }
    }

    #[test]
    fn parses_dependence_atoms() {
        assert_eq!(p("dep(p;q)"), Formula::dep(vec![v("p")], v("q")));
        assert_eq!(p("dep(r)"), Formula::dep(vec![], v("r")));
        assert_eq!(p("dep( ; r )"), Formula::dep(vec![], v("r")));
        assert_eq!(
            p("dep(a,b;c)"),
            Formula::dep(vec![v("a"), v("b")], v("c"))
        );
    }

    #[test]
    fn parses_terminals_and_nesting() {
        assert_eq!(p("T"), Formula::Top);
        assert_eq!(p("F"), Formula::Bottom);
        assert_eq!(
            p("~p & (q | dep(r))"),
            Formula::and(
                Formula::NegLit(v("p")),
                Formula::or(Formula::PosLit(v("q")), Formula::dep(vec![], v("r")))
            )
        );
    }

    #[test]
    fn or_binds_looser_and_chains_left() {
        assert_eq!(
            p("a | b & c"),
            Formula::or(
                Formula::PosLit(v("a")),
                Formula::and(Formula::PosLit(v("b")), Formula::PosLit(v("c")))
            )
        );
        assert_eq!(
            p("a&b&c"),
            Formula::and(
                Formula::and(Formula::PosLit(v("a")), Formula::PosLit(v("b"))),
                Formula::PosLit(v("c"))
            )
        );
    }

    #[test]
    fn dep_without_paren_is_a_variable() {
        assert_eq!(p("dep & x"), Formula::and(Formula::PosLit(v("dep")), Formula::PosLit(v("x"))));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert_eq!(offset(""), 1);
        assert_eq!(offset("p &"), 4);
        assert_eq!(offset("~(p)"), 2);
        assert_eq!(offset("~T"), 2);
        assert_eq!(offset("~dep(p)"), 2);
        assert_eq!(offset("p q"), 3);
        assert_eq!(offset("dep(p,q)"), 8);
        assert_eq!(offset("(p"), 3);
        assert_eq!(offset("P"), 1);
    }

    #[test]
    fn renders_minimal_parentheses() {
        assert_eq!(Formula::dep(vec![], v("r")).render(), "dep(r)");
        assert_eq!(Formula::Top.render(), "T");
        assert_eq!(
            Formula::and(Formula::PosLit(v("p")), Formula::PosLit(v("q"))).render(),
            "p & q"
        );
        assert_eq!(p("(a | b) & c").render(), "(a | b) & c");
        assert_eq!(p("a | (b | c)").render(), "a | (b | c)");
        assert_eq!(p("(a | b) | c").render(), "a | b | c");
        assert_eq!(p("dep(a, b ; c)").render(), "dep(a,b;c)");
    }

    #[test]
    fn vars_and_pl_detection() {
        let names = |s: &str| -> Vec<String> {
            p(s).vars().into_iter().map(String::from).collect()
        };
        assert_eq!(names("dep(p;q) & r"), ["p", "q", "r"]);
        assert!(names("T").is_empty());
        assert_eq!(names("p | ~p"), ["p"]);

        assert!(p("p & ~q").is_pl());
        assert!(!p("dep(p)").is_pl());
        assert!(!p("p | (q & dep(p;r))").is_pl());
    }

    #[test]
    fn var_validation() {
        assert!(Var::new("x_1Y").is_ok());
        assert!(Var::new("").is_err());
        assert!(Var::new("1x").is_err());
        assert!(Var::new("Xy").is_err());
    }
}
