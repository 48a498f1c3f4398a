use crate::error::{Error, Result};
use crate::logic::formula::Formula;

/// Parses the formula DSL.
///
/// ```text
/// formula := or
/// or      := and ('|' and)*
/// and     := unary ('&' unary)*
/// unary   := '~' unary | QNAME VAR '.' formula | primary
/// primary := '(' formula ')' | 'true' | 'false'
///          | 'P[' SYMBOL '](' VAR ')' | 'R[' NAME '](' VAR (',' VAR)* ')'
///          | VAR '<' VAR | VAR '=' VAR
/// QNAME   := IDENT | IDENT '[' … ']'
/// ```
///
/// A quantifier body extends as far right as possible. Variables that occur
/// both free and bound, or are rebound inside their own scope, are rejected.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser { src: text, pos: 0 };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.err("unexpected trailing input"));
    }
    check_variables(&f)?;
    Ok(f)
}

/// Parses a formula file: one formula per line, `#` starts a comment.
pub fn parse_formula_file(text: &str) -> Result<Vec<Formula>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(parse)
        .collect()
}

pub(crate) fn check_variables(f: &Formula) -> Result<()> {
    let free = f.free_vars();
    if let Some(v) = f.bound_vars().into_iter().find(|v| free.contains(v)) {
        return Err(Error::VariableClash(v));
    }
    fn no_shadow(f: &Formula, scope: &mut Vec<String>) -> Result<()> {
        match f {
            Formula::Quant { var, body, .. } => {
                if scope.contains(var) {
                    return Err(Error::VariableClash(var.clone()));
                }
                scope.push(var.clone());
                no_shadow(body, scope)?;
                scope.pop();
                Ok(())
            }
            Formula::Not(a) => no_shadow(a, scope),
            Formula::And(a, b) | Formula::Or(a, b) => {
                no_shadow(a, scope)?;
                no_shadow(b, scope)
            }
            _ => Ok(()),
        }
    }
    no_shadow(f, &mut Vec::new())
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let end = chars
            .find(|&(_, c)| !(c.is_alphanumeric() || c == '_' || c == '\''))
            .map_or(rest.len(), |(i, _)| i);
        self.pos += end;
        Some(&rest[..end])
    }

    fn expect_ident(&mut self, what: &str) -> Result<&'a str> {
        self.ident().ok_or_else(|| self.err(&format!("expected {what}")))
    }

    /// Raw text up to the matching `]` (the `[` already consumed).
    fn bracketed(&mut self) -> Result<&'a str> {
        let rest = self.rest();
        let mut depth = 0usize;
        let end = rest
            .char_indices()
            .find(|&(_, c)| match c {
                '[' => {
                    depth += 1;
                    false
                }
                ']' if depth == 0 => true,
                ']' => {
                    depth -= 1;
                    false
                }
                _ => false,
            })
            .map(|(i, _)| i)
            .ok_or_else(|| self.err("unterminated `[`"))?;
        self.pos += end + 1;
        Ok(rest[..end].trim())
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut f = self.conj()?;
        while self.eat('|') {
            f = Formula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat('&') {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat('~') {
            return Ok(Formula::not(self.unary()?));
        }
        if let Some(q) = self.try_quant()? {
            return Ok(q);
        }
        self.primary()
    }

    fn try_quant(&mut self) -> Result<Option<Formula>> {
        let start = self.pos;
        let Some(name) = self.ident() else {
            return Ok(None);
        };
        let mut qname = name.to_string();
        if self.rest().starts_with('[') {
            self.pos += 1;
            let inner: String = self.bracketed()?.chars().filter(|c| !c.is_whitespace()).collect();
            qname = format!("{name}[{inner}]");
        }
        let Some(var) = self.ident() else {
            self.pos = start;
            return Ok(None);
        };
        if !self.eat('.') {
            self.pos = start;
            return Ok(None);
        }
        let body = self.formula()?;
        Ok(Some(Formula::quant(qname, var, body)))
    }

    fn primary(&mut self) -> Result<Formula> {
        if self.eat('(') {
            let f = self.formula()?;
            self.expect(')')?;
            return Ok(f);
        }
        let start = self.pos;
        let name = self.expect_ident("a formula")?;
        match name {
            "true" => return Ok(Formula::True),
            "false" => return Ok(Formula::False),
            "P" | "R" if self.rest().starts_with('[') => {
                self.pos += 1;
                let inner = self.bracketed()?.to_string();
                if inner.is_empty() {
                    return Err(self.err("empty name in brackets"));
                }
                self.expect('(')?;
                let mut args = vec![self.expect_ident("a variable")?.to_string()];
                while self.eat(',') {
                    args.push(self.expect_ident("a variable")?.to_string());
                }
                self.expect(')')?;
                if name == "P" {
                    if args.len() != 1 {
                        self.pos = start;
                        return Err(self.err("letter predicates take one variable"));
                    }
                    return Ok(Formula::Letter {
                        symbol: inner,
                        var: args.pop().expect("one arg"),
                    });
                }
                return Ok(Formula::Num { name: inner, args });
            }
            _ => {}
        }
        let op = match self.peek() {
            Some('<') => "<",
            Some('=') => "=",
            _ => return Err(self.err("expected `<` or `=` after variable")),
        };
        self.pos += 1;
        let rhs = self.expect_ident("a variable")?;
        Ok(Formula::num(op, &[name, rhs]))
    }
}
