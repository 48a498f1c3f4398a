use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// First-order formulas on words with named quantifiers and numerical
/// predicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formula {
    True,
    False,
    /// `P[symbol](var)`.
    Letter { symbol: String, var: String },
    /// `R[name](args…)`; `<` and `=` print infix.
    Num { name: String, args: Vec<String> },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// `Q var. body`.
    Quant {
        q: String,
        var: String,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn letter(symbol: impl Into<String>, var: impl Into<String>) -> Formula {
        Formula::Letter {
            symbol: symbol.into(),
            var: var.into(),
        }
    }

    pub fn num(name: impl Into<String>, args: &[&str]) -> Formula {
        Formula::Num {
            name: name.into(),
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn lt(x: &str, y: &str) -> Formula {
        Formula::num("<", &[x, y])
    }

    pub fn eq(x: &str, y: &str) -> Formula {
        Formula::num("=", &[x, y])
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `TRUE` when empty.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `FALSE` when empty.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn quant(q: impl Into<String>, var: impl Into<String>, body: Formula) -> Formula {
        Formula::Quant {
            q: q.into(),
            var: var.into(),
            body: Box::new(body),
        }
    }

    pub fn exists(var: &str, body: Formula) -> Formula {
        Formula::quant("E", var, body)
    }

    pub fn exists_unique(var: &str, body: Formula) -> Formula {
        Formula::quant("E1", var, body)
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let mut push = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) && !out.contains(v) {
                out.push(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Letter { var, .. } => push(var, bound),
            Formula::Num { args, .. } => args.iter().for_each(|v| push(v, bound)),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Quant { var, body, .. } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// All variables bound somewhere in the formula.
    pub fn bound_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Quant { var, .. } = f {
                out.insert(var.clone());
            }
        });
        out
    }

    /// All variable names, free or bound.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = self.bound_vars();
        out.extend(self.free_vars());
        out
    }

    /// Letter symbols used.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Letter { symbol, .. } = f {
                out.insert(symbol.clone());
            }
        });
        out
    }

    /// Quantifier names used.
    pub fn quantifiers(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Quant { q, .. } = f {
                out.insert(q.clone());
            }
        });
        out
    }

    /// Numerical predicate names used.
    pub fn predicates(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Num { name, .. } = f {
                out.insert(name.clone());
            }
        });
        out
    }

    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(a) => a.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Quant { body, .. } => body.visit(f),
            _ => {}
        }
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Letter { .. } | Formula::Num { .. } => 0,
            Formula::Not(a) => a.quantifier_depth(),
            Formula::And(a, b) | Formula::Or(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Formula::Quant { body, .. } => 1 + body.quantifier_depth(),
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Renames free occurrences of `from` to `to`. The caller guarantees
    /// `to` is not captured.
    pub fn rename_free(&self, from: &str, to: &str) -> Formula {
        let r = |v: &String| if v == from { to.to_string() } else { v.clone() };
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Letter { symbol, var } => Formula::Letter {
                symbol: symbol.clone(),
                var: r(var),
            },
            Formula::Num { name, args } => Formula::Num {
                name: name.clone(),
                args: args.iter().map(r).collect(),
            },
            Formula::Not(a) => Formula::not(a.rename_free(from, to)),
            Formula::And(a, b) => Formula::and(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Or(a, b) => Formula::or(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Quant { q, var, body } => {
                if var == from {
                    self.clone()
                } else {
                    Formula::quant(q.clone(), var.clone(), body.rename_free(from, to))
                }
            }
        }
    }

    /// Replaces every letter predicate by `f(symbol, var)`.
    pub fn map_letters(&self, f: &mut impl FnMut(&str, &str) -> Formula) -> Formula {
        self.map_atoms(f, &mut |name, args| Formula::Num {
            name: name.to_string(),
            args: args.to_vec(),
        })
    }

    /// Replaces letter predicates by `fl(symbol, var)` and numerical
    /// predicates by `fr(name, args)`.
    pub fn map_atoms(
        &self,
        fl: &mut impl FnMut(&str, &str) -> Formula,
        fr: &mut impl FnMut(&str, &[String]) -> Formula,
    ) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Letter { symbol, var } => fl(symbol, var),
            Formula::Num { name, args } => fr(name, args),
            Formula::Not(a) => Formula::not(a.map_atoms(fl, fr)),
            Formula::And(a, b) => Formula::and(a.map_atoms(fl, fr), b.map_atoms(fl, fr)),
            Formula::Or(a, b) => Formula::or(a.map_atoms(fl, fr), b.map_atoms(fl, fr)),
            Formula::Quant { q, var, body } => Formula::quant(q.clone(), var.clone(), body.map_atoms(fl, fr)),
        }
    }

    /// Renames every bound variable to a fresh `prefix0`, `prefix1`, … in
    /// order of binding (outermost, leftmost first), avoiding `avoid`.
    pub fn rename_bound_fresh(&self, prefix: &str, avoid: &BTreeSet<String>) -> Formula {
        let mut counter = 0usize;
        let mut fresh = || loop {
            let name = format!("{prefix}{counter}");
            counter += 1;
            if !avoid.contains(&name) {
                return name;
            }
        };
        fn go(f: &Formula, fresh: &mut impl FnMut() -> String) -> Formula {
            match f {
                Formula::Not(a) => Formula::not(go(a, fresh)),
                Formula::And(a, b) => {
                    let a = go(a, fresh);
                    Formula::and(a, go(b, fresh))
                }
                Formula::Or(a, b) => {
                    let a = go(a, fresh);
                    Formula::or(a, go(b, fresh))
                }
                Formula::Quant { q, var, body } => {
                    let z = fresh();
                    let body = body.rename_free(var, &z);
                    Formula::quant(q.clone(), z, go(&body, fresh))
                }
                other => other.clone(),
            }
        }
        go(self, &mut fresh)
    }

    /// Light structural simplification with the constants.
    pub fn simplify(&self) -> Formula {
        match self {
            Formula::Not(a) => match a.simplify() {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                Formula::Not(b) => *b,
                s => Formula::not(s),
            },
            Formula::And(a, b) => match (a.simplify(), b.simplify()) {
                (Formula::False, _) | (_, Formula::False) => Formula::False,
                (Formula::True, s) | (s, Formula::True) => s,
                (x, y) => Formula::and(x, y),
            },
            Formula::Or(a, b) => match (a.simplify(), b.simplify()) {
                (Formula::True, _) | (_, Formula::True) => Formula::True,
                (Formula::False, s) | (s, Formula::False) => s,
                (x, y) => Formula::or(x, y),
            },
            Formula::Quant { q, var, body } => Formula::quant(q.clone(), var.clone(), body.simplify()),
            other => other.clone(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Top,
    Or,
    And,
    Unary,
}

impl Formula {
    fn write(&self, f: &mut fmt::Formatter<'_>, prec: Prec) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Letter { symbol, var } => write!(f, "P[{symbol}]({var})"),
            Formula::Num { name, args } if (name == "<" || name == "=") && args.len() == 2 => {
                write!(f, "{}{}{}", args[0], name, args[1])
            }
            Formula::Num { name, args } => write!(f, "R[{name}]({})", args.join(",")),
            Formula::Not(a) => {
                write!(f, "~")?;
                a.write(f, Prec::Unary)
            }
            Formula::Or(a, b) => self.write_binary(f, prec, Prec::Or, "|", a, b),
            Formula::And(a, b) => self.write_binary(f, prec, Prec::And, "&", a, b),
            Formula::Quant { q, var, body } => {
                if prec > Prec::Top {
                    write!(f, "(")?;
                }
                write!(f, "{q} {var}. ")?;
                body.write(f, Prec::Top)?;
                if prec > Prec::Top {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }

    fn write_binary(
        &self,
        f: &mut fmt::Formatter<'_>,
        outer: Prec,
        own: Prec,
        op: &str,
        a: &Formula,
        b: &Formula,
    ) -> fmt::Result {
        let paren = outer > own && outer != Prec::Top;
        if paren {
            write!(f, "(")?;
        }
        a.write(f, own)?;
        write!(f, " {op} ")?;
        let right = if own == Prec::Or { Prec::And } else { Prec::Unary };
        b.write(f, right)?;
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, Prec::Top)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_and_bound() {
        let f = Formula::and(
            Formula::letter("a", "x"),
            Formula::exists("y", Formula::lt("x", "y")),
        );
        assert_eq!(f.free_vars(), vec!["x"]);
        assert_eq!(f.bound_vars().into_iter().collect::<Vec<_>>(), vec!["y"]);
        assert_eq!(f.quantifier_depth(), 1);
        assert!(!f.is_sentence());
    }

    #[test]
    fn display_parenthesizes() {
        let f = Formula::and(
            Formula::exists("x", Formula::letter("a", "x")),
            Formula::or(Formula::True, Formula::False),
        );
        assert_eq!(f.to_string(), "(E x. P[a](x)) & (true | false)");
        let g = Formula::not(Formula::and(Formula::letter("a", "x"), Formula::lt("x", "y")));
        assert_eq!(g.to_string(), "~(P[a](x) & x<y)");
    }

    #[test]
    fn fresh_renaming() {
        let f = Formula::and(
            Formula::exists("x", Formula::letter("a", "x")),
            Formula::exists("x", Formula::exists("y", Formula::lt("x", "y"))),
        );
        let r = f.rename_bound_fresh("z", &BTreeSet::new());
        assert_eq!(r.to_string(), "(E z0. P[a](z0)) & (E z1. E z2. z1<z2)");
    }

    #[test]
    fn simplify_constants() {
        let f = Formula::or(Formula::and(Formula::True, Formula::letter("a", "x")), Formula::False);
        assert_eq!(f.simplify(), Formula::letter("a", "x"));
        assert_eq!(Formula::not(Formula::not(Formula::True)).simplify(), Formula::True);
    }
}
