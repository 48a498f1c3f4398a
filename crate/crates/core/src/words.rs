//! Alphabets, words, contexts and marked words.
//!
//! Positions are 1-based everywhere. An extended alphabet `A × 2^y` lists its
//! letters `a`-major; for a fixed base letter the second components run
//! through the subsets of `y` as binary numbers in which the first variable of
//! `y` is the most significant bit. Appending a variable to a context therefore
//! appends a least significant bit, so `A × 2^(y·z)` and `(A × 2^y) × 2^z`
//! share letter indices.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regular::Dfa;

/// A nonempty ordered list of distinct symbol names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = Error;

    fn try_from(symbols: Vec<String>) -> Result<Self> {
        Alphabet::new(symbols)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.symbols
    }
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Alphabet> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        let mut seen = BTreeSet::new();
        for s in &symbols {
            if s.is_empty() || s.chars().any(|c| c.is_whitespace() || "[]()".contains(c)) {
                return Err(Error::InvalidAlphabet(format!("bad symbol name `{s}`")));
            }
            if !seen.insert(s.as_str()) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// One symbol per character of `chars`, e.g. `Alphabet::from_chars("ab")`.
    pub fn from_chars(chars: &str) -> Result<Alphabet> {
        Alphabet::new(chars.chars().map(|c| c.to_string()))
    }

    /// The alphabet `{0, 1, …, n-1}` with symbols `c0 … c{n-1}`.
    pub fn indexed(prefix: &str, n: usize) -> Result<Alphabet> {
        Alphabet::new((0..n).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    pub fn require(&self, symbol: &str) -> Result<usize> {
        self.index_of(symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    /// The extended alphabet `A × 2^ctx`, letters named `a{x,z}`. For the
    /// empty context this is `A` itself.
    pub fn extended(&self, ctx: &Context) -> Alphabet {
        let k = ctx.len();
        if k == 0 {
            return self.clone();
        }
        let mut symbols = Vec::with_capacity(self.len() << k);
        for a in &self.symbols {
            for mask in 0..(1usize << k) {
                symbols.push(format!("{a}{{{}}}", ctx.subset_names(mask).join(",")));
            }
        }
        Alphabet { symbols }
    }

    /// `A × 2^k` split: base letter and subset mask of an extended letter.
    pub fn split_extended(letter: usize, k: usize) -> (usize, usize) {
        (letter >> k, letter & ((1 << k) - 1))
    }

    pub fn join_extended(base: usize, mask: usize, k: usize) -> usize {
        (base << k) | mask
    }

    pub fn word(&self, letters: Vec<usize>) -> Result<Word> {
        if let Some(&bad) = letters.iter().find(|&&l| l >= self.len()) {
            return Err(Error::UnknownSymbol(format!("letter index {bad}")));
        }
        Ok(Word(letters))
    }

    /// Parses a word written as concatenated symbols (longest match first),
    /// optionally separated by whitespace. `ε` and the empty string denote
    /// the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for chunk in text.split_whitespace() {
            if chunk == "ε" {
                continue;
            }
            let mut rest = chunk;
            while !rest.is_empty() {
                let best = self
                    .symbols
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| rest.starts_with(s.as_str()))
                    .max_by_key(|(_, s)| s.len());
                match best {
                    Some((i, s)) => {
                        letters.push(i);
                        rest = &rest[s.len()..];
                    }
                    None => return Err(Error::UnknownSymbol(rest.to_string())),
                }
            }
        }
        Ok(Word(letters))
    }

    pub fn render(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        let compact = self
            .symbols
            .iter()
            .all(|s| s.chars().count() == 1 || s.ends_with('}'));
        let sep = if compact { "" } else { " " };
        word.iter()
            .map(|&l| self.symbols[l].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// All words of length exactly `n`, in lexicographic order.
    pub fn words_of_length(&self, n: usize) -> impl Iterator<Item = Vec<usize>> {
        let k = self.len();
        let total = k.checked_pow(n as u32).unwrap_or(usize::MAX);
        (0..total).map(move |mut code| {
            let mut w = vec![0; n];
            for slot in w.iter_mut().rev() {
                *slot = code % k;
                code /= k;
            }
            w
        })
    }

    /// All words of length at most `bound`, shortlex order.
    pub fn words_up_to(&self, bound: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..=bound).flat_map(move |n| self.words_of_length(n))
    }

    /// Parses an alphabet header line `alphabet a b c`.
    pub fn parse_header(line: &str) -> Result<Alphabet> {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("alphabet") => Alphabet::new(parts),
            _ => Err(Error::Invalid(format!("expected `alphabet …` header, got `{line}`"))),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.symbols.join(","))
    }
}

/// Reads a word file: an `alphabet …` header, then one word per line.
/// Blank lines and `#` comments are skipped.
pub fn parse_word_file(text: &str) -> Result<(Alphabet, Vec<Word>)> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Invalid("empty word file".into()))?;
    let alphabet = Alphabet::parse_header(header)?;
    let words = lines
        .map(|l| alphabet.parse_word(l))
        .collect::<Result<Vec<_>>>()?;
    Ok((alphabet, words))
}

/// A finite word: a sequence of letter indices into some alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

/// An ordered set of distinct variable names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Context {
    vars: Vec<String>,
}

impl TryFrom<Vec<String>> for Context {
    type Error = Error;

    fn try_from(vars: Vec<String>) -> Result<Self> {
        Context::new(vars)
    }
}

impl From<Context> for Vec<String> {
    fn from(c: Context) -> Self {
        c.vars
    }
}

impl Context {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Result<Context> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidContext(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Context { vars })
    }

    pub fn empty() -> Context {
        Context::default()
    }

    pub fn single(var: &str) -> Context {
        Context {
            vars: vec![var.to_string()],
        }
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn contains(&self, var: &str) -> bool {
        self.vars.iter().any(|v| v == var)
    }

    pub fn index_of(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == var)
    }

    pub fn is_subset_of(&self, other: &Context) -> bool {
        self.vars.iter().all(|v| other.contains(v))
    }

    /// Disjoint union `self · other`; fails when the contexts overlap.
    pub fn disjoint_union(&self, other: &Context) -> Result<Context> {
        if let Some(v) = other.vars.iter().find(|v| self.contains(v)) {
            return Err(Error::InvalidContext(format!(
                "contexts overlap on `{v}`"
            )));
        }
        let mut vars = self.vars.clone();
        vars.extend(other.vars.iter().cloned());
        Ok(Context { vars })
    }

    pub fn with(&self, var: &str) -> Result<Context> {
        self.disjoint_union(&Context::single(var))
    }

    pub fn without(&self, var: &str) -> Context {
        Context {
            vars: self.vars.iter().filter(|v| *v != var).cloned().collect(),
        }
    }

    /// Bit of variable `i` inside a subset mask.
    pub fn bit(&self, i: usize) -> usize {
        1 << (self.len() - 1 - i)
    }

    pub fn subset_names(&self, mask: usize) -> Vec<&str> {
        (0..self.len())
            .filter(|&i| mask & self.bit(i) != 0)
            .map(|i| self.vars[i].as_str())
            .collect()
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.vars.join(","))
    }
}

/// A word with one 1-based position per context variable (aligned with the
/// variable order of the context it is interpreted in).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MarkedWord {
    pub word: Word,
    pub marks: Vec<usize>,
}

impl MarkedWord {
    pub fn new(word: Word, marks: Vec<usize>) -> Result<MarkedWord> {
        if let Some(&m) = marks.iter().find(|&&m| m == 0 || m > word.len()) {
            return Err(Error::InvalidMarkedWord(format!(
                "mark {m} outside 1..={}",
                word.len()
            )));
        }
        Ok(MarkedWord { word, marks })
    }

    pub fn plain(word: Word) -> MarkedWord {
        MarkedWord {
            word,
            marks: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Renders as `ab[x=2]`.
    pub fn render(&self, alphabet: &Alphabet, ctx: &Context) -> String {
        let w = alphabet.render(&self.word.0);
        if self.marks.is_empty() {
            return w;
        }
        let marks: Vec<String> = ctx
            .vars()
            .iter()
            .zip(&self.marks)
            .map(|(v, m)| format!("{v}={m}"))
            .collect();
        format!("{w}[{}]", marks.join(","))
    }

    /// Parses `ab[x=2,y=1]` (or a bare word for the empty context).
    pub fn parse(text: &str, alphabet: &Alphabet, ctx: &Context) -> Result<MarkedWord> {
        let text = text.trim();
        let (w, marks_txt) = match text.find('[') {
            Some(i) if text.ends_with(']') => (&text[..i], Some(&text[i + 1..text.len() - 1])),
            _ => (text, None),
        };
        let word = alphabet.parse_word(w)?;
        let mut marks = vec![0; ctx.len()];
        if let Some(m) = marks_txt {
            for part in m.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                let (v, p) = part
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidMarkedWord(format!("bad mark `{part}`")))?;
                let i = ctx
                    .index_of(v.trim())
                    .ok_or_else(|| Error::UnboundVariable(v.trim().to_string()))?;
                marks[i] = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidMarkedWord(format!("bad position `{p}`")))?;
            }
        }
        if let Some(i) = marks.iter().position(|&m| m == 0) {
            return Err(Error::InvalidMarkedWord(format!(
                "variable `{}` is not marked",
                ctx.vars()[i]
            )));
        }
        MarkedWord::new(word, marks)
    }
}

/// The injection `A* ⊗ ℕ^|x| ↣ (A × 2^y)*` for `x ⊆ y`.
pub fn embed_marked(mw: &MarkedWord, x: &Context, y: &Context) -> Result<Word> {
    if !x.is_subset_of(y) {
        return Err(Error::InvalidContext(format!("{x} is not contained in {y}")));
    }
    if mw.marks.len() != x.len() {
        return Err(Error::InvalidMarkedWord(format!(
            "{} marks for context {x}",
            mw.marks.len()
        )));
    }
    let k = y.len();
    let mut masks = vec![0usize; mw.len()];
    for (var, &pos) in x.vars().iter().zip(&mw.marks) {
        let j = y.index_of(var).expect("subset checked");
        masks[pos - 1] |= y.bit(j);
    }
    Ok(Word(
        mw.word
            .0
            .iter()
            .zip(masks)
            .map(|(&a, m)| Alphabet::join_extended(a, m, k))
            .collect(),
    ))
}

/// Inverse of [`embed_marked`] for `x = y`: succeeds iff every variable of `y`
/// is marked exactly once.
pub fn unembed(word: &Word, y: &Context) -> Option<MarkedWord> {
    let k = y.len();
    let mut marks = vec![0usize; k];
    let mut base = Vec::with_capacity(word.len());
    for (p, &l) in word.0.iter().enumerate() {
        let (a, mask) = Alphabet::split_extended(l, k);
        base.push(a);
        for (j, m) in marks.iter_mut().enumerate() {
            if mask & y.bit(j) != 0 {
                if *m != 0 {
                    return None;
                }
                *m = p + 1;
            }
        }
    }
    if marks.contains(&0) {
        return None;
    }
    Some(MarkedWord {
        word: Word(base),
        marks,
    })
}

/// The three components of `(A × 2)*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum MarkClass {
    /// No marked letter: `A*`.
    Plain,
    /// Exactly one marked letter: `A* ⊗ ℕ`.
    Marked,
    /// Two or more marked letters: `A_z`.
    Zero,
}

/// Classifies a word over `A × 2` by its number of marked letters.
pub fn classify(word: &Word) -> MarkClass {
    match word.0.iter().filter(|&&l| l & 1 == 1).count() {
        0 => MarkClass::Plain,
        1 => MarkClass::Marked,
        _ => MarkClass::Zero,
    }
}

/// A finite set of words together with the length bound it is exact up to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedLanguage {
    pub alphabet: Alphabet,
    pub bound: usize,
    pub words: BTreeSet<Vec<usize>>,
}

impl BoundedLanguage {
    pub fn new(
        alphabet: Alphabet,
        bound: usize,
        words: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<BoundedLanguage> {
        let words: BTreeSet<Vec<usize>> = words.into_iter().collect();
        if let Some(w) = words.iter().find(|w| w.len() > bound) {
            return Err(Error::Invalid(format!(
                "word of length {} exceeds bound {bound}",
                w.len()
            )));
        }
        if words.iter().flatten().any(|&l| l >= alphabet.len()) {
            return Err(Error::UnknownSymbol("letter index out of range".into()));
        }
        Ok(BoundedLanguage {
            alphabet,
            bound,
            words,
        })
    }

    pub fn from_predicate(
        alphabet: &Alphabet,
        bound: usize,
        mut member: impl FnMut(&[usize]) -> bool,
    ) -> BoundedLanguage {
        let words = alphabet.words_up_to(bound).filter(|w| member(w)).collect();
        BoundedLanguage {
            alphabet: alphabet.clone(),
            bound,
            words,
        }
    }

    pub fn contains(&self, w: &[usize]) -> bool {
        self.words.contains(w)
    }

    pub fn restrict(&self, bound: usize) -> BoundedLanguage {
        let bound = bound.min(self.bound);
        BoundedLanguage {
            alphabet: self.alphabet.clone(),
            bound,
            words: self.words.iter().filter(|w| w.len() <= bound).cloned().collect(),
        }
    }
}

/// A language with either an exact regular backend or a bounded one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Language {
    Regular(Dfa),
    Bounded(BoundedLanguage),
}

impl Language {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Language::Regular(d) => d.alphabet(),
            Language::Bounded(b) => &b.alphabet,
        }
    }

    /// `None` for regular languages.
    pub fn bound(&self) -> Option<usize> {
        match self {
            Language::Regular(_) => None,
            Language::Bounded(b) => Some(b.bound),
        }
    }

    pub fn contains(&self, w: &[usize]) -> bool {
        match self {
            Language::Regular(d) => d.accepts(w),
            Language::Bounded(b) => b.contains(w),
        }
    }

    /// The bounded slice of this language up to `bound` (never above the
    /// language's own bound).
    pub fn to_bounded(&self, bound: usize) -> BoundedLanguage {
        match self {
            Language::Regular(d) => BoundedLanguage::from_predicate(d.alphabet(), bound, |w| d.accepts(w)),
            Language::Bounded(b) => b.restrict(bound),
        }
    }

    /// `u⁻¹L`. Bounded languages lose `|u|` from their bound; if `|u|`
    /// exceeds it the result is the empty language with bound 0.
    pub fn left_quotient(&self, u: &Word) -> Language {
        match self {
            Language::Regular(d) => Language::Regular(d.left_quotient(&u.0)),
            Language::Bounded(b) => {
                let Some(bound) = b.bound.checked_sub(u.len()) else {
                    return Language::Bounded(BoundedLanguage {
                        alphabet: b.alphabet.clone(),
                        bound: 0,
                        words: BTreeSet::new(),
                    });
                };
                let words = b
                    .words
                    .iter()
                    .filter_map(|w| w.strip_prefix(u.0.as_slice()).map(<[usize]>::to_vec))
                    .collect();
                Language::Bounded(BoundedLanguage {
                    alphabet: b.alphabet.clone(),
                    bound,
                    words,
                })
            }
        }
    }

    /// `Lu⁻¹`, with the same bound convention as [`Language::left_quotient`].
    pub fn right_quotient(&self, u: &Word) -> Language {
        match self {
            Language::Regular(d) => Language::Regular(d.right_quotient(&u.0)),
            Language::Bounded(b) => {
                let Some(bound) = b.bound.checked_sub(u.len()) else {
                    return Language::Bounded(BoundedLanguage {
                        alphabet: b.alphabet.clone(),
                        bound: 0,
                        words: BTreeSet::new(),
                    });
                };
                let words = b
                    .words
                    .iter()
                    .filter_map(|w| w.strip_suffix(u.0.as_slice()).map(<[usize]>::to_vec))
                    .collect();
                Language::Bounded(BoundedLanguage {
                    alphabet: b.alphabet.clone(),
                    bound,
                    words,
                })
            }
        }
    }

    /// Equality: exact for two regular languages, otherwise up to the smaller
    /// bound.
    pub fn same_as(&self, other: &Language) -> bool {
        match (self, other) {
            (Language::Regular(a), Language::Regular(b)) => a.equivalent(b),
            _ => {
                let bound = self
                    .bound()
                    .into_iter()
                    .chain(other.bound())
                    .min()
                    .expect("one side is bounded");
                self.to_bounded(bound).words == other.to_bounded(bound).words
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(["a b"]).is_err());
        assert_eq!(ab().len(), 2);
    }

    #[test]
    fn extended_alphabet_order() {
        let ctx = Context::new(["x", "z"]).unwrap();
        let ext = Alphabet::from_chars("a").unwrap().extended(&ctx);
        assert_eq!(ext.symbols(), ["a{}", "a{z}", "a{x}", "a{x,z}"]);
        // appending a variable appends a low bit
        let x = Context::single("x");
        let ax = ab().extended(&x);
        let axz = ab().extended(&x.with("z").unwrap());
        assert_eq!(ax.len() * 2, axz.len());
        assert_eq!(axz.symbol(3 * 2 + 1), "b{x,z}");
        assert_eq!(ax.symbol(3), "b{x}");
    }

    #[test]
    fn embed_examples() {
        let a = ab();
        let x = Context::single("x");
        let ext = a.extended(&x);
        let mw = MarkedWord::new(a.parse_word("ab").unwrap(), vec![2]).unwrap();
        let w = embed_marked(&mw, &x, &x).unwrap();
        assert_eq!(ext.render(&w.0), "a{}b{x}");

        let plain = MarkedWord::plain(a.parse_word("a").unwrap());
        let e = Context::empty();
        let w = embed_marked(&plain, &e, &e).unwrap();
        assert_eq!(a.extended(&e).render(&w.0), "a");
        assert_eq!(w.0, vec![0]);

        let xz = Context::new(["x", "z"]).unwrap();
        let mw = MarkedWord::new(a.parse_word("aba").unwrap(), vec![1, 1]).unwrap();
        let w = embed_marked(&mw, &xz, &xz).unwrap();
        assert_eq!(a.extended(&xz).render(&w.0), "a{x,z}b{}a{}");
        assert_eq!(unembed(&w, &xz), Some(mw));

        assert!(embed_marked(&MarkedWord::plain(Word::empty()), &x, &Context::empty()).is_err());
    }

    #[test]
    fn classify_examples() {
        let ext = ab().extended(&Context::single("x"));
        let c = |s: &str| classify(&ext.parse_word(s).unwrap());
        assert_eq!(c("a{}b{}"), MarkClass::Plain);
        assert_eq!(c("a{}b{x}"), MarkClass::Marked);
        assert_eq!(c("a{x}b{x}"), MarkClass::Zero);
        assert_eq!(c(""), MarkClass::Plain);
    }

    #[test]
    fn marked_word_render_parse() {
        let a = ab();
        let ctx = Context::new(["x", "y"]).unwrap();
        let mw = MarkedWord::parse("abb[x=2,y=3]", &a, &ctx).unwrap();
        assert_eq!(mw.marks, vec![2, 3]);
        assert_eq!(mw.render(&a, &ctx), "abb[x=2,y=3]");
        assert!(MarkedWord::parse("ab[x=3,y=1]", &a, &ctx).is_err());
        assert!(MarkedWord::parse("ab[x=1]", &a, &ctx).is_err());
    }

    #[test]
    fn bounded_quotients() {
        let a = ab();
        let l = Language::Bounded(
            BoundedLanguage::new(a.clone(), 2, [vec![0, 1], vec![1, 0]]).unwrap(),
        );
        let q = l.left_quotient(&a.parse_word("a").unwrap());
        let Language::Bounded(b) = &q else { panic!() };
        assert_eq!(b.bound, 1);
        assert_eq!(b.words.iter().cloned().collect::<Vec<_>>(), vec![vec![1]]);
        assert_eq!(l.left_quotient(&Word::empty()), l);
        let under = l.left_quotient(&a.parse_word("aaa").unwrap());
        assert_eq!(under.bound(), Some(0));
        assert!(under.to_bounded(0).words.is_empty());
    }

    #[test]
    fn word_file() {
        let (a, ws) = parse_word_file("# demo\nalphabet a b\nab\n\nba\n").unwrap();
        assert_eq!(a, ab());
        assert_eq!(ws.len(), 2);
        assert_eq!(ws[1].0, vec![1, 0]);
    }

    #[test]
    fn context_union() {
        let x = Context::single("x");
        assert!(x.disjoint_union(&x).is_err());
        assert!(Context::new(["x", "x"]).is_err());
        assert_eq!(x.with("y").unwrap().vars(), ["x", "y"]);
    }
}
