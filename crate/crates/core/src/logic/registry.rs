use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Deserialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::logic::formula::Formula;
use crate::regular::{Dfa, FinMonoid};
use crate::words::{Alphabet, Context};

/// A quantifier presented by a monoid: the bit string `b₁…bₙ` is accepted iff
/// `β(b₁)⋯β(bₙ) ∈ F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidQuantifier {
    pub monoid: FinMonoid,
    /// `β(0)`.
    pub zero: usize,
    /// `β(1)`.
    pub one: usize,
    pub accepting: Vec<bool>,
    /// Per element: the acceptance outcome if it no longer depends on the
    /// remaining bits.
    decided: Vec<Option<bool>>,
}

impl MonoidQuantifier {
    pub fn new(monoid: FinMonoid, zero: usize, one: usize, accepting: Vec<bool>) -> Result<Self> {
        let n = monoid.size();
        if zero >= n || one >= n || accepting.len() != n {
            return Err(Error::InvalidMonoid("quantifier images out of range".into()));
        }
        let reach = monoid.generated(&[zero, one]);
        let decided = (0..n)
            .map(|e| {
                let first = accepting[monoid.mul(e, reach[0])];
                reach
                    .iter()
                    .all(|&r| accepting[monoid.mul(e, r)] == first)
                    .then_some(first)
            })
            .collect();
        Ok(MonoidQuantifier {
            monoid,
            zero,
            one,
            accepting,
            decided,
        })
    }

    pub fn image(&self, bit: bool) -> usize {
        if bit {
            self.one
        } else {
            self.zero
        }
    }

    pub fn accepts_element(&self, e: usize) -> bool {
        self.accepting[e]
    }

    pub(crate) fn decided(&self, e: usize) -> Option<bool> {
        self.decided[e]
    }
}

type BitOracle = Arc<dyn Fn(&[bool]) -> bool + Send + Sync>;

/// How a quantifier turns the bit string of pointwise truth values into a
/// truth value.
#[derive(Clone)]
pub enum Presentation {
    Monoid(MonoidQuantifier),
    Oracle(BitOracle),
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Presentation::Monoid(m) => f.debug_tuple("Monoid").field(m).finish(),
            Presentation::Oracle(_) => f.write_str("Oracle"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Quantifier {
    pub name: String,
    pub presentation: Presentation,
}

impl Quantifier {
    pub fn monoid(name: &str, m: MonoidQuantifier) -> Quantifier {
        Quantifier {
            name: name.to_string(),
            presentation: Presentation::Monoid(m),
        }
    }

    pub fn oracle(name: &str, f: impl Fn(&[bool]) -> bool + Send + Sync + 'static) -> Quantifier {
        Quantifier {
            name: name.to_string(),
            presentation: Presentation::Oracle(Arc::new(f)),
        }
    }

    /// `∃`: `({0,1}, max)`, accepting `{1}`.
    pub fn exists() -> Quantifier {
        let m = MonoidQuantifier::new(FinMonoid::boolean_or(), 0, 1, vec![false, true])
            .expect("valid presentation");
        Quantifier::monoid("E", m)
    }

    /// `∃!`: `{0, 1, ≥2}` under saturating addition, accepting `{1}`.
    pub fn exists_unique() -> Quantifier {
        let s = FinMonoid::saturating(2).expect("valid table");
        let m = MonoidQuantifier::new(s, 0, 1, vec![false, true, false]).expect("valid presentation");
        Quantifier::monoid("E1", m)
    }

    /// Number of ones congruent to `r` modulo `q`: `ℤ_q`, accepting `{r}`.
    pub fn modular(q: usize, r: usize) -> Result<Quantifier> {
        if q == 0 || r >= q {
            return Err(Error::UnknownQuantifier(format!("mod[{q},{r}]")));
        }
        let z = FinMonoid::cyclic(q)?;
        let m = MonoidQuantifier::new(z, 0, 1 % q, (0..q).map(|i| i == r).collect())?;
        Ok(Quantifier::monoid(&format!("mod[{q},{r}]"), m))
    }

    /// Strictly more ones than zeros.
    pub fn majority() -> Quantifier {
        Quantifier::oracle("maj", |bits| {
            let ones = bits.iter().filter(|&&b| b).count();
            2 * ones > bits.len()
        })
    }

    pub fn as_monoid(&self) -> Option<&MonoidQuantifier> {
        match &self.presentation {
            Presentation::Monoid(m) => Some(m),
            Presentation::Oracle(_) => None,
        }
    }

    pub fn eval(&self, bits: &[bool]) -> bool {
        match &self.presentation {
            Presentation::Monoid(m) => {
                let e = m
                    .monoid
                    .product(bits.iter().map(|&b| m.image(b)));
                m.accepting[e]
            }
            Presentation::Oracle(f) => f(bits),
        }
    }
}

type PosOracle = Arc<dyn Fn(&[usize], usize) -> bool + Send + Sync>;

/// A `k`-ary numerical predicate. The oracle receives the 1-based argument
/// positions and the length of the word. The optional regular presentation
/// is an automaton over the markings `2^k` (argument `i` at bit `k-1-i`)
/// accepting exactly the valid markings that satisfy the predicate.
#[derive(Clone)]
pub struct NumPred {
    pub name: String,
    pub arity: usize,
    oracle: PosOracle,
    regular: Option<Dfa>,
}

impl fmt::Debug for NumPred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumPred")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("regular", &self.regular.is_some())
            .finish()
    }
}

/// Letters of the marking alphabet for `k` arguments.
pub fn marking_alphabet(k: usize) -> Alphabet {
    let args = Context::new((0..k).map(|i| format!("#{i}"))).expect("distinct");
    Alphabet::new(["_"]).expect("valid").extended(&args)
}

/// Automaton over markings from a step function on a small state. The step
/// returns `None` to reject; `seen` bits of doubly marked arguments are
/// checked here.
fn marking_dfa<S: Clone + Eq + std::hash::Hash>(
    k: usize,
    start: S,
    step: impl Fn(&S, usize, usize) -> Option<S>,
    accept: impl Fn(&S) -> bool,
) -> Dfa {
    let full = (1usize << k) - 1;
    Dfa::explore(
        &marking_alphabet(k),
        Some((start, 0usize)),
        |st, m| {
            let (s, seen) = st.as_ref()?;
            if seen & m != 0 {
                return None;
            }
            step(s, m, *seen).map(|t| (t, seen | m))
        },
        |st| matches!(st, Some((s, seen)) if *seen == full && accept(s)),
        &Caps::default(),
        "predicate automaton",
    )
    .expect("small automaton")
}

impl NumPred {
    pub fn new(
        name: &str,
        arity: usize,
        oracle: impl Fn(&[usize], usize) -> bool + Send + Sync + 'static,
        regular: Option<Dfa>,
    ) -> Result<NumPred> {
        if let Some(d) = &regular {
            if d.alphabet() != &marking_alphabet(arity) {
                return Err(Error::AlphabetMismatch(format!(
                    "presentation of `{name}` is not over the {arity}-marking alphabet"
                )));
            }
        }
        Ok(NumPred {
            name: name.to_string(),
            arity,
            oracle: Arc::new(oracle),
            regular,
        })
    }

    pub fn holds(&self, args: &[usize], len: usize) -> bool {
        (self.oracle)(args, len)
    }

    pub fn regular(&self) -> Option<&Dfa> {
        self.regular.as_ref()
    }

    /// `x < y`.
    pub fn less() -> NumPred {
        // state: 0 = nothing, 1 = x seen
        let d = marking_dfa(2, (), |_, m, seen| match m {
            0 => Some(()),
            2 => Some(()),
            1 if seen & 2 != 0 => Some(()),
            _ => None,
        }, |_| true);
        NumPred::new("<", 2, |a, _| a[0] < a[1], Some(d)).expect("valid")
    }

    /// `x = y`.
    pub fn equal() -> NumPred {
        let d = marking_dfa(2, (), |_, m, _| (m == 0 || m == 3).then_some(()), |_| true);
        NumPred::new("=", 2, |a, _| a[0] == a[1], Some(d)).expect("valid")
    }

    /// `y = x + 1`.
    pub fn successor() -> NumPred {
        // state: whether the previous letter carried x
        let d = marking_dfa(
            2,
            false,
            |&prev, m, _| match m {
                0 => Some(false),
                2 => Some(true),
                1 if prev => Some(false),
                _ => None,
            },
            |_| true,
        );
        NumPred::new("succ", 2, |a, _| a[1] == a[0] + 1, Some(d)).expect("valid")
    }

    /// `x = 1`.
    pub fn first() -> NumPred {
        let d = marking_dfa(1, false, |&started, m, _| (m == 0 || !started).then_some(true), |_| true);
        NumPred::new("first", 1, |a, _| a[0] == 1, Some(d)).expect("valid")
    }

    /// `x = |w|`.
    pub fn last() -> NumPred {
        let d = marking_dfa(1, false, |_, m, _| Some(m == 1), |&at_end| at_end);
        NumPred::new("last", 1, |a, n| a[0] == n, Some(d)).expect("valid")
    }

    /// `x ≡ r (mod q)`.
    pub fn position_mod(q: usize, r: usize) -> Result<NumPred> {
        if q == 0 || r >= q {
            return Err(Error::UnknownPredicate(format!("posmod[{q},{r}]")));
        }
        let d = marking_dfa(
            1,
            0usize,
            move |&p, m, _| {
                let here = (p + 1) % q;
                (m == 0 || here == r).then_some(here)
            },
            |_| true,
        );
        NumPred::new(&format!("posmod[{q},{r}]"), 1, move |a, _| a[0] % q == r, Some(d))
    }

    /// A predicate given by a finite tuple list. Tuples with an entry larger
    /// than every listed entry are excluded when `excluded_beyond` holds and
    /// included otherwise.
    pub fn finite(name: &str, arity: usize, tuples: &[Vec<usize>], excluded_beyond: bool) -> Result<NumPred> {
        if let Some(t) = tuples.iter().find(|t| t.len() != arity || t.contains(&0)) {
            return Err(Error::Invalid(format!("bad tuple {t:?} for `{name}`")));
        }
        let set: BTreeSet<Vec<usize>> = tuples.iter().cloned().collect();
        let max = set.iter().flatten().copied().max().unwrap_or(0);
        let set2 = set.clone();
        let oracle = move |a: &[usize], _: usize| {
            if a.iter().any(|&p| p > max) {
                !excluded_beyond
            } else {
                set2.contains(a)
            }
        };
        // state: position capped at max+1, recorded positions capped likewise
        let d = marking_dfa(
            arity,
            (0usize, vec![0usize; arity]),
            move |(p, marks), m, _| {
                let here = (p + 1).min(max + 1);
                let mut marks = marks.clone();
                for (i, slot) in marks.iter_mut().enumerate() {
                    if m & (1 << (arity - 1 - i)) != 0 {
                        *slot = here;
                    }
                }
                Some((here, marks))
            },
            move |(_, marks)| {
                if marks.iter().any(|&p| p > max) {
                    !excluded_beyond
                } else {
                    set.contains(marks)
                }
            },
        );
        NumPred::new(name, arity, oracle, Some(d))
    }
}

/// Named quantifiers and numerical predicates. `mod[q,r]` and `posmod[q,r]`
/// resolve for every modulus.
#[derive(Debug, Clone)]
pub struct Registry {
    quantifiers: BTreeMap<String, Arc<Quantifier>>,
    predicates: BTreeMap<String, Arc<NumPred>>,
}

fn bracket_args(name: &str, prefix: &str) -> Option<(usize, usize)> {
    let inner = name.strip_prefix(prefix)?.strip_prefix('[')?.strip_suffix(']')?;
    let (q, r) = inner.split_once(',')?;
    Some((q.trim().parse().ok()?, r.trim().parse().ok()?))
}

impl Default for Registry {
    fn default() -> Self {
        Registry::standard()
    }
}

#[derive(Deserialize)]
struct RegistryJson {
    #[serde(default)]
    quantifiers: Vec<QuantifierJson>,
    #[serde(default)]
    predicates: Vec<PredicateJson>,
}

#[derive(Deserialize)]
struct QuantifierJson {
    name: String,
    table: Vec<Vec<usize>>,
    identity: usize,
    zero: usize,
    one: usize,
    accepting: Vec<usize>,
}

#[derive(Deserialize)]
struct PredicateJson {
    name: String,
    arity: usize,
    tuples: Vec<Vec<usize>>,
    #[serde(default = "yes")]
    excluded_beyond: bool,
}

fn yes() -> bool {
    true
}

impl Registry {
    /// No quantifiers, no predicates.
    pub fn empty() -> Registry {
        Registry {
            quantifiers: BTreeMap::new(),
            predicates: BTreeMap::new(),
        }
    }

    /// `E`, `E1`, `maj`, `mod[q,r]`; `<`, `=`, `succ`, `first`, `last`,
    /// `posmod[q,r]`.
    pub fn standard() -> Registry {
        let mut r = Registry::empty();
        r.add_quantifier(Quantifier::exists());
        r.add_quantifier(Quantifier::exists_unique());
        r.add_quantifier(Quantifier::majority());
        for p in [
            NumPred::less(),
            NumPred::equal(),
            NumPred::successor(),
            NumPred::first(),
            NumPred::last(),
        ] {
            r.add_predicate(p);
        }
        r
    }

    /// Adds the declarations of a registry file to `self`.
    pub fn load_json(&mut self, text: &str) -> Result<()> {
        let j: RegistryJson =
            serde_json::from_str(text).map_err(|e| Error::Invalid(format!("registry file: {e}")))?;
        for q in j.quantifiers {
            let n = q.table.len();
            let monoid = FinMonoid::new(q.table, q.identity)?;
            let mut acc = vec![false; n];
            for a in q.accepting {
                *acc.get_mut(a)
                    .ok_or_else(|| Error::InvalidMonoid("accepting element out of range".into()))? = true;
            }
            let m = MonoidQuantifier::new(monoid, q.zero, q.one, acc)?;
            self.add_quantifier(Quantifier::monoid(&q.name, m));
        }
        for p in j.predicates {
            self.add_predicate(NumPred::finite(&p.name, p.arity, &p.tuples, p.excluded_beyond)?);
        }
        Ok(())
    }

    pub fn add_quantifier(&mut self, q: Quantifier) {
        self.quantifiers.insert(q.name.clone(), Arc::new(q));
    }

    pub fn add_predicate(&mut self, p: NumPred) {
        self.predicates.insert(p.name.clone(), Arc::new(p));
    }

    pub fn remove_quantifier(&mut self, name: &str) {
        self.quantifiers.remove(name);
    }

    pub fn remove_predicate(&mut self, name: &str) {
        self.predicates.remove(name);
    }

    pub fn quantifier(&self, name: &str) -> Result<Arc<Quantifier>> {
        if let Some(q) = self.quantifiers.get(name) {
            return Ok(Arc::clone(q));
        }
        if let Some((q, r)) = bracket_args(name, "mod") {
            return Quantifier::modular(q, r).map(Arc::new);
        }
        Err(Error::UnknownQuantifier(name.to_string()))
    }

    pub fn predicate(&self, name: &str) -> Result<Arc<NumPred>> {
        if let Some(p) = self.predicates.get(name) {
            return Ok(Arc::clone(p));
        }
        if let Some((q, r)) = bracket_args(name, "posmod") {
            return NumPred::position_mod(q, r).map(Arc::new);
        }
        Err(Error::UnknownPredicate(name.to_string()))
    }

    pub fn has_quantifier(&self, name: &str) -> bool {
        self.quantifier(name).is_ok()
    }

    pub fn has_predicate(&self, name: &str) -> bool {
        self.predicate(name).is_ok()
    }

    /// Checks that every quantifier and predicate resolves with the right
    /// arity.
    pub fn check(&self, f: &Formula) -> Result<()> {
        let mut result = Ok(());
        f.visit(&mut |g| {
            if result.is_err() {
                return;
            }
            result = match g {
                Formula::Quant { q, .. } => self.quantifier(q).map(|_| ()),
                Formula::Num { name, args } => self.predicate(name).and_then(|p| {
                    if p.arity == args.len() {
                        Ok(())
                    } else {
                        Err(Error::Arity {
                            name: name.clone(),
                            expected: p.arity,
                            got: args.len(),
                        })
                    }
                }),
                _ => Ok(()),
            };
        });
        result
    }
}
