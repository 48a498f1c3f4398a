use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::finba::Carrier;
use crate::logic::formula::Formula;
use crate::logic::registry::{Presentation, Quantifier, Registry, NumPred};
use crate::words::{Alphabet, Context, MarkedWord};

#[derive(Debug, Clone)]
enum Node {
    True,
    False,
    Letter { letter: usize, slot: usize },
    Num { pred: Arc<NumPred>, slots: Vec<usize> },
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Quant { q: Arc<Quantifier>, slot: usize, body: Box<Node> },
}

/// A formula resolved against an alphabet, a context and a registry, ready
/// for repeated evaluation. Context variables occupy the first slots.
#[derive(Debug, Clone)]
pub struct Compiled {
    node: Node,
    n_free: usize,
    n_slots: usize,
}

impl Compiled {
    pub fn new(f: &Formula, alphabet: &Alphabet, ctx: &Context, registry: &Registry) -> Result<Compiled> {
        if let Some(v) = f.free_vars().into_iter().find(|v| !ctx.contains(v)) {
            return Err(Error::UnboundVariable(v));
        }
        let mut scope: Vec<(String, usize)> = ctx
            .vars()
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut n_slots = ctx.len();
        let node = build(f, alphabet, registry, &mut scope, &mut n_slots)?;
        Ok(Compiled {
            node,
            n_free: ctx.len(),
            n_slots,
        })
    }

    /// Truth value on a word with 1-based marks aligned with the context.
    pub fn eval(&self, word: &[usize], marks: &[usize]) -> bool {
        debug_assert_eq!(marks.len(), self.n_free);
        let mut assign = vec![0usize; self.n_slots];
        assign[..marks.len()].copy_from_slice(marks);
        eval(&self.node, word, &mut assign)
    }

    pub fn eval_marked(&self, mw: &MarkedWord) -> bool {
        self.eval(&mw.word.0, &mw.marks)
    }
}

fn lookup(scope: &[(String, usize)], v: &str) -> Result<usize> {
    scope
        .iter()
        .rev()
        .find(|(n, _)| n == v)
        .map(|&(_, s)| s)
        .ok_or_else(|| Error::UnboundVariable(v.to_string()))
}

fn build(
    f: &Formula,
    alphabet: &Alphabet,
    registry: &Registry,
    scope: &mut Vec<(String, usize)>,
    n_slots: &mut usize,
) -> Result<Node> {
    Ok(match f {
        Formula::True => Node::True,
        Formula::False => Node::False,
        Formula::Letter { symbol, var } => Node::Letter {
            letter: alphabet.require(symbol)?,
            slot: lookup(scope, var)?,
        },
        Formula::Num { name, args } => {
            let pred = registry.predicate(name)?;
            if pred.arity != args.len() {
                return Err(Error::Arity {
                    name: name.clone(),
                    expected: pred.arity,
                    got: args.len(),
                });
            }
            let slots = args.iter().map(|a| lookup(scope, a)).collect::<Result<_>>()?;
            Node::Num { pred, slots }
        }
        Formula::Not(a) => Node::Not(Box::new(build(a, alphabet, registry, scope, n_slots)?)),
        Formula::And(a, b) => Node::And(
            Box::new(build(a, alphabet, registry, scope, n_slots)?),
            Box::new(build(b, alphabet, registry, scope, n_slots)?),
        ),
        Formula::Or(a, b) => Node::Or(
            Box::new(build(a, alphabet, registry, scope, n_slots)?),
            Box::new(build(b, alphabet, registry, scope, n_slots)?),
        ),
        Formula::Quant { q, var, body } => {
            let q = registry.quantifier(q)?;
            let slot = *n_slots;
            *n_slots += 1;
            scope.push((var.clone(), slot));
            let body = build(body, alphabet, registry, scope, n_slots);
            scope.pop();
            Node::Quant {
                q,
                slot,
                body: Box::new(body?),
            }
        }
    })
}

fn eval(node: &Node, word: &[usize], assign: &mut [usize]) -> bool {
    match node {
        Node::True => true,
        Node::False => false,
        Node::Letter { letter, slot } => word[assign[*slot] - 1] == *letter,
        Node::Num { pred, slots } => {
            let args: Vec<usize> = slots.iter().map(|&s| assign[s]).collect();
            pred.holds(&args, word.len())
        }
        Node::Not(a) => !eval(a, word, assign),
        Node::And(a, b) => eval(a, word, assign) && eval(b, word, assign),
        Node::Or(a, b) => eval(a, word, assign) || eval(b, word, assign),
        Node::Quant { q, slot, body } => match &q.presentation {
            Presentation::Monoid(m) => {
                let mut e = m.monoid.identity();
                for p in 1..=word.len() {
                    if let Some(v) = m.decided(e) {
                        return v;
                    }
                    assign[*slot] = p;
                    e = m.monoid.mul(e, m.image(eval(body, word, assign)));
                }
                m.accepts_element(e)
            }
            Presentation::Oracle(f) => {
                let bits: Vec<bool> = (1..=word.len())
                    .map(|p| {
                        assign[*slot] = p;
                        eval(body, word, assign)
                    })
                    .collect();
                f(&bits)
            }
        },
    }
}

/// `mw ⊨ φ` where the marks of `mw` are aligned with `ctx`.
pub fn satisfies(
    mw: &MarkedWord,
    ctx: &Context,
    f: &Formula,
    alphabet: &Alphabet,
    registry: &Registry,
) -> Result<bool> {
    if mw.marks.len() != ctx.len() {
        return Err(Error::InvalidMarkedWord(format!(
            "{} marks for context {ctx}",
            mw.marks.len()
        )));
    }
    if mw.word.0.iter().any(|&l| l >= alphabet.len()) {
        return Err(Error::AlphabetMismatch("word letter outside the alphabet".into()));
    }
    Ok(Compiled::new(f, alphabet, ctx, registry)?.eval_marked(mw))
}

/// The models of `φ` among the points of `carrier`.
pub fn models_in(carrier: &Carrier, f: &Formula, registry: &Registry) -> Result<FixedBitSet> {
    let c = Compiled::new(f, carrier.alphabet(), carrier.context(), registry)?;
    Ok(models_compiled(carrier, &c))
}

pub(crate) fn models_compiled(carrier: &Carrier, c: &Compiled) -> FixedBitSet {
    let bits: Vec<bool> = carrier
        .points()
        .par_iter()
        .map(|p| c.eval_marked(p))
        .collect();
    let mut s = FixedBitSet::with_capacity(carrier.len());
    for (i, b) in bits.into_iter().enumerate() {
        s.set(i, b);
    }
    s
}

/// `L_φ` up to length `bound`, in carrier order.
pub fn models(
    f: &Formula,
    alphabet: &Alphabet,
    ctx: &Context,
    bound: usize,
    registry: &Registry,
) -> Result<Vec<MarkedWord>> {
    let carrier = Carrier::new(alphabet, ctx, bound);
    let set = models_in(&carrier, f, registry)?;
    Ok(set.ones().map(|i| carrier.point(i).clone()).collect())
}

/// The first marked word up to `bound` on which `φ` and `ψ` differ.
pub fn equiv_witness(
    f: &Formula,
    g: &Formula,
    alphabet: &Alphabet,
    ctx: &Context,
    bound: usize,
    registry: &Registry,
) -> Result<Option<MarkedWord>> {
    let carrier = Carrier::new(alphabet, ctx, bound);
    let a = models_in(&carrier, f, registry)?;
    let b = models_in(&carrier, g, registry)?;
    Ok(a.symmetric_difference(&b).next().map(|i| carrier.point(i).clone()))
}

/// Bounded semantic equivalence.
pub fn equiv_bounded(
    f: &Formula,
    g: &Formula,
    alphabet: &Alphabet,
    ctx: &Context,
    bound: usize,
    registry: &Registry,
) -> Result<bool> {
    Ok(equiv_witness(f, g, alphabet, ctx, bound, registry)?.is_none())
}
