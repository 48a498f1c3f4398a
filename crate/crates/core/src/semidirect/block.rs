//! The block-product recognizer of one quantifier layer, and the formula to
//! automaton compiler built on it.

use serde::Serialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::logic::{Formula, Quantifier, Registry};
use crate::regular::{syntactic_stamp, Dfa, FinMonoid, Stamp};
use crate::words::{Alphabet, Context};

/// Size statistics of a block-product construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockStats {
    /// `|M0|`, the submonoid generated by the unmarked letters.
    pub m0: usize,
    /// `|N|`.
    pub n: usize,
    /// `|N|^(|M0|²)·|M0|` when it fits in a `usize`.
    pub state_bound: Option<usize>,
    /// Reachable states before minimization.
    pub reachable: usize,
    /// States of the minimal automaton.
    pub states: usize,
}

/// `|N|^(k²)·k`, or `None` on overflow.
pub fn block_state_bound(n: usize, k: usize) -> Option<usize> {
    n.checked_pow(u32::try_from(k.checked_mul(k)?).ok()?)?.checked_mul(k)
}

/// The automaton over `B` accepting `w = b₁…bₙ` iff
/// `cls(μ(w,1))·…·cls(μ(w,n)) ∈ accept`, where `(w,i)` is `w` over `B × 2`
/// with only position `i` marked.
///
/// `stamp` is over `B × 2` with letter `(b, bit)` at index `2b + bit`, and
/// `cls` maps elements of its monoid into `n`.
pub fn block_product(
    base: &Alphabet,
    stamp: &Stamp,
    cls: &[usize],
    n: &FinMonoid,
    accept: &[bool],
    caps: &Caps,
) -> Result<(Dfa, BlockStats)> {
    let k = base.len();
    if stamp.alphabet().len() != 2 * k {
        return Err(Error::AlphabetMismatch("stamp is not over B × 2".into()));
    }
    let m = stamp.monoid();
    if cls.len() != m.size() || accept.len() != n.size() || cls.iter().any(|&c| c >= n.size()) {
        return Err(Error::Invalid("classification tables have the wrong size".into()));
    }
    let unmarked: Vec<usize> = (0..k).map(|b| stamp.image(2 * b)).collect();
    let m0 = m.generated(&unmarked);
    let s = m0.len();
    let mut pos = vec![usize::MAX; m.size()];
    for (i, &e) in m0.iter().enumerate() {
        pos[e] = i;
    }
    let mul0: Vec<usize> = (0..s * s).map(|ij| pos[m.mul(m0[ij / s], m0[ij % s])]).collect();
    let letter0: Vec<usize> = unmarked.iter().map(|&e| pos[e]).collect();
    // F_b(l, r) = cls(l · μ(b,1) · r)
    let fb: Vec<Vec<u16>> = (0..k)
        .map(|b| {
            let marked = stamp.image(2 * b + 1);
            (0..s * s)
                .map(|lr| {
                    let (l, r) = (m0[lr / s], m0[lr % s]);
                    cls[m.mul(m.mul(l, marked), r)] as u16
                })
                .collect()
        })
        .collect();
    let ident_n = n.identity() as u16;
    let start = (vec![ident_n; s * s], 0usize);
    let mut reachable = 0usize;
    let dfa = Dfa::explore(
        base,
        start,
        |(f, mm), b| {
            reachable += 1;
            let mb = letter0[b];
            let table = &fb[b];
            let h: Vec<u16> = (0..s * s)
                .map(|lr| {
                    let (l, r) = (lr / s, lr % s);
                    let left = f[l * s + mul0[mb * s + r]] as usize;
                    let right = table[mul0[l * s + mm] * s + r] as usize;
                    n.mul(left, right) as u16
                })
                .collect();
            (h, mul0[mm * s + mb])
        },
        |(f, _)| accept[f[0] as usize],
        caps,
        "block product",
    )?;
    let stats = BlockStats {
        m0: s,
        n: n.size(),
        state_bound: block_state_bound(n.size(), s),
        reachable: reachable / k.max(1),
        states: dfa.n_states(),
    };
    Ok((dfa, stats))
}

/// Words over `A × 2^ctx` in which every variable of `ctx` marks exactly one
/// position.
pub fn validity_dfa(alphabet: &Alphabet, ctx: &Context, caps: &Caps) -> Result<Dfa> {
    let kk = ctx.len();
    let full = (1usize << kk) - 1;
    Dfa::explore(
        &alphabet.extended(ctx),
        Some(0usize),
        |st, l| {
            let seen = (*st)?;
            let (_, mask) = Alphabet::split_extended(l, kk);
            (seen & mask == 0).then_some(seen | mask)
        },
        |st| *st == Some(full),
        caps,
        "validity automaton",
    )
}

fn fresh_var(avoid: &Context, f: &Formula) -> String {
    let used = f.all_vars();
    (0..)
        .map(|i| format!("v{i}"))
        .find(|v| !avoid.contains(v) && !used.contains(v))
        .expect("infinitely many names")
}

/// An automaton over `A × 2^ctx` that agrees with `φ` on every validly
/// marked word (the embedding of a marked word in context `ctx`). Behaviour
/// on other words is unspecified.
pub fn compile_formula(
    f: &Formula,
    alphabet: &Alphabet,
    ctx: &Context,
    registry: &Registry,
    caps: &Caps,
) -> Result<Dfa> {
    if let Some(v) = f.free_vars().into_iter().find(|v| !ctx.contains(v)) {
        return Err(Error::UnboundVariable(v));
    }
    let ext = alphabet.extended(ctx);
    let kk = ctx.len();
    Ok(match f {
        Formula::True => Dfa::universal(&ext),
        Formula::False => Dfa::empty(&ext),
        Formula::Letter { symbol, var } => {
            let a = alphabet.require(symbol)?;
            let bit = ctx.bit(ctx.index_of(var).expect("checked"));
            Dfa::contains_letter(&ext, |l| {
                let (base, mask) = Alphabet::split_extended(l, kk);
                base == a && mask & bit != 0
            })
        }
        Formula::Num { name, args } => {
            let pred = registry.predicate(name)?;
            if pred.arity != args.len() {
                return Err(Error::Arity {
                    name: name.clone(),
                    expected: pred.arity,
                    got: args.len(),
                });
            }
            let d = pred.regular().ok_or_else(|| {
                Error::NotCompilable(format!("predicate `{name}` has no regular presentation"))
            })?;
            let bits: Vec<usize> = args
                .iter()
                .map(|v| ctx.bit(ctx.index_of(v).expect("checked")))
                .collect();
            let ar = args.len();
            let map: Vec<usize> = (0..ext.len())
                .map(|l| {
                    let (_, mask) = Alphabet::split_extended(l, kk);
                    bits.iter()
                        .enumerate()
                        .filter(|(_, &b)| mask & b != 0)
                        .map(|(i, _)| 1 << (ar - 1 - i))
                        .sum()
                })
                .collect();
            d.lp_preimage(&ext, &map)?
        }
        Formula::Not(a) => compile_formula(a, alphabet, ctx, registry, caps)?.complement(),
        Formula::And(a, b) => compile_formula(a, alphabet, ctx, registry, caps)?.product(
            &compile_formula(b, alphabet, ctx, registry, caps)?,
            |x, y| x && y,
            caps,
        )?,
        Formula::Or(a, b) => compile_formula(a, alphabet, ctx, registry, caps)?.product(
            &compile_formula(b, alphabet, ctx, registry, caps)?,
            |x, y| x || y,
            caps,
        )?,
        Formula::Quant { q, var, body } => {
            let q = registry.quantifier(q)?;
            compile_layer(&q, var, body, alphabet, ctx, registry, caps)?.0
        }
    })
}

/// The automaton over `A × 2^ctx` for `Q var. body`, built as a block
/// product over the syntactic stamp of `body`. Fails with
/// [`Error::NotCompilable`] for quantifiers without a monoid presentation.
pub fn compile_layer(
    q: &Quantifier,
    var: &str,
    body: &Formula,
    alphabet: &Alphabet,
    ctx: &Context,
    registry: &Registry,
    caps: &Caps,
) -> Result<(Dfa, BlockStats)> {
    let mq = q.as_monoid().ok_or_else(|| {
        Error::NotCompilable(format!("quantifier `{}` has no monoid presentation", q.name))
    })?;
    let (var, body) = if ctx.contains(var) {
        let z = fresh_var(ctx, body);
        (z.clone(), body.rename_free(var, &z))
    } else {
        (var.to_string(), body.clone())
    };
    let inner_ctx = ctx.with(&var)?;
    let inner = compile_formula(&body, alphabet, &inner_ctx, registry, caps)?;
    let stamp = syntactic_stamp(&inner, caps)?;
    let cls: Vec<usize> = stamp.accepting()[0].iter().map(|&t| mq.image(t)).collect();
    block_product(&alphabet.extended(ctx), &stamp, &cls, &mq.monoid, &mq.accepting, caps)
}

/// The exact set of embedded models of `φ` in context `ctx`.
pub fn compile_models_dfa(
    f: &Formula,
    alphabet: &Alphabet,
    ctx: &Context,
    registry: &Registry,
    caps: &Caps,
) -> Result<Dfa> {
    let d = compile_formula(f, alphabet, ctx, registry, caps)?;
    if ctx.is_empty() {
        return Ok(d);
    }
    d.product(&validity_dfa(alphabet, ctx, caps)?, |x, y| x && y, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finba::Carrier;
    use crate::logic::{models_in, parse};
    use crate::words::embed_marked;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    fn agrees(src: &str, ctx: &Context, bound: usize) {
        let f = parse(src).unwrap();
        let reg = Registry::standard();
        let d = compile_models_dfa(&f, &ab(), ctx, &reg, &Caps::default()).unwrap();
        let carrier = Carrier::new(&ab(), ctx, bound);
        let models = models_in(&carrier, &f, &reg).unwrap();
        for (i, p) in carrier.points().iter().enumerate() {
            let w = embed_marked(p, ctx, ctx).unwrap();
            assert_eq!(d.accepts(&w.0), models.contains(i), "{src} on {}", carrier.render(i));
        }
        // nothing outside the image of the embedding
        let ext = ab().extended(ctx);
        let valid = validity_dfa(&ab(), ctx, &Caps::default()).unwrap();
        assert!(d.is_subset_of(&valid).unwrap());
        assert_eq!(ext.len(), d.alphabet().len());
    }

    #[test]
    fn contains_a_is_two_states() {
        let f = parse("E x. P[a](x)").unwrap();
        let d = compile_models_dfa(&f, &ab(), &Context::empty(), &Registry::standard(), &Caps::default()).unwrap();
        assert!(d.equivalent(&Dfa::contains_letter(&ab(), |l| l == 0)));
        assert_eq!(d.n_states(), 2);
    }

    #[test]
    fn parity_of_a() {
        let f = parse("mod[2,0] x. P[a](x)").unwrap();
        let d = compile_models_dfa(&f, &ab(), &Context::empty(), &Registry::standard(), &Caps::default()).unwrap();
        assert!(d.equivalent(&Dfa::count_mod(&ab(), |l| l == 0, 2, 0)));
    }

    #[test]
    fn length_filter() {
        let reg = Registry::standard();
        for q in ["E", "E1", "mod[3,1]"] {
            let f = parse(&format!("{q} x. true")).unwrap();
            let d = compile_models_dfa(&f, &ab(), &Context::empty(), &reg, &Caps::default()).unwrap();
            let quant = reg.quantifier(q).unwrap();
            for w in ab().words_up_to(8) {
                assert_eq!(d.accepts(&w), quant.eval(&vec![true; w.len()]), "{q}");
            }
        }
    }

    #[test]
    fn agrees_with_semantics() {
        let x = Context::single("x");
        let xy = Context::new(["x", "y"]).unwrap();
        agrees("P[a](x)", &x, 4);
        agrees("E y. x<y & P[b](y)", &x, 5);
        agrees("E1 y. R[succ](x,y) | y=x", &x, 5);
        agrees("~(P[a](x) & x<y) | R[last](y)", &xy, 4);
        agrees("E x. E y. x<y & P[a](x) & P[b](y)", &Context::empty(), 6);
        agrees("mod[2,1] y. (E z. z<y & P[a](z))", &Context::empty(), 6);
        agrees("E x. R[posmod[2,0]](x) & P[b](x)", &Context::empty(), 6);
    }

    #[test]
    fn shadowed_context_variable() {
        // the bound x is unrelated to the context x
        let x = Context::single("x");
        agrees("P[a](x) & (E y. P[b](y))", &x, 4);
        let f = Formula::and(Formula::letter("a", "x"), Formula::exists("x", Formula::letter("b", "x")));
        let reg = Registry::standard();
        let d = compile_models_dfa(&f, &ab(), &x, &reg, &Caps::default()).unwrap();
        let carrier = Carrier::new(&ab(), &x, 4);
        let c = crate::logic::Compiled::new(&f, &ab(), &x, &reg).unwrap();
        for p in carrier.points() {
            assert_eq!(d.accepts(&embed_marked(p, &x, &x).unwrap().0), c.eval_marked(p));
        }
    }

    #[test]
    fn majority_is_not_compilable() {
        let f = parse("maj x. P[a](x)").unwrap();
        let err = compile_models_dfa(&f, &ab(), &Context::empty(), &Registry::standard(), &Caps::default());
        assert!(matches!(err, Err(Error::NotCompilable(_))));
    }

    #[test]
    fn bound_formula() {
        assert_eq!(block_state_bound(2, 1), Some(2));
        assert_eq!(block_state_bound(2, 2), Some(32));
        assert_eq!(block_state_bound(2, 100), None);
    }
}
