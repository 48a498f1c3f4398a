//! Quantifier layers: `Γ_Q`, iterated `Γ_Q ⊙ (−)`, and the algebras of
//! sentences of bounded quantifier depth.

use std::collections::HashSet;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::finba::{Carrier, FinBA};
use crate::logic::{models_in, Formula, Registry};
use crate::report::Report;
use crate::substitution::{gamma_odot, irredundant, DeltaAlgebra, GammaQ};
use crate::varcode::{lift_delta_transported, Codec};
use crate::words::{Alphabet, Context, MarkedWord};

/// `Γ_Q` over any alphabet.
pub fn gamma_q(quantifiers: &[&str]) -> GammaQ {
    GammaQ::new(quantifiers)
}

/// Largest letter class needed for `Q z. ⋁_{a ∈ B} P[a](z)` to be a Boolean
/// combination of generators over smaller classes: `∃` distributes over the
/// union and parities add, and `∃!` over `B` holds iff for some `c ∈ B` it
/// holds over `{c}` and over every pair `{c, d} ⊆ B`.
fn letter_budget(q: &str) -> Option<usize> {
    match q {
        "E" | "mod[2,0]" | "mod[2,1]" => Some(1),
        "E1" => Some(2),
        _ => None,
    }
}

/// A fragment `Q_A[N]` cut at quantifier depth `depth`, computed on words of
/// length at most `bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentSpec {
    pub alphabet: Alphabet,
    pub quantifiers: Vec<String>,
    pub predicates: Vec<String>,
    pub depth: usize,
    pub bound: usize,
}

/// Largest `depth · |A|` accepted.
pub const MAX_DEPTH_TIMES_LETTERS: usize = 8;

impl FragmentSpec {
    pub fn new(alphabet: &Alphabet, quantifiers: &[&str], predicates: &[&str], depth: usize, bound: usize) -> FragmentSpec {
        FragmentSpec {
            alphabet: alphabet.clone(),
            quantifiers: quantifiers.iter().map(|s| s.to_string()).collect(),
            predicates: predicates.iter().map(|s| s.to_string()).collect(),
            depth,
            bound,
        }
    }

    pub fn with_depth(&self, depth: usize) -> FragmentSpec {
        FragmentSpec { depth, ..self.clone() }
    }

    pub fn validate(&self, registry: &Registry) -> Result<()> {
        for q in &self.quantifiers {
            registry.quantifier(q)?;
        }
        for p in &self.predicates {
            registry.predicate(p)?;
        }
        if self.depth * self.alphabet.len() > MAX_DEPTH_TIMES_LETTERS {
            return Err(Error::cap("fragment depth times alphabet size", MAX_DEPTH_TIMES_LETTERS));
        }
        Ok(())
    }

    /// `x_n, …, x_1`: the innermost quantified variable comes last.
    pub fn context(&self) -> Context {
        Context::new((1..=self.depth).rev().map(|i| format!("x{i}"))).expect("distinct names")
    }

    fn quantifier_names(&self) -> Vec<&str> {
        self.quantifiers.iter().map(String::as_str).collect()
    }
}

/// A finite algebra of sentences, with a generating set of formulas.
#[derive(Debug, Clone)]
pub struct Fragment {
    pub ba: FinBA,
    pub generators: Vec<Formula>,
    pub sets: Vec<FixedBitSet>,
    pub report: Report,
}

impl Fragment {
    fn members(&self, set: &FixedBitSet) -> Vec<String> {
        let c = self.ba.carrier();
        let mut out: Vec<String> = set.ones().map(|i| c.render(i)).collect();
        out.sort();
        out
    }

    /// Representative formulas with their member lists, then the atoms.
    pub fn dump(&self) -> Value {
        json!({
            "generators": self
                .generators
                .iter()
                .zip(&self.sets)
                .map(|(f, s)| json!({"formula": f.to_string(), "members": self.members(s)}))
                .collect::<Vec<_>>(),
            "atoms": self.ba.atoms().iter().map(|a| self.members(a)).collect::<Vec<_>>(),
        })
    }
}

/// Atomic formulas over the variables of `ctx`.
fn atomic_formulas(spec: &FragmentSpec, ctx: &Context, registry: &Registry) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    for v in ctx.vars() {
        for a in spec.alphabet.symbols() {
            out.push(Formula::letter(a.as_str(), v.as_str()));
        }
    }
    for name in &spec.predicates {
        let arity = registry.predicate(name)?.arity;
        let k = ctx.len();
        if k == 0 && arity > 0 {
            continue;
        }
        let total = k.pow(arity as u32);
        for code in 0..total {
            let args: Vec<&str> = (0..arity)
                .map(|j| ctx.vars()[(code / k.pow(j as u32)) % k].as_str())
                .collect();
            out.push(Formula::num(name.as_str(), &args));
        }
    }
    Ok(out)
}

/// Model sets of atomic formulas, read directly off the points.
fn atomic_sets(carrier: &Carrier, formulas: &[Formula], registry: &Registry) -> Result<Vec<FixedBitSet>> {
    let ctx = carrier.context();
    formulas
        .iter()
        .map(|f| {
            let test: Box<dyn Fn(&MarkedWord) -> bool> = match f {
                Formula::Letter { symbol, var } => {
                    let a = carrier.alphabet().require(symbol)?;
                    let i = ctx.index_of(var).ok_or_else(|| Error::UnboundVariable(var.clone()))?;
                    Box::new(move |p: &MarkedWord| p.word.0[p.marks[i] - 1] == a)
                }
                Formula::Num { name, args } => {
                    let pred = registry.predicate(name)?;
                    let idx = args
                        .iter()
                        .map(|v| ctx.index_of(v).ok_or_else(|| Error::UnboundVariable(v.clone())))
                        .collect::<Result<Vec<_>>>()?;
                    Box::new(move |p: &MarkedWord| {
                        let pos: Vec<usize> = idx.iter().map(|&i| p.marks[i]).collect();
                        pred.holds(&pos, p.len())
                    })
                }
                other => return Err(Error::Invalid(format!("not atomic: {other}"))),
            };
            Ok(carrier.subset(|p| test(p)))
        })
        .collect()
}

/// The depth-`n` algebra through `n` layer steps: the quantifier-free
/// algebra in all variables, then for each variable from the innermost
/// out, lift along the encoding, apply `Γ_Q ⊙ (−)`, and decode.
pub fn depth_fragment(spec: &FragmentSpec, registry: &Registry, caps: &Caps) -> Result<Fragment> {
    spec.validate(registry)?;
    let ctx = spec.context();
    let mut report = Report::new("depth_fragment")
        .param("alphabet", &spec.alphabet)
        .param("quantifiers", &spec.quantifiers)
        .param("predicates", &spec.predicates)
        .param("depth", spec.depth)
        .param("bound", spec.bound);
    let mut carrier = Carrier::new(&spec.alphabet, &ctx, spec.bound);
    let mut gens = atomic_formulas(spec, &ctx, registry)?;
    let mut sets = gens
        .iter()
        .map(|g| models_in(&carrier, g, registry))
        .collect::<Result<Vec<_>>>()?;
    let names = spec.quantifier_names();
    let budget = names.iter().map(|q| letter_budget(q)).collect::<Option<Vec<_>>>();
    let gamma = match budget.and_then(|b| b.into_iter().max()) {
        Some(k) => gamma_q(&names).with_budget(k),
        None => gamma_q(&names),
    };
    let mut layers = Vec::new();
    for k in 0..spec.depth {
        let var = ctx.vars()[spec.depth - 1 - k].clone();
        let delta = DeltaAlgebra::from_models(&carrier, &var, gens, sets, registry, caps)?;
        let lift = lift_delta_transported(&delta, registry, caps)?;
        let odot = gamma_odot(&gamma, &lift.lifted, registry, caps)?;
        let codec = Codec::new(&spec.alphabet, delta.params(), &Context::empty(), registry)?;
        let (src, dst) = codec.carriers(spec.bound);
        gens = odot
            .images
            .iter()
            .map(|f| codec.decode(f))
            .collect::<Result<Vec<_>>>()?;
        sets = odot.sets.iter().map(|s| codec.pull_back(&src, &dst, s)).collect();
        layers.push(json!({
            "var": var,
            "delta_atoms": delta.n_atoms(),
            "lifted_atoms": lift.lifted.n_atoms(),
            "generators": gens.len(),
        }));
        carrier = src;
    }
    let (generators, sets) = irredundant(carrier.len(), gens, sets);
    let ba = FinBA::generate(&carrier, &sets, caps)?;
    report.stat("layers", layers);
    report.stat("atoms", ba.n_atoms());
    Ok(Fragment {
        ba,
        generators,
        sets,
        report,
    })
}

/// Sets of at most three atoms, in order of size then lexicographically.
fn small_atom_sets(m: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for i in 0..m as u32 {
        out.push(vec![i]);
    }
    for i in 0..m as u32 {
        for j in i + 1..m as u32 {
            out.push(vec![i, j]);
        }
    }
    for i in 0..m as u32 {
        for j in i + 1..m as u32 {
            for l in j + 1..m as u32 {
                out.push(vec![i, j, l]);
            }
        }
    }
    out
}

fn atom_formulas(ba: &FinBA, gens: &[Formula], sets: &[FixedBitSet]) -> Vec<Formula> {
    ba.atoms()
        .iter()
        .map(|atom| {
            let p = atom.ones().next().expect("atoms are nonempty");
            Formula::and_all(gens.iter().zip(sets).map(|(g, s)| {
                if s.contains(p) {
                    g.clone()
                } else {
                    Formula::not(g.clone())
                }
            }))
        })
        .collect()
}

/// Independent computation of the depth-`n` algebra: quantifiers are
/// applied directly to model sets, with bodies ranging over Boolean
/// combinations of at most three atoms of the previous level and the
/// atomic formulas of the current context added at each level.
pub fn depth_direct(spec: &FragmentSpec, registry: &Registry, caps: &Caps) -> Result<Fragment> {
    spec.validate(registry)?;
    let quantifiers = spec
        .quantifiers
        .iter()
        .map(|q| registry.quantifier(q))
        .collect::<Result<Vec<_>>>()?;
    let mut report = Report::new("depth_direct")
        .param("alphabet", &spec.alphabet)
        .param("quantifiers", &spec.quantifiers)
        .param("predicates", &spec.predicates)
        .param("depth", spec.depth)
        .param("bound", spec.bound);
    let mut ctx = spec.context();
    let mut carrier = Carrier::new(&spec.alphabet, &ctx, spec.bound);
    let atomic = atomic_formulas(spec, &ctx, registry)?;
    let atomic_models = atomic_sets(&carrier, &atomic, registry)?;
    let (mut gens, mut sets) = irredundant(carrier.len(), atomic, atomic_models);
    let mut ba = FinBA::generate(&carrier, &sets, caps)?;
    let mut levels = Vec::new();
    for _ in 0..spec.depth {
        let var = ctx.vars().last().expect("one variable per level").clone();
        let target_ctx = ctx.without(&var);
        let target = Carrier::new(&spec.alphabet, &target_ctx, spec.bound);
        let rows: Vec<Vec<u32>> = target
            .points()
            .iter()
            .map(|p| {
                (1..=p.len())
                    .map(|i| {
                        let mut marks = p.marks.clone();
                        marks.push(i);
                        let q = MarkedWord {
                            word: p.word.clone(),
                            marks,
                        };
                        ba.atom_at(carrier.index_of(&q).expect("extension lies in the carrier")) as u32
                    })
                    .collect()
            })
            .collect();
        let bodies = small_atom_sets(ba.n_atoms());
        let limit = caps.monoid * 100;
        if 2 * bodies.len() * quantifiers.len() > limit {
            return Err(Error::cap("direct enumeration of layer bodies", limit));
        }
        let candidates: Vec<(usize, &Vec<u32>, bool)> = (0..quantifiers.len())
            .flat_map(|q| bodies.iter().flat_map(move |b| [(q, b, false), (q, b, true)]))
            .collect();
        let results: Vec<FixedBitSet> = candidates
            .par_iter()
            .map(|&(q, body, neg)| {
                let mut s = FixedBitSet::with_capacity(target.len());
                let mut bits = Vec::new();
                for (i, row) in rows.iter().enumerate() {
                    bits.clear();
                    bits.extend(row.iter().map(|a| body.contains(a) != neg));
                    s.set(i, quantifiers[q].eval(&bits));
                }
                s
            })
            .collect();
        let mut seen: HashSet<FixedBitSet> = HashSet::new();
        let mut next: Vec<Option<(usize, &Vec<u32>, bool)>> = Vec::new();
        let mut next_sets = Vec::new();
        for (c, s) in candidates.iter().zip(results) {
            if seen.insert(s.clone()) {
                next.push(Some(*c));
                next_sets.push(s);
            }
        }
        let atomic = atomic_formulas(spec, &target_ctx, registry)?;
        next_sets.extend(atomic_sets(&target, &atomic, registry)?);
        next.extend(atomic.iter().map(|_| None));
        let (kept, kept_sets) = irredundant(target.len(), (0..next.len()).collect(), next_sets);
        let atom_fs = atom_formulas(&ba, &gens, &sets);
        gens = kept
            .iter()
            .map(|&i| match next[i] {
                Some((q, body, neg)) => {
                    let mut inner = Formula::or_all(body.iter().map(|&a| atom_fs[a as usize].clone()));
                    if neg {
                        inner = Formula::not(inner);
                    }
                    Formula::quant(spec.quantifiers[q].as_str(), var.as_str(), inner)
                }
                None => atomic[i - (next.len() - atomic.len())].clone(),
            })
            .collect();
        sets = kept_sets;
        levels.push(json!({"var": var, "atoms_below": ba.n_atoms(), "candidates": candidates.len(), "distinct": seen.len()}));
        ba = FinBA::generate(&target, &sets, caps)?;
        carrier = target;
        ctx = target_ctx;
        // the recorded formulas must denote the computed sets
        for (g, s) in gens.iter().zip(&sets).take(3) {
            if &models_in(&carrier, g, registry)? != s {
                report.fail(json!({"formula_disagrees": g.to_string()}));
            }
        }
    }
    report.stat("levels", levels);
    report.stat("atoms", ba.n_atoms());
    Ok(Fragment {
        ba,
        generators: gens,
        sets,
        report,
    })
}

/// Compares two algebras over the same carrier atom by atom.
pub fn compare_fragments(name: &str, left: &Fragment, right: &Fragment) -> Report {
    let mut r = Report::new(name)
        .param("left_atoms", left.ba.n_atoms())
        .param("right_atoms", right.ba.n_atoms());
    if left.ba.carrier() != right.ba.carrier() {
        r.fail(json!({"reason": "different carriers"}));
        return r;
    }
    for (side, a, b) in [("left", left, right), ("right", right, left)] {
        if let Some(atom) = a.ba.atoms().iter().find(|s| !b.ba.contains(s)) {
            r.fail(json!({"atom_only_in": side, "members": a.members(atom)}));
        }
    }
    r
}

/// `depth_fragment = depth_direct` at the spec's depth.
pub fn check_depth(spec: &FragmentSpec, registry: &Registry, caps: &Caps) -> Result<Report> {
    let f = depth_fragment(spec, registry, caps)?;
    let d = depth_direct(spec, registry, caps)?;
    let mut r = compare_fragments("depth_fragment_vs_direct", &f, &d)
        .param("quantifiers", &spec.quantifiers)
        .param("predicates", &spec.predicates)
        .param("alphabet", &spec.alphabet)
        .param("depth", spec.depth)
        .param("bound", spec.bound);
    r.absorb(f.report);
    r.absorb(d.report);
    Ok(r)
}

/// The depth-`n` algebra lies inside the depth-`n+1` algebra.
pub fn check_monotone(spec: &FragmentSpec, registry: &Registry, caps: &Caps) -> Result<Report> {
    let lo = depth_fragment(spec, registry, caps)?;
    let hi = depth_fragment(&spec.with_depth(spec.depth + 1), registry, caps)?;
    let mut r = Report::new("depth_monotone")
        .param("quantifiers", &spec.quantifiers)
        .param("depth", spec.depth);
    if let Some(s) = lo.sets.iter().find(|s| !hi.ba.contains(s)) {
        r.fail(json!({"members": lo.members(s)}));
    }
    Ok(r)
}

/// Shared carrier for sentence algebras.
pub fn sentence_carrier(spec: &FragmentSpec) -> Arc<Carrier> {
    Carrier::words(&spec.alphabet, spec.bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;
    use crate::substitution::{check_sentence_class, SentenceClass};

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    fn algebra_of(spec: &FragmentSpec, formulas: &[&str]) -> FinBA {
        let c = sentence_carrier(spec);
        let sets: Vec<FixedBitSet> = formulas
            .iter()
            .map(|f| models_in(&c, &parse(f).unwrap(), &Registry::standard()).unwrap())
            .collect();
        FinBA::generate(&c, &sets, &Caps::default()).unwrap()
    }

    #[test]
    fn gamma_q_generators() {
        let a = Alphabet::from_chars("a").unwrap();
        let g = gamma_q(&["E"]).generators(&a);
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].to_string(), "E z. false");
        assert_eq!(g[1].to_string(), "E z. P[a](z)");
        assert_eq!(gamma_q(&["E", "mod[2,0]"]).generators(&ab()).len(), 8);
        let abcd = Alphabet::from_chars("abcd").unwrap();
        for g in [gamma_q(&["E1"]), gamma_q(&["E", "E1"]).with_budget(2), gamma_q(&["E"]).with_budget(9)] {
            assert_eq!(g.generator_count(&abcd), g.generators(&abcd).len());
        }
        let c = Alphabet::from_chars("c").unwrap();
        assert!(check_sentence_class(&gamma_q(&["E"]), &ab(), &c, &[0, 0]).unwrap().pass);
    }

    #[test]
    fn depth_zero_is_trivial() {
        let spec = FragmentSpec::new(&ab(), &["E"], &["<"], 0, 4);
        let f = depth_fragment(&spec, &Registry::standard(), &Caps::default()).unwrap();
        assert_eq!(f.ba.n_atoms(), 1);
        let d = depth_direct(&spec, &Registry::standard(), &Caps::default()).unwrap();
        assert!(compare_fragments("n0", &f, &d).pass);
    }

    #[test]
    fn depth_one_existential() {
        let reg = Registry::standard();
        let spec = FragmentSpec::new(&ab(), &["E"], &[], 1, 6);
        let f = depth_fragment(&spec, &reg, &Caps::default()).unwrap();
        assert!(f.ba.same_as(&algebra_of(&spec, &["E x. P[a](x)", "E x. P[b](x)"])));
        let d = depth_direct(&spec, &reg, &Caps::default()).unwrap();
        assert!(d.report.pass);
        assert!(compare_fragments("n1", &f, &d).pass);
    }

    #[test]
    fn depth_one_parity() {
        let reg = Registry::standard();
        let spec = FragmentSpec::new(&ab(), &["mod[2,0]"], &[], 1, 6);
        let f = depth_fragment(&spec, &reg, &Caps::default()).unwrap();
        assert!(f.ba.same_as(&algebra_of(&spec, &["mod[2,0] x. P[a](x)", "mod[2,0] x. P[b](x)"])));
        let d = depth_direct(&spec, &reg, &Caps::default()).unwrap();
        assert!(compare_fragments("parity", &f, &d).pass);
    }

    #[test]
    fn depth_one_unique_needs_pairs() {
        let reg = Registry::standard();
        let spec = FragmentSpec::new(&ab(), &["E1"], &[], 1, 5);
        let f = depth_fragment(&spec, &reg, &Caps::default()).unwrap();
        let expected = ["E1 x. P[a](x)", "E1 x. P[b](x)", "E1 x. P[a](x) | P[b](x)"];
        assert!(f.ba.same_as(&algebra_of(&spec, &expected)));
        assert_eq!(letter_budget("E1"), Some(2));
        assert_eq!(letter_budget("mod[3,1]"), None);
    }

    #[test]
    fn depth_two_with_order() {
        let reg = Registry::standard();
        let spec = FragmentSpec::new(&Alphabet::from_chars("a").unwrap(), &["E"], &["<"], 2, 5);
        let r = check_depth(&spec, &reg, &Caps::default()).unwrap();
        assert!(r.pass, "{:?}", r.counterexample);
        assert!(check_monotone(&spec.with_depth(1), &reg, &Caps::default()).unwrap().pass);
    }

    #[test]
    fn dump_lists_members() {
        let spec = FragmentSpec::new(&Alphabet::from_chars("a").unwrap(), &["E"], &[], 1, 2);
        let f = depth_fragment(&spec, &Registry::standard(), &Caps::default()).unwrap();
        let v = f.dump();
        assert_eq!(v["atoms"].as_array().unwrap().len(), 2);
        assert!(v["generators"][0]["formula"].is_string());
    }

    #[test]
    fn guards() {
        let reg = Registry::standard();
        assert!(depth_fragment(&FragmentSpec::new(&ab(), &["nope"], &[], 1, 3), &reg, &Caps::default()).is_err());
        assert!(matches!(
            depth_fragment(&FragmentSpec::new(&ab(), &["E"], &[], 5, 3), &reg, &Caps::default()),
            Err(Error::CapExceeded { .. })
        ));
    }
}
