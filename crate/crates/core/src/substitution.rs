//! Substituting formulas for letters: the atom alphabet of a finite algebra
//! of formulas, the substitution `σ_Δ`, the point classifier `ξ_Δ`, the
//! transduction `τ_Δ`, and the algebras `Γ ⊙ Δ` and `W ⊙ C`.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;
use std::fmt;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde_json::json;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::finba::{dual_of_inclusion, Carrier, DualMap, FinBA};
use crate::logic::{check_variables, models_compiled, relabel, Compiled, Formula, Registry};
use crate::regular::{syntactic_stamp, syntactic_stamp_of_ba, Dfa, DfaAlgebra, Stamp};
use crate::report::Report;
use crate::semidirect::{block_product, compile_models_dfa};
use crate::words::{Alphabet, Context, MarkedWord, Word};

/// A class of sentences, presented per alphabet by a generating family whose
/// Boolean closure is the class.
pub trait SentenceClass: Send + Sync + fmt::Debug {
    fn name(&self) -> String;

    /// Generators of `Γ(A)` (possibly a budgeted subfamily).
    fn generators(&self, alphabet: &Alphabet) -> Vec<Formula>;

    /// `generators(alphabet).len()`, without building them.
    fn generator_count(&self, alphabet: &Alphabet) -> usize {
        self.generators(alphabet).len()
    }

    /// Syntactic membership in `Γ(A)`.
    fn contains(&self, f: &Formula, alphabet: &Alphabet) -> bool;
}

/// `Γ_Q`: Boolean combinations of `Q z. ⋁_{a ∈ B} P[a](z)` for `Q` in a set
/// of quantifiers and `B ⊆ A`. The budget, when set, limits the enumerated
/// generators to `|B| ≤ k`; membership is unaffected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaQ {
    pub quantifiers: Vec<String>,
    pub budget: Option<usize>,
}

impl GammaQ {
    pub fn new(quantifiers: &[&str]) -> GammaQ {
        GammaQ {
            quantifiers: quantifiers.iter().map(|s| s.to_string()).collect(),
            budget: None,
        }
    }

    pub fn with_budget(mut self, k: usize) -> GammaQ {
        self.budget = Some(k);
        self
    }

    /// `Q z. ⋁_{a ∈ B} P[a](z)` with `B` given by letter indices.
    pub fn generator(q: &str, alphabet: &Alphabet, letters: &[usize]) -> Formula {
        let body = Formula::or_all(letters.iter().map(|&a| Formula::letter(alphabet.symbol(a), "z")));
        Formula::quant(q, "z", body)
    }
}

/// Subsets of `0..n` as sorted index lists, by size then lexicographically.
pub(crate) fn subsets(n: usize, budget: Option<usize>) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for size in 0..=budget.unwrap_or(n).min(n) {
        rec(0, n, size, &mut Vec::new(), &mut out);
    }
    out
}

fn is_letter_disjunction(f: &Formula, var: &str, alphabet: &Alphabet) -> bool {
    match f {
        Formula::False => true,
        Formula::Letter { symbol, var: v } => v == var && alphabet.index_of(symbol).is_some(),
        Formula::Or(a, b) => is_letter_disjunction(a, var, alphabet) && is_letter_disjunction(b, var, alphabet),
        _ => false,
    }
}

impl SentenceClass for GammaQ {
    fn name(&self) -> String {
        format!("Gamma[{}]", self.quantifiers.join(","))
    }

    fn generators(&self, alphabet: &Alphabet) -> Vec<Formula> {
        let sets = subsets(alphabet.len(), self.budget);
        self.quantifiers
            .iter()
            .flat_map(|q| sets.iter().map(move |b| GammaQ::generator(q, alphabet, b)))
            .collect()
    }

    fn generator_count(&self, alphabet: &Alphabet) -> usize {
        let n = alphabet.len();
        let mut count = 0usize;
        let mut choose = 1usize;
        for k in 0..=self.budget.unwrap_or(n).min(n) {
            count = count.saturating_add(choose);
            choose = choose.saturating_mul(n - k) / (k + 1);
        }
        count.saturating_mul(self.quantifiers.len())
    }

    fn contains(&self, f: &Formula, alphabet: &Alphabet) -> bool {
        match f {
            Formula::True | Formula::False => true,
            Formula::Not(a) => self.contains(a, alphabet),
            Formula::And(a, b) | Formula::Or(a, b) => self.contains(a, alphabet) && self.contains(b, alphabet),
            Formula::Quant { q, var, body } => {
                self.quantifiers.contains(q) && is_letter_disjunction(body, var, alphabet)
            }
            _ => false,
        }
    }
}

/// The class `{true, false}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constants;

impl SentenceClass for Constants {
    fn name(&self) -> String {
        "Constants".into()
    }

    fn generators(&self, _: &Alphabet) -> Vec<Formula> {
        Vec::new()
    }

    fn contains(&self, f: &Formula, _alphabet: &Alphabet) -> bool {
        fn constant(f: &Formula) -> bool {
            match f {
                Formula::True | Formula::False => true,
                Formula::Not(a) => constant(a),
                Formula::And(a, b) | Formula::Or(a, b) => constant(a) && constant(b),
                _ => false,
            }
        }
        constant(f)
    }
}

/// A finite Boolean algebra `Δ` of formulas in the context `params · {x}`,
/// generated by a list of formulas and computed on marked words up to a
/// bound. The parameters are usually empty. Its atoms form the alphabet `C_Δ = {c0, c1, …}`, numbered by
/// least carrier element; each atom carries a representative formula in
/// disjunctive normal form over the generators.
#[derive(Debug, Clone)]
pub struct DeltaAlgebra {
    alphabet: Alphabet,
    params: Context,
    var: String,
    generators: Vec<Formula>,
    generator_sets: Vec<FixedBitSet>,
    ba: FinBA,
    atom_formulas: Vec<Formula>,
    atom_alphabet: Alphabet,
    compiled: Vec<Compiled>,
}

impl DeltaAlgebra {
    pub fn new(
        alphabet: &Alphabet,
        var: &str,
        generators: Vec<Formula>,
        bound: usize,
        registry: &Registry,
        caps: &Caps,
    ) -> Result<DeltaAlgebra> {
        DeltaAlgebra::with_params(alphabet, &Context::empty(), var, generators, bound, registry, caps)
    }

    pub fn with_params(
        alphabet: &Alphabet,
        params: &Context,
        var: &str,
        generators: Vec<Formula>,
        bound: usize,
        registry: &Registry,
        caps: &Caps,
    ) -> Result<DeltaAlgebra> {
        let ctx = params.with(var)?;
        let carrier = Carrier::new(alphabet, &ctx, bound);
        for g in &generators {
            check_variables(g)?;
            registry.check(g)?;
        }
        let sets = generators
            .iter()
            .map(|g| Ok(models_compiled(&carrier, &Compiled::new(g, alphabet, &ctx, registry)?)))
            .collect::<Result<Vec<FixedBitSet>>>()?;
        DeltaAlgebra::from_models(&carrier, var, generators, sets, registry, caps)
    }

    /// Builds `Δ` from generators whose model sets over `carrier` (context
    /// `params · {var}`) are already known. Generators that split no atom of
    /// the earlier ones are dropped.
    pub fn from_models(
        carrier: &Arc<Carrier>,
        var: &str,
        generators: Vec<Formula>,
        sets: Vec<FixedBitSet>,
        registry: &Registry,
        caps: &Caps,
    ) -> Result<DeltaAlgebra> {
        let ctx = carrier.context();
        if ctx.vars().last().map(String::as_str) != Some(var) {
            return Err(Error::InvalidContext(format!("`{var}` is not the last variable of {ctx}")));
        }
        let params = ctx.without(var);
        let alphabet = carrier.alphabet();
        let (generators, sets) = irredundant(carrier.len(), generators, sets);
        let ba = FinBA::generate(carrier, &sets, caps)?;
        let atom_formulas: Vec<Formula> = ba
            .atoms()
            .iter()
            .map(|atom| {
                let p = atom.ones().next().expect("atoms are nonempty");
                Formula::and_all(generators.iter().zip(&sets).map(|(g, s)| {
                    if s.contains(p) {
                        g.clone()
                    } else {
                        Formula::not(g.clone())
                    }
                }))
            })
            .collect();
        let compiled = atom_formulas
            .iter()
            .map(|f| Compiled::new(f, alphabet, ctx, registry))
            .collect::<Result<Vec<_>>>()?;
        let atom_alphabet = Alphabet::indexed("c", ba.n_atoms())?;
        Ok(DeltaAlgebra {
            alphabet: alphabet.clone(),
            params,
            var: var.to_string(),
            generators,
            generator_sets: sets,
            ba,
            atom_formulas,
            atom_alphabet,
            compiled,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn params(&self) -> &Context {
        &self.params
    }

    /// `params · {x}`.
    pub fn context(&self) -> &Context {
        self.ba.carrier().context()
    }

    pub fn bound(&self) -> usize {
        self.ba.carrier().bound()
    }

    pub fn generators(&self) -> &[Formula] {
        &self.generators
    }

    /// Model sets of the generators over the carrier.
    pub fn generator_sets(&self) -> &[FixedBitSet] {
        &self.generator_sets
    }

    pub fn algebra(&self) -> &FinBA {
        &self.ba
    }

    pub fn n_atoms(&self) -> usize {
        self.ba.n_atoms()
    }

    /// `C_Δ`.
    pub fn atom_alphabet(&self) -> &Alphabet {
        &self.atom_alphabet
    }

    /// `φ_c` for each atom `c`.
    pub fn atom_formulas(&self) -> &[Formula] {
        &self.atom_formulas
    }

    /// `ξ_Δ(w, i)`: the atom holding the marked word, looked up in the
    /// partition up to the bound and by the atom formulas beyond it.
    pub fn xi(&self, mw: &MarkedWord) -> Result<usize> {
        match self.ba.carrier().index_of(mw) {
            Some(p) => Ok(self.ba.atom_at(p)),
            None => self.xi_by_formula(mw),
        }
    }

    /// `ξ_Δ(w, i)`: the atom whose formula the marked word satisfies.
    pub fn xi_by_formula(&self, mw: &MarkedWord) -> Result<usize> {
        let mut hits = self.compiled.iter().enumerate().filter(|(_, c)| c.eval_marked(mw));
        match (hits.next(), hits.next()) {
            (Some((c, _)), None) => Ok(c),
            _ => Err(Error::Hypothesis(format!(
                "atom formulas do not partition at {}",
                mw.render(&self.alphabet, self.context())
            ))),
        }
    }

    /// `ξ_Δ` via the stored partition (points up to the bound only).
    pub fn xi_by_partition(&self, mw: &MarkedWord) -> Result<usize> {
        self.ba.atom_of(mw)
    }

    /// `τ_Δ(w) = ξ_Δ(w,1)⋯ξ_Δ(w,|w|)`.
    pub fn tau(&self, w: &Word) -> Result<Word> {
        self.tau_marked(&MarkedWord::plain(w.clone()))
    }

    /// `τ_Δ` with the parameters held at the marks of `mw`.
    pub fn tau_marked(&self, mw: &MarkedWord) -> Result<Word> {
        if mw.marks.len() != self.params.len() {
            return Err(Error::InvalidMarkedWord(format!(
                "{} marks for parameters {}",
                mw.marks.len(),
                self.params
            )));
        }
        (1..=mw.len())
            .map(|i| {
                let mut marks = mw.marks.clone();
                marks.push(i);
                self.xi(&MarkedWord {
                    word: mw.word.clone(),
                    marks,
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// (A.1) and (A.2) at the bound: every point satisfies exactly one atom
    /// formula, and it is the atom holding the point.
    pub fn check_atoms(&self) -> Report {
        let carrier = self.ba.carrier();
        let mut r = Report::new("delta_atoms")
            .param("alphabet", &self.alphabet)
            .param("bound", self.bound());
        let bad = (0..carrier.len()).into_par_iter().find_first(|&i| {
            self.xi_by_formula(carrier.point(i)).ok() != Some(self.ba.atom_at(i))
        });
        if let Some(i) = bad {
            r.fail(json!({ "point": carrier.render(i) }));
        }
        r.stat("atoms", self.n_atoms());
        r
    }

    /// Exact automata over `A × 2` for the atom formulas. Fails unless the
    /// atoms also partition every longer marked word.
    pub fn atom_dfas(&self, registry: &Registry, caps: &Caps) -> Result<Vec<Dfa>> {
        let ctx = self.context().clone();
        let dfas = self
            .atom_formulas
            .iter()
            .map(|f| compile_models_dfa(f, &self.alphabet, &ctx, registry, caps))
            .collect::<Result<Vec<_>>>()?;
        let mut union = Dfa::empty(&self.alphabet.extended(&ctx));
        for d in &dfas {
            union = union.product(d, |a, b| a || b, caps)?;
        }
        let valid = crate::semidirect::validity_dfa(&self.alphabet, &ctx, caps)?;
        if !union.equivalent(&valid) {
            return Err(Error::Hypothesis(
                "some sign pattern of the generators is realized only beyond the bound".into(),
            ));
        }
        Ok(dfas)
    }
}

/// `σ_Δ(ψ)` without the class-membership check.
pub fn substitute(delta: &DeltaAlgebra, psi: &Formula) -> Result<Formula> {
    if !psi.is_sentence() {
        return Err(Error::Hypothesis(format!("`{psi}` is not a sentence")));
    }
    let mut avoid: BTreeSet<String> = BTreeSet::from([delta.var.clone()]);
    avoid.extend(delta.params.vars().iter().cloned());
    for f in &delta.atom_formulas {
        avoid.extend(f.all_vars());
    }
    let renamed = psi.rename_bound_fresh("z", &avoid);
    let mut err = None;
    let out = renamed.map_letters(&mut |symbol, var| match delta.atom_alphabet.require(symbol) {
        Ok(c) => delta.atom_formulas[c].rename_free(&delta.var, var),
        Err(e) => {
            err.get_or_insert(e);
            Formula::False
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// `σ_Δ(ψ)` for `ψ ∈ Γ(C_Δ)`.
pub fn sigma(gamma: &dyn SentenceClass, delta: &DeltaAlgebra, psi: &Formula) -> Result<Formula> {
    if !gamma.contains(psi, &delta.atom_alphabet) {
        return Err(Error::Hypothesis(format!("`{psi}` is not in {}", gamma.name())));
    }
    substitute(delta, psi)
}

/// Checks `τ_Δ(w) ∈ L_ψ ⟺ w ⊨ candidate` for every word up to the bound of
/// `Δ`.
pub fn check_transduction(
    delta: &DeltaAlgebra,
    psi: &Formula,
    candidate: &Formula,
    registry: &Registry,
) -> Result<Report> {
    if !delta.params.is_empty() {
        return Err(Error::InvalidContext("transduction of plain words needs empty parameters".into()));
    }
    let e = Context::empty();
    let lhs = Compiled::new(psi, &delta.atom_alphabet, &e, registry)?;
    let rhs = Compiled::new(candidate, &delta.alphabet, &e, registry)?;
    let words: Vec<Vec<usize>> = delta.alphabet.words_up_to(delta.bound()).collect();
    let bad = words.par_iter().find_first(|w| {
        let t = delta.tau(&Word((*w).clone())).expect("atoms partition up to the bound");
        lhs.eval(&t.0, &[]) != rhs.eval(w, &[])
    });
    let mut r = Report::new("substitution_principle")
        .param("psi", psi.to_string())
        .param("sigma", candidate.to_string())
        .param("bound", delta.bound())
        .param("atoms", delta.n_atoms());
    if let Some(w) = bad {
        let t = delta.tau(&Word(w.clone()))?;
        r.fail(json!({
            "word": delta.alphabet.render(w),
            "tau": delta.atom_alphabet.render(&t.0),
        }));
    }
    r.stat("words", words.len());
    Ok(r)
}

/// Checks the substitution principle for `ψ` and `σ_Δ(ψ)`.
pub fn check_substitution_principle(
    gamma: &dyn SentenceClass,
    delta: &DeltaAlgebra,
    psi: &Formula,
    registry: &Registry,
) -> Result<Report> {
    let s = sigma(gamma, delta, psi)?;
    check_transduction(delta, psi, &s, registry)
}

/// `Γ ⊙ Δ` at the bound of `Δ`, over words marked by the parameters of `Δ`.
#[derive(Debug, Clone)]
pub struct GammaOdot {
    pub ba: FinBA,
    /// The generators `ψ` of `Γ(C_Δ)` used.
    pub sources: Vec<Formula>,
    /// `σ_Δ(ψ)` for each source.
    pub images: Vec<Formula>,
    /// Model set of each image.
    pub sets: Vec<FixedBitSet>,
}

pub fn gamma_odot(
    gamma: &dyn SentenceClass,
    delta: &DeltaAlgebra,
    registry: &Registry,
    caps: &Caps,
) -> Result<GammaOdot> {
    let carrier = Carrier::new(&delta.alphabet, &delta.params, delta.bound());
    if gamma.generator_count(&delta.atom_alphabet) > caps.atoms {
        return Err(Error::cap(format!("generators of {}", gamma.name()), caps.atoms));
    }
    let sources = gamma.generators(&delta.atom_alphabet);
    let images = sources
        .iter()
        .map(|g| substitute(delta, g))
        .collect::<Result<Vec<_>>>()?;
    let sets = images_models(&carrier, delta, &sources, registry)?;
    let ba = FinBA::generate(&carrier, &sets, caps)?;
    Ok(GammaOdot {
        ba,
        sources,
        images,
        sets,
    })
}

/// Keeps the generators that split an atom of the algebra generated by the
/// ones kept before them.
pub(crate) fn irredundant<T>(n: usize, generators: Vec<T>, sets: Vec<FixedBitSet>) -> (Vec<T>, Vec<FixedBitSet>) {
    let mut cell = vec![0u32; n];
    let mut cells = 1usize;
    let mut keep = (Vec::new(), Vec::new());
    for (g, s) in generators.into_iter().zip(sets) {
        let mut ids: HashMap<(u32, bool), u32> = HashMap::new();
        let next: Vec<u32> = (0..n)
            .map(|p| {
                let k = ids.len() as u32;
                *ids.entry((cell[p], s.contains(p))).or_insert(k)
            })
            .collect();
        if ids.len() > cells {
            cells = ids.len();
            cell = next;
            keep.0.push(g);
            keep.1.push(s);
        }
    }
    keep
}

/// Models of `σ_Δ(ψ)` for each `ψ`, computed through `τ_Δ`: a word is a model
/// iff its transduction satisfies `ψ`.
fn images_models(
    carrier: &Carrier,
    delta: &DeltaAlgebra,
    sources: &[Formula],
    registry: &Registry,
) -> Result<Vec<FixedBitSet>> {
    let e = Context::empty();
    let taus: Vec<Vec<usize>> = carrier
        .points()
        .par_iter()
        .map(|p| delta.tau_marked(p).map(|t| t.0))
        .collect::<Result<_>>()?;
    sources
        .iter()
        .map(|psi| {
            let c = Compiled::new(psi, &delta.atom_alphabet, &e, registry)?;
            let mut s = FixedBitSet::with_capacity(carrier.len());
            for (i, t) in taus.iter().enumerate() {
                s.set(i, c.eval(t, &[]));
            }
            Ok(s)
        })
        .collect()
}

/// `Γ ∘ Δ`: the Boolean closure of `Γ ⊙ Δ` and the generators of `Δ` not
/// mentioning its variable.
pub fn circ_closure(
    gamma: &dyn SentenceClass,
    delta: &DeltaAlgebra,
    registry: &Registry,
    caps: &Caps,
) -> Result<FinBA> {
    let odot = gamma_odot(gamma, delta, registry, caps)?;
    let carrier = odot.ba.carrier().clone();
    let mut gens: Vec<FixedBitSet> = odot.ba.atoms().to_vec();
    for g in delta.generators.iter().filter(|g| !g.free_vars().contains(&delta.var)) {
        let c = Compiled::new(g, &delta.alphabet, &delta.params, registry)?;
        gens.push(models_compiled(&carrier, &c));
    }
    FinBA::generate(&carrier, &gens, caps)
}

/// Recognizer of the points classified by `Δ`: the syntactic stamp of its
/// atoms over `A × 2`, and the atom of each monoid element (if any).
#[derive(Debug, Clone)]
pub struct AtomRecognizer {
    pub stamp: Stamp,
    pub atom_of: Vec<Option<usize>>,
}

impl AtomRecognizer {
    pub fn new(atom_dfas: &[Dfa], caps: &Caps) -> Result<AtomRecognizer> {
        let stamp = syntactic_stamp_of_ba(atom_dfas, caps)?;
        let atom_of = (0..stamp.monoid().size())
            .map(|t| stamp.accepting().iter().position(|acc| acc[t]))
            .collect();
        Ok(AtomRecognizer { stamp, atom_of })
    }

    /// `τ⁻¹(K)` for `K` over the atom alphabet.
    pub fn preimage(&self, base: &Alphabet, k: &Dfa, caps: &Caps) -> Result<Dfa> {
        let nk = syntactic_stamp(k, caps)?;
        let n = nk.monoid();
        let cls: Vec<usize> = self
            .atom_of
            .iter()
            .map(|c| c.map_or(n.identity(), |c| nk.image(c)))
            .collect();
        Ok(block_product(base, &self.stamp, &cls, n, &nk.accepting()[0], caps)?.0)
    }
}

/// `W ⊙ C`: the preimages `τ_C⁻¹(K)` of the members of `W` (over the atom
/// alphabet of `Δ`), computed exactly.
pub fn w_odot_c(w: &DfaAlgebra, delta: &DeltaAlgebra, registry: &Registry, caps: &Caps) -> Result<DfaAlgebra> {
    if !delta.params.is_empty() {
        return Err(Error::InvalidContext("W ⊙ C needs empty parameters".into()));
    }
    if w.alphabet().len() != delta.n_atoms() {
        return Err(Error::AlphabetMismatch(format!(
            "W is over {} letters, Δ has {} atoms",
            w.alphabet().len(),
            delta.n_atoms()
        )));
    }
    let rec = AtomRecognizer::new(&delta.atom_dfas(registry, caps)?, caps)?;
    let atoms = w.atoms();
    let pre = atoms
        .iter()
        .map(|k| {
            let k = k.rename_alphabet(&delta.atom_alphabet)?;
            rec.preimage(&delta.alphabet, &k, caps)
        })
        .collect::<Result<Vec<_>>>()?;
    DfaAlgebra::generate(&delta.alphabet, &pre, caps)
}

/// Checks `ζ*(τ_Δ2(w)) = τ_Δ1(w)` for all words up to the bound, where `ζ`
/// is dual to `Δ1 ⊆ Δ2`, and `Γ ⊙ Δ1 ⊆ Γ ⊙ Δ2`.
pub fn tau_compat(
    gamma: &dyn SentenceClass,
    d1: &DeltaAlgebra,
    d2: &DeltaAlgebra,
    registry: &Registry,
    caps: &Caps,
) -> Result<(Report, DualMap)> {
    if d1.alphabet != d2.alphabet || d1.var != d2.var || d1.bound() != d2.bound() || !d1.params.is_empty() || !d2.params.is_empty() {
        return Err(Error::Invalid("algebras differ in alphabet, variable or bound, or have parameters".into()));
    }
    let zeta = dual_of_inclusion(&d1.ba, &d2.ba)?;
    let mut r = Report::new("tau_compat")
        .param("atoms", [d1.n_atoms(), d2.n_atoms()])
        .param("bound", d1.bound());
    let words: Vec<Vec<usize>> = d1.alphabet.words_up_to(d1.bound()).collect();
    let bad = words.par_iter().find_first(|w| {
        let w = Word((*w).clone());
        let t1 = d1.tau(&w).expect("partition");
        let t2 = d2.tau(&w).expect("partition");
        t2.0.iter().map(|&c| zeta.apply(c)).collect::<Vec<_>>() != t1.0
    });
    if let Some(w) = bad {
        r.fail(json!({ "word": d1.alphabet.render(w) }));
    }
    let g1 = gamma_odot(gamma, d1, registry, caps)?;
    let g2 = gamma_odot(gamma, d2, registry, caps)?;
    if !g1.ba.is_subalgebra_of(&g2.ba) {
        let witness = g1
            .ba
            .atoms()
            .iter()
            .find(|a| !g2.ba.contains(a))
            .map(|a| a.ones().map(|i| g1.ba.carrier().render(i)).collect::<Vec<_>>());
        r.fail(json!({ "gamma_odot_not_included": witness }));
    }
    r.stat("zeta", &zeta.table);
    r.stat("words", words.len());
    Ok((r, zeta))
}

/// Pairwise [`tau_compat`] along a chain `Δ1 ⊆ Δ2 ⊆ …`, plus composition of
/// the dual maps.
pub fn check_tower(
    gamma: &dyn SentenceClass,
    chain: &[DeltaAlgebra],
    registry: &Registry,
    caps: &Caps,
) -> Result<Report> {
    let mut r = Report::new("tower").param("length", chain.len());
    let n = chain.len();
    let mut zetas = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let (rep, z) = tau_compat(gamma, &chain[i], &chain[j], registry, caps)?;
            r.absorb(rep);
            zetas[i][j] = Some(z);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (Some(ij), Some(jk), Some(ik)) = (&zetas[i][j], &zetas[j][k], &zetas[i][k]) else {
                    continue;
                };
                if &ij.after(jk)? != ik {
                    r.fail(json!({ "zeta_composition": [i, j, k] }));
                }
            }
        }
    }
    Ok(r)
}

/// Sampled closure laws of a sentence class: Boolean combinations of
/// members are members, and relabelling along `ζ: A → B` maps `Γ(B)` into
/// `Γ(A)`.
pub fn check_sentence_class(
    gamma: &dyn SentenceClass,
    domain: &Alphabet,
    codomain: &Alphabet,
    zeta: &[usize],
) -> Result<Report> {
    let mut r = Report::new("sentence_class").param("class", gamma.name());
    let gens = gamma.generators(codomain);
    for (i, f) in gens.iter().enumerate() {
        if !gamma.contains(f, codomain) {
            r.fail(json!({ "generator_not_member": f.to_string() }));
        }
        let g = &gens[(i + 1) % gens.len()];
        for combo in [
            Formula::not(f.clone()),
            Formula::and(f.clone(), g.clone()),
            Formula::or(Formula::not(f.clone()), g.clone()),
        ] {
            if !gamma.contains(&combo, codomain) {
                r.fail(json!({ "combination_not_member": combo.to_string() }));
            }
            let pulled = relabel(zeta, domain, codomain, &combo)?;
            if !gamma.contains(&pulled, domain) {
                r.fail(json!({ "relabel_not_member": pulled.to_string() }));
            }
        }
    }
    r.stat("generators", gens.len());
    Ok(r)
}
