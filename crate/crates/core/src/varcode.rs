//! Encoding free variables into the alphabet `A × 2^x` and decoding them
//! back, and the transfer of a formula algebra in context `x · {x}` to one
//! over `A × 2^x` in context `{x}`.

use std::collections::BTreeSet;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde_json::json;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::finba::Carrier;
use crate::logic::{equiv_witness, models_compiled, Compiled, Formula, Registry};
use crate::report::Report;
use crate::substitution::{substitute, DeltaAlgebra, SentenceClass};
use crate::words::{embed_marked, unembed, Alphabet, Context, MarkedWord};

/// `Φ = ∃! z ⋁_a P[(a,1)](z)` over `A × 2^{var}`: exactly one marked letter.
pub fn phi_sentence(alphabet: &Alphabet, var: &str) -> Formula {
    let ext = alphabet.extended(&Context::single(var));
    Formula::exists_unique(
        "z",
        Formula::or_all((0..alphabet.len()).map(|a| Formula::letter(ext.symbol(2 * a + 1), "z"))),
    )
}

/// The encoding `ε_{x,y}` and decoding `δ_{x,y}` for disjoint contexts `x`
/// (moved into the alphabet) and `y` (left as variables).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codec {
    base: Alphabet,
    x: Context,
    y: Context,
    joint: Context,
    encoded: Alphabet,
}

fn fresh(avoid: &mut BTreeSet<String>) -> String {
    let name = (0..)
        .map(|i| format!("z{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded supply");
    avoid.insert(name.clone());
    name
}

impl Codec {
    pub fn new(base: &Alphabet, x: &Context, y: &Context, registry: &Registry) -> Result<Codec> {
        let joint = x.disjoint_union(y)?;
        for q in ["E", "E1"] {
            if !registry.has_quantifier(q) {
                return Err(Error::UnknownQuantifier(format!("{q} (needed to encode variables)")));
            }
        }
        if !registry.has_predicate("=") {
            return Err(Error::UnknownPredicate("= (needed to decode variables)".into()));
        }
        Ok(Codec {
            base: base.clone(),
            x: x.clone(),
            y: y.clone(),
            joint,
            encoded: base.extended(x),
        })
    }

    pub fn base(&self) -> &Alphabet {
        &self.base
    }

    pub fn x(&self) -> &Context {
        &self.x
    }

    pub fn y(&self) -> &Context {
        &self.y
    }

    /// `x · y`, the context of unencoded formulas.
    pub fn joint_context(&self) -> &Context {
        &self.joint
    }

    /// `A × 2^x`.
    pub fn encoded_alphabet(&self) -> &Alphabet {
        &self.encoded
    }

    fn check_scope(&self, f: &Formula, alphabet: &Alphabet, ctx: &Context) -> Result<()> {
        if let Some(v) = f.free_vars().into_iter().find(|v| !ctx.contains(v)) {
            return Err(Error::UnboundVariable(v));
        }
        if let Some(s) = f.symbols().into_iter().find(|s| alphabet.index_of(s).is_none()) {
            return Err(Error::UnknownSymbol(s));
        }
        Ok(())
    }

    /// `ε_{x,y}(φ)`, the variables of `x` encoded last to first.
    pub fn encode(&self, phi: &Formula) -> Result<Formula> {
        self.check_scope(phi, &self.base, &self.joint)?;
        let bound = phi.bound_vars();
        if let Some(v) = self.x.vars().iter().find(|v| bound.contains(*v)) {
            return Err(Error::VariableClash(format!("`{v}` is bound in the formula")));
        }
        let mut avoid = phi.all_vars();
        avoid.extend(self.joint.vars().iter().cloned());
        let vars = self.x.vars();
        let mut f = phi.clone();
        for i in (0..vars.len()).rev() {
            let enc = Context::new(vars[i + 1..].iter().cloned())?;
            f = encode_step(&f, &self.base, &enc, &vars[i], &mut avoid);
        }
        Ok(f)
    }

    /// `δ_{x,y}(ψ)`, the variables of `x` decoded first to last.
    pub fn decode(&self, psi: &Formula) -> Result<Formula> {
        self.check_scope(psi, &self.encoded, &self.y)?;
        let all = psi.all_vars();
        if let Some(v) = self.x.vars().iter().find(|v| all.contains(*v)) {
            return Err(Error::VariableClash(format!("`{v}` occurs in the formula")));
        }
        let vars = self.x.vars();
        let mut f = psi.clone();
        for i in 0..vars.len() {
            let enc = Context::new(vars[i..].iter().cloned())?;
            f = decode_step(&f, &self.base, &enc);
        }
        Ok(f)
    }

    /// `ι_{x,y}`: marks of `mw` are aligned with `x · y`.
    pub fn iota(&self, mw: &MarkedWord) -> Result<MarkedWord> {
        if mw.marks.len() != self.joint.len() {
            return Err(Error::InvalidMarkedWord(format!(
                "{} marks for context {}",
                mw.marks.len(),
                self.joint
            )));
        }
        let k = self.x.len();
        let xs = MarkedWord {
            word: mw.word.clone(),
            marks: mw.marks[..k].to_vec(),
        };
        Ok(MarkedWord {
            word: embed_marked(&xs, &self.x, &self.x)?,
            marks: mw.marks[k..].to_vec(),
        })
    }

    /// The preimage under `ι_{x,y}`, if any.
    pub fn iota_inverse(&self, mw: &MarkedWord) -> Option<MarkedWord> {
        let mut out = unembed(&mw.word, &self.x)?;
        out.marks.extend_from_slice(&mw.marks);
        Some(out)
    }

    /// Carriers of unencoded and encoded points up to `bound`.
    pub fn carriers(&self, bound: usize) -> (Arc<Carrier>, Arc<Carrier>) {
        (
            Carrier::new(&self.base, &self.joint, bound),
            Carrier::new(&self.encoded, &self.y, bound),
        )
    }

    /// `ι[S]` for `S` over the unencoded carrier.
    pub fn transport(&self, src: &Carrier, dst: &Carrier, set: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(dst.len());
        for p in set.ones() {
            let q = self.iota(src.point(p)).expect("aligned");
            out.insert(dst.index_of(&q).expect("ι preserves length"));
        }
        out
    }

    /// `ι⁻¹(S)` for `S` over the encoded carrier.
    pub fn pull_back(&self, src: &Carrier, dst: &Carrier, set: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(src.len());
        for (p, point) in src.points().iter().enumerate() {
            let q = self.iota(point).expect("aligned");
            out.set(p, set.contains(dst.index_of(&q).expect("ι preserves length")));
        }
        out
    }

    /// `L_{ε(φ)} = ι[L_φ]` up to `bound`.
    pub fn check_encode(&self, phi: &Formula, bound: usize, registry: &Registry) -> Result<Report> {
        let (src, dst) = self.carriers(bound);
        let lhs = models_compiled(&src, &Compiled::new(phi, &self.base, &self.joint, registry)?);
        let expected = self.transport(&src, &dst, &lhs);
        let enc = self.encode(phi)?;
        let actual = models_compiled(&dst, &Compiled::new(&enc, &self.encoded, &self.y, registry)?);
        let mut r = Report::new("encode")
            .param("formula", phi.to_string())
            .param("x", &self.x)
            .param("y", &self.y)
            .param("bound", bound);
        if let Some(q) = expected.symmetric_difference(&actual).next() {
            r.fail(json!({ "point": dst.render(q), "encoded": enc.to_string() }));
        }
        r.stat("points", dst.len());
        Ok(r)
    }

    /// `L_{δ(ψ)} = ι⁻¹(L_ψ)` up to `bound`.
    pub fn check_decode(&self, psi: &Formula, bound: usize, registry: &Registry) -> Result<Report> {
        let (src, dst) = self.carriers(bound);
        let rhs = models_compiled(&dst, &Compiled::new(psi, &self.encoded, &self.y, registry)?);
        let expected = self.pull_back(&src, &dst, &rhs);
        let dec = self.decode(psi)?;
        let actual = models_compiled(&src, &Compiled::new(&dec, &self.base, &self.joint, registry)?);
        let mut r = Report::new("decode")
            .param("formula", psi.to_string())
            .param("x", &self.x)
            .param("y", &self.y)
            .param("bound", bound);
        if let Some(p) = expected.symmetric_difference(&actual).next() {
            r.fail(json!({ "point": src.render(p), "decoded": dec.to_string() }));
        }
        r.stat("points", src.len());
        Ok(r)
    }

    /// `φ ≡ δε(φ)` and `L_{ε(φ)} ⊆ Im ι` for `φ`; `L_ψ ∩ Im ι = L_{εδ(ψ)}`
    /// for `ψ`. Either may be omitted.
    pub fn roundtrip_check(
        &self,
        phi: Option<&Formula>,
        psi: Option<&Formula>,
        bound: usize,
        registry: &Registry,
    ) -> Result<Report> {
        let (src, dst) = self.carriers(bound);
        let mut r = Report::new("roundtrip")
            .param("x", &self.x)
            .param("y", &self.y)
            .param("bound", bound);
        if let Some(phi) = phi {
            let enc = self.encode(phi)?;
            let back = self.decode(&enc)?;
            if let Some(w) = equiv_witness(phi, &back, &self.base, &self.joint, bound, registry)? {
                r.fail(json!({
                    "formula": phi.to_string(),
                    "point": w.render(&self.base, &self.joint),
                }));
            }
            let models = models_compiled(&dst, &Compiled::new(&enc, &self.encoded, &self.y, registry)?);
            if let Some(q) = models.ones().find(|&q| self.iota_inverse(dst.point(q)).is_none()) {
                r.fail(json!({
                    "formula": phi.to_string(),
                    "outside_image": dst.render(q),
                }));
            }
            r.param_mut("phi", phi.to_string());
        }
        if let Some(psi) = psi {
            let back = self.encode(&self.decode(psi)?)?;
            let a = models_compiled(&dst, &Compiled::new(psi, &self.encoded, &self.y, registry)?);
            let b = models_compiled(&dst, &Compiled::new(&back, &self.encoded, &self.y, registry)?);
            let bad = (0..dst.len()).find(|&q| {
                let inside = self.iota_inverse(dst.point(q)).is_some();
                (a.contains(q) && inside) != b.contains(q)
            });
            if let Some(q) = bad {
                r.fail(json!({ "formula": psi.to_string(), "point": dst.render(q) }));
            }
            r.param_mut("psi", psi.to_string());
        }
        r.stat("points", [src.len(), dst.len()]);
        Ok(r)
    }
}

/// Maps a letter of `A × 2^enc` to `A × 2^{var·enc}` with the new bit set.
fn lift_letter(l: usize, k: usize, bit: bool) -> usize {
    let (a, mask) = Alphabet::split_extended(l, k);
    (a << (k + 1)) | (usize::from(bit) << k) | mask
}

fn encode_step(f: &Formula, base: &Alphabet, enc: &Context, var: &str, avoid: &mut BTreeSet<String>) -> Formula {
    let k = enc.len();
    let from = base.extended(enc);
    let to = base.extended(&Context::single(var).disjoint_union(enc).expect("fresh variable"));
    let z = fresh(avoid);
    let marked = |z: &str| Formula::or_all((0..from.len()).map(|l| Formula::letter(to.symbol(lift_letter(l, k, true)), z)));
    let body = f.map_atoms(
        &mut |symbol, v| {
            let l = from.index_of(symbol).expect("symbols checked");
            let on = Formula::letter(to.symbol(lift_letter(l, k, true)), v);
            if v == var {
                Formula::exists(&z, on.rename_free(v, &z))
            } else {
                Formula::or(on, Formula::letter(to.symbol(lift_letter(l, k, false)), v))
            }
        },
        &mut |name, args| {
            let atom = Formula::Num {
                name: name.to_string(),
                args: args.to_vec(),
            };
            if args.iter().any(|a| a == var) {
                Formula::exists(&z, Formula::and(marked(&z), atom.rename_free(var, &z)))
            } else {
                atom
            }
        },
    );
    let zphi = fresh(avoid);
    Formula::and(body, Formula::exists_unique(&zphi, marked(&zphi)))
}

fn decode_step(f: &Formula, base: &Alphabet, enc: &Context) -> Formula {
    let k = enc.len();
    let var = &enc.vars()[0];
    let from = base.extended(enc);
    let to = base.extended(&enc.without(var));
    let top = 1usize << (k - 1);
    f.map_letters(&mut |symbol, v| {
        let l = from.index_of(symbol).expect("symbols checked");
        let (a, mask) = Alphabet::split_extended(l, k);
        let plain = Formula::letter(to.symbol(Alphabet::join_extended(a, mask & (top - 1), k - 1)), v);
        let same = Formula::eq(var, v);
        if mask & top != 0 {
            Formula::and(plain, same)
        } else {
            Formula::and(plain, Formula::not(same))
        }
    })
}

/// `Δ` in context `x · {x}` transferred to `Δ' = ⟨ε[Δ]⟩` over `A × 2^x` in
/// context `{x}`, with the embedding `ζ` of atoms and the extra atom
/// `¬ε(1)`.
#[derive(Debug, Clone)]
pub struct Lift {
    pub lifted: DeltaAlgebra,
    /// `zeta[α]` is the atom of `Δ'` equal to `ε(α)`.
    pub zeta: Vec<usize>,
    /// The atom `¬ε(1)` (absent when no variable is encoded).
    pub outside: Option<usize>,
    pub report: Report,
}

fn lift_identity(delta: &DeltaAlgebra) -> Lift {
    Lift {
        lifted: delta.clone(),
        zeta: (0..delta.n_atoms()).collect(),
        outside: None,
        report: Report::new("lift_atoms").param("atoms", delta.n_atoms()),
    }
}

/// Computes `Δ'` by evaluating the encoded generators and verifies that its
/// atoms are exactly `ε[At(Δ)] ∪ {¬ε(1)}` at the bound of `Δ`.
pub fn lift_delta(delta: &DeltaAlgebra, registry: &Registry, caps: &Caps) -> Result<Lift> {
    if delta.params().is_empty() {
        return Ok(lift_identity(delta));
    }
    let x = Context::single(delta.var());
    let codec = Codec::new(delta.alphabet(), delta.params(), &x, registry)?;
    let mut gens = delta
        .generators()
        .iter()
        .map(|g| codec.encode(g))
        .collect::<Result<Vec<_>>>()?;
    let top = codec.encode(&Formula::True)?;
    gens.push(top.clone());
    let lifted = DeltaAlgebra::new(codec.encoded_alphabet(), delta.var(), gens, delta.bound(), registry, caps)?;
    let carrier = lifted.algebra().carrier().clone();
    let ba = lifted.algebra();
    let find = |set: &FixedBitSet| ba.atoms().iter().position(|a| a == set);
    let mut report = Report::new("lift_atoms")
        .param("alphabet", delta.alphabet())
        .param("params", delta.params())
        .param("bound", delta.bound());
    let mut zeta = Vec::with_capacity(delta.n_atoms());
    for (i, phi) in delta.atom_formulas().iter().enumerate() {
        let enc = codec.encode(phi)?;
        let set = models_compiled(&carrier, &Compiled::new(&enc, codec.encoded_alphabet(), &x, registry)?);
        match find(&set) {
            Some(j) => zeta.push(j),
            None => {
                report.fail(json!({ "atom": i, "encoded": enc.to_string() }));
                zeta.push(usize::MAX);
            }
        }
    }
    let mut outside = models_compiled(&carrier, &Compiled::new(&top, codec.encoded_alphabet(), &x, registry)?);
    outside.toggle_range(..);
    let outside = find(&outside);
    if outside.is_none() {
        report.fail(json!({ "complement_of_encoded_true": "not an atom" }));
    }
    if ba.n_atoms() != delta.n_atoms() + 1 {
        report.fail(json!({ "atoms": [delta.n_atoms(), ba.n_atoms()] }));
    }
    report.stat("atoms", [delta.n_atoms(), ba.n_atoms()]);
    report.stat("zeta", &zeta);
    Ok(Lift {
        lifted,
        zeta,
        outside,
        report,
    })
}

/// Computes `Δ'` from `Δ` by carrying model sets along `ι` instead of
/// evaluating encoded formulas. The representative formulas are the encoded
/// generators.
pub fn lift_delta_transported(delta: &DeltaAlgebra, registry: &Registry, caps: &Caps) -> Result<Lift> {
    if delta.params().is_empty() {
        return Ok(lift_identity(delta));
    }
    let x = Context::single(delta.var());
    let codec = Codec::new(delta.alphabet(), delta.params(), &x, registry)?;
    let src = delta.algebra().carrier().clone();
    let dst = Carrier::new(codec.encoded_alphabet(), &x, delta.bound());
    let mut gens = Vec::new();
    let mut sets = Vec::new();
    for (g, atom) in delta.generators().iter().zip(delta.generator_sets()) {
        gens.push(codec.encode(g)?);
        sets.push(codec.transport(&src, &dst, atom));
    }
    gens.push(codec.encode(&Formula::True)?);
    sets.push(codec.transport(&src, &dst, &src.full()));
    let lifted = DeltaAlgebra::from_models(&dst, delta.var(), gens, sets, registry, caps)?;
    let zeta = delta
        .algebra()
        .atoms()
        .iter()
        .map(|a| {
            let p = a.ones().next().expect("atoms are nonempty");
            let q = codec.iota(src.point(p))?;
            Ok(lifted.algebra().atom_at(dst.index_of(&q).expect("ι preserves length")))
        })
        .collect::<Result<Vec<_>>>()?;
    let outside = (0..dst.len())
        .find(|&q| codec.iota_inverse(dst.point(q)).is_none())
        .map(|q| lifted.algebra().atom_at(q));
    let report = Report::new("lift_atoms").param("atoms", [delta.n_atoms(), lifted.n_atoms()]);
    Ok(Lift {
        lifted,
        zeta,
        outside,
        report,
    })
}

/// `ζ_Γ(θ)`: letters of `C_Δ'` renamed along `ζ`, with `¬ε(1)` becoming
/// `false`.
pub fn zeta_gamma(lift: &Lift, delta: &DeltaAlgebra, theta: &Formula) -> Result<Formula> {
    let from = lift.lifted.atom_alphabet();
    let to = delta.atom_alphabet();
    let mut inverse = vec![None; from.len()];
    for (a, &c) in lift.zeta.iter().enumerate() {
        if c < inverse.len() {
            inverse[c] = Some(a);
        }
    }
    let mut err = None;
    let out = theta.map_letters(&mut |symbol, v| match from.require(symbol) {
        Ok(c) => inverse[c].map_or(Formula::False, |a| Formula::letter(to.symbol(a), v)),
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

/// `δ_{x,∅} ∘ σ_Δ' ≡ σ_Δ ∘ ζ_Γ` on the given sentences of `Γ(C_Δ')`, at the
/// bound of `Δ`.
pub fn check_lift_square(
    gamma: &dyn SentenceClass,
    delta: &DeltaAlgebra,
    lift: &Lift,
    samples: &[Formula],
    registry: &Registry,
) -> Result<Report> {
    let mut r = Report::new("lift_square")
        .param("class", gamma.name())
        .param("bound", delta.bound());
    let params = delta.params();
    let codec = Codec::new(delta.alphabet(), params, &Context::empty(), registry)?;
    let mut avoid: BTreeSet<String> = params.vars().iter().cloned().collect();
    for theta in samples {
        if !gamma.contains(theta, lift.lifted.atom_alphabet()) {
            return Err(Error::Hypothesis(format!("`{theta}` is not in {}", gamma.name())));
        }
        let up = substitute(&lift.lifted, theta)?;
        avoid.extend(up.all_vars());
        let lhs = codec.decode(&up.rename_bound_fresh("v", &avoid))?;
        let rhs = substitute(delta, &zeta_gamma(lift, delta, theta)?)?;
        if let Some(w) = equiv_witness(&lhs, &rhs, delta.alphabet(), params, delta.bound(), registry)? {
            r.fail(json!({
                "theta": theta.to_string(),
                "point": w.render(delta.alphabet(), params),
            }));
        }
    }
    r.stat("samples", samples.len());
    Ok(r)
}
