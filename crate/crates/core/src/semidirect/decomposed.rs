use std::collections::{HashMap, HashSet};

use serde_json::json;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::regular::{syntactic_stamp_of_ba, Dfa, DfaAlgebra, FinMonoid, Stamp};
use crate::report::Report;
use crate::semidirect::biaction::{sdp, Biaction, SdpMonoid};
use crate::substitution::AtomRecognizer;
use crate::words::Alphabet;

/// Which of `A*`, `A*⊗ℕ`, `A_z` a word over `A×2` lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Plain,
    Marked,
    Zone,
}

fn component_of(word: &[usize]) -> Component {
    match word.iter().filter(|&&l| l & 1 == 1).count() {
        0 => Component::Plain,
        1 => Component::Marked,
        _ => Component::Zone,
    }
}

/// The language of all words over `A×2` in the given component.
pub fn component_dfa(marked: &Alphabet, c: Component) -> Dfa {
    let caps = Caps::default();
    Dfa::explore(
        marked,
        0usize,
        |&n, l| (n + (l & 1)).min(2),
        |&n| match c {
            Component::Plain => n == 0,
            Component::Marked => n == 1,
            Component::Zone => n == 2,
        },
        &caps,
        "component",
    )
    .expect("three states")
}

/// A quotient-closed algebra `D` over `(A×2)*` split as `D0 × D1 × 2`,
/// with its syntactic stamp `π`, the submonoid `M = π[A*]` and the set
/// `T = π[A*⊗ℕ]`.
///
/// `X_{D0}` and `X_{D1}` are the atoms of `D` inside `A*` and `A*⊗ℕ`.
#[derive(Debug, Clone)]
pub struct DecomposedD {
    base: Alphabet,
    d: DfaAlgebra,
    pi: Stamp,
    m_elems: Vec<usize>,
    m: FinMonoid,
    m_index: Vec<Option<usize>>,
    t_elems: Vec<usize>,
    t_index: Vec<Option<usize>>,
    d0_atoms: Vec<usize>,
    d1_atoms: Vec<usize>,
    x0_of_m: Vec<usize>,
    x1_of_t: Vec<usize>,
    act0: Biaction,
    act1: Biaction,
    report: Report,
}

fn hyp(msg: impl Into<String>) -> Error {
    Error::Hypothesis(msg.into())
}

/// Splits `D`, checking both equivalent sets of conditions and naming the
/// first violated clause.
pub fn decompose(base: &Alphabet, d: &DfaAlgebra, caps: &Caps) -> Result<DecomposedD> {
    let marked = d.alphabet();
    if marked.len() != 2 * base.len()
        || (0..base.len()).any(|a| marked.symbol(2 * a) != format!("{}{{}}", base.symbol(a)))
    {
        return Err(Error::AlphabetMismatch(format!("{marked} is not {base}×2")));
    }
    let mut report = Report::new("decompose").param("atoms", d.n_atoms());
    let plain = component_dfa(marked, Component::Plain);
    let single = component_dfa(marked, Component::Marked);
    let zone = component_dfa(marked, Component::Zone);
    let atoms = d.atoms();

    // D_z must be the two-element algebra
    for (i, k) in atoms.iter().enumerate() {
        let kz = k.intersection(&zone)?;
        if !kz.is_empty() && !kz.equivalent(&zone) {
            return Err(hyp(format!("D_z is not two-element: atom {i} splits A_z")));
        }
    }

    let quotient_witness = d.quotient_witness();
    let cond1 = quotient_witness.is_none() && (d.contains(&single) || d.contains(&zone));

    // splitting conditions
    let inside = |k: &Dfa, c: &Dfa| k.is_subset_of(c).expect("same alphabet");
    let split = atoms
        .iter()
        .all(|k| inside(k, &plain) || inside(k, &single) || inside(k, &zone));
    let mut closed = true;
    let mut clause4 = String::new();
    if split {
        'outer: for (i, k) in atoms.iter().enumerate() {
            for a in 0..base.len() {
                let (p, q) = (2 * a, 2 * a + 1);
                let checks: Vec<(Dfa, &str)> = if inside(k, &plain) {
                    vec![
                        (k.left_quotient(&[p]).intersection(&plain)?, "D0 closed under the A* actions"),
                        (k.right_quotient(&[p]).intersection(&plain)?, "D0 closed under the A* actions"),
                    ]
                } else if inside(k, &single) {
                    vec![
                        (k.left_quotient(&[p]).intersection(&single)?, "D1 closed under the A* actions"),
                        (k.right_quotient(&[p]).intersection(&single)?, "D1 closed under the A* actions"),
                        (k.left_quotient(&[q]), "marked quotients of D1 land in D0"),
                        (k.right_quotient(&[q]), "marked quotients of D1 land in D0"),
                    ]
                } else {
                    Vec::new()
                };
                for (l, clause) in checks {
                    if !d.contains(&l) {
                        closed = false;
                        clause4 = format!("{clause} (atom {i}, letter {})", base.symbol(a));
                        break 'outer;
                    }
                }
            }
        }
    } else {
        clause4 = "D is not the product D0×D1×2".into();
    }
    let cond4 = split && closed;
    report.stat("condition_1", cond1);
    report.stat("condition_4", cond4);
    if cond1 != cond4 {
        report.fail(json!({"condition_1": cond1, "condition_4": cond4}));
        return Err(Error::Invalid(format!(
            "equivalent conditions disagree: (1)={cond1}, (4)={cond4}"
        )));
    }
    if !cond1 {
        let clause = if let Some((i, l, left)) = quotient_witness {
            format!(
                "D is not closed under quotients ({} quotient of atom {i} by {})",
                if left { "left" } else { "right" },
                marked.symbol(l)
            )
        } else if !d.contains(&single) && !d.contains(&zone) {
            "neither A*⊗ℕ nor A_z belongs to D".into()
        } else {
            clause4
        };
        return Err(hyp(format!("D does not satisfy the equivalent conditions: {clause}")));
    }

    let pi = syntactic_stamp_of_ba(&atoms, caps)?;
    let md = pi.monoid();
    let comp: Vec<Component> = (0..md.size()).map(|e| component_of(pi.representative(e))).collect();
    let atom_of: Vec<usize> = (0..md.size())
        .map(|e| {
            pi.accepting()
                .iter()
                .position(|acc| acc[e])
                .expect("atoms cover every element")
        })
        .collect();
    let plain_gens: Vec<usize> = (0..base.len()).map(|a| pi.image(2 * a)).collect();
    let m_elems = md.generated(&plain_gens);
    let mut m_index = vec![None; md.size()];
    for (i, &e) in m_elems.iter().enumerate() {
        m_index[e] = Some(i);
    }
    let m = md.restrict(&m_elems)?;
    let t_elems: Vec<usize> = (0..md.size()).filter(|&e| comp[e] == Component::Marked).collect();
    let mut t_index = vec![None; md.size()];
    for (i, &e) in t_elems.iter().enumerate() {
        t_index[e] = Some(i);
    }
    let d0_atoms: Vec<usize> = (0..atoms.len()).filter(|&i| inside(&atoms[i], &plain)).collect();
    let d1_atoms: Vec<usize> = (0..atoms.len()).filter(|&i| inside(&atoms[i], &single)).collect();
    let pos = |list: &[usize], a: usize| list.iter().position(|&x| x == a).expect("component atom");
    let x0_of_m: Vec<usize> = m_elems.iter().map(|&e| pos(&d0_atoms, atom_of[e])).collect();
    let x1_of_t: Vec<usize> = t_elems.iter().map(|&e| pos(&d1_atoms, atom_of[e])).collect();

    // the biactions of M on X_{D0} and X_{D1}, with well-definedness checked
    let induced = |reps: &[usize], n: usize, cls: &dyn Fn(usize) -> Option<usize>, left: bool| -> Result<Vec<Vec<usize>>> {
        let mut table = vec![vec![usize::MAX; n]; m_elems.len()];
        for (mi, &me) in m_elems.iter().enumerate() {
            for &r in reps {
                let x = cls(r).expect("representative in component");
                let y = cls(if left { md.mul(me, r) } else { md.mul(r, me) })
                    .ok_or_else(|| hyp("M does not preserve a component"))?;
                if table[mi][x] == usize::MAX {
                    table[mi][x] = y;
                } else if table[mi][x] != y {
                    return Err(hyp(format!(
                        "the action of M on atoms is not well defined (element {mi}, atom {x})"
                    )));
                }
            }
        }
        Ok(table)
    };
    let cls0 = |e: usize| m_index[e].map(|i| x0_of_m[i]);
    let cls1 = |e: usize| t_index[e].map(|i| x1_of_t[i]);
    let act0 = Biaction::new(
        m.clone(),
        d0_atoms.len(),
        induced(&m_elems, d0_atoms.len(), &cls0, true)?,
        induced(&m_elems, d0_atoms.len(), &cls0, false)?,
    )?;
    let act1 = Biaction::new(
        m.clone(),
        d1_atoms.len(),
        induced(&t_elems, d1_atoms.len(), &cls1, true)?,
        induced(&t_elems, d1_atoms.len(), &cls1, false)?,
    )?;
    // T acting from X_{D0} into X_{D1} on both sides
    for &t in &t_elems {
        let mut l = vec![usize::MAX; d0_atoms.len()];
        let mut r = vec![usize::MAX; d0_atoms.len()];
        for &me in &m_elems {
            let x = cls0(me).expect("in M");
            for (tab, y) in [(&mut l, md.mul(t, me)), (&mut r, md.mul(me, t))] {
                let y = cls1(y).ok_or_else(|| hyp("T·M leaves A*⊗ℕ"))?;
                if tab[x] != usize::MAX && tab[x] != y {
                    return Err(hyp("the action of T on X_{D0} is not well defined"));
                }
                tab[x] = y;
            }
        }
    }
    report.stat("M", m_elems.len());
    report.stat("T", t_elems.len());
    report.stat("D0_atoms", d0_atoms.len());
    report.stat("D1_atoms", d1_atoms.len());
    Ok(DecomposedD {
        base: base.clone(),
        d: d.clone(),
        pi,
        m_elems,
        m,
        m_index,
        t_elems,
        t_index,
        d0_atoms,
        d1_atoms,
        x0_of_m,
        x1_of_t,
        act0,
        act1,
        report,
    })
}

impl DecomposedD {
    pub fn base(&self) -> &Alphabet {
        &self.base
    }

    pub fn algebra(&self) -> &DfaAlgebra {
        &self.d
    }

    pub fn stamp(&self) -> &Stamp {
        &self.pi
    }

    /// `M = π[A*]`, renumbered.
    pub fn m(&self) -> &FinMonoid {
        &self.m
    }

    /// `T = π[A*⊗ℕ]` as elements of the syntactic monoid of `D`.
    pub fn t(&self) -> &[usize] {
        &self.t_elems
    }

    pub fn n_x0(&self) -> usize {
        self.d0_atoms.len()
    }

    pub fn n_x1(&self) -> usize {
        self.d1_atoms.len()
    }

    pub fn action_on_x0(&self) -> &Biaction {
        &self.act0
    }

    pub fn action_on_x1(&self) -> &Biaction {
        &self.act1
    }

    pub fn report(&self) -> &Report {
        &self.report
    }

    /// Atoms of `D0` as languages over `A`.
    pub fn d0(&self) -> Result<Vec<Dfa>> {
        let map: Vec<usize> = (0..self.base.len()).map(|a| 2 * a).collect();
        self.d0_atoms
            .iter()
            .map(|&i| self.d.atom(i).lp_preimage(&self.base, &map))
            .collect()
    }

    /// Atoms of `D1` over `A×2`.
    pub fn d1(&self) -> Vec<Dfa> {
        self.d1_atoms.iter().map(|&i| self.d.atom(i)).collect()
    }

    /// `π(w)` for `w ∈ A*`, as an index into `M`.
    pub fn pi_plain(&self, word: &[usize]) -> usize {
        let e = self.pi.eval(&word.iter().map(|&a| 2 * a).collect::<Vec<_>>());
        self.m_index[e].expect("plain words map into M")
    }

    /// Index into `T` of `π(w, i)`.
    pub fn pi_marked(&self, word: &[usize], i: usize) -> usize {
        let e = self.pi.eval(
            &word
                .iter()
                .enumerate()
                .map(|(j, &a)| 2 * a + usize::from(i == j))
                .collect::<Vec<_>>(),
        );
        self.t_index[e].expect("singly marked words map into T")
    }

    pub fn x0_of_m(&self, m: usize) -> usize {
        self.x0_of_m[m]
    }

    pub fn x1_of_t(&self, t: usize) -> usize {
        self.x1_of_t[t]
    }

    /// `τ_{D1}(w)`: the `D1` atom of each marking of `w`.
    pub fn tau(&self, word: &[usize]) -> Vec<usize> {
        (0..word.len()).map(|i| self.x1_of_t[self.pi_marked(word, i)]).collect()
    }

    /// `m·t` and `t·m` in the syntactic monoid, for `m ∈ M`, `t ∈ T`.
    pub fn left_t(&self, m: usize, t: usize) -> usize {
        let e = self.pi.monoid().mul(self.m_elems[m], self.t_elems[t]);
        self.t_index[e].expect("M acts on T")
    }

    pub fn right_t(&self, t: usize, m: usize) -> usize {
        let e = self.pi.monoid().mul(self.t_elems[t], self.m_elems[m]);
        self.t_index[e].expect("M acts on T")
    }
}

/// Elements `(t̲, m)` of `T* ** M` whose `T*` part has length at most a cap.
#[derive(Debug, Clone)]
pub struct TStarOverM<'a> {
    dd: &'a DecomposedD,
    cap: usize,
}

pub type TStarElement = (Vec<usize>, usize);

pub fn t_star_over_m(dd: &DecomposedD, cap: usize) -> TStarOverM<'_> {
    TStarOverM { dd, cap }
}

impl TStarOverM<'_> {
    pub fn identity(&self) -> TStarElement {
        (Vec::new(), self.dd.m.identity())
    }

    /// `(t̲,m)(t̲',m') = (ρ_m'(t1)…ρ_m'(tk) λ_m(t'1)…λ_m(t'l), mm')`.
    pub fn mul(&self, a: &TStarElement, b: &TStarElement) -> Result<TStarElement> {
        if a.0.len() + b.0.len() > self.cap {
            return Err(Error::cap("T* length", self.cap));
        }
        let mut w: Vec<usize> = a.0.iter().map(|&t| self.dd.right_t(t, b.1)).collect();
        w.extend(b.0.iter().map(|&t| self.dd.left_t(a.1, t)));
        Ok((w, self.dd.m.mul(a.1, b.1)))
    }

    /// All elements with `T*` part of length at most `len`.
    pub fn elements(&self, len: usize) -> Vec<TStarElement> {
        let nt = self.dd.t_elems.len();
        let tw = Alphabet::indexed("t", nt.max(1)).expect("nonempty");
        let words: Vec<Vec<usize>> = if nt == 0 {
            vec![Vec::new()]
        } else {
            tw.words_up_to(len.min(self.cap)).collect()
        };
        words
            .into_iter()
            .flat_map(|w| (0..self.dd.m.size()).map(move |m| (w.clone(), m)))
            .collect()
    }
}

/// An lp-variety presented by one finite monoid: `V(C)` is every language
/// recognized by a morphism `C* → N`.
#[derive(Debug, Clone)]
pub struct MonoidVariety {
    pub name: String,
    pub monoid: FinMonoid,
}

impl MonoidVariety {
    pub fn new(name: &str, monoid: FinMonoid) -> MonoidVariety {
        MonoidVariety {
            name: name.to_string(),
            monoid,
        }
    }

    /// Languages of `V(C)` that generate it as a Boolean algebra.
    pub fn generators(&self, c: &Alphabet, caps: &Caps) -> Result<Vec<Dfa>> {
        let n = &self.monoid;
        let k = c.len();
        let count = (n.size() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if count.saturating_mul(n.size() as u128) > caps.atoms as u128 {
            return Err(Error::cap("morphisms into the variety monoid", caps.atoms));
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for code in 0..count as usize {
            let f: Vec<usize> = (0..k).map(|i| (code / n.size().pow(i as u32)) % n.size()).collect();
            let delta: Vec<Vec<usize>> = (0..n.size())
                .map(|s| f.iter().map(|&g| n.mul(s, g)).collect())
                .collect();
            for target in 0..n.size().saturating_sub(1).max(1) {
                let acc = (0..n.size()).map(|s| n.size() == 1 || s == target).collect();
                let dfa = Dfa::new(c.clone(), n.identity(), acc, delta.clone())?.minimize();
                if seen.insert(dfa.clone()) {
                    out.push(dfa);
                }
            }
        }
        Ok(out)
    }
}

/// `η: X_{D1}* ↠ η[X_{D1}*]` and the quotient `η[T*] ** M`.
#[derive(Debug, Clone)]
pub struct EtaQuotient {
    pub eta: Stamp,
    pub biaction: Biaction,
    pub product: SdpMonoid,
}

/// The syntactic morphism `η` of `V(X_{D1})` and the semidirect product
/// `η[T*] ** M` with the induced biaction.
pub fn eta_quotient(dd: &DecomposedD, v: &MonoidVariety, caps: &Caps) -> Result<EtaQuotient> {
    let x = Alphabet::indexed("c", dd.n_x1())?;
    let eta = syntactic_stamp_of_ba(&v.generators(&x, caps)?, caps)?;
    let em = eta.monoid();
    let act = &dd.act1;
    let nm = dd.m.size();
    let mut lambda = vec![vec![0; em.size()]; nm];
    let mut rho = vec![vec![0; em.size()]; nm];
    for m in 0..nm {
        for e in 0..em.size() {
            let rep = eta.representative(e);
            lambda[m][e] = eta.eval(&rep.iter().map(|&c| act.left(m, c)).collect::<Vec<_>>());
            rho[m][e] = eta.eval(&rep.iter().map(|&c| act.right(c, m)).collect::<Vec<_>>());
        }
        // ℓ_m∘η = η∘λ*_m on all words, by induction over letters
        for e in 0..em.size() {
            for c in 0..x.len() {
                let ec = em.mul(e, eta.image(c));
                let l = em.mul(lambda[m][e], eta.image(act.left(m, c)));
                let r = em.mul(rho[m][e], eta.image(act.right(c, m)));
                if lambda[m][ec] != l || rho[m][ec] != r {
                    return Err(hyp(format!(
                        "η is not compatible with the action of M (element {m}, class {e}, letter {c})"
                    )));
                }
            }
        }
    }
    let biaction = Biaction::new(dd.m.clone(), em.size(), lambda, rho)?;
    let product = sdp(em, &biaction)?;
    Ok(EtaQuotient { eta, biaction, product })
}

/// The stamp `h: A* → η[T*] ** M` with `h(a) = (η∘π(a,1), π(a))`,
/// corestricted to its image.
#[derive(Debug, Clone)]
pub struct HMorphism {
    pub stamp: Stamp,
    /// Element of the full product for each element of the image.
    pub into_product: Vec<usize>,
}

pub fn h_morphism(dd: &DecomposedD, eq: &EtaQuotient) -> Result<HMorphism> {
    let n = eq.product.monoid();
    let images: Vec<usize> = (0..dd.base.len())
        .map(|a| {
            let x = dd.x1_of_t(dd.pi_marked(&[a], 0));
            eq.product.index(eq.eta.image(x), dd.pi_plain(&[a]))
        })
        .collect();
    let into_product = n.generated(&images);
    let mut pos = HashMap::new();
    for (i, &e) in into_product.iter().enumerate() {
        pos.insert(e, i);
    }
    let sub = n.restrict(&into_product)?;
    let stamp = Stamp::new(dd.base.clone(), sub, images.iter().map(|e| pos[e]).collect(), Vec::new())?;
    Ok(HMorphism { stamp, into_product })
}

/// Checks `h(w) = (η(τ_{D1}(w)), π(w))` for `|w| ≤ bound` and
/// `h(uv) = h(u)h(v)` for `|u|, |v| ≤ bound/2`.
pub fn check_h(dd: &DecomposedD, eq: &EtaQuotient, h: &HMorphism, bound: usize) -> Report {
    let mut report = Report::new("h_morphism").param("bound", bound);
    let n = eq.product.monoid();
    let formula = |w: &[usize]| eq.product.index(eq.eta.eval(&dd.tau(w)), dd.pi_plain(w));
    let mut count = 0usize;
    for w in dd.base.words_up_to(bound) {
        count += 1;
        let got = h.into_product[h.stamp.eval(&w)];
        if got != formula(&w) {
            report.fail(json!({"word": dd.base.render(&w)}));
            return report;
        }
    }
    let half: Vec<Vec<usize>> = dd.base.words_up_to(bound / 2).collect();
    for u in &half {
        for v in &half {
            let uv: Vec<usize> = u.iter().chain(v).copied().collect();
            if formula(&uv) != n.mul(formula(u), formula(v)) {
                report.fail(json!({"u": dd.base.render(u), "v": dd.base.render(v)}));
                return report;
            }
        }
    }
    report.stat("words", count);
    report
}

/// Checks `(η×id)` turns products of `T* ** M` into products of
/// `η[T*] ** M`, on all pairs with `T*` parts of length at most `len`.
pub fn check_t_star_quotient(dd: &DecomposedD, eq: &EtaQuotient, len: usize) -> Result<Report> {
    let ts = t_star_over_m(dd, 2 * len);
    let mut report = Report::new("t_star_quotient").param("length", len);
    let proj = |(w, m): &TStarElement| {
        let x: Vec<usize> = w.iter().map(|&t| dd.x1_of_t(t)).collect();
        eq.product.index(eq.eta.eval(&x), *m)
    };
    let elems = ts.elements(len);
    let n = eq.product.monoid();
    for a in &elems {
        for b in &elems {
            let ab = ts.mul(a, b)?;
            if proj(&ab) != n.mul(proj(a), proj(b)) {
                report.fail(json!({"left": a, "right": b}));
                return Ok(report);
            }
        }
    }
    report.stat("pairs", elems.len() * elems.len());
    Ok(report)
}

/// Decides that the languages recognized through `h` are exactly the
/// lattice generated by `V(X_{D1}) ⊙ D1` and `D0`, and that this lattice is
/// a Boolean algebra closed under quotients.
pub fn verify_t2(dd: &DecomposedD, v: &MonoidVariety, bound: usize, caps: &Caps) -> Result<Report> {
    let mut report = Report::new("t2").param("variety", &v.name).param("bound", bound);
    let eq = eta_quotient(dd, v, caps)?;
    let h = h_morphism(dd, &eq)?;
    report.absorb(check_h(dd, &eq, &h, bound));
    let (t, m) = (dd.t().len(), dd.m().size());
    let len = if (1 + t + t * t) * m <= 2000 { 2 } else { 1 };
    report.absorb(check_t_star_quotient(dd, &eq, len)?);

    let left = DfaAlgebra::recognized_through(
        &h.stamp,
        |e| {
            let (s, m) = eq.product.pair(h.into_product[e]);
            (s, dd.x0_of_m(m))
        },
        caps,
    )?;

    let rec = AtomRecognizer::new(&dd.d1(), caps)?;
    let em = eq.eta.monoid();
    let mut gens = Vec::new();
    for e in 0..em.size() {
        let fibre: Vec<bool> = (0..em.size()).map(|f| f == e).collect();
        gens.push(rec.preimage(&dd.base, &eq.eta.preimage(&fibre), caps)?);
    }
    gens.extend(dd.d0()?);
    let right = DfaAlgebra::generate(&dd.base, &gens, caps)?;

    report.stat("eta", em.size());
    report.stat("product", eq.product.monoid().size());
    report.stat("image", h.stamp.monoid().size());
    report.stat("left_atoms", left.n_atoms());
    report.stat("right_atoms", right.n_atoms());
    if !left.same_as(&right) {
        let w = (0..left.n_atoms())
            .find_map(|i| {
                let a = left.atom(i);
                (!right.contains(&a)).then(|| a.shortest_word()).flatten()
            })
            .or_else(|| {
                (0..right.n_atoms()).find_map(|i| right.atom(i).shortest_word().filter(|_| !left.contains(&right.atom(i))))
            });
        report.fail(json!({"reason": "recognized languages differ", "word": w.map(|w| dd.base.render(&w))}));
    }

    // the lattice generated equals the Boolean algebra generated
    let decomposed: Vec<Vec<bool>> = gens
        .iter()
        .map(|g| right.decompose(g).expect("generator in its own algebra"))
        .collect();
    for alpha in 0..right.n_atoms() {
        let meet: Vec<bool> = (0..right.n_atoms())
            .map(|beta| decomposed.iter().filter(|g| g[alpha]).all(|g| g[beta]))
            .collect();
        if meet.iter().filter(|&&b| b).count() != 1 {
            let w = right.atom(alpha).shortest_word().unwrap_or_default();
            report.fail(json!({"reason": "atom outside the lattice", "word": dd.base.render(&w)}));
            break;
        }
    }
    if let Some((i, l, left)) = right.quotient_witness() {
        report.fail(json!({"reason": "not quotient-closed", "atom": i, "letter": dd.base.symbol(l), "left": left}));
    }
    Ok(report)
}
