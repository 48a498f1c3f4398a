use std::collections::hash_map::Entry;
use std::collections::HashMap;

use serde::Serialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::regular::dfa::{refine, Dfa};
use crate::regular::monoid::FinMonoid;
use crate::words::Alphabet;

/// A surjective morphism `μ: A* ↠ M` together with a family of accepting
/// subsets of `M`, one per recognized language of interest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stamp {
    alphabet: Alphabet,
    monoid: FinMonoid,
    images: Vec<usize>,
    accepting: Vec<Vec<bool>>,
    #[serde(skip)]
    reps: Vec<Vec<usize>>,
}

impl Stamp {
    pub fn new(
        alphabet: Alphabet,
        monoid: FinMonoid,
        images: Vec<usize>,
        accepting: Vec<Vec<bool>>,
    ) -> Result<Stamp> {
        if images.len() != alphabet.len() || images.iter().any(|&m| m >= monoid.size()) {
            return Err(Error::InvalidMonoid("letter images do not match the alphabet".into()));
        }
        if accepting.iter().any(|p| p.len() != monoid.size()) {
            return Err(Error::InvalidMonoid("accepting set has the wrong size".into()));
        }
        let reps = representatives(&monoid, &images);
        let missing = reps.iter().filter(|r| r.is_none()).count();
        if missing > 0 {
            return Err(Error::InvalidMonoid(format!(
                "morphism is not surjective ({missing} elements missed)"
            )));
        }
        let reps = reps.into_iter().flatten().collect();
        Ok(Stamp {
            alphabet,
            monoid,
            images,
            accepting,
            reps,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn monoid(&self) -> &FinMonoid {
        &self.monoid
    }

    pub fn image(&self, letter: usize) -> usize {
        self.images[letter]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn accepting(&self) -> &[Vec<bool>] {
        &self.accepting
    }

    pub fn eval(&self, word: &[usize]) -> usize {
        self.monoid.product(word.iter().map(|&a| self.images[a]))
    }

    /// A shortlex-least word mapping to `e`.
    pub fn representative(&self, e: usize) -> &[usize] {
        &self.reps[e]
    }

    /// `μ⁻¹(P)` as a minimal automaton.
    pub fn preimage(&self, subset: &[bool]) -> Dfa {
        let n = self.monoid.size();
        let delta = (0..n)
            .map(|m| self.images.iter().map(|&g| self.monoid.mul(m, g)).collect())
            .collect();
        Dfa::new(
            self.alphabet.clone(),
            self.monoid.identity(),
            subset.to_vec(),
            delta,
        )
        .expect("cayley automaton is total")
        .minimize()
    }

    /// The `i`-th designated language.
    pub fn language(&self, i: usize) -> Dfa {
        self.preimage(&self.accepting[i])
    }

    /// Cayley automaton states and their elements, for algebra construction.
    pub(crate) fn cayley(&self) -> (Vec<Vec<usize>>, usize) {
        let n = self.monoid.size();
        let delta = (0..n)
            .map(|m| self.images.iter().map(|&g| self.monoid.mul(m, g)).collect())
            .collect();
        (delta, self.monoid.identity())
    }
}

fn representatives(monoid: &FinMonoid, images: &[usize]) -> Vec<Option<Vec<usize>>> {
    let mut reps: Vec<Option<Vec<usize>>> = vec![None; monoid.size()];
    reps[monoid.identity()] = Some(Vec::new());
    let mut order = vec![monoid.identity()];
    let mut i = 0;
    while i < order.len() {
        let e = order[i];
        for (a, &g) in images.iter().enumerate() {
            let p = monoid.mul(e, g);
            if reps[p].is_none() {
                let mut w = reps[e].clone().expect("visited");
                w.push(a);
                reps[p] = Some(w);
                order.push(p);
            }
        }
        i += 1;
    }
    reps
}

/// Transition monoid of a complete machine, elements in BFS order from the
/// identity transformation (so shortlex-least representatives come first).
/// Returns the monoid, letter images, and each element's transformation.
pub(crate) fn transition_monoid(
    alphabet: &Alphabet,
    delta: &[Vec<usize>],
    caps: &Caps,
) -> Result<(FinMonoid, Vec<usize>, Vec<Vec<u32>>)> {
    let n = delta.len();
    let k = alphabet.len();
    let identity: Vec<u32> = (0..n as u32).collect();
    let mut index: HashMap<Vec<u32>, usize> = HashMap::from([(identity.clone(), 0)]);
    let mut elems = vec![identity];
    let mut parent: Vec<(usize, usize)> = vec![(0, 0)];
    let mut right: Vec<Vec<u32>> = Vec::new();
    let mut i = 0;
    while i < elems.len() {
        let mut row = Vec::with_capacity(k);
        #[allow(clippy::needless_range_loop)]
        for a in 0..k {
            let f: Vec<u32> = elems[i].iter().map(|&q| delta[q as usize][a] as u32).collect();
            let id = match index.get(&f) {
                Some(&id) => id,
                None => {
                    if elems.len() >= caps.monoid {
                        return Err(Error::cap("transition monoid", caps.monoid));
                    }
                    let id = elems.len();
                    index.insert(f.clone(), id);
                    elems.push(f);
                    parent.push((i, a));
                    id
                }
            };
            row.push(id as u32);
        }
        right.push(row);
        i += 1;
    }
    let size = elems.len();
    let mut table = vec![0u32; size * size];
    for e1 in 0..size {
        table[e1 * size] = e1 as u32;
        for e2 in 1..size {
            let (p, a) = parent[e2];
            let prev = table[e1 * size + p] as usize;
            table[e1 * size + e2] = right[prev][a];
        }
    }
    let mut labels = vec![String::from("1")];
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    for &(p, a) in &parent[1..size] {
        let mut w = words[p].clone();
        w.push(a);
        labels.push(alphabet.render(&w));
        words.push(w);
    }
    let images = (0..k).map(|a| right[0][a] as usize).collect();
    Ok((FinMonoid::trusted(size, table, 0, labels), images, elems))
}

/// The syntactic stamp of one regular language: the transition monoid of its
/// minimal automaton, with accepting subset `μ[L]`.
pub fn syntactic_stamp(dfa: &Dfa, caps: &Caps) -> Result<Stamp> {
    syntactic_stamp_of_ba(std::slice::from_ref(dfa), caps)
}

/// The syntactic stamp of the quotient-closed Boolean algebra generated by a
/// finite family of languages over a common alphabet. Accepting subsets are
/// listed in the order of `dfas`.
pub fn syntactic_stamp_of_ba(dfas: &[Dfa], caps: &Caps) -> Result<Stamp> {
    let Some(first) = dfas.first() else {
        return Err(Error::Invalid("empty language family".into()));
    };
    let alphabet = first.alphabet().clone();
    if let Some(d) = dfas.iter().find(|d| d.alphabet() != &alphabet) {
        return Err(Error::AlphabetMismatch(format!("{} vs {}", alphabet, d.alphabet())));
    }
    let (delta, outputs) = product_machine(dfas, caps)?;
    let (delta, outputs) = quotient_machine(&delta, &outputs);
    let (monoid, images, elems) = transition_monoid(&alphabet, &delta, caps)?;
    let accepting = (0..dfas.len())
        .map(|i| elems.iter().map(|f| outputs[f[0] as usize][i]).collect())
        .collect();
    Stamp::new(alphabet, monoid, images, accepting)
}

/// Transition table and per-state outputs.
pub(crate) type Machine = (Vec<Vec<usize>>, Vec<Vec<bool>>);

/// Reachable product of several automata; state 0 is initial. Each state's
/// output lists the acceptance of every component.
pub(crate) fn product_machine(dfas: &[Dfa], caps: &Caps) -> Result<Machine> {
    let k = dfas[0].alphabet().len();
    let start: Vec<usize> = dfas.iter().map(Dfa::initial).collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let mut row = Vec::with_capacity(k);
        for a in 0..k {
            let t: Vec<usize> = states[i]
                .iter()
                .zip(dfas)
                .map(|(&q, d)| d.step(q, a))
                .collect();
            let id = match index.get(&t) {
                Some(&id) => id,
                None => {
                    if states.len() >= caps.dfa_states {
                        return Err(Error::cap("product automaton", caps.dfa_states));
                    }
                    let id = states.len();
                    index.insert(t.clone(), id);
                    states.push(t);
                    id
                }
            };
            row.push(id);
        }
        delta.push(row);
        i += 1;
    }
    let outputs = states
        .iter()
        .map(|s| s.iter().zip(dfas).map(|(&q, d)| d.is_accepting(q)).collect())
        .collect();
    Ok((delta, outputs))
}

/// Minimal Moore machine equivalent to `(delta, outputs)` from state 0, with
/// classes numbered by first occurrence (state 0 stays 0).
pub(crate) fn quotient_machine<O: Clone + Eq + std::hash::Hash>(
    delta: &[Vec<usize>],
    outputs: &[O],
) -> (Vec<Vec<usize>>, Vec<O>) {
    let mut ids: HashMap<&O, usize> = HashMap::new();
    let init: Vec<usize> = outputs
        .iter()
        .map(|o| {
            let n = ids.len();
            *ids.entry(o).or_insert(n)
        })
        .collect();
    let class = refine(delta, &init);
    let mut number: HashMap<usize, usize> = HashMap::new();
    let mut rep = Vec::new();
    for (q, &c) in class.iter().enumerate() {
        if let Entry::Vacant(v) = number.entry(c) {
            v.insert(rep.len());
            rep.push(q);
        }
    }
    let new_delta = rep
        .iter()
        .map(|&q| delta[q].iter().map(|&r| number[&class[r]]).collect())
        .collect();
    let new_out = rep.iter().map(|&q| outputs[q].clone()).collect();
    (new_delta, new_out)
}

/// Outcome of [`factor_stamp`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Factorization {
    /// `g` with `g ∘ μ_r = μ_B`, as a table on the elements of `r`.
    Morphism { table: Vec<usize>, target: Stamp },
    /// Two words identified by `r` but separated by the target family.
    NotRecognized { u: Vec<usize>, v: Vec<usize> },
}

/// Decides whether `r` recognizes every language in `targets`, i.e. whether
/// their syntactic stamp factors through `r`.
pub fn factor_stamp(r: &Stamp, targets: &[Dfa], caps: &Caps) -> Result<Factorization> {
    let target = if targets.is_empty() {
        Stamp::new(
            r.alphabet().clone(),
            FinMonoid::trivial(),
            vec![0; r.alphabet().len()],
            Vec::new(),
        )?
    } else {
        syntactic_stamp_of_ba(targets, caps)?
    };
    if target.alphabet() != r.alphabet() {
        return Err(Error::AlphabetMismatch("stamp and targets differ".into()));
    }
    let m = r.monoid();
    let table: Vec<usize> = (0..m.size())
        .map(|e| target.eval(r.representative(e)))
        .collect();
    for e in 0..m.size() {
        for (a, &g) in r.images().iter().enumerate() {
            let lhs = table[m.mul(e, g)];
            let rhs = target.monoid().mul(table[e], target.image(a));
            if lhs != rhs {
                let mut u = r.representative(e).to_vec();
                u.push(a);
                let v = r.representative(m.mul(e, g)).to_vec();
                return Ok(Factorization::NotRecognized { u, v });
            }
        }
    }
    Ok(Factorization::Morphism { table, target })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Context;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn marked_universe_monoid() {
        for letters in ["a", "ab"] {
            let ext = Alphabet::from_chars(letters).unwrap().extended(&Context::single("x"));
            let one = Dfa::explore(
                &ext,
                0usize,
                |&s, l| (s + (l & 1)).min(2),
                |&s| s == 1,
                &caps(),
                "test",
            )
            .unwrap();
            let s = syntactic_stamp(&one, &caps()).unwrap();
            let m = s.monoid();
            assert_eq!(m.size(), 3);
            assert!(m.is_commutative());
            let e = s.image(0);
            let mm = s.image(1);
            assert_eq!(e, m.identity());
            let z = m.mul(mm, mm);
            assert_ne!(z, mm);
            assert_eq!(m.zero(), Some(z));
            assert_eq!(s.accepting()[0], (0..3).map(|x| x == mm).collect::<Vec<_>>());
        }
    }

    #[test]
    fn empty_language_trivial_monoid() {
        let s = syntactic_stamp(&Dfa::empty(&ab()), &caps()).unwrap();
        assert_eq!(s.monoid().size(), 1);
    }

    #[test]
    fn contains_a_monoid_matches_brute_congruence() {
        let d = Dfa::contains_letter(&ab(), |l| l == 0);
        let s = syntactic_stamp(&d, &caps()).unwrap();
        assert_eq!(s.monoid().size(), 2);
        assert!(s.monoid().zero().is_some());
        let contexts: Vec<Vec<usize>> = ab().words_up_to(2).collect();
        let words: Vec<Vec<usize>> = ab().words_up_to(4).collect();
        for u in &words {
            for v in &words {
                let same = contexts.iter().all(|x| {
                    contexts.iter().all(|y| {
                        let xuy: Vec<usize> = x.iter().chain(u).chain(y).copied().collect();
                        let xvy: Vec<usize> = x.iter().chain(v).chain(y).copied().collect();
                        d.accepts(&xuy) == d.accepts(&xvy)
                    })
                });
                assert_eq!(same, s.eval(u) == s.eval(v));
            }
        }
    }

    #[test]
    fn family_stamp_and_complement() {
        let d = Dfa::count_mod(&ab(), |l| l == 0, 3, 0);
        let s1 = syntactic_stamp(&d, &caps()).unwrap();
        let s2 = syntactic_stamp_of_ba(&[d.clone(), d.complement()], &caps()).unwrap();
        assert_eq!(s1.monoid().size(), s2.monoid().size());
        assert!(s1.monoid().isomorphism_to(s2.monoid()).is_some());
        assert!(s1.language(0).equivalent(&d));
    }

    #[test]
    fn factorization() {
        let a = Dfa::contains_letter(&ab(), |l| l == 0);
        let b = Dfa::contains_letter(&ab(), |l| l == 1);
        let both = syntactic_stamp_of_ba(&[a.clone(), b.clone()], &caps()).unwrap();
        match factor_stamp(&both, std::slice::from_ref(&a), &caps()).unwrap() {
            Factorization::Morphism { table, target } => {
                assert!(both.monoid().is_morphism_to(target.monoid(), &table));
                for w in ab().words_up_to(4) {
                    assert_eq!(table[both.eval(&w)], target.eval(&w));
                }
            }
            other => panic!("{other:?}"),
        }
        let sa = syntactic_stamp(&a, &caps()).unwrap();
        match factor_stamp(&sa, &[b], &caps()).unwrap() {
            Factorization::NotRecognized { u, v } => {
                assert_eq!(sa.eval(&u), sa.eval(&v));
            }
            other => panic!("{other:?}"),
        }
        match factor_stamp(&sa, &[Dfa::universal(&ab())], &caps()).unwrap() {
            Factorization::Morphism { target, .. } => assert_eq!(target.monoid().size(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn monoid_cap() {
        let d = Dfa::count_mod(&ab(), |l| l == 0, 7, 0);
        let tight = Caps { monoid: 3, ..Caps::default() };
        assert!(matches!(
            syntactic_stamp(&d, &tight),
            Err(Error::CapExceeded { .. })
        ));
    }
}
