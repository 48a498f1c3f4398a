use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::regular::dfa::Dfa;
use crate::regular::stamp::{product_machine, quotient_machine, Stamp};
use crate::words::Alphabet;

/// A finite Boolean algebra of regular languages, held as a Moore machine
/// whose output is the atom containing the input word.
///
/// Atoms are numbered by their shortlex-least member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DfaAlgebra {
    alphabet: Alphabet,
    delta: Vec<Vec<usize>>,
    cell: Vec<usize>,
    n_atoms: usize,
}

impl DfaAlgebra {
    /// Builds the algebra from a machine whose outputs are arbitrary labels;
    /// distinct labels reachable from state 0 become atoms.
    fn from_machine<O: Clone + Eq + std::hash::Hash>(
        alphabet: &Alphabet,
        delta: &[Vec<usize>],
        outputs: &[O],
        caps: &Caps,
    ) -> Result<DfaAlgebra> {
        let (delta, outputs) = quotient_machine(delta, outputs);
        // BFS order gives shortlex-least words per state
        let mut order = vec![0usize];
        let mut seen = vec![false; delta.len()];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            for &r in &delta[order[i]] {
                if !seen[r] {
                    seen[r] = true;
                    order.push(r);
                }
            }
            i += 1;
        }
        let mut atom_of: HashMap<&O, usize> = HashMap::new();
        for &q in &order {
            let n = atom_of.len();
            atom_of.entry(&outputs[q]).or_insert(n);
        }
        if atom_of.len() > caps.atoms {
            return Err(Error::cap("boolean algebra atoms", caps.atoms));
        }
        let cell = outputs.iter().map(|o| atom_of[o]).collect();
        Ok(DfaAlgebra {
            alphabet: alphabet.clone(),
            n_atoms: atom_of.len(),
            delta,
            cell,
        })
    }

    /// The Boolean algebra generated by `gens`.
    pub fn generate(alphabet: &Alphabet, gens: &[Dfa], caps: &Caps) -> Result<DfaAlgebra> {
        if let Some(d) = gens.iter().find(|d| d.alphabet() != alphabet) {
            return Err(Error::AlphabetMismatch(format!("{} vs {}", alphabet, d.alphabet())));
        }
        if gens.is_empty() {
            return DfaAlgebra::from_machine(alphabet, &[vec![0; alphabet.len()]], &[()], caps);
        }
        let (delta, outputs) = product_machine(gens, caps)?;
        DfaAlgebra::from_machine(alphabet, &delta, &outputs, caps)
    }

    /// `{μ⁻¹(P) | P ⊆ M}`.
    pub fn recognized_by(stamp: &Stamp, caps: &Caps) -> Result<DfaAlgebra> {
        DfaAlgebra::recognized_through(stamp, |e| e, caps)
    }

    /// `{μ⁻¹(P) | P a union of fibres of label}`.
    pub fn recognized_through<O: Clone + Eq + std::hash::Hash>(
        stamp: &Stamp,
        label: impl Fn(usize) -> O,
        caps: &Caps,
    ) -> Result<DfaAlgebra> {
        let (delta, init) = stamp.cayley();
        // renumber so the identity is state 0
        let n = delta.len();
        let perm: Vec<usize> = (0..n)
            .map(|q| if q == init { 0 } else if q < init { q + 1 } else { q })
            .collect();
        let mut new_delta = vec![Vec::new(); n];
        let mut outputs = vec![label(init); n];
        for q in 0..n {
            new_delta[perm[q]] = delta[q].iter().map(|&r| perm[r]).collect();
            outputs[perm[q]] = label(q);
        }
        DfaAlgebra::from_machine(stamp.alphabet(), &new_delta, &outputs, caps)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    /// `log2` of the number of elements.
    pub fn n_elements_log2(&self) -> usize {
        self.n_atoms
    }

    pub fn atom_of_word(&self, word: &[usize]) -> usize {
        self.cell[word.iter().fold(0, |q, &a| self.delta[q][a])]
    }

    /// The union of the atoms selected by `set` (indexed by atom).
    pub fn element(&self, set: &[bool]) -> Dfa {
        Dfa::new(
            self.alphabet.clone(),
            0,
            self.cell.iter().map(|&c| set[c]).collect(),
            self.delta.clone(),
        )
        .expect("machine is total")
        .minimize()
    }

    pub fn atom(&self, i: usize) -> Dfa {
        let set: Vec<bool> = (0..self.n_atoms).map(|j| j == i).collect();
        self.element(&set)
    }

    pub fn atoms(&self) -> Vec<Dfa> {
        (0..self.n_atoms).map(|i| self.atom(i)).collect()
    }

    /// All elements, indexed by atom bitmask. Only sensible for few atoms.
    pub fn elements(&self) -> Vec<Dfa> {
        (0..1usize << self.n_atoms)
            .map(|mask| {
                let set: Vec<bool> = (0..self.n_atoms).map(|j| mask >> j & 1 == 1).collect();
                self.element(&set)
            })
            .collect()
    }

    /// The atom set of `lang` if it belongs to the algebra.
    pub fn decompose(&self, lang: &Dfa) -> Option<Vec<bool>> {
        if lang.alphabet() != &self.alphabet {
            return None;
        }
        let mut value: Vec<Option<bool>> = vec![None; self.n_atoms];
        let mut seen = HashSet::from([(0usize, lang.initial())]);
        let mut stack = vec![(0usize, lang.initial())];
        while let Some((q, p)) = stack.pop() {
            let acc = lang.is_accepting(p);
            match value[self.cell[q]] {
                Some(v) if v != acc => return None,
                _ => value[self.cell[q]] = Some(acc),
            }
            for a in 0..self.alphabet.len() {
                let next = (self.delta[q][a], lang.step(p, a));
                if seen.insert(next) {
                    stack.push(next);
                }
            }
        }
        Some(value.into_iter().map(|v| v.unwrap_or(false)).collect())
    }

    pub fn contains(&self, lang: &Dfa) -> bool {
        self.decompose(lang).is_some()
    }

    pub fn is_subalgebra_of(&self, other: &DfaAlgebra) -> bool {
        self.alphabet == other.alphabet && self.atoms().iter().all(|a| other.contains(a))
    }

    /// Equality of element sets.
    pub fn same_as(&self, other: &DfaAlgebra) -> bool {
        self.n_atoms == other.n_atoms && self.is_subalgebra_of(other)
    }

    /// The smallest algebra containing both.
    pub fn join(&self, other: &DfaAlgebra, caps: &Caps) -> Result<DfaAlgebra> {
        let mut gens = self.atoms();
        gens.extend(other.atoms());
        DfaAlgebra::generate(&self.alphabet, &gens, caps)
    }

    /// A letter quotient of an atom that falls outside the algebra, as
    /// `(atom, letter, left?)`.
    pub fn quotient_witness(&self) -> Option<(usize, usize, bool)> {
        for i in 0..self.n_atoms {
            let atom = self.atom(i);
            for a in 0..self.alphabet.len() {
                if !self.contains(&atom.left_quotient(&[a])) {
                    return Some((i, a, true));
                }
                if !self.contains(&atom.right_quotient(&[a])) {
                    return Some((i, a, false));
                }
            }
        }
        None
    }

    pub fn is_quotient_closed(&self) -> bool {
        self.quotient_witness().is_none()
    }
}

/// The Boolean algebra closed under letter (hence word) quotients generated
/// by `gens`.
pub fn quotient_closure(alphabet: &Alphabet, gens: &[Dfa], caps: &Caps) -> Result<DfaAlgebra> {
    let mut seen: HashSet<Dfa> = HashSet::new();
    let mut all: Vec<Dfa> = Vec::new();
    let mut queue: Vec<Dfa> = gens.iter().map(Dfa::minimize).collect();
    while let Some(l) = queue.pop() {
        if l.alphabet() != alphabet {
            return Err(Error::AlphabetMismatch(format!("{} vs {}", alphabet, l.alphabet())));
        }
        if !seen.insert(l.clone()) {
            continue;
        }
        if seen.len() > caps.monoid {
            return Err(Error::cap("quotient closure", caps.monoid));
        }
        for a in 0..alphabet.len() {
            queue.push(l.left_quotient(&[a]));
            queue.push(l.right_quotient(&[a]));
        }
        all.push(l);
    }
    DfaAlgebra::generate(alphabet, &all, caps)
}
