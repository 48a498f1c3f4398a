//! Finite Boolean subalgebras of the powerset of a bounded carrier of marked
//! words, their atoms, and the dual maps of inclusions.

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::words::{Alphabet, Context, MarkedWord, Word};

/// All marked words over an alphabet and context up to a length bound, in
/// canonical order: by length, then word, then marks.
#[derive(Debug)]
pub struct Carrier {
    alphabet: Alphabet,
    context: Context,
    bound: usize,
    points: Vec<MarkedWord>,
    index: HashMap<MarkedWord, usize>,
}

impl PartialEq for Carrier {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.context == other.context && self.bound == other.bound
    }
}

impl Eq for Carrier {}

fn mark_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(n.pow(k as u32));
    let mut cur = vec![1usize; k];
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n {
                cur[i] += 1;
                for c in &mut cur[i + 1..] {
                    *c = 1;
                }
                break;
            }
        }
    }
}

impl Carrier {
    pub fn new(alphabet: &Alphabet, context: &Context, bound: usize) -> Arc<Carrier> {
        let mut points = Vec::new();
        for w in alphabet.words_up_to(bound) {
            for marks in mark_tuples(w.len(), context.len()) {
                points.push(MarkedWord {
                    word: Word(w.clone()),
                    marks,
                });
            }
        }
        let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Arc::new(Carrier {
            alphabet: alphabet.clone(),
            context: context.clone(),
            bound,
            points,
            index,
        })
    }

    /// Plain words up to `bound`.
    pub fn words(alphabet: &Alphabet, bound: usize) -> Arc<Carrier> {
        Carrier::new(alphabet, &Context::empty(), bound)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[MarkedWord] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &MarkedWord {
        &self.points[i]
    }

    pub fn index_of(&self, p: &MarkedWord) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn subset(&self, mut member: impl FnMut(&MarkedWord) -> bool) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.len());
        for (i, p) in self.points.iter().enumerate() {
            if member(p) {
                s.insert(i);
            }
        }
        s
    }

    pub fn full(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.len());
        s.insert_range(..);
        s
    }

    pub fn render(&self, i: usize) -> String {
        self.points[i].render(&self.alphabet, &self.context)
    }
}

/// A finite Boolean subalgebra of the powerset of a carrier, stored by its
/// atoms (ordered by least carrier element).
#[derive(Debug, Clone)]
pub struct FinBA {
    carrier: Arc<Carrier>,
    atoms: Vec<FixedBitSet>,
    cell: Vec<u32>,
}

impl PartialEq for FinBA {
    fn eq(&self, other: &Self) -> bool {
        self.carrier == other.carrier && self.atoms == other.atoms
    }
}

impl Eq for FinBA {}

impl Serialize for FinBA {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FinBA", 2)?;
        st.serialize_field(
            "carrier",
            &serde_json::json!({
                "alphabet": self.carrier.alphabet,
                "context": self.carrier.context,
                "bound": self.carrier.bound,
            }),
        )?;
        let atoms: Vec<Vec<String>> = self
            .atoms
            .iter()
            .map(|a| a.ones().map(|i| self.carrier.render(i)).collect())
            .collect();
        st.serialize_field("atoms", &atoms)?;
        st.end()
    }
}

impl FinBA {
    /// The smallest Boolean subalgebra containing `gens`.
    pub fn generate(carrier: &Arc<Carrier>, gens: &[FixedBitSet], caps: &Caps) -> Result<FinBA> {
        if gens.iter().any(|g| g.len() != carrier.len()) {
            return Err(Error::Invalid("generator is not a subset of the carrier".into()));
        }
        let words = gens.len().div_ceil(64);
        let mut ids: HashMap<Vec<u64>, u32> = HashMap::new();
        let mut cell = Vec::with_capacity(carrier.len());
        for p in 0..carrier.len() {
            let mut key = vec![0u64; words];
            for (j, g) in gens.iter().enumerate() {
                if g.contains(p) {
                    key[j / 64] |= 1 << (j % 64);
                }
            }
            let n = ids.len() as u32;
            let id = *ids.entry(key).or_insert(n);
            if ids.len() > caps.atoms {
                return Err(Error::cap("boolean algebra atoms", caps.atoms));
            }
            cell.push(id);
        }
        Ok(FinBA::from_cells(carrier, cell, ids.len()))
    }

    /// Builds from a cell index per point, cells numbered by first point.
    pub(crate) fn from_cells(carrier: &Arc<Carrier>, cell: Vec<u32>, n: usize) -> FinBA {
        let mut atoms = vec![FixedBitSet::with_capacity(carrier.len()); n];
        for (p, &c) in cell.iter().enumerate() {
            atoms[c as usize].insert(p);
        }
        FinBA {
            carrier: Arc::clone(carrier),
            atoms,
            cell,
        }
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn atoms(&self) -> &[FixedBitSet] {
        &self.atoms
    }

    pub fn n_atoms(&self) -> usize {
        self.atoms.len()
    }

    /// The atom containing point index `p`.
    pub fn atom_at(&self, p: usize) -> usize {
        self.cell[p] as usize
    }

    /// The atom containing `point`.
    pub fn atom_of(&self, point: &MarkedWord) -> Result<usize> {
        let p = self
            .carrier
            .index_of(point)
            .ok_or(Error::PointOutsideCarrier)?;
        Ok(self.atom_at(p))
    }

    /// The atoms making up `set`, or `None` if it is not an element.
    pub fn decompose(&self, set: &FixedBitSet) -> Option<Vec<bool>> {
        let mut out = Vec::with_capacity(self.n_atoms());
        for a in &self.atoms {
            if a.is_subset(set) {
                out.push(true);
            } else if a.is_disjoint(set) {
                out.push(false);
            } else {
                return None;
            }
        }
        Some(out)
    }

    pub fn contains(&self, set: &FixedBitSet) -> bool {
        set.len() == self.carrier.len() && self.decompose(set).is_some()
    }

    pub fn element(&self, atoms: &[bool]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.carrier.len());
        for (a, &keep) in self.atoms.iter().zip(atoms) {
            if keep {
                s.union_with(a);
            }
        }
        s
    }

    /// All `2^n` elements, indexed by atom bitmask.
    pub fn elements(&self) -> Vec<FixedBitSet> {
        let n = self.n_atoms();
        (0..1usize << n)
            .map(|mask| {
                let sel: Vec<bool> = (0..n).map(|j| mask >> j & 1 == 1).collect();
                self.element(&sel)
            })
            .collect()
    }

    pub fn is_subalgebra_of(&self, other: &FinBA) -> bool {
        self.carrier == other.carrier && other.atoms.iter().all(|a| {
            let c = self.cell[a.ones().next().expect("atoms are nonempty")];
            a.is_subset(&self.atoms[c as usize])
        })
    }

    pub fn same_as(&self, other: &FinBA) -> bool {
        self == other
    }

    /// The smallest algebra containing both.
    pub fn join(&self, other: &FinBA, caps: &Caps) -> Result<FinBA> {
        let gens: Vec<FixedBitSet> = self.atoms.iter().chain(&other.atoms).cloned().collect();
        FinBA::generate(&self.carrier, &gens, caps)
    }
}

/// The dual of an inclusion `sub ⊆ super`: each atom of `super` goes to the
/// atom of `sub` containing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualMap {
    pub source_atoms: usize,
    pub target_atoms: usize,
    pub table: Vec<usize>,
}

impl DualMap {
    /// `self ∘ other` (apply `other` first).
    pub fn after(&self, other: &DualMap) -> Result<DualMap> {
        if other.target_atoms != self.source_atoms {
            return Err(Error::Invalid("dual maps do not compose".into()));
        }
        Ok(DualMap {
            source_atoms: other.source_atoms,
            target_atoms: self.target_atoms,
            table: other.table.iter().map(|&i| self.table[i]).collect(),
        })
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }
}

pub fn dual_of_inclusion(sub: &FinBA, sup: &FinBA) -> Result<DualMap> {
    if !sub.is_subalgebra_of(sup) {
        return Err(Error::NotSubalgebra(
            "some atom of the larger algebra straddles two atoms of the smaller".into(),
        ));
    }
    let table = sup
        .atoms
        .iter()
        .map(|a| sub.atom_at(a.ones().next().expect("atoms are nonempty")))
        .collect();
    Ok(DualMap {
        source_atoms: sup.n_atoms(),
        target_atoms: sub.n_atoms(),
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(c: &Carrier, idx: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(c.len());
        for &i in idx {
            s.insert(i);
        }
        s
    }

    #[test]
    fn carrier_order() {
        let ab = Alphabet::from_chars("ab").unwrap();
        let c = Carrier::new(&ab, &Context::single("x"), 2);
        // a[1], b[1], aa[1], aa[2], ab[1], …
        assert_eq!(c.len(), 2 + 4 * 2);
        assert_eq!(c.render(0), "a[x=1]");
        assert_eq!(c.render(3), "aa[x=2]");
        let plain = Carrier::words(&ab, 2);
        assert_eq!(plain.len(), 7);
        assert_eq!(plain.render(0), "ε");
        let two = Carrier::new(&ab, &Context::new(["x", "y"]).unwrap(), 2);
        assert_eq!(two.len(), 2 + 4 * 4);
    }

    #[test]
    fn generate_small() {
        let a = Alphabet::from_chars("a").unwrap();
        let c = Carrier::words(&a, 2); // ε, a, aa
        let ba = FinBA::generate(&c, &[set(&c, &[1])], &Caps::default()).unwrap();
        assert_eq!(ba.n_atoms(), 2);
        assert_eq!(ba.atoms()[0], set(&c, &[0, 2]));
        assert_eq!(ba.elements().len(), 4);
        let triv = FinBA::generate(&c, &[], &Caps::default()).unwrap();
        assert_eq!(triv.n_atoms(), 1);
        let d = dual_of_inclusion(&triv, &ba).unwrap();
        assert_eq!(d.table, vec![0, 0]);
        let id = dual_of_inclusion(&ba, &ba).unwrap();
        assert_eq!(id.table, vec![0, 1]);
        assert!(dual_of_inclusion(&ba, &triv).is_err());
        assert!(ba.atom_of(&MarkedWord::plain(Word(vec![0, 0, 0]))).is_err());
    }

    #[test]
    fn atom_cap() {
        let a = Alphabet::from_chars("a").unwrap();
        let c = Carrier::words(&a, 4);
        let gens: Vec<FixedBitSet> = (0..5).map(|i| set(&c, &[i])).collect();
        let caps = Caps { atoms: 3, ..Caps::default() };
        assert!(matches!(FinBA::generate(&c, &gens, &caps), Err(Error::CapExceeded { .. })));
    }
}
