use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::words::Alphabet;

/// A complete deterministic automaton.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: usize,
    accepting: Vec<bool>,
    delta: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct DfaJson {
    alphabet: Alphabet,
    states: usize,
    initial: usize,
    accepting: Vec<usize>,
    delta: Vec<Vec<usize>>,
}

impl Serialize for Dfa {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DfaJson {
            alphabet: self.alphabet.clone(),
            states: self.n_states(),
            initial: self.initial,
            accepting: (0..self.n_states()).filter(|&q| self.accepting[q]).collect(),
            delta: self.delta.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Dfa {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = DfaJson::deserialize(d)?;
        if j.delta.len() != j.states {
            return Err(serde::de::Error::custom("delta length differs from states"));
        }
        let mut accepting = vec![false; j.states];
        for q in j.accepting {
            *accepting
                .get_mut(q)
                .ok_or_else(|| serde::de::Error::custom("accepting state out of range"))? = true;
        }
        Dfa::new(j.alphabet, j.initial, accepting, j.delta).map_err(serde::de::Error::custom)
    }
}

/// Coarsest partition of `0..n` refining `initial` that is stable under
/// `delta`. Returns a class index per state.
pub(crate) fn refine(delta: &[Vec<usize>], initial: &[usize]) -> Vec<usize> {
    let mut class = initial.to_vec();
    let mut count = {
        let mut seen: Vec<usize> = class.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    };
    loop {
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let next: Vec<usize> = (0..class.len())
            .map(|q| {
                let mut key = Vec::with_capacity(delta[q].len() + 1);
                key.push(class[q]);
                key.extend(delta[q].iter().map(|&r| class[r]));
                let n = ids.len();
                *ids.entry(key).or_insert(n)
            })
            .collect();
        let new_count = ids.len();
        class = next;
        if new_count == count {
            return class;
        }
        count = new_count;
    }
}

impl Dfa {
    pub fn new(
        alphabet: Alphabet,
        initial: usize,
        accepting: Vec<bool>,
        delta: Vec<Vec<usize>>,
    ) -> Result<Dfa> {
        let n = delta.len();
        if n == 0 || initial >= n || accepting.len() != n {
            return Err(Error::Invalid("malformed automaton".into()));
        }
        for row in &delta {
            if row.len() != alphabet.len() || row.iter().any(|&r| r >= n) {
                return Err(Error::Invalid("transition table is not total".into()));
            }
        }
        Ok(Dfa {
            alphabet,
            initial,
            accepting,
            delta,
        })
    }

    /// Builds the reachable part of an automaton given implicitly by a state
    /// type, then minimizes it.
    pub fn explore<S, FStep, FAcc>(
        alphabet: &Alphabet,
        start: S,
        mut step: FStep,
        mut accept: FAcc,
        caps: &Caps,
        stage: &str,
    ) -> Result<Dfa>
    where
        S: Clone + Eq + std::hash::Hash,
        FStep: FnMut(&S, usize) -> S,
        FAcc: FnMut(&S) -> bool,
    {
        let mut index: HashMap<S, usize> = HashMap::new();
        let mut states = vec![start.clone()];
        index.insert(start, 0);
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let mut row = Vec::with_capacity(alphabet.len());
            for a in 0..alphabet.len() {
                let t = step(&states[i], a);
                let id = match index.get(&t) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= caps.dfa_states {
                            return Err(Error::cap(stage, caps.dfa_states));
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
        let accepting = states.iter().map(&mut accept).collect();
        Ok(Dfa {
            alphabet: alphabet.clone(),
            initial: 0,
            accepting,
            delta,
        }
        .minimize())
    }

    pub fn universal(alphabet: &Alphabet) -> Dfa {
        Dfa {
            alphabet: alphabet.clone(),
            initial: 0,
            accepting: vec![true],
            delta: vec![vec![0; alphabet.len()]],
        }
    }

    pub fn empty(alphabet: &Alphabet) -> Dfa {
        Dfa {
            accepting: vec![false],
            ..Dfa::universal(alphabet)
        }
    }

    /// Words containing at least one letter for which `pred` holds.
    pub fn contains_letter(alphabet: &Alphabet, pred: impl Fn(usize) -> bool) -> Dfa {
        let delta = vec![
            (0..alphabet.len()).map(|a| usize::from(pred(a))).collect(),
            vec![1; alphabet.len()],
        ];
        Dfa {
            alphabet: alphabet.clone(),
            initial: 0,
            accepting: vec![false, true],
            delta,
        }
        .minimize()
    }

    /// Words in which the number of letters satisfying `pred` is `r` mod `q`.
    pub fn count_mod(alphabet: &Alphabet, pred: impl Fn(usize) -> bool, q: usize, r: usize) -> Dfa {
        let delta = (0..q)
            .map(|s| {
                (0..alphabet.len())
                    .map(|a| if pred(a) { (s + 1) % q } else { s })
                    .collect()
            })
            .collect();
        Dfa {
            alphabet: alphabet.clone(),
            initial: 0,
            accepting: (0..q).map(|s| s == r % q).collect(),
            delta,
        }
        .minimize()
    }

    /// The finite language of one word.
    pub fn singleton(alphabet: &Alphabet, word: &[usize]) -> Dfa {
        let n = word.len();
        let sink = n + 1;
        let delta = (0..=sink)
            .map(|q| {
                (0..alphabet.len())
                    .map(|a| if q < n && word[q] == a { q + 1 } else { sink })
                    .collect()
            })
            .collect();
        Dfa {
            alphabet: alphabet.clone(),
            initial: 0,
            accepting: (0..=sink).map(|q| q == n).collect(),
            delta,
        }
        .minimize()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n_states(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn step(&self, q: usize, a: usize) -> usize {
        self.delta[q][a]
    }

    pub fn delta(&self) -> &[Vec<usize>] {
        &self.delta
    }

    pub fn run_from(&self, q: usize, word: &[usize]) -> usize {
        word.iter().fold(q, |q, &a| self.delta[q][a])
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.accepting[self.run_from(self.initial, word)]
    }

    /// Same automaton over an alphabet of the same size with other names.
    pub fn rename_alphabet(&self, alphabet: &Alphabet) -> Result<Dfa> {
        if alphabet.len() != self.alphabet.len() {
            return Err(Error::AlphabetMismatch(format!(
                "{} vs {}",
                self.alphabet, alphabet
            )));
        }
        Ok(Dfa {
            alphabet: alphabet.clone(),
            ..self.clone()
        })
    }

    fn reachable(&self) -> Vec<usize> {
        let mut order = vec![self.initial];
        let mut seen = vec![false; self.n_states()];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            for &r in &self.delta[order[i]] {
                if !seen[r] {
                    seen[r] = true;
                    order.push(r);
                }
            }
            i += 1;
        }
        order
    }

    /// The canonical minimal automaton: reachable states, Moore refinement,
    /// then BFS renumbering from the initial state with letters in order.
    pub fn minimize(&self) -> Dfa {
        let reach = self.reachable();
        let mut local = vec![usize::MAX; self.n_states()];
        for (i, &q) in reach.iter().enumerate() {
            local[q] = i;
        }
        let delta: Vec<Vec<usize>> = reach
            .iter()
            .map(|&q| self.delta[q].iter().map(|&r| local[r]).collect())
            .collect();
        let init: Vec<usize> = reach.iter().map(|&q| usize::from(self.accepting[q])).collect();
        let class = refine(&delta, &init);
        let n_classes = class.iter().max().map_or(0, |m| m + 1);
        let mut rep = vec![usize::MAX; n_classes];
        for (q, &c) in class.iter().enumerate() {
            if rep[c] == usize::MAX {
                rep[c] = q;
            }
        }
        let mut number = vec![usize::MAX; n_classes];
        let mut order = vec![class[0]];
        number[class[0]] = 0;
        let mut i = 0;
        while i < order.len() {
            let q = rep[order[i]];
            for &r in &delta[q] {
                let c = class[r];
                if number[c] == usize::MAX {
                    number[c] = order.len();
                    order.push(c);
                }
            }
            i += 1;
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            initial: 0,
            accepting: order.iter().map(|&c| init[rep[c]] == 1).collect(),
            delta: order
                .iter()
                .map(|&c| delta[rep[c]].iter().map(|&r| number[class[r]]).collect())
                .collect(),
        }
    }

    pub fn complement(&self) -> Dfa {
        Dfa {
            accepting: self.accepting.iter().map(|b| !b).collect(),
            ..self.clone()
        }
    }

    fn check_alphabet(&self, other: &Dfa) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "{} vs {}",
                self.alphabet, other.alphabet
            )));
        }
        Ok(())
    }

    /// Reachable product with acceptance `op`, minimized.
    pub fn product(&self, other: &Dfa, op: impl Fn(bool, bool) -> bool, caps: &Caps) -> Result<Dfa> {
        self.check_alphabet(other)?;
        Dfa::explore(
            &self.alphabet,
            (self.initial, other.initial),
            |&(p, q), a| (self.delta[p][a], other.delta[q][a]),
            |&(p, q)| op(self.accepting[p], other.accepting[q]),
            caps,
            "dfa product",
        )
    }

    pub fn intersection(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a && b, &Caps::default())
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a || b, &Caps::default())
    }

    pub fn difference(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a && !b, &Caps::default())
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_word().is_none()
    }

    /// Shortlex-least accepted word.
    pub fn shortest_word(&self) -> Option<Vec<usize>> {
        let n = self.n_states();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            if self.accepting[q] {
                let mut word = Vec::new();
                let mut cur = q;
                while let Some((p, a)) = parent[cur] {
                    word.push(a);
                    cur = p;
                }
                word.reverse();
                return Some(word);
            }
            for (a, &r) in self.delta[q].iter().enumerate() {
                if !seen[r] {
                    seen[r] = true;
                    parent[r] = Some((q, a));
                    queue.push_back(r);
                }
            }
        }
        None
    }

    /// Exact language equality.
    pub fn equivalent(&self, other: &Dfa) -> bool {
        self.alphabet == other.alphabet && self.minimize() == other.minimize()
    }

    /// A shortlex-least word in the symmetric difference, if any.
    pub fn distinguishing_word(&self, other: &Dfa) -> Result<Option<Vec<usize>>> {
        Ok(self
            .product(other, |a, b| a != b, &Caps::default())?
            .shortest_word())
    }

    pub fn is_subset_of(&self, other: &Dfa) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// `u⁻¹L`.
    pub fn left_quotient(&self, u: &[usize]) -> Dfa {
        Dfa {
            initial: self.run_from(self.initial, u),
            ..self.clone()
        }
        .minimize()
    }

    /// `Lu⁻¹`.
    pub fn right_quotient(&self, u: &[usize]) -> Dfa {
        Dfa {
            accepting: (0..self.n_states())
                .map(|q| self.accepting[self.run_from(q, u)])
                .collect(),
            ..self.clone()
        }
        .minimize()
    }

    /// `(h*)⁻¹(L)` for the letter map `h: B → A` given as `map[b] = a`.
    pub fn lp_preimage(&self, domain: &Alphabet, map: &[usize]) -> Result<Dfa> {
        if map.len() != domain.len() || map.iter().any(|&a| a >= self.alphabet.len()) {
            return Err(Error::AlphabetMismatch("letter map is not total".into()));
        }
        Ok(Dfa {
            alphabet: domain.clone(),
            initial: self.initial,
            accepting: self.accepting.clone(),
            delta: self
                .delta
                .iter()
                .map(|row| map.iter().map(|&a| row[a]).collect())
                .collect(),
        }
        .minimize())
    }

    /// Accepted words of length at most `bound`, shortlex order.
    pub fn words_up_to(&self, bound: usize) -> Vec<Vec<usize>> {
        self.alphabet
            .words_up_to(bound)
            .filter(|w| self.accepts(w))
            .collect()
    }

    /// Membership by recursion on words of length ≤ `bound`, packed as a bit
    /// vector over the shortlex enumeration. Useful as a language fingerprint.
    pub fn fingerprint(&self, bound: usize) -> Vec<bool> {
        self.alphabet.words_up_to(bound).map(|w| self.accepts(&w)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    fn contains_a() -> Dfa {
        Dfa::contains_letter(&ab(), |l| l == 0)
    }

    #[test]
    fn minimal_contains_a_has_two_states() {
        let d = contains_a();
        assert_eq!(d.n_states(), 2);
        assert!(d.accepts(&[1, 0]));
        assert!(!d.accepts(&[1, 1]));
    }

    #[test]
    fn canonical_form_is_unique() {
        // a redundant three-state automaton for the same language
        let d = Dfa::new(
            ab(),
            0,
            vec![false, true, true],
            vec![vec![1, 0], vec![2, 2], vec![1, 1]],
        )
        .unwrap();
        assert_eq!(d.minimize(), contains_a());
        assert!(d.equivalent(&contains_a()));
    }

    #[test]
    fn boolean_ops_extensional() {
        let a = contains_a();
        let b = Dfa::contains_letter(&ab(), |l| l == 1);
        let i = a.intersection(&b).unwrap();
        let u = a.union(&b).unwrap();
        let d = a.difference(&b).unwrap();
        for w in ab().words_up_to(6) {
            assert_eq!(i.accepts(&w), a.accepts(&w) && b.accepts(&w));
            assert_eq!(u.accepts(&w), a.accepts(&w) || b.accepts(&w));
            assert_eq!(d.accepts(&w), a.accepts(&w) && !b.accepts(&w));
            assert_eq!(a.complement().accepts(&w), !a.accepts(&w));
        }
        assert!(a.intersection(&a.complement()).unwrap().is_empty());
        assert!(a.union(&Dfa::empty(&ab())).unwrap().equivalent(&a));
    }

    #[test]
    fn quotients_extensional() {
        let l = Dfa::count_mod(&ab(), |l| l == 0, 3, 1);
        for u in ab().words_up_to(2) {
            let lq = l.left_quotient(&u);
            let rq = l.right_quotient(&u);
            for w in ab().words_up_to(5) {
                let uw: Vec<usize> = u.iter().chain(&w).copied().collect();
                let wu: Vec<usize> = w.iter().chain(&u).copied().collect();
                assert_eq!(lq.accepts(&w), l.accepts(&uw));
                assert_eq!(rq.accepts(&w), l.accepts(&wu));
            }
        }
        assert_eq!(l.left_quotient(&[]), l.minimize());
    }

    #[test]
    fn lp_preimage_extensional() {
        let c = Alphabet::from_chars("c").unwrap();
        let even = Dfa::count_mod(&c, |_| true, 2, 0);
        let pre = even.lp_preimage(&ab(), &[0, 0]).unwrap();
        for w in ab().words_up_to(6) {
            assert_eq!(pre.accepts(&w), w.len() % 2 == 0);
        }
        assert!(even.lp_preimage(&ab(), &[0]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let d = contains_a();
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.contains("\"states\":2"));
        let back: Dfa = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<Dfa>(
            r#"{"alphabet":["a"],"states":1,"initial":0,"accepting":[3],"delta":[[0]]}"#
        )
        .is_err());
    }

    #[test]
    fn shortest_and_distinguishing() {
        let a = contains_a();
        assert_eq!(a.shortest_word(), Some(vec![0]));
        let b = Dfa::contains_letter(&ab(), |l| l == 1);
        assert_eq!(a.distinguishing_word(&b).unwrap(), Some(vec![0]));
        assert_eq!(a.distinguishing_word(&a).unwrap(), None);
        assert!(Dfa::singleton(&ab(), &[]).accepts(&[]));
    }
}
