use crate::error::{Error, Result};
use crate::regular::dfa::Dfa;
use crate::words::BoundedLanguage;

/// Number of words of length at most `n` over `k` letters.
fn ball(k: usize, n: usize) -> usize {
    (0..=n).map(|i| k.pow(i as u32)).sum()
}

/// A small automaton agreeing with `lang` on every word up to its bound.
///
/// Trie nodes are merged greedily, in shortlex order, with the first earlier
/// class whose representative has the same residual up to the remaining
/// length. The result is verified; if greedy merging breaks agreement the
/// minimized trie (rejecting everything beyond the bound) is returned
/// instead. Fails when the result needs more than `maxstates` states.
pub fn dfa_from_bounded(lang: &BoundedLanguage, maxstates: usize) -> Result<Dfa> {
    let alphabet = &lang.alphabet;
    let k = alphabet.len();
    let bound = lang.bound;
    let nodes = ball(k, bound);
    if nodes > 1 << 24 {
        return Err(Error::cap("bounded trie", 1 << 24));
    }
    // node ids follow shortlex order; children of node i at depth d are
    // computed from its index within its level
    let mut level_start = vec![0usize; bound + 2];
    for d in 1..=bound + 1 {
        level_start[d] = level_start[d - 1] + k.pow(d as u32 - 1);
    }
    let depth_of = |i: usize| (0..=bound).rfind(|&d| level_start[d] <= i).unwrap_or(0);
    let child = |i: usize, a: usize| {
        let d = depth_of(i);
        level_start[d + 1] + (i - level_start[d]) * k + a
    };
    let words: Vec<Vec<usize>> = alphabet.words_up_to(bound).collect();
    let member: Vec<bool> = words.iter().map(|w| lang.contains(w)).collect();

    // residual of node i restricted to suffixes of length ≤ r
    let residual = |i: usize, r: usize| -> Vec<bool> {
        let mut out = vec![member[i]];
        let mut frontier = vec![i];
        for _ in 0..r {
            let mut next = Vec::with_capacity(frontier.len() * k);
            for &n in &frontier {
                for a in 0..k {
                    let c = child(n, a);
                    out.push(member[c]);
                    next.push(c);
                }
            }
            frontier = next;
        }
        out
    };

    let mut reps: Vec<usize> = Vec::new();
    let mut class = vec![usize::MAX; nodes];
    #[allow(clippy::needless_range_loop)]
    for i in 0..nodes {
        let r = bound - depth_of(i);
        let mine = residual(i, r);
        let found = reps
            .iter()
            .position(|&rep| residual(rep, r) == mine);
        class[i] = match found {
            Some(c) => c,
            None => {
                reps.push(i);
                reps.len() - 1
            }
        };
    }
    let delta: Vec<Vec<usize>> = reps
        .iter()
        .enumerate()
        .map(|(c, &rep)| {
            (0..k)
                .map(|a| {
                    if depth_of(rep) < bound {
                        class[child(rep, a)]
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let accepting = reps.iter().map(|&rep| member[rep]).collect();
    let greedy = Dfa::new(alphabet.clone(), 0, accepting, delta)?.minimize();
    let agrees = |d: &Dfa| words.iter().zip(&member).all(|(w, &m)| d.accepts(w) == m);
    let result = if agrees(&greedy) {
        greedy
    } else {
        let sink = nodes;
        let delta = (0..=sink)
            .map(|i| {
                (0..k)
                    .map(|a| if i < sink && depth_of(i) < bound { child(i, a) } else { sink })
                    .collect()
            })
            .collect();
        let mut accepting = member.clone();
        accepting.push(false);
        Dfa::new(alphabet.clone(), 0, accepting, delta)?.minimize()
    };
    if result.n_states() > maxstates {
        return Err(Error::cap("bounded automaton", maxstates));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    #[test]
    fn star_and_empty() {
        let a = Alphabet::from_chars("a").unwrap();
        let all = BoundedLanguage::from_predicate(&a, 5, |_| true);
        assert_eq!(dfa_from_bounded(&all, 10).unwrap().n_states(), 1);
        let none = BoundedLanguage::from_predicate(&a, 5, |_| false);
        let d = dfa_from_bounded(&none, 10).unwrap();
        assert_eq!(d.n_states(), 1);
        assert!(d.is_empty());
    }

    #[test]
    fn contains_a_is_two_states() {
        let ab = Alphabet::from_chars("ab").unwrap();
        let l = BoundedLanguage::from_predicate(&ab, 6, |w| w.contains(&0));
        let d = dfa_from_bounded(&l, 10).unwrap();
        assert_eq!(d.n_states(), 2);
        for w in ab.words_up_to(6) {
            assert_eq!(d.accepts(&w), w.contains(&0));
        }
    }

    #[test]
    fn irregular_slice_agrees_and_caps() {
        let ab = Alphabet::from_chars("ab").unwrap();
        let maj = |w: &[usize]| 2 * w.iter().filter(|&&l| l == 0).count() > w.len();
        let l = BoundedLanguage::from_predicate(&ab, 6, maj);
        let d = dfa_from_bounded(&l, 1000).unwrap();
        for w in ab.words_up_to(6) {
            assert_eq!(d.accepts(&w), maj(&w));
        }
        assert!(matches!(dfa_from_bounded(&l, 2), Err(Error::CapExceeded { .. })));
    }
}
