//! Seeded random instances for property checks and the verification
//! suites.

use fixedbitset::FixedBitSet;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::caps::Caps;
use crate::error::Result;
use crate::logic::{Formula, Registry};
use crate::regular::Dfa;
use crate::semidirect::{component_dfa, Component};
use crate::substitution::{DeltaAlgebra, GammaQ, SentenceClass};
use crate::words::Alphabet;

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape parameters for random formulas.
#[derive(Debug, Clone)]
pub struct FormulaShape {
    pub quantifiers: Vec<String>,
    pub predicates: Vec<String>,
    pub depth: usize,
    pub size: usize,
}

impl FormulaShape {
    pub fn new(quantifiers: &[&str], predicates: &[&str], depth: usize, size: usize) -> FormulaShape {
        FormulaShape {
            quantifiers: quantifiers.iter().map(|s| s.to_string()).collect(),
            predicates: predicates.iter().map(|s| s.to_string()).collect(),
            depth,
            size,
        }
    }
}

fn atomic(rng: &mut Rand, alphabet: &Alphabet, vars: &[String], shape: &FormulaShape, registry: &Registry) -> Formula {
    if vars.is_empty() {
        return if rng.random_bool(0.5) { Formula::True } else { Formula::False };
    }
    let v = vars.choose(rng).expect("nonempty");
    if !shape.predicates.is_empty() && rng.random_bool(0.35) {
        let name = shape.predicates.choose(rng).expect("nonempty");
        let arity = registry.predicate(name).map(|p| p.arity).unwrap_or(2);
        let args: Vec<&str> = (0..arity).map(|_| vars.choose(rng).expect("nonempty").as_str()).collect();
        return Formula::num(name.as_str(), &args);
    }
    let a = rng.random_range(0..alphabet.len());
    Formula::letter(alphabet.symbol(a), v.as_str())
}

#[allow(clippy::too_many_arguments)]
fn build(
    rng: &mut Rand,
    alphabet: &Alphabet,
    vars: &mut Vec<String>,
    depth: usize,
    size: usize,
    shape: &FormulaShape,
    registry: &Registry,
    fresh: &mut usize,
) -> Formula {
    if size <= 1 {
        return atomic(rng, alphabet, vars, shape, registry);
    }
    let quantify = depth > 0 && !shape.quantifiers.is_empty() && rng.random_bool(0.4);
    if quantify {
        let q = shape.quantifiers.choose(rng).expect("nonempty").clone();
        let v = format!("y{fresh}");
        *fresh += 1;
        vars.push(v.clone());
        let body = build(rng, alphabet, vars, depth - 1, size - 1, shape, registry, fresh);
        vars.pop();
        return Formula::quant(q, v, body);
    }
    match rng.random_range(0..3) {
        0 => Formula::not(build(rng, alphabet, vars, depth, size - 1, shape, registry, fresh)),
        k => {
            let left = rng.random_range(1..size.max(2));
            let a = build(rng, alphabet, vars, depth, left, shape, registry, fresh);
            let b = build(rng, alphabet, vars, depth, size.saturating_sub(left).max(1), shape, registry, fresh);
            if k == 1 {
                Formula::and(a, b)
            } else {
                Formula::or(a, b)
            }
        }
    }
}

/// A random formula whose free variables are among `free`; bound
/// variables are named `y0, y1, …`.
pub fn formula(rng: &mut Rand, alphabet: &Alphabet, free: &[&str], shape: &FormulaShape, registry: &Registry) -> Formula {
    let mut vars: Vec<String> = free.iter().map(|s| s.to_string()).collect();
    let mut fresh = 0;
    build(rng, alphabet, &mut vars, shape.depth, shape.size, shape, registry, &mut fresh)
}

/// A random sentence.
pub fn sentence(rng: &mut Rand, alphabet: &Alphabet, shape: &FormulaShape, registry: &Registry) -> Formula {
    formula(rng, alphabet, &[], shape, registry)
}

/// A random `Δ` in context `{var}` with between 2 and `max_atoms` atoms.
#[allow(clippy::too_many_arguments)]
pub fn delta(
    rng: &mut Rand,
    alphabet: &Alphabet,
    var: &str,
    max_atoms: usize,
    bound: usize,
    shape: &FormulaShape,
    registry: &Registry,
    caps: &Caps,
) -> Result<DeltaAlgebra> {
    loop {
        let n = rng.random_range(1..=2);
        let gens: Vec<Formula> = (0..n).map(|_| formula(rng, alphabet, &[var], shape, registry)).collect();
        let d = DeltaAlgebra::new(alphabet, var, gens, bound, registry, caps)?;
        if (2..=max_atoms.max(2)).contains(&d.n_atoms()) {
            return Ok(d);
        }
    }
}

/// A chain `Δ1 ⊆ Δ2 ⊆ Δ3` built by adding one generator at a time.
pub fn chain(
    rng: &mut Rand,
    alphabet: &Alphabet,
    var: &str,
    bound: usize,
    shape: &FormulaShape,
    registry: &Registry,
    caps: &Caps,
) -> Result<Vec<DeltaAlgebra>> {
    let mut gens = Vec::new();
    let mut out = Vec::new();
    for _ in 0..3 {
        gens.push(formula(rng, alphabet, &[var], shape, registry));
        out.push(DeltaAlgebra::new(alphabet, var, gens.clone(), bound, registry, caps)?);
    }
    Ok(out)
}

/// A random member of `Γ_Q(C)`: a Boolean combination of up to three
/// generators.
pub fn gamma_sentence(rng: &mut Rand, gamma: &GammaQ, atoms: &Alphabet) -> Formula {
    let gens = gamma.generators(atoms);
    let mut f = gens.choose(rng).expect("generators exist").clone();
    for _ in 0..rng.random_range(0..3) {
        let g = gens.choose(rng).expect("generators exist").clone();
        let g = if rng.random_bool(0.5) { Formula::not(g) } else { g };
        f = if rng.random_bool(0.5) { Formula::and(f, g) } else { Formula::or(f, g) };
    }
    if rng.random_bool(0.3) {
        Formula::not(f)
    } else {
        f
    }
}

/// A random subset of `0..n`, each element kept with probability `p`.
pub fn subset(rng: &mut Rand, n: usize, p: f64) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for i in 0..n {
        s.set(i, rng.random_bool(p));
    }
    s
}

/// A random complete automaton with `states` states, minimized.
pub fn dfa(rng: &mut Rand, alphabet: &Alphabet, states: usize) -> Dfa {
    let n = states.max(1);
    let delta = (0..n)
        .map(|_| (0..alphabet.len()).map(|_| rng.random_range(0..n)).collect())
        .collect();
    let accepting = (0..n).map(|_| rng.random_bool(0.5)).collect();
    Dfa::new(alphabet.clone(), 0, accepting, delta)
        .expect("well-formed")
        .minimize()
}

/// A random language over `A × 2` inside `A* ∪ A*⊗ℕ`.
pub fn marked_generator(rng: &mut Rand, marked: &Alphabet, states: usize) -> Dfa {
    let d = dfa(rng, marked, states);
    let keep = if rng.random_bool(0.5) {
        component_dfa(marked, Component::Marked)
    } else {
        component_dfa(marked, Component::Plain)
            .union(&component_dfa(marked, Component::Marked))
            .expect("same alphabet")
    };
    d.intersection(&keep).expect("same alphabet")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_replay() {
        let reg = Registry::standard();
        let ab = Alphabet::from_chars("ab").unwrap();
        let shape = FormulaShape::new(&["E", "mod[2,0]"], &["<"], 2, 7);
        let a: Vec<String> = {
            let mut r = rng(7);
            (0..5).map(|_| sentence(&mut r, &ab, &shape, &reg).to_string()).collect()
        };
        let mut r = rng(7);
        let b: Vec<String> = (0..5).map(|_| sentence(&mut r, &ab, &shape, &reg).to_string()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn formulas_are_well_scoped() {
        let reg = Registry::standard();
        let ab = Alphabet::from_chars("ab").unwrap();
        let shape = FormulaShape::new(&["E", "E1"], &["<", "succ"], 3, 9);
        let mut r = rng(1);
        for _ in 0..50 {
            let f = formula(&mut r, &ab, &["x"], &shape, &reg);
            assert!(f.free_vars().iter().all(|v| v == "x"), "{f}");
            assert!(f.quantifier_depth() <= 3);
            reg.check(&f).unwrap();
            crate::logic::parse(&f.to_string()).unwrap();
        }
    }

    #[test]
    fn deltas_and_automata() {
        let reg = Registry::standard();
        let ab = Alphabet::from_chars("ab").unwrap();
        let shape = FormulaShape::new(&["E"], &["<"], 1, 4);
        let mut r = rng(3);
        let d = delta(&mut r, &ab, "x", 3, 4, &shape, &reg, &Caps::default()).unwrap();
        assert!((2..=3).contains(&d.n_atoms()));
        let c = chain(&mut r, &ab, "x", 4, &shape, &reg, &Caps::default()).unwrap();
        assert_eq!(c.len(), 3);
        let m = dfa(&mut r, &ab, 4);
        assert!(m.n_states() <= 4);
    }
}
