use proptest::prelude::*;
use wordlogic::logic::{satisfies, Formula, Registry};
use wordlogic::random::{self, FormulaShape};
use wordlogic::substitution::{check_substitution_principle, check_tower, sigma, DeltaAlgebra, GammaQ};
use wordlogic::words::{Alphabet, Context, MarkedWord, Word};
use wordlogic::Caps;

fn shape() -> FormulaShape {
    FormulaShape::new(&["E", "mod[2,0]"], &["<", "succ"], 1, 5)
}

fn alphabet(i: u8) -> Alphabet {
    Alphabet::from_chars(if i.is_multiple_of(2) { "a" } else { "ab" }).unwrap()
}

fn delta(seed: u64, a: &Alphabet) -> DeltaAlgebra {
    let mut rng = random::rng(seed);
    random::delta(&mut rng, a, "x", 3, 5, &shape(), &Registry::standard(), &Caps::default()).unwrap()
}

fn holds(f: &Formula, w: &[usize], a: &Alphabet) -> bool {
    satisfies(&MarkedWord::plain(Word(w.to_vec())), &Context::empty(), f, a, &Registry::standard()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sigma_is_a_boolean_homomorphism(seed in any::<u64>(), i in any::<u8>()) {
        let a = alphabet(i);
        let d = delta(seed, &a);
        let gamma = GammaQ::new(&["E", "mod[2,0]"]);
        let mut rng = random::rng(seed ^ 0x5eed);
        let psi = random::gamma_sentence(&mut rng, &gamma, d.atom_alphabet());
        let chi = random::gamma_sentence(&mut rng, &gamma, d.atom_alphabet());
        let (sp, sc) = (sigma(&gamma, &d, &psi).unwrap(), sigma(&gamma, &d, &chi).unwrap());
        let not = sigma(&gamma, &d, &Formula::not(psi.clone())).unwrap();
        let and = sigma(&gamma, &d, &Formula::and(psi.clone(), chi.clone())).unwrap();
        for w in a.words_up_to(5) {
            let (p, c) = (holds(&sp, &w, &a), holds(&sc, &w, &a));
            prop_assert_eq!(holds(&not, &w, &a), !p);
            prop_assert_eq!(holds(&and, &w, &a), p && c);
        }
    }

    #[test]
    fn substitution_principle_holds(seed in any::<u64>(), i in any::<u8>()) {
        let a = alphabet(i);
        let d = delta(seed, &a);
        let gamma = GammaQ::new(&["E", "mod[2,0]"]);
        let psi = random::gamma_sentence(&mut random::rng(!seed), &gamma, d.atom_alphabet());
        let r = check_substitution_principle(&gamma, &d, &psi, &Registry::standard()).unwrap();
        prop_assert!(r.pass, "{:?}", r.counterexample);
    }

    #[test]
    fn tau_reads_off_atoms(seed in any::<u64>(), i in any::<u8>()) {
        let a = alphabet(i);
        let d = delta(seed, &a);
        for w in a.words_up_to(5) {
            let t = d.tau(&Word(w.clone())).unwrap();
            prop_assert_eq!(t.0.len(), w.len());
            for (pos, &c) in t.0.iter().enumerate() {
                let mw = MarkedWord::new(Word(w.clone()), vec![pos + 1]).unwrap();
                prop_assert_eq!(d.xi_by_formula(&mw).unwrap(), c);
                prop_assert_eq!(d.xi_by_partition(&mw).unwrap(), c);
            }
        }
    }

    #[test]
    fn towers_commute(seed in any::<u64>(), i in any::<u8>()) {
        let a = alphabet(i);
        let reg = Registry::standard();
        let shape = FormulaShape::new(&["E"], &["<", "succ"], 1, 4);
        let chain = random::chain(&mut random::rng(seed), &a, "x", 5, &shape, &reg, &Caps::default()).unwrap();
        let gamma = GammaQ::new(&["E"]).with_budget(1);
        let r = check_tower(&gamma, &chain, &reg, &Caps::default()).unwrap();
        prop_assert!(r.pass, "{:?}", r.counterexample);
    }
}
