use proptest::prelude::*;
use wordlogic::logic::{satisfies, Formula, Registry};
use wordlogic::random::{self, FormulaShape};
use wordlogic::regular::{quotient_closure, FinMonoid};
use wordlogic::semidirect::{
    check_h, check_t_star_quotient, compile_layer, decompose, eta_quotient, h_morphism, verify_t2, DecomposedD,
    MonoidVariety,
};
use wordlogic::words::{Alphabet, Context, MarkedWord, Word};
use wordlogic::Caps;

fn ab() -> Alphabet {
    Alphabet::from_chars("ab").unwrap()
}

/// A decomposed algebra from a random marked generator, if it is small.
fn small_d(seed: u64) -> Option<DecomposedD> {
    let caps = Caps::default();
    let mk = ab().extended(&Context::single("x"));
    let g = random::marked_generator(&mut random::rng(seed), &mk, 3);
    let d = quotient_closure(&mk, &[g], &caps).ok()?;
    decompose(&ab(), &d, &caps).ok().filter(|dd| dd.n_x1() <= 4 && dd.m().size() <= 8)
}

fn assert_monoid(m: &FinMonoid) -> Result<(), TestCaseError> {
    let e = m.identity();
    for a in 0..m.size() {
        prop_assert_eq!(m.mul(a, e), a);
        prop_assert_eq!(m.mul(e, a), a);
        for b in 0..m.size() {
            for c in 0..m.size() {
                prop_assert_eq!(m.mul(m.mul(a, b), c), m.mul(a, m.mul(b, c)));
            }
        }
    }
    Ok(())
}

fn varieties() -> Vec<MonoidVariety> {
    vec![
        MonoidVariety::new("trivial", FinMonoid::trivial()),
        MonoidVariety::new("({0,1},max)", FinMonoid::boolean_or()),
        MonoidVariety::new("Z2", FinMonoid::cyclic(2).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn quotient_products_are_monoids(seed in any::<u64>()) {
        let Some(dd) = small_d(seed) else { return Ok(()) };
        let caps = Caps::default();
        for v in varieties() {
            let eq = eta_quotient(&dd, &v, &caps).unwrap();
            assert_monoid(eq.product.monoid())?;
            let h = h_morphism(&dd, &eq).unwrap();
            let r = check_h(&dd, &eq, &h, 5);
            prop_assert!(r.pass, "{:?}", r.counterexample);
            let r = check_t_star_quotient(&dd, &eq, 1).unwrap();
            prop_assert!(r.pass, "{:?}", r.counterexample);
        }
    }

    #[test]
    fn t2_holds(seed in any::<u64>()) {
        let Some(dd) = small_d(seed) else { return Ok(()) };
        for v in varieties() {
            let r = verify_t2(&dd, &v, 4, &Caps::default()).unwrap();
            prop_assert!(r.pass, "{}: {:?}", v.name, r.counterexample);
        }
    }

    #[test]
    fn compiled_layers_agree_with_evaluation(seed in any::<u64>(), q in 0usize..4) {
        let reg = Registry::standard();
        let caps = Caps::default();
        let name = ["E", "E1", "mod[2,0]", "mod[3,1]"][q];
        let shape = FormulaShape::new(&["E"], &["<", "succ"], 1, 4);
        let body = random::formula(&mut random::rng(seed), &ab(), &["x"], &shape, &reg);
        let quant = reg.quantifier(name).unwrap();
        let (d, _) = compile_layer(&quant, "x", &body, &ab(), &Context::empty(), &reg, &caps).unwrap();
        let f = Formula::quant(name, "x", body);
        for w in ab().words_up_to(6) {
            let v = satisfies(&MarkedWord::plain(Word(w.clone())), &Context::empty(), &f, &ab(), &reg).unwrap();
            prop_assert_eq!(d.accepts(&w), v, "{} on {}", f, ab().render(&w));
        }
    }
}
