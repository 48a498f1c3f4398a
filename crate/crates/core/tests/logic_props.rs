use proptest::prelude::*;
use wordlogic::finba::Carrier;
use wordlogic::logic::{equiv_bounded, models_in, parse, relabel, satisfies, Formula, Registry};
use wordlogic::random::{self, FormulaShape};
use wordlogic::words::{Alphabet, Context, MarkedWord, Word};

type CountDef = fn(usize) -> bool;

fn shape() -> FormulaShape {
    FormulaShape::new(&["E", "E1", "mod[2,1]"], &["<", "succ", "first"], 2, 7)
}

#[test]
fn monoid_quantifiers_match_their_definitions() {
    let reg = Registry::standard();
    let defs: [(&str, CountDef); 5] = [
        ("E", |n| n > 0),
        ("E1", |n| n == 1),
        ("mod[2,0]", |n| n % 2 == 0),
        ("mod[3,2]", |n| n % 3 == 2),
        ("mod[5,1]", |n| n % 5 == 1),
    ];
    for (name, def) in defs {
        let q = reg.quantifier(name).unwrap();
        assert!(q.as_monoid().is_some());
        for len in 0..=12 {
            for bits in 0u32..(1 << len) {
                let v: Vec<bool> = (0..len).map(|i| bits >> i & 1 == 1).collect();
                assert_eq!(q.eval(&v), def(bits.count_ones() as usize), "{name} on {v:?}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn display_parses_back(seed in any::<u64>()) {
        let reg = Registry::standard();
        let a = Alphabet::from_chars("ab").unwrap();
        let f = random::formula(&mut random::rng(seed), &a, &["x", "y"], &shape(), &reg);
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn relabel_is_natural(seed in any::<u64>(), zeta in prop::collection::vec(0usize..2, 3)) {
        let reg = Registry::standard();
        let (a, b) = (Alphabet::from_chars("abc").unwrap(), Alphabet::from_chars("ab").unwrap());
        let phi = random::sentence(&mut random::rng(seed), &b, &shape(), &reg);
        let psi = relabel(&zeta, &a, &b, &phi).unwrap();
        let empty = Context::empty();
        for w in a.words_up_to(4) {
            let image: Vec<usize> = w.iter().map(|&l| zeta[l]).collect();
            let lhs = satisfies(&MarkedWord::plain(Word(image)), &empty, &phi, &b, &reg).unwrap();
            let rhs = satisfies(&MarkedWord::plain(Word(w)), &empty, &psi, &a, &reg).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn relabel_is_functorial(
        seed in any::<u64>(),
        xi in prop::collection::vec(0usize..3, 4),
        zeta in prop::collection::vec(0usize..2, 3),
    ) {
        let reg = Registry::standard();
        let a = Alphabet::from_chars("abcd").unwrap();
        let b = Alphabet::from_chars("abc").unwrap();
        let c = Alphabet::from_chars("ab").unwrap();
        let phi = random::sentence(&mut random::rng(seed), &c, &shape(), &reg);
        let composite: Vec<usize> = xi.iter().map(|&m| zeta[m]).collect();
        let once = relabel(&composite, &a, &c, &phi).unwrap();
        let twice = relabel(&xi, &a, &b, &relabel(&zeta, &b, &c, &phi).unwrap()).unwrap();
        prop_assert!(equiv_bounded(&once, &twice, &a, &Context::empty(), 4, &reg).unwrap());
    }

    #[test]
    fn conjunction_is_intersection(s1 in any::<u64>(), s2 in any::<u64>()) {
        let reg = Registry::standard();
        let a = Alphabet::from_chars("ab").unwrap();
        let ctx = Context::single("x");
        let f = random::formula(&mut random::rng(s1), &a, &["x"], &shape(), &reg);
        let g = random::formula(&mut random::rng(s2), &a, &["x"], &shape(), &reg);
        let c = Carrier::new(&a, &ctx, 4);
        let mut both = models_in(&c, &f, &reg).unwrap();
        both.intersect_with(&models_in(&c, &g, &reg).unwrap());
        prop_assert_eq!(models_in(&c, &Formula::and(f.clone(), g), &reg).unwrap(), both);
        prop_assert_eq!(models_in(&c, &f, &reg).unwrap(), models_in(&c, &f, &reg).unwrap());
    }
}
