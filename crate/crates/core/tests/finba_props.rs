use proptest::prelude::*;
use wordlogic::finba::{dual_of_inclusion, Carrier, FinBA};
use wordlogic::random;
use wordlogic::words::{Alphabet, Context};
use wordlogic::Caps;

fn carrier() -> std::sync::Arc<Carrier> {
    Carrier::new(&Alphabet::from_chars("ab").unwrap(), &Context::single("x"), 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn atoms_regenerate(seed in any::<u64>(), n in 1usize..=6) {
        let c = carrier();
        let mut rng = random::rng(seed);
        let gens: Vec<_> = (0..n).map(|_| random::subset(&mut rng, c.len(), 0.5)).collect();
        let b = FinBA::generate(&c, &gens, &Caps::default()).unwrap();
        prop_assert!(FinBA::generate(&c, b.atoms(), &Caps::default()).unwrap().same_as(&b));
        // every element is the union of the atoms below it
        for g in &gens {
            let mut union = c.full();
            union.clear();
            for a in b.atoms().iter().filter(|a| a.is_subset(g)) {
                union.union_with(a);
            }
            prop_assert_eq!(&union, g);
        }
    }

    #[test]
    fn dual_maps_compose(seed in any::<u64>()) {
        let c = carrier();
        let mut rng = random::rng(seed);
        let gens: Vec<_> = (0..5).map(|_| random::subset(&mut rng, c.len(), 0.5)).collect();
        let caps = Caps::default();
        let b1 = FinBA::generate(&c, &gens[..1], &caps).unwrap();
        let b2 = FinBA::generate(&c, &gens[..3], &caps).unwrap();
        let b3 = FinBA::generate(&c, &gens, &caps).unwrap();
        let d12 = dual_of_inclusion(&b1, &b2).unwrap();
        let d23 = dual_of_inclusion(&b2, &b3).unwrap();
        let d13 = dual_of_inclusion(&b1, &b3).unwrap();
        let composed: Vec<usize> = d23.table.iter().map(|&i| d12.table[i]).collect();
        prop_assert_eq!(&composed, &d13.table);
        prop_assert_eq!(d12.after(&d23).unwrap().table, d13.table);
    }
}
