use std::collections::HashSet;

use proptest::prelude::*;
use wordlogic::finba::Carrier;
use wordlogic::random;
use wordlogic::words::{classify, embed_marked, unembed, Alphabet, BoundedLanguage, Context, Language, MarkClass, MarkedWord, Word};

fn ab() -> Alphabet {
    Alphabet::from_chars("ab").unwrap()
}

fn word(max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..2, 0..=max)
}

fn same_up_to(l: &Language, r: &Language, bound: usize) -> bool {
    ab().words_up_to(bound).all(|w| l.contains(&w) == r.contains(&w))
}

fn languages(seed: u64) -> Vec<Language> {
    let mut rng = random::rng(seed);
    let d = random::dfa(&mut rng, &ab(), 4);
    let set = random::subset(&mut rng, 127, 0.4);
    let words: Vec<Vec<usize>> = ab().words_up_to(6).collect();
    let b = BoundedLanguage::new(ab(), 6, set.ones().map(|i| words[i].clone())).unwrap();
    vec![Language::Regular(d), Language::Bounded(b)]
}

#[test]
fn embedding_is_injective_and_marked() {
    let x = Context::single("x");
    let xy = Context::new(["x", "y"]).unwrap();
    for ctx in [&x, &xy] {
        let carrier = Carrier::new(&ab(), ctx, 4);
        let images: HashSet<Word> = carrier.points().iter().map(|p| embed_marked(p, ctx, ctx).unwrap()).collect();
        assert_eq!(images.len(), carrier.len());
    }
    for p in Carrier::new(&ab(), &x, 5).points() {
        assert_eq!(classify(&embed_marked(p, &x, &x).unwrap()), MarkClass::Marked);
    }
}

proptest! {
    #[test]
    fn words_render_and_parse(w in word(8)) {
        let a = ab();
        prop_assert_eq!(a.parse_word(&a.render(&w)).unwrap().0, w);
    }

    #[test]
    fn marked_words_round_trip(w in word(6).prop_filter("nonempty", |w| !w.is_empty()), i in 0usize..6, j in 0usize..6) {
        let ctx = Context::new(["x", "y"]).unwrap();
        let mw = MarkedWord::new(Word(w.clone()), vec![i % w.len() + 1, j % w.len() + 1]).unwrap();
        let text = mw.render(&ab(), &ctx);
        prop_assert_eq!(&MarkedWord::parse(&text, &ab(), &ctx).unwrap(), &mw);
        prop_assert_eq!(unembed(&embed_marked(&mw, &ctx, &ctx).unwrap(), &ctx), Some(mw));
    }

    #[test]
    fn quotients_compose(seed in any::<u64>(), u in word(2), v in word(2)) {
        for l in languages(seed) {
            let (u, v) = (Word(u.clone()), Word(v.clone()));
            let bound = 2;
            let left = l.left_quotient(&v).left_quotient(&u);
            prop_assert!(same_up_to(&left, &l.left_quotient(&v.concat(&u)), bound));
            let right = l.right_quotient(&v).right_quotient(&u);
            prop_assert!(same_up_to(&right, &l.right_quotient(&u.concat(&v)), bound));
        }
    }

    #[test]
    fn left_and_right_quotients_commute(seed in any::<u64>(), u in word(2), v in word(2)) {
        for l in languages(seed) {
            let (u, v) = (Word(u.clone()), Word(v.clone()));
            let a = l.left_quotient(&u).right_quotient(&v);
            let b = l.right_quotient(&v).left_quotient(&u);
            prop_assert!(same_up_to(&a, &b, 2));
        }
    }
}
