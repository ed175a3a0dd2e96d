use num_bigint::BigUint;
use proptest::prelude::*;
use scg_core::oracles::{cyclic_reduce, decompress, free_reduce, primitive_period, rotation_equivalent};
use scg_core::{parse_word, Alphabet, CyclicWord, Generator, Word};

fn word_strategy(max_syllables: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0u8..3, -6i64..=6), 0..max_syllables).prop_map(|powers| {
        Word::from_powers(
            powers
                .into_iter()
                .map(|(g, e)| (Generator::new((b'a' + g) as char).unwrap(), e)),
        )
    })
}

fn abc() -> Alphabet {
    Alphabet::from_letters("abc").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn display_parses_back(u in word_strategy(12)) {
        prop_assert_eq!(parse_word(&u.to_string(), &abc()).unwrap(), u);
    }

    #[test]
    fn product_is_associative(u in word_strategy(8), v in word_strategy(8), w in word_strategy(8)) {
        prop_assert_eq!(u.concat(&v).concat(&w), u.concat(&v.concat(&w)));
    }

    #[test]
    fn inverse_cancels(u in word_strategy(12)) {
        prop_assert!(u.concat(&u.inverse()).is_empty());
        prop_assert!(u.inverse().concat(&u).is_empty());
    }

    #[test]
    fn product_matches_letter_reduction(u in word_strategy(10), v in word_strategy(10)) {
        let mut letters = decompress(&u).unwrap();
        letters.extend(decompress(&v).unwrap());
        prop_assert_eq!(decompress(&u.concat(&v)).unwrap(), free_reduce(&letters));
    }

    #[test]
    fn cyclic_form_matches_oracle(u in word_strategy(12)) {
        let c = CyclicWord::new(&u);
        let ours = decompress(c.word()).unwrap();
        let oracle = cyclic_reduce(&decompress(&u).unwrap());
        prop_assert!(rotation_equivalent(&ours, &oracle));
    }

    #[test]
    fn conjugates_share_cyclic_form(u in word_strategy(10), g in word_strategy(5)) {
        let conj = g.concat(&u).concat(&g.inverse());
        prop_assert_eq!(CyclicWord::new(&conj), CyclicWord::new(&u));
    }

    #[test]
    fn rotations_share_cyclic_form(u in word_strategy(10), offset in 0u32..200) {
        let c = CyclicWord::new(&u);
        if !c.is_empty() {
            let r = c.rotation_at(&BigUint::from(offset));
            prop_assert_eq!(CyclicWord::new(&r), c);
        }
    }

    #[test]
    fn primitive_root_matches_oracle(u in word_strategy(4), n in 1usize..5) {
        let c = CyclicWord::new(&u.pow(n));
        if !c.is_empty() {
            let (root, count) = c.primitive_root();
            let (p, m) = primitive_period(&decompress(c.word()).unwrap());
            prop_assert_eq!(root.length(), BigUint::from(p));
            prop_assert_eq!(count, BigUint::from(m));
        }
    }
}
