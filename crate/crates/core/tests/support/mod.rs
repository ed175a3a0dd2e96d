#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use scg_core::{CyclicWord, Generator, Word};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn gen(c: char) -> Generator {
    Generator::new(c).unwrap()
}

/// Random freely reduced word with `syllables` runs of length `1..=max_exp`.
pub fn random_word(rng: &mut StdRng, letters: &[char], syllables: usize, max_exp: i64) -> Word {
    let mut powers = Vec::new();
    let mut last: Option<char> = None;
    for _ in 0..syllables {
        let choices: Vec<char> = letters.iter().copied().filter(|&c| Some(c) != last).collect();
        let c = choices[rng.gen_range(0..choices.len())];
        let mut e = rng.gen_range(1..=max_exp);
        if rng.gen_bool(0.5) {
            e = -e;
        }
        powers.push((gen(c), e));
        last = Some(c);
    }
    Word::from_powers(powers)
}

/// Random freely reduced word of exactly `len` letters.
pub fn random_letter_word(rng: &mut StdRng, letters: &[char], len: usize) -> Word {
    let mut w = Word::identity();
    while w.length() < len.into() {
        let c = letters[rng.gen_range(0..letters.len())];
        let e: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        w = w.concat(&Word::power(gen(c), e));
    }
    w
}

pub fn random_cyclic(rng: &mut StdRng, letters: &[char], syllables: usize, max_exp: i64) -> CyclicWord {
    loop {
        let c = CyclicWord::new(&random_word(rng, letters, syllables, max_exp));
        if !c.is_empty() {
            return c;
        }
    }
}
