//! The decreasing-function lemma on a sample pair and on premise violations.

use systolic::projections::{decreasing_lemma_check, LemmaOutcome};
use systolic::verify::random_lemma_pair;

use rand::SeedableRng;

fn main() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    let mut holds = 0;
    for _ in 0..200 {
        let (h, g, dz) = random_lemma_pair(&mut rng);
        if decreasing_lemma_check(&h, &g, dz, 1e-12).holds() {
            holds += 1;
        }
    }
    println!("{holds}/200 random premise-satisfying pairs satisfy the conclusion");
    let increasing = decreasing_lemma_check(&[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0], 0.1, 1e-12);
    let negative_start = decreasing_lemma_check(&[3.0, 2.0, 1.0], &[-1.0, 1.0, 1.0], 0.1, 1e-12);
    for (name, out) in [("increasing h", increasing), ("negative start", negative_start)] {
        match out {
            LemmaOutcome::PremiseFailed(why) => println!("{name}: premise failed ({why})"),
            other => println!("{name}: {other:?}"),
        }
    }
}
