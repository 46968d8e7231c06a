mod support;

use klat::{IntMatrix, Lattice};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::*;

#[test]
fn short_vectors_match_box_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let g = random_definite(&mut rng, 4);
        let bound = 2 * rng.gen_range(1..=6);
        assert_eq!(library_short_vectors(&g, bound), naive_short_vectors(&g, bound), "gram {g:?} bound {bound}");
    }
}

#[test]
fn smith_signature_divisibility_match_naive() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let g = random_even(&mut rng, 6);
        let l = Lattice::from_i64(&g).unwrap();
        let ours: Vec<i128> = l.gram().smith().diag.iter().map(|d| d.to_i128().unwrap()).collect();
        assert_eq!(ours, naive_invariant_factors(&g), "gram {g:?}");
        assert_eq!(l.signature().unwrap(), naive_signature(&g), "gram {g:?}");
        for _ in 0..5 {
            let v: Vec<i64> = (0..g.len()).map(|_| rng.gen_range(-4..=4)).collect();
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            let vb: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
            assert_eq!(l.divisibility(&vb).unwrap(), BigInt::from(naive_divisibility(&g, &v)), "gram {g:?} v {v:?}");
        }
    }
}

proptest! {
    #[test]
    fn determinant_matches_bareiss(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_even(&mut rng, 5);
        let m = IntMatrix::from_i64(&g);
        prop_assert_eq!(m.det().to_i128().unwrap(), det(&g));
    }

    #[test]
    fn signature_sums_to_rank(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_even(&mut rng, 6);
        let (p, m) = naive_signature(&g);
        prop_assert_eq!(p + m, g.len());
        prop_assert_eq!(Lattice::from_i64(&g).unwrap().signature().unwrap(), (p, m));
    }
}
