mod support;

use klat::kummer::realize::all_realizations;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn torsion_lemma_on_shipped_isometries() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let all = all_realizations().unwrap();
    assert!(all.len() >= 18);
    let mut fails = Vec::new();
    for (table, row, g) in &all {
        fails.extend(support::lemma_failures(&format!("{table} row {row}"), g, &mut rng, 100));
    }
    assert!(fails.is_empty(), "{fails:#?}");
}
