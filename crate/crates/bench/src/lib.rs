//! Inputs shared by the benchmarks.

use rinf_core::words::w;
use rinf_core::{GeneratorSymbol, IntMatrix, Presentation, Word};

pub fn two_generator(rels: &[&str]) -> Presentation {
    Presentation::new(
        vec![GeneratorSymbol::plain("a", 0), GeneratorSymbol::plain("b", 0)],
        rels.iter().map(|r| w(r)),
        "bench",
    )
    .expect("bench presentation")
}

/// Dihedral group of order `2m`.
pub fn dihedral(m: u32) -> Presentation {
    two_generator(&[&format!("a^{m}"), "b^2", "a b a b"])
}

/// Free abelian group of rank `k` as a commutator presentation.
pub fn free_abelian(k: u32) -> Presentation {
    let gens: Vec<_> = (1..=k).map(|i| GeneratorSymbol::plain("x", i)).collect();
    let rels: Vec<_> = (0..gens.len())
        .flat_map(|i| (i + 1..gens.len()).map(move |j| (i, j)))
        .map(|(i, j)| Word::commutator(&Word::gen(&gens[i]), &Word::gen(&gens[j])))
        .collect();
    Presentation::new(gens, rels, "bench").expect("bench presentation")
}

/// Deterministic dense matrix with small entries.
pub fn lcg_matrix(rows: usize, cols: usize, seed: u64) -> IntMatrix {
    let mut state = seed;
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((state >> 33) % 19) as i64 - 9
                })
                .collect()
        })
        .collect();
    IntMatrix::from_rows(&data)
}
