//! Seeded low-rank Gram factorization search on Q: rank 8 succeeds, rank 7
//! fails across every restart. The failure is heuristic evidence only; the
//! certificate module carries the actual proof that 7 squares cannot work.

use biquadratic::gram::{
    build_gram_system, low_rank_search, max_residual, rows_to_bilinear, SearchConfig,
};
use biquadratic::poly::form_q;

fn main() {
    let q = form_q();
    let system = build_gram_system(&q);
    let config = SearchConfig::default();
    println!(
        "Q: {} constraints over a 12-monomial basis, seed {}",
        system.constraints().len(),
        config.base_seed
    );

    match low_rank_search(&system, 8, &config).expect("rank in range") {
        Some(factor) => {
            println!(
                "rank 8: found, max residual {:.3e}",
                max_residual(&system, &factor)
            );
            for sq in rows_to_bilinear(&factor, 4, 3) {
                println!("  ({})^2", sq);
            }
        }
        None => println!("rank 8: not found (unexpected with default budget)"),
    }

    match low_rank_search(&system, 7, &config).expect("rank in range") {
        Some(_) => println!("rank 7: found (this would contradict the certificate)"),
        None => println!(
            "rank 7: no factor within {} restarts — inconclusive on its own; \
             see the check_certificate example for the proof",
            config.max_restarts
        ),
    }
}
