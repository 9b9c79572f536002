//! Randomized property tests for the exact layers: parsing, expansion,
//! Gram systems, factor serialization, and the y-deficient split.

use biquadratic::cli::{decomposition_to_text, parse_decomposition};
use biquadratic::decompose::{detect_y_deficient, split_y_deficient};
use biquadratic::gram::{build_gram_system, exact_gram_of_squares, FactorMatrix};
use biquadratic::poly::{
    expand, parse_bilinear, parse_form, ratio, BilinearForm, BiquadraticForm, Rat,
};
use proptest::prelude::*;

fn dims_strategy() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=4, 2usize..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parse_print_round_trip_forms((m, n) in dims_strategy(), seed in any::<u64>()) {
        let squares = sample_squares(m, n, seed);
        let form = expand(&squares).unwrap();
        prop_assume!(!form.is_zero());
        let reparsed = parse_form(&form.to_string(), m, n).unwrap();
        prop_assert_eq!(reparsed, form);
    }

    #[test]
    fn parse_print_round_trip_bilinear((m, n) in dims_strategy(), seed in any::<u64>()) {
        let sq = sample_squares(m, n, seed).pop().unwrap();
        prop_assume!(!sq.is_zero());
        let reparsed = parse_bilinear(&sq.to_string(), m, n).unwrap();
        prop_assert_eq!(reparsed, sq);
    }

    #[test]
    fn expansion_is_additive((m, n) in dims_strategy(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = sample_squares(m, n, s1);
        let b = sample_squares(m, n, s2);
        let mut joined = a.clone();
        joined.extend(b.clone());
        let sum = expand(&a).unwrap().add(&expand(&b).unwrap()).unwrap();
        prop_assert_eq!(expand(&joined).unwrap(), sum);
    }

    #[test]
    fn scaling_squares_scales_expansion_quadratically(
        (m, n) in dims_strategy(),
        seed in any::<u64>(),
        num in 1i64..=5,
        den in 1i64..=5,
    ) {
        let squares = sample_squares(m, n, seed);
        let c = ratio(num, den);
        let scaled: Vec<BilinearForm> = squares.iter().map(|sq| sq.scale(&c)).collect();
        let expected = expand(&squares).unwrap().scale(&(&c * &c));
        prop_assert_eq!(expand(&scaled).unwrap(), expected);
    }

    #[test]
    fn expansion_matches_pointwise_evaluation(
        (m, n) in dims_strategy(),
        seed in any::<u64>(),
        point_seed in any::<u64>(),
    ) {
        let squares = sample_squares(m, n, seed);
        let form = expand(&squares).unwrap();
        let (x, y) = sample_point(m, n, point_seed);
        let direct: Rat = squares
            .iter()
            .map(|sq| {
                let v = sq.evaluate(&x, &y).unwrap();
                &v * &v
            })
            .sum();
        prop_assert_eq!(form.evaluate(&x, &y).unwrap(), direct);
    }

    #[test]
    fn gram_of_any_decomposition_satisfies_its_system(
        (m, n) in dims_strategy(),
        seed in any::<u64>(),
    ) {
        let squares = sample_squares(m, n, seed);
        let form = expand(&squares).unwrap();
        let gram = exact_gram_of_squares(m, n, &squares);
        prop_assert!(build_gram_system(&form).check_exact(&gram));
    }

    #[test]
    fn factor_matrix_text_round_trip(
        r in 1usize..=6,
        mn in 1usize..=12,
        seed in any::<u64>(),
    ) {
        let data = float_data(r * mn, seed);
        let factor = FactorMatrix { r, mn, data };
        let reparsed = FactorMatrix::from_text(&factor.to_text()).unwrap();
        prop_assert_eq!(reparsed.r, factor.r);
        prop_assert_eq!(reparsed.mn, factor.mn);
        prop_assert_eq!(reparsed.data, factor.data);
    }

    #[test]
    fn decomposition_file_round_trip((m, n) in dims_strategy(), seed in any::<u64>()) {
        let squares = sample_squares(m, n, seed);
        let form = expand(&squares).unwrap();
        let text = decomposition_to_text(&form, &squares, &["property test".to_string()]);
        let dec = parse_decomposition(&text).unwrap();
        prop_assert_eq!(dec.target, form);
        prop_assert_eq!(dec.squares, squares);
    }

    #[test]
    fn split_reassembles_qualifying_forms(seed in any::<u64>()) {
        // Diagonal (4,3) forms always qualify at every column.
        let form = sample_diagonal_4x3(seed);
        prop_assume!(!form.is_zero());
        for j0 in detect_y_deficient(&form) {
            let split = split_y_deficient(&form, j0).unwrap();
            prop_assert_eq!(split.reassemble(4, 3).unwrap(), form.clone());
        }
    }
}

// Seeded helpers keep the generated structures well-formed without complex
// strategy plumbing.

fn sample_squares(m: usize, n: usize, seed: u64) -> Vec<BilinearForm> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(1..=5);
    (0..count)
        .map(|_| {
            let mut sq = BilinearForm::zero(m, n).unwrap();
            for i in 1..=m {
                for j in 1..=n {
                    if rng.gen_bool(0.5) {
                        sq.set(i, j, ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
                            .unwrap();
                    }
                }
            }
            sq
        })
        .collect()
}

fn sample_point(m: usize, n: usize, seed: u64) -> (Vec<Rat>, Vec<Rat>) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut point = |len: usize| -> Vec<Rat> {
        (0..len)
            .map(|_| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5)))
            .collect()
    };
    let x = point(m);
    let y = point(n);
    (x, y)
}

fn sample_diagonal_4x3(seed: u64) -> BiquadraticForm {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut form = BiquadraticForm::zero(4, 3).unwrap();
    for i in 1..=4 {
        for j in 1..=3 {
            if rng.gen_bool(0.7) {
                form.add_term(i, i, j, j, ratio(rng.gen_range(1..=9), 1)).unwrap();
            }
        }
    }
    form
}

fn float_data(len: usize, seed: u64) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(-3.0..3.0)).collect()
}

/// The shipped sample certificate file stays in sync with the built-in one.
#[test]
fn shipped_certificate_file_matches_builtin() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/thm41.cert");
    let text = std::fs::read_to_string(path).unwrap();
    let parsed = biquadratic::cert::parse_certificate(&text).unwrap();
    assert_eq!(parsed, biquadratic::cert::builtin_thm41_certificate());
    assert!(biquadratic::cert::check_certificate(&parsed).is_valid());
}
