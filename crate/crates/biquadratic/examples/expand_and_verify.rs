//! Exact polynomial identities, verified with zero tolerance.
//!
//! Three classical constructions: the two-square identity on a C4, the
//! four-square Hurwitz identity for the 3x3 all-ones form, and the explicit
//! eight squares summing to the form Q.

use biquadratic::decompose::{c4_identity, hurwitz_3x3};
use biquadratic::poly::{
    expand, form_q, q_eight_squares, rat, verify_decomposition, BiquadraticForm, SosDecomposition,
};

fn main() {
    // (x1 y1 + x2 y2)^2 + (x1 y2 - x2 y1)^2 covers the four pure squares of
    // a C4 on rows {1,2} x columns {1,2}.
    let squares = c4_identity(4, 3, 1, 2, 1, 2).expect("valid indices");
    println!("C4 identity squares:");
    for sq in &squares {
        println!("  ({})^2", sq);
    }
    println!("  sum = {}\n", expand(&squares).expect("same dims"));

    // Four squares for the 3x3 all-ones form.
    let mut all_ones = BiquadraticForm::zero(3, 3).expect("valid dims");
    for i in 1..=3 {
        for j in 1..=3 {
            all_ones.add_term(i, i, j, j, rat(1)).expect("in bounds");
        }
    }
    let hurwitz = hurwitz_3x3(3, [1, 2, 3]).expect("distinct rows");
    let dec = SosDecomposition::new(all_ones, hurwitz);
    println!(
        "Hurwitz identity: 4 squares, exact check: {:?}",
        verify_decomposition(&dec).expect("same dims")
    );

    // The eight explicit squares of Q.
    let dec = SosDecomposition::new(form_q(), q_eight_squares());
    println!(
        "Q as eight squares: exact check: {:?}",
        verify_decomposition(&dec).expect("same dims")
    );
    for sq in &dec.squares {
        println!("  ({})^2", sq);
    }
}
