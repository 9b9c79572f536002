//! Structural analysis reports for three instructive forms: the C4-free
//! simple form P_{4,3,7}, the cross-term form Q, and a diagonal form.

use biquadratic::analyze::analyze;
use biquadratic::decompose::example_diagonal_form;
use biquadratic::poly::{form_q, p_4_3_7};

fn main() {
    for (name, form) in [
        ("P_{4,3,7}", p_4_3_7()),
        ("Q", form_q()),
        ("diagonal example", example_diagonal_form()),
    ] {
        println!("== {name} ==");
        print!("{}", analyze(&form, 200, 1));
        println!();
    }
}
