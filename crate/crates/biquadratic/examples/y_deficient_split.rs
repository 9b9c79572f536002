//! The y-deficient pipeline: split a qualifying form at a column, decompose
//! the (4,2) remainder, and reassemble, then compare with the row-split
//! route on the same diagonal form.

use biquadratic::decompose::{
    decompose_diagonal_rowsplit, decompose_y_deficient, example_diagonal_form, split_y_deficient,
};
use biquadratic::gram::SearchConfig;
use biquadratic::poly::form_q;

fn main() {
    let config = SearchConfig::default();

    let diag = example_diagonal_form();
    let split = split_y_deficient(&diag, 3).expect("column 3 qualifies");
    println!("diagonal form split at column 3:");
    println!("  remainder p1 on (4,2): {}", split.p1);
    println!("  tail coefficients t = {:?}", split.t.iter().map(|r| r.to_string()).collect::<Vec<_>>());
    assert_eq!(split.reassemble(4, 3).expect("well formed"), diag);

    let via_split = decompose_y_deficient(&diag, 3, &config).expect("pipeline succeeds");
    println!(
        "  split route: {} squares, exact: {}",
        via_split.square_count(),
        via_split.is_exact()
    );
    let via_rows = decompose_diagonal_rowsplit(&diag, &config).expect("diagonal form");
    println!(
        "  row-split route: {} squares, exact: {}",
        via_rows.square_count(),
        via_rows.is_exact()
    );

    // Q also qualifies at column 1 even though it has a cross term; the
    // split applies literally and yields at most eight squares.
    let q = form_q();
    let outcome = decompose_y_deficient(&q, 1, &config).expect("pipeline succeeds");
    println!(
        "Q split at column 1: {} squares, exact: {}",
        outcome.square_count(),
        outcome.is_exact()
    );
    for line in outcome.provenance() {
        println!("  {}", line);
    }
}
