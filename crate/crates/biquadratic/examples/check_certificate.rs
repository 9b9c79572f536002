//! Orthogonality certificates: validate the built-in proof that Q admits no
//! 7-square decomposition, then watch the checker reject tampered variants.

use biquadratic::cert::{
    builtin_thm41_certificate, certificate_to_text, check_certificate, parse_certificate,
};

fn main() {
    let cert = builtin_thm41_certificate();
    println!(
        "built-in certificate: rank {}, {} zero labels, {} merge, {} steps",
        cert.rank,
        cert.zeros.len(),
        cert.merges.len(),
        cert.steps.len()
    );
    println!("verdict: {}\n", check_certificate(&cert));

    // Claiming rank 8 needs nine orthogonal vectors; the set only has eight.
    let mut tampered = cert.clone();
    tampered.rank = 8;
    println!("rank raised to 8 -> {}", check_certificate(&tampered));

    // Moving a via-known step before its dependency breaks the replay order.
    let mut tampered = cert.clone();
    let step = tampered.steps.remove(17);
    tampered.steps.insert(0, step);
    println!("step reordered   -> {}", check_certificate(&tampered));

    // Citing a present monomial is caught immediately.
    let mut tampered = cert.clone();
    tampered.steps[0].absent = biquadratic::QuarticMonomial::new(1, 1, 1, 1);
    println!("present monomial -> {}", check_certificate(&tampered));

    // The text format round-trips.
    let text = certificate_to_text(&cert);
    let reparsed = parse_certificate(&text).expect("well-formed text");
    assert_eq!(reparsed, cert);
    println!("\ntext round trip ok ({} lines)", text.lines().count());
}
