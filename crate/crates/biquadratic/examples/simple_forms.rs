//! Simple forms and their bipartite graphs: decompose every edge-count
//! regime through the structural case analysis and verify exactly.

use biquadratic::decompose::decompose_simple;
use biquadratic::graph::{find_c4, from_simple_form, BipartiteGraph};
use biquadratic::poly::simple_family;

fn main() {
    // The C4-free 7-edge family member decomposes one square per edge.
    for s in 1..=7 {
        let form = simple_family(s).expect("s in range");
        let dec = decompose_simple(&form).expect("simple form");
        println!("{} edges -> {} squares ({})", s, dec.squares.len(), dec.provenance[0]);
    }

    // Denser graphs use the C4 / Hurwitz identities; sample one mask per
    // edge count and show the square savings.
    for e in 8..=12 {
        let mask = (0u32..(1 << 12))
            .find(|m| m.count_ones() as usize == e)
            .expect("edge count reachable");
        let g = BipartiteGraph::from_mask(4, 3, mask);
        let mut form = biquadratic::BiquadraticForm::zero(4, 3).expect("valid dims");
        for &(i, j) in g.edges() {
            form.add_term(i, i, j, j, biquadratic::rat(1)).expect("in bounds");
        }
        let c4 = find_c4(&from_simple_form(&form).expect("simple"));
        let dec = decompose_simple(&form).expect("simple form");
        println!(
            "{} edges -> {} squares, first C4: {}",
            e,
            dec.squares.len(),
            c4.map_or("none".to_string(), |w| w.to_string()),
        );
        for line in &dec.provenance {
            println!("    {}", line);
        }
    }
}
