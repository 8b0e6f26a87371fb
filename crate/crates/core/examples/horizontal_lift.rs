//! A preimage of `H_w(Frob) phi([1])` under `Tr_{1,0}`.

use split_hecke::congruence::construct_horizontal_lift;

fn main() {
    for (n, q) in [(1, 3), (1, 5), (2, 3)] {
        let (x, r) = construct_horizontal_lift(n, q);
        println!("{}", r.summary_line());
        for (key, c) in x.iter().take(3) {
            println!("  {c} * {key}");
        }
    }
}
