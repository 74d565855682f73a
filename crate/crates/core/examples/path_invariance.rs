//! The Euler-class value of a generic row does not change along elementary
//! paths in the generic locus: each move gets its own witness.

use unimodular_lab::euler;
use unimodular_lab::matrix::ElementaryOp;
use unimodular_lab::umrow::{self, UmRow};
use unimodular_lab::Ring;

fn main() -> unimodular_lab::Result<()> {
    let r = Ring::rational_polynomials(&["x", "y", "z"])?;
    let mut a = UmRow::parse(&r, &["x + y", "y - z", "z + 2", "x - 1"])?;
    let moves = [(1, 2, 1), (3, 4, 2), (1, 4, -1), (4, 3, 1), (2, 3, 2)];
    for (i, j, t) in moves {
        let e = ElementaryOp::new(i, j, r.from_i64(t))?;
        let next = umrow::act(&a, &e)?;
        if !umrow::is_generic(&next)? {
            println!("e_{i}{j}({t}) leaves the generic locus, skipped");
            continue;
        }
        let s = euler::check_phi_step(&a, &e, 0)?;
        println!(
            "e_{i}{j}({t}): {:?} -> {:?}, witness of {} steps verifies: {}",
            a.format(),
            next.format(),
            s.certified.witness.len(),
            s.certified.verify().ok
        );
        a = next;
    }

    let anti = euler::antisymmetry_witness(&a, 0)?;
    println!("phi(a) + phi(a with last two swapped) = 0: {}", anti.verify().ok);
    Ok(())
}
