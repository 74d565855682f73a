//! Reduce a matrix in SL_3(Q) to the identity in 8 elementary steps and
//! recover its birational parameters.

use unimodular_lab::matrix::{self, RootSchedule, SqMatrix};
use unimodular_lab::Ring;

fn main() -> unimodular_lab::Result<()> {
    let q = Ring::rationals();
    let g = SqMatrix::parse(&q, &[vec!["2", "1", "1"], vec!["1", "1", "1"], vec!["1", "2", "3"]])?;

    let ops = matrix::reduce_generic(&g)?;
    for op in &ops {
        println!("e_{}{}({})", op.i, op.j, q.format(&op.t));
    }
    let restored = g.mul(&matrix::ops_product(&q, 3, &ops)?)?;
    println!("g * ops = I: {}", restored.is_identity());

    let t = matrix::matrix_to_params(&g)?;
    let schedule = RootSchedule::for_size(3);
    println!("positions {:?}", schedule.positions());
    println!("t = {:?}", q.format_all(&t));
    println!("parameters rebuild g: {}", matrix::params_to_matrix(&q, &schedule, &t)? == g);

    let stuck = SqMatrix::parse(&q, &[vec!["0", "1", "0"], vec!["-1", "0", "0"], vec!["0", "0", "1"]])?;
    println!("rotation-like matrix: {}", matrix::reduce_generic(&stuck).unwrap_err());
    Ok(())
}
