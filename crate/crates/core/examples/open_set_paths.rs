//! Elementary paths that stay inside an open subset of SL_3(Q), and the
//! finite-field counterexample where no such path exists.

use unimodular_lab::matrix::SqMatrix;
use unimodular_lab::path::{self, OpenSet};
use unimodular_lab::Ring;

fn main() -> unimodular_lab::Result<()> {
    let q = Ring::rationals();
    let open = OpenSet::nonzero_entries(&q, 3)?;
    let p = SqMatrix::parse(&q, &[vec!["2", "1", "1"], vec!["1", "1", "1"], vec!["1", "2", "3"]])?;
    let target = SqMatrix::parse(&q, &[vec!["1", "2", "3"], vec!["1", "3", "5"], vec!["2", "5", "9"]])?;

    let found = path::connect(&p, &target, &open, 100_000, 7)?;
    println!("{} steps, every point has nonzero entries: {}", found.len(), found.verify(Some(&open)));
    for (step, point) in found.steps.iter().zip(&found.points[1..]) {
        println!("  e_{}{}({:>6}) -> {:?}", step.i, step.j, q.format(&step.t), point.rows().iter().map(|r| q.format_all(r)).collect::<Vec<_>>());
    }

    // over F_2 the set {g : 1 + g11 g12 + g21 g22 != 0} in SL_2 is two points
    let f2 = Ring::prime_field(2)?;
    let two_points = OpenSet::new(&f2, 2, &["1 + m_1_1*m_1_2 + m_2_1*m_2_2"])?;
    let components = path::exhaustive_components(&f2, &two_points)?;
    println!("F_2 open set: {} points in {} components", path::enumerate_open_set(&f2, &two_points)?.len(), components.len());
    Ok(())
}
