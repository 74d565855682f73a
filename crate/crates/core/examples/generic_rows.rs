//! Unimodular rows: genericity, moving a row into the generic locus, and
//! prime avoidance.

use unimodular_lab::umrow::{self, UmRow};
use unimodular_lab::Ring;

fn main() -> unimodular_lab::Result<()> {
    let r = Ring::rational_polynomials(&["x", "y", "z"])?;
    let a = UmRow::parse(&r, &["x", "y", "1", "0"])?;
    println!("a = {:?}, certificate {:?}", a.format(), r.format_all(a.certificate()));
    println!("generic: {}", umrow::is_generic(&a)?);

    let path = umrow::make_generic(&a, 1, 1_000)?;
    println!("after {} constant moves: {:?} (generic: {})", path.len(), path.end().format(), umrow::is_generic(path.end())?);

    let row = r.parse_all(&["x", "x", "y", "1 + x"])?;
    let lambda = umrow::prime_avoidance(&r, &row)?;
    println!("lambda = {:?}, shifted height {:?}", r.format_all(&lambda), umrow::shifted_height(&r, &row, &lambda)?);

    let z36 = Ring::integers_mod(36)?;
    let row = z36.parse_all(&["6", "4", "9"])?;
    let lambda = umrow::prime_avoidance(&z36, &row)?;
    println!("Z/36: lambda = {:?}", z36.format_all(&lambda));
    Ok(())
}
