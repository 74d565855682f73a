//! Orbits of unimodular rows under elementary operations and the group law
//! on them.
//!
//! Over a finite ring everything is enumerated: the orbit partition, the
//! multiplication table over every normalized pair, and the generic locus of
//! each orbit. Over `Q[x,y,z]` a normalized pair is searched for and
//! multiplied.

use unimodular_lab::umrow::UmRow;
use unimodular_lab::wms;
use unimodular_lab::Ring;

fn main() -> unimodular_lab::Result<()> {
    for (name, ring, m) in [
        ("Z/4", Ring::integers_mod(4)?, 4),
        ("Z/6", Ring::integers_mod(6)?, 4),
        ("F3", Ring::prime_field(3)?, 4),
        ("Z/4", Ring::integers_mod(4)?, 2),
    ] {
        let part = wms::enumerate_orbits(&ring, m)?;
        let report = wms::group_report(&part);
        let locus = wms::generic_locus_report(&part)?;
        println!(
            "{name}, m = {m}: {} orbit(s) of sizes {:?}, {} normalized pairs, axioms hold: {}, generic rows per orbit {:?}",
            report.orbit_count,
            report.orbit_sizes,
            report.normalized_pairs_checked,
            report.passed(),
            locus.generic_rows,
        );
    }

    let r = Ring::rational_polynomials(&["x", "y", "z"])?;
    let a = UmRow::parse(&r, &["x", "y", "z", "1 + x"])?;
    let b = UmRow::parse(&r, &["1", "x", "y", "z"])?;
    let norm = wms::normalize_pair(&a, &b, 1_000, 0)?;
    println!("normalized: {:?} and {:?}", norm.pair.a().format(), norm.pair.b().format());
    println!("product: {:?}", wms::group_law(&norm.pair)?.format());
    Ok(())
}
