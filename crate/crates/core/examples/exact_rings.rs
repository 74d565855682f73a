//! Exact rings from descriptors: arithmetic, Groebner bases, heights and
//! comaximality certificates.
//!
//! Run with `cargo run --example exact_rings`.

use unimodular_lab::ring::RingDescriptor;
use unimodular_lab::{Ideal, Ring};

fn main() -> unimodular_lab::Result<()> {
    let r = Ring::rational_polynomials(&["x", "y", "z"])?;
    let f = r.parse("(x + 1/2)^2 - y*z")?;
    println!("f = {}", r.format(&f));

    let ideal = Ideal::new(r.parse_all(&["x*y - 1", "y^2 - z"])?);
    let gb = r.groebner_basis(&ideal)?;
    println!("groebner basis: {:?}", r.format_all(gb.gens()));
    println!("height: {:?}", r.height(&ideal)?);

    let k = Ideal::new(r.parse_all(&["x", "y", "z"])?);
    let l = Ideal::new(r.parse_all(&["1 - x", "y", "z"])?);
    let cert = r.comaximal(&k, &l)?;
    println!("k = {}, l = {}, k + l = 1: {}", r.format(&cert.k), r.format(&cert.l), r.verify_comaximal(&k, &l, &cert)?);

    // a non-reduced finite ring described in JSON
    let d: RingDescriptor = serde_json::from_str(
        r#"{"kind": "quotient",
            "base": {"kind": "polynomial-ring", "base": {"kind": "prime-field", "modulus": 2}, "vars": ["x"]},
            "relations": ["x^2"], "krull_dim": 0, "minimal_primes": [["x"]]}"#,
    )
    .expect("valid descriptor");
    let dual = Ring::from_descriptor(&d)?;
    let x = dual.parse("x")?;
    println!("in F2[x]/(x^2): (1 + x)^2 = {}", dual.format(&dual.pow(&dual.add(&dual.one(), &x), 2)));
    println!("elements: {:?}", dual.format_all(&dual.elements().unwrap_or_default()));

    let z30 = Ring::integers_mod(30)?;
    let row = z30.parse_all(&["6", "10", "15"])?;
    println!("Z/30: (6, 10, 15) . {:?} = 1", z30.format_all(&z30.solve_unimodular(&row)?));
    Ok(())
}
