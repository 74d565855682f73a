//! Euler-class data attached to unimodular rows and witnesses for the
//! relations between them. Every witness is replayed by `verify_witness`.

use unimodular_lab::euler::{self, verify_witness, Step};
use unimodular_lab::umrow::UmRow;
use unimodular_lab::Ring;

fn main() -> unimodular_lab::Result<()> {
    let r = Ring::rational_polynomials(&["x", "y", "z"])?;
    let a = UmRow::parse(&r, &["x", "y", "z", "1 + x"])?;
    let b = UmRow::parse(&r, &["1 - x", "y", "z", "1 + x"])?;

    for (_, d) in &euler::phi0(&a)?.terms {
        println!("phi0(a): J = {:?}, omega = {:?}", r.format_all(d.gens()), r.format_all(d.omega()));
    }

    let zero = [r.zero(), r.zero()];
    let lemma = euler::lemma_vanishing_witness(&a, &zero, &zero)?;
    println!("lemma witness: {} step(s), verifies: {}", lemma.witness.len(), lemma.verify().ok);

    let hom = euler::hom_check(&a, &b, 0)?;
    println!("product row {:?}", hom.product.format());
    println!("phi0(a) + phi0(b) = phi0(ab): {}", hom.certified.verify().ok);

    let mut forged = hom.certified.witness.clone();
    if let Some(Step::DisconnectedSum { cert, .. }) = forged.chain.first_mut() {
        cert.l = r.zero();
    }
    let check = verify_witness(&forged, &hom.certified.lhs, &hom.certified.rhs);
    println!("forged certificate rejected at step {:?}: {}", check.failed_step, check.reason.unwrap_or_default());

    println!("{}", serde_json::to_string_pretty(&hom.certified.witness.to_json(&r)).expect("json"));
    Ok(())
}
