//! Builds the driver, problem and commutator Hamiltonians of a small graph
//! and checks the commutator against dense matrices.

use xferopt::instances::Graph;
use xferopt::pauli::{build_h1, build_hf, build_hi, commutator_over_2i, pauli_mul, PauliString};

fn main() -> xferopt::Result<()> {
    let (phase, p) = pauli_mul(&PauliString::parse("XZ")?, &PauliString::parse("YY")?)?;
    println!("XZ * YY = {:?} {}", phase.as_pair(), p.word());

    let g = Graph::new(3, &[(0, 1, 1.0), (1, 2, -0.5)], vec![0.3, 0.0, 0.0])?;
    let (hi, hf) = (build_hi(3), build_hf(&g));
    let h1 = build_h1(&g)?;
    for (word, c) in h1.iter() {
        println!("  {:+.3} {}", c, word.word());
    }

    let (a, b) = (hi.to_dense()?, hf.to_dense()?);
    let dense = (&a * &b - &b * &a) * num_complex::Complex64::new(0.0, -0.5);
    let diff = (dense - h1.to_dense()?).iter().map(|z| z.norm()).fold(0.0, f64::max);
    println!("dense commutator mismatch: {diff:.2e}");
    assert!(commutator_over_2i(&hi, &hf)?.max_abs_diff(&h1) < 1e-12);
    Ok(())
}
