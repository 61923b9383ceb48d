//! Optimal single-qubit transfer and the low-rank projector construction on
//! a small spin glass.

use xferopt::dynamics::StateVector;
use xferopt::instances::{diagonal_spectrum, GenParams, Instance, InstanceKind};
use xferopt::pauli::{build_hf, build_hi};
use xferopt::transfer::{lpa_metrics, transfer_time, single_qubit_optimal, DenseOperator, SpectralFunction};

fn main() -> xferopt::Result<()> {
    let g = xferopt::instances::Graph::new(1, &[], vec![1.0])?;
    let (h, t) = single_qubit_optimal(&DenseOperator::from_pauli(&build_hi(1))?, &DenseOperator::from_pauli(&build_hf(&g))?)?;
    let terms: Vec<String> = h.iter().map(|(p, c)| format!("{c:+.3}{}", p.word())).collect();
    println!("single qubit: H = {}  T = {t:.4}", terms.join(" "));

    let plus = xferopt::dynamics::plus_state(1)?;
    println!("|+> -> |1> transfer time {:.4}", transfer_time(&plus, &StateVector::basis(1, 1)?)?);

    let inst = Instance::generate(InstanceKind::Sk, 8, 3, GenParams::default())?;
    let spec = diagonal_spectrum(&inst.graph)?;
    for f in [SpectralFunction::Identity, SpectralFunction::Power(3), SpectralFunction::Exp, SpectralFunction::GroundProjector] {
        let r = lpa_metrics(&spec, f)?;
        println!(
            "{:<16} overlap {:+.4}  t_omega {:.4}  t_perp {:.4}  ratio {:.4}  pgs {:.4}",
            f.to_string(), r.overlap, r.t_omega, r.t_omega_perp, r.ratio_at_omega, r.pgs_at_omega
        );
    }
    Ok(())
}
