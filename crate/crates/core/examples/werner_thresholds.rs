//! Werner visibility thresholds for two and three matched Pauli settings:
//! the CJWR crossing against the LP bracket.
//!
//! cargo run --release --example werner_thresholds -- [mesh]

use steercert::quantum::{assemblage_from_povms, Povm, SharedState};
use steercert::steering::{lhs_feasibility_qubit, threshold_scan, MeshPair};
use steercert::witnesses::{correlators_from_assemblage, linear_crossing};

fn main() -> steercert::error::Result<()> {
    let mesh_size: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(642);
    let mesh = MeshPair::fibonacci(mesh_size)?;
    println!("mesh {mesh_size}: covering angle {:.4} rad", mesh.covering_angle);

    for m in [2, 3] {
        let povms = Povm::pauli_settings(m)?;
        let obs = povms.iter().map(Povm::observable).collect::<Result<Vec<_>, _>>()?;
        let at_one = correlators_from_assemblage(&assemblage_from_povms(&SharedState::werner(1.0)?, &povms)?, &obs)?;
        let crossing = linear_crossing(&at_one).expect("nonzero correlators");

        let bracket = threshold_scan(
            |p| {
                let asm = assemblage_from_povms(&SharedState::werner(p)?, &povms)?;
                Ok(lhs_feasibility_qubit(&asm, &mesh, 1e-9)?.status())
            },
            0.0,
            1.0,
            1e-3,
        )?;
        println!(
            "m = {m}: witness crossing {crossing:.6} (1/sqrt(m) = {:.6}), LP bracket [{:.5}, {:.5}] after {} LPs",
            1.0 / (m as f64).sqrt(),
            bracket.feasible_max.unwrap_or(f64::NAN),
            bracket.infeasible_min.unwrap_or(f64::NAN),
            bracket.evaluations.len(),
        );
    }
    Ok(())
}
