//! Noisy X and Z: the joint-measurability threshold in the noise parameter
//! next to the two-setting Werner steering threshold.

use steercert::quantum::{assemblage_from_povms, Povm, SharedState};
use steercert::steering::{joint_measurability, lhs_feasibility_qubit, threshold_scan, MeshPair};

fn main() -> steercert::error::Result<()> {
    let mesh = MeshPair::fibonacci(642)?;

    let jm = threshold_scan(
        |eta| {
            let pair = [
                Povm::noisy_pauli_axis("X", [1.0, 0.0, 0.0], eta)?,
                Povm::noisy_pauli_axis("Z", [0.0, 0.0, 1.0], eta)?,
            ];
            Ok(joint_measurability(&pair, &mesh, 1e-9)?.status())
        },
        0.0,
        1.0,
        1e-3,
    )?;

    let povms = Povm::pauli_settings(2)?;
    let steer = threshold_scan(
        |p| Ok(lhs_feasibility_qubit(&assemblage_from_povms(&SharedState::werner(p)?, &povms)?, &mesh, 1e-9)?.status()),
        0.0,
        1.0,
        1e-3,
    )?;

    let show = |b: &steercert::steering::ThresholdBracket| {
        format!("[{:.5}, {:.5}]", b.feasible_max.unwrap_or(f64::NAN), b.infeasible_min.unwrap_or(f64::NAN))
    };
    println!("jointly measurable up to eta in {}", show(&jm));
    println!("Werner unsteerable up to p in   {}", show(&steer));
    println!("1/sqrt(2) = {:.5}", 1.0 / 2f64.sqrt());

    let half = [
        Povm::noisy_pauli_axis("X", [1.0, 0.0, 0.0], 0.5)?,
        Povm::noisy_pauli_axis("Z", [0.0, 0.0, 1.0], 0.5)?,
    ];
    let d = joint_measurability(&half, &mesh, 1e-9)?;
    if let Some(model) = d.model() {
        println!("parent POVM at eta = 0.5 uses {} outcomes", model.terms.len());
    }
    Ok(())
}
