//! Singlet with Alice measuring X and Z: every Bob outcome is predictable in
//! some context, yet no LHS or PV model on {X, Z} reproduces the statistics.
//!
//! cargo run --example singlet_counterexample -- [mesh]

use steercert::quantum::{assemblage_from_povms, scan_predictability, Povm, SharedState, DEFAULT_CERTAINTY_EPS};
use steercert::steering::{lhs_feasibility_qubit, pv_feasibility_qubit, MeshPair};
use steercert::witnesses::{cjwr, correlators_from_assemblage};

fn main() -> steercert::error::Result<()> {
    let mesh_size: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(162);
    let povms = Povm::pauli_settings(2)?;
    let asm = assemblage_from_povms(&SharedState::singlet(), &povms)?;

    println!("certain contexts (x, a) -> (y, b):");
    for r in scan_predictability(&asm, &povms, DEFAULT_CERTAINTY_EPS)? {
        println!("  ({}, {}) -> ({}, {})  p = {:.12}", r.x, r.a, r.y, r.b, r.probability);
    }

    let obs = povms.iter().map(Povm::observable).collect::<Result<Vec<_>, _>>()?;
    let w = cjwr(&correlators_from_assemblage(&asm, &obs)?);
    println!("CJWR F = {:.12} (bound 1, violated: {})", w.f, w.violated);

    let mesh = MeshPair::fibonacci(mesh_size)?;
    let lhs = lhs_feasibility_qubit(&asm, &mesh, 1e-9)?;
    println!("LHS on mesh {mesh_size}: {}", lhs.status());
    if let Some(wit) = lhs.witness() {
        println!("  witness value {:.6} > LHS bound {:.6}", wit.value, wit.lhs_bound);
        for (row, f) in wit.rows.iter().zip(&wit.functional) {
            if f.abs() > 1e-9 {
                println!("  {row:>16}  {f:+.6}");
            }
        }
    }

    let pv_both = pv_feasibility_qubit(&asm, &povms, 1e-9)?;
    let pv_z = pv_feasibility_qubit(&asm, &povms[1..], 1e-9)?;
    println!("PV on {{X, Z}}: {}", pv_both.status());
    println!("PV on {{Z}}:    {}", pv_z.status());
    if let Some(model) = pv_z.model() {
        for t in &model.terms {
            println!("  Alice {:?}  Bob bloch {:?}  weight {:.4}", t.strategy.responses, t.hidden, t.weight);
        }
    }
    Ok(())
}
