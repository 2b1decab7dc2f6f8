//! Reid inferred-variance criterion for the two-mode squeezed vacuum.

use steercert::gaussian::{inferred_variances, reid_sweep, tmsv_covariance};

fn main() -> steercert::error::Result<()> {
    let cm = tmsv_covariance(0.69)?;
    let (vx, vp) = inferred_variances(&cm);
    println!("r = 0.69: Δx_inf = {:.6}, Δp_inf = {:.6}, product = {:.6}", vx.sqrt(), vp.sqrt(), vx.sqrt() * vp.sqrt());
    let [nu_minus, nu_plus] = cm.symplectic_eigenvalues()?;
    println!("symplectic eigenvalues {nu_minus:.12} {nu_plus:.12}");

    println!("{:>5} {:>10} {:>9}", "r", "product", "steering");
    for row in reid_sweep(0.0, 1.5, 0.1)? {
        println!("{:>5.2} {:>10.6} {:>9}", row.r, row.product, row.steering_flag);
    }

    let lossy = cm.with_symmetric_loss(0.8)?;
    let (lx, lp) = inferred_variances(&lossy);
    println!("after 20% loss on both modes: product = {:.6}", (lx * lp).sqrt());
    Ok(())
}
