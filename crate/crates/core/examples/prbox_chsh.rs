//! The PR box as a box-world assemblage, in exact arithmetic, and the
//! steerability boundary of its mixtures with white noise.

use steercert::boxworld::{chsh_value, joint_from_assemblage, prbox_assemblage, uniform_assemblage};
use steercert::lp::Status;
use steercert::scalar::{rat, Rational, Scalar};
use steercert::steering::{lhs_feasibility_boxworld, pv_feasibility_boxworld};

fn main() -> steercert::error::Result<()> {
    let pr = prbox_assemblage();
    println!("one-sided no-signalling (exact): {}", pr.check_no_signalling());
    let chsh: Rational = chsh_value(&joint_from_assemblage(&pr), 0.0)?;
    println!("CHSH = {} (local 2, Tsirelson {:.4})", chsh.render(), 2.0 * 2f64.sqrt());

    let lhs = lhs_feasibility_boxworld(&pr)?;
    println!("LHS: {}", lhs.status());
    if let Some(w) = lhs.witness() {
        println!("  functional value {} > bound {}", w.value.render(), w.lhs_bound.render());
    }
    println!("PV on both Bob inputs: {}", pv_feasibility_boxworld(&pr, &[0, 1])?.status());

    // Bisection in exact rationals on lambda * PR + (1 - lambda) * uniform.
    let noise = uniform_assemblage(2, 2, 2, 2);
    let (mut lo, mut hi) = (rat(0, 1), rat(1, 1));
    for _ in 0..12 {
        let mid = (&lo + &hi) / rat(2, 1);
        let mixed = pr.mix(&noise, &mid)?;
        match lhs_feasibility_boxworld(&mixed)?.status() {
            Status::Feasible => lo = mid,
            _ => hi = mid,
        }
    }
    println!("mixture boundary in [{}, {}]", lo.render(), hi.render());
    Ok(())
}
