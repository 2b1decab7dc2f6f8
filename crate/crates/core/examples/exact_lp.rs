//! The feasibility LP on its own: a model when one exists, a Farkas
//! certificate when not, in rationals or floats.

use steercert::lp::{solve_feasibility, verify_certificate, FeasibilityProblem, FeasibilityVerdict};
use steercert::scalar::{rat, Rational, Scalar};

fn main() -> steercert::error::Result<()> {
    // x + y = 1, x - y = 1/3, x, y >= 0
    let mut p: FeasibilityProblem<Rational> = FeasibilityProblem::new(2);
    p.add_row(vec![rat(1, 1), rat(1, 1)], rat(1, 1))?;
    p.add_row(vec![rat(1, 1), rat(-1, 1)], rat(1, 3))?;
    report(&p, solve_feasibility(&p, 0.0)?)?;

    // x + y = 1, x + y = 2
    let mut q: FeasibilityProblem<Rational> = FeasibilityProblem::new(2);
    q.add_row(vec![rat(1, 1), rat(1, 1)], rat(1, 1))?;
    q.add_row(vec![rat(1, 1), rat(1, 1)], rat(2, 1))?;
    report(&q, solve_feasibility(&q, 0.0)?)?;

    let mut f: FeasibilityProblem<f64> = FeasibilityProblem::new(3);
    f.add_row(vec![1.0, 1.0, 1.0], 1.0)?;
    f.add_row(vec![0.2, 0.5, 0.9], 0.7)?;
    report(&f, solve_feasibility(&f, 1e-9)?)
}

fn report<T: Scalar>(p: &FeasibilityProblem<T>, v: FeasibilityVerdict<T>) -> steercert::error::Result<()> {
    match v {
        FeasibilityVerdict::Feasible { model } => {
            let shown: Vec<String> = model.iter().map(Scalar::render).collect();
            println!("feasible: x = ({})", shown.join(", "));
        }
        FeasibilityVerdict::Infeasible { certificate } => {
            verify_certificate(p, &certificate, 1e-9)?;
            let shown: Vec<String> = certificate.iter().map(Scalar::render).collect();
            println!("infeasible: c = ({}), re-verified", shown.join(", "));
        }
        FeasibilityVerdict::Undecided { residual, .. } => println!("undecided, residual {residual:.3e}"),
    }
    Ok(())
}
