//! Canned case studies and scenario checks, each producing a [`RunReport`].

use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boxworld::{chsh_value, joint_from_assemblage, prbox_assemblage, GptAssemblage};
use crate::error::{Error, Result};
use crate::gaussian::{inferred_variances, reid_check, reid_sweep, tmsv_covariance};
use crate::linalg::HermitianMatrix;
use crate::lp::{Status, DEFAULT_TOL};
use crate::quantum::{
    assemblage_from_povms, check_no_signalling, scan_predictability, Assemblage, Povm, SharedState, ASSEMBLAGE_TOL,
    DEFAULT_CERTAINTY_EPS,
};
use crate::report::{RunReport, Table, Tolerances, VerdictSummary};
use crate::scalar::{Rational, Scalar};
use crate::scenario::{load_scenario, BoxScenario, QuantumScenario, Scenario};
use crate::steering::{
    joint_measurability, lhs_feasibility_boxworld_with, lhs_feasibility_qubit, pv_feasibility_qubit,
    threshold_scan, MeshPair, QubitTarget, ThresholdBracket,
};
use crate::steering::boxes::pv_feasibility_boxworld_with;
use crate::steering::qubit::lhs_feasibility_qubit_with;
use crate::witnesses::{cjwr, correlators_from_assemblage, correlators_from_joint, linear_crossing, s_m};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Options {
    pub mesh: usize,
    pub tol: f64,
    pub mode: Arithmetic,
    /// Rotates the mesh randomly; without it every run is identical.
    pub seed: Option<u64>,
    pub certainty_eps: f64,
    /// Bisection resolution for threshold scans.
    pub scan_tol: f64,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            mesh: 162,
            tol: DEFAULT_TOL,
            mode: Arithmetic::Float,
            seed: None,
            certainty_eps: DEFAULT_CERTAINTY_EPS,
            scan_tol: 1e-3,
        }
    }
}

impl Options {
    pub fn mesh_pair(&self) -> Result<MeshPair> {
        let mesh = MeshPair::fibonacci(self.mesh)?;
        match self.seed {
            None => Ok(mesh),
            Some(s) => {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                mesh.rotated(&crate::sampling::random_rotation(&mut rng))
            }
        }
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances {
            lp_tol: self.tol,
            certainty_eps: self.certainty_eps,
        }
    }

    fn require_float(&self, what: &str) -> Result<()> {
        if self.mode == Arithmetic::Exact {
            return Err(Error::InvalidParameter(format!(
                "{what} uses floating polytope LPs; exact mode is only available for box-world scenarios"
            )));
        }
        Ok(())
    }

    fn echo(&self, report: &mut RunReport) {
        report.input("mesh", self.mesh);
        report.input("mode", self.mode);
        report.input("seed", self.seed);
    }
}

fn finish(mut report: RunReport, start: Instant) -> RunReport {
    report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    report
}

fn check_settings(settings: usize) -> Result<()> {
    if !(2..=3).contains(&settings) {
        return Err(Error::InvalidParameter(format!("settings must be 2 or 3, got {settings}")));
    }
    Ok(())
}

/// Bob observables matched to `Povm::pauli_settings` (X, Z, Y order).
fn pauli_observables(povms: &[Povm]) -> Result<Vec<HermitianMatrix>> {
    povms.iter().map(Povm::observable).collect()
}

fn werner_assemblage(p: f64, povms: &[Povm]) -> Result<Assemblage> {
    assemblage_from_povms(&SharedState::werner(p)?, povms)
}

/// Singlet (or Werner `p`) with matched Pauli settings: CJWR value, LHS and
/// PV verdicts, and the certain contexts.
pub fn cmd_singlet_cjwr(settings: usize, werner_p: Option<f64>, opts: &Options) -> Result<RunReport> {
    let start = Instant::now();
    check_settings(settings)?;
    opts.require_float("singlet-cjwr")?;
    let mut report = RunReport::new("singlet-cjwr", opts.tolerances());
    report.input("settings", settings);
    report.input("werner_p", werner_p);
    opts.echo(&mut report);

    let state = match werner_p {
        Some(p) => SharedState::werner(p)?,
        None => SharedState::singlet(),
    };
    let povms = Povm::pauli_settings(settings)?;
    let asm = assemblage_from_povms(&state, &povms)?;

    let ns = check_no_signalling(&asm, ASSEMBLAGE_TOL);
    report.checks.insert("one_sided_no_signalling".into(), ns.pass);
    report.witness_values.insert("no_signalling_deviation".into(), ns.max_deviation);

    let corr = correlators_from_assemblage(&asm, &pauli_observables(&povms)?)?;
    let w = cjwr(&corr);
    report.witness_values.insert("S_m".into(), s_m(&corr));
    report.witness_values.insert("F".into(), w.f);
    report.witness_values.insert("cjwr_lhs_bound".into(), 1.0);
    report.checks.insert("cjwr_violated".into(), w.violated);

    report.predictability = scan_predictability(&asm, &povms, opts.certainty_eps)?;

    let mesh = opts.mesh_pair()?;
    let lhs = lhs_feasibility_qubit(&asm, &mesh, opts.tol)?;
    report.verdicts.push(VerdictSummary::from_decision("lhs", &lhs));
    let pv = pv_feasibility_qubit(&asm, &povms, opts.tol)?;
    report.verdicts.push(VerdictSummary::from_decision("pv", &pv));
    for test in &povms {
        let single = pv_feasibility_qubit(&asm, std::slice::from_ref(test), opts.tol)?;
        let name = format!("pv[{}]", test.label().to_lowercase());
        report.verdicts.push(VerdictSummary::from_decision(name, &single));
    }
    if w.violated {
        report.notes.push(format!("CJWR functional F = {:.6} exceeds the LHS bound 1", w.f));
    }
    Ok(finish(report, start))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMode {
    Grid { points: usize },
    Bisect,
    WitnessOnly,
}

fn bracket_from_grid(points: &[(f64, Status)]) -> Result<ThresholdBracket> {
    let fmax = points.iter().filter(|p| p.1 == Status::Feasible).map(|p| p.0).reduce(f64::max);
    let imin = points.iter().filter(|p| p.1 == Status::Infeasible).map(|p| p.0).reduce(f64::min);
    if let (Some(f), Some(i)) = (fmax, imin) {
        if f > i {
            return Err(Error::NonMonotone { feasible_at: f, infeasible_at: i });
        }
    }
    Ok(ThresholdBracket {
        feasible_max: fmax,
        infeasible_min: imin,
        evaluations: points
            .iter()
            .map(|&(p, status)| crate::steering::ScanPoint { p, status })
            .collect(),
        mesh_vertices: None,
    })
}

/// Werner family with `settings` matched Pauli measurements: table of
/// `(p, F, verdict)` and the LHS threshold bracket.
pub fn cmd_werner_scan(settings: usize, mode: ScanMode, opts: &Options) -> Result<RunReport> {
    let start = Instant::now();
    check_settings(settings)?;
    let mut report = RunReport::new("werner-scan", opts.tolerances());
    report.input("settings", settings);
    report.input("scan", mode);
    opts.echo(&mut report);

    let povms = Povm::pauli_settings(settings)?;
    let obs = pauli_observables(&povms)?;
    let f_at = |p: f64| -> Result<f64> {
        Ok(cjwr(&correlators_from_assemblage(&werner_assemblage(p, &povms)?, &obs)?).f)
    };
    let crossing = linear_crossing(&correlators_from_assemblage(&werner_assemblage(1.0, &povms)?, &obs)?)
        .ok_or_else(|| Error::Internal("Werner correlators vanish at p = 1".into()))?;
    report.witness_values.insert("witness_crossing".into(), crossing);

    let mut table = Table::new(&["p", "F", "verdict"]);
    match mode {
        ScanMode::WitnessOnly => {
            for k in 0..=20 {
                let p = k as f64 / 20.0;
                let f = f_at(p)?;
                let v = if f > 1.0 { "witness-violated" } else { "witness-satisfied" };
                table.push(vec![format!("{p:.6}"), format!("{f:.12}"), v.into()]);
            }
        }
        ScanMode::Grid { points } => {
            opts.require_float("werner-scan")?;
            if points < 2 {
                return Err(Error::InvalidParameter("a grid needs at least 2 points".into()));
            }
            let mesh = opts.mesh_pair()?;
            let ps: Vec<f64> = (0..points).map(|k| k as f64 / (points - 1) as f64).collect();
            let rows: Vec<(f64, f64, Status)> = ps
                .par_iter()
                .map(|&p| {
                    let asm = werner_assemblage(p, &povms)?;
                    let status = lhs_feasibility_qubit(&asm, &mesh, opts.tol)?.status();
                    Ok((p, f_at(p)?, status))
                })
                .collect::<Result<_>>()?;
            for (p, f, s) in &rows {
                table.push(vec![format!("{p:.6}"), format!("{f:.12}"), s.to_string()]);
            }
            let grid: Vec<(f64, Status)> = rows.iter().map(|r| (r.0, r.2)).collect();
            let bracket = bracket_from_grid(&grid)?.with_mesh(mesh.info().vertices);
            report.brackets.insert("lhs".into(), bracket);
        }
        ScanMode::Bisect => {
            opts.require_float("werner-scan")?;
            let mesh = opts.mesh_pair()?;
            let bracket = threshold_scan(
                |p| Ok(lhs_feasibility_qubit(&werner_assemblage(p, &povms)?, &mesh, opts.tol)?.status()),
                0.0,
                1.0,
                opts.scan_tol,
            )?
            .with_mesh(mesh.info().vertices);
            let mut evals = bracket.evaluations.clone();
            evals.sort_by(|a, b| a.p.total_cmp(&b.p));
            for e in evals {
                table.push(vec![format!("{:.6}", e.p), format!("{:.12}", f_at(e.p)?), e.status.to_string()]);
            }
            if !bracket.contains(crossing) {
                report.notes.push(format!("LP bracket does not contain the witness crossing {crossing:.6}"));
            }
            report.brackets.insert("lhs".into(), bracket);
        }
    }
    report.table = Some(table);
    Ok(finish(report, start))
}

/// The PR-box assemblage: exact no-signalling, CHSH, LHS and PV verdicts.
pub fn cmd_prbox(opts: &Options) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new("prbox", opts.tolerances());
    report.input("mode", opts.mode);
    box_checks(&prbox_assemblage(), &[0, 1], opts, &mut report)?;
    Ok(finish(report, start))
}

fn box_checks(asm: &GptAssemblage, pv_tests: &[usize], opts: &Options, report: &mut RunReport) -> Result<()> {
    report.checks.insert("one_sided_no_signalling_exact".into(), asm.check_no_signalling());
    let joint = joint_from_assemblage(asm);
    if joint.shape() == [2, 2, 2, 2] {
        let chsh: Rational = chsh_value(&joint, 0.0)?;
        let tsirelson = 2.0 * 2f64.sqrt();
        report.exact_values.insert("chsh".into(), chsh.render());
        report.witness_values.insert("chsh".into(), chsh.to_f64());
        report.witness_values.insert("local_bound".into(), 2.0);
        report.witness_values.insert("tsirelson_bound".into(), tsirelson);
        let rel = if chsh.to_f64() > tsirelson { ">" } else { "<=" };
        report
            .notes
            .push(format!("CHSH {} {rel} 2√2 ≈ {:.4}", chsh.render(), tsirelson));
        let corr = correlators_from_joint(&joint)?;
        report.witness_values.insert("F_matched".into(), cjwr(&corr).f);
    }
    match opts.mode {
        Arithmetic::Exact => {
            let lhs = lhs_feasibility_boxworld_with::<Rational>(asm, 0.0)?;
            report.verdicts.push(VerdictSummary::from_decision("lhs", &lhs));
            let pv = pv_feasibility_boxworld_with::<Rational>(asm, pv_tests, 0.0)?;
            report.verdicts.push(VerdictSummary::from_decision("pv", &pv));
            // Bob's tables restricted to the tests are already the deterministic vertices
            report.verdicts.push(VerdictSummary::from_decision("lhs_on_tests", &pv));
        }
        Arithmetic::Float => {
            let lhs = lhs_feasibility_boxworld_with::<f64>(asm, opts.tol)?;
            report.verdicts.push(VerdictSummary::from_decision("lhs", &lhs));
            let pv = pv_feasibility_boxworld_with::<f64>(asm, pv_tests, opts.tol)?;
            report.verdicts.push(VerdictSummary::from_decision("pv", &pv));
            report.verdicts.push(VerdictSummary::from_decision("lhs_on_tests", &pv));
        }
    }
    report.input("pv_tests", pv_tests);
    Ok(())
}

/// Reid quantities at squeezing `r`, or a CSV sweep over `(start, stop, step)`.
pub fn cmd_reid(r: f64, sweep: Option<(f64, f64, f64)>) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new(
        "reid",
        Tolerances {
            lp_tol: 0.0,
            certainty_eps: 0.0,
        },
    );
    report.input("r", r);
    report.input("sweep", sweep);
    let cm = tmsv_covariance(r)?;
    let (vx, vp) = inferred_variances(&cm);
    let out = reid_check(vx, vp)?;
    let [nu1, nu2] = cm.symplectic_eigenvalues()?;
    report.witness_values.insert("var_x_inf".into(), vx);
    report.witness_values.insert("var_p_inf".into(), vp);
    report.witness_values.insert("delta_x_inf".into(), vx.sqrt());
    report.witness_values.insert("delta_p_inf".into(), vp.sqrt());
    report.witness_values.insert("product".into(), out.product);
    report.witness_values.insert("reid_bound".into(), 0.5);
    report.witness_values.insert("symplectic_nu_minus".into(), nu1);
    report.witness_values.insert("symplectic_nu_plus".into(), nu2);
    report.checks.insert("steering".into(), out.steering);
    if let Some((a, b, step)) = sweep {
        let mut table = Table::new(&["r", "var_x_inf", "var_p_inf", "product", "steering_flag"]);
        for row in reid_sweep(a, b, step)? {
            table.push(vec![
                format!("{:.6}", row.r),
                format!("{:.12}", row.var_x_inf),
                format!("{:.12}", row.var_p_inf),
                format!("{:.12}", row.product),
                row.steering_flag.to_string(),
            ]);
        }
        report.table = Some(table);
    }
    Ok(finish(report, start))
}

/// Loads a scenario file and runs the checks it requests.
pub fn cmd_check(path: &Path, opts: &Options) -> Result<RunReport> {
    let start = Instant::now();
    let scenario = load_scenario(path)?;
    let mut report = RunReport::new("check", opts.tolerances());
    report.input("file", path.display().to_string());
    match scenario {
        Scenario::Quantum(q) => check_quantum(&q, opts, &mut report)?,
        Scenario::Box(b) => check_box(&b, opts, &mut report)?,
    }
    Ok(finish(report, start))
}

fn check_box(b: &BoxScenario, opts: &Options, report: &mut RunReport) -> Result<()> {
    report.input("kind", "box");
    let asm = b.assemblage()?;
    let tests: Vec<usize> = b.pv_tests.clone().unwrap_or_else(|| (0..asm.bob_inputs()).collect());
    box_checks(&asm, &tests, opts, report)
}

/// Bloch directions (both signs) of every test effect; the tests only see
/// hidden states through these.
fn test_directions(tests: &[Povm]) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    for e in tests.iter().flat_map(Povm::effects) {
        let [_, x, y, z] = crate::linalg::pauli::components(e.matrix());
        if (x * x + y * y + z * z).sqrt() > 1e-9 {
            out.push([x, y, z]);
            out.push([-x, -y, -z]);
        }
    }
    out
}

fn check_quantum(q: &QuantumScenario, opts: &Options, report: &mut RunReport) -> Result<()> {
    report.input("kind", "quantum");
    opts.require_float("a quantum scenario")?;
    opts.echo(report);
    let state = q.shared_state()?;
    let alice = q.alice()?;
    let bob = q.bob()?;
    let asm = assemblage_from_povms(&state, &alice)?;
    let eps = q.checks.certainty_eps;
    report.tolerances.certainty_eps = eps;

    let ns = check_no_signalling(&asm, ASSEMBLAGE_TOL);
    report.checks.insert("one_sided_no_signalling".into(), ns.pass);
    report.witness_values.insert("no_signalling_deviation".into(), ns.max_deviation);
    if !bob.is_empty() {
        report.predictability = scan_predictability(&asm, &bob, eps)?;
    }

    if q.checks.cjwr && !bob.is_empty() {
        let binary = bob.len() == alice.len()
            && alice.iter().chain(&bob).all(|p| p.num_outcomes() == 2);
        let obs = if binary { bob.iter().map(Povm::observable).collect::<Result<Vec<_>>>().ok() } else { None };
        match obs.map(|o| correlators_from_assemblage(&asm, &o)) {
            Some(Ok(corr)) => {
                let w = cjwr(&corr);
                report.witness_values.insert("S_m".into(), s_m(&corr));
                report.witness_values.insert("F".into(), w.f);
                report.checks.insert("cjwr_violated".into(), w.violated);
            }
            _ => report
                .notes
                .push("CJWR skipped: needs one two-outcome projective Bob test per Alice setting".into()),
        }
    }

    if q.dim_b != 2 {
        report.notes.push("LHS and PV checks need a qubit on Bob's side; skipped".into());
    } else {
        let mesh = opts.mesh_pair()?;
        if q.checks.lhs {
            let d = lhs_feasibility_qubit(&asm, &mesh, opts.tol)?;
            report.verdicts.push(VerdictSummary::from_decision("lhs", &d));
        }
        if !bob.is_empty() {
            let idx: Vec<usize> = q.checks.pv_tests.clone().unwrap_or_else(|| (0..bob.len()).collect());
            let tests = idx
                .iter()
                .map(|&i| {
                    bob.get(i)
                        .cloned()
                        .ok_or_else(|| Error::Schema(format!("pv_tests index {i} out of range")))
                })
                .collect::<Result<Vec<_>>>()?;
            let d = pv_feasibility_qubit(&asm, &tests, opts.tol)?;
            report.verdicts.push(VerdictSummary::from_decision("pv", &d));
            let refined = mesh.refined_with(&test_directions(&tests))?;
            let d = lhs_feasibility_qubit_with(&asm, QubitTarget::Tests(&tests), &refined, opts.tol)?;
            report.verdicts.push(VerdictSummary::from_decision("lhs_on_tests", &d));
        }
    }
    if q.checks.joint_measurability {
        if q.dim_a == 2 {
            let d = joint_measurability(&alice, &opts.mesh_pair()?, opts.tol)?;
            report.verdicts.push(VerdictSummary::from_decision("joint_measurability", &d));
        } else {
            report.notes.push("joint measurability needs qubit measurements; skipped".into());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singlet_two_settings() {
        let r = cmd_singlet_cjwr(2, None, &Options::default()).unwrap();
        assert!((r.witness_values["F"] - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.verdict("lhs").unwrap().status, Status::Infeasible);
        assert_eq!(r.verdict("pv").unwrap().status, Status::Infeasible);
        assert_eq!(r.predictability.len(), 4);
        let back = RunReport::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn werner_zero_is_classical() {
        let r = cmd_singlet_cjwr(2, Some(0.0), &Options::default()).unwrap();
        assert_eq!(r.witness_values["F"], 0.0);
        assert_eq!(r.verdict("lhs").unwrap().status, Status::Feasible);
        assert_eq!(r.verdict("pv[x]").unwrap().status, Status::Feasible);
        assert_eq!(r.verdict("pv[z]").unwrap().status, Status::Feasible);
    }

    #[test]
    fn prbox_report() {
        let opts = Options {
            mode: Arithmetic::Exact,
            ..Options::default()
        };
        let r = cmd_prbox(&opts).unwrap();
        assert_eq!(r.exact_values["chsh"], "4");
        assert!(r.notes.iter().any(|n| n == "CHSH 4 > 2√2 ≈ 2.8284"));
        assert!(r.checks["one_sided_no_signalling_exact"]);
        assert_eq!(r.verdict("lhs").unwrap().status, Status::Infeasible);
        assert!(r.verdict("lhs").unwrap().exact);
        assert_eq!(r.verdict("pv").unwrap().status, Status::Infeasible);
    }

    #[test]
    fn exact_mode_is_refused_for_qubits() {
        let opts = Options {
            mode: Arithmetic::Exact,
            ..Options::default()
        };
        let err = cmd_singlet_cjwr(2, None, &opts).unwrap_err();
        assert!(err.is_input_error());
    }

    #[test]
    fn reid_report_and_sweep() {
        let r = cmd_reid(0.69, Some((0.0, 2.0, 0.1))).unwrap();
        assert!(r.checks["steering"]);
        assert_eq!(format!("{:.3}", r.witness_values["product"]), "0.237");
        assert_eq!(r.table.as_ref().unwrap().rows.len(), 21);
        assert!(cmd_reid(-1.0, None).is_err());
    }

    #[test]
    fn seeded_mesh_is_reproducible() {
        let opts = Options {
            seed: Some(7),
            ..Options::default()
        };
        assert_eq!(opts.mesh_pair().unwrap(), opts.mesh_pair().unwrap());
        assert_ne!(opts.mesh_pair().unwrap(), Options::default().mesh_pair().unwrap());
    }

    #[test]
    fn witness_only_scan() {
        let r = cmd_werner_scan(2, ScanMode::WitnessOnly, &Options::default()).unwrap();
        assert!((r.witness_values["witness_crossing"] - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!(cmd_werner_scan(4, ScanMode::Bisect, &Options::default()).is_err());
    }
}
