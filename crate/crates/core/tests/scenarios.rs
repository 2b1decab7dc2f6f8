//! Expected verdicts for the shipped scenario files.

use std::path::PathBuf;

use steercert::commands::{cmd_check, Arithmetic, Options};
use steercert::lp::Status::{self, *};

fn check(name: &str, mode: Arithmetic) -> steercert::report::RunReport {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name);
    cmd_check(&path, &Options { mode, ..Options::default() }).unwrap()
}

fn status(r: &steercert::report::RunReport, name: &str) -> Status {
    r.verdict(name).unwrap_or_else(|| panic!("no {name} verdict")).status
}

#[test]
fn quantum_scenarios() {
    let cases: [(&str, Status, Status, Status); 7] = [
        ("singlet_xz.json", Infeasible, Infeasible, Infeasible),
        ("singlet_z_only.json", Infeasible, Feasible, Feasible),
        ("singlet_xzy.json", Infeasible, Infeasible, Infeasible),
        ("werner_040_xz.json", Feasible, Infeasible, Feasible),
        ("werner_080_xz.json", Infeasible, Infeasible, Infeasible),
        ("werner_050_xzy.json", Feasible, Infeasible, Feasible),
        ("product_state.json", Feasible, Infeasible, Feasible),
    ];
    for (file, lhs, pv, lhs_tests) in cases {
        let r = check(file, Arithmetic::Float);
        assert_eq!(status(&r, "lhs"), lhs, "{file} lhs");
        assert_eq!(status(&r, "pv"), pv, "{file} pv");
        assert_eq!(status(&r, "lhs_on_tests"), lhs_tests, "{file} lhs_on_tests");
        assert!(r.checks["one_sided_no_signalling"], "{file}");
    }
    let jm = check("singlet_xz.json", Arithmetic::Float);
    assert_eq!(status(&jm, "joint_measurability"), Infeasible);
}

#[test]
fn box_scenarios_agree_across_arithmetic() {
    for (file, lhs, chsh) in [
        ("prbox.json", Infeasible, "4"),
        ("prbox_mix_3_4.json", Infeasible, "3"),
        ("prbox_mix_1_4.json", Feasible, "1"),
        ("uniform_box.json", Feasible, "0"),
    ] {
        let exact = check(file, Arithmetic::Exact);
        let float = check(file, Arithmetic::Float);
        assert_eq!(status(&exact, "lhs"), lhs, "{file}");
        assert_eq!(status(&float, "lhs"), lhs, "{file}");
        assert_eq!(exact.exact_values["chsh"], chsh);
        assert!(exact.verdict("lhs").unwrap().exact);
    }
}

#[test]
fn exact_mode_rejected_for_quantum_files() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/singlet_xz.json");
    let err = cmd_check(&path, &Options { mode: Arithmetic::Exact, ..Options::default() }).unwrap_err();
    assert!(err.is_input_error());
}
