//! Randomized invariants across modules.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use steercert::boxworld::{prbox_assemblage, uniform_assemblage, GptAssemblage};
use steercert::commands::{cmd_singlet_cjwr, Options};
use steercert::lp::Status;
use steercert::quantum::{assemblage_from_povms, Povm, SharedState};
use steercert::report::RunReport;
use steercert::sampling::random_rotation;
use steercert::scalar::{rat, Rational};
use steercert::steering::{lhs_feasibility_boxworld, lhs_feasibility_qubit, MeshPair};
use steercert::witnesses::{cjwr, correlators_from_assemblage};

/// PR-type box with a xor b = xy + alpha x + beta y + gamma (mod 2).
fn pr_variant(alpha: usize, beta: usize, gamma: usize) -> Vec<Vec<Vec<Vec<Rational>>>> {
    table(|x, a, y, b| if a ^ b == (x * y + alpha * x + beta * y + gamma) % 2 { rat(1, 4) } else { rat(0, 1) })
}

fn deterministic(f: [usize; 4]) -> Vec<Vec<Vec<Vec<Rational>>>> {
    // f = (a0, a1, b0, b1)
    table(|x, a, y, b| if a == f[x] && b == f[2 + y] { rat(1, 2) } else { rat(0, 1) })
}

/// sigma[x][a][y][b] = p(a, b | x, y), given as half of it.
fn table(f: impl Fn(usize, usize, usize, usize) -> Rational) -> Vec<Vec<Vec<Vec<Rational>>>> {
    (0..2)
        .map(|x| (0..2).map(|a| (0..2).map(|y| (0..2).map(|b| f(x, a, y, b) * rat(2, 1)).collect()).collect()).collect())
        .collect()
}

/// Maximum over the eight CHSH expressions, from p(a, b | x, y) directly.
fn max_chsh(asm: &GptAssemblage) -> Rational {
    let e = |x: usize, y: usize| -> Rational {
        let mut s = rat(0, 1);
        for a in 0..2 {
            for b in 0..2 {
                let p = asm.sigma(x, a, y, b);
                s += if a == b { p } else { -p };
            }
        }
        s
    };
    let es = [e(0, 0), e(0, 1), e(1, 0), e(1, 1)];
    let mut best = rat(-100, 1);
    for minus in 0..4 {
        let s: Rational = es.iter().enumerate().map(|(k, v)| if k == minus { -v.clone() } else { v.clone() }).sum();
        for v in [s.clone(), -s] {
            if v > best {
                best = v;
            }
        }
    }
    best
}

fn mix_tables(parts: &[(u32, Vec<Vec<Vec<Vec<Rational>>>>)]) -> GptAssemblage {
    let total: u32 = parts.iter().map(|p| p.0).sum();
    let mut out = table(|_, _, _, _| rat(0, 1));
    for (w, t) in parts {
        let w = rat(*w as i64, total as i64);
        for x in 0..2 {
            for a in 0..2 {
                for y in 0..2 {
                    for b in 0..2 {
                        out[x][a][y][b] += &w * &t[x][a][y][b];
                    }
                }
            }
        }
    }
    GptAssemblage::from_subnormalized(out).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Two inputs, two outputs on both sides: local iff every CHSH form is at most 2.
    #[test]
    fn box_lhs_matches_chsh_facets(
        pr_w in 0u32..6,
        pr_kind in (0usize..2, 0usize..2, 0usize..2),
        det_w in proptest::collection::vec(0u32..4, 4),
        det_f in proptest::collection::vec(proptest::array::uniform4(0usize..2), 4),
        noise_w in 0u32..4,
    ) {
        let mut parts = vec![(pr_w, pr_variant(pr_kind.0, pr_kind.1, pr_kind.2)), (noise_w + 1, table(|_, _, _, _| rat(1, 8)))];
        for (w, f) in det_w.iter().zip(&det_f) {
            parts.push((*w, deterministic(*f)));
        }
        let asm = mix_tables(&parts);
        prop_assert!(asm.check_no_signalling());
        let local = max_chsh(&asm) <= rat(2, 1);
        let verdict = lhs_feasibility_boxworld(&asm).unwrap().status();
        prop_assert_eq!(verdict == Status::Feasible, local);
        prop_assert_ne!(verdict, Status::Undecided);
    }

    #[test]
    fn prbox_noise_boundary(k in 0i64..=64) {
        let lambda = rat(k, 64);
        let asm = prbox_assemblage().mix(&uniform_assemblage(2, 2, 2, 2), &lambda).unwrap();
        let feasible = lhs_feasibility_boxworld(&asm).unwrap().status() == Status::Feasible;
        prop_assert_eq!(feasible, lambda <= rat(1, 2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // A feasible verdict comes with a model; such an assemblage cannot violate
    // CJWR, whose bound needs orthogonal Bob axes.
    #[test]
    fn feasible_never_violates_cjwr(p in 0.0f64..1.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_rotation(&mut rng);
        let axes: Vec<[f64; 3]> = [0, 2].iter().map(|&c| [r[0][c], r[1][c], r[2][c]]).collect();
        let povms: Vec<Povm> = axes.iter().map(|n| Povm::pauli_axis("n", *n).unwrap()).collect();
        let asm = assemblage_from_povms(&SharedState::werner(p).unwrap(), &povms).unwrap();
        let obs: Vec<_> = povms.iter().map(|q| q.observable().unwrap()).collect();
        let w = cjwr(&correlators_from_assemblage(&asm, &obs).unwrap());
        let d = lhs_feasibility_qubit(&asm, &MeshPair::fibonacci(42).unwrap(), 1e-9).unwrap();
        if let Some(model) = d.model() {
            prop_assert!(!w.violated, "F = {}", w.f);
            prop_assert!(common::model_residual(model, &asm) < 1e-8);
        }
        if let Some(wit) = d.witness() {
            let (value, best) = common::qubit_witness_oracle(wit, &asm);
            prop_assert!(value > best);
        }
    }

    // Finer meshes never flip a decided verdict.
    #[test]
    fn refinement_keeps_decided_verdicts(p in 0.3f64..0.95) {
        let povms = Povm::pauli_settings(2).unwrap();
        let asm = assemblage_from_povms(&SharedState::werner(p).unwrap(), &povms).unwrap();
        let coarse = lhs_feasibility_qubit(&asm, &MeshPair::fibonacci(42).unwrap(), 1e-9).unwrap().status();
        let fine = lhs_feasibility_qubit(&asm, &MeshPair::fibonacci(642).unwrap(), 1e-9).unwrap().status();
        if coarse != Status::Undecided {
            prop_assert_eq!(coarse, fine);
        }
    }

    #[test]
    fn report_round_trips(p in 0.0f64..=1.0, settings in 2usize..=3) {
        let r = cmd_singlet_cjwr(settings, Some(p), &Options { mesh: 42, ..Options::default() }).unwrap();
        let back = RunReport::from_json(&r.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }
}
