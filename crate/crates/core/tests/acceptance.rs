//! Acceptance suite: one test per acceptance criterion, each printing a
//! pass line with its measured evidence. Run with `--nocapture` to see them:
//!
//! ```text
//! cargo test -p lyapcert --test acceptance -- --nocapture
//! ```

use std::time::Instant;

use lyapcert::cli::{cmd_check, cmd_synth, EXIT_OK};
use lyapcert::exactnum::{PrecP, Rational};
use lyapcert::kernel::{check_pos_def_rat_wit, eta_from_certificate, poly_to_contmv, SamplingPlan};
use lyapcert::lyapunov::{
    check_lyapunov, decrease_polynomial, exact_lyapunov, Mode, PolySystem, SynthParams, Verdict,
};
use lyapcert::poly::{parse_polynomial, Monomial, PolyVector, Polynomial};
use lyapcert::rng::SplitMix64;
use lyapcert::sdp::{min_eig_estimate, sdp_solve, LinearExpr, MatrixCoeff, SdpOutcome, SdpProblem};
use lyapcert::sos::{
    basis_for, gram_constraints, intsos, verify_certificate, BasisKind, IntsosParams,
    WeightedSosCertificate,
};

fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("cannot read {path}: {e}"))
}

fn poly(src: &str, names: &[&str]) -> Polynomial {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    parse_polynomial(src, &names).unwrap()
}

fn rat(s: &str) -> Rational {
    s.parse().unwrap()
}

fn report(criterion: u32, detail: &str) {
    println!("[acceptance] criterion {criterion}: PASS - {detail}");
}

#[test]
fn criterion_1_example_one_decrease_identity() {
    let start = Instant::now();
    let names = ["x1", "x2"];
    let sys = PolySystem::polynomial(
        Mode::Continuous,
        vec![poly("-x1^3 + x2", &names), poly("-x1 - x2", &names)],
    )
    .unwrap();
    let v = poly("223/200*x1^2 + 223/200*x2^2", &names);
    let (decrease, multiplier) = decrease_polynomial(&sys, &v).unwrap();
    assert_eq!(decrease, poly("223/100*x1^4 + 223/100*x2^2", &names));
    assert_eq!(multiplier, Polynomial::one(2));
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    report(1, &format!("exact coefficient equality in {elapsed:?}"));
}

#[test]
fn criterion_2_example_three_discrete_decrease_identity() {
    let start = Instant::now();
    let names = ["x", "y"];
    let numerators = PolyVector::new(vec![poly("y", &names), poly("x", &names)]).unwrap();
    let denominators =
        PolyVector::new(vec![poly("1 + x^2", &names), poly("1 + y^2", &names)]).unwrap();
    let sys = PolySystem::new(Mode::Discrete, numerators, denominators).unwrap();
    let v = poly("x^2 + y^2", &names);
    let (decrease, multiplier) = decrease_polynomial(&sys, &v).unwrap();
    assert_eq!(multiplier, poly("(1 + x^2)^2*(1 + y^2)^2", &names));
    assert_eq!(
        decrease,
        poly(
            "x^6*y^4 + x^4*y^6 + 2*x^6*y^2 + 4*x^4*y^4 + 2*x^2*y^6 \
             + 5*x^4*y^2 + 5*x^2*y^4 + 4*x^2*y^2",
            &names
        )
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    report(2, &format!("exact discrete decrease in {elapsed:?}"));
}

#[test]
fn criterion_3_worked_sos_identity_verifies() {
    let start = Instant::now();
    let names = ["x1", "x2"];
    let g = poly(
        "4*x1^4 + 4*x1^3*x2 - 7*x1^2*x2^2 - 2*x1*x2^3 + 10*x2^4",
        &names,
    );
    let cert = WeightedSosCertificate::new(
        2,
        vec![Rational::one(), Rational::one()],
        vec![
            poly("2*x1*x2 + x2^2", &names),
            poly("2*x1^2 + x1*x2 - 3*x2^2", &names),
        ],
    )
    .unwrap();
    assert!(verify_certificate(&g, &cert).is_exact());
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 0.1, "took {elapsed:?}");
    report(3, &format!("ExactMatch in {elapsed:?}"));
}

#[test]
fn criterion_4_end_to_end_synthesis_on_fixtures() {
    let params = SynthParams::default();

    let start = Instant::now();
    let ex1 = fixture("example1.sys");
    let out = cmd_synth(&ex1, &params);
    assert_eq!(out.exit, EXIT_OK, "{}", out.stdout);
    assert!(out.stdout.contains("degree: 2"), "{}", out.stdout);
    let cert1 = out.certificate.expect("certificate text");
    let check = cmd_check(&ex1, &cert1, &Rational::zero());
    assert_eq!(check.exit, EXIT_OK);
    assert!(
        check.stdout.contains("AsymptoticallyStable"),
        "{}",
        check.stdout
    );
    let t1 = start.elapsed();
    assert!(t1.as_secs_f64() < 60.0, "example 1 took {t1:?}");

    let start = Instant::now();
    let ex2 = fixture("example2.sys");
    let out = cmd_synth(&ex2, &params);
    assert_eq!(out.exit, EXIT_OK, "{}", out.stdout);
    assert!(out.stdout.contains("degree: 2"), "{}", out.stdout);
    let cert2 = out.certificate.expect("certificate text");
    let check = cmd_check(&ex2, &cert2, &Rational::zero());
    assert_eq!(check.exit, EXIT_OK, "{}", check.stdout);
    assert!(
        check.stdout.contains("AsymptoticallyStable") || check.stdout.contains("Stable"),
        "{}",
        check.stdout
    );
    let t2 = start.elapsed();
    assert!(t2.as_secs_f64() < 60.0, "example 2 took {t2:?}");

    report(
        4,
        &format!("example 1 in {t1:?} (AsymptoticallyStable), example 2 in {t2:?} (at least Stable), both 2k = 2"),
    );
}

#[test]
fn criterion_5_intsos_round_trip_on_fifty_random_certificates() {
    let start = Instant::now();
    let mut rng = SplitMix64::new(0x005e_ed50);
    for trial in 0..50usize {
        let nvars = 1 + trial % 3;
        let half_degree = 1 + (trial as u32 / 3) % 3; // 2d up to 6
        let kind = if trial % 2 == 0 {
            BasisKind::FullDegreeLe
        } else {
            BasisKind::HomogeneousDegree
        };
        let basis = basis_for(nvars, half_degree, kind);
        let squares_count = 1 + rng.next_below(3) as usize;
        let mut weights = Vec::new();
        let mut squares = Vec::new();
        for _ in 0..squares_count {
            weights.push(Rational::new(rng.next_i64_in(1, 9), rng.next_i64_in(1, 4)));
            let mut s = Polynomial::zero(nvars);
            for m in basis.monomials() {
                if rng.next_below(2) == 0 {
                    s.add_term(
                        m.clone(),
                        Rational::new(rng.next_i64_in(-4, 4), rng.next_i64_in(1, 3)),
                    );
                }
            }
            if s.is_zero() {
                s.add_term(basis.monomials()[0].clone(), Rational::one());
            }
            squares.push(s);
        }
        let cert = WeightedSosCertificate::new(nvars, weights, squares).unwrap();
        // interior shift: + 1/4 * sum of squared basis monomials
        let mut g = cert.assemble();
        for m in basis.monomials() {
            g.add_term(m.double(), Rational::new(1, 4));
        }
        let found = intsos(&g, &IntsosParams::default_for(&g))
            .unwrap_or_else(|e| panic!("trial {trial} (n={nvars}, d={half_degree}): {e}"));
        assert!(
            verify_certificate(&g, &found).is_exact(),
            "trial {trial} does not re-verify"
        );
        for w in found.weights() {
            assert!(!w.is_negative());
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    report(5, &format!("50/50 ExactMatch in {elapsed:?}"));
}

#[test]
fn criterion_6_tamper_rejection_with_exact_residuals() {
    let start = Instant::now();
    let names = ["x1", "x2"];
    let sys = PolySystem::polynomial(
        Mode::Continuous,
        vec![poly("-x1^3 + x2", &names), poly("-x1 - x2", &names)],
    )
    .unwrap();
    let cert = exact_lyapunov(&sys, &SynthParams::default()).unwrap();
    let mut rng = SplitMix64::new(0x07a3_b100);
    let mut rejected = 0;
    let mut with_residual = 0;
    for trial in 0..100usize {
        // magnitudes from 1e-6 to 1e-1
        let exponent = 1 + (trial % 6) as i64;
        let magnitude = Rational::one()
            .checked_div(&Rational::from_int(10i64.pow(exponent as u32)))
            .unwrap();
        let mut bad = cert.clone();
        match rng.next_below(4) {
            0 => {
                let m = Monomial::new(vec![2, 0]);
                bad.v.add_term(m, magnitude);
            }
            1 => {
                let m = Monomial::new(vec![0, 2]);
                bad.decrease.add_term(m, magnitude);
            }
            2 => {
                let mut weights = bad.cert_decrease.weights().to_vec();
                let squares = bad.cert_decrease.squares().to_vec();
                let idx = rng.next_below(weights.len() as u64) as usize;
                weights[idx] += &magnitude;
                bad.cert_decrease =
                    WeightedSosCertificate::new(2, weights, squares).unwrap();
            }
            _ => {
                let weights = bad.cert_v.weights().to_vec();
                let mut squares = bad.cert_v.squares().to_vec();
                let idx = rng.next_below(squares.len() as u64) as usize;
                let m = squares[idx].terms().next().unwrap().0.clone();
                squares[idx].add_term(m, magnitude);
                bad.cert_v = WeightedSosCertificate::new(2, weights, squares).unwrap();
            }
        }
        match check_lyapunov(&sys, &bad, &Rational::zero()) {
            Verdict::Invalid { residual, .. } => {
                rejected += 1;
                if let Some(r) = residual {
                    assert!(!r.is_zero(), "trial {trial}: zero residual reported");
                    with_residual += 1;
                }
            }
            verdict => panic!("trial {trial}: tampering accepted as {verdict}"),
        }
    }
    assert_eq!(rejected, 100);
    assert_eq!(with_residual, 100, "every rejection carries its exact residual");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    report(6, &format!("100/100 rejected with nonzero residuals in {elapsed:?}"));
}

#[test]
fn criterion_7_square_map_modulus_on_the_full_dyadic_grid() {
    let start = Instant::now();
    // f(x) = x^2 on [0, 2] with omega(p) = p + 3: check
    // |a - b| <= 2^(-p-2) => |a^2 - b^2| <= 2^-p on the grid of step 2^-8.
    let step_bits: u32 = 8;
    let steps: i64 = 2 << step_bits; // 2 * 2^8 steps cover [0, 2]
    let mut checked: u64 = 0;
    for p in 1..=8u32 {
        let tol_in = Rational::pow2(-(p as i64) - 2);
        let tol_out = Rational::pow2(-(p as i64));
        // |a - b| <= 2^(-p-2) means |i - j| <= 2^(step_bits - p - 2) steps
        let window = 1i64 << (step_bits.saturating_sub(p + 2));
        for i in 0..=steps {
            let a = Rational::new(i, 1 << step_bits);
            let a2 = &a * &a;
            for j in (i + 1)..=(i + window).min(steps) {
                let b = Rational::new(j, 1 << step_bits);
                if (&a - &b).abs() <= tol_in {
                    let diff = (&a2 - &(&b * &b)).abs();
                    assert!(diff <= tol_out, "a = {a}, b = {b}, p = {p}");
                    checked += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    report(
        7,
        &format!("{checked} grid pairs, zero failures, in {elapsed:?}"),
    );
}

#[test]
fn criterion_8_witness_soundness_for_example_one_v() {
    let start = Instant::now();
    let names = ["x1", "x2"];
    // the published V = 223/200 (x1^2 + x2^2) with shift mu = 1:
    // V - (x1^2 + x2^2) = 23/200 (x1^2 + x2^2), certified directly
    let v = poly("223/200*x1^2 + 223/200*x2^2", &names);
    let cert = WeightedSosCertificate::new(
        2,
        vec![rat("23/200"), rat("23/200")],
        vec![poly("x1", &names), poly("x2", &names)],
    )
    .unwrap();
    let eta = eta_from_certificate(&v, &cert, &Rational::one(), 2, 1).unwrap();
    // leading behavior 2p + constant: eta(p) = 2(p + 1) + 1 = 2p + 3
    for p in 1..=10u32 {
        assert_eq!(eta.eta(PrecP::new(p)).get(), 2 * p + 3);
    }
    let plan = SamplingPlan {
        grid_bits: 6,
        max_precision: 8,
        random_points: 9500,
        seed: 0xE7A,
        max_shell_points: 600,
    };
    let g = poly_to_contmv(&v, vec![Rational::zero(); 2], Rational::one());
    let rep = check_pos_def_rat_wit(&g, &eta, &plan);
    assert!(rep.center_ok && rep.zero_ok);
    assert!(rep.failures.is_empty(), "{} failures", rep.failures.len());
    assert!(rep.checked >= 10_000, "only {} points sampled", rep.checked);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    report(
        8,
        &format!(
            "eta(p) = 2p + 3, {} plan points, zero failures, in {elapsed:?}",
            rep.checked
        ),
    );
}

#[test]
fn criterion_9_sdp_solver_oracle_equivalence() {
    let start = Instant::now();
    // twenty random Gram feasibility problems with block dimension <= 10
    let mut rng = SplitMix64::new(0x09ac1e);
    for trial in 0..20usize {
        let (nvars, degree) = match trial % 3 {
            0 => (2usize, 2u32), // dim 6
            1 => (3, 1),         // dim 4
            _ => (3, 2),         // dim 10
        };
        let basis = basis_for(nvars, degree, BasisKind::FullDegreeLe);
        assert!(basis.len() <= 10);
        // a random interior polynomial: random squares plus a diagonal shift
        let mut g = Polynomial::zero(nvars);
        for _ in 0..2 {
            let mut s = Polynomial::zero(nvars);
            for m in basis.monomials() {
                if rng.next_below(2) == 0 {
                    s.add_term(
                        m.clone(),
                        Rational::new(rng.next_i64_in(-3, 3), rng.next_i64_in(1, 2)),
                    );
                }
            }
            g = g + s.square();
        }
        for m in basis.monomials() {
            g.add_term(m.double(), Rational::new(1, 2));
        }
        let cons = gram_constraints(&g, &basis).unwrap();
        let mut prob = SdpProblem::feasibility(vec![basis.len()], 0);
        for c in cons {
            prob.push(
                LinearExpr {
                    matrix: c
                        .pairs
                        .iter()
                        .map(|&(i, j)| MatrixCoeff {
                            block: 0,
                            row: i,
                            col: j,
                            value: 1.0,
                        })
                        .collect(),
                    free: vec![],
                },
                c.rhs.to_f64(),
            );
        }
        match sdp_solve(&prob, 1e-9) {
            SdpOutcome::Solution(sol) => {
                assert!(
                    sol.max_residual <= 1e-7,
                    "trial {trial}: residual {}",
                    sol.max_residual
                );
                assert!(
                    sol.min_eig_lower[0] >= -1e-7,
                    "trial {trial}: min eig {}",
                    sol.min_eig_lower[0]
                );
            }
            other => panic!("trial {trial}: {other:?}"),
        }
    }

    // hand-checkable instance 1: {G >= 0, trace G = 1, dim 2} -> G = I/2
    let mut prob = SdpProblem::feasibility(vec![2], 0);
    prob.push(
        LinearExpr {
            matrix: vec![
                MatrixCoeff {
                    block: 0,
                    row: 0,
                    col: 0,
                    value: 1.0,
                },
                MatrixCoeff {
                    block: 0,
                    row: 1,
                    col: 1,
                    value: 1.0,
                },
            ],
            free: vec![],
        },
        1.0,
    );
    let sol = match sdp_solve(&prob, 1e-9) {
        SdpOutcome::Solution(s) => s,
        other => panic!("expected a solution, got {other:?}"),
    };
    assert!((sol.optimum - 0.5).abs() <= 1e-6, "slack {}", sol.optimum);
    for (i, j, want) in [(0, 0, 0.5), (0, 1, 0.0), (1, 1, 0.5)] {
        assert!((sol.blocks[0].get(i, j) - want).abs() <= 1e-6);
    }

    // hand-checkable instance 2: Gram of (x1 + x2)^2 is uniquely the all-ones
    // matrix with minimum eigenvalue 0
    let names = ["x1", "x2"];
    let g = poly("x1^2 + 2*x1*x2 + x2^2", &names);
    let basis = basis_for(2, 1, BasisKind::HomogeneousDegree);
    let cons = gram_constraints(&g, &basis).unwrap();
    let mut prob = SdpProblem::feasibility(vec![2], 0);
    for c in cons {
        prob.push(
            LinearExpr {
                matrix: c
                    .pairs
                    .iter()
                    .map(|&(i, j)| MatrixCoeff {
                        block: 0,
                        row: i,
                        col: j,
                        value: 1.0,
                    })
                    .collect(),
                free: vec![],
            },
            c.rhs.to_f64(),
        );
    }
    let sol = match sdp_solve(&prob, 1e-9) {
        SdpOutcome::Solution(s) => s,
        other => panic!("expected a solution, got {other:?}"),
    };
    for (i, j) in [(0, 0), (0, 1), (1, 1)] {
        assert!(
            (sol.blocks[0].get(i, j) - 1.0).abs() <= 1e-6,
            "entry ({i},{j}) = {}",
            sol.blocks[0].get(i, j)
        );
    }
    assert!(min_eig_estimate(&sol.blocks[0]).abs() <= 1e-6);

    let elapsed = start.elapsed();
    report(
        9,
        &format!("20 random + 2 hand-checked instances in {elapsed:?}"),
    );
}
