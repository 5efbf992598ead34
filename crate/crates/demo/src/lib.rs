//! wasm-bindgen surface for the browser demo. Three operations mirror the
//! CLI commands and work on the same text formats; two grid samplers feed the
//! phase-portrait canvas for two-variable systems. Every return value is a
//! plain string (first line `exit: <code>`) or a flat float buffer, so the
//! page needs no JSON glue.

#![allow(clippy::needless_range_loop)]

use wasm_bindgen::prelude::wasm_bindgen;

use lyapcert::cli::{self, parse_certificate, parse_system};
use lyapcert::exactnum::Rational;
use lyapcert::kernel::SamplingPlan;
use lyapcert::lyapunov::{Mode, SynthParams};

fn tagged(out: &cli::CmdOutput) -> String {
    format!("exit: {}\n{}", out.exit, out.stdout)
}

/// Runs end-to-end synthesis; on success the certificate text follows the
/// report after a `===CERTIFICATE===` line.
#[wasm_bindgen]
pub fn synthesize(system_text: &str, kmax: u32) -> String {
    let params = SynthParams {
        k_max: kmax.clamp(1, 5),
        ..SynthParams::default()
    };
    let out = cli::cmd_synth(system_text, &params);
    match &out.certificate {
        Some(cert) => format!("{}===CERTIFICATE===\n{cert}", tagged(&out)),
        None => tagged(&out),
    }
}

/// Exact verification of a pasted certificate against a system.
#[wasm_bindgen]
pub fn check(system_text: &str, cert_text: &str) -> String {
    tagged(&cli::cmd_check(system_text, cert_text, &Rational::zero()))
}

/// Constructive-kernel report (witness derivation plus sampled clauses).
#[wasm_bindgen]
pub fn kernel_report(system_text: &str, cert_text: &str, random_points: u32) -> String {
    let plan = SamplingPlan {
        random_points: random_points.clamp(50, 20_000) as usize,
        ..SamplingPlan::default()
    };
    tagged(&cli::cmd_kernel(system_text, cert_text, &plan))
}

/// Vector-field samples for a 2-variable system on a `steps x steps` grid
/// over `[-extent, extent]^2`: row-major `(dx, dy)` pairs, or an empty buffer
/// when the system does not parse or is not two-dimensional. Discrete systems
/// report the displacement `f(x) - x`.
#[wasm_bindgen]
pub fn field_grid(system_text: &str, extent: f64, steps: u32) -> Vec<f64> {
    let Ok(parsed) = parse_system(system_text) else {
        return Vec::new();
    };
    if parsed.system.nvars() != 2 || steps == 0 {
        return Vec::new();
    }
    let discrete = parsed.system.mode() == Mode::Discrete;
    let mut out = Vec::with_capacity((steps * steps * 2) as usize);
    for row in 0..steps {
        let y = extent * (2.0 * (row as f64 + 0.5) / steps as f64 - 1.0);
        for col in 0..steps {
            let x = extent * (2.0 * (col as f64 + 0.5) / steps as f64 - 1.0);
            let point = [approx_rational(x), approx_rational(y)];
            let mut velocity = [0.0f64; 2];
            for i in 0..2 {
                let num = parsed.system.numerators()[i]
                    .eval(&point)
                    .map(|v| v.to_f64())
                    .unwrap_or(f64::NAN);
                let den = parsed.system.denominators()[i]
                    .eval(&point)
                    .map(|v| v.to_f64())
                    .unwrap_or(f64::NAN);
                velocity[i] = num / den;
            }
            if discrete {
                velocity[0] -= x;
                velocity[1] -= y;
            }
            out.push(velocity[0]);
            out.push(velocity[1]);
        }
    }
    out
}

/// Values of the certificate's `V` on the same grid layout as
/// [`field_grid`], for drawing level bands; empty when the certificate does
/// not parse or is not two-dimensional.
#[wasm_bindgen]
pub fn lyapunov_grid(cert_text: &str, extent: f64, steps: u32) -> Vec<f64> {
    let Ok((cert, _)) = parse_certificate(cert_text) else {
        return Vec::new();
    };
    if cert.v.nvars() != 2 || steps == 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity((steps * steps) as usize);
    for row in 0..steps {
        let y = extent * (2.0 * (row as f64 + 0.5) / steps as f64 - 1.0);
        for col in 0..steps {
            let x = extent * (2.0 * (col as f64 + 0.5) / steps as f64 - 1.0);
            let point = [approx_rational(x), approx_rational(y)];
            out.push(cert.v.eval(&point).map(|v| v.to_f64()).unwrap_or(f64::NAN));
        }
    }
    out
}

/// Dyadic snap of a plotting coordinate; exactness is irrelevant here, small
/// denominators keep the evaluations fast.
fn approx_rational(x: f64) -> Rational {
    Rational::from_f64_exact((x * 1024.0).round() / 1024.0).unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE_ONE: &str = "\
vars: x1 x2
mode: continuous
x1' = -x1^3 + x2
x2' = -x1 - x2
";

    #[test]
    fn demo_surface_round_trips() {
        let synth = synthesize(EXAMPLE_ONE, 3);
        assert!(synth.starts_with("exit: 0"), "{synth}");
        let cert = synth
            .split("===CERTIFICATE===\n")
            .nth(1)
            .expect("certificate section");
        let checked = check(EXAMPLE_ONE, cert);
        assert!(checked.starts_with("exit: 0"), "{checked}");
        assert!(checked.contains("AsymptoticallyStable"));

        let field = field_grid(EXAMPLE_ONE, 1.5, 8);
        assert_eq!(field.len(), 8 * 8 * 2);
        let v = lyapunov_grid(cert, 1.5, 8);
        assert_eq!(v.len(), 8 * 8);
        assert!(v.iter().all(|x| x.is_finite() && *x >= 0.0));
    }

    #[test]
    fn bad_input_reports_parse_exit() {
        let out = synthesize("vars x\n", 2);
        assert!(out.starts_with("exit: 3"), "{out}");
        assert!(field_grid("nonsense", 1.0, 8).is_empty());
    }
}
