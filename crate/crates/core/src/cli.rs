//! Text formats and command drivers for the `lyapcert` binary.
//!
//! System files declare variables, a mode and one equation per variable:
//!
//! ```text
//! vars: x1 x2
//! mode: continuous
//! x1' = -x1^3 + x2
//! x2' = -x1 - x2
//! ```
//!
//! Discrete systems use `x1+ = ...`; rational right-hand sides write the
//! numerator and denominator as parenthesized expressions separated by `/`,
//! as in `x1+ = (x2) / (1 + x1^2)`. Blank lines and `#` comments are ignored.
//!
//! Certificate files are line-oriented audit artifacts: a `lyapcert-v1`
//! header, scalar fields, the polynomials in canonical form over `x1..xn`
//! (positional, independent of the system's variable names), and one
//! `c = <rational> ; s = <polynomial>` line per square. Parsing them back
//! reproduces the exact rationals.
//!
//! Exit codes: 0 verified/success, 1 verification failed, 2 synthesis
//! failure, 3 parse or IO error.

use std::fmt::Write as _;

use crate::exactnum::{PrecP, Rational};
use crate::kernel::{
    check_nonneg, check_pos_def_rat_wit, eta_from_certificate, eta_from_shift_certificate,
    poly_to_contmv, SamplingPlan, Witness,
};
use crate::lyapunov::{
    check_lyapunov, decrease_shift_set, exact_lyapunov, LyapunovCertificate, Mode, PolySystem,
    Strictness, SynthParams,
};
use crate::poly::{parse_polynomial, PolyVector, Polynomial};
use crate::sos::WeightedSosCertificate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_SYNTH_FAILED: i32 = 2;
pub const EXIT_PARSE_ERROR: i32 = 3;

/// A parse failure with the 1-based line it occurred on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for FormatError {}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError {
        line,
        message: message.into(),
    }
}

/// A parsed system file: the declared variable names plus the system itself.
#[derive(Clone, Debug)]
pub struct SystemFile {
    pub vars: Vec<String>,
    pub system: PolySystem,
}

/// Splits a right-hand side of the form `( numerator ) / ( denominator )`;
/// anything else is a plain polynomial numerator.
fn split_rational_rhs(rhs: &str) -> Option<(&str, &str)> {
    let t = rhs.trim();
    if !t.starts_with('(') {
        return None;
    }
    let bytes = t.as_bytes();
    let mut depth = 0usize;
    let mut close = None;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth == 0 {
                    close = Some(i);
                    break;
                }
            }
            _ => {}
        }
    }
    let close = close?;
    let rest = t[close + 1..].trim_start();
    let body = rest.strip_prefix('/')?.trim_start();
    if !(body.starts_with('(') && body.ends_with(')')) {
        return None;
    }
    Some((&t[1..close], &body[1..body.len() - 1]))
}

pub fn parse_system(text: &str) -> Result<SystemFile, FormatError> {
    let mut vars: Option<Vec<String>> = None;
    let mut mode: Option<Mode> = None;
    let mut equations: Vec<(usize, String, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vars:") {
            let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if names.is_empty() {
                return Err(err(lineno, "empty variable list"));
            }
            vars = Some(names);
        } else if let Some(rest) = line.strip_prefix("mode:") {
            mode = Some(match rest.trim() {
                "continuous" => Mode::Continuous,
                "discrete" => Mode::Discrete,
                other => return Err(err(lineno, format!("unknown mode `{other}`"))),
            });
        } else if let Some(eq) = line.find('=') {
            let (lhs, rhs) = (line[..eq].trim(), line[eq + 1..].trim());
            equations.push((lineno, lhs.to_string(), rhs.to_string()));
        } else {
            return Err(err(lineno, format!("unrecognized line `{line}`")));
        }
    }

    let vars = vars.ok_or_else(|| err(1, "missing `vars:` line"))?;
    let mode = mode.ok_or_else(|| err(1, "missing `mode:` line"))?;
    let marker = match mode {
        Mode::Continuous => '\'',
        Mode::Discrete => '+',
    };

    let mut numerators: Vec<Option<Polynomial>> = vec![None; vars.len()];
    let mut denominators: Vec<Option<Polynomial>> = vec![None; vars.len()];
    for (lineno, lhs, rhs) in equations {
        let name = lhs.strip_suffix(marker).ok_or_else(|| {
            err(
                lineno,
                format!("left side `{lhs}` does not end with `{marker}` for {mode} mode"),
            )
        })?;
        let slot = vars
            .iter()
            .position(|v| v == name.trim())
            .ok_or_else(|| err(lineno, format!("undeclared variable `{}`", name.trim())))?;
        if numerators[slot].is_some() {
            return Err(err(lineno, format!("duplicate equation for `{}`", name.trim())));
        }
        let (num_src, den_src) = match split_rational_rhs(&rhs) {
            Some((n, d)) => (n.to_string(), Some(d.to_string())),
            None => (rhs.clone(), None),
        };
        let num = parse_polynomial(&num_src, &vars).map_err(|e| err(lineno, e.to_string()))?;
        let den = match den_src {
            Some(src) => parse_polynomial(&src, &vars).map_err(|e| err(lineno, e.to_string()))?,
            None => Polynomial::one(vars.len()),
        };
        numerators[slot] = Some(num);
        denominators[slot] = Some(den);
    }
    let missing: Vec<&str> = vars
        .iter()
        .zip(&numerators)
        .filter(|(_, n)| n.is_none())
        .map(|(v, _)| v.as_str())
        .collect();
    if !missing.is_empty() {
        return Err(err(1, format!("missing equations for {}", missing.join(", "))));
    }
    let numerators = PolyVector::new(numerators.into_iter().flatten().collect())
        .map_err(|e| err(1, e.to_string()))?;
    let denominators = PolyVector::new(denominators.into_iter().flatten().collect())
        .map_err(|e| err(1, e.to_string()))?;
    let system =
        PolySystem::new(mode, numerators, denominators).map_err(|e| err(1, e.to_string()))?;
    Ok(SystemFile { vars, system })
}

const CERT_HEADER: &str = "lyapcert-v1";

/// Serializes a certificate in the line-oriented `lyapcert-v1` format.
pub fn serialize_certificate(cert: &LyapunovCertificate, mode: Mode) -> String {
    let mut out = String::new();
    let nvars = cert.v.nvars();
    let _ = writeln!(out, "{CERT_HEADER}");
    let _ = writeln!(out, "nvars: {nvars}");
    let _ = writeln!(out, "mode: {mode}");
    let _ = writeln!(out, "half_degree: {}", cert.half_degree);
    let _ = writeln!(out, "shifts: muV={} muD={}", cert.mu_v, cert.mu_d);
    let _ = writeln!(out, "V: {}", cert.v.to_canonical_string());
    let _ = writeln!(out, "multiplier: {}", cert.multiplier.to_canonical_string());
    let _ = writeln!(out, "decrease: {}", cert.decrease.to_canonical_string());
    let _ = writeln!(out, "cert_V:");
    for (c, s) in cert.cert_v.weights().iter().zip(cert.cert_v.squares()) {
        let _ = writeln!(out, "c = {c} ; s = {}", s.to_canonical_string());
    }
    let _ = writeln!(out, "cert_decrease:");
    for (c, s) in cert
        .cert_decrease
        .weights()
        .iter()
        .zip(cert.cert_decrease.squares())
    {
        let _ = writeln!(out, "c = {c} ; s = {}", s.to_canonical_string());
    }
    out
}

/// Parses a `lyapcert-v1` file back to exact in-memory values.
pub fn parse_certificate(text: &str) -> Result<(LyapunovCertificate, Mode), FormatError> {
    let mut lines = text.lines().enumerate().peekable();
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty file"))?;
    if header.trim() != CERT_HEADER {
        return Err(err(1, format!("expected `{CERT_HEADER}` header")));
    }
    let mut nvars: Option<usize> = None;
    let mut mode: Option<Mode> = None;
    let mut half_degree: Option<u32> = None;
    let mut mu_v: Option<Rational> = None;
    let mut mu_d: Option<Rational> = None;
    let mut v: Option<Polynomial> = None;
    let mut multiplier: Option<Polynomial> = None;
    let mut decrease: Option<Polynomial> = None;
    let mut cert_v: Option<WeightedSosCertificate> = None;
    let mut cert_decrease: Option<WeightedSosCertificate> = None;

    let names = |n: usize| -> Vec<String> { (1..=n).map(|i| format!("x{i}")).collect() };
    let need_nvars = |nvars: &Option<usize>, lineno: usize| -> Result<usize, FormatError> {
        nvars.ok_or_else(|| err(lineno, "nvars must appear before any polynomial"))
    };

    while let Some((idx, raw)) = lines.next() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("nvars:") {
            nvars = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| err(lineno, "bad nvars"))?,
            );
        } else if let Some(rest) = line.strip_prefix("mode:") {
            mode = Some(match rest.trim() {
                "continuous" => Mode::Continuous,
                "discrete" => Mode::Discrete,
                other => return Err(err(lineno, format!("unknown mode `{other}`"))),
            });
        } else if let Some(rest) = line.strip_prefix("half_degree:") {
            half_degree = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| err(lineno, "bad half_degree"))?,
            );
        } else if let Some(rest) = line.strip_prefix("shifts:") {
            for part in rest.split_whitespace() {
                if let Some(val) = part.strip_prefix("muV=") {
                    mu_v = Some(val.parse().map_err(|e| err(lineno, format!("muV: {e}")))?);
                } else if let Some(val) = part.strip_prefix("muD=") {
                    mu_d = Some(val.parse().map_err(|e| err(lineno, format!("muD: {e}")))?);
                } else {
                    return Err(err(lineno, format!("unknown shift `{part}`")));
                }
            }
        } else if let Some(rest) = line.strip_prefix("V:") {
            let n = need_nvars(&nvars, lineno)?;
            v = Some(
                parse_polynomial(rest.trim(), &names(n))
                    .map_err(|e| err(lineno, e.to_string()))?,
            );
        } else if let Some(rest) = line.strip_prefix("multiplier:") {
            let n = need_nvars(&nvars, lineno)?;
            multiplier = Some(
                parse_polynomial(rest.trim(), &names(n))
                    .map_err(|e| err(lineno, e.to_string()))?,
            );
        } else if let Some(rest) = line.strip_prefix("decrease:") {
            let n = need_nvars(&nvars, lineno)?;
            decrease = Some(
                parse_polynomial(rest.trim(), &names(n))
                    .map_err(|e| err(lineno, e.to_string()))?,
            );
        } else if line == "cert_V:" || line == "cert_decrease:" {
            let n = need_nvars(&nvars, lineno)?;
            let mut weights = Vec::new();
            let mut squares = Vec::new();
            while let Some((nidx, nraw)) = lines.peek() {
                let nline = nraw.trim();
                if !nline.starts_with("c =") {
                    break;
                }
                let nlineno = nidx + 1;
                let body = nline.strip_prefix("c =").expect("checked");
                let (c_src, s_src) = body
                    .split_once(';')
                    .ok_or_else(|| err(nlineno, "expected `c = ... ; s = ...`"))?;
                let s_src = s_src
                    .trim()
                    .strip_prefix("s =")
                    .ok_or_else(|| err(nlineno, "expected `s =` after `;`"))?;
                let c: Rational = c_src
                    .trim()
                    .parse()
                    .map_err(|e| err(nlineno, format!("weight: {e}")))?;
                let s = parse_polynomial(s_src.trim(), &names(n))
                    .map_err(|e| err(nlineno, e.to_string()))?;
                weights.push(c);
                squares.push(s);
                lines.next();
            }
            let cert = WeightedSosCertificate::new(n, weights, squares)
                .map_err(|e| err(lineno, e.to_string()))?;
            if line == "cert_V:" {
                cert_v = Some(cert);
            } else {
                cert_decrease = Some(cert);
            }
        } else {
            return Err(err(lineno, format!("unrecognized line `{line}`")));
        }
    }

    let mu_d = mu_d.ok_or_else(|| err(1, "missing shifts"))?;
    let strictness = if mu_d.is_positive() {
        Strictness::PositiveDefinite
    } else {
        Strictness::Nonnegative
    };
    Ok((
        LyapunovCertificate {
            v: v.ok_or_else(|| err(1, "missing V"))?,
            half_degree: half_degree.ok_or_else(|| err(1, "missing half_degree"))?,
            multiplier: multiplier.ok_or_else(|| err(1, "missing multiplier"))?,
            decrease: decrease.ok_or_else(|| err(1, "missing decrease"))?,
            cert_v: cert_v.ok_or_else(|| err(1, "missing cert_V"))?,
            cert_decrease: cert_decrease.ok_or_else(|| err(1, "missing cert_decrease"))?,
            mu_v: mu_v.ok_or_else(|| err(1, "missing shifts"))?,
            mu_d,
            strictness,
        },
        mode.ok_or_else(|| err(1, "missing mode"))?,
    ))
}

/// Output of a text-level command: what to print and the process exit code.
#[derive(Clone, Debug)]
pub struct CmdOutput {
    pub stdout: String,
    pub exit: i32,
    /// Serialized certificate, when the command produced one.
    pub certificate: Option<String>,
}

/// End-to-end synthesis from system text. Exit 0 with a certificate, 2 when
/// no certificate was found, 3 on parse errors.
pub fn cmd_synth(system_text: &str, params: &SynthParams) -> CmdOutput {
    let parsed = match parse_system(system_text) {
        Ok(p) => p,
        Err(e) => {
            return CmdOutput {
                stdout: format!("parse error: {e}"),
                exit: EXIT_PARSE_ERROR,
                certificate: None,
            }
        }
    };
    match exact_lyapunov(&parsed.system, params) {
        Ok(cert) => {
            let verdict = check_lyapunov(&parsed.system, &cert, &Rational::zero());
            let mut out = String::new();
            let _ = writeln!(out, "degree: {} (k = {})", 2 * cert.half_degree, cert.half_degree);
            let _ = writeln!(out, "V = {}", cert.v.to_canonical_string());
            let _ = writeln!(
                out,
                "squares: {} for V, {} for the decrease; identities verified exactly",
                cert.cert_v.len(),
                cert.cert_decrease.len()
            );
            let _ = writeln!(out, "verdict: {verdict}");
            CmdOutput {
                stdout: out,
                exit: EXIT_OK,
                certificate: Some(serialize_certificate(&cert, parsed.system.mode())),
            }
        }
        Err(e) => CmdOutput {
            stdout: format!("synthesis failed: {e}"),
            exit: EXIT_SYNTH_FAILED,
            certificate: None,
        },
    }
}

/// Exact verification of a stored certificate. Exit 0 for
/// AsymptoticallyStable/Stable, 1 for Invalid, 3 on parse errors.
pub fn cmd_check(system_text: &str, cert_text: &str, required_shift: &Rational) -> CmdOutput {
    let (system, cert) = match parse_both(system_text, cert_text) {
        Ok(v) => v,
        Err(out) => return out,
    };
    let verdict = check_lyapunov(&system.system, &cert, required_shift);
    let exit = if verdict.is_valid() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    };
    CmdOutput {
        stdout: format!("{verdict}\n"),
        exit,
        certificate: None,
    }
}

fn parse_both(
    system_text: &str,
    cert_text: &str,
) -> Result<(SystemFile, LyapunovCertificate), CmdOutput> {
    let system = parse_system(system_text).map_err(|e| CmdOutput {
        stdout: format!("system parse error: {e}"),
        exit: EXIT_PARSE_ERROR,
        certificate: None,
    })?;
    let (cert, mode) = parse_certificate(cert_text).map_err(|e| CmdOutput {
        stdout: format!("certificate parse error: {e}"),
        exit: EXIT_PARSE_ERROR,
        certificate: None,
    })?;
    if mode != system.system.mode() {
        return Err(CmdOutput {
            stdout: format!(
                "mode mismatch: system is {}, certificate is {}",
                system.system.mode(),
                mode
            ),
            exit: EXIT_VERIFY_FAILED,
            certificate: None,
        });
    }
    Ok((system, cert))
}

/// Constructive-kernel checks on a verified certificate: a rational witness
/// for V's positive definiteness (and the decrease's, when strict), sampled
/// nonnegativity otherwise. Exit 0 iff every clause passes.
pub fn cmd_kernel(system_text: &str, cert_text: &str, plan: &SamplingPlan) -> CmdOutput {
    let (system, cert) = match parse_both(system_text, cert_text) {
        Ok(v) => v,
        Err(out) => return out,
    };
    let verdict = check_lyapunov(&system.system, &cert, &Rational::zero());
    if !verdict.is_valid() {
        return CmdOutput {
            stdout: format!("certificate does not pass check: {verdict}\n"),
            exit: EXIT_VERIFY_FAILED,
            certificate: None,
        };
    }
    let n = cert.v.nvars();
    let origin = vec![Rational::zero(); n];
    let mut out = String::new();
    let mut all_pass = true;

    // V: positive definiteness with a derived rational witness
    let eta = match eta_from_certificate(&cert.v, &cert.cert_v, &cert.mu_v, n, cert.half_degree) {
        Ok(w) => w,
        Err(e) => {
            return CmdOutput {
                stdout: format!("witness derivation impossible for V: {e}\n"),
                exit: EXIT_VERIFY_FAILED,
                certificate: None,
            }
        }
    };
    let v_cont = poly_to_contmv(&cert.v, origin.clone(), Rational::one());
    let report = check_pos_def_rat_wit(&v_cont, &eta, plan);
    describe_eta(&mut out, "V", &eta);
    let _ = writeln!(
        out,
        "V: clause 1 (center within radius): {}",
        pass(report.center_ok)
    );
    let _ = writeln!(out, "V: clause 2 (vanishes at origin): {}", pass(report.zero_ok));
    let _ = writeln!(
        out,
        "V: clause 3 (positive with witness eta): {} [{} points, {} failures]",
        pass(report.failures.is_empty()),
        report.checked,
        report.failures.len()
    );
    all_pass &= report.passed();

    // decrease: strict witness when available, sampled nonnegativity otherwise
    let d_cont = poly_to_contmv(&cert.decrease, origin, Rational::one());
    if cert.mu_d.is_positive() {
        let shift = decrease_shift_set(&cert.decrease);
        match eta_from_shift_certificate(&cert.decrease, &cert.cert_decrease, &cert.mu_d, &shift) {
            Ok(eta_d) => {
                let report = check_pos_def_rat_wit(&d_cont, &eta_d, plan);
                describe_eta(&mut out, "decrease", &eta_d);
                let _ = writeln!(
                    out,
                    "decrease: positive definite with witness: {} [{} points, {} failures]",
                    pass(report.passed()),
                    report.checked,
                    report.failures.len()
                );
                all_pass &= report.passed();
            }
            Err(e) => {
                let _ = writeln!(out, "decrease: witness derivation failed ({e})");
                all_pass = false;
            }
        }
    } else {
        let report = check_nonneg(&d_cont, plan);
        let _ = writeln!(
            out,
            "decrease: nonnegative on sampled plan: {} [{} points, {} failures]",
            pass(report.passed()),
            report.checked,
            report.failures.len()
        );
        all_pass &= report.passed();
    }

    let _ = writeln!(out, "overall: {}", pass(all_pass));
    CmdOutput {
        stdout: out,
        exit: if all_pass { EXIT_OK } else { EXIT_VERIFY_FAILED },
        certificate: None,
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn describe_eta(out: &mut String, label: &str, eta: &Witness) {
    let _ = writeln!(
        out,
        "{label}: witness eta(1)={} eta(2)={} eta(4)={} eta(8)={}",
        eta.eta(PrecP::new(1)),
        eta.eta(PrecP::new(2)),
        eta.eta(PrecP::new(4)),
        eta.eta(PrecP::new(8)),
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const EXAMPLE_ONE: &str = "\
vars: x1 x2
mode: continuous
x1' = -x1^3 + x2
x2' = -x1 - x2
";

    const EXAMPLE_THREE: &str = "\
vars: x y
mode: discrete
x+ = (y) / (1 + x^2)
y+ = (x) / (1 + y^2)
";

    #[test]
    fn parses_continuous_and_discrete_systems() {
        let s = parse_system(EXAMPLE_ONE).unwrap();
        assert_eq!(s.vars, vec!["x1", "x2"]);
        assert_eq!(s.system.mode(), Mode::Continuous);

        let s = parse_system(EXAMPLE_THREE).unwrap();
        assert_eq!(s.system.mode(), Mode::Discrete);
        let names = ["x", "y"];
        let den1 = parse_polynomial("1 + x^2", &names.map(String::from)).unwrap();
        assert_eq!(s.system.denominators()[0], den1);
    }

    #[test]
    fn rejects_malformed_systems() {
        assert!(parse_system("mode: continuous\nx1' = x1\n").is_err());
        assert!(parse_system("vars: x1\nmode: continuous\n").is_err());
        assert!(parse_system("vars: x1\nmode: continuous\nx1+ = x1\n").is_err());
        assert!(parse_system("vars: x1\nmode: continuous\nx1' = x1\nx1' = x1\n").is_err());
        let e = parse_system("vars: x1\nmode: continuous\nx1' = x2\n").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn certificate_round_trip_is_exact() {
        let out = cmd_synth(EXAMPLE_ONE, &SynthParams::default());
        assert_eq!(out.exit, EXIT_OK, "{}", out.stdout);
        let text = out.certificate.unwrap();
        let (cert, mode) = parse_certificate(&text).unwrap();
        assert_eq!(mode, Mode::Continuous);
        let again = serialize_certificate(&cert, mode);
        assert_eq!(text, again);
        let (cert2, _) = parse_certificate(&again).unwrap();
        assert_eq!(cert, cert2);
    }

    #[test]
    fn synth_check_kernel_on_example_one() {
        let out = cmd_synth(EXAMPLE_ONE, &SynthParams::default());
        assert_eq!(out.exit, EXIT_OK, "{}", out.stdout);
        assert!(out.stdout.contains("degree: 2"));
        assert!(out.stdout.contains("AsymptoticallyStable"));
        let cert_text = out.certificate.unwrap();

        let check = cmd_check(EXAMPLE_ONE, &cert_text, &Rational::zero());
        assert_eq!(check.exit, EXIT_OK);
        assert!(check.stdout.contains("AsymptoticallyStable"));

        let plan = SamplingPlan {
            grid_bits: 4,
            max_precision: 5,
            random_points: 60,
            seed: 3,
            max_shell_points: 50,
        };
        let kernel = cmd_kernel(EXAMPLE_ONE, &cert_text, &plan);
        assert_eq!(kernel.exit, EXIT_OK, "{}", kernel.stdout);
        assert!(kernel.stdout.contains("overall: pass"));
    }

    #[test]
    fn kernel_on_the_discrete_example_uses_the_nonnegativity_path() {
        let out = cmd_synth(EXAMPLE_THREE, &SynthParams::default());
        assert_eq!(out.exit, EXIT_OK, "{}", out.stdout);
        let cert_text = out.certificate.unwrap();
        let check = cmd_check(EXAMPLE_THREE, &cert_text, &Rational::zero());
        assert!(check.stdout.contains("Stable"), "{}", check.stdout);

        let plan = SamplingPlan {
            grid_bits: 4,
            max_precision: 5,
            random_points: 60,
            seed: 3,
            max_shell_points: 50,
        };
        let kernel = cmd_kernel(EXAMPLE_THREE, &cert_text, &plan);
        assert_eq!(kernel.exit, EXIT_OK, "{}", kernel.stdout);
        assert!(
            kernel.stdout.contains("nonnegative on sampled plan: pass"),
            "{}",
            kernel.stdout
        );
    }

    #[test]
    fn tampering_is_caught_and_exits_one() {
        let out = cmd_synth(EXAMPLE_ONE, &SynthParams::default());
        let cert_text = out.certificate.unwrap();
        // perturb one digit in the stored decrease polynomial
        let tampered = cert_text.replacen("decrease: ", "decrease: 1/1000000 + ", 1);
        let check = cmd_check(EXAMPLE_ONE, &tampered, &Rational::zero());
        assert_eq!(check.exit, EXIT_VERIFY_FAILED);
        assert!(check.stdout.contains("Invalid"));
    }

    #[test]
    fn unstable_system_exits_two_and_garbage_exits_three() {
        let unstable = "vars: x1\nmode: continuous\nx1' = x1\n";
        let params = SynthParams {
            k_max: 3,
            ..SynthParams::default()
        };
        assert_eq!(cmd_synth(unstable, &params).exit, EXIT_SYNTH_FAILED);
        assert_eq!(
            cmd_synth("vars: x1\nmode: continuous\nx1' = 2x\n", &params).exit,
            EXIT_PARSE_ERROR
        );
    }
}
