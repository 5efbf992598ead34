//! Command-line front end: `lyapcert synth|check|kernel`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use lyapcert::cli::{self, CmdOutput};
use lyapcert::exactnum::{PrecP, Rational};
use lyapcert::kernel::SamplingPlan;
use lyapcert::lyapunov::SynthParams;
use lyapcert::sdp::to_sdpa_sparse;

const USAGE: &str = "\
usage:
  lyapcert synth <system> [-o <cert>] [--kmax N] [--eps RAT] [--delta N]
                 [--delta-c N] [--strict-shift RAT] [--seed N]
                 [--dump-sdpa <path>]
  lyapcert check <system> <cert> [--strict-shift RAT]
  lyapcert kernel <system> <cert> [--plan-resolution N] [--plan-points N]
                 [--seed N]

exit codes: 0 verified/success, 1 verification failed, 2 synthesis failure,
3 parse/IO error";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let code = match run(&args) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("{msg}");
            cli::EXIT_PARSE_ERROR
        }
    };
    ExitCode::from(code as u8)
}

struct Flags {
    positional: Vec<String>,
    options: Vec<(String, String)>,
}

fn parse_flags(args: &[String]) -> Result<Flags, String> {
    let mut positional = Vec::new();
    let mut options = Vec::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        if let Some(name) = arg.strip_prefix("--") {
            let value = it
                .next()
                .ok_or_else(|| format!("flag --{name} needs a value\n{USAGE}"))?;
            options.push((name.to_string(), value.clone()));
        } else if arg == "-o" {
            let value = it
                .next()
                .ok_or_else(|| format!("-o needs a value\n{USAGE}"))?;
            options.push(("output".to_string(), value.clone()));
        } else {
            positional.push(arg.clone());
        }
    }
    Ok(Flags {
        positional,
        options,
    })
}

impl Flags {
    fn get(&self, name: &str) -> Option<&str> {
        self.options
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }

    fn get_u32(&self, name: &str) -> Result<Option<u32>, String> {
        self.get(name)
            .map(|v| {
                v.parse()
                    .map_err(|_| format!("--{name}: expected an integer"))
            })
            .transpose()
    }

    fn get_rational(&self, name: &str) -> Result<Option<Rational>, String> {
        self.get(name)
            .map(|v| v.parse().map_err(|e| format!("--{name}: {e}")))
            .transpose()
    }
}

fn read(path: &str) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
}

fn emit(out: &CmdOutput) -> i32 {
    print!("{}", out.stdout);
    out.exit
}

fn run(args: &[String]) -> Result<i32, String> {
    let Some(command) = args.first() else {
        return Err(USAGE.to_string());
    };
    let flags = parse_flags(&args[1..])?;
    match command.as_str() {
        "synth" => {
            let [system_path] = flags.positional.as_slice() else {
                return Err(format!("synth takes one system file\n{USAGE}"));
            };
            let system_text = read(system_path)?;
            let mut params = SynthParams::default();
            if let Some(kmax) = flags.get_u32("kmax")? {
                params.k_max = kmax.max(1);
            }
            if let Some(delta) = flags.get_u32("delta")? {
                params.delta = PrecP::new(delta.max(1));
                params.sdp_tol = 2f64.powi(-(delta.min(36) as i32)).max(1e-11);
            }
            if let Some(dc) = flags.get_u32("delta-c")? {
                params.delta_c = PrecP::new(dc.max(1));
            }
            params.eps = flags.get_rational("eps")?;
            params.strict_shift = flags.get_rational("strict-shift")?;

            if let Some(dump) = flags.get("dump-sdpa") {
                dump_sdpa(&system_text, dump)?;
            }
            let out = cli::cmd_synth(&system_text, &params);
            let code = emit(&out);
            if let Some(cert) = &out.certificate {
                let path = flags
                    .get("output")
                    .map(PathBuf::from)
                    .unwrap_or_else(|| default_cert_path(system_path));
                std::fs::write(&path, cert)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                println!("certificate written to {}", path.display());
            }
            Ok(code)
        }
        "check" => {
            let [system_path, cert_path] = flags.positional.as_slice() else {
                return Err(format!(
                    "check takes a system file and a certificate\n{USAGE}"
                ));
            };
            let required = flags
                .get_rational("strict-shift")?
                .unwrap_or_else(Rational::zero);
            let out = cli::cmd_check(&read(system_path)?, &read(cert_path)?, &required);
            Ok(emit(&out))
        }
        "kernel" => {
            let [system_path, cert_path] = flags.positional.as_slice() else {
                return Err(format!(
                    "kernel takes a system file and a certificate\n{USAGE}"
                ));
            };
            let mut plan = SamplingPlan::default();
            if let Some(bits) = flags.get_u32("plan-resolution")? {
                plan.grid_bits = bits.clamp(2, 12);
            }
            if let Some(points) = flags.get_u32("plan-points")? {
                plan.random_points = points as usize;
            }
            if let Some(seed) = flags.get_u32("seed")? {
                plan.seed = seed as u64;
            }
            let out = cli::cmd_kernel(&read(system_path)?, &read(cert_path)?, &plan);
            Ok(emit(&out))
        }
        other => Err(format!("unknown command `{other}`\n{USAGE}")),
    }
}

fn default_cert_path(system_path: &str) -> PathBuf {
    Path::new(system_path).with_extension("lyapcert")
}

/// Writes the degree-2 coupled feasibility problem in sparse SDPA format for
/// cross-checking against external solvers.
fn dump_sdpa(system_text: &str, path: &str) -> Result<(), String> {
    let parsed = cli::parse_system(system_text).map_err(|e| e.to_string())?;
    let setup = lyapcert::lyapunov::setup_sdp_k(&parsed.system, 1).map_err(|e| e.to_string())?;
    std::fs::write(path, to_sdpa_sparse(&setup.problem))
        .map_err(|e| format!("cannot write {path}: {e}"))?;
    eprintln!("SDPA dump (k = 1) written to {path}");
    Ok(())
}
