use std::time::Instant;

use num_complex::Complex64;
use preimage_core::classify::{
    build_chain, classify_invariant, classify_same_target, classify_shared_preimage, construct_k3, find_mu, julia_equal, theorem4_suite, SharedPreimage,
    Validation,
};
use preimage_core::decompose::{full_decomposition, gcrc};
use preimage_core::json::{map_to_json, poly_entry};
use preimage_core::minimax::{least_deviation, minimax_sample, monic_least_deviation, verify_thm21, verify_thm22, verify_thm23, VERIFY_TOL};
use preimage_core::parse::{parse, parse_approx};
use preimage_core::sets::{julia_sample, symmetry_group, CompactSet, JuliaParams};
use preimage_core::{ApproxPoly, Error, Field, GaussRat, Poly, Result};
use serde_json::{json, Value};

use crate::report::{error_code, error_result, error_validations, Outcome, Report};
use crate::setlit::{echo, parse_set};
use crate::{Cli, Cmd, Format, Opts, Verify};

/// Points per circle or segment when `--samples` is absent.
const DEFAULT_DENSITY: usize = 128;

fn density(o: &Opts) -> usize {
    o.samples.unwrap_or(DEFAULT_DENSITY)
}

fn julia_params(o: &Opts) -> JuliaParams {
    JuliaParams { seed: o.seed, ..o.samples.map_or_else(JuliaParams::default, JuliaParams::with_samples) }
}

pub fn command_name(cmd: &Cmd) -> String {
    match cmd {
        Cmd::Decompose { .. } => "decompose".into(),
        Cmd::Gcrc { .. } => "gcrc".into(),
        Cmd::Classify { .. } => "classify".into(),
        Cmd::ClassifyTarget { .. } => "classify-target".into(),
        Cmd::ClassifyInvariant { .. } => "classify-invariant".into(),
        Cmd::FindMu { .. } => "find-mu".into(),
        Cmd::JuliaCompare { .. } => "julia-compare".into(),
        Cmd::Symmetry { .. } => "symmetry".into(),
        Cmd::Minimax { .. } => "minimax".into(),
        Cmd::Verify { which: Verify::Thm21 { .. } } => "verify thm21".into(),
        Cmd::Verify { which: Verify::Thm22 { .. } } => "verify thm22".into(),
        Cmd::Verify { which: Verify::Thm23 { .. } } => "verify thm23".into(),
        Cmd::Chain { .. } => "chain".into(),
    }
}

/// Runs the command and returns the text for standard output with the exit code.
pub fn dispatch(cli: &Cli) -> (String, u8) {
    let start = Instant::now();
    let command = command_name(&cli.cmd);
    if cli.opts.format == Format::Csv {
        return match csv(cli) {
            Ok(text) => (text, 0),
            Err(e) => {
                eprintln!("preimage {command}: {e}");
                (String::new(), error_code(&e))
            }
        };
    }
    let attempt = if cli.opts.approx { execute::<Complex64>(cli, "approximate") } else { execute::<GaussRat>(cli, "exact") };
    let attempt = match attempt {
        Err(Error::Irrational(why)) => {
            eprintln!("preimage {command}: {why}; retrying in the approximate flavor");
            execute::<Complex64>(cli, "approximate").map(|mut o| {
                o.input("retried_after", json!(why));
                o
            })
        }
        other => other,
    };
    let (inputs, result, validations, code) = match attempt {
        Ok(o) => {
            let code = o.exit_code();
            (Value::Object(o.inputs), o.result, o.validations, code)
        }
        Err(e) => {
            eprintln!("preimage {command}: {e}");
            (json!({}), error_result(&e), error_validations(&e), error_code(&e))
        }
    };
    let timing = (!cli.opts.no_timing).then(|| start.elapsed().as_secs_f64() * 1e3);
    let report = Report { schema_version: crate::report::SCHEMA_VERSION, command, inputs, result, validations, timing };
    (report.render(), code)
}

fn poly_input<F: Field>(o: &mut Outcome, key: &str, text: &str) -> Result<Poly<F>> {
    let p = parse::<F>(text)?;
    o.input(key, poly_entry(&p));
    Ok(p)
}

fn set_input<F: Field>(o: &mut Outcome, key: &str, literal: &str, opts: &Opts) -> Result<CompactSet> {
    let s = parse_set::<F>(literal, &julia_params(opts), opts.tol)?;
    o.input(key, echo(literal, &s));
    Ok(s)
}

/// Nested validations, prefixed with where they came from.
fn gather<'a>(prefix: &'a str, vs: &'a [Validation]) -> impl Iterator<Item = Validation> + 'a {
    vs.iter().map(move |v| Validation::new(format!("{prefix}{}", v.name), v.passed, v.residual))
}

fn execute<F: Field>(cli: &Cli, flavor: &str) -> Result<Outcome> {
    let opts = &cli.opts;
    let mut o = Outcome::new();
    o.input("flavor", json!(flavor));
    match &cli.cmd {
        Cmd::Decompose { poly } => {
            let f = poly_input::<F>(&mut o, "poly", poly)?;
            let d = full_decomposition(&f)?;
            o.validations.push(Validation::polys("outer ∘ chain ∘ inner = poly", &d.recompose(), &f));
            o.result = json!({
                "chain": d.chain.iter().map(poly_entry).collect::<Vec<_>>(),
                "degrees": d.degrees(),
                "outer": map_to_json(&d.outer),
                "inner": map_to_json(&d.inner),
            });
        }
        Cmd::Gcrc { f1, f2 } => {
            let f1 = poly_input::<F>(&mut o, "f1", f1)?;
            let f2 = poly_input::<F>(&mut o, "f2", f2)?;
            let g = gcrc(&f1, &f2)?;
            o.validations.push(Validation::polys("A ∘ W = f1", &g.a.compose(&g.w), &f1));
            o.validations.push(Validation::polys("B ∘ W = f2", &g.b.compose(&g.w), &f2));
            o.result = json!({ "W": poly_entry(&g.w), "A": poly_entry(&g.a), "B": poly_entry(&g.b), "deg_W": g.w.deg() });
        }
        Cmd::Classify { f1, f2, k1, k2 } => {
            let f1 = poly_input::<F>(&mut o, "f1", f1)?;
            let f2 = poly_input::<F>(&mut o, "f2", f2)?;
            let sets = match (k1, k2) {
                (Some(a), Some(b)) => Some((set_input::<F>(&mut o, "K1", a, opts)?, set_input::<F>(&mut o, "K2", b, opts)?)),
                _ => None,
            };
            match classify_shared_preimage(&f1, &f2)? {
                SharedPreimage::NoSolution { residual } => {
                    o.result = json!({ "witness": null, "residual": residual });
                }
                SharedPreimage::Witness(w) => {
                    let mut w = *w;
                    if let Some((k1, k2)) = sets {
                        construct_k3(&mut w, &k1, &k2, opts.tol)?;
                    }
                    o.validations.extend(gather("", &w.validations));
                    o.result = json!({ "witness": w.to_json() });
                }
            }
        }
        Cmd::ClassifyTarget { f1, f2, set } => {
            let f1 = poly_input::<F>(&mut o, "f1", f1)?;
            let f2 = poly_input::<F>(&mut o, "f2", f2)?;
            let t = set_input::<F>(&mut o, "T", set, opts)?;
            let r = classify_same_target(&f1, &f2, &t, opts.tol)?;
            o.validations.extend(gather("witness: ", &r.witness.validations));
            o.validations.extend(gather("", &r.validations));
            o.result = r.to_json();
        }
        Cmd::ClassifyInvariant { f1, f2, set } => {
            let f1 = poly_input::<F>(&mut o, "f1", f1)?;
            let f2 = poly_input::<F>(&mut o, "f2", f2)?;
            let t = set_input::<F>(&mut o, "T", set, opts)?;
            let r = classify_invariant(&f1, &f2, &t, opts.tol)?;
            if let Some(g) = &r.generator {
                o.validations.extend(gather("generator: ", &g.validations));
            }
            o.validations.extend(gather("", &r.validations));
            o.result = r.to_json();
        }
        Cmd::FindMu { f1, f2, t1, t2, threshold } => {
            let f1 = poly_input::<F>(&mut o, "f1", f1)?;
            let f2 = poly_input::<F>(&mut o, "f2", f2)?;
            let mu = find_mu(&f1, &f2);
            if let Some(m) = &mu {
                o.validations.push(Validation::polys("f1∘f2 = μ∘f2∘f1", &f2.compose(&f1).apply_linear(m), &f1.compose(&f2)));
            }
            o.result = json!({ "mu": mu.as_ref().map(map_to_json), "mu_text": mu.as_ref().map(ToString::to_string) });
            if let (Some(a), Some(b)) = (t1, t2) {
                let t1 = set_input::<F>(&mut o, "T1", a, opts)?;
                let t2 = set_input::<F>(&mut o, "T2", b, opts)?;
                let params = julia_params(opts);
                o.input("julia", params.to_json());
                let r = theorem4_suite(&f1, &f2, &t1, &t2, &params, *threshold, opts.tol)?;
                o.validations.extend(gather("", &r.validations));
                o.result["theorem4"] = r.to_json();
            }
        }
        Cmd::JuliaCompare { f1, f2, threshold } => {
            let f1 = poly_input::<F>(&mut o, "f1", f1)?;
            let f2 = poly_input::<F>(&mut o, "f2", f2)?;
            let params = julia_params(opts);
            o.input("julia", params.to_json());
            o.input("threshold", json!(threshold));
            let (equal, distance) = julia_equal(&f1, &f2, &params, *threshold)?;
            o.result = json!({ "julia_equal": equal, "hausdorff": distance });
        }
        Cmd::Symmetry { set } => {
            let s = set_input::<F>(&mut o, "set", set, opts)?;
            o.result = symmetry_group(&s)?.to_json();
        }
        Cmd::Minimax { set, degree, phi, m } => {
            let s = set_input::<F>(&mut o, "set", set, opts)?;
            let pts = minimax_sample(&s, density(opts));
            o.input("sample_points", json!(pts.len()));
            let res = match (degree, phi, m) {
                (Some(n), _, _) => {
                    o.input("degree", json!(n));
                    monic_least_deviation(&pts, *n)?
                }
                (None, Some(phi), Some(m)) => {
                    let phi = poly_input::<Complex64>(&mut o, "phi", phi)?;
                    o.input("m", json!(m));
                    let values: Vec<Complex64> = pts.iter().map(|&z| phi.eval_complex(z)).collect();
                    least_deviation(&pts, &values, *m)?
                }
                _ => return Err(Error::InvalidArgument("minimax needs --degree, or --phi with --m".into())),
            };
            o.converged = res.converged;
            o.result = res.to_json();
        }
        Cmd::Verify { which } => {
            let report = match which {
                Verify::Thm21 { p, set } => {
                    let p = poly_input::<F>(&mut o, "P", p)?;
                    let r = set_input::<F>(&mut o, "R", set, opts)?;
                    verify_thm21(&p, &r, density(opts))?
                }
                Verify::Thm22 { p, set, m } => {
                    let p = poly_input::<F>(&mut o, "P", p)?;
                    let r = set_input::<F>(&mut o, "R", set, opts)?;
                    o.input("m", json!(m));
                    verify_thm22(&p, &r, *m, density(opts))?
                }
                Verify::Thm23 { p, set, phi, m } => {
                    let p = poly_input::<F>(&mut o, "P", p)?;
                    let r = set_input::<F>(&mut o, "R", set, opts)?;
                    let phi: ApproxPoly = parse_approx(phi)?;
                    o.input("phi", poly_entry(&phi));
                    o.input("m", json!(m));
                    verify_thm23(&p, &r, |z| phi.eval_complex(z), *m, density(opts))?
                }
            };
            o.validations.push(Validation::new("hypothesis", report.hypothesis_ok, 0.0));
            o.validations.push(Validation::new("coefficient gap", report.max_coeff_gap <= VERIFY_TOL, report.max_coeff_gap));
            o.validations.push(Validation::new("deviation gap", report.deviation_gap <= VERIFY_TOL, report.deviation_gap));
            if !report.passed {
                o.validations.push(Validation::new(format!("{} passed", report.theorem), false, report.max_coeff_gap.max(report.deviation_gap)));
            }
            o.result = report.to_json();
        }
        Cmd::Chain { f1, f2, k1, k2 } => {
            let f1 = poly_input::<F>(&mut o, "f1", f1)?;
            let f2 = poly_input::<F>(&mut o, "f2", f2)?;
            let k1 = set_input::<F>(&mut o, "K1", k1, opts)?;
            let k2 = set_input::<F>(&mut o, "K2", k2, opts)?;
            o.input("depth", json!(opts.depth));
            let r = build_chain(&f1, &f2, &k1, &k2, opts.depth, opts.tol)?;
            for level in &r.levels {
                o.validations.extend(gather(&format!("level {}: ", level.level), &level.validations));
            }
            o.result = r.to_json();
        }
    }
    Ok(o)
}

fn rows(out: &mut String, cloud: &str, pts: &[Complex64]) {
    use std::fmt::Write;
    for z in pts {
        let _ = writeln!(out, "{cloud},{:?},{:?}", z.re, z.im);
    }
}

/// `--format csv`: the point clouds behind julia-compare and symmetry.
fn csv(cli: &Cli) -> Result<String> {
    let opts = &cli.opts;
    let mut out = String::from("cloud,re,im\n");
    match &cli.cmd {
        Cmd::JuliaCompare { f1, f2, .. } => {
            let params = julia_params(opts);
            for (name, text) in [("f1", f1), ("f2", f2)] {
                let f: ApproxPoly = parse_approx(text)?;
                rows(&mut out, name, &julia_sample(&f, &params)?.samples);
            }
        }
        Cmd::Symmetry { set } => {
            let s = parse_set::<Complex64>(set, &julia_params(opts), opts.tol)?;
            rows(&mut out, "set", &s.sample(density(opts)));
        }
        other => {
            return Err(Error::InvalidArgument(format!("--format csv applies to julia-compare and symmetry, not {}", command_name(other))));
        }
    }
    Ok(out)
}
