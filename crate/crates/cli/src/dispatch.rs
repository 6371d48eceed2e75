//! Maps parsed commands onto the library verifiers and streams reports
//! as CSV or JSON through a single writer.

use std::io::Write;

use copoisson::funcspace::{centered_bump, parse_function_spec, Parity};
use copoisson::gallery::{self, GalleryFamily, GalleryParams};
use copoisson::mellin;
use copoisson::quad;
use copoisson::report::{fmt17, IdentityReport};
use copoisson::sonine::{self, SonineSign};
use copoisson::sums;

use crate::args::{Command, CopoissonCmd, GalleryCmd, MuntzCmd, OutputFormat, SonineCmd};
use crate::config::Overrides;

pub struct RunOutcome {
    pub exit_code: i32,
    pub first_failure: Option<String>,
}

fn emit_reports(
    reports: &[IdentityReport],
    format: OutputFormat,
    out: &mut dyn Write,
) -> std::io::Result<RunOutcome> {
    let mut first_failure = None;
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{}", IdentityReport::csv_header())?;
            for r in reports {
                writeln!(out, "{}", r.csv_row())?;
                if !r.pass && first_failure.is_none() {
                    first_failure = Some(format!("{} {}", r.kind, r.params));
                }
            }
        }
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = reports
                .iter()
                .map(|r| {
                    if !r.pass && first_failure.is_none() {
                        first_failure = Some(format!("{} {}", r.kind, r.params));
                    }
                    serde_json::json!({
                        "kind": r.kind,
                        "params": r.params,
                        "lhs_re": r.lhs.re,
                        "lhs_im": r.lhs.im,
                        "rhs_re": r.rhs.re,
                        "rhs_im": r.rhs.im,
                        "defect": r.defect,
                        "tol": r.tolerance,
                        "pass": r.pass,
                    })
                })
                .collect();
            writeln!(out, "{}", serde_json::Value::Array(rows))?;
        }
    }
    Ok(RunOutcome {
        exit_code: if first_failure.is_none() { 0 } else { 1 },
        first_failure,
    })
}

pub fn run(
    command: Command,
    format: OutputFormat,
    overrides: &Overrides,
    out: &mut dyn Write,
) -> Result<RunOutcome, String> {
    let tol_default = overrides.quad_tol.unwrap_or(1e-6);
    let abel_ladder = overrides
        .abel_ladder
        .clone()
        .unwrap_or_else(quad::default_abel_ladder);

    let reports: Vec<IdentityReport> = match command {
        Command::Copoisson { sub } => match sub {
            CopoissonCmd::Check {
                f,
                xi,
                lambda,
                x_max,
                tol,
            } => {
                let f = parse_function_spec(&f).map_err(|e| e.to_string())?;
                let tol = tol.unwrap_or(tol_default.max(1e-3));
                let x_max = x_max.unwrap_or_else(|| {
                    xi.iter().fold(0.0f64, |m, x| m.max(*x)) + 1.0
                });
                let mut acc = Vec::new();
                for &x in &xi {
                    acc.push(
                        copoisson::copoisson::truncated_transform_vs_dirichlet(
                            &f, x, lambda, x_max, tol,
                        )
                        .map_err(|e| e.to_string())?,
                    );
                }
                acc
            }
            CopoissonCmd::Dirichlet { f, xi, delta, tol } => {
                let f = parse_function_spec(&f).map_err(|e| e.to_string())?;
                let tol = tol.unwrap_or(tol_default);
                let ladder = copoisson::copoisson::default_dirichlet_ladder();
                let v = copoisson::copoisson::dirichlet_point_value(&f, xi, delta, &ladder, tol)
                    .map_err(|e| e.to_string())?;
                let k = sums::eval_k_sum(&f, xi).map_err(|e| e.to_string())?;
                vec![IdentityReport::new_real(
                    "dirichlet_point",
                    serde_json::json!({"f": f.name(), "xi": xi, "delta": delta}),
                    v,
                    k,
                    tol,
                )]
            }
            CopoissonCmd::Kahane { b, y, x, tol } => {
                let f = centered_bump(b);
                let g = centered_bump(b);
                let tol = tol.unwrap_or(1e-8);
                let a = 0.5 - b;
                let xs: Vec<f64> = if x.is_empty() {
                    (-4..=4).map(|k| k as f64 * a / 5.0).collect()
                } else {
                    x
                };
                let ys = if y.is_empty() {
                    vec![0.1, 0.7, 0.95, 1.1, 2.05]
                } else {
                    y
                };
                copoisson::copoisson::kahane_pair(&f, &g, &xs, &ys, tol)
                    .map_err(|e| e.to_string())?
            }
            CopoissonCmd::Duffin { f, y, tol } => {
                let f = parse_function_spec(&f).map_err(|e| e.to_string())?;
                let f_odd = f.with_parity(Parity::Odd);
                let tol = tol.unwrap_or(tol_default);
                let ys = if y.is_empty() { vec![0.4, 0.9] } else { y };
                copoisson::copoisson::duffin_pair(&f_odd, &ys, tol).map_err(|e| e.to_string())?
            }
        },
        Command::Muntz { sub } => match sub {
            MuntzCmd::Check { f, sigma, tau, tol } => {
                let f = parse_function_spec(&f).map_err(|e| e.to_string())?;
                let tol = tol.unwrap_or(tol_default);
                mellin::muntz_identity(&f, sigma, &tau, tol).map_err(|e| e.to_string())?
            }
            MuntzCmd::Comuntz { f, sigma, tau, tol } => {
                let f = parse_function_spec(&f).map_err(|e| e.to_string())?;
                let tol = tol.unwrap_or(tol_default);
                mellin::comuntz_identity(&f, sigma, &tau, tol).map_err(|e| e.to_string())?
            }
            MuntzCmd::Vp { shift, tol } => {
                let pair = mellin::gaussian_pair(shift);
                let tol = tol.unwrap_or(1e-5);
                vec![
                    mellin::vp_zeta_pairing(&pair, &mellin::default_vp_ladder(), tol)
                        .map_err(|e| e.to_string())?,
                ]
            }
            MuntzCmd::L2 { f, phi, tol } => {
                let f = parse_function_spec(&f).map_err(|e| e.to_string())?;
                let phi = parse_function_spec(&phi).map_err(|e| e.to_string())?;
                let tol = tol.unwrap_or(tol_default);
                vec![
                    mellin::l2_muntz_d(&f, &phi, tol).map_err(|e| e.to_string())?,
                    mellin::l2_muntz_symmetry(&f, &phi, tol.max(1e-5))
                        .map_err(|e| e.to_string())?,
                ]
            }
        },
        Command::Zeta { s } => {
            let z = match overrides.series_nmax {
                Some(n) => mellin::zeta_euler_maclaurin(s, n),
                None => mellin::zeta(s).map_err(|e| e.to_string())?,
            };
            match format {
                OutputFormat::Csv => {
                    writeln!(out, "s_re,s_im,re,im,err,n_used").map_err(|e| e.to_string())?;
                    writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        fmt17(s.re),
                        fmt17(s.im),
                        fmt17(z.value.re),
                        fmt17(z.value.im),
                        fmt17(z.err_estimate),
                        z.n_used
                    )
                    .map_err(|e| e.to_string())?;
                }
                OutputFormat::Json => {
                    writeln!(
                        out,
                        "{}",
                        serde_json::json!({
                            "s_re": s.re, "s_im": s.im,
                            "re": z.value.re, "im": z.value.im,
                            "err": z.err_estimate, "n_used": z.n_used,
                        })
                    )
                    .map_err(|e| e.to_string())?;
                }
            }
            return Ok(RunOutcome {
                exit_code: 0,
                first_failure: None,
            });
        }
        Command::Chi { s } => {
            let c = mellin::chi(s);
            let cs = mellin::chi_sin(s);
            match format {
                OutputFormat::Csv => {
                    writeln!(out, "which,s_re,s_im,re,im").map_err(|e| e.to_string())?;
                    writeln!(
                        out,
                        "chi,{},{},{},{}",
                        fmt17(s.re),
                        fmt17(s.im),
                        fmt17(c.re),
                        fmt17(c.im)
                    )
                    .map_err(|e| e.to_string())?;
                    writeln!(
                        out,
                        "chi_sin,{},{},{},{}",
                        fmt17(s.re),
                        fmt17(s.im),
                        fmt17(cs.re),
                        fmt17(cs.im)
                    )
                    .map_err(|e| e.to_string())?;
                }
                OutputFormat::Json => {
                    writeln!(
                        out,
                        "{}",
                        serde_json::json!({
                            "s_re": s.re, "s_im": s.im,
                            "chi": {"re": c.re, "im": c.im},
                            "chi_sin": {"re": cs.re, "im": cs.im},
                        })
                    )
                    .map_err(|e| e.to_string())?;
                }
            }
            return Ok(RunOutcome {
                exit_code: 0,
                first_failure: None,
            });
        }
        Command::Sonine { sub } => match sub {
            SonineCmd::Solve {
                a,
                sign,
                nodes,
                zeros_upto,
            } => {
                let sign = match sign.as_str() {
                    "plus" => SonineSign::Plus,
                    "minus" => SonineSign::Minus,
                    other => return Err(format!("sign must be plus or minus, got {other}")),
                };
                let sol = sonine::solve_phi(a, sign, nodes).map_err(|e| e.to_string())?;
                let list = match zeros_upto {
                    Some(t_max) => {
                        let dt = overrides.zero_grid_dt.unwrap_or(0.05);
                        sonine::critical_line_zeros(&sol, t_max, dt).map_err(|e| e.to_string())?
                    }
                    None => sonine::ZeroList {
                        zeros: Vec::new(),
                        t_max: 0.0,
                        count: 0,
                        asymptotic_ratio: 0.0,
                    },
                };
                writeln!(out, "{}", list.to_json(&sol)).map_err(|e| e.to_string())?;
                return Ok(RunOutcome {
                    exit_code: 0,
                    first_failure: None,
                });
            }
        },
        Command::Gallery { sub } => match sub {
            GalleryCmd::Verify { name, a, n, y, tol } => {
                let family = GalleryFamily::parse(&name).map_err(|e| e.to_string())?;
                let params = match (family, a, n) {
                    (GalleryFamily::Qn, _, Some(n)) => GalleryParams::N(n),
                    (GalleryFamily::Qn, _, None) => {
                        return Err("qn needs --n".into());
                    }
                    (_, Some(a), _) => GalleryParams::A(a),
                    (_, None, _) => return Err(format!("{name} needs --a")),
                };
                let tol = tol.unwrap_or(5e-3);
                let gf = gallery::GalleryFunction::new(family, params, 8.0)
                    .map_err(|e| e.to_string())?;
                let gap = gf.gap_radius();
                let grid: Vec<f64> = (1..=10).map(|k| gap * k as f64 / 11.0).collect();
                let mut acc =
                    gallery::verify_support(family, params, &grid).map_err(|e| e.to_string())?;
                if family != GalleryFamily::Qn {
                    let ys = if y.is_empty() {
                        vec![gap * 2.2, gap * 3.1, gap * 4.7]
                    } else {
                        y
                    };
                    acc.extend(
                        gallery::verify_reciprocity(family, params, &ys, tol)
                            .map_err(|e| e.to_string())?,
                    );
                }
                acc
            }
        },
        Command::Fracpair { v, tol } => {
            let tol = tol.unwrap_or(1e-3);
            let vs = if v.is_empty() {
                vec![0.3, 0.7, 1.5, 2.4]
            } else {
                v
            };
            mellin::frac_part_pair_with_ladder(&vs, &abel_ladder, tol).map_err(|e| e.to_string())?
        }
    };
    emit_reports(&reports, format, out).map_err(|e| e.to_string())
}
