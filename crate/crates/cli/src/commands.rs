use annulus_core::extremal::extremal_search;
use annulus_core::free_outer::{factor_with_restarts, is_subinner_on_grid, moment_match_residual};
use annulus_core::pick::mult_norm_bounds_rational;
use annulus_core::*;
use num_complex::Complex;
use serde::Serialize;
use serde_json::{json, Value};

use crate::inputs::Inputs;
use crate::{module, verify, CliError, Command, Outcome, Params};

pub const TABLE_LAMBDAS: [f64; 5] = [0.0, 0.25, 0.7, 1.0, 2.0];
const TABLE_DEGREE: usize = 40;
const CYCLIC_RESIDUAL: f64 = 1e-3;
const FOCK_DEGREE: usize = 8;

fn value<S: Serialize>(s: &S) -> Value {
    serde_json::to_value(s).expect("core result types serialize to JSON")
}

fn cx_json(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn certified(results: Value) -> Outcome {
    Outcome {
        results,
        certificates: Vec::new(),
        certified: true,
        warnings: Vec::new(),
    }
}

fn search_window(f: &Laurent) -> usize {
    let reach = f.support().map_or(0, |(lo, hi)| {
        lo.unsigned_abs().max(hi.unsigned_abs()) as usize
    });
    f.span().max(reach)
}

pub(crate) fn dispatch(
    cmd: Command,
    inp: &Inputs,
    p: &Params,
) -> std::result::Result<Outcome, CliError> {
    let ctx = &p.ctx;
    match cmd {
        Command::Norm => {
            let f = inp.need_f("norm")?;
            let norm_sq = f.norm_sq(ctx);
            let mut res = json!({ "f": value(f), "norm_sq": norm_sq, "norm": norm_sq.sqrt() });
            if f.is_disk_analytic() {
                res["norm_disk"] =
                    json!(f.norm_in(ctx, Space::DiskHardy).map_err(module("norm"))?);
            }
            if f.is_disk0_analytic() {
                res["norm_disk0"] =
                    json!(f.norm_in(ctx, Space::Disk0Hardy).map_err(module("norm"))?);
            }
            Ok(certified(res))
        }
        Command::Eval => {
            let f = inp.need_f("eval")?;
            let z = inp
                .z
                .ok_or_else(|| CliError::Validation("eval needs input z".into()))?;
            let v = f.eval_at(z).map_err(module("eval"))?;
            Ok(certified(
                json!({ "f": value(f), "z": cx_json(z), "value": cx_json(v) }),
            ))
        }
        Command::Kernel => {
            let id = inp.kernel.unwrap_or(KernelId::AnnulusPick);
            let l = inp
                .z
                .ok_or_else(|| CliError::Validation("kernel needs input z".into()))?;
            let m = inp.w.unwrap_or(l);
            let (a, b) = if id == KernelId::DruryArveson2 {
                let ul = embed_point(l, ctx).map_err(module("kernel"))?;
                let um = embed_point(m, ctx).map_err(module("kernel"))?;
                (KernelPoint::Ball(ul), KernelPoint::Ball(um))
            } else {
                (l.into(), m.into())
            };
            let v = kernel_eval(id, a, b, ctx).map_err(module("kernel"))?;
            Ok(certified(
                json!({ "kernel": value(&id), "z": cx_json(l), "w": cx_json(m), "value": cx_json(v) }),
            ))
        }
        Command::MultNorm => {
            let phi = match (&inp.phi, &inp.f) {
                (Some(phi), _) => phi.clone(),
                (None, Some(f)) => Rational::from(f.clone()),
                (None, None) => {
                    return Err(CliError::Validation(
                        "mult-norm needs input phi or f".into(),
                    ))
                }
            };
            let b = mult_norm_bounds_rational(&phi, ctx, p.grid).map_err(module("mult-norm"))?;
            let mut warnings = Vec::new();
            if !b.one_sided {
                warnings.push(
                    "two-sided multiplier: norm only bracketed by [Pick lower, √2·sup]".into(),
                );
            }
            Ok(Outcome {
                results: json!({
                    "phi": value(&phi),
                    "lower": b.lower,
                    "upper": b.upper,
                    "sup_norm": b.sup_norm,
                    "sup_radius": b.sup_radius,
                    "sup_theta": b.sup_theta,
                    "one_sided": b.one_sided,
                    "tol_psd": ctx.tol_psd,
                }),
                certificates: vec![value(&b.certificate)],
                certified: true,
                warnings,
            })
        }
        Command::MixedBound => {
            let f = inp.f.clone().unwrap_or_default();
            let g = inp.g.clone().unwrap_or_default();
            let bound = mixed_multiplier_bound(&f, &g, ctx).map_err(module("mixed-bound"))?;
            let cert = mixed_pick_lower(&f, &g, ctx, p.grid).map_err(module("mixed-bound"))?;
            Ok(Outcome {
                results: json!({ "f": value(&f), "g": value(&g), "upper": bound, "lower": cert.t_star }),
                certificates: vec![value(&cert)],
                certified: true,
                warnings: Vec::new(),
            })
        }
        Command::FactorDisk => {
            let f = inp.need_f("factor-disk")?;
            let fac = if f.is_disk_analytic() {
                poly_inner_outer(f, ctx).map_err(module("factor-disk"))?
            } else {
                disk0_inner_outer(f, ctx).map_err(module("factor-disk"))?
            };
            let reassembly = fac.reassembly_error(f).map_err(module("factor-disk"))?;
            let defect = fac
                .boundary_modulus_defect(256)
                .map_err(module("factor-disk"))?;
            Ok(certified(json!({
                "f": value(f),
                "factorization": value(&fac),
                "reassembly_error": reassembly,
                "boundary_modulus_defect": defect,
                "tol": ctx.tol_exact,
            })))
        }
        Command::FactorAnnulus => {
            let f = inp.need_f("factor-annulus")?;
            let fac = factor_with_restarts(f, ctx, p.restarts).map_err(module("factor-annulus"))?;
            let mut warnings = Vec::new();
            if !fac.certified {
                warnings.push(
                    "two-sided input: factor found by heuristic search, not certified".into(),
                );
            }
            let certificates = fac
                .evidence
                .mult_norm_certificate
                .iter()
                .map(value)
                .collect();
            Ok(Outcome {
                results: value(&fac),
                certificates,
                certified: fac.certified,
                warnings,
            })
        }
        Command::FreeOuter => {
            let f = inp.need_f("free-outer")?;
            let t = is_free_outer(f, ctx).map_err(module("free-outer"))?;
            let decided = t.verdict != Verdict::Undecided;
            let warnings = if decided {
                Vec::new()
            } else {
                vec![t.reason.clone()]
            };
            Ok(Outcome {
                results: value(&t),
                certificates: Vec::new(),
                certified: decided,
                warnings,
            })
        }
        Command::Subinner => {
            let phi = match (&inp.phi, &inp.f) {
                (Some(phi), _) => phi.clone(),
                (None, Some(f)) => Rational::from(f.clone()),
                (None, None) => {
                    return Err(CliError::Validation("subinner needs input phi or f".into()))
                }
            };
            let h = inp.h.clone().unwrap_or_else(Laurent::one);
            let t = is_subinner_on_grid(&phi, &h, ctx, p.grid).map_err(module("subinner"))?;
            let decided = t.evidence.mult_norm_decided;
            let warnings = if decided {
                Vec::new()
            } else {
                vec!["multiplier norm bracket straddles 1; flag is not decided".into()]
            };
            Ok(Outcome {
                results: value(&t),
                certificates: Vec::new(),
                certified: decided,
                warnings,
            })
        }
        Command::MomentsEqual => {
            let f = inp.need_f("moments-equal")?;
            let g = inp
                .g
                .as_ref()
                .ok_or_else(|| CliError::Validation("moments-equal needs input g".into()))?;
            Ok(certified(json!({
                "f": value(f),
                "g": value(g),
                "equal": moments_equal(f, g, ctx),
                "residual": moment_match_residual(f, g, ctx),
                "tol": ctx.tol_exact * 1f64.max(f.norm_sq(ctx)).max(g.norm_sq(ctx)),
            })))
        }
        Command::Cyclicity => {
            let f = inp.need_f("cyclicity")?;
            let degree = p.degree.unwrap_or(TABLE_DEGREE);
            let curve = (1..=degree)
                .map(|d| cyclicity_residual(f, ctx, d).map(|c| c.residual))
                .collect::<Result<Vec<_>>>()
                .map_err(module("cyclicity"))?;
            let last = cyclicity_residual(f, ctx, degree).map_err(module("cyclicity"))?;
            Ok(certified(
                json!({ "f": value(f), "result": value(&last), "by_degree": curve }),
            ))
        }
        Command::Embed => {
            let f = inp.need_f("embed")?;
            Ok(certified(value(&da_embedding_coeffs(f, ctx, p.trunc_m))))
        }
        Command::IsometryCheck => {
            let f = inp.need_f("isometry-check")?;
            let chk = da_isometry_check(f, ctx, p.trunc_m).map_err(module("isometry-check"))?;
            let warnings = if chk.within_bound {
                Vec::new()
            } else {
                vec!["gap exceeds tail bound".into()]
            };
            Ok(Outcome {
                results: value(&chk),
                certificates: Vec::new(),
                certified: chk.within_bound,
                warnings,
            })
        }
        Command::FockResidual => {
            let f = inp.need_f("fock-residual")?;
            let emb = da_embedding_coeffs(f, ctx, p.trunc_m);
            let res = left_outer_residual(&emb, ctx, p.degree.unwrap_or(FOCK_DEGREE))
                .map_err(module("fock-residual"))?;
            Ok(Outcome {
                results: value(&res),
                certificates: Vec::new(),
                certified: true,
                warnings: vec![format!(
                    "embedding truncated at M = {}, tail bound {:e}",
                    p.trunc_m, emb.tail_bound
                )],
            })
        }
        Command::ExtremalSearch => {
            let f = inp.need_f("extremal-search")?;
            let n = p.degree.unwrap_or_else(|| search_window(f));
            let res = extremal_search(f, ctx, n, p.restarts).map_err(module("extremal-search"))?;
            Ok(Outcome {
                results: value(&res),
                certificates: Vec::new(),
                certified: false,
                warnings: vec!["heuristic search; value is a lower estimate of the optimum".into()],
            })
        }
        Command::ExampleTable => example_table(p),
        Command::Verify => Ok(verify::run(p)),
    }
}

/// Classification of `z − λ` for the standard list of `λ`.
fn example_table(p: &Params) -> std::result::Result<Outcome, CliError> {
    let ctx = &p.ctx;
    let degree = p.degree.unwrap_or(TABLE_DEGREE);
    let mut rows = Vec::new();
    let mut all_decided = true;
    for lambda in TABLE_LAMBDAS {
        let f = Laurent::from_real(0, &[-lambda, 1.0]);
        // f/‖f‖_∞ is the only candidate: subinner multipliers are contractive
        let sup = Rational::from(f.clone())
            .sup_norm(ctx)
            .map_err(module("example-table"))?
            .value;
        let phi = Rational::from(f.scale(Complex::new(1.0 / sup, 0.0)));
        let sub = is_subinner_on_grid(&phi, &Laurent::one(), ctx, p.grid)
            .map_err(module("example-table"))?;
        let fo = is_free_outer(&f, ctx).map_err(module("example-table"))?;
        let cyc = cyclicity_residual(&f, ctx, degree).map_err(module("example-table"))?;
        let (cyclic, cyclic_evidence) = if fo.flag() == Some(true) {
            (Some(true), "free outer functions are cyclic".to_string())
        } else if !cyc.interior_roots.is_empty() {
            (
                Some(false),
                format!("zero in the annulus; residual ≥ {:.6}", cyc.lower_bound),
            )
        } else if cyc.residual <= CYCLIC_RESIDUAL {
            (
                Some(true),
                format!(
                    "residual {:.3e} ≤ {CYCLIC_RESIDUAL:e} at degree {degree}",
                    cyc.residual
                ),
            )
        } else {
            (
                None,
                format!("residual {:.3e} at degree {degree}", cyc.residual),
            )
        };
        all_decided &= cyclic.is_some() && fo.flag().is_some() && sub.evidence.mult_norm_decided;
        let mut tags = Vec::new();
        if sub.flag {
            tags.push("subinner");
        }
        if fo.flag() == Some(true) {
            tags.push("free outer");
        }
        if cyclic == Some(true) {
            tags.push("cyclic");
        }
        let classification = if tags.is_empty() {
            "neither".to_string()
        } else {
            tags.join(" + ")
        };
        rows.push(json!({
            "lambda": lambda,
            "f": value(&f),
            "subinner": sub.flag,
            "free_outer": fo.flag(),
            "cyclic": cyclic,
            "classification": classification,
            "evidence": {
                "subinner": value(&sub.evidence),
                "free_outer_reason": fo.reason,
                "cyclic": cyclic_evidence,
                "cyclicity_residual": cyc.residual,
                "cyclicity_lower_bound": cyc.lower_bound,
                "degree": degree,
            },
        }));
    }
    Ok(Outcome {
        results: json!({ "r": ctx.r, "rows": rows }),
        certificates: Vec::new(),
        certified: all_decided,
        warnings: Vec::new(),
    })
}
