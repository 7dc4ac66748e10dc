//! Quick invariant suite run by the `verify` command.

use annulus_core::linalg::CMat;
use annulus_core::pick::psd_check;
use annulus_core::*;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::{Outcome, Params};

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn unit_box(rng: &mut ChaCha8Rng) -> C64 {
    Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_laurent(rng: &mut ChaCha8Rng, lo: i32, hi: i32) -> Laurent {
    Laurent::from_terms((lo..=hi).map(|n| (n, unit_box(rng))))
}

fn annulus_point(rng: &mut ChaCha8Rng, r: f64) -> C64 {
    Complex::from_polar(
        rng.gen_range(r + 1e-3..1.0 - 1e-3),
        rng.gen_range(0.0..std::f64::consts::TAU),
    )
}

fn orthogonality() -> Check {
    let mut worst = 0.0f64;
    for r in [0.3, 0.5, 0.8] {
        let ctx = Context::new(r).expect("valid radius");
        for n in -30..=30 {
            for m in -30..=30 {
                let a = Laurent::monomial(n, Complex::new(1.0, 0.0));
                let b = Laurent::monomial(m, Complex::new(1.0, 0.0));
                let ip = a
                    .inner_product(&b, &ctx, Space::Annulus)
                    .expect("annulus space has no precondition");
                let expect = if n == m { ctx.weight(n) } else { 0.0 };
                worst = worst.max((ip.re - expect).abs() / expect.max(1.0) + ip.im.abs());
            }
        }
    }
    Check {
        name: "orthogonality of monomials",
        pass: worst == 0.0,
        detail: format!("max deviation {worst:e}"),
    }
}

fn homomorphism(ctx: &Context, rng: &mut ChaCha8Rng) -> Check {
    let f = random_laurent(rng, -4, 4);
    let g = random_laurent(rng, -3, 5);
    let fg = &f * &g;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let z = annulus_point(rng, ctx.r);
        let (a, b, c) = (fg.eval_at(z), f.eval_at(z), g.eval_at(z));
        if let (Ok(a), Ok(b), Ok(c)) = (a, b, c) {
            worst = worst.max((a - b * c).norm() / (b * c).norm().max(1.0));
        }
    }
    Check {
        name: "pointwise multiplication",
        pass: worst <= ctx.tol_numeric * 1e3,
        detail: format!("max relative error {worst:e}"),
    }
}

fn reproducing(ctx: &Context, rng: &mut ChaCha8Rng) -> Check {
    let mut ok = true;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let f = random_laurent(rng, -5, 5);
        let lambda = annulus_point(rng, ctx.r);
        match f.reproducing_check(lambda, ctx) {
            Ok(c) => {
                ok &= c.within_bound();
                worst = worst.max(c.error);
            }
            Err(_) => ok = false,
        }
    }
    Check {
        name: "reproducing kernel identity",
        pass: ok,
        detail: format!("max error {worst:e}"),
    }
}

fn reflection(ctx: &Context, rng: &mut ChaCha8Rng) -> Check {
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let f = random_laurent(rng, -6, 6);
        let g = f.reflect_to_disk0(ctx);
        worst = worst.max((g.norm_sq(ctx) - f.norm_sq(ctx)).abs() / f.norm_sq(ctx));
        worst = worst.max((&g.reflect_to_disk0(ctx) - &f).max_abs_coeff());
    }
    Check {
        name: "reflection isometric involution",
        pass: worst <= 1e-12,
        detail: format!("max defect {worst:e}"),
    }
}

fn subspace_norms(ctx: &Context, rng: &mut ChaCha8Rng) -> Check {
    let f = random_laurent(rng, 0, 6);
    let g = random_laurent(rng, -6, 0);
    let a = (f.norm_in(ctx, Space::DiskHardy).unwrap_or(f64::NAN) - f.norm(ctx)).abs();
    let b = (g.norm_in(ctx, Space::Disk0Hardy).unwrap_or(f64::NAN) - g.norm(ctx)).abs();
    let worst = a.max(b);
    Check {
        name: "one-sided norms agree",
        pass: worst <= 1e-12,
        detail: format!("max gap {worst:e}"),
    }
}

fn psd_examples() -> Check {
    let id = psd_check(&CMat::<f64>::identity(3), 1e-10);
    let one = Complex::new(1.0, 0.0);
    let two = Complex::new(2.0, 0.0);
    let bad = psd_check(&CMat::from_rows(&[vec![one, two], vec![two, one]]), 1e-10);
    let pass = matches!(id, Ok(r) if r.psd)
        && matches!(bad, Ok(r) if !r.psd && (r.min_eigenvalue + 1.0f64).abs() < 1e-12);
    Check {
        name: "PSD test on fixed matrices",
        pass,
        detail: String::new(),
    }
}

fn moments(ctx: &Context) -> Check {
    let f = Laurent::from_real(0, &[-0.5, 1.0]);
    let g = Laurent::from_real(0, &[1.0, -0.5]);
    let z = Laurent::monomial(3, Complex::new(1.0, 0.0));
    let pass = moments_equal(&f, &g, ctx)
        && moments_equal(&z, &Laurent::one(), ctx)
        && !moments_equal(&f, &z, ctx);
    Check {
        name: "moment equality",
        pass,
        detail: String::new(),
    }
}

fn factorization(ctx: &Context, rng: &mut ChaCha8Rng) -> Check {
    let mut worst = 0.0f64;
    let mut ok = true;
    for _ in 0..10 {
        let p = random_laurent(rng, 0, 5);
        match poly_inner_outer(&p, ctx).and_then(|fac| {
            let fr = fejer_riesz_outer(&autocorrelation(&p), ctx)?;
            let u = fac.outer.coeff(0).norm() / fac.outer.coeff(0);
            Ok(fac
                .reassembly_error(&p)?
                .max((&fr - &fac.outer.scale(u)).max_abs_coeff()))
        }) {
            Ok(e) => worst = worst.max(e),
            Err(_) => ok = false,
        }
    }
    Check {
        name: "inner-outer reassembly and spectral factor",
        pass: ok && worst <= 1e-7,
        detail: format!("max error {worst:e}"),
    }
}

fn isometry(ctx: &Context, rng: &mut ChaCha8Rng) -> Check {
    let mut ok = true;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let f = random_laurent(rng, -3, 3);
        match da_isometry_check(&f, ctx, 60) {
            Ok(c) => {
                ok &= c.within_bound;
                worst = worst.max(c.gap - c.tail_bound);
            }
            Err(_) => ok = false,
        }
    }
    Check {
        name: "Drury-Arveson scaled isometry",
        pass: ok,
        detail: format!("max gap over tail {worst:e}"),
    }
}

fn kernel_identity(ctx: &Context, rng: &mut ChaCha8Rng) -> Check {
    let c = (1.0 - ctx.r * ctx.r) / (1.0 + ctx.r * ctx.r);
    let mut worst = 0.0f64;
    let mut ok = true;
    for _ in 0..20 {
        let (l, m) = (annulus_point(rng, ctx.r), annulus_point(rng, ctx.r));
        let res = (|| {
            let k = kernel_eval(KernelId::AnnulusPick, l.into(), m.into(), ctx)?;
            let (ul, um) = (embed_point(l, ctx)?, embed_point(m, ctx)?);
            let d = kernel_eval(
                KernelId::DruryArveson2,
                KernelPoint::Ball(ul),
                KernelPoint::Ball(um),
                ctx,
            )?;
            Ok::<_, Error>((k - d * c).norm() / k.norm())
        })();
        match res {
            Ok(e) => worst = worst.max(e),
            Err(_) => ok = false,
        }
    }
    Check {
        name: "kernel pulls back from the ball",
        pass: ok && worst <= 1e-12,
        detail: format!("max error {worst:e}"),
    }
}

pub(crate) fn run(p: &Params) -> Outcome {
    let ctx = &p.ctx;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let checks = vec![
        orthogonality(),
        homomorphism(ctx, &mut rng),
        reproducing(ctx, &mut rng),
        reflection(ctx, &mut rng),
        subspace_norms(ctx, &mut rng),
        psd_examples(),
        moments(ctx),
        factorization(ctx, &mut rng),
        isometry(ctx, &mut rng),
        kernel_identity(ctx, &mut rng),
    ];
    let all = checks.iter().all(|c| c.pass);
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} failed", c.name))
        .collect();
    let rows: Vec<_> = checks
        .iter()
        .map(|c| json!({ "name": c.name, "pass": c.pass, "detail": c.detail }))
        .collect();
    Outcome {
        results: json!({ "all_pass": all, "checks": rows }),
        certificates: Vec::new(),
        certified: all,
        warnings: failed,
    }
}
