//! Supremum of `|φ|` over the closed annulus, evaluated on the two boundary
//! circles (maximum principle) by dense angular sampling and golden-section
//! refinement of the best local maxima.

use crate::scalar::{cis, from_usize, lit, modulus, real, Cx, Scalar};

const SAMPLES: usize = 2048;
const REFINE: usize = 8;

/// Location and value of a boundary maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryMax<T: Scalar> {
    pub value: T,
    pub radius: T,
    pub theta: T,
}

/// `max |g(ρ e^{iθ})|` over `ρ ∈ radii`, `θ ∈ [0, 2π)`.
pub fn circle_sup<T: Scalar, F: Fn(Cx<T>) -> Cx<T>>(g: F, radii: &[T]) -> BoundaryMax<T> {
    let mut best = BoundaryMax {
        value: T::neg_infinity(),
        radius: T::one(),
        theta: T::zero(),
    };
    let two_pi = T::PI() + T::PI();
    let step = two_pi / from_usize::<T>(SAMPLES);
    for &rho in radii {
        let at = |theta: T| modulus(g(cis(theta) * real(rho)));
        let vals: Vec<T> = (0..SAMPLES).map(|k| at(step * from_usize(k))).collect();
        let mut peaks: Vec<usize> = (0..SAMPLES)
            .filter(|&k| {
                let prev = vals[(k + SAMPLES - 1) % SAMPLES];
                let next = vals[(k + 1) % SAMPLES];
                vals[k] >= prev && vals[k] >= next
            })
            .collect();
        peaks.sort_by(|&a, &b| {
            vals[b]
                .partial_cmp(&vals[a])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        peaks.truncate(REFINE);
        if peaks.is_empty() {
            peaks.push(0);
        }
        for k in peaks {
            let centre = step * from_usize(k);
            let (theta, value) = golden_max(&at, centre - step, centre + step);
            let (theta, value) = if vals[k] > value {
                (centre, vals[k])
            } else {
                (theta, value)
            };
            if value > best.value {
                best = BoundaryMax {
                    value,
                    radius: rho,
                    theta,
                };
            }
        }
    }
    best
}

fn golden_max<T: Scalar, F: Fn(T) -> T>(f: &F, mut a: T, mut b: T) -> (T, T) {
    let inv_phi = lit::<T>(0.618_033_988_749_894_8);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
