//! Simultaneous polynomial root finding: Aberth-Ehrlich iteration with a
//! compensated-Horner Newton polish (error-free transformations give
//! roughly twice the working precision for the final refinement), plus
//! tolerance-based cluster detection for multiple roots.

use num_complex::Complex64;

use crate::{Ctx, Error, Result};

/// All complex roots of `sum coeffs[k] x^k` (leading coefficient
/// nonzero). Degenerate inputs: constants return no roots.
pub fn all_roots(coeffs: &[Complex64], ctx: &Ctx) -> Result<Vec<Complex64>> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while matches!(c.last(), Some(z) if *z == Complex64::ZERO) {
        c.pop();
    }
    if c.len() <= 1 {
        return Ok(vec![]);
    }
    // Zero roots split off exactly.
    let mut zeros = 0;
    while c.first() == Some(&Complex64::ZERO) {
        c.remove(0);
        zeros += 1;
    }
    let mut roots = vec![Complex64::ZERO; zeros];
    if c.len() > 1 {
        roots.extend(aberth(&c)?);
    }
    if ctx.precision_bits > 53 {
        for r in roots.iter_mut().skip(zeros) {
            *r = newton_polish_compensated(&c, *r, 6);
        }
    }
    Ok(roots)
}

fn aberth(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = c.len() - 1;
    let lead = c[n];
    let norm: Vec<Complex64> = c.iter().map(|z| z / lead).collect();
    // Cauchy bound for the initial circle.
    let radius = 1.0
        + norm[..n]
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max);
    let mut x: Vec<Complex64> = (0..n)
        .map(|k| {
            // Slightly irrational angle step avoids symmetric deadlock.
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.41;
            Complex64::from_polar(radius * 0.8, angle)
        })
        .collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::ZERO;
        let mut dp = Complex64::ZERO;
        for k in (0..=n).rev() {
            dp = dp * z + p;
            p = p * z + norm[k];
        }
        (p, dp)
    };
    let mut converged = vec![false; n];
    for _ in 0..400 {
        let mut all_done = true;
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let (p, dp) = eval(x[i]);
            if p == Complex64::ZERO {
                converged[i] = true;
                continue;
            }
            let newton = if dp == Complex64::ZERO {
                Complex64::new(1e-12, 1e-12)
            } else {
                p / dp
            };
            let mut s = Complex64::ZERO;
            for (j, xj) in x.iter().enumerate() {
                if j != i {
                    let d = x[i] - xj;
                    if d != Complex64::ZERO {
                        s += 1.0 / d;
                    }
                }
            }
            let denom = 1.0 - newton * s;
            let step = if denom == Complex64::ZERO {
                newton
            } else {
                newton / denom
            };
            x[i] -= step;
            if step.norm() <= 1e-14 * (1.0 + x[i].norm()) {
                converged[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return Ok(x);
        }
    }
    // Multiple roots converge only linearly; accept the cluster if the
    // residual is small at every approximant.
    let scale = norm.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    for &xi in &x {
        let (p, _) = eval(xi);
        if p.norm() > 1e-8 * scale.max(1.0) {
            return Err(Error::IllConditioned {
                residual: p.norm(),
                tol: 1e-8 * scale.max(1.0),
            });
        }
    }
    Ok(x)
}

/// Group roots into clusters of radius `cluster_radius`; returns
/// `(centroid, multiplicity)` per cluster, in a deterministic order
/// (lexicographic by rounded real then imaginary part).
pub fn cluster_roots(roots: &[Complex64], cluster_radius: f64) -> Vec<(Complex64, usize)> {
    let mut remaining: Vec<Complex64> = roots.to_vec();
    remaining.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    'outer: for r in remaining {
        for cl in clusters.iter_mut() {
            let centroid = cl.iter().sum::<Complex64>() / cl.len() as f64;
            if (r - centroid).norm() <= cluster_radius {
                cl.push(r);
                continue 'outer;
            }
        }
        clusters.push(vec![r]);
    }
    clusters
        .into_iter()
        .map(|cl| {
            let m = cl.len();
            (cl.iter().sum::<Complex64>() / m as f64, m)
        })
        .collect()
}

// --- compensated complex Horner -----------------------------------------

#[derive(Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

fn dd_add(a: Dd, b: Dd) -> Dd {
    let (s, e) = two_sum(a.hi, b.hi);
    let e = e + a.lo + b.lo;
    let (hi, lo) = two_sum(s, e);
    Dd { hi, lo }
}

fn dd_mul(a: Dd, b: Dd) -> Dd {
    let (p, e) = two_prod(a.hi, b.hi);
    let e = e + a.hi * b.lo + a.lo * b.hi;
    let (hi, lo) = two_sum(p, e);
    Dd { hi, lo }
}

#[derive(Clone, Copy)]
struct CDd {
    re: Dd,
    im: Dd,
}

impl CDd {
    fn from(z: Complex64) -> CDd {
        CDd {
            re: Dd::from(z.re),
            im: Dd::from(z.im),
        }
    }

    fn value(self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

fn cdd_add(a: CDd, b: CDd) -> CDd {
    CDd {
        re: dd_add(a.re, b.re),
        im: dd_add(a.im, b.im),
    }
}

fn cdd_mul(a: CDd, b: CDd) -> CDd {
    let rr = dd_mul(a.re, b.re);
    let ii = dd_mul(a.im, b.im);
    let ri = dd_mul(a.re, b.im);
    let ir = dd_mul(a.im, b.re);
    CDd {
        re: dd_add(rr, Dd { hi: -ii.hi, lo: -ii.lo }),
        im: dd_add(ri, ir),
    }
}

/// Evaluate the polynomial and its derivative at `z` in double-double
/// working precision.
fn horner_compensated(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zz = CDd::from(z);
    let mut p = CDd::from(Complex64::ZERO);
    let mut dp = CDd::from(Complex64::ZERO);
    for k in (0..coeffs.len()).rev() {
        dp = cdd_add(cdd_mul(dp, zz), p);
        p = cdd_add(cdd_mul(p, zz), CDd::from(coeffs[k]));
    }
    (p.value(), dp.value())
}

/// A few Newton steps with compensated evaluation.
pub fn newton_polish_compensated(coeffs: &[Complex64], mut z: Complex64, steps: usize) -> Complex64 {
    for _ in 0..steps {
        let (p, dp) = horner_compensated(coeffs, z);
        if dp == Complex64::ZERO {
            break;
        }
        let step = p / dp;
        z -= step;
        if step.norm() <= 1e-17 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn simple_roots() {
        let ctx = Ctx::default();
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        let coeffs = vec![c(-6.0, 0.0), c(11.0, 0.0), c(-6.0, 0.0), c(1.0, 0.0)];
        let mut roots = all_roots(&coeffs, &ctx).unwrap();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((roots[0] - c(1.0, 0.0)).norm() < 1e-10);
        assert!((roots[1] - c(2.0, 0.0)).norm() < 1e-10);
        assert!((roots[2] - c(3.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn complex_and_zero_roots() {
        let ctx = Ctx::default();
        // x^2 (x^2 + 1)
        let coeffs = vec![
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ];
        let roots = all_roots(&coeffs, &ctx).unwrap();
        assert_eq!(roots.len(), 4);
        assert_eq!(roots.iter().filter(|r| r.norm() == 0.0).count(), 2);
        let mut ims: Vec<f64> = roots
            .iter()
            .filter(|r| r.norm() > 0.5)
            .map(|r| r.im)
            .collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-10 && (ims[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn double_root_clusters() {
        let ctx = Ctx::default();
        // (x-1)^2 (x+2)
        let coeffs = vec![c(2.0, 0.0), c(-3.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let roots = all_roots(&coeffs, &ctx).unwrap();
        let clusters = cluster_roots(&roots, 1e-5);
        assert_eq!(clusters.len(), 2);
        let double = clusters.iter().find(|(_, m)| *m == 2).unwrap();
        assert!((double.0 - c(1.0, 0.0)).norm() < 1e-5);
    }

    #[test]
    fn compensated_polish_beats_plain_eval() {
        // Wilkinson-style clustering stress: (x - 1)...(x - 12)
        let mut coeffs = vec![c(1.0, 0.0)];
        for r in 1..=12 {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (i, a) in coeffs.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * (r as f64);
            }
            coeffs = next;
        }
        let z = newton_polish_compensated(&coeffs, c(8.003, 0.001), 20);
        assert!((z - c(8.0, 0.0)).norm() < 1e-9, "got {z}");
    }
}
