//! Finite-difference oracles on the `R^5` embedding of the sphere.
//!
//! An axisymmetric function `f(s)` extends 0-homogeneously to a neighborhood
//! of the sphere by `F(x) = f(x_1 / |x|)`. For such extensions the Euclidean
//! derivatives restrict to the intrinsic ones: the Euclidean Laplacian equals
//! the Laplace-Beltrami operator, the Euclidean gradient is tangent, and the
//! projected Euclidean Hessian is the intrinsic Hessian. The bilaplacian is
//! obtained by re-extending the Laplacian 0-homogeneously
//! (`H(y) = (|y|^2 / r^2) (lap F)(y)`) and taking one more Euclidean
//! Laplacian.
//!
//! Everything here is deliberately independent of the spectral path: plain
//! fourth-order central stencils on closures of `s`.

use crate::{Error, Result};

type Point = [f64; 5];

fn norm(x: &Point) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Embedding point with the prescribed `s`-coordinate (axis `e_1`).
fn embed_point(s: f64, radius: f64) -> Point {
    [s * radius, (1.0 - s * s).max(0.0).sqrt() * radius, 0.0, 0.0, 0.0]
}

fn extension<'a>(f: &'a dyn Fn(f64) -> f64) -> impl Fn(&Point) -> f64 + 'a {
    move |x: &Point| f(x[0] / norm(x))
}

fn shifted(x: &Point, k: usize, d: f64) -> Point {
    let mut y = *x;
    y[k] += d;
    y
}

/// Fourth-order central first derivative.
fn d1(f: &impl Fn(&Point) -> f64, x: &Point, k: usize, h: f64) -> f64 {
    (-f(&shifted(x, k, 2.0 * h)) + 8.0 * f(&shifted(x, k, h)) - 8.0 * f(&shifted(x, k, -h))
        + f(&shifted(x, k, -2.0 * h)))
        / (12.0 * h)
}

/// Fourth-order central second derivative.
fn d2(f: &impl Fn(&Point) -> f64, x: &Point, k: usize, h: f64) -> f64 {
    (-f(&shifted(x, k, 2.0 * h)) + 16.0 * f(&shifted(x, k, h)) - 30.0 * f(x)
        + 16.0 * f(&shifted(x, k, -h))
        - f(&shifted(x, k, -2.0 * h)))
        / (12.0 * h * h)
}

/// Fourth-order mixed second derivative via tensorized first-derivative
/// stencils.
fn d2_cross(f: &impl Fn(&Point) -> f64, x: &Point, k: usize, l: usize, h: f64) -> f64 {
    const W: [(f64, f64); 4] = [
        (2.0, -1.0 / 12.0),
        (1.0, 8.0 / 12.0),
        (-1.0, -8.0 / 12.0),
        (-2.0, 1.0 / 12.0),
    ];
    let mut acc = 0.0;
    for (a, ca) in W {
        for (b, cb) in W {
            let mut y = *x;
            y[k] += a * h;
            y[l] += b * h;
            acc += ca * cb * f(&y);
        }
    }
    acc / (h * h)
}

fn euclidean_lap(f: &impl Fn(&Point) -> f64, x: &Point, h: f64) -> f64 {
    (0..5).map(|k| d2(f, x, k, h)).sum()
}

fn check_step(h: f64, radius: f64) -> Result<()> {
    let rel = h / radius;
    if !(rel > 1e-5) {
        return Err(Error::Domain(format!(
            "step {h} too small relative to radius {radius}: cancellation dominates"
        )));
    }
    if rel > 0.25 {
        return Err(Error::Domain(format!(
            "step {h} too large relative to radius {radius}"
        )));
    }
    Ok(())
}

/// Laplace-Beltrami at the given `s`-points through the embedding.
pub fn fd_oracle_lap(
    f: &dyn Fn(f64) -> f64,
    kappa: f64,
    s_points: &[f64],
    h: f64,
) -> Result<Vec<f64>> {
    let radius = 1.0 / kappa.sqrt();
    check_step(h, radius)?;
    let ext = extension(f);
    Ok(s_points
        .iter()
        .map(|&s| euclidean_lap(&ext, &embed_point(s, radius), h))
        .collect())
}

/// `|grad f|^2` at the given `s`-points through the embedding.
pub fn fd_oracle_grad2(
    f: &dyn Fn(f64) -> f64,
    kappa: f64,
    s_points: &[f64],
    h: f64,
) -> Result<Vec<f64>> {
    let radius = 1.0 / kappa.sqrt();
    check_step(h, radius)?;
    let ext = extension(f);
    Ok(s_points
        .iter()
        .map(|&s| {
            let x = embed_point(s, radius);
            (0..5).map(|k| d1(&ext, &x, k, h).powi(2)).sum()
        })
        .collect())
}

/// Radial and tangential Hessian eigenvalues through the embedding.
pub fn fd_oracle_hess_eigs(
    f: &dyn Fn(f64) -> f64,
    kappa: f64,
    s_points: &[f64],
    h: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let radius = 1.0 / kappa.sqrt();
    check_step(h, radius)?;
    let ext = extension(f);
    let mut hr = Vec::with_capacity(s_points.len());
    let mut ht = Vec::with_capacity(s_points.len());
    for &s in s_points {
        let x = embed_point(s, radius);
        let hess = hess_matrix(&ext, &x, h);
        // radial tangent direction: e_1 projected onto the tangent space
        let nu: Point = std::array::from_fn(|k| x[k] / radius);
        let mut et: Point = [1.0, 0.0, 0.0, 0.0, 0.0];
        let dot = et.iter().zip(&nu).map(|(a, b)| a * b).sum::<f64>();
        for k in 0..5 {
            et[k] -= dot * nu[k];
        }
        let n = norm(&et);
        if n > 1e-8 {
            for v in et.iter_mut() {
                *v /= n;
            }
            hr.push(quad_form(&hess, &et));
        } else {
            // at the poles every tangent direction is equivalent
            hr.push(hess[2][2]);
        }
        ht.push(hess[2][2]);
    }
    Ok((hr, ht))
}

fn bilap_once(f: &dyn Fn(f64) -> f64, radius: f64, s_points: &[f64], h: f64) -> Vec<f64> {
    let ext = extension(f);
    let r2 = radius * radius;
    let lap_ext = |y: &Point| {
        let n2: f64 = y.iter().map(|v| v * v).sum();
        n2 / r2 * euclidean_lap(&ext, y, h)
    };
    s_points
        .iter()
        .map(|&s| euclidean_lap(&lap_ext, &embed_point(s, radius), h))
        .collect()
}

/// Bilaplacian through the embedding: nested Laplacian of the 0-homogeneous
/// re-extension of the Laplacian, Richardson-extrapolated from steps `h` and
/// `2h` to cancel the leading truncation term.
pub fn fd_oracle_bilap(
    f: &dyn Fn(f64) -> f64,
    kappa: f64,
    s_points: &[f64],
    h: f64,
) -> Result<Vec<f64>> {
    let radius = 1.0 / kappa.sqrt();
    check_step(h, radius)?;
    check_step(2.0 * h, radius)?;
    let fine = bilap_once(f, radius, s_points, h);
    let coarse = bilap_once(f, radius, s_points, 2.0 * h);
    Ok(fine
        .iter()
        .zip(&coarse)
        .map(|(a, b)| (16.0 * a - b) / 15.0)
        .collect())
}

fn hess_matrix(f: &impl Fn(&Point) -> f64, x: &Point, h: f64) -> [[f64; 5]; 5] {
    let mut m = [[0.0; 5]; 5];
    for k in 0..5 {
        m[k][k] = d2(f, x, k, h);
        for l in (k + 1)..5 {
            let v = d2_cross(f, x, k, l, h);
            m[k][l] = v;
            m[l][k] = v;
        }
    }
    m
}

fn quad_form(m: &[[f64; 5]; 5], v: &Point) -> f64 {
    let mut acc = 0.0;
    for k in 0..5 {
        for l in 0..5 {
            acc += v[k] * m[k][l] * v[l];
        }
    }
    acc
}

/// Full derivative data of the extension at one point: enough to assemble
/// every tensor contraction independently of the spectral path.
#[derive(Debug, Clone)]
pub struct EmbeddingJet {
    /// Euclidean gradient (tangent for 0-homogeneous extensions).
    pub grad: Point,
    /// Euclidean Hessian; project with `I - nu nu^T` for the intrinsic one.
    pub hess: [[f64; 5]; 5],
    pub lap: f64,
    /// Euclidean gradient of the re-extended Laplacian.
    pub grad_lap: Point,
    pub bilap: f64,
    /// Outward unit normal at the sample point.
    pub normal: Point,
}

/// Assemble the jet at one `s`-point. `h` is the base step for first and
/// second derivatives; the third-order data uses `3h` and the bilaplacian
/// uses the Richardson pair `(10h, 20h)`, balancing truncation against the
/// nested-stencil cancellation noise.
pub fn fd_jet(f: &dyn Fn(f64) -> f64, kappa: f64, s: f64, h: f64) -> Result<EmbeddingJet> {
    let radius = 1.0 / kappa.sqrt();
    check_step(h, radius)?;
    check_step(20.0 * h, radius)?;
    let ext = extension(f);
    let x = embed_point(s, radius);
    let grad = std::array::from_fn(|k| d1(&ext, &x, k, h));
    let hess = hess_matrix(&ext, &x, h);
    let lap = euclidean_lap(&ext, &x, h);
    let r2 = radius * radius;
    let h3 = 3.0 * h;
    let lap_ext = move |y: &Point| {
        let n2: f64 = y.iter().map(|v| v * v).sum();
        n2 / r2 * euclidean_lap(&ext, y, h3)
    };
    let grad_lap = std::array::from_fn(|k| d1(&lap_ext, &x, k, h3));
    let bilap = {
        let fine = bilap_once(f, radius, &[s], 10.0 * h);
        let coarse = bilap_once(f, radius, &[s], 20.0 * h);
        (16.0 * fine[0] - coarse[0]) / 15.0
    };
    let normal = std::array::from_fn(|k| x[k] / radius);
    Ok(EmbeddingJet {
        grad,
        hess,
        lap,
        grad_lap,
        bilap,
        normal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const S_SAMPLES: [f64; 5] = [-0.95, -0.41, 0.0, 0.33, 0.9];

    #[test]
    fn lap_of_linear_field() {
        // f = s has lap = -4 kappa s; h = 1e-3 keeps the oracle near 1e-5
        let v = fd_oracle_lap(&|s| s, 1.0, &S_SAMPLES, 1e-3).unwrap();
        for (i, &s) in S_SAMPLES.iter().enumerate() {
            assert_abs_diff_eq!(v[i], -4.0 * s, epsilon = 1e-5);
        }
        let c = fd_oracle_lap(&|_| 2.0, 1.0, &S_SAMPLES, 1e-3).unwrap();
        for x in c {
            assert_abs_diff_eq!(x, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn lap_of_degree_two_eigenfield() {
        // psi_2 = (15 s^2 - 3) / (2 sqrt(18/7)); eigenvalue -10 kappa
        let n2 = (18.0f64 / 7.0).sqrt();
        let psi2 = move |s: f64| (15.0 * s * s - 3.0) / (2.0 * n2);
        let v = fd_oracle_lap(&psi2, 1.0, &S_SAMPLES, 1e-3).unwrap();
        for (i, &s) in S_SAMPLES.iter().enumerate() {
            assert_abs_diff_eq!(v[i], -10.0 * psi2(s), epsilon = 1e-4);
        }
    }

    #[test]
    fn step_bounds_flagged() {
        assert!(fd_oracle_lap(&|s| s, 1.0, &S_SAMPLES, 1e-7).is_err());
        assert!(fd_oracle_lap(&|s| s, 1.0, &S_SAMPLES, 0.9).is_err());
    }

    #[test]
    fn grad2_and_hess_of_linear_field() {
        let g = fd_oracle_grad2(&|s| s, 1.0, &S_SAMPLES, 1e-2).unwrap();
        for (i, &s) in S_SAMPLES.iter().enumerate() {
            assert_abs_diff_eq!(g[i], 1.0 - s * s, epsilon = 1e-6);
        }
        let (hr, ht) = fd_oracle_hess_eigs(&|s| s, 1.0, &S_SAMPLES, 1e-2).unwrap();
        for (i, &s) in S_SAMPLES.iter().enumerate() {
            assert_abs_diff_eq!(hr[i], -s, epsilon = 1e-5);
            assert_abs_diff_eq!(ht[i], -s, epsilon = 1e-5);
        }
    }

    #[test]
    fn bilap_of_linear_field() {
        let v = fd_oracle_bilap(&|s| s, 1.0, &S_SAMPLES, 1e-2).unwrap();
        for (i, &s) in S_SAMPLES.iter().enumerate() {
            assert_abs_diff_eq!(v[i], 16.0 * s, epsilon = 1e-5);
        }
    }

    #[test]
    fn bilap_of_degree_two_eigenfield() {
        let n2 = (18.0f64 / 7.0).sqrt();
        let psi2 = move |s: f64| (15.0 * s * s - 3.0) / (2.0 * n2);
        let v = fd_oracle_bilap(&psi2, 1.0, &S_SAMPLES, 2e-2).unwrap();
        for (i, &s) in S_SAMPLES.iter().enumerate() {
            assert_abs_diff_eq!(v[i], 100.0 * psi2(s), epsilon = 1e-5);
        }
    }

    #[test]
    fn kappa_scaling() {
        // same coefficient field at kappa = 4 scales lap by 4
        let kappa: f64 = 4.0;
        let radius = 1.0 / kappa.sqrt();
        let v = fd_oracle_lap(&|s| s, kappa, &S_SAMPLES, 1e-3 * radius).unwrap();
        for (i, &s) in S_SAMPLES.iter().enumerate() {
            assert_abs_diff_eq!(v[i], -16.0 * s, epsilon = 1e-4);
        }
    }
}
