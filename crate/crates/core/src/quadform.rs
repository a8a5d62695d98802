//! The symmetric 3x3 quadratic form controlling the second-derivative
//! estimate: the general matrix built from three positive weight functions
//! and its specialization to constant/exponential weights, the parameter
//! choice that zeroes the off-diagonal couplings, and the smallest `K`
//! making the form positive semidefinite.

use crate::{Error, Result};
use serde::Serialize;

/// Value and first two derivatives of a weight function at a point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Jet2 {
    pub h: f64,
    pub dh: f64,
    pub d2h: f64,
}

impl Jet2 {
    pub fn new(h: f64, dh: f64, d2h: f64) -> Result<Jet2> {
        if !(h > 0.0) {
            return Err(Error::Domain(format!(
                "weight functions must be positive, got {h}"
            )));
        }
        Ok(Jet2 { h, dh, d2h })
    }

    pub fn constant(value: f64) -> Result<Jet2> {
        Jet2::new(value, 0.0, 0.0)
    }

    /// Jet of `e^{a u}` at the point where the exponential equals `value`.
    pub fn exponential(value: f64, a: f64) -> Result<Jet2> {
        Jet2::new(value, a * value, a * a * value)
    }

    /// `(1/h)' = -h'/h^2`
    fn d_inv(&self) -> f64 {
        -self.dh / (self.h * self.h)
    }

    /// `(1/h)'' = (2 h'^2 - h h'') / h^3`
    fn d2_inv(&self) -> f64 {
        (2.0 * self.dh * self.dh - self.h * self.d2h) / (self.h * self.h * self.h)
    }

    /// `(h^p)'' = p(p-1) h^{p-2} h'^2 + p h^{p-1} h''`
    fn d2_pow(&self, p: f64) -> f64 {
        p * (p - 1.0) * self.h.powf(p - 2.0) * self.dh * self.dh
            + p * self.h.powf(p - 1.0) * self.d2h
    }
}

/// Symmetric 3x3 matrix, upper-triangle storage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Matrix3 {
    pub a11: f64,
    pub a12: f64,
    pub a13: f64,
    pub a22: f64,
    pub a23: f64,
    pub a33: f64,
}

impl Matrix3 {
    pub fn diagonal(d1: f64, d2: f64, d3: f64) -> Matrix3 {
        Matrix3 {
            a11: d1,
            a12: 0.0,
            a13: 0.0,
            a22: d2,
            a23: 0.0,
            a33: d3,
        }
    }

    pub fn identity() -> Matrix3 {
        Matrix3::diagonal(1.0, 1.0, 1.0)
    }

    /// `q^T A q`
    pub fn quad_form(&self, q: [f64; 3]) -> f64 {
        let [x, y, z] = q;
        self.a11 * x * x
            + self.a22 * y * y
            + self.a33 * z * z
            + 2.0 * (self.a12 * x * y + self.a13 * x * z + self.a23 * y * z)
    }

    /// Eigenvalues in ascending order (closed-form symmetric 3x3 solve).
    pub fn eigenvalues(&self) -> [f64; 3] {
        let p1 = self.a12 * self.a12 + self.a13 * self.a13 + self.a23 * self.a23;
        if p1 == 0.0 {
            let mut d = [self.a11, self.a22, self.a33];
            d.sort_by(|a, b| a.partial_cmp(b).unwrap());
            return d;
        }
        let q = (self.a11 + self.a22 + self.a33) / 3.0;
        let p2 = (self.a11 - q).powi(2) + (self.a22 - q).powi(2) + (self.a33 - q).powi(2)
            + 2.0 * p1;
        let p = (p2 / 6.0).sqrt();
        let b11 = (self.a11 - q) / p;
        let b22 = (self.a22 - q) / p;
        let b33 = (self.a33 - q) / p;
        let b12 = self.a12 / p;
        let b13 = self.a13 / p;
        let b23 = self.a23 / p;
        let detb = b11 * (b22 * b33 - b23 * b23) - b12 * (b12 * b33 - b23 * b13)
            + b13 * (b12 * b23 - b22 * b13);
        let r = (detb / 2.0).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        let e1 = q + 2.0 * p * phi.cos();
        let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
        let e2 = 3.0 * q - e1 - e3;
        let mut eigs = [e1, e2, e3];
        eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        eigs
    }

    fn scale(&self) -> f64 {
        [
            self.a11, self.a12, self.a13, self.a22, self.a23, self.a33,
        ]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Tolerance for semidefiniteness decisions; entries stay O(1)-O(10^2) for
/// the tested parameter ranges.
pub const PSD_TOL: f64 = 1e-12;

/// Positive semidefiniteness via the characteristic coefficients: for a real
/// symmetric matrix all eigenvalues are `>= 0` iff the trace, the sum of the
/// principal 2x2 minors and the determinant are all `>= 0`. The coefficients
/// avoid the sqrt(eps) accuracy loss of the closed-form eigensolver near
/// multiple eigenvalues; each is compared at `PSD_TOL` relative to its own
/// scale.
pub fn psd_check(a: &Matrix3) -> bool {
    let s = a.scale().max(1.0);
    let trace = a.a11 + a.a22 + a.a33;
    let minors = (a.a11 * a.a22 - a.a12 * a.a12)
        + (a.a11 * a.a33 - a.a13 * a.a13)
        + (a.a22 * a.a33 - a.a23 * a.a23);
    let det = a.a11 * (a.a22 * a.a33 - a.a23 * a.a23)
        - a.a12 * (a.a12 * a.a33 - a.a23 * a.a13)
        + a.a13 * (a.a12 * a.a23 - a.a22 * a.a13);
    trace >= -PSD_TOL * s && minors >= -PSD_TOL * s * s && det >= -PSD_TOL * s * s * s
}

/// General estimate matrix for dimension `n`, weight jets `j1, j2, j3`, drift
/// coefficient `lambda1`, curvature scale `kappa`, nonlinearity value `f_u`
/// and completion constant `K`.
#[allow(clippy::too_many_arguments)]
pub fn matrix_a_general(
    n: u32,
    j1: Jet2,
    j2: Jet2,
    j3: Jet2,
    lambda1: f64,
    kappa: f64,
    f_u: f64,
    big_k: f64,
) -> Result<Matrix3> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension must be >= 2, got {n}")));
    }
    let nf = n as f64;
    let (h1, h2, h3) = (j1.h, j2.h, j3.h);
    let a11 = big_k + 2.0 / nf + j3.dh / (h1 * h3);
    let a12 = -4.0 / nf
        - (nf + 4.0) / (2.0 * nf) * j1.d_inv()
        - 3.0 * j3.dh / (2.0 * h1 * h3)
        - h3 / (2.0 * h1 * h1) * j3.d2_inv();
    let a13 = 2.0 / nf + (lambda1 * kappa - j2.dh) / (2.0 * h1 * h2) + j3.dh / (2.0 * h1 * h3);
    let a22 = -2.0 * (nf - 4.0) / nf
        - (nf - 8.0) / nf * j1.d_inv()
        - nf / (nf - 2.0) * h1.powf(-(nf + 2.0) / nf) * j1.d2_pow(-(nf - 2.0) / nf);
    let a23 = -4.0 / nf - (nf + 4.0) / (2.0 * nf) * j1.d_inv()
        + ((2.0 * nf - 2.0 - lambda1) * kappa + 3.0 * j2.dh) / (2.0 * h1 * h2)
        - j2.d2h / (2.0 * h1 * h1 * h2);
    let a33 = 2.0 / nf + (lambda1 * kappa - j2.dh) / (h1 * h2) - f_u * kappa * kappa / (h1 * h2 * h2);
    Ok(Matrix3 {
        a11,
        a12,
        a13,
        a22,
        a23,
        a33,
    })
}

/// Specialized matrix for the Liouville estimate: constant `h1 = a1`,
/// constant `h2 = a2 kappa`, exponential `h3 = e^{a3 u}`, nonlinearity value
/// `lambda2` (kappa drops out of the entries).
pub fn matrix_a_liouville(
    a1: f64,
    a2: f64,
    a3: f64,
    lambda1: f64,
    lambda2: f64,
    big_k: f64,
) -> Matrix3 {
    debug_assert!(a1 > 0.0 && a2 > 0.0);
    Matrix3 {
        a11: big_k + 0.5 + a3 / a1,
        a12: -(2.0 * a1 + a3) * (a1 + a3) / (2.0 * a1 * a1),
        a13: (a2 * (a1 + a3) + lambda1) / (2.0 * a1 * a2),
        a22: 0.0,
        a23: (6.0 - lambda1) / (2.0 * a1 * a2) - 1.0,
        a33: 0.5 + lambda1 / (a1 * a2) - lambda2 / (a1 * a2 * a2),
    }
}

/// The parameter choice that zeroes both off-diagonal couplings.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamSelection {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub admissible: bool,
}

/// Pick `a1 = (6 - lambda1)/(2 a2) = -a3`; admissible (positive `A33`) iff
/// `a2 > 4 lambda2 / (3 (2 + lambda1))`.
pub fn select_parameters(lambda1: f64, lambda2: f64, a2: f64) -> Result<ParamSelection> {
    if !(-2.0 < lambda1 && lambda1 < 6.0) || !(lambda2 > 0.0) {
        return Err(Error::Domain(format!(
            "selection needs -2 < lambda1 < 6 and lambda2 > 0, got ({lambda1}, {lambda2})"
        )));
    }
    if !(a2 > 0.0) {
        return Err(Error::Domain(format!("a2 must be positive, got {a2}")));
    }
    let a1 = (6.0 - lambda1) / (2.0 * a2);
    Ok(ParamSelection {
        a1,
        a2,
        a3: -a1,
        admissible: a2 > 4.0 * lambda2 / (3.0 * (2.0 + lambda1)),
    })
}

/// Smallest `K` for which the specialized form (with zeroed couplings and
/// vanishing middle row) is positive semidefinite:
/// `K_min = max(-(1/2 + a3/a1), A13^2/A33 - (1/2 + a3/a1))`.
pub fn min_k_psd(a1: f64, a2: f64, a3: f64, lambda1: f64, lambda2: f64) -> Result<f64> {
    let a = matrix_a_liouville(a1, a2, a3, lambda1, lambda2, 0.0);
    if a.a12.abs() > 1e-12 || a.a23.abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "min_k_psd requires the decoupling parameter choice, got A12={}, A23={}",
            a.a12, a.a23
        )));
    }
    if !(a.a33 > 0.0) {
        return Err(Error::Singular(format!("A33 = {} is not positive", a.a33)));
    }
    let base = 0.5 + a3 / a1;
    Ok((-base).max(a.a13 * a.a13 / a.a33 - base))
}
