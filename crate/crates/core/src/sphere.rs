//! Axisymmetric spectral calculus on the round 4-sphere of curvature scale
//! `kappa` (radius `1/sqrt(kappa)`), reduced to the coordinate
//! `s = cos(polar angle) in [-1, 1]` with the normalized measure
//! `(3/4)(1 - s^2) ds`.
//!
//! Fields are dual-represented by node values on a Gauss-Legendre rule and
//! by coefficients in the orthonormalized Gegenbauer family `psi_l`
//! (`C_l^{(3/2)}` scaled to unit mean square), which diagonalizes the
//! Laplace-Beltrami operator: `lap psi_l = -l(l+3) kappa psi_l`.
//!
//! The kernels are generic over the working scalar so that the steep-field
//! verification batteries can run in double-double precision; the `f64`
//! instantiation is the ordinary API.

use crate::scalar::Real;
use crate::{Error, Result};

/// Quadrature rule + basis tables for one resolution.
///
/// Nodes are Gauss-Legendre on `[-1, 1]`; the measure density is folded into
/// the weights, so `sum w_i = 1` and polynomials up to degree `2N - 3` are
/// integrated exactly.
#[derive(Debug, Clone)]
pub struct Rule<S: Real = f64> {
    nodes: Vec<S>,
    weights: Vec<S>,
    degree: usize,
    /// `basis[l][i] = psi_l(s_i)`
    basis: Vec<Vec<S>>,
    basis_d1: Vec<Vec<S>>,
    basis_d2: Vec<Vec<S>>,
}

/// Gauss-Legendre nodes and weights for `integral_{-1}^{1} f(s) ds`,
/// computed by Newton iteration on the Legendre recurrence.
fn gauss_legendre<S: Real>(n: usize) -> (Vec<S>, Vec<S>) {
    let mut nodes = vec![S::zero(); n];
    let mut dpn = vec![S::zero(); n];
    for k in 0..n {
        // Tricomi-type seed, then Newton in the working precision.
        let theta = std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5);
        let mut x = S::cos_seed(theta);
        let mut dp = S::one();
        for _ in 0..40 {
            let mut p0 = S::one();
            let mut p1 = x;
            for j in 2..=n {
                let jf = S::from_usize(j);
                let p2 = ((S::from_usize(2 * j - 1) * x * p1) - (jf - S::one()) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
            dp = S::from_usize(n) * (x * p1 - p0) / (x * x - S::one());
            let dx = p1 / dp;
            x = x - dx;
            if dx.abs().to_f64() < 1e-30 {
                break;
            }
        }
        nodes[k] = x;
        dpn[k] = dp;
    }
    // GL weight 2/((1-x^2) P'^2); folding in the density (3/4)(1-x^2)
    // cancels the (1-x^2) factor exactly.
    let weights: Vec<S> = dpn
        .iter()
        .map(|&dp| S::from_f64(1.5) / (dp * dp))
        .collect();
    // ascending node order
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| nodes[a].partial_cmp(&nodes[b]).unwrap());
    (
        idx.iter().map(|&i| nodes[i]).collect(),
        idx.iter().map(|&i| weights[i]).collect(),
    )
}

impl<S: Real> Rule<S> {
    /// Build a rule with `n` nodes carrying spectral degree `degree`.
    ///
    /// `n >= 2` and `n > degree` are required; the de-aliasing convention for
    /// nonlinear work is `n >= 2 degree`.
    pub fn new(n: usize, degree: usize) -> Result<Rule<S>> {
        if n < 2 {
            return Err(Error::Domain(format!("rule needs at least 2 nodes, got {n}")));
        }
        if degree + 1 > n {
            return Err(Error::Domain(format!(
                "degree {degree} too large for {n} nodes"
            )));
        }
        let (nodes, weights) = gauss_legendre::<S>(n);
        // Gegenbauer C^{(3/2)} values and s-derivatives by recurrence:
        //   l C_l = (2l+1) s C_{l-1} - (l+1) C_{l-2}
        let mut basis = vec![vec![S::zero(); n]; degree + 1];
        let mut basis_d1 = vec![vec![S::zero(); n]; degree + 1];
        let mut basis_d2 = vec![vec![S::zero(); n]; degree + 1];
        for i in 0..n {
            basis[0][i] = S::one();
            if degree >= 1 {
                basis[1][i] = S::from_f64(3.0) * nodes[i];
                basis_d1[1][i] = S::from_f64(3.0);
            }
            for l in 2..=degree {
                let lf = S::from_usize(l);
                let a = S::from_usize(2 * l + 1);
                let b = S::from_usize(l + 1);
                let s = nodes[i];
                basis[l][i] = (a * s * basis[l - 1][i] - b * basis[l - 2][i]) / lf;
                basis_d1[l][i] =
                    (a * (basis[l - 1][i] + s * basis_d1[l - 1][i]) - b * basis_d1[l - 2][i]) / lf;
                basis_d2[l][i] = (a
                    * (S::from_f64(2.0) * basis_d1[l - 1][i] + s * basis_d2[l - 1][i])
                    - b * basis_d2[l - 2][i])
                    / lf;
            }
        }
        // normalize to unit mean square under the measure
        for l in 0..=degree {
            let norm = (S::from_usize(3 * (l + 1) * (l + 2))
                / S::from_usize(2 * (2 * l + 3)))
            .sqrt();
            for i in 0..n {
                basis[l][i] = basis[l][i] / norm;
                basis_d1[l][i] = basis_d1[l][i] / norm;
                basis_d2[l][i] = basis_d2[l][i] / norm;
            }
        }
        Ok(Rule {
            nodes,
            weights,
            degree,
            basis,
            basis_d1,
            basis_d2,
        })
    }

    /// The default working resolution: 64 nodes, degree 32.
    pub fn default_rule() -> Rule<S> {
        Rule::new(64, 32).expect("default resolution is valid")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> &[S] {
        &self.nodes
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    /// Quadrature of node values against the normalized measure.
    pub fn integrate_values(&self, values: &[S]) -> S {
        let mut acc = S::zero();
        for (w, v) in self.weights.iter().zip(values) {
            acc += *w * *v;
        }
        acc
    }

    /// Project node values onto the basis (degrees `0..=degree`).
    pub fn analyze(&self, values: &[S]) -> Vec<S> {
        assert_eq!(values.len(), self.len(), "field/rule node count mismatch");
        let mut coeffs = vec![S::zero(); self.degree + 1];
        for (l, row) in self.basis.iter().enumerate() {
            let mut acc = S::zero();
            for i in 0..values.len() {
                acc += self.weights[i] * values[i] * row[i];
            }
            coeffs[l] = acc;
        }
        coeffs
    }

    /// Evaluate a coefficient vector on the nodes.
    pub fn synthesize(&self, coeffs: &[S]) -> Vec<S> {
        assert!(coeffs.len() <= self.degree + 1, "coefficient degree too high");
        let mut values = vec![S::zero(); self.len()];
        for (l, &c) in coeffs.iter().enumerate() {
            for i in 0..values.len() {
                values[i] += c * self.basis[l][i];
            }
        }
        values
    }

    fn synth_with(&self, table: &[Vec<S>], coeffs: &[S]) -> Vec<S> {
        let mut values = vec![S::zero(); self.len()];
        for (l, &c) in coeffs.iter().enumerate() {
            for i in 0..values.len() {
                values[i] += c * table[l][i];
            }
        }
        values
    }

    /// Evaluate `psi_l` and its first two s-derivatives at an arbitrary
    /// point (used by endpoint diagnostics и polyline sampling).
    pub fn eval_basis_at(&self, l: usize, s: S) -> S {
        let mut c0 = S::one();
        if l == 0 {
            return c0 / self.norm_const(0);
        }
        let mut c1 = S::from_f64(3.0) * s;
        for m in 2..=l {
            let mf = S::from_usize(m);
            let c2 = (S::from_usize(2 * m + 1) * s * c1 - S::from_usize(m + 1) * c0) / mf;
            c0 = c1;
            c1 = c2;
        }
        c1 / self.norm_const(l)
    }

    fn norm_const(&self, l: usize) -> S {
        (S::from_usize(3 * (l + 1) * (l + 2)) / S::from_usize(2 * (2 * l + 3))).sqrt()
    }
}

/// An axisymmetric field on the sphere of curvature scale `kappa`,
/// dual-represented as node values and spectral coefficients.
#[derive(Debug, Clone)]
pub struct AxiField<S: Real = f64> {
    pub kappa: S,
    values: Vec<S>,
    coeffs: Vec<S>,
}

impl<S: Real> AxiField<S> {
    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.abs().to_f64())
            .fold(0.0, f64::max)
    }
}

impl<S: Real> Rule<S> {
    /// Field from node values; coefficients by projection.
    pub fn field_from_values(&self, kappa: S, values: Vec<S>) -> AxiField<S> {
        let coeffs = self.analyze(&values);
        AxiField {
            kappa,
            values,
            coeffs,
        }
    }

    /// Field from spectral coefficients; values by synthesis.
    pub fn field_from_coeffs(&self, kappa: S, mut coeffs: Vec<S>) -> AxiField<S> {
        coeffs.resize(self.degree + 1, S::zero());
        let values = self.synthesize(&coeffs);
        AxiField {
            kappa,
            values,
            coeffs,
        }
    }

    /// Field sampled from a function of `s`.
    pub fn field_from_fn(&self, kappa: S, f: impl Fn(S) -> S) -> AxiField<S> {
        let values: Vec<S> = self.nodes.iter().map(|&s| f(s)).collect();
        self.field_from_values(kappa, values)
    }

    /// Degree-`l` axisymmetric eigenfield, unit mean square.
    pub fn basis_field(&self, kappa: S, l: usize) -> Result<AxiField<S>> {
        if l > self.degree {
            return Err(Error::Domain(format!(
                "basis degree {l} exceeds rule degree {}",
                self.degree
            )));
        }
        let mut coeffs = vec![S::zero(); self.degree + 1];
        coeffs[l] = S::one();
        Ok(self.field_from_coeffs(kappa, coeffs))
    }

    pub fn integrate(&self, f: &AxiField<S>) -> S {
        self.integrate_values(&f.values)
    }

    /// Laplace-Beltrami: multiplier `-l(l+3) kappa` in coefficient space.
    pub fn lap(&self, f: &AxiField<S>) -> AxiField<S> {
        let coeffs: Vec<S> = f
            .coeffs
            .iter()
            .enumerate()
            .map(|(l, &c)| -S::from_usize(l * (l + 3)) * f.kappa * c)
            .collect();
        let values = self.synthesize(&coeffs);
        AxiField {
            kappa: f.kappa,
            values,
            coeffs,
        }
    }

    /// Bilaplacian via squared multipliers.
    pub fn bilap(&self, f: &AxiField<S>) -> AxiField<S> {
        let coeffs: Vec<S> = f
            .coeffs
            .iter()
            .enumerate()
            .map(|(l, &c)| {
                let m = S::from_usize(l * (l + 3)) * f.kappa;
                m * m * c
            })
            .collect();
        let values = self.synthesize(&coeffs);
        AxiField {
            kappa: f.kappa,
            values,
            coeffs,
        }
    }

    /// Node values of `df/ds` from the coefficient representation.
    pub fn deriv_values(&self, f: &AxiField<S>) -> Vec<S> {
        self.synth_with(&self.basis_d1, &f.coeffs)
    }

    /// Node values of `d^2 f/ds^2` from the coefficient representation.
    pub fn deriv2_values(&self, f: &AxiField<S>) -> Vec<S> {
        self.synth_with(&self.basis_d2, &f.coeffs)
    }

    /// `|grad f|^2 = kappa (1 - s^2) (df/ds)^2` per node.
    pub fn grad2(&self, f: &AxiField<S>) -> AxiField<S> {
        let df = self.deriv_values(f);
        let values: Vec<S> = self
            .nodes
            .iter()
            .zip(&df)
            .map(|(&s, &d)| f.kappa * (S::one() - s * s) * d * d)
            .collect();
        self.field_from_values(f.kappa, values)
    }

    /// `<grad f, grad g> = kappa (1 - s^2) f' g'` per node.
    pub fn inner_grad(&self, f: &AxiField<S>, g: &AxiField<S>) -> AxiField<S> {
        let df = self.deriv_values(f);
        let dg = self.deriv_values(g);
        let values: Vec<S> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, &s)| f.kappa * (S::one() - s * s) * df[i] * dg[i])
            .collect();
        self.field_from_values(f.kappa, values)
    }

    /// Hessian eigenvalues in an orthonormal frame: radial
    /// `kappa[(1-s^2) f'' - s f']` (multiplicity 1) and tangential
    /// `-kappa s f'` (multiplicity 3); their trace is the Laplacian.
    pub fn hess_eigs(&self, f: &AxiField<S>) -> (AxiField<S>, AxiField<S>) {
        let d1 = self.deriv_values(f);
        let d2 = self.deriv2_values(f);
        let mut hr = vec![S::zero(); self.len()];
        let mut ht = vec![S::zero(); self.len()];
        for i in 0..self.len() {
            let s = self.nodes[i];
            hr[i] = f.kappa * ((S::one() - s * s) * d2[i] - s * d1[i]);
            ht[i] = -f.kappa * s * d1[i];
        }
        (
            self.field_from_values(f.kappa, hr),
            self.field_from_values(f.kappa, ht),
        )
    }

    /// Divergence of the radial vector field `phi(s) grad s`:
    /// `kappa[(1-s^2) phi' - 4 s phi]`.
    pub fn div_radial(&self, phi: &AxiField<S>) -> AxiField<S> {
        let dphi = self.deriv_values(phi);
        let values: Vec<S> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, &s)| phi.kappa * ((S::one() - s * s) * dphi[i] - S::from_f64(4.0) * s * phi.values[i]))
            .collect();
        self.field_from_values(phi.kappa, values)
    }
}

/// Pointwise binary combination keeping the dual representation coherent.
pub fn zip_fields<S: Real>(
    rule: &Rule<S>,
    kappa: S,
    a: &[S],
    b: &[S],
    f: impl Fn(S, S) -> S,
) -> AxiField<S> {
    let values: Vec<S> = a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect();
    rule.field_from_values(kappa, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rule() -> Rule<f64> {
        Rule::new(64, 32).unwrap()
    }

    #[test]
    fn weights_normalized_and_moments() {
        let r = rule();
        let ones = vec![1.0; r.len()];
        assert_abs_diff_eq!(r.integrate_values(&ones), 1.0, epsilon = 1e-14);
        let s2: Vec<f64> = r.nodes().iter().map(|s| s * s).collect();
        assert_abs_diff_eq!(r.integrate_values(&s2), 0.2, epsilon = 1e-14);
        let s1: Vec<f64> = r.nodes().to_vec();
        assert_abs_diff_eq!(r.integrate_values(&s1), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_degenerate_rules() {
        assert!(Rule::<f64>::new(1, 0).is_err());
        assert!(Rule::<f64>::new(8, 9).is_err());
    }

    #[test]
    fn basis_orthonormal() {
        let r = rule();
        for l in 0..=8 {
            for m in 0..=8 {
                let pl = r.basis_field(1.0, l).unwrap();
                let pm = r.basis_field(1.0, m).unwrap();
                let prod: Vec<f64> = pl
                    .values()
                    .iter()
                    .zip(pm.values())
                    .map(|(a, b)| a * b)
                    .collect();
                let want = if l == m { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(r.integrate_values(&prod), want, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn basis_low_degrees_explicit() {
        let r = rule();
        let p0 = r.basis_field(1.0, 0).unwrap();
        for &v in p0.values() {
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-13);
        }
        let p1 = r.basis_field(1.0, 1).unwrap();
        for (i, &v) in p1.values().iter().enumerate() {
            assert_abs_diff_eq!(v, 5.0f64.sqrt() * r.nodes()[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn eigenfield_property() {
        let r = rule();
        for l in [1usize, 2, 5] {
            for kappa in [1.0, 2.5] {
                let p = r.basis_field(kappa, l).unwrap();
                let lp = r.lap(&p);
                for i in 0..r.len() {
                    let want = -((l * (l + 3)) as f64) * kappa * p.values()[i];
                    assert_abs_diff_eq!(lp.values()[i], want, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn round_trip_identity() {
        let r = rule();
        let mut coeffs = vec![0.0; 33];
        for (l, c) in coeffs.iter_mut().enumerate() {
            *c = (0.7f64).powi(l as i32) * if l % 2 == 0 { 1.0 } else { -0.5 };
        }
        let f = r.field_from_coeffs(1.0, coeffs.clone());
        let back = r.analyze(f.values());
        for l in 0..=32 {
            assert_abs_diff_eq!(back[l], coeffs[l], epsilon = 1e-11);
        }
    }

    #[test]
    fn lap_examples() {
        let r = rule();
        // f = s -> -4 kappa s
        let f = r.field_from_fn(1.0, |s| s);
        let lf = r.lap(&f);
        for (i, &s) in r.nodes().iter().enumerate() {
            assert_abs_diff_eq!(lf.values()[i], -4.0 * s, epsilon = 1e-10);
        }
        // f = const -> 0
        let c = r.field_from_fn(1.0, |_| 3.25);
        assert!(r.lap(&c).max_abs() < 1e-9);
        // f = s^2 -> kappa (2 - 10 s^2); checked for two kappa values
        for kappa in [1.0, 2.0] {
            let f = r.field_from_fn(kappa, |s| s * s);
            let lf = r.lap(&f);
            for (i, &s) in r.nodes().iter().enumerate() {
                assert_abs_diff_eq!(lf.values()[i], kappa * (2.0 - 10.0 * s * s), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn bilap_is_lap_squared() {
        let r = rule();
        let f = r.field_from_fn(1.0, |s| s);
        let bf = r.bilap(&f);
        for (i, &s) in r.nodes().iter().enumerate() {
            assert_abs_diff_eq!(bf.values()[i], 16.0 * s, epsilon = 1e-7);
        }
        assert!(r.bilap(&r.field_from_fn(1.0, |_| 1.0)).max_abs() < 1e-7);
        // random degree-6 field: bilap = lap(lap)
        let mut coeffs = vec![0.0; 33];
        coeffs[..7].copy_from_slice(&[0.3, -1.0, 0.5, 0.25, -0.125, 0.06, -0.03]);
        let f = r.field_from_coeffs(1.0, coeffs);
        let a = r.bilap(&f);
        let b = r.lap(&r.lap(&f));
        for i in 0..r.len() {
            assert_abs_diff_eq!(a.values()[i], b.values()[i], epsilon = 1e-11);
        }
    }

    #[test]
    fn grad2_examples() {
        let r = rule();
        let f = r.field_from_fn(1.0, |s| s);
        let g = r.grad2(&f);
        for (i, &s) in r.nodes().iter().enumerate() {
            assert_abs_diff_eq!(g.values()[i], 1.0 - s * s, epsilon = 1e-12);
        }
        assert!(r.grad2(&r.field_from_fn(1.0, |_| 2.0)).max_abs() < 1e-20);
        // f = s^2: 4 kappa s^2 (1 - s^2), and the product-rule identity
        // grad2 = (1/2) lap(f^2) - f lap f
        let f = r.field_from_fn(1.0, |s| s * s);
        let g = r.grad2(&f);
        let f2 = r.field_from_fn(1.0, |s| s.powi(4));
        let lf2 = r.lap(&f2);
        let lf = r.lap(&f);
        for (i, &s) in r.nodes().iter().enumerate() {
            assert_abs_diff_eq!(g.values()[i], 4.0 * s * s * (1.0 - s * s), epsilon = 1e-10);
            let alt = 0.5 * lf2.values()[i] - f.values()[i] * lf.values()[i];
            assert_abs_diff_eq!(g.values()[i], alt, epsilon = 1e-9);
        }
    }

    #[test]
    fn inner_grad_examples() {
        let r = rule();
        let f = r.field_from_fn(1.0, |s| s);
        let g = r.field_from_fn(1.0, |s| s * s);
        let fg = r.inner_grad(&f, &g);
        for (i, &s) in r.nodes().iter().enumerate() {
            assert_abs_diff_eq!(fg.values()[i], 2.0 * s * (1.0 - s * s), epsilon = 1e-11);
        }
        // polarization against grad2
        let ff = r.inner_grad(&f, &f);
        let g2 = r.grad2(&f);
        for i in 0..r.len() {
            assert_abs_diff_eq!(ff.values()[i], g2.values()[i], epsilon = 1e-12);
        }
        let c = r.field_from_fn(1.0, |_| 5.0);
        assert!(r.inner_grad(&f, &c).max_abs() < 1e-12);
    }

    #[test]
    fn hess_examples_and_trace() {
        let r = rule();
        // s is a first eigenfunction: Hessian proportional to the metric
        let f = r.field_from_fn(1.0, |s| s);
        let (hr, ht) = r.hess_eigs(&f);
        for (i, &s) in r.nodes().iter().enumerate() {
            assert_abs_diff_eq!(hr.values()[i], -s, epsilon = 1e-11);
            assert_abs_diff_eq!(ht.values()[i], -s, epsilon = 1e-11);
        }
        let c = r.field_from_fn(1.0, |_| 1.5);
        let (hr, ht) = r.hess_eigs(&c);
        assert!(hr.max_abs() < 1e-10 && ht.max_abs() < 1e-10);
        // trace identity on a random field
        let mut coeffs = vec![0.0; 33];
        coeffs[..9].copy_from_slice(&[0.2, -0.8, 0.4, 0.3, -0.2, 0.1, 0.05, -0.04, 0.02]);
        let f = r.field_from_coeffs(2.5, coeffs);
        let (hr, ht) = r.hess_eigs(&f);
        let lf = r.lap(&f);
        for i in 0..r.len() {
            let tr = hr.values()[i] + 3.0 * ht.values()[i];
            assert_abs_diff_eq!(tr, lf.values()[i], epsilon = 1e-10);
        }
    }

    #[test]
    fn div_radial_examples() {
        let r = rule();
        // phi = 1: divergence of grad s is lap s = -4 kappa s
        let one = r.field_from_fn(1.0, |_| 1.0);
        let d = r.div_radial(&one);
        for (i, &s) in r.nodes().iter().enumerate() {
            assert_abs_diff_eq!(d.values()[i], -4.0 * s, epsilon = 1e-12);
        }
        assert!(r.div_radial(&r.field_from_fn(1.0, |_| 0.0)).max_abs() == 0.0);
        // phi = s: kappa(1 - 5 s^2), integral zero by the divergence theorem
        let f = r.field_from_fn(1.0, |s| s);
        let d = r.div_radial(&f);
        for (i, &s) in r.nodes().iter().enumerate() {
            assert_abs_diff_eq!(d.values()[i], 1.0 - 5.0 * s * s, epsilon = 1e-11);
        }
        assert_abs_diff_eq!(r.integrate(&d), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn divergence_theorem_random_fields() {
        let r = rule();
        let mut state = 42u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..100 {
            let mut coeffs = vec![0.0; 33];
            for (l, c) in coeffs.iter_mut().enumerate().take(9) {
                *c = next() / ((l + 1) * (l + 1)) as f64;
            }
            let phi = r.field_from_coeffs(1.0, coeffs);
            let d = r.div_radial(&phi);
            assert!(r.integrate(&d).abs() <= 1e-10);
        }
    }

    #[test]
    fn kappa_scaling_law() {
        let r = rule();
        let f1 = r.field_from_fn(1.0, |s| s * s - 0.3 * s);
        let f2 = r.field_from_fn(2.0, |s| s * s - 0.3 * s);
        let (l1, l2) = (r.lap(&f1), r.lap(&f2));
        let (g1, g2) = (r.grad2(&f1), r.grad2(&f2));
        for i in 0..r.len() {
            assert_abs_diff_eq!(2.0 * l1.values()[i], l2.values()[i], epsilon = 1e-11);
            assert_abs_diff_eq!(2.0 * g1.values()[i], g2.values()[i], epsilon = 1e-11);
        }
    }

    #[test]
    fn grad2_nonnegative_and_vanishes_iff_constant() {
        let r = rule();
        let f = r.field_from_fn(1.0, |s| (2.1 * s).sin());
        let g = r.grad2(&f);
        assert!(g.values().iter().all(|&v| v >= 0.0));
        // zero gradient <=> only the constant coefficient survives
        let c = r.field_from_fn(1.0, |_| -0.7);
        let gc = r.grad2(&c);
        assert!(gc.max_abs() < 1e-24);
        assert!(c.coeffs()[1..].iter().all(|&x| x.abs() < 1e-14));
    }

    #[test]
    fn dd_rule_matches_f64_rule() {
        use crate::dd::Dd;
        let rf = Rule::<f64>::new(24, 10).unwrap();
        let rd = Rule::<Dd>::new(24, 10).unwrap();
        for i in 0..24 {
            assert_abs_diff_eq!(rf.nodes()[i], rd.nodes()[i].to_f64(), epsilon = 1e-14);
            assert_abs_diff_eq!(rf.weights()[i], rd.weights()[i].to_f64(), epsilon = 1e-14);
        }
        // dd quadrature is exact far beyond f64: integrate s^8
        let v: Vec<Dd> = rd.nodes().iter().map(|&s| s.powi(8)).collect();
        let got = rd.integrate_values(&v).to_f64();
        // (3/4) * int s^8 (1-s^2) = (3/4)(2/9 - 2/11) = 1/33
        assert_abs_diff_eq!(got, 1.0 / 33.0, epsilon = 1e-16);
    }
}
