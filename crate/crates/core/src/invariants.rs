//! Scalar contractions of the invariant tensors and the differential
//! identities that link them.
//!
//! For axisymmetric fields every tensor in play is diagonal in the
//! radial/tangential frame, so each contraction reduces to per-node scalars:
//! the trace-free combination `E` has radial eigenvalue
//! `e_r = h_r - |grad u|^2 - (1/4)(lap u - |grad u|^2)` (tangential
//! `-e_r/3`), the vector `F` is `phi_F grad s` with
//! `phi_F = (lap u)' - (3/2) lap u u' - (1/2)|grad u|^2 u' + 4 kappa u'`
//! up to the `grad s` factor, and the fourth-order scalar is
//! `G = lap^2 u - (3/2)(|grad u|^2 + lap u)^2 + 6 kappa |grad u|^2
//! + 4 kappa lap u`.
//!
//! Two of the divergence identities hold for every smooth field; the
//! gradient identity for `G` and the master identity additionally use the
//! equation, so they hold on solutions only.

use crate::scalar::Real;
use crate::sphere::{AxiField, Rule};

/// Per-node values of every scalar contraction needed by the identities.
///
/// `r_def` is the curvature defect `Ric(grad u, grad u) - 3 kappa |grad u|^2`;
/// it vanishes identically on the round sphere and is kept as an explicit
/// field so the reports stay meaningful if the geometry is ever generalized.
#[derive(Debug, Clone)]
pub struct TensorScalars<S: Real = f64> {
    pub du: Vec<S>,
    pub lap_u: Vec<S>,
    pub grad2_u: Vec<S>,
    pub bilap_u: Vec<S>,
    pub e_r: Vec<S>,
    pub e_t: Vec<S>,
    pub e_sq: Vec<S>,
    pub e_scal: Vec<S>,
    pub ei_sq: Vec<S>,
    pub phi_f: Vec<S>,
    pub f_scal: Vec<S>,
    pub fi_sq: Vec<S>,
    pub eifi: Vec<S>,
    pub g: Vec<S>,
    pub r_def: Vec<S>,
    pub l_sq: Vec<S>,
    pub el: Vec<S>,
}

/// Compute all contractions from the spectral primitives.
pub fn tensor_scalars<S: Real>(rule: &Rule<S>, u: &AxiField<S>) -> TensorScalars<S> {
    let n = rule.len();
    let kappa = u.kappa;
    let du = rule.deriv_values(u);
    let lap = rule.lap(u);
    let bilap = rule.bilap(u);
    let grad2 = rule.grad2(u);
    let (hr, ht) = rule.hess_eigs(u);

    let quarter = S::from_f64(0.25);
    let mut out = TensorScalars {
        du,
        lap_u: lap.values().to_vec(),
        grad2_u: grad2.values().to_vec(),
        bilap_u: bilap.values().to_vec(),
        e_r: vec![S::zero(); n],
        e_t: vec![S::zero(); n],
        e_sq: vec![S::zero(); n],
        e_scal: vec![S::zero(); n],
        ei_sq: vec![S::zero(); n],
        phi_f: vec![S::zero(); n],
        f_scal: vec![S::zero(); n],
        fi_sq: vec![S::zero(); n],
        eifi: vec![S::zero(); n],
        g: vec![S::zero(); n],
        r_def: vec![S::zero(); n],
        l_sq: vec![S::zero(); n],
        el: vec![S::zero(); n],
    };

    let dlap = rule.deriv_values(&lap);
    for i in 0..n {
        let s = rule.nodes()[i];
        let (du_i, lap_i, g2_i, bl_i) = (out.du[i], out.lap_u[i], out.grad2_u[i], out.bilap_u[i]);
        let trace_part = quarter * (lap_i - g2_i);
        let e_r = hr.values()[i] - g2_i - trace_part;
        let e_t = ht.values()[i] - trace_part;
        out.e_r[i] = e_r;
        out.e_t[i] = e_t;
        out.e_sq[i] = S::from_f64(4.0 / 3.0) * e_r * e_r;
        out.e_scal[i] = e_r * g2_i;
        out.ei_sq[i] = e_r * e_r * g2_i;
        let phi_f = dlap[i] - S::from_f64(1.5) * lap_i * du_i - S::from_f64(0.5) * g2_i * du_i
            + S::from_f64(4.0) * kappa * du_i;
        out.phi_f[i] = phi_f;
        let w = kappa * (S::one() - s * s);
        out.f_scal[i] = w * phi_f * du_i;
        out.fi_sq[i] = w * phi_f * phi_f;
        out.eifi[i] = e_r * out.f_scal[i];
        let sum = g2_i + lap_i;
        out.g[i] = bl_i - S::from_f64(1.5) * sum * sum
            + S::from_f64(6.0) * kappa * g2_i
            + S::from_f64(4.0) * kappa * lap_i;
        out.l_sq[i] = S::from_f64(0.75) * g2_i * g2_i;
        out.el[i] = out.e_scal[i];
    }
    out
}

fn max_abs<S: Real>(v: &[S]) -> f64 {
    v.iter().map(|x| x.abs().to_f64()).fold(0.0, f64::max)
}

/// Residual of the divergence identity for the `E`-contraction vector:
/// `div(E_i) = E_ij E^ij + R + (1/2) E + (3/4) F`. Holds for every smooth
/// field; returns the max pointwise residual.
pub fn check_div_e<S: Real>(rule: &Rule<S>, u: &AxiField<S>) -> f64 {
    let t = tensor_scalars(rule, u);
    let phi: Vec<S> = (0..rule.len()).map(|i| t.e_r[i] * t.du[i]).collect();
    let phi_field = rule.field_from_values(u.kappa, phi);
    let div = rule.div_radial(&phi_field);
    let res: Vec<S> = (0..rule.len())
        .map(|i| {
            div.values()[i]
                - (t.e_sq[i]
                    + t.r_def[i]
                    + S::from_f64(0.5) * t.e_scal[i]
                    + S::from_f64(0.75) * t.f_scal[i])
        })
        .collect();
    max_abs(&res)
}

/// Residual of the divergence identity for the `F` vector:
/// `div(F_i) = -E - (3/2) F + G`. Holds for every smooth field.
pub fn check_div_f<S: Real>(rule: &Rule<S>, u: &AxiField<S>) -> f64 {
    let t = tensor_scalars(rule, u);
    let phi_field = rule.field_from_values(u.kappa, t.phi_f.clone());
    let div = rule.div_radial(&phi_field);
    let res: Vec<S> = (0..rule.len())
        .map(|i| {
            div.values()[i]
                - (-t.e_scal[i] - S::from_f64(1.5) * t.f_scal[i] + t.g[i])
        })
        .collect();
    max_abs(&res)
}

/// Residual of the gradient identity for `G` (radial component); uses the
/// equation at `(lambda1, lambda2)`, so it is a solution-level check.
pub fn check_grad_g<S: Real>(rule: &Rule<S>, u: &AxiField<S>, lambda1: f64, lambda2: f64) -> f64 {
    let t = tensor_scalars(rule, u);
    let kappa = u.kappa;
    let g_field = rule.field_from_values(kappa, t.g.clone());
    let dg = rule.deriv_values(&g_field);
    let (l1, l2) = (S::from_f64(lambda1), S::from_f64(lambda2));
    let res: Vec<S> = (0..rule.len())
        .map(|i| {
            let rhs = -S::from_f64(3.0)
                * (t.grad2_u[i] + t.lap_u[i])
                * (S::from_f64(2.0) * t.e_r[i] * t.du[i] + t.phi_f[i])
                + S::from_f64(12.0) * kappa * t.e_r[i] * t.du[i]
                + (S::from_f64(4.0) + l1) * kappa * t.phi_f[i]
                + S::from_f64(4.0) * t.g[i] * t.du[i]
                - (S::one() - l1 * S::from_f64(0.5))
                    * (t.grad2_u[i] - S::from_f64(5.0) * t.lap_u[i])
                    * kappa
                    * t.du[i]
                + S::from_f64(4.0) * (l2 - l1 - S::from_f64(4.0)) * kappa * kappa * t.du[i];
            dg[i] - rhs
        })
        .collect();
    max_abs(&res)
}

/// Both sides of the master identity for the combined vector field, per
/// node. The left side is `e^u div(e^{-u} V) = div V - <grad u, V>` with
/// `V = [-(2/3)(|grad u|^2 + 7 lap u - 2(8+l1) kappa) e_r
///       + (3|grad u|^2 + lap u) phi_F - G u' + c(2-l1) kappa |grad u|^2 u']
///      grad s`.
fn main_identity_sides<S: Real>(
    rule: &Rule<S>,
    u: &AxiField<S>,
    lambda1: f64,
    lambda2: f64,
    c: f64,
    drop_e_sq_term: bool,
) -> (Vec<S>, Vec<S>) {
    let t = tensor_scalars(rule, u);
    let kappa = u.kappa;
    let (l1, l2, cc) = (
        S::from_f64(lambda1),
        S::from_f64(lambda2),
        S::from_f64(c),
    );
    let two_thirds = S::from_f64(2.0 / 3.0);
    let n = rule.len();

    let phi_v: Vec<S> = (0..n)
        .map(|i| {
            let coeff =
                t.grad2_u[i] + S::from_f64(7.0) * t.lap_u[i] - S::from_f64(2.0) * (S::from_f64(8.0) + l1) * kappa;
            -two_thirds * coeff * t.e_r[i] * t.du[i]
                + (S::from_f64(3.0) * t.grad2_u[i] + t.lap_u[i]) * t.phi_f[i]
                - t.g[i] * t.du[i]
                + cc * (S::from_f64(2.0) - l1) * kappa * t.grad2_u[i] * t.du[i]
        })
        .collect();
    let phi_field = rule.field_from_values(kappa, phi_v.clone());
    let div = rule.div_radial(&phi_field);
    let lhs: Vec<S> = (0..n)
        .map(|i| {
            let s = rule.nodes()[i];
            div.values()[i] - kappa * (S::one() - s * s) * t.du[i] * phi_v[i]
        })
        .collect();

    let rhs: Vec<S> = (0..n)
        .map(|i| {
            let coeff =
                t.grad2_u[i] + S::from_f64(7.0) * t.lap_u[i] - S::from_f64(2.0) * (S::from_f64(8.0) + l1) * kappa;
            let e_sq_term = if drop_e_sq_term { S::zero() } else { t.e_sq[i] };
            // (F + (2/3)E)_i (F + (2/3)E)^i expanded
            let cross = t.fi_sq[i]
                + S::from_f64(4.0 / 3.0) * t.eifi[i]
                + S::from_f64(4.0 / 9.0) * t.ei_sq[i];
            -two_thirds * coeff * (e_sq_term + t.r_def[i])
                + cross
                - S::from_f64(16.0 / 9.0) * t.ei_sq[i]
                + S::from_f64(0.5)
                    * (S::from_f64(2.0) - l1)
                    * kappa
                    * ((S::one() + cc) * t.grad2_u[i] * t.grad2_u[i]
                        - (S::from_f64(5.0) - S::from_f64(3.0) * cc) * t.grad2_u[i] * t.lap_u[i])
                + S::from_f64(2.0) * (S::from_f64(1.0 / 3.0) + cc) * (S::from_f64(2.0) - l1) * kappa
                    * t.e_scal[i]
                + S::from_f64(4.0) * (S::from_f64(4.0) + l1 - l2) * kappa * kappa * t.grad2_u[i]
        })
        .collect();
    (lhs, rhs)
}

/// Max pointwise residual of the master identity at the given free constant.
pub fn check_main_identity<S: Real>(
    rule: &Rule<S>,
    u: &AxiField<S>,
    lambda1: f64,
    lambda2: f64,
    c: f64,
) -> f64 {
    let (lhs, rhs) = main_identity_sides(rule, u, lambda1, lambda2, c, false);
    lhs.iter()
        .zip(&rhs)
        .map(|(a, b)| (*a - *b).abs().to_f64())
        .fold(0.0, f64::max)
}

/// Sensitivity control: the same residual with the `E_ij E^ij` term dropped
/// from the right side. A healthy harness sees this blow up on nontrivial
/// solutions.
pub fn check_main_identity_mutated<S: Real>(
    rule: &Rule<S>,
    u: &AxiField<S>,
    lambda1: f64,
    lambda2: f64,
    c: f64,
) -> f64 {
    let (lhs, rhs) = main_identity_sides(rule, u, lambda1, lambda2, c, true);
    lhs.iter()
        .zip(&rhs)
        .map(|(a, b)| (*a - *b).abs().to_f64())
        .fold(0.0, f64::max)
}

/// Integral of the left side of the master identity; vanishes for solutions
/// by the divergence theorem.
pub fn main_identity_integral<S: Real>(
    rule: &Rule<S>,
    u: &AxiField<S>,
    lambda1: f64,
    lambda2: f64,
    c: f64,
) -> f64 {
    let (lhs, _) = main_identity_sides(rule, u, lambda1, lambda2, c, false);
    rule.integrate_values(&lhs).to_f64()
}

/// Min over nodes of `|grad u|^2 E_ij E^ij - (4/3) E_i E^i`; nonnegative by
/// Cauchy-Schwarz, identically zero in the axisymmetric reduction.
pub fn gradient_cs_gap<S: Real>(rule: &Rule<S>, u: &AxiField<S>) -> f64 {
    let t = tensor_scalars(rule, u);
    (0..rule.len())
        .map(|i| (t.grad2_u[i] * t.e_sq[i] - S::from_f64(4.0 / 3.0) * t.ei_sq[i]).to_f64())
        .fold(f64::INFINITY, f64::min)
}
