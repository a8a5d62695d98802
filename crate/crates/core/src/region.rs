//! Parameter-plane analytics: the degree-6/degree-10 polynomials behind the
//! boundary curve, the closed-form boundary `L1` with its Cardano branch, the
//! admissibility conditions, the cubic `Q1`, the discriminant factorization
//! and the case constants.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use serde::Serialize;

/// Coefficients of the degree-6 polynomial, ascending order.
pub const A1_COEFFS: [i64; 7] = [
    252_756_288,
    -470_882_880,
    170_417_232,
    11_016_224,
    -18_178_788,
    3_558_300,
    -224_785,
];

/// Coefficients of the degree-10 polynomial, ascending order.
pub const A2_COEFFS: [i64; 11] = [
    619_127_091_200,
    -710_561_935_360,
    194_617_078_784,
    70_308_920_320,
    -43_978_140_992,
    3_834_335_296,
    1_625_924_432,
    -352_127_584,
    4_233_764,
    4_104_276,
    -281_961,
];

/// Threshold `x* = (2/129)(sqrt(18673) - 64)` separating the linear and the
/// Cardano branch of `L1`. Evaluated on demand, never baked as a decimal.
pub fn x_star() -> f64 {
    2.0 / 129.0 * (18673.0_f64.sqrt() - 64.0)
}

/// Compensated Horner evaluation (error-free transformations), needed because
/// the coefficients span eleven orders of magnitude.
fn horner_compensated(coeffs: &[i64], x: f64) -> f64 {
    let mut r = coeffs[coeffs.len() - 1] as f64;
    let mut c = 0.0;
    for &a in coeffs[..coeffs.len() - 1].iter().rev() {
        let p = r * x;
        let pi = r.mul_add(x, -p);
        let s = p + a as f64;
        let bb = s - p;
        let sigma = (p - (s - bb)) + (a as f64 - bb);
        r = s;
        c = c * x + (pi + sigma);
    }
    r + c
}

/// Exact Horner over big integers: value of `sum a_i x^i` at `x = num/den`
/// as `(numerator, den^degree)`.
pub fn eval_poly_exact(coeffs: &[i64], num: i64, den: i64) -> (BigInt, BigInt) {
    assert!(den != 0, "rational denominator must be nonzero");
    let p = BigInt::from(num);
    let q = BigInt::from(den);
    // Homogeneous Horner: N = a_n p^n + a_{n-1} p^{n-1} q + ... + a_0 q^n.
    let mut acc = BigInt::from(coeffs[coeffs.len() - 1]);
    let mut qpow = BigInt::from(1);
    for &a in coeffs[..coeffs.len() - 1].iter().rev() {
        qpow *= &q;
        acc = acc * &p + BigInt::from(a) * &qpow;
    }
    (acc, q.pow((coeffs.len() - 1) as u32))
}

/// Degree-6 polynomial of the boundary closed form.
pub fn eval_a1(x: f64) -> f64 {
    horner_compensated(&A1_COEFFS, x)
}

/// Degree-10 polynomial under the square root of the boundary closed form.
pub fn eval_a2(x: f64) -> f64 {
    horner_compensated(&A2_COEFFS, x)
}

/// Exact value of the degree-6 polynomial at `num/den`.
pub fn eval_a1_exact(num: i64, den: i64) -> (BigInt, BigInt) {
    eval_poly_exact(&A1_COEFFS, num, den)
}

/// Exact value of the degree-10 polynomial at `num/den`.
pub fn eval_a2_exact(num: i64, den: i64) -> (BigInt, BigInt) {
    eval_poly_exact(&A2_COEFFS, num, den)
}

/// The cubic whose unique positive root determines the boundary curve:
/// `Q1(x) = 112(14-a)x^3 - 2(996+332a-67a^2)x^2
///          + (1552+432a-70a^2-9a^3)x - 3(4+a)(40-4a-a^2)` with `a = lambda1`.
pub fn eval_q1(lambda1: f64, x: f64) -> f64 {
    let a = lambda1;
    let c3 = 112.0 * (14.0 - a);
    let c2 = -2.0 * (996.0 + 332.0 * a - 67.0 * a * a);
    let c1 = 1552.0 + 432.0 * a - 70.0 * a * a - 9.0 * a * a * a;
    let c0 = -3.0 * (4.0 + a) * (40.0 - 4.0 * a - a * a);
    ((c3 * x + c2) * x + c1) * x + c0
}

/// Discriminant of `Q1'`, negative on `(-2, x*)`; certifies that `Q1` is
/// strictly increasing there.
pub fn q1_monotonicity_certificate(lambda1: f64) -> f64 {
    let a = lambda1;
    16.0 * (-833_136.0 + 283_680.0 * a + 95_368.0 * a * a - 39_784.0 * a * a * a
        + 3_733.0 * a * a * a * a)
}

fn real_cbrt(x: f64) -> f64 {
    x.cbrt()
}

/// Boundary curve of the classification region.
///
/// Linear branch `4 + x` for `x >= x*`; otherwise the Cardano expression,
/// with complex conjugate cube roots when `3 A2(x) < 0` (casus
/// irreducibilis: the sum of the two conjugate roots is twice the real part
/// of one of them).
pub fn eval_l1(x: f64) -> Result<f64> {
    if !(-2.0..=2.0).contains(&x) {
        return Err(Error::Domain(format!("L1 is defined on [-2, 2], got {x}")));
    }
    if x >= x_star() {
        return Ok(4.0 + x);
    }
    let a1 = eval_a1(x);
    let t = 3.0 * eval_a2(x);
    let pref = 42.0 * (14.0 - x);
    let cbrt_sum = if t >= 0.0 {
        let r = pref * t.sqrt();
        real_cbrt(a1 + r) + real_cbrt(a1 - r)
    } else {
        let z = Complex64::new(a1, pref * (-t).sqrt());
        2.0 * z.cbrt().re
    };
    Ok((2.0 + x) / (56.0 * (14.0 - x)) * (996.0 + 332.0 * x - 67.0 * x * x + cbrt_sum))
}

/// Independent root oracle for the boundary: bisection for the unique
/// `y in (0, 3(2+x)(8+x)/14]` with `Q1(y / (3(2+x))) = 0`, valid because `Q1`
/// is strictly increasing with `Q1(0) < 0 < Q1((8+x)/14)` on `(-2, x*)`.
pub fn l1_root_oracle(x: f64, tol: f64) -> Result<f64> {
    if !(-2.0 < x && x < x_star()) {
        return Err(Error::Domain(format!(
            "root oracle valid on (-2, x*), got {x}"
        )));
    }
    let scale = 3.0 * (2.0 + x);
    let mut lo = 0.0_f64;
    let mut hi = scale * (8.0 + x) / 14.0;
    let f_lo = eval_q1(x, lo / scale);
    let f_hi = eval_q1(x, hi / scale);
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::Bracket(format!(
            "Q1 bracket invalid at x={x}: Q1(0)={f_lo}, Q1((8+x)/14)={f_hi}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eval_q1(x, mid / scale) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= tol {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A parameter point of the equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamPoint {
    pub lambda1: f64,
    pub lambda2: f64,
    pub kappa: f64,
}

impl ParamPoint {
    pub fn new(lambda1: f64, lambda2: f64, kappa: f64) -> Result<ParamPoint> {
        if !(kappa > 0.0) {
            return Err(Error::Domain(format!("kappa must be positive, got {kappa}")));
        }
        Ok(ParamPoint {
            lambda1,
            lambda2,
            kappa,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionTag {
    GreenInterior,
    GreenBoundary,
    RedOnly,
    Outside,
}

impl std::fmt::Display for RegionTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RegionTag::GreenInterior => "green-interior",
            RegionTag::GreenBoundary => "green-boundary",
            RegionTag::RedOnly => "red-only",
            RegionTag::Outside => "outside",
        };
        f.write_str(s)
    }
}

/// Which of the defining inequalities passed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionWitnesses {
    pub lambda2_positive: bool,
    pub green_lambda1_range: bool,
    pub lambda2_le_l1: bool,
    pub on_l1_boundary: bool,
    pub red_lambda1_range: bool,
    pub lambda2_le_onofri_line: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionClass {
    pub tag: RegionTag,
    pub witnesses: RegionWitnesses,
}

/// Absolute tolerance used to flag boundary membership.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Classify a parameter point into the green region (classification theorem),
/// the red-only region (inequality only) or outside. Independent of `kappa`.
pub fn classify(p: ParamPoint) -> RegionClass {
    classify_with_tol(p, BOUNDARY_TOL)
}

pub fn classify_with_tol(p: ParamPoint, boundary_tol: f64) -> RegionClass {
    let (l1, l2) = (p.lambda1, p.lambda2);
    let lambda2_positive = l2 > 0.0;
    let green_lambda1_range = -2.0 < l1 && l1 <= 2.0;
    let (lambda2_le_l1, on_l1_boundary) = if green_lambda1_range {
        let boundary = eval_l1(l1).expect("lambda1 in [-2,2]");
        (
            l2 <= boundary + boundary_tol,
            (l2 - boundary).abs() <= boundary_tol,
        )
    } else {
        (false, false)
    };
    let red_lambda1_range = -4.0 < l1 && l1 <= 2.0;
    let lambda2_le_onofri_line = l2 <= 4.0 + l1;
    let witnesses = RegionWitnesses {
        lambda2_positive,
        green_lambda1_range,
        lambda2_le_l1,
        on_l1_boundary,
        red_lambda1_range,
        lambda2_le_onofri_line,
    };
    let tag = if lambda2_positive && green_lambda1_range && lambda2_le_l1 {
        if on_l1_boundary {
            RegionTag::GreenBoundary
        } else {
            RegionTag::GreenInterior
        }
    } else if lambda2_positive && red_lambda1_range && lambda2_le_onofri_line {
        RegionTag::RedOnly
    } else {
        RegionTag::Outside
    };
    RegionClass { tag, witnesses }
}

/// Report on the two admissibility conditions and the auxiliary lower bounds
/// used in their implication chain.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConditionReport {
    /// `14 lambda2 <= 3(8+lambda1)(2+lambda1)`
    pub cond1: bool,
    pub cond1_slack: f64,
    /// `8 lambda2 < 7(6-lambda1)(2+lambda1)`
    pub cond2: bool,
    pub cond2_slack: f64,
    /// `(1/7)(2+lambda1)(198-61 lambda1)`
    pub aux_bound1: f64,
    /// `(3/7)(2+lambda1)(94-25 lambda1)`
    pub aux_bound2: f64,
}

pub fn check_conditions(p: ParamPoint) -> Result<ConditionReport> {
    let (a, l2) = (p.lambda1, p.lambda2);
    if !(-2.0 < a && a <= 2.0) {
        return Err(Error::Domain(format!(
            "conditions defined for -2 < lambda1 <= 2, got {a}"
        )));
    }
    let cond1_slack = 3.0 * (8.0 + a) * (2.0 + a) - 14.0 * l2;
    let cond2_slack = 7.0 * (6.0 - a) * (2.0 + a) - 8.0 * l2;
    Ok(ConditionReport {
        cond1: cond1_slack >= 0.0,
        cond1_slack,
        cond2: cond2_slack > 0.0,
        cond2_slack,
        aux_bound1: (2.0 + a) * (198.0 - 61.0 * a) / 7.0,
        aux_bound2: 3.0 / 7.0 * (2.0 + a) * (94.0 - 25.0 * a),
    })
}

/// The auxiliary slack of the second chain inequality,
/// `9(6-lambda1)(2+lambda1) - 8 lambda2`.
pub fn aux_slack2(p: ParamPoint) -> f64 {
    9.0 * (6.0 - p.lambda1) * (2.0 + p.lambda1) - 8.0 * p.lambda2
}

/// Discriminant of the quadratic trinomial from the boundary-case analysis,
/// in both printed and `Q1`-factored form. The two must agree; both vanish on
/// the boundary curve.
pub fn discriminant(p: ParamPoint) -> Result<(f64, f64)> {
    let (a, l2) = (p.lambda1, p.lambda2);
    if !(-2.0 < a && a < x_star()) || !(l2 > 0.0) {
        return Err(Error::Domain(format!(
            "discriminant defined for -2 < lambda1 < x*, lambda2 > 0; got ({a}, {l2})"
        )));
    }
    let t1 = 2.0 - a - (2.0 + a) * (4.0 + a - l2) / l2;
    let t2 = 8.0 + a - 14.0 * l2 / (3.0 * (2.0 + a));
    let t3 = 4.0 / 3.0 * (2.0 - a)
        + (2.0 + a) * (4.0 + a - l2) / (8.0 * l2 * l2) * (9.0 * (6.0 - a) * (2.0 + a) - 8.0 * l2);
    let direct = 9.0 * t1 * t1 - 4.0 * t2 * t3;
    let factored = 3.0 * (2.0 + a) * (2.0 + a) / (2.0 * l2 * l2) * eval_q1(a, l2 / (3.0 * (2.0 + a)));
    Ok((direct, factored))
}

/// The free constant of the master identity, chosen per case: `5/3` on the
/// linear-branch range, otherwise `5/3 - 2(2+l1)(4+l1-l2)/((2-l1) l2)`.
pub fn case_constant_c(p: ParamPoint) -> Result<f64> {
    let class = classify(p);
    if !matches!(
        class.tag,
        RegionTag::GreenInterior | RegionTag::GreenBoundary
    ) {
        return Err(Error::Domain(format!(
            "case constant defined on the green region, got {:?}",
            class.tag
        )));
    }
    let (a, l2) = (p.lambda1, p.lambda2);
    if a >= x_star() {
        return Ok(5.0 / 3.0);
    }
    if a == 2.0 {
        return Err(Error::Singular(
            "case-2 constant has a (2 - lambda1) denominator".into(),
        ));
    }
    Ok(5.0 / 3.0 - 2.0 * (2.0 + a) * (4.0 + a - l2) / ((2.0 - a) * l2))
}

/// One row of a parameter-plane grid sweep.
#[derive(Debug, Clone, Serialize)]
pub struct RegionRow {
    pub lambda1: f64,
    pub lambda2: f64,
    pub class: RegionTag,
    pub l1: f64,
    pub cond1: bool,
    pub cond2: bool,
    pub discriminant: f64,
}

/// Classify a full rectangular grid; rows ordered lambda1-major.
pub fn grid(
    n1: usize,
    n2: usize,
    lambda1_range: (f64, f64),
    lambda2_range: (f64, f64),
    kappa: f64,
) -> Vec<RegionRow> {
    let mut rows = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        let l1 = if n1 == 1 {
            lambda1_range.0
        } else {
            lambda1_range.0 + (lambda1_range.1 - lambda1_range.0) * i as f64 / (n1 - 1) as f64
        };
        for j in 0..n2 {
            let l2 = if n2 == 1 {
                lambda2_range.0
            } else {
                lambda2_range.0 + (lambda2_range.1 - lambda2_range.0) * j as f64 / (n2 - 1) as f64
            };
            let p = ParamPoint {
                lambda1: l1,
                lambda2: l2,
                kappa,
            };
            let class = classify(p).tag;
            let l1_val = if (-2.0..=2.0).contains(&l1) {
                eval_l1(l1).unwrap()
            } else {
                f64::NAN
            };
            let cond1 = 14.0 * l2 <= 3.0 * (8.0 + l1) * (2.0 + l1);
            let cond2 = 8.0 * l2 < 7.0 * (6.0 - l1) * (2.0 + l1);
            let disc = discriminant(p).map(|(_, f)| f).unwrap_or(f64::NAN);
            rows.push(RegionRow {
                lambda1: l1,
                lambda2: l2,
                class,
                l1: l1_val,
                cond1,
                cond2,
                discriminant: disc,
            });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn a1_values() {
        assert_eq!(eval_a1(0.0), 252_756_288.0);
        assert_eq!(eval_a1(1.0), -51_538_409.0);
        assert_eq!(eval_a1(2.0), -110_592_000.0);
    }

    #[test]
    fn a1_a2_exact_integer_oracle() {
        let (n, d) = eval_a1_exact(1, 1);
        assert_eq!(n, BigInt::from(-51_538_409_i64));
        assert_eq!(d, BigInt::from(1));
        let (n, d) = eval_a1_exact(2, 1);
        assert_eq!(n, BigInt::from(-110_592_000_i64));
        assert_eq!(d, BigInt::from(1));
        let (n, d) = eval_a1_exact(-2, 1);
        assert_eq!(n, BigInt::from(1_368_948_736_i64));
        assert_eq!(d, BigInt::from(1));
        let (n, d) = eval_a1_exact(1, 2);
        assert_eq!(n, BigInt::from(3_857_132_439_i64));
        assert_eq!(d, BigInt::from(64));
        let (n, _) = eval_a2_exact(0, 1);
        assert_eq!(n, BigInt::from(619_127_091_200_i64));
        let (n, d) = eval_a2_exact(1, 1);
        assert_eq!(n, BigInt::from(134_629_202_175_i64));
        assert_eq!(d, BigInt::from(1));
        let (n, d) = eval_a2_exact(3, 4);
        assert_eq!(n, BigInt::from(222_903_519_647_992_799_i64));
        assert_eq!(d, BigInt::from(1_048_576));
    }

    #[test]
    fn float_matches_exact_on_rational_grid() {
        // Horner with compensation vs exact big-integer evaluation.
        for k in -40..=40 {
            let x = k as f64 / 20.0;
            let (n, d) = eval_a2_exact(k, 20);
            let exact = bigint_ratio_to_f64(&n, &d);
            let rel = (eval_a2(x) - exact).abs() / exact.abs().max(1.0);
            assert!(rel < 1e-14, "x={x}: rel={rel}");
        }
    }

    fn bigint_ratio_to_f64(n: &BigInt, d: &BigInt) -> f64 {
        use std::str::FromStr;
        let nf = f64::from_str(&n.to_string()).unwrap();
        let df = f64::from_str(&d.to_string()).unwrap();
        nf / df
    }

    #[test]
    fn a2_positive_on_domain() {
        // sign scan used by the branch logic: positive on all of [-2, 2]
        for k in -200..=200 {
            let (n, _) = eval_a2_exact(k, 100);
            assert!(n > BigInt::from(0), "A2({}/100) <= 0", k);
        }
    }

    #[test]
    fn l1_endpoints_and_linear_branch() {
        assert_eq!(eval_l1(2.0).unwrap(), 6.0);
        assert_abs_diff_eq!(eval_l1(-2.0).unwrap(), 0.0, epsilon = 1e-12);
        assert_eq!(eval_l1(1.5).unwrap(), 5.5);
        assert!(eval_l1(2.1).is_err());
        assert!(eval_l1(-2.0000001).is_err());
    }

    #[test]
    fn l1_reference_values() {
        // 50-digit Cardano reference evaluations.
        assert_abs_diff_eq!(eval_l1(0.0).unwrap(), 3.0487127572808945, epsilon = 1e-12);
        assert_abs_diff_eq!(eval_l1(-1.0).unwrap(), 1.3474454396847332, epsilon = 1e-12);
        assert_abs_diff_eq!(eval_l1(0.5).unwrap(), 3.9845132738260058, epsilon = 1e-12);
        assert_abs_diff_eq!(eval_l1(1.0).unwrap(), 4.908509158175587, epsilon = 1e-12);
        assert_abs_diff_eq!(eval_l1(-1.5).unwrap(), 0.6242119453581598, epsilon = 1e-12);
    }

    #[test]
    fn l1_matches_root_oracle() {
        for k in 0..100 {
            let x = -2.0 + 1e-6 + (x_star() - 2e-6 + 2.0) * k as f64 / 99.0;
            let closed = eval_l1(x).unwrap();
            let root = l1_root_oracle(x, 1e-12).unwrap();
            assert!(
                (closed - root).abs() <= 1e-9 * closed.max(1.0),
                "x={x}: closed={closed} root={root}"
            );
        }
    }

    #[test]
    fn l1_continuity_at_branch_point() {
        let xs = x_star();
        assert!((eval_l1(xs - 1e-8).unwrap() - (4.0 + xs)).abs() <= 1e-6);
    }

    #[test]
    fn l1_near_left_endpoint() {
        let v = eval_l1(-2.0 + 1e-6).unwrap();
        assert!(v > 0.0 && v < 1e-3, "L1(-2+1e-6) = {v}");
    }

    #[test]
    fn q1_special_values() {
        // Q1((8+a)/14) = (6/49)(20-a)^2
        for &a in &[-1.9, 0.0, 1.0, 1.1, 2.0] {
            let got = eval_q1(a, (8.0 + a) / 14.0);
            let want = 6.0 / 49.0 * (20.0 - a) * (20.0 - a);
            assert_abs_diff_eq!(got, want, epsilon = 1e-9);
        }
        // constant term at lambda1 = 0
        assert_eq!(eval_q1(0.0, 0.0), -480.0);
        // vanishes at the boundary root
        for &a in &[-1.0, 0.0, 1.0] {
            let l1v = eval_l1(a).unwrap();
            assert!(eval_q1(a, l1v / (3.0 * (2.0 + a))).abs() < 1e-9);
        }
    }

    #[test]
    fn q1_strictly_increasing_sample() {
        // monotone sample check over the certified range
        let mut rng = 987_654_321_u64;
        let mut next = || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..10_000 {
            let a = -2.0 + next() * (x_star() + 2.0);
            let x1 = next() * 2.0;
            let x2 = next() * 2.0;
            let (lo, hi) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
            if hi - lo > 1e-12 {
                assert!(
                    eval_q1(a, lo) < eval_q1(a, hi),
                    "Q1 not increasing at a={a}: ({lo}, {hi})"
                );
            }
        }
    }

    #[test]
    fn monotonicity_certificate_negative() {
        assert_eq!(q1_monotonicity_certificate(0.0), 16.0 * -833136.0);
        assert!(q1_monotonicity_certificate(1.1) < 0.0);
        for k in 0..1000 {
            let a = -2.0 + 1e-9 + (x_star() - 2e-9 + 2.0) * k as f64 / 999.0;
            assert!(q1_monotonicity_certificate(a) < 0.0, "a={a}");
        }
    }

    #[test]
    fn classify_examples() {
        let p = |l1, l2| ParamPoint {
            lambda1: l1,
            lambda2: l2,
            kappa: 1.0,
        };
        assert_eq!(classify(p(2.0, 6.0)).tag, RegionTag::GreenBoundary);
        assert_eq!(classify(p(-3.0, 0.5)).tag, RegionTag::RedOnly);
        assert_eq!(classify(p(0.0, 10.0)).tag, RegionTag::Outside);
        assert_eq!(classify(p(1.0, 3.0)).tag, RegionTag::GreenInterior);
        assert_eq!(classify(p(0.0, -0.5)).tag, RegionTag::Outside);
        // red strip above the boundary curve but under the line
        assert_eq!(classify(p(0.0, 3.5)).tag, RegionTag::RedOnly);
    }

    #[test]
    fn classify_kappa_invariant() {
        for &(l1, l2) in &[(2.0, 6.0), (0.0, 3.0), (-3.0, 0.5), (1.0, 7.0)] {
            let a = classify(ParamPoint {
                lambda1: l1,
                lambda2: l2,
                kappa: 1.0,
            });
            let b = classify(ParamPoint {
                lambda1: l1,
                lambda2: l2,
                kappa: 37.5,
            });
            assert_eq!(a.tag, b.tag);
        }
    }

    #[test]
    fn conditions_examples() {
        let r = check_conditions(ParamPoint {
            lambda1: 2.0,
            lambda2: 6.0,
            kappa: 1.0,
        })
        .unwrap();
        assert!(r.cond1);
        assert_eq!(r.cond1_slack, 120.0 - 84.0);
        let r = check_conditions(ParamPoint {
            lambda1: 0.0,
            lambda2: 4.0,
            kappa: 1.0,
        })
        .unwrap();
        assert!(!r.cond1, "56 > 48");
        assert!(eval_l1(0.0).unwrap() < 24.0 / 7.0);
    }

    #[test]
    fn conditions_hold_on_green_grid() {
        // cond1 on the whole green region, and the aux lower bounds
        for i in 0..50 {
            let a = -2.0 + 1e-6 + (4.0 - 2e-6) * i as f64 / 49.0;
            let top = eval_l1(a).unwrap();
            for j in 1..=20 {
                let l2 = top * j as f64 / 20.0;
                let p = ParamPoint {
                    lambda1: a,
                    lambda2: l2,
                    kappa: 1.0,
                };
                let r = check_conditions(p).unwrap();
                assert!(r.cond1, "cond1 fails at ({a}, {l2})");
                assert!(r.cond2, "cond2 fails at ({a}, {l2})");
                // implication chain: slack lower bounds hold under cond1
                assert!(r.cond2_slack >= r.aux_bound1);
                assert!(aux_slack2(p) >= r.aux_bound2);
            }
        }
    }

    #[test]
    fn discriminant_examples() {
        let p = |l1, l2| ParamPoint {
            lambda1: l1,
            lambda2: l2,
            kappa: 1.0,
        };
        let (d, f) = discriminant(p(0.0, 1.0)).unwrap();
        assert!(d < 0.0 && f < 0.0);
        assert_abs_diff_eq!(d, f, epsilon = 1e-9 * d.abs());
        let (d, f) = discriminant(p(0.0, 4.0)).unwrap();
        assert!(d > 0.0 && f > 0.0);
        assert_abs_diff_eq!(d, f, epsilon = 1e-9 * d.abs());
        for &a in &[-1.5, -0.5, 0.7, 1.1] {
            let l2 = eval_l1(a).unwrap();
            let (d, f) = discriminant(p(a, l2)).unwrap();
            assert!(d.abs() < 1e-7, "direct at boundary: {d}");
            assert!(f.abs() < 1e-7, "factored at boundary: {f}");
        }
        assert!(discriminant(p(1.5, 1.0)).is_err());
    }

    #[test]
    fn case_constants() {
        let p = |l1, l2| ParamPoint {
            lambda1: l1,
            lambda2: l2,
            kappa: 1.0,
        };
        assert_eq!(case_constant_c(p(1.5, 5.0)).unwrap(), 5.0 / 3.0);
        assert_abs_diff_eq!(case_constant_c(p(0.0, 3.0)).unwrap(), 5.0/3.0 - 2.0*2.0*1.0/(2.0*3.0), epsilon = 1e-15);
        assert_abs_diff_eq!(
            case_constant_c(p(0.0, 2.0)).unwrap(),
            -1.0 / 3.0,
            epsilon = 1e-15
        );
        // case-2 value stays below 5/3 when lambda2 < 4 + lambda1
        for &a in &[-1.0, 0.0, 1.0] {
            for j in 1..10 {
                let l2 = eval_l1(a).unwrap() * j as f64 / 10.0;
                assert!(case_constant_c(p(a, l2)).unwrap() < 5.0 / 3.0);
            }
        }
        assert!(case_constant_c(p(0.0, 9.0)).is_err());
    }

    #[test]
    fn l1_below_linear_bound() {
        for k in 0..=400 {
            let x = -2.0 + 4.0 * k as f64 / 400.0;
            let v = eval_l1(x).unwrap();
            assert!(v <= 4.0 + x + 1e-9, "x={x}");
            if x >= x_star() {
                assert_eq!(v, 4.0 + x);
            } else {
                assert!(v < 4.0 + x - 1e-9 * (2.0 + x).max(1e-3), "x={x} v={v}");
            }
        }
    }
}
