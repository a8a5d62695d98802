//! Double-double arithmetic: an unevaluated sum of two `f64`s giving ~31
//! significant digits.
//!
//! The spectral verification batteries differentiate steep fields four times;
//! plain `f64` node values cannot support the required residual tolerances
//! (the fourth-order multiplier amplifies coefficient-level rounding by
//! `l^4`). Fields sampled and transformed in `Dd` keep the batteries well
//! inside tolerance.
//!
//! Algorithms follow the classic error-free transformations (two_sum,
//! two_prod via FMA) and the exp/log schemes of the QD library of Hida, Li
//! and Bailey.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Double-double number: value = `hi + lo`, with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// ln 2 to double-double accuracy.
    pub const LN2: Dd = Dd {
        hi: 0.693_147_180_559_945_3,
        lo: 2.319_046_813_846_299_6e-17,
    };
    /// Unit roundoff of the format, ~2^-104.
    pub const EPSILON: f64 = 4.93e-32;

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn sqr(self) -> Dd {
        let (p, mut e) = two_prod(self.hi, self.hi);
        e += 2.0 * self.hi * self.lo;
        e += self.lo * self.lo;
        let (s, lo) = quick_two_sum(p, e);
        Dd { hi: s, lo }
    }

    /// Exact scaling by a power of two.
    #[inline]
    pub fn mul_pwr2(self, k: f64) -> Dd {
        Dd {
            hi: self.hi * k,
            lo: self.lo * k,
        }
    }

    pub fn powi(self, n: i32) -> Dd {
        if n == 0 {
            return Dd::ONE;
        }
        let mut base = if n < 0 { Dd::ONE / self } else { self };
        let mut k = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base.sqr();
            k >>= 1;
        }
        acc
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        debug_assert!(self.hi > 0.0, "sqrt of negative double-double");
        // Karp's method: one Newton correction on the f64 square root.
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let d = self - Dd::from_f64(ax).sqr();
        Dd::from_f64(ax) + Dd::from_f64(d.hi * x * 0.5)
    }

    /// `e^self` to full double-double accuracy (QD-style: range reduction by
    /// ln 2, scaled Taylor series, repeated squaring).
    pub fn exp(self) -> Dd {
        const INV_K: f64 = 1.0 / 512.0;
        if self.hi <= -709.0 {
            return Dd::ZERO;
        }
        if self.hi >= 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ONE;
        }
        let m = (self.hi / Dd::LN2.hi + 0.5).floor();
        let r = (self - Dd::LN2 * Dd::from_f64(m)).mul_pwr2(INV_K);
        // Taylor for e^r - 1 on |r| <= ln2/1024.
        let mut p = r.sqr();
        let mut s = r + p.mul_pwr2(0.5);
        p = p * r;
        let mut fact = 6.0;
        let mut k = 4.0;
        let thresh = INV_K * Dd::EPSILON;
        loop {
            let t = p / Dd::from_f64(fact);
            s = s + t;
            if t.hi.abs() <= thresh {
                break;
            }
            p = p * r;
            fact *= k;
            k += 1.0;
        }
        // Undo the 2^-9 scaling: (1+s) -> (1+s)^512 via s' = 2s + s^2.
        for _ in 0..9 {
            s = s.mul_pwr2(2.0) + s.sqr();
        }
        s = s + Dd::ONE;
        s.mul_pwr2(2.0f64.powi(m as i32))
    }

    /// Natural logarithm via Newton iteration on `exp`.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0, "ln of non-positive double-double");
        if self == Dd::ONE {
            return Dd::ZERO;
        }
        // f64 seed, two Newton steps: x <- x + a e^{-x} - 1.
        let mut x = Dd::from_f64(self.hi.ln());
        for _ in 0..2 {
            x = x + self * (-x).exp() - Dd::ONE;
        }
        x
    }

    pub fn cosh(self) -> Dd {
        let e = self.exp();
        (e + Dd::ONE / e).mul_pwr2(0.5)
    }

    pub fn sinh(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        if self.hi.abs() > 0.05 {
            let e = self.exp();
            return (e - Dd::ONE / e).mul_pwr2(0.5);
        }
        // Taylor for small arguments to dodge cancellation.
        let x2 = self.sqr();
        let mut term = self;
        let mut s = self;
        let mut k = 1.0;
        loop {
            term = term * x2 / Dd::from_f64((k + 1.0) * (k + 2.0));
            s = s + term;
            if term.hi.abs() <= s.hi.abs() * Dd::EPSILON {
                return s;
            }
            k += 2.0;
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p, mut e) = two_prod(self.hi, rhs.hi);
        e += self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, rhs: Dd) -> Dd {
        // Long division with two corrections.
        let q1 = self.hi / rhs.hi;
        let mut r = self - rhs * Dd::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        r = r - rhs * Dd::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e + q3)
    }
}

impl AddAssign for Dd {
    #[inline]
    fn add_assign(&mut self, rhs: Dd) {
        *self = *self + rhs;
    }
}
impl SubAssign for Dd {
    #[inline]
    fn sub_assign(&mut self, rhs: Dd) {
        *self = *self - rhs;
    }
}
impl MulAssign for Dd {
    #[inline]
    fn mul_assign(&mut self, rhs: Dd) {
        *self = *self * rhs;
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}
