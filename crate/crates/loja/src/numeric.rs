//! Fixed-point complex arithmetic for curve coefficients that are not
//! Gaussian rationals (k-th roots with a unit phase, float literals).
//!
//! Values are `(re + im*i) / 2^PREC` with `PREC = 192` fractional bits,
//! far below the 1e-9 relative zero tolerance used when grouping series
//! coefficients. Roots are found by integer or complex Newton iteration
//! seeded from f64.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::LojaError;
use crate::poly::GaussianRational;
use crate::Result;

/// Fractional bits of the fixed-point representation.
pub const PREC: u32 = 192;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedComplex {
    pub re: BigInt,
    pub im: BigInt,
}

fn one_scaled() -> BigInt {
    BigInt::from(1) << PREC
}

fn scale_rational(r: &BigRational) -> BigInt {
    (r.numer() << PREC) / r.denom()
}

impl FixedComplex {
    pub fn zero() -> Self {
        FixedComplex {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    pub fn one() -> Self {
        FixedComplex {
            re: one_scaled(),
            im: BigInt::zero(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        FixedComplex {
            re: scale_rational(r),
            im: BigInt::zero(),
        }
    }

    pub fn from_gaussian(g: &GaussianRational) -> Self {
        FixedComplex {
            re: scale_rational(&g.re),
            im: scale_rational(&g.im),
        }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        let scale = 2f64.powi(62);
        let lift = |x: f64| {
            let big = BigInt::from((x * scale) as i128);
            (big << PREC) >> 62
        };
        FixedComplex {
            re: lift(re),
            im: lift(im),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        FixedComplex {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        FixedComplex {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    pub fn neg(&self) -> Self {
        FixedComplex {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        FixedComplex {
            re: (&self.re * &other.re - &self.im * &other.im) >> PREC,
            im: (&self.re * &other.im + &self.im * &other.re) >> PREC,
        }
    }

    pub fn conj(&self) -> Self {
        FixedComplex {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// |z|^2 at the same 2^PREC scale.
    pub fn abs2(&self) -> BigInt {
        (&self.re * &self.re + &self.im * &self.im) >> PREC
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let den = other.abs2();
        if den.is_zero() {
            return Err(LojaError::Domain("division by numeric zero".into()));
        }
        let num = self.mul(&other.conj());
        Ok(FixedComplex {
            re: (num.re << PREC) / &den,
            im: (num.im << PREC) / &den,
        })
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Integer power with negative exponents via reciprocal.
    pub fn powi_signed(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.powi(e as u32))
        } else {
            Self::one().div(&self.powi((-e) as u32))
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let conv = |x: &BigInt| {
            let quo = (x << 62u32) >> PREC;
            quo.to_i128().map(|v| v as f64 / 2f64.powi(62)).unwrap_or(f64::INFINITY)
        };
        (conv(&self.re), conv(&self.im))
    }
}

/// Floor integer k-th root by Newton iteration.
fn integer_root(m: &BigInt, k: u32) -> BigInt {
    assert!(!m.is_negative() && k >= 1);
    if m.is_zero() || k == 1 {
        return m.clone();
    }
    let bits = m.bits();
    let mut x = BigInt::from(1) << (bits / k as u64 + 1);
    let kk = BigInt::from(k);
    let km1 = BigInt::from(k - 1);
    loop {
        let xk1 = x.pow(k - 1);
        let next = (&km1 * &x + m / &xk1) / &kk;
        if next >= x {
            break;
        }
        x = next;
    }
    // x = floor(m^(1/k)) after descent
    while x.pow(k) > *m {
        x -= 1;
    }
    x
}

/// Principal k-th root of a non-negative rational as a fixed-point real.
pub fn real_root(r: &BigRational, k: u32) -> Result<FixedComplex> {
    if r.is_negative() {
        return Err(LojaError::Domain("real root of a negative rational".into()));
    }
    if k == 0 {
        return Err(LojaError::Domain("zeroth root".into()));
    }
    // floor( (r * 2^(k*PREC))^(1/k) ) = floor(r^(1/k) * 2^PREC)
    let m = (r.numer() << (k as u64 * PREC as u64)) / r.denom();
    Ok(FixedComplex {
        re: integer_root(&m, k),
        im: BigInt::zero(),
    })
}

/// e^(2*pi*i*turns): exact on quarter turns, Newton-refined otherwise.
pub fn unit_phase(turns: &BigRational) -> Result<FixedComplex> {
    let one = BigRational::from_integer(BigInt::from(1));
    let mut t = turns.clone();
    // reduce to [0, 1)
    let floor = t.floor();
    t -= floor;
    let quarter = |num: i64| BigRational::new(BigInt::from(num), BigInt::from(4));
    if t.is_zero() {
        return Ok(FixedComplex::one());
    }
    if t == quarter(1) {
        return Ok(FixedComplex {
            re: BigInt::zero(),
            im: one_scaled(),
        });
    }
    if t == quarter(2) {
        return Ok(FixedComplex {
            re: -one_scaled(),
            im: BigInt::zero(),
        });
    }
    if t == quarter(3) {
        return Ok(FixedComplex {
            re: BigInt::zero(),
            im: -one_scaled(),
        });
    }
    let den = t.denom().to_u32().ok_or_else(|| {
        LojaError::Domain("phase denominator too large".into())
    })?;
    if den > 1_000_000 {
        return Err(LojaError::Domain("phase denominator too large".into()));
    }
    let _ = one;
    // f64 seed, then Newton for z^den = 1 which keeps the chosen root
    let angle = 2.0 * std::f64::consts::PI * crate::rational::to_f64(&t);
    let mut z = FixedComplex::from_f64(angle.cos(), angle.sin());
    let d = FixedComplex::from_rational(&BigRational::from_integer(BigInt::from(den)));
    for _ in 0..4 {
        // z <- ((den-1) z + z^(1-den)) / den
        let zpow = z.powi_signed(1 - den as i64)?;
        let dm1 = FixedComplex::from_rational(&BigRational::from_integer(BigInt::from(
            den as i64 - 1,
        )));
        z = dm1.mul(&z).add(&zpow).div(&d)?;
    }
    Ok(z)
}

/// Principal value of base^(1/index) * e^(2*pi*i*turns) with rational base.
/// A negative base contributes |base|^(1/index) and an extra half turn
/// divided by the index.
pub fn root_literal(base: &BigRational, index: u32, turns: &BigRational) -> Result<FixedComplex> {
    if index == 0 {
        return Err(LojaError::Domain("root index must be >= 1".into()));
    }
    let magnitude = real_root(&base.abs(), index)?;
    let mut total_turns = turns.clone();
    if base.is_negative() {
        total_turns += BigRational::new(BigInt::from(1), BigInt::from(2 * index as i64));
    }
    Ok(magnitude.mul(&unit_phase(&total_turns)?))
}

/// Principal k-th root of an arbitrary fixed-point complex (k may be
/// negative: reciprocal root). Newton seeded from the f64 principal root.
pub fn complex_root(w: &FixedComplex, k: i64) -> Result<FixedComplex> {
    if k == 0 {
        return Err(LojaError::Domain("zeroth root".into()));
    }
    let kk = k.unsigned_abs() as u32;
    if w.abs2().is_zero() {
        return Err(LojaError::Domain("root of numeric zero".into()));
    }
    let (re, im) = w.to_f64();
    let r = re.hypot(im);
    let phi = im.atan2(re) / kk as f64;
    let mag = r.powf(1.0 / kk as f64);
    let mut z = FixedComplex::from_f64(mag * phi.cos(), mag * phi.sin());
    let kfix = FixedComplex::from_rational(&BigRational::from_integer(BigInt::from(kk)));
    for _ in 0..6 {
        // z <- ((k-1) z + w z^(1-k)) / k
        let zpow = z.powi_signed(1 - kk as i64)?;
        let km1 = FixedComplex::from_rational(&BigRational::from_integer(BigInt::from(
            kk as i64 - 1,
        )));
        z = km1.mul(&z).add(&w.mul(&zpow)).div(&kfix)?;
    }
    if k < 0 {
        z = FixedComplex::one().div(&z)?;
    }
    Ok(z)
}

/// Relative zero test: |sum|^2 <= tol^2 * scale where scale is the largest
/// |addend|^2 seen in the group.
pub fn is_relative_zero(sum_abs2: &BigInt, max_abs2: &BigInt, tolerance: f64) -> bool {
    if sum_abs2.is_zero() {
        return true;
    }
    if max_abs2.is_zero() {
        return false;
    }
    let tol = BigRational::from_float(tolerance).expect("finite tolerance");
    let tol2 = &tol * &tol;
    // sum_abs2 <= tol2 * max_abs2  <=>  sum_abs2 * den <= num * max_abs2
    sum_abs2 * tol2.denom() <= tol2.numer() * max_abs2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn close(z: &FixedComplex, re: f64, im: f64) {
        let (zr, zi) = z.to_f64();
        assert!((zr - re).abs() < 1e-14, "re {zr} vs {re}");
        assert!((zi - im).abs() < 1e-14, "im {zi} vs {im}");
    }

    #[test]
    fn arithmetic_roundtrip() {
        let a = FixedComplex::from_rational(&ratio(3, 4));
        let b = FixedComplex::from_f64(0.0, 2.0);
        close(&a.mul(&b), 0.0, 1.5);
        close(&a.add(&b), 0.75, 2.0);
        close(&b.powi(2), -4.0, 0.0);
        close(&a.div(&b).unwrap(), 0.0, -0.375);
    }

    #[test]
    fn integer_roots_are_floors() {
        assert_eq!(integer_root(&BigInt::from(26), 3), BigInt::from(2));
        assert_eq!(integer_root(&BigInt::from(27), 3), BigInt::from(3));
        assert_eq!(integer_root(&BigInt::from(0), 5), BigInt::from(0));
    }

    #[test]
    fn real_roots() {
        let r = real_root(&ratio(5, 16), 6).unwrap();
        close(&r, (5f64 / 16.0).powf(1.0 / 6.0), 0.0);
        let precise = r.powi(6);
        let err = precise.sub(&FixedComplex::from_rational(&ratio(5, 16)));
        assert!(err.abs2() < BigInt::from(1) << (PREC / 2));
    }

    #[test]
    fn unit_phases() {
        close(&unit_phase(&ratio(0, 1)).unwrap(), 1.0, 0.0);
        close(&unit_phase(&ratio(1, 4)).unwrap(), 0.0, 1.0);
        close(&unit_phase(&ratio(-1, 4)).unwrap(), 0.0, -1.0);
        let z = unit_phase(&ratio(1, 12)).unwrap();
        close(&z, (std::f64::consts::PI / 6.0).cos(), 0.5);
        // z^12 must be 1 to full precision
        let err = z.powi(12).sub(&FixedComplex::one());
        assert!(err.abs2() < BigInt::from(1) << (PREC / 2));
    }

    #[test]
    fn root_literals_compose_magnitude_and_phase() {
        // (3/8)^(1/6) e^(i pi/6) equals (1/2) 6throot(3) sqrt(2) 6throot(-1)
        let w1 = root_literal(&ratio(3, 8), 6, &ratio(1, 12)).unwrap();
        let expect_re = 0.5 * 3f64.powf(1.0 / 6.0) * 2f64.sqrt() * (std::f64::consts::PI / 6.0).cos();
        let expect_im = 0.5 * 3f64.powf(1.0 / 6.0) * 2f64.sqrt() * (std::f64::consts::PI / 6.0).sin();
        close(&w1, expect_re, expect_im);

        // negative base adds a half-turn over the index
        let m1 = root_literal(&ratio(-1, 1), 6, &ratio(0, 1)).unwrap();
        close(&m1, (std::f64::consts::PI / 6.0).cos(), (std::f64::consts::PI / 6.0).sin());
    }

    #[test]
    fn complex_roots_newton() {
        let w = FixedComplex::from_f64(0.0, 8.0);
        let z = complex_root(&w, 3).unwrap();
        let err = z.powi(3).sub(&w);
        assert!(err.abs2() < BigInt::from(1) << (PREC / 2));
        let zr = complex_root(&w, -3).unwrap();
        let err = zr.mul(&z).sub(&FixedComplex::one());
        assert!(err.abs2() < BigInt::from(1) << (PREC / 2));
    }

    #[test]
    fn relative_zero_test() {
        let big = BigInt::from(1) << PREC; // |1|^2
        let tiny = BigInt::from(1) << (PREC - 70); // ~1e-21 relative
        assert!(is_relative_zero(&tiny, &big, 1e-9));
        assert!(!is_relative_zero(&big, &big, 1e-9));
    }
}
