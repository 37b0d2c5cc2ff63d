//! Exact coefficient fields: arbitrary-precision rationals and the small
//! prime fields used by the finite-model oracle.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact field of coefficients.
///
/// Implemented by [`Scalar`] (the rationals) and [`FpScalar`] (a prime
/// field). All kernel algorithms are written against this trait so the
/// same code runs over both.
pub trait Field: Clone + PartialEq + Eq + PartialOrd + Ord + Hash + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    /// Multiplicative inverse; errors on zero.
    fn inv(&self) -> Result<Self>;

    /// Image of a rational under the canonical map into this field, if it
    /// has one (for `F_p` this needs the denominator to be a unit mod p).
    fn from_rational(s: &Scalar) -> Result<Self>;

    /// Every element of the field, when the field is finite. `None` for
    /// the rationals; enumerative algorithms error out in that case.
    fn elements() -> Option<Vec<Self>>;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Scalar::from_int(n)).expect("integers embed in every field")
    }
}

/// An exact rational number, kept reduced with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(BigRational);

impl Scalar {
    /// `n/d`; errors when `d == 0`.
    pub fn new(n: i64, d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar(BigRational::new(BigInt::from(n), BigInt::from(d))))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    /// `self^k` for a signed exponent; errors when inverting zero.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut acc = Scalar::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        Ok(acc)
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    fn one() -> Self {
        Scalar(BigRational::one())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        Scalar(&self.0 + &other.0)
    }

    fn neg(&self) -> Self {
        Scalar(-self.0.clone())
    }

    fn mul(&self, other: &Self) -> Self {
        Scalar(&self.0 * &other.0)
    }

    fn inv(&self) -> Result<Self> {
        if self.0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar(self.0.recip()))
    }

    fn from_rational(s: &Scalar) -> Result<Self> {
        Ok(s.clone())
    }

    fn elements() -> Option<Vec<Self>> {
        None
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Parses `n` or `n/d` with an optional leading sign.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Validation(format!("malformed rational: {s:?}"));
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n = BigInt::from_str(num_str.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(den_str.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar(BigRational::new(n, d)))
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Field::add(self, rhs)
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Field::sub(self, rhs)
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Field::mul(self, rhs)
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Field::neg(self)
    }
}

/// An element of the prime field `F_P`, for the small moduli the finite
/// oracle supports.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpScalar<const P: u64>(u64);

impl<const P: u64> FpScalar<P> {
    const SUPPORTED: () = assert!(P == 2 || P == 3 || P == 5, "supported moduli are 2, 3 and 5");

    pub fn new(residue: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::SUPPORTED;
        FpScalar(residue % P)
    }

    pub fn residue(&self) -> u64 {
        self.0
    }

    pub fn modulus() -> u64 {
        P
    }
}

impl<const P: u64> Field for FpScalar<P> {
    fn zero() -> Self {
        Self::new(0)
    }

    fn one() -> Self {
        Self::new(1)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn add(&self, other: &Self) -> Self {
        Self::new(self.0 + other.0)
    }

    fn neg(&self) -> Self {
        Self::new(P - self.0)
    }

    fn mul(&self, other: &Self) -> Self {
        Self::new(self.0 * other.0)
    }

    fn inv(&self) -> Result<Self> {
        if self.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        // Fermat: a^(p-2) inverts a mod a prime p.
        let mut acc = Self::one();
        for _ in 0..P - 2 {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    fn from_rational(s: &Scalar) -> Result<Self> {
        let p = BigInt::from(P);
        let n = s.numer() % &p;
        let d = s.denom() % &p;
        let to_residue = |b: BigInt| -> u64 {
            let r = ((b % &p) + &p) % &p;
            r.try_into().expect("residue fits in u64")
        };
        let dr = Self::new(to_residue(d));
        if dr.is_zero() {
            return Err(Error::NoResidue(s.to_string(), P));
        }
        Ok(Self::new(to_residue(n)).mul(&dr.inv()?))
    }

    fn elements() -> Option<Vec<Self>> {
        Some((0..P).map(Self::new).collect())
    }
}

impl<const P: u64> fmt::Display for FpScalar<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Debug for FpScalar<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {P})", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Scalar {
        Scalar::new(n, d).unwrap()
    }

    #[test]
    fn reduction_and_sign_are_canonical() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(1, -2), rat(-1, 2));
        assert_eq!(rat(0, 7), Scalar::zero());
        assert_eq!(rat(-3, -9), rat(1, 3));
    }

    #[test]
    fn display_omits_unit_denominator() {
        assert_eq!(rat(6, 2).to_string(), "3");
        assert_eq!(rat(-1, 2).to_string(), "-1/2");
        assert_eq!(Scalar::zero().to_string(), "0");
    }

    #[test]
    fn parse_roundtrips_display() {
        for s in ["0", "3", "-3", "1/2", "-7/3", "22/7"] {
            let v: Scalar = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        assert_eq!(Scalar::zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(FpScalar::<5>::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn rational_residues_mod_p() {
        // 1/2 = 3 mod 5 because 2 * 3 = 1 mod 5.
        assert_eq!(FpScalar::<5>::from_rational(&rat(1, 2)).unwrap(), FpScalar::<5>::new(3));
        assert_eq!(
            FpScalar::<2>::from_rational(&rat(1, 2)),
            Err(Error::NoResidue("1/2".into(), 2))
        );
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn rationals_satisfy_field_laws(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&a.neg()), Scalar::zero());
            if !a.is_zero() {
                prop_assert_eq!(a.mul(&a.inv().unwrap()), Scalar::one());
            }
        }

        #[test]
        fn prime_fields_satisfy_field_laws(x in 0u64..5, y in 0u64..5, z in 0u64..5) {
            type F = FpScalar<5>;
            let (a, b, c) = (F::new(x), F::new(y), F::new(z));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&a.neg()), F::zero());
            if !a.is_zero() {
                prop_assert_eq!(a.mul(&a.inv().unwrap()), F::one());
            }
        }
    }

    #[test]
    fn field_enumeration() {
        assert_eq!(Scalar::elements(), None);
        assert_eq!(
            FpScalar::<3>::elements().unwrap(),
            vec![FpScalar::<3>::new(0), FpScalar::<3>::new(1), FpScalar::<3>::new(2)]
        );
    }
}
