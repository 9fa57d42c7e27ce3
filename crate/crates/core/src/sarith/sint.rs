use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{padic_valuation_int, SArithmeticContext};
use crate::{Error, Result};

/// Exact element of `Z_S`: `value = m * prod_i p_i^{e_i}` with `m` an integer
/// coprime to every prime of S. The exponent vector is aligned with
/// `ctx.primes()`. Zero is represented by `m = 0` and all exponents zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SInteger {
    m: BigInt,
    exps: Vec<i64>,
}

impl SInteger {
    pub fn zero(ctx: &SArithmeticContext) -> Self {
        Self {
            m: BigInt::zero(),
            exps: vec![0; ctx.num_primes()],
        }
    }

    pub fn one(ctx: &SArithmeticContext) -> Self {
        Self {
            m: BigInt::one(),
            exps: vec![0; ctx.num_primes()],
        }
    }

    pub fn from_int(n: impl Into<BigInt>, ctx: &SArithmeticContext) -> Self {
        let n: BigInt = n.into();
        Self::normalize(n, vec![0; ctx.num_primes()], ctx)
    }

    /// Builds from an exact rational; the denominator must be S-smooth.
    pub fn from_rational(q: &BigRational, ctx: &SArithmeticContext) -> Result<Self> {
        let mut den = q.denom().magnitude().clone();
        let mut exps = vec![0i64; ctx.num_primes()];
        for (i, &p) in ctx.primes().iter().enumerate() {
            let pb = BigUint::from(p);
            while (&den % &pb).is_zero() {
                den /= &pb;
                exps[i] -= 1;
            }
        }
        if !den.is_one() {
            return Err(Error::NotAnSInteger);
        }
        Ok(Self::normalize(q.numer().clone(), exps, ctx))
    }

    /// A unit `sign * prod p_i^{k_i}` of `Z_S`.
    pub fn unit(sign: i8, exps: Vec<i64>, ctx: &SArithmeticContext) -> Self {
        debug_assert_eq!(exps.len(), ctx.num_primes());
        debug_assert!(sign == 1 || sign == -1);
        Self {
            m: BigInt::from(sign),
            exps,
        }
    }

    fn normalize(mut m: BigInt, mut exps: Vec<i64>, ctx: &SArithmeticContext) -> Self {
        if m.is_zero() {
            return Self::zero(ctx);
        }
        for (i, &p) in ctx.primes().iter().enumerate() {
            let pb = BigInt::from(p);
            loop {
                let (q, r) = num_integer::Integer::div_rem(&m, &pb);
                if !r.is_zero() {
                    break;
                }
                m = q;
                exps[i] += 1;
            }
        }
        Self { m, exps }
    }

    /// The S-coprime part `m` (with sign).
    pub fn unit_free_part(&self) -> &BigInt {
        &self.m
    }

    /// Exponent of `p_i` in the factorization.
    pub fn exponent(&self, idx: usize) -> i64 {
        self.exps[idx]
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exps
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    /// `true` iff the value is a unit of `Z_S`, i.e. `m = +-1`.
    pub fn is_s_unit(&self) -> bool {
        self.m.abs().is_one()
    }

    pub fn signum(&self) -> i8 {
        match self.m.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// The covolume character `d(n) = prod_{p in S} |n|_p = |m|`, exactly.
    pub fn covolume_int(&self) -> BigUint {
        self.m.magnitude().clone()
    }

    /// p_i-adic valuation of the value; `None` for zero.
    pub fn valuation(&self, idx: usize) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exps[idx])
        }
    }

    pub fn to_rational(&self, ctx: &SArithmeticContext) -> BigRational {
        let mut num = self.m.clone();
        let mut den = BigInt::one();
        for (i, &p) in ctx.primes().iter().enumerate() {
            let e = self.exps[i];
            let pw = BigInt::from(p).pow(e.unsigned_abs() as u32);
            if e >= 0 {
                num *= pw;
            } else {
                den *= pw;
            }
        }
        BigRational::new(num, den)
    }

    pub fn to_f64(&self, ctx: &SArithmeticContext) -> f64 {
        let q = self.to_rational(ctx);
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    }

    pub fn neg(&self) -> Self {
        Self {
            m: -self.m.clone(),
            exps: self.exps.clone(),
        }
    }

    pub fn mul(&self, other: &Self, ctx: &SArithmeticContext) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(ctx);
        }
        // m1*m2 stays coprime to S, so no re-extraction is needed.
        Self {
            m: &self.m * &other.m,
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn add(&self, other: &Self, ctx: &SArithmeticContext) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut exps = Vec::with_capacity(self.exps.len());
        let mut a = self.m.clone();
        let mut b = other.m.clone();
        for (i, &p) in ctx.primes().iter().enumerate() {
            let e = self.exps[i].min(other.exps[i]);
            exps.push(e);
            let pb = BigInt::from(p);
            a *= pb.pow((self.exps[i] - e) as u32);
            b *= BigInt::from(p).pow((other.exps[i] - e) as u32);
        }
        Self::normalize(a + b, exps, ctx)
    }

    pub fn sub(&self, other: &Self, ctx: &SArithmeticContext) -> Self {
        self.add(&other.neg(), ctx)
    }

    /// Multiplicative inverse, defined only for units.
    pub fn inv_unit(&self) -> Result<Self> {
        if !self.is_s_unit() {
            return Err(Error::NotInDomain("not a unit of Z_S".into()));
        }
        Ok(Self {
            m: self.m.clone(),
            exps: self.exps.iter().map(|e| -e).collect(),
        })
    }

    /// Residue of the value modulo an integer `q` coprime to every prime of S.
    /// Negative exponents are resolved by modular inverses mod `q`.
    pub fn residue_mod(&self, q: u64, ctx: &SArithmeticContext) -> u64 {
        debug_assert!(q > 0);
        let qb = BigInt::from(q);
        let mut r = num_integer::Integer::mod_floor(&self.m, &qb)
            .to_u64()
            .expect("residue fits u64");
        for (i, &p) in ctx.primes().iter().enumerate() {
            let e = self.exps[i];
            if e == 0 {
                continue;
            }
            let base = if e > 0 {
                p % q
            } else {
                mod_inverse_u64(p % q, q).expect("p invertible mod q")
            };
            r = (r as u128 * pow_mod_u64(base, e.unsigned_abs(), q) as u128 % q as u128) as u64;
        }
        r
    }
}

pub(crate) fn pow_mod_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    let mm = m as u128;
    let mut acc: u128 = 1 % mm;
    let mut b = base as u128 % mm;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % mm;
        }
        b = b * b % mm;
        exp >>= 1;
    }
    acc as u64
}

pub(crate) fn mod_inverse_u64(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, a as i128 % m as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

// Check a diagonal S-integer multiplies covolumes exactly: used by qs.rs too.
pub(crate) fn valuation_of_int(n: &BigInt, p: u64) -> Option<i64> {
    padic_valuation_int(n, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx23() -> SArithmeticContext {
        SArithmeticContext::new(&[2, 3]).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn canonical_factored_form() {
        let ctx = ctx23();
        let x = SInteger::from_rational(&rat(12, 1), &ctx).unwrap();
        assert_eq!(x.unit_free_part(), &BigInt::from(1));
        assert_eq!(x.exponents(), &[2, 1]);
        let y = SInteger::from_rational(&rat(-9, 8), &ctx).unwrap();
        assert_eq!(y.unit_free_part(), &BigInt::from(-1));
        assert_eq!(y.exponents(), &[-3, 2]);
        assert!(SInteger::from_rational(&rat(1, 5), &ctx).is_err());
    }

    #[test]
    fn is_s_unit_examples() {
        let ctx = ctx23();
        let q = SInteger::from_rational(&rat(4, 3), &ctx).unwrap();
        assert!(q.is_s_unit());
        let real = SArithmeticContext::real_only();
        assert!(SInteger::from_int(-1, &real).is_s_unit());
        let ctx5 = SArithmeticContext::new(&[5]).unwrap();
        assert!(!SInteger::from_int(10, &ctx5).is_s_unit());
    }

    #[test]
    fn ring_ops_match_rationals() {
        let ctx = ctx23();
        let cases = [
            (rat(5, 6), rat(7, 4)),
            (rat(-3, 2), rat(3, 2)),
            (rat(0, 1), rat(11, 9)),
            (rat(35, 27), rat(-7, 8)),
        ];
        for (a, b) in cases {
            let x = SInteger::from_rational(&a, &ctx).unwrap();
            let y = SInteger::from_rational(&b, &ctx).unwrap();
            assert_eq!(x.add(&y, &ctx).to_rational(&ctx), &a + &b);
            assert_eq!(x.sub(&y, &ctx).to_rational(&ctx), &a - &b);
            assert_eq!(x.mul(&y, &ctx).to_rational(&ctx), &a * &b);
        }
    }

    #[test]
    fn covolume_is_ns_part() {
        let ctx = ctx23();
        // n = 60 = 5 * 2^2 * 3 => d(n) = 5.
        let n = SInteger::from_int(60, &ctx);
        assert_eq!(n.covolume_int(), BigUint::from(5u32));
    }

    #[test]
    fn residue_mod_handles_negative_exponents() {
        let ctx = ctx23();
        let x = SInteger::from_rational(&rat(5, 8), &ctx).unwrap();
        // 5 * inverse(8) mod 7: 8 ≡ 1, so 5.
        assert_eq!(x.residue_mod(7, &ctx), 5);
    }
}
