use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::padic_valuation;
use crate::{Error, Result};

/// A p-adic number at working precision: `value = p^val * unit` with the unit
/// part known modulo `p^precision`. Zero is encoded by `val = None`.
///
/// All equalities involving units are congruences at the stated precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicValue {
    prime: u64,
    precision: u32,
    val: Option<i64>,
    unit: BigUint,
}

impl PadicValue {
    pub fn zero(prime: u64, precision: u32) -> Self {
        Self {
            prime,
            precision,
            val: None,
            unit: BigUint::zero(),
        }
    }

    pub fn one(prime: u64, precision: u32) -> Self {
        Self {
            prime,
            precision,
            val: Some(0),
            unit: BigUint::one(),
        }
    }

    /// From an explicit valuation and unit representative (reduced mod p^precision).
    pub fn from_parts(prime: u64, val: i64, unit: &BigUint, precision: u32) -> Result<Self> {
        let modulus = BigUint::from(prime).pow(precision);
        let u = unit % &modulus;
        if (&u % BigUint::from(prime)).is_zero() {
            return Err(Error::NotInDomain("unit part divisible by p".into()));
        }
        Ok(Self {
            prime,
            precision,
            val: Some(val),
            unit: u,
        })
    }

    /// Exact rational embedded into Q_p at the working precision.
    pub fn from_rational(q: &BigRational, prime: u64, precision: u32) -> Self {
        match padic_valuation(q, prime) {
            None => Self::zero(prime, precision),
            Some(v) => {
                let pb = BigInt::from(prime);
                let pw = pb.pows(v.unsigned_abs());
                // unit = q / p^v, an S-unit-free rational with p-unit numerator and denominator
                let unit_rat = if v >= 0 {
                    q / BigRational::from(pw)
                } else {
                    q * BigRational::from(pw)
                };
                let modulus = BigUint::from(prime).pow(precision);
                let num = unit_rat.numer().mod_floor(&BigInt::from(modulus.clone()));
                let den = unit_rat.denom().mod_floor(&BigInt::from(modulus.clone()));
                let num = num.to_biguint().expect("nonnegative");
                let den = den.to_biguint().expect("nonnegative");
                let inv = mod_inverse(&den, &modulus).expect("denominator coprime to p");
                Self {
                    prime,
                    precision,
                    val: Some(v),
                    unit: num * inv % &modulus,
                }
            }
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.val.is_none()
    }

    pub fn valuation(&self) -> Option<i64> {
        self.val
    }

    /// Unit digits modulo `p^precision`; zero for the zero value.
    pub fn unit_digits(&self) -> &BigUint {
        &self.unit
    }

    /// `|x|_p = p^{-v}` as a float; 0 for the zero value.
    pub fn norm(&self) -> f64 {
        match self.val {
            None => 0.0,
            Some(v) => (self.prime as f64).powi(-(v as i32)),
        }
    }

    /// Residue of the unit part modulo `q` (which must divide p^precision).
    pub fn unit_residue_mod(&self, q: u64) -> u64 {
        (&self.unit % BigUint::from(q)).to_u64().expect("fits")
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.prime, other.prime);
        let precision = self.precision.min(other.precision);
        match (self.val, other.val) {
            (Some(a), Some(b)) => {
                let modulus = BigUint::from(self.prime).pow(precision);
                Self {
                    prime: self.prime,
                    precision,
                    val: Some(a + b),
                    unit: &self.unit * &other.unit % modulus,
                }
            }
            _ => Self::zero(self.prime, precision),
        }
    }

    /// Sum at working precision. Full cancellation of all tracked digits
    /// yields the zero value (congruence semantics).
    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.prime, other.prime);
        let precision = self.precision.min(other.precision);
        match (self.val, other.val) {
            (None, _) => {
                let mut r = other.clone();
                r.precision = precision;
                r
            }
            (_, None) => {
                let mut r = self.clone();
                r.precision = precision;
                r
            }
            (Some(a), Some(b)) => {
                let p = BigUint::from(self.prime);
                let lo = a.min(b);
                let modulus = p.pow(precision);
                let ua = &self.unit * p.pow((a - lo) as u32) % &modulus;
                let ub = &other.unit * p.pow((b - lo) as u32) % &modulus;
                let mut sum = (ua + ub) % &modulus;
                if sum.is_zero() {
                    return Self::zero(self.prime, precision);
                }
                let mut v = lo;
                while (&sum % &p).is_zero() {
                    sum /= &p;
                    v += 1;
                }
                Self {
                    prime: self.prime,
                    precision,
                    val: Some(v),
                    unit: sum,
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        match self.val {
            None => self.clone(),
            Some(v) => {
                let modulus = BigUint::from(self.prime).pow(self.precision);
                Self {
                    prime: self.prime,
                    precision: self.precision,
                    val: Some(v),
                    unit: (&modulus - &self.unit) % modulus,
                }
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

trait Pows {
    fn pows(&self, e: u64) -> BigInt;
}
impl Pows for BigInt {
    fn pows(&self, e: u64) -> BigInt {
        self.pow(e as u32)
    }
}

pub(crate) fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let (mut t, mut new_t) = (BigInt::zero(), BigInt::one());
    let (mut r, mut new_r) = (
        BigInt::from(m.clone()),
        BigInt::from(a % m),
    );
    while !new_r.is_zero() {
        let q = &r / &new_r;
        let tmp_t = &t - &q * &new_t;
        t = std::mem::replace(&mut new_t, tmp_t);
        let tmp_r = &r - &q * &new_r;
        r = std::mem::replace(&mut new_r, tmp_r);
    }
    if !r.is_one() {
        return None;
    }
    Some(t.mod_floor(&BigInt::from(m.clone())).to_biguint().unwrap())
}

/// Square root of a unit by Hensel lifting.
///
/// For odd `p` the input must satisfy `u = 1 mod p` and the root is the unique
/// one with `y = 1 mod p`. For `p = 2` the input must satisfy `u = 1 mod 8`
/// and the root is the unique one in `1 + 4 Z_2`; the lift is resolved one bit
/// past the target so parasite residues (roots mod 2^k that do not lift) are
/// rejected, which costs one digit of input precision.
pub fn hensel_sqrt_unit(u: &PadicValue, target_precision: u32) -> Result<PadicValue> {
    let p = u.prime();
    if u.is_zero() || u.valuation() != Some(0) {
        return Err(Error::NotInDomain("input must be a unit".into()));
    }
    if p == 2 {
        if u.unit_residue_mod(8) != 1 {
            return Err(Error::NotInDomain("need u = 1 mod 8".into()));
        }
        if u.precision() < target_precision + 1 {
            return Err(Error::PrecisionExceeded);
        }
        let modulus = BigUint::from(2u32).pow(target_precision + 1);
        let uu = u.unit_digits() % &modulus;
        let mut y = BigUint::one();
        // Invariant on entering step k: y^2 = u mod 2^k. Each step fixes bit k.
        for k in 3..=target_precision {
            let diff = (&y * &y + &modulus - &uu) % &modulus;
            if !(diff >> k as usize & BigUint::one()).is_zero() {
                y += BigUint::one() << (k as usize - 1);
            }
        }
        let out_mod = BigUint::from(2u32).pow(target_precision);
        PadicValue::from_parts(2, 0, &(y % out_mod), target_precision)
    } else {
        if u.unit_residue_mod(p) != 1 {
            return Err(Error::NotInDomain("need u = 1 mod p".into()));
        }
        if u.precision() < target_precision {
            return Err(Error::PrecisionExceeded);
        }
        let modulus = BigUint::from(p).pow(target_precision);
        let uu = u.unit_digits() % &modulus;
        let inv2 = mod_inverse(&BigUint::from(2u32), &modulus).expect("p odd");
        // Newton iteration y <- (y + u/y)/2, starting from the branch y = 1 mod p.
        let mut y = BigUint::one();
        let mut prec = 1u32;
        while prec < target_precision {
            let yinv = mod_inverse(&y, &modulus).expect("unit");
            y = (&y + &uu * yinv) % &modulus * &inv2 % &modulus;
            prec *= 2;
        }
        PadicValue::from_parts(p, 0, &y, target_precision)
    }
}

/// A `d x d` matrix over `Z/p^m` with unit determinant; models an element of
/// `SL_d(Z_p)` at working precision. Row-major entries reduced mod `p^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicMatrix {
    prime: u64,
    precision: u32,
    dim: usize,
    entries: Vec<BigUint>,
}

impl PadicMatrix {
    pub fn identity(prime: u64, dim: usize, precision: u32) -> Self {
        let mut entries = vec![BigUint::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigUint::one();
        }
        Self {
            prime,
            precision,
            dim,
            entries,
        }
    }

    pub fn from_entries(
        prime: u64,
        dim: usize,
        precision: u32,
        entries: Vec<BigUint>,
    ) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::WrongDimension {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let modulus = BigUint::from(prime).pow(precision);
        let m = Self {
            prime,
            precision,
            dim,
            entries: entries.into_iter().map(|e| e % &modulus).collect(),
        };
        if !m.det_is_one() {
            return Err(Error::NotInDomain("determinant is not 1 mod p^m".into()));
        }
        Ok(m)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.prime).pow(self.precision)
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.dim + j]
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [BigUint] {
        &mut self.entries
    }

    pub fn det(&self) -> BigUint {
        let modulus = self.modulus();
        det_mod(&self.entries, self.dim, &modulus)
    }

    pub fn det_is_one(&self) -> bool {
        self.det().is_one()
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.prime, other.prime);
        debug_assert_eq!(self.dim, other.dim);
        let precision = self.precision.min(other.precision);
        let modulus = BigUint::from(self.prime).pow(precision);
        let d = self.dim;
        let mut out = vec![BigUint::zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = BigUint::zero();
                for k in 0..d {
                    acc += self.entry(i, k) * other.entry(k, j);
                }
                out[i * d + j] = acc % &modulus;
            }
        }
        Self {
            prime: self.prime,
            precision,
            dim: d,
            entries: out,
        }
    }

    /// Matrix-vector product mod p^m.
    pub fn apply(&self, v: &[BigUint]) -> Vec<BigUint> {
        debug_assert_eq!(v.len(), self.dim);
        let modulus = self.modulus();
        (0..self.dim)
            .map(|i| {
                let mut acc = BigUint::zero();
                for k in 0..self.dim {
                    acc += self.entry(i, k) * &v[k];
                }
                acc % &modulus
            })
            .collect()
    }

    /// Inverse mod p^m by Gauss elimination with unit pivots (always available
    /// since det is a unit).
    pub fn inverse(&self) -> Self {
        let d = self.dim;
        let modulus = self.modulus();
        let mut a = self.entries.clone();
        let mut inv = Self::identity(self.prime, d, self.precision).entries;
        let p = BigUint::from(self.prime);
        for col in 0..d {
            // find a pivot row with a unit entry
            let pivot = (col..d)
                .find(|&r| !(&a[r * d + col] % &p).is_zero())
                .expect("unimodular matrix has a unit pivot in every column");
            if pivot != col {
                for j in 0..d {
                    a.swap(pivot * d + j, col * d + j);
                    inv.swap(pivot * d + j, col * d + j);
                }
            }
            let pinv = mod_inverse(&a[col * d + col], &modulus).expect("unit pivot");
            for j in 0..d {
                a[col * d + j] = &a[col * d + j] * &pinv % &modulus;
                inv[col * d + j] = &inv[col * d + j] * &pinv % &modulus;
            }
            for r in 0..d {
                if r == col {
                    continue;
                }
                let f = a[r * d + col].clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let sub_a = &f * &a[col * d + j] % &modulus;
                    let sub_i = &f * &inv[col * d + j] % &modulus;
                    a[r * d + j] = (&a[r * d + j] + &modulus - sub_a) % &modulus;
                    inv[r * d + j] = (&inv[r * d + j] + &modulus - sub_i) % &modulus;
                }
            }
        }
        Self {
            prime: self.prime,
            precision: self.precision,
            dim: d,
            entries: inv,
        }
    }

    /// Projection to a smaller modulus p^k (k <= precision).
    pub fn project(&self, k: u32) -> Self {
        debug_assert!(k <= self.precision);
        let modulus = BigUint::from(self.prime).pow(k);
        Self {
            prime: self.prime,
            precision: k,
            dim: self.dim,
            entries: self.entries.iter().map(|e| e % &modulus).collect(),
        }
    }
}

pub(crate) fn det_mod(entries: &[BigUint], d: usize, modulus: &BigUint) -> BigUint {
    // Bareiss-free: lift to signed integers and reduce at the end. Dimensions
    // here are tiny (d <= 4 in practice).
    let ints: Vec<BigInt> = entries.iter().map(|e| BigInt::from(e.clone())).collect();
    let det = det_int(&ints, d);
    det.mod_floor(&BigInt::from(modulus.clone()))
        .to_biguint()
        .unwrap()
}

pub(crate) fn det_int(entries: &[BigInt], d: usize) -> BigInt {
    match d {
        1 => entries[0].clone(),
        2 => &entries[0] * &entries[3] - &entries[1] * &entries[2],
        _ => {
            let mut acc = BigInt::zero();
            // Laplace expansion along the first row.
            for j in 0..d {
                let mut minor = Vec::with_capacity((d - 1) * (d - 1));
                for r in 1..d {
                    for c in 0..d {
                        if c != j {
                            minor.push(entries[r * d + c].clone());
                        }
                    }
                }
                let term = &entries[j] * det_int(&minor, d - 1);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn from_rational_roundtrip() {
        let x = PadicValue::from_rational(&rat(9, 50), 5, 10);
        assert_eq!(x.valuation(), Some(-2));
        // unit = 9/2 mod 5^10: check 2 * unit = 9 mod 5^10
        let two_u = (x.unit_digits() * BigUint::from(2u32)) % BigUint::from(5u64).pow(10);
        assert_eq!(two_u, BigUint::from(9u32));
        assert!((x.norm() - 25.0).abs() < 1e-12);
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let a = PadicValue::from_rational(&rat(7, 1), 3, 8);
        let b = PadicValue::from_rational(&rat(2, 3), 3, 8);
        let prod = a.mul(&b);
        assert_eq!(prod.valuation(), Some(-1));
        let expect = PadicValue::from_rational(&rat(14, 3), 3, 8);
        assert_eq!(prod, expect);

        let s = a.add(&a.neg());
        assert!(s.is_zero());

        // 7 + 2 = 9 = 3^2: valuation jumps by cancellation of the unit digits.
        let c = PadicValue::from_rational(&rat(2, 1), 3, 8);
        let sum = a.add(&c);
        assert_eq!(sum.valuation(), Some(2));
        assert_eq!(sum, PadicValue::from_rational(&rat(9, 1), 3, 8));
    }

    /// Exhaustive-root oracle: all y mod p^k with y^2 = u and the branch
    /// congruence, keeping only those that lift one level further.
    fn sqrt_oracle(u: u64, p: u64, k: u32) -> Vec<u64> {
        let m = p.pow(k);
        let m_next = p.pow(k + 1);
        let branch = |y: u64| {
            if p == 2 {
                y % 4 == 1
            } else {
                y % p == 1
            }
        };
        let mut out = Vec::new();
        for y in 0..m {
            if (y as u128 * y as u128) % m as u128 == (u % m) as u128 && branch(y) {
                // require a lift mod p^{k+1} to reject parasites
                let lifts = (0..p).any(|t| {
                    let yy = y + t * m;
                    (yy as u128 * yy as u128) % m_next as u128 == (u % m_next) as u128
                });
                if lifts {
                    out.push(y);
                }
            }
        }
        out
    }

    #[test]
    fn hensel_sqrt_examples() {
        // p = 7, u = 8, precision 2: 29^2 = 841 = 8 mod 49, 29 = 1 mod 7.
        let u = PadicValue::from_rational(&rat(8, 1), 7, 8);
        let y = hensel_sqrt_unit(&u, 2).unwrap();
        assert_eq!(y.unit_digits(), &BigUint::from(29u32));
        assert_eq!(sqrt_oracle(8, 7, 2), vec![29]);

        // p = 2, u = 9, precision 5: oracle rejects 13 (no lift mod 64), keeps 29.
        assert_eq!(sqrt_oracle(9, 2, 5), vec![29]);
        let u = PadicValue::from_rational(&rat(9, 1), 2, 12);
        let y = hensel_sqrt_unit(&u, 5).unwrap();
        assert_eq!(y.unit_digits(), &BigUint::from(29u32));

        // p = 5, u = 1: identity.
        let u = PadicValue::one(5, 10);
        let y = hensel_sqrt_unit(&u, 9).unwrap();
        assert_eq!(y.unit_digits(), &BigUint::one());
    }

    #[test]
    fn hensel_sqrt_squares_back() {
        for (p, val) in [(3u64, 7u64), (7, 8), (11, 45), (2, 17), (2, 41)] {
            let prec = 16u32;
            let u = PadicValue::from_rational(&rat(val as i64, 1), p, prec + 2);
            if (p == 2 && val % 8 != 1) || (p != 2 && val % p != 1) {
                assert!(hensel_sqrt_unit(&u, prec).is_err());
                continue;
            }
            let y = hensel_sqrt_unit(&u, prec).unwrap();
            let sq = y.mul(&y);
            let modulus = BigUint::from(p).pow(prec);
            assert_eq!(
                sq.unit_digits() % &modulus,
                u.unit_digits() % &modulus,
                "p={p} val={val}"
            );
            if p == 2 {
                assert_eq!(y.unit_residue_mod(4), 1);
            } else {
                assert_eq!(y.unit_residue_mod(p), 1);
            }
        }
    }

    #[test]
    fn hensel_domain_errors() {
        let u = PadicValue::from_rational(&rat(3, 1), 7, 8);
        assert!(matches!(hensel_sqrt_unit(&u, 4), Err(Error::NotInDomain(_))));
        let u = PadicValue::from_rational(&rat(5, 1), 2, 8);
        assert!(hensel_sqrt_unit(&u, 4).is_err());
    }

    #[test]
    fn matrix_inverse_mod_pk() {
        let p = 3u64;
        let prec = 5u32;
        let m = PadicMatrix::from_entries(
            p,
            2,
            prec,
            vec![
                BigUint::from(2u32),
                BigUint::from(7u32),
                BigUint::from(1u32),
                BigUint::from(4u32),
            ],
        )
        .unwrap();
        let inv = m.inverse();
        let id = m.mul(&inv);
        assert_eq!(id, PadicMatrix::identity(p, 2, prec));
    }
}
