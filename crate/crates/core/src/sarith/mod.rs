//! S-arithmetic number core.
//!
//! `S` is the archimedean place together with a finite set of primes
//! `p_1 < ... < p_s`. The types here model exact elements of `Z_S`
//! (rationals with S-smooth denominator), finite-precision p-adic values,
//! and elements of `Q_S = R x prod Q_p`, plus the zeta density `zeta_S`
//! and Hensel square roots used by the cone coordinates.

mod padic;
mod qs;
mod sint;
mod zeta;

pub use padic::{hensel_sqrt_unit, PadicMatrix, PadicValue};
pub use qs::{cone_sqrt, QsVector, QSElement};
pub use sint::SInteger;
pub use zeta::{riemann_zeta, zeta_s};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::{Error, Result};

/// Default number of p-adic digits tracked per prime.
pub const DEFAULT_PADIC_PRECISION: u32 = 24;

/// The prime set S (without the archimedean place), the modulus `L_S`,
/// and the per-prime working precision.
///
/// `L_S = prod L_p` with `L_p = p` for odd `p` and `L_2 = 8`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SArithmeticContext {
    primes: Vec<u64>,
    precision: Vec<u32>,
    l_s: u64,
}

impl SArithmeticContext {
    /// Context with the default precision. Primes must be distinct and prime.
    pub fn new(primes: &[u64]) -> Result<Self> {
        Self::with_precision(primes, &vec![DEFAULT_PADIC_PRECISION; primes.len()])
    }

    pub fn with_precision(primes: &[u64], precision: &[u32]) -> Result<Self> {
        if precision.len() != primes.len() {
            return Err(Error::NotInDomain(
                "precision list must match prime list".into(),
            ));
        }
        let mut sorted = primes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != primes.len() {
            return Err(Error::NotInDomain("primes must be distinct".into()));
        }
        for &p in primes {
            if !is_prime_u64(p) {
                return Err(Error::NotInDomain(format!("{p} is not prime")));
            }
        }
        for &m in precision {
            if m < 3 {
                return Err(Error::NotInDomain("p-adic precision must be >= 3".into()));
            }
        }
        let mut ordered: Vec<(u64, u32)> =
            primes.iter().copied().zip(precision.iter().copied()).collect();
        ordered.sort_unstable_by_key(|&(p, _)| p);
        let l_s = ordered.iter().map(|&(p, _)| l_p(p)).product();
        Ok(Self {
            primes: ordered.iter().map(|&(p, _)| p).collect(),
            precision: ordered.iter().map(|&(_, m)| m).collect(),
            l_s,
        })
    }

    /// The classical case `S = {infinity}`.
    pub fn real_only() -> Self {
        Self {
            primes: Vec::new(),
            precision: Vec::new(),
            l_s: 1,
        }
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn num_primes(&self) -> usize {
        self.primes.len()
    }

    pub fn l_s(&self) -> u64 {
        self.l_s
    }

    pub fn precision(&self, idx: usize) -> u32 {
        self.precision[idx]
    }

    pub fn prime_index(&self, p: u64) -> Option<usize> {
        self.primes.iter().position(|&q| q == p)
    }

    /// Is `m` coprime to every prime of S (i.e. in `N_S`)? Requires `m >= 1`.
    pub fn in_ns(&self, m: u64) -> bool {
        debug_assert!(m >= 1);
        self.primes.iter().all(|&p| m % p != 0)
    }

    pub fn in_ns_big(&self, m: &BigUint) -> bool {
        self.primes
            .iter()
            .all(|&p| !(m % BigUint::from(p)).is_zero())
    }

    /// Strips all S-prime factors: returns (`n` with S-primes removed, exponents).
    pub fn strip_s_primes(&self, n: &BigUint) -> (BigUint, Vec<u32>) {
        let mut m = n.clone();
        let mut exps = vec![0u32; self.primes.len()];
        if m.is_zero() {
            return (m, exps);
        }
        for (i, &p) in self.primes.iter().enumerate() {
            let pb = BigUint::from(p);
            while (&m % &pb).is_zero() {
                m /= &pb;
                exps[i] += 1;
            }
        }
        (m, exps)
    }
}

/// `L_p`: `p` for odd primes, `8` for `p = 2`.
pub fn l_p(p: u64) -> u64 {
    if p == 2 {
        8
    } else {
        p
    }
}

/// p-adic valuation of a nonzero integer; `None` encodes `+infinity` (zero).
pub fn padic_valuation_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0i64;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// p-adic valuation of an exact rational; `None` encodes `+infinity` (zero).
pub fn padic_valuation(q: &BigRational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let vn = padic_valuation_int(q.numer(), p).expect("nonzero numerator");
    let vd = padic_valuation_int(q.denom(), p).expect("nonzero denominator");
    Some(vn - vd)
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = 37u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
