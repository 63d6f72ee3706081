//! Integer helpers: trial-division factoring, squarefree parts, Legendre
//! symbols and a deterministic primality test for `u64`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::FieldError;

/// Default trial-division bound for factoring numerators and denominators.
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Reduces an arbitrary integer into `[0, p)`.
pub(crate) fn reduce_mod(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

/// Legendre symbol `(u/p)` for an odd prime `p` not dividing `u`, computed as
/// `u^((p-1)/2) mod p`.
pub fn legendre(u: &BigInt, p: u64) -> Result<i8, FieldError> {
    let r = reduce_mod(u, p);
    if r == 0 {
        return Err(FieldError::DividesModulus { p });
    }
    let e = pow_mod(r, (p - 1) / 2, p);
    Ok(if e == 1 { 1 } else { -1 })
}

/// Prime factorisation of a positive integer by trial division up to `bound`.
///
/// A cofactor left after trial division is accepted as prime when it is below
/// `bound^2`, or as the square of a prime when its square root is. Anything
/// else cannot be certified and is reported as an error.
pub fn factor(n: &BigUint, bound: u64) -> Result<Vec<(u64, u32)>, FieldError> {
    if n.is_zero() {
        return Err(FieldError::ZeroInput);
    }
    let Some(mut m) = n.to_u128() else {
        return Err(FieldError::FactorBoundExceeded(n.to_string()));
    };
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d * d <= m && d <= bound as u128 {
        if m % d == 0 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            out.push((d as u64, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        let b2 = bound as u128 * bound as u128;
        if d * d > m || m < b2 {
            out.push((to_u64_prime(m, n)?, 1));
        } else {
            let r = m.sqrt();
            if r * r == m && r < b2 {
                out.push((to_u64_prime(r, n)?, 2));
            } else {
                return Err(FieldError::FactorBoundExceeded(n.to_string()));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

fn to_u64_prime(m: u128, n: &BigUint) -> Result<u64, FieldError> {
    u64::try_from(m).map_err(|_| FieldError::FactorBoundExceeded(n.to_string()))
}

/// Splits a nonzero integer as `n = s * r^2` with `s` squarefree (sign kept
/// on `s`) and `r > 0`.
pub fn squarefree_split(n: &BigInt, bound: u64) -> Result<(BigInt, BigInt), FieldError> {
    if n.is_zero() {
        return Err(FieldError::ZeroInput);
    }
    let mut s = BigInt::one();
    let mut r = BigInt::one();
    for (p, e) in factor(n.magnitude(), bound)? {
        let p = BigInt::from(p);
        if e % 2 == 1 {
            s *= &p;
        }
        for _ in 0..e / 2 {
            r *= &p;
        }
    }
    if n.sign() == Sign::Minus {
        s = -s;
    }
    Ok((s, r))
}

/// Exact integer square root, if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a nonnegative `i128`, if any.
pub fn exact_sqrt_i128(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = (n as u128).sqrt() as i128;
    (r * r == n).then_some(r)
}

/// Valuation of `n` at `p` together with the `p`-free part.
pub fn split_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    while !m.is_zero() && m.is_multiple_of(&p) {
        m /= &p;
        v += 1;
    }
    (v, m)
}
