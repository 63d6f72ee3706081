use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use super::integer::{is_prime_u64, mul_mod, pow_mod, reduce_mod};
use super::{Field, FieldDescriptor, FieldError, SquareClass};

/// The prime field `F_p`, elements stored as residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
    nonsquare: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime_u64(p) {
            return Err(FieldError::InvalidDescriptor(format!("{p} is not prime")));
        }
        if p == 2 {
            return Err(FieldError::InvalidDescriptor("characteristic 2 is not supported".into()));
        }
        if p >= 1 << 62 {
            return Err(FieldError::InvalidDescriptor(format!("{p} is too large")));
        }
        let nonsquare = (2..p).find(|&x| pow_mod(x, (p - 1) / 2, p) == p - 1).expect("odd prime");
        Ok(Self { p, nonsquare })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The least quadratic nonresidue.
    pub fn least_nonsquare(&self) -> u64 {
        self.nonsquare
    }

    fn euler(&self, x: u64) -> bool {
        x == 0 || pow_mod(x, (self.p - 1) / 2, self.p) == 1
    }

    /// Tonelli-Shanks; `x` must be a square.
    fn tonelli_shanks(&self, x: u64) -> u64 {
        let p = self.p;
        if x == 0 {
            return 0;
        }
        let mut q = p - 1;
        let mut s = 0;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut m = s;
        let mut c = pow_mod(self.nonsquare, q, p);
        let mut t = pow_mod(x, q, p);
        let mut r = pow_mod(x, (q + 1) / 2, p);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let b = pow_mod(c, 1 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        r.min(p - r)
    }
}

impl Field for PrimeField {
    type Elem = u64;
    type ExtBase = PrimeField;

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::PrimeField { p: self.p }
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.p as i128) as u64
    }

    fn from_rational(&self, q: &BigRational) -> Result<u64, FieldError> {
        let n = reduce_mod(q.numer(), self.p);
        let d = reduce_mod(q.denom(), self.p);
        if d == 0 {
            return Err(FieldError::DividesModulus { p: self.p });
        }
        Ok(mul_mod(n, self.inv(&d)?, self.p))
    }

    fn contains(&self, x: &u64) -> bool {
        *x < self.p
    }

    fn add(&self, x: &u64, y: &u64) -> u64 {
        ((*x as u128 + *y as u128) % self.p as u128) as u64
    }

    fn sub(&self, x: &u64, y: &u64) -> u64 {
        ((*x as u128 + (self.p - *y % self.p) as u128) % self.p as u128) as u64
    }

    fn mul(&self, x: &u64, y: &u64) -> u64 {
        mul_mod(*x, *y, self.p)
    }

    fn neg(&self, x: &u64) -> u64 {
        (self.p - *x % self.p) % self.p
    }

    fn inv(&self, x: &u64) -> Result<u64, FieldError> {
        if *x % self.p == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(pow_mod(*x, self.p - 2, self.p))
    }

    fn is_square(&self, x: &u64) -> Result<bool, FieldError> {
        if *x == 0 {
            return Err(FieldError::ZeroInput);
        }
        Ok(self.euler(*x))
    }

    fn square_class(&self, x: &u64) -> Result<SquareClass<u64>, FieldError> {
        if *x == 0 {
            return Err(FieldError::ZeroInput);
        }
        let representative = if self.euler(*x) { 1 } else { self.nonsquare };
        Ok(SquareClass { representative })
    }

    fn split_square(&self, x: &u64) -> Result<(u64, u64), FieldError> {
        let r = self.square_class(x)?.representative;
        let t = self.tonelli_shanks(self.div(x, &r)?);
        Ok((r, t))
    }

    fn sqrt(&self, x: &u64) -> Result<u64, FieldError> {
        if !self.euler(*x) {
            return Err(FieldError::NotASquare(x.to_string()));
        }
        Ok(self.tonelli_shanks(*x))
    }

    fn square_class_reps(&self) -> Option<Vec<u64>> {
        Some(vec![1, self.nonsquare])
    }

    fn residue(&self, x: &u64) -> Option<u64> {
        Some(*x)
    }

    fn to_rational(&self, x: &u64) -> Option<BigRational> {
        // Symmetric lift, used only for display and diagnostics.
        let v = if *x > self.p / 2 { *x as i128 - self.p as i128 } else { *x as i128 };
        Some(BigRational::from_integer(BigInt::from(v)))
    }

    fn extension_base(&self) -> Option<PrimeField> {
        Some(*self)
    }

    fn parse_elem(&self, s: &str) -> Result<u64, FieldError> {
        let t = s.trim();
        let t = t.strip_prefix('+').unwrap_or(t);
        let parse_int = |u: &str| -> Result<u64, FieldError> {
            let n: BigInt = u.trim().parse().map_err(|_| FieldError::Parse(s.to_string()))?;
            Ok(reduce_mod(&n, self.p))
        };
        match t.split_once('/') {
            Some((n, d)) => {
                let d = parse_int(d)?;
                if d == 0 {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(mul_mod(parse_int(n)?, self.inv(&d)?, self.p))
            }
            None => parse_int(t),
        }
    }

    fn format_elem(&self, x: &u64) -> String {
        x.to_string()
    }

    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R, _height: u32) -> u64 {
        rng.gen_range(0..self.p)
    }
}
