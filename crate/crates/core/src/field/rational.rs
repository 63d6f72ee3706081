use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::integer::{exact_sqrt, squarefree_split, DEFAULT_FACTOR_BOUND};
use super::{Field, FieldDescriptor, FieldError, SquareClass};

/// How square questions are answered for a field carried on exact rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    /// The rational numbers themselves.
    Exact,
    /// Real closed semantics: positive numbers are squares.
    Real,
    /// Algebraically closed semantics: every nonzero number is a square.
    AlgClosed,
}

/// `Q`, or a model of `R` / `Qbar` whose inputs are rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RationalField {
    pub semantics: Semantics,
    pub factor_bound: u64,
}

impl RationalField {
    pub const Q: Self = Self { semantics: Semantics::Exact, factor_bound: DEFAULT_FACTOR_BOUND };
    pub const R: Self = Self { semantics: Semantics::Real, factor_bound: DEFAULT_FACTOR_BOUND };
    pub const QBAR: Self =
        Self { semantics: Semantics::AlgClosed, factor_bound: DEFAULT_FACTOR_BOUND };

    pub fn with_factor_bound(mut self, bound: u64) -> Self {
        self.factor_bound = bound.max(2);
        self
    }

    fn name(&self) -> &'static str {
        match self.semantics {
            Semantics::Exact => "Q",
            Semantics::Real => "R",
            Semantics::AlgClosed => "Qbar",
        }
    }

    /// Squarefree integer `s` and positive rational `t` with `x = s t^2`.
    fn rational_split(&self, x: &BigRational) -> Result<(BigInt, BigRational), FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        let nd = x.numer() * x.denom();
        let (s, r) = squarefree_split(&nd, self.factor_bound)?;
        Ok((s, BigRational::new(r, x.denom().clone())))
    }

    fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
        if x.is_negative() {
            return None;
        }
        let n = exact_sqrt(x.numer())?;
        let d = exact_sqrt(x.denom())?;
        Some(BigRational::new(n, d))
    }
}

pub(crate) fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Field for RationalField {
    type Elem = BigRational;
    type ExtBase = RationalField;

    fn descriptor(&self) -> FieldDescriptor {
        match self.semantics {
            Semantics::Exact => FieldDescriptor::Rationals,
            Semantics::Real => FieldDescriptor::RealsModel,
            Semantics::AlgClosed => FieldDescriptor::AlgClosedModel,
        }
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, n: i64) -> BigRational {
        int(n)
    }

    fn from_rational(&self, q: &BigRational) -> Result<BigRational, FieldError> {
        Ok(q.clone())
    }

    fn contains(&self, _x: &BigRational) -> bool {
        // BigRational values are always kept in lowest terms.
        true
    }

    fn add(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x + y
    }

    fn sub(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x - y
    }

    fn mul(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x * y
    }

    fn neg(&self, x: &BigRational) -> BigRational {
        -x
    }

    fn inv(&self, x: &BigRational) -> Result<BigRational, FieldError> {
        if x.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(x.recip())
        }
    }

    fn is_zero(&self, x: &BigRational) -> bool {
        x.is_zero()
    }

    fn is_square(&self, x: &BigRational) -> Result<bool, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        Ok(match self.semantics {
            Semantics::Exact => Self::rational_sqrt(x).is_some(),
            Semantics::Real => x.is_positive(),
            Semantics::AlgClosed => true,
        })
    }

    fn square_class(&self, x: &BigRational) -> Result<SquareClass<BigRational>, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        let representative = match self.semantics {
            Semantics::Exact => BigRational::from_integer(self.rational_split(x)?.0),
            Semantics::Real => int(if x.is_positive() { 1 } else { -1 }),
            Semantics::AlgClosed => int(1),
        };
        Ok(SquareClass { representative })
    }

    fn split_square(&self, x: &BigRational) -> Result<(BigRational, BigRational), FieldError> {
        let (s, t) = self.rational_split(x)?;
        Ok((BigRational::from_integer(s), t))
    }

    fn sqrt(&self, x: &BigRational) -> Result<BigRational, FieldError> {
        if let Some(r) = Self::rational_sqrt(x) {
            return Ok(r);
        }
        match self.semantics {
            Semantics::Exact => Err(FieldError::NotASquare(x.to_string())),
            Semantics::Real if x.is_negative() => Err(FieldError::NotASquare(x.to_string())),
            _ => Err(FieldError::UnsupportedField(format!(
                "{} (irrational square root of {x})",
                self.name()
            ))),
        }
    }

    fn square_class_reps(&self) -> Option<Vec<BigRational>> {
        match self.semantics {
            Semantics::Exact => None,
            Semantics::Real => Some(vec![int(1), int(-1)]),
            Semantics::AlgClosed => Some(vec![int(1)]),
        }
    }

    fn to_rational(&self, x: &BigRational) -> Option<BigRational> {
        Some(x.clone())
    }

    fn extension_base(&self) -> Option<RationalField> {
        Some(RationalField::Q.with_factor_bound(self.factor_bound))
    }

    fn parse_elem(&self, s: &str) -> Result<BigRational, FieldError> {
        let t = s.trim();
        let t = t.strip_prefix('+').unwrap_or(t);
        if let Ok(q) = BigRational::from_str(t) {
            if !t.contains('/') || !q.denom().is_zero() {
                return Ok(q);
            }
        }
        if let Ok(n) = BigInt::from_str(t) {
            return Ok(BigRational::from_integer(n));
        }
        Err(FieldError::Parse(s.to_string()))
    }

    fn format_elem(&self, x: &BigRational) -> String {
        x.to_string()
    }

    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R, height: u32) -> BigRational {
        let h = height.max(1) as i64;
        let n = rng.gen_range(-h..=h);
        let d = rng.gen_range(1..=h);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_square_classes() {
        let f = RationalField::Q;
        let rep = |x| f.square_class(&x).unwrap().representative;
        assert_eq!(rep(q(8, 1)), int(2));
        assert_eq!(rep(q(-4, 1)), int(-1));
        assert_eq!(rep(q(3, 12)), int(1));
        assert_eq!(rep(q(2, 3)), int(6));
        assert!(f.square_class(&int(0)).is_err());
        assert!(f.is_square(&q(9, 4)).unwrap());
        assert!(!f.is_square(&q(-9, 4)).unwrap());
        assert_eq!(f.sqrt(&q(9, 4)).unwrap(), q(3, 2));
    }

    #[test]
    fn split_square_reconstructs() {
        let f = RationalField::Q;
        for x in [q(18, 5), q(-50, 27), q(1, 1), q(-7, 1)] {
            let (r, t) = f.split_square(&x).unwrap();
            assert_eq!(&r * &t * &t, x);
        }
    }

    #[test]
    fn model_semantics() {
        let r = RationalField::R;
        assert_eq!(r.square_class(&int(-3)).unwrap().representative, int(-1));
        assert_eq!(r.square_class(&int(2)).unwrap().representative, int(1));
        assert!(r.is_square(&int(2)).unwrap());
        assert!(matches!(r.sqrt(&int(2)), Err(FieldError::UnsupportedField(_))));
        let c = RationalField::QBAR;
        assert_eq!(c.square_class(&int(-3)).unwrap().representative, int(1));
        assert_eq!(c.square_class_reps().unwrap().len(), 1);
        assert_eq!(r.square_class_reps().unwrap().len(), 2);
    }

    #[test]
    fn parse_round_trip() {
        let f = RationalField::Q;
        assert_eq!(f.parse_elem("-2/6").unwrap(), q(-1, 3));
        assert_eq!(f.parse_elem(" +5 ").unwrap(), int(5));
        assert!(f.parse_elem("x").is_err());
        assert!(f.parse_elem("1/0").is_err());
        assert_eq!(f.format_elem(&q(-1, 3)), "-1/3");
    }
}
