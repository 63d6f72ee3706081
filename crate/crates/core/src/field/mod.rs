//! Ground fields and their square-class semantics.
//!
//! Every field is a small value implementing [`Field`]; elements are plain
//! data and all arithmetic goes through the field value. Three descriptors
//! (`Q`, `R`, `Qbar`) share exact rational arithmetic and differ only in how
//! they answer square and isotropy questions.

pub mod integer;
mod prime;
mod quadratic;
mod rational;

use std::fmt;
use std::hash::Hash;

use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use prime::PrimeField;
pub use quadratic::{QuadElem, QuadExt};
pub use rational::{RationalField, Semantics};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("zero input")]
    ZeroInput,
    #[error("not a quadratic extension field")]
    NotAnExtensionField,
    #[error("{0} is not a square")]
    NotASquare(String),
    #[error("operation not supported over {0}")]
    UnsupportedField(String),
    #[error("invalid field descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("cannot factor {0} within the trial-division bound")]
    FactorBoundExceeded(String),
    #[error("{p} divides the argument")]
    DividesModulus { p: u64 },
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// Serializable description of a supported ground field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "field")]
pub enum FieldDescriptor {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "Fp")]
    PrimeField { p: u64 },
    #[serde(rename = "R")]
    RealsModel,
    #[serde(rename = "Qbar")]
    AlgClosedModel,
    #[serde(rename = "ext")]
    QuadraticExtension { base: Box<FieldDescriptor>, a: String },
}

impl FieldDescriptor {
    pub fn is_rational_model(&self) -> bool {
        matches!(self, Self::Rationals | Self::RealsModel | Self::AlgClosedModel)
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rationals => write!(f, "Q"),
            Self::PrimeField { p } => write!(f, "F_{p}"),
            Self::RealsModel => write!(f, "R"),
            Self::AlgClosedModel => write!(f, "Qbar"),
            Self::QuadraticExtension { base, a } => write!(f, "{base}(sqrt({a}))"),
        }
    }
}

/// Canonical representative of a coset of `k*/(k*)^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareClass<E> {
    pub representative: E,
}

/// A field with exact, canonical element representations.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync + 'static;
    /// Field with the same element type over which quadratic extensions of
    /// this field are built.
    type ExtBase: Field<Elem = Self::Elem>;

    fn descriptor(&self) -> FieldDescriptor;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem, FieldError>;
    /// Whether `x` is a canonical element of this field.
    fn contains(&self, x: &Self::Elem) -> bool;

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn inv(&self, x: &Self::Elem) -> Result<Self::Elem, FieldError>;

    fn div(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    fn is_zero(&self, x: &Self::Elem) -> bool {
        *x == self.zero()
    }

    fn is_one(&self, x: &Self::Elem) -> bool {
        *x == self.one()
    }

    fn square(&self, x: &Self::Elem) -> Self::Elem {
        self.mul(x, x)
    }

    /// Square test under the field's semantics.
    fn is_square(&self, x: &Self::Elem) -> Result<bool, FieldError>;

    /// Canonical square-class representative under the field's semantics.
    fn square_class(&self, x: &Self::Elem) -> Result<SquareClass<Self::Elem>, FieldError>;

    /// Writes `x = r * t^2` with `t` an element of the field. Over `Q` and
    /// `F_p`, `r` is the canonical square-class representative; over the
    /// `R`/`Qbar` models it is the squarefree rational part, which may differ
    /// from the semantic representative.
    fn split_square(&self, x: &Self::Elem) -> Result<(Self::Elem, Self::Elem), FieldError>;

    /// An element `y` with `y^2 = x`.
    fn sqrt(&self, x: &Self::Elem) -> Result<Self::Elem, FieldError>;

    /// Representatives of the whole square-class group when it is finite.
    fn square_class_reps(&self) -> Option<Vec<Self::Elem>>;

    fn conjugate(&self, _x: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Err(FieldError::NotAnExtensionField)
    }

    /// Rational value of `x` for the fields built on rational arithmetic.
    fn to_rational(&self, _x: &Self::Elem) -> Option<BigRational> {
        None
    }

    /// Canonical residue of `x` for prime fields.
    fn residue(&self, _x: &Self::Elem) -> Option<u64> {
        None
    }

    /// The field over which `k(sqrt a)` is constructed, or `None` when this
    /// field is itself an extension.
    fn extension_base(&self) -> Option<Self::ExtBase>;

    fn parse_elem(&self, s: &str) -> Result<Self::Elem, FieldError>;
    fn format_elem(&self, x: &Self::Elem) -> String;

    /// A random element of small height, used by samplers and tests.
    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R, height: u32) -> Self::Elem;

    fn pow(&self, x: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

/// Checked arithmetic entry point: validates that both operands belong to
/// `field` before combining them. `y` is ignored by the unary operations.
pub fn field_arithmetic<F: Field>(
    field: &F,
    op: ArithOp,
    x: &F::Elem,
    y: &F::Elem,
) -> Result<F::Elem, FieldError> {
    let unary = matches!(op, ArithOp::Neg | ArithOp::Inv);
    if !field.contains(x) || (!unary && !field.contains(y)) {
        return Err(FieldError::FieldMismatch);
    }
    match op {
        ArithOp::Add => Ok(field.add(x, y)),
        ArithOp::Sub => Ok(field.sub(x, y)),
        ArithOp::Mul => Ok(field.mul(x, y)),
        ArithOp::Div => field.div(x, y),
        ArithOp::Neg => Ok(field.neg(x)),
        ArithOp::Inv => field.inv(x),
    }
}

/// Validates a prime-field modulus and builds the descriptor-level field.
pub fn prime_field(p: u64) -> Result<PrimeField, FieldError> {
    PrimeField::new(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn descriptor_json_shapes() {
        let q = serde_json::to_string(&FieldDescriptor::Rationals).unwrap();
        assert_eq!(q, r#"{"field":"Q"}"#);
        let fp = serde_json::to_string(&FieldDescriptor::PrimeField { p: 5 }).unwrap();
        assert_eq!(fp, r#"{"field":"Fp","p":5}"#);
        let back: FieldDescriptor = serde_json::from_str(r#"{"field":"Qbar"}"#).unwrap();
        assert_eq!(back, FieldDescriptor::AlgClosedModel);
        let r: FieldDescriptor = serde_json::from_str(r#"{"field":"R"}"#).unwrap();
        assert_eq!(r, FieldDescriptor::RealsModel);
    }

    #[test]
    fn checked_arithmetic_rejects_foreign_elements() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(field_arithmetic(&f5, ArithOp::Mul, &3, &4), Ok(2));
        assert_eq!(
            field_arithmetic(&f5, ArithOp::Add, &6, &1),
            Err(FieldError::FieldMismatch)
        );
        assert_eq!(
            field_arithmetic(&f5, ArithOp::Div, &1, &0),
            Err(FieldError::DivisionByZero)
        );
        let q = RationalField::Q;
        let two = BigRational::from_integer(2.into());
        assert_eq!(
            field_arithmetic(&q, ArithOp::Inv, &two, &two),
            Ok(BigRational::new(1.into(), 2.into()))
        );
        assert_eq!(
            field_arithmetic(&q, ArithOp::Neg, &BigRational::one(), &two),
            Ok(-BigRational::one())
        );
    }
}
