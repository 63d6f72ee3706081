//! Ternary quadratic forms, Hilbert symbols and quaternion algebra classes.
//!
//! Conics are written `X^2 - a Y^2 - b Z^2`; the attached quaternion algebra
//! is `(a, b)`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::integer::{exact_sqrt_i128, factor, is_prime_u64, legendre, split_valuation, DEFAULT_FACTOR_BOUND};
use crate::field::{Field, FieldDescriptor, FieldError};
use crate::linalg::{LinalgError, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadError {
    #[error("the quadratic form is identically zero")]
    ZeroForm,
    #[error("the conic is not smooth")]
    NotRank3,
    #[error("quaternion parameters must be nonzero")]
    ZeroParameter,
    #[error("{0} is not a place of Q")]
    BadPlace(String),
    #[error("{p} divides the argument")]
    DividesP { p: u64 },
    #[error("classes over different fields")]
    FieldMismatch,
    #[error("quaternions from different algebras")]
    AlgebraMismatch,
    #[error("not supported over {0}")]
    Unsupported(String),
    #[error("odd number of ramified places for ({0}, {1})")]
    ProductFormula(String, String),
    #[error("no rational point of height at most {0}")]
    RationalPointSearchExceeded(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A place of `Q`: a prime or the real place. Primes sort before infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

/// Legendre symbol `(u/p)` for an odd prime `p` not dividing `u`.
pub fn legendre_symbol(u: &BigInt, p: u64) -> Result<i8, QuadError> {
    if p == 2 || !is_prime_u64(p) {
        return Err(QuadError::BadPlace(p.to_string()));
    }
    legendre(u, p).map_err(|_| QuadError::DividesP { p })
}

/// Integer in the square class of a nonzero rational: `n/d ~ n*d`.
fn class_integer(q: &BigRational) -> Result<BigInt, QuadError> {
    if q.is_zero() {
        return Err(QuadError::ZeroParameter);
    }
    Ok(q.numer() * q.denom())
}

fn mod8(u: &BigInt) -> u64 {
    u.mod_floor(&BigInt::from(8)).to_u64().expect("small residue")
}

/// Hilbert symbol `(a, b)_v` of nonzero rationals.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: Place) -> Result<i8, QuadError> {
    let (x, y) = (class_integer(a)?, class_integer(b)?);
    match place {
        Place::Infinity => Ok(if x.is_negative() && y.is_negative() { -1 } else { 1 }),
        Place::Prime(2) => {
            let (alpha, u) = split_valuation(&x, 2);
            let (beta, v) = split_valuation(&y, 2);
            let (u, v) = (mod8(&u), mod8(&v));
            let eps = |t: u64| ((t - 1) / 2) % 2;
            let omega = |t: u64| ((t * t - 1) / 8) % 2;
            let e = eps(u) * eps(v) + alpha as u64 * omega(v) + beta as u64 * omega(u);
            Ok(if e % 2 == 0 { 1 } else { -1 })
        }
        Place::Prime(p) => {
            if !is_prime_u64(p) {
                return Err(QuadError::BadPlace(p.to_string()));
            }
            let (alpha, u) = split_valuation(&x, p);
            let (beta, v) = split_valuation(&y, p);
            let eps = ((p - 1) / 2) % 2;
            let mut s = if (alpha as u64 * beta as u64 * eps) % 2 == 1 { -1 } else { 1 };
            if beta % 2 == 1 {
                s *= legendre_symbol(&u, p)?;
            }
            if alpha % 2 == 1 {
                s *= legendre_symbol(&v, p)?;
            }
            Ok(s)
        }
    }
}

/// `{inf, 2}` together with the odd primes dividing a numerator or
/// denominator of `a` or `b`.
pub fn relevant_places(a: &BigRational, b: &BigRational, bound: u64) -> Result<BTreeSet<Place>, QuadError> {
    let mut out = BTreeSet::from([Place::Infinity, Place::Prime(2)]);
    for q in [a, b] {
        let n = class_integer(q)?;
        for (p, _) in factor(n.magnitude(), bound)? {
            out.insert(Place::Prime(p));
        }
    }
    Ok(out)
}

/// Places of `Q` where `(a, b)` ramifies.
pub fn ramified_places(a: &BigRational, b: &BigRational, bound: u64) -> Result<BTreeSet<Place>, QuadError> {
    let mut out = BTreeSet::new();
    for v in relevant_places(a, b, bound)? {
        if hilbert_symbol(a, b, v)? == -1 {
            out.insert(v);
        }
    }
    if out.len() % 2 == 1 {
        return Err(QuadError::ProductFormula(a.to_string(), b.to_string()));
    }
    Ok(out)
}

/// Isomorphism class of a quaternion algebra `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuaternionClass {
    /// Over `Q`: the set of ramified places.
    Rational { ramified: BTreeSet<Place> },
    /// Over the reals model: split or Hamilton's quaternions.
    Real { hamilton: bool },
    /// Over finite and algebraically closed fields every class is split.
    Split,
}

impl QuaternionClass {
    pub fn is_split(&self) -> bool {
        match self {
            Self::Rational { ramified } => ramified.is_empty(),
            Self::Real { hamilton } => !hamilton,
            Self::Split => true,
        }
    }
}

impl fmt::Display for QuaternionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational { ramified } if ramified.is_empty() => write!(f, "split"),
            Self::Rational { ramified } => {
                let v: Vec<String> = ramified.iter().map(Place::to_string).collect();
                write!(f, "ramified at {{{}}}", v.join(", "))
            }
            Self::Real { hamilton: true } => write!(f, "Hamilton"),
            Self::Real { hamilton: false } | Self::Split => write!(f, "split"),
        }
    }
}

pub fn quaternion_class<F: Field>(field: &F, a: &F::Elem, b: &F::Elem) -> Result<QuaternionClass, QuadError> {
    if field.is_zero(a) || field.is_zero(b) {
        return Err(QuadError::ZeroParameter);
    }
    match field.descriptor() {
        FieldDescriptor::Rationals => {
            let (a, b) = (field.to_rational(a).expect("rational"), field.to_rational(b).expect("rational"));
            Ok(QuaternionClass::Rational { ramified: ramified_places(&a, &b, DEFAULT_FACTOR_BOUND)? })
        }
        FieldDescriptor::RealsModel => {
            let (a, b) = (field.to_rational(a).expect("rational"), field.to_rational(b).expect("rational"));
            Ok(QuaternionClass::Real { hamilton: a.is_negative() && b.is_negative() })
        }
        FieldDescriptor::PrimeField { .. } | FieldDescriptor::AlgClosedModel => Ok(QuaternionClass::Split),
        d @ FieldDescriptor::QuadraticExtension { .. } => Err(QuadError::Unsupported(d.to_string())),
    }
}

pub fn quaternion_iso(c1: &QuaternionClass, c2: &QuaternionClass) -> Result<bool, QuadError> {
    match (c1, c2) {
        (QuaternionClass::Rational { .. }, QuaternionClass::Rational { .. })
        | (QuaternionClass::Real { .. }, QuaternionClass::Real { .. })
        | (QuaternionClass::Split, QuaternionClass::Split) => Ok(c1 == c2),
        _ => Err(QuadError::FieldMismatch),
    }
}

/// Whether `X^2 - a Y^2 - b Z^2` has a nontrivial zero.
pub fn is_isotropic_ternary<F: Field>(field: &F, a: &F::Elem, b: &F::Elem) -> Result<bool, QuadError> {
    if field.is_zero(a) || field.is_zero(b) {
        return Err(QuadError::NotRank3);
    }
    Ok(quaternion_class(field, a, b)?.is_split())
}

/// An element `ξ0 + ξ1 x1 + ξ2 x2 + ξ3 x3` of the quaternion algebra `(a, b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quaternion<F: Field> {
    pub a: F::Elem,
    pub b: F::Elem,
    pub xi: [F::Elem; 4],
}

impl<F: Field> Quaternion<F> {
    pub fn new(a: F::Elem, b: F::Elem, xi: [F::Elem; 4]) -> Self {
        Self { a, b, xi }
    }

    pub fn multiply(&self, field: &F, other: &Self) -> Result<Self, QuadError> {
        if self.a != other.a || self.b != other.b {
            return Err(QuadError::AlgebraMismatch);
        }
        let f = field;
        let (a, b) = (&self.a, &self.b);
        let ab = f.mul(a, b);
        let [p0, p1, p2, p3] = &self.xi;
        let [q0, q1, q2, q3] = &other.xi;
        let m = |x: &F::Elem, y: &F::Elem| f.mul(x, y);
        // x1^2 = a, x2^2 = b, x3^2 = -ab, x1x2 = x3, x2x3 = -b x1, x3x1 = -a x2
        let r0 = f.sum(&[m(p0, q0), f.mul(a, &m(p1, q1)), f.mul(b, &m(p2, q2)), f.neg(&f.mul(&ab, &m(p3, q3)))]);
        let r1 = f.sum(&[m(p0, q1), m(p1, q0), f.neg(&f.mul(b, &m(p2, q3))), f.mul(b, &m(p3, q2))]);
        let r2 = f.sum(&[m(p0, q2), m(p2, q0), f.mul(a, &m(p1, q3)), f.neg(&f.mul(a, &m(p3, q1)))]);
        let r3 = f.sum(&[m(p0, q3), m(p3, q0), m(p1, q2), f.neg(&m(p2, q1))]);
        Ok(Self { a: a.clone(), b: b.clone(), xi: [r0, r1, r2, r3] })
    }

    /// `ξ0^2 - a ξ1^2 - b ξ2^2 + ab ξ3^2`.
    pub fn norm(&self, field: &F) -> F::Elem {
        let f = field;
        let [x0, x1, x2, x3] = &self.xi;
        let ab = f.mul(&self.a, &self.b);
        f.sum(&[
            f.square(x0),
            f.neg(&f.mul(&self.a, &f.square(x1))),
            f.neg(&f.mul(&self.b, &f.square(x2))),
            f.mul(&ab, &f.square(x3)),
        ])
    }
}

/// `X^2 - a Y^2 - b Z^2`; `b = 0` encodes rank 2 and `a = b = 0` rank 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConicNormalForm<E> {
    pub a: E,
    pub b: E,
}

/// Result of bringing a ternary form to normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct ConicNormalization<F: Field> {
    pub rank: usize,
    /// Canonical square-class representatives.
    pub form: ConicNormalForm<F::Elem>,
    /// Exact reduced parameters realised by `basis`.
    pub exact: ConicNormalForm<F::Elem>,
    /// `basis^T G basis = scale * diag(1, -exact.a, -exact.b)` (zeros past the rank).
    pub scale: F::Elem,
    pub basis: Matrix<F>,
}

/// Gram matrix of `sum_{i<=j} c_ij X_i X_j` from the coefficients in the
/// order `X0^2, X0X1, X0X2, X1^2, X1X2, X2^2`.
pub fn ternary_from_poly<F: Field>(field: &F, c: &[F::Elem; 6]) -> Matrix<F> {
    let f = field;
    let half = f.inv(&f.from_i64(2)).expect("odd characteristic");
    let h = |x: &F::Elem| f.mul(x, &half);
    let rows = vec![
        vec![c[0].clone(), h(&c[1]), h(&c[2])],
        vec![h(&c[1]), c[3].clone(), h(&c[4])],
        vec![h(&c[2]), h(&c[4]), c[5].clone()],
    ];
    Matrix::from_rows(f, &rows).expect("3x3")
}

/// `v^T G v`.
pub fn evaluate<F: Field>(g: &Matrix<F>, v: &[F::Elem]) -> F::Elem {
    let f = g.field();
    let gv = g.mul_vec(v).expect("matching size");
    f.sum(&v.iter().zip(&gv).map(|(x, y)| f.mul(x, y)).collect::<Vec<_>>())
}

pub fn normalize_conic<F: Field>(g: &Matrix<F>) -> Result<ConicNormalization<F>, QuadError> {
    let f = g.field();
    if g.rows() != 3 || !g.is_symmetric() {
        return Err(LinalgError::NotSymmetric.into());
    }
    if g.is_zero() {
        return Err(QuadError::ZeroForm);
    }
    let (p, d) = g.diagonalize_congruence()?;
    let mut order: Vec<usize> = (0..3).filter(|&i| !f.is_zero(d.get(i, i))).collect();
    let rank = order.len();
    order.extend((0..3).filter(|&i| f.is_zero(d.get(i, i))));
    let mut basis = p.select_cols(&order);
    let diag: Vec<F::Elem> = order.iter().map(|&i| d.get(i, i).clone()).collect();
    let scale = diag[0].clone();
    let mut exact = [f.zero(), f.zero()];
    let mut canon = [f.zero(), f.zero()];
    for k in 1..rank {
        let raw = f.neg(&f.div(&diag[k], &scale)?);
        let (s, t) = f.split_square(&raw)?;
        let tinv = f.inv(&t)?;
        for i in 0..3 {
            let v = f.mul(basis.get(i, k), &tinv);
            basis.set(i, k, v);
        }
        canon[k - 1] = f.square_class(&s)?.representative;
        exact[k - 1] = s;
    }
    let [ea, eb] = exact;
    let [ca, cb] = canon;
    Ok(ConicNormalization {
        rank,
        form: ConicNormalForm { a: ca, b: cb },
        exact: ConicNormalForm { a: ea, b: eb },
        scale,
        basis,
    })
}

/// A nonzero zero of `X^2 - a Y^2 - b Z^2` (with `a`, `b` as produced by
/// [`normalize_conic`]).
///
/// Over prime fields the search is exhaustive. Over the rational models it
/// runs over integer `Y, Z` of height up to `bound`, after checking that the
/// conic is isotropic.
pub fn find_conic_point<F: Field>(field: &F, a: &F::Elem, b: &F::Elem, bound: u64) -> Result<[F::Elem; 3], QuadError> {
    let f = field;
    if let FieldDescriptor::PrimeField { p } = f.descriptor() {
        for y in 0..p {
            let y = f.from_i64(y as i64);
            let rhs = f.add(&f.mul(a, &f.square(&y)), b);
            if let Ok(x) = f.sqrt(&rhs) {
                return Ok([x, y, f.one()]);
            }
        }
        if let Ok(x) = f.sqrt(a) {
            return Ok([x, f.one(), f.zero()]);
        }
        return Err(QuadError::RationalPointSearchExceeded(p));
    }
    let (ar, br) = match (f.to_rational(a), f.to_rational(b)) {
        (Some(x), Some(y)) if x.is_integer() && y.is_integer() => (x, y),
        _ => return Err(QuadError::Unsupported(f.descriptor().to_string())),
    };
    if f.descriptor() == FieldDescriptor::Rationals && !is_isotropic_ternary(f, a, b)? {
        return Err(QuadError::RationalPointSearchExceeded(0));
    }
    let ai = ar.to_integer().to_i128().ok_or(QuadError::RationalPointSearchExceeded(0))?;
    let bi = br.to_integer().to_i128().ok_or(QuadError::RationalPointSearchExceeded(0))?;
    let bound = bound as i128;
    let test = |y: i128, z: i128| -> Option<[F::Elem; 3]> {
        let n = ai.checked_mul(y * y)?.checked_add(bi.checked_mul(z * z)?)?;
        let x = exact_sqrt_i128(n)?;
        Some([f.from_i64(x as i64), f.from_i64(y as i64), f.from_i64(z as i64)])
    };
    for h in 1..=bound {
        for z in 0..=h {
            if let Some(pt) = test(h, z) {
                return Ok(pt);
            }
        }
        for y in 0..h {
            if let Some(pt) = test(y, h) {
                return Ok(pt);
            }
        }
    }
    Err(QuadError::RationalPointSearchExceeded(bound as u64))
}

/// Number of points of the projective conic `X^2 - a Y^2 - b Z^2 = 0` over
/// `F_p`, by enumeration.
pub fn conic_point_count<F: Field>(field: &F, a: &F::Elem, b: &F::Elem) -> Result<u64, QuadError> {
    let FieldDescriptor::PrimeField { p } = field.descriptor() else {
        return Err(QuadError::Unsupported(field.descriptor().to_string()));
    };
    if field.is_zero(a) || field.is_zero(b) {
        return Err(QuadError::NotRank3);
    }
    let f = field;
    let el = |x: u64| f.from_i64(x as i64);
    let mut affine = 0u64;
    for x in 0..p {
        let x2 = f.square(&el(x));
        for y in 0..p {
            let ay2 = f.mul(a, &f.square(&el(y)));
            for z in 0..p {
                let v = f.sub(&f.sub(&x2, &ay2), &f.mul(b, &f.square(&el(z))));
                if f.is_zero(&v) {
                    affine += 1;
                }
            }
        }
    }
    Ok((affine - 1) / (p - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};
    use proptest::prelude::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn rq(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_symbol(&1.into(), 3), Ok(1));
        assert_eq!(legendre_symbol(&2.into(), 7), Ok(1));
        assert_eq!(legendre_symbol(&2.into(), 3), Ok(-1));
        assert_eq!(legendre_symbol(&6.into(), 3), Err(QuadError::DividesP { p: 3 }));
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_symbol(&r(-1), &r(-1), Place::Infinity), Ok(-1));
        assert_eq!(hilbert_symbol(&r(-1), &r(-1), Place::Prime(2)), Ok(-1));
        assert_eq!(hilbert_symbol(&r(3), &r(5), Place::Prime(3)), Ok(-1));
        assert_eq!(hilbert_symbol(&r(7), &r(9), Place::Prime(7)), Ok(1));
        assert_eq!(hilbert_symbol(&r(2), &r(3), Place::Prime(9)), Err(QuadError::BadPlace("9".into())));
        assert_eq!(hilbert_symbol(&r(0), &r(3), Place::Prime(3)), Err(QuadError::ZeroParameter));
    }

    #[test]
    fn isotropy_examples() {
        let q = RationalField::Q;
        assert!(is_isotropic_ternary(&q, &r(-1), &r(1)).unwrap());
        assert!(!is_isotropic_ternary(&q, &r(-1), &r(-1)).unwrap());
        assert!(!is_isotropic_ternary(&q, &r(3), &r(5)).unwrap());
        assert!(is_isotropic_ternary(&RationalField::R, &r(3), &r(-5)).unwrap());
        assert!(!is_isotropic_ternary(&RationalField::R, &r(-3), &r(-5)).unwrap());
        let f3 = PrimeField::new(3).unwrap();
        assert!(is_isotropic_ternary(&f3, &2, &2).unwrap());
        assert!(is_isotropic_ternary(&RationalField::QBAR, &r(-1), &r(-1)).unwrap());
        assert_eq!(is_isotropic_ternary(&q, &r(2), &r(0)), Err(QuadError::NotRank3));
    }

    #[test]
    fn quaternion_class_examples() {
        let q = RationalField::Q;
        let two_inf = BTreeSet::from([Place::Prime(2), Place::Infinity]);
        assert_eq!(quaternion_class(&q, &r(-1), &r(-1)).unwrap(), QuaternionClass::Rational { ramified: two_inf.clone() });
        assert_eq!(quaternion_class(&q, &r(-1), &r(-4)).unwrap(), QuaternionClass::Rational { ramified: two_inf });
        assert!(quaternion_class(&q, &r(1), &r(7)).unwrap().is_split());
        let c1 = quaternion_class(&q, &r(-1), &r(-1)).unwrap();
        let c2 = quaternion_class(&q, &r(-1), &r(-4)).unwrap();
        let c3 = quaternion_class(&q, &r(1), &r(-1)).unwrap();
        assert!(quaternion_iso(&c1, &c2).unwrap());
        assert!(!quaternion_iso(&c1, &c3).unwrap());
        assert!(quaternion_iso(&c3, &c3).unwrap());
        assert_eq!(quaternion_iso(&c1, &QuaternionClass::Split), Err(QuadError::FieldMismatch));
        assert_eq!(quaternion_class(&q, &r(0), &r(1)), Err(QuadError::ZeroParameter));
    }

    #[test]
    fn quaternion_table() {
        let f = RationalField::Q;
        let (a, b) = (r(2), r(3));
        let e = |i: usize| {
            let mut xi = [r(0), r(0), r(0), r(0)];
            xi[i] = r(1);
            Quaternion::<RationalField>::new(a.clone(), b.clone(), xi)
        };
        assert_eq!(e(1).multiply(&f, &e(2)).unwrap(), e(3));
        assert_eq!(e(2).multiply(&f, &e(1)).unwrap().xi, [r(0), r(0), r(0), r(-1)]);
        assert_eq!(e(1).multiply(&f, &e(1)).unwrap().xi, [a.clone(), r(0), r(0), r(0)]);
        assert_eq!(e(3).multiply(&f, &e(3)).unwrap().xi, [r(-6), r(0), r(0), r(0)]);
        let one_plus = Quaternion::<RationalField>::new(a.clone(), b.clone(), [r(1), r(1), r(0), r(0)]);
        assert_eq!(one_plus.norm(&f), r(1) - &a);
        let other = Quaternion::<RationalField>::new(r(5), b, [r(1), r(0), r(0), r(0)]);
        assert_eq!(one_plus.multiply(&f, &other), Err(QuadError::AlgebraMismatch));
    }

    #[test]
    fn normalize_examples() {
        let q = RationalField::Q;
        let g = Matrix::from_i64(&q, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
        let n = normalize_conic(&g).unwrap();
        assert_eq!((n.rank, n.form.a.clone(), n.form.b.clone()), (3, r(-1), r(1)));
        // XY - Z^2
        let g = ternary_from_poly(&q, &[r(0), r(1), r(0), r(0), r(0), r(-1)]);
        let n = normalize_conic(&g).unwrap();
        assert_eq!(n.rank, 3);
        assert!(is_isotropic_ternary(&q, &n.form.a, &n.form.b).unwrap());
        let g = Matrix::from_i64(&q, &[&[1, 0, 0], &[0, -5, 0], &[0, 0, 0]]);
        let n = normalize_conic(&g).unwrap();
        assert_eq!((n.rank, n.form.a, n.form.b), (2, r(5), r(0)));
        assert_eq!(normalize_conic(&Matrix::zeros(&q, 3, 3)), Err(QuadError::ZeroForm));
    }

    #[test]
    fn normalization_realised_by_basis() {
        let q = RationalField::Q;
        let g = ternary_from_poly(&q, &[r(3), r(2), r(0), rq(-8, 3), r(4), r(0)]);
        let n = normalize_conic(&g).unwrap();
        let target = Matrix::from_fn(&q, 3, 3, |i, j| {
            if i != j {
                r(0)
            } else {
                let d = [r(1), -n.exact.a.clone(), -n.exact.b.clone()];
                &n.scale * &d[i]
            }
        });
        assert_eq!(n.basis.transpose().mul(&g).unwrap().mul(&n.basis).unwrap(), target);
    }

    #[test]
    fn conic_points() {
        let q = RationalField::Q;
        let pt = find_conic_point(&q, &r(-1), &r(1), 100).unwrap();
        let v = &pt[0] * &pt[0] + &pt[1] * &pt[1] - &pt[2] * &pt[2];
        assert!(v.is_zero());
        assert!(find_conic_point(&q, &r(-1), &r(-1), 100).is_err());
        let f3 = PrimeField::new(3).unwrap();
        let pt = find_conic_point(&f3, &2, &2, 0).unwrap();
        assert_eq!(f3.sub(&f3.square(&pt[0]), &f3.add(&f3.mul(&2, &f3.square(&pt[1])), &f3.mul(&2, &f3.square(&pt[2])))), 0);
    }

    #[test]
    fn point_counts() {
        let f3 = PrimeField::new(3).unwrap();
        // X^2 + Y^2 - Z^2: a = -1, b = 1
        assert_eq!(conic_point_count(&f3, &2, &1).unwrap(), 4);
        for p in [3u64, 5, 7] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p {
                for b in 1..p {
                    assert_eq!(conic_point_count(&f, &a, &b).unwrap(), p + 1);
                }
            }
        }
    }

    fn nonzero() -> impl Strategy<Value = BigRational> {
        (-30i64..=30, 1i64..=6)
            .prop_filter("nonzero", |(n, _)| *n != 0)
            .prop_map(|(n, d)| rq(n, d))
    }

    fn place() -> impl Strategy<Value = Place> {
        prop_oneof![
            Just(Place::Infinity),
            Just(Place::Prime(2)),
            Just(Place::Prime(3)),
            Just(Place::Prime(5)),
            Just(Place::Prime(7)),
            Just(Place::Prime(11)),
        ]
    }

    proptest! {
        #[test]
        fn hilbert_properties(a in nonzero(), a2 in nonzero(), b in nonzero(), c in nonzero(), v in place()) {
            let h = |x: &BigRational, y: &BigRational| hilbert_symbol(x, y, v).unwrap();
            prop_assert_eq!(h(&a, &b), h(&b, &a));
            prop_assert_eq!(h(&a, &(&c * &c)), 1);
            prop_assert_eq!(h(&a, &-a.clone()), 1);
            if a != r(1) {
                prop_assert_eq!(h(&a, &(r(1) - &a)), 1);
            }
            prop_assert_eq!(h(&(&a * &a2), &b), h(&a, &b) * h(&a2, &b));
            prop_assert_eq!(h(&a, &b), h(&a, &-(&a * &b)));
            if a != r(1) {
                prop_assert_eq!(h(&a, &b), h(&a, &((r(1) - &a) * &b)));
            }
        }

        #[test]
        fn product_formula(a in nonzero(), b in nonzero()) {
            let s = relevant_places(&a, &b, DEFAULT_FACTOR_BOUND).unwrap();
            let prod: i32 = s.iter().map(|&v| hilbert_symbol(&a, &b, v).unwrap() as i32).product();
            prop_assert_eq!(prod, 1);
        }

        #[test]
        fn class_rewrites(a in nonzero(), b in nonzero(), l in nonzero(), m in nonzero()) {
            let q = RationalField::Q;
            let c = quaternion_class(&q, &a, &b).unwrap();
            prop_assert_eq!(&c, &quaternion_class(&q, &b, &a).unwrap());
            prop_assert_eq!(&c, &quaternion_class(&q, &(&a * &l * &l), &(&b * &m * &m)).unwrap());
            prop_assert_eq!(&c, &quaternion_class(&q, &a, &-(&a * &b)).unwrap());
        }

        #[test]
        fn isotropy_matches_point_search(a in -12i64..=12, b in -12i64..=12) {
            prop_assume!(a != 0 && b != 0);
            let q = RationalField::Q;
            let iso = is_isotropic_ternary(&q, &r(a), &r(b)).unwrap();
            let pt = find_conic_point(&q, &r(a), &r(b), 300);
            prop_assert_eq!(iso, pt.is_ok());
        }

        #[test]
        fn norm_is_multiplicative(x in proptest::collection::vec(0u64..7, 8), a in 1u64..7, b in 1u64..7) {
            let f7 = PrimeField::new(7).unwrap();
            let p = Quaternion::<PrimeField>::new(a, b, [x[0], x[1], x[2], x[3]]);
            let q = Quaternion::<PrimeField>::new(a, b, [x[4], x[5], x[6], x[7]]);
            let pq = p.multiply(&f7, &q).unwrap();
            prop_assert_eq!(pq.norm(&f7), f7.mul(&p.norm(&f7), &q.norm(&f7)));
        }

        #[test]
        fn normalization_exact_over_f5(c in proptest::collection::vec(0u64..5, 6)) {
            let f5 = PrimeField::new(5).unwrap();
            let g = ternary_from_poly(&f5, &[c[0], c[1], c[2], c[3], c[4], c[5]]);
            prop_assume!(!g.is_zero());
            let n = normalize_conic(&g).unwrap();
            prop_assert_eq!(n.rank, g.rank());
            let d = [f5.one(), f5.neg(&n.exact.a), f5.neg(&n.exact.b)];
            let target = Matrix::from_fn(&f5, 3, 3, |i, j| if i == j && i < n.rank { f5.mul(&n.scale, &d[i]) } else { 0 });
            prop_assert_eq!(n.basis.transpose().mul(&g).unwrap().mul(&n.basis).unwrap(), target);
        }
    }
}
