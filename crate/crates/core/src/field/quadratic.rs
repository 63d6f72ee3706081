use num_rational::BigRational;
use rand::Rng;

use super::{Field, FieldDescriptor, FieldError, SquareClass};

/// `re + im * sqrt(a)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem<E> {
    pub re: E,
    pub im: E,
}

/// The quadratic extension `k(sqrt a)` of `Q` or `F_p`, for a nonsquare `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadExt<B: Field> {
    base: B,
    a: B::Elem,
}

impl<B: Field> QuadExt<B> {
    pub fn new(base: B, a: B::Elem) -> Result<Self, FieldError> {
        match base.descriptor() {
            FieldDescriptor::Rationals | FieldDescriptor::PrimeField { .. } => {}
            other => {
                return Err(FieldError::UnsupportedField(format!(
                    "quadratic extension over {other}"
                )))
            }
        }
        if !base.contains(&a) {
            return Err(FieldError::FieldMismatch);
        }
        if base.is_zero(&a) || base.is_square(&a)? {
            return Err(FieldError::InvalidDescriptor(format!(
                "{} is a square in {}",
                base.format_elem(&a),
                base.descriptor()
            )));
        }
        Ok(Self { base, a })
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn a(&self) -> &B::Elem {
        &self.a
    }

    pub fn embed(&self, x: &B::Elem) -> QuadElem<B::Elem> {
        QuadElem { re: x.clone(), im: self.base.zero() }
    }

    pub fn make(&self, re: B::Elem, im: B::Elem) -> QuadElem<B::Elem> {
        QuadElem { re, im }
    }

    /// The generator `sqrt(a)`.
    pub fn root(&self) -> QuadElem<B::Elem> {
        QuadElem { re: self.base.zero(), im: self.base.one() }
    }

    /// `x * conj(x)`, an element of the base.
    pub fn norm(&self, x: &QuadElem<B::Elem>) -> B::Elem {
        let b = &self.base;
        b.sub(&b.square(&x.re), &b.mul(&self.a, &b.square(&x.im)))
    }

    /// Base-field value of `x` when it has no `sqrt(a)` component.
    pub fn to_base(&self, x: &QuadElem<B::Elem>) -> Option<B::Elem> {
        self.base.is_zero(&x.im).then(|| x.re.clone())
    }

    fn try_sqrt(&self, x: &QuadElem<B::Elem>) -> Result<Option<QuadElem<B::Elem>>, FieldError> {
        let b = &self.base;
        if self.is_zero(x) {
            return Ok(Some(self.zero()));
        }
        let Ok(s) = b.sqrt(&self.norm(x)) else {
            return Ok(None);
        };
        let two = b.from_i64(2);
        for n in [s.clone(), b.neg(&s)] {
            let w = b.div(&b.add(&x.re, &n), &two)?;
            let cand = if b.is_zero(&w) {
                match b.sqrt(&b.div(&x.re, &self.a)?) {
                    Ok(v) => QuadElem { re: b.zero(), im: v },
                    Err(_) => continue,
                }
            } else {
                match b.sqrt(&w) {
                    Ok(u) => {
                        let v = b.div(&x.im, &b.mul(&two, &u))?;
                        QuadElem { re: u, im: v }
                    }
                    Err(_) => continue,
                }
            };
            if self.mul(&cand, &cand) == *x {
                return Ok(Some(cand));
            }
        }
        Ok(None)
    }
}

impl<B: Field> Field for QuadExt<B> {
    type Elem = QuadElem<B::Elem>;
    type ExtBase = QuadExt<B>;

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::QuadraticExtension {
            base: Box::new(self.base.descriptor()),
            a: self.base.format_elem(&self.a),
        }
    }

    fn zero(&self) -> Self::Elem {
        self.embed(&self.base.zero())
    }

    fn one(&self) -> Self::Elem {
        self.embed(&self.base.one())
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.embed(&self.base.from_i64(n))
    }

    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem, FieldError> {
        Ok(self.embed(&self.base.from_rational(q)?))
    }

    fn contains(&self, x: &Self::Elem) -> bool {
        self.base.contains(&x.re) && self.base.contains(&x.im)
    }

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        QuadElem { re: self.base.add(&x.re, &y.re), im: self.base.add(&x.im, &y.im) }
    }

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        QuadElem { re: self.base.sub(&x.re, &y.re), im: self.base.sub(&x.im, &y.im) }
    }

    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        let b = &self.base;
        let re = b.add(&b.mul(&x.re, &y.re), &b.mul(&self.a, &b.mul(&x.im, &y.im)));
        let im = b.add(&b.mul(&x.re, &y.im), &b.mul(&x.im, &y.re));
        QuadElem { re, im }
    }

    fn neg(&self, x: &Self::Elem) -> Self::Elem {
        QuadElem { re: self.base.neg(&x.re), im: self.base.neg(&x.im) }
    }

    fn inv(&self, x: &Self::Elem) -> Result<Self::Elem, FieldError> {
        let n = self.norm(x);
        if self.base.is_zero(&n) {
            return Err(FieldError::DivisionByZero);
        }
        let ni = self.base.inv(&n)?;
        Ok(QuadElem {
            re: self.base.mul(&x.re, &ni),
            im: self.base.neg(&self.base.mul(&x.im, &ni)),
        })
    }

    fn is_zero(&self, x: &Self::Elem) -> bool {
        self.base.is_zero(&x.re) && self.base.is_zero(&x.im)
    }

    fn is_square(&self, x: &Self::Elem) -> Result<bool, FieldError> {
        if self.is_zero(x) {
            return Err(FieldError::ZeroInput);
        }
        Ok(self.try_sqrt(x)?.is_some())
    }

    fn square_class(&self, _x: &Self::Elem) -> Result<SquareClass<Self::Elem>, FieldError> {
        Err(FieldError::UnsupportedField(self.descriptor().to_string()))
    }

    fn split_square(&self, x: &Self::Elem) -> Result<(Self::Elem, Self::Elem), FieldError> {
        if self.is_zero(x) {
            return Err(FieldError::ZeroInput);
        }
        match self.try_sqrt(x)? {
            Some(t) => Ok((self.one(), t)),
            None => Err(FieldError::UnsupportedField(self.descriptor().to_string())),
        }
    }

    fn sqrt(&self, x: &Self::Elem) -> Result<Self::Elem, FieldError> {
        self.try_sqrt(x)?.ok_or_else(|| FieldError::NotASquare(self.format_elem(x)))
    }

    fn square_class_reps(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    fn conjugate(&self, x: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(QuadElem { re: x.re.clone(), im: self.base.neg(&x.im) })
    }

    fn to_rational(&self, x: &Self::Elem) -> Option<BigRational> {
        self.to_base(x).and_then(|r| self.base.to_rational(&r))
    }

    fn extension_base(&self) -> Option<Self> {
        None
    }

    /// Accepts a base scalar, a pair `[re, im]`, or the printed form
    /// `re + im*sqrt(a)`.
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, FieldError> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('[').and_then(|u| u.strip_suffix(']')) {
            let (re, im) = inner.split_once(',').ok_or_else(|| FieldError::Parse(s.to_string()))?;
            return Ok(QuadElem { re: self.base.parse_elem(re)?, im: self.base.parse_elem(im)? });
        }
        let root = format!("*sqrt({})", self.base.format_elem(&self.a));
        if let Some(head) = t.strip_suffix(root.as_str()) {
            return match head.rfind(" + ") {
                Some(k) => Ok(QuadElem {
                    re: self.base.parse_elem(&head[..k])?,
                    im: self.base.parse_elem(&head[k + 3..])?,
                }),
                None => Ok(QuadElem { re: self.base.zero(), im: self.base.parse_elem(head)? }),
            };
        }
        Ok(self.embed(&self.base.parse_elem(t)?))
    }

    fn format_elem(&self, x: &Self::Elem) -> String {
        let b = &self.base;
        let root = format!("sqrt({})", b.format_elem(&self.a));
        match (b.is_zero(&x.re), b.is_zero(&x.im)) {
            (_, true) => b.format_elem(&x.re),
            (true, false) => format!("{}*{root}", b.format_elem(&x.im)),
            (false, false) => {
                format!("{} + {}*{root}", b.format_elem(&x.re), b.format_elem(&x.im))
            }
        }
    }

    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R, height: u32) -> Self::Elem {
        QuadElem { re: self.base.random_elem(rng, height), im: self.base.random_elem(rng, height) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rejects_squares_and_towers() {
        assert!(QuadExt::new(RationalField::Q, q(4)).is_err());
        assert!(QuadExt::new(RationalField::R, q(-1)).is_err());
        let k = QuadExt::new(RationalField::Q, q(-1)).unwrap();
        assert!(QuadExt::new(k.clone(), k.from_i64(3)).is_err());
        assert!(QuadExt::new(PrimeField::new(5).unwrap(), 1).is_err());
    }

    #[test]
    fn gaussian_arithmetic() {
        let k = QuadExt::new(RationalField::Q, q(-1)).unwrap();
        let i = k.root();
        assert_eq!(k.mul(&i, &i), k.from_i64(-1));
        let z = k.make(q(3), q(4));
        assert_eq!(k.norm(&z), q(25));
        let w = k.inv(&z).unwrap();
        assert_eq!(k.mul(&z, &w), k.one());
        assert_eq!(k.conjugate(&z).unwrap(), k.make(q(3), q(-4)));
        let sq = k.mul(&z, &z);
        let r = k.sqrt(&sq).unwrap();
        assert_eq!(k.mul(&r, &r), sq);
        assert!(k.is_square(&k.from_i64(-1)).unwrap());
        assert!(!k.is_square(&k.from_i64(3)).unwrap());
        assert_eq!(k.sqrt(&k.from_i64(-4)).unwrap(), k.make(q(0), q(2)));
    }

    #[test]
    fn finite_extension_square_roots() {
        for p in [3u64, 5, 7, 11] {
            let base = PrimeField::new(p).unwrap();
            let k = QuadExt::new(base, base.least_nonsquare()).unwrap();
            let mut squares = 0;
            for re in 0..p {
                for im in 0..p {
                    let x = k.make(re, im);
                    if let Ok(r) = k.sqrt(&x) {
                        assert_eq!(k.mul(&r, &r), x);
                        squares += 1;
                    }
                }
            }
            // zero plus half of the nonzero elements
            assert_eq!(squares, 1 + (p * p - 1) / 2);
            // every base element is a square in the extension
            for x in 1..p {
                assert!(k.is_square(&k.embed(&x)).unwrap());
            }
        }
    }

    #[test]
    fn parse_and_format() {
        let k = QuadExt::new(RationalField::Q, q(2)).unwrap();
        let x = k.parse_elem("[1/2, -3]").unwrap();
        assert_eq!(k.format_elem(&x), "1/2 + -3*sqrt(2)");
        assert_eq!(k.parse_elem("5").unwrap(), k.from_i64(5));
        assert_eq!(k.parse_elem(&k.format_elem(&x)).unwrap(), x);
        let y = k.make(q(0), q(7));
        assert_eq!(k.parse_elem(&k.format_elem(&y)).unwrap(), y);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let y = k.random_elem(&mut rng, 4);
        assert!(k.contains(&y));
    }
}
