//! Nilpotent Lie algebras and their dual minimal algebras.
//!
//! The dual of `[X_i, X_j] = sum_k a^k_ij X_k` is `dx_k = -sum_{i<j} a^k_ij
//! x_i ∧ x_j`. Generator indices are 0-based in code.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::exterior::{ExteriorError, KForm, Monomial};
use crate::field::{Field, FieldError};
use crate::linalg::{self, BasisChange, LinalgError, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("d∘d is not zero (the bracket violates the Jacobi identity)")]
    NotFlat,
    #[error("the characteristic filtration stops at dimension {reached} of {dim}")]
    NotMinimal { reached: usize, dim: usize },
    #[error("the lower central series stabilises at dimension {0}")]
    NotNilpotent(usize),
    #[error("unsupported signature ({0}, {1})")]
    BadSignature(usize, usize),
    #[error("differential of x{generator} is not a 2-form on {dim} generators")]
    BadDifferential { generator: usize, dim: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

/// Brackets `[X_i, X_j] = sum_k a^k_ij X_k`, stored for `i < j`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants<F: Field> {
    field: F,
    n: usize,
    entries: BTreeMap<(usize, usize, usize), F::Elem>,
}

impl<F: Field> StructureConstants<F> {
    pub fn new(field: &F, n: usize) -> Self {
        Self { field: field.clone(), n, entries: BTreeMap::new() }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Sets `a^k_ij`, applying antisymmetry when `i > j`.
    pub fn set(&mut self, i: usize, j: usize, k: usize, c: F::Elem) -> Result<(), LieError> {
        if i >= self.n || j >= self.n || k >= self.n || i == j {
            return Err(LieError::IndexOutOfRange(format!("[{}, {}] -> {}", i + 1, j + 1, k + 1)));
        }
        let (key, c) = if i < j { ((i, j, k), c) } else { ((j, i, k), self.field.neg(&c)) };
        if self.field.is_zero(&c) {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, c);
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> F::Elem {
        let f = &self.field;
        if i == j {
            return f.zero();
        }
        let (key, neg) = if i < j { ((i, j, k), false) } else { ((j, i, k), true) };
        match self.entries.get(&key) {
            Some(c) if neg => f.neg(c),
            Some(c) => c.clone(),
            None => f.zero(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &F::Elem)> {
        self.entries.iter()
    }

    /// Bracket of two vectors in coordinates.
    pub fn bracket(&self, u: &[F::Elem], v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.n];
        for (&(i, j, k), c) in &self.entries {
            let t = f.sub(&f.mul(&u[i], &v[j]), &f.mul(&u[j], &v[i]));
            if !f.is_zero(&t) {
                out[k] = f.add(&out[k], &f.mul(c, &t));
            }
        }
        out
    }

    /// Jacobi identity, checked by summing cyclic triple brackets of basis
    /// vectors.
    pub fn jacobi(&self) -> bool {
        let f = &self.field;
        let e = |i| linalg::unit_vec(f, self.n, i);
        for i in 0..self.n {
            for j in i + 1..self.n {
                let ij = self.bracket(&e(i), &e(j));
                for k in j + 1..self.n {
                    let a = self.bracket(&ij, &e(k));
                    let b = self.bracket(&self.bracket(&e(j), &e(k)), &e(i));
                    let c = self.bracket(&self.bracket(&e(k), &e(i)), &e(j));
                    let s = linalg::add_vec(f, &linalg::add_vec(f, &a, &b), &c);
                    if !linalg::is_zero_vec(f, &s) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Dimensions `e_k` of the quotients `g^(k) / g^(k+1)` of the lower
    /// central series.
    pub fn lower_central_series(&self) -> Result<Vec<usize>, LieError> {
        let f = &self.field;
        let n = self.n;
        let mut cur: Vec<Vec<F::Elem>> = (0..n).map(|i| linalg::unit_vec(f, n, i)).collect();
        let mut dims = Vec::new();
        while !cur.is_empty() {
            let mut next = Vec::new();
            for i in 0..n {
                for v in &cur {
                    next.push(self.bracket(&linalg::unit_vec(f, n, i), v));
                }
            }
            let next = linalg::span_basis(f, n, &next);
            if next.len() == cur.len() {
                return Err(LieError::NotNilpotent(cur.len()));
            }
            dims.push(cur.len() - next.len());
            cur = next;
        }
        Ok(dims)
    }

    pub fn dualize(&self) -> MinimalAlgebra<F> {
        let f = &self.field;
        let mut d: Vec<KForm<F>> = (0..self.n).map(|_| KForm::zero(f, self.n, 2)).collect();
        for (&(i, j, k), c) in &self.entries {
            d[k].add_term(Monomial::pair(i, j), f.neg(c));
        }
        MinimalAlgebra { field: f.clone(), n: self.n, d }
    }
}

/// A free graded-commutative algebra on degree-one generators `x1..xn` with
/// `dx_k` given as 2-forms.
#[derive(Clone, PartialEq)]
pub struct MinimalAlgebra<F: Field> {
    field: F,
    n: usize,
    d: Vec<KForm<F>>,
}

impl<F: Field> fmt::Debug for MinimalAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for MinimalAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, dk) in self.d.iter().enumerate() {
            if dk.is_zero() {
                continue;
            }
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "dx{} = {dk}", k + 1)?;
        }
        if first {
            write!(f, "d = 0")?;
        }
        Ok(())
    }
}

impl<F: Field> MinimalAlgebra<F> {
    pub fn new(field: &F, n: usize, d: Vec<KForm<F>>) -> Result<Self, LieError> {
        if d.len() != n {
            return Err(LieError::IndexOutOfRange(format!("{} differentials for {n} generators", d.len())));
        }
        for (k, dk) in d.iter().enumerate() {
            if dk.dim() != n || (dk.degree() != 2 && !dk.is_zero()) {
                return Err(LieError::BadDifferential { generator: k + 1, dim: n });
            }
        }
        let d = d
            .into_iter()
            .map(|dk| if dk.is_zero() { KForm::zero(field, n, 2) } else { dk })
            .collect();
        Ok(Self { field: field.clone(), n, d })
    }

    pub fn abelian(field: &F, n: usize) -> Self {
        Self { field: field.clone(), n, d: (0..n).map(|_| KForm::zero(field, n, 2)).collect() }
    }

    /// Builds an algebra from `(generator, differential)` pairs in the text
    /// syntax, generators 1-based; unlisted generators are closed.
    pub fn from_text(field: &F, n: usize, diffs: &[(usize, &str)]) -> Result<Self, LieError> {
        let mut alg = Self::abelian(field, n);
        for &(k, s) in diffs {
            if k == 0 || k > n {
                return Err(LieError::IndexOutOfRange(format!("x{k}")));
            }
            alg.d[k - 1] = KForm::parse_degree(field, n, 2, s)?;
        }
        Ok(alg)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn differentials(&self) -> &[KForm<F>] {
        &self.d
    }

    pub fn differential(&self, k: usize) -> &KForm<F> {
        &self.d[k]
    }

    /// `d` extended to all degrees by the Leibniz rule.
    pub fn d(&self, form: &KForm<F>) -> KForm<F> {
        form.derivation(&self.d)
    }

    pub fn to_structure_constants(&self) -> StructureConstants<F> {
        let f = &self.field;
        let mut sc = StructureConstants::new(f, self.n);
        for (k, dk) in self.d.iter().enumerate() {
            for (m, c) in dk.terms() {
                let idx = m.indices();
                sc.set(idx[0], idx[1], k, f.neg(c)).expect("indices in range");
            }
        }
        sc
    }

    /// Whether `d(dx_k) = 0` for every generator.
    pub fn check_flatness(&self) -> bool {
        if let Some(flat) = self.integer_flatness() {
            return flat;
        }
        self.d.iter().all(|dk| self.d(dk).is_zero())
    }

    /// `d^2` is quadratic in the coefficients of `d`, so over the rational
    /// models one can clear all denominators at once and test in `i128`.
    /// `None` when that does not apply or something would overflow.
    fn integer_flatness(&self) -> Option<bool> {
        let f = &self.field;
        if !f.descriptor().is_rational_model() || self.n > 16 {
            return None;
        }
        let mut lcm = BigInt::one();
        let mut rats = Vec::with_capacity(self.n);
        for dk in &self.d {
            let mut terms = Vec::new();
            for (m, c) in dk.terms() {
                let q = f.to_rational(c)?;
                lcm = lcm.lcm(q.denom());
                terms.push((*m, q));
            }
            rats.push(terms);
        }
        let ints: Vec<Vec<(Monomial, i128)>> = rats
            .into_iter()
            .map(|terms| {
                terms
                    .into_iter()
                    .map(|(m, q)| Some((m, (q.numer() * (&lcm / q.denom())).to_i64()? as i128)))
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<_>>()?;
        let mut acc: BTreeMap<u64, i128> = BTreeMap::new();
        for dk in &ints {
            acc.clear();
            for &(m, c) in dk {
                let mut b = m.bits();
                let mut s = 0usize;
                while b != 0 {
                    let i = b.trailing_zeros() as usize;
                    b &= b - 1;
                    let rest = Monomial::from_bits(m.bits() & !(1 << i));
                    for &(dm, dc) in &ints[i] {
                        if let Some((tm, sign)) = dm.wedge(&rest) {
                            let neg = (sign < 0) != (s % 2 == 1);
                            let t = c.checked_mul(dc)?;
                            let e = acc.entry(tm.bits()).or_insert(0);
                            *e = if neg { e.checked_sub(t)? } else { e.checked_add(t)? };
                        }
                    }
                    s += 1;
                }
            }
            if acc.values().any(|&v| v != 0) {
                return Some(false);
            }
        }
        Some(true)
    }

    /// The `21 x n` (for `n = 7`) matrix whose column `k` holds `dx_k`.
    pub fn d_matrix(&self) -> Matrix<F> {
        let cols: Vec<Vec<F::Elem>> = self.d.iter().map(KForm::coefficient_vector).collect();
        let rows = self.n * self.n.saturating_sub(1) / 2;
        Matrix::from_cols(&self.field, rows, &cols).expect("consistent sizes")
    }

    /// Image of the 1-form with coefficient vector `v` under `d`.
    pub fn d_of_vector(&self, v: &[F::Elem]) -> KForm<F> {
        let f = &self.field;
        let mut out = KForm::zero(f, self.n, 2);
        for (c, dk) in v.iter().zip(&self.d) {
            if !f.is_zero(c) {
                out = out.axpy(c, dk).expect("same degree");
            }
        }
        out
    }

    pub fn characteristic_filtration(&self) -> Result<Filtration<F>, LieError> {
        if !self.check_flatness() {
            return Err(LieError::NotFlat);
        }
        let f = &self.field;
        let n = self.n;
        let dm = self.d_matrix();
        let mut levels = vec![linalg::span_basis(f, n, &dm.kernel_basis())];
        if levels[0].is_empty() && n > 0 {
            return Err(LieError::NotMinimal { reached: 0, dim: n });
        }
        while levels.last().map_or(0, Vec::len) < n {
            let prev = levels.last().expect("nonempty");
            let ones: Vec<KForm<F>> = prev.iter().map(|v| KForm::from_vector(f, v)).collect();
            let mut gens = Vec::new();
            for a in 0..ones.len() {
                for b in a + 1..ones.len() {
                    gens.push(ones[a].wedge(&ones[b])?.coefficient_vector());
                }
            }
            let rows = dm.rows();
            // annihilator of Λ²W_{k-1} inside the dual of Λ²V
            let ann: Vec<Vec<F::Elem>> = if gens.is_empty() {
                (0..rows).map(|i| linalg::unit_vec(f, rows, i)).collect()
            } else {
                Matrix::from_fn(f, gens.len(), rows, |i, j| gens[i][j].clone()).kernel_basis()
            };
            let next = if ann.is_empty() {
                (0..n).map(|i| linalg::unit_vec(f, n, i)).collect()
            } else {
                let r = Matrix::from_fn(f, ann.len(), rows, |i, j| ann[i][j].clone());
                linalg::span_basis(f, n, &r.mul(&dm)?.kernel_basis())
            };
            if next.len() == prev.len() {
                return Err(LieError::NotMinimal { reached: prev.len(), dim: n });
            }
            levels.push(next);
        }
        Ok(Filtration { levels })
    }

    /// The same algebra written in new generators `y_j = sum_i P_ij x_i`.
    pub fn apply_basis_change(&self, p: &BasisChange<F>) -> Result<Self, LieError> {
        if p.dim() != self.n {
            return Err(LieError::IndexOutOfRange(format!("basis change of size {}", p.dim())));
        }
        let f = &self.field;
        let q = p.matrix().invert()?;
        let images = q.columns();
        let mut d = Vec::with_capacity(self.n);
        for j in 0..self.n {
            let dy = self.d_of_vector(&p.matrix().col(j));
            d.push(dy.substitute(self.n, &images));
        }
        Ok(Self { field: f.clone(), n: self.n, d })
    }

    /// Entrywise image in another field.
    pub fn map<G: Field>(&self, target: &G, f: impl Fn(&F::Elem) -> G::Elem) -> MinimalAlgebra<G> {
        MinimalAlgebra {
            field: target.clone(),
            n: self.n,
            d: self.d.iter().map(|dk| dk.map(target, &f)).collect(),
        }
    }
}

/// `W_0 ⊂ W_1 ⊂ .. ⊂ W_m = V`, each level given by a basis of 1-forms.
#[derive(Clone, Debug, PartialEq)]
pub struct Filtration<F: Field> {
    levels: Vec<Vec<Vec<F::Elem>>>,
}

impl<F: Field> Filtration<F> {
    pub fn levels(&self) -> &[Vec<Vec<F::Elem>>] {
        &self.levels
    }

    /// `f_k = dim W_k - dim W_{k-1}`.
    pub fn dims(&self) -> Vec<usize> {
        let mut prev = 0;
        self.levels
            .iter()
            .map(|l| {
                let d = l.len() - prev;
                prev = l.len();
                d
            })
            .collect()
    }

    pub fn length(&self) -> usize {
        self.levels.len()
    }
}

/// Random invertible matrix with entries of height at most `height`.
pub fn random_basis_change<F: Field, R: Rng + ?Sized>(field: &F, n: usize, rng: &mut R, height: u32) -> BasisChange<F> {
    loop {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, field.random_elem(rng, height));
            }
        }
        if let Ok(b) = BasisChange::new(m) {
            return b;
        }
    }
}

/// A random change with integer entries and integer inverse: a shuffled
/// product of `steps` elementary column operations `c_j += t c_i`,
/// `|t| <= height`. Over `Q` this keeps coefficients small, unlike a dense
/// random matrix whose inverse has large denominators.
pub fn random_unimodular_change<F: Field, R: Rng + ?Sized>(
    field: &F,
    n: usize,
    rng: &mut R,
    height: u32,
    steps: usize,
) -> BasisChange<F> {
    let h = height.max(1) as i64;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let signs: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let mut m = Matrix::from_fn(field, n, n, |i, j| match (perm[j] == i, signs[j]) {
        (false, _) => field.zero(),
        (true, false) => field.one(),
        (true, true) => field.neg(&field.one()),
    });
    if n < 2 {
        return BasisChange::new(m).expect("permutation");
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let mut t = rng.gen_range(-h..=h);
        if t == 0 {
            t = 1;
        }
        let t = field.from_i64(t);
        for r in 0..n {
            let x = field.add(m.get(r, j), &field.mul(&t, m.get(r, i)));
            m.set(r, j, x);
        }
    }
    BasisChange::new(m).expect("unimodular")
}

/// A random length-two algebra of signature `(f0, f1)` with `f0 + f1 = 7`:
/// the first `f0` generators are closed and the rest have independent
/// differentials in `Λ²` of the first `f0`.
pub fn random_presentation<F: Field, R: Rng + ?Sized>(
    field: &F,
    f0: usize,
    f1: usize,
    rng: &mut R,
    height: u32,
) -> Result<MinimalAlgebra<F>, LieError> {
    if !matches!((f0, f1), (6, 1) | (5, 2) | (4, 3)) {
        return Err(LieError::BadSignature(f0, f1));
    }
    let n = f0 + f1;
    let monos = Monomial::all(f0, 2);
    loop {
        let mut d: Vec<KForm<F>> = (0..n).map(|_| KForm::zero(field, n, 2)).collect();
        for dk in d.iter_mut().skip(f0) {
            for m in &monos {
                // sparse draws keep every rank stratum reachable
                if rng.gen_bool(0.5) {
                    dk.add_term(*m, field.random_elem(rng, height));
                }
            }
        }
        let vecs: Vec<Vec<F::Elem>> = d[f0..].iter().map(KForm::coefficient_vector).collect();
        if linalg::span_dim(field, vecs[0].len(), &vecs) == f1 {
            return MinimalAlgebra::new(field, n, d);
        }
    }
}

/// Random brackets on `n` generators: a mix of strictly upper-triangular and
/// unrestricted sparse entries.
pub fn random_structure_constants<F: Field, R: Rng + ?Sized>(
    field: &F,
    n: usize,
    rng: &mut R,
    height: u32,
    density: f64,
) -> StructureConstants<F> {
    let triangular = rng.gen_bool(0.5);
    let mut sc = StructureConstants::new(field, n);
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                if triangular && k <= j {
                    continue;
                }
                if rng.gen_bool(density) {
                    sc.set(i, j, k, field.random_elem(rng, height)).expect("in range");
                }
            }
        }
    }
    sc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> RationalField {
        RationalField::Q
    }

    fn alg(diffs: &[(usize, &str)]) -> MinimalAlgebra<RationalField> {
        MinimalAlgebra::from_text(&q(), 7, diffs).unwrap()
    }

    #[test]
    fn dualize_sign() {
        let mut sc = StructureConstants::new(&q(), 7);
        sc.set(0, 1, 6, q().one()).unwrap();
        let a = sc.dualize();
        assert_eq!(a, alg(&[(7, "-x1^x2")]));
        assert_eq!(a.to_structure_constants(), sc);
        assert_eq!(StructureConstants::new(&q(), 7).dualize(), MinimalAlgebra::abelian(&q(), 7));
    }

    #[test]
    fn flatness_examples() {
        assert!(!alg(&[(6, "x1^x2"), (7, "x3^x6")]).check_flatness());
        assert!(alg(&[(7, "x1^x2")]).check_flatness());
        assert!(alg(&[(6, "x1^x2"), (7, "x1^x6")]).check_flatness());
    }

    #[test]
    fn lower_central_series_examples() {
        assert_eq!(StructureConstants::new(&q(), 7).lower_central_series().unwrap(), vec![7]);
        let mut h = StructureConstants::new(&q(), 7);
        h.set(0, 1, 6, q().one()).unwrap();
        assert_eq!(h.lower_central_series().unwrap(), vec![6, 1]);
        let mut bad = StructureConstants::new(&q(), 2);
        bad.set(0, 1, 1, q().one()).unwrap();
        assert_eq!(bad.lower_central_series(), Err(LieError::NotNilpotent(1)));
    }

    #[test]
    fn filtration_examples() {
        let fl = alg(&[(7, "x1^x2")]).characteristic_filtration().unwrap();
        assert_eq!((fl.dims(), fl.length()), (vec![6, 1], 2));
        let fl = MinimalAlgebra::abelian(&q(), 7).characteristic_filtration().unwrap();
        assert_eq!((fl.dims(), fl.length()), (vec![7], 1));
        let fl = alg(&[(6, "x1^x2"), (7, "x1^x6")]).characteristic_filtration().unwrap();
        assert_eq!((fl.dims(), fl.length()), (vec![5, 1, 1], 3));
        // generators out of order are fine
        let fl = alg(&[(1, "x6^x7")]).characteristic_filtration().unwrap();
        assert_eq!(fl.dims(), vec![6, 1]);
        // dx1 = x1^x2 never enters the filtration
        let r = alg(&[(1, "x1^x2")]).characteristic_filtration();
        assert_eq!(r, Err(LieError::NotMinimal { reached: 6, dim: 7 }));
        assert_eq!(alg(&[(6, "x1^x2"), (7, "x3^x6")]).characteristic_filtration(), Err(LieError::NotFlat));
    }

    #[test]
    fn basis_change_identity_and_descent() {
        let a = alg(&[(6, "x1^x2 + x3^x4"), (7, "x1^x3 + x2^x5")]);
        assert_eq!(a.apply_basis_change(&BasisChange::identity(&q(), 7)).unwrap(), a);
        // over Q(sqrt 3) the pencil dx6 = x1x3 + 3 x2x4, dx7 = x1x4 + x2x3 splits
        let a2 = q().from_i64(3);
        let k = crate::field::QuadExt::new(q(), a2.clone()).unwrap();
        let base = MinimalAlgebra::from_text(&q(), 7, &[(6, "x1^x3 + 3 x2^x4"), (7, "x1^x4 + x2^x3")]).unwrap();
        let ext = base.map(&k, |c| k.embed(c));
        let r = k.root();
        let o = k.zero();
        let one = k.one();
        // new generators in old ones
        let cols = vec![
            vec![one.clone(), r.clone(), o.clone(), o.clone(), o.clone(), o.clone(), o.clone()],
            vec![o.clone(), o.clone(), one.clone(), r.clone(), o.clone(), o.clone(), o.clone()],
            vec![one.clone(), k.neg(&r), o.clone(), o.clone(), o.clone(), o.clone(), o.clone()],
            vec![o.clone(), o.clone(), one.clone(), k.neg(&r), o.clone(), o.clone(), o.clone()],
            linalg::unit_vec(&k, 7, 4),
            linalg::unit_vec(&k, 7, 5),
            linalg::unit_vec(&k, 7, 6),
        ];
        let p = BasisChange::new(Matrix::from_cols(&k, 7, &cols).unwrap()).unwrap();
        let split = ext.apply_basis_change(&p).unwrap();
        // dx6 + r dx7 = (x1 + r x2)(x3 + r x4), dx6 - r dx7 = (x1 - r x2)(x3 - r x4)
        let s6 = split.differential(5).axpy(&r, split.differential(6)).unwrap();
        assert_eq!(s6.to_string(), "x1^x2");
        let s7 = split.differential(5).axpy(&k.neg(&r), split.differential(6)).unwrap();
        assert_eq!(s7.to_string(), "x3^x4");
    }

    #[test]
    fn random_presentations_have_requested_signature() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f5 = PrimeField::new(5).unwrap();
        for (f0, f1) in [(6, 1), (5, 2), (4, 3)] {
            for _ in 0..20 {
                let a = random_presentation(&f5, f0, f1, &mut rng, 3).unwrap();
                assert!(a.check_flatness());
                let fl = a.characteristic_filtration().unwrap();
                assert_eq!(fl.dims(), vec![f0, f1]);
            }
        }
        assert_eq!(random_presentation(&f5, 3, 4, &mut rng, 3).err(), Some(LieError::BadSignature(3, 4)));
    }

    #[test]
    fn flatness_matches_jacobi_on_random_brackets() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f5 = PrimeField::new(5).unwrap();
        let mut seen = [0usize; 2];
        for n in 5..=7 {
            for _ in 0..40 {
                let sc = random_structure_constants(&f5, n, &mut rng, 2, 0.08);
                let flat = sc.dualize().check_flatness();
                assert_eq!(flat, sc.jacobi());
                seen[flat as usize] += 1;
            }
        }
        assert!(seen[0] > 0 && seen[1] > 0);
    }

    #[test]
    fn filtration_invariant_under_basis_change() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = alg(&[(6, "x1^x2"), (7, "x1^x6")]);
        for _ in 0..20 {
            let p = random_basis_change(&q(), 7, &mut rng, 2);
            let b = a.apply_basis_change(&p).unwrap();
            assert!(b.check_flatness());
            assert_eq!(b.characteristic_filtration().unwrap().dims(), vec![5, 1, 1]);
            let back = b.apply_basis_change(&p.inverse()).unwrap();
            assert_eq!(back, a);
        }
    }

    #[test]
    fn lower_central_series_matches_filtration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (f0, f1) in [(6, 1), (5, 2), (4, 3)] {
            let a = random_presentation(&q(), f0, f1, &mut rng, 3).unwrap();
            let p = random_basis_change(&q(), 7, &mut rng, 2);
            let b = a.apply_basis_change(&p).unwrap();
            let lcs = b.to_structure_constants().lower_central_series().unwrap();
            assert_eq!(lcs, b.characteristic_filtration().unwrap().dims());
        }
    }
}
