//! Exterior algebra on an ordered set of degree-one generators `x1..xn`.
//!
//! A [`KForm`] is stored sparsely as a map from increasing index tuples to
//! nonzero coefficients, so equality is structural. Generators are 0-based in
//! code and printed 1-based.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldError};
use crate::linalg::{self, BasisChange, LinalgError, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("forms live in different ambient spaces ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("expected a form of degree {expected}, got degree {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("generator index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Increasing tuple of generator indices, packed as a bit set.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_indices(idx: &[usize]) -> Option<(Self, i8)> {
        let mut bits = 0u64;
        let mut sign = 1i8;
        for &i in idx {
            let b = 1u64 << i;
            if bits & b != 0 {
                return None;
            }
            if (bits >> i >> 1).count_ones() % 2 == 1 {
                sign = -sign;
            }
            bits |= b;
        }
        Some((Monomial(bits), sign))
    }

    pub fn single(i: usize) -> Self {
        Monomial(1 << i)
    }

    pub fn pair(i: usize, j: usize) -> Self {
        debug_assert!(i != j);
        Monomial((1 << i) | (1 << j))
    }

    pub fn from_bits(bits: u64) -> Self {
        Monomial(bits)
    }

    pub fn bits(&self) -> u64 {
        self.0
    }

    pub fn degree(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        let mut b = self.0;
        while b != 0 {
            let i = b.trailing_zeros() as usize;
            out.push(i);
            b &= b - 1;
        }
        out
    }

    /// `self ∧ other` as `(monomial, sign)`, or `None` when they overlap.
    pub fn wedge(&self, other: &Monomial) -> Option<(Monomial, i8)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // count pairs (i in self, j in other) with i > j
        let mut inversions = 0u32;
        let mut b = other.0;
        while b != 0 {
            let j = b.trailing_zeros();
            inversions += (self.0 >> j).count_ones();
            b &= b - 1;
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((Monomial(self.0 | other.0), sign))
    }

    /// All monomials of degree `k` in `n` generators, in lexicographic order.
    pub fn all(n: usize, k: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Monomial>) {
            if cur.len() == k {
                out.push(Monomial::from_indices(cur).expect("distinct").0);
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(n, k, i + 1, cur, out);
                cur.pop();
            }
        }
        rec(n, k, 0, &mut cur, &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.indices().cmp(&other.indices())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.indices().iter().map(|i| format!("x{}", i + 1)).collect();
        write!(f, "{}", parts.join("^"))
    }
}

/// A homogeneous element of the exterior algebra.
#[derive(Clone, PartialEq)]
pub struct KForm<F: Field> {
    field: F,
    dim: usize,
    degree: usize,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> fmt::Debug for KForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> KForm<F> {
    pub fn zero(field: &F, dim: usize, degree: usize) -> Self {
        Self { field: field.clone(), dim, degree, terms: BTreeMap::new() }
    }

    pub fn constant(field: &F, dim: usize, c: F::Elem) -> Self {
        let mut f = Self::zero(field, dim, 0);
        f.add_term(Monomial::ONE, c);
        f
    }

    /// The generator `x_{i+1}`.
    pub fn generator(field: &F, dim: usize, i: usize) -> Self {
        let mut f = Self::zero(field, dim, 1);
        f.add_term(Monomial::single(i), field.one());
        f
    }

    /// `c * x_I` for 0-based indices `idx` in any order.
    pub fn monomial(field: &F, dim: usize, idx: &[usize], c: F::Elem) -> Result<Self, ExteriorError> {
        for &i in idx {
            if i >= dim {
                return Err(ExteriorError::IndexOutOfRange { index: i + 1, dim });
            }
        }
        let mut f = Self::zero(field, dim, idx.len());
        if let Some((m, s)) = Monomial::from_indices(idx) {
            let c = if s < 0 { field.neg(&c) } else { c };
            f.add_term(m, c);
        }
        Ok(f)
    }

    /// The 1-form `sum v_i x_i`.
    pub fn from_vector(field: &F, v: &[F::Elem]) -> Self {
        let mut f = Self::zero(field, v.len(), 1);
        for (i, c) in v.iter().enumerate() {
            f.add_term(Monomial::single(i), c.clone());
        }
        f
    }

    /// Coefficient vector of a 1-form.
    pub fn to_vector(&self) -> Vec<F::Elem> {
        (0..self.dim).map(|i| self.coeff(&Monomial::single(i))).collect()
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> F::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Coefficient of `x_i ∧ x_j` with the sign of the given order.
    pub fn coeff_pair(&self, i: usize, j: usize) -> F::Elem {
        if i == j {
            return self.field.zero();
        }
        let c = self.coeff(&Monomial::pair(i, j));
        if i < j {
            c
        } else {
            self.field.neg(&c)
        }
    }

    /// Adds `c * m`, pruning zeros.
    pub fn add_term(&mut self, m: Monomial, c: F::Elem) {
        debug_assert_eq!(m.degree(), self.degree);
        if self.field.is_zero(&c) {
            return;
        }
        let f = &self.field;
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = f.add(v, &c);
                if f.is_zero(v) {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check(&self, other: &Self) -> Result<(), ExteriorError> {
        if self.dim != other.dim {
            return Err(ExteriorError::AmbientMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    fn check_degree(&self, other: &Self) -> Result<(), ExteriorError> {
        self.check(other)?;
        if self.degree != other.degree {
            return Err(ExteriorError::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.check_degree(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field.neg(&self.field.one()))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f, self.dim, self.degree);
        if f.is_zero(c) {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, x)| (*m, f.mul(c, x))).collect();
        out
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &F::Elem, other: &Self) -> Result<Self, ExteriorError> {
        self.add(&other.scale(c))
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.check(other)?;
        let f = &self.field;
        let mut out = Self::zero(f, self.dim, self.degree + other.degree);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((m, s)) = m1.wedge(m2) {
                    let c = f.mul(c1, c2);
                    out.add_term(m, if s < 0 { f.neg(&c) } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Interior product with a vector of the dual space.
    pub fn interior(&self, v: &[F::Elem]) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f, self.dim, self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            for (s, &i) in m.indices().iter().enumerate() {
                if f.is_zero(&v[i]) {
                    continue;
                }
                let rest = Monomial(m.0 & !(1 << i));
                let t = f.mul(c, &v[i]);
                out.add_term(rest, if s % 2 == 1 { f.neg(&t) } else { t });
            }
        }
        out
    }

    /// Image under the algebra map sending `x_i` to the 1-form `images[i]`
    /// (coefficient vectors in a space of dimension `target_dim`).
    pub fn substitute(&self, target_dim: usize, images: &[Vec<F::Elem>]) -> Self {
        if self.degree == 2 {
            return self.substitute_pairs(target_dim, images);
        }
        let f = &self.field;
        let ones: Vec<KForm<F>> = images.iter().map(|v| KForm::from_vector(f, v)).collect();
        let mut out = Self::zero(f, target_dim, self.degree);
        for (m, c) in &self.terms {
            let mut prod = KForm::constant(f, target_dim, c.clone());
            for i in m.indices() {
                prod = prod.wedge(&ones[i]).expect("same ambient");
                if prod.is_zero() {
                    break;
                }
            }
            for (pm, pc) in prod.terms {
                out.add_term(pm, pc);
            }
        }
        out
    }

    /// Dense version of [`KForm::substitute`] for 2-forms.
    fn substitute_pairs(&self, n: usize, images: &[Vec<F::Elem>]) -> Self {
        let f = &self.field;
        let mut acc = vec![f.zero(); n * n];
        for (m, c) in &self.terms {
            let i = m.0.trailing_zeros() as usize;
            let j = (m.0 & (m.0 - 1)).trailing_zeros() as usize;
            let (u, v) = (&images[i], &images[j]);
            for p in 0..n {
                if f.is_zero(&u[p]) {
                    continue;
                }
                let cu = f.mul(c, &u[p]);
                for q in 0..n {
                    if p == q || f.is_zero(&v[q]) {
                        continue;
                    }
                    let t = f.mul(&cu, &v[q]);
                    let slot = &mut acc[p.min(q) * n + p.max(q)];
                    *slot = if p < q { f.add(slot, &t) } else { f.sub(slot, &t) };
                }
            }
        }
        let mut out = Self::zero(f, n, 2);
        for p in 0..n {
            for q in p + 1..n {
                let x = std::mem::replace(&mut acc[p * n + q], f.zero());
                out.add_term(Monomial::pair(p, q), x);
            }
        }
        out
    }

    /// This form written in the generators of `p` (columns of `p` are the new
    /// generators in terms of the old ones).
    pub fn change_basis(&self, p: &BasisChange<F>) -> Result<Self, ExteriorError> {
        if p.dim() != self.dim {
            return Err(ExteriorError::AmbientMismatch(self.dim, p.dim()));
        }
        let q = p.matrix().invert()?;
        // x_i = sum_j q_ji y_j
        Ok(self.substitute(self.dim, &q.columns()))
    }

    /// Extends the degree-one map `x_i -> images[i]` (2-forms) to a degree
    /// +1 derivation by the graded Leibniz rule and applies it.
    pub fn derivation(&self, images: &[KForm<F>]) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f, self.dim, self.degree + 1);
        for (m, c) in &self.terms {
            let mut b = m.0;
            let mut s = 0usize;
            while b != 0 {
                let i = b.trailing_zeros() as usize;
                b &= b - 1;
                // x_{i1} .. dx_is .. : moving dx_is (degree 2) to the front
                // costs no sign, pulling x_is out costs (-1)^s
                let rest = Monomial(m.0 & !(1 << i));
                for (dm, dc) in &images[i].terms {
                    if let Some((tm, sign)) = dm.wedge(&rest) {
                        let t = f.mul(c, dc);
                        let neg = (sign < 0) != (s % 2 == 1);
                        out.add_term(tm, if neg { f.neg(&t) } else { t });
                    }
                }
                s += 1;
            }
        }
        out
    }

    /// Coefficients on all degree-`k` monomials in lexicographic order.
    pub fn coefficient_vector(&self) -> Vec<F::Elem> {
        Monomial::all(self.dim, self.degree).iter().map(|m| self.coeff(m)).collect()
    }

    /// Coefficient on `x1 ∧ .. ∧ xn` of a top-degree form.
    pub fn top_component(&self) -> Result<F::Elem, ExteriorError> {
        if self.degree != self.dim {
            return Err(ExteriorError::DegreeMismatch { expected: self.dim, found: self.degree });
        }
        Ok(self.coeff(&Monomial((1u64 << self.dim) - 1)))
    }

    /// Entrywise image in another field.
    pub fn map<G: Field>(&self, target: &G, f: impl Fn(&F::Elem) -> G::Elem) -> KForm<G> {
        let mut out = KForm::zero(target, self.dim, self.degree);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    /// Same coefficients viewed in a larger ambient space.
    pub fn widen(&self, dim: usize) -> Self {
        assert!(dim >= self.dim);
        Self { dim, ..self.clone() }
    }

    /// Whether every term only involves generators with index `< k`.
    pub fn lives_in_first(&self, k: usize) -> bool {
        self.terms.keys().all(|m| m.0 >> k == 0)
    }

    /// Restricts to the first `k` generators; callers check `lives_in_first`.
    pub fn narrow(&self, k: usize) -> Self {
        debug_assert!(self.lives_in_first(k));
        Self { dim: k, ..self.clone() }
    }

    pub fn parse(field: &F, dim: usize, text: &str) -> Result<Self, ExteriorError> {
        parse::parse_form(field, dim, text)
    }

    /// Parses a form that must have the given degree; a bare `0` is accepted
    /// as the zero form of that degree.
    pub fn parse_degree(field: &F, dim: usize, degree: usize, text: &str) -> Result<Self, ExteriorError> {
        let form = Self::parse(field, dim, text)?;
        if form.is_zero() {
            return Ok(Self::zero(field, dim, degree));
        }
        if form.degree != degree {
            return Err(ExteriorError::DegreeMismatch { expected: degree, found: form.degree });
        }
        Ok(form)
    }
}

impl<F: Field> fmt::Display for KForm<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let f = &self.field;
        let unit = f.format_elem(&f.one());
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let s = f.format_elem(c);
            let negative = s.starts_with('-') && !s[1..].contains([' ', '+', '-']);
            let (sep, body) = match (n, negative) {
                (0, false) => ("", s.clone()),
                (0, true) => ("-", s[1..].to_string()),
                (_, false) => (" + ", s.clone()),
                (_, true) => (" - ", s[1..].to_string()),
            };
            write!(out, "{sep}")?;
            if m.degree() == 0 {
                write!(out, "{}", wrap(&body))?;
            } else if body == unit {
                write!(out, "{m}")?;
            } else {
                write!(out, "{} {m}", wrap(&body))?;
            }
        }
        Ok(())
    }
}

fn wrap(s: &str) -> String {
    if !s.bytes().all(|b| b.is_ascii_digit() || b == b'/') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

mod parse {
    use super::*;

    struct Lexer<'a> {
        s: &'a [u8],
        pos: usize,
    }

    impl Lexer<'_> {
        fn skip_ws(&mut self) {
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }

        fn peek(&mut self) -> Option<u8> {
            self.skip_ws();
            self.s.get(self.pos).copied()
        }

        fn err(&self, message: impl Into<String>) -> ExteriorError {
            ExteriorError::Parse { column: self.pos + 1, message: message.into() }
        }
    }

    pub(super) fn parse_form<F: Field>(field: &F, dim: usize, text: &str) -> Result<KForm<F>, ExteriorError> {
        let mut lx = Lexer { s: text.as_bytes(), pos: 0 };
        let mut result: Option<KForm<F>> = None;
        let mut first = true;
        loop {
            let mut negative = false;
            match lx.peek() {
                None if first => return Err(lx.err("empty form")),
                None => break,
                Some(b'+') if !first => lx.pos += 1,
                Some(b'-') => {
                    lx.pos += 1;
                    negative = true;
                }
                Some(_) if first => {}
                Some(c) => return Err(lx.err(format!("expected '+' or '-', found '{}'", c as char))),
            }
            first = false;
            let term = parse_term(field, dim, &mut lx)?;
            let term = if negative { term.neg() } else { term };
            result = Some(match result {
                None => term,
                Some(acc) => {
                    if acc.degree() != term.degree() && !acc.is_zero() && !term.is_zero() {
                        return Err(lx.err("terms of different degrees"));
                    }
                    if acc.is_zero() && acc.degree() != term.degree() {
                        term
                    } else if term.is_zero() && acc.degree() != term.degree() {
                        acc
                    } else {
                        acc.add(&term)?
                    }
                }
            });
        }
        Ok(result.expect("at least one term"))
    }

    fn parse_term<F: Field>(field: &F, dim: usize, lx: &mut Lexer<'_>) -> Result<KForm<F>, ExteriorError> {
        let start = lx.pos;
        let coeff = match lx.peek() {
            Some(b'(') => {
                let open = lx.pos;
                let mut depth = 0;
                let mut end = None;
                for (k, &ch) in lx.s[open..].iter().enumerate() {
                    match ch {
                        b'(' => depth += 1,
                        b')' => {
                            depth -= 1;
                            if depth == 0 {
                                end = Some(open + k);
                                break;
                            }
                        }
                        _ => {}
                    }
                }
                let Some(end) = end else { return Err(lx.err("unbalanced parenthesis")) };
                let inner = std::str::from_utf8(&lx.s[open + 1..end]).expect("ascii slice");
                let c = field.parse_elem(inner).map_err(|e| lx.err(e.to_string()))?;
                lx.pos = end + 1;
                Some(c)
            }
            Some(c) if c.is_ascii_digit() => {
                let b = lx.pos;
                while lx.pos < lx.s.len() && (lx.s[lx.pos].is_ascii_digit() || lx.s[lx.pos] == b'/') {
                    lx.pos += 1;
                }
                let tok = std::str::from_utf8(&lx.s[b..lx.pos]).expect("ascii slice");
                let c = field.parse_elem(tok).map_err(|e| {
                    ExteriorError::Parse { column: b + 1, message: e.to_string() }
                })?;
                Some(c)
            }
            Some(_) => None,
            None => return Err(lx.err("expected a term")),
        };
        if coeff.is_some() && lx.peek() == Some(b'*') {
            lx.pos += 1;
        }
        let mut idx = Vec::new();
        loop {
            match lx.peek() {
                Some(b'x') => {
                    let at = lx.pos;
                    lx.pos += 1;
                    let b = lx.pos;
                    while lx.pos < lx.s.len() && lx.s[lx.pos].is_ascii_digit() {
                        lx.pos += 1;
                    }
                    let tok = std::str::from_utf8(&lx.s[b..lx.pos]).expect("ascii slice");
                    let i: usize = tok.parse().map_err(|_| ExteriorError::Parse {
                        column: at + 1,
                        message: "expected a generator like x3".into(),
                    })?;
                    if i == 0 || i > dim {
                        return Err(ExteriorError::Parse {
                            column: at + 1,
                            message: format!("generator x{i} out of range 1..={dim}"),
                        });
                    }
                    idx.push(i - 1);
                }
                _ if idx.is_empty() && coeff.is_some() => break,
                _ => return Err(lx.err("expected a generator like x3")),
            }
            match lx.peek() {
                Some(b'^') => lx.pos += 1,
                _ => break,
            }
        }
        if coeff.is_none() && idx.is_empty() {
            lx.pos = start;
            return Err(lx.err("expected a term"));
        }
        let c = coeff.unwrap_or_else(|| field.one());
        KForm::monomial(field, dim, &idx, c)
    }
}

/// A 2-form, with the antisymmetric-matrix view used for rank questions.
#[derive(Clone, PartialEq, Debug)]
pub struct Bivector<F: Field>(pub KForm<F>);

impl<F: Field> Bivector<F> {
    pub fn new(form: KForm<F>) -> Result<Self, ExteriorError> {
        if form.degree() != 2 {
            return Err(ExteriorError::DegreeMismatch { expected: 2, found: form.degree() });
        }
        Ok(Self(form))
    }

    pub fn form(&self) -> &KForm<F> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// `M` with `M_ij` the coefficient of `x_i ∧ x_j` for `i < j`.
    pub fn skew_matrix(&self) -> Matrix<F> {
        let f = self.0.field();
        Matrix::from_fn(f, self.dim(), self.dim(), |i, j| self.0.coeff_pair(i, j))
    }

    pub fn from_skew_matrix(m: &Matrix<F>) -> Self {
        let f = m.field();
        let mut form = KForm::zero(f, m.rows(), 2);
        for i in 0..m.rows() {
            for j in i + 1..m.cols() {
                form.add_term(Monomial::pair(i, j), m.get(i, j).clone());
            }
        }
        Self(form)
    }

    pub fn rank(&self) -> usize {
        if self.0.is_zero() {
            return 0;
        }
        self.skew_matrix().rank()
    }

    /// `φ(u, v) = u^T M v` on the dual space.
    pub fn pairing(&self, u: &[F::Elem], v: &[F::Elem]) -> F::Elem {
        let f = self.0.field();
        let mut acc = f.zero();
        for (m, c) in self.0.terms() {
            let idx = m.indices();
            let (i, j) = (idx[0], idx[1]);
            let t = f.sub(&f.mul(&u[i], &v[j]), &f.mul(&u[j], &v[i]));
            acc = f.add(&acc, &f.mul(c, &t));
        }
        acc
    }

    /// Basis of the span of the Darboux 1-forms, i.e. the row space of `M`.
    pub fn support(&self) -> Vec<Vec<F::Elem>> {
        if self.0.is_zero() {
            return Vec::new();
        }
        let m = self.skew_matrix();
        let rows: Vec<_> = (0..m.rows()).map(|i| m.row(i)).collect();
        linalg::span_basis(self.0.field(), self.dim(), &rows)
    }

    /// 1-forms `u_1..u_{2r}` with `φ = u_1∧u_2 + .. + u_{2r-1}∧u_{2r}`.
    pub fn darboux_forms(&self) -> Vec<Vec<F::Elem>> {
        let f = self.0.field().clone();
        let n = self.dim();
        let mut phi = self.0.clone();
        let mut out = Vec::new();
        loop {
            let Some((m, c)) = phi.terms().next().map(|(m, c)| (*m, c.clone())) else {
                break;
            };
            let idx = m.indices();
            let xi = linalg::unit_vec(&f, n, idx[0]);
            let eta = linalg::unit_vec(&f, n, idx[1]);
            let alpha = phi.interior(&xi);
            let beta = phi.interior(&eta);
            let cinv = f.inv(&c).expect("nonzero coefficient");
            let u1 = beta.scale(&f.neg(&cinv));
            let u2 = alpha;
            let split = u1.wedge(&u2).expect("same ambient");
            phi = phi.sub(&split).expect("same degree");
            out.push(u1.to_vector());
            out.push(u2.to_vector());
        }
        out
    }

    /// A basis change whose first `2r` new generators are Darboux 1-forms,
    /// completed by standard generators of lowest index.
    pub fn darboux_basis(&self) -> (BasisChange<F>, usize) {
        let f = self.0.field();
        let forms = self.darboux_forms();
        let r = forms.len() / 2;
        let cols = linalg::extend_to_basis(f, self.dim(), &forms);
        let m = Matrix::from_cols(f, self.dim(), &cols).expect("square");
        (BasisChange::new(m).expect("Darboux forms are independent"), r)
    }
}

/// `x_1∧x_2 + .. + x_{2r-1}∧x_{2r}` in dimension `n`.
pub fn standard_symplectic<F: Field>(field: &F, n: usize, r: usize) -> KForm<F> {
    let mut out = KForm::zero(field, n, 2);
    for k in 0..r {
        out.add_term(Monomial::pair(2 * k, 2 * k + 1), field.one());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};
    use proptest::prelude::*;

    fn q() -> RationalField {
        RationalField::Q
    }

    fn p(s: &str, n: usize) -> KForm<RationalField> {
        KForm::parse(&q(), n, s).unwrap()
    }

    #[test]
    fn monomial_order_is_lexicographic() {
        let all = Monomial::all(4, 2);
        let shown: Vec<String> = all.iter().map(|m| m.to_string()).collect();
        assert_eq!(shown, ["x1^x2", "x1^x3", "x1^x4", "x2^x3", "x2^x4", "x3^x4"]);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
        assert_eq!(Monomial::all(7, 3).len(), 35);
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(p("x1^x2", 4).wedge(&p("x3^x4", 4)).unwrap(), p("x1^x2^x3^x4", 4));
        let e1 = p("x1", 4);
        assert!(e1.wedge(&e1).unwrap().is_zero());
        let w = p("x1^x2 + x3^x4", 4);
        assert_eq!(w.wedge(&w).unwrap(), p("2 x1^x2^x3^x4", 4));
        assert_eq!(p("x2", 3).wedge(&p("x1", 3)).unwrap(), p("-x1^x2", 3));
        assert_eq!(
            p("x1", 4).wedge(&p("x1", 5)).err(),
            Some(ExteriorError::AmbientMismatch(4, 5))
        );
    }

    #[test]
    fn parse_and_print() {
        let f = p("x1^x2 + 3 x3^x4", 4);
        assert_eq!(f.to_string(), "x1^x2 + 3 x3^x4");
        assert_eq!(p("- x3^x4 + 2/3 x1^x2", 4).to_string(), "2/3 x1^x2 - x3^x4");
        assert_eq!(p("x2^x1", 2).to_string(), "-x1^x2");
        assert_eq!(p("2*x1^x3 - x1^x3", 3).to_string(), "x1^x3");
        assert!(p("x1^x2 - x1^x2", 2).is_zero());
        assert_eq!(p("0", 3).to_string(), "0");
        match KForm::parse(&q(), 4, "x1^x2 + x9^x3") {
            Err(ExteriorError::Parse { column, .. }) => assert_eq!(column, 9),
            other => panic!("unexpected {other:?}"),
        }
        match KForm::parse(&q(), 4, "x1^x2 +") {
            Err(ExteriorError::Parse { column, .. }) => assert_eq!(column, 8),
            other => panic!("unexpected {other:?}"),
        }
        assert!(KForm::parse(&q(), 4, "x1^x2 + x3").is_err());
        let f7 = PrimeField::new(7).unwrap();
        let g = KForm::parse(&f7, 4, "x1^x3 - x2^x4").unwrap();
        assert_eq!(g.to_string(), "x1^x3 + 6 x2^x4");
        assert_eq!(KForm::parse(&f7, 4, &g.to_string()).unwrap(), g);
        let k = crate::field::QuadExt::new(q(), q().from_i64(2)).unwrap();
        let mut h = KForm::zero(&k, 4, 2);
        h.add_term(Monomial::pair(0, 1), k.make(q().from_i64(1), q().from_i64(-3)));
        h.add_term(Monomial::pair(2, 3), k.make(q().zero(), q().from_i64(-1)));
        assert_eq!(h.to_string(), "(1 + -3*sqrt(2)) x1^x2 - (1*sqrt(2)) x3^x4");
        assert_eq!(KForm::parse(&k, 4, &h.to_string()).unwrap(), h);
    }

    #[test]
    fn bivector_ranks() {
        let b = |s| Bivector::new(KForm::parse_degree(&q(), 7, 2, s).unwrap()).unwrap();
        assert_eq!(b("x1^x2").rank(), 2);
        assert_eq!(b("x1^x2 + x3^x4 + x5^x6").rank(), 6);
        assert_eq!(b("0").rank(), 0);
    }

    #[test]
    fn darboux_examples() {
        let phi = Bivector::new(p("x1^x3", 4)).unwrap();
        let (basis, r) = phi.darboux_basis();
        assert_eq!(r, 1);
        assert_eq!(phi.form().change_basis(&basis).unwrap(), p("x1^x2", 4));
        let phi = Bivector::new(p("x1^x2 + x1^x3", 4)).unwrap();
        let (basis, r) = phi.darboux_basis();
        assert_eq!(r, 1);
        assert_eq!(phi.form().change_basis(&basis).unwrap(), p("x1^x2", 4));
        let zero = Bivector::new(KForm::zero(&q(), 4, 2)).unwrap();
        let (basis, r) = zero.darboux_basis();
        assert_eq!(r, 0);
        assert_eq!(basis, BasisChange::identity(&q(), 4));
    }

    #[test]
    fn support_examples() {
        let f = q();
        let s = Bivector::new(p("x1^x2", 5)).unwrap().support();
        assert_eq!(s, vec![linalg::unit_vec(&f, 5, 0), linalg::unit_vec(&f, 5, 1)]);
        let s = Bivector::new(p("x1^x2 + x3^x4", 5)).unwrap().support();
        assert_eq!(s, (0..4).map(|i| linalg::unit_vec(&f, 5, i)).collect::<Vec<_>>());
        assert!(Bivector::new(KForm::zero(&f, 5, 2)).unwrap().support().is_empty());
    }

    #[test]
    fn top_component_examples() {
        let w = p("x1^x2 + x3^x4", 4);
        assert_eq!(w.wedge(&w).unwrap().top_component().unwrap(), q().from_i64(2));
        let t = p("x1^x2", 7)
            .wedge(&p("x3^x4", 7))
            .unwrap()
            .wedge(&p("x5^x6", 7))
            .unwrap()
            .wedge(&p("x7", 7))
            .unwrap();
        assert_eq!(t.top_component().unwrap(), q().one());
        assert!(p("x1^x2", 4).top_component().is_err());
        let d = p("x1^x2", 5);
        assert!(d.wedge(&d).unwrap().coefficient_vector().iter().all(|c| q().is_zero(c)));
        assert_eq!(d.wedge(&d).unwrap().coefficient_vector().len(), 5);
    }

    #[test]
    fn leibniz_derivation() {
        // d x7 = x1^x2 gives d(x3^x7) = -x3^x1^x2 = -x1^x2^x3
        let f = q();
        let mut images: Vec<KForm<RationalField>> = (0..7).map(|_| KForm::zero(&f, 7, 2)).collect();
        images[6] = p("x1^x2", 7);
        assert_eq!(p("x3^x7", 7).derivation(&images), p("-x1^x2^x3", 7));
        assert_eq!(p("x7^x3", 7).derivation(&images), p("x1^x2^x3", 7));
        assert_eq!(p("x7", 7).derivation(&images), p("x1^x2", 7));
    }

    fn random_form(n: usize, k: usize) -> impl Strategy<Value = KForm<RationalField>> {
        let monos = Monomial::all(n, k);
        proptest::collection::vec(-2i64..=2, monos.len()).prop_map(move |cs| {
            let f = q();
            let mut out = KForm::zero(&f, n, k);
            for (m, c) in monos.iter().zip(cs) {
                out.add_term(*m, f.from_i64(c));
            }
            out
        })
    }

    fn random_invertible(n: usize) -> impl Strategy<Value = BasisChange<RationalField>> {
        proptest::collection::vec(-2i64..=2, n * n).prop_filter_map("singular", move |v| {
            let f = q();
            let m = Matrix::from_fn(&f, n, n, |i, j| f.from_i64(v[i * n + j]));
            BasisChange::new(m).ok()
        })
    }

    proptest! {
        #[test]
        fn darboux_reexpression(phi in (4usize..=7).prop_flat_map(|n| random_form(n, 2))) {
            let b = Bivector::new(phi.clone()).unwrap();
            let (basis, r) = b.darboux_basis();
            prop_assert_eq!(2 * r, b.rank());
            let std = standard_symplectic(&q(), phi.dim(), r);
            prop_assert_eq!(phi.change_basis(&basis).unwrap(), std);
            prop_assert_eq!(b.support().len(), b.rank());
        }

        #[test]
        fn square_vanishes_iff_rank_at_most_two(phi in (4usize..=7).prop_flat_map(|n| random_form(n, 2))) {
            let b = Bivector::new(phi.clone()).unwrap();
            prop_assert_eq!(phi.wedge(&phi).unwrap().is_zero(), b.rank() <= 2);
        }

        #[test]
        fn decomposable_square_vanishes(u in random_form(6, 1), v in random_form(6, 1)) {
            let phi = u.wedge(&v).unwrap();
            prop_assert!(phi.wedge(&phi).unwrap().is_zero());
            prop_assert!(Bivector::new(phi).unwrap().rank() <= 2);
        }

        #[test]
        fn support_transforms_with_basis(phi in random_form(5, 2), p in random_invertible(5)) {
            let f = q();
            let b = Bivector::new(phi.clone()).unwrap();
            let moved = Bivector::new(phi.change_basis(&p).unwrap()).unwrap();
            // a 1-form u = sum u_i x_i has coordinates P^{-1} u in the new generators
            let pinv = p.matrix().invert().unwrap();
            let image: Vec<_> = b.support().iter().map(|u| pinv.mul_vec(u).unwrap()).collect();
            prop_assert_eq!(linalg::span_basis(&f, 5, &image), moved.support());
        }

        #[test]
        fn wedge_graded_commutative(a in random_form(6, 1), b in random_form(6, 2), c in random_form(6, 2)) {
            let ab = a.wedge(&b).unwrap();
            prop_assert_eq!(ab.clone(), b.wedge(&a).unwrap());
            let a2 = a.wedge(&a).unwrap();
            prop_assert!(a2.is_zero());
            prop_assert_eq!(ab.wedge(&c).unwrap(), a.wedge(&b.wedge(&c).unwrap()).unwrap());
        }

        #[test]
        fn parse_print_round_trip(phi in random_form(7, 2)) {
            let s = phi.to_string();
            prop_assert_eq!(KForm::parse(&q(), 7, &s).unwrap(), phi);
        }

        #[test]
        fn basis_change_composition(phi in random_form(5, 2), p in random_invertible(5), r in random_invertible(5)) {
            let step = phi.change_basis(&p).unwrap().change_basis(&r).unwrap();
            prop_assert_eq!(step, phi.change_basis(&p.then(&r).unwrap()).unwrap());
        }
    }
}
