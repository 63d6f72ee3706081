//! Classification of length-two minimal algebras on seven generators.
//!
//! The pipeline reduces an input to the top differentials `φ_j` written in a
//! basis of closed generators, decides the row from the geometry of the span
//! of the `φ_j`, and then builds a basis change onto the row's normal form.
//! Every certificate is checked by applying it before it is returned.

mod build;
mod enumerate;
pub mod models;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exterior::{Bivector, ExteriorError, KForm};
use crate::field::integer::DEFAULT_FACTOR_BOUND;
use crate::field::{Field, FieldDescriptor, FieldError, QuadExt};
use crate::linalg::{self, BasisChange, LinalgError, Matrix};
use crate::liealg::{LieError, MinimalAlgebra};
use crate::quadform::{
    find_conic_point, is_isotropic_ternary, normalize_conic, quaternion_class, ramified_places, ConicNormalization, Place, QuadError,
    QuaternionClass,
};

pub use enumerate::{enumerate_classes, enumerate_classes_with, quaternion_seeds, EnumerationOptions};
pub use models::{model, plain_model, reference_model, ReferenceRow, Shape, REFERENCE_ROWS};

use build::Reduction;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("expected 7 generators, found {0}")]
    WrongDimension(usize),
    #[error("characteristic filtration has f-vector {dims:?}, expected length 2")]
    WrongLength { dims: Vec<usize> },
    #[error("d does not square to zero")]
    NotFlat,
    #[error("not minimal: the characteristic filtration stops at dimension {reached} of {dim}")]
    NotMinimal { reached: usize, dim: usize },
    #[error("the bivector is zero")]
    ZeroBivector,
    #[error("the two differentials are linearly dependent")]
    DependentPencil,
    #[error("the three differentials are linearly dependent")]
    DependentNet,
    #[error("unexpected gcd degree: {0}")]
    UnexpectedGcdDegree(String),
    #[error("no rational point of height at most {0} on an isotropic conic")]
    RationalPointSearchExceeded(u64),
    #[error("classification is not available over {0}")]
    UnsupportedField(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Quad(QuadError),
    #[error(transparent)]
    Lie(LieError),
}

impl From<LieError> for ClassifyError {
    fn from(e: LieError) -> Self {
        match e {
            LieError::NotFlat => ClassifyError::NotFlat,
            LieError::NotMinimal { reached, dim } => ClassifyError::NotMinimal { reached, dim },
            e => ClassifyError::Lie(e),
        }
    }
}

impl From<QuadError> for ClassifyError {
    fn from(e: QuadError) -> Self {
        match e {
            QuadError::RationalPointSearchExceeded(b) => ClassifyError::RationalPointSearchExceeded(b),
            e => ClassifyError::Quad(e),
        }
    }
}

impl ClassifyError {
    /// Inputs that are well formed but fall outside the classified family.
    pub fn is_classification_state(&self) -> bool {
        matches!(
            self,
            ClassifyError::WrongDimension(_)
                | ClassifyError::WrongLength { .. }
                | ClassifyError::NotFlat
                | ClassifyError::NotMinimal { .. }
                | ClassifyError::ZeroBivector
                | ClassifyError::DependentPencil
                | ClassifyError::DependentNet
                | ClassifyError::UnexpectedGcdDegree(_)
                | ClassifyError::RationalPointSearchExceeded(_)
                | ClassifyError::UnsupportedField(_)
        )
    }
}

/// Position of a pencil of 2-forms on five generators relative to the
/// decomposable ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum PencilClass {
    ContainedInGrassmannian,
    Bisecant,
    /// The two decomposable members are conjugate over `k(sqrt a)`.
    BisecantConjugate { a: String },
    TangentLagrangian,
    TangentLine,
    Disjoint,
}

impl PencilClass {
    pub fn shape(&self) -> Shape {
        match self {
            PencilClass::ContainedInGrassmannian => Shape::Contained,
            PencilClass::Bisecant => Shape::Bisecant,
            PencilClass::BisecantConjugate { .. } => Shape::BisecantConjugate,
            PencilClass::TangentLagrangian => Shape::TangentLagrangian,
            PencilClass::TangentLine => Shape::TangentLine,
            PencilClass::Disjoint => Shape::Disjoint,
        }
    }
}

/// The normal form of a classified algebra.
///
/// Equality, ordering and hashing go through [`CanonicalForm::key`]: the
/// shape, the square class `a` for the one-parameter rows and the quaternion
/// class for the two-parameter row. The literal `(a, b)` of that row is kept
/// for the model it certifies against but is not part of the identity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub field: FieldDescriptor,
    pub signature: (usize, usize),
    pub shape: Shape,
    pub row: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub b: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub qclass: Option<QuaternionClass>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
}

#[derive(PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    field: String,
    shape: Shape,
    a: Option<String>,
    qclass: Option<QuaternionClass>,
}

impl CanonicalForm {
    pub fn key(&self) -> CanonicalKey {
        CanonicalKey {
            field: self.field.to_string(),
            shape: self.shape,
            a: if self.shape.parameters() == 1 { self.a.clone() } else { None },
            qclass: if self.shape.parameters() == 2 { self.qclass.clone() } else { None },
        }
    }

    /// The normal form over `field`, with the parameters parsed back.
    pub fn model<F: Field>(&self, field: &F) -> Result<MinimalAlgebra<F>, ClassifyError> {
        let a = self.a.as_deref().map(|s| field.parse_elem(s)).transpose()?.unwrap_or_else(|| field.one());
        let b = self.b.as_deref().map(|s| field.parse_elem(s)).transpose()?.unwrap_or_else(|| field.one());
        Ok(model(field, self.shape, &a, &b))
    }
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for CanonicalForm {}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl Hash for CanonicalForm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row {} ({})", self.row, self.shape.tag())?;
        if let Some(a) = &self.a {
            write!(f, " a = {a}")?;
        }
        if let Some(b) = &self.b {
            write!(f, " b = {b}")?;
        }
        if let Some(q) = &self.qclass {
            write!(f, " [{q}]")?;
        }
        if let Some(l) = &self.label {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

/// One branch decision with the data that forced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub branch: String,
    pub witness: String,
}

impl TraceStep {
    fn new(branch: &str, witness: impl Into<String>) -> Self {
        Self { branch: branch.to_string(), witness: witness.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate<F: Field> {
    /// Columns are the normal-form generators written in the input ones.
    Base(BasisChange<F>),
    Omitted { reason: String },
}

impl<F: Field> Certificate<F> {
    pub fn basis_change(&self) -> Option<&BasisChange<F>> {
        match self {
            Certificate::Base(p) => Some(p),
            Certificate::Omitted { .. } => None,
        }
    }
}

/// A certificate over `K = k(sqrt a)`: `to_split` takes the input to the
/// split row's model over `K`, and `descent` takes that model to the row's
/// own model (the Galois-descent substitution).
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionCertificate<B: Field> {
    pub field: QuadExt<B>,
    pub split_shape: Shape,
    pub to_split: BasisChange<QuadExt<B>>,
    pub descent: BasisChange<QuadExt<B>>,
}

impl<B: Field> ExtensionCertificate<B> {
    /// Checks both halves exactly against the given input and `k`-model.
    pub fn verify<F>(&self, input: &MinimalAlgebra<F>, model_k: &MinimalAlgebra<F>) -> Result<bool, ClassifyError>
    where
        F: Field<Elem = B::Elem>,
    {
        let k = &self.field;
        let input_k = input.map(k, |x| k.embed(x));
        let target_k = model_k.map(k, |x| k.embed(x));
        let split = plain_model(k, self.split_shape);
        Ok(input_k.apply_basis_change(&self.to_split)? == split && split.apply_basis_change(&self.descent)? == target_k)
    }
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub certificates: bool,
    /// Height bound for rational points on isotropic conics.
    pub height_bound: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { certificates: true, height_bound: 10_000 }
    }
}

#[derive(Clone, Debug)]
pub struct ClassificationReport<F: Field> {
    pub input: MinimalAlgebra<F>,
    pub signature: (usize, usize),
    pub trace: Vec<TraceStep>,
    pub canonical: CanonicalForm,
    /// The normal form the certificate maps onto.
    pub model: MinimalAlgebra<F>,
    pub certificate: Certificate<F>,
    pub extension: Option<ExtensionCertificate<F::ExtBase>>,
}

impl<F: Field> ClassificationReport<F> {
    /// Re-applies every certificate; `true` when each one present checks out.
    pub fn verify(&self) -> Result<bool, ClassifyError> {
        if let Certificate::Base(p) = &self.certificate {
            if self.input.apply_basis_change(p)? != self.model {
                return Ok(false);
            }
        }
        if let Some(ext) = &self.extension {
            return ext.verify(&self.input, &self.model);
        }
        Ok(true)
    }
}

pub fn classify<F: Field>(alg: &MinimalAlgebra<F>) -> Result<ClassificationReport<F>, ClassifyError> {
    classify_with(alg, &ClassifyOptions::default())
}

/// The closed generators first, then a complement; the top differentials
/// written in the closed generators.
struct Adapted<F: Field> {
    basis: BasisChange<F>,
    f0: usize,
    phis: Vec<KForm<F>>,
}

fn adapt<F: Field>(alg: &MinimalAlgebra<F>, trace: &mut Vec<TraceStep>) -> Result<Adapted<F>, ClassifyError> {
    let f = alg.field();
    let n = alg.dim();
    if n != 7 {
        return Err(ClassifyError::WrongDimension(n));
    }
    // the filtration checks flatness first
    let filt = alg.characteristic_filtration()?;
    let dims = filt.dims();
    trace.push(TraceStep::new("filtration", format!("f-vector {dims:?}")));
    if dims.len() != 2 {
        return Err(ClassifyError::WrongLength { dims });
    }
    let f0 = dims[0];
    let mut cols = filt.levels()[0].clone();
    cols.extend(linalg::complement(f, n, &cols));
    let basis = BasisChange::new(Matrix::from_cols(f, n, &cols)?)?;
    let reduced = alg.apply_basis_change(&basis)?;
    let mut phis = Vec::new();
    for (k, dk) in reduced.differentials().iter().enumerate() {
        if k < f0 {
            if !dk.is_zero() {
                return Err(ClassifyError::Internal("closed generator with nonzero differential".into()));
            }
        } else {
            if !dk.lives_in_first(f0) {
                return Err(ClassifyError::Internal("differential leaves the closed generators".into()));
            }
            phis.push(dk.narrow(f0));
        }
    }
    Ok(Adapted { basis, f0, phis })
}

fn unsupported<F: Field>(field: &F) -> Result<(), ClassifyError> {
    match field.descriptor() {
        FieldDescriptor::QuadraticExtension { .. } => Err(ClassifyError::UnsupportedField(field.descriptor().to_string())),
        FieldDescriptor::PrimeField { p: 2 } => Err(ClassifyError::UnsupportedField("F_2".into())),
        _ => Ok(()),
    }
}

fn closure_reason<F: Field>(field: &F) -> String {
    match field.descriptor() {
        FieldDescriptor::RealsModel => "needs real closure".to_string(),
        FieldDescriptor::AlgClosedModel => "needs algebraic closure".to_string(),
        d => format!("needs a square root outside {d}"),
    }
}

/// What a case analysis decided, with the data its certificate needs.
pub(crate) struct Decision<F: Field> {
    shape: Shape,
    a: Option<F::Elem>,
    b: Option<F::Elem>,
    qclass: Option<QuaternionClass>,
    plan: Plan<F>,
}

/// Certificate plans. `Omit` carries the reason.
pub(crate) enum Plan<F: Field> {
    Ready(Reduction<F>),
    Conjugate52 { c0: F::Elem, c1: F::Elem, s: F::Elem, t: F::Elem },
    ConjugateNet { norm: ConicNormalization<F>, anisotropic: bool },
    Omit(String),
    Skip,
}

pub fn classify_with<F: Field>(
    alg: &MinimalAlgebra<F>,
    opts: &ClassifyOptions,
) -> Result<ClassificationReport<F>, ClassifyError> {
    let f = alg.field();
    unsupported(f)?;
    let mut trace = Vec::new();
    let ad = adapt(alg, &mut trace)?;
    let signature = (ad.f0, 7 - ad.f0);
    let decision = match signature {
        (6, 1) => decide_61(&ad.phis[0], opts, &mut trace)?,
        (5, 2) => decide_52(&ad.phis[0], &ad.phis[1], opts, &mut trace)?,
        (4, 3) => decide_43(&ad.phis, opts, &mut trace)?,
        _ => return Err(ClassifyError::WrongLength { dims: vec![signature.0, signature.1] }),
    };
    let one = f.one();
    let a = decision.a.clone().unwrap_or_else(|| one.clone());
    let b = decision.b.clone().unwrap_or_else(|| one.clone());
    let target = model(f, decision.shape, &a, &b);
    let canonical = canonical_form(f, &decision)?;
    let (certificate, extension) = match decision.plan {
        Plan::Skip => (Certificate::Omitted { reason: "not requested".into() }, None),
        Plan::Omit(reason) => {
            trace.push(TraceStep::new("certificate", format!("omitted: {reason}")));
            (Certificate::Omitted { reason }, None)
        }
        Plan::Ready(red) => (Certificate::Base(finish(alg, &ad.basis, &red, &target)?), None),
        Plan::Conjugate52 { c0, c1, s, t } => {
            let red = build::conjugate_52(&ad.phis, &c0, &c1, &s, &t)?;
            let base = finish(alg, &ad.basis, &red, &target)?;
            let ext = build::extension_52(alg, &ad.basis, &ad.phis, &c0, &c1, &s, &t)?;
            (Certificate::Base(base), Some(ext))
        }
        Plan::ConjugateNet { norm, anisotropic } => {
            let red = build::conjugate_43(&ad.phis, &norm, anisotropic)?;
            let base = finish(alg, &ad.basis, &red, &target)?;
            let ext = build::extension_43(alg, &ad.basis, &ad.phis, &norm, anisotropic)?;
            (Certificate::Base(base), Some(ext))
        }
    };
    let report = ClassificationReport { input: alg.clone(), signature, trace, canonical, model: target, certificate, extension };
    if report.extension.is_some() && !report.verify()? {
        return Err(ClassifyError::Internal("extension certificate does not verify".into()));
    }
    Ok(report)
}

/// Assembles `P = P_adapt · diag(G, H)` and checks it.
fn finish<F: Field>(
    alg: &MinimalAlgebra<F>,
    adapt: &BasisChange<F>,
    red: &Reduction<F>,
    target: &MinimalAlgebra<F>,
) -> Result<BasisChange<F>, ClassifyError> {
    let p = build::assemble(alg.field(), adapt, red)?;
    if alg.apply_basis_change(&p)? != *target {
        return Err(ClassifyError::Internal(format!("certificate does not reproduce {target}")));
    }
    Ok(p)
}

fn canonical_form<F: Field>(field: &F, d: &Decision<F>) -> Result<CanonicalForm, ClassifyError> {
    let desc = field.descriptor();
    let fmt_opt = |x: &Option<F::Elem>| x.as_ref().map(|v| field.format_elem(v));
    let label = real_label(field, d)?;
    Ok(CanonicalForm {
        field: desc,
        signature: d.shape.signature(),
        shape: d.shape,
        row: d.shape.row(),
        a: fmt_opt(&d.a),
        b: fmt_opt(&d.b),
        qclass: d.qclass.clone(),
        label,
    })
}

/// Name of the real algebra obtained by extending scalars to `R`, when that
/// makes sense for the field.
fn real_label<F: Field>(field: &F, d: &Decision<F>) -> Result<Option<String>, ClassifyError> {
    let own = Some(d.shape.label().to_string());
    let split = Some(d.shape.split_form().label().to_string());
    Ok(match field.descriptor() {
        FieldDescriptor::RealsModel | FieldDescriptor::AlgClosedModel => own,
        FieldDescriptor::Rationals => match d.shape {
            Shape::BisecantConjugate | Shape::ConjugateLinePair => {
                let a = d.a.as_ref().and_then(|a| field.to_rational(a)).expect("rational parameter");
                if a < num_rational::BigRational::from_integer(0.into()) {
                    own
                } else {
                    split
                }
            }
            Shape::AnisotropicConic => match &d.qclass {
                Some(QuaternionClass::Rational { ramified }) if ramified.contains(&Place::Infinity) => own,
                _ => split,
            },
            _ => own,
        },
        FieldDescriptor::PrimeField { .. } if d.shape.parameters() > 0 => None,
        FieldDescriptor::PrimeField { .. } => own,
        FieldDescriptor::QuadraticExtension { .. } => None,
    })
}

/// Rank of a nonzero 2-form on six generators.
pub fn classify_61<F: Field>(phi: &KForm<F>) -> Result<Shape, ClassifyError> {
    let r = Bivector::new(phi.clone())?.rank();
    match r {
        0 => Err(ClassifyError::ZeroBivector),
        2 => Ok(Shape::Rank2),
        4 => Ok(Shape::Rank4),
        6 => Ok(Shape::Rank6),
        _ => Err(ClassifyError::Internal(format!("odd rank {r}"))),
    }
}

fn decide_61<F: Field>(phi: &KForm<F>, opts: &ClassifyOptions, trace: &mut Vec<TraceStep>) -> Result<Decision<F>, ClassifyError> {
    let shape = classify_61(phi)?;
    trace.push(TraceStep::new("rank", format!("rank {}", 2 * shape.row())));
    let plan = if opts.certificates { Plan::Ready(build::darboux(phi)) } else { Plan::Skip };
    Ok(Decision { shape, a: None, b: None, qclass: None, plan })
}

/// Zeros `(λ : μ)` of the binary quadratics cutting out the decomposable
/// members of a pencil, and their type.
pub(crate) enum PencilRoots<E> {
    All,
    None,
    /// A single root, tangent type.
    One([E; 2]),
    /// Two roots, both rational (or `sqrt` of the discriminant is missing).
    Two { c: [E; 3], disc: E },
    Conjugate { c: [E; 3], disc: E },
}

pub(crate) fn pencil_roots<F: Field>(
    phi6: &KForm<F>,
    phi7: &KForm<F>,
    trace: &mut Vec<TraceStep>,
) -> Result<PencilRoots<F::Elem>, ClassifyError> {
    let f = phi6.field();
    let n = phi6.dim();
    let span = linalg::span_dim(f, n * (n - 1) / 2, &[phi6.coefficient_vector(), phi7.coefficient_vector()]);
    if span < 2 {
        return Err(ClassifyError::DependentPencil);
    }
    let a = phi6.wedge(phi6)?.coefficient_vector();
    let b = phi6.wedge(phi7)?.coefficient_vector();
    let c = phi7.wedge(phi7)?.coefficient_vector();
    let two = f.from_i64(2);
    let quads: Vec<Vec<F::Elem>> =
        (0..a.len()).map(|m| vec![a[m].clone(), f.mul(&two, &b[m]), c[m].clone()]).collect();
    let basis = linalg::span_basis(f, 3, &quads);
    trace.push(TraceStep::new("pencil", format!("quadratics span dimension {}", basis.len())));
    Ok(match basis.len() {
        0 => PencilRoots::All,
        1 => {
            let q = &basis[0];
            let disc = f.sub(&f.square(&q[1]), &f.mul(&f.from_i64(4), &f.mul(&q[0], &q[2])));
            let c = [q[0].clone(), q[1].clone(), q[2].clone()];
            if f.is_zero(&disc) {
                trace.push(TraceStep::new("gcd", "degree 2, zero discriminant"));
                if f.is_zero(&c[0]) {
                    PencilRoots::One([f.one(), f.zero()])
                } else {
                    PencilRoots::One([f.neg(&c[1]), f.mul(&two, &c[0])])
                }
            } else if f.is_square(&disc)? {
                trace.push(TraceStep::new("gcd", format!("degree 2, square discriminant {}", f.format_elem(&disc))));
                PencilRoots::Two { c, disc }
            } else {
                trace.push(TraceStep::new("gcd", format!("degree 2, nonsquare discriminant {}", f.format_elem(&disc))));
                PencilRoots::Conjugate { c, disc }
            }
        }
        2 => {
            let m = Matrix::from_rows(f, &basis)?;
            let w = m.kernel_basis().pop().ok_or_else(|| ClassifyError::Internal("empty kernel".into()))?;
            if f.square(&w[1]) == f.mul(&w[0], &w[2]) {
                trace.push(TraceStep::new("gcd", "degree 1, one common root"));
                if f.is_zero(&w[0]) {
                    PencilRoots::One([f.zero(), f.one()])
                } else {
                    PencilRoots::One([w[0].clone(), w[1].clone()])
                }
            } else {
                trace.push(TraceStep::new("gcd", "degree 0"));
                PencilRoots::None
            }
        }
        _ => {
            trace.push(TraceStep::new("gcd", "degree 0"));
            PencilRoots::None
        }
    })
}

/// The member of the pencil with coordinates `(λ, μ)`.
pub(crate) fn pencil_member<F: Field>(phis: &[KForm<F>], c: &[F::Elem]) -> KForm<F> {
    build::combo(phis, c)
}

/// The tangent member and a second one, and whether the plane of the first
/// lies in the support of the second.
fn tangent_kind<F: Field>(phis: &[KForm<F>], root: &[F::Elem; 2]) -> Result<bool, ClassifyError> {
    let f = phis[0].field();
    let other = build::other_member(f, root);
    let psi1 = Bivector::new(pencil_member(phis, root))?;
    let psi2 = Bivector::new(pencil_member(phis, &other))?;
    if psi1.rank() != 2 || psi2.rank() != 4 {
        return Err(ClassifyError::Internal("tangent pencil with unexpected ranks".into()));
    }
    let sigma = psi2.support();
    Ok(psi1.support().iter().all(|v| linalg::in_span(f, psi1.dim(), &sigma, v)))
}

/// Position of the pencil spanned by `φ6`, `φ7` (2-forms on five generators).
pub fn pencil_position<F: Field>(phi6: &KForm<F>, phi7: &KForm<F>) -> Result<PencilClass, ClassifyError> {
    let f = phi6.field();
    let mut trace = Vec::new();
    let phis = [phi6.clone(), phi7.clone()];
    Ok(match pencil_roots(phi6, phi7, &mut trace)? {
        PencilRoots::All => PencilClass::ContainedInGrassmannian,
        PencilRoots::None => PencilClass::Disjoint,
        PencilRoots::Two { .. } => PencilClass::Bisecant,
        PencilRoots::Conjugate { disc, .. } => {
            PencilClass::BisecantConjugate { a: f.format_elem(&f.square_class(&disc)?.representative) }
        }
        PencilRoots::One(root) => {
            if tangent_kind(&phis, &root)? {
                PencilClass::TangentLagrangian
            } else {
                PencilClass::TangentLine
            }
        }
    })
}

/// Row and parameter of a pencil on five generators.
pub fn classify_52<F: Field>(phi6: &KForm<F>, phi7: &KForm<F>) -> Result<(Shape, Option<F::Elem>), ClassifyError> {
    let opts = ClassifyOptions { certificates: false, ..Default::default() };
    let d = decide_52(phi6, phi7, &opts, &mut Vec::new())?;
    Ok((d.shape, d.a))
}

fn decide_52<F: Field>(
    phi6: &KForm<F>,
    phi7: &KForm<F>,
    opts: &ClassifyOptions,
    trace: &mut Vec<TraceStep>,
) -> Result<Decision<F>, ClassifyError> {
    let f = phi6.field();
    let phis = [phi6.clone(), phi7.clone()];
    let want = opts.certificates;
    let plain = |shape, plan| Decision { shape, a: None, b: None, qclass: None, plan };
    let skip_or = |build: &dyn Fn() -> Result<Reduction<F>, ClassifyError>| -> Result<Plan<F>, ClassifyError> {
        Ok(if want { Plan::Ready(build()?) } else { Plan::Skip })
    };
    Ok(match pencil_roots(phi6, phi7, trace)? {
        PencilRoots::All => plain(Shape::Contained, skip_or(&|| build::contained(&phis))?),
        PencilRoots::None => plain(Shape::Disjoint, skip_or(&|| build::disjoint(&phis))?),
        PencilRoots::One(root) => {
            let lagrangian = tangent_kind(&phis, &root)?;
            trace.push(TraceStep::new("tangent", if lagrangian { "plane inside the support" } else { "plane meets the support in a line" }));
            if lagrangian {
                plain(Shape::TangentLagrangian, skip_or(&|| build::tangent_lagrangian(&phis, &root))?)
            } else {
                plain(Shape::TangentLine, skip_or(&|| build::tangent_line(&phis, &root))?)
            }
        }
        PencilRoots::Two { c, disc } => {
            let plan = if !want {
                Plan::Skip
            } else {
                match f.sqrt(&disc) {
                    Ok(r) => {
                        let roots = build::quadratic_roots(f, &c, &r);
                        Plan::Ready(build::bisecant(&phis, &roots)?)
                    }
                    Err(_) => Plan::Omit(closure_reason(f)),
                }
            };
            plain(Shape::Bisecant, plan)
        }
        PencilRoots::Conjugate { c, disc } => {
            let canon = f.square_class(&disc)?.representative;
            let (s, t) = f.split_square(&disc)?;
            let plan = if !want {
                Plan::Skip
            } else if s != canon {
                Plan::Omit(closure_reason(f))
            } else {
                Plan::Conjugate52 { c0: c[0].clone(), c1: c[1].clone(), s, t }
            };
            Decision { shape: Shape::BisecantConjugate, a: Some(canon), b: None, qclass: None, plan }
        }
    })
}

/// Gram matrix of `(Xφ5 + Yφ6 + Zφ7)^2` on the top monomial of four
/// generators.
pub fn net_conic<F: Field>(phis: &[KForm<F>]) -> Result<Matrix<F>, ClassifyError> {
    let f = phis[0].field();
    let n = phis[0].dim();
    let vecs: Vec<_> = phis.iter().map(KForm::coefficient_vector).collect();
    if phis.len() != 3 || linalg::span_dim(f, n * (n - 1) / 2, &vecs) < 3 {
        return Err(ClassifyError::DependentNet);
    }
    let mut g = Matrix::zeros(f, 3, 3);
    for i in 0..3 {
        for j in i..3 {
            let v = phis[i].wedge(&phis[j])?.top_component()?;
            g.set(i, j, v.clone());
            g.set(j, i, v);
        }
    }
    Ok(g)
}

/// Row and parameters of a net on four generators.
pub fn classify_43<F: Field>(phis: &[KForm<F>]) -> Result<(Shape, Option<F::Elem>, Option<F::Elem>), ClassifyError> {
    let opts = ClassifyOptions { certificates: false, ..Default::default() };
    let d = decide_43(phis, &opts, &mut Vec::new())?;
    Ok((d.shape, d.a, d.b))
}

fn decide_43<F: Field>(
    phis: &[KForm<F>],
    opts: &ClassifyOptions,
    trace: &mut Vec<TraceStep>,
) -> Result<Decision<F>, ClassifyError> {
    let f = phis[0].field();
    let want = opts.certificates;
    let g = net_conic(phis)?;
    let plain = |shape, plan| Decision { shape, a: None, b: None, qclass: None, plan };
    if g.is_zero() {
        let supports: Vec<Vec<Vec<F::Elem>>> =
            phis.iter().map(|p| Bivector::new(p.clone()).map(|b| b.support())).collect::<Result<_, _>>()?;
        let common = linalg::intersect(f, 4, &linalg::intersect(f, 4, &supports[0], &supports[1]), &supports[2]);
        trace.push(TraceStep::new("conic", "zero form"));
        return Ok(if common.len() == 1 {
            trace.push(TraceStep::new("supports", "common line"));
            plain(Shape::CommonLine, if want { Plan::Ready(build::common_line(phis, &common[0])?) } else { Plan::Skip })
        } else {
            trace.push(TraceStep::new("supports", "span a plane"));
            plain(Shape::CommonPlane, if want { Plan::Ready(build::common_plane(phis)?) } else { Plan::Skip })
        });
    }
    let norm = normalize_conic(&g)?;
    trace.push(TraceStep::new(
        "conic",
        format!("rank {}, X^2 - ({}) Y^2 - ({}) Z^2", norm.rank, f.format_elem(&norm.exact.a), f.format_elem(&norm.exact.b)),
    ));
    Ok(match norm.rank {
        1 => plain(Shape::DoubleLine, if want { Plan::Ready(build::double_line(phis, &norm)?) } else { Plan::Skip }),
        2 => {
            if f.is_square(&norm.exact.a)? {
                let plan = if !want {
                    Plan::Skip
                } else {
                    match f.sqrt(&norm.exact.a) {
                        Ok(r) => Plan::Ready(build::line_pair(phis, &norm.basis, &r)?),
                        Err(_) => Plan::Omit(closure_reason(f)),
                    }
                };
                plain(Shape::LinePair, plan)
            } else {
                let canon = norm.form.a.clone();
                let plan = if !want {
                    Plan::Skip
                } else if norm.exact.a != canon {
                    Plan::Omit(closure_reason(f))
                } else {
                    Plan::ConjugateNet { norm: norm.clone(), anisotropic: false }
                };
                Decision { shape: Shape::ConjugateLinePair, a: Some(canon), b: None, qclass: None, plan }
            }
        }
        _ => {
            let (ea, eb) = (&norm.exact.a, &norm.exact.b);
            if is_isotropic_ternary(f, ea, eb)? {
                trace.push(TraceStep::new("isotropy", "isotropic"));
                let plan = if want { smooth_conic_plan(f, phis, &norm, opts)? } else { Plan::Skip };
                plain(Shape::SmoothConic, plan)
            } else {
                trace.push(TraceStep::new("isotropy", "anisotropic"));
                let qclass = quaternion_class(f, ea, eb)?;
                trace.push(TraceStep::new("quaternion", qclass.to_string()));
                let rational = f.descriptor() == FieldDescriptor::Rationals;
                let (a, b) = if rational { (ea.clone(), eb.clone()) } else { (norm.form.a.clone(), norm.form.b.clone()) };
                let plan = if !want {
                    Plan::Skip
                } else if *ea != a || *eb != b {
                    Plan::Omit(closure_reason(f))
                } else {
                    Plan::ConjugateNet { norm: norm.clone(), anisotropic: true }
                };
                Decision { shape: Shape::AnisotropicConic, a: Some(a), b: Some(b), qclass: Some(qclass), plan }
            }
        }
    })
}

fn smooth_conic_plan<F: Field>(
    f: &F,
    phis: &[KForm<F>],
    norm: &ConicNormalization<F>,
    opts: &ClassifyOptions,
) -> Result<Plan<F>, ClassifyError> {
    let (ea, eb) = (&norm.exact.a, &norm.exact.b);
    if f.descriptor().is_rational_model() {
        let (ra, rb) = (f.to_rational(ea).expect("rational"), f.to_rational(eb).expect("rational"));
        if !ramified_places(&ra, &rb, DEFAULT_FACTOR_BOUND)?.is_empty() {
            // isotropic over the model field but not over Q
            return Ok(Plan::Omit(closure_reason(f)));
        }
    }
    let pt = match find_conic_point(f, ea, eb, opts.height_bound) {
        Ok(pt) => pt,
        Err(QuadError::Unsupported(_)) => return Ok(Plan::Omit(closure_reason(f))),
        Err(e) => return Err(e.into()),
    };
    let p1 = norm.basis.mul_vec(&pt)?;
    Ok(Plan::Ready(build::smooth_conic(phis, &p1)?))
}

/// Whether two presentations over the same field are isomorphic.
pub fn is_isomorphic<F: Field>(a: &MinimalAlgebra<F>, b: &MinimalAlgebra<F>) -> Result<bool, ClassifyError> {
    let opts = ClassifyOptions { certificates: false, ..Default::default() };
    Ok(classify_with(a, &opts)?.canonical == classify_with(b, &opts)?.canonical)
}
