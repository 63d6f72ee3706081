//! Certificate constructions, one per row.
//!
//! Each builder returns the new closed generators (1-forms in the closed
//! generators of the adapted basis) and the new differentials (coefficient
//! vectors over the `φ_j`). All builders are generic so the split rows can be
//! rerun over a quadratic extension.

use crate::exterior::{Bivector, KForm};
use crate::field::{Field, QuadExt};
use crate::linalg::{self, BasisChange, Matrix};
use crate::liealg::MinimalAlgebra;
use crate::quadform::{evaluate, ConicNormalization};

use super::models::{model, plain_model, Shape};
use super::{net_conic, ClassifyError, ExtensionCertificate};

type V<F> = Vec<<F as Field>::Elem>;

pub(crate) struct Reduction<F: Field> {
    pub z: Vec<V<F>>,
    pub h: Vec<V<F>>,
}

fn internal(msg: &str) -> ClassifyError {
    ClassifyError::Internal(msg.to_string())
}

pub(crate) fn combo<F: Field>(phis: &[KForm<F>], c: &[F::Elem]) -> KForm<F> {
    let mut out = KForm::zero(phis[0].field(), phis[0].dim(), 2);
    for (ci, p) in c.iter().zip(phis) {
        out = out.axpy(ci, p).expect("same space");
    }
    out
}

/// A pencil member independent of `root`.
pub(crate) fn other_member<F: Field>(f: &F, root: &[F::Elem; 2]) -> Vec<F::Elem> {
    if f.is_zero(&root[1]) {
        vec![f.zero(), f.one()]
    } else {
        vec![f.one(), f.zero()]
    }
}

fn support<F: Field>(psi: &KForm<F>) -> Vec<V<F>> {
    Bivector(psi.clone()).support()
}

/// `psi = u ∧ v` for a rank-two form.
fn decompose<F: Field>(psi: &KForm<F>) -> Result<(V<F>, V<F>), ClassifyError> {
    let mut forms = Bivector::new(psi.clone())?.darboux_forms();
    if forms.len() != 2 {
        return Err(internal("expected a decomposable 2-form"));
    }
    let v = forms.pop().expect("two");
    let u = forms.pop().expect("two");
    Ok((u, v))
}

/// A vector `e` with `u(e) = 1`.
fn dual<F: Field>(f: &F, u: &[F::Elem]) -> Result<V<F>, ClassifyError> {
    let i = u.iter().position(|x| !f.is_zero(x)).ok_or_else(|| internal("zero 1-form"))?;
    let mut e = vec![f.zero(); u.len()];
    e[i] = f.inv(&u[i])?;
    Ok(e)
}

/// Vectors `e_a`, `e_b` with `a(e_a) = b(e_b) = 1`, `a(e_b) = b(e_a) = 0`.
fn dual_pair<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Result<(V<F>, V<F>), ClassifyError> {
    let m = Matrix::from_rows(f, &[a.to_vec(), b.to_vec()])?;
    let ea = m.solve(&[f.one(), f.zero()])?.ok_or_else(|| internal("dependent 1-forms"))?;
    let eb = m.solve(&[f.zero(), f.one()])?.ok_or_else(|| internal("dependent 1-forms"))?;
    Ok((ea, eb))
}

fn iota<F: Field>(psi: &KForm<F>, e: &[F::Elem]) -> V<F> {
    psi.interior(e).to_vector()
}

fn wedge1<F: Field>(f: &F, u: &[F::Elem], v: &[F::Elem]) -> KForm<F> {
    KForm::from_vector(f, u).wedge(&KForm::from_vector(f, v)).expect("same space")
}

fn one_common<F: Field>(f: &F, n: usize, a: &[V<F>], b: &[V<F>]) -> Result<V<F>, ClassifyError> {
    let mut common = linalg::intersect(f, n, a, b);
    if common.len() != 1 {
        return Err(internal("expected the supports to meet in a line"));
    }
    Ok(common.pop().expect("one"))
}

/// `psi` written in the 1-forms `z` (a basis).
fn in_coords<F: Field>(psi: &KForm<F>, z: &[V<F>]) -> Result<KForm<F>, ClassifyError> {
    let p = BasisChange::new(Matrix::from_cols(psi.field(), psi.dim(), z)?)?;
    Ok(psi.change_basis(&p)?)
}

fn complete<F: Field>(f: &F, n: usize, z: &[V<F>]) -> Result<Vec<V<F>>, ClassifyError> {
    if linalg::span_dim(f, n, z) != z.len() {
        return Err(internal("constructed 1-forms are dependent"));
    }
    Ok(linalg::extend_to_basis(f, n, z))
}

fn identity_cols<F: Field>(f: &F, k: usize) -> Vec<V<F>> {
    (0..k).map(|i| linalg::unit_vec(f, k, i)).collect()
}

/// `P_adapt · diag(G, H)` with the columns of `G` and `H` taken from `red`.
pub(crate) fn assemble<F: Field>(f: &F, adapt: &BasisChange<F>, red: &Reduction<F>) -> Result<BasisChange<F>, ClassifyError> {
    let f0 = red.z.len();
    let n = f0 + red.h.len();
    let mut block = Matrix::zeros(f, n, n);
    for (j, col) in red.z.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            block.set(i, j, x.clone());
        }
    }
    for (j, col) in red.h.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            block.set(f0 + i, f0 + j, x.clone());
        }
    }
    Ok(adapt.then(&BasisChange::new(block)?)?)
}

pub(crate) fn darboux<F: Field>(phi: &KForm<F>) -> Reduction<F> {
    let (b, _) = Bivector(phi.clone()).darboux_basis();
    Reduction { z: b.matrix().columns(), h: vec![vec![phi.field().one()]] }
}

pub(crate) fn contained<F: Field>(phis: &[KForm<F>]) -> Result<Reduction<F>, ClassifyError> {
    let f = phis[0].field();
    let n = phis[0].dim();
    let u = one_common(f, n, &support(&phis[0]), &support(&phis[1]))?;
    let e = dual(f, &u)?;
    let z = complete(f, n, &[u, iota(&phis[0], &e), iota(&phis[1], &e)])?;
    Ok(Reduction { z, h: identity_cols(f, 2) })
}

/// The two roots of `c0 λ^2 + c1 λμ + c2 μ^2` given `r^2 = c1^2 - 4 c0 c2`.
pub(crate) fn quadratic_roots<F: Field>(f: &F, c: &[F::Elem; 3], r: &F::Elem) -> [[F::Elem; 2]; 2] {
    let two_c0 = f.mul(&f.from_i64(2), &c[0]);
    if f.is_zero(&c[0]) {
        [[f.one(), f.zero()], [f.neg(&c[2]), c[1].clone()]]
    } else {
        [[f.add(&f.neg(&c[1]), r), two_c0.clone()], [f.sub(&f.neg(&c[1]), r), two_c0]]
    }
}

pub(crate) fn bisecant<F: Field>(phis: &[KForm<F>], roots: &[[F::Elem; 2]; 2]) -> Result<Reduction<F>, ClassifyError> {
    let f = phis[0].field();
    let n = phis[0].dim();
    let (a, b) = decompose(&combo(phis, &roots[0]))?;
    let (c, d) = decompose(&combo(phis, &roots[1]))?;
    let z = complete(f, n, &[a, b, c, d])?;
    Ok(Reduction { z, h: vec![roots[0].to_vec(), roots[1].to_vec()] })
}

pub(crate) fn tangent_lagrangian<F: Field>(phis: &[KForm<F>], root: &[F::Elem; 2]) -> Result<Reduction<F>, ClassifyError> {
    let f = phis[0].field();
    let n = phis[0].dim();
    let other = other_member(f, root);
    let psi2 = combo(phis, &other);
    let (a, b) = decompose(&combo(phis, root))?;
    let (ea, eb) = dual_pair(f, &a, &b)?;
    let (c, d) = (iota(&psi2, &ea), iota(&psi2, &eb));
    let z = complete(f, n, &[a, b, c, d])?;
    // psi2 - a∧c - b∧d = t a∧b
    let t = in_coords(&psi2, &z)?.coeff_pair(0, 1);
    let h7 = linalg::axpy(f, &other, &f.neg(&t), root);
    Ok(Reduction { z, h: vec![root.to_vec(), h7] })
}

pub(crate) fn tangent_line<F: Field>(phis: &[KForm<F>], root: &[F::Elem; 2]) -> Result<Reduction<F>, ClassifyError> {
    let f = phis[0].field();
    let n = phis[0].dim();
    let other = other_member(f, root);
    let psi1 = combo(phis, root);
    let psi2 = combo(phis, &other);
    let u = one_common(f, n, &support(&psi1), &support(&psi2))?;
    let e = dual(f, &u)?;
    let v = iota(&psi1, &e);
    let w = iota(&psi2, &e);
    let rho = psi2.sub(&wedge1(f, &u, &w))?;
    let (y, x) = decompose(&rho)?;
    let z = complete(f, n, &[u, v, w, y, x])?;
    Ok(Reduction { z, h: vec![root.to_vec(), other] })
}

pub(crate) fn disjoint<F: Field>(phis: &[KForm<F>]) -> Result<Reduction<F>, ClassifyError> {
    let f = phis[0].field();
    let n = phis[0].dim();
    let omega = phis[0].wedge(&phis[1])?;
    let cols: Vec<V<F>> = (0..n).map(|i| omega.interior(&linalg::unit_vec(f, n, i)).coefficient_vector()).collect();
    let rows = cols[0].len();
    let mut ker = Matrix::from_cols(f, rows, &cols)?.kernel_basis();
    if ker.len() != 1 {
        return Err(internal("φ6∧φ7 is not a nonzero 4-form"));
    }
    let m = ker.pop().expect("one");
    let z2 = iota(&phis[0], &m);
    let z3 = iota(&phis[1], &m);
    // z1 ∧ z2 ∧ z3 = φ6 ∧ z3
    let z23 = wedge1(f, &z2, &z3);
    let lcols: Vec<V<F>> = (0..n)
        .map(|i| Ok(KForm::from_vector(f, &linalg::unit_vec(f, n, i)).wedge(&z23)?.coefficient_vector()))
        .collect::<Result<_, ClassifyError>>()?;
    let target = phis[0].wedge(&KForm::from_vector(f, &z3))?.coefficient_vector();
    let l = Matrix::from_cols(f, target.len(), &lcols)?;
    let z1 = l.solve(&target)?.ok_or_else(|| internal("no z1 with z1∧z2∧z3 = φ6∧z3"))?;
    let rho6 = phis[0].sub(&wedge1(f, &z1, &z2))?;
    let rho7 = phis[1].sub(&wedge1(f, &z1, &z3))?;
    let z4 = iota(&rho6, &dual(f, &z3)?);
    let z5 = iota(&rho7, &dual(f, &z2)?);
    let z = complete(f, n, &[z1, z2, z3, z4, z5])?;
    Ok(Reduction { z, h: identity_cols(f, 2) })
}

pub(crate) fn common_line<F: Field>(phis: &[KForm<F>], u: &[F::Elem]) -> Result<Reduction<F>, ClassifyError> {
    let f = phis[0].field();
    let e = dual(f, u)?;
    let mut z = vec![u.to_vec()];
    z.extend(phis.iter().map(|p| iota(p, &e)));
    let z = complete(f, 4, &z)?;
    Ok(Reduction { z, h: identity_cols(f, 3) })
}

pub(crate) fn common_plane<F: Field>(phis: &[KForm<F>]) -> Result<Reduction<F>, ClassifyError> {
    let f = phis[0].field();
    let all: Vec<V<F>> = phis.iter().flat_map(support).collect();
    let w = linalg::span_basis(f, 4, &all);
    if w.len() != 3 {
        return Err(internal("supports do not span a 3-space"));
    }
    let z = complete(f, 4, &w)?;
    let mut cols = Vec::new();
    for p in phis {
        let q = in_coords(p, &z)?;
        cols.push(vec![q.coeff_pair(0, 1), q.coeff_pair(0, 2), q.coeff_pair(1, 2)]);
    }
    let h = Matrix::from_cols(f, 3, &cols)?.invert()?.columns();
    Ok(Reduction { z, h })
}

pub(crate) fn double_line<F: Field>(phis: &[KForm<F>], norm: &ConicNormalization<F>) -> Result<Reduction<F>, ClassifyError> {
    let f = phis[0].field();
    let [n1, n2, n3]: [V<F>; 3] = norm.basis.columns().try_into().map_err(|_| internal("3 columns"))?;
    let psi2 = combo(phis, &n2);
    let psi3 = combo(phis, &n3);
    let u = one_common(f, 4, &support(&psi2), &support(&psi3))?;
    let e = dual(f, &u)?;
    let z0 = complete(f, 4, &[u, iota(&psi2, &e), iota(&psi3, &e)])?;
    let psi1 = in_coords(&combo(phis, &n1), &z0)?;
    let (c_uv, c_uw, c_ut, c_vw) = (psi1.coeff_pair(0, 1), psi1.coeff_pair(0, 2), psi1.coeff_pair(0, 3), psi1.coeff_pair(1, 2));
    let s = f.inv(&c_vw)?;
    let mut z = z0.clone();
    z[3] = linalg::scale_vec(f, &f.mul(&c_ut, &s), &z0[3]);
    let h7 = linalg::axpy(f, &linalg::axpy(f, &n1, &f.neg(&c_uv), &n2), &f.neg(&c_uw), &n3);
    Ok(Reduction { z, h: vec![n2, n3, linalg::scale_vec(f, &s, &h7)] })
}

/// `r^2` is the exact `a` of the normalization.
pub(crate) fn line_pair<F: Field>(phis: &[KForm<F>], basis: &Matrix<F>, r: &F::Elem) -> Result<Reduction<F>, ClassifyError> {
    let f = phis[0].field();
    let [n1, n2, n3]: [V<F>; 3] = basis.columns().try_into().map_err(|_| internal("3 columns"))?;
    let h5 = linalg::axpy(f, &n2, r, &n1);
    let h6 = linalg::axpy(f, &n2, &f.neg(r), &n1);
    let (psi5, psi6, psi7) = (combo(phis, &h5), combo(phis, &h6), combo(phis, &n3));
    let z1 = one_common(f, 4, &support(&psi5), &support(&psi7))?;
    let z3 = one_common(f, 4, &support(&psi6), &support(&psi7))?;
    let z2 = iota(&psi5, &dual(f, &z1)?);
    let z4 = iota(&psi6, &dual(f, &z3)?);
    let z = complete(f, 4, &[z1, z2, z3, z4])?;
    let c = in_coords(&psi7, &z)?.coeff_pair(0, 2);
    let h7 = linalg::scale_vec(f, &f.inv(&c)?, &n3);
    Ok(Reduction { z, h: vec![h5, h6, h7] })
}

/// `p1` is a zero of the net's conic.
pub(crate) fn smooth_conic<F: Field>(phis: &[KForm<F>], p1: &[F::Elem]) -> Result<Reduction<F>, ClassifyError> {
    let f = phis[0].field();
    let g = net_conic(phis)?;
    let gp1 = g.mul_vec(p1)?;
    let j = gp1.iter().position(|x| !f.is_zero(x)).ok_or_else(|| internal("singular point on a smooth conic"))?;
    let r = linalg::unit_vec(f, 3, j);
    // second point of the line through p1 and r
    let p2 = linalg::axpy(f, &linalg::scale_vec(f, &evaluate(&g, &r), p1), &f.neg(&f.mul(&f.from_i64(2), &gp1[j])), &r);
    let gp2 = g.mul_vec(&p2)?;
    let mut ker = Matrix::from_rows(f, &[gp1, gp2])?.kernel_basis();
    let t = ker.pop().ok_or_else(|| internal("tangent lines coincide"))?;
    let (z1, z2) = decompose(&combo(phis, p1))?;
    let (z3, z4) = decompose(&combo(phis, &p2))?;
    let psi7 = in_coords(&combo(phis, &t), &[z1.clone(), z2.clone(), z3.clone(), z4.clone()])?;
    let (c13, c14, c23, c24) = (psi7.coeff_pair(0, 2), psi7.coeff_pair(0, 3), psi7.coeff_pair(1, 2), psi7.coeff_pair(1, 3));
    let z3p = linalg::axpy(f, &linalg::scale_vec(f, &c13, &z3), &c14, &z4);
    let z4p = linalg::axpy(f, &linalg::scale_vec(f, &c23, &z3), &c24, &z4);
    let det = f.sub(&f.mul(&c13, &c24), &f.mul(&c14, &c23));
    let z = complete(f, 4, &[z1, z2, z3p, z4p])?;
    Ok(Reduction { z, h: vec![p1.to_vec(), linalg::scale_vec(f, &det, &p2), t] })
}

fn extension<F: Field>(f: &F, s: &F::Elem) -> Result<QuadExt<F::ExtBase>, ClassifyError> {
    let base = f.extension_base().ok_or_else(|| internal("no extension base"))?;
    Ok(QuadExt::new(base, s.clone())?)
}

fn lift_vec<B: Field>(k: &QuadExt<B>, v: &[B::Elem]) -> Vec<<QuadExt<B> as Field>::Elem> {
    v.iter().map(|x| k.embed(x)).collect()
}

fn lift_forms<F: Field>(k: &QuadExt<F::ExtBase>, phis: &[KForm<F>]) -> Vec<KForm<QuadExt<F::ExtBase>>> {
    phis.iter().map(|p| p.map(k, |x| k.embed(x))).collect()
}

fn re<B: Field>(v: &[<QuadExt<B> as Field>::Elem]) -> Vec<B::Elem> {
    v.iter().map(|x| x.re.clone()).collect()
}

fn im<B: Field>(v: &[<QuadExt<B> as Field>::Elem]) -> Vec<B::Elem> {
    v.iter().map(|x| x.im.clone()).collect()
}

/// Pencil with conjugate decomposable members, `disc = s t^2`.
pub(crate) fn conjugate_52<F: Field>(
    phis: &[KForm<F>],
    c0: &F::Elem,
    c1: &F::Elem,
    s: &F::Elem,
    t: &F::Elem,
) -> Result<Reduction<F>, ClassifyError> {
    let f = phis[0].field();
    let k = extension(f, s)?;
    let phis_k = lift_forms(&k, phis);
    // ρ = (-c1 + t sqrt s) φ6 + 2 c0 φ7
    let lam = k.make(f.neg(c1), t.clone());
    let mu = k.embed(&f.mul(&f.from_i64(2), c0));
    let (alpha, beta) = decompose(&combo(&phis_k, &[lam, mu]))?;
    let z = complete(f, 5, &[re::<F::ExtBase>(&alpha), im::<F::ExtBase>(&alpha), re::<F::ExtBase>(&beta), im::<F::ExtBase>(&beta)])?;
    let h6 = vec![f.neg(c1), f.mul(&f.from_i64(2), c0)];
    let h7 = vec![t.clone(), f.zero()];
    Ok(Reduction { z, h: vec![h6, h7] })
}

/// `u = M y` as a basis change from the `u`-model to the `y`-model.
fn substitution<G: Field>(m: Matrix<G>) -> Result<BasisChange<G>, ClassifyError> {
    Ok(BasisChange::new(m.invert()?.transpose())?)
}

type Ext<F> = QuadExt<<F as Field>::ExtBase>;

fn lifted_finish<F: Field>(
    k: &Ext<F>,
    alg: &MinimalAlgebra<F>,
    adapt: &BasisChange<F>,
    red: &Reduction<Ext<F>>,
    split: Shape,
) -> Result<BasisChange<Ext<F>>, ClassifyError> {
    let alg_k = alg.map(k, |x| k.embed(x));
    let adapt_k = BasisChange::new(adapt.matrix().map(k, |x| k.embed(x)))?;
    let p = assemble(k, &adapt_k, red)?;
    if alg_k.apply_basis_change(&p)? != plain_model(k, split) {
        return Err(internal("extension certificate does not reach the split model"));
    }
    Ok(p)
}

fn check_descent<B: Field>(
    k: &QuadExt<B>,
    split: Shape,
    shape: Shape,
    a: &B::Elem,
    b: &B::Elem,
    descent: &BasisChange<QuadExt<B>>,
) -> Result<(), ClassifyError> {
    let target = model(k, shape, &k.embed(a), &k.embed(b));
    if plain_model(k, split).apply_basis_change(descent)? != target {
        return Err(internal("descent substitution does not reproduce the model"));
    }
    Ok(())
}

pub(crate) fn extension_52<F: Field>(
    alg: &MinimalAlgebra<F>,
    adapt: &BasisChange<F>,
    phis: &[KForm<F>],
    c0: &F::Elem,
    c1: &F::Elem,
    s: &F::Elem,
    t: &F::Elem,
) -> Result<ExtensionCertificate<F::ExtBase>, ClassifyError> {
    let f = alg.field();
    let k = extension(f, s)?;
    let phis_k = lift_forms(&k, phis);
    let r = k.make(f.zero(), t.clone());
    let c = [k.embed(c0), k.embed(c1), k.zero()];
    let roots = quadratic_roots(&k, &c, &r);
    let red = bisecant(&phis_k, &roots)?;
    let to_split = lifted_finish(&k, alg, adapt, &red, Shape::Bisecant)?;
    let (o, z, q) = (k.one(), k.zero(), k.root());
    let nq = k.neg(&q);
    // u1 = y1 + √a y2, u2 = y3 + √a y4, u3 = y1 - √a y2, u4 = y3 - √a y4,
    // u5 = y5, u6 = y6 + √a y7, u7 = y6 - √a y7
    let rows = vec![
        vec![o.clone(), q.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), o.clone(), q.clone(), z.clone(), z.clone(), z.clone()],
        vec![o.clone(), nq.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), o.clone(), nq.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), z.clone(), o.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), o.clone(), q.clone()],
        vec![z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), o.clone(), nq.clone()],
    ];
    let descent = substitution(Matrix::from_rows(&k, &rows)?)?;
    check_descent(&k, Shape::Bisecant, Shape::BisecantConjugate, s, &f.one(), &descent)?;
    Ok(ExtensionCertificate { field: k, split_shape: Shape::Bisecant, to_split, descent })
}

/// Net whose conic has conjugate lines (`anisotropic = false`) or no point
/// (`anisotropic = true`); the construction splits `ρ = n2 + √a n1` over
/// `k(√a)` and takes real and imaginary parts.
pub(crate) fn conjugate_43<F: Field>(
    phis: &[KForm<F>],
    norm: &ConicNormalization<F>,
    anisotropic: bool,
) -> Result<Reduction<F>, ClassifyError> {
    let f = phis[0].field();
    let s = &norm.exact.a;
    let k = extension(f, s)?;
    let phis_k = lift_forms(&k, phis);
    let [n1, n2, n3]: [V<F>; 3] = norm.basis.columns().try_into().map_err(|_| internal("3 columns"))?;
    let rho: Vec<_> = n1.iter().zip(&n2).map(|(x, y)| k.make(y.clone(), x.clone())).collect();
    let psi7_k = combo(&phis_k, &lift_vec(&k, &n3));
    let (mut alpha, mut beta) = decompose(&combo(&phis_k, &rho))?;
    let conj = |v: &[_]| -> Vec<_> { v.iter().map(|x| k.conjugate(x).expect("extension")).collect() };
    let coords = |a: &Vec<_>, b: &Vec<_>| in_coords(&psi7_k, &[a.clone(), conj(a), b.clone(), conj(b)]);
    let mut tries = 0;
    loop {
        let c = coords(&alpha, &beta)?;
        if !k.is_zero(&c.coeff_pair(0, 1)) {
            break;
        }
        tries += 1;
        if tries > 4 {
            return Err(internal("cannot move ψ7 off the diagonal"));
        }
        if !k.is_zero(&c.coeff_pair(2, 3)) {
            let na = alpha.iter().map(|x| k.neg(x)).collect();
            alpha = std::mem::replace(&mut beta, na);
        } else {
            let shift = if tries == 1 { k.one() } else { k.root() };
            beta = linalg::axpy(&k, &beta, &shift, &alpha);
        }
    }
    let c = coords(&alpha, &beta)?;
    let nu = k.neg(&k.div(&k.conjugate(&c.coeff_pair(0, 3))?, &c.coeff_pair(0, 1))?);
    alpha = linalg::axpy(&k, &alpha, &nu, &beta);
    let z = vec![im::<F::ExtBase>(&alpha), re::<F::ExtBase>(&alpha), im::<F::ExtBase>(&beta), re::<F::ExtBase>(&beta)];
    let z = complete(f, 4, &z)?;
    let psi7 = in_coords(&combo(phis, &n3), &z)?;
    let c12 = psi7.coeff_pair(0, 1);
    if anisotropic {
        let z = vec![linalg::scale_vec(f, &c12, &z[0]), linalg::scale_vec(f, &c12, &z[1]), z[2].clone(), z[3].clone()];
        let h = [n1, n2, n3].iter().map(|v| linalg::scale_vec(f, &c12, v)).collect();
        Ok(Reduction { z, h })
    } else {
        let h7 = linalg::scale_vec(f, &f.inv(&c12)?, &n3);
        Ok(Reduction { z, h: vec![n1, n2, h7] })
    }
}

pub(crate) fn extension_43<F: Field>(
    alg: &MinimalAlgebra<F>,
    adapt: &BasisChange<F>,
    phis: &[KForm<F>],
    norm: &ConicNormalization<F>,
    anisotropic: bool,
) -> Result<ExtensionCertificate<F::ExtBase>, ClassifyError> {
    let f = alg.field();
    let (s, b) = (&norm.exact.a, &norm.exact.b);
    let k = extension(f, s)?;
    let phis_k = lift_forms(&k, phis);
    let basis_k = norm.basis.map(&k, |x| k.embed(x));
    let q = k.root();
    let (split, shape) = if anisotropic {
        (Shape::SmoothConic, Shape::AnisotropicConic)
    } else {
        (Shape::LinePair, Shape::ConjugateLinePair)
    };
    let red = if anisotropic {
        let p1 = basis_k.mul_vec(&[q.clone(), k.one(), k.zero()])?;
        smooth_conic(&phis_k, &p1)?
    } else {
        line_pair(&phis_k, &basis_k, &q)?
    };
    let to_split = lifted_finish(&k, alg, adapt, &red, split)?;
    let (o, z) = (k.one(), k.zero());
    let nq = k.neg(&q);
    let two_q = k.add(&q, &q);
    // u1 = √a y1 + y2, u2 = c(√a y3 + y4), u3 = -√a y1 + y2, u4 = -√a y3 + y4,
    // u5 = c(√a y5 + y6), u6 = -√a y5 + y6, u7 = 2√a y7, with c = -b for the
    // anisotropic row and 1 otherwise
    let c = if anisotropic { k.embed(&f.neg(b)) } else { o.clone() };
    let (cq, co) = (k.mul(&c, &q), c.clone());
    let rows = vec![
        vec![q.clone(), o.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), cq.clone(), co.clone(), z.clone(), z.clone(), z.clone()],
        vec![nq.clone(), o.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), nq.clone(), o.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), z.clone(), cq, co, z.clone()],
        vec![z.clone(), z.clone(), z.clone(), z.clone(), nq, o, z.clone()],
        vec![z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z, two_q],
    ];
    let descent = substitution(Matrix::from_rows(&k, &rows)?)?;
    let bb = if anisotropic { b.clone() } else { f.one() };
    check_descent(&k, split, shape, s, &bb, &descent)?;
    Ok(ExtensionCertificate { field: k, split_shape: split, to_split, descent })
}
