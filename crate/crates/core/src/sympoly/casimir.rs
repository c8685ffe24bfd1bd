use num_traits::Zero;
use rayon::prelude::*;
use serde_json::json;

use super::{adjoint_sym2_matrix, sym2_dim, sym2_index, sym2_pair, SymPoly2};
use crate::error::{Error, Result};
use crate::lie::{AlgebraContext, Epsilon, LieElement};
use crate::linalg::{rational_spectrum, sparse_rank, QMatrix};
use crate::scalar::{self, q, Q};
use crate::verdict::Verdict;

/// Which invariant tensor the Casimir is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CasimirNormalization {
    /// `Σ g_κν g_μλ ad(S_κλ) ad(S_μν)` over all index values.
    Metric,
    /// `Σ_i ad(e_i) ad(e^i)` with Killing-dual `e^i`.
    Killing,
}

/// The Casimir acting on the monomial coordinates of `S²(L)`.
#[derive(Debug, Clone)]
pub struct CasimirOperator {
    pub normalization: CasimirNormalization,
    pub matrix: QMatrix,
}

/// Projector request: the distinct Casimir eigenvalues and the target one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorSpec {
    pub eigenvalues: Vec<Q>,
    pub target: Q,
}

impl ProjectorSpec {
    pub fn new(eigenvalues: Vec<Q>, target: Q) -> Result<Self> {
        let mut sorted = eigenvalues.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != eigenvalues.len() {
            return Err(Error::InvalidProjector("repeated eigenvalue".into()));
        }
        if !eigenvalues.contains(&target) {
            return Err(Error::InvalidProjector(format!("target {} not among eigenvalues", scalar::show(&target))));
        }
        Ok(ProjectorSpec { eigenvalues, target })
    }
}

fn reject_degenerate(ctx: &AlgebraContext) -> Result<()> {
    if ctx.eps() == Epsilon::Orthogonal && ctx.n() < 2 {
        return Err(Error::Degenerate("so(2) is abelian; projection needs n >= 2 for the orthogonal algebra".into()));
    }
    Ok(())
}

/// Coefficients `r_ij` of the metric-contracted invariant tensor
/// `Σ g_κν g_μλ S_κλ ⊗ S_μν = Σ r_ij e_i ⊗ e_j`.
pub fn metric_casimir_tensor(ctx: &AlgebraContext) -> QMatrix {
    let d = ctx.dim();
    let s = ctx.size();
    let mut r = QMatrix::zeros(d, d);
    for k in 1..=s {
        for nu in 1..=s {
            let gkn = ctx.g(k, nu);
            if gkn == 0 {
                continue;
            }
            for m in 1..=s {
                for l in 1..=s {
                    let gml = ctx.g(m, l);
                    if gml == 0 {
                        continue;
                    }
                    if let (Some((i, si)), Some((j, sj))) = (ctx.canonical(k, l), ctx.canonical(m, nu)) {
                        r.add_at(i, j, &q(gkn * gml * si * sj));
                    }
                }
            }
        }
    }
    r
}

fn casimir_tensor(ctx: &AlgebraContext, norm: CasimirNormalization) -> Result<QMatrix> {
    match norm {
        CasimirNormalization::Metric => Ok(metric_casimir_tensor(ctx)),
        CasimirNormalization::Killing => {
            reject_degenerate(ctx)?;
            let d = ctx.dim();
            let mut r = QMatrix::zeros(d, d);
            for i in 0..d {
                for (j, c) in ctx.dual_of_basis(i).terms() {
                    r.add_at(i, j, c);
                }
            }
            Ok(r)
        }
    }
}

/// Casimir on the adjoint representation (`D × D`).
pub fn adjoint_casimir(ctx: &AlgebraContext, norm: CasimirNormalization) -> Result<QMatrix> {
    let r = casimir_tensor(ctx, norm)?;
    let d = ctx.dim();
    let ads: Vec<QMatrix> = (0..d).map(|i| ctx.ad_matrix(&ctx.basis_element(i))).collect();
    let mut acc = QMatrix::zeros(d, d);
    for i in 0..d {
        for (j, c) in r.row(i) {
            acc = acc.axpy(c, &ads[i].mul(&ads[*j]));
        }
    }
    Ok(acc)
}

fn check_cap(ctx: &AlgebraContext, cap: usize) -> Result<()> {
    let dim = sym2_dim(ctx.dim());
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    Ok(())
}

/// Casimir on `S²(L)` as the composition of extended adjoint actions,
/// `Σ r_ij ad(e_i) ad(e_j)` with derivation-extended `ad`.
pub fn casimir_on_sym2(ctx: &AlgebraContext, norm: CasimirNormalization, cap: usize) -> Result<CasimirOperator> {
    check_cap(ctx, cap)?;
    let r = casimir_tensor(ctx, norm)?;
    let d = ctx.dim();
    let mats: Vec<QMatrix> = (0..d).map(|i| adjoint_sym2_matrix(ctx, &ctx.basis_element(i))).collect();
    let terms: Vec<(usize, usize, Q)> =
        (0..d).flat_map(|i| r.row(i).iter().map(move |(j, c)| (i, *j, c.clone())).collect::<Vec<_>>()).collect();
    let dim = sym2_dim(d);
    let matrix = terms
        .par_iter()
        .map(|(i, j, c)| mats[*i].mul(&mats[*j]).scale(c))
        .reduce(|| QMatrix::zeros(dim, dim), |a, b| a.add(&b));
    Ok(CasimirOperator { normalization: norm, matrix })
}

/// Casimir on `S²(L)` from the product rule
/// `[A,[B,CD]] = [A,C][B,D] + [B,C][A,D] + C[A,[B,D]] + [A,[B,C]]D`,
/// using only the adjoint Casimir and single brackets.
pub fn casimir_via_product_rule(ctx: &AlgebraContext, norm: CasimirNormalization, cap: usize) -> Result<QMatrix> {
    check_cap(ctx, cap)?;
    let r = casimir_tensor(ctx, norm)?;
    let d = ctx.dim();
    let cad = adjoint_casimir(ctx, norm)?;
    let table = ctx.structure();
    let col_of = |v: usize| -> LieElement {
        let mut e = LieElement::zero(ctx);
        for k in 0..d {
            e.add_term(k, &cad.get(k, v));
        }
        e
    };
    let cad_cols: Vec<LieElement> = (0..d).map(col_of).collect();
    let pairs: Vec<(usize, usize, Q)> =
        (0..d).flat_map(|i| r.row(i).iter().map(move |(j, c)| (i, *j, c.clone())).collect::<Vec<_>>()).collect();
    let dim = sym2_dim(d);
    let columns: Vec<SymPoly2> = (0..dim)
        .into_par_iter()
        .map(|k| {
            let (a, b) = sym2_pair(d, k);
            let (ea, eb) = (ctx.basis_element(a), ctx.basis_element(b));
            let mut img = SymPoly2::product(&cad_cols[a], &eb);
            img.axpy(&scalar::one(), &SymPoly2::product(&ea, &cad_cols[b]));
            for (i, j, c) in &pairs {
                img.axpy(c, &SymPoly2::product(&table[*i][a], &table[*j][b]));
                img.axpy(c, &SymPoly2::product(&table[*j][a], &table[*i][b]));
            }
            img
        })
        .collect();
    let mut m = QMatrix::zeros(dim, dim);
    for (k, img) in columns.iter().enumerate() {
        for ((a, b), c) in img.terms() {
            m.set(sym2_index(d, a, b), k, c.clone());
        }
    }
    Ok(m)
}

/// Spectral projector onto the target eigenspace:
/// `P = Π_{j≠t} (C − c_j) / (c_t − c_j)`.
pub fn projector(op: &QMatrix, spec: &ProjectorSpec) -> Result<QMatrix> {
    let spec = ProjectorSpec::new(spec.eigenvalues.clone(), spec.target.clone())?;
    let n = op.rows();
    let mut p = QMatrix::identity(n);
    for c in spec.eigenvalues.iter().filter(|c| **c != spec.target) {
        let factor = op.shift(&-c.clone()).scale(&(&spec.target - c).recip());
        p = p.mul(&factor);
    }
    Ok(p)
}

/// All spectral projectors of a diagonalizable operator with rational spectrum.
pub fn spectral_projectors(op: &QMatrix) -> Result<Vec<(Q, QMatrix)>> {
    let spectrum = rational_spectrum(op)?;
    spectrum
        .iter()
        .map(|c| Ok((c.clone(), projector(op, &ProjectorSpec::new(spectrum.clone(), c.clone())?)?)))
        .collect()
}

/// Casimir eigenvalue of the traceless tensor `E_αβ = T_αβ − g_αβ I₂ / 2n`,
/// read off from its first nonzero component.
pub fn target_eigenvalue(ctx: &AlgebraContext, op: &CasimirOperator) -> Result<Q> {
    let d = ctx.dim();
    let e = super::identity_components(ctx)?;
    let comp = e
        .components()
        .find(|(_, _, p)| !p.is_zero())
        .map(|(_, _, p)| p.clone())
        .ok_or_else(|| Error::Degenerate("the traceless quadratic tensor vanishes identically".into()))?;
    let img = SymPoly2::from_vector(d, &op.matrix.mul_vec(&comp.to_vector(d)));
    img.ratio_to(&comp).ok_or_else(|| Error::Degenerate("traceless tensor is not a Casimir eigenvector".into()))
}

/// Dimension of the target component: `(N−1)(N+2)/2` for so(N), `(N+1)(N−2)/2`
/// for sp(N), `N = 2n`.
pub fn target_dimension(ctx: &AlgebraContext) -> usize {
    let big_n = 2 * ctx.n();
    match ctx.eps() {
        Epsilon::Orthogonal => (big_n - 1) * (big_n + 2) / 2,
        Epsilon::Symplectic => (big_n + 1) * (big_n - 2) / 2,
    }
}

/// Full projector battery for one algebra.
pub fn verify_projector_suite(ctx: &AlgebraContext, cap: usize) -> Result<Vec<Verdict>> {
    reject_degenerate(ctx)?;
    let d = ctx.dim();
    let dim = sym2_dim(d);
    let n = ctx.n() as i64;
    let e = ctx.eps().value();
    let mut out = Vec::new();

    let cas = casimir_on_sym2(ctx, CasimirNormalization::Metric, cap)?;
    let c = &cas.matrix;

    let mut v = Verdict::new("projector.casimir-routes", "derivation composition equals the product-rule expansion");
    let alt = casimir_via_product_rule(ctx, CasimirNormalization::Metric, cap)?;
    v.case(alt == *c, || json!({ "difference_nnz": alt.sub(c).nnz() }));
    out.push(v);

    let mut v = Verdict::new("projector.adjoint-eigenvalue", "metric Casimir acts on L as 8(n-ε)");
    let cad = adjoint_casimir(ctx, CasimirNormalization::Metric)?;
    v.case(cad == QMatrix::scalar(d, q(8 * (n - e))), || json!("adjoint Casimir is not 8(n-ε)·Id"));
    let kad = adjoint_casimir(ctx, CasimirNormalization::Killing)?;
    v.case(kad == QMatrix::identity(d), || json!("Killing-normalized adjoint Casimir is not Id"));
    let kcas = casimir_on_sym2(ctx, CasimirNormalization::Killing, cap)?;
    v.case(kcas.matrix.scale(&q(8 * (n - e))) == *c, || json!("Killing and metric Casimirs are not proportional on S²"));
    out.push(v.note(format!("metric/Killing normalization ratio = {}", 8 * (n - e))));

    let i2 = super::invariant_i2(ctx);
    let mut v = Verdict::new("projector.invariant", "ad(x) I₂ = 0 for all generators and C I₂ = 0");
    let adm: Vec<QMatrix> = (0..d).map(|k| adjoint_sym2_matrix(ctx, &ctx.basis_element(k))).collect();
    let i2v = i2.to_vector(d);
    for (k, m) in adm.iter().enumerate() {
        v.case(m.mul_vec(&i2v).iter().all(Zero::is_zero), || json!({ "generator": ctx.pair(k) }));
    }
    v.case(c.mul_vec(&i2v).iter().all(Zero::is_zero), || json!("C I₂ != 0"));
    out.push(v);

    let mut v = Verdict::new("projector.casimir-equivariance", "[C, ad(x)] = 0 on S²(L)");
    for (k, m) in adm.iter().enumerate() {
        v.case(c.commutator(m).is_zero(), || json!({ "generator": ctx.pair(k) }));
    }
    out.push(v);

    // The quadratic-component factors below are stated for ½C, whose adjoint
    // eigenvalue 4(n-ε) is the Killing constant; C itself acts as 8(n-ε).
    let half = scalar::frac(1, 2);
    let c_half = c.scale(&half);
    let spectrum = rational_spectrum(&c_half)?;
    let shown: Vec<String> = spectrum.iter().map(scalar::show).collect();
    let target_dim = target_dimension(ctx);
    let mut v = Verdict::new(
        "projector.spectrum",
        "distinct eigenvalues of ½C on S²(L) are {0, 8(n-2ε), 4(2n-ε), 4n}",
    );
    let mut expected: Vec<Q> = if target_dim == 0 {
        // sp(2): S²(L) is the trivial plus the spin-2 component only
        vec![q(0), q(8 * (n - 2 * e))]
    } else {
        vec![q(0), q(8 * (n - 2 * e)), q(4 * (2 * n - e)), q(4 * n)]
    };
    expected.sort();
    expected.dedup();
    v.case(spectrum == expected, || json!({ "found": shown }));
    out.push(v.note(format!("½C spectrum {shown:?}; C spectrum is twice this")));

    let projs: Vec<(Q, QMatrix)> = spectrum
        .iter()
        .map(|cv| Ok((cv.clone(), projector(&c_half, &ProjectorSpec::new(spectrum.clone(), cv.clone())?)?)))
        .collect::<Result<_>>()?;

    let mut v = Verdict::new("projector.algebra", "Σ P_i = Id, P_i P_j = δ_ij P_i, (C - c_i) P_i = 0");
    let sum = projs.iter().fold(QMatrix::zeros(dim, dim), |acc, (_, p)| acc.add(p));
    v.case(sum == QMatrix::identity(dim), || json!("resolution of identity fails"));
    for (i, (ci, pi)) in projs.iter().enumerate() {
        for (j, (_, pj)) in projs.iter().enumerate() {
            let prod = pi.mul(pj);
            let ok = if i == j { prod == *pi } else { prod.is_zero() };
            v.case(ok, || json!({ "i": i, "j": j }));
        }
        v.case(c_half.shift(&-ci.clone()).mul(pi).is_zero(), || json!({ "eigenvalue": scalar::show(ci) }));
    }
    out.push(v);

    let mut v = Verdict::new("projector.equivariance", "[P_i, ad(x)] = 0 for every projector and generator");
    for (ci, pi) in &projs {
        for (k, m) in adm.iter().enumerate() {
            v.case(pi.commutator(m).is_zero(), || json!({ "eigenvalue": scalar::show(ci), "generator": ctx.pair(k) }));
        }
    }
    out.push(v);

    let ranks: Vec<usize> = projs.iter().map(|(_, p)| p.rank()).collect();
    let rank_note = format!("ranks {:?}", shown.iter().zip(ranks.iter()).collect::<Vec<_>>());
    let zero_pos = spectrum.iter().position(Zero::is_zero);

    let mut triv = Verdict::new("projector.trivial-image", "P_0 (S_ab S_cd) is a multiple of I₂");
    let zero_rank = zero_pos.map(|z| ranks[z]).unwrap_or(0);
    if zero_rank > 1 {
        // so(4) = sl2 ⊕ sl2 has two independent quadratic invariants
        triv.push_note(format!("zero eigenspace has dimension {zero_rank}; image is not spanned by I₂ alone"));
    }

    let e_tensor = super::identity_components(ctx)?;
    if target_dim == 0 {
        let mut v = Verdict::new("projector.dimensions", "Σ rank P_i = dim S²(L); the traceless tensor E vanishes");
        v.case(ranks.iter().sum::<usize>() == dim, || json!({ "ranks": ranks }));
        v.case(e_tensor.components().all(|(_, _, p)| p.is_zero()), || json!("E does not vanish"));
        out.push(v.note(rank_note));
        push_trivial_cases(ctx, &mut triv, &projs, zero_pos, zero_rank, &i2)?;
        out.push(triv);
        return Ok(out);
    }

    let target = target_eigenvalue(ctx, &CasimirOperator { normalization: cas.normalization, matrix: c_half.clone() })?;
    let mut v = Verdict::new("projector.target-eigenvalue", "E_αβ is an eigenvector of ½C with eigenvalue 4n");
    v.case(target == q(4 * n), || json!({ "found": scalar::show(&target) }));
    out.push(v);

    let mut v = Verdict::new("projector.dimensions", "Σ rank P_i = dim S²(L) and rank P_target = target dimension");
    v.case(ranks.iter().sum::<usize>() == dim, || json!({ "ranks": ranks }));
    let tpos = spectrum.iter().position(|x| *x == target).ok_or_else(|| {
        Error::InvalidProjector(format!("eigenvalue {} of E not in spectrum", scalar::show(&target)))
    })?;
    v.case(ranks[tpos] == target_dim, || json!({ "rank": ranks[tpos], "expected": target_dim }));
    out.push(v.note(rank_note));

    let p_target = &projs[tpos].1;
    let printed = printed_projector_polynomial(ctx, &c_half);
    let mut v = Verdict::new(
        "projector.closed-form",
        "P(S_ab S_cd) = -[g_ac E_bd + g_bd E_ac - ε g_ad E_bc - ε g_bc E_ad] / (2n-2ε)",
    );
    let mut vp = Verdict::new(
        "projector.printed-polynomial",
        "½C(½C-8(n-2ε))(½C-4(2n-ε)) / ((-4n)(4n-16ε)(4n-4ε)) = -P_target",
    );
    vp.case(printed == p_target.scale(&-scalar::one()), || json!("printed polynomial is not -P_target"));
    let size = ctx.size();
    for a in 1..=size {
        for b in 1..=size {
            for cc in 1..=size {
                for dd in 1..=size {
                    let mono = SymPoly2::product(&ctx.generator(a, b)?, &ctx.generator(cc, dd)?);
                    let mv = mono.to_vector(d);
                    let projected = SymPoly2::from_vector(d, &p_target.mul_vec(&mv));
                    let closed = super::closed_form_projection(ctx, a, b, cc, dd)?;
                    v.case(projected == closed, || {
                        json!({ "abcd": [a, b, cc, dd], "residual": (projected.clone() - closed.clone()).to_json(ctx) })
                    });
                    let by_printed = SymPoly2::from_vector(d, &printed.mul_vec(&mv));
                    vp.case(by_printed == -closed, || json!({ "abcd": [a, b, cc, dd] }));
                }
            }
        }
    }
    out.push(v);
    out.push(vp.note("the printed denominators are Π(c_j - c_t), which flips the overall sign of the projector"));
    push_trivial_cases(ctx, &mut triv, &projs, zero_pos, zero_rank, &i2)?;
    out.push(triv);

    let mut v = Verdict::new("projector.e-span", "the components E_αβ span the image of the target projector");
    let vecs: Vec<std::collections::BTreeMap<usize, Q>> = e_tensor
        .components()
        .map(|(_, _, p)| p.to_vector(d).into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
        .collect();
    let span = sparse_rank(&vecs);
    for (a, b, p) in e_tensor.components() {
        let pv = p.to_vector(d);
        v.case(p_target.mul_vec(&pv) == pv, || json!({ "component": [a, b] }));
    }
    v.case(span == ranks[tpos], || json!({ "span": span, "rank": ranks[tpos] }));
    out.push(v.note(format!("span of E components = {span}")));

    Ok(out)
}

fn push_trivial_cases(
    ctx: &AlgebraContext,
    triv: &mut Verdict,
    projs: &[(Q, QMatrix)],
    zero_pos: Option<usize>,
    zero_rank: usize,
    i2: &SymPoly2,
) -> Result<()> {
    let zp = match zero_pos {
        Some(zp) if zero_rank == 1 => zp,
        _ => return Ok(()),
    };
    let d = ctx.dim();
    let size = ctx.size();
    for a in 1..=size {
        for b in 1..=size {
            for c in 1..=size {
                for dd in 1..=size {
                    let mono = SymPoly2::product(&ctx.generator(a, b)?, &ctx.generator(c, dd)?);
                    let img = SymPoly2::from_vector(d, &projs[zp].1.mul_vec(&mono.to_vector(d)));
                    triv.case(img.is_zero() || img.ratio_to(i2).is_some(), || json!({ "abcd": [a, b, c, dd] }));
                }
            }
        }
    }
    Ok(())
}

/// The target projector as the product with denominators `c_j − c_t`
/// over the factors `½C`, `½C − 8(n−2ε)`, `½C − 4(2n−ε)` (target `4n`).
/// Repeated factors are kept as written.
pub fn printed_projector_polynomial(ctx: &AlgebraContext, c_half: &QMatrix) -> QMatrix {
    let n = ctx.n() as i64;
    let e = ctx.eps().value();
    let t = q(4 * n);
    [q(0), q(8 * (n - 2 * e)), q(4 * (2 * n - e))]
        .iter()
        .fold(QMatrix::identity(c_half.rows()), |acc, cj| {
            acc.mul(&c_half.shift(&-cj.clone()).scale(&(cj - &t).recip()))
        })
}
