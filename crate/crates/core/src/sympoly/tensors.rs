use serde_json::json;

use super::SymPoly2;
use crate::error::{Error, Result};
use crate::lie::{AlgebraContext, Block, LieElement};
use crate::scalar::{self, frac, q, Q};
use crate::verdict::Verdict;

/// `T_αβ = S_αλ g^{λμ} S_μβ` in `S²(L)`; indices are 1-based.
pub fn tensor_t(ctx: &AlgebraContext, a: usize, b: usize) -> Result<SymPoly2> {
    let s = ctx.size();
    ctx.generator(a, b)?;
    let mut out = SymPoly2::zero();
    for l in 1..=s {
        for m in 1..=s {
            let gi = ctx.g_inv(l, m);
            if gi != 0 {
                out.axpy(&q(gi), &SymPoly2::product(&ctx.generator(a, l)?, &ctx.generator(m, b)?));
            }
        }
    }
    Ok(out)
}

/// Quadratic invariant `I₂ = g_αβ g_γδ S_αδ S_γβ`.
pub fn invariant_i2(ctx: &AlgebraContext) -> SymPoly2 {
    let s = ctx.size();
    let mut out = SymPoly2::zero();
    for a in 1..=s {
        for b in 1..=s {
            let gab = ctx.g(a, b);
            if gab == 0 {
                continue;
            }
            for c in 1..=s {
                for d in 1..=s {
                    let gcd = ctx.g(c, d);
                    if gcd != 0 {
                        out.axpy(&q(gab * gcd), &SymPoly2::product(&ctx.gen(a, d), &ctx.gen(c, b)));
                    }
                }
            }
        }
    }
    out
}

type BlockMatrix = Vec<Vec<LieElement>>;

fn block_matrix(ctx: &AlgebraContext, family: Block) -> BlockMatrix {
    let n = ctx.n();
    (1..=n).map(|i| (1..=n).map(|j| ctx.block(family, i, j)).collect()).collect()
}

fn transpose(m: &BlockMatrix) -> BlockMatrix {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i].clone()).collect()).collect()
}

/// Entrywise commutative product `(X Y)_ij = Σ_k X_ik Y_kj` in `S²(L)`.
fn sym_matmul(x: &BlockMatrix, y: &BlockMatrix) -> Vec<Vec<SymPoly2>> {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut p = SymPoly2::zero();
                    for k in 0..n {
                        p.axpy(&scalar::one(), &SymPoly2::product(&x[i][k], &y[k][j]));
                    }
                    p
                })
                .collect()
        })
        .collect()
}

fn combine(x: Vec<Vec<SymPoly2>>, s: i64, y: Vec<Vec<SymPoly2>>) -> Vec<Vec<SymPoly2>> {
    x.into_iter()
        .zip(y)
        .map(|(rx, ry)| {
            rx.into_iter()
                .zip(ry)
                .map(|(mut a, b)| {
                    a.axpy(&q(s), &b);
                    a
                })
                .collect()
        })
        .collect()
}

/// `I₂` written through the blocks: `tr(A² − BC + (Aᵗ)² − CB)`.
pub fn invariant_i2_blocks(ctx: &AlgebraContext) -> SymPoly2 {
    let a = block_matrix(ctx, Block::A);
    let b = block_matrix(ctx, Block::B);
    let c = block_matrix(ctx, Block::C);
    let at = transpose(&a);
    let m1 = combine(sym_matmul(&a, &a), -1, sym_matmul(&b, &c));
    let m2 = combine(sym_matmul(&at, &at), -1, sym_matmul(&c, &b));
    let mut out = SymPoly2::zero();
    for i in 0..ctx.n() {
        out.axpy(&scalar::one(), &m1[i][i]);
        out.axpy(&scalar::one(), &m2[i][i]);
    }
    out
}

/// The traceless tensor `E_αβ = T_αβ − g_αβ I₂ / 2n`, stored for all
/// `1 ≤ α, β ≤ 2n`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityTensor {
    n: usize,
    components: Vec<Vec<SymPoly2>>,
}

impl IdentityTensor {
    pub fn get(&self, a: usize, b: usize) -> &SymPoly2 {
        &self.components[a - 1][b - 1]
    }

    pub fn size(&self) -> usize {
        2 * self.n
    }

    /// `(α, β, E_αβ)` in row-major order.
    pub fn components(&self) -> impl Iterator<Item = (usize, usize, &SymPoly2)> {
        self.components.iter().enumerate().flat_map(|(a, row)| row.iter().enumerate().map(move |(b, p)| (a + 1, b + 1, p)))
    }
}

pub fn identity_components(ctx: &AlgebraContext) -> Result<IdentityTensor> {
    let s = ctx.size();
    let i2 = invariant_i2(ctx);
    let inv = frac(1, s as i64);
    let mut components = Vec::with_capacity(s);
    for a in 1..=s {
        let mut row = Vec::with_capacity(s);
        for b in 1..=s {
            let mut t = tensor_t(ctx, a, b)?;
            t.axpy(&(-q(ctx.g(a, b)) * &inv), &i2);
            row.push(t);
        }
        components.push(row);
    }
    Ok(IdentityTensor { n: ctx.n(), components })
}

/// Closed-form image of `S_ab S_cd` under the target projector:
/// `−[g_ac E_bd + g_bd E_ac − ε g_ad E_bc − ε g_bc E_ad] / (2n − 2ε)`.
pub fn closed_form_projection(ctx: &AlgebraContext, a: usize, b: usize, c: usize, d: usize) -> Result<SymPoly2> {
    let n = ctx.n() as i64;
    let e = ctx.eps().value();
    if n == e {
        return Err(Error::Degenerate("2n - 2ε vanishes for so(2)".into()));
    }
    for x in [a, b, c, d] {
        ctx.generator(x, 1)?;
    }
    let comp = |x: usize, y: usize| -> Result<SymPoly2> {
        let mut t = tensor_t(ctx, x, y)?;
        t.axpy(&(-q(ctx.g(x, y)) * frac(1, 2 * n)), &invariant_i2(ctx));
        Ok(t)
    };
    let mut out = SymPoly2::zero();
    let terms = [(ctx.g(a, c), b, d), (ctx.g(b, d), a, c), (-e * ctx.g(a, d), b, c), (-e * ctx.g(b, c), a, d)];
    for (coef, x, y) in terms {
        if coef != 0 {
            out.axpy(&q(coef), &comp(x, y)?);
        }
    }
    Ok(out.scaled(&frac(-1, 2 * n - 2 * e)))
}

/// A block-matrix quadratic expression and where it sits inside `E`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockForm {
    /// Expression as written, e.g. `AB - BAᵗ`.
    pub name: &'static str,
    /// `(X)_ij` for `1 ≤ i, j ≤ n` (0-based storage).
    pub entries: Vec<Vec<SymPoly2>>,
    /// `(row_shift, col_shift, factor)` with
    /// `X_ij = factor · E_{i+row_shift, j+col_shift}`; `None` when the form
    /// vanishes identically (so(2)).
    pub placement: Option<(usize, usize, Q)>,
}

impl BlockForm {
    pub fn vanishes(&self) -> bool {
        self.entries.iter().flatten().all(SymPoly2::is_zero)
    }
}

fn locate(e: &IdentityTensor, n: usize, entries: &[Vec<SymPoly2>]) -> Option<(usize, usize, Q)> {
    let (pi, pj) = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| !entries[i][j].is_zero())?;
    for rs in [0, n] {
        for cs in [0, n] {
            let probe = e.get(pi + 1 + rs, pj + 1 + cs);
            let factor = match entries[pi][pj].ratio_to(probe) {
                Some(f) => f,
                None => continue,
            };
            let ok = (0..n).all(|i| (0..n).all(|j| e.get(i + 1 + rs, j + 1 + cs).scaled(&factor) == entries[i][j]));
            if ok {
                return Some((rs, cs, factor));
            }
        }
    }
    None
}

/// The four block quadratic forms `AB − BAᵗ`, `CA − AᵗC`,
/// `A² − BC − δ I₂/2n` and `(Aᵗ)² − CB − δ I₂/2n`, each located inside `E`
/// by exhaustive search over the four `n × n` blocks.
pub fn block_forms(ctx: &AlgebraContext) -> Result<Vec<BlockForm>> {
    let n = ctx.n();
    let a = block_matrix(ctx, Block::A);
    let b = block_matrix(ctx, Block::B);
    let c = block_matrix(ctx, Block::C);
    let at = transpose(&a);
    let i2 = invariant_i2(ctx);
    let shift = |m: Vec<Vec<SymPoly2>>| -> Vec<Vec<SymPoly2>> {
        m.into_iter()
            .enumerate()
            .map(|(i, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(j, mut p)| {
                        if i == j {
                            p.axpy(&-frac(1, 2 * n as i64), &i2);
                        }
                        p
                    })
                    .collect()
            })
            .collect()
    };
    let e = identity_components(ctx)?;
    let raw = vec![
        ("AB - BAᵗ", combine(sym_matmul(&a, &b), -1, sym_matmul(&b, &at))),
        ("CA - AᵗC", combine(sym_matmul(&c, &a), -1, sym_matmul(&at, &c))),
        ("A² - BC - δI₂/2n", shift(combine(sym_matmul(&a, &a), -1, sym_matmul(&b, &c)))),
        ("(Aᵗ)² - CB - δI₂/2n", shift(combine(sym_matmul(&at, &at), -1, sym_matmul(&c, &b)))),
    ];
    Ok(raw
        .into_iter()
        .map(|(name, entries)| {
            let placement = locate(&e, n, &entries);
            BlockForm { name, entries, placement }
        })
        .collect())
}

fn block_label(var: char, shift: usize) -> String {
    if shift == 0 {
        var.to_string()
    } else {
        format!("{var}+n")
    }
}

/// Checks on `T`, `I₂` and `E`: block form of `I₂`, trace and symmetry of
/// `E`, and the block-form placements.
pub fn verify_tensors(ctx: &AlgebraContext) -> Result<Vec<Verdict>> {
    let s = ctx.size();
    let e_val = ctx.eps().value();
    let mut out = Vec::new();

    let i2 = invariant_i2(ctx);
    let mut v = Verdict::new("tensor.i2-blocks", "I₂ = tr(A² - BC + (Aᵗ)² - CB)");
    let ib = invariant_i2_blocks(ctx);
    v.case(ib == i2, || json!({ "difference": (ib.clone() - i2.clone()).to_json(ctx) }));
    let mut trace_t = SymPoly2::zero();
    for a in 1..=s {
        for b in 1..=s {
            let gi = ctx.g_inv(b, a);
            if gi != 0 {
                trace_t.axpy(&q(gi), &tensor_t(ctx, a, b)?);
            }
        }
    }
    v.case(trace_t == i2, || json!("g^βα T_αβ != I₂"));
    out.push(v);

    let e = identity_components(ctx)?;
    let mut v = Verdict::new("tensor.e-symmetry", "E_αβ = ε E_βα and g^βα E_αβ = 0");
    let mut tr = SymPoly2::zero();
    for (a, b, p) in e.components() {
        v.case(*p == e.get(b, a).scaled(&q(e_val)), || json!({ "ab": [a, b] }));
        let gi = ctx.g_inv(b, a);
        if gi != 0 {
            tr.axpy(&q(gi), p);
        }
    }
    v.case(tr.is_zero(), || json!({ "trace": tr.to_json(ctx) }));
    out.push(v);

    let mut v = Verdict::new("tensor.block-forms", "each block quadratic form equals a scalar multiple of an n×n block of E");
    for f in block_forms(ctx)? {
        match &f.placement {
            Some((rs, cs, factor)) => {
                v.cases += 1;
                v.push_note(format!(
                    "({})_ij = {} · E_({},{})",
                    f.name,
                    scalar::show(factor),
                    block_label('i', *rs),
                    block_label('j', *cs)
                ));
            }
            None if f.vanishes() => {
                v.cases += 1;
                v.push_note(format!("({}) vanishes identically", f.name));
            }
            None => v.case(false, || json!({ "form": f.name })),
        }
    }
    out.push(v);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Epsilon;
    use crate::verdict::all_passed;

    #[test]
    fn tensor_checks_pass() {
        for eps in Epsilon::BOTH {
            for n in 1..=3 {
                let ctx = AlgebraContext::new(n, eps).unwrap();
                let vs = verify_tensors(&ctx).unwrap();
                assert!(all_passed(&vs), "{vs:#?}");
            }
        }
    }

    #[test]
    fn block_form_placements() {
        // expected from expanding T_αβ blockwise
        for eps in Epsilon::BOTH {
            let e = eps.value();
            let ctx = AlgebraContext::new(2, eps).unwrap();
            let forms = block_forms(&ctx).unwrap();
            let got: Vec<_> = forms.iter().map(|f| f.placement.clone().unwrap()).collect();
            assert_eq!(
                got,
                vec![(2, 2, q(1)), (0, 0, q(-e)), (2, 0, q(1)), (0, 2, q(e))],
                "eps = {e}"
            );
        }
    }

    #[test]
    fn i2_nonzero_and_index_errors() {
        let ctx = AlgebraContext::new(2, Epsilon::Symplectic).unwrap();
        assert!(!invariant_i2(&ctx).is_zero());
        assert!(tensor_t(&ctx, 0, 1).is_err());
        assert!(tensor_t(&ctx, 1, 5).is_err());
        let so2 = AlgebraContext::new(1, Epsilon::Orthogonal).unwrap();
        assert!(matches!(closed_form_projection(&so2, 1, 2, 1, 2), Err(Error::Degenerate(_))));
    }
}
