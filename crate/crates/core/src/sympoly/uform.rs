use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use num_traits::Zero;
use serde_json::{json, Value};

use super::{identity_components, IdentityTensor, SymPoly2};
use crate::error::Result;
use crate::lie::{AlgebraContext, Block, LieElement};
use crate::linalg::QMatrix;
use crate::scalar::{self, frac, q, Q};
use crate::verdict::Verdict;

/// Noncommutative polynomial in the basis generators: a sum of words
/// (sequences of basis indices, leftmost factor first).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UPoly {
    terms: BTreeMap<Vec<usize>, Q>,
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word: Vec<String> = w.iter().map(|i| format!("e{i}")).collect();
                format!("{}·{}", scalar::show(c), word.join(""))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl UPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), &c);
        p
    }

    pub fn word(w: Vec<usize>, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(w, &c);
        p
    }

    pub fn from_element(x: &LieElement) -> Self {
        let mut p = Self::zero();
        for (i, c) in x.terms() {
            p.add_term(vec![i], c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Q)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, w: Vec<usize>, c: &Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn scaled(&self, s: &Q) -> Self {
        let mut out = Self::zero();
        out.axpy(s, self);
        out
    }

    pub fn axpy(&mut self, s: &Q, other: &UPoly) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), &(c * s));
        }
    }

    /// `r` with `self = r · other` (`other` nonzero).
    pub fn ratio_to(&self, other: &UPoly) -> Option<Q> {
        let (w, c) = other.terms.iter().next()?;
        let r = self.terms.get(w).map(|x| x / c).unwrap_or_else(Q::zero);
        (other.scaled(&r) == *self).then_some(r)
    }

    /// Concatenation product.
    pub fn mul(&self, other: &UPoly) -> UPoly {
        let mut out = UPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, &(c1 * c2));
            }
        }
        out
    }

    pub fn evaluate<R: Realization>(&self, r: &R) -> R::Op {
        let mut acc = r.zero();
        for (w, c) in &self.terms {
            let mut t = r.identity();
            for &i in w {
                t = r.mul(&t, &r.generator(i));
            }
            acc = r.add(&acc, &r.scale(&t, c));
        }
        acc
    }

    /// `[[coefficient, [[α,β], ...]], ...]`.
    pub fn to_json(&self, ctx: &AlgebraContext) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| json!([scalar::to_json(c), w.iter().map(|&i| ctx.pair(i)).collect::<Vec<_>>()]))
                .collect(),
        )
    }
}

impl Add for UPoly {
    type Output = UPoly;
    fn add(mut self, rhs: UPoly) -> UPoly {
        self.axpy(&scalar::one(), &rhs);
        self
    }
}

impl Sub for UPoly {
    type Output = UPoly;
    fn sub(mut self, rhs: UPoly) -> UPoly {
        self.axpy(&-scalar::one(), &rhs);
        self
    }
}

/// Order symmetrization `u v ↦ (u v + v u) / 2` of a quadratic polynomial.
pub fn symmetrize(p: &SymPoly2) -> UPoly {
    let mut out = UPoly::zero();
    let half = frac(1, 2);
    for ((i, j), c) in p.terms() {
        if i == j {
            out.add_term(vec![i, i], c);
        } else {
            let h = c * &half;
            out.add_term(vec![i, j], &h);
            out.add_term(vec![j, i], &h);
        }
    }
    out
}

/// Symmetrized components of `E`, indexed `[α-1][β-1]`.
pub fn symmetrize_to_u(e: &IdentityTensor) -> Vec<Vec<UPoly>> {
    let s = e.size();
    (1..=s).map(|a| (1..=s).map(|b| symmetrize(e.get(a, b))).collect()).collect()
}

/// An associative algebra receiving the generators.
pub trait Realization {
    type Op: Clone;
    /// Image of basis element `idx`.
    fn generator(&self, idx: usize) -> Self::Op;
    fn zero(&self) -> Self::Op;
    fn identity(&self) -> Self::Op;
    fn add(&self, a: &Self::Op, b: &Self::Op) -> Self::Op;
    fn scale(&self, a: &Self::Op, s: &Q) -> Self::Op;
    fn mul(&self, a: &Self::Op, b: &Self::Op) -> Self::Op;
}

/// Words themselves: the free associative algebra on the basis, with no
/// relations imposed.
#[derive(Debug, Clone, Copy, Default)]
pub struct FreeRealization;

impl Realization for FreeRealization {
    type Op = UPoly;
    fn generator(&self, idx: usize) -> UPoly {
        UPoly::word(vec![idx], scalar::one())
    }
    fn zero(&self) -> UPoly {
        UPoly::zero()
    }
    fn identity(&self) -> UPoly {
        UPoly::constant(scalar::one())
    }
    fn add(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a.clone() + b.clone()
    }
    fn scale(&self, a: &UPoly, s: &Q) -> UPoly {
        a.scaled(s)
    }
    fn mul(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a.mul(b)
    }
}

/// The `2n`-dimensional defining representation.
pub struct DefiningRealization {
    images: Vec<QMatrix>,
    size: usize,
}

impl DefiningRealization {
    pub fn new(ctx: &AlgebraContext) -> Self {
        let images = (0..ctx.dim()).map(|i| ctx.element_matrix(&ctx.basis_element(i))).collect();
        DefiningRealization { images, size: ctx.size() }
    }
}

impl Realization for DefiningRealization {
    type Op = QMatrix;
    fn generator(&self, idx: usize) -> QMatrix {
        self.images[idx].clone()
    }
    fn zero(&self) -> QMatrix {
        QMatrix::zeros(self.size, self.size)
    }
    fn identity(&self) -> QMatrix {
        QMatrix::identity(self.size)
    }
    fn add(&self, a: &QMatrix, b: &QMatrix) -> QMatrix {
        a.add(b)
    }
    fn scale(&self, a: &QMatrix, s: &Q) -> QMatrix {
        a.scale(s)
    }
    fn mul(&self, a: &QMatrix, b: &QMatrix) -> QMatrix {
        a.mul(b)
    }
}

/// One entry of an ordered identity `lhs = rhs` in the enveloping algebra,
/// together with the commutative form it symmetrizes.
#[derive(Debug, Clone)]
pub struct OrderedIdentity {
    pub relation: &'static str,
    pub i: usize,
    pub j: usize,
    pub lhs: UPoly,
    pub rhs: UPoly,
    /// `lhs − rhs` is expected to equal `2 · sym(form)`.
    pub form: SymPoly2,
}

type UMatrix = Vec<Vec<UPoly>>;

fn u_block(ctx: &AlgebraContext, family: Block) -> UMatrix {
    let n = ctx.n();
    (1..=n).map(|i| (1..=n).map(|j| UPoly::from_element(&ctx.block(family, i, j))).collect()).collect()
}

fn u_transpose(m: &UMatrix) -> UMatrix {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i].clone()).collect()).collect()
}

fn u_matmul(x: &UMatrix, y: &UMatrix) -> UMatrix {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(UPoly::zero(), |acc, k| acc + x[i][k].mul(&y[k][j])))
                .collect()
        })
        .collect()
}

fn u_sub(x: UMatrix, y: UMatrix) -> UMatrix {
    x.into_iter().zip(y).map(|(rx, ry)| rx.into_iter().zip(ry).map(|(a, b)| a - b).collect()).collect()
}

/// The three ordered families
/// `X_ij + ε X_ji = 0` for `X = AB − BAᵗ` and `X = CA − AᵗC`, and
/// `(A² − BC)_ij + ((Aᵗ)² − CB)_ji = 2 δ_ij I₂ / 2n`,
/// with all block products taken in the written order.
pub fn ordered_identities(ctx: &AlgebraContext) -> Result<Vec<OrderedIdentity>> {
    let n = ctx.n();
    let eps = ctx.epsq();
    let a = u_block(ctx, Block::A);
    let b = u_block(ctx, Block::B);
    let c = u_block(ctx, Block::C);
    let at = u_transpose(&a);
    let x40 = u_sub(u_matmul(&a, &b), u_matmul(&b, &at));
    let x41 = u_sub(u_matmul(&c, &a), u_matmul(&at, &c));
    let x42a = u_sub(u_matmul(&a, &a), u_matmul(&b, &c));
    let x42b = u_sub(u_matmul(&at, &at), u_matmul(&c, &b));
    let mut i2u = UPoly::zero();
    for k in 0..n {
        i2u = i2u + x42a[k][k].clone() + x42b[k][k].clone();
    }
    let forms = super::block_forms(ctx)?;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            out.push(OrderedIdentity {
                relation: "(AB - BAᵗ)_ij + ε (AB - BAᵗ)_ji = 0",
                i: i + 1,
                j: j + 1,
                lhs: x40[i][j].clone() + x40[j][i].scaled(&eps),
                rhs: UPoly::zero(),
                form: forms[0].entries[i][j].clone(),
            });
            out.push(OrderedIdentity {
                relation: "(CA - AᵗC)_ij + ε (CA - AᵗC)_ji = 0",
                i: i + 1,
                j: j + 1,
                lhs: x41[i][j].clone() + x41[j][i].scaled(&eps),
                rhs: UPoly::zero(),
                form: forms[1].entries[i][j].clone(),
            });
            let rhs = if i == j { i2u.scaled(&frac(1, n as i64)) } else { UPoly::zero() };
            out.push(OrderedIdentity {
                relation: "(A² - BC)_ij + ((Aᵗ)² - CB)_ji = 2 δ_ij I₂ / 2n",
                i: i + 1,
                j: j + 1,
                lhs: x42a[i][j].clone() + x42b[j][i].clone(),
                rhs,
                form: forms[2].entries[i][j].clone(),
            });
        }
    }
    Ok(out)
}

/// Ordered identities against the symmetrized commutative forms, the
/// ordered `I₂` against `sym(I₂)`, and the defining representation as a
/// negative control.
pub fn verify_ordered(ctx: &AlgebraContext) -> Result<Vec<Verdict>> {
    let mut out = Vec::new();
    let ids = ordered_identities(ctx)?;
    let mut v = Verdict::new("uform.symmetrization", "ordered identity lhs - rhs = 2 sym(commutative form)");
    for id in &ids {
        let diff = id.lhs.clone() - id.rhs.clone();
        let want = symmetrize(&id.form).scaled(&q(2));
        v.case(diff == want, || {
            json!({ "relation": id.relation, "ij": [id.i, id.j], "residual": (diff.clone() - want.clone()).to_json(ctx) })
        });
    }
    out.push(v);

    let mut v = Verdict::new("uform.i2-ordered", "ordered tr(A² - BC + (Aᵗ)² - CB) = sym(I₂)");
    let n = ctx.n();
    if let Some(id) = ids.iter().find(|id| id.relation.starts_with("(A²") && id.i == 1 && id.j == 1) {
        let i2u = id.rhs.scaled(&q(n as i64));
        let want = symmetrize(&super::invariant_i2(ctx));
        v.case(i2u == want, || json!({ "residual": (i2u.clone() - want.clone()).to_json(ctx) }));
    }
    out.push(v);

    let e = identity_components(ctx)?;
    let es = symmetrize_to_u(&e);
    let rep = DefiningRealization::new(ctx);
    let nonzero = es.iter().flatten().filter(|p| !p.evaluate(&rep).is_zero()).count();
    let mut v = Verdict::new("uform.defining-control", "sym(E_αβ) does not vanish on the defining representation");
    let expect_vanishing = ctx.n() == 1;
    v.case((nonzero == 0) == expect_vanishing, || json!({ "nonzero_components": nonzero }));
    out.push(v.note(format!("{nonzero} of {} components nonzero in the defining representation", es.len() * es.len())));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Epsilon;
    use crate::verdict::all_passed;

    #[test]
    fn symmetrize_square_and_mixed() {
        let p = SymPoly2::monomial(2, 2, q(3)) + SymPoly2::monomial(1, 4, q(2));
        let u = symmetrize(&p);
        let want = UPoly::word(vec![2, 2], q(3)) + UPoly::word(vec![1, 4], q(1)) + UPoly::word(vec![4, 1], q(1));
        assert_eq!(u, want);
    }

    #[test]
    fn concatenation_is_associative_not_commutative() {
        let x = UPoly::word(vec![0], q(1)) + UPoly::word(vec![1], q(2));
        let y = UPoly::word(vec![2], q(-1));
        assert_ne!(x.mul(&y), y.mul(&x));
        assert_eq!(x.mul(&y).mul(&x), x.mul(&y.mul(&x)));
    }

    #[test]
    fn defining_realization_is_homomorphic_on_brackets() {
        let ctx = AlgebraContext::new(2, Epsilon::Symplectic).unwrap();
        let rep = DefiningRealization::new(&ctx);
        for i in 0..ctx.dim() {
            for j in 0..ctx.dim() {
                let comm = UPoly::word(vec![i, j], q(1)) - UPoly::word(vec![j, i], q(1));
                let br = UPoly::from_element(&ctx.structure()[i][j]);
                assert_eq!(comm.evaluate(&rep), br.evaluate(&rep));
            }
        }
    }

    #[test]
    fn ordered_checks_pass() {
        for eps in Epsilon::BOTH {
            for n in 1..=3 {
                let ctx = AlgebraContext::new(n, eps).unwrap();
                let vs = verify_ordered(&ctx).unwrap();
                assert!(all_passed(&vs), "{eps} n={n}: {vs:#?}");
            }
        }
    }
}
