//! Degree-two symmetric algebra `S²(L)`: quadratic polynomials in the
//! generators, the extended adjoint action, the Casimir operator and its
//! spectral projectors, the contracted tensor `T_αβ`, the quadratic invariant
//! `I₂`, and the ordered (enveloping-algebra) form of the identities.

mod casimir;
mod tensors;
mod uform;

pub use casimir::{
    adjoint_casimir, casimir_on_sym2, casimir_via_product_rule, metric_casimir_tensor, printed_projector_polynomial, projector, spectral_projectors,
    target_dimension, target_eigenvalue, verify_projector_suite, CasimirNormalization, CasimirOperator, ProjectorSpec,
};
pub use tensors::{
    block_forms, closed_form_projection, identity_components, invariant_i2, invariant_i2_blocks, tensor_t, verify_tensors,
    BlockForm, IdentityTensor,
};
pub use uform::{
    ordered_identities, symmetrize, symmetrize_to_u, verify_ordered, DefiningRealization, FreeRealization, OrderedIdentity, Realization, UPoly,
};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::Result;
use crate::lie::{AlgebraContext, LieElement};
use crate::scalar::{self, Q};

/// Index of the unordered pair `{i, j}` (`i ≤ j`) in the triangular
/// enumeration of `S²(L)` monomials over a `d`-dimensional algebra.
pub fn sym2_index(d: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // rows 0..i hold d, d-1, ..., d-i+1 entries
    i * d - i * i.saturating_sub(1) / 2 + (j - i)
}

pub fn sym2_dim(d: usize) -> usize {
    d * (d + 1) / 2
}

pub fn sym2_pair(d: usize, k: usize) -> (usize, usize) {
    let mut i = 0;
    let mut start = 0;
    while start + (d - i) <= k {
        start += d - i;
        i += 1;
    }
    (i, i + (k - start))
}

/// Homogeneous quadratic polynomial in the commuting generators, keyed by
/// unordered pairs of basis indices `(i, j)` with `i ≤ j`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SymPoly2 {
    coeffs: BTreeMap<(usize, usize), Q>,
}

impl fmt::Debug for SymPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.coeffs.iter().map(|((i, j), c)| format!("{}·e{}e{}", scalar::show(c), i, j)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl SymPoly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(i: usize, j: usize, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, &c);
        p
    }

    /// Commutative product of two degree-one elements.
    pub fn product(x: &LieElement, y: &LieElement) -> Self {
        let mut p = Self::zero();
        for (i, a) in x.terms() {
            for (j, b) in y.terms() {
                p.add_term(i, j, &(a * b));
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize, j: usize) -> Q {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.coeffs.get(&key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &Q)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn add_term(&mut self, i: usize, j: usize, c: &Q) {
        if c.is_zero() {
            return;
        }
        let key = if i <= j { (i, j) } else { (j, i) };
        let e = self.coeffs.entry(key).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn scaled(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        let mut p = self.clone();
        for v in p.coeffs.values_mut() {
            *v *= s;
        }
        p
    }

    pub fn axpy(&mut self, s: &Q, other: &SymPoly2) {
        for ((i, j), c) in &other.coeffs {
            self.add_term(*i, *j, &(c * s));
        }
    }

    pub fn to_vector(&self, d: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); sym2_dim(d)];
        for ((i, j), c) in &self.coeffs {
            v[sym2_index(d, *i, *j)] = c.clone();
        }
        v
    }

    pub fn from_vector(d: usize, v: &[Q]) -> Self {
        let mut p = Self::zero();
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let (i, j) = sym2_pair(d, k);
                p.add_term(i, j, c);
            }
        }
        p
    }

    /// `r` with `self = r · other`, if it exists (`other` nonzero).
    pub fn ratio_to(&self, other: &SymPoly2) -> Option<Q> {
        let ((i, j), c) = other.coeffs.iter().next()?;
        let r = self.coeff(*i, *j) / c;
        (other.scaled(&r) == *self).then_some(r)
    }

    /// `[[coefficient, [[α,β], [γ,δ]]], ...]` with generator index pairs.
    pub fn to_json(&self, ctx: &AlgebraContext) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|((i, j), c)| json!([scalar::to_json(c), [ctx.pair(*i), ctx.pair(*j)]]))
                .collect(),
        )
    }
}

impl Add for SymPoly2 {
    type Output = SymPoly2;
    fn add(mut self, rhs: SymPoly2) -> SymPoly2 {
        self.axpy(&scalar::one(), &rhs);
        self
    }
}

impl Sub for SymPoly2 {
    type Output = SymPoly2;
    fn sub(mut self, rhs: SymPoly2) -> SymPoly2 {
        self.axpy(&-scalar::one(), &rhs);
        self
    }
}

impl Neg for SymPoly2 {
    type Output = SymPoly2;
    fn neg(self) -> SymPoly2 {
        self.scaled(&-scalar::one())
    }
}

/// Extended adjoint action on `S²(L)` as a derivation:
/// `ad x (u v) = [x, u] v + u [x, v]`.
pub fn adjoint_on_sym2(ctx: &AlgebraContext, x: &LieElement, p: &SymPoly2) -> Result<SymPoly2> {
    let mut out = SymPoly2::zero();
    for ((i, j), c) in p.terms() {
        let u = ctx.basis_element(i);
        let v = ctx.basis_element(j);
        let xu = ctx.commutator(x, &u)?;
        let xv = ctx.commutator(x, &v)?;
        out.axpy(c, &SymPoly2::product(&xu, &v));
        out.axpy(c, &SymPoly2::product(&u, &xv));
    }
    Ok(out)
}

/// Matrix of the extended adjoint action of `x` on the monomial coordinates of `S²(L)`.
pub fn adjoint_sym2_matrix(ctx: &AlgebraContext, x: &LieElement) -> crate::linalg::QMatrix {
    let d = ctx.dim();
    let mut m = crate::linalg::QMatrix::zeros(sym2_dim(d), sym2_dim(d));
    let brackets: Vec<LieElement> =
        (0..d).map(|k| ctx.commutator(x, &ctx.basis_element(k)).expect("same context")).collect();
    for i in 0..d {
        for j in i..d {
            let col = sym2_index(d, i, j);
            let mut img = SymPoly2::product(&brackets[i], &ctx.basis_element(j));
            img.axpy(&scalar::one(), &SymPoly2::product(&ctx.basis_element(i), &brackets[j]));
            for ((a, b), c) in img.terms() {
                m.add_at(sym2_index(d, a, b), col, c);
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Epsilon;
    use crate::scalar::q;

    #[test]
    fn triangular_indexing_roundtrip() {
        for d in [1, 3, 6, 10] {
            let mut k = 0;
            for i in 0..d {
                for j in i..d {
                    assert_eq!(sym2_index(d, i, j), k);
                    assert_eq!(sym2_index(d, j, i), k);
                    assert_eq!(sym2_pair(d, k), (i, j));
                    k += 1;
                }
            }
            assert_eq!(k, sym2_dim(d));
        }
    }

    #[test]
    fn ad_on_square_is_twice_bracket_times_u() {
        for eps in Epsilon::BOTH {
            let ctx = AlgebraContext::new(2, eps).unwrap();
            let u = ctx.basis_element(0) + ctx.basis_element(3).scaled(&q(2));
            for k in 0..ctx.dim() {
                let x = ctx.basis_element(k);
                let lhs = adjoint_on_sym2(&ctx, &x, &SymPoly2::product(&u, &u)).unwrap();
                let rhs = SymPoly2::product(&ctx.commutator(&x, &u).unwrap(), &u).scaled(&q(2));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn ad_lifts_bracket() {
        // ad x ad y - ad y ad x = ad [x, y] on S²(L)
        for eps in Epsilon::BOTH {
            let ctx = AlgebraContext::new(2, eps).unwrap();
            let p = SymPoly2::monomial(1, 4, q(3)) + SymPoly2::monomial(2, 2, q(-1));
            for i in 0..ctx.dim() {
                for j in 0..ctx.dim() {
                    let (x, y) = (ctx.basis_element(i), ctx.basis_element(j));
                    let xy = adjoint_on_sym2(&ctx, &x, &adjoint_on_sym2(&ctx, &y, &p).unwrap()).unwrap();
                    let yx = adjoint_on_sym2(&ctx, &y, &adjoint_on_sym2(&ctx, &x, &p).unwrap()).unwrap();
                    let br = adjoint_on_sym2(&ctx, &ctx.commutator(&x, &y).unwrap(), &p).unwrap();
                    assert_eq!(xy - yx, br);
                }
            }
        }
    }

    #[test]
    fn matrix_matches_direct_action() {
        let ctx = AlgebraContext::new(2, Epsilon::Symplectic).unwrap();
        let d = ctx.dim();
        let p = SymPoly2::monomial(0, 5, q(2)) + SymPoly2::monomial(7, 7, q(1));
        for k in 0..d {
            let x = ctx.basis_element(k);
            let m = adjoint_sym2_matrix(&ctx, &x);
            let direct = adjoint_on_sym2(&ctx, &x, &p).unwrap();
            assert_eq!(SymPoly2::from_vector(d, &m.mul_vec(&p.to_vector(d))), direct);
        }
    }
}
