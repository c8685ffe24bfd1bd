//! The classical matrix `K₁ = [[A, B], [−C, −Aᵗ]]` over commuting block
//! symbols, its powers, the parity of their blocks, and the pairing operator
//! `O = Σ λ(e_i) ⊗ μ(e^i)` built from the Fock realization and the defining
//! representation.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fock::{FockOperator, FockRealization, FockSpace, Monomial};
use crate::lie::{AlgebraContext, Block, Epsilon, LieElement};
use crate::linalg::{solve_sparse, sparse_rank};
use crate::scalar::{self, frac, q, Q};
use crate::sympoly::{identity_components, invariant_i2, Realization, SymPoly2};
use crate::verdict::Verdict;

/// One commuting generator symbol `A_ij`, `B_ij` or `C_ij` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub family: Block,
    pub i: u8,
    pub j: u8,
}

impl Symbol {
    fn tag(self) -> &'static str {
        match self.family {
            Block::A => "A",
            Block::B => "B",
            Block::C => "C",
        }
    }

    pub fn to_json(self) -> Value {
        json!([self.tag(), self.i, self.j])
    }

    pub fn from_json(v: &Value) -> Option<Self> {
        let a = v.as_array()?;
        if a.len() != 3 {
            return None;
        }
        let family = match a[0].as_str()? {
            "A" => Block::A,
            "B" => Block::B,
            "C" => Block::C,
            _ => return None,
        };
        Some(Symbol { family, i: u8::try_from(a[1].as_u64()?).ok()?, j: u8::try_from(a[2].as_u64()?).ok()? })
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.tag(), self.i, self.j)
    }
}

/// Sorted product of symbols, ordered by degree first, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Mono(Vec<Symbol>);

impl Mono {
    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    fn times(&self, other: &Mono) -> Mono {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => {
                    if x <= y {
                        v.push(*a.next().unwrap());
                    } else {
                        v.push(*b.next().unwrap());
                    }
                }
                (Some(_), None) => v.push(*a.next().unwrap()),
                (None, Some(_)) => v.push(*b.next().unwrap()),
                (None, None) => break,
            }
        }
        Mono(v)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in the commuting block symbols of one algebra. The relations
/// `B_ij = −ε B_ji` and `C_ij = −ε C_ji` are applied on construction, so two
/// polynomials are equal iff their term maps are.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CommPoly {
    terms: BTreeMap<Mono, Q>,
}

impl fmt::Debug for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let s: Vec<String> = m.0.iter().map(|x| x.to_string()).collect();
                if s.is_empty() {
                    scalar::show(c)
                } else {
                    format!("{}·{}", scalar::show(c), s.join(""))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl CommPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(Mono::default(), &c);
        p
    }

    /// The canonical image of `X_ij`; zero for the diagonal of `B`, `C` when ε = +1.
    pub fn symbol(eps: Epsilon, family: Block, i: usize, j: usize) -> Self {
        let (i8_, j8_) = (i as u8, j as u8);
        match family {
            Block::A => Self::mono(Mono(vec![Symbol { family, i: i8_, j: j8_ }]), scalar::one()),
            _ if i < j => Self::mono(Mono(vec![Symbol { family, i: i8_, j: j8_ }]), scalar::one()),
            _ if i == j => match eps {
                Epsilon::Orthogonal => Self::zero(),
                Epsilon::Symplectic => Self::mono(Mono(vec![Symbol { family, i: i8_, j: j8_ }]), scalar::one()),
            },
            _ => Self::mono(Mono(vec![Symbol { family, i: j8_, j: i8_ }]), -eps.q()),
        }
    }

    fn mono(m: Mono, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(m, &c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Highest total degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Mono::degree)
    }

    fn add_term(&mut self, m: Mono, c: &Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn axpy(&mut self, s: &Q, other: &CommPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), &(c * s));
        }
    }

    pub fn scaled(&self, s: &Q) -> Self {
        let mut p = Self::zero();
        p.axpy(s, self);
        p
    }

    pub fn mul(&self, other: &CommPoly) -> CommPoly {
        let mut p = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                p.add_term(m1.times(m2), &(c1 * c2));
            }
        }
        p
    }

    /// `c` with `self = c · other`, if one exists.
    pub fn ratio_to(&self, other: &CommPoly) -> Option<Q> {
        if other.is_zero() {
            return if self.is_zero() { Some(Q::zero()) } else { None };
        }
        let (m, c) = other.terms.iter().next()?;
        let r = self.coeff(m) / c;
        (other.scaled(&r) == *self).then_some(r)
    }

    /// `[[coef, [symbol, ...]], ...]` in ascending monomial order.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| json!([scalar::to_json(c), m.0.iter().map(|s| s.to_json()).collect::<Vec<_>>()]))
                .collect(),
        )
    }

    /// Inverse of [`CommPoly::to_json`]; symbols are re-canonicalized under `eps`.
    pub fn from_json(eps: Epsilon, v: &Value) -> Option<Self> {
        let mut p = Self::zero();
        for t in v.as_array()? {
            let t = t.as_array()?;
            if t.len() != 2 {
                return None;
            }
            let mut term = Self::constant(scalar::from_json(&t[0])?);
            for s in t[1].as_array()? {
                let s = Symbol::from_json(s)?;
                term = term.mul(&Self::symbol(eps, s.family, s.i as usize, s.j as usize));
            }
            p = p + term;
        }
        Some(p)
    }

    /// Value at a point given by `value(symbol)`.
    pub fn evaluate(&self, value: impl Fn(Symbol) -> Q) -> Q {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for s in &m.0 {
                t *= value(*s);
            }
            total += t;
        }
        total
    }

    /// Sparse coefficient vector for rank and solve computations.
    pub fn coordinates(&self) -> BTreeMap<Mono, Q> {
        self.terms.clone()
    }
}

impl Add for CommPoly {
    type Output = CommPoly;
    fn add(mut self, rhs: CommPoly) -> CommPoly {
        self.axpy(&scalar::one(), &rhs);
        self
    }
}

impl Sub for CommPoly {
    type Output = CommPoly;
    fn sub(mut self, rhs: CommPoly) -> CommPoly {
        self.axpy(&-scalar::one(), &rhs);
        self
    }
}

impl Neg for CommPoly {
    type Output = CommPoly;
    fn neg(self) -> CommPoly {
        self.scaled(&-scalar::one())
    }
}

impl Mul for &CommPoly {
    type Output = CommPoly;
    fn mul(self, rhs: &CommPoly) -> CommPoly {
        CommPoly::mul(self, rhs)
    }
}

/// Square matrix of polynomials; used for both the full `2n×2n` matrices and
/// their `n×n` blocks.
pub type PolyMatrix = Vec<Vec<CommPoly>>;

pub fn mat_mul(x: &PolyMatrix, y: &PolyMatrix) -> PolyMatrix {
    let n = x.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut p = CommPoly::zero();
                    for k in 0..n {
                        p = p + x[i][k].mul(&y[k][j]);
                    }
                    p
                })
                .collect()
        })
        .collect()
}

pub fn mat_t(x: &PolyMatrix) -> PolyMatrix {
    let n = x.len();
    (0..n).map(|i| (0..n).map(|j| x[j][i].clone()).collect()).collect()
}

pub fn mat_lin(a: &Q, x: &PolyMatrix, b: &Q, y: &PolyMatrix) -> PolyMatrix {
    x.iter()
        .zip(y)
        .map(|(rx, ry)| rx.iter().zip(ry).map(|(p, r)| p.scaled(a) + r.scaled(b)).collect())
        .collect()
}

fn mat_scale(x: &PolyMatrix, s: &Q) -> PolyMatrix {
    x.iter().map(|r| r.iter().map(|p| p.scaled(s)).collect()).collect()
}

/// First entry where `x` and `y` differ, with the residual `x − y`.
pub fn mat_residual(x: &PolyMatrix, y: &PolyMatrix) -> Option<(usize, usize, CommPoly)> {
    for (i, (rx, ry)) in x.iter().zip(y).enumerate() {
        for (j, (p, r)) in rx.iter().zip(ry).enumerate() {
            if p != r {
                return Some((i + 1, j + 1, p.clone() - r.clone()));
            }
        }
    }
    None
}

/// `K₁^m` with its block views.
#[derive(Debug, Clone, PartialEq)]
pub struct KMatrix {
    n: usize,
    eps: Epsilon,
    m: usize,
    entries: PolyMatrix,
}

impl KMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> Epsilon {
        self.eps
    }

    pub fn power(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &PolyMatrix {
        &self.entries
    }

    pub fn get(&self, a: usize, b: usize) -> &CommPoly {
        &self.entries[a - 1][b - 1]
    }

    fn sub_block(&self, r0: usize, c0: usize) -> PolyMatrix {
        let n = self.n;
        (0..n).map(|i| (0..n).map(|j| self.entries[r0 + i][c0 + j].clone()).collect()).collect()
    }

    pub fn a(&self) -> PolyMatrix {
        self.sub_block(0, 0)
    }

    pub fn b(&self) -> PolyMatrix {
        self.sub_block(0, self.n)
    }

    /// `C_m`, i.e. minus the lower-left block.
    pub fn c(&self) -> PolyMatrix {
        mat_scale(&self.sub_block(self.n, 0), &-scalar::one())
    }

    pub fn d(&self) -> PolyMatrix {
        self.sub_block(self.n, self.n)
    }

    pub fn mul(&self, other: &KMatrix) -> KMatrix {
        assert_eq!((self.n, self.eps), (other.n, other.eps), "K-matrices of different algebras");
        KMatrix { n: self.n, eps: self.eps, m: self.m + other.m, entries: mat_mul(&self.entries, &other.entries) }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "eps": self.eps.value(),
            "m": self.m,
            "entries": self.entries.iter().map(|r| r.iter().map(CommPoly::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

fn block(ctx: &AlgebraContext, family: Block) -> PolyMatrix {
    let n = ctx.n();
    (1..=n).map(|i| (1..=n).map(|j| CommPoly::symbol(ctx.eps(), family, i, j)).collect()).collect()
}

pub fn build_k1(ctx: &AlgebraContext) -> KMatrix {
    let n = ctx.n();
    let a = block(ctx, Block::A);
    let b = block(ctx, Block::B);
    let c = block(ctx, Block::C);
    let mut entries = vec![vec![CommPoly::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            entries[i][j] = a[i][j].clone();
            entries[i][j + n] = b[i][j].clone();
            entries[i + n][j] = -c[i][j].clone();
            entries[i + n][j + n] = -a[j][i].clone();
        }
    }
    KMatrix { n, eps: ctx.eps(), m: 1, entries }
}

/// `K₁^m` by repeated right multiplication; `m = 0` is rejected.
pub fn k_power(k1: &KMatrix, m: usize) -> Result<KMatrix> {
    if m == 0 || k1.m != 1 {
        return Err(Error::InvalidConfig(format!("k_power needs K₁ and m ≥ 1, got m = {m}")));
    }
    let mut k = k1.clone();
    for _ in 1..m {
        k = k.mul(k1);
    }
    Ok(k)
}

/// Linear image of a basis generator in block symbols:
/// `S_{i+n,j} = A_ij`, `S_{i+n,j+n} = B_ij`, `S_ij = −ε C_ij`, `S_{i,j+n} = −ε A_ji`.
pub fn generator_poly(ctx: &AlgebraContext, a: usize, b: usize) -> CommPoly {
    let n = ctx.n();
    let eps = ctx.eps();
    let me = -eps.q();
    match (a > n, b > n) {
        (true, false) => CommPoly::symbol(eps, Block::A, a - n, b),
        (true, true) => CommPoly::symbol(eps, Block::B, a - n, b - n),
        (false, false) => CommPoly::symbol(eps, Block::C, a, b).scaled(&me),
        (false, true) => CommPoly::symbol(eps, Block::A, b - n, a).scaled(&me),
    }
}

pub fn element_poly(ctx: &AlgebraContext, x: &LieElement) -> CommPoly {
    let mut p = CommPoly::zero();
    for (idx, c) in x.terms() {
        let (a, b) = ctx.pair(idx);
        p.axpy(c, &generator_poly(ctx, a, b));
    }
    p
}

/// A quadratic in the symmetric algebra, rewritten in block symbols.
pub fn sym2_poly(ctx: &AlgebraContext, p: &SymPoly2) -> CommPoly {
    let mut out = CommPoly::zero();
    for ((i, j), c) in p.terms() {
        let (a, b) = ctx.pair(i);
        let (e, f) = ctx.pair(j);
        out.axpy(c, &generator_poly(ctx, a, b).mul(&generator_poly(ctx, e, f)));
    }
    out
}

fn sign(m: usize) -> Q {
    if m % 2 == 0 {
        scalar::one()
    } else {
        -scalar::one()
    }
}

fn residual_json(m: usize, hit: &(usize, usize, CommPoly)) -> Value {
    json!({ "m": m, "ij": [hit.0, hit.1], "residual": hit.2.to_json() })
}

/// Block parity of `K₁^m` for `m = 1..=kmax`, the explicit `m = 2` blocks,
/// and the induction lemmas, each as exact polynomial identities.
pub fn verify_proposition(ctx: &AlgebraContext, kmax: usize) -> Result<Vec<Verdict>> {
    if kmax < 2 {
        return Err(Error::InvalidConfig(format!("kmax must be at least 2, got {kmax}")));
    }
    let eps = ctx.epsq();
    let one = scalar::one();
    let k1 = build_k1(ctx);
    let mut powers = vec![k1.clone()];
    for _ in 1..kmax {
        let next = powers.last().unwrap().mul(&k1);
        powers.push(next);
    }
    let (a1, b1, c1, d1) = (k1.a(), k1.b(), k1.c(), k1.d());
    let (a1t, b1t) = (mat_t(&a1), mat_t(&b1));
    let mut out = Vec::new();

    let mut v = Verdict::new("kmatrix.k1-structure", "D₁ = −A₁ᵗ, B₁ = −ε B₁ᵗ, C₁ = −ε C₁ᵗ");
    for (lhs, rhs) in [
        (d1.clone(), mat_scale(&a1t, &-one.clone())),
        (b1.clone(), mat_scale(&b1t, &-eps.clone())),
        (c1.clone(), mat_scale(&mat_t(&c1), &-eps.clone())),
    ] {
        let hit = mat_residual(&lhs, &rhs);
        v.case(hit.is_none(), || residual_json(1, hit.as_ref().unwrap()));
    }
    out.push(v);

    let k2 = &powers[1];
    let mut v = Verdict::new(
        "kmatrix.m2-blocks",
        "A₂ = A₁² − B₁C₁, B₂ = A₁B₁ − B₁A₁ᵗ, C₂ = C₁A₁ − A₁ᵗC₁, D₂ = (A₁ᵗ)² − C₁B₁",
    );
    for (lhs, rhs) in [
        (k2.a(), mat_lin(&one, &mat_mul(&a1, &a1), &-one.clone(), &mat_mul(&b1, &c1))),
        (k2.b(), mat_lin(&one, &mat_mul(&a1, &b1), &-one.clone(), &mat_mul(&b1, &a1t))),
        (k2.c(), mat_lin(&one, &mat_mul(&c1, &a1), &-one.clone(), &mat_mul(&a1t, &c1))),
        (k2.d(), mat_lin(&one, &mat_mul(&a1t, &a1t), &-one.clone(), &mat_mul(&c1, &b1))),
    ] {
        let hit = mat_residual(&lhs, &rhs);
        v.case(hit.is_none(), || residual_json(2, hit.as_ref().unwrap()));
    }
    out.push(v);

    let mut v = Verdict::new("kmatrix.commuting", "K₁ K_m = K_m K₁");
    for km in &powers {
        let l = k1.mul(km);
        let r = km.mul(&k1);
        let hit = mat_residual(&l.entries, &r.entries);
        v.case(hit.is_none(), || residual_json(km.m, hit.as_ref().unwrap()));
    }
    out.push(v);

    let mut vb = Verdict::new("kmatrix.b-parity", "B_m = (−1)^m ε B_mᵗ");
    let mut vc = Verdict::new("kmatrix.c-parity", "C_m = (−1)^m ε C_mᵗ");
    let mut vd = Verdict::new("kmatrix.d-parity", "D_m = (−1)^m A_mᵗ");
    let mut uniform_holds = Vec::new();
    for km in &powers {
        let m = km.m;
        let s = sign(m) * &eps;
        let hit = mat_residual(&km.b(), &mat_scale(&mat_t(&km.b()), &s));
        vb.case(hit.is_none(), || residual_json(m, hit.as_ref().unwrap()));
        let hit = mat_residual(&km.c(), &mat_scale(&mat_t(&km.c()), &s));
        vc.case(hit.is_none(), || residual_json(m, hit.as_ref().unwrap()));
        let at = mat_t(&km.a());
        let hit = mat_residual(&km.d(), &mat_scale(&at, &sign(m)));
        vd.case(hit.is_none(), || residual_json(m, hit.as_ref().unwrap()));
        uniform_holds.push((m, mat_residual(&km.d(), &mat_scale(&at, &-one.clone())).is_none()));
    }
    out.push(vb);
    out.push(vc);

    // The uniform form D_m = −A_mᵗ can only agree with the alternating one at odd m.
    let mut vu = Verdict::new("kmatrix.d-sign", "D_m = −A_mᵗ exactly when m is odd");
    for &(m, holds) in &uniform_holds {
        vu.case(holds == (m % 2 == 1), || json!({ "m": m, "uniform_form_holds": holds }));
    }
    vd.push_note("the alternating sign (−1)^m governs the D block; −A_mᵗ holds only for odd m");
    out.push(vd);
    out.push(vu);

    let mut l75 = Verdict::new("kmatrix.lemma-a", "(K₁K_m)_Aᵗ = A_mᵗA₁ᵗ − C_mᵗB₁ᵗ");
    let mut l76 = Verdict::new("kmatrix.lemma-d", "(K_mK₁)_D = −C_mB₁ + D_mD₁ = (−1)^{m+1}(A_mᵗA₁ᵗ − C_mᵗB₁ᵗ)");
    let mut l77 = Verdict::new("kmatrix.lemma-b-transpose", "(A₁B_m + B₁D_m)ᵗ = (−1)^{m+1} ε (A_mB₁ − B_mA₁ᵗ)");
    let mut l78 = Verdict::new("kmatrix.lemma-b", "(K_mK₁)_B = A_mB₁ + B_mD₁ = A_mB₁ − B_mA₁ᵗ");
    for km in &powers[..kmax - 1] {
        let m = km.m;
        let next = &powers[m];
        let (am, bm, cm, dm) = (km.a(), km.b(), km.c(), km.d());
        let amt = mat_t(&am);
        let cmt = mat_t(&cm);
        let core = mat_lin(&one, &mat_mul(&amt, &a1t), &-one.clone(), &mat_mul(&cmt, &b1t));

        let left = k1.mul(km);
        let hit = mat_residual(&mat_t(&left.a()), &core);
        l75.case(hit.is_none(), || residual_json(m, hit.as_ref().unwrap()));

        let right = km.mul(&k1);
        let expanded = mat_lin(&-one.clone(), &mat_mul(&cm, &b1), &one, &mat_mul(&dm, &d1));
        let hit = mat_residual(&right.d(), &expanded)
            .or_else(|| mat_residual(&expanded, &mat_scale(&core, &sign(m + 1))))
            .or_else(|| mat_residual(&next.d(), &expanded));
        l76.case(hit.is_none(), || residual_json(m, hit.as_ref().unwrap()));

        let chain = mat_lin(&one, &mat_mul(&am, &b1), &-one.clone(), &mat_mul(&bm, &a1t));
        let lhs = mat_t(&mat_lin(&one, &mat_mul(&a1, &bm), &one, &mat_mul(&b1, &dm)));
        let hit = mat_residual(&lhs, &mat_scale(&chain, &(sign(m + 1) * &eps)));
        l77.case(hit.is_none(), || residual_json(m, hit.as_ref().unwrap()));

        let expanded = mat_lin(&one, &mat_mul(&am, &b1), &one, &mat_mul(&bm, &d1));
        let hit = mat_residual(&right.b(), &expanded)
            .or_else(|| mat_residual(&expanded, &chain))
            .or_else(|| mat_residual(&next.b(), &chain));
        l78.case(hit.is_none(), || residual_json(m, hit.as_ref().unwrap()));
    }
    out.extend([l75, l76, l77, l78]);
    Ok(out)
}

/// `K₁² − (I₂/2n)·Id = g⁻¹E` entrywise, where `E_αβ` are the commutative
/// identity components rewritten in block symbols. Since `g` is invertible,
/// the vanishing of all `E_αβ` is equivalent to `K₁² = (I₂/2n)·Id`.
pub fn verify_equivalence(ctx: &AlgebraContext) -> Result<Vec<Verdict>> {
    let s = ctx.size();
    let n = ctx.n();
    let k1 = build_k1(ctx);
    let k2 = k1.mul(&k1);
    let e = identity_components(ctx)?;
    let i2 = sym2_poly(ctx, &invariant_i2(ctx));
    let shift = i2.scaled(&frac(1, s as i64));
    let e_poly: PolyMatrix = (1..=s).map(|a| (1..=s).map(|b| sym2_poly(ctx, e.get(a, b))).collect()).collect();

    let mut out = Vec::new();
    let mut v = Verdict::new("kmatrix.square-vs-identities", "K₁² − (I₂/2n)·Id = g⁻¹E");
    for a in 1..=s {
        for b in 1..=s {
            let mut lhs = k2.get(a, b).clone();
            if a == b {
                lhs = lhs - shift.clone();
            }
            let mut rhs = CommPoly::zero();
            for c in 1..=s {
                let g = ctx.g_inv(a, c);
                if g != 0 {
                    rhs.axpy(&q(g), &e_poly[c - 1][b - 1]);
                }
            }
            v.case(lhs == rhs, || json!({ "ab": [a, b], "residual": (lhs.clone() - rhs.clone()).to_json() }));
        }
    }
    out.push(v);

    let mut v = Verdict::new("kmatrix.b2-block", "(K₁²)_B = A₁B₁ − B₁A₁ᵗ = E_{i+n,j+n}");
    for i in 1..=n {
        for j in 1..=n {
            let lhs = k2.get(i, j + n).clone();
            let rhs = e_poly[i + n - 1][j + n - 1].clone();
            v.case(lhs == rhs, || json!({ "ij": [i, j], "residual": (lhs.clone() - rhs.clone()).to_json() }));
        }
    }
    out.push(v);

    let mut trace = CommPoly::zero();
    for a in 1..=s {
        trace = trace + k2.get(a, a).clone();
    }
    let mut v = Verdict::new("kmatrix.trace", "tr K₁² = I₂");
    let ratio = trace.ratio_to(&i2);
    v.case(ratio.as_ref().is_some_and(|r| r.is_one()), || {
        json!({ "ratio": ratio.as_ref().map(scalar::to_json), "residual": (trace.clone() - i2.clone()).to_json() })
    });
    out.push(v);
    Ok(out)
}

/// Independent-entry counts of `K₁` (m = 1) or `K₁²` (m = 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryCount {
    pub m: usize,
    /// Distinct nonzero entries, identifying entries that differ by sign.
    pub distinct: usize,
    /// Dimension of the linear span of all entries.
    pub rank: usize,
    /// The count predicted from the block parity.
    pub expected: usize,
}

pub fn entry_count(ctx: &AlgebraContext, m: usize) -> Result<EntryCount> {
    if !(1..=2).contains(&m) {
        return Err(Error::InvalidConfig(format!("entry counts are defined for m = 1, 2, got {m}")));
    }
    let k = k_power(&build_k1(ctx), m)?;
    let big_n = ctx.size();
    let mut seen = BTreeSet::new();
    let mut vectors = Vec::new();
    for row in k.entries() {
        for p in row {
            if p.is_zero() {
                continue;
            }
            // Normalize the sign by the leading coefficient.
            let (_, lead) = p.terms.iter().next_back().unwrap();
            let normal = if lead < &Q::zero() { -p.clone() } else { p.clone() };
            seen.insert(normal.to_json().to_string());
            vectors.push(p.coordinates());
        }
    }
    // Odd powers carry the parity of K₁ itself, even powers the opposite one.
    let symmetric_blocks = (ctx.eps() == Epsilon::Symplectic) == (m % 2 == 1);
    let expected = if symmetric_blocks { big_n * (big_n + 1) / 2 } else { big_n * (big_n - 1) / 2 };
    Ok(EntryCount { m, distinct: seen.len(), rank: sparse_rank(&vectors), expected })
}

/// Entry counts of `K₁` and `K₁²` against `dim(ad)` and `1 + dim` of the
/// two-index component, and the dimension arithmetic behind them.
pub fn count_check(ctx: &AlgebraContext) -> Result<Vec<Verdict>> {
    if ctx.n() == 1 && ctx.eps() == Epsilon::Orthogonal {
        // so(2) is abelian: K₁² = A₁₁²·Id has a single independent entry.
        return Err(Error::Degenerate("so(2) has no two-index component to count".into()));
    }
    let big_n = ctx.size() as i64;
    let dim = ctx.dim();
    let mut out = Vec::new();

    let c1 = entry_count(ctx, 1)?;
    let mut v = Verdict::new("count.k1-entries", "distinct entries of K₁ = rank of their span = dim(ad)");
    v.case(c1.distinct == dim && c1.rank == dim && c1.expected == dim, || {
        json!({ "distinct": c1.distinct, "rank": c1.rank, "expected": c1.expected, "dim": dim })
    });
    out.push(v.note(format!("{} entries", c1.distinct)));

    let c2 = entry_count(ctx, 2)?;
    let (component, formula) = match ctx.eps() {
        Epsilon::Symplectic => ((big_n + 1) * (big_n - 2) / 2, "1 + (N+1)(N−2)/2 = N(N−1)/2"),
        Epsilon::Orthogonal => ((big_n - 1) * (big_n + 2) / 2, "1 + (N−1)(N+2)/2 = N(N+1)/2"),
    };
    let total = (1 + component) as usize;
    let mut v = Verdict::new("count.k2-entries", format!("independent entries of K₁² = {formula}"));
    v.case(c2.distinct == total && c2.rank == total && c2.expected == total, || {
        json!({ "distinct": c2.distinct, "rank": c2.rank, "expected": c2.expected, "one_plus_component": total })
    });
    out.push(v.note(format!("{} entries, N = {}", c2.rank, big_n)));
    Ok(out)
}

/// Basis dimensions and the displayed dimension identities for `n ≤ n_max`.
pub fn dimension_arithmetic(n_max: usize) -> Verdict {
    let mut v = Verdict::new(
        "count.dimensions",
        "dim so(N) = N(N−1)/2, dim sp(N) = N(N+1)/2, 1 + (N+1)(N−2)/2 = N(N−1)/2, 1 + (N−1)(N+2)/2 = N(N+1)/2",
    );
    for n in 1..=n_max {
        let big_n = 2 * n;
        for eps in [Epsilon::Orthogonal, Epsilon::Symplectic] {
            let ctx = AlgebraContext::new(n, eps).expect("positive rank");
            let want = match eps {
                Epsilon::Orthogonal => n * (2 * n - 1),
                Epsilon::Symplectic => n * (2 * n + 1),
            };
            v.case(ctx.dim() == want, || json!({ "n": n, "eps": eps.value(), "dim": ctx.dim(), "want": want }));
        }
        let bn = big_n as i64;
        v.case(1 + (bn + 1) * (bn - 2) / 2 == bn * (bn - 1) / 2, || json!({ "N": bn }));
        v.case(1 + (bn - 1) * (bn + 2) / 2 == bn * (bn + 1) / 2, || json!({ "N": bn }));
    }
    v
}

/// `O_pq = Σ_i r(e_i) μ(e^i)_pq`, with `e^i` the Killing dual of `e_i` and `μ`
/// the defining representation.
pub fn pairing_in<R: Realization>(r: &R, ctx: &AlgebraContext) -> Vec<Vec<R::Op>> {
    let s = ctx.size();
    let mut o = vec![vec![r.zero(); s]; s];
    for i in 0..ctx.dim() {
        let gi = r.generator(i);
        let mu = ctx.element_matrix(&ctx.dual_of(&ctx.basis_element(i)));
        for (p, row) in o.iter_mut().enumerate() {
            for (qi, entry) in row.iter_mut().enumerate() {
                let c = mu.get(p, qi);
                if !c.is_zero() {
                    *entry = r.add(entry, &r.scale(&gi, &c));
                }
            }
        }
    }
    o
}

pub type OperatorMatrix = Vec<Vec<FockOperator>>;

/// The pairing operator with the Fock realization as left factor.
pub fn pairing_operator(ctx: &AlgebraContext) -> Result<OperatorMatrix> {
    if ctx.n() == 1 && ctx.eps() == Epsilon::Orthogonal {
        return Err(Error::Degenerate("so(2) has no Killing dual basis".into()));
    }
    let r = FockRealization::new(ctx, FockSpace::for_context(ctx))?;
    Ok(pairing_in(&r, ctx))
}

fn op_mat_mul(x: &OperatorMatrix, y: &OperatorMatrix) -> OperatorMatrix {
    let s = x.len();
    let zero = x[0][0].scale(&Q::zero());
    (0..s)
        .into_par_iter()
        .map(|p| {
            (0..s)
                .map(|r| {
                    let mut acc = zero.clone();
                    for k in 0..s {
                        acc = acc.add(&x[p][k].mul(&y[k][r]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn op_coordinates(m: &OperatorMatrix) -> BTreeMap<(usize, usize, Monomial), Q> {
    let mut out = BTreeMap::new();
    for (p, row) in m.iter().enumerate() {
        for (r, op) in row.iter().enumerate() {
            for (mono, c) in op.terms() {
                out.insert((p, r, mono.clone()), c.clone());
            }
        }
    }
    out
}

fn op_identity(ctx: &AlgebraContext, like: &FockOperator) -> OperatorMatrix {
    let s = ctx.size();
    let id = like.scale(&Q::zero()).add(&FockOperator::identity(like.n(), like.statistics()));
    (0..s).map(|p| (0..s).map(|r| if p == r { id.clone() } else { like.scale(&Q::zero()) }).collect()).collect()
}

/// The monic quadratic `O² + aO + b·Id = 0` satisfied by the pairing operator.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingRelation {
    pub a: Q,
    pub b: Q,
    /// Roots of `x² + ax + b`, when rational.
    pub roots: Option<(Q, Q)>,
}

/// Exact minimal relation of degree ≤ 2 for the pairing operator. Operators
/// are compared in normal-ordered form, which is faithful on Fock space.
pub fn pairing_relation(ctx: &AlgebraContext) -> Result<PairingRelation> {
    let o = pairing_operator(ctx)?;
    let id = op_identity(ctx, &o[0][0]);
    let o2 = op_mat_mul(&o, &o);
    let c_o = op_coordinates(&o);
    let c_id = op_coordinates(&id);
    if solve_sparse(std::slice::from_ref(&c_id), &negate(&c_o)).is_some() {
        return Err(Error::Degenerate("pairing operator is a multiple of the identity".into()));
    }
    let sol = solve_sparse(&[c_o, c_id], &negate(&op_coordinates(&o2))).ok_or(Error::NoRelation(2))?;
    let (a, b) = (sol[0].clone(), sol[1].clone());
    Ok(PairingRelation { roots: rational_roots(&a, &b), a, b })
}

fn negate<K: Ord + Clone>(v: &BTreeMap<K, Q>) -> BTreeMap<K, Q> {
    v.iter().map(|(k, c)| (k.clone(), -c.clone())).collect()
}

fn rational_roots(a: &Q, b: &Q) -> Option<(Q, Q)> {
    let disc = a * a - b * q(4);
    let root = |x: &num_bigint::BigInt| -> Option<num_bigint::BigInt> {
        if x < &num_bigint::BigInt::zero() {
            return None;
        }
        let r = x.sqrt();
        (&r * &r == *x).then_some(r)
    };
    let sq = Q::new(root(disc.numer())?, root(disc.denom())?);
    let half = frac(1, 2);
    Some(((-a - &sq) * &half, (-a + &sq) * &half))
}

/// The quadratic relation, its minimality, equivariance of `O` under
/// `ρ(x) ⊗ 1 + 1 ⊗ μ(x)`, and the classical limit `Σ e_i μ(e^i) = κ K₁`.
pub fn verify_pairing(ctx: &AlgebraContext) -> Result<Vec<Verdict>> {
    let o = pairing_operator(ctx)?;
    let id = op_identity(ctx, &o[0][0]);
    let s = ctx.size();
    let mut out = Vec::new();

    let mut v = Verdict::new("pairing.no-linear-relation", "O + a·Id ≠ 0 for every rational a");
    let linear = solve_sparse(std::slice::from_ref(&op_coordinates(&id)), &negate(&op_coordinates(&o)));
    v.case(linear.is_none(), || json!({ "a": linear.as_ref().map(|x| scalar::to_json(&x[0])) }));
    out.push(v);

    let mut v = Verdict::new("pairing.quadratic", "O² + aO + b·Id = 0 with rational a, b");
    match pairing_relation(ctx) {
        Ok(rel) => {
            let o2 = op_mat_mul(&o, &o);
            let mut cases = 0;
            for p in 0..s {
                for r in 0..s {
                    let res = o2[p][r].add(&o[p][r].scale(&rel.a)).add(&id[p][r].scale(&rel.b));
                    cases += 1;
                    v.case(res.is_zero(), || json!({ "pq": [p + 1, r + 1], "terms": res.len() }));
                }
            }
            debug_assert_eq!(cases, s * s);
            v.push_note(format!("a = {}, b = {}", scalar::show(&rel.a), scalar::show(&rel.b)));
            if let Some((x, y)) = &rel.roots {
                v.push_note(format!("eigenvalues {} and {}", scalar::show(x), scalar::show(y)));
            }
        }
        Err(e) => v.case(false, || json!({ "error": e.to_string() })),
    }
    out.push(v);

    let r = FockRealization::new(ctx, FockSpace::for_context(ctx))?;
    let mut v = Verdict::new("pairing.equivariance", "[ρ(x) ⊗ 1 + 1 ⊗ μ(x), O] = 0 for every generator x");
    for i in 0..ctx.dim() {
        let x = ctx.basis_element(i);
        let rho = r.generator(i);
        let mu = ctx.element_matrix(&x);
        for p in 0..s {
            for t in 0..s {
                let mut acc = rho.commutator(&o[p][t]);
                for k in 0..s {
                    let left = mu.get(p, k);
                    if !left.is_zero() {
                        acc = acc.add(&o[k][t].scale(&left));
                    }
                    let right = mu.get(k, t);
                    if !right.is_zero() {
                        acc = acc.sub(&o[p][k].scale(&right));
                    }
                }
                v.case(acc.is_zero(), || json!({ "generator": ctx.pair(i), "pq": [p + 1, t + 1] }));
            }
        }
    }
    out.push(v);

    out.push(verify_classical_limit(ctx));
    Ok(out)
}

/// Replacing `ρ(e_i)` by the commuting symbol of `e_i` turns `O` into a
/// multiple of `K₁ᵗ`; the multiple is the dual-basis normalization.
pub fn classical_pairing(ctx: &AlgebraContext) -> PolyMatrix {
    let s = ctx.size();
    let mut o = vec![vec![CommPoly::zero(); s]; s];
    for i in 0..ctx.dim() {
        let (a, b) = ctx.pair(i);
        let sym = generator_poly(ctx, a, b);
        let mu = ctx.element_matrix(&ctx.dual_of(&ctx.basis_element(i)));
        for (p, row) in o.iter_mut().enumerate() {
            for (t, entry) in row.iter_mut().enumerate() {
                let c = mu.get(p, t);
                if !c.is_zero() {
                    entry.axpy(&c, &sym);
                }
            }
        }
    }
    o
}

fn verify_classical_limit(ctx: &AlgebraContext) -> Verdict {
    let k1t = mat_t(build_k1(ctx).entries());
    let cl = classical_pairing(ctx);
    let mut v = Verdict::new("pairing.classical-limit", "Σ_i e_i μ(e^i) = κ K₁ᵗ in the symmetric algebra");
    let kappa = cl[0][0].ratio_to(&k1t[0][0]);
    let scaled = kappa.as_ref().map(|k| mat_scale(&k1t, k));
    let hit = match &scaled {
        Some(m) => mat_residual(&cl, m),
        None => Some((1, 1, cl[0][0].clone())),
    };
    v.case(hit.is_none(), || residual_json(1, hit.as_ref().unwrap()));
    if let Some(k) = &kappa {
        v.push_note(format!("κ = {}", scalar::show(k)));
    }
    v
}
