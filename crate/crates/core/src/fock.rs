//! Exact Fock spaces for `n` fermionic (ε = +1) or bosonic (ε = −1) modes,
//! normal-ordered ladder-operator polynomials, and the pair-operator
//! realization of so(2n) / sp(2n).

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::lie::{AlgebraContext, Epsilon, LieElement};
use crate::scalar::{self, frac, q, Q};
use crate::sympoly::Realization;
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistics {
    Fermionic,
    Bosonic,
}

impl Statistics {
    pub fn for_eps(eps: Epsilon) -> Self {
        match eps {
            Epsilon::Orthogonal => Statistics::Fermionic,
            Epsilon::Symplectic => Statistics::Bosonic,
        }
    }

    pub fn eps(self) -> Epsilon {
        match self {
            Statistics::Fermionic => Epsilon::Orthogonal,
            Statistics::Bosonic => Epsilon::Symplectic,
        }
    }

    /// Exchange sign `σ = −ε` of two same-type ladder operators.
    fn sigma(self) -> i64 {
        -self.eps().value()
    }
}

/// Occupation-number basis state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccState(pub Vec<u32>);

impl OccState {
    pub fn vacuum(n: usize) -> Self {
        OccState(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn parity(&self) -> u32 {
        self.degree() % 2
    }

    pub fn to_json(&self) -> Value {
        json!(self.0)
    }

    pub fn from_json(v: &Value) -> Option<Self> {
        v.as_array()?.iter().map(|x| x.as_u64().map(|k| k as u32)).collect::<Option<Vec<_>>>().map(OccState)
    }
}

impl fmt::Display for OccState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "|{}⟩", parts.join(","))
    }
}

/// Finite linear combination of basis states.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FockVector {
    terms: BTreeMap<OccState, Q>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(s: OccState) -> Self {
        let mut v = Self::zero();
        v.add_term(s, &scalar::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OccState, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, s: &OccState) -> Q {
        self.terms.get(s).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, s: OccState, c: &Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(s.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn axpy(&mut self, c: &Q, other: &FockVector) {
        for (s, x) in &other.terms {
            self.add_term(s.clone(), &(x * c));
        }
    }

    /// `{"[k1,k2,...]": [num, den], ...}`.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (s, c) in &self.terms {
            m.insert(s.to_json().to_string(), scalar::to_json(c));
        }
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Option<Self> {
        let mut out = Self::zero();
        for (k, c) in v.as_object()? {
            let s = OccState::from_json(&serde_json::from_str(k).ok()?)?;
            out.add_term(s, &scalar::from_json(c)?);
        }
        Some(out)
    }
}

/// Normal-ordered monomial `b⁺_{c1} … b⁺_{cp} b_{a1} … b_{ak}` with sorted
/// creator and annihilator index lists (0-based modes).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub creators: Vec<u8>,
    pub annihilators: Vec<u8>,
}

impl Monomial {
    pub fn grade(&self) -> i64 {
        self.creators.len() as i64 - self.annihilators.len() as i64
    }
}

/// Sort `list` with sign `σ` per transposition; `None` if a fermionic mode repeats.
fn sort_signed(mut list: Vec<u8>, stats: Statistics) -> Option<(Vec<u8>, i64)> {
    let mut sign = 1;
    let sigma = stats.sigma();
    for i in 1..list.len() {
        let mut j = i;
        while j > 0 && list[j - 1] > list[j] {
            list.swap(j - 1, j);
            sign *= sigma;
            j -= 1;
        }
    }
    if stats == Statistics::Fermionic && list.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((list, sign))
}

type Terms = Vec<(Monomial, Q)>;

thread_local! {
    static NORMAL_CACHE: RefCell<HashMap<(Statistics, Vec<u8>, Vec<u8>), Terms>> = RefCell::new(HashMap::new());
}

/// Normal form of `b_{a1} … b_{ak} · b⁺_{c1} … b⁺_{cp}` (both lists sorted).
fn normal_ann_cre(stats: Statistics, ann: &[u8], cre: &[u8]) -> Terms {
    if ann.is_empty() || cre.is_empty() {
        return vec![(Monomial { creators: cre.to_vec(), annihilators: ann.to_vec() }, scalar::one())];
    }
    let key = (stats, ann.to_vec(), cre.to_vec());
    if let Some(hit) = NORMAL_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let sigma = stats.sigma();
    let (rest, last) = ann.split_at(ann.len() - 1);
    let a = last[0];
    let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
    let mut push = |m: Monomial, c: Q| {
        let e = acc.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            acc.remove(&m);
        }
    };
    // b_a c_0 … c_{k-1} = Σ_j σ^j δ_{a,c_j} (C without c_j) + σ^k C b_a
    let mut sign = 1;
    for (j, &c) in cre.iter().enumerate() {
        if c == a {
            let mut reduced = cre.to_vec();
            reduced.remove(j);
            for (m, x) in normal_ann_cre(stats, rest, &reduced) {
                push(m, x * q(sign));
            }
        }
        sign *= sigma;
    }
    for (m, x) in normal_ann_cre(stats, rest, cre) {
        let mut anns = m.annihilators.clone();
        anns.push(a);
        if let Some((sorted, s)) = sort_signed(anns, stats) {
            push(Monomial { creators: m.creators, annihilators: sorted }, x * q(sign * s));
        }
    }
    let out: Terms = acc.into_iter().collect();
    NORMAL_CACHE.with(|c| c.borrow_mut().insert(key, out.clone()));
    out
}

/// Polynomial in the ladder operators, kept in normal-ordered canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct FockOperator {
    n: usize,
    stats: Statistics,
    terms: BTreeMap<Monomial, Q>,
}

impl fmt::Debug for FockOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut s = scalar::show(c);
                for i in &m.creators {
                    s.push_str(&format!(" b{}⁺", i + 1));
                }
                for i in &m.annihilators {
                    s.push_str(&format!(" b{}", i + 1));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FockOperator {
    pub fn zero(n: usize, stats: Statistics) -> Self {
        FockOperator { n, stats, terms: BTreeMap::new() }
    }

    pub fn scalar(n: usize, stats: Statistics, c: Q) -> Self {
        let mut op = Self::zero(n, stats);
        op.add_term(Monomial { creators: vec![], annihilators: vec![] }, &c);
        op
    }

    pub fn identity(n: usize, stats: Statistics) -> Self {
        Self::scalar(n, stats, scalar::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn statistics(&self) -> Statistics {
        self.stats
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    /// `Some(c)` if the operator is `c · Id`.
    pub fn as_scalar(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                (m.creators.is_empty() && m.annihilators.is_empty()).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Distinct occupation shifts of the terms.
    pub fn grades(&self) -> BTreeSet<i64> {
        self.terms.keys().map(Monomial::grade).collect()
    }

    pub fn max_shift(&self) -> i64 {
        self.grades().into_iter().map(i64::abs).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: &Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn axpy(&mut self, c: &Q, other: &FockOperator) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), &(x * c));
        }
    }

    pub fn add(&self, other: &FockOperator) -> FockOperator {
        let mut out = self.clone();
        out.axpy(&scalar::one(), other);
        out
    }

    pub fn sub(&self, other: &FockOperator) -> FockOperator {
        let mut out = self.clone();
        out.axpy(&-scalar::one(), other);
        out
    }

    pub fn scale(&self, c: &Q) -> FockOperator {
        let mut out = Self::zero(self.n, self.stats);
        out.axpy(c, self);
        out
    }

    pub fn mul(&self, other: &FockOperator) -> FockOperator {
        let stats = self.stats;
        let mut out = Self::zero(self.n, stats);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c12 = c1 * c2;
                for (mid, x) in normal_ann_cre(stats, &m1.annihilators, &m2.creators) {
                    let mut cre = m1.creators.clone();
                    cre.extend_from_slice(&mid.creators);
                    let Some((cre, s1)) = sort_signed(cre, stats) else { continue };
                    let mut ann = mid.annihilators;
                    ann.extend_from_slice(&m2.annihilators);
                    let Some((ann, s2)) = sort_signed(ann, stats) else { continue };
                    out.add_term(Monomial { creators: cre, annihilators: ann }, &(&c12 * &x * q(s1 * s2)));
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &FockOperator) -> FockOperator {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn anticommutator(&self, other: &FockOperator) -> FockOperator {
        self.mul(other).add(&other.mul(self))
    }

    /// `[X, Y]_ε = XY + ε YX` with the statistics' own ε.
    pub fn eps_bracket(&self, other: &FockOperator) -> FockOperator {
        let mut out = self.mul(other);
        out.axpy(&self.stats.eps().q(), &other.mul(self));
        out
    }

    pub fn apply_state(&self, s: &OccState) -> FockVector {
        let mut out = FockVector::zero();
        for (m, c) in &self.terms {
            if let Some((t, x)) = apply_monomial(self.stats, m, s) {
                out.add_term(t, &(c * x));
            }
        }
        out
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (s, c) in v.terms() {
            out.axpy(c, &self.apply_state(s));
        }
        out
    }
}

fn ladder(stats: Statistics, create: bool, i: usize, occ: &mut [u32]) -> Option<Q> {
    match stats {
        Statistics::Fermionic => {
            if (occ[i] == 1) == create {
                return None;
            }
            let before: u32 = occ[..i].iter().sum();
            occ[i] = if create { 1 } else { 0 };
            Some(q(if before % 2 == 0 { 1 } else { -1 }))
        }
        Statistics::Bosonic => {
            if create {
                occ[i] += 1;
                Some(scalar::one())
            } else if occ[i] == 0 {
                None
            } else {
                let k = occ[i];
                occ[i] -= 1;
                Some(q(k as i64))
            }
        }
    }
}

fn apply_monomial(stats: Statistics, m: &Monomial, s: &OccState) -> Option<(OccState, Q)> {
    let mut occ = s.0.clone();
    let mut coef = scalar::one();
    for &a in m.annihilators.iter().rev() {
        coef *= ladder(stats, false, a as usize, &mut occ)?;
    }
    for &c in m.creators.iter().rev() {
        coef *= ladder(stats, true, c as usize, &mut occ)?;
    }
    Some((OccState(occ), coef))
}

/// Mode count and statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    pub n: usize,
    pub stats: Statistics,
}

/// Which HNN generator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HnnKind {
    /// `E^i_j = b_i⁺ b_j − (ε/2) δ_ij`
    Mixed,
    /// `E₀^{ij} = b_i⁺ b_j⁺`
    Upper,
    /// `E^0_{ij} = ε b_i b_j`
    Lower,
}

impl FockSpace {
    pub fn new(n: usize, stats: Statistics) -> Result<Self> {
        if n == 0 || n > 255 {
            return Err(Error::InvalidRank);
        }
        Ok(FockSpace { n, stats })
    }

    pub fn for_context(ctx: &AlgebraContext) -> Self {
        FockSpace { n: ctx.n(), stats: Statistics::for_eps(ctx.eps()) }
    }

    pub fn eps(&self) -> Epsilon {
        self.stats.eps()
    }

    fn check_mode(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            Err(Error::IndexOutOfRange { index: i, bound: self.n })
        } else {
            Ok(())
        }
    }

    pub fn zero(&self) -> FockOperator {
        FockOperator::zero(self.n, self.stats)
    }

    pub fn identity(&self) -> FockOperator {
        FockOperator::identity(self.n, self.stats)
    }

    pub fn scalar(&self, c: Q) -> FockOperator {
        FockOperator::scalar(self.n, self.stats, c)
    }

    /// `b_i⁺`, 1-based mode.
    pub fn creation(&self, i: usize) -> Result<FockOperator> {
        self.check_mode(i)?;
        let mut op = self.zero();
        op.add_term(Monomial { creators: vec![(i - 1) as u8], annihilators: vec![] }, &scalar::one());
        Ok(op)
    }

    /// `b_i`, 1-based mode.
    pub fn annihilation(&self, i: usize) -> Result<FockOperator> {
        self.check_mode(i)?;
        let mut op = self.zero();
        op.add_term(Monomial { creators: vec![], annihilators: vec![(i - 1) as u8] }, &scalar::one());
        Ok(op)
    }

    pub fn hnn_generator(&self, kind: HnnKind, i: usize, j: usize) -> Result<FockOperator> {
        let e = self.eps().q();
        Ok(match kind {
            HnnKind::Mixed => {
                let mut op = self.creation(i)?.mul(&self.annihilation(j)?);
                if i == j {
                    op.axpy(&(-e * frac(1, 2)), &self.identity());
                }
                op
            }
            HnnKind::Upper => self.creation(i)?.mul(&self.creation(j)?),
            HnnKind::Lower => self.annihilation(i)?.mul(&self.annihilation(j)?).scale(&e),
        })
    }

    /// Basis states used as the certification family: all `2ⁿ` fermionic
    /// states, or all bosonic states of total degree `≤ d_check`.
    pub fn state_family(&self, d_check: u32) -> Vec<OccState> {
        match self.stats {
            Statistics::Fermionic => (0..1u64 << self.n)
                .map(|mask| OccState((0..self.n).map(|i| ((mask >> i) & 1) as u32).collect()))
                .collect(),
            Statistics::Bosonic => {
                let mut out = Vec::new();
                let mut cur = vec![0u32; self.n];
                fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<OccState>) {
                    if i == cur.len() {
                        out.push(OccState(cur.clone()));
                        return;
                    }
                    for k in 0..=left {
                        cur[i] = k;
                        rec(i + 1, left - k, cur, out);
                    }
                    cur[i] = 0;
                }
                rec(0, d_check, &mut cur, &mut out);
                out
            }
        }
    }
}

/// Image of `S_ab` under the pair-operator realization, 1-based indices.
fn realize_generator(space: &FockSpace, a: usize, b: usize) -> Result<FockOperator> {
    let n = space.n;
    let e = space.eps().q();
    match (a > n, b > n) {
        // A_ij = S_{i+n,j} = E^i_j
        (true, false) => space.hnn_generator(HnnKind::Mixed, a - n, b),
        // B_ij = S_{i+n,j+n} = E₀^{ij}
        (true, true) => space.hnn_generator(HnnKind::Upper, a - n, b - n),
        // S_ij = −ε C_ij = ε E^0_{ij}
        (false, false) => Ok(space.hnn_generator(HnnKind::Lower, a, b)?.scale(&e)),
        // S_{i,j+n} = −ε S_{j+n,i} = −ε A_ji
        (false, true) => Ok(space.hnn_generator(HnnKind::Mixed, b - n, a)?.scale(&-e)),
    }
}

/// Realization of the Lie algebra on the Fock space of matching statistics.
#[derive(Debug, Clone)]
pub struct FockRealization {
    space: FockSpace,
    images: Vec<FockOperator>,
}

impl FockRealization {
    pub fn new(ctx: &AlgebraContext, space: FockSpace) -> Result<Self> {
        if Statistics::for_eps(ctx.eps()) != space.stats || ctx.n() != space.n {
            return Err(Error::StatisticsMismatch);
        }
        let images = ctx.basis().iter().map(|&(a, b)| realize_generator(&space, a, b)).collect::<Result<_>>()?;
        Ok(FockRealization { space, images })
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn realize(&self, x: &LieElement) -> FockOperator {
        let mut out = self.space.zero();
        for (i, c) in x.terms() {
            out.axpy(c, &self.images[i]);
        }
        out
    }
}

impl Realization for FockRealization {
    type Op = FockOperator;
    fn generator(&self, idx: usize) -> FockOperator {
        self.images[idx].clone()
    }
    fn zero(&self) -> FockOperator {
        self.space.zero()
    }
    fn identity(&self) -> FockOperator {
        self.space.identity()
    }
    fn add(&self, a: &FockOperator, b: &FockOperator) -> FockOperator {
        a.add(b)
    }
    fn scale(&self, a: &FockOperator, s: &Q) -> FockOperator {
        a.scale(s)
    }
    fn mul(&self, a: &FockOperator, b: &FockOperator) -> FockOperator {
        a.mul(b)
    }
}

/// `realize(ctx, x)` on the Fock space `space`.
pub fn realize(ctx: &AlgebraContext, space: FockSpace, x: &LieElement) -> Result<FockOperator> {
    Ok(FockRealization::new(ctx, space)?.realize(x))
}

/// Result of comparing two operators on a state family.
#[derive(Debug, Clone, PartialEq)]
pub struct Equality {
    pub equal: bool,
    pub states_checked: usize,
    /// First state with nonzero `(A − B)|s⟩`, with that residual.
    pub residual: Option<(OccState, FockVector)>,
    /// Degree bound of the bosonic family (`None` for fermions).
    pub degree_bound: Option<u32>,
    /// Largest occupation shift of `A − B`.
    pub max_shift: i64,
}

impl Equality {
    pub fn witness(&self) -> Value {
        match &self.residual {
            Some((s, v)) => json!({ "state": s.to_json(), "residual": v.to_json(), "max_shift": self.max_shift }),
            None => json!(null),
        }
    }
}

/// `(A − B)|s⟩ = 0` for every `s` in `states`.
pub fn operator_equal(a: &FockOperator, b: &FockOperator, states: &[OccState]) -> Equality {
    let diff = a.sub(b);
    let residual = states
        .par_iter()
        .find_first(|s| !diff.apply_state(s).is_zero())
        .map(|s| (s.clone(), diff.apply_state(s)));
    let degree_bound = match a.stats {
        Statistics::Fermionic => None,
        Statistics::Bosonic => states.iter().map(OccState::degree).max(),
    };
    Equality { equal: residual.is_none(), states_checked: states.len(), residual, degree_bound, max_shift: diff.max_shift() }
}

fn scope_note(space: &FockSpace, states: &[OccState]) -> String {
    match space.stats {
        Statistics::Fermionic => format!("all {} fermionic states", states.len()),
        Statistics::Bosonic => format!(
            "{} bosonic states of degree ≤ {}",
            states.len(),
            states.iter().map(OccState::degree).max().unwrap_or(0)
        ),
    }
}

/// Ladder relations, homomorphism, block dictionary and parity for the
/// realization matching `ctx`.
pub fn verify_realization(ctx: &AlgebraContext, d_check: u32) -> Result<Vec<Verdict>> {
    let space = FockSpace::for_context(ctx);
    let rep = FockRealization::new(ctx, space)?;
    let states = space.state_family(d_check);
    let n = ctx.n();
    let mut out = Vec::new();

    let mut v = Verdict::new(
        "fock.ladder",
        "[b_i, b_j⁺]_ε = δ_ij, [b_i, b_j]_ε = 0, [b_i⁺, b_j⁺]_ε = 0",
    );
    for i in 1..=n {
        for j in 1..=n {
            let (bi, bj) = (space.annihilation(i)?, space.annihilation(j)?);
            let (ci, cj) = (space.creation(i)?, space.creation(j)?);
            let want = if i == j { space.identity() } else { space.zero() };
            for (lhs, rhs) in [(bi.eps_bracket(&cj), want), (bi.eps_bracket(&bj), space.zero()), (ci.eps_bracket(&cj), space.zero())] {
                let eq = operator_equal(&lhs, &rhs, &states);
                v.case(eq.equal && lhs == rhs, || json!({ "ij": [i, j], "witness": eq.witness() }));
            }
        }
    }
    out.push(v.note(scope_note(&space, &states)).note("the right side of [b_i,b_j]_ε and [b_i⁺,b_j⁺]_ε is taken as 0"));

    let mut v = Verdict::new("fock.homomorphism", "realize([x, y]) = [realize(x), realize(y)] on all basis pairs");
    let d = ctx.dim();
    let table = ctx.structure();
    let results: Vec<(usize, usize, bool, Value)> = (0..d * d)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / d, k % d);
            let lhs = rep.realize(&table[i][j]);
            let rhs = rep.images[i].commutator(&rep.images[j]);
            let eq = operator_equal(&lhs, &rhs, &states);
            (i, j, eq.equal && lhs == rhs, eq.witness())
        })
        .collect();
    for (i, j, ok, w) in results {
        v.case(ok, || json!({ "pair": [ctx.pair(i), ctx.pair(j)], "witness": w }));
    }
    out.push(v.note(scope_note(&space, &states)));

    let mut v = Verdict::new("fock.dictionary", "A_ij = E^i_j, B_ij = E₀^{ij}, C_ij = -E^0_{ij}");
    for i in 1..=n {
        for j in 1..=n {
            use crate::lie::Block;
            let pairs = [
                (Block::A, space.hnn_generator(HnnKind::Mixed, i, j)?),
                (Block::B, space.hnn_generator(HnnKind::Upper, i, j)?),
                (Block::C, space.hnn_generator(HnnKind::Lower, i, j)?.scale(&-scalar::one())),
            ];
            for (family, want) in pairs {
                let got = rep.realize(&ctx.block(family, i, j));
                v.case(got == want, || json!({ "block": format!("{family:?}"), "ij": [i, j] }));
            }
        }
    }
    out.push(v);

    if space.stats == Statistics::Fermionic {
        let mut v = Verdict::new("fock.parity", "every realized generator preserves occupation parity");
        for (k, img) in rep.images.iter().enumerate() {
            v.case(img.grades().iter().all(|g| g % 2 == 0), || json!({ "generator": ctx.pair(k) }));
        }
        out.push(v);
    }
    Ok(out)
}
