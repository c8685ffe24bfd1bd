//! Acceptance criteria. Every library result is compared with an oracle built
//! here from first principles: defining matrices from the metric, Fock
//! operators as explicit ladder matrices, and numeric evaluation of the
//! K-matrix at rational points.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use annihilator_core::hnn::{self, hnn_generators, k_base_in, k_step_in, KTensorSet};
use annihilator_core::kmatrix::{self, CommPoly, Symbol};
use annihilator_core::linalg::QMatrix;
use annihilator_core::scalar::{frac, q};
use annihilator_core::sympoly::{
    self, adjoint_sym2_matrix, casimir_on_sym2, identity_components, spectral_projectors, target_eigenvalue,
    verify_projector_suite, CasimirNormalization, Realization, SymPoly2, UPoly,
};
use annihilator_core::fock::{FockSpace, OccState, Statistics};
use annihilator_core::{AlgebraContext, Block, Epsilon, LieElement, Verdict, Q};
use num_traits::{One, Zero};

const SO: Epsilon = Epsilon::Orthogonal;
const SP: Epsilon = Epsilon::Symplectic;

fn ctx(n: usize, e: Epsilon) -> AlgebraContext {
    AlgebraContext::new(n, e).unwrap()
}

fn report(id: u32, name: &str, start: Instant, bound: Duration, failures: &[String]) {
    let elapsed = start.elapsed();
    let within = elapsed <= bound;
    let ok = failures.is_empty() && within;
    println!(
        "criterion {id} {name}: {} ({:.2?}, bound {:?})",
        if ok { "PASS" } else { "FAIL" },
        elapsed,
        bound
    );
    for f in failures.iter().take(10) {
        println!("    {f}");
    }
    assert!(failures.is_empty(), "criterion {id} {name}: {} failure(s), first: {}", failures.len(), failures[0]);
    assert!(within, "criterion {id} {name}: {elapsed:?} exceeds {bound:?}");
}

fn require(failures: &mut Vec<String>, verdicts: &[Verdict], label: &str) {
    for v in verdicts {
        if !v.passed {
            failures.push(format!("{label}: {} failed, witness {:?}", v.id, v.witness));
        }
    }
}

// ---------------------------------------------------------------- oracles

fn elementary(s: usize, a: usize, b: usize) -> QMatrix {
    let mut m = QMatrix::zeros(s, s);
    m.set(a - 1, b - 1, Q::one());
    m
}

/// `G` with `G_ab = δ_{a,b+n} + ε δ_{a+n,b}`.
fn metric(n: usize, e: Epsilon) -> QMatrix {
    let s = 2 * n;
    let mut g = QMatrix::zeros(s, s);
    for i in 0..n {
        g.set(i + n, i, Q::one());
        g.set(i, i + n, e.q());
    }
    g
}

/// Defining matrix of `S_ab`, written as `ε G (E_ab − ε E_ba)`.
fn defining(n: usize, e: Epsilon, a: usize, b: usize) -> QMatrix {
    let s = 2 * n;
    let g = metric(n, e);
    g.mul(&elementary(s, a, b).sub(&elementary(s, b, a).scale(&e.q()))).scale(&e.q())
}

fn element_matrix(c: &AlgebraContext, x: &LieElement) -> QMatrix {
    let s = c.size();
    let mut m = QMatrix::zeros(s, s);
    for (i, coef) in x.terms() {
        let (a, b) = c.pair(i);
        m = m.axpy(coef, &defining(c.n(), c.eps(), a, b));
    }
    m
}

fn gval(n: usize, e: Epsilon, a: usize, b: usize) -> Q {
    metric(n, e).get(a - 1, b - 1)
}

/// Explicit creation/annihilation matrices on occupation states, truncated to
/// total degree `≤ max_degree` for bosons.
struct Ladder {
    fermionic: bool,
    states: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl Ladder {
    fn new(n: usize, fermionic: bool, max_degree: u32) -> Self {
        let cap = if fermionic { 1 } else { max_degree };
        let mut states = Vec::new();
        let mut cur = vec![0u32; n];
        loop {
            if cur.iter().sum::<u32>() <= max_degree {
                states.push(cur.clone());
            }
            let mut k = 0;
            loop {
                if k == n {
                    let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
                    return Ladder { fermionic, states, index };
                }
                if cur[k] < cap {
                    cur[k] += 1;
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
        }
    }

    fn dim(&self) -> usize {
        self.states.len()
    }

    fn op(&self, i: usize, create: bool) -> QMatrix {
        let d = self.dim();
        let mut m = QMatrix::zeros(d, d);
        for (col, s) in self.states.iter().enumerate() {
            let mut t = s.clone();
            let coef = if self.fermionic {
                if (s[i] == 1) == create {
                    continue;
                }
                t[i] = if create { 1 } else { 0 };
                let before: u32 = s[..i].iter().sum();
                if before % 2 == 0 {
                    Q::one()
                } else {
                    -Q::one()
                }
            } else if create {
                t[i] += 1;
                Q::one()
            } else {
                if s[i] == 0 {
                    continue;
                }
                t[i] -= 1;
                q(s[i] as i64)
            };
            if let Some(&row) = self.index.get(&t) {
                m.set(row, col, coef);
            }
        }
        m
    }

    fn identity(&self) -> QMatrix {
        QMatrix::identity(self.dim())
    }
}

/// Generator images on the ladder matrices:
/// `S_{i+n,j} = b_i⁺b_j − (ε/2)δ_ij`, `S_{i+n,j+n} = b_i⁺b_j⁺`, `S_ij = b_i b_j`,
/// `S_{i,j+n} = −ε S_{j+n,i}`.
struct MatrixRealization {
    images: Vec<QMatrix>,
    size: usize,
}

impl MatrixRealization {
    fn fock(c: &AlgebraContext, ladder: &Ladder) -> Self {
        let n = c.n();
        let e = c.eps().q();
        let cre: Vec<QMatrix> = (0..n).map(|i| ladder.op(i, true)).collect();
        let ann: Vec<QMatrix> = (0..n).map(|i| ladder.op(i, false)).collect();
        let id = ladder.identity();
        let mixed = |i: usize, j: usize| {
            let m = cre[i].mul(&ann[j]);
            if i == j {
                m.axpy(&(-e.clone() * frac(1, 2)), &id)
            } else {
                m
            }
        };
        let images = c
            .basis()
            .iter()
            .map(|&(a, b)| match (a > n, b > n) {
                (true, false) => mixed(a - n - 1, b - 1),
                (true, true) => cre[a - n - 1].mul(&cre[b - n - 1]),
                (false, false) => ann[a - 1].mul(&ann[b - 1]),
                (false, true) => mixed(b - n - 1, a - 1).scale(&-e.clone()),
            })
            .collect();
        MatrixRealization { images, size: ladder.dim() }
    }

    fn defining(c: &AlgebraContext) -> Self {
        let images = c.basis().iter().map(|&(a, b)| defining(c.n(), c.eps(), a, b)).collect();
        MatrixRealization { images, size: c.size() }
    }
}

impl Realization for MatrixRealization {
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

/// Columns of `m` for the certified states (degree ≤ `d`).
fn restricted_zero(m: &QMatrix, ladder: &Ladder, d: u32) -> bool {
    let t = m.transpose();
    ladder.states.iter().enumerate().all(|(col, s)| s.iter().sum::<u32>() > d || t.row(col).is_empty())
}

fn restricted_scalar(m: &QMatrix, ladder: &Ladder, d: u32, c: &Q) -> bool {
    restricted_zero(&m.sub(&ladder.identity().scale(c)), ladder, d)
}

// ---------------------------------------------------------------- 1

#[test]
fn criterion_1_commutator_closure() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (n, e) in [(2, SO), (3, SO), (1, SP), (2, SP), (3, SP)] {
        let c = ctx(n, e);
        let s = 2 * n;
        let m: Vec<Vec<QMatrix>> = (1..=s).map(|a| (1..=s).map(|b| defining(n, e, a, b)).collect()).collect();
        // the bracket formula holds for the oracle matrices on every index quadruple
        for a in 1..=s {
            for b in 1..=s {
                for cc in 1..=s {
                    for d in 1..=s {
                        let lhs = m[a - 1][b - 1].commutator(&m[cc - 1][d - 1]);
                        let rhs = m[a - 1][d - 1]
                            .scale(&gval(n, e, cc, b))
                            .add(&m[b - 1][cc - 1].scale(&gval(n, e, d, a)))
                            .sub(&m[b - 1][d - 1].scale(&gval(n, e, a, cc)))
                            .sub(&m[a - 1][cc - 1].scale(&gval(n, e, b, d)));
                        if lhs != rhs {
                            failures.push(format!("{e}({s}) oracle bracket at {:?}", (a, b, cc, d)));
                        }
                    }
                }
            }
        }
        // library structure constants against the oracle commutator, every basis pair
        for i in 0..c.dim() {
            for j in 0..c.dim() {
                let xi = c.basis_element(i);
                let xj = c.basis_element(j);
                let br = c.commutator(&xi, &xj).unwrap();
                let want = element_matrix(&c, &xi).commutator(&element_matrix(&c, &xj));
                if element_matrix(&c, &br) != want {
                    failures.push(format!("{e}({s}) library bracket of {:?} and {:?}", c.pair(i), c.pair(j)));
                }
            }
        }
        require(&mut failures, &c.verify_closure(), &format!("{e}({s})"));
    }
    report(1, "commutator closure", start, Duration::from_secs(10), &failures);
}

// ---------------------------------------------------------------- 2

/// `tr(ad x ad y)` computed from oracle matrices, coordinates taken through the
/// trace pairing.
fn ad_trace_oracle(c: &AlgebraContext) -> QMatrix {
    let d = c.dim();
    let mats: Vec<QMatrix> = (0..d).map(|i| element_matrix(c, &c.basis_element(i))).collect();
    let gram = QMatrix::from_fn(d, d, |i, j| mats[i].mul(&mats[j]).trace());
    let ginv = gram.inverse().expect("trace form nondegenerate");
    let coords = |z: &QMatrix| -> Vec<Q> {
        let t: Vec<Q> = mats.iter().map(|m| m.mul(z).trace()).collect();
        ginv.mul_vec(&t)
    };
    // ad matrices: column k holds the coordinates of [x, e_k]
    let ad: Vec<QMatrix> = mats
        .iter()
        .map(|x| QMatrix::from_columns(d, &mats.iter().map(|ek| coords(&x.commutator(ek))).collect::<Vec<_>>()))
        .collect();
    QMatrix::from_fn(d, d, |i, j| ad[i].mul(&ad[j]).trace())
}

#[test]
fn criterion_2_killing_form() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 1..=3 {
        for e in [SO, SP] {
            let c = ctx(n, e);
            let d = c.dim();
            let mats: Vec<QMatrix> = (0..d).map(|i| element_matrix(&c, &c.basis_element(i))).collect();
            // tr(ad x ad y) = (N − 2ε) tr(xy) on the defining representation
            let scale = q(2 * n as i64 - 2 * e.value());
            let ad_oracle = if n == 1 && e == SO { QMatrix::zeros(d, d) } else { ad_trace_oracle(&c) };
            let mut mismatched_8n = 0;
            for i in 0..d {
                for j in 0..d {
                    let (x, y) = (c.basis_element(i), c.basis_element(j));
                    let oracle = mats[i].mul(&mats[j]).trace() * &scale;
                    if ad_oracle.get(i, j) != oracle {
                        failures.push(format!("{e}({}) trace identity at {:?}", 2 * n, (c.pair(i), c.pair(j))));
                    }
                    let closed = c.killing_form(&x, &y).unwrap();
                    if closed != oracle {
                        failures.push(format!("{e}({}) closed form at {:?}", 2 * n, (c.pair(i), c.pair(j))));
                    }
                    if c.killing_form_8n(&x, &y).unwrap() != oracle {
                        mismatched_8n += 1;
                    }
                }
            }
            if mismatched_8n > 0 {
                println!("    {e}({}): 8n normalization disagrees with the trace on {mismatched_8n} pairs", 2 * n);
            }
            if !(n == 1 && e == SO) {
                // duals built from the traced form pair to δ under it
                for i in 0..d {
                    let dual = element_matrix(&c, &c.dual_of(&c.basis_element(i)));
                    for j in 0..d {
                        let b = mats[j].mul(&dual).trace() * &scale;
                        let want = if i == j { Q::one() } else { Q::zero() };
                        if b != want {
                            failures.push(format!("{e}({}) dual pairing {:?}", 2 * n, (c.pair(i), c.pair(j))));
                        }
                    }
                }
                require(&mut failures, &c.verify_killing(), &format!("{e}({})", 2 * n));
            }
        }
    }
    report(2, "Killing form", start, Duration::from_secs(30), &failures);
}

// ---------------------------------------------------------------- 3

#[test]
fn criterion_3_projector_suite() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for e in [SO, SP] {
        let n = 2;
        let c = ctx(n, e);
        let d = c.dim();
        let big_n = 2 * n;
        let cas = casimir_on_sym2(&c, CasimirNormalization::Metric, 10_000).unwrap();
        let projs = spectral_projectors(&cas.matrix).unwrap();
        let size = cas.matrix.rows();
        let id = QMatrix::identity(size);
        let total = projs.iter().fold(QMatrix::zeros(size, size), |acc, (_, p)| acc.add(p));
        if total != id {
            failures.push(format!("{e}: projectors do not resolve the identity"));
        }
        for (ci, pi) in &projs {
            if cas.matrix.mul(pi) != pi.scale(ci) {
                failures.push(format!("{e}: projector at {ci} is not an eigenprojector"));
            }
            for (cj, pj) in &projs {
                let want = if ci == cj { pi.clone() } else { QMatrix::zeros(size, size) };
                if pi.mul(pj) != want {
                    failures.push(format!("{e}: P({ci}) P({cj}) wrong"));
                }
            }
            for k in 0..d {
                let ad = adjoint_sym2_matrix(&c, &c.basis_element(k));
                if !pi.commutator(&ad).is_zero() {
                    failures.push(format!("{e}: P({ci}) not equivariant under {:?}", c.pair(k)));
                }
            }
        }
        let target = target_eigenvalue(&c, &cas).unwrap();
        let p = &projs.iter().find(|(x, _)| *x == target).expect("target eigenvalue present").1;
        let want_rank = match e {
            SO => (big_n - 1) * (big_n + 2) / 2,
            SP => (big_n + 1) * (big_n - 2) / 2,
        };
        if target != q(8 * n as i64) {
            failures.push(format!("{e}: target eigenvalue {target}, want ½C = 4n"));
        }
        if p.rank() != want_rank {
            failures.push(format!("{e}: target rank {} != {want_rank}", p.rank()));
        }
        // closed form of the projection on every index quadruple
        let ecomp = identity_components(&c).unwrap();
        let denom = q(2 * n as i64 - 2 * e.value());
        let eps = e.q();
        for a in 1..=big_n {
            for b in 1..=big_n {
                for cc in 1..=big_n {
                    for dd in 1..=big_n {
                        let prod = SymPoly2::product(&c.generator(a, b).unwrap(), &c.generator(cc, dd).unwrap());
                        let got = SymPoly2::from_vector(d, &p.mul_vec(&prod.to_vector(d)));
                        let mut want = SymPoly2::zero();
                        want.axpy(&gval(n, e, a, cc), ecomp.get(b, dd));
                        want.axpy(&gval(n, e, b, dd), ecomp.get(a, cc));
                        want.axpy(&(-eps.clone() * gval(n, e, a, dd)), ecomp.get(b, cc));
                        want.axpy(&(-eps.clone() * gval(n, e, b, cc)), ecomp.get(a, dd));
                        let want = want.scaled(&(-denom.recip()));
                        if got != want {
                            failures.push(format!("{e}: closed form at {:?}", (a, b, cc, dd)));
                        }
                    }
                }
            }
        }
        println!("    {e}(4): target Casimir eigenvalue {target} (½C = {}), rank {}", &target * frac(1, 2), p.rank());
        require(&mut failures, &verify_projector_suite(&c, 10_000).unwrap(), &format!("{e}(4)"));
    }
    report(3, "projector suite", start, Duration::from_secs(120), &failures);
}

// ---------------------------------------------------------------- 4

type UMat = Vec<Vec<UPoly>>;

fn u_block(c: &AlgebraContext, f: Block, transpose: bool) -> UMat {
    let n = c.n();
    (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let (r, s) = if transpose { (j, i) } else { (i, j) };
                    UPoly::from_element(&c.block(f, r, s))
                })
                .collect()
        })
        .collect()
}

fn u_prod(x: &UMat, y: &UMat, i: usize, j: usize) -> UPoly {
    (0..x.len()).fold(UPoly::zero(), |acc, k| acc + x[i][k].mul(&y[k][j]))
}

/// The three ordered families, rebuilt from the block generators:
/// `X_ij + ε X_ji` for `X = AB − BAᵗ`, `CA − AᵗC`, and
/// `(A² − BC)_ij + ((Aᵗ)² − CB)_ji`.
fn ordered_families(c: &AlgebraContext) -> Vec<(usize, usize, usize, UPoly)> {
    let n = c.n();
    let e = c.eps().q();
    let (a, b, cm, at) = (u_block(c, Block::A, false), u_block(c, Block::B, false), u_block(c, Block::C, false), u_block(c, Block::A, true));
    let x1 = |i, j| u_prod(&a, &b, i, j) - u_prod(&b, &at, i, j);
    let x2 = |i, j| u_prod(&cm, &a, i, j) - u_prod(&at, &cm, i, j);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            out.push((1, i, j, x1(i, j) + x1(j, i).scaled(&e)));
            out.push((2, i, j, x2(i, j) + x2(j, i).scaled(&e)));
            let l = u_prod(&a, &a, i, j) - u_prod(&b, &cm, i, j) + u_prod(&at, &at, j, i) - u_prod(&cm, &b, j, i);
            out.push((3, i, j, l));
        }
    }
    out
}

#[test]
fn criterion_4_annihilators() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let cases = [(2, SO, 0), (3, SO, 0), (4, SO, 0), (2, SP, 6), (3, SP, 6)];
    for (n, e, dcheck) in cases {
        let c = ctx(n, e);
        let fermionic = e == SO;
        // words have length 2 and move the degree by at most 2 each
        let ladder = Ladder::new(n, fermionic, if fermionic { n as u32 } else { dcheck + 4 });
        let bound = if fermionic { n as u32 } else { dcheck };
        let r = MatrixRealization::fock(&c, &ladder);
        let def = MatrixRealization::defining(&c);
        // (2n − 1)/2 for fermions; the bosonic value is −(2n + 1)/2
        let diag = e.q() * frac(2 * n as i64 - e.value(), 2);
        let mut nonzero_control = [false; 3];
        for (family, i, j, poly) in ordered_families(&c) {
            let op = poly.evaluate(&r);
            let ok = if family == 3 && i == j {
                restricted_scalar(&op, &ladder, bound, &diag)
            } else {
                restricted_zero(&op, &ladder, bound)
            };
            if !ok {
                failures.push(format!("{e}({}) family {family} at ({},{}) not annihilated", 2 * n, i + 1, j + 1));
            }
            if !poly.evaluate(&def).is_zero() {
                nonzero_control[family - 1] = true;
            }
        }
        if nonzero_control != [true; 3] {
            failures.push(format!("{e}({}) defining control vanished for some family: {nonzero_control:?}", 2 * n));
        }
        println!(
            "    {e}({}): {} states checked, trace family diagonal = {}",
            2 * n,
            ladder.states.iter().filter(|s| s.iter().sum::<u32>() <= bound).count(),
            diag
        );
        require(&mut failures, &hnn::verify_annihilators(&c, dcheck).unwrap(), &format!("{e}({})", 2 * n));
    }
    report(4, "annihilators", start, Duration::from_secs(120), &failures);
}

// ---------------------------------------------------------------- 5, 6

fn k_sequence_oracle(c: &AlgebraContext, r: &MatrixRealization, m_max: usize) -> Vec<KTensorSet<QMatrix>> {
    let g = hnn_generators(r, c);
    let (k0, k1) = k_base_in(r, &g);
    let mut seq = vec![k0, k1];
    while seq.len() <= m_max {
        let next = k_step_in(r, &g, c.eps().value(), seq.last().unwrap());
        seq.push(next);
    }
    seq
}

/// Library operator against the oracle matrix on the certified states.
fn agrees(lib: &annihilator_core::fock::FockOperator, m: &QMatrix, ladder: &Ladder, d: u32) -> bool {
    ladder.states.iter().enumerate().filter(|(_, s)| s.iter().sum::<u32>() <= d).all(|(col, s)| {
        let v = lib.apply_state(&OccState(s.clone()));
        let mut dense = vec![Q::zero(); ladder.dim()];
        for (t, x) in v.terms() {
            match ladder.index.get(&t.0) {
                Some(&row) => dense[row] = x.clone(),
                None => return false,
            }
        }
        (0..ladder.dim()).all(|row| m.get(row, col) == dense[row])
    })
}

#[test]
fn criterion_5_kinematical_constraints() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (n, scalar) in [(2, frac(3, 4)), (3, frac(5, 4)), (4, frac(7, 4))] {
        let c = ctx(n, SO);
        let ladder = Ladder::new(n, true, n as u32);
        let r = MatrixRealization::fock(&c, &ladder);
        let k2 = &k_sequence_oracle(&c, &r, 2)[2];
        let lib = &hnn::k_sequence(&FockSpace::new(n, Statistics::Fermionic).unwrap(), 2).unwrap()[2];
        for a in 0..n {
            for b in 0..n {
                let want = if a == b { scalar.clone() } else { Q::zero() };
                if !restricted_scalar(&k2.mixed[a][b], &ladder, n as u32, &want) {
                    failures.push(format!("so({}) ^2K^{}_{} != {want} δ", 2 * n, a + 1, b + 1));
                }
                if !k2.upper[a][b].is_zero() || !k2.lower[a][b].is_zero() {
                    failures.push(format!("so({}) ^2K upper/lower ({},{}) nonzero", 2 * n, a + 1, b + 1));
                }
                for (l, m) in [(&lib.mixed, &k2.mixed), (&lib.upper, &k2.upper), (&lib.lower, &k2.lower)] {
                    if !agrees(&l[a][b], &m[a][b], &ladder, n as u32) {
                        failures.push(format!("so({}) library ^2K differs from oracle at ({},{})", 2 * n, a + 1, b + 1));
                    }
                }
            }
        }
        println!("    so({}): ^2K^α_β = {scalar} δ on all {} states", 2 * n, ladder.dim());
        require(&mut failures, &hnn::verify_kinematical_constraints(n).unwrap(), &format!("so({})", 2 * n));
    }
    report(5, "kinematical constraints", start, Duration::from_secs(60), &failures);
}

#[test]
fn criterion_6_hnn_parity() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let m_max = 4;
    let dcheck = 6u32;
    for n in 1..=3 {
        for e in [SO, SP] {
            if n == 1 && e == SO {
                continue;
            }
            let c = ctx(n, e);
            let fermionic = e == SO;
            let ladder = Ladder::new(n, fermionic, if fermionic { n as u32 } else { dcheck + 2 * m_max as u32 + 2 });
            let bound = if fermionic { n as u32 } else { dcheck };
            let r = MatrixRealization::fock(&c, &ladder);
            let seq = k_sequence_oracle(&c, &r, m_max);
            let space = FockSpace::for_context(&c);
            let lib = hnn::k_sequence(&space, m_max).unwrap();
            for k in &seq[1..] {
                let sign = if k.m % 2 == 0 { e.q() } else { -e.q() };
                for a in 0..n {
                    for b in 0..n {
                        for (name, t) in [("upper", &k.upper), ("lower", &k.lower)] {
                            if !restricted_zero(&t[a][b].sub(&t[b][a].scale(&sign)), &ladder, bound) {
                                failures.push(format!("{e}({}) m={} {name} ({},{}) parity", 2 * n, k.m, a + 1, b + 1));
                            }
                        }
                        let l = &lib[k.m];
                        for (x, y) in [(&l.mixed, &k.mixed), (&l.upper, &k.upper), (&l.lower, &k.lower)] {
                            if !agrees(&x[a][b], &y[a][b], &ladder, bound) {
                                failures.push(format!("{e}({}) m={} library differs at ({},{})", 2 * n, k.m, a + 1, b + 1));
                            }
                        }
                    }
                }
            }
            require(&mut failures, &hnn::verify_recursion(&space, m_max, dcheck).unwrap(), &format!("{e}({})", 2 * n));
        }
    }
    report(6, "HNN recursion parity", start, Duration::from_secs(300), &failures);
}

// ---------------------------------------------------------------- 7

/// Deterministic rational point; `B` and `C` obey the ε symmetry.
fn point(n: usize, e: Epsilon, seed: i64) -> impl Fn(Block, usize, usize) -> Q {
    move |f: Block, i: usize, j: usize| {
        let fam = match f {
            Block::A => 1,
            Block::B => 2,
            Block::C => 3,
        };
        let raw = |i: usize, j: usize| frac((seed * 7 + fam * 13 + (i as i64) * 5 + (j as i64) * 11).rem_euclid(17) - 8, 1 + fam);
        match f {
            Block::A => raw(i, j),
            _ if i < j => raw(i, j),
            _ if i == j => {
                if e == SO {
                    Q::zero()
                } else {
                    raw(i, i)
                }
            }
            _ => -e.q() * raw(j, i),
        }
        .clone()
            + Q::zero() * q(n as i64)
    }
}

fn numeric_k1(n: usize, val: &impl Fn(Block, usize, usize) -> Q) -> QMatrix {
    QMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let (i, j) = (r % n + 1, c % n + 1);
        match (r < n, c < n) {
            (true, true) => val(Block::A, i, j),
            (true, false) => val(Block::B, i, j),
            (false, true) => -val(Block::C, i, j),
            (false, false) => -val(Block::A, j, i),
        }
    })
}

fn sub_block(m: &QMatrix, n: usize, r0: usize, c0: usize) -> QMatrix {
    QMatrix::from_fn(n, n, |i, j| m.get(r0 + i, c0 + j))
}

#[test]
fn criterion_7_kmatrix_proposition() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let kmax = 5;
    for n in 1..=3 {
        for e in [SO, SP] {
            let c = ctx(n, e);
            let k1 = kmatrix::build_k1(&c);
            for seed in 0..3 {
                let val = point(n, e, seed);
                let num = numeric_k1(n, &val);
                let eval = |p: &CommPoly| p.evaluate(|s: Symbol| val(s.family, s.i as usize, s.j as usize));
                let mut km_num = num.clone();
                for m in 1..=kmax {
                    if m > 1 {
                        km_num = km_num.mul(&num);
                    }
                    let sym = kmatrix::k_power(&k1, m).unwrap();
                    for a in 1..=2 * n {
                        for b in 1..=2 * n {
                            if eval(sym.get(a, b)) != km_num.get(a - 1, b - 1) {
                                failures.push(format!("{e}({}) K^{m} entry ({a},{b}) disagrees with numeric power", 2 * n));
                            }
                        }
                    }
                    let sgn = if m % 2 == 0 { Q::one() } else { -Q::one() };
                    let a_m = sub_block(&km_num, n, 0, 0);
                    let b_m = sub_block(&km_num, n, 0, n);
                    let c_m = sub_block(&km_num, n, n, 0).scale(&-Q::one());
                    let d_m = sub_block(&km_num, n, n, n);
                    let s = sgn.clone() * e.q();
                    if b_m != b_m.transpose().scale(&s) || c_m != c_m.transpose().scale(&s) {
                        failures.push(format!("{e}({}) m={m}: B/C parity fails numerically", 2 * n));
                    }
                    if d_m != a_m.transpose().scale(&sgn) {
                        failures.push(format!("{e}({}) m={m}: D_m != (−1)^m A_mᵗ", 2 * n));
                    }
                }
                // m = 2 blocks
                let (a1, b1, c1) = (
                    sub_block(&num, n, 0, 0),
                    sub_block(&num, n, 0, n),
                    sub_block(&num, n, n, 0).scale(&-Q::one()),
                );
                let k2 = num.mul(&num);
                let a1t = a1.transpose();
                let checks = [
                    (sub_block(&k2, n, 0, 0), a1.mul(&a1).sub(&b1.mul(&c1))),
                    (sub_block(&k2, n, 0, n), a1.mul(&b1).sub(&b1.mul(&a1t))),
                    (sub_block(&k2, n, n, 0).scale(&-Q::one()), c1.mul(&a1).sub(&a1t.mul(&c1))),
                    (sub_block(&k2, n, n, n), a1t.mul(&a1t).sub(&c1.mul(&b1))),
                ];
                for (k, (got, want)) in checks.iter().enumerate() {
                    if got != want {
                        failures.push(format!("{e}({}) m=2 block {k} wrong", 2 * n));
                    }
                }
                // K₁² − (I₂/2n) Id = g⁻¹E, with E evaluated through the generator values
                let gen_val = |a: usize, b: usize| -> Q {
                    match (a > n, b > n) {
                        (true, false) => val(Block::A, a - n, b),
                        (true, true) => val(Block::B, a - n, b - n),
                        (false, false) => -e.q() * val(Block::C, a, b),
                        (false, true) => -e.q() * val(Block::A, b - n, a),
                    }
                };
                let basis_val: Vec<Q> = (0..c.dim()).map(|i| {
                    let (a, b) = c.pair(i);
                    gen_val(a, b)
                }).collect();
                let eval2 = |p: &SymPoly2| -> Q {
                    p.terms().fold(Q::zero(), |acc, ((i, j), coef)| acc + coef * &basis_val[i] * &basis_val[j])
                };
                let ecomp = identity_components(&c).unwrap();
                let i2 = eval2(&sympoly::invariant_i2(&c));
                let s = 2 * n;
                let ginv = metric(n, e).scale(&e.q());
                let emat = QMatrix::from_fn(s, s, |a, b| eval2(ecomp.get(a + 1, b + 1)));
                let lhs = k2.sub(&QMatrix::identity(s).scale(&(i2.clone() / q(s as i64))));
                if lhs != ginv.mul(&emat) {
                    failures.push(format!("{e}({s}) K₁² − I₂/2n ≠ g⁻¹E at seed {seed}"));
                }
                if k2.trace() != i2 {
                    failures.push(format!("{e}({s}) tr K₁² ≠ I₂ at seed {seed}"));
                }
            }
            require(&mut failures, &kmatrix::verify_proposition(&c, kmax).unwrap(), &format!("{e}({})", 2 * n));
            require(&mut failures, &kmatrix::verify_equivalence(&c).unwrap(), &format!("{e}({})", 2 * n));
        }
    }
    println!("    D-block sign: D_m = (−1)^m A_mᵗ holds; the uniform −A_mᵗ holds only for odd m");
    report(7, "K-matrix proposition", start, Duration::from_secs(120), &failures);
}

// ---------------------------------------------------------------- 8

fn kron(x: &QMatrix, y: &QMatrix) -> QMatrix {
    let (xr, yr) = (x.rows(), y.rows());
    QMatrix::from_fn(xr * yr, xr * yr, |r, c| x.get(r / yr, c / yr) * y.get(r % yr, c % yr))
}

#[test]
fn criterion_8_pairing_operator() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let (n, e) = (2, SO);
    let c = ctx(n, e);
    let d = c.dim();
    let ladder = Ladder::new(n, true, n as u32);
    let rho = MatrixRealization::fock(&c, &ladder);
    let mats: Vec<QMatrix> = (0..d).map(|i| element_matrix(&c, &c.basis_element(i))).collect();
    let scale = q(2 * n as i64 - 2 * e.value());
    let gram = QMatrix::from_fn(d, d, |i, j| mats[i].mul(&mats[j]).trace() * &scale);
    let ginv = gram.inverse().unwrap();
    let dual = |i: usize| (0..d).fold(QMatrix::zeros(4, 4), |acc, j| acc.axpy(&ginv.get(j, i), &mats[j]));
    let o = (0..d).fold(QMatrix::zeros(16, 16), |acc, i| acc.add(&kron(&rho.images[i], &dual(i))));
    let id = QMatrix::identity(16);
    let o2 = o.mul(&o);
    // O + a·Id = 0 has no solution: O is not scalar
    let diag0 = o.get(0, 0);
    if o == id.scale(&diag0) {
        failures.push("O is a multiple of the identity".into());
    }
    // solve O² + aO + b = 0 from two entries, then check all of them
    let cols: Vec<(usize, usize)> = (0..16).flat_map(|r| (0..16).map(move |c| (r, c))).collect();
    let off = cols.iter().find(|&&(r, cc)| r != cc && !o.get(r, cc).is_zero()).copied().unwrap();
    let a = -o2.get(off.0, off.1) / o.get(off.0, off.1);
    let b = -(o2.get(0, 0) + &a * o.get(0, 0));
    let rel = o2.add(&o.scale(&a)).add(&id.scale(&b));
    if !rel.is_zero() {
        failures.push("O² + aO + b·Id ≠ 0".into());
    }
    for i in 0..d {
        let gen = kron(&rho.images[i], &QMatrix::identity(4)).add(&kron(&QMatrix::identity(4), &mats[i]));
        if !gen.commutator(&o).is_zero() {
            failures.push(format!("O not equivariant under {:?}", c.pair(i)));
        }
    }
    let lib = kmatrix::pairing_relation(&c).unwrap();
    if lib.a != a || lib.b != b {
        failures.push(format!("library relation ({}, {}) vs oracle ({a}, {b})", lib.a, lib.b));
    }
    println!("    so(4): O² + ({a})O + ({b}) = 0");
    require(&mut failures, &kmatrix::verify_pairing(&c).unwrap(), "so(4)");
    report(8, "pairing operator", start, Duration::from_secs(60), &failures);
}

// ---------------------------------------------------------------- 9

#[test]
fn criterion_9_structural_counts() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 1..=4 {
        let big_n = 2 * n;
        for e in [SO, SP] {
            let c = ctx(n, e);
            let (adj, other) = match e {
                SO => (big_n * (big_n - 1) / 2, big_n * (big_n + 1) / 2),
                SP => (big_n * (big_n + 1) / 2, big_n * (big_n - 1) / 2),
            };
            let basis = match e {
                SO => n * (2 * n - 1),
                SP => n * (2 * n + 1),
            };
            if c.dim() != basis || basis != adj {
                failures.push(format!("{e}({big_n}) basis dimension {}", c.dim()));
            }
            let k1 = kmatrix::entry_count(&c, 1).unwrap();
            if k1.distinct != adj || k1.rank != adj {
                failures.push(format!("{e}({big_n}) K₁ entries {k1:?}"));
            }
            let bn = big_n as i64;
            let component = match e {
                SP => (bn + 1) * (bn - 2) / 2,
                SO => (bn - 1) * (bn + 2) / 2,
            };
            if 1 + component != other as i64 {
                failures.push(format!("{e}({big_n}) dimension arithmetic"));
            }
            let k2 = kmatrix::entry_count(&c, 2).unwrap();
            if n == 1 && e == SO {
                // abelian so(2): K₁² = A₁₁² Id
                println!("    so(2): K₁² has {} independent entry (abelian, outside the count)", k2.rank);
                continue;
            }
            if k2.distinct != other || k2.rank != other {
                failures.push(format!("{e}({big_n}) K₁² entries {k2:?}, want {other}"));
            }
        }
    }
    if !kmatrix::dimension_arithmetic(4).passed {
        failures.push("library dimension arithmetic".into());
    }
    report(9, "structural counts", start, Duration::from_secs(5), &failures);
}
