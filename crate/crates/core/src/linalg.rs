//! Exact rational linear algebra: sparse matrices, univariate polynomials,
//! minimal polynomials and rational spectra.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Q};

/// Sparse row-major matrix over the rationals. Zero entries are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Q>>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for (r, row) in self.data.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            write!(f, "  {r}:")?;
            for (c, v) in row {
                write!(f, " ({c}, {})", scalar::show(v))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, scalar::one())
    }

    pub fn scalar(n: usize, s: Q) -> Self {
        let mut m = Self::zeros(n, n);
        if !s.is_zero() {
            for i in 0..n {
                m.data[i].insert(i, s.clone());
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    /// Builds a matrix whose `c`-th column is `columns[c]`.
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.data[r].get(&c).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        assert!(r < self.rows && c < self.cols, "matrix index out of bounds");
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Q) {
        if v.is_zero() {
            return;
        }
        let row = &mut self.data[r];
        let e = row.entry(c).or_insert_with(Q::zero);
        *e += v;
        if e.is_zero() {
            row.remove(&c);
        }
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, Q> {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                t.data[*c].insert(r, v.clone());
            }
        }
        t
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let mut m = self.clone();
        for row in &mut m.data {
            for v in row.values_mut() {
                *v *= s;
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(&scalar::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(&-scalar::one(), other)
    }

    /// `self + s * other`
    pub fn axpy(&self, s: &Q, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (r, row) in other.data.iter().enumerate() {
            for (c, v) in row {
                m.add_at(r, *c, &(v * s));
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
            for (k, a) in row {
                for (c, b) in &other.data[*k] {
                    *acc.entry(*c).or_insert_with(Q::zero) += a * b;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[r] = acc;
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        self.data
            .iter()
            .map(|row| row.iter().fold(Q::zero(), |acc, (c, a)| acc + a * &v[*c]))
            .collect()
    }

    /// `[self, other] = self*other - other*self`
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).fold(Q::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn shift(&self, s: &Q) -> Self {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            m.add_at(i, i, s);
        }
        m
    }

    fn dense_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c)).collect()).collect()
    }

    pub fn rank(&self) -> usize {
        row_echelon(self.dense_rows(), self.cols).len()
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug: Vec<Vec<Q>> = self
            .dense_rows()
            .into_iter()
            .enumerate()
            .map(|(i, mut row)| {
                row.extend((0..n).map(|j| if i == j { scalar::one() } else { Q::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(col, pivot);
            let inv = aug[col][col].recip();
            for v in aug[col].iter_mut() {
                *v *= &inv;
            }
            for r in 0..n {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c in col..2 * n {
                        let delta = &f * &aug[col][c];
                        aug[r][c] -= delta;
                    }
                }
            }
        }
        Some(Self::from_fn(n, n, |r, c| aug[r][n + c].clone()))
    }

    pub fn pow(&self, k: u32) -> Self {
        assert!(self.is_square());
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}

/// Reduced row echelon form, keeping only the nonzero rows.
fn row_echelon(mut rows: Vec<Vec<Q>>, cols: usize) -> Vec<Vec<Q>> {
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip();
        for v in rows[rank].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..cols {
                    let delta = &f * &rows[rank][c];
                    rows[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// Rank of a family of vectors of equal length.
pub fn rank_of(vectors: &[Vec<Q>]) -> usize {
    match vectors.first() {
        None => 0,
        Some(v) => row_echelon(vectors.to_vec(), v.len()).len(),
    }
}

/// Rank of a family of sparse vectors keyed by arbitrary ordered coordinates.
pub fn sparse_rank<K: Ord + Clone>(vectors: &[BTreeMap<K, Q>]) -> usize {
    let keys: Vec<K> = {
        let mut all: Vec<K> = vectors.iter().flat_map(|v| v.keys().cloned()).collect();
        all.sort();
        all.dedup();
        all
    };
    let index: BTreeMap<&K, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let dense: Vec<Vec<Q>> = vectors
        .iter()
        .map(|v| {
            let mut row = vec![Q::zero(); keys.len()];
            for (k, x) in v {
                row[index[k]] = x.clone();
            }
            row
        })
        .collect();
    rank_of(&dense)
}

/// Solves `sum_j x_j * columns[j] = rhs` exactly. Returns one solution when
/// the system is consistent (free variables set to zero).
pub fn solve_columns(columns: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let k = columns.len();
    let m = rhs.len();
    let rows: Vec<Vec<Q>> = (0..m)
        .map(|r| {
            let mut row: Vec<Q> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let ech = row_echelon(rows, k + 1);
    let mut x = vec![Q::zero(); k];
    for row in &ech {
        let lead = row.iter().position(|v| !v.is_zero())?;
        if lead == k {
            return None;
        }
        x[lead] = row[k].clone();
    }
    Some(x)
}

/// Sparse variant of [`solve_columns`] for vectors keyed by arbitrary coordinates.
pub fn solve_sparse<K: Ord + Clone>(columns: &[BTreeMap<K, Q>], rhs: &BTreeMap<K, Q>) -> Option<Vec<Q>> {
    let mut keys: Vec<K> = columns.iter().flat_map(|v| v.keys().cloned()).chain(rhs.keys().cloned()).collect();
    keys.sort();
    keys.dedup();
    let densify = |v: &BTreeMap<K, Q>| -> Vec<Q> { keys.iter().map(|k| v.get(k).cloned().unwrap_or_else(Q::zero)).collect() };
    let cols: Vec<Vec<Q>> = columns.iter().map(densify).collect();
    solve_columns(&cols, &densify(rhs))
}

/// Dense univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Q>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = d == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{}", scalar::show(&a))?;
            }
            match d {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{d}")?,
            }
        }
        Ok(())
    }
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// `t - root`
    pub fn linear(root: &Q) -> Self {
        Self::new(vec![-root.clone(), scalar::one()])
    }

    pub fn from_roots(roots: &[Q]) -> Self {
        roots.iter().fold(Self::constant(scalar::one()), |acc, r| acc.mul(&Self::linear(r)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading().recip();
        Self::new(self.coeffs.iter().map(|c| c * &l).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(vec![]);
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.coeffs.len() - 1;
        let lead_inv = divisor.leading().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::new(vec![]), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * d;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(vec![]);
        }
        let g = self.gcd(other);
        let (q, _) = self.mul(other).div_rem(&g);
        q.monic()
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    /// Evaluates the polynomial at a square matrix (Horner).
    pub fn eval_matrix(&self, m: &QMatrix) -> QMatrix {
        let n = m.rows();
        self.coeffs
            .iter()
            .rev()
            .fold(QMatrix::zeros(n, n), |acc, c| acc.mul(m).shift(c))
    }

    /// Splits off all rational roots (with multiplicity). Returns the roots
    /// found and the remaining cofactor, which has no rational roots.
    pub fn rational_roots(&self) -> (Vec<Q>, Self) {
        let mut rest = self.monic();
        let mut roots = Vec::new();
        loop {
            let Some(deg) = rest.degree() else { break };
            if deg == 0 {
                break;
            }
            if rest.coeffs[0].is_zero() {
                roots.push(Q::zero());
                rest = rest.div_rem(&Self::linear(&Q::zero())).0;
                continue;
            }
            // clear denominators: integer polynomial with the same roots
            let lcm_den = rest.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let ints: Vec<BigInt> = rest.coeffs.iter().map(|c| (c * Q::from_integer(lcm_den.clone())).to_integer()).collect();
            let a0 = ints[0].abs();
            let an = ints[deg].abs();
            let found = divisors(&a0).into_iter().find_map(|p| {
                divisors(&an).into_iter().find_map(|qd| {
                    [Q::new(p.clone(), qd.clone()), -Q::new(p.clone(), qd)]
                        .into_iter()
                        .find(|cand| rest.eval(cand).is_zero())
                })
            });
            match found {
                Some(r) => {
                    rest = rest.div_rem(&Self::linear(&r)).0;
                    roots.push(r);
                }
                None => break,
            }
        }
        (roots, rest)
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let Some(mut m) = n.to_u64() else {
        // Too large for trial division; callers only meet small integers.
        return vec![BigInt::one(), n.clone()];
    };
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        while m % p == 0 {
            primes.push(p);
            m /= p;
        }
        p += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    let mut divs: Vec<u64> = vec![1];
    let mut i = 0;
    while i < primes.len() {
        let p = primes[i];
        let mut k = 0;
        while i < primes.len() && primes[i] == p {
            k += 1;
            i += 1;
        }
        let base = divs.clone();
        let mut pw = 1u64;
        for _ in 0..k {
            pw *= p;
            divs.extend(base.iter().map(|d| d * pw));
        }
    }
    divs.sort_unstable();
    divs.into_iter().map(BigInt::from).collect()
}

/// Minimal polynomial of `v` under `op`: the monic polynomial of least degree
/// with `p(op) v = 0`, found from the first linear dependency in the Krylov
/// sequence `v, op v, op^2 v, ...`.
pub fn vector_minimal_polynomial(op: &QMatrix, v: &[Q]) -> UniPoly {
    if v.iter().all(Zero::is_zero) {
        return UniPoly::constant(scalar::one());
    }
    let mut krylov: Vec<Vec<Q>> = vec![v.to_vec()];
    loop {
        let next = op.mul_vec(krylov.last().expect("nonempty"));
        if let Some(c) = solve_columns(&krylov, &next) {
            let mut coeffs: Vec<Q> = c.into_iter().map(|x| -x).collect();
            coeffs.push(scalar::one());
            return UniPoly::new(coeffs);
        }
        krylov.push(next);
    }
}

/// Exact minimal polynomial of a square matrix, as the lcm of the minimal
/// polynomials of the standard basis vectors.
pub fn minimal_polynomial(op: &QMatrix) -> Result<UniPoly> {
    if !op.is_square() {
        return Err(Error::Degenerate("minimal polynomial of a non-square matrix".into()));
    }
    let n = op.rows();
    let mut acc = UniPoly::constant(scalar::one());
    for i in 0..n {
        let mut e = vec![Q::zero(); n];
        e[i] = scalar::one();
        // skip vectors already annihilated by the running lcm
        if acc.degree().unwrap_or(0) > 0 && acc_annihilates(&acc, op, &e) {
            continue;
        }
        acc = acc.lcm(&vector_minimal_polynomial(op, &e));
    }
    Ok(acc)
}

fn acc_annihilates(p: &UniPoly, op: &QMatrix, v: &[Q]) -> bool {
    let mut out = vec![Q::zero(); v.len()];
    let mut power = v.to_vec();
    for c in p.coeffs() {
        for (o, x) in out.iter_mut().zip(&power) {
            *o += c * x;
        }
        power = op.mul_vec(&power);
    }
    out.iter().all(Zero::is_zero)
}

/// Distinct rational eigenvalues of a matrix whose minimal polynomial splits
/// over the rationals into distinct linear factors. Sorted ascending.
pub fn rational_spectrum(op: &QMatrix) -> Result<Vec<Q>> {
    let mp = minimal_polynomial(op)?;
    let (mut roots, rest) = mp.rational_roots();
    if rest.degree().unwrap_or(0) > 0 {
        return Err(Error::NonRationalSpectrum(rest.degree().unwrap_or(0)));
    }
    roots.sort();
    let n = roots.len();
    roots.dedup();
    if roots.len() != n {
        return Err(Error::Degenerate("minimal polynomial has a repeated root (operator not diagonalizable)".into()));
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, q};

    fn diag(vals: &[i64]) -> QMatrix {
        QMatrix::from_fn(vals.len(), vals.len(), |r, c| if r == c { q(vals[r]) } else { q(0) })
    }

    #[test]
    fn identity_minimal_polynomial() {
        let mp = minimal_polynomial(&QMatrix::identity(4)).unwrap();
        assert_eq!(mp, UniPoly::new(vec![q(-1), q(1)]));
    }

    #[test]
    fn diagonal_minimal_polynomial() {
        let mp = minimal_polynomial(&diag(&[0, 8, 8])).unwrap();
        assert_eq!(mp, UniPoly::from_roots(&[q(0), q(8)]));
        assert_eq!(mp.to_string(), "t^2 - 8t");
    }

    #[test]
    fn jordan_block_is_not_split_into_distinct_roots() {
        let j = QMatrix::from_fn(2, 2, |r, c| if r == c || (r == 0 && c == 1) { q(3) } else { q(0) });
        let mp = minimal_polynomial(&j).unwrap();
        assert_eq!(mp, UniPoly::from_roots(&[q(3), q(3)]));
        assert!(rational_spectrum(&j).is_err());
    }

    #[test]
    fn irrational_spectrum_is_reported() {
        // rotation-like matrix with t^2 - 2
        let m = QMatrix::from_fn(2, 2, |r, c| match (r, c) {
            (0, 1) => q(2),
            (1, 0) => q(1),
            _ => q(0),
        });
        assert_eq!(rational_spectrum(&m), Err(Error::NonRationalSpectrum(2)));
    }

    #[test]
    fn rational_roots_with_fractions() {
        let p = UniPoly::from_roots(&[frac(1, 2), frac(-3, 4), q(6)]);
        let (mut roots, rest) = p.rational_roots();
        roots.sort();
        assert_eq!(roots, vec![frac(-3, 4), frac(1, 2), q(6)]);
        assert_eq!(rest.degree(), Some(0));
    }

    #[test]
    fn inverse_and_rank() {
        let m = QMatrix::from_fn(3, 3, |r, c| q(((r + 1) * (c + 2) + (r == c) as usize) as i64));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(3));
        let singular = QMatrix::from_fn(3, 3, |r, c| q((r * c) as i64));
        assert_eq!(singular.rank(), 1);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let cols = vec![vec![q(1), q(0), q(1)], vec![q(0), q(1), q(1)]];
        assert_eq!(solve_columns(&cols, &[q(2), q(3), q(5)]), Some(vec![q(2), q(3)]));
        assert_eq!(solve_columns(&cols, &[q(2), q(3), q(4)]), None);
    }

    #[test]
    fn eval_matrix_annihilates() {
        let m = diag(&[1, 2, 2, 5]);
        let p = UniPoly::from_roots(&[q(1), q(2), q(5)]);
        assert!(p.eval_matrix(&m).is_zero());
    }
}
