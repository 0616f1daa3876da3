//! Exact integer linear algebra for the genus-2 gluing construction.
//!
//! Matrices act on column vectors in the basis `e¹, …, e⁴` of `H¹` of the
//! genus-2 surface, with intersection form `J`. The monodromy `B` satisfies
//! `BᵗJB = J`; `F = Bᵗ` preserves `⟨e¹, e³⟩` and acts there as
//! `F̄ = [[3, −1], [1, 0]]`, whose leading eigenvalue is `λ = (3 + √5)/2`.
//!
//! Lattices are stored by their Hermite normal form: basis vectors as rows,
//! upper echelon with positive pivots and entries above each pivot reduced
//! into `[0, pivot)`. Two lattices are equal iff their bases are.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// `(3 + √5)/2`.
pub fn lambda() -> f64 {
    (3.0 + 5f64.sqrt()) / 2.0
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .to_rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl IntMat {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_big_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(domain("IntMat::from_rows", "empty matrix"));
        }
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::one();
        }
        Self { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.cols).map(<[BigInt]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: o.rows,
            });
        }
        let mut data = Vec::with_capacity(self.rows * o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut s = BigInt::zero();
                for k in 0..self.cols {
                    s += self.get(i, k) * o.get(k, j);
                }
                data.push(s);
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: o.cols,
            data,
        })
    }

    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|k| self.get(i, k) * &v[k]).sum())
            .collect())
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        if self.rows != self.cols {
            return Err(domain("IntMat::pow", "matrix is not square"));
        }
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(domain("IntMat::det", "matrix is not square"));
        }
        let n = self.rows;
        let mut m = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
            }
            prev = m[k][k].clone();
        }
        Ok(sign * &m[n - 1][n - 1])
    }
}

/// The monodromy `B` in the basis `e¹, …, e⁴`.
pub fn matrix_b() -> IntMat {
    IntMat::from_rows(&[
        vec![3, 0, 1, 0],
        vec![1, 0, 0, -1],
        vec![-1, 0, 0, 0],
        vec![1, 1, 1, 3],
    ])
    .expect("constant matrix")
}

/// The intersection form `J`.
pub fn matrix_j() -> IntMat {
    IntMat::from_rows(&[
        vec![0, -1, 0, 0],
        vec![1, 0, 0, 0],
        vec![0, 0, 0, 1],
        vec![0, 0, -1, 0],
    ])
    .expect("constant matrix")
}

/// `F = Bᵗ`, the action on cohomology.
pub fn matrix_f() -> IntMat {
    matrix_b().transpose()
}

/// `F̄ = [[3, −1], [1, 0]]`.
pub fn matrix_fbar() -> IntMat {
    IntMat::from_rows(&[vec![3, -1], vec![1, 0]]).expect("constant matrix")
}

/// True iff `MᵗJM = J`.
pub fn symplectic_check(m: &IntMat, j: &IntMat) -> Result<bool> {
    if m.rows != m.cols || j.rows != j.cols || m.rows != j.rows {
        return Err(Error::DimensionMismatch {
            expected: j.rows,
            got: m.rows,
        });
    }
    Ok(m.transpose().mul(j)?.mul(m)? == *j)
}

/// `⟨x, y⟩_J = xᵗJy`.
pub fn pairing(x: &[BigInt], y: &[BigInt], j: &IntMat) -> Result<BigInt> {
    let jy = j.apply(y)?;
    Ok(x.iter().zip(&jy).map(|(a, b)| a * b).sum())
}

fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Matrix of `x ↦ x + sign·⟨x, γ⟩_J γ`, the homological action of a Dehn
/// twist about a curve of class `γ`.
pub fn transvection(gamma: &[i64], sign: i32, j: &IntMat) -> Result<IntMat> {
    if gamma.len() != j.rows {
        return Err(Error::DimensionMismatch {
            expected: j.rows,
            got: gamma.len(),
        });
    }
    if sign != 1 && sign != -1 {
        return Err(domain("transvection", format!("sign must be ±1, got {sign}")));
    }
    let g = gamma.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return Err(domain("transvection", "zero curve class"));
    }
    if g != 1 {
        return Err(domain("transvection", format!("class {gamma:?} is not primitive")));
    }
    let gv = big_vec(gamma);
    // ⟨x, γ⟩ = (Jγ)ᵗx
    let jg = j.apply(&gv)?;
    let mut t = IntMat::identity(j.rows);
    let s = BigInt::from(sign);
    for r in 0..j.rows {
        for c in 0..j.rows {
            let v = t.get(r, c) + &s * &gv[r] * &jg[c];
            t.set(r, c, v);
        }
    }
    Ok(t)
}

/// One letter of a twist word: a named curve and a direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Twist {
    pub curve: String,
    pub sign: i32,
}

/// Curve classes and a twist word read from the fixture format:
/// `curve <name> <ints…>` and `word <name>[^-1] …` lines, `#` comments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistData {
    pub curves: Vec<(String, Vec<i64>)>,
    pub word: Vec<Twist>,
}

pub const GENUS2_FIXTURE: &str = include_str!("../fixtures/genus2_twist_curves.txt");

impl TwistData {
    pub fn parse(text: &str) -> Result<Self> {
        let mut curves = Vec::new();
        let mut word = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut toks = line.split_whitespace();
            let perr = |msg: String| Error::Parse { pos: lineno + 1, msg };
            match toks.next() {
                Some("curve") => {
                    let name = toks.next().ok_or_else(|| perr("missing curve name".into()))?;
                    let coords = toks
                        .map(|t| t.parse::<i64>().map_err(|e| perr(format!("bad coordinate {t}: {e}"))))
                        .collect::<Result<Vec<_>>>()?;
                    curves.push((name.to_string(), coords));
                }
                Some("word") => {
                    let letters = toks
                        .map(|t| match t.strip_suffix("^-1") {
                            Some(n) => Twist {
                                curve: n.to_string(),
                                sign: -1,
                            },
                            None => Twist {
                                curve: t.to_string(),
                                sign: 1,
                            },
                        })
                        .collect();
                    word = Some(letters);
                }
                Some(other) => return Err(perr(format!("unknown directive {other}"))),
                None => {}
            }
        }
        let word = word.ok_or_else(|| Error::Parse {
            pos: 0,
            msg: "no word line".into(),
        })?;
        Ok(Self { curves, word })
    }

    pub fn genus2() -> Self {
        Self::parse(GENUS2_FIXTURE).expect("bundled fixture parses")
    }

    pub fn class(&self, name: &str) -> Option<&[i64]> {
        self.curves.iter().find(|c| c.0 == name).map(|c| c.1.as_slice())
    }

    /// Product of the word's transvections, leftmost letter leftmost.
    pub fn compose(&self, j: &IntMat) -> Result<IntMat> {
        compose_word(&self.word, |name| self.class(name).map(<[i64]>::to_vec), j)
    }
}

/// Composes a twist word given a lookup from curve names to classes.
pub fn compose_word<F: Fn(&str) -> Option<Vec<i64>>>(word: &[Twist], class: F, j: &IntMat) -> Result<IntMat> {
    let mut m = IntMat::identity(j.rows);
    for t in word {
        let g = class(&t.curve).ok_or_else(|| domain("compose_word", format!("unknown curve {}", t.curve)))?;
        m = m.mul(&transvection(&g, t.sign, j)?)?;
    }
    Ok(m)
}

/// The word `τ_a τ_d⁻¹ τ_c τ_b⁻¹ τ_d τ_c⁻¹ τ_e⁻¹`.
pub fn monodromy_word() -> Vec<Twist> {
    [("a", 1), ("d", -1), ("c", 1), ("b", -1), ("d", 1), ("c", -1), ("e", -1)]
        .iter()
        .map(|&(c, s)| Twist {
            curve: c.to_string(),
            sign: s,
        })
        .collect()
}

/// All assignments of classes with entries in `entries` to the chain of
/// curves `a, b, c, d, e` (consecutive curves meet once, others are disjoint)
/// for which [`monodromy_word`] composes to `target`. Classes are taken up to
/// sign, normalised so the first nonzero entry is positive.
pub fn search_curve_classes(target: &IntMat, j: &IntMat, entries: &[i64]) -> Result<Vec<[Vec<i64>; 5]>> {
    let dim = j.rows;
    let mut candidates: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..dim {
        candidates = candidates
            .into_iter()
            .flat_map(|p| {
                entries.iter().map(move |&e| {
                    let mut q = p.clone();
                    q.push(e);
                    q
                })
            })
            .collect();
    }
    candidates.retain(|v| {
        let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        g == 1 && v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
    });
    let big: Vec<Vec<BigInt>> = candidates.iter().map(|v| big_vec(v)).collect();
    let n = candidates.len();
    let mut form = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            form[i][k] = pairing(&big[i], &big[k], j)?.to_i64().unwrap_or(i64::MAX);
        }
    }
    let meets_once = |x: usize, y: usize| form[x][y].abs() == 1;
    let disjoint = |x: usize, y: usize| form[x][y] == 0;
    let word = monodromy_word();
    let mut found = Vec::new();
    for a in 0..n {
        for b in (0..n).filter(|&b| meets_once(a, b)) {
            for c in (0..n).filter(|&c| meets_once(b, c) && disjoint(a, c)) {
                for d in (0..n).filter(|&d| meets_once(c, d) && disjoint(a, d) && disjoint(b, d)) {
                    for e in (0..n).filter(|&e| {
                        meets_once(d, e) && disjoint(a, e) && disjoint(b, e) && disjoint(c, e)
                    }) {
                        let pick = [a, b, c, d, e];
                        let lookup = |name: &str| {
                            let idx = (name.as_bytes()[0] - b'a') as usize;
                            pick.get(idx).map(|&i| candidates[i].clone())
                        };
                        if compose_word(&word, lookup, j)? == *target {
                            found.push(pick.map(|i| candidates[i].clone()));
                        }
                    }
                }
            }
        }
    }
    Ok(found)
}

/// Entries of `F̄ⁿ = [[a_n, b_n], [c_n, d_n]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FbarPower {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

pub fn fbar_power(n: u32) -> FbarPower {
    let m = matrix_fbar().pow(n).expect("square matrix");
    FbarPower {
        a: m.get(0, 0).clone(),
        b: m.get(0, 1).clone(),
        c: m.get(1, 0).clone(),
        d: m.get(1, 1).clone(),
    }
}

/// Natural log of a positive big integer.
pub fn big_ln(x: &BigInt) -> Result<f64> {
    if !x.is_positive() {
        return Err(domain("big_ln", format!("argument must be positive, got {x}")));
    }
    let bits = x.bits();
    if bits <= 1000 {
        return Ok(x.to_f64().expect("fits in f64").ln());
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    Ok(top.to_f64().expect("64-bit value").ln() + shift as f64 * std::f64::consts::LN_2)
}

/// A sublattice of `ℤᵈ` in Hermite normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
}

impl Lattice {
    /// The lattice generated by `vectors` (any generating set; dependent
    /// vectors are reduced away).
    pub fn new(dim: usize, vectors: &[Vec<BigInt>]) -> Result<Self> {
        for v in vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
        }
        let (h, _) = hermite(vectors.to_vec(), dim);
        Ok(Self {
            dim,
            basis: h.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect(),
        })
    }

    pub fn from_i64(dim: usize, vectors: &[Vec<i64>]) -> Result<Self> {
        Self::new(dim, &vectors.iter().map(|v| big_vec(v)).collect::<Vec<_>>())
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, basis: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        if v.len() != self.dim {
            return false;
        }
        let mut rest = v.to_vec();
        for row in &self.basis {
            let p = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            let (q, r) = rest[p].div_rem(&row[p]);
            if !r.is_zero() {
                return false;
            }
            for (x, y) in rest.iter_mut().zip(row) {
                *x -= &q * y;
            }
        }
        rest.iter().all(Zero::is_zero)
    }

    /// Image of the lattice under `m`.
    pub fn image(&self, m: &IntMat) -> Result<Self> {
        let imgs = self.basis.iter().map(|v| m.apply(v)).collect::<Result<Vec<_>>>()?;
        Self::new(m.rows(), &imgs)
    }
}

/// Row-style Hermite normal form `H = T·M` with `T` unimodular; returns
/// `(H, T)`. Zero rows of `H` are moved to the bottom.
fn hermite(mut m: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let rows = m.len();
    let mut t: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..rows).map(|k| if i == k { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivot_row = 0;
    for c in 0..cols {
        if pivot_row == rows {
            break;
        }
        for i in pivot_row + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let (a, b) = (m[pivot_row][c].clone(), m[i][c].clone());
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let (u, v) = (-&b / &g, &a / &g);
            combine(&mut m, pivot_row, i, &x, &y, &u, &v);
            combine(&mut t, pivot_row, i, &x, &y, &u, &v);
        }
        if m[pivot_row][c].is_zero() {
            continue;
        }
        if m[pivot_row][c].is_negative() {
            negate(&mut m[pivot_row]);
            negate(&mut t[pivot_row]);
        }
        for i in 0..pivot_row {
            let q = m[i][c].div_floor(&m[pivot_row][c]);
            if !q.is_zero() {
                sub_mul(&mut m, i, pivot_row, &q);
                sub_mul(&mut t, i, pivot_row, &q);
            }
        }
        pivot_row += 1;
    }
    (m, t)
}

/// `(row_p, row_i) ← (x·row_p + y·row_i, u·row_p + v·row_i)`.
fn combine(m: &mut [Vec<BigInt>], p: usize, i: usize, x: &BigInt, y: &BigInt, u: &BigInt, v: &BigInt) {
    for k in 0..m[p].len() {
        let (rp, ri) = (m[p][k].clone(), m[i][k].clone());
        m[p][k] = x * &rp + y * &ri;
        m[i][k] = u * &rp + v * &ri;
    }
}

fn negate(row: &mut [BigInt]) {
    for x in row {
        *x = -&*x;
    }
}

fn sub_mul(m: &mut [Vec<BigInt>], i: usize, p: usize, q: &BigInt) {
    for k in 0..m[i].len() {
        let d = q * &m[p][k];
        m[i][k] -= d;
    }
}

/// `L₁ ∩ L₂` from the integer left kernel of the stacked bases.
pub fn lattice_intersection(l1: &Lattice, l2: &Lattice) -> Result<Lattice> {
    if l1.dim != l2.dim {
        return Err(Error::DimensionMismatch {
            expected: l1.dim,
            got: l2.dim,
        });
    }
    if l1.rank() == 0 || l2.rank() == 0 {
        return Ok(Lattice::zero(l1.dim));
    }
    let stacked: Vec<Vec<BigInt>> = l1.basis.iter().chain(&l2.basis).cloned().collect();
    let (h, t) = hermite(stacked, l1.dim);
    let k1 = l1.rank();
    let mut gens = Vec::new();
    for (row, tr) in h.iter().zip(&t) {
        if row.iter().all(Zero::is_zero) {
            // tr·[U; W] = 0, so Σ tr_i u_i lies in both lattices.
            let mut v = vec![BigInt::zero(); l1.dim];
            for (coef, u) in tr[..k1].iter().zip(&l1.basis) {
                for (x, y) in v.iter_mut().zip(u) {
                    *x += coef * y;
                }
            }
            gens.push(v);
        }
    }
    Lattice::new(l1.dim, &gens)
}

fn unit(dim: usize, i: usize) -> Vec<BigInt> {
    (0..dim).map(|k| if k == i { BigInt::one() } else { BigInt::zero() }).collect()
}

/// `⟨e¹, e³⟩ ∩ Fⁿ⟨e¹, e⁴⟩`.
pub fn mv_intersection(n: u32) -> Result<Lattice> {
    let fixed = Lattice::new(4, &[unit(4, 0), unit(4, 2)])?;
    let fnm = matrix_f().pow(n)?;
    let moved = Lattice::new(4, &[fnm.apply(&unit(4, 0))?, fnm.apply(&unit(4, 3))?])?;
    lattice_intersection(&fixed, &moved)
}

/// `Fⁿ(e¹) = a_n e¹ + c_n e³`, checked to generate [`mv_intersection`]`(n)`.
pub fn mv_generator(n: u32) -> Result<Vec<BigInt>> {
    let v = matrix_f().pow(n)?.apply(&unit(4, 0))?;
    let p = fbar_power(n);
    if v != vec![p.a.clone(), BigInt::zero(), p.c.clone(), BigInt::zero()] {
        return Err(Error::Invariant(format!("F^{n} e1 leaves the span of e1, e3")));
    }
    if !p.a.gcd(&p.c).is_one() {
        return Err(Error::Invariant(format!("F^{n} e1 is not primitive")));
    }
    let lat = mv_intersection(n)?;
    if lat != Lattice::new(4, std::slice::from_ref(&v))? {
        return Err(Error::Invariant(format!(
            "intersection for n = {n} has basis {:?}, not generated by F^n e1",
            lat.basis()
        )));
    }
    Ok(v)
}
