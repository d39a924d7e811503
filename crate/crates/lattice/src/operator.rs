use std::collections::BTreeMap;

use masep_algebra::par::Exec;
use masep_algebra::{fmt_rational, parse_rational, Field, Rational};
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::LatticeError;

/// Exact sparse operator on a tensor product space, stored by columns.
///
/// Factor 0 is the most significant digit of a basis index. Zero entries are never stored.
#[derive(Clone, Debug)]
pub struct SparseOperator<S> {
    factors: Vec<usize>,
    cols: Vec<BTreeMap<usize, S>>,
}

/// Mixed-radix digits of `idx`, most significant first.
pub fn digits(mut idx: usize, factors: &[usize]) -> Vec<usize> {
    let mut d = vec![0; factors.len()];
    for k in (0..factors.len()).rev() {
        d[k] = idx % factors[k];
        idx /= factors[k];
    }
    d
}

pub fn index_of(d: &[usize], factors: &[usize]) -> usize {
    d.iter().zip(factors).fold(0, |acc, (x, f)| acc * f + x)
}

/// Sparse column vector.
pub type SparseVec<S> = BTreeMap<usize, S>;

fn add_into<S: Field>(acc: &mut SparseVec<S>, k: usize, v: S) {
    if v.fis_zero() {
        return;
    }
    match acc.get_mut(&k) {
        Some(x) => {
            *x = x.add(&v);
            if x.fis_zero() {
                acc.remove(&k);
            }
        }
        None => {
            acc.insert(k, v);
        }
    }
}

impl<S: Field> SparseOperator<S> {
    pub fn zero(factors: Vec<usize>) -> Self {
        let dim = factors.iter().product();
        SparseOperator {
            factors,
            cols: vec![BTreeMap::new(); dim],
        }
    }

    pub fn identity(factors: Vec<usize>) -> Self {
        let mut m = Self::zero(factors);
        for (i, c) in m.cols.iter_mut().enumerate() {
            c.insert(i, S::fone());
        }
        m
    }

    pub fn diagonal(factors: Vec<usize>, diag: Vec<S>) -> Self {
        let mut m = Self::zero(factors);
        for (i, v) in diag.into_iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn from_columns(factors: Vec<usize>, cols: Vec<SparseVec<S>>) -> Self {
        assert_eq!(cols.len(), factors.iter().product::<usize>());
        SparseOperator { factors, cols }
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn column(&self, c: usize) -> &SparseVec<S> {
        &self.cols[c]
    }

    pub fn get(&self, r: usize, c: usize) -> S {
        self.cols[c].get(&r).cloned().unwrap_or_else(S::fzero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        if v.fis_zero() {
            self.cols[c].remove(&r);
        } else {
            self.cols[c].insert(r, v);
        }
    }

    pub fn add_entry(&mut self, r: usize, c: usize, v: S) {
        add_into(&mut self.cols[c], r, v);
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize, &S)> {
        let mut out: Vec<_> = self
            .cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
            .collect();
        out.sort_by_key(|&(r, c, _)| (r, c));
        out
    }

    fn check_dims(&self, o: &Self) -> Result<(), LatticeError> {
        if self.dim() != o.dim() {
            return Err(LatticeError::DimensionMismatch(self.dim(), o.dim()));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn equals(&self, o: &Self) -> bool {
        self.dim() == o.dim() && self.sub(o).is_ok_and(|d| d.is_zero())
    }

    pub fn add(&self, o: &Self) -> Result<Self, LatticeError> {
        self.check_dims(o)?;
        let mut out = self.clone();
        for (c, col) in o.cols.iter().enumerate() {
            for (r, v) in col {
                out.add_entry(*r, c, v.clone());
            }
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, LatticeError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_entries(|v| v.neg())
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.fis_zero() {
            return Self::zero(self.factors.clone());
        }
        self.map_entries(|v| v.mul(s))
    }

    fn map_entries(&self, f: impl Fn(&S) -> S) -> Self {
        let cols = self
            .cols
            .iter()
            .map(|col| {
                col.iter()
                    .map(|(r, v)| (*r, f(v)))
                    .filter(|(_, v)| !v.fis_zero())
                    .collect()
            })
            .collect();
        SparseOperator {
            factors: self.factors.clone(),
            cols,
        }
    }

    /// Converts every entry into another scalar type.
    pub fn try_map<T: Field, E>(
        &self,
        f: impl Fn(&S) -> Result<T, E>,
    ) -> Result<SparseOperator<T>, E> {
        let mut cols = Vec::with_capacity(self.dim());
        for col in &self.cols {
            let mut out = BTreeMap::new();
            for (r, v) in col {
                let x = f(v)?;
                if !x.fis_zero() {
                    out.insert(*r, x);
                }
            }
            cols.push(out);
        }
        Ok(SparseOperator {
            factors: self.factors.clone(),
            cols,
        })
    }

    /// `self * v` for a sparse column vector.
    pub fn apply_sparse(&self, v: &SparseVec<S>) -> SparseVec<S> {
        let mut acc = BTreeMap::new();
        for (j, x) in v {
            for (i, a) in &self.cols[*j] {
                add_into(&mut acc, *i, a.mul(x));
            }
        }
        acc
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        let sv: SparseVec<S> = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.fis_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        let out = self.apply_sparse(&sv);
        (0..self.dim())
            .map(|i| out.get(&i).cloned().unwrap_or_else(S::fzero))
            .collect()
    }

    /// Row vector times operator.
    pub fn apply_left(&self, v: &[S]) -> Vec<S> {
        self.cols
            .iter()
            .map(|col| {
                col.iter()
                    .fold(S::fzero(), |acc, (r, a)| acc.add(&v[*r].mul(a)))
            })
            .collect()
    }

    pub fn mul(&self, o: &Self) -> Result<Self, LatticeError> {
        self.mul_with(o, Exec::default())
    }

    pub fn mul_with(&self, o: &Self, exec: Exec) -> Result<Self, LatticeError> {
        self.check_dims(o)?;
        let cols = exec.map(&o.cols, |col| self.apply_sparse(col));
        Ok(SparseOperator {
            factors: self.factors.clone(),
            cols,
        })
    }

    /// Product of a list, leftmost factor first.
    pub fn product(ops: &[&Self], exec: Exec) -> Result<Self, LatticeError> {
        let mut it = ops.iter().rev();
        let mut acc = (*it.next().expect("nonempty product")).clone();
        for op in it {
            acc = op.mul_with(&acc, exec)?;
        }
        Ok(acc)
    }

    pub fn kron(&self, o: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&o.factors);
        let od = o.dim();
        let mut out = Self::zero(factors);
        for (c1, col1) in self.cols.iter().enumerate() {
            for (c2, col2) in o.cols.iter().enumerate() {
                let c = c1 * od + c2;
                for (r1, a) in col1 {
                    for (r2, b) in col2 {
                        out.set(r1 * od + r2, c, a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.factors.clone());
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                out.set(c, *r, v.clone());
            }
        }
        out
    }

    /// Transpose in tensor factor `k` only.
    pub fn partial_transpose(&self, k: usize) -> Self {
        let f = &self.factors;
        let mut out = Self::zero(f.clone());
        for (c, col) in self.cols.iter().enumerate() {
            let dc = digits(c, f);
            for (r, v) in col {
                let mut dr = digits(*r, f);
                let mut dc2 = dc.clone();
                std::mem::swap(&mut dr[k], &mut dc2[k]);
                out.set(index_of(&dr, f), index_of(&dc2, f), v.clone());
            }
        }
        out
    }

    /// Trace over tensor factor `k`.
    pub fn partial_trace(&self, k: usize) -> Self {
        let f = &self.factors;
        let mut rf = f.clone();
        rf.remove(k);
        let mut out = Self::zero(rf.clone());
        for (c, col) in self.cols.iter().enumerate() {
            let mut dc = digits(c, f);
            for (r, v) in col {
                let mut dr = digits(*r, f);
                if dr[k] != dc[k] {
                    continue;
                }
                dr.remove(k);
                let a = dc.remove(k);
                out.add_entry(index_of(&dr, &rf), index_of(&dc, &rf), v.clone());
                dc.insert(k, a);
            }
        }
        out
    }

    /// Places `self` (acting on its own factors, in order) on `positions` of a larger space.
    pub fn embed(&self, factors: &[usize], positions: &[usize]) -> Self {
        assert_eq!(positions.len(), self.factors.len());
        for (p, f) in positions.iter().zip(&self.factors) {
            assert_eq!(factors[*p], *f, "embedded factor dimension");
        }
        let dim: usize = factors.iter().product();
        let mut cols = vec![BTreeMap::new(); dim];
        for (c, out) in cols.iter_mut().enumerate() {
            let dc = digits(c, factors);
            let sub: Vec<usize> = positions.iter().map(|&p| dc[p]).collect();
            let sc = index_of(&sub, &self.factors);
            for (sr, v) in &self.cols[sc] {
                let ds = digits(*sr, &self.factors);
                let mut dr = dc.clone();
                for (p, x) in positions.iter().zip(ds) {
                    dr[*p] = x;
                }
                out.insert(index_of(&dr, factors), v.clone());
            }
        }
        SparseOperator {
            factors: factors.to_vec(),
            cols,
        }
    }

    pub fn column_sums(&self) -> Vec<S> {
        self.cols
            .iter()
            .map(|col| col.values().fold(S::fzero(), |a, v| a.add(v)))
            .collect()
    }

    /// Inverse by Gauss-Jordan elimination on a dense copy.
    pub fn inverse(&self) -> Result<Self, LatticeError> {
        let n = self.dim();
        let mut a: Vec<Vec<S>> = (0..n)
            .map(|r| (0..n).map(|c| self.get(r, c)).collect())
            .collect();
        let mut inv: Vec<Vec<S>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| if r == c { S::fone() } else { S::fzero() })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r][col].fis_zero())
                .ok_or(LatticeError::Singular)?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col].inv().ok_or(LatticeError::Singular)?;
            for j in 0..n {
                a[col][j] = a[col][j].mul(&p);
                inv[col][j] = inv[col][j].mul(&p);
            }
            for r in 0..n {
                if r == col || a[r][col].fis_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    if !a[col][j].fis_zero() {
                        a[r][j] = a[r][j].sub(&f.mul(&a[col][j]));
                    }
                    if !inv[col][j].fis_zero() {
                        inv[r][j] = inv[r][j].sub(&f.mul(&inv[col][j]));
                    }
                }
            }
        }
        let mut out = Self::zero(self.factors.clone());
        for (r, row) in inv.into_iter().enumerate() {
            for (c, v) in row.into_iter().enumerate() {
                out.set(r, c, v);
            }
        }
        Ok(out)
    }

    /// Restriction to a set of basis indices (rows and columns).
    pub fn restrict(&self, basis: &[usize]) -> Vec<Vec<S>> {
        basis
            .iter()
            .map(|&r| basis.iter().map(|&c| self.get(r, c)).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub r: usize,
    pub c: usize,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub dim: usize,
    pub factors: Vec<usize>,
    pub entries: Vec<EntryJson>,
}

impl SparseOperator<Rational> {
    pub fn to_json(&self) -> OperatorJson {
        OperatorJson {
            dim: self.dim(),
            factors: self.factors.clone(),
            entries: self
                .entries()
                .into_iter()
                .map(|(r, c, v)| EntryJson {
                    r,
                    c,
                    num: v.numer().to_string(),
                    den: v.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &OperatorJson) -> Result<Self, LatticeError> {
        if j.factors.iter().product::<usize>() != j.dim {
            return Err(LatticeError::Json(
                "factor dimensions do not multiply to dim".into(),
            ));
        }
        let mut m = Self::zero(j.factors.clone());
        for e in &j.entries {
            if e.r >= j.dim || e.c >= j.dim {
                return Err(LatticeError::Json(format!(
                    "entry ({}, {}) out of range",
                    e.r, e.c
                )));
            }
            let v = parse_rational(&format!("{}/{}", e.num, e.den))
                .map_err(|err| LatticeError::Json(err.to_string()))?;
            m.set(e.r, e.c, v);
        }
        Ok(m)
    }

    pub fn max_abs_entry(&self) -> Rational {
        self.cols
            .iter()
            .flat_map(|c| c.values())
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(num_traits::Zero::zero)
    }

    pub fn display_dense(&self) -> String {
        let n = self.dim();
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| fmt_rational(&self.get(r, c)))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}
