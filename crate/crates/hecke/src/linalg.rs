use std::collections::BTreeSet;

use masep_algebra::Field;

use crate::poly::XPoly;

/// Solves `Σ_j c_j basis_j = target` exactly. `None` if the basis is dependent or the target
/// is outside its span.
pub fn express_in_basis<S: Field>(basis: &[&XPoly<S>], target: &XPoly<S>) -> Option<Vec<S>> {
    let monos: Vec<Vec<i32>> = basis
        .iter()
        .flat_map(|b| b.support().cloned())
        .chain(target.support().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let k = basis.len();
    let mut rows: Vec<Vec<S>> = monos
        .iter()
        .map(|m| {
            basis
                .iter()
                .map(|b| b.coeff(m))
                .chain(std::iter::once(target.coeff(m)))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let p = (r..rows.len()).find(|&i| !rows[i][col].fis_zero())?;
        rows.swap(r, p);
        let inv = rows[r][col].inv()?;
        for v in rows[r].iter_mut() {
            *v = v.mul(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].fis_zero() {
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v = v.sub(&f.mul(pv));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[k].fis_zero()) {
        return None;
    }
    Some((0..k).map(|i| rows[i][k].clone()).collect())
}

/// Rank of a dense matrix by exact elimination.
pub fn rank<S: Field>(m: &[Vec<S>]) -> usize {
    let mut rows: Vec<Vec<S>> = m.to_vec();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col].inv().is_some()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        let pivot_row: Vec<S> = rows[r].iter().map(|v| v.mul(&inv)).collect();
        for row in rows.iter_mut().skip(r + 1) {
            if !row[col].fis_zero() {
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v = v.sub(&f.mul(pv));
                }
            }
        }
        r += 1;
    }
    r
}
