use std::collections::{BTreeMap, BTreeSet};

use masep_algebra::Rational;
use masep_lattice::{generator_direct, ModelSpec, SparseOperator};
use masep_weyl::{antidominant_rep, orbit, Composition};
use num_traits::{One, Zero};

use crate::state::{Provenance, StationaryState};
use crate::StationaryError;

/// Basis of `{v : M v = 0}` by exact row reduction.
pub fn null_space(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut rows: Vec<Vec<Rational>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &f * pv;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[k][f].clone();
            }
            v
        })
        .collect()
}

/// Configurations of the sector containing `λ`: its orbit under the signed permutations,
/// with sign flips frozen for labels that neither boundary can flip.
pub fn sector_configs(spec: &ModelSpec, lambda: &[i32]) -> Vec<Composition> {
    let frozen = spec.rl.min(spec.rr) as i32;
    orbit(lambda, Some(frozen))
}

/// True when every configuration of the sector reaches every other one under `l`.
pub fn sector_irreducible(spec: &ModelSpec, l: &SparseOperator<Rational>, lambda: &[i32]) -> bool {
    let idx: Vec<usize> = sector_configs(spec, lambda)
        .iter()
        .map(|m| spec.config_index(m))
        .collect();
    let inside: BTreeSet<usize> = idx.iter().copied().collect();
    let mut forward: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut backward: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &c in &idx {
        for (r, v) in l.column(c) {
            if *r != c && !v.is_zero() && inside.contains(r) {
                forward.entry(c).or_default().push(*r);
                backward.entry(*r).or_default().push(c);
            }
        }
    }
    let reach = |adj: &BTreeMap<usize, Vec<usize>>| {
        let mut seen = BTreeSet::from([idx[0]]);
        let mut stack = vec![idx[0]];
        while let Some(u) = stack.pop() {
            for v in adj.get(&u).into_iter().flatten() {
                if seen.insert(*v) {
                    stack.push(*v);
                }
            }
        }
        seen.len()
    };
    reach(&forward) == idx.len() && reach(&backward) == idx.len()
}

pub fn nullspace_stationary(
    spec: &ModelSpec,
    lambda: &[i32],
) -> Result<StationaryState, StationaryError> {
    nullspace_stationary_with(spec, &generator_direct(spec)?, lambda)
}

/// Exact null vector of the sector block of `l`, normalised to 1 on the antidominant
/// configuration.
pub fn nullspace_stationary_with(
    spec: &ModelSpec,
    l: &SparseOperator<Rational>,
    lambda: &[i32],
) -> Result<StationaryState, StationaryError> {
    if lambda.len() != spec.n || lambda.iter().any(|x| x.unsigned_abs() as usize > spec.r) {
        return Err(StationaryError::InvalidInput(format!(
            "{lambda:?} is not a configuration for n = {}, r = {}",
            spec.n, spec.r
        )));
    }
    let configs = sector_configs(spec, lambda);
    let idx: Vec<usize> = configs.iter().map(|m| spec.config_index(m)).collect();
    let inside: BTreeSet<usize> = idx.iter().copied().collect();
    for &c in &idx {
        if l.column(c).keys().any(|r| !inside.contains(r)) {
            return Err(StationaryError::SectorNotClosed(lambda.to_vec()));
        }
    }
    let block = l.restrict(&idx);
    let ns = null_space(&block);
    if ns.len() != 1 {
        return Err(StationaryError::NullDimension { dim: ns.len() });
    }
    let v = &ns[0];
    let anchor = antidominant_rep(lambda, Some(spec.rl.min(spec.rr) as i32));
    let pos = configs
        .iter()
        .position(|m| *m == anchor)
        .expect("anchor in orbit");
    let scale = if v[pos].is_zero() {
        // the anchor is transient; fall back to the first nonzero entry
        v.iter()
            .find(|x| !x.is_zero())
            .expect("null vector")
            .recip()
    } else {
        v[pos].recip()
    };
    let weights: BTreeMap<Composition, Rational> = configs
        .iter()
        .zip(v)
        .map(|(m, x)| (m.clone(), x * &scale))
        .collect();
    Ok(StationaryState::new(
        spec,
        lambda,
        weights,
        Provenance::Nullspace,
    ))
}
