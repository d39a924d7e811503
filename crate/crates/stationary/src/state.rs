use std::collections::BTreeMap;

use masep_algebra::Rational;
use masep_lattice::{ModelSpec, SparseOperator};
use masep_weyl::Composition;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Hecke,
    Nullspace,
    ProductFormula,
}

/// Weights of one sector, indexed by configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StationaryState {
    pub spec: ModelSpec,
    pub sector: Composition,
    pub weights: BTreeMap<Composition, Rational>,
    pub z: Rational,
    pub provenance: Provenance,
}

impl StationaryState {
    pub fn new(
        spec: &ModelSpec,
        sector: &[i32],
        weights: BTreeMap<Composition, Rational>,
        provenance: Provenance,
    ) -> Self {
        let z = weights.values().sum();
        StationaryState {
            spec: spec.clone(),
            sector: sector.to_vec(),
            weights,
            z,
            provenance,
        }
    }

    /// Dense vector on the full configuration space.
    pub fn full_vector(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.spec.dim()];
        for (mu, w) in &self.weights {
            v[self.spec.config_index(mu)] = w.clone();
        }
        v
    }

    /// Number of nonzero entries of `L w`.
    pub fn residual_nnz(&self, l: &SparseOperator<Rational>) -> usize {
        l.apply(&self.full_vector())
            .iter()
            .filter(|x| !x.is_zero())
            .count()
    }

    /// `c` with `self = c * other` on identical supports, if it exists.
    pub fn scale_to(&self, other: &StationaryState) -> Option<Rational> {
        if self.weights.len() != other.weights.len() {
            return None;
        }
        let mut c: Option<Rational> = None;
        for (mu, w) in &self.weights {
            let o = other.weights.get(mu)?;
            if o.is_zero() || w.is_zero() {
                if !(o.is_zero() && w.is_zero()) {
                    return None;
                }
                continue;
            }
            let r = w / o;
            match &c {
                None => c = Some(r),
                Some(c0) if *c0 == r => {}
                Some(_) => return None,
            }
        }
        c
    }

    pub fn rescaled(&self, c: &Rational) -> StationaryState {
        let weights = self
            .weights
            .iter()
            .map(|(m, w)| (m.clone(), w * c))
            .collect();
        StationaryState::new(&self.spec, &self.sector, weights, self.provenance)
    }

    /// True when all nonzero weights share one sign.
    pub fn single_signed(&self) -> bool {
        let pos = self.weights.values().any(|w| w.is_positive());
        let neg = self.weights.values().any(|w| w.is_negative());
        !(pos && neg)
    }
}
