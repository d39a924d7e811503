use masep_algebra::Rational;
use masep_hecke::XPoly;
use masep_lattice::ParamPoint;
use masep_weyl::{conjugate, Composition};
use num_traits::One;
use serde::Serialize;

use crate::hecke::{family_at_q1, hecke_params};
use crate::report::ser;
use crate::StationaryError;

#[derive(Clone, Debug, Serialize)]
pub struct FactorisationReport {
    pub lambda: Composition,
    /// Columns `1^{λ'_i} 0^{n - λ'_i}`.
    pub columns: Vec<Composition>,
    #[serde(with = "ser::rat")]
    pub z: Rational,
    #[serde(with = "ser::rat_vec")]
    pub column_z: Vec<Rational>,
    #[serde(with = "ser::rat")]
    pub product: Rational,
    /// `K_λ(x; 1) = Π K_{1^{λ'_i}}(x; 1)` as polynomials, when requested.
    pub polynomial_identity: Option<bool>,
}

impl FactorisationReport {
    pub fn pass(&self) -> bool {
        self.z == self.product && self.polynomial_identity != Some(false)
    }
}

/// Compares `Z_λ` with the product of the column normalisations on the same `n` sites.
pub fn factorisation_check(
    params: &ParamPoint,
    lambda: &[i32],
    polynomial: bool,
) -> Result<FactorisationReport, StationaryError> {
    let heights = conjugate(lambda)
        .map_err(|_| StationaryError::InvalidInput(format!("{lambda:?} is not a partition")))?;
    let n = lambda.len();
    let hp = hecke_params(params);
    let columns: Vec<Composition> = heights
        .iter()
        .map(|&h| (0..n).map(|i| i32::from((i as i32) < h)).collect())
        .collect();
    let whole = family_at_q1(&hp, lambda)?;
    let mut column_z = Vec::new();
    let mut product = Rational::one();
    let mut kprod = XPoly::one(n);
    for col in &columns {
        let fam = family_at_q1(&hp, col)?;
        let z = fam.z();
        product *= &z;
        column_z.push(z);
        if polynomial {
            kprod = kprod.mul(&fam.symmetric(&hp)?);
        }
    }
    let polynomial_identity = if polynomial {
        Some(whole.symmetric(&hp)?.equals(&kprod))
    } else {
        None
    };
    Ok(FactorisationReport {
        lambda: lambda.to_vec(),
        columns,
        z: whole.z(),
        column_z,
        product,
        polynomial_identity,
    })
}
