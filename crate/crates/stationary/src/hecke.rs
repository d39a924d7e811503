use std::collections::BTreeMap;

use masep_algebra::{AlgebraError, Rational, Series};
use masep_hecke::{f_family, symmetrise, HeckeContext, HeckeError, HeckeParams, PolyFamily, XPoly};
use masep_lattice::{
    generator_direct, k0, kn, r_check, ModelSpec, ParamPoint, SparseOperator, TransferBuilder,
};
use masep_weyl::{antidominant_rep, Composition};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::nullspace::{nullspace_stationary_with, sector_configs};
use crate::report::ser;
use crate::state::{Provenance, StationaryState};
use crate::StationaryError;

pub fn hecke_params(p: &ParamPoint) -> HeckeParams {
    HeckeParams::from_lattice(&p.t, &p.a, &p.b, &p.c, &p.d)
}

/// The family `f_μ` of one sector with `q` specialised to 1, as polynomials in `x`.
#[derive(Clone, Debug)]
pub struct Q1Family {
    pub lambda: Composition,
    pub delta: Composition,
    pub members: BTreeMap<Composition, XPoly<Rational>>,
    /// Number of series terms that was enough.
    pub series_terms: usize,
}

impl Q1Family {
    /// `K_λ(x; q = 1)`, with its Hecke invariance checked.
    pub fn symmetric(&self, params: &HeckeParams) -> Result<XPoly<Rational>, StationaryError> {
        let ctx = q1_context(self.lambda.len(), params)?;
        let fam = PolyFamily {
            lambda: self.lambda.clone(),
            delta: self.delta.clone(),
            members: self.members.clone(),
        };
        Ok(symmetrise(&ctx, &fam)?)
    }

    pub fn values_at_ones(&self) -> BTreeMap<Composition, Rational> {
        self.members
            .iter()
            .map(|(m, f)| (m.clone(), f.value_at_ones()))
            .collect()
    }

    pub fn z(&self) -> Rational {
        self.members.values().map(|f| f.value_at_ones()).sum()
    }
}

pub(crate) fn q1_context(
    n: usize,
    params: &HeckeParams,
) -> Result<HeckeContext<Rational>, StationaryError> {
    Ok(HeckeContext::new(n, params.clone(), Rational::one())?)
}

enum Attempt {
    Retry(StationaryError),
    Fail(StationaryError),
}

fn family_with<const N: usize>(params: &HeckeParams, lambda: &[i32]) -> Result<Q1Family, Attempt> {
    let q = Series::<N>::shifted_variable(Rational::one());
    let ctx =
        HeckeContext::new(lambda.len(), params.clone(), q).map_err(|e| Attempt::Fail(e.into()))?;
    let fam = match f_family(&ctx, lambda) {
        Ok(f) => f,
        Err(HeckeError::InvalidInput(s)) => {
            return Err(Attempt::Fail(StationaryError::InvalidInput(s)))
        }
        Err(e) => return Err(Attempt::Retry(e.into())),
    };
    let mut members = BTreeMap::new();
    for (mu, f) in &fam.members {
        let g = f.map_coeffs(|c| c.value_at_zero()).map_err(|e| match e {
            AlgebraError::Pole(_) => Attempt::Fail(StationaryError::PoleAtOne(mu.clone())),
            _ => Attempt::Retry(StationaryError::PrecisionExhausted(lambda.to_vec())),
        })?;
        members.insert(mu.clone(), g);
    }
    Ok(Q1Family {
        lambda: lambda.to_vec(),
        delta: fam.delta,
        members,
        series_terms: N,
    })
}

/// Builds the family over truncated series in `q - 1` and keeps the constant terms.
/// The truncation order is raised until every coefficient is determined; if the largest
/// order still fails, its error is returned (a degenerate spectrum persists at every order).
pub fn family_at_q1(params: &HeckeParams, lambda: &[i32]) -> Result<Q1Family, StationaryError> {
    type Build = fn(&HeckeParams, &[i32]) -> Result<Q1Family, Attempt>;
    let orders: [Build; 4] = [
        family_with::<8>,
        family_with::<16>,
        family_with::<32>,
        family_with::<64>,
    ];
    let mut last = StationaryError::PrecisionExhausted(lambda.to_vec());
    for build in orders {
        match build(params, lambda) {
            Ok(f) => return Ok(f),
            Err(Attempt::Fail(e)) => return Err(e),
            Err(Attempt::Retry(e)) => last = e,
        }
    }
    Err(last)
}

fn check_standard(spec: &ModelSpec, lambda: &[i32]) -> Result<(), StationaryError> {
    if spec.rl != 0 || spec.rr != 0 {
        return Err(StationaryError::InvalidInput(
            "cutoffs are nonzero; use the generalised construction".into(),
        ));
    }
    if lambda.len() != spec.n || lambda.iter().any(|x| x.unsigned_abs() as usize > spec.r) {
        return Err(StationaryError::InvalidInput(format!(
            "{lambda:?} is not a configuration for n = {}, r = {}",
            spec.n, spec.r
        )));
    }
    Ok(())
}

/// Weights `f_μ(1^n)` at `q = 1`.
pub fn hecke_stationary(
    spec: &ModelSpec,
    lambda: &[i32],
) -> Result<(StationaryState, Q1Family), StationaryError> {
    check_standard(spec, lambda)?;
    let fam = family_at_q1(&hecke_params(&spec.params), lambda)?;
    Ok((state_from_family(spec, lambda, &fam), fam))
}

pub fn state_from_family(spec: &ModelSpec, lambda: &[i32], fam: &Q1Family) -> StationaryState {
    StationaryState::new(spec, lambda, fam.values_at_ones(), Provenance::Hecke)
}

/// Outcome of the exchange relations at one point `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeCheck {
    /// `Ř_i(x_{i+1}/x_i) Ψ = s_i Ψ` for `i = 1..n-1`.
    pub bulk: Vec<bool>,
    pub left: bool,
    pub right: bool,
}

impl ExchangeCheck {
    pub fn all_hold(&self) -> bool {
        self.left && self.right && self.bulk.iter().all(|&b| b)
    }
}

fn psi_at(
    spec: &ModelSpec,
    comps: &BTreeMap<Composition, XPoly<Rational>>,
    xs: &[Rational],
) -> Result<Vec<Rational>, StationaryError> {
    let mut v = vec![Rational::zero(); spec.dim()];
    for (mu, f) in comps {
        v[spec.config_index(mu)] = f
            .eval(xs)
            .ok_or_else(|| StationaryError::InvalidInput("x has a zero entry".into()))?;
    }
    Ok(v)
}

/// Checks the exchange relations of the component vector at `q = 1` and the point `xs`.
pub fn exchange_check(
    spec: &ModelSpec,
    comps: &BTreeMap<Composition, XPoly<Rational>>,
    xs: &[Rational],
) -> Result<ExchangeCheck, StationaryError> {
    let n = spec.n;
    if xs.len() != n || xs.iter().any(|x| x.is_zero()) {
        return Err(StationaryError::InvalidInput(format!(
            "need {n} nonzero inhomogeneities"
        )));
    }
    let factors = spec.site_factors();
    let psi = psi_at(spec, comps, xs)?;
    let mut bulk = Vec::new();
    for i in 1..n {
        let r = r_check(&(&xs[i] / &xs[i - 1]), spec.r, &spec.params.t)?;
        let lhs = r.embed(&factors, &[i - 1, i]).apply(&psi);
        let mut ys = xs.to_vec();
        ys.swap(i - 1, i);
        bulk.push(lhs == psi_at(spec, comps, &ys)?);
    }
    let side = |op: SparseOperator<Rational>, site: usize| -> Result<bool, StationaryError> {
        let lhs = op.embed(&factors, &[site]).apply(&psi);
        let mut ys = xs.to_vec();
        ys[site] = ys[site].recip();
        Ok(lhs == psi_at(spec, comps, &ys)?)
    };
    let left = side(k0(&xs[0], spec, None)?, 0)?;
    let right = side(kn(&xs[n - 1], spec)?, n - 1)?;
    Ok(ExchangeCheck { bulk, left, right })
}

/// Cross-check of the Hecke weights against the null-space oracle and of `Z_λ = K_λ(1^n)`.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub sector: Composition,
    /// Nonzero entries of `L Ψ`.
    pub residual_nnz: usize,
    /// `Ψ_hecke / Ψ_nullspace` when the two are proportional.
    #[serde(with = "ser::opt_rat")]
    pub scale: Option<Rational>,
    pub nullspace_error: Option<String>,
    /// `E_δ(1^n)` at `q = 1`, the anchor of both normalisations.
    #[serde(with = "ser::rat")]
    pub anchor: Rational,
    #[serde(with = "ser::rat")]
    pub z_hecke: Rational,
    #[serde(with = "ser::opt_rat")]
    pub z_nullspace: Option<Rational>,
    #[serde(with = "ser::rat")]
    pub k_at_ones: Rational,
}

impl TheoremReport {
    pub fn pass(&self) -> bool {
        self.residual_nnz == 0
            && self.scale.is_some()
            && self.z_hecke == self.k_at_ones
            && self.z_nullspace.as_ref() == Some(&self.z_hecke)
    }
}

/// Runs the full comparison for one sector, reusing a precomputed family if given.
pub fn theorem_check(
    spec: &ModelSpec,
    lambda: &[i32],
    fam: Option<&Q1Family>,
) -> Result<TheoremReport, StationaryError> {
    check_standard(spec, lambda)?;
    let params = hecke_params(&spec.params);
    let owned;
    let fam = match fam {
        Some(f) => f,
        None => {
            owned = family_at_q1(&params, lambda)?;
            &owned
        }
    };
    let hecke = state_from_family(spec, lambda, fam);
    let l = generator_direct(spec)?;
    let residual_nnz = hecke.residual_nnz(&l);
    let anchor = fam.members[&fam.delta].value_at_ones();
    let (scale, z_nullspace, nullspace_error) = match nullspace_stationary_with(spec, &l, lambda) {
        Ok(null) => {
            let delta = antidominant_rep(lambda, None);
            let z = if null.weights[&delta].is_zero() {
                None
            } else {
                Some(&null.z * &anchor / &null.weights[&delta])
            };
            (hecke.scale_to(&null), z, None)
        }
        Err(e) => (None, None, Some(e.to_string())),
    };
    let k_at_ones = fam.symmetric(&params)?.value_at_ones();
    Ok(TheoremReport {
        sector: lambda.to_vec(),
        residual_nnz,
        scale,
        nullspace_error,
        anchor,
        z_hecke: hecke.z,
        z_nullspace,
        k_at_ones,
    })
}

/// `Λ_λ(w)` with `⟨θ_λ| T(w) = Λ_λ(w) ⟨θ_λ|`; errors if the row of ones is not a left
/// eigenvector on the sector.
pub fn transfer_eigenvalue(
    builder: &TransferBuilder,
    lambda: &[i32],
    w: &Rational,
    xs: &[Rational],
) -> Result<Rational, StationaryError> {
    let spec = &builder.spec;
    let t = builder.transfer(w, xs)?;
    let configs = sector_configs(spec, lambda);
    let idx: Vec<usize> = configs.iter().map(|m| spec.config_index(m)).collect();
    let ones: Vec<Rational> = (0..spec.dim())
        .map(|i| {
            if idx.binary_search(&i).is_ok() {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect();
    let row = t.apply_left(&ones);
    let lam = row[idx[0]].clone();
    let consistent = row.iter().enumerate().all(|(i, v)| {
        if idx.binary_search(&i).is_ok() {
            *v == lam
        } else {
            true
        }
    });
    if !consistent {
        return Err(StationaryError::NotLeftEigenvector(lambda.to_vec()));
    }
    Ok(lam)
}
