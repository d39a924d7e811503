use std::collections::BTreeMap;

use masep_algebra::{pow_i, Rational};
use masep_hecke::XPoly;
use masep_lattice::{generator_direct, ModelSpec};
use masep_weyl::{length_and_minus, mu_split, orbit, Composition};
use serde::Serialize;

use crate::hecke::{family_at_q1, hecke_params, q1_context, Q1Family};
use crate::nullspace::nullspace_stationary_with;
use crate::report::ser;
use crate::state::{Provenance, StationaryState};
use crate::StationaryError;

/// `t^{-ℓ(μ)} (t/t_n)^{m(μ)}` with length and sign count taken in the group whose
/// sign flips freeze labels of modulus at most `r_R`.
pub fn constant_weight(mu: &[i32], rr: usize, t: &Rational, tn: &Rational) -> Rational {
    if mu.is_empty() {
        return Rational::from_integer(1.into());
    }
    let (l, m) = length_and_minus(mu, Some(rr as i32));
    pow_i(t, -(l as i64)).expect("t nonzero") * pow_i(&(t / tn), m as i64).expect("t_n nonzero")
}

fn check_generalised(spec: &ModelSpec, lambda: &[i32]) -> Result<(), StationaryError> {
    if spec.rr > spec.rl {
        return Err(StationaryError::InvalidInput(
            "the product formula is stated for r_R <= r_L".into(),
        ));
    }
    let ok = lambda.len() == spec.n
        && lambda.windows(2).all(|w| w[0] >= w[1])
        && lambda
            .iter()
            .all(|&x| x <= spec.r as i32 && x >= -(spec.rr as i32));
    if !ok {
        return Err(StationaryError::InvalidInput(format!(
            "{lambda:?} is not a generalised dominant weight for r = {}, r_R = {}",
            spec.r, spec.rr
        )));
    }
    Ok(())
}

/// Components `f^λ̄_μ(x)` at `q = 1` over the deformed orbit, built from the standard family
/// of `λ̄^π`.
pub fn generalised_weights(
    spec: &ModelSpec,
    lambda: &[i32],
) -> Result<BTreeMap<Composition, XPoly<Rational>>, StationaryError> {
    check_generalised(spec, lambda)?;
    let (_, lpi) = mu_split(lambda, spec.rl as i32);
    let fam = family_at_q1(&hecke_params(&spec.params), &lpi)?;
    Ok(assemble(spec, lambda, &fam))
}

fn assemble(
    spec: &ModelSpec,
    lambda: &[i32],
    fam: &Q1Family,
) -> BTreeMap<Composition, XPoly<Rational>> {
    let t = &spec.params.t;
    let tn = spec.params.tn();
    orbit(lambda, Some(spec.rr as i32))
        .into_iter()
        .map(|mu| {
            let (c, p) = mu_split(&mu, spec.rl as i32);
            let f = fam.members[&p].scale(&constant_weight(&c, spec.rr, t, &tn));
            (mu, f)
        })
        .collect()
}

pub fn generalised_stationary(
    spec: &ModelSpec,
    lambda: &[i32],
) -> Result<StationaryState, StationaryError> {
    let comps = generalised_weights(spec, lambda)?;
    let weights = comps
        .iter()
        .map(|(m, f)| (m.clone(), f.value_at_ones()))
        .collect();
    Ok(StationaryState::new(
        spec,
        lambda,
        weights,
        Provenance::ProductFormula,
    ))
}

/// One failed component relation, named by the boundary or bulk case it belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationFailure {
    pub case: String,
    pub mu: Composition,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneralisedReport {
    pub sector: Composition,
    pub relations_checked: usize,
    pub failures: Vec<RelationFailure>,
    pub residual_nnz: usize,
    #[serde(with = "ser::opt_rat")]
    pub scale: Option<Rational>,
    pub nullspace_error: Option<String>,
    #[serde(with = "ser::rat")]
    pub z: Rational,
}

impl GeneralisedReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty() && self.residual_nnz == 0 && self.scale.is_some()
    }
}

/// Checks the component relations for `T_0, T_i, T_n` at `q = 1`, stationarity under the
/// generator with cutoffs, and proportionality to the null-space oracle.
pub fn generalised_check(
    spec: &ModelSpec,
    lambda: &[i32],
) -> Result<GeneralisedReport, StationaryError> {
    let comps = generalised_weights(spec, lambda)?;
    let hp = hecke_params(&spec.params);
    let ctx = q1_context(spec.n, &hp)?;
    let (n, rl, rr) = (spec.n, spec.rl as i32, spec.rr as i32);
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut check = |case: &str, mu: &Composition, lhs: XPoly<Rational>, rhs: &XPoly<Rational>| {
        checked += 1;
        if !lhs.equals(rhs) {
            failures.push(RelationFailure {
                case: case.to_string(),
                mu: mu.clone(),
            });
        }
    };
    for (mu, f) in &comps {
        let t0f = ctx.apply(0, f)?;
        if mu[0] < -rl {
            let mut nu = mu.clone();
            nu[0] = -nu[0];
            check("left boundary: mu_1 < -r_L", mu, t0f, &comps[&nu]);
        } else if mu[0].abs() <= rl {
            check("left boundary: |mu_1| <= r_L", mu, t0f, &f.scale(ctx.t0()));
        }
        for i in 1..n {
            let tif = ctx.apply(i, f)?;
            if mu[i - 1] == mu[i] {
                check("bulk: mu_i = mu_{i+1}", mu, tif, &f.scale(ctx.t()));
            } else if mu[i - 1] > mu[i] {
                let mut nu = mu.clone();
                nu.swap(i - 1, i);
                let case = if mu[i - 1].abs() <= rl && mu[i].abs() <= rl {
                    "bulk: mu_i > mu_{i+1}, both within r_L"
                } else {
                    "bulk: mu_i > mu_{i+1}, one beyond r_L"
                };
                check(case, mu, tif, &comps[&nu]);
            }
        }
        let tnf = ctx.apply(n, f)?;
        let last = mu[n - 1];
        if last.abs() <= rr {
            check("right boundary: |mu_n| <= r_R", mu, tnf, &f.scale(ctx.tn()));
        } else if last > rl {
            let mut nu = mu.clone();
            nu[n - 1] = -last;
            check("right boundary: mu_n > r_L", mu, tnf, &comps[&nu]);
        } else if last > rr {
            let mut nu = mu.clone();
            nu[n - 1] = -last;
            check("right boundary: r_R < mu_n <= r_L", mu, tnf, &comps[&nu]);
        }
    }
    let state = StationaryState::new(
        spec,
        lambda,
        comps
            .iter()
            .map(|(m, f)| (m.clone(), f.value_at_ones()))
            .collect(),
        Provenance::ProductFormula,
    );
    let l = generator_direct(spec)?;
    let residual_nnz = state.residual_nnz(&l);
    let (scale, nullspace_error) = match nullspace_stationary_with(spec, &l, lambda) {
        Ok(null) => (state.scale_to(&null), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let z = state.z.clone();
    Ok(GeneralisedReport {
        sector: lambda.to_vec(),
        relations_checked: checked,
        failures,
        residual_nnz,
        scale,
        nullspace_error,
        z,
    })
}
