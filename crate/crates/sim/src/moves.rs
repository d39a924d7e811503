use std::collections::BTreeMap;

use masep_algebra::{to_f64, Rational};
use masep_lattice::{ModelSpec, Rates, SparseOperator};
use masep_weyl::Composition;
use num_traits::One;

use crate::SimError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MoveKind {
    /// `μ_i < μ_{i+1}` swapped, rate 1.
    BulkUp,
    /// `μ_i > μ_{i+1}` swapped, rate `t`.
    BulkDown,
    Alpha,
    Gamma,
    Beta,
    Delta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub to: Composition,
    pub kind: MoveKind,
}

/// The rate of each kind of move.
impl MoveKind {
    pub fn exact(self, rt: &Rates) -> Rational {
        match self {
            MoveKind::BulkUp => Rational::one(),
            MoveKind::BulkDown => rt.t.clone(),
            MoveKind::Alpha => rt.alpha.clone(),
            MoveKind::Gamma => rt.gamma.clone(),
            MoveKind::Beta => rt.beta.clone(),
            MoveKind::Delta => rt.delta.clone(),
        }
    }
}

/// Rates as floats, as used by the simulator.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatRates {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub t: f64,
}

impl FloatRates {
    pub fn from_exact(rt: &Rates) -> Result<Self, SimError> {
        let f = FloatRates {
            alpha: to_f64(&rt.alpha),
            beta: to_f64(&rt.beta),
            gamma: to_f64(&rt.gamma),
            delta: to_f64(&rt.delta),
            t: to_f64(&rt.t),
        };
        for (v, name) in [
            (f.alpha, "alpha"),
            (f.beta, "beta"),
            (f.gamma, "gamma"),
            (f.delta, "delta"),
            (f.t, "t"),
        ] {
            if v < 0.0 {
                return Err(SimError::NegativeRate(format!("{name} = {v}")));
            }
        }
        Ok(f)
    }

    pub fn of(&self, kind: MoveKind) -> f64 {
        match kind {
            MoveKind::BulkUp => 1.0,
            MoveKind::BulkDown => self.t,
            MoveKind::Alpha => self.alpha,
            MoveKind::Gamma => self.gamma,
            MoveKind::Beta => self.beta,
            MoveKind::Delta => self.delta,
        }
    }
}

/// Enabled moves out of `mu`, from the hopping rules.
pub fn moves_from(spec: &ModelSpec, mu: &[i32]) -> Vec<Move> {
    let n = mu.len();
    let mut out = Vec::new();
    let mut push = |to: Composition, kind| out.push(Move { to, kind });
    for i in 0..n.saturating_sub(1) {
        let (a, b) = (mu[i], mu[i + 1]);
        if a != b {
            let mut to = mu.to_vec();
            to.swap(i, i + 1);
            push(
                to,
                if a < b {
                    MoveKind::BulkUp
                } else {
                    MoveKind::BulkDown
                },
            );
        }
    }
    // negative label -m pairs with the positive label partner(m)
    let partner = |m: i32| spec.convention.partner(m as usize, spec.r) as i32;
    let unpartner = |v: i32| (1..=spec.r as i32).find(|&m| partner(m) == v);
    let flip = |site: usize, cutoff: usize, inject: MoveKind, eject: MoveKind| {
        let v = mu[site];
        let mut to = mu.to_vec();
        if v < 0 && -v > cutoff as i32 {
            to[site] = partner(-v);
            Some((to, inject))
        } else if v > 0 {
            let m = unpartner(v)?;
            if m <= cutoff as i32 {
                return None;
            }
            to[site] = -m;
            Some((to, eject))
        } else {
            None
        }
    };
    if let Some((to, k)) = flip(0, spec.rl, MoveKind::Alpha, MoveKind::Gamma) {
        push(to, k);
    }
    if let Some((to, k)) = flip(n - 1, spec.rr, MoveKind::Delta, MoveKind::Beta) {
        push(to, k);
    }
    out
}

/// Compares the enabled moves of every configuration with the off-diagonal part of `l`.
/// Returns the configurations whose column disagrees.
pub fn audit_against_generator(
    spec: &ModelSpec,
    rates: &Rates,
    l: &SparseOperator<Rational>,
) -> Vec<Composition> {
    let mut bad = Vec::new();
    for idx in 0..spec.dim() {
        let mu = spec.config(idx);
        let mut expect: BTreeMap<usize, Rational> = BTreeMap::new();
        for m in moves_from(spec, &mu) {
            *expect.entry(spec.config_index(&m.to)).or_default() += m.kind.exact(rates);
        }
        expect.retain(|_, v| *v != Rational::default());
        let exit: Rational = expect.values().sum();
        let got: BTreeMap<usize, Rational> = l
            .column(idx)
            .iter()
            .filter(|(r, v)| **r != idx && **v != Rational::default())
            .map(|(r, v)| (*r, v.clone()))
            .collect();
        if got != expect || l.get(idx, idx) != -exit {
            bad.push(mu);
        }
    }
    bad
}
