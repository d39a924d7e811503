use std::collections::BTreeSet;

use masep_algebra::{int, Dual, Field, Rational};
use num_traits::{One, Zero};

use crate::matrices::{k0, kn, r_check};
use crate::model::{rates, ModelSpec, Rates};
use crate::operator::SparseOperator;
use crate::transfer::TransferBuilder;
use crate::LatticeError;

/// Markov generator assembled from the hopping rules (columns sum to zero).
pub fn generator_direct(spec: &ModelSpec) -> Result<SparseOperator<Rational>, LatticeError> {
    Ok(generator_with_rates(spec, &rates(&spec.params)?))
}

/// As [`generator_direct`], with the rates given directly; `spec.params` is ignored.
pub fn generator_with_rates(spec: &ModelSpec, rt: &Rates) -> SparseOperator<Rational> {
    let (n, r) = (spec.n, spec.r);
    let mut l = SparseOperator::zero(spec.site_factors());
    let hop = |l: &mut SparseOperator<Rational>, from: usize, to: &[i32], rate: &Rational| {
        if rate.is_zero() {
            return;
        }
        let j = spec.config_index(to);
        l.add_entry(j, from, rate.clone());
        l.add_entry(from, from, -rate.clone());
    };
    for idx in 0..spec.dim() {
        let mu = spec.config(idx);
        for i in 0..n - 1 {
            if mu[i] == mu[i + 1] {
                continue;
            }
            let mut nu = mu.clone();
            nu.swap(i, i + 1);
            let rate = if mu[i] < mu[i + 1] {
                Rational::one()
            } else {
                rt.t.clone()
            };
            hop(&mut l, idx, &nu, &rate);
        }
        for m in spec.rl + 1..=r {
            let p = spec.convention.partner(m, r) as i32;
            let m = m as i32;
            let mut nu = mu.clone();
            if mu[0] == -m {
                nu[0] = p;
                hop(&mut l, idx, &nu, &rt.alpha);
            } else if mu[0] == p {
                nu[0] = -m;
                hop(&mut l, idx, &nu, &rt.gamma);
            }
        }
        for m in spec.rr + 1..=r {
            let p = spec.convention.partner(m, r) as i32;
            let m = m as i32;
            let mut nu = mu.clone();
            if mu[n - 1] == p {
                nu[n - 1] = -m;
                hop(&mut l, idx, &nu, &rt.beta);
            } else if mu[n - 1] == -m {
                nu[n - 1] = p;
                hop(&mut l, idx, &nu, &rt.delta);
            }
        }
    }
    l
}

fn derivative_part(op: &SparseOperator<Dual>) -> SparseOperator<Rational> {
    op.try_map::<Rational, LatticeError>(|v| Ok(v.eps.clone()))
        .expect("infallible")
}

fn value_part(op: &SparseOperator<Dual>) -> SparseOperator<Rational> {
    op.try_map::<Rational, LatticeError>(|v| Ok(v.re.clone()))
        .expect("infallible")
}

/// `K_n'(1)`, reported alongside the identity `K_n(1) = I`.
pub fn kn_derivative_at_one(spec: &ModelSpec) -> Result<SparseOperator<Rational>, LatticeError> {
    Ok(derivative_part(&kn(
        &Dual::variable(Rational::one()),
        spec,
    )?))
}

/// `(1-t) (K_0'(1)/2 + sum_i Ř'_{i,i+1}(1) - K_n'(1)/2)`.
pub fn generator_local(spec: &ModelSpec) -> Result<SparseOperator<Rational>, LatticeError> {
    let one = Dual::variable(Rational::one());
    let f = spec.site_factors();
    let t = &spec.params.t;
    let half = Rational::new(1.into(), 2.into());
    let mut acc = derivative_part(&k0(&one, spec, None)?)
        .embed(&f, &[0])
        .scale(&half);
    let dr = derivative_part(&r_check(&one, spec.r, t)?);
    for i in 0..spec.n - 1 {
        acc = acc.add(&dr.embed(&f, &[i, i + 1]))?;
    }
    acc = acc.sub(
        &derivative_part(&kn(&one, spec)?)
            .embed(&f, &[spec.n - 1])
            .scale(&half),
    )?;
    Ok(acc.scale(&(Rational::one() - t)))
}

/// `(1-t)/2 T'(1)` at the homogeneous point, and `T(1)` itself.
pub fn generator_from_transfer(
    builder: &TransferBuilder,
) -> Result<(SparseOperator<Rational>, SparseOperator<Rational>), LatticeError> {
    let spec = &builder.spec;
    let w = Dual::variable(Rational::one());
    let xs = vec![Dual::fone(); spec.n];
    let tw = builder.transfer(&w, &xs)?;
    let scale = (Rational::one() - &spec.params.t) / int(2);
    Ok((derivative_part(&tw).scale(&scale), value_part(&tw)))
}

/// Basis indices of a sector given as a list of configurations.
pub fn sector_basis(spec: &ModelSpec, configs: &[Vec<i32>]) -> Vec<usize> {
    let mut v: Vec<usize> = configs.iter().map(|m| spec.config_index(m)).collect();
    v.sort_unstable();
    v
}

/// True when no entry of `op` connects the listed index blocks to each other.
pub fn respects_blocks(op: &SparseOperator<Rational>, blocks: &[Vec<usize>]) -> bool {
    let mut owner = vec![usize::MAX; op.dim()];
    for (b, idxs) in blocks.iter().enumerate() {
        for &i in idxs {
            owner[i] = b;
        }
    }
    op.entries()
        .into_iter()
        .all(|(r, c, _)| owner[r] == owner[c])
}

/// Connected components of the transition graph of `op`.
pub fn communicating_blocks(op: &SparseOperator<Rational>) -> Vec<Vec<usize>> {
    let n = op.dim();
    let mut adj = vec![BTreeSet::new(); n];
    for (r, c, _) in op.entries() {
        adj[r].insert(c);
        adj[c].insert(r);
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}
