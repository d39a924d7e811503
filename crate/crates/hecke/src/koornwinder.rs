use std::collections::{BTreeMap, BTreeSet, VecDeque};

use masep_algebra::par::Exec;
use masep_algebra::{rat, Field};
use masep_weyl::{antidominant_rep, order_succeq, Composition};

use crate::ops::HeckeContext;
use crate::poly::XPoly;
use crate::HeckeError;

/// Weights for the combination `Σ θ_i Y_i` whose eigenvectors are the `E_λ`; `attempt`
/// selects another generic choice after an accidental collision.
fn theta<S: Field>(n: usize, attempt: usize) -> Vec<S> {
    const P: [i64; 8] = [1, 3, 5, 7, 11, 13, 17, 19];
    (0..n)
        .map(|i| {
            let k = i + 3 * attempt;
            S::from_rational(&rat(
                P[k % 8] * (i as i64 + 1) + attempt as i64,
                P[(k + 3) % 8] + 2 * i as i64,
            ))
        })
        .collect()
}

const THETA_ATTEMPTS: usize = 6;

/// Matrices of `Y_1..Y_n` on the support closure of `x^λ`, column by column.
struct Span<S> {
    order: Vec<Composition>,
    cols: BTreeMap<Composition, Vec<XPoly<S>>>,
}

impl<S: Field> Span<S> {
    fn diagonal(&self, mu: &Composition, i: usize) -> S {
        self.cols[mu][i].coeff(mu)
    }

    fn combined(&self, th: &[S]) -> BTreeMap<Composition, XPoly<S>> {
        self.cols
            .iter()
            .map(|(mu, ys)| {
                let mut acc = XPoly::zero(mu.len());
                for (y, w) in ys.iter().zip(th) {
                    acc.add_scaled(y, w);
                }
                (mu.clone(), acc)
            })
            .collect()
    }
}

fn build_span<S: Field>(
    ctx: &HeckeContext<S>,
    lambda: &[i32],
    exec: Exec,
) -> Result<Span<S>, HeckeError> {
    let n = ctx.n;
    let apply_all = |mu: &Composition| -> Result<Vec<XPoly<S>>, HeckeError> {
        let m = XPoly::monomial(mu.clone(), S::fone());
        (1..=n).map(|i| ctx.y_operator(i, &m)).collect()
    };
    let mut cols: BTreeMap<Composition, Vec<XPoly<S>>> = BTreeMap::new();
    let mut seen: BTreeSet<Composition> = BTreeSet::from([lambda.to_vec()]);
    let mut order = vec![lambda.to_vec()];
    let mut frontier = vec![lambda.to_vec()];
    while !frontier.is_empty() {
        let imgs = exec.map(&frontier, apply_all);
        let mut next = Vec::new();
        for (mu, img) in frontier.iter().zip(imgs) {
            let img = img?;
            for e in img.iter().flat_map(|y| y.support()) {
                if seen.insert(e.clone()) {
                    if !order_succeq(lambda, e)
                        .map_err(|e| HeckeError::InvalidInput(e.to_string()))?
                    {
                        return Err(HeckeError::SpanEscaped {
                            lambda: lambda.to_vec(),
                            mu: e.clone(),
                        });
                    }
                    order.push(e.clone());
                    next.push(e.clone());
                }
            }
            cols.insert(mu.clone(), img);
        }
        frontier = next;
    }
    Ok(Span { order, cols })
}

/// Topological order of the span: `μ` before `ν` whenever some `Y_i x^μ` has an `x^ν` term.
fn topo<S: Field>(span: &Span<S>, lambda: &[i32]) -> Result<Vec<Composition>, HeckeError> {
    let succ: BTreeMap<&Composition, BTreeSet<&Composition>> = span
        .cols
        .iter()
        .map(|(mu, ys)| {
            let s = ys.iter().flat_map(|y| y.support()).filter(|e| *e != mu);
            (mu, s.collect())
        })
        .collect();
    let mut indeg: BTreeMap<&Composition, usize> = span.order.iter().map(|m| (m, 0)).collect();
    for e in succ.values().flatten() {
        *indeg.get_mut(e).expect("span is closed") += 1;
    }
    let mut queue: VecDeque<&Composition> = indeg
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(m, _)| *m)
        .collect();
    let mut out = Vec::new();
    while let Some(m) = queue.pop_front() {
        out.push(m.clone());
        for e in &succ[m] {
            let d = indeg.get_mut(e).expect("span is closed");
            *d -= 1;
            if *d == 0 {
                queue.push_back(e);
            }
        }
    }
    if out.len() != span.order.len() || out.first().map(|v| v.as_slice()) != Some(lambda) {
        return Err(HeckeError::NotTriangular(lambda.to_vec()));
    }
    Ok(out)
}

/// Monic non-symmetric Koornwinder polynomial `E_λ`: the joint eigenfunction of the `Y_i`
/// with leading monomial `x^λ`.
pub fn nonsymmetric_e<S: Field>(
    ctx: &HeckeContext<S>,
    lambda: &[i32],
) -> Result<XPoly<S>, HeckeError> {
    nonsymmetric_e_with(ctx, lambda, Exec::default())
}

pub fn nonsymmetric_e_with<S: Field>(
    ctx: &HeckeContext<S>,
    lambda: &[i32],
    exec: Exec,
) -> Result<XPoly<S>, HeckeError> {
    if lambda.len() != ctx.n {
        return Err(HeckeError::InvalidInput(format!(
            "composition of length {} for n = {}",
            lambda.len(),
            ctx.n
        )));
    }
    let span = build_span(ctx, lambda, exec)?;
    let order = topo(&span, lambda)?;
    let lam = lambda.to_vec();
    let y = ctx.spectral_values(lambda);
    if (0..ctx.n).any(|i| !span.diagonal(&lam, i).equals(&y[i])) {
        return Err(HeckeError::SpectrumMismatch(lam));
    }
    let mut last = None;
    for attempt in 0..THETA_ATTEMPTS {
        match solve_triangular(&span, &order, &y, &theta::<S>(ctx.n, attempt)) {
            Ok(coef) => return Ok(XPoly::from_terms(ctx.n, coef)),
            Err(nu) => {
                // a genuine collision of the joint spectrum cannot be cured by reweighting
                if (0..ctx.n).all(|i| span.diagonal(&nu, i).equals(&y[i])) {
                    return Err(HeckeError::Degenerate {
                        lambda: lam,
                        mu: nu,
                    });
                }
                last = Some(nu);
            }
        }
    }
    Err(HeckeError::Degenerate {
        lambda: lam,
        mu: last.expect("at least one attempt"),
    })
}

/// Back-substitution for the eigenvector of `Σ θ_i Y_i`; on a vanishing gap returns the
/// offending weight.
fn solve_triangular<S: Field>(
    span: &Span<S>,
    order: &[Composition],
    y: &[S],
    th: &[S],
) -> Result<BTreeMap<Composition, S>, Composition> {
    let cols = span.combined(th);
    let lambda = &order[0];
    let z = th
        .iter()
        .zip(y)
        .fold(S::fzero(), |a, (w, v)| a.add(&w.mul(v)));
    let mut coef: BTreeMap<Composition, S> = BTreeMap::new();
    coef.insert(lambda.clone(), S::fone());
    // rows accumulate contributions from already-solved columns
    let mut acc: BTreeMap<Composition, S> = BTreeMap::new();
    let push = |acc: &mut BTreeMap<Composition, S>, mu: &Composition, c: &S| {
        for (e, v) in cols[mu].terms() {
            if e != mu {
                let slot = acc.entry(e.clone()).or_insert_with(S::fzero);
                *slot = slot.add(&v.mul(c));
            }
        }
    };
    push(&mut acc, lambda, &S::fone());
    for nu in order.iter().skip(1) {
        let rhs = acc.remove(nu).unwrap_or_else(S::fzero);
        let gap = z.sub(&cols[nu].coeff(nu));
        let c = match gap.inv() {
            Some(g) => rhs.mul(&g),
            None => return Err(nu.clone()),
        };
        if !c.fis_zero() {
            push(&mut acc, nu, &c);
            coef.insert(nu.clone(), c);
        }
    }
    Ok(coef)
}

/// `Y_i f - y f` for every `i`; all zero when `f` is an eigenfunction with spectrum `y`.
pub fn eigen_residuals<S: Field>(
    ctx: &HeckeContext<S>,
    f: &XPoly<S>,
    y: &[S],
) -> Result<Vec<XPoly<S>>, HeckeError> {
    (1..=ctx.n)
        .map(|i| Ok(ctx.y_operator(i, f)?.sub(&f.scale(&y[i - 1]))))
        .collect()
}

/// The family `f_μ`, `μ` in the orbit of `λ`: `f_δ = E_δ` for the antidominant `δ`, then
/// `f_{s_i μ} = T_i^{-1} f_μ` when `μ_i < μ_{i+1}` and `f_{s_n μ} = T_n^{-1} f_μ` when `μ_n < 0`.
#[derive(Clone, Debug)]
pub struct PolyFamily<S> {
    pub lambda: Composition,
    pub delta: Composition,
    pub members: BTreeMap<Composition, XPoly<S>>,
}

fn up_moves(mu: &[i32]) -> Vec<(usize, Composition)> {
    let n = mu.len();
    let mut v = Vec::new();
    for i in 1..n {
        if mu[i - 1] < mu[i] {
            let mut nu = mu.to_vec();
            nu.swap(i - 1, i);
            v.push((i, nu));
        }
    }
    if mu[n - 1] < 0 {
        let mut nu = mu.to_vec();
        nu[n - 1] = -nu[n - 1];
        v.push((n, nu));
    }
    v
}

pub fn f_family<S: Field>(
    ctx: &HeckeContext<S>,
    lambda: &[i32],
) -> Result<PolyFamily<S>, HeckeError> {
    let delta = antidominant_rep(lambda, None);
    let e = nonsymmetric_e(ctx, &delta)?;
    family_from_seed(ctx, lambda, e)
}

/// Builds the family by breadth-first search from a given `f_δ`.
pub fn family_from_seed<S: Field>(
    ctx: &HeckeContext<S>,
    lambda: &[i32],
    seed: XPoly<S>,
) -> Result<PolyFamily<S>, HeckeError> {
    let delta = antidominant_rep(lambda, None);
    let mut members = BTreeMap::from([(delta.clone(), seed)]);
    let mut queue = VecDeque::from([delta.clone()]);
    while let Some(mu) = queue.pop_front() {
        for (i, nu) in up_moves(&mu) {
            if !members.contains_key(&nu) {
                let f = ctx.apply_inverse(i, &members[&mu])?;
                members.insert(nu.clone(), f);
                queue.push_back(nu);
            }
        }
    }
    Ok(PolyFamily {
        lambda: lambda.to_vec(),
        delta,
        members,
    })
}

/// Recomputes every member along every incoming up-move and reports the first disagreement.
pub fn check_path_independence<S: Field>(
    ctx: &HeckeContext<S>,
    fam: &PolyFamily<S>,
) -> Result<(), HeckeError> {
    for (mu, f) in &fam.members {
        for (i, nu) in up_moves(mu) {
            if !ctx.apply_inverse(i, f)?.equals(&fam.members[&nu]) {
                return Err(HeckeError::PathDependent(nu));
            }
        }
    }
    Ok(())
}

/// `K_λ = Σ_μ f_μ`, with the invariance `T_i K = t K` (`0 < i < n`) and `T_n K = t_n K` asserted.
pub fn symmetrise<S: Field>(
    ctx: &HeckeContext<S>,
    fam: &PolyFamily<S>,
) -> Result<XPoly<S>, HeckeError> {
    let mut k = XPoly::zero(ctx.n);
    for f in fam.members.values() {
        k.add_scaled(f, &S::fone());
    }
    for i in 1..=ctx.n {
        if !ctx.apply(i, &k)?.equals(&k.scale(ctx.ti(i))) {
            return Err(HeckeError::NotInvariant(i));
        }
    }
    Ok(k)
}

/// Coefficients expressing each `E_μ` (rows) in the basis `f_ν` (columns), both indexed by
/// the sorted orbit. Fails if the family is not a basis of the span of the `E_μ`.
pub fn change_of_basis<S: Field>(
    ctx: &HeckeContext<S>,
    fam: &PolyFamily<S>,
    exec: Exec,
) -> Result<(Vec<Composition>, Vec<Vec<S>>), HeckeError> {
    let orbit: Vec<Composition> = fam.members.keys().cloned().collect();
    let es = exec.map(&orbit, |mu| nonsymmetric_e(ctx, mu));
    let basis: Vec<&XPoly<S>> = orbit.iter().map(|m| &fam.members[m]).collect();
    let mut rows = Vec::new();
    for (mu, e) in orbit.iter().zip(es) {
        let e = e?;
        rows.push(
            crate::linalg::express_in_basis(&basis, &e)
                .ok_or_else(|| HeckeError::NotInSpan(mu.clone()))?,
        );
    }
    Ok((orbit, rows))
}

/// How `t^u` in the Baxterised operator of the interior recursion is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectralReading {
    /// `u = <λ>_{i+1} - <λ>_i` with `<λ>_j = ρ_j + u λ_j + v ε_j`, `q = t^u`, `t_0 t_n = t^v`.
    SpectralVector,
    /// `t^u = y_{i+1}(λ) / y_i(λ)`; differs from the above by a factor `t`.
    EigenvalueRatio,
}

/// Both sides of a recursion `lhs = (T_k + scalar) E_λ`, kept apart so that a sign
/// convention can be tested in either direction.
#[derive(Clone, Debug)]
pub struct Recursion<S> {
    pub lhs: XPoly<S>,
    /// `T_k E_λ`.
    pub operator_part: XPoly<S>,
    /// `E_λ` times the displayed scalar.
    pub scalar_part: XPoly<S>,
}

impl<S: Field> Recursion<S> {
    /// `lhs = T_k E_λ + scalar E_λ`.
    pub fn holds(&self) -> bool {
        self.lhs.equals(&self.operator_part.add(&self.scalar_part))
    }

    /// `lhs = T_k E_λ - scalar E_λ`.
    pub fn holds_with_negated_scalar(&self) -> bool {
        self.lhs.equals(&self.operator_part.sub(&self.scalar_part))
    }
}

/// `t E_{s_i λ}` against `(T_i + (1-t)/(1-t^u)) E_λ` for `λ_i < λ_{i+1}` (1-based `i < n`).
pub fn tione_sides<S: Field>(
    ctx: &HeckeContext<S>,
    lambda: &[i32],
    i: usize,
    reading: SpectralReading,
) -> Result<Recursion<S>, HeckeError> {
    if lambda.len() != ctx.n || i == 0 || i >= ctx.n || lambda[i - 1] >= lambda[i] {
        return Err(HeckeError::InvalidInput(format!(
            "recursion needs λ_{i} < λ_{}",
            i + 1
        )));
    }
    let y = ctx.spectral_values(lambda);
    let mut t_pow_u = y[i].div(&y[i - 1]).expect("spectral values are nonzero");
    if reading == SpectralReading::SpectralVector {
        t_pow_u = t_pow_u.mul(ctx.t());
    }
    let e = nonsymmetric_e(ctx, lambda)?;
    let den = S::fone().sub(&t_pow_u);
    let scalar = S::fone()
        .sub(ctx.t())
        .div(&den)
        .ok_or_else(|| HeckeError::Pole("t^u = 1".into()))?;
    let mut sl = lambda.to_vec();
    sl.swap(i - 1, i);
    Ok(Recursion {
        lhs: nonsymmetric_e(ctx, &sl)?.scale(ctx.t()),
        operator_part: ctx.apply(i, &e)?,
        scalar_part: e.scale(&scalar),
    })
}

/// `t_n E_{s_n λ}` against `[T_n + (1-t_n+t_n(1-t_0)/y_n)/(t_0 t_n/y_n^2 - 1)] E_λ` for `λ_n < 0`.
pub fn tnone_sides<S: Field>(
    ctx: &HeckeContext<S>,
    lambda: &[i32],
) -> Result<Recursion<S>, HeckeError> {
    let n = ctx.n;
    if lambda.len() != n || lambda[n - 1] >= 0 {
        return Err(HeckeError::InvalidInput("recursion needs λ_n < 0".into()));
    }
    let yn = ctx.spectral_values(lambda)[n - 1].clone();
    let yi = yn.inv().expect("spectral values are nonzero");
    let (t0, tn) = (ctx.t0(), ctx.tn());
    let one = S::fone();
    let num = one.sub(tn).add(&tn.mul(&one.sub(t0)).mul(&yi));
    let den = t0.mul(tn).mul(&yi).mul(&yi).sub(&one);
    let coef = num
        .div(&den)
        .ok_or_else(|| HeckeError::Pole("t0 tn = y_n^2".into()))?;
    let e = nonsymmetric_e(ctx, lambda)?;
    let mut sl = lambda.to_vec();
    sl[n - 1] = -sl[n - 1];
    Ok(Recursion {
        lhs: nonsymmetric_e(ctx, &sl)?.scale(tn),
        operator_part: ctx.apply(n, &e)?,
        scalar_part: e.scale(&coef),
    })
}
