//! Local R- and K-matrices, generic over the scalar field.

use masep_algebra::{Field, Rational, UniRatFun};

use crate::model::ModelSpec;
use crate::operator::SparseOperator;
use crate::LatticeError;

fn c<S: Field>(r: &Rational) -> S {
    S::from_rational(r)
}

fn inv<S: Field>(x: &S, what: &str) -> Result<S, LatticeError> {
    x.inv().ok_or_else(|| LatticeError::Pole(what.to_string()))
}

/// Checked R-matrix on `(2r+1)^2`.
pub fn r_check<S: Field>(x: &S, r: usize, t: &Rational) -> Result<SparseOperator<S>, LatticeError> {
    let d = 2 * r + 1;
    let ts: S = c(t);
    let bp = ts
        .mul(&S::fone().sub(x))
        .mul(&inv(&ts.sub(x), "R-matrix at x = t")?);
    let bm = bp.mul(&inv(&ts, "t = 0")?);
    let cp = S::fone().sub(&bp);
    let cm = S::fone().sub(&bm);
    let mut m = SparseOperator::zero(vec![d, d]);
    for i in 0..d {
        m.set(i * d + i, i * d + i, S::fone());
        for j in i + 1..d {
            // column |j,i> (larger label first) moves to |i,j> with weight b+
            m.set(i * d + j, j * d + i, bp.clone());
            m.set(j * d + i, i * d + j, bm.clone());
            m.set(i * d + j, i * d + j, cm.clone());
            m.set(j * d + i, j * d + i, cp.clone());
        }
    }
    Ok(m)
}

pub fn permutation<S: Field>(d: usize) -> SparseOperator<S> {
    let mut m = SparseOperator::zero(vec![d, d]);
    for a in 0..d {
        for b in 0..d {
            m.set(a * d + b, b * d + a, S::fone());
        }
    }
    m
}

/// `R(x) = P Ř(x)`.
pub fn r_matrix<S: Field>(
    x: &S,
    r: usize,
    t: &Rational,
) -> Result<SparseOperator<S>, LatticeError> {
    permutation(2 * r + 1).mul(&r_check(x, r, t)?)
}

/// `R_21 = P R_12 P`.
pub fn r21<S: Field>(x: &S, r: usize, t: &Rational) -> Result<SparseOperator<S>, LatticeError> {
    let p = permutation(2 * r + 1);
    p.mul(&r_matrix(x, r, t)?)?.mul(&p)
}

fn h0<S: Field>(x: &S, spec: &ModelSpec) -> S {
    x.add(&c(&spec.params.a)).mul(&x.add(&c(&spec.params.c)))
}

fn hn<S: Field>(x: &S, spec: &ModelSpec) -> S {
    c::<S>(&spec.params.b)
        .mul(x)
        .add(&S::fone())
        .mul(&c::<S>(&spec.params.d).mul(x).add(&S::fone()))
}

/// Left boundary matrix. `q = None` is the stochastic case `q = 1`; labels `|i| <= r_L` are inert.
pub fn k0<S: Field>(
    x: &S,
    spec: &ModelSpec,
    q: Option<&Rational>,
) -> Result<SparseOperator<S>, LatticeError> {
    let r = spec.r;
    let d = 2 * r + 1;
    let one = Rational::from_integer(1.into());
    let q = q.cloned().unwrap_or(one);
    let qs: S = c(&q);
    let t0: S = c(&(-(&spec.params.a * &spec.params.c) / &q));
    let f = qs.sub(&x.mul(x)).mul(&inv(&h0(x, spec), "h0 vanishes")?);
    let mut m = SparseOperator::identity(vec![d]);
    for i in spec.rl + 1..=r {
        let p = spec.convention.partner(i, r);
        let (ni, pi) = (r - i, r + p);
        m.add_entry(ni, ni, f.mul(&t0));
        m.add_entry(pi, pi, f.clone());
        m.add_entry(
            ni,
            pi,
            f.mul(&qs.powi(-(i as i64)).expect("q nonzero")).neg(),
        );
        m.add_entry(pi, ni, f.mul(&qs.powi(p as i64).unwrap()).mul(&t0).neg());
    }
    Ok(m)
}

/// Right boundary matrix; labels `|i| <= r_R` are inert.
pub fn kn<S: Field>(x: &S, spec: &ModelSpec) -> Result<SparseOperator<S>, LatticeError> {
    let r = spec.r;
    let d = 2 * r + 1;
    let tn: S = c(&spec.params.tn());
    let f = S::fone()
        .sub(&x.mul(x))
        .mul(&inv(&hn(x, spec), "hn vanishes")?);
    let mut m = SparseOperator::identity(vec![d]);
    for i in spec.rr + 1..=r {
        let (ni, pi) = (r - i, r + spec.convention.partner(i, r));
        m.add_entry(ni, ni, f.neg());
        m.add_entry(pi, pi, f.mul(&tn).neg());
        m.add_entry(pi, ni, f.clone());
        m.add_entry(ni, pi, f.mul(&tn));
    }
    Ok(m)
}

/// `U = diag(t^-r, ..., t^r)` (or its inverse).
pub fn u_twist<S: Field>(r: usize, t: &Rational, inverse: bool) -> SparseOperator<S> {
    let ts: S = c(t);
    let diag = (-(r as i64)..=r as i64)
        .map(|m| ts.powi(if inverse { -m } else { m }).expect("t nonzero"))
        .collect();
    SparseOperator::diagonal(vec![2 * r + 1], diag)
}

/// `R̃(x) = ((R(x)^{τ1})^{-1})^{τ1}` as rational functions of `x`.
pub fn r_tilde_symbolic(r: usize, t: &Rational) -> Result<SparseOperator<UniRatFun>, LatticeError> {
    let rx = r_matrix(&UniRatFun::var(), r, t)?;
    Ok(rx.partial_transpose(0).inverse()?.partial_transpose(0))
}

fn squared_argument(op: &SparseOperator<UniRatFun>) -> SparseOperator<UniRatFun> {
    op.try_map::<UniRatFun, LatticeError>(|f| Ok(f.compose_power(2)))
        .expect("infallible")
}

/// `K̃_0(x) = Tr_2((I ⊗ K_0(x)) R̃(x^2) P)` as rational functions of `x`.
pub fn dual_k0_symbolic(spec: &ModelSpec) -> Result<SparseOperator<UniRatFun>, LatticeError> {
    let d = spec.local_dim();
    let x = UniRatFun::var();
    let id = SparseOperator::<UniRatFun>::identity(vec![d]);
    let rt = squared_argument(&r_tilde_symbolic(spec.r, &spec.params.t)?);
    let m = id
        .kron(&k0(&x, spec, None)?)
        .mul(&rt)?
        .mul(&permutation(d))?;
    Ok(m.partial_trace(1))
}

/// `K̃_n(x) = Tr_1((K_n(1/x) ⊗ I) R̃(x^2) P)` as rational functions of `x`.
pub fn dual_kn_symbolic(spec: &ModelSpec) -> Result<SparseOperator<UniRatFun>, LatticeError> {
    let d = spec.local_dim();
    let xinv = UniRatFun::var().inv().expect("x nonzero");
    let id = SparseOperator::<UniRatFun>::identity(vec![d]);
    let rt = squared_argument(&r_tilde_symbolic(spec.r, &spec.params.t)?);
    let m = kn(&xinv, spec)?.kron(&id).mul(&rt)?.mul(&permutation(d))?;
    Ok(m.partial_trace(0))
}

/// Evaluates an operator with rational-function entries at `x`.
pub fn eval_operator<S: Field>(
    op: &SparseOperator<UniRatFun>,
    x: &S,
) -> Result<SparseOperator<S>, LatticeError> {
    op.try_map(|f| f.eval_in(x).map_err(|e| LatticeError::Pole(e.to_string())))
}

/// Closed form of the left dual matrix (no inert labels), used only as a cross-check.
///
/// `K̃_0 = κ_0 (U^{-1} + g_0 M_0)` with `κ_0 = t^{2r}(t-x^2) h_0(x/t^r) / ((t^{2r+1}-x^2) h_0(x))`,
/// `g_0 = t^{-2r}(x^2 - t^{2r+1}) / h_0(x/t^r)`.
pub fn dual_k0_closed<S: Field>(
    x: &S,
    spec: &ModelSpec,
) -> Result<SparseOperator<S>, LatticeError> {
    let r = spec.r as i64;
    let t: S = c(&spec.params.t);
    let t0: S = c(&spec.params.t0());
    let tp = |e: i64| t.powi(e).expect("t nonzero");
    let x2 = x.mul(x);
    let xs = x.mul(&tp(-r));
    let top = tp(2 * r + 1);
    let kappa = tp(2 * r)
        .mul(&t.sub(&x2))
        .mul(&h0(&xs, spec))
        .mul(&inv(&top.sub(&x2).mul(&h0(x, spec)), "dual K0 prefactor")?);
    let g = tp(-2 * r)
        .mul(&x2.sub(&top))
        .mul(&inv(&h0(&xs, spec), "dual K0 coefficient")?);
    let mut m = u_twist::<S>(spec.r, &spec.params.t, true);
    let ru = spec.r;
    for i in 1..=ru {
        let (ni, pi) = (ru - i, ru + spec.convention.partner(i, ru));
        let ie = i as i64;
        m.add_entry(ni, ni, g.mul(&t0.mul(&tp(ie - 1)).neg()));
        m.add_entry(pi, pi, g.mul(&tp(-ie).neg()));
        m.add_entry(ni, pi, g.clone());
        m.add_entry(pi, ni, g.mul(&t0).mul(&tp(-1)));
    }
    Ok(m.scale(&kappa))
}

/// Closed form of the right dual matrix, `K̃_n = κ_n (U + g_n M_n)` with
/// `κ_n = (t-x^2) h_n(t^r/x) / ((t^{2r+1}-x^2) h_n(1/x))`, `g_n = -t^{-r}(x^2-t^{2r+1}) / (x^2 h_n(t^r/x))`.
pub fn dual_kn_closed<S: Field>(
    x: &S,
    spec: &ModelSpec,
) -> Result<SparseOperator<S>, LatticeError> {
    let r = spec.r as i64;
    let t: S = c(&spec.params.t);
    let tn: S = c(&spec.params.tn());
    let tp = |e: i64| t.powi(e).expect("t nonzero");
    let x2 = x.mul(x);
    let xinv = inv(x, "x = 0")?;
    let top = tp(2 * r + 1);
    let htr = hn(&tp(r).mul(&xinv), spec);
    let kappa = t.sub(&x2).mul(&htr).mul(&inv(
        &top.sub(&x2).mul(&hn(&xinv, spec)),
        "dual Kn prefactor",
    )?);
    let g = tp(-r)
        .mul(&x2.sub(&top))
        .mul(&inv(&x2.mul(&htr), "dual Kn coefficient")?)
        .neg();
    let mut m = u_twist::<S>(spec.r, &spec.params.t, false);
    let ru = spec.r;
    for i in 1..=ru {
        let (ni, pi) = (ru - i, ru + spec.convention.partner(i, ru));
        let ie = i as i64;
        m.add_entry(ni, ni, g.mul(&tp(r - ie)));
        m.add_entry(pi, pi, g.mul(&tp(r + ie - 1)).mul(&tn));
        m.add_entry(ni, pi, g.mul(&tp(r - 1)).mul(&tn).neg());
        m.add_entry(pi, ni, g.mul(&tp(r)).neg());
    }
    Ok(m.scale(&kappa))
}
