use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use masep_algebra::par::Exec;
use masep_algebra::{fmt_rational, int, pow_i, Rational, UniRatFun};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::matrices::{
    dual_k0_symbolic, dual_kn_symbolic, eval_operator, k0, kn, permutation, r21, r_check, r_matrix,
    r_tilde_symbolic, u_twist,
};
use crate::model::ModelSpec;
use crate::operator::SparseOperator;
use crate::transfer::TransferBuilder;
use crate::LatticeError;

type Op = SparseOperator<Rational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityName {
    Ybe,
    Braid,
    Unitarity,
    Crossing,
    ReflLeft,
    ReflRight,
    ReflDualLeft,
    ReflDualRight,
    ExchBulk,
    ExchLeft,
    ExchRight,
    Commute,
    DualForm,
    CrossingPair,
}

impl IdentityName {
    pub const ALL: [IdentityName; 14] = [
        IdentityName::Ybe,
        IdentityName::Braid,
        IdentityName::Unitarity,
        IdentityName::Crossing,
        IdentityName::ReflLeft,
        IdentityName::ReflRight,
        IdentityName::ReflDualLeft,
        IdentityName::ReflDualRight,
        IdentityName::ExchBulk,
        IdentityName::ExchLeft,
        IdentityName::ExchRight,
        IdentityName::Commute,
        IdentityName::DualForm,
        IdentityName::CrossingPair,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityName::Ybe => "ybe",
            IdentityName::Braid => "braid",
            IdentityName::Unitarity => "unitarity",
            IdentityName::Crossing => "crossing",
            IdentityName::ReflLeft => "refl_left",
            IdentityName::ReflRight => "refl_right",
            IdentityName::ReflDualLeft => "refl_dual_left",
            IdentityName::ReflDualRight => "refl_dual_right",
            IdentityName::ExchBulk => "exch_bulk",
            IdentityName::ExchLeft => "exch_left",
            IdentityName::ExchRight => "exch_right",
            IdentityName::Commute => "commute",
            IdentityName::DualForm => "dual_form",
            IdentityName::CrossingPair => "crossing_pair",
        }
    }

    /// Whether the check needs full transfer matrices (and hence scales with `n`).
    pub fn uses_transfer(self) -> bool {
        matches!(
            self,
            IdentityName::ExchBulk
                | IdentityName::ExchLeft
                | IdentityName::ExchRight
                | IdentityName::Commute
                | IdentityName::DualForm
        )
    }

    fn variables(self, n: usize) -> Vec<String> {
        let xs = |k: usize| (1..=k).map(|i| format!("x{i}")).collect::<Vec<_>>();
        let named = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        match self {
            IdentityName::Ybe | IdentityName::Braid => named(&["x", "y", "z"]),
            IdentityName::Unitarity | IdentityName::Crossing => named(&["x"]),
            IdentityName::CrossingPair => named(&["y"]),
            IdentityName::ReflLeft
            | IdentityName::ReflRight
            | IdentityName::ReflDualLeft
            | IdentityName::ReflDualRight => named(&["x", "w"]),
            IdentityName::ExchBulk
            | IdentityName::ExchLeft
            | IdentityName::ExchRight
            | IdentityName::DualForm => {
                let mut v = named(&["w"]);
                v.extend(xs(n));
                v
            }
            IdentityName::Commute => {
                let mut v = named(&["w1", "w2"]);
                v.extend(xs(n));
                v
            }
        }
    }
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityName {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IdentityName::ALL
            .iter()
            .copied()
            .find(|i| i.as_str() == s)
            .ok_or_else(|| LatticeError::InvalidSpec(format!("unknown identity {s}")))
    }
}

/// Outcome of one exact identity check at one sampled point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: IdentityName,
    pub n: usize,
    pub r: usize,
    pub convention: String,
    pub seed: u64,
    pub point: BTreeMap<String, String>,
    /// Number of nonzero entries of LHS - RHS (zero when the identity holds).
    pub residual_nnz: usize,
    pub pass: bool,
    pub attempts: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

const MAX_ATTEMPTS: usize = 32;

/// A random nonzero rational `p/q` with `|p|, q <= 15`, avoiding `±1`.
pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let p: i64 = rng.gen_range(-15..=15);
        let q: i64 = rng.gen_range(1..=15);
        if p == 0 {
            continue;
        }
        let v = Rational::new(p.into(), q.into());
        if v != Rational::one() && v != -Rational::one() {
            return v;
        }
    }
}

pub struct Verifier {
    pub builder: TransferBuilder,
    r_tilde: SparseOperator<UniRatFun>,
}

impl Verifier {
    pub fn new(spec: &ModelSpec) -> Result<Self, LatticeError> {
        Ok(Verifier {
            builder: TransferBuilder::new(spec)?,
            r_tilde: r_tilde_symbolic(spec.r, &spec.params.t)?,
        })
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.builder.exec = exec;
        self
    }

    fn spec(&self) -> &ModelSpec {
        &self.builder.spec
    }

    /// Samples points until none of the identity's matrices has a pole there.
    pub fn verify(&self, id: IdentityName, seed: u64) -> Result<VerificationReport, LatticeError> {
        let names = id.variables(self.spec().n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for attempt in 1..=MAX_ATTEMPTS {
            let pt: Vec<Rational> = names.iter().map(|_| random_rational(&mut rng)).collect();
            match self.check_at(id, &pt) {
                Ok((nnz, note)) => {
                    return Ok(VerificationReport {
                        identity: id,
                        n: self.spec().n,
                        r: self.spec().r,
                        convention: self.spec().convention.to_string(),
                        seed,
                        point: names
                            .iter()
                            .cloned()
                            .zip(pt.iter().map(fmt_rational))
                            .collect(),
                        residual_nnz: nnz,
                        pass: nnz == 0,
                        attempts: attempt,
                        note,
                    })
                }
                Err(LatticeError::Pole(_)) | Err(LatticeError::Singular) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(LatticeError::PoleExhausted(format!(
            "{id} after {MAX_ATTEMPTS} samples"
        )))
    }

    /// Runs every `(identity, seed)` pair, in parallel when enabled; output sorted by identity then seed.
    pub fn verify_many(
        &self,
        ids: &[IdentityName],
        seeds: &[u64],
    ) -> Result<Vec<VerificationReport>, LatticeError> {
        let jobs: Vec<(IdentityName, u64)> = ids
            .iter()
            .flat_map(|&i| seeds.iter().map(move |&s| (i, s)))
            .collect();
        let mut out = self
            .builder
            .exec
            .map(&jobs, |&(i, s)| self.verify(i, s))
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
        out.sort_by_key(|a| (a.identity, a.seed));
        Ok(out)
    }

    fn rt(&self, x: &Rational) -> Result<Op, LatticeError> {
        eval_operator(&self.r_tilde, x)
    }

    /// Residual size of `lhs - rhs` for one identity at an explicit point.
    pub fn check_at(
        &self,
        id: IdentityName,
        pt: &[Rational],
    ) -> Result<(usize, Option<String>), LatticeError> {
        let spec = self.spec();
        let (r, t) = (spec.r, &spec.params.t);
        let d = spec.local_dim();
        let id1 = Op::identity(vec![d]);
        let f3 = vec![d; 3];
        let diff = |a: Op, b: Op| -> Result<usize, LatticeError> { Ok(a.sub(&b)?.nnz()) };
        let prod = |ops: &[&Op]| Op::product(ops, Exec::Sequential);
        let inv = |x: &Rational| -> Result<Rational, LatticeError> {
            if x.is_zero() {
                Err(LatticeError::Pole("zero".into()))
            } else {
                Ok(x.recip())
            }
        };
        match id {
            IdentityName::Ybe => {
                let (x, y, z) = (&pt[0], &pt[1], &pt[2]);
                let rab = |u: Rational, a: usize, b: usize| -> Result<Op, LatticeError> {
                    Ok(r_matrix(&u, r, t)?.embed(&f3, &[a, b]))
                };
                let r12 = rab(y / x, 0, 1)?;
                let r13 = rab(y / z, 0, 2)?;
                let r23 = rab(x / z, 1, 2)?;
                Ok((
                    diff(prod(&[&r12, &r13, &r23])?, prod(&[&r23, &r13, &r12])?)?,
                    None,
                ))
            }
            IdentityName::Braid => {
                let (x, y, z) = (&pt[0], &pt[1], &pt[2]);
                let ck = |u: Rational, a: usize| -> Result<Op, LatticeError> {
                    Ok(r_check(&u, r, t)?.embed(&f3, &[a, a + 1]))
                };
                let lhs = prod(&[&ck(y / x, 1)?, &ck(y / z, 0)?, &ck(x / z, 1)?])?;
                let rhs = prod(&[&ck(x / z, 0)?, &ck(y / z, 1)?, &ck(y / x, 0)?])?;
                Ok((diff(lhs, rhs)?, None))
            }
            IdentityName::Unitarity => {
                let x = &pt[0];
                let xi = inv(x)?;
                let i2 = Op::identity(vec![d, d]);
                let a = diff(r_matrix(x, r, t)?.mul(&r21(&xi, r, t)?)?, i2.clone())?;
                let b = diff(r_check(x, r, t)?.mul(&r_check(&xi, r, t)?)?, i2)?;
                Ok((a + b, None))
            }
            IdentityName::Crossing => {
                let x = &pt[0];
                let top = pow_i(t, 2 * r as i64 + 1)?;
                let below = pow_i(t, 2 * r as i64)?;
                let den = (t - x) * (&below - x);
                if den.is_zero() {
                    return Err(LatticeError::Pole("crossing scalar".into()));
                }
                let scalar = (Rational::one() - x) * (&top - x) / den;
                let u = id1.kron(&u_twist(r, t, false));
                let ui = id1.kron(&u_twist(r, t, true));
                let lhs = prod(&[
                    &u,
                    &r21(&(&top / x), r, t)?.partial_transpose(0),
                    &ui,
                    &r_matrix(x, r, t)?.partial_transpose(0),
                ])?;
                let rhs = Op::identity(vec![d, d]).scale(&scalar);
                Ok((diff(lhs, rhs)?, Some(format!("exponent {}", 2 * r + 1))))
            }
            IdentityName::ReflLeft => {
                let (x, w) = (&pt[0], &pt[1]);
                let kx = k0(x, spec, None)?;
                let kw = k0(w, spec, None)?;
                let (kx1, kw1, kx2) = (kx.kron(&id1), kw.kron(&id1), id1.kron(&kx));
                let (wx, wox) = (w * x, w / x);
                let checked = diff(
                    prod(&[&kx1, &r_check(&wx, r, t)?, &kw1, &r_check(&wox, r, t)?])?,
                    prod(&[&r_check(&wox, r, t)?, &kw1, &r_check(&wx, r, t)?, &kx1])?,
                )?;
                let unchecked = diff(
                    prod(&[&kx2, &r_matrix(&wx, r, t)?, &kw1, &r21(&wox, r, t)?])?,
                    prod(&[&r_matrix(&wox, r, t)?, &kw1, &r21(&wx, r, t)?, &kx2])?,
                )?;
                Ok((
                    checked + unchecked,
                    Some(format!("checked {checked}, unchecked {unchecked}")),
                ))
            }
            IdentityName::ReflRight => {
                let (x, w) = (&pt[0], &pt[1]);
                let kx = kn(x, spec)?;
                let kw = kn(w, spec)?;
                let (kx2, kw2, kw1) = (id1.kron(&kx), id1.kron(&kw), kw.kron(&id1));
                let (iwx, xow) = (inv(&(w * x))?, x / w);
                let checked = diff(
                    prod(&[&kx2, &r_check(&iwx, r, t)?, &kw2, &r_check(&xow, r, t)?])?,
                    prod(&[&r_check(&xow, r, t)?, &kw2, &r_check(&iwx, r, t)?, &kx2])?,
                )?;
                let unchecked = diff(
                    prod(&[&kx2, &r21(&iwx, r, t)?, &kw1, &r_matrix(&xow, r, t)?])?,
                    prod(&[&r21(&xow, r, t)?, &kw1, &r_matrix(&iwx, r, t)?, &kx2])?,
                )?;
                Ok((
                    checked + unchecked,
                    Some(format!("checked {checked}, unchecked {unchecked}")),
                ))
            }
            IdentityName::ReflDualLeft => {
                let (x, w) = (&pt[0], &pt[1]);
                let kd = |v: &Rational| eval_operator(&self.builder.dual_k0, v);
                let (kx2, kw1) = (id1.kron(&kd(x)?), kd(w)?.kron(&id1));
                let p = permutation::<Rational>(d);
                let rt12 = self.rt(&(w * x))?;
                let rt21 = p.mul(&rt12)?.mul(&p)?;
                let xow = x / w;
                let lhs = prod(&[&kx2, &rt12, &kw1, &r_matrix(&xow, r, t)?])?;
                let rhs = prod(&[&r21(&xow, r, t)?, &kw1, &rt21, &kx2])?;
                Ok((diff(lhs, rhs)?, None))
            }
            IdentityName::ReflDualRight => {
                let (x, w) = (&pt[0], &pt[1]);
                let kd = |v: &Rational| eval_operator(&self.builder.dual_kn, v);
                let (kx2, kw1) = (id1.kron(&kd(x)?), kd(w)?.kron(&id1));
                let p = permutation::<Rational>(d);
                let rt12 = self.rt(&(w * x))?;
                let rt21 = p.mul(&rt12)?.mul(&p)?;
                let xow = x / w;
                let lhs = prod(&[&kx2, &rt21, &kw1, &r21(&xow, r, t)?])?;
                let rhs = prod(&[&r_matrix(&xow, r, t)?, &kw1, &rt12, &kx2])?;
                let printed = diff(
                    lhs.clone(),
                    prod(&[&r_matrix(&xow, r, t)?, &kw1, &rt21, &kx2])?,
                )?;
                Ok((
                    diff(lhs, rhs)?,
                    Some(format!(
                        "form with the same dual R on both sides leaves {printed} nonzero entries"
                    )),
                ))
            }
            IdentityName::CrossingPair => {
                let y = &pt[0];
                let p = permutation::<Rational>(d);
                let rt12 = self.rt(y)?;
                let rt21 = p.mul(&rt12)?.mul(&p)?;
                let i2 = Op::identity(vec![d, d]);
                let a = diff(
                    rt21.partial_transpose(0)
                        .mul(&r21(y, r, t)?.partial_transpose(0))?,
                    i2.clone(),
                )?;
                let b = diff(
                    rt12.partial_transpose(0)
                        .mul(&r_matrix(y, r, t)?.partial_transpose(0))?,
                    i2,
                )?;
                Ok((a + b, None))
            }
            IdentityName::ExchBulk => {
                let (w, xs) = (&pt[0], &pt[1..]);
                let b = &self.builder;
                let f = spec.site_factors();
                let tx = b.transfer(w, xs)?;
                let mut total = 0;
                for i in 0..spec.n - 1 {
                    let ri = r_check(&(&xs[i + 1] / &xs[i]), r, t)?.embed(&f, &[i, i + 1]);
                    let mut swapped = xs.to_vec();
                    swapped.swap(i, i + 1);
                    let ts = b.transfer(w, &swapped)?;
                    total += diff(ri.mul(&tx)?, ts.mul(&ri)?)?;
                }
                Ok((total, None))
            }
            IdentityName::ExchLeft => {
                let (w, xs) = (&pt[0], &pt[1..]);
                let b = &self.builder;
                let k = k0(&xs[0], spec, None)?.embed(&spec.site_factors(), &[0]);
                let mut flipped = xs.to_vec();
                flipped[0] = inv(&xs[0])?;
                Ok((
                    diff(
                        k.mul(&b.transfer(w, xs)?)?,
                        b.transfer(w, &flipped)?.mul(&k)?,
                    )?,
                    None,
                ))
            }
            IdentityName::ExchRight => {
                let (w, xs) = (&pt[0], &pt[1..]);
                let b = &self.builder;
                let n = spec.n;
                let k = kn(&xs[n - 1], spec)?.embed(&spec.site_factors(), &[n - 1]);
                let mut flipped = xs.to_vec();
                flipped[n - 1] = inv(&xs[n - 1])?;
                Ok((
                    diff(
                        k.mul(&b.transfer(w, xs)?)?,
                        b.transfer(w, &flipped)?.mul(&k)?,
                    )?,
                    None,
                ))
            }
            IdentityName::Commute => {
                let (w1, w2, xs) = (&pt[0], &pt[1], &pt[2..]);
                let b = &self.builder;
                let (t1, t2) = (b.transfer(w1, xs)?, b.transfer(w2, xs)?);
                Ok((diff(t1.mul(&t2)?, t2.mul(&t1)?)?, None))
            }
            IdentityName::DualForm => {
                let (w, xs) = (&pt[0], &pt[1..]);
                let b = &self.builder;
                Ok((diff(b.transfer(w, xs)?, b.transfer_dual(w, xs)?)?, None))
            }
        }
    }
}

/// Checks the closed forms of both dual boundary matrices against the trace definitions at `x`.
pub fn dual_closed_form_residual(
    spec: &ModelSpec,
    x: &Rational,
) -> Result<(usize, usize), LatticeError> {
    let l = eval_operator(&dual_k0_symbolic(spec)?, x)?
        .sub(&crate::matrices::dual_k0_closed(x, spec)?)?;
    let r = eval_operator(&dual_kn_symbolic(spec)?, x)?
        .sub(&crate::matrices::dual_kn_closed(x, spec)?)?;
    Ok((l.nnz(), r.nnz()))
}

/// Scalar `(1-x)(t^{2r+1}-x)/((t-x)(t^{2r}-x))` of the crossing relation.
pub fn crossing_scalar(x: &Rational, r: usize, t: &Rational) -> Result<Rational, LatticeError> {
    let den = (t - x) * (pow_i(t, 2 * r as i64)? - x);
    if den.is_zero() {
        return Err(LatticeError::Pole("crossing scalar".into()));
    }
    Ok((int(1) - x) * (pow_i(t, 2 * r as i64 + 1)? - x) / den)
}

impl From<masep_algebra::AlgebraError> for LatticeError {
    fn from(e: masep_algebra::AlgebraError) -> Self {
        match e {
            masep_algebra::AlgebraError::Pole(m) => LatticeError::Pole(m),
            masep_algebra::AlgebraError::DivisionByZero => {
                LatticeError::Pole("division by zero".into())
            }
            other => LatticeError::Algebra(other),
        }
    }
}
