use std::collections::BTreeMap;

use masep_algebra::par::Exec;
use masep_algebra::{Field, UniRatFun};

use crate::matrices::{dual_k0_symbolic, dual_kn_symbolic, eval_operator, k0, kn, r_matrix};
use crate::model::ModelSpec;
use crate::operator::{digits, index_of, SparseOperator};
use crate::LatticeError;

/// Builds transfer and scattering matrices for one model; the dual boundary
/// matrices are computed once, symbolically in the spectral parameter.
#[derive(Clone, Debug)]
pub struct TransferBuilder {
    pub spec: ModelSpec,
    pub dual_k0: SparseOperator<UniRatFun>,
    pub dual_kn: SparseOperator<UniRatFun>,
    pub exec: Exec,
}

impl TransferBuilder {
    pub fn new(spec: &ModelSpec) -> Result<Self, LatticeError> {
        Ok(TransferBuilder {
            spec: spec.clone(),
            dual_k0: dual_k0_symbolic(spec)?,
            dual_kn: dual_kn_symbolic(spec)?,
            exec: Exec::default(),
        })
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    fn aux_factors(&self) -> Vec<usize> {
        vec![self.spec.local_dim(); self.spec.n + 1]
    }

    /// `R_{a,b}(u)` on the auxiliary-extended space (aux = position 0, site j = position j).
    fn r_at<S: Field>(
        &self,
        u: &S,
        a: usize,
        b: usize,
        factors: &[usize],
    ) -> Result<SparseOperator<S>, LatticeError> {
        Ok(r_matrix(u, self.spec.r, &self.spec.params.t)?.embed(factors, &[a, b]))
    }

    fn check_x<S>(&self, xs: &[S]) -> Result<(), LatticeError> {
        if xs.len() != self.spec.n {
            return Err(LatticeError::InvalidSpec(format!(
                "expected {} inhomogeneities, got {}",
                self.spec.n,
                xs.len()
            )));
        }
        Ok(())
    }

    fn inv<S: Field>(x: &S) -> Result<S, LatticeError> {
        x.inv()
            .ok_or_else(|| LatticeError::Pole("zero spectral parameter".into()))
    }

    /// `T(w; x) = Tr_0(M1 K_0(w) M2 K̃_n(w))`.
    pub fn transfer<S: Field>(&self, w: &S, xs: &[S]) -> Result<SparseOperator<S>, LatticeError> {
        self.check_x(xs)?;
        let f = self.aux_factors();
        let n = self.spec.n;
        let mut ops = Vec::with_capacity(2 * n + 2);
        for j in (1..=n).rev() {
            ops.push(self.r_at(&w.mul(&xs[j - 1]), 0, j, &f)?);
        }
        ops.push(
            k0(w, &self.spec, None)
                .map_err(|e| tag(e, "K0(w)"))?
                .embed(&f, &[0]),
        );
        for j in 1..=n {
            ops.push(self.r_at(&w.mul(&Self::inv(&xs[j - 1])?), j, 0, &f)?);
        }
        ops.push(
            eval_operator(&self.dual_kn, w)
                .map_err(|e| tag(e, "dual Kn(w)"))?
                .embed(&f, &[0]),
        );
        Ok(self.trace_product(&ops))
    }

    /// Dual construction `T(w; x) = Tr_0(M2 K_n(1/w) M1 K̃_0(w))`.
    pub fn transfer_dual<S: Field>(
        &self,
        w: &S,
        xs: &[S],
    ) -> Result<SparseOperator<S>, LatticeError> {
        self.check_x(xs)?;
        let f = self.aux_factors();
        let n = self.spec.n;
        let mut ops = Vec::with_capacity(2 * n + 2);
        for j in 1..=n {
            ops.push(self.r_at(&w.mul(&Self::inv(&xs[j - 1])?), j, 0, &f)?);
        }
        ops.push(
            kn(&Self::inv(w)?, &self.spec)
                .map_err(|e| tag(e, "Kn(1/w)"))?
                .embed(&f, &[0]),
        );
        for j in (1..=n).rev() {
            ops.push(self.r_at(&w.mul(&xs[j - 1]), 0, j, &f)?);
        }
        ops.push(
            eval_operator(&self.dual_k0, w)
                .map_err(|e| tag(e, "dual K0(w)"))?
                .embed(&f, &[0]),
        );
        Ok(self.trace_product(&ops))
    }

    /// `Tr_0` of a product (leftmost first), one site column at a time.
    fn trace_product<S: Field>(&self, ops: &[SparseOperator<S>]) -> SparseOperator<S> {
        let f = self.aux_factors();
        let d = self.spec.local_dim();
        let site_f = self.spec.site_factors();
        let dim = self.spec.dim();
        let cols = self.exec.map_range(dim, |c| {
            let dc = digits(c, &site_f);
            let mut out: BTreeMap<usize, S> = BTreeMap::new();
            for a in 0..d {
                let mut full = vec![a];
                full.extend_from_slice(&dc);
                let mut v = BTreeMap::new();
                v.insert(index_of(&full, &f), S::fone());
                for op in ops.iter().rev() {
                    v = op.apply_sparse(&v);
                }
                for (row, val) in v {
                    let dr = digits(row, &f);
                    if dr[0] != a {
                        continue;
                    }
                    let r = index_of(&dr[1..], &site_f);
                    let e = out.remove(&r).map_or(val.clone(), |x| x.add(&val));
                    if !e.fis_zero() {
                        out.insert(r, e);
                    }
                }
            }
            out
        });
        SparseOperator::from_columns(site_f, cols)
    }

    /// Scattering matrix `S_i` (1-based `i`) from the explicit product of local factors.
    ///
    /// With operators acting on columns the factors appear in reverse order with
    /// swapped space labels: `S_i = R_{i+1,i}(x_i/x_{i+1})..R_{n,i}(x_i/x_n) K_n(1/x_i)
    /// R_{i,n}(x_i x_n)..R_{i,i+1}(x_i x_{i+1}) R_{i,i-1}(x_i x_{i-1})..R_{i,1}(x_i x_1) K_0(x_i)
    /// R_{1,i}(x_i/x_1)..R_{i-1,i}(x_i/x_{i-1})`.
    pub fn s_matrix<S: Field>(
        &self,
        i: usize,
        xs: &[S],
    ) -> Result<SparseOperator<S>, LatticeError> {
        self.check_x(xs)?;
        let n = self.spec.n;
        if i == 0 || i > n {
            return Err(LatticeError::InvalidSpec(format!(
                "site {i} outside 1..={n}"
            )));
        }
        let f = self.spec.site_factors();
        let (r, t) = (self.spec.r, &self.spec.params.t);
        let rr = |u: S, a: usize, b: usize| -> Result<SparseOperator<S>, LatticeError> {
            Ok(r_matrix(&u, r, t)?.embed(&f, &[a - 1, b - 1]))
        };
        let xi = &xs[i - 1];
        let mut ops = Vec::new();
        for j in i + 1..=n {
            ops.push(rr(xi.mul(&Self::inv(&xs[j - 1])?), j, i)?);
        }
        ops.push(kn(&Self::inv(xi)?, &self.spec)?.embed(&f, &[i - 1]));
        for j in (i + 1..=n).rev() {
            ops.push(rr(xi.mul(&xs[j - 1]), i, j)?);
        }
        for j in (1..i).rev() {
            ops.push(rr(xi.mul(&xs[j - 1]), i, j)?);
        }
        ops.push(k0(xi, &self.spec, None)?.embed(&f, &[i - 1]));
        for j in 1..i {
            ops.push(rr(xi.mul(&Self::inv(&xs[j - 1])?), j, i)?);
        }
        let refs: Vec<&SparseOperator<S>> = ops.iter().collect();
        SparseOperator::product(&refs, self.exec)
    }
}

fn tag(e: LatticeError, what: &str) -> LatticeError {
    match e {
        LatticeError::Pole(m) => LatticeError::Pole(format!("{what}: {m}")),
        other => other,
    }
}
