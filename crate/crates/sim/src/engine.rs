use std::collections::BTreeMap;

use masep_algebra::par::Exec;
use masep_algebra::to_f64;
use masep_lattice::{rates, ModelSpec, Rates};
use masep_stationary::{config_key, StationaryState};
use masep_weyl::{orbit, Composition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::moves::{moves_from, FloatRates};
use crate::SimError;

#[derive(Clone, Debug)]
pub struct SimConfig {
    /// Lattice size, species count, cutoffs and pairing; the rates are held separately.
    pub spec: ModelSpec,
    pub rates: FloatRates,
    pub initial: Composition,
    /// Recorded events, split over the trajectories.
    pub events: u64,
    /// Events discarded at the start of each trajectory.
    pub burn_in: u64,
    pub seed: u64,
    /// Events per batch for the batch-means error estimate.
    pub thin: u64,
    pub trajectories: usize,
    pub exec: Exec,
}

impl SimConfig {
    /// Rates taken from the boundary parameters of `spec`.
    pub fn new(spec: &ModelSpec, initial: &[i32]) -> Result<Self, SimError> {
        Self::with_rates(spec, &rates(&spec.params)?, initial)
    }

    pub fn with_rates(spec: &ModelSpec, rt: &Rates, initial: &[i32]) -> Result<Self, SimError> {
        Ok(SimConfig {
            spec: spec.clone(),
            rates: FloatRates::from_exact(rt)?,
            initial: initial.to_vec(),
            events: 1_000_000,
            burn_in: 10_000,
            seed: 0,
            thin: 10_000,
            trajectories: 4,
            exec: Exec::default(),
        })
    }

    pub fn events(mut self, e: u64) -> Self {
        self.events = e;
        self
    }

    pub fn burn_in(mut self, b: u64) -> Self {
        self.burn_in = b;
        self
    }

    pub fn seed(mut self, s: u64) -> Self {
        self.seed = s;
        self
    }

    pub fn thin(mut self, t: u64) -> Self {
        self.thin = t;
        self
    }

    pub fn trajectories(mut self, k: usize) -> Self {
        self.trajectories = k;
        self
    }

    pub fn exec(mut self, e: Exec) -> Self {
        self.exec = e;
        self
    }
}

/// Occupation times over the sector of the initial configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalDistribution {
    pub sector: Vec<Composition>,
    pub occupation: Vec<f64>,
    pub total_time: f64,
    /// Occupation fractions of each completed batch.
    pub batches: Vec<Vec<f64>>,
    pub seed: u64,
    pub events: u64,
}

impl EmpiricalDistribution {
    pub fn probabilities(&self) -> BTreeMap<Composition, f64> {
        self.sector
            .iter()
            .zip(&self.occupation)
            .map(|(m, o)| (m.clone(), o / self.total_time))
            .collect()
    }

    /// Batch-means standard error of each probability; `None` with fewer than two batches.
    pub fn standard_errors(&self) -> Option<Vec<f64>> {
        let b = self.batches.len();
        if b < 2 {
            return None;
        }
        Some(
            (0..self.sector.len())
                .map(|k| {
                    let mean = self.batches.iter().map(|v| v[k]).sum::<f64>() / b as f64;
                    let var = self
                        .batches
                        .iter()
                        .map(|v| (v[k] - mean).powi(2))
                        .sum::<f64>()
                        / (b - 1) as f64;
                    (var / b as f64).sqrt()
                })
                .collect(),
        )
    }

    /// `½ Σ_μ 3σ_μ`: the total-variation scale of three-sigma fluctuations.
    pub fn tv_three_sigma(&self) -> Option<f64> {
        self.standard_errors()
            .map(|s| 0.5 * 3.0 * s.iter().sum::<f64>())
    }
}

struct Table {
    /// Per state: cumulative rates and target states.
    moves: Vec<Vec<(f64, usize)>>,
    exit: Vec<f64>,
}

fn build_table(cfg: &SimConfig, sector: &[Composition]) -> Result<Table, SimError> {
    let pos: BTreeMap<&Composition, usize> =
        sector.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut moves = Vec::with_capacity(sector.len());
    let mut exit = Vec::with_capacity(sector.len());
    for mu in sector {
        let mut acc = 0.0;
        let mut row = Vec::new();
        for m in moves_from(&cfg.spec, mu) {
            let rate = cfg.rates.of(m.kind);
            if rate == 0.0 {
                continue;
            }
            let &j = pos.get(&m.to).ok_or_else(|| {
                SimError::InvalidConfig(format!("move {mu:?} -> {:?} leaves the sector", m.to))
            })?;
            acc += rate;
            row.push((acc, j));
        }
        moves.push(row);
        exit.push(acc);
    }
    Ok(Table { moves, exit })
}

struct Trajectory {
    occupation: Vec<f64>,
    batches: Vec<Vec<f64>>,
}

fn run_one(
    table: &Table,
    sector: &[Composition],
    start: usize,
    cfg: &SimConfig,
    stream: u64,
    events: u64,
) -> Result<Trajectory, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let d = sector.len();
    let mut state = start;
    let step = |state: &mut usize, rng: &mut ChaCha8Rng| -> Result<f64, SimError> {
        let exit = table.exit[*state];
        if exit <= 0.0 {
            return Err(SimError::Absorbing(sector[*state].clone()));
        }
        let u: f64 = rng.gen();
        let dt = -(1.0 - u).ln() / exit;
        let pick = rng.gen::<f64>() * exit;
        let row = &table.moves[*state];
        let k = row.partition_point(|(c, _)| *c <= pick).min(row.len() - 1);
        *state = row[k].1;
        Ok(dt)
    };
    for _ in 0..cfg.burn_in {
        step(&mut state, &mut rng)?;
    }
    let mut occupation = vec![0.0; d];
    let mut batch = vec![0.0; d];
    let mut batches = Vec::new();
    let mut in_batch = 0u64;
    for _ in 0..events {
        let here = state;
        let dt = step(&mut state, &mut rng)?;
        occupation[here] += dt;
        batch[here] += dt;
        in_batch += 1;
        if cfg.thin > 0 && in_batch == cfg.thin {
            let total: f64 = batch.iter().sum();
            batches.push(batch.iter().map(|x| x / total).collect());
            batch.iter_mut().for_each(|x| *x = 0.0);
            in_batch = 0;
        }
    }
    Ok(Trajectory {
        occupation,
        batches,
    })
}

/// Runs the trajectories and merges their occupation times in trajectory order.
pub fn simulate(cfg: &SimConfig) -> Result<EmpiricalDistribution, SimError> {
    let spec = &cfg.spec;
    if cfg.initial.len() != spec.n
        || cfg
            .initial
            .iter()
            .any(|x| x.unsigned_abs() as usize > spec.r)
    {
        return Err(SimError::InvalidConfig(format!(
            "{:?} is not a configuration for n = {}, r = {}",
            cfg.initial, spec.n, spec.r
        )));
    }
    if cfg.trajectories == 0 {
        return Err(SimError::InvalidConfig(
            "need at least one trajectory".into(),
        ));
    }
    let sector = orbit(&cfg.initial, Some(spec.rl.min(spec.rr) as i32));
    let table = build_table(cfg, &sector)?;
    let start = sector
        .binary_search(&cfg.initial)
        .expect("orbit contains its seed");
    if sector.len() == 1 {
        return Ok(EmpiricalDistribution {
            sector,
            occupation: vec![1.0],
            total_time: 1.0,
            batches: Vec::new(),
            seed: cfg.seed,
            events: cfg.events,
        });
    }
    let k = cfg.trajectories as u64;
    let runs = cfg.exec.map_range(cfg.trajectories, |i| {
        let i = i as u64;
        let events = cfg.events / k + u64::from(i < cfg.events % k);
        run_one(&table, &sector, start, cfg, i, events)
    });
    let mut occupation = vec![0.0; sector.len()];
    let mut batches = Vec::new();
    for run in runs {
        let run = run?;
        for (o, x) in occupation.iter_mut().zip(&run.occupation) {
            *o += x;
        }
        batches.extend(run.batches);
    }
    let total_time = occupation.iter().sum();
    Ok(EmpiricalDistribution {
        sector,
        occupation,
        total_time,
        batches,
        seed: cfg.seed,
        events: cfg.events,
    })
}

/// `½ Σ |p_emp − p_exact|` over the union of the supports.
pub fn tv_distance(emp: &EmpiricalDistribution, exact: &StationaryState) -> Result<f64, SimError> {
    let z = &exact.z;
    let p = emp.probabilities();
    for (mu, x) in &p {
        if *x > 0.0 && !exact.weights.contains_key(mu) {
            return Err(SimError::SupportMismatch(mu.clone()));
        }
    }
    let mut tv = 0.0;
    for (mu, w) in &exact.weights {
        if !p.contains_key(mu) && *w != Default::default() {
            return Err(SimError::SupportMismatch(mu.clone()));
        }
        tv += (p.get(mu).copied().unwrap_or(0.0) - to_f64(&(w / z))).abs();
    }
    Ok(0.5 * tv)
}

/// Command-line summary of one simulation.
#[derive(Clone, Debug, Serialize)]
pub struct SimReport {
    pub tv: f64,
    pub tv_three_sigma: Option<f64>,
    pub counts: BTreeMap<String, f64>,
    pub seed: u64,
    pub events: u64,
}

impl SimReport {
    pub fn new(emp: &EmpiricalDistribution, tv: f64) -> Self {
        SimReport {
            tv,
            tv_three_sigma: emp.tv_three_sigma(),
            counts: emp
                .sector
                .iter()
                .zip(&emp.occupation)
                .map(|(m, o)| (config_key(m), *o))
                .collect(),
            seed: emp.seed,
            events: emp.events,
        }
    }
}
