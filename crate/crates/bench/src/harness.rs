//! Static and time-varying experiment sweeps.

use std::collections::HashMap;
use std::time::Instant;

use gfs_core::dynamic::{gfs_ne, AvailabilityProcess, CutoffOracle, ExchangeConfig, ScreenOutcome};
use gfs_core::reconstruction::{
    empirical_mse, gfs_reconstruct_reusing, ls_reconstruct, select_beta, ObservedSamples,
};
use gfs_core::sampler::{gfs_sample_with, naive_a_optimal_greedy, objective, random_sample, resolve_mu, GfsOptions};
use gfs_core::spectral::{exact_eigendecompose, lp_filter, rotation_count, truncated_jacobi};
use gfs_core::{Basis, Filter, Graph, Laplacian, Mat, State, Vector};
use rayon::prelude::*;

use crate::config::{BasisChoice, BetaPolicy, ExperimentConfig, Method, Reconstructor};
use crate::record::{sort_records, ExperimentRecord};
use crate::seed::{derive_seed, trial_seed, Part};
use crate::signal::{add_noise, generate_signal, signal_power, SignalModel};
use crate::BenchError;

/// Resample budget for initial availability sets that fail screening.
pub const SCREEN_RETRIES: usize = 50;

/// Graph, bases and sampling filter shared read-only by every trial.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub graph: Graph,
    pub laplacian: Laplacian,
    /// Exact basis: signal generation and least squares.
    pub exact: Basis,
    /// Basis behind the sampling filter (exact or FGFT).
    pub sampling: Basis,
    pub filter: Filter,
}

pub fn prepare(config: &ExperimentConfig) -> Result<Prepared, BenchError> {
    let graph = config.graph.build()?;
    if config.bandwidth > graph.n() {
        return Err(BenchError::Config(format!(
            "bandwidth {} exceeds {} nodes",
            config.bandwidth,
            graph.n()
        )));
    }
    if let Some(&m) = config.samples.iter().find(|&&m| m > graph.n()) {
        return Err(BenchError::Config(format!("sample size {m} exceeds {} nodes", graph.n())));
    }
    let laplacian = graph.laplacian::<f64>();
    let exact = exact_eigendecompose(&laplacian)?;
    let sampling = match config.basis {
        BasisChoice::Exact => exact.clone(),
        BasisChoice::Fgft => truncated_jacobi(&laplacian, rotation_count(config.fgft_factor, graph.n())),
    };
    let filter = lp_filter(&sampling, config.bandwidth)?;
    Ok(Prepared {
        graph,
        laplacian,
        exact,
        sampling,
        filter,
    })
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub records: Vec<ExperimentRecord>,
    /// Failed trials and resampled availability sets, in deterministic order.
    pub events: Vec<String>,
    /// Availability masks per trial (dynamic runs only), `traces[trial][t]`.
    pub traces: Vec<Vec<Vec<bool>>>,
}

impl RunReport {
    pub fn error_count(&self) -> usize {
        self.records.iter().filter(|r| r.is_error()).count()
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn beta_for(config: &ExperimentConfig, filter: &Filter, m: usize, mu: f64) -> Result<f64, String> {
    match config.beta {
        BetaPolicy::Select => select_beta(filter, m).map_err(|e| e.to_string()),
        BetaPolicy::Sampling => Ok(mu),
        BetaPolicy::Fixed(b) => Ok(b),
    }
}

/// Shared context of one sample set: what every reconstruction of it needs.
struct Cell<'a> {
    config: &'a ExperimentConfig,
    prep: &'a Prepared,
    method: Method,
    m: usize,
    t: i64,
    trial: usize,
    mu: f64,
    beta: Result<f64, String>,
}

impl Cell<'_> {
    /// One record per (snr, reconstructor) for a sampled set.
    fn reconstruct_all(
        &self,
        sampled: Result<(&[usize], Option<&State>, f64), String>,
        signal: &Result<(Vector, Vector), String>,
        events: &mut Vec<String>,
    ) -> Vec<ExperimentRecord> {
        let mut out = Vec::new();
        let n = self.prep.graph.n();
        for &snr in &self.config.snr_db {
            let seed = match self.t {
                t if t < 0 => trial_seed(self.config.seed, self.method.name(), self.m, snr, self.trial),
                t => derive_seed(
                    self.config.seed,
                    &[
                        Part::Str(self.method.name()),
                        Part::Int(self.m as u64),
                        Part::Float(snr),
                        Part::Int(self.trial as u64),
                        Part::Int(t as u64),
                    ],
                ),
            };
            let noise_seed = derive_seed(
                self.config.seed,
                &[
                    Part::Str("noise"),
                    Part::Int(self.m as u64),
                    Part::Float(snr),
                    Part::Int(self.trial as u64),
                    Part::Int(self.t as u64),
                ],
            );
            for &rec in &self.config.reconstructors {
                let start = Instant::now();
                let result = (|| -> Result<(f64, f64, f64), String> {
                    let (set, state, sample_ms) = sampled.clone()?;
                    let (x, _) = signal.as_ref().map_err(Clone::clone)?;
                    let clean = Vector::from_iterator(set.len(), set.iter().map(|&i| x[i]));
                    let (y, w2) = add_noise(&clean, snr, signal_power(x), noise_seed).map_err(|e| e.to_string())?;
                    let obs = ObservedSamples::new(set.to_vec(), y)
                        .map_err(|e| e.to_string())?
                        .with_noise_variance(w2);
                    let estimate = match rec {
                        Reconstructor::Ls => ls_reconstruct(&self.prep.exact, self.config.bandwidth, &obs),
                        Reconstructor::GfsBiased => {
                            let beta = self.beta.clone()?;
                            let reuse = match (self.config.beta, state) {
                                (BetaPolicy::Sampling, Some(s)) => Some((s, self.mu)),
                                _ => None,
                            };
                            gfs_reconstruct_reusing(&self.prep.filter, beta, &obs, reuse)
                        }
                    }
                    .map_err(|e| e.to_string())?;
                    let mse = empirical_mse(x, &estimate.signal).map_err(|e| e.to_string())?;
                    let obj = match state {
                        Some(s) => s.objective,
                        None => objective(&self.prep.filter, self.mu, set).map_err(|e| e.to_string())?,
                    };
                    Ok((mse, obj, sample_ms))
                })();
                let elapsed = ms(start);
                let mut record = ExperimentRecord {
                    method: self.method.name().to_string(),
                    reconstructor: rec.name().to_string(),
                    m: self.m,
                    snr_db: snr,
                    t: self.t,
                    trial: self.trial,
                    mse_sum: None,
                    mse_mean: None,
                    objective: None,
                    wall_time_ms: elapsed,
                    seed,
                };
                match result {
                    Ok((mse, obj, sample_ms)) => {
                        record.mse_sum = Some(mse);
                        record.mse_mean = Some(mse / n as f64);
                        record.objective = Some(obj);
                        record.wall_time_ms += sample_ms;
                    }
                    Err(reason) => events.push(format!(
                        "{} {} M={} snr={} t={} trial={}: {reason}",
                        self.method, rec, self.m, snr, self.t, self.trial
                    )),
                }
                out.push(record);
            }
        }
        out
    }
}

fn model(config: &ExperimentConfig) -> SignalModel {
    SignalModel {
        bandwidth: config.bandwidth,
        coeff_mean: config.coeff_mean,
        coeff_std: config.coeff_std,
    }
}

fn make_signal(config: &ExperimentConfig, prep: &Prepared, seed: u64) -> Result<(Vector, Vector), String> {
    generate_signal(&prep.exact, &model(config), seed)
        .map(|s| (s.values, s.coeffs))
        .map_err(|e| e.to_string())
}

type Deterministic = Result<(State, f64), String>;

/// Sweep (method, M, snr, trial) on a fixed graph.
pub fn run_static(config: &ExperimentConfig) -> Result<RunReport, BenchError> {
    if config.dynamic.is_some() {
        return Err(BenchError::Config("static runs take no dynamic.* keys".into()));
    }
    if config.methods.contains(&Method::GfsNe) {
        return Err(BenchError::Config("gfs-ne needs a dynamic configuration".into()));
    }
    let prep = prepare(config)?;
    run_static_prepared(config, &prep)
}

pub fn run_static_prepared(config: &ExperimentConfig, prep: &Prepared) -> Result<RunReport, BenchError> {
    let mus: HashMap<usize, f64> = config
        .samples
        .iter()
        .map(|&m| Ok((m, resolve_mu(config.mu, &prep.filter, m)?)))
        .collect::<Result<_, gfs_core::Error>>()?;

    // sample sets of the deterministic methods do not depend on the trial
    let fixed: Vec<(Method, usize)> = config
        .methods
        .iter()
        .filter(|&&m| m != Method::Random)
        .flat_map(|&method| config.samples.iter().map(move |&m| (method, m)))
        .collect();
    let sets: HashMap<(Method, usize), Deterministic> = fixed
        .par_iter()
        .map(|&(method, m)| {
            let mu = mus[&m];
            let start = Instant::now();
            let state = match method {
                Method::OracleGreedy => naive_a_optimal_greedy(&prep.sampling, config.bandwidth, mu, m)
                    .and_then(|set| State::from_set(&prep.filter.shifted(mu), set)),
                _ => gfs_sample_with(&prep.filter, mu, m, &GfsOptions::default()).map(|r| r.state),
            };
            ((method, m), state.map(|s| (s, ms(start))).map_err(|e| e.to_string()))
        })
        .collect();

    let mut jobs = Vec::new();
    for &method in &config.methods {
        for &m in &config.samples {
            for trial in 0..config.trials {
                jobs.push((method, m, trial));
            }
        }
    }
    let results: Vec<(Vec<ExperimentRecord>, Vec<String>)> = jobs
        .par_iter()
        .map(|&(method, m, trial)| {
            let mu = mus[&m];
            let cell = Cell {
                config,
                prep,
                method,
                m,
                t: -1,
                trial,
                mu,
                beta: beta_for(config, &prep.filter, m, mu),
            };
            let signal = make_signal(
                config,
                prep,
                derive_seed(config.seed, &[Part::Str("signal"), Part::Int(trial as u64)]),
            );
            let mut events = Vec::new();
            let records = if method == Method::Random {
                let start = Instant::now();
                let seed = derive_seed(
                    config.seed,
                    &[Part::Str("random-set"), Part::Int(m as u64), Part::Int(trial as u64)],
                );
                match random_sample(prep.graph.n(), m, seed) {
                    Ok(set) => {
                        let elapsed = ms(start);
                        cell.reconstruct_all(Ok((&set, None, elapsed)), &signal, &mut events)
                    }
                    Err(e) => cell.reconstruct_all(Err(e.to_string()), &signal, &mut events),
                }
            } else {
                match &sets[&(method, m)] {
                    Ok((state, t)) => cell.reconstruct_all(Ok((&state.sample_set, Some(state), *t)), &signal, &mut events),
                    Err(e) => cell.reconstruct_all(Err(e.clone()), &signal, &mut events),
                }
            };
            (records, events)
        })
        .collect();

    let mut report = RunReport::default();
    for (records, events) in results {
        report.records.extend(records);
        report.events.extend(events);
    }
    sort_records(&mut report.records);
    Ok(report)
}

/// Initial availability that passes cutoff screening, plus log lines for
/// every rejected draw.
fn screened_availability(
    config: &ExperimentConfig,
    n: usize,
    oracle: &CutoffOracle<f64>,
    trial: usize,
) -> Result<(AvailabilityProcess, Vec<String>), String> {
    let dyn_cfg = config.dynamic.as_ref().expect("dynamic block");
    let mut events = Vec::new();
    for attempt in 0..=SCREEN_RETRIES {
        let at = [Part::Int(trial as u64), Part::Int(attempt as u64)];
        let seed = derive_seed(config.seed, &[&[Part::Str("availability")][..], &at].concat());
        let process = AvailabilityProcess::new(n, dyn_cfg.p0, dyn_cfg.eps, seed).map_err(|e| e.to_string())?;
        let screen_seed = derive_seed(config.seed, &[&[Part::Str("screen")][..], &at].concat());
        match oracle
            .screen(&process.current, dyn_cfg.screen_draws, dyn_cfg.screen_rank, screen_seed)
            .map_err(|e| e.to_string())?
        {
            ScreenOutcome::Good => return Ok((process, events)),
            ScreenOutcome::Bad { threshold, value } => events.push(format!(
                "trial={trial} attempt={attempt}: initial availability rejected \
                 (cutoff {value:.6e} below threshold {threshold:.6e}); resampling"
            )),
        }
    }
    Err(format!("no acceptable initial availability after {} draws", SCREEN_RETRIES + 1))
}

fn available_random(mask: &[bool], m: usize, seed: u64) -> Result<Vec<usize>, String> {
    let available: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
    if available.len() < m {
        return Err(gfs_core::Error::InfeasibleAvailability {
            available: available.len(),
            required: m,
        }
        .to_string());
    }
    let picks = random_sample(available.len(), m, seed).map_err(|e| e.to_string())?;
    Ok(picks.into_iter().map(|i| available[i]).collect())
}

/// Sweep over time with evolving availability: GFS-NE against GFS re-run
/// from scratch (and random sets) on the same availability trace.
pub fn run_dynamic(config: &ExperimentConfig) -> Result<RunReport, BenchError> {
    let Some(dyn_cfg) = config.dynamic.clone() else {
        return Err(BenchError::Config("dynamic runs need dynamic.* keys".into()));
    };
    if config.methods.contains(&Method::OracleGreedy) {
        return Err(BenchError::Config("oracle-greedy is a static method".into()));
    }
    let prep = prepare(config)?;
    let n = prep.graph.n();
    let oracle = CutoffOracle::new(&prep.laplacian, dyn_cfg.screen_k)?;
    let mut per_m = Vec::new();
    for &m in &config.samples {
        let mu = resolve_mu(config.mu, &prep.filter, m)?;
        per_m.push((m, mu, prep.filter.shifted(mu)));
    }

    type TrialOut = (Vec<ExperimentRecord>, Vec<String>, Vec<Vec<bool>>);
    let results: Vec<TrialOut> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut records = Vec::new();
            let mut events = Vec::new();
            let (mut process, screen_events) = match screened_availability(config, n, &oracle, trial) {
                Ok(v) => v,
                Err(reason) => {
                    events.push(format!("trial={trial}: {reason}"));
                    return (records, events, Vec::new());
                }
            };
            events.extend(screen_events);
            let mut masks = vec![process.current.clone()];
            for _ in 0..dyn_cfg.steps {
                process.advance();
                masks.push(process.current.clone());
            }
            for (m, mu, g) in &per_m {
                run_dynamic_cell(config, &prep, &dyn_cfg, trial, *m, *mu, g, &masks, &mut records, &mut events);
            }
            (records, events, masks)
        })
        .collect();

    let mut report = RunReport::default();
    for (records, events, masks) in results {
        report.records.extend(records);
        report.events.extend(events);
        report.traces.push(masks);
    }
    sort_records(&mut report.records);
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn run_dynamic_cell(
    config: &ExperimentConfig,
    prep: &Prepared,
    dyn_cfg: &crate::config::DynamicConfig,
    trial: usize,
    m: usize,
    mu: f64,
    g: &Mat,
    masks: &[Vec<bool>],
    records: &mut Vec<ExperimentRecord>,
    events: &mut Vec<String>,
) {
    let beta = beta_for(config, &prep.filter, m, mu);
    let exchange = ExchangeConfig { k0: dyn_cfg.k0, mu };
    let scratch = |mask: &[bool]| -> Result<State, String> {
        let opts = GfsOptions {
            candidates: Some(mask.to_vec()),
            ..GfsOptions::default()
        };
        gfs_sample_with(&prep.filter, mu, m, &opts)
            .map(|r| r.state)
            .map_err(|e| e.to_string())
    };
    let mut ne_state: Option<State> = None;
    for (t, mask) in masks.iter().enumerate() {
        let signal = make_signal(
            config,
            prep,
            derive_seed(
                config.seed,
                &[Part::Str("signal"), Part::Int(trial as u64), Part::Int(t as u64)],
            ),
        );
        for &method in &config.methods {
            let cell = Cell {
                config,
                prep,
                method,
                m,
                t: t as i64,
                trial,
                mu,
                beta: beta.clone(),
            };
            let start = Instant::now();
            let sampled: Result<State, String> = match method {
                Method::GfsNe => match &ne_state {
                    None => scratch(mask),
                    Some(prev) => gfs_ne(prev, g, mask, &exchange)
                        .map(|run| run.state)
                        .map_err(|e| e.to_string()),
                },
                Method::Random => {
                    let seed = derive_seed(
                        config.seed,
                        &[
                            Part::Str("random-set"),
                            Part::Int(m as u64),
                            Part::Int(trial as u64),
                            Part::Int(t as u64),
                        ],
                    );
                    available_random(mask, m, seed)
                        .and_then(|set| State::from_set(g, set).map_err(|e| e.to_string()))
                }
                _ => scratch(mask),
            };
            let elapsed = ms(start);
            match &sampled {
                Ok(state) => {
                    records.extend(cell.reconstruct_all(
                        Ok((&state.sample_set, Some(state), elapsed)),
                        &signal,
                        events,
                    ));
                }
                Err(e) => records.extend(cell.reconstruct_all(Err(e.clone()), &signal, events)),
            }
            if method == Method::GfsNe {
                // a failed step keeps the previous set for the next repair
                if let Ok(state) = sampled {
                    ne_state = Some(state);
                }
            }
        }
    }
}
