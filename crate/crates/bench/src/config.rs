//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # comment
//! graph = community          # sensor | community | cube | file
//! graph.n = 500
//! graph.communities = 10
//! graph.p_in = 0.3
//! graph.p_out = 0.005
//! bandwidth = 50
//! samples = 60, 80, 100
//! snr_db = 0, inf
//! trials = 50
//! seed = 7
//! rng = chacha8
//! methods = gfs, random
//! reconstructors = ls, gfs-biased
//! ```
//!
//! Every key is listed in [`KEYS`]; anything else is rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use gfs_core::graph::{gen_community_graph, gen_cube_graph, gen_sensor_graph, load_edge_list};
use gfs_core::sampler::ShiftPolicy;
use gfs_core::Graph;

use crate::BenchError;

pub const KEYS: &[&str] = &[
    "graph",
    "graph.n",
    "graph.radius",
    "graph.communities",
    "graph.p_in",
    "graph.p_out",
    "graph.side",
    "graph.dims",
    "graph.path",
    "graph.seed",
    "bandwidth",
    "samples",
    "snr_db",
    "trials",
    "seed",
    "rng",
    "mu",
    "beta",
    "basis",
    "fgft.factor",
    "methods",
    "reconstructors",
    "signal.mean",
    "signal.std",
    "dynamic.p0",
    "dynamic.eps",
    "dynamic.k0",
    "dynamic.steps",
    "dynamic.screen_k",
    "dynamic.screen_draws",
    "dynamic.screen_rank",
];

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Sensor { n: usize, radius: f64, seed: u64 },
    Community { n: usize, communities: usize, p_in: f64, p_out: f64, seed: u64 },
    Cube { side: usize, dims: usize },
    File(PathBuf),
}

impl GraphSpec {
    pub fn build(&self) -> gfs_core::Result<Graph> {
        match self {
            GraphSpec::Sensor { n, radius, seed } => gen_sensor_graph(*n, *radius, *seed),
            GraphSpec::Community {
                n,
                communities,
                p_in,
                p_out,
                seed,
            } => gen_community_graph(*n, *communities, *p_in, *p_out, *seed),
            GraphSpec::Cube { side, dims } => gen_cube_graph(*side, *dims),
            GraphSpec::File(path) => load_edge_list(path),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Gfs,
    GfsNe,
    Random,
    OracleGreedy,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Gfs => "gfs",
            Method::GfsNe => "gfs-ne",
            Method::Random => "random",
            Method::OracleGreedy => "oracle-greedy",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "gfs" => Method::Gfs,
            "gfs-ne" => Method::GfsNe,
            "random" => Method::Random,
            "oracle-greedy" => Method::OracleGreedy,
            _ => return None,
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Reconstructor {
    Ls,
    GfsBiased,
}

impl Reconstructor {
    pub fn name(self) -> &'static str {
        match self {
            Reconstructor::Ls => "ls",
            Reconstructor::GfsBiased => "gfs-biased",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ls" => Some(Reconstructor::Ls),
            "gfs-biased" => Some(Reconstructor::GfsBiased),
            _ => None,
        }
    }
}

impl fmt::Display for Reconstructor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaPolicy {
    /// Average of the `M` smallest filter diagonals over `K`.
    Select,
    /// Reuse the sampling shift (and its maintained inverse when available).
    Sampling,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisChoice {
    Exact,
    Fgft,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicConfig {
    pub p0: f64,
    pub eps: f64,
    pub k0: usize,
    pub steps: usize,
    pub screen_k: usize,
    pub screen_draws: usize,
    pub screen_rank: usize,
}

impl Default for DynamicConfig {
    fn default() -> Self {
        Self {
            p0: 0.8,
            eps: 0.02,
            k0: 50,
            steps: 20,
            screen_k: 10,
            screen_draws: 50,
            screen_rank: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    pub bandwidth: usize,
    pub samples: Vec<usize>,
    pub snr_db: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub mu: ShiftPolicy<f64>,
    pub beta: BetaPolicy,
    pub basis: BasisChoice,
    pub fgft_factor: f64,
    pub methods: Vec<Method>,
    pub reconstructors: Vec<Reconstructor>,
    pub coeff_mean: f64,
    pub coeff_std: f64,
    pub dynamic: Option<DynamicConfig>,
}

fn err(msg: impl Into<String>) -> BenchError {
    BenchError::Config(msg.into())
}

struct Raw(BTreeMap<String, (usize, String)>);

impl Raw {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.0.remove(key)
    }

    fn required(&mut self, key: &str) -> Result<(usize, String), BenchError> {
        self.take(key).ok_or_else(|| err(format!("missing required key `{key}`")))
    }

    fn parsed<V: std::str::FromStr>(&mut self, key: &str) -> Result<Option<V>, BenchError>
    where
        V::Err: fmt::Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|e| err(format!("line {line}: `{key}`: {e}"))),
        }
    }

    fn need<V: std::str::FromStr>(&mut self, key: &str) -> Result<V, BenchError>
    where
        V::Err: fmt::Display,
    {
        self.parsed(key)?
            .ok_or_else(|| err(format!("missing required key `{key}`")))
    }
}

fn list(line: usize, key: &str, value: &str) -> Result<Vec<String>, BenchError> {
    let items: Vec<String> = value
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if items.is_empty() {
        return Err(err(format!("line {line}: `{key}` must list at least one value")));
    }
    Ok(items)
}

fn snr(line: usize, s: &str) -> Result<f64, BenchError> {
    match s {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        _ => s
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| err(format!("line {line}: bad snr `{s}`"))),
    }
}

fn number(line: usize, key: &str, s: &str) -> Result<f64, BenchError> {
    s.parse()
        .map_err(|_| err(format!("line {line}: `{key}`: `{s}` is not a number")))
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, BenchError> {
        let mut raw = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("line {line_no}: expected `key = value`")))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(err(format!("line {line_no}: unknown key `{key}`")));
            }
            if raw
                .insert(key.to_string(), (line_no, value.trim().to_string()))
                .is_some()
            {
                return Err(err(format!("line {line_no}: duplicate key `{key}`")));
            }
        }
        let mut raw = Raw(raw);

        if let Some((line, rng)) = raw.take("rng") {
            if rng != "chacha8" {
                return Err(err(format!("line {line}: only `rng = chacha8` is supported")));
            }
        }
        let seed: u64 = raw.parsed("seed")?.unwrap_or(0);
        let graph_seed: u64 = raw.parsed("graph.seed")?.unwrap_or(seed);
        let (gline, family) = raw.required("graph")?;
        let graph = match family.as_str() {
            "sensor" => GraphSpec::Sensor {
                n: raw.need("graph.n")?,
                radius: raw.need("graph.radius")?,
                seed: graph_seed,
            },
            "community" => GraphSpec::Community {
                n: raw.need("graph.n")?,
                communities: raw.need("graph.communities")?,
                p_in: raw.need("graph.p_in")?,
                p_out: raw.need("graph.p_out")?,
                seed: graph_seed,
            },
            "cube" => GraphSpec::Cube {
                side: raw.need("graph.side")?,
                dims: raw.need("graph.dims")?,
            },
            "file" => GraphSpec::File(PathBuf::from(raw.required("graph.path")?.1)),
            other => return Err(err(format!("line {gline}: unknown graph family `{other}`"))),
        };
        for key in KEYS.iter().filter(|k| k.starts_with("graph.")) {
            if let Some((line, _)) = raw.take(key) {
                return Err(err(format!("line {line}: `{key}` does not apply to `graph = {family}`")));
            }
        }

        let bandwidth: usize = raw.need("bandwidth")?;
        let (sline, s) = raw.required("samples")?;
        let samples = list(sline, "samples", &s)?
            .iter()
            .map(|v| v.parse().map_err(|_| err(format!("line {sline}: bad sample size `{v}`"))))
            .collect::<Result<Vec<usize>, _>>()?;
        let snr_db = match raw.take("snr_db") {
            Some((line, s)) => list(line, "snr_db", &s)?
                .iter()
                .map(|v| snr(line, v))
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![f64::INFINITY],
        };
        let trials: usize = raw.parsed("trials")?.unwrap_or(1);

        let mu = match raw.take("mu") {
            None => ShiftPolicy::ConditionNumber(100.0),
            Some((line, v)) => match v.split_once(':') {
                Some(("condition", x)) => ShiftPolicy::ConditionNumber(number(line, "mu", x)?),
                Some(("fixed", x)) => ShiftPolicy::Fixed(number(line, "mu", x)?),
                None if v == "diagonal" => ShiftPolicy::DiagonalAverage,
                _ => return Err(err(format!("line {line}: bad shift policy `{v}`"))),
            },
        };
        let beta = match raw.take("beta") {
            None => BetaPolicy::Select,
            Some((line, v)) => match (v.as_str(), v.split_once(':')) {
                ("select", _) => BetaPolicy::Select,
                ("sampling", _) => BetaPolicy::Sampling,
                (_, Some(("fixed", x))) => BetaPolicy::Fixed(number(line, "beta", x)?),
                _ => return Err(err(format!("line {line}: bad beta policy `{v}`"))),
            },
        };
        let basis = match raw.take("basis") {
            None => BasisChoice::Fgft,
            Some((_, v)) if v == "fgft" => BasisChoice::Fgft,
            Some((_, v)) if v == "exact" => BasisChoice::Exact,
            Some((line, v)) => return Err(err(format!("line {line}: bad basis `{v}`"))),
        };
        let fgft_factor: f64 = raw.parsed("fgft.factor")?.unwrap_or(6.0);

        let methods = match raw.take("methods") {
            None => vec![Method::Gfs],
            Some((line, v)) => list(line, "methods", &v)?
                .iter()
                .map(|m| Method::parse(m).ok_or_else(|| err(format!("line {line}: unknown method `{m}`"))))
                .collect::<Result<Vec<_>, _>>()?,
        };
        let reconstructors = match raw.take("reconstructors") {
            None => vec![Reconstructor::Ls],
            Some((line, v)) => list(line, "reconstructors", &v)?
                .iter()
                .map(|m| {
                    Reconstructor::parse(m).ok_or_else(|| err(format!("line {line}: unknown reconstructor `{m}`")))
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        let coeff_mean: f64 = raw.parsed("signal.mean")?.unwrap_or(1.0);
        let coeff_std: f64 = raw.parsed("signal.std")?.unwrap_or(0.5);

        let dynamic = if raw.0.keys().any(|k| k.starts_with("dynamic.")) {
            let d = DynamicConfig::default();
            Some(DynamicConfig {
                p0: raw.parsed("dynamic.p0")?.unwrap_or(d.p0),
                eps: raw.parsed("dynamic.eps")?.unwrap_or(d.eps),
                k0: raw.parsed("dynamic.k0")?.unwrap_or(d.k0),
                steps: raw.parsed("dynamic.steps")?.unwrap_or(d.steps),
                screen_k: raw.parsed("dynamic.screen_k")?.unwrap_or(d.screen_k),
                screen_draws: raw.parsed("dynamic.screen_draws")?.unwrap_or(d.screen_draws),
                screen_rank: raw.parsed("dynamic.screen_rank")?.unwrap_or(d.screen_rank),
            })
        } else {
            None
        };
        debug_assert!(raw.0.is_empty(), "unhandled keys {:?}", raw.0.keys());

        let config = Self {
            graph,
            bandwidth,
            samples,
            snr_db,
            trials,
            seed,
            mu,
            beta,
            basis,
            fgft_factor,
            methods,
            reconstructors,
            coeff_mean,
            coeff_std,
            dynamic,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| err(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.bandwidth == 0 {
            return Err(err("bandwidth must be at least 1"));
        }
        if self.samples.contains(&0) {
            return Err(err("sample sizes must be at least 1"));
        }
        if self.trials == 0 {
            return Err(err("trials must be at least 1"));
        }
        if self.samples.is_empty() || self.snr_db.is_empty() || self.methods.is_empty() || self.reconstructors.is_empty()
        {
            return Err(err("sample, snr, method and reconstructor lists must be non-empty"));
        }
        if !(self.fgft_factor >= 0.0) {
            return Err(err("fgft.factor must be non-negative"));
        }
        if !(self.coeff_std >= 0.0) || !self.coeff_mean.is_finite() {
            return Err(err("signal.std must be non-negative and signal.mean finite"));
        }
        if let Some(d) = &self.dynamic {
            if !(0.0..=1.0).contains(&d.p0) || !(0.0..=1.0).contains(&d.eps) {
                return Err(err("dynamic.p0 and dynamic.eps must lie in [0, 1]"));
            }
            if d.screen_rank == 0 || d.screen_rank > d.screen_draws || d.screen_k == 0 {
                return Err(err("screening needs 1 <= screen_rank <= screen_draws and screen_k >= 1"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "graph = sensor\ngraph.n = 30\ngraph.radius = 0.4\nbandwidth = 4\nsamples = 5, 6\n";

    #[test]
    fn minimal_config_gets_defaults() {
        let c = ExperimentConfig::parse(BASE).unwrap();
        assert_eq!(c.samples, vec![5, 6]);
        assert_eq!(c.snr_db, vec![f64::INFINITY]);
        assert_eq!(c.methods, vec![Method::Gfs]);
        assert_eq!(c.mu, ShiftPolicy::ConditionNumber(100.0));
        assert_eq!(c.basis, BasisChoice::Fgft);
        assert!(c.dynamic.is_none());
    }

    #[test]
    fn full_config() {
        let text = format!(
            "{BASE}snr_db = 0, 10, inf # comment\ntrials = 3\nseed = 9\nrng = chacha8\nmu = fixed:0.001\n\
             beta = fixed:0.2\nbasis = exact\nmethods = gfs, random, oracle-greedy\n\
             reconstructors = ls, gfs-biased\ndynamic.k0 = 7\n"
        );
        let c = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(c.snr_db, vec![0.0, 10.0, f64::INFINITY]);
        assert_eq!(c.mu, ShiftPolicy::Fixed(0.001));
        assert_eq!(c.beta, BetaPolicy::Fixed(0.2));
        assert_eq!(c.methods.len(), 3);
        let d = c.dynamic.unwrap();
        assert_eq!((d.k0, d.p0, d.steps), (7, 0.8, 20));
        assert!(matches!(c.graph, GraphSpec::Sensor { seed: 9, .. }));
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            format!("{BASE}colour = red\n"),
            format!("{BASE}bandwidth = 3\n"),
            format!("{BASE}rng = pcg\n"),
            format!("{BASE}methods = gfs, magic\n"),
            format!("{BASE}trials = 0\n"),
            format!("{BASE}graph.side = 3\n"),
            format!("{BASE}snr_db = loud\n"),
            format!("{BASE}samples =\n"),
            "graph = sensor\n".to_string(),
            "bandwidth 4\n".to_string(),
        ] {
            assert!(matches!(ExperimentConfig::parse(&bad), Err(BenchError::Config(_))), "{bad}");
        }
    }
}
