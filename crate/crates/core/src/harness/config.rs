//! Experiment configuration: one flat TOML table per experiment.
//!
//! ```toml
//! kind = "density_vs_rate"
//! seed = 7
//! n = 128
//! rates = [0.8, 0.9]
//! trials = 20
//! passes = 2
//! instances = 4
//! ```
//! Relative paths are resolved against the directory of the config file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syndrome::{BpConfig, LambdaPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    DensityVsRate,
    DensityVsRepetitions,
    BerSweep,
    RdGap,
    NetcodeSparsify,
    Prop2Validate,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::DensityVsRate => "density_vs_rate",
            ExperimentKind::DensityVsRepetitions => "density_vs_repetitions",
            ExperimentKind::BerSweep => "ber_sweep",
            ExperimentKind::RdGap => "rd_gap",
            ExperimentKind::NetcodeSparsify => "netcode_sparsify",
            ExperimentKind::Prop2Validate => "prop2_validate",
        }
    }
}

/// Every field any kind may use. Which ones are required depends on `kind`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Option<ExperimentKind>,
    pub seed: Option<u64>,

    pub n: Option<usize>,
    /// Column rates `(n-k)/n` for density kinds, code rates for `rd_gap`,
    /// per-terminal rates for network kinds. A single network rate goes to
    /// the terminal with the largest max-flow and is scaled down for the
    /// others in proportion to their max-flow.
    pub rates: Option<Vec<f64>>,
    pub trials: Option<usize>,
    pub passes: Option<usize>,
    pub instances: Option<usize>,
    /// Pass counts at which `density_vs_repetitions` reports.
    pub repetitions: Option<Vec<usize>>,
    /// Draw counts for `rd_gap`.
    pub draws: Option<Vec<usize>>,

    pub p_list: Option<Vec<f64>>,
    pub bits: Option<u64>,
    pub h_file: Option<PathBuf>,
    /// Blocklength of a structured parity-check matrix.
    pub structured: Option<usize>,
    pub max_iter: Option<usize>,
    pub terminal: Option<usize>,

    pub network: Option<PathBuf>,
    pub dag_nodes: Option<usize>,
    pub dag_layers: Option<usize>,
    pub dag_edge_density: Option<f64>,
    pub dag_terminals: Option<usize>,
    pub m: Option<u32>,
    /// Sparse `H` with Bernoulli(`lambda/n`) entries; absent means uniform.
    pub lambda: Option<f64>,
    pub max_attempts: Option<usize>,

    pub lambdas: Option<Vec<f64>>,
    pub weights: Option<Vec<usize>>,
    pub resamples: Option<usize>,

    pub output: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    /// Adds a `wall_time` column; off by default so output is byte-stable.
    pub wall_time: Option<bool>,
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

pub(crate) fn missing(field: &str, kind: ExperimentKind) -> Error {
    Error::Config {
        field: field.into(),
        reason: format!("required for kind `{}`", kind.name()),
    }
}

pub(crate) fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        field: field.into(),
        reason: reason.into(),
    }
}

macro_rules! getter {
    ($name:ident, $t:ty) => {
        pub fn $name(&self) -> Result<$t> {
            self.$name
                .clone()
                .ok_or_else(|| missing(stringify!($name), self.kind()))
        }
    };
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config {
            field: e
                .span()
                .map(|s| format!("bytes {}..{}", s.start, s.end))
                .unwrap_or_else(|| "<document>".into()),
            reason: e.message().to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg = ExperimentConfig::parse(&std::fs::read_to_string(path)?)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn kind(&self) -> ExperimentKind {
        self.kind.expect("validated")
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        match &self.base_dir {
            Some(base) if p.is_relative() => base.join(p),
            _ => p.to_path_buf(),
        }
    }

    getter!(n, usize);
    getter!(rates, Vec<f64>);
    getter!(trials, usize);
    getter!(passes, usize);
    getter!(repetitions, Vec<usize>);
    getter!(draws, Vec<usize>);
    getter!(p_list, Vec<f64>);
    getter!(bits, u64);
    getter!(m, u32);
    getter!(lambdas, Vec<f64>);
    getter!(weights, Vec<usize>);
    getter!(resamples, usize);

    pub fn seed(&self) -> u64 {
        self.seed.expect("validated")
    }

    pub fn instances(&self) -> usize {
        self.instances.unwrap_or(1)
    }

    pub fn lambda_policy(&self) -> LambdaPolicy {
        self.lambda.map_or(LambdaPolicy::Uniform, LambdaPolicy::Sparse)
    }

    pub fn bp_config(&self) -> BpConfig {
        BpConfig {
            max_iter: self.max_iter.unwrap_or(BpConfig::default().max_iter),
            ..BpConfig::default()
        }
    }

    /// Checks presence and ranges of the fields the kind needs.
    pub fn validate(&self) -> Result<()> {
        let kind = self.kind.ok_or_else(|| invalid("kind", "missing experiment kind"))?;
        if self.seed.is_none() {
            return Err(missing("seed", kind));
        }
        let positive = |name: &str, v: Option<usize>| match v {
            Some(0) => Err(invalid(name, "must be positive")),
            _ => Ok(()),
        };
        positive("n", self.n)?;
        positive("trials", self.trials)?;
        positive("passes", self.passes)?;
        positive("instances", self.instances)?;
        positive("resamples", self.resamples)?;
        if let Some(rates) = &self.rates {
            if rates.is_empty() || rates.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
                return Err(invalid("rates", "need a nonempty list of values in (0, 1)"));
            }
        }
        if let Some(ps) = &self.p_list {
            if ps.iter().any(|p| !(0.0..0.5).contains(p)) {
                return Err(invalid("p_list", "crossover probabilities must lie in [0, 1/2)"));
            }
        }
        match kind {
            ExperimentKind::DensityVsRate => {
                self.n()?;
                self.rates()?;
                self.trials()?;
                self.passes()?;
            }
            ExperimentKind::DensityVsRepetitions => {
                self.n()?;
                self.rates()?;
                self.trials()?;
                let reps = self.repetitions()?;
                if reps.is_empty() || reps.contains(&0) || reps.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(invalid(
                        "repetitions",
                        "need a strictly increasing list of positive pass counts",
                    ));
                }
            }
            ExperimentKind::BerSweep => {
                self.p_list()?;
                self.bits()?;
                let sources = [self.h_file.is_some(), self.structured.is_some(), self.has_network()];
                if sources.iter().filter(|&&s| s).count() != 1 {
                    return Err(invalid(
                        "h_file",
                        "give exactly one of h_file, structured, or a network design",
                    ));
                }
                if self.has_network() {
                    self.network_fields()?;
                }
            }
            ExperimentKind::RdGap => {
                self.n()?;
                self.rates()?;
                let d = self.draws()?;
                if d.is_empty() || d.contains(&0) {
                    return Err(invalid("draws", "need a nonempty list of positive draw counts"));
                }
            }
            ExperimentKind::NetcodeSparsify => {
                if !self.has_network() {
                    return Err(missing("network", kind));
                }
                self.network_fields()?;
            }
            ExperimentKind::Prop2Validate => {
                let n = self.n()?;
                self.resamples()?;
                for &l in self.lambdas()?.iter() {
                    if !(l > 0.0 && l <= n as f64 / 2.0) {
                        return Err(invalid("lambdas", format!("need 0 < lambda <= n/2, got {l}")));
                    }
                }
                if self.weights()?.iter().any(|&w| w > n) {
                    return Err(invalid("weights", "column weights cannot exceed n"));
                }
            }
        }
        Ok(())
    }

    pub fn has_network(&self) -> bool {
        self.network.is_some() || self.dag_nodes.is_some()
    }

    fn network_fields(&self) -> Result<()> {
        self.n()?;
        self.rates()?;
        self.m()?;
        if self.network.is_none() {
            for (name, present) in [
                ("dag_layers", self.dag_layers.is_some()),
                ("dag_edge_density", self.dag_edge_density.is_some()),
                ("dag_terminals", self.dag_terminals.is_some()),
            ] {
                if !present {
                    return Err(missing(name, self.kind()));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let text = "kind = \"density_vs_rate\"\nseed = 3\nn = 64\nrates = [0.8]\ntrials = 5\npasses = 1\n";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.kind(), ExperimentKind::DensityVsRate);
        assert_eq!(ExperimentConfig::parse(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn errors_name_the_field() {
        let no_seed = "kind = \"rd_gap\"\nn = 20\nrates = [0.5]\ndraws = [1]\n";
        assert!(matches!(ExperimentConfig::parse(no_seed), Err(Error::Config { field, .. }) if field == "seed"));
        let no_draws = "kind = \"rd_gap\"\nseed = 1\nn = 20\nrates = [0.5]\n";
        assert!(matches!(ExperimentConfig::parse(no_draws), Err(Error::Config { field, .. }) if field == "draws"));
        let bad_rate = "kind = \"rd_gap\"\nseed = 1\nn = 20\nrates = [1.5]\ndraws = [1]\n";
        assert!(matches!(ExperimentConfig::parse(bad_rate), Err(Error::Config { field, .. }) if field == "rates"));
        let unknown = "kind = \"rd_gap\"\nseed = 1\nbogus = 2\n";
        assert!(matches!(ExperimentConfig::parse(unknown), Err(Error::Config { .. })));
        let two_sources =
            "kind = \"ber_sweep\"\nseed = 1\np_list = [0.01]\nbits = 10\nstructured = 100\nh_file = \"h.txt\"\n";
        assert!(ExperimentConfig::parse(two_sources).is_err());
    }
}
