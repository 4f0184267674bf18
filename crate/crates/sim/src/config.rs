//! Experiment configuration: TOML loading, defaults, validation and the
//! resolved-config echo written next to results.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use wsn_core::engine::DEFAULT_MAX_ROUNDS;
use wsn_core::protocols::q_step;
use wsn_core::radio::{
    DEFAULT_E_DA, DEFAULT_E_ELE, DEFAULT_E_FS, DEFAULT_E_INIT, DEFAULT_E_MP, DEFAULT_PACKET_BITS, DEFAULT_P_OPT,
};
use wsn_core::{FieldConfig, Point, ProtocolConfig, RadioParams, SimConfig, SimError, SplitAxis, StrategyKind};

pub const DEFAULT_SEED_COUNT: u64 = 5;
pub const DEFAULT_OUT_DIR: &str = "results";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse config file {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
}

impl ConfigError {
    fn invalid(key: impl Into<String>, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            key: key.into(),
            reason: reason.into(),
        }
    }
}

/// On-disk layout. Every key is optional; absent keys take the defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub field: FieldSection,
    #[serde(default)]
    pub radio: RadioSection,
    #[serde(default)]
    pub protocol: ProtocolSection,
    #[serde(default)]
    pub experiment: ExperimentSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    pub width: Option<f64>,
    pub height: Option<f64>,
    pub bs_x: Option<f64>,
    pub bs_y: Option<f64>,
    pub split_axis: Option<String>,
    pub nodes_per_region: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioSection {
    pub e_ele: Option<f64>,
    pub e_fs: Option<f64>,
    pub e_mp: Option<f64>,
    pub e_da: Option<f64>,
    pub e_init: Option<f64>,
    pub packet_bits: Option<u32>,
    pub p_opt: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolSection {
    pub protocols: Option<Vec<String>>,
    pub k_opt: Option<u32>,
    pub same_region_membership: Option<bool>,
    pub leach_direct_override: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub seeds: Option<Vec<u64>>,
    pub seed_count: Option<u64>,
    pub max_rounds: Option<u32>,
    pub out_dir: Option<PathBuf>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub seed_count: Option<u64>,
    pub seed_list: Option<Vec<u64>>,
    pub out_dir: Option<PathBuf>,
    pub protocols: Option<Vec<StrategyKind>>,
    pub max_rounds: Option<u32>,
}

/// A fully resolved, validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub sim: SimConfig,
    pub protocols: Vec<StrategyKind>,
    pub seeds: Vec<u64>,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig::resolve(ConfigFile::default(), &Overrides::default()).expect("defaults are valid")
    }
}

/// Reads and validates `path`.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    load_config_with(Some(path), &Overrides::default())
}

/// Reads `path` (or starts from defaults) and applies `overrides`.
pub fn load_config_with(path: Option<&Path>, overrides: &Overrides) -> Result<ExperimentConfig, ConfigError> {
    let file = match path {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
                path: path.to_owned(),
                source,
            })?;
            parse_config(&text).map_err(|source| ConfigError::Parse {
                path: path.to_owned(),
                source,
            })?
        }
        None => ConfigFile::default(),
    };
    ExperimentConfig::resolve(file, overrides)
}

pub fn parse_config(text: &str) -> Result<ConfigFile, toml::de::Error> {
    toml::from_str(text)
}

fn core_err(section: &str, err: SimError) -> ConfigError {
    match err {
        SimError::InvalidParameter { name, reason } => ConfigError::invalid(format!("{section}.{name}"), reason),
        SimError::InvalidClusterTarget { .. } => ConfigError::invalid("protocol.k_opt", err.to_string()),
        other => ConfigError::invalid(section, other.to_string()),
    }
}

fn parse_axis(s: &str) -> Result<SplitAxis, ConfigError> {
    match s.to_ascii_lowercase().as_str() {
        "vertical" => Ok(SplitAxis::Vertical),
        "horizontal" => Ok(SplitAxis::Horizontal),
        _ => Err(ConfigError::invalid(
            "field.split_axis",
            format!("expected \"vertical\" or \"horizontal\", got {s:?}"),
        )),
    }
}

impl ExperimentConfig {
    pub fn resolve(file: ConfigFile, overrides: &Overrides) -> Result<Self, ConfigError> {
        let f = file.field;
        let defaults = FieldConfig::default();
        let field = FieldConfig {
            width: f.width.unwrap_or(defaults.width),
            height: f.height.unwrap_or(defaults.height),
            bs: Point::new(f.bs_x.unwrap_or(defaults.bs.x), f.bs_y.unwrap_or(defaults.bs.y)),
            split_axis: f.split_axis.as_deref().map(parse_axis).transpose()?.unwrap_or_default(),
            nodes_per_region: f.nodes_per_region.unwrap_or(defaults.nodes_per_region),
        };
        field.validate().map_err(|e| core_err("field", e))?;

        let r = file.radio;
        let radio = RadioParams::new(
            r.e_ele.unwrap_or(DEFAULT_E_ELE),
            r.e_fs.unwrap_or(DEFAULT_E_FS),
            r.e_mp.unwrap_or(DEFAULT_E_MP),
            r.e_da.unwrap_or(DEFAULT_E_DA),
            r.e_init.unwrap_or(DEFAULT_E_INIT),
            r.packet_bits.unwrap_or(DEFAULT_PACKET_BITS),
            r.p_opt.unwrap_or(DEFAULT_P_OPT),
        )
        .map_err(|e| core_err("radio", e))?;

        let p = file.protocol;
        let n_total = field.n_total();
        let k_opt = p
            .k_opt
            .unwrap_or_else(|| (f64::from(n_total) * radio.p_opt).round().max(1.0) as u32);
        q_step(n_total, k_opt).map_err(|e| core_err("protocol", e))?;
        let protocol = ProtocolConfig {
            k_opt,
            same_region_membership: p.same_region_membership.unwrap_or(false),
            leach_direct_override: p.leach_direct_override.unwrap_or(false),
        };
        let protocols = match (&overrides.protocols, p.protocols) {
            (Some(list), _) => list.clone(),
            (None, Some(names)) => names
                .iter()
                .map(|name| {
                    name.parse::<StrategyKind>()
                        .map_err(|e| ConfigError::invalid("protocol.protocols", format!("{name:?}: {e}")))
                })
                .collect::<Result<_, _>>()?,
            (None, None) => StrategyKind::ALL.to_vec(),
        };
        if protocols.is_empty() {
            return Err(ConfigError::invalid(
                "protocol.protocols",
                "at least one protocol is required",
            ));
        }
        let mut seen = Vec::new();
        for kind in &protocols {
            if seen.contains(kind) {
                return Err(ConfigError::invalid(
                    "protocol.protocols",
                    format!("{kind} listed twice"),
                ));
            }
            seen.push(*kind);
        }

        let e = file.experiment;
        let seeds = if let Some(list) = &overrides.seed_list {
            list.clone()
        } else if let Some(n) = overrides.seed_count {
            (1..=n).collect()
        } else {
            match (e.seeds, e.seed_count) {
                (Some(_), Some(_)) => {
                    return Err(ConfigError::invalid(
                        "experiment.seeds",
                        "give either `seeds` or `seed_count`, not both",
                    ))
                }
                (Some(list), None) => list,
                (None, count) => (1..=count.unwrap_or(DEFAULT_SEED_COUNT)).collect(),
            }
        };
        if seeds.is_empty() {
            return Err(ConfigError::invalid(
                "experiment.seeds",
                "at least one seed is required",
            ));
        }
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(ConfigError::invalid("experiment.seeds", "seeds must be distinct"));
        }
        let max_rounds = overrides.max_rounds.or(e.max_rounds).unwrap_or(DEFAULT_MAX_ROUNDS);
        if max_rounds == 0 {
            return Err(ConfigError::invalid("experiment.max_rounds", "must be at least 1"));
        }
        let out_dir = overrides
            .out_dir
            .clone()
            .or(e.out_dir)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));

        Ok(ExperimentConfig {
            sim: SimConfig {
                field,
                radio,
                protocol,
                max_rounds,
            },
            protocols,
            seeds,
            out_dir,
        })
    }

    pub fn q_step(&self) -> u32 {
        q_step(self.sim.field.n_total(), self.sim.protocol.k_opt).expect("validated")
    }

    /// The resolved configuration as TOML, with derived values in a
    /// `[derived]` table. Loading it back reproduces the experiment.
    pub fn echo(&self) -> String {
        let s = &self.sim;
        let echo = Echo {
            field: EchoField {
                width: s.field.width,
                height: s.field.height,
                bs_x: s.field.bs.x,
                bs_y: s.field.bs.y,
                split_axis: match s.field.split_axis {
                    SplitAxis::Vertical => "vertical",
                    SplitAxis::Horizontal => "horizontal",
                },
                nodes_per_region: s.field.nodes_per_region,
            },
            radio: EchoRadio {
                e_ele: s.radio.e_ele,
                e_fs: s.radio.e_fs,
                e_mp: s.radio.e_mp,
                e_da: s.radio.e_da,
                e_init: s.radio.e_init,
                packet_bits: s.radio.packet_bits,
                p_opt: s.radio.p_opt,
            },
            protocol: EchoProtocol {
                protocols: self.protocols.iter().map(|k| k.name()).collect(),
                k_opt: s.protocol.k_opt,
                same_region_membership: s.protocol.same_region_membership,
                leach_direct_override: s.protocol.leach_direct_override,
            },
            experiment: EchoExperiment {
                seeds: self.seeds.clone(),
                max_rounds: s.max_rounds,
                out_dir: self.out_dir.display().to_string(),
            },
            derived: EchoDerived {
                n_total: s.field.n_total(),
                q_step: self.q_step(),
                epoch_len: s.radio.epoch_len(),
                d_crossover: s.radio.d_crossover,
            },
        };
        toml::to_string(&echo).expect("echo serializes")
    }
}

#[derive(Serialize)]
struct Echo {
    field: EchoField,
    radio: EchoRadio,
    protocol: EchoProtocol,
    experiment: EchoExperiment,
    derived: EchoDerived,
}

#[derive(Serialize)]
struct EchoField {
    width: f64,
    height: f64,
    bs_x: f64,
    bs_y: f64,
    split_axis: &'static str,
    nodes_per_region: u32,
}

#[derive(Serialize)]
struct EchoRadio {
    e_ele: f64,
    e_fs: f64,
    e_mp: f64,
    e_da: f64,
    e_init: f64,
    packet_bits: u32,
    p_opt: f64,
}

#[derive(Serialize)]
struct EchoProtocol {
    protocols: Vec<&'static str>,
    k_opt: u32,
    same_region_membership: bool,
    leach_direct_override: bool,
}

#[derive(Serialize)]
struct EchoExperiment {
    seeds: Vec<u64>,
    max_rounds: u32,
    out_dir: String,
}

#[derive(Serialize)]
struct EchoDerived {
    n_total: u32,
    q_step: u32,
    epoch_len: u32,
    d_crossover: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(text: &str) -> Result<ExperimentConfig, ConfigError> {
        ExperimentConfig::resolve(parse_config(text).unwrap(), &Overrides::default())
    }

    #[test]
    fn empty_file_gives_defaults() {
        let c = resolve("").unwrap();
        assert_eq!(c.sim.field, FieldConfig::default());
        assert_eq!(c.sim.field.n_total(), 100);
        assert_eq!(c.sim.radio, wsn_core::default_params());
        assert_eq!(c.sim.protocol.k_opt, 10);
        assert_eq!(c.protocols, StrategyKind::ALL.to_vec());
        assert_eq!(c.seeds, vec![1, 2, 3, 4, 5]);
        assert_eq!(c.sim.max_rounds, DEFAULT_MAX_ROUNDS);
    }

    #[test]
    fn p_opt_out_of_range() {
        let err = resolve("[radio]\np_opt = 1.5\n").unwrap_err();
        assert!(err.to_string().contains("radio.p_opt"), "{err}");
    }

    #[test]
    fn q_step_echo() {
        let c = resolve("[protocol]\nk_opt = 6\n").unwrap();
        assert_eq!(c.q_step(), 16);
        assert!(c.echo().contains("q_step = 16"));
    }

    #[test]
    fn unknown_keys_are_named() {
        let err = parse_config("[radio]\ne_amp = 1.0\n").unwrap_err();
        assert!(err.to_string().contains("e_amp"), "{err}");
        assert!(parse_config("[simulation]\n").is_err());
    }

    #[test]
    fn bad_values_are_named() {
        for (text, key) in [
            ("[protocol]\nk_opt = 100\n", "protocol.k_opt"),
            ("[protocol]\nk_opt = 0\n", "protocol.k_opt"),
            ("[protocol]\nprotocols = [\"leach-c\"]\n", "protocol.protocols"),
            ("[protocol]\nprotocols = []\n", "protocol.protocols"),
            ("[field]\nsplit_axis = \"diagonal\"\n", "field.split_axis"),
            ("[field]\nbs_x = -1.0\n", "field.bs_x"),
            ("[radio]\ne_da = 0.0\n", "radio.e_da"),
            ("[experiment]\nseeds = []\n", "experiment.seeds"),
            ("[experiment]\nseeds = [1, 1]\n", "experiment.seeds"),
            ("[experiment]\nseeds = [1]\nseed_count = 3\n", "experiment.seeds"),
            ("[experiment]\nmax_rounds = 0\n", "experiment.max_rounds"),
        ] {
            let err = resolve(text).unwrap_err();
            assert!(err.to_string().contains(key), "{text}: {err}");
        }
    }

    #[test]
    fn echo_round_trips() {
        let c = resolve("[field]\nsplit_axis = \"horizontal\"\n[experiment]\nseeds = [4, 9]\n").unwrap();
        let text = c.echo();
        let mut file: toml::Table = toml::from_str(&text).unwrap();
        file.remove("derived");
        let back =
            ExperimentConfig::resolve(toml::Value::Table(file).try_into().unwrap(), &Overrides::default()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn overrides_win() {
        let overrides = Overrides {
            seed_count: Some(3),
            protocols: Some(vec![StrategyKind::Udlpch]),
            max_rounds: Some(50),
            ..Overrides::default()
        };
        let c = ExperimentConfig::resolve(parse_config("[experiment]\nseeds = [7]\n").unwrap(), &overrides).unwrap();
        assert_eq!(c.seeds, vec![1, 2, 3]);
        assert_eq!(c.protocols, vec![StrategyKind::Udlpch]);
        assert_eq!(c.sim.max_rounds, 50);
    }
}
