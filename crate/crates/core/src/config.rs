//! The JSON configuration shared by every subcommand.
//!
//! ```json
//! {
//!   "n": 4000,
//!   "lambda": 10,
//!   "model": "generic_ier",
//!   "kernel": {"variant": "finite_rank", "profiles": [{"type": "saturating"}, {"type": "linear", "slope": 1}]},
//!   "weights": {"law": "uniform01"},
//!   "seed": 7
//! }
//! ```
//!
//! Unknown keys are rejected. Relative CSV paths resolve against the
//! directory of the config file.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ensembles::{EnsembleConfig, ScaleMode, Sparsity, Variant};
use crate::error::{Error, Result};
use crate::kernels::{Kernel, Profile, Table, WeightModel, UNIFORM_NODES};
use crate::spectra::Binning;
use crate::stieltjes::SolverConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    Constant { value: f64 },
    Linear { slope: f64 },
    Saturating {},
    Power { exponent: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    Constant {
        #[serde(default = "one")]
        value: f64,
    },
    Rank1 {
        profile: ProfileSpec,
    },
    FiniteRank {
        profiles: Vec<ProfileSpec>,
    },
    ChungLu {},
    Grg {},
    NorrosRiettu {},
    /// CSV with header `x,y,value`.
    Tabulated {
        csv: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    Dirac {
        at: f64,
    },
    Discrete {
        atoms: Vec<f64>,
        probs: Vec<f64>,
    },
    Uniform01 {
        #[serde(default = "uniform_nodes")]
        nodes: usize,
    },
    /// Inline `values`, or a one-column CSV (header `w`).
    Empirical {
        #[serde(default)]
        values: Option<Vec<f64>>,
        #[serde(default)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    #[default]
    GenericIer,
    Homogeneous,
    ChungLu,
    Grg,
    NorrosRiettu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ScaleName {
    #[default]
    Sparse,
    Dense,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum HistogramSpec {
    FreedmanDiaconis,
    Bins(usize),
    Width(f64),
}

impl Default for HistogramSpec {
    fn default() -> Self {
        HistogramSpec::FreedmanDiaconis
    }
}

/// Overrides of the fixed-point discretisation; unset fields keep the
/// defaults of [`SolverConfig::new`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(default)]
    pub v_max: Option<f64>,
    #[serde(default)]
    pub panels: Option<usize>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub model: ModelName,
    #[serde(default = "default_kernel")]
    pub kernel: KernelSpec,
    #[serde(default = "default_weights")]
    pub weights: WeightSpec,
    /// Degree sequence for the degree models; drawn uniformly from
    /// `{1, ..., 5}` when absent.
    #[serde(default)]
    pub degrees: Option<Vec<f64>>,
    #[serde(default)]
    pub zero_diagonal: bool,
    #[serde(default)]
    pub scale: ScaleName,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub histogram: HistogramSpec,
}

fn one() -> f64 {
    1.0
}

fn uniform_nodes() -> usize {
    UNIFORM_NODES
}

fn default_kernel() -> KernelSpec {
    KernelSpec::Constant { value: 1.0 }
}

fn default_weights() -> WeightSpec {
    WeightSpec::Dirac { at: 1.0 }
}

impl Default for Config {
    fn default() -> Self {
        serde_json::from_str("{}").expect("empty config parses")
    }
}

/// A parsed config with the directory its relative paths resolve against.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: Config,
    pub base: PathBuf,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<LoadedConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read config {}: {e}", path.display())))?;
        let config = Self::from_json(&text)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(LoadedConfig { config, base })
    }

    /// First 16 hex digits of the SHA-256 of the normalised JSON.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serialises");
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }
}

impl LoadedConfig {
    pub fn from_config(config: Config) -> Self {
        LoadedConfig { config, base: PathBuf::new() }
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    pub fn kernel(&self) -> Result<Kernel> {
        Ok(match &self.config.kernel {
            KernelSpec::Constant { value } => Kernel::Constant(*value),
            KernelSpec::Rank1 { profile } => Kernel::Rank1(profile_of(profile)?),
            KernelSpec::FiniteRank { profiles } => {
                if profiles.is_empty() {
                    return Err(Error::config("finite_rank needs at least one profile"));
                }
                Kernel::FiniteRank(profiles.iter().map(profile_of).collect::<Result<_>>()?)
            }
            KernelSpec::ChungLu {} => Kernel::ChungLu,
            KernelSpec::Grg {} => Kernel::Grg,
            KernelSpec::NorrosRiettu {} => Kernel::NorrosRiettu,
            KernelSpec::Tabulated { csv } => Kernel::Tabulated(read_table(&self.resolve(csv))?),
        })
    }

    pub fn weights(&self) -> Result<WeightModel> {
        match &self.config.weights {
            WeightSpec::Dirac { at } => WeightModel::dirac(*at),
            WeightSpec::Discrete { atoms, probs } => WeightModel::discrete(atoms.clone(), probs.clone()),
            WeightSpec::Uniform01 { nodes } => {
                if *nodes < 2 {
                    return Err(Error::config("uniform01 needs at least two nodes"));
                }
                Ok(WeightModel::Uniform01 { nodes: *nodes })
            }
            WeightSpec::Empirical { values, csv } => match (values, csv) {
                (Some(v), None) => WeightModel::empirical(v.clone()),
                (None, Some(p)) => WeightModel::empirical(read_column(&self.resolve(p))?),
                _ => Err(Error::config("empirical weights need exactly one of `values` and `csv`")),
            },
        }
    }

    pub fn lambda(&self) -> Result<f64> {
        match self.config.lambda {
            Some(l) if l > 0.0 => Ok(l),
            Some(l) => Err(Error::config(format!("lambda must be positive, got {l}"))),
            None => Err(Error::config("config has no `lambda`")),
        }
    }

    /// The sampling recipe, with `seed` overriding the config seed when given.
    pub fn ensemble(&self, seed: Option<u64>) -> Result<EnsembleConfig> {
        let c = &self.config;
        let n = c.n.ok_or_else(|| Error::config("config has no `n`"))?;
        let degrees = c.degrees.clone();
        let variant = match c.model {
            ModelName::GenericIer => Variant::GenericIer,
            ModelName::Homogeneous => Variant::Homogeneous,
            ModelName::ChungLu => Variant::ChungLu { degrees },
            ModelName::Grg => Variant::Grg { degrees },
            ModelName::NorrosRiettu => Variant::NorrosRiettu { degrees },
        };
        let degree_model = matches!(c.model, ModelName::ChungLu | ModelName::Grg | ModelName::NorrosRiettu);
        let sparsity = match (c.lambda, c.epsilon) {
            (Some(_), Some(_)) => return Err(Error::config("give `lambda` or `epsilon`, not both")),
            (Some(l), None) => Sparsity::Lambda(l),
            (None, Some(e)) => Sparsity::Epsilon(e),
            (None, None) if degree_model => Sparsity::Lambda(1.0),
            (None, None) => return Err(Error::config("config needs `lambda` or `epsilon`")),
        };
        Ok(EnsembleConfig {
            n,
            sparsity,
            kernel: self.kernel()?,
            weights: self.weights()?,
            variant,
            seed: seed.unwrap_or(c.seed),
            replicate: 0,
            zero_diagonal: c.zero_diagonal,
            scale_mode: match c.scale {
                ScaleName::Sparse => ScaleMode::Sparse,
                ScaleName::Dense => ScaleMode::Dense,
            },
        })
    }

    pub fn solver(&self, z: Complex64, lambda: f64) -> SolverConfig {
        let mut s = SolverConfig::new(z, lambda);
        let o = &self.config.solver;
        if let Some(v) = o.v_max {
            s.v_max = v;
        }
        if let Some(p) = o.panels {
            s.panels = p;
        }
        if let Some(t) = o.tol {
            s.tol = t;
        }
        if let Some(m) = o.max_iter {
            s.max_iter = m;
        }
        s
    }

    pub fn binning(&self) -> Binning {
        match self.config.histogram {
            HistogramSpec::FreedmanDiaconis => Binning::FreedmanDiaconis,
            HistogramSpec::Bins(b) => Binning::Bins(b),
            HistogramSpec::Width(w) => Binning::Width(w),
        }
    }
}

fn profile_of(p: &ProfileSpec) -> Result<Profile> {
    Ok(match p {
        ProfileSpec::Constant { value } => Profile::Constant(*value),
        ProfileSpec::Linear { slope } => Profile::Linear(*slope),
        ProfileSpec::Saturating {} => Profile::Saturating,
        ProfileSpec::Power { exponent } => {
            if !(*exponent > 0.0) {
                return Err(Error::config(format!("power exponent must be positive, got {exponent}")));
            }
            Profile::Power(*exponent)
        }
    })
}

fn csv_reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::Reader::from_path(path).map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))
}

/// Reads `x,y,value` rows.
pub fn read_table(path: &Path) -> Result<Table> {
    #[derive(Deserialize)]
    struct Row {
        x: f64,
        y: f64,
        value: f64,
    }
    let mut rows = Vec::new();
    for r in csv_reader(path)?.deserialize::<Row>() {
        let r = r.map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
        rows.push((r.x, r.y, r.value));
    }
    Table::from_triples(&rows)
}

fn read_column(path: &Path) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for r in csv_reader(path)?.records() {
        let r = r.map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
        let v = r.get(0).ok_or_else(|| Error::config(format!("{}: empty row", path.display())))?;
        out.push(v.trim().parse().map_err(|e| Error::config(format!("{}: {e}", path.display())))?);
    }
    Ok(out)
}

/// Parses `"a+bi"`, `"a-bi"`, `"bi"` or `"a"`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::config(format!("cannot parse complex number {s:?}"));
    if let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) {
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(k, c)| (c == '+' || c == '-') && !matches!(body.as_bytes()[k - 1], b'e' | b'E'))
            .map(|(k, _)| k)
            .last();
        let (re, im) = match split {
            Some(k) => (body[..k].parse::<f64>().map_err(|_| bad())?, &body[k..]),
            None => (0.0, body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            x => x.parse::<f64>().map_err(|_| bad())?,
        };
        Ok(Complex64::new(re, im))
    } else {
        Ok(Complex64::new(t.parse::<f64>().map_err(|_| bad())?, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects_unknown_keys() {
        let c = Config::from_json(
            r#"{"n": 100, "lambda": 5, "kernel": {"variant": "rank1", "profile": {"type": "linear", "slope": 2}},
                "weights": {"law": "discrete", "atoms": [0.5, 1], "probs": [0.5, 0.5]}, "seed": 3}"#,
        )
        .unwrap();
        let l = LoadedConfig::from_config(c.clone());
        let e = l.ensemble(None).unwrap();
        assert_eq!(e.n, 100);
        assert_eq!(e.seed, 3);
        assert!((e.kernel.eval(0.5, 1.0) - 2.0).abs() < 1e-15);
        assert!(Config::from_json(r#"{"n": 100, "lamda": 5}"#).is_err());
        assert!(Config::from_json(r#"{"kernel": {"variant": "grg", "extra": 1}}"#).is_err());
        assert!(Config::from_json(r#"{"weights": {"law": "dirac", "at": 1, "x": 2}}"#).is_err());
        assert!(Config::from_json(r#"{"kernel": {"variant": "rank1", "profile": {"type": "saturating", "a": 1}}}"#).is_err());
        assert!(Config::from_json(r#"{"kernel": {"variant": "grg"}}"#).is_ok());
        let both = LoadedConfig::from_config(Config::from_json(r#"{"n": 10, "lambda": 1, "epsilon": 0.1}"#).unwrap());
        assert!(matches!(both.ensemble(None), Err(Error::Config(_))));
        assert_eq!(Config::default().kernel, KernelSpec::Constant { value: 1.0 });
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = Config::from_json(r#"{"n": 100, "lambda": 5}"#).unwrap();
        let b = Config::from_json(r#"{ "lambda": 5.0, "n": 100 }"#).unwrap();
        let c = Config::from_json(r#"{"n": 101, "lambda": 5}"#).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 16);
        assert_eq!(Config::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("0+2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("1-3.5i").unwrap(), Complex64::new(1.0, -3.5));
        assert_eq!(parse_complex("2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+1e2i").unwrap(), Complex64::new(1e-3, 100.0));
        assert_eq!(parse_complex("4").unwrap(), Complex64::new(4.0, 0.0));
        assert!(parse_complex("abc").is_err());
    }
}
