//! Run configuration: field parameters, size limits, thresholds files and
//! experiment definitions.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use qplane_core::verify::{Calibration, Check, Thresholds};
use qplane_core::{FieldCtx, Limits, SetSpec};

use crate::error::{CliError, CliResult};

pub const LIMITS_ENV: &str = "QPLANE_LIMITS";

/// Defaults, then `QPLANE_LIMITS`, then the `--limits` flag.
pub fn resolve_limits(flag: Option<&str>) -> CliResult<Limits> {
    let mut limits = Limits::default();
    if let Ok(env) = std::env::var(LIMITS_ENV) {
        limits = limits
            .parse_overrides(&env)
            .map_err(|e| CliError::usage(format!("{LIMITS_ENV}: {e}")))?;
    }
    if let Some(text) = flag {
        limits = limits
            .parse_overrides(text)
            .map_err(|e| CliError::usage(format!("--limits: {e}")))?;
    }
    Ok(limits)
}

/// Parses `--modulus` as comma-separated coefficients, constant term first.
pub fn parse_modulus(text: &str) -> CliResult<Vec<u32>> {
    text.split(',')
        .map(|c| {
            c.trim()
                .parse::<u32>()
                .map_err(|_| CliError::usage(format!("bad modulus coefficient `{c}`")))
        })
        .collect()
}

pub fn build_field(p: u32, k: u32, modulus: Option<&[u32]>, limits: &Limits) -> CliResult<FieldCtx> {
    FieldCtx::create(p, k, modulus, limits).map_err(|e| match e {
        qplane_core::Error::LimitExceeded { .. } => CliError::Core(e),
        other => CliError::usage(other.to_string()),
    })
}

pub fn parse_set(text: &str) -> CliResult<SetSpec> {
    text.parse::<SetSpec>()
        .map_err(|e| CliError::usage(e.to_string()))
}

pub fn load_thresholds(path: &Path) -> CliResult<Thresholds> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::usage(format!("thresholds file {}: {e}", path.display()))
    })?;
    toml::from_str(&text)
        .map_err(|e| CliError::usage(format!("thresholds file {}: {e}", path.display())))
}

/// Renders a thresholds file with the sweep's provenance as comments.
pub fn render_thresholds(cal: &Calibration) -> CliResult<String> {
    let mut out = String::new();
    out.push_str("# Implied-constant thresholds: 1.25 x the maximum observed over the\n");
    out.push_str("# calibration corpus. Regenerate with `qplane calibrate`.\n#\n");
    out.push_str("# corpus:\n");
    for (q, n) in &cal.sets_per_q {
        let how = match q {
            3 => "all nonempty subsets",
            5 => "all subsets with 1 to 3 points",
            _ => "random sets, size uniform in [1, q^2]",
        };
        out.push_str(&format!("#   q = {q}: {n} sets ({how})\n"));
    }
    out.push_str(&format!("# seed: {}\n#\n# maxima:\n", cal.seed));
    for (name, w) in &cal.witnesses {
        out.push_str(&format!(
            "#   {name} = {} (q = {}, |E| = {})\n",
            w.value, w.q, w.set_size
        ));
    }
    out.push('\n');
    out.push_str(
        &toml::to_string(&cal.thresholds)
            .map_err(|e| CliError::Failed(format!("toml: {e}")))?,
    );
    Ok(out)
}

/// Sizes as an explicit list or an inclusive range.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum SizeGrid {
    List(Vec<usize>),
    Range {
        start: usize,
        end: usize,
        #[serde(default = "one")]
        step: usize,
    },
}

fn one() -> usize {
    1
}

impl SizeGrid {
    pub fn sizes(&self) -> CliResult<Vec<usize>> {
        match *self {
            SizeGrid::List(ref v) => Ok(v.clone()),
            SizeGrid::Range { start, end, step } => {
                if step == 0 {
                    return Err(CliError::usage("size range step must be positive"));
                }
                Ok((start..=end).step_by(step).collect())
            }
        }
    }
}

impl Default for SizeGrid {
    fn default() -> Self {
        SizeGrid::List(Vec::new())
    }
}

/// An experiment file.
///
/// ```toml
/// p = 7
/// k = 1
/// checks = ["direction", "probe"]
/// sizes = { start = 10, end = 45 }
/// sets = ["grid"]          # optional fixed recipes, one run each
/// trials = 50
/// base_seed = 0
/// ```
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub p: u32,
    #[serde(default = "one_u32")]
    pub k: u32,
    #[serde(default)]
    pub modulus: Option<Vec<u32>>,
    pub checks: Vec<String>,
    #[serde(default)]
    pub sizes: SizeGrid,
    #[serde(default)]
    pub sets: Vec<String>,
    #[serde(default = "one_u64")]
    pub trials: u64,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub thresholds: Option<PathBuf>,
    #[serde(default)]
    pub limits: Option<String>,
}

fn one_u32() -> u32 {
    1
}

fn one_u64() -> u64 {
    1
}

/// What an experiment row computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentTask {
    Check(Check),
    Probe,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("experiment file {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::usage(format!("experiment file {}: {e}", path.display())))
    }

    pub fn tasks(&self) -> CliResult<Vec<ExperimentTask>> {
        let mut out = Vec::new();
        for c in &self.checks {
            if c == "probe" {
                out.push(ExperimentTask::Probe);
            } else {
                for check in Check::parse_list(c).map_err(|e| CliError::usage(e.to_string()))? {
                    out.push(ExperimentTask::Check(check));
                }
            }
        }
        if out.is_empty() {
            return Err(CliError::usage("experiment lists no checks"));
        }
        Ok(out)
    }

    pub fn fixed_sets(&self) -> CliResult<Vec<SetSpec>> {
        self.sets.iter().map(|s| parse_set(s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_parses_range_and_rejects_unknown_keys() {
        let cfg: ExperimentConfig = toml::from_str(
            "p = 7\nchecks = [\"direction\"]\nsizes = { start = 10, end = 45 }\ntrials = 50\n",
        )
        .unwrap();
        assert_eq!(cfg.sizes.sizes().unwrap().len(), 36);
        assert_eq!(cfg.k, 1);
        let bad = toml::from_str::<ExperimentConfig>("p = 7\nchecks = []\nbogus = 1\n");
        assert!(bad.is_err());
        let list: ExperimentConfig = toml::from_str("p = 3\nchecks = [\"probe\", \"scale\"]\nsizes = [1, 2]\n").unwrap();
        assert_eq!(list.sizes.sizes().unwrap(), [1, 2]);
        assert_eq!(list.tasks().unwrap().len(), 2);
    }

    #[test]
    fn modulus_and_limits() {
        assert_eq!(parse_modulus("1, 0,1").unwrap(), [1, 0, 1]);
        assert!(parse_modulus("1,x").is_err());
        let l = resolve_limits(Some("dim4_q=5")).unwrap();
        assert_eq!(l.dim4_q, 5);
        assert!(resolve_limits(Some("nope=1")).is_err());
    }

    #[test]
    fn thresholds_reject_unknown_keys() {
        let ok = "c_sph = 1.0\nc_dir = 1.0\nc_scale = 1.0\nc_n0 = 1.0\n";
        assert!(toml::from_str::<Thresholds>(ok).is_ok());
        assert!(toml::from_str::<Thresholds>(&format!("{ok}extra = 2.0\n")).is_err());
    }
}
