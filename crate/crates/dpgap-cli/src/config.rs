//! Run configuration: defaults per family, an optional JSON file, then command-line flags.

use crate::error::CliError;
use clap::{Args, ValueEnum};
use dpgap::family::{FamilyName, FamilyOptions};
use dpgap::table::{Method, RunSpec};
use dpgap::{BigFloat, Real};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Oracle,
    General,
    Painleve,
    All,
}

impl MethodArg {
    pub fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::Oracle => vec![Method::Oracle],
            MethodArg::General => vec![Method::General],
            MethodArg::Painleve => vec![Method::Painleve],
            MethodArg::All => Method::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by `compute` and `verify`.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Family key, see `list-families`.
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameter, repeatable. Values may be decimals or fractions `a/b`.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    /// Number of particles.
    #[arg(long)]
    pub k: Option<usize>,
    /// Last lattice index of the table.
    #[arg(long)]
    pub smax: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Working precision in bits.
    #[arg(long)]
    pub precision: Option<u32>,
    /// Agreement required between precisions and between methods.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output file; a gnuplot script is written next to CSV output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON file with the same fields; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Accept parameters for which the weight changes sign.
    #[arg(long)]
    pub allow_signed_weight: bool,
    /// Run once at the given precision instead of doubling it until results agree.
    #[arg(long)]
    pub no_adaptive: bool,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    family: Option<String>,
    #[serde(default)]
    params: BTreeMap<String, serde_json::Value>,
    k: Option<usize>,
    smax: Option<usize>,
    method: Option<MethodArg>,
    precision: Option<u32>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    allow_signed_weight: Option<bool>,
    adaptive: Option<bool>,
}

/// Resolved configuration; parameters already checked against the family's ranges.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: RunSpec,
    pub method: MethodArg,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// Parameters, `k` and `s_max` used when none are given; the figure settings where there is one.
pub fn defaults(name: FamilyName) -> (&'static [(&'static str, &'static str)], usize, usize) {
    use FamilyName::*;
    match name {
        Charlier => (&[("a", "20")], 6, 80),
        Meixner => (&[("beta", "3000"), ("c", "0.01")], 4, 80),
        Krawtchouk => (&[("p", "1/1.7"), ("N", "80")], 5, 80),
        QKrawtchouk => (&[("p", "0.7"), ("N", "80"), ("q", "0.98")], 5, 80),
        QCharlier | AlternativeQCharlier => (&[("a", "20"), ("q", "0.96")], 6, 150),
        LittleQLaguerre => (&[("a", "0.5"), ("q", "0.9")], 6, 120),
        LittleQJacobi => (&[("a", "0.5"), ("b", "0.5"), ("q", "0.9")], 6, 120),
        Hahn => (&[("alpha", "1"), ("beta", "1"), ("N", "30")], 3, 30),
        QHahn => (&[("alpha", "0.5"), ("beta", "0.5"), ("N", "20"), ("q", "0.8")], 3, 20),
        QMeixner => (&[("b", "0.5"), ("c", "1"), ("q", "0.8")], 3, 40),
        QuantumQKrawtchouk => (&[("p", "200"), ("N", "20"), ("q", "0.8")], 3, 20),
        AffineQKrawtchouk => (&[("p", "0.5"), ("N", "20"), ("q", "0.8")], 3, 20),
        AlSalamCarlitzII => (&[("a", "0.5"), ("q", "0.8")], 3, 40),
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))
}

fn json_scalar(key: &str, v: &serde_json::Value) -> Result<String, CliError> {
    match v {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        _ => Err(config_err(format!("parameter `{key}` must be a number or a string"))),
    }
}

fn set_param(params: &mut Vec<(String, String)>, key: &str, value: String) {
    match params.iter_mut().find(|(k, _)| k == key) {
        Some(slot) => slot.1 = value,
        None => params.push((key.to_string(), value)),
    }
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let key = self
            .family
            .clone()
            .or(file.family.clone())
            .ok_or_else(|| config_err("no family given (use --family)"))?;
        let family = match FamilyName::from_key(&key) {
            Some(f) => f,
            None => return Err(dpgap::Error::UnknownFamily(key).into()),
        };
        let (base, k0, s0) = defaults(family);

        let mut params: Vec<(String, String)> =
            base.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        for (k, v) in &file.params {
            set_param(&mut params, k, json_scalar(k, v)?);
        }
        for raw in &self.params {
            let (k, v) = raw
                .split_once('=')
                .ok_or_else(|| config_err(format!("--param expects KEY=VALUE, got `{raw}`")))?;
            set_param(&mut params, k.trim(), v.trim().to_string());
        }

        let mut spec = RunSpec::new(family, &[], self.k.or(file.k).unwrap_or(k0), self.smax.or(file.smax).unwrap_or(s0));
        spec.params = params;
        spec.options = FamilyOptions {
            allow_signed_weight: self.allow_signed_weight || file.allow_signed_weight.unwrap_or(false),
        };
        if let Some(p) = self.precision.or(file.precision) {
            if !(16..=1 << 20).contains(&p) {
                return Err(config_err(format!("precision {p} outside 16..=1048576 bits")));
            }
            spec.precision = p;
        }
        spec.max_precision = spec.max_precision.max(spec.precision);
        if let Some(t) = self.tol.or(file.tol) {
            if !(t.is_finite() && t > 0.0) {
                return Err(config_err(format!("tolerance {t} must be positive")));
            }
            spec.tol = t;
        }
        spec.adaptive = !self.no_adaptive && file.adaptive.unwrap_or(true);
        BigFloat::with_precision(spec.precision, || spec.build::<BigFloat>())?;

        Ok(RunConfig {
            spec,
            method: self.method.or(file.method).unwrap_or(MethodArg::All),
            out: self.out.clone().or(file.out),
            format: self.format.or(file.format).unwrap_or(Format::Csv),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(family: &str) -> RunArgs {
        RunArgs {
            family: Some(family.to_string()),
            ..RunArgs::default()
        }
    }

    #[test]
    fn every_family_has_valid_defaults() {
        for f in FamilyName::ALL {
            let cfg = args(f.key()).resolve().unwrap();
            let names: Vec<&str> = cfg.spec.params.iter().map(|(k, _)| k.as_str()).collect();
            let mut want = f.param_names().to_vec();
            want.sort_unstable();
            let mut got = names.clone();
            got.sort_unstable();
            assert_eq!(got, want, "{f}");
        }
    }

    #[test]
    fn flags_override_defaults() {
        let mut a = args("charlier");
        a.params = vec!["a=1/2".to_string()];
        a.k = Some(2);
        let cfg = a.resolve().unwrap();
        assert_eq!(cfg.spec.params, vec![("a".to_string(), "1/2".to_string())]);
        assert_eq!((cfg.spec.k, cfg.spec.s_max), (2, 80));
        assert_eq!(cfg.method, MethodArg::All);
    }

    #[test]
    fn finite_lattice_bounds_smax() {
        let mut a = args("krawtchouk");
        a.params = vec!["N=10".to_string()];
        assert!(matches!(a.resolve(), Err(CliError::Lib(dpgap::Error::InvalidParameter { .. }))));
        a.smax = Some(11);
        assert!(a.resolve().is_ok());
    }
}
