//! Run configuration: line-based `key = value` files.
//!
//! `#` starts a comment, blank lines are skipped, unknown keys are errors,
//! and repeated keys take the last value. `input_files` is a comma-separated
//! list; relative paths are resolved against the config file's directory.
//!
//! Defaults follow the standard analysis setup: `gamma = 1.0`, histogram
//! range `[0, 1]` in steps of `0.02`, corrections zero. Thresholds and
//! `input_files` have no sensible defaults and are required. Simulation
//! keys (`n_bins`, `burst_rate`, ...) are optional here and validated by
//! the simulate command.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::CorrectionParams;
use crate::simulate::SimParams;

/// Excitation scheme of the input data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Fret,
    Alex,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Fret => "fret",
            Mode::Alex => "alex",
        }
    }
}

/// Event-selection rule applied after background subtraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdMode {
    And,
    Or,
    /// Summed-channel threshold; uses `t_donor + t_acceptor` as the bound.
    Sum,
    /// ALEX selection; `t_donor` acts as the donor-excitation sum bound and
    /// `t_acceptor` as the acceptor-excitation bound.
    Alex,
}

impl ThresholdMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ThresholdMode::And => "and",
            ThresholdMode::Or => "or",
            ThresholdMode::Sum => "sum",
            ThresholdMode::Alex => "alex",
        }
    }
}

/// Parsed and validated analysis settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub threshold_mode: ThresholdMode,
    pub auto_donor: f64,
    pub auto_acceptor: f64,
    pub cross_d_to_a: f64,
    pub cross_a_to_d: f64,
    pub gamma: f64,
    pub bin_min: f64,
    pub bin_max: f64,
    pub bin_width: f64,
    pub t_donor: f64,
    pub t_acceptor: f64,
    pub input_files: Vec<String>,
    pub output_dir: PathBuf,
    pub seed: Option<u64>,
    // simulation-only keys, absent unless configured
    pub n_bins: Option<usize>,
    pub burst_rate: Option<f64>,
    pub burst_intensity_mean: Option<f64>,
    pub true_e: Option<f64>,
    pub background_d: Option<f64>,
    pub background_a: Option<f64>,
    pub acceptor_brightness: Option<f64>,
    /// Path of the file this config was parsed from.
    pub config_path: PathBuf,
}

impl RunConfig {
    /// Directory that relative `input_files` and `output_dir` entries are
    /// resolved against.
    pub fn config_dir(&self) -> PathBuf {
        self.config_path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn resolved_output_dir(&self) -> PathBuf {
        if self.output_dir.is_absolute() {
            self.output_dir.clone()
        } else {
            self.config_dir().join(&self.output_dir)
        }
    }

    pub fn correction_params(&self) -> CorrectionParams {
        CorrectionParams {
            auto_donor: self.auto_donor,
            auto_acceptor: self.auto_acceptor,
            cross_d_to_a: self.cross_d_to_a,
            cross_a_to_d: self.cross_a_to_d,
            gamma: self.gamma,
            t_donor: self.t_donor,
            t_acceptor: self.t_acceptor,
        }
    }

    fn require_sim<T: Copy>(&self, value: Option<T>, key: &'static str) -> Result<T> {
        value.ok_or_else(|| Error::MissingRequiredKey {
            file: self.config_path.clone(),
            key,
        })
    }

    /// Assembles simulator parameters; every simulation key plus `seed`
    /// must be present (`seed_override` takes precedence when given).
    pub fn sim_params(&self, seed_override: Option<u64>) -> Result<SimParams> {
        Ok(SimParams {
            n_bins: self.require_sim(self.n_bins, "n_bins")?,
            burst_rate: self.require_sim(self.burst_rate, "burst_rate")?,
            burst_intensity_mean: self
                .require_sim(self.burst_intensity_mean, "burst_intensity_mean")?,
            true_e: self.require_sim(self.true_e, "true_E")?,
            background_d: self.background_d.unwrap_or(0.0),
            background_a: self.background_a.unwrap_or(0.0),
            cross_d_to_a: self.cross_d_to_a,
            cross_a_to_d: self.cross_a_to_d,
            gamma: self.gamma,
            seed: seed_override
                .or(self.seed)
                .ok_or_else(|| Error::MissingRequiredKey {
                    file: self.config_path.clone(),
                    key: "seed",
                })?,
        })
    }
}

struct RawEntry {
    line: usize,
    value: String,
}

const KNOWN_KEYS: &[&str] = &[
    "mode",
    "threshold_mode",
    "auto_donor",
    "auto_acceptor",
    "cross_DtoA",
    "cross_AtoD",
    "gamma",
    "bin_min",
    "bin_max",
    "bin_width",
    "t_donor",
    "t_acceptor",
    "input_files",
    "output_dir",
    "seed",
    "n_bins",
    "burst_rate",
    "burst_intensity_mean",
    "true_E",
    "background_d",
    "background_a",
    "acceptor_brightness",
];

fn bad_value(path: &Path, entry: &RawEntry, key: &str, reason: impl Into<String>) -> Error {
    Error::ValueOutOfDomain {
        file: path.to_path_buf(),
        line: entry.line,
        key: key.to_string(),
        value: entry.value.clone(),
        reason: reason.into(),
    }
}

fn parse_number(
    path: &Path,
    entries: &BTreeMap<String, RawEntry>,
    key: &str,
) -> Result<Option<f64>> {
    match entries.get(key) {
        None => Ok(None),
        Some(entry) => entry
            .value
            .parse::<f64>()
            .map_err(|_| bad_value(path, entry, key, "not a number"))
            .and_then(|v| {
                if v.is_finite() {
                    Ok(Some(v))
                } else {
                    Err(bad_value(path, entry, key, "not finite"))
                }
            }),
    }
}

fn check_range(
    path: &Path,
    entries: &BTreeMap<String, RawEntry>,
    key: &str,
    value: f64,
    ok: bool,
    bound: &str,
) -> Result<f64> {
    if ok {
        return Ok(value);
    }
    // defaulted values never fail their own bounds, so the entry exists
    let entry = entries.get(key).expect("explicit key");
    Err(bad_value(path, entry, key, format!("must be {bound}")))
}

/// Parses a config file; see the module docs for the format.
pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::FileNotFound(path.to_path_buf())
        } else {
            Error::ReadFailed {
                path: path.to_path_buf(),
                source,
            }
        }
    })?;

    let mut entries: BTreeMap<String, RawEntry> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::MalformedRow {
                file: path.to_path_buf(),
                line,
                reason: "expected `key = value`".into(),
            });
        };
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::UnknownKey {
                file: path.to_path_buf(),
                line,
                key: key.to_string(),
            });
        }
        entries.insert(
            key.to_string(),
            RawEntry {
                line,
                value: value.trim().to_string(),
            },
        );
    }

    let missing = |key: &'static str| Error::MissingRequiredKey {
        file: path.to_path_buf(),
        key,
    };

    let mode = match entries.get("mode") {
        None => Mode::Fret,
        Some(e) => match e.value.as_str() {
            "fret" => Mode::Fret,
            "alex" => Mode::Alex,
            _ => return Err(bad_value(path, e, "mode", "one of: fret, alex")),
        },
    };
    let threshold_mode = match entries.get("threshold_mode") {
        None => match mode {
            Mode::Fret => ThresholdMode::And,
            Mode::Alex => ThresholdMode::Alex,
        },
        Some(e) => match e.value.as_str() {
            "and" => ThresholdMode::And,
            "or" => ThresholdMode::Or,
            "sum" => ThresholdMode::Sum,
            "alex" => ThresholdMode::Alex,
            _ => {
                return Err(bad_value(
                    path,
                    e,
                    "threshold_mode",
                    "one of: and, or, sum, alex",
                ))
            }
        },
    };
    match (mode, threshold_mode) {
        (Mode::Fret, ThresholdMode::Alex) => {
            let e = entries.get("threshold_mode").expect("explicit key");
            return Err(bad_value(
                path,
                e,
                "threshold_mode",
                "alex selection requires mode = alex",
            ));
        }
        (Mode::Alex, ThresholdMode::And | ThresholdMode::Or | ThresholdMode::Sum) => {
            let e = entries.get("threshold_mode").expect("explicit key");
            return Err(bad_value(
                path,
                e,
                "threshold_mode",
                "mode = alex uses threshold_mode = alex",
            ));
        }
        _ => {}
    }

    let num = |key: &str| parse_number(path, &entries, key);

    let auto_donor = num("auto_donor")?.unwrap_or(0.0);
    let auto_donor = check_range(
        path,
        &entries,
        "auto_donor",
        auto_donor,
        auto_donor >= 0.0,
        ">= 0",
    )?;
    let auto_acceptor = num("auto_acceptor")?.unwrap_or(0.0);
    let auto_acceptor = check_range(
        path,
        &entries,
        "auto_acceptor",
        auto_acceptor,
        auto_acceptor >= 0.0,
        ">= 0",
    )?;
    let cross_d_to_a = num("cross_DtoA")?.unwrap_or(0.0);
    let cross_d_to_a = check_range(
        path,
        &entries,
        "cross_DtoA",
        cross_d_to_a,
        (0.0..1.0).contains(&cross_d_to_a),
        "in [0, 1)",
    )?;
    let cross_a_to_d = num("cross_AtoD")?.unwrap_or(0.0);
    let cross_a_to_d = check_range(
        path,
        &entries,
        "cross_AtoD",
        cross_a_to_d,
        (0.0..1.0).contains(&cross_a_to_d),
        "in [0, 1)",
    )?;
    let gamma = num("gamma")?.unwrap_or(1.0);
    let gamma = check_range(path, &entries, "gamma", gamma, gamma > 0.0, "> 0")?;
    let bin_min = num("bin_min")?.unwrap_or(0.0);
    let bin_max = num("bin_max")?.unwrap_or(1.0);
    let bin_width = num("bin_width")?.unwrap_or(0.02);

    let t_donor = num("t_donor")?.ok_or_else(|| missing("t_donor"))?;
    let t_donor = check_range(path, &entries, "t_donor", t_donor, t_donor >= 0.0, ">= 0")?;
    let t_acceptor = num("t_acceptor")?.ok_or_else(|| missing("t_acceptor"))?;
    let t_acceptor = check_range(
        path,
        &entries,
        "t_acceptor",
        t_acceptor,
        t_acceptor >= 0.0,
        ">= 0",
    )?;

    // cross-key binning validation, mirroring histogram construction
    if bin_max <= bin_min || bin_width <= 0.0 || {
        let range = bin_max - bin_min;
        let n = (range / bin_width).round();
        n < 1.0 || (n * bin_width - range).abs() > 1e-9 * range
    } {
        let (key, entry) = ["bin_width", "bin_max", "bin_min"]
            .iter()
            .find_map(|k| entries.get(*k).map(|e| (*k, e)))
            .expect("at least one explicit binning key when defaults are consistent");
        return Err(bad_value(
            path,
            entry,
            key,
            format!("binning [{bin_min}, {bin_max}] / {bin_width} is not a whole number of bins"),
        ));
    }

    let input_files: Vec<String> = entries
        .get("input_files")
        .ok_or_else(|| missing("input_files"))?
        .value
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if input_files.is_empty() {
        return Err(missing("input_files"));
    }

    let output_dir = PathBuf::from(
        entries
            .get("output_dir")
            .map(|e| e.value.as_str())
            .unwrap_or("."),
    );

    let seed = match entries.get("seed") {
        None => None,
        Some(e) => Some(
            e.value
                .parse::<u64>()
                .map_err(|_| bad_value(path, e, "seed", "must be a non-negative integer"))?,
        ),
    };

    let n_bins = match entries.get("n_bins") {
        None => None,
        Some(e) => {
            let v = e
                .value
                .parse::<usize>()
                .map_err(|_| bad_value(path, e, "n_bins", "must be a positive integer"))?;
            if v == 0 {
                return Err(bad_value(path, e, "n_bins", "must be a positive integer"));
            }
            Some(v)
        }
    };
    let burst_rate = num("burst_rate")?;
    if let Some(v) = burst_rate {
        check_range(
            path,
            &entries,
            "burst_rate",
            v,
            (0.0..=1.0).contains(&v),
            "in [0, 1]",
        )?;
    }
    let burst_intensity_mean = num("burst_intensity_mean")?;
    if let Some(v) = burst_intensity_mean {
        check_range(path, &entries, "burst_intensity_mean", v, v >= 1.0, ">= 1")?;
    }
    let true_e = num("true_E")?;
    if let Some(v) = true_e {
        check_range(
            path,
            &entries,
            "true_E",
            v,
            (0.0..=1.0).contains(&v),
            "in [0, 1]",
        )?;
    }
    let background_d = num("background_d")?;
    if let Some(v) = background_d {
        check_range(path, &entries, "background_d", v, v >= 0.0, ">= 0")?;
    }
    let background_a = num("background_a")?;
    if let Some(v) = background_a {
        check_range(path, &entries, "background_a", v, v >= 0.0, ">= 0")?;
    }
    let acceptor_brightness = num("acceptor_brightness")?;
    if let Some(v) = acceptor_brightness {
        check_range(path, &entries, "acceptor_brightness", v, v >= 0.0, ">= 0")?;
    }

    Ok(RunConfig {
        mode,
        threshold_mode,
        auto_donor,
        auto_acceptor,
        cross_d_to_a,
        cross_a_to_d,
        gamma,
        bin_min,
        bin_max,
        bin_width,
        t_donor,
        t_acceptor,
        input_files,
        output_dir,
        seed,
        n_bins,
        burst_rate,
        burst_intensity_mean,
        true_e,
        background_d,
        background_a,
        acceptor_brightness,
        config_path: path.to_path_buf(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_text(body: &str) -> Result<RunConfig> {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, body).unwrap();
        parse_config(&path)
    }

    #[test]
    fn minimal_config_takes_documented_defaults() {
        let cfg = parse_text("gamma = 1.0\nt_donor = 15\nt_acceptor = 15\ninput_files = a.csv\n")
            .unwrap();
        assert_eq!(cfg.mode, Mode::Fret);
        assert_eq!(cfg.threshold_mode, ThresholdMode::And);
        assert_eq!(cfg.gamma, 1.0);
        assert_eq!(cfg.bin_min, 0.0);
        assert_eq!(cfg.bin_max, 1.0);
        assert_eq!(cfg.bin_width, 0.02);
        assert_eq!(cfg.auto_donor, 0.0);
        assert_eq!(cfg.cross_d_to_a, 0.0);
        assert_eq!(cfg.input_files, vec!["a.csv"]);
        assert_eq!(cfg.t_donor, 15.0);
    }

    #[test]
    fn missing_threshold_is_required_key_error() {
        let err = parse_text("t_acceptor = 15\ninput_files = a.csv\n").unwrap_err();
        assert!(matches!(
            err,
            Error::MissingRequiredKey { key: "t_donor", .. }
        ));
    }

    #[test]
    fn missing_input_files_is_required_key_error() {
        let err = parse_text("t_donor = 15\nt_acceptor = 15\n").unwrap_err();
        assert!(matches!(
            err,
            Error::MissingRequiredKey {
                key: "input_files",
                ..
            }
        ));
    }

    #[test]
    fn crosstalk_fraction_out_of_domain() {
        let err =
            parse_text("t_donor = 15\nt_acceptor = 15\ninput_files = a.csv\ncross_DtoA = 1.5\n")
                .unwrap_err();
        match err {
            Error::ValueOutOfDomain { key, line, .. } => {
                assert_eq!(key, "cross_DtoA");
                assert_eq!(line, 4);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unknown_key_is_rejected_with_line() {
        let err = parse_text("t_donor = 15\nt_acceptor = 15\ninput_files = a.csv\nbogus = 1\n")
            .unwrap_err();
        match err {
            Error::UnknownKey { key, line, .. } => {
                assert_eq!(key, "bogus");
                assert_eq!(line, 4);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let cfg = parse_text(
            "# analysis setup\n\nt_donor = 15  # donor threshold\nt_acceptor = 15\ninput_files = a.csv, b.csv\n",
        )
        .unwrap();
        assert_eq!(cfg.input_files, vec!["a.csv", "b.csv"]);
    }

    #[test]
    fn alex_mode_defaults_to_alex_selection() {
        let cfg = parse_text("mode = alex\nt_donor = 30\nt_acceptor = 15\ninput_files = a.csv\n")
            .unwrap();
        assert_eq!(cfg.threshold_mode, ThresholdMode::Alex);
    }

    #[test]
    fn incompatible_mode_and_selection_rejected() {
        let err = parse_text(
            "mode = fret\nthreshold_mode = alex\nt_donor = 15\nt_acceptor = 15\ninput_files = a.csv\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::ValueOutOfDomain { .. }));
    }

    #[test]
    fn bad_binning_rejected_at_parse_time() {
        let err =
            parse_text("t_donor = 15\nt_acceptor = 15\ninput_files = a.csv\nbin_width = 0.03\n")
                .unwrap_err();
        assert!(matches!(err, Error::ValueOutOfDomain { .. }));
    }

    #[test]
    fn sim_params_require_all_sim_keys() {
        let cfg = parse_text(
            "t_donor = 15\nt_acceptor = 15\ninput_files = a.csv\nn_bins = 1000\nseed = 7\n",
        )
        .unwrap();
        assert!(matches!(
            cfg.sim_params(None).unwrap_err(),
            Error::MissingRequiredKey {
                key: "burst_rate",
                ..
            }
        ));
    }

    #[test]
    fn sim_params_assemble_and_override_seed() {
        let cfg = parse_text(
            "t_donor = 15\nt_acceptor = 15\ninput_files = trace.csv\n\
             n_bins = 1000\nburst_rate = 0.05\nburst_intensity_mean = 60\ntrue_E = 0.75\n\
             background_d = 0.3\nbackground_a = 0.2\ncross_DtoA = 0.05\ncross_AtoD = 0.01\nseed = 7\n",
        )
        .unwrap();
        let p = cfg.sim_params(None).unwrap();
        assert_eq!(p.seed, 7);
        assert_eq!(p.n_bins, 1000);
        assert_eq!(p.true_e, 0.75);
        assert_eq!(p.cross_d_to_a, 0.05);
        let p2 = cfg.sim_params(Some(99)).unwrap();
        assert_eq!(p2.seed, 99);
    }

    #[test]
    fn last_value_wins_for_repeated_keys() {
        let cfg = parse_text("t_donor = 15\nt_donor = 20\nt_acceptor = 15\ninput_files = a.csv\n")
            .unwrap();
        assert_eq!(cfg.t_donor, 20.0);
    }
}
