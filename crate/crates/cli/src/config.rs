use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sommerfeld::green::ComplexPoint2;
use sommerfeld::quadrature::Tolerance;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    Strip,
    HalfLine,
}

/// Angles used for the basis, monodromy and coordinate equations.
pub const FOUR_ANGLES: [f64; 4] = [PI / 7.0, PI / 3.0, 2.0 * PI / 3.0, 5.0 * PI / 6.0];

/// Settings shared by every subcommand. Values come from the defaults, then
/// the config file, then the flags.
#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub problem: Problem,
    pub k_re: f64,
    pub k_im: f64,
    /// Strip half-length.
    pub a: f64,
    /// Single incidence angle for `solve` and `field`.
    pub phi_in: f64,
    /// Incidence angles for the basis; four are needed for the matrices.
    pub angles: Vec<f64>,
    pub order: usize,
    /// `[Re x1, Im x1, Re x2, Im x2]`; defaults to a point off the real plane
    /// above the strip.
    pub anchor: Option<[f64; 4]>,
    pub tol: f64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: Problem::Strip,
            k_re: 2.0,
            k_im: 0.02,
            a: 1.0,
            phi_in: PI / 3.0,
            angles: FOUR_ANGLES.to_vec(),
            order: 64,
            anchor: None,
            tol: 1e-11,
            seed: 1,
        }
    }
}

/// Flags that override the configuration.
#[derive(Args, Clone, Debug, Default)]
pub struct ConfigArgs {
    /// TOML file with any of the keys below
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub problem: Option<Problem>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k_re: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k_im: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Incidence angle in radians, or a multiple of pi such as `pi/3`
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_angle)]
    pub phi_in: Option<f64>,
    /// Comma-separated incidence angles
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_angle)]
    pub angles: Option<Vec<f64>>,
    /// Number of Chebyshev modes in the strip solve
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Complex point A as `re1,im1,re2,im2`
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
    pub anchor: Option<Vec<f64>>,
    /// Relative quadrature tolerance
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for output files; stdout when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// Parses `1.2`, `pi`, `pi/3`, `2pi/3` or `5*pi/6`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let Some(pos) = t.find("pi") else {
        return Err(format!("`{s}` is neither a number nor a multiple of pi"));
    };
    let head = t[..pos].trim_end_matches('*');
    let tail = &t[pos + 2..];
    let num = match head {
        "" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| format!("bad factor in `{s}`"))?,
    };
    let den = match tail.strip_prefix('/') {
        None if tail.is_empty() => 1.0,
        Some(d) => d.parse::<f64>().map_err(|_| format!("bad divisor in `{s}`"))?,
        None => return Err(format!("unexpected `{tail}` in `{s}`")),
    };
    Ok(num * PI / den)
}

fn invalid(field: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("invalid `{field}`: {reason}"))
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
    }

    /// Defaults, then the file named by `--config`, then the flags.
    pub fn resolve(args: &ConfigArgs) -> Result<Self, CliError> {
        let mut c = match &args.config {
            Some(p) => Self::from_file(p)?,
            None => Self::default(),
        };
        if let Some(v) = args.problem {
            c.problem = v;
        }
        if let Some(v) = args.k_re {
            c.k_re = v;
        }
        if let Some(v) = args.k_im {
            c.k_im = v;
        }
        if let Some(v) = args.a {
            c.a = v;
        }
        if let Some(v) = args.phi_in {
            c.phi_in = v;
        }
        if let Some(v) = &args.angles {
            c.angles = v.clone();
        }
        if let Some(v) = args.order {
            c.order = v;
        }
        if let Some(v) = &args.anchor {
            let arr: [f64; 4] =
                v.as_slice().try_into().map_err(|_| invalid("anchor", format!("need 4 numbers, got {}", v.len())))?;
            c.anchor = Some(arr);
        }
        if let Some(v) = args.tol {
            c.tol = v;
        }
        if let Some(v) = args.seed {
            c.seed = v;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.k_re > 0.0 && self.k_re.is_finite()) {
            return Err(invalid("k_re", format!("must be positive, got {}", self.k_re)));
        }
        if !(self.k_im >= 0.0 && self.k_im.is_finite()) {
            return Err(invalid("k_im", format!("must be non-negative, got {}", self.k_im)));
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(invalid("a", format!("must be positive, got {}", self.a)));
        }
        if !self.phi_in.is_finite() {
            return Err(invalid("phi_in", "must be finite"));
        }
        if self.angles.is_empty() || self.angles.iter().any(|p| !p.is_finite()) {
            return Err(invalid("angles", "need at least one finite angle"));
        }
        if !(8..=1024).contains(&self.order) {
            return Err(invalid("order", format!("must lie in 8..=1024, got {}", self.order)));
        }
        if let Some(a) = self.anchor {
            if a.iter().any(|v| !v.is_finite()) {
                return Err(invalid("anchor", "must be finite"));
            }
        }
        if !(self.tol > 0.0 && self.tol <= 1e-3) {
            return Err(invalid("tol", format!("must lie in (0, 1e-3], got {}", self.tol)));
        }
        Ok(())
    }

    pub fn k(&self) -> Complex64 {
        Complex64::new(self.k_re, self.k_im)
    }

    pub fn anchor_point(&self) -> ComplexPoint2 {
        match self.anchor {
            Some([a, b, c, d]) => ComplexPoint2::new(Complex64::new(a, b), Complex64::new(c, d)),
            None => ComplexPoint2::from_real_points([-0.2 * self.a, 0.6 * self.a], [0.2 * self.a, 0.6 * self.a]),
        }
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance { abs: self.tol, rel: self.tol, ..Tolerance::default() }
    }

    pub fn require_strip(&self, what: &str) -> Result<(), CliError> {
        if self.problem != Problem::Strip {
            return Err(invalid("problem", format!("`{what}` needs the strip")));
        }
        Ok(())
    }

    pub fn require_four_angles(&self, what: &str) -> Result<(), CliError> {
        if self.angles.len() != 4 {
            return Err(invalid("angles", format!("`{what}` needs exactly four, got {}", self.angles.len())));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles_in_multiples_of_pi() {
        assert_eq!(parse_angle("pi/3").unwrap(), PI / 3.0);
        assert_eq!(parse_angle("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("5*pi/6").unwrap(), 5.0 * PI / 6.0);
        assert_eq!(parse_angle("-pi").unwrap(), -PI);
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert!(parse_angle("pi*2").is_err());
        assert!(parse_angle("x").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("sommerfeld-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "problem = \"half-line\"\nk_re = 3.0\norder = 32\n").unwrap();
        let args = ConfigArgs { config: Some(path), k_re: Some(1.5), ..Default::default() };
        let c = RunConfig::resolve(&args).unwrap();
        assert_eq!(c.problem, Problem::HalfLine);
        assert_eq!((c.k_re, c.order), (1.5, 32));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn validation_names_the_field() {
        let c = RunConfig { order: 3, ..Default::default() };
        let e = c.validate().unwrap_err().to_string();
        assert!(e.contains("`order`"), "{e}");
        let c = RunConfig { k_im: -1.0, ..Default::default() };
        assert!(c.validate().unwrap_err().to_string().contains("`k_im`"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let e = toml::from_str::<RunConfig>("wavenumber = 2").unwrap_err().to_string();
        assert!(e.contains("wavenumber"), "{e}");
    }
}
