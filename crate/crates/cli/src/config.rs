//! Run configuration: a flat `key = value` file with dotted section keys.
//!
//! ```text
//! # 50 nm radius aluminium hole, atom on axis
//! geometry.radius_nm = 50
//! geometry.depth_nm = 100
//! atom.resonance_wavelength_nm = 532
//! atom.linewidth_rel = 1e-7
//! model.xibar = 2
//! scan.lambda_min_nm = 531.99
//! scan.lambda_max_nm = 532.01
//! scan.points = 501
//! output.path = spectrum.csv
//! ```
//!
//! | key | default | meaning |
//! |-----|---------|---------|
//! | `geometry.radius_nm` | required | hole radius R |
//! | `geometry.depth_nm` | required | film thickness H |
//! | `material.kind` | `pec` | `pec`, `drude` or `tabulated` |
//! | `material.plasma_frequency` | required for `drude` | ω_pl in rad/s |
//! | `material.table` | required for `tabulated` | CSV path, relative to the config file |
//! | `atom.kind` | `two_level` | `two_level` or `meta_atom` |
//! | `atom.resonance_wavelength_nm` | required | free-space resonance λ₀ |
//! | `atom.linewidth_rel` | required for `two_level` | Γ₀/ω₀ |
//! | `atom.radius_nm` | required for `meta_atom` | sphere radius R_A |
//! | `atom.x_nm`, `atom.y_nm` | 0 | transverse position |
//! | `atom.z_nm` | H/2 | depth below the entrance |
//! | `model.kind` | `fano_eq9` | `fano_eq9` or `pec_deep_eq10` |
//! | `model.xibar` | 2 | geometric coupling ξ̄ |
//! | `model.green_re`, `model.green_im` | 0 | reflected Green component (nm⁻³) |
//! | `model.convention` | `physical` | `physical` or `as_printed` |
//! | `scan.lambda_min_nm`, `scan.lambda_max_nm` | required | wavelength window |
//! | `scan.points` | required | grid size, at least 2 |
//! | `output.path` | `spectrum.csv` | CSV destination, relative to the working directory |
//! | `output.format` | `csv` | only `csv` |

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use zmw_core::transmission::LineshapeConvention;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum MaterialKind {
    Pec,
    Drude { plasma_frequency: f64 },
    Tabulated { table: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AtomKind {
    TwoLevel { linewidth_rel: f64 },
    MetaAtom { radius_nm: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    FanoEq9,
    PecDeepEq10,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub radius_nm: f64,
    pub depth_nm: f64,
    pub material: MaterialKind,
    pub atom: AtomKind,
    pub resonance_wavelength_nm: f64,
    pub x_nm: f64,
    pub y_nm: f64,
    /// `None` places the atom half-way down the hole.
    pub z_nm: Option<f64>,
    pub model: ModelKind,
    pub xibar: f64,
    pub green_re: f64,
    pub green_im: f64,
    pub convention: LineshapeConvention,
    pub lambda_min_nm: f64,
    pub lambda_max_nm: f64,
    pub points: usize,
    pub output: PathBuf,
    /// Line on which each key was set, for error messages.
    lines: HashMap<String, usize>,
}

const KEYS: &[&str] = &[
    "geometry.radius_nm",
    "geometry.depth_nm",
    "material.kind",
    "material.plasma_frequency",
    "material.table",
    "atom.kind",
    "atom.resonance_wavelength_nm",
    "atom.linewidth_rel",
    "atom.radius_nm",
    "atom.x_nm",
    "atom.y_nm",
    "atom.z_nm",
    "model.kind",
    "model.xibar",
    "model.green_re",
    "model.green_im",
    "model.convention",
    "scan.lambda_min_nm",
    "scan.lambda_max_nm",
    "scan.points",
    "output.path",
    "output.format",
];

struct Entries {
    values: HashMap<String, (usize, String)>,
}

impl Entries {
    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.values.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn number(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(Some)
                .ok_or_else(|| CliError::config(line, format!("{key}: '{v}' is not a finite number"))),
        }
    }

    fn required(&self, key: &str) -> Result<f64, CliError> {
        self.number(key)?.ok_or_else(|| CliError::missing(key))
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, &e))?;
        let base = path.parent().unwrap_or(Path::new(""));
        RunConfig::parse(&text, base)
    }

    /// Parse and validate. Relative table paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, CliError> {
        let mut values = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| CliError::config(line, format!("expected 'key = value', got '{content}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(CliError::config(line, format!("unknown key '{key}'")));
            }
            if value.is_empty() {
                return Err(CliError::config(line, format!("{key}: empty value")));
            }
            if let Some((first, _)) = values.insert(key.to_string(), (line, value.to_string())) {
                return Err(CliError::config(line, format!("{key} already set on line {first}")));
            }
        }
        let e = Entries { values };

        let material = match e.raw("material.kind") {
            None | Some((_, "pec")) => MaterialKind::Pec,
            Some((_, "drude")) => MaterialKind::Drude {
                plasma_frequency: e.required("material.plasma_frequency")?,
            },
            Some((_, "tabulated")) => {
                let (_, table) = e
                    .raw("material.table")
                    .ok_or_else(|| CliError::missing("material.table"))?;
                MaterialKind::Tabulated {
                    table: base_dir.join(table),
                }
            }
            Some((line, other)) => {
                return Err(CliError::config(
                    line,
                    format!("material.kind: '{other}' is not one of pec, drude, tabulated"),
                ))
            }
        };
        let atom = match e.raw("atom.kind") {
            None | Some((_, "two_level")) => AtomKind::TwoLevel {
                linewidth_rel: e.required("atom.linewidth_rel")?,
            },
            Some((_, "meta_atom")) => AtomKind::MetaAtom {
                radius_nm: e.required("atom.radius_nm")?,
            },
            Some((line, other)) => {
                return Err(CliError::config(
                    line,
                    format!("atom.kind: '{other}' is not one of two_level, meta_atom"),
                ))
            }
        };
        let model = match e.raw("model.kind") {
            None | Some((_, "fano_eq9")) => ModelKind::FanoEq9,
            Some((_, "pec_deep_eq10")) => ModelKind::PecDeepEq10,
            Some((line, other)) => {
                return Err(CliError::config(
                    line,
                    format!("model.kind: '{other}' is not one of fano_eq9, pec_deep_eq10"),
                ))
            }
        };
        let convention = match e.raw("model.convention") {
            None | Some((_, "physical")) => LineshapeConvention::Physical,
            Some((_, "as_printed")) => LineshapeConvention::AsPrinted,
            Some((line, other)) => {
                return Err(CliError::config(
                    line,
                    format!("model.convention: '{other}' is not one of physical, as_printed"),
                ))
            }
        };
        if let Some((line, format)) = e.raw("output.format") {
            if format != "csv" {
                return Err(CliError::config(
                    line,
                    format!("output.format: '{format}' is not supported (csv)"),
                ));
            }
        }
        let points = match e.raw("scan.points") {
            None => return Err(CliError::missing("scan.points")),
            Some((line, v)) => v
                .parse::<usize>()
                .map_err(|_| CliError::config(line, format!("scan.points: '{v}' is not a non-negative integer")))?,
        };

        let config = RunConfig {
            radius_nm: e.required("geometry.radius_nm")?,
            depth_nm: e.required("geometry.depth_nm")?,
            material,
            atom,
            resonance_wavelength_nm: e.required("atom.resonance_wavelength_nm")?,
            x_nm: e.number("atom.x_nm")?.unwrap_or(0.0),
            y_nm: e.number("atom.y_nm")?.unwrap_or(0.0),
            z_nm: e.number("atom.z_nm")?,
            model,
            xibar: e.number("model.xibar")?.unwrap_or(2.0),
            green_re: e.number("model.green_re")?.unwrap_or(0.0),
            green_im: e.number("model.green_im")?.unwrap_or(0.0),
            convention,
            lambda_min_nm: e.required("scan.lambda_min_nm")?,
            lambda_max_nm: e.required("scan.lambda_max_nm")?,
            points,
            output: e
                .raw("output.path")
                .map_or_else(|| PathBuf::from("spectrum.csv"), |(_, p)| PathBuf::from(p)),
            lines: e.values.iter().map(|(k, (l, _))| (k.clone(), *l)).collect(),
        };
        config.validate()?;
        Ok(config)
    }

    /// Error attributed to the line that set `key`, if any.
    fn invalid(&self, key: &str, message: String) -> CliError {
        match self.lines.get(key) {
            Some(&line) => CliError::config(line, message),
            None => CliError::Usage(message),
        }
    }

    /// Positivity and ordering constraints.
    pub fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("geometry.radius_nm", self.radius_nm),
            ("geometry.depth_nm", self.depth_nm),
            ("atom.resonance_wavelength_nm", self.resonance_wavelength_nm),
            ("scan.lambda_min_nm", self.lambda_min_nm),
            ("scan.lambda_max_nm", self.lambda_max_nm),
        ];
        for (key, v) in positive {
            if !(v > 0.0) {
                return Err(self.invalid(key, format!("{key} must be positive, got {v}")));
            }
        }
        match self.atom {
            AtomKind::TwoLevel { linewidth_rel } if !(linewidth_rel > 0.0) => {
                return Err(self.invalid(
                    "atom.linewidth_rel",
                    format!("atom.linewidth_rel must be positive, got {linewidth_rel}"),
                ))
            }
            AtomKind::MetaAtom { radius_nm } if !(radius_nm > 0.0) => {
                return Err(self.invalid(
                    "atom.radius_nm",
                    format!("atom.radius_nm must be positive, got {radius_nm}"),
                ))
            }
            _ => {}
        }
        if let MaterialKind::Drude { plasma_frequency } = self.material {
            if !(plasma_frequency > 0.0) {
                return Err(self.invalid(
                    "material.plasma_frequency",
                    format!("material.plasma_frequency must be positive, got {plasma_frequency}"),
                ));
            }
        }
        if !(self.lambda_min_nm < self.lambda_max_nm) {
            return Err(self.invalid(
                "scan.lambda_min_nm",
                format!(
                    "scan.lambda_min_nm ({}) must be below scan.lambda_max_nm ({})",
                    self.lambda_min_nm, self.lambda_max_nm
                ),
            ));
        }
        if self.points < 2 {
            return Err(self.invalid(
                "scan.points",
                format!("scan.points must be at least 2, got {}", self.points),
            ));
        }
        if self.xibar < 0.0 {
            return Err(self.invalid(
                "model.xibar",
                format!("model.xibar must be non-negative, got {}", self.xibar),
            ));
        }
        let rho = self.x_nm.hypot(self.y_nm);
        if !(rho < self.radius_nm) {
            return Err(self.invalid(
                "atom.x_nm",
                format!(
                    "atom at ρ = {rho} nm lies outside the hole of radius {} nm",
                    self.radius_nm
                ),
            ));
        }
        let z = self.atom_z();
        if !(0.0..=self.depth_nm).contains(&z) {
            return Err(self.invalid("atom.z_nm", format!("atom.z_nm = {z} outside [0, {}]", self.depth_nm)));
        }
        Ok(())
    }

    pub fn atom_z(&self) -> f64 {
        self.z_nm.unwrap_or(0.5 * self.depth_nm)
    }
}
