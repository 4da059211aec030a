//! Run configuration: one TOML document with `group`, `filtration`, `task` and
//! `output` sections.
//!
//! ```toml
//! [group]
//! kind = "unitriangular"
//! size = 3
//!
//! [filtration]
//! powers = { p = 2, t = 3 }
//!
//! [task]
//! name = "profile"
//! r = [2]
//! s_cap = 64
//! mode = "greedy"
//!
//! [output]
//! dir = "out"
//! ```

use std::path::{Path, PathBuf};
use std::str::FromStr;

use boxdim::cayley::DEFAULT_VERTEX_CAP;
use boxdim::doubling::SmallComponents;
use boxdim::group::{Coord, Filtration, GroupElement, GroupKind, GroupSpec};
use boxdim::profile::ProfileMode;
use boxdim::{Dist, Rational};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub group: GroupConfig,
    pub filtration: Option<FiltrationConfig>,
    pub task: TaskConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindName {
    FreeAbelian,
    Unitriangular,
    Product,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorConfig {
    pub kind: KindName,
    pub rank: Option<usize>,
    pub size: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub kind: KindName,
    pub rank: Option<usize>,
    pub size: Option<usize>,
    pub factors: Option<Vec<FactorConfig>>,
    /// Coordinate vectors; the standard generators when absent.
    pub generators: Option<Vec<Vec<i64>>>,
    /// 128-bit coordinates.
    #[serde(default)]
    pub wide: bool,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowersConfig {
    pub p: u64,
    pub t: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationConfig {
    pub moduli: Option<Vec<u64>>,
    pub powers: Option<PowersConfig>,
    /// Number of leading moduli to build; all by default.
    pub components: Option<usize>,
    pub vertex_cap: Option<usize>,
}

/// `"fit"`, or an explicit `C` (integer or `"p/q"`) and degree.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GrowthConfig {
    Fit(String),
    Explicit { c: Constant, d: u32 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Constant {
    Int(i64),
    Text(String),
}

impl Constant {
    pub fn to_rational(&self) -> Result<Rational, CliError> {
        match self {
            Constant::Int(i) => Ok(Rational::from_integer((*i).into())),
            Constant::Text(s) => Rational::from_str(s.trim())
                .map_err(|_| CliError::Config(format!("growth constant {s:?} is not a rational number"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Greedy,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferInputs {
    /// Greedy witnesses on each input ball.
    Greedy,
    /// Alternating blocks of `S + 1` integers, shifted per input; rank-1 free
    /// abelian groups only.
    Intervals,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskConfig {
    Growth {
        #[serde(default = "default_growth_radius")]
        r_max: u32,
        degrees: Option<Vec<u32>>,
    },
    Quotient {
        modulus: Option<u64>,
    },
    Boxspace {
        budget: Option<usize>,
    },
    Isoradius {
        budget: Option<usize>,
    },
    Cover {
        r: Vec<Dist>,
        growth: GrowthConfig,
        #[serde(default = "default_growth_radius")]
        growth_radius: u32,
        #[serde(default)]
        small_components: SmallComponents,
    },
    Families {
        scales: Vec<Dist>,
        growth: GrowthConfig,
        #[serde(default = "default_growth_radius")]
        growth_radius: u32,
        #[serde(default)]
        small_components: SmallComponents,
        /// Replace the computed thresholds; for negative experiments.
        thresholds: Option<Vec<usize>>,
    },
    Rsdim {
        r: Dist,
        s: Dist,
        method: Method,
        #[serde(default = "default_n_cap")]
        n_cap: usize,
        component: Option<usize>,
        /// `cycle:N` or `path:N`.
        space: Option<String>,
        matrix: Option<Vec<Vec<Dist>>>,
    },
    Profile {
        r: Vec<Dist>,
        s_cap: Dist,
        mode: ProfileMode,
        #[serde(default = "default_n_cap")]
        n_cap: usize,
        growth: Option<GrowthConfig>,
        #[serde(default = "default_growth_radius")]
        growth_radius: u32,
        #[serde(default)]
        small_components: SmallComponents,
    },
    Transfer {
        r: Dist,
        s: Dist,
        r0: u32,
        input_radii: [u32; 2],
        inputs: TransferInputs,
    },
}

fn default_growth_radius() -> u32 {
    10
}

fn default_n_cap() -> usize {
    8
}

impl TaskConfig {
    pub fn name(&self) -> &'static str {
        match self {
            TaskConfig::Growth { .. } => "growth",
            TaskConfig::Quotient { .. } => "quotient",
            TaskConfig::Boxspace { .. } => "boxspace",
            TaskConfig::Isoradius { .. } => "isoradius",
            TaskConfig::Cover { .. } => "cover",
            TaskConfig::Families { .. } => "families",
            TaskConfig::Rsdim { .. } => "rsdim",
            TaskConfig::Profile { .. } => "profile",
            TaskConfig::Transfer { .. } => "transfer",
        }
    }

    /// Tasks that build a box space.
    pub fn needs_filtration(&self) -> bool {
        match self {
            TaskConfig::Growth { .. } | TaskConfig::Transfer { .. } => false,
            TaskConfig::Quotient { modulus } => modulus.is_none(),
            TaskConfig::Rsdim { component, .. } => component.is_some(),
            _ => true,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    /// File name of the CSV table; `<task>.csv` by default.
    pub csv: Option<String>,
    /// File name of the JSON summary; `<task>.json` by default.
    pub summary: Option<String>,
    pub cache_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.task.needs_filtration() && self.filtration.is_none() {
            return Err(CliError::Config(format!(
                "task {} needs a [filtration] section",
                self.task.name()
            )));
        }
        if let Some(f) = &self.filtration {
            if f.moduli.is_some() == f.powers.is_some() {
                return Err(CliError::Config(
                    "filtration needs exactly one of moduli or powers".into(),
                ));
            }
        }
        let bad = |msg: &str| Err(CliError::Config(msg.to_string()));
        match &self.task {
            TaskConfig::Cover { r, .. } | TaskConfig::Profile { r, .. } if r.is_empty() => {
                bad("task needs a non-empty R list")
            }
            TaskConfig::Families { scales, .. } if scales.is_empty() => bad("families needs at least one scale"),
            TaskConfig::Rsdim {
                component,
                space,
                matrix,
                ..
            } if [component.is_some(), space.is_some(), matrix.is_some()]
                .iter()
                .filter(|&&b| b)
                .count()
                != 1 =>
            {
                bad("rsdim needs exactly one of component, space or matrix")
            }
            TaskConfig::Transfer { input_radii, .. } if input_radii[0] > input_radii[1] => {
                bad("input_radii must be [low, high]")
            }
            _ => Ok(()),
        }
    }

    pub fn group_spec<T: Coord>(&self) -> Result<GroupSpec<T>, CliError> {
        let g = &self.group;
        let kind = match g.kind {
            KindName::Product => {
                let factors = g
                    .factors
                    .as_ref()
                    .ok_or_else(|| CliError::Config("product groups need factors".into()))?;
                GroupKind::DirectProduct(
                    factors
                        .iter()
                        .map(|f| simple_kind(f.kind, f.rank, f.size))
                        .collect::<Result<_, _>>()?,
                )
            }
            k => simple_kind(k, g.rank, g.size)?,
        };
        let spec = match &g.generators {
            None => GroupSpec::new(kind)?,
            Some(gens) => {
                let elems = gens
                    .iter()
                    .map(|v| {
                        v.iter()
                            .map(|&x| {
                                T::from_i64(x).ok_or(CliError::Config(format!("generator entry {x} out of range")))
                            })
                            .collect::<Result<Vec<T>, _>>()
                            .map(GroupElement::new)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                GroupSpec::with_generators(kind, elems)?
            }
        };
        Ok(spec)
    }

    pub fn filtration<T: Coord>(&self, spec: GroupSpec<T>) -> Result<Filtration<T>, CliError> {
        let f = self
            .filtration
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [filtration] section".into()))?;
        let filt = match (&f.moduli, f.powers) {
            (Some(m), None) => Filtration::new(spec, m.clone())?,
            (None, Some(p)) => Filtration::powers(spec, p.p, p.t)?,
            _ => unreachable!("validated"),
        };
        Ok(filt)
    }

    pub fn component_count(&self) -> Option<usize> {
        self.filtration.as_ref().and_then(|f| f.components)
    }

    pub fn vertex_cap(&self) -> usize {
        self.filtration
            .as_ref()
            .and_then(|f| f.vertex_cap)
            .unwrap_or(DEFAULT_VERTEX_CAP)
    }
}

fn simple_kind(kind: KindName, rank: Option<usize>, size: Option<usize>) -> Result<GroupKind, CliError> {
    match (kind, rank, size) {
        (KindName::FreeAbelian, Some(rank), None) => Ok(GroupKind::FreeAbelian { rank }),
        (KindName::Unitriangular, None, Some(size)) => Ok(GroupKind::Unitriangular { size }),
        (KindName::FreeAbelian, _, _) => Err(CliError::Config("free_abelian takes exactly `rank`".into())),
        (KindName::Unitriangular, _, _) => Err(CliError::Config("unitriangular takes exactly `size`".into())),
        (KindName::Product, _, _) => Err(CliError::Config("nested products are not supported".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PROFILE: &str = r#"
[group]
kind = "free_abelian"
rank = 2

[filtration]
powers = { p = 2, t = 4 }

[task]
name = "profile"
r = [2, 4]
s_cap = 64
mode = "greedy"
"#;

    #[test]
    fn parses_profile() {
        let cfg = RunConfig::from_toml(PROFILE).unwrap();
        assert_eq!(cfg.task.name(), "profile");
        let spec = cfg.group_spec::<i64>().unwrap();
        assert_eq!(cfg.filtration(spec).unwrap().moduli(), &[2, 4, 8, 16]);
    }

    #[test]
    fn rejects_bad_configs() {
        let no_filtration = PROFILE.replace("[filtration]\npowers = { p = 2, t = 4 }", "");
        assert!(matches!(RunConfig::from_toml(&no_filtration), Err(CliError::Config(_))));
        let typo = PROFILE.replace("s_cap", "s_cpa");
        assert!(matches!(RunConfig::from_toml(&typo), Err(CliError::Config(_))));
        let both = PROFILE.replace("powers = { p = 2, t = 4 }", "powers = { p = 2, t = 4 }\nmoduli = [2]");
        assert!(matches!(RunConfig::from_toml(&both), Err(CliError::Config(_))));
        let cfg = RunConfig::from_toml(&PROFILE.replace("powers = { p = 2, t = 4 }", "moduli = [3, 4]")).unwrap();
        let spec = cfg.group_spec::<i64>().unwrap();
        assert!(cfg.filtration(spec).is_err());
    }

    #[test]
    fn growth_constants() {
        assert_eq!(
            Constant::Text("7/2".into()).to_rational().unwrap(),
            Rational::new(7.into(), 2.into())
        );
        assert_eq!(
            Constant::Int(3).to_rational().unwrap(),
            Rational::from_integer(3.into())
        );
        assert!(Constant::Text("x".into()).to_rational().is_err());
    }
}
