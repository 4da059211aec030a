//! Exported witnesses and their re-verification.

use std::path::Path;

use boxdim::boxspace::BallSpace;
use boxdim::cover::{verify_cover, Cover, CoverReport};
use boxdim::group::Coord;
use boxdim::{Dist, MetricSpace};
use serde::{Deserialize, Serialize};

use crate::tasks::{build_box, component_graph, explicit_space, matrix_space, Context};
use crate::{CliError, RunConfig};

/// The space a witness lives on, relative to the run configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SpaceRef {
    /// The box space of the configured filtration.
    Box,
    /// One quotient of the filtration.
    Component {
        index: usize,
    },
    /// `cycle:N` or `path:N`.
    Explicit {
        space: String,
    },
    Matrix {
        matrix: Vec<Vec<Dist>>,
    },
    /// `B(e, radius)` in the group itself.
    Ball {
        radius: u32,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub space: SpaceRef,
    pub r: Dist,
    pub s: Dist,
    pub cover: Cover,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessFile {
    /// Canonical form of the group the witnesses were computed for.
    pub group: String,
    pub witnesses: Vec<Witness>,
}

pub fn verify_file(cfg: &RunConfig, path: &Path, cache_dir: Option<&Path>) -> Result<Vec<CoverReport>, CliError> {
    let text = std::fs::read_to_string(path)?;
    let file: WitnessFile =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("bad witness file: {e}")))?;
    let ctx = Context {
        cache_dir: cache_dir
            .map(Path::to_path_buf)
            .or_else(|| cfg.output.cache_dir.clone()),
        timing: false,
        seed: None,
    };
    if cfg.group.wide {
        verify_typed::<i128>(cfg, &file, &ctx)
    } else {
        verify_typed::<i64>(cfg, &file, &ctx)
    }
}

fn verify_typed<T: Coord>(cfg: &RunConfig, file: &WitnessFile, ctx: &Context) -> Result<Vec<CoverReport>, CliError> {
    let spec = cfg.group_spec::<T>()?;
    if spec.canonical_string() != file.group {
        return Err(CliError::Config(format!(
            "witness group {:?} differs from the configured group {:?}",
            file.group,
            spec.canonical_string()
        )));
    }
    let check = |space: &dyn MetricSpace, w: &Witness| verify_cover(space, &w.cover, w.r, w.s);
    file.witnesses
        .iter()
        .map(|w| -> Result<CoverReport, CliError> {
            Ok(match &w.space {
                SpaceRef::Box => check(&build_box(cfg, spec.clone(), ctx)?, w),
                SpaceRef::Component { index } => check(&component_graph(cfg, spec.clone(), *index, ctx)?, w),
                SpaceRef::Explicit { space } => check(&explicit_space(space)?, w),
                SpaceRef::Matrix { matrix } => check(&matrix_space(matrix)?, w),
                SpaceRef::Ball { radius } => check(&BallSpace::new(&spec, *radius, cfg.vertex_cap())?, w),
            })
        })
        .collect()
}
