//! One function per task. Each returns the CSV table, the JSON summary and
//! optional witnesses; nothing is written here.

use std::path::PathBuf;

use boxdim::boxspace::{isometry_radius, verify_ball_isometry, BallSpace, BoxSpace, IsometryProfile, ISOMETRY_BUDGET};
use boxdim::cache::{quotient_digest, GraphCache};
use boxdim::cayley::CayleyGraph;
use boxdim::cover::{color_families, verify_cover, Cover};
use boxdim::dimension::{rs_dim_exact, rs_dim_exhaustive, rs_dim_greedy, RSDimResult};
use boxdim::doubling::{doubling_cover, SmallComponents};
use boxdim::families::{assemble_box_families, ScaleCover};
use boxdim::group::{CongruenceQuotient, Coord, GroupKind, GroupSpec};
use boxdim::growth::{fit_growth, growth_profile, GrowthBound, GrowthProfile, DEFAULT_STATE_CAP};
use boxdim::profile::{asdim_profile, ProfileOptions};
use boxdim::transfer::{diagonal_transfer, interval_coloring, BallColoring};
use boxdim::{Dist, ExplicitMetric, MetricSpace};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{GrowthConfig, Method, TaskConfig, TransferInputs};
use crate::witness::{SpaceRef, Witness, WitnessFile};
use crate::{CliError, RunConfig};

/// Candidate degrees tried by `growth = "fit"`.
const FIT_DEGREES: std::ops::RangeInclusive<u32> = 1..=12;

#[derive(Debug, Clone, Default)]
pub struct Context {
    pub cache_dir: Option<PathBuf>,
    pub timing: bool,
    pub seed: Option<u64>,
}

#[derive(Debug)]
pub struct Artifacts {
    pub task: &'static str,
    pub csv: Vec<u8>,
    pub summary: Value,
    pub witnesses: Option<WitnessFile>,
    /// A violated guarantee. Outputs are still written; the exit code is 4.
    pub failure: Option<String>,
}

type TaskResult = Result<Artifacts, CliError>;

pub fn run(cfg: &RunConfig, ctx: &Context) -> TaskResult {
    if cfg.group.wide {
        run_typed::<i128>(cfg, ctx)
    } else {
        run_typed::<i64>(cfg, ctx)
    }
}

fn run_typed<T: Coord>(cfg: &RunConfig, ctx: &Context) -> TaskResult {
    let spec = cfg.group_spec::<T>()?;
    match &cfg.task {
        TaskConfig::Growth { r_max, degrees } => growth(cfg, &spec, *r_max, degrees.as_deref(), ctx),
        TaskConfig::Quotient { modulus } => quotient(cfg, &spec, *modulus, ctx),
        TaskConfig::Boxspace { budget } | TaskConfig::Isoradius { budget } => {
            let budget = budget.unwrap_or(ISOMETRY_BUDGET);
            if cfg.task.name() == "boxspace" {
                boxspace(cfg, &spec, budget, ctx)
            } else {
                isoradius(cfg, &spec, budget, ctx)
            }
        }
        TaskConfig::Cover {
            r,
            growth,
            growth_radius,
            small_components,
        } => cover(cfg, &spec, r, growth, *growth_radius, *small_components, ctx),
        TaskConfig::Families {
            scales,
            growth,
            growth_radius,
            small_components,
            thresholds,
        } => families(
            cfg,
            &spec,
            scales,
            growth,
            *growth_radius,
            *small_components,
            thresholds.as_deref(),
            ctx,
        ),
        TaskConfig::Rsdim {
            r,
            s,
            method,
            n_cap,
            component,
            space,
            matrix,
        } => rsdim(
            cfg,
            &spec,
            (*r, *s),
            *method,
            *n_cap,
            (*component, space.as_deref(), matrix.as_deref()),
            ctx,
        ),
        TaskConfig::Profile {
            r,
            s_cap,
            mode,
            n_cap,
            growth,
            growth_radius,
            small_components,
        } => {
            let mut opts = ProfileOptions::new(*mode, *s_cap);
            opts.n_cap = *n_cap;
            opts.policy = *small_components;
            opts.timing = ctx.timing;
            if let Some(g) = growth {
                opts.growth = Some(resolve_growth(&spec, g, *growth_radius)?.0);
            }
            profile(cfg, &spec, r, &opts, ctx)
        }
        TaskConfig::Transfer {
            r,
            s,
            r0,
            input_radii,
            inputs,
        } => transfer(cfg, &spec, (*r, *s), *r0, *input_radii, *inputs, ctx),
    }
}

pub fn build_box<T: Coord>(cfg: &RunConfig, spec: GroupSpec<T>, ctx: &Context) -> Result<BoxSpace<T>, CliError> {
    let filt = cfg.filtration(spec)?;
    let count = cfg.component_count().unwrap_or(filt.moduli().len());
    let cap = cfg.vertex_cap();
    let b = match &ctx.cache_dir {
        Some(dir) => {
            let cache = GraphCache::new(dir)?;
            BoxSpace::build_with(&filt, count, |q| cache.get_or_build(q, cap))?
        }
        None => BoxSpace::build(&filt, count, cap)?,
    };
    Ok(b)
}

fn graph<T: Coord>(q: CongruenceQuotient<T>, cap: usize, ctx: &Context) -> Result<CayleyGraph<T>, CliError> {
    Ok(match &ctx.cache_dir {
        Some(dir) => GraphCache::new(dir)?.get_or_build(q, cap)?,
        None => CayleyGraph::build(q, cap)?,
    })
}

pub fn component_graph<T: Coord>(
    cfg: &RunConfig,
    spec: GroupSpec<T>,
    index: usize,
    ctx: &Context,
) -> Result<CayleyGraph<T>, CliError> {
    let filt = cfg.filtration(spec)?;
    let q = filt
        .quotients()?
        .into_iter()
        .nth(index)
        .ok_or_else(|| CliError::Config(format!("component {index} beyond the filtration")))?;
    graph(q, cfg.vertex_cap(), ctx)
}

pub fn explicit_space(name: &str) -> Result<ExplicitMetric, CliError> {
    let bad = || CliError::Config(format!("unknown space {name:?}; expected cycle:N or path:N"));
    let (kind, n) = name.split_once(':').ok_or_else(bad)?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    match kind.trim() {
        "cycle" if n >= 1 => Ok(ExplicitMetric::cycle(n)),
        "path" if n >= 1 => Ok(ExplicitMetric::path(n)),
        _ => Err(bad()),
    }
}

pub fn matrix_space(rows: &[Vec<Dist>]) -> Result<ExplicitMetric, CliError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Config("distance matrix must be square".into()));
    }
    Ok(ExplicitMetric::new(n, rows.concat())?)
}

fn resolve_growth<T: Coord>(
    spec: &GroupSpec<T>,
    g: &GrowthConfig,
    radius: u32,
) -> Result<(GrowthBound, GrowthProfile), CliError> {
    let profile = growth_profile(spec, radius, DEFAULT_STATE_CAP)?;
    let bound = match g {
        GrowthConfig::Fit(s) if s == "fit" => fit_growth(&profile, &FIT_DEGREES.collect::<Vec<_>>())?,
        GrowthConfig::Fit(other) => {
            return Err(CliError::Config(format!(
                "growth must be \"fit\" or {{ c, d }}, got {other:?}"
            )))
        }
        GrowthConfig::Explicit { c, d } => {
            let mut b = GrowthBound::new(c.to_rational()?, *d)?;
            b.validate(&profile)?;
            b
        }
    };
    Ok((bound, profile))
}

fn csv_bytes<R: Serialize>(rows: &[R]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner().map_err(|e| CliError::Output(e.to_string()))
}

fn summary<T: Coord>(cfg: &RunConfig, spec: &GroupSpec<T>, ctx: &Context, results: Value) -> Value {
    let moduli = cfg.filtration(spec.clone()).ok().map(|f| f.moduli().to_vec());
    json!({
        "task": cfg.task.name(),
        "group": spec.canonical_string(),
        "dimension": spec.dimension(),
        "hirsch_length": spec.hirsch_length(),
        "moduli": moduli,
        "seed": ctx.seed,
        "results": results,
    })
}

fn artifacts(task: &'static str, csv: Vec<u8>, summary: Value) -> Artifacts {
    Artifacts {
        task,
        csv,
        summary,
        witnesses: None,
        failure: None,
    }
}

fn bound_json(b: &GrowthBound) -> Value {
    json!({
        "c": b.c.to_string(),
        "degree": b.degree,
        "validated_up_to": b.validated_up_to,
        "slope": b.slope,
    })
}

#[derive(Serialize)]
struct GrowthRow {
    r: u32,
    size: usize,
    bound: Option<String>,
}

fn growth<T: Coord>(
    cfg: &RunConfig,
    spec: &GroupSpec<T>,
    r_max: u32,
    degrees: Option<&[u32]>,
    ctx: &Context,
) -> TaskResult {
    let profile = growth_profile(spec, r_max, DEFAULT_STATE_CAP)?;
    let candidates: Vec<u32> = degrees.map_or_else(|| FIT_DEGREES.collect(), <[u32]>::to_vec);
    let bound = fit_growth(&profile, &candidates)?;
    let rows: Vec<GrowthRow> = profile
        .sizes
        .iter()
        .enumerate()
        .map(|(r, &size)| GrowthRow {
            r: r as u32,
            size,
            bound: (r > 0).then(|| bound.bound_at(r as u64).to_string()),
        })
        .collect();
    // the fitted degree bounds growth; the Hirsch length is a separate invariant
    let results = json!({
        "sizes": profile.sizes,
        "fitted_degree": bound.degree,
        "fit": bound_json(&bound),
        "hirsch_length": spec.hirsch_length(),
    });
    Ok(artifacts("growth", csv_bytes(&rows)?, summary(cfg, spec, ctx, results)))
}

#[derive(Serialize)]
struct QuotientRow {
    modulus: u64,
    r: u32,
    ball_size: usize,
}

fn quotient<T: Coord>(cfg: &RunConfig, spec: &GroupSpec<T>, modulus: Option<u64>, ctx: &Context) -> TaskResult {
    let quotients = match modulus {
        Some(m) => vec![CongruenceQuotient::new(spec.clone(), m)?],
        None => {
            let filt = cfg.filtration(spec.clone())?;
            let count = cfg.component_count().unwrap_or(filt.moduli().len());
            filt.quotients()?.into_iter().take(count).collect()
        }
    };
    let mut rows = Vec::new();
    let mut stats = Vec::new();
    for q in quotients {
        let m = q.modulus();
        let g = graph(q, cfg.vertex_cap(), ctx)?;
        for r in 0..=g.diameter() {
            rows.push(QuotientRow {
                modulus: m,
                r,
                ball_size: g.ball_size(r as u64),
            });
        }
        stats.push(json!({
            "modulus": m,
            "order": g.order(),
            "degree": g.degree(),
            "diameter": g.diameter(),
        }));
    }
    Ok(artifacts(
        "quotient",
        csv_bytes(&rows)?,
        summary(cfg, spec, ctx, json!(stats)),
    ))
}

#[derive(Serialize)]
struct DescriptorRow {
    index: usize,
    spec_digest: String,
    modulus: u64,
    order: usize,
    diameter: Dist,
    isometry_radius: u32,
    exact: bool,
}

fn boxspace<T: Coord>(cfg: &RunConfig, spec: &GroupSpec<T>, budget: usize, ctx: &Context) -> TaskResult {
    let b = build_box(cfg, spec.clone(), ctx)?;
    let prof = IsometryProfile::compute(&b, budget)?;
    let rows: Vec<DescriptorRow> = b
        .components()
        .iter()
        .zip(&prof.radii)
        .enumerate()
        .map(|(i, (g, iso))| DescriptorRow {
            index: i,
            spec_digest: hex_digest(g.quotient()),
            modulus: g.modulus(),
            order: g.order(),
            diameter: g.diameter(),
            isometry_radius: iso.radius,
            exact: iso.exact,
        })
        .collect();
    let results = json!({
        "component_count": b.component_count(),
        "points": b.len(),
        "radii_monotone": prof.is_monotone(),
    });
    Ok(artifacts(
        "boxspace",
        csv_bytes(&rows)?,
        summary(cfg, spec, ctx, results),
    ))
}

fn hex_digest<T: Coord>(q: &CongruenceQuotient<T>) -> String {
    hex::encode(quotient_digest(q))
}

#[derive(Serialize)]
struct IsoRow {
    index: usize,
    modulus: u64,
    radius: u32,
    exact: bool,
    kernel_length: Option<u32>,
    verified: bool,
    verified_next: bool,
}

fn isoradius<T: Coord>(cfg: &RunConfig, spec: &GroupSpec<T>, budget: usize, ctx: &Context) -> TaskResult {
    let filt = cfg.filtration(spec.clone())?;
    let count = cfg.component_count().unwrap_or(filt.moduli().len());
    let cap = cfg.vertex_cap();
    let mut rows = Vec::new();
    for (i, q) in filt.quotients()?.into_iter().take(count).enumerate() {
        let iso = isometry_radius(&q, budget)?;
        rows.push(IsoRow {
            index: i,
            modulus: q.modulus(),
            radius: iso.radius,
            exact: iso.exact,
            kernel_length: iso.kernel_length,
            verified: verify_ball_isometry(&q, iso.radius, cap)?,
            verified_next: verify_ball_isometry(&q, iso.radius + 1, cap)?,
        });
    }
    let failure = rows.iter().find(|r| !r.verified).map(|r| {
        format!(
            "ball isometry fails at the computed radius {} for modulus {}",
            r.radius, r.modulus
        )
    });
    let mut a = artifacts(
        "isoradius",
        csv_bytes(&rows)?,
        summary(cfg, spec, ctx, json!({ "components": rows.len() })),
    );
    a.failure = failure;
    Ok(a)
}

#[derive(Serialize)]
struct CoverRow {
    #[serde(rename = "R")]
    r: Dist,
    #[serde(rename = "K")]
    k: u64,
    m: u64,
    #[serde(rename = "S0")]
    s0: String,
    set_count: usize,
    r_multiplicity: usize,
    max_set_diameter: Dist,
    packing_max: usize,
    is_cover: bool,
    certified: bool,
    families: usize,
    families_valid: bool,
}

fn cover<T: Coord>(
    cfg: &RunConfig,
    spec: &GroupSpec<T>,
    r_list: &[Dist],
    growth: &GrowthConfig,
    growth_radius: u32,
    policy: SmallComponents,
    ctx: &Context,
) -> TaskResult {
    let (bound, _) = resolve_growth(spec, growth, growth_radius)?;
    let b = build_box(cfg, spec.clone(), ctx)?;
    let mut rows = Vec::new();
    let mut witnesses = Vec::new();
    let mut failure = None;
    for &r in r_list {
        let out = doubling_cover(&b, r, &bound, policy)?;
        let certified = out.certify();
        let s = out.params.s_bound_dist();
        let colored = color_families(&b, &out.cover, r);
        let rep = verify_cover(&b, &colored, r, s);
        if let Err(e) = &certified {
            failure.get_or_insert_with(|| format!("R = {r}: {e}"));
        } else if !rep.is_valid() {
            failure.get_or_insert_with(|| format!("R = {r}: recolored cover fails: {:?}", rep.violations.first()));
        }
        rows.push(CoverRow {
            r,
            k: out.params.k,
            m: out.params.m,
            s0: out.params.s0.to_string(),
            set_count: out.report.set_count,
            r_multiplicity: out.report.r_multiplicity,
            max_set_diameter: out.report.max_set_diameter,
            packing_max: out.packing_max(),
            is_cover: out.report.is_cover,
            certified: certified.is_ok(),
            families: colored.family_count(),
            families_valid: rep.is_valid(),
        });
        witnesses.push(Witness {
            space: SpaceRef::Box,
            r,
            s,
            cover: colored,
        });
    }
    let results = json!({ "growth": bound_json(&bound), "policy": policy });
    let mut a = artifacts("cover", csv_bytes(&rows)?, summary(cfg, spec, ctx, results));
    a.witnesses = Some(WitnessFile {
        group: spec.canonical_string(),
        witnesses,
    });
    a.failure = failure;
    Ok(a)
}

#[derive(Serialize)]
struct FamilyRow {
    k: Dist,
    threshold: usize,
    finite_points: usize,
    set_count: usize,
    valid: bool,
    subtraction_identity: bool,
    covers_complement: bool,
    violation: Option<String>,
}

#[allow(clippy::too_many_arguments)]
fn families<T: Coord>(
    cfg: &RunConfig,
    spec: &GroupSpec<T>,
    scales: &[Dist],
    growth: &GrowthConfig,
    growth_radius: u32,
    policy: SmallComponents,
    thresholds: Option<&[usize]>,
    ctx: &Context,
) -> TaskResult {
    let (bound, _) = resolve_growth(spec, growth, growth_radius)?;
    let b = build_box(cfg, spec.clone(), ctx)?;
    let mut covers = Vec::new();
    let mut needed = Vec::new();
    for &k in scales {
        let out = doubling_cover(&b, k, &bound, policy)?;
        out.certify()
            .map_err(|e| CliError::Verification(format!("scale {k}: {e}")))?;
        needed.push(k.max(out.report.max_set_diameter));
        covers.push(ScaleCover {
            scale: k,
            cover: color_families(&b, &out.cover, k),
        });
    }
    let th = match thresholds {
        Some(t) => t.to_vec(),
        None => IsometryProfile::compute(&b, ISOMETRY_BUDGET)?.thresholds(&needed),
    };
    let asm = assemble_box_families(&b, &covers, &th)?;
    let rows: Vec<FamilyRow> = asm
        .scales
        .iter()
        .map(|s| FamilyRow {
            k: s.scale,
            threshold: s.threshold,
            finite_points: s.finite_points,
            set_count: s.set_count,
            valid: s.is_valid(),
            subtraction_identity: s.subtraction_identity,
            covers_complement: s.covers_complement,
            violation: s.violations.first().map(|v| format!("{v:?}")),
        })
        .collect();
    let results = json!({ "family_count": asm.family_count, "thresholds": asm.thresholds, "scales": asm.scales });
    let mut a = artifacts("families", csv_bytes(&rows)?, summary(cfg, spec, ctx, results));
    a.failure = asm.first_violation().map(|(k, what)| format!("scale {k}: {what}"));
    Ok(a)
}

#[derive(Serialize)]
struct RsdimRow {
    #[serde(rename = "R")]
    r: Dist,
    #[serde(rename = "S")]
    s: Dist,
    method: &'static str,
    points: usize,
    n: usize,
    diameter: Dist,
    nodes: u64,
}

type Target<'a> = (Option<usize>, Option<&'a str>, Option<&'a [Vec<Dist>]>);

fn rsdim<T: Coord>(
    cfg: &RunConfig,
    spec: &GroupSpec<T>,
    (r, s): (Dist, Dist),
    method: Method,
    n_cap: usize,
    target: Target<'_>,
    ctx: &Context,
) -> TaskResult {
    let (space, space_ref): (Box<dyn MetricSpace>, SpaceRef) = match target {
        (Some(index), _, _) => (
            Box::new(component_graph(cfg, spec.clone(), index, ctx)?),
            SpaceRef::Component { index },
        ),
        (_, Some(name), _) => (
            Box::new(explicit_space(name)?),
            SpaceRef::Explicit {
                space: name.to_string(),
            },
        ),
        (_, _, Some(m)) => (Box::new(matrix_space(m)?), SpaceRef::Matrix { matrix: m.to_vec() }),
        _ => unreachable!("validated"),
    };
    let space: &dyn MetricSpace = space.as_ref();
    let (res, name): (RSDimResult, &'static str) = match method {
        Method::Exact => (rs_dim_exact(space, r, s, n_cap)?, "exact"),
        Method::Greedy => (rs_dim_greedy(space, r, s)?, "greedy"),
        Method::Exhaustive => (rs_dim_exhaustive(space, r, s)?, "exhaustive"),
    };
    let cover = res.cover(space)?;
    let rep = verify_cover(space, &cover, r, s);
    let row = RsdimRow {
        r,
        s,
        method: name,
        points: space.len(),
        n: res.n,
        diameter: rep.max_set_diameter,
        nodes: res.stats.nodes,
    };
    let results = json!({ "n": res.n, "coloring": res.coloring, "report": rep });
    let mut a = artifacts("rsdim", csv_bytes(&[row])?, summary(cfg, spec, ctx, results));
    if !rep.is_valid() {
        a.failure = Some(format!("witness fails: {:?}", rep.violations.first()));
    }
    a.witnesses = Some(WitnessFile {
        group: spec.canonical_string(),
        witnesses: vec![Witness {
            space: space_ref,
            r,
            s,
            cover,
        }],
    });
    Ok(a)
}

#[derive(Serialize)]
struct ProfileCsvRow {
    #[serde(rename = "R")]
    r: Dist,
    #[serde(rename = "S_achieved")]
    s_achieved: Option<Dist>,
    n_achieved: Option<usize>,
    mode: String,
    component_count: usize,
    hirsch_length: usize,
    wall_time_ms: u64,
    status: String,
}

fn profile<T: Coord>(
    cfg: &RunConfig,
    spec: &GroupSpec<T>,
    r_list: &[Dist],
    opts: &ProfileOptions,
    ctx: &Context,
) -> TaskResult {
    let b = build_box(cfg, spec.clone(), ctx)?;
    let rows = asdim_profile(&b, r_list, opts)?;
    let csv_rows: Vec<ProfileCsvRow> = rows
        .iter()
        .map(|row| ProfileCsvRow {
            r: row.r,
            s_achieved: row.s_achieved,
            n_achieved: row.n_achieved,
            mode: row.mode.to_string(),
            component_count: row.component_count,
            hirsch_length: row.hirsch_length,
            wall_time_ms: row.wall_time_ms,
            status: row.status.to_string(),
        })
        .collect();
    let mut results = json!({ "rows": rows });
    if let Some(g) = &opts.growth {
        results["growth"] = bound_json(g);
    }
    Ok(artifacts(
        "profile",
        csv_bytes(&csv_rows)?,
        summary(cfg, spec, ctx, results),
    ))
}

#[derive(Serialize)]
struct TransferRow {
    r0: u32,
    #[serde(rename = "R")]
    r: Dist,
    #[serde(rename = "S")]
    s: Dist,
    n: usize,
    points: usize,
    inputs: usize,
    live_inputs: usize,
    valid: bool,
    max_set_diameter: Dist,
}

fn transfer<T: Coord>(
    cfg: &RunConfig,
    spec: &GroupSpec<T>,
    (r, s): (Dist, Dist),
    r0: u32,
    [lo, hi]: [u32; 2],
    inputs: TransferInputs,
    ctx: &Context,
) -> TaskResult {
    let cap = cfg.vertex_cap();
    if inputs == TransferInputs::Intervals {
        let standard = GroupSpec::<T>::free_abelian(1)?;
        if spec.kind() != &(GroupKind::FreeAbelian { rank: 1 }) || spec.generators() != standard.generators() {
            return Err(CliError::Config(
                "interval inputs need the standard rank-1 free abelian group".into(),
            ));
        }
    }
    let balls: Vec<BallColoring<T>> = (lo..=hi)
        .map(|radius| -> Result<BallColoring<T>, CliError> {
            Ok(match inputs {
                TransferInputs::Intervals => BallColoring::from_fn(spec, radius, cap, |c| {
                    let x = c[0].to_i64().expect("ball coordinates fit i64");
                    interval_coloring(x, s as i64 + 1, radius as i64)
                })?,
                TransferInputs::Greedy => {
                    let ball = BallSpace::new(spec, radius, cap)?;
                    let colors = rs_dim_greedy(&ball, r, s)?.coloring;
                    BallColoring::new(ball, colors)?
                }
            })
        })
        .collect::<Result<_, _>>()?;
    let n = balls.iter().flat_map(|b| b.colors.iter().copied()).max().unwrap_or(0);
    let out = diagonal_transfer(spec, &balls, n, r, s, r0, cap)?;
    let row = TransferRow {
        r0,
        r,
        s,
        n,
        points: out.coloring.colors.len(),
        inputs: balls.len(),
        live_inputs: out.live_radii.len(),
        valid: out.report.is_valid(),
        max_set_diameter: out.report.max_set_diameter,
    };
    let results = json!({ "live_radii": out.live_radii, "colors": out.coloring.colors, "report": out.report });
    let cover = Cover::from_coloring(&out.coloring.ball, &out.coloring.colors, r)?;
    let mut a = artifacts("transfer", csv_bytes(&[row])?, summary(cfg, spec, ctx, results));
    a.witnesses = Some(WitnessFile {
        group: spec.canonical_string(),
        witnesses: vec![Witness {
            space: SpaceRef::Ball { radius: r0 },
            r,
            s,
            cover,
        }],
    });
    Ok(a)
}
