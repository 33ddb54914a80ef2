pub mod bench;
pub mod converge;
pub mod gradcheck;
pub mod surface;
pub mod tune;

use crate::config_file::ConfigFile;
use crate::error::{usage, CliError};
use crate::CommonArgs;
use boxloss_core::{Box2D, ChInterpretation, LossKind};
use std::path::PathBuf;

pub const DEFAULT_OUT_DIR: &str = "boxloss-out";

pub struct Context {
    pub out_dir: PathBuf,
    pub config: ConfigFile,
    pub pool: rayon::ThreadPool,
    pub threads: usize,
}

impl Context {
    pub fn prepare(common: &CommonArgs) -> Result<Self, CliError> {
        let config = ConfigFile::load(common.config.as_deref())?;
        let threads = resolve_threads(common.threads, &config)?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Runtime(anyhow::anyhow!("building thread pool: {e}")))?;
        let out_dir = common
            .out
            .clone()
            .or_else(|| config.get::<PathBuf>("out").ok().flatten())
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
        std::fs::create_dir_all(&out_dir).map_err(|e| {
            CliError::Runtime(anyhow::anyhow!(
                "creating output directory {}: {e}",
                out_dir.display()
            ))
        })?;
        Ok(Self {
            out_dir,
            config,
            pool,
            threads,
        })
    }
}

fn resolve_threads(flag: Option<usize>, config: &ConfigFile) -> Result<usize, CliError> {
    let env_threads = match std::env::var("BOXLOSS_THREADS") {
        Ok(raw) => Some(
            raw.parse::<usize>()
                .map_err(|_| usage(format!("BOXLOSS_THREADS must be an integer, got `{raw}`")))?,
        ),
        Err(_) => None,
    };
    let threads = flag
        .or(config.get("threads")?)
        .or(env_threads)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });
    if threads == 0 {
        return Err(usage("threads must be at least 1"));
    }
    Ok(threads)
}

/// Resolves the loss list: flags, then config file, then the fallback.
pub fn resolve_losses(
    flags: &[String],
    config: &ConfigFile,
    fallback: &[LossKind],
) -> Result<Vec<LossKind>, CliError> {
    let raw: Vec<String> = if !flags.is_empty() {
        flags.to_vec()
    } else if let Some(list) = config.get_list("loss") {
        list
    } else {
        return Ok(fallback.to_vec());
    };
    let mut kinds = Vec::new();
    for name in raw {
        let kind = name.parse::<LossKind>().map_err(usage)?;
        if !kinds.contains(&kind) {
            kinds.push(kind);
        }
    }
    if kinds.is_empty() {
        return Err(usage("at least one --loss is required"));
    }
    Ok(kinds)
}

pub fn parse_ch(
    flag: Option<&str>,
    config: &ConfigFile,
) -> Result<ChInterpretation, CliError> {
    match flag {
        Some(raw) => raw.parse::<ChInterpretation>().map_err(usage),
        None => Ok(config
            .get::<ChInterpretation>("ch_interpretation")?
            .unwrap_or_default()),
    }
}

/// Parses `cx,cy,w,h` into a validated box.
pub fn parse_box(spec: &str) -> Result<Box2D, CliError> {
    let fields: Vec<&str> = spec.split(',').map(str::trim).collect();
    if fields.len() != 4 {
        return Err(usage(format!(
            "box spec must be cx,cy,w,h with four fields, got `{spec}`"
        )));
    }
    let mut values = [0.0f64; 4];
    for (slot, field) in values.iter_mut().zip(&fields) {
        *slot = field
            .parse()
            .map_err(|_| usage(format!("box field `{field}` is not a number")))?;
    }
    Box2D::new(values[0], values[1], values[2], values[3])
        .map_err(|e| usage(format!("invalid box `{spec}`: {e}")))
}

/// Validates theta against the supported exponent range.
pub fn validate_theta(theta: f64) -> Result<f64, CliError> {
    let params = boxloss_core::SiouParams::with_theta(theta);
    if !params.theta_in_range() {
        return Err(usage(format!(
            "theta must lie in [{}, {}], got {theta}",
            boxloss_core::SiouParams::THETA_MIN,
            boxloss_core::SiouParams::THETA_MAX
        )));
    }
    Ok(theta)
}
