//! `boxloss converge`: single-case fit with a full trajectory dump.

use super::{parse_box, parse_ch, validate_theta, Context};
use crate::error::{usage, CliError};
use crate::manifest::ManifestBuilder;
use crate::ConvergeArgs;
use boxloss_core::regression::{fit, AdamConfig};
use boxloss_core::report::trajectory_csv;
use boxloss_core::{LossKind, SiouParams};
use serde_json::json;

pub fn run(args: ConvergeArgs) -> Result<(), CliError> {
    let ctx = Context::prepare(&args.common)?;
    let anchor = parse_box(&args.anchor)?;
    let target = parse_box(&args.target)?;
    let kind = match args.loss.as_deref() {
        Some(raw) => raw.parse::<LossKind>().map_err(usage)?,
        None => ctx
            .config
            .get::<LossKind>("loss")?
            .unwrap_or(LossKind::Siou),
    };
    let mut adam = AdamConfig::default();
    adam.iterations = args
        .iters
        .or(ctx.config.get("iters")?)
        .unwrap_or(adam.iterations);
    adam.tolerance = args
        .tol
        .or(ctx.config.get("tol")?)
        .unwrap_or(adam.tolerance);
    adam.validate()
        .map_err(|e| usage(format!("invalid optimizer configuration: {e}")))?;
    let params = SiouParams {
        theta: validate_theta(args.theta.or(ctx.config.get("theta")?).unwrap_or(4.0))?,
        ch: parse_ch(args.ch_interpretation.as_deref(), &ctx.config)?,
    };

    let mut manifest = ManifestBuilder::start("converge");
    let trajectory = fit(&anchor, &target, kind, &params, &adam);
    manifest.write_output(
        &ctx.out_dir,
        "trajectory.csv",
        trajectory_csv(&trajectory).as_bytes(),
    )?;

    println!(
        "{kind}: converged_at = {:?}, final L1 = {}",
        trajectory.converged_at,
        trajectory.l1_errors.last().unwrap()
    );
    let summary = json!({
        "converged_at": trajectory.converged_at,
        "final_l1": trajectory.l1_errors.last(),
        "rejected_steps": trajectory.rejected_steps,
        "clamped_steps": trajectory.clamped_steps,
    });
    let config_value = json!({
        "anchor": anchor,
        "target": target,
        "loss": kind.name(),
        "siou": params,
        "adam": adam,
    });
    manifest.finish(&ctx.out_dir, config_value, json!({}), summary)?;
    Ok(())
}
