//! `boxloss surface`: bin a completed bench run's per-point final errors
//! into a spatial grid.

use super::Context;
use crate::error::{usage, CliError};
use crate::manifest::ManifestBuilder;
use crate::SurfaceArgs;
use boxloss_core::report::surface_csv;
use boxloss_core::sim::{surface, RunRecord};
use boxloss_core::LossKind;
use serde_json::json;

pub fn run(args: SurfaceArgs) -> Result<(), CliError> {
    let ctx = Context::prepare(&args.common)?;
    if args.bins < 2 {
        return Err(usage(format!(
            "--bins must be at least 2, got {}",
            args.bins
        )));
    }
    if !args.dir.is_dir() {
        return Err(usage(format!(
            "input directory {} does not exist",
            args.dir.display()
        )));
    }
    let kind = match args.loss.as_deref() {
        Some(raw) => raw.parse::<LossKind>().map_err(usage)?,
        None => ctx
            .config
            .get::<LossKind>("loss")?
            .unwrap_or(LossKind::Siou),
    };
    let record_path = args.dir.join(format!("run_{kind}.json"));
    let text = std::fs::read_to_string(&record_path).map_err(|e| {
        usage(format!(
            "cannot read run record {}: {e} (is this a completed bench directory?)",
            record_path.display()
        ))
    })?;
    let record: RunRecord = serde_json::from_str(&text)
        .map_err(|e| CliError::Runtime(anyhow::anyhow!("parsing {}: {e}", record_path.display())))?;

    let series = record.series();
    let surf = surface(
        &series,
        &record.points,
        args.bins,
        record.config.center,
        record.config.radius,
    )
    .map_err(|e| CliError::Runtime(anyhow::anyhow!("binning failed: {e}")))?;

    let mut manifest = ManifestBuilder::start("surface");
    manifest.write_output(
        &ctx.out_dir,
        &format!("surface_{kind}.csv"),
        surface_csv(&surf).as_bytes(),
    )?;
    let mut json_text =
        serde_json::to_string_pretty(&json!({ "config": record.config, "surface": surf }))
            .map_err(|e| CliError::Runtime(e.into()))?;
    json_text.push('\n');
    manifest.write_output(&ctx.out_dir, &format!("surface_{kind}.json"), json_text.as_bytes())?;

    let occupied = surf.cells.iter().filter(|c| c.count > 0).count();
    println!(
        "{kind}: {} x {} grid, {occupied} occupied cells",
        args.bins, args.bins
    );
    let config_value = json!({
        "dir": args.dir,
        "loss": kind.name(),
        "bins": args.bins,
    });
    manifest.finish(
        &ctx.out_dir,
        config_value,
        json!({"sim": record.config.seed}),
        json!({"occupied_cells": occupied}),
    )?;
    Ok(())
}
