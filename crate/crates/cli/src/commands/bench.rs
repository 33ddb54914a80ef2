//! `boxloss bench`: run the benchmark grid for one or more losses and
//! write per-loss series CSVs, per-loss run records, and a comparison CSV.

use super::{parse_ch, resolve_losses, validate_theta, Context};
use crate::error::{usage, CliError};
use crate::manifest::ManifestBuilder;
use crate::BenchArgs;
use boxloss_core::report::{comparison_csv, series_csv};
use boxloss_core::sim::{run_record, SimConfig};
use boxloss_core::LossKind;
use serde_json::json;

pub fn run(args: BenchArgs) -> Result<(), CliError> {
    let ctx = Context::prepare(&args.common)?;
    let losses = resolve_losses(&args.losses, &ctx.config, &[LossKind::Siou])?;

    let mut base = SimConfig::default();
    base.num_points = args
        .points
        .or(ctx.config.get("points")?)
        .unwrap_or(base.num_points);
    base.seed = args.seed.or(ctx.config.get("seed")?).unwrap_or(base.seed);
    base.siou.theta = validate_theta(
        args.theta
            .or(ctx.config.get("theta")?)
            .unwrap_or(base.siou.theta),
    )?;
    base.adam.iterations = args
        .iters
        .or(ctx.config.get("iters")?)
        .unwrap_or(base.adam.iterations);
    base.siou.ch = parse_ch(args.ch_interpretation.as_deref(), &ctx.config)?;
    if base.num_points == 0 {
        return Err(usage("--points must be at least 1"));
    }
    if base.adam.iterations == 0 {
        return Err(usage("--iters must be at least 1"));
    }
    base.validate()
        .map_err(|e| usage(format!("invalid configuration: {e}")))?;

    let mut manifest = ManifestBuilder::start("bench");
    let mut records = Vec::new();
    for kind in &losses {
        let mut config = base.clone();
        config.kind = *kind;
        let record = ctx
            .pool
            .install(|| run_record(&config))
            .map_err(|e| CliError::Runtime(anyhow::anyhow!("benchmark run failed: {e}")))?;

        manifest.write_output(
            &ctx.out_dir,
            &format!("series_{kind}.csv"),
            series_csv(&record.series()).as_bytes(),
        )?;
        let mut json_text = serde_json::to_string_pretty(&record)
            .map_err(|e| CliError::Runtime(e.into()))?;
        json_text.push('\n');
        manifest.write_output(&ctx.out_dir, &format!("run_{kind}.json"), json_text.as_bytes())?;
        println!(
            "{kind}: {} cases, E(0) = {}, E(final) = {}, flagged = {}",
            record.case_count,
            record.per_iteration_total.first().unwrap(),
            record.per_iteration_total.last().unwrap(),
            record.flagged_cases
        );
        records.push((*kind, record));
    }

    let columns: Vec<(LossKind, boxloss_core::ErrorSeries)> = records
        .iter()
        .map(|(kind, record)| (*kind, record.series()))
        .collect();
    let column_refs: Vec<(LossKind, &boxloss_core::ErrorSeries)> =
        columns.iter().map(|(k, s)| (*k, s)).collect();
    manifest.write_output(
        &ctx.out_dir,
        "comparison.csv",
        comparison_csv(&column_refs).as_bytes(),
    )?;

    let final_e: serde_json::Map<String, serde_json::Value> = records
        .iter()
        .map(|(k, r)| {
            (
                k.name().to_string(),
                json!(r.per_iteration_total.last().copied()),
            )
        })
        .collect();
    let summary = json!({
        "case_count": base.case_count(),
        "losses": losses.iter().map(|k| k.name()).collect::<Vec<_>>(),
        "final_e": final_e,
        "threads": ctx.threads,
    });
    let config_value = json!({
        "sim": base,
        "losses": losses.iter().map(|k| k.name()).collect::<Vec<_>>(),
    });
    manifest.finish(&ctx.out_dir, config_value, json!({"sim": base.seed}), summary)?;
    Ok(())
}
