//! `boxloss gradcheck`: randomized analytic-vs-numeric gradient agreement,
//! exiting 1 when any kind exceeds the 1e-6 relative-error threshold.

use super::{resolve_losses, Context};
use crate::error::{usage, CliError};
use crate::manifest::ManifestBuilder;
use crate::GradcheckArgs;
use boxloss_core::gradcheck::{sweep, GradCheckConfig};
use boxloss_core::LossKind;
use serde_json::json;

const MAX_REL_ERROR: f64 = 1e-6;

pub fn run(args: GradcheckArgs) -> Result<(), CliError> {
    let ctx = Context::prepare(&args.common)?;
    let losses = resolve_losses(&args.losses, &ctx.config, &LossKind::ALL)?;
    let samples = args
        .samples
        .or(ctx.config.get("samples")?)
        .unwrap_or(1_000);
    let seed = args.seed.or(ctx.config.get("seed")?).unwrap_or(0);
    let step = args.h.or(ctx.config.get("h")?).unwrap_or(1e-6);
    if samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(usage(format!("--h must be a positive step, got {step}")));
    }

    let mut manifest = ManifestBuilder::start("gradcheck");
    let mut reports = Vec::new();
    let mut failed = None;
    for kind in &losses {
        let mut config = GradCheckConfig::new(*kind, samples, seed);
        config.step = step;
        let report = sweep(&config);
        println!(
            "{kind}: {} checked, {} kink-skipped, max rel error {:.3e}, mean {:.3e}",
            report.checked, report.kinks_skipped, report.max_rel_error, report.mean_rel_error
        );
        if report.max_rel_error > MAX_REL_ERROR && failed.is_none() {
            failed = Some((*kind, report.worst.clone()));
        }
        reports.push(report);
    }

    let mut json_text = serde_json::to_string_pretty(&reports)
        .map_err(|e| CliError::Runtime(e.into()))?;
    json_text.push('\n');
    manifest.write_output(&ctx.out_dir, "gradcheck.json", json_text.as_bytes())?;

    let worst_overall = reports
        .iter()
        .map(|r| r.max_rel_error)
        .fold(0.0f64, f64::max);
    let config_value = json!({
        "losses": losses.iter().map(|k| k.name()).collect::<Vec<_>>(),
        "samples": samples,
        "seed": seed,
        "h": step,
    });
    manifest.finish(
        &ctx.out_dir,
        config_value,
        json!({"pairs": seed}),
        json!({"max_rel_error": worst_overall, "threshold": MAX_REL_ERROR}),
    )?;

    if let Some((kind, worst)) = failed {
        if let Some(pair) = worst {
            eprintln!(
                "worst offending pair for {kind}: pred = {:?}, gt = {:?}, rel error {:.3e}",
                pair.pred, pair.gt, pair.rel_error
            );
        }
        return Err(CliError::Check(format!(
            "{kind} gradient disagrees with finite differences beyond {MAX_REL_ERROR:e}"
        )));
    }
    Ok(())
}
