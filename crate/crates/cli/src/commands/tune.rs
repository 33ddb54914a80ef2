//! `boxloss tune`: GA search for the SIoU shape exponent against a
//! reduced-size simulation fitness.

use super::Context;
use crate::error::{usage, CliError};
use crate::manifest::ManifestBuilder;
use crate::TuneArgs;
use boxloss_core::sim::SimConfig;
use boxloss_core::tuner::{tune_theta, GaConfig};
use serde_json::json;

pub fn run(args: TuneArgs) -> Result<(), CliError> {
    let ctx = Context::prepare(&args.common)?;

    let mut sim = SimConfig {
        num_points: 100,
        ..SimConfig::default()
    };
    sim.num_points = args
        .points
        .or(ctx.config.get("points")?)
        .unwrap_or(sim.num_points);
    sim.seed = args.seed.or(ctx.config.get("seed")?).unwrap_or(sim.seed);
    sim.adam.iterations = args
        .iters
        .or(ctx.config.get("iters")?)
        .unwrap_or(sim.adam.iterations);

    let mut ga = GaConfig::default();
    ga.seed = args
        .ga_seed
        .or(ctx.config.get("ga_seed")?)
        .unwrap_or(ga.seed);
    ga.population = args
        .population
        .or(ctx.config.get("population")?)
        .unwrap_or(ga.population);
    ga.generations = args
        .generations
        .or(ctx.config.get("generations")?)
        .unwrap_or(ga.generations);
    ga.mutation_sigma = args
        .sigma
        .or(ctx.config.get("sigma")?)
        .unwrap_or(ga.mutation_sigma);
    ga.crossover_rate = args
        .crossover
        .or(ctx.config.get("crossover")?)
        .unwrap_or(ga.crossover_rate);
    ga.fitness_threshold = args.threshold.or(ctx.config.get("threshold")?);
    if let Some(raw) = args
        .theta_bounds
        .as_deref()
        .map(str::to_string)
        .or(ctx.config.get("theta_bounds")?)
    {
        let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(usage(format!("--theta-bounds must be lo,hi, got `{raw}`")));
        }
        let lo = parts[0]
            .parse::<f64>()
            .map_err(|_| usage(format!("bad theta bound `{}`", parts[0])))?;
        let hi = parts[1]
            .parse::<f64>()
            .map_err(|_| usage(format!("bad theta bound `{}`", parts[1])))?;
        ga.theta_bounds = (lo, hi);
    }
    ga.validate()
        .map_err(|e| usage(format!("invalid GA configuration: {e}")))?;
    sim.validate()
        .map_err(|e| usage(format!("invalid simulation configuration: {e}")))?;

    let mut manifest = ManifestBuilder::start("tune");
    let result = ctx
        .pool
        .install(|| tune_theta(&ga, &sim))
        .map_err(|e| CliError::Runtime(anyhow::anyhow!("tuning failed: {e}")))?;

    println!(
        "best theta = {:.4}, best fitness = {:.4}, {} fitness evaluations",
        result.best_theta, result.best_fitness, result.evaluations
    );
    let document = json!({
        "result": result,
        "ga": ga,
        "sim": sim,
    });
    let mut json_text =
        serde_json::to_string_pretty(&document).map_err(|e| CliError::Runtime(e.into()))?;
    json_text.push('\n');
    manifest.write_output(&ctx.out_dir, "ga_result.json", json_text.as_bytes())?;
    manifest.finish(
        &ctx.out_dir,
        json!({"ga": ga, "sim": sim}),
        json!({"ga": ga.seed, "sim": sim.seed}),
        json!({
            "best_theta": result.best_theta,
            "best_fitness": result.best_fitness,
        }),
    )?;
    Ok(())
}
