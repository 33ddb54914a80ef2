//! Genetic-algorithm search for the shape-cost exponent.
//!
//! Fitness of a candidate `theta` is the final benchmark error of a SIoU
//! run with that exponent, so the whole search is deterministic given the
//! GA seed and the simulation seed. One generation is tournament selection
//! (size 2), blend crossover, Gaussian mutation clipped to the bounds, and
//! elitism of one.

use crate::rng::{below, normal, range_f64, substream, unit_f64};
use crate::sim::{run, SimConfig, SimError};
use crate::LossKind;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Search settings. The exponent is a single real gene; the operators are
/// written over `Vec<f64>` genomes so extending the search space stays
/// mechanical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    pub theta_bounds: (f64, f64),
    pub mutation_sigma: f64,
    pub crossover_rate: f64,
    /// Early stop once the best fitness drops below this.
    pub fitness_threshold: Option<f64>,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population: 16,
            generations: 20,
            theta_bounds: (2.0, 6.0),
            mutation_sigma: 0.3,
            crossover_rate: 0.5,
            fitness_threshold: None,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.population < 2 {
            return Err(SimError::Config("GA population must be at least 2".into()));
        }
        if self.generations < 1 {
            return Err(SimError::Config("GA generations must be at least 1".into()));
        }
        let (lo, hi) = self.theta_bounds;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(SimError::Config(format!(
                "theta bounds must be an ordered finite interval, got [{lo}, {hi}]"
            )));
        }
        if !(self.mutation_sigma >= 0.0 && self.mutation_sigma.is_finite()) {
            return Err(SimError::Config("mutation sigma must be non-negative".into()));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(SimError::Config("crossover rate must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Search outcome. `history` is the best-so-far fitness after each
/// generation, non-increasing by elitism.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaResult {
    pub best_theta: f64,
    pub best_fitness: f64,
    pub history: Vec<f64>,
    pub evaluations: usize,
}

/// Final benchmark error of a SIoU run with the given exponent.
///
/// The simulation seed (and therefore the point set) is shared across all
/// candidates, so fitness values are comparable and reproducible.
pub fn fitness(theta: f64, sim: &SimConfig) -> Result<f64, SimError> {
    let mut cfg = sim.clone();
    cfg.kind = LossKind::Siou;
    cfg.siou.theta = theta;
    let series = run(&cfg)?;
    Ok(*series.per_iteration_total.last().unwrap())
}

/// Blend crossover: a point sampled from the interval spanned by the two
/// parents, extended by half its width on each side.
fn blend(rng: &mut rand_chacha::ChaCha8Rng, a: f64, b: f64) -> f64 {
    const EXTENSION: f64 = 0.5;
    let w = range_f64(rng, -EXTENSION, 1.0 + EXTENSION);
    a + w * (b - a)
}

/// Runs the search. Candidate randomness is drawn from substreams keyed by
/// `(generation, slot)`, so the result is independent of evaluation order.
pub fn tune_theta(ga: &GaConfig, sim: &SimConfig) -> Result<GaResult, SimError> {
    ga.validate()?;
    sim.validate()?;
    let (lo, hi) = ga.theta_bounds;

    // fitness is deterministic in theta, so cache by bit pattern; elites
    // would otherwise be re-evaluated every generation
    let mut cache: HashMap<u64, f64> = HashMap::new();
    let mut evaluations = 0usize;
    let mut eval = |theta: f64| -> Result<f64, SimError> {
        if let Some(&f) = cache.get(&theta.to_bits()) {
            return Ok(f);
        }
        let f = fitness(theta, sim)?;
        cache.insert(theta.to_bits(), f);
        evaluations += 1;
        Ok(f)
    };

    let mut population: Vec<f64> = {
        let mut rng = substream(ga.seed, 0, u64::MAX);
        (0..ga.population).map(|_| range_f64(&mut rng, lo, hi)).collect()
    };
    let mut scores: Vec<f64> = Vec::with_capacity(ga.population);
    for &theta in &population {
        scores.push(eval(theta)?);
    }

    let best_index = |scores: &[f64]| {
        scores
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap()
    };

    let mut best = best_index(&scores);
    let mut best_theta = population[best];
    let mut best_fitness = scores[best];
    let mut history = Vec::with_capacity(ga.generations);

    for generation in 0..ga.generations {
        let mut next_population = Vec::with_capacity(ga.population);
        // elitism of one
        next_population.push(best_theta);
        for slot in 1..ga.population {
            let mut rng = substream(ga.seed, generation as u64 + 1, slot as u64);
            let tournament = |rng: &mut rand_chacha::ChaCha8Rng, scores: &[f64]| {
                let a = below(rng, scores.len());
                let b = below(rng, scores.len());
                if scores[a] <= scores[b] {
                    a
                } else {
                    b
                }
            };
            let p1 = population[tournament(&mut rng, &scores)];
            let p2 = population[tournament(&mut rng, &scores)];
            let mut child = if unit_f64(&mut rng) < ga.crossover_rate {
                blend(&mut rng, p1, p2)
            } else {
                p1
            };
            child += normal(&mut rng, ga.mutation_sigma);
            next_population.push(child.clamp(lo, hi));
        }

        population = next_population;
        scores.clear();
        for &theta in &population {
            scores.push(eval(theta)?);
        }

        best = best_index(&scores);
        if scores[best] < best_fitness {
            best_fitness = scores[best];
            best_theta = population[best];
        }
        history.push(best_fitness);

        if let Some(threshold) = ga.fitness_threshold {
            if best_fitness < threshold {
                break;
            }
        }
    }

    Ok(GaResult {
        best_theta,
        best_fitness,
        history,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regression::AdamConfig;

    fn tiny_sim() -> SimConfig {
        SimConfig {
            num_points: 2,
            seed: 42,
            scales: vec![1.0, 2.0],
            aspects: vec![0.5, 2.0],
            target_aspects: vec![1.0],
            adam: AdamConfig {
                iterations: 5,
                ..AdamConfig::default()
            },
            ..SimConfig::default()
        }
    }

    #[test]
    fn fitness_is_deterministic_and_nonnegative() {
        let sim = tiny_sim();
        let a = fitness(3.0, &sim).unwrap();
        let b = fitness(3.0, &sim).unwrap();
        assert_eq!(a, b);
        assert!(a >= 0.0);
    }

    #[test]
    fn fitness_finite_over_theta_grid() {
        let sim = tiny_sim();
        for i in 0..17 {
            let theta = 2.0 + i as f64 * 0.25;
            assert!(fitness(theta, &sim).unwrap().is_finite());
        }
    }

    #[test]
    fn no_variation_operators_means_no_movement() {
        // with zero mutation and zero crossover every child is a copy of an
        // existing individual, so the best cannot change across generations
        let sim = tiny_sim();
        let ga = GaConfig {
            population: 4,
            generations: 4,
            mutation_sigma: 0.0,
            crossover_rate: 0.0,
            seed: 21,
            ..GaConfig::default()
        };
        let result = tune_theta(&ga, &sim).unwrap();
        let first = result.history[0];
        assert!(result.history.iter().all(|&f| f == first));
        assert_eq!(result.best_fitness, first);
    }

    #[test]
    fn history_is_non_increasing() {
        let sim = tiny_sim();
        let ga = GaConfig {
            population: 6,
            generations: 5,
            seed: 3,
            ..GaConfig::default()
        };
        let result = tune_theta(&ga, &sim).unwrap();
        for pair in result.history.windows(2) {
            assert!(pair[1] <= pair[0]);
        }
        assert!(result.best_theta >= 2.0 && result.best_theta <= 6.0);
    }

    #[test]
    fn tuning_is_reproducible() {
        let sim = tiny_sim();
        let ga = GaConfig {
            population: 5,
            generations: 4,
            seed: 11,
            ..GaConfig::default()
        };
        assert_eq!(tune_theta(&ga, &sim).unwrap(), tune_theta(&ga, &sim).unwrap());
    }

    #[test]
    fn all_evaluated_thetas_stay_in_bounds() {
        let sim = tiny_sim();
        let ga = GaConfig {
            population: 6,
            generations: 4,
            mutation_sigma: 5.0,
            seed: 8,
            ..GaConfig::default()
        };
        let result = tune_theta(&ga, &sim).unwrap();
        assert!(result.best_theta >= 2.0 && result.best_theta <= 6.0);
    }

    #[test]
    fn threshold_stops_early() {
        let sim = tiny_sim();
        let ga = GaConfig {
            population: 4,
            generations: 50,
            fitness_threshold: Some(f64::INFINITY),
            ..GaConfig::default()
        };
        let result = tune_theta(&ga, &sim).unwrap();
        assert_eq!(result.history.len(), 1);
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let sim = tiny_sim();
        let bad = GaConfig {
            population: 1,
            ..GaConfig::default()
        };
        assert!(tune_theta(&bad, &sim).is_err());
        let bad = GaConfig {
            theta_bounds: (6.0, 2.0),
            ..GaConfig::default()
        };
        assert!(tune_theta(&bad, &sim).is_err());
    }
}
