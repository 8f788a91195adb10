//! Retrocausal guessing game on the interferometer at `R = R_0`.
//!
//! A fair coin sets `theta = +-pi/2`. The agent guesses `+pi/2` after a
//! lone `D1` click (impossible for `theta = -pi/2`) and guesses at random
//! otherwise.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cavity::CavityCoeffs;
use crate::error::{Error, Result};

use super::interferometer::{interferometer, D1_D2_D3, D1_ONLY, D3_ONLY};
use super::GOLDEN_REFLECTIVITY;

/// Gain of any strategy without access to the future setting.
pub const CLASSICAL_BOUND: f64 = 0.5;

/// Trials are split into this many independently seeded chunks, so the
/// estimate does not depend on the worker count.
const CHUNKS: u64 = 64;

/// One cell of the joint distribution of setting, clicks and guess.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GameOutcome {
    pub theta: f64,
    pub pattern: String,
    pub guess: f64,
    pub joint_probability: f64,
}

/// Monte Carlo configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trials {
    pub count: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MonteCarlo {
    pub trials: u64,
    pub seed: u64,
    pub gain: f64,
    pub standard_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GameReport {
    pub reflectivity: f64,
    pub gain: f64,
    pub classical_bound: f64,
    pub postselected_gain: f64,
    pub joint: Vec<GameOutcome>,
    pub monte_carlo: Option<MonteCarlo>,
}

fn guess_probability(pattern: &str, guess: f64) -> f64 {
    if pattern == D1_ONLY {
        if guess > 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        0.5
    }
}

/// Joint distribution over `(theta, pattern, guess)`.
pub fn joint_distribution(cavity: &CavityCoeffs) -> Result<Vec<GameOutcome>> {
    let mut out = Vec::with_capacity(12);
    for theta in [FRAC_PI_2, -FRAC_PI_2] {
        let rep = interferometer(cavity, theta)?;
        for pattern in [D1_ONLY, D1_D2_D3, D3_ONLY] {
            for guess in [FRAC_PI_2, -FRAC_PI_2] {
                out.push(GameOutcome {
                    theta,
                    pattern: pattern.to_string(),
                    guess,
                    joint_probability: 0.5 * rep.get(pattern) * guess_probability(pattern, guess),
                });
            }
        }
    }
    Ok(out)
}

fn gain_of(joint: &[GameOutcome]) -> f64 {
    joint
        .iter()
        .filter(|o| o.guess == o.theta)
        .map(|o| o.joint_probability)
        .sum()
}

fn postselected(joint: &[GameOutcome]) -> f64 {
    let sel: Vec<&GameOutcome> = joint.iter().filter(|o| o.pattern == D1_ONLY).collect();
    let total: f64 = sel.iter().map(|o| o.joint_probability).sum();
    let wins: f64 = sel
        .iter()
        .filter(|o| o.guess == o.theta)
        .map(|o| o.joint_probability)
        .sum();
    wins / total
}

/// Sample the joint distribution; chunk `i` uses stream `i` of a ChaCha
/// generator seeded with `seed`.
pub fn monte_carlo(joint: &[GameOutcome], trials: Trials) -> Result<MonteCarlo> {
    if trials.count == 0 {
        return Err(Error::ZeroTrials);
    }
    let mut cumulative = Vec::with_capacity(joint.len());
    let mut acc = 0.0;
    for o in joint {
        acc += o.joint_probability;
        cumulative.push((acc, o.guess == o.theta));
    }
    let chunk = |i: u64| -> u64 {
        let n = trials.count / CHUNKS + u64::from(i < trials.count % CHUNKS);
        let mut rng = ChaCha8Rng::seed_from_u64(trials.seed);
        rng.set_stream(i);
        let mut wins = 0u64;
        for _ in 0..n {
            let u: f64 = rng.gen::<f64>() * acc;
            let idx = cumulative.partition_point(|&(c, _)| c <= u).min(cumulative.len() - 1);
            wins += u64::from(cumulative[idx].1);
        }
        wins
    };
    let wins: u64 = (0..CHUNKS)
        .into_par_iter()
        .map(chunk)
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    let gain = wins as f64 / trials.count as f64;
    Ok(MonteCarlo {
        trials: trials.count,
        seed: trials.seed,
        gain,
        standard_error: (gain * (1.0 - gain) / trials.count as f64).sqrt(),
    })
}

/// Analytic and (optionally) sampled gain at reflectivity `R`.
pub fn retro_game_at(reflectivity: f64, trials: Option<Trials>) -> Result<GameReport> {
    let cavity = CavityCoeffs::from_reflectivity(reflectivity)?;
    let joint = joint_distribution(&cavity)?;
    let monte_carlo = trials.map(|t| monte_carlo(&joint, t)).transpose()?;
    Ok(GameReport {
        reflectivity,
        gain: gain_of(&joint),
        classical_bound: CLASSICAL_BOUND,
        postselected_gain: postselected(&joint),
        joint,
        monte_carlo,
    })
}

/// The game at `R_0`, where a lone `D1` click certifies `theta = +pi/2`.
pub fn retro_game(trials: Option<Trials>) -> Result<GameReport> {
    retro_game_at(GOLDEN_REFLECTIVITY, trials)
}
