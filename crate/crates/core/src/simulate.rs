//! Zero-forcing decoding and high-SNR rate simulation.
//!
//! The rate of user `j` for one channel draw is the Gaussian-input log-det of
//! its post-projection channel,
//!
//! ```text
//! R_j = log2 det(I + ρ_s · Gᵀ P G) / n
//! ```
//!
//! where `G` stacks the desired images `H̄[jj] v_d[j]`, `P` projects onto the
//! orthogonal complement of every interfering image at `j`, and `ρ_s` is the
//! per-symbol power that makes the block average transmit power equal the
//! SNR under unit-power noise.

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{draw_channel, received_basis, Entries, ReceivedBasis, Representation};
use crate::construct::{Construction, PrecoderSet, SchemeParams};
use crate::dof::{dof_formula, to_f64};
use crate::error::{BiaError, Result};
use crate::linalg;
use crate::seed::{self, Domain};
use crate::verify::rank_of;

/// Default SNR ladder in dB.
pub const DEFAULT_SNR_DB: [f64; 5] = [40.0, 50.0, 60.0, 70.0, 80.0];
/// Number of top SNR points used by the slope fit.
pub const SLOPE_POINTS: usize = 3;
pub const MIN_SLOPE_SPAN_DB: f64 = 20.0;
pub const MIN_TOP_SNR_DB: f64 = 40.0;

fn split(received: &ReceivedBasis, j: usize) -> Result<(Vec<&Entries>, Vec<&Entries>)> {
    if j >= received.users() {
        return Err(BiaError::IndexOutOfRange {
            what: "receiver",
            index: j + 1,
            max: received.users(),
        });
    }
    let mut desired: Vec<(usize, &Entries)> = Vec::new();
    let mut interference = Vec::new();
    for v in received.at(j) {
        if v.source == j {
            desired.push((v.column, &v.values));
        } else {
            interference.push(&v.values);
        }
    }
    desired.sort_by_key(|(c, _)| *c);
    Ok((desired.into_iter().map(|(_, v)| v).collect(), interference))
}

/// `Gᵀ P G` and `Gᵀ P` for receiver `j`.
fn projected(received: &ReceivedBasis, j: usize) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (desired, interference) = split(received, j)?;
    let n = received.slots();
    let g = linalg::columns_to_matrix(&desired.iter().map(|v| v.to_f64()).collect::<Vec<_>>(), n);
    let p = linalg::complement_projector(&interference.iter().map(|v| v.to_f64()).collect::<Vec<_>>(), n);
    let gtp = g.transpose() * p;
    let gram = &gtp * &g;
    Ok((gram, gtp))
}

/// Project `observation` off the interference span at `j` and solve for the
/// desired symbols (floating point).
pub fn zero_force_decode(observation: &[f64], j: usize, received: &ReceivedBasis) -> Result<Vec<f64>> {
    if observation.len() != received.slots() {
        return Err(BiaError::DimensionMismatch(format!(
            "observation has {} slots, expected {}",
            observation.len(),
            received.slots()
        )));
    }
    let (gram, gtp) = projected(received, j)?;
    let rhs = &gtp * DVector::from_column_slice(observation);
    let x = linalg::solve_symmetric(&gram, &rhs).ok_or_else(|| BiaError::Decodability {
        receiver: j + 1,
        detail: "desired images are not separable from the interference span".into(),
    })?;
    Ok(x.iter().copied().collect())
}

/// Exact zero-forcing: multiply by a basis of the orthogonal complement of the
/// interference span, then solve the full-column-rank system exactly.
pub fn zero_force_decode_exact(
    observation: &[BigRational],
    j: usize,
    received: &ReceivedBasis,
) -> Result<Vec<BigRational>> {
    let n = received.slots();
    if observation.len() != n {
        return Err(BiaError::DimensionMismatch(format!(
            "observation has {} slots, expected {n}",
            observation.len()
        )));
    }
    let (desired, interference) = split(received, j)?;
    let to_q = |vs: &[&Entries]| -> Result<Vec<Vec<BigRational>>> {
        vs.iter()
            .map(|v| {
                v.to_rational()
                    .ok_or_else(|| BiaError::InvalidParams("exact decoding needs an exact received basis".into()))
            })
            .collect()
    };
    let desired = to_q(&desired)?;
    let interference = to_q(&interference)?;
    let complement = linalg::exact_orthogonal_complement(&interference, n);
    let dot = |w: &[BigRational], v: &[BigRational]| -> BigRational { w.iter().zip(v).map(|(a, b)| a * b).sum() };
    let projected_cols: Vec<Vec<BigRational>> = desired
        .iter()
        .map(|g| complement.iter().map(|w| dot(w, g)).collect())
        .collect();
    let projected_obs: Vec<BigRational> = complement.iter().map(|w| dot(w, observation)).collect();
    linalg::exact_solve(&projected_cols, &projected_obs).map_err(|e| BiaError::Decodability {
        receiver: j + 1,
        detail: e.to_string(),
    })
}

/// Interference-free desired dimensions at every receiver, from exact ranks.
pub fn free_dimensions(received: &ReceivedBasis) -> Result<Vec<usize>> {
    (0..received.users())
        .map(|j| {
            let (desired, interference) = split(received, j)?;
            let ri = rank_of(&interference, interference.len());
            let joint: Vec<&Entries> = desired.iter().chain(&interference).copied().collect();
            Ok(rank_of(&joint, joint.len()) - ri)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationConfig {
    pub params: SchemeParams,
    pub seeds: Vec<u64>,
    pub snr_db: Vec<f64>,
    pub trials_per_point: usize,
    /// Skip rates and report the rank-based DoF.
    pub noise_free: bool,
}

impl SimulationConfig {
    pub fn new(params: SchemeParams, seeds: Vec<u64>, snr_db: Vec<f64>, trials_per_point: usize) -> Self {
        SimulationConfig {
            params,
            seeds,
            snr_db,
            trials_per_point,
            noise_free: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(BiaError::InvalidParams("at least one seed is required".into()));
        }
        if self.trials_per_point == 0 {
            return Err(BiaError::InvalidParams("trials_per_point must be >= 1".into()));
        }
        if !self.noise_free {
            if self.snr_db.is_empty() {
                return Err(BiaError::InvalidParams("SNR list is empty".into()));
            }
            if self.snr_db.windows(2).any(|w| w[1] <= w[0]) || self.snr_db.iter().any(|s| !s.is_finite()) {
                return Err(BiaError::InvalidParams(
                    "SNR list must be finite and strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatePoint {
    pub snr_db: f64,
    /// Bits per slot.
    pub user_rates: Vec<f64>,
    pub sum_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateCurve {
    pub points: Vec<RatePoint>,
    /// DoF units; `None` when the SNR ladder cannot support a fit.
    pub slope_estimate: Option<f64>,
    pub target_dof: f64,
    pub draws: usize,
}

impl RateCurve {
    /// `snr_db,user,rate,sum_rate` rows; users are 1-based.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("snr_db,user,rate,sum_rate\n");
        for p in &self.points {
            for (u, rate) in p.user_rates.iter().enumerate() {
                out.push_str(&format!("{},{},{:.12},{:.12}\n", p.snr_db, u + 1, rate, p.sum_rate));
            }
        }
        out
    }
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Per-user `(Gram, per-symbol power scale)` for one draw.
fn draw_grams(construction: &Construction, seed: u64) -> Result<Vec<(DMatrix<f64>, f64)>> {
    let ch = draw_channel(&construction.params, seed, Representation::Floating);
    let received = received_basis(&ch, &construction.switching, &construction.precoders)?;
    let n = construction.params.slots() as f64;
    (0..construction.params.users())
        .map(|j| {
            let (gram, _) = projected(&received, j)?;
            Ok((gram, n / column_weight(&construction.precoders, j)))
        })
        .collect()
}

fn column_weight(precoders: &PrecoderSet, q: usize) -> f64 {
    precoders.matrix(q).to_rows().iter().flatten().map(|&b| b as f64).sum()
}

/// Average per-user rates over `seeds × trials` channel draws at every SNR
/// point. Draws run in parallel; the reduction is seed-ordered.
pub fn simulate_rates(config: &SimulationConfig) -> Result<RateCurve> {
    config.validate()?;
    let params = config.params;
    let construction = Construction::new(params)?;
    let n = params.slots() as f64;
    let target = to_f64(dof_formula(params.users() as u64, params.order() as u64)?);
    let draw_seeds: Vec<u64> = config
        .seeds
        .iter()
        .flat_map(|&s| (0..config.trials_per_point as u64).map(move |t| seed::derive(s, Domain::Trial, &[t])))
        .collect();

    if config.noise_free {
        let free: Vec<f64> = draw_seeds
            .par_iter()
            .map(|&s| {
                let ch = draw_channel(&params, s, Representation::ExactRational);
                let rb = received_basis(&ch, &construction.switching, &construction.precoders)?;
                Ok(free_dimensions(&rb)?.iter().sum::<usize>() as f64 / n)
            })
            .collect::<Result<_>>()?;
        let slope = free.iter().sum::<f64>() / free.len() as f64;
        return Ok(RateCurve {
            points: Vec::new(),
            slope_estimate: Some(slope),
            target_dof: target,
            draws: draw_seeds.len(),
        });
    }

    let per_draw: Vec<Vec<Vec<f64>>> = draw_seeds
        .par_iter()
        .map(|&s| {
            let grams = draw_grams(&construction, s)?;
            Ok(config
                .snr_db
                .iter()
                .map(|&db| {
                    let snr = db_to_linear(db);
                    grams
                        .iter()
                        .map(|(gram, scale)| linalg::log2_det_identity_plus(gram, snr * scale) / n)
                        .collect()
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let k = params.users();
    let draws = per_draw.len() as f64;
    let points: Vec<RatePoint> = config
        .snr_db
        .iter()
        .enumerate()
        .map(|(i, &db)| {
            let mut user_rates = vec![0.0; k];
            for draw in &per_draw {
                for (u, r) in draw[i].iter().enumerate() {
                    user_rates[u] += r;
                }
            }
            user_rates.iter_mut().for_each(|r| *r /= draws);
            RatePoint {
                snr_db: db,
                sum_rate: user_rates.iter().sum(),
                user_rates,
            }
        })
        .collect();
    let mut curve = RateCurve {
        points,
        slope_estimate: None,
        target_dof: target,
        draws: per_draw.len(),
    };
    curve.slope_estimate = estimate_dof_slope(&curve).ok();
    Ok(curve)
}

/// Least-squares slope of sum rate against `log2(SNR)` over the top
/// [`SLOPE_POINTS`] SNR points.
pub fn estimate_dof_slope(curve: &RateCurve) -> Result<f64> {
    let pts = &curve.points[curve.points.len().saturating_sub(SLOPE_POINTS)..];
    if pts.len() < 2 {
        return Err(BiaError::InsufficientSnrSpan(format!(
            "{} points, need at least 2",
            pts.len()
        )));
    }
    let lo = pts.first().expect("non-empty").snr_db;
    let hi = pts.last().expect("non-empty").snr_db;
    if hi - lo < MIN_SLOPE_SPAN_DB {
        return Err(BiaError::InsufficientSnrSpan(format!(
            "fit spans {lo}..{hi} dB, need {MIN_SLOPE_SPAN_DB} dB"
        )));
    }
    if hi < MIN_TOP_SNR_DB {
        return Err(BiaError::InsufficientSnrSpan(format!(
            "top point {hi} dB is below {MIN_TOP_SNR_DB} dB"
        )));
    }
    let xs: Vec<f64> = pts.iter().map(|p| db_to_linear(p.snr_db).log2()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.sum_rate).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeSummary {
    pub slope: Option<f64>,
    pub target_dof: f64,
    pub relative_error: Option<f64>,
}

impl From<&RateCurve> for SlopeSummary {
    fn from(c: &RateCurve) -> Self {
        SlopeSummary {
            slope: c.slope_estimate,
            target_dof: c.target_dof,
            relative_error: c.slope_estimate.map(|s| (s - c.target_dof).abs() / c.target_dof),
        }
    }
}
