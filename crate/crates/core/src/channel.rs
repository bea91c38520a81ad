//! Channel realizations, switching-driven diagonal channels and the
//! received-signal map `ȳ[p] = Σ_q H̄[pq] V̄[q] X[q] + z̄[p]`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::construct::{PrecoderSet, SchemeParams, SwitchingPlan};
use crate::error::{BiaError, Result};
use crate::seed::{self, Domain};

/// Largest integer channel value in exact mode (`2¹⁶`).
pub const EXACT_MAX: i64 = 1 << 16;
pub const FLOAT_LOW: f64 = 0.5;
pub const FLOAT_HIGH: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    ExactRational,
    Floating,
}

/// A real vector in either arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub enum Entries {
    Exact(Vec<i64>),
    Float(Vec<f64>),
}

impl Entries {
    pub fn len(&self) -> usize {
        match self {
            Entries::Exact(v) => v.len(),
            Entries::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Entries::Exact(v) => v.iter().map(|&x| x as f64).collect(),
            Entries::Float(v) => v.clone(),
        }
    }

    pub fn to_big(&self) -> Option<Vec<BigInt>> {
        match self {
            Entries::Exact(v) => Some(v.iter().map(|&x| BigInt::from(x)).collect()),
            Entries::Float(_) => None,
        }
    }

    pub fn to_rational(&self) -> Option<Vec<BigRational>> {
        self.to_big()
            .map(|v| v.into_iter().map(BigRational::from_integer).collect())
    }

    /// Slots with a nonzero entry (0-based).
    pub fn support(&self) -> Vec<usize> {
        match self {
            Entries::Exact(v) => (0..v.len()).filter(|&i| v[i] != 0).collect(),
            Entries::Float(v) => (0..v.len()).filter(|&i| v[i] != 0.0).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum Coefficients {
    Exact(Vec<i64>),
    Float(Vec<f64>),
}

/// `h[pq](m)` for every receiver `p`, transmitter `q` and mode `m`.
/// Immutable once drawn.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    users: usize,
    modes: usize,
    seed: u64,
    coeffs: Coefficients,
}

impl ChannelRealization {
    /// Build from a `[p][q][m]` table, checking the nonzero and per-link
    /// distinctness invariants.
    pub fn from_exact_table(seed: u64, table: &[Vec<Vec<i64>>]) -> Result<Self> {
        let (users, modes) = table_shape(table)?;
        let coeffs: Vec<i64> = table.iter().flatten().flatten().copied().collect();
        let ch = ChannelRealization {
            users,
            modes,
            seed,
            coeffs: Coefficients::Exact(coeffs),
        };
        ch.validate()?;
        Ok(ch)
    }

    pub fn from_float_table(seed: u64, table: &[Vec<Vec<f64>>]) -> Result<Self> {
        let (users, modes) = table_shape(table)?;
        let coeffs: Vec<f64> = table.iter().flatten().flatten().copied().collect();
        let ch = ChannelRealization {
            users,
            modes,
            seed,
            coeffs: Coefficients::Float(coeffs),
        };
        ch.validate()?;
        Ok(ch)
    }

    fn validate(&self) -> Result<()> {
        for p in 0..self.users {
            for q in 0..self.users {
                let vals: Vec<f64> = (0..self.modes).map(|m| self.value_f64(p, q, m)).collect();
                if vals.iter().any(|v| *v == 0.0 || !v.is_finite()) {
                    return Err(BiaError::InvalidParams(format!(
                        "h[{}{}] has a zero or non-finite coefficient",
                        p + 1,
                        q + 1
                    )));
                }
                let distinct: HashSet<u64> = vals.iter().map(|v| v.to_bits()).collect();
                if distinct.len() != vals.len() {
                    return Err(BiaError::InvalidParams(format!(
                        "h[{}{}] repeats a value across modes",
                        p + 1,
                        q + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn representation(&self) -> Representation {
        match self.coeffs {
            Coefficients::Exact(_) => Representation::ExactRational,
            Coefficients::Float(_) => Representation::Floating,
        }
    }

    fn index(&self, p: usize, q: usize, m: usize) -> usize {
        (p * self.users + q) * self.modes + m
    }

    /// Exact coefficient, `None` in floating mode.
    pub fn exact(&self, p: usize, q: usize, m: usize) -> Option<i64> {
        match &self.coeffs {
            Coefficients::Exact(v) => Some(v[self.index(p, q, m)]),
            Coefficients::Float(_) => None,
        }
    }

    pub fn value_f64(&self, p: usize, q: usize, m: usize) -> f64 {
        match &self.coeffs {
            Coefficients::Exact(v) => v[self.index(p, q, m)] as f64,
            Coefficients::Float(v) => v[self.index(p, q, m)],
        }
    }

    /// Exact table as `[p][q][m]`.
    pub fn exact_table(&self) -> Option<Vec<Vec<Vec<i64>>>> {
        (0..self.users)
            .map(|p| {
                (0..self.users)
                    .map(|q| (0..self.modes).map(|m| self.exact(p, q, m)).collect())
                    .collect()
            })
            .collect()
    }

    pub fn float_table(&self) -> Vec<Vec<Vec<f64>>> {
        (0..self.users)
            .map(|p| {
                (0..self.users)
                    .map(|q| (0..self.modes).map(|m| self.value_f64(p, q, m)).collect())
                    .collect()
            })
            .collect()
    }

    /// Same channel promoted to floating point.
    pub fn to_floating(&self) -> ChannelRealization {
        ChannelRealization {
            users: self.users,
            modes: self.modes,
            seed: self.seed,
            coeffs: Coefficients::Float(
                (0..self.users * self.users * self.modes)
                    .map(|i| match &self.coeffs {
                        Coefficients::Exact(v) => v[i] as f64,
                        Coefficients::Float(v) => v[i],
                    })
                    .collect(),
            ),
        }
    }
}

fn table_shape<T>(table: &[Vec<Vec<T>>]) -> Result<(usize, usize)> {
    let users = table.len();
    let modes = table.first().and_then(|r| r.first()).map_or(0, Vec::len);
    if users == 0 || modes == 0 {
        return Err(BiaError::DimensionMismatch("empty channel table".into()));
    }
    for row in table {
        if row.len() != users || row.iter().any(|l| l.len() != modes) {
            return Err(BiaError::DimensionMismatch(format!(
                "channel table must be {users}x{users}x{modes}"
            )));
        }
    }
    Ok((users, modes))
}

/// Draw a generic channel: per link, `r` pairwise-distinct nonzero values.
/// Exact mode uses integers uniform on `[1, 2¹⁶]`; floating mode uses
/// `U[0.5, 2.0]`. Deterministic in `seed`.
pub fn draw_channel(params: &SchemeParams, seed: u64, representation: Representation) -> ChannelRealization {
    let k = params.users();
    let modes = params.order();
    let mut rng = seed::rng(seed, Domain::Channel, &[k as u64, modes as u64]);
    let coeffs = match representation {
        Representation::ExactRational => {
            let mut out = Vec::with_capacity(k * k * modes);
            for _ in 0..k * k {
                let mut link: Vec<i64> = Vec::with_capacity(modes);
                while link.len() < modes {
                    let v = rng.random_range(1..=EXACT_MAX);
                    if !link.contains(&v) {
                        link.push(v);
                    }
                }
                out.extend(link);
            }
            Coefficients::Exact(out)
        }
        Representation::Floating => {
            let mut out = Vec::with_capacity(k * k * modes);
            for _ in 0..k * k {
                let mut link: Vec<f64> = Vec::with_capacity(modes);
                while link.len() < modes {
                    let v = rng.random_range(FLOAT_LOW..=FLOAT_HIGH);
                    if !link.contains(&v) {
                        link.push(v);
                    }
                }
                out.extend(link);
            }
            Coefficients::Float(out)
        }
    };
    ChannelRealization {
        users: k,
        modes,
        seed,
        coeffs,
    }
}

fn check_index(what: &'static str, index: usize, max: usize) -> Result<()> {
    if index >= max {
        return Err(BiaError::IndexOutOfRange {
            what,
            index: index + 1,
            max,
        });
    }
    Ok(())
}

fn check_compatible(ch: &ChannelRealization, sw: &SwitchingPlan) -> Result<()> {
    if ch.users() != sw.users() || ch.modes() != sw.order() {
        return Err(BiaError::DimensionMismatch(format!(
            "channel is {} users / {} modes, switching plan {} users / {} modes",
            ch.users(),
            ch.modes(),
            sw.users(),
            sw.order()
        )));
    }
    Ok(())
}

/// Diagonal of `H̄[pq]`: slot `j` carries `h[pq](SW_p(j))`. Indices 0-based.
pub fn diagonal_channel(ch: &ChannelRealization, sw: &SwitchingPlan, p: usize, q: usize) -> Result<Entries> {
    check_compatible(ch, sw)?;
    check_index("receiver", p, ch.users())?;
    check_index("transmitter", q, ch.users())?;
    let slots = 0..sw.slots();
    Ok(match ch.representation() {
        Representation::ExactRational => Entries::Exact(
            slots
                .map(|j| ch.exact(p, q, sw.mode(j, p) as usize).expect("exact"))
                .collect(),
        ),
        Representation::Floating => Entries::Float(slots.map(|j| ch.value_f64(p, q, sw.mode(j, p) as usize)).collect()),
    })
}

/// `H̄[pq] v` for one precoder column as seen at one receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedVector {
    /// Transmitter, 0-based.
    pub source: usize,
    /// Precoder column, 0-based.
    pub column: usize,
    pub values: Entries,
}

/// Noiseless images of every precoder column at every receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedBasis {
    users: usize,
    slots: usize,
    representation: Representation,
    per_receiver: Vec<Vec<ReceivedVector>>,
}

impl ReceivedBasis {
    pub fn users(&self) -> usize {
        self.users
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn at(&self, receiver: usize) -> &[ReceivedVector] {
        &self.per_receiver[receiver]
    }

    /// `H̄[pq] v_d[q]`.
    pub fn vector(&self, receiver: usize, source: usize, column: usize) -> Option<&ReceivedVector> {
        self.per_receiver
            .get(receiver)?
            .iter()
            .find(|v| v.source == source && v.column == column)
    }
}

fn check_precoders(ch: &ChannelRealization, sw: &SwitchingPlan, precoders: &PrecoderSet) -> Result<()> {
    check_compatible(ch, sw)?;
    if precoders.users() != ch.users() || precoders.slots() != sw.slots() {
        return Err(BiaError::DimensionMismatch(format!(
            "precoders are {} users x {} slots, switching plan {} users x {} slots",
            precoders.users(),
            precoders.slots(),
            sw.users(),
            sw.slots()
        )));
    }
    Ok(())
}

pub fn received_basis(ch: &ChannelRealization, sw: &SwitchingPlan, precoders: &PrecoderSet) -> Result<ReceivedBasis> {
    check_precoders(ch, sw, precoders)?;
    let k = ch.users();
    let mut per_receiver = Vec::with_capacity(k);
    for p in 0..k {
        let mut list = Vec::new();
        for q in 0..k {
            let diag = diagonal_channel(ch, sw, p, q)?;
            for d in 0..precoders.streams(q) {
                let v = precoders.column(q, d);
                let values = match &diag {
                    Entries::Exact(h) => Entries::Exact(h.iter().zip(&v).map(|(h, &b)| h * b as i64).collect()),
                    Entries::Float(h) => Entries::Float(h.iter().zip(&v).map(|(h, &b)| h * b as f64).collect()),
                };
                list.push(ReceivedVector {
                    source: q,
                    column: d,
                    values,
                });
            }
        }
        per_receiver.push(list);
    }
    Ok(ReceivedBasis {
        users: k,
        slots: sw.slots(),
        representation: ch.representation(),
        per_receiver,
    })
}

fn check_symbols<T>(precoders: &PrecoderSet, symbols: &[Vec<T>]) -> Result<()> {
    if symbols.len() != precoders.users() {
        return Err(BiaError::DimensionMismatch(format!(
            "{} symbol lists for {} transmitters",
            symbols.len(),
            precoders.users()
        )));
    }
    for (q, s) in symbols.iter().enumerate() {
        if s.len() != precoders.streams(q) {
            return Err(BiaError::DimensionMismatch(format!(
                "transmitter {} sends {} symbols, precoder has {} columns",
                q + 1,
                s.len(),
                precoders.streams(q)
            )));
        }
    }
    Ok(())
}

/// Floating-point block transmission with i.i.d. Gaussian noise of variance
/// `noise_power` per slot. Noise for receiver `p` comes from stream
/// `(seed, noise, p)`.
pub fn transmit(
    precoders: &PrecoderSet,
    symbols: &[Vec<f64>],
    ch: &ChannelRealization,
    sw: &SwitchingPlan,
    noise_power: f64,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    check_precoders(ch, sw, precoders)?;
    check_symbols(precoders, symbols)?;
    if !(noise_power >= 0.0 && noise_power.is_finite()) {
        return Err(BiaError::InvalidParams(format!(
            "noise power {noise_power} must be >= 0"
        )));
    }
    let k = ch.users();
    let n = sw.slots();
    let mut out = Vec::with_capacity(k);
    for p in 0..k {
        let mut y = vec![0.0; n];
        for (q, xs) in symbols.iter().enumerate() {
            let h = diagonal_channel(ch, sw, p, q)?.to_f64();
            for (d, &x) in xs.iter().enumerate() {
                let v = precoders.column(q, d);
                for j in 0..n {
                    y[j] += h[j] * v[j] as f64 * x;
                }
            }
        }
        if noise_power > 0.0 {
            let normal = Normal::new(0.0, noise_power.sqrt()).expect("finite std-dev");
            let mut rng = seed::rng(seed, Domain::Noise, &[p as u64]);
            for yj in y.iter_mut() {
                *yj += normal.sample(&mut rng);
            }
        }
        out.push(y);
    }
    Ok(out)
}

/// Noiseless transmission in exact arithmetic.
pub fn transmit_exact(
    precoders: &PrecoderSet,
    symbols: &[Vec<BigRational>],
    ch: &ChannelRealization,
    sw: &SwitchingPlan,
) -> Result<Vec<Vec<BigRational>>> {
    check_precoders(ch, sw, precoders)?;
    check_symbols(precoders, symbols)?;
    if ch.representation() != Representation::ExactRational {
        return Err(BiaError::InvalidParams(
            "exact transmission needs an exact channel".into(),
        ));
    }
    let k = ch.users();
    let n = sw.slots();
    let mut out = Vec::with_capacity(k);
    for p in 0..k {
        let mut y = vec![BigRational::zero(); n];
        for (q, xs) in symbols.iter().enumerate() {
            let Some(h) = diagonal_channel(ch, sw, p, q)?.to_big() else {
                unreachable!("exact channel");
            };
            for (d, x) in xs.iter().enumerate() {
                let v = precoders.column(q, d);
                for j in 0..n {
                    if v[j] == 1 {
                        y[j] += x * BigRational::from_integer(h[j].clone());
                    }
                }
            }
        }
        out.push(y);
    }
    Ok(out)
}
