//! Closed-form sum-DoF mathematics: `d(r) = K r / (r² − r + K)`, the optimal
//! order `r*`, the `√K / 2` asymptote and the B-row feasibility slack.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::combinatorics::{binomial_big, binomial_row};
use crate::error::{BiaError, Result};

/// Exact sum-DoF value.
pub type Dof = Ratio<i128>;

/// Largest K for which every `d(r)` comparison stays inside `i128`.
pub const MAX_USERS: u64 = 1_000_000_000;

fn check_domain(users: u64, order: u64) -> Result<()> {
    if users == 0 || users > MAX_USERS {
        return Err(BiaError::InvalidParams(format!("K = {users} outside 1..={MAX_USERS}")));
    }
    if order == 0 || order > users {
        return Err(BiaError::InvalidParams(format!("r = {order} outside 1..={users}")));
    }
    Ok(())
}

/// `K r / (r² − r + K)`.
pub fn dof_formula(users: u64, order: u64) -> Result<Dof> {
    check_domain(users, order)?;
    let k = users as i128;
    let r = order as i128;
    Ok(Ratio::new(k * r, r * r - r + k))
}

/// Smallest `r ≥ 1` with `r(r + 1) ≥ K`, i.e. `⌈(√(1+4K) − 1)/2⌉` without
/// floating-point ceilings.
pub fn optimal_r(users: u64) -> u64 {
    if users <= 1 {
        return 1;
    }
    let mut r = ((users as f64).sqrt() as u64).max(1);
    while r > 1 && (r - 1) * r >= users {
        r -= 1;
    }
    while r * (r + 1) < users {
        r += 1;
    }
    r
}

/// `sign(d(r+1) − d(r))` for `r = 1..K−1`. Errors unless the sequence is
/// non-negative then non-positive.
pub fn unimodality_witness(users: u64) -> Result<Vec<i8>> {
    check_domain(users, 1)?;
    let mut signs = Vec::with_capacity(users.saturating_sub(1) as usize);
    let mut prev = dof_formula(users, 1)?;
    for r in 1..users {
        let next = dof_formula(users, r + 1)?;
        let diff = next - prev;
        signs.push(if diff.is_zero() {
            0
        } else if diff.is_positive() {
            1
        } else {
            -1
        });
        prev = next;
    }
    let mut descending = false;
    for (i, &s) in signs.iter().enumerate() {
        if s < 0 {
            descending = true;
        } else if s > 0 && descending {
            return Err(BiaError::MathIntegrity(format!(
                "d(r) rises again at r = {} for K = {users}",
                i + 1
            )));
        }
    }
    Ok(signs)
}

/// `n − (r−1)K − C(K, r)` where `n = r C(K−1, r−1) + C(K−1, r)`. Pascal's
/// rule collapses this to `(r−1)(C(K−1, r−1) − K)`.
pub fn appendix_inequality(users: u64, order: u64) -> Result<BigInt> {
    check_domain(users, order)?;
    let (k, r) = (users, order);
    let slack = BigInt::from(r - 1) * (BigInt::from(binomial_big(k - 1, r - 1)) - BigInt::from(k));
    if r == optimal_r(k) && slack < BigInt::from(-1) {
        return Err(BiaError::MathIntegrity(format!(
            "slack {slack} < -1 at the optimal order for K = {k}"
        )));
    }
    Ok(slack)
}

/// Slack for every `r = 1..=K`, from two binomial rows.
pub fn appendix_slack_row(users: u64) -> Result<Vec<BigInt>> {
    check_domain(users, 1)?;
    let k = users;
    let prev = binomial_row(k - 1);
    let cur = binomial_row(k);
    let r_star = optimal_r(k);
    (1..=k)
        .map(|r| {
            let below = BigInt::from(prev[(r - 1) as usize].clone());
            let same = prev.get(r as usize).cloned().map(BigInt::from).unwrap_or_default();
            let slack =
                BigInt::from(r) * below + same - BigInt::from((r - 1) * k) - BigInt::from(cur[r as usize].clone());
            if r == r_star && slack < BigInt::from(-1) {
                return Err(BiaError::MathIntegrity(format!(
                    "slack {slack} < -1 at the optimal order for K = {k}"
                )));
            }
            Ok(slack)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DofReport {
    pub users: u64,
    pub r_star: u64,
    #[serde(serialize_with = "ser_ratio")]
    pub d_star: Dof,
    /// `d(r)` for `r = 1..=K`, index `r − 1`.
    #[serde(skip)]
    pub d_table: Vec<Dof>,
    pub asymptotic_ratio: f64,
}

fn ser_ratio<S: serde::Serializer>(v: &Dof, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", v.numer(), v.denom()))
}

pub fn dof_report(users: u64) -> Result<DofReport> {
    check_domain(users, 1)?;
    let d_table: Vec<Dof> = (1..=users).map(|r| dof_formula(users, r)).collect::<Result<_>>()?;
    let r_star = optimal_r(users);
    let d_star = d_table[(r_star - 1) as usize];
    if let Some(r) = d_table.iter().position(|d| *d > d_star) {
        return Err(BiaError::MathIntegrity(format!(
            "d({}) exceeds d(r*) = d({r_star}) for K = {users}",
            r + 1
        )));
    }
    Ok(DofReport {
        users,
        r_star,
        d_star,
        d_table,
        asymptotic_ratio: ratio_to_half_sqrt(users, d_star),
    })
}

/// `d / (√K / 2)`.
pub fn ratio_to_half_sqrt(users: u64, d: Dof) -> f64 {
    to_f64(d) / ((users as f64).sqrt() / 2.0)
}

pub fn to_f64(d: Dof) -> f64 {
    d.numer().to_f64().unwrap_or(f64::NAN) / d.denom().to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticRow {
    pub users: u64,
    pub r_star: u64,
    pub d_star_num: i128,
    pub d_star_den: i128,
    pub d_star_float: f64,
    pub ratio_to_half_sqrt_k: f64,
}

/// Optimal DoF and its ratio to `√K / 2` for each K (no argmax scan, so large
/// K stays cheap).
pub fn asymptotic_check(users: &[u64]) -> Result<Vec<AsymptoticRow>> {
    users
        .iter()
        .map(|&k| {
            let r = optimal_r(k);
            let d = dof_formula(k, r)?;
            Ok(AsymptoticRow {
                users: k,
                r_star: r,
                d_star_num: *d.numer(),
                d_star_den: *d.denom(),
                d_star_float: to_f64(d),
                ratio_to_half_sqrt_k: ratio_to_half_sqrt(k, d),
            })
        })
        .collect()
}

/// Errors unless the ratios strictly decrease along the table.
pub fn check_monotone_convergence(rows: &[AsymptoticRow]) -> Result<()> {
    for w in rows.windows(2) {
        if w[1].ratio_to_half_sqrt_k >= w[0].ratio_to_half_sqrt_k {
            return Err(BiaError::MathIntegrity(format!(
                "ratio does not decrease from K = {} ({}) to K = {} ({})",
                w[0].users, w[0].ratio_to_half_sqrt_k, w[1].users, w[1].ratio_to_half_sqrt_k
            )));
        }
    }
    Ok(())
}

/// `K, r*, num, den, float, ratio` lines with a header.
pub fn dof_table_csv(rows: &[AsymptoticRow]) -> String {
    let mut out = String::from("K,r_star,d_star_num,d_star_den,d_star_float,ratio_to_half_sqrtK\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{:.12},{:.12}\n",
            row.users, row.r_star, row.d_star_num, row.d_star_den, row.d_star_float, row.ratio_to_half_sqrt_k
        ));
    }
    out
}
