//! Rank-based verification of a concrete (construction, channel) pair:
//! transmit-side independence, alignment of shared vectors outside their
//! subset, separability inside it, interference-free desired space, the
//! per-receiver dimension census and the converse counting audit.
//!
//! Every `check_*` has an `evaluate_*` twin that returns the measured report
//! without turning a failure into an error.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::channel::{received_basis, ChannelRealization, Entries, ReceivedBasis, Representation};
use crate::combinatorics::{binom, subsets, Subset};
use crate::construct::{Construction, ConstructionMode, PrecoderSet, SchemeParams};
use crate::error::{BiaError, Result};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankReport {
    pub check: &'static str,
    /// 1-based receiver or transmitter the check is about.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub user: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subset: Option<Subset>,
    pub expected_rank: usize,
    pub rank: usize,
    pub status: CheckStatus,
    /// Extra ranks or dependent columns (1-based) explaining the outcome.
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl RankReport {
    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }

    fn ensure(self) -> Result<Self> {
        if self.passed() {
            return Ok(self);
        }
        let detail = format!(
            "{}{}: rank {} expected {}{}",
            self.user.map(|u| format!("user {u}")).unwrap_or_default(),
            self.subset.as_ref().map(|s| format!(" subset {s}")).unwrap_or_default(),
            self.rank,
            self.expected_rank,
            if self.detail.is_empty() {
                String::new()
            } else {
                format!(" ({})", self.detail)
            }
        );
        if self.check == "desired-clean" {
            return Err(BiaError::Decodability {
                receiver: self.user.unwrap_or(0),
                detail,
            });
        }
        Err(BiaError::LemmaViolation {
            check: self.check,
            detail,
        })
    }
}

/// Rank of a set of received vectors. Exact vectors use fraction-free
/// elimination; floating vectors use the thresholded float rank and, when
/// that falls short of `expected`, are re-ranked exactly from their binary
/// values so a numerical near-miss is never reported as a violation.
pub fn rank_of(vectors: &[&Entries], expected: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let exact: Option<Vec<Vec<BigInt>>> = vectors.iter().map(|v| v.to_big()).collect();
    if let Some(cols) = exact {
        return linalg::exact_rank(&cols).expect("equal-length vectors");
    }
    let floats: Vec<Vec<f64>> = vectors.iter().map(|v| v.to_f64()).collect();
    let rank = linalg::float_rank(&floats).expect("equal-length vectors");
    if rank >= expected {
        return rank;
    }
    exact_rank_of_floats(&floats)
}

fn exact_rank_of_floats(cols: &[Vec<f64>]) -> usize {
    let mut rows: Vec<Vec<BigRational>> = cols
        .iter()
        .map(|c| {
            c.iter()
                .map(|&v| BigRational::from_float(v).expect("finite channel values"))
                .collect()
        })
        .collect();
    linalg::rref(&mut rows).len()
}

fn binary_entries(v: &[u8]) -> Entries {
    Entries::Exact(v.iter().map(|&b| b as i64).collect())
}

pub fn evaluate_tx_independence(precoders: &PrecoderSet, q: usize) -> Result<RankReport> {
    if q >= precoders.users() {
        return Err(BiaError::IndexOutOfRange {
            what: "transmitter",
            index: q + 1,
            max: precoders.users(),
        });
    }
    let cols: Vec<Vec<BigInt>> = (0..precoders.streams(q))
        .map(|d| precoders.column(q, d).iter().map(|&b| BigInt::from(b)).collect())
        .collect();
    let profile = linalg::exact_rank_profile(&cols)?;
    let expected = precoders.streams(q);
    let dependent = profile.dependent_columns(expected);
    Ok(RankReport {
        check: "tx-independence",
        user: Some(q + 1),
        subset: None,
        expected_rank: expected,
        rank: profile.rank,
        status: if profile.rank == expected {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        detail: if dependent.is_empty() {
            String::new()
        } else {
            format!(
                "dependent columns {:?}",
                dependent.iter().map(|d| d + 1).collect::<Vec<_>>()
            )
        },
    })
}

/// Columns of one transmitter's precoder are linearly independent.
pub fn check_tx_independence(precoders: &PrecoderSet, q: usize) -> Result<RankReport> {
    evaluate_tx_independence(precoders, q)?.ensure()
}

fn shared_images<'a>(
    received: &'a ReceivedBasis,
    precoders: &PrecoderSet,
    subset: &Subset,
    receiver: usize,
) -> Result<Vec<&'a Entries>> {
    let shared = precoders
        .shared(subset)
        .ok_or_else(|| BiaError::InvalidParams(format!("{subset} has no shared vector")))?;
    shared
        .columns
        .iter()
        .map(|&(m, col)| {
            received
                .vector(receiver, m, col)
                .map(|v| &v.values)
                .ok_or_else(|| BiaError::DimensionMismatch("received basis misses a precoder column".into()))
        })
        .collect()
}

pub fn evaluate_alignment(
    received: &ReceivedBasis,
    precoders: &PrecoderSet,
    subset: &Subset,
    receiver: usize,
) -> Result<RankReport> {
    let k = received.users();
    let mut report = RankReport {
        check: "alignment",
        user: Some(receiver + 1),
        subset: Some(subset.clone()),
        expected_rank: 1,
        rank: 0,
        status: CheckStatus::NotApplicable,
        detail: String::new(),
    };
    if subset.len() == k {
        report.detail = "no receiver outside the subset".into();
        return Ok(report);
    }
    if receiver >= k {
        return Err(BiaError::IndexOutOfRange {
            what: "receiver",
            index: receiver + 1,
            max: k,
        });
    }
    if subset.contains(receiver) {
        return Err(BiaError::InvalidParams(format!(
            "receiver {} belongs to {subset}",
            receiver + 1
        )));
    }
    let images = shared_images(received, precoders, subset, receiver)?;
    let rank = rank_of(&images, 1);
    let v = binary_entries(&precoders.shared(subset).expect("checked").vector);
    let mut with_v = images.clone();
    with_v.push(&v);
    let along = rank_of(&with_v, 1);
    report.rank = rank;
    report.status = if rank == 1 && along == 1 {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    if along != 1 {
        report.detail = format!("rank with the shared vector appended is {along}");
    }
    Ok(report)
}

/// Copies of `subset`'s shared vector collapse onto `span{v}` at a receiver
/// outside the subset.
pub fn check_alignment(
    received: &ReceivedBasis,
    precoders: &PrecoderSet,
    subset: &Subset,
    receiver: usize,
) -> Result<RankReport> {
    evaluate_alignment(received, precoders, subset, receiver)?.ensure()
}

pub fn evaluate_shared_independence(
    received: &ReceivedBasis,
    precoders: &PrecoderSet,
    subset: &Subset,
) -> Result<RankReport> {
    let r = subset.len();
    let mut worst = r;
    let mut per_receiver = Vec::new();
    for &l in subset.members() {
        let images = shared_images(received, precoders, subset, l)?;
        let rank = rank_of(&images, r);
        per_receiver.push(format!("{}:{rank}", l + 1));
        worst = worst.min(rank);
    }
    Ok(RankReport {
        check: "shared-independence",
        user: None,
        subset: Some(subset.clone()),
        expected_rank: r,
        rank: worst,
        status: if worst == r {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        detail: if worst == r {
            String::new()
        } else {
            format!("per receiver {}", per_receiver.join(" "))
        },
    })
}

/// At every member receiver the `r` copies of the shared vector are
/// independent.
pub fn check_shared_independence(
    received: &ReceivedBasis,
    precoders: &PrecoderSet,
    subset: &Subset,
) -> Result<RankReport> {
    evaluate_shared_independence(received, precoders, subset)?.ensure()
}

/// The vectors seen at receiver `j`, grouped.
struct Groups<'a> {
    desired: Vec<&'a Entries>,
    /// Copies of vectors shared with `j`, sent by other transmitters.
    shared_foreign_tx: Vec<&'a Entries>,
    /// One representative per r-subset not containing `j`.
    foreign: Vec<&'a Entries>,
}

fn groups<'a>(received: &'a ReceivedBasis, precoders: &PrecoderSet, j: usize) -> Result<Groups<'a>> {
    if j >= received.users() {
        return Err(BiaError::IndexOutOfRange {
            what: "receiver",
            index: j + 1,
            max: received.users(),
        });
    }
    let mut g = Groups {
        desired: Vec::new(),
        shared_foreign_tx: Vec::new(),
        foreign: Vec::new(),
    };
    for (subset, shared) in precoders.shared_index() {
        for (idx, &(m, col)) in shared.columns.iter().enumerate() {
            let v = &received
                .vector(j, m, col)
                .ok_or_else(|| BiaError::DimensionMismatch("received basis misses a precoder column".into()))?
                .values;
            if subset.contains(j) {
                if m == j {
                    g.desired.push(v);
                } else {
                    g.shared_foreign_tx.push(v);
                }
            } else if idx == 0 {
                g.foreign.push(v);
            }
        }
    }
    Ok(g)
}

pub fn evaluate_desired_clean(received: &ReceivedBasis, precoders: &PrecoderSet, j: usize) -> Result<RankReport> {
    let g = groups(received, precoders, j)?;
    let expected_desired = precoders.streams(j);
    let interference: Vec<&Entries> = g.shared_foreign_tx.iter().chain(&g.foreign).copied().collect();
    let rd = rank_of(&g.desired, expected_desired);
    let ri = rank_of(&interference, interference.len());
    let joint: Vec<&Entries> = g.desired.iter().chain(&interference).copied().collect();
    let rj = rank_of(&joint, rd + ri);
    let clean = rd == expected_desired && rj == rd + ri;
    Ok(RankReport {
        check: "desired-clean",
        user: Some(j + 1),
        subset: None,
        expected_rank: expected_desired + ri,
        rank: rj,
        status: if clean { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: format!(
            "desired {rd}, interference {ri}, joint {rj}; overlap {}",
            (rd + ri).saturating_sub(rj)
        ),
    })
}

/// `span(H̄[jj] V̄[j]) ∩ span(interference at j) = {0}` and the desired
/// images keep full rank.
pub fn check_desired_clean(received: &ReceivedBasis, precoders: &PrecoderSet, j: usize) -> Result<RankReport> {
    evaluate_desired_clean(received, precoders, j)?.ensure()
}

/// Per-receiver dimension accounting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionCensus {
    /// 1-based.
    pub receiver: usize,
    pub desired_dims: usize,
    pub shared_with_j_dims: usize,
    pub aligned_foreign_dims: usize,
    pub total_occupied: usize,
    pub slot_budget: usize,
}

impl DimensionCensus {
    pub fn as_tuple(&self) -> (usize, usize, usize, usize) {
        (
            self.desired_dims,
            self.shared_with_j_dims,
            self.aligned_foreign_dims,
            self.total_occupied,
        )
    }
}

/// Measure the census from exact ranks without judging it.
pub fn measure_census(received: &ReceivedBasis, precoders: &PrecoderSet, j: usize) -> Result<DimensionCensus> {
    let g = groups(received, precoders, j)?;
    let desired = rank_of(&g.desired, g.desired.len());
    let shared: Vec<&Entries> = g.desired.iter().chain(&g.shared_foreign_tx).copied().collect();
    let shared_rank = rank_of(&shared, shared.len());
    let all: Vec<&Entries> = shared.iter().chain(&g.foreign).copied().collect();
    let total = rank_of(&all, all.len());
    Ok(DimensionCensus {
        receiver: j + 1,
        desired_dims: desired,
        shared_with_j_dims: shared_rank,
        aligned_foreign_dims: total - shared_rank,
        total_occupied: total,
        slot_budget: received.slots(),
    })
}

/// Expected census `(C(K−1,r−1), r·C(K−1,r−1), C(K−1,r), sum)`.
pub fn expected_census(params: &SchemeParams) -> (usize, usize, usize, usize) {
    let k = params.users();
    let r = params.order();
    let d = binom(k - 1, r - 1);
    let f = binom(k - 1, r);
    (d, r * d, f, r * d + f)
}

pub fn dimension_census(
    received: &ReceivedBasis,
    precoders: &PrecoderSet,
    params: &SchemeParams,
    j: usize,
) -> Result<DimensionCensus> {
    let census = measure_census(received, precoders, j)?;
    validate_census(&census, params)?;
    Ok(census)
}

pub fn validate_census(census: &DimensionCensus, params: &SchemeParams) -> Result<()> {
    let (d, s, f, t) = expected_census(params);
    let receiver = census.receiver;
    let groups = [
        ("desired", d, census.desired_dims),
        ("shared-with-j", s, census.shared_with_j_dims),
        ("aligned-foreign", f, census.aligned_foreign_dims),
        ("total", t, census.total_occupied),
    ];
    for (group, expected, found) in groups {
        if expected != found {
            return Err(BiaError::Census {
                receiver,
                group,
                expected,
                found,
            });
        }
    }
    if census.total_occupied > census.slot_budget {
        return Err(BiaError::Census {
            receiver,
            group: "slot-budget",
            expected: census.slot_budget,
            found: census.total_occupied,
        });
    }
    if params.mode() == ConstructionMode::PaperExact && census.total_occupied != census.slot_budget {
        return Err(BiaError::Census {
            receiver,
            group: "slot-budget",
            expected: census.slot_budget,
            found: census.total_occupied,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConverseRow {
    pub receiver: usize,
    pub lhs: i64,
    pub slots: usize,
    pub slack: i64,
}

/// `Σ_i d_i − (r−1) Σ_{T ∌ j} d_T ≤ n` at every receiver, with `d_i` the
/// census desired dimension and `d_T = 1` for each shared vector.
pub fn audit_converse_inequalities(
    censuses: &[DimensionCensus],
    params: &SchemeParams,
    precoders: &PrecoderSet,
) -> Result<Vec<ConverseRow>> {
    let k = params.users();
    if censuses.len() != k {
        return Err(BiaError::DimensionMismatch(format!(
            "{} censuses for {k} receivers",
            censuses.len()
        )));
    }
    let sum_d: i64 = censuses.iter().map(|c| c.desired_dims as i64).sum();
    let r = params.order() as i64;
    let n = params.slots();
    let mut rows = Vec::with_capacity(k);
    for j in 0..k {
        let foreign = subsets(k, params.order())
            .filter(|t| !t.contains(j) && precoders.shared(t).is_some())
            .count() as i64;
        let lhs = sum_d - (r - 1) * foreign;
        let row = ConverseRow {
            receiver: j + 1,
            lhs,
            slots: n,
            slack: n as i64 - lhs,
        };
        if row.slack < 0 {
            return Err(BiaError::ConverseAudit {
                receiver: j + 1,
                lhs,
                slots: n,
            });
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Everything measured for one channel draw.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub representation: Representation,
    pub checks: Vec<RankReport>,
    pub censuses: Vec<DimensionCensus>,
    pub census_errors: Vec<String>,
    pub converse: Vec<ConverseRow>,
    pub converse_error: Option<String>,
    pub all_passed: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &RankReport> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// Run every check on one channel realization.
pub fn verify_realization(construction: &Construction, channel: &ChannelRealization) -> Result<VerificationReport> {
    let params = &construction.params;
    let pre = &construction.precoders;
    let received = received_basis(channel, &construction.switching, pre)?;
    let k = params.users();
    let mut checks = Vec::new();
    for q in 0..k {
        checks.push(evaluate_tx_independence(pre, q)?);
    }
    for subset in subsets(k, params.order()) {
        if subset.len() == k {
            checks.push(evaluate_alignment(&received, pre, &subset, 0)?);
        }
        for l in (0..k).filter(|l| !subset.contains(*l)) {
            checks.push(evaluate_alignment(&received, pre, &subset, l)?);
        }
        checks.push(evaluate_shared_independence(&received, pre, &subset)?);
    }
    for j in 0..k {
        checks.push(evaluate_desired_clean(&received, pre, j)?);
    }
    let mut censuses = Vec::with_capacity(k);
    let mut census_errors = Vec::new();
    for j in 0..k {
        let c = measure_census(&received, pre, j)?;
        if let Err(e) = validate_census(&c, params) {
            census_errors.push(e.to_string());
        }
        censuses.push(c);
    }
    let (converse, converse_error) = match audit_converse_inequalities(&censuses, params, pre) {
        Ok(rows) => (rows, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    let all_passed = checks.iter().all(RankReport::passed)
        && census_errors.is_empty()
        && converse_error.is_none()
        && converse
            .iter()
            .all(|row| params.mode() != ConstructionMode::PaperExact || row.slack == 0);
    Ok(VerificationReport {
        seed: channel.seed(),
        representation: channel.representation(),
        checks,
        censuses,
        census_errors,
        converse,
        converse_error,
        all_passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::draw_channel;

    fn setup(k: usize, r: usize, mode: ConstructionMode, seed: u64) -> (Construction, ReceivedBasis) {
        let p = SchemeParams::derive(k, Some(r), mode).unwrap();
        let c = Construction::new(p).unwrap();
        let ch = draw_channel(&p, seed, Representation::ExactRational);
        let rb = received_basis(&ch, &c.switching, &c.precoders).unwrap();
        (c, rb)
    }

    fn set(one_based: &[usize]) -> Subset {
        Subset::from_one_based(one_based).unwrap()
    }

    #[test]
    fn tx_independence_examples() {
        let (c, _) = setup(5, 2, ConstructionMode::PaperExact, 1);
        assert_eq!(check_tx_independence(&c.precoders, 0).unwrap().rank, 4);
        let (c, _) = setup(1, 1, ConstructionMode::PaperExact, 1);
        assert_eq!(check_tx_independence(&c.precoders, 0).unwrap().rank, 1);
        let (c, _) = setup(7, 3, ConstructionMode::Padded, 1);
        assert_eq!(check_tx_independence(&c.precoders, 3).unwrap().rank, 15);
    }

    #[test]
    fn alignment_examples() {
        let (c, rb) = setup(5, 2, ConstructionMode::PaperExact, 4);
        let rep = check_alignment(&rb, &c.precoders, &set(&[2, 3]), 0).unwrap();
        assert_eq!(rep.rank, 1);
        let (c, rb) = setup(4, 2, ConstructionMode::PaperExact, 4);
        assert_eq!(check_alignment(&rb, &c.precoders, &set(&[3, 4]), 1).unwrap().rank, 1);
        let (c, rb) = setup(3, 3, ConstructionMode::Padded, 4);
        let rep = check_alignment(&rb, &c.precoders, &set(&[1, 2, 3]), 0).unwrap();
        assert_eq!(rep.status, CheckStatus::NotApplicable);
    }

    #[test]
    fn alignment_rejects_member_receiver() {
        let (c, rb) = setup(4, 2, ConstructionMode::PaperExact, 4);
        assert!(matches!(
            check_alignment(&rb, &c.precoders, &set(&[1, 2]), 0),
            Err(BiaError::InvalidParams(_))
        ));
    }

    #[test]
    fn shared_independence_examples() {
        let (c, rb) = setup(5, 2, ConstructionMode::PaperExact, 2);
        assert_eq!(
            check_shared_independence(&rb, &c.precoders, &set(&[1, 2]))
                .unwrap()
                .rank,
            2
        );
        let (c, rb) = setup(4, 1, ConstructionMode::PaperExact, 2);
        assert_eq!(
            check_shared_independence(&rb, &c.precoders, &set(&[3])).unwrap().rank,
            1
        );
        let (c, rb) = setup(6, 2, ConstructionMode::PaperExact, 2);
        assert_eq!(
            check_shared_independence(&rb, &c.precoders, &set(&[5, 6]))
                .unwrap()
                .rank,
            2
        );
    }

    #[test]
    fn desired_clean_k3_receiver_two() {
        let (c, rb) = setup(3, 2, ConstructionMode::PaperExact, 5);
        let rep = check_desired_clean(&rb, &c.precoders, 1).unwrap();
        assert_eq!(rep.rank, 5);
        let (c, rb) = setup(1, 1, ConstructionMode::PaperExact, 5);
        assert!(check_desired_clean(&rb, &c.precoders, 0).is_ok());
    }

    #[test]
    fn desired_space_polluted_outside_unserved_subset() {
        // the dropped B row belongs to {4,5}; receivers 1..3 see its
        // aligned copy fall inside the span of their shared vectors
        let (c, rb) = setup(5, 2, ConstructionMode::PaperExact, 5);
        for j in 0..3 {
            let rep = evaluate_desired_clean(&rb, &c.precoders, j).unwrap();
            assert_eq!(rep.status, CheckStatus::Fail);
            assert_eq!(rep.rank, 13);
            assert!(matches!(
                check_desired_clean(&rb, &c.precoders, j),
                Err(BiaError::Decodability { .. })
            ));
        }
        for j in 3..5 {
            assert_eq!(check_desired_clean(&rb, &c.precoders, j).unwrap().rank, 14);
        }
    }

    #[test]
    fn census_values() {
        let (c, rb) = setup(5, 2, ConstructionMode::PaperExact, 8);
        let census = dimension_census(&rb, &c.precoders, &c.params, 4).unwrap();
        assert_eq!(census.as_tuple(), (4, 8, 6, 14));
        let measured = measure_census(&rb, &c.precoders, 0).unwrap();
        assert_eq!(measured.as_tuple(), (4, 8, 5, 13));
        assert_eq!(
            dimension_census(&rb, &c.precoders, &c.params, 0).unwrap_err(),
            BiaError::Census {
                receiver: 1,
                group: "aligned-foreign",
                expected: 6,
                found: 5
            }
        );
        let (c, rb) = setup(1, 1, ConstructionMode::PaperExact, 8);
        let census = dimension_census(&rb, &c.precoders, &c.params, 0).unwrap();
        assert_eq!(census.as_tuple(), (1, 1, 0, 1));
    }

    #[test]
    fn padded_r2_census_is_complete() {
        let (c, rb) = setup(5, 2, ConstructionMode::Padded, 8);
        for j in 0..5 {
            let census = dimension_census(&rb, &c.precoders, &c.params, j).unwrap();
            assert_eq!(census.as_tuple(), (4, 8, 6, 14));
            assert_eq!(census.slot_budget, 15);
        }
    }

    #[test]
    fn converse_audit_examples() {
        for (k, n) in [(5, 14), (3, 5), (1, 1)] {
            let (c, rb) = setup(k, if k == 1 { 1 } else { 2 }, ConstructionMode::PaperExact, 3);
            let censuses: Vec<_> = (0..k).map(|j| measure_census(&rb, &c.precoders, j).unwrap()).collect();
            let rows = audit_converse_inequalities(&censuses, &c.params, &c.precoders).unwrap();
            for row in rows {
                assert_eq!((row.lhs, row.slack), (n, 0));
            }
        }
    }

    #[test]
    fn float_rank_falls_back_to_exact() {
        let a = Entries::Float(vec![1.0, 1.0 + 1e-15]);
        let b = Entries::Float(vec![1.0, 1.0]);
        // numerically dependent, exactly independent
        assert_eq!(rank_of(&[&a, &b], 2), 2);
        assert_eq!(rank_of(&[&b, &b], 2), 1);
    }

    #[test]
    fn full_report_k2() {
        let p = SchemeParams::derive(2, None, ConstructionMode::PaperExact).unwrap();
        let c = Construction::new(p).unwrap();
        let ch = draw_channel(&p, 1, Representation::ExactRational);
        let rep = verify_realization(&c, &ch).unwrap();
        assert!(rep.all_passed, "{rep:?}");
    }
}
