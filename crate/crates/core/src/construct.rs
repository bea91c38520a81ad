//! Combinatorial construction of the basic matrix, the transmit precoders and
//! the receiver switching plan.
//!
//! Layout of the basic matrix `S` (n × K):
//!
//! ```text
//! S = [ A ; A ; … ; A ; B ]      (r − 1 copies of A = 1 − I)
//! ```
//!
//! `B` holds one row per r-subset `T` of users: the indicator of the
//! complement of `T`, so each row has exactly `K − r` ones. Rows follow the
//! lexicographic order of `T`; when fewer rows fit, the trailing ones are
//! dropped. Every precoder column is the Hadamard product of the `S` columns
//! indexed by the complement of some r-subset `T`, and that column is shared by
//! exactly the transmitters in `T`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binom, subsets, Subset};
use crate::dof::optimal_r;
use crate::error::{BiaError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionMode {
    /// `n = C(K−1, r) + r·C(K−1, r−1)`.
    #[default]
    PaperExact,
    /// `n = (r−1)K + C(K, r)`: every r-subset gets its own B row.
    Padded,
}

impl ConstructionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstructionMode::PaperExact => "paper-exact",
            ConstructionMode::Padded => "padded",
        }
    }
}

impl fmt::Display for ConstructionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ConstructionMode {
    type Err = BiaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-exact" | "exact" => Ok(ConstructionMode::PaperExact),
            "padded" => Ok(ConstructionMode::Padded),
            other => Err(BiaError::InvalidParams(format!(
                "unknown construction mode {other:?} (expected paper-exact or padded)"
            ))),
        }
    }
}

/// User count, alignment order and the derived slot count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SchemeParams {
    users: usize,
    order: usize,
    mode: ConstructionMode,
    slots: usize,
}

impl SchemeParams {
    /// Validate `(K, r, mode)` and compute `n`. `r` defaults to the DoF-optimal
    /// order.
    pub fn derive(users: usize, order: Option<usize>, mode: ConstructionMode) -> Result<Self> {
        if users == 0 {
            return Err(BiaError::InvalidParams("K must be at least 1".into()));
        }
        let order = order.unwrap_or_else(|| optimal_r(users as u64) as usize);
        if order == 0 || order > users {
            return Err(BiaError::InvalidParams(format!("r = {order} outside 1..={users}")));
        }
        let k = users;
        let r = order;
        let b_available = binom(k, r);
        let slots = match mode {
            ConstructionMode::PaperExact => {
                let n = binom(k - 1, r) + r * binom(k - 1, r - 1);
                let b_rows = n as i64 - ((r - 1) * k) as i64;
                let slack = b_rows - b_available as i64;
                if slack < -1 {
                    return Err(BiaError::Infeasible {
                        users: k,
                        order: r,
                        mode: mode.as_str(),
                        inequality: format!(
                            "n - (r-1)K - C(K,r) >= -1 fails: {n} - {} - {b_available} = {slack}",
                            (r - 1) * k
                        ),
                    });
                }
                if b_rows > b_available as i64 {
                    return Err(BiaError::Infeasible {
                        users: k,
                        order: r,
                        mode: mode.as_str(),
                        inequality: format!(
                            "n - (r-1)K <= C(K,r) fails: B needs {b_rows} distinct rows of weight {} but only {b_available} exist",
                            k - r
                        ),
                    });
                }
                n
            }
            ConstructionMode::Padded => (r - 1) * k + b_available,
        };
        Ok(SchemeParams {
            users,
            order,
            mode,
            slots,
        })
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mode(&self) -> ConstructionMode {
        self.mode
    }

    /// `n`, the block length in slots.
    pub fn slots(&self) -> usize {
        self.slots
    }

    /// Symbols per transmitter, `C(K−1, r−1)`.
    pub fn streams_per_user(&self) -> usize {
        binom(self.users - 1, self.order - 1)
    }

    /// Rows taken by the A blocks, `(r−1)K`.
    pub fn a_rows(&self) -> usize {
        (self.order - 1) * self.users
    }

    pub fn b_rows(&self) -> usize {
        self.slots - self.a_rows()
    }

    pub fn subset_count(&self) -> usize {
        binom(self.users, self.order)
    }
}

/// Row-major 0/1 matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinaryMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(BiaError::DimensionMismatch(format!(
                    "row {} has {} entries, expected {cols}",
                    i + 1,
                    row.len()
                )));
            }
            if row.iter().any(|&v| v > 1) {
                return Err(BiaError::DimensionMismatch(format!("row {} is not binary", i + 1)));
            }
            data.extend_from_slice(row);
        }
        Ok(BinaryMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_columns(n: usize, columns: &[Vec<u8>]) -> Self {
        let mut m = BinaryMatrix::zeros(n, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = BinaryMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }
}

/// The basic matrix `S` and its B block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisMatrix {
    entries: BinaryMatrix,
    b_block: BinaryMatrix,
    /// The r-subset owning each B row (the complement of the row's support).
    b_row_subsets: Vec<Subset>,
    a_block_count: usize,
}

impl BasisMatrix {
    pub fn entries(&self) -> &BinaryMatrix {
        &self.entries
    }

    pub fn b_block(&self) -> &BinaryMatrix {
        &self.b_block
    }

    pub fn b_row_subsets(&self) -> &[Subset] {
        &self.b_row_subsets
    }

    pub fn a_block_count(&self) -> usize {
        self.a_block_count
    }

    /// Reassemble from serialized parts; must equal what [`build_basis`]
    /// produces for `params`.
    pub fn from_parts(params: &SchemeParams, entries: BinaryMatrix, b_row_subsets: Vec<Subset>) -> Result<Self> {
        let expected = build_basis(params);
        if entries != expected.entries || b_row_subsets != expected.b_row_subsets {
            return Err(BiaError::ConstructionIntegrity(
                "basis matrix does not match the construction for its parameters".into(),
            ));
        }
        Ok(expected)
    }

    /// Column `S_j` (0-based `j`).
    pub fn generator(&self, j: usize) -> Vec<u8> {
        self.entries.column(j)
    }

    /// Entrywise product of the generators in `factors`; all ones when empty.
    pub fn hadamard(&self, factors: &Subset) -> Vec<u8> {
        (0..self.entries.rows())
            .map(|i| factors.members().iter().all(|&j| self.entries.get(i, j) == 1) as u8)
            .collect()
    }
}

pub fn build_basis(params: &SchemeParams) -> BasisMatrix {
    let k = params.users();
    let r = params.order();
    let n = params.slots();
    let mut s = BinaryMatrix::zeros(n, k);
    for block in 0..r - 1 {
        for q in 0..k {
            for col in 0..k {
                s.set(block * k + q, col, (q != col) as u8);
            }
        }
    }
    // Rows are listed by their zero set in lex order, which drops the
    // lex-smallest supports first when slots run short. Padded mode keeps
    // every row and lists them by ascending support instead.
    let mut b_row_subsets: Vec<Subset> = subsets(k, r).take(params.b_rows()).collect();
    if params.mode() == ConstructionMode::Padded {
        b_row_subsets.reverse();
    }
    let mut b = BinaryMatrix::zeros(b_row_subsets.len(), k);
    for (i, owner) in b_row_subsets.iter().enumerate() {
        for col in 0..k {
            let v = (!owner.contains(col)) as u8;
            b.set(i, col, v);
            s.set(params.a_rows() + i, col, v);
        }
    }
    BasisMatrix {
        entries: s,
        b_block: b,
        b_row_subsets,
        a_block_count: r - 1,
    }
}

/// Where a shared vector sits in each member transmitter's precoder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharedVector {
    pub vector: Vec<u8>,
    /// `(transmitter, column)` pairs, both 0-based, ordered by transmitter.
    pub columns: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecoderSet {
    slots: usize,
    matrices: Vec<BinaryMatrix>,
    /// The r-subset sharing each column, per transmitter.
    column_subsets: Vec<Vec<Subset>>,
    shared: BTreeMap<Subset, SharedVector>,
}

impl PrecoderSet {
    pub fn users(&self) -> usize {
        self.matrices.len()
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn matrix(&self, q: usize) -> &BinaryMatrix {
        &self.matrices[q]
    }

    pub fn column(&self, q: usize, d: usize) -> Vec<u8> {
        self.matrices[q].column(d)
    }

    pub fn streams(&self, q: usize) -> usize {
        self.matrices[q].cols()
    }

    pub fn column_subsets(&self, q: usize) -> &[Subset] {
        &self.column_subsets[q]
    }

    pub fn shared_index(&self) -> &BTreeMap<Subset, SharedVector> {
        &self.shared
    }

    pub fn shared(&self, subset: &Subset) -> Option<&SharedVector> {
        self.shared.get(subset)
    }

    /// Column of `subset`'s shared vector inside transmitter `q`'s precoder.
    pub fn column_of(&self, q: usize, subset: &Subset) -> Option<usize> {
        self.column_subsets[q].iter().position(|s| s == subset)
    }

    /// Rebuild from raw matrices and column labels (used when loading bundles).
    pub fn from_parts(matrices: Vec<BinaryMatrix>, column_subsets: Vec<Vec<Subset>>) -> Result<Self> {
        let slots = matrices.first().map_or(0, BinaryMatrix::rows);
        if matrices.len() != column_subsets.len() {
            return Err(BiaError::DimensionMismatch(
                "one subset list per transmitter is required".into(),
            ));
        }
        let mut shared: BTreeMap<Subset, SharedVector> = BTreeMap::new();
        for (q, (m, labels)) in matrices.iter().zip(&column_subsets).enumerate() {
            if m.rows() != slots || m.cols() != labels.len() {
                return Err(BiaError::DimensionMismatch(format!(
                    "precoder {} is {}x{}, labels {}",
                    q + 1,
                    m.rows(),
                    m.cols(),
                    labels.len()
                )));
            }
            check_distinct(q, m)?;
            for (d, subset) in labels.iter().enumerate() {
                if !subset.contains(q) {
                    return Err(BiaError::ConstructionIntegrity(format!(
                        "column {} of transmitter {} is labelled {subset}, which excludes it",
                        d + 1,
                        q + 1
                    )));
                }
                let v = m.column(d);
                let entry = shared.entry(subset.clone()).or_insert_with(|| SharedVector {
                    vector: v.clone(),
                    columns: Vec::new(),
                });
                if entry.vector != v {
                    return Err(BiaError::ConstructionIntegrity(format!(
                        "subset {subset} has differing vectors across transmitters"
                    )));
                }
                entry.columns.push((q, d));
            }
        }
        Ok(PrecoderSet {
            slots,
            matrices,
            column_subsets,
            shared,
        })
    }
}

fn check_distinct(q: usize, m: &BinaryMatrix) -> Result<()> {
    let mut seen = HashSet::new();
    for d in 0..m.cols() {
        if !seen.insert(m.column(d)) {
            return Err(BiaError::ConstructionIntegrity(format!(
                "transmitter {} has a duplicate precoder column at position {}",
                q + 1,
                d + 1
            )));
        }
    }
    Ok(())
}

pub fn build_precoders(basis: &BasisMatrix, params: &SchemeParams) -> Result<PrecoderSet> {
    let k = params.users();
    let n = params.slots();
    if basis.entries().rows() != n || basis.entries().cols() != k {
        return Err(BiaError::DimensionMismatch(format!(
            "basis is {}x{}, params need {n}x{k}",
            basis.entries().rows(),
            basis.entries().cols()
        )));
    }
    let mut column_subsets = vec![Vec::new(); k];
    let mut columns: Vec<Vec<Vec<u8>>> = vec![Vec::new(); k];
    for subset in subsets(k, params.order()) {
        let v = basis.hadamard(&subset.complement(k));
        for &q in subset.members() {
            column_subsets[q].push(subset.clone());
            columns[q].push(v.clone());
        }
    }
    let matrices = columns.iter().map(|cols| BinaryMatrix::from_columns(n, cols)).collect();
    let set = PrecoderSet::from_parts(matrices, column_subsets)?;
    if set.shared.len() != params.subset_count() {
        return Err(BiaError::ConstructionIntegrity(format!(
            "shared index covers {} subsets, expected {}",
            set.shared.len(),
            params.subset_count()
        )));
    }
    Ok(set)
}

/// Per-receiver antenna modes: `modes[slot][receiver]` in `0..r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchingPlan {
    order: usize,
    users: usize,
    modes: Vec<u8>,
}

impl SwitchingPlan {
    pub fn from_rows(order: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let users = rows.first().map_or(0, Vec::len);
        let mut modes = Vec::with_capacity(rows.len() * users);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != users {
                return Err(BiaError::DimensionMismatch(format!(
                    "switching row {} has {} entries, expected {users}",
                    i + 1,
                    row.len()
                )));
            }
            if let Some(bad) = row.iter().find(|&&m| m as usize >= order) {
                return Err(BiaError::DimensionMismatch(format!(
                    "switching row {} uses mode {bad} outside 0..{order}",
                    i + 1
                )));
            }
            modes.extend_from_slice(row);
        }
        Ok(SwitchingPlan { order, users, modes })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn slots(&self) -> usize {
        self.modes.len().checked_div(self.users).unwrap_or(0)
    }

    /// Mode of receiver `p` in slot `j` (both 0-based).
    pub fn mode(&self, j: usize, p: usize) -> u8 {
        self.modes[j * self.users + p]
    }

    /// `SW_p`.
    pub fn pattern(&self, p: usize) -> Vec<u8> {
        (0..self.slots()).map(|j| self.mode(j, p)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.modes.chunks(self.users.max(1)).map(<[u8]>::to_vec).collect()
    }
}

/// Diagonal constant of the `block`-th (0-based) switching block.
fn block_constant(block: usize) -> u8 {
    if block == 0 {
        0
    } else {
        (block + 1) as u8
    }
}

/// `SWᵀ = [A + c₁I, …, A + c_{r−1}I, B]` with `c₁ = 0`, `c_j = j`.
pub fn build_switching(params: &SchemeParams) -> SwitchingPlan {
    let k = params.users();
    let r = params.order();
    let basis = build_basis(params);
    let top = (r - 1) as u8;
    let mut rows = Vec::with_capacity(params.slots());
    for block in 0..r - 1 {
        let c = block_constant(block);
        for q in 0..k {
            rows.push((0..k).map(|p| if p == q { c } else { 1 }).collect());
        }
    }
    for i in 0..basis.b_block().rows() {
        // a single-mode antenna folds everything onto mode 0
        rows.push(basis.b_block().row(i).iter().map(|&b| b.min(top)).collect());
    }
    SwitchingPlan::from_rows(r, &rows).expect("block rule stays inside the mode alphabet")
}

/// Everything a scheme needs, built from one parameter set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub params: SchemeParams,
    pub basis: BasisMatrix,
    pub precoders: PrecoderSet,
    pub switching: SwitchingPlan,
}

impl Construction {
    pub fn new(params: SchemeParams) -> Result<Self> {
        let basis = build_basis(&params);
        let precoders = build_precoders(&basis, &params)?;
        let switching = build_switching(&params);
        Ok(Construction {
            params,
            basis,
            precoders,
            switching,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k: usize, r: Option<usize>, mode: ConstructionMode) -> SchemeParams {
        SchemeParams::derive(k, r, mode).unwrap()
    }

    #[test]
    fn derive_examples() {
        assert_eq!(params(5, Some(2), ConstructionMode::PaperExact).slots(), 14);
        let single = params(1, None, ConstructionMode::PaperExact);
        assert_eq!((single.order(), single.slots()), (1, 1));
        assert_eq!(params(4, Some(3), ConstructionMode::Padded).slots(), 12);
        assert_eq!(params(3, Some(2), ConstructionMode::PaperExact).slots(), 5);
        assert_eq!(params(5, None, ConstructionMode::PaperExact).order(), 2);
    }

    #[test]
    fn derive_rejects_bad_input() {
        assert!(matches!(
            SchemeParams::derive(0, None, ConstructionMode::PaperExact),
            Err(BiaError::InvalidParams(_))
        ));
        assert!(SchemeParams::derive(3, Some(4), ConstructionMode::Padded).is_err());
        assert!(SchemeParams::derive(3, Some(0), ConstructionMode::Padded).is_err());
    }

    #[test]
    fn paper_exact_rejects_deficit_below_minus_one() {
        // K=4, r=3: n = 10, B rows 2, C(4,3) = 4
        let err = SchemeParams::derive(4, Some(3), ConstructionMode::PaperExact).unwrap_err();
        match err {
            BiaError::Infeasible { inequality, .. } => assert!(inequality.contains(">= -1")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn paper_exact_rejects_surplus_b_rows() {
        // K=7, r=3: n = 65 needs 51 B rows but C(7,3) = 35
        let err = SchemeParams::derive(7, None, ConstructionMode::PaperExact).unwrap_err();
        match err {
            BiaError::Infeasible { inequality, .. } => {
                assert!(inequality.contains("51"), "{inequality}");
                assert!(inequality.contains("35"), "{inequality}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(params(7, None, ConstructionMode::Padded).slots(), 49);
    }

    #[test]
    fn single_user_basis() {
        let p = params(1, None, ConstructionMode::PaperExact);
        let basis = build_basis(&p);
        assert_eq!(basis.entries().to_rows(), vec![vec![0]]);
        let pre = build_precoders(&basis, &p).unwrap();
        assert_eq!(pre.matrix(0).to_rows(), vec![vec![1]]);
        assert_eq!(build_switching(&p).to_rows(), vec![vec![0]]);
    }

    #[test]
    fn padded_k4_r3_matches_listed_matrix() {
        let p = params(4, Some(3), ConstructionMode::Padded);
        let st = build_basis(&p).entries().transpose().to_rows();
        let expected: Vec<Vec<u8>> = vec![
            vec![0, 1, 1, 1, 0, 1, 1, 1, 1, 0, 0, 0],
            vec![1, 0, 1, 1, 1, 0, 1, 1, 0, 1, 0, 0],
            vec![1, 1, 0, 1, 1, 1, 0, 1, 0, 0, 1, 0],
            vec![1, 1, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1],
        ];
        assert_eq!(st, expected);
    }

    #[test]
    fn padded_k4_r3_switching_blocks() {
        let p = params(4, Some(3), ConstructionMode::Padded);
        let sw = build_switching(&p);
        for q in 0..4 {
            for col in 0..4 {
                assert_eq!(sw.mode(q, col), if q == col { 0 } else { 1 });
                assert_eq!(sw.mode(4 + q, col), if q == col { 2 } else { 1 });
            }
        }
        let alphabet: HashSet<u8> = sw.to_rows().into_iter().flatten().collect();
        assert_eq!(alphabet, HashSet::from([0, 1, 2]));
    }

    #[test]
    fn full_order_shares_one_all_ones_vector() {
        for k in 1..=5 {
            let p = params(k, Some(k), ConstructionMode::Padded);
            let c = Construction::new(p).unwrap();
            assert_eq!(c.precoders.shared_index().len(), 1);
            for q in 0..k {
                assert_eq!(c.precoders.streams(q), 1);
                assert!(c.precoders.column(q, 0).iter().all(|&v| v == 1));
            }
        }
    }

    #[test]
    fn r1_switching_is_single_mode() {
        let p = params(3, Some(1), ConstructionMode::PaperExact);
        let sw = build_switching(&p);
        assert!(sw.to_rows().iter().flatten().all(|&m| m == 0));
    }

    #[test]
    fn duplicate_columns_are_rejected() {
        let m = BinaryMatrix::from_columns(2, &[vec![1, 0], vec![1, 0]]);
        let labels = vec![vec![Subset::new(vec![0]), Subset::new(vec![0, 1])]];
        assert!(matches!(
            PrecoderSet::from_parts(vec![m], labels),
            Err(BiaError::ConstructionIntegrity(_))
        ));
    }

    #[test]
    fn switching_rejects_out_of_alphabet() {
        assert!(SwitchingPlan::from_rows(2, &[vec![0, 2]]).is_err());
    }
}
