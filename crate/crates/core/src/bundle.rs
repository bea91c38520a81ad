//! Canonical JSON documents for constructions and channel tables.
//!
//! Matrices are row-major arrays of 0/1 (or mode) integers; user, column and
//! subset indices are 1-based. Every document carries `"schema": 1`.

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelRealization, Representation};
use crate::combinatorics::Subset;
use crate::construct::{
    BasisMatrix, BinaryMatrix, Construction, ConstructionMode, PrecoderSet, SchemeParams, SwitchingPlan,
};
use crate::error::{BiaError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsDoc {
    pub users: usize,
    pub order: usize,
    pub mode: ConstructionMode,
    pub slots: usize,
}

impl From<&SchemeParams> for ParamsDoc {
    fn from(p: &SchemeParams) -> Self {
        ParamsDoc {
            users: p.users(),
            order: p.order(),
            mode: p.mode(),
            slots: p.slots(),
        }
    }
}

impl ParamsDoc {
    pub fn to_params(&self) -> Result<SchemeParams> {
        let p = SchemeParams::derive(self.users, Some(self.order), self.mode)?;
        if p.slots() != self.slots {
            return Err(BiaError::Bundle(format!(
                "slots {} disagree with derived n = {}",
                self.slots,
                p.slots()
            )));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDoc {
    pub a_block_count: usize,
    pub entries: Vec<Vec<u8>>,
    pub b_block: Vec<Vec<u8>>,
    /// r-subset owning each B row.
    pub b_row_subsets: Vec<Subset>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecoderDoc {
    pub transmitter: usize,
    /// r-subset sharing each column, in column order.
    pub subsets: Vec<Subset>,
    pub matrix: Vec<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberDoc {
    pub transmitter: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharedDoc {
    pub subset: Subset,
    pub vector: Vec<u8>,
    pub members: Vec<MemberDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchingDoc {
    pub order: usize,
    pub matrix: Vec<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionBundle {
    pub schema: u32,
    pub params: ParamsDoc,
    pub basis: BasisDoc,
    pub precoders: Vec<PrecoderDoc>,
    pub shared_index: Vec<SharedDoc>,
    pub switching: SwitchingDoc,
}

impl From<&Construction> for ConstructionBundle {
    fn from(c: &Construction) -> Self {
        let pre = &c.precoders;
        ConstructionBundle {
            schema: SCHEMA_VERSION,
            params: ParamsDoc::from(&c.params),
            basis: BasisDoc {
                a_block_count: c.basis.a_block_count(),
                entries: c.basis.entries().to_rows(),
                b_block: c.basis.b_block().to_rows(),
                b_row_subsets: c.basis.b_row_subsets().to_vec(),
            },
            precoders: (0..pre.users())
                .map(|q| PrecoderDoc {
                    transmitter: q + 1,
                    subsets: pre.column_subsets(q).to_vec(),
                    matrix: pre.matrix(q).to_rows(),
                })
                .collect(),
            shared_index: pre
                .shared_index()
                .iter()
                .map(|(subset, shared)| SharedDoc {
                    subset: subset.clone(),
                    vector: shared.vector.clone(),
                    members: shared
                        .columns
                        .iter()
                        .map(|&(q, d)| MemberDoc {
                            transmitter: q + 1,
                            column: d + 1,
                        })
                        .collect(),
                })
                .collect(),
            switching: SwitchingDoc {
                order: c.switching.order(),
                matrix: c.switching.to_rows(),
            },
        }
    }
}

impl ConstructionBundle {
    /// Validate and rebuild. The precoders and switching plan are taken from
    /// the document as written; the basis must match its parameters.
    pub fn to_construction(&self) -> Result<Construction> {
        if self.schema != SCHEMA_VERSION {
            return Err(BiaError::Bundle(format!("unsupported schema {}", self.schema)));
        }
        let params = self.params.to_params()?;
        let basis = BasisMatrix::from_parts(
            &params,
            BinaryMatrix::from_rows(&self.basis.entries)?,
            self.basis.b_row_subsets.clone(),
        )?;
        if self.precoders.len() != params.users() {
            return Err(BiaError::Bundle(format!(
                "{} precoders for {} users",
                self.precoders.len(),
                params.users()
            )));
        }
        let mut matrices = Vec::with_capacity(params.users());
        let mut labels = Vec::with_capacity(params.users());
        for (q, doc) in self.precoders.iter().enumerate() {
            if doc.transmitter != q + 1 {
                return Err(BiaError::Bundle(format!(
                    "precoder {} is listed as transmitter {}",
                    q + 1,
                    doc.transmitter
                )));
            }
            let m = BinaryMatrix::from_rows(&doc.matrix)?;
            if m.rows() != params.slots() {
                return Err(BiaError::Bundle(format!(
                    "precoder {} has {} rows, expected {}",
                    q + 1,
                    m.rows(),
                    params.slots()
                )));
            }
            matrices.push(m);
            labels.push(doc.subsets.clone());
        }
        let precoders = PrecoderSet::from_parts(matrices, labels)?;
        let switching = SwitchingPlan::from_rows(self.switching.order, &self.switching.matrix)?;
        if switching.order() != params.order()
            || switching.users() != params.users()
            || switching.slots() != params.slots()
        {
            return Err(BiaError::Bundle("switching plan does not match the parameters".into()));
        }
        Ok(Construction {
            params,
            basis,
            precoders,
            switching,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| BiaError::Bundle(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffTable {
    Exact(Vec<Vec<Vec<i64>>>),
    Float(Vec<Vec<Vec<f64>>>),
}

/// `coeffs[p][q][m] = h[pq](m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDoc {
    pub schema: u32,
    pub seed: u64,
    pub representation: Representation,
    pub users: usize,
    pub modes: usize,
    pub coeffs: CoeffTable,
}

impl From<&ChannelRealization> for ChannelDoc {
    fn from(ch: &ChannelRealization) -> Self {
        let coeffs = match ch.exact_table() {
            Some(t) => CoeffTable::Exact(t),
            None => CoeffTable::Float(ch.float_table()),
        };
        ChannelDoc {
            schema: SCHEMA_VERSION,
            seed: ch.seed(),
            representation: ch.representation(),
            users: ch.users(),
            modes: ch.modes(),
            coeffs,
        }
    }
}

impl ChannelDoc {
    pub fn to_channel(&self) -> Result<ChannelRealization> {
        let ch = match (&self.coeffs, self.representation) {
            (CoeffTable::Exact(t), Representation::ExactRational) => {
                ChannelRealization::from_exact_table(self.seed, t)?
            }
            (CoeffTable::Exact(t), Representation::Floating) => {
                let f: Vec<Vec<Vec<f64>>> = t
                    .iter()
                    .map(|r| r.iter().map(|l| l.iter().map(|&v| v as f64).collect()).collect())
                    .collect();
                ChannelRealization::from_float_table(self.seed, &f)?
            }
            (CoeffTable::Float(t), Representation::Floating) => ChannelRealization::from_float_table(self.seed, t)?,
            (CoeffTable::Float(_), Representation::ExactRational) => {
                return Err(BiaError::Bundle("exact channel with non-integer coefficients".into()))
            }
        };
        if ch.users() != self.users || ch.modes() != self.modes {
            return Err(BiaError::Bundle("channel table shape disagrees with header".into()));
        }
        Ok(ch)
    }
}
