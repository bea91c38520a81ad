//! Blind interference alignment for the K-user SISO interference channel with
//! staggered antenna switching at the receivers.
//!
//! - [`construct`]: basic matrix, binary precoders and switching patterns.
//! - [`channel`]: generic channel draws and the received-signal map.
//! - [`verify`]: exact rank checks of alignment, separability and the
//!   per-receiver dimension census.
//! - [`dof`]: the sum-DoF bound `K r / (r² − r + K)` and its optimizer.
//! - [`simulate`]: zero-forcing decoding and high-SNR slope estimation.

pub mod bundle;
pub mod channel;
pub mod combinatorics;
pub mod construct;
pub mod dof;
pub mod error;
pub mod linalg;
pub mod seed;
pub mod simulate;
pub mod verify;

pub use channel::{
    diagonal_channel, draw_channel, received_basis, transmit, transmit_exact, ChannelRealization, Entries,
    ReceivedBasis, Representation,
};
pub use combinatorics::Subset;
pub use construct::{
    build_basis, build_precoders, build_switching, BasisMatrix, BinaryMatrix, Construction, ConstructionMode,
    PrecoderSet, SchemeParams, SwitchingPlan,
};
pub use dof::{appendix_inequality, dof_formula, optimal_r, unimodality_witness, Dof, DofReport};
pub use error::{BiaError, Result};
pub use simulate::{
    estimate_dof_slope, simulate_rates, zero_force_decode, zero_force_decode_exact, RateCurve, SimulationConfig,
};
pub use verify::{
    audit_converse_inequalities, check_alignment, check_desired_clean, check_shared_independence,
    check_tx_independence, dimension_census, DimensionCensus, RankReport, VerificationReport,
};
