//! Syndrome source coding: parity-check constructions, BP decoding, the
//! Wyner pipeline and joint source-network code design.

pub mod bp;
pub mod joint;
pub mod matrices;
pub mod prop2;
pub mod wyner;

pub use bp::{bp_decode, BpConfig, Decoded, TannerGraph};
pub use joint::{design_joint_code, design_on_code, JointCodeDesign, JointParams, JointTerminal, LambdaPolicy};
pub use matrices::{
    entry_zero_prob, four_cycles, sample_sparse_h, structured_ldpc, structured_ldpc_with_swaps, syndrome_encode,
    DEFAULT_SWAPS,
};
pub use wyner::{wyner_pipeline, wyner_pipeline_with, BerResult, BscModel};
