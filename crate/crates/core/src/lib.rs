//! Bipartite two-input/two-output correlation boxes.
//!
//! The crate builds boxes from the vertices of the no-signaling polytope,
//! specializes them to Hardy's nonlocality conditions, and studies which
//! measurement inputs can be locally random under three constraints:
//! no-signaling alone, the information-causality necessary condition, and
//! two-qubit quantum mechanics.

pub mod error;
pub mod hardy;
pub mod info_causality;
pub mod lp;
pub mod nsbox;
pub mod optimize;
pub mod quantum;
pub mod randomness;

pub use error::{Error, Result};
pub use hardy::{decompose, hardy_box, is_hardy, success_probability, HardyCoefficients, HardyVerdict};
pub use nsbox::{
    local_vertex, mix, nonlocal_vertex, pr_box, BipartiteBox, Bit, ConvexWeights, Party, VertexId, DEFAULT_TOL,
};
pub use randomness::{
    classify, is_locally_random, randomness_conditions, sample_case, solve_case, CaseFamily, InputLabel, InputSet,
    RandomnessCase,
};
