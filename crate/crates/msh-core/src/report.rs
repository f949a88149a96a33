//! Serializable result records shared by the library, the test suites, and
//! the command-line front-end. Arbitrary-precision values are carried as
//! decimal strings so they survive JSON without loss.

use serde::{Deserialize, Serialize};

/// Outcome of a hypothesis-guarded check: the conclusion held, failed, or the
/// hypotheses were not satisfied so the check does not apply to the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inapplicable,
}

/// One integer identity instance with both sides evaluated exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_name: String,
    pub parameter: u64,
    pub holds: bool,
    pub lhs: String,
    pub rhs: String,
}

/// Kernel, image, and homology dimensions at one degree of a complex: the
/// middle space has degree `k`, the incoming map steps down from `k + s_in`,
/// the outgoing map steps down to `k - t_out`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub n: u32,
    pub p: u8,
    pub k: i64,
    pub s_in: u32,
    pub t_out: u32,
    pub dim_space: u64,
    pub dim_ker: u64,
    pub dim_im: u64,
    pub dim_h: u64,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_dim: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Which disjunct of the closed-form exactness condition matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionHit {
    #[serde(rename = "t_is_1")]
    TIs1,
    #[serde(rename = "small_k_side")]
    SmallKSide,
    #[serde(rename = "small_nk_side")]
    SmallNkSide,
    #[serde(rename = "two_power_range")]
    TwoPowerRange,
    #[serde(rename = "none")]
    None,
}

/// The closed-form exactness predicate at one (n, t, k), optionally
/// cross-checked against the computed homology dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub n: u32,
    pub t: u32,
    pub k: i64,
    /// Least two-power in the binary form of t.
    pub tau_power: u64,
    pub predicate: bool,
    pub condition_hit: ConditionHit,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute_force: Option<bool>,
}

/// Which branch of the everywhere-exactness condition matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitCondition {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "none")]
    None,
}

/// The closed-form split-exactness predicate for the full complex with base
/// degree `a` and step `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitExactReport {
    pub n: u32,
    pub t: u32,
    pub a: u32,
    pub predicate: bool,
    pub condition: SplitCondition,
}

/// Constructive splitting witness at one degree: the two-sided homotopy
/// identity and the direct-sum decomposition it induces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyReport {
    pub n: u32,
    pub t: u32,
    pub k: i64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity_holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims_add: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intersection_zero: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_equals_image: Option<bool>,
}

/// Entrywise verification of the two symmetric-difference expansions of the
/// down-up and up-down compositions, plus the one-step consequence mod 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiPhiStarReport {
    pub n: u32,
    pub t: u32,
    pub k: i64,
    pub p: u8,
    pub down_up_expansion: bool,
    pub up_down_expansion: bool,
    pub a0_is_identity: bool,
    /// Only evaluated at t = 1, p = 2: down-up plus up-down equals n·id.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub one_step_identity: Option<bool>,
}

/// Whether the distinguished kernel vector generates the full homology under
/// the group action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorReport {
    pub n: u32,
    pub t: u32,
    pub k: i64,
    pub in_kernel: bool,
    pub homology_dim: u64,
    pub cyclic_dim: u64,
    pub generates: bool,
}

/// The induced endomorphism of the middle homology for even n, with its
/// structural properties.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaReport {
    pub n: u32,
    pub m: u32,
    pub homology_dim: u64,
    pub kernel_invariant: bool,
    pub image_invariant: bool,
    pub nonzero: bool,
    pub square_zero: bool,
    /// The distinguished generator maps to itself plus its image under the
    /// last transposition.
    pub generator_relation: bool,
    /// The symmetrized generator is annihilated.
    pub symmetrized_annihilated: bool,
    /// Induced matrix on homology coordinates, in the triplet text format.
    pub theta_matrix: crate::gfmat::FpMatrix,
}

/// Proper kernel containment between two steps, with the explicit witness
/// vector separating them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelWitnessReport {
    pub n: u32,
    pub s: u32,
    pub t: u32,
    pub k: i64,
    /// The power of two used to build the witness.
    pub witness_power: u64,
    pub containment: bool,
    pub witness_in_larger_kernel: bool,
    pub witness_outside_smaller_kernel: bool,
    pub proper: bool,
}

/// One degree of a conjecture sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDim {
    pub k: i64,
    pub computed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Verdict of one conjecture at one ground-set size: per-degree computed and
/// predicted dimensions plus the aggregate agreement flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureVerdict {
    pub conjecture_id: String,
    pub n: u32,
    pub p: u8,
    pub degrees: Vec<DegreeDim>,
    pub agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}
