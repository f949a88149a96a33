//! Exact linear algebra over small prime fields for the multistep boundary
//! maps on subset lattices.
//!
//! The library builds the maps sending a k-subset to the sum of its
//! (k−t)-subsets, assembles them into chain complexes over GF(p), and
//! computes kernels, images, homology dimensions, splittings, and the
//! associated combinatorial identities — all exactly, with no floating
//! point anywhere.
//!
//! Modules:
//! - [`subsets`]: ground-set combinatorics (ranking, binomials, carry rules).
//! - [`gfmat`]: packed matrices, row spaces, and elimination over GF(p).
//! - [`boundary`]: the boundary maps, their duals, and vectors of subsets.
//! - [`homology`]: chain complexes, exactness tests, splittings, induced maps.
//! - [`conjectures`]: restricted and odd-characteristic homology sweeps.
//! - [`session`]: rank caching shared across sweeps.
//! - [`report`]: serializable result records.

pub mod boundary;
pub mod conjectures;
pub mod gfmat;
pub mod homology;
pub mod report;
pub mod session;
pub mod subsets;

/// Largest ground-set size the matrix builders will accept. The matrices
/// on level n = 16 already have up to C(16,8) = 12870 rows; past this the
/// elimination passes stop being interactive.
pub const MAX_N: u32 = 16;

/// Unified error type for every fallible operation in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Ground-set size beyond [`MAX_N`] (or beyond the 32-bit mask width for
    /// the pure combinatorics).
    #[error("ground-set size {0} exceeds the supported maximum {1}")]
    GroundSetTooLarge(u32, u32),
    /// The modulus is not a prime in the supported range.
    #[error("{0} is not a supported prime (need a prime in 2..=251)")]
    BadPrime(u64),
    /// A step parameter that must be positive was zero.
    #[error("step parameter must be at least 1")]
    ZeroStep,
    /// A subset literal that does not denote a valid basis element.
    #[error("invalid subset: {0}")]
    BadSubset(String),
    /// A rank or coordinate index outside the space it addresses.
    #[error("index {index} out of range: {space} has size {size}")]
    IndexOutOfRange {
        index: u64,
        size: u64,
        space: String,
    },
    /// Two objects whose shapes must agree for the operation do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// A stated hypothesis of the operation does not hold for these inputs.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Consecutive maps fail to compose to zero, so there is no complex.
    #[error("not a chain complex: {0}")]
    ChainCondition(String),
    /// The textual matrix interchange format could not be decoded.
    #[error("triplet parse error: {0}")]
    Triplet(#[from] gfmat::TripletParseError),
    /// A persistent cache failed in a way that invalidates the operation.
    #[error("cache error: {0}")]
    Cache(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
