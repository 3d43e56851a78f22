use num_traits::{Float, FromPrimitive};

/// Floating scalar the probability kernels are generic over: `f32` or `f64`.
///
/// The stated tolerances (relative error below `1e-12` in log space) are only
/// met by `f64`; `f32` is available for quick estimates.
pub trait Real: Float + FromPrimitive {
    /// Lossless-enough conversion from a set cardinality or modulus.
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in the scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}
