//! Exact arithmetic for trinomial coefficients, Lucas sequences and the
//! determinants of `D_p(c,d) = [(i² + cij + dj²)^(p−2)]` over prime fields,
//! together with a harness that checks each closed form against brute-force
//! oracles across sweeps of primes.

pub mod checks;
pub mod error;
pub mod ffcore;
pub mod lucas;
pub mod matrix;
pub mod scalar;
pub mod sweep;
pub mod trinom;

pub use checks::{run_check, CheckId, CheckInstance, CheckOutcome, Status};
pub use error::{Error, Result};
pub use ffcore::{primitive_root, quad_roots, FieldCtx, Fp, Fp2, Fp2Ctx};
pub use lucas::{lucas_half_closed, lucas_u, HalfIndexValues, LucasParams};
pub use matrix::{
    build_circulant, build_dp, cauchy_det, cauchy_matrix, circulant_profile, perm_sign_mul,
    sun_half_det, CirculantProfile, Matrix,
};
pub use scalar::{Field, Ring};
pub use sweep::{
    enumerate_primes, generate_instances, run_sweep, Format, Report, SplitMix64, SweepConfig,
};
pub use trinom::{
    central_pm1, central_seq, pm1_row_closed, pm2_anchors, pm2_half_paper, row_p_closed,
    trinom_coeff, trinom_row, RowCache, TrinomRow,
};

/// Element of a prime field.
pub type FpElem = Fp;
/// Element of the quadratic extension F_p(√Δ).
pub type Fp2Elem = Fp2;
/// Dense matrix over F_p.
pub type MatFp = Matrix<Fp>;
/// Exact rational matrix, for cross-checks over Q.
pub type MatQ = Matrix<num_rational::BigRational>;
/// Trinomial row reduced mod p.
pub type TrinomRowFp = TrinomRow<Fp>;
/// Trinomial row over the integers.
pub type TrinomRowZ = TrinomRow<num_bigint::BigInt>;
pub type LucasParamsFp = LucasParams<Fp>;
pub type CirculantProfileFp = CirculantProfile<Fp>;
