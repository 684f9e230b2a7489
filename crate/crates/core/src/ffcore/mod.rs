//! Prime fields F_p, the quadratic extension F_p², and the number-theoretic
//! helpers built on them (quadratic character, square roots, primitive roots).

mod ext;
mod field;

pub use ext::{quad_roots, Fp2, Fp2Ctx};
pub use field::{primitive_root, FieldCtx, Fp};
