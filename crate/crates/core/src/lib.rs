//! The Hidden Irreducible Polynomials public-key scheme over `F_q` and two
//! ways of recovering its private transformation from the public key.
//!
//! Bottom up: [`fields`] and [`poly`] give exact arithmetic, [`matrix`] the
//! linear algebra, [`mqforms`] the coefficient-sum structure of `f * g`,
//! [`scheme`] the protocol and [`attacks`] the key recovery.

pub mod attacks;
pub mod cli;
pub mod error;
pub mod fields;
pub mod fixture;
pub mod matrix;
pub mod mqforms;
pub mod poly;
pub mod scheme;

pub use error::{Error, Result};
pub use fields::{ff_inv, ff_mul, make_field, Field, FieldCtx, FieldElement, FieldExt};
pub use matrix::{mat_inv, mat_mul, random_invertible, solve_right, Matrix};
pub use mqforms::{compose_public, eval_form, index_set, symbolic_product, IndexPair, QuadForm, SymbolicProduct};
pub use poly::{
    factor_two_irreducibles, factor_two_irreducibles_with, is_irreducible, poly_divmod, poly_gcd,
    poly_mul, poly_powmod, random_irreducible, Poly,
};
pub use scheme::{
    decrypt, encrypt, keygen, keys_from_matrix, validate_params, Ciphertext, Params, Plaintext,
    PrivateKey, PublicKey,
};
pub use attacks::{attack_linear, attack_readoff, verify_break, BreakReport, Method, RecoveredKey};
