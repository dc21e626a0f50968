//! The published 15x15 worked example over `F_2` with `k = 7`.

use crate::error::Result;
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::scheme::{keys_from_matrix, validate_params, Params, PrivateKey, PublicKey};

pub const REFERENCE_P: u64 = 2;
pub const REFERENCE_M: usize = 1;
/// Not published with the example; the smallest legal value for `k = 7`.
pub const REFERENCE_N: usize = 16;
pub const REFERENCE_K: usize = 7;

#[rustfmt::skip]
pub const REFERENCE_T: [[u64; 15]; 15] = [
    [0, 1, 0, 1, 0, 0, 0, 1, 0, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0, 1, 0],
    [1, 1, 1, 0, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1],
    [1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1],
    [1, 0, 0, 1, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 1],
    [1, 1, 0, 1, 0, 1, 0, 0, 1, 0, 0, 1, 1, 0, 0],
    [1, 0, 0, 0, 1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 1],
    [1, 0, 0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 1, 1],
    [0, 1, 0, 1, 1, 1, 1, 1, 0, 1, 1, 0, 1, 0, 1],
    [0, 0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1, 1, 0, 0],
    [1, 0, 1, 0, 1, 1, 0, 0, 0, 1, 1, 0, 0, 0, 1],
    [1, 1, 0, 1, 1, 0, 0, 1, 1, 0, 1, 1, 1, 1, 0],
    [1, 0, 0, 1, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0, 1],
    [1, 0, 0, 1, 0, 1, 0, 1, 0, 1, 1, 0, 0, 1, 1],
    [1, 1, 0, 1, 1, 1, 1, 0, 0, 1, 0, 1, 0, 1, 0],
];

/// Sample message `x^7 + x + 1`, little-endian.
pub const SAMPLE_P: [u64; 8] = [1, 1, 0, 0, 0, 0, 0, 1];
/// Sample message `x^7 + x^3 + 1`, little-endian.
pub const SAMPLE_Q: [u64; 8] = [1, 0, 0, 1, 0, 0, 0, 1];

pub fn reference_params() -> Result<Params> {
    validate_params(REFERENCE_P, REFERENCE_M, REFERENCE_N, REFERENCE_K)
}

pub fn reference_matrix(params: &Params) -> Result<Matrix> {
    Matrix::from_rows(params.ctx(), &REFERENCE_T)
}

pub fn reference_keys() -> Result<(PublicKey, PrivateKey)> {
    let params = reference_params()?;
    let t = reference_matrix(&params)?;
    keys_from_matrix(&params, t)
}

pub fn sample_messages(params: &Params) -> (Poly, Poly) {
    (
        Poly::from_indices(params.ctx(), &SAMPLE_P),
        Poly::from_indices(params.ctx(), &SAMPLE_Q),
    )
}
