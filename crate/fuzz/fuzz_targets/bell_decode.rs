#![no_main]

use libfuzzer_sys::fuzz_target;
use num_complex::Complex64;
use qcorr::linalg::ComplexMatrix;
use qcorr::states::{bell_diagonal_to_matrix, matrix_to_bell_diagonal};
use qcorr::TwoQubitState;

// 32 little-endian f64s: real and imaginary parts of a row-major 4x4 matrix.
fuzz_target!(|data: &[u8]| {
    if data.len() < 256 {
        return;
    }
    let entries: Vec<Complex64> = data[..256]
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    let Ok(state) = TwoQubitState::new(ComplexMatrix::from_row_major(4, entries)) else {
        return;
    };
    if let Ok(params) = matrix_to_bell_diagonal(&state) {
        let rebuilt = bell_diagonal_to_matrix(&params);
        assert!(rebuilt.matrix().max_abs_diff(state.matrix()) < 1e-8);
    }
});
