use num_complex::Complex64;

use super::HermitianMatrix;
use crate::math::modulus;
use crate::{Error, Result};

/// `left (x) right` with row index `left_index * order(right) + right_index`.
pub fn kron_product(left: &HermitianMatrix, right: &HermitianMatrix) -> HermitianMatrix {
    let r = right.order();
    HermitianMatrix::from_upper(left.order() * r, |i, j| {
        left.get(i / r, j / r) * right.get(i % r, j % r)
    })
}

/// Largest entrywise gap between `big` and `left (x) right`, using the index
/// convention of [`kron_product`].
pub fn kron_residual(
    big: &HermitianMatrix,
    left: &HermitianMatrix,
    right: &HermitianMatrix,
) -> Result<f64> {
    let r = right.order();
    if big.order() != left.order() * r {
        return Err(Error::OrderMismatch(alloc::format!(
            "order {} is not {} x {}",
            big.order(),
            left.order(),
            r
        )));
    }
    let mut worst = 0.0_f64;
    for i in 0..big.order() {
        for j in 0..big.order() {
            let expected: Complex64 = left.get(i / r, j / r) * right.get(i % r, j % r);
            worst = worst.max(modulus(big.get(i, j) - expected));
        }
    }
    Ok(worst)
}
