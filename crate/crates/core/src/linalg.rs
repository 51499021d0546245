//! Dense complex products through `matrixmultiply`'s blocked kernel.

use matrixmultiply::CGemmOption;

use crate::CMatrix;

/// `a * b`.
pub(crate) fn cmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut c = CMatrix::zeros(a.nrows(), b.ncols());
    cmul_acc(&mut c, a, b);
    c
}

/// `c += a * b`.
pub(crate) fn cmul_acc(c: &mut CMatrix, a: &CMatrix, b: &CMatrix) {
    let (m, k, n) = (a.nrows(), a.ncols(), b.ncols());
    assert_eq!(k, b.nrows(), "inner dimensions differ");
    assert_eq!(c.shape(), (m, n), "output shape");
    if m == 0 || n == 0 || k == 0 {
        return;
    }
    // SAFETY: `Complex<f64>` is `repr(C)` with fields (re, im), the layout of
    // `[f64; 2]`. `DMatrix` storage is contiguous and column-major, so the
    // strides below address exactly the `m x k`, `k x n` and `m x n` elements.
    unsafe {
        matrixmultiply::zgemm(
            CGemmOption::Standard,
            CGemmOption::Standard,
            m,
            k,
            n,
            [1.0, 0.0],
            a.as_ptr().cast::<[f64; 2]>(),
            1,
            m as isize,
            b.as_ptr().cast::<[f64; 2]>(),
            1,
            k as isize,
            [1.0, 0.0],
            c.as_mut_ptr().cast::<[f64; 2]>(),
            1,
            m as isize,
        );
    }
}
