//! Dense symmetric eigensolver for the small matrices used by PCA and whitening.

use crate::scalar::Scalar;

/// Eigen-decomposition of a symmetric `n x n` row-major matrix by cyclic Jacobi
/// rotations.
///
/// Returns `(eigenvalues, eigenvectors)` where `eigenvectors[k]` is the unit
/// vector for `eigenvalues[k]`. Order is unspecified; callers sort.
pub fn symmetric_eigen<T: Scalar>(matrix: &[T], n: usize) -> (Vec<T>, Vec<Vec<T>>) {
    assert_eq!(matrix.len(), n * n, "matrix is not {n}x{n}");
    let mut a = matrix.to_vec();
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let two = T::of(2.0);
    let scale = a.iter().map(|x| x.abs()).fold(T::zero(), T::max);
    if scale > T::zero() {
        let threshold = T::epsilon() * T::epsilon() * scale * scale;
        for _sweep in 0..100 {
            let off: T = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .map(|(i, j)| a[i * n + j] * a[i * n + j])
                .sum();
            if off <= threshold {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    if apq == T::zero() {
                        continue;
                    }
                    let app = a[p * n + p];
                    let aqq = a[q * n + q];
                    let theta = (aqq - app) / (two * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    let vectors = (0..n).map(|k| (0..n).map(|i| v[i * n + k]).collect()).collect();
    (values, vectors)
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}
