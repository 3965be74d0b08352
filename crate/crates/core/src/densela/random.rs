//! Seeded sampling. Every stream is ChaCha20 (`rand_chacha`), keyed by a
//! 64-bit seed through `SeedableRng::seed_from_u64`, with the stream id
//! selecting an independent substream. Normal variates use the ziggurat
//! sampler of `rand_distr::StandardNormal`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::matrix::DenseMatrix;
use super::qr::HouseholderQr;
use crate::{Error, Result, Scalar};

/// Name recorded in instance metadata.
pub const GENERATOR_NAME: &str = "chacha20+ziggurat-normal";

pub fn seeded_stream(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn standard_normals<T: Scalar>(rng: &mut ChaCha20Rng, len: usize) -> Vec<T> {
    (0..len)
        .map(|_| T::lit(rng.sample::<f64, _>(StandardNormal)))
        .collect()
}

/// Random matrix with orthonormal columns (rows >= cols) or orthonormal
/// rows (rows < cols), deterministic in `seed`.
pub fn random_semi_orthogonal<T: Scalar>(rows: usize, cols: usize, seed: u64) -> Result<DenseMatrix<T>> {
    random_semi_orthogonal_stream(rows, cols, seed, 0)
}

/// Gaussian matrix, Householder QR, and column signs flipped so that
/// `diag(R) > 0`; this makes the distribution Haar on the Stiefel manifold.
pub fn random_semi_orthogonal_stream<T: Scalar>(
    rows: usize,
    cols: usize,
    seed: u64,
    stream: u64,
) -> Result<DenseMatrix<T>> {
    if rows == 0 || cols == 0 {
        return Err(Error::invalid(format!("semi-orthogonal matrix of shape {rows}x{cols}")));
    }
    let (tall, short) = (rows.max(cols), rows.min(cols));
    let mut rng = seeded_stream(seed, stream);
    let g = DenseMatrix::from_vec_unchecked(tall, short, standard_normals(&mut rng, tall * short));
    let qr = HouseholderQr::new(&g)?;
    let mut q = qr.thin_q();
    let signs: Vec<T> = qr
        .r_diagonal()
        .into_iter()
        .map(|d| if d < T::zero() { -T::one() } else { T::one() })
        .collect();
    for i in 0..tall {
        for (v, &s) in q.row_mut(i).iter_mut().zip(&signs) {
            *v *= s;
        }
    }
    Ok(if rows >= cols { q } else { q.transpose() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gram_residual(m: &DenseMatrix<f64>) -> f64 {
        let g = if m.rows() >= m.cols() {
            m.transpose().matmul(m).unwrap()
        } else {
            m.matmul(&m.transpose()).unwrap()
        };
        g.max_abs_diff(&DenseMatrix::identity(g.rows()))
    }

    #[test]
    fn one_by_one_is_unit() {
        for seed in 0..10 {
            let m = random_semi_orthogonal::<f64>(1, 1, seed).unwrap();
            assert!((m[(0, 0)].abs() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let a = random_semi_orthogonal::<f64>(5, 3, 42).unwrap();
        let b = random_semi_orthogonal::<f64>(5, 3, 42).unwrap();
        let c = random_semi_orthogonal::<f64>(5, 3, 43).unwrap();
        assert_eq!(a.as_slice(), b.as_slice());
        assert_ne!(a.as_slice(), c.as_slice());
    }

    #[test]
    fn tall_columns_orthonormal() {
        let m = random_semi_orthogonal::<f64>(100, 80, 9).unwrap();
        assert!(gram_residual(&m) < 1e-12);
    }

    #[test]
    fn wide_rows_orthonormal() {
        let m = random_semi_orthogonal::<f64>(80, 100, 9).unwrap();
        assert_eq!(m.shape(), (80, 100));
        assert!(gram_residual(&m) < 1e-12);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(random_semi_orthogonal::<f64>(0, 3, 1).is_err());
        assert!(random_semi_orthogonal::<f64>(3, 0, 1).is_err());
    }

    #[test]
    fn single_precision_is_orthonormal_to_f32_accuracy() {
        let m = random_semi_orthogonal::<f32>(30, 20, 3).unwrap();
        let g = m.transpose().matmul(&m).unwrap();
        assert!(g.max_abs_diff(&DenseMatrix::identity(20)) < 1e-5);
    }
}
