use super::spectrum::{design_spectrum, SpectrumSpec, DEFAULT_SCALE};
use crate::densela::{random_semi_orthogonal_stream, seeded_stream, standard_normals, DenseMatrix, Vector, GENERATOR_NAME};
use crate::{Error, Result, Scalar};

/// Substreams of the instance seed.
const STREAM_U: u64 = 1;
const STREAM_V: u64 = 2;
const STREAM_COST: u64 = 3;

/// Half-width of the generated box `[-100, 100]^n`.
pub const BOX_BOUND: f64 = 100.0;

/// Current binary format version.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceMeta {
    pub m: usize,
    pub n: usize,
    /// Designed condition number; 0 when the instance was not generated.
    pub kappa: f64,
    pub seed: u64,
    pub s: f64,
    pub generator: String,
    pub format_version: u32,
}

/// `min <c, x>  s.t.  A x <= b,  lower <= x <= upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpInstance<T> {
    pub a: DenseMatrix<T>,
    pub b: Vector<T>,
    pub c: Vector<T>,
    pub lower: Vector<T>,
    pub upper: Vector<T>,
    pub meta: InstanceMeta,
}

impl<T: Scalar> LpInstance<T> {
    /// Builds an instance from explicit data with blank generation metadata.
    pub fn from_parts(
        a: DenseMatrix<T>,
        b: Vector<T>,
        c: Vector<T>,
        lower: Vector<T>,
        upper: Vector<T>,
    ) -> Result<Self> {
        let (m, n) = a.shape();
        if b.len() != m || c.len() != n || lower.len() != n || upper.len() != n {
            return Err(Error::invalid(format!(
                "inconsistent LP data: A is {m}x{n}, |b|={}, |c|={}, |lower|={}, |upper|={}",
                b.len(),
                c.len(),
                lower.len(),
                upper.len()
            )));
        }
        if let Some(j) = (0..n).find(|&j| lower[j] > upper[j]) {
            return Err(Error::invalid(format!("lower bound exceeds upper bound at variable {j}")));
        }
        Ok(LpInstance {
            a,
            b,
            c,
            lower,
            upper,
            meta: InstanceMeta {
                m,
                n,
                kappa: 0.0,
                seed: 0,
                s: 0.0,
                generator: String::new(),
                format_version: FORMAT_VERSION,
            },
        })
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn objective(&self, x: &[T]) -> T {
        self.c.dot(x)
    }

    /// `max_i (<a^i, x> - b_i)`.
    pub fn max_violation(&self, x: &[T]) -> T {
        self.a
            .row_iter()
            .zip(self.b.iter())
            .map(|(row, &bi)| crate::densela::dot(row, x) - bi)
            .fold(T::neg_infinity(), T::max)
    }

    pub fn in_box(&self, x: &[T]) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(self.upper.iter()))
            .all(|(&v, (&lo, &hi))| lo <= v && v <= hi)
    }

    pub fn cast<U: Scalar>(&self) -> LpInstance<U> {
        LpInstance {
            a: self.a.cast(),
            b: self.b.cast(),
            c: self.c.cast(),
            lower: self.lower.cast(),
            upper: self.upper.cast(),
            meta: self.meta.clone(),
        }
    }
}

/// `A = U diag(sigma) V` with `U` (m x q) column-orthonormal and `V` (q x n)
/// row-orthonormal, both drawn from `seed`.
pub fn assemble<T: Scalar>(spec: &SpectrumSpec<T>, m: usize, n: usize, seed: u64) -> Result<DenseMatrix<T>> {
    check_rank(spec, m, n)?;
    let u = random_semi_orthogonal_stream::<T>(m, spec.q, seed, STREAM_U)?;
    let v = random_semi_orthogonal_stream::<T>(spec.q, n, seed, STREAM_V)?;
    assemble_with_factors(spec, &u, &v)
}

/// `U diag(sigma) V` for caller-supplied factors.
pub fn assemble_with_factors<T: Scalar>(
    spec: &SpectrumSpec<T>,
    u: &DenseMatrix<T>,
    v: &DenseMatrix<T>,
) -> Result<DenseMatrix<T>> {
    if u.cols() != spec.q || v.rows() != spec.q {
        return Err(Error::invalid(format!(
            "factor shapes {}x{} and {}x{} do not match rank {}",
            u.rows(),
            u.cols(),
            v.rows(),
            v.cols(),
            spec.q
        )));
    }
    check_rank(spec, u.rows(), v.cols())?;
    // diag(sigma) V, then U times that.
    let mut sv = v.clone();
    sv.scale_rows(&spec.sigma);
    u.matmul(&sv)
}

fn check_rank<T: Scalar>(spec: &SpectrumSpec<T>, m: usize, n: usize) -> Result<()> {
    if spec.q != m.min(n) || spec.sigma.len() != spec.q {
        return Err(Error::invalid(format!(
            "spectrum rank {} does not match min({m}, {n})",
            spec.q
        )));
    }
    Ok(())
}

/// Generated instance with the default scale `s = 10`.
pub fn generate_instance<T: Scalar>(m: usize, n: usize, kappa: T, seed: u64) -> Result<LpInstance<T>> {
    generate_instance_with_scale(m, n, kappa, T::lit(DEFAULT_SCALE), seed)
}

/// Generated instance: `b = A 1 + 1`, box `[-100, 100]^n`, and `c` with
/// i.i.d. standard-normal entries. The all-ones vector is strictly feasible
/// with slack 1 on every row.
pub fn generate_instance_with_scale<T: Scalar>(
    m: usize,
    n: usize,
    kappa: T,
    s: T,
    seed: u64,
) -> Result<LpInstance<T>> {
    if m < 2 || n < 2 {
        return Err(Error::invalid(format!("instance dimensions must be at least 2x2, got {m}x{n}")));
    }
    let spec = design_spectrum(kappa, m.min(n), s)?;
    let a = assemble(&spec, m, n, seed)?;
    let ones = vec![T::one(); n];
    let b: Vec<T> = a
        .row_iter()
        .map(|row| crate::densela::dot(row, &ones) + T::one())
        .collect();
    let c: Vec<T> = standard_normals(&mut seeded_stream(seed, STREAM_COST), n);
    if c.iter().all(|v| *v == T::zero()) {
        return Err(Error::Internal("cost vector sampled as zero".into()));
    }
    let bound = T::lit(BOX_BOUND);
    Ok(LpInstance {
        b: Vector::new(b)?,
        c: Vector::new(c)?,
        lower: Vector::filled(n, -bound),
        upper: Vector::filled(n, bound),
        a,
        meta: InstanceMeta {
            m,
            n,
            kappa: kappa.to_f64_lossy(),
            seed,
            s: s.to_f64_lossy(),
            generator: GENERATOR_NAME.to_string(),
            format_version: FORMAT_VERSION,
        },
    })
}
