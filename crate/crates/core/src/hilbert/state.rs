use super::{eigvals_hermitian, total_dim, ComplexMatrix, C64};
use crate::{Error, Result, PSD_TOL, STATE_TOL};

/// Normalized pure state over labeled subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    dims: Vec<usize>,
    amps: Vec<C64>,
}

impl Ket {
    /// Wraps amplitudes that must already have unit norm.
    pub fn new(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        check_dims(&dims, amps.len())?;
        let norm = norm_of(&amps);
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("ket norm {norm} differs from 1")));
        }
        Ok(Self { dims, amps })
    }

    /// Rescales the amplitudes to unit norm.
    pub fn normalized(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        check_dims(&dims, amps.len())?;
        let norm = norm_of(&amps);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(Self {
            dims,
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Computational basis state |index⟩.
    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        let n = total_dim(&dims);
        if index >= n {
            return Err(Error::InvalidState(format!("basis index {index} >= {n}")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); n];
        amps[index] = C64::new(1.0, 0.0);
        Self::new(dims, amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &Ket) -> C64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn tensor(&self, other: &Ket) -> Ket {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Ket { dims, amps }
    }

    pub fn to_density(&self) -> DensityOperator {
        let mut matrix = ComplexMatrix::outer(&self.amps, &self.amps);
        matrix.symmetrize();
        DensityOperator {
            dims: self.dims.clone(),
            matrix,
        }
    }

    /// ⟨ψ|ρ|ψ⟩
    pub fn expectation_in(&self, rho: &DensityOperator) -> f64 {
        let rv = rho.matrix.matvec(&self.amps);
        self.amps
            .iter()
            .zip(&rv)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .re
    }
}

fn check_dims(dims: &[usize], len: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) || total_dim(dims) != len {
        return Err(Error::DimensionMismatch(format!(
            "dims {dims:?} do not match length {len}"
        )));
    }
    Ok(())
}

fn norm_of(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Mixed state over labeled subsystems.
///
/// Construction checks Hermiticity and unit trace; positivity costs an
/// eigendecomposition and is checked separately by [`DensityOperator::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        let n = total_dim(&dims);
        if dims.is_empty() || dims.contains(&0) || matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} need a {n}x{n} matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let max_asymmetry = matrix.max_asymmetry();
        if max_asymmetry > STATE_TOL {
            return Err(Error::NotHermitian { max_asymmetry });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        Ok(Self { dims, matrix })
    }

    /// Normalizes the trace and Hermitian-symmetrizes before validating.
    pub fn from_unnormalized(dims: Vec<usize>, mut matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch("density matrix must be square".into()));
        }
        matrix.symmetrize();
        let tr = matrix.trace().re;
        if tr <= 0.0 || !tr.is_finite() {
            return Err(Error::InvalidState(format!("trace {tr} is not positive")));
        }
        Self::new(dims, matrix.scale_real(1.0 / tr))
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n = total_dim(&dims);
        Self {
            dims,
            matrix: ComplexMatrix::identity(n).scale_real(1.0 / n as f64),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(eigvals_hermitian(&self.matrix)?[0])
    }

    /// Full invariant check, including positivity.
    pub fn validate(&self) -> Result<()> {
        let max_asymmetry = self.matrix.max_asymmetry();
        if max_asymmetry > STATE_TOL {
            return Err(Error::NotHermitian { max_asymmetry });
        }
        if (self.trace() - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {} differs from 1", self.trace())));
        }
        let lowest = self.min_eigenvalue()?;
        if lowest < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {lowest:.3e}")));
        }
        Ok(())
    }

    /// Tr(ρ·op)
    pub fn expectation(&self, op: &ComplexMatrix) -> C64 {
        self.matrix.trace_product(op)
    }

    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityOperator {
            dims,
            matrix: super::kron(&self.matrix, &other.matrix),
        }
    }

    /// ½‖ρ − σ‖₁
    pub fn trace_distance(&self, other: &DensityOperator) -> Result<f64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "trace distance between dims {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        let diff = &self.matrix - &other.matrix;
        let vals = eigvals_hermitian(&diff)?;
        Ok(0.5 * vals.iter().map(|x| x.abs()).sum::<f64>())
    }

    /// Traces out every subsystem not listed in `keep`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        let nsub = self.dims.len();
        if keep.is_empty() {
            return Err(Error::InvalidSubsystem("keep set is empty".into()));
        }
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        if let Some(&bad) = keep_sorted.iter().find(|&&k| k >= nsub) {
            return Err(Error::InvalidSubsystem(format!(
                "subsystem {bad} out of range for {nsub} subsystems"
            )));
        }
        let traced: Vec<usize> = (0..nsub).filter(|k| !keep_sorted.contains(k)).collect();
        let kept_dims: Vec<usize> = keep_sorted.iter().map(|&k| self.dims[k]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&k| self.dims[k]).collect();
        let nk = total_dim(&kept_dims);
        let nt = total_dim(&traced_dims);
        let index = SplitIndex::new(&self.dims, &keep_sorted, &traced);

        let n = self.dim();
        let data = self.matrix.as_slice();
        let mut out = ComplexMatrix::zeros(nk, nk);
        for a in 0..nk {
            for b in 0..nk {
                let mut acc = C64::new(0.0, 0.0);
                for t in 0..nt {
                    acc += data[index.full(a, t) * n + index.full(b, t)];
                }
                out[(a, b)] = acc;
            }
        }
        out.symmetrize();
        Ok(DensityOperator {
            dims: kept_dims,
            matrix: out,
        })
    }

    /// Projects `subsystem` onto `ket`, returning the renormalized state of the
    /// remaining subsystems and the outcome probability.
    pub fn project(&self, subsystem: usize, ket: &Ket) -> Result<(DensityOperator, f64)> {
        let nsub = self.dims.len();
        if subsystem >= nsub {
            return Err(Error::InvalidSubsystem(format!(
                "subsystem {subsystem} out of range for {nsub} subsystems"
            )));
        }
        if nsub == 1 {
            return Err(Error::InvalidSubsystem(
                "cannot project the only subsystem".into(),
            ));
        }
        if ket.dim() != self.dims[subsystem] {
            return Err(Error::DimensionMismatch(format!(
                "ket of dimension {} for subsystem of dimension {}",
                ket.dim(),
                self.dims[subsystem]
            )));
        }
        let rest: Vec<usize> = (0..nsub).filter(|&k| k != subsystem).collect();
        let rest_dims: Vec<usize> = rest.iter().map(|&k| self.dims[k]).collect();
        let nr = total_dim(&rest_dims);
        let index = SplitIndex::new(&self.dims, &rest, &[subsystem]);
        let k = ket.amplitudes();
        let n = self.dim();
        let data = self.matrix.as_slice();

        let mut out = ComplexMatrix::zeros(nr, nr);
        for a in 0..nr {
            for b in 0..nr {
                let mut acc = C64::new(0.0, 0.0);
                for (u, ku) in k.iter().enumerate() {
                    if *ku == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let row = index.full(a, u) * n;
                    let mut inner = C64::new(0.0, 0.0);
                    for (v, kv) in k.iter().enumerate() {
                        inner += data[row + index.full(b, v)] * kv;
                    }
                    acc += ku.conj() * inner;
                }
                out[(a, b)] = acc;
            }
        }
        let probability = out.trace().re;
        if probability < 1e-14 {
            return Err(Error::OutcomeUnreachable { probability });
        }
        let mut post = out.scale_real(1.0 / probability);
        post.symmetrize();
        Ok((
            DensityOperator {
                dims: rest_dims,
                matrix: post,
            },
            probability.min(1.0),
        ))
    }
}

/// Maps (outer, inner) multi-index pairs back to flat indices of the full space.
struct SplitIndex {
    table: Vec<usize>,
    inner_len: usize,
}

impl SplitIndex {
    fn new(dims: &[usize], outer: &[usize], inner: &[usize]) -> Self {
        let strides: Vec<usize> = (0..dims.len())
            .map(|k| total_dim(&dims[k + 1..]))
            .collect();
        let outer_dims: Vec<usize> = outer.iter().map(|&k| dims[k]).collect();
        let inner_dims: Vec<usize> = inner.iter().map(|&k| dims[k]).collect();
        let no = total_dim(&outer_dims);
        let ni = total_dim(&inner_dims);
        let offsets = |sel: &[usize], sel_dims: &[usize], count: usize| -> Vec<usize> {
            (0..count)
                .map(|mut flat| {
                    let mut off = 0;
                    for (pos, &k) in sel.iter().enumerate().rev() {
                        let d = sel_dims[pos];
                        off += (flat % d) * strides[k];
                        flat /= d;
                    }
                    off
                })
                .collect()
        };
        let oo = offsets(outer, &outer_dims, no);
        let io = offsets(inner, &inner_dims, ni);
        let mut table = Vec::with_capacity(no * ni);
        for o in &oo {
            table.extend(io.iter().map(|i| o + i));
        }
        Self {
            table,
            inner_len: ni,
        }
    }

    fn full(&self, outer: usize, inner: usize) -> usize {
        self.table[outer * self.inner_len + inner]
    }
}
