use nalgebra::{DMatrix, DVector};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};

/// Largest state space accepted by [`kron_product`].
pub const KRON_CAP: usize = 400;

/// Largest `‖Mμ − dμ‖_∞` accepted for a measure computed here.
pub const STATIONARY_TOL: f64 = 1e-12;

/// Largest `‖Mμ − dμ‖_∞` accepted for a measure supplied by the caller.
pub const INVARIANCE_TOL: f64 = 1e-10;

/// Tolerance on `Σ μ = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// A correspondence on `{0, …, m−1}`. `M[i][j]` is the multiplicity of `j`
/// in `F(i)`, equivalently of `i` in `F†(j)`. Every column sums to the
/// topological degree `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCorrespondence {
    matrix: Vec<Vec<u32>>,
    d: u32,
}

impl FiniteCorrespondence {
    pub fn new(matrix: Vec<Vec<u32>>) -> Result<Self> {
        let m = matrix.len();
        if m == 0 {
            return Err(Error::InvalidCorrespondence("empty state space".into()));
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: row.len(),
            });
        }
        let col_sum = |j: usize| matrix.iter().map(|r| u64::from(r[j])).sum::<u64>();
        let d = col_sum(0);
        if let Some(j) = (1..m).find(|&j| col_sum(j) != d) {
            return Err(Error::InvalidCorrespondence(format!(
                "column {j} sums to {}, column 0 to {d}",
                col_sum(j)
            )));
        }
        if d == 0 {
            return Err(Error::InvalidCorrespondence("columns are zero".into()));
        }
        if let Some(i) = matrix.iter().position(|r| r.iter().all(|&x| x == 0)) {
            return Err(Error::InvalidCorrespondence(format!("row {i} is zero")));
        }
        let d = u32::try_from(d).map_err(|_| Error::InvalidCorrespondence("degree overflows u32".into()))?;
        Ok(FiniteCorrespondence { matrix, d })
    }

    pub fn identity(m: usize) -> Self {
        let matrix = (0..m).map(|i| (0..m).map(|j| u32::from(i == j)).collect()).collect();
        FiniteCorrespondence::new(matrix).expect("identity is valid")
    }

    pub fn all_ones(m: usize) -> Self {
        FiniteCorrespondence::new(vec![vec![1; m]; m]).expect("all-ones is valid")
    }

    /// The two-state swap `0 ↔ 1`.
    pub fn swap() -> Self {
        FiniteCorrespondence::new(vec![vec![0, 1], vec![1, 0]]).expect("swap is valid")
    }

    /// Block-diagonal matrix with the given blocks.
    pub fn block_diagonal(blocks: &[FiniteCorrespondence]) -> Result<Self> {
        let m: usize = blocks.iter().map(|b| b.m()).sum();
        let mut matrix = vec![vec![0; m]; m];
        let mut offset = 0;
        for b in blocks {
            for (i, row) in b.matrix.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    matrix[offset + i][offset + j] = x;
                }
            }
            offset += b.m();
        }
        FiniteCorrespondence::new(matrix)
    }

    pub fn m(&self) -> usize {
        self.matrix.len()
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    /// Row sums: the number of forward images of each state.
    pub fn forward_degree_profile(&self) -> Vec<u32> {
        self.matrix.iter().map(|r| r.iter().sum()).collect()
    }

    /// `F†(j)` as a list of states (without multiplicity).
    pub fn backward_image(&self, j: usize) -> Vec<usize> {
        (0..self.m()).filter(|&i| self.matrix[i][j] > 0).collect()
    }

    /// `F(i)` as a list of states (without multiplicity).
    pub fn forward_image(&self, i: usize) -> Vec<usize> {
        (0..self.m()).filter(|&j| self.matrix[i][j] > 0).collect()
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        let m = self.m();
        DMatrix::from_fn(m, m, |i, j| f64::from(self.matrix[i][j]))
    }

    /// `F₂ ∘ F₁` with `self = F₁`: multiplicities `Σ_k M₁[i][k] M₂[k][j]`.
    pub fn then(&self, next: &FiniteCorrespondence) -> Result<FiniteCorrespondence> {
        let m = self.m();
        if next.m() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: next.m(),
            });
        }
        let matrix = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| (0..m).map(|k| self.matrix[i][k] * next.matrix[k][j]).sum())
                    .collect()
            })
            .collect();
        FiniteCorrespondence::new(matrix)
    }
}

/// A probability vector on the states.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMeasure {
    mu: Vec<f64>,
}

impl FiniteMeasure {
    pub fn new(mu: Vec<f64>) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::InvalidMeasure("empty vector".into()));
        }
        if let Some(x) = mu.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
            return Err(Error::InvalidMeasure(format!("entry {x} is not a nonnegative number")));
        }
        let total: f64 = mu.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidMeasure(format!("entries sum to {total}, not 1")));
        }
        Ok(FiniteMeasure { mu })
    }

    pub fn uniform(m: usize) -> Self {
        FiniteMeasure {
            mu: vec![1.0 / m as f64; m],
        }
    }

    /// Point mass at `i` on `m` states.
    pub fn dirac(m: usize, i: usize) -> Self {
        let mut mu = vec![0.0; m];
        mu[i] = 1.0;
        FiniteMeasure { mu }
    }

    pub fn values(&self) -> &[f64] {
        &self.mu
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    /// States of positive mass.
    pub fn support(&self) -> Vec<usize> {
        (0..self.mu.len()).filter(|&i| self.mu[i] > 0.0).collect()
    }

    /// `μ(B)` for a list of states.
    pub fn measure(&self, set: &[usize]) -> f64 {
        set.iter().map(|&i| self.mu[i]).sum()
    }

    /// `μ ⊗ ν` on the product states `(i, j) ↦ i·len(ν) + j`.
    pub fn tensor(&self, other: &FiniteMeasure) -> FiniteMeasure {
        let mu = self
            .mu
            .iter()
            .flat_map(|a| other.mu.iter().map(move |b| a * b))
            .collect();
        FiniteMeasure { mu }
    }
}

fn check_dims(fc: &FiniteCorrespondence, n: usize) -> Result<()> {
    if fc.m() != n {
        return Err(Error::DimensionMismatch { expected: fc.m(), got: n });
    }
    Ok(())
}

/// `F*μ = Mμ`.
pub fn pullback(fc: &FiniteCorrespondence, mu: &[f64]) -> Result<Vec<f64>> {
    check_dims(fc, mu.len())?;
    Ok(fc
        .matrix
        .iter()
        .map(|row| row.iter().zip(mu).map(|(&x, y)| f64::from(x) * y).sum())
        .collect())
}

/// `‖Mμ − dμ‖_∞`.
pub fn invariance_defect(fc: &FiniteCorrespondence, mu: &FiniteMeasure) -> Result<f64> {
    let pulled = pullback(fc, mu.values())?;
    let d = f64::from(fc.degree());
    Ok(pulled
        .iter()
        .zip(mu.values())
        .map(|(p, x)| (p - d * x).abs())
        .fold(0.0, f64::max))
}

/// Errors unless `μ` is invariant within [`INVARIANCE_TOL`].
pub fn require_invariant(fc: &FiniteCorrespondence, mu: &FiniteMeasure) -> Result<()> {
    let defect = invariance_defect(fc, mu)?;
    if defect > INVARIANCE_TOL {
        return Err(Error::NotInvariant { defect });
    }
    Ok(())
}

/// `A = Mᵀ / d`, acting on functions: `(Aφ)(z) = (1/d) Σ_w M[w][z] φ(w)`.
pub fn koopman_matrix(fc: &FiniteCorrespondence) -> DMatrix<f64> {
    let m = fc.m();
    let d = f64::from(fc.degree());
    DMatrix::from_fn(m, m, |z, w| f64::from(fc.matrix[w][z]) / d)
}

/// The extreme invariant probability measures, one per closed class of the
/// graph `z → w` for `w ∈ F†(z)`.
pub fn invariant_measures(fc: &FiniteCorrespondence) -> Result<Vec<FiniteMeasure>> {
    let m = fc.m();
    let mut graph = DiGraph::<(), ()>::with_capacity(m, m * m);
    let nodes: Vec<_> = (0..m).map(|_| graph.add_node(())).collect();
    for z in 0..m {
        for w in 0..m {
            if fc.matrix[w][z] > 0 {
                graph.add_edge(nodes[z], nodes[w], ());
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = tarjan_scc(&graph)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            v.sort_unstable();
            v
        })
        .filter(|class| {
            class
                .iter()
                .all(|&z| (0..m).all(|w| fc.matrix[w][z] == 0 || class.binary_search(&w).is_ok()))
        })
        .collect();
    classes.sort();
    classes.iter().map(|class| class_measure(fc, class)).collect()
}

/// Stationary vector supported on a closed class.
fn class_measure(fc: &FiniteCorrespondence, class: &[usize]) -> Result<FiniteMeasure> {
    let k = class.len();
    let d = f64::from(fc.degree());
    // (M_C − d I) μ = 0 with the last row replaced by Σ μ = 1
    let mut sys = DMatrix::from_fn(k, k, |a, b| {
        f64::from(fc.matrix[class[a]][class[b]]) - if a == b { d } else { 0.0 }
    });
    for b in 0..k {
        sys[(k - 1, b)] = 1.0;
    }
    let mut rhs = DVector::zeros(k);
    rhs[k - 1] = 1.0;
    let lu = sys.clone().lu();
    let mut x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::DeciderDisagreement("stationary system is singular".into()))?;
    // one step of iterative refinement
    let r = &rhs - &sys * &x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }
    let mut mu = vec![0.0; fc.m()];
    for (a, &i) in class.iter().enumerate() {
        mu[i] = x[a].max(0.0);
    }
    let total: f64 = mu.iter().sum();
    mu.iter_mut().for_each(|v| *v /= total);
    let mu = FiniteMeasure { mu };
    let defect = invariance_defect(fc, &mu)?;
    if defect > STATIONARY_TOL {
        return Err(Error::NotInvariant { defect });
    }
    Ok(mu)
}

/// Kronecker product: the multiplicity matrix of `F₁ × F₂` on states
/// `(i₁, i₂) ↦ i₁·m₂ + i₂`.
pub fn kron_product(a: &FiniteCorrespondence, b: &FiniteCorrespondence) -> Result<FiniteCorrespondence> {
    let size = a.m() * b.m();
    if size > KRON_CAP {
        return Err(Error::SizeCap { size, cap: KRON_CAP });
    }
    let mb = b.m();
    let matrix = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| a.matrix[i / mb][j / mb] * b.matrix[i % mb][j % mb])
                .collect()
        })
        .collect();
    FiniteCorrespondence::new(matrix)
}
