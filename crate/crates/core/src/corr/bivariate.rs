use num_complex::Complex64;

use crate::numerics::{ComplexPolynomial, SpherePoint};

/// `P(z, w) = Σ c[i][j] zⁱ wʲ`, stored as a rectangular grid trimmed so that
/// the last row and the last column each contain a nonzero entry.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariatePolynomial {
    grid: Vec<Vec<Complex64>>,
}

impl BivariatePolynomial {
    /// Builds from `(i, j, c)` triples; repeated indices are summed.
    pub fn from_terms(terms: &[(usize, usize, Complex64)]) -> Self {
        let rows = terms.iter().map(|t| t.0 + 1).max().unwrap_or(1);
        let cols = terms.iter().map(|t| t.1 + 1).max().unwrap_or(1);
        let mut grid = vec![vec![Complex64::new(0.0, 0.0); cols]; rows];
        for &(i, j, c) in terms {
            grid[i][j] += c;
        }
        BivariatePolynomial::from_grid(grid)
    }

    /// Real-coefficient shorthand for [`from_terms`](Self::from_terms).
    pub fn from_real_terms(terms: &[(usize, usize, f64)]) -> Self {
        let t: Vec<_> = terms
            .iter()
            .map(|&(i, j, c)| (i, j, Complex64::new(c, 0.0)))
            .collect();
        BivariatePolynomial::from_terms(&t)
    }

    pub fn from_grid(mut grid: Vec<Vec<Complex64>>) -> Self {
        let cols = grid.iter().map(Vec::len).max().unwrap_or(0).max(1);
        if grid.is_empty() {
            grid.push(Vec::new());
        }
        for row in &mut grid {
            row.resize(cols, Complex64::new(0.0, 0.0));
        }
        let nonzero = |c: &Complex64| c.re != 0.0 || c.im != 0.0;
        let rows = grid
            .iter()
            .rposition(|row| row.iter().any(nonzero))
            .map_or(1, |i| i + 1);
        let cols = (0..cols)
            .rev()
            .find(|&j| grid.iter().any(|row| nonzero(&row[j])))
            .map_or(1, |j| j + 1);
        grid.truncate(rows);
        for row in &mut grid {
            row.truncate(cols);
        }
        BivariatePolynomial { grid }
    }

    pub fn grid(&self) -> &[Vec<Complex64>] {
        &self.grid
    }

    pub fn deg_z(&self) -> usize {
        self.grid.len() - 1
    }

    pub fn deg_w(&self) -> usize {
        self.grid[0].len() - 1
    }

    pub fn coefficient(&self, i: usize, j: usize) -> Complex64 {
        self.grid
            .get(i)
            .and_then(|row| row.get(j))
            .copied()
            .unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.grid
            .iter()
            .flatten()
            .all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.grid
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, row| acc * z + horner(row, w))
    }

    /// `P(·, w)` as a polynomial in `z` of nominal degree `deg_z`.
    ///
    /// At `w = ∞` the chart `ζ = 1/w` is used: the slice is the coefficient
    /// of `w^{deg_w}`.
    pub fn slice_in_z(&self, w: SpherePoint) -> ComplexPolynomial {
        let top = self.deg_w();
        let coeffs = self
            .grid
            .iter()
            .map(|row| match w {
                SpherePoint::Finite(w) => horner(row, w),
                SpherePoint::Infinity => row[top],
            })
            .collect();
        ComplexPolynomial::new(coeffs)
    }

    /// `P(z, ·)` as a polynomial in `w` of nominal degree `deg_w`.
    pub fn slice_in_w(&self, z: SpherePoint) -> ComplexPolynomial {
        let top = self.deg_z();
        let coeffs = (0..=self.deg_w())
            .map(|j| match z {
                SpherePoint::Finite(z) => self
                    .grid
                    .iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, row| acc * z + row[j]),
                SpherePoint::Infinity => self.grid[top][j],
            })
            .collect();
        ComplexPolynomial::new(coeffs)
    }

    /// `P(z, z)`, whose roots are the fixed points of the component.
    pub fn diagonal(&self) -> ComplexPolynomial {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.deg_z() + self.deg_w() + 1];
        for (i, row) in self.grid.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                coeffs[i + j] += c;
            }
        }
        ComplexPolynomial::new(coeffs)
    }

    /// Grid divided by its largest-modulus entry, so that proportional
    /// polynomials normalize to the same grid.
    pub fn normalized(&self) -> Vec<Vec<Complex64>> {
        let pivot = self
            .grid
            .iter()
            .flatten()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or_default();
        if pivot.norm() == 0.0 {
            return self.grid.clone();
        }
        self.grid
            .iter()
            .map(|row| row.iter().map(|&c| c / pivot).collect())
            .collect()
    }

    /// True when the two polynomials agree up to a nonzero scalar, comparing
    /// normalized grids entrywise at relative tolerance `tol`.
    pub fn is_proportional(&self, other: &BivariatePolynomial, tol: f64) -> bool {
        if self.deg_z() != other.deg_z() || self.deg_w() != other.deg_w() {
            return false;
        }
        let (pi, pj) = argmax(&self.grid);
        let sa = self.grid[pi][pj];
        let sb = other.grid[pi][pj];
        if sa.norm() == 0.0 || sb.norm() == 0.0 {
            return false;
        }
        self.grid.iter().zip(&other.grid).all(|(ra, rb)| {
            ra.len() == rb.len() && ra.iter().zip(rb).all(|(&x, &y)| (x / sa - y / sb).norm() <= tol)
        })
    }
}

fn argmax(grid: &[Vec<Complex64>]) -> (usize, usize) {
    let mut best = (0, 0);
    let mut best_norm = -1.0;
    for (i, row) in grid.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if c.norm() > best_norm {
                best_norm = c.norm();
                best = (i, j);
            }
        }
    }
    best
}

fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}
