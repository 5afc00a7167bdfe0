//! Small dense complex determinants.
//!
//! [`det_lu`] is the brute-force route used to check every closed form in the
//! crate. [`u_m`] and [`v_ml`] evaluate the two structured determinants that
//! appear when the n-cube characteristic matrix is expanded along its first
//! column: a ones row over an "arrow" block with `a_1` down the first column
//! and `-a_j` on the diagonal, and the same block with one column removed and
//! a free last row `b`.

use num_complex::Complex64;

use crate::error::{invalid, Result};

pub const MAX_DIM: usize = 64;

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl SmallComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return invalid(format!(
                "matrix dimension must be in 1..={MAX_DIM}, got {dim}"
            ));
        }
        Ok(SmallComplexMatrix {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return invalid("matrix rows must all have length equal to the row count");
        }
        let mut m = Self::zeros(dim)?;
        m.entries = rows.into_iter().flatten().collect();
        Ok(m)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Complex64::new(v, 0.0)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn mul(&self, other: &SmallComplexMatrix) -> Result<SmallComplexMatrix> {
        if self.dim != other.dim {
            return invalid("matrix dimensions differ");
        }
        let n = self.dim;
        let mut out = Self::zeros(n)?;
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                for j in 0..n {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn check_finite(&self) -> Result<()> {
        if self
            .entries
            .iter()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return invalid("matrix has a non-finite entry");
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for SmallComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SmallComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

/// Row-pivoted LU factors, `P M = L U`.
#[derive(Debug, Clone)]
pub struct LuFactors {
    dim: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
    swaps: usize,
    singular: bool,
}

impl LuFactors {
    pub fn new(m: &SmallComplexMatrix) -> Result<Self> {
        m.check_finite()?;
        let n = m.dim;
        let mut lu = m.entries.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let mut singular = false;
        for k in 0..n {
            let (p, pmax) =
                (k..n)
                    .map(|i| (i, lu[i * n + k].norm()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pmax == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                if f != Complex64::new(0.0, 0.0) {
                    for j in k + 1..n {
                        let ukj = lu[k * n + j];
                        lu[i * n + j] -= f * ukj;
                    }
                }
            }
        }
        Ok(LuFactors {
            dim: n,
            lu,
            perm,
            swaps,
            singular,
        })
    }

    pub fn det(&self) -> Complex64 {
        if self.singular {
            return Complex64::new(0.0, 0.0);
        }
        let n = self.dim;
        let prod = (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * self.lu[k * n + k]);
        if self.swaps % 2 == 1 {
            -prod
        } else {
            prod
        }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// Solves `M x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[i * n + j];
                x[i] = x[i] - l * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[i * n + j];
                x[i] = x[i] - u * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }

    /// Solves `Mᴴ x = b`.
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        // Mᴴ = Uᴴ Lᴴ P, so solve Uᴴ z = b, Lᴴ w = z, then x = Pᵀ w.
        let mut z = b.to_vec();
        for i in 0..n {
            for j in 0..i {
                let u = self.lu[j * n + i].conj();
                z[i] = z[i] - u * z[j];
            }
            z[i] /= self.lu[i * n + i].conj();
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let l = self.lu[j * n + i].conj();
                z[i] = z[i] - l * z[j];
            }
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = z[k];
        }
        x
    }
}

/// Determinant by partial-pivoted elimination. Exactly singular input gives 0.
pub fn det_lu(m: &SmallComplexMatrix) -> Result<Complex64> {
    Ok(LuFactors::new(m)?.det())
}

/// Estimate of the smallest singular value by inverse iteration.
///
/// Returns 0 for a matrix that is singular to working precision.
pub fn smallest_singular_value(m: &SmallComplexMatrix) -> Result<f64> {
    const ITERATIONS: usize = 12;
    let lu = LuFactors::new(m)?;
    if lu.is_singular() {
        return Ok(0.0);
    }
    let n = m.dim;
    let mut x: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 / (i as f64 + 1.0), 0.25 * i as f64 / n as f64))
        .collect();
    normalize(&mut x);
    let mut sigma = f64::INFINITY;
    for _ in 0..ITERATIONS {
        let y = lu.solve(&x);
        let ny = vec_norm(&y);
        if !ny.is_finite() {
            return Ok(0.0);
        }
        sigma = 1.0 / ny;
        let mut w = lu.solve_adjoint(&y);
        if !vec_norm(&w).is_finite() {
            return Ok(0.0);
        }
        normalize(&mut w);
        x = w;
    }
    Ok(sigma)
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let n = vec_norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|z| *z /= n);
    }
}

/// Product of all entries except the one at `skip` (and `skip2`, if given).
pub(crate) fn product_except(a: &[Complex64], skip: usize, skip2: Option<usize>) -> Complex64 {
    a.iter()
        .enumerate()
        .filter(|&(i, _)| i != skip && Some(i) != skip2)
        .fold(Complex64::new(1.0, 0.0), |acc, (_, &z)| acc * z)
}

/// Closed form of the ones-row arrow determinant:
/// `(-1)^{m-1} Σ_j Π_{i≠j} a_i`.
pub fn u_m(a: &[Complex64]) -> Result<Complex64> {
    let m = a.len();
    if m < 2 {
        return invalid(format!("u_m needs m >= 2, got {m}"));
    }
    let sum: Complex64 = (0..m).map(|j| product_except(a, j, None)).sum();
    Ok(if m.is_multiple_of(2) { -sum } else { sum })
}

/// Closed form of the arrow determinant with column `l` (1-based) moved to
/// the `b` row: `(-1)^{l+1} Σ_{k≠l} (Π_{i≠l,k} a_i)(b_k - b_l)`.
///
/// The `Π_{i≠l} a_i / a_k` factor is formed as a product with `a_k` left out,
/// so vanishing `a_k` is fine.
pub fn v_ml(a: &[Complex64], b: &[Complex64], l: usize) -> Result<Complex64> {
    let m = a.len();
    if b.len() != m {
        return invalid(format!("v_ml needs |a| = |b|, got {} and {}", m, b.len()));
    }
    if m < 2 || l < 2 || l > m {
        return invalid(format!("v_ml needs 2 <= l <= m, got l = {l}, m = {m}"));
    }
    let li = l - 1;
    let sum: Complex64 = (0..m)
        .filter(|&k| k != li)
        .map(|k| product_except(a, li, Some(k)) * (b[k] - b[li]))
        .sum();
    Ok(if l.is_multiple_of(2) { -sum } else { sum })
}

/// The `m × m` matrix whose determinant is [`u_m`].
pub fn build_u_matrix(a: &[Complex64]) -> Result<SmallComplexMatrix> {
    let m = a.len();
    if m < 2 {
        return invalid(format!("u_m needs m >= 2, got {m}"));
    }
    let mut mat = SmallComplexMatrix::zeros(m)?;
    for j in 0..m {
        mat[(0, j)] = Complex64::new(1.0, 0.0);
    }
    for r in 1..m {
        mat[(r, 0)] = a[0];
        mat[(r, r)] = -a[r];
    }
    Ok(mat)
}

/// The `m × m` matrix whose determinant is [`v_ml`]: ones row, arrow rows for
/// `j ∈ {2..m} \ {l}`, then `(b_1, …, b_m)`.
pub fn build_v_matrix(a: &[Complex64], b: &[Complex64], l: usize) -> Result<SmallComplexMatrix> {
    let m = a.len();
    if b.len() != m {
        return invalid(format!("v_ml needs |a| = |b|, got {} and {}", m, b.len()));
    }
    if m < 2 || l < 2 || l > m {
        return invalid(format!("v_ml needs 2 <= l <= m, got l = {l}, m = {m}"));
    }
    let mut mat = SmallComplexMatrix::zeros(m)?;
    for j in 0..m {
        mat[(0, j)] = Complex64::new(1.0, 0.0);
        mat[(m - 1, j)] = b[j];
    }
    let mut r = 1;
    for j in 1..m {
        if j == l - 1 {
            continue;
        }
        mat[(r, 0)] = a[0];
        mat[(r, j)] = -a[j];
        r += 1;
    }
    debug_assert_eq!(r, m - 1);
    Ok(mat)
}
