use rug::{Complex, Float};

use super::{cabs, vec_norm_inf, PrecisionContext};
use crate::error::{Error, Result};

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Complex>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize, bits: u32) -> Self {
        Self { rows, cols, entries: vec![Complex::new(bits); rows * cols] }
    }

    pub fn identity(n: usize, bits: u32) -> Self {
        let mut m = Self::zeros(n, n, bits);
        for i in 0..n {
            m.set(i, i, Complex::with_val(bits, 1));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let entries: Vec<Complex> = rows.into_iter().flatten().collect();
        assert_eq!(entries.len(), r * c, "ragged rows");
        Self { rows: r, cols: c, entries }
    }

    /// 2×2 matrix `[[a, b], [c, d]]`.
    pub fn mat2(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        Self { rows: 2, cols: 2, entries: vec![a, b, c, d] }
    }

    pub fn bits(&self) -> u32 {
        self.entries.first().map_or(64, |z| z.prec().0)
    }

    pub fn get(&self, i: usize, j: usize) -> &Complex {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn mul_vec(&self, x: &[Complex]) -> Vec<Complex> {
        let bits = self.bits();
        (0..self.rows)
            .map(|i| {
                let mut acc = Complex::new(bits);
                for j in 0..self.cols {
                    acc += Complex::with_val(bits, self.get(i, j) * &x[j]);
                }
                acc
            })
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let bits = self.bits();
        let mut out = Self::zeros(self.rows, other.cols, bits);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Complex::new(bits);
                for k in 0..self.cols {
                    acc += Complex::with_val(bits, self.get(i, k) * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| Complex::with_val(a.prec(), a - b))
            .collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, c: &Complex) -> Self {
        let entries = self.entries.iter().map(|a| Complex::with_val(a.prec(), a * c)).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> Float {
        vec_norm_inf(&self.entries)
    }

    /// Determinant of a 2×2 matrix.
    pub fn det2(&self) -> Complex {
        assert!(self.rows == 2 && self.cols == 2);
        let bits = self.bits();
        let ad = Complex::with_val(bits, self.get(0, 0) * self.get(1, 1));
        let bc = Complex::with_val(bits, self.get(0, 1) * self.get(1, 0));
        ad - bc
    }

    /// Inverse of a 2×2 matrix.
    pub fn inv2(&self) -> Self {
        let det = self.det2();
        let bits = self.bits();
        let m = |z: &Complex| Complex::with_val(bits, z / &det);
        let neg = |z: &Complex| -Complex::with_val(bits, z / &det);
        Self::mat2(m(self.get(1, 1)), neg(self.get(0, 1)), neg(self.get(1, 0)), m(self.get(0, 0)))
    }

    /// Largest entry modulus of `self − I`.
    pub fn dist_to_identity(&self) -> Float {
        let id = Self::identity(self.rows, self.bits());
        self.sub(&id).max_abs()
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        let entries = self.entries.iter().map(|a| a.clone().conj()).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }
}

/// Packed LU factors with the row permutation `perm[i]` = original row in position `i`.
#[derive(Clone, Debug)]
pub struct LuFactors {
    pub n: usize,
    pub lu: Vec<Complex>,
    pub perm: Vec<usize>,
    pub bits: u32,
}

#[derive(Clone, Debug)]
pub struct LuSolution {
    pub solution: Vec<Complex>,
    pub log_abs_det: f64,
    pub cond_estimate: f64,
}

impl LuFactors {
    /// Partial-pivoting factorization. A pivot below `2^(-bits+8)` times its original row max is singular.
    pub fn factor(m: &DenseMatrix, prec: &PrecisionContext) -> Result<Self> {
        assert_eq!(m.rows, m.cols, "square matrix required");
        let n = m.rows;
        let bits = prec.bits;
        let mut lu: Vec<Complex> = m.entries.iter().map(|z| Complex::with_val(bits, z)).collect();
        let row_max: Vec<Float> = (0..n).map(|i| vec_norm_inf(&m.entries[i * n..(i + 1) * n])).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        let thresh = Float::with_val(bits, Float::i_exp(1, 8 - bits as i32));
        for k in 0..n {
            let mut p = k;
            let mut best = cabs(&lu[k * n + k]);
            for i in k + 1..n {
                let a = cabs(&lu[i * n + k]);
                if a > best {
                    best = a;
                    p = i;
                }
            }
            let floor = Float::with_val(bits, &thresh * &row_max[perm[p]]);
            if best <= floor || best.is_zero() {
                return Err(Error::SingularMatrix { column: k, pivot: best.to_f64() });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k].clone();
            for i in k + 1..n {
                let l = Complex::with_val(bits, &lu[i * n + k] / &pivot);
                if l.is_zero() {
                    lu[i * n + k] = l;
                    continue;
                }
                for j in k + 1..n {
                    let t = Complex::with_val(bits, &l * &lu[k * n + j]);
                    lu[i * n + j] -= t;
                }
                lu[i * n + k] = l;
            }
        }
        Ok(Self { n, lu, perm, bits })
    }

    pub fn log_abs_det(&self) -> f64 {
        (0..self.n).map(|i| cabs(&self.lu[i * self.n + i]).ln().to_f64()).sum()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, rhs: &[Complex]) -> Vec<Complex> {
        let n = self.n;
        let bits = self.bits;
        let mut y: Vec<Complex> = self.perm.iter().map(|&p| Complex::with_val(bits, &rhs[p])).collect();
        for i in 0..n {
            for j in 0..i {
                let t = Complex::with_val(bits, &self.lu[i * n + j] * &y[j]);
                y[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = Complex::with_val(bits, &self.lu[i * n + j] * &y[j]);
                y[i] -= t;
            }
            y[i] /= &self.lu[i * n + i];
        }
        y
    }

    /// Solves `A^H x = b`.
    pub fn solve_adjoint(&self, rhs: &[Complex]) -> Vec<Complex> {
        let n = self.n;
        let bits = self.bits;
        let c = |z: &Complex| z.clone().conj();
        // A = P^T L U, so A^H = U^H L^H P.
        let mut y: Vec<Complex> = rhs.iter().map(|z| Complex::with_val(bits, z)).collect();
        for i in 0..n {
            for j in 0..i {
                let t = Complex::with_val(bits, &c(&self.lu[j * n + i]) * &y[j]);
                y[i] -= t;
            }
            y[i] /= c(&self.lu[i * n + i]);
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = Complex::with_val(bits, &c(&self.lu[j * n + i]) * &y[j]);
                y[i] -= t;
            }
        }
        let mut x = vec![Complex::new(bits); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i].clone();
        }
        x
    }

    /// Hager–Higham estimate of `‖A^{-1}‖_1`.
    pub fn inverse_norm1_estimate(&self) -> Float {
        let n = self.n;
        let bits = self.bits;
        let norm1 = |v: &[Complex]| {
            let mut s = Float::new(bits);
            for z in v {
                s += cabs(z);
            }
            s
        };
        let mut x: Vec<Complex> = vec![Complex::with_val(bits, 1) / n as u32; n];
        let mut est = Float::new(bits);
        let mut last_j = usize::MAX;
        for _ in 0..5 {
            let y = self.solve(&x);
            let e = norm1(&y);
            if e <= est && last_j != usize::MAX {
                break;
            }
            est = e;
            let xi: Vec<Complex> = y.iter().map(super::unit_phase).collect();
            let z = self.solve_adjoint(&xi);
            let mut j = 0;
            let mut zmax = Float::new(bits);
            for (i, zi) in z.iter().enumerate() {
                let a = cabs(zi);
                if a > zmax {
                    zmax = a;
                    j = i;
                }
            }
            let mut ztx = Complex::new(bits);
            for (zi, xi) in z.iter().zip(&x) {
                ztx += Complex::with_val(bits, &zi.clone().conj() * xi);
            }
            if zmax <= *ztx.real() || j == last_j {
                break;
            }
            x = vec![Complex::new(bits); n];
            x[j] = Complex::with_val(bits, 1);
            last_j = j;
        }
        // Higham's alternating test vector guards against adversarial cases.
        let alt: Vec<Complex> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                let v = if n > 1 { 1.0 + i as f64 / (n - 1) as f64 } else { 1.0 };
                Complex::with_val(bits, s * v)
            })
            .collect();
        let y = self.solve(&alt);
        let alt_est = norm1(&y) * 2u32 / (3 * n as u32);
        if alt_est > est {
            alt_est
        } else {
            est
        }
    }
}

fn matrix_norm1(m: &DenseMatrix) -> Float {
    let bits = m.bits();
    let mut best = Float::new(bits);
    for j in 0..m.cols {
        let mut s = Float::new(bits);
        for i in 0..m.rows {
            s += cabs(m.get(i, j));
        }
        if s > best {
            best = s;
        }
    }
    best
}

/// Solves `m x = rhs` with one step of iterative refinement and a 1-norm condition estimate.
pub fn lu_solve(m: &DenseMatrix, rhs: &[Complex], prec: &PrecisionContext) -> Result<LuSolution> {
    assert_eq!(m.rows, m.cols, "square matrix required");
    assert_eq!(rhs.len(), m.rows, "rhs length mismatch");
    let lu = LuFactors::factor(m, prec)?;
    let mut x = lu.solve(rhs);
    let ax = m.mul_vec(&x);
    let r: Vec<Complex> = rhs.iter().zip(&ax).map(|(b, a)| Complex::with_val(prec.bits, b - a)).collect();
    let dx = lu.solve(&r);
    for (xi, di) in x.iter_mut().zip(&dx) {
        *xi += di;
    }
    let cond = Float::with_val(prec.bits, matrix_norm1(m) * lu.inverse_norm1_estimate());
    Ok(LuSolution { solution: x, log_abs_det: lu.log_abs_det(), cond_estimate: cond.to_f64() })
}
