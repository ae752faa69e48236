//! Dense eigensolvers used throughout the crate.
//!
//! Real symmetric matrices go through Householder tridiagonalisation followed
//! by implicit QL iterations. Hermitian spectra use the real `2n` embedding.
//! Large tridiagonal problems (finite-difference Hamiltonians) use Sturm
//! bisection plus inverse iteration so only the requested eigenpairs are paid for.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};

/// Eigen-decomposition of a real symmetric matrix.
///
/// Eigenvalues are returned in ascending order; column `k` of the returned
/// matrix is the normalised eigenvector for eigenvalue `k`.
pub fn symmetric_eigen<T: Real>(a: &Array2<T>) -> Result<(Vec<T>, Array2<T>)> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Domain(format!("matrix is {}x{}, not square", n, a.ncols())));
    }
    if n == 0 {
        return Ok((Vec::new(), Array2::zeros((0, 0))));
    }
    let mut v: Vec<T> = a.iter().copied().collect();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tred2(n, &mut v, &mut d, &mut e);
    tql2(n, &mut v, &mut d, &mut e)?;
    let vecs = Array2::from_shape_vec((n, n), v).expect("shape matches buffer");
    Ok((d, vecs))
}

pub fn symmetric_eigenvalues<T: Real>(a: &Array2<T>) -> Result<Vec<T>> {
    symmetric_eigen(a).map(|(d, _)| d)
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// `H = A + iB` is embedded as the real symmetric `[[A, -B], [B, A]]`, whose
/// spectrum is that of `H` with every eigenvalue doubled.
pub fn hermitian_eigenvalues<T: Real>(h: &Array2<Complex<T>>) -> Result<Vec<T>> {
    let n = h.nrows();
    let mut m = Array2::zeros((2 * n, 2 * n));
    for i in 0..n {
        for j in 0..n {
            let z = h[[i, j]];
            m[[i, j]] = z.re;
            m[[i + n, j + n]] = z.re;
            m[[i, j + n]] = -z.im;
            m[[i + n, j]] = z.im;
        }
    }
    let vals = symmetric_eigenvalues(&m)?;
    Ok(vals.into_iter().step_by(2).collect())
}

/// Householder reduction to tridiagonal form (row-major `v`, overwritten by
/// the accumulated transformation).
fn tred2<T: Real>(n: usize, v: &mut [T], d: &mut [T], e: &mut [T]) {
    let zero = T::zero();
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
    }
    for i in (1..n).rev() {
        let mut scale = zero;
        let mut h = zero;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == zero {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = zero;
                v[j * n + i] = zero;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > zero {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = zero;
            }
            for j in 0..i {
                f = d[j];
                v[j * n + i] = f;
                g = e[j] + v[j * n + j] * f;
                for k in (j + 1)..i {
                    g += v[k * n + j] * d[k];
                    e[k] += v[k * n + j] * f;
                }
                e[j] = g;
            }
            f = zero;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    let dv = f * e[k] + g * d[k];
                    v[k * n + j] -= dv;
                }
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = zero;
            }
        }
        d[i] = h;
    }
    for i in 0..(n - 1) {
        v[(n - 1) * n + i] = v[i * n + i];
        v[i * n + i] = T::one();
        let h = d[i + 1];
        if h != zero {
            for k in 0..=i {
                d[k] = v[k * n + i + 1] / h;
            }
            for j in 0..=i {
                let mut g = zero;
                for k in 0..=i {
                    g += v[k * n + i + 1] * v[k * n + j];
                }
                for k in 0..=i {
                    let dv = g * d[k];
                    v[k * n + j] -= dv;
                }
            }
        }
        for k in 0..=i {
            v[k * n + i + 1] = zero;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
        v[(n - 1) * n + j] = zero;
    }
    v[(n - 1) * n + n - 1] = T::one();
    e[0] = zero;
}

/// Implicit QL on the tridiagonal (`d`, `e`), accumulating into `v`, then
/// sorting eigenpairs ascending.
fn tql2<T: Real>(n: usize, v: &mut [T], d: &mut [T], e: &mut [T]) -> Result<()> {
    let zero = T::zero();
    let one = T::one();
    let two = T::lit(2.0);
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = zero;
    let mut f = zero;
    let mut tst1 = zero;
    let eps = T::epsilon();
    let max_iter = 60 * n.max(1);
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m == n {
            m = n - 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > max_iter {
                    return Err(Error::NoConvergence { iterations: iter, detail: "symmetric QL iteration".into() });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(one);
                if p < zero {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;
                p = d[m];
                let mut c = one;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = zero;
                let mut s2 = zero;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let vk1 = v[k * n + i + 1];
                        let vk = v[k * n + i];
                        v[k * n + i + 1] = s * vk + c * vk1;
                        v[k * n + i] = c * vk - s * vk1;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
                if !e[l].is_finite() {
                    return Err(Error::NoConvergence {
                        iterations: iter,
                        detail: "non-finite value in QL iteration".into(),
                    });
                }
            }
        }
        d[l] += f;
        e[l] = zero;
    }
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            for j in 0..n {
                v.swap(j * n + i, j * n + k);
            }
        }
    }
    Ok(())
}

/// Symmetric tridiagonal matrix with diagonal `diag` and off-diagonal `off`
/// (`off.len() == diag.len() - 1`).
#[derive(Debug, Clone)]
pub struct SymTridiagonal<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
}

impl<T: Real> SymTridiagonal<T> {
    pub fn new(diag: Vec<T>, off: Vec<T>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Domain(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal",
                diag.len(),
                off.len()
            )));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: T) -> usize {
        let tiny = T::min_positive_value().sqrt();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < T::zero() {
            count += 1;
        }
        for i in 1..self.diag.len() {
            if q.abs() < tiny {
                q = if q < T::zero() { -tiny } else { tiny };
            }
            q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / q;
            if q < T::zero() {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (T, T) {
        let n = self.diag.len();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let mut r = T::zero();
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection to working precision.
    pub fn eigenvalue(&self, k: usize) -> T {
        let (mut lo, mut hi) = self.gershgorin();
        let two = T::lit(2.0);
        for _ in 0..200 {
            let mid = (lo + hi) / two;
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo + hi) / two
    }

    /// Solves `(T - sigma I) y = b` by Gaussian elimination with partial pivoting.
    fn shifted_solve(&self, sigma: T, b: &[T]) -> Vec<T> {
        let n = self.diag.len();
        let tiny = T::epsilon() * (T::one() + sigma.abs());
        // Row i holds (sub, main, sup, sup2) after pivoting.
        let mut main: Vec<T> = self.diag.iter().map(|&d| d - sigma).collect();
        let mut sup: Vec<T> = self.off.clone();
        sup.push(T::zero());
        let mut sup2 = vec![T::zero(); n];
        let mut sub: Vec<T> = self.off.clone();
        let mut rhs = b.to_vec();
        for i in 0..n.saturating_sub(1) {
            if sub[i].abs() > main[i].abs() {
                // swap rows i and i+1
                let (m0, s0, t0) = (main[i], sup[i], sup2[i]);
                main[i] = sub[i];
                sup[i] = main[i + 1];
                sup2[i] = sup[i + 1];
                let l = m0 / main[i];
                main[i + 1] = s0 - l * sup[i];
                sup[i + 1] = t0 - l * sup2[i];
                rhs.swap(i, i + 1);
                let ri = rhs[i];
                rhs[i + 1] -= l * ri;
                sub[i] = l;
            } else {
                if main[i].abs() < tiny {
                    main[i] = tiny;
                }
                let l = sub[i] / main[i];
                main[i + 1] -= l * sup[i];
                sup[i + 1] -= l * sup2[i];
                let ri = rhs[i];
                rhs[i + 1] -= l * ri;
                sub[i] = l;
            }
        }
        if main[n - 1].abs() < tiny {
            main[n - 1] = tiny;
        }
        let mut y = vec![T::zero(); n];
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            if i + 1 < n {
                acc -= sup[i] * y[i + 1];
            }
            if i + 2 < n {
                acc -= sup2[i] * y[i + 2];
            }
            y[i] = acc / main[i];
        }
        y
    }

    /// The `count` lowest eigenpairs. Eigenvectors are unit-norm in the plain
    /// Euclidean inner product and mutually orthogonalised (needed for the
    /// nearly degenerate tunnelling doublet).
    pub fn lowest(&self, count: usize) -> (Vec<T>, Vec<Vec<T>>) {
        let n = self.diag.len();
        let count = count.min(n);
        let values: Vec<T> = (0..count).map(|k| self.eigenvalue(k)).collect();
        let mut vectors: Vec<Vec<T>> = Vec::with_capacity(count);
        for (k, &lambda) in values.iter().enumerate() {
            // Deterministic, non-symmetric start so both parities are present.
            let mut x: Vec<T> = (0..n)
                .map(|i| T::one() + T::lit(0.37) * T::from_usize_(i) / T::from_usize_(n) + T::lit(0.01 * (k as f64)))
                .collect();
            normalize(&mut x);
            for _ in 0..4 {
                let mut y = self.shifted_solve(lambda, &x);
                for prev in &vectors {
                    let p = dot(prev, &y);
                    for (yi, &pi) in y.iter_mut().zip(prev) {
                        *yi -= p * pi;
                    }
                }
                normalize(&mut y);
                x = y;
            }
            vectors.push(x);
        }
        (values, vectors)
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn normalize<T: Real>(x: &mut [T]) {
    let nrm = dot(x, x).sqrt();
    if nrm > T::zero() {
        for xi in x.iter_mut() {
            *xi /= nrm;
        }
    }
}

/// `A·B` for complex matrices.
pub fn cmatmul<T: Real>(a: &Array2<Complex<T>>, b: &Array2<Complex<T>>) -> Array2<Complex<T>> {
    a.dot(b)
}

/// Conjugate transpose.
pub fn adjoint<T: Real>(a: &Array2<Complex<T>>) -> Array2<Complex<T>> {
    a.t().mapv(|z| z.conj())
}

/// Largest entry-wise modulus of `a - b`.
pub fn max_abs_diff<T: Real>(a: &Array2<Complex<T>>, b: &Array2<Complex<T>>) -> T {
    a.iter().zip(b.iter()).map(|(x, y)| (*x - *y).norm()).fold(T::zero(), T::max)
}

/// Kronecker product `a ⊗ b`.
pub fn kron<T: Real>(a: &Array2<T>, b: &Array2<T>) -> Array2<T> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[[i, j]];
            if aij == T::zero() {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[[i * br + k, j * bc + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn residual(a: &Array2<f64>, vals: &[f64], vecs: &Array2<f64>) -> f64 {
        let av = a.dot(vecs);
        let mut worst: f64 = 0.0;
        for k in 0..vals.len() {
            for i in 0..vals.len() {
                worst = worst.max((av[[i, k]] - vals[k] * vecs[[i, k]]).abs());
            }
        }
        worst
    }

    #[test]
    fn small_symmetric() {
        let a = array![[2.0, 1.0, 0.0], [1.0, 2.0, 1.0], [0.0, 1.0, 2.0]];
        let (vals, vecs) = symmetric_eigen(&a).unwrap();
        let s = 2f64.sqrt();
        for (v, e) in vals.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
            assert!((v - e).abs() < 1e-13);
        }
        assert!(residual(&a, &vals, &vecs) < 1e-13);
        let vtv = vecs.t().dot(&vecs);
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((vtv[[i, j]] - e).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn degenerate_and_diagonal() {
        let a = array![[1.0, 0.0, 0.0], [0.0, -3.0, 0.0], [0.0, 0.0, 1.0]];
        let vals = symmetric_eigenvalues(&a).unwrap();
        assert_eq!(vals, vec![-3.0, 1.0, 1.0]);
        let one = Array2::from_elem((1, 1), 5.0f32);
        assert_eq!(symmetric_eigenvalues(&one).unwrap(), vec![5.0]);
    }

    #[test]
    fn hermitian_pauli_y() {
        let i = Complex::new(0.0, 1.0);
        let z = Complex::new(0.0, 0.0);
        let h = array![[z, -i], [i, z]];
        let vals: Vec<f64> = hermitian_eigenvalues(&h).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tridiagonal_matches_dense() {
        let n = 40;
        let diag: Vec<f64> = (0..n).map(|i| ((i as f64) * 0.7).sin() + 2.0).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| -0.5 - 0.01 * i as f64).collect();
        let mut dense = Array2::zeros((n, n));
        for i in 0..n {
            dense[[i, i]] = diag[i];
            if i + 1 < n {
                dense[[i, i + 1]] = off[i];
                dense[[i + 1, i]] = off[i];
            }
        }
        let full = symmetric_eigenvalues(&dense).unwrap();
        let t = SymTridiagonal::new(diag, off).unwrap();
        let (vals, vecs) = t.lowest(3);
        for k in 0..3 {
            assert!((vals[k] - full[k]).abs() < 1e-12);
            let v = &vecs[k];
            for i in 0..n {
                let mut tv = t.diag[i] * v[i];
                if i > 0 {
                    tv += t.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    tv += t.off[i] * v[i + 1];
                }
                assert!((tv - vals[k] * v[i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn kron_dimensions() {
        let a = array![[0.0, 1.0], [1.0, 0.0]];
        let k = kron(&a, &a);
        assert_eq!(k.dim(), (4, 4));
        assert_eq!(k[[0, 3]], 1.0);
        assert_eq!(k[[1, 2]], 1.0);
    }
}
