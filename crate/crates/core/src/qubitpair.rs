//! Two gravitationally coupled double-well qubits.
//!
//! All 4×4 objects use the fixed basis order `|e,e⟩, |g,g⟩, |e,g⟩, |g,e⟩`
//! (indices [`EE`], [`GG`], [`EG`], [`GE`]). In this basis the Hamiltonian is
//! block diagonal: `ωσz − ℧σx` on `{ee, gg}` and `−℧σx` on `{eg, ge}`.

use ndarray::{array, Array2};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{Complex, Real};

pub const EE: usize = 0;
pub const GG: usize = 1;
pub const EG: usize = 2;
pub const GE: usize = 3;

/// Index in the ordered basis of the product state `|q1, q2⟩` with
/// `e = 0`, `g = 1`.
pub const fn basis_index(q1: usize, q2: usize) -> usize {
    match (q1, q2) {
        (0, 0) => EE,
        (1, 1) => GG,
        (0, 1) => EG,
        _ => GE,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitPairModel<T> {
    /// Level splitting ω of each qubit.
    pub omega: T,
    /// Newtonian Rabi coupling ℧.
    pub uu: T,
    /// Constant energy `−(α/2)(1/d + 1/d')`, normally dropped. When set it is
    /// added to the Hamiltonian and shows up as a global phase in evolution.
    pub offset: Option<T>,
}

impl<T: Real> QubitPairModel<T> {
    pub fn new(omega: T, uu: T) -> Result<Self> {
        if !(omega >= T::zero()) || !(uu >= T::zero()) || !omega.is_finite() || !uu.is_finite() {
            return Err(Error::Domain(format!("need omega >= 0 and uu >= 0, got ({omega}, {uu})")));
        }
        Ok(Self { omega, uu, offset: None })
    }

    pub fn with_offset(mut self, offset: T) -> Self {
        self.offset = Some(offset);
        self
    }

    /// `ω' = sqrt(ω² + ℧²)`.
    pub fn omega_prime(&self) -> T {
        self.omega.hypot(self.uu)
    }

    fn shift(&self) -> T {
        self.offset.unwrap_or_else(T::zero)
    }

    pub fn hamiltonian_matrix(&self) -> Array2<T> {
        let (w, u, z) = (self.omega, self.uu, T::zero());
        let mut h = array![[w, -u, z, z], [-u, -w, z, z], [z, z, z, -u], [z, z, -u, z],];
        if let Some(c) = self.offset {
            for i in 0..4 {
                h[[i, i]] += c;
            }
        }
        h
    }

    /// Closed-form spectrum `{−ω', −℧, ℧, ω'}` (plus any offset), ascending.
    pub fn eigenvalues(&self) -> [T; 4] {
        let wp = self.omega_prime();
        let c = self.shift();
        [c - wp, c - self.uu, c + self.uu, c + wp]
    }

    /// `exp(−iHt)` in closed form.
    pub fn evolution_operator(&self, t: T) -> Array2<Complex<T>> {
        let wp = self.omega_prime();
        let (s, c) = (wp * t).sin_cos();
        let (su, cu) = (self.uu * t).sin_cos();
        // ω/ω' and ℧/ω' are taken as 0 and 1 in the degenerate ω' = 0 case.
        let (rw, ru) = if wp > T::zero() { (self.omega / wp, self.uu / wp) } else { (T::zero(), T::zero()) };
        let z = Complex::new(T::zero(), T::zero());
        let mut u = Array2::from_elem((4, 4), z);
        u[[EE, EE]] = Complex::new(c, -rw * s);
        u[[EE, GG]] = Complex::new(T::zero(), ru * s);
        u[[GG, EE]] = Complex::new(T::zero(), ru * s);
        u[[GG, GG]] = Complex::new(c, rw * s);
        u[[EG, EG]] = Complex::new(cu, T::zero());
        u[[EG, GE]] = Complex::new(T::zero(), su);
        u[[GE, EG]] = Complex::new(T::zero(), su);
        u[[GE, GE]] = Complex::new(cu, T::zero());
        if let Some(off) = self.offset {
            let phase = Complex::new(T::zero(), -off * t).exp();
            u.mapv_inplace(|x| x * phase);
        }
        u
    }

    pub fn evolve(&self, state: &TwoQubitState<T>, t: T) -> Result<TwoQubitState<T>> {
        state.check_normalized()?;
        let u = self.evolution_operator(t);
        let mut out = [Complex::new(T::zero(), T::zero()); 4];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..4 {
                *o += u[[i, j]] * state.amps[j];
            }
        }
        Ok(TwoQubitState { amps: out })
    }

    /// Purity deficit of `|e,e⟩` evolved for time `t`:
    /// `(2℧²/ω'²) sin²ω't (1 − (℧²/ω'²) sin²ω't)`.
    pub fn purity_deficit_closed_form(&self, t: T) -> T {
        let wp = self.omega_prime();
        if wp == T::zero() {
            return T::zero();
        }
        let r2 = (self.uu / wp).powi(2);
        let s2 = (wp * t).sin().powi(2);
        T::lit(2.0) * r2 * s2 * (T::one() - r2 * s2)
    }

    /// `(1/√2)(sqrt(1 − ω/ω')|e,e⟩ + sqrt(1 + ω/ω')|g,g⟩)`, eigenvalue `−ω'`.
    ///
    /// With the `−℧σx⊗σx` coupling both amplitudes share a sign; a relative
    /// minus sign gives the ground state of `+℧σx⊗σx` instead. Purity is the
    /// same either way.
    pub fn ground_state(&self) -> TwoQubitState<T> {
        let wp = self.omega_prime();
        let r = if wp > T::zero() { self.omega / wp } else { T::zero() };
        let h = T::FRAC_1_SQRT_2();
        let mut amps = [Complex::new(T::zero(), T::zero()); 4];
        amps[EE] = Complex::new(h * (T::one() - r).max(T::zero()).sqrt(), T::zero());
        amps[GG] = Complex::new(h * (T::one() + r).sqrt(), T::zero());
        TwoQubitState { amps }
    }

    /// `|g,e⟩` population starting from `|e,g⟩`: `sin²(℧t)`.
    pub fn rabi_population(&self, t: T) -> T {
        (self.uu * t).sin().powi(2)
    }

    /// `⟨ψ|H|ψ⟩`.
    pub fn energy(&self, state: &TwoQubitState<T>) -> T {
        let h = self.hamiltonian_matrix();
        let mut e = Complex::new(T::zero(), T::zero());
        for i in 0..4 {
            for j in 0..4 {
                e += state.amps[i].conj() * state.amps[j] * h[[i, j]];
            }
        }
        e.re
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState<T> {
    pub amps: [Complex<T>; 4],
}

impl<T: Real> TwoQubitState<T> {
    pub fn basis(index: usize) -> Self {
        let mut amps = [Complex::new(T::zero(), T::zero()); 4];
        amps[index] = Complex::new(T::one(), T::zero());
        Self { amps }
    }

    /// Normalises arbitrary amplitudes; fails on the zero vector.
    pub fn normalized(amps: [Complex<T>; 4]) -> Result<Self> {
        let n = amps.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::Unnormalized { norm_sq: (n * n).to_f64_() });
        }
        Ok(Self { amps: amps.map(|a| a / n) })
    }

    /// Product state `(a1|e⟩ + b1|g⟩) ⊗ (a2|e⟩ + b2|g⟩)`.
    pub fn product(q1: [Complex<T>; 2], q2: [Complex<T>; 2]) -> Self {
        let mut amps = [Complex::new(T::zero(), T::zero()); 4];
        for i in 0..2 {
            for j in 0..2 {
                amps[basis_index(i, j)] = q1[i] * q2[j];
            }
        }
        Self { amps }
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - T::one()).abs() > T::tol(1e-12) {
            return Err(Error::Unnormalized { norm_sq: n.to_f64_() });
        }
        Ok(())
    }

    pub fn probability(&self, index: usize) -> T {
        self.amps[index].norm_sqr()
    }

    pub fn density(&self) -> TwoQubitDensity<T> {
        let mut m = Array2::from_elem((4, 4), Complex::new(T::zero(), T::zero()));
        for i in 0..4 {
            for j in 0..4 {
                m[[i, j]] = self.amps[i] * self.amps[j].conj();
            }
        }
        TwoQubitDensity { matrix: m }
    }

    pub fn purity_deficit(&self) -> T {
        self.density().purity_deficit()
    }
}

/// 4×4 density matrix in the ordered basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity<T> {
    pub matrix: Array2<Complex<T>>,
}

impl<T: Real> TwoQubitDensity<T> {
    pub fn new(matrix: Array2<Complex<T>>) -> Result<Self> {
        if matrix.dim() != (4, 4) {
            return Err(Error::Domain(format!("density must be 4x4, got {:?}", matrix.dim())));
        }
        let rho = Self { matrix };
        let herm = rho.hermiticity_defect();
        if herm > T::tol(1e-10) {
            return Err(Error::Domain(format!("density is not Hermitian (defect {herm})")));
        }
        let tr = rho.trace();
        if (tr - T::one()).abs() > T::tol(1e-10) {
            return Err(Error::Domain(format!("density trace is {tr}, not 1")));
        }
        Ok(rho)
    }

    pub fn trace(&self) -> T {
        (0..4).map(|i| self.matrix[[i, i]].re).sum()
    }

    pub fn hermiticity_defect(&self) -> T {
        linalg::max_abs_diff(&self.matrix, &linalg::adjoint(&self.matrix))
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    pub fn population(&self, index: usize) -> T {
        self.matrix[[index, index]].re
    }

    /// Reduced state of qubit 1 (`qubit == 0`) or qubit 2 (`qubit == 1`), in
    /// the single-qubit basis `|e⟩, |g⟩`.
    pub fn reduced(&self, qubit: usize) -> [[Complex<T>; 2]; 2] {
        let mut r = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let (i, j) = if qubit == 0 {
                        (basis_index(a, c), basis_index(b, c))
                    } else {
                        (basis_index(c, a), basis_index(c, b))
                    };
                    r[a][b] += self.matrix[[i, j]];
                }
            }
        }
        r
    }

    /// `1 − Tr ρ1²`.
    pub fn purity_deficit(&self) -> T {
        let r = self.reduced(0);
        let mut tr = T::zero();
        for a in 0..2 {
            for b in 0..2 {
                tr += (r[a][b] * r[b][a]).re;
            }
        }
        T::one() - tr
    }

    pub fn purity(&self) -> T {
        let m = self.matrix.dot(&self.matrix);
        (0..4).map(|i| m[[i, i]].re).sum()
    }
}
