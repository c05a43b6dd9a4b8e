//! Riemann matrix of `(E^2, M)` with `E = C/O`.
//!
//! `O^2` is a rank-4 lattice in `C^2` with basis `(1,0), (w,0), (0,1), (0,w)`.
//! The polarization is the alternating form `E(u, v) = Tr(u^* M v / delta)`,
//! which is the `w`-coordinate of `u^* M v`. A symplectic basis
//! `e1, e2, f1, f2` with `E(e_i, f_j) = [i = j]` gives `tau = Omega_e^-1 Omega_f`.

use astro_float::BigFloat;

use super::bigcomplex::{real, BigComplex};
use crate::error::{Error, Result};
use crate::hermitian::{HermitianForm, VectorO2};
use crate::quad_order::{Int, Order, OrderElement};

/// Integer 4x4 matrix; for a basis, column `j` holds the coordinates of vector `j`.
pub type IntMatrix4 = [[Int; 4]; 4];

/// `J = [[0, I], [-I, 0]]`.
pub const STANDARD_J: IntMatrix4 = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]];

#[derive(Clone, Debug)]
pub struct RiemannMatrix {
    pub tau: [[BigComplex; 2]; 2],
    /// Symplectic basis of `O^2` the matrix was computed from, if any.
    pub basis: Option<IntMatrix4>,
}

fn lattice_vector(v: &[Int; 4]) -> VectorO2 {
    VectorO2::new(OrderElement::new(v[0], v[1]), OrderElement::new(v[2], v[3]))
}

fn unit_vector(i: usize) -> [Int; 4] {
    let mut v = [0; 4];
    v[i] = 1;
    v
}

/// Gram matrix of `E` on the standard basis of `O^2`.
pub fn riemann_form(m: &HermitianForm) -> IntMatrix4 {
    let mut a = [[0; 4]; 4];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = m.inner(&lattice_vector(&unit_vector(i)), &lattice_vector(&unit_vector(j))).y;
        }
    }
    a
}

fn pair(a: &IntMatrix4, u: &[Int; 4], v: &[Int; 4]) -> Int {
    let mut s = 0;
    for i in 0..4 {
        for j in 0..4 {
            s += u[i] * a[i][j] * v[j];
        }
    }
    s
}

fn axpy(y: &mut [Int; 4], k: Int, x: &[Int; 4]) {
    for (a, b) in y.iter_mut().zip(x) {
        *a += k * b;
    }
}

/// `B^T A B` for integer matrices.
pub fn congruent(a: &IntMatrix4, b: &IntMatrix4) -> IntMatrix4 {
    let mut r = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let bi: [Int; 4] = std::array::from_fn(|k| b[k][i]);
            let bj: [Int; 4] = std::array::from_fn(|k| b[k][j]);
            r[i][j] = pair(a, &bi, &bj);
        }
    }
    r
}

/// Frobenius reduction of a unimodular alternating form: a basis (as columns)
/// `e1, e2, f1, f2` with `B^T A B = J`.
pub fn symplectic_basis(a: &IntMatrix4) -> Result<IntMatrix4> {
    let not_unimodular = || Error::Numerical("alternating form is not unimodular".into());
    let mut rest: Vec<[Int; 4]> = (0..4).map(unit_vector).collect();
    let mut es = Vec::new();
    let mut fs = Vec::new();
    while !rest.is_empty() {
        let e = rest.remove(0);
        // Euclid on the values E(e, r) until a single one is nonzero.
        loop {
            let nz: Vec<usize> = (0..rest.len()).filter(|&j| pair(a, &e, &rest[j]) != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let j0 = *nz.iter().min_by_key(|&&j| pair(a, &e, &rest[j]).abs()).expect("nonempty");
            let v0 = pair(a, &e, &rest[j0]);
            let pivot = rest[j0];
            for &j in &nz {
                if j != j0 {
                    let q = pair(a, &e, &rest[j]) / v0;
                    axpy(&mut rest[j], -q, &pivot);
                }
            }
        }
        let j0 = (0..rest.len()).find(|&j| pair(a, &e, &rest[j]) != 0).ok_or_else(not_unimodular)?;
        let v = pair(a, &e, &rest[j0]);
        if v.abs() != 1 {
            return Err(not_unimodular());
        }
        let mut f = rest.remove(j0);
        f.iter_mut().for_each(|c| *c *= v);
        for r in rest.iter_mut() {
            let (rf, re) = (pair(a, r, &f), pair(a, r, &e));
            axpy(r, -rf, &e);
            axpy(r, re, &f);
        }
        es.push(e);
        fs.push(f);
    }
    let cols: Vec<[Int; 4]> = es.into_iter().chain(fs).collect();
    let b: IntMatrix4 = std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i]));
    if congruent(a, &b) != STANDARD_J {
        return Err(not_unimodular());
    }
    Ok(b)
}

fn omega(order: &Order, prec: usize) -> BigComplex {
    let im = real::sqrt(&real::from_i128(order.disc().abs() as i128, prec), prec);
    let two = BigFloat::from_i32(2, prec);
    let re = real::from_i128(order.omega_trace(), prec);
    BigComplex::new(re.div(&two, prec, astro_float::RoundingMode::ToEven), im.div(&two, prec, astro_float::RoundingMode::ToEven), prec)
}

type CMat2 = [[BigComplex; 2]; 2];

fn cmul(a: &CMat2, b: &CMat2) -> CMat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j])))
}

fn cinv(a: &CMat2) -> CMat2 {
    let det = &(&a[0][0] * &a[1][1]) - &(&a[0][1] * &a[1][0]);
    let r = det.recip();
    [[&a[1][1] * &r, -(&a[0][1] * &r)], [-(&a[1][0] * &r), &a[0][0] * &r]]
}

impl RiemannMatrix {
    /// Wrap a given matrix after checking symmetry and `Im(tau) > 0`.
    pub fn from_tau(tau: CMat2) -> Result<Self> {
        let r = RiemannMatrix { tau, basis: None };
        r.check()?;
        Ok(r)
    }

    pub fn prec(&self) -> usize {
        self.tau[0][0].prec()
    }

    /// Imaginary part as `f64`, for bounds.
    pub fn imag_f64(&self) -> [[f64; 2]; 2] {
        std::array::from_fn(|i| std::array::from_fn(|j| real::to_f64(&self.tau[i][j].im)))
    }

    /// `log2 |tau_12 - tau_21|`.
    pub fn asymmetry_log2(&self) -> f64 {
        (&self.tau[0][1] - &self.tau[1][0]).log2_abs()
    }

    fn check(&self) -> Result<()> {
        let p = self.prec();
        if self.asymmetry_log2() >= -((p - 8) as f64) {
            return Err(Error::Numerical("period matrix is not symmetric".into()));
        }
        let y = self.imag_f64();
        if !(y[0][0] > 0.0 && y[0][0] * y[1][1] - y[0][1] * y[1][0] > 0.0) {
            return Err(Error::Numerical("imaginary part is not positive definite".into()));
        }
        Ok(())
    }
}

/// Riemann matrix of the polarized surface `(E^2, M)` at `prec` bits.
pub fn riemann_matrix(m: &HermitianForm, prec: usize) -> Result<RiemannMatrix> {
    if prec < 128 {
        return Err(Error::Numerical(format!("precision {prec} is below 128 bits")));
    }
    let order = m.order();
    let b = symplectic_basis(&riemann_form(m))?;
    let w = omega(&order, prec);
    let coord = |x: Int, y: Int| &BigComplex::from_i128(x, prec) + &w.scale_int(y);
    // Column j of the period matrix is the complex image of basis vector j.
    let period: [[BigComplex; 4]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| coord(b[2 * i][j], b[2 * i + 1][j])));
    let omega_e: CMat2 = std::array::from_fn(|i| std::array::from_fn(|j| period[i][j].clone()));
    let omega_f: CMat2 = std::array::from_fn(|i| std::array::from_fn(|j| period[i][j + 2].clone()));
    let tau = cmul(&cinv(&omega_e), &omega_f);
    let r = RiemannMatrix { tau, basis: Some(b) };
    r.check()?;
    Ok(r)
}
