//! Igusa-Clebsch invariants of binary sextics through Clebsch's transvectants,
//! over exact rationals or high-precision complex numbers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::bigcomplex::BigComplex;
use crate::error::{Error, Result};

/// Field operations shared by the exact and the numeric invariant computation.
pub trait Scalar: Clone {
    /// The integer `n` in the same field (and precision) as `self`.
    fn constant(&self, n: i128) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn over(&self, o: &Self) -> Self;
}

impl Scalar for BigRational {
    fn constant(&self, n: i128) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn over(&self, o: &Self) -> Self {
        self / o
    }
}

impl Scalar for BigComplex {
    fn constant(&self, n: i128) -> Self {
        BigComplex::from_i128(n, self.prec())
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn over(&self, o: &Self) -> Self {
        self / o
    }
}

/// Binary form `sum c[i] x^i z^(n-i)` of degree `n = c.len() - 1`.
#[derive(Clone, Debug)]
struct Form<F> {
    c: Vec<F>,
}

impl<F: Scalar> Form<F> {
    fn degree(&self) -> usize {
        self.c.len() - 1
    }

    fn dx(&self) -> Self {
        let c = (1..self.c.len()).map(|i| self.c[i].times(&self.c[i].constant(i as i128))).collect();
        Form { c }
    }

    fn dz(&self) -> Self {
        let n = self.degree();
        let c = (0..n).map(|i| self.c[i].times(&self.c[i].constant((n - i) as i128))).collect();
        Form { c }
    }

    fn derive(&self, x_times: usize, z_times: usize) -> Self {
        let mut f = self.clone();
        for _ in 0..x_times {
            f = f.dx();
        }
        for _ in 0..z_times {
            f = f.dz();
        }
        f
    }

    fn mul(&self, o: &Self) -> Self {
        let zero = self.c[0].constant(0);
        let mut c = vec![zero; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].plus(&a.times(b));
            }
        }
        Form { c }
    }

    fn add_scaled(&mut self, o: &Self, k: &F) {
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a = a.plus(&b.times(k));
        }
    }

    fn scaled(&self, k: &F) -> Self {
        Form { c: self.c.iter().map(|a| a.times(k)).collect() }
    }

    fn constant_term(&self) -> F {
        debug_assert_eq!(self.degree(), 0);
        self.c[0].clone()
    }
}

fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}

fn binomial(n: usize, k: usize) -> i128 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// The `k`-th transvectant `(f, g)_k`, normalized by `(n-k)! (m-k)! / (n! m!)`.
fn transvectant<F: Scalar>(f: &Form<F>, g: &Form<F>, k: usize) -> Form<F> {
    let (n, m) = (f.degree(), g.degree());
    let one = f.c[0].constant(1);
    let zero = one.constant(0);
    let mut acc = Form { c: vec![zero; n + m - 2 * k + 1] };
    for j in 0..=k {
        let term = f.derive(k - j, j).mul(&g.derive(j, k - j));
        let sign = if j % 2 == 0 { 1 } else { -1 };
        acc.add_scaled(&term, &one.constant(sign * binomial(k, j)));
    }
    let num = one.constant(factorial(n - k) * factorial(m - k));
    let den = one.constant(factorial(n) * factorial(m));
    acc.scaled(&num.over(&den))
}

/// The Igusa-Clebsch invariants `I2, I4, I6, I10`.
#[derive(Clone, Debug)]
pub struct IgusaClebsch<F> {
    pub i2: F,
    pub i4: F,
    pub i6: F,
    pub i10: F,
}

/// Three weight-zero invariants `I2^5/I10`, `I2^3 I4/I10`, `I2^2 I6/I10`.
#[derive(Clone, Debug)]
pub struct IgusaInvariants<F> {
    pub j: [F; 3],
}

/// Igusa-Clebsch invariants of the sextic with coefficients `f`, constant
/// term first; a shorter list is read as a sextic with vanishing top terms.
pub fn igusa_clebsch<F: Scalar>(f: &[F]) -> IgusaClebsch<F> {
    assert!(!f.is_empty() && f.len() <= 7, "expected at most 7 coefficients");
    let zero = f[0].constant(0);
    let mut c = f.to_vec();
    c.resize(7, zero);
    let f = Form { c };

    let i = transvectant(&f, &f, 4);
    let delta = transvectant(&i, &i, 2);
    let y1 = transvectant(&f, &i, 4);
    let y2 = transvectant(&i, &y1, 2);
    let y3 = transvectant(&i, &y2, 2);
    let a = transvectant(&f, &f, 6).constant_term();
    let b = transvectant(&i, &i, 4).constant_term();
    let cc = transvectant(&i, &delta, 4).constant_term();
    let d = transvectant(&y3, &y1, 2).constant_term();

    let k = |n: i128| a.constant(n);
    let a2 = a.times(&a);
    let a3 = a2.times(&a);
    let a5 = a3.times(&a2);
    let ab = a.times(&b);
    let i2 = k(-120).times(&a);
    let i4 = k(-720).times(&a2).plus(&k(6750).times(&b));
    let i6 = k(8640).times(&a3).minus(&k(108000).times(&ab)).plus(&k(202500).times(&cc));
    let i10 = k(-62208)
        .times(&a5)
        .plus(&k(972000).times(&a3).times(&b))
        .plus(&k(1620000).times(&a2).times(&cc))
        .minus(&k(3037500).times(&ab).times(&b))
        .minus(&k(6075000).times(&b).times(&cc))
        .minus(&k(4556250).times(&d));
    IgusaClebsch { i2, i4, i6, i10 }
}

impl<F: Scalar> IgusaClebsch<F> {
    pub fn absolute(&self) -> IgusaInvariants<F> {
        let i2_2 = self.i2.times(&self.i2);
        let i2_3 = i2_2.times(&self.i2);
        let i2_5 = i2_3.times(&i2_2);
        IgusaInvariants { j: [i2_5.over(&self.i10), i2_3.times(&self.i4).over(&self.i10), i2_2.times(&self.i6).over(&self.i10)] }
    }
}

/// Exact absolute invariants of `y^2 = f(x)` for an integral or rational
/// `f` of degree 5 or 6, constant term first.
pub fn igusa_invariants_exact(f: &[BigRational]) -> Result<IgusaInvariants<BigRational>> {
    let deg = f.iter().rposition(|c| !c.is_zero());
    if !matches!(deg, Some(5) | Some(6)) || f.len() > 7 {
        return Err(Error::SingularCurve(format!("degree {deg:?} is not 5 or 6")));
    }
    let ic = igusa_clebsch(f);
    if ic.i10.is_zero() {
        return Err(Error::SingularCurve("discriminant vanishes".into()));
    }
    Ok(ic.absolute())
}

pub fn integer_coefficients(f: &[i64]) -> Vec<BigRational> {
    f.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect()
}

/// Expand `prod (x - r)` over the given roots, constant term first.
pub fn poly_from_roots<F: Scalar>(roots: &[F], one: &F) -> Vec<F> {
    let mut c = vec![one.clone()];
    for r in roots {
        let mut next = vec![one.constant(0); c.len() + 1];
        for (i, a) in c.iter().enumerate() {
            next[i + 1] = next[i + 1].plus(a);
            next[i] = next[i].minus(&a.times(r));
        }
        c = next;
    }
    c
}

/// `f(d/x) x^6 / d^3 = f(x)` for `e^degree = value`, checked exactly: the
/// coefficients satisfy `c_k = c_(6-k) e^(3-k)` and every power of `e`
/// involved must be rational unless both coefficients vanish.
pub fn has_involution(f: &[i64], degree: u32, value: i64) -> bool {
    let mut c = f.to_vec();
    c.resize(7, 0);
    let v = BigRational::from_integer(BigInt::from(value));
    (0..=3usize).all(|k| {
        let e = 3 - k as u32;
        if !e.is_multiple_of(degree) {
            return c[k] == 0 && c[6 - k] == 0;
        }
        let p = num_traits::pow(v.clone(), (e / degree) as usize);
        BigRational::from_integer(BigInt::from(c[k])) == BigRational::from_integer(BigInt::from(c[6 - k])) * p
    }) && c.iter().any(|x| *x != 0)
}
