//! Positive definite unimodular Hermitian forms `[[a, b], [conj(b), d]]` over
//! the maximal order, and their reduction under `GL_2(O)`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::intmath::{ceil_div, floor_div, isqrt};
use crate::lattice::{vectors_up_to, Gram};
use crate::quad_order::{elements_of_norm_at_most, unit_combination, Discriminant, IdealLattice, Int, Order, OrderElement};

/// A column vector `(x1, x2)` in `O^2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VectorO2 {
    pub x1: OrderElement,
    pub x2: OrderElement,
}

impl VectorO2 {
    pub const fn new(x1: OrderElement, x2: OrderElement) -> Self {
        VectorO2 { x1, x2 }
    }

    pub fn is_zero(&self) -> bool {
        self.x1.is_zero() && self.x2.is_zero()
    }

    pub fn scale(&self, order: &Order, e: OrderElement) -> Self {
        VectorO2::new(order.mul(self.x1, e), order.mul(self.x2, e))
    }

    pub fn add(&self, o: &VectorO2) -> Self {
        VectorO2::new(self.x1 + o.x1, self.x2 + o.x2)
    }

    /// The coordinates generate the unit ideal.
    pub fn is_primitive(&self, order: &Order) -> bool {
        if order.is_unit(self.x1) || order.is_unit(self.x2) {
            return true;
        }
        IdealLattice::ideal_generated_by(order, &[self.x1, self.x2]).is_some_and(|l| l.norm() == 1)
    }
}

/// A 2x2 matrix over the order, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mat2(pub [[OrderElement; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([[OrderElement::ONE, OrderElement::ZERO], [OrderElement::ZERO, OrderElement::ONE]])
    }

    pub fn from_columns(x: VectorO2, y: VectorO2) -> Self {
        Mat2([[x.x1, y.x1], [x.x2, y.x2]])
    }

    pub fn column(&self, j: usize) -> VectorO2 {
        VectorO2::new(self.0[0][j], self.0[1][j])
    }

    pub fn neg(&self) -> Self {
        let m = self.0;
        Mat2([[-m[0][0], -m[0][1]], [-m[1][0], -m[1][1]]])
    }

    pub fn mul(&self, order: &Order, o: &Mat2) -> Mat2 {
        let (p, q) = (&self.0, &o.0);
        let mut r = [[OrderElement::ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = order.mul(p[i][0], q[0][j]) + order.mul(p[i][1], q[1][j]);
            }
        }
        Mat2(r)
    }

    pub fn conj(&self, order: &Order) -> Mat2 {
        let m = self.0;
        Mat2([[order.conj(m[0][0]), order.conj(m[0][1])], [order.conj(m[1][0]), order.conj(m[1][1])]])
    }

    pub fn conj_transpose(&self, order: &Order) -> Mat2 {
        let m = self.conj(order).0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn det(&self, order: &Order) -> OrderElement {
        let m = self.0;
        order.mul(m[0][0], m[1][1]) - order.mul(m[0][1], m[1][0])
    }

    pub fn is_invertible(&self, order: &Order) -> bool {
        order.is_unit(self.det(order))
    }

    /// Inverse in `GL_2(O)`.
    pub fn inverse(&self, order: &Order) -> Option<Mat2> {
        let det = self.det(order);
        if !order.is_unit(det) {
            return None;
        }
        let inv = order.conj(det);
        let m = self.0;
        let f = |e: OrderElement| order.mul(e, inv);
        Some(Mat2([[f(m[1][1]), f(-m[0][1])], [f(-m[1][0]), f(m[0][0])]]))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

/// Sort key for forms: lexicographic in `(a, d, b)`, where among the `b` the
/// one with larger trace comes first, then the one with larger `omega`-coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormOrderKey {
    a: Int,
    d: Int,
    neg_trace_b: Int,
    neg_by: Int,
}

/// `[[a, b], [conj(b), d]]` with `a*d - Norm(b) = 1` and `a > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HermitianForm {
    disc: Discriminant,
    pub a: Int,
    pub b: OrderElement,
    pub d: Int,
}

impl HermitianForm {
    pub fn new(disc: Discriminant, a: Int, b: OrderElement, d: Int) -> Result<Self> {
        let order = disc.order();
        if a <= 0 || d <= 0 {
            return Err(Error::InvalidForm(format!("diagonal ({a}, {d}) must be positive")));
        }
        let det = a * d - order.norm(b);
        if det != 1 {
            return Err(Error::InvalidForm(format!("determinant is {det}, expected 1")));
        }
        Ok(HermitianForm { disc, a, b, d })
    }

    /// The form with the given `a` and `b`, solving `det = 1` for `d`.
    pub fn from_a_b(disc: Discriminant, a: Int, b: OrderElement) -> Result<Self> {
        let nb = disc.order().norm(b) + 1;
        if a <= 0 || nb % a != 0 {
            return Err(Error::InvalidForm(format!("{a} does not divide Norm({b}) + 1")));
        }
        Self::new(disc, a, b, nb / a)
    }

    pub fn identity(disc: Discriminant) -> Self {
        HermitianForm { disc, a: 1, b: OrderElement::ZERO, d: 1 }
    }

    pub fn disc(&self) -> Discriminant {
        self.disc
    }

    pub fn order(&self) -> Order {
        self.disc.order()
    }

    pub fn det(&self) -> Int {
        self.a * self.d - self.order().norm(self.b)
    }

    pub fn key(&self) -> FormOrderKey {
        FormOrderKey { a: self.a, d: self.d, neg_trace_b: -self.order().trace(self.b), neg_by: -self.b.y }
    }

    pub fn matrix(&self) -> Mat2 {
        let o = self.order();
        Mat2([[OrderElement::int(self.a), self.b], [o.conj(self.b), OrderElement::int(self.d)]])
    }

    /// The complex conjugate form `[[a, conj(b)], [b, d]]`.
    pub fn conj(&self) -> HermitianForm {
        HermitianForm { b: self.order().conj(self.b), ..*self }
    }

    /// `x^* M y`.
    pub fn inner(&self, x: &VectorO2, y: &VectorO2) -> OrderElement {
        let o = self.order();
        let my1 = y.x1.scale(self.a) + o.mul(self.b, y.x2);
        let my2 = o.mul(o.conj(self.b), y.x1) + y.x2.scale(self.d);
        o.mul(o.conj(x.x1), my1) + o.mul(o.conj(x.x2), my2)
    }

    /// `v^* M v`.
    pub fn value(&self, v: &VectorO2) -> Int {
        let o = self.order();
        let cross = o.trace(o.mul(o.conj(v.x1), o.mul(self.b, v.x2)));
        self.a * o.norm(v.x1) + cross + self.d * o.norm(v.x2)
    }

    /// `P^* M P`; fails if `P` is not invertible over the order.
    pub fn transform(&self, p: &Mat2) -> Result<HermitianForm> {
        let o = self.order();
        if !p.is_invertible(&o) {
            return Err(Error::InvalidForm(format!("{p} is not in GL_2(O)")));
        }
        Ok(self.transform_unchecked(p))
    }

    fn transform_unchecked(&self, p: &Mat2) -> HermitianForm {
        let (x, y) = (p.column(0), p.column(1));
        HermitianForm { disc: self.disc, a: self.value(&x), b: self.inner(&x, &y), d: self.value(&y) }
    }

    /// Gram matrix of `(u, v) -> Tr(u^* M v)` on the `Z`-basis
    /// `(1,0), (w,0), (0,1), (0,w)` of `O^2`.
    pub fn trace_gram(&self) -> Gram<4> {
        let o = self.order();
        let (one, w, zero) = (OrderElement::ONE, OrderElement::OMEGA, OrderElement::ZERO);
        let basis = [VectorO2::new(one, zero), VectorO2::new(w, zero), VectorO2::new(zero, one), VectorO2::new(zero, w)];
        let mut g = [[0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                g[i][j] = o.trace(self.inner(&basis[i], &basis[j]));
            }
        }
        Gram(g)
    }

    /// Exact `P^* M P` as a matrix, for any `P` (used when `P` is not invertible).
    pub fn congruence_matrix(&self, p: &Mat2) -> Mat2 {
        let o = self.order();
        p.conj_transpose(&o).mul(&o, &self.matrix()).mul(&o, p)
    }
}

impl fmt::Display for HermitianForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bc = self.order().conj(self.b);
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, bc, self.d)
    }
}

impl PartialOrd for HermitianForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HermitianForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.disc.cmp(&other.disc).then(self.key().cmp(&other.key()))
    }
}

/// All nonzero vectors `v` with `v^* M v <= bound`, paired with their values
/// and sorted by value.
///
/// Works on `O^2` as a rank-4 lattice over `Z` with basis `(1,0), (w,0),
/// (0,1), (0,w)`, where `2 v^* M v` is an integral quadratic form.
pub fn vectors_of_value_at_most(m: &HermitianForm, bound: Int) -> Vec<(Int, VectorO2)> {
    let mut out: Vec<(Int, VectorO2)> = vectors_up_to(&m.trace_gram(), 2 * bound)
        .into_iter()
        .map(|(q, c)| (q / 2, VectorO2::new(OrderElement::new(c[0], c[1]), OrderElement::new(c[2], c[3]))))
        .collect();
    out.sort();
    out
}

/// The same set as [`vectors_of_value_at_most`] by a direct scan: for each
/// `x2` with `Norm(x2) <= a*bound`, the admissible `x1` make
/// `Norm(a*x1 + b*x2) <= a*bound - Norm(x2)`, a disc scanned row by row.
pub fn vectors_of_value_at_most_direct(m: &HermitianForm, bound: Int) -> Vec<(Int, VectorO2)> {
    let o = m.order();
    let absd = o.disc().abs() as Int;
    let s = o.omega_trace();
    let a = m.a;
    let mut out = Vec::new();
    if bound <= 0 {
        return out;
    }
    let ab = a * bound;
    for (nx2, x2) in elements_of_norm_at_most(&IdealLattice::unit(), &o, ab) {
        let c = o.mul(m.b, x2);
        let t = ab - nx2;
        // w = a*x1 + c must satisfy Norm(w) <= t.
        let wy_max = isqrt(4 * t / absd);
        let y1_lo = ceil_div(-wy_max - c.y, a);
        let y1_hi = floor_div(wy_max - c.y, a);
        for y1 in y1_lo..=y1_hi {
            let wy = a * y1 + c.y;
            let disc = 4 * t - absd * wy * wy;
            if disc < 0 {
                continue;
            }
            let r = isqrt(disc);
            // 2*wx lies in [-s*wy - r, -s*wy + r].
            let x1_lo = ceil_div(ceil_div(-s * wy - r, 2) - c.x, a);
            let x1_hi = floor_div(floor_div(-s * wy + r, 2) - c.x, a);
            for x1x in x1_lo..=x1_hi {
                let v = VectorO2::new(OrderElement::new(x1x, y1), x2);
                if v.is_zero() {
                    continue;
                }
                let val = m.value(&v);
                if val <= bound {
                    out.push((val, v));
                }
            }
        }
    }
    out.sort();
    out
}

/// All vectors `v` with `v^* M v = n`, optionally only those with coprime coordinates.
pub fn short_vectors(m: &HermitianForm, n: Int, coprime_only: bool) -> Vec<VectorO2> {
    let o = m.order();
    vectors_of_value_at_most(m, n)
        .into_iter()
        .filter(|(val, v)| *val == n && (!coprime_only || v.is_primitive(&o)))
        .map(|(_, v)| v)
        .collect()
}

/// The same set as [`short_vectors`], found by pairing elements `u, v` with
/// `Norm(u) + Norm(v) = a*n` and keeping those with `u - b*v` divisible by `a`.
pub fn short_vectors_by_norm_pairs(m: &HermitianForm, n: Int, coprime_only: bool) -> Vec<VectorO2> {
    let o = m.order();
    let an = m.a * n;
    let mut out = Vec::new();
    if n <= 0 {
        return out;
    }
    for (nx2, x2) in elements_of_norm_at_most(&IdealLattice::unit(), &o, an) {
        let bx2 = o.mul(m.b, x2);
        for u in o.elements_of_norm(an - nx2) {
            let Some(x1) = (u - bx2).div_int(m.a) else { continue };
            let v = VectorO2::new(x1, x2);
            if !coprime_only || v.is_primitive(&o) {
                out.push(v);
            }
        }
    }
    out.sort();
    out
}

/// A matrix in `SL_2(O)` whose first column is the primitive vector `x`.
pub fn basis_completion(order: &Order, x: &VectorO2) -> Option<Mat2> {
    let (lambda, mu) = unit_combination(order, x.x1, x.x2)?;
    Some(Mat2([[x.x1, -mu], [x.x2, lambda]]))
}

/// The `mu` in `O` minimizing `Norm(b + a*mu)`, with every tie.
fn closest_translates(order: &Order, a: Int, b: OrderElement) -> (Int, Vec<OrderElement>) {
    let s = order.omega_trace();
    let y0 = floor_div(-b.y, a);
    let mut best = Int::MAX;
    let mut ties = Vec::new();
    for my in y0 - 1..=y0 + 2 {
        let yy = b.y + a * my;
        let x0 = floor_div(-s * yy - 2 * b.x, 2 * a);
        for mx in x0 - 1..=x0 + 2 {
            let mu = OrderElement::new(mx, my);
            let nrm = order.norm(b + mu.scale(a));
            match nrm.cmp(&best) {
                Ordering::Less => {
                    best = nrm;
                    ties.clear();
                    ties.push(mu);
                }
                Ordering::Equal => ties.push(mu),
                Ordering::Greater => {}
            }
        }
    }
    (best, ties)
}

/// Alternately translate `b` by multiples of `a` and swap the basis vectors
/// until `a <= d` and `b` is closest to zero modulo `a`.
fn pseudo_reduce(m: &mut HermitianForm, p: &mut Mat2) {
    let o = m.order();
    let swap = Mat2([[OrderElement::ZERO, OrderElement::ONE], [OrderElement::ONE, OrderElement::ZERO]]);
    loop {
        let (_, ties) = closest_translates(&o, m.a, m.b);
        let q = Mat2([[OrderElement::ONE, ties[0]], [OrderElement::ZERO, OrderElement::ONE]]);
        *m = m.transform_unchecked(&q);
        *p = p.mul(&o, &q);
        if m.d < m.a {
            *m = m.transform_unchecked(&swap);
            *p = p.mul(&o, &swap);
        } else {
            return;
        }
    }
}

/// The reduced form congruent to `m` and a matrix `P` with `P^* m P` equal to it.
pub fn reduce(m: &HermitianForm) -> (HermitianForm, Mat2) {
    let o = m.order();
    let mut cur = *m;
    let mut p = Mat2::identity();
    pseudo_reduce(&mut cur, &mut p);

    // Move the primitive vector of smallest value to the first basis position.
    // The search bound doubles, so the cost tracks the true minimum rather
    // than the current (possibly much larger) `a`.
    let mut bound = 1;
    while bound < cur.a {
        let found = vectors_of_value_at_most(&cur, bound).into_iter().find(|(_, v)| v.is_primitive(&o));
        match found {
            Some((_, x)) => {
                let q = basis_completion(&o, &x).expect("primitive vector has a completion");
                cur = cur.transform_unchecked(&q);
                p = p.mul(&o, &q);
                pseudo_reduce(&mut cur, &mut p);
            }
            None => bound = (2 * bound).min(cur.a - 1).max(bound + 1),
        }
    }
    let a = cur.a;

    // For every primitive x of value a, the completions are eps*y0 + mu*x and
    // the off-diagonal entry becomes eps*(b0 + a*mu).
    let mut best_norm = Int::MAX;
    let mut cands: Vec<(VectorO2, VectorO2, OrderElement)> = Vec::new();
    for x in short_vectors(&cur, a, true) {
        let q = basis_completion(&o, &x).expect("primitive vector has a completion");
        let y0 = q.column(1);
        let b0 = cur.inner(&x, &y0);
        let (r, ties) = closest_translates(&o, a, b0);
        if r > best_norm {
            continue;
        }
        if r < best_norm {
            best_norm = r;
            cands.clear();
        }
        for mu in ties {
            cands.push((x, y0, mu));
        }
    }
    let units = o.units();
    let mut best: Option<(FormOrderKey, HermitianForm, Mat2)> = None;
    for (x, y0, mu) in cands {
        let y_base = y0.add(&x.scale(&o, mu));
        for &eps in &units {
            let y = y_base.scale(&o, eps);
            let q = Mat2::from_columns(x, y);
            let f = cur.transform_unchecked(&q);
            let key = f.key();
            if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                best = Some((key, f, q));
            }
        }
    }
    let (_, f, q) = best.expect("reduction always finds a basis");
    let p = p.mul(&o, &q);
    debug_assert_eq!(m.transform_unchecked(&p), f);
    (f, p)
}

pub fn is_congruent(m1: &HermitianForm, m2: &HermitianForm) -> Result<bool> {
    if m1.disc != m2.disc {
        return Err(Error::DiscriminantMismatch(m1.disc.get(), m2.disc.get()));
    }
    Ok(reduce(m1).0 == reduce(m2).0)
}
