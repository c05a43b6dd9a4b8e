//! Exact arithmetic in the maximal order of an imaginary quadratic field.
//!
//! Elements are written `x + y*omega` where `omega = sqrt(D)/2` for even `D`
//! and `omega = (1 + sqrt(D))/2` for odd `D`. In both cases `omega` is a root
//! of `X^2 - s*X + k` with `s = D mod 4` and `k = (s - D)/4`, so the same
//! formulas cover both parities.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmath::{exact_sqrt, ext_gcd, floor_div, gcd, is_squarefree, isqrt, prime_factors};

pub type Int = i128;

/// A negative fundamental discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Discriminant(i64);

impl Discriminant {
    pub fn new(delta: i64) -> Result<Self> {
        if Self::is_fundamental(delta) {
            Ok(Discriminant(delta))
        } else {
            Err(Error::InvalidDiscriminant(delta))
        }
    }

    pub fn is_fundamental(delta: i64) -> bool {
        if delta >= 0 {
            return false;
        }
        let d = delta as Int;
        match d.rem_euclid(4) {
            1 => is_squarefree(d),
            0 => {
                let m = d / 4;
                let r = m.rem_euclid(4);
                (r == 2 || r == 3) && is_squarefree(m)
            }
            _ => false,
        }
    }

    pub fn get(self) -> i64 {
        self.0
    }

    pub fn abs(self) -> i64 {
        -self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 % 2 != 0
    }

    pub fn order(self) -> Order {
        Order::new(self)
    }

    /// Distinct primes dividing the discriminant; their count is the number
    /// of prime discriminants in the factorization.
    pub fn prime_divisors(self) -> Vec<Int> {
        prime_factors(self.0 as Int)
    }
}

impl TryFrom<i64> for Discriminant {
    type Error = Error;
    fn try_from(v: i64) -> Result<Self> {
        Discriminant::new(v)
    }
}

impl From<Discriminant> for i64 {
    fn from(d: Discriminant) -> i64 {
        d.0
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `x + y*omega`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderElement {
    pub x: Int,
    pub y: Int,
}

impl OrderElement {
    pub const ZERO: OrderElement = OrderElement { x: 0, y: 0 };
    pub const ONE: OrderElement = OrderElement { x: 1, y: 0 };
    pub const OMEGA: OrderElement = OrderElement { x: 0, y: 1 };

    pub const fn new(x: Int, y: Int) -> Self {
        OrderElement { x, y }
    }

    pub const fn int(x: Int) -> Self {
        OrderElement { x, y: 0 }
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn scale(self, c: Int) -> Self {
        OrderElement::new(self.x * c, self.y * c)
    }

    /// Exact division by a rational integer, if it divides both coordinates.
    pub fn div_int(self, c: Int) -> Option<Self> {
        (c != 0 && self.x % c == 0 && self.y % c == 0).then(|| OrderElement::new(self.x / c, self.y / c))
    }
}

impl Add for OrderElement {
    type Output = OrderElement;
    fn add(self, o: OrderElement) -> OrderElement {
        OrderElement::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for OrderElement {
    fn add_assign(&mut self, o: OrderElement) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for OrderElement {
    type Output = OrderElement;
    fn sub(self, o: OrderElement) -> OrderElement {
        OrderElement::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for OrderElement {
    type Output = OrderElement;
    fn neg(self) -> OrderElement {
        OrderElement::new(-self.x, -self.y)
    }
}

impl Mul<Int> for OrderElement {
    type Output = OrderElement;
    fn mul(self, c: Int) -> OrderElement {
        self.scale(c)
    }
}

impl fmt::Display for OrderElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.x, self.y) {
            (x, 0) => write!(f, "{x}"),
            (0, 1) => write!(f, "w"),
            (0, -1) => write!(f, "-w"),
            (0, y) => write!(f, "{y}*w"),
            (x, 1) => write!(f, "{x}+w"),
            (x, -1) => write!(f, "{x}-w"),
            (x, y) if y < 0 => write!(f, "{x}{y}*w"),
            (x, y) => write!(f, "{x}+{y}*w"),
        }
    }
}

/// Multiplication context for the maximal order of a given discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Order {
    disc: Discriminant,
    s: Int,
    k: Int,
}

impl Order {
    pub fn new(disc: Discriminant) -> Self {
        let d = disc.get() as Int;
        let s = d.rem_euclid(4);
        Order { disc, s, k: (s - d) / 4 }
    }

    pub fn disc(&self) -> Discriminant {
        self.disc
    }

    /// Trace of omega (0 or 1).
    pub fn omega_trace(&self) -> Int {
        self.s
    }

    /// Norm of omega.
    pub fn omega_norm(&self) -> Int {
        self.k
    }

    pub fn mul(&self, a: OrderElement, b: OrderElement) -> OrderElement {
        OrderElement::new(a.x * b.x - self.k * a.y * b.y, a.x * b.y + a.y * b.x + self.s * a.y * b.y)
    }

    pub fn conj(&self, a: OrderElement) -> OrderElement {
        OrderElement::new(a.x + self.s * a.y, -a.y)
    }

    pub fn norm(&self, a: OrderElement) -> Int {
        a.x * a.x + self.s * a.x * a.y + self.k * a.y * a.y
    }

    pub fn trace(&self, a: OrderElement) -> Int {
        2 * a.x + self.s * a.y
    }

    /// The square root of the discriminant with positive imaginary part, `2*omega - s`.
    pub fn sqrt_disc(&self) -> OrderElement {
        OrderElement::new(-self.s, 2)
    }

    /// `a / b` when the quotient lies in the order.
    pub fn div_exact(&self, a: OrderElement, b: OrderElement) -> Option<OrderElement> {
        let nb = self.norm(b);
        if nb == 0 {
            return None;
        }
        self.mul(a, self.conj(b)).div_int(nb)
    }

    pub fn is_unit(&self, a: OrderElement) -> bool {
        self.norm(a) == 1
    }

    /// All units, in a fixed order starting with 1 and -1.
    pub fn units(&self) -> Vec<OrderElement> {
        let mut u = self.elements_of_norm(1);
        u.sort_by_key(|e| (e.y != 0, e.x < 0, e.y, e.x));
        u
    }

    pub fn unit_count(&self) -> usize {
        match self.disc.get() {
            -3 => 6,
            -4 => 4,
            _ => 2,
        }
    }

    /// All elements of the order with the given norm.
    pub fn elements_of_norm(&self, target: Int) -> Vec<OrderElement> {
        elements_of_norm_in_ideal(&IdealLattice::unit(), self, target)
    }

    /// Complex embedding with `omega` in the upper half plane (f64 approximation).
    pub fn to_complex_f64(&self, a: OrderElement) -> (f64, f64) {
        let im = ((self.disc.abs()) as f64).sqrt() / 2.0;
        (a.x as f64 + a.y as f64 * self.s as f64 / 2.0, a.y as f64 * im)
    }

    /// The total order used to pick canonical representatives: `a > b` when
    /// `a - b` has positive trace, or zero trace and positive imaginary part.
    pub fn cmp_elements(&self, a: OrderElement, b: OrderElement) -> std::cmp::Ordering {
        let diff = a - b;
        self.trace(diff).cmp(&0).then(diff.y.cmp(&0))
    }
}

/// A full-rank sublattice of the order in Hermite normal form: the
/// `Z`-span of `a` and `b + c*omega`, with `a, c > 0` and `0 <= b < a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IdealLattice {
    pub a: Int,
    pub b: Int,
    pub c: Int,
}

impl IdealLattice {
    pub fn unit() -> Self {
        IdealLattice { a: 1, b: 0, c: 1 }
    }

    /// Hermite normal form of the `Z`-span of the given elements.
    pub fn from_generators(gens: &[OrderElement]) -> Option<Self> {
        let mut pivot: Option<OrderElement> = None;
        let mut xs: Vec<Int> = Vec::new();
        for &g in gens {
            let Some(p) = pivot else {
                if g.y == 0 {
                    xs.push(g.x);
                } else {
                    pivot = Some(g);
                }
                continue;
            };
            if g.y == 0 {
                xs.push(g.x);
                continue;
            }
            let (d, u, v) = ext_gcd(p.y, g.y);
            let np = p.scale(u) + g.scale(v);
            let rest = p.scale(g.y / d) - g.scale(p.y / d);
            debug_assert_eq!(rest.y, 0);
            xs.push(rest.x);
            pivot = Some(np);
        }
        let mut p = pivot?;
        if p.y < 0 {
            p = -p;
        }
        let a = xs.iter().fold(0, |acc, &x| gcd(acc, x));
        if a == 0 {
            return None;
        }
        Some(IdealLattice { a, b: p.x.rem_euclid(a), c: p.y })
    }

    /// The ideal generated (as an `O`-module) by the given elements.
    pub fn ideal_generated_by(order: &Order, gens: &[OrderElement]) -> Option<Self> {
        let mut all = Vec::with_capacity(2 * gens.len());
        for &g in gens {
            all.push(g);
            all.push(order.mul(g, OrderElement::OMEGA));
        }
        Self::from_generators(&all)
    }

    pub fn basis(&self) -> [OrderElement; 2] {
        [OrderElement::int(self.a), OrderElement::new(self.b, self.c)]
    }

    pub fn norm(&self) -> Int {
        self.a * self.c
    }

    pub fn contains(&self, e: OrderElement) -> bool {
        if e.y % self.c != 0 {
            return false;
        }
        (e.x - self.b * (e.y / self.c)) % self.a == 0
    }

    /// Not contained in `mO` for any integer `m > 1`.
    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c) == 1
    }

    pub fn mul(&self, other: &IdealLattice, order: &Order) -> IdealLattice {
        let mut gens = Vec::with_capacity(4);
        for p in self.basis() {
            for q in other.basis() {
                gens.push(order.mul(p, q));
            }
        }
        IdealLattice::from_generators(&gens).expect("product of nonzero ideals is nonzero")
    }

    pub fn conj(&self, order: &Order) -> IdealLattice {
        let [p, q] = self.basis();
        IdealLattice::from_generators(&[order.conj(p), order.conj(q)]).expect("conjugate of nonzero ideal")
    }
}

/// All elements `X` of the ideal with `Norm(X) = target`.
pub fn elements_of_norm_in_ideal(ideal: &IdealLattice, order: &Order, target: Int) -> Vec<OrderElement> {
    if target < 0 {
        return Vec::new();
    }
    if target == 0 {
        return vec![OrderElement::ZERO];
    }
    let absd = order.disc.abs() as Int;
    let s = order.omega_trace();
    // Norm(X + Y*omega) = target forces |Y| <= sqrt(4*target/|D|).
    let ymax = isqrt(4 * target / absd);
    let vmax = ymax / ideal.c;
    let mut out = Vec::new();
    for v in -vmax..=vmax {
        let y = v * ideal.c;
        let disc = 4 * target - absd * y * y;
        let Some(r) = exact_sqrt(disc) else { continue };
        let roots: &[Int] = if r == 0 { &[0] } else { &[r, -r] };
        for &rr in roots {
            let twice_x = -s * y + rr;
            if twice_x % 2 != 0 {
                continue;
            }
            let x = twice_x / 2;
            if (x - v * ideal.b) % ideal.a == 0 {
                out.push(OrderElement::new(x, y));
            }
        }
    }
    out.sort();
    out
}

/// All elements `X` of the ideal with `Norm(X) <= bound`, paired with their norms.
pub fn elements_of_norm_at_most(ideal: &IdealLattice, order: &Order, bound: Int) -> Vec<(Int, OrderElement)> {
    let mut out = Vec::new();
    if bound < 0 {
        return out;
    }
    let absd = order.disc.abs() as Int;
    let s = order.omega_trace();
    let ymax = isqrt(4 * bound / absd);
    let vmax = ymax / ideal.c;
    for v in -vmax..=vmax {
        let y = v * ideal.c;
        let disc = 4 * bound - absd * y * y;
        if disc < 0 {
            continue;
        }
        // 2x lies in [-s*y - r, -s*y + r].
        let r = isqrt(disc);
        let lo = floor_div(-s * y - r, 2) - 1;
        let hi = floor_div(-s * y + r, 2) + 1;
        // Step through x in the residue class of v*b mod a.
        let start = lo + (v * ideal.b - lo).rem_euclid(ideal.a);
        let mut x = start;
        while x <= hi {
            let e = OrderElement::new(x, y);
            let n = order.norm(e);
            if n <= bound {
                out.push((n, e));
            }
            x += ideal.a;
        }
    }
    out.sort();
    out
}

/// Solve `lambda*x1 + mu*x2 = 1` in the order, when `x1, x2` generate the unit ideal.
/// The solution is size-reduced modulo `(x2, -x1)`.
pub fn unit_combination(order: &Order, x1: OrderElement, x2: OrderElement) -> Option<(OrderElement, OrderElement)> {
    // Generators x1, x1*w, x2, x2*w of the Z-module, each tagged with its
    // coefficient vector. The coefficients can grow far beyond the elements.
    type Tagged = (OrderElement, [BigInt; 4]);
    let tag = |e: OrderElement, i: usize| -> Tagged {
        let mut c: [BigInt; 4] = Default::default();
        c[i] = BigInt::one();
        (e, c)
    };
    let gens = [tag(x1, 0), tag(order.mul(x1, OrderElement::OMEGA), 1), tag(x2, 2), tag(order.mul(x2, OrderElement::OMEGA), 3)];
    fn comb(p: &Tagged, u: Int, q: &Tagged, v: Int) -> Tagged {
        let c = std::array::from_fn(|i| &p.1[i] * u + &q.1[i] * v);
        (p.0.scale(u) + q.0.scale(v), c)
    }
    let mut pivot: Option<Tagged> = None;
    let mut flat: Vec<Tagged> = Vec::new();
    for g in gens {
        match pivot.take() {
            None if g.0.y != 0 => pivot = Some(g),
            p if g.0.y == 0 => {
                pivot = p;
                flat.push(g);
            }
            Some(p) => {
                let (d, u, v) = ext_gcd(p.0.y, g.0.y);
                flat.push(comb(&p, g.0.y / d, &g, -(p.0.y / d)));
                pivot = Some(comb(&p, u, &g, v));
            }
            None => unreachable!(),
        }
    }
    let pivot = pivot?;
    if pivot.0.y.abs() != 1 {
        return None;
    }
    // gcd of the flat x-coordinates, tracked.
    let mut acc: Option<Tagged> = None;
    for f in flat {
        acc = Some(match acc {
            None => f,
            Some(a) => {
                let (_, u, v) = ext_gcd(a.0.x, f.0.x);
                comb(&a, u, &f, v)
            }
        });
    }
    let acc = acc?;
    if acc.0.x.abs() != 1 {
        return None;
    }
    let sign = acc.0.x;
    let [c0, c1, c2, c3] = acc.1.map(|c| c * sign);

    // Replace (lambda, mu) by (lambda + t x2, mu - t x1) with t the rounding
    // of -(lambda conj(x2) - mu conj(x1)) / (N(x1) + N(x2)).
    let big = |e: OrderElement| (BigInt::from(e.x), BigInt::from(e.y));
    let (s, k) = (BigInt::from(order.s), BigInt::from(order.k));
    let mul = |a: &(BigInt, BigInt), b: &(BigInt, BigInt)| -> (BigInt, BigInt) {
        (&a.0 * &b.0 - &k * &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0 + &s * &a.1 * &b.1)
    };
    let (lambda, mu) = ((c0, c1), (c2, c3));
    let (l2, m1) = (mul(&lambda, &big(order.conj(x2))), mul(&mu, &big(order.conj(x1))));
    let size = BigInt::from(order.norm(x1) + order.norm(x2));
    let round = |num: BigInt| -> BigInt { Integer::div_floor(&(num * 2 + &size), &(&size * 2)) };
    let t = (round(&m1.0 - &l2.0), round(&m1.1 - &l2.1));
    let (tx2, tx1) = (mul(&t, &big(x2)), mul(&t, &big(x1)));
    let small = |a: BigInt, b: BigInt| -> Option<OrderElement> { Some(OrderElement::new(a.to_i128()?, b.to_i128()?)) };
    let lambda = small(&lambda.0 + &tx2.0, &lambda.1 + &tx2.1)?;
    let mu = small(&mu.0 - &tx1.0, &mu.1 - &tx1.1)?;
    debug_assert_eq!(order.mul(lambda, x1) + order.mul(mu, x2), OrderElement::ONE);
    Some((lambda, mu))
}

/// Integral ideal `(n, alpha)` of norm `n`, with `alpha` normalized so that
/// `gcd(n, Norm(alpha)/n) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadIdeal {
    pub n: Int,
    pub alpha: OrderElement,
    lattice: IdealLattice,
}

impl QuadIdeal {
    pub fn new(order: &Order, n: Int, alpha: OrderElement) -> Result<Self> {
        if n <= 0 {
            return Err(Error::InvalidIdeal(format!("norm {n} must be positive")));
        }
        if order.norm(alpha) % n != 0 {
            return Err(Error::InvalidIdeal(format!("{n} does not divide Norm({alpha})")));
        }
        let lattice = IdealLattice::ideal_generated_by(order, &[OrderElement::int(n), alpha])
            .ok_or_else(|| Error::InvalidIdeal("degenerate generators".into()))?;
        if lattice.norm() != n {
            return Err(Error::InvalidIdeal(format!("(n, alpha) has norm {} not {n}", lattice.norm())));
        }
        if !lattice.is_primitive() {
            return Err(Error::InvalidIdeal("ideal is divisible by a rational integer".into()));
        }
        Ok(QuadIdeal { n, alpha, lattice })
    }

    /// The ideal attached to a reduced form `(a, b, c)`: `(a, (-b + sqrt(D))/2)`,
    /// with `alpha` shifted by multiples of `a` until `gcd(a, Norm(alpha)/a) = 1`.
    pub fn from_form(order: &Order, f: &BinaryForm) -> Self {
        let s = order.omega_trace();
        let base = OrderElement::new((-f.b - s) / 2, 1);
        let mut alpha = base;
        for j in 0..=(4 * f.a + 4) {
            alpha = base + OrderElement::int(j * f.a);
            if gcd(f.a, order.norm(alpha) / f.a) == 1 {
                break;
            }
        }
        QuadIdeal::new(order, f.a, alpha).expect("reduced primitive form gives a valid ideal")
    }

    pub fn lattice(&self) -> &IdealLattice {
        &self.lattice
    }

    pub fn norm(&self) -> Int {
        self.n
    }

    pub fn contains(&self, e: OrderElement) -> bool {
        self.lattice.contains(e)
    }

    pub fn is_principal_unit_ideal(&self) -> bool {
        self.n == 1
    }

    /// Integers `x, y` with `x*n^2 - y*Norm(alpha) = n`, taking `1 <= x <= Norm(alpha)/n`.
    pub fn bezout(&self, order: &Order) -> (Int, Int) {
        let c = order.norm(self.alpha) / self.n;
        let (g, u, _) = ext_gcd(self.n, c);
        assert_eq!(g, 1, "ideal ({}, {}) is not normalized", self.n, self.alpha);
        let x = (u - 1).rem_euclid(c) + 1;
        (x, (x * self.n - 1) / c)
    }
}

/// Positive definite binary quadratic form `a x^2 + b xy + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryForm {
    pub a: Int,
    pub b: Int,
    pub c: Int,
}

impl BinaryForm {
    pub fn disc(&self) -> Int {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn identity(disc: Discriminant) -> Self {
        let d = disc.get() as Int;
        let s = d.rem_euclid(4);
        BinaryForm { a: 1, b: s, c: (s - d) / 4 }
    }

    pub fn inverse(&self) -> Self {
        BinaryForm { a: self.a, b: -self.b, c: self.c }.reduce()
    }

    pub fn is_reduced(&self) -> bool {
        self.b.abs() <= self.a && self.a <= self.c && !(self.b < 0 && (self.b.abs() == self.a || self.a == self.c))
    }

    pub fn reduce(self) -> Self {
        let d = self.disc();
        let mut f = self;
        loop {
            // Normalize b into (-a, a].
            let r = floor_div(f.a - f.b, 2 * f.a);
            f.b += 2 * r * f.a;
            f.c = (f.b * f.b - d) / (4 * f.a);
            if f.a > f.c {
                f = BinaryForm { a: f.c, b: -f.b, c: f.a };
                continue;
            }
            if f.a == f.c && f.b < 0 {
                f.b = -f.b;
            }
            return f;
        }
    }

    /// Gauss composition (Dirichlet/Shanks form), followed by reduction.
    pub fn compose(&self, other: &BinaryForm) -> BinaryForm {
        let d = self.disc();
        debug_assert_eq!(d, other.disc());
        let (f1, f2) = if self.a > other.a { (other, self) } else { (self, other) };
        let s = (f1.b + f2.b) / 2;
        let n = f2.b - s;
        let (y1, dd) = if f2.a % f1.a == 0 {
            (0, f1.a)
        } else {
            let (g, u, _) = ext_gcd(f2.a, f1.a);
            (u, g)
        };
        let (x2, y2, d1) = if s % dd == 0 {
            (0, -1, dd)
        } else {
            let (g, u, v) = ext_gcd(s, dd);
            (u, -v, g)
        };
        let v1 = f1.a / d1;
        let v2 = f2.a / d1;
        let r = (y1 * y2 * n - x2 * f2.c).rem_euclid(v1);
        let b3 = f2.b + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (b3 * b3 - d) / (4 * a3);
        BinaryForm { a: a3, b: b3, c: c3 }.reduce()
    }
}

/// All reduced forms of the given discriminant, principal form first.
pub fn reduced_forms(disc: Discriminant) -> Vec<BinaryForm> {
    let d = disc.get() as Int;
    let amax = isqrt(-d / 3);
    let mut out = Vec::new();
    for a in 1..=amax {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && a == c) {
                continue;
            }
            if gcd(gcd(a, b), c) != 1 {
                continue;
            }
            out.push(BinaryForm { a, b, c });
        }
    }
    out
}

/// Class group data: one reduced form and one normalized ideal per class.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub disc: Discriminant,
    pub forms: Vec<BinaryForm>,
    pub reps: Vec<QuadIdeal>,
    pub h: usize,
    pub t: usize,
}

impl ClassGroup {
    pub fn has_exponent_at_most_two(&self) -> bool {
        self.h == self.t
    }

    /// Independent check: square every class with Gauss composition.
    pub fn exponent_at_most_two_by_composition(&self) -> bool {
        let id = BinaryForm::identity(self.disc);
        self.forms.iter().all(|f| f.compose(f) == id)
    }

    /// Indices of the classes of order at most two.
    pub fn two_torsion(&self) -> Vec<usize> {
        let id = BinaryForm::identity(self.disc);
        (0..self.h).filter(|&i| self.forms[i].compose(&self.forms[i]) == id).collect()
    }

    /// Index of the class of a (not necessarily reduced) form.
    pub fn index_of(&self, f: &BinaryForm) -> Option<usize> {
        let r = f.reduce();
        self.forms.iter().position(|g| *g == r)
    }

    /// A minimal generating set chosen greedily in the fixed class order.
    pub fn generating_set(&self) -> Vec<usize> {
        let id = BinaryForm::identity(self.disc);
        let mut span: Vec<BinaryForm> = vec![id];
        let mut gens = Vec::new();
        for (i, f) in self.forms.iter().enumerate() {
            if span.contains(f) {
                continue;
            }
            gens.push(i);
            // Close the span under multiplication by the new generator.
            let mut frontier = span.clone();
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for g in &frontier {
                    let p = g.compose(f);
                    if !span.contains(&p) {
                        span.push(p);
                        next.push(p);
                    }
                }
                frontier = next;
            }
            if span.len() == self.h {
                break;
            }
        }
        gens
    }
}

/// Compute the class group through its reduced forms.
pub fn class_group(disc: Discriminant) -> ClassGroup {
    let order = disc.order();
    let forms = reduced_forms(disc);
    let reps = forms.iter().map(|f| QuadIdeal::from_form(&order, f)).collect();
    let mu = disc.prime_divisors().len();
    ClassGroup { disc, h: forms.len(), t: 1 << (mu - 1), forms, reps }
}

pub fn has_exponent_at_most_two(cg: &ClassGroup) -> bool {
    cg.has_exponent_at_most_two()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub disc: Discriminant,
    pub h: usize,
}

/// Number of reduced forms, stopping early once `limit` is exceeded.
fn class_number_capped(disc: Discriminant, limit: usize) -> Option<usize> {
    let d = disc.get() as Int;
    let amax = isqrt(-d / 3);
    let mut count = 0usize;
    for a in 1..=amax {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && a == c) || gcd(gcd(a, b), c) != 1 {
                continue;
            }
            count += 1;
            if count > limit {
                return None;
            }
        }
    }
    Some(count)
}

/// Fundamental discriminants with `|D| <= bound` whose class group has
/// exponent at most 2, sorted by `|D|`.
pub fn scan_discriminants(bound: u64) -> Vec<ScanEntry> {
    let bound = bound.min(i64::MAX as u64) as i64;
    let mut out: Vec<ScanEntry> = (3..=bound)
        .into_par_iter()
        .filter_map(|m| {
            let disc = Discriminant::new(-m).ok()?;
            let t = 1usize << (disc.prime_divisors().len() - 1);
            let h = class_number_capped(disc, t)?;
            (h == t).then_some(ScanEntry { disc, h })
        })
        .collect();
    out.sort_by_key(|e| e.disc.abs());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    #[test]
    fn fundamental_discriminants() {
        for d in [-3, -4, -7, -8, -11, -15, -20, -24, -5460] {
            assert!(Discriminant::is_fundamental(d), "{d}");
        }
        for d in [-1, -2, -12, -16, -27, -28, 5, 0, -36] {
            assert!(!Discriminant::is_fundamental(d), "{d}");
        }
        assert_eq!(Discriminant::new(-12), Err(Error::InvalidDiscriminant(-12)));
    }

    #[test]
    fn norm_is_multiplicative_and_matches_conjugate() {
        for d in [-3, -4, -7, -20, -23, -163, -5460] {
            let o = disc(d).order();
            for x in -20..=20 {
                for y in -20..=20 {
                    let u = OrderElement::new(x, y);
                    let uc = o.mul(u, o.conj(u));
                    assert_eq!(uc, OrderElement::int(o.norm(u)));
                    assert!(o.norm(u) > 0 || u.is_zero());
                }
            }
            let u = OrderElement::new(3, -7);
            let v = OrderElement::new(-5, 2);
            assert_eq!(o.norm(o.mul(u, v)), o.norm(u) * o.norm(v));
        }
    }

    #[test]
    fn sqrt_disc_squares_to_disc() {
        for d in [-3, -4, -7, -8, -11, -5460] {
            let o = disc(d).order();
            let delta = o.sqrt_disc();
            assert_eq!(o.mul(delta, delta), OrderElement::int(d as Int));
            assert!(o.to_complex_f64(delta).1 > 0.0);
        }
    }

    #[test]
    fn units() {
        assert_eq!(disc(-3).order().units().len(), 6);
        assert_eq!(disc(-4).order().units().len(), 4);
        assert_eq!(disc(-20).order().units(), vec![OrderElement::ONE, -OrderElement::ONE]);
    }

    #[test]
    fn class_numbers() {
        assert_eq!(class_group(disc(-4)).h, 1);
        assert_eq!(class_group(disc(-23)).h, 3);
        let cg = class_group(disc(-5460));
        assert_eq!((cg.h, cg.t), (16, 16));
        assert!(cg.has_exponent_at_most_two());
        assert!(cg.exponent_at_most_two_by_composition());
    }

    #[test]
    fn minus_23_has_exponent_three() {
        let cg = class_group(disc(-23));
        assert!(!cg.has_exponent_at_most_two());
        assert!(!cg.exponent_at_most_two_by_composition());
        let id = BinaryForm::identity(cg.disc);
        let g = cg.forms[1];
        assert_ne!(g.compose(&g), id);
        assert_eq!(g.compose(&g).compose(&g), id);
    }

    #[test]
    fn ideals_from_forms_are_normalized() {
        for d in [-15, -20, -84, -420, -5460] {
            let dd = disc(d);
            let o = dd.order();
            let cg = class_group(dd);
            for id in &cg.reps {
                let (x, y) = id.bezout(&o);
                assert_eq!(x * id.n * id.n - y * o.norm(id.alpha), id.n);
                assert!(id.contains(id.alpha));
                assert!(id.contains(OrderElement::int(id.n)));
            }
        }
    }

    #[test]
    fn norm_search_examples() {
        let o = disc(-4).order();
        assert_eq!(o.elements_of_norm(1).len(), 4);
        let o = disc(-20).order();
        assert_eq!(o.elements_of_norm(5), vec![OrderElement::new(0, -1), OrderElement::new(0, 1)]);
        assert_eq!(o.elements_of_norm(0), vec![OrderElement::ZERO]);
    }

    #[test]
    fn unit_combination_solves_bezout() {
        let o = disc(-20).order();
        let x1 = OrderElement::new(2, 0);
        let x2 = OrderElement::new(1, 1);
        // (2, 1 + w) is not the unit ideal in Z[sqrt(-5)].
        assert!(unit_combination(&o, x1, x2).is_none());
        let x2 = OrderElement::new(1, 2);
        let (l, m) = unit_combination(&o, x1, x2).unwrap();
        assert_eq!(o.mul(l, x1) + o.mul(m, x2), OrderElement::ONE);
    }

    #[test]
    fn ideal_square_is_principal_in_exponent_two_group() {
        let dd = disc(-20);
        let o = dd.order();
        let cg = class_group(dd);
        let a = cg.reps[1];
        let sq = a.lattice().mul(a.lattice(), &o);
        assert_eq!(sq.norm(), a.n * a.n);
        let gens = elements_of_norm_in_ideal(&sq, &o, a.n * a.n);
        assert!(!gens.is_empty());
    }

    #[test]
    fn scan_prefix() {
        let got: Vec<i64> = scan_discriminants(12).iter().map(|e| e.disc.get()).collect();
        assert_eq!(got, vec![-3, -4, -7, -8, -11]);
        let got: Vec<i64> = scan_discriminants(3).iter().map(|e| e.disc.get()).collect();
        assert_eq!(got, vec![-3]);
        assert!(scan_discriminants(2).is_empty());
    }
}
