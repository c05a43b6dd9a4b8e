//! Complex numbers over `astro_float::BigFloat` with a per-value working precision.

use std::cell::RefCell;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::Zero;

pub const MIN_PRECISION: usize = 64;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Real helpers on `BigFloat`.
pub mod real {
    use super::*;

    pub fn from_i128(x: i128, p: usize) -> BigFloat {
        BigFloat::from_i128(x, p)
    }

    pub fn from_bigint(x: &BigInt, p: usize) -> BigFloat {
        let (sign, digits) = x.to_u64_digits();
        let base = BigFloat::from_u128(1u128 << 64, p);
        let mut acc = BigFloat::from_u64(0, p);
        for &w in digits.iter().rev() {
            acc = acc.mul(&base, p, RM).add(&BigFloat::from_u64(w, p), p, RM);
        }
        if sign == BigSign::Minus {
            acc.neg()
        } else {
            acc
        }
    }

    pub fn from_rational(x: &BigRational, p: usize) -> BigFloat {
        from_bigint(x.numer(), p).div(&from_bigint(x.denom(), p), p, RM)
    }

    /// Integer part of a finite value, rounded toward minus infinity.
    pub fn floor_to_bigint(x: &BigFloat) -> BigInt {
        let f = x.floor();
        let Some((words, _, sign, e, _)) = f.as_raw_parts() else { return BigInt::zero() };
        if f.is_zero() || e <= 0 {
            return BigInt::zero();
        }
        let mut mant = BigInt::zero();
        for &w in words.iter().rev() {
            mant = (mant << 64) + BigInt::from(w);
        }
        let total = 64 * words.len() as i64;
        let shift = total - e as i64;
        let v = if shift >= 0 { mant >> shift as usize } else { mant << (-shift) as usize };
        if sign == Sign::Neg {
            -v
        } else {
            v
        }
    }

    pub fn to_f64(x: &BigFloat) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x.is_inf() {
            return if x.is_inf_pos() { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        let Some((words, _, sign, e, _)) = x.as_raw_parts() else { return f64::NAN };
        let Some(&top) = words.last() else { return 0.0 };
        let mut v = top as f64 / 2f64.powi(64);
        if words.len() > 1 {
            v += words[words.len() - 2] as f64 / 2f64.powi(128);
        }
        let v = v * 2f64.powi(e.clamp(-1100, 1100));
        if sign == Sign::Neg {
            -v
        } else {
            v
        }
    }

    /// `log2 |x|`, roughly; `-inf` for zero.
    pub fn log2_abs(x: &BigFloat) -> f64 {
        if x.is_zero() {
            return f64::NEG_INFINITY;
        }
        let Some((words, _, _, e, _)) = x.as_raw_parts() else { return f64::NAN };
        let top = *words.last().unwrap_or(&0) as f64 / 2f64.powi(64);
        e as f64 + top.log2()
    }

    pub fn sqrt(x: &BigFloat, p: usize) -> BigFloat {
        x.sqrt(p, RM)
    }

    pub fn pi(p: usize) -> BigFloat {
        with_consts(|cc| cc.pi(p, RM))
    }

    /// `|x|` rounded to `sig` significant decimal digits, as `d.ddd...e<exp>`.
    pub fn to_scientific(x: &BigFloat, sig: usize) -> String {
        assert!(sig >= 1);
        if x.is_zero() {
            return "0".to_string();
        }
        let p = x.mantissa_max_bit_len().unwrap_or(MIN_PRECISION) + 64;
        let ten = BigFloat::from_u64(10, p);
        let scaled = |k: i64| -> BigInt {
            let f = ten.powi(k.unsigned_abs() as usize, p, RM);
            let y = if k < 0 { x.abs().div(&f, p, RM) } else { x.abs().mul(&f, p, RM) };
            floor_to_bigint(&y.add(&BigFloat::from_f64(0.5, p), p, RM))
        };
        let mut e10 = (log2_abs(x) * std::f64::consts::LOG10_2).floor() as i64;
        let lo = BigInt::from(10).pow(sig as u32 - 1);
        let hi = &lo * 10;
        let mut n = scaled(sig as i64 - 1 - e10);
        // The estimate of the exponent can be off by one either way.
        while n >= hi {
            e10 += 1;
            n = scaled(sig as i64 - 1 - e10);
        }
        while n < lo {
            e10 -= 1;
            n = scaled(sig as i64 - 1 - e10);
        }
        let digits = n.to_string();
        let sign = if x.is_negative() { "-" } else { "" };
        if sig == 1 {
            format!("{sign}{digits}e{e10}")
        } else {
            format!("{sign}{}.{}e{e10}", &digits[..1], &digits[1..])
        }
    }

    pub fn two_pow(k: i32, p: usize) -> BigFloat {
        let x = BigFloat::from_u64(2, p).powi(k.unsigned_abs() as usize, p, RM);
        if k < 0 {
            x.reciprocal(p, RM)
        } else {
            x
        }
    }
}

#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
    prec: usize,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat, prec: usize) -> Self {
        assert!(prec >= MIN_PRECISION, "precision below {MIN_PRECISION} bits");
        BigComplex { re, im, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Self::from_i128(0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i128(1, prec)
    }

    pub fn i(prec: usize) -> Self {
        Self::new(BigFloat::from_i32(0, prec), BigFloat::from_i32(1, prec), prec)
    }

    pub fn from_i128(x: i128, prec: usize) -> Self {
        Self::new(real::from_i128(x, prec), BigFloat::from_i32(0, prec), prec)
    }

    pub fn from_real(re: BigFloat, prec: usize) -> Self {
        Self::new(re, BigFloat::from_i32(0, prec), prec)
    }

    pub fn from_rational(x: &BigRational, prec: usize) -> Self {
        Self::from_real(real::from_rational(x, prec), prec)
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        Self::new(BigFloat::from_f64(re, prec), BigFloat::from_f64(im, prec), prec)
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// Same value rounded to another precision.
    pub fn with_prec(&self, prec: usize) -> Self {
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        // set_precision only fails on allocation errors or invalid precision.
        let _ = re.set_precision(prec, RM);
        let _ = im.set_precision(prec, RM);
        Self::new(re, im, prec)
    }

    pub fn is_finite(&self) -> bool {
        !(self.re.is_nan() || self.im.is_nan() || self.re.is_inf() || self.im.is_inf())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im, self.prec)
    }

    pub fn scale_int(&self, k: i128) -> Self {
        let k = real::from_i128(k, self.prec);
        let p = self.prec;
        Self::new(self.re.mul(&k, p, RM), self.im.mul(&k, p, RM), p)
    }

    pub fn scale_real(&self, k: &BigFloat) -> Self {
        let p = self.prec;
        Self::new(self.re.mul(k, p, RM), self.im.mul(k, p, RM), p)
    }

    /// `|z|^2`.
    pub fn norm_sqr(&self) -> BigFloat {
        let p = self.prec;
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(self.prec, RM)
    }

    /// `log2 |z|`, to double precision; `-inf` at zero.
    pub fn log2_abs(&self) -> f64 {
        let a = real::log2_abs(&self.re);
        let b = real::log2_abs(&self.im);
        let m = a.max(b);
        if m == f64::NEG_INFINITY {
            return m;
        }
        m + 0.5 * (1.0 + 2f64.powf(2.0 * (a.min(b) - m))).log2()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one(self.prec);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            n >>= 1;
        }
        acc
    }

    pub fn recip(&self) -> Self {
        let p = self.prec;
        let n = self.norm_sqr();
        Self::new(self.re.div(&n, p, RM), (-&self.im).div(&n, p, RM), p)
    }

    pub fn exp(&self) -> Self {
        let p = self.prec;
        with_consts(|cc| {
            let r = self.re.exp(p, RM, cc);
            let c = self.im.cos(p, RM, cc);
            let s = self.im.sin(p, RM, cc);
            Self::new(r.mul(&c, p, RM), r.mul(&s, p, RM), p)
        })
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec;
        if self.is_zero() {
            return Self::zero(p);
        }
        let r = self.abs();
        let two = BigFloat::from_i32(2, p);
        let u = r.add(&self.re.abs(), p, RM).div(&two, p, RM).sqrt(p, RM);
        let v = self.im.abs().div(&u.mul(&two, p, RM), p, RM);
        if !self.re.is_negative() {
            let v = if self.im.is_negative() { v.neg() } else { v };
            Self::new(u, v, p)
        } else {
            let u2 = if self.im.is_negative() { u.neg() } else { u };
            Self::new(v, u2, p)
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (real::to_f64(&self.re), real::to_f64(&self.im))
    }

    /// `|self - other| < 2^-bits`, by comparing `log2`.
    pub fn close_to(&self, other: &Self, bits: f64) -> bool {
        (self - other).log2_abs() < -bits
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_negative() { "-" } else { "+" };
        write!(f, "{} {} {}i", self.re, sign, self.im.abs())
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        let p = self.prec;
        BigComplex::new(self.re.add(&o.re, p, RM), self.im.add(&o.im, p, RM), p)
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        let p = self.prec;
        BigComplex::new(self.re.sub(&o.re, p, RM), self.im.sub(&o.im, p, RM), p)
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        let p = self.prec;
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        BigComplex::new(re, im, p)
    }
}

impl<'a> Div<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn div(self, o: &BigComplex) -> BigComplex {
        let p = self.prec;
        let n = o.norm_sqr();
        let re = self.re.mul(&o.re, p, RM).add(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.im.mul(&o.re, p, RM).sub(&self.re.mul(&o.im, p, RM), p, RM);
        BigComplex::new(re.div(&n, p, RM), im.div(&n, p, RM), p)
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-&self.re, -&self.im, self.prec)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: BigComplex) -> BigComplex {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: &BigComplex) -> BigComplex {
                (&self).$m(o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        -&self
    }
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    real::to_f64(&real::from_rational(x, 128))
}
