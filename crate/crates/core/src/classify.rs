//! Enumeration of all principal polarizations on `E^2`, i.e. congruence
//! classes of unimodular positive definite Hermitian forms, and their
//! automorphism groups.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermitian::{basis_completion, reduce, short_vectors, HermitianForm, Mat2};
use crate::intmath::isqrt;
use crate::quad_order::{class_group, elements_of_norm_in_ideal, ClassGroup, Discriminant, Int, Order, OrderElement, QuadIdeal};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizationRecord {
    pub form: HermitianForm,
    pub decomposable: bool,
    pub aut_order: usize,
    /// Every `P` in `GL_2(O)` with `P^* M P = M`.
    pub automorphisms: Vec<Mat2>,
}

impl PolarizationRecord {
    pub fn new(form: HermitianForm, decomposable: bool) -> Self {
        let automorphisms = automorphism_group(&form);
        PolarizationRecord { form, decomposable, aut_order: automorphisms.len(), automorphisms }
    }
}

#[derive(Clone, Debug)]
pub struct ClassificationResult {
    pub delta: Discriminant,
    pub class_group: ClassGroup,
    pub decomposables: Vec<PolarizationRecord>,
    pub indecomposables: Vec<PolarizationRecord>,
    /// False when the class group has elements of order greater than 2; the
    /// search region is then not proven to cover every class.
    pub complete: bool,
}

/// The form `[[n + N/n, (x+y) alpha], [(x+y) conj(alpha), x^2 n + y^2 N/n]]`
/// with `N = Norm(alpha)` and `x n^2 - y N = n`, describing the product
/// polarization pulled back along `E^2 -> F x F'`.
pub fn decomposable_matrix(order: &Order, ideal: &QuadIdeal) -> HermitianForm {
    let n = ideal.n;
    let c = order.norm(ideal.alpha) / n;
    let (x, y) = ideal.bezout(order);
    let a = n + c;
    let b = ideal.alpha.scale(x + y);
    let d = x * x * n + y * y * c;
    HermitianForm::new(order.disc(), a, b, d).expect("decomposable matrix is unimodular")
}

/// The change of basis attached to an ideal `a = (n, alpha)` with `a^2`
/// principal: `T = [[n, y alpha], [gamma conj(alpha)/n, x gamma]]` with
/// `a^2 = (gamma)`. For a form `M`, `T^* M T / n` is again unimodular, and
/// `T^* T / n` is the decomposable matrix of `a`.
pub fn twist_matrix(order: &Order, ideal: &QuadIdeal) -> Option<Mat2> {
    let n = ideal.n;
    let sq = ideal.lattice().mul(ideal.lattice(), order);
    let gamma = *elements_of_norm_in_ideal(&sq, order, n * n).first()?;
    let (x, y) = ideal.bezout(order);
    let lower = order.mul(gamma, order.conj(ideal.alpha)).div_int(n)?;
    Some(Mat2([[OrderElement::int(n), ideal.alpha.scale(y)], [lower, gamma.scale(x)]]))
}

/// `T^* M T / n`, or `None` if it is not an integral unimodular form.
pub fn twist(m: &HermitianForm, t: &Mat2, n: Int) -> Option<HermitianForm> {
    let o = m.order();
    let q = m.congruence_matrix(t).0;
    let a = q[0][0].div_int(n)?;
    let b = q[0][1].div_int(n)?;
    let d = q[1][1].div_int(n)?;
    debug_assert_eq!(o.conj(b), q[1][0].div_int(n)?);
    if a.y != 0 || d.y != 0 {
        return None;
    }
    HermitianForm::new(o.disc(), a.x, b, d.x).ok()
}

/// Upper bound on the smallest nonzero value of a unimodular form: Hermite's
/// bound in dimension 4 for the underlying integral lattice of determinant `D^2/16`.
pub fn minimum_bound(delta: Discriminant) -> Int {
    isqrt(delta.abs() as Int / 2)
}

/// Reduced forms of every class whose smallest primitive value is at most `bound`.
fn forms_with_small_primitive_minimum(delta: Discriminant, bound: Int) -> BTreeSet<HermitianForm> {
    let o = delta.order();
    let mut cands = Vec::new();
    for a in 1..=bound {
        for bx in 0..a {
            for by in 0..a {
                let b = OrderElement::new(bx, by);
                if (o.norm(b) + 1) % a == 0 {
                    cands.push(HermitianForm::from_a_b(delta, a, b).expect("divisibility checked"));
                }
            }
        }
    }
    cands.par_iter().map(|m| reduce(m).0).collect::<Vec<_>>().into_iter().collect()
}

/// All congruence classes of unimodular forms, as reduced representatives.
///
/// Every class has a nonzero vector of value at most [`minimum_bound`]. Its
/// coordinates generate some ideal `c`, and twisting by the class of `c`
/// moves the class to one with a primitive vector of that value, so closing
/// the small-minimum forms under twists by all classes of order at most 2
/// reaches every class when the class group has exponent at most 2.
fn all_reduced_forms(cg: &ClassGroup) -> BTreeSet<HermitianForm> {
    let delta = cg.disc;
    let o = delta.order();
    let base = forms_with_small_primitive_minimum(delta, minimum_bound(delta));
    let twists: Vec<(Mat2, Int)> = cg
        .two_torsion()
        .into_iter()
        .filter(|&i| i != 0)
        .map(|i| {
            let id = &cg.reps[i];
            (twist_matrix(&o, id).expect("ideal of order 2 has principal square"), id.n)
        })
        .collect();
    let mut all = base.clone();
    let extra: Vec<HermitianForm> = base
        .par_iter()
        .flat_map_iter(|m| {
            twists.iter().map(move |(t, n)| {
                let tw = twist(m, t, *n).expect("twist of a unimodular form is unimodular");
                reduce(&tw).0
            })
        })
        .collect();
    all.extend(extra);
    all
}

/// Reduced decomposable forms, one for each unordered pair `{I, I^-1}` of classes.
pub fn decomposable_forms(cg: &ClassGroup) -> Vec<HermitianForm> {
    let o = cg.disc.order();
    let mut seen = vec![false; cg.h];
    let mut out = BTreeSet::new();
    for i in 0..cg.h {
        if seen[i] {
            continue;
        }
        seen[i] = true;
        if let Some(j) = cg.index_of(&cg.forms[i].inverse()) {
            seen[j] = true;
        }
        out.insert(reduce(&decomposable_matrix(&o, &cg.reps[i])).0);
    }
    out.into_iter().collect()
}

/// Enumerate all principal polarizations; rejects discriminants whose class
/// group has exponent greater than 2.
pub fn enumerate_polarizations(delta: Discriminant) -> Result<ClassificationResult> {
    let cg = class_group(delta);
    if !cg.has_exponent_at_most_two() {
        return Err(Error::ExponentTooLarge(delta.get()));
    }
    Ok(enumerate_with(cg))
}

/// As [`enumerate_polarizations`], for any discriminant. The result carries
/// `complete = false` when the exponent exceeds 2.
pub fn enumerate_polarizations_any(delta: Discriminant) -> ClassificationResult {
    enumerate_with(class_group(delta))
}

fn enumerate_with(cg: ClassGroup) -> ClassificationResult {
    let delta = cg.disc;
    let complete = cg.has_exponent_at_most_two();
    let decs: BTreeSet<HermitianForm> = decomposable_forms(&cg).into_iter().collect();
    let mut all = all_reduced_forms(&cg);
    all.extend(decs.iter().copied());
    let records: Vec<PolarizationRecord> = all.into_par_iter().map(|f| PolarizationRecord::new(f, decs.contains(&f))).collect();
    let (decomposables, indecomposables) = records.into_iter().partition(|r| r.decomposable);
    ClassificationResult { delta, class_group: cg, decomposables, indecomposables, complete }
}

/// Every `P` in `GL_2(O)` with `P^* M P = M`.
///
/// A first column `x` has value `a` and coprime coordinates; writing the
/// second column as `eps*y0 + mu*x` for a fixed completion `y0`, the
/// condition `x^* M y = b` pins down `mu` for each unit `eps`.
pub fn automorphism_group(m: &HermitianForm) -> Vec<Mat2> {
    let o = m.order();
    let units = o.units();
    let mut out = Vec::new();
    for x in short_vectors(m, m.a, true) {
        let q = basis_completion(&o, &x).expect("primitive vector has a completion");
        let y0 = q.column(1);
        let b0 = m.inner(&x, &y0);
        for &eps in &units {
            let Some(mu) = (m.b - o.mul(eps, b0)).div_int(m.a) else { continue };
            let y = y0.scale(&o, eps).add(&x.scale(&o, mu));
            let p = Mat2::from_columns(x, y);
            debug_assert_eq!(m.transform(&p).as_ref(), Ok(m));
            out.push(p);
        }
    }
    out.sort_by_key(|p| p.0);
    out
}

/// The literal search: pairs of primitive vectors of values `a` and `d`
/// forming a basis with `x^* M y = b`. Quadratic in the number of vectors.
pub fn automorphism_group_naive(m: &HermitianForm) -> Vec<Mat2> {
    let o = m.order();
    let xs = short_vectors(m, m.a, true);
    let ys = short_vectors(m, m.d, true);
    let mut out = Vec::new();
    for x in &xs {
        for y in &ys {
            let p = Mat2::from_columns(*x, *y);
            if p.is_invertible(&o) && m.inner(x, y) == m.b {
                out.push(p);
            }
        }
    }
    out.sort_by_key(|p| p.0);
    out
}

/// Whether a reduced form has a vector of value 1, i.e. is the identity class.
pub fn has_unit_vector(m: &HermitianForm) -> bool {
    !short_vectors(m, 1, false).is_empty()
}
