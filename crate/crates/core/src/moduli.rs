//! Field of moduli and field of definition of polarized surfaces `(E^2, M)`.
//!
//! The field of moduli is `Q` exactly when, for a set of ideals `a_i`
//! generating the class group, some `P_i` with entries in `a_i` satisfies
//! `Norm(a_i) * M = P_i^* M P_i`. It is then a field of definition exactly
//! when the automorphism group has order greater than 2.

use std::collections::HashMap;

use crate::classify::{enumerate_polarizations, ClassificationResult, PolarizationRecord};
use crate::error::{Error, Result};
use crate::hermitian::{HermitianForm, Mat2};
use crate::intmath::gcd;
use crate::quad_order::{
    elements_of_norm_at_most, elements_of_norm_in_ideal, ClassGroup, Discriminant, Int, Order, OrderElement, QuadIdeal,
};

/// Give up on one ideal after this many candidate column pairs.
pub const PAIR_LIMIT: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub ideal: QuadIdeal,
    pub matrix: Mat2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliCertificate {
    pub form: HermitianForm,
    /// One witness per ideal in the generating set that was tested.
    pub witnesses: Vec<Witness>,
    pub fom_is_q: bool,
    pub fod_is_q: bool,
}

/// Which ideal classes to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassSelection {
    /// Every nonprincipal class when `h <= 4`, a greedy generating set otherwise.
    Default,
    /// Every nonprincipal class.
    All,
    /// A greedy generating set.
    Generators,
}

impl ClassSelection {
    fn indices(self, cg: &ClassGroup) -> Vec<usize> {
        match self {
            ClassSelection::All => (1..cg.h).collect(),
            ClassSelection::Generators => cg.generating_set(),
            ClassSelection::Default if cg.h <= 4 => (1..cg.h).collect(),
            ClassSelection::Default => cg.generating_set(),
        }
    }
}

/// A point of the projective line over `K`, normalized so that equal ratios
/// compare equal: `p/q = (x + y w)/den` with `den > 0` and `gcd(x, y, den) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Ratio {
    Infinity,
    Finite(Int, Int, Int),
}

fn ratio(order: &Order, p: OrderElement, q: OrderElement) -> Ratio {
    if q.is_zero() {
        return Ratio::Infinity;
    }
    let num = order.mul(p, order.conj(q));
    let den = order.norm(q);
    let g = gcd(gcd(num.x, num.y), den);
    Ratio::Finite(num.x / g, num.y / g, den / g)
}

/// Search for `P` with entries in `ideal` and `n M = P^* M P`, `n = Norm(ideal)`.
///
/// With `L = [[a, b], [0, 1]]` one has `L^* L = a M`, and `Q = L P L^{-1}`
/// satisfies `Q^* Q = n Id`. Writing `a Q = [[X, Y], [Z, T]]`, the columns
/// `(X, Z)` and `(Y, T)` lie in `ideal^2`, have `Norm` sum `a^2 n`, and are
/// orthogonal, so `Y/T = -conj(Z)/conj(X)`. Candidates are paired through
/// that ratio.
pub fn find_witness(m: &HermitianForm, ideal: &QuadIdeal) -> Result<Option<Mat2>> {
    let o = m.order();
    let (a, b, n) = (m.a, m.b, ideal.n);
    let target = a * a * n;
    let lat = ideal.lattice();

    let mut sols: Vec<(OrderElement, OrderElement)> = Vec::new();
    for (nz, z) in elements_of_norm_at_most(lat, &o, target) {
        for x in elements_of_norm_in_ideal(lat, &o, target - nz) {
            sols.push((x, z));
        }
    }
    let mut by_ratio: HashMap<Ratio, Vec<usize>> = HashMap::new();
    for (i, &(y, t)) in sols.iter().enumerate() {
        by_ratio.entry(ratio(&o, y, t)).or_default().push(i);
    }

    let mut pairs: u64 = 0;
    for &(x, z) in &sols {
        let key = ratio(&o, -o.conj(z), o.conj(x));
        let Some(bucket) = by_ratio.get(&key) else { continue };
        for &j in bucket {
            pairs += 1;
            if pairs > PAIR_LIMIT {
                return Err(Error::SearchLimit(pairs));
            }
            let (y, t) = sols[j];
            let bz = o.mul(b, z);
            let p11 = (x - bz).div_int(a);
            let p12 = (o.mul(b, x) + y - o.mul(b, bz) - o.mul(b, t)).div_int(a * a);
            let p22 = (bz + t).div_int(a);
            let (Some(p11), Some(p12), Some(p22)) = (p11, p12, p22) else { continue };
            let entries = [p11, p12, z, p22];
            if !entries.iter().all(|&e| ideal.contains(e)) {
                continue;
            }
            let p = Mat2([[p11, p12], [z, p22]]);
            let lhs = m.congruence_matrix(&p);
            let want = m.matrix().0.map(|row| row.map(|e| e.scale(n)));
            if lhs.0 == want {
                return Ok(Some(p));
            }
        }
    }
    Ok(None)
}

/// Test the field-of-moduli criterion over the selected ideal classes.
/// Returns the witnesses found, in class order, and the verdict.
pub fn field_of_moduli_is_q_with(m: &HermitianForm, cg: &ClassGroup, sel: ClassSelection) -> Result<(bool, Vec<Witness>)> {
    if !cg.has_exponent_at_most_two() {
        return Err(Error::ExponentTooLarge(cg.disc.get()));
    }
    if m.disc() != cg.disc {
        return Err(Error::DiscriminantMismatch(m.disc().get(), cg.disc.get()));
    }
    let mut witnesses = Vec::new();
    for i in sel.indices(cg) {
        let ideal = cg.reps[i];
        match find_witness(m, &ideal)? {
            Some(matrix) => witnesses.push(Witness { ideal, matrix }),
            None => return Ok((false, witnesses)),
        }
    }
    Ok((true, witnesses))
}

pub fn field_of_moduli_is_q(m: &HermitianForm, cg: &ClassGroup) -> Result<(bool, Vec<Witness>)> {
    field_of_moduli_is_q_with(m, cg, ClassSelection::Default)
}

pub fn field_of_definition_is_q(record: &PolarizationRecord, fom: bool) -> bool {
    fom && record.aut_order > 2
}

/// Full certificate for a classified polarization.
pub fn certify(record: &PolarizationRecord, cg: &ClassGroup) -> Result<ModuliCertificate> {
    let (fom, witnesses) = field_of_moduli_is_q(&record.form, cg)?;
    Ok(ModuliCertificate { form: record.form, witnesses, fom_is_q: fom, fod_is_q: field_of_definition_is_q(record, fom) })
}

/// Classification of one discriminant together with a moduli certificate
/// for every indecomposable polarization, in canonical order.
#[derive(Clone, Debug)]
pub struct DiscriminantSurvey {
    pub classification: ClassificationResult,
    pub certificates: Vec<ModuliCertificate>,
}

impl DiscriminantSurvey {
    pub fn fom_count(&self) -> usize {
        self.certificates.iter().filter(|c| c.fom_is_q).count()
    }

    pub fn fod_count(&self) -> usize {
        self.certificates.iter().filter(|c| c.fod_is_q).count()
    }
}

pub fn survey_discriminant(delta: Discriminant) -> Result<DiscriminantSurvey> {
    let classification = enumerate_polarizations(delta)?;
    let certificates =
        classification.indecomposables.iter().map(|r| certify(r, &classification.class_group)).collect::<Result<Vec<_>>>()?;
    Ok(DiscriminantSurvey { classification, certificates })
}

/// `P0 = [[conj(b), d], [-a, -b]]`, which satisfies `P0^* conj(M) P0 = M` and
/// `P0 conj(P0) = -Id`.
pub fn conjugate_congruence_matrix(m: &HermitianForm) -> Mat2 {
    let o = m.order();
    Mat2([[o.conj(m.b), OrderElement::int(m.d)], [OrderElement::int(-m.a), -m.b]])
}

/// `P = [[b, d], [-a, -conj(b)]]`, which satisfies `P^* M P = conj(M)`.
pub fn conjugation_isomorphism(m: &HermitianForm) -> Mat2 {
    conjugate_congruence_matrix(m).conj(&m.order())
}

/// Re-verify a witness exactly: entries in the ideal and `n M = P^* M P`.
pub fn verify_witness(m: &HermitianForm, w: &Witness) -> bool {
    let n = w.ideal.n;
    let entries = w.matrix.0;
    let in_ideal = entries.iter().flatten().all(|&e| w.ideal.contains(e));
    let want = m.matrix().0.map(|row| row.map(|e| e.scale(n)));
    in_ideal && m.congruence_matrix(&w.matrix).0 == want
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad_order::{class_group, Discriminant};

    fn form(d: i64, a: Int, bx: Int, by: Int, dd: Int) -> HermitianForm {
        HermitianForm::new(Discriminant::new(d).unwrap(), a, OrderElement::new(bx, by), dd).unwrap()
    }

    #[test]
    fn conjugation_matrices() {
        let id = HermitianForm::identity(Discriminant::new(-7).unwrap());
        let p0 = conjugate_congruence_matrix(&id);
        assert_eq!(p0, Mat2([[OrderElement::ZERO, OrderElement::ONE], [-OrderElement::ONE, OrderElement::ZERO]]));
        let m = form(-11, 2, 0, 1, 2);
        let o = m.order();
        let p0 = conjugate_congruence_matrix(&m);
        assert_eq!(m.conj().congruence_matrix(&p0), m.matrix());
        assert_eq!(p0.mul(&o, &p0.conj(&o)), Mat2::identity().neg());
        assert_eq!(p0.det(&o), OrderElement::ONE);
        let p = conjugation_isomorphism(&m);
        assert_eq!(m.congruence_matrix(&p), m.conj().matrix());
    }

    #[test]
    fn ratio_normalization() {
        let o = Discriminant::new(-20).unwrap().order();
        let r1 = ratio(&o, OrderElement::new(2, 0), OrderElement::new(4, 0));
        let r2 = ratio(&o, OrderElement::new(-1, 0), OrderElement::new(-2, 0));
        assert_eq!(r1, r2);
        assert_eq!(ratio(&o, OrderElement::ONE, OrderElement::ZERO), Ratio::Infinity);
    }

    #[test]
    fn minus_20_form_has_rational_moduli() {
        let cg = class_group(Discriminant::new(-20).unwrap());
        let m = form(-20, 2, 0, 1, 3);
        let (fom, w) = field_of_moduli_is_q(&m, &cg).unwrap();
        assert!(fom);
        assert_eq!(w.len(), 1);
        assert!(verify_witness(&m, &w[0]));
    }
}
