//! Period matrices, theta constants and Igusa invariants of the genus-2
//! curves whose Jacobian is a polarized `(E^2, M)`.

pub mod bigcomplex;
pub mod igusa;
pub mod recognize;
pub mod riemann;
pub mod rosenhain;
pub mod theta;

use num_bigint::BigInt;
use num_rational::BigRational;

use self::bigcomplex::{real, BigComplex};
use self::igusa::{igusa_clebsch, igusa_invariants_exact, integer_coefficients, IgusaInvariants};
use self::recognize::rational_recognition;
use self::riemann::{congruent, riemann_form, riemann_matrix, RiemannMatrix, STANDARD_J};
use self::rosenhain::{rosenhain, RosenhainTriple};
use self::theta::{theta_constants, ThetaConstants};
use crate::error::{Error, Result};
use crate::fixtures::{curve_table, CurveRow};
use crate::hermitian::HermitianForm;

pub const DEFAULT_PRECISION: usize = 400;

/// Everything computed for one polarized surface.
#[derive(Clone, Debug)]
pub struct AnalyticRun {
    pub form: HermitianForm,
    pub precision: usize,
    pub riemann: RiemannMatrix,
    pub thetas: ThetaConstants,
    pub lambdas: RosenhainTriple,
    pub invariants: IgusaInvariants<BigComplex>,
}

/// Igusa invariants of the Rosenhain model with the given branch points.
pub fn igusa_invariants_numeric(lams: &RosenhainTriple) -> Result<IgusaInvariants<BigComplex>> {
    if !lams.is_nonsingular() {
        return Err(Error::SingularCurve("branch points collide".into()));
    }
    Ok(igusa_clebsch(&lams.quintic()).absolute())
}

/// The full chain `M -> tau -> theta -> lambda -> invariants`, with the
/// symplectic basis and the odd theta constants checked on the way.
pub fn analyze(m: &HermitianForm, precision: usize) -> Result<AnalyticRun> {
    let riemann = riemann_matrix(m, precision)?;
    let basis = riemann.basis.expect("computed from a lattice basis");
    if congruent(&riemann_form(m), &basis) != STANDARD_J {
        return Err(Error::Numerical("symplectic basis check failed".into()));
    }
    let thetas = theta_constants(&riemann, precision)?;
    if !thetas.odd_vanish(precision) {
        return Err(Error::Numerical(format!("odd theta constants only vanish to 2^{:.1}", thetas.max_odd_log2())));
    }
    let lambdas = rosenhain(&thetas)?;
    let invariants = igusa_invariants_numeric(&lambdas)?;
    Ok(AnalyticRun { form: *m, precision, riemann, thetas, lambdas, invariants })
}

/// `log2` of the largest absolute difference between numeric and exact invariants.
pub fn invariant_distance_log2(num: &IgusaInvariants<BigComplex>, exact: &IgusaInvariants<BigRational>) -> f64 {
    num.j
        .iter()
        .zip(&exact.j)
        .map(|(a, b)| (a - &BigComplex::from_real(real::from_rational(b, a.prec()), a.prec())).log2_abs())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Exact invariants of a bundled curve.
pub fn curve_invariants(row: &CurveRow) -> Result<IgusaInvariants<BigRational>> {
    igusa_invariants_exact(&integer_coefficients(&row.f))
}

/// Height bound used for recognition at a given precision: `2^(prec/4)`.
/// A rational of larger height could not be told apart from a chance
/// continued-fraction convergent at tolerance `2^-(prec/2)`.
pub fn default_max_height(precision: usize) -> BigInt {
    BigInt::from(1) << (precision / 4)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Within `2^-(prec/2)` of the invariants of the bundled curve with this index.
    Match(usize),
    /// All invariants were recognized, but no bundled curve has them.
    Mismatch,
    /// Neither a bundled curve nor a rational triple was found.
    Unrecognized,
}

#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub recognized: [Option<BigRational>; 3],
    pub verdict: Verdict,
    /// Distance to the closest bundled curve of the same discriminant.
    pub distance_log2: Option<f64>,
}

/// Recognize the invariants of a run and compare them with the bundled curves
/// of the same discriminant.
pub fn assess(run: &AnalyticRun, max_height: &BigInt) -> InvariantReport {
    let recognized = std::array::from_fn(|i| rational_recognition(&run.invariants.j[i], max_height));
    let disc = run.form.disc().get();
    let mut best: Option<(f64, usize)> = None;
    for (i, row) in curve_table().rows.iter().enumerate().filter(|(_, r)| r.disc == disc) {
        if let Ok(exact) = curve_invariants(row) {
            let d = invariant_distance_log2(&run.invariants, &exact);
            if best.is_none_or(|(b, _)| d < b) {
                best = Some((d, i));
            }
        }
    }
    let tol = -((run.precision / 2) as f64);
    let verdict = match best {
        Some((d, i)) if d < tol => Verdict::Match(i),
        _ if recognized.iter().all(Option::is_some) => Verdict::Mismatch,
        _ => Verdict::Unrecognized,
    };
    InvariantReport { recognized, verdict, distance_log2: best.map(|b| b.0) }
}
