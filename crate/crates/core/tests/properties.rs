use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use cmpol::classify::enumerate_polarizations_any;
use cmpol::hermitian::*;
use cmpol::moduli::{conjugate_congruence_matrix, conjugation_isomorphism};
use cmpol::quad_order::*;
use proptest::prelude::*;

const SAMPLED: [i64; 8] = [-3, -4, -15, -20, -23, -84, -120, -420];

fn reduced_forms_of(d: i64) -> &'static [HermitianForm] {
    static CACHE: OnceLock<HashMap<i64, Vec<HermitianForm>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        SAMPLED
            .iter()
            .map(|&d| {
                let r = enumerate_polarizations_any(Discriminant::new(d).unwrap());
                let forms = r.decomposables.iter().chain(&r.indecomposables).map(|x| x.form).collect();
                (d, forms)
            })
            .collect()
    });
    &all[&d]
}

/// An element of `GL_2(O)` as a product of elementary moves.
fn gl2(o: &Order, moves: &[(u8, i128, i128)]) -> Mat2 {
    let units = o.units();
    let mut p = Mat2::identity();
    for &(kind, x, y) in moves {
        let e = OrderElement::new(x, y);
        let z = OrderElement::ZERO;
        let one = OrderElement::ONE;
        let step = match kind % 4 {
            0 => Mat2([[one, e], [z, one]]),
            1 => Mat2([[one, z], [e, one]]),
            2 => Mat2([[z, one], [one, z]]),
            _ => {
                let u = units[(x.unsigned_abs() as usize) % units.len()];
                let v = units[(y.unsigned_abs() as usize) % units.len()];
                Mat2([[u, z], [z, v]])
            }
        };
        p = p.mul(o, &step);
    }
    p
}

fn moves() -> impl Strategy<Value = Vec<(u8, i128, i128)>> {
    prop::collection::vec((0u8..4, -3i128..=3, -3i128..=3), 1..6)
}

/// A random unimodular form: a random transform of a reduced representative.
fn random_form(d: i64) -> impl Strategy<Value = (HermitianForm, HermitianForm)> {
    let n = reduced_forms_of(d).len();
    (0..n, moves()).prop_map(move |(i, mv)| {
        let base = reduced_forms_of(d)[i];
        let p = gl2(&base.order(), &mv);
        (base, base.transform(&p).expect("GL2 matrix"))
    })
}

macro_rules! reduction_suite {
    ($name:ident, $d:expr) => {
        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]
            #[test]
            fn $name((base, m) in random_form($d)) {
                let (r, p) = reduce(&m);
                prop_assert_eq!(r, base);
                prop_assert_eq!(m.transform(&p).unwrap(), r);
                prop_assert_eq!(reduce(&r).0, r);
            }
        }
    };
}

reduction_suite!(reduction_invariant_minus_3, -3);
reduction_suite!(reduction_invariant_minus_4, -4);
reduction_suite!(reduction_invariant_minus_15, -15);
reduction_suite!(reduction_invariant_minus_20, -20);
reduction_suite!(reduction_invariant_minus_23, -23);
reduction_suite!(reduction_invariant_minus_84, -84);
reduction_suite!(reduction_invariant_minus_120, -120);
reduction_suite!(reduction_invariant_minus_420, -420);

fn any_sampled_form() -> impl Strategy<Value = (HermitianForm, HermitianForm)> {
    prop::sample::select(SAMPLED.to_vec()).prop_flat_map(random_form)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn conjugate_congruence_identity((_, m) in any_sampled_form()) {
        let o = m.order();
        let p0 = conjugate_congruence_matrix(&m);
        prop_assert_eq!(m.conj().congruence_matrix(&p0), m.matrix());
        prop_assert_eq!(p0.mul(&o, &p0.conj(&o)), Mat2::identity().neg());
        prop_assert_eq!(p0.det(&o), OrderElement::ONE);
        let p = conjugation_isomorphism(&m);
        prop_assert_eq!(m.congruence_matrix(&p), m.conj().matrix());
    }

    #[test]
    fn congruent_forms_are_detected((base, m) in any_sampled_form()) {
        prop_assert!(is_congruent(&base, &m).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn short_vectors_match_oracles((base, m) in any_sampled_form(), n in 1i128..6) {
        // The reduced form's first entry is the lattice minimum, so this keeps the counts small.
        let bound = n * base.a;
        // The norm-pair oracle enumerates every element of norm up to a*n.
        prop_assume!(m.a * n <= 200_000);
        let fast = vectors_of_value_at_most(&m, bound);
        let direct = vectors_of_value_at_most_direct(&m, bound);
        prop_assert_eq!(&fast, &direct);
        for k in 1..=n {
            let a: BTreeSet<VectorO2> = short_vectors(&m, k, true).into_iter().collect();
            let b: BTreeSet<VectorO2> = short_vectors_by_norm_pairs(&m, k, true).into_iter().collect();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn order_arithmetic(d in prop::sample::select(SAMPLED.to_vec()), a in (-50i128..50, -50i128..50), b in (-50i128..50, -50i128..50)) {
        let o = Discriminant::new(d).unwrap().order();
        let (a, b) = (OrderElement::new(a.0, a.1), OrderElement::new(b.0, b.1));
        prop_assert_eq!(o.norm(o.mul(a, b)), o.norm(a) * o.norm(b));
        prop_assert_eq!(o.conj(o.conj(a)), a);
        prop_assert_eq!(o.mul(a, o.conj(a)), OrderElement::int(o.norm(a)));
        prop_assert_eq!(o.trace(a), (a + o.conj(a)).x);
        prop_assert_eq!(o.mul(a, b), o.mul(b, a));
        let delta = o.sqrt_disc();
        prop_assert_eq!(o.mul(delta, delta), OrderElement::int(d as i128));
    }

    #[test]
    fn unit_combinations_are_small(d in prop::sample::select(SAMPLED.to_vec()), mv in prop::collection::vec((0u8..4, -20i128..=20, -20i128..=20), 1..6)) {
        let o = Discriminant::new(d).unwrap().order();
        let x = gl2(&o, &mv).column(0);
        let (lambda, mu) = unit_combination(&o, x.x1, x.x2).expect("primitive column");
        prop_assert_eq!(o.mul(lambda, x.x1) + o.mul(mu, x.x2), OrderElement::ONE);
        let size = o.norm(x.x1) + o.norm(x.x2);
        prop_assert!(o.norm(lambda) + o.norm(mu) <= (o.omega_norm() + 2) * size + 1);
    }
}

fn kronecker(d: i64, n: i64) -> i64 {
    let mut n = n;
    let mut r = 1;
    let mut p = 2;
    while n > 1 {
        if p * p > n {
            p = n;
        }
        while n % p == 0 {
            n /= p;
            r *= if p == 2 {
                match d.rem_euclid(8) {
                    1 | 7 => 1,
                    3 | 5 => -1,
                    _ => 0,
                }
            } else {
                let mut e = 1i64;
                let mut b = d.rem_euclid(p);
                let mut k = (p - 1) / 2;
                while k > 0 {
                    if k & 1 == 1 {
                        e = e * b % p;
                    }
                    b = b * b % p;
                    k >>= 1;
                }
                if e == 0 {
                    0
                } else if e == 1 {
                    1
                } else {
                    -1
                }
            };
        }
        p += 1;
    }
    r
}

/// `h = w / (2 |D|) * |sum_{a < |D|} (D/a) a|`.
fn dirichlet_class_number(d: i64) -> usize {
    let n = d.abs();
    let s: i64 = (1..n).map(|a| kronecker(d, a) * a).sum();
    let w = match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    (w * s.abs() / (2 * n)) as usize
}

fn brute_force_reduced_forms(d: i64) -> usize {
    // a <= sqrt(|D|/3), |b| <= a <= c, b >= 0 when |b| = a or a = c.
    let mut h = 0;
    let mut a = 1;
    while 3 * a * a <= d.abs() {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            let g = [a, b.abs(), c].into_iter().fold(0, num_integer::gcd);
            if g == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

#[test]
fn class_groups_match_brute_force_up_to_2000() {
    for d in (3..=2000).map(|n| -n) {
        if !Discriminant::is_fundamental(d) {
            continue;
        }
        let cg = class_group(Discriminant::new(d).unwrap());
        assert_eq!(cg.h, dirichlet_class_number(d), "h({d}) vs Dirichlet");
        assert_eq!(cg.h, brute_force_reduced_forms(d), "h({d}) vs form count");
        let mu = Discriminant::new(d).unwrap().prime_divisors().len();
        assert_eq!(cg.t, 1 << (mu - 1), "t({d})");
        assert_eq!(cg.has_exponent_at_most_two(), cg.exponent_at_most_two_by_composition(), "exponent at {d}");
        for f in &cg.forms {
            assert_eq!(f.disc(), d as i128);
            assert!(f.is_reduced());
        }
    }
}

#[test]
fn ideal_representatives_have_consistent_bezout_data() {
    for d in [-15, -84, -420, -5460] {
        let cg = class_group(Discriminant::new(d).unwrap());
        let o = cg.disc.order();
        for id in &cg.reps {
            let (x, y) = id.bezout(&o);
            assert_eq!(x * id.n * id.n - y * o.norm(id.alpha), id.n, "{d}: {id:?}");
            assert_eq!(id.lattice().norm(), id.n);
        }
    }
}
