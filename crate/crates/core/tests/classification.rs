use std::collections::BTreeSet;
use std::sync::OnceLock;

use cmpol::classify::*;
use cmpol::fixtures::{count_row, count_table, curve_table, exponent_two_discriminants};
use cmpol::hermitian::{is_congruent, HermitianForm, Mat2};
use cmpol::moduli::*;
use cmpol::quad_order::{class_group, Discriminant, OrderElement};
use rayon::prelude::*;

fn disc(d: i64) -> Discriminant {
    Discriminant::new(d).unwrap()
}

fn all_surveys() -> &'static Vec<DiscriminantSurvey> {
    static S: OnceLock<Vec<DiscriminantSurvey>> = OnceLock::new();
    S.get_or_init(|| exponent_two_discriminants().par_iter().map(|&d| survey_discriminant(disc(d)).unwrap()).collect())
}

#[test]
fn decomposable_count_is_half_of_h_plus_t() {
    for s in all_surveys() {
        let cg = &s.classification.class_group;
        assert_eq!(s.classification.decomposables.len(), (cg.h + cg.t) / 2, "{}", cg.disc);
        assert!(s.classification.complete);
    }
}

#[test]
fn counts_match_bundled_table() {
    let mut ind = 0;
    let mut fom = 0;
    let mut fod = 0;
    for s in all_surveys() {
        let d = s.classification.delta.get();
        let row = count_row(d).unwrap();
        assert_eq!((s.classification.indecomposables.len(), s.fom_count()), (row.indecomposable, row.fom_q), "{d}");
        assert_eq!(s.classification.class_group.h, row.h);
        ind += s.classification.indecomposables.len();
        fom += s.fom_count();
        fod += s.fod_count();
    }
    let t = count_table().totals;
    assert_eq!((all_surveys().len(), ind, fom, fod), (t.discriminants, t.indecomposable, t.fom_q, t.fod_q));
}

#[test]
fn every_witness_reverifies_exactly() {
    let mut positives = 0;
    for s in all_surveys() {
        let cg = &s.classification.class_group;
        for c in &s.certificates {
            if c.fom_is_q {
                positives += 1;
                // Every class in the tested set has a witness.
                assert!(!c.witnesses.is_empty() || cg.h == 1);
                for w in &c.witnesses {
                    assert!(verify_witness(&c.form, w), "{} {}", cg.disc, c.form);
                    assert!(cg.reps.contains(&w.ideal));
                }
            }
        }
    }
    assert_eq!(positives, 46);
}

#[test]
fn rational_models_are_the_bundled_matrices() {
    let mut found = Vec::new();
    for s in all_surveys() {
        for (c, r) in s.certificates.iter().zip(&s.classification.indecomposables) {
            assert_eq!(c.form, r.form);
            if c.fod_is_q {
                assert!(r.aut_order > 2);
                found.push(c.form);
            }
        }
    }
    assert_eq!(found.len(), 13);
    for row in &curve_table().rows {
        let m = HermitianForm::new(disc(row.disc), row.a as i128, OrderElement::new(row.b[0] as i128, row.b[1] as i128), row.d as i128)
            .unwrap();
        assert!(found.iter().any(|f| f.disc() == m.disc() && is_congruent(f, &m).unwrap()), "{}", row.disc);
    }
}

#[test]
fn generating_set_gives_the_same_verdicts_as_all_classes() {
    for d in [-420, -660, -840, -1155] {
        let s = survey_discriminant(disc(d)).unwrap();
        let cg = &s.classification.class_group;
        assert!(cg.h >= 8);
        assert!(cg.generating_set().len() < cg.h - 1);
        for r in &s.classification.indecomposables {
            let (all, _) = field_of_moduli_is_q_with(&r.form, cg, ClassSelection::All).unwrap();
            let (gens, _) = field_of_moduli_is_q_with(&r.form, cg, ClassSelection::Generators).unwrap();
            assert_eq!(all, gens, "{d} {}", r.form);
        }
    }
}

fn is_group(o: &cmpol::quad_order::Order, g: &[Mat2]) -> bool {
    let set: BTreeSet<_> = g.iter().map(|p| p.0).collect();
    g.iter().all(|p| g.iter().all(|q| set.contains(&p.mul(o, q).0))) && set.contains(&Mat2::identity().0)
}

#[test]
fn automorphism_search_matches_naive_search() {
    for d in [-3, -4, -7, -8, -15, -20, -24, -84, -120, -420] {
        let r = enumerate_polarizations(disc(d)).unwrap();
        for rec in r.decomposables.iter().chain(&r.indecomposables) {
            let naive = automorphism_group_naive(&rec.form);
            assert_eq!(rec.automorphisms, naive, "{d} {}", rec.form);
            assert_eq!(rec.aut_order, naive.len());
            assert!(is_group(&rec.form.order(), &naive));
            assert!(naive.contains(&Mat2::identity().neg()));
        }
    }
}

#[test]
fn indecomposable_forms_have_no_vector_of_value_one() {
    for s in all_surveys() {
        for r in &s.classification.indecomposables {
            assert!(!has_unit_vector(&r.form), "{}", r.form);
            assert!(r.aut_order <= 48, "{} {}", r.form, r.aut_order);
        }
        let id = HermitianForm::identity(s.classification.delta);
        assert!(s.classification.decomposables.iter().any(|r| r.form == id));
    }
}

#[test]
fn scan_agrees_with_class_groups() {
    let entries = cmpol::quad_order::scan_discriminants(1000);
    for e in &entries {
        let cg = class_group(e.disc);
        assert!(cg.has_exponent_at_most_two());
        assert_eq!(cg.h, e.h);
    }
    let want: Vec<i64> = exponent_two_discriminants().into_iter().filter(|d| d.abs() <= 1000).collect();
    assert_eq!(entries.iter().map(|e| e.disc.get()).collect::<Vec<_>>(), want);
}

#[test]
fn oversized_exponent_is_rejected() {
    assert!(Discriminant::new(-7000).is_err());
    assert!(matches!(survey_discriminant(disc(-7003)), Err(cmpol::Error::ExponentTooLarge(-7003))));
    assert!(matches!(enumerate_polarizations(disc(-23)), Err(cmpol::Error::ExponentTooLarge(-23))));
}
