//! The reproduction report: exponent-2 discriminants, per-discriminant
//! counts, and the polarizations whose curve is defined over `Q`.

use std::collections::BTreeMap;

use cmpol::fixtures::{count_row, count_table, curve_table, discriminant_table};
use cmpol::hermitian::{is_congruent, HermitianForm};
use cmpol::moduli::{survey_discriminant, DiscriminantSurvey};
use cmpol::quad_order::{scan_discriminants, Discriminant, OrderElement};
use cmpol::Result;
use rayon::prelude::*;
use serde::Serialize;

use crate::records::FormRecord;

/// Largest `|D|` in the bundled discriminant list.
pub const FULL_BOUND: u64 = 5460;
pub const QUICK_BOUND: u64 = 600;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[allow(non_snake_case)]
pub struct ReportRow {
    pub delta: i64,
    pub h: usize,
    pub n_indecomposable: usize,
    pub n_fom_Q: usize,
    pub n_fod_Q: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassNumberGroup {
    pub h: usize,
    pub discriminants: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub discriminants: usize,
    pub indecomposable: usize,
    pub fom_q: usize,
    pub fod_q: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub max_abs_disc: u64,
    pub class_number_groups: Vec<ClassNumberGroup>,
    pub rows: Vec<ReportRow>,
    pub totals: Totals,
    pub fod_forms: Vec<FormRecord>,
}

pub fn build(bound: u64) -> Result<Report> {
    let scan = scan_discriminants(bound);
    let surveys: Vec<DiscriminantSurvey> = scan.par_iter().map(|e| survey_discriminant(e.disc)).collect::<Result<_>>()?;

    let mut groups: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for e in &scan {
        groups.entry(e.h).or_default().push(e.disc.get());
    }
    let class_number_groups = groups.into_iter().map(|(h, discriminants)| ClassNumberGroup { h, discriminants }).collect();

    let rows: Vec<ReportRow> = surveys
        .iter()
        .map(|s| ReportRow {
            delta: s.classification.delta.get(),
            h: s.classification.class_group.h,
            n_indecomposable: s.classification.indecomposables.len(),
            n_fom_Q: s.fom_count(),
            n_fod_Q: s.fod_count(),
        })
        .collect();
    let totals = Totals {
        discriminants: rows.len(),
        indecomposable: rows.iter().map(|r| r.n_indecomposable).sum(),
        fom_q: rows.iter().map(|r| r.n_fom_Q).sum(),
        fod_q: rows.iter().map(|r| r.n_fod_Q).sum(),
    };
    let fod_forms = surveys
        .iter()
        .flat_map(|s| {
            s.classification
                .indecomposables
                .iter()
                .zip(&s.certificates)
                .filter(|(_, c)| c.fod_is_q)
                .map(|(r, c)| FormRecord::new(r, Some(c)))
        })
        .collect();
    Ok(Report { max_abs_disc: bound, class_number_groups, rows, totals, fod_forms })
}

/// Differences between a report and the bundled reference data, one line each.
pub fn discrepancies(report: &Report) -> Vec<String> {
    let mut out = Vec::new();
    let bound = report.max_abs_disc as i64;

    let expected: Vec<i64> = {
        let mut v: Vec<i64> =
            discriminant_table().groups.iter().flat_map(|g| g.discriminants.iter().copied()).filter(|d| -d <= bound).collect();
        v.sort_by_key(|d| -d);
        v
    };
    let found: Vec<i64> = report.rows.iter().map(|r| r.delta).collect();
    if found != expected {
        out.push(format!("discriminant list differs: found {} discriminants, expected {}", found.len(), expected.len()));
    }
    for g in &discriminant_table().groups {
        let want: Vec<i64> = g.discriminants.iter().copied().filter(|d| -d <= bound).collect();
        let got = report.class_number_groups.iter().find(|x| x.h == g.h).map_or(&[][..], |x| &x.discriminants[..]);
        if got != want {
            out.push(format!("class number {} group differs", g.h));
        }
    }

    for r in &report.rows {
        match count_row(r.delta) {
            Some(c) if (c.h, c.indecomposable, c.fom_q) == (r.h, r.n_indecomposable, r.n_fom_Q) => {}
            Some(c) => out.push(format!(
                "{}: found (h, indecomposable, fom) = ({}, {}, {}), expected ({}, {}, {})",
                r.delta, r.h, r.n_indecomposable, r.n_fom_Q, c.h, c.indecomposable, c.fom_q
            )),
            None => out.push(format!("{}: no reference row", r.delta)),
        }
    }

    if bound >= FULL_BOUND as i64 {
        let t = count_table().totals;
        let want = Totals { discriminants: t.discriminants, indecomposable: t.indecomposable, fom_q: t.fom_q, fod_q: t.fod_q };
        if report.totals != want {
            out.push(format!("totals {:?} differ from expected {:?}", report.totals, want));
        }
    }

    let curves: Vec<_> = curve_table().rows.iter().filter(|c| -c.disc <= bound).collect();
    let mut matched = vec![false; curves.len()];
    for f in &report.fod_forms {
        let form = to_form(f.disc, f.a, f.b, f.d);
        let hit = curves.iter().position(|c| {
            c.disc == f.disc
                && is_congruent(&form, &to_form(c.disc, c.a.into(), [c.b[0].into(), c.b[1].into()], c.d.into())).unwrap_or(false)
        });
        match hit {
            Some(i) if !matched[i] => matched[i] = true,
            _ => out.push(format!("{}: form {} is defined over Q but matches no reference curve", f.disc, form)),
        }
    }
    for (c, m) in curves.iter().zip(&matched) {
        if !m {
            out.push(format!("{}: reference curve has no matching polarization", c.disc));
        }
    }
    out
}

fn to_form(disc: i64, a: i128, b: [i128; 2], d: i128) -> HermitianForm {
    let delta = Discriminant::new(disc).expect("report discriminants are fundamental");
    HermitianForm::new(delta, a, OrderElement::new(b[0], b[1]), d).expect("report forms are unimodular")
}

pub fn write_text(report: &Report, out: &mut impl std::fmt::Write) -> std::fmt::Result {
    writeln!(out, "Exponent-2 discriminants with |D| <= {}", report.max_abs_disc)?;
    for g in &report.class_number_groups {
        let list: Vec<String> = g.discriminants.iter().map(i64::to_string).collect();
        writeln!(out, "  h = {:2} ({:2}): {}", g.h, g.discriminants.len(), list.join(", "))?;
    }
    writeln!(out)?;
    writeln!(out, "{:>6} {:>3} {:>6} {:>5} {:>5}", "D", "h", "#pol", "#fom", "#fod")?;
    for r in &report.rows {
        writeln!(out, "{:>6} {:>3} {:>6} {:>5} {:>5}", r.delta, r.h, r.n_indecomposable, r.n_fom_Q, r.n_fod_Q)?;
    }
    let t = report.totals;
    writeln!(out)?;
    writeln!(
        out,
        "totals: {} discriminants, {} indecomposable polarizations, {} with field of moduli Q, {} defined over Q",
        t.discriminants, t.indecomposable, t.fom_q, t.fod_q
    )?;
    writeln!(out)?;
    writeln!(out, "polarizations whose curve is defined over Q:")?;
    for f in &report.fod_forms {
        writeln!(out, "  {:>6}  {}  (aut {})", f.disc, to_form(f.disc, f.a, f.b, f.d), f.aut_order)?;
    }
    Ok(())
}
