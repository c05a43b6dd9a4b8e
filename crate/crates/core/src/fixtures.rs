//! Reference data bundled with the crate: the exponent-2 discriminant list,
//! per-discriminant polarization counts, and the curves over `Q`.

use std::sync::OnceLock;

use serde::Deserialize;

#[derive(Clone, Debug, Deserialize)]
pub struct DiscriminantGroup {
    pub h: usize,
    pub discriminants: Vec<i64>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct DiscriminantTable {
    pub groups: Vec<DiscriminantGroup>,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
pub struct CountRow {
    pub disc: i64,
    pub h: usize,
    pub indecomposable: usize,
    pub fom_q: usize,
}

#[derive(Clone, Copy, Debug, Deserialize)]
pub struct Totals {
    pub discriminants: usize,
    pub indecomposable: usize,
    pub fom_q: usize,
    pub fod_q: usize,
}

#[derive(Clone, Debug, Deserialize)]
pub struct CountTable {
    pub totals: Totals,
    pub rows: Vec<CountRow>,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
pub struct Involution {
    pub degree: u32,
    pub value: i64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct CurveRow {
    pub disc: i64,
    pub a: i64,
    pub b: [i64; 2],
    pub d: i64,
    /// Coefficients of `f` in `y^2 = f(x)`, constant term first.
    pub f: Vec<i64>,
    pub involution: Involution,
}

#[derive(Clone, Debug, Deserialize)]
pub struct CurveTable {
    pub rows: Vec<CurveRow>,
}

pub fn discriminant_table() -> &'static DiscriminantTable {
    static T: OnceLock<DiscriminantTable> = OnceLock::new();
    T.get_or_init(|| serde_json::from_str(include_str!("../data/discriminants.json")).expect("bundled discriminants.json"))
}

pub fn count_table() -> &'static CountTable {
    static T: OnceLock<CountTable> = OnceLock::new();
    T.get_or_init(|| serde_json::from_str(include_str!("../data/counts.json")).expect("bundled counts.json"))
}

pub fn curve_table() -> &'static CurveTable {
    static T: OnceLock<CurveTable> = OnceLock::new();
    T.get_or_init(|| serde_json::from_str(include_str!("../data/curves.json")).expect("bundled curves.json"))
}

/// The 65 discriminants, sorted by absolute value.
pub fn exponent_two_discriminants() -> Vec<i64> {
    let mut v: Vec<i64> = discriminant_table().groups.iter().flat_map(|g| g.discriminants.iter().copied()).collect();
    v.sort_by_key(|d| d.abs());
    v
}

pub fn count_row(disc: i64) -> Option<&'static CountRow> {
    count_table().rows.iter().find(|r| r.disc == disc)
}

pub fn curve_row(disc: i64) -> Option<&'static CurveRow> {
    curve_table().rows.iter().find(|r| r.disc == disc)
}
