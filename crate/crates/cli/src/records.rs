//! Machine-readable records shared by the subcommands.

use cmpol::classify::PolarizationRecord;
use cmpol::moduli::{ModuliCertificate, Witness};
use cmpol::quad_order::OrderElement;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct FormRecord {
    pub disc: i64,
    pub a: i128,
    pub b: [i128; 2],
    pub d: i128,
    pub det: i128,
    pub decomposable: bool,
    pub aut_order: usize,
    /// `None` when the field of moduli was not decided (decomposable forms,
    /// or class groups of larger exponent).
    pub fom_q: Option<bool>,
    pub fod_q: Option<bool>,
}

impl FormRecord {
    pub fn new(rec: &PolarizationRecord, cert: Option<&ModuliCertificate>) -> Self {
        let f = &rec.form;
        FormRecord {
            disc: f.disc().get(),
            a: f.a,
            b: [f.b.x, f.b.y],
            d: f.d,
            det: f.det(),
            decomposable: rec.decomposable,
            aut_order: rec.aut_order,
            fom_q: cert.map(|c| c.fom_is_q),
            fod_q: cert.map(|c| c.fod_is_q),
        }
    }

    pub const CSV_HEADER: &'static str = "disc,a,bx,by,d,det,decomposable,aut_order,fom_q,fod_q";

    pub fn csv_line(&self) -> String {
        let flag = |v: Option<bool>| v.map_or(String::new(), |b| b.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.disc,
            self.a,
            self.b[0],
            self.b[1],
            self.d,
            self.det,
            self.decomposable,
            self.aut_order,
            flag(self.fom_q),
            flag(self.fod_q)
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessRecord {
    /// The ideal `(n, alpha)`.
    pub ideal_n: i128,
    pub ideal_alpha: [i128; 2],
    pub matrix: [[[i128; 2]; 2]; 2],
}

impl From<&Witness> for WitnessRecord {
    fn from(w: &Witness) -> Self {
        let e = |x: OrderElement| [x.x, x.y];
        WitnessRecord { ideal_n: w.ideal.n, ideal_alpha: e(w.ideal.alpha), matrix: w.matrix.0.map(|row| row.map(e)) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuliRecord {
    pub index: usize,
    pub form: FormRecord,
    pub witnesses: Vec<WitnessRecord>,
}

/// `y^2 = f(x)` with `f` given from the constant term up.
pub fn curve_text(f: &[i64]) -> String {
    let mut out = String::new();
    for (deg, &c) in f.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 { "-" } else { "+" };
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let mag = c.unsigned_abs();
        let var = match deg {
            0 => String::new(),
            1 => "x".to_string(),
            k => format!("x^{k}"),
        };
        if mag != 1 || deg == 0 {
            out.push_str(&mag.to_string());
        }
        out.push_str(&var);
    }
    if out.is_empty() {
        out.push('0');
    }
    format!("y^2 = {out}")
}
