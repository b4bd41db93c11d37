//! Number formatting and the sweep CSV layout.

use serde::{Deserialize, Serialize};

/// `%.12g`: 12 significant digits, trailing zeros removed.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let sci = format!("{:.11e}", x);
    let (mantissa, e) = sci.split_once('e').unwrap();
    let e: i32 = e.parse().unwrap();
    // rounding can move the exponent, so trust the formatted one
    let exp = if e != exp { e } else { exp };
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim(mantissa), e)
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// `a + bi` in 12-digit form.
pub fn complex12(re: f64, im: f64) -> String {
    if im.is_sign_negative() {
        format!("{} - {}i", sig12(re), sig12(-im))
    } else {
        format!("{} + {}i", sig12(re), sig12(im))
    }
}

/// One sweep row: `omega,re,im,regime,evals,err`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub omega: f64,
    pub re: f64,
    pub im: f64,
    pub regime: String,
    pub evals: usize,
    pub err: f64,
}

pub fn write_csv(rows: &[CsvRow]) -> Result<String, csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["omega", "re", "im", "regime", "evals", "err"])?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn read_csv(text: &str) -> Result<Vec<CsvRow>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}
