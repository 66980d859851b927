//! Atom list serialization.
//!
//! CSV columns are `position_num,position_den,weight_re,weight_im`; the
//! structured form is a JSON array of objects with the same keys, where
//! numerator and denominator are decimal strings. Floats are written with
//! 17 significant digits so they read back bit-exactly.

use std::io::{Read, Write};

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Atom, Weight};
use crate::rational::Rational;

pub const CSV_HEADER: [&str; 4] = ["position_num", "position_den", "weight_re", "weight_im"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomFormat {
    Csv,
    Json,
}

impl std::str::FromStr for AtomFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(AtomFormat::Csv),
            "json" | "structured" | "structured-text" => Ok(AtomFormat::Json),
            other => Err(Error::Parse(format!("unknown atom format {other:?}"))),
        }
    }
}

/// Fixed 17-significant-digit rendering.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize, Deserialize)]
struct AtomRecord {
    position_num: String,
    position_den: String,
    weight_re: String,
    weight_im: String,
}

impl From<&Atom> for AtomRecord {
    fn from(a: &Atom) -> Self {
        AtomRecord {
            position_num: a.position.numer().to_string(),
            position_den: a.position.denom().to_string(),
            weight_re: fmt_f64(a.weight.re),
            weight_im: fmt_f64(a.weight.im),
        }
    }
}

impl TryFrom<AtomRecord> for Atom {
    type Error = Error;

    fn try_from(r: AtomRecord) -> Result<Atom> {
        let int = |s: &str| -> Result<BigInt> {
            s.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
        };
        let float = |s: &str| -> Result<f64> {
            s.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad float {s:?}")))
        };
        let den = int(&r.position_den)?;
        if den.sign() != num::bigint::Sign::Plus {
            return Err(Error::Parse(format!("denominator must be positive, got {den}")));
        }
        Ok(Atom::new(
            Rational::new(int(&r.position_num)?, den),
            Weight::new(float(&r.weight_re)?, float(&r.weight_im)?),
        ))
    }
}

pub fn write_atoms_csv<W: Write>(atoms: &[Atom], w: W) -> Result<()> {
    let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wr.write_record(CSV_HEADER).map_err(csv_err)?;
    for a in atoms {
        wr.serialize(AtomRecord::from(a)).map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_atoms_csv<R: Read>(r: R) -> Result<Vec<Atom>> {
    let mut rd = csv::Reader::from_reader(r);
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(Error::Parse(format!("unexpected CSV header {header:?}")));
    }
    rd.deserialize::<AtomRecord>()
        .map(|rec| rec.map_err(csv_err).and_then(Atom::try_from))
        .collect()
}

pub fn write_atoms_json<W: Write>(atoms: &[Atom], mut w: W) -> Result<()> {
    let recs: Vec<AtomRecord> = atoms.iter().map(AtomRecord::from).collect();
    serde_json::to_writer_pretty(&mut w, &recs)?;
    writeln!(w)?;
    Ok(())
}

pub fn read_atoms_json<R: Read>(r: R) -> Result<Vec<Atom>> {
    let recs: Vec<AtomRecord> = serde_json::from_reader(r)?;
    recs.into_iter().map(Atom::try_from).collect()
}

pub fn write_atoms<W: Write>(atoms: &[Atom], format: AtomFormat, w: W) -> Result<()> {
    match format {
        AtomFormat::Csv => write_atoms_csv(atoms, w),
        AtomFormat::Json => write_atoms_json(atoms, w),
    }
}

pub fn read_atoms<R: Read>(format: AtomFormat, r: R) -> Result<Vec<Atom>> {
    match format {
        AtomFormat::Csv => read_atoms_csv(r),
        AtomFormat::Json => read_atoms_json(r),
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}
