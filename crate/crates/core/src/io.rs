//! File formats: JSON-lines corpora, CSV matrices and label files, and
//! fixed-precision number formatting.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};

use crate::error::{Error, Result};
use crate::model::Label;
use crate::text::{AdRecord, Feature, FeatureVectorF1};

/// `%.Ng`-style formatting with `digits` significant digits.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_owned();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_fraction(mant), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{:.*}", decimals, v)).to_owned()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// JSON formatter writing every float in scientific notation with a fixed
/// number of significant digits.
pub struct SigDigitsFormatter {
    digits: usize,
}

impl SigDigitsFormatter {
    pub fn new(digits: usize) -> Self {
        SigDigitsFormatter { digits: digits.max(1) }
    }
}

impl serde_json::ser::Formatter for SigDigitsFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if !value.is_finite() {
            return Err(io::Error::new(io::ErrorKind::InvalidData, "non-finite float"));
        }
        write!(writer, "{:.*e}", self.digits - 1, value)
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Reads one ad per non-blank line. Ids must be nonempty and unique.
pub fn read_corpus<R: BufRead>(reader: R) -> Result<Vec<AdRecord>> {
    let mut ads = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let ad: AdRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        if ad.id.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                msg: "empty id".into(),
            });
        }
        if !seen.insert(ad.id.clone()) {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("duplicate id {:?}", ad.id),
            });
        }
        ads.push(ad);
    }
    Ok(ads)
}

pub fn write_corpus<W: Write>(ads: &[AdRecord], mut writer: W) -> Result<()> {
    for ad in ads {
        serde_json::to_writer(&mut writer, ad)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_features<W: Write>(ids: &[String], vectors: &[FeatureVectorF1], writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
    let mut header = vec!["id"];
    header.extend(Feature::ALL.iter().map(|f| f.name()));
    w.write_record(&header).map_err(csv_err)?;
    for (id, v) in ids.iter().zip(vectors) {
        let mut rec = vec![id.clone()];
        rec.extend(v.bits().iter().map(|b| b.to_string()));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads an indicator CSV written by [`write_features`], keyed by id.
pub fn read_features<R: io::Read>(reader: R) -> Result<BTreeMap<String, FeatureVectorF1>> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers().map_err(csv_err)?.clone();
    let expected: Vec<&str> = std::iter::once("id").chain(Feature::ALL.iter().map(|f| f.name())).collect();
    if header.iter().collect::<Vec<_>>() != expected {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected header {}", expected.join(",")),
        });
    }
    let mut out = BTreeMap::new();
    for (idx, rec) in r.records().enumerate() {
        let line = idx + 2;
        let rec = rec.map_err(csv_err)?;
        let mut bits = [0u8; Feature::COUNT];
        for (k, b) in bits.iter_mut().enumerate() {
            *b = rec[k + 1].trim().parse().map_err(|_| Error::Parse {
                line,
                msg: format!("non-binary value {:?}", &rec[k + 1]),
            })?;
        }
        let v = FeatureVectorF1::from_bits(bits).ok_or_else(|| Error::Parse {
            line,
            msg: "feature values must be 0 or 1".into(),
        })?;
        out.insert(rec[0].to_owned(), v);
    }
    Ok(out)
}

/// Square matrix with ids as first row and first column, 9 significant digits.
pub fn write_matrix<W: Write>(ids: &[String], value: impl Fn(usize, usize) -> f64, writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
    let mut header = vec![String::new()];
    header.extend(ids.iter().cloned());
    w.write_record(&header).map_err(csv_err)?;
    for (i, id) in ids.iter().enumerate() {
        let mut rec = Vec::with_capacity(ids.len() + 1);
        rec.push(id.clone());
        rec.extend((0..ids.len()).map(|j| fmt_sig(value(i, j), 9)));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn parse_label(s: &str) -> Option<Label> {
    match s.trim() {
        "1" | "+1" => Some(Label::Pos),
        "-1" | "\u{2212}1" => Some(Label::Neg),
        _ => None,
    }
}

/// Reads `id,label` rows in file order.
pub fn read_labels<R: io::Read>(reader: R) -> Result<Vec<(String, Label)>> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers().map_err(csv_err)?.clone();
    if header.len() < 2 || &header[0] != "id" || &header[1] != "label" {
        return Err(Error::Parse {
            line: 1,
            msg: "expected header id,label".into(),
        });
    }
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, rec) in r.records().enumerate() {
        let line = idx + 2;
        let rec = rec.map_err(csv_err)?;
        let label = parse_label(&rec[1]).ok_or_else(|| Error::Parse {
            line,
            msg: format!("label must be +1 or -1, got {:?}", &rec[1]),
        })?;
        if !seen.insert(rec[0].to_owned()) {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate id {:?}", &rec[0]),
            });
        }
        out.push((rec[0].to_owned(), label));
    }
    Ok(out)
}

pub fn write_labels<W: Write>(rows: &[(String, Label)], header: [&str; 2], writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
    w.write_record(header).map_err(csv_err)?;
    for (id, l) in rows {
        let v = if l.is_pos() { "1" } else { "-1" };
        w.write_record([id.as_str(), v]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse {
        line,
        msg: e.to_string(),
    }
}
