//! Model file: compact JSON, every float written with 17 significant digits.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Diagnostics, Hyperparameters, Label, TrainedModel};
use crate::error::{Error, Result};
use crate::io::SigDigitsFormatter;

pub const MODEL_VERSION: &str = "s3vmr-model/1";

#[derive(Serialize, Deserialize)]
struct ModelFile {
    version: String,
    hyper: Hyperparameters,
    l: usize,
    u: usize,
    ids: Vec<String>,
    labels: Vec<Label>,
    alpha: Vec<f64>,
    bias: f64,
    training_inputs: Vec<Vec<f64>>,
    diagnostics: Diagnostics,
}

pub fn write_model<W: Write>(model: &TrainedModel, writer: W) -> Result<()> {
    let file = ModelFile {
        version: MODEL_VERSION.to_owned(),
        hyper: model.hyper,
        l: model.n_labeled(),
        u: model.n_unlabeled(),
        ids: model.ids.clone(),
        labels: model.labels.clone(),
        alpha: model.alpha.clone(),
        bias: model.bias,
        training_inputs: model.training_inputs.clone(),
        diagnostics: model.diagnostics.clone(),
    };
    let mut writer = writer;
    let mut ser = serde_json::Serializer::with_formatter(&mut writer, SigDigitsFormatter::new(17));
    file.serialize(&mut ser)?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn read_model<R: Read>(reader: R) -> Result<TrainedModel> {
    let value: serde_json::Value = serde_json::from_reader(reader)?;
    let version = value.get("version").and_then(|v| v.as_str()).unwrap_or_default();
    if version != MODEL_VERSION {
        return Err(Error::UnsupportedVersion(version.to_owned()));
    }
    let file: ModelFile = serde_json::from_value(value)?;
    let n = file.l + file.u;
    if file.labels.len() != file.l {
        return Err(Error::invalid("label count does not match l"));
    }
    for got in [file.alpha.len(), file.ids.len(), file.training_inputs.len()] {
        if got != n {
            return Err(Error::DimensionMismatch { expected: n, got });
        }
    }
    file.hyper.validate()?;
    Ok(TrainedModel {
        alpha: file.alpha,
        bias: file.bias,
        training_inputs: file.training_inputs,
        hyper: file.hyper,
        labels: file.labels,
        ids: file.ids,
        diagnostics: file.diagnostics,
    })
}

pub fn save_model(model: &TrainedModel, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_model(model, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<TrainedModel> {
    read_model(BufReader::new(File::open(path)?))
}
