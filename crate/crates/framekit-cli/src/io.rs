//! Frame and weight files: JSON with [re, im] pairs, one vector per
//! frame element. Numbers are printed in shortest round-trip form, so a
//! save/load cycle reproduces every bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use framekit::frames::{Frame, WeightSeq};
use framekit::{C64, CMatrix};

use crate::CliError;

#[derive(Serialize, Deserialize)]
pub struct FrameFile {
    pub dim: usize,
    pub vectors: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize, Deserialize)]
pub struct WeightsFile {
    pub weights: Vec<[f64; 2]>,
}

impl FrameFile {
    pub fn from_frame(frame: &Frame) -> Self {
        let vectors = (0..frame.count())
            .map(|n| frame.element(n).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        FrameFile {
            dim: frame.dim(),
            vectors,
        }
    }

    pub fn into_frame(self) -> Result<Frame, CliError> {
        if self.vectors.is_empty() {
            return Err(CliError::usage("frame file holds no vectors"));
        }
        let mut synthesis = CMatrix::zeros(self.dim.max(1), self.vectors.len());
        for (n, vector) in self.vectors.iter().enumerate() {
            if vector.len() != self.dim {
                return Err(CliError::usage(format!(
                    "vector {n} has length {}, expected {}",
                    vector.len(),
                    self.dim
                )));
            }
            let col: Vec<C64> = vector.iter().map(|&[re, im]| C64::new(re, im)).collect();
            synthesis.set_col(n, &col);
        }
        Frame::new(synthesis).map_err(CliError::usage_from_math)
    }
}

pub fn load_frame(path: &Path) -> Result<Frame, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let file: FrameFile = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("bad frame JSON in {}: {e}", path.display())))?;
    file.into_frame()
}

pub fn save_frame(frame: &Frame, path: &Path) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(&FrameFile::from_frame(frame))
        .expect("frame serialization cannot fail");
    fs::write(path, text + "\n")
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

pub fn weights_to_json(weights: &WeightSeq) -> String {
    let file = WeightsFile {
        weights: weights.as_slice().iter().map(|z| [z.re, z.im]).collect(),
    };
    serde_json::to_string_pretty(&file).expect("weight serialization cannot fail")
}

pub fn load_weights(path: &Path) -> Result<WeightSeq, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let file: WeightsFile = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("bad weights JSON in {}: {e}", path.display())))?;
    let values: Vec<C64> = file.weights.iter().map(|&[re, im]| C64::new(re, im)).collect();
    WeightSeq::new(values).map_err(CliError::usage_from_math)
}
