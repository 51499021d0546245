use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use super::{Activation, Layer, Mlp, RlError};

/// First line of every checkpoint file.
pub const CHECKPOINT_MAGIC: &str = "cfxl-checkpoint 1";

/// A named row-major tensor. `tag` carries per-tensor metadata (the layer
/// activation for weight tensors) or `-`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub tag: String,
    pub data: Vec<f64>,
}

/// An ordered list of named tensors with a versioned text encoding.
///
/// ```text
/// cfxl-checkpoint 1
/// tensors <count>
/// tensor <name> <rows> <cols> <tag>
/// <rows * cols values, row-major, shortest round-trip exponent form>
/// ```
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Checkpoint {
    pub tensors: Vec<Tensor>,
}

impl Checkpoint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, tensor: Tensor) {
        self.tensors.push(tensor);
    }

    pub fn get(&self, name: &str) -> Option<&Tensor> {
        self.tensors.iter().find(|t| t.name == name)
    }

    /// Stores every layer of `net` as `<prefix>.<i>.weight` / `<prefix>.<i>.bias`.
    pub fn add_mlp(&mut self, prefix: &str, net: &Mlp) {
        for (i, layer) in net.layers.iter().enumerate() {
            let w = &layer.weights;
            self.push(Tensor {
                name: format!("{prefix}.{i}.weight"),
                rows: w.nrows(),
                cols: w.ncols(),
                tag: layer.activation.name().to_string(),
                data: w.transpose().iter().copied().collect(),
            });
            self.push(Tensor {
                name: format!("{prefix}.{i}.bias"),
                rows: layer.bias.len(),
                cols: 1,
                tag: "-".to_string(),
                data: layer.bias.iter().copied().collect(),
            });
        }
    }

    /// Rebuilds a network stored under `prefix`.
    pub fn mlp(&self, prefix: &str) -> Result<Mlp, RlError> {
        let mut layers = Vec::new();
        while let Some(w) = self.get(&format!("{prefix}.{}.weight", layers.len())) {
            let b = self
                .get(&format!("{prefix}.{}.bias", layers.len()))
                .ok_or_else(|| RlError::Checkpoint(format!("missing bias for {}", w.name)))?;
            let activation = Activation::from_name(&w.tag)
                .ok_or_else(|| RlError::Checkpoint(format!("unknown activation {:?}", w.tag)))?;
            if b.rows != w.rows {
                return Err(RlError::Checkpoint(format!("bias length {} for {} outputs", b.rows, w.rows)));
            }
            layers.push(Layer {
                weights: DMatrix::from_row_slice(w.rows, w.cols, &w.data),
                bias: DVector::from_column_slice(&b.data),
                activation,
            });
        }
        if layers.is_empty() {
            return Err(RlError::Checkpoint(format!("no network under {prefix:?}")));
        }
        Ok(Mlp { layers })
    }

    pub fn encode(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{CHECKPOINT_MAGIC}").unwrap();
        writeln!(out, "tensors {}", self.tensors.len()).unwrap();
        for t in &self.tensors {
            writeln!(out, "tensor {} {} {} {}", t.name, t.rows, t.cols, t.tag).unwrap();
            let values: Vec<String> = t.data.iter().map(|v| format!("{v:e}")).collect();
            writeln!(out, "{}", values.join(" ")).unwrap();
        }
        out
    }

    pub fn decode(text: &str) -> Result<Self, RlError> {
        let bad = |msg: String| RlError::Checkpoint(msg);
        let mut lines = text.lines();
        match lines.next() {
            Some(CHECKPOINT_MAGIC) => {}
            other => return Err(bad(format!("bad header {other:?}"))),
        }
        let count: usize = lines
            .next()
            .and_then(|l| l.strip_prefix("tensors "))
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| bad("missing tensor count".into()))?;
        let mut tensors = Vec::with_capacity(count);
        for _ in 0..count {
            let header = lines.next().ok_or_else(|| bad("truncated file".into()))?;
            let parts: Vec<&str> = header.split_whitespace().collect();
            if parts.len() != 5 || parts[0] != "tensor" {
                return Err(bad(format!("bad tensor header {header:?}")));
            }
            let rows: usize = parts[2].parse().map_err(|_| bad(format!("bad rows in {header:?}")))?;
            let cols: usize = parts[3].parse().map_err(|_| bad(format!("bad cols in {header:?}")))?;
            let body = lines.next().ok_or_else(|| bad("truncated file".into()))?;
            let data = body
                .split_whitespace()
                .map(|v| v.parse::<f64>().map_err(|_| bad(format!("bad value {v:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if data.len() != rows * cols {
                return Err(bad(format!("{} has {} values, expected {}", parts[1], data.len(), rows * cols)));
            }
            tensors.push(Tensor { name: parts[1].to_string(), rows, cols, tag: parts[4].to_string(), data });
        }
        Ok(Self { tensors })
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        fs::write(path, self.encode())
    }

    pub fn load(path: &Path) -> Result<Self, RlError> {
        let text = fs::read_to_string(path).map_err(|e| RlError::Checkpoint(format!("{}: {e}", path.display())))?;
        Self::decode(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;
    use proptest::prelude::*;

    #[test]
    fn networks_round_trip_bit_exactly() {
        let mut rng = seed::rng(12);
        let actor = Mlp::actor(5, 2, &mut rng);
        let critic = Mlp::critic(7, &mut rng);
        let mut ck = Checkpoint::new();
        ck.add_mlp("actor", &actor);
        ck.add_mlp("critic", &critic);
        let back = Checkpoint::decode(&ck.encode()).unwrap();
        assert_eq!(back, ck);
        let a = back.mlp("actor").unwrap();
        assert_eq!(a, actor);
        for (x, y) in a.params_flat().iter().zip(actor.params_flat()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        assert_eq!(back.mlp("critic").unwrap(), critic);
        assert!(back.mlp("missing").is_err());
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert!(Checkpoint::decode("not a checkpoint").is_err());
        assert!(Checkpoint::decode("cfxl-checkpoint 1\ntensors 1\ntensor x 1 2 -\n1.0\n").is_err());
        assert!(Checkpoint::decode("cfxl-checkpoint 1\ntensors 2\ntensor x 1 1 -\n1.0\n").is_err());
    }

    proptest! {
        #[test]
        fn arbitrary_values_round_trip(bits in prop::collection::vec(any::<u64>(), 1..40)) {
            let data: Vec<f64> = bits.iter().map(|b| f64::from_bits(*b)).filter(|v| v.is_finite()).collect();
            let ck = Checkpoint { tensors: vec![Tensor { name: "t".into(), rows: 1, cols: data.len(), tag: "-".into(), data: data.clone() }] };
            let back = Checkpoint::decode(&ck.encode()).unwrap();
            let got: Vec<u64> = back.tensors[0].data.iter().map(|v| v.to_bits()).collect();
            let want: Vec<u64> = data.iter().map(|v| v.to_bits()).collect();
            prop_assert_eq!(got, want);
        }
    }
}
