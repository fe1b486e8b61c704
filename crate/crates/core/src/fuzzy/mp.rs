use crate::device::{IdealArray, Orientation, WeightArray};
use crate::matrix::Matrix;

/// Binary McCulloch-Pitts XOR network with hard-threshold units.
///
/// Hidden weights `S = [[2, -1], [-1, 2]]` give `z1 = x1 AND NOT x2` and
/// `z2 = x2 AND NOT x1`; output weights `[2, 2]` OR them together. A unit fires
/// when its weighted input reaches the threshold.
#[derive(Debug, Clone)]
pub struct MpNetwork {
    hidden: IdealArray,
    output: IdealArray,
    threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpOutput {
    pub hidden_preactivation: [f64; 2],
    pub hidden: [u8; 2],
    pub y: u8,
}

impl Default for MpNetwork {
    fn default() -> Self {
        MpNetwork {
            hidden: IdealArray::from_matrix(Matrix::from_rows(&[vec![2.0, -1.0], vec![-1.0, 2.0]])),
            output: IdealArray::from_matrix(Matrix::from_rows(&[vec![2.0], vec![2.0]])),
            threshold: 2.0,
        }
    }
}

impl MpNetwork {
    pub fn hidden_weights(&self) -> Matrix {
        self.hidden.snapshot_weights()
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    fn fire(&self, v: f64) -> u8 {
        u8::from(v >= self.threshold)
    }

    /// Panics unless both inputs are 0 or 1.
    pub fn forward(&self, x1: u8, x2: u8) -> MpOutput {
        assert!(x1 <= 1 && x2 <= 1, "binary inputs expected");
        let pre = self
            .hidden
            .read_vmm(&[x1 as f64, x2 as f64], Orientation::ColumnsAsInputs)
            .expect("2x2 read");
        let hidden = [self.fire(pre[0]), self.fire(pre[1])];
        let sum = self
            .output
            .read_vmm(&[hidden[0] as f64, hidden[1] as f64], Orientation::RowsAsInputs)
            .expect("2x1 read");
        MpOutput {
            hidden_preactivation: [pre[0], pre[1]],
            hidden,
            y: self.fire(sum[0]),
        }
    }
}
