use serde::{Deserialize, Serialize};

use super::{ComplexMatrix, Ket, Real, C};
use crate::error::{Error, Result};
use crate::states::LabeledBasis;

/// `{"rows":N,"cols":M,"re":[...],"im":[...]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixJson {
    pub fn from_matrix<T: Real>(m: &ComplexMatrix<T>) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            re: m.as_slice().iter().map(|z| z.re.as_f64()).collect(),
            im: m.as_slice().iter().map(|z| z.im.as_f64()).collect(),
        }
    }

    pub fn to_matrix<T: Real>(&self) -> Result<ComplexMatrix<T>> {
        if self.re.len() != self.im.len() {
            return Err(Error::Malformed(format!(
                "re has {} entries but im has {}",
                self.re.len(),
                self.im.len()
            )));
        }
        let data = self.re.iter().zip(&self.im).map(|(&r, &i)| C::new(T::lit(r), T::lit(i))).collect();
        ComplexMatrix::new(self.rows, self.cols, data)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix json serializes")
    }
}

/// Column-vector form of [`MatrixJson`] plus one label per amplitude such as
/// `"1_D|0_A|V"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KetJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub labels: Vec<String>,
}

impl KetJson {
    pub fn from_ket<T: Real>(k: &Ket<T>) -> Self {
        Self {
            rows: k.dim(),
            cols: 1,
            re: k.amplitudes().iter().map(|z| z.re.as_f64()).collect(),
            im: k.amplitudes().iter().map(|z| z.im.as_f64()).collect(),
            labels: k.basis().labels(),
        }
    }

    /// Rebuilds the amplitudes over `basis`, which must produce the same labels.
    pub fn to_ket<T: Real>(&self, basis: LabeledBasis) -> Result<Ket<T>> {
        if basis.labels() != self.labels {
            return Err(Error::Malformed("ket labels do not match the basis".into()));
        }
        if self.cols != 1 || self.rows != self.re.len() || self.re.len() != self.im.len() {
            return Err(Error::Malformed("ket json must be a column vector".into()));
        }
        let amps = self.re.iter().zip(&self.im).map(|(&r, &i)| C::new(T::lit(r), T::lit(i))).collect();
        Ket::unnormalized(amps, basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matrix_json_roundtrip(rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
            let m = ComplexMatrix::<f64>::from_fn(rows, cols, |i, j| {
                let x = (seed.wrapping_mul(6364136223846793005).wrapping_add((i * 7 + j) as u64) >> 11) as f64 / (1u64 << 53) as f64;
                C::new(x - 0.5, 0.25 - x * x)
            });
            let text = serde_json::to_string(&MatrixJson::from_matrix(&m)).unwrap();
            let back: ComplexMatrix<f64> = MatrixJson::parse(&text).unwrap().to_matrix().unwrap();
            prop_assert_eq!(back, m);
        }
    }

    #[test]
    fn rejects_inconsistent_lengths() {
        let j = MatrixJson { rows: 1, cols: 2, re: vec![1.0, 0.0], im: vec![0.0] };
        assert!(j.to_matrix::<f64>().is_err());
        let j = MatrixJson { rows: 2, cols: 2, re: vec![1.0, 0.0], im: vec![0.0, 0.0] };
        assert!(j.to_matrix::<f64>().is_err());
    }

    #[test]
    fn ket_json_carries_labels() {
        let k = Ket::<f64>::basis_state(5, LabeledBasis::rail()).unwrap();
        let j = KetJson::from_ket(&k);
        assert_eq!(j.labels[5], "1_D|0_A|V");
        assert_eq!(j.re[5], 1.0);
        let back: Ket<f64> = j.to_ket(LabeledBasis::rail()).unwrap();
        assert_eq!(back.amplitudes(), k.amplitudes());
    }
}
