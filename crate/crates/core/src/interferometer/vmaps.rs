use crate::linalg::{ComplexMatrix, Real};

/// Rail indices of the first three-dimensional subspace:
/// `|0_D,0_A,V>`, `|0_D,1_A,H>`, `|1_D,0_A,H>`.
pub const H1: [usize; 3] = [1, 2, 4];
/// Rail indices of the second one, in the order the coefficient pattern is
/// laid over: `|1_D,0_A,V>`, `|1_D,1_A,H>`, `|0_D,1_A,V>`.
pub const H2: [usize; 3] = [5, 6, 3];
/// `|0_D,0_A,H>`.
pub const H3: usize = 0;
/// `|1_D,1_A,V>`.
pub const H4: usize = 7;

fn pattern<T: Real>() -> ComplexMatrix<T> {
    let (s2, s3, s6) = (0.5f64.sqrt(), (1.0f64 / 3.0).sqrt(), (1.0f64 / 6.0).sqrt());
    let two_thirds = (2.0f64 / 3.0).sqrt();
    ComplexMatrix::from_real(3, 3, &[s2, -s2, 0.0, s6, s6, -two_thirds, s3, s3, s3]).expect("3x3")
}

/// `(V1, V2)`: row `k` holds the coordinates of `Phi_k` (resp. `Phi'_k`)
/// over `H1` (resp. `H2`).
pub fn build_v_maps<T: Real>() -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    (pattern(), pattern())
}

/// Rows `Phi1, Phi2, Phi'1, Phi'2, Phi3, Phi'3, |H3>, |H4>` over the eight
/// rails. Left-multiplying a rail vector yields its coordinates in that
/// basis.
pub fn transported_basis<T: Real>() -> ComplexMatrix<T> {
    let (v1, v2) = build_v_maps::<T>();
    let mut w = ComplexMatrix::zeros(8, 8);
    let rows = [(0, &v1, 0, &H1), (1, &v1, 1, &H1), (2, &v2, 0, &H2), (3, &v2, 1, &H2), (4, &v1, 2, &H1), (5, &v2, 2, &H2)];
    for (r, v, k, idx) in rows {
        for (j, &rail) in idx.iter().enumerate() {
            w[(r, rail)] = v[(k, j)];
        }
    }
    w[(6, H3)] = crate::linalg::re(T::one());
    w[(7, H4)] = crate::linalg::re(T::one());
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::LabeledBasis;

    #[test]
    fn first_map_rows() {
        let (v1, _) = build_v_maps::<f64>();
        let r = 0.5f64.sqrt();
        assert_eq!(v1.row(0).iter().map(|c| c.re).collect::<Vec<_>>(), vec![r, -r, 0.0]);
        for c in v1.row(2) {
            assert!((c.re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
        assert!((v1[(1, 2)].re + (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn maps_are_unitary() {
        let (v1, v2) = build_v_maps::<f64>();
        assert!(v1.unitary_residual() < 1e-12 && v2.unitary_residual() < 1e-12);
        assert!(transported_basis::<f64>().unitary_residual() < 1e-12);
        let (w1, _) = build_v_maps::<f32>();
        assert!(w1.unitary_residual() < 1e-6);
    }

    #[test]
    fn subspaces_are_labeled_as_expected() {
        let rail = LabeledBasis::rail();
        assert_eq!(H1.map(|i| rail.label(i)), ["0_D|0_A|V", "0_D|1_A|H", "1_D|0_A|H"]);
        assert_eq!(H2.map(|i| rail.label(i)), ["1_D|0_A|V", "1_D|1_A|H", "0_D|1_A|V"]);
        assert_eq!(rail.label(H3), "0_D|0_A|H");
        assert_eq!(rail.label(H4), "1_D|1_A|V");
    }

    #[test]
    fn transported_rows_are_the_primed_vectors() {
        let w = transported_basis::<f64>();
        let r = 0.5f64.sqrt();
        // Phi'1 = (|1_D,0_A,V> - |1_D,1_A,H>)/sqrt(2)
        assert_eq!(w[(2, 5)].re, r);
        assert_eq!(w[(2, 6)].re, -r);
        // Phi'3 has equal weight on |0_D,1_A,V>
        assert!((w[(5, 3)].re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }
}
