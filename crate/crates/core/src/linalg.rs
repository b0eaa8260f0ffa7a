//! Small dense helpers for the 4×4 boundary matrices.

use nalgebra::Matrix4;

pub type Mat4 = Matrix4<f64>;

/// Determinant by LU factorisation with partial pivoting.
///
/// Exactly singular pivots short-circuit to zero.
pub fn lu_determinant(m: &Mat4) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..4 {
        let mut pivot = col;
        for row in col + 1..4 {
            if a[(row, col)].abs() > a[(pivot, col)].abs() {
                pivot = row;
            }
        }
        if a[(pivot, col)] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap_rows(pivot, col);
            det = -det;
        }
        let p = a[(col, col)];
        det *= p;
        for row in col + 1..4 {
            let factor = a[(row, col)] / p;
            if factor != 0.0 {
                for j in col + 1..4 {
                    a[(row, j)] -= factor * a[(col, j)];
                }
            }
        }
    }
    det
}

/// Largest absolute cofactor, a natural scale for judging how close a
/// determinant is to zero.
pub fn max_cofactor(m: &Mat4) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let minor = m.remove_row(i).remove_column(j);
            best = best.max(minor.determinant().abs());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal() {
        assert_eq!(lu_determinant(&Mat4::identity()), 1.0);
        let d = Mat4::from_diagonal(&nalgebra::Vector4::new(2.0, 3.0, 4.0, 5.0));
        assert_eq!(lu_determinant(&d), 120.0);
    }

    #[test]
    fn permutation_sign() {
        let mut p = Mat4::identity();
        p.swap_rows(0, 3);
        assert_eq!(lu_determinant(&p), -1.0);
        p.swap_rows(1, 2);
        assert_eq!(lu_determinant(&p), 1.0);
    }

    #[test]
    fn singular_is_zero() {
        let m = Mat4::new(
            1.0, 2.0, 3.0, 4.0, //
            2.0, 4.0, 6.0, 8.0, //
            0.0, 1.0, 0.0, 1.0, //
            1.0, 0.0, 1.0, 0.0,
        );
        assert!(lu_determinant(&m).abs() < 1e-14);
    }

    #[test]
    fn agrees_with_cofactor_expansion() {
        let m = Mat4::new(
            0.3, -1.2, 2.0, 0.7, //
            1.5, 0.1, -0.4, 2.2, //
            -0.9, 0.8, 1.1, -1.3, //
            0.25, 1.75, -2.5, 0.5,
        );
        let expansion: f64 = (0..4)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[(0, j)] * m.remove_row(0).remove_column(j).determinant()
            })
            .sum();
        assert!((lu_determinant(&m) - expansion).abs() < 1e-13);
    }
}
