//! `R^•` as an atomic monoid for the factorization machinery.

use super::{EichlerError, EichlerOrder};
use crate::factorize::MonoidProvider;
use crate::mat2::Mat2;

impl MonoidProvider for EichlerOrder {
    type Elem = Mat2;
    type Error = EichlerError;

    fn one(&self) -> Mat2 {
        Mat2::identity()
    }

    fn is_unit(&self, x: &Mat2) -> Result<bool, EichlerError> {
        EichlerOrder::is_unit(self, x)
    }

    fn is_cancellative(&self, x: &Mat2) -> Result<bool, EichlerError> {
        self.require_non_hereditary()?;
        EichlerOrder::is_cancellative(self, x)
    }

    fn multiply(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        x * y
    }

    fn exact_left_divide(&self, u: &Mat2, x: &Mat2) -> Option<Mat2> {
        EichlerOrder::exact_left_divide(self, u, x)
    }

    fn left_divisor_atoms(&self, x: &Mat2) -> Result<Vec<(Mat2, Mat2)>, EichlerError> {
        Ok(EichlerOrder::left_divisor_atoms(self, x)?
            .into_iter()
            .map(|(atom, cof)| (atom.matrix, cof))
            .collect())
    }

    fn canonical_right_associate(&self, u: &Mat2) -> Result<(Mat2, Mat2), EichlerError> {
        let c = EichlerOrder::canonical_right_associate(self, u)?;
        Ok((c.representative.matrix, c.unit))
    }

    fn involution(&self, x: &Mat2) -> Mat2 {
        x.adj()
    }

    fn atom_norm_valuations(&self, max: u32) -> Result<Vec<u32>, EichlerError> {
        let mut out = Vec::new();
        for t in 1..=max {
            if !self.atom_entries(t)?.is_empty() {
                out.push(t);
            }
        }
        Ok(out)
    }
}
