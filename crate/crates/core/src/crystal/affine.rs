use num_traits::Zero;

use crate::exactnum::Rat;
use crate::groups::IntMatrix;

/// `(v, X)`: the map `y ↦ Xy + v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineElement {
    pub rotation: IntMatrix,
    pub translation: Vec<Rat>,
}

impl AffineElement {
    pub fn new(rotation: IntMatrix, translation: Vec<Rat>) -> AffineElement {
        assert_eq!(rotation.dim(), translation.len(), "dimension mismatch");
        AffineElement { rotation, translation }
    }

    pub fn identity(dim: usize) -> AffineElement {
        AffineElement::new(IntMatrix::identity(dim), vec![Rat::zero(); dim])
    }

    /// Pure translation by an integer vector.
    pub fn lattice(m: &[i64]) -> AffineElement {
        AffineElement::new(
            IntMatrix::identity(m.len()),
            m.iter().map(|&k| Rat::from_integer(k)).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    /// `(v, X)(w, Y) = (v + Xw, XY)`.
    pub fn mul(&self, other: &AffineElement) -> AffineElement {
        let moved = self.rotation.apply(&other.translation);
        AffineElement {
            rotation: self.rotation.mul(&other.rotation),
            translation: self.translation.iter().zip(&moved).map(|(a, b)| *a + *b).collect(),
        }
    }

    /// `(−X⁻¹v, X⁻¹)`. Panics if `X` is not in GL(n, Z).
    pub fn inv(&self) -> AffineElement {
        let xi = self.rotation.inverse().expect("rotation part lies in GL(n, Z)");
        let t = xi.apply(&self.translation).into_iter().map(|a| -a).collect();
        AffineElement { rotation: xi, translation: t }
    }

    pub fn is_translation(&self) -> bool {
        self.rotation == IntMatrix::identity(self.dim())
    }

    /// The translation part when it is integral.
    pub fn integer_translation(&self) -> Option<Vec<i64>> {
        self.translation
            .iter()
            .map(|r| r.is_integer().then(|| r.to_integer()))
            .collect()
    }
}
