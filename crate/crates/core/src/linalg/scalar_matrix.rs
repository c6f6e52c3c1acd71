use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ring::{Field, Scalar};

use super::PolyMatrix;

/// Dense matrix over the coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn from_fn(
        rows: usize,
        cols: usize,
        field: &Field,
        f: impl Fn(usize, usize) -> Scalar,
    ) -> ScalarMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ScalarMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !m[r][c].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let pivot = m[rank].clone();
            let inv = pivot[c].inv().expect("nonzero pivot");
            for (r, row) in m.iter_mut().enumerate() {
                if r == rank || row[c].is_zero() {
                    continue;
                }
                let factor = &row[c] * &inv;
                for (entry, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *entry = &*entry - &(&factor * p);
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Uniformly random field element; small integers for the rationals.
pub fn random_scalar(field: &Field, rng: &mut impl Rng) -> Scalar {
    match field {
        Field::Rational => field.int(rng.gen_range(-50..=50)),
        Field::Prime(p) => field.int(rng.gen_range(0..*p) as i64),
    }
}

impl PolyMatrix {
    /// Rank over the fraction field, estimated as the maximum scalar rank at
    /// `trials` random points drawn from `rng`.
    pub fn generic_rank_with(&self, trials: usize, rng: &mut impl Rng) -> usize {
        let field = self.ring().field().clone();
        let nvars = self.ring().nvars();
        let mut best = 0;
        for _ in 0..trials.max(1) {
            let point: Vec<Scalar> = (0..nvars).map(|_| random_scalar(&field, rng)).collect();
            let rank = self.eval(&point).expect("point matches ring").rank();
            best = best.max(rank);
            if best == self.rows().min(self.cols()) {
                break;
            }
        }
        best
    }

    /// [`generic_rank_with`](Self::generic_rank_with) driven by a seeded ChaCha stream.
    pub fn generic_rank(&self, trials: usize, seed: u64) -> usize {
        self.generic_rank_with(trials, &mut ChaCha8Rng::seed_from_u64(seed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    #[test]
    fn generic_ranks() {
        let r = Ring::new(Field::Rational, &["x", "y"]).unwrap();
        let m = PolyMatrix::parse(&r, &[&["x", "y"], &["0", "-x"]]).unwrap();
        // determinant oracle: -x^2 is a nonzero polynomial
        assert_eq!(
            (m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0)).to_string(),
            "-x^2"
        );
        assert_eq!(m.generic_rank(5, 1), 2);
        assert_eq!(PolyMatrix::zeros(&r, 3, 2).generic_rank(5, 1), 0);
        let dup = PolyMatrix::parse(&r, &[&["x", "x"], &["y", "y"]]).unwrap();
        assert_eq!(dup.generic_rank(5, 1), 1);
    }

    #[test]
    fn scalar_rank() {
        let f = Field::prime(7).unwrap();
        let m = ScalarMatrix::from_fn(3, 3, &f, |i, j| f.int((i * 3 + j) as i64));
        assert_eq!(m.rank(), 2);
    }
}
