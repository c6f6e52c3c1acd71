use std::fmt;

use crate::error::{domain, usage, Result};
use crate::ring::{Poly, RingRef, Scalar};

use super::scalar_matrix::ScalarMatrix;

/// Dense matrix of polynomials. Carries its ring so that empty matrices
/// still know where they live.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: RingRef,
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(ring: &RingRef, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![Poly::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: &RingRef, n: usize) -> PolyMatrix {
        PolyMatrix::diagonal(ring, &vec![Poly::one(ring); n])
    }

    /// `c · I_n`.
    pub fn scalar(c: &Poly, n: usize) -> PolyMatrix {
        PolyMatrix::diagonal(c.ring(), &vec![c.clone(); n])
    }

    pub fn diagonal(ring: &RingRef, entries: &[Poly]) -> PolyMatrix {
        let n = entries.len();
        let mut m = PolyMatrix::zeros(ring, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_rows(ring: &RingRef, rows: Vec<Vec<Poly>>) -> Result<PolyMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return usage("ragged matrix rows");
        }
        let data: Vec<Poly> = rows.into_iter().flatten().collect();
        if let Some(bad) = data.iter().find(|p| **p.ring() != **ring) {
            return usage(format!(
                "entry {bad} lives in {}, expected {ring}",
                bad.ring()
            ));
        }
        Ok(PolyMatrix {
            ring: ring.clone(),
            rows: r,
            cols: c,
            data,
        })
    }

    /// Builds a matrix from entry strings, e.g. `&[&["x", "y"], &["0", "-x"]]`.
    pub fn parse(ring: &RingRef, rows: &[&[&str]]) -> Result<PolyMatrix> {
        let parsed = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| Poly::parse(ring, s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        PolyMatrix::from_rows(ring, parsed)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        self.data[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = &Poly> {
        self.data.iter()
    }

    pub fn to_rows(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// Every entry has zero constant term.
    pub fn is_reduced(&self) -> bool {
        self.data.iter().all(|p| !p.is_unit())
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = PolyMatrix::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &Poly) -> PolyMatrix {
        self.map(|p| p * c)
    }

    pub fn truncate(&self, n: u32) -> PolyMatrix {
        self.map(|p| p.truncate(n))
    }

    /// Equality modulo all terms of total degree above `n`.
    pub fn equals_mod_degree(&self, other: &PolyMatrix, n: u32) -> bool {
        self.shape() == other.shape()
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| (a - b).truncate(n).is_zero())
    }

    pub fn change_ring(&self, target: &RingRef) -> Result<PolyMatrix> {
        let data = self
            .data
            .iter()
            .map(|p| p.change_ring(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix {
            ring: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    fn same_ring(&self, o: &PolyMatrix) -> Result<()> {
        if *self.ring != *o.ring {
            return usage(format!("ring mismatch: {} vs {}", self.ring, o.ring));
        }
        Ok(())
    }

    pub fn checked_mul(&self, o: &PolyMatrix) -> Result<PolyMatrix> {
        self.same_ring(o)?;
        if self.cols != o.rows {
            return usage(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            ));
        }
        let mut out = PolyMatrix::zeros(&self.ring, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, o: &PolyMatrix, f: impl Fn(&Poly, &Poly) -> Poly) -> Result<PolyMatrix> {
        self.same_ring(o)?;
        if self.shape() != o.shape() {
            return usage(format!(
                "shape mismatch {}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            ));
        }
        Ok(PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn checked_add(&self, o: &PolyMatrix) -> Result<PolyMatrix> {
        self.zip_with(o, |a, b| a + b)
    }

    pub fn checked_sub(&self, o: &PolyMatrix) -> Result<PolyMatrix> {
        self.zip_with(o, |a, b| a - b)
    }

    pub fn direct_sum(&self, o: &PolyMatrix) -> Result<PolyMatrix> {
        self.same_ring(o)?;
        let mut out = PolyMatrix::zeros(&self.ring, self.rows + o.rows, self.cols + o.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, o);
        Ok(out)
    }

    /// Block-diagonal matrix from a list of blocks.
    pub fn block_diagonal(ring: &RingRef, blocks: &[PolyMatrix]) -> Result<PolyMatrix> {
        blocks
            .iter()
            .try_fold(PolyMatrix::zeros(ring, 0, 0), |acc, b| acc.direct_sum(b))
    }

    /// Assembles a matrix from rows of blocks. Blocks in a block row must
    /// share a height and blocks in a block column must share a width.
    pub fn block(ring: &RingRef, blocks: &[Vec<PolyMatrix>]) -> Result<PolyMatrix> {
        let ncols = blocks.first().map_or(0, Vec::len);
        if blocks.iter().any(|r| r.len() != ncols) {
            return usage("ragged block rows");
        }
        let heights: Vec<usize> = blocks.iter().map(|r| r[0].rows).collect();
        let widths: Vec<usize> = (0..ncols).map(|j| blocks[0][j].cols).collect();
        for (bi, row) in blocks.iter().enumerate() {
            for (bj, b) in row.iter().enumerate() {
                if *b.ring != **ring {
                    return usage("block ring mismatch");
                }
                if b.rows != heights[bi] || b.cols != widths[bj] {
                    return usage(format!(
                        "block ({bi},{bj}) is {}x{}, expected {}x{}",
                        b.rows, b.cols, heights[bi], widths[bj]
                    ));
                }
            }
        }
        let mut out = PolyMatrix::zeros(ring, heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (bi, row) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                out.paste(r0, c0, b);
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        Ok(out)
    }

    /// Overwrites the entries starting at `(r0, c0)` with `b`.
    pub fn paste(&mut self, r0: usize, c0: usize, b: &PolyMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&self.ring, nr, nc);
        for i in 0..nr {
            for j in 0..nc {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(&self.ring, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> PolyMatrix {
        self.submatrix(0, self.rows, j, 1)
    }

    pub fn row_matrix(&self, i: usize) -> PolyMatrix {
        self.submatrix(i, 1, 0, self.cols)
    }

    pub fn pow(&self, e: u32) -> PolyMatrix {
        let mut acc = PolyMatrix::identity(&self.ring, self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Matrix of constant terms.
    pub fn constant_part(&self) -> ScalarMatrix {
        ScalarMatrix::from_fn(self.rows, self.cols, self.ring.field(), |i, j| {
            self.get(i, j).constant_term()
        })
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<ScalarMatrix> {
        let mut vals = Vec::with_capacity(self.data.len());
        for p in &self.data {
            vals.push(p.eval(point)?);
        }
        Ok(ScalarMatrix::from_fn(
            self.rows,
            self.cols,
            self.ring.field(),
            |i, j| vals[i * self.cols + j].clone(),
        ))
    }

    /// Rank of the matrix reduced to the residue field.
    pub fn residue_rank(&self) -> usize {
        self.constant_part().rank()
    }

    /// Exact inverse of an entrywise upper or lower unitriangular matrix.
    pub fn invert_unitriangular(&self) -> Result<PolyMatrix> {
        if !self.is_square() {
            return domain("unitriangular inverse needs a square matrix");
        }
        let n = self.rows;
        if (0..n).any(|i| !self.get(i, i).is_one()) {
            return domain("diagonal is not identically one");
        }
        let upper = (0..n).all(|i| (0..i).all(|j| self.get(i, j).is_zero()));
        let lower = (0..n).all(|i| (i + 1..n).all(|j| self.get(i, j).is_zero()));
        if !upper && !lower {
            return domain("matrix is neither upper nor lower triangular");
        }
        let id = PolyMatrix::identity(&self.ring, n);
        let nil = &id - self;
        let mut acc = id.clone();
        let mut term = id;
        for _ in 1..n {
            term = &term * &nil;
            acc = &acc + &term;
        }
        Ok(acc)
    }
}

macro_rules! matop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&PolyMatrix> for &PolyMatrix {
            type Output = PolyMatrix;
            fn $method(self, o: &PolyMatrix) -> PolyMatrix {
                self.$checked(o).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

matop!(Add, add, checked_add);
matop!(Sub, sub, checked_sub);
matop!(Mul, mul, checked_mul);

impl std::ops::Neg for &PolyMatrix {
    type Output = PolyMatrix;
    fn neg(self) -> PolyMatrix {
        self.map(|p| -p)
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|p| p.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Field, Ring};

    fn r() -> RingRef {
        Ring::new(Field::Rational, &["x", "y"]).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let r = r();
        let m = PolyMatrix::parse(&r, &[&["x", "y"], &["1", "x*y"]]).unwrap();
        assert_eq!(&PolyMatrix::identity(&r, 2) * &m, m);
    }

    #[test]
    fn direct_sum_shape() {
        let r = r();
        let a = PolyMatrix::parse(&r, &[&["x", "y", "1"]]).unwrap();
        let b = PolyMatrix::parse(&r, &[&["x"], &["y"]]).unwrap();
        assert_eq!(a.direct_sum(&b).unwrap().shape(), (3, 4));
    }

    #[test]
    fn e6_pair_multiplies_to_f() {
        let r = r();
        let beta = PolyMatrix::parse(
            &r,
            &[&["y", "0", "x"], &["x", "-y^2", "0"], &["0", "x", "-y"]],
        )
        .unwrap();
        let alpha = PolyMatrix::parse(
            &r,
            &[
                &["y^3", "x^2", "x*y^2"],
                &["x*y", "-y^2", "x^2"],
                &["x^2", "-x*y", "-y^3"],
            ],
        )
        .unwrap();
        let f = Poly::parse(&r, "x^3 + y^4").unwrap();
        assert_eq!(&beta * &alpha, PolyMatrix::scalar(&f, 3));
    }

    #[test]
    fn shape_mismatch_is_usage_error() {
        let r = r();
        let a = PolyMatrix::zeros(&r, 2, 3);
        assert!(matches!(a.checked_mul(&a), Err(crate::Error::Usage(_))));
        assert!(PolyMatrix::block(&r, &[vec![a.clone(), PolyMatrix::zeros(&r, 1, 1)]]).is_err());
    }

    #[test]
    fn block_assembly() {
        let r = r();
        let i2 = PolyMatrix::identity(&r, 2);
        let z = PolyMatrix::zeros(&r, 2, 1);
        let x = PolyMatrix::parse(&r, &[&["x"]]).unwrap();
        let b = PolyMatrix::block(&r, &[vec![i2, z.clone()], vec![z.transpose(), x]]).unwrap();
        assert_eq!(
            b,
            PolyMatrix::parse(&r, &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "x"]]).unwrap()
        );
    }

    #[test]
    fn residue_ranks_of_dinfty_factors() {
        let r = r();
        let phi1 = PolyMatrix::parse(&r, &[&["x", "y"], &["0", "-x"]]).unwrap();
        let phi3 = PolyMatrix::parse(&r, &[&["1", "0"], &["x", "y"]]).unwrap();
        assert_eq!(phi1.residue_rank(), 0);
        assert_eq!(phi3.residue_rank(), 1);
        assert_eq!(PolyMatrix::identity(&r, 4).residue_rank(), 4);
    }

    #[test]
    fn unitriangular_inverse() {
        let r = r();
        let m = PolyMatrix::parse(&r, &[&["1", "x*y"], &["0", "1"]]).unwrap();
        let inv = m.invert_unitriangular().unwrap();
        assert_eq!(
            inv,
            PolyMatrix::parse(&r, &[&["1", "-x*y"], &["0", "1"]]).unwrap()
        );
        let id = PolyMatrix::identity(&r, 3);
        assert_eq!(id.invert_unitriangular().unwrap(), id);
        let low = PolyMatrix::parse(
            &r,
            &[&["1", "0", "0"], &["x", "1", "0"], &["y", "x^2", "1"]],
        )
        .unwrap();
        let li = low.invert_unitriangular().unwrap();
        assert!((&low * &li).is_identity() && (&li * &low).is_identity());
        let bad = PolyMatrix::parse(&r, &[&["1", "x"], &["y", "1"]]).unwrap();
        assert!(matches!(
            bad.invert_unitriangular(),
            Err(crate::Error::Domain(_))
        ));
    }
}
