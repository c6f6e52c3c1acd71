use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{domain, usage, Result};

use super::scalar::{Field, Scalar};

/// Polynomial ring `k[x_1..x_m]`, read as a model of `k[[x_1..x_m]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    field: Field,
    vars: Vec<String>,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    pub fn new(field: Field, vars: &[&str]) -> Result<RingRef> {
        Ring::from_names(field, vars.iter().map(|v| v.to_string()).collect())
    }

    pub fn from_names(field: Field, vars: Vec<String>) -> Result<RingRef> {
        for (i, v) in vars.iter().enumerate() {
            let mut chars = v.chars();
            let ok = chars
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return usage(format!("invalid variable name {v:?}"));
            }
            if vars[..i].contains(v) {
                return usage(format!("duplicate variable {v:?}"));
            }
        }
        Ok(Arc::new(Ring { field, vars }))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same variables over another field.
    pub fn with_field(&self, field: Field) -> RingRef {
        Arc::new(Ring {
            field,
            vars: self.vars.clone(),
        })
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field, self.vars.join(","))
    }
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Monomial {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Sparse polynomial. Zero coefficients are never stored, so equal
/// polynomials have identical term maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    ring: RingRef,
    terms: BTreeMap<Monomial, Scalar>,
}

/// Polynomial standing for a power series known up to total degree `precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub poly: Poly,
    pub precision: u32,
}

impl Poly {
    pub fn zero(ring: &RingRef) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &RingRef) -> Poly {
        Poly::constant(ring, ring.field.one())
    }

    pub fn int(ring: &RingRef, n: i64) -> Poly {
        Poly::constant(ring, ring.field.int(n))
    }

    pub fn constant(ring: &RingRef, c: Scalar) -> Poly {
        Poly::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn var(ring: &RingRef, i: usize) -> Poly {
        Poly::monomial(ring, Monomial::var(ring.nvars(), i), ring.field.one())
    }

    pub fn monomial(ring: &RingRef, m: Monomial, c: Scalar) -> Poly {
        assert_eq!(m.0.len(), ring.nvars(), "exponent vector length");
        assert!(
            ring.field.contains(&c),
            "coefficient outside {}",
            ring.field
        );
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn parse(ring: &RingRef, text: &str) -> Result<Poly> {
        super::parse::parse_poly(ring, text)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        &self.ring.field
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.ring.field.zero())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Monomial::one(self.ring.nvars()))
    }

    /// Units of the local ring are exactly the series with nonzero constant term.
    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    /// The coefficient when the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(self.ring.field.zero()),
            1 if self.terms.keys().next().unwrap().is_one() => Some(self.constant_term()),
            _ => None,
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Smallest total degree of a term; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// Drops every term of total degree above `n`.
    pub fn truncate(&self, n: u32) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= n)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.ring.nvars() {
            return usage(format!(
                "evaluation point has {} coordinates, ring has {} variables",
                point.len(),
                self.ring.nvars()
            ));
        }
        if let Some(s) = point.iter().find(|s| !self.ring.field.contains(s)) {
            return usage(format!("coordinate {s} is not in {}", self.ring.field));
        }
        let mut acc = self.ring.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                t = &t * &x.pow(e as u64);
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Image in another ring with the same variables: rationals are reduced
    /// modulo `p`, prime-field elements must already agree.
    pub fn change_ring(&self, target: &RingRef) -> Result<Poly> {
        if target.vars != self.ring.vars {
            return usage("variable lists differ");
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let image = match c {
                Scalar::Q(q) => target.field.reduce(q),
                Scalar::Fp { .. } if target.field.contains(c) => Some(c.clone()),
                Scalar::Fp { .. } => None,
            };
            let Some(image) = image else {
                return domain(format!("coefficient {c} has no image in {}", target.field));
            };
            if !image.is_zero() {
                terms.insert(m.clone(), image);
            }
        }
        Ok(Poly {
            ring: target.clone(),
            terms,
        })
    }

    /// Inverse of a unit modulo all terms of total degree above `precision`.
    pub fn series_inverse(&self, precision: u32) -> Result<TruncatedSeries> {
        let Some(c0_inv) = self.constant_term().inv() else {
            return domain(format!("{self} is not a unit"));
        };
        let c0 = self.constant_term();
        let tail = self - &Poly::constant(&self.ring, c0);
        let step = tail.scale(&(-&c0_inv));
        let mut term = Poly::one(&self.ring);
        let mut acc = Poly::zero(&self.ring);
        for _ in 0..=precision {
            acc = &acc + &term;
            term = (&term * &step).truncate(precision);
            if term.is_zero() {
                break;
            }
        }
        Ok(TruncatedSeries {
            poly: acc.scale(&c0_inv),
            precision,
        })
    }

    fn check(&self, o: &Poly) -> Result<()> {
        if !Arc::ptr_eq(&self.ring, &o.ring) && self.ring != o.ring {
            return usage(format!("ring mismatch: {} vs {}", self.ring, o.ring));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &Poly) -> Result<Poly> {
        self.check(o)?;
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            add_term(&mut terms, m, c.clone());
        }
        Ok(Poly {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn checked_sub(&self, o: &Poly) -> Result<Poly> {
        self.checked_add(&-o)
    }

    pub fn checked_mul(&self, o: &Poly) -> Result<Poly> {
        self.check(o)?;
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                add_term(&mut terms, &ma.mul(mb), ca * cb);
            }
        }
        Ok(Poly {
            ring: self.ring.clone(),
            terms,
        })
    }
}

fn add_term(terms: &mut BTreeMap<Monomial, Scalar>, m: &Monomial, c: Scalar) {
    match terms.get_mut(m) {
        Some(a) => {
            let s = &*a + &c;
            if s.is_zero() {
                terms.remove(m);
            } else {
                *a = s;
            }
        }
        None => {
            if !c.is_zero() {
                terms.insert(m.clone(), c);
            }
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, o: &Poly) -> Poly {
                self.$checked(o).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, o: Poly) -> Poly {
                (&self).$method(&o)
            }
        }
        impl std::ops::$tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, o: &Poly) -> Poly {
                (&self).$method(o)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl std::ops::Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

fn fmt_monomial(vars: &[String], m: &Monomial) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(&m.0)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| {
            if e == 1 {
                v.clone()
            } else {
                format!("{v}^{e}")
            }
        })
        .collect();
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let magnitude = if negative { -c } else { c.clone() };
            let body = if m.is_one() {
                magnitude.to_string()
            } else if magnitude.is_one() {
                fmt_monomial(&self.ring.vars, m)
            } else {
                format!("{}*{}", magnitude, fmt_monomial(&self.ring.vars, m))
            };
            match (i, negative) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qxy() -> RingRef {
        Ring::new(Field::Rational, &["x", "y"]).unwrap()
    }

    fn p(r: &RingRef, s: &str) -> Poly {
        Poly::parse(r, s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = qxy();
        assert_eq!(p(&r, "1+x") * p(&r, "1-x"), p(&r, "1 - x^2"));
    }

    #[test]
    fn additive_identity() {
        let r = qxy();
        assert_eq!(p(&r, "x*y") + Poly::zero(&r), p(&r, "x*y"));
    }

    #[test]
    fn frobenius_in_characteristic_three() {
        let r = Ring::new(Field::prime(3).unwrap(), &["x", "y"]).unwrap();
        let cube = p(&r, "x+y").pow(3);
        // oracle: binomial coefficients 1,3,3,1 reduced mod 3
        assert_eq!(cube, p(&r, "x^3 + y^3"));
        assert_eq!(cube.to_string(), "x^3 + y^3");
    }

    #[test]
    fn unit_detection() {
        let r = qxy();
        assert!(p(&r, "1 + x").is_unit());
        assert!(!p(&r, "x^2*y").is_unit());
        let c = p(&r, "3 + x + y");
        assert!(c.is_unit());
        assert_eq!(c.constant_term(), Field::Rational.int(3));
    }

    #[test]
    fn geometric_series() {
        let r = qxy();
        let inv = p(&r, "1 - x").series_inverse(3).unwrap();
        assert_eq!(inv.poly, p(&r, "1 + x + x^2 + x^3"));
        assert_eq!(inv.precision, 3);
    }

    #[test]
    fn inverse_of_constant() {
        let r = qxy();
        let inv = Poly::int(&r, 2).series_inverse(0).unwrap();
        assert_eq!(inv.poly, p(&r, "1/2"));
    }

    #[test]
    fn inverse_of_one_plus_x_plus_y() {
        let r = qxy();
        let inv = p(&r, "1 + x + y").series_inverse(2).unwrap();
        assert_eq!(inv.poly, p(&r, "1 - x - y + x^2 + 2*x*y + y^2"));
        let prod = (p(&r, "1 + x + y") * inv.poly).truncate(2);
        assert!(prod.is_one());
    }

    #[test]
    fn series_inverse_of_non_unit_is_domain_error() {
        let r = qxy();
        assert!(matches!(
            p(&r, "x + y").series_inverse(3),
            Err(crate::Error::Domain(_))
        ));
    }

    #[test]
    fn evaluation() {
        let r = qxy();
        let q = Field::Rational;
        assert_eq!(
            p(&r, "x^2*y").eval(&[q.int(2), q.int(3)]).unwrap(),
            q.int(12)
        );
        let f = p(&r, "x^2*y + 5");
        assert_eq!(f.eval(&[q.zero(), q.zero()]).unwrap(), f.constant_term());
        let f7 = Field::prime(7).unwrap();
        let r7 = Ring::new(f7.clone(), &["x", "y"]).unwrap();
        assert_eq!(
            p(&r7, "x^3 + y^4").eval(&[f7.one(), f7.one()]).unwrap(),
            f7.int(2)
        );
    }

    #[test]
    fn printing_is_graded_lex_descending() {
        let r = qxy();
        assert_eq!(
            p(&r, "y + x^2 - 3*x + x*y").to_string(),
            "x^2 + x*y - 3*x + y"
        );
        assert_eq!(p(&r, "-1/2*x + 1").to_string(), "-1/2*x + 1");
        assert_eq!(Poly::zero(&r).to_string(), "0");
    }

    #[test]
    fn mixed_rings_are_usage_errors() {
        let a = p(&qxy(), "x");
        let r2 = Ring::new(Field::Rational, &["x", "z"]).unwrap();
        let b = p(&r2, "x");
        assert!(matches!(a.checked_add(&b), Err(crate::Error::Usage(_))));
        let r3 = Ring::new(Field::prime(5).unwrap(), &["x", "y"]).unwrap();
        assert!(a.checked_mul(&p(&r3, "x")).is_err());
    }

    #[test]
    fn reduction_mod_p() {
        let r = qxy();
        let r7 = r.with_field(Field::prime(7).unwrap());
        let g = p(&r, "1/2*x + 7*y").change_ring(&r7).unwrap();
        assert_eq!(g, p(&r7, "4*x"));
        assert!(p(&r, "1/7*x").change_ring(&r7).is_err());
    }
}
