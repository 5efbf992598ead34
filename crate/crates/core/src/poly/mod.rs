//! Sparse multivariate polynomial algebra over [`Rational`].
//!
//! Polynomials are keyed by exponent vectors and never store zero
//! coefficients, so structural equality is semantic equality. Canonical
//! printing and monomial enumeration both use the graded lexicographic order:
//! lower total degree first, and within a degree `x1`-major (so the degree-2
//! basis in two variables reads `1, x1, x2, x1^2, x1*x2, x2^2`). Printing
//! lists terms highest degree first, which is how the certificates are
//! conventionally written.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::exactnum::Rational;

mod parse;

pub use parse::{parse_polynomial, ParseError};

/// An exponent vector; its length is the ambient variable count.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Monomial {
        Monomial { exponents }
    }

    pub fn constant(nvars: usize) -> Monomial {
        Monomial {
            exponents: vec![0; nvars],
        }
    }

    /// The monomial `x_i` in `nvars` variables.
    pub fn variable(nvars: usize, i: usize) -> Monomial {
        let mut exponents = vec![0; nvars];
        exponents[i] = 1;
        Monomial { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn nvars(&self) -> usize {
        self.exponents.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// True when every exponent is even.
    pub fn is_even(&self) -> bool {
        self.exponents.iter().all(|&e| e % 2 == 0)
    }

    /// Entrywise half of an all-even monomial.
    pub fn half(&self) -> Option<Monomial> {
        if !self.is_even() {
            return None;
        }
        Some(Monomial::new(self.exponents.iter().map(|&e| e / 2).collect()))
    }

    /// Entrywise product `x^a * x^b`. Exponents are machine words; degrees in
    /// this crate stay tiny, so overflow is a hard error rather than a wrap.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.nvars(), other.nvars(), "variable count mismatch");
        Monomial::new(
            self.exponents
                .iter()
                .zip(&other.exponents)
                .map(|(&a, &b)| a.checked_add(b).expect("monomial exponent overflow"))
                .collect(),
        )
    }

    pub fn double(&self) -> Monomial {
        self.mul(self)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then `x1`-major within a
    /// degree (the exponent vector that is lexicographically larger sorts
    /// earlier).
    fn cmp(&self, other: &Monomial) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{:?}", self.exponents)
    }
}

/// Errors from polynomial operations whose inputs can disagree structurally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyError {
    VariableCountMismatch { left: usize, right: usize },
    PointLengthMismatch { nvars: usize, point: usize },
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::VariableCountMismatch { left, right } => {
                write!(f, "variable count mismatch: {left} vs {right}")
            }
            PolyError::PointLengthMismatch { nvars, point } => {
                write!(f, "point of length {point} for a polynomial in {nvars} variables")
            }
        }
    }
}

impl std::error::Error for PolyError {}

/// Degree and support summary; the zero polynomial reports `total_degree:
/// None` and is homogeneous vacuously.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeInfo {
    pub total_degree: Option<u32>,
    pub is_homogeneous: bool,
    pub support: Vec<Monomial>,
}

/// A sparse polynomial over `Rational` in a fixed number of variables.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Polynomial {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Polynomial {
        let mut p = Polynomial::zero(nvars);
        p.add_term(Monomial::constant(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Polynomial {
        Polynomial::constant(nvars, Rational::one())
    }

    /// The variable `x_i` as a polynomial.
    pub fn variable(nvars: usize, i: usize) -> Polynomial {
        let mut p = Polynomial::zero(nvars);
        p.add_term(Monomial::variable(nvars, i), Rational::one());
        p
    }

    pub fn monomial(nvars: usize, m: Monomial, c: Rational) -> Polynomial {
        assert_eq!(m.nvars(), nvars);
        let mut p = Polynomial::zero(nvars);
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Polynomial
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c * x^m` in place, pruning the term if the sum cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        assert_eq!(m.nvars(), self.nvars, "variable count mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_nvars(other)?;
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    fn check_nvars(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VariableCountMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn square(&self) -> Polynomial {
        self.checked_mul(self).expect("same polynomial")
    }

    /// Integer power by repeated multiplication; exponents here are small.
    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one(self.nvars);
        for _ in 0..e {
            out = out.checked_mul(self).expect("same nvars");
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointLengthMismatch {
                nvars: self.nvars,
                point: point.len(),
            });
        }
        // per-variable power tables; degrees are small and points get reused
        let max_deg: Vec<u32> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|m| m.exponents()[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<Rational>> = (0..self.nvars)
            .map(|i| {
                let mut tbl = Vec::with_capacity(max_deg[i] as usize + 1);
                tbl.push(Rational::one());
                for e in 1..=max_deg[i] as usize {
                    let next = &tbl[e - 1] * &point[i];
                    tbl.push(next);
                }
                tbl
            })
            .collect();
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term *= &powers[i][e as usize];
                }
            }
            acc += &term;
        }
        Ok(acc)
    }

    /// The gradient as a vector of partial derivatives.
    pub fn gradient(&self) -> PolyVector {
        let entries = (0..self.nvars)
            .map(|i| {
                let mut d = Polynomial::zero(self.nvars);
                for (m, c) in &self.terms {
                    let e = m.exponents()[i];
                    if e > 0 {
                        let mut exps = m.exponents().to_vec();
                        exps[i] -= 1;
                        d.add_term(Monomial::new(exps), c * &Rational::from_int(e as i64));
                    }
                }
                d
            })
            .collect();
        PolyVector::new(entries).expect("gradient entries share nvars")
    }

    /// Exact composition `self(images[0], ..., images[n-1])`. All images must
    /// share one variable count, which becomes the result's.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::PointLengthMismatch {
                nvars: self.nvars,
                point: images.len(),
            });
        }
        let m = images.first().map(|p| p.nvars).unwrap_or(0);
        for img in images {
            if img.nvars != m {
                return Err(PolyError::VariableCountMismatch {
                    left: m,
                    right: img.nvars,
                });
            }
        }
        let max_deg: Vec<u32> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|mm| mm.exponents()[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<Polynomial>> = (0..self.nvars)
            .map(|i| {
                let mut tbl = vec![Polynomial::one(m)];
                for e in 1..=max_deg[i] as usize {
                    let next = tbl[e - 1].checked_mul(&images[i]).expect("same nvars");
                    tbl.push(next);
                }
                tbl
            })
            .collect();
        let mut acc = Polynomial::zero(m);
        for (mono, c) in &self.terms {
            let mut term = Polynomial::constant(m, c.clone());
            for (i, &e) in mono.exponents().iter().enumerate() {
                if e > 0 {
                    term = term.checked_mul(&powers[i][e as usize]).expect("same nvars");
                }
            }
            acc = acc.checked_add(&term).expect("same nvars");
        }
        Ok(acc)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    pub fn degree_info(&self) -> DegreeInfo {
        let total_degree = self.total_degree();
        let is_homogeneous = match total_degree {
            None => true,
            Some(d) => self.terms.keys().all(|m| m.total_degree() == d),
        };
        DegreeInfo {
            total_degree,
            is_homogeneous,
            support: self.terms.keys().cloned().collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree_info().is_homogeneous
    }

    /// Canonical text form with the given variable names.
    pub fn to_string_with(&self, vars: &[String]) -> String {
        assert_eq!(vars.len(), self.nvars, "variable name count mismatch");
        if self.terms.is_empty() {
            return "0".to_string();
        }
        // highest degree first, x1-major within a degree
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            b.total_degree()
                .cmp(&a.total_degree())
                .then_with(|| b.exponents().cmp(a.exponents()))
        });
        let mut out = String::new();
        for (idx, (m, c)) in terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_zero() && (mag != Rational::one() || m.is_constant()) {
                factors.push(mag.to_string());
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(vars[i].clone()),
                    _ => factors.push(format!("{}^{}", vars[i], e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Default variable names `x1, ..., xn`.
    pub fn to_canonical_string(&self) -> String {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        self.to_string_with(&names)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_canonical_string())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for &Polynomial {
            type Output = Polynomial;
            /// Panics on a variable-count mismatch; see the `checked_*` form.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$trait for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, checked_add);
poly_binop!(Sub, sub, checked_sub);
poly_binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

/// A nonempty sequence of polynomials sharing one variable count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVector {
    entries: Vec<Polynomial>,
}

impl PolyVector {
    pub fn new(entries: Vec<Polynomial>) -> Result<PolyVector, PolyError> {
        assert!(!entries.is_empty(), "empty polynomial vector");
        let nvars = entries[0].nvars();
        for p in &entries {
            if p.nvars() != nvars {
                return Err(PolyError::VariableCountMismatch {
                    left: nvars,
                    right: p.nvars(),
                });
            }
        }
        Ok(PolyVector { entries })
    }

    pub fn nvars(&self) -> usize {
        self.entries[0].nvars()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    /// Exact dot product with another vector of the same length.
    pub fn dot(&self, other: &PolyVector) -> Result<Polynomial, PolyError> {
        assert_eq!(self.len(), other.len(), "length mismatch");
        let mut acc = Polynomial::zero(self.nvars());
        for (a, b) in self.entries.iter().zip(other.entries()) {
            acc = acc.checked_add(&a.checked_mul(b)?)?;
        }
        Ok(acc)
    }
}

impl std::ops::Index<usize> for PolyVector {
    type Output = Polynomial;
    fn index(&self, i: usize) -> &Polynomial {
        &self.entries[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn p(src: &str, vars: &[&str]) -> Polynomial {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        parse_polynomial(src, &names).unwrap()
    }

    #[test]
    fn worked_sos_expansion() {
        // (2*x1*x2 + x2^2)^2 + (2*x1^2 + x1*x2 - 3*x2^2)^2
        let a = p("2*x1*x2 + x2^2", &["x1", "x2"]);
        let b = p("2*x1^2 + x1*x2 - 3*x2^2", &["x1", "x2"]);
        let sum = a.square() + b.square();
        let expect = p(
            "4*x1^4 + 4*x1^3*x2 - 7*x1^2*x2^2 - 2*x1*x2^3 + 10*x2^4",
            &["x1", "x2"],
        );
        assert_eq!(sum, expect);
    }

    #[test]
    fn additive_identity_and_difference_of_squares() {
        let q = p("x1^2 - 3*x2", &["x1", "x2"]);
        assert_eq!(&q + &Polynomial::zero(2), q);
        let prod = p("x1 + x2", &["x1", "x2"]) * p("x1 - x2", &["x1", "x2"]);
        assert_eq!(prod, p("x1^2 - x2^2", &["x1", "x2"]));
    }

    #[test]
    fn nvars_mismatch_is_an_error() {
        let a = Polynomial::variable(2, 0);
        let b = Polynomial::variable(3, 0);
        assert!(matches!(
            a.checked_add(&b),
            Err(PolyError::VariableCountMismatch { .. })
        ));
    }

    #[test]
    fn evaluation() {
        let q = p("x1^2 + x2^2", &["x1", "x2"]);
        let zero = [Rational::zero(), Rational::zero()];
        assert_eq!(q.eval(&zero).unwrap(), Rational::zero());
        let half = [Rational::new(1, 2), Rational::new(1, 2)];
        assert_eq!(q.eval(&half).unwrap(), Rational::new(1, 2));
        let sq = p("x^2", &["x"]);
        assert_eq!(sq.eval(&[Rational::from_int(2)]).unwrap(), Rational::from_int(4));
        assert!(sq.eval(&zero).is_err());
    }

    #[test]
    fn gradients() {
        let q = p("x1^2 + x2^2", &["x1", "x2"]);
        let g = q.gradient();
        assert_eq!(g[0], p("2*x1", &["x1", "x2"]));
        assert_eq!(g[1], p("2*x2", &["x1", "x2"]));

        let c = Polynomial::constant(3, Rational::from_int(5));
        for d in c.gradient().entries() {
            assert!(d.is_zero());
        }

        let cubic = p("x1^3*x2", &["x1", "x2"]);
        let g = cubic.gradient();
        assert_eq!(g[0], p("3*x1^2*x2", &["x1", "x2"]));
        assert_eq!(g[1], p("x1^3", &["x1", "x2"]));
    }

    #[test]
    fn substitution() {
        let q = p("x1^2 + x2^2", &["x1", "x2"]);
        let identity = vec![Polynomial::variable(2, 0), Polynomial::variable(2, 1)];
        assert_eq!(q.substitute(&identity).unwrap(), q);

        let sq = p("x^2", &["x"]);
        let image = vec![p("x1 + x2", &["x1", "x2"])];
        assert_eq!(
            sq.substitute(&image).unwrap(),
            p("x1^2 + 2*x1*x2 + x2^2", &["x1", "x2"])
        );

        let xy = p("x1*x2", &["x1", "x2"]);
        let swap = vec![Polynomial::variable(2, 1), Polynomial::variable(2, 0)];
        assert_eq!(xy.substitute(&swap).unwrap(), xy);
    }

    #[test]
    fn degree_info() {
        let g = p(
            "4*x1^4 + 4*x1^3*x2 - 7*x1^2*x2^2 - 2*x1*x2^3 + 10*x2^4",
            &["x1", "x2"],
        );
        let info = g.degree_info();
        assert_eq!(info.total_degree, Some(4));
        assert!(info.is_homogeneous);
        let support: Vec<&[u32]> = info.support.iter().map(|m| m.exponents()).collect();
        assert_eq!(
            support,
            vec![&[4, 0][..], &[3, 1], &[2, 2], &[1, 3], &[0, 4]]
        );

        let zero = Polynomial::zero(2);
        let info = zero.degree_info();
        assert_eq!(info.total_degree, None);
        assert!(info.is_homogeneous);

        let mixed = p("x1 + x2^2", &["x1", "x2"]);
        let info = mixed.degree_info();
        assert_eq!(info.total_degree, Some(2));
        assert!(!info.is_homogeneous);
    }

    #[test]
    fn euler_identity_for_homogeneous_forms() {
        // sum_i x_i dp/dx_i = k p for homogeneous p of degree k
        let q = p("4*x1^4 + 4*x1^3*x2 - 7*x1^2*x2^2 - 2*x1*x2^3 + 10*x2^4", &["x1", "x2"]);
        let grad = q.gradient();
        let xs = PolyVector::new(vec![Polynomial::variable(2, 0), Polynomial::variable(2, 1)])
            .unwrap();
        assert_eq!(grad.dot(&xs).unwrap(), q.scale(&Rational::from_int(4)));
    }

    #[test]
    fn example_one_decrease_shape() {
        // -grad(V) . f for V = x1^2 + x2^2, f = (-x1^3 + x2, -x1 - x2)
        let v = p("x1^2 + x2^2", &["x1", "x2"]);
        let f = PolyVector::new(vec![
            p("-x1^3 + x2", &["x1", "x2"]),
            p("-x1 - x2", &["x1", "x2"]),
        ])
        .unwrap();
        let decrease = v.gradient().dot(&f).unwrap().neg();
        assert_eq!(decrease, p("2*x1^4 + 2*x2^2", &["x1", "x2"]));
    }

    fn random_poly(rng: &mut SplitMix64, nvars: usize, deg: u32, terms: usize) -> Polynomial {
        let mut out = Polynomial::zero(nvars);
        for _ in 0..terms {
            let mut exps = vec![0u32; nvars];
            let mut budget = deg;
            for e in exps.iter_mut() {
                let take = rng.next_below(budget as u64 + 1) as u32;
                *e = take;
                budget -= take;
            }
            let c = Rational::new(rng.next_i64_in(-20, 20), rng.next_i64_in(1, 9));
            out.add_term(Monomial::new(exps), c);
        }
        out
    }

    #[test]
    fn print_parse_round_trip_on_random_polynomials() {
        let mut rng = SplitMix64::new(0x9017_1234);
        let names: Vec<String> = vec!["x1".into(), "x2".into(), "x3".into()];
        for trial in 0..200 {
            let nvars = 1 + (trial % 3);
            let q = random_poly(&mut rng, nvars, 6, 8);
            let text = q.to_string_with(&names[..nvars]);
            let back = parse_polynomial(&text, &names[..nvars]).unwrap();
            assert_eq!(back, q, "round trip failed for `{text}`");
        }
    }

    #[test]
    fn eval_commutes_with_substitution() {
        let mut rng = SplitMix64::new(99);
        for _ in 0..50 {
            let outer = random_poly(&mut rng, 2, 4, 5);
            let images = vec![
                random_poly(&mut rng, 2, 3, 4),
                random_poly(&mut rng, 2, 3, 4),
            ];
            let point = [
                Rational::new(rng.next_i64_in(-3, 3), rng.next_i64_in(1, 4)),
                Rational::new(rng.next_i64_in(-3, 3), rng.next_i64_in(1, 4)),
            ];
            let composed = outer.substitute(&images).unwrap();
            let lhs = composed.eval(&point).unwrap();
            let imgs_at: Vec<Rational> =
                images.iter().map(|g| g.eval(&point).unwrap()).collect();
            let rhs = outer.eval(&imgs_at).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
