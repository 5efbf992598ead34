//! Weighted sum-of-squares certificates: Gram-matrix linkage between
//! polynomials and symmetric matrices, exact certificate verification, and
//! the perturbation/absorption procedure that turns an approximate
//! floating-point Gram factorization into an exact rational identity
//! `g = c_1 s_1^2 + ... + c_r s_r^2`.
//!
//! The pipeline per round: perturb `g` to `g_eps = g - eps * sum x^(2a)` over
//! the square basis, solve the Gram feasibility SDP at accuracy `delta`,
//! extract squares from an LDL^T factorization rounded dyadically at
//! `delta_c`, compute the exact rational remainder, and absorb it into the
//! perturbation budget. Every returned certificate is re-verified exactly
//! before it leaves this module.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::exactnum::{PrecP, Rational};
use crate::poly::{Monomial, Polynomial};
use crate::sdp::{
    ldl_decompose, sdp_solve, LinearExpr, MatrixCoeff, SdpOutcome, SdpProblem, SymMatrixF,
};

/// Which span of monomials a basis enumerates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    /// All monomials of degree at most `d`.
    FullDegreeLe,
    /// All monomials of degree exactly `k`.
    HomogeneousDegree,
}

/// An ordered monomial basis without duplicates, in graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    nvars: usize,
    kind: BasisKind,
    monomials: Vec<Monomial>,
}

impl MonomialBasis {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Restriction to a subset of monomials, preserving order and kind.
    pub fn restrict(&self, keep: &BTreeSet<Monomial>) -> MonomialBasis {
        MonomialBasis {
            nvars: self.nvars,
            kind: self.kind,
            monomials: self
                .monomials
                .iter()
                .filter(|m| keep.contains(*m))
                .cloned()
                .collect(),
        }
    }
}

/// Enumerates the monomial basis of the given kind and degree.
pub fn basis_for(nvars: usize, degree: u32, kind: BasisKind) -> MonomialBasis {
    assert!(nvars >= 1, "basis needs at least one variable");
    let mut monomials = Vec::new();
    let mut current = vec![0u32; nvars];
    enumerate(&mut current, 0, degree, kind, &mut monomials);
    monomials.sort();
    MonomialBasis {
        nvars,
        kind,
        monomials,
    }
}

fn enumerate(
    current: &mut Vec<u32>,
    var: usize,
    remaining: u32,
    kind: BasisKind,
    out: &mut Vec<Monomial>,
) {
    if var == current.len() {
        let keep = match kind {
            BasisKind::FullDegreeLe => true,
            BasisKind::HomogeneousDegree => remaining == 0,
        };
        if keep {
            out.push(Monomial::new(current.clone()));
        }
        return;
    }
    for e in 0..=remaining {
        current[var] = e;
        enumerate(current, var + 1, remaining - e, kind, out);
    }
    current[var] = 0;
}

/// `C(n, k)` as a u64; the basis cardinalities here are tiny.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// One Gram equality: the entries of `G` at `pairs` (upper-triangle index
/// pairs into the basis, off-diagonal entries counted twice) sum to `rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramConstraint {
    pub monomial: Monomial,
    pub pairs: Vec<(usize, usize)>,
    pub rhs: Rational,
}

/// A monomial of `g` that no product of two basis monomials can produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InexpressibleMonomial {
    pub monomial: Monomial,
}

impl fmt::Display for InexpressibleMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "monomial {:?} is not a product of two basis monomials",
            self.monomial
        )
    }
}

impl std::error::Error for InexpressibleMonomial {}

/// Linear equalities tying a Gram matrix over `basis` to the coefficients of
/// `g`: one equality per product monomial, with rhs 0 for products absent
/// from `g`. Errors if some monomial of `g` is not a basis product.
pub fn gram_constraints(
    g: &Polynomial,
    basis: &MonomialBasis,
) -> Result<Vec<GramConstraint>, InexpressibleMonomial> {
    assert_eq!(g.nvars(), basis.nvars(), "variable count mismatch");
    let mut by_monomial: BTreeMap<Monomial, Vec<(usize, usize)>> = BTreeMap::new();
    let mons = basis.monomials();
    for i in 0..mons.len() {
        for j in i..mons.len() {
            by_monomial
                .entry(mons[i].mul(&mons[j]))
                .or_default()
                .push((i, j));
        }
    }
    for (m, _) in g.terms() {
        if !by_monomial.contains_key(m) {
            return Err(InexpressibleMonomial {
                monomial: m.clone(),
            });
        }
    }
    Ok(by_monomial
        .into_iter()
        .map(|(monomial, pairs)| {
            let rhs = g.coeff(&monomial);
            GramConstraint {
                monomial,
                pairs,
                rhs,
            }
        })
        .collect())
}

/// Weighted SOS certificate: `sum_i weights[i] * squares[i]^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedSosCertificate {
    nvars: usize,
    weights: Vec<Rational>,
    squares: Vec<Polynomial>,
}

/// Structural violations found while building a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertError {
    LengthMismatch { weights: usize, squares: usize },
    NegativeWeight { index: usize },
    MixedVariableCounts,
}

impl fmt::Display for CertError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertError::LengthMismatch { weights, squares } => {
                write!(f, "{weights} weights against {squares} squares")
            }
            CertError::NegativeWeight { index } => write!(f, "weight {index} is negative"),
            CertError::MixedVariableCounts => write!(f, "squares mix variable counts"),
        }
    }
}

impl std::error::Error for CertError {}

impl WeightedSosCertificate {
    pub fn new(
        nvars: usize,
        weights: Vec<Rational>,
        squares: Vec<Polynomial>,
    ) -> Result<WeightedSosCertificate, CertError> {
        if weights.len() != squares.len() {
            return Err(CertError::LengthMismatch {
                weights: weights.len(),
                squares: squares.len(),
            });
        }
        if let Some(index) = weights.iter().position(Rational::is_negative) {
            return Err(CertError::NegativeWeight { index });
        }
        if squares.iter().any(|s| s.nvars() != nvars) {
            return Err(CertError::MixedVariableCounts);
        }
        Ok(WeightedSosCertificate {
            nvars,
            weights,
            squares,
        })
    }

    pub fn empty(nvars: usize) -> WeightedSosCertificate {
        WeightedSosCertificate {
            nvars,
            weights: Vec::new(),
            squares: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn squares(&self) -> &[Polynomial] {
        &self.squares
    }

    /// The exact polynomial `sum_i c_i s_i^2`.
    pub fn assemble(&self) -> Polynomial {
        let mut acc = Polynomial::zero(self.nvars);
        for (c, s) in self.weights.iter().zip(&self.squares) {
            if c.is_zero() {
                continue;
            }
            acc = acc + s.square().scale(c);
        }
        acc
    }

    pub fn concat(mut self, other: WeightedSosCertificate) -> WeightedSosCertificate {
        assert_eq!(self.nvars, other.nvars);
        self.weights.extend(other.weights);
        self.squares.extend(other.squares);
        self
    }

    /// Drops terms with zero weight.
    pub fn pruned(self) -> WeightedSosCertificate {
        let (weights, squares) = self
            .weights
            .into_iter()
            .zip(self.squares)
            .filter(|(c, _)| !c.is_zero())
            .unzip();
        WeightedSosCertificate {
            nvars: self.nvars,
            weights,
            squares,
        }
    }

    /// Scales every weight by `c >= 0`, certifying `c * g` when `self`
    /// certifies `g`.
    pub fn scale_weights(&self, c: &Rational) -> WeightedSosCertificate {
        assert!(!c.is_negative());
        WeightedSosCertificate {
            nvars: self.nvars,
            weights: self.weights.iter().map(|w| w * c).collect(),
            squares: self.squares.clone(),
        }
    }
}

/// Outcome of exact certificate verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyOutcome {
    ExactMatch,
    /// Carries the exact residual `g - sum_i c_i s_i^2`.
    Mismatch(Polynomial),
}

impl VerifyOutcome {
    pub fn is_exact(&self) -> bool {
        matches!(self, VerifyOutcome::ExactMatch)
    }
}

/// Compares `g` against the assembled certificate coefficient-by-coefficient
/// in reduced rationals.
pub fn verify_certificate(g: &Polynomial, cert: &WeightedSosCertificate) -> VerifyOutcome {
    assert_eq!(g.nvars(), cert.nvars(), "variable count mismatch");
    let difference = g.checked_sub(&cert.assemble()).expect("same nvars");
    if difference.is_zero() {
        VerifyOutcome::ExactMatch
    } else {
        VerifyOutcome::Mismatch(difference)
    }
}

/// Rounds an approximate Gram factorization into exact rational squares:
/// weights are dyadic roundings of the `LDL^T` diagonal, square coefficients
/// dyadic roundings of the `L` columns against the basis.
pub fn extract_squares(
    g: &SymMatrixF,
    basis: &MonomialBasis,
    delta_c: PrecP,
) -> Result<WeightedSosCertificate, crate::sdp::NotPsd> {
    assert_eq!(g.dim(), basis.len(), "Gram dimension must match basis");
    let (l, d) = ldl_decompose(g)?;
    let nvars = basis.nvars();
    let r = basis.len();
    let mut weights = Vec::with_capacity(r);
    let mut squares = Vec::with_capacity(r);
    for i in 0..r {
        let di = Rational::from_f64_exact(d[i]).unwrap_or_else(Rational::zero);
        weights.push(di.round_dyadic(delta_c).max(Rational::zero()));
        let mut s = Polynomial::zero(nvars);
        s.add_term(basis.monomials()[i].clone(), Rational::one());
        for j in (i + 1)..r {
            let lj = Rational::from_f64_exact(l.get(j, i)).unwrap_or_else(Rational::zero);
            s.add_term(basis.monomials()[j].clone(), lj.round_dyadic(delta_c));
        }
        squares.push(s);
    }
    Ok(WeightedSosCertificate::new(nvars, weights, squares).expect("construction is well-formed"))
}

/// The absorption step ran out of budget (or routing room) at `monomial`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbsorptionFailure {
    pub monomial: Monomial,
    pub detail: String,
}

impl fmt::Display for AbsorptionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "absorption failed at {:?}: {}", self.monomial, self.detail)
    }
}

impl std::error::Error for AbsorptionFailure {}

/// Splits an exponent vector into two near-halves with `b' + b'' = b`,
/// alternating the odd entries so that `|b'| = ceil(|b|/2)`. For even total
/// degree the halves balance exactly, which keeps homogeneous absorption
/// inside the homogeneous basis.
fn balanced_split(beta: &Monomial) -> (Monomial, Monomial) {
    let mut hi: Vec<u32> = beta.exponents().iter().map(|&e| e / 2).collect();
    let mut lo = hi.clone();
    let mut to_hi = true;
    for (i, &e) in beta.exponents().iter().enumerate() {
        if e % 2 == 1 {
            if to_hi {
                hi[i] += 1;
            } else {
                lo[i] += 1;
            }
            to_hi = !to_hi;
        }
    }
    (Monomial::new(hi), Monomial::new(lo))
}

/// Absorbs the exact remainder `u` into the perturbation `eps * sum_{a in
/// basis} x^(2a)`, returning a certificate for `u + eps * sum x^(2a)`.
///
/// Each non-square term `u_b x^b` routes through the identity
/// `x^b = ((x^b' + s x^b'')^2 - x^(2b') - x^(2b''))/2` with `s = sign(u_b)`,
/// adding a square of weight `|u_b|/2` and debiting that much from the
/// budgets at `b'` and `b''`; square terms credit or debit their own budget
/// directly. The split prefers the balanced halves and falls back to the
/// first basis pair multiplying to `b`. Fails if any budget goes negative.
pub fn absorb(
    u: &Polynomial,
    eps: &Rational,
    basis: &MonomialBasis,
) -> Result<WeightedSosCertificate, AbsorptionFailure> {
    assert!(eps.is_positive(), "perturbation must be positive");
    assert_eq!(u.nvars(), basis.nvars(), "variable count mismatch");
    let nvars = basis.nvars();
    let index: BTreeMap<&Monomial, usize> = basis
        .monomials()
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut budgets: Vec<Rational> = vec![eps.clone(); basis.len()];
    let mut weights: Vec<Rational> = Vec::new();
    let mut squares: Vec<Polynomial> = Vec::new();

    for (beta, coeff) in u.terms() {
        if let Some(gamma) = beta.half() {
            if let Some(&gi) = index.get(&gamma) {
                budgets[gi] += coeff;
                continue;
            }
        }
        let (hi, lo) = balanced_split(beta);
        let (bp, bpp) = match (index.get(&hi), index.get(&lo)) {
            (Some(&a), Some(&b)) => (a, b),
            _ => {
                // fall back to any basis pair whose product is beta
                let mut found = None;
                'outer: for i in 0..basis.len() {
                    for j in i..basis.len() {
                        if basis.monomials()[i].mul(&basis.monomials()[j]) == *beta {
                            found = Some((i, j));
                            break 'outer;
                        }
                    }
                }
                match found {
                    Some(pair) => pair,
                    None => {
                        return Err(AbsorptionFailure {
                            monomial: beta.clone(),
                            detail: "no basis pair multiplies to this monomial".into(),
                        })
                    }
                }
            }
        };
        let w = coeff.abs() * Rational::new(1, 2);
        let mut s = Polynomial::zero(nvars);
        s.add_term(basis.monomials()[bp].clone(), Rational::one());
        s.add_term(
            basis.monomials()[bpp].clone(),
            Rational::from_int(coeff.signum() as i64),
        );
        weights.push(w.clone());
        squares.push(s);
        budgets[bp] -= &w;
        budgets[bpp] -= &w;
    }

    if let Some(i) = budgets.iter().position(Rational::is_negative) {
        return Err(AbsorptionFailure {
            monomial: basis.monomials()[i].double(),
            detail: format!("budget exhausted, short by {}", budgets[i].abs()),
        });
    }
    for (i, leftover) in budgets.into_iter().enumerate() {
        if leftover.is_positive() {
            let mut s = Polynomial::zero(nvars);
            s.add_term(basis.monomials()[i].clone(), Rational::one());
            weights.push(leftover);
            squares.push(s);
        }
    }
    Ok(WeightedSosCertificate::new(nvars, weights, squares).expect("weights checked nonnegative"))
}

/// Accuracy parameters for [`intsos`].
#[derive(Clone, Debug)]
pub struct IntsosParams {
    /// Perturbation coefficient; must be positive.
    pub eps: Rational,
    /// SDP accuracy exponent (solver tolerance `2^-delta`).
    pub delta: PrecP,
    /// Dyadic rounding accuracy for the factorization.
    pub delta_c: PrecP,
    pub max_rounds: usize,
}

impl IntsosParams {
    /// Defaults: `eps = 2^-4 * min(1, smallest |coefficient| of g)`,
    /// `delta = delta_c = 30`, 8 rounds.
    pub fn default_for(g: &Polynomial) -> IntsosParams {
        let min_coeff = g
            .terms()
            .map(|(_, c)| c.abs())
            .min()
            .unwrap_or_else(Rational::one)
            .min(Rational::one());
        IntsosParams {
            eps: min_coeff * Rational::pow2(-4),
            delta: PrecP::new(30),
            delta_c: PrecP::new(30),
            max_rounds: 8,
        }
    }

    pub fn with_eps(mut self, eps: Rational) -> IntsosParams {
        assert!(eps.is_positive());
        self.eps = eps;
        self
    }
}

#[derive(Clone, Debug)]
pub enum IntsosError {
    /// Odd-degree polynomials take negative values; no certificate exists.
    OddDegree(u32),
    /// A monomial of `g` cannot be written over any square basis.
    NotRepresentable(Monomial),
    /// All rounds failed; carries the last failure for diagnosis.
    RoundsExhausted { rounds: usize, last: String },
}

impl fmt::Display for IntsosError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntsosError::OddDegree(d) => write!(f, "degree {d} is odd"),
            IntsosError::NotRepresentable(m) => {
                write!(f, "monomial {m:?} is not expressible over the square basis")
            }
            IntsosError::RoundsExhausted { rounds, last } => {
                write!(f, "no certificate after {rounds} rounds (last: {last})")
            }
        }
    }
}

impl std::error::Error for IntsosError {}

/// Square basis for `g` after iterated support reduction: starting from the
/// full (or homogeneous) basis of half the degree, a monomial `a` survives
/// only while `x^(2a)` appears in `g` or is a cross product of two other
/// surviving monomials. Gram matrices over pruned monomials have forced zero
/// rows, so dropping them loses nothing, and it is what makes the strict
/// feasibility margin meaningful for sparse polynomials.
pub fn reduced_gram_basis(g: &Polynomial) -> MonomialBasis {
    let deg = g.total_degree().unwrap_or(0);
    debug_assert!(deg.is_multiple_of(2));
    let kind = if g.is_homogeneous() && deg > 0 {
        BasisKind::HomogeneousDegree
    } else {
        BasisKind::FullDegreeLe
    };
    let full = basis_for(g.nvars(), deg / 2, kind);
    let support: BTreeSet<Monomial> = g.terms().map(|(m, _)| m.clone()).collect();
    let mut kept: Vec<Monomial> = full.monomials().to_vec();
    loop {
        let cross: BTreeSet<Monomial> = {
            let mut out = BTreeSet::new();
            for i in 0..kept.len() {
                for j in (i + 1)..kept.len() {
                    out.insert(kept[i].mul(&kept[j]));
                }
            }
            out
        };
        let next: Vec<Monomial> = kept
            .iter()
            .filter(|m| {
                let sq = m.double();
                support.contains(&sq) || cross.contains(&sq)
            })
            .cloned()
            .collect();
        if next.len() == kept.len() {
            break;
        }
        kept = next;
    }
    MonomialBasis {
        nvars: g.nvars(),
        kind,
        monomials: kept,
    }
}

/// Builds the Gram feasibility SDP for `g` over `basis` (one PSD block, no
/// free variables), with right-hand sides scaled to unit magnitude. Returns
/// the problem and the applied scale.
fn gram_sdp(
    g: &Polynomial,
    basis: &MonomialBasis,
) -> Result<(SdpProblem, f64), InexpressibleMonomial> {
    let constraints = gram_constraints(g, basis)?;
    let scale = g
        .terms()
        .map(|(_, c)| c.abs().to_f64())
        .fold(0.0f64, f64::max)
        .clamp(1e-6, 1e12);
    let mut prob = SdpProblem::feasibility(vec![basis.len()], 0);
    for c in constraints {
        let expr = LinearExpr {
            matrix: c
                .pairs
                .iter()
                .map(|&(i, j)| MatrixCoeff {
                    block: 0,
                    row: i,
                    col: j,
                    value: 1.0,
                })
                .collect(),
            free: vec![],
        };
        prob.push(expr, c.rhs.to_f64() / scale);
    }
    Ok((prob, scale))
}

/// Computes an exact rational weighted SOS decomposition of `g`, or reports
/// why none was found. The returned certificate always re-verifies exactly;
/// that check runs inside this function before returning.
pub fn intsos(
    g: &Polynomial,
    params: &IntsosParams,
) -> Result<WeightedSosCertificate, IntsosError> {
    if g.is_zero() {
        return Ok(WeightedSosCertificate::empty(g.nvars()));
    }
    let deg = g.total_degree().expect("nonzero polynomial");
    if deg % 2 == 1 {
        return Err(IntsosError::OddDegree(deg));
    }
    let basis = reduced_gram_basis(g);
    if basis.is_empty() {
        return Err(IntsosError::NotRepresentable(
            g.terms().next().expect("nonzero").0.clone(),
        ));
    }

    let mut eps = params.eps.clone();
    let mut delta = params.delta;
    let mut delta_c = params.delta_c;
    // Solver shortfalls land in the exact remainder and are absorbed, so a
    // numerically hard round may retry with a looser SDP tolerance instead of
    // giving up; soundness never depends on it.
    let mut tol_relax = 1.0f64;
    let mut last = String::new();
    for _round in 0..params.max_rounds {
        // g_eps = g - eps * sum_{a in basis} x^(2a)
        let mut g_eps = g.clone();
        for m in basis.monomials() {
            g_eps.add_term(m.double(), -&eps);
        }
        let (prob, scale) = match gram_sdp(&g_eps, &basis) {
            Ok(v) => v,
            Err(e) => return Err(IntsosError::NotRepresentable(e.monomial)),
        };
        let tol = (2f64.powi(-(delta.get() as i32)).max(1e-11) * tol_relax).min(1e-7);
        match sdp_solve(&prob, tol) {
            SdpOutcome::Solution(sol) => {
                let r = sol.blocks[0].dim();
                let mut gram = SymMatrixF::zeros(r);
                for i in 0..r {
                    for j in i..r {
                        gram.set(i, j, sol.blocks[0].get(i, j) * scale);
                    }
                }
                let cert0 = match extract_squares(&gram, &basis, delta_c) {
                    Ok(c) => c,
                    Err(e) => {
                        last = format!("factorization: {e}");
                        delta = delta.plus(2);
                        delta_c = delta_c.plus(2);
                        continue;
                    }
                };
                let remainder = g_eps
                    .checked_sub(&cert0.assemble())
                    .expect("same variable count");
                match absorb(&remainder, &eps, &basis) {
                    Ok(cert1) => {
                        let cert = cert0.concat(cert1).pruned();
                        match verify_certificate(g, &cert) {
                            VerifyOutcome::ExactMatch => return Ok(cert),
                            VerifyOutcome::Mismatch(diff) => {
                                // unreachable by construction; keep the gate anyway
                                last = format!(
                                    "soundness gate rejected a candidate (residual {diff})"
                                );
                                delta = delta.plus(2);
                                delta_c = delta_c.plus(2);
                                continue;
                            }
                        }
                    }
                    Err(fail) => {
                        last = fail.to_string();
                        delta = delta.plus(2);
                        delta_c = delta_c.plus(2);
                        continue;
                    }
                }
            }
            SdpOutcome::Infeasible { slack } => {
                last = format!("Gram SDP infeasible at eps = {eps} (slack {slack:.2e})");
                eps = eps * Rational::new(1, 2);
                continue;
            }
            SdpOutcome::NumericalFailure(msg) => {
                last = format!("SDP failure: {msg}");
                tol_relax *= 8.0;
                continue;
            }
        }
    }
    Err(IntsosError::RoundsExhausted {
        rounds: params.max_rounds,
        last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::rng::SplitMix64;

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("x{i}")).collect()
    }

    fn p(src: &str, n: usize) -> Polynomial {
        parse_polynomial(src, &names(n)).unwrap()
    }

    fn rat(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn basis_enumeration_and_cardinalities() {
        let b = basis_for(2, 2, BasisKind::FullDegreeLe);
        let shown: Vec<&[u32]> = b.monomials().iter().map(|m| m.exponents()).collect();
        assert_eq!(
            shown,
            vec![&[0, 0][..], &[1, 0], &[0, 1], &[2, 0], &[1, 1], &[0, 2]]
        );
        assert_eq!(b.len() as u64, binomial(2 + 2, 2));

        let h = basis_for(2, 1, BasisKind::HomogeneousDegree);
        let shown: Vec<&[u32]> = h.monomials().iter().map(|m| m.exponents()).collect();
        assert_eq!(shown, vec![&[1, 0][..], &[0, 1]]);

        let u = basis_for(1, 3, BasisKind::FullDegreeLe);
        assert_eq!(u.len(), 4);

        // homogeneous cardinality C(n + k - 1, k)
        let h3 = basis_for(3, 4, BasisKind::HomogeneousDegree);
        assert_eq!(h3.len() as u64, binomial(3 + 4 - 1, 4));
    }

    #[test]
    fn gram_constraint_shapes() {
        let basis = basis_for(2, 1, BasisKind::HomogeneousDegree);
        let cons = gram_constraints(&p("x1^2 + x2^2", 2), &basis).unwrap();
        // x1^2 -> G00; x1*x2 -> 2 G01; x2^2 -> G11
        assert_eq!(cons.len(), 3);
        assert_eq!(cons[0].pairs, vec![(0, 0)]);
        assert_eq!(cons[0].rhs, rat("1"));
        assert_eq!(cons[1].pairs, vec![(0, 1)]);
        assert_eq!(cons[1].rhs, rat("0"));
        assert_eq!(cons[2].pairs, vec![(1, 1)]);
        assert_eq!(cons[2].rhs, rat("1"));

        let cons = gram_constraints(&p("x1^2 + 2*x1*x2 + x2^2", 2), &basis).unwrap();
        assert_eq!(cons[1].rhs, rat("2"));

        let err = gram_constraints(&p("x1^3", 2), &basis).unwrap_err();
        assert_eq!(err.monomial.exponents(), &[3, 0]);
    }

    #[test]
    fn verify_a_worked_quartic_identity() {
        let g = p("4*x1^4 + 4*x1^3*x2 - 7*x1^2*x2^2 - 2*x1*x2^3 + 10*x2^4", 2);
        let cert = WeightedSosCertificate::new(
            2,
            vec![Rational::one(), Rational::one()],
            vec![p("2*x1*x2 + x2^2", 2), p("2*x1^2 + x1*x2 - 3*x2^2", 2)],
        )
        .unwrap();
        assert!(verify_certificate(&g, &cert).is_exact());

        let simple =
            WeightedSosCertificate::new(1, vec![Rational::one()], vec![p("x1", 1)]).unwrap();
        assert!(verify_certificate(&p("x1^2", 1), &simple).is_exact());
        match verify_certificate(&p("x1^2 + 1", 1), &simple) {
            VerifyOutcome::Mismatch(diff) => assert_eq!(diff, p("1", 1)),
            VerifyOutcome::ExactMatch => panic!("expected mismatch"),
        }
    }

    #[test]
    fn extraction_examples() {
        let basis = basis_for(2, 1, BasisKind::HomogeneousDegree);
        let delta_c = PrecP::new(30);

        // Gram of (x1 + x2)^2: rank one
        let mut g = SymMatrixF::zeros(2);
        for (i, j) in [(0, 0), (0, 1), (1, 1)] {
            g.set(i, j, 1.0);
        }
        let cert = extract_squares(&g, &basis, delta_c).unwrap();
        assert_eq!(cert.weights(), &[rat("1"), rat("0")]);
        assert_eq!(cert.squares()[0], p("x1 + x2", 2));

        let id = SymMatrixF::identity(2);
        let cert = extract_squares(&id, &basis, delta_c).unwrap();
        assert_eq!(cert.weights(), &[rat("1"), rat("1")]);
        assert_eq!(cert.squares(), &[p("x1", 2), p("x2", 2)]);

        // [[2,1],[1,2]]: weights (2, 3/2), first square x1 + x2/2; the
        // assembled certificate reproduces the quadratic form exactly
        let mut g = SymMatrixF::zeros(2);
        g.set(0, 0, 2.0);
        g.set(0, 1, 1.0);
        g.set(1, 1, 2.0);
        let cert = extract_squares(&g, &basis, delta_c).unwrap();
        assert_eq!(cert.weights(), &[rat("2"), rat("3/2")]);
        assert_eq!(cert.squares()[0], p("x1 + 1/2*x2", 2));
        assert_eq!(cert.assemble(), p("2*x1^2 + 2*x1*x2 + 2*x2^2", 2));
    }

    #[test]
    fn absorption_examples() {
        let basis = basis_for(2, 1, BasisKind::HomogeneousDegree);

        // pure perturbation: diagonal squares with weight eps
        let cert = absorb(&Polynomial::zero(2), &Rational::one(), &basis).unwrap();
        assert_eq!(cert.weights(), &[rat("1"), rat("1")]);
        assert_eq!(cert.squares(), &[p("x1", 2), p("x2", 2)]);

        // u = (1/8) x1 x2 routes half its mass to a (x1 + x2)^2 square
        let u = p("1/8*x1*x2", 2);
        let cert = absorb(&u, &rat("1/2"), &basis).unwrap();
        assert_eq!(cert.weights()[0], rat("1/16"));
        assert_eq!(cert.squares()[0], p("x1 + x2", 2));
        assert_eq!(&cert.weights()[1..], &[rat("7/16"), rat("7/16")]);
        // and the identity u + eps(x1^2 + x2^2) holds exactly
        let target = u + p("1/2*x1^2 + 1/2*x2^2", 2);
        assert!(verify_certificate(&target, &cert).is_exact());

        // u = -2 x1 x2 needs budget 1 at each diagonal but only 1/2 exists
        let fail = absorb(&p("-2*x1*x2", 2), &rat("1/2"), &basis).unwrap_err();
        assert_eq!(fail.monomial.exponents(), &[2, 0]);
    }

    #[test]
    fn balanced_splits() {
        let (hi, lo) = balanced_split(&Monomial::new(vec![1, 1]));
        assert_eq!((hi.exponents(), lo.exponents()), (&[1, 0][..], &[0, 1][..]));
        let (hi, lo) = balanced_split(&Monomial::new(vec![3, 1]));
        assert_eq!((hi.exponents(), lo.exponents()), (&[2, 0][..], &[1, 1][..]));
        let (hi, lo) = balanced_split(&Monomial::new(vec![2, 1]));
        assert_eq!((hi.exponents(), lo.exponents()), (&[1, 1][..], &[1, 0][..]));
    }

    #[test]
    fn reduced_basis_drops_forced_zero_monomials() {
        // 223/100 (x1^4 + x2^2): only x2 and x1^2 can carry squares
        let g = p("223/100*x1^4 + 223/100*x2^2", 2);
        let basis = reduced_gram_basis(&g);
        let shown: Vec<&[u32]> = basis.monomials().iter().map(|m| m.exponents()).collect();
        assert_eq!(shown, vec![&[0, 1][..], &[2, 0]]);
    }

    #[test]
    fn intsos_simple_forms() {
        let g = p("x1^2 + x2^2", 2);
        let cert = intsos(&g, &IntsosParams::default_for(&g)).unwrap();
        assert!(verify_certificate(&g, &cert).is_exact());
        for w in cert.weights() {
            assert!(!w.is_negative());
        }

        let g = p("2*x1^4 + 2*x2^2", 2);
        let cert = intsos(&g, &IntsosParams::default_for(&g)).unwrap();
        assert!(verify_certificate(&g, &cert).is_exact());

        let odd = p("x1", 2);
        assert!(matches!(
            intsos(&odd, &IntsosParams::default_for(&odd)),
            Err(IntsosError::OddDegree(1))
        ));
    }

    #[test]
    fn intsos_on_a_dense_quartic() {
        let g = p("4*x1^4 + 4*x1^3*x2 - 7*x1^2*x2^2 - 2*x1*x2^3 + 10*x2^4", 2);
        let cert = intsos(&g, &IntsosParams::default_for(&g)).unwrap();
        assert!(verify_certificate(&g, &cert).is_exact());
        // homogeneous input: every square is homogeneous of degree 2
        for s in cert.squares() {
            assert!(s.is_homogeneous());
            assert_eq!(s.total_degree(), Some(2));
        }
    }

    #[test]
    fn intsos_rejects_non_sos_inputs_gracefully() {
        // shifted Motzkin form: nonnegative but not a sum of squares
        let g = p("x1^4*x2^2 + x1^2*x2^4 - x1^2*x2^2 + 1/27", 2);
        let params = IntsosParams {
            max_rounds: 3,
            ..IntsosParams::default_for(&g)
        };
        assert!(intsos(&g, &params).is_err());
    }

    fn random_certificate(
        rng: &mut SplitMix64,
        nvars: usize,
        half_degree: u32,
        kind: BasisKind,
    ) -> (WeightedSosCertificate, MonomialBasis) {
        let basis = basis_for(nvars, half_degree, kind);
        let r = basis.len();
        let terms = 1 + rng.next_below(3) as usize;
        let mut weights = Vec::new();
        let mut squares = Vec::new();
        for _ in 0..terms {
            weights.push(Rational::new(rng.next_i64_in(1, 9), rng.next_i64_in(1, 4)));
            let mut s = Polynomial::zero(nvars);
            for m in basis.monomials() {
                if rng.next_below(2) == 0 {
                    s.add_term(
                        m.clone(),
                        Rational::new(rng.next_i64_in(-4, 4), rng.next_i64_in(1, 3)),
                    );
                }
            }
            if s.is_zero() {
                s.add_term(
                    basis.monomials()[rng.next_below(r as u64) as usize].clone(),
                    Rational::one(),
                );
            }
            squares.push(s);
        }
        (
            WeightedSosCertificate::new(nvars, weights, squares).unwrap(),
            basis,
        )
    }

    #[test]
    fn intsos_round_trip_on_interior_shifted_certificates() {
        let mut rng = SplitMix64::new(0xab5047);
        for trial in 0..12usize {
            let nvars = 1 + (trial % 3);
            let half_degree = 1 + (trial as u32 % 2);
            let kind = if trial % 2 == 0 {
                BasisKind::FullDegreeLe
            } else {
                BasisKind::HomogeneousDegree
            };
            let (cert, basis) = random_certificate(&mut rng, nvars, half_degree, kind);
            let mut g = cert.assemble();
            for m in basis.monomials() {
                g.add_term(m.double(), Rational::new(1, 4));
            }
            let round_tripped = intsos(&g, &IntsosParams::default_for(&g))
                .unwrap_or_else(|e| panic!("trial {trial}: {e}"));
            assert!(
                verify_certificate(&g, &round_tripped).is_exact(),
                "trial {trial}"
            );
        }
    }
}
