//! Synthesis and exact verification of weighted SOS Lyapunov certificates.
//!
//! For a continuous system `x' = f(x)` the candidate `V` (homogeneous of
//! degree `2k`) must be positive definite with `-grad(V) . f` nonnegative;
//! for a discrete system `x+ = f(x)` the difference `V - V o f` takes the
//! decrease role. Rational right-hand sides are cleared exactly: the returned
//! decrease is always a polynomial, scaled by a multiplier that is positive
//! everywhere (a product of denominators, each `positive constant + SOS`).
//!
//! Synthesis escalates the half-degree `k`, solving a semidefinite
//! feasibility problem that couples the Gram matrix of `V` with the Gram
//! matrix of the decrease polynomial through `V`'s coefficients. The strict
//! feasibility margin is made computable by maximizing a uniform eigenvalue
//! slack under a `trace(G1) = 1` normalization. Monomials whose Gram
//! diagonal is forced to zero are pruned adaptively, and the linear
//! equalities that forces on `V`'s coefficients are eliminated exactly over
//! the rationals, so dyadic rounding of the remaining free coefficients
//! always lands on a structurally feasible `V`. The rounded `V` is
//! re-expanded exactly and both sides are certified by `intsos`; nothing
//! downstream depends on solver accuracy.

use std::collections::BTreeSet;
use std::fmt;

use crate::exactnum::{PrecP, Rational};
use crate::poly::{Monomial, PolyError, PolyVector, Polynomial};
use crate::sdp::{sdp_solve, LinearExpr, MatrixCoeff, SdpOutcome, SdpProblem, SdpSolution};
use crate::sos::{
    basis_for, intsos, reduced_gram_basis, verify_certificate, BasisKind, IntsosParams,
    MonomialBasis, VerifyOutcome, WeightedSosCertificate,
};

/// Accept the slack maximization as strictly feasible above this margin.
const STRICT_TOL: f64 = 1e-6;
/// Below this slack the problem is reported infeasible at the current degree.
const INFEASIBLE_SLACK: f64 = -1e-4;
/// Gram diagonal entries under this (relative) size are treated as forced
/// zeros during adaptive basis reduction.
const PRUNE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Continuous,
    Discrete,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Continuous => write!(f, "continuous"),
            Mode::Discrete => write!(f, "discrete"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemError {
    WrongArity { expected: usize, got: usize },
    NumeratorNotVanishingAtOrigin { var: usize },
    DenominatorZero { var: usize },
    DenominatorNotPositiveAtOrigin { var: usize },
}

impl fmt::Display for SystemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemError::WrongArity { expected, got } => {
                write!(f, "expected {expected} equations, got {got}")
            }
            SystemError::NumeratorNotVanishingAtOrigin { var } => {
                write!(f, "equation {var}: numerator does not vanish at the origin")
            }
            SystemError::DenominatorZero { var } => {
                write!(f, "equation {var}: denominator is the zero polynomial")
            }
            SystemError::DenominatorNotPositiveAtOrigin { var } => {
                write!(f, "equation {var}: denominator is not positive at the origin")
            }
        }
    }
}

impl std::error::Error for SystemError {}

/// A polynomial or rational dynamical system with equilibrium at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    nvars: usize,
    mode: Mode,
    numerators: PolyVector,
    denominators: PolyVector,
}

impl PolySystem {
    pub fn new(
        mode: Mode,
        numerators: PolyVector,
        denominators: PolyVector,
    ) -> Result<PolySystem, SystemError> {
        let nvars = numerators.nvars();
        if numerators.len() != nvars {
            return Err(SystemError::WrongArity {
                expected: nvars,
                got: numerators.len(),
            });
        }
        if denominators.len() != nvars {
            return Err(SystemError::WrongArity {
                expected: nvars,
                got: denominators.len(),
            });
        }
        let origin = vec![Rational::zero(); nvars];
        for (i, p) in numerators.entries().iter().enumerate() {
            let at0 = p.eval(&origin).expect("origin has the right arity");
            if !at0.is_zero() {
                return Err(SystemError::NumeratorNotVanishingAtOrigin { var: i });
            }
        }
        for (i, q) in denominators.entries().iter().enumerate() {
            if q.is_zero() {
                return Err(SystemError::DenominatorZero { var: i });
            }
            let at0 = q.eval(&origin).expect("origin has the right arity");
            if !at0.is_positive() {
                return Err(SystemError::DenominatorNotPositiveAtOrigin { var: i });
            }
        }
        Ok(PolySystem {
            nvars,
            mode,
            numerators,
            denominators,
        })
    }

    /// Convenience constructor for a purely polynomial system (denominators 1).
    pub fn polynomial(mode: Mode, rhs: Vec<Polynomial>) -> Result<PolySystem, SystemError> {
        assert!(!rhs.is_empty(), "system needs at least one equation");
        let nvars = rhs[0].nvars();
        let denominators = PolyVector::new(vec![Polynomial::one(nvars); rhs.len()])
            .expect("uniform variable count");
        let numerators = PolyVector::new(rhs).map_err(|_| SystemError::WrongArity {
            expected: nvars,
            got: 0,
        })?;
        PolySystem::new(mode, numerators, denominators)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn numerators(&self) -> &PolyVector {
        &self.numerators
    }

    pub fn denominators(&self) -> &PolyVector {
        &self.denominators
    }

    fn distinct_nontrivial_denominators(&self) -> Vec<Polynomial> {
        let one = Polynomial::one(self.nvars);
        let mut out: Vec<Polynomial> = Vec::new();
        for q in self.denominators.entries() {
            if *q != one && !out.contains(q) {
                out.push(q.clone());
            }
        }
        out
    }
}

/// The decrease polynomial of `v` along the system, together with the
/// positive clearing multiplier (1 when no clearing was needed).
///
/// Continuous mode: `multiplier = prod(distinct denominators)` and
/// `decrease = -sum_i dV/dx_i * p_i * (multiplier / q_i)`, computed as the
/// product over the other denominators so no division ever happens. Discrete
/// mode with `D = deg(v)`: `multiplier = prod_i q_i^D` and `decrease =
/// multiplier * v - sum_m v_m * prod_i p_i^(m_i) * q_i^(D - m_i)`, which
/// clears `v(f)` exactly. Everything is exact rational arithmetic.
pub fn decrease_polynomial(
    sys: &PolySystem,
    v: &Polynomial,
) -> Result<(Polynomial, Polynomial), PolyError> {
    if v.nvars() != sys.nvars {
        return Err(PolyError::VariableCountMismatch {
            left: sys.nvars,
            right: v.nvars(),
        });
    }
    let n = sys.nvars;
    match sys.mode {
        Mode::Continuous => {
            let distinct = sys.distinct_nontrivial_denominators();
            let mut multiplier = Polynomial::one(n);
            for q in &distinct {
                multiplier = multiplier * q.clone();
            }
            let grad = v.gradient();
            let mut acc = Polynomial::zero(n);
            for i in 0..n {
                let q_i = &sys.denominators[i];
                // multiplier / q_i as a product over the other factors
                let mut cleared = Polynomial::one(n);
                let mut skipped = false;
                for q in &distinct {
                    if !skipped && q == q_i {
                        skipped = true;
                        continue;
                    }
                    cleared = cleared * q.clone();
                }
                let term = grad[i]
                    .checked_mul(&sys.numerators[i])?
                    .checked_mul(&cleared)?;
                acc = acc.checked_add(&term)?;
            }
            Ok((acc.neg(), multiplier))
        }
        Mode::Discrete => {
            let deg = v.total_degree().unwrap_or(0);
            let mut multiplier = Polynomial::one(n);
            for q in sys.denominators.entries() {
                multiplier = multiplier * q.pow(deg);
            }
            // power tables for numerators and denominators
            let mut p_pow: Vec<Vec<Polynomial>> = Vec::with_capacity(n);
            let mut q_pow: Vec<Vec<Polynomial>> = Vec::with_capacity(n);
            for i in 0..n {
                let mut pp = vec![Polynomial::one(n)];
                let mut qq = vec![Polynomial::one(n)];
                for e in 1..=deg as usize {
                    pp.push(pp[e - 1].checked_mul(&sys.numerators[i])?);
                    qq.push(qq[e - 1].checked_mul(&sys.denominators[i])?);
                }
                p_pow.push(pp);
                q_pow.push(qq);
            }
            let mut composed = Polynomial::zero(n);
            for (m, c) in v.terms() {
                let mut term = Polynomial::constant(n, c.clone());
                for (i, &e) in m.exponents().iter().enumerate() {
                    term = term.checked_mul(&p_pow[i][e as usize])?;
                    term = term.checked_mul(&q_pow[i][(deg - e) as usize])?;
                }
                composed = composed.checked_add(&term)?;
            }
            let decrease = multiplier.checked_mul(v)?.checked_sub(&composed)?;
            Ok((decrease, multiplier))
        }
    }
}

/// Per-monomial decrease templates: `decrease(V) = sum_m V_m * template_m`
/// for `V` supported on the degree-2k monomials.
struct DecreaseTemplates {
    v_monomials: Vec<Monomial>,
    templates: Vec<Polynomial>,
    multiplier: Polynomial,
    ell: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetupError {
    /// The cleared decrease has odd degree; no even-degree SOS condition
    /// exists at this half-degree.
    OddDecreaseDegree { degree: u32 },
    /// The decrease vanishes identically for every candidate `V`.
    DegenerateDecrease,
}

impl fmt::Display for SetupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetupError::OddDecreaseDegree { degree } => {
                write!(f, "cleared decrease has odd degree {degree}")
            }
            SetupError::DegenerateDecrease => write!(f, "decrease vanishes identically"),
        }
    }
}

impl std::error::Error for SetupError {}

fn decrease_templates(sys: &PolySystem, k: u32) -> Result<DecreaseTemplates, SetupError> {
    let n = sys.nvars;
    let v_monomials: Vec<Monomial> = basis_for(n, 2 * k, BasisKind::HomogeneousDegree)
        .monomials()
        .to_vec();
    let mut templates = Vec::with_capacity(v_monomials.len());
    let mut multiplier = Polynomial::one(n);
    let mut degree = 0u32;
    for m in &v_monomials {
        let candidate = Polynomial::monomial(n, m.clone(), Rational::one());
        let (d, mult) = decrease_polynomial(sys, &candidate).expect("arity checked");
        if let Some(dd) = d.total_degree() {
            degree = degree.max(dd);
        }
        multiplier = mult;
        templates.push(d);
    }
    if degree == 0 {
        return Err(SetupError::DegenerateDecrease);
    }
    if degree % 2 == 1 {
        return Err(SetupError::OddDecreaseDegree { degree });
    }
    Ok(DecreaseTemplates {
        v_monomials,
        templates,
        multiplier,
        ell: degree / 2,
    })
}

/// The coupled feasibility program at half-degree `k`, plus the bookkeeping
/// needed to interpret a solution.
pub struct SdpKSetup {
    pub problem: SdpProblem,
    /// Basis `w_k` of the `G1` (Lyapunov) block.
    pub basis_v: MonomialBasis,
    /// Basis `v_ell` of the `G2` (decrease) block.
    pub basis_decrease: MonomialBasis,
    /// The degree-2k monomials carried by the free variables, in order.
    pub v_monomials: Vec<Monomial>,
    pub multiplier: Polynomial,
    pub ell: u32,
}

/// Builds the degree-`2k` feasibility program: block `G1` over the
/// homogeneous basis `w_k` for `V`, block `G2` over the full basis `v_ell`
/// for the cleared decrease, free scalars for `V`'s coefficients, equalities
/// tying both Gram expansions to those coefficients, and the scale
/// normalization `trace(G1) = 1` that keeps the uniform slack bounded.
pub fn setup_sdp_k(sys: &PolySystem, k: u32) -> Result<SdpKSetup, SetupError> {
    assert!(k >= 1);
    let t = decrease_templates(sys, k)?;
    let basis_v = basis_for(sys.nvars, k, BasisKind::HomogeneousDegree);
    let basis_decrease = basis_for(sys.nvars, t.ell, BasisKind::FullDegreeLe);
    let (problem, _) = assemble_problem(&t, &basis_v, &basis_decrease, &[]);
    Ok(SdpKSetup {
        problem,
        basis_v,
        basis_decrease,
        v_monomials: t.v_monomials,
        multiplier: t.multiplier,
        ell: t.ell,
    })
}

/// Exact reduced row echelon form; returns the nonzero rows and their pivot
/// columns.
fn rref(mut rows: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let ncols = rows.first().map(Vec::len).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let inv = Rational::one()
            .checked_div(&rows[rank][col].clone())
            .expect("pivot nonzero");
        for v in rows[rank].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..ncols {
                    let delta = &rows[rank][c] * &factor;
                    rows[r][c] -= &delta;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    (rows, pivots)
}

/// Exact parameterization `v = expand * w` of the solution space of a
/// homogeneous linear system over `V`'s coefficients.
struct VSpace {
    /// For each `v` coordinate, its expansion over the free parameters.
    expand: Vec<Vec<Rational>>,
    nparams: usize,
}

impl VSpace {
    fn from_rows(nv: usize, rows: Vec<Vec<Rational>>) -> VSpace {
        let (rr, pivots) = rref(rows);
        let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
        let param_cols: Vec<usize> = (0..nv).filter(|c| !pivot_set.contains(c)).collect();
        let col_to_param: Vec<Option<usize>> = {
            let mut map = vec![None; nv];
            for (j, &c) in param_cols.iter().enumerate() {
                map[c] = Some(j);
            }
            map
        };
        let mut expand = vec![vec![]; nv];
        for c in 0..nv {
            let mut row = vec![Rational::zero(); param_cols.len()];
            if let Some(j) = col_to_param[c] {
                row[j] = Rational::one();
            } else {
                let i = pivots.iter().position(|&p| p == c).expect("pivot column");
                for (j, &pc) in param_cols.iter().enumerate() {
                    row[j] = -&rr[i][pc];
                }
            }
            expand[c] = row;
        }
        VSpace {
            expand,
            nparams: param_cols.len(),
        }
    }

    /// Maps a linear functional over `v` coordinates into one over the
    /// parameters.
    fn to_params(&self, coeffs: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.nparams];
        for (m, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, e) in self.expand[m].iter().enumerate() {
                if !e.is_zero() {
                    out[j] += &(c * e);
                }
            }
        }
        out
    }

    /// Expands exact parameter values into the full coefficient vector.
    fn to_coeffs(&self, params: &[Rational]) -> Vec<Rational> {
        self.expand
            .iter()
            .map(|row| {
                let mut acc = Rational::zero();
                for (j, e) in row.iter().enumerate() {
                    if !e.is_zero() {
                        acc += &(e * &params[j]);
                    }
                }
                acc
            })
            .collect()
    }
}

/// Assembles the coupled SDP over the given bases. Coefficients of `V` that
/// the basis structure forces into linear relations (inexpressible product
/// monomials, explicit pins) are eliminated exactly first, so the problem's
/// free variables are an unconstrained parameterization.
fn assemble_problem(
    t: &DecreaseTemplates,
    basis_v: &MonomialBasis,
    basis_dec: &MonomialBasis,
    forced_pins: &[usize],
) -> (SdpProblem, VSpace) {
    let nv = t.v_monomials.len();
    let index_of = |m: &Monomial| t.v_monomials.iter().position(|x| x == m);

    let mut linear_rows: Vec<Vec<Rational>> = Vec::new();
    for &pin in forced_pins {
        let mut row = vec![Rational::zero(); nv];
        row[pin] = Rational::one();
        linear_rows.push(row);
    }

    let pair_map = |basis: &MonomialBasis| {
        let mut map: std::collections::BTreeMap<Monomial, Vec<(usize, usize)>> =
            std::collections::BTreeMap::new();
        let mons = basis.monomials();
        for i in 0..mons.len() {
            for j in i..mons.len() {
                map.entry(mons[i].mul(&mons[j])).or_default().push((i, j));
            }
        }
        map
    };
    let pairs_v = pair_map(basis_v);
    let pairs_dec = pair_map(basis_dec);

    // degree-2k monomials with no product over the (possibly pruned) V basis
    // pin the corresponding coefficient to zero
    for (mi, m) in t.v_monomials.iter().enumerate() {
        if !pairs_v.contains_key(m) && !forced_pins.contains(&mi) {
            let mut row = vec![Rational::zero(); nv];
            row[mi] = Rational::one();
            linear_rows.push(row);
        }
    }

    // decrease-support monomials with no product over the decrease basis
    // force a linear relation among V's coefficients
    let mut dec_support: BTreeSet<Monomial> = BTreeSet::new();
    for tmpl in &t.templates {
        for (m, _) in tmpl.terms() {
            dec_support.insert(m.clone());
        }
    }
    for m in &dec_support {
        if !pairs_dec.contains_key(m) {
            let mut row = vec![Rational::zero(); nv];
            let mut nonzero = false;
            for (mi, tmpl) in t.templates.iter().enumerate() {
                let c = tmpl.coeff(m);
                if !c.is_zero() {
                    row[mi] = c;
                    nonzero = true;
                }
            }
            if nonzero {
                linear_rows.push(row);
            }
        }
    }

    let vspace = VSpace::from_rows(nv, linear_rows);

    let free_terms = |coeffs: &[Rational]| -> Vec<(usize, f64)> {
        vspace
            .to_params(coeffs)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j, c.to_f64()))
            .collect()
    };

    let mut prob = SdpProblem::feasibility(vec![basis_v.len(), basis_dec.len()], vspace.nparams);

    // trace(G1) = 1 pins the scale of the homogeneous feasibility cone
    prob.push(
        LinearExpr {
            matrix: (0..basis_v.len())
                .map(|i| MatrixCoeff {
                    block: 0,
                    row: i,
                    col: i,
                    value: 1.0,
                })
                .collect(),
            free: vec![],
        },
        1.0,
    );

    // G1 ties: sum of entry pairs equals the V coefficient
    for (m, pairs) in &pairs_v {
        let Some(mi) = index_of(m) else { continue };
        let mut coeffs = vec![Rational::zero(); nv];
        coeffs[mi] = -Rational::one();
        prob.push(
            LinearExpr {
                matrix: pairs
                    .iter()
                    .map(|&(i, j)| MatrixCoeff {
                        block: 0,
                        row: i,
                        col: j,
                        value: 1.0,
                    })
                    .collect(),
                free: free_terms(&coeffs),
            },
            0.0,
        );
    }

    // G2 ties: sum of entry pairs equals the decrease coefficient, which is
    // linear in V's coefficients through the templates
    for (m, pairs) in &pairs_dec {
        let mut coeffs = vec![Rational::zero(); nv];
        for (mi, tmpl) in t.templates.iter().enumerate() {
            let c = tmpl.coeff(m);
            if !c.is_zero() {
                coeffs[mi] = -c;
            }
        }
        prob.push(
            LinearExpr {
                matrix: pairs
                    .iter()
                    .map(|&(i, j)| MatrixCoeff {
                        block: 1,
                        row: i,
                        col: j,
                        value: 1.0,
                    })
                    .collect(),
                free: free_terms(&coeffs),
            },
            0.0,
        );
    }

    (prob, vspace)
}

/// Synthesis options; `None` fields pick the documented defaults.
#[derive(Clone, Debug)]
pub struct SynthParams {
    pub k_max: u32,
    pub sdp_tol: f64,
    pub delta: PrecP,
    pub delta_c: PrecP,
    pub max_rounds: usize,
    /// Overrides the margin-derived perturbation for the intsos calls.
    pub eps: Option<Rational>,
    /// Overrides the automatic strictness shifts.
    pub strict_shift: Option<Rational>,
}

impl Default for SynthParams {
    fn default() -> SynthParams {
        SynthParams {
            k_max: 3,
            sdp_tol: 1e-9,
            delta: PrecP::new(30),
            delta_c: PrecP::new(30),
            max_rounds: 8,
            eps: None,
            strict_shift: None,
        }
    }
}

/// Whether the decrease is certified merely nonnegative or positive definite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strictness {
    Nonnegative,
    PositiveDefinite,
}

/// A fully assembled stability certificate. All identities are exact; the
/// shifts `mu_v`/`mu_d` state which positive-definiteness margins the SOS
/// certificates cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LyapunovCertificate {
    pub v: Polynomial,
    pub half_degree: u32,
    pub multiplier: Polynomial,
    pub decrease: Polynomial,
    pub cert_v: WeightedSosCertificate,
    pub cert_decrease: WeightedSosCertificate,
    /// `cert_v` certifies `V - mu_v * sum_{|a|=k} x^(2a)`.
    pub mu_v: Rational,
    /// `cert_decrease` certifies `decrease - mu_d * sum_{a in S} x^(2a)` with
    /// `S` the reduced square basis of the decrease; zero means the plain
    /// decrease was certified.
    pub mu_d: Rational,
    pub strictness: Strictness,
}

/// Exact verification verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    AsymptoticallyStable,
    Stable,
    Invalid {
        reason: String,
        residual: Option<Polynomial>,
    },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        !matches!(self, Verdict::Invalid { .. })
    }

    fn invalid(reason: impl Into<String>) -> Verdict {
        Verdict::Invalid {
            reason: reason.into(),
            residual: None,
        }
    }

    fn invalid_with(reason: impl Into<String>, residual: Polynomial) -> Verdict {
        Verdict::Invalid {
            reason: reason.into(),
            residual: Some(residual),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::AsymptoticallyStable => write!(f, "AsymptoticallyStable"),
            Verdict::Stable => write!(f, "Stable"),
            Verdict::Invalid { reason, residual } => {
                write!(f, "Invalid: {reason}")?;
                if let Some(r) = residual {
                    write!(f, " (residual {r})")?;
                }
                Ok(())
            }
        }
    }
}

/// `p - mu * sum_{a in shift} x^(2a)`.
fn shifted(p: &Polynomial, mu: &Rational, shift: &[Monomial]) -> Polynomial {
    let mut out = p.clone();
    for m in shift {
        out.add_term(m.double(), -mu);
    }
    out
}

/// The shift exponents used to state positive definiteness of the decrease:
/// the reduced square basis of the decrease polynomial. Deterministic, so
/// synthesis and checking derive the same set.
pub fn decrease_shift_set(decrease: &Polynomial) -> Vec<Monomial> {
    reduced_gram_basis(decrease).monomials().to_vec()
}

/// True when the shift set contains a pure power of every variable, which
/// makes `sum_{a in shift} x^(2a)` positive definite.
fn shift_set_is_positive_definite(nvars: usize, shift: &[Monomial]) -> bool {
    (0..nvars).all(|i| {
        shift.iter().any(|m| {
            m.exponents()
                .iter()
                .enumerate()
                .all(|(j, &e)| if j == i { e > 0 } else { e == 0 })
        })
    })
}

/// Multiplier positivity: `m(0) > 0` and `m - m(0)` is SOS. All-even
/// nonnegative expansions shortcut to a diagonal certificate; anything else
/// goes through `intsos`.
fn multiplier_is_positive(multiplier: &Polynomial) -> Result<(), String> {
    let n = multiplier.nvars();
    let one = Polynomial::one(n);
    if *multiplier == one {
        return Ok(());
    }
    let origin = vec![Rational::zero(); n];
    let m0 = multiplier.eval(&origin).expect("arity");
    if !m0.is_positive() {
        return Err("multiplier is not positive at the origin".into());
    }
    let rest = multiplier
        .checked_sub(&Polynomial::constant(n, m0))
        .expect("arity");
    if rest.is_zero() {
        return Ok(());
    }
    if rest.terms().all(|(m, c)| m.is_even() && !c.is_negative()) {
        return Ok(()); // diagonal SOS by inspection
    }
    let params = IntsosParams::default_for(&rest);
    match intsos(&rest, &params) {
        Ok(cert) => match verify_certificate(&rest, &cert) {
            VerifyOutcome::ExactMatch => Ok(()),
            VerifyOutcome::Mismatch(_) => Err("multiplier SOS certificate failed".into()),
        },
        Err(e) => Err(format!("multiplier positivity not certified: {e}")),
    }
}

/// Exact verification of a certificate against a system.
///
/// Recomputes the decrease and multiplier from `sys` and `cert.v` and demands
/// structural equality, verifies both shifted SOS identities exactly, checks
/// the multiplier's positivity, and maps the shifts to a verdict: `mu_v > 0`
/// with a positive-definite decrease shift gives asymptotic stability,
/// `mu_v > 0` with a merely nonnegative decrease gives stability.
/// `required_shift` is the smallest acceptable `mu_v`.
pub fn check_lyapunov(
    sys: &PolySystem,
    cert: &LyapunovCertificate,
    required_shift: &Rational,
) -> Verdict {
    if cert.v.nvars() != sys.nvars {
        return Verdict::invalid("variable count mismatch between system and certificate");
    }
    if cert.v.is_zero() {
        return Verdict::invalid("V is the zero polynomial");
    }
    let info = cert.v.degree_info();
    if !info.is_homogeneous || info.total_degree != Some(2 * cert.half_degree) {
        return Verdict::invalid(format!(
            "V is not homogeneous of degree {}",
            2 * cert.half_degree
        ));
    }

    let (decrease, multiplier) = match decrease_polynomial(sys, &cert.v) {
        Ok(pair) => pair,
        Err(e) => return Verdict::invalid(format!("decrease recomputation failed: {e}")),
    };
    let diff = decrease.checked_sub(&cert.decrease).expect("same arity");
    if !diff.is_zero() {
        return Verdict::invalid_with("stored decrease differs from the recomputed one", diff);
    }
    if multiplier != cert.multiplier {
        return Verdict::invalid("stored multiplier differs from the recomputed one");
    }
    if let Err(reason) = multiplier_is_positive(&multiplier) {
        return Verdict::invalid(reason);
    }

    if !cert.mu_v.is_positive() {
        return Verdict::invalid("V has no positive-definiteness shift (mu_v = 0)");
    }
    if cert.mu_v < *required_shift {
        return Verdict::invalid(format!(
            "mu_v = {} is below the required shift {}",
            cert.mu_v, required_shift
        ));
    }
    let v_shift: Vec<Monomial> =
        basis_for(sys.nvars, cert.half_degree, BasisKind::HomogeneousDegree)
            .monomials()
            .to_vec();
    let v_target = shifted(&cert.v, &cert.mu_v, &v_shift);
    if let VerifyOutcome::Mismatch(r) = verify_certificate(&v_target, &cert.cert_v) {
        return Verdict::invalid_with("cert_V does not reassemble the shifted V", r);
    }

    if cert.mu_d.is_negative() {
        return Verdict::invalid("negative decrease shift");
    }
    if cert.mu_d.is_positive() {
        let shift = decrease_shift_set(&decrease);
        if !shift_set_is_positive_definite(sys.nvars, &shift) {
            return Verdict::invalid(
                "decrease shift set is not positive definite; mu_d > 0 proves nothing",
            );
        }
        let target = shifted(&decrease, &cert.mu_d, &shift);
        if let VerifyOutcome::Mismatch(r) = verify_certificate(&target, &cert.cert_decrease) {
            return Verdict::invalid_with("cert_decrease does not reassemble", r);
        }
        if cert.strictness != Strictness::PositiveDefinite {
            return Verdict::invalid("strictness flag disagrees with mu_d > 0");
        }
        Verdict::AsymptoticallyStable
    } else {
        if let VerifyOutcome::Mismatch(r) = verify_certificate(&decrease, &cert.cert_decrease) {
            return Verdict::invalid_with("cert_decrease does not reassemble", r);
        }
        if cert.strictness != Strictness::Nonnegative {
            return Verdict::invalid("strictness flag disagrees with mu_d = 0");
        }
        Verdict::Stable
    }
}

/// Synthesis failed at every half-degree up to `k_max`; the per-degree
/// failure stages are kept for diagnosis.
#[derive(Clone, Debug)]
pub struct NoCertificateFound {
    pub attempts: Vec<(u32, String)>,
}

impl fmt::Display for NoCertificateFound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no certificate found")?;
        for (k, why) in &self.attempts {
            write!(f, "; 2k={}: {}", 2 * k, why)?;
        }
        Ok(())
    }
}

impl std::error::Error for NoCertificateFound {}

/// Runs the full pipeline: escalate `k`, solve the coupled SDP with adaptive
/// basis reduction, round `V` exactly onto the feasible subspace, recompute
/// the decrease, and certify both sides with `intsos`. The first exactly
/// verified certificate wins.
pub fn exact_lyapunov(
    sys: &PolySystem,
    params: &SynthParams,
) -> Result<LyapunovCertificate, NoCertificateFound> {
    let mut attempts = Vec::new();
    for k in 1..=params.k_max {
        match synth_at_k(sys, k, params) {
            Ok(cert) => return Ok(cert),
            Err(stage) => attempts.push((k, stage)),
        }
    }
    Err(NoCertificateFound { attempts })
}

fn dyadic_from_f64(x: f64, bits: u32) -> Rational {
    Rational::from_f64_exact(x)
        .unwrap_or_else(Rational::zero)
        .round_dyadic(PrecP::new(bits))
}

fn synth_at_k(
    sys: &PolySystem,
    k: u32,
    params: &SynthParams,
) -> Result<LyapunovCertificate, String> {
    let t = decrease_templates(sys, k).map_err(|e| e.to_string())?;
    let n = sys.nvars;

    // generic decrease support drives the static basis reduction
    let mut union = Polynomial::zero(n);
    for tmpl in &t.templates {
        for (m, _) in tmpl.terms() {
            union.add_term(m.clone(), Rational::one());
        }
    }
    let full_dec = basis_for(n, t.ell, BasisKind::FullDegreeLe);
    let mut basis_dec = statically_reduced(&full_dec, &union);
    let mut basis_v = basis_for(n, k, BasisKind::HomogeneousDegree);
    let mut pins: Vec<usize> = Vec::new();

    let mut solution: Option<(SdpSolution, VSpace)> = None;
    for _adaptive_round in 0..12 {
        if basis_v.is_empty() || basis_dec.is_empty() {
            return Err("basis reduction emptied a Gram block".into());
        }
        let (prob, vspace) = assemble_problem(&t, &basis_v, &basis_dec, &pins);
        match sdp_solve(&prob, params.sdp_tol) {
            SdpOutcome::Solution(sol) => {
                let slack = sol.optimum;
                if slack >= STRICT_TOL {
                    solution = Some((sol, vspace));
                    break;
                }
                if slack < INFEASIBLE_SLACK {
                    return Err(format!(
                        "SDP infeasible at 2k={} (slack {slack:.2e})",
                        2 * k
                    ));
                }
                // boundary case: prune forced-zero diagonals and retry
                let mut pruned_any = false;
                let keep_from =
                    |block: &crate::sdp::SymMatrixF, basis: &MonomialBasis| -> BTreeSet<Monomial> {
                        let scale = block.max_abs().max(1.0);
                        basis
                            .monomials()
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| block.get(*i, *i) > PRUNE_TOL * scale)
                            .map(|(_, m)| m.clone())
                            .collect()
                    };
                let keep_v = keep_from(&sol.blocks[0], &basis_v);
                if keep_v.len() < basis_v.len() {
                    basis_v = basis_v.restrict(&keep_v);
                    pruned_any = true;
                }
                let keep_d = keep_from(&sol.blocks[1], &basis_dec);
                if keep_d.len() < basis_dec.len() {
                    basis_dec = basis_dec.restrict(&keep_d);
                    pruned_any = true;
                }
                if !pruned_any {
                    // pin V coefficients the solver pushed to zero
                    let approx: Vec<Rational> = sol
                        .free_values
                        .iter()
                        .map(|&x| dyadic_from_f64(x, 40))
                        .collect();
                    let coeffs = vspace.to_coeffs(&approx);
                    for (mi, c) in coeffs.iter().enumerate() {
                        if !pins.contains(&mi) && !c.is_zero() && c.abs() < Rational::pow2(-20) {
                            pins.push(mi);
                            pruned_any = true;
                        }
                    }
                }
                if !pruned_any {
                    return Err(format!(
                        "no strictly feasible point at 2k={} (slack {slack:.2e})",
                        2 * k
                    ));
                }
            }
            SdpOutcome::Infeasible { slack } => {
                return Err(format!(
                    "SDP infeasible at 2k={} (slack {slack:.2e})",
                    2 * k
                ));
            }
            SdpOutcome::NumericalFailure(msg) => {
                return Err(format!("SDP failure at 2k={}: {msg}", 2 * k));
            }
        }
    }
    let Some((sol, vspace)) = solution else {
        return Err(format!(
            "adaptive reduction did not converge at 2k={}",
            2 * k
        ));
    };
    let slack = sol.optimum;

    // round the free parameters dyadically; the eliminated coordinates are
    // recomputed exactly, so the rounded V stays on the feasible subspace
    let margin_bits = (-slack.log2()).ceil().max(0.0) as u32;
    let round_bits = (margin_bits + 6).clamp(10, 26);
    let params_exact: Vec<Rational> = sol
        .free_values
        .iter()
        .map(|&x| dyadic_from_f64(x, round_bits))
        .collect();
    let coeffs = vspace.to_coeffs(&params_exact);
    let mut v = Polynomial::zero(n);
    for (mi, c) in coeffs.iter().enumerate() {
        v.add_term(t.v_monomials[mi].clone(), c.clone());
    }
    if v.is_zero() {
        return Err("rounded V vanished".into());
    }
    let (decrease, multiplier) = decrease_polynomial(sys, &v).expect("arity checked");
    multiplier_is_positive(&multiplier)
        .map_err(|e| format!("multiplier positivity at 2k={}: {e}", 2 * k))?;

    // margin-derived perturbation for the exact certification calls
    let eps_from_margin = {
        let guess = dyadic_from_f64(slack / 8.0, 24);
        if guess.is_positive() {
            guess
        } else {
            Rational::pow2(-24)
        }
    };
    let intsos_params = |target: &Polynomial| -> IntsosParams {
        let mut p = IntsosParams::default_for(target);
        p.delta = params.delta;
        p.delta_c = params.delta_c;
        p.max_rounds = params.max_rounds;
        p.eps = params
            .eps
            .clone()
            .unwrap_or_else(|| eps_from_margin.clone());
        p
    };

    // V's strictness shift: 1/100 of the smallest Gram diagonal, floored at
    // 2^-20, backed off whenever the shifted certification fails
    let v_shift: Vec<Monomial> = basis_for(n, k, BasisKind::HomogeneousDegree)
        .monomials()
        .to_vec();
    let min_diag_v = (0..sol.blocks[0].dim())
        .map(|i| sol.blocks[0].get(i, i))
        .fold(f64::INFINITY, f64::min);
    let mut mu_v_candidates: Vec<Rational> = Vec::new();
    if let Some(shift) = &params.strict_shift {
        if shift.is_positive() {
            mu_v_candidates.push(shift.clone());
        }
    }
    let auto = dyadic_from_f64((min_diag_v / 100.0).min(slack / 4.0), 20).max(Rational::pow2(-20));
    for scale in [1i64, 4, 16, 64] {
        mu_v_candidates.push(&auto / &Rational::from_int(scale));
    }
    let mut cert_v_found: Option<(Rational, WeightedSosCertificate)> = None;
    let mut last_err = String::new();
    for mu in mu_v_candidates {
        if !mu.is_positive() {
            continue;
        }
        let target = shifted(&v, &mu, &v_shift);
        match intsos(&target, &intsos_params(&target)) {
            Ok(cert) => {
                cert_v_found = Some((mu, cert));
                break;
            }
            Err(e) => last_err = e.to_string(),
        }
    }
    let Some((mu_v, cert_v)) = cert_v_found else {
        return Err(format!("V certification failed at 2k={}: {last_err}", 2 * k));
    };

    // decrease: strict first when the shift set can witness positive
    // definiteness, nonnegative otherwise
    let dec_shift = decrease_shift_set(&decrease);
    let min_diag_d = (0..sol.blocks[1].dim())
        .map(|i| sol.blocks[1].get(i, i))
        .fold(f64::INFINITY, f64::min);
    let mut cert_dec_found: Option<(Rational, WeightedSosCertificate, Strictness)> = None;
    if shift_set_is_positive_definite(n, &dec_shift) {
        let auto =
            dyadic_from_f64((min_diag_d / 100.0).min(slack / 4.0), 20).max(Rational::pow2(-20));
        let mut candidates: Vec<Rational> = Vec::new();
        if let Some(shift) = &params.strict_shift {
            if shift.is_positive() {
                candidates.push(shift.clone());
            }
        }
        for scale in [1i64, 4, 16, 64] {
            candidates.push(&auto / &Rational::from_int(scale));
        }
        for mu in candidates {
            if !mu.is_positive() {
                continue;
            }
            let target = shifted(&decrease, &mu, &dec_shift);
            if let Ok(cert) = intsos(&target, &intsos_params(&target)) {
                cert_dec_found = Some((mu, cert, Strictness::PositiveDefinite));
                break;
            }
        }
    }
    if cert_dec_found.is_none() {
        match intsos(&decrease, &intsos_params(&decrease)) {
            Ok(cert) => {
                cert_dec_found = Some((Rational::zero(), cert, Strictness::Nonnegative));
            }
            Err(e) => {
                return Err(format!(
                    "decrease certification failed at 2k={}: {e}",
                    2 * k
                ));
            }
        }
    }
    let (mu_d, cert_decrease, strictness) = cert_dec_found.expect("set above");

    let cert = LyapunovCertificate {
        v,
        half_degree: k,
        multiplier,
        decrease,
        cert_v,
        cert_decrease,
        mu_v,
        mu_d,
        strictness,
    };
    // the verdict gate re-verifies every identity exactly
    match check_lyapunov(sys, &cert, &Rational::zero()) {
        Verdict::Invalid { reason, .. } => Err(format!(
            "internal verification rejected 2k={}: {reason}",
            2 * k
        )),
        _ => Ok(cert),
    }
}

/// Iterated support reduction against a fixed generic support.
fn statically_reduced(basis: &MonomialBasis, support_poly: &Polynomial) -> MonomialBasis {
    let support: BTreeSet<Monomial> = support_poly.terms().map(|(m, _)| m.clone()).collect();
    let mut kept: Vec<Monomial> = basis.monomials().to_vec();
    loop {
        let mut cross: BTreeSet<Monomial> = BTreeSet::new();
        for i in 0..kept.len() {
            for j in (i + 1)..kept.len() {
                cross.insert(kept[i].mul(&kept[j]));
            }
        }
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
    let keep: BTreeSet<Monomial> = kept.into_iter().collect();
    basis.restrict(&keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::rng::SplitMix64;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn p(src: &str, names: &[&str]) -> Polynomial {
        parse_polynomial(src, &vars(names)).unwrap()
    }

    fn rat(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn example_one() -> PolySystem {
        let v = ["x1", "x2"];
        PolySystem::polynomial(
            Mode::Continuous,
            vec![p("-x1^3 + x2", &v), p("-x1 - x2", &v)],
        )
        .unwrap()
    }

    fn example_two() -> PolySystem {
        let v = ["x1", "x2", "x3"];
        let numerators = PolyVector::new(vec![
            p("-x1^3 - x1*x3^2", &v),
            p("-x2 - x1^2*x2", &v),
            p("-x3^3 - x3 - 3*x1*x3 + 3*x1^2*x3^3 + 3*x1^2*x3", &v),
        ])
        .unwrap();
        let denominators = PolyVector::new(vec![
            Polynomial::one(3),
            Polynomial::one(3),
            p("x3^2 + 1", &v),
        ])
        .unwrap();
        PolySystem::new(Mode::Continuous, numerators, denominators).unwrap()
    }

    fn example_three() -> PolySystem {
        let v = ["x", "y"];
        let numerators = PolyVector::new(vec![p("y", &v), p("x", &v)]).unwrap();
        let denominators = PolyVector::new(vec![p("1 + x^2", &v), p("1 + y^2", &v)]).unwrap();
        PolySystem::new(Mode::Discrete, numerators, denominators).unwrap()
    }

    #[test]
    fn system_invariants_are_enforced() {
        let v = ["x1"];
        // numerator with constant term: no equilibrium at the origin
        assert!(matches!(
            PolySystem::polynomial(Mode::Continuous, vec![p("x1 + 1", &v)]),
            Err(SystemError::NumeratorNotVanishingAtOrigin { .. })
        ));
        // denominator vanishing at the origin
        let numerators = PolyVector::new(vec![p("x1", &v)]).unwrap();
        let denominators = PolyVector::new(vec![p("x1", &v)]).unwrap();
        assert!(matches!(
            PolySystem::new(Mode::Continuous, numerators, denominators),
            Err(SystemError::DenominatorNotPositiveAtOrigin { .. })
        ));
    }

    #[test]
    fn example_one_decrease_identity() {
        let sys = example_one();
        let v = p("223/200*x1^2 + 223/200*x2^2", &["x1", "x2"]);
        let (dec, mult) = decrease_polynomial(&sys, &v).unwrap();
        assert_eq!(dec, p("223/100*x1^4 + 223/100*x2^2", &["x1", "x2"]));
        assert_eq!(mult, Polynomial::one(2));
    }

    #[test]
    fn example_three_discrete_decrease_identity() {
        let sys = example_three();
        let names = ["x", "y"];
        let v = p("x^2 + y^2", &names);
        let (dec, mult) = decrease_polynomial(&sys, &v).unwrap();
        assert_eq!(mult, p("(1 + x^2)^2*(1 + y^2)^2", &names));
        let expected = p(
            "x^6*y^4 + x^4*y^6 + 2*x^6*y^2 + 4*x^4*y^4 + 2*x^2*y^6 + 5*x^4*y^2 + 5*x^2*y^4 + 4*x^2*y^2",
            &names,
        );
        assert_eq!(dec, expected);
    }

    #[test]
    fn zero_candidate_gives_zero_decrease() {
        let sys = example_one();
        let (dec, _) = decrease_polynomial(&sys, &Polynomial::zero(2)).unwrap();
        assert!(dec.is_zero());
    }

    #[test]
    fn example_two_multiplier_clears_exactly() {
        let sys = example_two();
        let names = ["x1", "x2", "x3"];
        let v = p("x1^2 + x2^2 + x3^2", &names);
        let (dec, mult) = decrease_polynomial(&sys, &v).unwrap();
        assert_eq!(mult, p("x3^2 + 1", &names));
        // hand expansion of -grad(V) . ((x3^2+1)-cleared f)
        let expected = p(
            "2*x1^4*x3^2 + 2*x1^4 + 2*x1^2*x3^4 + 2*x1^2*x3^2 \
             + 2*x2^2*x3^2 + 2*x2^2 + 2*x1^2*x2^2*x3^2 + 2*x1^2*x2^2 \
             + 2*x3^4 + 2*x3^2 + 6*x1*x3^2 - 6*x1^2*x3^4 - 6*x1^2*x3^2",
            &names,
        );
        assert_eq!(dec, expected);
    }

    #[test]
    fn setup_block_dimensions_match_basis_cardinalities() {
        let setup = setup_sdp_k(&example_one(), 1).unwrap();
        assert_eq!(setup.problem.block_dims, vec![2, 6]);
        assert_eq!(setup.ell, 2);
        assert_eq!(setup.v_monomials.len(), 3);

        let setup = setup_sdp_k(&example_two(), 1).unwrap();
        assert_eq!(setup.problem.block_dims[0], 3);
    }

    #[test]
    fn even_rhs_degree_is_rejected() {
        // f = (x1^2,): even d makes the decrease degree odd
        let sys = PolySystem::polynomial(Mode::Continuous, vec![p("x1^2", &["x1"])]).unwrap();
        assert!(matches!(
            setup_sdp_k(&sys, 1),
            Err(SetupError::OddDecreaseDegree { degree: 3 })
        ));
    }

    #[test]
    fn synthesizes_example_one_quadratic_certificate() {
        let sys = example_one();
        let cert = exact_lyapunov(&sys, &SynthParams::default()).unwrap();
        assert_eq!(cert.half_degree, 1);
        assert_eq!(
            check_lyapunov(&sys, &cert, &Rational::zero()),
            Verdict::AsymptoticallyStable
        );
        // the decrease is a positive multiple of x1^4 + x2^2
        let d = &cert.decrease;
        assert_eq!(d.num_terms(), 2);
        let c = d.coeff(&Monomial::new(vec![4, 0]));
        assert!(c.is_positive());
        assert_eq!(d.coeff(&Monomial::new(vec![0, 2])), c);
    }

    #[test]
    fn unstable_scalar_system_finds_nothing() {
        let sys = PolySystem::polynomial(Mode::Continuous, vec![p("x1", &["x1"])]).unwrap();
        let params = SynthParams {
            k_max: 3,
            ..SynthParams::default()
        };
        assert!(exact_lyapunov(&sys, &params).is_err());
    }

    #[test]
    fn tampered_certificates_are_rejected_exactly() {
        let sys = example_one();
        let cert = exact_lyapunov(&sys, &SynthParams::default()).unwrap();
        let mut rng = SplitMix64::new(0x7a3b);
        for _ in 0..20 {
            let mut bad = cert.clone();
            let bump = Rational::new(1, 1_000_000 >> rng.next_below(4));
            match rng.next_below(3) {
                0 => bad.v.add_term(Monomial::new(vec![2, 0]), bump),
                1 => bad.decrease.add_term(Monomial::new(vec![0, 2]), bump),
                _ => {
                    let mut squares = bad.cert_decrease.squares().to_vec();
                    let weights = bad.cert_decrease.weights().to_vec();
                    let idx = rng.next_below(squares.len() as u64) as usize;
                    let m = squares[idx].terms().next().unwrap().0.clone();
                    squares[idx].add_term(m, bump);
                    bad.cert_decrease = WeightedSosCertificate::new(2, weights, squares).unwrap();
                }
            }
            let verdict = check_lyapunov(&sys, &bad, &Rational::zero());
            assert!(!verdict.is_valid(), "tampering slipped through: {verdict}");
        }
    }

    #[test]
    fn scaling_a_certificate_preserves_the_verdict() {
        let sys = example_one();
        let cert = exact_lyapunov(&sys, &SynthParams::default()).unwrap();
        let c = rat("7/3");
        let scaled = LyapunovCertificate {
            v: cert.v.scale(&c),
            half_degree: cert.half_degree,
            multiplier: cert.multiplier.clone(),
            decrease: cert.decrease.scale(&c),
            cert_v: cert.cert_v.scale_weights(&c),
            cert_decrease: cert.cert_decrease.scale_weights(&c),
            mu_v: &cert.mu_v * &c,
            mu_d: &cert.mu_d * &c,
            strictness: cert.strictness,
        };
        assert_eq!(
            check_lyapunov(&sys, &scaled, &Rational::zero()),
            check_lyapunov(&sys, &cert, &Rational::zero())
        );
    }

    #[test]
    fn synthesizes_example_two_quadratic_certificate() {
        let sys = example_two();
        let cert = exact_lyapunov(&sys, &SynthParams::default()).unwrap();
        assert_eq!(cert.half_degree, 1);
        let verdict = check_lyapunov(&sys, &cert, &Rational::zero());
        assert!(verdict.is_valid(), "{verdict}");
    }

    #[test]
    fn synthesizes_example_three_discrete_certificate() {
        let sys = example_three();
        let cert = exact_lyapunov(&sys, &SynthParams::default()).unwrap();
        assert_eq!(cert.half_degree, 1);
        let verdict = check_lyapunov(&sys, &cert, &Rational::zero());
        assert!(verdict.is_valid(), "{verdict}");
    }

    #[test]
    fn handcrafted_example_three_certificate_checks_as_stable() {
        let sys = example_three();
        let names = ["x", "y"];
        let v = p("x^2 + y^2", &names);
        let (decrease, multiplier) = decrease_polynomial(&sys, &v).unwrap();
        // all terms of the decrease are even with positive coefficients:
        // the diagonal certificate is immediate
        let mut weights = Vec::new();
        let mut squares = Vec::new();
        for (m, c) in decrease.terms() {
            weights.push(c.clone());
            squares.push(Polynomial::monomial(
                2,
                m.half().expect("even support"),
                Rational::one(),
            ));
        }
        let cert_decrease = WeightedSosCertificate::new(2, weights, squares).unwrap();
        let cert_v = WeightedSosCertificate::new(
            2,
            vec![rat("1/2"), rat("1/2")],
            vec![p("x", &names), p("y", &names)],
        )
        .unwrap();
        let cert = LyapunovCertificate {
            v,
            half_degree: 1,
            multiplier,
            decrease,
            cert_v,
            cert_decrease,
            mu_v: rat("1/2"),
            mu_d: Rational::zero(),
            strictness: Strictness::Nonnegative,
        };
        assert_eq!(
            check_lyapunov(&sys, &cert, &Rational::zero()),
            Verdict::Stable
        );
    }
}
