//! Executable constructive-analysis kernel: Cauchy reals with monotone
//! moduli, uniformly continuous functions with moduli of continuity, the
//! application of such functions to reals, and precision-indexed checkers for
//! nonnegativity and positive definiteness with rational witnesses.
//!
//! Everything here is exact rational arithmetic over computable data.
//! Universally quantified clauses are executable only as sampling plans; full
//! universality is carried by the exact SOS identities from the certificate
//! layer, which [`eta_from_certificate`] consumes to derive a sound witness.
//! Equality of reals is never decided; only precision-indexed predicates are
//! exposed.

use std::fmt;
use std::sync::Arc;

use crate::exactnum::{PrecP, Rational};
use crate::poly::Polynomial;
use crate::rng::SplitMix64;
use crate::sos::{verify_certificate, VerifyOutcome, WeightedSosCertificate};

type ApproxFn = Arc<dyn Fn(u64) -> Rational + Send + Sync>;
type ModulusFn = Arc<dyn Fn(PrecP) -> u64 + Send + Sync>;
type OmegaFn = Arc<dyn Fn(PrecP) -> PrecP + Send + Sync>;
type MvApproxFn = Arc<dyn Fn(&[Rational], u64) -> Rational + Send + Sync>;
type UvApproxFn = Arc<dyn Fn(&Rational, u64) -> Rational + Send + Sync>;

/// A real given by a regular Cauchy sequence of rationals with a monotone
/// modulus: terms at indices past `modulus(p)` differ by at most `2^-p`.
#[derive(Clone)]
pub struct CReal {
    approx: ApproxFn,
    modulus: ModulusFn,
}

impl CReal {
    pub fn new(approx: ApproxFn, modulus: ModulusFn) -> CReal {
        CReal { approx, modulus }
    }

    /// The constant sequence with modulus `p -> 0`.
    pub fn from_rational(a: Rational) -> CReal {
        CReal {
            approx: Arc::new(move |_| a.clone()),
            modulus: Arc::new(|_| 0),
        }
    }

    pub fn approx(&self, n: u64) -> Rational {
        (self.approx)(n)
    }

    pub fn modulus(&self, p: PrecP) -> u64 {
        (self.modulus)(p)
    }
}

impl fmt::Debug for CReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CReal(a_0 = {}, M(1) = {})",
            self.approx(0),
            self.modulus(PrecP::new(1))
        )
    }
}

/// Outcome of sampling the Cauchy regularity clause; a failure carries the
/// violating index pair and values.
#[derive(Clone, Debug)]
pub struct CauchyReport {
    pub precision: PrecP,
    pub trials: usize,
    pub violations: Vec<(u64, u64, Rational, Rational)>,
}

impl CauchyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples index pairs `n, m >= modulus(p)` and asserts `|a_n - a_m| <= 2^-p`
/// exactly.
pub fn cauchy_sample_check(x: &CReal, p: PrecP, trials: usize, seed: u64) -> CauchyReport {
    assert!(trials >= 1);
    let base = x.modulus(p);
    let tol = p.tolerance();
    let mut rng = SplitMix64::new(seed);
    let mut violations = Vec::new();
    for t in 0..trials {
        let n = base + if t == 0 { 0 } else { rng.next_below(1000) };
        let m = base + rng.next_below(1000);
        let an = x.approx(n);
        let am = x.approx(m);
        if (&an - &am).abs() > tol {
            violations.push((n, m, an, am));
        }
    }
    CauchyReport {
        precision: p,
        trials,
        violations,
    }
}

/// The nonnegativity test at precision `p`: `0 <= a_{M(p)} + 2^-p`, exactly.
pub fn real_nneg_at(x: &CReal, p: PrecP) -> bool {
    let a = x.approx(x.modulus(p));
    !(a + p.tolerance()).is_negative()
}

/// The positivity test at precision `p`: `2^-p <= a_{M(p+1)}`, exactly.
pub fn real_pos_at(x: &CReal, p: PrecP) -> bool {
    let a = x.approx(x.modulus(p.succ()));
    p.tolerance() <= a
}

/// A uniformly continuous function on a compact rational interval, given by
/// an approximation map with a modulus of convergence and a modulus of
/// continuity: `|a - b| <= 2^(-omega(p)+1)` forces
/// `|h(a, n) - h(b, n)| <= 2^-p`.
#[derive(Clone)]
pub struct UniformCont {
    pub h: UvApproxFn,
    pub alpha: ModulusFn,
    pub omega: OmegaFn,
    pub lo: Rational,
    pub hi: Rational,
}

/// A uniformly continuous function of several variables on a compact ball
/// (rational center and radius, 1-norm); the continuity clause reads
/// `||e1 - e2||_1 <= 2^(-omega(p)+1)  =>  |h(e1, n) - h(e2, n)| <= 2^-p`.
#[derive(Clone)]
pub struct ContMV {
    pub h: MvApproxFn,
    pub alpha: ModulusFn,
    pub omega: OmegaFn,
    pub center: Vec<Rational>,
    pub radius: Rational,
    /// True when `h` ignores its index argument (polynomial-backed maps);
    /// lets the samplers skip redundant evaluations.
    pub n_independent: bool,
}

impl ContMV {
    pub fn nvars(&self) -> usize {
        self.center.len()
    }
}

/// A vector of reals, entrywise Cauchy with monotone moduli.
#[derive(Clone)]
pub struct RealVector {
    entries: Vec<CReal>,
}

impl RealVector {
    pub fn new(entries: Vec<CReal>) -> RealVector {
        assert!(!entries.is_empty(), "empty real vector");
        RealVector { entries }
    }

    pub fn from_rationals(values: &[Rational]) -> RealVector {
        RealVector::new(values.iter().cloned().map(CReal::from_rational).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CReal] {
        &self.entries
    }
}

fn clamp_prec(p: i64) -> PrecP {
    PrecP::new(p.max(1) as u32)
}

/// Applies a uniformly continuous multivariate function to a vector of
/// reals: the sequence is `h(a_1(n), ..., a_k(n), n)` with modulus
/// `max(alpha(p+2), max_i M_i(omega(p+1) - 1))`.
pub fn apply_cont(f: &ContMV, x: &RealVector) -> CReal {
    assert_eq!(f.nvars(), x.len(), "dimension mismatch");
    let h = f.h.clone();
    let entries = x.entries.clone();
    let approx: ApproxFn = Arc::new(move |n| {
        let point: Vec<Rational> = entries.iter().map(|e| e.approx(n)).collect();
        h(&point, n)
    });
    let alpha = f.alpha.clone();
    let omega = f.omega.clone();
    let moduli: Vec<ModulusFn> = x.entries.iter().map(|e| e.modulus.clone()).collect();
    let modulus: ModulusFn = Arc::new(move |p| {
        let q = clamp_prec(omega(p.succ()).get() as i64 - 1);
        let from_inputs = moduli.iter().map(|m| m(q)).max().unwrap_or(0);
        alpha(p.plus(2)).max(from_inputs)
    });
    CReal::new(approx, modulus)
}

/// One-variable version of [`apply_cont`].
pub fn apply_cont_1d(f: &UniformCont, x: &CReal) -> CReal {
    let h = f.h.clone();
    let xc = x.clone();
    let approx: ApproxFn = Arc::new(move |n| h(&xc.approx(n), n));
    let alpha = f.alpha.clone();
    let omega = f.omega.clone();
    let xm = x.modulus.clone();
    let modulus: ModulusFn = Arc::new(move |p| {
        let q = clamp_prec(omega(p.succ()).get() as i64 - 1);
        alpha(p.plus(2)).max(xm(q))
    });
    CReal::new(approx, modulus)
}

/// Wraps an exact polynomial as a uniformly continuous function on the ball:
/// the approximation map evaluates exactly (so the modulus of convergence is
/// constantly zero) and the modulus of continuity is `p + 1 + ceil(log2 L)`
/// for the exact rational Lipschitz bound `L` on the gradient's 1-norm over
/// the ball, clamped to at least 1.
pub fn poly_to_contmv(g: &Polynomial, center: Vec<Rational>, radius: Rational) -> ContMV {
    assert!(radius.is_positive(), "radius must be positive");
    assert_eq!(g.nvars(), center.len(), "dimension mismatch");
    let reach = center
        .iter()
        .fold(Rational::zero(), |acc, c| acc + c.abs())
        + radius.clone();
    // L = sum_i sum_t |c_t| * deg_i(t) * reach^(deg t - 1)
    let mut lipschitz = Rational::zero();
    for (m, c) in g.terms() {
        let deg = m.total_degree();
        if deg == 0 {
            continue;
        }
        let pow = reach.pow(deg as i32 - 1);
        for &e in m.exponents() {
            if e > 0 {
                lipschitz += &(&(c.abs() * Rational::from_int(e as i64)) * &pow);
            }
        }
    }
    let lipschitz = lipschitz.max(Rational::one());
    let log_l = lipschitz.ceil_log2().max(0);
    let gp = g.clone();
    let h: MvApproxFn = Arc::new(move |e, _n| gp.eval(e).expect("point dimension checked"));
    ContMV {
        h,
        alpha: Arc::new(|_| 0),
        omega: Arc::new(move |p| PrecP::new(p.get() + 1 + log_l as u32)),
        center,
        radius,
        n_independent: true,
    }
}

/// Deterministic sampling plan: dyadic shells `||e||_1 in {2^-p, 2^(-p+1)}`
/// at resolution `2^-grid_bits` for each precision, plus pseudo-random
/// rational points from a fixed seed.
#[derive(Clone, Debug)]
pub struct SamplingPlan {
    pub grid_bits: u32,
    pub max_precision: u32,
    pub random_points: usize,
    pub seed: u64,
    /// Per-shell point cap; large shells are strided down to this size.
    pub max_shell_points: usize,
}

impl Default for SamplingPlan {
    fn default() -> SamplingPlan {
        SamplingPlan {
            grid_bits: 6,
            max_precision: 8,
            random_points: 1000,
            seed: 0x05EE_D1A9,
            max_shell_points: 600,
        }
    }
}

impl SamplingPlan {
    /// Enumerates integer vectors with `sum |k_i| = target`.
    fn shell_lattice(nvars: usize, target: u64) -> Vec<Vec<i64>> {
        fn rec(nvars: usize, target: u64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if nvars == 1 {
                if target == 0 {
                    prefix.push(0);
                    out.push(prefix.clone());
                    prefix.pop();
                } else {
                    for sign in [1i64, -1] {
                        prefix.push(sign * target as i64);
                        out.push(prefix.clone());
                        prefix.pop();
                    }
                }
                return;
            }
            for mag in 0..=target {
                if mag == 0 {
                    prefix.push(0);
                    rec(nvars - 1, target, prefix, out);
                    prefix.pop();
                } else {
                    for sign in [1i64, -1] {
                        prefix.push(sign * mag as i64);
                        rec(nvars - 1, target - mag, prefix, out);
                        prefix.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        rec(nvars, target, &mut Vec::new(), &mut out);
        out
    }

    /// Points with their exact apartness precision: shell points have
    /// `||e||_1` equal to `2^-p` or `2^(-p+1)`, random points get the
    /// smallest `p` with `2^-p <= ||e||_1`.
    pub fn apartness_points(&self, nvars: usize) -> Vec<(Vec<Rational>, PrecP)> {
        let mut out = Vec::new();
        for p in 1..=self.max_precision {
            let q = self.grid_bits.max(p);
            let scale = Rational::pow2(-(q as i64));
            for exp_shift in [0u32, 1] {
                if q + exp_shift < p {
                    continue;
                }
                let target = 1u64 << (q + exp_shift - p);
                let lattice = Self::shell_lattice(nvars, target);
                let stride = (lattice.len() / self.max_shell_points.max(1)).max(1);
                for ks in lattice.into_iter().step_by(stride) {
                    let e: Vec<Rational> = ks
                        .iter()
                        .map(|&k| &Rational::from_int(k) * &scale)
                        .collect();
                    out.push((e, PrecP::new(p)));
                }
            }
        }
        let mut rng = SplitMix64::new(self.seed);
        let denom = 1i64 << (self.grid_bits + 4);
        let mut added = 0;
        while added < self.random_points {
            let e: Vec<Rational> = (0..nvars)
                .map(|_| Rational::new(rng.next_i64_in(-denom, denom), denom))
                .collect();
            let norm = e.iter().fold(Rational::zero(), |acc, c| acc + c.abs());
            if norm.is_zero() || norm > Rational::one() {
                continue;
            }
            let p = Rational::one()
                .checked_div(&norm)
                .expect("norm nonzero")
                .ceil_log2()
                .max(1) as u32;
            out.push((e, PrecP::new(p)));
            added += 1;
        }
        out
    }

    /// Ball points for nonnegativity sampling (center plus scaled shells and
    /// randoms).
    pub fn ball_points(&self, center: &[Rational], radius: &Rational) -> Vec<Vec<Rational>> {
        let mut out = vec![center.to_vec()];
        for (e, _) in self.apartness_points(center.len()) {
            let shifted: Vec<Rational> = center
                .iter()
                .zip(&e)
                .map(|(c, d)| c + &(d * radius))
                .collect();
            out.push(shifted);
        }
        out
    }
}

/// Nonnegativity sampling report; failures carry `(point, p, value)`.
#[derive(Clone, Debug)]
pub struct NonnegReport {
    pub checked: usize,
    pub failures: Vec<(Vec<Rational>, PrecP, Rational)>,
}

impl NonnegReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `-2^-p <= h(e, n)` for every sampled ball point, every precision up
/// to the plan's maximum, at sampled indices `n >= alpha(p)`.
pub fn check_nonneg(g: &ContMV, plan: &SamplingPlan) -> NonnegReport {
    let points = plan.ball_points(&g.center, &g.radius);
    let mut failures = Vec::new();
    let mut checked = 0;
    for e in &points {
        checked += 1;
        for p in 1..=plan.max_precision {
            let p = PrecP::new(p);
            let n0 = (g.alpha)(p);
            let offsets: &[u64] = if g.n_independent { &[0] } else { &[0, 1, 16] };
            for &off in offsets {
                let value = (g.h)(e, n0 + off);
                if (value.clone() + p.tolerance()).is_negative() {
                    failures.push((e.clone(), p, value));
                }
            }
            if g.n_independent {
                // one evaluation settles every precision for exact maps
                break;
            }
        }
        if g.n_independent {
            // retest the single value against the tightest precision
            let p = PrecP::new(plan.max_precision);
            let value = (g.h)(e, 0);
            if (value.clone() + p.tolerance()).is_negative()
                && !failures.iter().any(|(pt, _, _)| pt == e)
            {
                failures.push((e.clone(), p, value));
            }
        }
    }
    NonnegReport { checked, failures }
}

/// Positive-definiteness sampling report for a rational witness.
#[derive(Clone, Debug)]
pub struct PosDefReport {
    /// Clause 1: the ball center lies within the radius.
    pub center_ok: bool,
    /// Clause 2: the function vanishes at the origin.
    pub zero_ok: bool,
    pub checked: usize,
    /// Clause 3 failures: points apart from zero at `p` where positivity at
    /// `eta(p)` failed.
    pub failures: Vec<(Vec<Rational>, PrecP)>,
}

impl PosDefReport {
    pub fn passed(&self) -> bool {
        self.center_ok && self.zero_ok && self.failures.is_empty()
    }
}

/// Checks the three positive-definiteness clauses against a sampling plan:
/// `||c|| <= R` exactly, `g(0) = 0` exactly, and for every sampled rational
/// point apart from zero at precision `p`, positivity of the applied real at
/// `eta(p)` through the honest application machinery.
pub fn check_pos_def_rat_wit(g: &ContMV, w: &Witness, plan: &SamplingPlan) -> PosDefReport {
    let center_norm = g
        .center
        .iter()
        .fold(Rational::zero(), |acc, c| acc + c.abs());
    let center_ok = center_norm <= g.radius;
    let origin = vec![Rational::zero(); g.nvars()];
    let zero_ok = (g.h)(&origin, (g.alpha)(PrecP::new(1))).is_zero();
    let mut failures = Vec::new();
    let mut checked = 0;
    for (e, p) in plan.apartness_points(g.nvars()) {
        checked += 1;
        let value = apply_cont(g, &RealVector::from_rationals(&e));
        if !real_pos_at(&value, w.eta(p)) {
            failures.push((e, p));
        }
    }
    PosDefReport {
        center_ok,
        zero_ok,
        checked,
        failures,
    }
}

/// A computable precision transport: points apart from zero at `p` have
/// function values positive at `eta(p)`.
#[derive(Clone)]
pub struct Witness {
    eta: Arc<dyn Fn(PrecP) -> PrecP + Send + Sync>,
}

impl Witness {
    pub fn new(eta: Arc<dyn Fn(PrecP) -> PrecP + Send + Sync>) -> Witness {
        Witness { eta }
    }

    pub fn from_fn(f: impl Fn(u32) -> u32 + Send + Sync + 'static) -> Witness {
        Witness {
            eta: Arc::new(move |p| PrecP::new(f(p.get()).max(1))),
        }
    }

    pub fn eta(&self, p: PrecP) -> PrecP {
        (self.eta)(p)
    }
}

impl fmt::Debug for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Witness(eta(1) = {}, eta(2) = {}, eta(3) = {})",
            self.eta(PrecP::new(1)),
            self.eta(PrecP::new(2)),
            self.eta(PrecP::new(3))
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessError {
    /// The certificate does not reassemble the shifted polynomial, so no
    /// exact lower bound is available.
    CertificateMismatch(Polynomial),
    /// A nonpositive shift carries no strict lower bound.
    ShiftNotPositive,
    /// The shift set lacks a pure power of some variable.
    ShiftSetNotPositiveDefinite { variable: usize },
}

impl fmt::Display for WitnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessError::CertificateMismatch(r) => {
                write!(f, "certificate mismatch (residual {r})")
            }
            WitnessError::ShiftNotPositive => write!(f, "shift must be positive"),
            WitnessError::ShiftSetNotPositiveDefinite { variable } => {
                write!(f, "shift set has no pure power of variable {variable}")
            }
        }
    }
}

impl std::error::Error for WitnessError {}

/// Derives a positivity witness from an exact certificate of
/// `g - mu * sum_{|a|=k} x^(2a)`: when `||e||_1 >= 2^-p` some coordinate has
/// `|e_i| >= 2^-p / n`, so `g(e) >= mu * (2^-p / n)^(2k) >= 2^-eta(p)` with
/// `eta(p) = 2k (p + ceil log2 n) + ceil log2(1/mu) + 1`.
pub fn eta_from_certificate(
    g: &Polynomial,
    cert: &WeightedSosCertificate,
    mu: &Rational,
    nvars: usize,
    half_degree: u32,
) -> Result<Witness, WitnessError> {
    let shift: Vec<crate::poly::Monomial> =
        crate::sos::basis_for(nvars, half_degree, crate::sos::BasisKind::HomogeneousDegree)
            .monomials()
            .to_vec();
    eta_from_shift_certificate(g, cert, mu, &shift)
}

/// General form of [`eta_from_certificate`] over an arbitrary shift set,
/// which must contain a pure power of every variable; the growth exponent is
/// the largest such pure-power degree.
pub fn eta_from_shift_certificate(
    g: &Polynomial,
    cert: &WeightedSosCertificate,
    mu: &Rational,
    shift: &[crate::poly::Monomial],
) -> Result<Witness, WitnessError> {
    if !mu.is_positive() {
        return Err(WitnessError::ShiftNotPositive);
    }
    let nvars = g.nvars();
    let mut k_max = 0u32;
    for i in 0..nvars {
        let pure = shift
            .iter()
            .filter(|m| {
                m.exponents()
                    .iter()
                    .enumerate()
                    .all(|(j, &e)| if j == i { e > 0 } else { e == 0 })
            })
            .map(|m| m.total_degree())
            .max();
        match pure {
            Some(k) => k_max = k_max.max(k),
            None => return Err(WitnessError::ShiftSetNotPositiveDefinite { variable: i }),
        }
    }
    let mut target = g.clone();
    for m in shift {
        target.add_term(m.double(), -mu);
    }
    if let VerifyOutcome::Mismatch(r) = verify_certificate(&target, cert) {
        return Err(WitnessError::CertificateMismatch(r));
    }
    let log_n = Rational::from_int(nvars as i64).ceil_log2().max(0);
    let inv_mu = Rational::one().checked_div(mu).expect("mu positive");
    let log_inv_mu = inv_mu.ceil_log2();
    Ok(Witness::from_fn(move |p| {
        let raw = 2 * k_max as i64 * (p as i64 + log_n) + log_inv_mu + 1;
        raw.max(1) as u32
    }))
}
