//! Exact-rational bookkeeping of the bound-term lists and the minimax
//! optimization producing the final subconvexity exponents. No floating
//! point anywhere in this module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExpError {
    #[error("unknown proposition id: {0}")]
    UnknownId(String),
    #[error("substitution would be nonlinear in the parity parameter")]
    NonlinearNu,
    #[error("term contains unresolved symbol {0:?}")]
    Unresolved(Symbol),
    #[error("term exponent still depends on the parity parameter")]
    UnresolvedNu,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("empty term list")]
    Empty,
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Symbol {
    T,
    K,
    N,
    X,
    C,
    B,
    D,
}

/// Rational affine form c + m·ν in the parity parameter ν.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuAffine {
    pub c: BigRational,
    pub m: BigRational,
}

impl NuAffine {
    pub fn constant(c: BigRational) -> Self {
        NuAffine {
            c,
            m: BigRational::zero(),
        }
    }

    pub fn new(c: BigRational, m: BigRational) -> Self {
        NuAffine { c, m }
    }

    pub fn is_const(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero() && self.m.is_zero()
    }

    pub fn eval(&self, nu: &BigRational) -> BigRational {
        &self.c + &self.m * nu
    }

    fn add(&self, other: &NuAffine) -> NuAffine {
        NuAffine {
            c: &self.c + &other.c,
            m: &self.m + &other.m,
        }
    }

    fn scale(&self, r: &BigRational) -> NuAffine {
        NuAffine {
            c: &self.c * r,
            m: &self.m * r,
        }
    }

    /// Product; errors when both factors carry a ν-part.
    fn mul(&self, other: &NuAffine) -> Result<NuAffine, ExpError> {
        if !self.m.is_zero() && !other.m.is_zero() {
            return Err(ExpError::NonlinearNu);
        }
        if self.is_const() {
            Ok(other.scale(&self.c))
        } else {
            Ok(self.scale(&other.c))
        }
    }
}

/// Product of symbol powers with exponents affine in ν.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpMonomial {
    pub exponents: BTreeMap<Symbol, NuAffine>,
}

impl ExpMonomial {
    pub fn new() -> Self {
        ExpMonomial {
            exponents: BTreeMap::new(),
        }
    }

    pub fn with(mut self, s: Symbol, e: NuAffine) -> Self {
        if e.is_zero() {
            self.exponents.remove(&s);
        } else {
            self.exponents.insert(s, e);
        }
        self
    }

    pub fn pow_const(self, s: Symbol, n: i64, d: i64) -> Self {
        self.with(s, NuAffine::constant(q(n, d)))
    }

    pub fn pow_nu(self, s: Symbol, c: (i64, i64), m: (i64, i64)) -> Self {
        self.with(s, NuAffine::new(q(c.0, c.1), q(m.0, m.1)))
    }

    /// Multiply by another monomial (add exponents).
    pub fn mul(&self, other: &ExpMonomial) -> ExpMonomial {
        let mut out = self.clone();
        for (s, e) in &other.exponents {
            let cur = out
                .exponents
                .remove(s)
                .unwrap_or_else(|| NuAffine::constant(BigRational::zero()));
            let sum = cur.add(e);
            if !sum.is_zero() {
                out.exponents.insert(*s, sum);
            }
        }
        out
    }
}

impl Default for ExpMonomial {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Display for ExpMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (s, e) in &self.exponents {
            if !first {
                write!(f, "·")?;
            }
            first = false;
            if e.is_const() {
                write!(f, "{:?}^({})", s, e.c)?;
            } else {
                write!(f, "{:?}^({}+{}ν)", s, e.c, e.m)?;
            }
        }
        Ok(())
    }
}

/// Pointwise maximum over a nonempty, deduplicated term list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundExpr {
    pub terms: Vec<ExpMonomial>,
}

impl BoundExpr {
    pub fn new(terms: Vec<ExpMonomial>) -> Result<Self, ExpError> {
        if terms.is_empty() {
            return Err(ExpError::Empty);
        }
        let mut dedup: Vec<ExpMonomial> = Vec::new();
        for t in terms {
            if !dedup.contains(&t) {
                dedup.push(t);
            }
        }
        Ok(BoundExpr { terms: dedup })
    }

    pub fn union(mut self, other: &BoundExpr) -> BoundExpr {
        for t in &other.terms {
            if !self.terms.contains(t) {
                self.terms.push(t.clone());
            }
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[allow(non_camel_case_types)]
pub enum PropositionId {
    P6_1,
    P7_1,
    P7_3,
    P7_4,
    P7_5,
    E9_6,
    E9_7,
    E9_13,
    E9_14,
    E9_15,
}

impl std::str::FromStr for PropositionId {
    type Err = ExpError;
    fn from_str(s: &str) -> Result<Self, ExpError> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "P6_1" => Self::P6_1,
            "P7_1" => Self::P7_1,
            "P7_3" => Self::P7_3,
            "P7_4" => Self::P7_4,
            "P7_5" => Self::P7_5,
            "E9_6" => Self::E9_6,
            "E9_7" => Self::E9_7,
            "E9_13" => Self::E9_13,
            "E9_14" => Self::E9_14,
            "E9_15" => Self::E9_15,
            other => return Err(ExpError::UnknownId(other.into())),
        })
    }
}

fn term(parts: &[(Symbol, i64, i64)]) -> ExpMonomial {
    let mut m = ExpMonomial::new();
    for &(s, n, d) in parts {
        m = m.pow_const(s, n, d);
    }
    m
}

use Symbol::{K, N, T};

/// Verbatim term list of the named intermediate bound.
pub fn proposition_terms(id: PropositionId) -> BoundExpr {
    let terms = match id {
        // N/K + TN^{1/2}/K^{3/2}
        PropositionId::P6_1 | PropositionId::E9_6 => vec![
            term(&[(N, 1, 1), (K, -1, 1)]),
            term(&[(T, 1, 1), (N, 1, 2), (K, -3, 2)]),
        ],
        // T^{3/2}N^{1/2}/K^{3/2} + T^{1/2}N/K
        PropositionId::P7_1 => vec![
            term(&[(T, 3, 2), (N, 1, 2), (K, -3, 2)]),
            term(&[(T, 1, 2), (N, 1, 1), (K, -1, 1)]),
        ],
        // T^{1/2}N/K + T^{1/2}N^{3/4}/K^{1/4} + TN^{1/2}/K^{1/2}
        PropositionId::P7_3 => vec![
            term(&[(T, 1, 2), (N, 1, 1), (K, -1, 1)]),
            term(&[(T, 1, 2), (N, 3, 4), (K, -1, 4)]),
            term(&[(T, 1, 1), (N, 1, 2), (K, -1, 2)]),
        ],
        // NK/T^{5/6} + N^{1/2}K^{3/2}/T^{1/6}
        PropositionId::P7_4 => vec![
            term(&[(N, 1, 1), (K, 1, 1), (T, -5, 6)]),
            term(&[(N, 1, 2), (K, 3, 2), (T, -1, 6)]),
        ],
        // NK/T + N^{3/4}K^{5/4}/T^{1/2} + N^{1/2}K^{3/2}/T^{1/2}
        PropositionId::P7_5 | PropositionId::E9_7 => vec![
            term(&[(N, 1, 1), (K, 1, 1), (T, -1, 1)]),
            term(&[(N, 3, 4), (K, 5, 4), (T, -1, 2)]),
            term(&[(N, 1, 2), (K, 3, 2), (T, -1, 2)]),
        ],
        // T^{1−ν/2}N/K + T^{2−ν/2}N^{1/2}/K^{3/2}
        PropositionId::E9_13 => vec![
            ExpMonomial::new()
                .pow_nu(T, (1, 1), (-1, 2))
                .pow_const(N, 1, 1)
                .pow_const(K, -1, 1),
            ExpMonomial::new()
                .pow_nu(T, (2, 1), (-1, 2))
                .pow_const(N, 1, 2)
                .pow_const(K, -3, 2),
        ],
        // NK/T^{1−ν/6} + N^{1/2}K^{3/2}/T^{1−5ν/6}
        PropositionId::E9_14 => vec![
            ExpMonomial::new()
                .pow_nu(T, (-1, 1), (1, 6))
                .pow_const(N, 1, 1)
                .pow_const(K, 1, 1),
            ExpMonomial::new()
                .pow_nu(T, (-1, 1), (5, 6))
                .pow_const(N, 1, 2)
                .pow_const(K, 3, 2),
        ],
        // T^{1−ν/2}N/K + T^{1/2}N^{3/4}/K^{1/4} + TN^{1/2}/K^{1/2}
        PropositionId::E9_15 => vec![
            ExpMonomial::new()
                .pow_nu(T, (1, 1), (-1, 2))
                .pow_const(N, 1, 1)
                .pow_const(K, -1, 1),
            term(&[(T, 1, 2), (N, 3, 4), (K, -1, 4)]),
            term(&[(T, 1, 1), (N, 1, 2), (K, -1, 2)]),
        ],
    };
    BoundExpr::new(terms).expect("builtin lists are nonempty")
}

/// Replace every occurrence of `symbol` by `replacement` raised to the
/// term's exponent; exact rational arithmetic throughout.
pub fn substitute(
    expr: &BoundExpr,
    symbol: Symbol,
    replacement: &ExpMonomial,
) -> Result<BoundExpr, ExpError> {
    let mut out = Vec::new();
    for t in &expr.terms {
        let mut base = t.clone();
        if let Some(e) = base.exponents.remove(&symbol) {
            let mut powered = ExpMonomial::new();
            for (s, re) in &replacement.exponents {
                powered = powered.with(*s, e.mul(re)?);
            }
            base = base.mul(&powered);
        }
        out.push(base);
    }
    BoundExpr::new(out)
}

/// An affine function c + s·κ of the spectral-window exponent κ.
pub type KappaAffine = (BigRational, BigRational);

/// Interpret each term as a function of κ via K = T^κ (exponents of T and K
/// only; ν must already be substituted unless `nu` is provided).
pub fn as_kappa_affine(
    expr: &BoundExpr,
    nu: Option<&BigRational>,
) -> Result<Vec<KappaAffine>, ExpError> {
    let mut out = Vec::new();
    for t in &expr.terms {
        let mut c = BigRational::zero();
        let mut slope = BigRational::zero();
        for (s, e) in &t.exponents {
            let val = match (e.is_const(), nu) {
                (true, _) => e.c.clone(),
                (false, Some(v)) => e.eval(v),
                (false, None) => return Err(ExpError::UnresolvedNu),
            };
            match s {
                Symbol::T => c += val,
                Symbol::K => slope += val,
                other => return Err(ExpError::Unresolved(*other)),
            }
        }
        out.push((c, slope));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct MinimaxResult {
    /// Leftmost minimizer.
    pub kappa: BigRational,
    pub value: BigRational,
    /// Full minimizing interval of the (convex) upper envelope.
    pub interval: (BigRational, BigRational),
    /// True when the minimizer touches the window boundary.
    pub on_boundary: bool,
    /// Indices of terms attaining the maximum at κ*.
    pub binding: Vec<usize>,
}

fn envelope_at(terms: &[KappaAffine], x: &BigRational) -> BigRational {
    terms
        .iter()
        .map(|(c, s)| c + s * x)
        .max()
        .expect("nonempty")
}

fn candidate_points(terms: &[KappaAffine], window: &(BigRational, BigRational)) -> Vec<BigRational> {
    let (lo, hi) = window;
    let mut pts = vec![lo.clone(), hi.clone()];
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            let (c1, s1) = &terms[i];
            let (c2, s2) = &terms[j];
            if s1 != s2 {
                let x = (c2 - c1) / (s1 - s2);
                if &x > lo && &x < hi {
                    pts.push(x);
                }
            }
        }
    }
    pts.sort();
    pts.dedup();
    pts
}

/// Exact minimax of a family of affine functions of κ on a closed window.
pub fn minimax_kappa(
    terms: &[KappaAffine],
    window: (BigRational, BigRational),
) -> Result<MinimaxResult, ExpError> {
    if terms.is_empty() {
        return Err(ExpError::Empty);
    }
    if window.0 > window.1 {
        return Err(ExpError::Domain("empty window".into()));
    }
    let pts = candidate_points(terms, &window);
    let mut best: Option<BigRational> = None;
    for x in &pts {
        let v = envelope_at(terms, x);
        if best.as_ref().map_or(true, |b| &v < b) {
            best = Some(v);
        }
    }
    let value = best.expect("nonempty candidate set");
    // the envelope is convex, so the minimizing set is an interval
    let winners: Vec<&BigRational> = pts.iter().filter(|x| envelope_at(terms, x) == value).collect();
    let kappa = winners[0].clone();
    let interval = (
        winners[0].clone(),
        winners[winners.len() - 1].clone(),
    );
    let on_boundary = kappa == window.0 || interval.1 == window.1;
    let binding = terms
        .iter()
        .enumerate()
        .filter(|(_, (c, s))| c + s * &kappa == value)
        .map(|(i, _)| i)
        .collect();
    Ok(MinimaxResult {
        kappa,
        value,
        interval,
        on_boundary,
        binding,
    })
}

/// True when max(reduced) == max(full) everywhere on the window, i.e. the
/// dropped terms are dominated on the whole window.
pub fn envelope_equal(
    full: &[KappaAffine],
    reduced: &[KappaAffine],
    window: &(BigRational, BigRational),
) -> bool {
    let mut all: Vec<KappaAffine> = full.to_vec();
    all.extend_from_slice(reduced);
    for x in candidate_points(&all, window) {
        if envelope_at(full, &x) != envelope_at(reduced, &x) {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone)]
pub struct Theorem1Result {
    pub exponent: BigRational,
    pub kappa: BigRational,
    pub theta: BigRational,
    pub binding: Vec<KappaAffine>,
    /// Strict interiority of κ* in the imposed window.
    pub interior: bool,
    /// Whether the six-term reduced list reproduces the full envelope.
    pub reduction_valid: bool,
}

fn theorem1_full_expr() -> BoundExpr {
    proposition_terms(PropositionId::P6_1)
        .union(&proposition_terms(PropositionId::P7_1))
        .union(&proposition_terms(PropositionId::P7_3))
        .union(&proposition_terms(PropositionId::P7_4))
        .union(&proposition_terms(PropositionId::P7_5))
}

/// The six-term list after N = T^{3/2} and division by √N:
/// {3/2−3κ/2, 5/4−κ, 7/8−κ/4, κ−1/12, 3κ/2−1/6, 5κ/4−1/8}.
fn theorem1_reduced_terms() -> Vec<KappaAffine> {
    vec![
        (q(3, 2), q(-3, 2)),
        (q(5, 4), q(-1, 1)),
        (q(7, 8), q(-1, 4)),
        (q(-1, 12), q(1, 1)),
        (q(-1, 6), q(3, 2)),
        (q(-1, 8), q(5, 4)),
    ]
}

pub fn theorem1_bound() -> Result<Theorem1Result, ExpError> {
    let full = theorem1_full_expr();
    // N = T^{3/2}, then divide by √N = T^{3/4}
    let subst = substitute(&full, N, &ExpMonomial::new().pow_const(T, 3, 2))?;
    let scaled = BoundExpr::new(
        subst
            .terms
            .iter()
            .map(|t| t.mul(&ExpMonomial::new().pow_const(T, -3, 4)))
            .collect(),
    )?;
    let terms = as_kappa_affine(&scaled, None)?;
    let window = (q(1, 2), q(11, 18));
    let reduction_valid = envelope_equal(&terms, &theorem1_reduced_terms(), &window);
    let res = minimax_kappa(&terms, window.clone())?;
    // value = 3/4 − θ
    let theta = q(3, 4) - &res.value;
    let interior = res.kappa > window.0 && res.kappa < window.1;
    let binding = res.binding.iter().map(|&i| terms[i].clone()).collect();
    Ok(Theorem1Result {
        exponent: res.value,
        kappa: res.kappa,
        theta,
        binding,
        interior,
        reduction_valid,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Low,
    High,
}

#[derive(Debug, Clone)]
pub struct Theorem2Result {
    pub exponent: BigRational,
    pub kappa: BigRational,
    pub theta: BigRational,
    pub regime: Regime,
    /// κ* strictly inside the window.
    pub interior: bool,
}

fn theorem2_expr() -> BoundExpr {
    proposition_terms(PropositionId::E9_6)
        .union(&proposition_terms(PropositionId::E9_7))
        .union(&proposition_terms(PropositionId::E9_13))
        .union(&proposition_terms(PropositionId::E9_14))
        .union(&proposition_terms(PropositionId::E9_15))
}

pub fn theorem2_bound(nu: &BigRational) -> Result<Theorem2Result, ExpError> {
    if !(nu > &q(2, 3) && nu <= &q(1, 1)) {
        return Err(ExpError::Domain(format!(
            "parity-weighted ordinate exponent must lie in (2/3, 1], got {nu}"
        )));
    }
    let full = theorem2_expr();
    // N = T^{1+ν/2}, then divide by √N = T^{(1+ν/2)/2}
    let n_sub = ExpMonomial::new().pow_nu(T, (1, 1), (1, 2));
    let subst = substitute(&full, N, &n_sub)?;
    let scaled = BoundExpr::new(
        subst
            .terms
            .iter()
            .map(|t| t.mul(&ExpMonomial::new().pow_nu(T, (-1, 2), (-1, 4))))
            .collect(),
    )?;
    let terms = as_kappa_affine(&scaled, Some(nu))?;
    // window: 1 − ν/2 < κ < min{1 − 7ν/18, 3/5 + ν/10}
    let lo = q(1, 1) - nu / q(2, 1);
    let hi1 = q(1, 1) - nu * q(7, 18);
    let hi2 = q(3, 5) + nu / q(10, 1);
    let hi = hi1.min(hi2);
    if lo >= hi {
        return Err(ExpError::Domain("empty spectral window".into()));
    }
    let res = minimax_kappa(&terms, (lo.clone(), hi.clone()))?;
    let crossover = crossover_nu();
    let regime = if nu <= &crossover {
        Regime::Low
    } else {
        Regime::High
    };
    let theta = match regime {
        Regime::Low => nu / q(8, 1) - q(1, 12),
        Regime::High => nu / q(42, 1),
    };
    let interior = res.kappa > lo && res.kappa < hi;
    Ok(Theorem2Result {
        exponent: res.value,
        kappa: res.kappa,
        theta,
        regime,
        interior,
    })
}

/// Solves 7/12 + ν/8 = 1/2 + 19ν/84 exactly.
pub fn crossover_nu() -> BigRational {
    // (7/12 − 1/2) / (19/84 − 1/8)
    (q(7, 12) - q(1, 2)) / (q(19, 84) - q(1, 8))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proposition_lists_verbatim() {
        let p61 = proposition_terms(PropositionId::P6_1);
        assert_eq!(p61.terms.len(), 2);
        assert_eq!(p61.terms[0], term(&[(N, 1, 1), (K, -1, 1)]));
        assert_eq!(
            p61.terms[1],
            term(&[(T, 1, 1), (N, 1, 2), (K, -3, 2)])
        );
        let p74 = proposition_terms(PropositionId::P7_4);
        assert_eq!(
            p74.terms,
            vec![
                term(&[(N, 1, 1), (K, 1, 1), (T, -5, 6)]),
                term(&[(N, 1, 2), (K, 3, 2), (T, -1, 6)]),
            ]
        );
        let e914 = proposition_terms(PropositionId::E9_14);
        assert_eq!(
            e914.terms[0],
            ExpMonomial::new()
                .pow_nu(T, (-1, 1), (1, 6))
                .pow_const(N, 1, 1)
                .pow_const(K, 1, 1)
        );
    }

    #[test]
    fn substitution_reproduces_reduced_list() {
        let t1 = theorem1_bound().unwrap();
        assert!(t1.reduction_valid, "six-term reduction must hold on window");
    }

    #[test]
    fn identity_substitution_is_noop() {
        let p = proposition_terms(PropositionId::P7_3);
        let id = ExpMonomial::new().pow_const(N, 1, 1);
        assert_eq!(substitute(&p, N, &id).unwrap(), p);
    }

    #[test]
    fn substitution_deduplicates() {
        // N/K and N^{1/2} both become K after substituting N = K²
        let e = BoundExpr::new(vec![
            term(&[(N, 1, 1), (K, -1, 1)]),
            term(&[(N, 1, 2)]),
        ])
        .unwrap();
        let s = substitute(&e, N, &ExpMonomial::new().pow_const(K, 2, 1)).unwrap();
        assert_eq!(s.terms, vec![term(&[(K, 1, 1)])]);
    }

    #[test]
    fn minimax_basic_cases() {
        // {κ, 1−κ} on [0,1] → κ*=1/2, value 1/2
        let r = minimax_kappa(
            &[(q(0, 1), q(1, 1)), (q(1, 1), q(-1, 1))],
            (q(0, 1), q(1, 1)),
        )
        .unwrap();
        assert_eq!(r.kappa, q(1, 2));
        assert_eq!(r.value, q(1, 2));
        assert_eq!(r.binding.len(), 2);
        // single increasing term → left endpoint
        let r = minimax_kappa(&[(q(0, 1), q(2, 1))], (q(1, 3), q(1, 1))).unwrap();
        assert_eq!(r.kappa, q(1, 3));
        assert!(r.on_boundary);
    }

    #[test]
    fn minimax_flat_tie_reports_interval() {
        // constant term dominating: entire window minimizes
        let r = minimax_kappa(
            &[(q(1, 1), q(0, 1)), (q(0, 1), q(1, 2))],
            (q(0, 1), q(1, 1)),
        )
        .unwrap();
        assert_eq!(r.value, q(1, 1));
        assert_eq!(r.kappa, q(0, 1)); // leftmost
        assert_eq!(r.interval, (q(0, 1), q(1, 1)));
    }

    #[test]
    fn minimax_monotone_in_window() {
        let terms = theorem1_reduced_terms();
        let narrow = minimax_kappa(&terms, (q(14, 25), q(3, 5))).unwrap();
        let wide = minimax_kappa(&terms, (q(1, 2), q(11, 18))).unwrap();
        assert!(narrow.value >= wide.value);
    }

    #[test]
    fn theorem1_exact_constants() {
        let t1 = theorem1_bound().unwrap();
        assert_eq!(t1.exponent, q(61, 84));
        assert_eq!(t1.kappa, q(25, 42));
        assert_eq!(t1.theta, q(1, 42));
        assert!(t1.interior);
        // binding terms exactly {7/8 − κ/4, 3κ/2 − 1/6}
        let mut binding = t1.binding.clone();
        binding.sort();
        assert_eq!(
            binding,
            vec![(q(-1, 6), q(3, 2)), (q(7, 8), q(-1, 4))]
        );
    }

    #[test]
    fn theorem2_exact_constants() {
        let low = theorem2_bound(&q(3, 4)).unwrap();
        assert_eq!(low.exponent, q(65, 96));
        assert_eq!(low.kappa, q(2, 3));
        assert_eq!(low.regime, Regime::Low);
        assert_eq!(low.theta, q(3, 32) - q(1, 12));

        let high = theorem2_bound(&q(1, 1)).unwrap();
        assert_eq!(high.exponent, q(61, 84));
        assert_eq!(high.kappa, q(1, 1) - q(17, 42));
        assert_eq!(high.regime, Regime::High);
        assert_eq!(high.theta, q(1, 42));

        let cross = theorem2_bound(&q(14, 17)).unwrap();
        assert_eq!(cross.exponent, q(35, 51));
        assert_eq!(cross.kappa, q(2, 3));
    }

    #[test]
    fn theorem2_matches_closed_forms_on_grid() {
        // κ* and exponent match the two closed-form regimes across ν
        for (num, den) in [(27, 40), (7, 10), (3, 4), (4, 5), (14, 17), (6, 7), (9, 10), (1, 1)] {
            let nu = q(num, den);
            let r = theorem2_bound(&nu).unwrap();
            let low_val = q(7, 12) + &nu / q(8, 1);
            let high_val = q(1, 2) + &nu * q(19, 84);
            let expect = low_val.clone().max(high_val.clone());
            assert_eq!(r.exponent, expect, "nu = {num}/{den}");
            if nu <= crossover_nu() {
                assert_eq!(r.kappa, q(2, 3));
            } else {
                assert_eq!(r.kappa, q(1, 1) - &nu * q(17, 42));
            }
            assert!(r.interior, "nu = {num}/{den}");
        }
    }

    #[test]
    fn theorem2_domain_errors() {
        assert!(theorem2_bound(&q(2, 3)).is_err());
        assert!(theorem2_bound(&q(1, 2)).is_err());
        assert!(theorem2_bound(&q(11, 10)).is_err());
    }

    #[test]
    fn crossover_exact() {
        assert_eq!(crossover_nu(), q(14, 17));
        let common = q(7, 12) + q(14, 17) / q(8, 1);
        assert_eq!(common, q(35, 51));
        // low-regime slope 1/8 < high-regime slope 19/84
        assert!(q(1, 8) < q(19, 84));
    }
}
