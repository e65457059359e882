//! Exact parameter algebra: critical indices, Hölder conjugates, and the
//! admissibility conditions under which the localization product bounds and
//! moment growth estimates hold.
//!
//! All checks are exact rational comparisons. Open and closed interval
//! endpoints therefore behave literally: a hypothesis that requires
//! `critical < k` is false at `k = critical`.

mod index;

use serde::{Deserialize, Serialize};

pub use index::{parse_rational, ratio_serde, rational_to_f64, Index, Rational};

use crate::error::{Error, Result};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Critical integrability index `n / (a⁻¹ n + b)` of the weight `|x|^b`
/// measured in `L^a` over `ℝ^n`. Below it the weighted norm cannot control
/// an unweighted one.
pub fn critical_index(n: u32, a: Index, b: Rational) -> Result<Rational> {
    if n == 0 {
        return Err(Error::InvalidIndex("dimension must be >= 1".into()));
    }
    if b <= int(0) {
        return Err(Error::InvalidIndex(format!(
            "moment power must be positive, got {b}"
        )));
    }
    let n = int(n as i64);
    Ok(n / (n * a.recip() + b))
}

/// Hölder conjugate (free function form of [`Index::conjugate`]).
pub fn conjugate(p: Index) -> Result<Index> {
    p.conjugate()
}

/// Upper cap `critical'` that applies when `critical ≥ 1`; `None` when the
/// range is uncapped (`critical < 1`).
pub fn conjugate_cap(critical: Rational) -> Option<Index> {
    if critical < int(1) {
        None
    } else if critical == int(1) {
        Some(Index::Infinity)
    } else {
        Some(Index::Finite(critical / (critical - int(1))))
    }
}

/// One side of a localization product: dimension `n`, moment norm index `a`,
/// moment power `b`, and reference norm index `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideParams {
    pub n: u32,
    pub a: Index,
    #[serde(with = "ratio_serde")]
    pub b: Rational,
    pub k: Index,
}

impl SideParams {
    pub fn new(n: u32, a: Index, b: Rational, k: Index) -> Result<SideParams> {
        critical_index(n, a, b)?;
        Ok(SideParams { n, a, b, k })
    }

    pub fn critical(&self) -> Rational {
        critical_index(self.n, self.a, self.b).expect("validated at construction")
    }

    /// The exponent `1/a + b/n − 1/k` attached to this side's factor.
    /// Positive exactly when `k` clears the critical index.
    pub fn localization_exponent(&self) -> Rational {
        self.a.recip() + self.b / int(self.n as i64) - self.k.recip()
    }
}

/// Full parameter set of the abstract two-function product bound: two sides,
/// transfer indices `q_i < m_i`, and transfer constants `C_1, C_2`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct UPParams {
    pub side1: SideParams,
    pub side2: SideParams,
    #[serde(with = "ratio_serde")]
    pub q1: Rational,
    #[serde(with = "ratio_serde")]
    pub q2: Rational,
    pub m1: Index,
    pub m2: Index,
    pub c1: f64,
    pub c2: f64,
}

/// Diagnostics for the abstract hypothesis: one entry per failed inequality.
pub fn thm1_violations(p: &UPParams) -> Vec<String> {
    let mut v = Vec::new();
    for (i, side, q, m) in [(1, &p.side1, p.q1, p.m1), (2, &p.side2, p.q2, p.m2)] {
        let crit = side.critical();
        if !(Index::Finite(crit) < side.k) {
            v.push(format!(
                "side {i}: requires critical {crit} < k_{i} = {}",
                side.k
            ));
        }
        if !(side.k <= m) {
            v.push(format!("side {i}: requires k_{i} = {} <= m_{i} = {m}", side.k));
        }
        if !(crit < q) {
            v.push(format!("side {i}: requires critical {crit} < q_{i} = {q}"));
        }
        if !(Index::Finite(q) < m) {
            v.push(format!("side {i}: requires q_{i} = {q} < m_{i} = {m}"));
        }
    }
    if !(p.q1 > int(0)) {
        v.push("q_1 must be positive".into());
    }
    if !(p.q2 > int(0)) {
        v.push("q_2 must be positive".into());
    }
    if !(p.c1 > 0.0 && p.c2 > 0.0) {
        v.push("transfer constants C_1, C_2 must be positive".into());
    }
    v
}

pub fn thm1_admissible(p: &UPParams) -> bool {
    thm1_violations(p).is_empty()
}

/// Exponents of the abstract conclusion: the product
/// `M_1^{e1'} · M_2^{e2'} ≳ (C_2/C_1)^{rhs}` where `M_i` are the two
/// localization factors, `e1 = (1/q_1 − 1/m_1)·E_2`, `e2 = (1/q_2 − 1/m_2)·E_1`,
/// and `rhs = E_1 · E_2` with `E_i = 1/a_i + b_i/n_i − 1/k_i`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Thm1Exponents {
    #[serde(with = "ratio_serde")]
    pub e1: Rational,
    #[serde(with = "ratio_serde")]
    pub e2: Rational,
    #[serde(with = "ratio_serde")]
    pub rhs_exponent: Rational,
}

impl Thm1Exponents {
    /// Predicted lower bound `(C_2/C_1)^{rhs}` for the exponentiated product.
    pub fn lower_bound(&self, c1: f64, c2: f64) -> f64 {
        (c2 / c1).powf(rational_to_f64(self.rhs_exponent))
    }
}

pub fn thm1_exponents(p: &UPParams) -> Result<Thm1Exponents> {
    let violations = thm1_violations(p);
    if !violations.is_empty() {
        return Err(Error::Inadmissible(violations));
    }
    let e_1 = p.side1.localization_exponent();
    let e_2 = p.side2.localization_exponent();
    let t1 = p.q1.recip() - p.m1.recip();
    let t2 = p.q2.recip() - p.m2.recip();
    Ok(Thm1Exponents {
        e1: t1 * e_2,
        e2: t2 * e_1,
        rhs_exponent: e_1 * e_2,
    })
}

/// Diagnostics for the Fourier-pair product bound over `ℝ^n`: both critical
/// indices below 2, and each `k_i` in the range whose upper end is governed
/// by the *other* side's critical index (`(crit_i, ∞]` when `crit_other < 1`,
/// otherwise the open interval `(crit_i, crit_other')`).
pub fn thm2_violations(n: u32, side1: &SideParams, side2: &SideParams) -> Result<Vec<String>> {
    if side1.n != n || side2.n != n {
        return Err(Error::Config(format!(
            "side dimensions ({}, {}) must match n = {n}",
            side1.n, side2.n
        )));
    }
    let mut v = Vec::new();
    let crit1 = side1.critical();
    let crit2 = side2.critical();
    for (i, crit) in [(1, crit1), (2, crit2)] {
        if !(crit < int(2)) {
            v.push(format!("side {i}: requires critical {crit} < 2"));
        }
    }
    for (i, side, other_crit) in [(1, side1, crit2), (2, side2, crit1)] {
        let crit = side.critical();
        if !(Index::Finite(crit) < side.k) {
            v.push(format!(
                "side {i}: requires critical {crit} < k_{i} = {}",
                side.k
            ));
        }
        if let Some(cap) = conjugate_cap(other_crit) {
            if !(side.k < cap) {
                v.push(format!(
                    "side {i}: requires k_{i} = {} < conjugate of the other side's critical = {cap}",
                    side.k
                ));
            }
        }
    }
    Ok(v)
}

pub fn thm2_admissible(n: u32, side1: &SideParams, side2: &SideParams) -> Result<bool> {
    Ok(thm2_violations(n, side1, side2)?.is_empty())
}

/// Admissibility of the two-weight corollary with weights `|x|^θ`, `|ξ|^φ`
/// measured in `L^p`, `L^q`, both factors normalized by `L^r`.
pub fn cor2_admissible(
    n: u32,
    theta: Rational,
    phi: Rational,
    p: Index,
    q: Index,
    r: Index,
) -> Result<bool> {
    let crit_p = critical_index(n, p, theta)?;
    let crit_q = critical_index(n, q, phi)?;
    let inv_min = r.min_with_two().recip();
    let nn = int(n as i64);
    let cond_strength =
        theta / nn > inv_min - p.recip() && phi / nn > inv_min - q.recip();
    let cap_ok = |crit: Rational| match conjugate_cap(crit) {
        Some(cap) => r < cap,
        None => true,
    };
    Ok(cond_strength && cap_ok(crit_p) && cap_ok(crit_q))
}

/// Admissibility of the single-weight symmetric corollary
/// (`critical < min{2, q}` plus the conjugate cap when `critical ≥ 1`).
pub fn cor3_admissible(n: u32, theta: Rational, p: Index, q: Index) -> Result<bool> {
    let crit = critical_index(n, p, theta)?;
    let below = Index::Finite(crit) < q.min_with_two();
    let cap = match conjugate_cap(crit) {
        Some(cap) => q < cap,
        None => true,
    };
    Ok(below && cap)
}

/// Verdict for a range whose interior is proved, whose complement is refuted,
/// and whose endpoints remain open questions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RangeVerdict {
    Admissible,
    Unknown,
    Inadmissible,
}

/// Status of the sharp `L^p` product inequality with unit moment power and
/// `a_i = k_i = p` on both sides: proved for `p ∈ (0, 2n/(n−1))`, refuted for
/// `p ∈ (2n/(n−1), ∞)`, open at `p = 2n/(n−1)` and `p = ∞` (for `n = 1` the
/// threshold itself is `∞`).
pub fn heisenberg_lp_verdict(n: u32, p: Index) -> Result<RangeVerdict> {
    if n == 0 {
        return Err(Error::InvalidIndex("dimension must be >= 1".into()));
    }
    let threshold = if n == 1 {
        Index::Infinity
    } else {
        Index::Finite(rat(2 * n as i64, n as i64 - 1))
    };
    Ok(if p == threshold || p.is_infinite() {
        RangeVerdict::Unknown
    } else if p < threshold {
        RangeVerdict::Admissible
    } else {
        RangeVerdict::Inadmissible
    })
}

/// A point `(1/p, 1/q)` of the exponent square `[0, 1]²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionPoint {
    #[serde(with = "ratio_serde")]
    pub inv_p: Rational,
    #[serde(with = "ratio_serde")]
    pub inv_q: Rational,
}

impl RegionPoint {
    pub fn new(inv_p: Rational, inv_q: Rational) -> RegionPoint {
        RegionPoint { inv_p, inv_q }
    }
}

fn cross(o: (Rational, Rational), u: (Rational, Rational), v: (Rational, Rational)) -> Rational {
    (u.0 - o.0) * (v.1 - o.1) - (u.1 - o.1) * (v.0 - o.0)
}

/// Membership in the admissible exponent region for fixed-time estimates of
/// the free dispersive flow: the closed triangle with vertices
/// `A = (1/2, 1/2)`, `B = (1/2, n/(2n+4))`, `C = ((n+2)/(2n+2), n/(2n+2))`,
/// minus the vertex `C` and minus the open edge `BC` (so `B` stays in).
pub fn delta_n_contains(n: u32, pt: &RegionPoint) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidIndex("dimension must be >= 1".into()));
    }
    let n = n as i64;
    let a = (rat(1, 2), rat(1, 2));
    let b = (rat(1, 2), rat(n, 2 * n + 4));
    let c = (rat(n + 2, 2 * n + 2), rat(n, 2 * n + 2));
    let p = (pt.inv_p, pt.inv_q);

    // A, B, C is positively oriented; inside-or-on is three non-negative crosses.
    let zero = int(0);
    let inside =
        cross(a, b, p) >= zero && cross(b, c, p) >= zero && cross(c, a, p) >= zero;
    if !inside {
        return Ok(false);
    }
    let on_bc = cross(b, c, p) == zero;
    let is_b = p == b;
    Ok(!on_bc || is_b)
}

/// Membership in the smoothing-estimate index region of the heat flow:
/// `1 ≤ p ≤ q < (n+2)/n · p`, plus the diagonal point at infinity.
pub fn heat_region_contains(n: u32, p: Index, q: Index) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidIndex("dimension must be >= 1".into()));
    }
    if p.is_infinite() && q.is_infinite() {
        return Ok(true);
    }
    let one = Index::Finite(int(1));
    let cap = p.scale(rat(n as i64 + 2, n as i64))?;
    Ok(one <= p && p <= q && q < cap)
}

/// Whether the time envelope `η(t) = (1+|t|)^{−σ}` satisfies both fixed-point
/// conditions: integrability over the line and boundedness of
/// `|t| · sup_{|t|/2 ≤ |s| ≤ |t|} η(s)`. Both hold exactly when `σ > 1`.
pub fn eta_condition_check(sigma: f64) -> bool {
    sigma > 1.0
}

/// Diagnostics for the spacetime product bound coupling data over `ℝ^n` with
/// its flow restricted over `[0,T] × Ω ⊂ ℝ^{n+1}`.
pub fn thm5_violations(side1: &SideParams, side2: &SideParams) -> Result<Vec<String>> {
    if side2.n != side1.n + 1 {
        return Err(Error::Config(format!(
            "spacetime side must live in dimension n+1 = {}, got {}",
            side1.n + 1,
            side2.n
        )));
    }
    let n = side1.n as i64;
    let mut v = Vec::new();
    let crit1 = side1.critical();
    if !(Index::Finite(crit1) < side1.k) {
        v.push(format!(
            "data side: requires critical {crit1} < k_1 = {}",
            side1.k
        ));
    }
    if !(side1.k <= Index::Finite(int(2))) {
        v.push(format!("data side: requires k_1 = {} <= 2", side1.k));
    }
    let crit2 = side2.critical();
    if !(Index::Finite(crit2) < side2.k.min_with_two()) {
        v.push(format!(
            "spacetime side: requires critical {crit2} < min(2, k_2 = {})",
            side2.k
        ));
    }
    let cap = Index::Finite(rat(2 * n + 4, n));
    if !(side2.k < cap) {
        v.push(format!(
            "spacetime side: requires k_2 = {} < (2n+4)/n = {cap}",
            side2.k
        ));
    }
    Ok(v)
}

pub fn thm5_admissible(side1: &SideParams, side2: &SideParams) -> Result<bool> {
    Ok(thm5_violations(side1, side2)?.is_empty())
}

/// Diagnostics for the nonlinear fixed-point setting: dispersive index `p`
/// in the scaling-allowed range and nonlinearity order
/// `m ∈ (1, min{1 + 4/n, p − 1}]`.
pub fn nls_violations(n: u32, p: Index, m: Rational) -> Vec<String> {
    let mut v = Vec::new();
    let two = Index::Finite(int(2));
    if !(p > two) {
        v.push(format!("requires p = {p} > 2"));
    }
    match n {
        0 => v.push("dimension must be >= 1".into()),
        1 => {}
        2 => {
            if p.is_infinite() {
                v.push("requires p < inf in dimension 2".into());
            }
        }
        _ => {
            let cap = Index::Finite(rat(2 * n as i64, n as i64 - 2));
            if !(p < cap) {
                v.push(format!("requires p = {p} < 2n/(n-2) = {cap}"));
            }
        }
    }
    if !(m > int(1)) {
        v.push(format!("requires nonlinearity order m = {m} > 1"));
        return v;
    }
    if n > 0 {
        let mass_cap = int(1) + rat(4, n as i64);
        if !(m <= mass_cap) {
            v.push(format!("requires m = {m} <= 1 + 4/n = {mass_cap}"));
        }
    }
    match p {
        Index::Finite(pr) => {
            if !(m <= pr - int(1)) {
                v.push(format!("requires m = {m} <= p - 1 = {}", pr - int(1)));
            }
        }
        Index::Infinity => {}
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(s: &str) -> Index {
        s.parse().unwrap()
    }

    #[test]
    fn critical_index_examples() {
        assert_eq!(
            critical_index(1, idx("2"), int(1)).unwrap(),
            rat(2, 3)
        );
        assert_eq!(critical_index(2, idx("2"), int(1)).unwrap(), int(1));
        assert_eq!(
            critical_index(3, Index::INFINITY, int(2)).unwrap(),
            rat(3, 2)
        );
        assert!(critical_index(1, idx("2"), int(0)).is_err());
        assert!(critical_index(1, idx("2"), int(-1)).is_err());
    }

    #[test]
    fn critical_index_monotone_in_b() {
        let a = idx("2");
        let mut prev = critical_index(1, a, rat(1, 4)).unwrap();
        for num in 2..20 {
            let next = critical_index(1, a, rat(num, 4)).unwrap();
            assert!(next < prev);
            prev = next;
        }
    }

    fn demo_up_params() -> UPParams {
        let side = SideParams::new(1, idx("2"), int(1), idx("2")).unwrap();
        UPParams {
            side1: side,
            side2: side,
            q1: rat(4, 3),
            q2: rat(4, 3),
            m1: idx("4"),
            m2: idx("4"),
            c1: 1.0,
            c2: 1.0,
        }
    }

    #[test]
    fn thm1_exponent_example() {
        let e = thm1_exponents(&demo_up_params()).unwrap();
        assert_eq!(e.e1, rat(1, 2));
        assert_eq!(e.e2, rat(1, 2));
        assert_eq!(e.rhs_exponent, int(1));
        assert_eq!(e.lower_bound(1.0, 1.0), 1.0);
    }

    #[test]
    fn thm1_violation_diagnostics() {
        let mut p = demo_up_params();
        p.side1.k = idx("1/2"); // below critical 2/3
        let v = thm1_violations(&p);
        assert_eq!(v.len(), 1);
        assert!(v[0].contains("critical 2/3 < k_1"));
        assert!(thm1_exponents(&p).is_err());

        // Every condition violated on side 2: k above m, q at m.
        p = demo_up_params();
        p.m2 = idx("1");
        let v = thm1_violations(&p);
        assert!(v.iter().any(|s| s.contains("k_2")));
        assert!(v.iter().any(|s| s.contains("q_2")));
    }

    #[test]
    fn thm1_exponents_positive_when_admissible() {
        let e = thm1_exponents(&demo_up_params()).unwrap();
        assert!(e.e1 > int(0) && e.e2 > int(0) && e.rhs_exponent > int(0));
    }

    #[test]
    fn thm2_range_branches() {
        // Both criticals 2/3 < 1: k range is (2/3, inf].
        let s = |k: &str| SideParams::new(1, idx("2"), int(1), idx(k)).unwrap();
        assert!(thm2_admissible(1, &s("1"), &s("inf")).unwrap());
        assert!(!thm2_admissible(1, &s("2/3"), &s("2")).unwrap());

        // In dimension 3 with a=2, b=1: critical = 6/5 >= 1, cap = 6.
        let s3 = |k: &str| SideParams::new(3, idx("2"), int(1), idx(k)).unwrap();
        assert!(thm2_admissible(3, &s3("2"), &s3("2")).unwrap());
        assert!(!thm2_admissible(3, &s3("6"), &s3("2")).unwrap());
        assert!(!thm2_admissible(3, &s3("inf"), &s3("2")).unwrap());

        // Critical >= 2 is always out.
        let fat = SideParams::new(1, Index::INFINITY, rat(1, 2), idx("3")).unwrap();
        assert!(!thm2_admissible(1, &fat, &fat).unwrap());

        assert!(thm2_admissible(2, &s("2"), &s("2")).is_err());
    }

    #[test]
    fn cor2_examples() {
        assert!(cor2_admissible(
            1,
            int(1),
            int(1),
            Index::INFINITY,
            Index::INFINITY,
            idx("2")
        )
        .unwrap());
        // phi too weak: phi/n <= 1/2 - 1/q.
        assert!(!cor2_admissible(1, int(1), rat(1, 4), idx("2"), idx("8"), idx("2")).unwrap());
    }

    #[test]
    fn cor3_examples() {
        assert!(cor3_admissible(1, int(1), idx("2"), idx("1")).unwrap());
        assert!(cor3_admissible(3, int(1), idx("2"), idx("2")).unwrap());
        assert!(!cor3_admissible(3, int(1), idx("2"), idx("6")).unwrap());
        // q in (2/3, inf] for n = 1, theta = 1, p = 2.
        assert!(cor3_admissible(1, int(1), idx("2"), Index::INFINITY).unwrap());
        assert!(!cor3_admissible(1, int(1), idx("2"), idx("2/3")).unwrap());
    }

    #[test]
    fn heisenberg_endpoints_are_open_questions() {
        assert_eq!(
            heisenberg_lp_verdict(3, idx("2")).unwrap(),
            RangeVerdict::Admissible
        );
        assert_eq!(
            heisenberg_lp_verdict(3, idx("3")).unwrap(),
            RangeVerdict::Unknown
        );
        assert_eq!(
            heisenberg_lp_verdict(3, idx("4")).unwrap(),
            RangeVerdict::Inadmissible
        );
        assert_eq!(
            heisenberg_lp_verdict(3, Index::INFINITY).unwrap(),
            RangeVerdict::Unknown
        );
        // n = 1: threshold is infinity, every finite p is in.
        assert_eq!(
            heisenberg_lp_verdict(1, idx("1000")).unwrap(),
            RangeVerdict::Admissible
        );
        assert_eq!(
            heisenberg_lp_verdict(1, Index::INFINITY).unwrap(),
            RangeVerdict::Unknown
        );
        // p = 1 is interior (the range is (0, 2n/(n-1))).
        assert_eq!(
            heisenberg_lp_verdict(5, idx("1")).unwrap(),
            RangeVerdict::Admissible
        );
    }

    #[test]
    fn delta_region_edges() {
        // n = 1: A=(1/2,1/2), B=(1/2,1/6), C=(3/4,1/4).
        let yes = |p, q| delta_n_contains(1, &RegionPoint::new(p, q)).unwrap();
        assert!(yes(rat(1, 2), rat(1, 2))); // vertex A
        assert!(yes(rat(1, 2), rat(1, 6))); // vertex B stays in
        assert!(!yes(rat(3, 4), rat(1, 4))); // vertex C excluded
        assert!(!yes(rat(5, 8), rat(5, 24))); // midpoint of BC excluded
        assert!(yes(rat(5, 8), rat(3, 8))); // midpoint of AC included
        assert!(yes(rat(9, 16), rat(5, 16))); // interior
        assert!(!yes(rat(1, 4), rat(1, 4))); // left of AB
    }

    #[test]
    fn heat_region_examples() {
        assert!(heat_region_contains(1, idx("1"), idx("2")).unwrap());
        assert!(!heat_region_contains(1, idx("1"), idx("3")).unwrap());
        assert!(heat_region_contains(2, idx("3"), idx("3")).unwrap());
        assert!(heat_region_contains(4, Index::INFINITY, Index::INFINITY).unwrap());
        assert!(!heat_region_contains(1, idx("2"), Index::INFINITY).unwrap());
        assert!(!heat_region_contains(1, idx("1/2"), idx("1")).unwrap());
        assert!(!heat_region_contains(1, idx("2"), idx("1")).unwrap());
    }

    #[test]
    fn eta_condition_boundary() {
        assert!(eta_condition_check(2.0));
        assert!(!eta_condition_check(1.0));
        assert!(!eta_condition_check(0.5));
    }

    #[test]
    fn thm5_conditions() {
        let s1 = SideParams::new(1, idx("2"), int(1), idx("2")).unwrap();
        let s2 = SideParams::new(2, idx("2"), int(1), idx("2")).unwrap();
        assert!(thm5_admissible(&s1, &s2).unwrap());
        assert!(thm5_violations(&s1, &s1).is_err());

        // k_2 must stay below (2n+4)/n = 6 for n = 1.
        let s2_big = SideParams::new(2, idx("2"), int(1), idx("6")).unwrap();
        let v = thm5_violations(&s1, &s2_big).unwrap();
        assert!(v.iter().any(|s| s.contains("(2n+4)/n")));

        // k_1 capped at 2.
        let s1_big = SideParams::new(1, idx("2"), int(1), idx("3")).unwrap();
        let v = thm5_violations(&s1_big, &s2).unwrap();
        assert!(v.iter().any(|s| s.contains("k_1")));
    }

    #[test]
    fn nls_ranges() {
        assert!(nls_violations(1, idx("4"), int(3)).is_empty());
        assert!(nls_violations(1, Index::INFINITY, int(2)).is_empty());
        assert!(!nls_violations(2, Index::INFINITY, int(2)).is_empty());
        assert!(!nls_violations(3, idx("6"), int(2)).is_empty()); // p = 2n/(n-2) endpoint
        assert!(nls_violations(3, idx("4"), int(2)).is_empty());
        assert!(!nls_violations(1, idx("4"), int(1)).is_empty()); // m > 1 strict
        assert!(!nls_violations(1, idx("4"), int(4)).is_empty()); // m <= p-1
        assert!(!nls_violations(1, idx("3"), rat(7, 2)).is_empty()); // m <= 1+4/n

        // m = p - 1 endpoint is allowed.
        assert!(nls_violations(1, idx("3"), int(2)).is_empty());
    }
}
