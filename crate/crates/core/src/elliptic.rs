//! Ellipticity diagnostics for Sullivan models: the formal-dimension
//! formula, necessary structural conditions on the generator degrees, and
//! cohomology-window corroboration.
//!
//! Ellipticity (finite-dimensional cohomology) is not decidable from finitely
//! many degrees, so the verdict here is "consistent": the structural
//! conditions hold and cohomology vanishes on the inspected window above the
//! formal dimension. A single violation makes the verdict "inconsistent"
//! with the violating generator or degree named.

use crate::cdga::SullivanModel;
use crate::cohomology::cohomology;
use crate::error::Error;
use crate::Result;
use serde::Serialize;

/// One structural condition outcome; `witness` is present exactly when the
/// condition fails.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub ok: bool,
    pub witness: Option<String>,
}

impl ConditionCheck {
    fn pass(name: &'static str) -> Self {
        ConditionCheck {
            name,
            ok: true,
            witness: None,
        }
    }

    fn fail(name: &'static str, witness: String) -> Self {
        ConditionCheck {
            name,
            ok: false,
            witness: Some(witness),
        }
    }
}

/// Full diagnostic record for one model.
#[derive(Clone, Debug, Serialize)]
pub struct EllipticReport {
    /// n computed from the degree formula (top odd degrees minus shifted
    /// even degrees); meaningful under the ellipticity hypothesis.
    pub formal_dimension_formula: i64,
    /// dim V^odd >= dim V^even.
    pub condition1: ConditionCheck,
    /// sum of even degrees <= n and sum of odd degrees <= 2n - 1.
    pub condition3: ConditionCheck,
    /// V^i = 0 for i >= 2n.
    pub condition4: ConditionCheck,
    /// V^i = 0 for i > n with i even.
    pub corollary_even_gap: ConditionCheck,
    /// (degree, dim H^degree) pairs inspected, typically n..=n+W.
    pub window_checks: Vec<(u32, usize)>,
    /// Window degrees strictly above n with nonzero cohomology.
    pub window_violations: Vec<u32>,
    /// dim H^n when n was part of the window (top class should survive).
    pub top_dimension: Option<usize>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Consistent,
    Inconsistent { violations: Vec<String> },
}

/// n = sum |x| over odd generators minus sum (|y| - 1) over even generators.
pub fn formal_dimension(m: &SullivanModel) -> Result<i64> {
    if m.generator_count() == 0 {
        return Err(Error::EmptyModel {
            operation: "formal dimension",
        });
    }
    let mut n = 0i64;
    for g in m.generators() {
        if g.degree % 2 == 1 {
            n += g.degree as i64;
        } else {
            n -= g.degree as i64 - 1;
        }
    }
    Ok(n)
}

/// Evaluate the structural conditions exactly against the generator list,
/// with n from the degree formula. No cohomology is computed here.
pub fn check_structure(m: &SullivanModel) -> Result<EllipticReport> {
    let n = formal_dimension(m)?;

    let odd: Vec<_> = m.generators().iter().filter(|g| g.degree % 2 == 1).collect();
    let even: Vec<_> = m.generators().iter().filter(|g| g.degree % 2 == 0).collect();

    let condition1 = if odd.len() >= even.len() {
        ConditionCheck::pass("dim V^odd >= dim V^even")
    } else {
        ConditionCheck::fail(
            "dim V^odd >= dim V^even",
            format!("{} odd < {} even", odd.len(), even.len()),
        )
    };

    let even_sum: i64 = even.iter().map(|g| g.degree as i64).sum();
    let odd_sum: i64 = odd.iter().map(|g| g.degree as i64).sum();
    let condition3 = if even_sum <= n && odd_sum < 2 * n {
        ConditionCheck::pass("degree sums bounded by n and 2n-1")
    } else {
        ConditionCheck::fail(
            "degree sums bounded by n and 2n-1",
            format!(
                "sum even = {even_sum} (limit {n}), sum odd = {odd_sum} (limit {})",
                2 * n - 1
            ),
        )
    };

    let condition4 = match m
        .generators()
        .iter()
        .find(|g| (g.degree as i64) >= 2 * n)
    {
        None => ConditionCheck::pass("V^i = 0 for i >= 2n"),
        Some(g) => ConditionCheck::fail(
            "V^i = 0 for i >= 2n",
            format!("generator `{}` has degree {} >= {}", g.name, g.degree, 2 * n),
        ),
    };

    let corollary_even_gap = match m
        .generators()
        .iter()
        .find(|g| g.degree % 2 == 0 && (g.degree as i64) > n)
    {
        None => ConditionCheck::pass("V^i = 0 for even i > n"),
        Some(g) => ConditionCheck::fail(
            "V^i = 0 for even i > n",
            format!("generator `{}` has even degree {} > {n}", g.name, g.degree),
        ),
    };

    let mut report = EllipticReport {
        formal_dimension_formula: n,
        condition1,
        condition3,
        condition4,
        corollary_even_gap,
        window_checks: Vec::new(),
        window_violations: Vec::new(),
        top_dimension: None,
        verdict: Verdict::Consistent,
    };
    report.verdict = compute_verdict(&report);
    Ok(report)
}

/// Exact cohomology dimensions over a degree interval.
pub fn vanishing_window(m: &SullivanModel, from: u32, to: u32) -> Result<Vec<(u32, usize)>> {
    if from > to {
        return Err(Error::DimensionMismatch {
            context: "vanishing window bounds",
            expected: from as usize,
            got: to as usize,
        });
    }
    Ok((from..=to).map(|k| (k, cohomology(m, k).dim())).collect())
}

/// Structural checks plus a cohomology window over n..=n+window above the
/// formal dimension. The window corroborates (never proves) ellipticity.
pub fn elliptic_report(m: &SullivanModel, window: u32) -> Result<EllipticReport> {
    let mut report = check_structure(m)?;
    let n = report.formal_dimension_formula;
    if n >= 0 {
        let from = n as u32;
        let to = from + window;
        report.window_checks = vanishing_window(m, from, to)?;
        report.top_dimension = report
            .window_checks
            .iter()
            .find(|&&(k, _)| k == from)
            .map(|&(_, d)| d);
        report.window_violations = report
            .window_checks
            .iter()
            .filter(|&&(k, d)| k > from && d != 0)
            .map(|&(k, _)| k)
            .collect();
    }
    report.verdict = compute_verdict(&report);
    Ok(report)
}

/// Default window width: max generator degree + 1, enough to catch index
/// errors in the bundled models.
pub fn default_window(m: &SullivanModel) -> u32 {
    m.max_generator_degree().unwrap_or(0) + 1
}

fn compute_verdict(r: &EllipticReport) -> Verdict {
    let mut violations = Vec::new();
    for c in [
        &r.condition1,
        &r.condition3,
        &r.condition4,
        &r.corollary_even_gap,
    ] {
        if !c.ok {
            violations.push(format!(
                "{}: {}",
                c.name,
                c.witness.as_deref().unwrap_or("violated")
            ));
        }
    }
    for &k in &r.window_violations {
        violations.push(format!(
            "H^{k} != 0 above the formal dimension {}",
            r.formal_dimension_formula
        ));
    }
    if let Some(0) = r.top_dimension {
        violations.push(format!(
            "H^{} = 0 at the claimed formal dimension",
            r.formal_dimension_formula
        ));
    }
    if violations.is_empty() {
        Verdict::Consistent
    } else {
        Verdict::Inconsistent { violations }
    }
}
