//! The Whitehead exact sequence of a minimal Sullivan model:
//!
//! ```text
//! ... -> V^k --b^k--> H^{k+1}(Lambda V^{<= k-1}) --j--> H^{k+1}(Lambda V)
//!        --p--> V^{k+1} --b^{k+1}--> H^{k+2}(Lambda V^{<= k}) -> ...
//! ```
//!
//! b^k sends a generator to the cohomology class of its differential in the
//! truncation (the differential is automatically a cocycle there, by
//! minimality). j is induced by the truncation inclusion; p extracts the
//! linear part of a representative, well defined because coboundaries of the
//! full model are decomposable. Exactness at every junction is a theorem for
//! valid models, so a verification failure here is an engine bug and is
//! reported as such.

use crate::cdga::{Polynomial, SullivanModel};
use crate::cohomology::cohomology;
use crate::error::Error;
use crate::exactla::{Q, RationalMatrix};
use crate::Result;
use num::Zero;
use serde::Serialize;

/// How a b-map behaves as a linear map, derived from its rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    Isomorphism,
    Injective,
    Zero,
    Other,
}

/// One row of the Whitehead table at degree k.
#[derive(Clone, Debug, Serialize)]
pub struct WhiteheadRow {
    pub k: u32,
    pub v_dim: usize,
    /// Matrix of b^k, shape h_trunc_dim x v_dim.
    pub b_matrix: RationalMatrix,
    pub h_trunc_dim: usize,
    pub h_full_dim: usize,
}

impl WhiteheadRow {
    /// Recomputed from the matrix, never stored.
    pub fn classification(&self) -> Classification {
        classify_matrix(&self.b_matrix)
    }
}

pub(crate) fn classify_matrix(b: &RationalMatrix) -> Classification {
    let rank = b.rank();
    let v_dim = b.cols();
    let h_dim = b.rows();
    if v_dim == 0 {
        Classification::Zero
    } else if rank == v_dim && rank == h_dim {
        Classification::Isomorphism
    } else if rank == v_dim {
        Classification::Injective
    } else if rank == 0 {
        Classification::Zero
    } else {
        Classification::Other
    }
}

/// Matrix of b^q into the cohomology of the truncation at `level`:
/// column j = class of d(v_j) in H^{q+1}(Lambda V^{<= level}).
///
/// For `level < q - 1` the differential of a degree-q generator may involve
/// generators above the truncation; that case is rejected with the offending
/// generator named.
pub fn b_map_at(m: &SullivanModel, q: u32, level: u32) -> Result<RationalMatrix> {
    let trunc = m.truncate(level)?;
    let vq = m.generators_in_degree(q);
    for &v in &vq {
        for (w, _) in m.differential_of(v).terms() {
            for &(f, _) in w.factors() {
                let fd = m.generator(f).degree;
                if fd > level {
                    return Err(Error::TruncationEscape {
                        name: m.generator(v).name.clone(),
                        truncation: level,
                        degree: fd,
                    });
                }
            }
        }
    }
    let space = cohomology(&trunc, q + 1);
    let mut out = RationalMatrix::zero(space.dim(), vq.len());
    for (j, &v) in vq.iter().enumerate() {
        // Truncations are prefixes, so the differential polynomial is
        // literally a polynomial of the truncated model.
        let coords = space.class_of(&trunc, m.differential_of(v))?;
        for (i, c) in coords.into_iter().enumerate() {
            out.set(i, j, c);
        }
    }
    Ok(out)
}

/// The Whitehead-sequence map b^q : V^q -> H^{q+1}(Lambda V^{<= q-1}).
pub fn b_map(m: &SullivanModel, q: u32) -> Result<RationalMatrix> {
    if q < 2 {
        return Err(Error::DimensionMismatch {
            context: "b^q needs q >= 2",
            expected: 2,
            got: q as usize,
        });
    }
    b_map_at(m, q, q - 1)
}

/// Matrix of the inclusion-induced map
/// H^{k+1}(Lambda V^{<= k-1}) -> H^{k+1}(Lambda V).
fn inclusion_map(m: &SullivanModel, k: u32) -> Result<RationalMatrix> {
    let trunc = m.truncate(k - 1)?;
    let src = cohomology(&trunc, k + 1);
    let dst = cohomology(m, k + 1);
    let mut out = RationalMatrix::zero(dst.dim(), src.dim());
    for (j, rep) in src.representatives.iter().enumerate() {
        let coords = dst.class_of(m, rep)?;
        for (i, c) in coords.into_iter().enumerate() {
            out.set(i, j, c);
        }
    }
    Ok(out)
}

/// Matrix of the linear-part map H^{k+1}(Lambda V) -> V^{k+1}. Well defined
/// because coboundaries are decomposable in a minimal model.
fn linear_part_map(m: &SullivanModel, k: u32) -> RationalMatrix {
    let dst_gens = m.generators_in_degree(k + 1);
    let space = cohomology(m, k + 1);
    let mut out = RationalMatrix::zero(dst_gens.len(), space.dim());
    for (j, rep) in space.representatives.iter().enumerate() {
        for (i, c) in linear_coords(rep, &dst_gens).into_iter().enumerate() {
            out.set(i, j, c);
        }
    }
    out
}

fn linear_coords(p: &Polynomial, gens: &[u16]) -> Vec<Q> {
    let mut v = vec![Q::zero(); gens.len()];
    for (w, c) in p.terms() {
        if w.length() == 1 {
            let g = w.factors()[0].0;
            if let Some(i) = gens.iter().position(|&h| h == g) {
                v[i] = c.clone();
            }
        }
    }
    v
}

fn check_junction(
    context: &str,
    k: u32,
    a: &RationalMatrix,
    b: &RationalMatrix,
) -> Result<()> {
    let composed = b.mul(a)?;
    let exact = composed.is_zero() && a.rank() == b.cols() - b.rank();
    if exact {
        Ok(())
    } else {
        Err(Error::Engine(format!(
            "Whitehead sequence fails exactness at degree {k} ({context}); \
             rank im = {}, dim ker = {}",
            a.rank(),
            b.cols() - b.rank()
        )))
    }
}

/// Rows for k = 2..=k_max with exactness verified at the three junctions of
/// each row (the truncation cohomology, the full cohomology, and V^{k+1}).
pub fn whitehead_table(m: &SullivanModel, k_max: u32) -> Result<Vec<WhiteheadRow>> {
    if k_max < 2 {
        return Err(Error::DimensionMismatch {
            context: "whitehead table needs k_max >= 2",
            expected: 2,
            got: k_max as usize,
        });
    }
    let mut rows = Vec::new();
    for k in 2..=k_max {
        let b_k = b_map(m, k)?;
        let j_k = inclusion_map(m, k)?;
        let p_k = linear_part_map(m, k);
        let b_next = b_map(m, k + 1)?;

        check_junction("truncation cohomology", k, &b_k, &j_k)?;
        check_junction("full cohomology", k, &j_k, &p_k)?;
        check_junction("generator space", k, &p_k, &b_next)?;

        rows.push(WhiteheadRow {
            k,
            v_dim: b_k.cols(),
            h_trunc_dim: b_k.rows(),
            h_full_dim: j_k.rows(),
            b_matrix: b_k,
        });
    }
    Ok(rows)
}

/// Expected behavior of b^q above the formal dimension, by parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExpectedAboveN {
    Isomorphism,
    Zero,
}

/// Expected-versus-actual record for b^q with q above the formal dimension.
#[derive(Clone, Debug, Serialize)]
pub struct BClassification {
    pub q: u32,
    pub v_dim: usize,
    pub h_dim: usize,
    pub rank: usize,
    pub actual: Classification,
    pub expected: ExpectedAboveN,
    /// Whether the matrix satisfies the expected property exactly
    /// (isomorphism for odd q, zero map for even q). A mismatch is a
    /// falsification witness for the ellipticity hypothesis.
    pub consistent: bool,
}

/// Classify b^q for q > n against the parity prediction.
pub fn classify_b(m: &SullivanModel, n: i64, q: u32) -> Result<BClassification> {
    if (q as i64) <= n {
        return Err(Error::DimensionMismatch {
            context: "classification degree must exceed the formal dimension",
            expected: (n + 1).max(0) as usize,
            got: q as usize,
        });
    }
    let b = b_map(m, q)?;
    let rank = b.rank();
    let (v_dim, h_dim) = (b.cols(), b.rows());
    let expected = if q % 2 == 1 {
        ExpectedAboveN::Isomorphism
    } else {
        ExpectedAboveN::Zero
    };
    let consistent = match expected {
        ExpectedAboveN::Isomorphism => rank == v_dim && rank == h_dim,
        ExpectedAboveN::Zero => rank == 0,
    };
    Ok(BClassification {
        q,
        v_dim,
        h_dim,
        rank,
        actual: classify_matrix(&b),
        expected,
        consistent,
    })
}
