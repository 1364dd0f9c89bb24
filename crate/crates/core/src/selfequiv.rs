//! Self-equivalence machinery for minimal Sullivan models.
//!
//! Three layers:
//!
//! * commuting-square checks pairing a linear automorphism of the top-degree
//!   generators with a self-map of the base truncation (`check_diagram_d`);
//! * a degree-by-degree reduction certificate showing that self-equivalences
//!   of the whole model are detected on the truncation at the formal
//!   dimension (`reduction_chain`);
//! * an exact solver for the group of monomial self-equivalences, the maps
//!   sending each generator to a scalar multiple of a generator of the same
//!   degree (`monomial_group`). Chain-map conditions become multiplicative
//!   relations among the scalars; after eliminating the determined ones the
//!   rest is an integer lattice solved by Smith normal form.

use crate::cdga::{Endomorphism, Polynomial, SullivanModel};
use crate::cohomology::{cohomology, induced_map};
use crate::elliptic::{check_structure, EllipticReport};
use crate::error::Error;
use crate::exactla::{
    q_nth_root, q_pow, q_to_string, qi, smith_normal_form, IntegerMatrix, Q, RationalMatrix,
};
use crate::whitehead::{b_map, b_map_at};
use crate::Result;
use num::traits::ToPrimitive;
use num::{BigInt, One, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use std::collections::HashMap;

/// Permutation branches are enumerated exhaustively up to this count.
pub const BRANCH_LIMIT: u128 = 1_000_000;

/// Result of the commuting-square check for a pair (xi, alpha): xi a linear
/// automorphism of V^q, alpha a self-map of the truncation at `level`.
#[derive(Clone, Debug, Serialize)]
pub struct DiagramPairD {
    pub q: u32,
    pub level: u32,
    pub commutes: bool,
    /// b composed with xi.
    pub lhs: RationalMatrix,
    /// H(alpha) composed with b.
    pub rhs: RationalMatrix,
}

/// Check b . xi = H^{q+1}(alpha) . b for a model of the form
/// Lambda(V^q + V^{<= n}) with q > n.
pub fn check_diagram_d(
    m: &SullivanModel,
    n: u32,
    q: u32,
    xi: &RationalMatrix,
    alpha: &Endomorphism,
) -> Result<DiagramPairD> {
    if q <= n {
        return Err(Error::DimensionMismatch {
            context: "the moved stage must sit strictly above the base truncation",
            expected: (n + 1) as usize,
            got: q as usize,
        });
    }
    for g in m.generators() {
        if g.degree > n && g.degree != q {
            return Err(Error::DimensionMismatch {
                context: "model must split as one stage over the base truncation",
                expected: n as usize,
                got: g.degree as usize,
            });
        }
    }
    let vq = m.dim_v(q);
    if xi.rows() != vq || xi.cols() != vq {
        return Err(Error::DimensionMismatch {
            context: "xi acts on the top-degree generator space",
            expected: vq,
            got: xi.rows().max(xi.cols()),
        });
    }
    if xi.rank() != vq {
        return Err(Error::NotInvertible {
            context: "xi on the top-degree generators",
        });
    }
    let trunc = m.truncate(n)?;
    let h_alpha = induced_map(&trunc, alpha, q + 1)?;
    let b = b_map_at(m, q, n)?;
    let lhs = b.mul(xi)?;
    let rhs = h_alpha.mul(&b)?;
    let commutes = lhs == rhs;
    Ok(DiagramPairD {
        q,
        level: n,
        commutes,
        lhs,
        rhs,
    })
}

/// Dimension of Hom(V^q, H^q(Lambda V^{<= level})), the space of corrections
/// acting trivially on the commuting-square data.
pub fn kernel_term_dim(m: &SullivanModel, q: u32, level: u32) -> Result<usize> {
    let trunc = m.truncate(level)?;
    Ok(m.dim_v(q) * cohomology(&trunc, q).dim())
}

fn ensure_structure(m: &SullivanModel) -> Result<EllipticReport> {
    let report = check_structure(m)?;
    for c in [
        &report.condition1,
        &report.condition3,
        &report.condition4,
        &report.corollary_even_gap,
    ] {
        if !c.ok {
            let reason = match &c.witness {
                Some(w) => format!("{}: {}", c.name, w),
                None => c.name.to_string(),
            };
            return Err(Error::NotElliptic { reason });
        }
    }
    if report.formal_dimension_formula < 0 {
        return Err(Error::NotElliptic {
            reason: "the degree formula gives a negative formal dimension".to_string(),
        });
    }
    Ok(report)
}

/// Why one truncation step preserves the self-equivalence group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepEvidence {
    /// V^q = 0, so the models agree on the nose.
    VanishingGenerators,
    /// b^q is an isomorphism and the correction space vanishes.
    BIsoAndKernelZero,
    /// Only the correction space vanishes; not sufficient by itself.
    KernelZeroOnly,
    /// Neither argument applies at this degree.
    Obstructed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub q: u32,
    pub v_dim: usize,
    pub b_rank: usize,
    /// dim H^{q+1}(Lambda V^{<= q-1}).
    pub h_dim: usize,
    /// dim Hom(V^q, H^q(Lambda V^{<= q-1})).
    pub kernel_term: usize,
    pub evidence: StepEvidence,
    pub reduces: bool,
}

/// A checkable record of the descent E(Lambda V) = E(Lambda V^{<= final}).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionCertificate {
    pub formal_dimension: i64,
    pub top_degree: u32,
    pub steps: Vec<ReductionStep>,
    pub complete: bool,
    pub final_level: u32,
}

/// Walk down from the top generator degree to the formal dimension, one
/// degree at a time, recording why each truncation preserves the group of
/// self-equivalences. Stops at the first degree without a valid argument.
pub fn reduction_chain(m: &SullivanModel) -> Result<ReductionCertificate> {
    let report = ensure_structure(m)?;
    let n = report.formal_dimension_formula;
    let top = m.max_generator_degree().unwrap_or(0);
    let mut steps = Vec::new();
    let mut complete = true;
    let mut final_level = top.min(n.max(0) as u32);
    let mut q = top;
    while i64::from(q) > n {
        let v_dim = m.dim_v(q);
        let b = b_map(m, q)?;
        let b_rank = b.rank();
        let h_dim = b.rows();
        let kernel_term = kernel_term_dim(m, q, q - 1)?;
        let (evidence, reduces) = if v_dim == 0 {
            (StepEvidence::VanishingGenerators, true)
        } else if q.is_multiple_of(2) {
            (StepEvidence::Obstructed, false)
        } else {
            let iso = b_rank == v_dim && b_rank == h_dim;
            if iso && kernel_term == 0 {
                (StepEvidence::BIsoAndKernelZero, true)
            } else if kernel_term == 0 {
                (StepEvidence::KernelZeroOnly, false)
            } else {
                (StepEvidence::Obstructed, false)
            }
        };
        steps.push(ReductionStep {
            q,
            v_dim,
            b_rank,
            h_dim,
            kernel_term,
            evidence,
            reduces,
        });
        if !reduces {
            complete = false;
            final_level = q;
            break;
        }
        q -= 1;
    }
    Ok(ReductionCertificate {
        formal_dimension: n,
        top_degree: top,
        steps,
        complete,
        final_level,
    })
}

/// Recompute the chain and compare against a stored certificate.
pub fn verify_certificate(m: &SullivanModel, cert: &ReductionCertificate) -> Result<bool> {
    Ok(reduction_chain(m)? == *cert)
}

/// Upper bound on the least k such that self-maps inducing isomorphisms on
/// homotopy through degree k are already self-equivalences.
#[derive(Clone, Debug, Serialize)]
pub struct SelfClosenessBound {
    pub formal_dimension: i64,
    pub bound: i64,
    pub certificate: String,
}

pub fn self_closeness_bound(m: &SullivanModel) -> Result<SelfClosenessBound> {
    let report = ensure_structure(m)?;
    let n = report.formal_dimension_formula;
    Ok(SelfClosenessBound {
        formal_dimension: n,
        bound: n,
        certificate: format!(
            "a self-map inducing isomorphisms on the generator spaces through degree {n} \
             is a self-equivalence; the group is detected on the truncation at {n}"
        ),
    })
}

/// One monomial scalar expressed over the base variables (the generators
/// with zero differential): coeff * prod base_j ^ exponents_j.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialValue {
    pub coeff: Q,
    pub exponents: Vec<i64>,
}

impl MonomialValue {
    fn unit(n: usize) -> Self {
        MonomialValue {
            coeff: Q::one(),
            exponents: vec![0; n],
        }
    }

    fn mul_pow(&mut self, other: &MonomialValue, e: i64) {
        self.coeff *= q_pow(&other.coeff, e);
        for (a, b) in self.exponents.iter_mut().zip(&other.exponents) {
            *a += b * e;
        }
    }

    pub fn eval(&self, base: &[Q]) -> Q {
        let mut out = self.coeff.clone();
        for (c, e) in base.iter().zip(&self.exponents) {
            if *e != 0 {
                out *= q_pow(c, *e);
            }
        }
        out
    }
}

impl Serialize for MonomialValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MonomialValue", 2)?;
        st.serialize_field("coeff", &q_to_string(&self.coeff))?;
        st.serialize_field("exponents", &self.exponents)?;
        st.end()
    }
}

fn ser_q_tuples<S: Serializer>(
    v: &[Vec<Q>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<Vec<String>> = v
        .iter()
        .map(|t| t.iter().map(q_to_string).collect())
        .collect();
    strings.serialize(s)
}

/// One permutation branch of the monomial solver.
#[derive(Clone, Debug, Serialize)]
pub struct MonomialBranch {
    /// Generator i maps to a scalar multiple of generator permutation[i].
    pub permutation: Vec<u16>,
    /// Whether the permutation matches the differential supports at all.
    pub admissible: bool,
    /// Whether the scalar relations have a solution.
    pub consistent: bool,
    /// Rational parameters that remain free.
    pub free_rank: usize,
    /// Number of independent sign choices (even invariant factors).
    pub torsion_2: usize,
    /// Number of solutions in this branch; None when a free parameter makes
    /// it infinite.
    pub solution_count: Option<u128>,
    /// Verified scalar tuples (free parameters at 1, plus one sample at 2
    /// when the branch is infinite).
    #[serde(serialize_with = "ser_q_tuples")]
    pub scalars: Vec<Vec<Q>>,
    /// Scalar of each generator expressed over the base variables, when
    /// determined by the elimination.
    pub determined: Vec<Option<MonomialValue>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonomialReport {
    pub base_variables: Vec<String>,
    pub branches: Vec<MonomialBranch>,
    pub solvable_branches: usize,
    pub max_free_rank: usize,
    /// Total number of monomial self-equivalences, None when infinite.
    pub total_order: Option<u128>,
    pub description: String,
}

fn factorial(n: usize) -> u128 {
    let mut out: u128 = 1;
    for k in 2..=n as u128 {
        out = out.saturating_mul(k);
    }
    out
}

fn block_permutations(m: &SullivanModel) -> Result<Vec<Vec<u16>>> {
    let count = m.generator_count();
    let mut blocks: Vec<Vec<u16>> = Vec::new();
    for i in 0..count as u16 {
        let deg = m.generator(i).degree;
        match blocks.last_mut() {
            Some(block) if m.generator(block[0]).degree == deg => block.push(i),
            _ => blocks.push(vec![i]),
        }
    }
    let mut candidates: u128 = 1;
    for b in &blocks {
        candidates = candidates.saturating_mul(factorial(b.len()));
    }
    if candidates > BRANCH_LIMIT {
        return Err(Error::BranchLimit {
            candidates,
            limit: BRANCH_LIMIT,
        });
    }
    let mut perms: Vec<Vec<u16>> = vec![(0..count as u16).collect()];
    for block in blocks.iter().filter(|b| b.len() >= 2) {
        use itertools::Itertools;
        let arrangements: Vec<Vec<u16>> = block
            .iter()
            .copied()
            .permutations(block.len())
            .collect();
        let mut next = Vec::with_capacity(perms.len() * arrangements.len());
        for p in &perms {
            for arr in &arrangements {
                let mut q = p.clone();
                for (slot, &target) in block.iter().zip(arr) {
                    q[*slot as usize] = target;
                }
                next.push(q);
            }
        }
        perms = next;
    }
    Ok(perms)
}

fn inadmissible(permutation: Vec<u16>, determined: Vec<Option<MonomialValue>>) -> MonomialBranch {
    MonomialBranch {
        permutation,
        admissible: false,
        consistent: false,
        free_rank: 0,
        torsion_2: 0,
        solution_count: Some(0),
        scalars: Vec::new(),
        determined,
    }
}

fn analyze_branch(m: &SullivanModel, perm: Vec<u16>) -> Result<MonomialBranch> {
    let count = m.generator_count();
    let base: Vec<u16> = (0..count as u16)
        .filter(|&i| m.differential_of(i).is_zero())
        .collect();
    let col_of: HashMap<u16, usize> = base.iter().enumerate().map(|(c, &i)| (i, c)).collect();
    let nb = base.len();

    let mut determined: Vec<Option<MonomialValue>> = vec![None; count];
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut rhs: Vec<Q> = Vec::new();

    for i in 0..count as u16 {
        let di = m.differential_of(i);
        let dt = m.differential_of(perm[i as usize]);
        if di.is_zero() {
            if !dt.is_zero() {
                return Ok(inadmissible(perm, determined));
            }
            let mut v = MonomialValue::unit(nb);
            v.exponents[col_of[&i]] = 1;
            determined[i as usize] = Some(v);
            continue;
        }
        if dt.is_zero() || dt.len() != di.len() {
            return Ok(inadmissible(perm, determined));
        }
        let mut first = true;
        for (w, a) in di.terms() {
            let mut flat = Vec::new();
            for &(g, e) in w.factors() {
                for _ in 0..e {
                    flat.push(perm[g as usize]);
                }
            }
            let Some((sw, sign)) = m.normalize_word(&flat) else {
                return Ok(inadmissible(perm, determined));
            };
            let bcoeff = dt.coefficient(&sw);
            if bcoeff.is_zero() {
                return Ok(inadmissible(perm, determined));
            }
            let mut lhs = MonomialValue::unit(nb);
            for &(g, e) in w.factors() {
                let Some(vg) = determined[g as usize].clone() else {
                    return Err(Error::Engine(
                        "monomial elimination met an undetermined factor".into(),
                    ));
                };
                lhs.mul_pow(&vg, i64::from(e));
            }
            let nu = bcoeff / (a * qi(i64::from(sign)));
            if first {
                determined[i as usize] = Some(MonomialValue {
                    coeff: &lhs.coeff / &nu,
                    exponents: lhs.exponents.clone(),
                });
                first = false;
            } else {
                let vi = determined[i as usize].clone().expect("set by first word");
                let row: Vec<i64> = lhs
                    .exponents
                    .iter()
                    .zip(&vi.exponents)
                    .map(|(l, v)| l - v)
                    .collect();
                rows.push(row);
                rhs.push(nu * vi.coeff / &lhs.coeff);
            }
        }
    }

    // Solve the multiplicative lattice system base^rows = rhs.
    let nrows = rows.len();
    let mut consistent = true;
    let mut roots: Vec<(Q, bool)> = Vec::new();
    let mut v_i64: Option<Vec<Vec<i64>>> = None;
    let mut rank = 0;
    if nrows > 0 {
        let a = IntegerMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )?;
        let snf = smith_normal_form(&a);
        rank = snf.rank;
        for r in 0..nrows {
            let mut mu = Q::one();
            for (s, nu) in rhs.iter().enumerate() {
                let e = snf.u.entry(r, s).to_i64().ok_or_else(|| {
                    Error::Engine("lattice transform entry exceeds 64 bits".into())
                })?;
                if e != 0 {
                    mu *= q_pow(nu, e);
                }
            }
            if r < snf.rank {
                let d = snf.diagonal[r].to_i64().ok_or_else(|| {
                    Error::Engine("invariant factor exceeds 64 bits".into())
                })?;
                let (d_abs, mu_eff) = if d < 0 {
                    ((-d) as u32, mu.recip())
                } else {
                    (d as u32, mu)
                };
                match q_nth_root(&mu_eff, d_abs) {
                    Some(root) => roots.push((root, d_abs % 2 == 0)),
                    None => {
                        consistent = false;
                        break;
                    }
                }
            } else if !mu.is_one() {
                consistent = false;
                break;
            }
        }
        let mut vm = vec![vec![0i64; nb]; nb];
        for (j, row) in vm.iter_mut().enumerate() {
            for (k, entry) in row.iter_mut().enumerate() {
                *entry = snf.v.entry(j, k).to_i64().ok_or_else(|| {
                    Error::Engine("lattice transform entry exceeds 64 bits".into())
                })?;
            }
        }
        v_i64 = Some(vm);
    }
    let free_rank = nb - rank;
    let torsion_2 = roots.iter().filter(|(_, even)| *even).count();
    let solution_count = if !consistent {
        Some(0)
    } else if free_rank > 0 {
        None
    } else {
        Some(1u128 << torsion_2.min(127))
    };

    let mut scalars = Vec::new();
    if consistent {
        let enumerated = if torsion_2 <= 12 { 1usize << torsion_2 } else { 1 };
        for pattern in 0..enumerated {
            scalars.push(branch_solution(
                m, &perm, &base, &determined, &roots, v_i64.as_deref(), nb, pattern, &Q::one(),
            )?);
        }
        if free_rank > 0 {
            scalars.push(branch_solution(
                m, &perm, &base, &determined, &roots, v_i64.as_deref(), nb, 0, &qi(2),
            )?);
        }
    }

    Ok(MonomialBranch {
        permutation: perm,
        admissible: true,
        consistent,
        free_rank,
        torsion_2,
        solution_count,
        scalars,
        determined,
    })
}

/// Materialize and verify one solution of a consistent branch.
#[allow(clippy::too_many_arguments)]
fn branch_solution(
    m: &SullivanModel,
    perm: &[u16],
    base: &[u16],
    determined: &[Option<MonomialValue>],
    roots: &[(Q, bool)],
    v_i64: Option<&[Vec<i64>]>,
    nb: usize,
    sign_pattern: usize,
    free_value: &Q,
) -> Result<Vec<Q>> {
    let mut sigma = vec![free_value.clone(); nb];
    let mut bit = 0;
    for (r, (root, even)) in roots.iter().enumerate() {
        let mut v = root.clone();
        if *even {
            if sign_pattern >> bit & 1 == 1 {
                v = -v;
            }
            bit += 1;
        }
        sigma[r] = v;
    }
    let base_scalars: Vec<Q> = match v_i64 {
        Some(vm) => (0..nb)
            .map(|j| {
                let mut t = Q::one();
                for (k, s) in sigma.iter().enumerate() {
                    if vm[j][k] != 0 {
                        t *= q_pow(s, vm[j][k]);
                    }
                }
                t
            })
            .collect(),
        None => sigma,
    };
    let _ = base;
    let full: Vec<Q> = determined
        .iter()
        .map(|v| v.as_ref().expect("all scalars determined").eval(&base_scalars))
        .collect();
    let endo = Endomorphism::monomial(m, perm, &full)?;
    endo.check_chain_map(m).map_err(|e| {
        Error::Engine(format!("monomial solution failed verification: {e}"))
    })?;
    Ok(full)
}

/// Enumerate all degree-preserving permutation branches and solve the scalar
/// relations exactly in each one.
pub fn monomial_group(m: &SullivanModel) -> Result<MonomialReport> {
    let perms = block_permutations(m)?;
    let mut branches = Vec::with_capacity(perms.len());
    for p in perms {
        branches.push(analyze_branch(m, p)?);
    }
    let live: Vec<&MonomialBranch> = branches
        .iter()
        .filter(|b| b.admissible && b.consistent)
        .collect();
    let solvable_branches = live.len();
    let max_free_rank = live.iter().map(|b| b.free_rank).max().unwrap_or(0);
    let total_order = if max_free_rank > 0 {
        None
    } else {
        Some(
            live.iter()
                .map(|b| b.solution_count.unwrap_or(0))
                .sum::<u128>(),
        )
    };
    let base_variables = (0..m.generator_count() as u16)
        .filter(|&i| m.differential_of(i).is_zero())
        .map(|i| m.generator(i).name.clone())
        .collect();
    let description = match total_order {
        None => format!(
            "infinite: a scaling family with {max_free_rank} free rational parameter(s) survives"
        ),
        Some(t) => format!(
            "finite of order {t} across {solvable_branches} solvable permutation branch(es)"
        ),
    };
    Ok(MonomialReport {
        base_variables,
        branches,
        solvable_branches,
        max_free_rank,
        total_order,
        description,
    })
}

/// Build the member at parameter `a` of the scaling family attached to a
/// kernel vector of the top-degree boundary map: the generator combination v
/// scales by a while everything else is fixed, corrected by a primitive of
/// d(v) taken in the truncation.
pub fn scaling_family_member(
    m: &SullivanModel,
    q: u32,
    kernel: &[Q],
    a: &Q,
) -> Result<Endomorphism> {
    let gens = m.generators_in_degree(q);
    if kernel.len() != gens.len() {
        return Err(Error::DimensionMismatch {
            context: "kernel vector over the degree-q generators",
            expected: gens.len(),
            got: kernel.len(),
        });
    }
    let Some(j0) = kernel.iter().position(|c| !c.is_zero()) else {
        return Err(Error::Engine("scaling family needs a nonzero kernel vector".into()));
    };
    let id = Endomorphism::identity(m);
    let mut v = Polynomial::zero();
    for (j, c) in kernel.iter().enumerate() {
        if !c.is_zero() {
            v = v.add(&id.image_of(gens[j]).scale(c));
        }
    }
    let dv = m.apply_differential(&v)?;
    let trunc = m.truncate(q - 1)?;
    let w0 = if dv.is_zero() {
        Polynomial::zero()
    } else {
        // Solve d(w0) = d(v) inside the truncation; solvable exactly because
        // the kernel vector has trivial boundary class there.
        let basis_q = trunc.basis_in_degree(q);
        let mut mat = RationalMatrix::zero(trunc.chain_dim(q + 1), basis_q.len());
        for j in 0..basis_q.len() {
            let mut e = vec![Q::zero(); basis_q.len()];
            e[j] = Q::one();
            let wpoly = trunc.vector_to_poly(&e, q)?;
            let dw = trunc.apply_differential(&wpoly)?;
            for (i, c) in trunc.poly_to_vector(&dw, q + 1)?.into_iter().enumerate() {
                mat.set(i, j, c);
            }
        }
        let rhs = trunc.poly_to_vector(&dv, q + 1)?;
        let sol = mat.solve(&rhs)?.ok_or_else(|| {
            Error::Engine("kernel vector has no boundary primitive in the truncation".into())
        })?;
        trunc.vector_to_poly(&sol.particular, q)?
    };
    let factor = (a - Q::one()) / kernel[j0].clone();
    let image = id.image_of(gens[j0]).add(&v.sub(&w0).scale(&factor));
    Endomorphism::from_images(m, &[(m.generator(gens[j0]).name.clone(), image)])
}

/// One sufficient criterion for the self-equivalence group to be infinite.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub name: &'static str,
    pub fires: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InfinitenessReport {
    pub fires: bool,
    pub criteria: Vec<CriterionOutcome>,
}

/// Evaluate the implemented infiniteness criteria. Firing is a proof; not
/// firing decides nothing.
pub fn infiniteness_criteria(m: &SullivanModel) -> Result<InfinitenessReport> {
    let Some(top) = m.max_generator_degree() else {
        return Err(Error::EmptyModel {
            operation: "infiniteness criteria",
        });
    };
    let mut criteria = Vec::new();

    // A kernel vector of the top-degree boundary map generates a rational
    // scaling family of self-equivalences.
    let b = b_map(m, top)?;
    let kernel = b.row_reduce().kernel;
    let fires_kernel = kernel.dim() > 0;
    let witness = if fires_kernel {
        let kv = &kernel.vectors()[0];
        let member = scaling_family_member(m, top, kv, &qi(2))?;
        member.check_chain_map(m).map_err(|e| {
            Error::Engine(format!("scaling family member failed verification: {e}"))
        })?;
        let gens = m.generators_in_degree(top);
        let id = Endomorphism::identity(m);
        let mut v = Polynomial::zero();
        for (j, c) in kv.iter().enumerate() {
            if !c.is_zero() {
                v = v.add(&id.image_of(gens[j]).scale(c));
            }
        }
        Some(format!(
            "the boundary map in degree {top} kills v = {}; scaling v by any nonzero \
             rational extends to a self-equivalence",
            m.poly_to_string(&v)
        ))
    } else {
        None
    };
    criteria.push(CriterionOutcome {
        name: "top-degree boundary kernel",
        fires: fires_kernel,
        witness,
    });

    // Two-connected models with generators at the formal dimension carry
    // infinitely many self-equivalences.
    let two_connected = m.min_generator_degree().is_some_and(|d| d >= 3);
    let structure = check_structure(m)?;
    let structural_ok = [
        &structure.condition1,
        &structure.condition3,
        &structure.condition4,
        &structure.corollary_even_gap,
    ]
    .iter()
    .all(|c| c.ok);
    let n = structure.formal_dimension_formula;
    let fires_top =
        two_connected && structural_ok && n >= 0 && m.dim_v(n as u32) > 0;
    criteria.push(CriterionOutcome {
        name: "two-connected generators at the formal dimension",
        fires: fires_top,
        witness: if fires_top {
            Some(format!(
                "no generators below degree 3 and dim V^{n} = {} at the formal dimension {n}",
                m.dim_v(n as u32)
            ))
        } else {
            None
        },
    });

    Ok(InfinitenessReport {
        fires: criteria.iter().any(|c| c.fires),
        criteria,
    })
}
