//! Cochain cohomology of Sullivan models, with explicit class representatives
//! and reduction of arbitrary cocycles to class coordinates.
//!
//! The reduction engine keeps an echelon of tagged rows: coboundary rows and
//! class-representative rows, inserted in that order. Rows are reduced against
//! earlier rows on insertion and never modified afterwards; a single
//! ascending-pivot pass then writes any cocycle as (coboundary) + sum of
//! representatives, which is exactly the class in the chosen basis.

use crate::cdga::{Polynomial, SullivanModel};
use crate::error::Error;
use crate::exactla::{Q, RationalMatrix};
use crate::Result;
use num::Zero;
use std::sync::Arc;

/// Echelonized quotient-space reducer: rows tagged either as relations
/// (spanning the subspace being quotiented out) or as basis classes.
#[derive(Clone, Debug)]
pub struct ClassReducer {
    ambient: usize,
    rows: Vec<ReducerRow>,
    classes: usize,
}

#[derive(Clone, Debug)]
struct ReducerRow {
    pivot: usize,
    vector: Vec<Q>,
    class_index: Option<usize>,
}

impl ClassReducer {
    pub fn new(ambient: usize) -> Self {
        ClassReducer {
            ambient,
            rows: Vec::new(),
            classes: 0,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    /// Rank of the whole echelon (relations plus classes).
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn eliminate(&self, v: &mut [Q]) -> Vec<(usize, Q)> {
        // Rows are kept sorted by pivot; one ascending pass suffices because
        // a row's entries left of its own pivot are zero.
        let mut used = Vec::new();
        for row in &self.rows {
            let c = v[row.pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (vi, ri) in v.iter_mut().zip(&row.vector) {
                *vi -= &c * ri;
            }
            used.push((row.pivot, c));
        }
        used
    }

    fn insert_reduced(&mut self, mut v: Vec<Q>, as_class: bool) -> Option<usize> {
        self.eliminate(&mut v);
        let pivot = v.iter().position(|c| !c.is_zero())?;
        let inv = v[pivot].clone().recip();
        for c in v.iter_mut() {
            *c *= &inv;
        }
        let class_index = if as_class {
            self.classes += 1;
            Some(self.classes - 1)
        } else {
            None
        };
        let at = self
            .rows
            .partition_point(|r| r.pivot < pivot);
        self.rows.insert(
            at,
            ReducerRow {
                pivot,
                vector: v,
                class_index,
            },
        );
        class_index
    }

    /// Add a relation vector (reduced away in every later reduction).
    pub fn add_relation(&mut self, v: Vec<Q>) -> bool {
        assert_eq!(v.len(), self.ambient, "relation vector length");
        self.insert_reduced(v, false).is_some()
    }

    /// Add a candidate class; returns its index if independent, and the
    /// residual vector actually stored as the representative.
    pub fn add_class(&mut self, v: Vec<Q>) -> Option<(usize, Vec<Q>)> {
        assert_eq!(v.len(), self.ambient, "class vector length");
        let mut reduced = v;
        self.eliminate(&mut reduced);
        if reduced.iter().all(|c| c.is_zero()) {
            return None;
        }
        let idx = self.insert_reduced(reduced.clone(), true)?;
        // insert_reduced re-eliminates, which is a no-op on an already
        // reduced vector apart from pivot normalization; mirror it here.
        let pivot = reduced.iter().position(|c| !c.is_zero()).unwrap();
        let inv = reduced[pivot].clone().recip();
        for c in reduced.iter_mut() {
            *c *= &inv;
        }
        Some((idx, reduced))
    }

    /// Coordinates of `v` in the class basis, or the nonzero residual if `v`
    /// is not in the span of relations and classes.
    pub fn reduce(&self, v: &[Q]) -> std::result::Result<Vec<Q>, Vec<Q>> {
        assert_eq!(v.len(), self.ambient, "reduction vector length");
        let mut work = v.to_vec();
        let mut coords = vec![Q::zero(); self.classes];
        for row in &self.rows {
            let c = work[row.pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (wi, ri) in work.iter_mut().zip(&row.vector) {
                *wi -= &c * ri;
            }
            if let Some(j) = row.class_index {
                coords[j] = c;
            }
        }
        if work.iter().all(|c| c.is_zero()) {
            Ok(coords)
        } else {
            Err(work)
        }
    }
}

/// H^k of a Sullivan model: dimension, cocycle representatives, and a reducer
/// mapping any degree-k cocycle to its coordinates in the representative
/// basis.
#[derive(Clone, Debug)]
pub struct CohomologySpace {
    pub degree: u32,
    pub representatives: Vec<Polynomial>,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    reducer: ClassReducer,
}

impl CohomologySpace {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Class coordinates of a degree-k cocycle.
    pub fn class_of(&self, model: &SullivanModel, p: &Polynomial) -> Result<Vec<Q>> {
        if p.is_zero() {
            return Ok(vec![Q::zero(); self.dim()]);
        }
        match model.homogeneous_degree(p) {
            Some(d) if d == self.degree => {}
            _ => {
                return Err(Error::NotACocycle {
                    degree: self.degree,
                })
            }
        }
        if !model.d_poly(p).is_zero() {
            return Err(Error::NotACocycle {
                degree: self.degree,
            });
        }
        let v = model.poly_to_vector(p, self.degree)?;
        self.reducer.reduce(&v).map_err(|_| Error::NotACocycle {
            degree: self.degree,
        })
    }

    /// The linear combination of representatives with the given coordinates.
    pub fn combination(&self, coords: &[Q]) -> Result<Polynomial> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "class coordinate length",
                expected: self.dim(),
                got: coords.len(),
            });
        }
        let mut p = Polynomial::zero();
        for (rep, c) in self.representatives.iter().zip(coords) {
            p = p.add(&rep.scale(c));
        }
        Ok(p)
    }
}

/// Compute H^k(model), memoized on the model.
pub fn cohomology(model: &SullivanModel, k: u32) -> Arc<CohomologySpace> {
    if let Some(hit) = model.cohomology_cache(k) {
        return hit;
    }
    let space = Arc::new(compute_cohomology(model, k));
    model.cohomology_cache_insert(k, space)
}

fn compute_cohomology(model: &SullivanModel, k: u32) -> CohomologySpace {
    let basis_k = model.basis_in_degree(k);
    let n = basis_k.len();
    let mut reducer = ClassReducer::new(n);

    let mut coboundary_dim = 0usize;
    if k >= 1 {
        for w in model.basis_in_degree(k - 1).iter() {
            let dw = model.d_poly(&Polynomial::from_term(w.clone(), num::One::one()));
            if dw.is_zero() {
                continue;
            }
            let v = model
                .poly_to_vector(&dw, k)
                .expect("differential raises degree by one");
            if reducer.add_relation(v) {
                coboundary_dim += 1;
            }
        }
    }

    // Kernel of d restricted to degree k.
    let mut columns: Vec<Vec<Q>> = Vec::with_capacity(n);
    let up = model.basis_in_degree(k + 1).len();
    for w in basis_k.iter() {
        let dw = model.d_poly(&Polynomial::from_term(w.clone(), num::One::one()));
        columns.push(
            model
                .poly_to_vector(&dw, k + 1)
                .expect("differential raises degree by one"),
        );
    }
    let d_matrix = if n == 0 {
        RationalMatrix::zero(up.max(1), 0)
    } else {
        RationalMatrix::from_columns(up, &columns)
            .expect("columns share the ambient dimension")
    };
    let kernel = d_matrix.row_reduce().kernel;

    let mut representatives = Vec::new();
    let cocycle_dim = kernel.dim();
    for v in kernel.vectors() {
        if let Some((_, stored)) = reducer.add_class(v.clone()) {
            let rep = model
                .vector_to_poly(&stored, k)
                .expect("stored vector has ambient length");
            representatives.push(rep);
        }
    }

    CohomologySpace {
        degree: k,
        representatives,
        cocycle_dim,
        coboundary_dim,
        reducer,
    }
}

/// Cohomology dimensions in degrees 0..=max.
pub fn betti_numbers(model: &SullivanModel, max: u32) -> Vec<usize> {
    (0..=max).map(|k| cohomology(model, k).dim()).collect()
}

/// Matrix of the map induced on H^k by a chain-map endomorphism, in the
/// representative basis (column j = image of representative j).
pub fn induced_map(
    model: &SullivanModel,
    endo: &crate::cdga::Endomorphism,
    k: u32,
) -> Result<RationalMatrix> {
    endo.check_chain_map(model)?;
    induced_map_unchecked(model, endo, k)
}

/// Same as `induced_map` but trusts that `endo` is a chain map.
pub fn induced_map_unchecked(
    model: &SullivanModel,
    endo: &crate::cdga::Endomorphism,
    k: u32,
) -> Result<RationalMatrix> {
    let space = cohomology(model, k);
    let dim = space.dim();
    let mut out = RationalMatrix::zero(dim, dim);
    for (j, rep) in space.representatives.iter().enumerate() {
        let image = endo.apply(model, rep);
        let coords = space.class_of(model, &image)?;
        for (i, c) in coords.into_iter().enumerate() {
            out.set(i, j, c);
        }
    }
    Ok(out)
}
