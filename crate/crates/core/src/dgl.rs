//! Free differential graded Lie algebras over the rationals.
//!
//! Elements are represented faithfully in the tensor algebra: a bracket
//! expands as the graded commutator, [X, Y] = XY - (-1)^{|X||Y|} YX. All
//! graded Lie identities (antisymmetry, Jacobi, vanishing of even squares)
//! hold automatically in that representation, so linear algebra over tensor
//! words settles every membership and rank question exactly.
//!
//! The differential lowers degree by one, is a derivation of the bracket, and
//! must take decomposable values; consequently boundaries have no linear
//! part, which is what makes the linear-part map on homology well defined.

use crate::cdga::SullivanModel;
use crate::cohomology::{cohomology, ClassReducer};
use crate::error::Error;
use crate::exactla::{q_to_string, Q, RationalMatrix};
use crate::whitehead::{classify_matrix, Classification};
use crate::Result;
use num::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// A word in the tensor algebra: a sequence of generator indices.
pub type TensorWord = Vec<u16>;

/// A rational combination of bracket expressions.
pub type LieCombination = Vec<(Q, BracketExpression)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieGenerator {
    pub name: String,
    pub degree: u32,
}

/// An iterated bracket over generator indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BracketExpression {
    Leaf(u16),
    Bracket(Box<BracketExpression>, Box<BracketExpression>),
}

/// A bracket expression over generator names, resolved at build time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedBracket {
    Leaf(String),
    Bracket(Box<NamedBracket>, Box<NamedBracket>),
}

pub fn leaf(name: &str) -> NamedBracket {
    NamedBracket::Leaf(name.to_string())
}

pub fn bracket(a: NamedBracket, b: NamedBracket) -> NamedBracket {
    NamedBracket::Bracket(Box::new(a), Box::new(b))
}

struct TensorBasis {
    words: Vec<TensorWord>,
    index: HashMap<TensorWord, usize>,
}

/// A basis element of the free Lie algebra in one degree, kept both as a
/// bracket expression and as its tensor-coordinate vector.
pub struct LieBasisElement {
    pub expr: BracketExpression,
    pub tensor: Vec<Q>,
}

#[derive(Default)]
struct LieCaches {
    tensor: Mutex<HashMap<u32, Arc<TensorBasis>>>,
    basis: Mutex<HashMap<u32, Arc<Vec<LieBasisElement>>>>,
    homology: Mutex<HashMap<u32, Arc<LieHomology>>>,
    truncations: Mutex<HashMap<u32, FreeLieModel>>,
}

/// A free graded Lie algebra with a decomposable differential of degree -1.
pub struct FreeLieModel {
    generators: Vec<LieGenerator>,
    differentials: Vec<LieCombination>,
    caches: Arc<LieCaches>,
}

impl Clone for FreeLieModel {
    fn clone(&self) -> Self {
        FreeLieModel {
            generators: self.generators.clone(),
            differentials: self.differentials.clone(),
            caches: Arc::clone(&self.caches),
        }
    }
}

impl PartialEq for FreeLieModel {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators && self.differentials == other.differentials
    }
}

impl std::fmt::Debug for FreeLieModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FreeLieModel")
            .field("generators", &self.generators)
            .field("differentials", &self.differentials)
            .finish()
    }
}

/// Builder that accepts generators and differentials in any order and by
/// name; `build` sorts generators canonically and validates the result.
#[derive(Default)]
pub struct LieModelBuilder {
    generators: Vec<LieGenerator>,
    differentials: BTreeMap<String, Vec<(Q, NamedBracket)>>,
}

impl LieModelBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn generator(mut self, name: &str, degree: u32) -> Self {
        self.generators.push(LieGenerator {
            name: name.to_string(),
            degree,
        });
        self
    }

    pub fn d(mut self, name: &str, image: Vec<(Q, NamedBracket)>) -> Self {
        self.differentials.insert(name.to_string(), image);
        self
    }

    pub fn build(mut self) -> Result<FreeLieModel> {
        self.generators
            .sort_by(|a, b| (a.degree, &a.name).cmp(&(b.degree, &b.name)));
        let index: HashMap<&str, u16> = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.name.as_str(), i as u16))
            .collect();
        let mut differentials = vec![Vec::new(); self.generators.len()];
        for (name, image) in &self.differentials {
            let Some(&i) = index.get(name.as_str()) else {
                return Err(Error::UnknownGenerator { name: name.clone() });
            };
            let mut resolved = Vec::new();
            for (c, expr) in image {
                if c.is_zero() {
                    continue;
                }
                resolved.push((c.clone(), resolve(expr, &index)?));
            }
            differentials[i as usize] = resolved;
        }
        FreeLieModel::new(self.generators, differentials)
    }
}

fn resolve(e: &NamedBracket, index: &HashMap<&str, u16>) -> Result<BracketExpression> {
    match e {
        NamedBracket::Leaf(name) => index
            .get(name.as_str())
            .map(|&i| BracketExpression::Leaf(i))
            .ok_or_else(|| Error::UnknownGenerator { name: name.clone() }),
        NamedBracket::Bracket(a, b) => Ok(BracketExpression::Bracket(
            Box::new(resolve(a, index)?),
            Box::new(resolve(b, index)?),
        )),
    }
}

impl FreeLieModel {
    /// Expects generators already in canonical (degree, name) order is NOT
    /// required: they are sorted here. Validates names, degrees, homogeneity,
    /// decomposability of the differential, and d^2 = 0.
    pub fn new(
        mut generators: Vec<LieGenerator>,
        differentials: Vec<LieCombination>,
    ) -> Result<FreeLieModel> {
        if generators.len() != differentials.len() {
            return Err(Error::DimensionMismatch {
                context: "one differential per generator",
                expected: generators.len(),
                got: differentials.len(),
            });
        }
        if generators.len() > u16::MAX as usize {
            return Err(Error::Engine("too many generators".into()));
        }
        // Keep differentials aligned while sorting canonically.
        let mut paired: Vec<(LieGenerator, LieCombination)> =
            generators.drain(..).zip(differentials).collect();
        let before: Vec<(u32, String)> = paired
            .iter()
            .map(|(g, _)| (g.degree, g.name.clone()))
            .collect();
        paired.sort_by(|a, b| (a.0.degree, &a.0.name).cmp(&(b.0.degree, &b.0.name)));
        let remap: Vec<u16> = before
            .iter()
            .map(|key| {
                paired
                    .iter()
                    .position(|(g, _)| (g.degree, &g.name) == (key.0, &key.1))
                    .unwrap_or(0) as u16
            })
            .collect();
        let generators: Vec<LieGenerator> = paired.iter().map(|(g, _)| g.clone()).collect();
        let differentials: Vec<LieCombination> = paired
            .into_iter()
            .map(|(_, d)| {
                d.into_iter()
                    .map(|(c, e)| (c, remap_expr(e, &remap)))
                    .collect()
            })
            .collect();

        let model = FreeLieModel {
            generators,
            differentials,
            caches: Arc::new(LieCaches::default()),
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for g in &self.generators {
            if g.degree < 1 {
                return Err(Error::DegreeTooSmall {
                    name: g.name.clone(),
                    degree: g.degree,
                });
            }
            if !seen.insert(g.name.clone()) {
                return Err(Error::DuplicateGenerator {
                    name: g.name.clone(),
                });
            }
        }
        for (i, image) in self.differentials.iter().enumerate() {
            let g = &self.generators[i];
            let expected = g.degree - 1;
            for (_, expr) in image {
                let found = self.expression_degree(expr);
                if found != expected {
                    return Err(Error::NonHomogeneousDifferential {
                        name: g.name.clone(),
                        expected,
                        found,
                    });
                }
                if matches!(expr, BracketExpression::Leaf(_)) {
                    return Err(Error::NotMinimal {
                        name: g.name.clone(),
                        word: self.expression_to_string(expr),
                    });
                }
            }
        }
        // d^2 = 0, checked in tensor coordinates.
        for (i, g) in self.generators.iter().enumerate() {
            let once = self.differentials[i].clone();
            let twice = self.delta_combination(&once);
            let expanded = self.expand_combination(&twice);
            if !expanded.is_empty() {
                return Err(Error::DifferentialSquareNonzero {
                    name: g.name.clone(),
                    remainder: self.combination_to_string(&twice),
                });
            }
        }
        Ok(())
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[LieGenerator] {
        &self.generators
    }

    pub fn generator(&self, i: u16) -> &LieGenerator {
        &self.generators[i as usize]
    }

    pub fn differential_of(&self, i: u16) -> &LieCombination {
        &self.differentials[i as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<u16> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .map(|i| i as u16)
    }

    pub fn generators_in_degree(&self, q: u32) -> Vec<u16> {
        (0..self.generators.len() as u16)
            .filter(|&i| self.generators[i as usize].degree == q)
            .collect()
    }

    pub fn dim_w(&self, q: u32) -> usize {
        self.generators_in_degree(q).len()
    }

    pub fn max_generator_degree(&self) -> Option<u32> {
        self.generators.iter().map(|g| g.degree).max()
    }

    pub fn expression_degree(&self, e: &BracketExpression) -> u32 {
        match e {
            BracketExpression::Leaf(i) => self.generators[*i as usize].degree,
            BracketExpression::Bracket(a, b) => {
                self.expression_degree(a) + self.expression_degree(b)
            }
        }
    }

    /// Expand into the tensor algebra: brackets become graded commutators.
    pub fn expand(&self, e: &BracketExpression) -> BTreeMap<TensorWord, Q> {
        match e {
            BracketExpression::Leaf(i) => {
                let mut out = BTreeMap::new();
                out.insert(vec![*i], Q::one());
                out
            }
            BracketExpression::Bracket(a, b) => {
                let ea = self.expand(a);
                let eb = self.expand(b);
                let odd = self.expression_degree(a) % 2 == 1
                    && self.expression_degree(b) % 2 == 1;
                let mut out: BTreeMap<TensorWord, Q> = BTreeMap::new();
                for (wa, ca) in &ea {
                    for (wb, cb) in &eb {
                        let mut fwd = wa.clone();
                        fwd.extend_from_slice(wb);
                        add_into(&mut out, fwd, ca * cb);
                        let mut rev = wb.clone();
                        rev.extend_from_slice(wa);
                        let sign = if odd { Q::one() } else { -Q::one() };
                        add_into(&mut out, rev, sign * ca * cb);
                    }
                }
                out
            }
        }
    }

    pub fn expand_combination(&self, c: &LieCombination) -> BTreeMap<TensorWord, Q> {
        let mut out: BTreeMap<TensorWord, Q> = BTreeMap::new();
        for (coeff, expr) in c {
            for (w, v) in self.expand(expr) {
                add_into(&mut out, w, coeff * v);
            }
        }
        out
    }

    /// The differential extended as a derivation of the bracket.
    pub fn delta_expr(&self, e: &BracketExpression) -> LieCombination {
        match e {
            BracketExpression::Leaf(i) => self.differentials[*i as usize].clone(),
            BracketExpression::Bracket(a, b) => {
                let mut out = Vec::new();
                for (c, da) in self.delta_expr(a) {
                    out.push((
                        c,
                        BracketExpression::Bracket(Box::new(da), b.clone()),
                    ));
                }
                let sign = if self.expression_degree(a) % 2 == 1 {
                    -Q::one()
                } else {
                    Q::one()
                };
                for (c, db) in self.delta_expr(b) {
                    out.push((
                        &sign * c,
                        BracketExpression::Bracket(a.clone(), Box::new(db)),
                    ));
                }
                out
            }
        }
    }

    pub fn delta_combination(&self, c: &LieCombination) -> LieCombination {
        let mut out = Vec::new();
        for (coeff, expr) in c {
            for (c2, e2) in self.delta_expr(expr) {
                out.push((coeff * c2, e2));
            }
        }
        out
    }

    fn tensor_basis(&self, k: u32) -> Arc<TensorBasis> {
        if let Some(b) = self.caches.tensor.lock().unwrap().get(&k) {
            return Arc::clone(b);
        }
        let mut words = Vec::new();
        let mut prefix = Vec::new();
        self.enumerate_words(k, &mut prefix, &mut words);
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let basis = Arc::new(TensorBasis { words, index });
        self.caches
            .tensor
            .lock()
            .unwrap()
            .insert(k, Arc::clone(&basis));
        basis
    }

    fn enumerate_words(&self, remaining: u32, prefix: &mut TensorWord, out: &mut Vec<TensorWord>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for i in 0..self.generators.len() as u16 {
            let d = self.generators[i as usize].degree;
            if d <= remaining {
                prefix.push(i);
                self.enumerate_words(remaining - d, prefix, out);
                prefix.pop();
            }
        }
    }

    pub fn tensor_dim(&self, k: u32) -> usize {
        self.tensor_basis(k).words.len()
    }

    fn tensor_vector(&self, map: &BTreeMap<TensorWord, Q>, k: u32) -> Result<Vec<Q>> {
        let basis = self.tensor_basis(k);
        let mut v = vec![Q::zero(); basis.words.len()];
        for (w, c) in map {
            let Some(&i) = basis.index.get(w) else {
                return Err(Error::NonHomogeneousInput {
                    context: "tensor expansion mixes degrees",
                });
            };
            v[i] = c.clone();
        }
        Ok(v)
    }

    /// A basis of the free graded Lie algebra in degree k, computed by rank
    /// reduction of the spanning set leaves(k) + [basis(i), basis(k-i)].
    pub fn lie_basis(&self, k: u32) -> Arc<Vec<LieBasisElement>> {
        if let Some(b) = self.caches.basis.lock().unwrap().get(&k) {
            return Arc::clone(b);
        }
        let tdim = self.tensor_dim(k);
        let mut reducer = ClassReducer::new(tdim);
        let mut elements = Vec::new();
        let mut consider = |expr: BracketExpression, model: &FreeLieModel| {
            let vec = model
                .tensor_vector(&model.expand(&expr), k)
                .expect("bracket expansion is homogeneous");
            if reducer.add_class(vec.clone()).is_some() {
                elements.push(LieBasisElement { expr, tensor: vec });
            }
        };
        for i in 0..self.generators.len() as u16 {
            if self.generators[i as usize].degree == k {
                consider(BracketExpression::Leaf(i), self);
            }
        }
        for i in 1..k {
            let left = self.lie_basis(i);
            let right = self.lie_basis(k - i);
            for a in left.iter() {
                for b in right.iter() {
                    consider(
                        BracketExpression::Bracket(
                            Box::new(a.expr.clone()),
                            Box::new(b.expr.clone()),
                        ),
                        self,
                    );
                }
            }
        }
        let basis = Arc::new(elements);
        self.caches
            .basis
            .lock()
            .unwrap()
            .insert(k, Arc::clone(&basis));
        basis
    }

    pub fn lie_dim(&self, k: u32) -> usize {
        self.lie_basis(k).len()
    }

    /// Homology in degree k with chosen representatives.
    pub fn homology(&self, k: u32) -> Arc<LieHomology> {
        if let Some(h) = self.caches.homology.lock().unwrap().get(&k) {
            return Arc::clone(h);
        }
        let h = Arc::new(self.compute_homology(k));
        self.caches
            .homology
            .lock()
            .unwrap()
            .insert(k, Arc::clone(&h));
        h
    }

    fn compute_homology(&self, k: u32) -> LieHomology {
        let tdim = self.tensor_dim(k);
        if k == 0 {
            return LieHomology::empty(k, tdim);
        }
        let basis = self.lie_basis(k);
        let target = self.tensor_dim(k - 1);
        let mut d = RationalMatrix::zero(target, basis.len());
        for (j, el) in basis.iter().enumerate() {
            let image = self.delta_combination(&vec![(Q::one(), el.expr.clone())]);
            let vec = self
                .tensor_vector(&self.expand_combination(&image), k - 1)
                .expect("differential is homogeneous");
            for (i, c) in vec.into_iter().enumerate() {
                d.set(i, j, c);
            }
        }
        let kernel = d.row_reduce().kernel;
        let kernel = kernel.vectors();

        let mut reducer = ClassReducer::new(tdim);
        for el in self.lie_basis(k + 1).iter() {
            let image = self.delta_combination(&vec![(Q::one(), el.expr.clone())]);
            let vec = self
                .tensor_vector(&self.expand_combination(&image), k)
                .expect("differential is homogeneous");
            reducer.add_relation(vec);
        }
        let boundary_dim = reducer.rank();

        // The reducer reports coordinates over the vectors it stores, so the
        // published representatives must be exactly those stored vectors;
        // their Lie coordinates are recovered through the basis matrix.
        let basis_matrix =
            RationalMatrix::from_columns(tdim, &basis.iter().map(|e| e.tensor.clone()).collect::<Vec<_>>())
                .expect("basis vectors share the ambient dimension");
        let mut cycles = ClassReducer::new(tdim);
        let mut reps_lie = Vec::new();
        let mut reps_tensor = Vec::new();
        for coords in kernel {
            let mut vec = vec![Q::zero(); tdim];
            for (j, c) in coords.iter().enumerate() {
                if !c.is_zero() {
                    for (i, t) in basis[j].tensor.iter().enumerate() {
                        vec[i] += c * t;
                    }
                }
            }
            cycles.add_relation(vec.clone());
            if let Some((_, stored)) = reducer.add_class(vec) {
                let lie_coords = basis_matrix
                    .solve(&stored)
                    .expect("dimension checked")
                    .expect("a stored cycle lies in the span of the Lie basis");
                reps_lie.push(lie_coords.particular);
                reps_tensor.push(stored);
            }
        }
        LieHomology {
            degree: k,
            cycle_dim: kernel.len(),
            boundary_dim,
            reps_lie,
            reps_tensor,
            reducer,
            cycles,
            tensor_dim: tdim,
        }
    }

    /// Sub-Lie-algebra on the generators of degree <= k. Generators keep
    /// their indices because the canonical order makes truncation a prefix.
    pub fn truncate(&self, k: u32) -> FreeLieModel {
        if let Some(t) = self.caches.truncations.lock().unwrap().get(&k) {
            return t.clone();
        }
        let count = self
            .generators
            .iter()
            .take_while(|g| g.degree <= k)
            .count();
        let t = FreeLieModel {
            generators: self.generators[..count].to_vec(),
            differentials: self.differentials[..count].to_vec(),
            caches: Arc::new(LieCaches::default()),
        };
        self.caches
            .truncations
            .lock()
            .unwrap()
            .insert(k, t.clone());
        t
    }

    pub fn expression_to_string(&self, e: &BracketExpression) -> String {
        match e {
            BracketExpression::Leaf(i) => self.generators[*i as usize].name.clone(),
            BracketExpression::Bracket(a, b) => format!(
                "[{}, {}]",
                self.expression_to_string(a),
                self.expression_to_string(b)
            ),
        }
    }

    pub fn combination_to_string(&self, c: &LieCombination) -> String {
        if c.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (coeff, expr)) in c.iter().enumerate() {
            let (sign, abs) = if coeff < &Q::zero() {
                ("-", -coeff.clone())
            } else {
                ("+", coeff.clone())
            };
            if i == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            if !abs.is_one() {
                out.push_str(&format!("{} * ", q_to_string(&abs)));
            }
            out.push_str(&self.expression_to_string(expr));
        }
        out
    }
}

fn remap_expr(e: BracketExpression, remap: &[u16]) -> BracketExpression {
    match e {
        BracketExpression::Leaf(i) => BracketExpression::Leaf(remap[i as usize]),
        BracketExpression::Bracket(a, b) => BracketExpression::Bracket(
            Box::new(remap_expr(*a, remap)),
            Box::new(remap_expr(*b, remap)),
        ),
    }
}

fn add_into(map: &mut BTreeMap<TensorWord, Q>, w: TensorWord, c: Q) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(w) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Homology of the free dgl in one degree, with membership oracles.
pub struct LieHomology {
    pub degree: u32,
    pub cycle_dim: usize,
    pub boundary_dim: usize,
    reps_lie: Vec<Vec<Q>>,
    reps_tensor: Vec<Vec<Q>>,
    reducer: ClassReducer,
    cycles: ClassReducer,
    tensor_dim: usize,
}

impl LieHomology {
    fn empty(degree: u32, tensor_dim: usize) -> LieHomology {
        LieHomology {
            degree,
            cycle_dim: 0,
            boundary_dim: 0,
            reps_lie: Vec::new(),
            reps_tensor: Vec::new(),
            reducer: ClassReducer::new(tensor_dim),
            cycles: ClassReducer::new(tensor_dim),
            tensor_dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps_tensor.len()
    }

    /// Representatives as coefficient vectors over the Lie basis in this
    /// degree.
    pub fn representatives_lie(&self) -> &[Vec<Q>] {
        &self.reps_lie
    }

    /// The same representatives in tensor coordinates.
    pub fn representatives_tensor(&self) -> &[Vec<Q>] {
        &self.reps_tensor
    }

    /// Coordinates of a cycle (given in tensor coordinates) with respect to
    /// the chosen representatives.
    pub fn class_of_tensor(&self, v: &[Q]) -> Result<Vec<Q>> {
        if v.len() != self.tensor_dim {
            return Err(Error::DimensionMismatch {
                context: "tensor coordinates of a homology class",
                expected: self.tensor_dim,
                got: v.len(),
            });
        }
        if v.iter().all(|c| c.is_zero()) {
            return Ok(vec![Q::zero(); self.dim()]);
        }
        if self.cycles.reduce(v).is_err() {
            return Err(Error::NotACocycle {
                degree: self.degree,
            });
        }
        self.reducer
            .reduce(v)
            .map_err(|_| Error::Engine("cycle escapes the boundary-class span".into()))
    }
}

/// Matrix of the boundary-induced map W_q -> H_{q-1} of the sub-algebra on
/// generators of degree <= skeleton. Rejected when some differential uses a
/// generator above the skeleton.
pub fn b_lie_at(m: &FreeLieModel, q: u32, skeleton: u32) -> Result<RationalMatrix> {
    let wq = m.generators_in_degree(q);
    for &w in &wq {
        for (_, expr) in m.differential_of(w) {
            let mut worst = 0;
            max_leaf_degree(m, expr, &mut worst);
            if worst > skeleton {
                return Err(Error::SkeletonEscape {
                    name: m.generator(w).name.clone(),
                    skeleton,
                    degree: worst,
                });
            }
        }
    }
    let trunc = m.truncate(skeleton);
    let h = trunc.homology(q.saturating_sub(1));
    let mut out = RationalMatrix::zero(h.dim(), wq.len());
    for (j, &w) in wq.iter().enumerate() {
        let image = m.differential_of(w).clone();
        let vec = trunc.tensor_vector(
            &trunc.expand_combination(&image),
            q.saturating_sub(1),
        )?;
        let coords = h.class_of_tensor(&vec)?;
        for (i, c) in coords.into_iter().enumerate() {
            out.set(i, j, c);
        }
    }
    Ok(out)
}

/// The Whitehead-style boundary map for the Lie model, at the default
/// skeleton q - 1.
pub fn b_lie(m: &FreeLieModel, q: u32) -> Result<RationalMatrix> {
    b_lie_at(m, q, q.saturating_sub(1))
}

fn max_leaf_degree(m: &FreeLieModel, e: &BracketExpression, worst: &mut u32) {
    match e {
        BracketExpression::Leaf(i) => {
            *worst = (*worst).max(m.generator(*i).degree);
        }
        BracketExpression::Bracket(a, b) => {
            max_leaf_degree(m, a, worst);
            max_leaf_degree(m, b, worst);
        }
    }
}

/// One row of the Lie-side Whitehead table at degree q:
///
/// ```text
/// W_q --b_q--> H_{q-1}(L(W_{<= q-2})) --j--> H_{q-1}(L(W)) --p--> W_{q-1}
/// ```
#[derive(Clone, Debug, Serialize)]
pub struct LieWhiteheadRow {
    pub q: u32,
    pub w_dim: usize,
    pub b_matrix: RationalMatrix,
    pub h_skeleton_dim: usize,
    pub h_full_dim: usize,
}

impl LieWhiteheadRow {
    pub fn classification(&self) -> Classification {
        classify_matrix(&self.b_matrix)
    }
}

fn check_lie_junction(context: &str, q: u32, a: &RationalMatrix, b: &RationalMatrix) -> Result<()> {
    let composed = b.mul(a)?;
    if composed.is_zero() && a.rank() == b.cols() - b.rank() {
        Ok(())
    } else {
        Err(Error::Engine(format!(
            "Lie Whitehead sequence fails exactness at degree {q} ({context}); \
             rank im = {}, dim ker = {}",
            a.rank(),
            b.cols() - b.rank()
        )))
    }
}

/// Rows for q = 2..=q_max, with exactness verified at the three junctions of
/// each row. Exactness is a theorem for valid models, so a failure reports an
/// engine bug.
pub fn whitehead_lie_table(m: &FreeLieModel, q_max: u32) -> Result<Vec<LieWhiteheadRow>> {
    if q_max < 2 {
        return Err(Error::DimensionMismatch {
            context: "lie whitehead table needs q_max >= 2",
            expected: 2,
            got: q_max as usize,
        });
    }
    let mut rows = Vec::new();
    for q in 2..=q_max {
        let b_q = b_lie_at(m, q, q - 2)?;
        let j_q = lie_inclusion_map(m, q)?;
        let p_q = lie_linear_part_map(m, q)?;
        let b_prev = b_lie_at(m, q - 1, q.saturating_sub(3))?;

        check_lie_junction("skeleton homology", q, &b_q, &j_q)?;
        check_lie_junction("full homology", q, &j_q, &p_q)?;
        check_lie_junction("generator space", q, &p_q, &b_prev)?;

        rows.push(LieWhiteheadRow {
            q,
            w_dim: b_q.cols(),
            h_skeleton_dim: b_q.rows(),
            h_full_dim: j_q.rows(),
            b_matrix: b_q,
        });
    }
    Ok(rows)
}

/// H_{q-1}(L(W_{<= q-2})) -> H_{q-1}(L(W)), induced by inclusion. Tensor
/// words of the sub-algebra embed verbatim because truncation is a prefix.
fn lie_inclusion_map(m: &FreeLieModel, q: u32) -> Result<RationalMatrix> {
    let k = q - 1;
    let trunc = m.truncate(q - 2);
    let src = trunc.homology(k);
    let dst = m.homology(k);
    let trunc_words = trunc.tensor_basis(k);
    let full = m.tensor_basis(k);
    let mut out = RationalMatrix::zero(dst.dim(), src.dim());
    for (j, rep) in src.representatives_tensor().iter().enumerate() {
        let mut v = vec![Q::zero(); full.words.len()];
        for (t, c) in rep.iter().enumerate() {
            if !c.is_zero() {
                let i = full.index[&trunc_words.words[t]];
                v[i] = c.clone();
            }
        }
        let coords = dst.class_of_tensor(&v)?;
        for (i, c) in coords.into_iter().enumerate() {
            out.set(i, j, c);
        }
    }
    Ok(out)
}

/// H_{q-1}(L(W)) -> W_{q-1}: the coefficients of representatives on
/// single-letter words, well defined because boundaries are decomposable.
fn lie_linear_part_map(m: &FreeLieModel, q: u32) -> Result<RationalMatrix> {
    let k = q - 1;
    let gens = m.generators_in_degree(k);
    let h = m.homology(k);
    let basis = m.tensor_basis(k);
    let mut out = RationalMatrix::zero(gens.len(), h.dim());
    for (j, rep) in h.representatives_tensor().iter().enumerate() {
        for (t, c) in rep.iter().enumerate() {
            let word = &basis.words[t];
            if word.len() == 1 && !c.is_zero() {
                if let Some(i) = gens.iter().position(|&g| g == word[0]) {
                    out.set(i, j, c.clone());
                }
            }
        }
    }
    Ok(out)
}

/// An endomorphism of a free dgl, given by generator images.
#[derive(Clone, Debug)]
pub struct LieEndomorphism {
    images: Vec<LieCombination>,
}

impl LieEndomorphism {
    pub fn identity(m: &FreeLieModel) -> LieEndomorphism {
        LieEndomorphism {
            images: (0..m.generator_count() as u16)
                .map(|i| vec![(Q::one(), BracketExpression::Leaf(i))])
                .collect(),
        }
    }

    pub fn from_images(images: Vec<LieCombination>) -> LieEndomorphism {
        LieEndomorphism { images }
    }

    /// Send each generator to a scalar multiple of itself.
    pub fn scale(m: &FreeLieModel, factors: &[Q]) -> LieEndomorphism {
        debug_assert_eq!(factors.len(), m.generator_count());
        LieEndomorphism {
            images: factors
                .iter()
                .enumerate()
                .map(|(i, c)| vec![(c.clone(), BracketExpression::Leaf(i as u16))])
                .collect(),
        }
    }

    pub fn image_of(&self, i: u16) -> &LieCombination {
        &self.images[i as usize]
    }

    fn validate(&self, m: &FreeLieModel) -> Result<()> {
        if self.images.len() != m.generator_count() {
            return Err(Error::DimensionMismatch {
                context: "one image per generator",
                expected: m.generator_count(),
                got: self.images.len(),
            });
        }
        for (i, image) in self.images.iter().enumerate() {
            let g = m.generator(i as u16);
            for (_, expr) in image {
                if m.expression_degree(expr) != g.degree {
                    return Err(Error::InhomogeneousImage {
                        name: g.name.clone(),
                        expected: g.degree,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn apply_expr(&self, e: &BracketExpression) -> LieCombination {
        match e {
            BracketExpression::Leaf(i) => self.images[*i as usize].clone(),
            BracketExpression::Bracket(a, b) => {
                let ia = self.apply_expr(a);
                let ib = self.apply_expr(b);
                let mut out = Vec::new();
                for (ca, ea) in &ia {
                    for (cb, eb) in &ib {
                        out.push((
                            ca * cb,
                            BracketExpression::Bracket(
                                Box::new(ea.clone()),
                                Box::new(eb.clone()),
                            ),
                        ));
                    }
                }
                out
            }
        }
    }

    pub fn apply(&self, c: &LieCombination) -> LieCombination {
        let mut out = Vec::new();
        for (coeff, expr) in c {
            for (c2, e2) in self.apply_expr(expr) {
                out.push((coeff * c2, e2));
            }
        }
        out
    }

    /// Verify commutation with the differential on every generator.
    pub fn check_chain_map(&self, m: &FreeLieModel) -> Result<()> {
        self.validate(m)?;
        for i in 0..m.generator_count() as u16 {
            let g = m.generator(i);
            let lhs = m.delta_combination(&self.apply_expr(&BracketExpression::Leaf(i)));
            let rhs = self.apply(m.differential_of(i));
            if m.expand_combination(&lhs) != m.expand_combination(&rhs) {
                return Err(Error::NotAChainMap {
                    name: g.name.clone(),
                });
            }
        }
        Ok(())
    }

    /// Matrix of the induced map on homology in degree k.
    pub fn induced_on_homology(&self, m: &FreeLieModel, k: u32) -> Result<RationalMatrix> {
        self.check_chain_map(m)?;
        let h = m.homology(k);
        let basis = m.lie_basis(k);
        let mut out = RationalMatrix::zero(h.dim(), h.dim());
        for (j, coords) in h.representatives_lie().iter().enumerate() {
            let mut comb = Vec::new();
            for (b, c) in coords.iter().enumerate() {
                if !c.is_zero() {
                    comb.push((c.clone(), basis[b].expr.clone()));
                }
            }
            let image = self.apply(&comb);
            let vec = m.tensor_vector(&m.expand_combination(&image), k)?;
            let col = h.class_of_tensor(&vec)?;
            for (i, c) in col.into_iter().enumerate() {
                out.set(i, j, c);
            }
        }
        Ok(out)
    }
}

/// The commuting-square check on the Lie side: does H(alpha) compose with the
/// boundary map the same way the boundary map composes with xi?
#[derive(Clone, Debug, Serialize)]
pub struct DiagramPairR {
    pub q: u32,
    pub skeleton: u32,
    pub commutes: bool,
    /// b composed with xi.
    pub lhs: RationalMatrix,
    /// H(alpha) composed with b.
    pub rhs: RationalMatrix,
}

pub fn check_diagram_r(
    m: &FreeLieModel,
    q: u32,
    skeleton: u32,
    xi: &RationalMatrix,
    alpha: &LieEndomorphism,
) -> Result<DiagramPairR> {
    let wq = m.dim_w(q);
    if xi.rows() != wq || xi.cols() != wq {
        return Err(Error::DimensionMismatch {
            context: "xi acts on the degree-q generator space",
            expected: wq,
            got: xi.rows().max(xi.cols()),
        });
    }
    if xi.rank() != wq {
        return Err(Error::NotInvertible {
            context: "xi in the degree-q commuting square",
        });
    }
    let trunc = m.truncate(skeleton);
    let b = b_lie_at(m, q, skeleton)?;
    let h_alpha = alpha.induced_on_homology(&trunc, q.saturating_sub(1))?;
    let lhs = b.mul(xi)?;
    let rhs = h_alpha.mul(&b)?;
    let commutes = lhs == rhs;
    Ok(DiagramPairR {
        q,
        skeleton,
        commutes,
        lhs,
        rhs,
    })
}

/// One degree of the dimension comparison between a Sullivan model and a free
/// Lie model of the same space.
#[derive(Clone, Debug, Serialize)]
pub struct PairCheckRow {
    pub k: u32,
    /// dim H^{k+1} of the Sullivan truncation at level k + shift.
    pub sullivan_dim: usize,
    /// dim H_{k-1} of the Lie sub-algebra on generators of degree <= k - 2.
    pub lie_dim: usize,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheckReport {
    pub shift: i64,
    pub rows: Vec<PairCheckRow>,
    pub all_match: bool,
}

/// Compare dim H^{k+1}(Lambda V^{<= k+shift}) with dim H_{q-1} of the
/// corresponding Lie skeleton, for k in k_from..=k_to. The identity is
/// expected to hold at shift -1 (truncation level k - 1, matching the
/// Whitehead-sequence terms on both sides).
pub fn pair_check(
    s: &SullivanModel,
    l: &FreeLieModel,
    k_from: u32,
    k_to: u32,
    shift: i64,
) -> Result<PairCheckReport> {
    if k_from < 2 || k_from > k_to {
        return Err(Error::DimensionMismatch {
            context: "pair check range needs 2 <= k_from <= k_to",
            expected: 2,
            got: k_from as usize,
        });
    }
    let mut rows = Vec::new();
    for k in k_from..=k_to {
        let level = (k as i64 + shift).max(0) as u32;
        let strunc = s.truncate(level)?;
        let sullivan_dim = cohomology(&strunc, k + 1).dim();
        let ltrunc = l.truncate(k - 2);
        let lie_dim = ltrunc.homology(k - 1).dim();
        rows.push(PairCheckRow {
            k,
            sullivan_dim,
            lie_dim,
            matches: sullivan_dim == lie_dim,
        });
    }
    let all_match = rows.iter().all(|r| r.matches);
    Ok(PairCheckReport {
        shift,
        rows,
        all_match,
    })
}
