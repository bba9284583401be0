//! Fusion rings given by non-negative integer structure constants.
//!
//! A fusion ring of rank `r` is stored as the tensor `N[i][j][k]` with
//! `[S_i]·[S_j] = Σ_k N[i][j][k]·[S_k]`. All ring arithmetic is exact; the
//! Frobenius–Perron dimensions are the only floating-point quantities.
//!
//! Fusion matrix convention: `fusion_matrix(k)` has entry `(i, j)` equal to
//! the coefficient of `S_j` in `S_k·S_i`, i.e. `N[k][i][j]`. FPdim is
//! invariant under transposition, so the choice only matters for callers that
//! inspect the matrices directly.

use std::fmt;
use std::ops::{Add, Mul};
use std::sync::OnceLock;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite_group::{CharacterTable, FiniteGroup, GroupError};

/// Convergence threshold on successive Rayleigh quotients.
pub const FPDIM_TOL: f64 = 1e-12;
/// Iteration cap for the Perron eigenvector.
pub const FPDIM_MAX_ITER: usize = 10_000;

#[derive(Debug, Error)]
pub enum FusionError {
    #[error("malformed structure constants: {0}")]
    Shape(String),
    #[error("fusion axioms violated:\n{0}")]
    Axioms(ValidationReport),
    #[error("basis index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("element has {got} coefficients but the ring has rank {rank}")]
    LengthMismatch { got: usize, rank: usize },
    #[error("negative coefficient {value} on basis element {index}; FPdim is only defined here for classes of objects")]
    NegativeCoefficient { index: usize, value: i64 },
    #[error("Perron iteration did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// One failed fusion axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `N[unit][j][k] != δ_jk` (`left = true`) or `N[i][unit][k] != δ_ik`.
    Unit { left: bool, i: usize, k: usize, value: u64 },
    /// `(S_i S_j) S_k` and `S_i (S_j S_k)` differ in the coefficient of `S_l`.
    Associativity { i: usize, j: usize, k: usize, l: usize, lhs: u64, rhs: u64 },
    MissingDual { i: usize },
    AmbiguousDual { i: usize, candidates: Vec<usize> },
    /// `N[i][j][unit]` is nonzero for some `j` other than the dual of `i`.
    StrayUnitCoefficient { i: usize, j: usize, value: u64 },
    DualNotInvolution { i: usize, dual: usize, dual_of_dual: usize },
}

impl Violation {
    /// The violation with basis elements named by `name`.
    pub fn describe(&self, name: impl Fn(usize) -> String) -> String {
        match self {
            Violation::Unit { left: true, i, k, value } => format!(
                "unit: N[unit][{}][{}] = {value}, expected {}",
                name(*i),
                name(*k),
                u64::from(i == k)
            ),
            Violation::Unit { left: false, i, k, value } => format!(
                "unit: N[{}][unit][{}] = {value}, expected {}",
                name(*i),
                name(*k),
                u64::from(i == k)
            ),
            Violation::Associativity { i, j, k, l, lhs, rhs } => {
                let (i, j, k, l) = (name(*i), name(*j), name(*k), name(*l));
                format!("associativity: coefficient of {l} in ({i}·{j})·{k} is {lhs}, in {i}·({j}·{k}) is {rhs}")
            }
            Violation::MissingDual { i } => format!("duality: {} has no dual", name(*i)),
            Violation::AmbiguousDual { i, candidates } => {
                let c: Vec<String> = candidates.iter().map(|&c| name(c)).collect();
                format!("duality: {} has several dual candidates {}", name(*i), c.join(", "))
            }
            Violation::StrayUnitCoefficient { i, j, value } => format!(
                "duality: N[{i}][{j}][unit] = {value} but {} is not the dual of {}",
                name(*j),
                name(*i)
            ),
            Violation::DualNotInvolution { i, dual, dual_of_dual } => format!(
                "duality: dual of {} is {} whose dual is {}",
                name(*i),
                name(*dual),
                name(*dual_of_dual)
            ),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe(|i| format!("#{i}")))
    }
}

/// Axiom violations found by [`FusionData::validate`]; empty iff the data is a fusion ring.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// One line per violation, naming basis elements by their labels.
    pub fn describe(&self, basis: &[String]) -> String {
        let name = |i: usize| basis.get(i).cloned().unwrap_or_else(|| format!("#{i}"));
        let lines: Vec<String> = self.violations.iter().map(|v| v.describe(name)).collect();
        lines.join("\n")
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (n, v) in self.violations.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Unvalidated fusion data, as read from the `fusionring` JSON schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionData {
    pub basis: Vec<String>,
    pub unit: usize,
    #[serde(rename = "N")]
    pub structure: Vec<Vec<Vec<u64>>>,
}

impl FusionData {
    fn check_shape(&self) -> Result<(), FusionError> {
        let r = self.basis.len();
        if r == 0 {
            return Err(FusionError::Shape("empty basis".into()));
        }
        if self.unit >= r {
            return Err(FusionError::Shape(format!("unit index {} out of range for rank {r}", self.unit)));
        }
        if self.structure.len() != r {
            return Err(FusionError::Shape(format!("N has {} slices, expected {r}", self.structure.len())));
        }
        for (i, slice) in self.structure.iter().enumerate() {
            if slice.len() != r {
                return Err(FusionError::Shape(format!("N[{i}] has {} rows, expected {r}", slice.len())));
            }
            for (j, row) in slice.iter().enumerate() {
                if row.len() != r {
                    return Err(FusionError::Shape(format!(
                        "N[{i}][{j}] has {} entries, expected {r}",
                        row.len()
                    )));
                }
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for label in &self.basis {
            if !seen.insert(label) {
                return Err(FusionError::Shape(format!("duplicate basis label {label:?}")));
            }
        }
        Ok(())
    }

    /// Checks the unit, associativity and duality axioms.
    ///
    /// Shape problems are reported as `Err(FusionError::Shape)`, never as violations.
    pub fn validate(&self) -> Result<ValidationReport, FusionError> {
        self.check_shape()?;
        let (report, _) = self.axioms();
        Ok(report)
    }

    fn axioms(&self) -> (ValidationReport, Vec<usize>) {
        let r = self.basis.len();
        let u = self.unit;
        let n = &self.structure;
        let mut violations = Vec::new();

        for a in 0..r {
            for k in 0..r {
                let expected = u64::from(a == k);
                if n[u][a][k] != expected {
                    violations.push(Violation::Unit { left: true, i: a, k, value: n[u][a][k] });
                }
                if n[a][u][k] != expected {
                    violations.push(Violation::Unit { left: false, i: a, k, value: n[a][u][k] });
                }
            }
        }

        // Products are sparse, so expand them over their nonzero terms only.
        let support: Vec<Vec<Vec<(usize, u64)>>> = n
            .iter()
            .map(|slice| {
                slice
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(_, &c)| c != 0).map(|(m, &c)| (m, c)).collect())
                    .collect()
            })
            .collect();
        let mut lhs = vec![0u64; r];
        let mut rhs = vec![0u64; r];
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    lhs.fill(0);
                    rhs.fill(0);
                    for &(m, c) in &support[i][j] {
                        for &(l, d) in &support[m][k] {
                            lhs[l] += c * d;
                        }
                    }
                    for &(m, c) in &support[j][k] {
                        for &(l, d) in &support[i][m] {
                            rhs[l] += c * d;
                        }
                    }
                    for l in 0..r {
                        if lhs[l] != rhs[l] {
                            violations.push(Violation::Associativity { i, j, k, l, lhs: lhs[l], rhs: rhs[l] });
                        }
                    }
                }
            }
        }

        let mut dual = vec![usize::MAX; r];
        for i in 0..r {
            let candidates: Vec<usize> =
                (0..r).filter(|&j| n[i][j][u] == 1 && n[j][i][u] == 1).collect();
            match candidates.as_slice() {
                [] => violations.push(Violation::MissingDual { i }),
                [d] => dual[i] = *d,
                _ => violations.push(Violation::AmbiguousDual { i, candidates: candidates.clone() }),
            }
            for j in 0..r {
                if j != dual[i] && n[i][j][u] != 0 && !candidates.contains(&j) {
                    violations.push(Violation::StrayUnitCoefficient { i, j, value: n[i][j][u] });
                }
            }
        }
        for i in 0..r {
            let d = dual[i];
            if d != usize::MAX && dual[d] != usize::MAX && dual[d] != i {
                violations.push(Violation::DualNotInvolution { i, dual: d, dual_of_dual: dual[d] });
            }
        }
        (ValidationReport { violations }, dual)
    }
}

/// A validated fusion ring.
#[derive(Debug)]
pub struct FusionRing {
    labels: Vec<String>,
    unit: usize,
    rank: usize,
    structure: Vec<u64>,
    dual: Vec<usize>,
    fpdims: OnceLock<Result<Vec<f64>, usize>>,
}

impl Clone for FusionRing {
    fn clone(&self) -> Self {
        let fpdims = OnceLock::new();
        if let Some(v) = self.fpdims.get() {
            let _ = fpdims.set(v.clone());
        }
        FusionRing {
            labels: self.labels.clone(),
            unit: self.unit,
            rank: self.rank,
            structure: self.structure.clone(),
            dual: self.dual.clone(),
            fpdims,
        }
    }
}

impl PartialEq for FusionRing {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.unit == other.unit && self.structure == other.structure
    }
}

impl TryFrom<FusionData> for FusionRing {
    type Error = FusionError;

    fn try_from(data: FusionData) -> Result<Self, Self::Error> {
        data.check_shape()?;
        let (report, dual) = data.axioms();
        if !report.is_valid() {
            return Err(FusionError::Axioms(report));
        }
        let rank = data.basis.len();
        let structure = data.structure.iter().flatten().flatten().copied().collect();
        Ok(FusionRing {
            labels: data.basis,
            unit: data.unit,
            rank,
            structure,
            dual,
            fpdims: OnceLock::new(),
        })
    }
}

impl FusionRing {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `N[i][j][k]`, the coefficient of `S_k` in `S_i·S_j`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> u64 {
        self.structure[(i * self.rank + j) * self.rank + k]
    }

    /// The index of the dual simple `S_i*`.
    pub fn dual(&self, i: usize) -> usize {
        self.dual[i]
    }

    pub fn to_data(&self) -> FusionData {
        let r = self.rank;
        let structure = (0..r)
            .map(|i| (0..r).map(|j| (0..r).map(|k| self.structure_constant(i, j, k)).collect()).collect())
            .collect();
        FusionData { basis: self.labels.clone(), unit: self.unit, structure }
    }

    fn check_index(&self, k: usize) -> Result<(), FusionError> {
        if k < self.rank {
            Ok(())
        } else {
            Err(FusionError::IndexOutOfRange { index: k, rank: self.rank })
        }
    }

    fn check_len(&self, x: &FusionElement) -> Result<(), FusionError> {
        if x.0.len() == self.rank {
            Ok(())
        } else {
            Err(FusionError::LengthMismatch { got: x.0.len(), rank: self.rank })
        }
    }

    pub fn multiply(&self, x: &FusionElement, y: &FusionElement) -> Result<FusionElement, FusionError> {
        self.check_len(x)?;
        self.check_len(y)?;
        let r = self.rank;
        let mut out = vec![0i64; r];
        for (i, &xi) in x.0.iter().enumerate().filter(|(_, c)| **c != 0) {
            for (j, &yj) in y.0.iter().enumerate().filter(|(_, c)| **c != 0) {
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot += xi * yj * self.structure_constant(i, j, k) as i64;
                }
            }
        }
        Ok(FusionElement(out))
    }

    /// Entry `(i, j)` is the coefficient of `S_j` in `S_k·S_i`.
    pub fn fusion_matrix(&self, k: usize) -> Result<DMatrix<i64>, FusionError> {
        self.check_index(k)?;
        let r = self.rank;
        Ok(DMatrix::from_fn(r, r, |i, j| self.structure_constant(k, i, j) as i64))
    }

    /// Frobenius–Perron dimensions of all simples, in basis order.
    ///
    /// The Perron eigenvector `d` of `L = Σ_k fusion_matrix(k)` is computed by
    /// power iteration from the all-ones vector. `L` dominates the identity and
    /// every simple occurs in `S_i·L`, so it is primitive. `d` is then a positive
    /// eigenvector of every fusion matrix, and the eigenvalue of `fusion_matrix(k)`
    /// on it is the spectral radius.
    pub fn fpdims(&self) -> Result<&[f64], FusionError> {
        self.fpdims
            .get_or_init(|| perron_dimensions(self))
            .as_deref()
            .map_err(|&iters| FusionError::NoConvergence(iters))
    }

    pub fn fpdim_simple(&self, k: usize) -> Result<f64, FusionError> {
        self.check_index(k)?;
        Ok(self.fpdims()?[k])
    }

    /// Linear extension of FPdim to classes of objects.
    pub fn fpdim(&self, x: &FusionElement) -> Result<f64, FusionError> {
        self.check_len(x)?;
        if let Some((index, &value)) = x.0.iter().enumerate().find(|(_, c)| **c < 0) {
            return Err(FusionError::NegativeCoefficient { index, value });
        }
        let dims = self.fpdims()?;
        Ok(x.0.iter().zip(dims).map(|(&c, &d)| c as f64 * d).sum())
    }

    /// FPdim of an arbitrary (virtual) class; the ring homomorphism itself.
    pub fn fpdim_virtual(&self, x: &FusionElement) -> Result<f64, FusionError> {
        self.check_len(x)?;
        let dims = self.fpdims()?;
        Ok(x.0.iter().zip(dims).map(|(&c, &d)| c as f64 * d).sum())
    }

    pub fn element(&self, coefficients: Vec<i64>) -> Result<FusionElement, FusionError> {
        let x = FusionElement(coefficients);
        self.check_len(&x)?;
        Ok(x)
    }

    pub fn basis_element(&self, k: usize) -> Result<FusionElement, FusionError> {
        self.check_index(k)?;
        Ok(FusionElement::basis(self.rank, k))
    }
}

fn perron_dimensions(ring: &FusionRing) -> Result<Vec<f64>, usize> {
    let r = ring.rank;
    let mut total = vec![0.0f64; r * r];
    for k in 0..r {
        for i in 0..r {
            for j in 0..r {
                total[i * r + j] += ring.structure_constant(k, i, j) as f64;
            }
        }
    }
    let apply = |m: &[f64], v: &[f64]| -> Vec<f64> {
        (0..r).map(|i| (0..r).map(|j| m[i * r + j] * v[j]).sum()).collect()
    };
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();

    let mut v = vec![1.0 / (r as f64).sqrt(); r];
    let mut lambda = f64::NAN;
    let mut converged = false;
    for _ in 0..FPDIM_MAX_ITER {
        let w = apply(&total, &v);
        let next_lambda = v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
        let scale = norm(&w);
        let next: Vec<f64> = w.iter().map(|x| x / scale).collect();
        let step = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = next;
        if (next_lambda - lambda).abs() <= FPDIM_TOL * next_lambda.abs().max(1.0) && step <= FPDIM_TOL {
            converged = true;
            break;
        }
        lambda = next_lambda;
    }
    if !converged || v.iter().any(|&x| x.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)) {
        return Err(FPDIM_MAX_ITER);
    }
    let d: Vec<f64> = v.iter().map(|x| x / v[ring.unit]).collect();
    let dd: f64 = d.iter().map(|x| x * x).sum();

    Ok((0..r)
        .map(|k| {
            let mut acc = 0.0;
            for i in 0..r {
                for j in 0..r {
                    acc += d[i] * ring.structure_constant(k, i, j) as f64 * d[j];
                }
            }
            acc / dd
        })
        .collect())
}

/// An element of the fusion ring in the basis of simples.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FusionElement(pub Vec<i64>);

impl FusionElement {
    pub fn zero(rank: usize) -> Self {
        FusionElement(vec![0; rank])
    }

    pub fn basis(rank: usize, k: usize) -> Self {
        let mut c = vec![0; rank];
        c[k] = 1;
        FusionElement(c)
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl Add for &FusionElement {
    type Output = FusionElement;

    fn add(self, rhs: &FusionElement) -> FusionElement {
        assert_eq!(self.0.len(), rhs.0.len(), "fusion elements of different rank");
        FusionElement(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Mul<&FusionElement> for i64 {
    type Output = FusionElement;

    fn mul(self, rhs: &FusionElement) -> FusionElement {
        FusionElement(rhs.0.iter().map(|c| self * c).collect())
    }
}

/// The Fibonacci fusion ring on basis `(1, Pi)` with `Pi·Pi = 1 + Pi`.
pub fn builtin_fib() -> FusionRing {
    let data = FusionData {
        basis: vec!["1".into(), "Pi".into()],
        unit: 0,
        structure: vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]]],
    };
    FusionRing::try_from(data).expect("Fib satisfies the fusion axioms")
}

/// The fusion ring of `vec_G`: basis the group elements, `N[g][h][gh] = 1`.
pub fn builtin_vec_g(group: &FiniteGroup) -> Result<FusionRing, FusionError> {
    let n = group.order();
    let mut structure = vec![vec![vec![0u64; n]; n]; n];
    for (g, slice) in structure.iter_mut().enumerate() {
        for (h, row) in slice.iter_mut().enumerate() {
            row[group.mul(g, h)] = 1;
        }
    }
    FusionRing::try_from(FusionData {
        basis: group.labels().to_vec(),
        unit: group.identity(),
        structure,
    })
}

/// The fusion ring of `rep(G)`: basis the irreducibles, structure constants the
/// tensor-product multiplicities.
pub fn builtin_rep_g(table: &CharacterTable) -> Result<FusionRing, FusionError> {
    let report = table.validate()?;
    if !report.is_valid() {
        return Err(GroupError::InvalidCharacterTable(report.to_string()).into());
    }
    let r = table.num_irreps();
    let mut structure = Vec::with_capacity(r);
    for a in 0..r {
        let mut slice = Vec::with_capacity(r);
        for b in 0..r {
            slice.push(table.tensor_multiplicities(a, b)?);
        }
        structure.push(slice);
    }
    let unit = table
        .trivial_index()
        .ok_or_else(|| GroupError::InvalidCharacterTable("no trivial character".into()))?;
    FusionRing::try_from(FusionData { basis: table.labels().to_vec(), unit, structure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_group::{builtin_character_table, builtin_group};

    fn fib_data() -> FusionData {
        builtin_fib().to_data()
    }

    fn phi() -> f64 {
        (1.0 + 5f64.sqrt()) / 2.0
    }

    #[test]
    fn fib_is_valid() {
        assert!(fib_data().validate().unwrap().is_valid());
        let fib = builtin_fib();
        assert_eq!(fib.dual(1), 1);
    }

    #[test]
    fn rank_one_ring_is_valid() {
        let data = FusionData { basis: vec!["1".into()], unit: 0, structure: vec![vec![vec![1]]] };
        assert!(data.validate().unwrap().is_valid());
        let ring = FusionRing::try_from(data).unwrap();
        assert_eq!(ring.fpdim_simple(0).unwrap(), 1.0);
    }

    #[test]
    fn rank_two_perturbation_stays_associative() {
        // Any rank-2 ring with a unit is Z[x]/(x^2 - bx - a), hence associative.
        let mut data = fib_data();
        data.structure[1][1][1] = 2;
        assert!(data.validate().unwrap().is_valid());
        let ring = FusionRing::try_from(data).unwrap();
        assert!((ring.fpdim_simple(1).unwrap() - (1.0 + 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn broken_rep_s3_reports_associativity() {
        let mut data = builtin_rep_g(&builtin_character_table("S3").unwrap()).unwrap().to_data();
        // std·std = triv + std: (sign·std)·std = triv + std but sign·(std·std) = sign + std.
        data.structure[2][2][1] = 0;
        let report = data.validate().unwrap();
        assert!(
            report.violations.contains(&Violation::Associativity { i: 1, j: 2, k: 2, l: 0, lhs: 1, rhs: 0 }),
            "{report}"
        );
    }

    #[test]
    fn shape_error_is_not_a_violation() {
        let mut data = fib_data();
        data.structure[1].pop();
        assert!(matches!(data.validate(), Err(FusionError::Shape(_))));
        let mut data = fib_data();
        data.unit = 5;
        assert!(matches!(data.validate(), Err(FusionError::Shape(_))));
    }

    #[test]
    fn missing_and_ambiguous_duals_are_violations() {
        // Z/3 with the inverse broken: every product a·a lands on the unit.
        let mut data = FusionRing::try_from(FusionData {
            basis: vec!["1".into(), "x".into()],
            unit: 0,
            structure: vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]],
        })
        .unwrap()
        .to_data();
        data.structure[1][1] = vec![0, 1];
        let report = data.validate().unwrap();
        assert!(report.violations.contains(&Violation::MissingDual { i: 1 }), "{report}");
    }

    #[test]
    fn fib_products() {
        let fib = builtin_fib();
        let pi = fib.basis_element(1).unwrap();
        assert_eq!(fib.multiply(&pi, &pi).unwrap(), FusionElement(vec![1, 1]));
        let x = FusionElement(vec![3, -2]);
        assert_eq!(fib.multiply(&fib.basis_element(0).unwrap(), &x).unwrap(), x);
    }

    #[test]
    fn vec_s3_products_follow_group_table() {
        let g = builtin_group("S3").unwrap();
        let ring = builtin_vec_g(&g).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                let prod = ring
                    .multiply(&ring.basis_element(a).unwrap(), &ring.basis_element(b).unwrap())
                    .unwrap();
                assert_eq!(prod, FusionElement::basis(6, g.mul(a, b)));
            }
        }
    }

    #[test]
    fn fusion_matrices() {
        let fib = builtin_fib();
        assert_eq!(fib.fusion_matrix(1).unwrap(), DMatrix::from_row_slice(2, 2, &[0, 1, 1, 1]));
        assert_eq!(fib.fusion_matrix(0).unwrap(), DMatrix::identity(2, 2));
        assert!(matches!(fib.fusion_matrix(2), Err(FusionError::IndexOutOfRange { .. })));

        let rep = builtin_rep_g(&builtin_character_table("S3").unwrap()).unwrap();
        assert_eq!(rep.labels(), ["triv", "sign", "std"]);
        let std = rep.index_of("std").unwrap();
        assert_eq!(
            rep.fusion_matrix(std).unwrap(),
            DMatrix::from_row_slice(3, 3, &[0, 0, 1, 0, 0, 1, 1, 1, 1])
        );
    }

    #[test]
    fn fpdims_of_builtins() {
        let fib = builtin_fib();
        assert!((fib.fpdim_simple(1).unwrap() - phi()).abs() < 1e-12);
        assert!((fib.fpdim_simple(1).unwrap() - 2.0 * (std::f64::consts::PI / 5.0).cos()).abs() < 1e-12);

        let vec_c2 = builtin_vec_g(&builtin_group("C2").unwrap()).unwrap();
        assert_eq!(vec_c2.rank(), 2);
        for k in 0..2 {
            assert!((vec_c2.fpdim_simple(k).unwrap() - 1.0).abs() < 1e-12);
        }

        let rep = builtin_rep_g(&builtin_character_table("S3").unwrap()).unwrap();
        assert!((rep.fpdim_simple(2).unwrap() - 2.0).abs() < 1e-12);
        let regular = rep.element(vec![1, 1, 2]).unwrap();
        assert!((rep.fpdim(&regular).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn fpdim_of_objects() {
        let fib = builtin_fib();
        let x = FusionElement(vec![1, 1]);
        assert!((fib.fpdim(&x).unwrap() - phi() * phi()).abs() < 1e-12);
        assert_eq!(fib.fpdim(&FusionElement::zero(2)).unwrap(), 0.0);
        assert!(matches!(
            fib.fpdim(&FusionElement(vec![1, -1])),
            Err(FusionError::NegativeCoefficient { index: 1, value: -1 })
        ));
        assert!(matches!(fib.fpdim(&FusionElement(vec![1])), Err(FusionError::LengthMismatch { .. })));
    }

    #[test]
    fn dual_fusion_matrix_is_transpose() {
        let mut rings = vec![builtin_fib()];
        for name in ["C3", "C5", "S3", "S4", "D4", "D5"] {
            rings.push(builtin_vec_g(&builtin_group(name).unwrap()).unwrap());
            rings.push(builtin_rep_g(&builtin_character_table(name).unwrap()).unwrap());
        }
        for ring in &rings {
            for k in 0..ring.rank() {
                assert_eq!(
                    ring.fusion_matrix(ring.dual(k)).unwrap(),
                    ring.fusion_matrix(k).unwrap().transpose()
                );
            }
        }
    }
}
