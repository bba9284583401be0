//! K0 lattices with fusion-ring actions, fusion-equivariant central charges, and the
//! K0 shadow of the induction/forgetful duality between `vec_G` and `rep(G)`.
//!
//! Matrices act on column vectors: column `i` of `A_S` is the class of `S ⊗ L_i`
//! for the lattice basis `L_i`. With this convention `A_{S_i}·A_{S_j}` is the action
//! of `S_i ⊗ (S_j ⊗ −)`, and the module axiom reads
//! `A_{S_i}·A_{S_j} = Σ_k N[i][j][k]·A_{S_k}`.
//!
//! A central charge `Z` is a row vector; it is equivariant when
//! `Z·A_S = FPdim(S)·Z` for every simple `S`.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::finite_group::{CharacterTable, FiniteGroup, GroupError};
use crate::fusion_ring::{builtin_fib, builtin_rep_g, builtin_vec_g, FusionError, FusionRing};

/// Singular values below this fraction of the largest one count as zero.
pub const RANK_TOL: f64 = 1e-8;
/// Default residual tolerance for equivariance checks.
pub const EQUIVARIANCE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum K0Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A fusion ring acting on a free abelian group of finite rank.
#[derive(Debug, Clone, PartialEq)]
pub struct K0ModuleAction {
    ring: FusionRing,
    lattice: Vec<String>,
    matrices: Vec<DMatrix<i64>>,
}

/// Module-axiom failures found by [`K0ModuleAction::validate`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ActionReport {
    pub violations: Vec<String>,
}

impl ActionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ActionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "valid")
        } else {
            write!(f, "{}", self.violations.join("\n"))
        }
    }
}

impl K0ModuleAction {
    /// One matrix per ring basis element, in ring basis order. Only shapes are checked.
    pub fn new(ring: FusionRing, lattice: Vec<String>, matrices: Vec<DMatrix<i64>>) -> Result<Self, K0Error> {
        if matrices.len() != ring.rank() {
            return Err(K0Error::Shape(format!(
                "{} matrices for a ring of rank {}",
                matrices.len(),
                ring.rank()
            )));
        }
        let n = lattice.len();
        for (k, m) in matrices.iter().enumerate() {
            if m.shape() != (n, n) {
                return Err(K0Error::Shape(format!(
                    "matrix for {} is {}x{}, lattice rank is {n}",
                    ring.label(k),
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(K0ModuleAction { ring, lattice, matrices })
    }

    pub fn ring(&self) -> &FusionRing {
        &self.ring
    }

    pub fn lattice(&self) -> &[String] {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.len()
    }

    pub fn matrices(&self) -> &[DMatrix<i64>] {
        &self.matrices
    }

    pub fn matrix(&self, k: usize) -> &DMatrix<i64> {
        &self.matrices[k]
    }

    pub fn matrix_for(&self, label: &str) -> Option<&DMatrix<i64>> {
        self.ring.index_of(label).map(|k| &self.matrices[k])
    }

    /// Exact check of the unit axiom, the module axiom, and non-negativity.
    pub fn validate(&self) -> ActionReport {
        let mut violations = Vec::new();
        let n = self.rank();
        let ring = &self.ring;
        if self.matrices[ring.unit()] != DMatrix::identity(n, n) {
            violations.push(format!("unit {} does not act as the identity", ring.label(ring.unit())));
        }
        for (k, m) in self.matrices.iter().enumerate() {
            if m.iter().any(|&x| x < 0) {
                violations.push(format!("matrix for {} has a negative entry", ring.label(k)));
            }
        }
        for i in 0..ring.rank() {
            for j in 0..ring.rank() {
                let lhs = &self.matrices[i] * &self.matrices[j];
                let mut rhs = DMatrix::<i64>::zeros(n, n);
                for k in 0..ring.rank() {
                    let c = ring.structure_constant(i, j, k) as i64;
                    if c != 0 {
                        rhs += &self.matrices[k] * c;
                    }
                }
                if lhs != rhs {
                    violations.push(format!(
                        "A_{} A_{} != Σ_k N[{i}][{j}][k] A_k",
                        ring.label(i),
                        ring.label(j)
                    ));
                }
            }
        }
        ActionReport { violations }
    }

    /// The same action in another lattice basis: `A ↦ P⁻¹·A·P` for a unimodular `P`
    /// whose columns are the new basis vectors in old coordinates.
    pub fn change_basis(&self, p: &DMatrix<i64>, p_inv: &DMatrix<i64>) -> Result<Self, K0Error> {
        let n = self.rank();
        if p.shape() != (n, n) || p_inv.shape() != (n, n) || p * p_inv != DMatrix::identity(n, n) {
            return Err(K0Error::Shape("basis change is not an invertible integer matrix".into()));
        }
        let matrices = self.matrices.iter().map(|a| p_inv * a * p).collect();
        let lattice = (0..n).map(|i| format!("b{i}")).collect();
        K0ModuleAction::new(self.ring.clone(), lattice, matrices)
    }
}

/// A complex-valued homomorphism on a K0 lattice, given by its values on the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralCharge {
    pub lattice: Vec<String>,
    pub values: Vec<Complex64>,
}

impl CentralCharge {
    pub fn new(lattice: Vec<String>, values: Vec<Complex64>) -> Result<Self, K0Error> {
        if lattice.len() != values.len() {
            return Err(K0Error::Shape(format!("{} values for a lattice of rank {}", values.len(), lattice.len())));
        }
        Ok(CentralCharge { lattice, values })
    }

    pub fn zero(lattice: Vec<String>) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); lattice.len()];
        CentralCharge { lattice, values }
    }

    /// `Z(Σ c_i L_i) = Σ c_i Z(L_i)`.
    pub fn evaluate(&self, class: &[i64]) -> Complex64 {
        class.iter().zip(&self.values).map(|(&c, z)| z * c as f64).sum()
    }

    /// The row vector `Z·M` for an integer matrix `M` with `self.rank()` rows.
    pub fn compose(&self, m: &DMatrix<i64>, lattice: Vec<String>) -> Result<Self, K0Error> {
        if m.nrows() != self.values.len() || m.ncols() != lattice.len() {
            return Err(K0Error::Shape(format!(
                "cannot compose a charge on rank {} with a {}x{} matrix",
                self.values.len(),
                m.nrows(),
                m.ncols()
            )));
        }
        let values = (0..m.ncols())
            .map(|j| (0..m.nrows()).map(|i| self.values[i] * m[(i, j)] as f64).sum())
            .collect();
        Ok(CentralCharge { lattice, values })
    }

    pub fn scale(&self, s: f64) -> Self {
        CentralCharge { lattice: self.lattice.clone(), values: self.values.iter().map(|z| z * s).collect() }
    }

    pub fn max_abs_diff(&self, other: &CentralCharge) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Largest entry of `|Z·A_S − FPdim(S)·Z|` over all simples `S`.
pub fn equivariance_residual(z: &CentralCharge, action: &K0ModuleAction) -> Result<f64, K0Error> {
    if z.values.len() != action.rank() {
        return Err(K0Error::Shape(format!(
            "charge has {} values, lattice rank is {}",
            z.values.len(),
            action.rank()
        )));
    }
    let dims = action.ring.fpdims()?;
    let mut worst = 0.0f64;
    for (m, &d) in action.matrices.iter().zip(dims) {
        let za = z.compose(m, z.lattice.clone())?;
        for (lhs, rhs) in za.values.iter().zip(&z.values) {
            worst = worst.max((lhs - rhs * d).norm());
        }
    }
    Ok(worst)
}

pub fn is_equivariant(z: &CentralCharge, action: &K0ModuleAction, tol: f64) -> Result<bool, K0Error> {
    Ok(equivariance_residual(z, action)? <= tol)
}

/// Basis of `{ Z : Z·A_S = FPdim(S)·Z for all S }`.
///
/// The coefficients are real, so the complex solution space is the complexification
/// of the real null space of the stacked system `(A_Sᵀ − FPdim(S)·I)_S`. The returned
/// basis is the reduced row echelon form of that null space: each vector has a
/// leading entry 1 and zeros in the other vectors' pivot columns.
pub fn equivariant_charge_space(action: &K0ModuleAction) -> Result<Vec<CentralCharge>, K0Error> {
    let n = action.rank();
    let dims = action.ring.fpdims()?;
    let blocks = action.matrices.len();
    let mut stacked = DMatrix::<f64>::zeros(blocks * n, n);
    for (b, (m, &d)) in action.matrices.iter().zip(dims).enumerate() {
        for i in 0..n {
            for j in 0..n {
                // Row i of (Aᵀ − dI) is column i of A minus d·e_i.
                stacked[(b * n + i, j)] = m[(j, i)] as f64 - if i == j { d } else { 0.0 };
            }
        }
    }
    let basis = null_space(&stacked, RANK_TOL);
    Ok(basis
        .into_iter()
        .map(|v| CentralCharge {
            lattice: action.lattice.clone(),
            values: v.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
        })
        .collect())
}

/// Real null space of `m`, returned in reduced row echelon form.
pub fn null_space(m: &DMatrix<f64>, rel_tol: f64) -> Vec<Vec<f64>> {
    let n = m.ncols();
    if n == 0 {
        return Vec::new();
    }
    // Pad to at least n rows so that the SVD yields a full set of right singular vectors.
    let rows = m.nrows().max(n);
    let mut padded = DMatrix::<f64>::zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = rel_tol * sigma_max;
    let kernel: Vec<Vec<f64>> = (0..n)
        .filter(|&k| sigma_max == 0.0 || svd.singular_values[k] <= cutoff)
        .map(|k| v_t.row(k).iter().copied().collect())
        .collect();
    rref(kernel)
}

fn rref(mut rows: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    const ZERO: f64 = 1e-12;
    let k = rows.len();
    if k == 0 {
        return rows;
    }
    let n = rows[0].len();
    let mut lead = 0;
    for col in 0..n {
        if lead == k {
            break;
        }
        let pivot = (lead..k)
            .max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs()))
            .unwrap();
        if rows[pivot][col].abs() <= 1e-9 {
            continue;
        }
        rows.swap(lead, pivot);
        let p = rows[lead][col];
        for x in rows[lead].iter_mut() {
            *x /= p;
        }
        for r in 0..k {
            if r != lead {
                let f = rows[r][col];
                if f != 0.0 {
                    for c in 0..n {
                        rows[r][c] -= f * rows[lead][c];
                    }
                }
            }
        }
        lead += 1;
    }
    for row in rows.iter_mut() {
        for x in row.iter_mut() {
            if x.abs() < ZERO {
                *x = 0.0;
            }
        }
    }
    rows
}

/// The action of `Fib` on `K0` of the bipartite `A4` quiver `1 → 2 ← 3 → 4`.
///
/// Lattice basis `(S1, S2, S3, S4)`; `Π` sends `S1 ↦ S3`, `S3 ↦ S1 + S3`,
/// `S4 ↦ S2`, `S2 ↦ S2 + S4`.
pub fn fib_on_a4_action() -> K0ModuleAction {
    let fib = builtin_fib();
    let lattice = ["S1", "S2", "S3", "S4"].map(String::from).to_vec();
    #[rustfmt::skip]
    let pi = DMatrix::from_row_slice(4, 4, &[
        0, 0, 1, 0,
        0, 1, 0, 1,
        1, 0, 1, 0,
        0, 1, 0, 0,
    ]);
    K0ModuleAction::new(fib, lattice, vec![DMatrix::identity(4, 4), pi]).expect("shapes agree")
}

/// A fusion ring acting on itself by left multiplication.
pub fn regular_action(ring: &FusionRing) -> K0ModuleAction {
    let r = ring.rank();
    let matrices = (0..r)
        .map(|k| DMatrix::from_fn(r, r, |j, i| ring.structure_constant(k, i, j) as i64))
        .collect();
    K0ModuleAction::new(ring.clone(), ring.labels().to_vec(), matrices).expect("shapes agree")
}

/// Every basis element acting as the identity (a valid module only when all FPdims are 1).
pub fn identity_action(ring: &FusionRing, lattice: Vec<String>) -> K0ModuleAction {
    let n = lattice.len();
    let matrices = vec![DMatrix::identity(n, n); ring.rank()];
    K0ModuleAction::new(ring.clone(), lattice, matrices).expect("shapes agree")
}

/// Lattice labels of the separated McKay quiver: `L:<irrep>` then `R:<irrep>`.
pub fn separated_lattice(table: &CharacterTable) -> Vec<String> {
    let mut lattice: Vec<String> = table.labels().iter().map(|l| format!("L:{l}")).collect();
    lattice.extend(table.labels().iter().map(|l| format!("R:{l}")));
    lattice
}

/// `rep(G)` acting on `K0` of the separated McKay quiver: `W` acts on each side by
/// tensoring the irreducible label, `W ⊗ (side, V_i) = (side, W ⊗ V_i)`.
pub fn mckay_rep_action(table: &CharacterTable) -> Result<K0ModuleAction, K0Error> {
    let ring = builtin_rep_g(table)?;
    let r = table.num_irreps();
    let mut matrices = Vec::with_capacity(r);
    for w in 0..r {
        let mut m = DMatrix::<i64>::zeros(2 * r, 2 * r);
        for i in 0..r {
            for (j, mult) in table.tensor_multiplicities(w, i)?.into_iter().enumerate() {
                m[(j, i)] = mult as i64;
                m[(r + j, r + i)] = mult as i64;
            }
        }
        matrices.push(m);
    }
    K0ModuleAction::new(ring, separated_lattice(table), matrices)
}

/// Inputs to [`duality_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct DualityBundle {
    /// `F : K0(D^G) → K0(D)`, shape `rank(D) × rank(D^G)`.
    pub forgetful: DMatrix<i64>,
    /// `I : K0(D) → K0(D^G)`, shape `rank(D^G) × rank(D)`.
    pub induction: DMatrix<i64>,
    /// `vec_G` acting on `K0(D)`.
    pub action_g: K0ModuleAction,
    /// `rep(G)` acting on `K0(D^G)`.
    pub action_rep_g: K0ModuleAction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub statement: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualityReport {
    pub group_order: usize,
    pub checks: Vec<IdentityCheck>,
}

impl DualityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for DualityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "|G| = {}", self.group_order)?;
        for (n, c) in self.checks.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "({}) {verdict} {}: {}", c.name, c.statement, c.detail)?;
        }
        Ok(())
    }
}

/// Verifies the K0 identities of the induction/forgetful pair:
///
/// * (a) `F·I = Σ_g A_g` on `K0(D)`;
/// * (b) `I·F = Σ_W dim(W)·A_W` on `K0(D^G)`;
/// * (c) `Z∘F` is `rep(G)`-equivariant for every `G`-invariant basis charge `Z`;
/// * (d) `(Z∘F)∘I = |G|·Z`;
/// * (e) `(W∘I)∘F = |G|·W` for every `rep(G)`-equivariant basis charge `W`, and `W∘I` is `G`-invariant.
pub fn duality_check(bundle: &DualityBundle, tol: f64) -> Result<DualityReport, K0Error> {
    let d = bundle.action_g.rank();
    let dg = bundle.action_rep_g.rank();
    if bundle.forgetful.shape() != (d, dg) {
        return Err(K0Error::Shape(format!(
            "forgetful matrix is {}x{}, expected {d}x{dg}",
            bundle.forgetful.nrows(),
            bundle.forgetful.ncols()
        )));
    }
    if bundle.induction.shape() != (dg, d) {
        return Err(K0Error::Shape(format!(
            "induction matrix is {}x{}, expected {dg}x{d}",
            bundle.induction.nrows(),
            bundle.induction.ncols()
        )));
    }
    let group_order = bundle.action_g.ring().rank();
    let (f, i) = (&bundle.forgetful, &bundle.induction);
    let mut checks = Vec::new();

    let sum_g = bundle.action_g.matrices().iter().fold(DMatrix::<i64>::zeros(d, d), |acc, m| acc + m);
    let fi = f * i;
    let trivial = bundle.action_g.matrices().iter().all(|m| *m == DMatrix::identity(d, d));
    checks.push(IdentityCheck {
        name: "a",
        statement: "F·I = Σ_g A_g",
        passed: fi == sum_g,
        detail: if fi == sum_g {
            if trivial {
                format!("holds; G acts trivially so F·I = {group_order}·Id")
            } else {
                "holds".to_string()
            }
        } else {
            format!("F·I = {:?}, Σ_g A_g = {:?}", rows(&fi), rows(&sum_g))
        },
    });

    let rep_ring = bundle.action_rep_g.ring();
    let rep_dims = rep_ring.fpdims()?;
    let mut regular = DMatrix::<i64>::zeros(dg, dg);
    for (m, &dim) in bundle.action_rep_g.matrices().iter().zip(rep_dims) {
        let rounded = dim.round();
        if (dim - rounded).abs() > 1e-9 {
            return Err(K0Error::Shape(format!("rep(G) simple has non-integral dimension {dim}")));
        }
        regular += m * rounded as i64;
    }
    let if_ = i * f;
    checks.push(IdentityCheck {
        name: "b",
        statement: "I·F = Σ_W dim(W)·A_W",
        passed: if_ == regular,
        detail: if if_ == regular {
            "holds".to_string()
        } else {
            format!("I·F = {:?}, A_regular = {:?}", rows(&if_), rows(&regular))
        },
    });

    let invariant = equivariant_charge_space(&bundle.action_g)?;
    let mut worst_c = 0.0f64;
    let mut factors = Vec::new();
    let mut worst_d = 0.0f64;
    for z in &invariant {
        let pulled = z.compose(f, bundle.action_rep_g.lattice().to_vec())?;
        worst_c = worst_c.max(equivariance_residual(&pulled, &bundle.action_rep_g)?);
        let back = pulled.compose(i, z.lattice.clone())?;
        worst_d = worst_d.max(back.max_abs_diff(&z.scale(group_order as f64)));
        factors.push(scale_factor(&back, z));
    }
    checks.push(IdentityCheck {
        name: "c",
        statement: "Z∘F is rep(G)-equivariant for G-invariant Z",
        passed: worst_c <= tol,
        detail: format!("{} basis charges, max residual {worst_c:.3e}", invariant.len()),
    });
    let factor_text = describe_factors(&factors);
    checks.push(IdentityCheck {
        name: "d",
        statement: "(Z∘F)∘I = |G|·Z",
        passed: worst_d <= tol,
        detail: format!("rescaling factor {factor_text} (|G| = {group_order}), max residual {worst_d:.3e}"),
    });

    let equivariant = equivariant_charge_space(&bundle.action_rep_g)?;
    let mut worst_e = 0.0f64;
    let mut factors = Vec::new();
    for w in &equivariant {
        let pushed = w.compose(i, bundle.action_g.lattice().to_vec())?;
        worst_e = worst_e.max(equivariance_residual(&pushed, &bundle.action_g)?);
        let back = pushed.compose(f, w.lattice.clone())?;
        worst_e = worst_e.max(back.max_abs_diff(&w.scale(group_order as f64)));
        factors.push(scale_factor(&back, w));
    }
    checks.push(IdentityCheck {
        name: "e",
        statement: "(W∘I)∘F = |G|·W for rep(G)-equivariant W",
        passed: worst_e <= tol,
        detail: format!(
            "{} basis charges, rescaling factor {}, max residual {worst_e:.3e}",
            equivariant.len(),
            describe_factors(&factors)
        ),
    });

    Ok(DualityReport { group_order, checks })
}

fn rows(m: &DMatrix<i64>) -> Vec<Vec<i64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// `back / z` at the largest entry of `z`, so the factor is well conditioned.
fn scale_factor(back: &CentralCharge, z: &CentralCharge) -> Option<f64> {
    let (k, zk) = z.values.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
    (zk.norm() > 0.0).then(|| (back.values[k] / zk).re)
}

fn describe_factors(factors: &[Option<f64>]) -> String {
    let mut distinct: Vec<f64> = Vec::new();
    for f in factors.iter().flatten() {
        if !distinct.iter().any(|d| (d - f).abs() < 1e-9) {
            distinct.push(*f);
        }
    }
    match distinct.as_slice() {
        [] => "n/a".to_string(),
        [f] => format_number(*f),
        many => format!("{:?}", many.iter().map(|f| format_number(*f)).collect::<Vec<_>>()),
    }
}

fn format_number(x: f64) -> String {
    if (x - x.round()).abs() < 1e-9 {
        format!("{}", x.round() as i64)
    } else {
        format!("{x:.9}")
    }
}

/// The bundle for `G` acting on `K0(D^b K_ℓ) = Z²` through a representation `V`
/// of dimension `ℓ`, with `D^G` the separated McKay quiver of `(G, V)`.
///
/// `G` acts trivially on the simples of `K_ℓ`. The forgetful functor sends the simple
/// at `(side, V_i)` to `dim(V_i)` copies of the simple at `side`; induction sends the
/// simple at `side` to `Σ_i dim(V_i)·(side, V_i)`.
pub fn mckay_duality_bundle(group: &FiniteGroup, table: &CharacterTable) -> Result<DualityBundle, K0Error> {
    if group.order() != table.order() {
        return Err(K0Error::Shape(format!(
            "group of order {} with a character table of order {}",
            group.order(),
            table.order()
        )));
    }
    let vec_g = builtin_vec_g(group)?;
    let action_g = identity_action(&vec_g, vec!["1".into(), "2".into()]);
    let action_rep_g = mckay_rep_action(table)?;
    let dims = table.dims();
    let r = dims.len();
    let mut forgetful = DMatrix::<i64>::zeros(2, 2 * r);
    let mut induction = DMatrix::<i64>::zeros(2 * r, 2);
    for side in 0..2 {
        for (k, &dim) in dims.iter().enumerate() {
            forgetful[(side, side * r + k)] = dim as i64;
            induction[(side * r + k, side)] = dim as i64;
        }
    }
    Ok(DualityBundle { forgetful, induction, action_g, action_rep_g })
}

/// Trivial group: `D = D^G`, `F = I = Id`.
pub fn trivial_duality_bundle(lattice: Vec<String>) -> Result<DualityBundle, K0Error> {
    let group = crate::finite_group::builtin_group("C1")?;
    let table = crate::finite_group::builtin_character_table("C1")?;
    let n = lattice.len();
    let action_g = identity_action(&builtin_vec_g(&group)?, lattice.clone());
    let action_rep_g = identity_action(&builtin_rep_g(&table)?, lattice);
    Ok(DualityBundle {
        forgetful: DMatrix::identity(n, n),
        induction: DMatrix::identity(n, n),
        action_g,
        action_rep_g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_group::{builtin_character_table, builtin_group};
    use crate::fusion_ring::builtin_fib;

    fn phi() -> f64 {
        (1.0 + 5f64.sqrt()) / 2.0
    }

    #[test]
    fn fib_a4_is_a_module() {
        let action = fib_on_a4_action();
        assert!(action.validate().is_valid());
        let pi = action.matrix(1);
        assert_eq!(pi * pi, DMatrix::identity(4, 4) + pi);
        assert_eq!(action.matrix(0), &DMatrix::identity(4, 4));
    }

    #[test]
    fn fib_a4_spectral_radius_is_phi() {
        let pi = fib_on_a4_action().matrix(1).map(|x| x as f64);
        let eig = pi.clone().symmetric_eigenvalues();
        // Both 2x2 blocks are symmetric in a suitable ordering; the matrix itself is
        // symmetric here, so its eigenvalues are real.
        assert_eq!(pi, pi.transpose());
        let max = eig.iter().copied().fold(f64::MIN, f64::max);
        assert!((max - phi()).abs() < 1e-12);
        let min = eig.iter().copied().fold(f64::MAX, f64::min);
        assert!((min + 1.0 / phi()).abs() < 1e-12);
    }

    #[test]
    fn broken_action_fails_compatibility() {
        let action = fib_on_a4_action();
        let mut pi = action.matrix(1).clone();
        // Drop the loops: Π acts as an involution, Π² = 1 instead of 1 + Π.
        pi[(2, 2)] = 0;
        pi[(1, 1)] = 0;
        let broken =
            K0ModuleAction::new(builtin_fib(), action.lattice().to_vec(), vec![DMatrix::identity(4, 4), pi]).unwrap();
        let report = broken.validate();
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.contains("A_Pi A_Pi")), "{report}");
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        assert!(matches!(
            K0ModuleAction::new(builtin_fib(), vec!["x".into()], vec![DMatrix::identity(1, 1)]),
            Err(K0Error::Shape(_))
        ));
        assert!(matches!(
            K0ModuleAction::new(builtin_fib(), vec!["x".into()], vec![DMatrix::identity(2, 2); 2]),
            Err(K0Error::Shape(_))
        ));
    }

    #[test]
    fn regular_actions_are_modules() {
        let mut rings = vec![builtin_fib()];
        for name in ["S3", "D4", "C4"] {
            rings.push(builtin_rep_g(&builtin_character_table(name).unwrap()).unwrap());
            rings.push(builtin_vec_g(&builtin_group(name).unwrap()).unwrap());
        }
        for ring in &rings {
            let action = regular_action(ring);
            assert!(action.validate().is_valid(), "{:?}", ring.labels());
        }
    }

    #[test]
    fn fib_a4_charge_space() {
        let basis = equivariant_charge_space(&fib_on_a4_action()).unwrap();
        assert_eq!(basis.len(), 2);
        // RREF over (S1, S2, S3, S4): (1, 0, φ, 0) and (0, 1, 0, 1/φ).
        let expect = [[1.0, 0.0, phi(), 0.0], [0.0, 1.0, 0.0, 1.0 / phi()]];
        for (z, e) in basis.iter().zip(expect) {
            for (v, x) in z.values.iter().zip(e) {
                assert!((v - Complex64::new(x, 0.0)).norm() < 1e-12, "{:?}", z.values);
            }
        }
    }

    #[test]
    fn fib_a4_charge_space_symbolic() {
        // Over Q(φ) with φ² = φ + 1, write numbers as a + bφ.  The solution Z(S3) = φ Z(S1),
        // Z(S2) = φ Z(S4) satisfies all four equations Z·A_Π = φ·Z:
        //   S1: Z(S3)         = φ Z(S1)
        //   S2: Z(S2) + Z(S4) = φ Z(S2)  ⇔ φ + 1 = φ²
        //   S3: Z(S1) + Z(S3) = φ Z(S3)  ⇔ 1 + φ = φ²
        //   S4: Z(S2)         = φ Z(S4)
        type Q = (i64, i64);
        let mul = |x: Q, y: Q| (x.0 * y.0 + x.1 * y.1, x.0 * y.1 + x.1 * y.0 + x.1 * y.1);
        let add = |x: Q, y: Q| (x.0 + y.0, x.1 + y.1);
        let phi_q: Q = (0, 1);
        for (s1, s4) in [((1, 0), (0, 0)), ((0, 0), (1, 0)), ((2, -3), (5, 1))] {
            let z = [s1, mul(phi_q, s4), mul(phi_q, s1), s4];
            let a = fib_on_a4_action();
            let m = a.matrix(1);
            for col in 0..4 {
                let lhs = (0..4).fold((0, 0), |acc, row| {
                    let c = m[(row, col)];
                    add(acc, (z[row].0 * c, z[row].1 * c))
                });
                assert_eq!(lhs, mul(phi_q, z[col]));
            }
        }
    }

    #[test]
    fn trivial_vec_g_gives_full_space() {
        let ring = builtin_vec_g(&builtin_group("S3").unwrap()).unwrap();
        let action = identity_action(&ring, (0..3).map(|i| format!("x{i}")).collect());
        assert!(action.validate().is_valid());
        let basis = equivariant_charge_space(&action).unwrap();
        assert_eq!(basis.len(), 3);
        assert_eq!(basis[0].values[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn equivariance_checks() {
        let action = fib_on_a4_action();
        let lattice = action.lattice().to_vec();
        assert!(is_equivariant(&CentralCharge::zero(lattice.clone()), &action, 1e-9).unwrap());
        let bad = CentralCharge::new(
            lattice.clone(),
            vec![Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0)],
        )
        .unwrap();
        assert!(!is_equivariant(&bad, &action, 1e-9).unwrap());
        let wrong = CentralCharge::zero(vec!["a".into()]);
        assert!(matches!(is_equivariant(&wrong, &action, 1e-9), Err(K0Error::Shape(_))));
    }

    #[test]
    fn mckay_actions() {
        let s3 = builtin_character_table("S3").unwrap();
        let action = mckay_rep_action(&s3).unwrap();
        assert!(action.validate().is_valid());
        assert_eq!(action.matrix(0), &DMatrix::identity(6, 6));
        let block = DMatrix::from_row_slice(3, 3, &[0, 0, 1, 0, 0, 1, 1, 1, 1]);
        let std = action.matrix_for("std").unwrap();
        assert_eq!(std.view((0, 0), (3, 3)), block);
        assert_eq!(std.view((3, 3), (3, 3)), block);
        assert!(std.view((0, 3), (3, 3)).iter().all(|&x| x == 0));

        let s4 = builtin_character_table("S4").unwrap();
        assert!(mckay_rep_action(&s4).unwrap().validate().is_valid());
    }

    #[test]
    fn mckay_charges_are_proportional_to_dims() {
        for name in ["S3", "S4", "D4", "D5"] {
            let t = builtin_character_table(name).unwrap();
            let basis = equivariant_charge_space(&mckay_rep_action(&t).unwrap()).unwrap();
            assert_eq!(basis.len(), 2, "{name}");
            let dims = t.dims();
            let r = dims.len();
            for z in &basis {
                for side in 0..2 {
                    let base = z.values[side * r];
                    for (k, &d) in dims.iter().enumerate() {
                        assert!((z.values[side * r + k] - base * d as f64).norm() < 1e-9, "{name}");
                    }
                }
            }
        }
    }

    #[test]
    fn basis_change_preserves_dimension() {
        let action = fib_on_a4_action();
        // Elementary unimodular matrix: new b1 = S1 + S2.
        let mut p = DMatrix::<i64>::identity(4, 4);
        p[(1, 0)] = 1;
        let mut p_inv = DMatrix::<i64>::identity(4, 4);
        p_inv[(1, 0)] = -1;
        let moved = action.change_basis(&p, &p_inv).unwrap();
        assert!(moved.validate().violations.iter().all(|v| v.contains("negative")));
        assert_eq!(equivariant_charge_space(&moved).unwrap().len(), 2);
    }

    #[test]
    fn c2_kronecker_duality() {
        let g = builtin_group("C2").unwrap();
        let t = builtin_character_table("C2").unwrap();
        let bundle = mckay_duality_bundle(&g, &t).unwrap();
        assert_eq!(bundle.forgetful, DMatrix::from_row_slice(2, 4, &[1, 1, 0, 0, 0, 0, 1, 1]));
        assert_eq!(bundle.induction, bundle.forgetful.transpose());
        let report = duality_check(&bundle, 1e-9).unwrap();
        assert!(report.all_passed(), "{report}");
        assert_eq!(&bundle.forgetful * &bundle.induction, DMatrix::identity(2, 2) * 2);
    }

    #[test]
    fn trivial_group_duality() {
        let bundle = trivial_duality_bundle(vec!["a".into(), "b".into()]).unwrap();
        let report = duality_check(&bundle, 1e-9).unwrap();
        assert!(report.all_passed(), "{report}");
        assert_eq!(report.group_order, 1);
    }

    #[test]
    fn scaled_induction_fails_with_factor() {
        let g = builtin_group("C2").unwrap();
        let t = builtin_character_table("C2").unwrap();
        let mut bundle = mckay_duality_bundle(&g, &t).unwrap();
        bundle.induction *= 2;
        let report = duality_check(&bundle, 1e-9).unwrap();
        let d = report.check("d").unwrap();
        assert!(!d.passed);
        assert!(d.detail.starts_with("rescaling factor 4 "), "{}", d.detail);
        assert!(!report.check("a").unwrap().passed);
    }

    #[test]
    fn duality_shape_errors() {
        let g = builtin_group("C2").unwrap();
        let t = builtin_character_table("C2").unwrap();
        let mut bundle = mckay_duality_bundle(&g, &t).unwrap();
        bundle.forgetful = DMatrix::zeros(3, 3);
        assert!(matches!(duality_check(&bundle, 1e-9), Err(K0Error::Shape(_))));
    }
}
