//! Stability functions and Harder-Narasimhan filtrations on representations of
//! type-A quivers, where every indecomposable is a thin interval module.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::k0_module::{equivariance_residual, fib_on_a4_action, CentralCharge, K0Error, K0ModuleAction};

/// Absolute tolerance for phase comparisons and for the boundary of the stability region.
pub const PHASE_TOL: f64 = 1e-9;
/// Interval supports are enumerated as bitmasks; this bounds their length.
pub const MAX_VERTICES: usize = 30;

#[derive(Debug, Error)]
pub enum QuiverError {
    #[error("invalid quiver: {0}")]
    Shape(String),
    #[error("interval [{a},{b}] is not inside 1..={n}")]
    IntervalOutOfRange { a: usize, b: usize, n: usize },
    #[error("Z({simple}) = {value} is outside the upper half plane and the negative real axis")]
    InvalidCharge { simple: String, value: Complex64 },
    #[error("charge has {got} values, quiver has {n} vertices")]
    ChargeLength { got: usize, n: usize },
    #[error("phase of the zero class is undefined")]
    ZeroClass,
    #[error("charge is not equivariant for the table: residual {residual:.3e}")]
    NotEquivariant { residual: f64 },
    #[error("object table has no entry for {0}")]
    MissingEntry(Interval),
    #[error("object table does not lift the K0 action: {0}")]
    ShadowMismatch(String),
    #[error("total dimension {0} exceeds the oracle cap")]
    DimensionCap(usize),
    #[error("the zero representation has no phase")]
    ZeroRepresentation,
    #[error(transparent)]
    K0(#[from] K0Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    /// Arrow `i → i+1`.
    R,
    /// Arrow `i+1 → i`.
    L,
}

/// A quiver with underlying graph `1 - 2 - ... - n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeAQuiver {
    n: usize,
    orientation: Vec<Orientation>,
}

impl TypeAQuiver {
    pub fn new(n: usize, orientation: Vec<Orientation>) -> Result<Self, QuiverError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(QuiverError::Shape(format!("n = {n} must lie in 1..={MAX_VERTICES}")));
        }
        if orientation.len() != n - 1 {
            return Err(QuiverError::Shape(format!(
                "{} orientation entries for {n} vertices",
                orientation.len()
            )));
        }
        Ok(TypeAQuiver { n, orientation })
    }

    /// `1 → 2 ← 3 → 4`.
    pub fn bipartite_a4() -> Self {
        TypeAQuiver { n: 4, orientation: vec![Orientation::R, Orientation::L, Orientation::R] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn orientation(&self) -> &[Orientation] {
        &self.orientation
    }

    /// Arrows `(source, target)` with 1-based vertices, one per edge in edge order.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        self.orientation
            .iter()
            .enumerate()
            .map(|(e, o)| match o {
                Orientation::R => (e + 1, e + 2),
                Orientation::L => (e + 2, e + 1),
            })
            .collect()
    }

    pub fn simple_labels(&self) -> Vec<String> {
        (1..=self.n).map(|k| format!("S{k}")).collect()
    }

    pub fn interval(&self, a: usize, b: usize) -> Result<Interval, QuiverError> {
        if a == 0 || a > b || b > self.n {
            return Err(QuiverError::IntervalOutOfRange { a, b, n: self.n });
        }
        Ok(Interval { a, b })
    }
}

/// The thin indecomposable supported on the vertices `a..=b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub a: usize,
    pub b: usize,
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.a, self.b)
    }
}

impl Interval {
    pub fn len(&self) -> usize {
        self.b - self.a + 1
    }

    /// Intervals always contain at least one vertex.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: usize) -> bool {
        self.a <= v && v <= self.b
    }

    fn mask(&self) -> u64 {
        ((1u64 << self.len()) - 1) << self.a
    }
}

/// A direct sum of interval modules, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeARep {
    intervals: Vec<Interval>,
}

impl TypeARep {
    pub fn new(quiver: &TypeAQuiver, mut intervals: Vec<Interval>) -> Result<Self, QuiverError> {
        for iv in &intervals {
            quiver.interval(iv.a, iv.b)?;
        }
        intervals.sort();
        Ok(TypeARep { intervals })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn dim_vector(&self, quiver: &TypeAQuiver) -> Vec<i64> {
        class_of(quiver, &self.intervals)
    }
}

/// All `n(n+1)/2` intervals ordered by `(a, b)`.
pub fn indecomposables(quiver: &TypeAQuiver) -> Vec<Interval> {
    let n = quiver.n;
    (1..=n).flat_map(|a| (a..=n).map(move |b| Interval { a, b })).collect()
}

pub fn dim_vector(interval: Interval, quiver: &TypeAQuiver) -> Vec<i64> {
    (1..=quiver.n).map(|v| interval.contains(v) as i64).collect()
}

/// Sum of the dimension vectors of `intervals`.
pub fn class_of(quiver: &TypeAQuiver, intervals: &[Interval]) -> Vec<i64> {
    let mut class = vec![0; quiver.n];
    for iv in intervals {
        for v in iv.a..=iv.b {
            class[v - 1] += 1;
        }
    }
    class
}

fn mask_to_vertices(mask: u64) -> Vec<usize> {
    (0..64).filter(|v| mask >> v & 1 == 1).collect()
}

fn mask_class(quiver: &TypeAQuiver, mask: u64) -> Vec<i64> {
    (1..=quiver.n).map(|v| (mask >> v & 1) as i64).collect()
}

/// Maximal runs of consecutive vertices in `mask`.
fn components(mask: u64) -> Vec<Interval> {
    let mut out = Vec::new();
    let mut v = 0;
    while v < 64 {
        if mask >> v & 1 == 1 {
            let a = v;
            while v < 64 && mask >> v & 1 == 1 {
                v += 1;
            }
            out.push(Interval { a, b: v - 1 });
        } else {
            v += 1;
        }
    }
    out
}

fn closed_masks(interval: Interval, quiver: &TypeAQuiver) -> Vec<u64> {
    let arrows: Vec<(usize, usize)> = quiver
        .arrows()
        .into_iter()
        .filter(|&(s, t)| interval.contains(s) && interval.contains(t))
        .collect();
    let len = interval.len();
    let mut masks: Vec<u64> = (0..1u64 << len)
        .map(|m| m << interval.a)
        .filter(|&m| arrows.iter().all(|&(s, t)| m >> s & 1 == 0 || m >> t & 1 == 1))
        .collect();
    masks.sort_by_key(|&m| (m.count_ones(), mask_to_vertices(m)));
    masks
}

/// Supports of the subrepresentations of an interval module: the subsets of `[a, b]`
/// closed under the arrows inside `[a, b]`, ordered by size and then lexicographically.
pub fn submodule_supports(interval: Interval, quiver: &TypeAQuiver) -> Vec<Vec<usize>> {
    closed_masks(interval, quiver).into_iter().map(mask_to_vertices).collect()
}

/// Phase in `(0, 1]` of a point of the upper half plane or the negative real axis.
pub fn phase_of(z: Complex64) -> Option<f64> {
    if z.im > 0.0 {
        Some(z.im.atan2(z.re) / PI)
    } else if z.re < 0.0 {
        Some(1.0)
    } else {
        None
    }
}

/// A central charge on the vertex simples, each of which lies in the region
/// `{ r·e^{iπt} : r > 0, 0 < t ≤ 1 }`. The region is closed under addition, so every
/// nonzero class of the heart lands there too.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityFunction {
    charge: CentralCharge,
    tol: f64,
}

impl StabilityFunction {
    pub fn new(charge: CentralCharge, quiver: &TypeAQuiver) -> Result<Self, QuiverError> {
        Self::with_tol(charge, quiver, PHASE_TOL)
    }

    pub fn with_tol(mut charge: CentralCharge, quiver: &TypeAQuiver, tol: f64) -> Result<Self, QuiverError> {
        if charge.values.len() != quiver.n {
            return Err(QuiverError::ChargeLength { got: charge.values.len(), n: quiver.n });
        }
        for (k, z) in charge.values.iter_mut().enumerate() {
            let on_axis = z.im.abs() <= tol && z.re < -tol;
            if !(z.im > tol || on_axis) {
                let simple = charge.lattice.get(k).cloned().unwrap_or_else(|| format!("S{}", k + 1));
                return Err(QuiverError::InvalidCharge { simple, value: *z });
            }
            if on_axis {
                z.im = 0.0;
            }
        }
        Ok(StabilityFunction { charge, tol })
    }

    pub fn from_values(values: Vec<Complex64>, quiver: &TypeAQuiver) -> Result<Self, QuiverError> {
        let charge = CentralCharge::new(quiver.simple_labels(), values)?;
        Self::new(charge, quiver)
    }

    pub fn charge(&self) -> &CentralCharge {
        &self.charge
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn z(&self, class: &[i64]) -> Complex64 {
        self.charge.evaluate(class)
    }

    /// Phase of a nonzero non-negative class.
    pub fn phase(&self, class: &[i64]) -> Result<f64, QuiverError> {
        if class.iter().all(|&c| c == 0) {
            return Err(QuiverError::ZeroClass);
        }
        let z = self.z(class);
        // Valid charges never leave the region on non-negative classes; only sums that cancel
        // to roughly zero imaginary part need the axis rule.
        Ok(phase_of(z).unwrap_or(1.0))
    }

    pub fn phase_of_interval(&self, interval: Interval, quiver: &TypeAQuiver) -> f64 {
        self.phase(&dim_vector(interval, quiver)).expect("intervals are nonzero")
    }

    fn phase_of_mask(&self, quiver: &TypeAQuiver, mask: u64) -> f64 {
        self.phase(&mask_class(quiver, mask)).expect("nonempty support")
    }
}

fn check_bounds(interval: Interval, quiver: &TypeAQuiver) {
    assert!(
        interval.a >= 1 && interval.a <= interval.b && interval.b <= quiver.n,
        "interval {interval} outside the quiver"
    );
}

/// Every nonzero proper subrepresentation has phase at most that of `interval`.
pub fn is_semistable(z: &StabilityFunction, interval: Interval, quiver: &TypeAQuiver) -> bool {
    destabilizers(z, interval, quiver, false).is_empty()
}

/// Every nonzero proper subrepresentation has phase strictly below that of `interval`.
pub fn is_stable(z: &StabilityFunction, interval: Interval, quiver: &TypeAQuiver) -> bool {
    destabilizers(z, interval, quiver, true).is_empty()
}

/// Supports of the nonzero proper subrepresentations whose phase exceeds (or, when
/// `strict`, reaches) the phase of `interval`.
pub fn destabilizers(z: &StabilityFunction, interval: Interval, quiver: &TypeAQuiver, strict: bool) -> Vec<Vec<usize>> {
    check_bounds(interval, quiver);
    let own = z.phase_of_interval(interval, quiver);
    let full = interval.mask();
    closed_masks(interval, quiver)
        .into_iter()
        .filter(|&m| m != 0 && m != full)
        .filter(|&m| {
            let p = z.phase_of_mask(quiver, m);
            if strict {
                p >= own - z.tol
            } else {
                p > own + z.tol
            }
        })
        .map(mask_to_vertices)
        .collect()
}

/// One graded piece of a Harder-Narasimhan filtration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HnPiece {
    pub phase: f64,
    pub intervals: Vec<Interval>,
}

impl HnPiece {
    pub fn class(&self, quiver: &TypeAQuiver) -> Vec<i64> {
        class_of(quiver, &self.intervals)
    }
}

/// Harder-Narasimhan filtration of a direct sum of intervals, as graded pieces of
/// strictly decreasing phase.
///
/// Each summand is filtered on its own by peeling off its maximal destabilizing
/// subrepresentation (maximal phase, then maximal dimension) and recursing on the
/// components of the quotient; equal-phase pieces of all summands are then merged.
pub fn hn_filtration(z: &StabilityFunction, rep: &TypeARep, quiver: &TypeAQuiver) -> Vec<HnPiece> {
    let mut pieces = Vec::new();
    for &iv in rep.intervals() {
        check_bounds(iv, quiver);
        hn_interval(z, iv.mask(), quiver, &mut pieces);
    }
    merge_pieces(pieces, z.tol)
}

/// Appends the filtration of the thin module supported on the connected `support`.
fn hn_interval(z: &StabilityFunction, support: u64, quiver: &TypeAQuiver, out: &mut Vec<HnPiece>) {
    let iv = components(support)[0];
    let candidates: Vec<(u64, f64)> = closed_masks(iv, quiver)
        .into_iter()
        .filter(|&m| m != 0)
        .map(|m| (m, z.phase_of_mask(quiver, m)))
        .collect();
    let best_phase = candidates.iter().map(|c| c.1).fold(f64::MIN, f64::max);
    // Maximal phase, then maximal size, then the lexicographically first support.
    let best_size = candidates
        .iter()
        .filter(|c| c.1 >= best_phase - z.tol)
        .map(|c| c.0.count_ones())
        .max()
        .expect("the full support is a candidate");
    let &(dest, dest_phase) = candidates
        .iter()
        .find(|c| c.1 >= best_phase - z.tol && c.0.count_ones() == best_size)
        .expect("nonempty");
    out.push(HnPiece { phase: dest_phase, intervals: components(dest) });
    for rest in components(support & !dest) {
        hn_interval(z, rest.mask(), quiver, out);
    }
}

fn merge_pieces(mut pieces: Vec<HnPiece>, tol: f64) -> Vec<HnPiece> {
    pieces.sort_by(|x, y| y.phase.total_cmp(&x.phase));
    let mut merged: Vec<HnPiece> = Vec::new();
    for p in pieces {
        match merged.last_mut() {
            Some(last) if (last.phase - p.phase).abs() <= tol => last.intervals.extend(p.intervals),
            _ => merged.push(p),
        }
    }
    for m in merged.iter_mut() {
        m.intervals.sort();
    }
    merged
}

/// The golden ratio `(1 + √5)/2 = 2cos(π/5)`.
pub fn golden_ratio() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

/// The `Fib`-equivariant charge on the bipartite `A4` quiver whose interval charges
/// form the `I2(5)` root system: `Z(S1) = −1`, `Z(S2) = φe^{iπ/5}`, `Z(S3) = −φ`,
/// `Z(S4) = e^{iπ/5}`.
pub fn pentagon_charge() -> StabilityFunction {
    let phi = golden_ratio();
    let w = Complex64::from_polar(1.0, PI / 5.0);
    let values = vec![Complex64::new(-1.0, 0.0), w * phi, Complex64::new(-phi, 0.0), w];
    StabilityFunction::from_values(values, &TypeAQuiver::bipartite_a4()).expect("pentagon charge is valid")
}

/// Object-level action of one simple of a fusion ring on the intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectActionTable {
    pub simple: String,
    pub fpdim: f64,
    pub map: BTreeMap<Interval, Vec<Interval>>,
}

impl ObjectActionTable {
    /// The unit acting as the identity on every interval.
    pub fn identity(quiver: &TypeAQuiver) -> Self {
        let map = indecomposables(quiver).into_iter().map(|iv| (iv, vec![iv])).collect();
        ObjectActionTable { simple: "1".into(), fpdim: 1.0, map }
    }

    pub fn get(&self, interval: Interval) -> Result<&[Interval], QuiverError> {
        self.map.get(&interval).map(Vec::as_slice).ok_or(QuiverError::MissingEntry(interval))
    }

    /// The K0 matrix induced on the vertex simples (column `k` is the class of the
    /// image of `[k+1, k+1]`).
    pub fn shadow(&self, quiver: &TypeAQuiver) -> Result<DMatrix<i64>, QuiverError> {
        let n = quiver.n;
        let mut m = DMatrix::zeros(n, n);
        for k in 1..=n {
            let image = self.get(Interval { a: k, b: k })?;
            for (row, c) in class_of(quiver, image).into_iter().enumerate() {
                m[(row, k - 1)] = c;
            }
        }
        Ok(m)
    }

    /// Checks that every interval is mapped to a multiset whose class is `matrix · [interval]`.
    pub fn check_shadow(&self, matrix: &DMatrix<i64>, quiver: &TypeAQuiver) -> Result<(), QuiverError> {
        for iv in indecomposables(quiver) {
            let image = class_of(quiver, self.get(iv)?);
            let expected: Vec<i64> = (matrix * DMatrix::from_vec(quiver.n, 1, dim_vector(iv, quiver))).iter().copied().collect();
            if image != expected {
                return Err(QuiverError::ShadowMismatch(format!(
                    "{} ⊗ {iv} has class {image:?}, the K0 action gives {expected:?}",
                    self.simple
                )));
            }
        }
        Ok(())
    }
}

/// `Π` acting on the indecomposables of the bipartite `A4` quiver. Each interval is
/// paired with one partner; on the partner `Π` also returns the partner itself,
/// lifting `Π² = 1 + Π`.
pub fn fib_a4_object_action() -> ObjectActionTable {
    let quiver = TypeAQuiver::bipartite_a4();
    let iv = |a, b| Interval { a, b };
    let pairs = [
        (iv(1, 1), iv(3, 3)),
        (iv(4, 4), iv(2, 2)),
        (iv(1, 2), iv(2, 4)),
        (iv(3, 4), iv(1, 3)),
        (iv(2, 3), iv(1, 4)),
    ];
    let mut map = BTreeMap::new();
    for (short, long) in pairs {
        map.insert(short, vec![long]);
        let mut image = vec![short, long];
        image.sort();
        map.insert(long, image);
    }
    let table = ObjectActionTable { simple: "Pi".into(), fpdim: golden_ratio(), map };
    let action = fib_on_a4_action();
    let pi = action.matrix_for("Pi").expect("Fib has Pi");
    if let Err(e) = table.check_shadow(pi, &quiver) {
        panic!("fib_a4_object_action: {e}");
    }
    table
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CounterexampleKind {
    /// `A` semistable but some member of `C ⊗ A` is not, or the converse.
    SemistabilityNotPreserved,
    /// `A` semistable but a member of `C ⊗ A` has another phase.
    MemberPhase,
    /// `φ(C ⊗ A) ≠ φ(A)` computed from classes.
    ClassPhase,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub interval: Interval,
    pub kind: CounterexampleKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemistabilityReport {
    /// `max |Z·M − FPdim·Z|` for the table's K0 shadow `M`.
    pub residual: f64,
    pub checked: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl SemistabilityReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Compares semistability and phases of every interval `A` with those of `C ⊗ A`,
/// without requiring `Z` to be equivariant.
pub fn semistability_report(
    z: &StabilityFunction,
    table: &ObjectActionTable,
    quiver: &TypeAQuiver,
) -> Result<SemistabilityReport, QuiverError> {
    let residual = shadow_residual(z, table, quiver)?;
    let mut counterexamples = Vec::new();
    let ivs = indecomposables(quiver);
    for &a in &ivs {
        let members = table.get(a)?;
        let ss_a = is_semistable(z, a, quiver);
        let phase_a = z.phase_of_interval(a, quiver);
        let ss_members: Vec<bool> = members.iter().map(|&m| is_semistable(z, m, quiver)).collect();
        let all = ss_members.iter().all(|&s| s);
        let some = ss_members.iter().any(|&s| s);
        if ss_a != all || ss_a != some {
            counterexamples.push(Counterexample {
                interval: a,
                kind: CounterexampleKind::SemistabilityNotPreserved,
                detail: format!(
                    "{a} semistable = {ss_a}, members {}",
                    describe_members(members, &ss_members)
                ),
            });
        }
        if ss_a {
            for &m in members {
                let pm = z.phase_of_interval(m, quiver);
                if (pm - phase_a).abs() > z.tol {
                    counterexamples.push(Counterexample {
                        interval: a,
                        kind: CounterexampleKind::MemberPhase,
                        detail: format!("phase({a}) = {phase_a:.9}, phase({m}) = {pm:.9}"),
                    });
                }
            }
        }
        let image_phase = z.phase(&class_of(quiver, members))?;
        if (image_phase - phase_a).abs() > z.tol {
            counterexamples.push(Counterexample {
                interval: a,
                kind: CounterexampleKind::ClassPhase,
                detail: format!("phase({a}) = {phase_a:.9}, phase({} ⊗ {a}) = {image_phase:.9}", table.simple),
            });
        }
    }
    Ok(SemistabilityReport { residual, checked: ivs.len(), counterexamples })
}

fn describe_members(members: &[Interval], ss: &[bool]) -> String {
    let parts: Vec<String> = members.iter().zip(ss).map(|(m, s)| format!("{m}: {s}")).collect();
    parts.join(", ")
}

fn shadow_residual(z: &StabilityFunction, table: &ObjectActionTable, quiver: &TypeAQuiver) -> Result<f64, QuiverError> {
    let m = table.shadow(quiver)?;
    let zm = z.charge().compose(&m, z.charge().lattice.clone())?;
    Ok(zm
        .values
        .iter()
        .zip(&z.charge().values)
        .map(|(l, r)| (l - r * table.fpdim).norm())
        .fold(0.0, f64::max))
}

/// Semistability and phases are preserved by the table, for an equivariant `Z`.
pub fn check_equivariant_semistability(
    z: &StabilityFunction,
    table: &ObjectActionTable,
    quiver: &TypeAQuiver,
) -> Result<SemistabilityReport, QuiverError> {
    let residual = shadow_residual(z, table, quiver)?;
    if residual > z.tol {
        return Err(QuiverError::NotEquivariant { residual });
    }
    semistability_report(z, table, quiver)
}

/// `Z` is equivariant for a full K0 action on the vertex simples.
pub fn charge_residual(z: &StabilityFunction, action: &K0ModuleAction) -> Result<f64, QuiverError> {
    Ok(equivariance_residual(z.charge(), action)?)
}
