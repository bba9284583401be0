//! Brute-force semistability and Harder-Narasimhan chains for explicit quiver
//! representations over the field with two elements.
//!
//! Every subrepresentation is enumerated as a tuple of subspaces compatible with the
//! arrow maps, so nothing here relies on the structure of interval modules.

use crate::quiver_stability::{Interval, QuiverError, StabilityFunction, TypeAQuiver};

/// Largest total dimension accepted by the oracle.
pub const ORACLE_DIM_CAP: usize = 8;

/// A linear map over F2, stored as the images of the source basis vectors.
/// Vectors are bitmasks: bit `k` is the coordinate of the `k`-th basis vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Map {
    pub source: usize,
    pub target: usize,
    pub columns: Vec<u16>,
}

impl F2Map {
    pub fn apply(&self, v: u16) -> u16 {
        self.columns
            .iter()
            .enumerate()
            .filter(|(k, _)| v >> k & 1 == 1)
            .fold(0, |acc, (_, &c)| acc ^ c)
    }
}

/// A representation of a quiver on vertices `0..dims.len()` over F2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Rep {
    dims: Vec<usize>,
    maps: Vec<F2Map>,
}

impl F2Rep {
    pub fn new(dims: Vec<usize>, maps: Vec<F2Map>) -> Result<Self, QuiverError> {
        let total: usize = dims.iter().sum();
        if total > ORACLE_DIM_CAP {
            return Err(QuiverError::DimensionCap(total));
        }
        for m in &maps {
            if m.source >= dims.len() || m.target >= dims.len() || m.columns.len() != dims[m.source] {
                return Err(QuiverError::Shape(format!("map {} -> {} has the wrong shape", m.source, m.target)));
            }
            if m.columns.iter().any(|&c| (c as u32) >> dims[m.target] != 0) {
                return Err(QuiverError::Shape(format!("map {} -> {} leaves its target", m.source, m.target)));
            }
        }
        Ok(F2Rep { dims, maps })
    }

    /// The direct sum of interval modules: one coordinate per interval at each of its
    /// vertices, with identity maps along the arrows inside each interval.
    pub fn from_intervals(quiver: &TypeAQuiver, intervals: &[Interval]) -> Result<Self, QuiverError> {
        let n = quiver.n();
        for iv in intervals {
            quiver.interval(iv.a, iv.b)?;
        }
        // coords[v][j] is the coordinate index of interval j at vertex v.
        let mut dims = vec![0usize; n];
        let mut coords = vec![vec![None; intervals.len()]; n];
        for (j, iv) in intervals.iter().enumerate() {
            for v in iv.a..=iv.b {
                coords[v - 1][j] = Some(dims[v - 1]);
                dims[v - 1] += 1;
            }
        }
        let total: usize = dims.iter().sum();
        if total > ORACLE_DIM_CAP {
            return Err(QuiverError::DimensionCap(total));
        }
        let maps = quiver
            .arrows()
            .into_iter()
            .map(|(s, t)| {
                let mut columns = vec![0u16; dims[s - 1]];
                for j in 0..intervals.len() {
                    if let (Some(x), Some(y)) = (coords[s - 1][j], coords[t - 1][j]) {
                        columns[x] = 1 << y;
                    }
                }
                F2Map { source: s - 1, target: t - 1, columns }
            })
            .collect();
        F2Rep::new(dims, maps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
}

/// A subspace of `F2^d` for `d ≤ 8`, as its set of members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Subspace {
    members: [u64; 4],
    dim: usize,
}

impl Subspace {
    fn contains(&self, v: u16) -> bool {
        self.members[(v >> 6) as usize] >> (v & 63) & 1 == 1
    }

    fn is_subset(&self, other: &Subspace) -> bool {
        self.members.iter().zip(&other.members).all(|(a, b)| a & !b == 0)
    }

    fn span(basis: &[u16]) -> Subspace {
        let mut members = [0u64; 4];
        for combo in 0..1u32 << basis.len() {
            let v = basis
                .iter()
                .enumerate()
                .filter(|(k, _)| combo >> k & 1 == 1)
                .fold(0u16, |acc, (_, &b)| acc ^ b);
            members[(v >> 6) as usize] |= 1 << (v & 63);
        }
        Subspace { members, dim: basis.len() }
    }

    fn basis(&self) -> Vec<u16> {
        // Members of a subspace of dimension k: pick greedily to get k independent vectors.
        let mut basis: Vec<u16> = Vec::new();
        let mut span = Subspace::span(&[]);
        for v in 0..256u16 {
            if basis.len() == self.dim {
                break;
            }
            if self.contains(v) && !span.contains(v) {
                basis.push(v);
                span = Subspace::span(&basis);
            }
        }
        basis
    }
}

/// All subspaces of `F2^d`, one reduced echelon basis each.
fn all_subspaces(d: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    for pivots in 0..1u32 << d {
        let pivot_list: Vec<usize> = (0..d).filter(|p| pivots >> p & 1 == 1).collect();
        // Row with pivot p may have free entries in non-pivot columns above p.
        let free: Vec<(usize, usize)> = pivot_list
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| (p + 1..d).filter(|c| pivots >> c & 1 == 0).map(move |c| (r, c)))
            .collect();
        for fill in 0..1u32 << free.len() {
            let mut rows: Vec<u16> = pivot_list.iter().map(|&p| 1 << p).collect();
            for (k, &(r, c)) in free.iter().enumerate() {
                if fill >> k & 1 == 1 {
                    rows[r] |= 1 << c;
                }
            }
            out.push(Subspace::span(&rows));
        }
    }
    out
}

/// A subrepresentation: one subspace per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubRep {
    spaces: Vec<Subspace>,
}

impl SubRep {
    pub fn dim_vector(&self) -> Vec<i64> {
        self.spaces.iter().map(|s| s.dim as i64).collect()
    }

    fn contains(&self, other: &SubRep) -> bool {
        other.spaces.iter().zip(&self.spaces).all(|(a, b)| a.is_subset(b))
    }
}

/// Every subrepresentation of `rep`, including zero and `rep` itself.
pub fn subrepresentations(rep: &F2Rep) -> Vec<SubRep> {
    let candidates: Vec<Vec<(Subspace, Vec<u16>)>> = rep
        .dims
        .iter()
        .map(|&d| all_subspaces(d).into_iter().map(|s| (s, s.basis())).collect())
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    extend(rep, &candidates, &mut chosen, &mut out);
    out
}

fn extend(rep: &F2Rep, candidates: &[Vec<(Subspace, Vec<u16>)>], chosen: &mut Vec<usize>, out: &mut Vec<SubRep>) {
    let v = chosen.len();
    if v == rep.dims.len() {
        let spaces = chosen.iter().enumerate().map(|(w, &k)| candidates[w][k].0).collect();
        out.push(SubRep { spaces });
        return;
    }
    'next: for k in 0..candidates[v].len() {
        chosen.push(k);
        for m in &rep.maps {
            let (s, t) = (m.source, m.target);
            if s.max(t) == v {
                let (_, basis) = &candidates[s][chosen[s]];
                let (target, _) = &candidates[t][chosen[t]];
                if basis.iter().any(|&b| !target.contains(m.apply(b))) {
                    chosen.pop();
                    continue 'next;
                }
            }
        }
        extend(rep, candidates, chosen, out);
        chosen.pop();
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub semistable: bool,
    /// `(phase, class)` of each HN subquotient, phases decreasing.
    pub pieces: Vec<(f64, Vec<i64>)>,
}

/// Semistability and the HN chain of `rep` under `z`, by exhaustive enumeration.
pub fn brute_force_oracle(rep: &F2Rep, z: &StabilityFunction) -> Result<OracleResult, QuiverError> {
    if rep.total_dim() == 0 {
        return Err(QuiverError::ZeroRepresentation);
    }
    if rep.dims.len() != z.charge().values.len() {
        return Err(QuiverError::ChargeLength { got: z.charge().values.len(), n: rep.dims.len() });
    }
    oracle_on(&subrepresentations(rep), z)
}

/// As [`brute_force_oracle`], reusing a precomputed list of subrepresentations.
pub fn oracle_on(subreps: &[SubRep], z: &StabilityFunction) -> Result<OracleResult, QuiverError> {
    let tol = z.tol();
    let full = subreps
        .iter()
        .max_by_key(|s| s.dim_vector().iter().sum::<i64>())
        .ok_or(QuiverError::ZeroRepresentation)?;
    let full_class = full.dim_vector();
    if full_class.iter().all(|&c| c == 0) {
        return Err(QuiverError::ZeroRepresentation);
    }
    let own = z.phase(&full_class)?;
    let mut semistable = true;
    for s in subreps {
        let class = s.dim_vector();
        if class.iter().any(|&c| c != 0) && class != full_class && z.phase(&class)? > own + tol {
            semistable = false;
            break;
        }
    }

    let mut pieces = Vec::new();
    let mut current_class = vec![0i64; full_class.len()];
    let mut current: Option<&SubRep> = None;
    while current_class != full_class {
        let mut best: Option<(&SubRep, f64, i64)> = None;
        for s in subreps {
            if let Some(c) = current {
                if !s.contains(c) {
                    continue;
                }
            }
            let class = s.dim_vector();
            let quotient: Vec<i64> = class.iter().zip(&current_class).map(|(a, b)| a - b).collect();
            let size: i64 = quotient.iter().sum();
            if size == 0 {
                continue;
            }
            let p = z.phase(&quotient)?;
            let better = match best {
                None => true,
                Some((_, bp, bs)) => p > bp + tol || (p >= bp - tol && size > bs),
            };
            if better {
                best = Some((s, p, size));
            }
        }
        let (s, p, _) = best.expect("the full representation is always a candidate");
        let class = s.dim_vector();
        pieces.push((p, class.iter().zip(&current_class).map(|(a, b)| a - b).collect()));
        current_class = class;
        current = Some(s);
    }
    Ok(OracleResult { semistable, pieces })
}
