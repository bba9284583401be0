//! Finite groups, character tables, tensor-product multiplicities and McKay quivers.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Tolerance for orthogonality and integrality of character data.
pub const CHARACTER_TOL: f64 = 1e-9;
/// Tensor multiplicities must be this close to an integer.
pub const MULTIPLICITY_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("malformed multiplication table: {0}")]
    Shape(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("malformed character table: {0}")]
    TableShape(String),
    #[error("invalid character table: {0}")]
    InvalidCharacterTable(String),
    #[error("multiplicity of {target} in {a} ⊗ {b} is {value}, not an integer")]
    NonIntegral { a: String, b: String, target: String, value: f64 },
    #[error("unknown builtin group {0:?}")]
    UnknownBuiltin(String),
    #[error("irrep index {index} out of range for {count} irreducibles")]
    IrrepOutOfRange { index: usize, count: usize },
    #[error("representation has {got} multiplicities, table has {count} irreducibles")]
    RepLength { got: usize, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Builds a group from its multiplication table `table[g][h] = gh`.
    pub fn new(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Shape("empty table".into()));
        }
        for (g, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::Shape(format!("row {g} has {} entries, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(GroupError::Shape(format!("entry {bad} in row {g} out of range")));
            }
        }
        let labels = match labels {
            Some(l) if l.len() != n => {
                return Err(GroupError::Shape(format!("{} labels for {n} elements", l.len())))
            }
            Some(l) => l,
            None => (0..n).map(|g| format!("g{g}")).collect(),
        };

        let is_perm = |items: Vec<usize>| {
            let mut seen = vec![false; n];
            items.into_iter().all(|x| !std::mem::replace(&mut seen[x], true))
        };
        for g in 0..n {
            if !is_perm(table[g].clone()) {
                return Err(GroupError::NotAGroup(format!("row {g} is not a permutation")));
            }
            if !is_perm((0..n).map(|h| table[h][g]).collect()) {
                return Err(GroupError::NotAGroup(format!("column {g} is not a permutation")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| GroupError::NotAGroup("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAGroup(format!("({a}·{b})·{c} != {a}·({b}·{c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup { table, identity, labels })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        (0..self.order()).find(|&h| self.table[g][h] == self.identity).expect("group elements are invertible")
    }

    /// Orbits of the conjugation action, each sorted, classes ordered by minimal element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> =
                (0..n).map(|x| self.mul(self.mul(x, g), self.inverse(x))).collect();
            class.sort_unstable();
            class.dedup();
            for &h in &class {
                class_of[h] = classes.len();
            }
            classes.push(class);
        }
        classes
    }

    /// Index of the conjugacy class of each element, in the order of [`Self::conjugacy_classes`].
    pub fn class_map(&self) -> Vec<usize> {
        let mut map = vec![0; self.order()];
        for (c, class) in self.conjugacy_classes().iter().enumerate() {
            for &g in class {
                map[g] = c;
            }
        }
        map
    }
}

/// Character table: rows are irreducibles, columns are conjugacy classes.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    class_sizes: Vec<usize>,
    characters: Vec<Vec<Complex64>>,
    labels: Vec<String>,
    class_of_element: Option<Vec<usize>>,
}

/// Problems found by [`CharacterTable::validate`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TableReport {
    pub violations: Vec<String>,
}

impl TableReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "valid")
        } else {
            write!(f, "{}", self.violations.join("\n"))
        }
    }
}

impl CharacterTable {
    /// Shape-checks the data; mathematical validity is left to [`Self::validate`].
    pub fn new(
        class_sizes: Vec<usize>,
        characters: Vec<Vec<Complex64>>,
        labels: Option<Vec<String>>,
        class_of_element: Option<Vec<usize>>,
    ) -> Result<Self, GroupError> {
        let classes = class_sizes.len();
        if classes == 0 {
            return Err(GroupError::TableShape("no classes".into()));
        }
        if class_sizes.contains(&0) {
            return Err(GroupError::TableShape("class of size zero".into()));
        }
        for (a, row) in characters.iter().enumerate() {
            if row.len() != classes {
                return Err(GroupError::TableShape(format!(
                    "character {a} has {} values for {classes} classes",
                    row.len()
                )));
            }
        }
        let labels = match labels {
            Some(l) if l.len() != characters.len() => {
                return Err(GroupError::TableShape(format!(
                    "{} labels for {} characters",
                    l.len(),
                    characters.len()
                )))
            }
            Some(l) => l,
            None => (0..characters.len()).map(|a| format!("chi{a}")).collect(),
        };
        if let Some(map) = &class_of_element {
            if map.iter().any(|&c| c >= classes) {
                return Err(GroupError::TableShape("element mapped to a missing class".into()));
            }
        }
        Ok(CharacterTable { class_sizes, characters, labels, class_of_element })
    }

    /// Evaluates class functions on class representatives of `group`.
    pub fn from_class_functions(
        group: &FiniteGroup,
        irreps: &[(&str, &dyn Fn(usize) -> Complex64)],
    ) -> Self {
        let classes = group.conjugacy_classes();
        let characters = irreps
            .iter()
            .map(|(_, chi)| classes.iter().map(|class| chi(class[0])).collect())
            .collect();
        CharacterTable {
            class_sizes: classes.iter().map(Vec::len).collect(),
            characters,
            labels: irreps.iter().map(|(l, _)| l.to_string()).collect(),
            class_of_element: Some(group.class_map()),
        }
    }

    pub fn order(&self) -> usize {
        self.class_sizes.iter().sum()
    }

    pub fn num_irreps(&self) -> usize {
        self.characters.len()
    }

    pub fn num_classes(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn characters(&self) -> &[Vec<Complex64>] {
        &self.characters
    }

    pub fn class_of_element(&self) -> Option<&[usize]> {
        self.class_of_element.as_deref()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Dimensions (values at the identity class, which is column 0).
    pub fn dims(&self) -> Vec<u64> {
        self.characters.iter().map(|row| row[0].re.round().max(0.0) as u64).collect()
    }

    pub fn trivial_index(&self) -> Option<usize> {
        self.characters
            .iter()
            .position(|row| row.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < CHARACTER_TOL))
    }

    fn inner(&self, x: impl Fn(usize) -> Complex64, y: impl Fn(usize) -> Complex64) -> Complex64 {
        let sum: Complex64 = (0..self.num_classes())
            .map(|c| x(c) * y(c).conj() * self.class_sizes[c] as f64)
            .sum();
        sum / self.order() as f64
    }

    /// Checks row orthogonality, integral positive dimensions and `Σ dim² = |G|`.
    pub fn validate(&self) -> Result<TableReport, GroupError> {
        let mut violations = Vec::new();
        let r = self.num_irreps();
        if r != self.num_classes() {
            return Err(GroupError::TableShape(format!(
                "{r} characters for {} classes",
                self.num_classes()
            )));
        }
        if let Some(map) = &self.class_of_element {
            if map.len() != self.order() {
                return Err(GroupError::TableShape(format!(
                    "class map covers {} elements, class sizes sum to {}",
                    map.len(),
                    self.order()
                )));
            }
            for (c, &size) in self.class_sizes.iter().enumerate() {
                let count = map.iter().filter(|&&x| x == c).count();
                if count != size {
                    violations.push(format!("class {c} has size {size} but {count} elements map to it"));
                }
            }
        }
        if self.class_sizes[0] != 1 {
            violations.push("first class must be the identity class (size 1)".into());
        }
        let mut dim_sq = 0.0;
        for (a, row) in self.characters.iter().enumerate() {
            let d = row[0];
            let rounded = d.re.round();
            if d.im.abs() > CHARACTER_TOL || (d.re - rounded).abs() > CHARACTER_TOL || rounded < 1.0 {
                violations.push(format!("{}: dimension {d} is not a positive integer", self.labels[a]));
            }
            dim_sq += d.norm_sqr();
        }
        if (dim_sq - self.order() as f64).abs() > CHARACTER_TOL {
            violations.push(format!("sum of squared dimensions is {dim_sq}, group order is {}", self.order()));
        }
        for a in 0..r {
            for b in a..r {
                let ip = self.inner(|c| self.characters[a][c], |c| self.characters[b][c]);
                let expected = if a == b { 1.0 } else { 0.0 };
                if (ip - Complex64::new(expected, 0.0)).norm() > CHARACTER_TOL {
                    violations.push(format!(
                        "<{}, {}> = {ip:.6}, expected {expected}",
                        self.labels[a], self.labels[b]
                    ));
                }
            }
        }
        Ok(TableReport { violations })
    }

    fn check_irrep(&self, a: usize) -> Result<(), GroupError> {
        if a < self.num_irreps() {
            Ok(())
        } else {
            Err(GroupError::IrrepOutOfRange { index: a, count: self.num_irreps() })
        }
    }

    /// Multiplicity of each irreducible in `V_a ⊗ V_b`.
    pub fn tensor_multiplicities(&self, a: usize, b: usize) -> Result<Vec<u64>, GroupError> {
        self.check_irrep(a)?;
        self.check_irrep(b)?;
        (0..self.num_irreps())
            .map(|t| {
                let value =
                    self.inner(|c| self.characters[a][c] * self.characters[b][c], |c| self.characters[t][c]);
                let rounded = value.re.round();
                if value.im.abs() > MULTIPLICITY_TOL || (value.re - rounded).abs() > MULTIPLICITY_TOL || rounded < 0.0
                {
                    Err(GroupError::NonIntegral {
                        a: self.labels[a].clone(),
                        b: self.labels[b].clone(),
                        target: self.labels[t].clone(),
                        value: value.re,
                    })
                } else {
                    Ok(rounded as u64)
                }
            })
            .collect()
    }

    /// Matrix `M[i][j]` = multiplicity of `V_j` in `V ⊗ V_i`, for `V = Σ_a v[a]·V_a`.
    pub fn tensor_matrix(&self, v: &[u64]) -> Result<Vec<Vec<u64>>, GroupError> {
        let r = self.num_irreps();
        if v.len() != r {
            return Err(GroupError::RepLength { got: v.len(), count: r });
        }
        let mut m = vec![vec![0u64; r]; r];
        for (a, &va) in v.iter().enumerate().filter(|(_, c)| **c > 0) {
            for (i, row) in m.iter_mut().enumerate() {
                for (slot, mult) in row.iter_mut().zip(self.tensor_multiplicities(a, i)?) {
                    *slot += va * mult;
                }
            }
        }
        Ok(m)
    }

    /// Multiplicity vector of a single irreducible.
    pub fn irrep(&self, a: usize) -> Result<Vec<u64>, GroupError> {
        self.check_irrep(a)?;
        let mut v = vec![0; self.num_irreps()];
        v[a] = 1;
        Ok(v)
    }
}

/// A finite quiver given by vertex labels and an arrow-multiplicity matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    pub vertices: Vec<String>,
    /// `adj[i][j]` is the number of arrows `i → j`.
    pub adj: Vec<Vec<u64>>,
}

impl Quiver {
    pub fn num_arrows(&self) -> u64 {
        self.adj.iter().flatten().sum()
    }

    /// Arrows as `(source, target)` pairs, repeated by multiplicity, in row-major order.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.adj.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                out.extend(std::iter::repeat_n((i, j), m as usize));
            }
        }
        out
    }

    /// Arrows keyed by vertex labels with multiplicity.
    pub fn labeled_arrows(&self) -> BTreeMap<(String, String), u64> {
        let mut out = BTreeMap::new();
        for (i, row) in self.adj.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                if m > 0 {
                    out.insert((self.vertices[i].clone(), self.vertices[j].clone()), m);
                }
            }
        }
        out
    }

    /// Graphviz DOT with one edge statement per arrow.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{name}\" {{\n");
        for v in &self.vertices {
            s.push_str(&format!("  \"{v}\";\n"));
        }
        for (i, j) in self.arrows() {
            s.push_str(&format!("  \"{}\" -> \"{}\";\n", self.vertices[i], self.vertices[j]));
        }
        s.push_str("}\n");
        s
    }

    /// Connected components of the underlying undirected graph.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for w in 0..n {
                    if !seen[w] && (self.adj[v][w] > 0 || self.adj[w][v] > 0) {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Classifies each connected component of the underlying graph as an affine
    /// Dynkin diagram, or returns `None` if some component is not one.
    pub fn affine_type(&self) -> Option<Vec<AffineDynkin>> {
        self.components().iter().map(|c| classify_affine(self, c)).collect()
    }
}

/// Affine (extended) simply-laced Dynkin diagrams; the index is the rank of the
/// finite diagram, so the affine diagram has `n + 1` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AffineDynkin {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
}

impl fmt::Display for AffineDynkin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineDynkin::A(n) => write!(f, "affine A{n}"),
            AffineDynkin::D(n) => write!(f, "affine D{n}"),
            AffineDynkin::E6 => write!(f, "affine E6"),
            AffineDynkin::E7 => write!(f, "affine E7"),
            AffineDynkin::E8 => write!(f, "affine E8"),
        }
    }
}

fn classify_affine(q: &Quiver, comp: &[usize]) -> Option<AffineDynkin> {
    let edges = |v: usize, w: usize| if v == w { 2 * q.adj[v][v] } else { q.adj[v][w] + q.adj[w][v] };
    let n = comp.len();
    if comp.iter().any(|&v| q.adj[v][v] > 0) {
        return None;
    }
    if n == 2 {
        return (edges(comp[0], comp[1]) == 2).then_some(AffineDynkin::A(1));
    }
    if comp.iter().any(|&v| comp.iter().any(|&w| edges(v, w) > 1)) {
        return None;
    }
    let degree: BTreeMap<usize, usize> =
        comp.iter().map(|&v| (v, comp.iter().filter(|&&w| edges(v, w) == 1).count())).collect();
    let edge_count: usize = degree.values().sum::<usize>() / 2;
    if edge_count == n {
        return degree.values().all(|&d| d == 2).then_some(AffineDynkin::A(n - 1));
    }
    if edge_count != n - 1 {
        return None;
    }
    // Trees: arm lengths from each branch vertex.
    let branches: Vec<usize> = comp.iter().copied().filter(|v| degree[v] >= 3).collect();
    let arm = |from: usize, first: usize| -> (usize, usize) {
        let (mut prev, mut cur, mut len) = (from, first, 1);
        while degree[&cur] == 2 {
            let next = comp.iter().copied().find(|&w| w != prev && edges(cur, w) == 1).unwrap();
            prev = cur;
            cur = next;
            len += 1;
        }
        (len, cur)
    };
    let arms = |b: usize| -> Vec<(usize, usize)> {
        let mut a: Vec<_> = comp.iter().copied().filter(|&w| edges(b, w) == 1).map(|w| arm(b, w)).collect();
        a.sort_unstable();
        a
    };
    match branches.as_slice() {
        [b] if degree[b] == 4 => {
            let lens: Vec<usize> = arms(*b).iter().map(|a| a.0).collect();
            (lens == [1, 1, 1, 1]).then_some(AffineDynkin::D(4))
        }
        [b] if degree[b] == 3 => match arms(*b).iter().map(|a| a.0).collect::<Vec<_>>().as_slice() {
            [2, 2, 2] => Some(AffineDynkin::E6),
            [1, 3, 3] => Some(AffineDynkin::E7),
            [1, 2, 5] => Some(AffineDynkin::E8),
            _ => None,
        },
        [b1, b2] if degree[b1] == 3 && degree[b2] == 3 => {
            let leaf_arms = |b: usize| arms(b).iter().filter(|a| a.0 == 1 && degree[&a.1] == 1).count();
            (leaf_arms(*b1) == 2 && leaf_arms(*b2) == 2).then_some(AffineDynkin::D(n - 1))
        }
        _ => None,
    }
}

/// Vertices = irreducibles; `i → j` with multiplicity of `V_j` in `V ⊗ V_i`.
pub fn mckay_quiver(table: &CharacterTable, v: &[u64]) -> Result<Quiver, GroupError> {
    Ok(Quiver { vertices: table.labels().to_vec(), adj: table.tensor_matrix(v)? })
}

/// Two copies of the irreducibles, arrows `L:i → R:j` for each McKay arrow `i → j`.
pub fn separated_mckay_quiver(table: &CharacterTable, v: &[u64]) -> Result<Quiver, GroupError> {
    let m = table.tensor_matrix(v)?;
    let r = table.num_irreps();
    let mut vertices: Vec<String> = table.labels().iter().map(|l| format!("L:{l}")).collect();
    vertices.extend(table.labels().iter().map(|l| format!("R:{l}")));
    let mut adj = vec![vec![0u64; 2 * r]; 2 * r];
    for i in 0..r {
        for j in 0..r {
            adj[i][r + j] = m[i][j];
        }
    }
    Ok(Quiver { vertices, adj })
}

type Perm = Vec<u8>;

fn compose(p: &Perm, q: &Perm) -> Perm {
    // (p ∘ q)(x) = p(q(x))
    q.iter().map(|&x| p[x as usize]).collect()
}

fn perm_order(p: &Perm) -> usize {
    let id: Perm = (0..p.len() as u8).collect();
    let mut cur = p.clone();
    let mut k = 1;
    while cur != id {
        cur = compose(p, &cur);
        k += 1;
    }
    k
}

fn cycle_notation(p: &Perm) -> String {
    let mut seen = vec![false; p.len()];
    let mut s = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        s.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            s.push_str(&(x + 1).to_string());
            x = p[x] as usize;
        }
        s.push(')');
    }
    if s.is_empty() {
        s.push('e');
    }
    s
}

/// Closure of the generators, elements ordered by (element order, lexicographic image).
fn permutation_group(generators: &[Perm]) -> (FiniteGroup, Vec<Perm>) {
    let degree = generators[0].len();
    let id: Perm = (0..degree as u8).collect();
    let mut elements = vec![id];
    let mut frontier = elements.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in generators {
                let y = compose(g, x);
                if !elements.contains(&y) {
                    elements.push(y.clone());
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    elements.sort_by_key(|p| (perm_order(p), p.clone()));
    let index_of = |p: &Perm| elements.iter().position(|q| q == p).unwrap();
    let table = elements
        .iter()
        .map(|g| elements.iter().map(|h| index_of(&compose(g, h))).collect())
        .collect();
    let labels = elements.iter().map(cycle_notation).collect();
    let group = FiniteGroup::new(table, Some(labels)).expect("permutation closure is a group");
    (group, elements)
}

fn cyclic(n: usize) -> FiniteGroup {
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    let labels = (0..n)
        .map(|k| match k {
            0 => "e".to_string(),
            1 => "a".to_string(),
            _ => format!("a^{k}"),
        })
        .collect();
    FiniteGroup::new(table, Some(labels)).expect("Z/n is a group")
}

fn symmetric(degree: usize) -> (FiniteGroup, Vec<Perm>) {
    let mut transposition: Perm = (0..degree as u8).collect();
    transposition.swap(0, 1);
    let cycle: Perm = (0..degree).map(|i| ((i + 1) % degree) as u8).collect();
    permutation_group(&[transposition, cycle])
}

fn dihedral(n: usize) -> (FiniteGroup, Vec<Perm>) {
    let rotation: Perm = (0..n).map(|i| ((i + 1) % n) as u8).collect();
    let reflection: Perm = (0..n).map(|i| ((n - i) % n) as u8).collect();
    permutation_group(&[rotation, reflection])
}

fn parse_cyclic(name: &str) -> Option<usize> {
    let n: usize = name.strip_prefix('C')?.parse().ok()?;
    (1..=12).contains(&n).then_some(n)
}

pub const BUILTIN_NAMES: &[&str] = &["C1..C12", "S3", "S4", "D4", "D5"];

/// Builtin groups: `C1`..`C12`, `S3`, `S4`, `D4` (order 8), `D5` (order 10).
pub fn builtin_group(name: &str) -> Result<FiniteGroup, GroupError> {
    if let Some(n) = parse_cyclic(name) {
        return Ok(cyclic(n));
    }
    match name {
        "S3" => Ok(symmetric(3).0),
        "S4" => Ok(symmetric(4).0),
        "D4" => Ok(dihedral(4).0),
        "D5" => Ok(dihedral(5).0),
        _ => Err(GroupError::UnknownBuiltin(name.to_string())),
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn perm_sign(p: &Perm) -> f64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1.0;
    for start in 0..p.len() {
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x] as usize;
            len += 1;
        }
        if len > 0 && len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

fn fixed_points(p: &Perm) -> f64 {
    p.iter().enumerate().filter(|(i, &x)| *i == x as usize).count() as f64
}

/// Character tables of the builtin groups, columns in [`FiniteGroup::conjugacy_classes`] order.
pub fn builtin_character_table(name: &str) -> Result<CharacterTable, GroupError> {
    if let Some(n) = parse_cyclic(name) {
        let group = cyclic(n);
        let labels: Vec<String> = (0..n)
            .map(|a| match (n, a) {
                (_, 0) => "triv".to_string(),
                (2, 1) => "sign".to_string(),
                _ => format!("chi{a}"),
            })
            .collect();
        let chars: Vec<Box<dyn Fn(usize) -> Complex64>> = (0..n)
            .map(|a| {
                Box::new(move |k: usize| Complex64::from_polar(1.0, 2.0 * PI * ((a * k) % n) as f64 / n as f64))
                    as Box<dyn Fn(usize) -> Complex64>
            })
            .collect();
        let irreps: Vec<(&str, &dyn Fn(usize) -> Complex64)> =
            labels.iter().zip(&chars).map(|(l, c)| (l.as_str(), c.as_ref())).collect();
        let mut table = CharacterTable::from_class_functions(&group, &irreps);
        // Round away the roundoff in exactly representable values (±1, ±i).
        for row in &mut table.characters {
            for z in row.iter_mut() {
                *z = Complex64::new(clean(z.re), clean(z.im));
            }
        }
        return Ok(table);
    }
    match name {
        "S3" => {
            let (group, perms) = symmetric(3);
            let sign = |g: usize| real(perm_sign(&perms[g]));
            let std = |g: usize| real(fixed_points(&perms[g]) - 1.0);
            Ok(CharacterTable::from_class_functions(
                &group,
                &[("triv", &|_| real(1.0)), ("sign", &sign), ("std", &std)],
            ))
        }
        "S4" => {
            let (group, perms) = symmetric(4);
            let sign = |g: usize| real(perm_sign(&perms[g]));
            let std3 = |g: usize| real(fixed_points(&perms[g]) - 1.0);
            let std3sign = |g: usize| real(perm_sign(&perms[g]) * (fixed_points(&perms[g]) - 1.0));
            // Permutation action on the three pair partitions {12|34, 13|24, 14|23} is triv + std2.
            let std2 = |g: usize| {
                let p = &perms[g];
                let partitions = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
                let norm = |(a, b): (usize, usize)| (a.min(b), a.max(b));
                let fixed = partitions
                    .iter()
                    .filter(|part| {
                        let mut img: Vec<_> =
                            part.iter().map(|&(a, b)| norm((p[a] as usize, p[b] as usize))).collect();
                        img.sort_unstable();
                        img == part.to_vec()
                    })
                    .count();
                real(fixed as f64 - 1.0)
            };
            Ok(CharacterTable::from_class_functions(
                &group,
                &[
                    ("triv", &|_| real(1.0)),
                    ("sign", &sign),
                    ("std2", &std2),
                    ("std3", &std3),
                    ("std3sign", &std3sign),
                ],
            ))
        }
        "D4" | "D5" => {
            let n = if name == "D4" { 4 } else { 5 };
            let (group, perms) = dihedral(n);
            // Rotation by k sends 0 to k and 1 to k+1; the reflection i ↦ k - i sends 1 to k-1.
            let info = |g: usize| {
                let p = &perms[g];
                let k = p[0] as usize;
                let rotation = p[1] as usize == (k + 1) % n;
                (rotation, k)
            };
            let parity = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
            let triv = |_: usize| real(1.0);
            let det = |g: usize| real(if info(g).0 { 1.0 } else { -1.0 });
            let rho = |j: usize| {
                move |g: usize| {
                    let (rotation, k) = info(g);
                    real(if rotation { clean(2.0 * (2.0 * PI * (j * k) as f64 / n as f64).cos()) } else { 0.0 })
                }
            };
            if n == 4 {
                let b1 = |g: usize| real(parity(info(g).1));
                let b2 = |g: usize| {
                    let (rotation, k) = info(g);
                    real(if rotation { parity(k) } else { -parity(k) })
                };
                Ok(CharacterTable::from_class_functions(
                    &group,
                    &[("triv", &triv), ("det", &det), ("b1", &b1), ("b2", &b2), ("rho", &rho(1))],
                ))
            } else {
                Ok(CharacterTable::from_class_functions(
                    &group,
                    &[("triv", &triv), ("sign", &det), ("rho1", &rho(1)), ("rho2", &rho(2))],
                ))
            }
        }
        _ => Err(GroupError::UnknownBuiltin(name.to_string())),
    }
}

fn clean(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-12 {
        r + 0.0
    } else {
        x
    }
}
