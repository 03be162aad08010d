//! Set partitions of `{1..k}`, the Special Symmetric class, the composition
//! with the cyclic shift γ, and the collapsed closed-walk graph.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest ground set the enumerators accept (Bell(12) = 4 213 597).
pub const MAX_K: usize = 12;

/// A set partition of `{1..k}`. Blocks are sorted internally and ordered by
/// their least element, so equal partitions compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from arbitrary block lists, validating coverage and
    /// canonicalising the order.
    pub fn new(k: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; k + 1];
        let mut blocks = blocks;
        for b in blocks.iter_mut() {
            if b.is_empty() {
                return Err(Error::domain("empty block"));
            }
            b.sort_unstable();
            for &x in b.iter() {
                if x == 0 || x > k {
                    return Err(Error::domain(format!("element {x} outside 1..={k}")));
                }
                if seen[x] {
                    return Err(Error::domain(format!("element {x} appears twice")));
                }
                seen[x] = true;
            }
        }
        if let Some(x) = (1..=k).find(|&x| !seen[x]) {
            return Err(Error::domain(format!("element {x} is missing")));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Partition { k, blocks })
    }

    /// Builds a partition from a block label per element (`labels[x-1]` is the
    /// block of `x`). Labels need not be contiguous.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut by_label: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &l) in labels.iter().enumerate() {
            by_label.entry(l).or_default().push(i + 1);
        }
        let mut blocks: Vec<Vec<usize>> = by_label.into_values().collect();
        blocks.sort_unstable_by_key(|b| b[0]);
        Partition {
            k: labels.len(),
            blocks,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block index of every element, `labels()[x-1]` for element `x`.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.k];
        for (bi, b) in self.blocks.iter().enumerate() {
            for &x in b {
                labels[x - 1] = bi;
            }
        }
        labels
    }

    /// The permutation that cycles each block in ascending order, as a
    /// 1-based image table (`perm[x]`, index 0 unused).
    pub fn as_permutation(&self) -> Vec<usize> {
        let mut perm = vec![0; self.k + 1];
        for b in &self.blocks {
            for (i, &x) in b.iter().enumerate() {
                perm[x] = b[(i + 1) % b.len()];
            }
        }
        perm
    }

    pub fn is_pair_partition(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    /// True when no two blocks cross (a < b < c < d with a,c in one block and
    /// b,d in another).
    pub fn is_noncrossing(&self) -> bool {
        let labels = self.labels();
        for (bi, b) in self.blocks.iter().enumerate() {
            for w in b.windows(2) {
                let (a, c) = (w[0], w[1]);
                // A block that enters (a, c) must stay inside it.
                for x in a + 1..c {
                    let other = labels[x - 1];
                    if other != bi {
                        let ob = &self.blocks[other];
                        if ob[0] < a || *ob.last().unwrap() > c {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

impl fmt::Display for Partition {
    /// Block notation such as `{1,4,5,8|2,3,6,7}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (bi, b) in self.blocks.iter().enumerate() {
            if bi > 0 {
                f.write_str("|")?;
            }
            for (i, x) in b.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
        }
        f.write_str("}")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::domain(format!("expected {{...}} block notation, got {s:?}")))?;
        let mut blocks = Vec::new();
        for part in inner.split('|') {
            let block = part
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::domain(format!("bad element {t:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        let k = blocks.iter().map(|b| b.len()).sum();
        Partition::new(k, blocks)
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 || k > MAX_K {
        return Err(Error::resource(format!(
            "k = {k} outside the enumeration range 1..={MAX_K}"
        )));
    }
    Ok(())
}

/// Calls `visit` with the restricted-growth string of every set partition of
/// `{1..k}`, in lexicographic order.
pub fn for_each_rgs(k: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(i: usize, max: usize, a: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if i == a.len() {
            visit(a);
            return;
        }
        for l in 0..=max + 1 {
            a[i] = l;
            rec(i + 1, max.max(l), a, visit);
        }
    }
    if k == 0 {
        return;
    }
    let mut a = vec![0; k];
    rec(1, 0, &mut a, &mut visit);
}

/// All set partitions of `{1..k}`, in restricted-growth-string order.
pub fn enumerate_set_partitions(k: usize) -> Result<Vec<Partition>> {
    check_k(k)?;
    let mut out = Vec::new();
    for_each_rgs(k, |a| out.push(Partition::from_labels(a)));
    Ok(out)
}

/// Special Symmetric test on a label vector.
///
/// Every block must be even, and for successive elements `a < b` of a block
/// every other block must meet the open gap `(a, b)` in an even number of
/// points. Reading the gap this way (rather than as maximal runs of
/// consecutive integers) keeps nested pairings such as `{1,8|2,5|3,4|6,7}`
/// inside the class.
fn labels_are_special_symmetric(labels: &[usize]) -> bool {
    let k = labels.len();
    let nb = labels.iter().max().map_or(0, |m| m + 1);
    let mut size = vec![0usize; nb];
    for &l in labels {
        size[l] += 1;
    }
    if size.iter().any(|s| s % 2 == 1) {
        return false;
    }
    let mut last = vec![usize::MAX; nb];
    let mut parity = vec![0u8; nb];
    for x in 0..k {
        let l = labels[x];
        if last[l] != usize::MAX {
            parity.iter_mut().for_each(|p| *p = 0);
            for &m in &labels[last[l] + 1..x] {
                parity[m] ^= 1;
            }
            if parity.iter().any(|&p| p == 1) {
                return false;
            }
        }
        last[l] = x;
    }
    true
}

pub fn is_special_symmetric(p: &Partition) -> bool {
    labels_are_special_symmetric(&p.labels())
}

/// SS(k): all Special Symmetric partitions of `{1..k}`. Empty for odd `k`.
pub fn enumerate_ss(k: usize) -> Result<Vec<Partition>> {
    check_k(k)?;
    let mut out = Vec::new();
    if k % 2 == 1 {
        return Ok(out);
    }
    for_each_rgs(k, |a| {
        if labels_are_special_symmetric(a) {
            out.push(Partition::from_labels(a));
        }
    });
    Ok(out)
}

/// NC_2(k): the non-crossing pair partitions, as the SS members with k/2
/// blocks.
pub fn enumerate_nc2(k: usize) -> Result<Vec<Partition>> {
    Ok(enumerate_ss(k)?
        .into_iter()
        .filter(|p| p.num_blocks() * 2 == p.k())
        .collect())
}

/// The permutation γπ ("apply π, then γ"), 1-based image table.
pub fn compose_gamma_permutation(p: &Partition) -> Vec<usize> {
    let k = p.k();
    let perm = p.as_permutation();
    let mut out = vec![0; k + 1];
    for x in 1..=k {
        out[x] = perm[x] % k + 1;
    }
    out
}

fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let k = perm.len() - 1;
    let mut seen = vec![false; k + 1];
    let mut out = Vec::new();
    for start in 1..=k {
        if seen[start] {
            continue;
        }
        let mut c = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            c.push(x);
            x = perm[x];
        }
        out.push(c);
    }
    out
}

/// γπ read as a partition (its cycles as blocks).
pub fn compose_gamma(p: &Partition) -> Partition {
    let blocks = cycles(&compose_gamma_permutation(p));
    Partition::new(p.k(), blocks).expect("cycles of a permutation partition the ground set")
}

/// True when every cycle of γπ visits its elements in ascending cyclic order,
/// i.e. γπ is recovered from its blocks by [`Partition::as_permutation`].
pub fn gamma_cycles_ascending(p: &Partition) -> bool {
    let perm = compose_gamma_permutation(p);
    perm == compose_gamma(p).as_permutation()
}

/// The closed walk 1 → 2 → … → k → 1 collapsed along the blocks of γπ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionGraph {
    /// Blocks of γπ, ordered by least element.
    pub vertices: Vec<Vec<usize>>,
    /// Index of the vertex containing 1 (always 0 under the ordering).
    pub root: usize,
    /// Traversal count per unordered vertex pair `(a, b)` with `a <= b`.
    /// Self-loops appear as `(a, a)`; the counts sum to `k`.
    pub walk_multiplicity: BTreeMap<(usize, usize), usize>,
    /// Number of walk steps that stayed inside one vertex.
    pub self_loops: usize,
}

impl PartitionGraph {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Distinct edges between different vertices.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.walk_multiplicity
            .keys()
            .copied()
            .filter(|(a, b)| a != b)
            .collect()
    }

    /// Vertex degrees in the collapsed simple graph.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for (a, b) in self.edges() {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// Builds a graph straight from a vertex count and edge list; used for
    /// homomorphism densities of arbitrary small graphs.
    pub fn from_edges(num_vertices: usize, edges: &[(usize, usize)]) -> Self {
        let mut walk_multiplicity = BTreeMap::new();
        let mut self_loops = 0;
        for &(a, b) in edges {
            assert!(a < num_vertices && b < num_vertices, "edge endpoint out of range");
            if a == b {
                self_loops += 1;
            }
            *walk_multiplicity.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
        PartitionGraph {
            vertices: (0..num_vertices).map(|v| vec![v + 1]).collect(),
            root: 0,
            walk_multiplicity,
            self_loops,
        }
    }
}

pub fn build_partition_graph(p: &Partition) -> PartitionGraph {
    let gp = compose_gamma(p);
    let labels = gp.labels();
    let k = p.k();
    let mut walk_multiplicity = BTreeMap::new();
    let mut self_loops = 0;
    for x in 0..k {
        let (a, b) = (labels[x], labels[(x + 1) % k]);
        if a == b {
            self_loops += 1;
        }
        *walk_multiplicity.entry((a.min(b), a.max(b))).or_insert(0) += 1;
    }
    PartitionGraph {
        root: labels[0],
        vertices: gp.blocks,
        walk_multiplicity,
        self_loops,
    }
}

/// Connected, loop-free, and exactly `|V| - 1` distinct edges.
pub fn is_tree(g: &PartitionGraph) -> bool {
    if g.self_loops > 0 {
        return false;
    }
    let n = g.num_vertices();
    let edges = g.edges();
    if edges.len() + 1 != n {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    components == 1
}

/// Kreweras complement of a pair partition.
///
/// Interleave the points as `1̄, 1, 2̄, 2, …, k̄, k`. Barred points `i`, `j`
/// share a block of the complement when no pair of `p` separates them, that
/// is when every pair `{a, b}` has both or neither of them in `a < · ≤ b`.
/// For non-crossing pairings this is the maximal non-crossing complement and
/// coincides with γπ.
pub fn kreweras_complement(p: &Partition) -> Result<Partition> {
    if p.k() % 2 == 1 || !p.is_pair_partition() {
        return Err(Error::domain(format!("{p} is not a pair partition")));
    }
    let signature = |i: usize| -> Vec<bool> {
        p.blocks().iter().map(|b| b[0] < i && i <= b[1]).collect()
    };
    let mut groups: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
    for i in 1..=p.k() {
        groups.entry(signature(i)).or_default().push(i);
    }
    Partition::new(p.k(), groups.into_values().collect())
}
