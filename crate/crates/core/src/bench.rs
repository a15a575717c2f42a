//! Objective functions: pseudo-Boolean benchmarks, inversion counting for
//! permutations, and the multi-criteria single-source shortest path fitness.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

/// A fixed-length bit string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return domain("bit strings must have length at least 1");
        }
        Ok(BitString { bits })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![false; n])
    }

    pub fn ones(n: usize) -> Result<Self> {
        Self::new(vec![true; n])
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }
}

impl Deref for BitString {
    type Target = [bool];

    fn deref(&self) -> &[bool] {
        &self.bits
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("invalid bit {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub fn onemax(x: &[bool]) -> usize {
    x.iter().filter(|&&b| b).count()
}

pub fn leadingones(x: &[bool]) -> usize {
    x.iter().take_while(|&&b| b).count()
}

/// `OM(x) + k` when `OM(x) <= n - k` or `OM(x) = n`, otherwise `n - OM(x)`.
pub fn jump(x: &[bool], k: usize) -> Result<usize> {
    let n = x.len();
    if k < 1 || k > n {
        return domain(format!("jump gap k = {k} must lie in [1, {n}]"));
    }
    Ok(jump_value(onemax(x), n, k))
}

fn jump_value(om: usize, n: usize, k: usize) -> usize {
    if om <= n - k || om == n {
        om + k
    } else {
        n - om
    }
}

/// Number of inverted pairs in a permutation of `1..=n`.
pub fn inversions(perm: &[usize]) -> Result<u64> {
    let n = perm.len();
    let mut seen = vec![false; n];
    for &v in perm {
        if v < 1 || v > n || seen[v - 1] {
            return domain(format!("{perm:?} is not a permutation of 1..={n}"));
        }
        seen[v - 1] = true;
    }
    Ok(count_inversions(perm))
}

/// Inversion count of any sequence of distinct values.
pub(crate) fn count_inversions(perm: &[usize]) -> u64 {
    let mut count = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                count += 1;
            }
        }
    }
    count
}

/// A fitness function to be maximized over bit strings.
pub trait Objective: Sync {
    fn id(&self) -> String;
    fn fitness(&self, x: &[bool]) -> i64;
    fn is_optimal(&self, x: &[bool], fitness: i64) -> bool;
}

/// The named pseudo-Boolean benchmarks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bench {
    OneMax,
    LeadingOnes,
    Jump(usize),
}

impl Bench {
    pub const IDS: [&'static str; 3] = ["onemax", "leadingones", "jump"];

    /// Builds a benchmark from its id; `k` is required for `jump`.
    pub fn from_id(id: &str, k: Option<usize>) -> Result<Self> {
        match (id, k) {
            ("onemax", _) => Ok(Bench::OneMax),
            ("leadingones", _) => Ok(Bench::LeadingOnes),
            ("jump", Some(k)) => Ok(Bench::Jump(k)),
            ("jump", None) => domain("jump needs a gap size k"),
            _ => domain(format!(
                "unknown benchmark {id:?}; valid ids: {}",
                Self::IDS.join(", ")
            )),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if n < 1 {
            return domain("n must be at least 1");
        }
        if let Bench::Jump(k) = *self {
            if k < 1 || k > n {
                return domain(format!("jump gap k = {k} must lie in [1, {n}]"));
            }
        }
        Ok(())
    }
}

impl Objective for Bench {
    fn id(&self) -> String {
        match self {
            Bench::OneMax => "onemax".into(),
            Bench::LeadingOnes => "leadingones".into(),
            Bench::Jump(k) => format!("jump{k}"),
        }
    }

    fn fitness(&self, x: &[bool]) -> i64 {
        match *self {
            Bench::OneMax => onemax(x) as i64,
            Bench::LeadingOnes => leadingones(x) as i64,
            Bench::Jump(k) => jump_value(onemax(x), x.len(), k) as i64,
        }
    }

    fn is_optimal(&self, x: &[bool], fitness: i64) -> bool {
        match *self {
            Bench::OneMax | Bench::LeadingOnes => fitness == x.len() as i64,
            Bench::Jump(k) => fitness == (x.len() + k) as i64,
        }
    }
}

/// Connected undirected graph with positive integer weights.
///
/// Vertices are 0-based internally; the text format uses 1-based ids.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    source: usize,
    edges: Vec<(usize, usize, u64)>,
    weights: HashMap<(usize, usize), u64>,
    adjacency: Vec<Vec<usize>>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize, u64)>, source: usize) -> Result<Self> {
        if n < 2 {
            return domain("graphs need at least 2 vertices");
        }
        if source >= n {
            return domain(format!("source {source} out of range"));
        }
        let mut weights = HashMap::new();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v, w) in &edges {
            if u >= n || v >= n {
                return domain(format!("edge ({u}, {v}) out of range"));
            }
            if u == v {
                return domain(format!("self-loop at vertex {u}"));
            }
            if w < 1 {
                return domain(format!("edge ({u}, {v}) has weight 0"));
            }
            // Parallel edges collapse to the lightest one.
            for key in [(u, v), (v, u)] {
                let e = weights.entry(key).or_insert(w);
                *e = (*e).min(w);
            }
            if !adjacency[u].contains(&v) {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        for a in &mut adjacency {
            a.sort_unstable();
        }
        let g = WeightedGraph {
            n,
            source,
            edges,
            weights,
            adjacency,
        };
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([source]);
        seen[source] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &g.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return domain("graph is not connected");
        }
        Ok(g)
    }

    /// Unit-weight path `0 - 1 - ... - (n-1)` with source 0.
    pub fn path(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|v| (v - 1, v, 1)).collect(), 0)
    }

    /// Parses `n m source` followed by `m` lines `u v w` (1-based ids).
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let head = parse_numbers(header, 3)?;
        let (n, m, s) = (head[0] as usize, head[1] as usize, head[2] as usize);
        if s < 1 || s > n {
            return Err(Error::Parse(format!("source {s} not in 1..={n}")));
        }
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {m} edge lines")))?;
            let e = parse_numbers(line, 3)?;
            if e[0] < 1 || e[1] < 1 {
                return Err(Error::Parse(format!("vertex ids are 1-based: {line:?}")));
            }
            edges.push((e[0] as usize - 1, e[1] as usize - 1, e[2]));
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("unexpected trailing line {extra:?}")));
        }
        Self::new(n, edges, s - 1)
    }

    /// Inverse of [`WeightedGraph::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n, self.edges.len(), self.source + 1);
        for &(u, v, w) in &self.edges {
            out.push_str(&format!("{} {} {}\n", u + 1, v + 1, w));
        }
        out
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<u64> {
        self.weights.get(&(u, v)).copied()
    }

    /// Vertices other than the source, ascending.
    pub fn non_source(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| v != self.source)
    }

    /// Shortest-path distances from the source (Dijkstra).
    pub fn distances(&self) -> Vec<u64> {
        let mut dist = vec![u64::MAX; self.n];
        let mut heap = BinaryHeap::new();
        dist[self.source] = 0;
        heap.push(Reverse((0u64, self.source)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &v in &self.adjacency[u] {
                let nd = d + self.weights[&(u, v)];
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        dist
    }

    /// Largest, over all vertices, of the fewest edges on any shortest path
    /// to the source.
    pub fn shortest_path_hops(&self) -> usize {
        let dist = self.distances();
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| dist[v]);
        let mut hops = vec![usize::MAX; self.n];
        hops[self.source] = 0;
        for &v in &order {
            if v == self.source {
                continue;
            }
            hops[v] = self.adjacency[v]
                .iter()
                .filter(|&&u| dist[u] + self.weights[&(u, v)] == dist[v])
                .map(|&u| hops[u] + 1)
                .min()
                .expect("connected graph");
        }
        hops.into_iter().max().unwrap_or(0)
    }
}

fn parse_numbers(line: &str, count: usize) -> Result<Vec<u64>> {
    let nums = line
        .split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?} in {line:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if nums.len() != count {
        return Err(Error::Parse(format!(
            "expected {count} integers in {line:?}"
        )));
    }
    Ok(nums)
}

/// One pointer per vertex; the source's entry is ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointerArray {
    targets: Vec<usize>,
}

impl PointerArray {
    pub fn new(g: &WeightedGraph, targets: Vec<usize>) -> Result<Self> {
        if targets.len() != g.n_vertices() {
            return domain(format!(
                "expected {} pointers, got {}",
                g.n_vertices(),
                targets.len()
            ));
        }
        for v in g.non_source() {
            let t = targets[v];
            if t >= g.n_vertices() || t == v {
                return domain(format!("vertex {v} has invalid pointer target {t}"));
            }
        }
        Ok(PointerArray { targets })
    }

    pub(crate) fn from_raw(targets: Vec<usize>) -> Self {
        PointerArray { targets }
    }

    pub fn target(&self, v: usize) -> usize {
        self.targets[v]
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub(crate) fn set(&mut self, v: usize, t: usize) {
        self.targets[v] = t;
    }
}

/// Length of the pointer walk from every non-source vertex (ascending ids)
/// to the source; `None` stands for infinity.
pub fn sssp_fitness(g: &WeightedGraph, ind: &PointerArray) -> Vec<Option<u64>> {
    #[derive(Clone, Copy)]
    enum State {
        Unseen,
        OnStack,
        Done(Option<u64>),
    }
    let n = g.n_vertices();
    let mut state = vec![State::Unseen; n];
    state[g.source()] = State::Done(Some(0));
    let mut stack = Vec::new();
    for start in 0..n {
        let mut v = start;
        // Walk until a resolved vertex, a revisit (cycle) or a non-edge.
        let mut tail = loop {
            match state[v] {
                State::Done(d) => break d,
                State::OnStack => break None,
                State::Unseen => {
                    state[v] = State::OnStack;
                    stack.push(v);
                    let t = ind.target(v);
                    if g.weight(v, t).is_none() {
                        break None;
                    }
                    v = t;
                }
            }
        };
        while let Some(u) = stack.pop() {
            tail = tail.zip(g.weight(u, ind.target(u))).map(|(d, w)| d + w);
            state[u] = State::Done(tail);
        }
    }
    g.non_source()
        .map(|v| match state[v] {
            State::Done(d) => d,
            _ => unreachable!("every vertex is resolved"),
        })
        .collect()
}

/// `child <= parent` componentwise under minimization with `None = ∞`.
pub fn vector_at_least_as_good(child: &[Option<u64>], parent: &[Option<u64>]) -> Result<bool> {
    if child.len() != parent.len() {
        return domain(format!(
            "fitness vectors differ in length ({} vs {})",
            child.len(),
            parent.len()
        ));
    }
    Ok(child.iter().zip(parent).all(|(c, p)| match (c, p) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(c), Some(p)) => c <= p,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn pseudo_boolean_examples() {
        assert_eq!(onemax(&bs("0000")), 0);
        assert_eq!(onemax(&bs("1111")), 4);
        assert_eq!(onemax(&bs("1010")), 2);
        assert_eq!(leadingones(&bs("1101")), 2);
        assert_eq!(leadingones(&bs("0111")), 0);
        assert_eq!(leadingones(&bs("1111")), 4);
        assert_eq!(jump(&bs("1111"), 2).unwrap(), 6);
        assert_eq!(jump(&bs("1100"), 2).unwrap(), 4);
        assert_eq!(jump(&bs("1110"), 2).unwrap(), 1);
        assert!(jump(&bs("1110"), 0).is_err());
        assert!(jump(&bs("1110"), 5).is_err());
        assert!("10a".parse::<BitString>().is_err());
        assert!("".parse::<BitString>().is_err());
        assert_eq!(bs("0110").to_string(), "0110");
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(inversions(&[1, 2, 3, 4, 5]).unwrap(), 0);
        assert_eq!(inversions(&[3, 2, 1]).unwrap(), 3);
        assert_eq!(inversions(&[2, 1, 3]).unwrap(), 1);
        assert!(inversions(&[1, 1, 3]).is_err());
        assert!(inversions(&[0, 1, 2]).is_err());
    }

    #[test]
    fn jump_unique_optimum() {
        for n in 2..=12 {
            for k in 2..=n {
                let bench = Bench::Jump(k);
                let best = (0..1u32 << n)
                    .map(|m| {
                        let x: Vec<bool> = (0..n).map(|i| m >> i & 1 == 1).collect();
                        (bench.fitness(&x), m)
                    })
                    .collect::<Vec<_>>();
                let max = best.iter().map(|b| b.0).max().unwrap();
                let argmax: Vec<_> = best.iter().filter(|b| b.0 == max).collect();
                assert_eq!(argmax.len(), 1);
                assert_eq!(argmax[0].1, (1 << n) - 1);
            }
        }
    }

    fn triangle() -> WeightedGraph {
        WeightedGraph::new(3, vec![(0, 1, 1), (1, 2, 1), (0, 2, 1)], 0).unwrap()
    }

    #[test]
    fn sssp_examples() {
        let g = WeightedGraph::new(2, vec![(0, 1, 3)], 0).unwrap();
        let p = PointerArray::new(&g, vec![0, 0]).unwrap();
        assert_eq!(sssp_fitness(&g, &p), vec![Some(3)]);

        let g = triangle();
        let p = PointerArray::new(&g, vec![0, 2, 1]).unwrap();
        assert_eq!(sssp_fitness(&g, &p), vec![None, None]);
        let p = PointerArray::new(&g, vec![0, 0, 1]).unwrap();
        assert_eq!(sssp_fitness(&g, &p), vec![Some(1), Some(2)]);
        assert!(PointerArray::new(&g, vec![0, 1, 1]).is_err());
    }

    #[test]
    fn sssp_non_edge_is_infinite() {
        let g = WeightedGraph::path(4).unwrap();
        // 3 -> 1 is not an edge; 2 -> 3 -> ... inherits infinity.
        let p = PointerArray::new(&g, vec![0, 0, 3, 1]).unwrap();
        assert_eq!(sssp_fitness(&g, &p), vec![Some(1), None, None]);
    }

    #[test]
    fn fitness_vector_comparison() {
        assert!(vector_at_least_as_good(&[Some(1), Some(2)], &[Some(1), Some(2)]).unwrap());
        assert!(!vector_at_least_as_good(&[Some(1), Some(3)], &[Some(1), Some(2)]).unwrap());
        assert!(vector_at_least_as_good(&[Some(1), None], &[Some(2), None]).unwrap());
        assert!(!vector_at_least_as_good(&[None], &[Some(2)]).unwrap());
        assert!(vector_at_least_as_good(&[Some(1)], &[Some(1), None]).is_err());
    }

    #[test]
    fn graph_parsing() {
        let g = WeightedGraph::parse("3 3 1\n1 2 1\n2 3 1\n1 3 1\n").unwrap();
        assert_eq!(g, triangle());
        assert_eq!(WeightedGraph::parse(&g.to_text()).unwrap(), g);
        assert!(
            WeightedGraph::parse("3 1 1\n1 2 1\n").is_err(),
            "disconnected"
        );
        assert!(WeightedGraph::parse("2 1 1\n1 1 1\n").is_err(), "self-loop");
        assert!(
            WeightedGraph::parse("2 1 1\n1 2 0\n").is_err(),
            "zero weight"
        );
        assert!(
            WeightedGraph::parse("2 2 1\n1 2 1\n").is_err(),
            "missing edge"
        );
        assert!(
            WeightedGraph::parse("2 1 3\n1 2 1\n").is_err(),
            "bad source"
        );
    }

    #[test]
    fn path_graph_hops() {
        let g = WeightedGraph::path(8).unwrap();
        assert_eq!(g.shortest_path_hops(), 7);
        assert_eq!(g.distances(), (0..8).collect::<Vec<u64>>());
        // A heavy direct edge does not shorten the hop count.
        let g = WeightedGraph::new(3, vec![(0, 1, 1), (1, 2, 1), (0, 2, 5)], 0).unwrap();
        assert_eq!(g.shortest_path_hops(), 2);
        let g = WeightedGraph::new(3, vec![(0, 1, 1), (1, 2, 1), (0, 2, 2)], 0).unwrap();
        assert_eq!(g.shortest_path_hops(), 1);
    }

    fn enumerate_pointers(g: &WeightedGraph, f: &mut impl FnMut(&PointerArray)) {
        let mut t = vec![0usize; g.n_vertices()];
        fn rec(g: &WeightedGraph, v: usize, t: &mut Vec<usize>, f: &mut impl FnMut(&PointerArray)) {
            if v == g.n_vertices() {
                f(&PointerArray::new(g, t.clone()).unwrap());
                return;
            }
            if v == g.source() {
                t[v] = v;
                return rec(g, v + 1, t, f);
            }
            for u in 0..g.n_vertices() {
                if u != v {
                    t[v] = u;
                    rec(g, v + 1, t, f);
                }
            }
        }
        rec(g, 0, &mut t, f);
    }

    fn small_graph() -> impl Strategy<Value = WeightedGraph> {
        (
            3usize..=5,
            proptest::collection::vec((0usize..5, 0usize..5, 1u64..4), 0..6),
            proptest::collection::vec(1u64..4, 5),
        )
            .prop_map(|(n, extra, spine)| {
                let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v, spine[v])).collect();
                edges.extend(
                    extra
                        .into_iter()
                        .filter(|&(u, v, _)| u < n && v < n && u != v),
                );
                WeightedGraph::new(n, edges, 0).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn sssp_fitness_matches_dijkstra_exactly_on_shortest_path_trees(g in small_graph()) {
            let dist = g.distances();
            let want: Vec<Option<u64>> = g.non_source().map(|v| Some(dist[v])).collect();
            enumerate_pointers(&g, &mut |p| {
                let on_tree = g.non_source().all(|v| {
                    let t = p.target(v);
                    g.weight(v, t).is_some_and(|w| dist[t] + w == dist[v])
                });
                assert_eq!(sssp_fitness(&g, p) == want, on_tree, "{:?}", p);
            });
        }
    }

    proptest! {
        #[test]
        fn leadingones_full_iff_all_ones(bits in proptest::collection::vec(any::<bool>(), 1..40)) {
            prop_assert_eq!(leadingones(&bits) == bits.len(), bits.iter().all(|&b| b));
        }

        #[test]
        fn onemax_strictly_increases_on_zero_to_one(bits in proptest::collection::vec(any::<bool>(), 1..40), i in 0usize..40) {
            let i = i % bits.len();
            prop_assume!(!bits[i]);
            let mut y = bits.clone();
            y[i] = true;
            prop_assert_eq!(onemax(&y), onemax(&bits) + 1);
        }

        #[test]
        fn inversions_of_shuffled(perm in Just((1..=8usize).collect::<Vec<_>>()).prop_shuffle()) {
            let inv = inversions(&perm).unwrap();
            prop_assert!(inv <= 28);
            let mut rev = perm.clone();
            rev.reverse();
            prop_assert_eq!(inv + inversions(&rev).unwrap(), 28);
        }
    }
}
