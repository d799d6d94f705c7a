//! Deterministic minimization: compatibility, bounds, and exact search.
//!
//! Two states of a deterministic filter are compatible when every string
//! traceable from both leads to states with intersecting color sets.
//! Pairwise incompatible states must land on distinct states of any
//! deterministic simulator, so a clique of the incompatibility graph bounds
//! the optimum from below. A greedy quotient bounds it from above.

use std::collections::VecDeque;
use std::time::Instant;

use super::search::{run, Space, Step};
use super::{
    build_candidate, full_mask, Decision, DetView, Limits, MinimizationResult,
    SearchBudget, SearchStats, NONE,
};
use crate::error::{Error, Result};
use crate::filter::Filter;
use crate::product::output_simulates;

/// Node budget for the exact clique search before falling back to the best
/// clique found so far.
const CLIQUE_NODE_CAP: u64 = 2_000_000;

/// Compatibility relation over the states of a deterministic filter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityGraph {
    incompatible: Vec<Vec<bool>>,
}

impl CompatibilityGraph {
    pub fn num_vertices(&self) -> usize {
        self.incompatible.len()
    }

    pub fn compatible(&self, u: usize, v: usize) -> bool {
        !self.incompatible[u][v]
    }

    /// Edges `(u, v)`, `u < v`, between compatible states.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.num_vertices();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if self.compatible(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

/// Greatest-fixpoint compatibility: a pair is incompatible if its colors
/// are disjoint or some common symbol leads to an incompatible pair.
fn incompatibility(d: &DetView) -> Vec<Vec<bool>> {
    let (n, m) = (d.n, d.m);
    let mut pred: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); m]; n];
    for v in 0..n {
        for y in 0..m {
            if let Some(w) = d.succ(v, y) {
                pred[w][y].push(v);
            }
        }
    }
    let mut bad = vec![vec![false; n]; n];
    let mut queue = VecDeque::new();
    for u in 0..n {
        for v in u + 1..n {
            if d.colors[u] & d.colors[v] == 0 {
                bad[u][v] = true;
                bad[v][u] = true;
                queue.push_back((u, v));
            }
        }
    }
    while let Some((u, v)) = queue.pop_front() {
        for y in 0..m {
            for &pu in &pred[u][y] {
                for &pv in &pred[v][y] {
                    if pu != pv && !bad[pu][pv] {
                        bad[pu][pv] = true;
                        bad[pv][pu] = true;
                        queue.push_back((pu, pv));
                    }
                }
            }
        }
    }
    bad
}

/// Compatibility graph of a deterministic filter.
pub fn compatibility_graph(d: &Filter) -> Result<CompatibilityGraph> {
    if !d.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    Ok(CompatibilityGraph {
        incompatible: incompatibility(&DetView::new(d)?),
    })
}

type Bitset = Vec<u64>;

fn bitset_new(n: usize) -> Bitset {
    vec![0; n.div_ceil(64)]
}

#[inline]
fn bit_get(b: &[u64], i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
fn bit_set(b: &mut [u64], i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

/// Maximum clique by branch and bound with a greedy-coloring bound. Gives
/// the best clique found if the node budget runs out.
fn max_clique(adj: &[Vec<bool>]) -> Vec<usize> {
    struct St<'a> {
        adj: &'a [Vec<bool>],
        best: Vec<usize>,
        nodes: u64,
    }
    fn expand(st: &mut St, current: &mut Vec<usize>, mut cand: Vec<usize>) {
        st.nodes += 1;
        if st.nodes > CLIQUE_NODE_CAP {
            return;
        }
        // greedy coloring; candidates sorted by color class
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in &cand {
            match classes
                .iter_mut()
                .find(|cl| cl.iter().all(|&u| !st.adj[u][v]))
            {
                Some(cl) => cl.push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut order = Vec::with_capacity(cand.len());
        let mut bound = Vec::with_capacity(cand.len());
        for (c, cl) in classes.iter().enumerate() {
            for &v in cl {
                order.push(v);
                bound.push(c + 1);
            }
        }
        cand.clear();
        for i in (0..order.len()).rev() {
            if current.len() + bound[i] <= st.best.len() {
                return;
            }
            let v = order[i];
            current.push(v);
            let next: Vec<usize> = order[..i].iter().copied().filter(|&u| st.adj[v][u]).collect();
            if next.is_empty() {
                if current.len() > st.best.len() {
                    st.best = current.clone();
                }
            } else {
                expand(st, current, next);
            }
            current.pop();
            if st.nodes > CLIQUE_NODE_CAP {
                return;
            }
        }
    }
    let n = adj.len();
    let mut st = St {
        adj,
        best: Vec::new(),
        nodes: 0,
    };
    if n > 0 {
        st.best = vec![0];
    }
    expand(&mut st, &mut Vec::new(), (0..n).collect());
    st.best.sort_unstable();
    st.best
}

/// Greedy quotient of `d`: pairs are merged in index order whenever the
/// merge, closed under common successors, leaves every block with a common
/// color. The quotient is deterministic and output-simulates `d`.
fn greedy_merge(d: &DetView, incompat: &[Vec<bool>]) -> (Vec<u32>, Vec<u64>) {
    let (n, m) = (d.n, d.m);
    #[derive(Clone)]
    struct Uf {
        parent: Vec<usize>,
        color: Vec<u64>,
        succ: Vec<u32>,
    }
    fn find(uf: &mut Uf, mut x: usize) -> usize {
        while uf.parent[x] != x {
            uf.parent[x] = uf.parent[uf.parent[x]];
            x = uf.parent[x];
        }
        x
    }
    let mut uf = Uf {
        parent: (0..n).collect(),
        color: d.colors.clone(),
        succ: (0..n * m)
            .map(|i| d.succ(i / m, i % m).map_or(NONE, |w| w as u32))
            .collect(),
    };
    for u in 0..n {
        for v in u + 1..n {
            if incompat[u][v] {
                continue;
            }
            let mut trial = uf.clone();
            let mut work = vec![(u, v)];
            let mut ok = true;
            while let Some((a, b)) = work.pop() {
                let (ra, rb) = (find(&mut trial, a), find(&mut trial, b));
                if ra == rb {
                    continue;
                }
                if incompat[ra][rb] {
                    ok = false;
                    break;
                }
                let c = trial.color[ra] & trial.color[rb];
                if c == 0 {
                    ok = false;
                    break;
                }
                trial.parent[rb] = ra;
                trial.color[ra] = c;
                for y in 0..m {
                    let (sa, sb) = (trial.succ[ra * m + y], trial.succ[rb * m + y]);
                    match (sa != NONE, sb != NONE) {
                        (true, true) => work.push((sa as usize, sb as usize)),
                        (false, true) => trial.succ[ra * m + y] = sb,
                        _ => {}
                    }
                }
            }
            if ok {
                uf = trial;
            }
        }
    }
    // number blocks by their first member; d's initial state is state 0
    let mut block_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for v in 0..n {
        let r = find(&mut uf, v);
        if block_of[r] == usize::MAX {
            block_of[r] = reps.len();
            reps.push(r);
        }
        block_of[v] = block_of[r];
    }
    let colors = reps.iter().map(|&r| uf.color[r]).collect();
    let mut delta = vec![NONE; reps.len() * m];
    for (b, &r) in reps.iter().enumerate() {
        for y in 0..m {
            let s = uf.succ[r * m + y];
            if s != NONE {
                delta[b * m + y] = block_of[s as usize] as u32;
            }
        }
    }
    (delta, colors)
}

#[derive(Clone)]
pub(crate) struct Node {
    delta: Vec<u32>,
    allowed: Vec<u64>,
    members: Vec<Bitset>,
    used: usize,
    queue: VecDeque<(u32, u32)>,
}

struct DetSpace<'a> {
    input: &'a Filter,
    d: DetView,
    incompat_rows: Vec<Bitset>,
    k: usize,
}

impl DetSpace<'_> {
    fn root(&self) -> Node {
        let d0 = self.d.initial;
        let mut members = vec![bitset_new(self.d.n); self.k];
        bit_set(&mut members[0], d0);
        let mut allowed = vec![u64::MAX; self.k];
        allowed[0] = self.d.colors[d0];
        Node {
            delta: vec![NONE; self.k * self.d.m],
            allowed,
            members,
            used: 1,
            queue: VecDeque::from([(d0 as u32, 0)]),
        }
    }

    /// Pairs `d` with candidate state `h`; false if that is contradictory.
    fn pair(&self, node: &mut Node, d: usize, h: usize) -> bool {
        if bit_get(&node.members[h], d) {
            return true;
        }
        if intersects(&self.incompat_rows[d], &node.members[h]) {
            return false;
        }
        node.allowed[h] &= self.d.colors[d];
        if node.allowed[h] == 0 {
            return false;
        }
        bit_set(&mut node.members[h], d);
        node.queue.push_back((d as u32, h as u32));
        true
    }
}

impl Space for DetSpace<'_> {
    type Node = Node;

    fn advance(&self, node: &mut Node) -> Step<Node> {
        let m = self.d.m;
        while let Some(&(d, h)) = node.queue.front() {
            let (d, h) = (d as usize, h as usize);
            for y in 0..m {
                let Some(d2) = self.d.succ(d, y) else {
                    continue;
                };
                let h2 = node.delta[h * m + y];
                if h2 == NONE {
                    let top = if node.used < self.k { node.used + 1 } else { node.used };
                    let children = (0..top)
                        .map(|t| {
                            let mut child = node.clone();
                            child.delta[h * m + y] = t as u32;
                            child.used = child.used.max(t + 1);
                            child
                        })
                        .collect();
                    return Step::Branch(children);
                }
                if !self.pair(node, d2, h2 as usize) {
                    return Step::Dead;
                }
            }
            node.queue.pop_front();
        }
        Step::Leaf
    }

    fn finish(&self, node: &Node) -> Result<Option<Filter>> {
        let m = self.d.m;
        let palette = full_mask(self.input.num_colors());
        let colors: Vec<u64> = node.allowed.iter().map(|&c| c & palette).collect();
        let h = build_candidate(self.input, node.used, vec![0], &colors, |w, y| {
            let t = node.delta[w * m + y];
            (t != NONE).then_some(t as usize)
        });
        Ok(output_simulates(&h, self.input, None)?.holds.then_some(h))
    }
}

struct Prepared {
    d: DetView,
    incompat: Vec<Vec<bool>>,
    det_states: usize,
}

fn prepare(f: &Filter, budget: &SearchBudget) -> Result<Prepared> {
    let det = f.determinize(budget.determinize_cap)?.filter;
    let d = DetView::new(&det)?;
    let incompat = incompatibility(&d);
    Ok(Prepared {
        det_states: det.num_states(),
        d,
        incompat,
    })
}

fn search_k(
    f: &Filter,
    p: &Prepared,
    k: usize,
    limits: &Limits,
    stats: &mut SearchStats,
) -> Result<Decision> {
    if k > 64 {
        return Err(Error::TooLarge {
            what: "candidate size",
            max: 64,
        });
    }
    let incompat_rows = p
        .incompat
        .iter()
        .map(|row| {
            let mut b = bitset_new(p.d.n);
            for (i, &x) in row.iter().enumerate() {
                if x {
                    bit_set(&mut b, i);
                }
            }
            b
        })
        .collect();
    let space = DetSpace {
        input: f,
        d: p.d.clone(),
        incompat_rows,
        k,
    };
    let root = space.root();
    run(&space, vec![root], limits, 1, stats)
}

/// Whether some deterministic filter with at most `k` states
/// output-simulates `f`.
pub fn decide_det_size_k(f: &Filter, k: usize, budget: &SearchBudget) -> Result<Decision> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let p = prepare(f, budget)?;
    let limits = Limits::new(budget, Instant::now());
    search_k(f, &p, k, &limits, &mut SearchStats::default())
}

pub(crate) fn minimize(f: &Filter, budget: &SearchBudget) -> Result<MinimizationResult> {
    let start = Instant::now();
    let p = prepare(f, budget)?;
    let limits = Limits::new(budget, start);

    let lower = max_clique(&p.incompat).len().max(1);
    let (delta, colors) = greedy_merge(&p.d, &p.incompat);
    let m = p.d.m;
    let ub = colors.len();
    let palette = full_mask(f.num_colors());
    let colors: Vec<u64> = colors.iter().map(|&c| c & palette).collect();
    let greedy = build_candidate(f, ub, vec![0], &colors, |w, y| {
        let t = delta[w * m + y];
        (t != NONE).then_some(t as usize)
    });
    debug_assert!(output_simulates(&greedy, f, None)?.holds);

    let mut stats = SearchStats {
        determinized_states: p.det_states,
        lower_bound: lower,
        upper_bound: ub,
        ..Default::default()
    };
    let top = budget.max_states.map_or(ub - 1, |k| k.min(ub - 1));
    let mut best = greedy;
    let mut exhausted = false;
    for k in lower..=top {
        match search_k(f, &p, k, &limits, &mut stats)? {
            Decision::Yes(h) => {
                stats.levels_completed.push(k);
                best = h;
                break;
            }
            Decision::No => {
                stats.levels_completed.push(k);
                stats.lower_bound = k + 1;
            }
            Decision::BudgetExhausted => {
                exhausted = true;
                break;
            }
        }
    }
    let size = best.num_states();
    stats.upper_bound = size;
    stats.elapsed = start.elapsed();
    Ok(MinimizationResult {
        proven_optimal: stats.lower_bound >= size,
        minimizer: best,
        size,
        budget_exhausted: exhausted,
        stats,
    })
}
