//! Value-free structure of a matrix: the *frame*.
//!
//! The frame keeps only which cells are blue, as a digraph with one node per
//! agent and an edge x -> y per blue cell (x, y). Erratic play never leaves
//! the frame of the starting matrix, so path and cycle questions about the
//! game reduce to frame walks.
//!
//! Cycle enumeration uses the blocked-set circuit search over per-start
//! subgraphs (vertices with index >= start), which yields each elementary
//! cycle exactly once, already rotated to its smallest agent.

use std::collections::BTreeSet;

use crate::error::{GameError, Result};
use crate::matrix::{AgentId, Pair, PreferenceMatrix};

/// Blue-cell digraph of a matrix. Successor lists are in ascending index
/// order and never empty (every column attains its max).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    labels: Vec<String>,
    succ: Vec<Vec<AgentId>>,
}

/// Strongly connected classes of the frame and the class-level DAG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceClasses {
    /// Each class sorted by index; classes ordered by smallest member.
    pub classes: Vec<Vec<AgentId>>,
    /// classes index per agent.
    pub class_of: Vec<usize>,
    /// Condensation edges between distinct class ids. Always acyclic.
    pub edges: BTreeSet<(usize, usize)>,
}

impl Frame {
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: AgentId) -> &str {
        &self.labels[a.index()]
    }

    pub fn successors(&self, a: AgentId) -> &[AgentId] {
        &self.succ[a.index()]
    }

    pub fn has_edge(&self, a: AgentId, b: AgentId) -> bool {
        self.succ[a.index()].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (AgentId, AgentId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(i, ys)| ys.iter().map(move |&y| (AgentId(i), y)))
    }

    /// Frame-path reachability; every agent reaches itself (empty path).
    pub fn reachable(&self, from: AgentId, to: AgentId) -> bool {
        if from == to {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut queue = std::collections::VecDeque::from([from]);
        seen[from.index()] = true;
        while let Some(v) = queue.pop_front() {
            for &w in self.successors(v) {
                if w == to {
                    return true;
                }
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    queue.push_back(w);
                }
            }
        }
        false
    }

    /// Shortest frame path from `a` to `b` (BFS, index-order tie-break); a
    /// shortest path repeats no agent, so it is elementary. `[a]` when
    /// a == b, `None` when unreachable.
    pub fn elementary_path(&self, a: AgentId, b: AgentId) -> Option<Vec<AgentId>> {
        if a == b {
            return Some(vec![a]);
        }
        let mut parent: Vec<Option<AgentId>> = vec![None; self.n()];
        let mut seen = vec![false; self.n()];
        let mut queue = std::collections::VecDeque::from([a]);
        seen[a.index()] = true;
        while let Some(v) = queue.pop_front() {
            for &w in self.successors(v) {
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    parent[w.index()] = Some(v);
                    if w == b {
                        let mut path = vec![w];
                        let mut cur = v;
                        loop {
                            path.push(cur);
                            match parent[cur.index()] {
                                Some(p) => cur = p,
                                None => break,
                            }
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Tarjan's strongly connected components plus the condensation DAG.
    pub fn equivalence_classes(&self) -> EquivalenceClasses {
        let n = self.n();
        let mut state = Tarjan {
            succ: &self.succ,
            index: 0,
            idx: vec![None; n],
            low: vec![0; n],
            on_stack: vec![false; n],
            stack: Vec::new(),
            comps: Vec::new(),
        };
        for v in 0..n {
            if state.idx[v].is_none() {
                state.strongconnect(v);
            }
        }
        let mut comps = state.comps;
        for c in comps.iter_mut() {
            c.sort_unstable();
        }
        comps.sort_unstable_by_key(|c| c[0]);
        let mut class_of = vec![0; n];
        for (ci, c) in comps.iter().enumerate() {
            for &v in c {
                class_of[v] = ci;
            }
        }
        let mut edges = BTreeSet::new();
        for (a, b) in self.edges() {
            let (ca, cb) = (class_of[a.index()], class_of[b.index()]);
            if ca != cb {
                edges.insert((ca, cb));
            }
        }
        EquivalenceClasses {
            classes: comps
                .into_iter()
                .map(|c| c.into_iter().map(AgentId).collect())
                .collect(),
            class_of,
            edges,
        }
    }

    /// GraphViz form of the frame, nodes and edges in index order.
    pub fn dot(&self) -> String {
        let mut s = String::from("digraph frame {\n  rankdir=LR;\n");
        for (i, l) in self.labels.iter().enumerate() {
            s.push_str(&format!("  {i} [label=\"{l}\"];\n"));
        }
        for (a, b) in self.edges() {
            s.push_str(&format!("  {} -> {};\n", a.index(), b.index()));
        }
        s.push_str("}\n");
        s
    }

    /// GraphViz form of the condensation DAG of `eq` (as produced by
    /// [`equivalence_classes`](Self::equivalence_classes)).
    pub fn condensation_dot(&self, eq: &EquivalenceClasses) -> String {
        let mut s = String::from("digraph classes {\n  rankdir=LR;\n");
        for (ci, c) in eq.classes.iter().enumerate() {
            let members: Vec<&str> = c.iter().map(|&a| self.label(a)).collect();
            s.push_str(&format!("  {ci} [label=\"{{{}}}\"];\n", members.join(",")));
        }
        for (a, b) in &eq.edges {
            s.push_str(&format!("  {a} -> {b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

struct Tarjan<'a> {
    succ: &'a [Vec<AgentId>],
    index: usize,
    idx: Vec<Option<usize>>,
    low: Vec<usize>,
    on_stack: Vec<bool>,
    stack: Vec<usize>,
    comps: Vec<Vec<usize>>,
}

impl Tarjan<'_> {
    fn strongconnect(&mut self, v: usize) {
        self.idx[v] = Some(self.index);
        self.low[v] = self.index;
        self.index += 1;
        self.stack.push(v);
        self.on_stack[v] = true;
        for w in self.succ[v].iter().map(|a| a.index()).collect::<Vec<_>>() {
            if self.idx[w].is_none() {
                self.strongconnect(w);
                self.low[v] = self.low[v].min(self.low[w]);
            } else if self.on_stack[w] {
                self.low[v] = self.low[v].min(self.idx[w].unwrap());
            }
        }
        if self.low[v] == self.idx[v].unwrap() {
            let mut comp = Vec::new();
            loop {
                let w = self.stack.pop().unwrap();
                self.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            self.comps.push(comp);
        }
    }
}

/// Builds the blue-cell digraph of `m`.
pub fn frame_of(m: &PreferenceMatrix) -> Frame {
    Frame {
        labels: m.labels().to_vec(),
        succ: m.agents().map(|x| m.blue_successors(x)).collect(),
    }
}

/// An elementary cycle of a frame, annotated with the per-step twin gaps of
/// the underlying matrix.
///
/// `agents` holds the k distinct agents in walk order; the closing edge back
/// to `agents[0]` is implicit. `twin_gaps[i]` is the gap of the twin of step
/// agents[i] -> agents[i+1], `order` their minimum (how many full runs of
/// the cycle close the first twin), and `poles` the unordered step pairs
/// attaining that minimum (all of them, when tied).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryCycle {
    pub agents: Vec<AgentId>,
    pub twin_gaps: Vec<u64>,
    pub order: u64,
    pub poles: Vec<Pair>,
}

impl ElementaryCycle {
    /// Annotates a cycle given by its agent rotation; every step must be a
    /// frame edge of `m` and agents must be distinct, k >= 2.
    pub fn annotate(m: &PreferenceMatrix, agents: Vec<AgentId>) -> Result<ElementaryCycle> {
        let k = agents.len();
        if k < 2 {
            return Err(GameError::InvalidArgument(
                "elementary cycle needs at least two agents".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for &a in &agents {
            if !seen.insert(a) {
                return Err(GameError::InvalidArgument(format!(
                    "cycle repeats agent {}",
                    m.label(a)
                )));
            }
        }
        let mut twin_gaps = Vec::with_capacity(k);
        for i in 0..k {
            let (x, y) = (agents[i], agents[(i + 1) % k]);
            if m.gap(x, y)? != 0 {
                return Err(GameError::NotFrameEdge(
                    m.label(x).to_string(),
                    m.label(y).to_string(),
                ));
            }
            twin_gaps.push(m.gap(y, x)?);
        }
        let order = *twin_gaps.iter().min().expect("k >= 2");
        let poles = twin_gaps
            .iter()
            .enumerate()
            .filter(|&(_, g)| *g == order)
            .map(|(i, _)| Pair::new(agents[i], agents[(i + 1) % k]))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        Ok(ElementaryCycle {
            agents,
            twin_gaps,
            order,
            poles,
        })
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    /// Always false: an annotated cycle has at least two agents.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Same cycle rotated to start at its smallest agent.
    pub fn canonical(&self) -> ElementaryCycle {
        let min = self
            .agents
            .iter()
            .enumerate()
            .min_by_key(|&(_, a)| a)
            .map(|(i, _)| i)
            .expect("nonempty");
        self.rotated(min)
    }

    /// Same cycle rotated to start at `a`; `None` when `a` is not on it.
    pub fn rotate_to(&self, a: AgentId) -> Option<ElementaryCycle> {
        self.agents
            .iter()
            .position(|&x| x == a)
            .map(|i| self.rotated(i))
    }

    fn rotated(&self, i: usize) -> ElementaryCycle {
        let k = self.agents.len();
        ElementaryCycle {
            agents: (0..k).map(|j| self.agents[(i + j) % k]).collect(),
            twin_gaps: (0..k).map(|j| self.twin_gaps[(i + j) % k]).collect(),
            order: self.order,
            poles: self.poles.clone(),
        }
    }

    /// Steps of the cycle including the closing edge.
    pub fn steps(&self) -> impl Iterator<Item = (AgentId, AgentId)> + '_ {
        let k = self.agents.len();
        (0..k).map(move |i| (self.agents[i], self.agents[(i + 1) % k]))
    }

    /// Whether x -> y is one of this cycle's steps.
    pub fn has_step(&self, x: AgentId, y: AgentId) -> bool {
        self.steps().any(|s| s == (x, y))
    }
}

fn cycles_raw(succ: &[Vec<AgentId>], cap: u64) -> Result<Vec<Vec<usize>>> {
    let n = succ.len();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        let mut blocked = vec![false; n];
        let mut blist: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        let mut stack: Vec<usize> = Vec::new();
        circuit(
            s,
            s,
            succ,
            &mut blocked,
            &mut blist,
            &mut stack,
            &mut cycles,
            cap,
        )?;
    }
    Ok(cycles)
}

#[allow(clippy::too_many_arguments)]
fn circuit(
    v: usize,
    s: usize,
    succ: &[Vec<AgentId>],
    blocked: &mut Vec<bool>,
    blist: &mut Vec<BTreeSet<usize>>,
    stack: &mut Vec<usize>,
    cycles: &mut Vec<Vec<usize>>,
    cap: u64,
) -> Result<bool> {
    let mut found = false;
    stack.push(v);
    blocked[v] = true;
    for w in succ[v].iter().map(|a| a.index()).filter(|&w| w >= s) {
        if w == s {
            if cycles.len() as u64 >= cap {
                return Err(GameError::CycleExplosion { cap });
            }
            cycles.push(stack.clone());
            found = true;
        } else if !blocked[w] {
            found |= circuit(w, s, succ, blocked, blist, stack, cycles, cap)?;
        }
    }
    if found {
        unblock(v, blocked, blist);
    } else {
        for w in succ[v].iter().map(|a| a.index()).filter(|&w| w >= s) {
            blist[w].insert(v);
        }
    }
    stack.pop();
    Ok(found)
}

fn unblock(v: usize, blocked: &mut Vec<bool>, blist: &mut Vec<BTreeSet<usize>>) {
    blocked[v] = false;
    let bs = std::mem::take(&mut blist[v]);
    for w in bs {
        if blocked[w] {
            unblock(w, blocked, blist);
        }
    }
}

/// Every elementary cycle of `f`, annotated against `m`. `f` must be the
/// frame of `m` (checked). Output order is deterministic: cycles appear by
/// ascending smallest agent, then in ascending-successor DFS order, each
/// rotated to start at its smallest agent.
pub fn elementary_cycles(
    f: &Frame,
    m: &PreferenceMatrix,
    limits: &crate::engine::SearchLimits,
) -> Result<Vec<ElementaryCycle>> {
    if frame_of(m) != *f {
        return Err(GameError::InvalidArgument(
            "frame does not match matrix".into(),
        ));
    }
    let raw = cycles_raw(&f.succ, limits.cycle_cap)?;
    raw.into_iter()
        .map(|c| ElementaryCycle::annotate(m, c.into_iter().map(AgentId).collect()))
        .collect()
}

/// Elementary cycles whose first step is a -> b, rotated to start at `a`.
/// Errors when (a, b) is not a frame edge.
pub fn elementary_cycles_through(
    f: &Frame,
    m: &PreferenceMatrix,
    a: AgentId,
    b: AgentId,
    limits: &crate::engine::SearchLimits,
) -> Result<Vec<ElementaryCycle>> {
    if a == b {
        return Err(GameError::SelfPass(m.label(a).to_string()));
    }
    if !f.has_edge(a, b) {
        return Err(GameError::NotFrameEdge(
            m.label(a).to_string(),
            m.label(b).to_string(),
        ));
    }
    Ok(elementary_cycles(f, m, limits)?
        .into_iter()
        .filter(|c| c.has_step(a, b))
        .map(|c| c.rotate_to(a).expect("a is on the cycle"))
        .collect())
}

/// Pairs sitting at pole position (minimal twin gap) of at least one
/// elementary cycle of `m`'s frame.
pub fn pole_position_pairs(
    m: &PreferenceMatrix,
    limits: &crate::engine::SearchLimits,
) -> Result<BTreeSet<Pair>> {
    let f = frame_of(m);
    let mut out = BTreeSet::new();
    for c in elementary_cycles(&f, m, limits)? {
        out.extend(c.poles.iter().copied());
    }
    Ok(out)
}
