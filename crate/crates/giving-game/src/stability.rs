//! Phase structure, pair classification, the stability-pair decision, and
//! the two-rule path reduction with its cycle decomposition.
//!
//! Central facts the code below leans on (each covered by tests):
//! - Erratic steps always select a cell that is blue in the *initial*
//!   matrix and whose twin is white in it, so column maxima are constant
//!   throughout any erratic phase and only one direction of any pair is
//!   ever stepped erratically.
//! - A turquoise pair {a, b} with (a, b) blue locks from a given start
//!   exactly when some erratic path accumulates gap(b, a) occurrences of
//!   step a -> b; the twin (b, a) then ties its column max and the game can
//!   alternate forever.
//! - Every run stabilizes within [`stabilization_bound`] steps, which makes
//!   exhaustive enumeration a complete decision procedure.

use std::collections::BTreeSet;

use crate::engine::{enumerate_branches, SearchLimits, Step, Trace};
use crate::error::{GameError, Result};
use crate::frame::{frame_of, ElementaryCycle};
use crate::matrix::{AgentId, CellColor, Pair, PreferenceMatrix};

/// Color class of a twin-cell pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    /// Both cells blue: the pair locks the moment either agent holds the
    /// token and selects the other.
    BluePair,
    /// One blue, one white; `blue` is the (submitter, receiver) of the blue
    /// cell.
    TurquoisePair { blue: (AgentId, AgentId) },
    /// Both cells white: never a stability pair.
    WhitePair,
}

/// Classifies the twin pair {a, b} by its two cell colors.
pub fn classify_pair(m: &PreferenceMatrix, a: AgentId, b: AgentId) -> Result<PairClass> {
    let ab = m.cell_color(a, b)?;
    let ba = m.cell_color(b, a)?;
    Ok(match (ab, ba) {
        (CellColor::Blue, CellColor::Blue) => PairClass::BluePair,
        (CellColor::Blue, CellColor::White) => PairClass::TurquoisePair { blue: (a, b) },
        (CellColor::White, CellColor::Blue) => PairClass::TurquoisePair { blue: (b, a) },
        (CellColor::White, CellColor::White) => PairClass::WhitePair,
    })
}

/// N·(N−1)·MAX + 1: an upper bound on the number of steps any run takes to
/// reach its boundary step. Each erratic step raises a white cell that sits
/// below its (constant) column max, and the total slack across all cells is
/// at most N·(N−1)·MAX.
pub fn stabilization_bound(m: &PreferenceMatrix) -> u64 {
    let n = m.n() as u64;
    n * (n - 1) * m.max_value() + 1
}

/// A stabilized trace cut at its boundary step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseSplit {
    /// Steps strictly before the boundary (possibly empty). Every one of
    /// them selects a turquoise pair.
    pub erratic: Vec<Step>,
    /// Index of the first step whose twin was blue at selection.
    pub boundary: usize,
    /// The two agents of the boundary step; the run alternates between them
    /// forever.
    pub pair: Pair,
}

/// Splits a trace at its boundary step. Errors when the trace never reached
/// one.
pub fn split_phases(t: &Trace) -> Result<PhaseSplit> {
    let boundary = t.boundary().ok_or(GameError::NotStabilized {
        steps: t.steps().len(),
    })?;
    let b = t.steps()[boundary];
    Ok(PhaseSplit {
        erratic: t.steps()[..boundary].to_vec(),
        boundary,
        pair: Pair::new(b.submitter, b.receiver),
    })
}

/// All pairs some branch from `start` stabilizes at. Complete: enumeration
/// runs to [`stabilization_bound`] and every branch must lock within it; a
/// branch that does not (impossible unless the bound argument is wrong)
/// surfaces as a loud error instead of being dropped.
pub fn stability_pairs_of_game(
    m: &PreferenceMatrix,
    start: AgentId,
    limits: &SearchLimits,
) -> Result<BTreeSet<Pair>> {
    let bound = stabilization_bound(m);
    let branches = enumerate_branches(m, start, bound as usize, limits)?;
    let mut pairs = BTreeSet::new();
    for t in &branches {
        pairs.insert(split_phases(t)?.pair);
    }
    Ok(pairs)
}

/// Union of [`stability_pairs_of_game`] over every start agent.
pub fn stability_pairs_of_matrix(
    m: &PreferenceMatrix,
    limits: &SearchLimits,
) -> Result<BTreeSet<Pair>> {
    let mut pairs = BTreeSet::new();
    for start in m.agents() {
        pairs.extend(stability_pairs_of_game(m, start, limits)?);
    }
    Ok(pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    /// The branch cap aborted the search before it was exhaustive.
    Unknown,
}

/// Outcome of a stability-pair decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub pair: Pair,
    pub answer: Answer,
    /// On yes from the exhaustive search: a full stabilizing trace ending in
    /// one boundary alternation. Absent for short-circuited verdicts.
    pub witness: Option<Trace>,
    /// Stabilized branches the search visited.
    pub branches_explored: u64,
    /// Longest explored path in steps, boundary step included.
    pub max_depth: usize,
}

struct DecideSearch<'a> {
    m: &'a PreferenceMatrix,
    succ: Vec<Vec<AgentId>>,
    /// Twin gap per ordered blue cell (x, y): how many x -> y steps turn
    /// (y, x) blue. usize::MAX marks non-edges.
    twin_gap: Vec<u64>,
    counts: Vec<u64>,
    target: (AgentId, AgentId),
    goal: u64,
    branch_cap: u64,
    leaves: u64,
    max_depth: usize,
    path: Vec<AgentId>,
}

enum SearchOutcome {
    Found,
    Exhausted,
    Capped,
}

impl DecideSearch<'_> {
    fn edge(&self, x: AgentId, y: AgentId) -> usize {
        x.index() * self.m.n() + y.index()
    }

    /// Walks the erratic game tree. The matrix itself never changes during
    /// erratic play in any way that matters here: legality of x -> y is
    /// exactly "(x, y) blue initially", the step stays erratic while its
    /// accumulated count is below the initial twin gap, and hits a boundary
    /// step when the count equals it.
    fn dfs(&mut self, holder: AgentId) -> SearchOutcome {
        for i in 0..self.succ[holder.index()].len() {
            let y = self.succ[holder.index()][i];
            let e = self.edge(holder, y);
            if self.counts[e] == self.twin_gap[e] {
                // Boundary step: this branch locks at {holder, y} here.
                self.leaves += 1;
                self.max_depth = self.max_depth.max(self.path.len() + 1);
                if self.leaves > self.branch_cap {
                    return SearchOutcome::Capped;
                }
                continue;
            }
            self.counts[e] += 1;
            self.path.push(y);
            let hit = (holder, y) == self.target && self.counts[e] == self.goal;
            if hit {
                return SearchOutcome::Found;
            }
            match self.dfs(y) {
                SearchOutcome::Exhausted => {}
                other => return other,
            }
            self.path.pop();
            self.counts[e] -= 1;
        }
        SearchOutcome::Exhausted
    }
}

/// Decides whether the turquoise pair `pair` (with blue cell (a, b)) is a
/// stability pair of the game started at `start`: yes exactly when some
/// branch accumulates gap(b, a) erratic occurrences of step a -> b.
///
/// The search is exhaustive over the erratic game tree, so a No is a proof.
/// When the branch cap aborts it, the verdict is Unknown, never No.
pub fn decide_turquoise_pair(
    m: &PreferenceMatrix,
    start: AgentId,
    pair: Pair,
    limits: &SearchLimits,
) -> Result<StabilityVerdict> {
    let (a, b) = match classify_pair(m, pair.lo(), pair.hi())? {
        PairClass::TurquoisePair { blue } => blue,
        other => {
            return Err(GameError::InvalidArgument(format!(
                "pair {{{},{}}} is {other:?}, not a turquoise pair",
                m.label(pair.lo()),
                m.label(pair.hi())
            )))
        }
    };
    if start.index() >= m.n() {
        return Err(GameError::InvalidArgument(format!(
            "start agent index {} out of range",
            start.index()
        )));
    }
    let n = m.n();
    let mut succ = Vec::with_capacity(n);
    let mut twin_gap = vec![u64::MAX; n * n];
    for x in m.agents() {
        let ys = m.blue_successors(x);
        for &y in &ys {
            twin_gap[x.index() * n + y.index()] = m.gap(y, x)?;
        }
        succ.push(ys);
    }
    let goal = m.gap(b, a)?;
    debug_assert!(goal > 0, "turquoise twin is white, so its gap is positive");
    let mut search = DecideSearch {
        m,
        succ,
        twin_gap,
        counts: vec![0; n * n],
        target: (a, b),
        goal,
        branch_cap: limits.branch_cap,
        leaves: 0,
        max_depth: 0,
        path: vec![start],
    };
    let outcome = search.dfs(start);
    let (answer, witness) = match outcome {
        SearchOutcome::Found => {
            // The found erratic path ends with the goal-th a -> b step, so
            // (b, a) is now blue and b -> a, a -> b lock the pair.
            let mut receivers: Vec<AgentId> = search.path[1..].to_vec();
            receivers.push(a);
            receivers.push(b);
            let w = Trace::replay(m, start, &receivers)?;
            if w.stability_pair() != Some(pair) {
                return Err(GameError::ReductionFailure(format!(
                    "witness for {{{},{}}} stabilized elsewhere",
                    m.label(a),
                    m.label(b)
                )));
            }
            (Answer::Yes, Some(w))
        }
        SearchOutcome::Exhausted => (Answer::No, None),
        SearchOutcome::Capped => (Answer::Unknown, None),
    };
    Ok(StabilityVerdict {
        pair,
        answer,
        witness,
        branches_explored: search.leaves,
        max_depth: search.max_depth,
    })
}

/// Full decision over any pair class.
///
/// White pairs are never stability pairs; turquoise pairs go through the
/// exhaustive [`decide_turquoise_pair`]; for blue pairs this answers yes
/// when either agent is frame-reachable from the start. Caveat: frame
/// reachability can overapproximate game reachability for blue pairs in
/// contrived matrices (the game may lock elsewhere first), so a blue-pair
/// yes is a fast screen, not a certificate; no witness is attached.
pub fn decide_pair(
    m: &PreferenceMatrix,
    start: AgentId,
    pair: Pair,
    limits: &SearchLimits,
) -> Result<StabilityVerdict> {
    match classify_pair(m, pair.lo(), pair.hi())? {
        PairClass::TurquoisePair { .. } => decide_turquoise_pair(m, start, pair, limits),
        PairClass::WhitePair => Ok(StabilityVerdict {
            pair,
            answer: Answer::No,
            witness: None,
            branches_explored: 0,
            max_depth: 0,
        }),
        PairClass::BluePair => {
            let f = frame_of(m);
            let reachable = f.reachable(start, pair.lo()) || f.reachable(start, pair.hi());
            Ok(StabilityVerdict {
                pair,
                answer: if reachable { Answer::Yes } else { Answer::No },
                witness: None,
                branches_explored: 0,
                max_depth: 0,
            })
        }
    }
}

/// The step direction a normal form for `pair` starts with: the blue cell
/// of a turquoise pair, or the direction of the trace's first in-pair step
/// for a blue pair (the white direction of a turquoise pair is never a
/// legal erratic step, so the other reading is impossible).
fn normal_orientation(m: &PreferenceMatrix, t: &Trace, pair: Pair) -> Result<(AgentId, AgentId)> {
    match classify_pair(m, pair.lo(), pair.hi())? {
        PairClass::TurquoisePair { blue } => Ok(blue),
        PairClass::BluePair => t
            .steps()
            .iter()
            .find(|s| Pair::new(s.submitter, s.receiver) == pair)
            .map(|s| (s.submitter, s.receiver))
            .ok_or_else(|| {
                GameError::ReductionFailure("stabilized trace has no in-pair step".into())
            }),
        PairClass::WhitePair => Err(GameError::ReductionFailure(format!(
            "trace stabilized at {{{},{}}}, which is white initially",
            m.label(pair.lo()),
            m.label(pair.hi())
        ))),
    }
}

/// Reduces a stabilizing trace to a normal form for its stability pair:
/// rule (1) cuts everything before the first in-pair step a -> b, rule (2)
/// repeatedly deletes the leftmost innermost agent cycle strictly between
/// consecutive a -> b steps. The result is replayed and checked: still a
/// valid trace, same stability pair, same number of a -> b steps, head step
/// a -> b. Any violation is a loud error, not a patched result.
///
/// Rule (2) does not fix which cycle to drop first; different strategies
/// can give different normal forms. Only the guarantees above are promised.
pub fn reduce_to_normal_form(m: &PreferenceMatrix, t: &Trace) -> Result<Trace> {
    let split = split_phases(t)?;
    let pair = split.pair;
    let (a, b) = normal_orientation(m, t, pair)?;
    let count_ab = |steps: &[Step]| -> usize {
        steps
            .iter()
            .filter(|s| s.submitter == a && s.receiver == b)
            .count()
    };
    let original_ab = count_ab(t.steps());

    let mut p = t.agents();
    // Rule (1): start at the first a -> b step.
    let first = (0..p.len() - 1)
        .find(|&i| p[i] == a && p[i + 1] == b)
        .ok_or_else(|| GameError::ReductionFailure("no in-pair step to anchor rule 1".into()))?;
    p.drain(..first);

    // Rule (2) to a fixpoint. Anchor positions are recomputed after every
    // deletion since indices shift.
    'rescan: loop {
        let anchors: Vec<usize> = (0..p.len() - 1)
            .filter(|&i| p[i] == a && p[i + 1] == b)
            .collect();
        for w in anchors.windows(2) {
            // Agents strictly between the two a -> b steps, endpoints
            // included: p[lo..=hi] with lo after the first step's receiver.
            let (lo, hi) = (w[0] + 1, w[1]);
            let mut seen_at = std::collections::HashMap::new();
            for k in lo..=hi {
                if let Some(&k1) = seen_at.get(&p[k]) {
                    let k1: usize = k1;
                    p.drain(k1 + 1..=k);
                    continue 'rescan;
                }
                seen_at.insert(p[k], k);
            }
        }
        break;
    }

    let out = Trace::replay(m, p[0], &p[1..])?;
    let out_split = split_phases(&out)
        .map_err(|_| GameError::ReductionFailure("reduced path no longer stabilizes".into()))?;
    if out_split.pair != pair {
        return Err(GameError::ReductionFailure(format!(
            "reduced path stabilizes at {{{},{}}} instead of {{{},{}}}",
            m.label(out_split.pair.lo()),
            m.label(out_split.pair.hi()),
            m.label(pair.lo()),
            m.label(pair.hi())
        )));
    }
    if count_ab(out.steps()) != original_ab {
        return Err(GameError::ReductionFailure(
            "reduction changed the in-pair step count".into(),
        ));
    }
    Ok(out)
}

/// Erratic phase of a normal form expressed as elementary cycles.
///
/// `cycles` lists maximal runs of one repeated cycle with their powers;
/// `closing_step` marks a trailing lone a -> b step (present exactly when
/// the boundary step runs b -> a, so the last twin increment comes from a
/// head step with no cycle body behind it).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub pair: Pair,
    /// (a, b): the in-pair step direction all cycles pass through.
    pub oriented: (AgentId, AgentId),
    pub cycles: Vec<(ElementaryCycle, u64)>,
    pub closing_step: bool,
}

impl CycleDecomposition {
    /// Total a -> b occurrences across cycles and the closing step.
    pub fn in_pair_steps(&self) -> u64 {
        self.cycles.iter().map(|(_, p)| p).sum::<u64>() + u64::from(self.closing_step)
    }
}

/// Splits the erratic phase of a stabilized trace into consecutive
/// elementary cycles by greedy closure: a segment closes at the first
/// return to its starting agent. Works on any trace whose erratic phase is
/// a clean concatenation of cycles (every normal form is); anything else
/// errors loudly.
///
/// The accounting invariant is checked, not assumed: in-pair occurrences
/// across the decomposition must equal gap(b, a) exactly.
pub fn cycle_decomposition(t: &Trace, pair: Pair) -> Result<CycleDecomposition> {
    let m = t.initial_matrix();
    let split = split_phases(t)?;
    if split.pair != pair {
        return Err(GameError::InvalidArgument(format!(
            "trace stabilizes at {{{},{}}}, not {{{},{}}}",
            m.label(split.pair.lo()),
            m.label(split.pair.hi()),
            m.label(pair.lo()),
            m.label(pair.hi())
        )));
    }
    let (a, b) = normal_orientation(m, t, pair)?;
    let goal = m.gap(b, a)?;

    // Erratic agent walk: start agent through the boundary step's submitter.
    let agents = t.agents();
    let erratic = &agents[..=split.boundary];

    let mut cycles: Vec<(ElementaryCycle, u64)> = Vec::new();
    let mut closing_step = false;
    let mut s = 0;
    while s + 1 < erratic.len() {
        match (s + 1..erratic.len()).find(|&j| erratic[j] == erratic[s]) {
            Some(j) => {
                let cycle = ElementaryCycle::annotate(m, erratic[s..j].to_vec()).map_err(|e| {
                    GameError::DecompositionFailure(format!(
                        "segment at offset {s} is not an elementary cycle: {e}"
                    ))
                })?;
                if !cycle.has_step(a, b) {
                    return Err(GameError::DecompositionFailure(format!(
                        "segment at offset {s} misses the in-pair step {}->{}",
                        m.label(a),
                        m.label(b)
                    )));
                }
                match cycles.last_mut() {
                    Some((last, power)) if *last == cycle => *power += 1,
                    _ => cycles.push((cycle, 1)),
                }
                s = j;
            }
            None => {
                // No closure: only a lone trailing a -> b head is allowed.
                if s + 2 == erratic.len() && erratic[s] == a && erratic[s + 1] == b {
                    closing_step = true;
                    s += 1;
                } else {
                    return Err(GameError::DecompositionFailure(format!(
                        "trailing segment at offset {s} is not a lone {}->{} step",
                        m.label(a),
                        m.label(b)
                    )));
                }
            }
        }
    }

    let d = CycleDecomposition {
        pair,
        oriented: (a, b),
        cycles,
        closing_step,
    };
    if d.in_pair_steps() != goal {
        return Err(GameError::DecompositionFailure(format!(
            "{} in-pair steps across the decomposition, wanted gap {goal}",
            d.in_pair_steps()
        )));
    }
    Ok(d)
}

/// The necessary-condition screen over a proposed cycle/power assignment
/// for `pair`: the in-pair step must occur exactly gap(b, a) times and no
/// other step (x, y) more than gap(y, x) times. Passing the screen does not
/// certify a stability pair (cycle orders interact); failing it refutes the
/// assignment.
pub fn check_power_conditions(
    m: &PreferenceMatrix,
    pair: Pair,
    cycles: &[(ElementaryCycle, u64)],
) -> Result<bool> {
    let (a, b) = match classify_pair(m, pair.lo(), pair.hi())? {
        PairClass::TurquoisePair { blue } => blue,
        // Both in-pair gaps are zero: only the empty assignment passes, and
        // the orientation does not matter for it.
        PairClass::BluePair => (pair.lo(), pair.hi()),
        PairClass::WhitePair => return Ok(false),
    };
    let mut occurrences: std::collections::HashMap<(AgentId, AgentId), u64> =
        std::collections::HashMap::new();
    for (cycle, power) in cycles {
        for (x, y) in cycle.steps() {
            *occurrences.entry((x, y)).or_insert(0) += power;
        }
    }
    let goal = m.gap(b, a)?;
    if occurrences.remove(&(a, b)).unwrap_or(0) != goal {
        return Ok(false);
    }
    for ((x, y), count) in occurrences {
        if count > m.gap(y, x)? {
            return Ok(false);
        }
    }
    Ok(true)
}
