//! The token-passing game.
//!
//! One agent holds the token. The holder x picks a receiver y whose cell
//! (x, y) is blue, the twin cell (y, x) gains 1, and y becomes the holder.
//! A step is a *boundary* step when the twin (y, x) was already blue at
//! selection time: from then on the pair {x, y} alternates forever, because
//! the bumped twin is the single maximum of its column.
//!
//! [`play`] drives a single run under a [`ChoicePolicy`];
//! [`enumerate_branches`] walks every choice; [`validate_path`] replays an
//! external agent path and reports the first illegal transition.

use crate::error::{GameError, Result};
use crate::matrix::{AgentId, CellColor, Pair, PreferenceMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One transition: `submitter` passed to `receiver`. `twin_blue` records
/// whether the twin cell (receiver, submitter) was blue when the step was
/// selected, i.e. whether this step is the boundary into the locked phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub submitter: AgentId,
    pub receiver: AgentId,
    pub twin_blue: bool,
}

/// A recorded run: the start agent, the matrix it started from, and the
/// steps taken. `truncated` means the step budget ran out before a boundary
/// step was seen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    start: AgentId,
    initial_matrix: PreferenceMatrix,
    steps: Vec<Step>,
    truncated: bool,
}

/// Point-in-time game position: matrix plus token holder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    pub matrix: PreferenceMatrix,
    pub holder: AgentId,
}

/// How a run resolves choice points (steps whose holder has several blue
/// successors). Successor lists are always in ascending index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChoicePolicy {
    /// Lowest-index blue successor.
    FirstByIndex,
    /// Uniform choice via a ChaCha8 stream seeded from the u64; the stream
    /// is consulted only at real choice points, so forced steps do not
    /// shift it.
    SeededRandom(u64),
    /// Pre-listed receivers, consumed one per choice point; forced steps
    /// consume nothing. Errors when exhausted or when an entry is not a
    /// blue successor.
    Scripted(Vec<AgentId>),
}

/// Caps for the exhaustive searches. A run that would exceed a cap stops
/// with a branch/cycle explosion error instead of churning forever.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub branch_cap: u64,
    pub cycle_cap: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            branch_cap: 1_000_000,
            cycle_cap: 1_000_000,
        }
    }
}

/// Replay/run driver with O(1) undo, shared by play, enumeration and the
/// decision search.
pub(crate) struct Runner {
    pub(crate) matrix: PreferenceMatrix,
    pub(crate) holder: AgentId,
}

impl Runner {
    pub(crate) fn new(m: &PreferenceMatrix, start: AgentId) -> Runner {
        Runner {
            matrix: m.clone(),
            holder: start,
        }
    }

    /// Performs holder -> y if legal; reports the violation with `index`
    /// (the position of y in the agent path) otherwise.
    pub(crate) fn step_to(&mut self, y: AgentId, index: usize) -> Result<Step> {
        let x = self.holder;
        if x == y {
            return Err(GameError::SelfPass(self.matrix.label(x).to_string()));
        }
        if self.matrix.cell(x, y)? != self.matrix.column_max(x) {
            return Err(GameError::IllegalStep {
                index,
                submitter: self.matrix.label(x).to_string(),
                receiver: self.matrix.label(y).to_string(),
            });
        }
        let twin_blue = self.matrix.cell_color(y, x)? == CellColor::Blue;
        self.matrix.increment(y, x)?;
        self.holder = y;
        Ok(Step {
            submitter: x,
            receiver: y,
            twin_blue,
        })
    }

    pub(crate) fn undo(&mut self, step: Step) {
        self.matrix.decrement(step.receiver, step.submitter);
        self.holder = step.submitter;
    }
}

impl GameState {
    pub fn new(matrix: PreferenceMatrix, holder: AgentId) -> GameState {
        GameState { matrix, holder }
    }

    pub fn blue_successors(&self) -> Vec<AgentId> {
        self.matrix.blue_successors(self.holder)
    }

    /// Pure step: returns the follow-up state, leaving self untouched.
    pub fn apply_step(&self, receiver: AgentId) -> Result<(GameState, Step)> {
        let mut r = Runner {
            matrix: self.matrix.clone(),
            holder: self.holder,
        };
        let step = r.step_to(receiver, 1)?;
        Ok((
            GameState {
                matrix: r.matrix,
                holder: r.holder,
            },
            step,
        ))
    }
}

impl Trace {
    pub(crate) fn new(
        start: AgentId,
        initial_matrix: PreferenceMatrix,
        steps: Vec<Step>,
        truncated: bool,
    ) -> Trace {
        Trace {
            start,
            initial_matrix,
            steps,
            truncated,
        }
    }

    /// Rebuilds a trace from an agent path, validating every transition
    /// against `m`. The error index is the receiver's position in the path.
    pub fn replay(m: &PreferenceMatrix, start: AgentId, receivers: &[AgentId]) -> Result<Trace> {
        let mut r = Runner::new(m, start);
        let mut steps = Vec::with_capacity(receivers.len());
        for (i, &y) in receivers.iter().enumerate() {
            steps.push(r.step_to(y, i + 1)?);
        }
        let truncated = steps_truncated(&steps);
        Ok(Trace {
            start,
            initial_matrix: m.clone(),
            steps,
            truncated,
        })
    }

    pub fn start(&self) -> AgentId {
        self.start
    }

    pub fn initial_matrix(&self) -> &PreferenceMatrix {
        &self.initial_matrix
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Agent path: start plus each receiver, `steps + 1` entries.
    pub fn agents(&self) -> Vec<AgentId> {
        let mut v = Vec::with_capacity(self.steps.len() + 1);
        v.push(self.start);
        v.extend(self.steps.iter().map(|s| s.receiver));
        v
    }

    /// Index of the first boundary step (twin blue at selection).
    pub fn boundary(&self) -> Option<usize> {
        self.steps.iter().position(|s| s.twin_blue)
    }

    pub fn is_stabilized(&self) -> bool {
        self.boundary().is_some()
    }

    /// The pair the run locks into, if a boundary step was reached.
    pub fn stability_pair(&self) -> Option<Pair> {
        self.boundary()
            .map(|i| Pair::new(self.steps[i].submitter, self.steps[i].receiver))
    }

    /// Agent path as text. Labels are concatenated when all are single
    /// characters (the common fixture shape), space-separated otherwise.
    pub fn path_string(&self) -> String {
        let labels: Vec<&str> = self
            .agents()
            .into_iter()
            .map(|a| self.initial_matrix.label(a))
            .collect();
        let sep = if labels.iter().all(|l| l.chars().count() == 1) {
            ""
        } else {
            " "
        };
        labels.join(sep)
    }

    /// State after the last recorded step.
    pub fn final_state(&self) -> GameState {
        let mut r = Runner::new(&self.initial_matrix, self.start);
        for (i, s) in self.steps.iter().enumerate() {
            r.step_to(s.receiver, i + 1)
                .expect("recorded trace replays");
        }
        GameState {
            matrix: r.matrix,
            holder: r.holder,
        }
    }

    /// Appends `extra` forced steps after the boundary, verifying at each
    /// one that the lock really is forced (the holder's blue successors
    /// must be exactly the pair partner). A violation would falsify the
    /// lock argument, so it surfaces as an error instead of being papered
    /// over.
    pub fn extend_forced(&mut self, extra: usize) -> Result<()> {
        let pair = self.stability_pair().ok_or(GameError::NotStabilized {
            steps: self.steps.len(),
        })?;
        let mut r = Runner::new(&self.initial_matrix, self.start);
        for (i, s) in self.steps.iter().enumerate() {
            r.step_to(s.receiver, i + 1)?;
        }
        for _ in 0..extra {
            let succ = r.matrix.blue_successors(r.holder);
            let partner = pair.other(r.holder).ok_or_else(|| {
                GameError::InvalidArgument(format!(
                    "holder {} left the locked pair",
                    r.matrix.label(r.holder)
                ))
            })?;
            if succ != vec![partner] {
                return Err(GameError::InvalidArgument(format!(
                    "lock violated: {} has successors {:?} after the boundary",
                    r.matrix.label(r.holder),
                    succ.iter().map(|&a| r.matrix.label(a)).collect::<Vec<_>>()
                )));
            }
            let index = self.steps.len() + 1;
            self.steps.push(r.step_to(partner, index)?);
        }
        self.truncated = false;
        Ok(())
    }
}

fn steps_truncated(steps: &[Step]) -> bool {
    !steps.iter().any(|s| s.twin_blue)
}

struct PolicyDriver<'a> {
    policy: &'a ChoicePolicy,
    rng: Option<ChaCha8Rng>,
    script_pos: usize,
}

impl<'a> PolicyDriver<'a> {
    fn new(policy: &'a ChoicePolicy) -> PolicyDriver<'a> {
        let rng = match policy {
            ChoicePolicy::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
            _ => None,
        };
        PolicyDriver {
            policy,
            rng,
            script_pos: 0,
        }
    }

    fn choose(
        &mut self,
        m: &PreferenceMatrix,
        holder: AgentId,
        options: &[AgentId],
        step_index: usize,
    ) -> Result<AgentId> {
        debug_assert!(!options.is_empty());
        if options.len() == 1 {
            return Ok(options[0]);
        }
        match self.policy {
            ChoicePolicy::FirstByIndex => Ok(options[0]),
            ChoicePolicy::SeededRandom(_) => {
                let rng = self.rng.as_mut().expect("rng present");
                Ok(options[rng.random_range(0..options.len())])
            }
            ChoicePolicy::Scripted(script) => {
                let pick = *script
                    .get(self.script_pos)
                    .ok_or(GameError::ScriptExhausted { index: step_index })?;
                self.script_pos += 1;
                if !options.contains(&pick) {
                    return Err(GameError::ScriptIllegalChoice {
                        index: step_index,
                        submitter: m.label(holder).to_string(),
                        receiver: m
                            .labels()
                            .get(pick.index())
                            .cloned()
                            .unwrap_or_else(|| format!("#{}", pick.index())),
                    });
                }
                Ok(pick)
            }
        }
    }
}

/// Runs one game from `start` for at most `max_steps` steps. If a boundary
/// step occurs earlier, the run stops there, appends one full forced
/// alternation (two steps, even when that overshoots `max_steps`) and is
/// *not* truncated; otherwise it is cut off at exactly `max_steps` steps
/// with `truncated = true`.
pub fn play(
    m: &PreferenceMatrix,
    start: AgentId,
    policy: &ChoicePolicy,
    max_steps: usize,
) -> Result<Trace> {
    if max_steps == 0 {
        return Err(GameError::InvalidArgument(
            "max_steps must be at least 1".into(),
        ));
    }
    if start.index() >= m.n() {
        return Err(GameError::InvalidArgument(format!(
            "start agent index {} out of range",
            start.index()
        )));
    }
    let mut driver = PolicyDriver::new(policy);
    let mut r = Runner::new(m, start);
    let mut steps = Vec::new();
    for i in 0..max_steps {
        let options = r.matrix.blue_successors(r.holder);
        let pick = driver.choose(&r.matrix, r.holder, &options, i)?;
        let step = r.step_to(pick, i + 1)?;
        let hit_boundary = step.twin_blue;
        steps.push(step);
        if hit_boundary {
            let mut t = Trace::new(start, m.clone(), steps, false);
            t.extend_forced(2)?;
            return Ok(t);
        }
    }
    Ok(Trace::new(start, m.clone(), steps, true))
}

/// Depth-first enumeration of every distinct run from `start`. Choice
/// points fan out over all blue successors in ascending index order, so the
/// result is ordered lexicographically by receiver sequence. Each branch
/// stops at its first boundary step (included, no alternation appended) or
/// at `max_steps` with `truncated = true`. Errors with a branch explosion
/// when more than `limits.branch_cap` branches complete.
pub fn enumerate_branches(
    m: &PreferenceMatrix,
    start: AgentId,
    max_steps: usize,
    limits: &SearchLimits,
) -> Result<Vec<Trace>> {
    if max_steps == 0 {
        return Err(GameError::InvalidArgument(
            "max_steps must be at least 1".into(),
        ));
    }
    if start.index() >= m.n() {
        return Err(GameError::InvalidArgument(format!(
            "start agent index {} out of range",
            start.index()
        )));
    }
    let mut r = Runner::new(m, start);
    let mut path: Vec<Step> = Vec::new();
    let mut out: Vec<Trace> = Vec::new();
    let mut leaves: u64 = 0;
    dfs(
        m,
        start,
        &mut r,
        &mut path,
        max_steps,
        limits,
        &mut leaves,
        &mut out,
    )?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    m: &PreferenceMatrix,
    start: AgentId,
    r: &mut Runner,
    path: &mut Vec<Step>,
    max_steps: usize,
    limits: &SearchLimits,
    leaves: &mut u64,
    out: &mut Vec<Trace>,
) -> Result<()> {
    let options = r.matrix.blue_successors(r.holder);
    for y in options {
        let step = r.step_to(y, path.len() + 1)?;
        path.push(step);
        if step.twin_blue || path.len() == max_steps {
            *leaves += 1;
            if *leaves > limits.branch_cap {
                return Err(GameError::BranchExplosion {
                    cap: limits.branch_cap,
                });
            }
            out.push(Trace::new(start, m.clone(), path.clone(), !step.twin_blue));
        } else {
            dfs(m, start, r, path, max_steps, limits, leaves, out)?;
        }
        let step = path.pop().expect("pushed above");
        r.undo(step);
    }
    Ok(())
}

/// Replay verdict for an externally supplied agent path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathVerdict {
    Valid,
    /// `index` is the position in the agent path of the first receiver
    /// whose transition is illegal (not a blue cell, or a self-pass).
    Invalid {
        index: usize,
    },
}

/// Replays `agents` (full path, start first) against `m`. Transitions must
/// select blue cells; the verdict carries the first failure position.
pub fn validate_path(m: &PreferenceMatrix, agents: &[AgentId]) -> Result<PathVerdict> {
    let Some((&first, rest)) = agents.split_first() else {
        return Err(GameError::InvalidArgument("empty path".into()));
    };
    if agents.iter().any(|a| a.index() >= m.n()) {
        return Err(GameError::InvalidArgument(
            "agent index out of range".into(),
        ));
    }
    let mut r = Runner::new(m, first);
    for (i, &y) in rest.iter().enumerate() {
        match r.step_to(y, i + 1) {
            Ok(_) => {}
            Err(GameError::IllegalStep { index, .. }) => return Ok(PathVerdict::Invalid { index }),
            Err(GameError::SelfPass(_)) => return Ok(PathVerdict::Invalid { index: i + 1 }),
            Err(e) => return Err(e),
        }
    }
    Ok(PathVerdict::Valid)
}
