//! Matrix constructors: the trivial game, seeded random instances, reference
//! fixtures, and an all-turquoise family with fast-growing cycle counts.

use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{GameError, Result};
use crate::matrix::{AgentId, PreferenceMatrix};

/// What to build. The string form (see [`FromStr`]) is
/// `trivial:N | random:N,MAX,SEED | turquoise:K | fixture:NAME`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSpec {
    /// All cells zero, n agents.
    Trivial { n: usize },
    /// Cells drawn uniformly from 0..=max_value, reproducible from the seed.
    Random { n: usize, max_value: u64, seed: u64 },
    /// k-agent tournament in which every twin pair is turquoise; see
    /// [`turquoise_family`].
    TurquoiseFamily { k: usize },
    /// Named reference matrix: "figure1", "figure2" (same values), "figure6a".
    Fixture(String),
}

impl FromStr for GeneratorSpec {
    type Err = GameError;

    fn from_str(s: &str) -> Result<GeneratorSpec> {
        let bad = |why: &str| {
            GameError::InvalidArgument(format!(
                "bad generator spec {s:?}: {why} \
                 (expected trivial:N | random:N,MAX,SEED | turquoise:K | fixture:NAME)"
            ))
        };
        let (kind, args) = s.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        match kind {
            "trivial" => Ok(GeneratorSpec::Trivial {
                n: args
                    .parse()
                    .map_err(|_| bad("agent count must be an integer"))?,
            }),
            "random" => {
                let parts: Vec<&str> = args.split(',').collect();
                if parts.len() != 3 {
                    return Err(bad("random takes N,MAX,SEED"));
                }
                Ok(GeneratorSpec::Random {
                    n: parts[0].parse().map_err(|_| bad("N must be an integer"))?,
                    max_value: parts[1]
                        .parse()
                        .map_err(|_| bad("MAX must be an integer"))?,
                    seed: parts[2]
                        .parse()
                        .map_err(|_| bad("SEED must be an integer"))?,
                })
            }
            "turquoise" => Ok(GeneratorSpec::TurquoiseFamily {
                k: args
                    .parse()
                    .map_err(|_| bad("family size must be an integer"))?,
            }),
            "fixture" => Ok(GeneratorSpec::Fixture(args.to_string())),
            _ => Err(bad("unknown kind")),
        }
    }
}

/// Builds the matrix a spec describes.
pub fn generate(spec: &GeneratorSpec) -> Result<PreferenceMatrix> {
    match spec {
        GeneratorSpec::Trivial { n } => PreferenceMatrix::zeros(*n),
        GeneratorSpec::Random { n, max_value, seed } => random_matrix(*n, *max_value, *seed),
        GeneratorSpec::TurquoiseFamily { k } => turquoise_family(*k),
        GeneratorSpec::Fixture(name) => match name.as_str() {
            "figure1" | "figure2" => Ok(fixture_figure2()),
            "figure6a" => Ok(fixture_figure6a()),
            other => Err(GameError::InvalidArgument(format!(
                "unknown fixture {other:?} (known: figure1, figure2, figure6a)"
            ))),
        },
    }
}

/// Uniform cells in 0..=max_value. The draw order (row-major, diagonal
/// skipped) is part of the seeded contract: fixed (n, max_value, seed) give
/// a bit-identical matrix on every run.
fn random_matrix(n: usize, max_value: u64, seed: u64) -> Result<PreferenceMatrix> {
    let mut m = PreferenceMatrix::zeros(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for r in 0..n {
        for c in 0..n {
            if r != c {
                m.set(AgentId(c), AgentId(r), rng.random_range(0..=max_value))?;
            }
        }
    }
    Ok(m)
}

/// Tournament on k >= 4 agents in which every twin pair is turquoise.
///
/// Exactly one cell of each pair is set to 1 (blue; every column max is 1),
/// the twin stays 0 (white). Direction for the pair {i, j} with i < j:
/// inside a parity class the later agent selects the earlier (j -> i),
/// across classes the earlier selects the later (i -> j).
///
/// Consequences used by tests and callers:
/// - agent 1's blue cells point only into the even-index class (indices
///   2, 4, ...), never to agent 0 or the odd-index class;
/// - every even-index agent 2m selects all earlier even-index agents, so
///   each extension by one even-index agent closes many new cycles;
/// - the k-agent matrix is the top-left corner of the (k+1)-agent one, so
///   all elementary cycles carry over and the cycle count at least doubles
///   per added agent.
pub fn turquoise_family(k: usize) -> Result<PreferenceMatrix> {
    if k < 4 {
        return Err(GameError::InvalidArgument(format!(
            "turquoise family needs at least 4 agents, got {k}"
        )));
    }
    let mut m = PreferenceMatrix::zeros(k)?;
    for i in 0..k {
        for j in (i + 1)..k {
            let (from, to) = if i % 2 == j % 2 { (j, i) } else { (i, j) };
            m.set(AgentId(from), AgentId(to), 1)?;
        }
    }
    Ok(m)
}

/// Four-agent reference matrix used across the test suite. Column maxes are
/// 2, 1, 4, 1; agent A has two blue successors (B and D).
pub fn fixture_figure2() -> PreferenceMatrix {
    let labels = ["A", "B", "C", "D"].map(String::from).to_vec();
    PreferenceMatrix::from_rows(
        labels,
        &[
            vec![None, Some(0), Some(1), Some(0)],
            vec![Some(2), None, Some(2), Some(0)],
            vec![Some(1), Some(1), None, Some(1)],
            vec![Some(2), Some(0), Some(4), None],
        ],
    )
    .expect("fixture is well formed")
}

/// Four-agent reference matrix whose frame is the single cycle A->B->C->D->A
/// with twin gaps 5, 5, 8, 3.
pub fn fixture_figure6a() -> PreferenceMatrix {
    let labels = ["A", "B", "C", "D"].map(String::from).to_vec();
    PreferenceMatrix::from_rows(
        labels,
        &[
            vec![None, Some(2), Some(1), Some(9)],
            vec![Some(4), None, Some(0), Some(2)],
            vec![Some(0), Some(7), None, Some(1)],
            vec![Some(1), Some(5), Some(5), None],
        ],
    )
    .expect("fixture is well formed")
}
