//! Plain-text rendering: matrix grids, agent paths, and run summaries.
//!
//! Everything here is byte-stable for a given input and free of terminal
//! escape codes, so command output can be golden-tested and piped.

use crate::engine::Trace;
use crate::matrix::{AgentId, CellColor, Pair, PreferenceMatrix};

/// "{C,D}" with the lower-indexed agent first.
pub fn pair_string(m: &PreferenceMatrix, p: Pair) -> String {
    format!("{{{},{}}}", m.label(p.lo()), m.label(p.hi()))
}

fn join_labels(labels: &[&str], tight: bool) -> String {
    labels.join(if tight { "" } else { " " })
}

fn all_single_char(labels: &[&str]) -> bool {
    labels.iter().all(|l| l.chars().count() == 1)
}

/// Agent path with one space between labels, regardless of label width.
pub fn spaced_path(t: &Trace) -> String {
    let m = t.initial_matrix();
    t.agents()
        .into_iter()
        .map(|a| m.label(a))
        .collect::<Vec<_>>()
        .join(" ")
}

/// "ABCDA" for single-char labels, "A1 B2 A1" otherwise: the cycle's agents
/// with the starting agent repeated at the end.
pub fn cycle_string(m: &PreferenceMatrix, agents: &[AgentId]) -> String {
    let mut labels: Vec<&str> = agents.iter().map(|&a| m.label(a)).collect();
    if let Some(&first) = labels.first() {
        labels.push(first);
    }
    let tight = all_single_char(&labels);
    join_labels(&labels, tight)
}

/// Smallest p with prefix[i] == prefix[i-p] for all i >= p, if p divides the
/// length and repeats at least twice; the compression unit of the prefix.
fn smallest_repeating_unit(prefix: &[AgentId]) -> Option<&[AgentId]> {
    let n = prefix.len();
    for p in 1..=n / 2 {
        if n.is_multiple_of(p) && (p..n).all(|i| prefix[i] == prefix[i - p]) {
            return Some(&prefix[..p]);
        }
    }
    None
}

struct SummaryCandidate<'a> {
    prefix: &'a [AgentId],
    tail: [AgentId; 2],
}

impl SummaryCandidate<'_> {
    // Lower is better: no prefix at all, then a prefix that collapses to a
    // power, then a plain prefix.
    fn score(&self) -> u8 {
        if self.prefix.is_empty() {
            0
        } else if smallest_repeating_unit(self.prefix).is_some() {
            1
        } else {
            2
        }
    }

    fn render(&self, m: &PreferenceMatrix, tight: bool) -> String {
        let seg = |agents: &[AgentId]| {
            let labels: Vec<&str> = agents.iter().map(|&a| m.label(a)).collect();
            join_labels(&labels, tight)
        };
        let tail = format!("({})^ω", seg(&self.tail));
        if self.prefix.is_empty() {
            return tail;
        }
        match smallest_repeating_unit(self.prefix) {
            Some(unit) => {
                let k = self.prefix.len() / unit.len();
                format!("({})^{} {}", seg(unit), k, tail)
            }
            None if tight => format!("{}{}", seg(self.prefix), tail),
            None => format!("{} {}", seg(self.prefix), tail),
        }
    }
}

/// One-line description of where a run ends up.
///
/// A stabilized trace becomes `prefix (XY)^ω`. The boundary step offers two
/// equivalent splits: tail starting at the boundary submitter (prefix
/// excludes it) or at the receiver (prefix includes the submitter). The
/// shorter description wins: an empty prefix beats a power-compressed one
/// beats a plain walk, ties going to the submitter split. A truncated trace
/// has no tail to describe and renders as the path plus "...".
pub fn summary_string(t: &Trace) -> String {
    let m = t.initial_matrix();
    let agents = t.agents();
    let Some(b) = t.boundary() else {
        return format!("{} ...", spaced_path(t));
    };
    let tight = all_single_char(&agents.iter().map(|&a| m.label(a)).collect::<Vec<_>>());
    let submitter_split = SummaryCandidate {
        prefix: &agents[..b],
        tail: [agents[b], agents[b + 1]],
    };
    let receiver_split = SummaryCandidate {
        prefix: &agents[..=b],
        tail: [agents[b + 1], agents[b]],
    };
    if receiver_split.score() < submitter_split.score() {
        receiver_split.render(m, tight)
    } else {
        submitter_split.render(m, tight)
    }
}

/// Value grid with color markers: `.` on the diagonal, `3B` for a blue cell
/// holding 3, `0W` for white. Cell (column X, row Y) sits in X's column and
/// Y's row. `highlight` marks one column header with `*`, the way a holder's
/// column is picked out when stepping through a game; no escape codes.
pub fn matrix_text(m: &PreferenceMatrix, highlight: Option<AgentId>) -> String {
    let n = m.n();
    let headers: Vec<String> = (0..n)
        .map(|c| {
            if highlight == Some(AgentId(c)) {
                format!("*{}", m.label(AgentId(c)))
            } else {
                m.label(AgentId(c)).to_string()
            }
        })
        .collect();
    let cells: Vec<Vec<String>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    if r == c {
                        ".".to_string()
                    } else {
                        let (col, row) = (AgentId(c), AgentId(r));
                        let marker = match m.cell_color(col, row).expect("off-diagonal") {
                            CellColor::Blue => 'B',
                            CellColor::White => 'W',
                        };
                        format!("{}{}", m.value(col, row), marker)
                    }
                })
                .collect()
        })
        .collect();
    let row_label_width = (0..n)
        .map(|r| m.label(AgentId(r)).chars().count())
        .max()
        .unwrap_or(0);
    let col_width = headers
        .iter()
        .map(|h| h.chars().count())
        .chain(cells.iter().flatten().map(|c| c.chars().count()))
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    out.push_str(&" ".repeat(row_label_width));
    for h in &headers {
        out.push_str("  ");
        out.push_str(&" ".repeat(col_width - h.chars().count()));
        out.push_str(h);
    }
    out.push('\n');
    for (r, row) in cells.iter().enumerate() {
        let label = m.label(AgentId(r));
        out.push_str(&" ".repeat(row_label_width - label.chars().count()));
        out.push_str(label);
        for cell in row {
            out.push_str("  ");
            out.push_str(&" ".repeat(col_width - cell.chars().count()));
            out.push_str(cell);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{play, ChoicePolicy};
    use crate::generate::{fixture_figure2, fixture_figure6a};

    fn first_play(m: &PreferenceMatrix, start: usize) -> Trace {
        play(m, AgentId(start), &ChoicePolicy::FirstByIndex, 10_000).unwrap()
    }

    #[test]
    fn summaries_of_reference_runs() {
        let fig2 = fixture_figure2();
        assert_eq!(summary_string(&first_play(&fig2, 2)), "(CD)^ω");
        assert_eq!(summary_string(&first_play(&fig2, 1)), "B(CD)^ω");
        let fig6a = fixture_figure6a();
        assert_eq!(summary_string(&first_play(&fig6a, 0)), "(ABCD)^4 (AD)^ω");
        let trivial2 = PreferenceMatrix::zeros(2).unwrap();
        assert_eq!(summary_string(&first_play(&trivial2, 0)), "(AB)^ω");
    }

    #[test]
    fn truncated_summary_shows_ellipsis() {
        let m = fixture_figure6a();
        let t = play(&m, AgentId(0), &ChoicePolicy::FirstByIndex, 3).unwrap();
        assert!(t.truncated());
        assert_eq!(summary_string(&t), "A B C D ...");
    }

    #[test]
    fn spaced_path_and_pair() {
        let m = fixture_figure2();
        let t = first_play(&m, 2);
        assert_eq!(spaced_path(&t), "C D C D");
        assert_eq!(t.path_string(), "CDCD");
        assert_eq!(pair_string(&m, t.stability_pair().unwrap()), "{C,D}");
    }

    #[test]
    fn cycle_string_repeats_start() {
        let m = fixture_figure6a();
        let ids: Vec<AgentId> = [0usize, 1, 2, 3].map(AgentId).to_vec();
        assert_eq!(cycle_string(&m, &ids), "ABCDA");
        assert_eq!(cycle_string(&m, &[AgentId(2), AgentId(3)]), "CDC");
    }

    #[test]
    fn figure2_grid_is_stable() {
        let m = fixture_figure2();
        let expected = concat!(
            "    A   B   C   D\n",
            "A   .  0W  1W  0W\n",
            "B  2B   .  2W  0W\n",
            "C  1W  1B   .  1B\n",
            "D  2B  0W  4B   .\n",
        );
        assert_eq!(matrix_text(&m, None), expected);
        let highlighted = concat!(
            "    A   B  *C   D\n",
            "A   .  0W  1W  0W\n",
            "B  2B   .  2W  0W\n",
            "C  1W  1B   .  1B\n",
            "D  2B  0W  4B   .\n",
        );
        assert_eq!(matrix_text(&m, Some(AgentId(2))), highlighted);
    }

    #[test]
    fn wide_labels_and_values_stay_aligned() {
        let m = PreferenceMatrix::zeros_labeled(vec!["north".into(), "s".into()]).unwrap();
        let text = matrix_text(&m, None);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        let width = lines[0].chars().count();
        assert!(lines.iter().all(|l| l.chars().count() == width));
        // Spaced rendering kicks in for multi-char labels.
        let t = first_play(&m, 0);
        assert_eq!(summary_string(&t), "(north s)^ω");
    }
}
