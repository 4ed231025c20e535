//! The Giving Game: token-passing dynamics over preference matrices.
//!
//! One agent holds a token. The holder x passes it to some y whose cell
//! (x, y) is *blue* (ties the maximum of column x); the twin cell (y, x)
//! then gains one and y holds. Every run eventually locks into a forever
//! alternation between two agents, its *stability pair*.
//!
//! The crate splits the machinery into:
//! - [`matrix`]: matrices, cell colors, gaps;
//! - [`engine`]: legal steps, traces, policies, branch enumeration;
//! - [`frame`]: the blue-cell digraph, its classes and elementary cycles;
//! - [`stability`]: pair classification, phase splitting, reduction to
//!   normal form, the stability-pair decision;
//! - [`generate`]: matrix constructors for tests and experiments;
//! - [`io`]: JSON wire forms for matrices and traces;
//! - [`render`]: plain-text and summary rendering.
//!
//! ```
//! use giving_game::{generate::fixture_figure2, engine::{play, ChoicePolicy}, matrix::AgentId};
//!
//! let m = fixture_figure2();
//! let trace = play(&m, AgentId(2), &ChoicePolicy::FirstByIndex, 100).unwrap();
//! assert!(trace.is_stabilized());
//! ```

pub mod engine;
pub mod error;
pub mod frame;
pub mod generate;
pub mod io;
pub mod matrix;
pub mod render;
pub mod stability;

pub use engine::{
    enumerate_branches, play, validate_path, ChoicePolicy, SearchLimits, Step, Trace,
};
pub use error::{GameError, Result};
pub use frame::{frame_of, ElementaryCycle, EquivalenceClasses, Frame};
pub use matrix::{AgentId, CellColor, Pair, PreferenceMatrix};
pub use stability::{
    classify_pair, cycle_decomposition, decide_pair, decide_turquoise_pair, reduce_to_normal_form,
    split_phases, stability_pairs_of_game, stability_pairs_of_matrix, stabilization_bound, Answer,
    CycleDecomposition, PairClass, PhaseSplit, StabilityVerdict,
};
