//! Random non-expected utility over three-prize lotteries.

pub mod axioms;
pub mod error;
pub mod geometry;
pub mod identification;
pub mod io;
pub mod joint_choice;
pub mod montecarlo;
pub mod preferences;
pub mod random_utility;
pub mod scalar;

pub use axioms::{check_extremeness, check_monotonicity, check_stochastic_betweenness, AxiomReport};
pub use error::{Error, Result};
pub use geometry::{
    angle_at, face_of, orient, Chart, HalfPlane, Line, Lottery, Menu, Point, Prize, PrizeRanking, Region, Side, Subset,
};
pub use identification::{CdfQuery, MomentTable, SlopeAtom, SlopeLaw};
pub use joint_choice::{
    decompose4, joint_choice_prob, reduce_joint_event, BinaryEvent, Cell, Decomposition, LeafCase, Relation,
};
pub use montecarlo::McConfig;
pub use preferences::{
    EuPreference, ImplicitBetweenness, LocalUtility, Orientation, Preference, SemiWeighted, WuFunctional, WuPreference,
};
pub use random_utility::{ChoiceEvent, Prob, RandomPreference, Rcc, RccRow};
pub use scalar::{Rat, Scalar};
