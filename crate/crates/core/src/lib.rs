//! Exact p-box natural extension on finite totally preordered spaces, with
//! maxitivity tests, possibility conversions and multivariate joints.

pub mod chain;
pub mod cli;
pub mod document;
pub mod error;
pub mod maxitive;
pub mod multivariate;
pub mod oracle;
pub mod pbox;
pub mod possibility;
pub mod rational;
pub mod verify;

pub use chain::{Chain, Event};
pub use error::{Error, Result};
pub use pbox::{HSet, HalfOpen, IntervalEvent, PBox};
pub use possibility::{PossDist, PossibilityCheck};
pub use rational::Rational;
