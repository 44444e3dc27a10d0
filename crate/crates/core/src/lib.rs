//! Exact computation in Thompson's group `V` and in the fraction groups
//! `G_α = K ⋊ V` obtained from a finite group `Γ` with an endomorphism `α`.

pub mod automorphism;
pub mod classify;
pub mod cocycle;
pub mod decorated;
pub mod dyadic;
pub mod error;
pub mod forest;
pub mod fraction;
pub mod group;
pub mod oracle;
pub mod random;
pub mod thompson;
pub mod verify;

pub use dyadic::{Dyadic, Word};
pub use error::{Error, Result};
pub use decorated::{DecoratedCategory, DecoratedFraction, DecoratedMorphism};
pub use forest::{Forest, Sdi, Sdp, Tree};
pub use fraction::{g_invert, g_multiply, jones_act, theta_inverse, theta_t, GElement, KElement, TreeRepresentative, Twist};
pub use group::{FiniteGroup, GroupMap};
pub use thompson::{SlopeFunction, VClass, VElement};
