//! Optimal systolic metrics on flat Möbius strips and Klein bottles.
//!
//! The crate works with conformal metrics `φ²·g_flat` on the quotients
//!
//! * `M_β = (ℝ × [-β, β]) / ⟨A⟩` with `A(x, y) = (x + π, -y)`, and
//! * `K_β = ℝ² / ⟨A, B⟩` with `B(x, y) = (x, y + 4β)`,
//!
//! where the conformal factor is invariant under the flat isometry group and is
//! therefore described by a positive [`Profile`] on `[0, β]`.
//!
//! Main entry points:
//!
//! * [`geometry`]: surfaces, deck words, profiles, lifted polylines.
//! * [`measure`]: adaptive quadrature, curve lengths, areas, `L²` products.
//! * [`optimal`]: Pu's factor `φ₀`, the optimal profiles of every conformal
//!   class, their closed-form systolic areas, Pu curves and the sphere chart.
//! * [`systole`]: grid shortest paths in the universal cover, per deck word.
//! * [`projections`]: the isometry average, the rank-one projection, Pu's
//!   equality, the projection inequality and [`DefectReport`].
//! * [`verify`]: the seeded verification suites driven by the CLI.
//! * [`cli`]: the `systolic` command-line front end.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod geometry;
pub mod io;
pub mod measure;
pub mod optimal;
pub mod projections;
pub mod systole;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{
    classify_curve, deck_apply, profile_eval, CurveClass, CurvePolyline, DeckWord, Point, Profile,
    SurfaceKind, SurfaceSpec,
};
pub use measure::{area, curve_length, l2_inner, QuadratureConfig};
pub use optimal::{
    alpha_curve, klein_optimal, mobius_optimal, optimal_summary, phi0, pu_curve, solve_s_beta, sphere_chart,
    CaseTag, OptimalSummary,
};
pub use projections::{defect_report, DefectReport};
pub use systole::{shortest_in_class, systole_estimate, GridConfig, Stencil, SystoleEstimate};
