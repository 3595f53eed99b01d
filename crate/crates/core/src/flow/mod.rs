//! Correlation functions of the geodesic flow `g_t(x, theta) = (x + t theta, theta)`
//! on the unit tangent bundle of the torus, their large-time asymptotics and their
//! Laplace and Mellin transforms.

pub mod harmonics;
mod observable;
mod oscillatory;
mod sobolev;
mod transforms;

pub use observable::{Amplitude, ModeSpec, Observable, ObservableSpec, Projectors, SphereFn};
pub use oscillatory::{
    correlation, oscillatory_integral, stationary_phase_leading, CorrelationKernel, ModeKernel,
    MAX_PHASE, REL_TOL,
};
pub use sobolev::anisotropic_norm;
pub use transforms::{
    laplace_transform, mellin_transform, MellinValue, TransformEngine, TransformOptions,
    SINGULAR_RADIUS,
};
