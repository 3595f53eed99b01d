//! Orthogeodesic length spectra between strictly convex bodies on the flat torus
//! `T^d = R^d / 2πZ^d`, together with the analytic objects built from them:
//! counting functions, convex and Epstein zeta functions, Dirac combs and their
//! Fourier transforms, and correlation functions of the geodesic flow.

pub mod body;
pub mod error;
pub mod flow;
pub mod numeric;
pub mod orthospectrum;
pub mod runner;
pub mod spectral;
pub mod zeta;

pub use body::{minkowski_difference, BodySpec, ConvexBody, Shape};
pub use error::{Error, Result};
pub use num_complex::Complex64;
