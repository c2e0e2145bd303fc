//! Lower-approximation certificates for short periods: limiting
//! perturbations `ε′_{r,k}`, the functions `Π_r` built from them, the case
//! analyses certifying `liminf P_N(α) > 0` for `[0;(5,4)]` and
//! `[0;(6,5,5)]`, and the all-ones demonstrator for `[0;(6,5)]`.

mod eps;
mod lemmas;
mod pi;
mod stream;
mod theorem2;

pub use eps::{eps_prime, eps_prime_closed, eps_prime_exact, perturbation_window, TailCoefficients};
pub use lemmas::{verify_lemma_54, verify_lemma_54_with, verify_lemma_655, verify_lemma_655_with, verify_theorem3, LemmaOptions};
pub use pi::{admissible_tuples, g_tilde, pi_lower, Bound, Check, CheckSet, GKey, PiEngine, PiRow, PiTable, Verdict, T_MAX, T_START};
pub use stream::{random_admissible, random_stream, DigitStream};
pub use theorem2::{all_ones, eps_convergence_test, ones_eps_prime, theorem2_demo, EpsConvergence, LevelFactor, Theorem2Options};
