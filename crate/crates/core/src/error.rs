use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },

    #[error("point ({x:.3e}, {y:.3e}, {z:.3e}) m lies inside the magnet body")]
    InsideMagnet { x: f64, y: f64, z: f64 },

    #[error("requested Hadamard order {requested} exceeds the cap {cap}")]
    HadamardTooLarge { requested: usize, cap: usize },

    #[error("qubit index {index} out of range for a {n}-qubit chain")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("recoupling pair ({i}, {j}) is invalid: {reason}")]
    InvalidRecoupling { i: usize, j: usize, reason: &'static str },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(&'static str),

    #[error("duration {duration:.6e} s is not an integer number of {cycle:.6e} s cycles")]
    NonIntegerCycles { duration: f64, cycle: f64 },

    #[error("finite pulse of {pulse:.4e} s does not fit the {window:.4e} s pulse window")]
    PulseOverlap { pulse: f64, window: f64 },

    #[error("register of {n} bits exceeds the exact-mode limit of {limit}")]
    RegisterTooLarge { n: usize, limit: usize },

    #[error("bit indices must be distinct")]
    DuplicateBits,

    #[error("target bias {target} is unreachable")]
    UnreachableTarget { target: f64 },

    #[error("register exhausted at bias {achieved:.6} before reaching target {target}")]
    RegisterExhausted { achieved: f64, target: f64 },

    #[error("readout modulation frequencies {a:.6e} and {b:.6e} rad/s are closer than ω_c/Q")]
    CollidingModulation { a: f64, b: f64 },

    #[error("not measurable: signal stays below the force-noise threshold even at p = 1")]
    NotMeasurable,

    #[error("empty input: {0}")]
    Empty(&'static str),
}

pub(crate) fn ensure(cond: bool, name: &'static str, reason: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason })
    }
}
