//! State representation and evolution of the coined walk.
//!
//! One step is a conditional shift (first component toward +m, second toward
//! -m) composed with a coin acting on the pair at each site. The default
//! ordering applies the coin after the shift, so a single step from a point
//! source `(alpha, beta)` at the origin leaves both components on site +1
//! mixed by the coin row structure:
//!
//! ```text
//! R'(m) = a R(m-1) + b L(m+1)
//! L'(m) = c R(m-1) + d L(m+1)
//! ```
//!
//! On the line the support after n steps is contained in `[origin - n,
//! origin + n]` and only positions with `m = origin + n (mod 2)` carry
//! amplitude. The state stores exactly those parity slots, so off-parity
//! positions are structural zeros rather than stored values. On the circle
//! the `2M + 1` sites are stored densely and the shift wraps `+M -> -M` and
//! `-M -> +M`; once amplitude crosses the seam the parity classes mix, which
//! is the physically correct behavior on an odd ring.

use crate::analysis::ProbabilityDistribution;
use crate::coin::{CoinOperator, CoinState};
use crate::error::{Error, Result};
use crate::C64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Tolerance for the total norm of a walk state.
pub const NORM_TOL: f64 = 1e-10;

/// Site count above which the auto-dispatching step uses the rayon kernel.
/// Coarse tuning from the bench suite; below this the per-site work is too
/// small to amortize the fork-join overhead.
pub const PARALLEL_THRESHOLD: usize = 8192;

const ZERO_PAIR: (C64, C64) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));

/// Lattice the walk lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkTopology {
    /// The infinite line.
    Line,
    /// A ring of `2 m_max + 1` sites indexed `-m_max ..= m_max`.
    Circle { m_max: i64 },
}

impl WalkTopology {
    /// Validated circle constructor; `m_max` must be at least 1.
    pub fn circle(m_max: i64) -> Result<Self> {
        if m_max < 1 {
            return Err(Error::InvalidCircle { m_max });
        }
        Ok(WalkTopology::Circle { m_max })
    }
}

/// Order of the shift and coin factors inside one step.
///
/// `CoinAfterShift` is the default. The two orderings produce identical
/// distributions only for special initial coin states; see the crate README
/// for the empirically mapped dependence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepOrdering {
    #[default]
    CoinAfterShift,
    ShiftAfterCoin,
}

/// Immutable walk state after some number of steps.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    step: u64,
    topology: WalkTopology,
    /// Position of slot 0. Slot stride is 2 on the line (parity storage)
    /// and 1 on the circle.
    min_pos: i64,
    amps: Vec<(C64, C64)>,
}

impl WalkState {
    /// A point source at `origin` with coin state `(alpha, beta)`.
    pub fn localized(topology: WalkTopology, origin: i64, coin: CoinState) -> Result<Self> {
        match topology {
            WalkTopology::Line => Ok(WalkState {
                step: 0,
                topology,
                min_pos: origin,
                amps: vec![(coin.alpha(), coin.beta())],
            }),
            WalkTopology::Circle { m_max } => {
                if m_max < 1 {
                    return Err(Error::InvalidCircle { m_max });
                }
                if origin < -m_max || origin > m_max {
                    return Err(Error::PositionOutOfRange {
                        position: origin,
                        min: -m_max,
                        max: m_max,
                    });
                }
                let len = usize::try_from(2 * m_max + 1).expect("ring size fits usize");
                let mut amps = vec![ZERO_PAIR; len];
                amps[(origin + m_max) as usize] = (coin.alpha(), coin.beta());
                Ok(WalkState {
                    step: 0,
                    topology,
                    min_pos: -m_max,
                    amps,
                })
            }
        }
    }

    /// Builds a line state from explicit parity-slot amplitudes.
    ///
    /// Slot `i` sits at position `min_pos + 2 i`; the total norm must be 1
    /// within [`NORM_TOL`].
    pub fn on_line(step: u64, min_pos: i64, amps: Vec<(C64, C64)>) -> Result<Self> {
        Self::validated(WalkTopology::Line, step, min_pos, amps)
    }

    /// Builds a circle state from dense amplitudes over `-m_max ..= m_max`.
    pub fn on_circle(step: u64, m_max: i64, amps: Vec<(C64, C64)>) -> Result<Self> {
        if m_max < 1 {
            return Err(Error::InvalidCircle { m_max });
        }
        if amps.len() as i64 != 2 * m_max + 1 {
            return Err(Error::PositionOutOfRange {
                position: amps.len() as i64 - 1 - m_max,
                min: -m_max,
                max: m_max,
            });
        }
        Self::validated(WalkTopology::Circle { m_max }, step, -m_max, amps)
    }

    fn validated(
        topology: WalkTopology,
        step: u64,
        min_pos: i64,
        amps: Vec<(C64, C64)>,
    ) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::EmptySupport);
        }
        let mut norm = 0.0f64;
        for (r, l) in &amps {
            if !(r.re.is_finite() && r.im.is_finite() && l.re.is_finite() && l.im.is_finite()) {
                return Err(Error::NonFinite {
                    context: "walk amplitudes",
                });
            }
            norm += r.norm_sqr() + l.norm_sqr();
        }
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::UnnormalizedCoinState { norm });
        }
        Ok(WalkState {
            step,
            topology,
            min_pos,
            amps,
        })
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn topology(&self) -> WalkTopology {
        self.topology
    }

    /// Smallest stored position.
    pub fn min_pos(&self) -> i64 {
        self.min_pos
    }

    /// Distance between consecutive stored slots.
    pub fn stride(&self) -> i64 {
        match self.topology {
            WalkTopology::Line => 2,
            WalkTopology::Circle { .. } => 1,
        }
    }

    /// Amplitude pair at position `m`; zero for unstored positions.
    pub fn amplitude(&self, m: i64) -> (C64, C64) {
        let offset = m - self.min_pos;
        let stride = self.stride();
        if offset < 0 || offset % stride != 0 {
            return ZERO_PAIR;
        }
        let slot = (offset / stride) as usize;
        self.amps.get(slot).copied().unwrap_or(ZERO_PAIR)
    }

    /// Iterates stored `(position, first component, second component)`.
    pub fn sites(&self) -> impl Iterator<Item = (i64, C64, C64)> + '_ {
        let stride = self.stride();
        let min = self.min_pos;
        self.amps
            .iter()
            .enumerate()
            .map(move |(i, (r, l))| (min + stride * i as i64, *r, *l))
    }

    /// Total probability mass.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|(r, l)| r.norm_sqr() + l.norm_sqr()).sum()
    }

    /// Per-site probabilities and component marginals.
    pub fn probabilities(&self) -> ProbabilityDistribution {
        ProbabilityDistribution::from_amplitudes(self.step, self.sites())
    }

    /// One walk step with the kernel picked by state width and the
    /// `parallel` feature.
    pub fn step(&self, coin: &CoinOperator, ordering: StepOrdering) -> WalkState {
        #[cfg(feature = "parallel")]
        {
            if self.amps.len() + 1 >= PARALLEL_THRESHOLD {
                return self.step_parallel(coin, ordering);
            }
        }
        self.step_sequential(coin, ordering)
    }

    /// One walk step on the calling thread.
    pub fn step_sequential(&self, coin: &CoinOperator, ordering: StepOrdering) -> WalkState {
        let new_len = self.stepped_len();
        let amps = (0..new_len).map(|i| self.stepped_site(coin, ordering, i)).collect();
        self.stepped_from(amps)
    }

    /// One walk step with the site loop distributed over the rayon pool.
    #[cfg(feature = "parallel")]
    pub fn step_parallel(&self, coin: &CoinOperator, ordering: StepOrdering) -> WalkState {
        let new_len = self.stepped_len();
        let amps = (0..new_len)
            .into_par_iter()
            .map(|i| self.stepped_site(coin, ordering, i))
            .collect();
        self.stepped_from(amps)
    }

    /// Applies `steps` identical steps.
    pub fn evolve(&self, coin: &CoinOperator, ordering: StepOrdering, steps: u64) -> WalkState {
        let mut state = self.clone();
        for _ in 0..steps {
            state = state.step(coin, ordering);
        }
        state
    }

    fn stepped_len(&self) -> usize {
        match self.topology {
            WalkTopology::Line => self.amps.len() + 1,
            WalkTopology::Circle { .. } => self.amps.len(),
        }
    }

    fn stepped_from(&self, amps: Vec<(C64, C64)>) -> WalkState {
        WalkState {
            step: self.step + 1,
            topology: self.topology,
            min_pos: match self.topology {
                WalkTopology::Line => self.min_pos - 1,
                WalkTopology::Circle { .. } => self.min_pos,
            },
            amps,
        }
    }

    /// New amplitude pair of output slot `i`.
    ///
    /// In both topologies the slot layout makes the sources of output slot
    /// `i` the old pair below it (position m - 1) and the old pair above it
    /// (position m + 1); on the line those are old slots `i - 1` and `i`
    /// (out of range reads are zero), on the circle `i -+ 1` wrapped.
    #[inline]
    fn stepped_site(&self, coin: &CoinOperator, ordering: StepOrdering, i: usize) -> (C64, C64) {
        let (below, above) = match self.topology {
            WalkTopology::Line => {
                let below = if i == 0 { ZERO_PAIR } else { self.amps[i - 1] };
                let above = self.amps.get(i).copied().unwrap_or(ZERO_PAIR);
                (below, above)
            }
            WalkTopology::Circle { .. } => {
                let len = self.amps.len();
                let below = self.amps[if i == 0 { len - 1 } else { i - 1 }];
                let above = self.amps[if i + 1 == len { 0 } else { i + 1 }];
                (below, above)
            }
        };
        match ordering {
            StepOrdering::CoinAfterShift => coin.mix(below.0, above.1),
            StepOrdering::ShiftAfterCoin => {
                let from_below = coin.mix(below.0, below.1).0;
                let from_above = coin.mix(above.0, above.1).1;
                (from_below, from_above)
            }
        }
    }
}
