//! Element-level classical-optics model of the walk cavities.
//!
//! A light field is a two-component complex amplitude per discrete frequency
//! index (a "cebit" per index): polarization components x/y, path components
//! r1/r2, or the hybrid clockwise-x / counterclockwise-y pairing. Optical
//! elements act as Jones matrices on the component pair (wave plates, beam
//! splitters) or as conditional frequency relabelings (electro-optic
//! modulators). A cavity roundtrip composes one conditional frequency shift
//! with an optionally gated coin element, so a full walk step of one
//! frequency unit takes `f` roundtrips on an `f`-times-finer index grid
//! (walk positions sit at multiples of `f`).
//!
//! Modeling granularity: the double-passed elements of the linear cavity
//! (half-shift modulator and quarter-wave plate traversed twice per
//! roundtrip) are composed analytically into their net roundtrip action —
//! one full fine shift plus one half-wave-plate coin. The literal
//! interleaving would place amplitudes on half-unit frequencies mid
//! roundtrip; those are never read out, and per component the net
//! stroboscopic map is exactly the composed form up to a uniform half-unit
//! relabeling, which the integer grid absorbs.

use std::collections::BTreeMap;

use crate::analysis::ProbabilityDistribution;
use crate::coin::{CoinOperator, CoinState};
use crate::error::{Error, Result};
use crate::walk::{WalkTopology, NORM_TOL};
use crate::C64;

/// Which physical degree of freedom carries the two coin components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CebitKind {
    /// c1 = x polarization, c2 = y polarization.
    Polarization,
    /// c1 = ring-1 path, c2 = ring-2 path.
    Path,
    /// c1 = clockwise-x, c2 = counterclockwise-y.
    Hybrid,
}

impl CebitKind {
    pub fn name(self) -> &'static str {
        match self {
            CebitKind::Polarization => "polarization",
            CebitKind::Path => "path",
            CebitKind::Hybrid => "hybrid",
        }
    }
}

/// Direction of the modular frequency shift of [`apply_eombar`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDirection {
    Increase,
    Decrease,
}

/// Classical field as a frequency-indexed set of component pairs.
///
/// Indices are integers on whatever grid the surrounding run uses (walk
/// units for `f = 1`, fine units otherwise). Total intensity is 1 within
/// [`NORM_TOL`]; elements preserve it exactly up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    kind: CebitKind,
    roundtrips: u64,
    amps: BTreeMap<i64, (C64, C64)>,
}

impl FieldState {
    /// All intensity in one frequency index with coin components `state`.
    pub fn single_frequency(kind: CebitKind, index: i64, state: CoinState) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert(index, (state.alpha(), state.beta()));
        FieldState {
            kind,
            roundtrips: 0,
            amps,
        }
    }

    /// Builds a field from explicit per-index component pairs.
    pub fn from_amplitudes(
        kind: CebitKind,
        sites: impl IntoIterator<Item = (i64, C64, C64)>,
    ) -> Result<Self> {
        let mut amps = BTreeMap::new();
        let mut norm = 0.0f64;
        for (m, c1, c2) in sites {
            if !(c1.re.is_finite() && c1.im.is_finite() && c2.re.is_finite() && c2.im.is_finite())
            {
                return Err(Error::NonFinite {
                    context: "field amplitudes",
                });
            }
            if c1 == C64::new(0.0, 0.0) && c2 == C64::new(0.0, 0.0) {
                continue;
            }
            norm += c1.norm_sqr() + c2.norm_sqr();
            let slot = amps.entry(m).or_insert((C64::new(0.0, 0.0), C64::new(0.0, 0.0)));
            slot.0 += c1;
            slot.1 += c2;
        }
        if amps.is_empty() {
            return Err(Error::EmptySupport);
        }
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::UnnormalizedCoinState { norm });
        }
        Ok(FieldState {
            kind,
            roundtrips: 0,
            amps,
        })
    }

    pub fn cebit_kind(&self) -> CebitKind {
        self.kind
    }

    /// Number of roundtrips the field has completed.
    pub fn roundtrip_count(&self) -> u64 {
        self.roundtrips
    }

    /// Component pair at `index` (zero when unpopulated).
    pub fn amplitude(&self, index: i64) -> (C64, C64) {
        self.amps
            .get(&index)
            .copied()
            .unwrap_or((C64::new(0.0, 0.0), C64::new(0.0, 0.0)))
    }

    /// Iterates populated `(index, c1, c2)` in ascending index order.
    pub fn sites(&self) -> impl Iterator<Item = (i64, C64, C64)> + '_ {
        self.amps.iter().map(|(m, (c1, c2))| (*m, *c1, *c2))
    }

    /// Total intensity.
    pub fn norm(&self) -> f64 {
        self.amps
            .values()
            .map(|(c1, c2)| c1.norm_sqr() + c2.norm_sqr())
            .sum()
    }

    /// Per-index intensities: `P`, plus the two single-port marginals
    /// (`p_r` = component 1, `p_l` = component 2). The distribution's step
    /// count is the roundtrip count.
    pub fn spectrum(&self) -> ProbabilityDistribution {
        ProbabilityDistribution::from_amplitudes(self.roundtrips, self.sites())
    }

    /// Applies a Jones matrix to every component pair.
    fn mixed(&self, coin: &CoinOperator) -> FieldState {
        FieldState {
            kind: self.kind,
            roundtrips: self.roundtrips,
            amps: self
                .amps
                .iter()
                .map(|(m, (c1, c2))| (*m, coin.mix(*c1, *c2)))
                .collect(),
        }
    }

    /// Relabels indices per component: `c1` by `map_c1`, `c2` by `map_c2`.
    /// The maps must be injective on the populated indices.
    fn relabeled(&self, map_c1: impl Fn(i64) -> i64, map_c2: impl Fn(i64) -> i64) -> FieldState {
        let zero = C64::new(0.0, 0.0);
        let mut amps: BTreeMap<i64, (C64, C64)> = BTreeMap::new();
        for (m, (c1, c2)) in &self.amps {
            if *c1 != zero {
                amps.entry(map_c1(*m)).or_insert((zero, zero)).0 += *c1;
            }
            if *c2 != zero {
                amps.entry(map_c2(*m)).or_insert((zero, zero)).1 += *c2;
            }
        }
        FieldState {
            kind: self.kind,
            roundtrips: self.roundtrips,
            amps,
        }
    }

    fn support_within(&self, min: i64, max: i64) -> Result<()> {
        for m in self.amps.keys() {
            if *m < min || *m > max {
                return Err(Error::PositionOutOfRange {
                    position: *m,
                    min,
                    max,
                });
            }
        }
        Ok(())
    }
}

/// Jones matrix of an ideal half-wave plate with fast axis at `theta`:
/// `[[cos 2θ, sin 2θ], [sin 2θ, -cos 2θ]]`. At θ = π/8 this is the
/// Hadamard mix; at θ = π/4 it swaps x and y.
pub fn hwp(theta: f64) -> CoinOperator {
    let (s, c) = (2.0 * theta).sin_cos();
    CoinOperator::from_entries(
        C64::new(c, 0.0),
        C64::new(s, 0.0),
        C64::new(s, 0.0),
        C64::new(-c, 0.0),
    )
    .expect("half-wave plate matrices are unitary")
}

/// Jones matrix of an ideal quarter-wave plate with fast axis at `theta`,
/// in the convention `R(θ) · diag(1, i) · R(-θ)` (fast axis keeps phase,
/// slow axis is retarded by π/2):
///
/// ```text
/// [[cos²θ + i sin²θ,   (1 - i) sinθ cosθ],
///  [(1 - i) sinθ cosθ,  sin²θ + i cos²θ]]
/// ```
///
/// With this convention the double pass is exact: `qwp(θ) * qwp(θ)` equals
/// `hwp(θ)` entrywise, with no residual global phase.
pub fn qwp(theta: f64) -> CoinOperator {
    let (s, c) = theta.sin_cos();
    let cross = C64::new(s * c, -s * c);
    CoinOperator::from_entries(
        C64::new(c * c, s * s),
        cross,
        cross,
        C64::new(s * s, c * c),
    )
    .expect("quarter-wave plate matrices are unitary")
}

/// Coin matrix of a 50/50 beam splitter on a path cebit.
///
/// `compensated = true` returns the exact Hadamard (splitter plus the phase
/// plates that absorb the reflection phases); `false` returns the bare
/// symmetric splitter `[[1, i], [i, 1]] / √2`.
pub fn beam_splitter(compensated: bool) -> CoinOperator {
    if compensated {
        CoinOperator::hadamard()
    } else {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        CoinOperator::from_entries(
            C64::new(r, 0.0),
            C64::new(0.0, r),
            C64::new(0.0, r),
            C64::new(r, 0.0),
        )
        .expect("symmetric beam splitter is unitary")
    }
}

/// Frequency modulator: component 1 moves by `shift_c1` indices and
/// component 2 by `shift_c2`, without wrap.
pub fn apply_eom(state: &FieldState, shift_c1: i64, shift_c2: i64) -> FieldState {
    state.relabeled(|m| m + shift_c1, |m| m + shift_c2)
}

/// Modular frequency shift over the ring `-m_max ..= m_max` (both
/// components move together): `Increase` sends `m < m_max` to `m + 1` and
/// `m_max` to `-m_max`; `Decrease` is the inverse. The input support must
/// lie within the ring.
pub fn apply_eombar(
    state: &FieldState,
    m_max: i64,
    direction: ShiftDirection,
) -> Result<FieldState> {
    if m_max < 1 {
        return Err(Error::InvalidCircle { m_max });
    }
    state.support_within(-m_max, m_max)?;
    let step = match direction {
        ShiftDirection::Increase => 1,
        ShiftDirection::Decrease => -1,
    };
    let mapper = move |m: i64| wrap_ring(m + step, m_max, 1);
    Ok(state.relabeled(mapper, mapper))
}

/// Canonicalizes a fine index onto the circle ring of `(2 m_max + 1) * f`
/// sites spanning `[-m_max * f, m_max * f + f - 1]`.
fn wrap_ring(index: i64, m_max: i64, f: i64) -> i64 {
    let len = (2 * m_max + 1) * f;
    let low = -m_max * f;
    (index - low).rem_euclid(len) + low
}

/// One optical element, applicable to a field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpticalElement {
    /// Conditional frequency shift (indices per component, no wrap).
    Eom { shift_c1: i64, shift_c2: i64 },
    /// Half-wave plate at angle `theta`.
    Hwp { theta: f64 },
    /// Quarter-wave plate at angle `theta`.
    Qwp { theta: f64 },
    /// 50/50 splitter; `compensated` includes the Hadamard phase plates.
    BeamSplitter { compensated: bool },
    /// Modular shifter over `-m_max ..= m_max`.
    EomBar {
        m_max: i64,
        direction: ShiftDirection,
    },
}

impl OpticalElement {
    pub fn apply(&self, state: &FieldState) -> Result<FieldState> {
        match *self {
            OpticalElement::Eom { shift_c1, shift_c2 } => {
                Ok(apply_eom(state, shift_c1, shift_c2))
            }
            OpticalElement::Hwp { theta } => Ok(state.mixed(&hwp(theta))),
            OpticalElement::Qwp { theta } => Ok(state.mixed(&qwp(theta))),
            OpticalElement::BeamSplitter { compensated } => {
                Ok(state.mixed(&beam_splitter(compensated)))
            }
            OpticalElement::EomBar { m_max, direction } => {
                apply_eombar(state, m_max, direction)
            }
        }
    }
}

/// The four cavity layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CavityDesign {
    /// Ring cavity, polarization cebit: one EOM shifting x up and y down
    /// per pass, one half-wave plate at π/8 as the coin.
    RingPolarization,
    /// Linear cavity, polarization cebit: every element is traversed twice
    /// per roundtrip — two half-unit shifts and a double-passed
    /// quarter-wave plate at π/8 composing to the Hadamard.
    LinearPolarization,
    /// Two coupled rings, path cebit: ring 1's modulator shifts up, ring
    /// 2's shifts down, and the coupling beam splitter (phase-compensated)
    /// is the coin.
    DualRingPath,
    /// One bidirectional ring, hybrid cebit: a single modulator shifts the
    /// clockwise-x component up and the counterclockwise-y component down;
    /// the quarter-wave-plate pair (axes ±π/4) around the splitter forms
    /// the coin — transmission keeps the polarization, reflection is a
    /// double pass through one plate and swaps x and y.
    BidirectionalHybrid,
}

impl CavityDesign {
    pub const ALL: [CavityDesign; 4] = [
        CavityDesign::RingPolarization,
        CavityDesign::LinearPolarization,
        CavityDesign::DualRingPath,
        CavityDesign::BidirectionalHybrid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CavityDesign::RingPolarization => "ring-polarization",
            CavityDesign::LinearPolarization => "linear-polarization",
            CavityDesign::DualRingPath => "dual-ring-path",
            CavityDesign::BidirectionalHybrid => "bidirectional-hybrid",
        }
    }

    pub fn required_cebit(self) -> CebitKind {
        match self {
            CavityDesign::RingPolarization | CavityDesign::LinearPolarization => {
                CebitKind::Polarization
            }
            CavityDesign::DualRingPath => CebitKind::Path,
            CavityDesign::BidirectionalHybrid => CebitKind::Hybrid,
        }
    }

    /// The design's Hadamard-acting coin composite (exact Hadamard for the
    /// wave-plate and compensated-splitter designs; `i ·` Hadamard for the
    /// hybrid plate-splitter-plate sandwich — a global phase).
    pub fn coin_composite(self) -> CoinOperator {
        match self {
            CavityDesign::RingPolarization => hwp(std::f64::consts::FRAC_PI_8),
            CavityDesign::LinearPolarization => {
                let q = qwp(std::f64::consts::FRAC_PI_8);
                q * q
            }
            CavityDesign::DualRingPath => beam_splitter(true),
            CavityDesign::BidirectionalHybrid => {
                let q1 = qwp(std::f64::consts::FRAC_PI_4);
                let q2 = qwp(-std::f64::consts::FRAC_PI_4);
                (q1 * q2) * beam_splitter(true)
            }
        }
    }
}

/// When the coin element acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoinGating {
    /// Once per completed walk step — on the roundtrip that finishes each
    /// group of `f` micro-shifts. This is the true walk schedule.
    EveryFRoundtrips,
    /// On every roundtrip regardless of `f` — the Galton-board schedule.
    /// Coincides with [`CoinGating::EveryFRoundtrips`] when `f = 1`.
    EveryRoundtrip,
}

/// Full cavity run configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityConfig {
    design: CavityDesign,
    topology: WalkTopology,
    f: u32,
    gating: CoinGating,
    coin_element_delta: Option<f64>,
}

impl CavityConfig {
    /// Validates `f >= 1` and circle geometry.
    pub fn new(
        design: CavityDesign,
        topology: WalkTopology,
        f: u32,
        gating: CoinGating,
        coin_element_delta: Option<f64>,
    ) -> Result<Self> {
        if f == 0 {
            return Err(Error::InvalidSubstepCount { f });
        }
        if let WalkTopology::Circle { m_max } = topology {
            if m_max < 1 {
                return Err(Error::InvalidCircle { m_max });
            }
        }
        if let Some(delta) = coin_element_delta {
            if !delta.is_finite() {
                return Err(Error::NonFinite {
                    context: "coin element dephasing angle",
                });
            }
        }
        Ok(CavityConfig {
            design,
            topology,
            f,
            gating,
            coin_element_delta,
        })
    }

    pub fn design(self) -> CavityDesign {
        self.design
    }

    pub fn topology(self) -> WalkTopology {
        self.topology
    }

    pub fn f(self) -> u32 {
        self.f
    }

    pub fn gating(self) -> CoinGating {
        self.gating
    }

    pub fn coin_element_delta(self) -> Option<f64> {
        self.coin_element_delta
    }

    /// The coin the cavity applies when gated: the design's Hadamard
    /// composite, or the symmetric-dephasing matrix when the wave plate is
    /// replaced by a driven modulator (`coin_element_delta`).
    pub fn coin(self) -> CoinOperator {
        match self.coin_element_delta {
            Some(delta) => CoinOperator::galton(delta),
            None => self.design.coin_composite(),
        }
    }
}

/// One cavity roundtrip: the conditional fine shift (component 1 up,
/// component 2 down, one fine index each; modular on the circle) followed
/// by the coin element when the gating schedule calls for it.
pub fn roundtrip(state: &FieldState, config: &CavityConfig) -> Result<FieldState> {
    let required = config.design.required_cebit();
    if state.kind != required {
        return Err(Error::IncompatibleCebit {
            design: config.design.name(),
            required: required.name(),
            got: state.kind.name(),
        });
    }

    let mut next = match config.topology {
        WalkTopology::Line => state.relabeled(|m| m + 1, |m| m - 1),
        WalkTopology::Circle { m_max } => {
            let f = i64::from(config.f);
            let low = -m_max * f;
            let high = m_max * f + f - 1;
            state.support_within(low, high)?;
            state.relabeled(
                move |m| wrap_ring(m + 1, m_max, f),
                move |m| wrap_ring(m - 1, m_max, f),
            )
        }
    };
    next.roundtrips = state.roundtrips + 1;

    let coin_now = match config.gating {
        CoinGating::EveryRoundtrip => true,
        CoinGating::EveryFRoundtrips => next.roundtrips % u64::from(config.f) == 0,
    };
    if coin_now {
        next = next.mixed(&config.coin());
    }
    debug_assert!((next.norm() - state.norm()).abs() < 1e-12);
    Ok(next)
}

/// Runs `steps` walk steps — `steps * f` roundtrips under the configured
/// gating — and returns the final field.
pub fn run_cavity(initial: &FieldState, config: &CavityConfig, steps: u64) -> Result<FieldState> {
    let mut state = initial.clone();
    for _ in 0..steps * u64::from(config.f) {
        state = roundtrip(&state, config)?;
    }
    Ok(state)
}

/// Largest per-site amplitude difference between two fields after removing
/// one global phase (chosen to align the fields' overlap). Zero means the
/// fields are physically identical.
pub fn phase_aligned_distance(a: &FieldState, b: &FieldState) -> f64 {
    let mut overlap = C64::new(0.0, 0.0);
    for (m, c1, c2) in b.sites() {
        let (a1, a2) = a.amplitude(m);
        overlap += c1.conj() * a1 + c2.conj() * a2;
    }
    let phase = if overlap.norm() > 1e-30 {
        overlap / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };

    let mut worst = 0.0f64;
    let mut seen = std::collections::BTreeSet::new();
    for (m, _, _) in a.sites().chain(b.sites()) {
        if !seen.insert(m) {
            continue;
        }
        let (a1, a2) = a.amplitude(m);
        let (b1, b2) = b.amplitude(m);
        worst = worst
            .max((a1 - phase * b1).norm())
            .max((a2 - phase * b2).norm());
    }
    worst
}
