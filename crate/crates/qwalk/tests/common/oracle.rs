//! Dense step-matrix brute-force reference for the walk evolution.
//!
//! Deliberately independent of the engine: the single-step operator is
//! materialized as a full `2S x 2S` complex matrix straight from the update
//! rules, and evolution is repeated dense matrix-vector multiplication. Slow
//! and memory-hungry, but with no shared code path to hide a common bug.

use qwalk::{C64, CoinOperator, CoinState, StepOrdering, WalkState, WalkTopology};

const ZERO: C64 = C64::new(0.0, 0.0);

pub struct DenseOracle {
    sites: Vec<i64>,
    matrix: Vec<Vec<C64>>,
    state: Vec<C64>,
    steps: u64,
}

impl DenseOracle {
    /// Line oracle on the window `-n_max ..= n_max`, walker starting at the
    /// origin. Valid for at most `n_max` steps (support then still fits).
    pub fn line(n_max: i64, init: CoinState, coin: &CoinOperator, ordering: StepOrdering) -> Self {
        let sites: Vec<i64> = (-n_max..=n_max).collect();
        Self::build(sites, 0, init, coin, ordering, false)
    }

    /// Circle oracle on `-m_max ..= m_max` with wrap-around neighbors.
    #[allow(dead_code)] // used by the oracle test target, not every target
    pub fn circle(m_max: i64, init: CoinState, coin: &CoinOperator, ordering: StepOrdering) -> Self {
        let sites: Vec<i64> = (-m_max..=m_max).collect();
        Self::build(sites, 0, init, coin, ordering, true)
    }

    fn build(
        sites: Vec<i64>,
        origin: i64,
        init: CoinState,
        coin: &CoinOperator,
        ordering: StepOrdering,
        wrap: bool,
    ) -> Self {
        let s = sites.len();
        let dim = 2 * s;
        let index_of = |m: i64| sites.iter().position(|&x| x == m);
        let neighbor = |i: usize, offset: i64| -> Option<usize> {
            if wrap {
                Some(((i as i64 + offset).rem_euclid(s as i64)) as usize)
            } else {
                let j = i as i64 + offset;
                (0..s as i64).contains(&j).then_some(j as usize)
            }
        };

        // Column layout: entry 2j is the right-mover at sites[j], 2j+1 the
        // left-mover. Rows are filled from the per-site update rules.
        let mut matrix = vec![vec![ZERO; dim]; dim];
        let (a, b, c, d) = (coin.a(), coin.b(), coin.c(), coin.d());
        for i in 0..s {
            match ordering {
                StepOrdering::CoinAfterShift => {
                    // new_R[m] = a R[m-1] + b L[m+1]; new_L[m] = c R[m-1] + d L[m+1]
                    if let Some(j) = neighbor(i, -1) {
                        matrix[2 * i][2 * j] = a;
                        matrix[2 * i + 1][2 * j] = c;
                    }
                    if let Some(j) = neighbor(i, 1) {
                        matrix[2 * i][2 * j + 1] = b;
                        matrix[2 * i + 1][2 * j + 1] = d;
                    }
                }
                StepOrdering::ShiftAfterCoin => {
                    // new_R[m] = a R[m-1] + b L[m-1]; new_L[m] = c R[m+1] + d L[m+1]
                    if let Some(j) = neighbor(i, -1) {
                        matrix[2 * i][2 * j] = a;
                        matrix[2 * i][2 * j + 1] = b;
                    }
                    if let Some(j) = neighbor(i, 1) {
                        matrix[2 * i + 1][2 * j] = c;
                        matrix[2 * i + 1][2 * j + 1] = d;
                    }
                }
            }
        }

        let mut state = vec![ZERO; dim];
        let o = index_of(origin).expect("origin inside the window");
        state[2 * o] = init.alpha();
        state[2 * o + 1] = init.beta();

        Self { sites, matrix, state, steps: 0 }
    }

    pub fn step(&mut self) {
        let dim = self.state.len();
        let mut next = vec![ZERO; dim];
        for (row, out) in self.matrix.iter().zip(next.iter_mut()) {
            *out = row.iter().zip(&self.state).map(|(m, v)| m * v).sum();
        }
        self.state = next;
        self.steps += 1;
    }

    #[allow(dead_code)] // used by the oracle test target, not every target
    pub fn steps(&self) -> u64 {
        self.steps
    }

    #[allow(dead_code)] // used by the oracle test target, not every target
    pub fn norm(&self) -> f64 {
        self.state.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn amplitude(&self, m: i64) -> (C64, C64) {
        match self.sites.iter().position(|&x| x == m) {
            Some(j) => (self.state[2 * j], self.state[2 * j + 1]),
            None => (ZERO, ZERO),
        }
    }

    /// Largest per-component amplitude difference against an engine state,
    /// scanned over the oracle's whole window.
    pub fn max_amplitude_diff(&self, walk: &WalkState) -> f64 {
        assert_eq!(self.steps, walk.step_count(), "comparing equal step counts");
        let mut worst = 0.0f64;
        for &m in &self.sites {
            let (or, ol) = self.amplitude(m);
            let (wr, wl) = walk.amplitude(m);
            worst = worst.max((or - wr).norm()).max((ol - wl).norm());
        }
        worst
    }
}

/// Engine state matching an oracle's starting condition.
pub fn engine_state(topology: WalkTopology, init: CoinState) -> WalkState {
    WalkState::localized(topology, 0, init).expect("origin is valid for these topologies")
}
