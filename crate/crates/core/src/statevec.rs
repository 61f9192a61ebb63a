//! Dense state-vector simulation and seeded measurement sampling.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::Bitstring;
use crate::circuit::{Circuit, CircuitError, Gate};

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("qubit count {0} outside 1..={MAX_QUBITS}")]
    QubitCount(usize),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("expected {expected} amplitudes, got {got}")]
    Length { expected: usize, got: usize },
    #[error("state norm^2 is {0}, expected 1")]
    NotNormalized(f64),
    #[error("target {target} does not address a {n}-qubit register")]
    TargetWidth { target: String, n: usize },
    #[error("shots must be at least 1")]
    NoShots,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self, SimError> {
        if n == 0 || n > MAX_QUBITS {
            return Err(SimError::QubitCount(n));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self, SimError> {
        if n == 0 || n > MAX_QUBITS {
            return Err(SimError::QubitCount(n));
        }
        if amps.len() != 1 << n {
            return Err(SimError::Length {
                expected: 1 << n,
                got: amps.len(),
            });
        }
        let s = Self { n, amps };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// Applies `gate` in place. Controlled kinds update only the amplitude
    /// pairs whose control bits are all 1.
    pub fn apply(&mut self, gate: &Gate) -> Result<(), SimError> {
        gate.validate(self.n)?;
        let kind = gate.kind();
        let m = kind.target_matrix();
        let cmask = gate.control_mask();
        let tbit = 1usize << gate.target();
        if kind.is_diagonal() {
            let (d0, d1) = (m[0][0], m[1][1]);
            for (i, a) in self.amps.iter_mut().enumerate() {
                if i & cmask == cmask {
                    *a *= if i & tbit == 0 { d0 } else { d1 };
                }
            }
            return Ok(());
        }
        for i0 in 0..self.amps.len() {
            if i0 & tbit != 0 || i0 & cmask != cmask {
                continue;
            }
            let i1 = i0 | tbit;
            let (a0, a1) = (self.amps[i0], self.amps[i1]);
            self.amps[i0] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[i1] = m[1][0] * a0 + m[1][1] * a1;
        }
        Ok(())
    }

    /// By-value form of [`StateVector::apply`].
    pub fn apply_gate(mut self, gate: &Gate) -> Result<Self, SimError> {
        self.apply(gate)?;
        Ok(self)
    }

    /// Runs `circuit` from `|0...0>`.
    pub fn run(circuit: &Circuit) -> Result<Self, SimError> {
        Self::run_observed(circuit, |_, _| {})
    }

    /// Like [`StateVector::run`], calling `observe(i, state)` after gate `i`.
    pub fn run_observed<F>(circuit: &Circuit, mut observe: F) -> Result<Self, SimError>
    where
        F: FnMut(usize, &StateVector),
    {
        let mut s = Self::zero(circuit.num_qubits())?;
        for (i, g) in circuit.gates().iter().enumerate() {
            s.apply(g)?;
            observe(i, &s);
        }
        Ok(s)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(Complex64::norm_sqr).collect()
    }

    fn check_target(&self, t: &Bitstring) -> Result<(), SimError> {
        if t.width() != self.n {
            return Err(SimError::TargetWidth {
                target: t.to_string(),
                n: self.n,
            });
        }
        Ok(())
    }

    /// Total probability mass on `targets`.
    pub fn success_probability(&self, targets: &[Bitstring]) -> Result<f64, SimError> {
        let mut p = 0.0;
        for t in targets {
            self.check_target(t)?;
            p += self.amps[t.index()].norm_sqr();
        }
        Ok(p)
    }

    /// Draws `shots` i.i.d. basis-state outcomes from `ChaCha8Rng::seed_from_u64(seed)`.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<ShotHistogram, SimError> {
        if shots == 0 {
            return Err(SimError::NoShots);
        }
        let dist = WeightedIndex::new(self.probabilities())
            .map_err(|_| SimError::NotNormalized(self.norm_sqr()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tally: BTreeMap<usize, u64> = BTreeMap::new();
        for _ in 0..shots {
            *tally.entry(dist.sample(&mut rng)).or_insert(0) += 1;
        }
        let counts = tally
            .into_iter()
            .map(|(i, c)| {
                (
                    Bitstring::new(i as u64, self.n).expect("index fits register"),
                    c,
                )
            })
            .collect();
        Ok(ShotHistogram {
            shots,
            seed,
            counts,
        })
    }
}

/// Measurement outcome counts, keyed by basis state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotHistogram {
    pub shots: u64,
    pub seed: u64,
    pub counts: BTreeMap<Bitstring, u64>,
}

impl ShotHistogram {
    pub fn count(&self, b: &Bitstring) -> u64 {
        self.counts.get(b).copied().unwrap_or(0)
    }

    /// Fraction of shots that landed on `targets`.
    pub fn hit_rate(&self, targets: &[Bitstring]) -> f64 {
        targets.iter().map(|t| self.count(t)).sum::<u64>() as f64 / self.shots as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn bs(s: &str) -> Bitstring {
        s.parse().unwrap()
    }

    #[test]
    fn zero_state() {
        let s = StateVector::zero(1).unwrap();
        assert_eq!(
            s.amplitudes(),
            &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
        );
        assert_eq!(StateVector::zero(2).unwrap().amplitudes().len(), 4);
        let s5 = StateVector::zero(5).unwrap();
        assert_eq!(s5.amplitudes().len(), 32);
        assert_eq!(s5.amplitude(0), Complex64::new(1.0, 0.0));
        assert!(s5.amplitudes()[1..].iter().all(|a| a.norm() == 0.0));
        assert_eq!(StateVector::zero(0), Err(SimError::QubitCount(0)));
        assert_eq!(StateVector::zero(25), Err(SimError::QubitCount(25)));
    }

    #[test]
    fn hadamard_on_zero() {
        let s = StateVector::zero(1)
            .unwrap()
            .apply_gate(&Gate::h(0))
            .unwrap();
        for a in s.amplitudes() {
            assert!((a - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn phase_shift_on_one() {
        let phi = 2.1951;
        let s = StateVector::zero(1)
            .unwrap()
            .apply_gate(&Gate::x(0))
            .unwrap()
            .apply_gate(&Gate::ps(phi, 0))
            .unwrap();
        assert_eq!(s.amplitude(0), Complex64::new(0.0, 0.0));
        assert!((s.amplitude(1) - Complex64::from_polar(1.0, phi)).norm() < 1e-15);
    }

    #[test]
    fn hh_is_identity() {
        let mut c = Circuit::new(1);
        c.extend([Gate::h(0), Gate::h(0)]).unwrap();
        let s = StateVector::run(&c).unwrap();
        assert!((s.amplitude(0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(s.amplitude(1).norm() < 1e-15);
    }

    #[test]
    fn invalid_gate_rejected() {
        let mut s = StateVector::zero(2).unwrap();
        assert!(matches!(s.apply(&Gate::x(2)), Err(SimError::Circuit(_))));
    }

    #[test]
    fn uniform_success() {
        let mut c = Circuit::new(2);
        c.extend([Gate::h(0), Gate::h(1)]).unwrap();
        let s = StateVector::run(&c).unwrap();
        let p = s.success_probability(&[bs("00"), bs("01")]).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
        assert!(s.success_probability(&[bs("000")]).is_err());
    }

    #[test]
    fn sampling_basis_state_and_determinism() {
        let s = StateVector::zero(3)
            .unwrap()
            .apply_gate(&Gate::x(1))
            .unwrap();
        let h = s.sample(1000, 7).unwrap();
        assert_eq!(h.counts.len(), 1);
        assert_eq!(h.count(&bs("010")), 1000);

        let mut c = Circuit::new(3);
        c.extend([Gate::h(0), Gate::h(1), Gate::ry(PI / 3.0, 2)])
            .unwrap();
        let s = StateVector::run(&c).unwrap();
        assert_eq!(s.sample(500, 42).unwrap(), s.sample(500, 42).unwrap());
        assert_ne!(s.sample(500, 42).unwrap(), s.sample(500, 43).unwrap());
        assert_eq!(s.sample(0, 1), Err(SimError::NoShots));
    }
}
