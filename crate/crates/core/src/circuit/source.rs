//! Source waveforms and their multi-rate (bivariate) form.
//!
//! Every fast waveform is written as a P-periodic profile in the fast time
//! plus a slow phase in the envelope time, chosen so that evaluating the
//! bivariate form along the constant-frequency characteristic reproduces
//! the univariate waveform exactly. A fast source whose frequency is
//! detuned from the carrier reference `f_ref = omega_ref / P` carries the
//! difference as a slow phase ramp; frequency modulation enters as a slow
//! sinusoidal phase.

use std::f64::consts::TAU;

/// Whether a source lives on the fast carrier axis or the envelope axis.
/// The netlist declares this; the simulator never infers time scales.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceRole {
    Fast,
    Slow,
}

/// Independent source waveform.
#[derive(Debug, Clone, PartialEq)]
pub enum Waveform {
    Dc {
        value: f64,
    },
    Sin {
        offset: f64,
        amplitude: f64,
        freq: f64,
        role: SourceRole,
    },
    /// Frequency-modulated sine; always a fast carrier. The instantaneous
    /// frequency is `f_center + f_dev * cos(2 pi f_mod t)`.
    FmSin {
        offset: f64,
        amplitude: f64,
        f_center: f64,
        f_dev: f64,
        f_mod: f64,
    },
    /// 50% duty trapezoid between `low` and `high` with rising/falling
    /// edges of `rise_frac` of one cycle (kept finite so the source stays
    /// continuous).
    Pulse {
        low: f64,
        high: f64,
        freq: f64,
        rise_frac: f64,
        role: SourceRole,
    },
    /// Slow envelope times fast carrier (mixer-style test input); not part
    /// of the netlist grammar but constructible through the API.
    AmProduct {
        env_offset: f64,
        env_amplitude: f64,
        f_env: f64,
        f_carrier: f64,
    },
}

/// Fast/slow splitting context: fast period `P` and the scaled reference
/// frequency `omega_ref`, so the carrier reference is `f_ref = omega_ref/P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiRateContext {
    pub period: f64,
    pub omega_ref: f64,
}

impl MultiRateContext {
    pub fn new(period: f64, omega_ref: f64) -> Self {
        Self { period, omega_ref }
    }

    pub fn f_ref(&self) -> f64 {
        self.omega_ref / self.period
    }
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// Trapezoid value and slope per unit phase.
fn pulse_shape(low: f64, high: f64, rise_frac: f64, p: f64) -> (f64, f64) {
    let rf = rise_frac;
    if p < rf {
        (low + (high - low) * p / rf, (high - low) / rf)
    } else if p < 0.5 {
        (high, 0.0)
    } else if p < 0.5 + rf {
        (high + (low - high) * (p - 0.5) / rf, (low - high) / rf)
    } else {
        (low, 0.0)
    }
}

/// Cycles per fast period for a fast source of frequency `f`.
fn cycles_per_period(f: f64, f_ref: f64) -> f64 {
    (f / f_ref).round().max(1.0)
}

/// Slow detuning of a fast source against `r` carrier cycles. Differences
/// below 1e-9 relative are rounding artifacts of `f_ref = omega_ref / P`
/// and are snapped to zero so nominally locked sources stay tau-independent.
fn detune(f: f64, r: f64, f_ref: f64) -> f64 {
    let df = f - r * f_ref;
    if df.abs() <= 1e-9 * f.abs() {
        0.0
    } else {
        df
    }
}

impl Waveform {
    /// Original single-time waveform value.
    pub fn univariate(&self, t: f64) -> f64 {
        match *self {
            Waveform::Dc { value } => value,
            Waveform::Sin {
                offset,
                amplitude,
                freq,
                ..
            } => offset + amplitude * (TAU * freq * t).sin(),
            Waveform::FmSin {
                offset,
                amplitude,
                f_center,
                f_dev,
                f_mod,
            } => {
                let theta = f_dev / f_mod * (TAU * f_mod * t).sin();
                offset + amplitude * (TAU * f_center * t + theta).sin()
            }
            Waveform::Pulse {
                low,
                high,
                freq,
                rise_frac,
                ..
            } => pulse_shape(low, high, rise_frac, frac(freq * t)).0,
            Waveform::AmProduct {
                env_offset,
                env_amplitude,
                f_env,
                f_carrier,
            } => (env_offset + env_amplitude * (TAU * f_env * t).sin()) * (TAU * f_carrier * t).sin(),
        }
    }

    /// Bivariate value and its fast-time derivative at envelope time `tau`
    /// and fast time `t_fast` (interpreted modulo `P` for fast sources).
    pub fn bivariate(&self, ctx: &MultiRateContext, tau: f64, t_fast: f64) -> (f64, f64) {
        let p = ctx.period;
        let f_ref = ctx.f_ref();
        match *self {
            Waveform::Dc { value } => (value, 0.0),
            Waveform::Sin {
                offset,
                amplitude,
                freq,
                role,
            } => match role {
                SourceRole::Slow => (offset + amplitude * (TAU * freq * tau).sin(), 0.0),
                SourceRole::Fast => {
                    let r = cycles_per_period(freq, f_ref);
                    let df = freq - r * f_ref;
                    let phase = TAU * (r * t_fast / p + df * tau);
                    (
                        offset + amplitude * phase.sin(),
                        amplitude * phase.cos() * TAU * r / p,
                    )
                }
            },
            Waveform::FmSin {
                offset,
                amplitude,
                f_center,
                f_dev,
                f_mod,
            } => {
                let r = cycles_per_period(f_center, f_ref);
                let df = f_center - r * f_ref;
                let theta = f_dev / f_mod * (TAU * f_mod * tau).sin();
                let phase = TAU * (r * t_fast / p + df * tau) + theta;
                (
                    offset + amplitude * phase.sin(),
                    amplitude * phase.cos() * TAU * r / p,
                )
            }
            Waveform::Pulse {
                low,
                high,
                freq,
                rise_frac,
                role,
            } => match role {
                SourceRole::Slow => (pulse_shape(low, high, rise_frac, frac(freq * tau)).0, 0.0),
                SourceRole::Fast => {
                    let r = cycles_per_period(freq, f_ref);
                    let df = freq - r * f_ref;
                    let (v, slope) = pulse_shape(low, high, rise_frac, frac(r * t_fast / p + df * tau));
                    (v, slope * r / p)
                }
            },
            Waveform::AmProduct {
                env_offset,
                env_amplitude,
                f_env,
                f_carrier,
            } => {
                let r = cycles_per_period(f_carrier, f_ref);
                let df = f_carrier - r * f_ref;
                let env = env_offset + env_amplitude * (TAU * f_env * tau).sin();
                let phase = TAU * (r * t_fast / p + df * tau);
                (env * phase.sin(), env * phase.cos() * TAU * r / p)
            }
        }
    }

    /// Bivariate value at a shifted fast time, `s~(tau, t + sigma)`.
    pub fn shifted(&self, ctx: &MultiRateContext, tau: f64, t_fast: f64, sigma: f64) -> f64 {
        self.bivariate(ctx, tau, t_fast + sigma).0
    }

    /// Carrier frequency of fast sources (used for period defaults).
    pub fn fast_freq(&self) -> Option<f64> {
        match *self {
            Waveform::Sin {
                freq,
                role: SourceRole::Fast,
                ..
            } => Some(freq),
            Waveform::FmSin { f_center, .. } => Some(f_center),
            Waveform::Pulse {
                freq,
                role: SourceRole::Fast,
                ..
            } => Some(freq),
            Waveform::AmProduct { f_carrier, .. } => Some(f_carrier),
            _ => None,
        }
    }
}
