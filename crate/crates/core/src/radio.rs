//! First-order radio energy model.
//!
//! Transmission costs a fixed electronics energy per bit plus an amplifier
//! term that grows with `d²` (free space) below the crossover distance and
//! with `d⁴` (multipath) at or above it. Reception costs electronics energy
//! only. Cluster heads additionally pay a per-bit, per-signal aggregation cost.

use crate::error::SimError;

/// Energy in joules.
pub type Joules = f64;

/// Physical constants of the radio model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams {
    /// Electronics energy per bit, J/bit (shared by transmitter and receiver).
    pub e_ele: f64,
    /// Free-space amplifier coefficient, J/bit/m².
    pub e_fs: f64,
    /// Multipath amplifier coefficient, J/bit/m⁴.
    pub e_mp: f64,
    /// Aggregation energy, J/bit/signal.
    pub e_da: f64,
    /// Initial energy of every node, J.
    pub e_init: f64,
    /// Data packet length in bits.
    pub packet_bits: u32,
    /// Optimal cluster-head probability.
    pub p_opt: f64,
    /// Amplifier regime crossover distance, m. Always `sqrt(e_fs / e_mp)`.
    pub d_crossover: f64,
}

pub const DEFAULT_E_ELE: f64 = 5e-9;
pub const DEFAULT_E_FS: f64 = 10e-12;
pub const DEFAULT_E_MP: f64 = 0.0013e-12;
pub const DEFAULT_E_DA: f64 = 5e-9;
pub const DEFAULT_E_INIT: f64 = 0.5;
pub const DEFAULT_PACKET_BITS: u32 = 4000;
pub const DEFAULT_P_OPT: f64 = 0.1;

/// The standard parameter set: 5 nJ/bit electronics, 10 pJ/bit/m² free space,
/// 0.0013 pJ/bit/m⁴ multipath, 0.5 J initial energy, 4000-bit packets, p = 0.1.
pub fn default_params() -> RadioParams {
    RadioParams::new(
        DEFAULT_E_ELE,
        DEFAULT_E_FS,
        DEFAULT_E_MP,
        DEFAULT_E_DA,
        DEFAULT_E_INIT,
        DEFAULT_PACKET_BITS,
        DEFAULT_P_OPT,
    )
    .expect("default radio parameters are valid")
}

impl Default for RadioParams {
    fn default() -> Self {
        default_params()
    }
}

fn positive(name: &'static str, value: f64) -> Result<(), SimError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(SimError::InvalidParameter {
            name,
            reason: "must be finite and strictly positive",
        })
    }
}

impl RadioParams {
    /// Builds a validated parameter set; `d_crossover` is derived.
    pub fn new(
        e_ele: f64,
        e_fs: f64,
        e_mp: f64,
        e_da: f64,
        e_init: f64,
        packet_bits: u32,
        p_opt: f64,
    ) -> Result<Self, SimError> {
        positive("e_ele", e_ele)?;
        positive("e_fs", e_fs)?;
        positive("e_mp", e_mp)?;
        positive("e_da", e_da)?;
        positive("e_init", e_init)?;
        if packet_bits == 0 {
            return Err(SimError::InvalidParameter {
                name: "packet_bits",
                reason: "must be at least 1",
            });
        }
        if !(p_opt > 0.0 && p_opt <= 1.0) {
            return Err(SimError::InvalidParameter {
                name: "p_opt",
                reason: "must lie in (0, 1]",
            });
        }
        Ok(Self {
            e_ele,
            e_fs,
            e_mp,
            e_da,
            e_init,
            packet_bits,
            p_opt,
            d_crossover: libm::sqrt(e_fs / e_mp),
        })
    }

    /// Rounds per LEACH epoch, `round(1 / p_opt)`.
    pub fn epoch_len(&self) -> u32 {
        crate::protocols::epoch_len(self.p_opt)
    }

    /// Transmit `bits` over `distance` metres.
    pub fn tx_energy(&self, bits: u32, distance: f64) -> Result<Joules, SimError> {
        if distance.is_nan() || distance < 0.0 {
            return Err(SimError::NegativeDistance(distance));
        }
        let bits = f64::from(bits);
        let d2 = distance * distance;
        let amp = if distance < self.d_crossover {
            bits * self.e_fs * d2
        } else {
            bits * self.e_mp * (d2 * d2)
        };
        Ok(bits * self.e_ele + amp)
    }

    pub fn rx_energy(&self, bits: u32) -> Joules {
        f64::from(bits) * self.e_ele
    }

    /// Aggregate `signals` packets of `bits` each.
    pub fn agg_energy(&self, bits: u32, signals: u32) -> Joules {
        f64::from(bits) * self.e_da * f64::from(signals)
    }

    /// One round as cluster head: receive every member packet, aggregate them
    /// together with the head's own packet, transmit the result to the BS.
    pub fn ch_round_energy(&self, member_count: u32, d_bs: f64) -> Result<Joules, SimError> {
        let bits = self.packet_bits;
        let rx = f64::from(member_count) * self.rx_energy(bits);
        let agg = self.agg_energy(bits, member_count + 1);
        let tx = self.tx_energy(bits, d_bs)?;
        Ok(rx + agg + tx)
    }

    /// One round as a member (`d_target` = distance to its CH) or as a
    /// direct sender (`d_target` = distance to the BS).
    pub fn non_ch_round_energy(&self, d_target: f64) -> Result<Joules, SimError> {
        self.tx_energy(self.packet_bits, d_target)
    }
}
