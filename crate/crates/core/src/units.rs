//! Decibel and power conversions.

/// Floor reported for powers and gains that are exactly zero (or below).
pub const DB_FLOOR: f64 = -200.0;

/// Watts to dBm, floored at [`DB_FLOOR`].
pub fn watts_to_dbm(watts: f64) -> f64 {
    floor_db(10.0 * (watts * 1e3).log10())
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) * 1e-3
}

/// Power ratio in dB, floored at [`DB_FLOOR`].
pub fn power_ratio_db(ratio: f64) -> f64 {
    floor_db(10.0 * ratio.log10())
}

/// Amplitude ratio in dB (20 log10), floored at [`DB_FLOOR`].
pub fn amplitude_ratio_db(ratio: f64) -> f64 {
    floor_db(20.0 * ratio.log10())
}

pub fn db_to_amplitude(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

/// Peak voltage of a sinusoid delivering `dbm` into `impedance` ohms.
pub fn dbm_to_peak_volts(dbm: f64, impedance: f64) -> f64 {
    (2.0 * dbm_to_watts(dbm) * impedance).sqrt()
}

/// Power of a sinusoidal current of peak `amplitude` amperes into `load` ohms, in dBm.
pub fn current_amplitude_to_dbm(amplitude: f64, load: f64) -> f64 {
    watts_to_dbm(0.5 * amplitude * amplitude * load)
}

fn floor_db(db: f64) -> f64 {
    if db.is_nan() || db < DB_FLOOR {
        DB_FLOOR
    } else {
        db
    }
}
