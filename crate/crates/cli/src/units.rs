//! Unit-tagged quantities from the config file, converted to SI.

use std::fmt;

use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Time,
    /// power / area
    Intensity,
    /// area / power
    NonlinearIndex,
    /// time^2 / length
    Gvd,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dimension::Length => "length",
            Dimension::Time => "time",
            Dimension::Intensity => "power/area",
            Dimension::NonlinearIndex => "area/power",
            Dimension::Gvd => "time^2/length",
        })
    }
}

/// `{ value = 5.0, unit = "ps" }`. Both keys are required.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quantity {
    pub value: f64,
    pub unit: String,
}

impl Quantity {
    pub fn new(value: f64, unit: &str) -> Self {
        Self {
            value,
            unit: unit.to_owned(),
        }
    }

    pub fn to_si(&self, dim: Dimension) -> Result<f64, String> {
        let scale = unit_scale(dim, self.unit.trim())
            .ok_or_else(|| format!("unit {:?} is not a known {dim} unit", self.unit))?;
        Ok(self.value * scale)
    }
}

fn length(u: &str) -> Option<f64> {
    Some(match u {
        "m" => 1.0,
        "km" => 1e3,
        "cm" => 1e-2,
        "mm" => 1e-3,
        "um" | "μm" | "µm" => 1e-6,
        "nm" => 1e-9,
        _ => return None,
    })
}

fn time(u: &str) -> Option<f64> {
    Some(match u {
        "s" => 1.0,
        "ms" => 1e-3,
        "us" | "μs" | "µs" => 1e-6,
        "ns" => 1e-9,
        "ps" => 1e-12,
        "fs" => 1e-15,
        _ => return None,
    })
}

fn power(u: &str) -> Option<f64> {
    Some(match u {
        "W" => 1.0,
        "kW" => 1e3,
        "MW" => 1e6,
        "GW" => 1e9,
        "TW" => 1e12,
        "mW" => 1e-3,
        _ => return None,
    })
}

/// `"<a>/<b>"`, with `^2` allowed on either side.
fn ratio(
    u: &str,
    num: fn(&str) -> Option<f64>,
    num_sq: bool,
    den: fn(&str) -> Option<f64>,
    den_sq: bool,
) -> Option<f64> {
    let (a, b) = u.split_once('/')?;
    let part = |s: &str, f: fn(&str) -> Option<f64>, sq: bool| -> Option<f64> {
        let s = s.trim();
        if sq {
            let base = s.strip_suffix("^2").or_else(|| s.strip_suffix('²'))?;
            f(base).map(|x| x * x)
        } else {
            f(s)
        }
    };
    Some(part(a, num, num_sq)? / part(b, den, den_sq)?)
}

pub fn unit_scale(dim: Dimension, u: &str) -> Option<f64> {
    match dim {
        Dimension::Length => length(u),
        Dimension::Time => time(u),
        Dimension::Intensity => ratio(u, power, false, length, true),
        Dimension::NonlinearIndex => ratio(u, length, true, power, false),
        Dimension::Gvd => ratio(u, time, true, length, false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn si(v: f64, u: &str, d: Dimension) -> f64 {
        Quantity::new(v, u).to_si(d).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        ((a - b) / b).abs() < 1e-14
    }

    #[test]
    fn fibre_example_units() {
        assert!(close(si(1.0, "um", Dimension::Length), 1e-6));
        assert!(close(si(5.0, "ps", Dimension::Time), 5e-12));
        assert!(close(si(1e7, "W/cm^2", Dimension::Intensity), 1e11));
        assert!(close(
            si(3.2e-16, "cm^2/W", Dimension::NonlinearIndex),
            3.2e-20
        ));
        assert!(close(si(1e-26, "s^2/cm", Dimension::Gvd), 1e-24));
        assert!(close(si(20.0, "ps^2/km", Dimension::Gvd), 2e-26));
    }

    #[test]
    fn rejects_wrong_dimension() {
        assert!(Quantity::new(1.0, "ps").to_si(Dimension::Length).is_err());
        assert!(Quantity::new(1.0, "W/cm")
            .to_si(Dimension::Intensity)
            .is_err());
        assert!(Quantity::new(1.0, "furlong")
            .to_si(Dimension::Length)
            .is_err());
    }
}
