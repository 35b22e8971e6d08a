use std::fmt;

use serde::{Deserialize, Serialize};

use crate::materials::{NonlinearTensor, Polarization, PolingSpec, ShgType, Waveguide};
use crate::modes::ModeLabel;
use crate::{Error, Result};

/// A guided mode identified across wavelengths by class and label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeId {
    pub polarization: Polarization,
    pub label: ModeLabel,
}

impl ModeId {
    pub const fn new(polarization: Polarization, label: ModeLabel) -> Self {
        Self { polarization, label }
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.polarization, self.label)
    }
}

/// `mn` for single digit labels, `(m,n)` otherwise.
pub(crate) fn compact(label: ModeLabel) -> String {
    if label.m < 10 && label.n < 10 {
        format!("{}{}", label.m, label.n)
    } else {
        label.to_string()
    }
}

/// SH mode `a` fed by pump modes `b` and `c` through poling harmonic `M`.
///
/// Polarizations follow from the type: type 0 is TM+TM→TM, type I TE+TE→TM,
/// type II TE+TM→TE with `pump_b` the TE photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProcessTriple {
    pub shg_type: ShgType,
    pub sh: ModeLabel,
    pub pump_b: ModeLabel,
    pub pump_c: ModeLabel,
    pub harmonic: u32,
}

impl ProcessTriple {
    pub fn new(shg_type: ShgType, pump_b: ModeLabel, pump_c: ModeLabel, sh: ModeLabel, harmonic: u32) -> Result<Self> {
        if harmonic == 0 {
            return Err(Error::domain("ProcessTriple::new", "harmonic order must be >= 1"));
        }
        Ok(Self {
            shg_type,
            sh,
            pump_b,
            pump_c,
            harmonic,
        })
    }

    /// Infers the type from the three polarizations. Type II pumps may be
    /// given in either order.
    pub fn from_modes(sh: ModeId, b: ModeId, c: ModeId, harmonic: u32) -> Result<Self> {
        use Polarization::{Te, Tm};
        let (t, b, c) = match (sh.polarization, b.polarization, c.polarization) {
            (Tm, Tm, Tm) => (ShgType::Type0, b, c),
            (Tm, Te, Te) => (ShgType::TypeI, b, c),
            (Te, Te, Tm) => (ShgType::TypeII, b, c),
            (Te, Tm, Te) => (ShgType::TypeII, c, b),
            (a, p, q) => {
                return Err(Error::domain(
                    "ProcessTriple::from_modes",
                    format!("{p} + {q} -> {a} is not a type 0, I or II process"),
                ))
            }
        };
        Self::new(t, b.label, c.label, sh.label, harmonic)
    }

    /// Parses `"bb+cc->aa"` with labels in any [`ModeLabel`] syntax.
    pub fn parse(shg_type: ShgType, harmonic: u32, s: &str) -> Result<Self> {
        let bad = || Error::domain("ProcessTriple::parse", format!("expected \"bb+cc->aa\", got {s:?}"));
        let (pumps, sh) = s.split_once("->").ok_or_else(bad)?;
        let (b, c) = pumps.split_once('+').ok_or_else(bad)?;
        Self::new(shg_type, b.parse()?, c.parse()?, sh.parse()?, harmonic)
    }

    pub fn sh_mode(&self) -> ModeId {
        ModeId::new(self.shg_type.sh_polarization(), self.sh)
    }

    pub fn pump_modes(&self) -> (ModeId, ModeId) {
        let (pb, pc) = self.shg_type.pump_polarizations();
        (ModeId::new(pb, self.pump_b), ModeId::new(pc, self.pump_c))
    }

    /// Number of pump orderings the triple stands for in the double sum over
    /// pump classes: two for type II, one otherwise.
    pub fn multiplicity(&self) -> f64 {
        if self.shg_type.is_degenerate_pair() {
            1.0
        } else {
            2.0
        }
    }

    /// Same modes with the pump photons exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            pump_b: self.pump_c,
            pump_c: self.pump_b,
            ..*self
        }
    }

    /// `bb+cc->aa` without type or harmonic.
    pub fn modes_string(&self) -> String {
        format!("{}+{}->{}", compact(self.pump_b), compact(self.pump_c), compact(self.sh))
    }
}

impl fmt::Display for ProcessTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} M{}", self.shg_type, self.modes_string(), self.harmonic)
    }
}

/// Waveguide, poling and nonlinearity of one device.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Device {
    pub waveguide: Waveguide,
    pub poling: PolingSpec,
    pub tensor: NonlinearTensor,
}

impl Device {
    pub fn validate(&self) -> Result<()> {
        self.waveguide.validate()?;
        self.poling.validate()
    }

    pub fn length_um(&self) -> f64 {
        self.waveguide.geometry.length_um()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_follows_polarizations() {
        let l = ModeLabel::FUNDAMENTAL;
        let te = ModeId::new(Polarization::Te, l);
        let tm = ModeId::new(Polarization::Tm, ModeLabel::new(0, 1));
        let t = ProcessTriple::from_modes(te, tm, te, 1).unwrap();
        assert_eq!(t.shg_type, ShgType::TypeII);
        assert_eq!(t.pump_b, l);
        assert_eq!(t.pump_c, ModeLabel::new(0, 1));
        assert_eq!(ProcessTriple::from_modes(tm, tm, tm, 2).unwrap().shg_type, ShgType::Type0);
        assert_eq!(ProcessTriple::from_modes(tm, te, te, 3).unwrap().shg_type, ShgType::TypeI);
        assert!(ProcessTriple::from_modes(te, te, te, 1).is_err());
        assert!(ProcessTriple::from_modes(te, tm, tm, 1).is_err());
    }

    #[test]
    fn parse_round_trip() {
        let t = ProcessTriple::parse(ShgType::TypeII, 1, "10+01->10").unwrap();
        assert_eq!(t.pump_b, ModeLabel::new(1, 0));
        assert_eq!(t.pump_c, ModeLabel::new(0, 1));
        assert_eq!(t.modes_string(), "10+01->10");
        assert_eq!(t.to_string(), "II 10+01->10 M1");
        assert!(ProcessTriple::parse(ShgType::TypeII, 1, "10-01").is_err());
    }
}
