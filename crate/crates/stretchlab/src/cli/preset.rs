use crate::potentials::SeedingSpec;
use crate::quantization::Geometry;
use crate::{Error, Result};

/// Built-in parameter sets, one per figure of the stretching construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Unit well, ground state stretched at the centre.
    WellGround,
    /// Unit well, level 4 stretched at the centre.
    WellExcited,
    /// Unit well, first excited state stretched at both of its antinodes.
    TwoBarrier,
    /// ω = 1 oscillator, level 4 stretched at the origin.
    Harmonic,
    /// Unit 2D box with (Lₓ, Lᵧ) = (0.3, 0.5).
    Grid2d,
    /// Unit-well waveguide with a quintic step in L(y).
    Waveguide,
    /// Same step on an ω = 1 oscillator cross-section.
    WaveguideHarmonic,
}

pub const NAMES: &[(&str, Preset)] = &[
    ("fig3", Preset::WellGround),
    ("well-gs", Preset::WellGround),
    ("fig4", Preset::WellExcited),
    ("well-excited-n4", Preset::WellExcited),
    ("fig5", Preset::TwoBarrier),
    ("well-two-barrier", Preset::TwoBarrier),
    ("fig6", Preset::Harmonic),
    ("harmonic-n4", Preset::Harmonic),
    ("fig7", Preset::Grid2d),
    ("well-2d", Preset::Grid2d),
    ("waveguide", Preset::Waveguide),
    ("waveguide-harmonic", Preset::WaveguideHarmonic),
];

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Preset> {
        NAMES
            .iter()
            .find(|(n, _)| *n == s)
            .map(|&(_, p)| p)
            .ok_or_else(|| {
                let known: Vec<&str> = NAMES.iter().map(|(n, _)| *n).collect();
                Error::InvalidParameter(format!("unknown preset {s:?}; known: {}", known.join(", ")))
            })
    }
}

impl Preset {
    pub fn name(self) -> &'static str {
        NAMES.iter().find(|(_, p)| *p == self).expect("every preset is named").0
    }

    /// Stretch lengths swept by `spectrum`, as `(lo, hi, step)`.
    pub fn default_sweep(self) -> Option<(f64, f64, f64)> {
        match self {
            Preset::WellGround | Preset::WellExcited | Preset::Harmonic => Some((0.0, 2.0, 0.05)),
            Preset::TwoBarrier => Some((0.0, 0.8, 0.2)),
            Preset::Grid2d | Preset::Waveguide | Preset::WaveguideHarmonic => None,
        }
    }

    pub fn default_sweep2(self) -> Option<(f64, f64, f64)> {
        (self == Preset::TwoBarrier).then_some((0.0, 0.8, 0.2))
    }

    pub fn default_levels(self) -> usize {
        match self {
            Preset::WellGround => 4,
            Preset::WellExcited | Preset::Harmonic => 6,
            _ => 3,
        }
    }

    /// Stretch lengths at which `wavefunctions` samples the states.
    pub fn default_at(self) -> (f64, f64) {
        match self {
            Preset::WellGround => (0.4, 0.0),
            Preset::WellExcited => (0.6, 0.0),
            Preset::TwoBarrier => (0.4, 0.2),
            Preset::Harmonic => (0.4, 0.0),
            Preset::Grid2d => (0.3, 0.5),
            Preset::Waveguide | Preset::WaveguideHarmonic => (0.0, 0.0),
        }
    }

    /// 1D geometry at stretch lengths `(l, l2)`; `l2` is only read by the two-barrier preset.
    pub fn geometry(self, l: f64, l2: f64) -> Result<Geometry> {
        let g = match self {
            Preset::WellGround => Geometry::CentralWell {
                width: 1.0,
                length: l,
                level: 0,
            },
            Preset::WellExcited => Geometry::CentralWell {
                width: 1.0,
                length: l,
                level: 4,
            },
            Preset::TwoBarrier => Geometry::TwoBarrierWell {
                width: 1.0,
                left: l,
                right: l2,
            },
            Preset::Harmonic => Geometry::CentralHarmonic {
                omega: 1.0,
                length: l,
                level: 4,
            },
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "preset {} has no 1D geometry",
                    self.name()
                )))
            }
        };
        g.validate()?;
        Ok(g)
    }

    pub fn is_two_parameter(self) -> bool {
        self == Preset::TwoBarrier
    }

    pub fn waveguide_seed(self) -> Result<SeedingSpec> {
        match self {
            Preset::Waveguide => SeedingSpec::infinite_well(1.0),
            Preset::WaveguideHarmonic => SeedingSpec::harmonic(1.0),
            _ => Err(Error::InvalidParameter(format!("preset {} is not a waveguide", self.name()))),
        }
    }
}
