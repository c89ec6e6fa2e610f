//! Named structures used by the command line and the test suites.

use std::fmt;
use std::str::FromStr;

use crate::classification::quartic_reference;
use crate::compact_rep::{traceless_diagonal_coordinates, CompactRepSpec, SubgroupSpec};
use crate::deformation::{deform, DeformationPath};
use crate::error::{Error, Result};
use crate::state_space::{build_structure, fixed_space, StructureRep, StructureSample};
use crate::SeededRng;

/// Default α of the deformable SU(3) family.
pub const DEFAULT_ALPHA: [f64; 3] = [0.5, 0.3, 0.2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// SU(2) adjoint orbit of the diagonal direction: the Bloch sphere.
    Bloch,
    /// SU(2) spin-2 orbit of the torus-fixed weight vector.
    Spin2,
    /// SU(3) adjoint orbit of `diag(α) − I/3`, moved `t` along the default
    /// deformation path.
    Deformable { alpha: [f64; 3], t: f64 },
    /// SU(k²) adjoint orbit of the rank-k projector, stabiliser S(U(k)×U(k²−k)).
    Quartic { k: usize },
}

impl Preset {
    pub fn deformable(alpha: [f64; 3]) -> Self {
        Preset::Deformable { alpha, t: 0.0 }
    }

    pub fn rep(&self) -> Result<StructureRep> {
        Ok(StructureRep::single(match *self {
            Preset::Bloch => CompactRepSpec::su_adjoint(2)?,
            Preset::Spin2 => CompactRepSpec::su2_spin2(),
            Preset::Deformable { .. } => CompactRepSpec::su_adjoint(3)?,
            Preset::Quartic { k } => CompactRepSpec::su_adjoint(k * k)?,
        }))
    }

    pub fn subgroup(&self) -> SubgroupSpec {
        match *self {
            Preset::Quartic { k } => SubgroupSpec::Block(vec![k, k * k - k]),
            _ => SubgroupSpec::FullTorus,
        }
    }

    pub fn reference(&self) -> Result<Vec<f64>> {
        match *self {
            Preset::Bloch => Ok(traceless_diagonal_coordinates(&[1.0, 0.0])),
            Preset::Spin2 => {
                let basis = fixed_space(&self.rep()?, &self.subgroup())?;
                if basis.cols() == 0 {
                    return Err(Error::NumericalConsistency("spin-2 rep has no torus-fixed vector".into()));
                }
                Ok(basis.column(0))
            }
            Preset::Deformable { alpha, .. } => Ok(traceless_diagonal_coordinates(&alpha)),
            Preset::Quartic { k } => {
                let rho = quartic_reference(k)?;
                let diag: Vec<f64> = (0..k * k).map(|i| rho[(i, i)]).collect();
                Ok(traceless_diagonal_coordinates(&diag))
            }
        }
    }

    /// Builds the orbit sample; for a deformable preset with `t > 0` the
    /// reference is rotated along the default path from the α structure.
    pub fn build(&self, n: usize, rng: SeededRng) -> Result<StructureSample> {
        let base = build_structure(&self.rep()?, &self.subgroup(), &self.reference()?, n, rng)?;
        match *self {
            Preset::Deformable { t, .. } if t != 0.0 => deform(&DeformationPath::from_reference(base)?, t),
            _ => Ok(base),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Bloch => write!(f, "bloch"),
            Preset::Spin2 => write!(f, "spin2"),
            Preset::Deformable { alpha, t } => {
                write!(f, "deformable:{},{},{}", alpha[0], alpha[1], alpha[2])?;
                if *t != 0.0 {
                    write!(f, "@{t}")?;
                }
                Ok(())
            }
            Preset::Quartic { k } => write!(f, "quartic:{k}"),
        }
    }
}

/// `bloch`, `spin2`, `quartic[:k]`, `deformable[:a1,a2,a3][@t]`.
impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::domain(format!("cannot parse structure {s:?}: {why}"));
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| bad("expected a number"));
        let (head, t) = match s.split_once('@') {
            Some((h, t)) => (h, Some(num(t)?)),
            None => (s, None),
        };
        let (name, args) = match head.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (head, None),
        };
        if t.is_some() && name != "deformable" {
            return Err(bad("only deformable structures take @t"));
        }
        match (name.trim().to_ascii_lowercase().as_str(), args) {
            ("bloch", None) => Ok(Preset::Bloch),
            ("spin2", None) => Ok(Preset::Spin2),
            ("quartic", None) => Ok(Preset::Quartic { k: 2 }),
            ("quartic", Some(k)) => {
                let k = k.trim().parse::<usize>().map_err(|_| bad("k must be an integer"))?;
                if k < 2 {
                    return Err(bad("k must be at least 2"));
                }
                Ok(Preset::Quartic { k })
            }
            ("deformable", a) => {
                let alpha = match a {
                    None => DEFAULT_ALPHA,
                    Some(a) => {
                        let v = a.split(',').map(num).collect::<Result<Vec<_>>>()?;
                        <[f64; 3]>::try_from(v).map_err(|_| bad("alpha needs three values"))?
                    }
                };
                let t = t.unwrap_or(0.0);
                if !(0.0..=1.0).contains(&t) {
                    return Err(bad("t must lie in [0, 1]"));
                }
                Ok(Preset::Deformable { alpha, t })
            }
            _ => Err(bad("unknown structure")),
        }
    }
}
