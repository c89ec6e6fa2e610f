//! Parsing of group files and structure specifications.

use std::path::Path;

use gptforge::compact_rep::{traceless_diagonal_coordinates, CompactRepSpec, SubgroupSpec};
use gptforge::finite_rep::{perm_from_cycles, FiniteGroup, Perm, Subgroup};
use gptforge::presets::Preset;
use gptforge::state_space::{build_structure, fixed_space, StructureRep, StructureSample};
use gptforge::SeededRng;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    degree: usize,
    generators: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubgroupFile {
    degree: Option<usize>,
    generators: Vec<Vec<Vec<usize>>>,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn perms(degree: usize, gens: &[Vec<Vec<usize>>]) -> Result<Vec<Perm>, CliError> {
    Ok(gens
        .iter()
        .map(|cycles| perm_from_cycles(degree, cycles))
        .collect::<gptforge::Result<Vec<_>>>()?)
}

pub fn group_from_file(path: &Path, max_order: usize) -> Result<FiniteGroup, CliError> {
    let text = read(path)?;
    let f: GroupFile =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: malformed group JSON: {e}", path.display())))?;
    Ok(FiniteGroup::generate(f.degree, &perms(f.degree, &f.generators)?, max_order)?)
}

pub fn subgroup_from_file(path: &Path, g: &FiniteGroup) -> Result<Subgroup, CliError> {
    let text = read(path)?;
    let f: SubgroupFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: malformed subgroup JSON: {e}", path.display())))?;
    if let Some(d) = f.degree {
        if d != g.degree() {
            return Err(CliError::Input(format!(
                "subgroup degree {d} differs from group degree {}",
                g.degree()
            )));
        }
    }
    Ok(Subgroup::generated_by(g, &perms(g.degree(), &f.generators)?)?)
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum SubgroupJson {
    Torus,
    Block { sizes: Vec<usize> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepJson {
    kind: String,
    d: Option<usize>,
    subgroup: SubgroupJson,
    reference: Option<Vec<f64>>,
    alpha: Option<Vec<f64>>,
}

/// A structure given either by preset name or by a representation spec.
#[derive(Debug, Clone)]
pub enum StructureInput {
    Preset(Preset),
    Custom {
        rep: StructureRep,
        sub: SubgroupSpec,
        reference: Vec<f64>,
        text: String,
    },
}

impl StructureInput {
    /// Preset names (`bloch`, `spin2`, `quartic[:k]`, `deformable[:a,b,c][@t]`),
    /// inline JSON, or a path to a `.json` file.
    pub fn parse(arg: &str) -> Result<Self, CliError> {
        let trimmed = arg.trim();
        let json = if trimmed.starts_with('{') {
            Some(trimmed.to_string())
        } else if trimmed.ends_with(".json") {
            Some(read(Path::new(trimmed))?)
        } else {
            None
        };
        let Some(json) = json else {
            return Ok(StructureInput::Preset(trimmed.parse()?));
        };
        let r: RepJson =
            serde_json::from_str(&json).map_err(|e| CliError::Input(format!("malformed structure JSON: {e}")))?;
        let need_d = || r.d.ok_or_else(|| CliError::Input(format!("rep kind {:?} needs \"d\"", r.kind)));
        let spec = match r.kind.as_str() {
            "su_adjoint" => CompactRepSpec::su_adjoint(need_d()?)?,
            "su_fundamental" => CompactRepSpec::su_fundamental(need_d()?)?,
            "so_fundamental" => CompactRepSpec::so_fundamental(need_d()?)?,
            "su2_spin2" => CompactRepSpec::su2_spin2(),
            other => return Err(CliError::Input(format!("unknown rep kind {other:?}"))),
        };
        let sub = match r.subgroup {
            SubgroupJson::Torus => SubgroupSpec::FullTorus,
            SubgroupJson::Block { sizes } => SubgroupSpec::Block(sizes),
        };
        let rep = StructureRep::single(spec);
        let reference = match (r.reference, r.alpha) {
            (Some(v), _) => v,
            (None, Some(a)) => {
                if r.kind != "su_adjoint" || Some(a.len()) != r.d {
                    return Err(CliError::Input("\"alpha\" needs an su_adjoint rep with d entries".into()));
                }
                traceless_diagonal_coordinates(&a)
            }
            (None, None) => {
                let basis = fixed_space(&rep, &sub)?;
                if basis.cols() == 0 {
                    return Err(CliError::Input("the subgroup fixes no vector of this representation".into()));
                }
                basis.column(0)
            }
        };
        Ok(StructureInput::Custom {
            rep,
            sub,
            reference,
            text: json.split_whitespace().collect::<Vec<_>>().join(" "),
        })
    }

    pub fn build(&self, n: usize, rng: SeededRng) -> Result<StructureSample, CliError> {
        Ok(match self {
            StructureInput::Preset(p) => p.build(n, rng)?,
            StructureInput::Custom { rep, sub, reference, .. } => build_structure(rep, sub, reference, n, rng)?,
        })
    }

    pub fn label(&self) -> String {
        match self {
            StructureInput::Preset(p) => p.to_string(),
            StructureInput::Custom { text, .. } => text.clone(),
        }
    }
}

/// `a:b:step` with `0 ≤ a ≤ b ≤ 1` and `step > 0`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Input(format!("t-grid {s:?} must look like start:stop:step"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|x| x.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [a, b, step] = parts[..] else {
        return Err(bad());
    };
    if !(step > 0.0) || !(0.0..=1.0).contains(&a) || !(a..=1.0).contains(&b) {
        return Err(CliError::Input(format!("t-grid {s:?} must satisfy 0 ≤ start ≤ stop ≤ 1 and step > 0")));
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(CliError::Input("t-grid has more than 100000 points".into()));
    }
    // Round away float noise so the printed grid is the one the user typed.
    Ok((0..count).map(|k| ((a + k as f64 * step) * 1e12).round() / 1e12).collect())
}

pub fn parse_alpha(s: &str) -> Result<[f64; 3], CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Input(format!("alpha {s:?} must be three comma-separated numbers")))?;
    <[f64; 3]>::try_from(v).map_err(|_| CliError::Input(format!("alpha {s:?} must have three entries")))
}
