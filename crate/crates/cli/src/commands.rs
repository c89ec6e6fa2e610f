//! One function per subcommand; each returns the full output text.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use gptforge::classification::{
    catalog_lookup, grassmannian_descriptor, quartic_reference, spherical_reality_audit, two_point_catalog,
    CatalogEntry, GrassmannField,
};
use gptforge::compact_rep::{CompactGroup, GroupElement, SubgroupSpec};
use gptforge::deformation::{self, schur_average_check, symmetrized_distance_estimate, DeformationPath, GENERATOR_NOTE};
use gptforge::discrimination::{
    encoding_game_value, hexagon_vertices, max_distinguishable, AlphaTriple, GAME_CONVENTION,
};
use gptforge::finite_rep::{
    character_table, count_probabilistic_structures, gelfand_with_table, GelfandDecision, DEFAULT_ORDER_CAP,
};
use gptforge::numerics::CMatrix;
use gptforge::state_space::{self, witness_effect, Effect, StructureSample};
use gptforge::SeededRng;
use serde_json::{json, Value};

use crate::input::{group_from_file, parse_alpha, parse_grid, subgroup_from_file, StructureInput};
use crate::{CliError, RunConfig};

// Stream 0 builds orbit samples; later streams feed estimators that must not
// reuse the same draws.
const ESTIMATOR_STREAM: u64 = 1;
const SCHUR_STREAM: u64 = 2;
const QUARTIC_STREAM: u64 = 3;

/// Group elements drawn for the quartic invariance check.
const QUARTIC_DRAWS: usize = 64;

fn render(cfg: &RunConfig, body: Value) -> Result<String, CliError> {
    let mut out = json!({ "config": cfg });
    if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
        o.extend(b);
    }
    let mut s = serde_json::to_string_pretty(&out).map_err(|e| CliError::Io(format!("cannot encode JSON: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn csv_header(cfg: &RunConfig) -> String {
    format!(
        "# command={} seed={} samples={} tol={} rng={}\n",
        cfg.command, cfg.seed, cfg.samples, cfg.tol, cfg.rng
    )
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))
}

fn sample(cfg: &RunConfig, spec: &StructureInput) -> Result<StructureSample, CliError> {
    spec.build(cfg.samples, SeededRng::new(cfg.seed))
}

pub fn gelfand(cfg: &RunConfig, group: &Path, subgroup: &Path, dim_cap: Option<usize>) -> Result<String, CliError> {
    let g = group_from_file(group, DEFAULT_ORDER_CAP)?;
    let h = subgroup_from_file(subgroup, &g)?;
    let table = character_table(&g)?;
    let decision = gelfand_with_table(&table, &h)?;
    let mut spherical = Vec::new();
    for i in 0..table.num_irreps() {
        let m = table.trivial_restriction_multiplicity(i, &h)?;
        if m > 0 {
            spherical.push(json!({
                "irrep": i,
                "dim": table.dim(i),
                "multiplicity": m,
                "type": table.frobenius_schur(i)?.as_str(),
            }));
        }
    }
    let witness = match decision {
        GelfandDecision::Yes => Value::Null,
        GelfandDecision::No { irrep, multiplicity } => json!({
            "irrep": irrep,
            "dim": table.dim(irrep),
            "multiplicity": multiplicity,
        }),
    };
    let index = g.order() / h.order();
    let cap = dim_cap.unwrap_or(index);
    let structures = if decision.is_gelfand() {
        let list = count_probabilistic_structures(&g, &h, cap)?;
        json!({ "dim_cap": cap, "count": list.len(), "irrep_sets": list })
    } else {
        Value::Null
    };
    render(
        cfg,
        json!({
            "group_order": g.order(),
            "subgroup_order": h.order(),
            "index": index,
            "gelfand": decision.is_gelfand(),
            "witness": witness,
            "spherical_irreps": spherical,
            "structures": structures,
        }),
    )
}

pub fn hexagon(cfg: &RunConfig, raw: &[f64], game: bool, csv: Option<&Path>) -> Result<String, CliError> {
    let raw: [f64; 3] = raw
        .try_into()
        .map_err(|_| CliError::Input("hexagon takes exactly three α values".into()))?;
    let alpha = AlphaTriple::new(raw)?;
    let mut warnings = Vec::new();
    if alpha.was_renormalized() {
        warnings.push(format!("α = {raw:?} does not sum to 1; renormalized to {:?}", alpha.values()));
    }
    let (d12, d23) = alpha.degeneracies();
    if d12 || d23 {
        warnings.push("α has repeated entries; coinciding hexagon vertices were merged".to_string());
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let h = hexagon_vertices(alpha);
    let dist = max_distinguishable(&h)?;
    if let Some(path) = csv {
        let mut f = create(path)?;
        std::io::Write::write_all(&mut f, csv_header(cfg).as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        h.write_csv(f)?;
    }
    let labels: Vec<Value> = h
        .labelled_vertices()
        .iter()
        .zip(h.multiplicity_map())
        .enumerate()
        .map(|(i, (y, v))| json!({ "label": format!("y{}", i + 1), "coords": y, "vertex": v }))
        .collect();
    let mut body = json!({
        "alpha": alpha.values(),
        "renormalized": alpha.was_renormalized(),
        "vertices": h.vertices(),
        "labelled": labels,
        "n_distinguishable": dist.n,
        "distinguishable_states": dist.states,
        "discriminating_effects": dist.effects,
        "warnings": warnings,
    });
    if game {
        let v = encoding_game_value(alpha)?;
        body["game"] = json!({
            "bit1_success": v.bit1_success,
            "bit2_success": v.bit2_success,
            "bit1_effect": v.bit1_effect,
            "bit2_effect": v.bit2_effect,
            "convention": GAME_CONVENTION,
        });
    }
    render(cfg, body)
}

pub fn deform_sweep(cfg: &RunConfig, grid: &[f64], alpha: [f64; 3], effects: usize) -> Result<String, CliError> {
    let base = StructureInput::Preset(gptforge::presets::Preset::deformable(alpha));
    let path = DeformationPath::from_reference(sample(cfg, &base)?)?;
    let mut out = csv_header(cfg);
    out.push_str(&format!("# structure={} generator: {GENERATOR_NOTE}\n", base.label()));
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(format!("cannot write CSV: {e}"));
    w.write_record(["t", "d_sym_estimate", "forward", "backward", "lower_bound", "n", "seed"])
        .map_err(io)?;
    let rng = SeededRng::new(cfg.seed).with_stream(ESTIMATOR_STREAM);
    for &t in grid {
        let st = deformation::deform(&path, t)?;
        let r = symmetrized_distance_estimate(path.base(), &st, effects, rng)?;
        w.write_record([
            t.to_string(),
            r.estimate.to_string(),
            r.forward.to_string(),
            r.backward.to_string(),
            r.lower_bound.to_string(),
            r.n.to_string(),
            cfg.seed.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(format!("cannot write CSV: {e}")))?;
    out.push_str(&String::from_utf8_lossy(&bytes));
    Ok(out)
}

pub fn deform(cfg: &RunConfig, grid: &str, alpha: &str, effects: usize) -> Result<String, CliError> {
    deform_sweep(cfg, &parse_grid(grid)?, parse_alpha(alpha)?, effects)
}

pub fn grassmann(cfg: &RunConfig, m: usize, n: usize, b1_max: u64) -> Result<String, CliError> {
    let audit = spherical_reality_audit(m, n, b1_max)?;
    let entries: Vec<Value> = audit
        .entries
        .iter()
        .map(|e| {
            json!({
                "lambda": e.lambda.parts(),
                "dynkin": e.dynkin.indices,
                "dim": e.dim,
                "type": e.reality.as_str(),
            })
        })
        .collect();
    render(
        cfg,
        json!({
            "space": grassmannian_descriptor(GrassmannField::Complex, m, n),
            "m": m,
            "n": n,
            "b1_max": b1_max,
            "count": entries.len(),
            "all_real": true,
            "partitions": entries,
        }),
    )
}

pub fn distance(cfg: &RunConfig, spec0: &str, spec1: &str, effects: usize) -> Result<String, CliError> {
    let a = StructureInput::parse(spec0)?;
    let b = StructureInput::parse(spec1)?;
    let s0 = sample(cfg, &a)?;
    let s1 = sample(cfg, &b)?;
    let r = symmetrized_distance_estimate(&s0, &s1, effects, SeededRng::new(cfg.seed).with_stream(ESTIMATOR_STREAM))?;
    render(
        cfg,
        json!({
            "structures": [a.label(), b.label()],
            "estimate": r.estimate,
            "forward": r.forward,
            "backward": r.backward,
            "lower_bound": if r.lower_bound > 0.0 { json!(r.lower_bound) } else { Value::Null },
            "n": r.n,
            "effects": r.effects,
            "seed": r.seed,
        }),
    )
}

pub fn sphere_check(cfg: &RunConfig, spec: &str, csv: Option<&Path>) -> Result<String, CliError> {
    let input = StructureInput::parse(spec)?;
    let s = sample(cfg, &input)?;
    let dev = state_space::sphere_check(&s);
    if let Some(path) = csv {
        let mut f = create(path)?;
        std::io::Write::write_all(&mut f, csv_header(cfg).as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        s.write_csv(f)?;
    }
    render(
        cfg,
        json!({
            "structure": input.label(),
            "n": s.len(),
            "dim": s.dim(),
            "max_deviation": dev,
            "pass": dev < cfg.tol,
        }),
    )
}

pub fn schur_average(cfg: &RunConfig, spec: &str, effect: Option<&str>) -> Result<String, CliError> {
    let input = StructureInput::parse(spec)?;
    let s = input.build(1, SeededRng::new(cfg.seed))?;
    let e = match effect {
        Some(text) => {
            let c: Vec<f64> = text
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::Input(format!("effect {text:?} must be comma-separated numbers")))?;
            if c.len() != s.dim() {
                return Err(CliError::Input(format!(
                    "effect has {} coefficients, the structure needs {}",
                    c.len(),
                    s.dim()
                )));
            }
            Effect::new(c, "user")
        }
        None => {
            let block = s
                .blocks()
                .iter()
                .find(|b| !b.trivial)
                .ok_or_else(|| CliError::Input("structure has no non-trivial block".into()))?;
            witness_effect(&s, &block.label.clone(), 0)?
        }
    };
    let r = schur_average_check(&s, &e, cfg.samples, SeededRng::new(cfg.seed).with_stream(SCHUR_STREAM))?;
    render(
        cfg,
        json!({
            "structure": input.label(),
            "effect": e.coeffs,
            "mc_average": r.mc_average,
            "exact": r.exact,
            "sigma": r.sigma,
            "n": r.n,
            "within_4_sigma": r.within(4.0),
        }),
    )
}

fn catalog_row(e: &CatalogEntry) -> Value {
    json!({ "space": e.space, "group": e.group, "stabilizer": e.stabilizer, "gelfand": e.gelfand })
}

pub fn catalog(cfg: &RunConfig, space: Option<&str>) -> Result<String, CliError> {
    let rows: Vec<Value> = match space {
        Some(name) => {
            let e = catalog_lookup(name).ok_or_else(|| {
                let known: Vec<&str> = two_point_catalog().iter().map(|e| e.space).collect();
                CliError::Input(format!("unknown space {name:?}; known: {}", known.join(", ")))
            })?;
            vec![catalog_row(e)]
        }
        None => two_point_catalog().iter().map(catalog_row).collect(),
    };
    render(cfg, json!({ "spaces": rows }))
}

pub fn quartic(cfg: &RunConfig, k: usize) -> Result<String, CliError> {
    let rho = quartic_reference(k)?;
    let d = k * k;
    let idempotence = rho.matmul(&rho).sub(&rho).max_abs();
    let rho_c = CMatrix::from_real(&rho);
    let sub = SubgroupSpec::Block(vec![k, d - k]);
    let mut gen = SeededRng::new(cfg.seed).with_stream(QUARTIC_STREAM).generator();
    let mut invariance: f64 = 0.0;
    for _ in 0..QUARTIC_DRAWS {
        let GroupElement::Su(u) = sub.sample(CompactGroup::Su(d), &mut gen)? else {
            unreachable!("block subgroups of SU(d) sample unitaries");
        };
        invariance = invariance.max(u.matmul(&rho_c).matmul(&u.adjoint()).sub(&rho_c).max_abs());
    }
    let rows: Vec<&[f64]> = (0..d).map(|i| rho.row(i)).collect();
    render(
        cfg,
        json!({
            "k": k,
            "dim": d,
            "reference": rows,
            "trace": rho.trace(),
            "idempotence_defect": idempotence,
            "invariance_defect": invariance,
            "invariance_draws": QUARTIC_DRAWS,
            "stabilizer": format!("S(U({k})xU({}))", d - k),
            "pass": idempotence < cfg.tol && invariance < cfg.tol,
        }),
    )
}
