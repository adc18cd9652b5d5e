use std::sync::Arc;

use bloch_core::basis::{standard_basis, tensorial_basis, GeneratorBasis};
use bloch_core::bloch::{decode, encode, is_state, purity, BlochVector, OperatorState};
use bloch_core::interference::{interference2, interference3, Superposition2, Superposition3};
use bloch_core::matrix::ComplexMatrix;
use bloch_core::measurement::{born_probabilities, run_measurement, simplex_from_observable};
use bloch_core::multipartite::{
    chsh, entangled_decompose, optimal_chsh_axes, rod_analytic_table, rod_experiment, sector_split, BipartiteBasis,
    ChshMode, EntangledPairSpec, RodExperimentConfig,
};
use bloch_core::BlochError;
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{CommandKind, ExperimentConfig};
use crate::error::{CliError, Result};

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

/// Flat view of a result payload, used for CSV output.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }
}

pub struct Outcome {
    pub results: Value,
    pub table: Table,
}

fn params<T: DeserializeOwned>(cfg: &ExperimentConfig) -> Result<T> {
    serde_json::from_value(Value::Object(cfg.parameters.clone()))
        .map_err(|e| CliError::Config(format!("{} parameters: {e}", cfg.command.name())))
}

fn lib<T>(cfg: &ExperimentConfig, r: std::result::Result<T, BlochError>) -> Result<T> {
    r.map_err(|source| CliError::Library { command: cfg.command.name().into(), source })
}

fn require_shots(cfg: &ExperimentConfig) -> Result<u64> {
    cfg.shots
        .ok_or_else(|| CliError::Config(format!("{} is a Monte Carlo command and needs shots", cfg.command.name())))
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    match cfg.command {
        CommandKind::Basis => basis(cfg),
        CommandKind::Encode => encode_cmd(cfg),
        CommandKind::Decode => decode_cmd(cfg),
        CommandKind::Measure => measure(cfg),
        CommandKind::Interfere => interfere(cfg),
        CommandKind::Decompose => decompose(cfg),
        CommandKind::Rod => rod(cfg),
        CommandKind::Chsh => chsh_cmd(cfg),
    }
}

// ---- shared inputs ----

/// Matrix entry as a bare real or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Pair([f64; 2]),
}

impl From<Entry> for Complex64 {
    fn from(e: Entry) -> Self {
        match e {
            Entry::Real(x) => Complex64::new(x, 0.0),
            Entry::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

fn to_matrix(cfg: &ExperimentConfig, rows: Vec<Vec<Entry>>) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<Complex64>> = rows.into_iter().map(|r| r.into_iter().map(Into::into).collect()).collect();
    lib(cfg, ComplexMatrix::from_rows(&rows))
}

fn to_ket(v: Vec<Entry>) -> Vec<Complex64> {
    v.into_iter().map(Into::into).collect()
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    json!(m.rows().iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()).collect::<Vec<_>>())
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
enum BasisChoice {
    #[default]
    Standard,
    Tensorial,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BasisParams {
    #[serde(default)]
    kind: BasisChoice,
    n: Option<usize>,
    factors: Option<Vec<usize>>,
}

fn build_basis(cfg: &ExperimentConfig, p: &BasisParams, dim: Option<usize>) -> Result<(Arc<GeneratorBasis>, Value)> {
    match p.kind {
        BasisChoice::Standard => {
            let n = p.n.or(dim).ok_or_else(|| CliError::Config("standard basis needs `n`".into()))?;
            let b = lib(cfg, standard_basis(n, None))?;
            Ok((Arc::new(b), json!({ "kind": "standard", "n": n })))
        }
        BasisChoice::Tensorial => {
            let dims = p.factors.clone().ok_or_else(|| CliError::Config("tensorial basis needs `factors`".into()))?;
            let factors = dims.iter().map(|&d| lib(cfg, standard_basis(d, None))).collect::<Result<Vec<_>>>()?;
            let refs: Vec<&GeneratorBasis> = factors.iter().collect();
            let b = lib(cfg, tensorial_basis(&refs))?;
            if let Some(n) = p.n.or(dim) {
                if n != b.n_dim() {
                    return Err(CliError::Config(format!("factors {dims:?} give dimension {}, not {n}", b.n_dim())));
                }
            }
            Ok((Arc::new(b), json!({ "kind": "tensorial", "factors": dims })))
        }
    }
}

// ---- basis ----

fn basis(cfg: &ExperimentConfig) -> Result<Outcome> {
    let p: BasisParams = params(cfg)?;
    let (b, descriptor) = build_basis(cfg, &p, None)?;
    let labels: Vec<String> = b.labels().iter().map(|l| l.to_string()).collect();
    let matrices: Vec<Vec<[f64; 2]>> =
        b.matrices().iter().map(|m| m.entries().iter().map(|z| [z.re, z.im]).collect()).collect();
    let mut table = Table::new(&["generator", "label", "row", "col", "re", "im"]);
    let n = b.n_dim();
    for (g, m) in b.matrices().iter().enumerate() {
        for (k, z) in m.entries().iter().enumerate() {
            table.rows.push(vec![
                Cell::Int(g as u64),
                Cell::Text(labels[g].clone()),
                Cell::Int((k / n) as u64),
                Cell::Int((k % n) as u64),
                Cell::Num(z.re),
                Cell::Num(z.im),
            ]);
        }
    }
    let results = json!({
        "n_dim": n,
        "kind": descriptor["kind"],
        "basis": descriptor,
        "labels": labels,
        "matrices": matrices,
    });
    Ok(Outcome { results, table })
}

// ---- encode / decode ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EncodeParams {
    state: Vec<Vec<Entry>>,
    #[serde(default)]
    basis: BasisParams,
}

fn vector_table(labels: &[String], c: &[f64]) -> Table {
    let mut table = Table::new(&["index", "label", "component"]);
    for (i, x) in c.iter().enumerate() {
        table.rows.push(vec![Cell::Int(i as u64), Cell::Text(labels[i].clone()), Cell::Num(*x)]);
    }
    table
}

fn encode_cmd(cfg: &ExperimentConfig) -> Result<Outcome> {
    let p: EncodeParams = params(cfg)?;
    let m = to_matrix(cfg, p.state)?;
    let d = lib(cfg, OperatorState::new(m))?;
    let (b, descriptor) = build_basis(cfg, &p.basis, Some(d.n_dim()))?;
    let r = lib(cfg, encode(&d, &b))?;
    let labels: Vec<String> = b.labels().iter().map(|l| l.to_string()).collect();
    let results = json!({
        "n_dim": d.n_dim(),
        "basis": descriptor,
        "labels": labels,
        "vector": r.components(),
        "norm": r.norm(),
        "purity": purity(&r),
    });
    Ok(Outcome { results, table: vector_table(&labels, r.components()) })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DecodeParams {
    vector: Vec<f64>,
    #[serde(default)]
    basis: BasisParams,
}

fn decode_cmd(cfg: &ExperimentConfig) -> Result<Outcome> {
    let p: DecodeParams = params(cfg)?;
    let n = ((p.vector.len() + 1) as f64).sqrt().round() as usize;
    if n < 2 || n * n != p.vector.len() + 1 {
        return Err(CliError::Config(format!("vector length {} is not N²−1", p.vector.len())));
    }
    let (b, descriptor) = build_basis(cfg, &p.basis, Some(n))?;
    let r = lib(cfg, BlochVector::new(p.vector, b))?;
    let m = decode(&r);
    let min_eig = lib(cfg, m.min_eigenvalue())?;
    let mut table = Table::new(&["row", "col", "re", "im"]);
    for (k, z) in m.entries().iter().enumerate() {
        table.rows.push(vec![Cell::Int((k / n) as u64), Cell::Int((k % n) as u64), Cell::Num(z.re), Cell::Num(z.im)]);
    }
    let results = json!({
        "n_dim": n,
        "basis": descriptor,
        "matrix": matrix_json(&m),
        "is_state": is_state(&r, 1e-10),
        "min_eigenvalue": min_eig,
        "purity": purity(&r),
    });
    Ok(Outcome { results, table })
}

// ---- measure ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureParams {
    state: Vec<Vec<Entry>>,
    observable: Vec<Vec<Entry>>,
}

fn measure(cfg: &ExperimentConfig) -> Result<Outcome> {
    let p: MeasureParams = params(cfg)?;
    let shots = require_shots(cfg)?;
    let d = lib(cfg, OperatorState::new(to_matrix(cfg, p.state)?))?;
    let a = to_matrix(cfg, p.observable)?;
    let b = Arc::new(lib(cfg, standard_basis(d.n_dim(), None))?);
    let s = lib(cfg, simplex_from_observable(&a, &b))?;
    let analytic = lib(cfg, born_probabilities(&d, &s))?.weights().to_vec();
    let run = lib(cfg, run_measurement(&d, &s, shots, cfg.seed, cfg.workers))?;
    let empirical = run.frequencies();
    let stderr3: Vec<f64> = analytic.iter().map(|p| 3.0 * (p * (1.0 - p) / shots as f64).sqrt()).collect();
    let mut table = Table::new(&["outcome", "eigenvalue", "analytic", "empirical", "count", "stderr3"]);
    for i in 0..analytic.len() {
        table.rows.push(vec![
            Cell::Int(i as u64),
            Cell::Num(s.eigenvalues()[i]),
            Cell::Num(analytic[i]),
            Cell::Num(empirical[i]),
            Cell::Int(run.counts[i]),
            Cell::Num(stderr3[i]),
        ]);
    }
    let results = json!({
        "eigenvalues": s.eigenvalues(),
        "analytic": analytic,
        "empirical": empirical,
        "counts": run.counts,
        "stderr3": stderr3,
        "shots": shots,
    });
    Ok(Outcome { results, table })
}

// ---- interfere ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InterfereParams {
    #[serde(default = "two")]
    mode: u8,
    a1: Option<f64>,
    amplitudes: Option<[f64; 3]>,
    alpha: Option<f64>,
    alphas: Option<Vec<f64>>,
    delta: Option<f64>,
    deltas: Option<Vec<f64>>,
    n: Option<usize>,
}

fn two() -> u8 {
    2
}

fn scan(single: Option<f64>, list: Option<Vec<f64>>) -> Vec<f64> {
    list.unwrap_or_else(|| vec![single.unwrap_or(0.0)])
}

fn interfere(cfg: &ExperimentConfig) -> Result<Outcome> {
    let p: InterfereParams = params(cfg)?;
    let alphas = scan(p.alpha, p.alphas);
    let table = match p.mode {
        2 => {
            let a1 = p.a1.ok_or_else(|| CliError::Config("mode 2 needs `a1`".into()))?;
            let a2 = (1.0 - a1 * a1).max(0.0).sqrt();
            let mut t = Table::new(&["alpha", "i_plus", "i_minus", "p_plus", "p_minus"]);
            for &alpha in &alphas {
                let rep = interference2(&lib(cfg, Superposition2::new(a1, a2, alpha, p.n.unwrap_or(2)))?);
                let mut row = vec![Cell::Num(alpha)];
                row.extend(rep.interference_terms.iter().chain(&rep.probabilities).map(|&x| Cell::Num(x)));
                t.rows.push(row);
            }
            t
        }
        3 => {
            let [a1, a2, a3] = p.amplitudes.ok_or_else(|| CliError::Config("mode 3 needs `amplitudes`".into()))?;
            let deltas = scan(p.delta, p.deltas);
            let mut t = Table::new(&["alpha", "delta", "i1", "i2", "i3", "p1", "p2", "p3"]);
            for &alpha in &alphas {
                for &delta in &deltas {
                    let rep = interference3(&lib(cfg, Superposition3::new(a1, a2, a3, alpha, delta))?);
                    let mut row = vec![Cell::Num(alpha), Cell::Num(delta)];
                    row.extend(rep.interference_terms.iter().chain(&rep.probabilities).map(|&x| Cell::Num(x)));
                    t.rows.push(row);
                }
            }
            t
        }
        m => return Err(CliError::Config(format!("interfere mode must be 2 or 3, got {m}"))),
    };
    let rows: Vec<Vec<f64>> = table
        .rows
        .iter()
        .map(|r| r.iter().map(|c| if let Cell::Num(x) = c { *x } else { f64::NAN }).collect())
        .collect();
    let results = json!({ "mode": p.mode, "columns": table.columns, "rows": rows });
    Ok(Outcome { results, table })
}

// ---- decompose ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DecomposeParams {
    state: Option<Vec<Vec<Entry>>>,
    reference: Option<Vec<f64>>,
    dims: Option<[usize; 2]>,
    a1: Option<f64>,
    alpha: Option<f64>,
    psi_a: Option<Vec<Entry>>,
    phi_a: Option<Vec<Entry>>,
    psi_b: Option<Vec<Entry>>,
    phi_b: Option<Vec<Entry>>,
}

fn decompose(cfg: &ExperimentConfig) -> Result<Outcome> {
    let p: DecomposeParams = params(cfg)?;
    let [na, nb] = p.dims.unwrap_or([2, 2]);
    let (bip, sectors, basis_name) = if let Some(rows) = p.state {
        if p.a1.is_some() || p.psi_a.is_some() {
            return Err(CliError::Config("give either `state` or an entangled pair, not both".into()));
        }
        let d = lib(cfg, OperatorState::new(to_matrix(cfg, rows)?))?;
        let bip = lib(cfg, BipartiteBasis::standard(na, nb))?;
        let r = lib(cfg, encode(&d, bip.joint()))?;
        let sectors = lib(cfg, sector_split(&r, &bip, p.reference.as_deref()))?;
        (bip, sectors, "standard")
    } else {
        if p.reference.is_some() {
            return Err(CliError::Config("`reference` applies to `state` input only".into()));
        }
        let a1 = p.a1.ok_or_else(|| CliError::Config("decompose needs `state` or `a1`".into()))?;
        let alpha = p.alpha.unwrap_or(0.0);
        let spec = match (p.psi_a, p.phi_a, p.psi_b, p.phi_b) {
            (None, None, None, None) => lib(cfg, EntangledPairSpec::canonical(a1, alpha, na, nb))?,
            (Some(pa), Some(fa), Some(pb), Some(fb)) => {
                let a2 = (1.0 - a1 * a1).max(0.0).sqrt();
                lib(cfg, EntangledPairSpec::new(a1, a2, alpha, (to_ket(pa), to_ket(fa)), (to_ket(pb), to_ket(fb))))?
            }
            _ => return Err(CliError::Config("give all of psi_a, phi_a, psi_b, phi_b or none".into())),
        };
        let dec = lib(cfg, entangled_decompose(&spec))?;
        (dec.basis, dec.sectors, "adapted")
    };
    let layout = bip.layout();
    let mut table = Table::new(&["sector", "index", "value"]);
    let parts: [(&str, &[f64]); 4] = [
        ("a", sectors.r_a.components()),
        ("b", sectors.r_b.components()),
        ("ab", &sectors.r_ab),
        ("int", &sectors.r_int),
    ];
    for (name, values) in parts {
        for (i, x) in values.iter().enumerate() {
            table.rows.push(vec![Cell::Text(name.into()), Cell::Int(i as u64), Cell::Num(*x)]);
        }
    }
    let results = json!({
        "basis": basis_name,
        "dims": [layout.factor_dims.0, layout.factor_dims.1],
        "d_a": layout.d_a,
        "d_b": layout.d_b,
        "d_ab": layout.d_ab,
        "r_a": sectors.r_a.components(),
        "r_b": sectors.r_b.components(),
        "r_ab": sectors.r_ab,
        "r_int": sectors.r_int,
    });
    Ok(Outcome { results, table })
}

// ---- rod ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RodParams {
    n_a: [f64; 3],
    n_b: [f64; 3],
    #[serde(default)]
    b_first: bool,
}

fn rod(cfg: &ExperimentConfig) -> Result<Outcome> {
    let p: RodParams = params(cfg)?;
    let shots = require_shots(cfg)?;
    let rc =
        RodExperimentConfig { n_a: p.n_a, n_b: p.n_b, shots, seed: cfg.seed, workers: cfg.workers, b_first: p.b_first };
    let res = lib(cfg, rod_experiment(&rc))?;
    let analytic = lib(cfg, rod_analytic_table(p.n_a, p.n_b, p.b_first))?;
    let e_analytic = analytic[0][0] + analytic[1][1] - analytic[0][1] - analytic[1][0];
    let sign = ["+", "-"];
    let mut table = Table::new(&["a", "b", "count", "frequency", "analytic"]);
    for i in 0..2 {
        for j in 0..2 {
            table.rows.push(vec![
                Cell::Text(sign[i].into()),
                Cell::Text(sign[j].into()),
                Cell::Int(res.counts[i][j]),
                Cell::Num(res.counts[i][j] as f64 / shots as f64),
                Cell::Num(analytic[i][j]),
            ]);
        }
    }
    let results = json!({
        "counts": res.counts,
        "shots": shots,
        "e_hat": res.e_hat,
        "analytic": analytic,
        "e_analytic": e_analytic,
        "b_first": p.b_first,
    });
    Ok(Outcome { results, table })
}

// ---- chsh ----

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
enum ChshModeParam {
    #[default]
    Analytic,
    MonteCarlo,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChshParams {
    #[serde(default)]
    optimal: bool,
    #[serde(default)]
    mode: ChshModeParam,
    a: Option<[f64; 3]>,
    a_prime: Option<[f64; 3]>,
    b: Option<[f64; 3]>,
    b_prime: Option<[f64; 3]>,
}

fn chsh_cmd(cfg: &ExperimentConfig) -> Result<Outcome> {
    let p: ChshParams = params(cfg)?;
    let axes = match (p.optimal, p.a, p.a_prime, p.b, p.b_prime) {
        (true, None, None, None, None) => optimal_chsh_axes(),
        (false, Some(a), Some(ap), Some(b), Some(bp)) => [a, ap, b, bp],
        (true, ..) => return Err(CliError::Config("`optimal` excludes explicit axes".into())),
        _ => return Err(CliError::Config("chsh needs `optimal` or all of a, a_prime, b, b_prime".into())),
    };
    let mode = match p.mode {
        ChshModeParam::Analytic => ChshMode::Analytic,
        ChshModeParam::MonteCarlo => {
            ChshMode::MonteCarlo { shots: require_shots(cfg)?, seed: cfg.seed, workers: cfg.workers }
        }
    };
    let [a, ap, b, bp] = axes;
    let res = lib(cfg, chsh(a, ap, b, bp, mode))?;
    let names = ["E(a,b)", "E(a,b')", "E(a',b)", "E(a',b')"];
    let mut table = Table::new(&["quantity", "value"]);
    for (n, e) in names.iter().zip(res.correlations) {
        table.rows.push(vec![Cell::Text(n.to_string()), Cell::Num(e)]);
    }
    table.rows.push(vec![Cell::Text("S".into()), Cell::Num(res.s)]);
    let results = json!({
        "mode": if p.mode == ChshModeParam::Analytic { "analytic" } else { "monte_carlo" },
        "axes": { "a": a, "a_prime": ap, "b": b, "b_prime": bp },
        "correlations": res.correlations,
        "s": res.s,
        "tsirelson_bound": 2.0 * std::f64::consts::SQRT_2,
    });
    Ok(Outcome { results, table })
}
