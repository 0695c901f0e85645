//! Command-line front end. Every subcommand writes one JSON document (or CSV
//! table) to stdout or `--out`; output is a pure function of config and seed.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::admissible::{self, ParamSelection, SelectionOverrides};
use crate::bch;
use crate::etaconst::{self, EtaTable, PermCache};
use crate::filtration::{build_lw, m_as, m_as_oracle, u_brute, u_value, Level};
use crate::nilpotentlie::{LieAlgebra, LieElement};
use crate::params::{desk, fmt_rational, parse_config, validate, GlobalParams};
use crate::ramgen::{self, RamContext};
use crate::verify::{self, CriterionResult};

pub const SCHEMA_VERSION: u32 = 1;

const AFTER_HELP: &str = "\
CSV columns:
  params       key,value
  filtration   table,x,y,value,oracle   (table is U with x=s, y=m, or M with x=a, y=s; L(w) rows give w,log_size)
  admissible   iota,P_alpha,P_beta,m,ch,kappa,vp,gamma,M_iota,m_iota_max,r_iota,aplus
  eta          a,eta                    (a is ';'-separated, eta the coefficient vector)
  bch          word,coeffs
  generators   iota,gamma,M_iota,m_iota,N,terms,reduced_terms
  ideal        one Howell basis row per line
  verify       id,name,passed,detail

Config files are TOML or JSON with keys p, M, N0, v0, a_max and optional
b0_star + n0_star (fix r*), n_star (fix N*), n_star_max (bound the N* search).
--config also accepts the names c1, c2, c3 for the reference configurations.

Exit codes: 0 success, 1 verification failure or internal error, 2 usage error.";

#[derive(Parser, Debug)]
#[command(name = "lieram", version, about = "Ramification ideals of free nilpotent Lie algebras", after_help = AFTER_HELP)]
pub struct Cli {
    /// Config file (TOML or JSON), or c1 / c2 / c3. Defaults to c1.
    #[arg(long, global = true)]
    pub config: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Seed for randomized property suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Per-exponent m choices, e.g. 274=2,93=3.
    #[arg(long = "m-iota", global = true)]
    pub m_iota: Option<String>,
    /// simple, ordered, or custom:<path>.
    #[arg(long, global = true, default_value = "simple")]
    pub eta: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// delta0, r*, N*, q, b* and the condition reports.
    Params,
    /// U and M tables with oracle agreement, and the sizes of L(w).
    Filtration,
    /// The admissible exponent table.
    Admissible,
    /// Eta constants and their identity battery.
    Eta,
    /// Compose serialized Lie elements with the Campbell-Hausdorff law.
    Bch {
        /// JSON file {"elements": [element, ...]}, each element a list of [word, coeffs].
        #[arg(long)]
        input: PathBuf,
    },
    /// Generators of the ramification ideal, one per ch = 1 exponent.
    Generators,
    /// Howell basis of the ramification ideal and the cross-check verdict.
    Ideal,
    /// All property suites; exit 1 on any failure.
    Verify,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

fn fail(e: impl std::fmt::Display) -> CliError {
    CliError::Failure(e.to_string())
}

#[derive(Debug, Default, Deserialize)]
struct OverrideKeys {
    b0_star: Option<u64>,
    n0_star: Option<u32>,
    n_star: Option<u32>,
    n_star_max: Option<u32>,
}

pub struct RunConfig {
    pub params: GlobalParams,
    pub overrides: SelectionOverrides,
}

pub fn load_run_config(arg: Option<&str>) -> Result<RunConfig, CliError> {
    let name = arg.unwrap_or("c1");
    let desk_cfg = match name {
        "c1" => Some(desk::c1()),
        "c2" => Some(desk::c2()),
        "c3" => Some(desk::c3()),
        _ => None,
    };
    let (params, keys) = match desk_cfg {
        Some(p) if !Path::new(name).exists() => (p, OverrideKeys::default()),
        _ => {
            let text = std::fs::read_to_string(name)
                .map_err(|e| CliError::Usage(format!("{name}: {e}")))?;
            let params = parse_config(&text).map_err(|e| CliError::Usage(e.to_string()))?;
            let keys: OverrideKeys = if text.trim_start().starts_with('{') {
                serde_json::from_str(&text).map_err(|e| CliError::Usage(e.to_string()))?
            } else {
                toml::from_str(&text).map_err(|e| CliError::Usage(e.to_string()))?
            };
            (params, keys)
        }
    };
    let violations = validate(&params);
    if !violations.is_empty() {
        let msg = violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("\n");
        return Err(CliError::Usage(msg));
    }
    let r_star = match (keys.b0_star, keys.n0_star) {
        (Some(b), Some(n)) => Some((b, n)),
        (None, None) => None,
        _ => {
            return Err(CliError::Usage(
                "b0_star and n0_star must be given together".into(),
            ))
        }
    };
    let overrides = SelectionOverrides {
        r_star,
        n_star: keys.n_star,
        n_star_max: keys.n_star_max,
    };
    Ok(RunConfig { params, overrides })
}

fn parse_m_iota(s: Option<&str>) -> Result<BTreeMap<BigInt, u32>, CliError> {
    let mut out = BTreeMap::new();
    let Some(s) = s else { return Ok(out) };
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let bad = || CliError::Usage(format!("--m-iota entry {item:?} is not iota=value"));
        let (k, v) = item.split_once('=').ok_or_else(bad)?;
        out.insert(
            k.trim().parse().map_err(|_| bad())?,
            v.trim().parse().map_err(|_| bad())?,
        );
    }
    Ok(out)
}

fn eta_table(choice: &str, lie: &LieAlgebra) -> Result<EtaTable, CliError> {
    let ring = lie.ring();
    match choice {
        "simple" => Ok(EtaTable::simple(ring)),
        "ordered" => Ok(EtaTable::ordered(ring)),
        _ => match choice.strip_prefix("custom:") {
            Some(path) => EtaTable::from_path(ring, Path::new(path))
                .map_err(|e| CliError::Usage(e.to_string())),
            None => Err(CliError::Usage(format!(
                "--eta must be simple, ordered or custom:<path>, got {choice:?}"
            ))),
        },
    }
}

fn select(cfg: &RunConfig) -> Result<ParamSelection, CliError> {
    admissible::select(&cfg.params, &cfg.overrides).map_err(fail)
}

fn header(command: &str, cfg: &RunConfig) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m.insert(
        "config".into(),
        serde_json::to_value(&cfg.params).expect("params serialize"),
    );
    m
}

fn insert<T: Serialize>(m: &mut serde_json::Map<String, Value>, k: &str, v: T) {
    m.insert(k.into(), serde_json::to_value(v).expect("serializable"));
}

/// A rendered artifact: the JSON document and its CSV rendering.
pub struct Artifact {
    pub json: Value,
    pub csv: Vec<String>,
}

impl Artifact {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("json") + "\n",
            Format::Csv => self.csv.join("\n") + "\n",
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn coeff_str(c: &[u64]) -> String {
    c.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

pub fn params_artifact(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let sel = select(cfg)?;
    let p = &cfg.params;
    let en = admissible::enumerate_a0(p, &sel);
    let c1 = sel.n_star % sel.n0_star == 0;
    let c3 = admissible::check_c3(p, &sel.r_star, &sel.delta0, sel.n_star);
    let mut m = header("params", cfg);
    insert(&mut m, "selection", &sel);
    insert(&mut m, "c1_ok", c1);
    insert(&mut m, "c3_ok", c3);
    insert(
        &mut m,
        "c2_surrogate",
        json!({ "ok": en.c2_ok(), "failures": en.c2_failures.len(), "first": en.c2_failures.first() }),
    );
    let csv = vec![
        "key,value".to_string(),
        format!("delta0,{}", fmt_rational(&sel.delta0)),
        format!("r_star,{}", fmt_rational(&sel.r_star)),
        format!("n0_star,{}", sel.n0_star),
        format!("b0_star,{}", sel.b0_star),
        format!("n_star,{}", sel.n_star),
        format!("q,{}", sel.q),
        format!("b_star,{}", sel.b_star),
        format!("x_bound,{}", sel.x_bound),
        format!("c1_ok,{c1}"),
        format!("c3_ok,{c3}"),
        format!("c2_surrogate_ok,{}", en.c2_ok()),
    ];
    Ok(Artifact {
        json: Value::Object(m),
        csv,
    })
}

pub fn filtration_artifact(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let p = &cfg.params;
    let mut csv = vec!["table,x,y,value,oracle".to_string()];
    let mut u_rows = Vec::new();
    for s in 0..p.p {
        for m in 0..=12u64 {
            let v = u_value(p.p, s, m);
            let ok = v == u_brute(p.p, s, m);
            csv.push(format!("U,{s},{m},{},{ok}", fmt_rational(&v)));
            u_rows.push(json!({ "s": s, "m": m, "value": fmt_rational(&v), "oracle": ok }));
        }
    }
    let mut m_rows = Vec::new();
    for a in 0..=p.a_max {
        for s in 0..p.p {
            let Ok(v) = m_as(p.p, a, s, &p.v0) else {
                continue;
            };
            let ok = v == m_as_oracle(p.p, a, s, &p.v0);
            let shown = match v {
                Level::Finite(x) => x.to_string(),
                Level::Infinite => "inf".into(),
            };
            csv.push(format!("M,{a},{s},{shown},{ok}"));
            m_rows.push(json!({ "a": a, "s": s, "value": v, "oracle": ok }));
        }
    }
    let lie = LieAlgebra::standard(p);
    let zm = lie.ring().zm;
    let mut sizes = Vec::new();
    for w in 1..=p.p as usize {
        let ls = build_lw(&lie, w).basis.log_size(&zm);
        csv.push(format!("L,{w},,{ls},"));
        sizes.push(json!({ "w": w, "log_size": ls }));
    }
    let mut m = header("filtration", cfg);
    insert(&mut m, "u_table", u_rows);
    insert(&mut m, "m_table", m_rows);
    insert(&mut m, "lw_log_sizes", sizes);
    insert(&mut m, "lie_dim", lie.dim());
    Ok(Artifact {
        json: Value::Object(m),
        csv,
    })
}

pub fn admissible_artifact(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let p = &cfg.params;
    let sel = select(cfg)?;
    let en = admissible::enumerate_a0(p, &sel);
    let plus = admissible::filter_aplus(p, &en.exponents);
    let in_plus = |e: &admissible::AdmissibleExponent| plus.iter().any(|x| x.iota == e.iota);
    let mut csv = admissible::csv_rows(&en.exponents);
    csv[0].push_str(",aplus");
    for (row, e) in csv.iter_mut().skip(1).zip(&en.exponents) {
        row.push_str(if in_plus(e) { ",1" } else { ",0" });
    }
    let report = admissible::check(p, &sel);
    let mut m = header("admissible", cfg);
    insert(&mut m, "selection", &sel);
    insert(&mut m, "exponents", &en.exponents);
    insert(
        &mut m,
        "aplus",
        plus.iter().map(|e| e.iota.to_string()).collect::<Vec<_>>(),
    );
    insert(&mut m, "report", &report);
    Ok(Artifact {
        json: Value::Object(m),
        csv,
    })
}

pub fn eta_artifact(cfg: &RunConfig, eta: &str, seed: u64) -> Result<Artifact, CliError> {
    let p = &cfg.params;
    let lie = LieAlgebra::standard(p);
    let table = eta_table(eta, &lie)?;
    let mut letters: Vec<u64> = (0..lie.alphabet().len() as u16)
        .map(|l| lie.alphabet().weight(l))
        .collect();
    letters.sort();
    letters.dedup();
    let max_len = (p.p as usize - 1).min(4);
    let mut csv = vec!["a,eta".to_string()];
    let mut rows = Vec::new();
    for s in 0..=max_len.min(3) {
        for a in etaconst::tuples(&letters, s) {
            let v = table.eta(&a);
            csv.push(format!("{},{}", coeff_str(&a), coeff_str(&v.coeffs)));
            rows.push(json!({ "a": a, "eta": v }));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perms = PermCache::new(max_len);
    let mut b_ok = true;
    for _ in 0..200 {
        let s = rand::Rng::random_range(&mut rng, 1..=max_len);
        let (a, n) = etaconst::random_tuple(&letters, s, &mut rng);
        let s1 = rand::Rng::random_range(&mut rng, 0..=s);
        b_ok &= etaconst::check_b_sum_identity(&table, &perms, &a, &n, s1);
    }
    let battery = json!({
        "shuffle_condition": table.shuffle_violation(&letters, max_len).is_none(),
        "bracket_expansion": (2..=max_len).all(etaconst::check_dynkin_identity),
        "b_sum": b_ok,
        "convolution": etaconst::check_convolution(&table, &letters, max_len, 100, &mut rng),
    });
    let mut m = header("eta", cfg);
    insert(&mut m, "variant", eta);
    insert(&mut m, "letters", &letters);
    insert(&mut m, "constants", rows);
    insert(&mut m, "identities", battery);
    Ok(Artifact {
        json: Value::Object(m),
        csv,
    })
}

#[derive(Deserialize)]
struct BchInput {
    elements: Vec<Vec<(Vec<String>, Vec<u64>)>>,
}

pub fn bch_artifact(cfg: &RunConfig, input: &Path) -> Result<Artifact, CliError> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| CliError::Usage(format!("{}: {e}", input.display())))?;
    let parsed: BchInput =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(e.to_string()))?;
    let lie = LieAlgebra::standard(&cfg.params);
    let elems: Vec<LieElement> = parsed
        .elements
        .iter()
        .map(|t| lie.from_serial(t))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let result = elems
        .iter()
        .fold(lie.zero(), |acc, x| bch::circle(&lie, &acc, x));
    let serial = lie.to_serial(&result);
    let mut csv = vec!["word,coeffs".to_string()];
    for (w, c) in &serial {
        csv.push(format!("{},{}", csv_field(&w.join(" ")), coeff_str(c)));
    }
    let mut m = header("bch", cfg);
    insert(&mut m, "inputs", elems.len());
    insert(&mut m, "result", serial);
    insert(&mut m, "is_lie", lie.fa.is_lie(&lie.to_assoc(&result)));
    Ok(Artifact {
        json: Value::Object(m),
        csv,
    })
}

fn ram_context(cfg: &RunConfig, eta: &str) -> Result<RamContext, CliError> {
    let lie = LieAlgebra::standard(&cfg.params);
    let table = eta_table(eta, &lie)?;
    Ok(RamContext::new(lie, table))
}

pub fn generators_artifact(
    cfg: &RunConfig,
    eta: &str,
    m_iota: Option<&str>,
) -> Result<Artifact, CliError> {
    let choice = parse_m_iota(m_iota)?;
    let sel = select(cfg)?;
    let ctx = ram_context(cfg, eta)?;
    let ideal = ramgen::emit_by_exponent(&ctx, &sel, &choice)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut csv = vec!["iota,gamma,M_iota,m_iota,N,terms,reduced_terms".to_string()];
    for g in &ideal.generators {
        csv.push(format!(
            "{},{},{},{},{},{},{}",
            g.iota,
            fmt_rational(&g.gamma),
            g.big_m_iota.map(|x| x.to_string()).unwrap_or_default(),
            g.m_iota.map(|x| x.to_string()).unwrap_or_default(),
            g.big_n,
            g.generator.len(),
            g.reduced.len()
        ));
    }
    let mut m = header("generators", cfg);
    insert(&mut m, "eta", eta);
    insert(&mut m, "selection", &sel);
    insert(&mut m, "generators", &ideal.generators);
    Ok(Artifact {
        json: Value::Object(m),
        csv,
    })
}

pub fn ideal_artifact(
    cfg: &RunConfig,
    eta: &str,
    m_iota: Option<&str>,
) -> Result<Artifact, CliError> {
    let choice = parse_m_iota(m_iota)?;
    let sel = select(cfg)?;
    let ctx = ram_context(cfg, eta)?;
    let t41 = ramgen::emit_by_exponent(&ctx, &sel, &choice)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let t49 = ramgen::emit_by_gamma(&ctx, &sel);
    let zm = ctx.lie.ring().zm;
    let csv = t41
        .span
        .basis
        .rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    let mut m = header("ideal", cfg);
    insert(&mut m, "eta", eta);
    insert(&mut m, "selection", &sel);
    insert(&mut m, "generators", t41.generators.len());
    insert(&mut m, "basis", &t41.span.basis);
    insert(&mut m, "log_size", t41.span.basis.log_size(&zm));
    insert(&mut m, "lp_log_size", ctx.lp.basis.log_size(&zm));
    insert(&mut m, "quotient_log_size", t41.quotient_log_size(&ctx));
    insert(&mut m, "gamma_family_generators", t49.generators.len());
    insert(&mut m, "span_equal", t41.span.basis == t49.span.basis);
    Ok(Artifact {
        json: Value::Object(m),
        csv,
    })
}

/// Config-dependent tables, rendered to one string; used for the in-process
/// rerun comparison.
fn config_tables(cfg: &RunConfig, eta: &str) -> String {
    let parts = [
        params_artifact(cfg),
        admissible_artifact(cfg),
        generators_artifact(cfg, eta, None),
    ];
    parts
        .into_iter()
        .map(|a| match a {
            Ok(a) => a.render(Format::Json),
            Err(CliError::Usage(e) | CliError::Failure(e)) => e,
        })
        .collect()
}

fn suite(name: &str, failures: Vec<String>) -> Value {
    json!({ "name": name, "passed": failures.is_empty(), "failures": failures })
}

pub fn verify_artifact(
    cfg: &RunConfig,
    eta: &str,
    seed: u64,
) -> Result<(Artifact, bool), CliError> {
    let lie = LieAlgebra::standard(&cfg.params);
    let table = eta_table(eta, &lie)?;
    let mut criteria: Vec<CriterionResult> = verify::battery(seed);
    let first = config_tables(cfg, eta);
    let second = config_tables(cfg, eta);
    criteria.push(verify::determinism(first.as_bytes(), second.as_bytes()));
    let p = &cfg.params;
    let (ram_f, _) = verify::ramification_on(p, &cfg.overrides, Some(table));
    let suites = vec![
        suite("admissible", verify::admissible_on(p, &cfg.overrides)),
        suite("filtration", verify::filtration_on(p)),
        suite("ramification", ram_f),
    ];
    let passed =
        criteria.iter().all(|c| c.passed) && suites.iter().all(|s| s["passed"] == json!(true));
    let mut csv = vec!["id,name,passed,detail".to_string()];
    for c in &criteria {
        csv.push(format!(
            "{},{},{},{}",
            c.id,
            csv_field(&c.name),
            c.passed,
            csv_field(&c.detail)
        ));
    }
    for s in &suites {
        let detail = s["failures"].as_array().map(|a| a.len()).unwrap_or(0);
        csv.push(format!(
            "config,{},{},{} failures",
            s["name"].as_str().unwrap_or(""),
            s["passed"],
            detail
        ));
    }
    let mut m = header("verify", cfg);
    insert(&mut m, "seed", seed);
    insert(&mut m, "eta", eta);
    insert(&mut m, "criteria", &criteria);
    insert(&mut m, "config_suites", suites);
    insert(&mut m, "passed", passed);
    Ok((
        Artifact {
            json: Value::Object(m),
            csv,
        },
        passed,
    ))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| fail(format!("{}: {e}", path.display())))
        }
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())
                .and_then(|_| so.flush())
                .map_err(fail)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<bool, CliError> {
    let cfg = load_run_config(cli.config.as_deref())?;
    let m_iota = cli.m_iota.as_deref();
    let (art, ok) = match &cli.command {
        Command::Params => (params_artifact(&cfg)?, true),
        Command::Filtration => (filtration_artifact(&cfg)?, true),
        Command::Admissible => (admissible_artifact(&cfg)?, true),
        Command::Eta => (eta_artifact(&cfg, &cli.eta, cli.seed)?, true),
        Command::Bch { input } => (bch_artifact(&cfg, input)?, true),
        Command::Generators => (generators_artifact(&cfg, &cli.eta, m_iota)?, true),
        Command::Ideal => (ideal_artifact(&cfg, &cli.eta, m_iota)?, true),
        Command::Verify => verify_artifact(&cfg, &cli.eta, cli.seed)?,
    };
    write_out(cli.out.as_deref(), &art.render(cli.format))?;
    Ok(ok)
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("verification failed");
            1
        }
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Failure(m) => eprintln!("failure: {m}"),
            }
            e.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_iota_parsing() {
        let m = parse_m_iota(Some("274=2, 93=3")).unwrap();
        assert_eq!(m[&BigInt::from(274)], 2);
        assert_eq!(m.len(), 2);
        assert!(parse_m_iota(Some("274")).is_err());
        assert!(parse_m_iota(None).unwrap().is_empty());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["lieram", "frobnicate"]), 2);
        assert_eq!(
            run(["lieram", "eta", "--eta", "bogus", "--out", "/dev/null"]),
            2
        );
        assert_eq!(
            run(["lieram", "params", "--config", "/nonexistent.toml"]),
            2
        );
    }

    #[test]
    fn params_report_on_c1() {
        let cfg = load_run_config(None).unwrap();
        let a = params_artifact(&cfg).unwrap();
        assert_eq!(a.json["selection"]["r_star"], json!("5/8"));
        assert_eq!(a.json["selection"]["delta0"], json!("1/2"));
        assert_eq!(a.json["schema_version"], json!(SCHEMA_VERSION));
    }

    #[test]
    fn invalid_config_reports_violations() {
        let dir = std::env::temp_dir().join(format!("lieram-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.toml");
        std::fs::write(&path, "p = 4\nM = 1\nN0 = 1\nv0 = 1\na_max = 2\n").unwrap();
        match load_run_config(path.to_str()) {
            Err(CliError::Usage(m)) => assert!(m.contains("p_odd_prime")),
            other => panic!("{:?}", other.err()),
        }
    }

    #[test]
    fn serial_roundtrip_through_bch() {
        let cfg = load_run_config(Some("c1")).unwrap();
        let lie = LieAlgebra::standard(&cfg.params);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = lie.random(&mut rng, 3);
        assert_eq!(lie.from_serial(&lie.to_serial(&x)).unwrap(), x);
        let dir = std::env::temp_dir().join(format!("lieram-bch-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("in.json");
        let input = json!({ "elements": [lie.to_serial(&x), lie.to_serial(&lie.neg(&x))] });
        std::fs::write(&path, input.to_string()).unwrap();
        let a = bch_artifact(&cfg, &path).unwrap();
        assert_eq!(a.json["result"], json!([]));
    }
}
