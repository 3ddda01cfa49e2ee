//! Command handlers: resolve parameters (flags over config over defaults),
//! run the library, and write manifests plus CSV artifacts.

use crate::{
    CharacterizeArgs, CheckMatroidArgs, CliError, CliResult, ConcentrationArgs, EvaluateArgs,
    GenExpanderArgs, GenMatroidArgs, HardnessCommand, LearnArgs, LowerBoundArgs, SfmccArgs,
    StcutArgs, VertexcoverArgs,
};
use serde_json::{json, Map, Value};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use subrank::dist::{sample_fixed_size, ProductDistribution, SubsetDistribution};
use subrank::expander::{
    sample_expander, sample_partitioned_expander, verify_expansion, ExpansionParams, GraphFile,
};
use subrank::experiment::{
    characterization_curve, concentration_check, lower_bound_experiment, mean_concentration_check,
    pmac_evaluate, BandConfig, LearnerChoice,
};
use subrank::func::{SetFunction, TabulatedFile};
use subrank::hardness::{
    constrained_min_demo, st_cut_instance, vertex_cover_instance, StCutParams, VertexCoverParams,
};
use subrank::learn::{
    self, separator_sample_size, vc_consistent_sample_size, HypothesisFile, LabeledSample,
};
use subrank::matroid::{
    brute_rank, build_family_mb, check_matroid_axioms, check_uncrossing, planted_defaults,
    ConstraintFamily, MatroidFile, MatroidSpec,
};
use subrank::report::{write_csv, Manifest};
use subrank::rng::{stream, Stream};
use subrank::set::ElementSet;
use subrank::EXHAUSTIVE_LIMIT;

const GLOBAL_KEYS: [&str; 3] = ["seed", "out", "threads"];

pub struct Context {
    config: Map<String, Value>,
    seed: Option<u64>,
    out: Option<PathBuf>,
}

impl Context {
    pub fn new(
        config: Option<PathBuf>,
        seed: Option<u64>,
        out: Option<PathBuf>,
        threads: Option<usize>,
    ) -> CliResult<Self> {
        if let Some(t) = threads {
            if t == 0 {
                return Err(CliError::usage("threads must be at least 1"));
            }
        }
        let config = match config {
            None => Map::new(),
            Some(path) => {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::usage(format!("cannot read config: {e}")))?;
                let value: Value = serde_json::from_str(&text)
                    .map_err(|e| CliError::usage(format!("malformed config: {e}")))?;
                match value {
                    Value::Object(map) => map,
                    _ => return Err(CliError::usage("config must be a JSON object")),
                }
            }
        };
        Ok(Context { config, seed, out })
    }

    /// Rejects config keys the invoked command does not understand.
    fn check_keys(&self, allowed: &[&str]) -> CliResult<()> {
        for key in self.config.keys() {
            if !allowed.contains(&key.as_str()) && !GLOBAL_KEYS.contains(&key.as_str()) {
                return Err(CliError::usage(format!("unknown config key {key:?}")));
            }
        }
        Ok(())
    }

    fn seed(&self) -> CliResult<u64> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match self.config.get("seed") {
            Some(v) => v
                .as_u64()
                .ok_or_else(|| CliError::usage("config key \"seed\" must be an integer")),
            None => Ok(0),
        }
    }

    fn out(&self) -> PathBuf {
        if let Some(o) = &self.out {
            return o.clone();
        }
        match self.config.get("out").and_then(|v| v.as_str()) {
            Some(s) => PathBuf::from(s),
            None => PathBuf::from("out"),
        }
    }

    fn usize_key(
        &self,
        key: &str,
        flag: Option<usize>,
        default: Option<usize>,
    ) -> CliResult<usize> {
        if let Some(v) = flag {
            return Ok(v);
        }
        if let Some(v) = self.config.get(key) {
            return v
                .as_u64()
                .map(|v| v as usize)
                .ok_or_else(|| CliError::usage(format!("config key {key:?} must be an integer")));
        }
        default.ok_or_else(|| CliError::usage(format!("missing parameter {key:?}")))
    }

    fn i64_key(&self, key: &str, flag: Option<i64>, default: Option<i64>) -> CliResult<i64> {
        if let Some(v) = flag {
            return Ok(v);
        }
        if let Some(v) = self.config.get(key) {
            return v
                .as_i64()
                .ok_or_else(|| CliError::usage(format!("config key {key:?} must be an integer")));
        }
        default.ok_or_else(|| CliError::usage(format!("missing parameter {key:?}")))
    }

    fn f64_key(&self, key: &str, flag: Option<f64>, default: Option<f64>) -> CliResult<f64> {
        if let Some(v) = flag {
            return Ok(v);
        }
        if let Some(v) = self.config.get(key) {
            return v
                .as_f64()
                .ok_or_else(|| CliError::usage(format!("config key {key:?} must be a number")));
        }
        default.ok_or_else(|| CliError::usage(format!("missing parameter {key:?}")))
    }

    fn string_key(
        &self,
        key: &str,
        flag: Option<String>,
        default: Option<&str>,
    ) -> CliResult<String> {
        if let Some(v) = flag {
            return Ok(v);
        }
        if let Some(v) = self.config.get(key) {
            return v
                .as_str()
                .map(str::to_string)
                .ok_or_else(|| CliError::usage(format!("config key {key:?} must be a string")));
        }
        default
            .map(str::to_string)
            .ok_or_else(|| CliError::usage(format!("missing parameter {key:?}")))
    }

    fn path_key(&self, key: &str, flag: Option<PathBuf>) -> CliResult<PathBuf> {
        if let Some(v) = flag {
            return Ok(v);
        }
        if let Some(v) = self.config.get(key) {
            return v
                .as_str()
                .map(PathBuf::from)
                .ok_or_else(|| CliError::usage(format!("config key {key:?} must be a path")));
        }
        Err(CliError::usage(format!("missing parameter {key:?}")))
    }
}

fn parse_marked(text: &str) -> CliResult<Vec<usize>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| CliError::usage(format!("bad index {tok:?} in marked list")))
        })
        .collect()
}

/// Targets accepted everywhere a set function is needed:
/// `free:N`, `card:N:C`, `matroid:PATH`, `tabulated:PATH`.
fn parse_target(spec: &str) -> CliResult<SetFunction> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| CliError::usage(format!("target {spec:?} needs a kind prefix")))?;
    let bad = |msg: String| CliError::usage(msg);
    match kind {
        "free" => {
            let n: usize = rest
                .parse()
                .map_err(|_| bad(format!("bad ground size in {spec:?}")))?;
            Ok(
                SetFunction::cardinality_profile((0..=n).map(|j| j as f64).collect())
                    .expect("identity profile"),
            )
        }
        "card" => {
            let (n, c) = rest
                .split_once(':')
                .ok_or_else(|| bad(format!("card target needs N:C, got {spec:?}")))?;
            let n: usize = n.parse().map_err(|_| bad(format!("bad N in {spec:?}")))?;
            let c: usize = c.parse().map_err(|_| bad(format!("bad C in {spec:?}")))?;
            Ok(
                SetFunction::cardinality_profile((0..=n).map(|j| j.min(c) as f64).collect())
                    .expect("capped profile"),
            )
        }
        "matroid" => {
            let text = std::fs::read_to_string(rest)
                .map_err(|e| bad(format!("cannot read {rest}: {e}")))?;
            let file = MatroidFile::from_json(&text)?;
            Ok(SetFunction::matroid_rank(Arc::new(file.to_spec()?)))
        }
        "tabulated" => {
            let text = std::fs::read_to_string(rest)
                .map_err(|e| bad(format!("cannot read {rest}: {e}")))?;
            Ok(TabulatedFile::from_json(&text)?.to_function()?)
        }
        other => Err(bad(format!("unknown target kind {other:?}"))),
    }
}

fn write_manifest(manifest: &Manifest, dir: &Path) -> CliResult<PathBuf> {
    manifest
        .write(dir)
        .map_err(|e| CliError::usage(e.to_string()))
}

pub fn gen_matroid(ctx: &Context, args: GenMatroidArgs) -> CliResult<()> {
    ctx.check_keys(&["kind", "n", "k", "d", "b", "tau", "set-size", "marked"])?;
    let seed = ctx.seed()?;
    let out = ctx.out();
    let kind = ctx.string_key("kind", args.kind, Some("truncated"))?;
    let n = ctx.usize_key("n", args.n, Some(10))?;
    let k = ctx.usize_key("k", args.k, Some(3))?;
    let defaults = planted_defaults(n, k.max(2), 2.0);
    let mut manifest = Manifest::new("gen-matroid", seed, json!({"kind": kind, "n": n, "k": k}))
        .map_err(|e| CliError::usage(e.to_string()))?;

    let result: Result<MatroidFile, subrank::Error> = match kind.as_str() {
        "family-mb" => {
            let d = ctx.usize_key("d", args.d.map(|v| v as usize), Some(defaults.d.min(n)))?;
            let b = ctx.i64_key("b", args.b, Some(defaults.b.min(d as i64)))?;
            let tau = ctx.usize_key("tau", args.tau, Some(defaults.tau))?;
            let marked = match ctx.string_key("marked", args.marked.clone(), Some(""))? {
                s if s.is_empty() => {
                    use rand::Rng;
                    let mut rng = stream(seed, Stream::Instance, 1);
                    (0..k).filter(|_| rng.gen::<bool>()).collect()
                }
                s => parse_marked(&s)?,
            };
            sample_expander(k, n, d, seed)
                .and_then(|graph| build_family_mb(graph, b, d, tau, &marked))
                .map(|fam| MatroidFile::from_family_mb(&fam))
        }
        "partition" => {
            use rand::Rng;
            let mut rng = stream(seed, Stream::Instance, 0);
            let mut members = vec![Vec::new(); k];
            for i in 0..n {
                members[rng.gen_range(0..k)].push(i);
            }
            let sets: Vec<ElementSet> = members
                .into_iter()
                .filter(|m| !m.is_empty())
                .map(|m| ElementSet::from_indices(n, &m).expect("indices in range"))
                .collect();
            let b = ctx.i64_key("b", args.b, Some(1))?;
            let caps: Vec<i64> = sets.iter().map(|s| b.min(s.len() as i64)).collect();
            ConstraintFamily::new(n, sets, caps)
                .and_then(MatroidSpec::partition)
                .and_then(|s| MatroidFile::from_spec(&s))
        }
        _ => {
            let set_size = ctx.usize_key("set-size", args.set_size, Some((n / 2).max(2)))?;
            if set_size == 0 || set_size > n {
                return Err(CliError::usage("set-size must be in 1..=n"));
            }
            let b = ctx.i64_key("b", args.b, Some((set_size as i64 - 1).max(1)))?;
            let mut rng = stream(seed, Stream::Instance, 0);
            let sets: Vec<ElementSet> = (0..k)
                .map(|_| sample_fixed_size(n, set_size, &mut rng))
                .collect();
            let family = ConstraintFamily::new(n, sets, vec![b; k])?;
            match kind.as_str() {
                "uncrossed" => {
                    MatroidSpec::uncrossed(family).and_then(|s| MatroidFile::from_spec(&s))
                }
                "pairwise" => {
                    let d = ctx.i64_key("d", args.d, Some(2 * b - set_size as i64))?;
                    MatroidSpec::pairwise(family, d).and_then(|s| MatroidFile::from_spec(&s))
                }
                "truncated" => {
                    let d = ctx.i64_key("d", args.d, Some(b + 1))?;
                    let tau = ctx.usize_key("tau", args.tau, Some(2))?;
                    MatroidSpec::truncated(family, d, tau).and_then(|s| MatroidFile::from_spec(&s))
                }
                other => return Err(CliError::usage(format!("unknown kind {other:?}"))),
            }
        }
    };

    match result {
        Ok(file) => {
            std::fs::create_dir_all(&out).map_err(|e| CliError::usage(e.to_string()))?;
            let path = out.join(format!("matroid_seed{seed}.json"));
            std::fs::write(
                &path,
                file.to_json().map_err(|e| CliError::usage(e.to_string()))?,
            )
            .map_err(|e| CliError::usage(e.to_string()))?;
            manifest.record_artifact(&path, 1);
            manifest
                .set_verdicts(json!({"accepted": true}))
                .map_err(|e| CliError::usage(e.to_string()))?;
            write_manifest(&manifest, &out)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Err(e) => {
            let violation = match &e {
                subrank::Error::NotLarge {
                    indices,
                    value,
                    required,
                } => {
                    json!({"violating_indices": indices, "g": value, "required": required})
                }
                subrank::Error::EmptyFamily { indices, value } => {
                    json!({"violating_indices": indices, "g": value})
                }
                subrank::Error::PairwiseBound { i, j, bound, d } => {
                    json!({"violating_pair": [i, j], "bound": bound, "d": d})
                }
                _ => json!({"error": e.to_string()}),
            };
            manifest
                .set_verdicts(json!({"accepted": false, "violation": violation}))
                .map_err(|err| CliError::usage(err.to_string()))?;
            write_manifest(&manifest, &out)?;
            Err(e.into())
        }
    }
}

pub fn check_matroid(ctx: &Context, args: CheckMatroidArgs) -> CliResult<()> {
    ctx.check_keys(&["input"])?;
    let seed = ctx.seed()?;
    let out = ctx.out();
    let input = ctx.path_key("input", args.input)?;
    let text = std::fs::read_to_string(&input).map_err(|e| CliError::usage(format!("{e}")))?;
    let file = MatroidFile::from_json(&text)?;
    let spec = file.to_spec()?;
    let n = spec.ground_size();

    let mut verdicts = Map::new();
    let exhaustive = n <= EXHAUSTIVE_LIMIT;
    verdicts.insert("checked_exhaustively".into(), json!(exhaustive));
    let mut all_pass = true;
    if exhaustive {
        let axioms = check_matroid_axioms(|s| spec.is_independent(s), n)
            .map_err(|e| CliError::usage(e.to_string()))?;
        all_pass &= axioms.holds;
        verdicts.insert("axioms_pass".into(), json!(axioms.holds));
        if let Some(v) = axioms.violation {
            verdicts.insert("axiom_violation".into(), json!(format!("{v:?}")));
        }
        let uncrossing = check_uncrossing(&spec).map_err(|e| CliError::usage(e.to_string()))?;
        all_pass &= uncrossing.holds;
        verdicts.insert("uncrossing_pass".into(), json!(uncrossing.holds));
        let mut rank_ok = true;
        for mask in 0..1u64 << n {
            let s = ElementSet::from_mask(n, mask);
            if spec.rank(&s) != brute_rank(&spec, &s).map_err(|e| CliError::usage(e.to_string()))? {
                rank_ok = false;
                break;
            }
        }
        all_pass &= rank_ok;
        verdicts.insert("rank_equivalence_pass".into(), json!(rank_ok));
    } else {
        // Sampled spot check: greedy against brute force on small subsets.
        use rand::Rng;
        let mut rng = stream(seed, Stream::Trial, 0);
        let mut rank_ok = true;
        for _ in 0..50 {
            let size = rng.gen_range(0..=12usize.min(n));
            let s = sample_fixed_size(n, size, &mut rng);
            if spec.rank(&s) != brute_rank(&spec, &s).map_err(|e| CliError::usage(e.to_string()))? {
                rank_ok = false;
                break;
            }
        }
        all_pass &= rank_ok;
        verdicts.insert("rank_equivalence_sampled_pass".into(), json!(rank_ok));
    }

    let mut manifest = Manifest::new(
        "check-matroid",
        seed,
        json!({"input": input.display().to_string(), "n": n, "kind": file.kind}),
    )
    .map_err(|e| CliError::usage(e.to_string()))?;
    manifest
        .set_verdicts(Value::Object(verdicts))
        .map_err(|e| CliError::usage(e.to_string()))?;
    write_manifest(&manifest, &out)?;
    if all_pass {
        println!("all checks passed");
        Ok(())
    } else {
        Err(CliError::verdict("matroid checks failed; see manifest"))
    }
}

pub fn gen_expander(ctx: &Context, args: GenExpanderArgs) -> CliResult<()> {
    ctx.check_keys(&["k", "n", "d", "partitioned", "check-l", "check-eps"])?;
    let seed = ctx.seed()?;
    let out = ctx.out();
    let k = ctx.usize_key("k", args.k, Some(16))?;
    let n = ctx.usize_key("n", args.n, Some(384))?;
    let d = ctx.usize_key("d", args.d, Some(6))?;
    let partitioned = args.partitioned
        || ctx
            .config
            .get("partitioned")
            .and_then(|v| v.as_bool())
            .unwrap_or(false);
    let graph = if partitioned {
        sample_partitioned_expander(k, n, d, seed, None)?
    } else {
        sample_expander(k, n, d, seed)?
    };
    std::fs::create_dir_all(&out).map_err(|e| CliError::usage(e.to_string()))?;
    let path = out.join(format!("expander_seed{seed}.json"));
    let file = GraphFile::from_graph(&graph);
    std::fs::write(
        &path,
        file.to_json().map_err(|e| CliError::usage(e.to_string()))?,
    )
    .map_err(|e| CliError::usage(e.to_string()))?;

    let mut manifest = Manifest::new(
        "gen-expander",
        seed,
        json!({"k": k, "n": n, "d": d, "partitioned": partitioned}),
    )
    .map_err(|e| CliError::usage(e.to_string()))?;
    manifest.record_artifact(&path, k);

    let wants_check = args.check_l.is_some()
        || args.check_eps.is_some()
        || ctx.config.contains_key("check-l")
        || ctx.config.contains_key("check-eps");
    let mut passed = true;
    if wants_check {
        let l = ctx.usize_key("check-l", args.check_l, Some(2))?;
        let eps = ctx.f64_key("check-eps", args.check_eps, Some(0.5))?;
        let report = verify_expansion(&graph, &ExpansionParams::new(d, l, eps)?)?;
        passed = report.passes;
        manifest
            .set_verdicts(json!({
                "expander": report.passes,
                "worst_set": report.worst_set,
                "worst_neighborhood": report.worst_neighborhood,
                "worst_ratio": report.worst_ratio,
            }))
            .map_err(|e| CliError::usage(e.to_string()))?;
    }
    write_manifest(&manifest, &out)?;
    println!("wrote {}", path.display());
    if passed {
        Ok(())
    } else {
        Err(CliError::verdict("expansion verification failed"))
    }
}

pub fn learn(ctx: &Context, args: LearnArgs) -> CliResult<()> {
    ctx.check_keys(&[
        "mode", "samples", "n", "target", "p", "ell", "epsilon", "delta", "eta", "alpha",
    ])?;
    let seed = ctx.seed()?;
    let out = ctx.out();
    let mode = ctx
        .string_key("mode", args.mode, None)
        .map_err(|_| CliError::usage("learn needs a mode: product | general | robust | boolean"))?;
    let epsilon = ctx.f64_key("epsilon", args.epsilon, Some(0.1))?;
    let delta = ctx.f64_key("delta", args.delta, Some(0.1))?;

    let samples: Vec<LabeledSample>;
    let n: usize;
    if let Ok(path) = ctx.path_key("samples", args.samples.clone()) {
        n = ctx.usize_key("n", args.n, None)?;
        samples = learn::read_samples_file(&path, n)?;
    } else {
        let target_spec = ctx
            .string_key("target", args.target.clone(), None)
            .map_err(|_| {
                CliError::usage("learn needs --samples FILE with --n, or --target SPEC")
            })?;
        let target = parse_target(&target_spec)?;
        n = target.ground_size();
        let default_ell =
            match mode.as_str() {
                "general" | "robust" => separator_sample_size(n, epsilon, delta),
                "boolean" => vc_consistent_sample_size(n, epsilon, delta),
                // Zero-aware product-distribution sample count:
                // n·ln(n/delta)/epsilon + 12·ln(1/delta).
                _ => ((n as f64) * (n as f64 / delta).ln() / epsilon + 12.0 * (1.0 / delta).ln())
                    .ceil() as usize,
            };
        let ell = ctx.usize_key("ell", args.ell, Some(default_ell))?;
        let p = ctx.f64_key("p", args.p, Some(0.5))?;
        let dist = ProductDistribution::uniform(n, p)?;
        let mut rng = stream(seed, Stream::Trial, 0);
        samples = (0..ell)
            .map(|_| {
                let s = dist.sample(&mut rng);
                let v = target.eval(&s);
                LabeledSample::new(s, v).expect("target values are finite")
            })
            .collect();
    }

    let hypothesis = match mode.as_str() {
        "product" => {
            let eta = ctx.f64_key("eta", args.eta, Some(1.0))?;
            learn::learn_product_eta(&samples, epsilon, eta)?
        }
        "general" => learn::learn_general(&samples, seed)?,
        "robust" => {
            let alpha = ctx.f64_key("alpha", args.alpha, Some(1.0))?;
            learn::learn_general_robust(&samples, alpha, seed)?
        }
        "boolean" => learn::learn_boolean(&samples)?,
        other => return Err(CliError::usage(format!("unknown learn mode {other:?}"))),
    };

    std::fs::create_dir_all(&out).map_err(|e| CliError::usage(e.to_string()))?;
    let path = out.join(format!("hypothesis_{mode}_seed{seed}.json"));
    let file = HypothesisFile::from_hypothesis(&hypothesis);
    std::fs::write(
        &path,
        file.to_json().map_err(|e| CliError::usage(e.to_string()))?,
    )
    .map_err(|e| CliError::usage(e.to_string()))?;
    let mut manifest = Manifest::new(
        "learn",
        seed,
        json!({"mode": mode, "n": n, "samples": samples.len(), "epsilon": epsilon, "delta": delta}),
    )
    .map_err(|e| CliError::usage(e.to_string()))?;
    manifest.record_artifact(&path, 1);
    manifest
        .set_verdicts(json!({"trained": true}))
        .map_err(|e| CliError::usage(e.to_string()))?;
    write_manifest(&manifest, &out)?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn evaluate(ctx: &Context, args: EvaluateArgs) -> CliResult<()> {
    ctx.check_keys(&["hypothesis", "target", "p", "alpha", "test-size"])?;
    let seed = ctx.seed()?;
    let out = ctx.out();
    let hyp_path = ctx.path_key("hypothesis", args.hypothesis)?;
    let text = std::fs::read_to_string(&hyp_path).map_err(|e| CliError::usage(e.to_string()))?;
    let hypothesis = HypothesisFile::from_json(&text)?.to_hypothesis()?;
    let target_spec = ctx.string_key("target", args.target, None)?;
    let target = parse_target(&target_spec)?;
    let n = target.ground_size();
    if hypothesis.ground_size() != n {
        return Err(CliError::usage(format!(
            "hypothesis ground size {} does not match target {n}",
            hypothesis.ground_size()
        )));
    }
    let p = ctx.f64_key("p", args.p, Some(0.5))?;
    let alpha = ctx.f64_key("alpha", args.alpha, Some((n as f64 + 1.0).sqrt()))?;
    let test_size = ctx.usize_key("test-size", args.test_size, Some(2000))?;
    let dist = SubsetDistribution::Product(ProductDistribution::uniform(n, p)?);
    let eval = pmac_evaluate(&hypothesis, &target, &dist, alpha, test_size, seed);

    let rows: Vec<Vec<String>> = eval
        .factor_quantiles
        .iter()
        .map(|(q, v)| vec![format!("{q}"), format!("{v}")])
        .collect();
    let (csv_path, row_count) = write_csv(
        &out,
        &format!("evaluate_seed{seed}.csv"),
        &["quantile", "factor"],
        &rows,
    )
    .map_err(|e| CliError::usage(e.to_string()))?;
    let mut manifest = Manifest::new(
        "evaluate",
        seed,
        json!({"target": target_spec, "p": p, "alpha": alpha, "test_size": test_size}),
    )
    .map_err(|e| CliError::usage(e.to_string()))?;
    manifest.record_artifact(&csv_path, row_count);
    manifest
        .set_verdicts(json!({"coverage": eval.coverage}))
        .map_err(|e| CliError::usage(e.to_string()))?;
    write_manifest(&manifest, &out)?;
    println!("coverage {:.4}", eval.coverage);
    Ok(())
}

pub fn concentration(ctx: &Context, args: ConcentrationArgs) -> CliResult<()> {
    ctx.check_keys(&["target", "p", "b", "t", "trials", "mean-alpha"])?;
    let seed = ctx.seed()?;
    let out = ctx.out();
    let target_spec = ctx.string_key("target", args.target, None)?;
    let f = parse_target(&target_spec)?;
    let n = f.ground_size();
    let p = ctx.f64_key("p", args.p, Some(0.5))?;
    let t = ctx.f64_key("t", args.t, Some(2.0))?;
    let trials = ctx.usize_key("trials", args.trials, Some(10_000))?;
    let dist = ProductDistribution::uniform(n, p)?;

    let b_spec = ctx.string_key("b", args.b, Some("median"))?;
    let b = if b_spec == "median" {
        let mut rng = stream(seed, Stream::Instance, 0);
        let mut pilot: Vec<f64> = (0..2001).map(|_| f.eval(&dist.sample(&mut rng))).collect();
        pilot.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
        pilot[pilot.len() / 2]
    } else {
        b_spec
            .parse::<f64>()
            .map_err(|_| CliError::usage("b must be a number or \"median\""))?
    };

    let tail = concentration_check(&f, &dist, b, t, trials, seed);
    // Raw per-trial values, re-drawn from the same substreams.
    let rows: Vec<Vec<String>> = (0..trials)
        .map(|trial| {
            let mut rng = stream(seed, Stream::Trial, trial as u64);
            vec![
                format!("{trial}"),
                format!("{}", f.eval(&dist.sample(&mut rng))),
            ]
        })
        .collect();
    let (csv_path, row_count) = write_csv(
        &out,
        &format!("concentration_seed{seed}.csv"),
        &["trial", "value"],
        &rows,
    )
    .map_err(|e| CliError::usage(e.to_string()))?;

    let mut verdicts = json!({
        "tail": {
            "b": tail.b, "t": tail.t,
            "lhs_product": tail.lhs_product,
            "bound": tail.bound,
            "standard_error": tail.standard_error,
            "pass": tail.pass,
        }
    });
    let mut pass = tail.pass;
    if let Some(alpha) = args
        .mean_alpha
        .or_else(|| ctx.config.get("mean-alpha").and_then(|v| v.as_f64()))
    {
        let mean = mean_concentration_check(&f, &dist, alpha, trials, seed);
        pass &= mean.pass;
        verdicts["mean"] = json!({
            "applicable": mean.applicable,
            "empirical_mean": mean.empirical_mean,
            "tail_prob": mean.tail_prob,
            "bound": mean.bound,
            "pass": mean.pass,
        });
    }
    let mut manifest = Manifest::new(
        "concentration",
        seed,
        json!({"target": target_spec, "p": p, "b": b, "t": t, "trials": trials}),
    )
    .map_err(|e| CliError::usage(e.to_string()))?;
    manifest.record_artifact(&csv_path, row_count);
    manifest
        .set_verdicts(verdicts)
        .map_err(|e| CliError::usage(e.to_string()))?;
    write_manifest(&manifest, &out)?;
    if pass {
        println!(
            "tail product {:.3e} within bound {:.3e}",
            tail.lhs_product, tail.bound
        );
        Ok(())
    } else {
        Err(CliError::verdict("a concentration bound was exceeded"))
    }
}

pub fn characterize(ctx: &Context, args: CharacterizeArgs) -> CliResult<()> {
    ctx.check_keys(&["target", "samples-per-k", "c-low", "c-high", "epsilon"])?;
    let seed = ctx.seed()?;
    let out = ctx.out();
    let target_spec = ctx.string_key("target", args.target, None)?;
    let f = parse_target(&target_spec)?;
    let band = BandConfig {
        c_low: ctx.f64_key("c-low", args.c_low, Some(400.0))?,
        c_high: ctx.f64_key("c-high", args.c_high, Some(2000.0))?,
        epsilon: ctx.f64_key("epsilon", args.epsilon, Some(0.1))?,
    };
    let samples_per_k = ctx.usize_key("samples-per-k", args.samples_per_k, Some(300))?;
    let curve = characterization_curve(&f, samples_per_k, band, seed)?;

    let rows: Vec<Vec<String>> = (0..=curve.n)
        .map(|k| {
            vec![
                format!("{k}"),
                format!("{}", curve.h_hat[k]),
                format!("{}", curve.h_se[k]),
                format!("{}", curve.coverage[k]),
            ]
        })
        .collect();
    let (csv_path, row_count) = write_csv(
        &out,
        &format!("characterize_seed{seed}.csv"),
        &["k", "h_hat", "h_se", "coverage"],
        &rows,
    )
    .map_err(|e| CliError::usage(e.to_string()))?;

    let min_coverage = curve.coverage[1..].iter().copied().fold(1.0f64, f64::min);
    let coverage_ok = min_coverage >= 1.0 - band.epsilon;
    let concavity_ok =
        curve.max_second_difference <= 0.0 || curve.max_second_difference_sigmas <= 3.0;
    let mut manifest = Manifest::new(
        "characterize",
        seed,
        json!({"target": target_spec, "samples_per_k": samples_per_k,
               "c_low": band.c_low, "c_high": band.c_high, "epsilon": band.epsilon}),
    )
    .map_err(|e| CliError::usage(e.to_string()))?;
    manifest.record_artifact(&csv_path, row_count);
    manifest
        .set_verdicts(json!({
            "min_coverage": min_coverage,
            "coverage_ok": coverage_ok,
            "max_second_difference": curve.max_second_difference,
            "max_second_difference_sigmas": curve.max_second_difference_sigmas,
            "concavity_ok": concavity_ok,
        }))
        .map_err(|e| CliError::usage(e.to_string()))?;
    write_manifest(&manifest, &out)?;
    if coverage_ok && concavity_ok {
        println!("min coverage {min_coverage:.3}, curvature within noise");
        Ok(())
    } else {
        Err(CliError::verdict("characterization verdicts failed"))
    }
}

pub fn lower_bound(ctx: &Context, args: LowerBoundArgs) -> CliResult<()> {
    ctx.check_keys(&[
        "k",
        "n",
        "d",
        "b",
        "tau",
        "train-size",
        "learner",
        "epsilon",
    ])?;
    let seed = ctx.seed()?;
    let out = ctx.out();
    let k = ctx.usize_key("k", args.k, Some(64))?;
    let n = ctx.usize_key("n", args.n, Some(512))?;
    let d = ctx.usize_key("d", args.d, Some(8))?;
    let b = ctx.i64_key("b", args.b, Some(6))?;
    let tau = ctx.usize_key("tau", args.tau, Some(2))?;
    let train_size = ctx.usize_key("train-size", args.train_size, Some(32))?;
    let learner = match ctx
        .string_key("learner", args.learner, Some("general"))?
        .as_str()
    {
        "general" => LearnerChoice::General,
        "product" => LearnerChoice::Product {
            epsilon: ctx.f64_key("epsilon", args.epsilon, Some(0.1))?,
        },
        other => return Err(CliError::usage(format!("unknown learner {other:?}"))),
    };
    let outcome = lower_bound_experiment(k, n, d, b, tau, learner, train_size, seed)?;

    let rows = vec![vec![
        format!("{}", outcome.train_coverage),
        format!("{}", outcome.held_out),
        format!("{}", outcome.miss_fraction),
        format!("{}", outcome.threshold_factor),
        format!("{}", outcome.expansion_verified),
    ]];
    let (csv_path, row_count) = write_csv(
        &out,
        &format!("lower_bound_seed{seed}.csv"),
        &[
            "train_coverage",
            "held_out",
            "miss_fraction",
            "threshold_factor",
            "expansion_verified",
        ],
        &rows,
    )
    .map_err(|e| CliError::usage(e.to_string()))?;
    let sigma = if outcome.held_out > 0 {
        (0.25 / outcome.held_out as f64).sqrt()
    } else {
        0.0
    };
    let required = (1.0 - outcome.train_coverage) / 2.0 - 3.0 * sigma;
    let pass = outcome.expansion_verified && outcome.miss_fraction >= required;
    let mut manifest = Manifest::new(
        "lower-bound",
        seed,
        json!({"k": k, "n": n, "d": d, "b": b, "tau": tau, "train_size": train_size}),
    )
    .map_err(|e| CliError::usage(e.to_string()))?;
    manifest.record_artifact(&csv_path, row_count);
    manifest
        .set_verdicts(json!({
            "expansion_verified": outcome.expansion_verified,
            "train_coverage": outcome.train_coverage,
            "miss_fraction": outcome.miss_fraction,
            "required_miss_fraction": required,
            "pass": pass,
        }))
        .map_err(|e| CliError::usage(e.to_string()))?;
    write_manifest(&manifest, &out)?;
    if pass {
        println!(
            "miss fraction {:.3} ≥ required {:.3}",
            outcome.miss_fraction, required
        );
        Ok(())
    } else {
        Err(CliError::verdict(
            "lower-bound surrogate inequality not met (or expansion unverified)",
        ))
    }
}

pub fn hardness(ctx: &Context, cmd: HardnessCommand) -> CliResult<()> {
    match cmd {
        HardnessCommand::Sfmcc(args) => hardness_sfmcc(ctx, args),
        HardnessCommand::Stcut(args) => hardness_stcut(ctx, args),
        HardnessCommand::Vertexcover(args) => hardness_vertexcover(ctx, args),
    }
}

fn finish_demo(
    ctx: &Context,
    name: &str,
    params: Value,
    demo: &subrank::hardness::MinDemo,
    extra: Value,
) -> CliResult<()> {
    let seed = ctx.seed()?;
    let out = ctx.out();
    let rows = vec![vec![
        format!("{}", demo.brute.value),
        format!("{}", demo.predicted),
        format!("{}", demo.brute.exhaustive),
        format!("{}", demo.brute.candidates_checked),
        demo.brute
            .argmin
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" "),
    ]];
    let (csv_path, row_count) = write_csv(
        &out,
        &format!("{name}_seed{seed}.csv"),
        &[
            "brute_min",
            "predicted",
            "exhaustive",
            "candidates",
            "argmin",
        ],
        &rows,
    )
    .map_err(|e| CliError::usage(e.to_string()))?;
    let mut manifest =
        Manifest::new(name, seed, params).map_err(|e| CliError::usage(e.to_string()))?;
    manifest.record_artifact(&csv_path, row_count);
    let mut verdicts = json!({
        "brute_min": demo.brute.value,
        "predicted": demo.predicted,
        "exhaustive": demo.brute.exhaustive,
        "matches": demo.matches,
    });
    if let Value::Object(extra_map) = extra {
        for (k, v) in extra_map {
            verdicts[k] = v;
        }
    }
    manifest
        .set_verdicts(verdicts)
        .map_err(|e| CliError::usage(e.to_string()))?;
    write_manifest(&manifest, &out)?;
    if demo.matches {
        println!(
            "brute minimum {} matches predicted {}",
            demo.brute.value, demo.predicted
        );
        Ok(())
    } else {
        Err(CliError::verdict(format!(
            "brute minimum {} differs from predicted {}",
            demo.brute.value, demo.predicted
        )))
    }
}

fn hardness_sfmcc(ctx: &Context, args: SfmccArgs) -> CliResult<()> {
    ctx.check_keys(&["k", "n", "d", "b", "tau", "marked"])?;
    let seed = ctx.seed()?;
    let k = ctx.usize_key("k", args.k, Some(4))?;
    let n = ctx.usize_key("n", args.n, Some(12))?;
    let d = ctx.usize_key("d", args.d, Some(3))?;
    let b = ctx.i64_key("b", args.b, Some(2))?;
    let tau = ctx.usize_key("tau", args.tau, Some(2))?;
    let marked = parse_marked(&ctx.string_key("marked", args.marked, Some("0"))?)?;
    let graph = sample_expander(k, n, d, seed)?;
    let eps = b as f64 / (4.0 * d as f64);
    let l = tau.max(2 * tau - 2).min(k);
    let verified = verify_expansion(&graph, &ExpansionParams::new(d, l, eps)?)?.passes;
    let fam = build_family_mb(graph, b, d, tau, &marked)?;
    let demo = constrained_min_demo(&fam, seed)?;
    finish_demo(
        ctx,
        "hardness-sfmcc",
        json!({"k": k, "n": n, "d": d, "b": b, "tau": tau, "marked": marked}),
        &demo,
        json!({"expansion_verified": verified}),
    )
}

fn hardness_stcut(ctx: &Context, args: StcutArgs) -> CliResult<()> {
    ctx.check_keys(&["k", "d", "n", "b", "tau", "marked"])?;
    let seed = ctx.seed()?;
    let params = StCutParams {
        k: ctx.usize_key("k", args.k, Some(3))?,
        d: ctx.usize_key("d", args.d, Some(2))?,
        n: ctx.usize_key("n", args.n, Some(6))?,
        b: ctx.i64_key("b", args.b, Some(1))?,
        tau: ctx.usize_key("tau", args.tau, Some(2))?,
        seed,
    };
    let marked = parse_marked(&ctx.string_key("marked", args.marked, Some(""))?)?;
    let demo = st_cut_instance(&params, &marked)?;
    finish_demo(
        ctx,
        "hardness-stcut",
        json!({"k": params.k, "d": params.d, "n": params.n, "b": params.b,
               "tau": params.tau, "marked": marked}),
        &demo.demo,
        json!({"expansion_verified": demo.expansion_verified}),
    )
}

fn hardness_vertexcover(ctx: &Context, args: VertexcoverArgs) -> CliResult<()> {
    ctx.check_keys(&["n", "epsilon", "k"])?;
    let seed = ctx.seed()?;
    let params = VertexCoverParams {
        n: ctx.usize_key("n", args.n, Some(8))?,
        epsilon: ctx.f64_key("epsilon", args.epsilon, Some(0.2))?,
        k: ctx.usize_key("k", args.k, Some(2))?,
        seed,
    };
    let demo = vertex_cover_instance(&params)?;
    finish_demo(
        ctx,
        "hardness-vertexcover",
        json!({"n": params.n, "epsilon": params.epsilon, "k": params.k}),
        &demo.demo,
        json!({"ratio": demo.ratio, "cap_b": demo.cap_b, "cap_d": demo.cap_d}),
    )
}

pub fn describe(command: &str) -> CliResult<()> {
    let text = match command {
        "gen-matroid" => {
            "gen-matroid: sample and validate a matroid instance\n\
             --kind STRING    uncrossed | truncated | partition | pairwise | family-mb (default truncated)\n\
             --n INT          ground size (default 10)\n\
             --k INT          number of constraint sets (default 3)\n\
             --d INT          cardinality cap; family-mb default round(n^(1/3))\n\
             --b INT          capacity; family-mb default ceil(8*log2(k))\n\
             --tau INT        truncation level; family-mb default max(2, round(d/(4*log2(k))))\n\
             --set-size INT   size of each random constraint set (default max(n/2, 2))\n\
             --marked LIST    comma-separated marked indices for family-mb (default fair coins)\n\
             exit 1 with the violating index set in the manifest when validation fails"
        }
        "check-matroid" => {
            "check-matroid: re-validate an instance file and run the checkers\n\
             --input PATH     serialized instance (JSON)\n\
             exhaustive axioms/uncrossing/rank-equivalence when n fits the limit;\n\
             sampled greedy-vs-brute rank otherwise"
        }
        "gen-expander" => {
            "gen-expander: sample a left-regular bipartite graph\n\
             --k INT          left vertices (default 16)\n\
             --n INT          right vertices (default 384)\n\
             --d INT          degree (default 6 = ceil(ln(16)/0.5))\n\
             --partitioned    one neighbor per right block of size n/d\n\
             --check-l INT    verify expansion for |J| <= L (default 2)\n\
             --check-eps REAL expansion slack (default 0.5); lossless means eps < 1/2"
        }
        "learn" => {
            "learn MODE: train a learner (product | general | robust | boolean)\n\
             --samples PATH   CSV of set,value rows (hex bit-mask sets); needs --n\n\
             --target SPEC    draw training data instead: free:N | card:N:C | matroid:PATH | tabulated:PATH\n\
             --p REAL         product inclusion probability for drawn data (default 0.5)\n\
             --ell INT        sample count; general/robust default ceil((48n/eps)*ln(9n/(delta*eps)))\n\
             --epsilon REAL   accuracy (default 0.1)\n\
             --delta REAL     confidence (default 0.1)\n\
             --eta REAL       minimum nonzero target value, product mode (default 1)\n\
             --alpha REAL     robustness factor, robust mode (default 1)"
        }
        "evaluate" => {
            "evaluate: sandwich coverage of a hypothesis against a target\n\
             --hypothesis PATH  hypothesis JSON\n\
             --target SPEC      free:N | card:N:C | matroid:PATH | tabulated:PATH\n\
             --p REAL           product inclusion probability (default 0.5)\n\
             --alpha REAL       sandwich factor (default sqrt(n+1))\n\
             --test-size INT    test draws (default 2000)"
        }
        "concentration" => {
            "concentration: empirical tail-product check\n\
             --target SPEC     function under test\n\
             --p REAL          product inclusion probability (default 0.5)\n\
             --b VALUE|median  pivot (default: pilot-run median)\n\
             --t REAL          deviation in units of sqrt(b) (default 2)\n\
             --trials INT      Monte-Carlo draws (default 10000)\n\
             --mean-alpha REAL also check the mean-concentration bound\n\
             bound: P(f < b - t*sqrt(b)) * P(f >= b) <= exp(-t^2/4), 3-sigma slack"
        }
        "characterize" => {
            "characterize: empirical univariate curve with band coverage\n\
             --target SPEC        function under test\n\
             --samples-per-k INT  draws per size (default 300)\n\
             --c-low REAL         lower band constant (default 400)\n\
             --c-high REAL        upper band constant (default 2000)\n\
             --epsilon REAL       band miss allowance (default 0.1)\n\
             band at size k: [h(k)/(c_low*ln(1/eps)), c_high*ln(1/eps)*h(k)]"
        }
        "lower-bound" => {
            "lower-bound: planted-rank learning experiment\n\
             --k INT          planted sets (default 64)\n\
             --n INT          ground size (default 512)\n\
             --d INT          planted size / cap (default 8)\n\
             --b INT          marked rank (default 6)\n\
             --tau INT        truncation level (default 2)\n\
             --train-size INT training draws (default 32)\n\
             --learner STRING general | product (default general)\n\
             verdict: held-out miss fraction >= (1 - train_coverage)/2 - 3*sigma"
        }
        "hardness" => {
            "hardness SUBCOMMAND: brute-force optimum vs predicted value\n\
             sfmcc:       --k --n --d --b --tau --marked   (min rank over |S| >= d)\n\
             stcut:       --k --d --n --b --tau --marked   (min rank over minimal path cuts)\n\
             vertexcover: --n --epsilon --k                (min rank over minimal covers;\n\
                          b = ceil((3+eps)*n/8), d = n/2, ratio d/b > 4/3 - eps)"
        }
        "describe" => "describe COMMAND: print a command's parameter schema",
        other => {
            return Err(CliError::usage(format!("unknown command {other:?}")));
        }
    };
    println!("{text}");
    Ok(())
}
