use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};

use panache::axioms::{check_axioms, ia2_for_all_q, ia3, relevant_q};
use panache::ext::{
    block_to_hom_coords, e_p_class, e_p_in_w_minus1_end, end_to_wm1_coords, is_split, originates_from, quotient_class, total_class, ExtClass,
    OriginVerdict, SplitVerdict,
};
use panache::group::{free_graded_lie, GroupPresentation, Letter};
use panache::io::corpus::{corpus_instance, CorpusConfig};
use panache::io::{load_workspace, save_workspace, workspace_path, ObjectJson, WorkspaceDoc};
use panache::lie::{is_large_u, is_large_u_p, u_geq_of, u_of, u_p_of};
use panache::linalg::{Mat, Rat, Subspace};
use panache::mt::{build_four_dim_example, classify_three_dim, period_matrix_report, report_for, ClassifyOptions, MtCase, PeriodReport};
use panache::panachage::{
    blend, counterexample_search, pair_equivalent, theorem3_verify, BlendOutcome, EquivVerdict, SearchBounds, SearchPattern,
};
use panache::rep::{direct_sum, generated_subobject, gr_object, w_sub, RepObject};
use panache::suites::{run_suite, sample_subobjects_avoiding, SUITES};
use panache::{Error, Result};

use crate::{ClassifyArgs, Cli, Command, CorpusAction, SearchArgs, EXIT_OK, EXIT_VIOLATION};

/// Exit code and JSON report of a successful run.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

impl Outcome {
    fn ok(report: Value) -> Outcome {
        Outcome { code: EXIT_OK, report }
    }

    fn verdict(violation: bool, report: Value) -> Outcome {
        Outcome { code: if violation { EXIT_VIOLATION } else { EXIT_OK }, report }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report value serializes")
}

fn descending(s: &BTreeSet<i64>) -> Vec<i64> {
    s.iter().rev().copied().collect()
}

fn sparse(v: &[Rat]) -> Vec<(usize, Rat)> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

fn cocycle_json(e: &ExtClass) -> Value {
    let p = e.target.presentation();
    let m: Map<String, Value> = e.cocycle.iter().filter(|(_, v)| v.iter().any(|x| !x.is_zero())).map(|(&g, v)| (p.name(g).to_string(), to_value(&sparse(v)))).collect();
    Value::Object(m)
}

fn split_json(v: &SplitVerdict) -> Value {
    match v {
        SplitVerdict::Split { v } => json!({ "split": true, "witness": sparse(v) }),
        SplitVerdict::NonSplit { system, rhs, certificate } => {
            json!({ "split": false, "certificate": { "system": system, "rhs": rhs, "combination": certificate } })
        }
    }
}

fn origin_json(v: &OriginVerdict) -> Value {
    match v {
        OriginVerdict::Originates { u } => json!({ "originates": true, "invariant_lift": sparse(u) }),
        OriginVerdict::NotOriginating { system, rhs, certificate } => {
            json!({ "originates": false, "certificate": { "system": system, "rhs": rhs, "combination": certificate } })
        }
    }
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        x.extend(y);
    }
    a
}

fn e_p_mod_u_p(m: &RepObject, p: i64) -> Result<ExtClass> {
    let up = block_to_hom_coords(m, p, &u_p_of(m, p).space);
    quotient_class(&e_p_class(m, p)?, &up)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|_| Error::Input(format!("{what}: cannot parse {t:?}"))))
        .collect()
}

fn parse_range(s: &str) -> Result<std::ops::Range<u64>> {
    let (a, b) = s.split_once("..").ok_or_else(|| Error::Input(format!("seed range {s:?} must look like A..B")))?;
    let a: u64 = a.trim().parse().map_err(|_| Error::Input(format!("bad range start in {s:?}")))?;
    let b: u64 = b.trim().parse().map_err(|_| Error::Input(format!("bad range end in {s:?}")))?;
    if b < a {
        return Err(Error::Input(format!("empty seed range {s:?}")));
    }
    Ok(a..b)
}

fn parse_rat(s: &str) -> Result<Rat> {
    s.parse::<Rat>().map_err(|_| Error::Input(format!("cannot parse rational {s:?}")))
}

struct Ctx<'a> {
    cli: &'a Cli,
    path: std::path::PathBuf,
}

impl Ctx<'_> {
    fn load(&self) -> Result<WorkspaceDoc> {
        load_workspace(&self.path).map_err(|e| match e {
            Error::Io(io) => Error::Input(format!("cannot read workspace {}: {io}", self.path.display())),
            other => other,
        })
    }

    fn record(&self, doc: &mut WorkspaceDoc, argv: &[String], report: &Value) -> Result<()> {
        if self.cli.no_record {
            return Ok(());
        }
        let ts = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        doc.reports.push(json!({ "argv": argv, "seed": self.cli.seed, "result": report, "timestamp": ts }));
        save_workspace(doc, &self.path)
    }

    /// Appends to the workspace only when one is present and loads.
    fn record_if_present(&self, argv: &[String], report: &Value) -> Result<()> {
        if self.cli.no_record || !self.path.exists() {
            return Ok(());
        }
        match self.load() {
            Ok(mut doc) => self.record(&mut doc, argv, report),
            Err(_) => Ok(()),
        }
    }
}

pub(crate) fn run(cli: &Cli, argv: &[String]) -> Result<Outcome> {
    let ctx = Ctx { cli, path: workspace_path(cli.workspace.as_deref()) };
    let seed = cli.seed;
    let standalone = |out: Result<Outcome>| -> Result<Outcome> {
        let out = out?;
        ctx.record_if_present(argv, &out.report)?;
        Ok(out)
    };
    match &cli.command {
        Command::Validate => return validate(&ctx, argv),
        Command::ClassifyMt(a) => return standalone(classify_mt(a)),
        Command::ReportPeriods { args, four_dim } => return standalone(report_periods(args, *four_dim)),
        Command::SearchCounterexample(a) => return standalone(search(a)),
        Command::Corpus { action } => return standalone(corpus(action, seed)),
        _ => {}
    }
    let mut doc = ctx.load()?;
    let out = match &cli.command {
        Command::U { object, p, geq } => u_cmd(doc.object(object)?, *p, *geq),
        Command::Axioms { object, p, q } => Ok(axioms_cmd(doc.object(object)?, *p, *q)),
        Command::Ext { object, p, quotient_by } => ext_cmd(doc.object(object)?, *p, quotient_by.as_deref()),
        Command::Originates { class, from } => {
            let v = originates_from(doc.ext_class(class)?, doc.object(from)?)?;
            Ok(Outcome::ok(merge(json!({ "class": class, "from": from }), origin_json(&v))))
        }
        Command::Blend { pair, save_as } => blend_cmd(&mut doc, pair, save_as.as_deref()),
        Command::Equiv { pair1, pair2 } => equiv_cmd(&doc, pair1, pair2),
        Command::Theorem1 { object, samples } => theorem1(doc.object(object)?, *samples, seed),
        Command::Theorem2 { object, p, q } => theorem2(doc.object(object)?, *p, *q),
        Command::Theorem3 { object, p } => {
            let r = theorem3_verify(doc.object(object)?, *p)?;
            Ok(Outcome::verdict(!r.consistent(), merge(to_value(&r), json!({ "consistent": r.consistent(), "hypotheses_hold": r.hypotheses_hold() }))))
        }
        _ => unreachable!("standalone commands handled above"),
    }?;
    ctx.record(&mut doc, argv, &out.report)?;
    Ok(out)
}

fn validate(ctx: &Ctx, argv: &[String]) -> Result<Outcome> {
    match ctx.load() {
        Ok(mut doc) => {
            let report = json!({
                "valid": true,
                "objects": doc.objects.len(),
                "ext_classes": doc.ext_classes.len(),
                "pairs": doc.pairs.len(),
                "reports": doc.reports.len(),
            });
            ctx.record(&mut doc, argv, &report)?;
            Ok(Outcome::ok(report))
        }
        Err(Error::Input(msg)) if msg.starts_with("cannot read workspace") => Err(Error::Input(msg)),
        Err(e) => Ok(Outcome::verdict(true, json!({ "valid": false, "error": e.to_string() }))),
    }
}

fn u_cmd(m: &RepObject, p: Option<i64>, geq: Option<i64>) -> Result<Outcome> {
    Ok(Outcome::ok(match (p, geq) {
        (Some(p), _) => json!({ "p": p, "dim_u_p": u_p_of(m, p).dim(), "large": is_large_u_p(m, p) }),
        (None, Some(q)) => json!({ "q": q, "dim_u_geq": u_geq_of(m, q).dim() }),
        (None, None) => json!({ "dim_u": u_of(m).dim(), "large": is_large_u(m) }),
    }))
}

fn axioms_cmd(m: &RepObject, p: i64, q: i64) -> Outcome {
    let r = check_axioms(m, p, q);
    let tick = if r.primed { "'" } else { "" };
    let mut out = Map::new();
    out.insert("p".into(), json!(p));
    out.insert("q".into(), json!(q));
    out.insert("primed".into(), json!(r.primed));
    for (k, s) in r.j_weights.iter().enumerate() {
        out.insert(format!("J{}{tick}", k + 1), json!(descending(s)));
    }
    out.insert(format!("ia1{tick}"), json!(r.ia1));
    out.insert(format!("ia2{tick}"), json!(r.ia2));
    out.insert("ia3".into(), json!(r.ia3));
    out.insert("witnesses".into(), to_value(&r.witnesses));
    Outcome::ok(Value::Object(out))
}

fn ext_cmd(m: &RepObject, p: i64, quotient_by: Option<&str>) -> Result<Outcome> {
    let (e, label, sub) = match quotient_by {
        None => {
            let e = e_p_class(m, p)?;
            let z = Subspace::zero(e.target.dim());
            (e, "none".to_string(), z)
        }
        Some("up") => {
            let e = e_p_class(m, p)?;
            (e, "u_p".to_string(), block_to_hom_coords(m, p, &u_p_of(m, p).space))
        }
        Some("u") => (e_p_in_w_minus1_end(m, p)?, "u".to_string(), end_to_wm1_coords(m, &u_of(m).space)),
        Some(text) => {
            let e = e_p_class(m, p)?;
            let raw: Vec<Vec<Rat>> = serde_json::from_str(text).map_err(|err| Error::Input(format!("--quotient-by: expected `u`, `up` or a JSON list of vectors: {err}")))?;
            if let Some(v) = raw.iter().find(|v| v.len() != e.target.dim()) {
                return Err(Error::Input(format!("--quotient-by: vector of length {} in a target of dimension {}", v.len(), e.target.dim())));
            }
            let a = generated_subobject(&e.target, &raw);
            (e, "subobject generated by the given vectors".to_string(), a)
        }
    };
    let q = quotient_class(&e, &sub)?;
    let v = is_split(&q)?;
    let report = json!({
        "p": p,
        "target_dim": e.target.dim(),
        "cocycle": cocycle_json(&e),
        "quotient_by": label,
        "quotient_dim": sub.dim(),
        "quotient_basis": subspace_basis(&sub),
    });
    Ok(Outcome::ok(merge(report, split_json(&v))))
}

fn subspace_basis(s: &Subspace) -> Vec<Vec<(usize, Rat)>> {
    s.basis().iter().map(|v| sparse(v)).collect()
}

fn blend_cmd(doc: &mut WorkspaceDoc, name: &str, save_as: Option<&str>) -> Result<Outcome> {
    let pair = doc.pair(name)?.clone();
    match blend(&pair)? {
        BlendOutcome::Blended(d) => {
            let check = d.validate();
            let pieces: Vec<&str> = d.graded_pieces()?.iter().map(|v| v.as_str()).collect();
            let p = doc.presentation.clone();
            let corner: BTreeMap<String, Mat> = d.corner.iter().map(|(&g, m)| (p.name(g).to_string(), m.clone())).collect();
            let report = json!({
                "pair": name,
                "outcome": "blended",
                "dim": d.m().dim(),
                "diagram": check,
                "graded_pieces": pieces,
                "corner": corner,
                "object": ObjectJson::from_object(d.m()),
            });
            if let Some(n) = save_as {
                doc.insert_object(n, d.m().clone())?;
            }
            Ok(Outcome::verdict(!check.ok(), report))
        }
        BlendOutcome::Obstructed { yoneda, system, rhs, certificate } => Ok(Outcome::ok(json!({
            "pair": name,
            "outcome": "obstructed",
            "yoneda_vanishes": yoneda.vanishes(),
            "certificate": { "system": system, "rhs": rhs, "combination": certificate },
        }))),
    }
}

fn equiv_cmd(doc: &WorkspaceDoc, a: &str, b: &str) -> Result<Outcome> {
    let v = pair_equivalent(doc.pair(a)?, doc.pair(b)?)?;
    let base = json!({ "pair1": a, "pair2": b, "verdict": v.tag() });
    Ok(Outcome::ok(match &v {
        EquivVerdict::Equivalent(t) => merge(base, json!({ "g_b": t.g_b, "g_a": t.g_a, "g_c": t.g_c })),
        EquivVerdict::NotEquivalent(r) | EquivVerdict::Unknown(r) => merge(base, json!({ "reason": r })),
    }))
}

fn theorem1(m: &RepObject, samples: usize, seed: u64) -> Result<Outcome> {
    let t = total_class(m)?;
    let u = end_to_wm1_coords(m, &u_of(m).space);
    let main = is_split(&quotient_class(&t, &u)?)?;
    let mut violation = !main.is_split();
    let mut rows = Vec::new();
    for a in sample_subobjects_avoiding(&t.target, &u, samples, seed) {
        let v = is_split(&quotient_class(&t, &a)?)?;
        violation |= v.is_split();
        rows.push(merge(json!({ "dim": a.dim(), "basis": subspace_basis(&a) }), split_json(&v)));
    }
    let report = json!({
        "dim_u": u.dim(),
        "total_mod_u": split_json(&main),
        "requested_samples": samples,
        "samples_avoiding_u": rows,
        "violation": violation,
    });
    Ok(Outcome::verdict(violation, report))
}

fn theorem2(m: &RepObject, p: i64, q: Option<i64>) -> Result<Outcome> {
    let e = e_p_mod_u_p(m, p)?;
    match q {
        Some(q) if q > p => {
            let ax = check_axioms(m, p, q);
            let s = direct_sum(&w_sub(m, q), &gr_object(m))?;
            let o = originates_from(&e, &s)?;
            let violation = ax.ia2 && !o.originates();
            let report = json!({ "p": p, "q": q, "ia2'": ax.ia2, "violation": violation });
            Ok(Outcome::verdict(violation, merge(report, origin_json(&o))))
        }
        _ => {
            let qs = match q {
                Some(q) => vec![q],
                None => relevant_q(m, p),
            };
            let per_q: Vec<Value> = qs
                .iter()
                .map(|&q| {
                    let ax = check_axioms(m, p, q);
                    json!({ "q": q, "ia1": ax.ia1, "ia2": ax.ia2 })
                })
                .collect();
            let ia2_all = ia2_for_all_q(m, p);
            let ia3_holds = ia3(m).0;
            let v = is_split(&e)?;
            let violation = (ia2_all || ia3_holds) && !v.is_split();
            let report = json!({
                "p": p,
                "per_q": per_q,
                "ia2_all_q": ia2_all,
                "ia3": ia3_holds,
                "dim_u_p": u_p_of(m, p).dim(),
                "violation": violation,
            });
            Ok(Outcome::verdict(violation, merge(report, split_json(&v))))
        }
    }
}

fn classify_opts(a: &ClassifyArgs) -> Result<ClassifyOptions> {
    Ok(ClassifyOptions { r: parse_rat(&a.r)?, max_twist: a.max_twist, kummer_rank: a.kummer_rank })
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

fn classify_mt(a: &ClassifyArgs) -> Result<Outcome> {
    let r = classify_three_dim(a.n, a.k, &classify_opts(a)?)?;
    let mut report = to_value(&r.case);
    if !matches!(r.case, MtCase::Rejected(_)) {
        let extra = json!({
            "n": r.n,
            "k": r.k,
            "parameter_space": r.parameter_space,
            "name": r.name,
            "r": r.r.as_ref().map(|c| c.to_string()),
            "attached": r.attached,
            "representative": r.representative.as_ref().map(ObjectJson::from_object),
        });
        report = merge(report, extra);
    }
    if let Some(out) = &a.out {
        write_json(out, &report)?;
    }
    Ok(Outcome::ok(report))
}

fn periods_value(rep: &PeriodReport) -> Value {
    merge(to_value(rep), json!({ "text": rep.matrix.to_text() }))
}

fn report_periods(a: &ClassifyArgs, four_dim: bool) -> Result<Outcome> {
    let report = if four_dim {
        let ex = build_four_dim_example(&parse_rat(&a.r)?, a.kummer_rank)?;
        let rep = report_for(&ex.model, &ex.object, "four-dimensional example")?;
        merge(
            periods_value(&rep),
            json!({ "ia3": ex.ia3, "large": ex.large, "dim_u": ex.dim_u, "attached": ex.attached, "smallest_ia3_twist": ex.smallest_twist }),
        )
    } else {
        periods_value(&period_matrix_report(&classify_three_dim(a.n, a.k, &classify_opts(a)?)?)?)
    };
    if let Some(out) = &a.out {
        write_json(out, &report)?;
    }
    Ok(Outcome::ok(report))
}

fn search_pattern(a: &SearchArgs) -> Result<SearchPattern> {
    let weights: Vec<i64> = parse_list(&a.pattern, "--pattern")?;
    if weights.is_empty() {
        return Err(Error::Input("--pattern needs at least one weight".into()));
    }
    if let Some(w) = weights.iter().find(|&&w| w > 0 || w % 2 != 0) {
        return Err(Error::Input(format!("--pattern weight {w} is not an even non-positive integer")));
    }
    let degrees: Vec<i64> = parse_list(&a.degrees, "--degrees")?;
    if degrees.is_empty() || degrees.iter().any(|&d| d <= 0) {
        return Err(Error::Input("--degrees must be positive integers".into()));
    }
    let spread = weights.iter().max().unwrap() - weights.iter().min().unwrap();
    let presentation = if a.free {
        let letters: Vec<Letter> = degrees.iter().enumerate().map(|(i, &d)| Letter::new(format!("x{i}"), vec![d])).collect();
        free_graded_lie(&[-2], &letters, -spread.max(2))?
    } else {
        let ds: Vec<Vec<i64>> = degrees.iter().map(|&d| vec![d]).collect();
        GroupPresentation::abelian(vec![-2], &ds)?
    };
    Ok(SearchPattern { presentation: Arc::new(presentation), characters: weights.iter().map(|w| vec![-w / 2]).collect() })
}

fn search(a: &SearchArgs) -> Result<Outcome> {
    let pattern = search_pattern(a)?;
    let bounds = SearchBounds { seeds: parse_range(&a.seeds)?, density: a.density, max_found: a.max_found, workers: a.workers.max(1) };
    let out = counterexample_search(&pattern, &bounds)?;
    let violation = out.instances().iter().any(|f| f.is_theorem_violation());
    if let Some(path) = &a.save {
        let mut doc = WorkspaceDoc::new(pattern.presentation.clone());
        for f in out.instances() {
            doc.insert_object(&format!("found_{}", f.seed), f.object.clone())?;
        }
        save_workspace(&doc, path)?;
    }
    let report = json!({
        "pattern": pattern.weights(),
        "found": !out.instances().is_empty(),
        "log": out.log(),
        "instances": out.instances(),
        "theorem_violation": violation,
    });
    Ok(Outcome::verdict(violation, report))
}

fn corpus(action: &CorpusAction, seed: u64) -> Result<Outcome> {
    match action {
        CorpusAction::List => Ok(Outcome::ok(json!({ "suites": SUITES }))),
        CorpusAction::Run { suite, count, max_seeds, workers } => {
            let max = max_seeds.unwrap_or((*count as u64).saturating_mul(50).max(100));
            let r = run_suite(suite, seed, *count, max, (*workers).max(1))?;
            let failing: Vec<u64> = r.failures.iter().map(|f| f.seed).collect::<BTreeSet<_>>().into_iter().collect();
            let report = merge(to_value(&r), json!({ "complete": r.instances >= r.requested, "failing_seeds": failing }));
            Ok(Outcome::verdict(!r.failures.is_empty(), report))
        }
        CorpusAction::Generate { count, out, ia3 } => {
            std::fs::create_dir_all(out)?;
            let cfg = CorpusConfig { ia3_only: *ia3, ..CorpusConfig::default() };
            let mut written = Vec::new();
            let mut s = seed;
            let limit = seed.saturating_add((*count as u64).saturating_mul(50).max(100));
            while written.len() < *count && s < limit {
                match corpus_instance(s, &cfg) {
                    Ok(m) => {
                        let mut doc = WorkspaceDoc::new(m.pres_arc().clone());
                        doc.insert_object("m", m)?;
                        let file = out.join(format!("corpus_{s}.json"));
                        save_workspace(&doc, &file)?;
                        written.push(file.display().to_string());
                    }
                    Err(Error::Precondition(_)) => {}
                    Err(e) => return Err(e),
                }
                s += 1;
            }
            Ok(Outcome::ok(json!({ "written": written })))
        }
    }
}
