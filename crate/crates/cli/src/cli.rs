use std::{
    ffi::OsString,
    io::{self, Write},
    path::{Path, PathBuf},
};

use apf_core::{
    enumerate::{enumerate_candidates, EnumConfig},
    eval::{eval_formula, EvalError},
    fragment::normalize_strict_guards,
    interp::{verify_example_unsat, CandidateVerdict, Refuter},
    is_in_fragment,
    model::{is_a_side, PaperFamily},
    paper_model,
    stabilize::{maximal_ground_terms, StabError, StabilizationReport, Stabilizer, DEFAULT_EXTRA, DEFAULT_HORIZON},
    Formula, Model, Term,
};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::{json, parse::parse_script, samples, script::Script};

/// Exit status: success.
pub const EXIT_OK: i32 = 0;
/// Exit status: a checked property or fragment membership failed, or a
/// candidate survived.
pub const EXIT_FAILURE: i32 = 1;
/// Exit status: bad arguments, unreadable input or a parse error.
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "apf", version, about = "Array property fragment tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report fragment membership of every assertion.
    CheckFragment {
        file: PathBuf,
        /// Rewrite `j < t` and `t < j` guard literals before checking.
        #[arg(long)]
        rewrite_strict: bool,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate every assertion in a model.
    Eval {
        file: PathBuf,
        /// `paper:I` for the family member `M_I`, or a JSON model file.
        #[arg(long)]
        model: String,
        #[arg(long)]
        json: bool,
    },
    /// Check the model family, the diff axiom and the example's clash.
    VerifyPaper {
        #[arg(long, default_value_t = 200)]
        max_i: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Stabilization reports for every assertion and its ground subterms.
    Stabilize {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: u64,
        #[arg(long, default_value_t = DEFAULT_EXTRA)]
        extra: u64,
        #[arg(long)]
        json: bool,
    },
    /// Check the single assertion as a candidate interpolant.
    Refute {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: u64,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate shared fragment formulas and refute each one.
    Enumerate {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: u64,
        /// Leave `diff` out of the signature.
        #[arg(long)]
        no_diff: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Print the summary line only.
        #[arg(long)]
        quiet: bool,
        #[arg(long)]
        json: bool,
    },
}

struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            msg: e.to_string(),
        }
    }
}

type CmdResult = Result<i32, Failure>;

fn read_script(path: &Path) -> Result<Script, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    parse_script(&text).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))
}

fn load_model(source: &str) -> Result<Model, Failure> {
    if let Some(i) = source.strip_prefix("paper:") {
        let i: u64 = i
            .parse()
            .map_err(|_| Failure::usage(format!("bad model index `{i}`")))?;
        return Ok(paper_model(i));
    }
    let text = std::fs::read_to_string(source).map_err(|e| Failure::usage(format!("{source}: {e}")))?;
    json::parse_model(&text).map_err(|e| Failure::usage(format!("{source}: {e}")))
}

fn json_line(out: &mut dyn Write, v: &serde_json::Value) -> io::Result<()> {
    writeln!(out, "{}", serde_json::to_string(v).expect("values serialize"))
}

fn check_fragment(out: &mut dyn Write, file: &Path, rewrite: bool, as_json: bool) -> CmdResult {
    let script = read_script(file)?;
    let mut all = true;
    for (n, a) in script.assertions.iter().enumerate() {
        let f = if rewrite { normalize_strict_guards(a) } else { a.clone() };
        let v = is_in_fragment(&f);
        all &= v.member();
        if as_json {
            let mut obj = serde_json::json!({ "assertion": n + 1, "member": v.member() });
            if let Some(r) = v.reason {
                obj["reason"] = r.as_str().into();
                obj["location"] = v.location.to_string().into();
            }
            json_line(out, &obj)?;
        } else {
            writeln!(out, "assert {}: {v}", n + 1)?;
        }
    }
    Ok(if all { EXIT_OK } else { EXIT_FAILURE })
}

fn eval(out: &mut dyn Write, file: &Path, model: &str, as_json: bool) -> CmdResult {
    let script = read_script(file)?;
    let m = load_model(model)?;
    let mut code = EXIT_OK;
    for (n, a) in script.assertions.iter().enumerate() {
        let r = eval_formula(&m, a);
        if r.is_err() {
            code = EXIT_FAILURE;
        }
        if as_json {
            let obj = match &r {
                Ok(v) => serde_json::json!({ "assertion": n + 1, "value": v }),
                Err(e) => serde_json::json!({ "assertion": n + 1, "error": e.to_string() }),
            };
            json_line(out, &obj)?;
        } else {
            match r {
                Ok(v) => writeln!(out, "assert {}: {v}", n + 1)?,
                Err(e) => writeln!(out, "assert {}: error: {e}", n + 1)?,
            }
        }
    }
    Ok(code)
}

fn verify_paper(out: &mut dyn Write, max_i: u64, samples_n: usize, seed: u64) -> CmdResult {
    let (a, b) = (apf_core::interp::example_a(), apf_core::interp::example_b());
    let family = PaperFamily::new(max_i);
    let (mut even, mut even_ok, mut odd, mut odd_ok, mut exclusive) = (0u64, 0u64, 0u64, 0u64, true);
    for i in 0..=max_i {
        let m = family.get(i);
        let (va, vb) = match (eval_formula(&m, &a), eval_formula(&m, &b)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(e), _) | (_, Err(e)) => {
                return Err(Failure {
                    code: EXIT_FAILURE,
                    msg: e.to_string(),
                })
            }
        };
        if is_a_side(i) {
            even += 1;
            even_ok += va as u64;
            exclusive &= !vb;
        } else {
            odd += 1;
            odd_ok += vb as u64;
            exclusive &= !va;
        }
    }
    writeln!(out, "even⊨A: {even_ok}/{even}, odd⊨B: {odd_ok}/{odd}")?;
    writeln!(out, "even⊭B and odd⊭A: {}", if exclusive { "yes" } else { "no" })?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    for _ in 0..samples_n {
        let s = samples::random_array(&mut rng);
        let t = samples::random_partner(&mut rng, &s);
        passed += samples::diff_axiom_holds(&s, &t) as usize;
    }
    writeln!(out, "diff axiom: {passed}/{samples_n}")?;

    let clash = verify_example_unsat();
    match &clash {
        Ok(w) => writeln!(out, "clash: {} / {}", w.positive, w.negative)?,
        Err(e) => writeln!(out, "clash: {e}")?,
    }
    let ok = even_ok == even && odd_ok == odd && exclusive && passed == samples_n && clash.is_ok();
    Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
}

fn stabilize(out: &mut dyn Write, file: &Path, horizon: u64, extra: u64, as_json: bool) -> CmdResult {
    let script = read_script(file)?;
    let st = Stabilizer::new(horizon + extra);
    let mut code = EXIT_OK;
    let mut emit = |out: &mut dyn Write,
                    label: String,
                    subject: String,
                    r: Result<StabilizationReport, StabError>|
     -> io::Result<()> {
        match r {
            Ok(r) => {
                let ok = st.verify(&r, extra);
                if !ok {
                    code = EXIT_FAILURE;
                }
                if as_json {
                    let mut obj = json::report_to_json(&r);
                    obj["recheck"] = serde_json::json!({ "extra": extra, "ok": ok });
                    json_line(out, &obj)
                } else {
                    writeln!(
                        out,
                        "{label}{r}; recheck +{extra}: {}",
                        if ok { "ok" } else { "FAILED" }
                    )
                }
            }
            Err(e) => {
                code = EXIT_FAILURE;
                if as_json {
                    json_line(out, &serde_json::json!({ "subject": subject, "error": e.to_string() }))
                } else {
                    writeln!(out, "{label}{subject}: error: {e}")
                }
            }
        }
    };
    for (n, a) in script.assertions.iter().enumerate() {
        emit(
            out,
            format!("assert {}: ", n + 1),
            a.to_string(),
            st.stab_index_formula(a, horizon),
        )?;
        let mut seen = Vec::new();
        for t in maximal_ground_terms(a) {
            let parts: Vec<&Term> = match t {
                Term::App(op, args) if op.is_predicate() => args.iter().collect(),
                _ => vec![t],
            };
            for t in parts {
                if !seen.contains(&t) {
                    seen.push(t);
                    emit(out, "  ".to_string(), t.to_string(), st.stab_index_term(t, horizon))?;
                }
            }
        }
    }
    Ok(code)
}

fn verdict_line(out: &mut dyn Write, v: &CandidateVerdict, as_json: bool) -> io::Result<()> {
    if as_json {
        json_line(out, &json::verdict_to_json(v))
    } else {
        writeln!(out, "{v}")
    }
}

fn refute(out: &mut dyn Write, file: &Path, horizon: u64, as_json: bool) -> CmdResult {
    let script = read_script(file)?;
    let [c] = &script.assertions[..] else {
        return Err(Failure::usage(format!(
            "{}: expected exactly one assertion, found {}",
            file.display(),
            script.assertions.len()
        )));
    };
    let v = Refuter::new(horizon).check(c, horizon).map_err(|e| Failure {
        code: EXIT_FAILURE,
        msg: e.to_string(),
    })?;
    verdict_line(out, &v, as_json)?;
    Ok(if v.outcome.is_refuted() { EXIT_OK } else { EXIT_FAILURE })
}

/// Checks every candidate, in order, on `jobs` threads.
pub fn refute_all(candidates: &[Formula], horizon: u64, jobs: usize) -> Result<Vec<CandidateVerdict>, EvalError> {
    let refuter = Refuter::new(horizon);
    let check = |c: &Formula| refuter.check(c, horizon);
    if jobs <= 1 {
        return candidates.iter().map(check).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| candidates.par_iter().map(check).collect()),
        Err(_) => candidates.iter().map(check).collect(),
    }
}

fn enumerate(
    out: &mut dyn Write,
    size: usize,
    horizon: u64,
    no_diff: bool,
    jobs: usize,
    quiet: bool,
    as_json: bool,
) -> CmdResult {
    if size == 0 {
        return Err(Failure::usage("--size must be at least 1"));
    }
    let mut cfg = EnumConfig::new(size);
    cfg.include_diff = !no_diff;
    let candidates = enumerate_candidates(&cfg);
    let verdicts = refute_all(&candidates, horizon, jobs).map_err(|e| Failure {
        code: EXIT_FAILURE,
        msg: e.to_string(),
    })?;
    let mut refuted = 0;
    let mut max_witness = 0;
    for v in &verdicts {
        if v.outcome.is_refuted() {
            refuted += 1;
            max_witness = max_witness.max(v.witness.unwrap_or(0));
        }
        if !quiet {
            verdict_line(out, v, as_json)?;
        }
    }
    let survivors = verdicts.len() - refuted;
    writeln!(
        out,
        "candidates={} refuted={refuted} survivors={survivors} max-witness={max_witness}",
        verdicts.len()
    )?;
    Ok(if survivors == 0 { EXIT_OK } else { EXIT_FAILURE })
}

/// Runs the tool on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::CheckFragment {
            file,
            rewrite_strict,
            json,
        } => check_fragment(out, &file, rewrite_strict, json),
        Command::Eval { file, model, json } => eval(out, &file, &model, json),
        Command::VerifyPaper { max_i, samples, seed } => verify_paper(out, max_i, samples, seed),
        Command::Stabilize {
            file,
            horizon,
            extra,
            json,
        } => stabilize(out, &file, horizon, extra, json),
        Command::Refute { file, horizon, json } => refute(out, &file, horizon, json),
        Command::Enumerate {
            size,
            horizon,
            no_diff,
            jobs,
            quiet,
            json,
        } => enumerate(out, size, horizon, no_diff, jobs, quiet, json),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "apf: {}", f.msg);
            f.code
        }
    }
}
