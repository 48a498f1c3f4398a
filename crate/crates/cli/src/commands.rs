use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use wordlogic::finba::Carrier;
use wordlogic::layers::{compare_fragments, depth_direct, depth_fragment, FragmentSpec};
use wordlogic::logic::{equiv_witness, models, models_in, parse, satisfies, Formula, Registry};
use wordlogic::regular::{quotient_closure, syntactic_stamp, Dfa, FinMonoid, Stamp};
use wordlogic::semidirect::{compile_models_dfa, component_dfa, sdp, Biaction, Component};
use wordlogic::substitution::{check_transduction, substitute, DeltaAlgebra};
use wordlogic::varcode::Codec;
use wordlogic::words::{embed_marked, Alphabet, Context, MarkedWord};
use wordlogic::{Caps, Error, Result};

use crate::{suites, Cli, CodecArgs, Command, DeltaArgs, Outcome};

pub fn parse_alphabet(text: &str) -> Result<Alphabet> {
    if text.contains(',') || text.contains(char::is_whitespace) {
        Alphabet::new(text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()))
    } else {
        Alphabet::from_chars(text)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

pub fn registry(cli: &Cli) -> Result<Registry> {
    let mut reg = Registry::standard();
    if let Some(p) = &cli.registry {
        reg.load_json(&read(p)?)?;
    }
    Ok(reg)
}

fn formula(text: &str, reg: &Registry) -> Result<Formula> {
    let f = parse(text)?;
    reg.check(&f)?;
    Ok(f)
}

/// The given variable order, or the free variables sorted by name.
fn context(given: &Option<Vec<String>>, fs: &[&Formula]) -> Result<Context> {
    match given {
        Some(vars) => Context::new(vars.iter().cloned()),
        None => {
            let mut vars: Vec<String> = fs.iter().flat_map(|f| f.free_vars()).collect();
            vars.sort();
            vars.dedup();
            Context::new(vars)
        }
    }
}

fn delta(cli: &Cli, args: &DeltaArgs, reg: &Registry, caps: &Caps) -> Result<DeltaAlgebra> {
    let alphabet = parse_alphabet(&cli.alphabet)?;
    let gens = args
        .gens
        .iter()
        .map(|g| formula(g, reg))
        .collect::<Result<Vec<_>>>()?;
    let params = Context::new(args.params.iter().cloned())?;
    DeltaAlgebra::with_params(&alphabet, &params, &args.var, gens, cli.maxlen, reg, caps)
}

fn codec(cli: &Cli, args: &CodecArgs, reg: &Registry) -> Result<Codec> {
    let alphabet = parse_alphabet(&cli.alphabet)?;
    let x = Context::new(args.encode.iter().cloned())?;
    let y = Context::new(args.keep.iter().cloned())?;
    Codec::new(&alphabet, &x, &y, reg)
}

fn report_outcome(text: String, json: Value, report: wordlogic::report::Report) -> Outcome {
    let mut text = text;
    if !report.pass {
        let _ = writeln!(
            text,
            "FAIL {}: {}",
            report.check,
            report.counterexample.clone().unwrap_or(Value::Null)
        );
    }
    let mut json = json;
    json["report"] = serde_json::to_value(&report).expect("serializable");
    Outcome {
        pass: report.pass,
        text,
        json,
    }
}

pub fn monoid_table(m: &FinMonoid, names: &[String]) -> String {
    let w = names.iter().map(|n| n.chars().count()).max().unwrap_or(1).max(1);
    let mut s = format!("{:>w$} |", "·");
    for n in names {
        let _ = write!(s, " {n:>w$}");
    }
    s.push('\n');
    for a in 0..m.size() {
        let _ = write!(s, "{:>w$} |", names[a]);
        for b in 0..m.size() {
            let _ = write!(s, " {:>w$}", names[m.mul(a, b)]);
        }
        s.push('\n');
    }
    s
}

fn element_names(stamp: &Stamp, marked_universe: bool) -> Vec<String> {
    let m = stamp.monoid();
    if marked_universe && m.size() == 3 {
        let zero = m.zero();
        (0..3)
            .map(|e| {
                if e == m.identity() {
                    "e"
                } else if Some(e) == zero {
                    "z"
                } else {
                    "m"
                }
                .to_string()
            })
            .collect()
    } else {
        m.labels().to_vec()
    }
}

fn synmon_outcome(stamp: &Stamp, names: &[String]) -> Outcome {
    let m = stamp.monoid();
    let alphabet = stamp.alphabet();
    let mut text = format!("size {}\n", m.size());
    text.push_str(&monoid_table(m, names));
    let images: Vec<String> = (0..alphabet.len())
        .map(|a| format!("{} ↦ {}", alphabet.symbol(a), names[stamp.image(a)]))
        .collect();
    let _ = writeln!(text, "{}", images.join(", "));
    let json = json!({
        "size": m.size(),
        "elements": names,
        "identity": names[m.identity()],
        "table": (0..m.size()).map(|a| (0..m.size()).map(|b| names[m.mul(a, b)].clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "images": (0..alphabet.len()).map(|a| json!([alphabet.symbol(a), names[stamp.image(a)]])).collect::<Vec<_>>(),
        "commutative": m.is_commutative(),
    });
    Outcome::ok(text, json)
}

fn dfa_text(d: &Dfa) -> String {
    let a = d.alphabet();
    let mut s = format!("states {} initial {}\n", d.n_states(), d.initial());
    for q in 0..d.n_states() {
        let moves: Vec<String> = (0..a.len())
            .map(|l| format!("{}→{}", a.symbol(l), d.step(q, l)))
            .collect();
        let _ = writeln!(s, "{q}{} {}", if d.is_accepting(q) { "*" } else { " " }, moves.join(" "));
    }
    s
}

#[derive(Deserialize)]
struct MonoidIn {
    table: Vec<Vec<usize>>,
    identity: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct SdpIn {
    #[serde(rename = "S")]
    s: MonoidIn,
    #[serde(rename = "M")]
    m: MonoidIn,
    lambda: Vec<Vec<usize>>,
    rho: Vec<Vec<usize>>,
}

fn build_monoid(m: MonoidIn) -> Result<FinMonoid> {
    let fm = FinMonoid::new(m.table, m.identity)?;
    match m.labels {
        Some(l) => fm.with_labels(l),
        None => Ok(fm),
    }
}

fn law_failure(what: &str, e: Error) -> Result<Outcome> {
    match e {
        Error::InvalidMonoid(msg) => Ok(Outcome {
            pass: false,
            text: format!("FAIL {what}: {msg}\n"),
            json: json!({"failure": what, "counterexample": msg}),
        }),
        other => Err(other),
    }
}

fn run_sdp(path: &Path) -> Result<Outcome> {
    let input: SdpIn = serde_json::from_str(&read(path)?).map_err(|e| Error::Invalid(e.to_string()))?;
    let s = match build_monoid(input.s) {
        Ok(s) => s,
        Err(e) => return law_failure("S", e),
    };
    let m = match build_monoid(input.m) {
        Ok(m) => m,
        Err(e) => return law_failure("M", e),
    };
    let n_s = s.size();
    let b = match Biaction::new(m, n_s, input.lambda, input.rho) {
        Ok(b) => b,
        Err(e) => return law_failure("biaction", e),
    };
    let p = match sdp(&s, &b) {
        Ok(p) => p,
        Err(e) => return law_failure("sdp", e),
    };
    let names = p.monoid().labels().to_vec();
    let text = format!("size {}\n{}", p.monoid().size(), monoid_table(p.monoid(), &names));
    Ok(Outcome::ok(text, serde_json::to_value(&p).expect("serializable")))
}

pub fn run(cli: &Cli, caps: &Caps) -> Result<Outcome> {
    let reg = registry(cli)?;
    let alphabet = parse_alphabet(&cli.alphabet)?;
    let l = cli.maxlen;
    match &cli.command {
        Command::Eval { formula: f, word, context: c } => {
            let f = formula(f, &reg)?;
            let ctx = context(c, &[&f])?;
            let mw = MarkedWord::parse(word, &alphabet, &ctx)?;
            let v = satisfies(&mw, &ctx, &f, &alphabet, &reg)?;
            Ok(Outcome::ok(format!("{v}\n"), json!({ "value": v })))
        }
        Command::Models { formula: f, context: c } => {
            let f = formula(f, &reg)?;
            let ctx = context(c, &[&f])?;
            let ms: Vec<String> = models(&f, &alphabet, &ctx, l, &reg)?
                .iter()
                .map(|m| m.render(&alphabet, &ctx))
                .collect();
            let text = ms.iter().map(|m| format!("{m}\n")).collect::<String>();
            Ok(Outcome::ok(text, json!({ "context": ctx.vars(), "count": ms.len(), "models": ms })))
        }
        Command::Equiv { left, right, context: c } => {
            let f = formula(left, &reg)?;
            let g = formula(right, &reg)?;
            let ctx = context(c, &[&f, &g])?;
            match equiv_witness(&f, &g, &alphabet, &ctx, l, &reg)? {
                None => Ok(Outcome::ok(
                    format!("equivalent on words of length ≤ {l}\n"),
                    json!({ "equivalent": true }),
                )),
                Some(w) => {
                    let w = w.render(&alphabet, &ctx);
                    Ok(Outcome {
                        pass: false,
                        text: format!("differ on {w}\n"),
                        json: json!({ "equivalent": false, "witness": w }),
                    })
                }
            }
        }
        Command::Atoms { delta: d } => {
            let d = delta(cli, d, &reg, caps)?;
            let sizes: Vec<usize> = d.algebra().atoms().iter().map(|a| a.count_ones(..)).collect();
            let mut text = String::new();
            let mut atoms = Vec::new();
            for (i, f) in d.atom_formulas().iter().enumerate() {
                let c = d.atom_alphabet().symbol(i);
                let _ = writeln!(text, "{c}  {f}  ({} points)", sizes[i]);
                atoms.push(json!({ "letter": c, "formula": f.to_string(), "points": sizes[i] }));
            }
            Ok(report_outcome(text, json!({ "atoms": atoms }), d.check_atoms()))
        }
        Command::Substitute { delta: d, psi } => {
            let d = delta(cli, d, &reg, caps)?;
            let psi = parse(psi)?;
            let s = substitute(&d, &psi)?;
            let r = check_transduction(&d, &psi, &s, &reg)?;
            Ok(report_outcome(format!("{s}\n"), json!({ "formula": s.to_string() }), r))
        }
        Command::Tau { delta: d, word } => {
            let d = delta(cli, d, &reg, caps)?;
            let w = alphabet.parse_word(word)?;
            let t = d.tau(&w)?;
            let out = d.atom_alphabet().render(&t.0);
            Ok(Outcome::ok(format!("{out}\n"), json!({ "word": out })))
        }
        Command::Encode { codec: c, formula: f } => {
            let codec = codec(cli, c, &reg)?;
            let f = formula(f, &reg)?;
            let e = codec.encode(&f)?;
            let r = codec.check_encode(&f, l, &reg)?;
            Ok(report_outcome(format!("{e}\n"), json!({ "formula": e.to_string() }), r))
        }
        Command::Decode { codec: c, formula: f } => {
            let codec = codec(cli, c, &reg)?;
            let f = formula(f, &reg)?;
            let d = codec.decode(&f)?;
            let r = codec.check_decode(&f, l, &reg)?;
            Ok(report_outcome(format!("{d}\n"), json!({ "formula": d.to_string() }), r))
        }
        Command::Synmon {
            marked_universe,
            formula: f,
            context: c,
            dfa,
        } => {
            let lang = if *marked_universe {
                let marked = alphabet.extended(&Context::single("x"));
                component_dfa(&marked, Component::Marked)
            } else if let Some(f) = f {
                let f = formula(f, &reg)?;
                let ctx = context(c, &[&f])?;
                compile_models_dfa(&f, &alphabet, &ctx, &reg, caps)?
            } else if let Some(p) = dfa {
                serde_json::from_str(&read(p)?).map_err(|e| Error::Invalid(e.to_string()))?
            } else {
                return Err(Error::Invalid("synmon needs --marked-universe, --formula or --dfa".into()));
            };
            let stamp = syntactic_stamp(&lang, caps)?;
            let names = element_names(&stamp, *marked_universe);
            Ok(synmon_outcome(&stamp, &names))
        }
        Command::QuotientClosure { gens, context: c } => {
            let fs = gens.iter().map(|g| formula(g, &reg)).collect::<Result<Vec<_>>>()?;
            let refs: Vec<&Formula> = fs.iter().collect();
            let ctx = context(c, &refs)?;
            let dfas = fs
                .iter()
                .map(|f| compile_models_dfa(f, &alphabet, &ctx, &reg, caps))
                .collect::<Result<Vec<_>>>()?;
            let ext = alphabet.extended(&ctx);
            let q = quotient_closure(&ext, &dfas, caps)?;
            let mut text = format!("{} atoms\n", q.n_atoms());
            let mut atoms = Vec::new();
            for (i, a) in q.atoms().iter().enumerate() {
                let w = a.shortest_word().map(|w| ext.render(&w)).unwrap_or_default();
                let _ = writeln!(text, "atom {i}: {} states, shortest {w}", a.n_states());
                atoms.push(json!({ "states": a.n_states(), "shortest": w }));
            }
            let closed = q.is_quotient_closed();
            Ok(Outcome {
                pass: closed,
                text,
                json: json!({ "atoms": atoms, "quotient_closed": closed }),
            })
        }
        Command::Compile { formula: f, context: c } => {
            let f = formula(f, &reg)?;
            let ctx = context(c, &[&f])?;
            let d = compile_models_dfa(&f, &alphabet, &ctx, &reg, caps)?;
            let carrier = Carrier::new(&alphabet, &ctx, l);
            let set = models_in(&carrier, &f, &reg)?;
            let mut witness = None;
            for (i, p) in carrier.points().iter().enumerate() {
                if d.accepts(&embed_marked(p, &ctx, &ctx)?.0) != set.contains(i) {
                    witness = Some(carrier.render(i));
                    break;
                }
            }
            let mut json = json!({ "dfa": d });
            let mut text = dfa_text(&d);
            if let Some(w) = &witness {
                let _ = writeln!(text, "FAIL automaton disagrees with the semantics on {w}");
                json["witness"] = json!(w);
            }
            Ok(Outcome {
                pass: witness.is_none(),
                text,
                json,
            })
        }
        Command::Sdp { input } => run_sdp(input),
        Command::Verify { suite } => {
            let cfg = suites::Config {
                alphabet,
                maxlen: l,
                seed: cli.seed,
                caps: *caps,
                registry: reg,
            };
            suites::run(*suite, &cfg)
        }
        Command::DepthFragment {
            quantifiers,
            predicates,
            depth,
            check,
        } => {
            let qs: Vec<&str> = quantifiers.iter().map(String::as_str).collect();
            let ps: Vec<&str> = predicates.iter().map(String::as_str).collect();
            let spec = FragmentSpec::new(&alphabet, &qs, &ps, *depth, l);
            let frag = depth_fragment(&spec, &reg, caps)?;
            let mut text = format!("{} atoms, {} generators\n", frag.ba.n_atoms(), frag.generators.len());
            for g in &frag.generators {
                let _ = writeln!(text, "  {g}");
            }
            let mut json = frag.dump();
            json["n_atoms"] = json!(frag.ba.n_atoms());
            if !*check {
                return Ok(Outcome::ok(text, json));
            }
            let direct = depth_direct(&spec, &reg, caps)?;
            let r = compare_fragments("depth", &frag, &direct);
            let _ = writeln!(text, "{} direct enumeration agrees", if r.pass { "PASS" } else { "FAIL" });
            Ok(report_outcome(text, json, r))
        }
    }
}
