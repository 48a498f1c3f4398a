//! Seeded invariant suites behind `verify`.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Value};

use wordlogic::finba::{dual_of_inclusion, Carrier, FinBA};
use wordlogic::layers::{check_depth, check_monotone, FragmentSpec};
use wordlogic::logic::{equiv_witness, models_in, parse, Registry};
use wordlogic::random::{self, FormulaShape, Rand};
use wordlogic::regular::{quotient_closure, syntactic_stamp, FinMonoid};
use wordlogic::report::Report;
use wordlogic::semidirect::{
    compile_layer, compile_models_dfa, component_dfa, decompose, sdp, verify_t2, Biaction, Component,
    MonoidVariety,
};
use wordlogic::substitution::{check_substitution_principle, check_tower, GammaQ};
use wordlogic::varcode::{lift_delta, lift_delta_transported, Codec};
use wordlogic::words::{embed_marked, unembed, Alphabet, Context, MarkedWord};
use wordlogic::{Caps, Error, Result};

use crate::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Words,
    Finba,
    Logic,
    Substitution,
    Varcode,
    Semidirect,
    Layers,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Words => "words",
            Suite::Finba => "finba",
            Suite::Logic => "logic",
            Suite::Substitution => "substitution",
            Suite::Varcode => "varcode",
            Suite::Semidirect => "semidirect",
            Suite::Layers => "layers",
            Suite::All => "all",
        }
    }
}

pub struct Config {
    pub alphabet: Alphabet,
    pub maxlen: usize,
    pub seed: u64,
    pub caps: Caps,
    pub registry: Registry,
}

impl Config {
    fn rng(&self, suite: Suite) -> Rand {
        // independent streams per suite, so one suite replays on its own
        random::rng(self.seed.wrapping_mul(31).wrapping_add(suite as u64))
    }

    fn replay(&self, suite: Suite) -> String {
        format!(
            "verify --suite {} --alphabet {} --maxlen {} --seed {}",
            suite.name(),
            self.alphabet.symbols().join(","),
            self.maxlen,
            self.seed
        )
    }
}

fn shape() -> FormulaShape {
    FormulaShape::new(&["E", "E1", "mod[2,0]"], &["<", "succ"], 2, 6)
}

fn words(cfg: &Config) -> Result<Vec<Report>> {
    let a = &cfg.alphabet;
    let ctx = Context::new(["x", "y"])?;
    let bound = cfg.maxlen.min(5);
    let carrier = Carrier::new(a, &ctx, bound);
    let mut r = Report::new("marked_word_round_trips").param("bound", bound);
    for p in carrier.points() {
        let text = p.render(a, &ctx);
        if MarkedWord::parse(&text, a, &ctx)? != *p {
            r.fail(json!({ "law": "parse after render", "word": text }));
        }
        if unembed(&embed_marked(p, &ctx, &ctx)?, &ctx).as_ref() != Some(p) {
            r.fail(json!({ "law": "unembed after embed", "word": text }));
        }
    }
    for w in a.words_up_to(bound) {
        if a.parse_word(&a.render(&w))?.0 != w {
            r.fail(json!({ "law": "parse after render", "word": a.render(&w) }));
        }
    }
    r.stat("points", carrier.len());
    Ok(vec![r])
}

fn finba(cfg: &Config) -> Result<Vec<Report>> {
    let mut rng = cfg.rng(Suite::Finba);
    let carrier = Carrier::new(&cfg.alphabet, &Context::single("x"), cfg.maxlen.min(4));
    let n = carrier.len();
    let mut out = Vec::new();
    for trial in 0..10 {
        let gens: Vec<_> = (0..2 + trial % 4).map(|_| random::subset(&mut rng, n, 0.5)).collect();
        let mut r = Report::new("finba_laws").param("trial", trial);
        let b = FinBA::generate(&carrier, &gens, &cfg.caps)?;
        let mut seen = carrier.full();
        seen.clear();
        for atom in b.atoms() {
            if atom.is_clear() || !seen.is_disjoint(atom) {
                r.fail(json!({ "law": "atoms are nonempty and disjoint" }));
            }
            seen.union_with(atom);
        }
        if seen != carrier.full() {
            r.fail(json!({ "law": "atoms cover the carrier" }));
        }
        if gens.iter().any(|g| !b.contains(g)) {
            r.fail(json!({ "law": "generators belong to the algebra" }));
        }
        if !FinBA::generate(&carrier, b.atoms(), &cfg.caps)?.same_as(&b) {
            r.fail(json!({ "law": "atoms regenerate the algebra" }));
        }
        let sub = FinBA::generate(&carrier, &gens[..1], &cfg.caps)?;
        let dual = dual_of_inclusion(&sub, &b)?;
        for (i, atom) in b.atoms().iter().enumerate() {
            if !atom.is_subset(&sub.atoms()[dual.apply(i)]) {
                r.fail(json!({ "law": "dual of inclusion", "atom": i }));
            }
        }
        r.stat("atoms", b.n_atoms());
        out.push(r);
    }
    Ok(out)
}

fn logic(cfg: &Config) -> Result<Vec<Report>> {
    let mut rng = cfg.rng(Suite::Logic);
    let reg = &cfg.registry;
    let a = &cfg.alphabet;
    let ctx = Context::single("x");
    let bound = cfg.maxlen.min(5);
    let carrier = Carrier::new(a, &ctx, bound);
    let mut out = Vec::new();
    for _ in 0..20 {
        let f = random::formula(&mut rng, a, &["x"], &shape(), reg);
        let mut r = Report::new("formula_laws").param("formula", f.to_string());
        if parse(&f.to_string())? != f {
            r.fail(json!({ "law": "parse after display", "formula": f.to_string() }));
        }
        if let Some(w) = equiv_witness(&f, &f.simplify(), a, &ctx, bound, reg)? {
            r.fail(json!({ "law": "simplify", "formula": f.to_string(), "point": w.render(a, &ctx) }));
        }
        let d = compile_models_dfa(&f, a, &ctx, reg, &cfg.caps)?;
        let set = models_in(&carrier, &f, reg)?;
        for (i, p) in carrier.points().iter().enumerate() {
            if d.accepts(&embed_marked(p, &ctx, &ctx)?.0) != set.contains(i) {
                r.fail(json!({ "law": "compiled automaton", "formula": f.to_string(), "point": carrier.render(i) }));
                break;
            }
        }
        out.push(r);
    }
    Ok(out)
}

fn substitution(cfg: &Config) -> Result<Vec<Report>> {
    let mut rng = cfg.rng(Suite::Substitution);
    let reg = &cfg.registry;
    let shape = FormulaShape::new(&["E", "mod[2,0]"], &["<"], 1, 5);
    let bound = cfg.maxlen.min(6);
    let gamma = GammaQ::new(&["E", "mod[2,0]"]);
    let mut out = Vec::new();
    for _ in 0..10 {
        let d = random::delta(&mut rng, &cfg.alphabet, "x", 3, bound, &shape, reg, &cfg.caps)?;
        let psi = random::gamma_sentence(&mut rng, &gamma, d.atom_alphabet());
        let gens: Vec<String> = d.generators().iter().map(|g| g.to_string()).collect();
        out.push(d.check_atoms().param("generators", &gens));
        out.push(
            check_substitution_principle(&gamma, &d, &psi, reg)?
                .param("generators", &gens)
                .param("psi", psi.to_string()),
        );
    }
    let budget = GammaQ::new(&["E"]).with_budget(1);
    for _ in 0..2 {
        let chain = random::chain(&mut rng, &cfg.alphabet, "x", bound.min(5), &shape, reg, &cfg.caps)?;
        let gens: Vec<String> = chain[2].generators().iter().map(|g| g.to_string()).collect();
        out.push(check_tower(&budget, &chain, reg, &cfg.caps)?.param("generators", gens));
    }
    Ok(out)
}

fn varcode(cfg: &Config) -> Result<Vec<Report>> {
    let mut rng = cfg.rng(Suite::Varcode);
    let reg = &cfg.registry;
    let a = &cfg.alphabet;
    let bound = cfg.maxlen.min(4);
    let codec = Codec::new(a, &Context::single("x"), &Context::empty(), reg)?;
    let mut out = Vec::new();
    for _ in 0..10 {
        let f = random::formula(&mut rng, a, &["x"], &shape(), reg);
        out.push(codec.roundtrip_check(Some(&f), None, bound, reg)?);
    }
    let shape = FormulaShape::new(&["E"], &["<"], 1, 4);
    let params = Context::single("x1");
    for _ in 0..4 {
        let gens: Vec<_> = (0..2)
            .map(|_| random::formula(&mut rng, a, &["x", "x1"], &shape, reg))
            .collect();
        let names: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
        let d = wordlogic::substitution::DeltaAlgebra::with_params(a, &params, "x", gens, bound, reg, &cfg.caps)?;
        let lift = lift_delta(&d, reg, &cfg.caps)?;
        let mut r = lift.report.clone().param("generators", &names);
        let t = lift_delta_transported(&d, reg, &cfg.caps)?;
        if !t.lifted.algebra().same_as(lift.lifted.algebra()) {
            r.fail(json!({ "law": "transported lift", "generators": names }));
        }
        out.push(r);
    }
    Ok(out)
}

fn semidirect(cfg: &Config) -> Result<Vec<Report>> {
    let mut rng = cfg.rng(Suite::Semidirect);
    let reg = &cfg.registry;
    let caps = &cfg.caps;
    let a = &cfg.alphabet;
    let marked = a.extended(&Context::single("x"));
    let mut out = Vec::new();

    let mut r = Report::new("marked_universe_monoid");
    let stamp = syntactic_stamp(&component_dfa(&marked, Component::Marked), caps)?;
    let m = stamp.monoid();
    let zero = m.zero();
    let ok = m.size() == 3
        && m.is_commutative()
        && zero.is_some()
        && (0..a.len()).all(|l| {
            let mk = stamp.image(2 * l + 1);
            stamp.image(2 * l) == m.identity() && Some(m.mul(mk, mk)) == zero && Some(mk) != zero
        });
    if !ok {
        r.fail(serde_json::to_value(m).expect("serializable"));
    }
    out.push(r);

    let mut r = Report::new("sdp_laws");
    let z2 = FinMonoid::cyclic(2)?;
    let s = z2.direct_product(&z2);
    let swap = Biaction::new(z2.clone(), 4, vec![(0..4).collect(), vec![0, 2, 1, 3]], vec![(0..4).collect(); 2])?;
    for b in [Biaction::trivial(z2.clone(), 4), swap] {
        let p = sdp(&s, &b)?;
        if let Err(e) = p.monoid().verify_laws() {
            r.fail(json!(e.to_string()));
        }
    }
    out.push(r);

    let varieties = [
        MonoidVariety::new("trivial", FinMonoid::trivial()),
        MonoidVariety::new("exists", FinMonoid::boolean_or()),
        MonoidVariety::new("parity", FinMonoid::cyclic(2)?),
    ];
    let bound = cfg.maxlen.min(5);
    let mut instances = vec![("marked universe".to_string(), component_dfa(&marked, Component::Marked))];
    for i in 0..6 {
        let g = random::marked_generator(&mut rng, &marked, 3);
        instances.push((format!("random generator {i}: {}", serde_json::to_string(&g).expect("serializable")), g));
    }
    let mut skipped = 0;
    for (name, g) in instances {
        let d = quotient_closure(&marked, &[g], caps)?;
        let dd = match decompose(a, &d, caps) {
            Ok(dd) => dd,
            Err(Error::Hypothesis(_)) | Err(Error::CapExceeded { .. }) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        // keep instances at desk scale: V(X) has |N|^|X| generating morphisms
        if dd.n_x1() > 6 || dd.m().size() > 12 {
            skipped += 1;
            continue;
        }
        for v in &varieties {
            match verify_t2(&dd, v, bound, caps) {
                Ok(r) => out.push(r.param("instance", &name).param("variety", &v.name)),
                Err(Error::CapExceeded { .. }) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }

    let ctx = Context::single("x");
    let carrier = Carrier::new(a, &ctx, cfg.maxlen.min(5));
    let inner = FormulaShape::new(&["E"], &["<"], 1, 4);
    for q in ["E", "E1", "mod[2,0]", "mod[3,1]"] {
        let quant = reg.quantifier(q)?;
        let mut r = Report::new("compile_layer").param("quantifier", q);
        for _ in 0..5 {
            let body = random::formula(&mut rng, a, &["x", "y"], &inner, reg);
            let f = wordlogic::logic::Formula::quant(q, "y", body.clone());
            let (d, _) = compile_layer(&quant, "y", &body, a, &ctx, reg, caps)?;
            let set = models_in(&carrier, &f, reg)?;
            if let Some(i) = (0..carrier.len())
                .find(|&i| d.accepts(&embed_marked(carrier.point(i), &ctx, &ctx).expect("valid").0) != set.contains(i))
            {
                r.fail(json!({ "formula": f.to_string(), "point": carrier.render(i) }));
            }
        }
        out.push(r);
    }
    let mut r = Report::new("majority_is_not_compilable");
    let maj = reg.quantifier("maj")?;
    let body = parse("P[a](y)")?;
    if !matches!(compile_layer(&maj, "y", &body, a, &ctx, reg, caps), Err(Error::NotCompilable(_))) {
        r.fail(json!("compile_layer accepted maj"));
    }
    out.push(r);
    if let Some(first) = out.first_mut() {
        first.stat("skipped_t2_instances", skipped);
    }
    Ok(out)
}

fn layers(cfg: &Config) -> Result<Vec<Report>> {
    let reg = &cfg.registry;
    let bound = cfg.maxlen.min(6);
    let max_depth = if cfg.alphabet.len() <= 2 { 2 } else { 1 };
    let mut out = Vec::new();
    for (qs, ps) in [(vec!["E"], vec!["<"]), (vec!["E", "mod[2,0]"], vec![])] {
        for depth in 1..=max_depth {
            let spec = FragmentSpec::new(&cfg.alphabet, &qs, &ps, depth, bound);
            out.push(check_depth(&spec, reg, &cfg.caps)?);
        }
    }
    out.push(check_depth(&FragmentSpec::new(&cfg.alphabet, &["E1"], &[], 1, bound), reg, &cfg.caps)?);
    let spec = FragmentSpec::new(&cfg.alphabet, &["E"], &["<"], max_depth - 1, bound);
    out.push(check_monotone(&spec, reg, &cfg.caps)?);
    Ok(out)
}

fn run_one(suite: Suite, cfg: &Config) -> Result<Vec<Report>> {
    let reports = match suite {
        Suite::Words => words(cfg)?,
        Suite::Finba => finba(cfg)?,
        Suite::Logic => logic(cfg)?,
        Suite::Substitution => substitution(cfg)?,
        Suite::Varcode => varcode(cfg)?,
        Suite::Semidirect => semidirect(cfg)?,
        Suite::Layers => layers(cfg)?,
        Suite::All => unreachable!("expanded by the caller"),
    };
    Ok(reports
        .into_iter()
        .map(|r| r.param("suite", suite.name()).param("replay", cfg.replay(suite)))
        .collect())
}

pub fn run(suite: Suite, cfg: &Config) -> Result<Outcome> {
    let selected = match suite {
        Suite::All => vec![
            Suite::Words,
            Suite::Finba,
            Suite::Logic,
            Suite::Substitution,
            Suite::Varcode,
            Suite::Semidirect,
            Suite::Layers,
        ],
        s => vec![s],
    };
    let mut reports = Vec::new();
    for s in selected {
        reports.extend(run_one(s, cfg)?);
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(text, "{} {} {}", if r.pass { "PASS" } else { "FAIL" }, r.params["suite"].as_str().unwrap_or(""), r.check);
        if let Some(w) = &r.counterexample {
            let _ = writeln!(text, "  witness: {w}");
            let _ = writeln!(text, "  replay: wordlogic {}", r.params["replay"].as_str().unwrap_or(""));
        }
    }
    let _ = writeln!(text, "{} checks, {} failed", reports.len(), failed);
    let json = json!({
        "checks": reports.len(),
        "failed": failed,
        "reports": reports.iter().map(|r| serde_json::to_value(r).expect("serializable")).collect::<Vec<Value>>(),
    });
    Ok(Outcome {
        pass: failed == 0,
        text,
        json,
    })
}
