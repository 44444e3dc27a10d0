use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use vfrac::automorphism::{xi_apply, AutTuple, NormalizerMap};
use vfrac::classify::{check_witness, decide_iso, limit_pair, LimPair};
use vfrac::cocycle::{decompose_cocycle, exception_set, gamma, mu, p_cocycle, probe_set, CoboundaryCocycle, PCocycle};
use vfrac::group::enumerate_automorphisms;
use vfrac::{
    g_invert, g_multiply, jones_act, theta_inverse, theta_t, verify, Dyadic, Error, FiniteGroup, GElement, GroupMap,
    KElement, TreeRepresentative, Twist, VElement,
};

#[derive(Parser)]
#[command(name = "vfrac", version, about = "Exact arithmetic in Thompson's group V and twisted wreath products over finite groups")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Elements of V, written `domain:range:p1,...,pn`.
    #[command(subcommand)]
    V(VCmd),
    /// Finite coefficient groups.
    #[command(subcommand)]
    Group(GroupCmd),
    /// The limit pair (eventual image of the map, restricted map).
    Limg {
        #[arg(long)]
        group: String,
        #[arg(long)]
        map: String,
    },
    /// Decide whether two fraction groups are isomorphic. Exit 0 = yes, 1 = no.
    Isocheck {
        #[arg(long)]
        g1: String,
        #[arg(long)]
        a1: String,
        #[arg(long)]
        g2: String,
        #[arg(long)]
        a2: String,
        /// Print the witness (β, h) when the answer is yes.
        #[arg(long)]
        witness: bool,
    },
    /// Arithmetic in K ⋊ V, elements written `K * V`.
    #[command(subcommand)]
    G(GCmd),
    /// Between tree representatives `tree|g1,...` and finitely supported maps.
    #[command(subcommand)]
    Theta(ThetaCmd),
    #[command(subcommand)]
    Cocycle(CocycleCmd),
    #[command(subcommand)]
    Aut(AutCmd),
    /// Seeded invariant battery.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
}

#[derive(Subcommand)]
enum VCmd {
    Parse { v: String },
    Mul { v: String, w: String },
    Inv { v: String },
    Apply { v: String, x: String },
    /// log₂ of the right-hand slope at x, or the whole slope function.
    Slope { v: String, x: Option<String> },
    /// ℓ_v(x) = log₂ v′(v⁻¹x), or the whole function.
    Ell { v: String, x: Option<String> },
    /// F, T\F or V\T.
    Classify { v: String },
}

#[derive(Subcommand)]
enum GroupCmd {
    Check { group: String },
    Center { group: String },
    Aut { group: String },
}

/// `--group` plus the twisting automorphism `--alpha` (identity by default).
#[derive(Args)]
struct Twisting {
    #[arg(long)]
    group: String,
    #[arg(long, default_value = "@id")]
    alpha: String,
}

#[derive(Subcommand)]
enum GCmd {
    Mul {
        #[command(flatten)]
        t: Twisting,
        a: String,
        b: String,
    },
    Inv {
        #[command(flatten)]
        t: Twisting,
        a: String,
    },
    /// The Jones action π_v on a K element.
    Act {
        #[command(flatten)]
        t: Twisting,
        v: String,
        k: String,
    },
}

#[derive(Subcommand)]
enum ThetaCmd {
    To {
        #[command(flatten)]
        t: Twisting,
        rep: String,
    },
    From {
        #[command(flatten)]
        t: Twisting,
        k: String,
    },
}

#[derive(Subcommand)]
enum CocycleCmd {
    Pv { v: String },
    Fv { v: String },
    Gamma { v: String, x: String },
    Mu { v: String, x: String },
    /// Rebuild a cocycle from (ζ, f) or a named family, then split it again.
    Decompose {
        #[arg(long)]
        group: String,
        #[arg(long)]
        zeta: String,
        /// Finitely supported f in K format; the cocycle is s(ζ)·f·(f∘v⁻¹)⁻¹.
        #[arg(long, conflicts_with = "family")]
        f: Option<String>,
        /// `p` for the cocycle ζ^{p_v}.
        #[arg(long)]
        family: Option<String>,
        /// Points at which to print the recovered f (comma separated).
        #[arg(long)]
        at: Option<String>,
    },
}

#[derive(Subcommand)]
enum AutCmd {
    /// Apply E_ζ ∘ ad(f) ∘ A_{φ,β} to an element of the untwisted group.
    Apply {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "0")]
        zeta: String,
        #[arg(long, default_value = "")]
        f: String,
        #[arg(long, default_value = "0:0:1")]
        phi: String,
        #[arg(long, default_value = "@id")]
        beta: String,
        g: String,
    },
}

type Res<T> = std::result::Result<T, Error>;

struct Output {
    text: String,
    json: Value,
    code: u8,
}

fn out(text: impl Into<String>, json: Value) -> Output {
    Output {
        text: text.into(),
        json,
        code: 0,
    }
}

/// `@Name` for a bundled group, otherwise a group file.
fn load_group(arg: &str) -> Res<Arc<FiniteGroup>> {
    if let Some(name) = arg.strip_prefix('@') {
        return FiniteGroup::builtin(name)
            .map(Arc::new)
            .ok_or_else(|| Error::Parse(format!("unknown builtin group `{name}`")));
    }
    let text = fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
    Ok(Arc::new(FiniteGroup::parse(&text)?))
}

/// `@id`, `@inv`, `@triv`, `@ad:g`, `@pow:k`, an inline `map ...`, or a map file.
fn load_map(arg: &str, source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Res<GroupMap> {
    if let Some(spec) = arg.strip_prefix('@') {
        let same = || {
            if Arc::ptr_eq(source, target) {
                Ok(())
            } else {
                Err(Error::Parse(format!("`@{spec}` needs source = target")))
            }
        };
        let (kind, param) = spec.split_once(':').unwrap_or((spec, ""));
        return match kind {
            "id" => same().map(|_| GroupMap::identity(source)),
            "inv" => same().and_then(|_| GroupMap::inversion(source)),
            "triv" => GroupMap::new(source.clone(), target.clone(), vec![0; source.order()]),
            "ad" => same().and_then(|_| Ok(GroupMap::inner(source, source.element(param)?))),
            "pow" => {
                same()?;
                let k: i64 = param.parse().map_err(|_| Error::Parse(format!("bad power `{param}`")))?;
                GroupMap::power_map(source, k)
            }
            _ => Err(Error::Parse(format!("unknown builtin map `@{spec}`"))),
        };
    }
    if arg.trim_start().starts_with("map ") {
        return GroupMap::parse(arg, source, target);
    }
    let text = fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
    GroupMap::parse(&text, source, target)
}

fn twist(t: &Twisting) -> Res<Twist> {
    let g = load_group(&t.group)?;
    let alpha = load_map(&t.alpha, &g, &g)?;
    Twist::new(alpha)
}

fn parse_v(s: &str) -> Res<VElement> {
    s.parse()
}

fn parse_x(s: &str) -> Res<Dyadic> {
    s.parse()
}

fn names(g: &FiniteGroup, xs: impl IntoIterator<Item = usize>) -> Vec<String> {
    xs.into_iter().map(|x| g.name(x)).collect()
}

fn lim_json(l: &LimPair) -> Value {
    json!({
        "order": l.group.order(),
        "elements": names(&l.group, l.group.elements()),
        "auto": l.auto.images(),
        "n0": l.n0,
    })
}

fn run_v(cmd: VCmd) -> Res<Output> {
    Ok(match cmd {
        VCmd::Parse { v } => {
            let v = parse_v(&v)?;
            let text = v.to_string();
            out(
                text.clone(),
                json!({"v": text, "leaves": v.leaf_count(), "class": v.class().to_string()}),
            )
        }
        VCmd::Mul { v, w } => {
            let p = parse_v(&v)?.multiply(&parse_v(&w)?).to_string();
            out(p.clone(), json!({ "v": p }))
        }
        VCmd::Inv { v } => {
            let p = parse_v(&v)?.inverse().to_string();
            out(p.clone(), json!({ "v": p }))
        }
        VCmd::Apply { v, x } => {
            let y = parse_v(&v)?.apply(&parse_x(&x)?).to_string();
            out(y.clone(), json!({ "x": y }))
        }
        VCmd::Slope { v, x } => {
            let v = parse_v(&v)?;
            match x {
                Some(x) => {
                    let n = v.slope_at(&parse_x(&x)?);
                    out(n.to_string(), json!({ "slope": n }))
                }
                None => {
                    let f = v.slope_function().to_string();
                    out(f.clone(), json!({ "function": f }))
                }
            }
        }
        VCmd::Ell { v, x } => {
            let v = parse_v(&v)?;
            match x {
                Some(x) => {
                    let n = v.ell_at(&parse_x(&x)?);
                    out(n.to_string(), json!({ "ell": n }))
                }
                None => {
                    let f = v.ell_function().to_string();
                    out(f.clone(), json!({ "function": f }))
                }
            }
        }
        VCmd::Classify { v } => {
            let c = parse_v(&v)?.class().to_string();
            out(c.clone(), json!({ "class": c }))
        }
    })
}

fn run_group(cmd: GroupCmd) -> Res<Output> {
    Ok(match cmd {
        GroupCmd::Check { group } => {
            let g = load_group(&group)?;
            let text = format!("ok: order {}, {}", g.order(), if g.is_abelian() { "abelian" } else { "nonabelian" });
            out(
                text,
                json!({"ok": true, "order": g.order(), "abelian": g.is_abelian(), "elements": names(&g, g.elements())}),
            )
        }
        GroupCmd::Center { group } => {
            let g = load_group(&group)?;
            let c = names(&g, g.center());
            out(c.join(" "), json!({ "center": c }))
        }
        GroupCmd::Aut { group } => {
            let g = load_group(&group)?;
            let autos = enumerate_automorphisms(&g);
            let lines: Vec<String> = autos.iter().map(ToString::to_string).collect();
            let text = format!("{} automorphisms\n{}", autos.len(), lines.join("\n"));
            out(
                text,
                json!({"count": autos.len(), "automorphisms": autos.iter().map(|a| a.images()).collect::<Vec<_>>()}),
            )
        }
    })
}

fn run_g(cmd: GCmd) -> Res<Output> {
    Ok(match cmd {
        GCmd::Mul { t, a, b } => {
            let tw = twist(&t)?;
            let g = tw.group();
            let p = g_multiply(&tw, &GElement::parse(&a, g)?, &GElement::parse(&b, g)?).format(g);
            out(p.clone(), json!({ "g": p }))
        }
        GCmd::Inv { t, a } => {
            let tw = twist(&t)?;
            let g = tw.group();
            let p = g_invert(&tw, &GElement::parse(&a, g)?).format(g);
            out(p.clone(), json!({ "g": p }))
        }
        GCmd::Act { t, v, k } => {
            let tw = twist(&t)?;
            let g = tw.group();
            let p = jones_act(&tw, &parse_v(&v)?, &KElement::parse(&k, g)?).format(g);
            out(p.clone(), json!({ "k": p }))
        }
    })
}

fn run_theta(cmd: ThetaCmd) -> Res<Output> {
    Ok(match cmd {
        ThetaCmd::To { t, rep } => {
            let tw = twist(&t)?;
            let g = tw.group();
            let k = theta_t(&tw, &TreeRepresentative::parse(&rep, g)?).format(g);
            out(k.clone(), json!({ "k": k }))
        }
        ThetaCmd::From { t, k } => {
            let tw = twist(&t)?;
            let g = tw.group();
            let rep = theta_inverse(&tw, &KElement::parse(&k, g)?).format(g);
            out(rep.clone(), json!({ "rep": rep }))
        }
    })
}

fn run_cocycle(cmd: CocycleCmd) -> Res<Output> {
    Ok(match cmd {
        CocycleCmd::Pv { v } => {
            let p = p_cocycle(&parse_v(&v)?);
            let map: serde_json::Map<String, Value> = p.iter().map(|(x, n)| (x.to_string(), json!(n))).collect();
            out(p.to_string(), json!({ "p": map }))
        }
        CocycleCmd::Fv { v } => {
            let f: Vec<String> = exception_set(&parse_v(&v)?).iter().map(ToString::to_string).collect();
            out(f.join(" "), json!({ "fv": f }))
        }
        CocycleCmd::Gamma { v, x } => {
            let n = gamma(&parse_v(&v)?, &parse_x(&x)?);
            out(n.to_string(), json!({ "gamma": n }))
        }
        CocycleCmd::Mu { v, x } => {
            let n = mu(&parse_v(&v)?, &parse_x(&x)?);
            out(n.to_string(), json!({ "mu": n }))
        }
        CocycleCmd::Decompose {
            group,
            zeta,
            f,
            family,
            at,
        } => {
            let g = load_group(&group)?;
            let z = g.element(&zeta)?;
            let points: Vec<Dyadic> = match at {
                Some(s) => s.split(',').map(|p| parse_x(p.trim())).collect::<Res<_>>()?,
                None => probe_set().1,
            };
            let report = |zeta: usize, fx: Vec<usize>| {
                let pairs: Vec<String> = points.iter().zip(&fx).map(|(x, &v)| format!("{x}={}", g.name(v))).collect();
                let map: serde_json::Map<String, Value> =
                    points.iter().zip(&fx).map(|(x, &v)| (x.to_string(), json!(g.name(v)))).collect();
                out(
                    format!("zeta: {}\nf: {}", g.name(zeta), pairs.join(";")),
                    json!({"zeta": g.name(zeta), "f": map}),
                )
            };
            match family.as_deref() {
                Some("p") => {
                    let c = PCocycle { group: g.clone(), zeta: z };
                    let dec = decompose_cocycle(&c)?;
                    report(dec.zeta, points.iter().map(|x| dec.f(x)).collect())
                }
                Some(other) => return Err(Error::Parse(format!("unknown cocycle family `{other}`"))),
                None => {
                    let k = KElement::parse(f.as_deref().unwrap_or(""), &g)?;
                    let c = CoboundaryCocycle {
                        group: g.clone(),
                        zeta: z,
                        f: |x: &Dyadic| k.get(x),
                    };
                    let dec = decompose_cocycle(&c)?;
                    report(dec.zeta, points.iter().map(|x| dec.f(x)).collect())
                }
            }
        }
    })
}

fn run_aut(cmd: AutCmd) -> Res<Output> {
    let AutCmd::Apply {
        group,
        zeta,
        f,
        phi,
        beta,
        g: elem,
    } = cmd;
    let g = load_group(&group)?;
    let f = NormalizerMap::parse(&f, &g)?;
    let t = AutTuple::new(g.element(&zeta)?, f, parse_v(&phi)?, load_map(&beta, &g, &g)?)?;
    let r = xi_apply(&t, &GElement::parse(&elem, &g)?)?.format(&g);
    Ok(out(r.clone(), json!({ "g": r })))
}

fn run(cli: Cli) -> Res<Output> {
    match cli.command {
        Command::V(c) => run_v(c),
        Command::Group(c) => run_group(c),
        Command::Limg { group, map } => {
            let g = load_group(&group)?;
            let l = limit_pair(&load_map(&map, &g, &g)?)?;
            let text = format!(
                "order {}\nelements {}\nauto {}\nn0 {}",
                l.group.order(),
                names(&l.group, l.group.elements()).join(" "),
                l.auto,
                l.n0
            );
            Ok(out(text, lim_json(&l)))
        }
        Command::Isocheck {
            g1,
            a1,
            g2,
            a2,
            witness,
        } => {
            let (g1, g2) = (load_group(&g1)?, load_group(&g2)?);
            let (a1, a2) = (load_map(&a1, &g1, &g1)?, load_map(&a2, &g2, &g2)?);
            let d = decide_iso(&a1, &a2)?;
            let mut text = if d.isomorphic { "yes" } else { "no" }.to_string();
            let mut j = json!({
                "isomorphic": d.isomorphic,
                "left": lim_json(&d.left),
                "right": lim_json(&d.right),
            });
            if let (true, Some(w)) = (witness, &d.witness) {
                debug_assert!(check_witness(&a1, &a2, w)?);
                text.push('\n');
                text.push_str(&w.to_string());
                j["witness"] = json!({"beta": w.beta.images(), "h": w.h, "h_name": d.right.group.name(w.h)});
            }
            Ok(Output {
                text,
                json: j,
                code: if d.isomorphic { 0 } else { 1 },
            })
        }
        Command::G(c) => run_g(c),
        Command::Theta(c) => run_theta(c),
        Command::Cocycle(c) => run_cocycle(c),
        Command::Aut(c) => run_aut(c),
        Command::Verify { suite, seed, trials } => {
            let r = verify::run(&suite, seed, trials).ok_or_else(|| Error::Parse(format!("unknown suite `{suite}`")))?;
            eprintln!("wall time {:.3?}", r.wall_time);
            let mut text = format!(
                "suite {} seed {} trials {}: {}",
                r.suite,
                r.seed,
                r.trials,
                if r.passed() { "pass" } else { "FAIL" }
            );
            for f in &r.failures {
                text.push_str(&format!("\n  {} trial {} (seed {}): {}", f.suite, f.trial, f.seed, f.inputs));
            }
            let failures: Vec<Value> = r
                .failures
                .iter()
                .map(|f| json!({"suite": f.suite, "seed": f.seed, "trial": f.trial, "inputs": f.inputs}))
                .collect();
            Ok(Output {
                text,
                json: json!({"suite": r.suite, "seed": r.seed, "trials": r.trials, "passed": r.passed(), "failures": failures}),
                code: if r.passed() { 0 } else { 1 },
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(o) => {
            let body = match format {
                Format::Text => o.text,
                Format::Json => o.json.to_string(),
            };
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(io::stdout().lock(), "{body}");
            ExitCode::from(o.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
