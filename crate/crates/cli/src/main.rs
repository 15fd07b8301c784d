use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};
use stabkit::bridgeland::{self, BetaRegion, TiltParams};
use stabkit::curve::{self, SplitBundle};
use stabkit::fibration::{self, FibrationData};
use stabkit::rational::{self, int, Rational};
use stabkit::{chern, frobenius, stability, ChernVector, DivisorClass, Error, SurfaceLattice};

#[derive(Parser)]
#[command(name = "stabkit", version, about = "Exact stability computations on numerical surface lattices")]
struct Cli {
    /// Surface lattice JSON; defaults to the plane (gram [[1]], K = [-3], c2 = 3).
    #[arg(long, global = true)]
    surface: Option<PathBuf>,

    /// Add decimal renderings (15 significant digits) next to exact values.
    #[arg(long, global = true)]
    float: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Polarized {
    /// Polarization H, comma-separated coordinates (default [1] on rank one).
    #[arg(long, allow_hyphen_values = true)]
    h: Option<String>,

    /// Twisting class D (default 0).
    #[arg(long, allow_hyphen_values = true)]
    d: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Signature, Hodge index and Noether checks for the surface.
    Validate,
    /// Discriminants, Euler characteristic and slopes of a Chern vector.
    Chern {
        /// "ch0,c1..,ch2", inline JSON, or @file.json
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[command(flatten)]
        pol: Polarized,
    },
    /// Defect of the discriminant decomposition identity for v0 ⊂ v.
    Identity {
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        v0: String,
    },
    /// Pseudo-walls for v as CSV (Picard rank one).
    Walls {
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, default_value_t = 2)]
        rank_cap: u32,
        /// Range of β as lo:hi.
        #[arg(long, allow_hyphen_values = true, default_value = "-5:5")]
        region: String,
        #[command(flatten)]
        pol: Polarized,
    },
    /// Central charge and tilt slope at (α, β).
    Charge {
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[command(flatten)]
        pol: Polarized,
    },
    /// Discriminant of the Frobenius pushforward of a line bundle.
    Frobenius {
        #[arg(long)]
        p: i64,
        /// c1(L), default 0.
        #[arg(long, allow_hyphen_values = true)]
        l: Option<String>,
        #[command(flatten)]
        pol: Polarized,
    },
    /// Numerical Reider exceptions D in a coordinate box.
    Reider {
        #[arg(long, allow_hyphen_values = true)]
        l: String,
        #[arg(long)]
        d: i64,
        /// lo:hi per coordinate, comma-separated (default -5:5 each).
        #[arg(long = "box", allow_hyphen_values = true)]
        bounds: Option<String>,
    },
    /// Vanishing and global-generation thresholds on l.
    Thresholds {
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[command(flatten)]
        pol: Polarized,
    },
    /// Slope defect, relative Bogomolov bound and S_m coefficients.
    Fibration {
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        /// Use C1 × C2 → C2 with genera g1,g2 instead of --surface.
        #[arg(long)]
        product: Option<String>,
        /// Fibre class (with --surface).
        #[arg(long, allow_hyphen_values = true)]
        fiber: Option<String>,
        #[arg(long)]
        fiber_genus: Option<u32>,
        #[arg(long)]
        base_genus: Option<u32>,
        /// Polarization H (default: the section class on a product).
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
    },
    /// Genus-0 sweeps over split bundles.
    Curve {
        #[command(subcommand)]
        sweep: CurveSweep,
    },
}

#[derive(Subcommand)]
enum CurveSweep {
    /// Tensor slope bounds for all pairs with at most `max_rank` summands.
    Tensor {
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "-3:3")]
        degrees: String,
        #[arg(long, default_value_t = 4)]
        max_power: u32,
    },
    /// Surjectivity of H0(E) ⊗ H0(F) → H0(E ⊗ F) for degrees in 0..=max_degree.
    Butler {
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
        #[arg(long, default_value_t = 8)]
        max_degree: i64,
    },
}

enum Failure {
    Domain(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::DimensionMismatch { .. } | Error::NonSquareGram | Error::EmptyLattice => {
                Failure::Input(e.to_string())
            }
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn input_err(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn load_surface(path: Option<&Path>) -> CliResult<SurfaceLattice> {
    match path {
        None => Ok(SurfaceLattice::rank_one(1, -3, 3)),
        Some(p) => serde_json::from_str(&read(p)?).map_err(|e| input_err(format!("{}: {e}", p.display()))),
    }
}

fn parse_class(s: &str, rho: usize) -> CliResult<DivisorClass> {
    let coords = s
        .split(',')
        .map(|x| rational::parse(x.trim()))
        .collect::<stabkit::Result<Vec<_>>>()?;
    let d = DivisorClass::new(coords);
    if d.len() != rho {
        return Err(Error::DimensionMismatch {
            expected: rho,
            found: d.len(),
        }
        .into());
    }
    Ok(d)
}

fn parse_chern(s: &str, rho: usize) -> CliResult<ChernVector> {
    let from_json = |text: &str, origin: &str| -> CliResult<ChernVector> {
        let v: ChernVector = serde_json::from_str(text).map_err(|e| input_err(format!("{origin}: {e}")))?;
        if v.ch1.len() != rho {
            return Err(Error::DimensionMismatch {
                expected: rho,
                found: v.ch1.len(),
            }
            .into());
        }
        Ok(v)
    };
    let s = s.trim();
    if let Some(path) = s.strip_prefix('@') {
        let path = Path::new(path);
        from_json(&read(path)?, &path.display().to_string())
    } else if s.starts_with('{') {
        from_json(s, "inline Chern vector")
    } else {
        Ok(chern::parse_inline(s, rho)?)
    }
}

fn parse_interval(s: &str) -> CliResult<(Rational, Rational)> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| input_err(format!("expected lo:hi, found {s:?}")))?;
    Ok((rational::parse(lo.trim())?, rational::parse(hi.trim())?))
}

fn parse_int_interval(s: &str) -> CliResult<(i64, i64)> {
    let (lo, hi) = parse_interval(s)?;
    let to_int = |r: &Rational| -> CliResult<i64> {
        if !rational::is_integer(r) {
            return Err(input_err(format!("expected an integer, found {}", rational::format(r))));
        }
        r.to_integer()
            .try_into()
            .map_err(|_| input_err("integer out of range"))
    };
    Ok((to_int(&lo)?, to_int(&hi)?))
}

fn polarization(lat: &SurfaceLattice, h: Option<&str>) -> CliResult<DivisorClass> {
    match h {
        Some(h) => parse_class(h, lat.rho()),
        None if lat.rho() == 1 => Ok(DivisorClass::from_ints(&[1])),
        None => Err(input_err("--h is required when the Picard rank exceeds one")),
    }
}

fn twist_class(lat: &SurfaceLattice, d: Option<&str>) -> CliResult<DivisorClass> {
    match d {
        Some(d) => parse_class(d, lat.rho()),
        None => Ok(DivisorClass::zero(lat.rho())),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn str_value(r: &Rational) -> Value {
    Value::String(rational::format(r))
}

/// Adds `<key>_float` next to every exact rational (or array of them).
fn add_floats(v: &mut Value) {
    match v {
        Value::Object(map) => {
            let mut extra = Map::new();
            for (k, x) in map.iter_mut() {
                add_floats(x);
                if let Some(f) = float_rendering(x) {
                    extra.insert(format!("{k}_float"), f);
                }
            }
            map.extend(extra);
        }
        Value::Array(xs) => xs.iter_mut().for_each(add_floats),
        _ => {}
    }
}

fn float_rendering(v: &Value) -> Option<Value> {
    let one = |v: &Value| -> Option<Value> {
        let s = v.as_str()?;
        let r = rational::parse(s).ok()?;
        Some(Value::String(rational::to_decimal(&r)))
    };
    match v {
        Value::String(_) => one(v),
        Value::Array(xs) if !xs.is_empty() => xs.iter().map(one).collect::<Option<Vec<_>>>().map(Value::Array),
        _ => None,
    }
}

enum Output {
    Json(Value),
    Text(String),
}

fn run(cli: &Cli) -> CliResult<Output> {
    let lat = load_surface(cli.surface.as_deref())?;
    if let Command::Validate = cli.command {
        lat.validate()?;
        return Ok(Output::Json(json!({
            "rho": lat.rho(),
            "signature": lat.signature()?.to_string(),
            "k_squared": str_value(&lat.k_squared()),
            "c2": lat.c2(),
            "chi_structure_sheaf": str_value(&lat.chi_structure_sheaf()),
            "valid": true,
        })));
    }
    if !matches!(cli.command, Command::Fibration { product: Some(_), .. }) {
        lat.validate()?;
    }
    let rho = lat.rho();
    let out = match &cli.command {
        Command::Validate => unreachable!(),
        Command::Chern { v, pol } => {
            let v = parse_chern(v, rho)?;
            let h = polarization(&lat, pol.h.as_deref())?;
            let d = twist_class(&lat, pol.d.as_deref())?;
            json!({
                "ch": to_value(&v),
                "discriminant": str_value(&v.discriminant(&lat)?),
                "gen_discriminant": str_value(&v.gen_discriminant(&lat, &h)?),
                "euler_char": str_value(&v.euler_char(&lat)?),
                "mu": to_value(&v.mu(&lat, &h)?),
                "slope": to_value(&v.slope(&lat, &h, &d)?),
                "bogomolov_holds": stability::bogomolov_holds(&lat, &v)?,
            })
        }
        Command::Identity { v, v0 } => {
            let v = parse_chern(v, rho)?;
            let v0 = parse_chern(v0, rho)?;
            let xi = stability::xi(&v, &v0)?;
            let v1 = &v - &v0;
            json!({
                "v": to_value(&v),
                "v0": to_value(&v0),
                "v1": to_value(&v1),
                "discriminant_v": str_value(&v.discriminant(&lat)?),
                "discriminant_v0": str_value(&v0.discriminant(&lat)?),
                "discriminant_v1": str_value(&v1.discriminant(&lat)?),
                "xi": to_value(&xi),
                "xi_squared": str_value(&lat.square(&xi)?),
                "defect": str_value(&stability::discriminant_identity_defect(&lat, &v, &v0)?),
            })
        }
        Command::Walls { v, rank_cap, region, pol } => {
            let v = parse_chern(v, rho)?;
            let h = polarization(&lat, pol.h.as_deref())?;
            let d = twist_class(&lat, pol.d.as_deref())?;
            let (lo, hi) = parse_interval(region)?;
            let walls = stabkit::thread_pool()
                .install(|| bridgeland::pseudo_walls(&lat, &v, &h, &d, *rank_cap, &BetaRegion::new(lo, hi)))?;
            return Ok(Output::Text(bridgeland::walls_csv(&walls, cli.float)));
        }
        Command::Charge { v, alpha, beta, pol } => {
            let v = parse_chern(v, rho)?;
            let h = polarization(&lat, pol.h.as_deref())?;
            let d = twist_class(&lat, pol.d.as_deref())?;
            let params = TiltParams::new(&lat, rational::parse(alpha)?, rational::parse(beta)?, h, d)?;
            json!({
                "alpha": str_value(params.alpha()),
                "beta": str_value(params.beta()),
                "z": to_value(&bridgeland::central_charge(&lat, &v, &params)?),
                "nu": to_value(&bridgeland::tilt_slope(&lat, &v, &params)?),
                "heart_side": to_value(&bridgeland::heart_side(&lat, &v, &params)?),
                "positivity": to_value(&bridgeland::positivity_check(&lat, &v, &params)?),
            })
        }
        Command::Frobenius { p, l, pol } => {
            let h = polarization(&lat, pol.h.as_deref())?;
            let l = match l {
                Some(l) => parse_class(l, rho)?,
                None => DivisorClass::zero(rho),
            };
            to_value(&frobenius::counterexample_report(&lat, *p, &h, &l)?)
        }
        Command::Reider { l, d, bounds } => {
            let l = parse_class(l, rho)?;
            let bounds: Vec<(i64, i64)> = match bounds {
                Some(b) => b.split(',').map(parse_int_interval).collect::<CliResult<_>>()?,
                None => vec![(-5, 5); rho],
            };
            let found = stabkit::thread_pool().install(|| stability::reider_exceptions(&lat, &l, *d, &bounds))?;
            let rows = found
                .iter()
                .map(|c| {
                    Ok(json!({
                        "class": to_value(c),
                        "l_dot_d": str_value(&lat.pair(&l, c)?),
                        "d_squared": str_value(&lat.square(c)?),
                    }))
                })
                .collect::<stabkit::Result<Vec<_>>>()?;
            json!({ "l": to_value(&l), "d": d, "exceptions": rows })
        }
        Command::Thresholds { v, pol } => {
            let v = parse_chern(v, rho)?;
            let h = polarization(&lat, pol.h.as_deref())?;
            to_value(&stability::sun_thresholds(&lat, &v, &h)?)
        }
        Command::Fibration {
            v,
            product,
            fiber,
            fiber_genus,
            base_genus,
            h,
        } => {
            let fd = match product {
                Some(g) => {
                    let (g1, g2) = g
                        .split_once(',')
                        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                        .ok_or_else(|| input_err(format!("--product expects g1,g2, found {g:?}")))?;
                    FibrationData::product(g1, g2)
                }
                None => {
                    let (Some(f), Some(g), Some(gy)) = (fiber, fiber_genus, base_genus) else {
                        return Err(input_err("give --product, or --fiber with --fiber-genus and --base-genus"));
                    };
                    FibrationData::new(lat.clone(), parse_class(f, rho)?, *g, *gy)?
                }
            };
            let surface = fd.surface();
            let v = parse_chern(v, surface.rho())?;
            let h = match (h, product) {
                (Some(h), _) => parse_class(h, surface.rho())?,
                (None, Some(_)) => FibrationData::product_section(),
                (None, None) => polarization(surface, None)?,
            };
            to_value(&fibration::report(&fd, &v, &h)?)
        }
        Command::Curve { sweep } => curve_sweep(sweep)?,
    };
    Ok(Output::Json(out))
}

fn bundles(max_rank: usize, lo: i64, hi: i64) -> CliResult<Vec<SplitBundle>> {
    if max_rank == 0 || lo > hi {
        return Err(Failure::Domain("empty sweep range".into()));
    }
    fn go(len: usize, from: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<SplitBundle>) {
        if cur.len() == len {
            out.push(SplitBundle::new(cur.clone()).expect("nonempty"));
            return;
        }
        for x in from..=hi {
            cur.push(x);
            go(len, x, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for len in 1..=max_rank {
        go(len, lo, hi, &mut Vec::new(), &mut out);
    }
    Ok(out)
}

fn curve_sweep(sweep: &CurveSweep) -> CliResult<Value> {
    use rayon::prelude::*;
    match sweep {
        CurveSweep::Tensor {
            max_rank,
            degrees,
            max_power,
        } => {
            let (lo, hi) = parse_int_interval(degrees)?;
            let all = bundles(*max_rank, lo, hi)?;
            let mut failures = Vec::new();
            for e in &all {
                for f in &all {
                    let b = curve::check_tensor_bounds(&e.hn_profile(), &f.hn_profile(), &e.tensor(f).hn_profile(), 0, None);
                    if b.plus_gap != int(0) || b.minus_gap != int(0) {
                        failures.push(json!({ "e": to_value(e), "f": to_value(f), "bounds": to_value(&b) }));
                    }
                }
                for m in 1..=*max_power {
                    let power = e.tensor_power(m).hn_profile();
                    let b = curve::check_tensor_bounds(&e.hn_profile(), &e.hn_profile(), &e.tensor(e).hn_profile(), 0, Some((m, &power)));
                    if b.power_holds != Some(true) {
                        failures.push(json!({ "e": to_value(e), "m": m, "bounds": to_value(&b) }));
                    }
                }
            }
            Ok(json!({
                "bundles": all.len(),
                "pairs": all.len() * all.len(),
                "equalities_hold": failures.is_empty(),
                "failures": failures,
            }))
        }
        CurveSweep::Butler { max_rank, max_degree } => {
            let all = bundles(*max_rank, 0, *max_degree)?;
            let results = stabkit::thread_pool().install(|| {
                all.par_iter()
                    .map(|e| {
                        all.iter()
                            .map(|f| Ok((e, f, curve::butler_surjectivity_g0(e, f)?)))
                            .collect::<stabkit::Result<Vec<_>>>()
                    })
                    .collect::<stabkit::Result<Vec<_>>>()
            })?;
            let failures: Vec<Value> = results
                .into_iter()
                .flatten()
                .filter(|(_, _, ok)| !ok)
                .map(|(e, f, _)| json!({ "e": to_value(e), "f": to_value(f) }))
                .collect();
            Ok(json!({
                "pairs": all.len() * all.len(),
                "all_surjective": failures.is_empty(),
                "failures": failures,
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Output::Json(mut v)) => {
            if cli.float {
                add_floats(&mut v);
            }
            println!("{}", serde_json::to_string_pretty(&v).expect("JSON output"));
            ExitCode::SUCCESS
        }
        Ok(Output::Text(t)) => {
            print!("{t}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
