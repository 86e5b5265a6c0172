use std::io::Read;

use ch2noid::ch2::{
    classify_isometry, classify_isometry_exact, discriminant, discriminant_exact, distance, herm_form,
    in_ch2_exact, preserves_form_exact, IsometryClass, Matrix21, DEFAULT_TOL,
};
use ch2noid::cusp::{
    check_mean_convexity, check_sup_bound, l2_tail_witness, make_subharmonic_sample, oscillation_a,
    StripGrid, SubharmonicSpec,
};
use ch2noid::exactnum::{CVec3, GaussianRational};
use ch2noid::nnoid::{build_higgs, classify_puncture, random_nnoid, trace_phi_squared, JordanType, NnoidSpec};
use ch2noid::stability::{
    admissibility, check_mixed_stability, family_stability, nnoid_degrees, StabilitySpec,
    Verdict, WeightSpec,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::certificate::Certificate;
use crate::GlobalOpts;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] ch2noid::Error),
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = Result<T, CliError>;

pub enum Outcome {
    Success,
    Negative,
}

fn read_json(path: &str) -> CliResult<Value> {
    let io = |source| CliError::Io {
        path: path.to_string(),
        source,
    };
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(io)?
    };
    Ok(serde_json::from_str(&text)?)
}

fn typed<T: DeserializeOwned>(v: &Value) -> CliResult<T> {
    Ok(T::deserialize(v)?)
}

fn write_json(g: &GlobalOpts, value: &impl Serialize) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match &g.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(g: &GlobalOpts, cert: &Certificate, success: bool) -> CliResult<Outcome> {
    write_json(g, cert)?;
    eprintln!("{}: {}", cert.command, cert.status);
    for c in cert.failed() {
        eprintln!("  failed: {}{}", c.name, c.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default());
    }
    Ok(if success { Outcome::Success } else { Outcome::Negative })
}

fn exact_only(g: &GlobalOpts, what: &str) -> CliResult<()> {
    if g.float {
        return Err(CliError::Usage(format!("{what} is exact only; --float is not supported")));
    }
    Ok(())
}

fn float_only(g: &GlobalOpts, what: &str) -> CliResult<()> {
    if g.exact {
        return Err(CliError::Usage(format!("{what} is floating only; --exact is not supported")));
    }
    Ok(())
}

pub fn nnoid_check(g: &GlobalOpts, path: &str) -> CliResult<Outcome> {
    exact_only(g, "nnoid check")?;
    let input = read_json(path)?;
    let spec: NnoidSpec = typed(&input)?;
    let (data, chart) = spec.normalize()?;
    let phi = build_higgs(&data);
    let n = data.n();

    let mut cert = Certificate::new("nnoid check", input, "exact");
    cert.check("block-off-diagonal", phi.is_block_off_diagonal(), None);
    cert.check("trace-phi-zero", phi.trace().is_zero(), None);
    cert.check("trace-phi-squared-zero", trace_phi_squared(&phi).is_zero(), None);
    cert.check("simple-poles", phi.has_only_simple_poles_at(data.punctures()), None);

    let reports = (0..n)
        .map(|i| classify_puncture(&data, &phi, i))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, r) in reports.iter().enumerate() {
        cert.check(format!("residue-{i}-methods-agree"), r.methods_agree, None);
        cert.check(
            format!("residue-{i}-type-ii"),
            r.jordan_type == Some(JordanType::Three),
            Some(format!("puncture {}", r.puncture)),
        );
        cert.check(format!("residue-{i}-flag"), r.flag_axioms_hold, None);
    }

    let family = family_stability(n)?;
    let (d1, d2) = nnoid_degrees(n)?;
    cert.check("degrees", (family.d1, family.d2) == (d1, d2), Some(format!("d1 = {d1}, d2 = {d2}")));
    cert.check(
        "stability",
        family.verdict == Verdict::Stable,
        Some(format!(
            "slope test {}, invariant subbundles {}",
            family.slope_verdict.as_str(),
            family.subbundle_verdict.as_str()
        )),
    );

    let chart_rows: Option<Vec<Vec<String>>> = (!chart.is_identity())
        .then(|| chart.0.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect());
    cert.result = json!({
        "chart": chart_rows,
        "splitting": phi.splitting(),
        "punctures": reports,
        "stability": family,
    });
    let success = cert.all_passed();
    cert.status = if cert.checks.iter().filter(|c| c.name != "stability").all(|c| c.passed) {
        family.verdict.as_str().to_string()
    } else {
        "failed".to_string()
    };
    finish(g, &cert, success)
}

pub fn nnoid_random(g: &GlobalOpts, n: usize) -> CliResult<Outcome> {
    exact_only(g, "nnoid random")?;
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let data = random_nnoid(n, &mut rng)?;
    write_json(g, &NnoidSpec::from_data(&data))?;
    eprintln!("nnoid random: n = {n}, seed = {}", g.seed);
    Ok(Outcome::Success)
}

pub fn stability_check(g: &GlobalOpts, path: &str) -> CliResult<Outcome> {
    exact_only(g, "stability check")?;
    let input = read_json(path)?;
    let spec: StabilitySpec = typed(&input)?;
    let surface = spec.surface()?;
    let data = spec.degree_data()?;
    let report = check_mixed_stability(&data, &surface)?;

    let mut cert = Certificate::new("stability check", input, "exact");
    for ineq in report.slope_form.iter().chain(&report.expanded_form) {
        cert.check(ineq.id, ineq.holds, Some(format!("{} < {}", ineq.lhs, ineq.rhs)));
    }
    let flags: Vec<Value> = data
        .weights
        .iter()
        .map(|w| {
            let (sum_is_integer, repeated) = admissibility(&w.alphas);
            json!({ "sum_is_integer": sum_is_integer, "has_repeated_weight": repeated })
        })
        .collect();
    cert.status = report.verdict.as_str().to_string();
    cert.result = json!({ "certificate": report, "admissibility": flags });
    finish(g, &cert, report.verdict == Verdict::Stable)
}

#[derive(Deserialize)]
struct RegionSpec {
    genus: u32,
    n: u32,
    #[serde(default)]
    weights: Vec<WeightSpec>,
    #[serde(default)]
    dmax: Option<i64>,
}

pub fn stability_region(g: &GlobalOpts, path: &str, dmax: Option<i64>) -> CliResult<Outcome> {
    exact_only(g, "stability region")?;
    let input = read_json(path)?;
    let spec: RegionSpec = typed(&input)?;
    let dmax = dmax
        .or(spec.dmax)
        .ok_or_else(|| CliError::Usage("dmax is required (input field or --dmax)".into()))?;
    if dmax < 0 {
        return Err(CliError::Usage("dmax must be nonnegative".into()));
    }
    let as_check = StabilitySpec {
        genus: spec.genus,
        n: spec.n,
        d1: 0,
        d2: 0,
        weights: spec.weights,
    };
    let surface = as_check.surface()?;
    let weights = as_check.weights()?;
    let region = ch2noid::stability::stability_region(&surface, &weights, dmax)?;

    let mut cert = Certificate::new("stability region", input, "exact");
    cert.status = format!("{} stable pairs", region.len());
    cert.result = json!({ "dmax": dmax, "stable": region });
    finish(g, &cert, true)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixInput {
    Bare(Vec<Vec<String>>),
    Wrapped { matrix: Vec<Vec<String>> },
}

pub fn ch2_classify(g: &GlobalOpts, path: &str) -> CliResult<Outcome> {
    let input = read_json(path)?;
    let rows = match typed::<MatrixInput>(&input)? {
        MatrixInput::Bare(rows) | MatrixInput::Wrapped { matrix: rows } => rows,
    };
    let exact = Matrix21::parse(&rows)?;
    let tol = g.tol.unwrap_or(DEFAULT_TOL);
    let use_exact = !g.float && (g.exact || preserves_form_exact(&exact));

    let (class, disc, backing): (IsometryClass, Value, &'static str) = if use_exact {
        let class = classify_isometry_exact(&exact)?;
        (class, json!(discriminant_exact(&exact).to_string()), "exact")
    } else {
        let m = Matrix21::Exact(exact).to_float();
        let class = classify_isometry(&m, tol)?;
        (class, json!(discriminant(&m)), "float")
    };

    let mut cert = Certificate::new("ch2 classify", input, backing);
    if backing == "float" {
        cert.tolerances.insert("tol", tol);
    }
    cert.check("preserves-form", true, None);
    cert.status = class.as_str().to_string();
    cert.result = json!({ "class": class, "discriminant": disc });
    finish(g, &cert, true)
}

#[derive(Deserialize)]
struct DistanceInput {
    z: Vec<String>,
    w: Vec<String>,
}

fn parse_point(v: &[String], name: &str) -> CliResult<CVec3<GaussianRational>> {
    if v.len() != 3 {
        return Err(CliError::Usage(format!("{name} needs 3 homogeneous coordinates")));
    }
    let mut out: CVec3<GaussianRational> = std::array::from_fn(|_| GaussianRational::zero());
    for (slot, s) in out.iter_mut().zip(v) {
        *slot = s.parse()?;
    }
    Ok(out)
}

pub fn ch2_distance(g: &GlobalOpts, path: &str) -> CliResult<Outcome> {
    float_only(g, "ch2 distance")?;
    let input = read_json(path)?;
    let spec: DistanceInput = typed(&input)?;
    let z = parse_point(&spec.z, "z")?;
    let w = parse_point(&spec.w, "w")?;
    if !in_ch2_exact(&z) || !in_ch2_exact(&w) {
        return Err(ch2noid::Error::NotInCh2.into());
    }
    let zf: CVec3<Complex64> = z.each_ref().map(GaussianRational::to_complex64);
    let wf: CVec3<Complex64> = w.each_ref().map(GaussianRational::to_complex64);
    let d = distance(&zf, &wf)?;

    // cosh²(d/2) is rational in the inputs, so it is reported exactly alongside d.
    let zw = herm_form(&z, &w);
    let cosh2 = zw.norm_sqr() / (herm_form(&z, &z).re * herm_form(&w, &w).re);

    let mut cert = Certificate::new("ch2 distance", input, "float");
    cert.check("z-in-ch2", true, None);
    cert.check("w-in-ch2", true, None);
    cert.status = format!("{d}");
    cert.result = json!({ "distance": d, "cosh2_half_distance": cosh2.to_string() });
    finish(g, &cert, true)
}

#[derive(Deserialize)]
struct CuspInput {
    grid: StripGrid,
    #[serde(default)]
    generator: Option<SubharmonicSpec>,
}

pub fn cusp_verify(g: &GlobalOpts, path: &str, samples: usize, c: f64, eps: f64) -> CliResult<Outcome> {
    float_only(g, "cusp verify")?;
    let input = read_json(path)?;
    let spec: CuspInput = typed(&input)?;
    spec.grid.validate()?;
    if !(c > 0.0) {
        return Err(CliError::Usage("tol-constant must be positive".into()));
    }
    let tol = g.tol.unwrap_or_else(|| spec.grid.tolerance(c));

    let seeded = spec.generator.is_none();
    let generators: Vec<SubharmonicSpec> = match spec.generator {
        Some(gen) => vec![gen],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            (0..samples).map(|_| SubharmonicSpec::random(&mut rng)).collect()
        }
    };

    let mut cert = Certificate::new("cusp verify", input, "float");
    if seeded {
        cert.seed = Some(g.seed);
    }
    cert.tolerances.insert("tol", tol);
    cert.tolerances.insert("tail_eps", eps);
    let ys = spec.grid.ys();
    let mut fields = Vec::with_capacity(generators.len());
    for (k, gen) in generators.iter().enumerate() {
        let field = make_subharmonic_sample(spec.grid, gen)?;
        let convexity = check_mean_convexity(&field, tol);
        let sup = check_sup_bound(&field, tol);
        let tail = l2_tail_witness(&ys, &oscillation_a(&field), eps)?;
        cert.check(
            format!("field-{k}-mean-convexity"),
            convexity.passes,
            Some(format!("worst slack {:e}", convexity.worst_slack)),
        );
        cert.check(
            format!("field-{k}-sup-bound"),
            sup.passes,
            Some(format!("worst slack {:e}", sup.worst_slack)),
        );
        fields.push(json!({
            "generator": gen,
            "convexity": {
                "precondition_holds": convexity.precondition_holds,
                "convex": convexity.convex,
                "worst_slack": convexity.worst_slack,
            },
            "sup_bound": {
                "sup_mean": sup.sup_mean,
                "worst_slack": sup.worst_slack,
            },
            "tail_witness": tail,
        }));
    }
    let success = cert.all_passed();
    cert.status = if success { "pass" } else { "fail" }.to_string();
    cert.result = json!({ "fields": fields });
    finish(g, &cert, success)
}
