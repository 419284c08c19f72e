use std::fmt::Write as _;

use num_rational::BigRational;
use quatfact::clifford::local::{LocalOrder, OrderPredicates};
use quatfact::clifford::radical::{classify_residue, ResidueAlgebra};
use quatfact::clifford::{C0Element, CliffordError};
use quatfact::dvr::format_rational;
use quatfact::eichler::CanonicalAtom;
use quatfact::factorize::{DistanceTable, Factorizer, LengthProfile, RigidFactorization};
use quatfact::{EichlerOrder, Mat2};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{parse_form, parse_matrix, AtomsArgs, CliffordArgs, FactorArgs, Format, RunConfig, VerifyArgs};
use crate::verify::{self, VerificationReport};
use crate::error::CliError;

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn atom_json(a: &CanonicalAtom) -> Value {
    let params: serde_json::Map<String, Value> = a
        .class
        .parameters()
        .into_iter()
        .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
        .collect();
    json!({
        "class": a.class.label(),
        "family": a.class.family(),
        "parameters": params,
        "norm_valuation": a.norm_valuation,
        "matrix": a.matrix,
    })
}

pub fn cmd_atoms(args: &AtomsArgs) -> Result<String, CliError> {
    let r = EichlerOrder::new(args.prime, args.level)?;
    let atoms = r.enumerate_atoms(args.max_norm_val)?;
    match args.format {
        Format::Json => to_json(&atoms.iter().map(atom_json).collect::<Vec<_>>()),
        Format::Csv => {
            let mut out = String::from("class,family,norm_valuation,a,b,c,d,parameters\n");
            for a in &atoms {
                let [ea, eb, ec, ed] = a.matrix.entries().map(format_rational);
                let params: Vec<String> = a.class.parameters().iter().map(|(k, v)| format!("{k}={v}")).collect();
                writeln!(
                    out,
                    "{},{},{},{ea},{eb},{ec},{ed},{}",
                    a.class.label(),
                    a.class.family(),
                    a.norm_valuation,
                    csv_field(&params.join(";"))
                )
                .unwrap();
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct FactorReport<'a> {
    prime: u64,
    level: u32,
    element: &'a Mat2,
    norm_valuation: i64,
    profile: &'a LengthProfile,
    factorizations: Vec<&'a [Mat2]>,
}

/// Factorizations and their profile; rejects units and zero divisors.
pub fn factor_element(r: &EichlerOrder, a: &Mat2, max_count: usize) -> Result<(Vec<RigidFactorization<Mat2>>, LengthProfile), CliError> {
    if !r.contains(a) {
        return Err(CliError::Domain(format!("{a} is not an element of the order")));
    }
    if !r.is_cancellative(a)? {
        return Err(CliError::Domain(format!("{a} is a zero divisor (nr = 0)")));
    }
    if r.is_unit(a)? {
        return Err(CliError::Domain(format!("{a} is a unit")));
    }
    let zs = Factorizer::with_max_count(r, max_count).factorizations(a)?;
    let profile = LengthProfile::from_factorizations(r, &zs)?;
    Ok((zs, profile))
}

pub fn factorization_dot(r: &EichlerOrder, zs: &[RigidFactorization<Mat2>]) -> Result<String, CliError> {
    let table = DistanceTable::new(r, zs)?;
    let bound = table.catenary_degree();
    let mut out = String::from("graph factorizations {\n");
    for (i, z) in zs.iter().enumerate() {
        let atoms: Vec<String> = z.atoms.iter().map(|m| m.to_string()).collect();
        writeln!(out, "  z{i} [label=\"{}\"];", atoms.join(" * ")).unwrap();
    }
    for i in 0..zs.len() {
        let row = table.distances_from(i);
        for (j, &d) in row.iter().enumerate().skip(i + 1) {
            if table.replacement_cost(i, j) <= bound {
                writeln!(out, "  z{i} -- z{j} [label=\"{d}\"];").unwrap();
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

pub fn cmd_factor(args: &FactorArgs) -> Result<String, CliError> {
    let r = EichlerOrder::new(args.prime, args.level)?;
    let a = parse_matrix(&args.element)?;
    let (zs, profile) = factor_element(&r, &a, args.max_count)?;
    if args.emit_dot {
        return factorization_dot(&r, &zs);
    }
    match args.format {
        Format::Json => to_json(&FactorReport {
            prime: args.prime,
            level: args.level,
            element: &a,
            norm_valuation: r.norm_valuation(&a).finite().unwrap_or(-1),
            profile: &profile,
            factorizations: zs.iter().map(|z| z.atoms.as_slice()).collect(),
        }),
        Format::Csv => {
            let mut out = String::from("index,length,atoms\n");
            for (i, z) in zs.iter().enumerate() {
                let atoms: Vec<String> = z.atoms.iter().map(|m| m.to_string()).collect();
                writeln!(out, "{i},{},{}", z.len(), csv_field(&atoms.join(" * "))).unwrap();
            }
            Ok(out)
        }
    }
}

fn element_json(x: &C0Element<BigRational>) -> Value {
    json!({
        "coordinates": x.x.iter().map(format_rational).collect::<Vec<_>>(),
        "display": x.to_string(),
    })
}

pub fn clifford_report(args: &CliffordArgs) -> Result<Value, CliError> {
    let form = parse_form(&args.form)?;
    if !form.is_nondegenerate() {
        return Err(CliffordError::Degenerate.into());
    }
    let p = args.prime;
    let residue = ResidueAlgebra::new(&form, p)?;
    let predicates = OrderPredicates::from_quotient(residue.quotient());
    let classification = match classify_residue(&form, p) {
        Ok(c) => json!({
            "case": c.case.label(),
            "agrees_with_computation": c.agrees(),
            "predicted": c.prediction,
        }),
        Err(CliffordError::NormalizeFirst) => json!({"case": null, "note": "residue form is not in a normalized shape"}),
        Err(e) => return Err(e.into()),
    };
    let powers: Vec<Vec<[u64; 4]>> = (1..=residue.nilpotency_index())
        .map(|m| residue.radical_power(m).to_vec())
        .collect();
    let mut report = json!({
        "prime": p,
        "form": form,
        "half_discriminant": format_rational(&form.half_discriminant()),
        "classification": classification,
        "radical": residue.radical(),
        "radical_powers": powers,
        "nilpotency_index": residue.nilpotency_index(),
        "quotient": residue.quotient(),
        "quotient_description": residue.quotient().to_string(),
        "predicates": predicates,
    });
    if args.find_nilpotent {
        let order = LocalOrder::new(&form, p)?;
        let z = order.find_nilpotent_in_radical(args.bound)?;
        let alg = order.algebra();
        let mut family = Vec::new();
        for k in 2..=args.max_k.max(2) {
            let x = order.long_atom_family(&z, k)?;
            family.push(json!({
                "k": k,
                "element": element_json(&x),
                "norm_valuation": order.dvr().valuation(&alg.norm(&x)).finite(),
                "status": order.is_atom_local(&x)?,
            }));
        }
        report["nilpotent"] = json!({
            "z": element_json(&z),
            "norm": format_rational(&alg.norm(&z)),
            "trace": format_rational(&alg.trace(&z)),
            "in_radical": order.in_radical(&z)?,
            "in_radical_squared": order.in_radical_squared(&z)?,
            "long_atoms": family,
        });
    }
    Ok(report)
}

pub fn cmd_clifford(args: &CliffordArgs) -> Result<String, CliError> {
    let report = clifford_report(args)?;
    match args.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = String::from("key,value\n");
            for key in ["prime", "half_discriminant", "nilpotency_index", "quotient_description"] {
                let v = &report[key];
                let s = v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string());
                writeln!(out, "{key},{}", csv_field(&s)).unwrap();
            }
            let case = report["classification"]["case"].as_str().unwrap_or("");
            writeln!(out, "case,{case}").unwrap();
            for (k, v) in report["predicates"].as_object().into_iter().flatten() {
                writeln!(out, "{k},{v}").unwrap();
            }
            if let Some(z) = report.get("nilpotent") {
                writeln!(out, "z,{}", csv_field(z["z"]["display"].as_str().unwrap_or(""))).unwrap();
            }
            Ok(out)
        }
    }
}

pub fn verify_report(report: &VerificationReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => {
            let mut out = String::from("id,pass,instances,claim\n");
            for c in &report.checks {
                writeln!(out, "{},{},{},{}", c.id, c.pass, c.instances, csv_field(c.claim)).unwrap();
            }
            Ok(out)
        }
    }
}

/// The rendered report, plus the failure count as an error when any check fails.
pub fn cmd_verify(args: &VerifyArgs) -> Result<String, (String, CliError)> {
    let config = RunConfig::from_args(args).map_err(|e| (String::new(), e))?;
    let report = verify::run(&config);
    let text = verify_report(&report, args.format).map_err(|e| (String::new(), e))?;
    let failed = report.checks.iter().filter(|c| !c.pass).count();
    if failed == 0 {
        Ok(text)
    } else {
        Err((text, CliError::VerificationFailed(failed)))
    }
}
