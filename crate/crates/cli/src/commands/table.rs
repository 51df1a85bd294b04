use anyhow::Result;
use serde::Serialize;
use ternary_kloosterman::congruence::{
    canonical_residue, predict_mod18, predict_mod2, predict_mod27, predict_mod54, predict_mod9, Sweep,
};
use ternary_kloosterman::field::{FieldContext, FieldElement};
use ternary_kloosterman::kloosterman::{kloosterman_all_fast, kloosterman_all_naive, KloostermanTable};
use ternary_kloosterman::traces::{ProfileTable, TraceProfile};

use super::reason;
use crate::cli::{Format, TableArgs};
use crate::{warn, Session, Status};

const DEFAULT_MODULI: [u32; 4] = [9, 18, 27, 54];

#[derive(Debug, Serialize)]
struct Prediction {
    modulus: u32,
    predicted: Option<u32>,
    matches: Option<bool>,
}

#[derive(Debug, Serialize)]
struct Row {
    index: usize,
    coeffs: String,
    #[serde(rename = "Tr")]
    tr: u8,
    #[serde(rename = "tauX")]
    tau_x: u8,
    #[serde(rename = "tauY")]
    tau_y: u8,
    #[serde(rename = "tauZ")]
    tau_z: u8,
    #[serde(rename = "K")]
    k: i64,
    #[serde(rename = "K_mod9")]
    k_mod9: u32,
    #[serde(rename = "K_mod18")]
    k_mod18: u32,
    #[serde(rename = "K_mod27")]
    k_mod27: u32,
    #[serde(rename = "K_mod54")]
    k_mod54: u32,
    predictions: Vec<Prediction>,
}

#[derive(Debug, Serialize)]
struct TableDoc<'a> {
    n: usize,
    modulus: String,
    rows: &'a [Row],
}

/// Requested moduli in ascending order, minus those whose classification
/// is not asserted at this degree.
fn prediction_moduli(n: usize, requested: &[u32]) -> Vec<u32> {
    let mut moduli = if requested.is_empty() { DEFAULT_MODULI.to_vec() } else { requested.to_vec() };
    moduli.sort_unstable();
    moduli.dedup();
    moduli.retain(|&m| {
        let sweep = Sweep::from_modulus(m).expect("moduli are validated at parse time");
        match sweep.check_degree(n) {
            Ok(()) => true,
            Err(e) => {
                if !requested.is_empty() {
                    warn(format!("skipping mod-{m} predictions: {}", reason(&e)));
                }
                false
            }
        }
    });
    moduli
}

fn predict(ctx: &FieldContext, profile: &TraceProfile, m: u32, a: FieldElement) -> Result<Option<u32>> {
    Ok(Some(match m {
        2 => predict_mod2(ctx, a).residue,
        9 => predict_mod9(profile.tr).residue,
        18 if a.is_zero() => return Ok(None),
        18 => predict_mod18(ctx, a)?.residue,
        27 => predict_mod27(profile)?.residue,
        54 => predict_mod54(ctx, profile, a)?.residue,
        _ => unreachable!("unsupported modulus {m}"),
    }))
}

fn build_row(
    ctx: &FieldContext,
    profiles: &ProfileTable,
    table: &KloostermanTable,
    moduli: &[u32],
    a: FieldElement,
) -> Result<Row> {
    let p = profiles.profile(a);
    let k = table.get(a);
    let predictions = moduli
        .iter()
        .map(|&m| {
            let predicted = predict(ctx, &p, m, a)?;
            let matches = predicted.map(|r| r == canonical_residue(k, m));
            Ok(Prediction { modulus: m, predicted, matches })
        })
        .collect::<Result<_>>()?;
    Ok(Row {
        index: a.index(),
        coeffs: ctx.format_coeffs(a),
        tr: p.tr,
        tau_x: p.tau_x,
        tau_y: p.tau_y,
        tau_z: p.tau_z,
        k,
        k_mod9: canonical_residue(k, 9),
        k_mod18: canonical_residue(k, 18),
        k_mod27: canonical_residue(k, 27),
        k_mod54: canonical_residue(k, 54),
        predictions,
    })
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn to_csv(rows: &[Row], moduli: &[u32]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> =
        ["index", "coeffs", "Tr", "tauX", "tauY", "tauZ", "K", "K_mod9", "K_mod18", "K_mod27", "K_mod54"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    for m in moduli {
        header.push(format!("pred_mod{m}"));
        header.push(format!("match_mod{m}"));
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.index.to_string(),
            r.coeffs.clone(),
            r.tr.to_string(),
            r.tau_x.to_string(),
            r.tau_y.to_string(),
            r.tau_z.to_string(),
            r.k.to_string(),
            r.k_mod9.to_string(),
            r.k_mod18.to_string(),
            r.k_mod27.to_string(),
            r.k_mod54.to_string(),
        ];
        for p in &r.predictions {
            rec.push(opt(p.predicted));
            rec.push(opt(p.matches));
        }
        w.write_record(&rec)?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

pub fn run(s: &Session, args: &TableArgs) -> Result<Status> {
    let format = s.format("table", Format::Csv, &[Format::Csv, Format::Json])?;
    let ctx = &s.field;
    let moduli = prediction_moduli(ctx.n(), &args.moduli);
    let elements: Vec<FieldElement> = if args.elements.is_empty() {
        ctx.elements().collect()
    } else {
        args.elements.iter().map(|t| ctx.parse_element(t)).collect::<Result<_, _>>()?
    };

    let table = if args.naive { kloosterman_all_naive(ctx, s.exec)? } else { kloosterman_all_fast(ctx, s.exec)? };
    let profiles = ProfileTable::build(ctx, s.exec)?;
    let rows = elements.iter().map(|&a| build_row(ctx, &profiles, &table, &moduli, a)).collect::<Result<Vec<_>>>()?;

    let bytes = match format {
        Format::Json => {
            crate::output::json(&TableDoc { n: ctx.n(), modulus: ctx.spec().modulus_string(), rows: &rows })?
        }
        _ => to_csv(&rows, &moduli)?,
    };
    s.emit(&bytes)?;
    Ok(Status::Passed)
}
