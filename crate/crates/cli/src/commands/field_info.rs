use std::fmt::Write as _;

use anyhow::Result;
use serde::Serialize;
use ternary_kloosterman::traces::IndexSetFamily;

use crate::cli::Format;
use crate::{Session, Status};

#[derive(Debug, Serialize)]
struct FieldInfo<'a> {
    n: usize,
    q: usize,
    modulus: String,
    /// Low coefficients `c0..c_{n-1}`; the leading 1 is implicit.
    modulus_coeffs: &'a [u8],
    generator: usize,
    generator_coeffs: String,
    #[serde(rename = "X")]
    x: &'a [u64],
    #[serde(rename = "Y")]
    y: &'a [u64],
    #[serde(rename = "Z")]
    z: &'a [u64],
}

pub fn run(s: &Session) -> Result<Status> {
    let format = s.format("field-info", Format::Json, &[Format::Json, Format::Text])?;
    let ctx = &s.field;
    let family = IndexSetFamily::new(ctx.n())?;
    let info = FieldInfo {
        n: ctx.n(),
        q: ctx.order(),
        modulus: ctx.spec().modulus_string(),
        modulus_coeffs: &ctx.spec().modulus,
        generator: ctx.generator().index(),
        generator_coeffs: ctx.format_coeffs(ctx.generator()),
        x: family.x.residues(),
        y: family.y.residues(),
        z: family.z.residues(),
    };
    let bytes = match format {
        Format::Json => crate::output::json(&info)?,
        _ => {
            let mut out = String::new();
            let _ = writeln!(out, "n: {}", info.n);
            let _ = writeln!(out, "q: {}", info.q);
            let _ = writeln!(out, "modulus: {}", info.modulus);
            let _ = writeln!(out, "generator: {} ({})", info.generator, info.generator_coeffs);
            for (name, set) in [("X", info.x), ("Y", info.y), ("Z", info.z)] {
                let _ = writeln!(out, "{name}: {}", serde_json::to_string(set)?);
            }
            out.into_bytes()
        }
    };
    s.emit(&bytes)?;
    Ok(Status::Passed)
}
