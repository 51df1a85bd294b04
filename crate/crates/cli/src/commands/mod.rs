pub mod bench;
pub mod field_info;
pub mod gauss;
pub mod table;
pub mod verify;

use ternary_kloosterman::field::FieldContext;
use ternary_kloosterman::Error;

/// `GF(3^n) mod <poly>, generator <g>` line used in text report headers.
pub fn field_line(ctx: &FieldContext) -> String {
    let g = ctx.generator();
    format!(
        "GF(3^{}) modulo {}, generator {} ({})",
        ctx.n(),
        ctx.spec().modulus_string(),
        g.index(),
        ctx.format_coeffs(g)
    )
}

/// The bare message of a usage error, for warnings.
pub fn reason(e: &Error) -> String {
    match e {
        Error::Usage(msg) => msg.clone(),
        other => other.to_string(),
    }
}
