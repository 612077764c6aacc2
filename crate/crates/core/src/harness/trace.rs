use crate::code::ParityCheckCode;
use crate::proximal::{decode_proximal_observed, DecodeOutcome, DecoderParams};

/// State of one watched position in one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    /// 0-based position.
    pub index: usize,
    pub s: f64,
    pub r: f64,
    pub grad_l: f64,
    pub grad_h: f64,
}

pub(super) fn trace_decode(
    code: &ParityCheckCode,
    y: &[f64],
    params: &DecoderParams,
    watch: &[usize],
) -> (Vec<TraceRow>, DecodeOutcome) {
    let mut rows = Vec::new();
    let out = decode_proximal_observed(code, y, params, |v| {
        rows.extend(watch.iter().map(|&i| TraceRow {
            iteration: v.iteration,
            index: i,
            s: v.s[i],
            r: v.r[i],
            grad_l: v.grad_l[i],
            grad_h: v.grad_h[i],
        }));
    });
    (rows, out)
}

/// CSV `iteration,index,s,r,grad_l,grad_h` with 1-based indices.
pub fn render_trace_csv(rows: &[TraceRow]) -> String {
    let mut out = String::from("iteration,index,s,r,grad_l,grad_h\n");
    for r in rows {
        out += &format!(
            "{},{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.iteration,
            r.index + 1,
            r.s,
            r.r,
            r.grad_l,
            r.grad_h
        );
    }
    out
}
