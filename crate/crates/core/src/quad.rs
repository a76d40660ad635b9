//! Adaptive Gauss-Kronrod (7/15) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Default cap on the number of subintervals.
pub const DEFAULT_MAX_INTERVALS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let pair = f(c - dx)? + f(c + dx)?;
        kron += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Ok(Segment {
        a,
        b,
        value: kron * h,
        error: ((kron - gauss) * h).abs(),
    })
}

/// Integrate `f` over `[a, b]` (either order) to absolute tolerance `tol`.
///
/// The integrand may fail; its error is returned unchanged. Failure to meet
/// `tol` within `max_intervals` subintervals is [`Error::Quadrature`].
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: f64, max_intervals: usize) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::Param(format!("quadrature tolerance must be positive, got {tol}")));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Param(format!("quadrature bounds must be finite, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut segs = vec![gk15(&mut f, lo, hi)?];
    loop {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.error).sum();
        if !total.is_finite() {
            return Err(Error::Quadrature {
                tol,
                estimate: f64::NAN,
                intervals: segs.len(),
            });
        }
        if err <= tol {
            return Ok(QuadResult {
                value: sign * total,
                error: err,
                intervals: segs.len(),
            });
        }
        if segs.len() >= max_intervals {
            return Err(Error::Quadrature {
                tol,
                estimate: err,
                intervals: segs.len(),
            });
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one segment");
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            return Err(Error::Quadrature {
                tol,
                estimate: err,
                intervals: segs.len() + 1,
            });
        }
        segs.push(gk15(&mut f, s.a, mid)?);
        segs.push(gk15(&mut f, mid, s.b)?);
    }
}
