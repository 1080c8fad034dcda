//! Golden-section search for the maximum of a unimodal function.

/// `(3 - √5) / 2`, the fraction of the bracket cut off at each step.
const INV_PHI_SQ: f64 = 0.381_966_011_250_105_1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Maximizes `f` on `[lo, hi]`, stopping once the bracket is narrower than
/// `tol` or after `max_iter` steps. The function is assumed unimodal on the
/// bracket.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Extremum
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = a + INV_PHI_SQ * (b - a);
    let mut d = b - INV_PHI_SQ * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    while b - a > tol && iterations < max_iter {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = a + INV_PHI_SQ * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = b - INV_PHI_SQ * (b - a);
            fd = f(d);
        }
        iterations += 1;
    }
    let x = 0.5 * (a + b);
    let value = f(x);
    // the midpoint can land a hair below the best interior probe
    let (x, value) = [(x, value), (c, fc), (d, fd)]
        .into_iter()
        .fold((x, value), |best, cand| if cand.1 > best.1 { cand } else { best });
    Extremum { x, value, iterations }
}
