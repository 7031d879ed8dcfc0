/// Largest integer magnitude an `f64` represents exactly.
const EXACT_F64_LIMIT: u64 = 1 << 53;

/// Falling factorial `(x)_r = x (x-1) ... (x-r+1)`, with `(x)_0 = 1`.
///
/// Non-negative integer `x` takes an exact `u64` path as long as the product
/// stays below 2^53; everything else is multiplied out in floating point.
pub fn falling_factorial(x: f64, r: u32) -> f64 {
    if r == 0 {
        return 1.0;
    }
    if x >= 0.0 && x.fract() == 0.0 && x < EXACT_F64_LIMIT as f64 {
        let xi = x as u64;
        if xi < r as u64 {
            return 0.0;
        }
        if let Some(v) = falling_factorial_u64(xi, r) {
            if v <= EXACT_F64_LIMIT {
                return v as f64;
            }
        }
    }
    (0..r).map(|i| x - i as f64).product()
}

/// Exact integer falling factorial; `None` on overflow.
pub fn falling_factorial_u64(x: u64, r: u32) -> Option<u64> {
    if (r as u64) > x {
        return Some(0);
    }
    (0..r as u64).try_fold(1u64, |acc, i| acc.checked_mul(x - i))
}

pub fn factorial(r: u32) -> u64 {
    (1..=r as u64).product()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
