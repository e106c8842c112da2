/// Upper limit on grid points per decade.
const MAX_PER_DECADE: f64 = 15.0;

/// Geometric checkpoint grid `{round(10^(j/d))} ∩ [1, T]` plus `T`.
///
/// `d = min(15, ⌊63 / log₁₀ T⌋)`, so the grid never exceeds 64 points and
/// every horizon up to `10^4.2` shares the same prefix.
pub fn checkpoint_grid(horizon: usize) -> Vec<usize> {
    if horizon <= 1 {
        return vec![1; horizon];
    }
    let decades = (horizon as f64).log10();
    let per_decade = (63.0 / decades).floor().clamp(1.0, MAX_PER_DECADE);
    let mut grid: Vec<usize> = Vec::new();
    for j in 0.. {
        let t = 10f64.powf(j as f64 / per_decade).round() as usize;
        if t > horizon {
            break;
        }
        if grid.last() != Some(&t) {
            grid.push(t);
        }
    }
    if grid.last() != Some(&horizon) {
        grid.push(horizon);
    }
    grid
}
