//! Local refinement by retracted numerical-gradient steps.

/// Iteration cap for one local refinement.
pub const MAX_ITERATIONS: usize = 200;

/// Refinement stops once the trial step falls below this.
pub(crate) const MIN_STEP: f64 = 1e-10;

const INITIAL_STEP: f64 = 0.1;
const MAX_STEP: f64 = 1.0;
const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone)]
pub(crate) struct Refined {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
}

fn gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let xi = probe[i];
            probe[i] = xi + FD_STEP;
            let fp = f(&probe);
            probe[i] = xi - FD_STEP;
            let fm = f(&probe);
            probe[i] = xi;
            (fp - fm) / (2.0 * FD_STEP)
        })
        .collect()
}

/// Climbs `sense * f` from `x0`. `retract` maps a trial point back onto the
/// constraint set and returns `false` if it cannot. The step doubles after
/// an accepted move and halves after a rejected one.
pub(crate) fn refine(
    x0: Vec<f64>,
    sense: f64,
    f: &dyn Fn(&[f64]) -> f64,
    retract: &dyn Fn(&mut [f64]) -> bool,
) -> Refined {
    let mut x = x0;
    let mut value = f(&x);
    let mut step = INITIAL_STEP;
    let mut grad = gradient(f, &x);
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            converged = true;
            break;
        }
        let mut trial: Vec<f64> = x
            .iter()
            .zip(&grad)
            .map(|(xi, gi)| xi + sense * step * gi / norm)
            .collect();
        let accepted = retract(&mut trial) && {
            let t = f(&trial);
            if sense * (t - value) > 0.0 {
                value = t;
                true
            } else {
                false
            }
        };
        if accepted {
            x = trial;
            grad = gradient(f, &x);
            step = (2.0 * step).min(MAX_STEP);
        } else {
            step *= 0.5;
            if step < MIN_STEP {
                converged = true;
                break;
            }
        }
    }
    Refined {
        x,
        value,
        converged,
    }
}
