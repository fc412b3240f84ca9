use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// How many law instances to examine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    /// Every chain reachable from the enumerations.
    Exhaustive,
    /// `draws` chains per law, drawn with a generator seeded from `seed`.
    Sampled { draws: usize, seed: u64 },
}

impl Budget {
    pub fn sampled(draws: usize, seed: u64) -> Self {
        Budget::Sampled { draws, seed }
    }
}

/// FNV-1a over a string; used to derive per-law and per-cell seeds that do
/// not depend on the standard library's hasher.
pub fn stable_hash(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// A step returns the candidates for the next element of a chain, given the
/// chain built so far.
pub type Step<'a, T> = &'a dyn Fn(&[T]) -> Vec<T>;

/// Visits chains `[t0, t1, ..]` where `t0` ranges over `roots` and every later
/// element is drawn from the corresponding step's candidates.
///
/// Exhaustive budgets visit every chain in depth-first order. Sampled budgets
/// draw up to `draws` chains uniformly at each level; dead ends are retried a
/// bounded number of times, so sparse instances may yield fewer visits.
pub fn walk<T: Clone, E>(
    budget: &Budget,
    salt: &str,
    roots: &[T],
    steps: &[Step<'_, T>],
    visit: &mut dyn FnMut(&[T]) -> Result<(), E>,
) -> Result<usize, E> {
    match *budget {
        Budget::Exhaustive => {
            let mut chain = Vec::with_capacity(steps.len() + 1);
            let mut count = 0;
            for root in roots {
                chain.push(root.clone());
                dfs(&mut chain, steps, visit, &mut count)?;
                chain.pop();
            }
            Ok(count)
        }
        Budget::Sampled { draws, seed } => {
            if roots.is_empty() {
                return Ok(0);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ stable_hash(salt));
            let mut count = 0;
            let mut attempts = 0;
            let max_attempts = draws.saturating_mul(8).max(64);
            'draw: while count < draws && attempts < max_attempts {
                attempts += 1;
                let mut chain = vec![roots[rng.gen_range(0..roots.len())].clone()];
                for step in steps {
                    let next = step(&chain);
                    if next.is_empty() {
                        continue 'draw;
                    }
                    let pick = next[rng.gen_range(0..next.len())].clone();
                    chain.push(pick);
                }
                visit(&chain)?;
                count += 1;
            }
            Ok(count)
        }
    }
}

fn dfs<T: Clone, E>(
    chain: &mut Vec<T>,
    steps: &[Step<'_, T>],
    visit: &mut dyn FnMut(&[T]) -> Result<(), E>,
    count: &mut usize,
) -> Result<(), E> {
    let depth = chain.len() - 1;
    if depth == steps.len() {
        *count += 1;
        return visit(chain);
    }
    for next in steps[depth](chain) {
        chain.push(next);
        dfs(chain, steps, visit, count)?;
        chain.pop();
    }
    Ok(())
}
