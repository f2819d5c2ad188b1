//! Random graphs drawn from an ensemble's urn.
//!
//! Every draw takes `m` balls one at a time without replacement. The unbiased
//! sampler picks each remaining ball with equal probability (multivariate
//! hypergeometric); the biased sampler picks colour `(i, j)` with probability
//! proportional to `Ω_ij` times the balls of that colour still in the urn
//! (multivariate Wallenius). Both walk a binary weight tree, so a draw costs
//! `O(m log D)` over `D` colours.
//!
//! Randomness comes from xoshiro256++ seeded through SplitMix64
//! (`Xoshiro256PlusPlus::seed_from_u64`). Uniform doubles take the top 53
//! bits of a 64-bit output and bounded integers use Lemire's multiply-shift
//! rejection, so a seed reproduces the same batch on every platform.

use std::io::{BufRead, Write};
use std::ops::{Add, Sub};

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::graph::{Adjacency, Dyad};

/// One sampled graph as `(dyad, count)` pairs with positive counts, in
/// row-major dyad order.
pub type Draw = Vec<(Dyad, u64)>;

#[derive(Clone, Debug, PartialEq)]
pub struct SampleBatch {
    pub fingerprint: String,
    pub seed: u64,
    pub n: usize,
    pub directed: bool,
    pub m: u64,
    pub draws: Vec<Draw>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    pub fn adjacency(&self, k: usize) -> Adjacency {
        self.draws[k].iter().copied().collect()
    }
}

fn uniform_f64(rng: &mut Xoshiro256PlusPlus) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform integer in `[0, bound)`, `bound > 0`.
fn uniform_below(rng: &mut Xoshiro256PlusPlus, bound: u64) -> u64 {
    let mut product = u128::from(rng.next_u64()) * u128::from(bound);
    if (product as u64) < bound {
        let threshold = bound.wrapping_neg() % bound;
        while (product as u64) < threshold {
            product = u128::from(rng.next_u64()) * u128::from(bound);
        }
    }
    (product >> 64) as u64
}

/// Complete binary tree of partial sums over leaf weights.
struct WeightTree<T> {
    leaves: usize,
    nodes: Vec<T>,
}

impl<T> WeightTree<T>
where
    T: Copy + Default + PartialOrd + Add<Output = T> + Sub<Output = T>,
{
    fn new(weights: &[T]) -> Self {
        let leaves = weights.len().next_power_of_two().max(1);
        let mut nodes = vec![T::default(); 2 * leaves];
        nodes[leaves..leaves + weights.len()].copy_from_slice(weights);
        for k in (1..leaves).rev() {
            nodes[k] = nodes[2 * k] + nodes[2 * k + 1];
        }
        Self { leaves, nodes }
    }

    fn total(&self) -> T {
        self.nodes[1]
    }

    fn set(&mut self, leaf: usize, weight: T) {
        let mut k = self.leaves + leaf;
        self.nodes[k] = weight;
        while k > 1 {
            k /= 2;
            self.nodes[k] = self.nodes[2 * k] + self.nodes[2 * k + 1];
        }
    }

    /// Leaf whose cumulative range contains `target`, never a zero-weight one.
    fn find(&self, mut target: T) -> usize {
        let zero = T::default();
        let mut k = 1;
        while k < self.leaves {
            let left = self.nodes[2 * k];
            let right = self.nodes[2 * k + 1];
            let go_left = if left <= zero {
                false
            } else if right <= zero {
                true
            } else {
                target < left
            };
            if go_left {
                k *= 2;
            } else {
                target = if target < left { zero } else { target - left };
                k = 2 * k + 1;
            }
        }
        k - self.leaves
    }
}

struct Colours {
    dyads: Vec<Dyad>,
    capacities: Vec<u64>,
    weights: Vec<f64>,
}

fn colours(e: &Ensemble) -> Colours {
    let xi = e.xi();
    let dyads: Vec<Dyad> = xi.dyads().filter(|&(i, j)| xi.get(i, j) > 0).collect();
    let capacities = dyads.iter().map(|&(i, j)| xi.get(i, j)).collect();
    let weights = dyads.iter().map(|&(i, j)| e.omega().get(i, j)).collect();
    Colours {
        dyads,
        capacities,
        weights,
    }
}

fn collect_draw(c: &Colours, counts: &[u64]) -> Draw {
    c.dyads
        .iter()
        .zip(counts)
        .filter(|&(_, &x)| x > 0)
        .map(|(&d, &x)| (d, x))
        .collect()
}

fn batch(e: &Ensemble, seed: u64, draws: Vec<Draw>) -> SampleBatch {
    SampleBatch {
        fingerprint: e.fingerprint().to_owned(),
        seed,
        n: e.n(),
        directed: e.is_directed(),
        m: e.m(),
        draws,
    }
}

/// Draws from the multivariate hypergeometric distribution. Requires
/// uniform propensities.
pub fn sample_unbiased(e: &Ensemble, count: usize, seed: u64) -> Result<SampleBatch> {
    if !e.is_unbiased() {
        return Err(Error::NotUniform);
    }
    if e.m() > e.total() {
        return Err(Error::SamplingExhausted {
            drawn: e.total(),
            wanted: e.m(),
        });
    }
    let c = colours(e);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let full = WeightTree::new(&c.capacities);
    let mut draws = Vec::with_capacity(count);
    for _ in 0..count {
        let mut tree = WeightTree {
            leaves: full.leaves,
            nodes: full.nodes.clone(),
        };
        let mut counts = vec![0u64; c.dyads.len()];
        for _ in 0..e.m() {
            let leaf = tree.find(uniform_below(&mut rng, tree.total()));
            counts[leaf] += 1;
            tree.set(leaf, c.capacities[leaf] - counts[leaf]);
        }
        draws.push(collect_draw(&c, &counts));
    }
    Ok(batch(e, seed, draws))
}

/// Draws from the sequential Wallenius urn.
pub fn sample_biased(e: &Ensemble, count: usize, seed: u64) -> Result<SampleBatch> {
    let c = colours(e);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let initial: Vec<f64> = c
        .weights
        .iter()
        .zip(&c.capacities)
        .map(|(w, &x)| w * x as f64)
        .collect();
    let full = WeightTree::new(&initial);
    let mut draws = Vec::with_capacity(count);
    for _ in 0..count {
        let mut tree = WeightTree {
            leaves: full.leaves,
            nodes: full.nodes.clone(),
        };
        let mut counts = vec![0u64; c.dyads.len()];
        for drawn in 0..e.m() {
            let total = tree.total();
            if total <= 0.0 {
                return Err(Error::SamplingExhausted {
                    drawn,
                    wanted: e.m(),
                });
            }
            let leaf = tree.find(uniform_f64(&mut rng) * total);
            counts[leaf] += 1;
            let left = c.capacities[leaf] - counts[leaf];
            tree.set(leaf, c.weights[leaf] * left as f64);
        }
        draws.push(collect_draw(&c, &counts));
    }
    Ok(batch(e, seed, draws))
}

/// Relative frequency of each count of dyad `(i, j)`, indexed by count.
/// An empty batch gives an empty histogram.
pub fn empirical_marginal(batch: &SampleBatch, i: usize, j: usize) -> Vec<f64> {
    let (i, j) = if batch.directed || i <= j {
        (i, j)
    } else {
        (j, i)
    };
    let mut hist: Vec<u64> = Vec::new();
    for draw in &batch.draws {
        let x = draw
            .iter()
            .find(|&&(d, _)| d == (i, j))
            .map_or(0, |&(_, x)| x) as usize;
        if hist.len() <= x {
            hist.resize(x + 1, 0);
        }
        hist[x] += 1;
    }
    let total = batch.draws.len() as f64;
    hist.into_iter().map(|h| h as f64 / total).collect()
}

const DUMP_MAGIC: &str = "# ghype-sample v1";

/// Writes the batch as a header line followed by one line of `i j count`
/// triples per draw.
pub fn write_batch<W: Write>(batch: &SampleBatch, mut out: W) -> Result<()> {
    writeln!(
        out,
        "{DUMP_MAGIC} fingerprint={} seed={} draws={} m={} n={} directed={}",
        batch.fingerprint,
        batch.seed,
        batch.draws.len(),
        batch.m,
        batch.n,
        batch.directed
    )?;
    for draw in &batch.draws {
        let line: Vec<String> = draw
            .iter()
            .map(|&((i, j), x)| format!("{i} {j} {x}"))
            .collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Reads a batch written by [`write_batch`].
pub fn read_batch<R: BufRead>(reader: R) -> Result<SampleBatch> {
    let mut lines = reader.lines();
    let parse_err = |line: usize, message: String| Error::Parse { line, message };
    let header = lines.next().ok_or(Error::EmptyInput)??;
    let fields = header
        .strip_prefix(DUMP_MAGIC)
        .ok_or_else(|| parse_err(1, "missing sample dump header".into()))?;
    let get = |key: &str| -> Result<String> {
        fields
            .split_whitespace()
            .find_map(|f| f.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
            .map(str::to_owned)
            .ok_or_else(|| parse_err(1, format!("header lacks `{key}`")))
    };
    let number = |raw: String, key: &str| -> Result<u64> {
        raw.parse()
            .map_err(|_| parse_err(1, format!("bad `{key}` value `{raw}`")))
    };
    let fingerprint = get("fingerprint")?;
    let seed = number(get("seed")?, "seed")?;
    let expected = number(get("draws")?, "draws")? as usize;
    let m = number(get("m")?, "m")?;
    let n = number(get("n")?, "n")? as usize;
    let directed = match get("directed")?.as_str() {
        "true" => true,
        "false" => false,
        other => return Err(parse_err(1, format!("bad `directed` value `{other}`"))),
    };
    let mut draws = Vec::with_capacity(expected);
    for (k, line) in lines.enumerate() {
        let line = line?;
        let numbers: Vec<u64> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| parse_err(k + 2, format!("bad number `{t}`")))
            })
            .collect::<Result<_>>()?;
        if !numbers.len().is_multiple_of(3) {
            return Err(parse_err(k + 2, "expected `i j count` triples".into()));
        }
        draws.push(
            numbers
                .chunks(3)
                .map(|t| ((t[0] as usize, t[1] as usize), t[2]))
                .collect(),
        );
    }
    if draws.len() != expected {
        return Err(parse_err(
            1,
            format!("header announces {expected} draws, found {}", draws.len()),
        ));
    }
    Ok(SampleBatch {
        fingerprint,
        seed,
        n,
        directed,
        m,
        draws,
    })
}
