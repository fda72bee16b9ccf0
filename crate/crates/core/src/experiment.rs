//! Randomized rejection-vs-distance experiments with reproducible seeding and
//! CSV reporting. Same seed and inputs give byte-identical output regardless
//! of the thread count.

use crate::code::{LinearCodeModel, Word, DEFAULT_CODEWORD_CAP};
use crate::ratio::{fmt_frac, rat_int, rat_u, Rat};
use crate::{Error, Result};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Corruption rates in [0, 1], one grid point each.
    pub rates: Vec<Rat>,
    pub samples_per_rate: u64,
    pub seed: u64,
    pub delta: Rat,
    /// Amplified-bound constant; defaults to 2(δ - (p-1)/p)/s when absent.
    pub r: Option<Rat>,
    /// Amplified-bound exponent.
    pub t: u32,
    pub threads: usize,
    pub codeword_cap: u64,
}

impl ExperimentConfig {
    pub fn new(rates: Vec<Rat>, samples_per_rate: u64, seed: u64, delta: Rat) -> Result<Self> {
        if samples_per_rate == 0 {
            return Err(Error::domain(
                "samples per rate must be at least 1".to_string(),
            ));
        }
        for r in &rates {
            if *r < rat_int(0) || *r > rat_int(1) {
                return Err(Error::domain(format!("corruption rate {r} outside [0, 1]")));
            }
        }
        Ok(ExperimentConfig {
            rates,
            samples_per_rate,
            seed,
            delta,
            r: None,
            t: 3,
            threads: 1,
            codeword_cap: DEFAULT_CODEWORD_CAP,
        })
    }

    fn amplified_r(&self, code: &LinearCodeModel) -> Rat {
        match &self.r {
            Some(r) => r.clone(),
            None => {
                // Default amplified-bound constant.
                let p = code.p();
                let s = code.system().s();
                rat_int(2) * (&self.delta - rat_u(p - 1) / rat_u(p)) / rat_u(s as u64)
            }
        }
    }
}

/// One CSV row per sample:
/// `seed,rate,sample,dist,rej,bound_rhs,corrector_flips,corrected_in_code`.
pub const CSV_HEADER: &str =
    "seed,rate,sample,dist,rej,bound_rhs,corrector_flips,corrected_in_code";

#[derive(Debug, Clone)]
struct SampleRow {
    rate_idx: usize,
    sample: u64,
    line: String,
}

/// Mixes the experiment seed with grid coordinates into a per-sample stream.
fn sub_seed(seed: u64, rate_idx: usize, sample: u64) -> u64 {
    // splitmix64 over the packed coordinates
    let mut z = seed
        .wrapping_add(0x9e3779b97f4a7c15u64.wrapping_mul(1 + rate_idx as u64))
        .wrapping_add(0x85ebca6bu64.wrapping_mul(sample + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn run_sample(
    code: &LinearCodeModel,
    cfg: &ExperimentConfig,
    rate_idx: usize,
    sample: u64,
) -> Result<SampleRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, rate_idx, sample));
    let p = code.p();
    let n = code.vertex_count();
    let basis = code.code_basis();
    let f = code.field();

    // Random codeword: random coefficients over the null-space basis.
    let mut word = Word::zero(n);
    for b in &basis {
        let coeff = rng.next_u64() % p;
        if coeff != 0 {
            for v in 0..n {
                word.0[v] = f.add(word.0[v], f.mul(coeff, b.0[v]));
            }
        }
    }
    // Corrupt each coordinate independently with probability `rate`, replacing
    // the symbol by a uniformly random different one.
    let rate = &cfg.rates[rate_idx];
    let rate_f = rate.to_f64().unwrap_or(0.0);
    for v in 0..n {
        let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        if u < rate_f {
            let shift = 1 + rng.next_u64() % (p - 1);
            word.0[v] = f.add(word.0[v], shift);
        }
    }

    let rej = code.rej(&word)?;
    let (dist, bound_rhs) = match code.nearest_codeword(&word, cfg.codeword_cap) {
        Ok((_, d)) => {
            let k = rat_u(code.system().k() as u64);
            let mut k_pow = rat_int(1);
            for _ in 0..cfg.t {
                k_pow *= &k;
            }
            let inv = rat_int(1) / k_pow;
            let min = if d < inv { d.clone() } else { inv };
            let rhs = k * cfg.amplified_r(code) * min;
            (Some(d), Some(rhs))
        }
        Err(Error::Capacity(_)) => (None, None),
        Err(e) => return Err(e),
    };
    let (corrected, flips) = code.bitflip_correct(&word, &cfg.delta)?;
    let corrected_in_code = code.is_codeword(&corrected)?;

    let line = format!(
        "{},{},{},{},{},{},{},{}",
        cfg.seed,
        fmt_frac(rate),
        sample,
        dist.as_ref().map_or("na".to_string(), fmt_frac),
        fmt_frac(&rej),
        bound_rhs.as_ref().map_or("na".to_string(), fmt_frac),
        flips.len(),
        corrected_in_code
    );
    Ok(SampleRow {
        rate_idx,
        sample,
        line,
    })
}

/// Runs the experiment and renders the CSV (header plus one row per sample,
/// ordered by rate then sample index).
pub fn run_rejection_experiment(code: &LinearCodeModel, cfg: &ExperimentConfig) -> Result<String> {
    let jobs: Vec<(usize, u64)> = (0..cfg.rates.len())
        .flat_map(|r| (0..cfg.samples_per_rate).map(move |s| (r, s)))
        .collect();
    let threads = cfg.threads.max(1).min(jobs.len().max(1));
    let mut rows: Vec<SampleRow> = if threads <= 1 {
        jobs.iter()
            .map(|&(r, s)| run_sample(code, cfg, r, s))
            .collect::<Result<_>>()?
    } else {
        // Samples are independent; sub-seeds make any partition equivalent.
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for chunk in jobs.chunks(jobs.len().div_ceil(threads)) {
                handles.push(scope.spawn(move || {
                    chunk
                        .iter()
                        .map(|&(r, s)| run_sample(code, cfg, r, s))
                        .collect::<Result<Vec<_>>>()
                }));
            }
            let mut all = Vec::new();
            for h in handles {
                all.extend(h.join().expect("worker thread panicked")?);
            }
            Ok::<Vec<SampleRow>, Error>(all)
        })?
    };
    rows.sort_by_key(|r| (r.rate_idx, r.sample));
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.line);
        out.push('\n');
    }
    Ok(out)
}
