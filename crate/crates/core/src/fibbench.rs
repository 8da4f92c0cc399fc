use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::fib::{FaceId, FaceKind, FibTrie};
use crate::name::{Name, TokenMode};

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub trie_size: usize,
    pub op: &'static str,
    pub mean_ns: f64,
    pub stddev_ns: f64,
}

/// Structured URL-like name: a three-level shared hierarchy and a short
/// unique tail, so large tries share interior paths the way real content
/// catalogs do.
pub fn structured_name(rng: &mut impl Rng, serial: usize) -> Name {
    let dom = rng.gen_range(0..50u32);
    let sub = rng.gen_range(0..100u32);
    let srv = rng.gen_range(0..200u32);
    format!("/dom{dom:02}/sub{sub:02}/srv{srv:03}/{}", base36(serial))
        .parse()
        .expect("generated name is valid")
}

fn base36(mut n: usize) -> String {
    const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";
    let mut out = [b'0'; 5];
    for slot in out.iter_mut().rev() {
        *slot = DIGITS[n % 36];
        n /= 36;
    }
    String::from_utf8(out.to_vec()).unwrap()
}

/// Build a character-mode trie of `n` distinct names.
pub fn build_char_trie(n: usize, rng: &mut impl Rng) -> (FibTrie, Vec<Name>) {
    let mut trie = FibTrie::new(TokenMode::Character);
    let mut names = Vec::with_capacity(n);
    for serial in 0..n {
        let name = structured_name(rng, serial);
        trie.insert(&name, FaceId(1), FaceKind::Network);
        names.push(name);
    }
    (trie, names)
}

fn mean_stddev(samples: &[f64]) -> (f64, f64) {
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let var = samples
        .iter()
        .map(|s| (s - mean) * (s - mean))
        .sum::<f64>()
        / samples.len() as f64;
    (mean, var.sqrt())
}

/// Time `batch` random lookups and `batch` insertions per repetition on a
/// trie of each size. Lookups mix present names and fresh-tail misses;
/// tokenization happens outside the timed region.
pub fn bench_fib(
    sizes: &[usize],
    repetitions: usize,
    batch: usize,
    seed: u64,
) -> Result<Vec<BenchRow>, String> {
    if sizes.iter().any(|&s| s == 0) {
        return Err("trie size 0 is not benchmarkable".to_string());
    }
    let mut rows = Vec::new();
    for &size in sizes {
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ size as u64);
        let (mut trie, names) = build_char_trie(size, &mut rng);

        let mut lookup_samples = Vec::with_capacity(repetitions);
        let mut insert_samples = Vec::with_capacity(repetitions);
        let mut extra_serial = size;
        let mut sink = 0usize;
        // Untimed warmup pass so the first timed repetition doesn't pay the
        // cold-cache penalty that would otherwise dominate small tries.
        for _ in 0..batch {
            let tokens = names[rng.gen_range(0..names.len())].tokens(TokenMode::Character);
            sink = sink.wrapping_add(match trie.af_lookup_tokens(&tokens) {
                crate::fib::LookupResult::Forward(f) => f.0 as usize,
                crate::fib::LookupResult::NoRoute => 1,
            });
        }
        for _ in 0..repetitions {
            // Half hits, half misses, pre-tokenized.
            let queries: Vec<Vec<String>> = (0..batch)
                .map(|i| {
                    let name = if i % 2 == 0 {
                        names[rng.gen_range(0..names.len())].clone()
                    } else {
                        extra_serial += 1;
                        structured_name(&mut rng, extra_serial)
                    };
                    name.tokens(TokenMode::Character)
                })
                .collect();
            let start = Instant::now();
            for q in &queries {
                sink = sink.wrapping_add(match trie.af_lookup_tokens(q) {
                    crate::fib::LookupResult::Forward(f) => f.0 as usize,
                    crate::fib::LookupResult::NoRoute => 1,
                });
            }
            let elapsed = start.elapsed().as_nanos() as f64;
            lookup_samples.push(elapsed / batch as f64);

            let inserts: Vec<Vec<String>> = (0..batch)
                .map(|_| {
                    extra_serial += 1;
                    structured_name(&mut rng, extra_serial).tokens(TokenMode::Character)
                })
                .collect();
            let start = Instant::now();
            for tokens in &inserts {
                trie.insert_tokens(tokens, FaceId(1), FaceKind::Network);
            }
            let elapsed = start.elapsed().as_nanos() as f64;
            insert_samples.push(elapsed / batch as f64);
        }
        std::hint::black_box(sink);
        let (mean, stddev) = mean_stddev(&lookup_samples);
        rows.push(BenchRow {
            trie_size: size,
            op: "lookup",
            mean_ns: mean,
            stddev_ns: stddev,
        });
        let (mean, stddev) = mean_stddev(&insert_samples);
        rows.push(BenchRow {
            trie_size: size,
            op: "insert",
            mean_ns: mean,
            stddev_ns: stddev,
        });
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("trie_size,op,mean_ns,stddev_ns\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{:.1},{:.1}",
            r.trie_size, r.op, r.mean_ns, r.stddev_ns
        );
    }
    out
}
