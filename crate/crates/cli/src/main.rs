//! `nca`: label trees, answer NCA queries from labels, generate test trees,
//! verify schemes against a tree, and benchmark.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use clap::{Parser, Subcommand};
use rand::Rng;
use rayon::prelude::*;

use nca_labels::bits::BitString;
use nca_labels::schemes::{label_tree, nca_from_labels, payload_of_nca, Labeling, SchemeId};
use nca_labels::tree::{generate, rng_from_seed, Family, NodeId, RootedTree};

/// Seed used when neither `--seed` nor `NCA_SEED` is given.
const DEFAULT_SEED: u64 = 20130;

/// Above this many ordered pairs, `verify` samples instead of checking all.
const PAIR_LIMIT: u64 = 1_000_000;

#[derive(Parser)]
#[command(name = "nca", version, about = "Nearest-common-ancestor labeling schemes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct SchemeArgs {
    /// general3t, generalopt, binary, caterpillar or payload
    #[arg(long, default_value = "general3t")]
    scheme: String,
    /// Payload width in bits, for the payload scheme
    #[arg(long, default_value_t = 4)]
    k: usize,
}

impl SchemeArgs {
    fn resolve(&self) -> Result<SchemeId> {
        Ok(SchemeId::from_name(&self.scheme, Some(self.k))?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Label every node of a tree file
    Label {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Payload file, `<id> <bits>` per line; random payloads if omitted
        #[arg(long)]
        payloads: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, env = "NCA_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Compute the NCA label of two nodes from their labels
    Query {
        /// Label file; queries name nodes by id
        #[arg(long, requires_all = ["u", "v"])]
        labels: Option<PathBuf>,
        #[arg(long)]
        u: Option<NodeId>,
        #[arg(long)]
        v: Option<NodeId>,
        /// Raw label strings instead of a label file (`-` for the empty label)
        #[arg(long, conflicts_with = "labels", requires = "b")]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        /// Scheme of raw labels
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Tree file for cross-checking against the ancestor walk
        #[arg(long)]
        tree: Option<PathBuf>,
    },
    /// Generate a tree file
    Gen {
        /// random, binary, caterpillar or threetwo
        #[arg(long)]
        family: Family,
        /// Node count (random, binary, caterpillar)
        #[arg(long, required_unless_present = "kparam")]
        n: Option<usize>,
        /// Half-length of the 3-2 sequence (threetwo)
        #[arg(long)]
        kparam: Option<usize>,
        #[arg(long, env = "NCA_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a scheme (or all applicable ones) against a tree
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// A scheme name, or `all`
        #[arg(long, default_value = "all")]
        scheme: String,
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Check this label file instead of labeling the tree
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long, env = "NCA_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Time labeling and decoding; TSV on standard output
    Bench {
        #[arg(long)]
        family: Family,
        /// Comma-separated node counts (or k values for threetwo)
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        sizes: Vec<usize>,
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Random query pairs per size
        #[arg(long, default_value_t = 1_000_000)]
        pairs: usize,
        #[arg(long, env = "NCA_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn read_tree(path: &Path) -> Result<RootedTree> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    RootedTree::parse(&text).with_context(|| format!("parsing tree {}", path.display()))
}

fn read_labels(path: &Path) -> Result<Labeling> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Labeling::parse(&text).with_context(|| format!("parsing labels {}", path.display()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(std::io::stdout().write_all(text.as_bytes())?),
    }
}

fn random_payloads(n: usize, k: usize, seed: u64) -> Vec<BitString> {
    let mut rng = rng_from_seed(seed);
    (0..n).map(|_| BitString::from_bits((0..k).map(|_| rng.gen_bool(0.5)))).collect()
}

fn read_payloads(path: &Path, n: usize) -> Result<Vec<BitString>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::with_capacity(n);
    for (i, line) in text.lines().filter(|l| !l.trim().is_empty()).enumerate() {
        let mut parts = line.split_whitespace();
        let (Some(id), Some(bits), None) = (parts.next(), parts.next(), parts.next()) else {
            bail!("payload line {}: expected `<id> <bits>`", i + 1);
        };
        ensure!(id.parse::<usize>().ok() == Some(i + 1), "payload line {}: expected id {}", i + 1, i + 1);
        out.push(bits.parse().with_context(|| format!("payload line {}", i + 1))?);
    }
    Ok(out)
}

fn cmd_label(
    input: &Path,
    scheme: SchemeId,
    payloads: Option<&Path>,
    output: Option<&Path>,
    seed: u64,
) -> Result<()> {
    let tree = read_tree(input)?;
    let pay = match (scheme, payloads) {
        (SchemeId::Payload(_), Some(p)) => Some(read_payloads(p, tree.n())?),
        (SchemeId::Payload(k), None) => Some(random_payloads(tree.n(), k, seed)),
        _ => None,
    };
    let lab = label_tree(&tree, scheme, pay.as_deref())?;
    write_output(output, &lab.to_text())?;
    let summary = format!("n={} max_bits={} bound={}", tree.n(), lab.max_bits(), scheme.bound(tree.n()));
    if output.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn cmd_query(
    labels: Option<&Path>,
    ids: Option<(NodeId, NodeId)>,
    raw: Option<(&str, &str)>,
    scheme: SchemeId,
    tree: Option<&Path>,
) -> Result<()> {
    let (scheme, a, b, lab) = match (labels, raw) {
        (Some(path), _) => {
            let lab = read_labels(path)?;
            let (u, v) = ids.expect("clap requires --u and --v with --labels");
            for id in [u, v] {
                ensure!((1..=lab.n()).contains(&id), "node {id} is not in 1..={}", lab.n());
            }
            (lab.scheme(), lab.label(u).clone(), lab.label(v).clone(), Some(lab))
        }
        (None, Some((a, b))) => (
            scheme,
            a.parse().context("parsing --a")?,
            b.parse().context("parsing --b")?,
            None,
        ),
        (None, None) => bail!("give either --labels with --u/--v, or --a/--b"),
    };
    let nca = nca_from_labels(scheme, &a, &b)?;
    println!("{nca}");
    if let SchemeId::Payload(_) = scheme {
        println!("payload {}", payload_of_nca(scheme, &a, &b)?);
    }
    if let (Some(path), Some(lab), Some((u, v))) = (tree, lab, ids) {
        let tree = read_tree(path)?;
        let w = tree.nca_oracle(u, v)?;
        ensure!(lab.label(w) == &nca, "oracle says node {w} with label {}", lab.label(w));
        println!("oracle node {w}: ok");
    }
    Ok(())
}

fn cmd_gen(family: Family, n: Option<usize>, kparam: Option<usize>, seed: u64, output: Option<&Path>) -> Result<()> {
    let size = match family {
        Family::ThreeTwo => kparam.context("threetwo needs --kparam")?,
        _ => n.context("this family needs --n")?,
    };
    let tree = generate(family, size, seed)?;
    write_output(output, &tree.to_text())
}

/// Ordered query pairs: all of them, or a seeded sample above [`PAIR_LIMIT`].
fn query_pairs(n: usize, seed: u64) -> (Vec<(NodeId, NodeId)>, bool) {
    let total = (n as u64) * (n as u64);
    if total <= PAIR_LIMIT {
        let all = (1..=n).flat_map(|u| (1..=n).map(move |v| (u, v))).collect();
        return (all, false);
    }
    let mut rng = rng_from_seed(seed);
    let sample = (0..PAIR_LIMIT).map(|_| (rng.gen_range(1..=n), rng.gen_range(1..=n))).collect();
    (sample, true)
}

/// Problems found for one scheme; empty means it passed.
fn verify_scheme(tree: &RootedTree, lab: &Labeling, pay: Option<&[BitString]>, pairs: &[(NodeId, NodeId)]) -> Vec<String> {
    let scheme = lab.scheme();
    let n = tree.n();
    let mut problems = Vec::new();
    if lab.n() != n {
        problems.push(format!("label file has {} labels, tree has {n} nodes", lab.n()));
        return problems;
    }
    let bound = scheme.bound(n);
    for v in tree.nodes() {
        let len = lab.label(v).len();
        let bad = match scheme {
            SchemeId::Payload(_) => len != bound,
            _ => len > bound,
        };
        if bad {
            problems.push(format!("node {v}: {len} bits against bound {bound}"));
            break;
        }
    }
    let mismatches: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(u, v)| {
            let w = tree.nca_oracle(u, v).ok()?;
            match nca_from_labels(scheme, lab.label(u), lab.label(v)) {
                Ok(got) if &got == lab.label(w) => {}
                Ok(got) => return Some(format!("({u}, {v}): decoded {got}, node {w} has {}", lab.label(w))),
                Err(e) => return Some(format!("({u}, {v}): {e}")),
            }
            if let Some(p) = pay {
                match payload_of_nca(scheme, lab.label(u), lab.label(v)) {
                    Ok(got) if got == p[w - 1] => {}
                    _ => return Some(format!("({u}, {v}): wrong payload")),
                }
            }
            None
        })
        .collect();
    if let Some(first) = mismatches.first() {
        problems.push(format!("{} bad pairs, first {first}", mismatches.len()));
    }
    problems
}

fn cmd_verify(input: &Path, scheme: &str, k: usize, labels: Option<&Path>, seed: u64) -> Result<bool> {
    let tree = read_tree(input)?;
    let n = tree.n();
    let (pairs, sampled) = query_pairs(n, seed);
    if sampled {
        println!("sampling {} of {} ordered pairs (seed {seed})", pairs.len(), (n as u64) * (n as u64));
    }
    let mut ok = true;
    if let Some(path) = labels {
        let lab = read_labels(path)?;
        let problems = verify_scheme(&tree, &lab, None, &pairs);
        report(lab.scheme(), &problems);
        return Ok(problems.is_empty());
    }
    let schemes: Vec<SchemeId> = if scheme == "all" {
        [SchemeId::General3t, SchemeId::GeneralOpt, SchemeId::Binary, SchemeId::Caterpillar, SchemeId::Payload(k)]
            .into_iter()
            .filter(|s| s.check_tree(&tree).is_ok())
            .collect()
    } else {
        vec![SchemeId::from_name(scheme, Some(k))?]
    };
    for s in schemes {
        let pay = s.payload_width().map(|k| random_payloads(n, k, seed));
        let lab = label_tree(&tree, s, pay.as_deref())?;
        let problems = verify_scheme(&tree, &lab, pay.as_deref(), &pairs);
        ok &= problems.is_empty();
        report(s, &problems);
    }
    Ok(ok)
}

fn report(scheme: SchemeId, problems: &[String]) {
    if problems.is_empty() {
        println!("{scheme}: pass");
    } else {
        for p in problems {
            println!("{scheme}: FAIL {p}");
        }
    }
}

fn cmd_bench(family: Family, sizes: &[usize], scheme: SchemeId, pairs: usize, seed: u64) -> Result<()> {
    println!("family\tscheme\tn\tencode_ms\tmean_decode_ns\tmax_decode_ns\tmax_bits\tbound");
    for &size in sizes {
        let tree = generate(family, size, seed)?;
        let n = tree.n();
        let pay = scheme.payload_width().map(|k| random_payloads(n, k, seed));
        let start = Instant::now();
        let lab = label_tree(&tree, scheme, pay.as_deref())?;
        let encode = start.elapsed();

        let mut rng = rng_from_seed(seed ^ size as u64);
        let queries: Vec<(NodeId, NodeId)> = (0..pairs).map(|_| (rng.gen_range(1..=n), rng.gen_range(1..=n))).collect();
        // The mean comes from an untimed loop; per-query timers would dominate it.
        let start = Instant::now();
        for &(u, v) in &queries {
            std::hint::black_box(nca_from_labels(scheme, lab.label(u), lab.label(v))?);
        }
        let mean_ns = start.elapsed().as_nanos() as f64 / pairs.max(1) as f64;
        let mut max_ns = 0u128;
        for &(u, v) in &queries {
            let t = Instant::now();
            std::hint::black_box(nca_from_labels(scheme, lab.label(u), lab.label(v))?);
            max_ns = max_ns.max(t.elapsed().as_nanos());
        }
        println!(
            "{family}\t{scheme}\t{n}\t{:.3}\t{mean_ns:.1}\t{max_ns}\t{}\t{}",
            encode.as_secs_f64() * 1e3,
            lab.max_bits(),
            scheme.bound(n)
        );
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Label { input, scheme, payloads, output, seed } => {
            cmd_label(&input, scheme.resolve()?, payloads.as_deref(), output.as_deref(), seed)
        }
        Command::Query { labels, u, v, a, b, scheme, tree } => {
            let ids = u.zip(v);
            let raw = a.as_deref().zip(b.as_deref());
            // raw labels name their scheme on the command line
            let s = if raw.is_some() { scheme.resolve()? } else { SchemeId::General3t };
            cmd_query(labels.as_deref(), ids, raw, s, tree.as_deref())
        }
        Command::Gen { family, n, kparam, seed, output } => cmd_gen(family, n, kparam, seed, output.as_deref()),
        Command::Verify { input, scheme, k, labels, seed } => {
            if !cmd_verify(&input, &scheme, k, labels.as_deref(), seed)? {
                std::process::exit(1);
            }
            Ok(())
        }
        Command::Bench { family, sizes, scheme, pairs, seed } => cmd_bench(family, &sizes, scheme.resolve()?, pairs, seed),
    }
}
