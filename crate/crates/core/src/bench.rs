//! Random game generation and runtime benchmarking.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{ActionPayoff, Discount, HazingInstance, SymmetricGame};
use crate::io::GenMeta;
use crate::solvers::{solve, Algo, Epsilon};

/// Identifier of the generator's PRNG, recorded in generated files.
pub const RNG_NAME: &str = "chacha8";

/// Largest `p` drawn by the generator.
pub const PAYOFF_CAP: i64 = 30;

pub const CSV_HEADER: &str = "n,mpd,algo,epsilon,trials,mean_runtime_ns,feasible_count,mean_total_hazing";

pub const DEFAULT_WARMUP: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub n: usize,
    pub mpd: i64,
    pub seed: u64,
    pub count: usize,
}

/// Discount factor of generated games. The solvers ignore it.
pub fn default_beta() -> Discount {
    Discount::from_ratio(9, 10).expect("9/10 is a valid discount")
}

/// Draws `count` games: each action's `p` is uniform on `[0, min(30, mpd)]`
/// and its `p*` uniform on `[p, mpd]`.
pub fn gen_games(cfg: &GenConfig) -> Result<Vec<SymmetricGame>> {
    Ok(gen_games_with_meta(cfg, &default_beta())?.into_iter().map(|(g, _)| g).collect())
}

pub fn gen_games_with_meta(cfg: &GenConfig, beta: &Discount) -> Result<Vec<(SymmetricGame, GenMeta)>> {
    if cfg.n == 0 {
        return Err(Error::EmptyGame);
    }
    if cfg.mpd < 0 {
        return Err(Error::Parse(format!("mpd must be nonnegative, got {}", cfg.mpd)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let p_cap = PAYOFF_CAP.min(cfg.mpd);
    (0..cfg.count)
        .map(|index| {
            let actions = (0..cfg.n)
                .map(|_| {
                    let p = rng.gen_range(0..=p_cap);
                    let p_star = rng.gen_range(p..=cfg.mpd);
                    ActionPayoff::new(p, p_star)
                })
                .collect();
            let meta = GenMeta { rng: RNG_NAME.into(), seed: cfg.seed, n: cfg.n, mpd: cfg.mpd, index };
            Ok((SymmetricGame::new(actions, beta.clone())?, meta))
        })
        .collect()
}

/// Games sharing one `(n, mpd)` point.
#[derive(Clone, Debug)]
pub struct BenchCell {
    pub n: usize,
    pub mpd: i64,
    pub games: Vec<SymmetricGame>,
}

#[derive(Clone, Copy, Debug)]
pub struct BenchOptions {
    /// Timed solves per record, cycling through the cell's games.
    pub trials: usize,
    pub warmup: usize,
    pub threads: usize,
}

impl BenchOptions {
    pub fn new(trials: usize) -> Self {
        BenchOptions { trials, warmup: DEFAULT_WARMUP, threads: threads_from_env() }
    }
}

/// Worker count: `HAZEOPT_THREADS` if set, otherwise the available
/// parallelism.
pub fn threads_from_env() -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var("HAZEOPT_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        Some(cap) if cap >= 1 => cap,
        _ => available,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub mpd: i64,
    pub algo: Algo,
    pub epsilon: Option<Epsilon>,
    pub trials: usize,
    pub mean_runtime_ns: f64,
    pub feasible_count: usize,
    /// Mean over feasible trials; `None` if there were none.
    pub mean_total_hazing: Option<f64>,
}

impl BenchRecord {
    fn sort_key(&self) -> (usize, i64, Algo, Option<Epsilon>) {
        (self.n, self.mpd, self.algo, self.epsilon)
    }

    pub fn csv_fields(&self) -> [String; 8] {
        [
            self.n.to_string(),
            self.mpd.to_string(),
            self.algo.name().to_string(),
            self.epsilon.map(|e| e.to_f64().to_string()).unwrap_or_default(),
            self.trials.to_string(),
            format!("{:.1}", self.mean_runtime_ns),
            self.feasible_count.to_string(),
            self.mean_total_hazing.map(|h| h.to_string()).unwrap_or_default(),
        ]
    }
}

/// Times every `(cell, algo, epsilon)` combination. The FPTAS runs once per
/// epsilon; exact solvers run once with a blank epsilon. Records come back
/// sorted by `(n, mpd, algo, epsilon)`.
pub fn run_bench(
    cells: &[BenchCell],
    algos: &[Algo],
    epsilons: &[Epsilon],
    opts: &BenchOptions,
) -> Result<Vec<BenchRecord>> {
    if algos.is_empty() {
        return Err(Error::Parse("no algorithm selected".into()));
    }
    if algos.contains(&Algo::Fptas) && epsilons.is_empty() {
        return Err(Error::InvalidEpsilon("fptas needs at least one epsilon".into()));
    }
    if opts.trials == 0 {
        return Err(Error::Parse("trials must be positive".into()));
    }
    if let Some(c) = cells.iter().find(|c| c.games.is_empty()) {
        return Err(Error::Parse(format!("no games for n={} mpd={}", c.n, c.mpd)));
    }

    let instances: Vec<Vec<HazingInstance>> =
        cells.iter().map(|c| c.games.iter().map(|g| g.to_hazing_instance()).collect()).collect();

    let mut jobs = Vec::new();
    for cell in 0..cells.len() {
        for &algo in algos {
            if algo.is_exact() {
                jobs.push((cell, algo, None));
            } else {
                jobs.extend(epsilons.iter().map(|&e| (cell, algo, Some(e))));
            }
        }
    }

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Result<BenchRecord>>> = Mutex::new(Vec::with_capacity(jobs.len()));
    let workers = opts.threads.clamp(1, jobs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(cell, algo, eps)) = jobs.get(i) else { break };
                let record = time_job(&cells[cell], &instances[cell], algo, eps, opts);
                results.lock().expect("no worker panics while holding the lock").push(record);
            });
        }
    });

    let mut records = results.into_inner().expect("workers finished").into_iter().collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| r.sort_key());
    Ok(records)
}

fn time_job(
    cell: &BenchCell,
    instances: &[HazingInstance],
    algo: Algo,
    eps: Option<Epsilon>,
    opts: &BenchOptions,
) -> Result<BenchRecord> {
    for inst in instances.iter().cycle().take(opts.warmup) {
        std::hint::black_box(solve(inst, algo, eps)?);
    }
    let mut elapsed_ns: u128 = 0;
    let mut feasible = 0usize;
    let mut hazing_sum: i128 = 0;
    for inst in instances.iter().cycle().take(opts.trials) {
        let start = Instant::now();
        let result = solve(std::hint::black_box(inst), algo, eps)?;
        elapsed_ns += start.elapsed().as_nanos();
        if let Some(h) = result.hazing() {
            feasible += 1;
            hazing_sum += h as i128;
        }
    }
    Ok(BenchRecord {
        n: cell.n,
        mpd: cell.mpd,
        algo,
        epsilon: eps,
        trials: opts.trials,
        mean_runtime_ns: (elapsed_ns as f64 / opts.trials as f64).max(1.0),
        feasible_count: feasible,
        mean_total_hazing: (feasible > 0).then(|| hazing_sum as f64 / feasible as f64),
    })
}

/// Seed for the games of one grid point, so that adding points to a grid
/// leaves the others unchanged.
pub fn cell_seed(seed: u64, n: usize, mpd: i64) -> u64 {
    seed ^ ((n as u64) << 40) ^ (mpd as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Generates `trials` games for every `(n, mpd)` pair.
pub fn grid_cells(n_list: &[usize], mpd_list: &[i64], seed: u64, trials: usize) -> Result<Vec<BenchCell>> {
    let mut cells = Vec::new();
    for &n in n_list {
        for &mpd in mpd_list {
            let cfg = GenConfig { n, mpd, seed: cell_seed(seed, n, mpd), count: trials };
            cells.push(BenchCell { n, mpd, games: gen_games(&cfg)? });
        }
    }
    Ok(cells)
}

/// Writes records to `path`. An existing file must start with the expected
/// header and is appended to; otherwise the header is written first.
pub fn write_csv(path: &Path, records: &[BenchRecord]) -> Result<()> {
    let existing = match std::fs::File::open(path) {
        Ok(f) => {
            let mut first = String::new();
            BufReader::new(f).read_line(&mut first)?;
            Some(first)
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
        Err(e) => return Err(e.into()),
    };
    let needs_header = match existing.as_deref() {
        None | Some("") => true,
        Some(line) if line.trim_end() == CSV_HEADER => false,
        Some(line) => {
            return Err(Error::Parse(format!("{} has an unexpected header {:?}", path.display(), line.trim_end())))
        }
    };
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    if needs_header {
        writer.write_record(CSV_HEADER.split(','))?;
    }
    for r in records {
        writer.write_record(r.csv_fields())?;
    }
    writer.flush()?;
    Ok(())
}

/// Parses rows written by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<BenchRecord>> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Parse(format!("unexpected header {:?}", header.join(","))));
    }
    let num = |s: &str| -> Result<f64> { s.parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))) };
    let int = |s: &str| -> Result<i64> { s.parse::<i64>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))) };
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let f = |i: usize| row.get(i).unwrap_or("");
        out.push(BenchRecord {
            n: int(f(0))? as usize,
            mpd: int(f(1))?,
            algo: f(2).parse()?,
            epsilon: if f(3).is_empty() { None } else { Some(f(3).parse()?) },
            trials: int(f(4))? as usize,
            mean_runtime_ns: num(f(5))?,
            feasible_count: int(f(6))? as usize,
            mean_total_hazing: if f(7).is_empty() { None } else { Some(num(f(7))?) },
        });
    }
    Ok(out)
}

/// Renders records as CSV text, header included.
pub fn to_csv_string(records: &[BenchRecord]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for r in records {
        writer.write_record(r.csv_fields()).expect("writing to memory");
    }
    out.push_str(&String::from_utf8(writer.into_inner().expect("writing to memory")).expect("ascii"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, mpd: i64, seed: u64, count: usize) -> GenConfig {
        GenConfig { n, mpd, seed, count }
    }

    #[test]
    fn generator_is_deterministic() {
        let a = gen_games(&cfg(5, 100, 7, 20)).unwrap();
        let b = gen_games(&cfg(5, 100, 7, 20)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gen_games(&cfg(5, 100, 8, 20)).unwrap());
    }

    #[test]
    fn generator_ranges() {
        for mpd in [0, 10, 30, 45, 400] {
            for g in gen_games(&cfg(8, mpd, 3, 50)).unwrap() {
                for a in g.actions() {
                    assert!((0..=PAYOFF_CAP.min(mpd)).contains(&a.p));
                    assert!(a.p <= a.p_star && a.p_star <= mpd);
                }
                // The goal action deviates at least as profitably as the
                // best-payoff action, so the final threshold is nonnegative.
                assert!(g.to_hazing_instance().delta() >= 0);
            }
        }
        assert!(gen_games(&cfg(3, -1, 0, 1)).is_err());
        assert!(gen_games(&cfg(0, 50, 0, 1)).is_err());
    }

    #[test]
    fn one_record_per_algo() {
        let cells = vec![BenchCell { n: 4, mpd: 60, games: gen_games(&cfg(4, 60, 1, 1)).unwrap() }];
        let opts = BenchOptions { trials: 1, warmup: 0, threads: 2 };
        let algos = [Algo::Ilp, Algo::Dp, Algo::Fptas];
        let eps = [Epsilon::new(1, 2).unwrap()];
        let recs = run_bench(&cells, &algos, &eps, &opts).unwrap();
        assert_eq!(recs.iter().map(|r| r.algo).collect::<Vec<_>>(), vec![Algo::Dp, Algo::Ilp, Algo::Fptas]);
        assert!(recs.iter().all(|r| r.trials == 1 && r.mean_runtime_ns > 0.0));
        assert_eq!(recs[0].mean_total_hazing, recs[1].mean_total_hazing);
        assert_eq!(recs[0].epsilon, None);
        assert_eq!(recs[2].epsilon, Some(eps[0]));
    }

    #[test]
    fn bench_rejects_bad_plans() {
        let cells = vec![BenchCell { n: 4, mpd: 60, games: gen_games(&cfg(4, 60, 1, 1)).unwrap() }];
        let opts = BenchOptions { trials: 1, warmup: 0, threads: 1 };
        assert!(run_bench(&cells, &[], &[], &opts).is_err());
        assert!(run_bench(&cells, &[Algo::Fptas], &[], &opts).is_err());
    }

    #[test]
    fn csv_appends_under_one_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bench.csv");
        let rec = BenchRecord {
            n: 30,
            mpd: 100,
            algo: Algo::Fptas,
            epsilon: Some(Epsilon::new(1, 10).unwrap()),
            trials: 5,
            mean_runtime_ns: 1234.5,
            feasible_count: 0,
            mean_total_hazing: None,
        };
        write_csv(&path, std::slice::from_ref(&rec)).unwrap();
        write_csv(&path, std::slice::from_ref(&rec)).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines, vec![CSV_HEADER, "30,100,fptas,0.1,5,1234.5,0,", "30,100,fptas,0.1,5,1234.5,0,"]);
        assert_eq!(read_csv(&path).unwrap(), vec![rec.clone(), rec]);

        std::fs::write(&path, "a,b\n").unwrap();
        assert!(write_csv(&path, &[]).is_err());
    }
}
