use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use sha2::{Digest, Sha256};

use crate::linsup::SuperiorizationParams;
use crate::probgen::DEFAULT_SCALE;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Linsup,
    /// The same loop with `eta0 = 0`.
    AmsOnly,
    SimplexOracle,
    /// External solver run through the bridge subprocess.
    Bridge(String),
}

impl Algorithm {
    pub fn name(&self) -> String {
        match self {
            Algorithm::Linsup => "linsup".into(),
            Algorithm::AmsOnly => "ams-only".into(),
            Algorithm::SimplexOracle => "simplex-oracle".into(),
            Algorithm::Bridge(s) => format!("bridge:{s}"),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linsup" => Ok(Algorithm::Linsup),
            "ams-only" => Ok(Algorithm::AmsOnly),
            "simplex-oracle" => Ok(Algorithm::SimplexOracle),
            _ => match s.strip_prefix("bridge:") {
                Some(name) if !name.is_empty() && !name.contains(',') => Ok(Algorithm::Bridge(name.into())),
                _ => Err(Error::invalid(format!("unknown algorithm {s:?}"))),
            },
        }
    }
}

/// One experiment grid: every (dims, kappa, seed) cell runs every algorithm
/// on the same generated instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub dims: Vec<(usize, usize)>,
    pub kappas: Vec<f64>,
    /// Replicate labels; each one selects an independent instance.
    pub seeds: Vec<u64>,
    pub algorithms: Vec<Algorithm>,
    pub params: SuperiorizationParams<f64>,
    pub base_seed: u64,
    /// Singular-value scale `s` of the generator.
    pub scale: f64,
    /// Program and leading arguments of the bridge subprocess.
    pub bridge_command: Vec<String>,
}

pub const DEFAULT_KAPPAS: [f64; 7] = [1.0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6];
pub const FULL_GRID_DIMS: [(usize, usize); 5] = [(80, 100), (200, 250), (400, 500), (800, 1000), (2000, 2500)];

impl GridSpec {
    pub fn new(dims: Vec<(usize, usize)>, kappas: Vec<f64>, seeds: Vec<u64>, algorithms: Vec<Algorithm>) -> Self {
        GridSpec {
            dims,
            kappas,
            seeds,
            algorithms,
            params: SuperiorizationParams::default(),
            base_seed: 0,
            scale: DEFAULT_SCALE,
            bridge_command: default_bridge_command(),
        }
    }

    /// All five dimension pairs, seven condition numbers, one seed.
    pub fn paper() -> Self {
        Self::new(
            FULL_GRID_DIMS.to_vec(),
            DEFAULT_KAPPAS.to_vec(),
            vec![0],
            vec![Algorithm::Linsup, Algorithm::AmsOnly, Algorithm::SimplexOracle],
        )
    }

    /// The `paper` preset restricted to its three smallest dimension pairs.
    pub fn desk() -> Self {
        GridSpec { dims: FULL_GRID_DIMS[..3].to_vec(), ..Self::paper() }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "desk" => Ok(Self::desk()),
            "paper" => Ok(Self::paper()),
            other => Err(Error::invalid(format!("unknown preset {other:?} (expected desk or paper)"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.kappas.is_empty() || self.seeds.is_empty() || self.algorithms.is_empty() {
            return Err(Error::invalid("grid needs at least one dims pair, kappa, seed and algorithm"));
        }
        if let Some(&(m, n)) = self.dims.iter().find(|&&(m, n)| m < 2 || n < 2) {
            return Err(Error::invalid(format!("dimensions {m}x{n} below 2x2")));
        }
        if let Some(k) = self.kappas.iter().find(|&&k| !(k >= 1.0) || !k.is_finite()) {
            return Err(Error::invalid(format!("kappa {k} below 1")));
        }
        self.params.validate()
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        fs::read_to_string(path)?.parse()
    }
}

pub fn default_bridge_command() -> Vec<String> {
    match std::env::var("LINSUP_BRIDGE") {
        Ok(cmd) if !cmd.trim().is_empty() => cmd.split_whitespace().map(String::from).collect(),
        _ => vec!["python3".into(), "-m".into(), "linsup_bridge".into()],
    }
}

/// Instance seed of a cell: the first eight bytes (little-endian) of
/// `SHA-256("linsup-cell-v1" || base_seed || m || n || kappa_index || seed)`,
/// every integer encoded as u64 little-endian.
pub fn derive_cell_seed(base_seed: u64, m: usize, n: usize, kappa_index: usize, seed: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(b"linsup-cell-v1");
    for v in [base_seed, m as u64, n as u64, kappa_index as u64, seed] {
        h.update(v.to_le_bytes());
    }
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Dims,
    Kappas,
    Seeds,
    Algorithms,
    Params,
}

/// Line-oriented grid file:
///
/// ```text
/// # comment
/// DIMS
/// 80 100
/// 200x250
/// KAPPAS
/// 1 1e3 1e6
/// SEEDS
/// 0 1 2
/// ALGORITHMS
/// linsup
/// ams-only
/// PARAMS
/// epsilon = 1e-8
/// tau_reset = 20
/// ```
impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut spec = GridSpec::new(Vec::new(), Vec::new(), Vec::new(), Vec::new());
        let mut section = Section::None;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |m: String| Error::Parse { line: ln + 1, message: m };
            let next = match line {
                "DIMS" => Some(Section::Dims),
                "KAPPAS" => Some(Section::Kappas),
                "SEEDS" => Some(Section::Seeds),
                "ALGORITHMS" => Some(Section::Algorithms),
                "PARAMS" => Some(Section::Params),
                _ => None,
            };
            if let Some(s) = next {
                section = s;
                continue;
            }
            match section {
                Section::None => return Err(perr(format!("{line:?} outside any section"))),
                Section::Dims => {
                    let parts: Vec<&str> = line.split(|c: char| c == 'x' || c == 'X' || c.is_whitespace() || c == ',')
                        .filter(|s| !s.is_empty())
                        .collect();
                    if parts.len() != 2 {
                        return Err(perr(format!("expected \"m n\", found {line:?}")));
                    }
                    let m = parts[0].parse().map_err(|e| perr(format!("m: {e}")))?;
                    let n = parts[1].parse().map_err(|e| perr(format!("n: {e}")))?;
                    spec.dims.push((m, n));
                }
                Section::Kappas => {
                    for tok in line.split_whitespace() {
                        spec.kappas.push(tok.parse().map_err(|e| perr(format!("kappa {tok:?}: {e}")))?);
                    }
                }
                Section::Seeds => {
                    for tok in line.split_whitespace() {
                        spec.seeds.push(tok.parse().map_err(|e| perr(format!("seed {tok:?}: {e}")))?);
                    }
                }
                Section::Algorithms => {
                    for tok in line.split_whitespace() {
                        spec.algorithms.push(tok.parse().map_err(|e: Error| perr(e.to_string()))?);
                    }
                }
                Section::Params => {
                    let (key, value) = line
                        .split_once('=')
                        .ok_or_else(|| perr(format!("expected key=value, found {line:?}")))?;
                    apply_param(&mut spec, key.trim(), value.trim()).map_err(|e| perr(e.to_string()))?;
                }
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn apply_param(spec: &mut GridSpec, key: &str, value: &str) -> Result<()> {
    fn num<T: FromStr>(key: &str, value: &str) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        value.parse().map_err(|e| Error::invalid(format!("{key}: {e}")))
    }
    let p = &mut spec.params;
    match key {
        "epsilon" => p.epsilon = num(key, value)?,
        "alpha" => p.alpha = num(key, value)?,
        "eta0" => p.eta0 = num(key, value)?,
        "overshoot" | "r" => p.overshoot = num(key, value)?,
        "tau_reset" => p.tau_reset = num(key, value)?,
        "max_iterations" => p.max_iterations = num(key, value)?,
        "time_limit" => p.time_limit = Some(Duration::from_secs_f64(num(key, value)?)),
        "base_seed" => spec.base_seed = num(key, value)?,
        "s" | "scale" => spec.scale = num(key, value)?,
        "bridge_command" => spec.bridge_command = value.split_whitespace().map(String::from).collect(),
        other => return Err(Error::invalid(format!("unknown parameter {other:?}"))),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# desk check
DIMS
80 100
200x250
KAPPAS
1 1e3
1e6
SEEDS
0 1
ALGORITHMS
linsup ams-only
bridge:highs
PARAMS
epsilon = 1e-7
tau_reset=10
time_limit = 2.5
base_seed = 42
";

    #[test]
    fn parses_sample() {
        let g: GridSpec = SAMPLE.parse().unwrap();
        assert_eq!(g.dims, vec![(80, 100), (200, 250)]);
        assert_eq!(g.kappas, vec![1.0, 1e3, 1e6]);
        assert_eq!(g.seeds, vec![0, 1]);
        assert_eq!(
            g.algorithms,
            vec![Algorithm::Linsup, Algorithm::AmsOnly, Algorithm::Bridge("highs".into())]
        );
        assert_eq!(g.params.epsilon, 1e-7);
        assert_eq!(g.params.tau_reset, 10);
        assert_eq!(g.params.time_limit, Some(Duration::from_millis(2500)));
        assert_eq!(g.base_seed, 42);
    }

    #[test]
    fn rejects_bad_files() {
        assert!("80 100\n".parse::<GridSpec>().is_err());
        assert!("DIMS\n80\nKAPPAS\n1\nSEEDS\n0\nALGORITHMS\nlinsup\n".parse::<GridSpec>().is_err());
        assert!("DIMS\n1 5\nKAPPAS\n1\nSEEDS\n0\nALGORITHMS\nlinsup\n".parse::<GridSpec>().is_err());
        assert!("DIMS\n8 5\nKAPPAS\n1\nSEEDS\n0\nALGORITHMS\nfoo\n".parse::<GridSpec>().is_err());
        assert!("DIMS\n8 5\nKAPPAS\n1\nSEEDS\n0\n".parse::<GridSpec>().is_err());
        assert!("DIMS\n8 5\nKAPPAS\n1\nSEEDS\n0\nALGORITHMS\nlinsup\nPARAMS\nwat=1\n".parse::<GridSpec>().is_err());
    }

    #[test]
    fn presets() {
        let d = GridSpec::desk();
        assert_eq!(d.dims, vec![(80, 100), (200, 250), (400, 500)]);
        assert_eq!(d.kappas, DEFAULT_KAPPAS.to_vec());
        assert_eq!(GridSpec::paper().dims.len(), 5);
        assert!(GridSpec::preset("huge").is_err());
    }

    #[test]
    fn cell_seeds_are_stable_and_distinct() {
        let a = derive_cell_seed(0, 80, 100, 2, 1);
        assert_eq!(a, derive_cell_seed(0, 80, 100, 2, 1));
        assert_ne!(a, derive_cell_seed(0, 80, 100, 2, 2));
        assert_ne!(a, derive_cell_seed(0, 80, 100, 3, 1));
        assert_ne!(a, derive_cell_seed(1, 80, 100, 2, 1));
        assert_ne!(a, derive_cell_seed(0, 100, 80, 2, 1));
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in ["linsup", "ams-only", "simplex-oracle", "bridge:glpk"] {
            assert_eq!(a.parse::<Algorithm>().unwrap().name(), a);
        }
        assert!("bridge:".parse::<Algorithm>().is_err());
    }
}
