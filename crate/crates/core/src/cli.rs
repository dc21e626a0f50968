//! Command-line driver behind the `hip` binary.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::attacks::{attack_linear, attack_readoff, verify_break, RecoveredKey};
use crate::error::Error;
use crate::fixture;
use crate::mqforms::{symbolic_product, QuadForm};
use crate::poly::{random_irreducible, Poly};
use crate::scheme::{
    decrypt, encrypt, keygen, parse_key_file, validate_params, Ciphertext, KeyFile, PrivateKey,
    PublicKey,
};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 42;

/// Seed for the message pairs drawn by `verify` and `demo-paper`.
const VERIFY_SEED: u64 = 7;

#[derive(Debug, Parser)]
#[command(name = "hip", version, about = "Hidden Irreducible Polynomials: keys, encryption and key recovery")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Readoff,
    Linear,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a key pair.
    Keygen {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out_pub: PathBuf,
        #[arg(long)]
        out_priv: PathBuf,
    },
    /// Encrypt two irreducible polynomials of degree k.
    Encrypt {
        #[arg(long = "pub")]
        pub_key: PathBuf,
        /// Coefficients little-endian, space separated, e.g. "1 1 0 1".
        #[arg(long, required_unless_present = "random", conflicts_with = "random")]
        p_poly: Option<String>,
        #[arg(long, required_unless_present = "random", conflicts_with = "random")]
        q_poly: Option<String>,
        /// Sample both messages from --seed instead.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a ciphertext with a private (or recovered) key.
    Decrypt {
        #[arg(long = "priv")]
        priv_key: PathBuf,
        #[arg(long)]
        ct: PathBuf,
    },
    /// Recover the private matrix from a public key.
    Attack {
        #[arg(long = "pub")]
        pub_key: PathBuf,
        #[arg(long, value_enum, default_value = "readoff")]
        method: MethodArg,
        /// Where to write the recovered key; printed when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a private or recovered key against a public key.
    Verify {
        #[arg(long = "pub")]
        pub_key: PathBuf,
        #[arg(long)]
        key: PathBuf,
        #[arg(long, default_value_t = VERIFY_SEED)]
        seed: u64,
    },
    /// Recover the key of the published 15x15 example.
    DemoPaper,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Malformed { path: PathBuf, source: Error },
    #[error("verification failed")]
    VerifyFailed,
    #[error(transparent)]
    Failure(#[from] Error),
}

impl CliError {
    /// Process exit status: 2 usage, 3 file access, 4 malformed input,
    /// 5 failed verification, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Malformed { .. } => 4,
            CliError::VerifyFailed => 5,
            CliError::Failure(_) => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn malformed(path: &Path) -> impl FnOnce(Error) -> CliError + '_ {
    move |source| CliError::Malformed {
        path: path.to_path_buf(),
        source,
    }
}

fn stdout_err(source: io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

fn load_public(path: &Path) -> CliResult<PublicKey> {
    PublicKey::from_text(&read(path)?).map_err(malformed(path))
}

fn load_private(path: &Path) -> CliResult<PrivateKey> {
    PrivateKey::from_text(&read(path)?).map_err(malformed(path))
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Keygen {
            p,
            m,
            n,
            k,
            seed,
            out_pub,
            out_priv,
        } => {
            let params =
                validate_params(*p, *m, *n, *k).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let (pk, sk) = keygen(&params, &mut rng)?;
            write(out_pub, &pk.to_text())?;
            write(out_priv, &sk.to_text())?;
            writeln!(
                out,
                "wrote {} and {} (p={p} m={m} n={n} k={k} seed={seed})",
                out_pub.display(),
                out_priv.display()
            )
            .map_err(stdout_err)
        }
        Command::Encrypt {
            pub_key,
            p_poly,
            q_poly,
            random,
            seed,
            out: ct_path,
        } => {
            let pk = load_public(pub_key)?;
            let params = pk.params();
            let (a, b) = if *random {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (
                    random_irreducible(params.k(), params.ctx(), &mut rng)?,
                    random_irreducible(params.k(), params.ctx(), &mut rng)?,
                )
            } else {
                let parse = |s: &Option<String>| {
                    let s = s.as_deref().unwrap_or_default();
                    Poly::parse(params.ctx(), s).map_err(|e| CliError::Usage(e.to_string()))
                };
                (parse(p_poly)?, parse(q_poly)?)
            };
            let z = encrypt(&pk, &a, &b).map_err(|e| CliError::Usage(e.to_string()))?;
            write(ct_path, &z.to_text())?;
            writeln!(out, "p: {a}\nq: {b}\nwrote {}", ct_path.display()).map_err(stdout_err)
        }
        Command::Decrypt { priv_key, ct } => {
            let sk = load_private(priv_key)?;
            let z = Ciphertext::from_text(sk.params(), &read(ct)?).map_err(malformed(ct))?;
            let plain = decrypt(&sk, &z).map_err(malformed(ct))?;
            write!(out, "{plain}").map_err(stdout_err)
        }
        Command::Attack {
            pub_key,
            method,
            out: key_out,
        } => {
            let pk = load_public(pub_key)?;
            let rec = match method {
                MethodArg::Readoff => attack_readoff(&pk),
                MethodArg::Linear => attack_linear(&pk).map_err(malformed(pub_key))?,
            };
            let text = rec.to_key_text(&pk).map_err(malformed(pub_key))?;
            writeln!(out, "method: {}", rec.method).map_err(stdout_err)?;
            writeln!(out, "{}", rec.summary()).map_err(stdout_err)?;
            match key_out {
                Some(path) => {
                    write(path, &text)?;
                    writeln!(out, "wrote {}", path.display()).map_err(stdout_err)
                }
                None => write!(out, "{text}").map_err(stdout_err),
            }
        }
        Command::Verify { pub_key, key, seed } => {
            let pk = load_public(pub_key)?;
            let t = match parse_key_file(&read(key)?).map_err(malformed(key))? {
                KeyFile::Private(sk) => sk.matrix().clone(),
                KeyFile::Public(_) => {
                    return Err(CliError::Usage(format!(
                        "{} is a public key",
                        key.display()
                    )))
                }
            };
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let report = verify_break(&pk, &t, &mut rng);
            write!(out, "{report}").map_err(stdout_err)?;
            if report.success() {
                Ok(())
            } else {
                Err(CliError::VerifyFailed)
            }
        }
        Command::DemoPaper => demo(out),
    }
}

/// Monomials ordered by the g-variable first, the way the example lists them.
fn render_monomials(form: &QuadForm) -> String {
    let mut terms: Vec<_> = form.terms().collect();
    terms.sort_by_key(|(pair, _)| (pair.j, pair.i));
    let parts: Vec<String> = terms
        .iter()
        .map(|(pair, c)| {
            if c.is_one() {
                format!("y{}*y{}", pair.i, pair.j)
            } else {
                format!("{c}*y{}*y{}", pair.i, pair.j)
            }
        })
        .collect();
    parts.join(" + ")
}

fn render_sums(rec: &RecoveredKey, form: usize, offset: usize) -> String {
    let parts: Vec<String> = rec
        .consistency_report
        .iter()
        .filter(|r| r.form == form && !r.value.is_zero())
        .map(|r| format!("Y{}", r.group - offset))
        .collect();
    parts.join(" + ")
}

fn demo(out: &mut dyn Write) -> CliResult<()> {
    let (pk, sk) = fixture::reference_keys()?;
    let params = pk.params();
    let k = params.k();
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(stdout_err);

    w(out, format!(
        "Reference example: q = {}, k = {k}, n = {} ({} public forms in {} variables)",
        params.ctx().order(),
        params.n(),
        params.dim(),
        2 * (k + 1)
    ))?;
    w(out, format!("h: {} (n and h do not affect the recovery)", params.h()))?;
    w(out, format!("Private T ({0}x{0}):", params.dim()))?;
    write!(out, "{}", sk.matrix()).map_err(stdout_err)?;

    let rec = attack_readoff(&pk);
    let lin = attack_linear(&pk)?;
    let product = symbolic_product(k)?;
    w(out, String::new())?;
    w(out, format!(
        "Coefficient sums: Y_m collects y_i*y_j with i + j = m + {}; labels 1..{} (subtract one for 0-based Y0..Y{})",
        k + 2,
        product.groups().len(),
        product.groups().len() - 1
    ))?;
    for i in [1, 2, params.dim() - 1, params.dim()] {
        let form = &pk.forms()[i - 1];
        w(out, format!("p{i} ({} monomials) = {}", form.len(), render_monomials(form)))?;
        w(out, format!("    = {}", render_sums(&rec, i, 0)))?;
        w(out, format!("    0-based: {}", render_sums(&rec, i, 1)))?;
    }

    w(out, String::new())?;
    let row14: Vec<String> = rec.t.row(13).iter().map(ToString::to_string).collect();
    w(out, format!("Read-off row 14: {}", row14.join(" ")))?;
    w(out, format!("Recovered T (readoff, {}):", rec.summary()))?;
    write!(out, "{}", rec.t).map_err(stdout_err)?;
    let entries = params.dim() * params.dim();
    let mismatches = (0..params.dim())
        .flat_map(|i| (0..params.dim()).map(move |j| (i, j)))
        .filter(|&(i, j)| rec.t[(i, j)] != sk.matrix()[(i, j)])
        .count();
    w(out, format!("entries recovered: {}/{entries}", entries - mismatches))?;
    w(out, format!("READOFF == LINEAR: {}", rec.t == lin.t))?;
    let recovered_ok = rec.t == *sk.matrix() && lin.t == *sk.matrix();
    w(out, format!("RECOVERED == PRIVATE: {recovered_ok}"))?;

    let (a, b) = fixture::sample_messages(params);
    let z = encrypt(&pk, &a, &b)?;
    let stolen = rec.to_private_key(&pk)?;
    let plain = decrypt(&stolen, &z)?;
    w(out, String::new())?;
    w(out, format!("Sample message: p = {a}, q = {b}"))?;
    w(out, format!("Ciphertext z: {}", z.to_text().trim_end()))?;
    w(out, "Decrypted with the recovered key:".to_string())?;
    write!(out, "{plain}").map_err(stdout_err)?;

    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    let report = verify_break(&pk, &rec.t, &mut rng);
    write!(out, "{report}").map_err(stdout_err)?;

    if recovered_ok && report.success() && plain.factors() == (a, b) {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_output_contains_golden_lines() {
        let mut buf = Vec::new();
        run(&Cli { command: Command::DemoPaper }, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("Read-off row 14: 1 0 0 1 0 1 0 1 0 1 1 0 0 1 1\n"));
        assert!(text.contains("RECOVERED == PRIVATE: true\n"));
        assert!(text.contains("entries recovered: 225/225\n"));
        assert!(text.contains("    0-based: Y0 + Y3 + Y5 + Y7 + Y9 + Y10 + Y13 + Y14\n"));
    }

    #[test]
    fn exit_codes_are_distinct() {
        let codes = [
            CliError::Usage(String::new()).exit_code(),
            CliError::Io {
                path: PathBuf::new(),
                source: io::Error::other("x"),
            }
            .exit_code(),
            CliError::Malformed {
                path: PathBuf::new(),
                source: Error::Singular,
            }
            .exit_code(),
            CliError::VerifyFailed.exit_code(),
            CliError::Failure(Error::Singular).exit_code(),
        ];
        let mut sorted = codes.to_vec();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), codes.len());
        assert!(!codes.contains(&0));
    }
}
