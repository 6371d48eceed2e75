//! Command-line surface: argument definitions and the complex-number
//! parser for `--s` values like `2+0i`, `0.5-13.2i`, `3i`.

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "copo",
    version,
    about = "Modified Poisson summation, Mellin/zeta identities and Sonine-space verifiers"
)]
pub struct Cli {
    /// Report format for identity checks.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub output: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Co-Poisson identity verifiers.
    Copoisson {
        #[command(subcommand)]
        sub: CopoissonCmd,
    },
    /// Muntz/co-Muntz, principal-value and L2 identities.
    Muntz {
        #[command(subcommand)]
        sub: MuntzCmd,
    },
    /// Evaluate the Riemann zeta function.
    Zeta {
        /// Complex argument, e.g. 2+0i or 0.5+13.2i.
        #[arg(long, value_parser = parse_complex)]
        s: Complex64,
    },
    /// Evaluate the functional-equation factors chi and chi_sin.
    Chi {
        #[arg(long, value_parser = parse_complex)]
        s: Complex64,
    },
    /// Solve the cosine-kernel Fredholm equation and study its
    /// completed Mellin transform.
    Sonine {
        #[command(subcommand)]
        sub: SonineCmd,
    },
    /// The explicit gap-function families.
    Gallery {
        #[command(subcommand)]
        sub: GalleryCmd,
    },
    /// The fractional-part cosine-transform pair.
    Fracpair {
        /// Sample points (non-integer, positive).
        #[arg(long, value_delimiter = ',')]
        v: Vec<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CopoissonCmd {
    /// Truncated-transform identity at each xi.
    Check {
        /// Function specifier, e.g. bump:1,2
        #[arg(long)]
        f: String,
        #[arg(long, value_delimiter = ',')]
        xi: Vec<f64>,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        x_max: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Dirichlet point value of K against eval_K.
    Dirichlet {
        #[arg(long)]
        f: String,
        #[arg(long)]
        xi: f64,
        #[arg(long, default_value_t = 0.25)]
        delta: f64,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Kahane support pair built from centred bumps of half-width b.
    Kahane {
        #[arg(long, default_value_t = 0.25)]
        b: f64,
        #[arg(long, value_delimiter = ',')]
        y: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Duffin's odd alternating formula (f interpreted as odd).
    Duffin {
        #[arg(long)]
        f: String,
        #[arg(long, value_delimiter = ',')]
        y: Vec<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum MuntzCmd {
    /// The Muntz identity on Re s = sigma.
    Check {
        #[arg(long)]
        f: String,
        #[arg(long)]
        sigma: f64,
        #[arg(long, value_delimiter = ',')]
        tau: Vec<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// The co-Muntz identity (right Mellin transform side).
    Comuntz {
        #[arg(long)]
        f: String,
        #[arg(long)]
        sigma: f64,
        #[arg(long, value_delimiter = ',')]
        tau: Vec<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Principal-value pairing of zeta(1+i tau) against a Gaussian.
    Vp {
        /// Shift of the Gaussian test function.
        #[arg(long, default_value_t = 0.0)]
        shift: f64,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// L2 Muntz distribution pairings (Db vs Dc, and the transform
    /// symmetry).
    L2 {
        #[arg(long)]
        f: String,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SonineCmd {
    /// Nystrom solve; optionally locate critical-line zeros.
    Solve {
        #[arg(long)]
        a: f64,
        #[arg(long, default_value = "plus")]
        sign: String,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
        #[arg(long)]
        zeros_upto: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GalleryCmd {
    /// Support-gap and reciprocity checks for one family.
    Verify {
        /// even_fa | odd_fa | odd_ga | odd_ka | qn
        #[arg(long)]
        name: String,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        y: Vec<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

/// Parse `a+bi`, `a-bi`, `a`, `bi` (also accepts `j` for the unit).
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.trim().replace(' ', "").replace('j', "i");
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    if let Some(body) = t.strip_suffix('i') {
        // find the split between real and imaginary parts: the last
        // +/- that is not a leading sign and not part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for (idx, &b) in bytes.iter().enumerate().skip(1) {
            if (b == b'+' || b == b'-') && bytes[idx - 1] != b'e' && bytes[idx - 1] != b'E' {
                split = Some(idx);
            }
        }
        match split {
            Some(idx) => {
                let re: f64 = body[..idx]
                    .parse()
                    .map_err(|_| format!("bad real part in `{text}`"))?;
                let im_str = &body[idx..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str
                        .parse()
                        .map_err(|_| format!("bad imaginary part in `{text}`"))?
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() || body == "+" {
                    1.0
                } else if body == "-" {
                    -1.0
                } else {
                    body.parse()
                        .map_err(|_| format!("bad imaginary part in `{text}`"))?
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = t
            .parse()
            .map_err(|_| format!("cannot parse complex literal `{text}`"))?;
        Ok(Complex64::new(re, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("2+0i").unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(parse_complex("0.5-3i").unwrap(), Complex64::new(0.5, -3.0));
        assert_eq!(parse_complex("13i").unwrap(), Complex64::new(0.0, 13.0));
        assert_eq!(parse_complex("-1.5").unwrap(), Complex64::new(-1.5, 0.0));
        assert_eq!(parse_complex("1e-2+2e1i").unwrap(), Complex64::new(0.01, 20.0));
        assert_eq!(parse_complex("-2-i").unwrap(), Complex64::new(-2.0, -1.0));
        assert!(parse_complex("foo").is_err());
        assert!(parse_complex("1+2").is_err());
    }
}
