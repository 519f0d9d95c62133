use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use zbsplinet::Strategy;

#[derive(Debug, Parser)]
#[command(
    name = "zbsplinet",
    version,
    about = "Zero-integral spline bases, density smoothing and functional PCA"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the ZB-spline basis, or an orthonormalized one, on a grid.
    Basis(BasisArgs),
    /// Orthonormalize the ZB basis and write its coefficients and supports.
    Ortho(OrthoArgs),
    /// Smooth histogram data into clr curves and densities.
    Smooth(SmoothArgs),
    /// Smooth histograms and run (sparse) functional PCA.
    Fpca(FpcaArgs),
    /// Compare measured support and cost of the orthogonalizations with their closed forms.
    Bench(BenchArgs),
    /// Render a curve CSV written by another command as SVG.
    Plot(PlotArgs),
}

pub fn parse_domain(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(format!("expected 'a,b', got '{s}'"));
    }
    let a = parts[0]
        .parse::<f64>()
        .map_err(|e| format!("'{}': {e}", parts[0]))?;
    let b = parts[1]
        .parse::<f64>()
        .map_err(|e| format!("'{}': {e}", parts[1]))?;
    Ok((a, b))
}

#[derive(Debug, Clone, Args)]
pub struct KnotArgs {
    /// Spline degree k.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Number of equispaced inner knots g.
    #[arg(long, conflicts_with = "knots_file")]
    pub inner_knots: Option<usize>,
    /// File listing the inner knots (separated by commas, spaces or newlines).
    #[arg(long)]
    pub knots_file: Option<PathBuf>,
    /// Domain as 'a,b'.
    #[arg(long, value_parser = parse_domain, allow_hyphen_values = true)]
    pub domain: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Directory receiving the output files.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Also write SVG plots.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BasisArgs {
    #[command(flatten)]
    pub knots: KnotArgs,
    /// Emit the basis orthonormalized with this strategy instead of the ZB-splines.
    #[arg(long)]
    pub ortho: Option<Strategy>,
    /// Number of grid points.
    #[arg(long)]
    pub grid: Option<usize>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OrthoArgs {
    #[command(flatten)]
    pub knots: KnotArgs,
    #[arg(long)]
    pub strategy: Option<Strategy>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SmoothArgs {
    /// Histogram CSV: header `id,x_1,…,x_n`, rows `label,f_1,…,f_n`.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub knots: KnotArgs,
    /// Smoothing parameter in (0, 1].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Derivative order of the roughness penalty.
    #[arg(long)]
    pub penalty_order: Option<usize>,
    #[arg(long)]
    pub strategy: Option<Strategy>,
    /// Number of grid points for the output curves.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Replace zero frequencies by this multiple of the smallest positive one instead of failing.
    #[arg(long)]
    pub zero_epsilon: Option<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FpcaArgs {
    #[command(flatten)]
    pub smooth: SmoothArgs,
    /// Loading magnitude above which a basis function counts as active.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Number of principal components reported.
    #[arg(long)]
    pub components: Option<usize>,
    /// Sparsity levels in [0, 1] for sparse PCA, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub sparsity_grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub degree: Option<usize>,
    /// Inner-knot counts to benchmark, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub inner_knots: Option<Vec<usize>>,
    #[arg(long, value_parser = parse_domain, allow_hyphen_values = true)]
    pub domain: Option<(f64, f64)>,
    /// Strategies to run, comma separated (default: all four).
    #[arg(long, value_delimiter = ',')]
    pub strategy: Option<Vec<Strategy>>,
    /// Points for the non-zero count table of penalty and collocation matrices.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub collocation_points: Option<Vec<f64>>,
    #[arg(long)]
    pub penalty_order: Option<usize>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    /// Curve CSV: either columns `x,…` or rows `id,<x values>`.
    #[arg(long)]
    pub input: PathBuf,
    /// Output SVG path (default: input with .svg extension in --out-dir).
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub title: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_parsing() {
        assert_eq!(parse_domain("0,95"), Ok((0.0, 95.0)));
        assert_eq!(parse_domain(" -1.5 , 2 "), Ok((-1.5, 2.0)));
        assert!(parse_domain("1").is_err());
        assert!(parse_domain("a,b").is_err());
    }

    #[test]
    fn strategy_flag() {
        let cli =
            Cli::try_parse_from(["zbsplinet", "ortho", "--strategy", "gs-two-sided"]).unwrap();
        match cli.command {
            Command::Ortho(a) => assert_eq!(a.strategy, Some(Strategy::GsTwoSided)),
            other => panic!("parsed {other:?}"),
        }
        let cli = Cli::try_parse_from([
            "zbsplinet",
            "bench",
            "--strategy",
            "gs-lr,splinet",
            "--inner-knots",
            "7,19",
        ])
        .unwrap();
        match cli.command {
            Command::Bench(a) => {
                assert_eq!(
                    a.strategy,
                    Some(vec![Strategy::GsLeftRight, Strategy::Splinet])
                );
                assert_eq!(a.inner_knots, Some(vec![7, 19]));
            }
            other => panic!("parsed {other:?}"),
        }
    }
}
