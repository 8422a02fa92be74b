use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use doems_api::{serve, ApiConfig};
use doems_core::catalog::DEFAULT_LAYERS;

#[derive(Debug, Parser)]
#[command(name = "doems-api", version, about = "Serve built catalogs over HTTP")]
struct Args {
    #[arg(long, env = "DOEMS_BIND", default_value = "127.0.0.1:8080")]
    bind: SocketAddr,

    #[arg(long, env = "DOEMS_CATALOG_DIR", default_value = "catalog")]
    catalog_dir: PathBuf,

    /// Layer to serve as P,N; repeatable. Defaults to every standard layer.
    #[arg(long = "layer", value_parser = parse_layer)]
    layers: Vec<(u32, usize)>,

    /// Origin allowed for cross-origin requests; repeatable, `*` for any.
    #[arg(
        long = "allow-origin",
        env = "DOEMS_ALLOW_ORIGIN",
        value_delimiter = ','
    )]
    allowed_origins: Vec<String>,
}

fn parse_layer(text: &str) -> Result<(u32, usize), String> {
    let (p, n) = text.split_once(',').ok_or("expected P,N")?;
    let p = p.trim().parse().map_err(|_| format!("bad p {p:?}"))?;
    let n = n.trim().parse().map_err(|_| format!("bad n {n:?}"))?;
    Ok((p, n))
}

#[tokio::main]
async fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = Args::parse();
    let config = ApiConfig {
        bind: args.bind,
        catalog_dir: args.catalog_dir,
        layers: if args.layers.is_empty() {
            DEFAULT_LAYERS.to_vec()
        } else {
            args.layers
        },
        allowed_origins: args.allowed_origins,
    };
    match serve(config).await {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            ExitCode::FAILURE
        }
    }
}
