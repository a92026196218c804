use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use clap::Parser;
use tribute_agents::AgentSettings;
use tribute_core::CardSet;
use tribute_service::{router, AppState};

#[derive(Parser)]
#[command(name = "tribute-service", about = "Play against tribute agents over HTTP")]
struct Args {
    #[arg(long, env = "TRIBUTE_ADDR", default_value = "127.0.0.1")]
    addr: String,
    #[arg(long, env = "TRIBUTE_PORT", default_value_t = 8080)]
    port: u16,
    /// Seconds a session may sit unused before it is dropped.
    #[arg(long, env = "TRIBUTE_IDLE_SECS", default_value_t = 3600)]
    idle_secs: u64,
    #[arg(long, env = "TRIBUTE_CARD_SET")]
    card_set: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args = Args::parse();
    let cards = match &args.card_set {
        Some(p) => CardSet::from_path(p)?,
        None => CardSet::bundled(),
    };
    let state = AppState::new(Arc::new(cards), Arc::new(AgentSettings::default()), Duration::from_secs(args.idle_secs));
    state.spawn_reaper();
    let addr: SocketAddr = format!("{}:{}", args.addr, args.port).parse()?;
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await?;
    Ok(())
}
