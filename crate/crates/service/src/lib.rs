//! Session server for playing against tribute agents over HTTP, with a
//! websocket that pushes every change. See `PROTOCOL.md` for the payloads.

pub mod api;
pub mod server;
pub mod session;

pub use api::PROTOCOL_VERSION;
pub use server::{router, AppState, DEFAULT_BUDGET, DEFAULT_IDLE_TIMEOUT};
pub use session::{HistoryEntry, Session, SessionError};
