//! Start the HTTP service on 127.0.0.1 (port from OVALKIT_PORT, default 7878).
//!
//! Try: curl 'http://127.0.0.1:7878/api/offset?curve=cayley&a=1&b=1&d=0.5&side=both'

use ovalkit::service::{serve, ServiceConfig};

fn main() -> std::io::Result<()> {
    let config = ServiceConfig::from_env().map_err(std::io::Error::other)?;
    println!("listening on http://127.0.0.1:{}", config.port);
    tokio::runtime::Runtime::new()?.block_on(serve(config))
}
