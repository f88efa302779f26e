pub mod bargmann;
pub mod gates;
pub mod info;
pub mod systems;
pub mod upl;

use anyhow::{anyhow, Result};
use holo_core::GateName;

pub fn parse_gates(list: &str) -> Result<Vec<GateName>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<GateName>().map_err(|e| anyhow!(e)))
        .collect()
}
