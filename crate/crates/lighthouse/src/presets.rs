//! Bundled run configurations, one per figure.

use crate::config::RunConfig;
use crate::error::CliError;

pub const NAMES: [&str; 9] = [
    "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10",
];

/// Caption parameters per figure, used to check the presets.
pub const FIGURE_PARAMS: &str = include_str!("../presets/figure_params.toml");

pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig2" => include_str!("../presets/fig2.toml"),
        "fig3" => include_str!("../presets/fig3.toml"),
        "fig4" => include_str!("../presets/fig4.toml"),
        "fig5" => include_str!("../presets/fig5.toml"),
        "fig6" => include_str!("../presets/fig6.toml"),
        "fig7" => include_str!("../presets/fig7.toml"),
        "fig8" => include_str!("../presets/fig8.toml"),
        "fig9" => include_str!("../presets/fig9.toml"),
        "fig10" => include_str!("../presets/fig10.toml"),
        _ => return None,
    })
}

pub fn preset(name: &str) -> Result<RunConfig, CliError> {
    let text = source(name).ok_or_else(|| {
        CliError::Config(format!(
            "--figure: unknown preset {name:?}, expected one of {}",
            NAMES.join(", ")
        ))
    })?;
    RunConfig::from_toml(text)
}
