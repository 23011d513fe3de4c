//! Layered TOML configuration: built-in presets, then config files left to
//! right, then command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::cells::CellConfig;
use crate::engine::{Integration, SolverConfig};
use crate::ftj::{apply_device_overlay, builtin_variant, DeviceVariant, PresetError, VariantName};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config `{path}`: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config `{path}`: {message}")]
    Invalid { path: PathBuf, message: String },
}

/// Fully materialized configuration for one run.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub variants: Vec<DeviceVariant>,
    pub solver: SolverConfig,
    pub cell: CellConfig,
    pub config_files: Vec<PathBuf>,
}

impl Default for ResolvedConfig {
    fn default() -> Self {
        Self {
            variants: vec![
                builtin_variant(VariantName::A),
                builtin_variant(VariantName::B),
                builtin_variant(VariantName::C),
            ],
            solver: SolverConfig::default(),
            cell: CellConfig::default(),
            config_files: Vec::new(),
        }
    }
}

impl ResolvedConfig {
    pub fn variant(&self, name: VariantName) -> &DeviceVariant {
        self.variants
            .iter()
            .find(|v| v.name == name)
            .expect("all variants resolved")
    }
}

fn expect_f64(value: &toml::Value, path: &Path, key: &str) -> Result<f64, ConfigError> {
    match value {
        toml::Value::Float(f) => Ok(*f),
        toml::Value::Integer(i) => Ok(*i as f64),
        _ => Err(ConfigError::Invalid {
            path: path.to_path_buf(),
            message: format!("{key}: expected a number"),
        }),
    }
}

fn apply_solver_overlay(
    solver: &mut SolverConfig,
    table: &toml::value::Table,
    path: &Path,
) -> Result<(), ConfigError> {
    for (key, value) in table {
        let full = format!("solver.{key}");
        match key.as_str() {
            "reltol" => solver.reltol = expect_f64(value, path, &full)?,
            "abstol_v" => solver.abstol_v = expect_f64(value, path, &full)?,
            "abstol_i" => solver.abstol_i = expect_f64(value, path, &full)?,
            "max_newton_iters" => {
                solver.max_newton_iters = expect_f64(value, path, &full)? as usize
            }
            "dt_init" => solver.dt_init = Some(expect_f64(value, path, &full)?),
            "dt_min" => solver.dt_min = Some(expect_f64(value, path, &full)?),
            "dt_max" => solver.dt_max = Some(expect_f64(value, path, &full)?),
            "dp_max_frac" => solver.dp_max_frac = expect_f64(value, path, &full)?,
            "gmin" => solver.gmin = expect_f64(value, path, &full)?,
            "integration" => {
                let text = value.as_str().ok_or_else(|| ConfigError::Invalid {
                    path: path.to_path_buf(),
                    message: format!("{full}: expected a string"),
                })?;
                solver.integration = match text {
                    "backward-euler" => Integration::BackwardEuler,
                    "trapezoidal" => Integration::Trapezoidal,
                    other => {
                        return Err(ConfigError::Invalid {
                            path: path.to_path_buf(),
                            message: format!("{full}: unknown integration `{other}`"),
                        });
                    }
                };
            }
            _ => {
                return Err(ConfigError::Invalid {
                    path: path.to_path_buf(),
                    message: format!("unknown key {full}"),
                });
            }
        }
    }
    Ok(())
}

fn apply_cell_overlay(
    cell: &mut CellConfig,
    table: &toml::value::Table,
    path: &Path,
) -> Result<(), ConfigError> {
    for (key, value) in table {
        let full = format!("cell.{key}");
        match key.as_str() {
            "variant" => {
                let text = value.as_str().ok_or_else(|| ConfigError::Invalid {
                    path: path.to_path_buf(),
                    message: format!("{full}: expected a string"),
                })?;
                let name: VariantName = text.parse().map_err(|e: PresetError| {
                    ConfigError::Invalid {
                        path: path.to_path_buf(),
                        message: format!("{full}: {e}"),
                    }
                })?;
                cell.variant = builtin_variant(name);
            }
            "ftj_area" => cell.ftj_area = expect_f64(value, path, &full)?,
            "t2c_ftj_area" => cell.t2c_ftj_area = expect_f64(value, path, &full)?,
            "current_scale" => cell.current_scale = expect_f64(value, path, &full)?,
            "c_node" => cell.c_node = expect_f64(value, path, &full)?,
            "i_bias" => cell.i_bias = expect_f64(value, path, &full)?,
            "v_dd" => cell.v_dd = expect_f64(value, path, &full)?,
            "v_precharge" => cell.v_precharge = expect_f64(value, path, &full)?,
            "v_read" => cell.v_read = expect_f64(value, path, &full)?,
            "write_gap" => cell.write_gap = expect_f64(value, path, &full)?,
            "prog_amplitude" => cell.prog_amplitude = expect_f64(value, path, &full)?,
            "prog_width" => cell.prog_width = expect_f64(value, path, &full)?,
            "prog_period" => cell.prog_period = expect_f64(value, path, &full)?,
            "nmos_vt" => cell.nmos.v_t = expect_f64(value, path, &full)?,
            "nmos_beta" => cell.nmos.beta = expect_f64(value, path, &full)?,
            "pmos_vt" => cell.pmos.v_t = expect_f64(value, path, &full)?,
            "pmos_beta" => cell.pmos.beta = expect_f64(value, path, &full)?,
            _ => {
                return Err(ConfigError::Invalid {
                    path: path.to_path_buf(),
                    message: format!("unknown key {full}"),
                });
            }
        }
    }
    Ok(())
}

/// Loads and overlays config files onto the built-in defaults.
pub fn load_config(paths: &[PathBuf]) -> Result<ResolvedConfig, ConfigError> {
    let mut resolved = ResolvedConfig::default();
    for path in paths {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.clone(),
            source,
        })?;
        apply_config_text(&mut resolved, &text, path)?;
        resolved.config_files.push(path.clone());
    }
    // The cell's device follows any overlay of its variant.
    let name = resolved.cell.variant.name;
    resolved.cell.variant = resolved.variant(name).clone();
    Ok(resolved)
}

fn apply_config_text(
    resolved: &mut ResolvedConfig,
    text: &str,
    path: &Path,
) -> Result<(), ConfigError> {
    let doc: toml::Value = text.parse().map_err(|e: toml::de::Error| ConfigError::Invalid {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let root = doc.as_table().ok_or_else(|| ConfigError::Invalid {
        path: path.to_path_buf(),
        message: "top level must be a table".into(),
    })?;
    for (section, value) in root {
        match section.as_str() {
            "device" => {
                let devices = value.as_table().ok_or_else(|| ConfigError::Invalid {
                    path: path.to_path_buf(),
                    message: "device: expected a table of variants".into(),
                })?;
                for (dev_name, dev_value) in devices {
                    let name: VariantName =
                        dev_name.parse().map_err(|_| ConfigError::Invalid {
                            path: path.to_path_buf(),
                            message: format!("unknown key device.{dev_name}"),
                        })?;
                    let table = dev_value.as_table().ok_or_else(|| ConfigError::Invalid {
                        path: path.to_path_buf(),
                        message: format!("device.{dev_name}: expected a table"),
                    })?;
                    let variant = resolved
                        .variants
                        .iter_mut()
                        .find(|v| v.name == name)
                        .expect("all variants present");
                    apply_device_overlay(&mut variant.stack, table, &format!("device.{dev_name}"))
                        .map_err(|e| ConfigError::Invalid {
                            path: path.to_path_buf(),
                            message: e.to_string(),
                        })?;
                    if let Some(v) = table.get("read_vmax") {
                        variant.read_vmax =
                            expect_f64(v, path, &format!("device.{dev_name}.read_vmax"))?;
                    }
                    variant.stack.validate().map_err(|e| ConfigError::Invalid {
                        path: path.to_path_buf(),
                        message: format!("device.{dev_name}: {e}"),
                    })?;
                }
            }
            "solver" => {
                let table = value.as_table().ok_or_else(|| ConfigError::Invalid {
                    path: path.to_path_buf(),
                    message: "solver: expected a table".into(),
                })?;
                apply_solver_overlay(&mut resolved.solver, table, path)?;
            }
            "cell" => {
                let table = value.as_table().ok_or_else(|| ConfigError::Invalid {
                    path: path.to_path_buf(),
                    message: "cell: expected a table".into(),
                })?;
                apply_cell_overlay(&mut resolved.cell, table, path)?;
            }
            other => {
                return Err(ConfigError::Invalid {
                    path: path.to_path_buf(),
                    message: format!("unknown key {other}"),
                });
            }
        }
    }
    Ok(())
}
