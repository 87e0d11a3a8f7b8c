//! Key-value config files. Each non-comment line is `key = value` where key
//! is a long flag name without the dashes. Entries fill in flags missing
//! from the command line; `true` stands for a bare switch, `false` omits it.

use std::fs;

fn parse_line(line: &str) -> Option<Result<(String, String), String>> {
    let line = line.split('#').next().unwrap_or("").trim();
    if line.is_empty() {
        return None;
    }
    let Some((k, v)) = line.split_once('=') else {
        return Some(Err(format!("config line {line:?} is not `key = value`")));
    };
    let key = k.trim().trim_start_matches("--").replace('_', "-");
    if key.is_empty() || key == "config" {
        return Some(Err(format!("bad config key in {line:?}")));
    }
    Some(Ok((key, v.trim().to_string())))
}

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    text.lines().filter_map(parse_line).collect()
}

fn given(argv: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    argv.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
}

fn config_path(argv: &[String]) -> Option<String> {
    argv.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            argv.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    })
}

/// Appends config entries for flags absent from `argv`.
pub fn apply_config(mut argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("reading {path}: {e}"))?;
    let mut extra = Vec::new();
    for (key, value) in parse_config(&text)? {
        if given(&argv, &key) {
            continue;
        }
        match value.as_str() {
            "true" => extra.push(format!("--{key}")),
            "false" => {}
            _ => extra.push(format!("--{key}={value}")),
        }
    }
    argv.extend(extra);
    Ok(argv)
}
