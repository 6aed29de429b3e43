//! Key-value config files: the same fields as the flags, one `key = value`
//! per line, `#` comments. Flags given on the command line override the
//! file. Values for repeatable flags separate entries with `;` (an index
//! already contains commas).

use std::fmt;

/// Long option names a config file may set.
const KNOWN_KEYS: &[&str] = &[
    "a-max",
    "d-max",
    "depth-max",
    "family",
    "format",
    "index",
    "j-max",
    "jobs",
    "m",
    "m-max",
    "m-min",
    "method",
    "n",
    "N",
    "n-max",
    "order-max",
    "output",
    "pairs",
    "part-max",
    "part-min",
    "prime",
];

#[derive(Debug)]
pub struct ConfigError {
    pub path: String,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.path, self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Parses a config file into (key, value) pairs, rejecting unknown keys
/// and malformed lines with their position.
pub fn parse(path: &str, text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = match raw.split_once('#') {
            Some((before, _)) => before,
            None => raw,
        }
        .trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError {
            path: path.into(),
            line,
            message: format!("expected `key = value`, got {content:?}"),
        })?;
        let key = key.trim();
        let value = value.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(ConfigError {
                path: path.into(),
                line,
                message: format!("unknown key {key:?}"),
            });
        }
        if value.is_empty() {
            return Err(ConfigError {
                path: path.into(),
                line,
                message: format!("empty value for {key:?}"),
            });
        }
        out.push((key.to_owned(), value.to_owned()));
    }
    Ok(out)
}

/// Appends config-provided values as flags, unless the flag already
/// appears on the command line. Repeatable values split on `;`.
pub fn inject(args: &mut Vec<String>, entries: &[(String, String)]) {
    for (key, value) in entries {
        let flag = format!("--{key}");
        let given = args
            .iter()
            .any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        for chunk in value.split(';') {
            let chunk = chunk.trim();
            if !chunk.is_empty() {
                args.push(flag.clone());
                args.push(chunk.to_owned());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let entries = parse("c.conf", "# comment\nprime = 5; 7\nN = 1..2\n").unwrap();
        assert_eq!(
            entries,
            vec![
                ("prime".to_string(), "5; 7".to_string()),
                ("N".to_string(), "1..2".to_string())
            ]
        );

        let err = parse("c.conf", "prime = 5\nbogus = 1\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.to_string().contains("unknown key"));

        let err = parse("c.conf", "prime\n").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn flags_override_config() {
        let mut args = vec!["--prime".to_string(), "11".to_string()];
        inject(
            &mut args,
            &[
                ("prime".to_string(), "5; 7".to_string()),
                ("N".to_string(), "2".to_string()),
            ],
        );
        assert_eq!(args, vec!["--prime", "11", "--N", "2"]);
    }
}
