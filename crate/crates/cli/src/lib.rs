//! Command-line front end for `ordrank`.
//!
//! An invocation is parsed from the joined argument list by a small
//! recursive-descent parser, so errors carry a column into that line.
//! [`run`] produces a machine report (JSON) and a prose summary; the binary
//! writes the former to stdout or `--json <path>` and the latter to stderr.
//!
//! ```
//! use ordrank_cli::{parse, render, run};
//!
//! let inv = parse("construct omega --m 3").unwrap();
//! assert_eq!(parse(&render(&inv)).unwrap(), inv);
//! let outcome = run(&inv);
//! assert_eq!(outcome.exit_code, 0);
//! assert!(outcome.json.contains("\"finite(3)\""));
//! ```

mod parse;
mod run;

pub use parse::{parse, parse_args, render, Command, Invocation, ParseError, Suite, Which, USAGE};
pub use run::{run, Outcome};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book {}
