use ordrank::chain::{ChainDescriptor, ChainShift, ShiftMap, DEFAULT_CAP};
use ordrank::construct::Recipe;
use ordrank::rational::{parse_rational, Rational};

pub const USAGE: &str = "\
usage: ordrank <command> [flags]

commands:
  construct <fixedpoint|omega> --m <int> [--eta <shift>]
  classify --chain <chain> --shift <shift>
  rank --chain <chain> [--shift <shift>] [--which all|rank|principal|sigma|sigmaprincipal|intersection]
  quotient --chain <chain> --shift <shift>
  verify <correspondences|theorem3|all> [--n <int>] [--m <int>]

global flags:
  --json <path>   write the machine report to a file instead of stdout
  --cap <int>     equivalence iteration cap (default 64)

chains: finite(n) | Q | Qnn | singleton | concat(finite(m),C) | reverse(C) | quotient(C,S)
shifts: identity | translate(p/q) | scale(p/q) | percopy(S) | fixzero(S) | table(i,j,...)
";

/// A syntax error at a 1-based column of the (single-line) invocation.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at line 1, column {column}: expected {expected}")]
pub struct ParseError {
    pub column: usize,
    pub expected: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    All,
    Rank,
    Principal,
    Sigma,
    SigmaPrincipal,
    Intersection,
}

impl Which {
    const NAMES: [(&'static str, Which); 6] = [
        ("all", Which::All),
        ("rank", Which::Rank),
        ("principal", Which::Principal),
        ("sigma", Which::Sigma),
        ("sigmaprincipal", Which::SigmaPrincipal),
        ("intersection", Which::Intersection),
    ];

    fn name(self) -> &'static str {
        Self::NAMES.iter().find(|(_, w)| *w == self).expect("listed").0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Correspondences,
    Theorem3,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Correspondences => "correspondences",
            Suite::Theorem3 => "theorem3",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Construct {
        recipe: Recipe,
        m: usize,
        eta: Option<ShiftMap>,
    },
    Classify {
        chain: ChainDescriptor,
        shift: ShiftMap,
    },
    Rank {
        chain: ChainDescriptor,
        shift: Option<ShiftMap>,
        which: Which,
    },
    Quotient {
        chain: ChainDescriptor,
        shift: ShiftMap,
    },
    /// `n` sizes the finite chains and `m` the copies of the σ example.
    Verify {
        suite: Suite,
        n: Option<usize>,
        m: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invocation {
    pub command: Command,
    pub json: Option<String>,
    pub cap: u32,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

#[derive(Default)]
struct Flags {
    chain: Option<ChainDescriptor>,
    shift: Option<ShiftMap>,
    eta: Option<ShiftMap>,
    m: Option<usize>,
    n: Option<usize>,
    which: Option<Which>,
    json: Option<String>,
    cap: Option<u32>,
}

impl<'a> Parser<'a> {
    fn fail<T>(&self, expected: impl Into<String>) -> Result<T, ParseError> {
        self.fail_at(self.pos, expected)
    }

    fn fail_at<T>(&self, pos: usize, expected: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            column: self.src[..pos].chars().count() + 1,
            expected: expected.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn at_end(&self) -> bool {
        self.pos == self.src.len()
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), ParseError> {
        self.skip_ws();
        if self.eat(lit) {
            Ok(())
        } else {
            self.fail(format!("'{lit}'"))
        }
    }

    fn take_while(&mut self, ok: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        let len = self.rest().find(|c: char| !ok(c)).unwrap_or(self.rest().len());
        self.pos += len;
        &self.src[start..start + len]
    }

    fn word(&mut self) -> &'a str {
        self.take_while(|c| c.is_ascii_alphanumeric() || c == '_')
    }

    fn integer(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.take_while(|c| c.is_ascii_digit());
        digits.parse().or_else(|_| self.fail_at(start, "integer"))
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let text = self.take_while(|c| c.is_ascii_digit() || c == '-' || c == '/');
        parse_rational(text).map_or_else(|| self.fail_at(start, "rational p/q"), Ok)
    }

    fn chain(&mut self) -> Result<ChainDescriptor, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.word() {
            "finite" => {
                self.expect("(")?;
                let n = self.integer()?;
                self.expect(")")?;
                Ok(ChainDescriptor::Finite(n))
            }
            "Q" => Ok(ChainDescriptor::Rationals),
            "Qnn" => Ok(ChainDescriptor::NonNegRationals),
            "singleton" => Ok(ChainDescriptor::Singleton),
            "concat" => {
                self.expect("(")?;
                self.skip_ws();
                let index_at = self.pos;
                let index = self.chain()?;
                let copies = match index {
                    ChainDescriptor::Finite(m) => m,
                    ChainDescriptor::Singleton => 1,
                    _ => return self.fail_at(index_at, "finite index chain"),
                };
                self.expect(",")?;
                let component = self.chain()?;
                self.expect(")")?;
                Ok(ChainDescriptor::concat(copies, component))
            }
            "reverse" => {
                self.expect("(")?;
                let inner = self.chain()?;
                self.expect(")")?;
                Ok(ChainDescriptor::reverse(inner))
            }
            "quotient" => {
                self.expect("(")?;
                let inner = self.chain()?;
                self.expect(",")?;
                self.skip_ws();
                let shift_at = self.pos;
                let map = self.shift()?;
                self.expect(")")?;
                match ChainShift::new(inner, map) {
                    Ok(shift) => Ok(shift.quotient()),
                    Err(_) => self.fail_at(shift_at, "shift of the quotiented chain"),
                }
            }
            _ => self.fail_at(start, "chain"),
        }
    }

    fn shift(&mut self) -> Result<ShiftMap, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.word() {
            "identity" => Ok(ShiftMap::Identity),
            "translate" | "scale" => {
                let translate = self.src[start..].starts_with('t');
                self.expect("(")?;
                let q = self.rational()?;
                self.expect(")")?;
                Ok(if translate { ShiftMap::Translate(q) } else { ShiftMap::Scale(q) })
            }
            "percopy" | "fixzero" => {
                let per_copy = self.src[start..].starts_with('p');
                self.expect("(")?;
                let inner = self.shift()?;
                self.expect(")")?;
                Ok(if per_copy { ShiftMap::per_copy(inner) } else { ShiftMap::fix_zero_per_copy(inner) })
            }
            "table" => {
                self.expect("(")?;
                let mut images = vec![self.integer()?];
                loop {
                    self.skip_ws();
                    if self.eat(")") {
                        break;
                    }
                    self.expect(",")?;
                    images.push(self.integer()?);
                }
                Ok(ShiftMap::Table(images))
            }
            _ => self.fail_at(start, "shift"),
        }
    }

    fn positional(&mut self) -> (usize, &'a str) {
        self.skip_ws();
        let at = self.pos;
        (at, self.word())
    }

    fn end_of_value(&mut self) -> Result<(), ParseError> {
        if self.at_end() || self.rest().starts_with(char::is_whitespace) {
            Ok(())
        } else {
            self.fail("whitespace or end of input")
        }
    }

    fn flags(&mut self) -> Result<Flags, ParseError> {
        let mut flags = Flags::default();
        loop {
            self.skip_ws();
            if self.at_end() {
                return Ok(flags);
            }
            let start = self.pos;
            if !self.eat("--") {
                return self.fail("flag");
            }
            let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
            let duplicate = |p: &Self| p.fail_at(start, format!("at most one --{name}"));
            macro_rules! set {
                ($field:ident, $value:expr) => {{
                    if flags.$field.is_some() {
                        return duplicate(self);
                    }
                    let value = $value;
                    flags.$field = Some(value);
                }};
            }
            match name {
                "chain" => set!(chain, self.chain()?),
                "shift" => set!(shift, self.shift()?),
                "eta" => set!(eta, self.shift()?),
                "m" => set!(m, self.integer()?),
                "n" => set!(n, self.integer()?),
                "cap" => {
                    self.skip_ws();
                    let at = self.pos;
                    let cap = self.integer()?;
                    set!(cap, u32::try_from(cap).or_else(|_| self.fail_at(at, "integer below 2^32"))?)
                }
                "which" => {
                    self.skip_ws();
                    let at = self.pos;
                    let w = self.word();
                    let which = match Which::NAMES.iter().find(|(n, _)| *n == w) {
                        Some((_, which)) => *which,
                        None => return self.fail_at(at, "all, rank, principal, sigma, sigmaprincipal or intersection"),
                    };
                    set!(which, which)
                }
                "json" => {
                    self.skip_ws();
                    let at = self.pos;
                    let path = self.take_while(|c| !c.is_whitespace());
                    if path.is_empty() {
                        return self.fail_at(at, "path");
                    }
                    set!(json, path.to_string())
                }
                _ => return self.fail_at(start, "flag (--chain, --shift, --eta, --m, --n, --which, --json, --cap)"),
            }
            self.end_of_value()?;
        }
    }
}

/// Parses one invocation, e.g. `rank --chain finite(3)`.
pub fn parse(input: &str) -> Result<Invocation, ParseError> {
    let mut p = Parser { src: input, pos: 0 };
    p.skip_ws();
    let start = p.pos;
    let name = p.word();
    let expected_command = "command (construct, classify, rank, quotient, verify)";
    let head = match name {
        "construct" => {
            let (at, recipe) = p.positional();
            let recipe = match recipe {
                "fixedpoint" => Recipe::FixedPoint,
                "omega" => Recipe::Omega,
                _ => return p.fail_at(at, "recipe (fixedpoint, omega)"),
            };
            Some(Head::Construct(recipe))
        }
        "verify" => {
            let (at, suite) = p.positional();
            let suite = match suite {
                "correspondences" => Suite::Correspondences,
                "theorem3" => Suite::Theorem3,
                "all" => Suite::All,
                _ => return p.fail_at(at, "suite (correspondences, theorem3, all)"),
            };
            Some(Head::Verify(suite))
        }
        "classify" => Some(Head::Classify),
        "rank" => Some(Head::Rank),
        "quotient" => Some(Head::Quotient),
        _ => None,
    };
    let Some(head) = head else {
        return p.fail_at(start, expected_command);
    };
    p.end_of_value()?;
    p.skip_ws();
    let flags_at = p.pos;
    let f = p.flags()?;
    let end = p.pos;
    let missing = |flag: &str| p.fail_at(end, flag.to_string());
    let unexpected = |flag: &str| p.fail_at(flags_at, format!("no --{flag} for this command"));

    let command = match head {
        Head::Construct(recipe) => {
            if f.chain.is_some() || f.shift.is_some() || f.n.is_some() || f.which.is_some() {
                return unexpected("chain, --shift, --n or --which");
            }
            if recipe == Recipe::Omega && f.eta.is_some() {
                return unexpected("eta");
            }
            let Some(m) = f.m else { return missing("--m") };
            Command::Construct { recipe, m, eta: f.eta }
        }
        Head::Verify(suite) => {
            if f.chain.is_some() || f.shift.is_some() || f.eta.is_some() || f.which.is_some() {
                return unexpected("chain, --shift, --eta or --which");
            }
            Command::Verify { suite, n: f.n, m: f.m }
        }
        Head::Classify | Head::Quotient => {
            if f.eta.is_some() || f.m.is_some() || f.n.is_some() || f.which.is_some() {
                return unexpected("eta, --m, --n or --which");
            }
            let Some(chain) = f.chain else { return missing("--chain") };
            let Some(shift) = f.shift else { return missing("--shift") };
            if matches!(head, Head::Classify) {
                Command::Classify { chain, shift }
            } else {
                Command::Quotient { chain, shift }
            }
        }
        Head::Rank => {
            if f.eta.is_some() || f.m.is_some() || f.n.is_some() {
                return unexpected("eta, --m or --n");
            }
            let Some(chain) = f.chain else { return missing("--chain") };
            Command::Rank {
                chain,
                shift: f.shift,
                which: f.which.unwrap_or(Which::All),
            }
        }
    };
    Ok(Invocation {
        command,
        json: f.json,
        cap: f.cap.unwrap_or(DEFAULT_CAP),
    })
}

enum Head {
    Construct(Recipe),
    Verify(Suite),
    Classify,
    Rank,
    Quotient,
}

/// Parses process arguments (without the program name), joined by spaces.
pub fn parse_args<S: AsRef<str>>(args: &[S]) -> Result<Invocation, ParseError> {
    let joined: Vec<&str> = args.iter().map(AsRef::as_ref).collect();
    parse(&joined.join(" "))
}

/// The canonical command line for an invocation; [`parse`] inverts it.
pub fn render(inv: &Invocation) -> String {
    let mut out = match &inv.command {
        Command::Construct { recipe, m, eta } => {
            let mut s = format!("construct {recipe} --m {m}");
            if let Some(eta) = eta {
                s += &format!(" --eta {}", eta);
            }
            s
        }
        Command::Classify { chain, shift } => format!("classify --chain {chain} --shift {}", shift),
        Command::Rank { chain, shift, which } => {
            let mut s = format!("rank --chain {chain}");
            if let Some(shift) = shift {
                s += &format!(" --shift {}", shift);
            }
            if *which != Which::All {
                s += &format!(" --which {}", which.name());
            }
            s
        }
        Command::Quotient { chain, shift } => format!("quotient --chain {chain} --shift {}", shift),
        Command::Verify { suite, n, m } => {
            let mut s = format!("verify {}", suite.name());
            if let Some(n) = n {
                s += &format!(" --n {n}");
            }
            if let Some(m) = m {
                s += &format!(" --m {m}");
            }
            s
        }
    };
    if let Some(path) = &inv.json {
        out += &format!(" --json {path}");
    }
    if inv.cap != DEFAULT_CAP {
        out += &format!(" --cap {}", inv.cap);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ordrank::rational::int;

    #[test]
    fn rank_with_default_which() {
        let inv = parse("rank --chain finite(3)").unwrap();
        assert_eq!(
            inv.command,
            Command::Rank {
                chain: ChainDescriptor::Finite(3),
                shift: None,
                which: Which::All
            }
        );
        assert_eq!(inv.cap, 64);
    }

    #[test]
    fn quotient_command() {
        let inv = parse("quotient --chain concat(finite(3),Q) --shift percopy(translate(-1/1))").unwrap();
        assert_eq!(
            inv.command,
            Command::Quotient {
                chain: ChainDescriptor::concat(3, ChainDescriptor::Rationals),
                shift: ShiftMap::per_copy(ShiftMap::Translate(int(-1)))
            }
        );
    }

    #[test]
    fn truncated_chain_reports_column() {
        let err = parse("rank --chain finite(").unwrap_err();
        assert_eq!(err.column, 21);
        assert_eq!(err.expected, "integer");
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(parse("").unwrap_err().column, 1);
        assert_eq!(parse("rank").unwrap_err().expected, "--chain");
        assert_eq!(parse("rank --chain Z").unwrap_err().column, 14);
        assert_eq!(parse("rank --chain Q --chain Q").unwrap_err().column, 16);
        assert_eq!(parse("construct omega --m 2 --eta scale(2)").unwrap_err().column, 17);
        assert_eq!(parse("classify --chain Q --shift translate(1/0)").unwrap_err().expected, "rational p/q");
        assert_eq!(parse("rank --chain concat(Q,Q)").unwrap_err().expected, "finite index chain");
        assert!(parse("rank --chain finite(3)x").is_err());
    }

    #[test]
    fn rationals_are_canonicalized() {
        let a = parse("classify --chain Q --shift translate(-2/2)").unwrap();
        let b = parse("classify --chain Q --shift translate(-1)").unwrap();
        assert_eq!(a, b);
        assert_eq!(render(&a), "classify --chain Q --shift translate(-1/1)");
    }

    #[test]
    fn whitespace_inside_terms() {
        let inv = parse_args(&["rank", "--chain", "concat( finite(2) , Qnn )"]).unwrap();
        assert_eq!(render(&inv), "rank --chain concat(finite(2),Qnn)");
    }
}
