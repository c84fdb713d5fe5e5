//! Text formats: data files, coefficient tables and exact number literals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rankopt::{CoefficientOracle, CoreError, Dataset, Rational};

use crate::CliError;

/// Parses `12`, `-0.125`, `1.5e-3` or `3/4` exactly. Decimals become
/// fractions over powers of ten.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_decimal(num)?;
        let den = parse_decimal(den)?;
        if den.is_zero() {
            return Err(format!("zero denominator in '{s}'"));
        }
        return Ok(num / den);
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<Rational, String> {
    let bad = || format!("not a number: '{s}'");
    let s = s.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let shift = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(digits);
    if shift >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, shift as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-shift) as usize));
    }
    Ok(if neg { -value } else { value })
}

fn fields(line: &str) -> Vec<&str> {
    line.split(|c: char| c == ',' || c == ';' || c.is_whitespace())
        .filter(|f| !f.is_empty())
        .collect()
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Delimiter-separated rows `y x1 … xp`; commas, semicolons, tabs and
/// spaces all separate fields. A first line that does not parse is a header.
pub fn parse_dataset(text: &str) -> Result<Dataset, CliError> {
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut width = None;
    for (k, (line_no, line)) in content_lines(text).enumerate() {
        let parts = fields(line);
        let parsed: Result<Vec<Rational>, String> = parts.iter().map(|f| parse_rational(f)).collect();
        let row = match parsed {
            Ok(row) => row,
            Err(_) if k == 0 => continue,
            Err(e) => return Err(CliError::Input(format!("line {line_no}: {e}"))),
        };
        if row.len() < 2 {
            return Err(CliError::Input(format!(
                "line {line_no}: need a response and at least one regressor"
            )));
        }
        if *width.get_or_insert(row.len()) != row.len() {
            return Err(CliError::Input(format!(
                "line {line_no}: {} fields, expected {}",
                row.len(),
                width.unwrap_or_default()
            )));
        }
        let mut row = row.into_iter();
        y.push(row.next().expect("nonempty"));
        x.push(row.collect());
    }
    if y.len() < 2 {
        return Err(CliError::Input("need at least two observations".into()));
    }
    Ok(Dataset::new(x, y)?)
}

/// Coefficients listed per permutation, read from lines
/// `π1 … πn | a1 … an` with 1-based observation indices.
#[derive(Clone, Debug, Default)]
pub struct CoefficientTable {
    entries: BTreeMap<Vec<usize>, Vec<Rational>>,
}

impl CoefficientTable {
    pub fn parse(text: &str, n: usize) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (line_no, line) in content_lines(text) {
            let err = |m: String| CliError::Input(format!("coefficient table line {line_no}: {m}"));
            let (lhs, rhs) = line
                .split_once('|')
                .ok_or_else(|| err("expected 'permutation | coefficients'".into()))?;
            let perm: Vec<usize> = fields(lhs)
                .iter()
                .map(|f| f.parse::<usize>().map_err(|_| err(format!("bad index '{f}'"))))
                .collect::<Result<_, _>>()?;
            let mut seen = vec![false; n];
            if perm.len() != n {
                return Err(err(format!("permutation has {} entries, expected {n}", perm.len())));
            }
            for &i in &perm {
                if i == 0 || i > n || seen[i - 1] {
                    return Err(err(format!("not a permutation of 1..{n}")));
                }
                seen[i - 1] = true;
            }
            let coeffs: Vec<Rational> = fields(rhs)
                .iter()
                .map(|f| parse_rational(f).map_err(&err))
                .collect::<Result<_, _>>()?;
            if coeffs.len() != n {
                return Err(err(format!("{} coefficients, expected {n}", coeffs.len())));
            }
            let key: Vec<usize> = perm.iter().map(|i| i - 1).collect();
            if entries.insert(key, coeffs).is_some() {
                return Err(err("permutation listed twice".into()));
            }
        }
        Ok(CoefficientTable { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl CoefficientOracle for CoefficientTable {
    fn coefficients(&self, perm: &[usize]) -> rankopt::Result<Vec<Rational>> {
        self.entries.get(perm).cloned().ok_or_else(|| {
            let shown: Vec<String> = perm.iter().map(|i| (i + 1).to_string()).collect();
            CoreError::Oracle(format!("no coefficients for permutation {}", shown.join(" ")))
        })
    }
}
