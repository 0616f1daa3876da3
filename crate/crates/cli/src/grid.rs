//! Grid arguments: comma lists `a,b,c` or ranges `a..b`.

use std::fmt::Display;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq)]
pub enum GridArg<T> {
    List(Vec<T>),
    Range(T, T),
}

impl<T: FromStr + PartialOrd + Copy> FromStr for GridArg<T>
where
    T::Err: Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty grid".into());
        }
        let parse = |t: &str| t.trim().parse::<T>().map_err(|e| format!("bad grid value {t:?}: {e}"));
        if let Some((a, b)) = s.split_once("..") {
            let (a, b) = (parse(a)?, parse(b)?);
            if a > b {
                return Err("range start exceeds end".into());
            }
            return Ok(GridArg::Range(a, b));
        }
        let values = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(parse)
            .collect::<Result<Vec<_>, _>>()?;
        if values.is_empty() {
            return Err("empty grid".into());
        }
        Ok(GridArg::List(values))
    }
}

/// Real grid. Ranges are split into `points` values, geometrically when
/// `log` is set.
pub fn real_grid(arg: &GridArg<f64>, log: bool, points: usize) -> Result<Vec<f64>, String> {
    match arg {
        GridArg::List(v) => Ok(v.clone()),
        GridArg::Range(a, b) => {
            if points < 2 {
                return Err("ranges need at least 2 points".into());
            }
            if log && *a <= 0.0 {
                return Err("log grid needs a positive start".into());
            }
            Ok((0..points)
                .map(|i| {
                    let t = i as f64 / (points - 1) as f64;
                    if log {
                        a * (b / a).powf(t)
                    } else {
                        a + (b - a) * t
                    }
                })
                .collect())
        }
    }
}

/// Integer grid. Plain ranges enumerate every integer; log ranges take
/// `points` geometrically spaced values, rounded and deduplicated.
pub fn int_grid(arg: &GridArg<u64>, log: bool, points: usize) -> Result<Vec<u64>, String> {
    match arg {
        GridArg::List(v) => Ok(v.clone()),
        GridArg::Range(a, b) if !log => Ok((*a..=*b).collect()),
        GridArg::Range(a, b) => {
            let reals = real_grid(&GridArg::Range(*a as f64, *b as f64), true, points)?;
            let mut out: Vec<u64> = reals.into_iter().map(|x| x.round() as u64).collect();
            out.dedup();
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!("0.001,1,30".parse::<GridArg<f64>>().unwrap(), GridArg::List(vec![0.001, 1.0, 30.0]));
        assert_eq!("1..100".parse::<GridArg<u64>>().unwrap(), GridArg::Range(1, 100));
        assert!("".parse::<GridArg<f64>>().is_err());
        assert!(",".parse::<GridArg<f64>>().is_err());
        assert!("5..1".parse::<GridArg<u64>>().is_err());
    }

    #[test]
    fn log_integer_grid() {
        let g = int_grid(&GridArg::Range(100, 1_000_000), true, 5).unwrap();
        assert_eq!(g, vec![100, 1000, 10000, 100000, 1000000]);
        assert_eq!(int_grid(&GridArg::Range(3, 5), false, 0).unwrap(), vec![3, 4, 5]);
    }
}
