use std::str::FromStr;

/// A list of sample points, written either as `a,b,c` or as
/// `start:stop:count` for `count` evenly spaced points including both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("not a finite number: {t:?}"))
        };
        let parts: Vec<&str> = s.split(':').collect();
        let points = match parts.as_slice() {
            [start, stop, count] => {
                let (a, b) = (num(start)?, num(stop)?);
                let n: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad point count {count:?}"))?;
                match n {
                    0 => return Err("point count must be >= 1".into()),
                    1 => vec![a],
                    _ => (0..n)
                        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
                        .collect(),
                }
            }
            [list] => list.split(',').map(num).collect::<Result<_, _>>()?,
            _ => return Err(format!("expected a,b,c or start:stop:count, got {s:?}")),
        };
        Ok(Grid(points))
    }
}
