//! Parameter grids: `a:b[:lin|log][:points]` or a comma-separated list.

use crate::error::CliError;

const DEFAULT_POINTS: usize = 100;

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Config(format!("bad grid '{spec}': {why}"));
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| bad("not a finite number"))
    };
    if spec.contains(',') || !spec.contains(':') {
        return spec.split(',').map(number).collect();
    }
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() < 2 || parts.len() > 4 {
        return Err(bad("expected a:b[:lin|log][:points]"));
    }
    let (a, b) = (number(parts[0])?, number(parts[1])?);
    let mut log = false;
    let mut points = DEFAULT_POINTS;
    for p in &parts[2..] {
        match p.trim() {
            "lin" => log = false,
            "log" => log = true,
            other => {
                points = other
                    .parse()
                    .map_err(|_| bad("point count must be a positive integer"))?
            }
        }
    }
    if points == 0 {
        return Err(bad("point count must be a positive integer"));
    }
    if log && !(a > 0.0 && b > 0.0) {
        return Err(bad("log grids need positive end points"));
    }
    if points == 1 {
        return Ok(vec![a]);
    }
    let step = |i: usize| i as f64 / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == 0 {
                a
            } else if i == points - 1 {
                b
            } else if log {
                (a.ln() + step(i) * (b.ln() - a.ln())).exp()
            } else {
                a + step(i) * (b - a)
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_grid("1,2.5,4").unwrap(), vec![1.0, 2.5, 4.0]);
        assert_eq!(parse_grid("3").unwrap(), vec![3.0]);
        assert_eq!(parse_grid("0:1:lin:3").unwrap(), vec![0.0, 0.5, 1.0]);
        let g = parse_grid("1e-8:1e3:log").unwrap();
        assert_eq!(g.len(), 100);
        assert_eq!((g[0], g[99]), (1e-8, 1e3));
        assert!((g[1] / g[0] - g[50] / g[49]).abs() < 1e-9);
        assert_eq!(parse_grid("-0.95:10").unwrap().len(), 100);
        assert!(parse_grid("0:1:log").is_err());
        assert!(parse_grid("0:1:lin:0").is_err());
        assert!(parse_grid("a:b").is_err());
    }
}
