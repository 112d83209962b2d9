//! Value lists `a,b,c` and inclusive ranges `start:stop:count`, which may be
//! mixed: `0,5:50:10`.

pub fn parse_values(text: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(format!("empty item in '{text}'"));
        }
        if item.contains(':') {
            out.extend(parse_range(item)?);
        } else {
            out.push(parse_number(item)?);
        }
    }
    Ok(out)
}

fn parse_number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if !v.is_finite() {
        return Err(format!("'{s}' is not finite"));
    }
    Ok(v)
}

fn parse_range(item: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = item.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(format!("range '{item}' must be start:stop:count"));
    };
    let (start, stop) = (parse_number(start)?, parse_number(stop)?);
    let count: usize = count.trim().parse().map_err(|_| format!("range count '{count}' is not a positive integer"))?;
    match count {
        0 => Err(format!("range '{item}' has zero points")),
        1 => Ok(vec![start]),
        n => {
            let step = (stop - start) / (n - 1) as f64;
            // the last point is pinned so `0:180:19` ends at exactly 180
            Ok((0..n).map(|i| if i == n - 1 { stop } else { start + step * i as f64 }).collect())
        }
    }
}
