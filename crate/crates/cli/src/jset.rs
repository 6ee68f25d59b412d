//! Defining-set syntax: comma-separated integers and half-open ranges `a..b`
//! (or closed ranges `a..=b`).

pub fn parse(text: &str, n: u32) -> Result<(Vec<u32>, Vec<String>), String> {
    let mut values = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let (b, inclusive) = match b.strip_prefix('=') {
                Some(b) => (b, true),
                None => (b, false),
            };
            let a: u32 = a.trim().parse().map_err(|_| format!("bad range start in {part:?}"))?;
            let b: u32 = b.trim().parse().map_err(|_| format!("bad range end in {part:?}"))?;
            let end = if inclusive { b.checked_add(1).ok_or("range too large")? } else { b };
            if end <= a {
                return Err(format!("empty range {part:?}"));
            }
            values.extend(a..end);
        } else {
            values.push(part.parse().map_err(|_| format!("{part:?} is not a non-negative integer"))?);
        }
    }
    if values.is_empty() {
        return Err("empty defining set".into());
    }
    if let Some(bad) = values.iter().find(|&&v| v >= n) {
        return Err(format!("{bad} is not in [0, {n})"));
    }
    let mut warnings = Vec::new();
    let mut sorted = values.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != values.len() {
        warnings.push(format!("duplicate entries in J removed: {sorted:?}"));
    } else if sorted != values {
        warnings.push(format!("J sorted to {sorted:?}"));
    }
    Ok((sorted, warnings))
}

#[cfg(test)]
mod tests {
    use super::parse;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse("0,1,3", 7).unwrap(), (vec![0, 1, 3], vec![]));
        assert_eq!(parse("0..3,5", 7).unwrap().0, vec![0, 1, 2, 5]);
        assert_eq!(parse("2..=4", 9).unwrap().0, vec![2, 3, 4]);
        assert_eq!(parse(" 4, 0 ,1", 7).unwrap().0, vec![0, 1, 4]);
    }

    #[test]
    fn sorting_and_duplicates_warn() {
        let (j, w) = parse("3,1,0", 7).unwrap();
        assert_eq!((j, w.len()), (vec![0, 1, 3], 1));
        let (j, w) = parse("1,1,0..2", 7).unwrap();
        assert_eq!((j, w.len()), (vec![0, 1], 1));
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse("", 7).is_err());
        assert!(parse("0,x", 7).is_err());
        assert!(parse("3..1", 7).is_err());
        assert!(parse("0,7", 7).is_err());
        assert!(parse("-1", 7).is_err());
    }
}
