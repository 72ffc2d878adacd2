// Integer helpers without an entry point.

pub fn add(a: i64, b: i64) -> i64 {
    a + b
}

pub fn sub(a: i64, b: i64) -> i64 {
    a - b
}

pub fn mul(a: i64, b: i64) -> i64 {
    a * b
}

pub fn clamp(v: i64, lo: i64, hi: i64) -> i64 {
    if v < lo {
        return lo;
    }
    if v > hi {
        return hi;
    }
    v
}

pub fn sum(values: &[i64]) -> i64 {
    let mut total = 0;
    for v in values {
        total += v;
    }
    total
}

pub fn mean(values: &[i64]) -> i64 {
    if values.is_empty() {
        return 0;
    }
    sum(values) / values.len() as i64
}

pub fn max_of(values: &[i64]) -> i64 {
    let mut best = i64::MIN;
    for v in values {
        if *v > best {
            best = *v;
        }
    }
    best
}
