//! Strict JSON reading that keeps going after an error, so one pass reports
//! every offending path.

use serde_json::{Map, Value};

use pwbasis_core::domain::{make_domain, AxisBox, Domain, GridMask};
use pwbasis_core::paley_wiener::SpectralWeight;
use pwbasis_core::spectra::FrequencySet;
use pwbasis_core::Complex64;

/// Default quadrature resolution of sampled weights and signals.
pub const DEFAULT_NODES: usize = 32;

/// Collected `path: message` lines.
#[derive(Debug, Default)]
pub struct Reader {
    errors: Vec<String>,
}

pub fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

pub fn index(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

impl Reader {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn error(&mut self, path: &str, message: impl std::fmt::Display) {
        let at = if path.is_empty() { "<root>" } else { path };
        self.errors.push(format!("{at}: {message}"));
    }

    pub fn errors(&self) -> &[String] {
        &self.errors
    }

    pub fn into_errors(self) -> Vec<String> {
        self.errors
    }

    pub fn is_clean(&self) -> bool {
        self.errors.is_empty()
    }

    /// `value` unless errors were recorded after `mark` (an earlier
    /// [`Reader::errors`] length).
    pub fn clean_since<T>(&self, mark: usize, value: Option<T>) -> Option<T> {
        if self.errors.len() > mark {
            None
        } else {
            value
        }
    }

    fn mismatch(&mut self, path: &str, expected: &str, v: &Value) {
        self.error(path, format!("expected {expected}, found {}", kind(v)));
    }

    /// Object whose keys all belong to `allowed`; every unknown key is an
    /// error of its own.
    pub fn object<'a>(&mut self, path: &str, v: &'a Value, allowed: &[&str]) -> Option<&'a Map<String, Value>> {
        let Some(map) = v.as_object() else {
            self.mismatch(path, "an object", v);
            return None;
        };
        for key in map.keys() {
            if !allowed.contains(&key.as_str()) {
                self.error(&join(path, key), format!("unknown key (allowed: {})", allowed.join(", ")));
            }
        }
        Some(map)
    }

    pub fn required<'a>(&mut self, path: &str, map: &'a Map<String, Value>, key: &str) -> Option<&'a Value> {
        let v = map.get(key);
        if v.is_none() {
            self.error(&join(path, key), "missing required key");
        }
        v
    }

    pub fn number(&mut self, path: &str, v: &Value) -> Option<f64> {
        match v.as_f64() {
            Some(x) if x.is_finite() => Some(x),
            _ => {
                self.mismatch(path, "a finite number", v);
                None
            }
        }
    }

    pub fn positive(&mut self, path: &str, v: &Value) -> Option<f64> {
        let x = self.number(path, v)?;
        if x > 0.0 {
            Some(x)
        } else {
            self.error(path, "must be positive");
            None
        }
    }

    pub fn integer(&mut self, path: &str, v: &Value) -> Option<i64> {
        match v.as_i64() {
            Some(x) => Some(x),
            None => {
                self.mismatch(path, "an integer", v);
                None
            }
        }
    }

    pub fn unsigned(&mut self, path: &str, v: &Value) -> Option<u64> {
        match v.as_u64() {
            Some(x) => Some(x),
            None => {
                self.mismatch(path, "a non-negative integer", v);
                None
            }
        }
    }

    pub fn count(&mut self, path: &str, v: &Value) -> Option<usize> {
        match self.unsigned(path, v)? {
            0 => {
                self.error(path, "must be at least 1");
                None
            }
            n => Some(n as usize),
        }
    }

    pub fn boolean(&mut self, path: &str, v: &Value) -> Option<bool> {
        match v.as_bool() {
            Some(b) => Some(b),
            None => {
                self.mismatch(path, "a boolean", v);
                None
            }
        }
    }

    pub fn string<'a>(&mut self, path: &str, v: &'a Value) -> Option<&'a str> {
        match v.as_str() {
            Some(s) => Some(s),
            None => {
                self.mismatch(path, "a string", v);
                None
            }
        }
    }

    /// One of the listed strings.
    pub fn choice<'a>(&mut self, path: &str, v: &'a Value, options: &[&str]) -> Option<&'a str> {
        let s = self.string(path, v)?;
        if options.contains(&s) {
            Some(s)
        } else {
            self.error(path, format!("unknown value \"{s}\" (expected one of: {})", options.join(", ")));
            None
        }
    }

    pub fn array<'a>(&mut self, path: &str, v: &'a Value) -> Option<&'a [Value]> {
        match v.as_array() {
            Some(a) => Some(a),
            None => {
                self.mismatch(path, "an array", v);
                None
            }
        }
    }

    pub fn nonempty_array<'a>(&mut self, path: &str, v: &'a Value) -> Option<&'a [Value]> {
        let a = self.array(path, v)?;
        if a.is_empty() {
            self.error(path, "must not be empty");
            None
        } else {
            Some(a)
        }
    }

    /// Every element is read, so each bad element is reported.
    pub fn each<T>(&mut self, path: &str, items: &[Value], mut f: impl FnMut(&mut Self, &str, &Value) -> Option<T>) -> Option<Vec<T>> {
        let mut out = Vec::with_capacity(items.len());
        let mut ok = true;
        for (i, item) in items.iter().enumerate() {
            match f(self, &index(path, i), item) {
                Some(x) => out.push(x),
                None => ok = false,
            }
        }
        ok.then_some(out)
    }

    pub fn numbers(&mut self, path: &str, v: &Value) -> Option<Vec<f64>> {
        let items = self.nonempty_array(path, v)?;
        self.each(path, items, |r, p, x| r.number(p, x))
    }

    /// A point: a bare number in one dimension or an array of numbers.
    pub fn point(&mut self, path: &str, v: &Value) -> Option<Vec<f64>> {
        match v {
            Value::Number(_) => self.number(path, v).map(|x| vec![x]),
            Value::Array(_) => self.numbers(path, v),
            other => {
                self.mismatch(path, "a number or an array of numbers", other);
                None
            }
        }
    }

    /// A group element: a bare integer or an array of integers.
    pub fn element(&mut self, path: &str, v: &Value) -> Option<Vec<i64>> {
        if v.is_number() {
            self.integer(path, v).map(|x| vec![x])
        } else {
            let items = self.nonempty_array(path, v)?;
            self.each(path, items, |r, p, x| r.integer(p, x))
        }
    }

    pub fn elements(&mut self, path: &str, v: &Value) -> Option<Vec<Vec<i64>>> {
        let items = self.nonempty_array(path, v)?;
        self.each(path, items, |r, p, x| r.element(p, x))
    }

    /// A real number or `[re, im]`.
    pub fn complex(&mut self, path: &str, v: &Value) -> Option<Complex64> {
        if v.is_number() {
            return self.number(path, v).map(|x| Complex64::new(x, 0.0));
        }
        let items = self.array(path, v)?;
        if items.len() != 2 {
            self.error(path, "expected a number or [re, im]");
            return None;
        }
        let re = self.number(&index(path, 0), &items[0]);
        let im = self.number(&index(path, 1), &items[1]);
        Some(Complex64::new(re?, im?))
    }

    pub fn optional<'a>(&mut self, map: &'a Map<String, Value>, key: &str) -> Option<&'a Value> {
        map.get(key)
    }

    /// Optional key read with `f`; `default` when absent, `None` when
    /// present but invalid.
    pub fn or_default<'a, T>(
        &mut self,
        path: &str,
        map: &'a Map<String, Value>,
        key: &str,
        default: T,
        f: impl FnOnce(&mut Self, &str, &'a Value) -> Option<T>,
    ) -> Option<T> {
        match map.get(key) {
            None => Some(default),
            Some(v) => f(self, &join(path, key), v),
        }
    }

    /// Records a library error against `path`.
    pub fn check<T>(&mut self, path: &str, result: pwbasis_core::Result<T>) -> Option<T> {
        match result {
            Ok(x) => Some(x),
            Err(e) => {
                self.error(path, e);
                None
            }
        }
    }
}

/// `{"boxes": [[lower, upper], ...], "mask": {...}, "normalize": bool}`.
///
/// A box is `[lo, hi]` in one dimension or `[[lower...], [upper...]]`.
pub fn read_domain(r: &mut Reader, path: &str, v: &Value) -> Option<Domain> {
    let mark = r.errors().len();
    let map = r.object(path, v, &["boxes", "mask", "normalize"])?;
    if !map.contains_key("boxes") && !map.contains_key("mask") {
        r.error(path, "needs \"boxes\", \"mask\" or both");
        return None;
    }
    let boxes = map.get("boxes").map(|b| {
        let p = join(path, "boxes");
        r.nonempty_array(&p, b).and_then(|items| r.each(&p, items, read_box))
    });
    let mask = map.get("mask").map(|m| read_mask(r, &join(path, "mask"), m));
    let normalize = r.or_default(path, map, "normalize", false, |r, p, x| r.boolean(p, x));
    if r.errors().len() > mark {
        return None;
    }
    let normalize = normalize?;
    let domain = match (boxes.flatten(), mask.flatten()) {
        (Some(b), None) => r.check(path, make_domain(b))?,
        (None, Some(m)) => Domain::from_mask(m),
        (Some(b), Some(m)) => {
            let d = r.check(path, make_domain(b))?;
            r.check(path, d.with_mask(m))?
        }
        (None, None) => return None,
    };
    Some(if normalize { domain.normalize() } else { domain })
}

fn read_box(r: &mut Reader, path: &str, v: &Value) -> Option<AxisBox> {
    let items = r.array(path, v)?;
    if items.len() != 2 {
        r.error(path, "a box is [lower, upper]");
        return None;
    }
    let lower = r.point(&index(path, 0), &items[0]);
    let upper = r.point(&index(path, 1), &items[1]);
    let (lower, upper) = (lower?, upper?);
    r.check(path, AxisBox::new(lower, upper))
}

fn read_mask(r: &mut Reader, path: &str, v: &Value) -> Option<GridMask> {
    let map = r.object(path, v, &["origin", "counts", "widths", "included"])?;
    let origin = r.required(path, map, "origin").and_then(|x| r.numbers(&join(path, "origin"), x));
    let counts = r.required(path, map, "counts").and_then(|x| {
        let p = join(path, "counts");
        let items = r.nonempty_array(&p, x)?;
        r.each(&p, items, |r, p, c| r.count(p, c))
    });
    let widths = r.required(path, map, "widths").and_then(|x| r.numbers(&join(path, "widths"), x));
    let included = r.required(path, map, "included").and_then(|x| {
        let p = join(path, "included");
        let items = r.nonempty_array(&p, x)?;
        r.each(&p, items, |r, p, c| match c {
            Value::Bool(b) => Some(*b),
            Value::Number(n) if n.as_u64() == Some(0) => Some(false),
            Value::Number(n) if n.as_u64() == Some(1) => Some(true),
            other => {
                r.error(p, format!("expected a boolean or 0/1, found {}", kind(other)));
                None
            }
        })
    });
    let (origin, counts, widths, included) = (origin?, counts?, widths?, included?);
    r.check(path, GridMask::new(origin, counts, widths, included))
}

/// An array of points, `{"range": [lo, hi]}` (integers, one dimension) or
/// `{"grid": [lo, hi], "dimension": d}` (integer grid, lexicographic).
pub fn read_freqs(r: &mut Reader, path: &str, v: &Value) -> Option<FrequencySet> {
    if v.is_array() {
        let items = r.nonempty_array(path, v)?;
        let points = r.each(path, items, |r, p, x| r.point(p, x))?;
        let d = points[0].len();
        if let Some(i) = points.iter().position(|p| p.len() != d) {
            r.error(&index(path, i), format!("expected {d} coordinates"));
            return None;
        }
        return r.check(path, FrequencySet::new(d, points));
    }
    let map = r.object(path, v, &["range", "grid", "dimension"])?;
    let bounds = |r: &mut Reader, p: &str, x: &Value| -> Option<(i64, i64)> {
        let items = r.array(p, x)?;
        if items.len() != 2 {
            r.error(p, "expected [lo, hi]");
            return None;
        }
        let lo = r.integer(&index(p, 0), &items[0]);
        let hi = r.integer(&index(p, 1), &items[1]);
        let (lo, hi) = (lo?, hi?);
        if lo > hi {
            r.error(p, "lo must not exceed hi");
            return None;
        }
        Some((lo, hi))
    };
    match (map.get("range"), map.get("grid")) {
        (Some(x), None) => {
            if map.contains_key("dimension") {
                r.error(&join(path, "dimension"), "only valid with \"grid\"");
            }
            let (lo, hi) = bounds(r, &join(path, "range"), x)?;
            r.check(path, FrequencySet::integer_range(lo, hi))
        }
        (None, Some(x)) => {
            let b = bounds(r, &join(path, "grid"), x);
            let d = r.or_default(path, map, "dimension", 1, |r, p, x| r.count(p, x));
            let ((lo, hi), d) = (b?, d?);
            let points = (hi - lo + 1) as u64;
            if points.checked_pow(d as u32).map_or(true, |n| n > 4096) {
                r.error(path, "grid has more than 4096 points");
                return None;
            }
            r.check(path, FrequencySet::integer_grid(d, lo, hi))
        }
        _ => {
            r.error(path, "needs exactly one of \"range\" or \"grid\"");
            None
        }
    }
}

/// Profiles accepted by [`read_weight`].
pub const WEIGHT_PROFILES: [&str; 5] = ["indicator", "constant", "affine", "bump", "table"];

/// `{"profile": ..., "nodes": n, ...}` sampled on `domain`; keys beyond
/// `profile` and `nodes` depend on the profile. `extra` lists additional
/// profiles the caller handles itself, returned as `Err(name)`.
pub fn read_weight(
    r: &mut Reader,
    path: &str,
    v: &Value,
    domain: Option<&Domain>,
    extra: &[&str],
) -> Option<Result<SpectralWeight, (String, usize)>> {
    let mark = r.errors().len();
    let Some(map) = v.as_object() else {
        r.error(path, format!("expected an object, found {}", kind(v)));
        return None;
    };
    let mut options: Vec<&str> = WEIGHT_PROFILES.to_vec();
    options.extend_from_slice(extra);
    let profile = r.required(path, map, "profile").and_then(|x| r.choice(&join(path, "profile"), x, &options))?;
    let allowed: &[&str] = match profile {
        "constant" => &["profile", "nodes", "value"],
        "affine" => &["profile", "nodes", "offset", "slope"],
        "bump" => &["profile", "nodes", "steepness"],
        "table" => &["profile", "nodes", "values"],
        _ => &["profile", "nodes"],
    };
    r.object(path, v, allowed)?;
    let nodes = r.or_default(path, map, "nodes", DEFAULT_NODES, |r, p, x| r.count(p, x));
    let nodes = r.clean_since(mark, nodes)?;
    if extra.contains(&profile) {
        return Some(Err((profile.to_string(), nodes)));
    }
    let weight = match profile {
        "indicator" => domain.and_then(|d| r.check(path, SpectralWeight::indicator(d, nodes))),
        "constant" => {
            let c = r.required(path, map, "value").and_then(|x| r.complex(&join(path, "value"), x));
            domain.zip(c).and_then(|(d, c)| r.check(path, SpectralWeight::constant(d, c, nodes)))
        }
        "affine" => {
            let offset = r.required(path, map, "offset").and_then(|x| r.number(&join(path, "offset"), x));
            let slope = r.required(path, map, "slope").and_then(|x| r.point(&join(path, "slope"), x));
            let (offset, slope) = (offset?, slope?);
            domain.and_then(|d| r.check(path, SpectralWeight::affine(d, offset, slope, nodes)))
        }
        "bump" => {
            let s = r.or_default(path, map, "steepness", 1.0, |r, p, x| r.positive(p, x))?;
            domain.and_then(|d| r.check(path, pwbasis_core::paley_wiener::bump_window(d, s, nodes)))
        }
        "table" => {
            let values = r.required(path, map, "values").and_then(|x| {
                let p = join(path, "values");
                let items = r.nonempty_array(&p, x)?;
                r.each(&p, items, |r, p, c| r.complex(p, c))
            });
            domain.zip(values).and_then(|(d, vals)| r.check(path, SpectralWeight::from_table(d, nodes, vals)))
        }
        _ => unreachable!("profile validated against the option list"),
    };
    r.clean_since(mark, weight.map(Ok))
}
