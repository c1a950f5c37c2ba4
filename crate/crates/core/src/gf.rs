//! Finite fields `F_{p^h}` with exact element arithmetic.
//!
//! A [`FieldSpec`] owns everything about one field: the characteristic `p`,
//! the extension degree `h`, and a monic degree-`h` modulus that is both
//! irreducible and primitive (its root `w` generates the multiplicative
//! group).  Both properties are verified at construction time, so a
//! successfully built field can be trusted downstream.
//!
//! Elements are stored packed: the coefficient vector `(c_0, ..., c_{h-1})`
//! of an element in the power basis of `w` is encoded as the integer
//! `sum c_i p^i`.  Zero is the code `0`, addition works digit-wise in
//! `O(h)`, and a discrete-log table is built lazily per field to make
//! multiplication, inversion and `w^k` I/O constant time.  Field orders are
//! capped at `2^20`, which keeps every table affordable.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest supported field order `p^h`.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// One element of a [`FieldSpec`], packed as `sum c_i p^i`.
///
/// An `Element` is meaningful only together with the field it came from;
/// all arithmetic goes through [`FieldSpec`] methods.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Element(pub(crate) u32);

impl Element {
    /// The packed code of this element.  `0` is the zero element.
    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Derived data of a Galois inner product exponent `e` over `F_{p^h}`:
/// `r = 2e` when `2e <= h`, otherwise `r = 2e - h`, and `g = gcd(r, h)`
/// with `gcd(0, h) = h`.  The subfield `F_{p^g}` is where the entries of
/// liftable defining matrices must live.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisParams {
    pub e: u32,
    pub r: u32,
    pub g: u32,
}

struct LogTables {
    /// `exp[k]` is the packed code of `w^k`, `0 <= k < q - 1`.
    exp: Vec<u32>,
    /// `log[code]` is `k` with `w^k = code`; entry 0 is unused.
    log: Vec<u32>,
}

struct FieldInner {
    p: u64,
    h: u32,
    q: u64,
    /// Monic modulus, low-to-high, length `h + 1`.
    modulus: Vec<u64>,
    tables: OnceLock<LogTables>,
}

/// A concrete finite field `F_{p^h}` with a pinned primitive modulus.
///
/// Cloning is cheap (shared interior).  Two values are interoperable
/// exactly when `(p, h, modulus)` coincide; matrix- and code-level
/// operations enforce this.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<FieldInner>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p
            && self.inner.h == other.inner.h
            && self.inner.modulus == other.inner.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({})", self)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F_{} = F_{}[x]/({})",
            self.inner.q,
            self.inner.p,
            poly_to_string(&self.inner.modulus)
        )
    }
}

/// Pinned moduli for the common small fields, low-to-high coefficients.
///
/// Each entry is irreducible with `x` primitive (checked again whenever the
/// field is built).  The choices agree with the tables used by the usual
/// computer-algebra systems, so powers of `w` printed here line up with
/// published data for these fields.
const PINNED_MODULI: &[(u64, u32, &[u64])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 6, 1]),
    (11, 1, &[9, 1]),
    (13, 1, &[11, 1]),
];

impl FieldSpec {
    /// Build `F_{p^h}`.
    ///
    /// Without an explicit modulus the pinned table is consulted; for a
    /// `(p, h)` outside the table the lexicographically first monic
    /// irreducible primitive polynomial (constant coefficient varying
    /// fastest) is selected, so the choice is deterministic either way.
    /// An explicit modulus must be monic of degree `h` with coefficients
    /// in `[0, p)`, irreducible, and have `x` primitive; violations are
    /// reported as distinct errors.
    pub fn new(p: u64, h: u32, modulus: Option<&[u64]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if h == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = checked_pow(p, h).ok_or(Error::FieldTooLarge { p, h })?;
        if q > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge { p, h });
        }

        let modulus = match modulus {
            Some(m) => {
                let m: Vec<u64> = m.to_vec();
                if m.len() != h as usize + 1
                    || m[h as usize] != 1
                    || m.iter().any(|&c| c >= p)
                {
                    return Err(Error::BadModulus {
                        expected: h,
                        got: m,
                    });
                }
                check_modulus(p, h, q, &m)?;
                m
            }
            None => match PINNED_MODULI.iter().find(|&&(tp, th, _)| tp == p && th == h) {
                Some(&(_, _, m)) => {
                    let m = m.to_vec();
                    check_modulus(p, h, q, &m)?;
                    m
                }
                None => search_modulus(p, h, q)?,
            },
        };

        Ok(FieldSpec {
            inner: Arc::new(FieldInner {
                p,
                h,
                q,
                modulus,
                tables: OnceLock::new(),
            }),
        })
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn h(&self) -> u32 {
        self.inner.h
    }

    /// Field order `q = p^h`.
    pub fn order(&self) -> u64 {
        self.inner.q
    }

    /// Monic modulus, low-to-high, length `h + 1`.
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> Element {
        Element(0)
    }

    pub fn one(&self) -> Element {
        Element(1)
    }

    /// The pinned primitive element `w` (the residue of `x`).
    pub fn omega(&self) -> Element {
        if self.inner.h == 1 {
            // x = -c mod (x + c)
            let c = self.inner.modulus[0];
            Element(((self.inner.p - c) % self.inner.p) as u32)
        } else {
            Element(self.inner.p as u32)
        }
    }

    /// All `q` elements in packed-code order (zero first).
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.inner.q as u32).map(Element)
    }

    /// True when `x` is a valid packed element of this field.
    pub fn contains(&self, x: Element) -> bool {
        (x.0 as u64) < self.inner.q
    }

    /// Guard that `x` is a valid packed element of this field.
    pub fn ensure_contains(&self, x: Element) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ForeignElement(x.0 as u64, self.to_string()))
        }
    }

    /// Guard that `other` is the identical field.
    pub fn ensure_same(&self, other: &FieldSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::MixedFields(self.to_string(), other.to_string()))
        }
    }

    /// Coefficient vector `(c_0, ..., c_{h-1})` of `x` in the power basis.
    pub fn coeffs(&self, x: Element) -> Vec<u64> {
        let p = self.inner.p as u32;
        let mut v = Vec::with_capacity(self.inner.h as usize);
        let mut c = x.0;
        for _ in 0..self.inner.h {
            v.push((c % p) as u64);
            c /= p;
        }
        v
    }

    /// Element with the given coefficient vector; each value must lie in
    /// `[0, p)` and at most `h` coefficients may be given.
    pub fn element_from_coeffs(&self, coeffs: &[u64]) -> Result<Element> {
        if coeffs.len() > self.inner.h as usize {
            return Err(self.syntax_err(
                &format!("{:?}", coeffs),
                format!("expected at most {} coefficients", self.inner.h),
            ));
        }
        let p = self.inner.p;
        let mut code: u64 = 0;
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= p {
                return Err(self.syntax_err(
                    &format!("{:?}", coeffs),
                    format!("coefficient {} is outside [0, {})", c, p),
                ));
            }
            code += c * checked_pow(p, i as u32).unwrap();
        }
        Ok(Element(code as u32))
    }

    /// Embed an integer through the prime subfield (`n mod p` times one).
    pub fn from_int(&self, n: u64) -> Element {
        Element((n % self.inner.p) as u32)
    }

    // ------------------------------------------------------------------
    // arithmetic
    // ------------------------------------------------------------------

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        debug_assert!(self.contains(a) && self.contains(b));
        let p = self.inner.p as u32;
        if p == 2 {
            return Element(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.inner.h {
            let mut s = x % p + y % p;
            if s >= p {
                s -= p;
            }
            out += s * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        Element(out)
    }

    #[inline]
    pub fn neg(&self, a: Element) -> Element {
        debug_assert!(self.contains(a));
        let p = self.inner.p as u32;
        if p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.inner.h {
            let d = x % p;
            if d != 0 {
                out += (p - d) * place;
            }
            x /= p;
            place = place.wrapping_mul(p);
        }
        Element(out)
    }

    #[inline]
    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        debug_assert!(self.contains(a) && self.contains(b));
        if a.0 == 0 || b.0 == 0 {
            return Element(0);
        }
        let t = self.tables();
        let m = self.inner.q - 1;
        let k = (t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64) % m;
        Element(t.exp[k as usize])
    }

    pub fn inv(&self, a: Element) -> Result<Element> {
        debug_assert!(self.contains(a));
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let t = self.tables();
        let m = self.inner.q - 1;
        let k = (m - t.log[a.0 as usize] as u64) % m;
        Ok(Element(t.exp[k as usize]))
    }

    pub fn div(&self, a: Element, b: Element) -> Result<Element> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^k` with `0^0 = 1`; a negative exponent of zero is division by zero.
    pub fn pow(&self, a: Element, k: i64) -> Result<Element> {
        if a.0 == 0 {
            return match k.cmp(&0) {
                std::cmp::Ordering::Greater => Ok(Element(0)),
                std::cmp::Ordering::Equal => Ok(self.one()),
                std::cmp::Ordering::Less => Err(Error::DivisionByZero),
            };
        }
        let t = self.tables();
        let m = (self.inner.q - 1) as i128;
        let l = t.log[a.0 as usize] as i128;
        let k = ((l * k as i128) % m + m) % m;
        Ok(Element(t.exp[k as usize]))
    }

    /// `w^k` (exponent taken modulo `q - 1`, negatives allowed).
    pub fn omega_pow(&self, k: i64) -> Element {
        let t = self.tables();
        let m = (self.inner.q - 1) as i128;
        let k = ((k as i128) % m + m) % m;
        Element(t.exp[k as usize])
    }

    /// A square root of `x`, or `None` when `x` is a non-residue.  In
    /// characteristic 2 every element has a (unique) root; in odd
    /// characteristic exactly the elements with even discrete log do.
    pub fn sqrt(&self, x: Element) -> Option<Element> {
        debug_assert!(self.contains(x));
        if x.0 == 0 {
            return Some(x);
        }
        if self.inner.p == 2 {
            return Some(self.frobenius(x, self.inner.h - 1));
        }
        let l = self.log(x).expect("nonzero element has a log");
        if l % 2 == 0 {
            Some(self.omega_pow((l / 2) as i64))
        } else {
            None
        }
    }

    /// Discrete log of `x` base `w`; `None` for zero.
    pub fn log(&self, x: Element) -> Option<u64> {
        debug_assert!(self.contains(x));
        if x.0 == 0 {
            None
        } else {
            Some(self.tables().log[x.0 as usize] as u64)
        }
    }

    /// Frobenius power `x^(p^e)`; `e` is reduced modulo `h`.
    pub fn frobenius(&self, x: Element, e: u32) -> Element {
        debug_assert!(self.contains(x));
        if x.0 == 0 {
            return x;
        }
        let e = e % self.inner.h;
        if e == 0 {
            return x;
        }
        let t = self.tables();
        let m = self.inner.q - 1;
        let pe = checked_pow(self.inner.p, e).unwrap() % m;
        let k = (t.log[x.0 as usize] as u64 * pe) % m;
        Element(t.exp[k as usize])
    }

    // ------------------------------------------------------------------
    // Galois exponents and subfields
    // ------------------------------------------------------------------

    /// Derived `(r, g)` for the inner-product exponent `e` (reduced mod `h`).
    pub fn galois_params(&self, e: u32) -> GaloisParams {
        let h = self.inner.h;
        let e = e % h;
        let r = if 2 * e <= h { 2 * e } else { 2 * e - h };
        let g = if r == 0 { h } else { num_integer::gcd(r, h) };
        GaloisParams { e, r, g }
    }

    /// Whether `x` lies in the subfield `F_{p^g}`; `g` must divide `h`.
    pub fn in_subfield(&self, x: Element, g: u32) -> Result<bool> {
        self.ensure_contains(x)?;
        if g == 0 || self.inner.h % g != 0 {
            return Err(Error::NotASubfieldDegree(g, self.inner.h));
        }
        Ok(self.frobenius(x, g % self.inner.h) == x)
    }

    /// The `p^g` elements of the subfield `F_{p^g}`: zero first, then
    /// `w^(k * (q-1)/(p^g-1))` for increasing `k`.
    pub fn subfield_elements(&self, g: u32) -> Result<Vec<Element>> {
        if g == 0 || self.inner.h % g != 0 {
            return Err(Error::NotASubfieldDegree(g, self.inner.h));
        }
        let sub_order = checked_pow(self.inner.p, g).unwrap();
        let step = (self.inner.q - 1) / (sub_order - 1);
        let mut out = Vec::with_capacity(sub_order as usize);
        out.push(Element(0));
        for k in 0..sub_order - 1 {
            out.push(self.omega_pow((k * step) as i64));
        }
        Ok(out)
    }

    // ------------------------------------------------------------------
    // formatting and parsing
    // ------------------------------------------------------------------

    /// Render `x` as `"0"`, `"1"`, `"w"` or `"w^k"`.
    pub fn format_element(&self, x: Element) -> String {
        match self.log(x) {
            None => "0".to_string(),
            Some(0) => "1".to_string(),
            Some(1) => "w".to_string(),
            Some(k) => format!("w^{}", k),
        }
    }

    fn syntax_err(&self, input: &str, reason: String) -> Error {
        Error::ElementSyntax {
            input: input.to_string(),
            field: self.to_string(),
            reason,
        }
    }

    /// Parse an element expression: a `+`/`-` separated sum of terms, each
    /// an unsigned integer (embedded through the prime subfield), `w`,
    /// `w^k`, or an integer times one of those (`2w^3`, `2*w^3`).
    pub fn parse_element(&self, s: &str) -> Result<Element> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(self.syntax_err(s, "empty string".into()));
        }
        let mut acc = self.zero();
        let mut rest = compact.as_str();
        let mut negate = false;
        if let Some(r) = rest.strip_prefix('-') {
            negate = true;
            rest = r;
        }
        loop {
            let split = rest.find(['+', '-']);
            let (term, tail) = match split {
                Some(i) => (&rest[..i], &rest[i..]),
                None => (rest, ""),
            };
            let v = self.parse_term(s, term)?;
            let v = if negate { self.neg(v) } else { v };
            acc = self.add(acc, v);
            if tail.is_empty() {
                break;
            }
            negate = tail.starts_with('-');
            rest = &tail[1..];
            if rest.is_empty() {
                return Err(self.syntax_err(s, "trailing operator".into()));
            }
        }
        Ok(acc)
    }

    fn parse_term(&self, whole: &str, term: &str) -> Result<Element> {
        if term.is_empty() {
            return Err(self.syntax_err(whole, "empty term".into()));
        }
        let digits_end = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
        let (digits, mut rest) = term.split_at(digits_end);
        let coeff = if digits.is_empty() {
            self.one()
        } else {
            let n: u64 = digits
                .parse()
                .map_err(|_| self.syntax_err(whole, format!("bad integer {:?}", digits)))?;
            self.from_int(n)
        };
        rest = rest.strip_prefix('*').unwrap_or(rest);
        if rest.is_empty() {
            return Ok(coeff);
        }
        let Some(pow) = rest.strip_prefix('w') else {
            return Err(self.syntax_err(whole, format!("unexpected {:?}", rest)));
        };
        let k: i64 = if pow.is_empty() {
            1
        } else {
            let Some(exp) = pow.strip_prefix('^') else {
                return Err(self.syntax_err(whole, format!("unexpected {:?}", pow)));
            };
            exp.parse()
                .map_err(|_| self.syntax_err(whole, format!("bad exponent {:?}", exp)))?
        };
        Ok(self.mul(coeff, self.omega_pow(k)))
    }

    /// Parse an element from its JSON form: a coefficient array, a string
    /// expression, or a bare integer below `p`.
    pub fn element_from_json(&self, v: &serde_json::Value) -> Result<Element> {
        match v {
            serde_json::Value::Array(items) => {
                let coeffs: Vec<u64> = items
                    .iter()
                    .map(|x| {
                        x.as_u64().ok_or_else(|| {
                            self.syntax_err(&v.to_string(), "coefficients must be unsigned integers".into())
                        })
                    })
                    .collect::<Result<_>>()?;
                self.element_from_coeffs(&coeffs)
            }
            serde_json::Value::String(s) => self.parse_element(s),
            serde_json::Value::Number(n) => {
                let n = n
                    .as_u64()
                    .ok_or_else(|| self.syntax_err(&v.to_string(), "expected an unsigned integer".into()))?;
                if n >= self.inner.p {
                    return Err(self.syntax_err(
                        &v.to_string(),
                        format!(
                            "bare integers must be below p = {}; use a coefficient array or \"w^k\"",
                            self.inner.p
                        ),
                    ));
                }
                Ok(self.from_int(n))
            }
            serde_json::Value::Object(map) => {
                let inner = map.get("pow").or_else(|| map.get("coeffs")).ok_or_else(|| {
                    self.syntax_err(&v.to_string(), "object form needs \"pow\" or \"coeffs\"".into())
                })?;
                self.element_from_json(inner)
            }
            other => Err(self.syntax_err(&other.to_string(), "expected array, string, integer or object".into())),
        }
    }

    /// JSON form of `x`: coefficients plus the `w^k` rendering.
    pub fn element_to_json(&self, x: Element) -> serde_json::Value {
        serde_json::json!({
            "coeffs": self.coeffs(x),
            "pow": self.format_element(x),
        })
    }

    /// Serializable descriptor `(p, h, modulus)`.
    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.inner.p,
            h: self.inner.h,
            modulus: self.inner.modulus.clone(),
        }
    }

    // ------------------------------------------------------------------
    // internals
    // ------------------------------------------------------------------

    fn tables(&self) -> &LogTables {
        self.inner.tables.get_or_init(|| build_tables(&self.inner))
    }
}

/// JSON-facing field descriptor: `{"p": .., "h": .., "modulus": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub h: u32,
    pub modulus: Vec<u64>,
}

impl FieldDescriptor {
    pub fn build(&self) -> Result<FieldSpec> {
        FieldSpec::new(self.p, self.h, Some(&self.modulus))
    }
}

fn build_tables(f: &FieldInner) -> LogTables {
    let q = f.q as usize;
    let p = f.p as u32;
    let h = f.h as usize;
    let mut exp = vec![0u32; q - 1];
    let mut log = vec![0u32; q];

    // Walk acc = w^k in coefficient form, multiplying by x and reducing by
    // the modulus at every step.
    let mut acc = vec![0u32; h];
    acc[0] = 1;
    let modulus: Vec<u32> = f.modulus.iter().map(|&c| c as u32).collect();
    let omega0 = if h == 1 { (p - modulus[0] % p) % p } else { 0 };
    for (k, slot) in exp.iter_mut().enumerate() {
        let code: u32 = acc
            .iter()
            .rev()
            .fold(0u64, |a, &c| a * f.p + c as u64) as u32;
        *slot = code;
        debug_assert!(k == 0 || code != 1, "x is not primitive");
        log[code as usize] = k as u32;
        // acc *= x
        if h == 1 {
            acc[0] = ((acc[0] as u64 * omega0 as u64) % f.p) as u32;
        } else {
            let carry = acc[h - 1];
            for i in (1..h).rev() {
                acc[i] = acc[i - 1];
            }
            acc[0] = 0;
            if carry != 0 {
                for i in 0..h {
                    let sub = (carry as u64 * modulus[i] as u64) % f.p;
                    let cur = acc[i] as u64;
                    acc[i] = ((cur + f.p - sub) % f.p) as u32;
                }
            }
        }
    }
    LogTables { exp, log }
}

// ----------------------------------------------------------------------
// modulus validation: polynomial arithmetic over F_p on plain Vec<u64>
// ----------------------------------------------------------------------

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let mut bb: Vec<u64> = b.to_vec();
    poly_trim(&mut bb);
    let db = bb.len() - 1;
    let lead_inv = mod_inv(bb[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = (r[dr] * lead_inv) % p;
        if c != 0 {
            for i in 0..=db {
                let t = (c * bb[i]) % p;
                let idx = dr - db + i;
                r[idx] = (r[idx] + p - t) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    poly_rem(&prod, f, p)
}

/// `x^n mod f` over `F_p`.
fn poly_xpow(mut n: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut base = vec![0u64, 1];
    base = poly_rem(&base, f, p);
    let mut acc = vec![1u64];
    while n > 0 {
        if n & 1 == 1 {
            acc = poly_mulmod(&acc, &base, f, p);
        }
        base = poly_mulmod(&base, &base, f, p);
        n >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x: Vec<u64> = a.to_vec();
    let mut y: Vec<u64> = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p is prime and a != 0 mod p
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn checked_pow(p: u64, e: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(p)?;
        if acc > MAX_FIELD_ORDER {
            return None;
        }
    }
    Some(acc)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Verify that `f` is irreducible over `F_p` and that `x` is primitive in
/// `F_p[x]/(f)`.
fn check_modulus(p: u64, h: u32, q: u64, f: &[u64]) -> Result<()> {
    let fs = || poly_to_string(f);
    if h > 1 {
        // Irreducibility (distinct-degree criteria):
        // x^(p^h) = x mod f, and gcd(x^(p^(h/l)) - x, f) = 1 for prime l | h.
        let xq = poly_xpow(q, f, p);
        let x = poly_rem(&[0, 1], f, p);
        if xq != x {
            return Err(Error::ReducibleModulus(fs(), p));
        }
        for l in prime_factors(h as u64) {
            let e = h as u64 / l;
            let mut d = poly_xpow(mod_pow_u64(p, e), f, p);
            // d -= x
            while d.len() < 2 {
                d.push(0);
            }
            d[1] = (d[1] + p - 1) % p;
            poly_trim(&mut d);
            let g = poly_gcd(&d, f, p);
            if g.len() != 1 {
                return Err(Error::ReducibleModulus(fs(), p));
            }
        }
    } else if f[0] == 0 {
        // f = x: the residue of x is zero, not a unit.
        return Err(Error::NonPrimitiveModulus {
            modulus: fs(),
            order: 0,
            expected: q - 1,
        });
    }

    // Primitivity: ord(x) = q - 1 iff x^((q-1)/l) != 1 for each prime l.
    for l in prime_factors(q - 1) {
        let e = (q - 1) / l;
        let r = if h == 1 {
            let root = (p - f[0] % p) % p;
            vec![mod_pow(root, e, p)]
        } else {
            poly_xpow(e, f, p)
        };
        if r == [1] {
            let mut order = 1;
            for d in 1..q {
                if (q - 1) % d == 0 {
                    let probe = if h == 1 {
                        let root = (p - f[0] % p) % p;
                        vec![mod_pow(root, d, p)]
                    } else {
                        poly_xpow(d, f, p)
                    };
                    if probe == [1] {
                        order = d;
                        break;
                    }
                }
            }
            return Err(Error::NonPrimitiveModulus {
                modulus: fs(),
                order,
                expected: q - 1,
            });
        }
    }
    Ok(())
}

fn mod_pow_u64(p: u64, e: u64) -> u64 {
    let mut acc = 1u64;
    for _ in 0..e {
        acc *= p;
    }
    acc
}

fn search_modulus(p: u64, h: u32, q: u64) -> Result<Vec<u64>> {
    let mut coeffs = vec![0u64; h as usize + 1];
    coeffs[h as usize] = 1;
    for code in 0..q {
        let mut c = code;
        for slot in coeffs.iter_mut().take(h as usize) {
            *slot = c % p;
            c /= p;
        }
        if check_modulus(p, h, q, &coeffs).is_ok() {
            return Ok(coeffs);
        }
    }
    Err(Error::NoModulus { p, h })
}

fn poly_to_string(f: &[u64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, &c) in f.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let part = match (i, c) {
            (0, c) => format!("{}", c),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{}x", c),
            (i, 1) => format!("x^{}", i),
            (i, c) => format!("{}x^{}", c, i),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f81() -> FieldSpec {
        FieldSpec::new(3, 4, None).unwrap()
    }

    fn f8() -> FieldSpec {
        FieldSpec::new(2, 3, None).unwrap()
    }

    fn f4() -> FieldSpec {
        FieldSpec::new(2, 2, None).unwrap()
    }

    fn f9() -> FieldSpec {
        FieldSpec::new(3, 2, None).unwrap()
    }

    #[test]
    fn constructs_f81_with_primitive_omega() {
        let f = f81();
        assert_eq!(f.order(), 81);
        assert_eq!(f.pow(f.omega(), 80).unwrap(), f.one());
        assert_ne!(f.pow(f.omega(), 40).unwrap(), f.one());
        // w^40 is the unique element of order two
        assert_eq!(f.omega_pow(40), f.from_int(2));
    }

    #[test]
    fn accepts_explicit_f8_modulus() {
        // x^3 + x + 1; irreducible over F_2 since it has no root:
        assert_eq!((0u64.pow(3) + 0 + 1) % 2, 1);
        assert_eq!((1u64.pow(3) + 1 + 1) % 2, 1);
        let f = FieldSpec::new(2, 3, Some(&[1, 1, 0, 1])).unwrap();
        assert_eq!(f.order(), 8);
        assert_eq!(f.pow(f.omega(), 7).unwrap(), f.one());
    }

    #[test]
    fn rejects_bad_fields() {
        assert!(matches!(FieldSpec::new(4, 2, None), Err(Error::NotPrime(4))));
        assert!(matches!(FieldSpec::new(2, 0, None), Err(Error::ZeroDegree)));
        assert!(matches!(
            FieldSpec::new(2, 21, None),
            Err(Error::FieldTooLarge { .. })
        ));
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(matches!(
            FieldSpec::new(2, 2, Some(&[1, 0, 1])),
            Err(Error::ReducibleModulus(..))
        ));
        // x^2 + 1 is irreducible over F_3 but its root has order 4, not 8
        match FieldSpec::new(3, 2, Some(&[1, 0, 1])) {
            Err(Error::NonPrimitiveModulus { order, expected, .. }) => {
                assert_eq!(order, 4);
                assert_eq!(expected, 8);
            }
            other => panic!("expected NonPrimitiveModulus, got {:?}", other.map(|f| f.to_string())),
        }
        // non-monic / wrong degree
        assert!(matches!(
            FieldSpec::new(2, 2, Some(&[1, 1, 0])),
            Err(Error::BadModulus { .. })
        ));
    }

    #[test]
    fn every_pinned_modulus_is_primitive_irreducible() {
        for &(p, h, _) in PINNED_MODULI {
            let f = FieldSpec::new(p, h, None)
                .unwrap_or_else(|e| panic!("pinned ({}, {}) failed: {}", p, h, e));
            // construction re-checks the table entry; sanity beyond that:
            let q = f.order();
            assert_eq!(f.pow(f.omega(), (q - 1) as i64).unwrap(), f.one());
        }
    }

    #[test]
    fn searched_modulus_is_deterministic() {
        // (2, 9) has no pinned entry; the search must be reproducible.
        let a = FieldSpec::new(2, 9, None).unwrap();
        let b = FieldSpec::new(2, 9, None).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a.order(), 512);
    }

    #[test]
    fn basic_arithmetic_identities() {
        let f = f8();
        let w = f.omega();
        // w^6 * w = w^7 = 1
        assert_eq!(f.mul(f.omega_pow(6), w), f.one());
        // characteristic two: x + x = 0
        for x in f.elements() {
            assert_eq!(f.add(x, x), f.zero());
        }

        let f = f4();
        let w = f.omega();
        // w + w^2 = 1 in F_4
        assert_eq!(f.add(w, f.mul(w, w)), f.one());

        let f = f9();
        // 2 + 2 = 1 mod 3
        assert_eq!(f.add(f.from_int(2), f.from_int(2)), f.one());
        // characteristic three: x + x + x = 0
        for x in f.elements() {
            assert_eq!(f.add(f.add(x, x), x), f.zero());
        }
    }

    #[test]
    fn inverses_cover_the_whole_group() {
        let f = f81();
        for x in f.elements().skip(1) {
            let y = f.inv(x).unwrap();
            assert_eq!(f.mul(x, y), f.one());
        }
        assert!(matches!(f.inv(f.zero()), Err(Error::DivisionByZero)));
        assert!(matches!(f.pow(f.zero(), -1), Err(Error::DivisionByZero)));
        assert_eq!(f.pow(f.zero(), 0).unwrap(), f.one());
    }

    #[test]
    fn square_roots_match_exhaustive_squaring() {
        for f in [f8(), f9(), f81()] {
            let squares: std::collections::HashSet<u32> =
                f.elements().map(|x| f.mul(x, x).code()).collect();
            for x in f.elements() {
                match f.sqrt(x) {
                    Some(r) => assert_eq!(f.mul(r, r), x),
                    None => assert!(!squares.contains(&x.code())),
                }
            }
            if f.p() == 2 {
                // char 2: squaring is a bijection, so every root exists
                assert_eq!(squares.len(), f.order() as usize);
            } else {
                assert_eq!(squares.len(), (f.order() as usize + 1) / 2);
            }
        }
    }

    #[test]
    fn field_axioms_on_random_triples() {
        // a field this small can be convincingly spot-checked by scanning
        let f = f9();
        let els: Vec<Element> = f.elements().collect();
        for &a in &els {
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn frobenius_is_a_field_automorphism() {
        let f = f81();
        // frob_3(w^10) = w^(10 * 27 mod 80) = w^30
        assert_eq!(f.frobenius(f.omega_pow(10), 3), f.omega_pow(30));
        for e in 0..4 {
            for x in f.elements() {
                for y in f.elements().take(20) {
                    assert_eq!(
                        f.frobenius(f.add(x, y), e),
                        f.add(f.frobenius(x, e), f.frobenius(y, e))
                    );
                    assert_eq!(
                        f.frobenius(f.mul(x, y), e),
                        f.mul(f.frobenius(x, e), f.frobenius(y, e))
                    );
                }
                // frob_e is x -> x^(p^e)
                assert_eq!(f.frobenius(x, e), f.pow(x, 3i64.pow(e)).unwrap());
            }
        }
        // frob_h = identity
        for x in f.elements() {
            assert_eq!(f.frobenius(x, 4), x);
        }
    }

    #[test]
    fn galois_params_cases() {
        let f = f81();
        assert_eq!(f.galois_params(3), GaloisParams { e: 3, r: 2, g: 2 });
        assert_eq!(f.galois_params(0), GaloisParams { e: 0, r: 0, g: 4 });
        assert_eq!(f.galois_params(2), GaloisParams { e: 2, r: 4, g: 4 });
        let f = f9();
        assert_eq!(f.galois_params(1), GaloisParams { e: 1, r: 2, g: 2 });
    }

    #[test]
    fn subfield_membership_matches_fixed_points() {
        let f = f81();
        assert!(f.in_subfield(f.omega_pow(10), 2).unwrap());
        assert!(!f.in_subfield(f.omega(), 2).unwrap());
        let count = f
            .elements()
            .filter(|&x| f.in_subfield(x, 2).unwrap())
            .count();
        assert_eq!(count, 9);
        let count1 = f
            .elements()
            .filter(|&x| f.in_subfield(x, 1).unwrap())
            .count();
        assert_eq!(count1, 3);
        assert!(f.in_subfield(f.omega(), 4).unwrap());
        assert!(matches!(
            f.in_subfield(f.one(), 3),
            Err(Error::NotASubfieldDegree(3, 4))
        ));
    }

    #[test]
    fn subfield_elements_of_f81_form_f9() {
        let f = f81();
        let sub = f.subfield_elements(2).unwrap();
        assert_eq!(sub.len(), 9);
        assert_eq!(sub[0], f.zero());
        for (k, &x) in sub.iter().skip(1).enumerate() {
            assert_eq!(x, f.omega_pow((k as i64) * 10));
            assert!(f.in_subfield(x, 2).unwrap());
        }
        // closed under addition and multiplication
        for &a in &sub {
            for &b in &sub {
                assert!(sub.contains(&f.add(a, b)));
                assert!(sub.contains(&f.mul(a, b)));
            }
        }
    }

    #[test]
    fn element_parsing_and_formatting() {
        let f = f81();
        assert_eq!(f.parse_element("0").unwrap(), f.zero());
        assert_eq!(f.parse_element("1").unwrap(), f.one());
        assert_eq!(f.parse_element("w").unwrap(), f.omega());
        assert_eq!(f.parse_element("w^10").unwrap(), f.omega_pow(10));
        assert_eq!(f.parse_element("2").unwrap(), f.from_int(2));
        assert_eq!(
            f.parse_element("w + 1").unwrap(),
            f.add(f.omega(), f.one())
        );
        assert_eq!(
            f.parse_element("2w^3 + 1").unwrap(),
            f.add(f.mul(f.from_int(2), f.omega_pow(3)), f.one())
        );
        assert_eq!(
            f.parse_element("2*w^3").unwrap(),
            f.mul(f.from_int(2), f.omega_pow(3))
        );
        assert_eq!(f.parse_element("-1").unwrap(), f.neg(f.one()));
        assert!(f.parse_element("").is_err());
        assert!(f.parse_element("w^").is_err());
        assert!(f.parse_element("q").is_err());

        assert_eq!(f.format_element(f.zero()), "0");
        assert_eq!(f.format_element(f.one()), "1");
        assert_eq!(f.format_element(f.omega()), "w");
        assert_eq!(f.format_element(f.omega_pow(13)), "w^13");
        for x in f.elements() {
            assert_eq!(f.parse_element(&f.format_element(x)).unwrap(), x);
        }
    }

    #[test]
    fn element_json_roundtrip() {
        let f = f9();
        for x in f.elements() {
            let j = f.element_to_json(x);
            assert_eq!(f.element_from_json(&j["coeffs"]).unwrap(), x);
            assert_eq!(f.element_from_json(&j["pow"]).unwrap(), x);
            assert_eq!(f.element_from_json(&j).unwrap(), x);
        }
        // bare small integers are accepted, larger ones are not
        assert_eq!(
            f.element_from_json(&serde_json::json!(2)).unwrap(),
            f.from_int(2)
        );
        assert!(f.element_from_json(&serde_json::json!(5)).is_err());
        // out-of-range coefficients are rejected
        assert!(f.element_from_json(&serde_json::json!([3, 0])).is_err());
        assert!(f.element_from_json(&serde_json::json!([0, 0, 1])).is_err());
    }

    #[test]
    fn coeff_vectors_roundtrip() {
        let f = f81();
        for x in f.elements() {
            let c = f.coeffs(x);
            assert_eq!(c.len(), 4);
            assert!(c.iter().all(|&v| v < 3));
            assert_eq!(f.element_from_coeffs(&c).unwrap(), x);
        }
    }

    #[test]
    fn descriptor_rebuilds_identical_field() {
        let f = f81();
        let d = f.descriptor();
        let g = d.build().unwrap();
        assert_eq!(f, g);
        let json = serde_json::to_string(&d).unwrap();
        let d2: FieldDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(d, d2);
    }

    #[test]
    fn mixed_field_guard_fires() {
        let a = f8();
        let b = FieldSpec::new(2, 3, Some(&[1, 0, 1, 1])).unwrap(); // x^3 + x^2 + 1
        assert!(a.ensure_same(&a.clone()).is_ok());
        assert!(matches!(a.ensure_same(&b), Err(Error::MixedFields(..))));
    }

    #[test]
    fn prime_field_h1_has_integer_omega() {
        let f = FieldSpec::new(7, 1, None).unwrap();
        assert_eq!(f.omega(), f.from_int(3));
        let mut seen = std::collections::HashSet::new();
        for k in 0..6 {
            seen.insert(f.omega_pow(k));
        }
        assert_eq!(seen.len(), 6);
    }
}
