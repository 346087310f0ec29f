//! Exact arithmetic in GF(q²) for q = p^e.
//!
//! Elements are stored packed: the coefficient vector `(c_0, .., c_{2e-1})` of
//! `c_0 + c_1 t + .. + c_{2e-1} t^{2e-1}` is read as the base-p integer
//! `Σ c_i p^i`. Enumeration order is the numeric order of that integer, so for
//! GF(4) it is `0, 1, t, t+1`.
//!
//! GF(q) is not a separate context: it is the subfield fixed by [`FieldCtx::conj`].

use std::fmt;

use crate::error::{Error, Result};

/// Identifies the rule used to pick moduli; embedded in every report header.
pub const MODULUS_TABLE_VERSION: &str = "least-irreducible-v1";

/// Default ceiling on the number of elements of GF(q²).
pub const DEFAULT_CEILING: u64 = 1 << 16;

/// Orders up to this size get exp/log tables.
const TABLE_LIMIT: u64 = 1 << 16;

/// Odd-characteristic fields up to this size get a full addition table.
const ADD_TABLE_LIMIT: u64 = 256;

/// Shipped moduli for GF(p^n), n = 2e: the non-leading coefficients
/// `c_0..c_{n-1}` of the monic irreducible polynomial whose coefficient vector
/// `(c_{n-1}, .., c_0)` is lexicographically least. The same rule is applied
/// on the fly for pairs not listed here.
const MODULUS_TABLE: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1]),
    (2, 4, &[1, 1, 0, 0]),
    (2, 6, &[1, 1, 0, 0, 0, 0]),
    (2, 8, &[1, 1, 0, 1, 1, 0, 0, 0]),
    (3, 2, &[1, 0]),
    (3, 4, &[2, 1, 0, 0]),
    (5, 2, &[2, 0]),
    (5, 4, &[2, 0, 0, 0]),
    (7, 2, &[1, 0]),
    (7, 4, &[1, 1, 0, 0]),
    (11, 2, &[1, 0]),
    (13, 2, &[2, 0]),
];

/// An element of GF(q²) in packed coefficient form.
///
/// The value is only meaningful together with the [`FieldCtx`] that produced it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Packed value `Σ c_i p^i`.
    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.0 == 1
    }

    #[inline]
    pub(crate) fn from_raw(v: u32) -> Self {
        FieldElement(v)
    }
}

#[derive(Clone)]
enum AddKind {
    Xor,
    Table(Vec<u32>),
    Digits,
}

#[derive(Clone)]
struct Tables {
    /// `exp[i] = g^i` for `0 <= i < 2(order-1)`.
    exp: Vec<u32>,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u32>,
}

/// The field GF(q²) together with its arithmetic tables.
///
/// Immutable after construction; share it behind an `Arc` across workers.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    e: u32,
    q: u32,
    n: u32,
    order: u32,
    modulus: Vec<u32>,
    add: AddKind,
    neg: Vec<u32>,
    tables: Option<Tables>,
    /// Frobenius x -> x^q as a GF(p)-linear map: column i is the image of t^i.
    conj_map: Vec<Vec<u32>>,
    conj_table: Option<Vec<u32>>,
    primitive: u32,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus_string())
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

/// Splits `q` into `(p, e)` with `q = p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

impl FieldCtx {
    /// GF(q²) with the default size ceiling.
    pub fn new(q: u32) -> Result<Self> {
        Self::with_ceiling(q, DEFAULT_CEILING)
    }

    pub fn with_ceiling(q: u32, ceiling: u64) -> Result<Self> {
        let (p, e) = prime_power(q as u64).ok_or(Error::NotPrimePower(q as u64))?;
        let n = 2 * e;
        let order = (p as u64).pow(n);
        if order > ceiling {
            return Err(Error::FieldTooLarge { order, ceiling });
        }
        let modulus = match MODULUS_TABLE.iter().find(|(tp, tn, _)| *tp == p && *tn == n) {
            Some((_, _, c)) => c.to_vec(),
            None => least_irreducible(p, n),
        };
        Self::from_modulus(p, e, &modulus, ceiling)
    }

    /// Builds GF(p^{2e}) from explicit non-leading modulus coefficients `c_0..c_{2e-1}`.
    pub fn from_modulus(p: u32, e: u32, modulus: &[u32], ceiling: u64) -> Result<Self> {
        let n = 2 * e;
        if prime_power(p as u64) != Some((p, 1)) || e == 0 {
            return Err(Error::NotPrimePower(p as u64));
        }
        if modulus.len() != n as usize || modulus.iter().any(|&c| c >= p) {
            return Err(Error::ReducibleModulus);
        }
        let order64 = (p as u64).pow(n);
        if order64 > ceiling || order64 > u32::MAX as u64 {
            return Err(Error::FieldTooLarge { order: order64, ceiling });
        }
        let mut monic = modulus.to_vec();
        monic.push(1);
        if !is_irreducible(&monic, p) {
            return Err(Error::ReducibleModulus);
        }
        let order = order64 as u32;
        let q = p.pow(e);
        let mut ctx = FieldCtx {
            p,
            e,
            q,
            n,
            order,
            modulus: modulus.to_vec(),
            add: if p == 2 { AddKind::Xor } else { AddKind::Digits },
            neg: Vec::new(),
            tables: None,
            conj_map: Vec::new(),
            conj_table: None,
            primitive: 0,
        };
        ctx.primitive = ctx.find_primitive();
        if order64 <= TABLE_LIMIT {
            let m = (order - 1) as usize;
            let mut exp = vec![0u32; 2 * m];
            let mut log = vec![0u32; order as usize];
            let g = FieldElement(ctx.primitive);
            let mut x = FieldElement::ONE;
            for i in 0..m {
                exp[i] = x.0;
                exp[i + m] = x.0;
                log[x.0 as usize] = i as u32;
                x = ctx.mul_schoolbook(x, g);
            }
            ctx.tables = Some(Tables { exp, log });
        }
        if p != 2 {
            ctx.neg = (0..order).map(|a| ctx.neg_digits(a)).collect();
            if order64 <= ADD_TABLE_LIMIT {
                let mut t = Vec::with_capacity((order as usize) * (order as usize));
                for a in 0..order {
                    for b in 0..order {
                        t.push(ctx.add_digits(a, b));
                    }
                }
                ctx.add = AddKind::Table(t);
            }
        }
        // Frobenius^e is GF(p)-linear: record the image of each basis power.
        let t_q = ctx.pow_schoolbook(FieldElement(ctx.p_pow(1)), q as u64);
        let mut col = FieldElement::ONE;
        let mut map = Vec::with_capacity(n as usize);
        for _ in 0..n {
            map.push(ctx.digits(col.0));
            col = ctx.mul_schoolbook(col, t_q);
        }
        ctx.conj_map = map;
        if ctx.tables.is_some() {
            let table = (0..order).map(|a| ctx.conj_linear(FieldElement(a)).0).collect();
            ctx.conj_table = Some(table);
        }
        Ok(ctx)
    }

    fn p_pow(&self, i: u32) -> u32 {
        self.p.pow(i)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// `e` with `q = p^e`.
    pub fn degree_over_prime(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of elements of GF(q²).
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_even_char(&self) -> bool {
        self.p == 2
    }

    /// Non-leading modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The modulus as a polynomial string in `t`.
    pub fn modulus_string(&self) -> String {
        let mut digits = self.modulus.clone();
        digits.push(1);
        poly_string(&digits)
    }

    /// Whether exp/log tables back multiplication.
    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn primitive_element(&self) -> FieldElement {
        FieldElement(self.primitive)
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The generator `t` of the modulus basis.
    pub fn t(&self) -> FieldElement {
        FieldElement(self.p)
    }

    /// Element from a packed value; errors if it does not belong to this field.
    pub fn element(&self, v: u32) -> Result<FieldElement> {
        if v < self.order {
            Ok(FieldElement(v))
        } else {
            Err(Error::ForeignElement { value: v, order: self.order })
        }
    }

    /// The prime-field element `k mod p`.
    pub fn from_int(&self, k: i64) -> FieldElement {
        FieldElement(k.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.n as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Parse(format!("bad coefficient vector {coeffs:?}")));
        }
        Ok(FieldElement(self.pack(coeffs)))
    }

    /// Coefficient vector of length 2e, constant term first.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        self.digits(a.0)
    }

    fn digits(&self, mut v: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n as usize);
        for _ in 0..self.n {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    fn pack(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0u32, |acc, &d| acc * self.p + d)
    }

    /// All elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(FieldElement)
    }

    /// Checks that `a` belongs to this field.
    pub fn check(&self, a: FieldElement) -> Result<FieldElement> {
        self.element(a.0)
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.n {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * scale;
            scale = scale.wrapping_mul(self.p);
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn neg_digits(&self, a: u32) -> u32 {
        let mut a = a;
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.n {
            let d = (self.p - a % self.p) % self.p;
            out += d * scale;
            scale = scale.wrapping_mul(self.p);
            a /= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.add {
            AddKind::Xor => FieldElement(a.0 ^ b.0),
            AddKind::Table(t) => FieldElement(t[(a.0 * self.order + b.0) as usize]),
            AddKind::Digits => FieldElement(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            a
        } else {
            FieldElement(self.neg[a.0 as usize])
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    FieldElement::ZERO
                } else {
                    FieldElement(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
                }
            }
            None => self.mul_schoolbook(a, b),
        }
    }

    /// Polynomial product reduced by the modulus, without tables.
    pub fn mul_schoolbook(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let n = self.n as usize;
        let p = self.p as u64;
        let da = self.digits(a.0);
        let db = self.digits(b.0);
        let mut prod = vec![0u64; 2 * n];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // t^n = -Σ c_i t^i
        for k in (n..2 * n).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &m) in self.modulus.iter().enumerate() {
                let sub = c * m as u64 % p;
                prod[k - n + i] = (prod[k - n + i] + p - sub) % p;
            }
        }
        let digits: Vec<u32> = prod[..n].iter().map(|&d| d as u32).collect();
        FieldElement(self.pack(&digits))
    }

    fn pow_schoolbook(&self, a: FieldElement, mut k: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_schoolbook(acc, base);
            }
            base = self.mul_schoolbook(base, base);
            k >>= 1;
        }
        acc
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(&self, a: FieldElement, mut k: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(match &self.tables {
            Some(t) => {
                let m = self.order - 1;
                FieldElement(t.exp[((m - t.log[a.0 as usize]) % m) as usize])
            }
            None => self.pow(a, self.order as u64 - 2),
        })
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Checked variants that reject elements outside this field.
    pub fn try_add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.add(self.check(a)?, self.check(b)?))
    }

    pub fn try_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(self.check(a)?, self.check(b)?))
    }

    pub fn try_inv(&self, a: FieldElement) -> Result<FieldElement> {
        self.inv(self.check(a)?)
    }

    fn conj_linear(&self, a: FieldElement) -> FieldElement {
        let p = self.p as u64;
        let d = self.digits(a.0);
        let mut out = vec![0u64; self.n as usize];
        for (i, &c) in d.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (k, &m) in self.conj_map[i].iter().enumerate() {
                out[k] = (out[k] + c as u64 * m as u64) % p;
            }
        }
        let digits: Vec<u32> = out.iter().map(|&x| x as u32).collect();
        FieldElement(self.pack(&digits))
    }

    /// Conjugation `a ↦ a^q`.
    #[inline]
    pub fn conj(&self, a: FieldElement) -> FieldElement {
        match &self.conj_table {
            Some(t) => FieldElement(t[a.0 as usize]),
            None => self.conj_linear(a),
        }
    }

    /// Conjugation by square-and-multiply, independent of the linear map.
    pub fn conj_pow(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.q as u64)
    }

    /// The norm `a^{q+1}` to GF(q).
    #[inline]
    pub fn norm(&self, a: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => {
                if a.is_zero() {
                    return a;
                }
                let m = (self.order - 1) as u64;
                let l = t.log[a.0 as usize] as u64 * (self.q as u64 + 1) % m;
                FieldElement(t.exp[l as usize])
            }
            None => self.mul(self.conj(a), a),
        }
    }

    /// The norm by repeated squaring.
    pub fn norm_pow(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.q as u64 + 1)
    }

    /// Whether `a` lies in the subfield GF(q).
    pub fn in_subfield(&self, a: FieldElement) -> bool {
        self.conj(a) == a
    }

    /// Elements of GF(q) in packed order.
    pub fn subfield(&self) -> Vec<FieldElement> {
        self.elements().filter(|&a| self.in_subfield(a)).collect()
    }

    fn find_primitive(&self) -> u32 {
        let m = (self.order - 1) as u64;
        let factors = prime_factors(m);
        (1..self.order)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&f| self.pow_schoolbook(FieldElement(g), m / f) != FieldElement::ONE)
            })
            .expect("multiplicative group is cyclic")
    }

    /// Polynomial string in `t`, e.g. `2t^2+t+1`.
    pub fn format(&self, a: FieldElement) -> String {
        poly_string(&self.digits(a.0))
    }

    /// Parses the textual form produced by [`FieldCtx::format`].
    pub fn parse(&self, s: &str) -> Result<FieldElement> {
        let bad = || Error::Parse(format!("invalid field element {s:?}"));
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        let mut digits = vec![0u32; self.n as usize];
        let mut seen = vec![false; self.n as usize];
        for term in s.split('+') {
            if term.is_empty() {
                return Err(bad());
            }
            let (coef, power) = match term.find('t') {
                None => (term, 0u32),
                Some(pos) => {
                    let rest = &term[pos + 1..];
                    let power = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .and_then(|r| r.parse::<u32>().ok())
                            .ok_or_else(bad)?
                    };
                    (&term[..pos], power)
                }
            };
            let c = if coef.is_empty() {
                if power == 0 {
                    return Err(bad());
                }
                1
            } else {
                coef.parse::<u32>().map_err(|_| bad())?
            };
            if power >= self.n || c >= self.p || seen[power as usize] {
                return Err(bad());
            }
            if c == 0 && s != "0" {
                return Err(bad());
            }
            seen[power as usize] = true;
            digits[power as usize] = c;
        }
        Ok(FieldElement(self.pack(&digits)))
    }
}

fn poly_string(digits: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in digits.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
        let var = match i {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        };
        terms.push(format!("{coef}{var}"));
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= m {
        if m.is_multiple_of(f) {
            out.push(f);
            while m.is_multiple_of(f) {
                m /= f;
            }
        }
        f += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Remainder of `a` modulo the monic `b`, coefficients over GF(p), constant first.
fn poly_rem_mod_p(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let db = b.len() - 1;
    let p = p as u64;
    while r.len() > db {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &c) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - lead * c as u64 % p) % p;
            }
        }
        r.pop();
    }
    r.into_iter().map(|x| x as u32).collect()
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
pub(crate) fn is_irreducible(monic: &[u32], p: u32) -> bool {
    let deg = monic.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for v in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut w = v;
            for _ in 0..d {
                cand.push((w % p as u64) as u32);
                w /= p as u64;
            }
            cand.push(1);
            if poly_rem_mod_p(monic, &cand, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The lexicographically least monic irreducible polynomial of degree `n`.
pub(crate) fn least_irreducible(p: u32, n: u32) -> Vec<u32> {
    let count = (p as u64).pow(n);
    for v in 0..count {
        let mut c = Vec::with_capacity(n as usize + 1);
        let mut w = v;
        for _ in 0..n {
            c.push((w % p as u64) as u32);
            w /= p as u64;
        }
        c.push(1);
        if is_irreducible(&c, p) {
            c.pop();
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
