//! Arithmetic in a degree-p Artin–Schreier extension `L = K(α)`,
//! `α^p = α + f`, on coordinates in the basis `1, α, …, α^{p−1}`.
//!
//! Valuations come from norms: `ord_L(x) = e·ord_K(N x)/p`, normalized so that
//! `ord_L(π) = e`. Norms and minimal polynomials are characteristic
//! polynomials of the multiplication operator, computed division-free.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::artin_schreier::{ASCase, ASClassification, ASData};
use crate::base_change::{BaseChangeDesc, BaseChangeKind};
use crate::error::{bail, Result};
use crate::laurent_series::{FieldRef, LaurentSeries};
use crate::residue_fields::{Poly, RatFunc, ResidueFieldDesc};

/// The algebra `K[α]/(α^p − α − f)` for a reduced, ramified or ferocious `f`.
#[derive(Debug, PartialEq, Eq)]
pub struct ASAlgebra {
    data: ASData,
    class: ASClassification,
    p: usize,
    ord_alpha: Ratio<i64>,
}

impl ASAlgebra {
    pub fn new(d: &ASData) -> Result<Arc<Self>> {
        let class = d.classify()?;
        if class.case == ASCase::Unramified {
            bail!(Contract, "L/K is unramified; only ramified or ferocious extensions are modelled");
        }
        let p = d.p() as usize;
        let ord_f = d.f.valuation()?;
        // N(α) = ±f
        let ord_alpha = Ratio::new(class.e as i64 * ord_f, p as i64);
        Ok(Arc::new(ASAlgebra { data: d.clone(), class, p, ord_alpha }))
    }

    pub fn data(&self) -> &ASData {
        &self.data
    }

    pub fn classification(&self) -> &ASClassification {
        &self.class
    }

    pub fn field(&self) -> &FieldRef {
        self.data.field()
    }

    pub fn f(&self) -> &LaurentSeries {
        &self.data.f
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn ramification(&self) -> u32 {
        self.class.e
    }

    /// `[E:F]`.
    pub fn residue_degree(&self) -> u32 {
        self.p as u32 / self.class.e
    }

    pub fn residue_ext(&self) -> &ResidueFieldDesc {
        &self.class.residue_ext
    }

    pub fn ord_alpha(&self) -> Ratio<i64> {
        self.ord_alpha
    }

    pub fn alpha(self: &Arc<Self>) -> LElement {
        let mut coords = vec![LaurentSeries::zero(self.field()); self.p];
        coords[1] = LaurentSeries::one(self.field());
        LElement { alg: self.clone(), coords }
    }

    pub fn from_base(self: &Arc<Self>, c: LaurentSeries) -> LElement {
        let mut coords = vec![LaurentSeries::zero(self.field()); self.p];
        coords[0] = c;
        LElement { alg: self.clone(), coords }
    }

    pub fn one(self: &Arc<Self>) -> LElement {
        self.from_base(LaurentSeries::one(self.field()))
    }

    pub fn element(self: &Arc<Self>, coords: Vec<LaurentSeries>) -> Result<LElement> {
        if coords.len() != self.p {
            bail!(Contract, "an element of L needs {} coordinates, got {}", self.p, coords.len());
        }
        Ok(LElement { alg: self.clone(), coords })
    }

    /// `Σ c_j v^j`.
    pub fn poly_in(self: &Arc<Self>, v: &LElement, coeffs: &[LaurentSeries]) -> LElement {
        let mut acc = self.from_base(LaurentSeries::zero(self.field()));
        for c in coeffs.iter().rev() {
            acc = acc.mul(v).add(&self.from_base(c.clone()));
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LElement {
    alg: Arc<ASAlgebra>,
    coords: Vec<LaurentSeries>,
}

impl LElement {
    pub fn algebra(&self) -> &Arc<ASAlgebra> {
        &self.alg
    }

    pub fn coords(&self) -> &[LaurentSeries] {
        &self.coords
    }

    fn field(&self) -> &FieldRef {
        self.alg.field()
    }

    fn check(&self, other: &Self) {
        debug_assert!(Arc::ptr_eq(&self.alg, &other.alg) || self.alg == other.alg, "elements of different algebras");
    }

    pub fn is_exact(&self) -> bool {
        self.coords.iter().all(LaurentSeries::is_exact)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coords.iter().all(LaurentSeries::is_exact_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a.add(b)).collect();
        LElement { alg: self.alg.clone(), coords }
    }

    pub fn neg(&self) -> Self {
        LElement { alg: self.alg.clone(), coords: self.coords.iter().map(LaurentSeries::neg).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.alg.p;
        let zero = LaurentSeries::zero(self.field());
        let mut prod = vec![zero; 2 * p - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_exact_zero() {
                    prod[i + j] = prod[i + j].add(&a.mul(b));
                }
            }
        }
        // α^k = α^{k−p+1} + f·α^{k−p}
        for k in (p..2 * p - 1).rev() {
            let c = core::mem::replace(&mut prod[k], LaurentSeries::zero(self.field()));
            if c.is_exact_zero() {
                continue;
            }
            prod[k - p + 1] = prod[k - p + 1].add(&c);
            prod[k - p] = prod[k - p].add(&c.mul(self.alg.f()));
        }
        prod.truncate(p);
        LElement { alg: self.alg.clone(), coords: prod }
    }

    /// Multiplication by an element of `K`.
    pub fn scale(&self, c: &LaurentSeries) -> Self {
        LElement { alg: self.alg.clone(), coords: self.coords.iter().map(|x| x.mul(c)).collect() }
    }

    /// Multiplication by a residue constant.
    pub fn scale_residue(&self, c: &RatFunc) -> Self {
        LElement { alg: self.alg.clone(), coords: self.coords.iter().map(|x| x.scale(c)).collect() }
    }

    /// Multiplication by `π^k`.
    pub fn shift(&self, k: i64) -> Self {
        LElement { alg: self.alg.clone(), coords: self.coords.iter().map(|x| x.shift(k)).collect() }
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = self.alg.one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `σ^i`, where `σ(α) = α + 1`.
    pub fn sigma(&self, i: u32) -> Self {
        let p = self.alg.p;
        let ff = self.field().residue.constants();
        let binom = binomials_mod(p, p as u64);
        let mut coords = vec![LaurentSeries::zero(self.field()); p];
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            // (α + i)^j = Σ_k C(j,k)·i^{j−k}·α^k
            for (k, slot) in coords.iter_mut().enumerate().take(j + 1) {
                let coef = binom[j][k] * pow_mod(i as u64 % p as u64, (j - k) as u64, p as u64) % p as u64;
                if coef != 0 {
                    *slot = slot.add(&c.scale(&RatFunc::from_int(ff, coef as i64)));
                }
            }
        }
        LElement { alg: self.alg.clone(), coords }
    }

    /// Matrix of `y ↦ x·y`; column `j` holds the coordinates of `x·α^j`.
    pub fn mult_matrix(&self) -> Vec<Vec<LaurentSeries>> {
        let p = self.alg.p;
        let alpha = self.alg.alpha();
        let mut cols = Vec::with_capacity(p);
        let mut y = self.clone();
        for j in 0..p {
            cols.push(y.coords.clone());
            if j + 1 < p {
                y = y.mul(&alpha);
            }
        }
        (0..p).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
    }

    /// Characteristic polynomial of multiplication by `x`, lowest degree
    /// first; monic of degree `p`.
    pub fn charpoly(&self) -> Vec<LaurentSeries> {
        let mut c = berkowitz(&self.mult_matrix(), self.field());
        c.reverse();
        c
    }

    pub fn norm(&self) -> LaurentSeries {
        determinant(&self.mult_matrix(), self.field())
    }

    pub fn trace(&self) -> LaurentSeries {
        self.charpoly()[self.alg.p - 1].neg()
    }

    /// `ord_L(x) = min_i (e·ord_K c_i + i·ord_L α)`. The minimum is attained
    /// once: for `e = p` the terms have distinct valuations mod p, and for
    /// `e = 1` the residues of `(α·π^m)^i` are independent over `F`.
    pub fn ord(&self) -> Result<Ratio<i64>> {
        if self.is_exact_zero() {
            bail!(Contract, "valuation of zero in L");
        }
        let e = self.alg.class.e as i64;
        let known = self
            .coords
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.ord().map(|o| Ratio::from_integer(e * o) + self.alg.ord_alpha * i as i64))
            .min();
        match (known, self.precision_bound()) {
            (Some(v), Some(b)) if v >= b => bail!(Precision, "valuation {v} not below the precision bound {b}"),
            (Some(v), _) => Ok(v),
            (None, b) => bail!(Precision, "element is indistinguishable from zero (bound {b:?})"),
        }
    }

    /// `ord_L` through the norm, `e·ord_K(N x)/p`.
    pub fn ord_via_norm(&self) -> Result<Ratio<i64>> {
        if self.is_exact_zero() {
            bail!(Contract, "valuation of zero in L");
        }
        let v = self.norm().valuation()?;
        Ok(Ratio::new(self.alg.class.e as i64 * v, self.alg.p as i64))
    }

    /// Valuation below which every coefficient of this element is known:
    /// an error term `O(π^N)` on coordinate `i` has valuation at least
    /// `e·N + i·ord_L α`. `None` for exact elements.
    pub fn precision_bound(&self) -> Option<Ratio<i64>> {
        let e = self.alg.class.e as i64;
        self.coords
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.precision().map(|n| Ratio::from_integer(e * n) + self.alg.ord_alpha * i as i64))
            .min()
    }

    /// Inverse by Cayley–Hamilton; the constant term of the characteristic
    /// polynomial is inverted up to absolute exponent `cap` unless it is a
    /// monomial.
    pub fn inv_to(&self, cap: Option<i64>) -> Result<Self> {
        let chi = self.charpoly();
        let p = self.alg.p;
        let c0 = &chi[0];
        let c0_inv = if c0.is_exact() && c0.terms().count() == 1 { c0.inv()? } else { c0.inv_to(cap)? };
        // x^{p−1} + χ_{p−1}x^{p−2} + … + χ_1
        let mut acc = self.alg.one();
        for c in chi[1..p].iter().rev() {
            acc = acc.mul(self).add(&self.alg.from_base(c.clone()));
        }
        Ok(acc.scale(&c0_inv).neg())
    }
}

fn binomials_mod(n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut b = vec![vec![0u64; n]; n];
    for j in 0..n {
        b[j][0] = 1;
        for k in 1..=j {
            b[j][k] = (b[j - 1][k - 1] + if k < j { b[j - 1][k] } else { 0 }) % p;
        }
    }
    b
}

fn pow_mod(b: u64, e: u64, m: u64) -> u64 {
    (0..e).fold(1 % m, |acc, _| acc * b % m)
}

/// Coefficients of `det(λI − A)`, highest degree first, by Berkowitz's
/// division-free algorithm.
pub fn berkowitz(a: &[Vec<LaurentSeries>], field: &FieldRef) -> Vec<LaurentSeries> {
    let n = a.len();
    let zero = LaurentSeries::zero(field);
    let one = LaurentSeries::one(field);
    let mut q = vec![one.clone()];
    for r in 0..n {
        // A_r = [[M, C], [R, a_rr]] with M the leading r×r block
        let mut t = vec![one.clone(), a[r][r].neg()];
        let mut w: Vec<LaurentSeries> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let rw = (0..r).fold(zero.clone(), |acc, i| acc.add(&a[r][i].mul(&w[i])));
            t.push(rw.neg());
            w = (0..r).map(|i| (0..r).fold(zero.clone(), |acc, k| acc.add(&a[i][k].mul(&w[k])))).collect();
        }
        let next: Vec<LaurentSeries> = (0..r + 2)
            .map(|i| (0..=i.min(r)).fold(zero.clone(), |acc, j| acc.add(&t[i - j].mul(&q[j]))))
            .collect();
        q = next;
    }
    q
}

pub fn determinant(a: &[Vec<LaurentSeries>], field: &FieldRef) -> LaurentSeries {
    let n = a.len();
    let c = berkowitz(a, field).pop().expect("nonempty polynomial");
    if n % 2 == 1 {
        c.neg()
    } else {
        c
    }
}

/// A monogenic generator `v` of `O_L` in the ferocious case, with
/// `φ ≡ T^p − ū (mod m_K)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorData {
    pub v: LElement,
    /// `v̄ ∈ E`, in the encoding of the residue extension.
    pub vbar: RatFunc,
    /// `ū = v̄^q ∈ F`.
    pub ubar: RatFunc,
    /// Minimal polynomial of `v`, lowest degree first.
    pub phi: Vec<LaurentSeries>,
    pub q: u32,
}

impl GeneratorData {
    pub fn algebra(&self) -> &Arc<ASAlgebra> {
        self.v.algebra()
    }

    pub fn phi_derivative_at_v(&self) -> LElement {
        let alg = self.algebra();
        let d: Vec<LaurentSeries> = self.phi.iter().enumerate().skip(1).map(|(i, c)| c.scale(&RatFunc::from_int(c.residue_field().constants(), i as i64))).collect();
        alg.poly_in(&self.v, &d)
    }

    pub fn phi_at_v(&self) -> LElement {
        self.algebra().poly_in(&self.v, &self.phi)
    }
}

impl fmt::Display for GeneratorData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v = {}; phi = ", self.v)?;
        fmt_poly(&self.phi, f)?;
        write!(f, "; ubar = {}; vbar = {}", self.ubar, self.vbar)
    }
}

pub fn fmt_poly(c: &[LaurentSeries], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (i, x) in c.iter().enumerate().rev() {
        if x.is_exact_zero() {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        match i {
            0 => write!(f, "({x})")?,
            1 => write!(f, "({x})*T")?,
            _ => write!(f, "({x})*T^{i}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

fn ferocious_algebra(d: &ASData) -> Result<(Arc<ASAlgebra>, i64)> {
    let alg = ASAlgebra::new(d)?;
    let ASCase::Ferocious { m } = alg.class.case else {
        bail!(Contract, "a monogenic generator needs a ferocious extension (got {})", alg.class.case.tag());
    };
    Ok((alg, m))
}

/// `v = α·π^m`.
pub fn canonical_generator(d: &ASData) -> Result<GeneratorData> {
    let (alg, m) = ferocious_algebra(d)?;
    let v = alg.alpha().shift(m);
    generator_from(v)
}

/// Checks the generator property of `v` and assembles its data.
pub fn generator_from(v: LElement) -> Result<GeneratorData> {
    let alg = v.algebra().clone();
    let p = alg.p;
    let residue = &alg.field().residue;
    let phi = v.charpoly();
    for (i, c) in phi.iter().enumerate().take(p).skip(1) {
        match c.ord_bound() {
            Some(o) if o < 1 => bail!(Invariant, "coefficient {i} of the minimal polynomial is not in m_K: {c}"),
            _ => {}
        }
    }
    if !phi[0].is_integral() {
        bail!(Invariant, "constant term of the minimal polynomial is not integral: {}", phi[0]);
    }
    let ubar = phi[0].coeff_or_zero(0)?.neg();
    if ubar.is_pth_power() {
        bail!(Invariant, "residue of v does not generate E (ubar = {ubar} is a p-th power)");
    }
    let e = alg.residue_ext();
    if !e.is_concrete() {
        bail!(Contract, "residue extension {e} is symbolic");
    }
    let vbar = residue.embed(&ubar, e)?.pth_root()?;
    Ok(GeneratorData { v, vbar, ubar, phi, q: alg.residue_degree() })
}

const GENERATOR_RETRIES: u32 = 8;

/// `v' = b_0 + b_1 v + Σ_{j≥2} b_j v^j` with `b_j ∈ O_K` seeded at random,
/// `b̄_1 ≠ 0` and `b_j ∈ m_K` for `j ≥ 2`.
pub fn random_generator(d: &ASData, seed: u64) -> Result<GeneratorData> {
    let canonical = canonical_generator(d)?;
    let alg = canonical.algebra().clone();
    let field = alg.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for _ in 0..GENERATOR_RETRIES {
        let mut b = Vec::with_capacity(alg.p);
        for j in 0..alg.p {
            let low = if j >= 2 { 1 } else { 0 };
            let mut s = random_integral(&mut rng, &field, low);
            if j == 1 && s.coeff(0).is_none() {
                s = s.add(&LaurentSeries::constant(&field, random_residue(&mut rng, &field.residue, true)));
            }
            b.push(s);
        }
        let v = alg.poly_in(&canonical.v, &b);
        match generator_from(v) {
            Ok(g) => return Ok(g),
            Err(err) => last = Some(err),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn random_residue(rng: &mut ChaCha8Rng, residue: &ResidueFieldDesc, nonzero: bool) -> RatFunc {
    let ff = residue.constants();
    let var = residue.base_var();
    loop {
        let mut poly = Poly::zero(ff);
        for d in 0..3u32 {
            let c1 = if ff.degree() == 2 { rng.gen_range(0..ff.characteristic()) } else { 0 };
            let c = ff.element(rng.gen_range(0..ff.characteristic()), c1);
            poly = poly.add(&Poly::var(ff, var).pow(d as u64).scale(c));
        }
        let x = RatFunc::from_poly(poly);
        if !nonzero || !x.is_zero() {
            return x;
        }
    }
}

fn random_integral(rng: &mut ChaCha8Rng, field: &FieldRef, low: i64) -> LaurentSeries {
    let mut terms = Vec::new();
    for k in low..low + 3 {
        if rng.gen_bool(0.5) {
            terms.push((k, random_residue(rng, &field.residue, false)));
        }
    }
    LaurentSeries::from_terms(field, terms, None)
}

/// Residue class of `x ∈ O_L` in `E`. With `v_0 = α·π^m` the powers
/// `v_0^i` form an `O_K`-basis of `O_L`, so `x = Σ z_i v_0^i` with
/// `z_i = c_i·π^{−mi}` (a diagonal system) and `x̄ = Σ z̄_i v̄_0^i`, where
/// `v̄_0^p` is the leading coefficient of `f`. `gen` only fixes the algebra.
pub fn residue_l(x: &LElement, gen: &GeneratorData) -> Result<RatFunc> {
    let alg = gen.algebra();
    if !Arc::ptr_eq(alg, x.algebra()) && **alg != **x.algebra() {
        bail!(Contract, "element and generator belong to different algebras");
    }
    let ASCase::Ferocious { m } = alg.class.case else {
        bail!(Contract, "residues in L are computed in the ferocious case only");
    };
    let e_field = alg.residue_ext().clone();
    if !e_field.is_concrete() {
        bail!(Contract, "residue extension {e_field} is symbolic");
    }
    if x.is_exact_zero() {
        return Ok(e_field.zero());
    }
    let ord = x.ord()?;
    if ord < Ratio::from_integer(0) {
        bail!(Contract, "residue of an element of valuation {ord} < 0");
    }
    let residue = &alg.field().residue;
    let (_, lead) = alg.f().leading().expect("ferocious f is nonzero");
    let v0bar = residue.embed(lead, &e_field)?.pth_root()?;
    let mut out = e_field.zero();
    for (i, c) in x.coords.iter().enumerate() {
        let zbar = c.coeff_or_zero(m * i as i64)?;
        if !zbar.is_zero() {
            out = out.add(&residue.embed(&zbar, &e_field)?.mul(&v0bar.pow(i as i64)?));
        }
    }
    Ok(out)
}

/// `y_0 = Σ z̄_i v_0^i` with `z̄_i` the residues of the integral-basis
/// coordinates of `y ∈ O_L`; `y ≡ y_0 (mod m_L)`.
pub fn truncate_mod_m(y: &LElement) -> Result<LElement> {
    let alg = y.algebra();
    let ASCase::Ferocious { m } = alg.class.case else {
        bail!(Contract, "integral-basis truncation needs the ferocious case");
    };
    let field = alg.field();
    let mut coords = Vec::with_capacity(alg.p);
    for (i, c) in y.coords.iter().enumerate() {
        let k = m * i as i64;
        coords.push(LaurentSeries::monomial(field, c.coeff_or_zero(k)?, k));
    }
    alg.element(coords)
}

/// Residue of a unit `y` of a totally ramified `L`: `N(y) ≡ ȳ^p`.
fn unit_residue_ramified(norm_lc: &RatFunc) -> Result<RatFunc> {
    norm_lc.pth_root()
}

/// Transports `h ∈ K'` across an Artin–Schreier root adjunction: the
/// expansion of `h` as a series in the new uniformizer `τ = π^a·β^b`.
/// Terms are peeled off by leading coefficient, read from norms. Exact input
/// is expanded through the constant term and at least its leading term.
pub fn tau_expansion(h: &LaurentSeries, bc: &BaseChangeDesc) -> Result<LaurentSeries> {
    let BaseChangeKind::AdjoinAs(data) = &bc.kind else {
        bail!(Contract, "tau_expansion needs an adjoin_as base change");
    };
    let alg = ASAlgebra::new(&ASData { f: data.g.clone(), reduced: true })?;
    let p = alg.p as i64;
    if alg.class.e as i64 != p {
        bail!(Invariant, "adjoined root does not ramify");
    }
    let top = match h.precision() {
        Some(n) => p * n,
        None => 1.max(p * h.ord().unwrap_or(0) + 1),
    };
    let mut extra = 4 * p;
    let mut last = None;
    for _ in 0..6 {
        match peel(&alg, data.a, data.b, h, top, extra, &bc.target) {
            Ok(s) => return Ok(s),
            Err(crate::Error::Precision(msg)) => last = Some(msg),
            Err(err) => return Err(err),
        }
        extra *= 2;
    }
    bail!(Precision, "peeling did not reach τ^{top}: {}", last.unwrap_or_default())
}

enum NormLead {
    /// `(ord_K N(x), leading coefficient of N(x))`.
    Term(i64, RatFunc),
    /// No basis term is known below this valuation.
    Unknown(Option<Ratio<i64>>),
}

/// Leading term of `N(x)` in a ramified extension `β^p − β = g`. The basis
/// terms `c_i β^i` have valuations `p·ord c_i − i·n`, pairwise distinct mod
/// `p`, so `N(x)` leads with `lc(c_i)^p · lc(g)^i` for the minimal term
/// (`N(β) = g`).
fn ramified_norm_lead(x: &LElement, lc_g: &RatFunc) -> Result<NormLead> {
    let p = x.alg.p as i64;
    let bound = x.precision_bound();
    let mut best: Option<(Ratio<i64>, usize, &RatFunc)> = None;
    for (i, c) in x.coords.iter().enumerate() {
        let Some((o, lc)) = c.leading() else { continue };
        let v = Ratio::from_integer(p * o) + x.alg.ord_alpha * i as i64;
        match &best {
            Some((w, ..)) if *w == v => bail!(Invariant, "two basis terms of valuation {v} in a ramified extension"),
            Some((w, ..)) if *w < v => {}
            _ => best = Some((v, i, lc)),
        }
    }
    match best {
        Some((v, i, lc)) if bound.map_or(true, |b| v < b) => {
            Ok(NormLead::Term(v.to_integer(), lc.pow(p)?.mul(&lc_g.pow(i as i64)?)))
        }
        _ => Ok(NormLead::Unknown(bound)),
    }
}

fn peel(
    alg: &Arc<ASAlgebra>,
    a: i64,
    b: i64,
    h: &LaurentSeries,
    top: i64,
    extra: i64,
    target: &FieldRef,
) -> Result<LaurentSeries> {
    let tau = alg.alpha().pow(b as u64).shift(a);
    let tau_norm = tau.norm();
    let (_, lc_tau) = tau_norm.leading().expect("τ is a unit multiple of a uniformizer");
    let lc_tau = lc_tau.clone();
    let ord_h = h.ord_bound().unwrap_or(0);
    // Products lose no precision in the basis β^i, so τ^{-k} is known to
    // valuation B(τ^{-1}) − k + 1 with B(τ^{-1}) ≈ p·cap − (p−1)·n; k runs up
    // to −p·ord h. Shortfalls surface as precision errors and are retried.
    let p = alg.p as i64;
    let n = -alg.f().valuation()?;
    let depth = (-p * ord_h).max(0);
    let cap = (top + depth + (p - 1) * n).div_euclid(p) + 2 + extra;
    let tau_inv = tau.inv_to(Some(cap))?;
    let lc_g = alg.f().leading().map(|(_, c)| c.clone()).expect("g is not integral");
    let mut powers: BTreeMap<i64, LElement> = BTreeMap::new();
    let mut rem = alg.from_base(h.clone());
    let mut out: Vec<(i64, RatFunc)> = Vec::new();
    while !rem.is_exact_zero() {
        let (k, lc) = match ramified_norm_lead(&rem, &lc_g)? {
            NormLead::Term(k, lc) => (k, lc),
            NormLead::Unknown(bound) => {
                if bound.is_some_and(|b| b >= Ratio::from_integer(top)) {
                    break;
                }
                bail!(Precision, "remainder known only below valuation {bound:?}");
            }
        };
        if k >= top {
            break;
        }
        if out.last().is_some_and(|(prev, _)| *prev >= k) {
            bail!(Invariant, "peeling τ^{k} did not raise the valuation of the remainder");
        }
        let ratio = lc.div(&lc_tau.pow(k)?)?;
        let c = unit_residue_ramified(&ratio)
            .map_err(|_| crate::Error::Invariant(alloc::format!("leading norm coefficient {ratio} is not a p-th power")))?;
        let tk = match powers.get(&k) {
            Some(t) => t.clone(),
            None => {
                let t = if k >= 0 { tau.pow(k as u64) } else { tau_inv.pow((-k) as u64) };
                powers.insert(k, t.clone());
                t
            }
        };
        rem = rem.sub(&tk.scale_residue(&c));
        out.push((k, c));
    }
    Ok(LaurentSeries::from_terms(target, out, Some(top)))
}

impl fmt::Display for LElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*alpha")?,
                _ => write!(f, "({c})*alpha^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent_series::LocalFieldDesc;
    use crate::residue_fields::FiniteField;
    use alloc::string::{String, ToString};

    fn k(p: u32) -> FieldRef {
        LocalFieldDesc::new(ResidueFieldDesc::rational(FiniteField::prime(p).unwrap()), "pi")
    }

    fn s(k: &FieldRef, terms: &[(i64, &str)]) -> LaurentSeries {
        let pairs: Vec<(i64, String)> = terms.iter().map(|(n, c)| (*n, c.to_string())).collect();
        LaurentSeries::from_pairs(k, &pairs, None).unwrap()
    }

    fn alg(k: &FieldRef, terms: &[(i64, &str)]) -> Arc<ASAlgebra> {
        ASAlgebra::new(&ASData::new(s(k, terms)).reduce().unwrap().0).unwrap()
    }

    #[test]
    fn defining_relation() {
        let k2 = k(2);
        let a = alg(&k2, &[(-2, "u")]);
        let x = a.alpha();
        let sq = x.mul(&x);
        assert_eq!(sq.coords(), &[s(&k2, &[(-2, "u")]), LaurentSeries::one(&k2)]);
        let y = x.add(&a.one());
        assert_eq!(y.mul(&y), sq.add(&a.one()));
        assert_eq!(x.mul(&a.one()), x);
    }

    #[test]
    fn galois_action() {
        let k3 = k(3);
        let a = alg(&k3, &[(-3, "u")]);
        let x = a.alpha();
        assert_eq!(x.sigma(1), x.add(&a.one()));
        let y = a.element(vec![s(&k3, &[(1, "u")]), s(&k3, &[(-1, "1")]), s(&k3, &[(0, "u + 1")])]).unwrap();
        assert_eq!(y.sigma(1).sigma(1).sigma(1), y);
        assert_eq!(y.sigma(1).sigma(1), y.sigma(2));
        let k2 = k(2);
        let a = alg(&k2, &[(-2, "u")]);
        let v = a.alpha().shift(1);
        assert_eq!(v.sigma(1).sub(&v), a.from_base(LaurentSeries::pi_pow(&k2, 1)));
    }

    #[test]
    fn valuations() {
        let k2 = k(2);
        let a = alg(&k2, &[(-2, "u")]);
        assert_eq!(a.from_base(LaurentSeries::pi_pow(&k2, 1)).ord().unwrap(), Ratio::from_integer(1));
        assert_eq!(a.alpha().ord().unwrap(), Ratio::from_integer(-1));
        let v = a.alpha().shift(1);
        assert_eq!(v.sub(&v.sigma(1)).ord().unwrap(), Ratio::from_integer(1));
    }

    #[test]
    fn minimal_polynomials() {
        let k2 = k(2);
        for (f, m, expect) in [
            (&[(-2, "u")][..], 1, [s(&k2, &[(0, "u")]), s(&k2, &[(1, "1")])]),
            (&[(-4, "u")][..], 2, [s(&k2, &[(0, "u")]), s(&k2, &[(2, "1")])]),
            (&[(-2, "u"), (-1, "1")][..], 1, [s(&k2, &[(0, "u"), (1, "1")]), s(&k2, &[(1, "1")])]),
        ] {
            let g = canonical_generator(&ASData::new(s(&k2, f)).reduce().unwrap().0).unwrap();
            assert_eq!(g.v, g.algebra().alpha().shift(m));
            // T² − π^m·T − (…), signs vanish in characteristic two
            assert_eq!(g.phi[..2], expect[..]);
            assert!(g.phi_at_v().is_exact_zero());
            assert_eq!(g.ubar, k2.residue.parse("u").unwrap());
        }
    }

    #[test]
    fn residues() {
        let k2 = k(2);
        let d = ASData::new(s(&k2, &[(-2, "u")])).reduce().unwrap().0;
        let g = canonical_generator(&d).unwrap();
        let e = g.algebra().residue_ext().clone();
        let t = e.parse("t").unwrap();
        assert_eq!(residue_l(&g.v, &g).unwrap(), t);
        let a = g.algebra();
        assert!(residue_l(&a.from_base(LaurentSeries::pi_pow(&k2, 1)), &g).unwrap().is_zero());
        let x2 = a.alpha().mul(&a.alpha());
        let bad = a.one().add(&x2.shift(1));
        assert!(matches!(residue_l(&bad, &g), Err(crate::Error::Contract(_))));
        // π²α² = π·v + u
        let good = a.one().add(&x2.shift(2));
        assert_eq!(residue_l(&good, &g).unwrap(), e.parse("t^2 + 1").unwrap());
    }

    #[test]
    fn random_generators_are_generators() {
        let k3 = k(3);
        let d = ASData::new(s(&k3, &[(-3, "u"), (-2, "1")])).reduce().unwrap().0;
        for seed in 0..4 {
            let g = random_generator(&d, seed).unwrap();
            assert!(g.phi_at_v().is_exact_zero());
            assert_eq!(residue_l(&g.v, &g).unwrap(), g.vbar);
            let e = g.algebra().residue_ext();
            assert_eq!(g.vbar.pow(3).unwrap(), k3.residue.embed(&g.ubar, e).unwrap());
        }
        assert_eq!(random_generator(&d, 7).unwrap(), random_generator(&d, 7).unwrap());
    }

    #[test]
    fn tau_expansion_of_a_uniformizer() {
        let k2 = k(2);
        let g = s(&k2, &[(-3, "1")]);
        let bc = BaseChangeDesc::adjoin_as(&k2, &g).unwrap();
        // π = τ^2 · unit, so the expansion starts at τ^2 and is known to τ^1 only
        let x = tau_expansion(&LaurentSeries::pi_pow(&k2, -1), &bc).unwrap();
        assert_eq!(x.ord(), Some(-2));
        assert_eq!(x.precision(), Some(1));
    }
}
