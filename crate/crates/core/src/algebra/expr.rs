//! Entropic coefficients over a tripartite pure state.
//!
//! Every coefficient is stored over the four generators `1, H(A), H(B), H(E)`.
//! Derived quantities (joint entropies, mutual informations, coherent
//! information) are folded into those generators when they are built, using
//! the purity relations `H(AB) = H(E)`, `H(AE) = H(B)`, `H(BE) = H(A)` and
//! `H(ABE) = 0`. Two expressions are equal exactly when their coefficient
//! arrays are equal.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

pub type Rational = Ratio<i64>;

/// The canonical generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Const,
    HA,
    HB,
    HE,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::Const, Generator::HA, Generator::HB, Generator::HE];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Key used in serialized coefficient maps.
    pub fn key(self) -> &'static str {
        match self {
            Generator::Const => "CONST",
            Generator::HA => "H_A",
            Generator::HB => "H_B",
            Generator::HE => "H_E",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Generator::ALL.into_iter().find(|g| g.key() == key)
    }
}

/// Subset of the parties `A`, `B`, `E` as a bit mask (`A = 1`, `B = 2`, `E = 4`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Parties(u8);

impl Parties {
    pub const A: Parties = Parties(1);
    pub const B: Parties = Parties(2);
    pub const E: Parties = Parties(4);
    pub const AB: Parties = Parties(3);
    pub const AE: Parties = Parties(5);
    pub const BE: Parties = Parties(6);
    pub const ABE: Parties = Parties(7);
    pub const NONE: Parties = Parties(0);

    pub fn from_bits(bits: u8) -> Option<Self> {
        (bits <= 7).then_some(Parties(bits))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn contains(self, other: Parties) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self) -> Parties {
        Parties(!self.0 & 7)
    }

    /// Parses a label such as `"AB"` or `"EA"`. Letters may come in any order
    /// but may not repeat.
    pub fn from_label(label: &str) -> Option<Self> {
        let mut bits = 0u8;
        for ch in label.chars() {
            let bit = match ch {
                'A' => 1,
                'B' => 2,
                'E' => 4,
                _ => return None,
            };
            if bits & bit != 0 {
                return None;
            }
            bits |= bit;
        }
        (bits != 0).then_some(Parties(bits))
    }

    pub fn label(self) -> String {
        let mut s = String::new();
        for (bit, ch) in [(1u8, 'A'), (2, 'B'), (4, 'E')] {
            if self.0 & bit != 0 {
                s.push(ch);
            }
        }
        s
    }
}

/// A symbol that may appear in a raw (not yet canonical) expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RawSymbol {
    One,
    Entropy(Parties),
    MutualAB,
    MutualAE,
    CoherentAB,
}

impl fmt::Display for RawSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RawSymbol::One => f.write_str("1"),
            RawSymbol::Entropy(p) => write!(f, "H({})", p.label()),
            RawSymbol::MutualAB => f.write_str("I(A:B)"),
            RawSymbol::MutualAE => f.write_str("I(A:E)"),
            RawSymbol::CoherentAB => f.write_str("Ic(A>B)"),
        }
    }
}

/// A finite rational combination of raw symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawExpr {
    pub terms: Vec<(Rational, RawSymbol)>,
}

impl RawExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(mut self, coeff: Rational, symbol: RawSymbol) -> Self {
        self.terms.push((coeff, symbol));
        self
    }

    /// Re-expresses a canonical expression over the raw generator symbols.
    pub fn from_canonical(expr: &EntropicExpr) -> Self {
        let mut raw = RawExpr::new();
        for g in Generator::ALL {
            let c = expr.coeff(g);
            if c.is_zero() {
                continue;
            }
            let sym = match g {
                Generator::Const => RawSymbol::One,
                Generator::HA => RawSymbol::Entropy(Parties::A),
                Generator::HB => RawSymbol::Entropy(Parties::B),
                Generator::HE => RawSymbol::Entropy(Parties::E),
            };
            raw.terms.push((c, sym));
        }
        raw
    }
}

impl Add for RawExpr {
    type Output = RawExpr;
    fn add(mut self, rhs: RawExpr) -> RawExpr {
        self.terms.extend(rhs.terms);
        self
    }
}

/// Canonical form of a single raw symbol.
pub fn canonical_symbol(symbol: RawSymbol) -> EntropicExpr {
    match symbol {
        RawSymbol::One => EntropicExpr::one(),
        RawSymbol::Entropy(p) => entropy_of(p),
        RawSymbol::MutualAB => EntropicExpr::mutual_ab(),
        RawSymbol::MutualAE => EntropicExpr::mutual_ae(),
        RawSymbol::CoherentAB => EntropicExpr::coherent_ab(),
    }
}

fn entropy_of(p: Parties) -> EntropicExpr {
    // A subset and its complement have equal entropy on a pure state.
    let reduced = if p.bits().count_ones() >= 2 { p.complement() } else { p };
    match reduced {
        Parties::A => EntropicExpr::generator(Generator::HA),
        Parties::B => EntropicExpr::generator(Generator::HB),
        Parties::E => EntropicExpr::generator(Generator::HE),
        _ => EntropicExpr::zero(),
    }
}

/// Folds a raw expression into the canonical generators.
pub fn canonicalize(raw: &RawExpr) -> EntropicExpr {
    raw.terms
        .iter()
        .fold(EntropicExpr::zero(), |acc, (c, s)| acc + canonical_symbol(*s).scale(*c))
}

/// Exact linear combination of `1, H(A), H(B), H(E)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct EntropicExpr {
    coeffs: [Rational; 4],
}

impl EntropicExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_coeffs(coeffs: [Rational; 4]) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        let mut e = Self::zero();
        e.coeffs[0] = c;
        e
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::constant(Rational::new(num, den))
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn generator(g: Generator) -> Self {
        let mut e = Self::zero();
        e.coeffs[g.index()] = Rational::one();
        e
    }

    pub fn h_a() -> Self {
        Self::generator(Generator::HA)
    }

    pub fn h_b() -> Self {
        Self::generator(Generator::HB)
    }

    pub fn h_e() -> Self {
        Self::generator(Generator::HE)
    }

    /// `I(A;B) = H(A) + H(B) - H(AB) = H(A) + H(B) - H(E)`.
    pub fn mutual_ab() -> Self {
        Self::h_a() + Self::h_b() - Self::h_e()
    }

    /// `I(A;E) = H(A) + H(E) - H(B)`.
    pub fn mutual_ae() -> Self {
        Self::h_a() + Self::h_e() - Self::h_b()
    }

    /// `I(B;E) = H(B) + H(E) - H(A)`. Not part of the text grammar, but one of
    /// the three extreme rays of the pure-state entropy cone.
    pub fn mutual_be() -> Self {
        Self::h_b() + Self::h_e() - Self::h_a()
    }

    /// `Ic(A>B) = H(B) - H(AB) = H(B) - H(E)`.
    pub fn coherent_ab() -> Self {
        Self::h_b() - Self::h_e()
    }

    pub fn coeff(&self, g: Generator) -> Rational {
        self.coeffs[g.index()]
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then_some(self.coeffs[0])
    }

    /// A nonnegative integer constant, as required for whole noisy copies.
    pub fn as_count(&self) -> Option<u64> {
        let c = self.as_constant()?;
        (c.is_integer() && !c.is_negative()).then(|| c.to_integer() as u64)
    }

    pub fn scale(&self, k: Rational) -> Self {
        let mut out = *self;
        for c in &mut out.coeffs {
            *c *= k;
        }
        out
    }

    /// Product of two expressions. At most one factor may depend on the
    /// state; anything else would leave the linear span.
    pub fn try_mul(&self, other: &EntropicExpr) -> Result<Self, AlgebraError> {
        match (self.as_constant(), other.as_constant()) {
            (Some(a), _) => Ok(other.scale(a)),
            (_, Some(b)) => Ok(self.scale(b)),
            _ => Err(AlgebraError::NonlinearProduct {
                left: alloc::format!("{self}"),
                right: alloc::format!("{other}"),
            }),
        }
    }

    /// Coordinates over the extreme rays `I(A;B)`, `I(A;E)`, `I(B;E)` of the
    /// pure tripartite entropy cone, plus the constant term.
    fn cone_coordinates(&self) -> [Rational; 4] {
        let two = Rational::from_integer(2);
        let (a, b, e) = (self.coeffs[1], self.coeffs[2], self.coeffs[3]);
        [self.coeffs[0], (a + b) / two, (a + e) / two, (b + e) / two]
    }

    /// True when the expression is nonnegative on every tripartite pure state.
    ///
    /// The achievable `(H(A), H(B), H(E))` triples span exactly the cone cut
    /// out by the three Araki-Lieb triangle inequalities, whose generators are
    /// the three mutual informations. A functional is nonnegative on every
    /// state iff its constant and its cone coordinates are all nonnegative.
    pub fn is_nonneg(&self) -> bool {
        self.cone_coordinates().iter().all(|c| !c.is_negative())
    }

    pub fn is_nonpos(&self) -> bool {
        (-*self).is_nonneg()
    }

    /// Nonpositive on every state and not identically zero.
    pub fn is_definitely_negative(&self) -> bool {
        self.is_nonpos() && !self.is_zero()
    }

    /// Evaluates the expression at concrete entropies (in bits).
    pub fn evaluate_at(&self, h_a: f64, h_b: f64, h_e: f64) -> f64 {
        let f = |r: Rational| r.to_f64().unwrap_or(f64::NAN);
        f(self.coeffs[0]) + f(self.coeffs[1]) * h_a + f(self.coeffs[2]) * h_b + f(self.coeffs[3]) * h_e
    }
}

impl Add for EntropicExpr {
    type Output = EntropicExpr;
    fn add(mut self, rhs: EntropicExpr) -> EntropicExpr {
        self += rhs;
        self
    }
}

impl AddAssign for EntropicExpr {
    fn add_assign(&mut self, rhs: EntropicExpr) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub for EntropicExpr {
    type Output = EntropicExpr;
    fn sub(mut self, rhs: EntropicExpr) -> EntropicExpr {
        self -= rhs;
        self
    }
}

impl SubAssign for EntropicExpr {
    fn sub_assign(&mut self, rhs: EntropicExpr) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Neg for EntropicExpr {
    type Output = EntropicExpr;
    fn neg(self) -> EntropicExpr {
        self.scale(-Rational::one())
    }
}

impl Mul<Rational> for EntropicExpr {
    type Output = EntropicExpr;
    fn mul(self, k: Rational) -> EntropicExpr {
        self.scale(k)
    }
}

impl From<Rational> for EntropicExpr {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

type Named = (&'static str, fn() -> EntropicExpr);

// Named symbols tried, in order, when printing a coefficient as `r*SYMBOL`.
const NAMED: [Named; 6] = [
    ("H(A)", EntropicExpr::h_a),
    ("H(B)", EntropicExpr::h_b),
    ("H(E)", EntropicExpr::h_e),
    ("I(A:B)", EntropicExpr::mutual_ab),
    ("I(A:E)", EntropicExpr::mutual_ae),
    ("Ic(A>B)", EntropicExpr::coherent_ab),
];

/// If `expr = r * named` for one of the named symbols, returns `(r, name)`.
fn as_named_multiple(expr: &EntropicExpr) -> Option<(Rational, &'static str)> {
    if !expr.coeff(Generator::Const).is_zero() {
        return None;
    }
    NAMED.iter().find_map(|(name, make)| {
        let base = make();
        let pivot = Generator::ALL[1..].iter().find(|g| !base.coeff(**g).is_zero())?;
        let r = expr.coeff(*pivot) / base.coeff(*pivot);
        (base.scale(r) == *expr).then_some((r, *name))
    })
}

fn write_scaled(f: &mut fmt::Formatter<'_>, r: Rational, name: &str) -> fmt::Result {
    if r.is_one() {
        f.write_str(name)
    } else if r == -Rational::one() {
        write!(f, "-{name}")
    } else {
        write!(f, "{r}*{name}")
    }
}

impl fmt::Display for EntropicExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.as_constant() {
            return write!(f, "{c}");
        }
        if let Some((r, name)) = as_named_multiple(self) {
            return write_scaled(f, r, name);
        }
        f.write_str("(")?;
        let mut first = true;
        for (g, name) in [
            (Generator::Const, ""),
            (Generator::HA, "H(A)"),
            (Generator::HB, "H(B)"),
            (Generator::HE, "H(E)"),
        ] {
            let c = self.coeff(g);
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            if g == Generator::Const {
                write!(f, "{mag}")?;
            } else {
                write_scaled(f, mag, name)?;
            }
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn half() -> Rational {
        Rational::new(1, 2)
    }

    #[test]
    fn half_mutual_informations_sum_to_h_a() {
        let raw = RawExpr::new()
            .term(half(), RawSymbol::MutualAB)
            .term(half(), RawSymbol::MutualAE);
        assert_eq!(canonicalize(&raw), EntropicExpr::h_a());
    }

    #[test]
    fn half_mutual_difference_is_coherent_information() {
        let raw = RawExpr::new()
            .term(half(), RawSymbol::MutualAB)
            .term(-half(), RawSymbol::MutualAE);
        assert_eq!(canonicalize(&raw), EntropicExpr::coherent_ab());
    }

    #[test]
    fn global_entropy_vanishes() {
        let raw = RawExpr::new().term(Rational::from_integer(3), RawSymbol::Entropy(Parties::ABE));
        assert!(canonicalize(&raw).is_zero());
    }

    #[test]
    fn coherent_plus_half_mutual_ae_is_half_mutual_ab() {
        // Ic + I(A;E)/2 = (HB - HE) + (HA + HE - HB)/2 = HA/2 + HB/2 - HE/2.
        let expected = EntropicExpr::from_coeffs([
            Rational::zero(),
            half(),
            half(),
            -half(),
        ]);
        let lhs = canonicalize(
            &RawExpr::new()
                .term(Rational::one(), RawSymbol::CoherentAB)
                .term(half(), RawSymbol::MutualAE),
        );
        let rhs = canonicalize(&RawExpr::new().term(half(), RawSymbol::MutualAB));
        assert_eq!(lhs, expected);
        assert_eq!(rhs, expected);
    }

    #[test]
    fn joint_entropies_fold_to_complements() {
        let e = |p| canonical_symbol(RawSymbol::Entropy(p));
        assert_eq!(e(Parties::AB), EntropicExpr::h_e());
        assert_eq!(e(Parties::AE), EntropicExpr::h_b());
        assert_eq!(e(Parties::BE), EntropicExpr::h_a());
    }

    #[test]
    fn nonlinear_product_rejected() {
        let err = EntropicExpr::h_a().try_mul(&EntropicExpr::h_b()).unwrap_err();
        assert!(matches!(err, AlgebraError::NonlinearProduct { .. }));
        let ok = EntropicExpr::h_a().try_mul(&EntropicExpr::ratio(1, 2)).unwrap();
        assert_eq!(ok, EntropicExpr::h_a().scale(half()));
    }

    #[test]
    fn sign_certification_follows_the_entropy_cone() {
        assert!(EntropicExpr::mutual_ab().is_nonneg());
        assert!(EntropicExpr::mutual_ae().is_nonneg());
        assert!(EntropicExpr::h_a().is_nonneg());
        // Coherent information can take either sign.
        assert!(!EntropicExpr::coherent_ab().is_nonneg());
        assert!(!EntropicExpr::coherent_ab().is_nonpos());
        assert!(EntropicExpr::int(-1).is_definitely_negative());
        assert!((-EntropicExpr::mutual_ae()).is_definitely_negative());
        assert!(!EntropicExpr::zero().is_definitely_negative());
    }

    #[test]
    fn display_prefers_named_symbols() {
        assert_eq!(EntropicExpr::mutual_ae().scale(half()).to_string(), "1/2*I(A:E)");
        assert_eq!(EntropicExpr::coherent_ab().to_string(), "Ic(A>B)");
        assert_eq!((-EntropicExpr::mutual_ab()).to_string(), "-I(A:B)");
        assert_eq!(EntropicExpr::int(2).to_string(), "2");
        let odd = EntropicExpr::h_a() + EntropicExpr::h_b().scale(Rational::from_integer(2))
            - EntropicExpr::one();
        assert_eq!(odd.to_string(), "(-1 + H(A) + 2*H(B))");
    }

    #[test]
    fn parties_labels() {
        assert_eq!(Parties::from_label("EA"), Some(Parties::AE));
        assert_eq!(Parties::from_label("AA"), None);
        assert_eq!(Parties::from_label("AX"), None);
        assert_eq!(Parties::ABE.label(), "ABE");
        assert_eq!(Parties::AB.complement(), Parties::E);
    }
}
