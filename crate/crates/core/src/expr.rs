//! Textual distribution expressions.
//!
//! ```text
//! poisson(λ)        binomial(n, p)     negbin(k, p)     gamma(α, β)
//! pbin(p1, …, pn)   gconv(α1:β1, …)    nbconv(k1:p1, …)
//! mix(FAMILY; t1:w1, …)   FAMILY = poisson | binomial(n) | negbin(k) | gamma(α)
//! ```
//!
//! Whitespace between tokens is ignored. [`DistSpec`]'s `Display` prints the
//! canonical form, which re-parses to an equal value.

use std::fmt;
use std::str::FromStr;

use crate::dist::{
    binomial, family_member, gamma, gamma_convolution_pdf, mixture_pmf_pdf, negbin, negbin_convolution, poisson,
    poisson_binomial_pmf, Distribution, Family, FiniteMixingMeasure, GammaConvolutionSpec, NegBinConvolutionSpec,
    PoissonBinomialSpec,
};
use crate::error::{Error, Result};

/// A parsed distribution expression. Parameters are validated on parse.
#[derive(Debug, Clone, PartialEq)]
pub enum DistSpec {
    Poisson { lambda: f64 },
    Binomial { n: u64, p: f64 },
    NegBin { k: f64, p: f64 },
    Gamma { alpha: f64, beta: f64 },
    PoissonBinomial(PoissonBinomialSpec),
    Mixture { family: Family, measure: FiniteMixingMeasure },
    GammaConvolution(GammaConvolutionSpec),
    NegBinConvolution(NegBinConvolutionSpec),
}

impl DistSpec {
    pub fn parse(input: &str) -> Result<Self> {
        let mut p = Parser { src: input, pos: 0 };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos < input.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(spec)
    }

    /// `(family, free parameter)` for single family members.
    pub fn as_member(&self) -> Option<(Family, f64)> {
        match *self {
            DistSpec::Poisson { lambda } => Some((Family::Poisson, lambda)),
            DistSpec::Binomial { n, p } => Some((Family::Binomial { n }, p)),
            DistSpec::NegBin { k, p } => Some((Family::NegBin { k }, p)),
            DistSpec::Gamma { alpha, beta } => Some((Family::Gamma { alpha }, beta)),
            _ => None,
        }
    }

    pub fn is_discrete(&self) -> bool {
        match self {
            DistSpec::Gamma { .. } | DistSpec::GammaConvolution(_) => false,
            DistSpec::Mixture { family, .. } => family.is_discrete(),
            _ => true,
        }
    }

    /// Short name of the expression kind, as in the grammar.
    pub fn kind(&self) -> &'static str {
        match self {
            DistSpec::Poisson { .. } => "poisson",
            DistSpec::Binomial { .. } => "binomial",
            DistSpec::NegBin { .. } => "negbin",
            DistSpec::Gamma { .. } => "gamma",
            DistSpec::PoissonBinomial(_) => "pbin",
            DistSpec::Mixture { .. } => "mix",
            DistSpec::GammaConvolution(_) => "gconv",
            DistSpec::NegBinConvolution(_) => "nbconv",
        }
    }

    /// The distribution itself; `tail_tol` bounds the mass dropped from
    /// unbounded discrete tables.
    pub fn build(&self, tail_tol: f64) -> Result<Distribution> {
        Ok(match self {
            DistSpec::Poisson { lambda } => poisson(*lambda, tail_tol)?.into(),
            DistSpec::Binomial { n, p } => binomial(*n, *p)?.into(),
            DistSpec::NegBin { k, p } => negbin(*k, *p, tail_tol)?.into(),
            DistSpec::Gamma { alpha, beta } => gamma(*alpha, *beta)?.into(),
            DistSpec::PoissonBinomial(s) => poisson_binomial_pmf(s).into(),
            DistSpec::Mixture { family, measure } if measure.atoms().len() == 1 => {
                family_member(family, measure.atoms()[0].0, tail_tol)?
            }
            DistSpec::Mixture { family, measure } => mixture_pmf_pdf(family, measure, tail_tol)?,
            DistSpec::GammaConvolution(s) => gamma_convolution_pdf(s)?.into(),
            DistSpec::NegBinConvolution(s) => negbin_convolution(s, tail_tol)?.into(),
        })
    }
}

impl FromStr for DistSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DistSpec::parse(s)
    }
}

fn write_list<T>(f: &mut fmt::Formatter<'_>, items: impl Iterator<Item = T>, each: impl Fn(&mut fmt::Formatter<'_>, T) -> fmt::Result) -> fmt::Result {
    for (i, item) in items.enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        each(f, item)?;
    }
    Ok(())
}

fn write_family(f: &mut fmt::Formatter<'_>, family: &Family) -> fmt::Result {
    match family {
        Family::Poisson => write!(f, "poisson"),
        Family::Binomial { n } => write!(f, "binomial({n})"),
        Family::NegBin { k } => write!(f, "negbin({k})"),
        Family::Gamma { alpha } => write!(f, "gamma({alpha})"),
    }
}

// `{}` on f64 prints the shortest string that parses back to the same value.
impl fmt::Display for DistSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pair = |f: &mut fmt::Formatter<'_>, (a, b): (f64, f64)| write!(f, "{a}:{b}");
        match self {
            DistSpec::Poisson { lambda } => write!(f, "poisson({lambda})"),
            DistSpec::Binomial { n, p } => write!(f, "binomial({n}, {p})"),
            DistSpec::NegBin { k, p } => write!(f, "negbin({k}, {p})"),
            DistSpec::Gamma { alpha, beta } => write!(f, "gamma({alpha}, {beta})"),
            DistSpec::PoissonBinomial(s) => {
                f.write_str("pbin(")?;
                write_list(f, s.probs().iter(), |f, p| write!(f, "{p}"))?;
                f.write_str(")")
            }
            DistSpec::Mixture { family, measure } => {
                f.write_str("mix(")?;
                write_family(f, family)?;
                f.write_str("; ")?;
                write_list(f, measure.atoms().iter().copied(), pair)?;
                f.write_str(")")
            }
            DistSpec::GammaConvolution(s) => {
                f.write_str("gconv(")?;
                write_list(f, s.components(), pair)?;
                f.write_str(")")
            }
            DistSpec::NegBinConvolution(s) => {
                f.write_str("nbconv(")?;
                write_list(f, s.components(), pair)?;
                f.write_str(")")
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        self.error_at(self.pos, message)
    }

    fn error_at(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(got) => Err(self.error(format!("expected `{c}`, found `{got}`"))),
            None => Err(self.error(format!("expected `{c}`, found end of input"))),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        let len = self.rest().find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("expected a distribution name"));
        }
        self.pos += len;
        let src: &'a str = self.src;
        Ok((start, &src[start..self.pos]))
    }

    /// A finite decimal literal with optional sign and exponent.
    fn number(&mut self) -> Result<(usize, f64)> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.rest().as_bytes();
        let mut i = 0;
        let digits = |i: &mut usize| {
            let s = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            *i - s
        };
        if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            i += 1;
        }
        let mut mantissa = digits(&mut i);
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            mantissa += digits(&mut i);
        }
        if mantissa == 0 {
            return Err(self.error("expected a number"));
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if digits(&mut j) == 0 {
                return Err(self.error_at(start + i, "malformed exponent"));
            }
            i = j;
        }
        let text = &self.rest()[..i];
        let value: f64 = text.parse().map_err(|_| self.error(format!("malformed number `{text}`")))?;
        if !value.is_finite() {
            return Err(self.error(format!("number `{text}` overflows")));
        }
        self.pos += i;
        Ok((start, value))
    }

    fn count(&mut self, what: &str) -> Result<u64> {
        let (at, v) = self.number()?;
        if v >= 1.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
            Ok(v as u64)
        } else {
            Err(self.error_at(at, format!("{what} must be a positive integer, got {v}")))
        }
    }

    /// Runs a constructor, reporting its error at `at`.
    fn checked<T>(&self, at: usize, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            Error::Domain(m) => self.error_at(at, m),
            other => other,
        })
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        let mut out = vec![item(self)?];
        while self.eat(',') {
            out.push(item(self)?);
        }
        Ok(out)
    }

    fn pair(&mut self) -> Result<(f64, f64)> {
        let (_, a) = self.number()?;
        self.expect(':')?;
        let (_, b) = self.number()?;
        Ok((a, b))
    }

    fn family(&mut self) -> Result<Family> {
        let (at, name) = self.ident()?;
        let family = match name {
            "poisson" => Family::Poisson,
            "binomial" => {
                self.expect('(')?;
                let n = self.count("binomial size")?;
                self.expect(')')?;
                Family::Binomial { n }
            }
            "negbin" => {
                self.expect('(')?;
                let (_, k) = self.number()?;
                self.expect(')')?;
                Family::NegBin { k }
            }
            "gamma" => {
                self.expect('(')?;
                let (_, alpha) = self.number()?;
                self.expect(')')?;
                Family::Gamma { alpha }
            }
            other => {
                return Err(self.error_at(
                    at,
                    format!("unknown mixture family `{other}` (expected poisson, binomial(n), negbin(k) or gamma(alpha))"),
                ))
            }
        };
        self.checked(at, family.validate().map(|_| family))
    }

    fn spec(&mut self) -> Result<DistSpec> {
        let (at, name) = self.ident()?;
        self.expect('(')?;
        let spec = match name {
            "poisson" => {
                let (_, lambda) = self.number()?;
                self.checked(at, Family::Poisson.validate_param(lambda))?;
                DistSpec::Poisson { lambda }
            }
            "binomial" => {
                let n = self.count("binomial size")?;
                self.expect(',')?;
                let (_, p) = self.number()?;
                self.checked(at, Family::Binomial { n }.validate_param(p))?;
                DistSpec::Binomial { n, p }
            }
            "negbin" => {
                let (_, k) = self.number()?;
                self.expect(',')?;
                let (_, p) = self.number()?;
                let family = Family::NegBin { k };
                self.checked(at, family.validate().and_then(|_| family.validate_param(p)))?;
                DistSpec::NegBin { k, p }
            }
            "gamma" => {
                let (_, alpha) = self.number()?;
                self.expect(',')?;
                let (_, beta) = self.number()?;
                let family = Family::Gamma { alpha };
                self.checked(at, family.validate().and_then(|_| family.validate_param(beta)))?;
                DistSpec::Gamma { alpha, beta }
            }
            "pbin" => {
                let probs = self.list(|p| p.number().map(|n| n.1))?;
                DistSpec::PoissonBinomial(self.checked(at, PoissonBinomialSpec::new(probs))?)
            }
            "mix" => {
                let family = self.family()?;
                self.expect(';')?;
                let atoms = self.list(Self::pair)?;
                let measure = self.checked(at, FiniteMixingMeasure::new(atoms))?;
                self.checked(at, measure.validate_for(&family))?;
                DistSpec::Mixture { family, measure }
            }
            "gconv" => {
                let (shapes, scales) = self.list(Self::pair)?.into_iter().unzip();
                DistSpec::GammaConvolution(self.checked(at, GammaConvolutionSpec::new(shapes, scales))?)
            }
            "nbconv" => {
                let (sizes, probs) = self.list(Self::pair)?.into_iter().unzip();
                DistSpec::NegBinConvolution(self.checked(at, NegBinConvolutionSpec::new(sizes, probs))?)
            }
            other => {
                return Err(self.error_at(
                    at,
                    format!(
                        "unknown distribution `{other}` (expected poisson, binomial, negbin, gamma, pbin, mix, gconv or nbconv)"
                    ),
                ))
            }
        };
        self.expect(')')?;
        Ok(spec)
    }
}
