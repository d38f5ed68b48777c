//! Machine-readable certificates.
//!
//! Every result leaves the CLI as a [`Certificate`]: a kind-tagged payload
//! plus provenance. Integers and rationals are decimal strings so that JSON
//! round-trips losslessly. The human form is rendered from the certificate
//! itself, so `--json` output re-parsed and re-rendered matches the plain
//! output line for line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use preper_core::abc::{self, AbcTriple, BoundParams, ExplicitBound};
use preper_core::curves::{self, FamilyPoint, QuarticPoint, WeightedPoint};
use preper_core::dynamics::{self, EscapeReason, OrbitReport, OrbitStatus, PointPair, PowerMap};
use preper_core::exactnum::{factorize, Factorization};
use preper_core::fermat_catalan::{self, FCDecomposition, Nonexistence, SignatureSolution};
use preper_core::poly::{CoeffTree, Render};
use preper_core::search::{self, CycleCertificate, FixedPair, GraphPoint, PreperNode, SweepRow, SystemCheck, Type12Solution};
use preper_core::{Error, Integer, Rational, Result};
use serde::{Deserialize, Serialize};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn parse_integer(s: &str) -> Result<Integer> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    BigInt::from_str(t).map_err(|_| Error::InvalidInput(format!("not an integer: {s:?}")))
}

/// Parses `p`, `-p`, `p/q` or `-p/q` into lowest terms.
pub fn parse_rational(s: &str) -> Result<Rational> {
    match s.trim().split_once('/') {
        None => Ok(Rational::from_integer(parse_integer(s)?)),
        Some((p, q)) => {
            let q = parse_integer(q)?;
            if q.sign() == num_bigint::Sign::Minus || q.sign() == num_bigint::Sign::NoSign {
                return Err(Error::InvalidInput(format!("denominator must be positive: {s:?}")));
            }
            Ok(Rational::new(parse_integer(p)?, q))
        }
    }
}

fn s<T: ToString>(v: &T) -> String {
    v.to_string()
}

fn strs<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn mismatch(kind: &str) -> Error {
    Error::Internal(format!("{kind} certificate does not re-verify"))
}

/// Where a certificate came from; excludes the worker count so output is
/// independent of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub subcommand: String,
    pub parameters: BTreeMap<String, String>,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(flatten)]
    pub payload: Payload,
    pub provenance: Provenance,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificates always serialize")
    }

    pub fn from_json(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::InvalidInput(format!("bad certificate: {e}")))
    }

    pub fn human(&self) -> String {
        self.payload.human()
    }

    pub fn verify(&self) -> Result<()> {
        self.payload.verify()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "kebab-case")]
pub enum Payload {
    Orbit(OrbitCert),
    Cycle(CycleCert),
    FixedPair(FixedPairCert),
    Type12(Type12Cert),
    PreperNode(PreperNodeCert),
    SweepRow(SweepRowCert),
    Polynomial(PolynomialCert),
    Decomposition(DecompositionCert),
    Signature(SignatureCert),
    Nonexistence(NonexistenceCert),
    Bound(BoundCert),
    AbcTriple(AbcTripleCert),
    CurvePoint(CurvePointCert),
    Family(FamilyCert),
    SystemCheck(SystemCheckCert),
    PointPair(PointPairCert),
    Factorization(FactorizationCert),
}

impl Payload {
    pub fn human(&self) -> String {
        match self {
            Payload::Orbit(c) => c.human(),
            Payload::Cycle(c) => c.human(),
            Payload::FixedPair(c) => c.human(),
            Payload::Type12(c) => c.human(),
            Payload::PreperNode(c) => c.human(),
            Payload::SweepRow(c) => c.human(),
            Payload::Polynomial(c) => c.human(),
            Payload::Decomposition(c) => c.human(),
            Payload::Signature(c) => c.human(),
            Payload::Nonexistence(c) => c.human(),
            Payload::Bound(c) => c.human(),
            Payload::AbcTriple(c) => c.human(),
            Payload::CurvePoint(c) => c.human(),
            Payload::Family(c) => c.human(),
            Payload::SystemCheck(c) => c.human(),
            Payload::PointPair(c) => c.human(),
            Payload::Factorization(c) => c.human(),
        }
    }

    /// Re-checks the payload from scratch.
    pub fn verify(&self) -> Result<()> {
        match self {
            Payload::Orbit(c) => c.verify(),
            Payload::Cycle(c) => c.to_core().and_then(|x| x.verify()),
            Payload::FixedPair(c) => c.to_core().and_then(|x| x.verify()),
            Payload::Type12(c) => c.verify(),
            Payload::PreperNode(c) => c.verify(),
            Payload::SweepRow(c) => c.verify(),
            Payload::Polynomial(c) => c.verify(),
            Payload::Decomposition(c) => c.verify(),
            Payload::Signature(c) => c.verify(),
            Payload::Nonexistence(c) => c.verify(),
            Payload::Bound(c) => c.verify(),
            Payload::AbcTriple(c) => c.verify(),
            Payload::CurvePoint(c) => c.verify(),
            Payload::Family(c) => c.verify(),
            Payload::SystemCheck(c) => c.verify(),
            Payload::PointPair(c) => c.verify(),
            Payload::Factorization(c) => c.verify(),
        }
    }
}

// ---------------------------------------------------------------- orbit

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCert {
    pub d: u32,
    pub c: String,
    pub x: String,
    /// `preperiodic` or `escaped`.
    pub status: String,
    pub period: Option<usize>,
    pub tail: Option<usize>,
    pub escape: Option<String>,
    pub orbit: Vec<String>,
}

fn escape_name(r: EscapeReason) -> &'static str {
    match r {
        EscapeReason::Archimedean => "archimedean",
        EscapeReason::Denominator => "denominator",
        EscapeReason::IterationLimit => "iteration-limit",
    }
}

impl OrbitCert {
    pub fn from_core(map: &PowerMap, r: &OrbitReport) -> Self {
        let (status, period, tail, escape) = match r.status {
            OrbitStatus::Preperiodic { tail, period } => ("preperiodic", Some(period), Some(tail), None),
            OrbitStatus::Escaped(e) => ("escaped", None, None, Some(escape_name(e).to_string())),
        };
        OrbitCert {
            d: map.degree(),
            c: s(map.param()),
            x: s(&r.start),
            status: status.into(),
            period,
            tail,
            escape,
            orbit: strs(&r.orbit),
        }
    }

    fn verify(&self) -> Result<()> {
        let map = PowerMap::new(self.d, parse_rational(&self.c)?)?;
        let again = OrbitCert::from_core(&map, &dynamics::orbit_classify(&map, &parse_rational(&self.x)?));
        if &again != self {
            return Err(mismatch("orbit"));
        }
        Ok(())
    }

    fn human(&self) -> String {
        let head = format!("orbit d={} c={} x={}", self.d, self.c, self.x);
        let body = match (self.period, self.tail, &self.escape) {
            (Some(n), Some(m), _) => format!("preperiodic type {n}_{m} (exact period {n}, tail {m})"),
            (_, _, Some(e)) => format!("escapes ({e})"),
            _ => "unclassified".into(),
        };
        format!("{head}: {body}; orbit [{}]", self.orbit.join(", "))
    }
}

// ---------------------------------------------------------------- cycles

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCert {
    pub d: u32,
    pub z: String,
    pub xs: Vec<String>,
    pub c_num: String,
    pub c: String,
    pub period: usize,
    pub trivial: bool,
}

impl CycleCert {
    pub fn from_core(c: &CycleCertificate) -> Self {
        CycleCert {
            d: c.d,
            z: s(&c.z),
            xs: strs(&c.xs),
            c_num: s(&c.c_num),
            c: s(&c.c),
            period: c.period(),
            trivial: c.is_trivial(),
        }
    }

    pub fn to_core(&self) -> Result<CycleCertificate> {
        let core = CycleCertificate {
            d: self.d,
            z: parse_integer(&self.z)?,
            xs: self.xs.iter().map(|x| parse_integer(x)).collect::<Result<_>>()?,
            c_num: parse_integer(&self.c_num)?,
            c: parse_rational(&self.c)?,
        };
        if core.period() != self.period || core.is_trivial() != self.trivial {
            return Err(mismatch("cycle"));
        }
        Ok(core)
    }

    fn human(&self) -> String {
        let pts: Vec<String> = self.xs.iter().map(|x| frac(x, &self.z)).collect();
        format!(
            "cycle d={} period={} c={} Z={} X=({}) points {{{}}}{}",
            self.d,
            self.period,
            self.c,
            self.z,
            self.xs.join(", "),
            pts.join(", "),
            if self.trivial { " [trivial]" } else { "" }
        )
    }
}

fn frac(x: &str, z: &str) -> String {
    if z == "1" {
        x.to_string()
    } else {
        format!("{x}/{z}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPairCert {
    pub d: u32,
    pub x1: String,
    pub x2: String,
    pub z: String,
    pub c_num: String,
    pub c: String,
    pub trivial: bool,
}

impl FixedPairCert {
    pub fn from_core(p: &FixedPair) -> Self {
        FixedPairCert {
            d: p.d,
            x1: s(&p.x1),
            x2: s(&p.x2),
            z: s(&p.z),
            c_num: s(&p.c_num),
            c: s(&p.c),
            trivial: p.is_trivial(),
        }
    }

    pub fn to_core(&self) -> Result<FixedPair> {
        let core = FixedPair {
            d: self.d,
            x1: parse_integer(&self.x1)?,
            x2: parse_integer(&self.x2)?,
            z: parse_integer(&self.z)?,
            c_num: parse_integer(&self.c_num)?,
            c: parse_rational(&self.c)?,
        };
        if core.is_trivial() != self.trivial || core.c != Rational::new(core.c_num.clone(), num_traits::Pow::pow(&core.z, core.d)) {
            return Err(mismatch("fixed-pair"));
        }
        Ok(core)
    }

    fn human(&self) -> String {
        format!(
            "fixed-pair d={} c={} Z={} X=({}, {}) points {{{}, {}}}{}",
            self.d,
            self.c,
            self.z,
            self.x1,
            self.x2,
            frac(&self.x1, &self.z),
            frac(&self.x2, &self.z),
            if self.trivial { " [trivial]" } else { "" }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Type12Cert {
    pub d: u32,
    pub x0: String,
    pub r: String,
    pub z: String,
    pub degenerate: bool,
    pub fixed_mirror: bool,
}

impl Type12Cert {
    pub fn from_core(d: u32, t: &Type12Solution) -> Self {
        Type12Cert {
            d,
            x0: s(&t.x0),
            r: s(&t.r),
            z: s(&t.z),
            degenerate: t.is_degenerate(),
            fixed_mirror: t.is_fixed_mirror(),
        }
    }

    fn verify(&self) -> Result<()> {
        use num_integer::Integer as _;
        use num_traits::{One, Pow};
        let core = Type12Solution {
            x0: parse_integer(&self.x0)?,
            r: parse_integer(&self.r)?,
            z: parse_integer(&self.z)?,
        };
        let lhs = Pow::pow(&core.x0, self.d) - Pow::pow(&core.r, self.d);
        let rhs = BigInt::from(2) * &core.x0 * Pow::pow(&core.z, self.d - 1);
        let ok = lhs == rhs
            && core.x0.gcd(&core.z).is_one()
            && core.r.gcd(&core.z).is_one()
            && Type12Cert::from_core(self.d, &core) == *self;
        if !ok {
            return Err(mismatch("type12"));
        }
        Ok(())
    }

    fn human(&self) -> String {
        let flag = if self.degenerate {
            " [degenerate]"
        } else if self.fixed_mirror {
            " [R = -X0: r is fixed, not type 1_2]"
        } else {
            ""
        };
        format!("type12 d={} X0={} R={} Z={}{}", self.d, self.x0, self.r, self.z, flag)
    }
}

// ---------------------------------------------------------------- preperiodic graph

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreperNodeCert {
    pub d: u32,
    pub c: String,
    /// A rational, or `inf`.
    pub point: String,
    pub image: String,
    pub period: usize,
    pub tail: usize,
}

fn graph_point(p: &GraphPoint) -> String {
    match p {
        GraphPoint::Affine(r) => s(r),
        GraphPoint::Infinity => "inf".into(),
    }
}

impl PreperNodeCert {
    pub fn from_core(d: u32, c: &Rational, nodes: &[PreperNode], node: &PreperNode) -> Self {
        PreperNodeCert {
            d,
            c: s(c),
            point: graph_point(&node.point),
            image: graph_point(&nodes[node.target].point),
            period: node.period,
            tail: node.tail,
        }
    }

    fn verify(&self) -> Result<()> {
        let map = PowerMap::new(self.d, parse_rational(&self.c)?)?;
        if self.point == "inf" {
            return if self.image == "inf" && self.period == 1 && self.tail == 0 {
                Ok(())
            } else {
                Err(mismatch("preper-node"))
            };
        }
        let x = parse_rational(&self.point)?;
        let ok = s(&map.eval(&x)) == self.image
            && dynamics::preperiodic_type(&map, &x) == Some((self.period, self.tail));
        if !ok {
            return Err(mismatch("preper-node"));
        }
        Ok(())
    }

    fn human(&self) -> String {
        format!(
            "preper d={} c={} {} -> {} type {}_{}",
            self.d, self.c, self.point, self.image, self.period, self.tail
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRowCert {
    pub d: u32,
    pub c: String,
    pub max_period: usize,
    pub count_p1: usize,
    pub cycles: Vec<CycleCert>,
}

impl SweepRowCert {
    pub fn from_core(r: &SweepRow) -> Self {
        SweepRowCert {
            d: r.d,
            c: s(&r.c),
            max_period: r.max_period,
            count_p1: r.count_p1,
            cycles: r.cycles.iter().map(CycleCert::from_core).collect(),
        }
    }

    fn verify(&self) -> Result<()> {
        for c in &self.cycles {
            c.to_core()?.verify()?;
        }
        let again = SweepRowCert::from_core(&search::sweep_row(self.d, &parse_rational(&self.c)?)?);
        if &again != self {
            return Err(mismatch("sweep-row"));
        }
        Ok(())
    }

    fn human(&self) -> String {
        let cycles: Vec<String> = self
            .cycles
            .iter()
            .map(|c| {
                let pts: Vec<String> = c.xs.iter().map(|x| frac(x, &c.z)).collect();
                format!("{{{}}}", pts.join(", "))
            })
            .collect();
        format!(
            "sweep d={} c={} max-period={} P1-count={} cycles [{}]",
            self.d,
            self.c,
            self.max_period,
            self.count_p1,
            cycles.join(" ")
        )
    }
}

// ---------------------------------------------------------------- polynomials

/// JSON form of a coefficient tree: nested arrays, rationals as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Leaf(String),
    Node(Vec<CoeffJson>),
}

impl CoeffJson {
    pub fn from_core(t: &CoeffTree) -> Self {
        match t {
            CoeffTree::Leaf(r) => CoeffJson::Leaf(s(r)),
            CoeffTree::Node(v) => CoeffJson::Node(v.iter().map(CoeffJson::from_core).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialCert {
    /// `dynatomic`, `trace-resultant` or `family-cofactor`.
    pub name: String,
    pub d: u32,
    pub n: Option<u32>,
    /// Variable names, outermost first.
    pub vars: Vec<String>,
    pub degree: usize,
    pub text: String,
    pub coeffs: CoeffJson,
    /// An exact identity the polynomial was checked against.
    pub identity: Option<String>,
}

impl PolynomialCert {
    pub fn dynatomic(d: u32, n: u32) -> Result<Self> {
        let p = dynamics::dynatomic_poly(d, n)?;
        Ok(PolynomialCert {
            name: "dynatomic".into(),
            d,
            n: Some(n),
            vars: vec!["x".into(), "c".into()],
            degree: p.degree().unwrap_or(0),
            text: p.render(&["x", "c"]),
            coeffs: CoeffJson::from_core(&p.coeff_tree()),
            identity: None,
        })
    }

    pub fn trace_resultant(d: u32) -> Result<Self> {
        let p = dynamics::trace_resultant(d)?;
        let identity = if d == 4 {
            let f = dynamics::quartic_trace_factor();
            if p == f.mul(&f) {
                Some(format!("= +({})^2", f.render(&["t", "c"])))
            } else if p == f.mul(&f).neg() {
                Some(format!("= -({})^2", f.render(&["t", "c"])))
            } else {
                return Err(Error::Internal("d = 4 trace resultant is not the expected square".into()));
            }
        } else {
            None
        };
        Ok(PolynomialCert {
            name: "trace-resultant".into(),
            d,
            n: None,
            vars: vec!["t".into(), "c".into()],
            degree: p.degree().unwrap_or(0),
            text: p.render(&["t", "c"]),
            coeffs: CoeffJson::from_core(&p.coeff_tree()),
            identity,
        })
    }

    pub fn family_cofactor() -> Result<Self> {
        let q = curves::family_cofactor()?;
        let f = curves::family_factor();
        Ok(PolynomialCert {
            name: "family-cofactor".into(),
            d: 4,
            n: Some(2),
            vars: vec!["x".into(), "t".into()],
            degree: q.degree().unwrap_or(0),
            text: q.render(&["x", "t"]),
            coeffs: CoeffJson::from_core(&q.coeff_tree()),
            identity: Some(format!("64*t^6*Phi_2(x, c(t)) = ({}) * cofactor", f.render(&["x", "t"]))),
        })
    }

    fn verify(&self) -> Result<()> {
        let again = match self.name.as_str() {
            "dynatomic" => PolynomialCert::dynatomic(self.d, self.n.unwrap_or(0))?,
            "trace-resultant" => PolynomialCert::trace_resultant(self.d)?,
            "family-cofactor" => PolynomialCert::family_cofactor()?,
            other => return Err(Error::InvalidInput(format!("unknown polynomial {other:?}"))),
        };
        if &again != self {
            return Err(mismatch("polynomial"));
        }
        Ok(())
    }

    fn human(&self) -> String {
        let label = match (self.name.as_str(), self.n) {
            ("dynatomic", Some(n)) => format!("Phi_{n} for x^{} + c", self.d),
            ("trace-resultant", _) => format!("Res_x(Phi_2, t - x - f(x)) for x^{} + c", self.d),
            ("family-cofactor", _) => "cofactor of 64*t^6*Phi_2(x, c(t)) for x^4 + c".to_string(),
            (name, _) => name.to_string(),
        };
        let mut out = format!("{label} (degree {}): {}", self.degree, self.text);
        if let Some(id) = &self.identity {
            let _ = write!(out, "  [{id}]");
        }
        out
    }
}

// ---------------------------------------------------------------- Fermat–Catalan

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCert {
    pub k: u32,
    pub x1: String,
    pub x2: String,
    pub z: String,
    pub s: String,
    #[serde(rename = "D")]
    pub d_value: String,
    pub delta: u32,
    pub z1: String,
    pub z2: Option<String>,
}

impl DecompositionCert {
    pub fn from_core(f: &FCDecomposition) -> Self {
        DecompositionCert {
            k: f.k,
            x1: s(&f.x1),
            x2: s(&f.x2),
            z: s(&f.z),
            s: s(&f.s),
            d_value: s(&f.d),
            delta: f.delta,
            z1: s(&f.z1),
            z2: f.z2.as_ref().map(s),
        }
    }

    fn verify(&self) -> Result<()> {
        let core = FCDecomposition {
            k: self.k,
            x1: parse_integer(&self.x1)?,
            x2: parse_integer(&self.x2)?,
            z: parse_integer(&self.z)?,
            s: parse_integer(&self.s)?,
            d: parse_integer(&self.d_value)?,
            delta: self.delta,
            z1: parse_integer(&self.z1)?,
            z2: self.z2.as_deref().map(parse_integer).transpose()?,
        };
        core.verify()
    }

    fn human(&self) -> String {
        let e = 2 * self.k - 1;
        let mut out = format!(
            "decomposition k={} X=({}, {}) Z={}: S={} = {}*{}^{e}, D={}, S*D = -Z^{e}, Z1={} divides Z",
            self.k, self.x1, self.x2, self.z, self.s, self.delta, self.z1, self.d_value, self.z1
        );
        if let Some(z2) = &self.z2 {
            let _ = write!(out, ", Z2={z2}");
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureCert {
    pub k: u32,
    pub delta: u32,
    pub x: String,
    pub y: String,
    pub z: String,
    pub trivial: bool,
}

impl SignatureCert {
    pub fn from_core(k: u32, delta: u32, sol: &SignatureSolution) -> Self {
        SignatureCert {
            k,
            delta,
            x: s(&sol.x),
            y: s(&sol.y),
            z: s(&sol.z),
            trivial: sol.is_trivial(),
        }
    }

    fn verify(&self) -> Result<()> {
        use num_integer::Integer as _;
        use num_traits::{One, Pow};
        let sol = SignatureSolution {
            x: parse_integer(&self.x)?,
            y: parse_integer(&self.y)?,
            z: parse_integer(&self.z)?,
        };
        let lhs = Pow::pow(&sol.x, self.k) + Pow::pow(&sol.y, self.k);
        let rhs = BigInt::from(self.delta) * Pow::pow(&sol.z, 2 * self.k - 1);
        if lhs != rhs || !sol.x.gcd(&sol.y).is_one() || sol.is_trivial() != self.trivial {
            return Err(mismatch("signature"));
        }
        Ok(())
    }

    fn human(&self) -> String {
        format!(
            "signature x^{k} + y^{k} = {}*z^{}: ({}, {}, {}){}",
            self.delta,
            2 * self.k - 1,
            self.x,
            self.y,
            self.z,
            if self.trivial { " [trivial]" } else { "" },
            k = self.k
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonexistenceCert {
    pub k: u64,
    pub applies: bool,
    pub prime: Option<u64>,
}

impl NonexistenceCert {
    pub fn from_core(k: u64, v: Nonexistence) -> Self {
        match v {
            Nonexistence::Applies { prime } => NonexistenceCert { k, applies: true, prime: Some(prime) },
            Nonexistence::NotApplicable => NonexistenceCert { k, applies: false, prime: None },
        }
    }

    fn verify(&self) -> Result<()> {
        if NonexistenceCert::from_core(self.k, fermat_catalan::nonexistence_check(self.k)) != *self {
            return Err(mismatch("nonexistence"));
        }
        Ok(())
    }

    fn human(&self) -> String {
        match self.prime {
            Some(p) if self.applies => format!(
                "nonexistence k={}: APPLIES (3 | 2k-1 = {}, prime {p} divides k); x^{} + c has no rational exact period 2",
                self.k,
                2 * self.k - 1,
                2 * self.k
            ),
            _ => format!("nonexistence k={}: NOT_APPLICABLE", self.k),
        }
    }
}

// ---------------------------------------------------------------- abc bounds

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCert {
    /// `degree-bound`, `fixedpoint-w-bound` or `fixedpoint-sides`.
    pub quantity: String,
    pub inputs: BTreeMap<String, f64>,
    pub value: f64,
    /// For `fixedpoint-sides`: `(W^{d−5−4ε}, 2^{1+ε}K)` and whether `W` contradicts.
    pub sides: Option<(f64, f64)>,
    pub contradiction: Option<bool>,
}

fn inputs(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

impl BoundCert {
    pub fn degree_bound(epsilon: f64, k: f64, base: f64) -> Result<Self> {
        let p = BoundParams::new(epsilon, k, base)?;
        Ok(BoundCert {
            quantity: "degree-bound".into(),
            inputs: inputs(&[("epsilon", epsilon), ("K", k), ("base", base)]),
            value: abc::degree_bound(&p),
            sides: None,
            contradiction: None,
        })
    }

    pub fn fixedpoint_w_bound(epsilon: f64, k: f64, d: u32) -> Result<Self> {
        Ok(BoundCert {
            quantity: "fixedpoint-w-bound".into(),
            inputs: inputs(&[("epsilon", epsilon), ("K", k), ("d", f64::from(d))]),
            value: abc::fixedpoint_w_bound(epsilon, k, d)?,
            sides: None,
            contradiction: None,
        })
    }

    pub fn fixedpoint_sides(epsilon: f64, k: f64, d: u32, w: f64) -> Result<Self> {
        let (lhs, rhs) = abc::fixedpoint_sides(epsilon, k, d, w)?;
        Ok(BoundCert {
            quantity: "fixedpoint-sides".into(),
            inputs: inputs(&[("epsilon", epsilon), ("K", k), ("d", f64::from(d)), ("W", w)]),
            value: lhs - rhs,
            sides: Some((lhs, rhs)),
            contradiction: Some(lhs > rhs * (1.0 + abc::GUARD)),
        })
    }

    fn verify(&self) -> Result<()> {
        let get = |k: &str| {
            self.inputs
                .get(k)
                .copied()
                .ok_or_else(|| Error::InvalidInput(format!("bound certificate lacks {k}")))
        };
        let again = match self.quantity.as_str() {
            "degree-bound" => BoundCert::degree_bound(get("epsilon")?, get("K")?, get("base")?)?,
            "fixedpoint-w-bound" => BoundCert::fixedpoint_w_bound(get("epsilon")?, get("K")?, get("d")? as u32)?,
            "fixedpoint-sides" => BoundCert::fixedpoint_sides(get("epsilon")?, get("K")?, get("d")? as u32, get("W")?)?,
            other => return Err(Error::InvalidInput(format!("unknown bound {other:?}"))),
        };
        if &again != self {
            return Err(mismatch("bound"));
        }
        Ok(())
    }

    fn human(&self) -> String {
        let args: Vec<String> = self.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        match (self.sides, self.contradiction) {
            (Some((l, r)), Some(c)) => format!(
                "{} {}: W^(d-5-4eps) = {l} vs 2^(1+eps)*K = {r}: {}",
                self.quantity,
                args.join(" "),
                if c { "contradiction (W exceeds the bound)" } else { "no contradiction" }
            ),
            _ => format!("{} {}: {}", self.quantity, args.join(" "), self.value),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginCert {
    pub name: String,
    pub bound: f64,
    pub margin: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbcTripleCert {
    pub a: String,
    pub b: String,
    pub c: String,
    pub radical: String,
    pub quality: f64,
    pub margins: Vec<MarginCert>,
    pub holds: bool,
}

impl AbcTripleCert {
    pub fn from_core(t: &AbcTriple) -> Result<Self> {
        let e: ExplicitBound = abc::explicit_bound_holds(t)?;
        Ok(AbcTripleCert {
            a: s(t.a()),
            b: s(t.b()),
            c: s(t.c()),
            radical: s(&e.radical),
            quality: abc::quality(t)?,
            margins: e
                .margins
                .iter()
                .map(|m| MarginCert {
                    name: m.name.to_string(),
                    bound: m.bound(),
                    margin: m.margin(),
                    holds: m.holds(),
                })
                .collect(),
            holds: e.holds(),
        })
    }

    fn verify(&self) -> Result<()> {
        let t = abc::validate_triple(parse_integer(&self.a)?, parse_integer(&self.b)?, parse_integer(&self.c)?)?;
        if AbcTripleCert::from_core(&t)? != *self {
            return Err(mismatch("abc-triple"));
        }
        Ok(())
    }

    fn human(&self) -> String {
        let ms: Vec<String> = self
            .margins
            .iter()
            .map(|m| format!("{} = {} (margin {}, {})", m.name, m.bound, m.margin, if m.holds { "ok" } else { "FAILS" }))
            .collect();
        format!(
            "abc ({}, {}, {}): rad = {}, quality = {}; {}; explicit bound {}",
            self.a,
            self.b,
            self.c,
            self.radical,
            self.quality,
            ms.join("; "),
            if self.holds { "holds" } else { "fails" }
        )
    }
}

// ---------------------------------------------------------------- curves

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "curve", rename_all = "kebab-case")]
pub enum CurvePointCert {
    /// `y² = −t⁴ − 2t`.
    Quartic { t: String, y: String },
    /// `Y² = X⁵ + 81 Z¹⁰`.
    Hyperelliptic { x: String, y: String, z: String },
}

impl CurvePointCert {
    pub fn quartic(p: &QuarticPoint) -> Self {
        CurvePointCert::Quartic { t: s(&p.t), y: s(&p.y) }
    }

    pub fn hyperelliptic(p: &WeightedPoint) -> Self {
        CurvePointCert::Hyperelliptic { x: s(&p.x), y: s(&p.y), z: s(&p.z) }
    }

    fn verify(&self) -> Result<()> {
        let ok = match self {
            CurvePointCert::Quartic { t, y } => curves::on_quartic(&parse_rational(t)?, &parse_rational(y)?),
            CurvePointCert::Hyperelliptic { x, y, z } => {
                use num_integer::Integer as _;
                use num_traits::{One, Signed};
                let p = WeightedPoint { x: parse_integer(x)?, y: parse_integer(y)?, z: parse_integer(z)? };
                p.on_curve() && p.z.is_positive() && p.x.gcd(&p.z).is_one()
            }
        };
        if !ok {
            return Err(mismatch("curve-point"));
        }
        Ok(())
    }

    fn human(&self) -> String {
        match self {
            CurvePointCert::Quartic { t, y } => format!("E: y^2 = -t^4 - 2t: (t, y) = ({t}, {y})"),
            CurvePointCert::Hyperelliptic { x, y, z } => {
                format!("H: Y^2 = X^5 + 81 Z^10: (X : Y : Z) = ({x} : {y} : {z})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCert {
    pub t: String,
    pub y: String,
    pub c: String,
    pub x1: String,
    pub x2: String,
}

impl FamilyCert {
    pub fn from_core(f: &FamilyPoint) -> Self {
        FamilyCert { t: s(&f.t), y: s(&f.y), c: s(&f.c), x1: s(&f.x1), x2: s(&f.x2) }
    }

    fn verify(&self) -> Result<()> {
        let again = curves::family_generator(&parse_rational(&self.t)?, &parse_rational(&self.y)?)?;
        if FamilyCert::from_core(&again) != *self {
            return Err(mismatch("family"));
        }
        Ok(())
    }

    fn human(&self) -> String {
        format!(
            "family t={} y={}: c = {}, two-cycle {{{}, {}}} of x^4 + c (exact period 2)",
            self.t, self.y, self.c, self.x1, self.x2
        )
    }
}

// ---------------------------------------------------------------- misc

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemCheckCert {
    pub d: u32,
    pub x1: String,
    pub x2: String,
    pub x3: String,
    pub z: String,
    pub holds: bool,
    pub failures: Vec<String>,
}

impl SystemCheckCert {
    pub fn compute(x1: &Integer, x2: &Integer, x3: &Integer, z: &Integer, d: u32) -> Self {
        let r: SystemCheck = search::system_check(x1, x2, x3, z, d);
        SystemCheckCert {
            d,
            x1: s(x1),
            x2: s(x2),
            x3: s(x3),
            z: s(z),
            holds: r.holds(),
            failures: r.failures().iter().map(|f| f.to_string()).collect(),
        }
    }

    fn verify(&self) -> Result<()> {
        let again = SystemCheckCert::compute(
            &parse_integer(&self.x1)?,
            &parse_integer(&self.x2)?,
            &parse_integer(&self.x3)?,
            &parse_integer(&self.z)?,
            self.d,
        );
        if again != *self {
            return Err(mismatch("system-check"));
        }
        Ok(())
    }

    fn human(&self) -> String {
        let verdict = if self.holds {
            "all clauses hold".to_string()
        } else {
            format!("fails: {}", self.failures.join(", "))
        };
        format!(
            "system d={} (X1, X2, X3, Z) = ({}, {}, {}, {}): {verdict}",
            self.d, self.x1, self.x2, self.x3, self.z
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointPairCert {
    /// `fixed-to-cycle` or `cycle-to-fixed`.
    pub direction: String,
    pub d: u32,
    pub input: (String, String),
    pub c: String,
    pub first: String,
    pub second: String,
}

impl PointPairCert {
    pub fn compute(direction: &str, d: u32, a: &Rational, b: &Rational) -> Result<Self> {
        let p: PointPair = match direction {
            "fixed-to-cycle" => dynamics::fixed_pair_to_two_cycle(d, a, b)?,
            "cycle-to-fixed" => dynamics::two_cycle_to_fixed_pair(d, a, b)?,
            other => return Err(Error::InvalidInput(format!("unknown direction {other:?}"))),
        };
        Ok(PointPairCert {
            direction: direction.into(),
            d,
            input: (s(a), s(b)),
            c: s(&p.c),
            first: s(&p.first),
            second: s(&p.second),
        })
    }

    fn verify(&self) -> Result<()> {
        let again = PointPairCert::compute(
            &self.direction,
            self.d,
            &parse_rational(&self.input.0)?,
            &parse_rational(&self.input.1)?,
        )?;
        if again != *self {
            return Err(mismatch("point-pair"));
        }
        Ok(())
    }

    fn human(&self) -> String {
        let what = if self.direction == "fixed-to-cycle" { "two-cycle" } else { "fixed points" };
        format!(
            "{} d={} ({}, {}) -> {what} {{{}, {}}} of x^{} + {}",
            self.direction, self.d, self.input.0, self.input.1, self.first, self.second, self.d, self.c
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationCert {
    pub n: String,
    /// `(prime, exponent)` in increasing prime order.
    pub factors: Vec<(String, u32)>,
    pub radical: String,
}

impl FactorizationCert {
    pub fn compute(n: &Integer) -> Result<Self> {
        let f: Factorization = factorize(n)?;
        Ok(FactorizationCert {
            n: s(n),
            factors: f.factors().iter().map(|(p, e)| (s(p), *e)).collect(),
            radical: s(&preper_core::exactnum::radical(n)?),
        })
    }

    fn verify(&self) -> Result<()> {
        if FactorizationCert::compute(&parse_integer(&self.n)?)? != *self {
            return Err(mismatch("factorization"));
        }
        Ok(())
    }

    fn human(&self) -> String {
        let fs: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.clone() } else { format!("{p}^{e}") })
            .collect();
        let body = if fs.is_empty() { "1".to_string() } else { fs.join(" * ") };
        format!("factor {} = {body}; radical {}", self.n, self.radical)
    }
}
