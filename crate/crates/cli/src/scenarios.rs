//! Named end-to-end verification scenarios. Each scenario builds its
//! complexes, runs the comparison it is named after, and returns a
//! [`ResultTable`] whose `pass` flag drives the process exit code.


use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use exacthom::barcobar::{
    amitsur_homotopy, bar_cobar_roundtrip, deformed_tensor_algebra, koszul_dual_endomorphisms,
    CoalgebraData, DeformedInput, SectionCoalgebra,
};
use exacthom::dgcore::{presets, AlgebraMorphism, DgPresentation, GeneratorSpec, MulKind};
use exacthom::exactalg::{ExactError, HomologyReport, Limits, PolyScalar, RingTag, SparseMatrix};
use exacthom::hkr::{
    compare_with_model, d2_transgression, instantiate_explicit, kaehler, monomial_model,
    spectral_sequence, sym_filtration, verify_phi, ExplicitName, Twist,
};
use exacthom::hochschild::{
    chain_iso_up_to_scalars, curved_dual_pairing, dualize_mixed, hochschild_second_kind,
    hochschild_mixed, homology_with_u_action, induced_mixed_map, naive_hochschild,
    negative_cyclic_of, CyclicComplex, TruncationPolicy, UnitPolicy,
};
use exacthom::hkr::hkr_map;
use exacthom::witt::{
    ghost, is_rational, witt_add, witt_mul, WittVector,
};

use crate::table::{ResultTable, Row};

pub const SCENARIOS: &[&str] = &[
    "hh-truncated",
    "b-operator-freeness",
    "affine-line",
    "laurent-dual",
    "cn-lemma",
    "hp-point",
    "bar-cobar",
    "koszul-end",
    "amitsur",
    "deformed-tensor",
    "witt-ring",
];

#[derive(Clone, Debug)]
pub struct Params {
    pub n: u32,
    pub window: Option<(i64, i64)>,
    pub u_order: usize,
    pub weight_bound: i64,
    /// Tensor levels for the Amitsur scenario.
    pub length: usize,
    pub trust_margin: i64,
    pub limit_nonzeros: usize,
    pub seed: u64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            n: 2,
            window: None,
            u_order: 3,
            weight_bound: 4,
            length: 5,
            trust_margin: 2,
            limit_nonzeros: 5000,
            seed: 0,
        }
    }
}

#[derive(Debug)]
pub enum ScenarioError {
    /// Unknown scenario name or unusable parameters: exit code 2.
    Usage(String),
    /// Construction or computation failure: resource limits map to exit
    /// code 3, everything else to 1.
    Exact(ExactError),
}

impl std::fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScenarioError::Usage(m) => write!(f, "{}", m),
            ScenarioError::Exact(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for ScenarioError {}

impl From<ExactError> for ScenarioError {
    fn from(e: ExactError) -> Self {
        ScenarioError::Exact(e)
    }
}

fn limits(p: &Params) -> Limits {
    Limits { max_nonzeros: p.limit_nonzeros }
}

/// Documented safe ranges; exceeding them is allowed but recorded as a
/// warning in the table.
fn range_warnings(p: &Params, t: &mut ResultTable) {
    if p.n > 3 {
        t.warnings.push(format!("n = {} exceeds the documented safe range n <= 3", p.n));
    }
    if let Some((a, b)) = p.window {
        if b - a > 14 {
            t.warnings
                .push(format!("window width {} exceeds the documented safe range 14", b - a));
        }
    }
    if p.u_order > 5 {
        t.warnings
            .push(format!("u-order {} exceeds the documented safe range 5", p.u_order));
    }
    if p.weight_bound > 6 {
        t.warnings.push(format!(
            "weight bound {} exceeds the documented safe range 6",
            p.weight_bound
        ));
    }
}

fn matrix_string(m: &SparseMatrix) -> String {
    if m.rows() == 0 || m.cols() == 0 || m.is_zero() {
        return String::new();
    }
    let mut parts = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            parts.push(m.get(i, j).to_string());
        }
    }
    parts.join(";")
}

/// Rows of a homology report, with the degree −2 action rendered per
/// source degree.
fn report_rows(h: &HomologyReport) -> Vec<Row> {
    h.degrees
        .iter()
        .map(|d| Row {
            degree: d.degree,
            rank: d.free_rank,
            invariant_factors: d.invariant_factors.iter().map(|f| f.to_string()).collect(),
            u_action: h.u_action.get(&d.degree).map(matrix_string).unwrap_or_default(),
            trusted: d.trusted,
        })
        .collect()
}

pub fn run_scenario(name: &str, params: &Params) -> Result<ResultTable, ScenarioError> {
    let started = std::time::Instant::now();
    let mut table = match name {
        "hh-truncated" => hh_truncated(params)?,
        "b-operator-freeness" => b_operator_freeness(params)?,
        "affine-line" => affine_line(params)?,
        "laurent-dual" => laurent_dual(params)?,
        "cn-lemma" => cn_lemma(params)?,
        "hp-point" => hp_point(params)?,
        "bar-cobar" => bar_cobar(params)?,
        "koszul-end" => koszul_end(params)?,
        "amitsur" => amitsur(params)?,
        "deformed-tensor" => deformed_tensor(params)?,
        "witt-ring" => witt_ring(params)?,
        other => {
            return Err(ScenarioError::Usage(format!(
                "unknown scenario '{}'; known scenarios: {}",
                other,
                SCENARIOS.join(", ")
            )))
        }
    };
    table.finish();
    table.elapsed = Some(started.elapsed());
    Ok(table)
}

/// Reduced Hochschild homology of Q[a]/a^n over Q: dimension n − 1 in every
/// trusted degree.
fn hh_truncated(p: &Params) -> Result<ResultTable, ScenarioError> {
    let mut t = ResultTable::new("hh-truncated");
    let (a, b) = p.window.unwrap_or((0, 7));
    t.param("n", p.n);
    t.param("window", format!("{}:{}", a, b));
    t.param("trust_margin", p.trust_margin);
    range_warnings(p, &mut t);
    if p.n < 1 {
        return Err(ScenarioError::Usage("n must be at least 1".into()));
    }

    let pres = presets::truncated_affine(p.n);
    let policy = TruncationPolicy::new(a, b, 1).with_margin(p.trust_margin);
    let mc = hochschild_mixed(&pres, &policy, UnitPolicy::Relative)?;
    let mut h = exacthom::exactalg::homology_with(mc.complex(), limits(p))?;
    let (lo, hi) = mc.trusted_range(p.trust_margin);
    for d in &mut h.degrees {
        d.trusted = d.degree >= lo && d.degree <= hi;
    }
    t.trust_window = Some((lo, hi));
    t.rows = report_rows(&h);

    let expected = (p.n - 1) as usize;
    let bad: Vec<String> = h
        .degrees
        .iter()
        .filter(|d| d.trusted && d.dim_q() != expected)
        .map(|d| format!("degree {}: dim {}", d.degree, d.dim_q()))
        .collect();
    t.check(
        "reduced-hh-dimension",
        bad.is_empty(),
        if bad.is_empty() {
            format!("dimension {} in every trusted degree", expected)
        } else {
            bad.join("; ")
        },
    );
    Ok(t)
}

/// The map on Hochschild homology induced by Q[a]/a^{n+1} -> Q[a]/a^n
/// vanishes in degrees 2l for l >= n − 1.
fn b_operator_freeness(p: &Params) -> Result<ResultTable, ScenarioError> {
    let mut t = ResultTable::new("b-operator-freeness");
    let (a, b) = p.window.unwrap_or((0, 7));
    t.param("n", p.n);
    t.param("window", format!("{}:{}", a, b));
    t.param("trust_margin", p.trust_margin);
    range_warnings(p, &mut t);
    if p.n < 1 {
        return Err(ScenarioError::Usage("n must be at least 1".into()));
    }

    let src = presets::truncated_affine(p.n + 1);
    let tgt = presets::truncated_affine(p.n);
    let f = AlgebraMorphism::new(src, tgt.clone(), vec![tgt.gen_elem("a")])?;
    let policy = TruncationPolicy::new(a, b, 1).with_margin(p.trust_margin);
    let mm = induced_mixed_map(&f, &policy, UnitPolicy::Relative)?;
    let hi = b - p.trust_margin;
    t.trust_window = Some((a, hi));

    let n = p.n as i64;
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for l in (n - 1).. {
        let k = 2 * l;
        if k > hi {
            break;
        }
        checked += 1;
        let m = mm.induced_on_homology(k, limits(p))?;
        if !m.is_zero() {
            failures.push(format!("induced map at degree {} is nonzero", k));
        }
    }
    t.check(
        "high-even-degrees-vanish",
        failures.is_empty(),
        if failures.is_empty() {
            format!("zero map in {} even degrees 2l with l >= {}", checked, n - 1)
        } else {
            failures.join("; ")
        },
    );
    if p.n >= 2 {
        // Sanity: below the threshold the map is not globally zero.
        let m = mm.induced_on_homology(0, limits(p))?;
        t.check(
            "low-degree-map-nonzero",
            !m.is_zero(),
            "degree 0 reduced classes survive the quotient",
        );
    }
    Ok(t)
}

/// Reduced negative cyclic homology of the polynomial line Q[a]: one class
/// per weight, all in degree 1, with the degree −2 action zero.
fn affine_line(p: &Params) -> Result<ResultTable, ScenarioError> {
    let mut t = ResultTable::new("affine-line");
    let (a, b) = p.window.unwrap_or((-2, 3));
    t.param("window", format!("{}:{}", a, b));
    t.param("u_order", p.u_order);
    t.param("weight_bound", p.weight_bound);
    t.param("trust_margin", p.trust_margin);
    range_warnings(p, &mut t);

    let pres = DgPresentation::new(
        RingTag::Q,
        MulKind::GradedCommutative,
        vec![GeneratorSpec::with_weight("a", 0, 1)],
    );
    let policy = TruncationPolicy::new(a, b, p.u_order)
        .with_margin(p.trust_margin)
        .with_weight_bound(p.weight_bound);
    let cc = negative_cyclic_of(&pres, &policy, UnitPolicy::Relative)?;
    let h = homology_with_u_action(&cc, p.trust_margin, limits(p))?;
    t.trust_window = Some(cc.trusted_range(p.trust_margin));
    t.rows = report_rows(&h);

    let mut failures = Vec::new();
    for d in h.degrees.iter().filter(|d| d.trusted) {
        let want = if d.degree == 1 { p.weight_bound as usize } else { 0 };
        if d.free_rank != want || !d.invariant_factors.is_empty() {
            failures.push(format!(
                "degree {}: rank {} (expected {}), {} torsion factors",
                d.degree,
                d.free_rank,
                want,
                d.invariant_factors.len()
            ));
        }
    }
    t.check(
        "one-class-per-weight-in-degree-one",
        failures.is_empty(),
        if failures.is_empty() {
            format!("rank {} in degree 1, zero elsewhere", p.weight_bound)
        } else {
            failures.join("; ")
        },
    );
    if let Some(u) = h.u_action.get(&1) {
        t.check("u-action-vanishes", u.is_zero(), "degree 1 classes are killed by u");
    }
    Ok(t)
}

/// Homology of the explicit Laurent dual complex against the monomial
/// model with valuation step n.
fn laurent_dual(p: &Params) -> Result<ResultTable, ScenarioError> {
    let mut t = ResultTable::new("laurent-dual");
    let (a, b) = p.window.unwrap_or((-10, 2));
    t.param("n", p.n);
    t.param("window", format!("{}:{}", a, b));
    t.param("u_order", p.u_order);
    t.param("trust_margin", p.trust_margin);
    range_warnings(p, &mut t);
    if p.n < 1 {
        return Err(ScenarioError::Usage("n must be at least 1".into()));
    }

    let top = b + 2 * (p.u_order as i64 - 1);
    let policy = TruncationPolicy::new(a, top, 1);
    let mc = instantiate_explicit(ExplicitName::LaurentDual, p.n, &policy)?;
    let cc = CyclicComplex::from_mixed(&mc, p.u_order, a, b)?;
    let h = homology_with_u_action(&cc, p.trust_margin, limits(p))?;
    t.trust_window = Some(cc.trusted_range(p.trust_margin));
    t.rows = report_rows(&h);

    let model = monomial_model(1, p.n as i64, p.n as i64, None, Some(0));
    let r = compare_with_model(&h, &model, p.u_order);
    t.check(
        "monomial-model-match",
        r.pass,
        if r.pass {
            format!("free rank 1 per trusted even degree, valuation step {}", p.n)
        } else {
            r.failures.join("; ")
        },
    );
    Ok(t)
}

/// The full comparison pipeline for the truncated-coordinate computation:
/// duality with the curved truncation, the curved HKR map, the page-2
/// differential and page-3 concentration of the filtered de Rham complex,
/// the explicit comparison map, and the monomial model of the dual.
fn cn_lemma(p: &Params) -> Result<ResultTable, ScenarioError> {
    let mut t = ResultTable::new("cn-lemma");
    let (a, b) = p.window.unwrap_or((-8, 0));
    t.param("n", p.n);
    t.param("window", format!("{}:{}", a, b));
    t.param("u_order", p.u_order);
    t.param("trust_margin", p.trust_margin);
    range_warnings(p, &mut t);
    if p.n < 1 {
        return Err(ScenarioError::Usage("n must be at least 1".into()));
    }
    if a >= 0 || b < 0 {
        return Err(ScenarioError::Usage(
            "the window must contain 0 in its interior or at its top".into(),
        ));
    }
    let width = -a;

    // (a) The second-kind complex of the curved truncation is chain-level
    // isomorphic (up to unit scalars) to the dual of the naive complex of
    // the free odd tower.
    let naive_policy = TruncationPolicy::new(0, width, 1);
    let naive = naive_hochschild(&presets::free_odd_tower(p.n), &naive_policy)?;
    let dual = dualize_mixed(&naive)?;
    let curved_policy = TruncationPolicy::new(a, 0, 1);
    let curved =
        hochschild_second_kind(&presets::curved_truncation(p.n), &curved_policy, UnitPolicy::Full)?;
    let pairing = curved_dual_pairing(&dual, &curved)?;
    let iso = chain_iso_up_to_scalars(&dual, &curved, &|k, i| pairing.get(&(k, i)).copied());
    let iso_ok = match &iso {
        Ok(scalars) => scalars.iter().flatten().all(|s| s.is_unit()),
        Err(_) => false,
    };
    t.check(
        "dual-naive-vs-second-kind",
        iso_ok,
        match &iso {
            Ok(_) => "canonical basis pairing is a chain isomorphism up to units".to_string(),
            Err(e) => e.to_string(),
        },
    );

    // (b) The curved HKR map is a chain map and a quasi-isomorphism.
    let mut twisted = presets::semifree_tower(p.n);
    let h = twisted.gen_elem("t").scale(&PolyScalar::x()).neg();
    twisted.set_curvature(h);
    let data = kaehler(&twisted)?;
    let hkr_policy = TruncationPolicy::new(a, 0, 1).with_margin(p.trust_margin);
    let hkr = hkr_map(&twisted, &data, &hkr_policy)?;
    t.check(
        "curved-hkr-quasi-iso",
        hkr.quasi_iso,
        format!("{} trusted degrees compared", hkr.homology_agreement.len()),
    );

    // (c) The page-2 differential formula on transgressive classes, and
    // page 3 concentrated in odd degrees on the interior of the window.
    let plain = presets::semifree_tower(p.n);
    let mut d2_ok = true;
    let mut d2_detail = String::new();
    for l in 0..=3u32 {
        let (computed, reference) = d2_transgression(p.n, l)?;
        if computed != reference {
            d2_ok = false;
            d2_detail = format!("mismatch at power {}", l);
            break;
        }
    }
    t.check(
        "page-2-differential",
        d2_ok,
        if d2_ok { "closed form matches on powers 0..=3".to_string() } else { d2_detail },
    );
    let filtration_policy = TruncationPolicy::new(a - 2, 0, 1);
    let data_plain = kaehler(&plain)?;
    let f = sym_filtration(&data_plain, &Twist::XTimesD("t".into()), &filtration_policy)?;
    // One page past 3, so stabilization at page 3 is certified by equality.
    let pages = spectral_sequence(&f, 4, limits(p))?;
    let interior = (a + p.trust_margin)..=(-p.trust_margin);
    let even_survivor = pages.pages[&3]
        .iter()
        .find(|((_, k), _)| interior.contains(k) && k.rem_euclid(2) == 0);
    t.check(
        "page-3-odd-concentration",
        even_survivor.is_none(),
        match even_survivor {
            None => format!(
                "no page-3 classes in even degrees {}..={}",
                a + p.trust_margin,
                -p.trust_margin
            ),
            Some(((lvl, k), _)) => format!("even class at level {}, degree {}", lvl, k),
        },
    );
    t.check(
        "degeneration-by-page-3",
        pages.degenerate_from.is_some_and(|r| r <= 3),
        format!("pages stabilize from {:?}", pages.degenerate_from),
    );

    // (d) The explicit comparison map into the twisted de Rham complex is
    // an exact chain map and a quasi-isomorphism.
    let phi_policy = TruncationPolicy::new(a, 0, 1).with_margin(p.trust_margin);
    let phi = verify_phi(p.n, &phi_policy)?;
    t.check(
        "explicit-map-quasi-iso",
        phi.quasi_iso,
        format!("{} trusted degrees compared", phi.homology_agreement.len()),
    );

    // (e) Homology of the dual explicit complex with its degree −2 action
    // matches the monomial model n·i + (n+1)·j + n >= 0.
    let dual_top = 2 * width - 2;
    let kd_policy = TruncationPolicy::new(0, dual_top, 1);
    let kd = instantiate_explicit(ExplicitName::KDual, p.n, &kd_policy)?;
    let cc = CyclicComplex::from_mixed(&kd, p.u_order + 1, 0, dual_top - 2 * p.u_order as i64)?;
    let hrep = homology_with_u_action(&cc, p.trust_margin, limits(p))?;
    t.trust_window = Some(cc.trusted_range(p.trust_margin));
    t.rows = report_rows(&hrep);
    let n = p.n as i64;
    let model = monomial_model(n, n + 1, n, Some(0), None);
    let r = compare_with_model(&hrep, &model, p.u_order + 1);
    t.check(
        "dual-monomial-model",
        r.pass && !r.checked.is_empty(),
        if r.pass {
            format!("{} trusted degrees match", r.checked.len())
        } else {
            r.failures.join("; ")
        },
    );
    Ok(t)
}

/// Stage compatibility of the monomial models with constraint
/// n·i + (n+1)·j >= 0, i >= 0: the stage-n region embeds into stage n + 1
/// and generator valuations never increase.
fn hp_point(p: &Params) -> Result<ResultTable, ScenarioError> {
    let mut t = ResultTable::new("hp-point");
    let (a, b) = p.window.unwrap_or((-12, 12));
    t.param("n", p.n);
    t.param("window", format!("{}:{}", a, b));
    range_warnings(p, &mut t);
    if p.n < 1 {
        return Err(ScenarioError::Usage("n must be at least 1".into()));
    }
    let n = p.n as i64;
    let stage = monomial_model(n, n + 1, 0, Some(0), None);
    let next = monomial_model(n + 1, n + 2, 0, Some(0), None);
    t.trust_window = Some((a, b));

    let mut inclusion_failures = Vec::new();
    let mut valuation_failures = Vec::new();
    let degrees: Vec<i64> = (a..=b).filter(|k| k.rem_euclid(2) == 0).collect();
    for &k in &degrees {
        let j = -k / 2;
        let (Some(i1), Some(i2)) = (stage.i_min(j), next.i_min(j)) else { continue };
        // The stage-n generator x^{i1} u^j must lie in the stage-(n+1)
        // region.
        if (n + 1) * i1 + (n + 2) * j < 0 || i1 < 0 {
            inclusion_failures.push(format!("degree {}: x^{} u^{} escapes stage {}", k, i1, j, n + 1));
        }
        if i2 > i1 {
            valuation_failures.push(format!("degree {}: valuation rises {} -> {}", k, i1, i2));
        }
        // Within one stage, the valuation is nonincreasing along the
        // degree −2 action.
        if let (Some(v), Some(w)) = (stage.i_min(j), stage.i_min(j + 1)) {
            if w > v {
                valuation_failures.push(format!("degree {}: stage-{} valuation rises with u", k, n));
            }
        }
        t.rows.push(Row {
            degree: k,
            rank: stage.rank_at(k),
            invariant_factors: vec![],
            u_action: match stage.u_exponent(k) {
                Some(0) => "1".to_string(),
                Some(1) => "x".to_string(),
                Some(e) if e > 0 => format!("x^{}", e),
                _ => String::new(),
            },
            trusted: true,
        });
    }
    t.check(
        "stage-region-inclusion",
        inclusion_failures.is_empty(),
        if inclusion_failures.is_empty() {
            format!("stage {} generators lie in stage {} on {} degrees", n, n + 1, degrees.len())
        } else {
            inclusion_failures.join("; ")
        },
    );
    t.check(
        "valuations-nonincreasing",
        valuation_failures.is_empty(),
        if valuation_failures.is_empty() {
            "generator valuations never increase".to_string()
        } else {
            valuation_failures.join("; ")
        },
    );
    Ok(t)
}

/// Bar of cobar of the truncated dual coalgebra recovers its homology per
/// weight and degree.
fn bar_cobar(p: &Params) -> Result<ResultTable, ScenarioError> {
    let mut t = ResultTable::new("bar-cobar");
    t.param("n", p.n);
    t.param("weight_bound", p.weight_bound);
    range_warnings(p, &mut t);
    if p.n < 2 {
        return Err(ScenarioError::Usage("n must be at least 2".into()));
    }
    let c = CoalgebraData::truncated_dual(p.n);
    let r = bar_cobar_roundtrip(&c, p.weight_bound)?;
    t.check(
        "roundtrip-homology-match",
        r.pass,
        if r.pass {
            format!("weights up to {} agree", p.weight_bound)
        } else {
            r.mismatches.join("; ")
        },
    );
    Ok(t)
}

/// The Koszul-dual endomorphism algebra of the cobar of the truncated dual
/// has total dimension n with a generator nilpotent of order exactly n.
fn koszul_end(p: &Params) -> Result<ResultTable, ScenarioError> {
    let mut t = ResultTable::new("koszul-end");
    let w = if p.weight_bound < p.n as i64 + 1 { p.n as i64 + 1 } else { p.weight_bound };
    t.param("n", p.n);
    t.param("weight_bound", w);
    range_warnings(p, &mut t);
    if p.n < 2 {
        return Err(ScenarioError::Usage("n must be at least 2".into()));
    }
    let algebra = exacthom::barcobar::cobar(&CoalgebraData::truncated_dual(p.n))?;
    let r = koszul_dual_endomorphisms(&algebra, w)?;
    t.check(
        "total-dimension",
        r.total_dim == p.n as usize,
        format!("total graded dimension {} (expected {})", r.total_dim, p.n),
    );
    t.check(
        "nilpotency-order",
        r.nilpotency_degree == Some(p.n),
        format!("generator nilpotent of order {:?} (expected {})", r.nilpotency_degree, p.n),
    );
    t.check("convolution-associative", r.associative, "checked on all homology representatives");
    for w in 0..p.n as i64 {
        t.check(
            &format!("weight-{}-line", w),
            r.dims.get(&(w, 0)) == Some(&1),
            format!("one class at weight {}, dual degree 0", w),
        );
    }
    Ok(t)
}

/// Random section coalgebras built from a raw comultiplication corrected to
/// satisfy the strict section law.
fn random_section_coalgebra(rng: &mut ChaCha8Rng, dim: usize) -> SectionCoalgebra {
    let q = |n: i64| BigRational::from_integer(n.into());
    let mut eps = vec![BigRational::one()];
    for _ in 1..dim {
        eps.push(q(rng.gen_range(-3..=3)));
    }
    let mut delta: Vec<Vec<(usize, usize, BigRational)>> = Vec::new();
    for k in 0..dim {
        let mut terms: Vec<(usize, usize, BigRational)> = Vec::new();
        for l in 0..dim {
            for r in 0..dim {
                let v = q(rng.gen_range(-2..=2));
                if !v.is_zero() {
                    terms.push((l, r, v));
                }
            }
        }
        let mut first = vec![BigRational::zero(); dim];
        for &(l, r, ref v) in &terms {
            first[l] += v * &eps[r];
        }
        for (l, v) in first.into_iter().enumerate() {
            if !v.is_zero() {
                terms.push((l, 0, -v));
            }
        }
        terms.push((k, 0, BigRational::one()));
        delta.push(terms);
    }
    SectionCoalgebra::new(dim, eps, delta).expect("corrected coalgebra is well formed")
}

/// The contracting homotopy identity on tensor powers of a coalgebra with a
/// strict section law, for the trivial, a rank-2, and randomized examples.
fn amitsur(p: &Params) -> Result<ResultTable, ScenarioError> {
    let mut t = ResultTable::new("amitsur");
    t.param("length", p.length);
    t.param("seed", p.seed);
    range_warnings(p, &mut t);
    if p.length > 6 {
        t.warnings.push(format!(
            "length {} exceeds the documented safe range 6",
            p.length
        ));
    }

    let r = amitsur_homotopy(&SectionCoalgebra::base(), p.length)?;
    t.check("base-ring", r.pass, format!("{} levels", r.levels_checked));

    let one = BigRational::one();
    let rank2 = SectionCoalgebra::new(
        2,
        vec![one.clone(), BigRational::zero()],
        vec![vec![(0, 0, one.clone())], vec![(1, 0, one)]],
    )?;
    let r = amitsur_homotopy(&rank2, p.length)?;
    t.check("rank-two", r.pass, format!("{} levels", r.levels_checked));

    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let rand_length = p.length.min(3);
    let mut failures = Vec::new();
    for trial in 0..20usize {
        let dim = 2 + (trial % 2);
        let c = random_section_coalgebra(&mut rng, dim);
        let r = amitsur_homotopy(&c, rand_length)?;
        if !r.pass {
            failures.push(format!("trial {}: {}", trial, r.failures.join("; ")));
        }
    }
    t.check(
        "randomized",
        failures.is_empty(),
        if failures.is_empty() {
            format!("20 randomized coalgebras, levels <= {}", rand_length)
        } else {
            failures.join("; ")
        },
    );
    Ok(t)
}

/// The associated graded of the deformed tensor algebra is the plain tensor
/// algebra, for a rank-1 and a rank-2 module.
fn deformed_tensor(p: &Params) -> Result<ResultTable, ScenarioError> {
    let mut t = ResultTable::new("deformed-tensor");
    let bound = p.weight_bound.max(1) as usize;
    t.param("word_bound", bound);
    range_warnings(p, &mut t);

    let one = BigRational::one();
    let rank1 = DeformedInput {
        names: vec!["e".into()],
        degrees: vec![1],
        v: vec![one.clone()],
        d: vec![vec![]],
    };
    let rank2 = DeformedInput {
        names: vec!["e".into(), "f".into()],
        degrees: vec![1, 1],
        v: vec![one.clone(), one],
        d: vec![vec![], vec![]],
    };
    for (label, input) in [("rank-1", &rank1), ("rank-2", &rank2)] {
        let model = deformed_tensor_algebra(input, bound)?;
        let r = model.gr_matches_tensor_algebra(input)?;
        t.check(
            &format!("{}-gr-is-tensor-algebra", label),
            r.pass,
            if r.pass {
                format!("word lengths up to {}", bound)
            } else {
                r.failures.join("; ")
            },
        );
    }
    Ok(t)
}

/// Ring structure of big Witt vectors at finite precision: the line
/// product identity, ghost coordinates as a ring homomorphism on random
/// inputs, and a rationality certificate.
fn witt_ring(p: &Params) -> Result<ResultTable, ScenarioError> {
    let mut t = ResultTable::new("witt-ring");
    t.param("seed", p.seed);
    t.param("precision", 6);
    range_warnings(p, &mut t);
    let ring = RingTag::Q;
    let precision = 6usize;
    let s = |n: i64| PolyScalar::from_int(ring, n);

    // (1 - 2t) * (1 - 3t) = 1 - 6t in the Witt ring.
    let prod = witt_mul(&WittVector::line(&s(2), precision), &WittVector::line(&s(3), precision))?;
    t.check(
        "line-product",
        prod == WittVector::line(&s(6), precision),
        "product of one-dimensional classes multiplies the parameters",
    );

    // Ghost coordinates turn Witt sum/product into pointwise sum/product.
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut failures = 0usize;
    for _ in 0..50 {
        let rand_vec = |rng: &mut ChaCha8Rng| -> WittVector {
            let coeffs: Vec<PolyScalar> =
                (0..precision).map(|_| s(rng.gen_range(-4..=4))).collect();
            WittVector::new(ring, coeffs).expect("random vector is valid")
        };
        let a = rand_vec(&mut rng);
        let b = rand_vec(&mut rng);
        let ga = ghost(&a);
        let gb = ghost(&b);
        let sum_ok = ghost(&witt_add(&a, &b)?)
            .iter()
            .zip(ga.iter().zip(&gb))
            .all(|(g, (x, y))| g.sub(&x.add(y)).is_zero());
        let prod_ok = ghost(&witt_mul(&a, &b)?)
            .iter()
            .zip(ga.iter().zip(&gb))
            .all(|(g, (x, y))| g.sub(&x.mul(y)).is_zero());
        if !sum_ok || !prod_ok {
            failures += 1;
        }
    }
    t.check(
        "ghost-ring-homomorphism",
        failures == 0,
        format!("50 random pairs at precision {}, {} failures", precision, failures),
    );

    // (1 - t)/(1 - 2t) is rational with denominator degree 1.
    let l = 10usize;
    let mut coeffs = Vec::with_capacity(l);
    for m in 1..=l as u32 {
        // Series coefficient of (1 - t)/(1 - 2t): 2^m - 2^{m-1} = 2^{m-1}.
        coeffs.push(s(2i64.pow(m) - 2i64.pow(m - 1)));
    }
    let w = WittVector::new(ring, coeffs)?;
    let cert = is_rational(&w, 1)?;
    let cert_ok = cert.as_ref().is_some_and(|c| {
        let q = |n: i64| BigRational::from_integer(n.into());
        c.numerator == vec![q(1), q(-1)] && c.denominator == vec![q(1), q(-2)]
    });
    t.check(
        "rationality-certificate",
        cert_ok,
        "recovers numerator 1 - t and denominator 1 - 2t",
    );
    Ok(t)
}
