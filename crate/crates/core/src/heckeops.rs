//! The pipeline on q-expansions: embed g·(g|V_q) at level Nq, trace down to
//! level q, project to the Eisenstein component and read off eta.

use std::sync::Arc;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffarith::{gcd, is_prime, mul_mod};
use crate::modsym::linalg::{
    charpoly_mod, identity_mod, linear_power, mat_add_mod, mat_mul_mod, poly_divrem,
    poly_inv_mod, poly_mul, poly_eval_matrix, rank_mod, vec_mat_mod, MatFp,
};
use crate::modsym::{default_nterms, qexp_basis, QExpBasis};
use crate::qseries::{eisenstein_series_level_q, v_operator, weight_one_form, CoeffRing, TruncatedSeries};

/// Largest auxiliary prime tried by the Eisenstein projector.
pub const AUX_PRIME_BOUND: u64 = 50;

/// A series mod p written in a [`QExpBasis`].
#[derive(Debug, Clone)]
pub struct EmbeddedForm {
    pub coords: Vec<u64>,
    basis: Arc<QExpBasis>,
}

impl EmbeddedForm {
    pub fn level(&self) -> u64 {
        self.basis.level()
    }

    pub fn p(&self) -> u64 {
        self.basis.p()
    }

    pub fn basis(&self) -> &Arc<QExpBasis> {
        &self.basis
    }

    pub fn series(&self) -> TruncatedSeries {
        self.basis.combination(&self.coords)
    }

    /// The form with coordinate vector `v * m`.
    pub fn apply(&self, m: &MatFp) -> EmbeddedForm {
        let coords = if m.is_empty() { Vec::new() } else { vec_mat_mod(&self.coords, m, self.p()) };
        EmbeddedForm { coords, basis: Arc::clone(&self.basis) }
    }
}

fn series_mod_p(series: &TruncatedSeries, p: u64) -> Result<Vec<u64>> {
    let reduced = match series.ring() {
        CoeffRing::Integer => series.reduce_mod(p)?,
        CoeffRing::ModP(r) if r == p => series.clone(),
        CoeffRing::ModP(r) => {
            return Err(Error::RingMismatch(format!("F_{r}"), format!("F_{p}")));
        }
    };
    Ok(reduced.coeffs().iter().map(|&c| c as u64).collect())
}

pub fn embed(series: &TruncatedSeries, basis: &Arc<QExpBasis>) -> Result<EmbeddedForm> {
    let (level, p) = (basis.level(), basis.p());
    if series.prec() < basis.nterms() {
        return Err(Error::InsufficientPrecision { have: series.prec(), need: basis.nterms() });
    }
    let coeffs = series_mod_p(series, p)?;
    if coeffs[0] != 0 {
        return Err(Error::NotInSpan { level, p, reason: format!("constant term {} is nonzero", coeffs[0]) });
    }
    let coords = basis
        .coordinates(&coeffs[..basis.nterms()])
        .map_err(|reason| Error::NotInSpan { level, p, reason })?;
    Ok(EmbeddedForm { coords, basis: Arc::clone(basis) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceOrder {
    /// `F + (F|W_N)|U_N`
    AtkinLehnerFirst,
    /// `F + (F|U_N)|W_N`
    UFirst,
}

/// The trace from level `N q` to level `q` as a matrix on the level-`Nq`
/// basis, with the operator order fixed by testing on the Eisenstein series.
#[derive(Debug, Clone)]
pub struct TraceOperator {
    pub n: u64,
    pub order: TraceOrder,
    matrix: MatFp,
    upper: Arc<QExpBasis>,
    lower: Arc<QExpBasis>,
}

impl TraceOperator {
    pub fn new(upper: &Arc<QExpBasis>, lower: &Arc<QExpBasis>, n: u64) -> Result<Self> {
        let (m, q, p) = (upper.level(), lower.level(), upper.p());
        if lower.p() != p {
            return Err(Error::RingMismatch(format!("F_{p}"), format!("F_{}", lower.p())));
        }
        if !is_prime(n) || m != n * q || gcd(n, q) != 1 {
            return Err(Error::NotExactDivisor { n, level: m });
        }
        let w = upper.transport_atkin_lehner(n)?;
        let u = upper.transport_hecke(n)?;
        let id = identity_mod(upper.dim());
        let candidates = [
            (TraceOrder::AtkinLehnerFirst, mat_add_mod(&id, &mat_mul_mod(&w, &u, p), p)),
            (TraceOrder::UFirst, mat_add_mod(&id, &mat_mul_mod(&u, &w, p), p)),
        ];
        let e = embed(&eisenstein_series_level_q(q, p, upper.nterms())?, upper)?;
        let mut found = None;
        for (order, matrix) in candidates {
            let image = e.apply(&matrix).series();
            if embed(&image, lower).is_ok() {
                debug!("trace {m} -> {q} mod {p}: {order:?}");
                found = Some((order, matrix));
                break;
            }
        }
        let (order, matrix) = found.ok_or(Error::TraceNotOldform { from: m, to: q })?;
        Ok(TraceOperator { n, order, matrix, upper: Arc::clone(upper), lower: Arc::clone(lower) })
    }

    pub fn matrix(&self) -> &MatFp {
        &self.matrix
    }

    pub fn apply(&self, form: &EmbeddedForm) -> Result<TruncatedSeries> {
        if form.level() != self.upper.level() || form.p() != self.upper.p() {
            return Err(Error::NotInSpan {
                level: self.upper.level(),
                p: self.upper.p(),
                reason: format!("form lives at level {} mod {}", form.level(), form.p()),
            });
        }
        Ok(form.apply(&self.matrix).series())
    }

    /// The trace of `form`, embedded at level `q`.
    pub fn apply_embedded(&self, form: &EmbeddedForm) -> Result<EmbeddedForm> {
        embed(&self.apply(form)?, &self.lower)
    }
}

/// Trace of a level `N q` form down to level `q`.
pub fn trace_down(form: &EmbeddedForm, n: u64) -> Result<TruncatedSeries> {
    let upper = form.basis();
    let q = upper.level() / n;
    let lower = qexp_basis(q, upper.p(), upper.nterms())?;
    TraceOperator::new(upper, &lower, n)?.apply(form)
}

/// Idempotent onto the Eisenstein component of S_2(Gamma_0(q)) mod p.
#[derive(Debug, Clone)]
pub struct EisensteinProjector {
    pub q: u64,
    pub p: u64,
    pub matrix: MatFp,
    pub aux_primes: Vec<u64>,
    pub rank: usize,
}

impl EisensteinProjector {
    pub fn apply(&self, form: &EmbeddedForm) -> EmbeddedForm {
        form.apply(&self.matrix)
    }
}

/// Auxiliary primes in increasing order, skipping `p`, `q` and `skip`.
pub fn default_aux_primes(q: u64, p: u64, skip: &[u64]) -> Vec<u64> {
    (2..=AUX_PRIME_BOUND)
        .filter(|&l| is_prime(l) && l != p && l != q && !skip.contains(&l))
        .collect()
}

/// The generalized `(l + 1)`-eigenspace idempotent of `T_l`, and the
/// multiplicity of `l + 1` in its characteristic polynomial.
fn eigenspace_idempotent(t: &MatFp, lambda: u64, p: u64) -> (MatFp, usize) {
    let chi = charpoly_mod(t, p);
    let root = linear_power(lambda, 1, p);
    let mut h = chi;
    let mut m = 0;
    loop {
        let (quo, rem) = poly_divrem(&h, &root, p);
        if rem.iter().any(|&c| c != 0) || h.len() <= 1 {
            break;
        }
        h = quo;
        m += 1;
    }
    if m == 0 {
        return (vec![vec![0; t.len()]; t.len()], 0);
    }
    let modulus = linear_power(lambda, m, p);
    let inv = poly_inv_mod(&h, &modulus, p).expect("h is prime to (x - lambda)");
    let e = poly_mul(&h, &inv, p);
    (poly_eval_matrix(&e, t, p), m)
}

pub fn eisenstein_projector(basis: &QExpBasis, aux: &[u64]) -> Result<EisensteinProjector> {
    let (q, p) = (basis.level(), basis.p());
    let g = basis.dim();
    let mut e = identity_mod(g);
    let mut rank = g;
    let mut used = Vec::new();
    for &l in aux {
        if rank <= 1 {
            break;
        }
        let t = basis.transport_hecke(l)?;
        let lambda = (l + 1) % p;
        let (el, m) = eigenspace_idempotent(&t, lambda, p);
        if m == 0 {
            return Err(Error::MissingEisensteinEigenvalue { ell: l, eigenvalue: lambda, p });
        }
        e = mat_mul_mod(&e, &el, p);
        rank = rank_mod(&e, p);
        used.push(l);
        debug!("projector q = {q}, p = {p}: T_{l} multiplicity {m}, rank {rank}");
    }
    if rank != 1 {
        return Err(Error::EisensteinRankNotOne { q, p, rank, bound: AUX_PRIME_BOUND });
    }
    Ok(EisensteinProjector { q, p, matrix: e, aux_primes: used, rank })
}

/// Everything produced on the way to eta, for diagnostics.
#[derive(Debug, Clone)]
pub struct EtaComputation {
    pub eta: u64,
    pub nterms: usize,
    pub trace_order: TraceOrder,
    pub aux_primes: Vec<u64>,
    pub traced: EmbeddedForm,
    pub projected: EmbeddedForm,
    pub eisenstein: EmbeddedForm,
}

pub fn eta_invariant(disc: i64, p: u64, q: u64) -> Result<u64> {
    eta_invariant_detailed(disc, p, q, None).map(|c| c.eta)
}

/// As [`eta_invariant`], optionally with an explicit auxiliary-prime order.
pub fn eta_invariant_detailed(disc: i64, p: u64, q: u64, aux: Option<&[u64]>) -> Result<EtaComputation> {
    let n = disc.unsigned_abs();
    let level = n * q;
    let nterms = default_nterms(level);
    let upper = qexp_basis(level, p, nterms)?;
    let lower = qexp_basis(q, p, nterms)?;

    let g = weight_one_form(disc, nterms)?.reduce_mod(p)?;
    let big_g = g.mul(&v_operator(&g, q as usize))?;
    let embedded = embed(&big_g, &upper)?;

    let trace = TraceOperator::new(&upper, &lower, n)?;
    let traced = trace.apply_embedded(&embedded)?;

    let aux = match aux {
        Some(a) => a.to_vec(),
        None => default_aux_primes(q, p, &[n]),
    };
    let proj = eisenstein_projector(&lower, &aux)?;
    let projected = proj.apply(&traced);
    let eisenstein = embed(&eisenstein_series_level_q(q, p, nterms)?, &lower)?;
    let eta = projected.series().coeff(1) as u64;

    let expected: Vec<u64> = eisenstein.coords.iter().map(|&c| mul_mod(c, eta, p)).collect();
    if projected.coords != expected {
        return Err(Error::NotInSpan {
            level: q,
            p,
            reason: "Eisenstein component is not a multiple of the Eisenstein series".into(),
        });
    }
    Ok(EtaComputation {
        eta,
        nterms,
        trace_order: trace.order,
        aux_primes: proj.aux_primes,
        traced,
        projected,
        eisenstein,
    })
}
