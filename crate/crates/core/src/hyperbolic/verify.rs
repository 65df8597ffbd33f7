//! Executable forms of the halfspace propositions.
//!
//! Each proposition is instantiated on tuples of vertices. Tuples that
//! fail the hypotheses are skipped; every instance that satisfies them
//! is counted in `checked` and its conclusion evaluated with the ledger
//! constants. Geodesics named in a statement are the canonical geodesics
//! of [`FiniteSpace`], and nearest-point projections range over every
//! nearest point, so a statement about "a closest point" is checked for
//! all of them.
//!
//! Spaces with at most `exhaustive_limit` vertices are checked on every
//! tuple. Larger spaces are checked on `samples` tuples drawn uniformly
//! with a fixed seed, unless the full tuple space is smaller than that.
//! Statements involving the basepoint use every vertex as basepoint when
//! the space has at most `all_basepoints_limit` vertices, and vertex 0
//! otherwise.
//!
//! At `δ = 0` the hypotheses of `fellow` and `disjoint` are read with
//! strict inequalities. Their conclusions rest on separations of size
//! `K4 - K3` and `K2 - 3δ`, which vanish with `δ`, and the equality case
//! is then genuinely false (two leaves of a star and its centre).

use fixedbitset::FixedBitSet;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::constants::{constants, ConstantsLedger};
use super::delta::working_delta;
use super::halfspace::{halfspace_bits, in_halfspace};
use super::space::FiniteSpace;
use crate::seed::child_rng;

/// Coarse halfspaces are taken as `H(1, x; C) = {y : d(y, x) <= d(y, 1) + C}`,
/// which is the form used in the containment argument and agrees with
/// `H(1, x)` at `C = 0`.
pub const COARSE_HALFSPACE_CONVENTION: &str = "H(1,x;C) = {y : d(y,x) <= d(y,1) + C}";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Proposition {
    Bounded,
    Projection,
    Npp,
    Double,
    Stability,
    Close,
    Half,
    Fellow,
    Disjoint,
    Nested,
    Coarse,
}

impl Proposition {
    pub const ALL: [Proposition; 11] = [
        Proposition::Bounded,
        Proposition::Projection,
        Proposition::Npp,
        Proposition::Double,
        Proposition::Stability,
        Proposition::Close,
        Proposition::Half,
        Proposition::Fellow,
        Proposition::Disjoint,
        Proposition::Nested,
        Proposition::Coarse,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Proposition::Bounded => "bounded",
            Proposition::Projection => "projection",
            Proposition::Npp => "npp",
            Proposition::Double => "double",
            Proposition::Stability => "stability",
            Proposition::Close => "close",
            Proposition::Half => "half",
            Proposition::Fellow => "fellow",
            Proposition::Disjoint => "disjoint",
            Proposition::Nested => "nested",
            Proposition::Coarse => "coarse",
        }
    }

    fn index(self) -> u64 {
        Proposition::ALL.iter().position(|&p| p == self).unwrap() as u64
    }
}

impl std::fmt::Display for Proposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Proposition {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Proposition> {
        Proposition::ALL
            .into_iter()
            .find(|p| p.label() == s)
            .ok_or_else(|| crate::Error::InvalidArgument(format!("unknown proposition {s:?}")))
    }
}

/// One record per proposition per space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropositionReport {
    pub space_id: String,
    pub proposition: Proposition,
    pub delta: f64,
    pub checked: u64,
    pub violations: u64,
    pub witness: Option<Value>,
}

impl PropositionReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub exhaustive_limit: usize,
    pub samples: usize,
    pub seed: u64,
    pub all_basepoints_limit: usize,
    /// Overrides the computed working `δ`.
    pub delta: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> VerifyOptions {
        VerifyOptions {
            exhaustive_limit: 40,
            samples: 100_000,
            seed: 0,
            all_basepoints_limit: 12,
            delta: None,
        }
    }
}

/// Runs all eleven propositions on `space`.
pub fn verify_propositions(
    space: &FiniteSpace,
    space_id: &str,
    options: &VerifyOptions,
) -> Vec<PropositionReport> {
    let delta = options.delta.unwrap_or_else(|| working_delta(space));
    Proposition::ALL
        .iter()
        .map(|&p| verify_one(space, space_id, p, delta, options))
        .collect()
}

/// Runs a single proposition at a given `δ`.
pub fn verify_one(
    space: &FiniteSpace,
    space_id: &str,
    proposition: Proposition,
    delta: f64,
    options: &VerifyOptions,
) -> PropositionReport {
    let ctx = Ctx {
        space,
        delta,
        k: constants(delta, None, 1).expect("working delta is non-negative"),
    };
    let n = space.len();
    let bases = if n <= options.all_basepoints_limit {
        n
    } else {
        1
    };
    let dims: Vec<usize> = match proposition {
        Proposition::Double => vec![n; 4],
        Proposition::Disjoint => vec![bases, n, n],
        Proposition::Nested | Proposition::Coarse => vec![bases, n],
        _ => vec![n; 3],
    };
    let check: fn(&Ctx, &[usize], &mut Tally) = match proposition {
        Proposition::Bounded => check_bounded,
        Proposition::Projection => check_projection,
        Proposition::Npp => check_npp,
        Proposition::Double => check_double,
        Proposition::Stability => check_stability,
        Proposition::Close => check_close,
        Proposition::Half => check_half,
        Proposition::Fellow => check_fellow,
        Proposition::Disjoint => check_disjoint,
        Proposition::Nested => check_nested,
        Proposition::Coarse => check_coarse,
    };
    let exhaustive =
        n <= options.exhaustive_limit || dims.iter().product::<usize>() <= options.samples;
    let tally = if exhaustive {
        drive_exhaustive(&ctx, &dims, check)
    } else {
        let mut rng = child_rng(options.seed, proposition.index());
        let tuples: Vec<Vec<usize>> = (0..options.samples)
            .map(|_| dims.iter().map(|&d| rng.gen_range(0..d)).collect())
            .collect();
        drive_tuples(&ctx, &tuples, check)
    };
    PropositionReport {
        space_id: space_id.to_string(),
        proposition,
        delta,
        checked: tally.checked,
        violations: tally.violations,
        witness: tally.witness.map(|(_, w)| w),
    }
}

struct Ctx<'a> {
    space: &'a FiniteSpace,
    delta: f64,
    k: ConstantsLedger,
}

impl Ctx<'_> {
    /// `lhs >= rhs`, strict when `δ = 0`.
    fn at_least(&self, lhs: f64, rhs: f64) -> bool {
        if self.delta == 0.0 {
            lhs > rhs
        } else {
            lhs >= rhs
        }
    }

    fn d(&self, u: usize, v: usize) -> f64 {
        f64::from(self.space.d(u, v))
    }

    fn dset(&self, v: usize, set: &[usize]) -> f64 {
        f64::from(
            self.space
                .dist_to_set(v, set.iter().copied())
                .expect("non-empty"),
        )
    }

    fn proj(&self, z: usize, set: &[usize]) -> Vec<usize> {
        self.space.projection(z, set).expect("non-empty")
    }

    fn geo(&self, x: usize, y: usize) -> Vec<usize> {
        self.space.geodesic(x, y)
    }
}

#[derive(Default)]
struct Tally {
    checked: u64,
    violations: u64,
    /// Witness of the earliest violating tuple, keyed by tuple order.
    witness: Option<(u64, Value)>,
    order: u64,
}

impl Tally {
    fn pass(&mut self) {
        self.checked += 1;
    }

    fn fail(&mut self, witness: Value) {
        self.checked += 1;
        self.violations += 1;
        if self.witness.as_ref().is_none_or(|(k, _)| *k > self.order) {
            self.witness = Some((self.order, witness));
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        if ok {
            self.pass();
        } else {
            self.fail(witness());
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.violations += other.violations;
        self.witness = match (self.witness, other.witness) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }
}

fn drive_exhaustive(ctx: &Ctx, dims: &[usize], check: fn(&Ctx, &[usize], &mut Tally)) -> Tally {
    let inner: usize = dims[1..].iter().product();
    (0..dims[0])
        .into_par_iter()
        .map(|first| {
            let mut tally = Tally::default();
            let mut tuple = vec![0usize; dims.len()];
            tuple[0] = first;
            for i in 0..inner {
                let mut rest = i;
                for k in (1..dims.len()).rev() {
                    tuple[k] = rest % dims[k];
                    rest /= dims[k];
                }
                tally.order = (first * inner + i) as u64;
                check(ctx, &tuple, &mut tally);
            }
            tally
        })
        .reduce(Tally::default, Tally::merge)
}

fn drive_tuples(ctx: &Ctx, tuples: &[Vec<usize>], check: fn(&Ctx, &[usize], &mut Tally)) -> Tally {
    tuples
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let mut tally = Tally {
                order: i as u64,
                ..Tally::default()
            };
            check(ctx, t, &mut tally);
            tally
        })
        .reduce(Tally::default, Tally::merge)
}

fn max_pairwise(ctx: &Ctx, a: &[usize], b: &[usize]) -> (f64, usize, usize) {
    let mut best = (-1.0, a[0], b[0]);
    for &u in a {
        for &v in b {
            if ctx.d(u, v) > best.0 {
                best = (ctx.d(u, v), u, v);
            }
        }
    }
    best
}

/// For `X = [x, y]` and a shortest path `[z, p]` to `X`, every vertex
/// within `K` of both lies within `3K` of `p`.
fn check_bounded(ctx: &Ctx, t: &[usize], tally: &mut Tally) {
    let (x, y, z) = (t[0], t[1], t[2]);
    let set = ctx.geo(x, y);
    for p in ctx.proj(z, &set) {
        let path = ctx.geo(z, p);
        let bad = (0..ctx.space.len()).find(|&q| {
            let k = ctx.dset(q, &set).max(ctx.dset(q, &path));
            ctx.d(p, q) > 3.0 * k
        });
        tally.record(bad.is_none(), || {
            let q = bad.unwrap();
            json!({"x": x, "y": y, "z": z, "p": p, "q": q,
                   "d_pq": ctx.d(p, q), "k": ctx.dset(q, &set).max(ctx.dset(q, &path))})
        });
    }
}

/// `p` nearest to `z` on `[x, y]`: `[x, z]` meets the `3δ`-ball about `p`,
/// `[x, p] ∪ [p, z]` lies within `3δ` of `[x, z]`, and
/// `d(x, p) + d(p, z) - 6δ <= d(x, z)`.
fn check_projection(ctx: &Ctx, t: &[usize], tally: &mut Tally) {
    let (x, y, z) = (t[0], t[1], t[2]);
    let delta = ctx.delta;
    let side = ctx.geo(x, y);
    let xz = ctx.geo(x, z);
    for p in ctx.proj(z, &side) {
        let inequality = ctx.d(x, p) + ctx.d(p, z) - 6.0 * delta <= ctx.d(x, z);
        let meets = ctx.dset(p, &xz) <= 3.0 * delta;
        let far = ctx
            .geo(x, p)
            .into_iter()
            .chain(ctx.geo(p, z))
            .find(|&v| ctx.dset(v, &xz) > 3.0 * delta);
        tally.record(inequality && meets && far.is_none(), || {
            json!({"x": x, "y": y, "z": z, "p": p, "inequality": inequality,
                   "meets_ball": meets, "far_vertex": far})
        });
    }
}

/// Nearest points to `z` on `[x, y]` are within `6δ` of each other.
fn check_npp(ctx: &Ctx, t: &[usize], tally: &mut Tally) {
    let (x, y, z) = (t[0], t[1], t[2]);
    let ps = ctx.proj(z, &ctx.geo(x, y));
    let (d, p, q) = max_pairwise(ctx, &ps, &ps);
    tally.record(
        d <= 6.0 * ctx.delta,
        || json!({"x": x, "y": y, "z": z, "p": p, "q": q, "d_pq": d}),
    );
}

/// Projections `p` of `a` and `q` of `b` to `[x, y]` with
/// `d(p, q) > 14δ` force `d(a, b) >= d(a, p) + d(p, q) + d(q, b) - 24δ`.
fn check_double(ctx: &Ctx, t: &[usize], tally: &mut Tally) {
    let (x, y, a, b) = (t[0], t[1], t[2], t[3]);
    let side = ctx.geo(x, y);
    let pb = ctx.proj(b, &side);
    for p in ctx.proj(a, &side) {
        for &q in &pb {
            if ctx.d(p, q) <= 14.0 * ctx.delta {
                continue;
            }
            let bound = ctx.d(a, p) + ctx.d(p, q) + ctx.d(q, b) - 24.0 * ctx.delta;
            tally.record(ctx.d(a, b) >= bound, || {
                json!({"x": x, "y": y, "a": a, "b": b, "p": p, "q": q,
                       "d_ab": ctx.d(a, b), "bound": bound})
            });
        }
    }
}

/// Projecting to a subsegment `[c, d]` of `[a, b]` agrees, up to `K1`,
/// with projecting to `[a, b]` first.
fn check_stability(ctx: &Ctx, t: &[usize], tally: &mut Tally) {
    let (a, b, x) = (t[0], t[1], t[2]);
    let side = ctx.geo(a, b);
    let first = ctx.proj(x, &side);
    for i in 0..side.len() {
        for j in i..side.len() {
            let sub = &side[i..=j];
            let direct = ctx.proj(x, sub);
            let mut worst = (0.0, direct[0], direct[0]);
            for &p in &first {
                let via = ctx.proj(p, sub);
                let m = max_pairwise(ctx, &direct, &via);
                if m.0 > worst.0 {
                    worst = m;
                }
            }
            tally.record(worst.0 <= ctx.k.k1, || {
                json!({"a": a, "b": b, "x": x, "c": sub[0], "d": sub[sub.len() - 1],
                       "rho2_x": worst.1, "rho2_rho1_x": worst.2, "distance": worst.0})
            });
        }
    }
}

/// The path `[x, w] ∪ [w, y]` lies in the `K`-neighbourhood of `[x, y]`
/// for the least such `K`; projections of any `z` to the path and to the
/// geodesic are within `3K + 6δ`.
fn check_close(ctx: &Ctx, t: &[usize], tally: &mut Tally) {
    let (x, y, w) = (t[0], t[1], t[2]);
    let side = ctx.geo(x, y);
    let mut path = ctx.geo(x, w);
    path.extend_from_slice(&ctx.geo(w, y)[1..]);
    let k = path.iter().map(|&v| ctx.dset(v, &side)).fold(0.0, f64::max);
    let bound = 3.0 * k + 6.0 * ctx.delta;
    for z in 0..ctx.space.len() {
        let (d, p, q) = max_pairwise(ctx, &ctx.proj(z, &side), &ctx.proj(z, &path));
        tally.record(
            d <= bound,
            || json!({"x": x, "y": y, "w": w, "z": z, "p": p, "q": q, "k": k, "d_pq": d}),
        );
    }
}

/// `z ∈ H(x, y)` projects within `d(x, y)/2 + 3δ` of `y`; conversely a
/// projection within `d(x, y)/2 - 3δ` of `y` puts `z` in `H(x, y)`.
fn check_half(ctx: &Ctx, t: &[usize], tally: &mut Tally) {
    let (x, y, z) = (t[0], t[1], t[2]);
    let half = ctx.d(x, y) / 2.0;
    let inside = in_halfspace(ctx.space, z, x, y, 0);
    for p in ctx.proj(z, &ctx.geo(x, y)) {
        if inside {
            tally.record(ctx.d(y, p) <= half + 3.0 * ctx.delta, || {
                json!({"direction": "forward", "x": x, "y": y, "z": z, "p": p, "d_yp": ctx.d(y, p)})
            });
        }
        if ctx.d(y, p) <= half - 3.0 * ctx.delta {
            tally.record(inside, || {
                json!({"direction": "converse", "x": x, "y": y, "z": z, "p": p, "d_yp": ctx.d(y, p)})
            });
        }
    }
}

/// If `z` projects to `[x, y]` at least `d(x, y)/2 + K2` from `x`, then
/// `H(y, x)` projects to `[x, z]` within `d(x, y)/2 + K3` of `x`.
fn check_fellow(ctx: &Ctx, t: &[usize], tally: &mut Tally) {
    let (x, y, z) = (t[0], t[1], t[2]);
    let half = ctx.d(x, y) / 2.0;
    let side = ctx.geo(x, y);
    let Some(p) = ctx
        .proj(z, &side)
        .into_iter()
        .find(|&p| ctx.at_least(ctx.d(p, x), half + ctx.k.k2))
    else {
        return;
    };
    let xz = ctx.geo(x, z);
    for a in (0..ctx.space.len()).filter(|&a| in_halfspace(ctx.space, a, y, x, 0)) {
        for r in ctx.proj(a, &xz) {
            tally.record(
                ctx.d(r, x) <= half + ctx.k.k3,
                || json!({"x": x, "y": y, "z": z, "p": p, "a": a, "r": r, "d_rx": ctx.d(r, x)}),
            );
        }
    }
}

/// With `|x|, |y| >= 2 d(1, [x, y]) + K4` and `|z| >= 2 d(1, [x, y]) + K5`,
/// `H(1, z)` meets at most one of `H(1, x)` and `H(1, y)`. The three
/// points are taken distinct from the basepoint.
fn check_disjoint(ctx: &Ctx, t: &[usize], tally: &mut Tally) {
    let (o, x, y) = (t[0], t[1], t[2]);
    if x == o || y == o {
        return;
    }
    let gap = ctx.dset(o, &ctx.geo(x, y));
    if !ctx.at_least(ctx.d(o, x), 2.0 * gap + ctx.k.k4)
        || !ctx.at_least(ctx.d(o, y), 2.0 * gap + ctx.k.k4)
    {
        return;
    }
    let hx = halfspace_bits(ctx.space, o, x, 0);
    let hy = halfspace_bits(ctx.space, o, y, 0);
    for z in 0..ctx.space.len() {
        if z == o || !ctx.at_least(ctx.d(o, z), 2.0 * gap + ctx.k.k5) {
            continue;
        }
        let hz = halfspace_bits(ctx.space, o, z, 0);
        let both = !hz.is_disjoint(&hx) && !hz.is_disjoint(&hy);
        tally.record(!both, || {
            let a = hz.intersection(&hx).next();
            let b = hz.intersection(&hy).next();
            json!({"basepoint": o, "x": x, "y": y, "z": z, "in_hz_hx": a, "in_hz_hy": b})
        });
    }
}

/// For `A = k/2` and `|x| >= K6 + 4A`, the point `y` on `[1, x]` with
/// `|y| = |x| - 2K7 - 2A` satisfies `H(1, x) ⊆ H(1, y)`, and the two
/// separating-halfspace statements hold with `d(a, b) >= 2A`.
fn check_nested(ctx: &Ctx, t: &[usize], tally: &mut Tally) {
    let (o, x) = (t[0], t[1]);
    let len = ctx.d(o, x);
    let side = ctx.geo(o, x);
    let hx = halfspace_bits(ctx.space, o, x, 0);
    for k in 1.. {
        let two_a = f64::from(k);
        if len < ctx.k.k6 + 2.0 * two_a {
            break;
        }
        let ylen = len - 2.0 * ctx.k.k7 - two_a;
        if ylen < 0.0 || ylen.fract() != 0.0 {
            continue;
        }
        let y = side[ylen as usize];
        let hy = halfspace_bits(ctx.space, o, y, 0);
        let hy_rev = halfspace_bits(ctx.space, y, o, 0);
        if !hx.is_subset(&hy) {
            tally.fail(json!({"claim": "nested", "basepoint": o, "x": x, "y": y, "two_a": k}));
            continue;
        }
        // A point u of `from` with no v in `to` such that d(u, v) >= 2A
        // and `inner` ⊆ H(u, v).
        let separated = |from: &FixedBitSet, to: &FixedBitSet, inner: &FixedBitSet| {
            from.ones().find(|&u| {
                !to.ones().any(|v| {
                    ctx.d(u, v) >= two_a && inner.is_subset(&halfspace_bits(ctx.space, u, v, 0))
                })
            })
        };
        // For a in H(y,1) some b in H(1,x) has H(1,x) ⊆ H(a,b).
        if let Some(a) = separated(&hy_rev, &hx, &hx) {
            tally.fail(
                json!({"claim": "separate-a", "basepoint": o, "x": x, "y": y, "two_a": k, "a": a}),
            );
            continue;
        }
        // For b in H(1,x) some a in H(y,1) has H(y,1) ⊆ H(b,a).
        if let Some(b) = separated(&hx, &hy_rev, &hy_rev) {
            tally.fail(
                json!({"claim": "separate-b", "basepoint": o, "x": x, "y": y, "two_a": k, "b": b}),
            );
            continue;
        }
        tally.pass();
    }
}

/// For `0 <= C <= |x| - 9δ`, members `z` of `H(1, x; C)` project to
/// `[1, x]` within `|x|/2 + C/2 + 3δ` of `x`, and lie in `H(1, y)` for
/// `y` on `[1, x]` with `|y| = |x| - C - 9δ` (rounded up to a vertex).
fn check_coarse(ctx: &Ctx, t: &[usize], tally: &mut Tally) {
    let (o, x) = (t[0], t[1]);
    let len = ctx.d(o, x);
    let side = ctx.geo(o, x);
    let nine = 9.0 * ctx.delta;
    let mut c = 0i64;
    while (c as f64) <= len - nine {
        let cf = c as f64;
        let y = side[(len - cf - nine).ceil() as usize];
        for z in 0..ctx.space.len() {
            if !in_halfspace(ctx.space, z, o, x, c) {
                continue;
            }
            let in_hy = in_halfspace(ctx.space, z, o, y, 0);
            for p in ctx.proj(z, &side) {
                let close = ctx.d(p, x) <= len / 2.0 + cf / 2.0 + 3.0 * ctx.delta;
                tally.record(close && in_hy, || {
                    json!({"basepoint": o, "x": x, "c": c, "y": y, "z": z, "p": p,
                           "d_px": ctx.d(p, x), "in_h1y": in_hy})
                });
            }
        }
        c += 1;
    }
}
