"""One runner per subcommand.

A runner takes a validated config and a :class:`Context` and returns an
:class:`Outcome`: result values, inequality checks and optional CSV rows.
Random samples draw from ``default_rng([seed, i])`` so every sample is
reproducible on its own and independent of the thread schedule.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from ..holevo import SignalEnsemble, holevo_chi, mutual_information
from ..metrology import (
    MagneticFieldSpec,
    EstimationTask,
    integer_distribution,
    m_spin_scaling,
    mow_bound,
    mow_bound_check,
    multimode_bounds,
    rms_bounds_from_distribution,
    rms_heisenberg_check,
    rotation_bound_calculator,
    simulate_phase_estimation,
    simulate_rotation_estimation,
    spin_j_uniform_ball_t_err,
    uniform_phase_prior,
    wrapped_gaussian_prior,
)
from ..observables import (
    almost_periodic_entropy,
    canonical_phase_povm,
    covariant_phase_povm,
    degenerate_eur_slack,
    energy_entropy,
    eur_slack,
    gaussian_qp_state,
    mub_pair_dft,
    oscillator_energy_time_slack,
    qp_discretization,
)
from ..povm import basis_povm, projective_povm, random_povm
from ..qstate import (
    DensityOperator,
    Distribution,
    StateError,
    random_density,
    random_pure,
    random_unitary,
    shannon_entropy,
    von_neumann_entropy,
)
from ..spin import EulerGrid
from ..symmetry import (
    NumberObservable,
    SpinDecomposition,
    g_asymmetry_so3,
    g_asymmetry_u1,
    jmax_asymmetry_bound,
    mode_number,
    number_distribution,
    number_operator,
    spin_distribution,
    total_number,
)
from . import configs as C
from .serialization import density_from_json, ensemble_from_json, vector_from_json

EXACT_TOL = 1e-9
AP_TOL = 1e-2
PHASE_REF_OUTCOMES = 4096
TOL_FLOOR = 1e-10


@dataclass
class Context:
    threads: int = 1

    def map(self, fn: Callable[[int], Any], n: int) -> list:
        """``[fn(i) for i in range(n)]``, possibly on a thread pool; order is kept."""
        if self.threads <= 1 or n <= 1:
            return [fn(i) for i in range(n)]
        with ThreadPoolExecutor(max_workers=self.threads) as ex:
            return list(ex.map(fn, range(n)))


@dataclass
class Outcome:
    results: dict[str, Any]
    checks: list[dict[str, Any]]
    rows: list[tuple] | None = None
    columns: tuple[str, ...] = ("seed", "d", "M", "slack")
    tolerances: dict[str, float] = field(default_factory=dict)


def check(name: str, slack: float, tolerance: float, unit: str = "bits", seed=None) -> dict[str, Any]:
    """Inequality record; it holds when ``slack >= -tolerance``."""
    out = {"name": name, "slack": float(slack), "tolerance": float(tolerance), "unit": unit}
    out["holds"] = bool(slack >= -tolerance)
    if seed is not None:
        out["seed"] = list(seed)
    return out


def sweep_check(name: str, slacks: Sequence[float], seeds: Sequence, tolerance: float, unit: str = "bits") -> dict:
    """Worst case over a sweep, tagged with the seed of the worst sample."""
    i = int(np.argmin(slacks))
    out = check(name, slacks[i], tolerance, unit, seeds[i])
    out["samples"] = len(slacks)
    out["failures"] = int(sum(s < -tolerance for s in slacks))
    return out


def link_checks(report, prefix: str = "") -> list[dict]:
    return [check(prefix + l.name, l.slack, l.tolerance, "bits" if "L_err" not in l.name else "rad") for l in report.bound_chain]


def _rng(seed: int, *tags: int) -> np.random.Generator:
    return np.random.default_rng([seed, *tags])


def _load_density(path) -> DensityOperator:
    with open(path) as fh:
        return density_from_json(json.load(fh))


# --- chi / mutual-info -----------------------------------------------------


def run_chi(cfg: C.ChiConfig, ctx: Context) -> Outcome:
    if cfg.ensemble_file is not None:
        with open(cfg.ensemble_file) as fh:
            e = ensemble_from_json(json.load(fh))
    else:
        rank = cfg.rank if cfg.rank is None else min(cfg.rank, cfg.dim)
        states = ctx.map(lambda i: random_density(cfg.dim, rank, seed=[cfg.seed, i]), cfg.size)
        e = SignalEnsemble.uniform(states)
    chi = holevo_chi(e)
    h_x = shannon_entropy(e.prior)
    results = {
        "dim": e.dim,
        "size": len(e),
        "chi": chi,
        "prior_entropy": h_x,
        "mean_signal_entropy": float(sum(p * von_neumann_entropy(s) for p, s in zip(e.prior.probs, e.states))),
    }
    checks = [
        check("chi >= 0", chi, EXACT_TOL),
        check("chi <= H(X)", h_x - chi, EXACT_TOL),
        check("chi <= log2 d", math.log2(e.dim) - chi, EXACT_TOL),
    ]
    return Outcome(results, checks)


def _holevo_sample(cfg: C.MutualInfoConfig, i: int) -> tuple[int, float, float]:
    d = cfg.dims[i % len(cfg.dims)]
    rng = _rng(cfg.seed, i)
    e = SignalEnsemble.uniform([random_density(d, seed=rng) for _ in range(cfg.ensemble_size)])
    m = random_povm(d, cfg.outcomes, seed=rng)
    i_diff = mutual_information(e, m, form="difference")
    i_rel = mutual_information(e, m, form="relative")
    return d, holevo_chi(e) - i_diff, abs(i_diff - i_rel)


def _commuting_sample(cfg: C.MutualInfoConfig, i: int) -> tuple[int, float]:
    d = cfg.dims[i % len(cfg.dims)]
    rng = _rng(cfg.seed, 1, i)
    u = random_unitary(d, seed=rng)
    states = []
    for _ in range(cfg.ensemble_size):
        p = rng.dirichlet(np.ones(d))
        states.append(DensityOperator((u * p) @ u.conj().T))
    e = SignalEnsemble(tuple(states), Distribution(rng.dirichlet(np.ones(cfg.ensemble_size))))
    return d, abs(holevo_chi(e) - mutual_information(e, projective_povm(u)))


def run_mutual_info(cfg: C.MutualInfoConfig, ctx: Context) -> Outcome:
    rows = ctx.map(lambda i: _holevo_sample(cfg, i), cfg.samples)
    seeds = [(cfg.seed, i) for i in range(cfg.samples)]
    slacks = [r[1] for r in rows]
    checks = [
        sweep_check("I(X:Y) <= chi", slacks, seeds, cfg.tolerance),
        sweep_check("difference and relative-entropy forms agree", [-r[2] for r in rows], seeds, cfg.tolerance),
    ]
    results = {"min_slack_by_dim": {str(d): min(s for dd, s, _ in rows if dd == d) for d in sorted(set(cfg.dims))}}
    if cfg.commuting_samples:
        comm = ctx.map(lambda i: _commuting_sample(cfg, i), cfg.commuting_samples)
        cseeds = [(cfg.seed, 1, i) for i in range(cfg.commuting_samples)]
        checks.append(sweep_check("commuting ensemble saturates chi", [-g for _, g in comm], cseeds, cfg.tolerance))
        results["max_saturation_gap"] = max(g for _, g in comm)
    csv_rows = [(f"{cfg.seed}:{i}", d, cfg.outcomes, s) for i, (d, s, _) in enumerate(rows)]
    return Outcome(results, checks, csv_rows)


# --- asymmetry ---------------------------------------------------------------


def _ket_state(amplitudes, dim: int) -> DensityOperator:
    psi = vector_from_json(amplitudes)
    if psi.size != dim:
        raise StateError(f"{psi.size} amplitudes for a space of dimension {dim}")
    return DensityOperator.from_ket(psi)


def _u1_setup(cfg: C.AsymmetryConfig) -> tuple[DensityOperator, NumberObservable, dict]:
    if cfg.state == "noon":
        n = cfg.n
        dims = [n + 1, n + 1]
        psi = np.zeros((n + 1) ** 2, dtype=complex)
        psi[n * (n + 1)] += 1
        psi[n] += 1
        rho = DensityOperator.from_ket(psi)
    elif cfg.state == "number":
        dims = [max(cfg.dims[0], cfg.n + 1)]
        rho = DensityOperator.diagonal(np.eye(dims[0])[cfg.n])
    elif cfg.state == "random":
        dims = list(cfg.dims)
        rho = random_density(int(np.prod(dims)), seed=[cfg.seed, 0])
    elif cfg.state == "ket":
        if cfg.amplitudes is None:
            raise StateError("state 'ket' needs amplitudes")
        dims = list(cfg.dims)
        rho = _ket_state(cfg.amplitudes, int(np.prod(dims)))
    elif cfg.state == "file":
        if cfg.state_file is None:
            raise StateError("state 'file' needs state_file")
        dims = list(cfg.dims)
        rho = _load_density(cfg.state_file)
    else:
        raise StateError(f"state {cfg.state!r} is not a U(1) probe")
    gen = mode_number(dims, 0) if cfg.generator == "arm" and len(dims) > 1 else total_number(dims)
    return rho, gen, {"mode_dims": dims}


def _so3_setup(cfg: C.AsymmetryConfig) -> tuple[DensityOperator, SpinDecomposition]:
    if cfg.state == "spin-top":
        s = SpinDecomposition.single(cfg.two_j)
        return DensityOperator.diagonal(np.eye(cfg.two_j + 1)[0]), s
    if cfg.state in ("singlet", "singlet-one-sided"):
        psi = np.array([0, 1, -1, 0], dtype=complex)
        # one-sided: rotations act on the first qubit only, a spin-1/2 with multiplicity 2
        s = SpinDecomposition(((1, 2),)) if cfg.state == "singlet-one-sided" else SpinDecomposition.from_spins([1, 1])
        return DensityOperator.from_ket(psi), s
    s = SpinDecomposition.from_spins(cfg.spins)
    if cfg.state == "random":
        return random_density(s.dim, seed=[cfg.seed, 0]), s
    if cfg.state == "ket":
        if cfg.amplitudes is None:
            raise StateError("state 'ket' needs amplitudes")
        return _ket_state(cfg.amplitudes, s.dim), s
    if cfg.state == "file":
        if cfg.state_file is None:
            raise StateError("state 'file' needs state_file")
        return _load_density(cfg.state_file), s
    raise StateError(f"state {cfg.state!r} is not a rotation probe")


def run_asymmetry(cfg: C.AsymmetryConfig, ctx: Context) -> Outcome:
    if cfg.group == "u1":
        rho, gen, extra = _u1_setup(cfg)
        if rho.dim != gen.dim:
            raise StateError(f"state dimension {rho.dim} does not match mode dims {extra['mode_dims']}")
        a = g_asymmetry_u1(rho, gen)
        h_n = shannon_entropy(number_distribution(rho, gen))
        s_rho = von_neumann_entropy(rho)
        results = {"group": "u1", "generator": cfg.generator, "asymmetry": a, "h_number": h_n, "s_probe": s_rho, **extra}
        checks = [check("0 <= A", a, cfg.tolerance), check("A <= H(N)", h_n - a, cfg.tolerance)]
        return Outcome(results, checks)
    rho, s = _so3_setup(cfg)
    if rho.dim != s.dim:
        raise StateError(f"state dimension {rho.dim} does not match spin space dimension {s.dim}")
    a = g_asymmetry_so3(rho, s)
    pj = spin_distribution(rho, s)
    s_rho = von_neumann_entropy(rho)
    results = {
        "group": "so3",
        "blocks": [[t, m] for t, m in s.blocks],
        "asymmetry": a,
        "s_probe": s_rho,
        "spin_entropy": shannon_entropy(pj),
    }
    checks = [check("0 <= A", a, cfg.tolerance), check("A <= log2 d - S", math.log2(s.dim) - s_rho - a, cfg.tolerance)]
    try:
        two_jmax = max(t for t, _ in s.blocks)
        checks.append(check("A <= 2 log2(jmax+1) - S", jmax_asymmetry_bound(rho, s, two_jmax), cfg.tolerance))
    except StateError as exc:
        results["jmax_bound_skipped"] = str(exc)
    return Outcome(results, checks)


# --- phase-sim / rms-check ---------------------------------------------------


def _phase_probe(cfg: C.PhaseSimConfig) -> tuple[DensityOperator, NumberObservable]:
    if cfg.probe == "plus":
        return DensityOperator.from_ket([1, 1]), number_operator(2)
    if cfg.probe == "noon":
        # the two-mode NOON state stays in span{|N,0>, |0,N>}, where one arm's number is (N, 0)
        return DensityOperator.from_ket([1, 1]), NumberObservable((cfg.n, 0))
    if cfg.probe == "number":
        d = max(cfg.dim, cfg.n + 1)
        return DensityOperator.diagonal(np.eye(d)[cfg.n]), number_operator(d)
    if cfg.probe == "random":
        return random_density(cfg.dim, seed=[cfg.seed, 0]), number_operator(cfg.dim)
    if cfg.probe == "ket":
        if cfg.amplitudes is None:
            raise StateError("probe 'ket' needs amplitudes")
        psi = vector_from_json(cfg.amplitudes)
        return DensityOperator.from_ket(psi), number_operator(psi.size)
    if cfg.state_file is None:
        raise StateError("probe 'file' needs state_file")
    rho = _load_density(cfg.state_file)
    return rho, number_operator(rho.dim)


def run_phase_sim(cfg: C.PhaseSimConfig, ctx: Context) -> Outcome:
    rho, gen = _phase_probe(cfg)
    k = cfg.grid
    prior = uniform_phase_prior(k) if cfg.prior == "uniform" else wrapped_gaussian_prior(k, cfg.sigma)
    povm = covariant_phase_povm(gen, cfg.outcomes or k)
    reports = ctx.map(
        lambda i: simulate_phase_estimation(EstimationTask(rho, gen, prior, povm, cfg.estimators[i])),
        len(cfg.estimators),
    )
    checks = []
    for est, rep in zip(cfg.estimators, reports):
        for c in link_checks(rep, est + ": "):
            checks.append(check(c["name"], c["slack"], max(c["tolerance"], cfg.tolerance), c["unit"]))
    results = {"probe_dim": rho.dim, "reports": {est: rep.as_dict() for est, rep in zip(cfg.estimators, reports)}}
    return Outcome(results, checks, tolerances={"link": cfg.tolerance})


def power_law_probe(truncation: int) -> tuple[np.ndarray, np.ndarray]:
    """Weights ``(3/4) 4^-n`` on photon numbers ``2^n`` for ``n <= truncation``."""
    n = np.arange(truncation + 1)
    return 0.75 * 4.0**-n, 2**n


CLOSED_FORM_MIN_TRUNCATION = 16


def run_rms_check(cfg: C.RmsConfig, ctx: Context) -> Outcome:
    p, levels = power_law_probe(cfg.truncation)
    full = rms_bounds_from_distribution(Distribution(p / p.sum(), labels=tuple(int(x) for x in levels)))
    h_closed = math.log2(4 / 3) + 2 / 3
    p_s, lv_s = power_law_probe(cfg.sim_truncation)
    p_s = p_s / p_s.sum()
    gen = NumberObservable(tuple(int(x) for x in lv_s))
    probe = DensityOperator.from_ket(np.sqrt(p_s))
    k = cfg.grid or max(2 * int(lv_s.max()), 2)
    prior = uniform_phase_prior(k)
    povm = covariant_phase_povm(gen, k)
    reps = ctx.map(lambda i: simulate_phase_estimation(EstimationTask(probe, gen, prior, povm, cfg.estimators[i])), len(cfg.estimators))
    checks = []
    # the closed form is the untruncated series; below this cutoff the tail alone exceeds 1e-6
    if cfg.truncation >= CLOSED_FORM_MIN_TRUNCATION:
        checks.append(check("|H(N) - (log2(4/3) + 2/3)| <= 1e-6", 1e-6 - abs(full["h_number"] - h_closed), 0.0))
    per_est = {}
    for est, rep in zip(cfg.estimators, reps):
        r = rms_heisenberg_check(rep, probe, gen)
        per_est[est] = r
        tol = r["grid_tolerance"]
        checks += [
            check(f"{est}: eps > entropy bound (simulated probe)", r["entropy_slack"], tol, "rad"),
            check(f"{est}: eps > mean-number bound (simulated probe)", r["mean_slack"], tol, "rad"),
            check(f"{est}: eps > entropy bound (full probe)", r["rmse"] - full["entropy_bound"], tol, "rad"),
            check(f"{est}: eps > mean-number bound (full probe)", r["rmse"] - full["mean_bound"], tol, "rad"),
        ]
    results = {
        "full_probe": {**full, "truncation": cfg.truncation, "h_number_closed_form": h_closed},
        "simulated_probe": {"truncation": cfg.sim_truncation, "grid": k, "mean_number": float(p_s @ lv_s)},
        "estimators": per_est,
    }
    return Outcome(results, checks)


# --- rotations ------------------------------------------------------------------


def _spin_probe(kind: str, s: SpinDecomposition, seed: int) -> DensityOperator:
    if kind == "mixed":
        return DensityOperator.maximally_mixed(s.dim)
    if kind == "random":
        return random_density(s.dim, seed=[seed, 0])
    # highest weight state of the largest block
    k = int(np.argmax([t for t, _ in s.blocks]))
    return DensityOperator.from_ket(s.basis[:, s.offsets[k]])


def run_rotation_sim(cfg: C.RotationSimConfig, ctx: Context) -> Outcome:
    s = SpinDecomposition.single(cfg.two_j)
    probe = _spin_probe(cfg.probe, s, cfg.seed)
    rep = simulate_rotation_estimation(cfg.two_j, EulerGrid.cubic(cfg.grid), probe, estimator=cfg.estimator)
    return Outcome({"report": rep.as_dict()}, link_checks(rep), tolerances={"grid": rep.grid_tolerance})


def run_rotation_bounds(cfg: C.RotationBoundsConfig, ctx: Context) -> Outcome:
    s = SpinDecomposition.from_spins(cfg.spins) if cfg.spins else SpinDecomposition.single(cfg.two_j)
    probe = _spin_probe(cfg.probe, s, cfg.seed)
    spec = MagneticFieldSpec(cfg.mu, cfg.t_int, cfg.prior_radius)
    out = rotation_bound_calculator(s, probe, spec)
    two_jmax = max(t for t, _ in s.blocks)
    results: dict[str, Any] = {"blocks": [[t, m] for t, m in s.blocks], "bounds": out}
    if len(s.blocks) == 1 and cfg.probe == "top":
        results["pure_spin_uniform_ball_t_err_over_b_pi"] = spin_j_uniform_ball_t_err(two_jmax)
    results["m_spin_scaling"] = m_spin_scaling(two_jmax, range(1, cfg.scaling_max_m + 1))
    checks = [check("A <= log2 d - S", math.log2(s.dim) - out["s_probe"] - out["asymmetry"], EXACT_TOL)]
    if s.is_multiplicity_free:
        checks.append(check("A <= 2 log2(jmax+1) - S", jmax_asymmetry_bound(probe, s, two_jmax), EXACT_TOL))
    else:
        results["jmax_bound_skipped"] = "spin space has multiplicities"
    return Outcome(results, checks)


# --- multimode / Mow -------------------------------------------------------------


def run_mmode_bounds(cfg: C.MmodeConfig, ctx: Context) -> Outcome:
    if cfg.state_dims:
        rho = random_density(int(np.prod(cfg.state_dims)), seed=[cfg.seed, 0])
        b = multimode_bounds(rho, cfg.state_dims)
    elif cfg.mode_probs:
        b = multimode_bounds(mode_probs=cfg.mode_probs)
    else:
        b = multimode_bounds(mode_probs=[cfg.single_mode] * cfg.copies)
    checks = [
        check("correlated bound <= 2^-H(N_T)", b.exact - b.correlated, EXACT_TOL, "ratio"),
        check("mean-number bound <= 2^-H(N_T)", b.exact - b.mean_number, EXACT_TOL, "ratio"),
    ]
    if b.product_applicable:
        checks.append(check("product bound <= 2^-H(N_T)", b.exact - b.product, EXACT_TOL, "ratio"))
    return Outcome(b.as_dict(), checks)


def mow_family(family: str, size: int, param: float, probs=None) -> Distribution:
    if family == "explicit":
        if not probs:
            raise StateError("family 'explicit' needs probs")
        return integer_distribution(probs)
    if family == "point":
        return integer_distribution([1.0])
    if family == "uniform":
        return integer_distribution(np.ones(size))
    k = np.arange(size)
    if family == "binomial":
        logc = np.array([math.lgamma(size) - math.lgamma(i + 1) - math.lgamma(size - i) for i in k])
        w = np.exp(logc + k * math.log(param) + (size - 1 - k) * math.log1p(-param))
        return integer_distribution(w)
    return integer_distribution(param**k)


def run_mow_check(cfg: C.MowConfig, ctx: Context) -> Outcome:
    d = mow_family(cfg.family, cfg.size, cfg.param, cfg.probs)
    slack = mow_bound_check(d)
    results = {"support": len(d), "slack": slack, "entropy": shannon_entropy(d), "variance": d.variance(), "bound": mow_bound(d.variance())}
    return Outcome(results, [check("H <= 1/2 log2(2 pi e (Var + 1/12))", slack, cfg.tolerance)])


# --- EUR sweeps --------------------------------------------------------------------


def _sweep(ctx: Context, cfg: C.EurSweepConfig, dim: int, fn: Callable[[DensityOperator], float]) -> list[float]:
    return ctx.map(lambda i: fn(random_density(dim, seed=[cfg.seed, i])), cfg.samples)


def run_eur_sweep(cfg: C.EurSweepConfig, ctx: Context) -> Outcome:
    d = cfg.dim
    seeds = [(cfg.seed, i) for i in range(cfg.samples)]
    tol = cfg.tolerance
    rows: list[tuple] = []
    checks: list[dict] = []
    results: dict[str, Any] = {"pair": cfg.pair}

    def emit(label, m, slacks, t, unit="bits"):
        rows.extend((f"{cfg.seed}:{i}", d, m, s) for i, s in enumerate(slacks))
        checks.append(sweep_check(label, slacks, seeds, t, unit))

    if cfg.pair == "mub":
        tol = tol or EXACT_TOL
        pair = mub_pair_dft(d)
        pa, pb = pair.povm_a(), pair.povm_b()
        log2c = math.log2(d)
        emit("H(A) + H(B) >= log2 d + S", d, _sweep(ctx, cfg, d, lambda r: eur_slack(r, pa, pb, log2c)), tol)
        eig = [abs(eur_slack(DensityOperator.diagonal(np.eye(d)[a]), pa, pb, log2c)) for a in range(d)]
        mixed = abs(eur_slack(DensityOperator.maximally_mixed(d), pa, pb, log2c))
        checks.append(check("equality for A eigenstates", -max(eig), tol))
        checks.append(check("equality for I/d", -mixed, tol))
    elif cfg.pair == "number-phase":
        ref = _sweep(ctx, cfg, d, lambda r, p=canonical_phase_povm(d, PHASE_REF_OUTCOMES): eur_slack(r, basis_povm(d), p, math.log2(2 * math.pi)))
        seq = []
        for m in cfg.outcomes:
            povm = canonical_phase_povm(d, m)
            slacks = _sweep(ctx, cfg, d, lambda r: eur_slack(r, basis_povm(d), povm, math.log2(2 * math.pi)))
            measured = max(abs(a - b) for a, b in zip(slacks, ref))
            t = tol or max(measured, TOL_FLOOR)
            seq.append({"M": m, "tolerance": measured, "min_slack": min(slacks)})
            emit(f"H(N) + H(Phi) >= log2 2pi + S  [M={m}]", m, slacks, t)
        results["reference_outcomes"] = PHASE_REF_OUTCOMES
        results["tolerance_sequence"] = seq
        for a, b in zip(seq, seq[1:]):
            if b["M"] == 2 * a["M"]:
                bound = max(a["tolerance"] / 2, TOL_FLOOR)
                checks.append(check(f"tolerance halves from M={a['M']} to M={b['M']}", bound - b["tolerance"], 0.0))
    elif cfg.pair == "qp":
        tol = tol or EXACT_TOL
        q, p = qp_discretization(d, cfg.length)
        emit("H(Q) + H(P) >= log2 2pi hbar + S", d, _sweep(ctx, cfg, d, lambda r: eur_slack(r, q, p, math.log2(2 * math.pi))), tol)
        g = gaussian_qp_state(d, cfg.length, math.sqrt(0.5))
        h_sum = eur_slack(g, q, p, 0.0)
        target = math.log2(math.e * math.pi)
        results["gaussian"] = {"h_sum": h_sum, "log2_e_pi_hbar": target, "relative_gap": abs(h_sum - target) / target}
        checks.append(check("Gaussian H(Q) + H(P) within 1% of log2(e pi hbar)", 0.01 - abs(h_sum - target) / target, 0.0, "ratio"))
        checks.append(check("Gaussian H(Q) + H(P) >= log2 2pi hbar", h_sum - math.log2(2 * math.pi), tol))
    elif cfg.pair == "degenerate":
        tol = tol or EXACT_TOL
        gen = NumberObservable.from_diagonal(np.repeat(np.arange(d), cfg.aux_dim))
        for m in cfg.outcomes:
            povm = covariant_phase_povm(gen, m)
            slacks = ctx.map(lambda i: degenerate_eur_slack(random_density(gen.dim, seed=[cfg.seed, i]), gen, povm), cfg.samples)
            emit(f"degenerate number-phase relation [M={m}]", m, slacks, tol)
    elif cfg.pair == "oscillator":
        tol = tol or EXACT_TOL
        for m in cfg.outcomes:
            slacks = _sweep(ctx, cfg, d, lambda r: oscillator_energy_time_slack(r, cfg.omega, m))
            emit(f"H(E) + H(T) >= log2 tau + S [M={m}]", m, slacks, tol)
    else:
        tol = tol or AP_TOL
        n = len(cfg.energies)

        def ap(i):
            rho = random_pure(n, seed=[cfg.seed, i])
            return energy_entropy(rho.matrix, n) + almost_periodic_entropy(rho.matrix, cfg.energies, cfg.window)

        slacks = ctx.map(ap, cfg.samples)
        rows.extend((f"{cfg.seed}:{i}", n, "", s) for i, s in enumerate(slacks))
        checks.append(sweep_check("H(E) + H_ap >= 0", slacks, seeds, tol))
        results["window"] = cfg.window
    results["min_slack"] = min(r[3] for r in rows)
    return Outcome(results, checks, rows)


RUNNERS: dict[str, Callable[[Any, Context], Outcome]] = {
    "chi": run_chi,
    "mutual-info": run_mutual_info,
    "asymmetry": run_asymmetry,
    "phase-sim": run_phase_sim,
    "rotation-sim": run_rotation_sim,
    "rotation-bounds": run_rotation_bounds,
    "mmode-bounds": run_mmode_bounds,
    "eur-sweep": run_eur_sweep,
    "mow-check": run_mow_check,
    "rms-check": run_rms_check,
}
