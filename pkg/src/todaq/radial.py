"""Connection problem for the symmetry-reduced (unmodified) affine Toda ODEs.

The radial fields y_i(t) (sum zero, cyclic index) satisfy

    y_i'' + y_i'/t = exp(2 y_i - 2 y_{i-1}) - exp(2 y_{i+1} - 2 y_i)

with the small-t behaviour y_i ~ kappa_i ln t + b_i, kappa_i = n - i - g_{n-i},
and the decaying vacuum y_i -> 0 as t -> infinity.  shoot_connection determines
the n-1 independent constants b_i by Newton iteration on the coefficients of
the growing Bessel modes at t_max, which is the numerically meaningful version
of matching onto the vacuum's stable manifold.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh
from scipy.special import iv, kv

from .errors import BlowUp, DomainError, SeriesDiverged, ShootingDiverged
from .jets import Jet, radial_taylor
from .params import TodaParams, validate

logger = logging.getLogger(__name__)

_EXP_KEY_DIGITS = 9   # rounding for power-series exponent dictionary keys


def kappa_exponents(params: TodaParams) -> np.ndarray:
    """Leading log coefficients kappa_i = n - i - g_{n-i} (i = 1..n)."""
    n, g = params.n, params.g
    return np.array([n - i - g[n - i] for i in range(1, n + 1)], dtype=float)


def radial_rhs(params: TodaParams, t: float, state: np.ndarray) -> np.ndarray:
    """Full-state RHS: state = (y_1..y_n, y_1'..y_n') -> (y', y'').

    Preserves sum(y) = 0 exactly when the state starts on that slice; the
    production solver evolves n-1 fields and reconstructs the last one.
    """
    if t <= 0:
        raise DomainError(f"radial RHS needs t > 0, got t = {t!r}")
    n = params.n
    y = np.asarray(state[:n])
    yp = np.asarray(state[n:])
    links = np.exp(2.0 * (y - np.roll(y, 1)))          # links[i] = exp(2y_i - 2y_{i-1})
    ypp = -yp / t + links - np.roll(links, -1)
    return np.concatenate([yp, ypp])


def coupling_jets(params: TodaParams, jets: list[Jet]) -> list[Jet]:
    """Exponential part of y'' as jets (the -y'/t term excluded); cyclic links."""
    n = params.n
    links = [(2.0 * (jets[i] - jets[i - 1])).exp() for i in range(n)]
    return [links[i] - links[(i + 1) % n] for i in range(n)]


def _full_b(params: TodaParams, b) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    if len(b) == params.n - 1:
        return np.concatenate([b, [-b.sum()]])
    if len(b) == params.n:
        if abs(b.sum()) > 1e-9:
            raise DomainError(f"b must sum to zero, got sum {b.sum()!r}")
        return b
    raise DomainError(f"b must have length n or n-1, got {len(b)}")


# ---------------------------------------------------------------------------
# small-t power series
# ---------------------------------------------------------------------------

def _series_shells(params: TodaParams, b_full: np.ndarray, shells: int,
                   t_eval: float | None = None):
    """Correction series u_i(t) = sum c_e t^e as exponent->coefficient dicts.

    Built by iterating the response map of u'' + u'/t = forcing; every
    response exponent is strictly positive thanks to the ordering and
    affine-gap invariants, so the iteration adds shells of increasing powers.
    Terms with t_eval^e below double rounding are pruned.
    """
    n = params.n
    kap = kappa_exponents(params)
    link_exp = 2.0 * (kap - np.roll(kap, 1))          # exponent of t in link i
    link_amp = np.exp(2.0 * (b_full - np.roll(b_full, 1)))
    e_cut = shells * (np.max(link_exp) + 2.0) + 1e-9
    if t_eval is not None and t_eval < 1.0:
        # the series is only used at t <= t_eval; higher powers cannot matter
        e_cut = min(e_cut, 20.0 / -math.log10(t_eval))
    if np.min(link_exp) + 2.0 <= 1e-12:
        raise SeriesDiverged("response exponents not positive; g too close to a degeneration")

    def key(e):
        return round(e, _EXP_KEY_DIGITS)

    def series_exp(d):
        # exp(series with positive exponents), truncated at e_cut
        out = {0.0: 1.0}
        term = {0.0: 1.0}
        for k in range(1, shells + 2):
            new = {}
            for e1, c1 in term.items():
                for e2, c2 in d.items():
                    e = key(e1 + e2)
                    if e <= e_cut:
                        new[e] = new.get(e, 0.0) + c1 * c2
            if not new:
                break
            term = new
            for e, c in term.items():
                out[e] = out.get(e, 0.0) + c / math.factorial(k)
        return out

    u = [dict() for _ in range(n)]
    for _ in range(shells):
        new_u = []
        forcing = []
        for i in range(n):
            diff = {}
            for e, c in u[i].items():
                diff[e] = diff.get(e, 0.0) + 2.0 * c
            for e, c in u[i - 1].items():
                diff[e] = diff.get(e, 0.0) - 2.0 * c
            ex = series_exp(diff)
            forcing.append({key(e + link_exp[i]): link_amp[i] * c for e, c in ex.items()})
        for i in range(n):
            rhs = dict(forcing[i])
            for e, c in forcing[(i + 1) % n].items():
                rhs[e] = rhs.get(e, 0.0) - c
            resp = {}
            for e, c in rhs.items():
                e2 = key(e + 2.0)
                if e2 <= e_cut and abs(c) > 0:
                    resp[e2] = resp.get(e2, 0.0) + c / (e + 2.0) ** 2
            new_u.append(resp)
        if all(
            set(a) == set(bb) and all(abs(a[e] - bb[e]) < 1e-16 for e in a)
            for a, bb in zip(new_u, u)
        ):
            break
        u = new_u
    return u


def small_t_series(params: TodaParams, b, t: float, order: int = 3,
                   series_tol: float = 1e-12):
    """Truncated small-t expansion: (y, y') at t from log terms plus power corrections.

    order counts correction shells; order=0 returns the pure logarithmic
    leading behaviour.  Raises SeriesDiverged when the last retained shell
    contributes more than series_tol at the requested t.
    """
    validate(params)
    if t <= 0:
        raise DomainError("small_t_series needs t > 0")
    b_full = _full_b(params, b)
    kap = kappa_exponents(params)
    y = kap * math.log(t) + b_full
    yp = kap / t
    if order > 0:
        u = _series_shells(params, b_full, order, t_eval=t)
        u_prev = (_series_shells(params, b_full, order - 1, t_eval=t)
                  if order > 1 else [dict()] * params.n)
        last_shell = 0.0
        for i in range(params.n):
            for e, c in u[i].items():
                y[i] += c * t**e
                yp[i] += c * e * t ** (e - 1.0)
                if abs(c - u_prev[i].get(e, 0.0)) > 0:
                    last_shell = max(last_shell, abs(c - u_prev[i].get(e, 0.0)) * t**e)
        if last_shell > series_tol:
            raise SeriesDiverged(
                f"last series shell contributes {last_shell:.3e} > series_tol at t = {t:.3e}"
            )
    return y, yp


def auto_series_order(params: TodaParams, b, t: float, series_tol: float = 1e-12,
                      max_order: int = 8, margin: float = 1e-3) -> int:
    """Smallest shell count whose final shell is below series_tol at t.

    The returned order targets margin*series_tol so that moderate changes of b
    during shooting stay inside the gate.
    """
    for order in range(1, max_order + 1):
        try:
            small_t_series(params, b, t, order=order, series_tol=margin * series_tol)
            return order
        except SeriesDiverged:
            continue
    raise SeriesDiverged(f"series does not reach tol {series_tol} at t = {t}")


def a2_eta_coefficients(params: TodaParams, b_eta) -> dict[str, float]:
    """First correction coefficients c1, d1, e1, f1 of the modified-field series (n = 3).

    b_eta = (b1, b3) are the constant terms of eta_1, eta_3 in the
    modified-field normalization.
    """
    if params.n != 3:
        raise DomainError("a2_eta_coefficients is specific to n = 3")
    g0, _, g2 = params.g
    b1, b3 = b_eta
    s6m = params.s ** (6.0 * params.M)
    c1 = s6m * math.exp(2 * b1 - 2 * b3) / (2.0 * (3.0 + g0 - g2) ** 2)
    d1 = math.exp(-4 * b1 - 2 * b3) / (2.0 * (g0 + 2 * g2 - 3.0) ** 2)
    e1 = math.exp(4 * b3 + 2 * b1) / (2.0 * (3.0 - 2 * g0 - g2) ** 2)
    return {"c1": c1, "d1": d1, "e1": e1, "f1": c1}


def b_radial_to_eta(params: TodaParams, b_rad) -> np.ndarray:
    """Translate radial constants b_i to the modified-field constants.

    eta_i = y_i - shift_i*ln(p pbar) with shift_i = (n-(2i-1))/(4n); near the
    origin t ~ sqrt(2) s^M rho and ln(p pbar) -> ln(s^{2nM}), which moves the
    additive constants.
    """
    n, M, s = params.n, params.M, params.s
    b_full = _full_b(params, b_rad)
    kap = kappa_exponents(params)
    shift = np.array([(n - (2 * i - 1)) / (4.0 * n) for i in range(1, n + 1)])
    return b_full + kap * math.log(math.sqrt(2.0) * s**M) - shift * 2.0 * n * M * math.log(s)


# ---------------------------------------------------------------------------
# shooting solver
# ---------------------------------------------------------------------------

def toda_mass_matrix(params: TodaParams) -> np.ndarray:
    """Linearization of the coupling around the vacuum: circulant [4, -2, 0.., -2]."""
    n = params.n
    A = 4.0 * np.eye(n)
    for i in range(n):
        A[i, (i - 1) % n] -= 2.0
        A[i, (i + 1) % n] -= 2.0
    return A


def _sum_zero_basis(n: int) -> np.ndarray:
    """Orthonormal basis (columns) of the sum-zero subspace of R^n."""
    ones = np.ones((n, 1)) / math.sqrt(n)
    full = np.eye(n) - ones @ ones.T
    q, r = np.linalg.qr(full)
    cols = [q[:, j] for j in range(n) if abs(r[j, j]) > 1e-10]
    return np.column_stack(cols[: n - 1])


def default_t_max(params: TodaParams, decay_exponent: float = 23.0) -> float:
    """t_max with the slowest vacuum mode decayed to ~exp(-decay_exponent)."""
    m1 = 2.0 * math.sqrt(2.0) * math.sin(math.pi / params.n)
    return decay_exponent / m1


@dataclass
class RadialSolution:
    """Radial connection solution with dense interpolation and matched constants.

    Evaluation outside [t_min, t_max] falls back to the small-t series and the
    vacuum respectively, so field maps may be queried at any t > 0.
    """

    params: TodaParams
    b: np.ndarray
    t_min: float
    t_max: float
    grid: np.ndarray
    y: np.ndarray            # (n, len(grid))
    yp: np.ndarray           # (n, len(grid))
    shooting_residual: float
    series_order: int
    series_tol: float
    interpolant: object = field(repr=False, default=None)

    def eval(self, t) -> tuple[np.ndarray, np.ndarray]:
        """(y, y') at scalar or array t > 0, extended by series and vacuum."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(t <= 0):
            raise DomainError("t must be positive")
        n = self.params.n
        y = np.zeros((n, t.size))
        yp = np.zeros((n, t.size))
        lo = t < self.t_min
        hi = t > self.t_max
        mid = ~(lo | hi)
        if np.any(mid):
            st = self.interpolant(t[mid])
            nred = n - 1
            y[:nred, mid] = st[:nred]
            y[nred, mid] = -st[:nred].sum(axis=0)
            yp[:nred, mid] = st[nred:]
            yp[nred, mid] = -st[nred:].sum(axis=0)
        for idx in np.nonzero(lo)[0]:
            ys, yps = small_t_series(self.params, self.b, float(t[idx]),
                                     order=self.series_order, series_tol=self.series_tol)
            y[:, idx], yp[:, idx] = ys, yps
        # above t_max the vacuum is exact to better than the match tolerance
        return y, yp

    def eval_scalar(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        y, yp = self.eval([t])
        return y[:, 0], yp[:, 0]

    def taylor(self, t0: float, order: int) -> list[Jet]:
        """Taylor jets of every field around t0 (exact ODE recursion from (y, y'))."""
        y0, yp0 = self.eval_scalar(t0)
        return radial_taylor(lambda js: coupling_jets(self.params, js), t0, y0, yp0, order)

    def t_vacuum(self, tol: float) -> float:
        """Smallest grid t beyond which max(|y|, |y'|) stays below tol."""
        mag = np.maximum(np.abs(self.y).max(axis=0), np.abs(self.yp).max(axis=0))
        below = mag <= tol
        for i in range(len(self.grid)):
            if below[i:].all():
                return float(self.grid[i])
        return float(self.t_max)


def _integrate_reduced(params: TodaParams, b, t_min, t_max, ode_tol, blowup_cap,
                       series_order, series_tol, dense=False):
    n = params.n
    for order in range(series_order, series_order + 4):
        try:
            y0, yp0 = small_t_series(params, b, t_min, order=order, series_tol=series_tol)
            break
        except SeriesDiverged:
            if order == series_order + 3:
                raise
    state0 = np.concatenate([y0[: n - 1], yp0[: n - 1]])

    def rhs(t, st):
        y = np.empty(n)
        y[: n - 1] = st[: n - 1]
        y[n - 1] = -y[: n - 1].sum()
        links = np.exp(2.0 * (y - np.roll(y, 1)))
        acc = links - np.roll(links, -1)
        return np.concatenate([st[n - 1:], -st[n - 1:] / t + acc[: n - 1]])

    # blow-ups are logarithmic (y ~ ln(t - t*)), so a large fixed cap would
    # never trigger before step collapse; cap just above the legal envelope
    env = max(np.abs(y0).max(), 1.0)
    cap_eff = min(blowup_cap, 1.2 * env + 3.0)

    def blowup(t, st):
        yy = np.abs(st[: n - 1]).max()
        return cap_eff - max(yy, abs(st[: n - 1].sum()))

    blowup.terminal = True
    sol = solve_ivp(rhs, (t_min, t_max), state0, method="DOP853",
                    rtol=ode_tol, atol=1e-14, dense_output=dense, events=blowup)
    if sol.status == 1:
        raise BlowUp(float(sol.t_events[0][0]))
    if not sol.success:
        # step collapse happens when the solution leaves the matched branch
        raise BlowUp(float(sol.t[-1]))
    return sol


def _integrate_variational(params: TodaParams, b, t_min, t_max, ode_tol, blowup_cap,
                           series_order, series_tol, fd_step):
    """Integrate state and its derivatives w.r.t. the reduced b (variational system).

    Finite differences on the trajectory blow up at long horizons because
    perturbations grow like exp(m1 t); the linearized flow has no such
    problem, so the Newton Jacobian comes from here.
    """
    n = params.n
    m = n - 1
    for order in range(series_order, series_order + 4):
        try:
            y0, yp0 = small_t_series(params, b, t_min, order=order, series_tol=series_tol)
            break
        except SeriesDiverged:
            if order == series_order + 3:
                raise
    state0 = np.concatenate([y0[:m], yp0[:m]])
    phi0 = np.empty((2 * m, m))
    for j in range(m):
        bp, bm = np.array(b, float), np.array(b, float)
        bp[j] += fd_step
        bp[-1] -= fd_step
        bm[j] -= fd_step
        bm[-1] += fd_step
        yp_, ypp_ = small_t_series(params, bp, t_min, order=order, series_tol=np.inf)
        ym_, ypm_ = small_t_series(params, bm, t_min, order=order, series_tol=np.inf)
        phi0[:, j] = np.concatenate([(yp_ - ym_)[:m], (ypp_ - ypm_)[:m]]) / (2 * fd_step)

    reduce_mat = np.vstack([np.eye(m), -np.ones((1, m))])

    def rhs(t, st):
        base = st[: 2 * m]
        phi = st[2 * m:].reshape(2 * m, m)
        y = reduce_mat @ base[:m]
        links = np.exp(2.0 * (y - np.roll(y, 1)))
        acc = links - np.roll(links, -1)
        dbase = np.concatenate([base[m:], -base[m:] / t + acc[:m]])
        # d acc_i / d y_k (full fields), then reduce
        Jfull = np.zeros((n, n))
        for i in range(n):
            Jfull[i, i] += 2 * links[i] + 2 * links[(i + 1) % n]
            Jfull[i, (i - 1) % n] -= 2 * links[i]
            Jfull[i, (i + 1) % n] -= 2 * links[(i + 1) % n]
        Jred = (Jfull @ reduce_mat)[:m]
        dphi = np.empty_like(phi)
        dphi[:m] = phi[m:]
        dphi[m:] = -phi[m:] / t + Jred @ phi[:m]
        return np.concatenate([dbase, dphi.reshape(-1)])

    env = max(np.abs(y0).max(), 1.0)
    cap_eff = min(blowup_cap, 1.2 * env + 3.0)

    def blowup(t, st):
        yy = np.abs(st[:m]).max()
        return cap_eff - max(yy, abs(st[:m].sum()))

    blowup.terminal = True
    init = np.concatenate([state0, phi0.reshape(-1)])
    sol = solve_ivp(rhs, (t_min, t_max), init, method="DOP853",
                    rtol=ode_tol, atol=1e-14, events=blowup)
    if sol.status == 1:
        raise BlowUp(float(sol.t_events[0][0]))
    if not sol.success:
        raise BlowUp(float(sol.t[-1]))
    endt = sol.y[:, -1]
    return endt[: 2 * m], endt[2 * m:].reshape(2 * m, m)


def _growing_mode_amplitudes(params: TodaParams, yv, ypv, t_max, modes):
    """Coefficients of the I0(m t) modes at t_max, scaled to their value there."""
    basis, masses = modes
    u = basis.T @ yv
    up = basis.T @ ypv
    out = np.empty(len(masses))
    for k, m in enumerate(masses):
        x = m * t_max
        i0, k0 = iv(0, x), kv(0, x)
        i1, k1 = iv(1, x), -kv(1, x)          # I0' = I1, K0' = -K1
        mat = np.array([[i0, k0], [m * i1, m * k1]])
        ci, _ck = np.linalg.solve(mat, np.array([u[k], up[k]]))
        out[k] = ci * i0
    return out


def shoot_connection(params: TodaParams, t_min: float = 1e-3, t_max: float | None = None,
                     *, ode_tol: float = 1e-12, match_tol: float = 1e-6,
                     blowup_cap: float = 40.0, max_iter: int = 40,
                     fd_step: float = 1e-6, series_tol: float = 1e-12,
                     seed_b=None, grid_points: int = 1600,
                     _allow_continuation: bool = True) -> RadialSolution:
    """Solve the radial connection problem, returning the matched RadialSolution.

    Newton iteration runs on the map b -> growing-Bessel-mode amplitudes at
    t_max (n-1 equations for n-1 unknowns); damping halves the step until the
    residual decreases.  On failure the solver retries from perturbed seeds
    and finally by continuation in g from the symmetric point g_j = j.
    """
    validate(params)
    n = params.n
    if not (0 < t_min < (t_max or default_t_max(params))):
        raise DomainError("need 0 < t_min < t_max")
    if t_max is None:
        t_max = default_t_max(params)

    A = toda_mass_matrix(params)
    basis = _sum_zero_basis(n)
    w2, vecs = eigh(basis.T @ A @ basis)
    masses = np.sqrt(w2)
    modes = (basis @ vecs, masses)

    series_order = auto_series_order(params, np.zeros(n), t_min, series_tol=series_tol)

    def shoot(bred, horizon, rtol):
        b = np.concatenate([bred, [-bred.sum()]])
        sol = _integrate_reduced(params, b, t_min, horizon, rtol, blowup_cap,
                                 series_order, series_tol)
        st = sol.y[:, -1]
        yv = np.empty(n)
        yv[: n - 1] = st[: n - 1]
        yv[n - 1] = -yv[: n - 1].sum()
        ypv = np.empty(n)
        ypv[: n - 1] = st[n - 1:]
        ypv[n - 1] = -ypv[: n - 1].sum()
        return _growing_mode_amplitudes(params, yv, ypv, horizon, modes)

    reduce_mat = np.vstack([np.eye(n - 1), -np.ones((1, n - 1))])

    def shoot_with_jacobian(bred, horizon, rtol):
        b = np.concatenate([bred, [-bred.sum()]])
        base, phi = _integrate_variational(params, b, t_min, horizon, rtol, blowup_cap,
                                           series_order, series_tol, fd_step)
        m = n - 1
        yv = reduce_mat @ base[:m]
        ypv = reduce_mat @ base[m:]
        G = _growing_mode_amplitudes(params, yv, ypv, horizon, modes)
        J = np.empty((m, m))
        for j in range(m):
            dyv = reduce_mat @ phi[:m, j]
            dypv = reduce_mat @ phi[m:, j]
            J[:, j] = _growing_mode_amplitudes(params, dyv, dypv, horizon, modes)
        return G, J

    def newton(b0, horizon, rtol, tol_res, soft_floor):
        # soft_floor: residual considered converged-at-noise-floor when the
        # damped step can no longer reduce it (integration noise amplified by
        # the growing modes bounds what is reachable at a given horizon)
        b = b0.copy()
        history = []
        for it in range(max_iter):
            try:
                G, J = shoot_with_jacobian(b, horizon, rtol)
            except BlowUp as exc:
                raise ShootingDiverged("Newton iterate blew up", history) from exc
            res = np.abs(G).max()
            history.append(res)
            if res < tol_res:
                return b, res, history
            step = np.linalg.solve(J, -G)
            lam = 1.0
            for _ in range(12):
                try:
                    G_new = shoot(b + lam * step, horizon, rtol)
                except BlowUp:
                    lam *= 0.5
                    continue
                if np.abs(G_new).max() < res:
                    break
                lam *= 0.5
            else:
                if res < soft_floor:
                    return b, res, history
                raise ShootingDiverged("damping failed to reduce the residual", history)
            b = b + lam * step
        res = np.abs(shoot(b, horizon, rtol)).max()
        if res < soft_floor:
            return b, res, history
        raise ShootingDiverged(f"Newton did not converge; final residual {res:.3e}", history)

    def march(seed):
        # growing modes amplify errors by ~exp(m1 * span), so match at a
        # sequence of horizons, warm-starting b each time; intermediate
        # horizons run at reduced tolerance, the final one at ode_tol
        m1 = masses.min()
        rtol_mid = max(ode_tol, 1e-9)
        try:
            shoot(seed, t_max, rtol_mid)
            return newton(seed, t_max, ode_tol, 1e-12, 5e-11)   # survives: no marching
        except BlowUp:
            pass
        horizon = min(t_max, 6.0 / m1)
        for _ in range(12):
            try:
                shoot(seed, horizon, rtol_mid)
                break
            except BlowUp as exc:
                horizon = 0.8 * exc.t_star
                if horizon < 20 * t_min:
                    raise ShootingDiverged("seed blows up too early") from exc
        b = seed
        while horizon < t_max:
            b, _, _ = newton(b, horizon, rtol_mid, 1e-9, 1e-6)
            horizon = min(t_max, horizon + min(1.5 / m1, 0.5 * horizon))
        return newton(b, t_max, ode_tol, 1e-12, 5e-11)

    seeds = [np.zeros(n - 1) if seed_b is None else np.asarray(seed_b, float)[: n - 1]]
    rng = np.random.default_rng(20240815)
    seeds += [0.05 * rng.standard_normal(n - 1) for _ in range(3)]
    b_star = res = history = None
    last = None
    for seed in seeds:
        try:
            b_star, res, history = march(seed)
            break
        except (ShootingDiverged, BlowUp, SeriesDiverged) as exc:
            logger.debug("shooting seed failed: %s", exc)
            last = exc
    if b_star is None and _allow_continuation:
        # continuation in g from the symmetric point (anchored by y = 0 there),
        # warm-starting b and halving the step on failure
        b_cur = np.zeros(n - 1)
        g_sym = np.array([float(j) for j in range(n)])
        g_tgt = np.array(params.g)
        tau, dtau = 0.0, 0.25
        try:
            while tau < 1.0 - 1e-12:
                step = min(dtau, 1.0 - tau)
                p_tau = TodaParams(n=n, M=params.M, s=params.s,
                                   g=tuple(g_sym + (tau + step) * (g_tgt - g_sym)))
                try:
                    sub = shoot_connection(p_tau, t_min, t_max, ode_tol=ode_tol,
                                           match_tol=match_tol, blowup_cap=blowup_cap,
                                           max_iter=max_iter, fd_step=fd_step,
                                           series_tol=series_tol, seed_b=b_cur,
                                           _allow_continuation=False)
                except (ShootingDiverged, BlowUp, SeriesDiverged):
                    dtau = step / 2
                    if dtau < 1e-3:
                        raise
                    continue
                tau += step
                b_cur = sub.b[: n - 1]
            b_star, res, history = march(b_cur)
        except (ShootingDiverged, BlowUp, SeriesDiverged):
            raise ShootingDiverged("shooting failed from all seeds and continuation",
                                   getattr(last, "history", None)) from last
    if b_star is None:
        raise ShootingDiverged("shooting failed from all seeds",
                               getattr(last, "history", None)) from last

    b_full = np.concatenate([b_star, [-b_star.sum()]])
    sol = _integrate_reduced(params, b_full, t_min, t_max, ode_tol, blowup_cap,
                             series_order, series_tol, dense=True)
    grid = np.unique(np.concatenate([
        np.geomspace(t_min, min(1.0, t_max), grid_points // 2),
        np.linspace(min(1.0, t_max), t_max, grid_points // 2),
    ]))
    st = sol.sol(grid)
    y = np.empty((n, grid.size))
    y[: n - 1] = st[: n - 1]
    y[n - 1] = -st[: n - 1].sum(axis=0)
    yp = np.empty((n, grid.size))
    yp[: n - 1] = st[n - 1:]
    yp[n - 1] = -st[n - 1:].sum(axis=0)

    out = RadialSolution(params=params, b=b_full, t_min=t_min, t_max=t_max,
                         grid=grid, y=y, yp=yp, shooting_residual=float(res),
                         series_order=series_order, series_tol=series_tol,
                         interpolant=sol.sol)
    vac = max(np.abs(y[:, -1]).max(), np.abs(yp[:, -1]).max())
    if vac > match_tol:
        raise ShootingDiverged(
            f"vacuum match |y(t_max)| = {vac:.3e} exceeds match_tol", history)
    logger.info("radial connection solved: b = %s, residual %.2e", b_full, res)
    return out


def resubstitution_residual(sol: RadialSolution, npts: int = 200, h: float = 1e-5) -> float:
    """Sup-norm ODE residual with derivatives taken from the interpolant."""
    ts = np.geomspace(sol.t_min * 1.01, sol.t_max * 0.99, npts)
    worst = 0.0
    for t in ts:
        _, yp_m = sol.eval_scalar(t - h)
        y0, yp0 = sol.eval_scalar(t)
        _, yp_p = sol.eval_scalar(t + h)
        ypp = (yp_p - yp_m) / (2 * h)
        links = np.exp(2.0 * (y0 - np.roll(y0, 1)))
        resid = ypp + yp0 / t - (links - np.roll(links, -1))
        worst = max(worst, np.abs(resid).max())
    return worst
