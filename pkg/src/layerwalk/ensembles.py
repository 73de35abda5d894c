"""Vectorized annealed Monte Carlo engines.

Every engine draws a fresh environment per replica (annealed law) and is
deterministic given (law, scheme, replicas, seed): replica blocks of a
fixed size get their own substreams, so results do not depend on how the
computation is scheduled.

Three engines cover the heavy experiments:

* embedded_endpoints  -- X at a fixed jump horizon, via local times and
  negative-binomial sojourn totals (a sum of N iid geometric(1-p)
  sojourns is NegBin(N, 1-p), so per-level draws replace per-jump draws);
* walk_positions      -- (M_n^(1), M_n^(2)) at a fixed time horizon,
  streaming the embedded chain and reconstructing the final sojourn;
* origin_returns      -- visits of M to (0,0), counted from the embedded
  chain: within a sojourn on line 0 the horizontal coordinate is
  monotone, so each such sojourn contributes at most one visit, at an
  exactly reconstructible time.
"""

from __future__ import annotations

import math

import numpy as np

from .environment import (
    Alternating,
    Fixed,
    IidRademacher,
    OrientationScheme,
    StayProbLaw,
)

# replica block size; fixed so that results are independent of scheduling
BLOCK = 4096

# half-width of the level window as a multiple of sqrt(jumps); the
# probability that a simple walk ever exceeds 6 sqrt(m) is ~ 4e-9
_LEVEL_SPAN = 6.0


def _block_rngs(seed: int, replicas: int, block: int = BLOCK):
    """Yield (block_size, rng) pairs with per-block substreams."""
    n_blocks = (replicas + block - 1) // block
    for b in range(n_blocks):
        size = min(block, replicas - b * block)
        ss = np.random.SeedSequence(entropy=seed, spawn_key=(b,))
        yield size, np.random.default_rng(ss)


def _signs_for_levels(scheme: OrientationScheme, levels: np.ndarray, rng, shape):
    """Orientation signs for an array of levels; iid schemes draw per replica."""
    if isinstance(scheme, Alternating):
        signs = np.where(levels % 2 == 0, 1, -1).astype(np.int8)
        return np.broadcast_to(signs, shape)
    if isinstance(scheme, IidRademacher):
        return (rng.integers(0, 2, size=shape, dtype=np.int8) * 2 - 1).astype(np.int8)
    if isinstance(scheme, Fixed):
        raise ValueError("ensemble engines support Alternating and IidRademacher schemes")
    raise TypeError(f"unknown scheme {scheme!r}")


def _level_window(jumps: int) -> int:
    return int(_LEVEL_SPAN * math.sqrt(max(jumps, 1))) + 8


def _local_times(rng, n_rep: int, jumps: int, half: int, slab: int = 1 << 22):
    """Level occupation counts N(y) of n_rep independent simple walks.

    Returns (counts, S_end) with counts shaped (n_rep, 2*half+1); column
    j corresponds to level j - half.  The walk path itself is never held
    in memory: steps are generated in time slabs.
    """
    width = 2 * half + 1
    counts = np.zeros((n_rep, width), dtype=np.int64)
    s_last = np.zeros(n_rep, dtype=np.int64)
    row_offset = (np.arange(n_rep, dtype=np.int64) * width)[:, None]
    slab_t = max(1, slab // max(n_rep, 1))
    done = 0
    while done < jumps:
        m = min(slab_t, jumps - done)
        steps = rng.integers(0, 2, size=(n_rep, m), dtype=np.int8) * 2 - 1
        # occupied levels are the positions *before* each step
        s_path = np.cumsum(steps, axis=1, dtype=np.int64)
        s_path += s_last[:, None]
        occupied = np.empty((n_rep, m), dtype=np.int64)
        occupied[:, 0] = s_last
        occupied[:, 1:] = s_path[:, :-1]
        s_last = s_path[:, -1].copy()
        if np.abs(occupied).max() > half:
            raise RuntimeError("level window exceeded; widen _LEVEL_SPAN")
        flat = (occupied + half) + row_offset
        counts += np.bincount(flat.ravel(), minlength=n_rep * width).reshape(n_rep, width)
        done += m
    return counts, s_last


def embedded_endpoints(
    law: StayProbLaw,
    scheme: OrientationScheme,
    jumps: int,
    replicas: int,
    seed: int,
) -> np.ndarray:
    """Annealed sample of X_jumps over independent replicas."""
    out = np.empty(replicas)
    half = _level_window(jumps)
    width = 2 * half + 1
    pos = 0
    for n_rep, rng in _block_rngs(seed, replicas):
        counts, _ = _local_times(rng, n_rep, jumps, half)
        levels = np.arange(-half, half + 1)
        eps = _signs_for_levels(scheme, levels[None, :], rng, (n_rep, width))
        p = law.sample(rng, (n_rep, width))
        visited = counts > 0
        totals = np.zeros((n_rep, width), dtype=np.int64)
        totals[visited] = rng.negative_binomial(counts[visited], 1.0 - p[visited])
        out[pos : pos + n_rep] = (eps.astype(np.int64) * totals).sum(axis=1)
        pos += n_rep
    return out


def _stream_positions(
    law: StayProbLaw,
    scheme: OrientationScheme,
    horizons: np.ndarray,
    n_rep: int,
    rng,
    collect_returns: bool,
):
    """Stream the embedded chain until T passes max(horizons).

    Returns (positions, returns): positions[h] is an (n_rep, 2) array of
    (x, y) at time horizons[h]; returns[h] counts visits to the origin in
    (0, horizons[h]] when collect_returns is set, else None.
    """
    max_h = int(horizons.max())
    # at most max_h jumps can occur before time max_h (T_k >= k), so the
    # line is bounded by max_h + 1 deterministically; the sqrt window is
    # the realistic bound for large horizons and is guarded below
    half = min(max_h + 2, _level_window(max_h))
    width = 2 * half + 1
    p_win = law.sample(rng, (n_rep, width))
    levels = np.arange(-half, half + 1)
    eps_win = _signs_for_levels(scheme, levels[None, :], rng, (n_rep, width))

    s = np.zeros(n_rep, dtype=np.int64)
    x = np.zeros(n_rep, dtype=np.int64)
    t = np.zeros(n_rep, dtype=np.int64)
    n_h = len(horizons)
    pos_out = np.zeros((n_h, n_rep, 2), dtype=np.int64)
    pos_done = np.zeros((n_h, n_rep), dtype=bool)
    ret_out = np.zeros((n_h, n_rep), dtype=np.int64) if collect_returns else None

    slab = max(256, min((1 << 22) // max(n_rep, 1), 1 << 13))
    slab = min(slab, max_h + 1)
    active = np.arange(n_rep)
    while active.size:
        a = active
        col = (s[a] + half).astype(np.intp)
        p_cur = p_win[a, col]
        eps_cur = eps_win[a, col].astype(np.int64)
        batch = slab
        # per-jump quantities for a slab of jumps, replica by column
        xi = np.empty((a.size, batch), dtype=np.int64)
        epsb = np.empty((a.size, batch), dtype=np.int64)
        sb = np.empty((a.size, batch), dtype=np.int64)
        tb = np.empty((a.size, batch), dtype=np.int64)
        xb = np.empty((a.size, batch), dtype=np.int64)
        s_cur = s[a].copy()
        x_cur = x[a].copy()
        t_cur = t[a].copy()
        steps = rng.integers(0, 2, size=(a.size, batch), dtype=np.int8) * 2 - 1
        for j in range(batch):
            sb[:, j] = s_cur
            tb[:, j] = t_cur
            xb[:, j] = x_cur
            xi[:, j] = rng.geometric(1.0 - p_cur) - 1
            epsb[:, j] = eps_cur
            x_cur = x_cur + eps_cur * xi[:, j]
            t_cur = t_cur + xi[:, j] + 1
            # freeze the line once past the horizon so S stays in window
            s_cur = s_cur + steps[:, j] * (t_cur <= max_h)
            col = (s_cur + half).astype(np.intp)
            p_cur = p_win[a, col]
            eps_cur = eps_win[a, col].astype(np.int64)
        if np.abs(sb).max() > half:
            raise RuntimeError("level window exceeded; widen _LEVEL_SPAN")

        for h, horizon in enumerate(horizons):
            todo = ~pos_done[h][a]
            if todo.any():
                # jump index whose sojourn covers `horizon`
                covered = (tb <= horizon) & (horizon < tb + xi + 1)
                hit = covered.any(axis=1) & todo
                if hit.any():
                    k = covered[hit].argmax(axis=1)
                    rows = np.flatnonzero(hit)
                    prog = np.minimum(horizon - tb[rows, k], xi[rows, k])
                    pos_out[h, a[rows], 0] = xb[rows, k] + epsb[rows, k] * prog
                    pos_out[h, a[rows], 1] = sb[rows, k]
                    pos_done[h, a[rows]] = True
            if collect_returns:
                on_zero = sb == 0
                # x is monotone within a sojourn: it visits 0 iff 0 lies
                # between x_k and x_k + eps*xi_k; arrival time is exact
                reach = on_zero & (xb * (xb + epsb * xi) <= 0)
                visit_t = tb + np.abs(xb)
                count = reach & (visit_t >= 1) & (visit_t <= horizon)
                ret_out[h][a] += count.sum(axis=1)

        s[a], x[a], t[a] = s_cur, x_cur, t_cur
        active = a[t[a] <= max_h]

    positions = {int(h): pos_out[i] for i, h in enumerate(horizons)}
    returns = (
        {int(h): ret_out[i] for i, h in enumerate(horizons)} if collect_returns else None
    )
    return positions, returns


def walk_positions(
    law: StayProbLaw,
    scheme: OrientationScheme,
    n: int,
    replicas: int,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Annealed sample of (M_n^(1), M_n^(2)) over independent replicas."""
    xs = np.empty(replicas, dtype=np.int64)
    ys = np.empty(replicas, dtype=np.int64)
    pos = 0
    horizons = np.array([n], dtype=np.int64)
    for n_rep, rng in _block_rngs(seed, replicas):
        positions, _ = _stream_positions(law, scheme, horizons, n_rep, rng, False)
        xs[pos : pos + n_rep] = positions[n][:, 0]
        ys[pos : pos + n_rep] = positions[n][:, 1]
        pos += n_rep
    return xs, ys


def origin_returns(
    law: StayProbLaw,
    scheme: OrientationScheme,
    horizons: list[int],
    replicas: int,
    seed: int,
) -> np.ndarray:
    """Visits of M to the origin in (0, horizon], shaped (len(horizons), replicas)."""
    hs = np.asarray(sorted(horizons), dtype=np.int64)
    out = np.empty((len(hs), replicas), dtype=np.int64)
    pos = 0
    for n_rep, rng in _block_rngs(seed, replicas):
        _, returns = _stream_positions(law, scheme, hs, n_rep, rng, True)
        for i, h in enumerate(hs):
            out[i, pos : pos + n_rep] = returns[int(h)]
        pos += n_rep
    return out


def direct_positions(
    law: StayProbLaw,
    scheme: OrientationScheme,
    n: int,
    replicas: int,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Annealed sample of M_n from the step-by-step chain (cross-check engine)."""
    half = n + 1
    width = 2 * half + 1
    xs = np.empty(replicas, dtype=np.int64)
    ys = np.empty(replicas, dtype=np.int64)
    pos = 0
    levels = np.arange(-half, half + 1)
    for n_rep, rng in _block_rngs(seed, replicas):
        p_win = law.sample(rng, (n_rep, width))
        eps_win = _signs_for_levels(scheme, levels[None, :], rng, (n_rep, width))
        x = np.zeros(n_rep, dtype=np.int64)
        y = np.zeros(n_rep, dtype=np.int64)
        rows = np.arange(n_rep)
        for _ in range(n):
            col = (y + half).astype(np.intp)
            p_cur = p_win[rows, col]
            u = rng.random(n_rep)
            stay = u < p_cur
            up = ~stay & (u < p_cur + (1.0 - p_cur) / 2.0)
            x = x + np.where(stay, eps_win[rows, col], 0)
            y = y + np.where(stay, 0, np.where(up, 1, -1))
        xs[pos : pos + n_rep] = x
        ys[pos : pos + n_rep] = y
        pos += n_rep
    return xs, ys
