"""Offline oracle for the sampled kernel-SOS lower-bound program.

    max_{c, B psd}  c - lam * Tr(B)   s.t.  a_i - c = (K B K)_ii

K is numerically singular for dense samples, so the program is posed in
congruence coordinates: with K + jitter*I = R R', R = U diag(sqrt(w)) and
C = R' B R, the constraints read a_i - c = r_i' C r_i and Tr(B) = Tr(C / w).
The dual over mu (one LMI, N scalars) is handed to a generic
interior-point solver (CVXOPT, with CLARABEL and SCS as fallbacks). The printed numbers
are frozen into tests/test_ksos.cpp.

    python3 tests/oracles/ksos_sdp_oracle.py
"""
import numpy as np
import cvxpy as cp


def gaussian_gram(x, sigma):
    x = np.atleast_2d(x.T).T
    d2 = ((x[:, None, :] - x[None, :, :]) ** 2).sum(-1)
    return np.exp(-d2 / (2.0 * sigma**2))


def solve(a, K, lam, jitter):
    """Dual form: min a'mu  s.t.  sum(mu) = 1,  diag(lam / w) + R' diag(mu) R psd.
    The LMI multiplier Z is C up to scaling, so c* = a_i - r_i' Z r_i for every i."""
    n = len(a)
    w, U = np.linalg.eigh(K)
    w = np.maximum(w, 0.0) + jitter * np.mean(np.diag(K))
    R = U * np.sqrt(w)
    amin = a.min()
    span = a.max() - amin
    an = (a - amin) / span
    mu = cp.Variable(n)
    P = np.diag((lam / span) / w) + R.T @ cp.diag(mu) @ R
    lmi = (P + P.T) / 2 >> 0
    prob = cp.Problem(cp.Minimize(an @ mu), [cp.sum(mu) == 1, lmi])
    for solver, kw in (("CVXOPT", {}), ("CLARABEL", {}), ("SCS", {"eps": 1e-9, "max_iters": 200000})):
        try:
            prob.solve(solver=solver, **kw)
        except cp.error.SolverError:
            continue
        if prob.status == cp.OPTIMAL:
            break
    else:
        return float("nan"), None
    Z = lmi.dual_value
    c = an - np.einsum("ij,jk,ik->i", R, Z, R)
    return amin + span * float(np.mean(c)), mu.value


def report(name, x, a, K, lam, jitter):
    c, mu = solve(a, K, lam, jitter)
    if mu is None:
        print(f"{name}: lam={lam:g} jitter={jitter:g} all solvers failed")
        return
    mu_pos = np.clip(mu, 0.0, None)
    mu_pos /= mu_pos.sum()
    xs = mu_pos @ x
    print(f"{name}: lam={lam:g} jitter={jitter:g} c*={c:.10g} sum(mu)={mu.sum():.8f} x*={np.array2string(np.atleast_1d(xs), precision=8)}")


if __name__ == "__main__":
    x = np.linspace(-1.0, 1.0, 33)
    a = x**2
    K = gaussian_gram(x, 0.3)
    for jitter in (1e-6,):
        for lam in (1e-6,):
            report("quadratic", x, a, K, lam, jitter)

    # Small well-conditioned instances: fixed points, values and bandwidth.
    rng = np.random.default_rng(20240611)
    for k in range(3):
        pts = rng.uniform(-1.0, 1.0, size=(8, 2))
        vals = rng.normal(size=8)
        K = gaussian_gram(pts, 0.5)
        print(f"instance {k}: points={np.array2string(pts.ravel(), precision=17, separator=',', max_line_width=10**6)}")
        print(f"instance {k}: values={np.array2string(vals, precision=17, separator=',', max_line_width=10**6)}")
        for lam in (1e-3, 1e-1):
            report(f"instance {k}", pts, vals, K, lam, 1e-10)
