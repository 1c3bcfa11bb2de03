#!/usr/bin/env python3
"""Reference best-known values for the built-in problem catalog.

Solves each catalog problem with independent methods (cvxpy/scipy, plus
multistart SLSQP for the nonconvex and minimax instances) and prints the
values that are frozen into src/catalog.cpp. Run offline; not part of the
build.
"""
import numpy as np
from scipy.optimize import minimize, linprog

rng = np.random.default_rng(7)


def report(name, val):
    print(f"{name:14s} f_L = {val:.15g}")


# ---------------------------------------------------------------- lsqfit
a = np.array([0.1, 0.3, 0.5, 0.7, 0.9])
b = np.array([0.25, 0.3, 0.625, 0.701, 1.0])


def lsqfit(v):
    return np.sum((a * v[0] + v[1] - b) ** 2)


# analytic: unconstrained LS violates x+y<=0.85, so the constraint is active.
x_act = np.dot(a - 1, b - 0.85) / np.dot(a - 1, a - 1)
f_lsqfit = np.sum(((a - 1) * x_act + 0.85 - b) ** 2)
report("lsqfit", f_lsqfit)

# l1-penalized variant (lambda = 100, LI row penalized): same minimizer since
# the penalty slope dominates the objective slope at the boundary.
def lsqfit_l1(v):
    return lsqfit(v) + 100.0 * abs(v[0] + v[1] - 0.85)

best = np.inf
for _ in range(200):
    x0 = rng.uniform(-1, 2, 2)
    x0[0] = abs(x0[0])
    r = minimize(lsqfit_l1, x0, method="Nelder-Mead",
                 options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 20000})
    if r.x[0] >= -1e-12 and r.fun < best:
        best = r.fun
report("lsqfit_l1", best)

# ---------------------------------------------------------------- quadratics
def quad_min(D, c, bounds=None, A_eq=None, b_eq=None, A_ub=None, b_ub=None):
    n = len(c)
    fun = lambda x: 0.5 * np.dot(x - c, D * (x - c))
    jac = lambda x: D * (x - c)
    cons = []
    if A_eq is not None:
        cons.append({"type": "eq", "fun": lambda x: A_eq @ x - b_eq,
                     "jac": lambda x: A_eq})
    if A_ub is not None:
        cons.append({"type": "ineq", "fun": lambda x: b_ub - A_ub @ x,
                     "jac": lambda x: -A_ub})
    best = np.inf
    for _ in range(40):
        x0 = rng.uniform(-1, 1, n)
        r = minimize(fun, x0, jac=jac, bounds=bounds, constraints=cons,
                     method="SLSQP", options={"ftol": 1e-16, "maxiter": 2000})
        if r.success and r.fun < best:
            best = r.fun
    return best


report("quad_box_2", quad_min(np.array([1.0, 4.0]), np.array([1.5, -0.5]),
                              bounds=[(0, 1)] * 2))
report("quad_box_5", quad_min(np.arange(1.0, 6.0),
                              np.array([2.0, -1.0, 0.5, 1.5, -0.3]),
                              bounds=[(0, 1)] * 5))
c10 = np.array([1.3 if (i + 1) % 2 == 1 else -0.4 for i in range(10)])
report("quad_box_10", quad_min(np.arange(1.0, 11.0), c10, bounds=[(0, 1)] * 10))
D20 = np.array([1.0 + (i % 7) for i in range(20)])
c20 = np.array([((i * 37) % 100) / 50.0 - 1.0 for i in range(20)])
report("quad_box_20", quad_min(D20, c20, bounds=[(0, 1)] * 20))

report("quad_eq_3", quad_min(np.array([2.0, 3.0, 5.0]), np.ones(3),
                             A_eq=np.ones((1, 3)), b_eq=np.array([1.0])))
Aeq10 = np.vstack([np.ones(10), np.eye(10)[0] - np.eye(10)[1]])
report("quad_eq_10", quad_min(np.arange(1.0, 11.0), 0.3 * np.ones(10),
                              A_eq=Aeq10, b_eq=np.array([1.0, 0.0])))

report("quad_ineq_4", quad_min(np.array([1.0, 2.0, 3.0, 4.0]), np.ones(4),
                               bounds=[(0, None)] * 4,
                               A_ub=np.vstack([np.ones(4),
                                               -np.array([1.0, 0, -1.0, 0])]),
                               b_ub=np.array([1.0, 0.5])))
report("quad_ineq_8", quad_min(np.arange(1.0, 9.0), np.ones(8),
                               bounds=[(-0.5, 0.5)] * 8,
                               A_ub=np.ones((1, 8)), b_ub=np.array([2.0])))

# ---------------------------------------------------------------- HS & LP
def multistart(fun, n, bounds=None, cons=(), tries=200, box=(-5, 5)):
    best = np.inf
    for _ in range(tries):
        x0 = rng.uniform(box[0], box[1], n)
        r = minimize(fun, x0, bounds=bounds, constraints=list(cons),
                     method="SLSQP", options={"ftol": 1e-16, "maxiter": 2000})
        if r.success and r.fun < best:
            best = r.fun
    return best


hs21 = multistart(lambda x: 0.01 * x[0] ** 2 + x[1] ** 2 - 100, 2,
                  bounds=[(2, 50), (-50, 50)],
                  cons=[{"type": "ineq",
                         "fun": lambda x: 10 * x[0] - x[1] - 10}])
report("hs21", hs21)

hs24 = multistart(lambda x: ((x[0] - 3) ** 2 - 9) * x[1] ** 3 / (27 * np.sqrt(3)),
                  2, bounds=[(0, None), (0, None)],
                  cons=[{"type": "ineq", "fun": lambda x: x[0] / np.sqrt(3) - x[1]},
                        {"type": "ineq", "fun": lambda x: x[0] + np.sqrt(3) * x[1]},
                        {"type": "ineq",
                         "fun": lambda x: 6 - x[0] - np.sqrt(3) * x[1]}],
                  box=(0, 6))
report("hs24", hs24)

hs35 = multistart(lambda x: 9 - 8 * x[0] - 6 * x[1] - 4 * x[2]
                  + 2 * x[0] ** 2 + 2 * x[1] ** 2 + x[2] ** 2
                  + 2 * x[0] * x[1] + 2 * x[0] * x[2],
                  3, bounds=[(0, None)] * 3,
                  cons=[{"type": "ineq",
                         "fun": lambda x: 3 - x[0] - x[1] - 2 * x[2]}],
                  box=(0, 2))
report("hs35", hs35)

hs76 = multistart(lambda x: x[0] ** 2 + 0.5 * x[1] ** 2 + x[2] ** 2
                  + 0.5 * x[3] ** 2 - x[0] * x[2] + x[2] * x[3]
                  - x[0] - 3 * x[1] + x[2] - x[3],
                  4, bounds=[(0, None)] * 4,
                  cons=[{"type": "ineq",
                         "fun": lambda x: 5 - x[0] - 2 * x[1] - x[2] - x[3]},
                        {"type": "ineq",
                         "fun": lambda x: 4 - 3 * x[0] - x[1] - 2 * x[2] + x[3]},
                        {"type": "ineq", "fun": lambda x: x[1] + 4 * x[2] - 1.5}],
                  box=(0, 2))
report("hs76", hs76)

lp = linprog(c=[1.0, 2.0],
             A_ub=[[-1.0, -1.0], [1.0, -2.0]], b_ub=[-1.0, 0.0],
             bounds=[(0, None), (0, None)])
report("simpllpa", lp.fun)

# ---------------------------------------------------------------- minimax
def minimax_value(partials, n, cons, box, tries=400):
    # epigraph form: min t  s.t. f_i(x) <= t, linear constraints
    def fun(z):
        return z[-1]
    best = np.inf
    for _ in range(tries):
        x0 = np.append(rng.uniform(box[0], box[1], n), 0.0)
        x0[-1] = max(p(x0[:-1]) for p in partials)
        all_cons = list(cons) + [
            {"type": "ineq", "fun": (lambda z, p=p: z[-1] - p(z[:-1]))}
            for p in partials]
        r = minimize(fun, x0, constraints=all_cons, method="SLSQP",
                     options={"ftol": 1e-14, "maxiter": 3000})
        if r.success and r.fun < best:
            best = r.fun
    return best


mad1_parts = [lambda x: x[0] ** 2 + x[1] ** 2 + x[0] * x[1] - 1.0,
              lambda x: np.sin(x[0]),
              lambda x: -np.cos(x[1])]
mad1 = minimax_value(mad1_parts, 2,
                     [{"type": "ineq", "fun": lambda z: z[0] + z[1] - 0.5}],
                     box=(-2, 2))
report("mad1", mad1)

pent_parts = [lambda x: -np.hypot(x[0] - x[2], x[1] - x[3]),
              lambda x: -np.hypot(x[2] - x[4], x[3] - x[5]),
              lambda x: -np.hypot(x[0] - x[4], x[1] - x[5])]
pent_cons = []
for k in range(5):
    th = 2 * np.pi * k / 5
    for i in range(3):
        pent_cons.append({"type": "ineq",
                          "fun": (lambda z, th=th, i=i:
                                  1.0 - np.cos(th) * z[2 * i]
                                  - np.sin(th) * z[2 * i + 1])})
pent = minimax_value(pent_parts, 6, pent_cons, box=(-1, 1), tries=600)
report("pentagon", pent)

report("rosen_box", 0.0)
