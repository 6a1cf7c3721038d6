#!/usr/bin/env python3
"""Straight-line reference implementation of the projection pipeline.

Shares no code with the Rust engine: least squares uses numpy's SVD-based
lstsq, the exponent refinement is a separately written golden-section loop,
and the cohort step is spelled out per cell. Used to freeze the expected
country totals in fixtures/oracle/tiny_expected.csv.

usage: brute_force.py <data_dir> <out_csv> <scenario>... [--golden <dir>]
scenarios: baseline | m:<value> | convergence

With --golden, also writes the report tables (trajectories.csv, summary.csv,
sensitivity.csv) for the default world/income/region scopes.
"""
import csv
import math
import sys

import numpy as np

AGES = [f"{5 * i}-{5 * i + 4}" for i in range(20)] + ["100+"]
FERTILE = AGES[3:9]
K = {"null": 2, "linear": 3, "division": 3, "neg_log": 3, "neg_power": 4,
     "linear_spline": 5, "right_hinge": 4, "left_hinge": 4}
FORMS = list(K)
CAP = 30000.0
SRB = 1.05


def read(path):
    with open(path) as f:
        return list(csv.DictReader(f))


def interp(series, year):
    ys = [y for y, _ in series]
    if not ys or year < ys[0] or year > ys[-1]:
        return None
    for (y0, v0), (y1, v1) in zip(series, series[1:]):
        if y0 == year:
            return v0
        if y0 < year < y1:
            return v0 + (year - y0) / (y1 - y0) * (v1 - v0)
    return series[-1][1] if series[-1][0] == year else None


def lstsq(cols, y):
    X = np.column_stack(cols)
    b, *_ = np.linalg.lstsq(X, y, rcond=None)
    return b, float(np.sum((y - X @ b) ** 2))


def golden(f, a, b, tol):
    r = (math.sqrt(5) - 1) / 2
    c, d = b - r * (b - a), a + r * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol * abs(0.5 * (a + b)):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - r * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + r * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def fit(form, x, y):
    """Returns a predictor closure or None when the form is not fittable."""
    n = len(x)
    if n < K[form] + 2:
        return None
    if form == "null":
        m = float(np.mean(y))
        return lambda g: m
    if np.all(x == x[0]):
        return None
    one = np.ones(n)
    if form == "linear":
        b, _ = lstsq([one, x], y)
        return lambda g: b[0] + b[1] * g
    if form == "division":
        b, _ = lstsq([one, 1 / x], y)
        return lambda g: b[0] + b[1] / g
    if form == "neg_log":
        b, _ = lstsq([one, np.log(x)], y)
        return lambda g: b[0] + b[1] * math.log(g)
    if form == "neg_power":
        grid = [i / 20 for i in range(1, 101)]
        rss = [lstsq([one, x ** -e], y)[1] for e in grid]
        i = min(range(len(grid)), key=lambda j: (rss[j], j))
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
        e, r = golden(lambda e: lstsq([one, x ** -e], y)[1], lo, hi, 1e-6)
        if not r < rss[i]:
            e = grid[i]
        b, _ = lstsq([one, x ** -e], y)
        return lambda g: b[0] + b[1] * g ** -e
    # piecewise: breakpoints at distinct values excluding two at each end
    u = sorted(set(x.tolist()))
    if len(u) < 5:
        return None
    best = None
    for x1 in u[2:-2]:
        if form == "linear_spline":
            cols = [one, np.minimum(x, x1), np.maximum(x - x1, 0)]
        elif form == "right_hinge":
            cols = [one, np.minimum(x, x1)]
        else:
            cols = [one, np.maximum(x, x1)]
        b, r = lstsq(cols, y)
        if best is None or r < best[0]:
            best = (r, x1, b)
    _, x1, b = best
    if form == "linear_spline":
        return lambda g: b[0] + b[1] * min(g, x1) + b[2] * max(g - x1, 0)
    if form == "right_hinge":
        return lambda g: b[0] + b[1] * min(g, x1)
    return lambda g: b[0] + b[1] * max(g, x1)


def ensemble(fit_pts, w_pts):
    fx = np.array([p[0] for p in fit_pts])
    fy = np.array([p[1] for p in fit_pts])
    members = []
    for form in FORMS:
        f = fit(form, fx, fy)
        if f is None:
            continue
        n, k = len(w_pts), K[form]
        if n <= k + 1:
            continue
        rss = sum((yv - max(f(xv), 0.0)) ** 2 for xv, yv in w_pts)
        rss = max(rss, 1e-12)
        members.append((n * math.log(rss / n) + 2 * k + 2 * k * (k + 1) / (n - k - 1), f))
    if not members:
        m = float(np.mean(fy))
        return [(1.0, lambda g: m)]
    amin = min(a for a, _ in members)
    raw = [math.exp(-(a - amin) / 2) for a, _ in members]
    tot = sum(raw)
    return [(w / tot, f) for w, (_, f) in zip(raw, members)]


def ens_value(ens, g):
    return sum(w * max(f(g), 0.0) for w, f in ens)


INCOME = ["high", "upper_middle", "lower_middle", "low"]
REGIONS = ["east_asia_pacific", "europe_central_asia", "latin_america_caribbean",
           "middle_east_north_africa", "north_america", "south_asia", "sub_saharan_africa"]


def sig6(v):
    exp = int(("%.5e" % v).split("e")[1])
    return "%.*f" % (max(5 - exp, 0), v)


def scenario_id(sc):
    return "m%.1f" % float(sc.split(":")[1]) if sc.startswith("m:") else sc


def write_golden(out_dir, countries, scenarios, totals):
    import os
    os.makedirs(out_dir, exist_ok=True)
    scopes = [("world", lambda c: True)]
    scopes += [(f"income:{g}", lambda c, g=g: c["income_group"] == g) for g in INCOME]
    scopes += [(f"region:{r}", lambda c, r=r: c["region"] == r) for r in REGIONS]
    traj = ["scope,scenario_id,year,population"]
    summ = ["scope,scenario_id,pop2015,pop2050,pop2100,peak_pop,peak_year"]
    for sc in scenarios:
        for label, member in scopes:
            isos = [c["iso3"] for c in countries if member(c)]
            if not isos:
                continue
            series = [sum(totals[(sc, i)][t] for i in isos) for t in range(86)]
            for t, v in enumerate(series):
                traj.append(f"{label},{scenario_id(sc)},{2015 + t},{sig6(v / 1e6)}")
            peak = max(series)
            summ.append(",".join([label, scenario_id(sc)] + [sig6(series[y - 2015] / 1e6) for y in (2015, 2050, 2100)]
                                 + [sig6(peak / 1e6), str(2015 + series.index(peak))]))
    sens = ["iso3,ratio"]
    if {"baseline", "m:0", "m:2"} <= set(scenarios):
        for c in countries:
            i, t = c["iso3"], 2050 - 2015
            sens.append(f"{i},{sig6(abs(totals[('m:0', i)][t] - totals[('m:2', i)][t]) / totals[('baseline', i)][t])}")
    for name, lines in (("trajectories.csv", traj), ("summary.csv", summ), ("sensitivity.csv", sens)):
        with open(f"{out_dir}/{name}", "w") as f:
            f.write("\n".join(lines) + "\n")


def main():
    args = sys.argv[1:]
    golden = None
    if "--golden" in args:
        k = args.index("--golden")
        golden = args[k + 1]
        del args[k:k + 2]
    data_dir, out_path, scenarios = args[0], args[1], args[2:]
    totals = {}
    countries = sorted(read(f"{data_dir}/countries.csv"), key=lambda r: r["iso3"])
    isos = [c["iso3"] for c in countries]
    gdp = {i: [] for i in isos}
    for r in read(f"{data_dir}/gdp_hist.csv"):
        gdp[r["iso3"]].append((int(r["year"]), float(r["gdp_pc"])))
    base_anchor = {i: [] for i in isos}
    for r in read(f"{data_dir}/gdp_baseline.csv"):
        base_anchor[r["iso3"]].append((int(r["year"]), float(r["gdp_pc"])))
    rates = {}
    for r in read(f"{data_dir}/rates.csv"):
        sex = "female" if r["variable"] == "fertility" else r["sex"]
        rates.setdefault((r["iso3"], r["variable"], r["age_group"], sex), []).append(
            (int(r["year"]), float(r["rate"])))
    pop = {i: np.zeros((21, 2)) for i in isos}
    for r in read(f"{data_dir}/base_pop.csv"):
        pop[r["iso3"]][AGES.index(r["age_group"]), 0 if r["sex"] == "female" else 1] = float(r["count"])
    for d in (gdp, base_anchor, rates):
        for v in d.values():
            v.sort()

    def baseline(iso):
        a = base_anchor[iso]
        out = []
        for t in range(2015, 2101):
            for (y0, v0), (y1, v1) in zip(a, a[1:]):
                if y0 <= t <= y1:
                    out.append(v0 if t == y0 else v1 if t == y1 else v0 * (v1 / v0) ** ((t - y0) / (y1 - y0)))
                    break
        return out

    def pathway(iso, sc):
        b = baseline(iso)
        if sc == "baseline":
            return b
        if sc == "convergence":
            g0 = b[0]
            if g0 >= 30000:
                return [g0] * 86
            return [g0 * (30000 / g0) ** (i / 85) if i < 85 else 30000.0 for i in range(86)]
        m = float(sc.split(":")[1])
        out = [b[0]]
        for t in range(85):
            out.append(out[-1] * (1 + m * (b[t + 1] / b[t] - 1)))
        return out

    def pairs(iso, var, age, sex, window):
        out = []
        for y, v in rates[(iso, var, age, sex)]:
            if window and not 1990 <= y <= 2015:
                continue
            g = interp(gdp[iso], y)
            if g is not None:
                out.append((g, v))
        return out

    with open(out_path, "w") as f:
        f.write("scenario,iso3,year,total\n")
        for sc in scenarios:
            for iso in isos:
                path = pathway(iso, sc)
                g15, gmax = path[0], max(path)
                donors = []
                for d in isos:
                    if d == iso:
                        continue
                    win = [v for y, v in gdp[d] if 1990 <= y <= 2015]
                    if win and min(win) > g15 and max(win) < gmax:
                        donors.append(d)

                def build(var, age, sex):
                    own = pairs(iso, var, age, sex, False)
                    aug = list(own)
                    for d in donors:
                        aug += pairs(d, var, age, sex, True)
                    return ensemble(aug, own)

                fert = [build("fertility", a, "female") for a in FERTILE]
                mort = [build("mortality", a, "both") for a in AGES]

                P = pop[iso].copy()
                totals[(sc, iso)] = [float(P.sum())]
                f.write(f"{sc},{iso},2015,{repr(float(P.sum()))}\n")
                for i, year in enumerate(range(2015, 2100)):
                    g = path[i]
                    gf = min(g, CAP)
                    asfr = [ens_value(e, gf) for e in fert]
                    q = [min(ens_value(e, g), 1.0) for e in mort]
                    S = np.zeros((21, 2))
                    for a in range(21):
                        for s in range(2):
                            S[a, s] = P[a, s] * (1 - q[a])
                    births = sum(asfr[j] * S[3 + j, 0] for j in range(6))
                    N = np.zeros((21, 2))
                    for s in range(2):
                        for a in range(20):
                            N[a, s] += S[a, s] * 0.8
                            N[a + 1, s] += S[a, s] * 0.2
                        N[20, s] += S[20, s]
                    N[0, 1] += births * SRB / (1 + SRB)
                    N[0, 0] += births / (1 + SRB)
                    P = N
                    totals[(sc, iso)].append(float(P.sum()))
                    f.write(f"{sc},{iso},{year + 1},{repr(float(P.sum()))}\n")
    if golden:
        write_golden(golden, countries, scenarios, totals)


if __name__ == "__main__":
    main()
