#!/usr/bin/env python3
"""Writes the synthetic three-country world under fixtures/tiny/.

Rates follow smooth demographic-transition curves in GDP with deterministic
sinusoidal noise, so every regression form is fittable and no randomness is
involved. Re-running reproduces the committed files byte for byte.
"""
import math
import os

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "tiny")

COUNTRIES = [
    # iso3, name, income, region, gdp1950, hist growth, seed, pop millions, age slope
    ("AAA", "Alphaland", "low", "sub_saharan_africa", 700.0, 0.010, 1, 20.0, 0.035),
    ("BBB", "Betaland", "lower_middle", "south_asia", 1300.0, 0.024, 2, 50.0, 0.020),
    ("CCC", "Gammaland", "high", "europe_central_asia", 9000.0, 0.022, 3, 30.0, 0.000),
]
# baseline growth per 5-year anchor, decaying towards the end of the century
BASE_GROWTH = {"AAA": 0.034, "BBB": 0.030, "CCC": 0.012}
AGE_WEIGHTS = [0.10, 0.25, 0.27, 0.20, 0.12, 0.06]
AGES = [f"{5 * i}-{5 * i + 4}" for i in range(20)] + ["100+"]


def fmt(x):
    return "%.10g" % x


def gdp_hist(c, year):
    _, _, _, _, g0, growth, seed, _, _ = c
    return g0 * (1 + growth) ** (year - 1950) * (1 + 0.02 * math.sin(0.7 * year + seed))


def tfr(g):
    return 1.6 + 4.8 * math.exp(-g / 4000.0)


def mortality(age_idx, g, noise):
    mid = 5 * age_idx + 2.5
    base = 0.0004 * math.exp(0.082 * mid) + (0.03 if age_idx == 0 else 0.0)
    q = base * (0.25 + 0.75 * math.exp(-g / 9000.0)) * noise
    return min(q, 0.6)


def main():
    os.makedirs(OUT, exist_ok=True)
    with open(os.path.join(OUT, "countries.csv"), "w") as f:
        f.write("iso3,name,income_group,region\n")
        for c in COUNTRIES:
            f.write(f"{c[0]},{c[1]},{c[2]},{c[3]}\n")

    with open(os.path.join(OUT, "gdp_hist.csv"), "w") as f:
        f.write("iso3,year,gdp_pc\n")
        for c in COUNTRIES:
            for y in range(1950, 2016):
                f.write(f"{c[0]},{y},{fmt(gdp_hist(c, y))}\n")

    with open(os.path.join(OUT, "gdp_baseline.csv"), "w") as f:
        f.write("iso3,year,gdp_pc\n")
        for c in COUNTRIES:
            g = gdp_hist(c, 2015)
            for i, y in enumerate(range(2015, 2101, 5)):
                if i > 0:
                    r = BASE_GROWTH[c[0]] * (1.0 - 0.4 * (y - 2015) / 85.0)
                    g *= (1 + r) ** 5
                f.write(f"{c[0]},{y},{fmt(g)}\n")

    with open(os.path.join(OUT, "rates.csv"), "w") as f:
        f.write("iso3,year,variable,age_group,sex,rate\n")
        for c in COUNTRIES:
            seed = c[6]
            for y in range(1950, 2016, 5):
                g = gdp_hist(c, y)
                t = tfr(g)
                for a, w in enumerate(AGE_WEIGHTS):
                    noise = 1 + 0.04 * math.sin(1.3 * y + 2 * a + seed)
                    f.write(f"{c[0]},{y},fertility,{AGES[a + 3]},female,{fmt(t * w / 5 * noise)}\n")
                for a in range(21):
                    noise = 1 + 0.05 * math.sin(0.9 * y + 3 * a + seed)
                    f.write(f"{c[0]},{y},mortality,{AGES[a]},both,{fmt(mortality(a, g, noise))}\n")

    with open(os.path.join(OUT, "base_pop.csv"), "w") as f:
        f.write("iso3,year,age_group,sex,count\n")
        for c in COUNTRIES:
            total, slope = c[7] * 1e6, c[8]
            shape = [math.exp(-slope * 5 * a) * (0.2 if a >= 18 else 1.0) for a in range(21)]
            norm = sum(shape)
            for a in range(21):
                both = total * shape[a] / norm
                f.write(f"{c[0]},2015,{AGES[a]},female,{fmt(round(both * 0.505))}\n")
                f.write(f"{c[0]},2015,{AGES[a]},male,{fmt(round(both * 0.495))}\n")


if __name__ == "__main__":
    main()
