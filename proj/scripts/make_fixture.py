#!/usr/bin/env python3
"""Regenerate the bundled synthetic fixtures under data/.

The fixture is a stylized 60-country world: ISO3 codes, coordinates and
policy flags are realistic, GDP and trade values are synthetic. Trade values
come from a seeded log-linear gravity process so the regression stages have
known structure to recover. UKR-origin pairs are deliberately absent (the
epicenter reports no outbound flows), which keeps the epicenter's force share
negligible; the verification block at the bottom asserts the properties the
test suite relies on.

Run from the repository root:  python3 scripts/make_fixture.py
"""

import math
import os
import numpy as np

R_EARTH = 6371.0088

# iso3, name, lat, lng, gdp2019, gdp2023, eu, sanctioning, energy_exporter
COUNTRIES = [
    ("AUT", "Austria",        48.21,  16.37, 4.40e11, 5.20e11, 1, 1, 0),
    ("BEL", "Belgium",        50.85,   4.35, 5.30e11, 6.30e11, 1, 1, 0),
    ("BGR", "Bulgaria",       42.70,  23.32, 6.90e10, 1.00e11, 1, 1, 0),
    ("HRV", "Croatia",        45.81,  15.98, 6.20e10, 8.40e10, 1, 1, 0),
    ("CYP", "Cyprus",         35.17,  33.36, 2.50e10, 3.20e10, 1, 1, 0),
    ("CZE", "Czechia",        50.08,  14.44, 2.50e11, 3.30e11, 1, 1, 0),
    ("DNK", "Denmark",        55.68,  12.57, 3.50e11, 4.00e11, 1, 1, 0),
    ("EST", "Estonia",        59.44,  24.75, 3.10e10, 4.10e10, 1, 1, 0),
    ("FIN", "Finland",        60.17,  24.94, 2.70e11, 3.00e11, 1, 1, 0),
    ("FRA", "France",         48.86,   2.35, 2.70e12, 3.00e12, 1, 1, 0),
    ("DEU", "Germany",        52.52,  13.40, 3.90e12, 4.50e12, 1, 1, 0),
    ("GRC", "Greece",         37.98,  23.73, 2.10e11, 2.40e11, 1, 1, 0),
    ("HUN", "Hungary",        47.50,  19.04, 1.60e11, 2.10e11, 1, 1, 0),
    ("IRL", "Ireland",        53.35,  -6.26, 4.00e11, 5.50e11, 1, 1, 0),
    ("ITA", "Italy",          41.90,  12.50, 2.00e12, 2.20e12, 1, 1, 0),
    ("LVA", "Latvia",         56.95,  24.11, 3.40e10, 4.70e10, 1, 1, 0),
    ("LTU", "Lithuania",      54.69,  25.28, 5.50e10, 7.90e10, 1, 1, 0),
    ("LUX", "Luxembourg",     49.61,   6.13, 7.00e10, 8.60e10, 1, 1, 0),
    ("MLT", "Malta",          35.90,  14.51, 1.50e10, 2.00e10, 1, 1, 0),
    ("NLD", "Netherlands",    52.37,   4.89, 9.10e11, 1.10e12, 1, 1, 0),
    ("POL", "Poland",         52.23,  21.01, 3.00e11, 3.60e11, 1, 1, 0),
    ("PRT", "Portugal",       38.72,  -9.14, 2.40e11, 2.90e11, 1, 1, 0),
    ("ROU", "Romania",        44.43,  26.10, 1.50e11, 1.90e11, 1, 1, 0),
    ("SVK", "Slovakia",       48.15,  17.11, 1.10e11, 1.30e11, 1, 1, 0),
    ("SVN", "Slovenia",       46.05,  14.51, 5.40e10, 6.90e10, 1, 1, 0),
    ("ESP", "Spain",          40.42,  -3.70, 1.40e12, 1.60e12, 1, 1, 0),
    ("SWE", "Sweden",         59.33,  18.07, 5.30e11, 5.90e11, 1, 1, 0),
    ("UKR", "Ukraine",        50.45,  30.52, 8.00e09, 7.00e09, 0, 0, 0),
    ("RUS", "Russia",         55.76,  37.62, 2.50e11, 2.40e11, 0, 0, 1),
    ("GBR", "United Kingdom", 51.51,  -0.13, 2.80e12, 3.30e12, 0, 1, 0),
    ("NOR", "Norway",         59.91,  10.75, 4.00e11, 4.90e11, 0, 1, 1),
    ("CHE", "Switzerland",    46.95,   7.45, 7.00e11, 8.80e11, 0, 1, 0),
    ("TUR", "Turkey",         39.93,  32.86, 6.00e11, 9.00e11, 0, 0, 0),
    ("USA", "United States",  38.90, -77.04, 2.10e13, 2.70e13, 0, 1, 0),
    ("CAN", "Canada",         45.42, -75.70, 1.70e12, 2.10e12, 0, 1, 1),
    ("MEX", "Mexico",         19.43, -99.13, 1.30e12, 1.80e12, 0, 0, 0),
    ("BRA", "Brazil",        -15.79, -47.88, 1.90e12, 2.20e12, 0, 0, 0),
    ("ARG", "Argentina",     -34.60, -58.38, 4.50e11, 6.40e11, 0, 0, 0),
    ("CHN", "China",          39.90, 116.41, 1.40e13, 1.80e13, 0, 0, 0),
    ("IND", "India",          28.61,  77.21, 2.90e12, 3.50e12, 0, 0, 0),
    ("JPN", "Japan",          35.68, 139.69, 5.10e12, 4.20e12, 0, 1, 0),
    ("KOR", "South Korea",    37.57, 126.98, 1.60e12, 1.70e12, 0, 1, 0),
    ("AUS", "Australia",     -35.28, 149.13, 1.40e12, 1.70e12, 0, 1, 0),
    ("SAU", "Saudi Arabia",   24.71,  46.68, 8.00e11, 1.10e12, 0, 0, 1),
    ("ARE", "UAE",            24.45,  54.38, 4.20e11, 5.10e11, 0, 0, 1),
    ("EGY", "Egypt",          30.04,  31.24, 3.00e11, 3.90e11, 0, 0, 0),
    ("ZAF", "South Africa",  -25.75,  28.19, 3.90e11, 3.80e11, 0, 0, 0),
    ("NGA", "Nigeria",         9.06,   7.49, 4.50e11, 3.60e11, 0, 0, 1),
    ("IDN", "Indonesia",      -6.20, 106.85, 1.10e12, 1.40e12, 0, 0, 0),
    ("MYS", "Malaysia",        3.14, 101.69, 3.60e11, 4.10e11, 0, 0, 0),
    ("SGP", "Singapore",       1.35, 103.82, 3.70e11, 5.00e11, 0, 0, 0),
    ("THA", "Thailand",       13.76, 100.50, 5.40e11, 5.10e11, 0, 0, 0),
    ("VNM", "Vietnam",        21.03, 105.85, 3.30e11, 4.30e11, 0, 0, 0),
    ("ISR", "Israel",         31.77,  35.21, 4.00e11, 5.10e11, 0, 0, 0),
    ("KAZ", "Kazakhstan",     51.17,  71.45, 1.80e11, 2.60e11, 0, 0, 1),
    ("GEO", "Georgia",        41.72,  44.79, 1.00e10, 1.30e10, 0, 0, 0),
    ("MDA", "Moldova",        47.01,  28.86, 8.00e09, 1.00e10, 0, 0, 0),
    ("ALB", "Albania",        41.33,  19.82, 1.00e10, 1.40e10, 0, 0, 0),
    ("SRB", "Serbia",         44.79,  20.45, 4.00e10, 5.50e10, 0, 0, 0),
    ("BIH", "Bosnia",         43.86,  18.41, 1.50e10, 2.00e10, 0, 0, 0),
]

EPICENTER = "UKR"

MINI = ["UKR", "DEU", "POL", "TUR", "FRA"]


def haversine(a, b):
    p1, l1, p2, l2 = map(math.radians, [a[0], a[1], b[0], b[1]])
    h = math.sin((p2 - p1) / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin((l2 - l1) / 2) ** 2
    return 2 * R_EARTH * math.asin(math.sqrt(h))


def gen_trade(rng, go, gd, dist, eu, sanc, enx, year):
    c = -23.7
    b_sanc = -1.55 if year == 2023 else 0.0
    mu = (c + 1.05 * math.log(go) + 0.95 * math.log(gd) - 1.3 * math.log(dist)
          + 0.45 * eu + b_sanc * sanc - 0.35 * enx)
    return math.exp(mu + rng.normal(0.0, 0.55))


def main():
    rng = np.random.default_rng(42)
    here = os.path.dirname(os.path.abspath(__file__))
    root = os.path.dirname(here)

    by_code = {c[0]: c for c in COUNTRIES}
    assert len(COUNTRIES) == 60

    os.makedirs(os.path.join(root, "data", "fixture"), exist_ok=True)
    os.makedirs(os.path.join(root, "data", "mini"), exist_ok=True)

    def write_countries(path, codes):
        with open(path, "w", newline="") as f:
            f.write("iso3,name,lat,lng,gdp_2019,gdp_2023,eu_member,sanctioning,energy_exporter\n")
            for code in codes:
                iso3, name, lat, lng, g19, g23, eu, sanc, enx = by_code[code]
                f.write(f"{iso3},{name},{lat:.2f},{lng:.2f},{g19:.6e},{g23:.6e},{eu},{sanc},{enx}\n")

    def pair_rows(codes, skip_origin=None, missing_rate_2023=0.0, missing_rate_2019=0.0,
                  force_missing_2023=()):
        rows = []
        for o in codes:
            if o == skip_origin:
                continue
            for d in codes:
                if o == d:
                    continue
                co, cd = by_code[o], by_code[d]
                dist = haversine((co[2], co[3]), (cd[2], cd[3]))
                eu = co[6] and cd[6]
                sanc = co[7] and d == "RUS"
                enx = co[8]
                t19 = gen_trade(rng, co[4], cd[4], dist, eu, 0, enx, 2019)
                t23 = gen_trade(rng, co[5], cd[5], dist, eu, sanc, enx, 2023)
                m19 = rng.random() < missing_rate_2019
                m23 = rng.random() < missing_rate_2023
                if sanc or d == EPICENTER:
                    m19 = m23 = False
                if (o, d) in force_missing_2023:
                    m23 = True
                rows.append((o, d, dist,
                             "" if m19 else f"{t19:.6e}",
                             "" if m23 else f"{t23:.6e}"))
        return rows

    def write_pairs(path, rows):
        with open(path, "w", newline="") as f:
            f.write("iso3_o,iso3_d,dist_km,trade_2019,trade_2023\n")
            for o, d, dist, t19, t23 in rows:
                f.write(f"{o},{d},{dist:.3f},{t19},{t23}\n")

    codes = [c[0] for c in COUNTRIES]
    write_countries(os.path.join(root, "data", "fixture", "countries.csv"), codes)
    fixture_rows = pair_rows(codes, skip_origin=EPICENTER,
                             missing_rate_2023=0.02, missing_rate_2019=0.01)
    write_pairs(os.path.join(root, "data", "fixture", "pairs.csv"), fixture_rows)

    write_countries(os.path.join(root, "data", "mini", "countries.csv"), MINI)
    mini_rows = pair_rows(MINI, force_missing_2023=(("FRA", "TUR"),))
    write_pairs(os.path.join(root, "data", "mini", "pairs.csv"), mini_rows)

    # ---- verification of the properties the test suite depends on ----
    epi = by_code[EPICENTER]
    R, sp, mask, eps = 550.0, 3.0, 0.9, 1e-10

    f_norm, f_s_coef, masked = [], [], []
    for o, d, dist, _, _ in fixture_rows:
        co, cd = by_code[o], by_code[d]
        fn = co[4] * cd[4] / dist ** 2
        depi = haversine((co[2], co[3]), (epi[2], epi[3]))
        s = R * R / (depi * depi + eps)
        f_norm.append(fn)
        f_s_coef.append(s)
        masked.append(o == EPICENTER or d == EPICENTER)
    f_norm = np.array(f_norm)
    s_arr = np.array(f_s_coef)
    masked = np.array(masked)

    share = f_norm[masked].sum() / f_norm.sum()
    assert share < 1e-3, f"epicenter F_norm share too large: {share:.2e}"

    def total_change(spv, Rv, mv):
        s = (Rv / 550.0) ** 2 * s_arr
        f_shock = f_norm * (1 - spv * s)
        f_shock = np.where(masked, f_shock * (1 - mv), f_shock)
        return (f_shock - f_norm).sum()

    totals_m = np.array([total_change(sp, R, m) for m in np.arange(0, 1.0, 0.11)])
    rel = (totals_m.max() - totals_m.min()) / abs(totals_m.mean())
    assert rel < 5e-3, f"mask sweep not insensitive: {rel:.2e}"

    totals_R = np.array([total_change(sp, rv, mask) for rv in range(100, 1501, 100)])
    d2 = np.diff(totals_R, 2)
    assert (d2 < 0).all(), "R sweep second differences must share a negative sign"

    f_shock = f_norm * (1 - sp * s_arr)
    f_shock = np.where(masked, f_shock * (1 - mask), f_shock)
    assert f_shock.sum() > 0, "total shocked force must stay positive"
    keep = (f_shock / f_shock.sum() > 5e-5) | masked

    def ftg_at(spv, mv):
        fs = f_norm * (1 - spv * s_arr)
        fs = np.where(masked, fs * (1 - mv), fs)
        w = fs[keep] / fs[keep].sum()
        eff = np.where(masked[keep], fs[keep] - f_norm[keep], 0.0)
        return (w * eff).sum()

    # negative aggregate at the default scenario and a band around it
    for spv in np.arange(1.0, 4.01, 0.5):
        v = ftg_at(spv, mask)
        assert v < 0, f"F_tg must be negative at s_p={spv}: {v:.3e}"
    for mv in np.arange(0.0, 1.0, 0.11):
        v = ftg_at(sp, mv)
        assert v < 0, f"F_tg must be negative at mask={mv}: {v:.3e}"

    print(f"fixture: {len(fixture_rows)} pairs, epicenter share {share:.2e}, "
          f"mask-sweep relative change {rel:.2e}, F_tg(defaults) {ftg_at(sp, mask):.4e}")
    print(f"mini: {len(mini_rows)} pairs")


if __name__ == "__main__":
    main()
