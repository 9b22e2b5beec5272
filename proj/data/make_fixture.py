#!/usr/bin/env python3
"""Builds the 12-station synthetic temperature fixture.

Writes stations12.csv (monthly series) and stations12_cov.csv, the covariance
of the month-over-month differences computed independently with numpy. The
C++ ingestion path is tested against the latter.
"""
import numpy as np

rng = np.random.default_rng(20240817)

N = 12
T = 25  # monthly readings -> 24 differences
groups = ["europe"] * 4 + ["america"] * 4 + ["asia"] * 4
lats = np.round(rng.uniform(-60, 65, N), 2)
lons = np.round(rng.uniform(-180, 180, N), 2)

# Per-station variation scale (std dev of monthly differences).
scales = rng.uniform(1.4, 3.2, N)

diffs = rng.standard_normal((N, T - 1)) * scales[:, None]
# Stations 0 and 1 are near-duplicates: strongly correlated variations.
diffs[1] = 0.995 * diffs[0] + 0.1 * rng.standard_normal(T - 1)
# A continental common mode couples stations within each group a little.
for start in (0, 4, 8):
    common = rng.standard_normal(T - 1)
    for s in range(start, start + 4):
        if s == 1:
            continue
        diffs[s] += 0.35 * common

series = np.cumsum(np.concatenate([rng.uniform(-5, 25, (N, 1)), diffs], axis=1), axis=1)

with open("stations12.csv", "w") as f:
    f.write("station_id,group,lat,lon," + ",".join(f"v{t+1}" for t in range(T)) + "\n")
    for s in range(N):
        values = ",".join(f"{v:.10g}" for v in series[s])
        f.write(f"st{s:02d},{groups[s]},{lats[s]},{lons[s]},{values}\n")

# Re-read the rounded CSV so the reference covariance sees the same numbers
# the C++ parser will.
rows = []
with open("stations12.csv") as f:
    next(f)
    for line in f:
        rows.append([float(x) for x in line.strip().split(",")[4:]])
series_rt = np.asarray(rows)
variation = np.diff(series_rt, axis=1)
cov = np.cov(variation)  # Bessel-corrected, matching the ingestion path

with open("stations12_cov.csv", "w") as f:
    for i in range(N):
        f.write(",".join(f"{cov[i, j]:.17g}" for j in range(N)) + "\n")

# Sanity: the entropy objective on this covariance must be non-negative on
# every subset and must dip somewhere (non-monotone).
ridge = 1e-9 * np.trace(cov) / N
per_dim = 0.5 * (1.0 + np.log(2 * np.pi))
def entropy(idx):
    if not idx:
        return 0.0
    sub = cov[np.ix_(idx, idx)]
    sign, logdet = np.linalg.slogdet(sub + ridge * np.eye(len(idx)))
    assert sign > 0
    return per_dim * len(idx) + 0.5 * logdet

dip = False
for mask in range(1 << N):
    idx = [i for i in range(N) if mask >> i & 1]
    h = entropy(idx)
    assert h >= -1e-9, (idx, h)
    for e in range(N):
        if e not in idx and entropy(sorted(idx + [e])) < h - 1e-9:
            dip = True
print("non-monotone dip present:", dip)
assert dip
