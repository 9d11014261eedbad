"""Summary statistics and correlation analysis over the orbit table.

Conventions pinned by reproducing the published statistics table: sample
(N-1) standard deviation and variance, population-moment Fisher skewness
and excess kurtosis, linear interpolation for the quartiles, and the mode
as the smallest value among the most frequent.  Interval-valued Schmidt
entries enter a series through a declared resolution mode; the published
tables correspond to the midpoint resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ES_MODES = ("lower", "mid", "upper")


class StatsError(Exception):
    pass


@dataclass
class Series:
    name: str
    values: np.ndarray
    log_transformed: bool = False

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1:
            raise StatsError("series must be one-dimensional")
        if np.isnan(self.values).any():
            raise StatsError(f"series {self.name!r} has missing entries")

    def log(self) -> "Series":
        if (self.values <= 0).any():
            raise StatsError(f"cannot log-transform {self.name!r}: nonpositive values")
        return Series(f"ln {self.name}", np.log(self.values), log_transformed=True)


def resolve_interval(lower: int, upper: int, mode: str) -> float:
    if mode == "lower":
        return float(lower)
    if mode == "mid":
        return (lower + upper) / 2.0
    if mode == "upper":
        return float(upper)
    raise StatsError(f"unknown interval mode {mode!r}; choose from {ES_MODES}")


def summary(series: Series) -> dict:
    """Mean, spread, shape and quartile statistics of one series."""
    x = series.values
    n = x.size
    if n < 2:
        raise StatsError("summary needs at least two values")
    mean = float(x.mean())
    std = float(x.std(ddof=1))
    var = float(x.var(ddof=1))
    centered = x - mean
    m2 = float((centered**2).mean())
    if m2 == 0.0:
        skew = kurt = 0.0
    else:
        skew = float((centered**3).mean() / m2**1.5)
        kurt = float((centered**4).mean() / m2**2 - 3.0)
    vals, counts = np.unique(x, return_counts=True)
    mode_val = float(vals[counts == counts.max()].min())
    q75, q25 = np.percentile(x, [75, 25])
    return {
        "mean": mean,
        "std": std,
        "variance": var,
        "median": float(np.median(x)),
        "mode": mode_val,
        "range": float(x.max() - x.min()),
        "iqr": float(q75 - q25),
        "skewness": skew,
        "kurtosis": kurt,
    }


def pearson(x: Series, y: Series) -> float:
    a, b = x.values, y.values
    if a.size != b.size or a.size < 2:
        raise StatsError("pearson needs two equal-length series of size >= 2")
    da, db = a - a.mean(), b - b.mean()
    va, vb = float((da**2).sum()), float((db**2).sum())
    if va == 0.0 or vb == 0.0:
        raise StatsError("correlation undefined for a zero-variance series")
    return float((da * db).sum() / math.sqrt(va * vb))


def kendall_tau(x: Series, y: Series) -> float:
    """tau = (p - q) / sqrt((p + q + t_x)(p + q + t_y)).

    Pairs tied in both series count toward neither t_x nor t_y.
    """
    a, b = x.values, y.values
    if a.size != b.size or a.size < 2:
        raise StatsError("kendall_tau needs two equal-length series of size >= 2")
    n = a.size
    p = q = tx = ty = 0
    for i in range(n):
        dx = a[i] - a[i + 1:]
        dy = b[i] - b[i + 1:]
        s = np.sign(dx) * np.sign(dy)
        p += int((s > 0).sum())
        q += int((s < 0).sum())
        tx += int(((dx == 0) & (dy != 0)).sum())
        ty += int(((dx != 0) & (dy == 0)).sum())
    denom = (p + q + tx) * (p + q + ty)
    if denom == 0:
        raise StatsError("kendall tau undefined: all pairs doubly tied")
    return (p - q) / math.sqrt(denom)


# The published strong-correlation table: (x, y, log_x, log_y).  The density
# enters the ASPL row log-scaled: the published Pearson value (-0.99) is only
# reproducible from ln D (the raw-D correlation is -0.64), and the row's
# Kendall value cannot tell the two apart (tau is transform-invariant).
CORRELATION_PAIRS = (
    ("E_S", "chi_OG", False, False),
    ("E_S", "D", False, True),
    ("E_S", "aspl", False, False),
    ("E_S", "diameter", False, False),
    ("E_S", "deg_OG_max", False, False),
    ("deg_OG_max", "chi_OG", False, False),
    ("deg_OG_max", "D", True, False),
    ("deg_OG_max", "aspl", False, False),
    ("deg_OG_max", "diameter", False, False),
    ("aspl", "diameter", False, False),
    ("D", "diameter", True, False),
    ("D", "aspl", True, False),
    ("chi_OG", "diameter", False, True),
    ("chi_OG", "aspl", False, True),
    ("chi_OG", "D", False, True),
)


def correlation_table(columns: dict, pairs=CORRELATION_PAIRS,
                      strong_threshold: float = 0.8) -> list:
    """(r, tau) for each configured pair; rows flagged when |r| passes the
    headline threshold."""
    out = []
    for xname, yname, logx, logy in pairs:
        x = Series(xname, columns[xname])
        y = Series(yname, columns[yname])
        if logx:
            x = x.log()
        if logy:
            y = y.log()
        r = pearson(x, y)
        tau = kendall_tau(x, y)
        out.append({
            "x": x.name,
            "y": y.name,
            "pearson": r,
            "kendall": tau,
            "strong": abs(r) > strong_threshold,
        })
    return out


def observable_columns(rows: list, es_mode: str = "mid") -> dict:
    """Column arrays from exported table rows (published rounding applied).

    The statistics operate on the table at its published precision; the
    loop count enters raw (not log-scaled) and interval Schmidt entries
    resolve per es_mode.
    """
    cols = {
        "chi_OG": [], "N_L": [], "chi_i": [], "D": [], "aspl": [],
        "diameter": [], "deg_g_min": [], "deg_OG_max": [], "E_S": [],
    }
    for row in rows:
        cols["chi_OG"].append(row["chi_OG"])
        cols["N_L"].append(row["N_L"])
        cols["chi_i"].append(row["chi_i"])
        cols["D"].append(round(row["D"], 5))
        cols["aspl"].append(round(row["aspl"], 2))
        cols["diameter"].append(row["diameter"])
        cols["deg_g_min"].append(row["deg_g_min"])
        cols["deg_OG_max"].append(row["deg_OG_max"])
        cols["E_S"].append(resolve_interval(row["E_S_lower"], row["E_S_upper"], es_mode))
    return {k: np.array(v, dtype=np.float64) for k, v in cols.items()}


def summary_table(columns: dict) -> dict:
    """Summary rows for the nine observables, in the published order."""
    order = ("chi_OG", "N_L", "chi_i", "D", "aspl", "diameter",
             "deg_g_min", "deg_OG_max", "E_S")
    return {name: summary(Series(name, columns[name])) for name in order}
