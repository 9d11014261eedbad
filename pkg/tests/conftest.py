import csv
import os

import numpy as np
import pytest

from lcorbits.atlas import build_atlas, connected_components, sort_orbits

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def load_table1():
    """Frozen published orbit table (103 rows)."""
    rows = []
    with open(os.path.join(DATA_DIR, "table1.csv")) as f:
        for r in csv.DictReader(f):
            rows.append({
                "orbit": int(r["orbit"]), "n": int(r["n"]), "V": int(r["V"]),
                "e": int(r["e"]), "chi_OG": int(r["chi_OG"]),
                "ln_NL": float(r["ln_NL"]), "chi_i": int(r["chi_i"]),
                "D": float(r["D"]), "aspl": float(r["aspl"]),
                "diameter": int(r["diameter"]),
                "deg_g_min": int(r["deg_g_min"]),
                "deg_OG_max": int(r["deg_OG_max"]),
                "ES_lower": int(r["ES_lower"]), "ES_upper": int(r["ES_upper"]),
            })
    return rows


@pytest.fixture(scope="session")
def table1():
    return load_table1()


def indexed_records(n_values, d=3):
    records = []
    for n in n_values:
        atlas = build_atlas(n, d)
        records += connected_components(atlas)
    return sort_orbits(sorted(records, key=lambda o: o.sort_key()))


@pytest.fixture(scope="session")
def records_n5():
    """All d=3 orbits for n = 3..5, indexed 1..9 as in the published table."""
    return indexed_records((3, 4, 5))


@pytest.fixture(scope="session")
def records_n6():
    """All d=3 orbits for n = 3..6, indexed 1..30."""
    return indexed_records((3, 4, 5, 6))
