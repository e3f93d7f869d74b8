import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from chainc.catalog import CatalogStore
from chainc.grammar import parse

settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("fast", max_examples=20, deadline=None)
settings.register_profile("debugger", report_multiple_bugs=False)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))

SAMPLES_DIR = Path(__file__).resolve().parent.parent / "samples"

# sample file -> canonical text
GOLDEN = {
    "bng-nat.sfc": "service { BNG , NAT }",
    "bb.sfc": "service { best-binding { BNG , NAT } }",
    "split-http-filter.sfc": "service { split { BNG ; HTTP-Filter ; pass } , NAT }",
    "mobile.sfc": "service { PGW , FW , split { DPI ; Header-Enr ; LI , Video-Opt ; TCP-Opt } }",
    "datacenter.sfc": "service { all-bindings { WOC , EdgeFW , MON , ADC , AppFW } }",
}


@pytest.fixture
def samples_dir() -> Path:
    return SAMPLES_DIR


@pytest.fixture
def sample():
    """Parse a file from samples/"""

    def load(name: str):
        return parse((SAMPLES_DIR / name).read_text(encoding="utf-8"))

    return load


@pytest.fixture
def store(tmp_path) -> CatalogStore:
    return CatalogStore(tmp_path / "catalog")
