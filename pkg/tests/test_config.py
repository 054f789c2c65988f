from fractions import Fraction as F
from pathlib import Path

import pytest
from pydantic import ValidationError

from toric_config import (BlowupSpec, CPNSpec, IntervalSpec, OracleSettings,
                          PipelineSettings, ProbeSettings, ProductSpec,
                          SurveyConfig)
from toricpy.reduction import polytope_equal
from toricpy.polytope import blowup_face

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def test_rationals_are_normalized():
    spec = BlowupSpec(n=2, k=0, lam="2/16")
    assert spec.lam == "1/8"
    assert CPNSpec(n=2, scale=3).scale == "3/1"
    assert polytope_equal(spec.build(), blowup_face(2, 0, F(1, 8)))
    with pytest.raises(ValidationError, match="lam"):
        BlowupSpec(n=2, lam="1/0")


def test_field_checks():
    with pytest.raises(ValidationError, match="n-2"):
        BlowupSpec(n=2, k=1, lam="1/8")
    with pytest.raises(ValidationError, match="positive"):
        CPNSpec(n=2, scale="-1/2")
    with pytest.raises(ValidationError, match="hi must be > lo"):
        IntervalSpec(lo=1, hi=0)
    with pytest.raises(ValidationError):
        CPNSpec(n=2, size=3)
    with pytest.raises(ValidationError):
        ProbeSettings(dir_bound=7)
    with pytest.raises(ValidationError, match="escalate_to"):
        ProbeSettings(dir_bound=4, escalate_to=3)
    with pytest.raises(ValidationError, match="eps2"):
        OracleSettings(eps1="1/100", eps2="1/10")
    assert PipelineSettings(n=2, alpha="1/6", lambdas=["2/32"]).lambdas == ["1/16"]


def test_product_spec():
    spec = ProductSpec(factors=[{"type": "cpn", "n": 2},
                                {"type": "interval", "lo": 0, "hi": 1}])
    delta = spec.build()
    assert delta.dim == 3
    (cl,) = spec.critical_classes()
    assert cl.values == (F(1, 3), F(1, 3), F(1, 2))
    assert cl.multiplicity == 6
    nested = ProductSpec(factors=[spec.dict(), {"type": "double_blowup",
                                                "n": 2, "alpha": "1/6"}])
    assert nested.critical_classes() is None
    with pytest.raises(ValidationError):
        ProductSpec(factors=[{"type": "cpn", "n": 2}])


@pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.yaml")),
                         ids=lambda p: p.stem)
def test_shipped_configs_load(path):
    config = SurveyConfig.from_yaml(str(path))
    assert config.name
    assert config.polytope.build().dim >= 1


def test_yaml_roundtrip(tmp_path):
    config = SurveyConfig.from_yaml(str(CONFIGS / "blowup_small.yaml"))
    target = tmp_path / "copy.yaml"
    config.to_yaml(str(target))
    again = SurveyConfig.from_yaml(str(target))
    assert again == config
    assert "lam: 1/8" in target.read_text()


def test_bad_name():
    with pytest.raises(ValidationError, match="file stem"):
        SurveyConfig(name="a/b", polytope={"type": "cpn", "n": 2})
