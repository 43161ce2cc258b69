"""The 20 fusion-quality metrics and their registry.

Each registry entry binds a canonical name to a callable with the uniform
signature ``fn(a, b, f) -> float`` (single-image metrics ignore the two
sources), plus the metadata the harness needs: score orientation and the
minimum plane side the metric supports.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

from . import feature, info, perceptual, structural
from .feature import ag, ei, qabf, qp, sd, sf
from .info import ce, en, fmi, mi, nmi, psnr, q_ncie, te
from .perceptual import qcb, qcv, vif_fusion
from .structural import mef_ssim, qc, qw, qy, ssim_fusion, ssim_pair

__all__ = [
    "METRICS",
    "MetricSpec",
    "metric_names",
    "get_metric",
    "ag",
    "ce",
    "ei",
    "en",
    "fmi",
    "mef_ssim",
    "mi",
    "nmi",
    "psnr",
    "q_ncie",
    "qabf",
    "qc",
    "qcb",
    "qcv",
    "qp",
    "qw",
    "qy",
    "sd",
    "sf",
    "ssim_fusion",
    "ssim_pair",
    "te",
    "vif_fusion",
]


class MetricSpec(NamedTuple):
    name: str
    fn: Callable[..., float]
    lower_better: bool
    min_side: int
    single_image: bool


def _single(fn):
    def wrapper(a, b, f):
        return fn(f)

    return wrapper


METRICS: dict[str, MetricSpec] = {
    s.name: s
    for s in [
        MetricSpec("CE", ce, True, 1, False),
        MetricSpec("EN", _single(en), False, 1, True),
        MetricSpec("FMI", fmi, False, 3, False),
        MetricSpec("NMI", nmi, False, 1, False),
        MetricSpec("PSNR", psnr, False, 1, False),
        MetricSpec("QNCIE", q_ncie, False, 1, False),
        MetricSpec("TE", te, False, 1, False),
        MetricSpec("AG", _single(ag), False, 2, True),
        MetricSpec("EI", _single(ei), False, 3, True),
        MetricSpec("QABF", qabf, False, 3, False),
        MetricSpec("QP", qp, False, 32, False),
        MetricSpec("SD", _single(sd), False, 1, True),
        MetricSpec("SF", _single(sf), False, 2, True),
        MetricSpec("QY", qy, False, 8, False),
        MetricSpec("QC", qc, False, 8, False),
        MetricSpec("QW", qw, False, 8, False),
        MetricSpec("MEFSSIM", mef_ssim, False, 8, False),
        MetricSpec("QCB", qcb, False, 32, False),
        MetricSpec("QCV", qcv, True, 32, False),
        MetricSpec("VIF", vif_fusion, False, 64, False),
    ]
}


def metric_names() -> list[str]:
    return list(METRICS)


def get_metric(name: str) -> MetricSpec:
    try:
        return METRICS[name.upper()]
    except KeyError:
        valid = ", ".join(METRICS)
        raise KeyError(f"unknown metric {name!r}; valid names: {valid}") from None
