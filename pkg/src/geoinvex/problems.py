"""Built-in problem registry and config-driven problem resolution.

A :class:`ProblemInstance` bundles everything a suite run needs: a chart,
scalar field(s), an eta map, strength parameters, a sampling scheme, and
the list of checks with their expected outcomes.  Built-ins package the
standard demonstration instances (three counterexample fields on the
positive orthant, the negative-gradient monotone field, and two Euclidean
baselines); custom problems are assembled from the same registries via a
JSON config document.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .errors import SchemaError, UnknownProblem
from .eta import (
    ETA_EUCLIDEAN_DIFF,
    ETA_NEG_SQ_BOTH,
    ETA_NEG_SQ_FIRST,
    ETA_SHIFTED_NEG,
    EtaMap,
    gradient_eta,
)
from .fields import ScalarField
from .manifolds import Chart, Euclidean, PositiveOrthant2
from .sampling import SampleScheme, StrengthParams
from .vvlip import DominanceMode

# -- field registry --------------------------------------------------------

FIELDS: Dict[str, ScalarField] = {
    "u1_plus_u2_sq": ScalarField(
        lambda u: u[0] + u[1] ** 2,
        lambda u: np.array([1.0, 2.0 * u[1]]),
        label="u1 + u2^2",
    ),
    "log_u1_plus_log_u2_cubed": ScalarField(
        lambda u: math.log(u[0]) + math.log(u[1]) ** 3,
        lambda u: np.array([1.0 / u[0], 3.0 * math.log(u[1]) ** 2 / u[1]]),
        label="ln(u1) + ln(u2)^3",
    ),
    "u1_cubed_plus_log_u2": ScalarField(
        lambda u: u[0] ** 3 + math.log(u[1]),
        lambda u: np.array([3.0 * u[0] ** 2, 1.0 / u[1]]),
        label="u1^3 + ln(u2)",
    ),
    "sq_log_sum": ScalarField(
        lambda u: math.log(u[0]) ** 2 + math.log(u[1]) ** 2,
        lambda u: np.array([2.0 * math.log(u[0]) / u[0], 2.0 * math.log(u[1]) / u[1]]),
        label="ln(u1)^2 + ln(u2)^2",
    ),
    "sq_norm": ScalarField(
        lambda u: float(np.dot(u, u)),
        lambda u: 2.0 * np.asarray(u, float),
        label="|u|^2",
    ),
    "sq_dist_to_e1": ScalarField(
        lambda u: float(np.dot(u - _E1[: len(u)], u - _E1[: len(u)])),
        lambda u: 2.0 * (np.asarray(u, float) - _E1[: len(u)]),
        label="|u - e1|^2",
    ),
    "first_coord": ScalarField(
        lambda u: float(u[0]),
        lambda u: np.array([1.0] + [0.0] * (len(u) - 1)),
        label="u1",
    ),
}

_E1 = np.array([1.0, 0.0, 0.0, 0.0])

ETAS: Dict[str, EtaMap] = {
    "ex32": ETA_SHIFTED_NEG,
    "ex33": ETA_NEG_SQ_FIRST,
    "ex34": ETA_NEG_SQ_BOTH,
    "euclidean_diff": ETA_EUCLIDEAN_DIFF,
}


@dataclass(frozen=True)
class CheckSpec:
    """One suite entry: which check, how to run it, and what to expect."""

    id: str
    kind: str
    expected: Optional[str] = None
    options: Dict[str, object] = field(default_factory=dict)
    scheme: Optional[SampleScheme] = None


@dataclass(frozen=True)
class ProblemInstance:
    name: str
    chart: Chart
    scalar: Optional[ScalarField]
    eta: EtaMap
    strength: StrengthParams
    scheme: SampleScheme
    suite: Tuple[CheckSpec, ...]
    objectives: Tuple[ScalarField, ...] = ()
    weights: Tuple[float, ...] = ()
    bivariate: Optional[Callable[[np.ndarray, np.ndarray], float]] = None
    u_star: Optional[Tuple[float, ...]] = None
    scan_scheme: Optional[SampleScheme] = None
    dominance_mode: DominanceMode = DominanceMode.STRICT
    field_names: Tuple[str, ...] = ()
    eta_name: str = ""

    def check_scheme(self, spec: CheckSpec) -> SampleScheme:
        return spec.scheme if spec.scheme is not None else self.scheme


# Generic check vocabulary, used both for built-in suites and for ad-hoc
# --suite selections.  Values are (kind, default options).
GENERIC_CHECKS: Dict[str, Tuple[str, dict]] = {
    "invex": ("invex", {}),
    "preinvex_eta": ("preinvex", {"mode": "eta"}),
    "preinvex_from_v": ("preinvex", {"mode": "from_v"}),
    "preinvex_from_u": ("preinvex", {"mode": "from_u"}),
    "geodesic_convex": ("geodesic_convex", {}),
    "pseudo1": ("generalized", {"kind": "pseudo1"}),
    "pseudo2": ("generalized", {"kind": "pseudo2"}),
    "quasi1": ("generalized", {"kind": "quasi1"}),
    "quasi2": ("generalized", {"kind": "quasi2"}),
    "condition_c": ("condition_c", {}),
    "property_p": ("property_p", {}),
    "nemeth": ("nemeth", {}),
    "monotone": ("monotone", {"kind": "strong"}),
    "pseudo_monotone": ("monotone", {"kind": "pseudo"}),
    "cross_invex_monotone": ("cross_invex_monotone", {}),
    "cross_preinvex_invex": ("cross_preinvex_invex", {}),
    "closure": ("closure", {}),
    "infimal": ("infimal", {}),
    "minimizer": ("minimizer", {}),
    "vvlip": ("vvlip", {}),
    "scan": ("scan", {}),
    "invex_eta_identity": ("invex_eta_identity", {}),
}

_ORTHANT_BOX = ((0.5, 5.0), (0.5, 5.0))
_EUCLID_BOX = ((-1.0, 1.0), (-1.0, 1.0))

# Pinned demonstration pairs (the points the counterexamples are built on).
_PAIR_32 = ((0.25, 0.25), (1.0 / 9.0, 1.0 / 9.0))
_PAIR_33 = ((0.5, 0.5), (1.0, math.e ** 2))
_PAIR_34 = ((1.0, math.exp(-5.0)), (1.0, 1.0))


def _spec(check_id: str, expected: Optional[str], scheme=None, **extra) -> CheckSpec:
    kind, options = GENERIC_CHECKS[check_id]
    opts = dict(options)
    opts.update(extra)
    return CheckSpec(id=check_id, kind=kind, expected=expected, options=opts, scheme=scheme)


def _build_example_3_2(ov: dict) -> ProblemInstance:
    scheme = _scheme_from(ov, box=_ORTHANT_BOX)
    pinned = replace(
        scheme,
        grid_points_per_axis=0,
        random_pairs=0,
        extra_pairs=(_PAIR_32,),
        s_grid=(0.1,),
    )
    return ProblemInstance(
        name="example_3_2",
        chart=PositiveOrthant2(),
        scalar=FIELDS["u1_plus_u2_sq"],
        eta=ETAS["ex32"],
        strength=_strength_from(ov),
        scheme=scheme,
        suite=(
            _spec("invex", "holds"),
            _spec("preinvex_from_u", "violated", scheme=pinned),
            _spec("condition_c", "violated"),
            _spec("cross_invex_monotone", "consistent"),
        ),
        objectives=(FIELDS["u1_plus_u2_sq"],),
        u_star=(1.0, 1.0),
        scan_scheme=_scan_scheme_from(ov, box=_ORTHANT_BOX),
        field_names=("u1_plus_u2_sq",),
        eta_name="ex32",
    )


def _build_example_3_3(ov: dict) -> ProblemInstance:
    scheme = _scheme_from(ov, box=_ORTHANT_BOX, extra_pairs=(_PAIR_33,))
    return ProblemInstance(
        name="example_3_3",
        chart=PositiveOrthant2(),
        scalar=FIELDS["log_u1_plus_log_u2_cubed"],
        eta=ETAS["ex33"],
        strength=_strength_from(ov),
        scheme=scheme,
        suite=(
            _spec("invex", "violated"),
            _spec("pseudo1", "holds_vacuously"),
        ),
        field_names=("log_u1_plus_log_u2_cubed",),
        eta_name="ex33",
    )


def _build_example_3_4(ov: dict) -> ProblemInstance:
    scheme = _scheme_from(ov, box=((0.5, 2.0), (0.5, 2.0)), extra_pairs=(_PAIR_34,))
    return ProblemInstance(
        name="example_3_4",
        chart=PositiveOrthant2(),
        scalar=FIELDS["u1_cubed_plus_log_u2"],
        eta=ETAS["ex34"],
        strength=_strength_from(ov),
        scheme=scheme,
        suite=(
            _spec("invex", "violated"),
            _spec("quasi1", "holds"),
        ),
        field_names=("u1_cubed_plus_log_u2",),
        eta_name="ex34",
    )


def _build_example_4_1_m2(ov: dict) -> ProblemInstance:
    scheme = _scheme_from(ov, box=_ORTHANT_BOX)
    strength = _strength_from(ov)
    chart = PositiveOrthant2()
    h = FIELDS["u1_plus_u2_sq"]
    eta = gradient_eta(chart, h, strength.m)
    return ProblemInstance(
        name="example_4_1_m2",
        chart=chart,
        scalar=h,
        eta=eta,
        strength=strength,
        scheme=scheme,
        suite=(
            _spec("monotone", "holds"),
            _spec("nemeth", "holds"),
            _spec("pseudo_monotone", "holds_vacuously"),
            _spec("cross_invex_monotone", "consistent"),
        ),
        field_names=("u1_plus_u2_sq",),
        eta_name=eta.name,
    )


def _build_euclidean_baseline(ov: dict) -> ProblemInstance:
    scheme = _scheme_from(ov, box=_EUCLID_BOX)
    return ProblemInstance(
        name="euclidean_baseline",
        chart=Euclidean(2),
        scalar=FIELDS["sq_norm"],
        eta=ETAS["euclidean_diff"],
        strength=_strength_from(ov),
        scheme=scheme,
        suite=(
            _spec("invex", "holds"),
            _spec("preinvex_eta", "holds"),
            _spec("preinvex_from_v", "holds"),
            _spec("geodesic_convex", "holds"),
            _spec("condition_c", "satisfied"),
            _spec("property_p", "satisfied"),
            _spec("nemeth", "holds"),
            _spec("monotone", "holds"),
            _spec("pseudo_monotone", "holds"),
            _spec("cross_preinvex_invex", "consistent"),
            _spec("cross_invex_monotone", "consistent"),
            _spec("minimizer", "holds"),
            _spec("vvlip", "holds"),
            _spec("scan", "consistent"),
            _spec("invex_eta_identity", "satisfied"),
        ),
        objectives=(FIELDS["sq_norm"],),
        u_star=(0.0, 0.0),
        scan_scheme=_scan_scheme_from(ov, box=_EUCLID_BOX),
        field_names=("sq_norm",),
        eta_name="euclidean_diff",
    )


def _build_vvlip_demo(ov: dict) -> ProblemInstance:
    scheme = _scheme_from(ov, box=_EUCLID_BOX)
    objectives = (FIELDS["sq_norm"], FIELDS["sq_dist_to_e1"])
    return ProblemInstance(
        name="vvlip_demo",
        chart=Euclidean(2),
        scalar=FIELDS["sq_norm"],
        eta=ETAS["euclidean_diff"],
        strength=_strength_from(ov),
        scheme=scheme,
        suite=(
            _spec("minimizer", "holds"),
            _spec("vvlip", "holds"),
            _spec("scan", "consistent"),
            _spec("closure", "consistent"),
            _spec("infimal", "holds"),
        ),
        objectives=objectives,
        weights=(1.0, 1.0),
        bivariate=lambda u, v: float(np.dot(u, u) + np.dot(v, v)),
        u_star=(0.5, 0.0),
        scan_scheme=_scan_scheme_from(ov, box=_EUCLID_BOX),
        field_names=("sq_norm", "sq_dist_to_e1"),
        eta_name="euclidean_diff",
    )


BUILTIN_BUILDERS: Dict[str, Callable[[dict], ProblemInstance]] = {
    "example_3_2": _build_example_3_2,
    "example_3_3": _build_example_3_3,
    "example_3_4": _build_example_3_4,
    "example_4_1_m2": _build_example_4_1_m2,
    "euclidean_baseline": _build_euclidean_baseline,
    "vvlip_demo": _build_vvlip_demo,
}


def builtin_names() -> Tuple[str, ...]:
    return tuple(sorted(BUILTIN_BUILDERS))


def _scheme_from(ov: dict, box, extra_pairs=()) -> SampleScheme:
    box = tuple(tuple(ax) for ax in ov.get("box", box))
    return SampleScheme(
        box=box,
        grid_points_per_axis=int(ov.get("grid", 9)),
        random_pairs=int(ov.get("random_pairs", 1000)),
        seed=int(ov.get("seed", 7)),
        s_grid=tuple(ov.get("s_grid", (0.1, 0.25, 0.5, 0.75, 0.9))),
        extra_pairs=tuple(
            (tuple(a), tuple(b)) for a, b in ov.get("extra_pairs", extra_pairs)
        ),
    )


def _scan_scheme_from(ov: dict, box) -> SampleScheme:
    box = tuple(tuple(ax) for ax in ov.get("box", box))
    return SampleScheme(
        box=box,
        grid_points_per_axis=int(ov.get("scan_grid", 21)),
        random_pairs=0,
        seed=int(ov.get("seed", 7)),
    )


def _strength_from(ov: dict) -> StrengthParams:
    return StrengthParams(delta=float(ov.get("delta", 0.0)), m=int(ov.get("m", 2)))


def _apply_suite_selection(problem: ProblemInstance, ids) -> ProblemInstance:
    declared = {spec.id: spec for spec in problem.suite}
    specs = []
    for check_id in ids:
        if check_id in declared:
            specs.append(declared[check_id])
        elif check_id in GENERIC_CHECKS:
            specs.append(_spec(check_id, None))
        else:
            raise SchemaError(f"unknown check id {check_id!r}", field="suite")
    return replace(problem, suite=tuple(specs))


def _expect_overrides(problem: ProblemInstance, expect: dict) -> ProblemInstance:
    specs = []
    for spec in problem.suite:
        if spec.id in expect:
            specs.append(replace(spec, expected=str(expect[spec.id])))
        else:
            specs.append(spec)
    return replace(problem, suite=tuple(specs))


_CONFIG_KEYS = {
    "problem", "name", "chart", "dim", "field", "objectives", "eta",
    "m", "delta", "box", "grid", "random_pairs", "seed", "s_grid",
    "extra_pairs", "suite", "u_star", "dominance_mode", "expect",
    "scan_grid", "weights",
}


def load_problem(source, overrides: Optional[dict] = None) -> ProblemInstance:
    """Resolve a problem from a built-in name, a config dict, or JSON text.

    ``overrides`` (typically from CLI flags) are applied on top of either
    form.  Unknown names raise UnknownProblem; malformed configs raise
    SchemaError pointing at the offending field.
    """
    overrides = dict(overrides or {})
    if isinstance(source, str):
        stripped = source.strip()
        if stripped.startswith("{"):
            try:
                source = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid JSON: {exc}", field="<config>") from exc
        elif stripped in BUILTIN_BUILDERS:
            return _finalize(BUILTIN_BUILDERS[stripped](overrides), overrides)
        else:
            raise UnknownProblem(
                f"unknown problem {source!r}; built-ins: {', '.join(builtin_names())}"
            )
    if not isinstance(source, dict):
        raise SchemaError(f"config must be a JSON object, got {type(source).__name__}", field="<config>")
    return _from_config(source, overrides)


def _finalize(problem: ProblemInstance, overrides: dict) -> ProblemInstance:
    if "suite" in overrides and overrides["suite"]:
        problem = _apply_suite_selection(problem, overrides["suite"])
    if "dominance_mode" in overrides:
        problem = replace(
            problem, dominance_mode=DominanceMode(overrides["dominance_mode"])
        )
    return problem


def _from_config(cfg: dict, overrides: dict) -> ProblemInstance:
    for key in cfg:
        if key not in _CONFIG_KEYS:
            raise SchemaError(f"unknown key {key!r}", field=key)
    merged = dict(cfg)
    merged.update({k: v for k, v in overrides.items() if v is not None})

    if "problem" in cfg:
        base_name = cfg["problem"]
        if base_name not in BUILTIN_BUILDERS:
            raise UnknownProblem(f"unknown base problem {base_name!r}")
        problem = BUILTIN_BUILDERS[base_name](merged)
        if "name" in cfg:
            problem = replace(problem, name=str(cfg["name"]))
        if "expect" in cfg:
            problem = _expect_overrides(problem, dict(cfg["expect"]))
        if "suite" in cfg and "suite" not in overrides:
            problem = _apply_suite_selection(problem, list(cfg["suite"]))
        return _finalize(problem, overrides)

    chart = _chart_from_config(merged)
    field_name = merged.get("field")
    objective_names = list(merged.get("objectives", []))
    if field_name is None and not objective_names:
        raise SchemaError("config needs 'field' or 'objectives'", field="field")
    try:
        scalar = FIELDS[field_name] if field_name else FIELDS[objective_names[0]]
        objectives = tuple(FIELDS[n] for n in objective_names) or (scalar,)
    except KeyError as exc:
        raise SchemaError(
            f"unknown field {exc.args[0]!r}; known: {', '.join(sorted(FIELDS))}",
            field="field",
        ) from exc

    strength = _strength_from(merged)
    eta_name = merged.get("eta", "euclidean_diff")
    if eta_name == "neg_gradient":
        eta = gradient_eta(chart, scalar, strength.m)
    elif eta_name in ETAS:
        eta = ETAS[eta_name]
    else:
        raise SchemaError(
            f"unknown eta {eta_name!r}; known: {', '.join(sorted(ETAS))} or neg_gradient",
            field="eta",
        )

    default_box = _ORTHANT_BOX if isinstance(chart, PositiveOrthant2) else _EUCLID_BOX
    if chart.dim != 2:
        default_box = tuple(((-1.0, 1.0),) * chart.dim)
    scheme = _scheme_from(merged, box=default_box)
    suite_ids = list(merged.get("suite") or (["invex", "preinvex_eta"] if field_name else ["scan"]))
    problem = ProblemInstance(
        name=str(merged.get("name", "custom")),
        chart=chart,
        scalar=scalar,
        eta=eta,
        strength=strength,
        scheme=scheme,
        suite=(),
        objectives=objectives,
        weights=tuple(merged.get("weights", (1.0,) * len(objectives))),
        u_star=tuple(merged["u_star"]) if "u_star" in merged else None,
        scan_scheme=_scan_scheme_from(merged, box=default_box),
        dominance_mode=DominanceMode(merged.get("dominance_mode", "strict")),
        field_names=tuple(objective_names or ([field_name] if field_name else [])),
        eta_name=eta_name,
    )
    problem = _apply_suite_selection(problem, suite_ids)
    if "expect" in merged and isinstance(merged["expect"], dict):
        problem = _expect_overrides(problem, dict(merged["expect"]))
    return problem


def _chart_from_config(cfg: dict) -> Chart:
    name = cfg.get("chart", "positive_orthant2")
    if name in ("positive_orthant2", "orthant"):
        return PositiveOrthant2()
    if name in ("euclidean", "euclidean_n"):
        return Euclidean(int(cfg.get("dim", 2)))
    raise SchemaError(f"unknown chart {name!r}", field="chart")
