"""Seeded trial batches over one instance, with oracle comparison and CSV output."""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

from . import edge_estimator as ee
from . import vertex_estimator as ve
from .graph import GraphStream, Mode, ModeMismatchError, materialize, read_stream
from .oracles import ALPHA_EXACT_LIMIT, alpha_exact, beta_exact
from .stream_gen import GadgetSpec, UniformShuffle, flatten_to_edges, gen_gadget_stream, gen_gnm, to_stream

SCHEMA_VERSION = 1
ND_ORACLE_LIMIT = 10_000
ESTIMATORS = ("eps", "phi", "vertex", "degtest")


class PlanError(ValueError):
    pass


@dataclass(frozen=True)
class TrialPlan:
    source: str
    mode: Mode
    estimator: str
    eps: float = 0.25
    phi: float = 3.0
    gamma: float | None = None
    d: int | None = None
    trials: int = 1
    base_seed: int = 0
    oracle: str = "auto"
    C: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.estimator not in ESTIMATORS:
            raise PlanError(f"unknown estimator {self.estimator!r}")
        if self.estimator in ("eps", "phi") and self.mode is not Mode.EDGE:
            raise PlanError(f"estimator {self.estimator!r} needs --mode edge")
        if self.estimator in ("vertex", "degtest") and self.mode is not Mode.VERTEX:
            raise PlanError(f"estimator {self.estimator!r} needs --mode vertex")
        if self.estimator == "degtest" and self.d is None:
            raise PlanError("degtest needs a degree bound d")
        if self.trials < 1:
            raise PlanError("trials must be positive")
        if self.oracle not in ("auto", "off"):
            raise PlanError("oracle must be 'auto' or 'off'")


@dataclass
class TrialRecord:
    trial: int
    seed: int
    estimate: float
    exact_beta: float | None
    exact_alpha: int | None
    exact_nd: int | None
    ratio: float | None
    sample_size: int
    space_bits: int
    wall_time: float = field(default=0.0, compare=False)


def parse_gen_spec(spec: str) -> tuple[str, dict[str, str]]:
    kind, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, sep, val = item.partition("=")
        if not sep:
            raise PlanError(f"malformed generator parameter {item!r}")
        params[key.strip()] = val.strip()
    return kind, params


def _int_set(text: str) -> frozenset[int]:
    return frozenset(int(t) for t in text.replace(";", "+").split("+") if t)


def load_instance(plan: TrialPlan) -> GraphStream:
    """The stream every trial of the plan runs over."""
    if ":" not in plan.source:
        try:
            stream = read_stream(plan.source)
        except OSError as exc:
            raise PlanError(f"cannot read {plan.source}: {exc}") from exc
        if stream.mode is not plan.mode:
            raise ModeMismatchError(f"{plan.source} is a {stream.mode.value}-arrival stream")
        return stream
    kind, params = parse_gen_spec(plan.source)
    try:
        seed = int(params.get("seed", plan.base_seed))
        if kind == "gnm":
            g = gen_gnm(int(params["n"]), int(params["m"]), seed)
            return to_stream(g, plan.mode, UniformShuffle(seed))
        if kind == "gadget":
            spec = GadgetSpec(
                int(params["k"]), int(params["z"]), int(params["c"]),
                _int_set(params.get("x", "")), _int_set(params.get("y", "")),
            )
            stream = gen_gadget_stream(spec)
            return stream if plan.mode is Mode.VERTEX else flatten_to_edges(stream)
    except KeyError as exc:
        raise PlanError(f"generator {kind!r} is missing parameter {exc}") from exc
    except ValueError as exc:
        raise PlanError(f"bad generator spec {plan.source!r}: {exc}") from exc
    raise PlanError(f"unknown generator {kind!r}")


def _edge_count(stream: GraphStream) -> int:
    if stream.mode is Mode.EDGE:
        return len(stream.events)
    return sum(len(ev.back) for ev in stream.events)


def default_gamma(stream: GraphStream) -> float:
    """Turan bound n / (avg degree + 1) from the declared n and the edge count."""
    n, m = stream.declared_n, _edge_count(stream)
    return n * n / (2 * m + n) if n else 1.0


def run_plan(plan: TrialPlan, stream: GraphStream | None = None) -> list[TrialRecord]:
    if stream is None:
        stream = load_instance(plan)
    # materialising validates the stream and feeds the oracles
    g = materialize(stream)
    exact_beta = exact_alpha = exact_nd = None
    if plan.oracle == "auto":
        exact_beta = beta_exact(g)
        if g.n <= ALPHA_EXACT_LIMIT:
            exact_alpha = alpha_exact(g)
        if plan.estimator == "degtest" and g.n <= ND_ORACLE_LIMIT:
            exact_nd = ve.n_d_from_stream(stream, plan.d)
    gamma = plan.gamma if plan.gamma is not None else default_gamma(stream)

    records = []
    for t in range(plan.trials):
        seed = plan.base_seed + t
        start = time.perf_counter()
        if plan.estimator == "eps":
            rep = ee.estimate_eps(stream, plan.eps, gamma, seed, plan.C, validate=False)
            est, size, bits = rep.beta_hat, rep.sample_size, rep.space_bits
        elif plan.estimator == "phi":
            res = ee.estimate_phi_report(stream, plan.phi, gamma, seed, plan.C, validate=False)
            est, size, bits = res.value, res.inner.sample_size, res.inner.space_bits
        elif plan.estimator == "vertex":
            vrep = ve.estimate_vertex_arrival(stream, seed, validate=False)
            est, size, bits = vrep.gamma_hat, vrep.sample_size, vrep.space_bits
        else:
            st = ve.degtest(stream, plan.d, plan.eps, seed, validate=False)
            est, size, bits = st.m, st.peak, st.peak * ve.BITS_PER_SAMPLE
        wall = time.perf_counter() - start
        ref = exact_nd if plan.estimator == "degtest" else exact_beta
        records.append(TrialRecord(t, seed, est, exact_beta, exact_alpha, exact_nd,
                                   _ratio(est, ref), size, bits, wall))
    return records


def _ratio(est: float, ref: float | None) -> float | None:
    if ref is None:
        return None
    if est == ref:
        return 1.0
    if est <= 0 or ref <= 0:
        return math.inf
    return max(est / ref, ref / est)


@dataclass(frozen=True)
class Summary:
    trials: int
    fraction_within: dict[float, float]
    mean_sample_size: float
    max_sample_size: int
    mean_space_bits: float


def summarize(records: Sequence[TrialRecord], factors: Iterable[float] = (1.25, 1.5, 3.0)) -> Summary:
    if not records:
        raise ValueError("cannot summarize an empty record list")
    rated = [r.ratio for r in records if r.ratio is not None]
    within = {}
    for f in sorted(set(factors)):
        within[f] = sum(1 for x in rated if x <= f) / len(rated) if rated else math.nan
    sizes = [r.sample_size for r in records]
    return Summary(
        trials=len(records),
        fraction_within=within,
        mean_sample_size=sum(sizes) / len(sizes),
        max_sample_size=max(sizes),
        mean_space_bits=sum(r.space_bits for r in records) / len(records),
    )


def plan_factors(plan: TrialPlan) -> tuple[float, ...]:
    return (1 + plan.eps, 1.5, plan.phi)


# --- CSV -------------------------------------------------------------------

PARAM_COLUMNS = ("source", "mode", "est", "eps", "phi", "gamma", "d", "C", "n", "m")
RECORD_COLUMNS = ("trial", "seed", "estimate", "exact_beta", "exact_alpha", "exact_nd",
                  "ratio", "sample_size", "space_bits")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def plan_params(plan: TrialPlan, stream: GraphStream) -> dict:
    gamma = plan.gamma if plan.gamma is not None else default_gamma(stream)
    return {
        "source": plan.source, "mode": plan.mode.value, "est": plan.estimator,
        "eps": plan.eps, "phi": plan.phi, "gamma": gamma, "d": plan.d,
        "C": plan.C, "n": stream.declared_n, "m": _edge_count(stream),
    }


def records_to_csv(records: Sequence[TrialRecord], params: dict, timing: bool = False) -> str:
    """Versioned CSV; wall time is left out unless asked for so reruns diff clean."""
    buf = io.StringIO()
    buf.write(f"schema={SCHEMA_VERSION}\n")
    cols = list(RECORD_COLUMNS) + (["wall_time"] if timing else []) + list(PARAM_COLUMNS)
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in records:
        row = asdict(r)
        w.writerow([_fmt(row[c]) if c in row else _fmt(params[c]) for c in cols])
    return buf.getvalue()


def summary_to_csv(summary: Summary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    within_cols = [f"within_{f!r}" for f in summary.fraction_within]
    w.writerow(["trials", *within_cols, "mean_sample_size", "max_sample_size", "mean_space_bits"])
    w.writerow([summary.trials, *(_fmt(v) for v in summary.fraction_within.values()),
                _fmt(summary.mean_sample_size), summary.max_sample_size,
                _fmt(summary.mean_space_bits)])
    return buf.getvalue()


def read_records_csv(text: str) -> list[dict]:
    lines = text.splitlines()
    if not lines or lines[0] != f"schema={SCHEMA_VERSION}":
        raise ValueError("unsupported or missing schema line")
    return list(csv.DictReader(lines[1:]))

