"""Command-line front end: one JSON document in, one JSON document out.

Every public operation is exposed as a subcommand. Distributions travel
as arrays of plain probabilities (converted to log domain internally),
channels as {"labels": [...], "rows": [[...], ...]}. Outputs carry
{result, unit, diagnostics}; infinities are serialized as the strings
"inf" and "-inf" since JSON has no literals for them. Exit codes:
0 success, 2 validation error, 3 numerical failure (non-convergence),
4 domain error. Identical command, input, and seed produce byte-
identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .capacity import (
    Channel,
    conjecture_probe,
    minimax_redundancy,
    ml_capacity_input,
    shtarkov,
)
from .chernoff import chernoff, pinsker_check, tilted
from .discretize import DensitySpec, refine_to_convergence
from .distributions import DiscreteDist, as_order
from .divergence import divergence_curve, renyi_divergence, renyi_entropy
from .errors import ConvergenceError, DomainError, ValidationError
from .gaussian import (
    GaussianParams,
    PowerLawBound,
    SequenceSpec,
    gaussian_dichotomy,
    gaussian_renyi,
    product_divergence,
)
from .mixtures import alpha_mixture, alpha_project

COMMANDS = (
    "div",
    "curve",
    "entropy",
    "gaussian",
    "product",
    "dichotomy",
    "mixture",
    "project",
    "tilt",
    "chernoff",
    "pinsker",
    "capacity",
    "shtarkov",
    "mlinput",
    "probe",
    "discretize",
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_DOMAIN = 4

LN2 = math.log(2.0)


@dataclass(frozen=True)
class JobSpec:
    command: str
    params: dict
    base: str = "nats"
    seed: int = 0
    tol: float = 1e-8

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if self.base not in ("nats", "bits"):
            raise ValidationError("base must be 'nats' or 'bits'")


def _scale(value, base: str):
    """Convert a nats-valued scalar (or array/list of them) to the base."""
    if base == "nats":
        return value
    if isinstance(value, (list, tuple)):
        return [_scale(v, base) for v in value]
    if isinstance(value, np.ndarray):
        return value / LN2
    return value / LN2


def _jsonify(obj):
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, float):
        if math.isnan(obj):
            raise RuntimeError("NaN escaped into an output document")
        if obj == math.inf:
            return "inf"
        if obj == -math.inf:
            return "-inf"
    return obj


def _require(doc: dict, key: str):
    if not isinstance(doc, dict) or key not in doc:
        raise ValidationError(f"input document is missing the field {key!r}")
    return doc[key]


def _dist(value) -> DiscreteDist:
    if not isinstance(value, list) or not value:
        raise ValidationError("a distribution must be a nonempty array of numbers")
    try:
        return DiscreteDist.from_probs(np.asarray(value, dtype=float))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"bad distribution: {exc}") from exc


def _gaussian(value) -> GaussianParams:
    if not isinstance(value, dict):
        raise ValidationError("a Gaussian is an object with 'mean' and 'variance'")
    return GaussianParams(float(_require(value, "mean")), float(_require(value, "variance")))


def _channel(doc) -> Channel:
    rows = _require(doc, "rows")
    if not isinstance(rows, list) or not rows:
        raise ValidationError("'rows' must be a nonempty array of distributions")
    labels = tuple(str(x) for x in doc.get("labels", []))
    return Channel(tuple(_dist(r) for r in rows), labels)


def _alpha(params: dict):
    if "alpha" not in params or params["alpha"] is None:
        raise ValidationError("this command requires --alpha")
    return as_order(params["alpha"])


def parse_alpha(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return math.inf
    if t in ("-inf", "-infinity"):
        return -math.inf
    try:
        return float(t)
    except ValueError:
        raise ValidationError(f"cannot parse order {text!r}") from None


def run(job: JobSpec, doc: dict) -> tuple[dict, int]:
    """Execute one job against one input document.

    Returns the output document and the exit code; errors are reported
    as {"error", "detail"} documents with the matching nonzero code.
    """
    try:
        result, diagnostics = _dispatch(job, doc)
    except ValidationError as exc:
        return {"error": "validation", "detail": str(exc)}, EXIT_VALIDATION
    except DomainError as exc:
        return {"error": "domain", "detail": str(exc)}, EXIT_DOMAIN
    except ConvergenceError as exc:
        return {"error": "convergence", "detail": str(exc)}, EXIT_NUMERICAL
    if diagnostics.get("converged") is False:
        return (
            {"error": "convergence", "detail": "solver exhausted its budget"},
            EXIT_NUMERICAL,
        )
    diagnostics.setdefault("iterations", None)
    diagnostics.setdefault("converged", None)
    diagnostics["seed"] = job.seed
    diagnostics["tolerances"] = {"tol": job.tol}
    out = {
        "result": _jsonify(result),
        "unit": job.base,
        "diagnostics": _jsonify(diagnostics),
    }
    return out, EXIT_OK


def _dispatch(job: JobSpec, doc: dict):
    params = job.params
    base = job.base
    cmd = job.command

    if cmd == "div":
        value = renyi_divergence(_dist(_require(doc, "p")), _dist(_require(doc, "q")), _alpha(params))
        return _scale(value, base), {}

    if cmd == "curve":
        p, q = _dist(_require(doc, "p")), _dist(_require(doc, "q"))
        alphas = [as_order(parse_alpha(str(a))).value for a in _require(doc, "alphas")]
        values = divergence_curve(p, q, alphas)
        rows = [
            {"alpha": a, "divergence": _scale(v, base)} for a, v in zip(alphas, values)
        ]
        return rows, {}

    if cmd == "entropy":
        value = renyi_entropy(_dist(_require(doc, "p")), _alpha(params))
        return _scale(value, base), {}

    if cmd == "gaussian":
        value = gaussian_renyi(
            _gaussian(_require(doc, "g0")), _gaussian(_require(doc, "g1")), _alpha(params)
        )
        return _scale(value, base), {}

    if cmd == "product":
        pairs = []
        for entry in _require(doc, "pairs"):
            kind = _require(entry, "kind")
            if kind == "gaussian":
                pairs.append((_gaussian(_require(entry, "p")), _gaussian(_require(entry, "q"))))
            elif kind == "discrete":
                pairs.append((_dist(_require(entry, "p")), _dist(_require(entry, "q"))))
            else:
                raise ValidationError(f"unknown pair kind {kind!r}")
        return _scale(product_divergence(pairs, _alpha(params)), base), {}

    if cmd == "dichotomy":
        coeff = float(_require(doc, "gap_coeff"))
        exponent = float(_require(doc, "gap_exponent"))
        trunc = int(_require(doc, "truncation"))
        tail_test = doc.get("tail_test", "comparison-bound")
        if tail_test not in ("comparison-bound", "none"):
            raise ValidationError("tail_test must be 'comparison-bound' or 'none'")
        tail = None
        if tail_test == "comparison-bound":
            # squared gaps follow coeff^2 * n^(-2 exponent) exactly
            side = "upper" if 2.0 * exponent > 1.0 else "lower"
            tail = PowerLawBound(coeff * coeff, 2.0 * exponent, side)
        spec = SequenceSpec(
            lambda n: (coeff * n ** (-exponent), 0.0), trunc, tail
        )
        res = gaussian_dichotomy(spec, _alpha(params))
        return (
            {
                "verdict": res.verdict,
                "partial_sum": res.partial_sum,
                "divergence_estimate": _scale(res.divergence_estimate, base),
            },
            {},
        )

    if cmd == "mixture":
        gens = [_dist(g) for g in _require(doc, "generators")]
        mix = alpha_mixture(gens, np.asarray(_require(doc, "weights"), dtype=float), _alpha(params))
        return {"dist": mix.dist.probs(), "normalizer": mix.normalizer}, {}

    if cmd == "project":
        gens = [_dist(g) for g in _require(doc, "generators")]
        res = alpha_project(
            _dist(_require(doc, "q")), gens, _alpha(params), tol=job.tol, seed=job.seed
        )
        return (
            {
                "weights": res.weights,
                "projection": res.projection.probs(),
                "value": _scale(res.value, base),
            },
            {"iterations": res.iterations, "converged": res.converged},
        )

    if cmd == "tilt":
        t = tilted(_dist(_require(doc, "p")), _dist(_require(doc, "q")), _alpha(params))
        return {"dist": t.probs()}, {}

    if cmd == "chernoff":
        res = chernoff(_dist(_require(doc, "p")), _dist(_require(doc, "q")), tol=job.tol)
        return (
            {
                "alpha_star": res.alpha_star,
                "value": _scale(res.value, base),
                "balance": _scale(res.balance, base),
                "boundary": res.boundary,
            },
            {"iterations": res.iterations, "converged": True},
        )

    if cmd == "pinsker":
        p, q = _dist(_require(doc, "p")), _dist(_require(doc, "q"))
        order = _alpha(params)
        bound, holds = pinsker_check(p, q, order)
        div = renyi_divergence(p, q, order)
        return (
            {"bound": _scale(bound, base), "divergence": _scale(div, base), "holds": holds},
            {},
        )

    if cmd == "capacity":
        res = minimax_redundancy(_channel(doc), _alpha(params), tol=job.tol)
        return (
            {
                "redundancy": _scale(res.redundancy, base),
                "qopt": res.qopt.probs(),
                "per_theta": _scale(res.per_theta, base),
            },
            {"iterations": res.iterations, "converged": res.converged},
        )

    if cmd == "shtarkov":
        dist, redundancy = shtarkov(_channel(doc))
        return {"dist": dist.probs(), "redundancy": _scale(redundancy, base)}, {}

    if cmd == "mlinput":
        pi = ml_capacity_input(_channel(doc))
        return {"input_distribution": pi}, {}

    if cmd == "probe":
        gap = conjecture_probe(
            _channel(doc), _dist(_require(doc, "q")), _alpha(params), tol=job.tol
        )
        return {"gap": _scale(gap, base)}, {}

    if cmd == "discretize":
        p = _density(_require(doc, "p"))
        q = _density(_require(doc, "q"))
        res = refine_to_convergence(p, q, _alpha(params), tol=job.tol)
        return (
            {
                "estimate": _scale(res.estimate, base),
                "schedule": [[eps, _scale(v, base)] for eps, v in res.schedule],
                "monotone": res.monotone,
            },
            {"iterations": len(res.schedule), "converged": res.converged},
        )

    raise ValidationError(f"unknown command {cmd!r}")


def _density(value) -> DensitySpec:
    if not isinstance(value, dict):
        raise ValidationError("a density is an object with a 'family'")
    family = _require(value, "family")
    if family != "normal":
        raise ValidationError(f"unsupported density family {family!r}")
    return DensitySpec.normal(
        float(_require(value, "mean")), float(_require(value, "variance"))
    )


def emit_curve(rows, base: str = "nats") -> str:
    """CSV rendering of a divergence curve: one (alpha, value) per line."""
    lines = [f"alpha,divergence_{base}"]
    for row in rows:
        lines.append(f"{_csv_num(row['alpha'])},{_csv_num(row['divergence'])}")
    return "\n".join(lines) + "\n"


def _csv_num(x) -> str:
    if isinstance(x, str):
        return x
    if x == math.inf:
        return "inf"
    if x == -math.inf:
        return "-inf"
    return repr(float(x))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="renyikit",
        description="Divergence toolkit: divergences of every order, "
        "projections, Chernoff information, capacity and redundancy.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--alpha", type=parse_alpha, default=None,
                        help="order: a float, 0, 1, inf or -inf")
    parser.add_argument("--base", choices=("nats", "bits"), default="nats")
    parser.add_argument("--tol", type=float, default=1e-8)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--input", default="-", help="input JSON path or '-'")
    parser.add_argument("--output", default="-", help="output path or '-'")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.input == "-":
            raw = sys.stdin.read()
        else:
            with open(args.input, "r", encoding="utf-8") as fh:
                raw = fh.read()
        doc = json.loads(raw)
    except (OSError, json.JSONDecodeError) as exc:
        _write(args.output, _render({"error": "validation", "detail": str(exc)}, "json"))
        return EXIT_VALIDATION

    try:
        job = JobSpec(
            command=args.command,
            params={"alpha": args.alpha},
            base=args.base,
            seed=args.seed,
            tol=args.tol,
        )
    except ValidationError as exc:
        _write(args.output, _render({"error": "validation", "detail": str(exc)}, "json"))
        return EXIT_VALIDATION

    out, code = run(job, doc)
    if code == EXIT_OK and args.command == "curve" and args.format == "csv":
        _write(args.output, emit_curve(out["result"], base=args.base))
    else:
        _write(args.output, _render(out, "json"))
    return code


def _render(doc: dict, fmt: str) -> str:
    return json.dumps(doc, sort_keys=True, allow_nan=False, separators=(",", ":")) + "\n"


def _write(target: str, text: str):
    if target == "-":
        sys.stdout.write(text)
    else:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)


if __name__ == "__main__":
    sys.exit(main())
