"""Config-driven command line front end.

Commands: ``analyze``, ``solve``, ``verify``, ``hopfield``, ``trace``. Each
reads a JSON config describing a layered network or a Hopfield model, runs
the corresponding library routines, and prints one JSON report to stdout.
Reports are byte-deterministic for a fixed config and seed: floats are
written with 17 significant digits and nothing wall-clock-dependent is
included unless ``--timings`` is passed.

Exit codes: 0 success / verification satisfied, 1 verification failed,
2 config or numeric error, 3 precondition refusal (not contractive, not
recurrent), 4 solver non-convergence.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .activations import Activation, make_activation
from .block_solver import (
    BlockNetwork,
    check_monotone,
    solve_block,
    verify_bound,
    verify_inclusion,
)
from .errors import (
    ConfigError,
    NoConvergence,
    NotContractive,
    PreconditionError,
    ProxnetError,
)
from .hopfield import HopfieldModel, equilibrium_via_prox, simulate
from .linalg import BlockVector
from .network import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    Layer,
    Network,
    analyze,
    apriori_iteration_bound,
    forward,
    lift_trajectory,
    solve_sequential,
)

# Inclusion/bound checks on solver output run at this floor, widened with the
# solve tolerance so looser solves are judged proportionally.
VERIFY_TOL_FLOOR = 1e-8

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_ERROR = 2
EXIT_REFUSED = 3
EXIT_NO_CONVERGENCE = 4


# --- deterministic JSON ------------------------------------------------------


def _format_float(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    return format(x, ".17g")


def dumps_report(obj, indent: int = 2) -> str:
    """Serialize a report with 17-significant-digit floats (byte-deterministic)."""
    parts: list[str] = []
    _write_json(obj, parts, indent, 0)
    return "".join(parts) + "\n"


def _write_json(obj, parts: list[str], indent: int, level: int):
    pad = " " * (indent * (level + 1))
    close_pad = " " * (indent * level)
    if obj is None:
        parts.append("null")
    elif isinstance(obj, bool) or isinstance(obj, np.bool_):
        parts.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        parts.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        parts.append(_format_float(float(obj)))
    elif isinstance(obj, str):
        parts.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            parts.append("{}")
            return
        parts.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            parts.append(pad + json.dumps(str(key)) + ": ")
            _write_json(value, parts, indent, level + 1)
            parts.append(",\n" if i + 1 < len(obj) else "\n")
        parts.append(close_pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            parts.append("[]")
            return
        parts.append("[\n")
        for i, value in enumerate(seq):
            parts.append(pad)
            _write_json(value, parts, indent, level + 1)
            parts.append(",\n" if i + 1 < len(seq) else "\n")
        parts.append(close_pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def _vector_list(v: np.ndarray) -> list[float]:
    return [float(x) for x in v]


def _blocks_list(x: BlockVector) -> list[list[float]]:
    return [_vector_list(b) for b in x.blocks]


# --- config parsing ----------------------------------------------------------


def _check_keys(d: dict, allowed: set[str], context: str):
    unknown = sorted(set(d) - allowed)
    if unknown:
        raise ConfigError(f"{context}: unknown keys {unknown} (allowed: {sorted(allowed)})")


def _require(d: dict, key: str, context: str):
    if key not in d:
        raise ConfigError(f"{context}: missing required key {key!r}")
    return d[key]


def _parse_vector(value, context: str) -> np.ndarray:
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{context}: not a numeric vector ({exc})") from exc
    if arr.ndim != 1 or arr.size < 1:
        raise ConfigError(f"{context}: expected a flat non-empty array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f"{context}: entries must be finite")
    return arr


def _parse_matrix(value, context: str, base_dir: Path) -> np.ndarray:
    if isinstance(value, dict):
        _check_keys(value, {"file"}, context)
        rel = _require(value, "file", context)
        path = (base_dir / rel).resolve()
        try:
            arr = np.loadtxt(path, dtype=float, ndmin=2)
        except OSError as exc:
            raise ConfigError(f"{context}: cannot read {path} ({exc})") from exc
        except ValueError as exc:
            raise ConfigError(f"{context}: {path} is not a numeric table ({exc})") from exc
    else:
        try:
            arr = np.array(value, dtype=float)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{context}: not a numeric matrix ({exc})") from exc
    if arr.ndim != 2 or arr.size < 1:
        raise ConfigError(f"{context}: expected a 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f"{context}: entries must be finite")
    return arr


def _parse_activation(value, context: str) -> Activation:
    if not isinstance(value, dict):
        raise ConfigError(f"{context}: expected an object with a 'kind' key")
    _check_keys(value, {"kind", "param"}, context)
    kind = _require(value, "kind", context)
    param = value.get("param")
    try:
        return make_activation(kind, param)
    except ConfigError as exc:
        raise ConfigError(f"{context}: {exc}") from exc


@dataclass
class SolverSettings:
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    start: np.ndarray | None = None

    def to_jsonable(self) -> dict:
        out: dict = {"tol": self.tol, "max_iter": self.max_iter}
        if self.start is not None:
            out["start"] = _vector_list(self.start)
        return out


def _parse_solver(value, context: str, start_dim: int) -> SolverSettings:
    if not isinstance(value, dict):
        raise ConfigError(f"{context}: expected an object")
    _check_keys(value, {"tol", "max_iter", "start"}, context)
    settings = SolverSettings()
    if "tol" in value:
        tol = float(value["tol"])
        if not (tol > 0 and math.isfinite(tol)):
            raise ConfigError(f"{context}.tol: must be a positive finite real")
        settings.tol = tol
    if "max_iter" in value:
        max_iter = value["max_iter"]
        if not isinstance(max_iter, int) or max_iter < 1:
            raise ConfigError(f"{context}.max_iter: must be a positive integer")
        settings.max_iter = max_iter
    if "start" in value:
        start = _parse_vector(value["start"], f"{context}.start")
        if start.shape[0] != start_dim:
            raise ConfigError(
                f"{context}.start: expected length {start_dim}, got {start.shape[0]}"
            )
        settings.start = start
    return settings


@dataclass
class NetworkConfig:
    spaces: tuple[int, ...]  # d_0, ..., d_n
    layers: tuple[Layer, ...]
    solver: SolverSettings = field(default_factory=SolverSettings)

    def build(self) -> Network:
        return Network(self.layers)

    @property
    def recurrent(self) -> bool:
        return self.spaces[0] == self.spaces[-1]

    def to_jsonable(self) -> dict:
        layers = []
        for l in self.layers:
            act: dict = {"kind": l.activation.kind}
            if l.activation.param is not None:
                act["param"] = l.activation.param
            layers.append(
                {
                    "weights": [_vector_list(row) for row in l.weights],
                    "bias": _vector_list(l.bias),
                    "activation": act,
                }
            )
        return {
            "version": 1,
            "model": "network",
            "spaces": list(self.spaces),
            "layers": layers,
            "solver": self.solver.to_jsonable(),
        }


@dataclass
class HopfieldConfig:
    block_dims: tuple[int, ...]  # d_1, ..., d_n (block sizes)
    self_inhibition: tuple[float, ...]
    weights: np.ndarray
    bias: np.ndarray
    activations: tuple[Activation, ...]
    solver: SolverSettings = field(default_factory=SolverSettings)

    def build(self) -> HopfieldModel:
        return HopfieldModel(
            self_inhibition=self.self_inhibition,
            weights=self.weights,
            bias=self.bias,
            activations=self.activations,
            block_dims=self.block_dims,
        )

    def to_jsonable(self) -> dict:
        acts = []
        for a in self.activations:
            entry: dict = {"kind": a.kind}
            if a.param is not None:
                entry["param"] = a.param
            acts.append(entry)
        return {
            "version": 1,
            "model": "hopfield",
            "spaces": list(self.block_dims),
            "self_inhibition": list(self.self_inhibition),
            "weights": [_vector_list(row) for row in self.weights],
            "bias": _vector_list(self.bias),
            "activations": acts,
            "solver": self.solver.to_jsonable(),
        }


def _parse_spaces(raw, context: str) -> tuple[int, ...]:
    if not isinstance(raw, list) or not raw:
        raise ConfigError(f"{context}: expected a non-empty array of positive integers")
    spaces = []
    for i, v in enumerate(raw):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ConfigError(f"{context}[{i}]: expected a positive integer, got {v!r}")
        spaces.append(v)
    return tuple(spaces)


def _parse_network_config(doc: dict, base_dir: Path) -> NetworkConfig:
    _check_keys(doc, {"version", "model", "spaces", "layers", "solver"}, "config")
    spaces = _parse_spaces(_require(doc, "spaces", "config"), "spaces")
    raw_layers = _require(doc, "layers", "config")
    if not isinstance(raw_layers, list) or not raw_layers:
        raise ConfigError("layers: expected a non-empty array")
    if len(raw_layers) != len(spaces) - 1:
        raise ConfigError(
            f"layers: {len(spaces)} spaces require {len(spaces) - 1} layers, got {len(raw_layers)}"
        )
    layers = []
    for i, raw in enumerate(raw_layers):
        ctx = f"layers[{i}]"
        if not isinstance(raw, dict):
            raise ConfigError(f"{ctx}: expected an object")
        _check_keys(raw, {"weights", "bias", "activation"}, ctx)
        weights = _parse_matrix(_require(raw, "weights", ctx), f"{ctx}.weights", base_dir)
        expected = (spaces[i + 1], spaces[i])
        if weights.shape != expected:
            raise ConfigError(
                f"{ctx}.weights: layer {i + 1} expects shape {expected}, got {weights.shape}"
            )
        bias = _parse_vector(_require(raw, "bias", ctx), f"{ctx}.bias")
        if bias.shape[0] != spaces[i + 1]:
            raise ConfigError(
                f"{ctx}.bias: layer {i + 1} expects length {spaces[i + 1]}, got {bias.shape[0]}"
            )
        activation = _parse_activation(_require(raw, "activation", ctx), f"{ctx}.activation")
        layers.append(Layer(weights=weights, bias=bias, activation=activation))
    solver = _parse_solver(doc.get("solver", {}), "solver", spaces[0])
    return NetworkConfig(spaces=spaces, layers=tuple(layers), solver=solver)


def _parse_hopfield_config(doc: dict, base_dir: Path) -> HopfieldConfig:
    allowed = {"version", "model", "spaces", "self_inhibition", "weights", "bias", "activations", "solver"}
    _check_keys(doc, allowed, "config")
    block_dims = _parse_spaces(_require(doc, "spaces", "config"), "spaces")
    total = sum(block_dims)
    raw_inhibition = _require(doc, "self_inhibition", "config")
    if not isinstance(raw_inhibition, list) or len(raw_inhibition) != len(block_dims):
        raise ConfigError(
            f"self_inhibition: expected {len(block_dims)} entries, one per block"
        )
    inhibition = []
    for i, v in enumerate(raw_inhibition):
        try:
            d = float(v)
        except (TypeError, ValueError):
            raise ConfigError(f"self_inhibition[{i}]: not a number: {v!r}") from None
        if not (d > 0 and math.isfinite(d)):
            raise ConfigError(f"self_inhibition[{i}]: must be > 0, got {v!r}")
        inhibition.append(d)
    weights = _parse_matrix(_require(doc, "weights", "config"), "weights", base_dir)
    if weights.shape != (total, total):
        raise ConfigError(f"weights: expected shape {(total, total)}, got {weights.shape}")
    bias = _parse_vector(_require(doc, "bias", "config"), "bias")
    if bias.shape[0] != total:
        raise ConfigError(f"bias: expected length {total}, got {bias.shape[0]}")
    raw_acts = _require(doc, "activations", "config")
    if not isinstance(raw_acts, list) or len(raw_acts) != len(block_dims):
        raise ConfigError(f"activations: expected {len(block_dims)} entries, one per block")
    acts = tuple(
        _parse_activation(raw, f"activations[{i}]") for i, raw in enumerate(raw_acts)
    )
    solver = _parse_solver(doc.get("solver", {}), "solver", total)
    return HopfieldConfig(
        block_dims=block_dims,
        self_inhibition=tuple(inhibition),
        weights=weights,
        bias=bias,
        activations=acts,
        solver=solver,
    )


def parse_config(path: str | Path) -> NetworkConfig | HopfieldConfig:
    """Load and fully validate a config file; unknown keys are rejected."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be an object")
    version = doc.get("version")
    if version != 1:
        raise ConfigError(f"config: unsupported version {version!r} (expected 1)")
    model = doc.get("model", "network")
    if model == "network":
        return _parse_network_config(doc, path.parent)
    if model == "hopfield":
        return _parse_hopfield_config(doc, path.parent)
    raise ConfigError(f"config: unknown model {model!r} (expected 'network' or 'hopfield')")


def _config_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# --- commands ----------------------------------------------------------------


def _analysis_jsonable(report) -> dict:
    return {
        "per_layer_norms": list(report.per_layer_norms),
        "theta_n": report.theta_n,
        "w_max": report.w_max,
        "product_contractive": report.product_contractive,
        "uniformly_contractive": report.uniformly_contractive,
        "bias_norm": report.bias_norm,
        "norm_rel_tol": report.norm_rel_tol,
    }


def _inclusion_jsonable(rep) -> dict:
    return {
        "per_layer_residuals": list(rep.per_layer_residuals),
        "max_residual": rep.max_residual,
        "prox_residuals": list(rep.prox_residuals),
        "max_prox_residual": rep.max_prox_residual,
        "satisfied": rep.satisfied,
        "prox_satisfied": rep.prox_satisfied,
        "tol": rep.tol,
    }


def _bound_jsonable(rep) -> dict:
    return {
        "bound": rep.bound,
        "actual": rep.actual,
        "holds": rep.holds,
        "margin": rep.margin,
    }


def _require_network_config(cfg, command: str) -> NetworkConfig:
    if not isinstance(cfg, NetworkConfig):
        raise ConfigError(f"{command} needs a network config (model: 'network')")
    return cfg


def _require_recurrent_config(cfg: NetworkConfig, command: str):
    if not cfg.recurrent:
        raise PreconditionError(
            f"{command} needs a recurrent network: d_0={cfg.spaces[0]} != d_n={cfg.spaces[-1]}"
        )


def cmd_analyze(cfg, args) -> tuple[dict, int]:
    cfg = _require_network_config(cfg, "analyze")
    _require_recurrent_config(cfg, "analyze")
    net = cfg.build()
    report = analyze(net, seed=args.seed)
    min_eig, monotone = check_monotone(BlockNetwork(net))
    out = {
        "command": "analyze",
        "config_sha256": _config_digest(args.config),
        "seed": args.seed,
        "analysis": _analysis_jsonable(report),
        "monotonicity": {"min_eig": min_eig, "monotone": monotone},
    }
    return out, EXIT_OK if report.product_contractive else EXIT_REFUSED


def _verify_tol_for(tol: float) -> float:
    return max(VERIFY_TOL_FLOOR, 100.0 * tol)


def cmd_solve(cfg, args) -> tuple[dict, int]:
    cfg = _require_network_config(cfg, "solve")
    _require_recurrent_config(cfg, "solve")
    net = cfg.build()
    bn = BlockNetwork(net)
    analysis = analyze(net, seed=args.seed)
    tol = args.tol if args.tol is not None else cfg.solver.tol
    max_iter = args.max_iter if args.max_iter is not None else cfg.solver.max_iter
    out: dict = {
        "command": "solve",
        "config_sha256": _config_digest(args.config),
        "seed": args.seed,
        "method": args.method,
        "tol": tol,
        "max_iter": max_iter,
        "analysis": _analysis_jsonable(analysis),
    }
    result_blocks: BlockVector | None = None
    if args.method in ("sequential", "both"):
        res = solve_sequential(net, cfg.solver.start, tol=tol, max_iter=max_iter, analysis=analysis)
        lifted = lift_trajectory(net, res.point)
        out["sequential"] = {
            "point": _vector_list(res.point),
            "iterations": res.iterations,
            "last_step_norm": res.last_step_norm,
            "certified_error": res.certified_error,
            "converged": res.converged,
            "trajectory": _blocks_list(lifted),
        }
        result_blocks = lifted
    if args.method in ("block", "both"):
        point, iterations = solve_block(bn, tol=tol, max_iter=max_iter, analysis=analysis)
        out["block"] = {"point": _blocks_list(point), "iterations": iterations}
        if args.method == "both":
            out["cross_distance"] = result_blocks.distance(point)
        result_blocks = point
    verify_tol = _verify_tol_for(tol)
    inclusion = verify_inclusion(bn, result_blocks, tol=verify_tol)
    out["inclusion"] = _inclusion_jsonable(inclusion)
    if analysis.uniformly_contractive:
        bound = verify_bound(bn, result_blocks, slack=verify_tol, analysis=analysis)
        out["bound"] = _bound_jsonable(bound)
    else:
        out["bound"] = None
    return out, EXIT_OK


def _load_candidate(path: str | Path, dims: tuple[int, ...]) -> BlockVector:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read candidate {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, list) or len(doc) != len(dims):
        raise ConfigError(f"candidate: expected {len(dims)} blocks, got {doc!r}")
    blocks = []
    for i, raw in enumerate(doc):
        vec = _parse_vector(raw, f"candidate[{i}]")
        if vec.shape[0] != dims[i]:
            raise ConfigError(f"candidate[{i}]: expected length {dims[i]}, got {vec.shape[0]}")
        blocks.append(vec)
    return BlockVector(tuple(blocks))


def cmd_verify(cfg, args) -> tuple[dict, int]:
    cfg = _require_network_config(cfg, "verify")
    _require_recurrent_config(cfg, "verify")
    net = cfg.build()
    bn = BlockNetwork(net)
    analysis = analyze(net, seed=args.seed)
    tol = args.tol if args.tol is not None else VERIFY_TOL_FLOOR
    candidate = _load_candidate(args.point, bn.dims)
    inclusion = verify_inclusion(bn, candidate, tol=tol)
    out: dict = {
        "command": "verify",
        "config_sha256": _config_digest(args.config),
        "point_sha256": _config_digest(args.point),
        "seed": args.seed,
        "tol": tol,
        "analysis": _analysis_jsonable(analysis),
        "inclusion": _inclusion_jsonable(inclusion),
    }
    satisfied = inclusion.satisfied
    if analysis.uniformly_contractive:
        bound = verify_bound(bn, candidate, slack=tol, analysis=analysis)
        out["bound"] = _bound_jsonable(bound)
        satisfied = satisfied and bound.holds
    else:
        out["bound"] = None
    out["satisfied"] = satisfied
    return out, EXIT_OK if satisfied else EXIT_VERIFY_FAILED


def _write_csv(path: Path, header: list[str], rows) -> None:
    try:
        with open(path, "w") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                cells = [
                    str(c) if isinstance(c, int) else format(float(c), ".17g") for c in row
                ]
                fh.write(",".join(cells) + "\n")
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from exc


def cmd_trace(cfg, args) -> tuple[dict, int]:
    cfg = _require_network_config(cfg, "trace")
    _require_recurrent_config(cfg, "trace")
    if args.out is None:
        raise ConfigError("trace needs --out for the CSV file")
    net = cfg.build()
    analysis = analyze(net, seed=args.seed)
    theta = analysis.theta_n
    if theta >= 1.0 - 1e-12:
        raise NotContractive("theta_n (product of weight norms)", theta, analysis.norm_rel_tol)
    tol = args.tol if args.tol is not None else cfg.solver.tol
    max_iter = args.max_iter if args.max_iter is not None else cfg.solver.max_iter
    factor = theta / (1.0 - theta)
    x = cfg.solver.start if cfg.solver.start is not None else np.zeros(net.in_dim)
    rows = []
    steps = []
    final = x
    bound = math.inf
    for k in range(max_iter):
        nxt, _ = forward(net, x)
        step = float(np.linalg.norm(nxt - x))
        rows.append((k, step, *x))
        steps.append(step)
        final = nxt
        bound = factor * step
        if bound <= tol:
            break
        x = nxt
    else:
        raise NoConvergence(
            f"trace: bound {bound:.3e} > tol {tol:.3e} after {max_iter} iterations",
            last=final,
            bound=bound,
            iterations=max_iter,
        )
    header = ["k", "step_norm"] + [f"x_{i}" for i in range(net.in_dim)]
    _write_csv(Path(args.out), header, rows)
    out = {
        "command": "trace",
        "config_sha256": _config_digest(args.config),
        "seed": args.seed,
        "tol": tol,
        "iterations": len(rows),
        "certified_error": bound,
        "empirical_ratio": _empirical_ratio(steps),
        "apriori_iterations": apriori_iteration_bound(theta, steps[0], tol),
        "final_point": _vector_list(final),
        "out": str(args.out),
    }
    return out, EXIT_OK


def _empirical_ratio(steps: list[float], floor: float = 1e-13) -> float | None:
    """Geometric mean of successive step ratios, ignoring sub-floor steps."""
    ratios = [
        b / a for a, b in zip(steps, steps[1:]) if a > floor and b > floor
    ]
    if not ratios:
        return None
    return float(np.exp(np.mean(np.log(ratios))))


def cmd_hopfield(cfg, args) -> tuple[dict, int]:
    if not isinstance(cfg, HopfieldConfig):
        raise ConfigError("hopfield needs a hopfield config (model: 'hopfield')")
    model = cfg.build()
    tol = args.tol if args.tol is not None else cfg.solver.tol
    max_iter = args.max_iter if args.max_iter is not None else cfg.solver.max_iter
    eq = equilibrium_via_prox(
        model, tol=tol, max_iter=max_iter, z0=cfg.solver.start, seed=args.seed
    )
    out: dict = {
        "command": "hopfield",
        "config_sha256": _config_digest(args.config),
        "seed": args.seed,
        "tol": tol,
        "equilibrium": {
            "x_star": _vector_list(eq.x_star),
            "z_star": _vector_list(eq.z_star),
            "residual": eq.residual,
            "contraction_factor": eq.contraction_factor,
            "iterations": eq.iterations,
        },
    }
    if args.simulate:
        rng = np.random.default_rng(args.seed)
        deviations = []
        first_trajectory = None
        for s in range(args.starts):
            x0 = rng.standard_normal(model.total_dim)
            times, states = simulate(model, x0, dt=args.dt, t_end=args.t_end)
            if s == 0:
                first_trajectory = (times, states)
            deviations.append(float(np.linalg.norm(states[-1] - eq.x_star)))
        out["simulation"] = {
            "dt": args.dt,
            "t_end": args.t_end,
            "starts": args.starts,
            "final_deviations": deviations,
            "max_deviation": max(deviations) if deviations else None,
        }
        if args.out is not None and first_trajectory is not None:
            times, states = first_trajectory
            header = ["t"] + [f"x_{i + 1}" for i in range(model.total_dim)]
            _write_csv(Path(args.out), header, (
                (float(t), *row) for t, row in zip(times, states)
            ))
            out["simulation"]["out"] = str(args.out)
    return out, EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "hopfield": cmd_hopfield,
    "trace": cmd_trace,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proxnet",
        description="Fixed points of layered proximal neural networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "analyze": "contraction analysis and monotonicity check",
        "solve": "compute the unique fixed point and verify it",
        "verify": "check a candidate trajectory against the inclusion system",
        "hopfield": "equilibrium of a continuous Hopfield model",
        "trace": "record the fixed-point iteration to CSV",
    }
    for name, help_text in specs.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to the JSON config")
        p.add_argument("--tol", type=float, default=None, help="solver / verification tolerance")
        p.add_argument("--max-iter", type=int, default=None, dest="max_iter")
        p.add_argument("--seed", type=int, default=0, help="seed for all randomized pieces")
        p.add_argument("--format", choices=["json"], default="json")
        p.add_argument("--out", default=None, help="CSV output path (trace, hopfield --simulate)")
        p.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte determinism)")
        if name == "solve":
            p.add_argument(
                "--method", choices=["sequential", "block", "both"], default="both"
            )
        if name == "verify":
            p.add_argument("--point", required=True, help="candidate trajectory JSON file")
        if name == "hopfield":
            p.add_argument("--simulate", action="store_true", help="also integrate the dynamics")
            p.add_argument("--dt", type=float, default=0.01)
            p.add_argument("--t-end", type=float, default=20.0, dest="t_end")
            p.add_argument("--starts", type=int, default=3)
    return parser


def _error_report(command: str, exc: ProxnetError) -> dict:
    info: dict = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, NotContractive):
        info["factor"] = exc.factor
        info["contraction_factor"] = exc.factor
    if isinstance(exc, NoConvergence):
        info["iterations"] = exc.iterations
        if exc.bound is not None:
            info["bound"] = exc.bound
    return {"command": command, "error": info}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        cfg = parse_config(args.config)
        report, code = COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ProxnetError as exc:
        report = _error_report(args.command, exc)
        sys.stdout.write(dumps_report(report))
        if isinstance(exc, PreconditionError):
            return EXIT_REFUSED
        if isinstance(exc, NoConvergence):
            return EXIT_NO_CONVERGENCE
        return EXIT_ERROR
    if args.timings:
        report["timings"] = {"total_s": time.perf_counter() - started}
    sys.stdout.write(dumps_report(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
