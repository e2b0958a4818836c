"""Combiners that turn cheap unscaled networks into usable predictors.

Two strategies are implemented on top of :mod:`esnboost.esn`:

* residual boosting: an initial least-squares stage followed by stages
  that each ridge-fit the current training residuals and are added to the
  running predictor,
* an averaging ensemble: independently trained networks whose predictions
  are averaged.

Boosting runs in one of two modes.  ``fresh`` draws a new reservoir for
every stage (seed + stage index), so each stage brings new random
features.  ``shared`` reuses the initial stage's reservoir and states for
every stage, which makes boosting an iterated ridge fit on one fixed
feature expansion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .datasets import SeriesDataset
from .errors import DataError, ParameterError
from .esn import (EsnParams, Reservoir, build_features, esn_predict,
                  init_reservoir, run_reservoir)
from .numerics import Readout, ridge_fit

__all__ = [
    "BoostStage",
    "BoostModel",
    "EnsembleModel",
    "BOOST_MODES",
    "train_single_esn",
    "l2boost_fit",
    "boost_predict",
    "baseline_fit",
    "baseline_predict",
    "save_model",
    "load_model",
]

BOOST_MODES = ("fresh", "shared")

# Ensemble width used when nothing else is configured.
DEFAULT_ENSEMBLE_SIZE = 30


@dataclass
class BoostStage:
    """One additive term: a reservoir plus the readout fitted at that stage."""

    reservoir: Reservoir
    readout: Readout
    stage_index: int

    def __post_init__(self):
        if self.stage_index < 0:
            raise ParameterError(f"stage_index must be >= 0, got {self.stage_index}")
        p = self.reservoir.params
        expected = p.n_inputs + p.n_reservoir
        if self.readout.n_features != expected:
            raise ParameterError(
                f"stage {self.stage_index}: readout width {self.readout.n_features} "
                f"does not match reservoir feature width {expected}")


@dataclass
class BoostModel:
    """Additive predictor: stage 0 fits targets, later stages fit residuals.

    ``train_sse`` records the post-washout training sum of squared errors
    after each stage, so the non-worsening property of the stagewise fit
    can be audited without re-running anything.
    """

    stages: list[BoostStage]
    mode: str
    gamma: float
    train_sse: list[float] = field(default_factory=list)

    def __post_init__(self):
        if not self.stages:
            raise ParameterError("a boost model needs at least one stage")
        if self.mode not in BOOST_MODES:
            raise ParameterError(f"mode must be one of {BOOST_MODES}, got {self.mode!r}")
        if self.mode == "shared":
            first = self.stages[0].reservoir
            if any(st.reservoir is not first for st in self.stages):
                raise ParameterError(
                    "shared mode requires every stage to hold the same reservoir "
                    "object")

    @property
    def n_stages(self) -> int:
        """Residual-fitting stages on top of the initial fit (model has +1)."""
        return len(self.stages) - 1


@dataclass
class EnsembleModel:
    """Independently trained (reservoir, readout) pairs, averaged at predict."""

    members: list[tuple[Reservoir, Readout]]

    def __post_init__(self):
        if not self.members:
            raise ParameterError("an ensemble needs at least one member")
        widths = set()
        for res, readout in self.members:
            p = res.params
            widths.add((p.n_inputs, readout.n_outputs))
            if readout.n_features != p.n_inputs + p.n_reservoir:
                raise ParameterError(
                    "ensemble member readout width does not match its reservoir")
        if len(widths) > 1:
            raise ParameterError(
                f"ensemble members disagree on input/output widths: {sorted(widths)}")

    @property
    def n_members(self) -> int:
        return len(self.members)


def _check_train(train: SeriesDataset, params: EsnParams) -> None:
    if train.n_inputs != params.n_inputs:
        raise ParameterError(
            f"dataset has {train.n_inputs} input columns, params expect "
            f"{params.n_inputs}")


def train_single_esn(train: SeriesDataset, params: EsnParams,
                     gamma: float) -> tuple[Reservoir, Readout]:
    """Draw one reservoir and ridge-fit its readout on post-washout rows."""
    _check_train(train, params)
    res = init_reservoir(params)
    states = run_reservoir(res, train.inputs)
    feats = build_features(train.inputs, states)
    w = train.washout
    readout = ridge_fit(feats[w:], train.targets[w:], gamma)
    return res, readout


def l2boost_fit(train: SeriesDataset, n_stages: int, params: EsnParams,
                gamma: float, mode: str = "fresh") -> BoostModel:
    """Stagewise additive fit: initial least-squares stage, then n_stages
    rounds that each ridge-fit the current post-washout residuals.

    In fresh mode stage m draws its reservoir from seed + m (stage 0 from
    the seed itself); in shared mode every stage reuses stage 0's reservoir
    and its state trajectory.  Residuals, and therefore all fits, only ever
    see rows past the washout.
    """
    if n_stages < 0:
        raise ParameterError(f"n_stages must be >= 0, got {n_stages}")
    if mode not in BOOST_MODES:
        raise ParameterError(f"mode must be one of {BOOST_MODES}, got {mode!r}")
    _check_train(train, params)

    w = train.washout
    targets = train.targets[w:]

    res = init_reservoir(params)
    states = run_reservoir(res, train.inputs)
    feats = build_features(train.inputs, states)
    readout = ridge_fit(feats[w:], targets, gamma)
    stages = [BoostStage(reservoir=res, readout=readout, stage_index=0)]

    running = readout.predict(feats[w:])
    residual = targets - running
    sse_trace = [float(np.sum(residual ** 2))]

    for m in range(1, n_stages + 1):
        if mode == "fresh":
            stage_params = replace(params, seed=params.seed + m)
            stage_res = init_reservoir(stage_params)
            stage_feats = build_features(
                train.inputs, run_reservoir(stage_res, train.inputs))
        else:
            stage_res = res
            stage_feats = feats
        stage_readout = ridge_fit(stage_feats[w:], residual, gamma)
        stages.append(BoostStage(reservoir=stage_res, readout=stage_readout,
                                 stage_index=m))
        running = running + stage_readout.predict(stage_feats[w:])
        residual = targets - running
        sse_trace.append(float(np.sum(residual ** 2)))

    return BoostModel(stages=stages, mode=mode, gamma=gamma, train_sse=sse_trace)


def boost_predict(model: BoostModel, inputs, s0=None) -> np.ndarray:
    """Sum the stage predictions over the given inputs.

    Shared mode runs the one reservoir once and applies every readout to
    the same feature rows; fresh mode runs each stage's reservoir.
    """
    if model.mode == "shared":
        first = model.stages[0]
        states = run_reservoir(first.reservoir, inputs, s0)
        feats = build_features(inputs, states)
        total = first.readout.predict(feats)
        for stage in model.stages[1:]:
            total = total + stage.readout.predict(feats)
        return total
    total = None
    for stage in model.stages:
        pred = esn_predict(stage.reservoir, stage.readout, inputs, s0)
        total = pred if total is None else total + pred
    return total


def baseline_fit(train: SeriesDataset, n_members: int, params: EsnParams,
                 gamma: float) -> EnsembleModel:
    """Train n_members independent networks; member j uses seed + j."""
    if n_members < 1:
        raise ParameterError(f"n_members must be >= 1, got {n_members}")
    members = []
    for j in range(n_members):
        member_params = replace(params, seed=params.seed + j)
        members.append(train_single_esn(train, member_params, gamma))
    return EnsembleModel(members=members)


def baseline_predict(model: EnsembleModel, inputs, s0=None) -> np.ndarray:
    """Elementwise arithmetic mean of the member predictions."""
    preds = [esn_predict(res, readout, inputs, s0)
             for res, readout in model.members]
    return np.mean(np.stack(preds, axis=0), axis=0)


# ---------------------------------------------------------------------------
# Model export / import.  JSON keeps floats at full round-trip precision, so
# a reloaded model predicts bit-identically.

_FORMAT = "esnboost-model-v1"


def _encode_matrix(a: np.ndarray) -> dict:
    return {"shape": list(a.shape), "entries": a.tolist()}


def _decode_matrix(obj: dict, what: str) -> np.ndarray:
    try:
        a = np.array(obj["entries"], dtype=float)
        shape = tuple(obj["shape"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed matrix block for {what}") from exc
    if a.shape != shape:
        raise DataError(f"{what}: declared shape {shape} but entries give {a.shape}")
    return a


def _encode_params(p: EsnParams) -> dict:
    return {
        "n_inputs": p.n_inputs,
        "n_reservoir": p.n_reservoir,
        "n_outputs": p.n_outputs,
        "input_range": list(p.input_range),
        "reservoir_range": list(p.reservoir_range),
        "reservoir_density": p.reservoir_density,
        "seed": p.seed,
    }


def _decode_params(obj: dict) -> EsnParams:
    return EsnParams(
        n_inputs=obj["n_inputs"],
        n_reservoir=obj["n_reservoir"],
        n_outputs=obj["n_outputs"],
        input_range=tuple(obj["input_range"]),
        reservoir_range=tuple(obj["reservoir_range"]),
        reservoir_density=obj["reservoir_density"],
        seed=obj["seed"],
    )


def _encode_reservoirs(reservoirs: list[Reservoir]) -> tuple[list[dict], dict]:
    """Deduplicate by object identity so shared reservoirs serialize once."""
    blocks, index = [], {}
    for res in reservoirs:
        if id(res) in index:
            continue
        index[id(res)] = len(blocks)
        blocks.append({
            "params": _encode_params(res.params),
            "w_in": _encode_matrix(res.w_in),
            "w_r": _encode_matrix(res.w_r),
        })
    return blocks, index


def _encode_readout(readout: Readout) -> dict:
    return {"weights": _encode_matrix(readout.weights),
            "intercept": list(readout.intercept)}


def _decode_readout(obj: dict, what: str) -> Readout:
    return Readout(weights=_decode_matrix(obj["weights"], f"{what} weights"),
                   intercept=np.array(obj["intercept"], dtype=float))


def save_model(model, path) -> None:
    """Write a BoostModel or EnsembleModel as a self-contained JSON file."""
    if isinstance(model, BoostModel):
        blocks, index = _encode_reservoirs([st.reservoir for st in model.stages])
        doc = {
            "format": _FORMAT,
            "kind": "boost",
            "mode": model.mode,
            "gamma": model.gamma,
            "train_sse": list(model.train_sse),
            "reservoirs": blocks,
            "stages": [{
                "stage_index": st.stage_index,
                "reservoir": index[id(st.reservoir)],
                "readout": _encode_readout(st.readout),
            } for st in model.stages],
        }
    elif isinstance(model, EnsembleModel):
        blocks, index = _encode_reservoirs([res for res, _ in model.members])
        doc = {
            "format": _FORMAT,
            "kind": "ensemble",
            "reservoirs": blocks,
            "members": [{
                "reservoir": index[id(res)],
                "readout": _encode_readout(readout),
            } for res, readout in model.members],
        }
    else:
        raise ParameterError(f"cannot save object of type {type(model).__name__}")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_model(path):
    """Reload a file written by :func:`save_model`."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"model file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: not valid JSON: {exc}") from exc
    if doc.get("format") != _FORMAT:
        raise DataError(f"{path}: unrecognized format {doc.get('format')!r}")

    try:
        reservoirs = [Reservoir(w_in=_decode_matrix(b["w_in"], "w_in"),
                                w_r=_decode_matrix(b["w_r"], "w_r"),
                                params=_decode_params(b["params"]))
                      for b in doc["reservoirs"]]
        if doc["kind"] == "boost":
            stages = [BoostStage(reservoir=reservoirs[st["reservoir"]],
                                 readout=_decode_readout(st["readout"], "stage"),
                                 stage_index=st["stage_index"])
                      for st in doc["stages"]]
            return BoostModel(stages=stages, mode=doc["mode"],
                              gamma=doc["gamma"],
                              train_sse=[float(v) for v in doc["train_sse"]])
        if doc["kind"] == "ensemble":
            members = [(reservoirs[m["reservoir"]],
                        _decode_readout(m["readout"], "member"))
                       for m in doc["members"]]
            return EnsembleModel(members=members)
    except (KeyError, IndexError, TypeError) as exc:
        raise DataError(f"{path}: malformed model document: {exc}") from exc
    raise DataError(f"{path}: unknown model kind {doc['kind']!r}")
