"""Versioned JSON model files; round-trips predictions bit-exactly.

Floats are serialized with Python's shortest-round-trip repr, so every
threshold, leaf value and score survives save/load unchanged.
"""

from __future__ import annotations

import json

import numpy as np

from .boosting import BoostedModel
from .tree import MultiOutputTree, Node

FORMAT_NAME = "cgboost-model"
FORMAT_VERSION = 1


class ModelIOError(ValueError):
    pass


def _tree_to_obj(tree: MultiOutputTree) -> dict:
    nodes = []
    for nd in tree.nodes:
        o = {"quality": nd.quality, "n": nd.n_samples}
        if nd.is_leaf:
            o["value"] = [float(v) for v in nd.value]
        else:
            o.update(feature=nd.feature, threshold=nd.threshold,
                     left=nd.left, right=nd.right)
        nodes.append(o)
    return {"n_outputs": tree.n_outputs, "n_features": tree.n_features,
            "nodes": nodes}


def _tree_from_obj(obj: dict) -> MultiOutputTree:
    nodes = []
    for o in obj["nodes"]:
        if "value" in o:
            nodes.append(Node(-1, 0.0, -1, -1,
                              np.asarray(o["value"], dtype=np.float64),
                              o["quality"], o["n"]))
        else:
            nodes.append(Node(o["feature"], o["threshold"], o["left"],
                              o["right"], None, o["quality"], o["n"]))
    return MultiOutputTree(tuple(nodes), obj["n_outputs"], obj["n_features"])


def save_model(model: BoostedModel, path) -> None:
    obj = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "task": model.task,
        "mode": model.mode,
        "loss": model.loss,
        "n_outputs": model.n_outputs,
        "n_features": model.n_features,
        "learning_rate": model.learning_rate,
        "init": [float(v) for v in model.init],
        "class_names": model.class_names,
        "target_names": model.target_names,
        "config": model.config,
        "stages": [[_tree_to_obj(t) for t in stage] for stage in model.stages],
    }
    with open(path, "w") as fh:
        json.dump(obj, fh)
        fh.write("\n")


def load_model(path) -> BoostedModel:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as e:
        raise ModelIOError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ModelIOError(f"{path}: not a valid model file ({e.msg})") from None
    if obj.get("format") != FORMAT_NAME:
        raise ModelIOError(f"{path}: not a {FORMAT_NAME} file")
    if obj.get("version") != FORMAT_VERSION:
        raise ModelIOError(f"{path}: unsupported format version {obj.get('version')}")
    return BoostedModel(
        task=obj["task"], mode=obj["mode"], loss=obj["loss"],
        n_outputs=obj["n_outputs"], n_features=obj["n_features"],
        init=np.asarray(obj["init"], dtype=np.float64),
        learning_rate=obj["learning_rate"],
        stages=[[_tree_from_obj(t) for t in stage] for stage in obj["stages"]],
        class_names=obj["class_names"], target_names=obj["target_names"],
        config=obj["config"],
    )
