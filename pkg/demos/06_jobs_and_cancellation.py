"""Asynchronous runs with progress polling and cooperative cancellation.

The same job table backs the HTTP service; here it is driven directly.
Cancellation is cooperative: the running algorithm observes the flag at its
next checkpoint (fold, member tree, iteration or rule level) and stops.
"""

import pathlib
import time

from arffmine import load_arff
from arffmine.engine import AlgorithmSpec, Engine

DATA = pathlib.Path(__file__).resolve().parents[1] / "data" / "uci"
thyroid = load_arff(DATA / "thyroid-ann.arff")

engine = Engine()

# a run that completes
job = engine.start_run(AlgorithmSpec("naivebayes", seed=1, folds=10), thyroid)
while True:
    snap = engine.poll_run(job)
    print(f"  {snap['id']}: {snap['status']:9s} progress={snap['progress']:.2f}")
    if snap["status"] in ("done", "failed", "cancelled"):
        break
    time.sleep(0.2)
print(f"accuracy: {snap['result']['accuracy']:.4f}\n")

# a long run cancelled mid-flight
job = engine.start_run(AlgorithmSpec("randomforest", {"num_trees": 50}, seed=1),
                       thyroid)
time.sleep(1.0)
print(f"cancelling {job} ...")
engine.cancel_run(job)
snap = engine.wait(job, timeout=30)
print(f"  final status: {snap['status']} (result present: {'result' in snap})")
