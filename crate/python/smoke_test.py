"""Smoke test for the pyuavsim extension.

Builds the debug library if needed, loads it from a temporary directory and
exercises each exported type once.
"""

import csv
import io
import math
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    lib = ROOT / "target" / "debug" / "libpyuavsim.so"
    if not lib.exists():
        subprocess.run(["cargo", "build", "-p", "uavsim-py"], cwd=ROOT, check=True)
    tmp = tempfile.mkdtemp()
    shutil.copy(lib, pathlib.Path(tmp) / "pyuavsim.so")
    sys.path.insert(0, tmp)
    import pyuavsim

    return pyuavsim


def main():
    m = load()

    r = m.min_time((0, 0, 0, 0), (100, 0, 0, 0))
    assert r.feasible and abs(r.t_min - 5.976) < 1e-3, r

    c = m.Curve((0, 0, 0, 0), (100, 0, 0, 0), r.t_min)
    assert c.position(0.0) == (0.0, 0.0)
    assert abs(c.position(1.0)[0] - 100.0) < 1e-9
    assert c.satisfies()
    assert len(c.control_points) == 4

    atm = m.Atmosphere()
    assert abs(atm.density(0.0) - 1.225) < 1e-3
    assert atm.thrust_scale(1000.0) < 1.0

    try:
        m.min_time((0, 0, 0, 0), (1, 0, 0, 0), v_max=-1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative v_max accepted")

    ep = m.Episode(1, 7)
    s = ep.state()["evader"]
    nxt = m.step_uav(s, 0.0, 0.0)
    assert nxt["vy"] < s["vy"]

    assert len(m.OBSERVATION_FIELDS) == 13
    assert len(ep.observe()) == 13

    pilot = m.Pilot("goto", ep)
    steps = 0
    while not ep.done and steps < 200:
        evader, interceptor = pilot.actions(ep)
        out = ep.step(evader, interceptor)
        assert math.isfinite(out["rewards"]["evader"])
        steps += 1
    rows = list(csv.reader(io.StringIO(ep.trajectory_csv())))
    assert len(rows) == steps + 1

    duel = m.Episode(3, 1)
    evader, interceptor = m.Pilot("goto", duel).actions(duel)
    assert interceptor is not None
    out = duel.step(evader, interceptor)
    assert out["rewards"]["interceptor"] is not None

    print(f"pyuavsim smoke test passed ({steps} steps, status {ep.status})")


if __name__ == "__main__":
    main()
