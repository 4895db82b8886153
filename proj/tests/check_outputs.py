# Copyright 2026 The cpmgoc Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Runs the cpmgoc binary and checks its files against the shipped schemas."""

import csv
import filecmp
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

HEADERS = {
    "ladder.csv": "rung,half_bandwidth_hz,n_points,avg_fidelity",
    "train.csv": "echo,offset_hz,rf_scale,mx,my,mz",
    "signal.csv": "echo,signal",
    "sweep.csv": "offset_hz,rf_scale,echo,visibility",
    "trajectory.csv": "t_s,x,y,z",
    "criteria.csv": "pulse,offset_hz,rf_scale,fidelity,angle_xy_deg,angle_y_deg,nutation_deg",
    "channel_table.csv": "pulse,t2_pulse_cycles,m_infinity,fit_overlap",
    "waveform.csv": "time_s,amp_hz,phase_deg",
    "best.csv": "time_s,amp_hz,phase_deg",
}

JSON_SCHEMAS = {
    "manifest.json": "manifest",
    "channel_fit.json": "channel_fit",
    "rfi_distribution.json": "distribution",
}


def load_schemas(root):
    return {p.name.split(".")[0]: json.loads(p.read_text()) for p in (root / "schemas").glob("*.schema.json")}


def run(binary, args, expect=0):
    r = subprocess.run([binary, *args], capture_output=True, text=True)
    if r.returncode != expect:
        raise AssertionError(f"{args}: exit {r.returncode}, expected {expect}\n{r.stdout}\n{r.stderr}")
    return r


def check_dir(d, schemas):
    checked = 0
    for path in sorted(d.rglob("*")):
        if path.suffix == ".csv":
            with path.open() as f:
                rows = list(csv.reader(f))
            header = HEADERS.get(path.name)
            assert header is not None, f"undocumented CSV {path.name}"
            assert ",".join(rows[0]) == header, f"{path}: header {rows[0]}"
            for row in rows[1:]:
                assert len(row) == len(rows[0]), f"{path}: ragged row {row}"
            checked += 1
        elif path.suffix == ".jsonl":
            for line in path.read_text().splitlines():
                jsonschema.validate(json.loads(line), schemas["trace_record"])
            checked += 1
        elif path.suffix == ".json":
            name = JSON_SCHEMAS.get(path.name, "waveform")
            jsonschema.validate(json.loads(path.read_text()), schemas[name])
            checked += 1
    return checked


def same_outputs(a, b):
    for path in sorted(a.rglob("*")):
        if path.is_file() and path.name != "manifest.json":
            other = b / path.relative_to(a)
            assert filecmp.cmp(path, other, shallow=False), f"{path.name} differs between runs"


def main():
    binary = sys.argv[1]
    root = pathlib.Path(__file__).resolve().parent.parent
    schemas = load_schemas(root)
    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        small = ["--T", "100us", "--steps", "20", "--guard", "2us"]
        commands = {
            "ladder": ["optimize", "--ladder", *small, "--max-rungs", "4", "--rung-iter", "30", "--floor", "0.5",
                       "--rfi-scales", "0.9,1,1.1", "--rfi-iter", "10", "--seed", "4"],
            "grape": ["optimize", *small, "--offsets=-2kHz:2kHz:5", "--rf-scales", "0.95,1.05", "--max-iter", "20"],
            "train": ["simulate", "--pulse", "hard", "--echoes", "12", "--offsets=-4kHz:4kHz:9",
                      "--trajectory-offset", "1kHz"],
            "sweep": ["simulate", "--pulse", "sym:hard90", "--sweep-echoes", "1,2,50", "--offsets=-6kHz:6kHz:13",
                      "--rf-scales", "1"],
            "channel": ["analyze-channel", "--pulse", "hard", "--cycles", "20", "--offsets=-8kHz:8kHz:41",
                        "--rf-scales", "0.9:1.1:3", "--asymptotic"],
            "ideal_channel": ["analyze-channel", "--pulse", "ideal", "--cycles", "5", "--offsets=-1kHz:1kHz:3"],
            "compare": ["compare", "hard", "sym:hard90", "--offsets=-10kHz:10kHz:11",
                        "--channel-offsets=-8kHz:8kHz:21", "--channel-rf-scales", "0.9,1.1", "--cycles", "10"],
        }
        total = 0
        for name, args in commands.items():
            first, second = tmp / name / "a", tmp / name / "b"
            run(binary, [*args, "--out", str(first)])
            run(binary, [*args, "--out", str(second), "--threads", "2"])
            total += check_dir(first, schemas)
            same_outputs(first, second)

        fit = json.loads((tmp / "ideal_channel" / "a" / "channel_fit.json").read_text())
        assert fit["t2_pulse_infinite"] and fit["t2_pulse_s"] is None
        assert abs(fit["m_infinity"] - 1.0) < 1e-9

        # Exported CSV waveforms load back through the pulse spec path.
        wf = tmp / "grape" / "a" / "waveform.json"
        run(binary, ["simulate", "--pulse", str(wf), "--echoes", "3", "--offsets=0", "--rf-scales", "1",
                     "--guard", "2us", "--out", str(tmp / "reload")])

        csv_wf = tmp / "grape" / "a" / "waveform.csv"
        run(binary, ["simulate", "--pulse", str(csv_wf), "--echoes", "3", "--offsets=0", "--rf-scales", "1",
                     "--guard", "2us", "--out", str(tmp / "reload_csv")])
        with (tmp / "reload" / "train.csv").open() as a, (tmp / "reload_csv" / "train.csv").open() as b:
            rows_a, rows_b = list(csv.reader(a))[1:], list(csv.reader(b))[1:]
        assert len(rows_a) == len(rows_b) == 3
        for ra, rb in zip(rows_a, rows_b):
            assert all(abs(float(x) - float(y)) < 1e-9 for x, y in zip(ra, rb)), (ra, rb)

        bad = tmp / "bad.json"
        bad.write_text("{\"dt_s\": 1e-6}")
        run(binary, ["simulate", "--pulse", str(bad), "--out", str(tmp / "bad")], expect=2)
        run(binary, ["optimize", "--on-resonance"], expect=2)
        run(binary, ["compare", "--out", str(tmp / "empty")], expect=2)
        run(binary, ["compare", "hard", "missing.json", "--cycles", "5", "--offsets=0", "--channel-offsets=0",
                     "--channel-rf-scales", "1", "--out", str(tmp / "partial")], expect=1)
        assert (tmp / "partial" / "channel_table.csv").read_text().count("\n") == 2
    print(f"checked {total} output files")


if __name__ == "__main__":
    main()
