#!/usr/bin/env python3
"""Regenerate the golden replicated-session transcript.

Runs the packaged demo session script through the in-process hub and
writes the server's accepted-message log plus the resulting scene hash.
Replaying the log line by line must rebuild a scene with exactly that
hash; the sync tests assert this against the committed file.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from scenesmith.sync.sim import run_script  # noqa: E402
from scenesmith.sync.session import replay_log  # noqa: E402
from scenesmith.core.canonical import scene_hash  # noqa: E402

DATA = Path(__file__).resolve().parent.parent / "src" / "scenesmith" / "data"
SCRIPT = DATA / "sim_scripts" / "demo.txt"
OUT = DATA / "golden_session.jsonl"


def main() -> int:
    result = run_script(SCRIPT.read_text(encoding="utf-8"), session_id="golden")
    assert result.converged, "demo script did not converge"
    rebuilt = replay_log(result.log_lines)
    assert scene_hash(rebuilt) == result.authoritative_hash, "replay hash mismatch"

    header = json.dumps(
        {
            "session": "golden",
            "final_hash": result.authoritative_hash,
            "messages": len(result.log_lines),
        },
        sort_keys=True,
    )
    OUT.write_text(
        "\n".join([header, *result.log_lines]) + "\n", encoding="utf-8"
    )
    print(f"wrote {OUT} ({len(result.log_lines)} messages, hash {result.authoritative_hash[:12]}…)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
