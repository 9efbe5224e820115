"""Client side of the line-delimited daemon protocol, for tests."""
from __future__ import annotations

import json
import subprocess
import sys
import threading


class DaemonProcess:
    def __init__(self, *flags: str):
        self.proc = subprocess.Popen([sys.executable, "-m", "psverify", "--daemon", *flags],
                                     stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, bufsize=1)
        self.responses: list[dict] = []
        self.arrived = threading.Condition()
        self.reader = threading.Thread(target=self._read, daemon=True)
        self.reader.start()

    def _read(self):
        for line in self.proc.stdout:
            with self.arrived:
                self.responses.append(json.loads(line))
                self.arrived.notify_all()

    def send_raw(self, line: str) -> None:
        self.proc.stdin.write(line + "\n")
        self.proc.stdin.flush()

    def send(self, rid, method: str, **params) -> None:
        self.send_raw(json.dumps({"id": rid, "method": method, "params": params}))

    def wait_for(self, rid, timeout: float = 60.0) -> dict:
        with self.arrived:
            ok = self.arrived.wait_for(lambda: any(r.get("id") == rid for r in self.responses), timeout)
            assert ok, f"no response for {rid}"
            return next(r for r in self.responses if r.get("id") == rid)

    def call(self, rid, method: str, **params) -> dict:
        self.send(rid, method, **params)
        return self.wait_for(rid)

    def close(self, timeout: float = 60.0) -> int:
        self.proc.stdin.close()
        code = self.proc.wait(timeout)
        self.reader.join(timeout)
        return code
