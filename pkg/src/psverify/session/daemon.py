"""Line-delimited JSON request/response daemon.

Each input line is one request ``{"id", "method", "params"}``; each request gets
exactly one response ``{"id", "result"}`` or ``{"id", "error": {"code", "message"}}``.
Long requests run on worker threads, so responses may arrive out of order.
"""
from __future__ import annotations

import dataclasses
import json
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, StrictInt, ValidationError

from ..deepstack import deep_call
from ..emitter import emit_theory
from ..errors import InputError
from .pipeline import Options, load_program, solve


class Request(BaseModel):
    model_config = ConfigDict(extra="forbid")
    id: StrictInt = Field(gt=0)
    method: str
    params: dict = Field(default_factory=dict)


class _Params(BaseModel):
    model_config = ConfigDict(extra="forbid")


class LoadParams(_Params):
    source: str
    file: str = "<input>"


class VerifyParams(_Params):
    program_id: str
    vc_ids: Optional[list[str]] = None


class EmitParams(_Params):
    program_id: str


class CancelParams(_Params):
    id: StrictInt


class EmptyParams(_Params):
    pass


class Diagnostic(BaseModel):
    message: str
    file: Optional[str] = None
    line: Optional[int] = None
    column: Optional[int] = None


class LoadResult(BaseModel):
    program_id: Optional[str]
    diagnostics: list[Diagnostic]


class VerdictResult(BaseModel):
    overall: Literal["unsat", "unknown"]
    per_vc: dict[str, dict[str, Any]]
    axioms_assumed: list[str]
    timings: dict[str, float]


class RpcError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


@dataclasses.dataclass
class _Loaded:
    source: str
    file: str
    program: object
    analysis: object = None


class Server:
    def __init__(self, out, options: Options | None = None, workers: int = 4):
        self.out = out
        self.options = options or Options()
        self.pool = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="rpc")
        self.write_lock = threading.Lock()
        self.state_lock = threading.Lock()
        self.seen: set[int] = set()
        self.in_flight: dict[int, threading.Event] = {}
        self.programs: dict[str, _Loaded] = {}
        self.next_program = 1
        self.stopped = False

    # ---- wire

    def send(self, rid, result=None, error: RpcError | None = None) -> None:
        msg: dict = {"id": rid}
        if error is not None:
            msg["error"] = {"code": error.code, "message": error.message}
        else:
            msg["result"] = result
        line = json.dumps(msg, sort_keys=True)
        with self.write_lock:
            self.out.write(line + "\n")
            self.out.flush()

    def handle_line(self, line: str) -> None:
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as e:
            self.send(None, error=RpcError("parse-error", f"invalid JSON: {e.msg}"))
            return
        try:
            req = Request.model_validate(raw)
        except ValidationError as e:
            rid = raw.get("id") if isinstance(raw, dict) else None
            rid = rid if isinstance(rid, int) and not isinstance(rid, bool) and rid > 0 else None
            self.send(rid, error=RpcError("parse-error", _first_error(e)))
            return
        with self.state_lock:
            if req.id in self.seen:
                dup = True
            else:
                dup = False
                self.seen.add(req.id)
        if dup:
            self.send(req.id, error=RpcError("duplicate-id", f"request id {req.id} was already used"))
            return
        handler = getattr(self, f"m_{req.method}", None)
        if handler is None:
            self.send(req.id, error=RpcError("method-not-found", f"unknown method {req.method!r}"))
            return
        if req.method in ("load", "verify", "emit_theory"):
            cancel = threading.Event()
            with self.state_lock:
                self.in_flight[req.id] = cancel
            self.pool.submit(self._run, handler, req, cancel)
        else:
            self._respond(handler, req, None)

    def _run(self, handler, req: Request, cancel: threading.Event) -> None:
        try:
            self._respond(handler, req, cancel)
        finally:
            with self.state_lock:
                self.in_flight.pop(req.id, None)

    def _respond(self, handler, req: Request, cancel) -> None:
        try:
            if cancel is not None and cancel.is_set():
                raise RpcError("cancelled", f"request {req.id} was cancelled")
            result = handler(req.params, cancel)
            if cancel is not None and cancel.is_set():
                raise RpcError("cancelled", f"request {req.id} was cancelled")
        except RpcError as e:
            self.send(req.id, error=e)
        except ValidationError as e:
            self.send(req.id, error=RpcError("invalid-params", _first_error(e)))
        except Exception as e:  # never leave a request unanswered
            self.send(req.id, error=RpcError("internal-error", f"{type(e).__name__}: {e}"))
        else:
            self.send(req.id, result)

    # ---- methods

    def _program(self, pid: str) -> _Loaded:
        with self.state_lock:
            p = self.programs.get(pid)
        if p is None:
            raise RpcError("invalid-params", f"unknown program_id {pid!r}")
        return p

    def m_status(self, params, cancel):
        EmptyParams.model_validate(params)
        with self.state_lock:
            busy = bool(self.in_flight)
        return {"state": "busy" if busy else "idle"}

    def m_load(self, params, cancel):
        p = LoadParams.model_validate(params)
        try:
            program = deep_call(load_program, p.source, p.file)
        except InputError as e:
            sp = e.span
            diag = Diagnostic(message=e.message, file=sp.file if sp else None,
                              line=sp.line if sp else None, column=sp.column if sp else None)
            return LoadResult(program_id=None, diagnostics=[diag]).model_dump()
        with self.state_lock:
            pid = f"p{self.next_program}"
            self.next_program += 1
            self.programs[pid] = _Loaded(p.source, p.file, program)
        return LoadResult(program_id=pid, diagnostics=[]).model_dump()

    def _solve(self, loaded: _Loaded, cancel, vc_ids=None):
        opts = dataclasses.replace(self.options, cancel=cancel,
                                   vc_ids=frozenset(vc_ids) if vc_ids is not None else None)
        try:
            return deep_call(solve, loaded.program, opts)
        except InputError as e:
            raise RpcError("invalid-program", str(e)) from None

    def m_verify(self, params, cancel):
        p = VerifyParams.model_validate(params)
        loaded = self._program(p.program_id)
        an = self._solve(loaded, cancel, p.vc_ids)
        if p.vc_ids is None and not an.cancelled:
            loaded.analysis = an
        v = an.verdict
        return VerdictResult(overall=v.overall, per_vc=v.per_vc, axioms_assumed=v.axioms_assumed,
                             timings=v.timings).model_dump()

    def m_emit_theory(self, params, cancel):
        p = EmitParams.model_validate(params)
        loaded = self._program(p.program_id)
        an = loaded.analysis or self._solve(loaded, cancel)
        if not an.cancelled:
            loaded.analysis = an
        return {"text": emit_theory(an, "Program")}

    def m_cancel(self, params, cancel):
        p = CancelParams.model_validate(params)
        with self.state_lock:
            ev = self.in_flight.get(p.id)
        if ev is not None:
            ev.set()
        return {"cancelled": ev is not None}

    def m_shutdown(self, params, cancel):
        EmptyParams.model_validate(params)
        self.stopped = True
        return {}

    def close(self, cancel_pending: bool) -> None:
        if cancel_pending:
            with self.state_lock:
                for ev in self.in_flight.values():
                    ev.set()
        self.pool.shutdown(wait=True)


def _first_error(e: ValidationError) -> str:
    err = e.errors()[0]
    loc = ".".join(str(x) for x in err.get("loc", ()))
    return f"{loc}: {err.get('msg')}" if loc else str(err.get("msg"))


def serve(inp, out, options: Options | None = None, workers: int = 4) -> None:
    """Answer requests from ``inp`` until ``shutdown`` or end of input."""
    server = Server(out, options, workers)
    for line in inp:
        if not line.strip():
            continue
        server.handle_line(line)
        if server.stopped:
            break
    server.close(cancel_pending=server.stopped)
