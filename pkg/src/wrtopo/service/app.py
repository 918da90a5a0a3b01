"""HTTP service wrapping the toolkit.

One POST endpoint per verb; payloads are the JSON encodings from
wrtopo.jsonio.  Size-bound violations map to 422 with code
"size-bound", other toolkit errors to 400 with their error code.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import engine, export, jsonio, simulator
from ..complexes import verify_trace
from ..errors import DimensionTooLarge, TraceError, WrtopoError
from ..executions import view_family
from ..protocol import build_iterated, build_wr, chi_power
from . import schemas


def _build_complex(req: schemas.BuildRequest):
    if req.iterated is not None:
        it = build_iterated(req.n, req.iterated)
        payload = jsonio.complex_to_json(it.complex, req.n, carrier=it.carrier, k=it.k)
        return it.complex, payload
    if req.chromatic:
        cx = build_wr(req.n, req.n).complex
    else:
        cx = build_wr(req.n, req.l).complex
    return cx, jsonio.complex_to_json(cx, req.n)


def _collapse_trace(req: schemas.CollapseRequest):
    if req.mode == "round":
        return engine.collapse_round(req.n, req.l)
    if req.mode == "equivariant":
        return engine.equivariant_collapse_round(req.n, req.l)
    if req.mode == "full":
        return engine.full_collapse(req.n)
    if req.mode == "void":
        return engine.chromatic_collapse_void(req.n)
    if req.mode == "horn":
        return engine.chromatic_collapse_horn(req.n, req.p)
    return engine.iterated_collapse(req.n, req.k)


def create_app() -> FastAPI:
    app = FastAPI(title="wrtopo", version="0.1.0")

    @app.exception_handler(WrtopoError)
    async def toolkit_error(request: Request, exc: WrtopoError):
        status = 422 if isinstance(exc, DimensionTooLarge) else 400
        body = schemas.ErrorBody(code=exc.code, detail=str(exc))
        return JSONResponse(status_code=status, content={"error": body.model_dump()})

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/build", response_model=schemas.ComplexResponse)
    def build(req: schemas.BuildRequest):
        cx, payload = _build_complex(req)
        stats = jsonio.complex_stats(cx) if req.stats else None
        return schemas.ComplexResponse(complex=payload, stats=stats)

    @app.post("/collapse", response_model=schemas.TraceResponse)
    def collapse(req: schemas.CollapseRequest):
        trace = _collapse_trace(req)
        return schemas.TraceResponse(
            trace=jsonio.trace_to_json(trace, req.n), steps=len(trace.steps)
        )

    @app.post("/verify", response_model=schemas.VerifyResponse)
    def verify(req: schemas.VerifyRequest):
        trace = jsonio.trace_from_json(req.trace)
        try:
            verify_trace(trace)
        except TraceError as exc:
            return schemas.VerifyResponse(
                ok=False, steps=len(trace.steps), detail=f"{type(exc).__name__}: {exc}"
            )
        return schemas.VerifyResponse(ok=True, steps=len(trace.steps))

    @app.post("/simulate", response_model=schemas.SimulateResponse)
    def simulate(req: schemas.SimulateRequest):
        sched = simulator.Scheduler(
            req.scheduler.kind,
            seed=req.scheduler.seed,
            script=tuple(req.scheduler.script),
        )
        result = simulator.run(req.n, sched)
        payload = jsonio.run_result_to_json(result)
        return schemas.SimulateResponse(**payload)

    @app.post("/simulate/exhaustive", response_model=schemas.ExhaustiveResponse)
    def simulate_exhaustive(req: schemas.ExhaustiveRequest):
        profiles = simulator.run_exhaustive(req.n)
        return schemas.ExhaustiveResponse(
            profiles=[jsonio.profile_to_json(p) for p in profiles]
        )

    @app.post("/simulate/fuzz", response_model=schemas.FuzzResponse)
    def simulate_fuzz(req: schemas.FuzzRequest):
        report = simulator.fuzz(req.n, req.runs, req.seed)
        return schemas.FuzzResponse(
            runs=report.runs,
            violations=[jsonio.profile_to_json(p) for p in report.violations],
            covered=report.covered,
            total=report.total,
        )

    @app.post("/count", response_model=schemas.CountResponse)
    def count(req: schemas.CountRequest):
        profile_counts = []
        censuses = []
        for l in range(req.n + 1):
            profile_counts.append(len(view_family(req.n, l)))
            censuses.append(jsonio.complex_stats(build_wr(req.n, l).complex))
        return schemas.CountResponse(
            n=req.n, profile_counts=profile_counts, censuses=censuses
        )

    @app.post("/export", response_class=PlainTextResponse)
    def export_complex(req: schemas.ExportRequest):
        if req.complex is not None:
            cx = jsonio.complex_from_json(req.complex)
        else:
            cx, _ = _build_complex(req.build)
        text = export.to_dot(cx) if req.format == "dot" else export.to_off(cx)
        return PlainTextResponse(text)

    return app
