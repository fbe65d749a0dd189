"""Randomized property audits.

Each property is a generator of instances plus a check on the instance.
Trial ``t`` of property ``p`` draws from ``make_rng(seed, crc32(p), t)``,
so a trial does not depend on which other properties were selected.
Failing instances are serialized and can be replayed from the JSON alone.
"""

import time
import zlib
from dataclasses import asdict, dataclass, field

from . import jsonio
from .base import parse_base
from .composition import canonical_comparison, check_associativity, check_units, compose_distributors, compose_spans
from .distributors import (
    check_dfib_into_product,
    check_opfib_into_product,
    check_two_sided,
    elements_span,
    is_distributor_iso,
    span_to_distributor,
)
from .errors import PreconditionViolated, RelatorsError
from .factorization import comprehensive_factorization, is_discrete_fibration, is_final
from .generators import (
    Bounds,
    gen_composable,
    gen_distributor,
    gen_functor,
    gen_groupoid,
    gen_internal_functor,
    gen_internal_groupoid,
    gen_internal_pair,
    gen_regular_epi_pair,
    gen_span,
    make_rng,
)
from .groupoid import is_eso, is_full, pi0
from .internal import (
    alan_cc_check,
    compose_internal_distributors,
    distributor_to_internal_groupoid,
    elements_span_internal,
    externalize,
    externalize_distributor,
    internal_pi0,
    internal_span_compose,
    internalize,
    internalize_distributor,
    internalize_functor,
    is_internal_dfib,
    is_internal_final,
    support,
    verify_last_lemma,
)


@dataclass(frozen=True)
class AuditConfig:
    seed: int = 0
    trials: int = 200
    max_objects: int = 4
    max_arrows_per_hom: int = 4
    max_fiber: int = 4
    base: str = "finset"
    properties: tuple = ()
    timings: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise PreconditionViolated("trials must be at least 1")
        if min(self.max_objects, self.max_arrows_per_hom, self.max_fiber) < 1:
            raise PreconditionViolated("size bounds must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise PreconditionViolated("seed must be a 64-bit unsigned integer")
        parse_base(self.base)
        unknown = [p for p in self.properties if p not in PROPERTIES]
        if unknown:
            raise PreconditionViolated(f"unknown properties: {', '.join(unknown)}")

    @property
    def bounds(self):
        return Bounds(
            max_objects=self.max_objects,
            max_group_order=self.max_arrows_per_hom,
            max_fiber=self.max_fiber,
        )

    def selected(self):
        return tuple(self.properties) or tuple(PROPERTIES)


@dataclass
class PropertyResult:
    passed: int = 0
    failed: int = 0
    counterexample: dict = None
    seconds: float = 0.0


@dataclass
class AuditReport:
    config: AuditConfig
    results: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(r.failed == 0 for r in self.results.values())

    def to_json(self):
        props = {}
        for name, r in sorted(self.results.items()):
            entry = {"passed": r.passed, "failed": r.failed, "counterexample": r.counterexample}
            if self.config.timings:
                entry["seconds"] = round(r.seconds, 6)
            props[name] = entry
        config = asdict(self.config)
        config["properties"] = list(self.config.selected())
        del config["timings"]
        return {"config": config, "ok": self.ok, "properties": props}


@dataclass(frozen=True)
class Property:
    """``generate(rng, cfg)`` returns a tuple of structures; ``check(*instance)`` returns ``(ok, detail)``."""

    generate: object
    check: object
    description: str


# ------------------------------------------------------------------ checks


def _final_iff_full_eso(F):
    final, full, eso = bool(is_final(F)), bool(is_full(F)), bool(is_eso(F))
    return final == (full and eso), {"final": final, "full": full, "eso": eso}


def _two_sided(span):
    flags = [bool(check_two_sided(span)), bool(check_dfib_into_product(span)), bool(check_opfib_into_product(span))]
    return len(set(flags)) == 1, {"two_sided": flags[0], "dfib": flags[1], "opfib": flags[2]}


def _factorization(F):
    r = comprehensive_factorization(F)
    composite = r.final_part.then(r.dfib_part)
    same = list(composite.obj_map) == list(F.obj_map) and list(composite.arr_map) == list(F.arr_map)
    final, dfib = bool(is_final(r.final_part)), bool(is_discrete_fibration(r.dfib_part))
    return same and final and dfib, {"composite": same, "final": final, "dfib": dfib}


def _round_trip(S):
    R = span_to_distributor(elements_span(S))
    v = is_distributor_iso(R, S, list(R.labels))
    return v.ok, v.witness


def _comparison(S, T):
    return True, canonical_comparison(S, T).verdict


def _associativity(S, T, U):
    v = check_associativity(S, T, U)
    return v.ok, None if v.ok else v.witness


def _units(S):
    v = check_units(S)
    return v.ok, None if v.ok else v.witness


def _arrow_signature(G, legs):
    return sorted((G.dom[f], G.cod[f], *(leg.arr_map[f] for leg in legs)) for f in G.arrows)


def _internal_coherence(G, F, S, T):
    """Every internal construction over finite sets against its external twin."""
    out = {}
    C = internalize(G)
    out["roundtrip"] = externalize(C) == G
    q = internal_pi0(C).q
    blocks = {}
    for x in G.objects:
        blocks.setdefault(q(x), []).append(x)
    out["pi0"] = sorted(blocks.values()) == sorted(map(list, pi0(G)))
    IF = internalize_functor(F)
    out["dfib"] = bool(is_internal_dfib(IF)) == bool(is_discrete_fibration(F))
    out["final"] = bool(is_internal_final(IF)) == bool(is_final(F))

    IS, IT = internalize_distributor(S), internalize_distributor(T)
    E = distributor_to_internal_groupoid(IS)
    ext = elements_span(S)
    EG = externalize(E.groupoid)
    internal_sig = sorted(
        (EG.dom[f], EG.cod[f], E.L.F1(f), E.R.F1(f)) for f in EG.arrows
    )
    out["elements"] = EG.n_objects == ext.apex.n_objects and internal_sig == _arrow_signature(
        ext.apex, (ext.left, ext.right)
    )

    tensor = compose_internal_distributors(IS, IT)
    sizes_int = externalize_distributor(tensor.distributor).sizes()
    out["tensor"] = sizes_int == compose_distributors(S, T).sizes()

    dia = internal_span_compose(elements_span_internal(IS), elements_span_internal(IT))
    ext_dia = compose_spans(ext, elements_span(T))
    out["span_compose"] = (dia.apex.C0.n, dia.apex.C1.n) == (ext_dia.apex.n_objects, ext_dia.apex.n_arrows)
    return all(out.values()), out


def _last_lemma(S, T):
    report = verify_last_lemma(S, T, strict=False)
    return report.ok, report.to_json()


def _alan_cc(F):
    verdicts = alan_cc_check(F)
    return len(set(verdicts)) == 1, {"verdicts": list(verdicts)}


def _support(C):
    """Recomputed directly: pairs ``(d f, c f)`` against pairs in the same component."""
    support(C)
    image = {(C.d(f), C.c(f)) for f in C.C1.points}
    q = internal_pi0(C).q
    kernel = {(x, y) for x in C.C0.points for y in C.C0.points if q(x) == q(y)}
    return image == kernel, {"image": len(image), "kernel_pair": len(kernel)}


def _regular_epi_stable(f, g):
    base = f.dom.base
    pb = base.pullback(f, g)
    ok = base.is_regular_epi(pb.p2)
    return ok, {"pullback_points": pb.obj.n}


# -------------------------------------------------------------- generators


def _cfg_base(cfg):
    return parse_base(cfg.base)


PROPERTIES = {
    "final_iff_full_eso": Property(
        lambda rng, cfg: (gen_functor(rng, bounds=cfg.bounds),),
        _final_iff_full_eso,
        "is_final agrees with is_full and is_eso",
    ),
    "two_sided_dfib_opfib": Property(
        lambda rng, cfg: (gen_span(rng, cfg.bounds),),
        _two_sided,
        "two-sided, discrete fibration and discrete opfibration verdicts coincide",
    ),
    "factorization": Property(
        lambda rng, cfg: (gen_functor(rng, bounds=cfg.bounds),),
        _factorization,
        "the factorization composes back to the input, final then discrete fibration",
    ),
    "round_trip": Property(
        lambda rng, cfg: (gen_distributor(rng, bounds=cfg.bounds),),
        _round_trip,
        "distributor -> elements span -> distributor is an isomorphism",
    ),
    "comparison": Property(
        lambda rng, cfg: tuple(gen_composable(rng, 2, cfg.bounds)),
        _comparison,
        "reflected span composite is isomorphic to the coend composite",
    ),
    "associativity": Property(
        lambda rng, cfg: tuple(gen_composable(rng, 3, cfg.bounds)),
        _associativity,
        "composition of distributors is associative up to the canonical map",
    ),
    "units": Property(
        lambda rng, cfg: (gen_distributor(rng, bounds=cfg.bounds),),
        _units,
        "hom distributors are two-sided units",
    ),
    "internal_coherence": Property(
        lambda rng, cfg: _gen_coherence(rng, cfg.bounds),
        _internal_coherence,
        "internal constructions over finite sets match the external ones",
    ),
    "last_lemma": Property(
        lambda rng, cfg: gen_internal_pair(rng, _cfg_base(cfg), cfg.bounds),
        _last_lemma,
        "both claims hold and the second factor is a discrete fibration",
    ),
    "alan_cc": Property(
        lambda rng, cfg: (gen_internal_functor(rng, _cfg_base(cfg), bounds=cfg.bounds),),
        _alan_cc,
        "the three joint-pullback comparisons agree",
    ),
    "support_kernel_pair": Property(
        lambda rng, cfg: (gen_internal_groupoid(rng, _cfg_base(cfg), cfg.bounds),),
        _support,
        "the support of an internal groupoid is the kernel pair of its components",
    ),
    "regular_epi_stable": Property(
        lambda rng, cfg: gen_regular_epi_pair(rng, _cfg_base(cfg), cfg.bounds),
        _regular_epi_stable,
        "regular epimorphisms are stable under pullback",
    ),
}


def _gen_coherence(rng, bounds):
    G = gen_groupoid(rng, bounds)
    F = gen_functor(rng, bounds=bounds)
    S, T = gen_composable(rng, 2, bounds)
    return G, F, S, T


def property_key(name):
    return zlib.crc32(name.encode())


# ------------------------------------------------------------ serialization


def _instance_to_json(instance):
    out = []
    for x in instance:
        if hasattr(x, "dom") and hasattr(x, "values") and hasattr(x, "cod") and not hasattr(x, "arrows"):
            out.append(
                {
                    "kind": "base_morphism",
                    **jsonio.base_to_json(x.dom.base),
                    "dom": jsonio.object_to_json(x.dom),
                    "cod": jsonio.object_to_json(x.cod),
                    "values": x.values.tolist(),
                }
            )
        else:
            out.append(jsonio.to_json(x))
    return out


def _instance_from_json(docs):
    out = []
    for doc in docs:
        if doc.get("kind") == "base_morphism":
            base = jsonio.base_from_json(doc)
            dom = jsonio.object_from_json(base, doc["dom"])
            cod = jsonio.object_from_json(base, doc["cod"])
            out.append(base.morphism(dom, cod, doc["values"]))
        else:
            out.append(jsonio.load(doc)[1])
    return out


def _run_check(prop, instance):
    try:
        ok, detail = prop.check(*instance)
    except RelatorsError as exc:
        ok, detail = False, {"error": type(exc).__name__, "message": str(exc), **jsonio.jsonable(getattr(exc, "witness", {}))}
    return bool(ok), jsonio.jsonable(detail)


def run_property(name, cfg, trials=None):
    prop = PROPERTIES[name]
    key = property_key(name)
    result = PropertyResult()
    start = time.perf_counter()
    for t in range(cfg.trials if trials is None else trials):
        rng = make_rng(cfg.seed, key, t)
        instance = prop.generate(rng, cfg)
        ok, detail = _run_check(prop, instance)
        if ok:
            result.passed += 1
            continue
        result.failed += 1
        if result.counterexample is None:
            result.counterexample = {
                "property": name,
                "trial": t,
                "rng_key": [cfg.seed, key, t],
                "detail": detail,
                "instance": _instance_to_json(instance),
            }
    result.seconds = time.perf_counter() - start
    return result


def run_audit(cfg):
    report = AuditReport(cfg)
    for name in cfg.selected():
        report.results[name] = run_property(name, cfg)
    return report


def replay(counterexample):
    """Re-run the check on a serialized counterexample; returns ``(ok, detail)``."""
    prop = PROPERTIES[counterexample["property"]]
    instance = _instance_from_json(counterexample["instance"])
    return _run_check(prop, instance)


def check_instance(name, instance):
    """Run one property's check on explicit structures (used by tests and replays)."""
    return _run_check(PROPERTIES[name], instance)


__all__ = [
    "AuditConfig",
    "AuditReport",
    "PROPERTIES",
    "check_instance",
    "replay",
    "run_audit",
    "run_property",
]
