"""Evaluate a scenario into a JSON-ready report, and render it as text."""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .cardinality import FormalCardinality
from .cohom import CohomologyReport, cocycle_oracle, cohomology
from .errors import EngineError, SizeCapExceededError
from .formulas import (
    EulerContext,
    LedgerRow,
    case_bound,
    chi2_exact_finite,
    chi2_upper_bound,
    dimension_defect_terms,
    epsilon_of,
    etale_cards,
    etale_chi,
    mu_p_dimension,
    presentation_bounds,
    row_from_module,
    tate_rhs,
    whatif_enlarge,
)
from .galmod import COMPLEX, GaloisModule, full_centralizer_dim
from .numfield import bound_exponent_S_p, poly_to_str, split_prime
from .scenario import Scenario

DISCREPANCY = "DISCREPANCY"


class Warnings:
    def __init__(self):
        self.items: list[dict] = []

    def add(self, code: str, message: str) -> None:
        entry = {"code": code, "message": message}
        if entry not in self.items:
            self.items.append(entry)

    @property
    def has_discrepancy(self) -> bool:
        return any(w["code"] == DISCREPANCY for w in self.items)


def _card(x: FormalCardinality) -> dict:
    return x.to_json()


def _is_integral(x: FormalCardinality) -> bool:
    return all(e >= 0 for e in x.exponents.values())


def _place_label(sc: Scenario, place) -> str:
    return "complex" if place == COMPLEX else f"real:{sc.group.labels[place]}"


def _engine_pair(M: GaloisModule) -> tuple[CohomologyReport, CohomologyReport | None]:
    snf = cohomology(M)
    oracle = None
    if M.module.is_elementary:
        try:
            oracle = cocycle_oracle(M)
        except SizeCapExceededError:
            oracle = None
    if oracle is not None and oracle.dims != snf.dims:
        raise EngineError(f"engines disagree on {M.name}: snf {snf.dims} vs fp-linear {oracle.dims}")
    return snf, oracle


def classify(M: GaloisModule, S_has_finite: bool) -> str:
    if M.is_trivial():
        return "trivial_S_finite_nonempty" if S_has_finite else "trivial_S_finite_empty"
    if M.module.rank == 1 and M.cyclo_char is not None:
        chi = np.array(M.cyclo_char) % M.p
        if np.array_equal(M.action[:, 0, 0] % M.p, chi):
            return "mu_p_nontrivial"
    return "nontrivial_not_mu_p"


class Evaluator:
    def __init__(self, sc: Scenario):
        self.sc = sc
        self.warn = Warnings()
        self._cohom: dict[str, tuple[CohomologyReport, CohomologyReport | None]] = {}

    def ctx(self, M: GaloisModule) -> EulerContext:
        sc = self.sc
        return EulerContext(sc.field, sc.S, M, sc.quotient_is_full, sc.faithful_quotient)

    def engines(self, M: GaloisModule):
        if M.name not in self._cohom:
            self._cohom[M.name] = _engine_pair(M)
        return self._cohom[M.name]

    def check_index(self, primes) -> None:
        for p in sorted(set(primes)):
            split = split_prime(self.sc.field, p)
            if split.index_warning:
                self.warn.add(
                    "index_warning",
                    f"p={p}: Z[x]/(f) is not maximal at p; splitting {list(split.factors)} may be wrong",
                )

    # -- per module ---------------------------------------------------------

    def module_results(self, M: GaloisModule) -> dict:
        sc = self.sc
        ctx = self.ctx(M)
        out: dict[str, Any] = {}
        if sc.wants("tate") or sc.wants("bound"):
            out["tate_rhs"] = _card(tate_rhs(ctx))
        if sc.wants("bound"):
            out["bound_factor_S_p"] = _card(bound_exponent_S_p(sc.field, sc.S, M.p, ctx.log_order))
            out["epsilon"] = _card(epsilon_of(ctx))
            out["chi2_bound"] = _card(chi2_upper_bound(ctx))
        if sc.quotient_is_full and (sc.wants("exact") or sc.wants("etale")):
            snf, oracle = self.engines(M)
            coh = {"snf": snf.to_json()}
            if oracle is not None:
                coh["fp_linear"] = oracle.to_json()
                coh["engines_agree"] = True
            out["cohomology"] = coh
            if sc.wants("exact"):
                cmp = chi2_exact_finite(ctx, snf)
                out["chi2_exact"] = _card(cmp.lhs)
                out["tight"] = cmp.tight
                if not cmp.lhs <= cmp.rhs_bound:
                    self.warn.add("BOUND_VIOLATED", f"{M.name}: chi2 {cmp.lhs} exceeds bound {cmp.rhs_bound}")
        if sc.wants("etale"):
            out["etale_chi"] = _card(etale_chi(ctx))
            if sc.quotient_is_full:
                cards = etale_cards(ctx, self.engines(M)[0])
                out["etale_cards"] = cards.to_json()
                for i in range(4):
                    c = cards.degree(i)
                    if c.kind == "Exact" and not _is_integral(c.value):
                        self.warn.add(
                            "NONINTEGRAL_CARDINALITY",
                            f"{M.name}: h{i}_et = {c.value} is not an integer; Gamma is probably not all of G_K,S",
                        )
        if sc.wants("whatif") and "whatif" in sc.raw:
            extra = sc.raw["whatif"]["extra_S"]
            self.check_index(extra)
            w = whatif_enlarge(ctx, extra)
            out["whatif"] = {"S": w.S.to_json(), "chi2_bound": _card(w.bound)}
        self.compare_claims(M, out)
        return out

    def compare_claims(self, M: GaloisModule, out: dict) -> None:
        claims = self.sc.raw.get("claims", {}).get("modules", {}).get(M.name)
        if not claims:
            return
        block = {}
        for key, computed in (("chi2", out.get("chi2_exact")), ("chi2_bound", out.get("chi2_bound"))):
            if key in claims and computed is not None:
                claimed = FormalCardinality.from_json(claims[key]).to_json()
                agree = claimed == computed
                block[key] = {"claimed": claimed, "computed": computed, "agree": agree}
                if not agree:
                    self.warn.add(DISCREPANCY, f"{M.name}: {key} computed {computed}, published {claimed}")
        if "h2_dim" in claims and "cohomology" in out:
            snf = out["cohomology"]["snf"]
            computed = snf["dims"][2] if "dims" in snf else None
            engines = {"snf": computed}
            if "fp_linear" in out["cohomology"]:
                engines["fp_linear"] = out["cohomology"]["fp_linear"]["dims"][2]
            agree = computed == claims["h2_dim"]
            block["h2_dim"] = {"claimed": claims["h2_dim"], "computed": engines, "agree": agree}
            if not agree:
                self.warn.add(DISCREPANCY, f"{M.name}: dim h2 computed {computed}, published {claims['h2_dim']}")
        out["claims"] = block

    # -- ledger ---------------------------------------------------------------

    def mu_p_dim(self, p: int) -> int:
        given = self.sc.raw.get("ledger", {}).get("mu_p_in_K", {})
        if str(p) in given:
            return int(given[str(p)])
        dim = mu_p_dimension(self.sc.field, p)
        if dim is None:
            raise EngineError(f"cannot decide whether mu_{p} lies in K; give ledger.mu_p_in_K")
        return dim

    def ledger(self) -> dict | None:
        sc = self.sc
        spec = sc.raw.get("ledger", {})
        if sc.quotient_is_full:
            d = sc.group.minimal_generators()
        elif "d" in spec:
            d = spec["d"]
        else:
            self.warn.add("LEDGER_SKIPPED", "no d(G): set quotient_is_full or ledger.d")
            return None
        primes = set(spec.get("primes", [M.p for M in sc.modules]))
        rows: list[LedgerRow] = []
        if sc.quotient_is_full:
            for M in sc.modules:
                if M.p in primes and M.module.is_elementary:
                    cls = classify(M, sc.S.has_finite)
                    rows.append(row_from_module(M.name, M, d, self.engines(M)[0], cls == "mu_p_nontrivial"))
        for r in spec.get("extra_rows", []):
            rows.append(LedgerRow(r["module"], r["p"], r["h1"], r["h2"], r["dim"], r["trivial"], d, "supplied", r.get("mu_p", False)))
        self.check_index(primes)
        ledger = presentation_bounds(sc.field, sc.S, rows, d)
        out = ledger.to_json()
        for row, js in zip(ledger.rows, out["rows"]):
            cls = row.classification(sc.S)
            mu = self.mu_p_dim(row.p) if cls == "trivial_S_finite_empty" else None
            bound = case_bound(sc.field, cls, mu)
            js["classification"] = cls
            js["case_bound"] = bound
            js["r_minus_d"] = row.r - d
            if row.r - d > bound:
                self.warn.add(
                    "CASE_BOUND_EXCEEDED",
                    f"{row.module_id} (p={row.p}): r - d = {row.r - d} > {cls} bound {bound}",
                )
        if ledger.violation:
            self.warn.add("LEDGER_VIOLATION", f"sup r - d = {ledger.r_minus_d} > R(K) - gamma = {ledger.rhs_bound}")
        self.claimed_ledger(ledger, out)
        return out

    def claimed_ledger(self, ledger, out: dict) -> None:
        claims = self.sc.raw.get("claims", {})
        mods = claims.get("modules", {})
        swapped = []
        for row in ledger.rows:
            h2 = mods.get(row.module_id, {}).get("h2_dim")
            if h2 is not None and row.source == "computed":
                swapped.append(LedgerRow(row.module_id, row.p, row.h1, h2, row.dim, row.trivial, row.d, "published", row.mu_p))
            else:
                swapped.append(row)
        if "r_minus_d" not in claims and all(a is b for a, b in zip(swapped, ledger.rows)):
            return
        alt = presentation_bounds(self.sc.field, self.sc.S, swapped, ledger.d)
        block = {"sup_r_with_published_h2": alt.sup_r, "r_minus_d_with_published_h2": alt.r_minus_d}
        if "r_minus_d" in claims:
            block["r_minus_d_published"] = claims["r_minus_d"]
            block["agree"] = claims["r_minus_d"] == ledger.r_minus_d
            if not block["agree"]:
                self.warn.add(
                    DISCREPANCY,
                    f"ledger: r - d computed {ledger.r_minus_d}, published {claims['r_minus_d']}",
                )
        out["published"] = block

    # -- defect ---------------------------------------------------------------

    def defect(self) -> dict | None:
        sc = self.sc
        if sc.defect_rep is None:
            return None
        rep = sc.defect_rep
        h0, terms = dimension_defect_terms(rep, sc.places, sc.defect_abs_irred)
        if sc.defect_abs_irred:
            centralizer = full_centralizer_dim(rep)
            if centralizer != 1:
                self.warn.add(
                    "ABS_IRREDUCIBILITY_UNCONFIRMED",
                    f"asserted absolutely irreducible but the commutant over F_{rep.p} has dim {centralizer}",
                )
        return {
            "n": rep.n,
            "p": rep.p,
            "h0_ad": h0,
            "archimedean": [{"place": _place_label(sc, c), "dim": t} for c, t in zip(sc.places, terms)],
            "defect": h0 - sum(terms),
        }

    # -- whole scenario -------------------------------------------------------

    def run(self) -> dict:
        sc = self.sc
        K = sc.field
        self.check_index(set(sc.s_primes) | {M.p for M in sc.modules})
        results: dict[str, Any] = {"modules": {M.name: self.module_results(M) for M in sc.modules}}
        if sc.wants("ledger") and (sc.modules or "ledger" in sc.raw):
            ledger = self.ledger()
            if ledger is not None:
                results["ledger"] = ledger
        if sc.wants("defect"):
            defect = self.defect()
            if defect is not None:
                results["defect"] = defect
        G = sc.group
        return {
            "scenario_id": sc.id,
            "field": {
                "poly": poly_to_str(K.min_poly),
                "coefficients": list(K.min_poly),
                "signature": list(K.signature),
                "name": K.name,
            },
            "S": sc.S.to_json(),
            "group": {"order": G.order, "abelianization": G.abelianization()},
            "real_places": [_place_label(sc, c) for c in sc.places],
            "flags": {"quotient_is_full": sc.quotient_is_full, "faithful_quotient": sc.faithful_quotient},
            "module_summary": [
                {
                    "name": M.name,
                    "p": M.p,
                    "exponents": list(M.module.exponents),
                    "trivial": M.is_trivial(),
                    "classification": classify(M, sc.S.has_finite),
                }
                for M in sc.modules
            ],
            "results": results,
            "warnings": self.warn.items,
        }


def evaluate(sc: Scenario) -> dict:
    return Evaluator(sc).run()


def dumps(reports: list[dict]) -> str:
    return json.dumps(reports, sort_keys=True, indent=2) + "\n"


def _fmt_card(d: dict) -> str:
    if not d:
        return "1"
    return " * ".join(f"{p}^{e}" for p, e in sorted(d.items(), key=lambda kv: int(kv[0])))


def _fmt_vob(v: dict) -> str:
    if v["kind"] == "Exact":
        return _fmt_card(v["value"])
    if v["kind"] == "UpperBound":
        return f"<= {_fmt_card(v['upper'])}"
    return f"[{_fmt_card(v['lower'])}, {_fmt_card(v['upper'])}]"


def render_text(report: dict) -> str:
    lines = [f"== {report['scenario_id']} =="]
    f = report["field"]
    lines.append(f"field  {f['name']}  f = {f['poly']}  (r1, r2) = {tuple(f['signature'])}")
    fin = ", ".join(f"p={p}#{i}" for p, i in report["S"]["finite"]) or "none"
    lines.append(f"S      archimedean + finite: {fin}")
    lines.append(f"Gamma  order {report['group']['order']}, abelianization {report['group']['abelianization']}")
    res = report["results"]
    for name, m in res["modules"].items():
        lines.append(f"-- module {name}")
        for key in ("tate_rhs", "bound_factor_S_p", "epsilon", "chi2_bound", "chi2_exact", "etale_chi"):
            if key in m:
                lines.append(f"   {key:<17}{_fmt_card(m[key])}")
        if "tight" in m:
            lines.append(f"   {'tight':<17}{m['tight']}")
        if "cohomology" in m:
            coh = m["cohomology"]
            engines = f"snf {coh['snf'].get('dims') or [_fmt_card(o) for o in coh['snf']['orders']]}"
            if "fp_linear" in coh:
                engines += f", fp-linear {coh['fp_linear']['dims']}"
            lines.append(f"   {'h0,h1,h2':<17}{engines}")
        if "etale_cards" in m:
            cards = ", ".join(f"{k}={_fmt_vob(v)}" for k, v in sorted(m["etale_cards"].items()))
            lines.append(f"   {'etale':<17}{cards}")
        if "whatif" in m:
            lines.append(f"   {'whatif bound':<17}{_fmt_card(m['whatif']['chi2_bound'])}")
        for key, c in m.get("claims", {}).items():
            mark = "ok" if c["agree"] else "DIFFERS"
            lines.append(f"   published {key}: {c['claimed']} vs computed {c['computed']} [{mark}]")
    if "ledger" in res:
        L = res["ledger"]
        lines.append("-- presentation ledger")
        for r in L["rows"]:
            lines.append(
                f"   {r['module']:<10} p={r['p']} xi={r['xi']} h1={r['h1']} h2={r['h2']} dim={r['dim']}"
                f"  r={r['r']}  r-d={r['r_minus_d']} (case bound {r['case_bound']})"
            )
        pres = L["presentation"]
        lines.append(
            f"   d={L['d']}  sup r - d = {L['r_minus_d']}  R(K) - gamma = {L['rhs_bound']}"
            f"  presentation ({pres['generators']}, {pres['relations']})"
        )
        if "published" in L:
            lines.append(f"   with published h2: {L['published']}")
    if "defect" in res:
        D = res["defect"]
        terms = " + ".join(str(t["dim"]) for t in D["archimedean"]) or "0"
        lines.append(f"-- dimension defect  {D['h0_ad']} - ({terms}) = {D['defect']}")
    for w in report["warnings"]:
        lines.append(f"!! {w['code']}: {w['message']}")
    return "\n".join(lines) + "\n"
